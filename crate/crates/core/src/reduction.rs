//! Reduction from general colorings to special colorings.
//!
//! A general coloring of the base simplex is padded up to a special coloring
//! of a larger simplex: every kept class grows to `r−1` vertices and one
//! class stays a singleton. The base simplex is the front face of the larger
//! one, and the new vertices are appended in batches of `r−1`, batch `s`
//! mapped to the basis vector `e_{d+s}`. The lifted map is the affine
//! extension, so it agrees with the original map on the front face.
//!
//! A witness for the lifted instance is pulled back one batch at a time,
//! top batch first. Each layer checks that some face avoids the batch, that
//! the common point has a zero top coordinate, and that no face puts weight
//! on the batch. Any failure is reported as [`ReductionError::AssertionBreach`]
//! and never repaired.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::model::{
    validate_coloring, Coloring, ColoringKind, Instance, ModelError, RainbowFace, TverbergWitness,
    WitnessError,
};
use crate::rational::Rational;

/// Which of the three per-layer assertions failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerCheck {
    /// Some face must avoid the `r−1` batch vertices.
    UntouchedFace,
    /// The common point's top coordinate must be exactly zero.
    TopCoordinate,
    /// Each face's weight on the batch must be exactly zero.
    BatchMass,
    /// Dropping the batch must leave a valid witness one layer down.
    Restriction,
}

impl fmt::Display for LayerCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LayerCheck::UntouchedFace => "untouched face",
            LayerCheck::TopCoordinate => "zero top coordinate",
            LayerCheck::BatchMass => "zero batch mass",
            LayerCheck::Restriction => "restricted witness",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("coloring is not general: {0}")]
    InvalidColoring(String),
    #[error("coloring does not have the required shape: {0}")]
    ShapeMismatch(String),
    #[error("plan does not match instance: {0}")]
    PlanMismatch(String),
    #[error("lifted witness is invalid for the lifted instance: {0}")]
    LiftedWitnessInvalid(WitnessError),
    #[error("assertion breach at layer {layer} ({check}): {detail}")]
    AssertionBreach {
        layer: usize,
        check: LayerCheck,
        detail: String,
    },
    #[error("pulled-back witness failed verification: {0}")]
    FinalVerification(WitnessError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    /// One vertex moved out of a full class into a new singleton class.
    SplitSingleton,
    /// `q` vertices moved out of one full class into a new class of size `q`.
    SplitChunk(usize),
    /// One vertex from each of two full classes, forming a new class of two.
    SplitTwoClasses,
    /// Two vertices of one full class, each becoming its own new singleton.
    SplitTwoSingletons,
    /// Any general coloring; delegates to [`plan_lift`].
    GeneralChain,
}

/// One layer of a lift: `r−1` new vertices mapped to one new axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftStep {
    /// `(class, vertices added to it in this layer)`, by class index.
    pub paddings: Vec<(usize, usize)>,
    pub fresh_class_created: bool,
    pub batch: Vec<usize>,
    /// 1-based coordinate index the batch maps to.
    pub target_axis: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftPlan {
    base_d: usize,
    base_r: usize,
    original_class_sizes: Vec<usize>,
    steps: Vec<LiftStep>,
    final_d: usize,
    final_n: usize,
    // class of each appended vertex, in append order
    new_vertex_classes: Vec<usize>,
    fresh_class: Option<usize>,
}

impl LiftPlan {
    pub fn base_d(&self) -> usize {
        self.base_d
    }

    pub fn base_r(&self) -> usize {
        self.base_r
    }

    pub fn original_class_sizes(&self) -> &[usize] {
        &self.original_class_sizes
    }

    pub fn steps(&self) -> &[LiftStep] {
        &self.steps
    }

    pub fn final_d(&self) -> usize {
        self.final_d
    }

    pub fn final_n(&self) -> usize {
        self.final_n
    }

    pub fn final_vertex_count(&self) -> usize {
        self.final_n + 1
    }

    pub fn original_vertex_count(&self) -> usize {
        self.original_class_sizes.iter().sum()
    }

    pub fn fresh_class(&self) -> Option<usize> {
        self.fresh_class
    }

    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn lifted_class_sizes(&self) -> Vec<usize> {
        let mut sizes = self.original_class_sizes.clone();
        if let Some(fresh) = self.fresh_class {
            sizes.resize(fresh + 1, 0);
        }
        for &class in &self.new_vertex_classes {
            sizes[class] += 1;
        }
        sizes
    }

    /// Plain-text table of class sizes before and after the lift, followed
    /// by one line per layer.
    pub fn summary(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        if self.is_identity() {
            let _ = writeln!(
                out,
                "identity plan: coloring is already special (d={}, r={}, N={})",
                self.base_d, self.base_r, self.final_n
            );
            return out;
        }
        let _ = writeln!(
            out,
            "lift plan: d={} r={} -> D={} (N={}), {} layer(s), {} new vertices",
            self.base_d,
            self.base_r,
            self.final_d,
            self.final_n,
            self.steps.len(),
            self.new_vertex_classes.len()
        );
        let _ = writeln!(out, "{:<8}{:>8}{:>8}", "class", "before", "after");
        let after = self.lifted_class_sizes();
        for (class, size) in after.iter().enumerate() {
            let before = self
                .original_class_sizes
                .get(class)
                .map_or("-".to_string(), ToString::to_string);
            let marker = if Some(class) == self.fresh_class { "  fresh" } else { "" };
            let _ = writeln!(out, "{:<8}{:>8}{:>8}{marker}", format!("C{class}"), before, size);
        }
        for (index, step) in self.steps.iter().enumerate() {
            let padding = step
                .paddings
                .iter()
                .map(|(class, count)| format!("C{class}+{count}"))
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(
                out,
                "layer {}: batch {:?} -> e{}  [{padding}]",
                index + 1,
                step.batch,
                step.target_axis
            );
        }
        out
    }
}

/// Pads every class except `keep` up to `r−1`. With `keep == None` a fresh
/// singleton class is appended and kept instead.
fn padded_plan(coloring: &Coloring, d: usize, r: usize, keep: Option<usize>) -> LiftPlan {
    let sizes = coloring.class_sizes();
    let n = coloring.num_vertices();
    let mut new_vertex_classes = Vec::new();
    for (class, &size) in sizes.iter().enumerate() {
        if Some(class) != keep {
            new_vertex_classes.extend(std::iter::repeat_n(class, r - 1 - size));
        }
    }
    let fresh_class = keep.is_none().then_some(sizes.len());
    if let Some(fresh) = fresh_class {
        new_vertex_classes.push(fresh);
    }
    debug_assert_eq!(new_vertex_classes.len() % (r - 1), 0);

    let steps = new_vertex_classes
        .chunks(r - 1)
        .enumerate()
        .map(|(index, chunk)| {
            let start = n + index * (r - 1);
            let mut paddings = BTreeMap::new();
            for &class in chunk {
                *paddings.entry(class).or_insert(0) += 1;
            }
            LiftStep {
                fresh_class_created: fresh_class.is_some_and(|f| chunk.contains(&f)),
                paddings: paddings.into_iter().collect(),
                batch: (start..start + chunk.len()).collect(),
                target_axis: d + index + 1,
            }
        })
        .collect::<Vec<_>>();
    let final_d = d + steps.len();
    LiftPlan {
        base_d: d,
        base_r: r,
        original_class_sizes: sizes,
        final_n: (final_d + 1) * (r - 1),
        final_d,
        steps,
        new_vertex_classes,
        fresh_class,
    }
}

/// Lift plan for any general coloring: identity when already special,
/// otherwise a fresh singleton class plus padding of every original class.
pub fn plan_lift(coloring: &Coloring, d: usize, r: usize) -> Result<LiftPlan, ReductionError> {
    match validate_coloring(coloring, r, d) {
        ColoringKind::Invalid(reason) => Err(ReductionError::InvalidColoring(reason)),
        ColoringKind::Special => Ok(LiftPlan {
            base_d: d,
            base_r: r,
            original_class_sizes: coloring.class_sizes(),
            steps: Vec::new(),
            final_d: d,
            final_n: (d + 1) * (r - 1),
            new_vertex_classes: Vec::new(),
            fresh_class: None,
        }),
        ColoringKind::General => Ok(padded_plan(coloring, d, r, None)),
    }
}

fn sorted_profile(mut sizes: Vec<usize>) -> Vec<usize> {
    sizes.sort_unstable();
    sizes
}

fn first_class_of_size(sizes: &[usize], size: usize, skip: &[usize]) -> Option<usize> {
    (0..sizes.len()).find(|c| sizes[*c] == size && !skip.contains(c))
}

/// The single-step (or, for `SplitTwoSingletons`, two-step) plans of the
/// individual splitting moves. Each keeps one existing singleton class and
/// pads every other class to `r−1`.
pub fn named_transform(
    kind: TransformKind,
    coloring: &Coloring,
    d: usize,
    r: usize,
) -> Result<LiftPlan, ReductionError> {
    let sizes = coloring.class_sizes();
    let mismatch = |why: String| ReductionError::ShapeMismatch(why);
    let full = |count: usize| std::iter::repeat_n(r - 1, count);

    // (expected size profile, sizes of the moved-out classes to skip when
    // picking the kept singleton)
    let (expected, short_sizes): (Vec<usize>, Vec<usize>) = match kind {
        TransformKind::GeneralChain => return plan_lift(coloring, d, r),
        TransformKind::SplitSingleton => {
            if r < 3 {
                return Err(mismatch(format!("SplitSingleton needs r ≥ 3, got {r}")));
            }
            (
                full(d).chain([r - 2, 1, 1]).collect(),
                vec![r - 2],
            )
        }
        TransformKind::SplitChunk(q) => {
            if q < 2 || q + 2 > r {
                return Err(mismatch(format!("chunk size q={q} outside [2, r−2] for r={r}")));
            }
            (
                full(d).chain([r - 1 - q, 1, q]).collect(),
                vec![r - 1 - q, q],
            )
        }
        TransformKind::SplitTwoClasses => {
            if r < 3 {
                return Err(mismatch(format!("SplitTwoClasses needs r ≥ 3, got {r}")));
            }
            (
                full(d - 1).chain([r - 2, r - 2, 1, 2]).collect(),
                vec![r - 2, r - 2, 2],
            )
        }
        TransformKind::SplitTwoSingletons => {
            if r < 4 {
                return Err(mismatch(format!("SplitTwoSingletons needs r ≥ 4, got {r}")));
            }
            (
                full(d).chain([r - 3, 1, 1, 1]).collect(),
                vec![r - 3],
            )
        }
    };
    if sorted_profile(sizes.clone()) != sorted_profile(expected.clone()) {
        return Err(mismatch(format!(
            "{kind:?} expects class sizes {:?} (any order), got {sizes:?}",
            sorted_profile(expected)
        )));
    }
    let mut moved = Vec::new();
    for size in short_sizes {
        let class = first_class_of_size(&sizes, size, &moved).expect("profile matched");
        moved.push(class);
    }
    let keep = first_class_of_size(&sizes, 1, &moved).expect("profile has a singleton");
    Ok(padded_plan(coloring, d, r, Some(keep)))
}

fn check_plan_matches(instance: &Instance, plan: &LiftPlan) -> Result<(), ReductionError> {
    if instance.d() != plan.base_d || instance.r() != plan.base_r {
        return Err(ReductionError::PlanMismatch(format!(
            "instance has (d, r) = ({}, {}), plan expects ({}, {})",
            instance.d(),
            instance.r(),
            plan.base_d,
            plan.base_r
        )));
    }
    if instance.coloring().class_sizes() != plan.original_class_sizes {
        return Err(ReductionError::PlanMismatch(format!(
            "instance class sizes {:?} differ from plan {:?}",
            instance.coloring().class_sizes(),
            plan.original_class_sizes
        )));
    }
    Ok(())
}

/// Embeds the instance as the front face of the lifted simplex. Original
/// images gain zero coordinates; each new vertex of layer `s` maps to
/// `e_{d+s}`.
pub fn lift_instance(instance: &Instance, plan: &LiftPlan) -> Result<Instance, ReductionError> {
    check_plan_matches(instance, plan)?;
    let final_d = plan.final_d;
    let mut points = instance
        .points()
        .iter()
        .map(|p| {
            let mut lifted = p.clone();
            lifted.resize(final_d, Rational::zero());
            lifted
        })
        .collect::<Vec<_>>();
    for step in &plan.steps {
        for _ in &step.batch {
            let mut image = vec![Rational::zero(); final_d];
            image[step.target_axis - 1] = Rational::one();
            points.push(image);
        }
    }
    let mut class_of = instance.coloring().class_assignment().to_vec();
    class_of.extend_from_slice(&plan.new_vertex_classes);
    let lifted = Instance::new(final_d, plan.base_r, points, Coloring::from_class_of(class_of)?)?;
    debug_assert_eq!(lifted.classify(), ColoringKind::Special);
    Ok(lifted)
}

/// Record of one peeled layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerAudit {
    pub layer: usize,
    pub target_axis: usize,
    pub batch: Vec<usize>,
    /// Faces containing no batch vertex.
    pub untouched_faces: Vec<usize>,
    /// Batch vertices that appeared in some face (all with zero weight).
    pub dropped_vertices: Vec<usize>,
}

impl fmt::Display for LayerAudit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "layer {} (e{}): untouched faces {:?}; top coordinate 0; batch mass 0; dropped {:?}",
            self.layer, self.target_axis, self.untouched_faces, self.dropped_vertices
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pullback {
    pub witness: TverbergWitness,
    pub audits: Vec<LayerAudit>,
}

fn breach(layer: usize, check: LayerCheck, detail: String) -> ReductionError {
    ReductionError::AssertionBreach {
        layer,
        check,
        detail,
    }
}

/// Restriction of the lifted instance to the first `vertices` vertices and
/// `dims` coordinates.
fn truncated_instance(lifted: &Instance, vertices: usize, dims: usize) -> Result<Instance, ReductionError> {
    let points = lifted.points()[..vertices]
        .iter()
        .map(|p| p[..dims].to_vec())
        .collect();
    let class_of = lifted.coloring().class_assignment()[..vertices].to_vec();
    Ok(Instance::new(dims, lifted.r(), points, Coloring::from_class_of(class_of)?)?)
}

/// Pulls a lifted witness back to the original instance, with per-layer
/// audits.
pub fn pullback_audited(
    lifted_witness: &TverbergWitness,
    lifted_instance: &Instance,
    plan: &LiftPlan,
    original: &Instance,
) -> Result<Pullback, ReductionError> {
    check_plan_matches(original, plan)?;
    if lifted_instance.d() != plan.final_d || lifted_instance.num_vertices() != plan.final_vertex_count() {
        return Err(ReductionError::PlanMismatch(format!(
            "lifted instance has d={} and {} vertices, plan expects d={} and {}",
            lifted_instance.d(),
            lifted_instance.num_vertices(),
            plan.final_d,
            plan.final_vertex_count()
        )));
    }
    lifted_witness
        .check(lifted_instance)
        .map_err(ReductionError::LiftedWitnessInvalid)?;

    let (faces, mut point, mut coefficients) = lifted_witness.clone().into_parts();
    let mut faces = faces
        .into_iter()
        .map(|f| f.vertices().to_vec())
        .collect::<Vec<_>>();
    let mut audits = Vec::with_capacity(plan.steps.len());

    for (index, step) in plan.steps.iter().enumerate().rev() {
        let layer = index + 1;
        let batch = step.batch.iter().copied().collect::<BTreeSet<_>>();
        let axis = step.target_axis - 1;
        if point.len() != axis + 1 {
            return Err(breach(
                layer,
                LayerCheck::TopCoordinate,
                format!("axis e{} is not the top coordinate", step.target_axis),
            ));
        }

        let untouched_faces = faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.iter().all(|v| !batch.contains(v)))
            .map(|(i, _)| i)
            .collect::<Vec<_>>();
        if untouched_faces.is_empty() {
            return Err(breach(
                layer,
                LayerCheck::UntouchedFace,
                format!("every one of {} faces meets the {}-vertex batch", faces.len(), batch.len()),
            ));
        }

        if !point[axis].is_zero() {
            return Err(breach(
                layer,
                LayerCheck::TopCoordinate,
                format!("common point has coordinate {} on e{}", point[axis], step.target_axis),
            ));
        }

        let mut dropped_vertices = Vec::new();
        for (face_index, (face, weights)) in faces.iter_mut().zip(coefficients.iter_mut()).enumerate() {
            let mass = face
                .iter()
                .filter(|v| batch.contains(v))
                .map(|v| weights.get(v).cloned().unwrap_or_else(Rational::zero))
                .fold(Rational::zero(), |acc, w| acc + w);
            if !mass.is_zero() {
                return Err(breach(
                    layer,
                    LayerCheck::BatchMass,
                    format!("face {face_index} puts weight {mass} on the batch"),
                ));
            }
            dropped_vertices.extend(face.iter().filter(|v| batch.contains(v)));
            face.retain(|v| !batch.contains(v));
            weights.retain(|v, _| !batch.contains(v));
        }
        dropped_vertices.sort_unstable();
        point.truncate(axis);

        let below = truncated_instance(lifted_instance, step.batch[0], axis)?;
        let rebuilt = faces
            .iter()
            .map(|f| RainbowFace::new(f.iter().copied()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| breach(layer, LayerCheck::Restriction, e.to_string()))?;
        TverbergWitness::from_parts(rebuilt, point.clone(), coefficients.clone())
            .check(&below)
            .map_err(|e| breach(layer, LayerCheck::Restriction, e.to_string()))?;

        audits.push(LayerAudit {
            layer,
            target_axis: step.target_axis,
            batch: step.batch.clone(),
            untouched_faces,
            dropped_vertices,
        });
    }

    let faces = faces
        .into_iter()
        .map(RainbowFace::new)
        .collect::<Result<Vec<_>, _>>()?;
    let witness = TverbergWitness::from_parts(faces, point, coefficients);
    witness
        .check(original)
        .map_err(ReductionError::FinalVerification)?;
    Ok(Pullback { witness, audits })
}

pub fn pullback(
    lifted_witness: &TverbergWitness,
    lifted_instance: &Instance,
    plan: &LiftPlan,
    original: &Instance,
) -> Result<TverbergWitness, ReductionError> {
    pullback_audited(lifted_witness, lifted_instance, plan, original).map(|p| p.witness)
}

/// Standalone recheck of a witness against an instance: face count,
/// disjointness, rainbow faces, nonnegative unit-mass coefficients supported
/// on their face, and exact reconstruction of the common point.
pub fn verify_reduction(original: &Instance, witness: &TverbergWitness) -> bool {
    let r = original.r();
    let d = original.d();
    let n = original.num_vertices();
    if witness.faces().len() != r || witness.coefficients().len() != r || witness.point().len() != d {
        return false;
    }
    let mut owner = vec![None; n];
    for (index, face) in witness.faces().iter().enumerate() {
        if face.vertices().is_empty() {
            return false;
        }
        let mut colors = Vec::new();
        for &v in face.vertices() {
            if v >= n || owner[v].is_some() {
                return false;
            }
            owner[v] = Some(index);
            let color = original.coloring().class_of(v);
            if colors.contains(&color) {
                return false;
            }
            colors.push(color);
        }
    }
    witness
        .coefficients()
        .iter()
        .enumerate()
        .all(|(index, weights)| {
            let mut total = Rational::zero();
            let mut image = vec![Rational::zero(); d];
            for (&v, w) in weights {
                if v >= n || owner[v] != Some(index) || w.is_negative() {
                    return false;
                }
                total += w;
                for (k, x) in original.point(v).iter().enumerate() {
                    image[k] += w * x;
                }
            }
            total.is_one() && image.as_slice() == witness.point()
        })
}
