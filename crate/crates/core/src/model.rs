//! Domain vocabulary: colorings of a simplex's vertex set, rainbow faces,
//! instances (vertex images of an affine map) and Tverberg witnesses.
//!
//! Vertices are abstract indices `0..n`. The simplex itself is never stored;
//! only the image of each vertex is.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("vertex {vertex} out of range (instance has {num_vertices} vertices)")]
    VertexOutOfRange { vertex: usize, num_vertices: usize },
    #[error("faces overlap in vertex {vertex}")]
    OverlappingFaces { vertex: usize },
    #[error("empty face")]
    EmptyFace,
    #[error("color class {class} has no vertices (class indices must be dense)")]
    EmptyClass { class: usize },
    #[error("coloring classes do not partition the vertex set: {0}")]
    NotAPartition(String),
    #[error("point {vertex} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        vertex: usize,
        expected: usize,
        found: usize,
    },
    #[error("{points} points but coloring covers {colored} vertices")]
    VertexCountMismatch { points: usize, colored: usize },
    #[error("multiplicity r must be at least 2, got {0}")]
    InvalidMultiplicity(usize),
    #[error("dimension d must be at least 1, got {0}")]
    InvalidDimension(usize),
}

/// A partition of `{0, …, n−1}` into nonempty color classes.
///
/// Class indices are dense: every index below `num_classes()` is used.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl Coloring {
    pub fn from_class_of(class_of: Vec<usize>) -> Result<Self, ModelError> {
        let num_classes = class_of.iter().max().map_or(0, |&c| c + 1);
        let mut classes = vec![Vec::new(); num_classes];
        for (vertex, &class) in class_of.iter().enumerate() {
            classes[class].push(vertex);
        }
        if let Some(class) = classes.iter().position(Vec::is_empty) {
            return Err(ModelError::EmptyClass { class });
        }
        Ok(Self { class_of, classes })
    }

    pub fn from_classes(
        num_vertices: usize,
        classes: Vec<Vec<usize>>,
    ) -> Result<Self, ModelError> {
        let mut class_of = vec![usize::MAX; num_vertices];
        for (class, members) in classes.iter().enumerate() {
            if members.is_empty() {
                return Err(ModelError::EmptyClass { class });
            }
            for &vertex in members {
                if vertex >= num_vertices {
                    return Err(ModelError::VertexOutOfRange {
                        vertex,
                        num_vertices,
                    });
                }
                if class_of[vertex] != usize::MAX {
                    return Err(ModelError::NotAPartition(format!(
                        "vertex {vertex} lies in classes {} and {class}",
                        class_of[vertex]
                    )));
                }
                class_of[vertex] = class;
            }
        }
        if let Some(vertex) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(ModelError::NotAPartition(format!(
                "vertex {vertex} has no class"
            )));
        }
        Self::from_class_of(class_of)
    }

    /// Contiguous classes: the first `sizes[0]` vertices get class 0, and so on.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self, ModelError> {
        let class_of = sizes
            .iter()
            .enumerate()
            .flat_map(|(class, &size)| std::iter::repeat_n(class, size))
            .collect::<Vec<_>>();
        if let Some(class) = sizes.iter().position(|&s| s == 0) {
            return Err(ModelError::EmptyClass { class });
        }
        Self::from_class_of(class_of)
    }

    pub fn num_vertices(&self) -> usize {
        self.class_of.len()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, vertex: usize) -> usize {
        self.class_of[vertex]
    }

    pub fn class_assignment(&self) -> &[usize] {
        &self.class_of
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringKind {
    Special,
    General,
    Invalid(String),
}

impl ColoringKind {
    pub fn is_valid(&self) -> bool {
        !matches!(self, ColoringKind::Invalid(_))
    }
}

impl fmt::Display for ColoringKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColoringKind::Special => f.write_str("special"),
            ColoringKind::General => f.write_str("general"),
            ColoringKind::Invalid(reason) => write!(f, "invalid ({reason})"),
        }
    }
}

/// Number of vertices of the base simplex for `(d, r)`: `(d+1)(r−1)+1`.
pub fn base_vertex_count(d: usize, r: usize) -> usize {
    (d + 1) * (r - 1) + 1
}

/// Classifies a coloring for parameters `(d, r)`.
///
/// General: every class has at most `r−1` vertices and there are
/// `(d+1)(r−1)+1` vertices in total. The class count is implied by these
/// two rules and is not checked separately. Special: the general rules hold
/// and the profile is exactly `d+1` classes of size `r−1` plus one singleton.
pub fn validate_coloring(coloring: &Coloring, r: usize, d: usize) -> ColoringKind {
    if r < 2 {
        return ColoringKind::Invalid(format!("r = {r} is below 2"));
    }
    if d < 1 {
        return ColoringKind::Invalid(format!("d = {d} is below 1"));
    }
    let sizes = coloring.class_sizes();
    if let Some(class) = sizes.iter().position(|&s| s > r - 1) {
        return ColoringKind::Invalid(format!("class {class} exceeds r−1"));
    }
    let expected = base_vertex_count(d, r);
    if coloring.num_vertices() != expected {
        return ColoringKind::Invalid(format!(
            "vertex count {} differs from (d+1)(r−1)+1 = {expected}",
            coloring.num_vertices()
        ));
    }
    let full = sizes.iter().filter(|&&s| s == r - 1).count();
    let singletons = sizes.iter().filter(|&&s| s == 1).count();
    let special = sizes.len() == d + 2
        && if r == 2 {
            singletons == d + 2
        } else {
            full == d + 1 && singletons == 1
        };
    if special {
        ColoringKind::Special
    } else {
        ColoringKind::General
    }
}

/// True iff no two vertices of `face` share a color class. Vacuously true on
/// the empty set.
pub fn rainbow_check(face: &[usize], coloring: &Coloring) -> Result<bool, ModelError> {
    let mut seen = BTreeSet::new();
    let mut rainbow = true;
    for &vertex in face {
        if vertex >= coloring.num_vertices() {
            return Err(ModelError::VertexOutOfRange {
                vertex,
                num_vertices: coloring.num_vertices(),
            });
        }
        rainbow &= seen.insert(coloring.class_of(vertex));
    }
    Ok(rainbow)
}

/// Sorts every face and orders the family by minimum vertex.
pub fn canonical_family(faces: &[Vec<usize>]) -> Result<Vec<Vec<usize>>, ModelError> {
    let mut seen = BTreeSet::new();
    let mut family = Vec::with_capacity(faces.len());
    for face in faces {
        let sorted = face.iter().copied().collect::<BTreeSet<_>>();
        if sorted.is_empty() {
            return Err(ModelError::EmptyFace);
        }
        for &vertex in &sorted {
            if !seen.insert(vertex) {
                return Err(ModelError::OverlappingFaces { vertex });
            }
        }
        family.push(sorted.into_iter().collect::<Vec<_>>());
    }
    family.sort_by_key(|face| face[0]);
    Ok(family)
}

/// A nonempty, strictly increasing vertex set. Rainbow-ness is a property
/// relative to a coloring and is checked where a coloring is at hand.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RainbowFace(Vec<usize>);

impl RainbowFace {
    pub fn new(vertices: impl IntoIterator<Item = usize>) -> Result<Self, ModelError> {
        let sorted = vertices.into_iter().collect::<BTreeSet<_>>();
        if sorted.is_empty() {
            return Err(ModelError::EmptyFace);
        }
        Ok(Self(sorted.into_iter().collect()))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, vertex: usize) -> bool {
        self.0.binary_search(&vertex).is_ok()
    }

    pub fn min_vertex(&self) -> usize {
        self.0[0]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Dimension `d`, multiplicity `r`, one image point per vertex, and a coloring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    d: usize,
    r: usize,
    points: Vec<Vec<Rational>>,
    coloring: Coloring,
}

impl Instance {
    pub fn new(
        d: usize,
        r: usize,
        points: Vec<Vec<Rational>>,
        coloring: Coloring,
    ) -> Result<Self, ModelError> {
        if d < 1 {
            return Err(ModelError::InvalidDimension(d));
        }
        if r < 2 {
            return Err(ModelError::InvalidMultiplicity(r));
        }
        if points.len() != coloring.num_vertices() {
            return Err(ModelError::VertexCountMismatch {
                points: points.len(),
                colored: coloring.num_vertices(),
            });
        }
        if let Some((vertex, point)) = points.iter().enumerate().find(|(_, p)| p.len() != d) {
            return Err(ModelError::DimensionMismatch {
                vertex,
                expected: d,
                found: point.len(),
            });
        }
        Ok(Self {
            d,
            r,
            points,
            coloring,
        })
    }

    /// Convenience constructor from integer coordinates.
    pub fn from_integers(
        d: usize,
        r: usize,
        points: &[Vec<i64>],
        class_of: Vec<usize>,
    ) -> Result<Self, ModelError> {
        let points = points
            .iter()
            .map(|p| p.iter().map(|&x| crate::rational::int(x)).collect())
            .collect();
        Self::new(d, r, points, Coloring::from_class_of(class_of)?)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn point(&self, vertex: usize) -> &[Rational] {
        &self.points[vertex]
    }

    pub fn coloring(&self) -> &Coloring {
        &self.coloring
    }

    pub fn num_vertices(&self) -> usize {
        self.points.len()
    }

    pub fn classify(&self) -> ColoringKind {
        validate_coloring(&self.coloring, self.r, self.d)
    }

    /// Base instances have exactly `(d+1)(r−1)+1` vertices.
    pub fn is_base(&self) -> bool {
        self.num_vertices() == base_vertex_count(self.d, self.r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("expected {expected} faces, found {found}")]
    FaceCount { expected: usize, found: usize },
    #[error("face {face} is empty")]
    EmptyFace { face: usize },
    #[error("face {face} is not strictly increasing")]
    UnsortedFace { face: usize },
    #[error("face {face} contains out-of-range vertex {vertex}")]
    VertexOutOfRange { face: usize, vertex: usize },
    #[error("vertex {vertex} appears in more than one face")]
    FacesOverlap { vertex: usize },
    #[error("face {face} uses color class {class} twice")]
    NotRainbow { face: usize, class: usize },
    #[error("expected {expected} coefficient maps, found {found}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("face {face} has a coefficient on vertex {vertex} outside the face")]
    CoefficientOutsideFace { face: usize, vertex: usize },
    #[error("face {face} has a negative coefficient on vertex {vertex}")]
    NegativeCoefficient { face: usize, vertex: usize },
    #[error("coefficients of face {face} sum to {sum}, not 1")]
    MassNotOne { face: usize, sum: String },
    #[error("common point has {found} coordinates, expected {expected}")]
    PointDimension { expected: usize, found: usize },
    #[error("face {face} does not reproduce the common point")]
    PointMismatch { face: usize },
}

/// `r` disjoint rainbow faces, a common point, and per-face convex
/// coefficients reproducing that point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TverbergWitness {
    faces: Vec<RainbowFace>,
    point: Vec<Rational>,
    coefficients: Vec<BTreeMap<usize, Rational>>,
}

impl TverbergWitness {
    /// Assembles a witness without checking it; see [`TverbergWitness::check`].
    pub fn from_parts(
        faces: Vec<RainbowFace>,
        point: Vec<Rational>,
        coefficients: Vec<BTreeMap<usize, Rational>>,
    ) -> Self {
        Self {
            faces,
            point,
            coefficients,
        }
    }

    pub fn into_parts(
        self,
    ) -> (
        Vec<RainbowFace>,
        Vec<Rational>,
        Vec<BTreeMap<usize, Rational>>,
    ) {
        (self.faces, self.point, self.coefficients)
    }

    pub fn faces(&self) -> &[RainbowFace] {
        &self.faces
    }

    pub fn point(&self) -> &[Rational] {
        &self.point
    }

    pub fn coefficients(&self) -> &[BTreeMap<usize, Rational>] {
        &self.coefficients
    }

    pub fn family(&self) -> Vec<Vec<usize>> {
        self.faces.iter().map(|f| f.vertices().to_vec()).collect()
    }

    /// Exact check of every witness invariant against `instance`.
    pub fn check(&self, instance: &Instance) -> Result<(), WitnessError> {
        let r = instance.r();
        if self.faces.len() != r {
            return Err(WitnessError::FaceCount {
                expected: r,
                found: self.faces.len(),
            });
        }
        if self.coefficients.len() != r {
            return Err(WitnessError::CoefficientCount {
                expected: r,
                found: self.coefficients.len(),
            });
        }
        if self.point.len() != instance.d() {
            return Err(WitnessError::PointDimension {
                expected: instance.d(),
                found: self.point.len(),
            });
        }
        let mut used = BTreeSet::new();
        for (index, face) in self.faces.iter().enumerate() {
            let vertices = face.vertices();
            if vertices.is_empty() {
                return Err(WitnessError::EmptyFace { face: index });
            }
            if vertices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(WitnessError::UnsortedFace { face: index });
            }
            let mut classes = BTreeSet::new();
            for &vertex in vertices {
                if vertex >= instance.num_vertices() {
                    return Err(WitnessError::VertexOutOfRange {
                        face: index,
                        vertex,
                    });
                }
                if !used.insert(vertex) {
                    return Err(WitnessError::FacesOverlap { vertex });
                }
                let class = instance.coloring().class_of(vertex);
                if !classes.insert(class) {
                    return Err(WitnessError::NotRainbow { face: index, class });
                }
            }
        }
        for (index, (face, coefficients)) in
            self.faces.iter().zip(&self.coefficients).enumerate()
        {
            let mut mass = Rational::zero();
            let mut combination = vec![Rational::zero(); instance.d()];
            for (&vertex, weight) in coefficients {
                if !face.contains(vertex) {
                    return Err(WitnessError::CoefficientOutsideFace {
                        face: index,
                        vertex,
                    });
                }
                if weight.is_negative() {
                    return Err(WitnessError::NegativeCoefficient {
                        face: index,
                        vertex,
                    });
                }
                mass += weight;
                for (acc, coord) in combination.iter_mut().zip(instance.point(vertex)) {
                    *acc += weight * coord;
                }
            }
            if !mass.is_one() {
                return Err(WitnessError::MassNotOne {
                    face: index,
                    sum: crate::rational::format_rational(&mass),
                });
            }
            if combination != self.point {
                return Err(WitnessError::PointMismatch { face: index });
            }
        }
        Ok(())
    }
}
