//! Exact geometry: convex-hull intersection via LP feasibility, and
//! general-position tests via exact elimination.

mod lp;

pub use lp::{lp_feasible, FeasibilityResult, LinearSystem, VarLabel};

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::model::Instance;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("row {row} has {found} coefficients, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("duplicate variable label (face {face}, vertex {vertex})")]
    DuplicateLabel { face: usize, vertex: usize },
    #[error("face {face} is empty")]
    EmptyFace { face: usize },
    #[error("vertex {vertex} out of range (instance has {num_vertices} vertices)")]
    VertexOutOfRange { vertex: usize, num_vertices: usize },
    #[error("point {index} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
}

/// A point common to every face hull, with the convex coefficients that
/// reproduce it from each face. Every vertex of a face has an entry, zero
/// weights included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonPoint {
    pub point: Vec<Rational>,
    pub coefficients: Vec<BTreeMap<usize, Rational>>,
}

/// Encodes `conv f(σ_1) ∩ … ∩ conv f(σ_r) ≠ ∅` as an equality system.
///
/// One variable per (face, vertex); one unit-mass row per face; `d` rows per
/// face `i ≥ 1` equating its combination with that of face 0.
pub fn intersection_system<F: AsRef<[usize]>>(
    faces: &[F],
    points: &[Vec<Rational>],
    d: usize,
) -> Result<LinearSystem, KernelError> {
    let mut labels = Vec::new();
    for (face, vertices) in faces.iter().enumerate() {
        let vertices = vertices.as_ref();
        if vertices.is_empty() {
            return Err(KernelError::EmptyFace { face });
        }
        for &vertex in vertices {
            let point = points.get(vertex).ok_or(KernelError::VertexOutOfRange {
                vertex,
                num_vertices: points.len(),
            })?;
            if point.len() != d {
                return Err(KernelError::DimensionMismatch {
                    index: vertex,
                    expected: d,
                    found: point.len(),
                });
            }
            labels.push(VarLabel { face, vertex });
        }
    }
    let width = labels.len();
    let mut system = LinearSystem::new(labels)?;
    let offsets = faces
        .iter()
        .scan(0, |start, f| {
            let here = *start;
            *start += f.as_ref().len();
            Some(here)
        })
        .collect::<Vec<_>>();

    for (face, vertices) in faces.iter().enumerate() {
        let mut row = vec![Rational::zero(); width];
        for k in 0..vertices.as_ref().len() {
            row[offsets[face] + k] = Rational::from_integer(1.into());
        }
        system.push_row(row, Rational::from_integer(1.into()))?;
    }
    for face in 1..faces.len() {
        #[allow(clippy::needless_range_loop)]
        for axis in 0..d {
            let mut row = vec![Rational::zero(); width];
            for (k, &vertex) in faces[0].as_ref().iter().enumerate() {
                row[offsets[0] + k] = points[vertex][axis].clone();
            }
            for (k, &vertex) in faces[face].as_ref().iter().enumerate() {
                row[offsets[face] + k] = -&points[vertex][axis];
            }
            system.push_row(row, Rational::zero())?;
        }
    }
    Ok(system)
}

/// Decides whether the hulls of the faces' images share a point.
///
/// Faces need not be disjoint here; the solver also calls this on
/// overlapping supersets when pruning.
pub fn common_point<F: AsRef<[usize]>>(
    faces: &[F],
    instance: &Instance,
) -> Result<Option<CommonPoint>, KernelError> {
    common_point_in(faces, instance.points(), instance.d())
}

pub fn common_point_in<F: AsRef<[usize]>>(
    faces: &[F],
    points: &[Vec<Rational>],
    d: usize,
) -> Result<Option<CommonPoint>, KernelError> {
    let system = intersection_system(faces, points, d)?;
    let FeasibilityResult::Feasible(assignment) = lp_feasible(&system) else {
        return Ok(None);
    };
    let mut coefficients = vec![BTreeMap::new(); faces.len()];
    for (label, value) in system.labels().iter().zip(assignment) {
        coefficients[label.face].insert(label.vertex, value);
    }
    let mut point = vec![Rational::zero(); d];
    if let Some(first) = coefficients.first() {
        for (&vertex, weight) in first {
            for (acc, coord) in point.iter_mut().zip(&points[vertex]) {
                *acc += weight * coord;
            }
        }
    }
    Ok(Some(CommonPoint {
        point,
        coefficients,
    }))
}

/// Rank of a rational matrix by exact Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let head = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &head[col];
            for (x, h) in row.iter_mut().zip(&head).skip(col) {
                *x -= &factor * h;
            }
        }
        rank += 1;
    }
    rank
}

/// True iff the given points are affinely independent.
pub fn affinely_independent(points: &[&[Rational]]) -> bool {
    let Some((base, rest)) = points.split_first() else {
        return true;
    };
    let diffs = rest
        .iter()
        .map(|p| p.iter().zip(base.iter()).map(|(a, b)| a - b).collect())
        .collect::<Vec<Vec<Rational>>>();
    rank(diffs) == rest.len()
}

/// True iff no `d+1` of the points are affinely dependent. With fewer than
/// `d+1` points the whole set must be affinely independent.
pub fn general_position_check(points: &[Vec<Rational>], d: usize) -> bool {
    if points.iter().any(|p| p.len() != d) {
        return false;
    }
    let k = (d + 1).min(points.len());
    let mut subset = (0..k).collect::<Vec<_>>();
    loop {
        let chosen = subset.iter().map(|&i| points[i].as_slice()).collect::<Vec<_>>();
        if !affinely_independent(&chosen) {
            return false;
        }
        // next k-combination in lexicographic order
        let n = points.len();
        let Some(pos) = (0..k).rev().find(|&i| subset[i] < n - k + i) else {
            return true;
        };
        subset[pos] += 1;
        for i in pos + 1..k {
            subset[i] = subset[i - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Coloring, Instance};
    use crate::rational::{int, ratio};
    use num_traits::Signed;

    fn pts(coords: &[&[i64]]) -> Vec<Vec<Rational>> {
        coords.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect()
    }

    fn instance(d: usize, coords: &[&[i64]]) -> Instance {
        let n = coords.len();
        Instance::new(d, 2, pts(coords), Coloring::from_class_of((0..n).collect()).unwrap())
            .unwrap()
    }

    fn assert_valid(found: &CommonPoint, faces: &[Vec<usize>], inst: &Instance) {
        for (face, coeffs) in faces.iter().zip(&found.coefficients) {
            assert_eq!(coeffs.keys().copied().collect::<Vec<_>>(), *face);
            let mass = coeffs.values().fold(int(0), |a, b| a + b);
            assert_eq!(mass, int(1));
            assert!(coeffs.values().all(|c| !c.is_negative()));
            let mut p = vec![int(0); inst.d()];
            for (&v, w) in coeffs {
                for (acc, x) in p.iter_mut().zip(inst.point(v)) {
                    *acc += w * x;
                }
            }
            assert_eq!(p, found.point);
        }
    }

    #[test]
    fn overlapping_segments_on_a_line() {
        let inst = instance(1, &[&[0], &[2], &[1], &[3]]);
        let faces = vec![vec![0, 1], vec![2, 3]];
        let found = common_point(&faces, &inst).unwrap().expect("overlap [1,2]");
        assert_valid(&found, &faces, &inst);
        assert!(found.point[0] >= int(1) && found.point[0] <= int(2));
    }

    #[test]
    fn square_diagonals_cross_at_center() {
        let inst = instance(2, &[&[0, 0], &[2, 0], &[2, 2], &[0, 2]]);
        let faces = vec![vec![0, 2], vec![1, 3]];
        let found = common_point(&faces, &inst).unwrap().unwrap();
        assert_valid(&found, &faces, &inst);
        assert_eq!(found.point, vec![int(1), int(1)]);
    }

    #[test]
    fn disjoint_segments_have_no_common_point() {
        let inst = instance(1, &[&[0], &[1], &[2], &[3]]);
        assert_eq!(common_point(&[vec![0, 1], vec![2, 3]], &inst).unwrap(), None);
    }

    #[test]
    fn degenerate_repeated_points() {
        let inst = instance(2, &[&[1, 1], &[1, 1], &[1, 1]]);
        let faces = vec![vec![0, 1], vec![2]];
        let found = common_point(&faces, &inst).unwrap().unwrap();
        assert_valid(&found, &faces, &inst);
        assert_eq!(found.point, vec![int(1), int(1)]);
    }

    #[test]
    fn errors_on_empty_face_and_bad_index() {
        let inst = instance(1, &[&[0], &[1]]);
        assert_eq!(
            common_point(&[vec![0], vec![]], &inst),
            Err(KernelError::EmptyFace { face: 1 })
        );
        assert_eq!(
            common_point(&[vec![0], vec![5]], &inst),
            Err(KernelError::VertexOutOfRange {
                vertex: 5,
                num_vertices: 2
            })
        );
        assert!(matches!(
            common_point_in(&[vec![0]], &pts(&[&[0, 1]]), 1),
            Err(KernelError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn point_inside_triangle() {
        let inst = instance(2, &[&[0, 0], &[6, 0], &[0, 6], &[1, 1]]);
        let faces = vec![vec![0, 1, 2], vec![3]];
        let found = common_point(&faces, &inst).unwrap().unwrap();
        assert_eq!(found.point, vec![int(1), int(1)]);
        assert_valid(&found, &faces, &inst);
    }

    #[test]
    fn infeasible_systems_carry_certificates() {
        let inst = instance(2, &[&[0, 0], &[1, 0], &[5, 5], &[6, 5]]);
        let system = intersection_system(&[vec![0, 1], vec![2, 3]], inst.points(), 2).unwrap();
        let FeasibilityResult::Infeasible(y) = lp_feasible(&system) else {
            panic!("segments are far apart");
        };
        assert!(system.refuted_by(&y));
    }

    #[test]
    fn general_position_reference_cases() {
        assert!(!general_position_check(&pts(&[&[0, 0], &[1, 0], &[2, 0]]), 2));
        assert!(general_position_check(&pts(&[&[0, 0], &[1, 0], &[0, 1]]), 2));
        assert!(!general_position_check(&pts(&[&[3], &[3]]), 1));
        assert!(!general_position_check(&pts(&[&[1, 1], &[1, 1]]), 2));
        assert!(general_position_check(&pts(&[&[1, 1]]), 2));
    }

    #[test]
    fn moment_curve_is_in_general_position() {
        // Oracle: every integer orientation determinant of (t, t²), t = 1..7.
        let ts = 1..=7i64;
        let curve: Vec<(i64, i64)> = ts.map(|t| (t, t * t)).collect();
        let mut all_nonzero = true;
        for a in 0..7 {
            for b in a + 1..7 {
                for c in b + 1..7 {
                    let (p, q, s) = (curve[a], curve[b], curve[c]);
                    let det = (q.0 - p.0) * (s.1 - p.1) - (s.0 - p.0) * (q.1 - p.1);
                    all_nonzero &= det != 0;
                }
            }
        }
        assert!(all_nonzero);
        let points: Vec<Vec<Rational>> =
            curve.iter().map(|&(x, y)| vec![int(x), int(y)]).collect();
        assert_eq!(general_position_check(&points, 2), all_nonzero);
    }

    #[test]
    fn rank_of_rational_matrix() {
        let m = vec![
            vec![ratio(1, 2), int(1)],
            vec![int(1), int(2)],
            vec![int(0), ratio(1, 3)],
        ];
        assert_eq!(rank(m), 2);
        assert_eq!(rank(vec![vec![int(0), int(0)]]), 0);
    }
}
