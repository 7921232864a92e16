//! Exact phase-1 simplex for `A x = b, x ≥ 0`.
//!
//! Dense tableau with Bland's least-index rule for both the entering and the
//! leaving variable, so the method always terminates.
//! Infeasible systems come back with a Farkas certificate `y` such that
//! `yᵀA ≥ 0` componentwise and `yᵀb < 0`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use super::KernelError;
use crate::rational::Rational;

/// Traceability label of an LP variable: the face it belongs to and the
/// vertex whose coefficient it is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarLabel {
    pub face: usize,
    pub vertex: usize,
}

/// Equality rows over nonnegative variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    labels: Vec<VarLabel>,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
}

impl LinearSystem {
    pub fn new(labels: Vec<VarLabel>) -> Result<Self, KernelError> {
        let mut seen = BTreeSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(**l)) {
            return Err(KernelError::DuplicateLabel {
                face: dup.face,
                vertex: dup.vertex,
            });
        }
        Ok(Self {
            labels,
            rows: Vec::new(),
            rhs: Vec::new(),
        })
    }

    /// Builds a system from `(coefficients, rhs)` pairs.
    pub fn from_rows(
        labels: Vec<VarLabel>,
        rows: impl IntoIterator<Item = (Vec<Rational>, Rational)>,
    ) -> Result<Self, KernelError> {
        let mut system = Self::new(labels)?;
        for (coefficients, rhs) in rows {
            system.push_row(coefficients, rhs)?;
        }
        Ok(system)
    }

    pub fn push_row(&mut self, coefficients: Vec<Rational>, rhs: Rational) -> Result<(), KernelError> {
        if coefficients.len() != self.labels.len() {
            return Err(KernelError::RaggedRow {
                row: self.rows.len(),
                expected: self.labels.len(),
                found: coefficients.len(),
            });
        }
        self.rows.push(coefficients);
        self.rhs.push(rhs);
        Ok(())
    }

    pub fn labels(&self) -> &[VarLabel] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }

    pub fn num_vars(&self) -> usize {
        self.labels.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Exact substitution check: `x ≥ 0` and every row holds with equality.
    pub fn satisfied_by(&self, assignment: &[Rational]) -> bool {
        assignment.len() == self.num_vars()
            && assignment.iter().all(|x| !x.is_negative())
            && self.rows.iter().zip(&self.rhs).all(|(row, rhs)| {
                let lhs = row
                    .iter()
                    .zip(assignment)
                    .fold(Rational::zero(), |acc, (a, x)| acc + a * x);
                &lhs == rhs
            })
    }

    /// Checks a Farkas certificate: `yᵀA ≥ 0` and `yᵀb < 0`. Any nonnegative
    /// `x` would give `0 ≤ yᵀAx = yᵀb < 0`, so no feasible point exists.
    pub fn refuted_by(&self, certificate: &[Rational]) -> bool {
        if certificate.len() != self.num_rows() {
            return false;
        }
        let combined_rhs = certificate
            .iter()
            .zip(&self.rhs)
            .fold(Rational::zero(), |acc, (y, b)| acc + y * b);
        if !combined_rhs.is_negative() {
            return false;
        }
        (0..self.num_vars()).all(|j| {
            let column = certificate
                .iter()
                .zip(&self.rows)
                .fold(Rational::zero(), |acc, (y, row)| acc + y * &row[j]);
            !column.is_negative()
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeasibilityResult {
    /// Value per variable, in label order.
    Feasible(Vec<Rational>),
    /// One multiplier per row.
    Infeasible(Vec<Rational>),
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible(_))
    }
}

/// Scalar field for the tableau. Operations return `None` on overflow; the
/// big-rational field never overflows.
trait Field: Clone + Ord + Zero + One {
    fn checked_sub(&self, other: &Self) -> Option<Self>;
    fn checked_mul(&self, other: &Self) -> Option<Self>;
    fn checked_div(&self, other: &Self) -> Option<Self>;
    fn checked_neg(&self) -> Option<Self>;
}

type Small = Ratio<i128>;

impl Field for Small {
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        CheckedSub::checked_sub(self, other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        CheckedMul::checked_mul(self, other)
    }
    fn checked_div(&self, other: &Self) -> Option<Self> {
        CheckedDiv::checked_div(self, other)
    }
    fn checked_neg(&self) -> Option<Self> {
        Some(Ratio::new_raw(self.numer().checked_neg()?, *self.denom()))
    }
}

impl Field for Rational {
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn checked_div(&self, other: &Self) -> Option<Self> {
        Some(self / other)
    }
    fn checked_neg(&self) -> Option<Self> {
        Some(-self)
    }
}

struct Tableau<T> {
    // m rows of width n + m + 1; the last column is the right-hand side.
    rows: Vec<Vec<T>>,
    // reduced costs of the phase-1 objective, same width; last entry is −w.
    cost: Vec<T>,
    basis: Vec<usize>,
}

impl<T: Field> Tableau<T> {
    fn pivot(&mut self, row: usize, col: usize) -> Option<()> {
        let pivot = self.rows[row][col].clone();
        for value in self.rows[row].iter_mut() {
            if !value.is_zero() {
                *value = value.checked_div(&pivot)?;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[row]);
        for (i, other) in self.rows.iter_mut().enumerate() {
            if i != row {
                eliminate(other, &pivot_row, col)?;
            }
        }
        eliminate(&mut self.cost, &pivot_row, col)?;
        self.rows[row] = pivot_row;
        self.basis[row] = col;
        Some(())
    }
}

fn eliminate<T: Field>(target: &mut [T], pivot_row: &[T], col: usize) -> Option<()> {
    let factor = target[col].clone();
    if factor.is_zero() {
        return Some(());
    }
    for (t, p) in target.iter_mut().zip(pivot_row) {
        if !p.is_zero() {
            *t = t.checked_sub(&factor.checked_mul(p)?)?;
        }
    }
    Some(())
}

enum Outcome<T> {
    Feasible(Vec<T>),
    Infeasible(Vec<T>),
}

/// Phase 1 with Bland's rule over `T`; `None` if `T` overflowed.
fn phase_one<T: Field>(n: usize, rows: &[Vec<T>], rhs: &[T]) -> Option<Outcome<T>> {
    let m = rows.len();
    let width = n + m + 1;
    let zero = T::zero();

    let mut signs = Vec::with_capacity(m);
    let mut table = Vec::with_capacity(m);
    for (i, (row, b)) in rows.iter().zip(rhs).enumerate() {
        let flip = *b < zero;
        signs.push(flip);
        let mut t = Vec::with_capacity(width);
        for a in row.iter().chain(std::iter::once(b)) {
            t.push(if flip { a.checked_neg()? } else { a.clone() });
        }
        let b = t.pop().expect("rhs pushed");
        t.extend((0..m).map(|k| if k == i { T::one() } else { T::zero() }));
        t.push(b);
        table.push(t);
    }

    // Phase-1 cost is 1 on every artificial; price out the initial basis.
    let mut cost = vec![T::zero(); width];
    for row in &table {
        for (j, value) in row.iter().enumerate() {
            if (j < n || j == width - 1) && !value.is_zero() {
                cost[j] = cost[j].checked_sub(value)?;
            }
        }
    }

    let mut tableau = Tableau {
        rows: table,
        cost,
        basis: (n..n + m).collect(),
    };

    while let Some(entering) = (0..width - 1).find(|&j| tableau.cost[j] < zero) {
        let mut leaving: Option<(usize, T)> = None;
        for i in 0..m {
            let a = &tableau.rows[i][entering];
            if *a <= zero {
                continue;
            }
            let ratio = tableau.rows[i][width - 1].checked_div(a)?;
            let better = match &leaving {
                None => true,
                Some((best, best_ratio)) => {
                    ratio < *best_ratio
                        || (ratio == *best_ratio && tableau.basis[i] < tableau.basis[*best])
                }
            };
            if better {
                leaving = Some((i, ratio));
            }
        }
        // The phase-1 objective is bounded below by zero, so some row
        // always limits the entering column.
        let (row, _) = leaving.expect("phase-1 objective is bounded");
        tableau.pivot(row, entering)?;
    }

    if tableau.cost[width - 1].is_zero() {
        let mut assignment = vec![T::zero(); n];
        for (i, &var) in tableau.basis.iter().enumerate() {
            if var < n {
                assignment[var] = tableau.rows[i][width - 1].clone();
            }
        }
        Some(Outcome::Feasible(assignment))
    } else {
        // Simplex multipliers are π_i = 1 − c̄(a_i); undo the row sign flips
        // and negate to get yᵀA ≥ 0, yᵀb < 0.
        let mut certificate = Vec::with_capacity(m);
        for (reduced, &positive) in tableau.cost[n..n + m].iter().zip(&signs) {
            let pi = T::one().checked_sub(reduced)?;
            certificate.push(if positive { pi } else { pi.checked_neg()? });
        }
        Some(Outcome::Infeasible(certificate))
    }
}

fn to_small(value: &Rational) -> Option<Small> {
    Some(Small::new_raw(
        value.numer().to_i128()?,
        value.denom().to_i128()?,
    ))
}

fn from_small(value: &Small) -> Rational {
    Rational::new(BigInt::from(*value.numer()), BigInt::from(*value.denom()))
}

fn small_outcome(system: &LinearSystem) -> Option<FeasibilityResult> {
    let rows = system
        .rows
        .iter()
        .map(|row| row.iter().map(to_small).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    let rhs = system.rhs.iter().map(to_small).collect::<Option<Vec<_>>>()?;
    let lift = |v: Vec<Small>| v.iter().map(from_small).collect();
    Some(match phase_one(system.num_vars(), &rows, &rhs)? {
        Outcome::Feasible(x) => FeasibilityResult::Feasible(lift(x)),
        Outcome::Infeasible(y) => FeasibilityResult::Infeasible(lift(y)),
    })
}

/// Decides feasibility of `A x = b, x ≥ 0` exactly.
///
/// Runs on checked `i128` fractions first and restarts on big rationals if
/// any intermediate value overflows; both paths pivot identically, so the
/// answer does not depend on which one finished.
pub fn lp_feasible(system: &LinearSystem) -> FeasibilityResult {
    if let Some(result) = small_outcome(system) {
        return result;
    }
    lp_feasible_big(system)
}

fn lp_feasible_big(system: &LinearSystem) -> FeasibilityResult {
    match phase_one(system.num_vars(), &system.rows, &system.rhs).expect("big rationals do not overflow") {
        Outcome::Feasible(x) => FeasibilityResult::Feasible(x),
        Outcome::Infeasible(y) => FeasibilityResult::Infeasible(y),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, parse_rational, ratio};
    use proptest::prelude::*;

    fn labels(n: usize) -> Vec<VarLabel> {
        (0..n).map(|vertex| VarLabel { face: 0, vertex }).collect()
    }

    fn ints(values: &[i64]) -> Vec<Rational> {
        values.iter().map(|&v| int(v)).collect()
    }

    #[test]
    fn symmetric_pair_is_half_half() {
        let system = LinearSystem::from_rows(
            labels(2),
            [(ints(&[1, 1]), int(1)), (ints(&[1, -1]), int(0))],
        )
        .unwrap();
        let result = lp_feasible(&system);
        assert_eq!(
            result,
            FeasibilityResult::Feasible(vec![ratio(1, 2), ratio(1, 2)])
        );
    }

    #[test]
    fn negative_value_is_infeasible_with_certificate() {
        let system = LinearSystem::from_rows(labels(1), [(ints(&[1]), int(-1))]).unwrap();
        match lp_feasible(&system) {
            FeasibilityResult::Infeasible(y) => assert!(system.refuted_by(&y)),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn overlapping_segments_meet_between_one_and_two() {
        // λ0·0 + λ1·2 = μ0·1 + μ1·3, both convex.
        let system = LinearSystem::from_rows(
            labels(4),
            [
                (ints(&[1, 1, 0, 0]), int(1)),
                (ints(&[0, 0, 1, 1]), int(1)),
                (ints(&[0, 2, -1, -3]), int(0)),
            ],
        )
        .unwrap();
        let FeasibilityResult::Feasible(x) = lp_feasible(&system) else {
            panic!("segments [0,2] and [1,3] overlap");
        };
        assert!(system.satisfied_by(&x));
        let meet = &x[1] * int(2);
        assert!(meet >= int(1) && meet <= int(2));
    }

    #[test]
    fn ragged_rows_and_duplicate_labels_rejected() {
        let err = LinearSystem::from_rows(labels(2), [(ints(&[1]), int(0))]).unwrap_err();
        assert_eq!(
            err,
            KernelError::RaggedRow {
                row: 0,
                expected: 2,
                found: 1
            }
        );
        let dup = vec![VarLabel { face: 0, vertex: 1 }; 2];
        assert!(matches!(
            LinearSystem::new(dup),
            Err(KernelError::DuplicateLabel { face: 0, vertex: 1 })
        ));
    }

    #[test]
    fn zero_rows_are_harmless() {
        let system = LinearSystem::from_rows(
            labels(2),
            [(ints(&[0, 0]), int(0)), (ints(&[1, 1]), int(3)), (ints(&[0, 0]), int(0))],
        )
        .unwrap();
        let FeasibilityResult::Feasible(x) = lp_feasible(&system) else {
            panic!("feasible system");
        };
        assert!(system.satisfied_by(&x));
        let bad = LinearSystem::from_rows(labels(1), [(ints(&[0]), int(2))]).unwrap();
        let FeasibilityResult::Infeasible(y) = lp_feasible(&bad) else {
            panic!("0 = 2 is infeasible");
        };
        assert!(bad.refuted_by(&y));
    }

    #[test]
    fn huge_entries_take_the_big_path() {
        let huge = parse_rational("340282366920938463463374607431768211457").unwrap();
        let system = LinearSystem::from_rows(
            labels(2),
            [(vec![huge.clone(), int(1)], huge.clone()), (ints(&[1, 1]), int(1))],
        )
        .unwrap();
        assert!(small_outcome(&system).is_none());
        let FeasibilityResult::Feasible(x) = lp_feasible(&system) else {
            panic!("x = (1, 0) is feasible");
        };
        assert!(system.satisfied_by(&x));
    }

    #[test]
    fn empty_system_is_feasible() {
        let system = LinearSystem::new(labels(3)).unwrap();
        assert_eq!(
            lp_feasible(&system),
            FeasibilityResult::Feasible(vec![int(0), int(0), int(0)])
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn answers_always_certify(
            m in 1usize..5,
            n in 1usize..6,
            entries in proptest::collection::vec(-4i64..5, 30),
            rhs in proptest::collection::vec(-6i64..7, 5),
        ) {
            let rows = (0..m).map(|i| {
                (ints(&entries[i * n..i * n + n]), int(rhs[i]))
            });
            let system = LinearSystem::from_rows(labels(n), rows).unwrap();
            match lp_feasible(&system) {
                FeasibilityResult::Feasible(x) => prop_assert!(system.satisfied_by(&x)),
                FeasibilityResult::Infeasible(y) => prop_assert!(system.refuted_by(&y)),
            }
        }

        #[test]
        fn small_and_big_paths_agree(
            entries in proptest::collection::vec(-50i64..51, 20),
            rhs in proptest::collection::vec(-9i64..10, 4),
        ) {
            let rows = (0..4).map(|i| (ints(&entries[i * 5..i * 5 + 5]), int(rhs[i])));
            let system = LinearSystem::from_rows(labels(5), rows).unwrap();
            let small = small_outcome(&system).expect("tiny entries fit in i128");
            prop_assert_eq!(small, lp_feasible_big(&system));
        }

        #[test]
        fn deterministic(entries in proptest::collection::vec(-3i64..4, 12)) {
            let rows = (0..3).map(|i| (ints(&entries[i * 4..i * 4 + 4]), int(1)));
            let system = LinearSystem::from_rows(labels(4), rows).unwrap();
            prop_assert_eq!(lp_feasible(&system), lp_feasible(&system.clone()));
        }
    }
}
