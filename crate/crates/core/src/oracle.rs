//! Independent checks of a closed form: stepping the recurrence in exact
//! arithmetic, reading back the initial conditions, and comparing truncated
//! transform sums against the symbolic image.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{self, LinearSolution};
use crate::rational::{self, Rat};
use crate::seq::SeqExpr;
use crate::sexpr::SExpr;
use crate::solver::{Coefficient, DifferenceEquation, SolveReport};

/// Truncation target for the numeric transform check.
pub const TAIL_TARGET: f64 = 1e-12;
/// Numeric errors may reach this multiple of the tail bound.
pub const TAIL_SLACK: f64 = 10.0;
const MAX_TERMS: usize = 200_000;

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub check_to: usize,
    pub s_grid: Vec<f64>,
    pub exec: Exec,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            check_to: 1000,
            s_grid: vec![0.5, 1.0, 2.0],
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationResult {
    /// Every `n` up to this index satisfies the recurrence check.
    pub recurrence_checked_to: usize,
    pub ic_satisfied: bool,
    pub max_index_checked: usize,
    /// Worst `|partial sum - image|` over the s grid.
    pub numeric_transform_max_error: f64,
    pub numeric_within_tail: bool,
    pub first_mismatch: Option<usize>,
    pub oracle_error: Option<String>,
    pub passed: bool,
}

impl fmt::Display for VerificationResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(e) = &self.oracle_error {
            return write!(f, "oracle error: {e}");
        }
        match self.first_mismatch {
            Some(n) => write!(f, "first mismatch at n = {n}")?,
            None => write!(f, "recurrence holds to n = {}", self.recurrence_checked_to)?,
        }
        write!(
            f,
            ", initial conditions {}, max numeric error {:.3e}{}",
            if self.ic_satisfied { "hold" } else { "fail" },
            self.numeric_transform_max_error,
            if self.numeric_within_tail { "" } else { " (exceeds tail bound)" }
        )
    }
}

/// Exact values `f(1..=n_max)` obtained by stepping the recurrence forward
/// from the initial conditions alone.
///
/// The unknown leading values enter the trajectory affinely, so they are
/// recovered by stepping once per unknown and solving the conditions.
pub fn step_recurrence(eq: &DifferenceEquation, n_max: usize) -> Result<Vec<Rat>> {
    eq.validate()?;
    if let Some(ic) = eq.ics.iter().find(|ic| ic.index > n_max) {
        return Err(Error::AnchorUnreachable {
            index: ic.index,
            horizon: n_max,
        });
    }
    let order = eq.order as usize;
    let reach = eq.ics.iter().map(|ic| ic.reach()).max().unwrap_or(0).max(order);
    let len = reach.max(n_max);
    let rhs = eq.rhs.eval_range(len);
    let step = |start: &[Rat], len: usize| -> Vec<Rat> {
        let mut f = start.to_vec();
        f.reserve(len);
        for n in 1..=len - order {
            let next = match (eq.coefficient, order) {
                (Coefficient::One, 1) => rational::add(&f[n - 1], &rhs[n - 1]),
                (Coefficient::N, _) => {
                    rational::add(&f[n - 1], &(&rhs[n - 1] / rational::int(n as i64)))
                }
                _ => &rhs[n - 1] + rational::int(2) * &f[n] - &f[n - 1],
            };
            f.push(next);
        }
        f
    };
    // Fit the leading values on the prefix the conditions read, then step once.
    let zeros = vec![Rat::zero(); order];
    let base = step(&zeros, reach);
    let basis: Vec<Vec<Rat>> = (0..order)
        .map(|i| {
            let mut unit = zeros.clone();
            unit[i] = rational::one();
            step(&unit, reach).iter().zip(&base).map(|(a, b)| a - b).collect()
        })
        .collect();
    let rows = eq
        .ics
        .iter()
        .map(|ic| basis.iter().map(|b| ic.read(b)).collect())
        .collect();
    let targets = eq.ics.iter().map(|ic| &ic.value - ic.read(&base)).collect();
    let describe = || {
        eq.ics
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ")
    };
    let start = match linalg::solve(rows, targets, order) {
        LinearSolution::Unique(c) => c,
        LinearSolution::Inconsistent => return Err(Error::InconsistentIc(describe())),
        LinearSolution::Underdetermined => return Err(Error::ConstantUnsolvable(describe())),
    };
    let mut f = step(&start, len);
    f.truncate(n_max);
    Ok(f)
}

/// `Σ_{n=1}^{terms} e^{-sn} f(n)` and a bound on the omitted tail.
pub fn truncated_transform(f: &SeqExpr, s: f64, terms: usize) -> (f64, f64) {
    let values = f.eval_range(terms);
    let sum = values
        .iter()
        .enumerate()
        .rev()
        .map(|(i, v)| (-s * (i + 1) as f64).exp() * rational::to_f64(v))
        .sum();
    (sum, tail_bound(f, s, terms))
}

/// With `|f(n)| <= M n^d`, the tail after `N` terms is dominated by a
/// geometric series of ratio `q = e^{-s} ((N+2)/(N+1))^d`.
pub fn tail_bound(f: &SeqExpr, s: f64, terms: usize) -> f64 {
    let (m, d) = f.growth_bound();
    if m == 0.0 {
        return 0.0;
    }
    let next = (terms + 1) as f64;
    let q = (-s).exp() * ((next + 1.0) / next).powi(d as i32);
    if s <= 0.0 || s.is_nan() || q >= 1.0 {
        return f64::INFINITY;
    }
    m * next.powi(d as i32) * (-s * next).exp() / (1.0 - q)
}

/// Smallest truncation whose tail bound is below `target`.
pub fn terms_for_tail(f: &SeqExpr, s: f64, target: f64) -> Option<usize> {
    if s <= 0.0 || s.is_nan() {
        return None;
    }
    (1..=MAX_TERMS).find(|&n| tail_bound(f, s, n) < target)
}

pub fn verify(report: &SolveReport, check_to: usize, s_grid: &[f64]) -> VerificationResult {
    verify_with(
        report,
        &VerifyOptions {
            check_to,
            s_grid: s_grid.to_vec(),
            exec: Exec::default(),
        },
    )
}

pub fn verify_with(report: &SolveReport, opts: &VerifyOptions) -> VerificationResult {
    verify_solution(&report.equation, &report.solution, &report.image, opts)
}

/// Checks `solution` against `eq` up to `opts.check_to` and its transform
/// against `image` on `opts.s_grid`.
pub fn verify_solution(
    eq: &DifferenceEquation,
    solution: &SeqExpr,
    image: &SExpr,
    opts: &VerifyOptions,
) -> VerificationResult {
    let n_max = opts.check_to;
    let mut result = VerificationResult {
        recurrence_checked_to: 0,
        ic_satisfied: false,
        max_index_checked: n_max,
        numeric_transform_max_error: 0.0,
        numeric_within_tail: true,
        first_mismatch: None,
        oracle_error: None,
        passed: false,
    };

    let reach = eq.ics.iter().map(|ic| ic.reach()).max().unwrap_or(0);
    let closed = solution.eval_range_with(n_max.max(reach), opts.exec);
    result.ic_satisfied = eq.ics.iter().all(|ic| ic.read(&closed) == ic.value);

    match step_recurrence(eq, n_max) {
        Ok(trajectory) => {
            let same = opts
                .exec
                .map_range(1, n_max, |n| closed[n - 1] == trajectory[n - 1]);
            result.first_mismatch = same.iter().position(|ok| !ok).map(|i| i + 1);
            result.recurrence_checked_to = result.first_mismatch.map_or(n_max, |m| m - 1);
        }
        Err(e) => result.oracle_error = Some(e.to_string()),
    }

    let numeric = opts.exec.map_slice(&opts.s_grid, |&s| {
        let Some(terms) = terms_for_tail(solution, s, TAIL_TARGET) else {
            return (f64::INFINITY, false);
        };
        let (value, tail) = truncated_transform(solution, s, terms);
        let err = (value - image.eval_numeric(s)).abs();
        (err, err <= TAIL_SLACK * tail.max(f64::MIN_POSITIVE) || err == 0.0)
    });
    for (err, ok) in numeric {
        result.numeric_transform_max_error = result.numeric_transform_max_error.max(err);
        result.numeric_within_tail &= ok;
    }

    result.passed = result.oracle_error.is_none()
        && result.first_mismatch.is_none()
        && result.ic_satisfied
        && result.numeric_within_tail;
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::seq::{linear_combine, RecipPow};
    use crate::solver::InitialCondition;
    use crate::transform::transform;

    fn first_order(c: Coefficient, rhs: SeqExpr, ic: InitialCondition) -> DifferenceEquation {
        DifferenceEquation::new(c, 1, rhs, vec![ic]).unwrap()
    }

    #[test]
    fn stepping_examples() {
        let eq = first_order(Coefficient::One, SeqExpr::n(), InitialCondition::value(1, int(1)));
        assert_eq!(step_recurrence(&eq, 4).unwrap(), vec![int(1), int(2), int(4), int(7)]);

        let eq = DifferenceEquation::new(
            Coefficient::One,
            2,
            SeqExpr::n(),
            vec![
                InitialCondition::value(1, int(1)),
                InitialCondition::first_difference(1, int(2)),
            ],
        )
        .unwrap();
        assert_eq!(step_recurrence(&eq, 4).unwrap(), vec![int(1), int(3), int(6), int(11)]);

        let eq = first_order(Coefficient::N, SeqExpr::one(), InitialCondition::value(2, int(2)));
        assert_eq!(
            step_recurrence(&eq, 4).unwrap(),
            vec![int(1), int(2), rat(5, 2), rat(17, 6)]
        );
    }

    #[test]
    fn unreachable_anchor() {
        let eq = first_order(Coefficient::One, SeqExpr::n(), InitialCondition::value(10, int(1)));
        assert_eq!(
            step_recurrence(&eq, 5),
            Err(Error::AnchorUnreachable { index: 10, horizon: 5 })
        );
    }

    #[test]
    fn truncated_examples() {
        let terms = terms_for_tail(&SeqExpr::one(), 1.0, TAIL_TARGET).unwrap();
        let (v, tail) = truncated_transform(&SeqExpr::one(), 1.0, terms);
        let exact = 1.0 / (std::f64::consts::E - 1.0);
        assert!((v - exact).abs() <= tail * TAIL_SLACK);
        assert!(tail < TAIL_TARGET);

        let recip = SeqExpr::Recip(RecipPow::One);
        let (v, _) = truncated_transform(&recip, 1.0, 200);
        let exact = 1.0 - (std::f64::consts::E - 1.0).ln();
        assert!((v - exact).abs() < 1e-12);

        assert_eq!(truncated_transform(&SeqExpr::zero(), 1.0, 10), (0.0, 0.0));
        assert_eq!(terms_for_tail(&SeqExpr::one(), -1.0, 1e-12), None);
    }

    #[test]
    fn tail_bound_dominates_true_tail() {
        let f = SeqExpr::Mono(3);
        for terms in [5usize, 20, 60] {
            let s = 0.5;
            let bound = tail_bound(&f, s, terms);
            let true_tail: f64 = (terms + 1..terms + 2000)
                .map(|n| (n as f64).powi(3) * (-s * n as f64).exp())
                .sum();
            assert!(true_tail <= bound, "{terms}: {true_tail} > {bound}");
        }
    }

    #[test]
    fn corrupted_solution_is_caught() {
        let eq = first_order(Coefficient::One, SeqExpr::n(), InitialCondition::value(1, int(1)));
        let good = linear_combine(&[
            (int(1), SeqExpr::one()),
            (rat(1, 2), SeqExpr::Mono(2)),
            (rat(-1, 2), SeqExpr::n()),
        ]);
        let image = transform(&good).unwrap();
        let opts = VerifyOptions::default();
        assert!(verify_solution(&eq, &good, &image, &opts).passed);

        let bad = linear_combine(&[(int(1), good.clone()), (int(1), SeqExpr::one())]);
        let result = verify_solution(&eq, &bad, &image, &opts);
        assert!(!result.passed);
        assert_eq!(result.first_mismatch, Some(1));
        assert!(!result.ic_satisfied);
        assert!(!result.numeric_within_tail);
    }
}
