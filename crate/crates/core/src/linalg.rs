//! Exact Gaussian elimination for the tiny systems that fix free constants.

use num_traits::Zero;

use crate::rational::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum LinearSolution {
    Unique(Vec<Rat>),
    Inconsistent,
    Underdetermined,
}

/// Solves `rows · c = rhs` for `c` with `unknowns` entries.
pub(crate) fn solve(mut rows: Vec<Vec<Rat>>, mut rhs: Vec<Rat>, unknowns: usize) -> LinearSolution {
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..unknowns {
        let Some(p) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, p);
        rhs.swap(pivot_row, p);
        let lead = rows[pivot_row][col].clone();
        for r in 0..rows.len() {
            if r == pivot_row || rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &lead;
            let (pivot, target) = if r < pivot_row {
                let (head, tail) = rows.split_at_mut(pivot_row);
                (&tail[0], &mut head[r])
            } else {
                let (head, tail) = rows.split_at_mut(r);
                (&head[pivot_row], &mut tail[0])
            };
            for (t, p) in target[col..unknowns].iter_mut().zip(&pivot[col..unknowns]) {
                *t -= &factor * p;
            }
            let delta = &factor * &rhs[pivot_row];
            rhs[r] -= delta;
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if rhs[pivot_row..].iter().any(|v| !v.is_zero()) {
        return LinearSolution::Inconsistent;
    }
    if pivots.len() < unknowns {
        return LinearSolution::Underdetermined;
    }
    let solution = pivots
        .iter()
        .enumerate()
        .map(|(r, &c)| &rhs[r] / &rows[r][c])
        .collect();
    LinearSolution::Unique(solution)
}
