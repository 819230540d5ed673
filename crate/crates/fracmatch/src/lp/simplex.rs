//! Dense primal simplex over exact rationals for the packing program
//!
//! ```text
//! maximize   sum x_e
//! subject to sum of x_e over edges e containing v  <=  cap   (one row per vertex)
//!            x >= 0
//! ```
//!
//! The slack basis is feasible (the origin satisfies every row), so no
//! phase-1 is needed. Pivots follow Bland's rule: entering variable is the
//! lowest index with a positive reduced cost, leaving row is the lowest
//! basic index among the minimum ratios. Degenerate pivots are tolerated;
//! Bland's rule rules out cycling, so the loop terminates.

use num_traits::{One, Zero};

use crate::rational::Rational;

pub(crate) struct Optimum {
    pub objective: Rational,
    /// Value per structural column, indexed like the input columns.
    pub primal: Vec<Rational>,
    /// Row price per constraint, nonnegative at optimality.
    pub dual: Vec<Rational>,
}

/// Solves the packing program. `columns[e]` is the vertex-incidence bitmask
/// of structural column `e`; every column must be nonzero, which keeps the
/// program bounded. `rows <= 64`.
pub(crate) fn solve_packing(rows: usize, columns: &[u64], cap: &Rational) -> Optimum {
    debug_assert!(rows <= 64);
    debug_assert!(columns.iter().all(|&c| c != 0));
    let m = columns.len();
    let total = m + rows;

    let mut tableau: Vec<Vec<Rational>> = (0..rows)
        .map(|v| {
            let mut row = vec![Rational::zero(); total];
            for (e, &mask) in columns.iter().enumerate() {
                if mask & (1u64 << v) != 0 {
                    row[e] = Rational::one();
                }
            }
            row[m + v] = Rational::one();
            row
        })
        .collect();
    let mut rhs = vec![cap.clone(); rows];
    // Reduced costs; optimal once none is positive.
    let mut reduced: Vec<Rational> = (0..total)
        .map(|j| if j < m { Rational::one() } else { Rational::zero() })
        .collect();
    let mut objective = Rational::zero();
    let mut basis: Vec<usize> = (m..total).collect();

    while let Some(entering) = reduced.iter().position(|r| r.is_positive()) {
        let mut choice: Option<(usize, Rational)> = None;
        for i in 0..rows {
            if !tableau[i][entering].is_positive() {
                continue;
            }
            let ratio = &rhs[i] / &tableau[i][entering];
            let better = match &choice {
                None => true,
                Some((row, best)) => {
                    ratio < *best || (ratio == *best && basis[i] < basis[*row])
                }
            };
            if better {
                choice = Some((i, ratio));
            }
        }
        let (pivot_row, _) = choice.expect("every column has a positive entry");

        // Normalize the pivot row, then eliminate the entering column
        // everywhere else, including the reduced-cost row.
        let mut prow = std::mem::take(&mut tableau[pivot_row]);
        let mut prhs = std::mem::replace(&mut rhs[pivot_row], Rational::zero());
        let inv = prow[entering].recip();
        if !inv.is_one() {
            for cell in prow.iter_mut() {
                if !cell.is_zero() {
                    *cell *= &inv;
                }
            }
            prhs *= &inv;
        }
        for i in 0..rows {
            if i == pivot_row {
                continue;
            }
            let factor = tableau[i][entering].clone();
            if factor.is_zero() {
                continue;
            }
            for (cell, pcell) in tableau[i].iter_mut().zip(&prow) {
                if !pcell.is_zero() {
                    *cell -= &(&factor * pcell);
                }
            }
            rhs[i] -= &(&factor * &prhs);
        }
        let factor = reduced[entering].clone();
        for (cell, pcell) in reduced.iter_mut().zip(&prow) {
            if !pcell.is_zero() {
                *cell -= &(&factor * pcell);
            }
        }
        objective += &(&factor * &prhs);

        tableau[pivot_row] = prow;
        rhs[pivot_row] = prhs;
        basis[pivot_row] = entering;
    }

    let mut primal = vec![Rational::zero(); m];
    for (i, &var) in basis.iter().enumerate() {
        if var < m {
            primal[var] = rhs[i].clone();
        }
    }
    // The reduced cost of slack v at optimality is minus the price of row v.
    let dual = (0..rows).map(|v| -&reduced[m + v]).collect();
    Optimum {
        objective,
        primal,
        dual,
    }
}
