//! Dense tableau simplex for small linear programs.
//!
//! Only the form `max c·x  s.t.  A x <= b, x >= 0` with `b >= 0` is needed:
//! the origin is feasible, so no phase one. Bland's rule keeps it from
//! cycling. Max-min problems over finite prior sets are solved as matrix
//! games through [`solve_matrix_game`].

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    /// Shadow prices of the `A x <= b` rows.
    pub dual: Vec<f64>,
    pub objective: f64,
}

pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::LpFailure("inconsistent dimensions".into()));
    }
    if b.iter().any(|v| *v < 0.0 || !v.is_finite()) {
        return Err(Error::LpFailure("right-hand side must be nonnegative".into()));
    }
    let width = n + m + 1;
    // rows 0..m: constraints, row m: objective (z - c·x = 0)
    let mut t = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        t[i][..n].copy_from_slice(&a[i]);
        t[i][n + i] = 1.0;
        t[i][width - 1] = b[i];
    }
    for j in 0..n {
        t[m][j] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let max_pivots = 50 * (n + m + 1).pow(2);
    for _ in 0..max_pivots {
        let Some(enter) = (0..n + m).find(|&j| t[m][j] < -PIVOT_EPS) else {
            let mut x = vec![0.0; n];
            for (i, &var) in basis.iter().enumerate() {
                if var < n {
                    x[var] = t[i][width - 1];
                }
            }
            let dual = (0..m).map(|i| t[m][n + i]).collect();
            return Ok(LpSolution {
                x,
                dual,
                objective: t[m][width - 1],
            });
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let coef = t[i][enter];
            if coef > PIVOT_EPS {
                let ratio = t[i][width - 1] / coef;
                let better = match leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < lr - PIVOT_EPS || (ratio <= lr + PIVOT_EPS && basis[i] < basis[li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (row, _) = leave.ok_or_else(|| Error::LpFailure("unbounded".into()))?;
        pivot(&mut t, row, enter);
        basis[row] = enter;
    }
    Err(Error::LpFailure("pivot limit reached".into()))
}

fn pivot(t: &mut [Vec<f64>], row: usize, col: usize) {
    let p = t[row][col];
    for v in t[row].iter_mut() {
        *v /= p;
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row {
            continue;
        }
        let f = r[col];
        if f != 0.0 {
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct MatrixGameSolution {
    /// Guaranteed value of `row_strategy`, recomputed from the payoff matrix.
    pub value: f64,
    pub row_strategy: Vec<f64>,
    pub column_strategy: Vec<f64>,
}

/// Solves `max_x min_j Σ_i x_i · payoff[i][j]` over the probability simplex.
pub fn solve_matrix_game(payoff: &[Vec<f64>]) -> Result<MatrixGameSolution> {
    let rows = payoff.len();
    let cols = payoff.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 || payoff.iter().any(|r| r.len() != cols) {
        return Err(Error::LpFailure("empty or ragged payoff matrix".into()));
    }
    let lo = payoff.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let shift = 1.0 - lo;
    let shifted: Vec<Vec<f64>> = payoff
        .iter()
        .map(|r| r.iter().map(|v| v + shift).collect())
        .collect();
    // column player: max Σ y  s.t.  shifted · y <= 1
    let sol = maximize(&vec![1.0; cols], &shifted, &vec![1.0; rows])?;
    if sol.objective <= 0.0 {
        return Err(Error::LpFailure("degenerate matrix game".into()));
    }
    let row_strategy = normalize(&sol.dual)?;
    let column_strategy = normalize(&sol.x)?;
    let value = (0..cols)
        .map(|j| (0..rows).map(|i| row_strategy[i] * payoff[i][j]).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    Ok(MatrixGameSolution {
        value,
        row_strategy,
        column_strategy,
    })
}

fn normalize(v: &[f64]) -> Result<Vec<f64>> {
    let clamped: Vec<f64> = v.iter().map(|x| x.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    if total <= 0.0 || !total.is_finite() {
        return Err(Error::LpFailure("no strategy recovered".into()));
    }
    Ok(clamped.into_iter().map(|x| x / total).collect())
}
