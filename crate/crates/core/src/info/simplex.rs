//! A small dense two-phase simplex solver.
//!
//! Solves `min c.x  s.t.  A x <= b, x >= 0` with no sign restriction on `b`.
//! Sized for the smoothing linear programs in this crate (a few hundred
//! variables); Bland's rule keeps it cycle-free.

use crate::error::InfoError;

const EPS: f64 = 1e-10;

pub(crate) fn solve_min(
    c: &[f64],
    a: &[Vec<f64>],
    b: &[f64],
) -> Result<(f64, Vec<f64>), InfoError> {
    let n = c.len();
    let m = a.len();
    assert!(a.iter().all(|row| row.len() == n));
    assert_eq!(b.len(), m);

    // Columns: n structural, m slacks, then one artificial per flipped row,
    // and the rhs last.
    let flipped: Vec<bool> = b.iter().map(|&v| v < 0.0).collect();
    let n_art = flipped.iter().filter(|&&f| f).count();
    let cols = n + m + n_art + 1;
    let mut t = vec![vec![0.0f64; cols]; m + 1];
    let mut basis = vec![0usize; m];

    let mut art = 0;
    for i in 0..m {
        let sgn = if flipped[i] { -1.0 } else { 1.0 };
        for j in 0..n {
            t[i][j] = sgn * a[i][j];
        }
        t[i][n + i] = sgn; // slack
        t[i][cols - 1] = sgn * b[i];
        if flipped[i] {
            t[i][n + m + art] = 1.0;
            basis[i] = n + m + art;
            art += 1;
        } else {
            basis[i] = n + i;
        }
    }

    // Phase 1: minimize the sum of artificials. Artificial columns start
    // basic and are never allowed to re-enter, so entering candidates are
    // the structural and slack columns only.
    if n_art > 0 {
        for j in 0..cols {
            let mut v = 0.0;
            for (i, &f) in flipped.iter().enumerate() {
                if f {
                    v += t[i][j];
                }
            }
            t[m][j] = -v;
        }
        run(&mut t, &mut basis, n + m)?;
        if t[m][cols - 1].abs() > 1e-7 {
            return Err(InfoError::LpFailure);
        }
        // Drive any artificial still in the basis out of it.
        for i in 0..m {
            if basis[i] >= n + m {
                if let Some(j) = (0..n + m).find(|&j| t[i][j].abs() > EPS) {
                    pivot(&mut t, i, j);
                    basis[i] = j;
                }
            }
        }
    }

    // Phase 2: original objective expressed in the current basis.
    for j in 0..cols {
        t[m][j] = if j < n { c[j] } else { 0.0 };
    }
    for i in 0..m {
        if basis[i] < n {
            let coef = t[m][basis[i]];
            if coef.abs() > 0.0 {
                for j in 0..cols {
                    t[m][j] -= coef * t[i][j];
                }
            }
        }
    }
    run(&mut t, &mut basis, n + m)?;

    let mut x = vec![0.0f64; n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = t[i][cols - 1];
        }
    }
    Ok((-t[m][cols - 1], x))
}

/// Bland's-rule simplex iterations on a tableau whose objective row is last.
fn run(t: &mut [Vec<f64>], basis: &mut [usize], n_cols_active: usize) -> Result<(), InfoError> {
    let m = basis.len();
    let cols = t[0].len();
    for _ in 0..200_000 {
        let Some(enter) = (0..n_cols_active).find(|&j| t[m][j] < -EPS) else {
            return Ok(());
        };
        let mut leave: Option<(usize, f64)> = None;
        for (i, row) in t.iter().enumerate().take(m) {
            if row[enter] > EPS {
                let ratio = row[cols - 1] / row[enter];
                let better = match leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < lr - EPS || (ratio < lr + EPS && basis[i] < basis[li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leave else {
            return Err(InfoError::LpFailure); // unbounded
        };
        pivot(t, row, enter);
        basis[row] = enter;
    }
    Err(InfoError::LpFailure)
}

fn pivot(t: &mut [Vec<f64>], row: usize, col: usize) {
    let cols = t[0].len();
    let inv = 1.0 / t[row][col];
    for j in 0..cols {
        t[row][j] *= inv;
    }
    for i in 0..t.len() {
        if i != row && t[i][col].abs() > 0.0 {
            let f = t[i][col];
            for j in 0..cols {
                t[i][j] -= f * t[row][j];
            }
        }
    }
}
