//! Symmetric tridiagonal eigenvalues by Sturm-count bisection.
//!
//! The Dirichlet blocks of the chain Laplacian are symmetric tridiagonal,
//! so a dense solver is never needed: the number of eigenvalues below a
//! shift follows from the signs of the `LDLᵀ` pivots, and bisection pins
//! each eigenvalue to an absolute tolerance independently.

use crate::error::{Error, Result};

const MAX_BISECTIONS: usize = 200;

/// Number of eigenvalues of the tridiagonal matrix `(diag, off)` strictly
/// below `x`, computed from the inertia of `T − x·I`.
pub fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    debug_assert_eq!(off.len() + 1, diag.len());
    // Pivot clamping keeps the recurrence finite; the count then belongs to
    // a matrix within the clamp of the original, which is far below the
    // bisection tolerance used here.
    let clamp = 1e-300_f64.max(f64::EPSILON * 16.0);
    let mut count = 0;
    let mut carry = 0.0; // e_{i−1}² / pivot_{i−1}
    for i in 0..diag.len() {
        let mut pivot = diag[i] - x - carry;
        if pivot.abs() < clamp {
            pivot = -clamp;
        }
        if pivot < 0.0 {
            count += 1;
        }
        carry = if i < off.len() {
            off[i] * off[i] / pivot
        } else {
            0.0
        };
    }
    count
}

/// All eigenvalues of the symmetric tridiagonal matrix `(diag, off)` in
/// ascending order, each located to absolute accuracy `tol`.
pub fn eigenvalues(diag: &[f64], off: &[f64], tol: f64) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    // Gershgorin enclosure of the whole spectrum.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut radius = 0.0;
        if i > 0 {
            radius += off[i - 1].abs();
        }
        if i < n - 1 {
            radius += off[i].abs();
        }
        lo = lo.min(diag[i] - radius);
        hi = hi.max(diag[i] + radius);
    }
    lo -= tol;
    hi += tol;

    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let mut a = lo;
        let mut b = hi;
        let mut iterations = 0;
        while b - a > tol {
            iterations += 1;
            if iterations > MAX_BISECTIONS {
                return Err(Error::EigenNonConvergence { block: k });
            }
            let mid = 0.5 * (a + b);
            if count_below(diag, off, mid) < k {
                a = mid;
            } else {
                b = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    Ok(out)
}
