//! Cyclic Jacobi eigensolver for dense real symmetric matrices.
//!
//! Jacobi is chosen over tridiagonalization because the accumulated rotation
//! matrix is orthogonal to machine precision, which the degenerate-level
//! bookkeeping downstream depends on. Rotations are applied to whole rows and
//! mirrored into the columns afterwards, which keeps the inner loops on
//! contiguous memory.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Diagonalizes a row-major symmetric matrix, returning `(eigenvalues, v)`
/// where row `k` of `v` is the eigenvector of `eigenvalues[k]`. Neither is
/// sorted.
pub(crate) fn jacobi_symmetric(mut a: Vec<f64>, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    debug_assert_eq!(a.len(), n * n);
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    if n < 2 {
        let d = (0..n).map(|i| a[i * n + i]).collect();
        return Ok((d, v));
    }

    // Running diagonal with per-sweep refresh: b is the settled part, z the
    // increments of the current sweep. Refreshing once per sweep keeps the
    // rotation-increment rounding from compounding over millions of updates.
    let mut d: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    for sweep in 1..=MAX_SWEEPS {
        let mut sm = 0.0;
        for p in 0..n - 1 {
            for q in p + 1..n {
                sm += a[p * n + q].abs();
            }
        }
        if sm == 0.0 {
            return Ok((d, v));
        }
        let tresh = if sweep < 4 {
            0.2 * sm / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let g = 100.0 * apq.abs();
                // Entries too small to move the diagonal get zeroed outright.
                if sweep > 4 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                if apq.abs() <= tresh {
                    continue;
                }
                let diff = d[q] - d[p];
                let t = if diff.abs() + g == diff.abs() {
                    apq / diff
                } else {
                    let theta = 0.5 * diff / apq;
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let delta = t * apq;
                z[p] -= delta;
                z[q] += delta;
                d[p] -= delta;
                d[q] += delta;

                rotate_rows(&mut a, n, p, q, c, s);
                // The 2x2 pivot block is set from the closed forms instead of
                // the generic row/column arithmetic: exact zero off-diagonal.
                a[p * n + p] = d[p];
                a[q * n + q] = d[q];
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                // A' is symmetric, so its updated columns equal its rows.
                for i in 0..n {
                    if i != p && i != q {
                        a[i * n + p] = a[p * n + i];
                        a[i * n + q] = a[q * n + i];
                    }
                }
                rotate_rows(&mut v, n, p, q, c, s);
            }
        }
        for i in 0..n {
            b[i] += z[i];
            d[i] = b[i];
            z[i] = 0.0;
            a[i * n + i] = d[i];
        }
    }

    let mut residual = 0.0;
    for p in 0..n - 1 {
        for q in p + 1..n {
            residual += a[p * n + q] * a[p * n + q];
        }
    }
    Err(Error::NoConvergence {
        residual: residual.sqrt(),
    })
}

/// Applies the plane rotation to rows `p` and `q`: `(r_p, r_q) ←
/// (c·r_p − s·r_q, s·r_p + c·r_q)`.
fn rotate_rows(m: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    debug_assert!(p < q);
    let (head, tail) = m.split_at_mut(q * n);
    let rp = &mut head[p * n..p * n + n];
    let rq = &mut tail[..n];
    for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
        let xv = *x;
        let yv = *y;
        *x = c * xv - s * yv;
        *y = s * xv + c * yv;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(mat: Vec<f64>, n: usize) {
        let (vals, vecs) = jacobi_symmetric(mat.clone(), n).unwrap();
        // V orthonormal
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|k| vecs[i * n + k] * vecs[j * n + k]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-12, "orthonormality ({i},{j})");
            }
        }
        // A v = λ v
        for k in 0..n {
            for i in 0..n {
                let av: f64 = (0..n).map(|j| mat[i * n + j] * vecs[k * n + j]).sum();
                assert!(
                    (av - vals[k] * vecs[k * n + i]).abs() < 1e-10,
                    "eigen equation k={k} i={i}"
                );
            }
        }
    }

    #[test]
    fn two_by_two() {
        check(vec![0.0, 1.0, 1.0, 0.0], 2);
    }

    #[test]
    fn already_diagonal() {
        let (vals, _) = jacobi_symmetric(vec![3.0, 0.0, 0.0, -1.0], 2).unwrap();
        assert_eq!(vals, vec![3.0, -1.0]);
    }

    #[test]
    fn random_symmetric_10() {
        // LCG-generated deterministic test matrix
        let n = 10;
        let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let x = next();
                m[i * n + j] = x;
                m[j * n + i] = x;
            }
        }
        check(m, n);
    }

    #[test]
    fn degenerate_spectrum_keeps_orthogonality() {
        // 4-cycle adjacency has a doubly degenerate zero eigenvalue
        let m = vec![
            0.0, 1.0, 0.0, 1.0, //
            1.0, 0.0, 1.0, 0.0, //
            0.0, 1.0, 0.0, 1.0, //
            1.0, 0.0, 1.0, 0.0,
        ];
        let (mut vals, _) = jacobi_symmetric(m.clone(), 4).unwrap();
        check(m, 4);
        vals.sort_by(f64::total_cmp);
        let expect = [-2.0, 0.0, 0.0, 2.0];
        for (a, b) in vals.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
