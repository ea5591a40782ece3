//! Exact walk counting and the ring/hypercube closed-form bounds.
//!
//! Walk counts grow like `degree^s`, so everything here runs on
//! arbitrary-precision integers and converts to `f64` only at the very end.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::Hamiltonian;

/// `C(n, k)` exactly.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Double factorial with the conventions `(−1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> BigUint {
    let mut acc = BigUint::one();
    let mut k = n;
    while k > 1 {
        acc *= BigUint::from(k as u64);
        k -= 2;
    }
    acc
}

/// Closed walks of length `s` from a node of the `b`-dimensional hypercube
/// back to itself: `N(s) = 2^{−B} Σ_l C(B,l)(B−2l)^s`, evaluated exactly.
/// Zero for odd `s`.
pub fn hypercube_return_walks(b: u32, s: u32) -> BigUint {
    let mut total = BigInt::zero();
    for l in 0..=b {
        let base = BigInt::from(i64::from(b) - 2 * i64::from(l));
        total += BigInt::from(binomial(u64::from(b), u64::from(l))) * base.pow(s);
    }
    debug_assert!(!total.is_negative());
    // the moment sum is a walk count times 2^B, so the shift loses nothing
    let q = total.clone() >> b;
    debug_assert_eq!(q.clone() << b, total);
    q.to_biguint().unwrap_or_default()
}

/// Large-`B` limit of [`hypercube_return_walks`]: `B^{s/2} (s−1)!!` for even
/// `s`, zero for odd `s`.
pub fn hypercube_return_walks_asymptotic(b: u32, s: u32) -> f64 {
    if s % 2 == 1 {
        return 0.0;
    }
    let df = double_factorial(i64::from(s) - 1);
    f64::from(b).powi((s / 2) as i32) * big_to_f64(&df)
}

/// Ratio of two nonnegative big integers as `f64`, safe for operands far
/// beyond the float range.
pub fn big_ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    if den.is_zero() {
        return f64::INFINITY;
    }
    if num.is_zero() {
        return 0.0;
    }
    let shift = num.bits().max(den.bits()).saturating_sub(512);
    let n = big_to_f64(&(num >> shift));
    let d = big_to_f64(&(den >> shift));
    n / d
}

fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// `⟨b|Ĥ^s|a⟩` counted exactly on an unweighted adjacency Hamiltonian.
pub fn walk_count_exact(h: &Hamiltonian, s: usize, a: &str, b: &str) -> Result<BigUint> {
    if !h.is_adjacency() {
        return Err(Error::NotAdjacency);
    }
    let ia = h.label_index(a)?;
    let ib = h.label_index(b)?;
    let n = h.dim();
    let rows: Vec<Vec<usize>> = (0..n).map(|i| h.neighbors(i)).collect();
    let mut v = vec![BigUint::zero(); n];
    v[ia] = BigUint::one();
    for _ in 0..s {
        let mut next = vec![BigUint::zero(); n];
        for (i, row) in rows.iter().enumerate() {
            let mut acc = BigUint::zero();
            for &j in row {
                acc += &v[j];
            }
            next[i] = acc;
        }
        v = next;
    }
    Ok(core::mem::take(&mut v[ib]))
}

/// Sandwich for a ring initial state at distance ξ from the detector.
#[derive(Debug, Clone, PartialEq)]
pub struct RingClosedForm {
    /// Path-counting lower bound.
    pub lower: f64,
    /// Symmetry upper bound (`1/2`, or 1 for the unique opposite site).
    pub upper: f64,
}

/// Closed-form bounds for a localized start at distance `xi` on the even
/// `L`-ring: `1/(C(2ξ,ξ) − C(ξ,ξ/2)²) ≤ P_det(d±ξ) ≤ 1/2`, the squared
/// binomial omitted for odd ξ.
///
/// The opposite site `ξ = L/2` is its own equivalence class, so the upper
/// bound becomes 1; its lower bound uses the wrap-corrected walk counts
/// (`N_{r→d}(L/2) = 2` and `N_{d→d}(L) = C(L, L/2) + 2`).
pub fn ring_closed_form(l: usize, xi: usize) -> Result<RingClosedForm> {
    if l < 4 || l % 2 != 0 {
        return Err(Error::InvalidParameter(
            "ring closed forms need an even ring with L ≥ 4".to_string(),
        ));
    }
    if xi == 0 || xi > l / 2 {
        return Err(Error::InvalidParameter(alloc::format!(
            "distance must satisfy 1 ≤ ξ ≤ L/2, got ξ={xi} for L={l}"
        )));
    }
    if xi < l / 2 {
        let mut denom = binomial(2 * xi as u64, xi as u64);
        if xi % 2 == 0 {
            let half = binomial(xi as u64, xi as u64 / 2);
            denom -= &half * &half;
        }
        Ok(RingClosedForm {
            lower: big_ratio_f64(&BigUint::one(), &denom),
            upper: 0.5,
        })
    } else {
        let mut denom = binomial(l as u64, l as u64 / 2) + BigUint::from(2u32);
        if (l / 2) % 2 == 0 {
            let half = binomial(l as u64 / 2, l as u64 / 4);
            denom -= &half * &half;
        }
        Ok(RingClosedForm {
            lower: big_ratio_f64(&BigUint::from(4u32), &denom),
            upper: 1.0,
        })
    }
}

/// Sandwich plus exact value for a hypercube start at Hamming distance ξ.
#[derive(Debug, Clone, PartialEq)]
pub struct HypercubeClosedForm {
    /// Asymptotic path-counting lower bound (double-factorial form).
    pub lower: f64,
    /// The exact detection probability `1/C(B, ξ)`.
    pub exact: f64,
    /// Symmetry upper bound, equal to the exact value.
    pub upper: f64,
}

/// `ξ!² B^{−ξ} / ((2ξ−1)!! − [(ξ−1)!!]²) ≤ P_det(r_ξ) = 1/C(B,ξ)`; the
/// squared double factorial is omitted for odd ξ.
pub fn hypercube_closed_form(b: usize, xi: usize) -> Result<HypercubeClosedForm> {
    if b == 0 || xi == 0 || xi > b {
        return Err(Error::InvalidParameter(alloc::format!(
            "need 1 ≤ ξ ≤ B, got ξ={xi}, B={b}"
        )));
    }
    let factorial = |n: u64| -> BigUint {
        (1..=n).map(BigUint::from).fold(BigUint::one(), |a, x| a * x)
    };
    let num = factorial(xi as u64).pow(2);
    let mut denom_df = double_factorial(2 * xi as i64 - 1);
    if xi % 2 == 0 {
        let half = double_factorial(xi as i64 - 1);
        denom_df -= &half * &half;
    }
    let den = BigUint::from(b as u64).pow(xi as u32) * denom_df;
    let exact = big_ratio_f64(&BigUint::one(), &binomial(b as u64, xi as u64));
    Ok(HypercubeClosedForm {
        lower: big_ratio_f64(&num, &den),
        exact,
        upper: exact,
    })
}
