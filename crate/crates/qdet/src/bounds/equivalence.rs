//! Equivalent initial states and the symmetry upper bound `P_det ≤ 1/ν`.
//!
//! Basis states `|r'⟩` with `⟨d|Û(t)|r'⟩ = ⟨d|Û(t)|r⟩` for all times produce
//! identical first-detection amplitudes, so by superposition the auxiliary
//! uniform state over the class detects with `ν · P_det(r) ≤ 1`. Equality of
//! the amplitudes at all times is equivalent to equality of the moments
//! `⟨d|Ĥ^k|·⟩` up to the degree of the minimal polynomial, which the scan
//! detects by Krylov termination (never beyond `dim − 1` powers).

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::detection::exact_pdet;
use crate::error::{Error, Result};
use crate::graph::{Hamiltonian, State};
use crate::linalg;
use crate::spectral::SpectralDecomposition;
use crate::tol;

/// A set of basis states indistinguishable from the representative by the
/// detector at all times.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceClass {
    /// The queried label.
    pub representative: String,
    /// All labels in the class (always contains the representative).
    pub members: Vec<String>,
    /// The amplitude-equality tolerance used.
    pub tolerance: f64,
}

impl EquivalenceClass {
    /// Class size ν.
    pub fn nu(&self) -> usize {
        self.members.len()
    }
}

/// Finds every basis label whose detection amplitudes match those of `r`:
/// `⟨d|Ĥ^k|r'⟩ = ⟨d|Ĥ^k|r⟩` within `eps_eq` (normalized by `‖Ĥ^k d‖`) for
/// all powers until the Krylov space of `|d⟩` closes.
pub fn equivalent_states(
    h: &Hamiltonian,
    d: &State,
    r: &str,
    eps_eq: f64,
) -> Result<EquivalenceClass> {
    let n = h.dim();
    if d.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: d.dim(),
        });
    }
    let ir = h.label_index(r)?;

    let mut candidates: Vec<usize> = (0..n).collect();
    // ⟨d|Ĥ^k|r'⟩ = conj((Ĥ^k d)_{r'}), so comparing components of the
    // renormalized iterate compares the normalized moments directly.
    let mut z = d.amplitudes().to_vec();
    let mut krylov: Vec<Vec<Complex64>> = Vec::new();
    for _ in 0..n {
        let zr = z[ir];
        candidates.retain(|&j| (z[j] - zr).norm() <= eps_eq);
        let mut w = z.clone();
        let residual = linalg::orthogonalize_twice(&mut w, krylov.iter().map(|b| b.as_slice()));
        if residual < tol::EPS_RANK {
            break;
        }
        linalg::normalize(&mut w);
        krylov.push(w);
        z = h.apply(&z);
        if linalg::normalize(&mut z) == 0.0 {
            break;
        }
    }

    let labels = h.labels();
    Ok(EquivalenceClass {
        representative: labels[ir].clone(),
        members: candidates.into_iter().map(|j| labels[j].clone()).collect(),
        tolerance: eps_eq,
    })
}

/// The symmetry upper bound together with its diagnostic identity check.
#[derive(Debug, Clone)]
pub struct SymmetryBound {
    /// `1/ν`.
    pub upper: f64,
    /// Class size.
    pub nu: usize,
    /// The auxiliary uniform state `Σ_j |r_j⟩ / √ν`.
    pub aus: State,
    /// `|P_det(r) − P_det(AUS)/ν|`, verified rather than assumed.
    pub identity_residual: f64,
}

/// Builds the AUS of a class and returns `1/ν`, checking the identity
/// `P_det(r) = P_det(AUS)/ν` through the exact formula.
pub fn symmetry_bound(
    class: &EquivalenceClass,
    decomp: &SpectralDecomposition,
    d: &State,
    h: &Hamiltonian,
) -> Result<SymmetryBound> {
    let n = decomp.dim();
    let nu = class.nu();
    if nu == 0 {
        return Err(Error::InvalidParameter("empty equivalence class".into()));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); n];
    for label in &class.members {
        amps[h.label_index(label)?] = Complex64::new(1.0, 0.0);
    }
    let aus = State::new(amps)?;
    let rep = State::localized(n, h.label_index(&class.representative)?)?;
    let p_rep = exact_pdet(decomp, d, &rep)?;
    let p_aus = exact_pdet(decomp, d, &aus)?;
    Ok(SymmetryBound {
        upper: 1.0 / nu as f64,
        nu,
        aus,
        identity_residual: (p_rep - p_aus / nu as f64).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_hamiltonian, make_state, GraphSpec, StateSpec};
    use crate::spectral::eigendecompose;

    fn ring(l: usize) -> Hamiltonian {
        build_hamiltonian(&GraphSpec::Ring { sites: l }).unwrap()
    }

    #[test]
    fn ring_reflection_classes() {
        let h = ring(8);
        let d = State::localized(8, 0).unwrap();
        let class = equivalent_states(&h, &d, "3", tol::EPS_EQ).unwrap();
        assert_eq!(class.members, vec!["3".to_string(), "5".to_string()]);
        assert_eq!(class.nu(), 2);
        // the opposite site is unique
        let opposite = equivalent_states(&h, &d, "4", tol::EPS_EQ).unwrap();
        assert_eq!(opposite.members, vec!["4".to_string()]);
        // so is the detection site itself
        let own = equivalent_states(&h, &d, "0", tol::EPS_EQ).unwrap();
        assert_eq!(own.nu(), 1);
    }

    #[test]
    fn hypercube_classes_are_hamming_shells() {
        for b in [3usize, 5] {
            let h = build_hamiltonian(&GraphSpec::Hypercube { bits: b }).unwrap();
            let d = State::localized(h.dim(), 0).unwrap();
            for xi in 1..=b {
                let rep: String = {
                    let mut s = "0".repeat(b - xi);
                    s.push_str(&"1".repeat(xi));
                    s
                };
                let class = equivalent_states(&h, &d, &rep, tol::EPS_EQ).unwrap();
                let expected: usize = (0..xi).fold(1, |acc, i| acc * (b - i) / (i + 1));
                assert_eq!(class.nu(), expected, "B={b} ξ={xi}");
                for label in &class.members {
                    assert_eq!(label.matches('1').count(), xi);
                }
            }
        }
    }

    #[test]
    fn uniform_detector_makes_all_ring_nodes_equivalent() {
        let h = ring(6);
        let d = make_state(&h, &StateSpec::Uniform(vec![])).unwrap();
        let class = equivalent_states(&h, &d, "2", tol::EPS_EQ).unwrap();
        assert_eq!(class.nu(), 6);
    }

    #[test]
    fn symmetry_bound_identity_holds() {
        let h = ring(6);
        let decomp = eigendecompose(&h).unwrap();
        let d = State::localized(6, 0).unwrap();
        let class = equivalent_states(&h, &d, "1", tol::EPS_EQ).unwrap();
        let sym = symmetry_bound(&class, &decomp, &d, &h).unwrap();
        assert_eq!(sym.nu, 2);
        assert!((sym.upper - 0.5).abs() < 1e-15);
        assert!(sym.identity_residual < 1e-9);
        let amp = sym.aus.amplitudes();
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert!((amp[1].re - r).abs() < 1e-12);
        assert!((amp[5].re - r).abs() < 1e-12);
    }

    #[test]
    fn uniform_detector_upper_bound_is_exact() {
        for l in [4usize, 6, 12] {
            let h = ring(l);
            let decomp = eigendecompose(&h).unwrap();
            let d = make_state(&h, &StateSpec::Uniform(vec![])).unwrap();
            let class = equivalent_states(&h, &d, "1", tol::EPS_EQ).unwrap();
            assert_eq!(class.nu(), l);
            let sym = symmetry_bound(&class, &decomp, &d, &h).unwrap();
            let psi = State::localized(l, 1).unwrap();
            let exact = exact_pdet(&decomp, &d, &psi).unwrap();
            assert!((sym.upper - exact).abs() < 1e-10, "L={l}");
            assert!(sym.identity_residual < 1e-9);
        }
    }

    #[test]
    fn disorder_collapses_classes_to_singletons() {
        let h = crate::graph::add_disorder(&ring(6), 3, 1.0).unwrap();
        let d = State::localized(6, 0).unwrap();
        for node in 0..6 {
            let class =
                equivalent_states(&h, &d, &node.to_string(), tol::EPS_EQ).unwrap();
            assert_eq!(class.nu(), 1, "node {node}");
        }
    }
}
