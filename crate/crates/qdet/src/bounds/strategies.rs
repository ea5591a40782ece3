//! Lower bounds built from one or two bright seed states.
//!
//! Omitting bright basis states from `P_det = Σ_l |⟨β_l|ψ⟩|²` can only lower
//! the sum, so any pair of orthonormal bright states gives
//! `P_det ≥ |⟨β₁|ψ⟩|² + |⟨β₂|ψ⟩|²`. The seed choices follow the four named
//! strategies (regular, alternative, opposite, optimized); the uncertainty
//! relation and the walk-counting bound are the `β₁ = |d⟩` case written in
//! terms of energy moments and path counts respectively.
//!
//! All power iterates are renormalized at every step, so the sweeps stay
//! finite at any `s` even though the raw moments grow like `degree^s`.

use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::combinatorics::{big_ratio_f64, walk_count_exact};
use crate::detection::brightness_certificate;
use crate::error::{Error, Result};
use crate::graph::{distance, Hamiltonian, State};
use crate::linalg;
use crate::tol;

/// Certification threshold for seeds that are not powers of `Ĥ|d⟩`.
pub const BRIGHT_CERT_THRESHOLD: f64 = 1.0 - 1e-9;

/// Normalized directions of `Ĥ^s` applied to a seed, `s = 0..=s_max`, with
/// the log of the accumulated norm so raw moments can be reconstructed.
pub(crate) struct PowerIterates {
    states: Vec<Vec<Complex64>>,
    log_norms: Vec<f64>,
}

impl PowerIterates {
    pub(crate) fn new(h: &Hamiltonian, seed: &[Complex64], s_max: usize) -> Self {
        let mut states = Vec::with_capacity(s_max + 1);
        let mut log_norms = Vec::with_capacity(s_max + 1);
        let mut v = seed.to_vec();
        linalg::normalize(&mut v);
        states.push(v);
        log_norms.push(0.0);
        for s in 1..=s_max {
            let mut next = h.apply(&states[s - 1]);
            let nn = linalg::normalize(&mut next);
            if nn == 0.0 {
                break;
            }
            log_norms.push(log_norms[s - 1] + nn.ln());
            states.push(next);
        }
        Self { states, log_norms }
    }

    pub(crate) fn len(&self) -> usize {
        self.states.len()
    }

    pub(crate) fn get(&self, s: usize) -> Option<&[Complex64]> {
        self.states.get(s).map(|v| v.as_slice())
    }

    /// `ln ‖Ĥ^s seed‖` relative to the normalized seed.
    pub(crate) fn log_norm(&self, s: usize) -> f64 {
        self.log_norms[s]
    }
}

/// Two orthonormal seeds evaluated against `ψ`:
/// `|⟨β₁|ψ⟩|² + |⟨β₂|ψ⟩|²` with `β₂` the second vector orthogonalized
/// against the first. Returns `(value, two_terms)`; a collinear second seed
/// degrades to the one-term bound.
pub(crate) fn two_seed_value(
    beta1: &[Complex64],
    raw2: &[Complex64],
    psi: &[Complex64],
) -> (f64, bool) {
    let t1 = linalg::inner(beta1, psi).norm_sqr();
    let g = linalg::inner(beta1, raw2);
    let rest = 1.0 - g.norm_sqr();
    if rest < 1e-12 {
        return (t1, false);
    }
    let a2 = linalg::inner(raw2, psi) - g.conj() * linalg::inner(beta1, psi);
    (t1 + a2.norm_sqr() / rest, true)
}

/// Result of the uncertainty-relation lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyBound {
    /// The bound on `P_det` (always a valid lower bound).
    pub value: f64,
    /// Raw energy-moment variance `Var(Ĥ^s)_d`; may overflow to ∞ at
    /// large `s`, kept for diagnostics only.
    pub variance: f64,
    /// True when the variance fell below the scale-aware threshold (the
    /// detection state is then an eigenstate of `Ĥ^s` and only the trivial
    /// `|⟨d|ψ⟩|²` term remains).
    pub degenerate: bool,
}

/// Uncertainty-relation lower bound
/// `P_det ≥ |⟨d|ψ⟩|² + |⟨d|[Ĥ^s, D̂]|ψ⟩|² / Var(Ĥ^s)_d`, evaluated on
/// renormalized iterates so any `s` is safe.
pub fn uncertainty_bound(
    h: &Hamiltonian,
    d: &State,
    psi_in: &State,
    s: usize,
) -> Result<UncertaintyBound> {
    if s == 0 {
        return Err(Error::InvalidParameter("s must be ≥ 1".into()));
    }
    check_dims(h, &[d, psi_in])?;
    let overlap = linalg::inner(d.amplitudes(), psi_in.amplitudes());
    let trivial = overlap.norm_sqr();

    let mut z = d.amplitudes().to_vec();
    let mut log_norm = 0.0;
    for _ in 0..s {
        z = h.apply(&z);
        let nz = linalg::normalize(&mut z);
        if nz == 0.0 {
            // Ĥ^s annihilates |d⟩: zero variance
            return Ok(UncertaintyBound {
                value: trivial,
                variance: 0.0,
                degenerate: true,
            });
        }
        log_norm += nz.ln();
    }
    // ⟨d|Ĥ^{2s}|d⟩ = ‖Ĥ^s d‖², ⟨d|Ĥ^s|d⟩ = ‖Ĥ^s d‖ · ⟨d|ẑ⟩ (real)
    let zd = linalg::inner(&z, d.amplitudes());
    let varn = (1.0 - zd.norm_sqr()).max(0.0);
    let variance = varn * (2.0 * log_norm).exp();
    // degeneracy threshold at the ‖Ĥ‖^{2s} scale
    let log_bound_2s = 2.0 * s as f64 * h.norm_bound().max(f64::MIN_POSITIVE).ln();
    let degenerate = varn.ln() + 2.0 * log_norm < tol::EPS_VAR.ln() + log_bound_2s || varn == 0.0;
    if degenerate {
        return Ok(UncertaintyBound {
            value: trivial,
            variance,
            degenerate: true,
        });
    }
    let comm = linalg::inner(&z, psi_in.amplitudes()) - zd * overlap;
    Ok(UncertaintyBound {
        value: trivial + comm.norm_sqr() / varn,
        variance,
        degenerate: false,
    })
}

/// Result of the walk-counting lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct PathCountBound {
    /// The bound on `P_det(r)`.
    pub value: f64,
    /// True when the variance denominator vanished.
    pub degenerate: bool,
}

/// Walk-counting lower bound for localized states on unweighted graphs:
/// `P_det(r) ≥ N_{r→d}(s)² / (N_{d→d}(2s) − N_{d→d}(s)²)`, exact integer
/// arithmetic throughout. For `s` below the graph distance the numerator
/// vanishes and the bound degrades to the trivial 0.
pub fn path_count_bound(h: &Hamiltonian, r: &str, d: &str, s: usize) -> Result<PathCountBound> {
    if s == 0 {
        return Err(Error::InvalidParameter("s must be ≥ 1".into()));
    }
    let n_rd = walk_count_exact(h, s, r, d)?;
    let n_dd_s = walk_count_exact(h, s, d, d)?;
    let n_dd_2s = walk_count_exact(h, 2 * s, d, d)?;
    let square = &n_dd_s * &n_dd_s;
    if n_dd_2s <= square {
        // Cauchy-Schwarz makes the difference nonnegative; zero means the
        // detector node is an eigenvector direction of Ĥ^s.
        return Ok(PathCountBound {
            value: 0.0,
            degenerate: true,
        });
    }
    let denom = n_dd_2s - square;
    Ok(PathCountBound {
        value: big_ratio_f64(&(&n_rd * &n_rd), &denom),
        degenerate: false,
    })
}

/// The two-seed strategies for lower-bounding `P_det`.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    /// `β₁ = |d⟩`, `β₂ ∝ (1 − D̂) Ĥ^s |d⟩`.
    Regular {
        /// Power applied to the second seed.
        s: usize,
    },
    /// `β₁ ∝ Ĥ^ξ |d⟩`, `β₂ ∝ (1 − P₁) Ĥ^{s+ξ} |d⟩`, with ξ the distance
    /// between the initial and detection states.
    Alternative {
        /// Offset beyond ξ for the second seed.
        s: usize,
    },
    /// `β₁ = |r⟩` for a *certified bright* seed node, `β₂ ∝ (1 − P₁) Ĥ^p |r⟩`.
    Opposite {
        /// Label of the bright seed node (the antipode on the hypercube).
        seed: String,
        /// Power applied to the seed.
        power: usize,
    },
    /// `β₁ ∝ Ĥ^{s₁} |d⟩`, `β₂ ∝ (1 − P₁) Ĥ^{s₂} |d⟩`.
    Optimized {
        /// Power of the first seed.
        s1: usize,
        /// Power of the second seed.
        s2: usize,
    },
}

/// A strategy evaluation: the bound and whether both terms contributed.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyBound {
    /// Lower bound on `P_det(ψ)`.
    pub value: f64,
    /// False when the second seed was collinear with the first and the
    /// evaluation fell back to a single term.
    pub two_terms: bool,
}

/// Evaluates one strategy at fixed parameters.
///
/// The opposite strategy refuses seeds whose brightness certificate falls
/// short of [`BRIGHT_CERT_THRESHOLD`]: a dark component in `β₁` would break
/// the inequality.
pub fn strategy_bound(
    h: &Hamiltonian,
    d: &State,
    psi_in: &State,
    strategy: &Strategy,
) -> Result<StrategyBound> {
    check_dims(h, &[d, psi_in])?;
    let psi = psi_in.amplitudes();
    let (value, two_terms) = match strategy {
        Strategy::Regular { s } => {
            if *s == 0 {
                return Err(Error::InvalidParameter("s must be ≥ 1".into()));
            }
            let iter = PowerIterates::new(h, d.amplitudes(), *s);
            match iter.get(*s) {
                Some(y) => two_seed_value(d.amplitudes(), y, psi),
                None => (linalg::inner(d.amplitudes(), psi).norm_sqr(), false),
            }
        }
        Strategy::Alternative { s } => {
            if *s == 0 {
                return Err(Error::InvalidParameter("offset must be ≥ 1".into()));
            }
            let xi = distance(h, psi_in, d)?;
            let iter = PowerIterates::new(h, d.amplitudes(), xi + *s);
            let b1 = iter
                .get(xi)
                .ok_or(Error::InvalidParameter("Ĥ^ξ|d⟩ vanished".into()))?;
            match iter.get(xi + *s) {
                Some(y) => two_seed_value(b1, y, psi),
                None => (linalg::inner(b1, psi).norm_sqr(), false),
            }
        }
        Strategy::Opposite { seed, power } => {
            if *power == 0 {
                return Err(Error::InvalidParameter("power must be ≥ 1".into()));
            }
            let idx = h.label_index(seed)?;
            let seed_state = State::localized(h.dim(), idx)?;
            let certificate = brightness_certificate(h, d, &seed_state)?;
            if certificate < BRIGHT_CERT_THRESHOLD {
                return Err(Error::SeedNotBright {
                    certificate,
                    required: BRIGHT_CERT_THRESHOLD,
                });
            }
            let iter = PowerIterates::new(h, seed_state.amplitudes(), *power);
            match iter.get(*power) {
                Some(y) => two_seed_value(seed_state.amplitudes(), y, psi),
                None => (linalg::inner(seed_state.amplitudes(), psi).norm_sqr(), false),
            }
        }
        Strategy::Optimized { s1, s2 } => {
            let iter = PowerIterates::new(h, d.amplitudes(), *s1.max(s2));
            let b1 = iter
                .get(*s1)
                .ok_or(Error::InvalidParameter("Ĥ^s1|d⟩ vanished".into()))?;
            match iter.get(*s2) {
                Some(y) if s1 != s2 => two_seed_value(b1, y, psi),
                _ => (linalg::inner(b1, psi).norm_sqr(), false),
            }
        }
    };
    Ok(StrategyBound { value, two_terms })
}

fn check_dims(h: &Hamiltonian, states: &[&State]) -> Result<()> {
    for s in states {
        if s.dim() != h.dim() {
            return Err(Error::DimensionMismatch {
                expected: h.dim(),
                got: s.dim(),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_hamiltonian, GraphSpec};
    use crate::spectral::eigendecompose;

    fn ring(l: usize) -> Hamiltonian {
        build_hamiltonian(&GraphSpec::Ring { sites: l }).unwrap()
    }

    #[test]
    fn uncertainty_detector_start_is_one() {
        let h = ring(6);
        let d = State::localized(6, 0).unwrap();
        let b = uncertainty_bound(&h, &d, &d, 1).unwrap();
        assert!((b.value - 1.0).abs() < 1e-12);
        assert!(!b.degenerate);
    }

    #[test]
    fn uncertainty_ring_adjacent_is_one_half() {
        let h = ring(6);
        let d = State::localized(6, 0).unwrap();
        let psi = State::localized(6, 1).unwrap();
        let b = uncertainty_bound(&h, &d, &psi, 1).unwrap();
        assert!((b.value - 0.5).abs() < 1e-12);
        assert!((b.variance - 2.0).abs() < 1e-12);
    }

    #[test]
    fn uncertainty_degenerate_when_detector_is_an_eigenvector() {
        let h = build_hamiltonian(&GraphSpec::Complete { sites: 4 }).unwrap();
        let uniform = crate::graph::make_state(&h, &crate::graph::StateSpec::Uniform(vec![]))
            .unwrap();
        let psi = State::localized(4, 0).unwrap();
        let b = uncertainty_bound(&h, &uniform, &psi, 1).unwrap();
        assert!(b.degenerate);
        assert!((b.value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn uncertainty_matches_regular_strategy() {
        let h = build_hamiltonian(&GraphSpec::Hypercube { bits: 3 }).unwrap();
        let d = State::localized(8, 0).unwrap();
        let psi = State::localized(8, 3).unwrap();
        for s in 1..=6 {
            let u = uncertainty_bound(&h, &d, &psi, s).unwrap();
            let r = strategy_bound(&h, &d, &psi, &Strategy::Regular { s }).unwrap();
            assert!((u.value - r.value).abs() < 1e-12, "s={s}");
        }
    }

    #[test]
    fn path_count_ring_values() {
        let h = ring(8);
        let b = path_count_bound(&h, "1", "0", 1).unwrap();
        assert!((b.value - 0.5).abs() < 1e-15); // 1/(2−0)
        let b2 = path_count_bound(&h, "2", "0", 2).unwrap();
        assert!((b2.value - 0.5).abs() < 1e-15); // 1/(6−4)
        // below the distance the numerator is zero
        let low = path_count_bound(&h, "2", "0", 1).unwrap();
        assert_eq!(low.value, 0.0);
        assert!(!low.degenerate);
    }

    #[test]
    fn path_count_equals_uncertainty_for_localized_states() {
        for h in [ring(8), build_hamiltonian(&GraphSpec::Hypercube { bits: 3 }).unwrap()] {
            let d = State::localized(h.dim(), 0).unwrap();
            let psi = State::localized(h.dim(), 1).unwrap();
            let labels = h.labels().to_vec();
            for s in 1..=5 {
                let pc = path_count_bound(&h, &labels[1], &labels[0], s).unwrap();
                let un = uncertainty_bound(&h, &d, &psi, s).unwrap();
                if un.degenerate {
                    continue;
                }
                assert!(
                    (pc.value - un.value).abs() < 1e-10,
                    "dim {} s={s}: {} vs {}",
                    h.dim(),
                    pc.value,
                    un.value
                );
            }
        }
    }

    #[test]
    fn path_count_matches_hypercube_closed_form_scaling() {
        use super::super::combinatorics::hypercube_closed_form;
        // at s = ξ the bound approaches ξ!² B^{−ξ}/((2ξ−1)!! − [(ξ−1)!!]²)
        let xi = 2usize;
        for b in [6usize, 8, 10] {
            let h = build_hamiltonian(&GraphSpec::Hypercube { bits: b }).unwrap();
            let d = "0".repeat(b);
            let r = {
                let mut s = "0".repeat(b - xi);
                s.push_str(&"1".repeat(xi));
                s
            };
            let got = path_count_bound(&h, &r, &d, xi).unwrap().value;
            let asymptotic = hypercube_closed_form(b, xi).unwrap().lower;
            let rel = (got - asymptotic).abs() / asymptotic;
            assert!(rel < 2.5 / b as f64, "B={b}: {got} vs {asymptotic}");
        }
    }

    #[test]
    fn regular_strategy_reproduces_path_count() {
        let h = ring(8);
        let d = State::localized(8, 0).unwrap();
        let psi = State::localized(8, 2).unwrap();
        for s in 2..=5 {
            let pc = path_count_bound(&h, "2", "0", s).unwrap();
            let sb = strategy_bound(&h, &d, &psi, &Strategy::Regular { s }).unwrap();
            assert!((pc.value - sb.value).abs() < 1e-10, "s={s}");
        }
    }

    #[test]
    fn opposite_strategy_is_exact_on_the_hypercube_antipode() {
        let b = 4usize;
        let h = build_hamiltonian(&GraphSpec::Hypercube { bits: b }).unwrap();
        let d = State::localized(h.dim(), 0).unwrap();
        // ψ at Hamming distance B−1, seed the all-ones antipode with power 1
        let psi = State::localized(h.dim(), (1 << b) - 2).unwrap();
        let sb = strategy_bound(
            &h,
            &d,
            &psi,
            &Strategy::Opposite {
                seed: "1".repeat(b),
                power: 1,
            },
        )
        .unwrap();
        let decomp = eigendecompose(&h).unwrap();
        let exact = crate::detection::exact_pdet(&decomp, &d, &psi).unwrap();
        assert!((sb.value - exact).abs() < 1e-10, "{} vs {exact}", sb.value);
    }

    #[test]
    fn opposite_strategy_refuses_dark_contaminated_seeds() {
        // a generic ring node carries dark weight, so it must be rejected
        let h = ring(6);
        let d = State::localized(6, 0).unwrap();
        let psi = State::localized(6, 1).unwrap();
        let err = strategy_bound(
            &h,
            &d,
            &psi,
            &Strategy::Opposite {
                seed: "2".into(),
                power: 1,
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::SeedNotBright { .. }));
    }

    #[test]
    fn optimized_strategy_handles_degenerate_pairs() {
        let h = ring(6);
        let d = State::localized(6, 0).unwrap();
        let psi = State::localized(6, 1).unwrap();
        let same = strategy_bound(&h, &d, &psi, &Strategy::Optimized { s1: 3, s2: 3 }).unwrap();
        assert!(!same.two_terms);
        let pair = strategy_bound(&h, &d, &psi, &Strategy::Optimized { s1: 1, s2: 3 }).unwrap();
        assert!(pair.two_terms);
        assert!(pair.value >= same.value - 1e-12);
    }

    #[test]
    fn bounds_never_exceed_exact() {
        let h = ring(8);
        let decomp = eigendecompose(&h).unwrap();
        let d = State::localized(8, 0).unwrap();
        for node in 1..8 {
            let psi = State::localized(8, node).unwrap();
            let exact = crate::detection::exact_pdet(&decomp, &d, &psi).unwrap();
            for s in 1..=8 {
                let u = uncertainty_bound(&h, &d, &psi, s).unwrap();
                assert!(u.value <= exact + 1e-9, "node {node} s={s}");
            }
        }
    }
}
