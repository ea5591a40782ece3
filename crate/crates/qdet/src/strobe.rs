//! Direct simulation of the repeated-detection protocol.
//!
//! Two independent routes to the same statistics: the first-detection
//! amplitude recursion `φ_n = ⟨d|Û(τ)[(1 − D̂)Û(τ)]^{n−1}|ψ_in⟩`, and Monte
//! Carlo trajectories that implement the collapse postulate attempt by
//! attempt. The recursion keeps the post-measurement vector unnormalized, so
//! `p_n = |φ_n|²` is directly the unconditional probability of first
//! detection at attempt `n` and `S_N = Σ_{n≤N} p_n` converges to `P_det`
//! from below.

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::detection::DetectionSetup;
use crate::error::{Error, Result};
use crate::graph::State;
use crate::linalg;
use crate::spectral::{is_exceptional_tau, propagator, SpectralDecomposition, Unitary};
use crate::tol;

/// First-detection amplitudes of one stroboscopic run.
#[derive(Debug, Clone)]
pub struct DetectionRecord {
    /// Amplitudes `φ_n`, n = 1..=N.
    pub phis: Vec<Complex64>,
    /// Detection period the record was computed for.
    pub tau: f64,
    /// Whether τ resonates with some level gap (set when the spectrum was
    /// available to check).
    pub exceptional: bool,
}

impl DetectionRecord {
    /// First-detection probabilities `p_n = |φ_n|²`.
    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.phis.iter().map(|p| p.norm_sqr())
    }

    /// Partial sums `S_N`, nondecreasing and bounded by `P_det`.
    pub fn partial_sums(&self) -> Vec<f64> {
        self.probabilities()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    }

    /// `S_{N_max}`, i.e. the detection probability within the horizon.
    pub fn total(&self) -> f64 {
        self.probabilities().sum()
    }
}

/// Monotone view of a record plus the end-of-horizon value.
#[derive(Debug, Clone)]
pub struct DetectionStatistics {
    /// The running sums `S_1..=S_N`.
    pub s_curve: Vec<f64>,
    /// `S_N` at the horizon (0 for an empty record).
    pub s_final: f64,
}

/// Iterates `χ ← Û(χ − φ_n d)` with `φ_n = ⟨d|χ⟩`, starting from
/// `χ = Û ψ_in`. Linear in `ψ_in`. The record is not flagged for
/// exceptional τ — use [`first_detection_record`] when the spectrum is at
/// hand.
pub fn first_detection_amplitudes(
    u: &Unitary,
    d: &State,
    psi_in: &State,
    n_max: usize,
) -> Result<DetectionRecord> {
    let n = u.dim();
    for s in [d, psi_in] {
        if s.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: s.dim(),
            });
        }
    }
    let mut phis = Vec::with_capacity(n_max);
    let mut chi = u.apply(psi_in.amplitudes());
    for _ in 0..n_max {
        let phi = linalg::inner(d.amplitudes(), &chi);
        phis.push(phi);
        for (x, a) in chi.iter_mut().zip(d.amplitudes()) {
            *x -= phi * a;
        }
        chi = u.apply(&chi);
    }
    Ok(DetectionRecord {
        phis,
        tau: u.tau(),
        exceptional: false,
    })
}

/// Builds the propagator for `tau`, runs the amplitude recursion, and flags
/// the record when τ is exceptional for this spectrum.
pub fn first_detection_record(
    decomp: &SpectralDecomposition,
    tau: f64,
    d: &State,
    psi_in: &State,
    n_max: usize,
) -> Result<DetectionRecord> {
    let u = propagator(decomp, tau);
    let mut record = first_detection_amplitudes(&u, d, psi_in, n_max)?;
    record.exceptional = is_exceptional_tau(decomp, tau, tol::EPS_RES)?.exceptional;
    Ok(record)
}

/// Cumulative statistics of a record; no extrapolation beyond the horizon.
pub fn detection_statistics(record: &DetectionRecord) -> DetectionStatistics {
    let s_curve = record.partial_sums();
    let s_final = s_curve.last().copied().unwrap_or(0.0);
    DetectionStatistics { s_curve, s_final }
}

/// Monte Carlo estimate of the detection probability.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryEstimate {
    /// Fraction of trials in which the detector clicked within the horizon.
    pub detected_fraction: f64,
    /// Number of independent trials.
    pub trials: usize,
    /// Attempts per trial.
    pub horizon: usize,
    /// Binomial standard error `sqrt(f(1−f)/trials)`.
    pub std_error: f64,
    /// Seed the trial streams were derived from.
    pub seed: u64,
}

/// Samples the collapse postulate directly: per attempt the detector clicks
/// with probability `|⟨d|χ⟩|²`; a no-click projects `|d⟩` out of `χ` and
/// renormalizes. Trial `t` draws from a ChaCha8 stream `(seed, t)`, so the
/// estimate is independent of evaluation order.
pub fn sample_trajectories(
    u: &Unitary,
    d: &State,
    psi_in: &State,
    n_max: usize,
    trials: usize,
    seed: u64,
) -> Result<TrajectoryEstimate> {
    let n = u.dim();
    for s in [d, psi_in] {
        if s.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: s.dim(),
            });
        }
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be ≥ 1".into()));
    }
    let mut detected = 0usize;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        if run_trajectory(u, d, psi_in, n_max, &mut rng) {
            detected += 1;
        }
    }
    let fraction = detected as f64 / trials as f64;
    Ok(TrajectoryEstimate {
        detected_fraction: fraction,
        trials,
        horizon: n_max,
        std_error: (fraction * (1.0 - fraction) / trials as f64).sqrt(),
        seed,
    })
}

fn run_trajectory(
    u: &Unitary,
    d: &State,
    psi_in: &State,
    n_max: usize,
    rng: &mut ChaCha8Rng,
) -> bool {
    let mut chi = psi_in.amplitudes().to_vec();
    for _ in 0..n_max {
        chi = u.apply(&chi);
        let amp = linalg::inner(d.amplitudes(), &chi);
        let p_click = amp.norm_sqr().clamp(0.0, 1.0);
        if rng.random::<f64>() < p_click {
            return true;
        }
        for (x, a) in chi.iter_mut().zip(d.amplitudes()) {
            *x -= amp * a;
        }
        if linalg::normalize(&mut chi) == 0.0 {
            // state exhausted: certain detection happened, but the draw said
            // no-click with probability zero; cannot continue meaningfully
            return false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::{degenerate_dark_state, exact_pdet};
    use crate::graph::{build_hamiltonian, GraphSpec, Hamiltonian};
    use crate::spectral::eigendecompose;

    fn ring(l: usize) -> Hamiltonian {
        build_hamiltonian(&GraphSpec::Ring { sites: l }).unwrap()
    }

    fn ring_setup(l: usize, tau: f64) -> (SpectralDecomposition, Unitary, State, State) {
        let h = ring(l);
        let decomp = eigendecompose(&h).unwrap();
        let u = propagator(&decomp, tau);
        let d = State::localized(l, 0).unwrap();
        let psi = State::localized(l, 1).unwrap();
        (decomp, u, d, psi)
    }

    #[test]
    fn first_amplitude_matches_direct_matrix_element() {
        let (_, u, d, psi) = ring_setup(6, 1.0);
        let record = first_detection_amplitudes(&u, &d, &psi, 1).unwrap();
        let direct = linalg::inner(d.amplitudes(), &u.apply(psi.amplitudes()));
        assert!((record.phis[0] - direct).norm() < 1e-14);
    }

    #[test]
    fn zero_horizon_gives_empty_record() {
        let (_, u, d, psi) = ring_setup(6, 1.0);
        let record = first_detection_amplitudes(&u, &d, &psi, 0).unwrap();
        assert!(record.phis.is_empty());
        let stats = detection_statistics(&record);
        assert_eq!(stats.s_final, 0.0);
        assert!(stats.s_curve.is_empty());
    }

    #[test]
    fn detector_start_with_identity_propagator_clicks_first() {
        // τ = 0 makes Û the identity: φ_1 = 1 and nothing is left after
        let h = ring(4);
        let decomp = eigendecompose(&h).unwrap();
        let u = propagator(&decomp, 0.0);
        let d = State::localized(4, 0).unwrap();
        let record = first_detection_amplitudes(&u, &d, &d, 50).unwrap();
        assert!((record.phis[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        for phi in &record.phis[1..] {
            assert!(phi.norm() < 1e-12);
        }
        assert!((record.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dark_state_never_produces_amplitude() {
        let h = ring(6);
        let decomp = eigendecompose(&h).unwrap();
        let d = State::localized(6, 0).unwrap();
        let level = decomp
            .levels()
            .iter()
            .find(|l| (l.energy - 1.0).abs() < 1e-9)
            .unwrap();
        let dark = degenerate_dark_state(level, &d).unwrap();
        let record = first_detection_record(&decomp, 1.0, &d, &dark, 200).unwrap();
        for phi in &record.phis {
            assert!(phi.norm() < 1e-12);
        }
    }

    #[test]
    fn partial_sums_are_monotone_and_bounded_by_exact() {
        let (decomp, u, d, psi) = ring_setup(6, 1.0);
        let exact = exact_pdet(&decomp, &d, &psi).unwrap();
        let record = first_detection_amplitudes(&u, &d, &psi, 5000).unwrap();
        let sums = record.partial_sums();
        let mut prev = 0.0;
        for s in &sums {
            assert!(*s >= prev - 1e-15);
            assert!(*s <= exact + 1e-9);
            prev = *s;
        }
        // approaches 1/2 from below
        assert!((sums.last().unwrap() - 0.5).abs() < 1e-3);
    }

    #[test]
    fn norm_bookkeeping_s_n_plus_survivor() {
        let (_, u, d, psi) = ring_setup(6, 0.9);
        // re-run the recursion manually to inspect the survivor norm
        let mut chi = u.apply(psi.amplitudes());
        let mut s = 0.0;
        for _ in 0..200 {
            let phi = linalg::inner(d.amplitudes(), &chi);
            s += phi.norm_sqr();
            for (x, a) in chi.iter_mut().zip(d.amplitudes()) {
                *x -= phi * a;
            }
            let survivor = linalg::norm_sqr(&chi);
            assert!((s + survivor - 1.0).abs() < 1e-9);
            chi = u.apply(&chi);
        }
    }

    #[test]
    fn amplitudes_superpose_linearly() {
        let (_, u, d, _) = ring_setup(6, 1.1);
        let psi1 = State::localized(6, 1).unwrap();
        let psi2 = State::localized(6, 3).unwrap();
        let a = Complex64::new(0.6, 0.0);
        let b = Complex64::new(0.0, 0.8);
        let combined: Vec<Complex64> = psi1
            .amplitudes()
            .iter()
            .zip(psi2.amplitudes())
            .map(|(x, y)| a * x + b * y)
            .collect();
        let combo = State::new(combined).unwrap();
        let r1 = first_detection_amplitudes(&u, &d, &psi1, 64).unwrap();
        let r2 = first_detection_amplitudes(&u, &d, &psi2, 64).unwrap();
        let rc = first_detection_amplitudes(&u, &d, &combo, 64).unwrap();
        for n in 0..64 {
            let lin = a * r1.phis[n] + b * r2.phis[n];
            assert!((rc.phis[n] - lin).norm() < 1e-10);
        }
    }

    #[test]
    fn exceptional_tau_is_flagged_but_computed() {
        let h = ring(4);
        let decomp = eigendecompose(&h).unwrap();
        let d = State::localized(4, 0).unwrap();
        let psi = State::localized(4, 1).unwrap();
        let record =
            first_detection_record(&decomp, core::f64::consts::PI, &d, &psi, 16).unwrap();
        assert!(record.exceptional);
        assert_eq!(record.phis.len(), 16);
        let itself =
            first_detection_record(&decomp, 1.0, &d, &psi, 16).unwrap();
        assert!(!itself.exceptional);
    }

    #[test]
    fn trajectories_dark_state_is_never_detected() {
        let h = ring(6);
        let decomp = eigendecompose(&h).unwrap();
        let d = State::localized(6, 0).unwrap();
        let level = decomp
            .levels()
            .iter()
            .find(|l| (l.energy - 1.0).abs() < 1e-9)
            .unwrap();
        let dark = degenerate_dark_state(level, &d).unwrap();
        let u = propagator(&decomp, 0.7);
        let est = sample_trajectories(&u, &d, &dark, 300, 500, 11).unwrap();
        assert_eq!(est.detected_fraction, 0.0);
    }

    #[test]
    fn trajectories_from_detector_converge_to_one() {
        let (_, u, d, _) = ring_setup(6, 1.0);
        let est = sample_trajectories(&u, &d, &d, 2000, 2000, 5).unwrap();
        assert!(est.detected_fraction > 0.99, "{}", est.detected_fraction);
    }

    #[test]
    fn trajectories_match_amplitude_protocol() {
        let (_, u, d, psi) = ring_setup(6, 1.0);
        let n_max = 400;
        let record = first_detection_amplitudes(&u, &d, &psi, n_max).unwrap();
        let s_n = record.total();
        let est = sample_trajectories(&u, &d, &psi, n_max, 20_000, 271).unwrap();
        let gap = (est.detected_fraction - s_n).abs();
        assert!(
            gap < 4.0 * est.std_error.max(1e-4),
            "gap {gap} stderr {}",
            est.std_error
        );
    }

    #[test]
    fn trajectories_are_deterministic_in_the_seed() {
        let (_, u, d, psi) = ring_setup(6, 0.8);
        let a = sample_trajectories(&u, &d, &psi, 50, 300, 9).unwrap();
        let b = sample_trajectories(&u, &d, &psi, 50, 300, 9).unwrap();
        assert_eq!(a, b);
        let c = sample_trajectories(&u, &d, &psi, 50, 300, 10).unwrap();
        assert!(a.detected_fraction != c.detected_fraction || a.seed != c.seed);
    }

    #[test]
    fn setup_convenience_runs_end_to_end() {
        let h = ring(6);
        let d = State::localized(6, 0).unwrap();
        let psi = State::localized(6, 1).unwrap();
        let setup = DetectionSetup::new(h.clone(), d, psi, 1.0).unwrap();
        let decomp = eigendecompose(&setup.hamiltonian).unwrap();
        let record =
            first_detection_record(&decomp, setup.tau, &setup.detect, &setup.psi_in, 100)
                .unwrap();
        assert!(record.total() > 0.0);
    }
}
