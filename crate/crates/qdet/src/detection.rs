//! Exact total detection probability and the bright/dark decomposition.
//!
//! The detector splits the Hilbert space into two Zeno subspaces: the bright
//! space `H_B = span{Ĥ^k|d⟩}`, detected with probability one, and its
//! orthogonal complement `H_D`, never detected at all. `P_det(ψ)` is simply
//! the overlap of `ψ` with `H_B`. Each degenerate energy level contributes at
//! most one bright state, which yields a closed formula from the spectrum
//! alone; a Gram-Schmidt pass over the Krylov sequence of the detection state
//! provides an independent route to the same number.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::graph::{Hamiltonian, State};
use crate::linalg;
use crate::spectral::{EnergyLevel, SpectralDecomposition};
use crate::tol;

/// Everything a single detection experiment needs.
#[derive(Debug, Clone)]
pub struct DetectionSetup {
    /// Generator of the unitary evolution.
    pub hamiltonian: Hamiltonian,
    /// Detection state `|d⟩` probed at every attempt.
    pub detect: State,
    /// Initial state `|ψ_in⟩`.
    pub psi_in: State,
    /// Detection period τ.
    pub tau: f64,
}

impl DetectionSetup {
    /// Validates dimensions and the positivity of τ.
    pub fn new(hamiltonian: Hamiltonian, detect: State, psi_in: State, tau: f64) -> Result<Self> {
        let n = hamiltonian.dim();
        for s in [&detect, &psi_in] {
            if s.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: s.dim(),
                });
            }
        }
        if tau <= 0.0 {
            return Err(Error::InvalidParameter("tau must be positive".into()));
        }
        Ok(Self {
            hamiltonian,
            detect,
            psi_in,
            tau,
        })
    }
}

/// Total detection probability from the spectral decomposition:
///
/// `P_det = Σ'_l |Σ_m ⟨d|E_{l,m}⟩⟨E_{l,m}|ψ⟩|² / Σ_m |⟨d|E_{l,m}⟩|²`
///
/// where the primed sum skips levels whose denominator is below
/// [`tol::EPS_BRIGHT`]. The result is clamped to `[0, 1]`; use
/// [`exact_pdet_raw`] for the unclamped value.
pub fn exact_pdet(decomp: &SpectralDecomposition, d: &State, psi_in: &State) -> Result<f64> {
    exact_pdet_raw(decomp, d, psi_in).map(|p| p.clamp(0.0, 1.0))
}

/// [`exact_pdet`] without the final clamp, for diagnostics.
pub fn exact_pdet_raw(decomp: &SpectralDecomposition, d: &State, psi_in: &State) -> Result<f64> {
    let n = decomp.dim();
    for s in [d, psi_in] {
        if s.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: s.dim(),
            });
        }
    }
    let mut total = 0.0;
    for level in decomp.levels() {
        let mut numerator = Complex64::new(0.0, 0.0);
        let mut denominator = 0.0;
        for e in &level.eigenvectors {
            let de = d.inner(e);
            numerator += de * e.inner(psi_in);
            denominator += de.norm_sqr();
        }
        if denominator >= tol::EPS_BRIGHT {
            total += numerator.norm_sqr() / denominator;
        }
    }
    Ok(total)
}

/// One bright state together with the energy level it came from.
#[derive(Debug, Clone)]
pub struct BrightState {
    /// Energy of the contributing level.
    pub energy: f64,
    /// The level's unique bright combination.
    pub state: State,
}

/// Orthonormal bases of the bright and dark subspaces.
#[derive(Debug, Clone)]
pub struct BrightDarkSplit {
    /// One bright state per level with nonvanishing overlap, by energy.
    pub bright: Vec<BrightState>,
    /// Orthonormal basis of the dark complement.
    pub dark: Vec<State>,
}

impl BrightDarkSplit {
    /// Dimension `w` of the bright subspace.
    pub fn bright_dim(&self) -> usize {
        self.bright.len()
    }
}

/// Splits every energy level into its bright state (when the level overlaps
/// the detection state) and the dark remainder.
///
/// A level with `Σ_m |⟨E_{l,m}|d⟩|² ≥ EPS_BRIGHT` contributes the bright
/// state `N Σ_m |E_{l,m}⟩⟨E_{l,m}|d⟩` plus `g_l − 1` dark states; otherwise
/// all `g_l` eigenvectors are dark.
pub fn bright_dark_split(decomp: &SpectralDecomposition, d: &State) -> Result<BrightDarkSplit> {
    if d.dim() != decomp.dim() {
        return Err(Error::DimensionMismatch {
            expected: decomp.dim(),
            got: d.dim(),
        });
    }
    let n = decomp.dim();
    let mut bright = Vec::new();
    let mut dark = Vec::new();
    for level in decomp.levels() {
        let overlaps: Vec<Complex64> = level.eigenvectors.iter().map(|e| e.inner(d)).collect();
        let weight: f64 = overlaps.iter().map(|c| c.norm_sqr()).sum();
        if weight < tol::EPS_BRIGHT {
            dark.extend(level.eigenvectors.iter().cloned());
            continue;
        }
        let mut b = vec![Complex64::new(0.0, 0.0); n];
        for (c, e) in overlaps.iter().zip(&level.eigenvectors) {
            for (out, a) in b.iter_mut().zip(e.amplitudes()) {
                *out += c * a;
            }
        }
        linalg::normalize(&mut b);
        linalg::fix_phase(&mut b);

        // Dark complement inside the level: project the bright state out of
        // each eigenvector and keep the g−1 independent directions, in
        // eigenvector order.
        let mut level_dark: Vec<Vec<Complex64>> = Vec::with_capacity(level.degeneracy() - 1);
        for e in &level.eigenvectors {
            if level_dark.len() + 1 == level.degeneracy() {
                break;
            }
            let mut v = e.amplitudes().to_vec();
            linalg::project_out(&mut v, &b);
            let residual =
                linalg::orthogonalize_twice(&mut v, level_dark.iter().map(|x| x.as_slice()));
            if residual > 1e-8 {
                linalg::normalize(&mut v);
                linalg::fix_phase(&mut v);
                level_dark.push(v);
            }
        }
        bright.push(BrightState {
            energy: level.energy,
            state: State::from_normalized(b),
        });
        dark.extend(level_dark.into_iter().map(State::from_normalized));
    }
    Ok(BrightDarkSplit { bright, dark })
}

/// A dark state from a degenerate level: `N(⟨d|E⟩|E'⟩ − ⟨d|E'⟩|E⟩)` built
/// from the level's first two eigenvectors. Orthogonal to `|d⟩` by
/// construction; when both overlaps vanish the first eigenvector is already
/// dark and is returned as-is.
pub fn degenerate_dark_state(level: &EnergyLevel, d: &State) -> Result<State> {
    if level.degeneracy() < 2 {
        return Err(Error::InvalidParameter(
            "degenerate dark state needs a level with g ≥ 2".into(),
        ));
    }
    let e1 = &level.eigenvectors[0];
    let e2 = &level.eigenvectors[1];
    if d.dim() != e1.dim() {
        return Err(Error::DimensionMismatch {
            expected: e1.dim(),
            got: d.dim(),
        });
    }
    let c1 = d.inner(e1);
    let c2 = d.inner(e2);
    let mut v: Vec<Complex64> = e2
        .amplitudes()
        .iter()
        .zip(e1.amplitudes())
        .map(|(b, a)| c1 * b - c2 * a)
        .collect();
    if linalg::norm_sqr(&v) < 1e-28 {
        return Ok(e1.clone());
    }
    linalg::normalize(&mut v);
    linalg::fix_phase(&mut v);
    Ok(State::from_normalized(v))
}

/// Orthonormal basis of the bright space `span{Ĥ^k|d⟩}` by Gram-Schmidt over
/// the Krylov sequence, with one re-orthogonalization pass per vector. The
/// construction stops when the residual drops below `eps_rank` relative to
/// the pre-orthogonalization norm; the returned length is the bright
/// dimension `w`.
pub fn krylov_bright_basis(h: &Hamiltonian, d: &State, eps_rank: f64) -> Result<Vec<State>> {
    if d.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: d.dim(),
        });
    }
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut v = d.amplitudes().to_vec();
    for _ in 0..=h.dim() {
        let scale = linalg::norm(&v);
        if scale == 0.0 {
            break;
        }
        let mut w = v.clone();
        let residual = linalg::orthogonalize_twice(&mut w, basis.iter().map(|b| b.as_slice()));
        if residual < eps_rank * scale {
            break;
        }
        linalg::normalize(&mut w);
        linalg::fix_phase(&mut w);
        basis.push(w);
        v = h.apply(basis.last().unwrap());
    }
    Ok(basis.into_iter().map(State::from_normalized).collect())
}

/// `Σ_l |⟨β_l|ψ⟩|²` for an orthonormal set: the overlap of `ψ` with the
/// spanned subspace.
pub fn bright_fraction(basis: &[State], psi: &State) -> f64 {
    basis.iter().map(|b| b.inner(psi).norm_sqr()).sum()
}

/// Overlap of `ψ` with the Krylov bright space, clamped to `[0, 1]`.
/// A value ≥ 1 − 1e-9 certifies the state bright, ≤ 1e-9 certifies it dark.
pub fn brightness_certificate(h: &Hamiltonian, d: &State, psi: &State) -> Result<f64> {
    let basis = krylov_bright_basis(h, d, tol::EPS_RANK)?;
    if psi.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: psi.dim(),
        });
    }
    Ok(bright_fraction(&basis, psi).clamp(0.0, 1.0))
}
