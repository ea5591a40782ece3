//! Shell states: cheap bright states concentrated at a fixed distance from
//! the detector.
//!
//! Because shell `s` of a graph only couples to shells `s ± 1`, orthogonalizing
//! `Ĥ β̃_{k−1}` against just the two preceding states (instead of the full
//! Gram-Schmidt history) already yields a state supported on shell `k`. Each
//! β̃ is a combination of `Ĥ^j |d⟩`, hence bright, and
//! `P_det(ψ) ≥ |⟨β̃_ξ|ψ⟩|²` after only `1 + 2ξ` orthogonalizations.

use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::graph::{Hamiltonian, State};
use crate::linalg;
use crate::tol;

/// The sequence `β̃_0..β̃_k` and whether it terminated early.
#[derive(Debug, Clone)]
pub struct ShellSequence {
    /// `β̃_k`, starting from `β̃_0 = |d⟩`.
    pub states: Vec<State>,
    /// True when the residual vanished before `k_max` (the graph ran out of
    /// shells reachable from the detector).
    pub truncated: bool,
}

impl ShellSequence {
    /// Number of constructed states (`k_max + 1` when not truncated).
    pub fn len(&self) -> usize {
        self.states.len()
    }

    /// True when no states were constructed (never happens for valid input).
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Iterates `β̃_k ∝ ∏_{k'=k−2}^{k−1} (1 − |β̃_{k'}⟩⟨β̃_{k'}|) Ĥ β̃_{k−1}`
/// starting from `β̃_0 = |d⟩`.
pub fn shell_states(h: &Hamiltonian, d: &State, k_max: usize) -> Result<ShellSequence> {
    if d.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: d.dim(),
        });
    }
    let mut states: Vec<Vec<Complex64>> = alloc::vec![d.amplitudes().to_vec()];
    let mut truncated = false;
    for k in 1..=k_max {
        let mut v = h.apply(&states[k - 1]);
        let scale = linalg::norm(&v);
        if scale == 0.0 {
            truncated = true;
            break;
        }
        for back in (k.saturating_sub(2)..k).rev() {
            linalg::project_out(&mut v, &states[back]);
        }
        let residual = linalg::norm(&v);
        if residual < tol::EPS_RANK * scale {
            truncated = true;
            break;
        }
        linalg::normalize(&mut v);
        linalg::fix_phase(&mut v);
        states.push(v);
    }
    Ok(ShellSequence {
        states: states.into_iter().map(State::from_normalized).collect(),
        truncated,
    })
}

/// `P_det(ψ) ≥ |⟨β̃_ξ|ψ⟩|²`. A ψ that lives at a different distance simply
/// yields a weak (possibly zero) bound.
pub fn shell_bound(shells: &ShellSequence, psi: &State, xi: usize) -> Result<f64> {
    let beta = shells.states.get(xi).ok_or_else(|| {
        Error::InvalidParameter(alloc::format!(
            "shell {xi} not available (sequence has {} states)",
            shells.len()
        ))
    })?;
    if psi.dim() != beta.dim() {
        return Err(Error::DimensionMismatch {
            expected: beta.dim(),
            got: psi.dim(),
        });
    }
    Ok(beta.inner(psi).norm_sqr())
}
