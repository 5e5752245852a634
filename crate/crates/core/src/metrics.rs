//! Concurrence and singlet fidelity of the final two-qubit state.

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, Mat4, ZERO4};
use crate::qstate::{self, DensityMatrix, StateError, XStateParams};
use crate::C64;

/// Largest accepted `|det(λ - ξ)|` at a computed eigenvalue.
const RESIDUAL_TOL: f64 = 1e-8;
const CLAMP_SLACK: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("eigenvalue residual {residual:e} of ρρ̃ exceeds {RESIDUAL_TOL:e}")]
    NumericalFailure { residual: f64 },
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricReport {
    pub concurrence: f64,
    pub fidelity_singlet: f64,
}

impl MetricReport {
    /// Clamps both values into `[0, 1]`; anything beyond the slack is kept
    /// as is so that a broken invariant stays visible.
    pub fn new(concurrence: f64, fidelity_singlet: f64) -> Self {
        Self { concurrence: clamp_unit(concurrence), fidelity_singlet: clamp_unit(fidelity_singlet) }
    }

    pub fn of_xstate(x: &XStateParams) -> Self {
        Self::new(concurrence_xstate(x), fidelity_singlet(&x.to_density()))
    }
}

fn clamp_unit(x: f64) -> f64 {
    if (-CLAMP_SLACK..0.0).contains(&x) {
        0.0
    } else if x > 1.0 && x <= 1.0 + CLAMP_SLACK {
        1.0
    } else {
        x
    }
}

/// `max{0, 2(|ρ₂₃| − √(ρ₁₁ρ₄₄)), 2(|ρ₁₄| − √(ρ₂₂ρ₃₃))}`.
pub fn concurrence_xstate(x: &XStateParams) -> f64 {
    let [d1, d2, d3, d4] = x.diagonal.map(|v| v.max(0.0));
    let a = 2.0 * (x.inner_coherence.norm() - (d1 * d4).sqrt());
    let b = 2.0 * (x.outer_coherence.norm() - (d2 * d3).sqrt());
    a.max(b).max(0.0)
}

/// `(σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn spin_flip(rho: &DensityMatrix) -> DensityMatrix {
    let m = rho.entries();
    let mut out = ZERO4;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = flip_sign(i) * flip_sign(j) * m[3 - i][3 - j].conj();
        }
    }
    DensityMatrix::from_entries(out)
}

/// `σ_y ⊗ σ_y` is antidiagonal with entries (−1, 1, 1, −1).
fn flip_sign(i: usize) -> f64 {
    if i == 0 || i == 3 {
        -1.0
    } else {
        1.0
    }
}

/// Wootters concurrence for an arbitrary two-qubit state.
///
/// The square roots of the eigenvalues of `ρρ̃` are obtained as singular
/// values of `B† (σ_y⊗σ_y) B*` with `ρ = B B†`, then each `λ` is checked
/// against the characteristic polynomial of `ρρ̃`.
pub fn concurrence_general(rho: &DensityMatrix) -> Result<f64, MetricsError> {
    qstate::ensure_valid(rho)?;
    let (vals, vecs) = linalg::hermitian_eigen(rho.entries());
    let mut b = ZERO4;
    for k in 0..4 {
        let root = vals[k].max(0.0).sqrt();
        for i in 0..4 {
            b[i][k] = vecs[i][k] * root;
        }
    }
    let mut k_mat = ZERO4;
    for i in 0..4 {
        for j in 0..4 {
            k_mat[i][j] = (0..4).map(|m| b[m][i].conj() * flip_sign(m) * b[3 - m][j].conj()).sum();
        }
    }
    let s = linalg::singular_values(&k_mat);

    let xi = linalg::mul(rho.entries(), spin_flip(rho).entries());
    let poly = char_poly(&xi);
    let residual = s.iter().map(|&x| eval_poly(&poly, x * x).norm()).fold(0.0, f64::max);
    if !(residual <= RESIDUAL_TOL) {
        return Err(MetricsError::NumericalFailure { residual });
    }
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

/// Coefficients `c₀..c₄` (monic, `c₄ = 1`) of `det(x − A)` by Faddeev–LeVerrier.
fn char_poly(a: &Mat4) -> [C64; 5] {
    let mut c = [C64::new(0.0, 0.0); 5];
    c[4] = C64::new(1.0, 0.0);
    let mut m = ZERO4;
    for k in 1..=4 {
        let am = linalg::mul(a, &m);
        m = am;
        for i in 0..4 {
            m[i][i] += c[5 - k];
        }
        let t = linalg::trace(&linalg::mul(a, &m));
        c[4 - k] = -t / k as f64;
    }
    c
}

fn eval_poly(c: &[C64; 5], x: f64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &ck| acc * x + ck)
}

/// `⟨1₋|ρ|1₋⟩ = ½(ρ₂₂ + ρ₃₃ − ρ₂₃ − ρ₃₂)`.
pub fn fidelity_singlet(rho: &DensityMatrix) -> f64 {
    0.5 * (rho.get(1, 1) + rho.get(2, 2) - rho.get(1, 2) - rho.get(2, 1)).re
}

/// Both measures of a general state.
pub fn report(rho: &DensityMatrix) -> Result<MetricReport, MetricsError> {
    Ok(MetricReport::new(concurrence_general(rho)?, fidelity_singlet(rho)))
}
