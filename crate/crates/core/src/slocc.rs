//! Projection onto one particle per region and postselection.

use thiserror::Error;

use crate::deform::{self, DeformationCoeffs};
use crate::qstate::{self, DensityMatrix, PopulationVector, StateError};

/// Weights below this are treated as an empty postselected ensemble.
const ZERO_WEIGHT: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SloccError {
    #[error("postselection weight N = {0:e} vanishes; no pair is ever found one per region")]
    ZeroPostselectionWeight(f64),
    #[error("deformed state has zero norm (denominator {0:e})")]
    DegenerateState(f64),
    #[error("populations must be normalized before projection (sum {0})")]
    Unnormalized(f64),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Result of the projection: the normalized distinguishable state, the
/// unnormalized weight `N` and the success probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SloccOutcome {
    pub rho_lr: DensityMatrix,
    /// Populations of `rho_lr` in the same basis as the input.
    pub pops_lr: PopulationVector,
    pub n_weight: f64,
    pub p_lr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Weighted {
    values: [f64; 4],
    n: f64,
}

fn weighted(pops: &PopulationVector, c: &DeformationCoeffs) -> Result<Weighted, SloccError> {
    let sum = pops.sum();
    if !pops.is_normalized() || (sum - 1.0).abs() > 1e-10 {
        return Err(SloccError::Unnormalized(sum));
    }
    let (w_sym, w_anti) = deform::slocc_weights(c);
    let p = pops.values();
    let values = [w_sym * p[0], w_anti * p[1], w_sym * p[2], w_sym * p[3]];
    Ok(Weighted { values, n: values.iter().sum() })
}

/// Projects the indistinguishable populations and renormalizes.
pub fn project(pops: &PopulationVector, c: &DeformationCoeffs) -> Result<SloccOutcome, SloccError> {
    let w = weighted(pops, c)?;
    if !(w.n > ZERO_WEIGHT) {
        return Err(SloccError::ZeroPostselectionWeight(w.n));
    }
    let raw = PopulationVector::unnormalized(pops.basis(), w.values);
    let normalized = raw.values().map(|x| x / w.n);
    let pops_lr = PopulationVector::new(pops.basis(), normalized)?;
    let rho_lr = qstate::bell_diagonal_to_density(&pops_lr)?;
    let p_lr = postselection_probability(pops, c)?;
    Ok(SloccOutcome { rho_lr, pops_lr, n_weight: w.n, p_lr })
}

/// `N / (C₊² Σ_sym p + C₋² p₁₋)`.
pub fn postselection_probability(pops: &PopulationVector, c: &DeformationCoeffs) -> Result<f64, SloccError> {
    let w = weighted(pops, c)?;
    let (c_plus, c_minus) = deform::c_norms(c);
    let denom = c_plus * c_plus * pops.symmetric_sum() + c_minus * c_minus * pops.singlet_population();
    if !(denom > ZERO_WEIGHT) {
        return Err(SloccError::DegenerateState(denom));
    }
    Ok(w.n / denom)
}
