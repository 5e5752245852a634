//! Population dynamics of the indistinguishable pair after the deformation.
//!
//! Every channel keeps the state diagonal in a fixed basis, so the master
//! equation reduces to a linear system `ṗ = G p` with a 4x4 rate matrix.
//! The closed-form `evolve_*` solutions are the production path;
//! [`integrate_ode`] integrates the same generator with RK4 and serves as the
//! independent check.
//!
//! The phase-damping generator carries a factor ¼ (the dissipator is built
//! from `S_z = σ_z/2`), which makes it consistent with its closed-form
//! solution `p₁±(t) = ½[(1 + e^{−γ₋Δ/2}) p₁± + (1 − e^{−γ₋Δ/2}) p₁∓]`.

use serde::Serialize;
use thiserror::Error;

use crate::deform::DeformationCoeffs;
use crate::noise::ChannelKind;
use crate::qstate::{Basis, PopulationVector, StateError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("elapsed time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("{channel} evolution expects populations in {expected:?}, got {got:?}")]
    WrongBasis { channel: ChannelKind, expected: Basis, got: Basis },
    #[error("{steps} RK4 steps are too few for this horizon (need at least {required})")]
    TooFewSteps { steps: usize, required: usize },
    #[error(transparent)]
    State(#[from] StateError),
}

/// Overlap-weighted decay rates of the indistinguishable master equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveRates {
    pub gamma0: f64,
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    /// `γ_X^(i,j) = γ₀ |⟨X|ψi⟩⟨ψj|X⟩|`, indexed `[X][i][j]` with `X = L, R`.
    pub gamma_xij: [[[f64; 2]; 2]; 2],
}

pub fn effective_rates(c: &DeformationCoeffs, gamma0: f64) -> EffectiveRates {
    // |⟨X|ψi⟩| indexed [X][i]
    let amp = [[c.l.abs(), c.lp.abs()], [c.r.abs(), c.rp.abs()]];
    let mut gamma_xij = [[[0.0; 2]; 2]; 2];
    let (mut plus, mut minus) = (0.0, 0.0);
    for x in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                let g = gamma0 * amp[x][i] * amp[x][j];
                gamma_xij[x][i][j] = g;
                plus += g;
                minus += if i == j { g } else { -g };
            }
        }
    }
    EffectiveRates { gamma0, gamma_plus: plus, gamma_minus: minus.max(0.0), gamma_xij }
}

pub type RateMatrix = [[f64; 4]; 4];

/// Generator `G` of `ṗ = G p` for the channel, in the channel's basis.
pub fn generator(channel: ChannelKind, rates: &EffectiveRates) -> RateMatrix {
    let (gp, gm) = (rates.gamma_plus, rates.gamma_minus);
    match channel {
        ChannelKind::PhaseDamping => {
            let (a, b) = (0.25 * gm, 0.25 * gp);
            [[-a, a, 0.0, 0.0], [a, -a, 0.0, 0.0], [0.0, 0.0, -b, b], [0.0, 0.0, b, -b]]
        }
        ChannelKind::Depolarizing => {
            let d = -(2.0 * gp + gm);
            let q = 0.25;
            [
                [q * d, q * gm, q * gp, q * gp],
                [q * gm, -3.0 * q * gm, q * gm, q * gm],
                [q * gp, q * gm, q * d, q * gp],
                [q * gp, q * gm, q * gp, q * d],
            ]
        }
        ChannelKind::AmplitudeDamping => [
            [-0.5 * gp, 0.0, 0.5 * gp, 0.0],
            [0.0, -0.5 * gm, 0.5 * gm, 0.0],
            [0.0, 0.0, -0.5 * (gp + gm), 0.0],
            [0.5 * gp, 0.5 * gm, 0.0, 0.0],
        ],
    }
}

fn check_inputs(channel: ChannelKind, pops: &PopulationVector, dt: f64) -> Result<(), DynamicsError> {
    if !(dt >= 0.0) {
        return Err(DynamicsError::NegativeTime(dt));
    }
    let expected = channel.basis();
    if pops.basis() != expected {
        return Err(DynamicsError::WrongBasis { channel, expected, got: pops.basis() });
    }
    Ok(())
}

/// Closed-form phase-damping evolution over `dt`.
pub fn evolve_phase_damping(
    pops: &PopulationVector,
    rates: &EffectiveRates,
    dt: f64,
) -> Result<PopulationVector, DynamicsError> {
    check_inputs(ChannelKind::PhaseDamping, pops, dt)?;
    let p = pops.values();
    let mix = |a: f64, b: f64, rate: f64| {
        let e = (-0.5 * rate * dt).exp();
        let avg = 0.5 * (a + b);
        let half_diff = 0.5 * (a - b) * e;
        (avg + half_diff, avg - half_diff)
    };
    let (p1p, p1m) = mix(p[0], p[1], rates.gamma_minus);
    let (p2p, p2m) = mix(p[2], p[3], rates.gamma_plus);
    Ok(PopulationVector::new(Basis::BellB1, [p1p, p1m, p2p, p2m])?)
}

/// Closed-form depolarizing evolution over `dt`.
pub fn evolve_depolarizing(
    pops: &PopulationVector,
    rates: &EffectiveRates,
    dt: f64,
) -> Result<PopulationVector, DynamicsError> {
    check_inputs(ChannelKind::Depolarizing, pops, dt)?;
    let p = pops.values();
    let singlet_decay = (-rates.gamma_minus * dt).exp();
    let other_decay = (-(3.0 * rates.gamma_plus + rates.gamma_minus) * dt / 4.0).exp();
    let cross = (1.0 - 4.0 * p[1]) / 12.0 * (singlet_decay - other_decay);
    let sym = |pv: f64| pv * other_decay + 0.25 * (1.0 - other_decay) + cross;
    let p1m = p[1] * singlet_decay + 0.25 * (1.0 - singlet_decay);
    Ok(PopulationVector::new(Basis::BellB1, [sym(p[0]), p1m, sym(p[2]), sym(p[3])])?)
}

/// `(e^{−a t} − e^{−b t}) · a/(b − a)`, finite as `b → a`
/// (limit `a t e^{−a t}`).
fn feed_term(a: f64, b: f64, t: f64) -> f64 {
    let x = (b - a) * t;
    if x.abs() > 1.0 {
        a / (b - a) * ((-a * t).exp() - (-b * t).exp())
    } else {
        let exprel = if x == 0.0 { 1.0 } else { x.exp_m1() / x };
        a * t * (-b * t).exp() * exprel
    }
}

/// Closed-form amplitude-damping evolution over `dt`, in the mixed basis.
pub fn evolve_amplitude_damping(
    pops: &PopulationVector,
    rates: &EffectiveRates,
    dt: f64,
) -> Result<PopulationVector, DynamicsError> {
    check_inputs(ChannelKind::AmplitudeDamping, pops, dt)?;
    let p = pops.values();
    let (gp, gm) = (rates.gamma_plus, rates.gamma_minus);
    let u_rate = 0.5 * (gp + gm);
    let p_u = p[2] * (-u_rate * dt).exp();
    let p1p = p[0] * (-0.5 * gp * dt).exp() + p[2] * feed_term(0.5 * gp, u_rate, dt);
    let p1m = p[1] * (-0.5 * gm * dt).exp() + p[2] * feed_term(0.5 * gm, u_rate, dt);
    let p_d = 1.0 - p1p - p1m - p_u;
    Ok(PopulationVector::new(Basis::MixedB2, [p1p, p1m, p_u, p_d])?)
}

/// Dispatches to the closed form of `channel`.
pub fn evolve(
    channel: ChannelKind,
    pops: &PopulationVector,
    rates: &EffectiveRates,
    dt: f64,
) -> Result<PopulationVector, DynamicsError> {
    match channel {
        ChannelKind::PhaseDamping => evolve_phase_damping(pops, rates, dt),
        ChannelKind::Depolarizing => evolve_depolarizing(pops, rates, dt),
        ChannelKind::AmplitudeDamping => evolve_amplitude_damping(pops, rates, dt),
    }
}

/// Smallest step count accepted by [`integrate_ode`]: `ceil(4γ₀·dt·100)`.
pub fn min_steps(rates: &EffectiveRates, dt: f64) -> usize {
    (4.0 * rates.gamma0 * dt * 100.0).ceil() as usize
}

fn apply(g: &RateMatrix, p: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for i in 0..4 {
        out[i] = (0..4).map(|j| g[i][j] * p[j]).sum();
    }
    out
}

fn axpy(p: &[f64; 4], k: &[f64; 4], h: f64) -> [f64; 4] {
    [p[0] + h * k[0], p[1] + h * k[1], p[2] + h * k[2], p[3] + h * k[3]]
}

/// Fixed-step RK4 integration of `ṗ = G p` using [`generator`].
pub fn integrate_ode(
    channel: ChannelKind,
    pops: &PopulationVector,
    rates: &EffectiveRates,
    dt: f64,
    steps: usize,
) -> Result<PopulationVector, DynamicsError> {
    integrate_generator(channel, &generator(channel, rates), pops, rates, dt, steps)
}

/// RK4 with an explicit rate matrix, for checks that perturb the generator.
pub fn integrate_generator(
    channel: ChannelKind,
    g: &RateMatrix,
    pops: &PopulationVector,
    rates: &EffectiveRates,
    dt: f64,
    steps: usize,
) -> Result<PopulationVector, DynamicsError> {
    check_inputs(channel, pops, dt)?;
    let required = min_steps(rates, dt);
    if steps < required || steps == 0 {
        return Err(DynamicsError::TooFewSteps { steps, required: required.max(1) });
    }
    let h = dt / steps as f64;
    let mut p = pops.values();
    for _ in 0..steps {
        let k1 = apply(g, &p);
        let k2 = apply(g, &axpy(&p, &k1, 0.5 * h));
        let k3 = apply(g, &axpy(&p, &k2, 0.5 * h));
        let k4 = apply(g, &axpy(&p, &k3, h));
        for i in 0..4 {
            p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    Ok(PopulationVector::new(channel.basis(), p)?)
}
