//! Independent reference computations and the seeded validation suite.
//!
//! [`slocc_by_amplitudes`] rebuilds the projected state from the two-particle
//! amplitudes of the deformed basis, without the population weights used by
//! [`crate::slocc`]. The suite compares every production path against a
//! second route and reports the largest deviation met.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::deform::{DeformationCoeffs, Statistics};
use crate::dynamics::{self, RateMatrix};
use crate::metrics;
use crate::noise::{self, BathParams, ChannelKind};
use crate::qstate::{self, Basis, DensityMatrix, PopulationVector, XStateParams};
use crate::slocc;
use crate::C64;

/// Deliberate defects for negative-control runs of the suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Faults {
    /// Multiplies the phase-damping rate matrix fed to the RK4 check.
    pub pd_generator_scale: f64,
}

impl Default for Faults {
    fn default() -> Self {
        Self { pd_generator_scale: 1.0 }
    }
}

/// Outcome of one cross-check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub samples: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    /// Samples that raised an error instead of producing a comparison.
    pub errors: usize,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.errors == 0 && self.max_deviation <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

/// Projected state and success probability from the amplitude expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeProjection {
    pub rho_lr: DensityMatrix,
    pub p_lr: f64,
    /// Unnormalized `Tr(Π ρ_D)` times `Tr ρ_D`, i.e. `Σ_u p_u Σ_στ |⟨Lσ,Rτ|ū⟩|²`.
    pub weight: f64,
}

/// `⟨Lσ,Rτ| ψ1 a, ψ2 b⟩` for the no-label two-particle states.
fn region_amplitude(c: &DeformationCoeffs, sigma: usize, tau: usize, a: usize, b: usize) -> f64 {
    let direct = if sigma == a && tau == b { c.l * c.rp } else { 0.0 };
    let exchange = if sigma == b && tau == a { c.eta() * c.lp * c.r } else { 0.0 };
    direct + exchange
}

/// `⟨ψ1 a, ψ2 b | ψ1 c, ψ2 d⟩`.
fn deformed_inner(c: &DeformationCoeffs, a: usize, b: usize, cc: usize, d: usize) -> f64 {
    let o = c.l * c.lp + c.r * c.rp;
    let direct = if a == cc && b == d { 1.0 } else { 0.0 };
    let exchange = if a == d && b == cc { c.eta() * o * o } else { 0.0 };
    direct + exchange
}

/// Projection of the deformed mixture `Σ_u p_u |ū⟩⟨ū|` onto one particle in
/// each region, computed from amplitudes.
pub fn slocc_by_amplitudes(pops: &PopulationVector, c: &DeformationCoeffs) -> Option<AmplitudeProjection> {
    let vectors = pops.basis().vectors();
    let mut rho = [[C64::new(0.0, 0.0); 4]; 4];
    let mut norm = 0.0;
    for (u, v) in vectors.iter().enumerate() {
        let pu = pops.get(u);
        if pu == 0.0 {
            continue;
        }
        let mut amp = [0.0; 4];
        for (st, slot) in amp.iter_mut().enumerate() {
            *slot = (0..4).map(|ab| v[ab] * region_amplitude(c, st / 2, st % 2, ab / 2, ab % 2)).sum();
        }
        for i in 0..4 {
            for j in 0..4 {
                rho[i][j] += C64::new(pu * amp[i] * amp[j], 0.0);
            }
        }
        let mut self_inner = 0.0;
        for ab in 0..4 {
            for cd in 0..4 {
                self_inner += v[ab] * v[cd] * deformed_inner(c, ab / 2, ab % 2, cd / 2, cd % 2);
            }
        }
        norm += pu * self_inner;
    }
    let weight: f64 = (0..4).map(|i| rho[i][i].re).sum();
    if !(weight > 0.0) || !(norm > 0.0) {
        return None;
    }
    rho.iter_mut().flatten().for_each(|z| *z /= weight);
    Some(AmplitudeProjection { rho_lr: DensityMatrix::from_entries(rho), p_lr: weight / norm, weight })
}

fn random_pops(rng: &mut impl Rng, basis: Basis) -> PopulationVector {
    let raw: [f64; 4] = std::array::from_fn(|_| -rng.gen::<f64>().max(1e-300).ln());
    let sum: f64 = raw.iter().sum();
    PopulationVector::new(basis, raw.map(|x| x / sum)).expect("normalized by construction")
}

fn random_channel(rng: &mut impl Rng) -> ChannelKind {
    ChannelKind::ALL[rng.gen_range(0..ChannelKind::ALL.len())]
}

fn random_statistics(rng: &mut impl Rng) -> Statistics {
    if rng.gen::<bool>() {
        Statistics::Boson
    } else {
        Statistics::Fermion
    }
}

fn max_pop_dev(a: &PopulationVector, b: &PopulationVector) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn pops_of(rho: &DensityMatrix, basis: Basis) -> [f64; 4] {
    basis.vectors().map(|v| rho.expectation_real(&v))
}

/// Closed-form distinguishable populations vs. explicit Kraus evolution of
/// the singlet (global white noise for the depolarizing channel).
pub fn check_kraus(rng: &mut impl Rng, samples: usize) -> CheckResult {
    let mut worst = 0.0f64;
    let mut errors = 0;
    let singlet = DensityMatrix::singlet();
    for k in 0..samples {
        let channel = ChannelKind::ALL[k % 3];
        let p = rng.gen::<f64>();
        let evolved = match channel {
            ChannelKind::Depolarizing => noise::depolarize_global(&singlet, p),
            _ => noise::kraus_for(channel, p).and_then(|kr| noise::evolve_two_qubit_kraus(&singlet, &kr)),
        };
        let closed = noise::distinguishable_populations(channel, p);
        match (evolved, closed) {
            (Ok(rho), Ok(pops)) => {
                let built = qstate::diagonal_to_density_unchecked(&pops);
                worst = worst.max(rho.max_abs_diff(&built));
                let direct = pops_of(&rho, channel.basis());
                for (x, y) in direct.iter().zip(pops.values()) {
                    worst = worst.max((x - y).abs());
                }
            }
            _ => errors += 1,
        }
    }
    CheckResult { name: "kraus-vs-closed-form", samples, max_deviation: worst, tolerance: 1e-12, errors }
}

fn scaled_generator(channel: ChannelKind, rates: &dynamics::EffectiveRates, faults: &Faults) -> RateMatrix {
    let mut g = dynamics::generator(channel, rates);
    if channel == ChannelKind::PhaseDamping {
        g.iter_mut().flatten().for_each(|x| *x *= faults.pd_generator_scale);
    }
    g
}

/// Closed-form post-deformation evolution vs. RK4 on the rate matrix, for
/// random channel, angle, populations and `γ₀Δ ∈ [0, 5]`.
pub fn check_dynamics(rng: &mut impl Rng, samples: usize, faults: &Faults) -> CheckResult {
    let mut worst = 0.0f64;
    let mut errors = 0;
    for _ in 0..samples {
        let channel = random_channel(rng);
        let theta = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
        let stats = random_statistics(rng);
        let c = DeformationCoeffs::from_angle(theta, stats, Default::default())
            .expect("all-positive pattern is always valid");
        let gamma0 = 1.0;
        let rates = dynamics::effective_rates(&c, gamma0);
        let pops = random_pops(rng, channel.basis());
        let dt = 5.0 * rng.gen::<f64>() / gamma0;
        let g = scaled_generator(channel, &rates, faults);
        let steps = dynamics::min_steps(&rates, dt).max(1);
        let closed = dynamics::evolve(channel, &pops, &rates, dt);
        let rk4 = dynamics::integrate_generator(channel, &g, &pops, &rates, dt, steps);
        match (closed, rk4) {
            (Ok(a), Ok(b)) => worst = worst.max(max_pop_dev(&a, &b)),
            // A wrong generator can leave the simplex; that is a failure too.
            _ => errors += 1,
        }
    }
    CheckResult { name: "closed-form-vs-rk4", samples, max_deviation: worst, tolerance: 1e-8, errors }
}

/// Random X-state with valid positivity constraints.
pub fn random_xstate(rng: &mut impl Rng) -> XStateParams {
    let raw: [f64; 4] = std::array::from_fn(|_| -rng.gen::<f64>().max(1e-300).ln());
    let sum: f64 = raw.iter().sum();
    let d = raw.map(|x| x / sum);
    let mut coherence =
        |bound: f64| C64::from_polar(bound * rng.gen::<f64>(), rng.gen_range(0.0..std::f64::consts::TAU));
    let inner = coherence((d[1] * d[2]).sqrt());
    let outer = coherence((d[0] * d[3]).sqrt());
    XStateParams { diagonal: d, inner_coherence: inner, outer_coherence: outer }
}

/// X-state closed form vs. the general Wootters computation.
pub fn check_concurrence(rng: &mut impl Rng, samples: usize) -> CheckResult {
    let mut worst = 0.0f64;
    let mut errors = 0;
    for _ in 0..samples {
        let x = random_xstate(rng);
        match metrics::concurrence_general(&x.to_density()) {
            Ok(c) => worst = worst.max((c - metrics::concurrence_xstate(&x)).abs()),
            Err(_) => errors += 1,
        }
    }
    CheckResult { name: "xstate-vs-general-concurrence", samples, max_deviation: worst, tolerance: 1e-8, errors }
}

/// Random unit-norm real mode pair, not restricted to the `|r| = |lp|` family.
pub fn random_coeffs(rng: &mut impl Rng) -> DeformationCoeffs {
    let a = rng.gen_range(0.0..std::f64::consts::TAU);
    let b = rng.gen_range(0.0..std::f64::consts::TAU);
    let stats = random_statistics(rng);
    DeformationCoeffs::new(a.cos(), a.sin(), b.cos(), b.sin(), stats).expect("unit vectors")
}

/// Relative deviation between the production projection and the amplitude
/// expansion, or `None` when the postselected ensemble is (nearly) empty.
pub fn slocc_deviation(pops: &PopulationVector, c: &DeformationCoeffs) -> Option<f64> {
    let reference = slocc_by_amplitudes(pops, c)?;
    if reference.weight < 1e-6 {
        return None;
    }
    let out = slocc::project(pops, c).ok()?;
    let rho_dev = out.rho_lr.max_abs_diff(&reference.rho_lr);
    let p_dev = (out.p_lr - reference.p_lr).abs() / reference.p_lr;
    Some(rho_dev.max(p_dev))
}

/// `project`/`postselection_probability` vs. the amplitude expansion.
pub fn check_slocc(rng: &mut impl Rng, samples: usize) -> CheckResult {
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < samples {
        let basis = if rng.gen::<bool>() { Basis::BellB1 } else { Basis::MixedB2 };
        let pops = random_pops(rng, basis);
        let c = random_coeffs(rng);
        if let Some(dev) = slocc_deviation(&pops, &c) {
            worst = worst.max(dev);
            done += 1;
        }
    }
    CheckResult { name: "slocc-amplitude-oracle", samples, max_deviation: worst, tolerance: 1e-9, errors: 0 }
}

/// Closed-form `p(t)` vs. `1 − q(t)` from direct integration, on a grid of
/// `γ₀t ∈ [0, 5]` for `λ/γ₀ ∈ {2, 3, 10}`.
pub fn check_decoherence(points: usize) -> CheckResult {
    let mut worst = 0.0f64;
    let mut errors = 0;
    let mut samples = 0;
    for ratio in [2.0, 3.0, 10.0] {
        let bath = BathParams::new(1.0, ratio).expect("positive bath");
        for k in 0..points {
            let t = 5.0 * k as f64 / (points - 1).max(1) as f64;
            samples += 1;
            match (noise::disturbance_probability(&bath, t), noise::q_oracle(&bath, t)) {
                (Ok(p), Ok(q)) => worst = worst.max((p - (1.0 - q)).abs()),
                _ => errors += 1,
            }
        }
    }
    CheckResult { name: "decoherence-vs-q-oracle", samples, max_deviation: worst, tolerance: 1e-8, errors }
}

/// Runs every cross-check with sampling driven by `seed`.
pub fn run_suite(seed: u64, faults: &Faults) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = vec![
        check_kraus(&mut rng, 300),
        check_dynamics(&mut rng, 300, faults),
        check_concurrence(&mut rng, 500),
        check_slocc(&mut rng, 200),
        check_decoherence(51),
    ];
    SuiteReport { seed, checks }
}
