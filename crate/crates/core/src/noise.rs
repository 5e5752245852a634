//! Lorentzian-bath decoherence function and the evolution of the two
//! distinguishable qubits before the deformation.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::qstate::{self, Basis, DensityMatrix, PopulationVector, StateError};
use crate::C64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoiseError {
    #[error("bath parameters must be finite and positive (gamma0 = {gamma0}, lambda = {lambda})")]
    InvalidBath { gamma0: f64, lambda: f64 },
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("the depolarizing channel has no single-qubit Kraus pair here; use depolarize_global")]
    UnsupportedKrausForm,
    #[error(transparent)]
    State(#[from] StateError),
}

/// Zero-temperature reservoir with a Lorentzian spectral density of width
/// `lambda` and single-qubit decay rate `gamma0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BathParams {
    gamma0: f64,
    lambda: f64,
}

impl BathParams {
    /// Builds a bath. Non-Markovian widths (`lambda < 2 gamma0`) are accepted
    /// with a warning.
    pub fn new(gamma0: f64, lambda: f64) -> Result<Self, NoiseError> {
        let ok = gamma0.is_finite() && lambda.is_finite() && gamma0 > 0.0 && lambda > 0.0;
        if !ok {
            return Err(NoiseError::InvalidBath { gamma0, lambda });
        }
        let bath = Self { gamma0, lambda };
        if !bath.is_markovian() {
            log::warn!("bath with lambda = {lambda} < 2 gamma0 = {} is outside the Markovian regime", 2.0 * gamma0);
        }
        Ok(bath)
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn is_markovian(&self) -> bool {
        self.lambda >= 2.0 * self.gamma0
    }
}

impl Default for BathParams {
    fn default() -> Self {
        Self { gamma0: 1.0, lambda: 3.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ChannelKind {
    PhaseDamping,
    Depolarizing,
    AmplitudeDamping,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 3] =
        [ChannelKind::PhaseDamping, ChannelKind::Depolarizing, ChannelKind::AmplitudeDamping];

    pub fn short_name(self) -> &'static str {
        match self {
            ChannelKind::PhaseDamping => "phase",
            ChannelKind::Depolarizing => "dep",
            ChannelKind::AmplitudeDamping => "ad",
        }
    }

    /// Diagonal basis in which the channel keeps the state.
    pub fn basis(self) -> Basis {
        match self {
            ChannelKind::AmplitudeDamping => Basis::MixedB2,
            _ => Basis::BellB1,
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for ChannelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "phase" | "pd" | "phase-damping" => Ok(ChannelKind::PhaseDamping),
            "dep" | "depolarizing" => Ok(ChannelKind::Depolarizing),
            "ad" | "amplitude" | "amplitude-damping" => Ok(ChannelKind::AmplitudeDamping),
            other => Err(format!("unknown channel '{other}' (expected phase, dep or ad)")),
        }
    }
}

/// Excited-state survival amplitude `G(t)` of a qubit coupled to the bath.
///
/// `G` solves `G'' + λ G' + (γ₀λ/2) G = 0` with `G(0) = 1`, `G'(0) = 0`.
/// Writing `a = λt/2` and `y² = (λ² − 2γ₀λ) t²/4`, the solution is
/// `e^{-a} (cosh y + a sinh(y)/y)` for `y² ≥ 0` and the trigonometric
/// counterpart otherwise. Both branches meet at `e^{-a}(1 + a)`.
fn survival_amplitude(bath: &BathParams, t: f64) -> f64 {
    let a = 0.5 * bath.lambda * t;
    let z = 0.25 * (bath.lambda * bath.lambda - 2.0 * bath.gamma0 * bath.lambda) * t * t;
    if z > 0.0 {
        let y = z.sqrt();
        if y < 1.0 {
            (-a).exp() * (y.cosh() + a * y.sinh() / y)
        } else {
            // e^{±y} split avoids overflowing cosh/sinh at long times.
            0.5 * (1.0 + a / y) * (y - a).exp() + 0.5 * (1.0 - a / y) * (-y - a).exp()
        }
    } else if z < 0.0 {
        let y = (-z).sqrt();
        (-a).exp() * (y.cos() + a * y.sin() / y)
    } else {
        (-a).exp() * (1.0 + a)
    }
}

/// Disturbance probability `p(t) = 1 − G(t)²` induced by the bath.
pub fn disturbance_probability(bath: &BathParams, t: f64) -> Result<f64, NoiseError> {
    if !(t >= 0.0) {
        return Err(NoiseError::NegativeTime(t));
    }
    let g = survival_amplitude(bath, t);
    Ok((1.0 - g * g).clamp(0.0, 1.0))
}

/// Survival probability `q(t) = G(t)²` obtained by RK4 integration of the
/// local second-order equation for the amplitude, independently of the
/// closed form. Step size is at most `min(1/λ, 1/γ₀)/100`.
pub fn q_oracle(bath: &BathParams, t: f64) -> Result<f64, NoiseError> {
    if !(t >= 0.0) {
        return Err(NoiseError::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let (lam, k) = (bath.lambda, 0.5 * bath.gamma0 * bath.lambda);
    let h_max = (1.0 / bath.lambda).min(1.0 / bath.gamma0) / 100.0;
    let steps = (t / h_max).ceil().max(1.0) as usize;
    let h = t / steps as f64;

    let rhs = |g: f64, v: f64| (v, -lam * v - k * g);
    let (mut g, mut v) = (1.0f64, 0.0f64);
    for _ in 0..steps {
        let (k1g, k1v) = rhs(g, v);
        let (k2g, k2v) = rhs(g + 0.5 * h * k1g, v + 0.5 * h * k1v);
        let (k3g, k3v) = rhs(g + 0.5 * h * k2g, v + 0.5 * h * k2v);
        let (k4g, k4v) = rhs(g + h * k3g, v + h * k3v);
        g += h / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    Ok((g * g).clamp(0.0, 1.0))
}

pub type Mat2 = [[C64; 2]; 2];

/// Single-qubit Kraus pair `{E0, E1}`, applied identically to both qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrausPair {
    pub e0: Mat2,
    pub e1: Mat2,
}

impl KrausPair {
    /// `‖E0†E0 + E1†E1 − I‖∞`.
    pub fn completeness_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for e in [&self.e0, &self.e1] {
                    for k in 0..2 {
                        acc += e[k][i].conj() * e[k][j];
                    }
                }
                let id = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - id).norm());
            }
        }
        worst
    }
}

fn real2(m: [[f64; 2]; 2]) -> Mat2 {
    [[C64::new(m[0][0], 0.0), C64::new(m[0][1], 0.0)], [C64::new(m[1][0], 0.0), C64::new(m[1][1], 0.0)]]
}

/// Kraus operators for phase damping and amplitude damping.
pub fn kraus_for(channel: ChannelKind, p: f64) -> Result<KrausPair, NoiseError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(NoiseError::ProbabilityOutOfRange(p));
    }
    let keep = (1.0 - p).sqrt();
    let flip = p.sqrt();
    let e0 = real2([[keep, 0.0], [0.0, 1.0]]);
    match channel {
        ChannelKind::PhaseDamping => Ok(KrausPair { e0, e1: real2([[flip, 0.0], [0.0, 0.0]]) }),
        // |↓⟩⟨↑|: row ↓ (index 1), column ↑ (index 0).
        ChannelKind::AmplitudeDamping => Ok(KrausPair { e0, e1: real2([[0.0, 0.0], [flip, 0.0]]) }),
        ChannelKind::Depolarizing => Err(NoiseError::UnsupportedKrausForm),
    }
}

fn kron(a: &Mat2, b: &Mat2) -> [[C64; 4]; 4] {
    let mut out = [[C64::new(0.0, 0.0); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// `Σ_ij (E_i ⊗ E_j) ρ (E_i ⊗ E_j)†` with the same pair on both qubits.
pub fn evolve_two_qubit_kraus(rho: &DensityMatrix, kraus: &KrausPair) -> Result<DensityMatrix, NoiseError> {
    qstate::ensure_valid(rho)?;
    let ops = [&kraus.e0, &kraus.e1];
    let mut out = DensityMatrix::from_entries([[C64::new(0.0, 0.0); 4]; 4]);
    for ei in ops {
        for ej in ops {
            out = out.plus(&rho.conjugated_by(&kron(ei, ej)));
        }
    }
    Ok(out)
}

/// Global white-noise map `(1 − p) ρ + p I/4`.
pub fn depolarize_global(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix, NoiseError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(NoiseError::ProbabilityOutOfRange(p));
    }
    qstate::ensure_valid(rho)?;
    Ok(rho.scaled(1.0 - p).plus(&DensityMatrix::maximally_mixed().scaled(p)))
}

/// Populations of the noisy singlet at the deformation time `t_deform`.
pub fn predeformation_state(
    channel: ChannelKind,
    bath: &BathParams,
    t_deform: f64,
) -> Result<PopulationVector, NoiseError> {
    let p = disturbance_probability(bath, t_deform)?;
    Ok(distinguishable_populations(channel, p)?)
}

/// Closed-form populations of the singlet after a disturbance `p`.
pub fn distinguishable_populations(channel: ChannelKind, p: f64) -> Result<PopulationVector, StateError> {
    let values = match channel {
        ChannelKind::PhaseDamping => [0.5 * p, 1.0 - 0.5 * p, 0.0, 0.0],
        ChannelKind::Depolarizing => [0.25 * p, 1.0 - 0.75 * p, 0.25 * p, 0.25 * p],
        ChannelKind::AmplitudeDamping => [0.0, 1.0 - p, 0.0, p],
    };
    PopulationVector::new(channel.basis(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::bell_diagonal_to_density;
    use proptest::prelude::*;

    fn bath(g: f64, l: f64) -> BathParams {
        BathParams::new(g, l).unwrap()
    }

    /// Adaptive-free reference: RK4 on the memory-kernel form
    /// `q̇ = −∫ f(t−s) q(s) ds` with `f(τ) = (γ₀λ/2) e^{−λτ}`, carried as the
    /// auxiliary variable `m(t) = ∫ f(t−s) q(s) ds`, `ṁ = (γ₀λ/2) q − λ m`.
    fn kernel_reference(b: &BathParams, t: f64, steps: usize) -> f64 {
        let h = t / steps as f64;
        let (lam, k) = (b.lambda(), 0.5 * b.gamma0() * b.lambda());
        let f = |q: f64, m: f64| (-m, k * q - lam * m);
        let (mut q, mut m) = (1.0, 0.0);
        for _ in 0..steps {
            let (a1, b1) = f(q, m);
            let (a2, b2) = f(q + 0.5 * h * a1, m + 0.5 * h * b1);
            let (a3, b3) = f(q + 0.5 * h * a2, m + 0.5 * h * b2);
            let (a4, b4) = f(q + h * a3, m + h * b3);
            q += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            m += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
        }
        q * q
    }

    #[test]
    fn no_disturbance_at_time_zero() {
        for b in [bath(1.0, 3.0), bath(1.0, 2.0), bath(1.0, 0.5)] {
            assert_eq!(disturbance_probability(&b, 0.0).unwrap(), 0.0);
            assert_eq!(q_oracle(&b, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn full_disturbance_at_long_times() {
        for b in [bath(1.0, 3.0), bath(1.0, 2.0), bath(0.3, 10.0)] {
            let p = disturbance_probability(&b, 400.0).unwrap();
            assert!(p > 1.0 - 1e-12, "{p}");
        }
    }

    #[test]
    fn matches_independent_kernel_integration() {
        let b = bath(1.0, 3.0);
        let p = disturbance_probability(&b, 1.0).unwrap();
        let q = kernel_reference(&b, 1.0, 20_000);
        assert!((p - (1.0 - q)).abs() < 1e-8, "{p} vs {}", 1.0 - q);
        let q2 = q_oracle(&b, 1.0).unwrap();
        assert!((q2 - (1.0 - p)).abs() < 1e-8);
    }

    #[test]
    fn critical_width_uses_the_limit_form() {
        let b = bath(1.0, 2.0);
        for t in [0.1_f64, 0.7, 2.5, 5.0] {
            let a = 0.5 * 2.0 * t;
            let limit = (1.0 + a) * (1.0 + a) * (-2.0 * t).exp();
            assert!((q_oracle(&b, t).unwrap() - limit).abs() < 1e-8);
            assert!((1.0 - disturbance_probability(&b, t).unwrap() - limit).abs() < 1e-14);
        }
    }

    #[test]
    fn continuous_across_the_critical_width() {
        for t in [0.2, 1.0, 3.0, 10.0] {
            let below = disturbance_probability(&bath(1.0, 2.0 - 1e-6), t).unwrap();
            let above = disturbance_probability(&bath(1.0, 2.0 + 1e-6), t).unwrap();
            assert!((below - above).abs() < 1e-4);
        }
    }

    #[test]
    fn negative_time_is_rejected() {
        let b = BathParams::default();
        assert_eq!(disturbance_probability(&b, -1.0), Err(NoiseError::NegativeTime(-1.0)));
        assert!(q_oracle(&b, -0.1).is_err());
        assert!(BathParams::new(0.0, 1.0).is_err());
        assert!(BathParams::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn markovian_probability_is_monotone() {
        for b in [bath(1.0, 2.0), bath(1.0, 3.0), bath(1.0, 10.0), bath(2.0, 4.5)] {
            let mut prev = 0.0;
            for i in 0..=5000 {
                let p = disturbance_probability(&b, i as f64 * 2e-3).unwrap();
                assert!((0.0..=1.0).contains(&p));
                assert!(p >= prev - 1e-15);
                prev = p;
            }
        }
        assert!(bath(1.0, 3.0).is_markovian() && !bath(1.0, 1.5).is_markovian());
    }

    #[test]
    fn kraus_examples() {
        let k = kraus_for(ChannelKind::PhaseDamping, 0.0).unwrap();
        assert_eq!(k.e0, real2([[1.0, 0.0], [0.0, 1.0]]));
        assert_eq!(k.e1, real2([[0.0, 0.0], [0.0, 0.0]]));

        let k = kraus_for(ChannelKind::AmplitudeDamping, 1.0).unwrap();
        assert_eq!(k.e1[1][0], C64::new(1.0, 0.0));

        let k = kraus_for(ChannelKind::PhaseDamping, 0.36).unwrap();
        assert!((k.e0[0][0].re - 0.8).abs() < 1e-15 && k.e0[1][1].re == 1.0);
        assert!((k.e1[0][0].re - 0.6).abs() < 1e-15 && k.e1[1][1].re == 0.0);

        assert_eq!(kraus_for(ChannelKind::Depolarizing, 0.1), Err(NoiseError::UnsupportedKrausForm));
        assert!(kraus_for(ChannelKind::PhaseDamping, 1.5).is_err());
    }

    #[test]
    fn kraus_completeness_on_a_grid() {
        for ch in [ChannelKind::PhaseDamping, ChannelKind::AmplitudeDamping] {
            for i in 0..=100 {
                let k = kraus_for(ch, i as f64 / 100.0).unwrap();
                assert!(k.completeness_error() <= 1e-12);
            }
        }
    }

    #[test]
    fn identity_pair_leaves_state_unchanged() {
        let k = kraus_for(ChannelKind::AmplitudeDamping, 0.0).unwrap();
        let pops = PopulationVector::new(Basis::BellB1, [0.1, 0.5, 0.3, 0.1]).unwrap();
        let rho = bell_diagonal_to_density(&pops).unwrap();
        assert!(evolve_two_qubit_kraus(&rho, &k).unwrap().max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn kraus_evolution_of_the_singlet() {
        let p = 0.37;
        let singlet = DensityMatrix::singlet();
        let pd = evolve_two_qubit_kraus(&singlet, &kraus_for(ChannelKind::PhaseDamping, p).unwrap()).unwrap();
        let want = bell_diagonal_to_density(
            &PopulationVector::new(Basis::BellB1, [p / 2.0, 1.0 - p / 2.0, 0.0, 0.0]).unwrap(),
        )
        .unwrap();
        assert!(pd.max_abs_diff(&want) < 1e-15);

        let ad = evolve_two_qubit_kraus(&singlet, &kraus_for(ChannelKind::AmplitudeDamping, p).unwrap()).unwrap();
        let want =
            bell_diagonal_to_density(&PopulationVector::new(Basis::MixedB2, [0.0, 1.0 - p, 0.0, p]).unwrap()).unwrap();
        assert!(ad.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn depolarizing_examples() {
        let singlet = DensityMatrix::singlet();
        assert_eq!(depolarize_global(&singlet, 0.0).unwrap(), singlet);
        assert!(depolarize_global(&singlet, 1.0).unwrap().max_abs_diff(&DensityMatrix::maximally_mixed()) < 1e-16);
        let w = depolarize_global(&singlet, 0.5).unwrap();
        let want =
            bell_diagonal_to_density(&PopulationVector::new(Basis::BellB1, [0.125, 0.625, 0.125, 0.125]).unwrap())
                .unwrap();
        assert!(w.max_abs_diff(&want) < 1e-16);
        assert!(depolarize_global(&singlet, -0.1).is_err());
        assert!(depolarize_global(&singlet.scaled(2.0), 0.1).is_err());
    }

    #[test]
    fn predeformation_examples() {
        let b = BathParams::default();
        for ch in ChannelKind::ALL {
            assert_eq!(predeformation_state(ch, &b, 0.0).unwrap().values(), [0.0, 1.0, 0.0, 0.0]);
        }
        assert_eq!(distinguishable_populations(ChannelKind::Depolarizing, 1.0).unwrap().values(), [0.25; 4]);
        let ad = distinguishable_populations(ChannelKind::AmplitudeDamping, 0.3).unwrap();
        assert_eq!(ad.basis(), Basis::MixedB2);
        assert!((ad.get(1) - 0.7).abs() < 1e-15 && ad.get(3) == 0.3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn closed_form_matches_explicit_maps(
            g in 0.2f64..3.0, ratio in 2.0f64..12.0, td in 0.0f64..6.0, ch in 0usize..3,
        ) {
            let b = bath(g, g * ratio);
            let channel = ChannelKind::ALL[ch];
            let pops = predeformation_state(channel, &b, td).unwrap();
            let p = disturbance_probability(&b, td).unwrap();
            let singlet = DensityMatrix::singlet();
            let rho = match channel {
                ChannelKind::Depolarizing => depolarize_global(&singlet, p).unwrap(),
                _ => evolve_two_qubit_kraus(&singlet, &kraus_for(channel, p).unwrap()).unwrap(),
            };
            for (k, v) in channel.basis().vectors().iter().enumerate() {
                prop_assert!((rho.expectation_real(v) - pops.get(k)).abs() <= 1e-12);
            }
        }
    }
}
