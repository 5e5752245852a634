//! Deformation coefficients, the entropic indistinguishability measure and
//! the overlap-dependent weights entering the projection.
//!
//! After the deformation the two spatial modes are `ψ1 = l|L⟩ + r|R⟩` and
//! `ψ2 = lp|L⟩ + rp|R⟩` with real amplitudes.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

const NORM_TOL: f64 = 1e-12;
const BISECTION_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeformError {
    #[error("mode amplitudes not normalized: l² + r² = {first}, lp² + rp² = {second}")]
    NotNormalized { first: f64, second: f64 },
    #[error("both cross probabilities l²rp² and lp²r² vanish")]
    DegenerateOverlap,
    #[error("indistinguishability target {0} outside [0, 1]")]
    TargetOutOfRange(f64),
    #[error("sign pattern index {0} out of range (expected 0..=3)")]
    BadSignIndex(usize),
}

/// Exchange statistics of the two particles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Statistics {
    Boson,
    Fermion,
}

impl Statistics {
    /// `η = +1` for bosons, `−1` for fermions.
    pub fn eta(self) -> f64 {
        match self {
            Statistics::Boson => 1.0,
            Statistics::Fermion => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fermion" | "fermions" | "-1" => Ok(Statistics::Fermion),
            "boson" | "bosons" | "+1" | "1" => Ok(Statistics::Boson),
            other => Err(format!("unknown statistics '{other}' (expected fermion or boson)")),
        }
    }
}

/// Signs applied to `(l, r, lp, rp)` on top of the canonical family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub enum SignPattern {
    #[default]
    AllPositive,
    /// Negates the amplitude at the given index of `(l, r, lp, rp)`.
    OneNegative(usize),
}

impl SignPattern {
    /// Pattern under which the given statistics reproduce the fermionic
    /// all-positive results.
    pub fn canonical_for(stats: Statistics) -> Self {
        match stats {
            Statistics::Fermion => SignPattern::AllPositive,
            Statistics::Boson => SignPattern::OneNegative(3),
        }
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignPattern::AllPositive => f.write_str("positive"),
            SignPattern::OneNegative(i) => write!(f, "negative:{i}"),
        }
    }
}

impl FromStr for SignPattern {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        if s == "positive" || s == "all-positive" {
            return Ok(SignPattern::AllPositive);
        }
        let index = s
            .strip_prefix("negative:")
            .or_else(|| s.strip_prefix("one-negative:"))
            .ok_or_else(|| format!("unknown sign pattern '{s}'"))?;
        match index {
            "l" | "0" => Ok(SignPattern::OneNegative(0)),
            "r" | "1" => Ok(SignPattern::OneNegative(1)),
            "lp" | "2" => Ok(SignPattern::OneNegative(2)),
            "rp" | "3" => Ok(SignPattern::OneNegative(3)),
            other => Err(format!("sign index '{other}' not in l, r, lp, rp")),
        }
    }
}

/// Real mode amplitudes plus the statistics sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeformationCoeffs {
    pub l: f64,
    pub r: f64,
    pub lp: f64,
    pub rp: f64,
    pub statistics: Statistics,
}

impl DeformationCoeffs {
    pub fn new(l: f64, r: f64, lp: f64, rp: f64, statistics: Statistics) -> Result<Self, DeformError> {
        let first = l * l + r * r;
        let second = lp * lp + rp * rp;
        if (first - 1.0).abs() > NORM_TOL || (second - 1.0).abs() > NORM_TOL {
            return Err(DeformError::NotNormalized { first, second });
        }
        Ok(Self { l, r, lp, rp, statistics })
    }

    /// No deformation: `ψ1 = L`, `ψ2 = R`.
    pub fn separated(statistics: Statistics) -> Self {
        Self { l: 1.0, r: 0.0, lp: 0.0, rp: 1.0, statistics }
    }

    /// `l = rp = cos θ`, `r = lp = sin θ`, then `pattern` applied.
    pub fn from_angle(theta: f64, statistics: Statistics, pattern: SignPattern) -> Result<Self, DeformError> {
        let (s, c) = theta.sin_cos();
        let mut amps = [c, s, s, c];
        if let SignPattern::OneNegative(i) = pattern {
            let slot = amps.get_mut(i).ok_or(DeformError::BadSignIndex(i))?;
            *slot = -*slot;
        }
        Ok(Self { l: amps[0], r: amps[1], lp: amps[2], rp: amps[3], statistics })
    }

    pub fn eta(&self) -> f64 {
        self.statistics.eta()
    }

    /// Whether the `|r| = |lp|` constraint holds.
    pub fn is_constrained(&self) -> bool {
        (self.r.abs() - self.lp.abs()).abs() <= NORM_TOL
    }

    pub fn amplitudes(&self) -> [f64; 4] {
        [self.l, self.r, self.lp, self.rp]
    }
}

fn entropy_term(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Entropic indistinguishability of the deformed pair, in `[0, 1]`.
pub fn indistinguishability(c: &DeformationCoeffs) -> Result<f64, DeformError> {
    let a = c.l * c.l * c.rp * c.rp;
    let b = c.lp * c.lp * c.r * c.r;
    let z = a + b;
    if z <= 0.0 {
        return Err(DeformError::DegenerateOverlap);
    }
    Ok((entropy_term(a / z) + entropy_term(b / z)).clamp(0.0, 1.0))
}

fn indistinguishability_at(theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let a = c.powi(4);
    let b = s.powi(4);
    entropy_term(a / (a + b)) + entropy_term(b / (a + b))
}

/// Angle `θ ∈ [0, π/4]` of the canonical family reaching `target`.
pub fn angle_for_indistinguishability(target: f64) -> Result<f64, DeformError> {
    if !(0.0..=1.0).contains(&target) {
        return Err(DeformError::TargetOutOfRange(target));
    }
    if target == 0.0 {
        return Ok(0.0);
    }
    if target == 1.0 {
        return Ok(FRAC_PI_4);
    }
    // `indistinguishability_at` increases on [0, π/4]; run until the bracket
    // stops shrinking.
    let (mut lo, mut hi) = (0.0f64, FRAC_PI_4);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if indistinguishability_at(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let value_lo = indistinguishability_at(lo);
    let value_hi = indistinguishability_at(hi);
    if (value_hi - target).abs() > BISECTION_TOL && (value_lo - target).abs() > BISECTION_TOL {
        return Err(DeformError::TargetOutOfRange(target));
    }
    Ok(if (value_hi - target).abs() <= (value_lo - target).abs() { hi } else { lo })
}

/// Coefficients on the `|r| = |lp|` family with the requested degree of
/// indistinguishability.
pub fn coeffs_from_indistinguishability(
    target: f64,
    statistics: Statistics,
    pattern: SignPattern,
) -> Result<DeformationCoeffs, DeformError> {
    let theta = angle_for_indistinguishability(target)?;
    DeformationCoeffs::from_angle(theta, statistics, pattern)
}

/// `⟨ψ1|ψ2⟩ = l·lp + r·rp`.
pub fn overlap(c: &DeformationCoeffs) -> f64 {
    c.l * c.lp + c.r * c.rp
}

/// Norms `C± = sqrt(1 ± η ⟨ψ1|ψ2⟩²)` of the deformed symmetric and singlet
/// states.
pub fn c_norms(c: &DeformationCoeffs) -> (f64, f64) {
    let o2 = overlap(c).powi(2);
    let eta = c.eta();
    ((1.0 + eta * o2).max(0.0).sqrt(), (1.0 - eta * o2).max(0.0).sqrt())
}

/// Projection weights `((l·rp + η lp·r)², (l·rp − η lp·r)²)`: the first
/// multiplies every symmetric population, the second the singlet.
pub fn slocc_weights(c: &DeformationCoeffs) -> (f64, f64) {
    let direct = c.l * c.rp;
    let exchange = c.eta() * c.lp * c.r;
    ((direct + exchange).powi(2), (direct - exchange).powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn binary_entropy(x: f64) -> f64 {
        let h = |p: f64| if p == 0.0 { 0.0 } else { -p * p.log2() };
        h(x) + h(1.0 - x)
    }

    fn all_half(stats: Statistics) -> DeformationCoeffs {
        DeformationCoeffs::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, stats).unwrap()
    }

    #[test]
    fn indistinguishability_endpoints() {
        let sep = DeformationCoeffs::separated(Statistics::Fermion);
        assert_eq!(indistinguishability(&sep).unwrap(), 0.0);
        assert!((indistinguishability(&all_half(Statistics::Fermion)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn indistinguishability_at_eighth_pi() {
        let theta = PI / 8.0;
        let c = DeformationCoeffs::from_angle(theta, Statistics::Fermion, SignPattern::AllPositive).unwrap();
        let (c4, s4) = (theta.cos().powi(4), theta.sin().powi(4));
        let want = binary_entropy(c4 / (c4 + s4));
        assert!((indistinguishability(&c).unwrap() - want).abs() < 1e-14);
        // Independent evaluation of the binary entropy at θ = π/8.
        assert!((want - 0.187_298_598_568_772).abs() < 1e-12, "{want}");
    }

    #[test]
    fn degenerate_overlap_is_an_error() {
        let c = DeformationCoeffs::new(0.0, 1.0, 0.0, 1.0, Statistics::Fermion).unwrap();
        assert_eq!(indistinguishability(&c), Err(DeformError::DegenerateOverlap));
    }

    #[test]
    fn unnormalized_amplitudes_are_rejected() {
        assert!(DeformationCoeffs::new(1.0, 0.1, 0.0, 1.0, Statistics::Boson).is_err());
    }

    #[test]
    fn inverse_parametrization_endpoints_and_midpoint() {
        let c = coeffs_from_indistinguishability(0.0, Statistics::Fermion, SignPattern::AllPositive).unwrap();
        assert_eq!(c.amplitudes(), [1.0, 0.0, 0.0, 1.0]);

        let c = coeffs_from_indistinguishability(1.0, Statistics::Fermion, SignPattern::AllPositive).unwrap();
        for a in c.amplitudes() {
            assert!((a - FRAC_1_SQRT_2).abs() < 1e-15);
        }

        let theta = angle_for_indistinguishability(0.5).unwrap();
        let (c4, s4) = (theta.cos().powi(4), theta.sin().powi(4));
        assert!((binary_entropy(c4 / (c4 + s4)) - 0.5).abs() <= 1e-10);
        assert!(coeffs_from_indistinguishability(1.2, Statistics::Boson, SignPattern::AllPositive).is_err());
    }

    #[test]
    fn overlap_examples() {
        assert_eq!(overlap(&DeformationCoeffs::separated(Statistics::Fermion)), 0.0);
        assert!((overlap(&all_half(Statistics::Fermion)) - 1.0).abs() < 1e-15);
        let c = DeformationCoeffs::from_angle(PI / 8.0, Statistics::Fermion, SignPattern::AllPositive).unwrap();
        assert!((overlap(&c) - 2f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(c_norms(&DeformationCoeffs::separated(Statistics::Boson)), (1.0, 1.0));
        let (p, m) = c_norms(&all_half(Statistics::Fermion));
        assert!(p.abs() < 1e-7 && (m - 2f64.sqrt()).abs() < 1e-15);
        let (p, m) = c_norms(&all_half(Statistics::Boson));
        assert!((p - 2f64.sqrt()).abs() < 1e-15 && m.abs() < 1e-7);
    }

    #[test]
    fn weight_examples() {
        for s in [Statistics::Boson, Statistics::Fermion] {
            assert_eq!(slocc_weights(&DeformationCoeffs::separated(s)), (1.0, 1.0));
        }
        let (ws, wa) = slocc_weights(&all_half(Statistics::Fermion));
        assert!(ws.abs() < 1e-15 && (wa - 1.0).abs() < 1e-15);

        let c = DeformationCoeffs::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, Statistics::Boson)
            .unwrap();
        let (ws, wa) = slocc_weights(&c);
        assert!(ws.abs() < 1e-15 && (wa - 1.0).abs() < 1e-15);
    }

    #[test]
    fn indistinguishability_grows_with_angle() {
        let mut prev = -1.0;
        for i in 0..=1000 {
            let v = indistinguishability_at(FRAC_PI_4 * i as f64 / 1000.0);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }

    #[test]
    fn sign_pattern_parsing() {
        assert_eq!("positive".parse::<SignPattern>().unwrap(), SignPattern::AllPositive);
        assert_eq!("negative:rp".parse::<SignPattern>().unwrap(), SignPattern::OneNegative(3));
        assert!("negative:7".parse::<SignPattern>().is_err());
        assert!(DeformationCoeffs::from_angle(0.3, Statistics::Boson, SignPattern::OneNegative(5)).is_err());
    }

    proptest! {
        #[test]
        fn inverse_round_trip(target in 0.0f64..=1.0) {
            let c = coeffs_from_indistinguishability(target, Statistics::Fermion, SignPattern::AllPositive).unwrap();
            prop_assert!((indistinguishability(&c).unwrap() - target).abs() <= 1e-9);
            prop_assert!(c.is_constrained());
        }

        #[test]
        fn statistics_symmetry_of_weights(theta in 0.0f64..FRAC_PI_4, idx in 0usize..4) {
            let f = DeformationCoeffs::from_angle(theta, Statistics::Fermion, SignPattern::AllPositive).unwrap();
            let b = DeformationCoeffs::from_angle(theta, Statistics::Boson, SignPattern::OneNegative(idx)).unwrap();
            let (fs, fa) = slocc_weights(&f);
            let (bs, ba) = slocc_weights(&b);
            prop_assert!((fs - bs).abs() <= 1e-15 && (fa - ba).abs() <= 1e-15);
        }

        #[test]
        fn weights_sum_to_twice_z(theta in 0.0f64..(2.0 * PI), phi in 0.0f64..(2.0 * PI), boson in any::<bool>()) {
            let stats = if boson { Statistics::Boson } else { Statistics::Fermion };
            let c = DeformationCoeffs::new(theta.cos(), theta.sin(), phi.cos(), phi.sin(), stats).unwrap();
            let (ws, wa) = slocc_weights(&c);
            let z = c.l * c.l * c.rp * c.rp + c.lp * c.lp * c.r * c.r;
            prop_assert!((ws + wa - 2.0 * z).abs() <= 1e-12);
        }
    }
}
