//! Two-qubit density operators, diagonal population vectors and X-state
//! parameters.
//!
//! The computational basis is ordered `(↑↑, ↑↓, ↓↑, ↓↓)`. Index 0 of each
//! tensor factor is `↑`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, Mat4, ZERO4};
use crate::C64;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const POSITIVITY_TOL: f64 = 1e-10;
const POP_SLACK: f64 = 1e-12;
const POP_SUM_TOL: f64 = 1e-10;
const X_PATTERN_TOL: f64 = 1e-10;
const BELL_INPUT_SUM_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("population {index} = {value} lies outside [0, 1]")]
    PopulationOutOfRange { index: usize, value: f64 },
    #[error("populations sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },
    #[error("entry ({row}, {col}) = {magnitude:e} breaks the X pattern")]
    NonXState { row: usize, col: usize, magnitude: f64 },
    #[error("invalid density matrix: {0}")]
    Invalid(ValidationReport),
}

/// Basis in which a [`PopulationVector`] is diagonal.
///
/// `BellB1` orders the populations as `(1₊, 1₋, 2₊, 2₋)`, with
/// `|1±⟩ = (|↑↓⟩ ± |↓↑⟩)/√2` and `|2±⟩ = (|↑↑⟩ ± |↓↓⟩)/√2`. `MixedB2` orders
/// them as `(1₊, 1₋, U, D)` with `|U⟩ = |↑↑⟩`, `|D⟩ = |↓↓⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Basis {
    BellB1,
    MixedB2,
}

impl Basis {
    pub fn labels(self) -> [&'static str; 4] {
        match self {
            Basis::BellB1 => ["1+", "1-", "2+", "2-"],
            Basis::MixedB2 => ["1+", "1-", "U", "D"],
        }
    }

    /// Basis vectors in computational coordinates.
    pub fn vectors(self) -> [[f64; 4]; 4] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let one_plus = [0.0, h, h, 0.0];
        let one_minus = [0.0, h, -h, 0.0];
        match self {
            Basis::BellB1 => [one_plus, one_minus, [h, 0.0, 0.0, h], [h, 0.0, 0.0, -h]],
            Basis::MixedB2 => [one_plus, one_minus, [1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]],
        }
    }
}

/// Four populations in a declared diagonal basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PopulationVector {
    basis: Basis,
    p: [f64; 4],
    normalized: bool,
}

impl PopulationVector {
    /// Builds a normalized population vector. Entries within `1e-12` of the
    /// unit interval are clamped onto it.
    pub fn new(basis: Basis, p: [f64; 4]) -> Result<Self, StateError> {
        let p = clamp_populations(p)?;
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > POP_SUM_TOL {
            return Err(StateError::NotNormalized { sum });
        }
        Ok(Self { basis, p, normalized: true })
    }

    /// Unnormalized weights, flagged as such. Only the projection stage
    /// produces these.
    pub(crate) fn unnormalized(basis: Basis, p: [f64; 4]) -> Self {
        Self { basis, p, normalized: false }
    }

    pub fn singlet(basis: Basis) -> Self {
        Self { basis, p: [0.0, 1.0, 0.0, 0.0], normalized: true }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn values(&self) -> [f64; 4] {
        self.p
    }

    pub fn get(&self, index: usize) -> f64 {
        self.p[index]
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn sum(&self) -> f64 {
        self.p.iter().sum()
    }

    /// Populations of the states symmetric under pseudospin exchange,
    /// i.e. every entry except the singlet `1₋`.
    pub fn symmetric_sum(&self) -> f64 {
        self.p[0] + self.p[2] + self.p[3]
    }

    pub fn singlet_population(&self) -> f64 {
        self.p[1]
    }
}

fn clamp_populations(mut p: [f64; 4]) -> Result<[f64; 4], StateError> {
    for (index, value) in p.iter_mut().enumerate() {
        if !value.is_finite() || *value < -POP_SLACK || *value > 1.0 + POP_SLACK {
            return Err(StateError::PopulationOutOfRange { index, value: *value });
        }
        *value = value.clamp(0.0, 1.0);
    }
    Ok(p)
}

/// Dense 4x4 two-qubit density operator in the computational basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    entries: Mat4,
}

impl DensityMatrix {
    /// Wraps raw entries without checking any invariant; see [`validate`].
    pub fn from_entries(entries: [[C64; 4]; 4]) -> Self {
        Self { entries }
    }

    pub fn from_real(entries: [[f64; 4]; 4]) -> Self {
        let mut m = ZERO4;
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = C64::new(entries[i][j], 0.0);
            }
        }
        Self { entries: m }
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) amplitude vector.
    pub fn pure(psi: [C64; 4]) -> Self {
        let mut m = ZERO4;
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = psi[i] * psi[j].conj();
            }
        }
        Self { entries: m }
    }

    pub fn maximally_mixed() -> Self {
        let mut m = ZERO4;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = C64::new(0.25, 0.0);
        }
        Self { entries: m }
    }

    pub fn singlet() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::pure([C64::new(0.0, 0.0), C64::new(h, 0.0), C64::new(-h, 0.0), C64::new(0.0, 0.0)])
    }

    pub fn entries(&self) -> &[[C64; 4]; 4] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row][col]
    }

    pub fn trace(&self) -> C64 {
        linalg::trace(&self.entries)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut m = self.entries;
        m.iter_mut().flatten().for_each(|z| *z *= factor);
        Self { entries: m }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut m = self.entries;
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] += other.entries[i][j];
            }
        }
        Self { entries: m }
    }

    /// `U ρ U†` for an arbitrary 4x4 operator `U`.
    pub fn conjugated_by(&self, op: &[[C64; 4]; 4]) -> Self {
        Self { entries: linalg::mul(op, &linalg::mul(&self.entries, &linalg::adjoint(op))) }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let (mut vals, _) = linalg::hermitian_eigen(&self.entries);
        vals.sort_by(f64::total_cmp);
        vals
    }

    /// `⟨v|ρ|v⟩` for a real vector `v`.
    pub fn expectation_real(&self, v: &[f64; 4]) -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                acc += self.entries[i][j] * (v[i] * v[j]);
            }
        }
        acc.re
    }
}

/// A single broken density-matrix invariant and its magnitude.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    NonHermitian { max_deviation: f64 },
    Trace { deviation: f64 },
    NotPositive { min_eigenvalue: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonHermitian { max_deviation } => {
                write!(f, "not Hermitian (max |ρij - conj ρji| = {max_deviation:e})")
            }
            Violation::Trace { deviation } => write!(f, "trace off by {deviation:e}"),
            Violation::NotPositive { min_eigenvalue } => {
                write!(f, "negative eigenvalue {min_eigenvalue:e}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks hermiticity, unit trace and positivity of `rho`.
pub fn validate(rho: &DensityMatrix) -> ValidationReport {
    let mut violations = Vec::new();
    let m = rho.entries();

    let mut herm = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            herm = herm.max((m[i][j] - m[j][i].conj()).norm());
        }
    }
    if herm > HERMITIAN_TOL {
        violations.push(Violation::NonHermitian { max_deviation: herm });
    }

    let tr = rho.trace();
    let deviation = (tr - C64::new(1.0, 0.0)).norm();
    if deviation > TRACE_TOL {
        violations.push(Violation::Trace { deviation });
    }

    let min_eigenvalue = rho.eigenvalues()[0];
    if min_eigenvalue < -POSITIVITY_TOL {
        violations.push(Violation::NotPositive { min_eigenvalue });
    }
    ValidationReport { violations }
}

pub(crate) fn ensure_valid(rho: &DensityMatrix) -> Result<(), StateError> {
    let report = validate(rho);
    if report.is_valid() {
        Ok(())
    } else {
        Err(StateError::Invalid(report))
    }
}

/// Expands `Σ p_u |u⟩⟨u|` in the computational basis.
pub fn bell_diagonal_to_density(pops: &PopulationVector) -> Result<DensityMatrix, StateError> {
    let sum = pops.sum();
    if (sum - 1.0).abs() > BELL_INPUT_SUM_TOL {
        return Err(StateError::NotNormalized { sum });
    }
    Ok(diagonal_to_density_unchecked(pops))
}

pub(crate) fn diagonal_to_density_unchecked(pops: &PopulationVector) -> DensityMatrix {
    let mut m = [[0.0f64; 4]; 4];
    for (weight, v) in pops.values().iter().zip(pops.basis().vectors()) {
        if *weight == 0.0 {
            continue;
        }
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] += weight * v[i] * v[j];
            }
        }
    }
    DensityMatrix::from_real(m)
}

/// Diagonal and anti-diagonal content of an X-shaped state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XStateParams {
    /// `(ρ11, ρ22, ρ33, ρ44)`.
    pub diagonal: [f64; 4],
    /// `ρ23`, the `↑↓ / ↓↑` coherence.
    #[serde(skip)]
    pub inner_coherence: C64,
    /// `ρ14`, the `↑↑ / ↓↓` coherence.
    #[serde(skip)]
    pub outer_coherence: C64,
}

impl XStateParams {
    /// Whether both 2x2 blocks of the X are positive (to `1e-10`).
    pub fn is_positive(&self) -> bool {
        let d = self.diagonal;
        d.iter().all(|&x| x >= -POSITIVITY_TOL)
            && self.inner_coherence.norm() <= (d[1] * d[2]).max(0.0).sqrt() + POSITIVITY_TOL
            && self.outer_coherence.norm() <= (d[0] * d[3]).max(0.0).sqrt() + POSITIVITY_TOL
    }

    pub fn to_density(&self) -> DensityMatrix {
        let mut m = ZERO4;
        for i in 0..4 {
            m[i][i] = C64::new(self.diagonal[i], 0.0);
        }
        m[1][2] = self.inner_coherence;
        m[2][1] = self.inner_coherence.conj();
        m[0][3] = self.outer_coherence;
        m[3][0] = self.outer_coherence.conj();
        DensityMatrix::from_entries(m)
    }
}

/// Reads off the X parameters, rejecting states with weight outside the X.
pub fn density_to_xstate(rho: &DensityMatrix) -> Result<XStateParams, StateError> {
    let m = rho.entries();
    for row in 0..4 {
        for col in 0..4 {
            let on_x = row == col || row + col == 3;
            let magnitude = m[row][col].norm();
            if !on_x && magnitude > X_PATTERN_TOL {
                return Err(StateError::NonXState { row, col, magnitude });
            }
        }
    }
    Ok(XStateParams {
        diagonal: [m[0][0].re, m[1][1].re, m[2][2].re, m[3][3].re],
        inner_coherence: m[1][2],
        outer_coherence: m[0][3],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn singlet_projector_from_bell_populations() {
        let pops = PopulationVector::new(Basis::BellB1, [0.0, 1.0, 0.0, 0.0]).unwrap();
        let rho = bell_diagonal_to_density(&pops).unwrap();
        assert!(close(rho.get(1, 1).re, 0.5, 1e-15));
        assert!(close(rho.get(2, 2).re, 0.5, 1e-15));
        assert!(close(rho.get(1, 2).re, -0.5, 1e-15));
        assert!(close(rho.get(2, 1).re, -0.5, 1e-15));
        assert!(rho.max_abs_diff(&DensityMatrix::singlet()) < 1e-15);
    }

    #[test]
    fn uniform_bell_populations_give_identity_over_four() {
        let pops = PopulationVector::new(Basis::BellB1, [0.25; 4]).unwrap();
        let rho = bell_diagonal_to_density(&pops).unwrap();
        assert!(rho.max_abs_diff(&DensityMatrix::maximally_mixed()) < 1e-15);
    }

    #[test]
    fn mixed_basis_expansion() {
        // ½|1₋⟩⟨1₋| + ½|D⟩⟨D|
        let pops = PopulationVector::new(Basis::MixedB2, [0.0, 0.5, 0.0, 0.5]).unwrap();
        let rho = bell_diagonal_to_density(&pops).unwrap();
        let expected = DensityMatrix::from_real([
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.25, -0.25, 0.0],
            [0.0, -0.25, 0.25, 0.0],
            [0.0, 0.0, 0.0, 0.5],
        ]);
        assert!(rho.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let pops = PopulationVector::unnormalized(Basis::BellB1, [0.5, 0.5, 0.5, 0.0]);
        assert!(matches!(bell_diagonal_to_density(&pops), Err(StateError::NotNormalized { .. })));
        assert!(PopulationVector::new(Basis::BellB1, [0.3, 0.3, 0.3, 0.0]).is_err());
    }

    #[test]
    fn tiny_negative_populations_are_clamped() {
        let pops = PopulationVector::new(Basis::BellB1, [-1e-17, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(pops.get(0), 0.0);
        assert!(PopulationVector::new(Basis::BellB1, [-1e-6, 1.0 + 1e-6, 0.0, 0.0]).is_err());
    }

    #[test]
    fn xstate_of_maximally_mixed_and_singlet() {
        let x = density_to_xstate(&DensityMatrix::maximally_mixed()).unwrap();
        assert_eq!(x.diagonal, [0.25; 4]);
        assert_eq!(x.inner_coherence, C64::new(0.0, 0.0));
        assert_eq!(x.outer_coherence, C64::new(0.0, 0.0));

        let x = density_to_xstate(&DensityMatrix::singlet()).unwrap();
        assert!(close(x.inner_coherence.re, -0.5, 1e-15));
    }

    #[test]
    fn xstate_of_amplitude_damped_singlet() {
        let pops = PopulationVector::new(Basis::MixedB2, [0.0, 0.7, 0.0, 0.3]).unwrap();
        let x = density_to_xstate(&bell_diagonal_to_density(&pops).unwrap()).unwrap();
        let want = [0.0, 0.35, 0.35, 0.3];
        for k in 0..4 {
            assert!(close(x.diagonal[k], want[k], 1e-15));
        }
        assert!(close(x.inner_coherence.re, -0.35, 1e-15));
    }

    #[test]
    fn non_x_state_is_rejected() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus_up = DensityMatrix::pure([C64::new(h, 0.0), C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]);
        assert!(matches!(density_to_xstate(&plus_up), Err(StateError::NonXState { .. })));
    }

    #[test]
    fn validate_flags_each_violation() {
        assert!(validate(&DensityMatrix::maximally_mixed()).is_valid());

        let big = DensityMatrix::maximally_mixed().scaled(1.5);
        let report = validate(&big);
        assert!(matches!(report.violations.as_slice(), [Violation::Trace { .. }]));

        let neg = DensityMatrix::from_real([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, -0.01, 0.0, 0.0],
            [0.0, 0.0, 0.01, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ]);
        let report = validate(&neg);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NotPositive { min_eigenvalue } if *min_eigenvalue < -0.009)));

        let mut m = *DensityMatrix::maximally_mixed().entries();
        m[0][1] = C64::new(0.1, 0.0);
        let report = validate(&DensityMatrix::from_entries(m));
        assert!(matches!(report.violations[0], Violation::NonHermitian { .. }));
    }

    fn random_simplex() -> impl Strategy<Value = [f64; 4]> {
        prop::array::uniform4(0.0f64..1.0).prop_filter_map("nonzero", |w| {
            let s: f64 = w.iter().sum();
            (s > 1e-6).then(|| [w[0] / s, w[1] / s, w[2] / s, w[3] / s])
        })
    }

    proptest! {
        #[test]
        fn bell_expansion_matches_hand_formula(p in random_simplex(), mixed in any::<bool>()) {
            let basis = if mixed { Basis::MixedB2 } else { Basis::BellB1 };
            let pops = PopulationVector::new(basis, p).unwrap();
            let rho = bell_diagonal_to_density(&pops).unwrap();
            prop_assert!(validate(&rho).is_valid());
            let x = density_to_xstate(&rho).unwrap();
            // 1± share ↑↓/↓↑; the remaining pair lives on ↑↑/↓↓.
            let (d, outer) = match basis {
                Basis::BellB1 => (
                    [(p[2] + p[3]) / 2.0, (p[0] + p[1]) / 2.0, (p[0] + p[1]) / 2.0, (p[2] + p[3]) / 2.0],
                    (p[2] - p[3]) / 2.0,
                ),
                Basis::MixedB2 => ([p[2], (p[0] + p[1]) / 2.0, (p[0] + p[1]) / 2.0, p[3]], 0.0),
            };
            for k in 0..4 {
                prop_assert!((x.diagonal[k] - d[k]).abs() <= 1e-12);
            }
            prop_assert!((x.inner_coherence.re - (p[0] - p[1]) / 2.0).abs() <= 1e-12);
            prop_assert!((x.outer_coherence.re - outer).abs() <= 1e-12);
            prop_assert!(x.inner_coherence.im.abs() <= 1e-12 && x.outer_coherence.im.abs() <= 1e-12);
        }
    }
}
