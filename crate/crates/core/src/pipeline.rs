//! End-to-end scenario: noisy distinguishable phase, deformation at `tD`,
//! noisy indistinguishable phase, projection at `t`.
//!
//! Scenario times are dimensionless (`γ₀·t`); they are converted to bath
//! time units only where the stages need them.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::deform::{self, DeformError, DeformationCoeffs, SignPattern, Statistics};
use crate::dynamics::{self, DynamicsError};
use crate::metrics::{self, MetricReport, MetricsError};
use crate::noise::{self, BathParams, ChannelKind, NoiseError};
use crate::qstate::{self, PopulationVector, StateError};
use crate::slocc::{self, SloccError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("times must satisfy 0 <= t_deform <= t_total (got t_deform = {t_deform}, t_total = {t_total})")]
    InvalidTimes { t_deform: f64, t_total: f64 },
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Deform(#[from] DeformError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Slocc(#[from] SloccError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    State(#[from] StateError),
}

/// How the post-deformation modes are specified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DeformationSpec {
    Coeffs(DeformationCoeffs),
    Target { indist: f64, statistics: Statistics, sign_pattern: SignPattern },
}

impl DeformationSpec {
    /// Target on the canonical family with the sign pattern matching `statistics`.
    pub fn target(indist: f64, statistics: Statistics) -> Self {
        Self::Target { indist, statistics, sign_pattern: SignPattern::canonical_for(statistics) }
    }

    pub fn resolve(&self) -> Result<DeformationCoeffs, DeformError> {
        match *self {
            Self::Coeffs(c) => Ok(c),
            Self::Target { indist, statistics, sign_pattern } => {
                deform::coeffs_from_indistinguishability(indist, statistics, sign_pattern)
            }
        }
    }

    pub fn statistics(&self) -> Statistics {
        match *self {
            Self::Coeffs(c) => c.statistics,
            Self::Target { statistics, .. } => statistics,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scenario {
    pub channel: ChannelKind,
    pub bath: BathParams,
    pub deformation: DeformationSpec,
    /// `γ₀ tD`.
    pub t_deform: f64,
    /// `γ₀ t`.
    pub t_total: f64,
}

impl Scenario {
    fn check_times(&self) -> Result<(), PipelineError> {
        let ok = self.t_deform >= 0.0 && self.t_total >= self.t_deform && self.t_total.is_finite();
        if ok {
            Ok(())
        } else {
            Err(PipelineError::InvalidTimes { t_deform: self.t_deform, t_total: self.t_total })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioResult {
    pub concurrence: f64,
    pub fidelity: f64,
    pub p_lr: f64,
    pub pops_predeform: PopulationVector,
    /// Populations of the indistinguishable pair just before the projection.
    pub pops_final: PopulationVector,
    /// Populations of the projected, distinguishable state.
    pub pops_lr: PopulationVector,
    pub indistinguishability: f64,
}

pub fn run(s: &Scenario) -> Result<ScenarioResult, PipelineError> {
    s.check_times()?;
    let gamma0 = s.bath.gamma0();
    let pops_predeform = noise::predeformation_state(s.channel, &s.bath, s.t_deform / gamma0)?;
    let coeffs = s.deformation.resolve()?;
    let indistinguishability = deform::indistinguishability(&coeffs)?;
    let rates = dynamics::effective_rates(&coeffs, gamma0);
    let dt = (s.t_total - s.t_deform) / gamma0;
    let pops_final = dynamics::evolve(s.channel, &pops_predeform, &rates, dt)?;
    let out = slocc::project(&pops_final, &coeffs)?;
    let x = qstate::density_to_xstate(&out.rho_lr)?;
    let m = MetricReport::of_xstate(&x);
    Ok(ScenarioResult {
        concurrence: m.concurrence,
        fidelity: m.fidelity_singlet,
        p_lr: out.p_lr,
        pops_predeform,
        pops_final,
        pops_lr: out.pops_lr,
        indistinguishability,
    })
}

/// Concurrence and singlet fidelity of the distinguishable singlet after a
/// disturbance `p`.
pub fn baseline_for_probability(channel: ChannelKind, p: f64) -> MetricReport {
    let (c, f) = match channel {
        ChannelKind::PhaseDamping => (1.0 - p, 1.0 - 0.5 * p),
        ChannelKind::Depolarizing => (1.0 - 1.5 * p, 1.0 - 0.75 * p),
        ChannelKind::AmplitudeDamping => (1.0 - p, 1.0 - p),
    };
    MetricReport::new(c.max(0.0), f)
}

/// Distinguishable state at `γ₀t`, as plotted before the deformation.
pub fn distinguishable_baseline(channel: ChannelKind, bath: &BathParams, t: f64) -> Result<MetricReport, NoiseError> {
    let p = noise::disturbance_probability(bath, t / bath.gamma0())?;
    Ok(baseline_for_probability(channel, p))
}

/// Axes of a sweep; rows come out in lexicographic order
/// channel → statistics → 𝓘 → tD → t.
///
/// With `relative_times` each entry of `times` is the elapsed time after the
/// deformation, so the row time is `tD + times[k]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub bath: BathParams,
    pub channels: Vec<ChannelKind>,
    pub statistics: Vec<Statistics>,
    pub indist: Vec<f64>,
    pub t_deform: Vec<f64>,
    pub times: Vec<f64>,
    pub relative_times: bool,
}

impl SweepGrid {
    pub fn len(&self) -> usize {
        self.channels.len() * self.statistics.len() * self.indist.len() * self.t_deform.len() * self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn points(&self) -> Vec<SweepPoint> {
        let mut out = Vec::with_capacity(self.len());
        for &channel in &self.channels {
            for &statistics in &self.statistics {
                for &indist in &self.indist {
                    for &t_deform in &self.t_deform {
                        for &dt in &self.times {
                            let t = if self.relative_times { t_deform + dt } else { dt };
                            out.push(SweepPoint { channel, statistics, indist, t_deform, t });
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub channel: ChannelKind,
    pub statistics: Statistics,
    pub indist: f64,
    pub t_deform: f64,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RowValues {
    pub concurrence: f64,
    pub fidelity: f64,
    pub p_lr: f64,
    /// The row lies before the deformation and shows the distinguishable state.
    pub before_deformation: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub point: SweepPoint,
    pub outcome: Result<RowValues, PipelineError>,
}

fn row(bath: &BathParams, pt: SweepPoint) -> Result<RowValues, PipelineError> {
    if pt.t < pt.t_deform {
        let m = distinguishable_baseline(pt.channel, bath, pt.t)?;
        return Ok(RowValues {
            concurrence: m.concurrence,
            fidelity: m.fidelity_singlet,
            p_lr: 1.0,
            before_deformation: true,
        });
    }
    let r = run(&Scenario {
        channel: pt.channel,
        bath: *bath,
        deformation: DeformationSpec::target(pt.indist, pt.statistics),
        t_deform: pt.t_deform,
        t_total: pt.t,
    })?;
    Ok(RowValues { concurrence: r.concurrence, fidelity: r.fidelity, p_lr: r.p_lr, before_deformation: false })
}

/// Runs every grid point in parallel; the row order is fixed by the grid.
pub fn sweep(grid: &SweepGrid) -> Vec<SweepRow> {
    grid.points().into_par_iter().map(|point| SweepRow { point, outcome: row(&grid.bath, point) }).collect()
}

/// Concurrence of the explicitly built distinguishable state, for checking
/// [`baseline_for_probability`].
pub fn baseline_by_density(channel: ChannelKind, p: f64) -> Result<MetricReport, PipelineError> {
    let rho = match channel {
        ChannelKind::Depolarizing => noise::depolarize_global(&qstate::DensityMatrix::singlet(), p)?,
        _ => {
            let k = noise::kraus_for(channel, p)?;
            noise::evolve_two_qubit_kraus(&qstate::DensityMatrix::singlet(), &k)?
        }
    };
    Ok(metrics::report(&rho)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bath() -> BathParams {
        BathParams::default()
    }

    fn scenario(channel: ChannelKind, indist: f64, t_deform: f64, t_total: f64) -> Scenario {
        Scenario {
            channel,
            bath: bath(),
            deformation: DeformationSpec::target(indist, Statistics::Fermion),
            t_deform,
            t_total,
        }
    }

    #[test]
    fn maximal_overlap_recovers_the_singlet() {
        for channel in ChannelKind::ALL {
            for (td, t) in [(0.0, 0.0), (0.5, 2.0), (1.0, 3.0), (3.0, 3.0)] {
                let r = run(&scenario(channel, 1.0, td, t)).unwrap();
                assert!((r.concurrence - 1.0).abs() < 1e-9, "{channel} {td} {t}: {r:?}");
                assert!((r.fidelity - 1.0).abs() < 1e-9);
                assert!((r.p_lr - 0.5).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn zero_overlap_phase_damping() {
        let (td, t) = (0.7, 2.5);
        let r = run(&scenario(ChannelKind::PhaseDamping, 0.0, td, t)).unwrap();
        let pd = noise::disturbance_probability(&bath(), td).unwrap();
        let markov = 1.0 - (-(t - td)).exp();
        let want = (1.0 - pd) * (1.0 - markov);
        assert!((r.concurrence - want).abs() < 1e-12);
        assert!((r.p_lr - 1.0).abs() < 1e-12);
        assert_eq!(r.indistinguishability, 0.0);
    }

    #[test]
    fn limiting_cases_are_continuous() {
        let eps = 1e-6;
        for channel in ChannelKind::ALL {
            for indist in [0.3, 0.7] {
                let a = run(&scenario(channel, indist, 0.0, 2.0)).unwrap();
                let b = run(&scenario(channel, indist, eps, 2.0)).unwrap();
                assert!((a.concurrence - b.concurrence).abs() < 1e-6);
                assert!((a.p_lr - b.p_lr).abs() < 1e-6);
                let c = run(&scenario(channel, indist, 1.5, 1.5)).unwrap();
                let d = run(&scenario(channel, indist, 1.5, 1.5 + eps)).unwrap();
                assert!((c.concurrence - d.concurrence).abs() < 1e-6);
                assert!((c.fidelity - d.fidelity).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn concurrence_grows_with_indistinguishability() {
        for channel in ChannelKind::ALL {
            let mut last = -1.0;
            let mut last_p = 2.0;
            for k in 0..=20 {
                let r = run(&scenario(channel, k as f64 / 20.0, 0.5, 2.0)).unwrap();
                assert!(r.concurrence >= last - 1e-10, "{channel} {k}");
                assert!(r.p_lr <= last_p + 1e-10);
                last = r.concurrence;
                last_p = r.p_lr;
            }
        }
    }

    #[test]
    fn rejects_bad_times() {
        let s = scenario(ChannelKind::PhaseDamping, 0.5, 2.0, 1.0);
        assert!(matches!(run(&s), Err(PipelineError::InvalidTimes { .. })));
    }

    #[test]
    fn explicit_coefficients_match_target() {
        let c = deform::coeffs_from_indistinguishability(0.4, Statistics::Fermion, SignPattern::AllPositive).unwrap();
        let mut s = scenario(ChannelKind::Depolarizing, 0.4, 0.5, 1.5);
        let a = run(&s).unwrap();
        s.deformation = DeformationSpec::Coeffs(c);
        assert_eq!(run(&s).unwrap(), a);
    }

    #[test]
    fn baseline_examples() {
        for channel in ChannelKind::ALL {
            let m = distinguishable_baseline(channel, &bath(), 0.0).unwrap();
            assert_eq!((m.concurrence, m.fidelity_singlet), (1.0, 1.0));
        }
        assert!(baseline_for_probability(ChannelKind::Depolarizing, 2.0 / 3.0).concurrence.abs() < 1e-15);
        assert!((baseline_for_probability(ChannelKind::AmplitudeDamping, 0.3).concurrence - 0.7).abs() < 1e-15);
    }

    #[test]
    fn baseline_matches_explicit_state() {
        for channel in ChannelKind::ALL {
            for k in 0..=20 {
                let p = k as f64 / 20.0;
                let closed = baseline_for_probability(channel, p);
                let built = baseline_by_density(channel, p).unwrap();
                assert!((closed.concurrence - built.concurrence).abs() < 1e-10, "{channel} {p}");
                assert!((closed.fidelity_singlet - built.fidelity_singlet).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sweep_order_and_single_point() {
        let grid = SweepGrid {
            bath: bath(),
            channels: vec![ChannelKind::PhaseDamping, ChannelKind::AmplitudeDamping],
            statistics: vec![Statistics::Fermion],
            indist: vec![0.2, 0.8],
            t_deform: vec![1.0],
            times: vec![0.5, 1.0, 3.0],
            relative_times: false,
        };
        let rows = sweep(&grid);
        assert_eq!(rows.len(), grid.len());
        assert_eq!(rows[0].point.channel, ChannelKind::PhaseDamping);
        assert_eq!(rows[3].point.indist, 0.8);
        assert_eq!(rows[6].point.channel, ChannelKind::AmplitudeDamping);
        assert!(rows[0].outcome.as_ref().unwrap().before_deformation);

        let single =
            SweepGrid { channels: vec![ChannelKind::Depolarizing], indist: vec![0.5], times: vec![2.0], ..grid };
        let rows = sweep(&single);
        let direct = run(&scenario(ChannelKind::Depolarizing, 0.5, 1.0, 2.0)).unwrap();
        let v = rows[0].outcome.as_ref().unwrap();
        assert_eq!((v.concurrence, v.fidelity, v.p_lr), (direct.concurrence, direct.fidelity, direct.p_lr));
    }

    #[test]
    fn sweep_keeps_going_past_errors() {
        let grid = SweepGrid {
            bath: bath(),
            channels: vec![ChannelKind::PhaseDamping],
            statistics: vec![Statistics::Fermion],
            indist: vec![1.5, 0.5],
            t_deform: vec![0.0],
            times: vec![1.0],
            relative_times: false,
        };
        let rows = sweep(&grid);
        assert!(rows[0].outcome.is_err());
        assert!(rows[1].outcome.is_ok());
    }
}
