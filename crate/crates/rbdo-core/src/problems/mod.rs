//! Executable registry of the four benchmark problems.
//!
//! Every benchmark is exposed as a plain [`ProblemDefinition`] with the
//! crate-wide sign convention (probabilistic limit states safe when > 0,
//! deterministic constraints satisfied when ≤ 0) and is addressable by a
//! string id for the command-line harness.

mod math2d;
mod side_impact;
mod speed_reducer;
mod welded_beam;

pub use math2d::{math_2d, Math2dMarginals};
pub use side_impact::vehicle_side_impact;
pub use speed_reducer::speed_reducer;
pub use welded_beam::{welded_beam, WeldedBeamPreset};

use std::str::FromStr;

use thiserror::Error;

use crate::problem::ProblemDefinition;
use crate::stats::std_normal_cdf;

#[derive(Debug, Error)]
pub enum BenchmarkError {
    #[error("unknown benchmark id '{0}'")]
    UnknownId(String),
    #[error("unknown option value '{value}' for {what}")]
    UnknownOption { what: &'static str, value: String },
    #[error("give either a target reliability index or a target failure probability, not both")]
    ConflictingTargets,
    #[error("target reliability index {0} must be positive")]
    NonPositiveBeta(f64),
}

/// The five addressable benchmark instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchmarkId {
    VehicleSideImpact,
    Math2d,
    SpeedReducer,
    WeldedBeamContinuous,
    WeldedBeamDiscrete,
}

impl BenchmarkId {
    pub const ALL: [BenchmarkId; 5] = [
        BenchmarkId::VehicleSideImpact,
        BenchmarkId::Math2d,
        BenchmarkId::SpeedReducer,
        BenchmarkId::WeldedBeamContinuous,
        BenchmarkId::WeldedBeamDiscrete,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            BenchmarkId::VehicleSideImpact => "vehicle-side-impact",
            BenchmarkId::Math2d => "math2d",
            BenchmarkId::SpeedReducer => "speed-reducer",
            BenchmarkId::WeldedBeamContinuous => "welded-beam-continuous",
            BenchmarkId::WeldedBeamDiscrete => "welded-beam-discrete",
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            BenchmarkId::VehicleSideImpact => {
                "vehicle side impact: 7 normal design variables, 4 normal parameters, 10 reliability constraints"
            }
            BenchmarkId::Math2d => {
                "two-variable mathematical problem: 3 reliability constraints, marginals selectable"
            }
            BenchmarkId::SpeedReducer => {
                "speed reducer: 2 deterministic + 5 varying-variance design variables, 15 parameters, 10 reliability + 1 deterministic constraint"
            }
            BenchmarkId::WeldedBeamContinuous => {
                "welded beam, continuous variables, deterministic parameters"
            }
            BenchmarkId::WeldedBeamDiscrete => {
                "welded beam, discrete variables, random parameters"
            }
        }
    }

    /// Default per-constraint admissible failure probability.
    pub fn default_target_pf(&self) -> f64 {
        match self {
            BenchmarkId::SpeedReducer => 0.05,
            _ => std_normal_cdf(-3.0),
        }
    }
}

impl FromStr for BenchmarkId {
    type Err = BenchmarkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BenchmarkId::ALL
            .iter()
            .copied()
            .find(|b| b.id() == s)
            .ok_or_else(|| BenchmarkError::UnknownId(s.to_string()))
    }
}

/// Options accepted by [`build`]; unset fields fall back to per-benchmark
/// defaults.
#[derive(Debug, Clone, Default)]
pub struct BenchmarkOptions {
    pub target_beta: Option<f64>,
    pub target_pf: Option<f64>,
    /// Marginal selection for the mathematical benchmark.
    pub marginals: Option<String>,
    /// Parameter preset for the welded beam.
    pub preset: Option<String>,
}

impl BenchmarkOptions {
    fn resolve_pf(&self, id: BenchmarkId) -> Result<f64, BenchmarkError> {
        match (self.target_beta, self.target_pf) {
            (Some(_), Some(_)) => Err(BenchmarkError::ConflictingTargets),
            (Some(beta), None) => {
                if !(beta > 0.0) {
                    return Err(BenchmarkError::NonPositiveBeta(beta));
                }
                Ok(std_normal_cdf(-beta))
            }
            (None, Some(pf)) => Ok(pf),
            (None, None) => Ok(id.default_target_pf()),
        }
    }
}

/// Build a benchmark instance from its id and options.
pub fn build(id: BenchmarkId, options: &BenchmarkOptions) -> Result<ProblemDefinition, BenchmarkError> {
    let pf = options.resolve_pf(id)?;
    let problem = match id {
        BenchmarkId::VehicleSideImpact => vehicle_side_impact(pf),
        BenchmarkId::Math2d => {
            let marginals = match options.marginals.as_deref() {
                None | Some("normal-normal") => Math2dMarginals::NormalNormal,
                Some("gumbel-gumbel") => Math2dMarginals::GumbelGumbel,
                Some("lognormal-normal") => Math2dMarginals::LogNormalNormal,
                Some(other) => {
                    return Err(BenchmarkError::UnknownOption {
                        what: "math2d marginals",
                        value: other.to_string(),
                    })
                }
            };
            math_2d(marginals, pf)
        }
        BenchmarkId::SpeedReducer => speed_reducer(pf),
        BenchmarkId::WeldedBeamContinuous | BenchmarkId::WeldedBeamDiscrete => {
            let preset = match options.preset.as_deref() {
                None | Some("table11") => WeldedBeamPreset::Table11,
                Some("table12-compatible") => WeldedBeamPreset::Table12Compatible,
                Some(other) => {
                    return Err(BenchmarkError::UnknownOption {
                        what: "welded-beam preset",
                        value: other.to_string(),
                    })
                }
            };
            let discrete = id == BenchmarkId::WeldedBeamDiscrete;
            welded_beam(discrete, discrete, preset, pf)
        }
    };
    debug_assert!(problem.validate().is_ok());
    Ok(problem)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for b in BenchmarkId::ALL {
            assert_eq!(b.id().parse::<BenchmarkId>().unwrap(), b);
        }
        assert!("nope".parse::<BenchmarkId>().is_err());
    }

    #[test]
    fn build_applies_targets() {
        let p = build(
            BenchmarkId::Math2d,
            &BenchmarkOptions { target_beta: Some(2.0), ..Default::default() },
        )
        .unwrap();
        let pf = p.probabilistic[0].target_pf;
        assert!((pf - std_normal_cdf(-2.0)).abs() < 1e-15);

        let err = build(
            BenchmarkId::Math2d,
            &BenchmarkOptions {
                target_beta: Some(2.0),
                target_pf: Some(0.1),
                ..Default::default()
            },
        );
        assert!(matches!(err, Err(BenchmarkError::ConflictingTargets)));
    }

    #[test]
    fn every_benchmark_validates() {
        for id in BenchmarkId::ALL {
            let p = build(id, &BenchmarkOptions::default()).unwrap();
            p.validate().unwrap();
        }
    }
}
