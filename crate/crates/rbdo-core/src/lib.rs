//! Reliability-based design optimization toolkit.
//!
//! The pipeline: probabilistic constraints P(g ≤ 0) ≤ P_f are converted to
//! deterministic checks by the reliable-design-space shift ([`rds`]), the
//! resulting constrained problem is solved by the directional bat algorithm
//! under ε-constraint handling ([`swarm`]), and candidate designs are
//! verified after the fact with first/second-order reliability analysis and
//! crude Monte Carlo ([`verify`]). [`problems`] carries the built-in
//! engineering benchmarks and [`stats`] the distribution machinery
//! underneath it all.

pub mod problem;
pub mod problems;
pub mod rds;
pub mod report;
pub mod stats;
pub mod swarm;
pub mod verify;

pub use problem::{
    Bounds, DeterministicConstraint, EvaluatedSolution, LimitStateFn, ProbabilisticConstraint,
    ProblemDefinition, RandomVar, StdSpec,
};
pub use report::{summarize, StatsSummary};
pub use stats::{DistributionSpec, Family};
pub use swarm::{run, run_trials, Algorithm, SwarmConfig, TrialResult};
