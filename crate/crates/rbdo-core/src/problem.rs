//! Problem definition shared by the transform, the solvers and the verifiers.
//!
//! Convention fixed across the crate: a probabilistic limit state g is safe
//! when g > 0 and failed when g < 0; a deterministic constraint h is
//! satisfied when h ≤ 0.

use std::sync::Arc;

use thiserror::Error;

use crate::stats::{DistributionSpec, Family, StatsError};

/// Limit state g(d, x, p).
pub type LimitStateFn = Arc<dyn Fn(&[f64], &[f64], &[f64]) -> f64 + Send + Sync>;
/// Objective f(d, μx).
pub type ObjectiveFn = Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync>;
/// Deterministic constraint h(d, μx, μp) ≤ 0.
pub type DeterministicConstraintFn = Arc<dyn Fn(&[f64], &[f64], &[f64]) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

impl Bounds {
    pub fn new(lower: f64, upper: f64) -> Self {
        Self { lower, upper }
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.lower && v <= self.upper
    }
}

/// How a random design variable's standard deviation tracks its mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StdSpec {
    Fixed(f64),
    /// σ = cov·μ, recomputed for every candidate mean.
    Cov(f64),
}

/// One random design variable: its decision value is the distribution mean.
#[derive(Clone, Debug)]
pub struct RandomVar {
    pub family: Family,
    pub std: StdSpec,
    pub bounds: Bounds,
    /// Discrete value set (sorted ascending) when the variable is discrete.
    pub values: Option<Vec<f64>>,
}

impl RandomVar {
    pub fn sigma(&self, mean: f64) -> f64 {
        match self.std {
            StdSpec::Fixed(s) => s,
            StdSpec::Cov(c) => c * mean,
        }
    }

    pub fn distribution(&self, mean: f64) -> Result<DistributionSpec, StatsError> {
        DistributionSpec::new(self.family, mean, self.sigma(mean))
    }
}

#[derive(Clone)]
pub struct ProbabilisticConstraint {
    pub name: String,
    /// Admissible failure probability P(g ≤ 0) ≤ target_pf.
    pub target_pf: f64,
    pub g: LimitStateFn,
}

#[derive(Clone)]
pub struct DeterministicConstraint {
    pub name: String,
    pub h: DeterministicConstraintFn,
}

/// A design vector together with its fitness and constraint violation.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluatedSolution {
    pub position: Vec<f64>,
    pub fitness: f64,
    pub violation: f64,
}

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("bounds of component {index} are not ordered: [{lower}, {upper}]")]
    UnorderedBounds { index: usize, lower: f64, upper: f64 },
    #[error("discrete value set of variable {index} is empty")]
    EmptyValueSet { index: usize },
    #[error("discrete value set of variable {index} is not sorted ascending")]
    UnsortedValueSet { index: usize },
    #[error("discrete value {value} of variable {index} lies outside its bounds")]
    ValueOutsideBounds { index: usize, value: f64 },
    #[error("target failure probability {pf} of constraint {name} is outside (0, 0.5)")]
    TargetPfOutOfRange { name: String, pf: f64 },
    #[error("design vector has length {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// The full constrained problem in the formulation the solvers work on.
#[derive(Clone)]
pub struct ProblemDefinition {
    pub name: String,
    /// Deterministic design variables d.
    pub det_vars: Vec<Bounds>,
    /// Random design variables x; their means are decision values.
    pub random_vars: Vec<RandomVar>,
    /// Random problem parameters p.
    pub random_params: Vec<DistributionSpec>,
    pub objective: ObjectiveFn,
    pub probabilistic: Vec<ProbabilisticConstraint>,
    pub deterministic: Vec<DeterministicConstraint>,
    /// Exponent s of the violation terms; even, defaults to 2.
    pub violation_exponent: i32,
}

impl ProblemDefinition {
    /// Search-space dimension N = ND + NX.
    pub fn dimension(&self) -> usize {
        self.det_vars.len() + self.random_vars.len()
    }

    pub fn split<'a>(&self, y: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        y.split_at(self.det_vars.len())
    }

    /// Lower/upper bound vectors over the concatenated design vector.
    pub fn bound_vectors(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = Vec::with_capacity(self.dimension());
        let mut hi = Vec::with_capacity(self.dimension());
        for b in &self.det_vars {
            lo.push(b.lower);
            hi.push(b.upper);
        }
        for v in &self.random_vars {
            lo.push(v.bounds.lower);
            hi.push(v.bounds.upper);
        }
        (lo, hi)
    }

    /// Discrete value sets aligned to the concatenated design vector.
    pub fn value_sets(&self) -> Vec<Option<&[f64]>> {
        let mut sets: Vec<Option<&[f64]>> = vec![None; self.det_vars.len()];
        for v in &self.random_vars {
            sets.push(v.values.as_deref());
        }
        sets
    }

    pub fn param_means(&self) -> Vec<f64> {
        self.random_params.iter().map(|p| p.mean()).collect()
    }

    /// Distributions of the random design variables at the candidate means.
    pub fn x_distributions(&self, x_means: &[f64]) -> Result<Vec<DistributionSpec>, StatsError> {
        self.random_vars
            .iter()
            .zip(x_means)
            .map(|(v, &m)| v.distribution(m))
            .collect()
    }

    pub fn objective_at(&self, y: &[f64]) -> f64 {
        let (d, x) = self.split(y);
        (self.objective)(d, x)
    }

    pub fn check_dimension(&self, y: &[f64]) -> Result<(), ProblemError> {
        if y.len() != self.dimension() {
            return Err(ProblemError::DimensionMismatch { got: y.len(), expected: self.dimension() });
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ProblemError> {
        let (lo, hi) = self.bound_vectors();
        for (i, (&l, &u)) in lo.iter().zip(&hi).enumerate() {
            if !(l < u) {
                return Err(ProblemError::UnorderedBounds { index: i, lower: l, upper: u });
            }
        }
        for (i, v) in self.random_vars.iter().enumerate() {
            if let Some(set) = &v.values {
                if set.is_empty() {
                    return Err(ProblemError::EmptyValueSet { index: i });
                }
                if set.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(ProblemError::UnsortedValueSet { index: i });
                }
                for &val in set {
                    if !v.bounds.contains(val) {
                        return Err(ProblemError::ValueOutsideBounds { index: i, value: val });
                    }
                }
            }
        }
        for c in &self.probabilistic {
            if !(c.target_pf > 0.0 && c.target_pf < 0.5) {
                return Err(ProblemError::TargetPfOutOfRange {
                    name: c.name.clone(),
                    pf: c.target_pf,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_problem() -> ProblemDefinition {
        ProblemDefinition {
            name: "toy".into(),
            det_vars: vec![Bounds::new(0.0, 1.0)],
            random_vars: vec![
                RandomVar {
                    family: Family::Normal,
                    std: StdSpec::Fixed(0.1),
                    bounds: Bounds::new(0.0, 10.0),
                    values: None,
                },
                RandomVar {
                    family: Family::Normal,
                    std: StdSpec::Cov(0.05),
                    bounds: Bounds::new(1.0, 5.0),
                    values: Some(vec![1.0, 2.0, 3.0]),
                },
            ],
            random_params: vec![DistributionSpec::normal(2.0, 0.2).unwrap()],
            objective: Arc::new(|d, x| d[0] + x[0] + x[1]),
            probabilistic: vec![ProbabilisticConstraint {
                name: "g1".into(),
                target_pf: 0.00135,
                g: Arc::new(|_, x, p| x[0] - p[0]),
            }],
            deterministic: vec![],
            violation_exponent: 2,
        }
    }

    #[test]
    fn dimension_split_and_bounds() {
        let p = toy_problem();
        assert_eq!(p.dimension(), 3);
        let y = [0.5, 2.0, 3.0];
        let (d, x) = p.split(&y);
        assert_eq!(d, &[0.5]);
        assert_eq!(x, &[2.0, 3.0]);
        let (lo, hi) = p.bound_vectors();
        assert_eq!(lo, vec![0.0, 0.0, 1.0]);
        assert_eq!(hi, vec![1.0, 10.0, 5.0]);
        assert!(p.validate().is_ok());
    }

    #[test]
    fn cov_sigma_tracks_mean() {
        let p = toy_problem();
        assert_eq!(p.random_vars[1].sigma(2.0), 0.1);
        assert_eq!(p.random_vars[1].sigma(4.0), 0.2);
        assert_eq!(p.random_vars[0].sigma(7.0), 0.1);
    }

    #[test]
    fn validation_rejects_bad_sets_and_targets() {
        let mut p = toy_problem();
        p.random_vars[1].values = Some(vec![]);
        assert!(matches!(p.validate(), Err(ProblemError::EmptyValueSet { .. })));

        let mut p = toy_problem();
        p.random_vars[1].values = Some(vec![3.0, 2.0]);
        assert!(matches!(p.validate(), Err(ProblemError::UnsortedValueSet { .. })));

        let mut p = toy_problem();
        p.random_vars[1].values = Some(vec![0.5, 2.0]);
        assert!(matches!(p.validate(), Err(ProblemError::ValueOutsideBounds { .. })));

        let mut p = toy_problem();
        p.probabilistic[0].target_pf = 0.7;
        assert!(matches!(p.validate(), Err(ProblemError::TargetPfOutOfRange { .. })));

        let mut p = toy_problem();
        p.det_vars[0] = Bounds::new(1.0, 1.0);
        assert!(matches!(p.validate(), Err(ProblemError::UnorderedBounds { .. })));
    }
}
