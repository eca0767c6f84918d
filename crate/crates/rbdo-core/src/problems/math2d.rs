//! Two-variable mathematical benchmark: minimize x₁ + x₂ under three
//! nonlinear reliability constraints, with selectable marginal distributions.

use std::sync::Arc;

use crate::problem::{Bounds, ProbabilisticConstraint, ProblemDefinition, RandomVar, StdSpec};
use crate::stats::Family;

/// Marginal distribution choices for (x₁, x₂); σ = 0.3 in every case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Math2dMarginals {
    NormalNormal,
    GumbelGumbel,
    LogNormalNormal,
}

pub fn g1(x: &[f64]) -> f64 {
    x[0] * x[0] * x[1] / 20.0 - 1.0
}

pub fn g2(x: &[f64]) -> f64 {
    let a = x[0] + x[1] - 5.0;
    let b = x[0] - x[1] - 12.0;
    a * a / 30.0 + b * b / 120.0 - 1.0
}

pub fn g3(x: &[f64]) -> f64 {
    80.0 / (x[0] * x[0] + 8.0 * x[1] + 5.0) - 1.0
}

pub fn math_2d(marginals: Math2dMarginals, target_pf: f64) -> ProblemDefinition {
    let families = match marginals {
        Math2dMarginals::NormalNormal => [Family::Normal, Family::Normal],
        Math2dMarginals::GumbelGumbel => [Family::Gumbel, Family::Gumbel],
        Math2dMarginals::LogNormalNormal => [Family::LogNormal, Family::Normal],
    };
    let random_vars = families
        .into_iter()
        .map(|family| RandomVar {
            family,
            std: StdSpec::Fixed(0.3),
            bounds: Bounds::new(0.1, 10.0),
            values: None,
        })
        .collect();

    type G = fn(&[f64]) -> f64;
    let gs: [(&str, G); 3] = [("g1", g1), ("g2", g2), ("g3", g3)];
    let probabilistic = gs
        .into_iter()
        .map(|(name, g)| ProbabilisticConstraint {
            name: name.to_string(),
            target_pf,
            g: Arc::new(move |_d: &[f64], x: &[f64], _p: &[f64]| g(x)),
        })
        .collect();

    ProblemDefinition {
        name: "math2d".into(),
        det_vars: vec![],
        random_vars,
        random_params: vec![],
        objective: Arc::new(|_d, x| x[0] + x[1]),
        probabilistic,
        deterministic: vec![],
        violation_exponent: 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g1_at_reported_optimum() {
        let v = g1(&[3.4405576, 3.2799744]);
        assert!((v - 0.94132).abs() < 1e-5, "g1 = {v}");
    }

    #[test]
    fn g1_boundary() {
        // any point with x₁²x₂ = 20 sits on the limit surface
        let x1 = 2.0;
        let x2 = 20.0 / (x1 * x1);
        assert!(g1(&[x1, x2]).abs() < 1e-12);
    }

    #[test]
    fn marginals_selection() {
        let p = math_2d(Math2dMarginals::LogNormalNormal, 0.00135);
        assert_eq!(p.random_vars[0].family, Family::LogNormal);
        assert_eq!(p.random_vars[1].family, Family::Normal);
        assert_eq!(p.probabilistic.len(), 3);
        assert_eq!(p.dimension(), 2);
    }
}
