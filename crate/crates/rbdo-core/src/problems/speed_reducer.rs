//! Speed reducer (gearbox) design: weight minimization with two
//! deterministic design variables, five varying-variance random design
//! variables (σ = C.O.V.·μ, recomputed per candidate), fifteen random
//! parameters, ten reliability constraints and one deterministic constraint.

use std::sync::Arc;

use crate::problem::{
    Bounds, DeterministicConstraint, ProbabilisticConstraint, ProblemDefinition, RandomVar,
    StdSpec,
};
use crate::stats::{DistributionSpec, Family};

fn cov_var(lower: f64, upper: f64, cov: f64) -> RandomVar {
    RandomVar { family: Family::Normal, std: StdSpec::Cov(cov), bounds: Bounds::new(lower, upper), values: None }
}

/// The ten reliability limit states; d = (face width scale, tooth count),
/// x = five geometry variables, p = fifteen load/material parameters.
pub fn limit_state(index: usize, d: &[f64], x: &[f64], p: &[f64]) -> f64 {
    let (d1, d2) = (d[0], d[1]);
    match index {
        0 => 1.0 - p[0] / (x[0] * d1 * d1 * d2),
        1 => 1.0 - p[1] / (x[0] * d1 * d1 * d2 * d2),
        2 => 1.0 - p[2] * x[1].powi(3) / (x[3].powi(4) * d1 * d2),
        3 => 1.0 - p[3] * x[2].powi(3) / (x[4].powi(4) * d1 * d2),
        4 => {
            let s = p[5] * x[1] / (d1 * d2);
            1.0 - 0.5 * (s * s + p[6]).sqrt() / (x[3].powi(3) * p[4] * p[7])
        }
        5 => {
            let s = p[5] * x[2] / (d1 * d2);
            1.0 - 0.5 * (s * s + p[8]).sqrt() / (x[4].powi(3) * p[9] * p[7])
        }
        6 => 1.0 - 0.5 * p[10] * d1 / x[0],
        7 => 1.0 - x[0] * d1 / p[11],
        8 => 1.0 - (p[12] * x[3] + p[14]) / (2.0 * x[1]),
        9 => 1.0 - (p[13] * x[4] + p[14]) / (2.0 * x[2]),
        _ => unreachable!("speed reducer has ten reliability limit states"),
    }
}

/// Deterministic gearing constraint, safe-positive form: 1 − d₁d₂/80.
pub fn gearing_margin(d: &[f64]) -> f64 {
    1.0 - d[0] * d[1] / 80.0
}

pub fn speed_reducer(target_pf: f64) -> ProblemDefinition {
    let det_vars = vec![Bounds::new(0.7, 0.8), Bounds::new(17.0, 28.0)];
    let random_vars = vec![
        cov_var(2.6, 4.2, 0.05),
        cov_var(7.0, 8.3, 0.05),
        cov_var(7.0, 9.3, 0.05),
        cov_var(2.9, 3.95, 0.02),
        cov_var(5.0, 6.0, 0.02),
    ];
    let param_table: [(f64, f64); 15] = [
        (27.0, 2.7),
        (397.5, 39.8),
        (1.93, 0.0965),
        (1.93, 0.0965),
        (1100.0, 110.0),
        (745.0, 74.5),
        (1.69e7, 1.69e6),
        (0.1, 0.005),
        (1.58e8, 1.58e7),
        (850.0, 34.0),
        (5.0, 0.25),
        (12.0, 0.6),
        (1.5, 0.75),
        (1.1, 0.11),
        (1.9, 0.19),
    ];
    let random_params = param_table
        .into_iter()
        .map(|(m, s)| DistributionSpec::normal(m, s).unwrap())
        .collect::<Vec<_>>();

    let probabilistic = (0..10)
        .map(|i| ProbabilisticConstraint {
            name: format!("g{}", i + 1),
            target_pf,
            g: Arc::new(move |d: &[f64], x: &[f64], p: &[f64]| limit_state(i, d, x, p)),
        })
        .collect::<Vec<_>>();

    let deterministic = vec![DeterministicConstraint {
        name: "g11".into(),
        // registered in the h ≤ 0 convention
        h: Arc::new(|d: &[f64], _x: &[f64], _p: &[f64]| -gearing_margin(d)),
    }];

    let problem = ProblemDefinition {
        name: "speed-reducer".into(),
        det_vars,
        random_vars,
        random_params,
        objective: Arc::new(|d: &[f64], x: &[f64]| {
            0.7854 * x[0] * d[0] * d[0] * (3.3333 * d[1] * d[1] + 14.9334 * d[1] - 43.0934)
                - 1.5079 * x[0] * (x[3] * x[3] + x[4] * x[4])
                + 7.477 * (x[3].powi(3) + x[4].powi(3))
                + 0.7854 * (x[1] * x[3] * x[3] + x[2] * x[4] * x[4])
        }),
        probabilistic,
        deterministic,
        violation_exponent: 2,
    };
    assert_eq!(problem.det_vars.len(), 2);
    assert_eq!(problem.random_vars.len(), 5);
    assert_eq!(problem.random_params.len(), 15);
    assert_eq!(problem.probabilistic.len(), 10);
    assert_eq!(problem.deterministic.len(), 1);
    problem
}

#[cfg(test)]
mod tests {
    use super::*;

    const BEST: [f64; 7] = [0.7, 17.0, 3.860190, 7.0, 7.0, 2.932511, 5.0];

    #[test]
    fn objective_at_reported_best() {
        let p = speed_reducer(0.05);
        let f = p.objective_at(&BEST);
        assert!((f - 2856.547).abs() < 0.02, "f = {f}");
    }

    #[test]
    fn first_limit_state_at_best() {
        let d = [0.7, 17.0];
        let x = [3.860190, 7.0, 7.0, 2.932511, 5.0];
        let mut p = [0.0; 15];
        p[0] = 27.0;
        let g = limit_state(0, &d, &x, &p);
        assert!((g - 0.160_327_207_052_647).abs() < 1e-9, "g1 = {g}");
    }

    #[test]
    fn gearing_margin_at_best() {
        let m = gearing_margin(&[0.7, 17.0]);
        assert!((m - 0.85125).abs() < 1e-9, "g11 = {m}");
    }

    #[test]
    fn sigma_tracks_candidate_mean() {
        let p = speed_reducer(0.05);
        assert!((p.random_vars[0].sigma(3.86019) - 0.1930095).abs() < 1e-12);
        assert!((p.random_vars[3].sigma(2.932511) - 0.05865022).abs() < 1e-12);
    }
}
