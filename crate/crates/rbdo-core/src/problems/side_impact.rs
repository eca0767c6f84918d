//! Crashworthiness of a vehicle in side impact.
//!
//! Weight minimization over seven thickness variables subject to ten
//! reliability constraints on dummy responses (abdomen load, rib deflections,
//! viscous criteria, pubic symphysis force, B-pillar and door velocities).
//! The responses are polynomial surrogates; every limit state is registered
//! as threshold − response so that positive means safe.

use std::sync::Arc;

use crate::problem::{
    Bounds, ProbabilisticConstraint, ProblemDefinition, RandomVar, StdSpec,
};
use crate::stats::{DistributionSpec, Family};

fn var(lower: f64, upper: f64, std: f64) -> RandomVar {
    RandomVar { family: Family::Normal, std: StdSpec::Fixed(std), bounds: Bounds::new(lower, upper), values: None }
}

/// Abdomen load (kN).
pub fn abdomen_load(x: &[f64], p: &[f64]) -> f64 {
    1.16 - 0.3717 * x[1] * x[3] - 0.00931 * x[1] * p[2] - 0.484 * x[2] * p[1]
        + 0.01343 * x[5] * p[3]
}

/// Lower rib deflection (mm).
pub fn deflection_lower(x: &[f64], p: &[f64]) -> f64 {
    46.36 - 9.9 * x[1] - 12.9 * x[0] * p[0] + 0.1107 * x[2] * p[2]
}

/// Middle rib deflection (mm).
pub fn deflection_middle(x: &[f64], p: &[f64]) -> f64 {
    33.86 + 2.95 * x[2] + 0.1792 * p[2] - 5.057 * x[0] * x[1] - 11.0 * x[1] * p[0]
        - 0.0215 * x[4] * p[2] - 9.98 * x[6] * p[0] + 22.0 * p[0] * p[1]
}

/// Upper rib deflection (mm).
pub fn deflection_upper(x: &[f64], p: &[f64]) -> f64 {
    28.98 + 3.818 * x[2] - 4.2 * x[0] * x[1] + 0.0207 * x[4] * p[2] + 6.63 * x[5] * p[1]
        - 7.7 * x[6] * p[0] + 0.32 * p[1] * p[2]
}

/// Lower viscous criterion (m/s).
pub fn viscous_lower(x: &[f64], p: &[f64]) -> f64 {
    0.74 - 0.61 * x[1] - 0.163 * x[2] * p[0] + 0.001232 * x[2] * p[2] - 0.166 * x[6] * p[1]
        + 0.227 * x[1] * x[1]
}

/// Middle viscous criterion (m/s).
pub fn viscous_middle(x: &[f64], p: &[f64]) -> f64 {
    0.214 + 0.00817 * x[4] - 0.131 * x[0] * p[0] - 0.0704 * x[0] * p[1]
        + 0.03099 * x[1] * x[5]
        - 0.018 * x[1] * x[6]
        + 0.0208 * x[2] * p[0]
        + 0.121 * x[2] * p[1]
        - 0.00364 * x[4] * x[5]
        + 0.0007715 * x[4] * p[2]
        - 0.0005354 * x[5] * p[2]
        + 0.00121 * p[0] * p[3]
}

/// Upper viscous criterion (m/s).
pub fn viscous_upper(x: &[f64], p: &[f64]) -> f64 {
    0.261 - 0.0159 * x[0] * x[1] - 0.188 * x[0] * p[0] - 0.019 * x[1] * x[6]
        + 0.0144 * x[2] * x[4]
        + 0.0008757 * x[4] * p[2]
        + 0.08045 * x[5] * p[1]
        + 0.00139 * p[0] * p[3]
        + 0.00001575 * p[2] * p[3]
}

/// Pubic symphysis force (kN).
pub fn pubic_force(x: &[f64], p: &[f64]) -> f64 {
    4.72 - 0.5 * x[3] - 0.19 * x[1] * x[2] - 0.0122 * x[3] * p[2] + 0.009325 * x[5] * p[2]
        + 0.000191 * p[3] * p[3]
}

/// B-pillar midpoint velocity (mm/ms).
pub fn b_pillar_velocity(x: &[f64], p: &[f64]) -> f64 {
    10.58 - 0.674 * x[0] * x[1] - 1.95 * x[1] * p[0] + 0.02054 * x[2] * p[2]
        - 0.0198 * x[3] * p[2]
        + 0.028 * x[5] * p[2]
}

/// Front door velocity (mm/ms).
pub fn door_velocity(x: &[f64], p: &[f64]) -> f64 {
    16.45 - 0.489 * x[2] * x[6] - 0.843 * x[4] * x[5] + 0.0432 * p[1] * p[2]
        - 0.0556 * p[1] * p[3]
        - 0.000786 * p[3] * p[3]
}

/// Build the side-impact problem with the given per-constraint admissible
/// failure probability.
pub fn vehicle_side_impact(target_pf: f64) -> ProblemDefinition {
    let random_vars = vec![
        var(0.5, 1.5, 0.03),    // B-pillar inner
        var(0.45, 1.35, 0.03),  // B-pillar reinforcement
        var(0.5, 1.5, 0.03),    // floor side inner
        var(0.5, 1.5, 0.03),    // cross members
        var(0.875, 2.625, 0.05), // door beam
        var(0.4, 1.2, 0.03),    // door belt line reinforcement
        var(0.4, 1.2, 0.03),    // roof rail
    ];
    let random_params = vec![
        DistributionSpec::normal(0.345, 0.006).unwrap(), // B-pillar inner material
        DistributionSpec::normal(0.192, 0.006).unwrap(), // floor side inner material
        DistributionSpec::normal(0.0, 10.0).unwrap(),    // barrier height
        DistributionSpec::normal(0.0, 10.0).unwrap(),    // barrier hitting position
    ];

    type Response = fn(&[f64], &[f64]) -> f64;
    // The B-pillar velocity limit is 9.9 mm/ms, the standard value for this
    // surrogate model.
    let limits: [(&str, Response, f64); 10] = [
        ("g1", abdomen_load, 1.01),
        ("g2", deflection_lower, 32.0),
        ("g3", deflection_middle, 32.0),
        ("g4", deflection_upper, 32.0),
        ("g5", viscous_lower, 0.32),
        ("g6", viscous_middle, 0.32),
        ("g7", viscous_upper, 0.32),
        ("g8", pubic_force, 4.0),
        ("g9", b_pillar_velocity, 9.9),
        ("g10", door_velocity, 15.69),
    ];
    let probabilistic = limits
        .into_iter()
        .map(|(name, response, threshold)| ProbabilisticConstraint {
            name: name.to_string(),
            target_pf,
            g: Arc::new(move |_d: &[f64], x: &[f64], p: &[f64]| threshold - response(x, p)),
        })
        .collect::<Vec<_>>();

    let problem = ProblemDefinition {
        name: "vehicle-side-impact".into(),
        det_vars: vec![],
        random_vars,
        random_params,
        objective: Arc::new(|_d, x| {
            1.98 + 4.90 * x[0] + 6.67 * x[1] + 6.98 * x[2] + 4.01 * x[3] + 1.78 * x[4]
                + 2.73 * x[6]
        }),
        probabilistic,
        deterministic: vec![],
        violation_exponent: 2,
    };
    assert_eq!(problem.random_vars.len(), 7);
    assert_eq!(problem.random_params.len(), 4);
    assert_eq!(problem.probabilistic.len(), 10);
    problem
}
