//! Welded beam cost minimization (metric units, mm/N/MPa): weld size x₁,
//! weld length x₂, bar height x₃, bar thickness x₄, with reliability
//! constraints on shear stress, normal stress, geometry, deflection and
//! buckling.

use std::sync::Arc;

use crate::problem::{Bounds, ProbabilisticConstraint, ProblemDefinition, RandomVar, StdSpec};
use crate::stats::{DistributionSpec, Family};

/// Cost/length parameter sets.
///
/// `Table11` keeps the rounded catalogue values (beam length 335.56, weld and
/// bar costs 6.74e-5 / 2.94e-6). `Table12Compatible` restores the
/// full-precision imperial-derived constants (length 355.6 = 14 in, costs
/// 1.10471/25.4³ and 0.04811/25.4³), which is what the published continuous
/// optima assume.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeldedBeamPreset {
    Table11,
    Table12Compatible,
}

impl WeldedBeamPreset {
    fn constants(self) -> (f64, f64, f64) {
        const MM3_PER_IN3: f64 = 25.4 * 25.4 * 25.4;
        match self {
            WeldedBeamPreset::Table11 => (6.74e-5, 2.94e-6, 335.56),
            WeldedBeamPreset::Table12Compatible => {
                (1.10471 / MM3_PER_IN3, 0.04811 / MM3_PER_IN3, 355.6)
            }
        }
    }
}

/// Shear stress at the weld: combines the direct term t₁ = P/(√2·x₁x₂) and
/// the torsional term t₂ = MR/J.
pub fn shear_stress(x: &[f64], p: &[f64]) -> f64 {
    let t1 = p[0] / (std::f64::consts::SQRT_2 * x[0] * x[1]);
    let m = p[0] * (p[1] + 0.5 * x[1]);
    let span_sq = (x[0] + x[2]) * (x[0] + x[2]);
    let r = 0.5 * (x[1] * x[1] + span_sq).sqrt();
    let j = std::f64::consts::SQRT_2 * x[0] * x[1] * (x[1] * x[1] / 12.0 + span_sq / 4.0);
    let t2 = m * r / j;
    (t1 * t1 + 2.0 * t1 * t2 * x[1] / (2.0 * r) + t2 * t2).sqrt()
}

/// Bending stress in the bar.
pub fn normal_stress(x: &[f64], p: &[f64]) -> f64 {
    6.0 * p[0] * p[1] / (x[2] * x[2] * x[3])
}

/// Tip deflection.
pub fn deflection(x: &[f64], p: &[f64]) -> f64 {
    4.0 * p[0] * p[1].powi(3) / (p[2] * x[2].powi(3) * x[3])
}

/// Buckling load of the bar.
pub fn buckling_load(x: &[f64], p: &[f64]) -> f64 {
    4.013 * x[2] * x[3].powi(3) * (p[2] * p[3]).sqrt() / (6.0 * p[1] * p[1])
        * (1.0 - x[2] / (4.0 * p[1]) * (p[2] / p[3]).sqrt())
}

pub fn limit_state(index: usize, x: &[f64], p: &[f64]) -> f64 {
    match index {
        0 => 1.0 - shear_stress(x, p) / p[5],
        1 => 1.0 - normal_stress(x, p) / p[6],
        2 => 1.0 - x[0] / x[3],
        3 => 1.0 - deflection(x, p) / p[4],
        4 => buckling_load(x, p) / p[0] - 1.0,
        _ => unreachable!("welded beam has five limit states"),
    }
}

fn continuous_vars() -> Vec<RandomVar> {
    let sig = [0.1693, 0.1693, 0.0107, 0.0107];
    let bounds = [
        Bounds::new(3.175, 50.8),
        Bounds::new(1e-6, 254.0),
        Bounds::new(1e-6, 254.0),
        Bounds::new(1e-6, 50.8),
    ];
    sig.iter()
        .zip(bounds)
        .map(|(&s, b)| RandomVar { family: Family::Normal, std: StdSpec::Fixed(s), bounds: b, values: None })
        .collect()
}

fn discrete_vars() -> Vec<RandomVar> {
    let step_set = |from: i64, to: i64| -> Vec<f64> { (from..=to).map(|v| v as f64).collect() };
    let thickness: Vec<f64> = [2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0, 12.0, 14.0, 15.0, 16.0, 18.0, 20.0, 22.0, 25.0].to_vec();
    let sig = [0.1693, 0.1693, 0.0107, 0.0107];
    let sets = [step_set(3, 50), step_set(1, 254), step_set(1, 254), thickness];
    sig.iter()
        .zip(sets)
        .map(|(&s, set)| {
            let bounds = Bounds::new(set[0], *set.last().unwrap());
            RandomVar { family: Family::Normal, std: StdSpec::Fixed(s), bounds, values: Some(set) }
        })
        .collect()
}

/// Build the welded beam problem.
///
/// `params_random` switches the seven physical parameters from point values
/// to their distributions: load and the material/allowable properties are
/// log-normal and the allowable deflection is normal. The beam length stays
/// a point value in both modes; its scatter is not part of the calibrated
/// reliability model that the discrete optimum and its verification assume.
pub fn welded_beam(
    discrete: bool,
    params_random: bool,
    preset: WeldedBeamPreset,
    target_pf: f64,
) -> ProblemDefinition {
    let (c1, c2, beam_length) = preset.constants();

    let random_params = if params_random {
        vec![
            DistributionSpec::log_normal(26_680.0, 2_668.0).unwrap(), // load
            DistributionSpec::deterministic(beam_length),             // beam length
            DistributionSpec::log_normal(206_850.0, 6_205.5).unwrap(), // Young modulus
            DistributionSpec::log_normal(82_740.0, 2_482.2).unwrap(), // shear modulus
            DistributionSpec::normal(6.35, 0.3175).unwrap(),          // admissible deflection
            DistributionSpec::log_normal(93.77, 6.5639).unwrap(),     // admissible shear
            DistributionSpec::log_normal(206.85, 14.4795).unwrap(),   // admissible normal stress
        ]
    } else {
        [26_680.0, beam_length, 206_850.0, 82_740.0, 6.35, 93.77, 206.85]
            .into_iter()
            .map(DistributionSpec::deterministic)
            .collect()
    };

    let probabilistic = (0..5)
        .map(|i| ProbabilisticConstraint {
            name: format!("g{}", i + 1),
            target_pf,
            g: Arc::new(move |_d: &[f64], x: &[f64], p: &[f64]| limit_state(i, x, p)),
        })
        .collect::<Vec<_>>();

    let problem = ProblemDefinition {
        name: if discrete { "welded-beam-discrete".into() } else { "welded-beam-continuous".into() },
        det_vars: vec![],
        random_vars: if discrete { discrete_vars() } else { continuous_vars() },
        random_params,
        objective: Arc::new(move |_d: &[f64], x: &[f64]| {
            c1 * x[0] * x[0] * x[1] + c2 * x[2] * x[3] * (beam_length + x[1])
        }),
        probabilistic,
        deterministic: vec![],
        violation_exponent: 2,
    };
    assert_eq!(problem.random_vars.len(), 4);
    assert_eq!(problem.random_params.len(), 7);
    assert_eq!(problem.probabilistic.len(), 5);
    problem
}
