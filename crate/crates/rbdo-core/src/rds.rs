//! Reliable-design-space transform and ε-constraint machinery.
//!
//! The transform turns each probabilistic constraint P(g ≤ 0) ≤ P_f into the
//! deterministic check g(x̄, p̄) ≥ 0, where (x̄, p̄) is the candidate shifted by
//! the target reliability index β = −Φ⁻¹(P_f) along the σ-scaled gradient
//! direction at the mean point. Evaluating the direction once at the mean is
//! what keeps the approach single loop: no inner most-probable-point
//! iteration takes place while optimizing.

use std::cmp::Ordering;

use thiserror::Error;

use crate::problem::{EvaluatedSolution, LimitStateFn, ProblemDefinition, ProblemError};
use crate::stats::{std_normal_cdf, std_normal_quantile, DistributionSpec, Family, StatsError};

/// Clamp window applied to Φ(−β·α̃) before the marginal quantile.
const QUANTILE_CLAMP: f64 = 1e-15;

#[derive(Debug, Error)]
pub enum RdsError {
    #[error("target failure probability {0} must lie in (0, 0.5)")]
    TargetPfOutOfRange(f64),
    #[error("all partial derivatives vanish; shift direction is undefined")]
    DegenerateGradient,
    #[error("population is empty")]
    EmptyPopulation,
    #[error("epsilon schedule: {0}")]
    InvalidSchedule(String),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

/// Target reliability index β = −Φ⁻¹(P_f).
pub fn target_beta(pf: f64) -> Result<f64, RdsError> {
    if !(pf > 0.0 && pf < 0.5) {
        return Err(RdsError::TargetPfOutOfRange(pf));
    }
    Ok(-std_normal_quantile(pf)?)
}

/// σ-scaled, normalized gradient components of one limit state.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionalCosines {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
}

/// Central-difference gradient step for component value v.
fn fd_step(v: f64) -> f64 {
    1e-6 * v.abs().max(1.0)
}

/// Directional cosines α_j = σ_j ∂g/∂v_j / ‖σ∘∇g‖ over variables and
/// parameters jointly, at the mean point. Pass equivalent-normal σ̂ values to
/// obtain the non-normal variant.
pub fn directional_cosines(
    g: &LimitStateFn,
    d: &[f64],
    x_means: &[f64],
    p_means: &[f64],
    x_sigmas: &[f64],
    p_sigmas: &[f64],
) -> Result<DirectionalCosines, RdsError> {
    let mut x = vec![0.0; x_means.len()];
    let mut p = vec![0.0; p_means.len()];
    let mut xs = x_means.to_vec();
    let mut ps = p_means.to_vec();
    for j in 0..x_means.len() {
        if x_sigmas[j] == 0.0 {
            continue;
        }
        let h = fd_step(x_means[j]);
        xs[j] = x_means[j] + h;
        let hi = g(d, &xs, p_means);
        xs[j] = x_means[j] - h;
        let lo = g(d, &xs, p_means);
        xs[j] = x_means[j];
        x[j] = x_sigmas[j] * (hi - lo) / (2.0 * h);
    }
    for j in 0..p_means.len() {
        if p_sigmas[j] == 0.0 {
            continue;
        }
        let h = fd_step(p_means[j]);
        ps[j] = p_means[j] + h;
        let hi = g(d, x_means, &ps);
        ps[j] = p_means[j] - h;
        let lo = g(d, x_means, &ps);
        ps[j] = p_means[j];
        p[j] = p_sigmas[j] * (hi - lo) / (2.0 * h);
    }
    let norm = x
        .iter()
        .chain(p.iter())
        .map(|a| a * a)
        .sum::<f64>()
        .sqrt();
    if norm == 0.0 {
        return Err(RdsError::DegenerateGradient);
    }
    for a in x.iter_mut().chain(p.iter_mut()) {
        *a /= norm;
    }
    Ok(DirectionalCosines { x, p })
}

/// The candidate shifted β standard deviations toward failure, one point per
/// probabilistic constraint.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftedPoint {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    pub constraint_index: usize,
}

/// Normal-marginal shift x̄ = μ − α σ β.
pub fn shift_normal(mean: f64, std: f64, alpha: f64, beta: f64) -> f64 {
    mean - alpha * std * beta
}

/// General marginal shift x̄ = F⁻¹(Φ(−β α̃)); Φ(−β α̃) is clamped into
/// [1e-15, 1 − 1e-15] before the quantile.
pub fn shift_marginal(dist: &DistributionSpec, alpha: f64, beta: f64) -> Result<f64, RdsError> {
    let p = std_normal_cdf(-beta * alpha).clamp(QUANTILE_CLAMP, 1.0 - QUANTILE_CLAMP);
    Ok(dist.quantile(p)?)
}

fn shift_component(dist: &DistributionSpec, alpha: f64, beta: f64) -> Result<f64, RdsError> {
    match dist.family() {
        Family::Normal => Ok(shift_normal(dist.mean(), dist.std(), alpha, beta)),
        Family::Deterministic => Ok(dist.mean()),
        _ => shift_marginal(dist, alpha, beta),
    }
}

fn sigma_hat(dist: &DistributionSpec) -> Result<f64, RdsError> {
    if dist.family() == Family::Deterministic {
        return Ok(0.0);
    }
    Ok(dist.equivalent_normal_std(dist.mean())?)
}

/// Shift the candidate for probabilistic constraint `constraint_index`.
///
/// A degenerate gradient falls back to α = 0 (shifted point equals the mean
/// point) with a diagnostic, so one flat limit state does not poison a whole
/// run.
pub fn shift_point(
    problem: &ProblemDefinition,
    constraint_index: usize,
    y: &[f64],
) -> Result<ShiftedPoint, RdsError> {
    let (d, x_means) = problem.split(y);
    let x_dists = problem.x_distributions(x_means)?;
    let p_dists = &problem.random_params;
    let p_means = problem.param_means();

    let x_sig: Vec<f64> = x_dists.iter().map(sigma_hat).collect::<Result<_, _>>()?;
    let p_sig: Vec<f64> = p_dists.iter().map(sigma_hat).collect::<Result<_, _>>()?;

    let constraint = &problem.probabilistic[constraint_index];
    let beta = target_beta(constraint.target_pf)?;
    let cos = match directional_cosines(&constraint.g, d, x_means, &p_means, &x_sig, &p_sig) {
        Ok(c) => c,
        Err(RdsError::DegenerateGradient) => {
            log::debug!(
                "degenerate gradient for constraint {} of {}; shifting by zero",
                constraint.name,
                problem.name
            );
            DirectionalCosines { x: vec![0.0; x_means.len()], p: vec![0.0; p_means.len()] }
        }
        Err(e) => return Err(e),
    };

    let mut x = Vec::with_capacity(x_means.len());
    for (dist, &alpha) in x_dists.iter().zip(&cos.x) {
        x.push(shift_component(dist, alpha, beta)?);
    }
    let mut p = Vec::with_capacity(p_means.len());
    for (dist, &alpha) in p_dists.iter().zip(&cos.p) {
        p.push(shift_component(dist, alpha, beta)?);
    }
    Ok(ShiftedPoint { x, p, constraint_index })
}

/// Constraint violation ν(y) = Σ min{0, g_j(x̄ⱼ, p̄ⱼ)}^s + Σ max{0, h_j}^s.
///
/// Each probabilistic constraint is checked at its own shifted point; ν = 0
/// exactly when the candidate lies in the reliable design space.
pub fn constraint_violation(problem: &ProblemDefinition, y: &[f64]) -> Result<f64, RdsError> {
    problem.check_dimension(y)?;
    let (d, x_means) = problem.split(y);
    let s = problem.violation_exponent;
    let mut nu = 0.0;
    for i in 0..problem.probabilistic.len() {
        let shifted = shift_point(problem, i, y)?;
        let val = (problem.probabilistic[i].g)(d, &shifted.x, &shifted.p);
        nu += val.min(0.0).powi(s);
    }
    if !problem.deterministic.is_empty() {
        let p_means = problem.param_means();
        for c in &problem.deterministic {
            nu += (c.h)(d, x_means, &p_means).max(0.0).powi(s);
        }
    }
    Ok(nu)
}

/// Fitness plus violation of one candidate.
pub fn evaluate(problem: &ProblemDefinition, y: &[f64]) -> Result<EvaluatedSolution, RdsError> {
    let violation = constraint_violation(problem, y)?;
    Ok(EvaluatedSolution { position: y.to_vec(), fitness: problem.objective_at(y), violation })
}

/// ε-level comparison of (f, ν) pairs: fitness decides when both violations
/// are within ε (or equal), violation decides otherwise.
pub fn epsilon_compare(a: (f64, f64), b: (f64, f64), eps: f64) -> Ordering {
    let ((fa, va), (fb, vb)) = (a, b);
    if (va <= eps && vb <= eps) || va == vb {
        fa.total_cmp(&fb)
    } else {
        va.total_cmp(&vb)
    }
}

/// Strict ε-order a <_ε b.
pub fn epsilon_less(a: (f64, f64), b: (f64, f64), eps: f64) -> bool {
    epsilon_compare(a, b, eps) == Ordering::Less
}

/// Non-strict ε-order a ≤_ε b.
pub fn epsilon_less_eq(a: (f64, f64), b: (f64, f64), eps: f64) -> bool {
    epsilon_compare(a, b, eps) != Ordering::Greater
}

/// Decaying ε-level: ε(0) = ε⁰, ε(t) = ε⁰(1 − t/T_c)^cp for 0 < t < T_c and
/// zero from T_c on.
#[derive(Clone, Copy, Debug)]
pub struct EpsilonSchedule {
    eps0: f64,
    tc: f64,
    cp: f64,
}

impl EpsilonSchedule {
    pub fn new(eps0: f64, tc: f64, cp: f64) -> Result<Self, RdsError> {
        if !(eps0 >= 0.0) {
            return Err(RdsError::InvalidSchedule(format!("eps0 = {eps0} must be >= 0")));
        }
        if !(tc > 0.0) {
            return Err(RdsError::InvalidSchedule(format!("Tc = {tc} must be positive")));
        }
        if !(2.0..=10.0).contains(&cp) {
            return Err(RdsError::InvalidSchedule(format!("cp = {cp} must lie in [2, 10]")));
        }
        Ok(Self { eps0, tc, cp })
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    pub fn value(&self, t: u32) -> f64 {
        let t = f64::from(t);
        if t <= 0.0 {
            self.eps0
        } else if t >= self.tc {
            0.0
        } else {
            self.eps0 * (1.0 - t / self.tc).powf(self.cp)
        }
    }
}

/// ε⁰ = violation of the individual at rank ⌈θ·NB⌉ when sorted ascending.
pub fn init_epsilon(violations: &[f64], theta_fraction: f64) -> Result<f64, RdsError> {
    if violations.is_empty() {
        return Err(RdsError::EmptyPopulation);
    }
    let n = violations.len();
    let raw = theta_fraction * n as f64;
    // guard ceil against 0.2·5 = 1.0000000000000002-style noise
    let rank = if (raw - raw.round()).abs() < 1e-9 { raw.round() } else { raw.ceil() };
    let rank = (rank as usize).clamp(1, n);
    let mut sorted = violations.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted[rank - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Bounds, ProbabilisticConstraint, RandomVar, StdSpec};
    use crate::stats::std_normal_cdf;
    use std::sync::Arc;

    #[test]
    fn target_beta_paper_anchors() {
        assert!((target_beta(0.00135).unwrap() - 3.0).abs() < 0.005);
        assert!((target_beta(0.05).unwrap() - 1.644).abs() < 0.002);
        let b = target_beta(std_normal_cdf(-2.0)).unwrap();
        assert!((b - 2.0).abs() < 1e-9);
        assert!(target_beta(0.5).is_err());
        assert!(target_beta(0.0).is_err());
    }

    fn lim(f: impl Fn(&[f64], &[f64], &[f64]) -> f64 + Send + Sync + 'static) -> LimitStateFn {
        Arc::new(f)
    }

    #[test]
    fn cosines_symmetric_sum() {
        let g = lim(|_, x, _| x[0] + x[1]);
        let c = directional_cosines(&g, &[], &[1.0, 1.0], &[], &[1.0, 1.0], &[]).unwrap();
        let r = 1.0 / 2.0_f64.sqrt();
        assert!((c.x[0] - r).abs() < 1e-9);
        assert!((c.x[1] - r).abs() < 1e-9);
    }

    #[test]
    fn cosines_single_variable() {
        let g = lim(|_, x, _| x[0]);
        let c = directional_cosines(&g, &[], &[2.0, 5.0], &[], &[1.0, 1.0], &[]).unwrap();
        assert!((c.x[0] - 1.0).abs() < 1e-9);
        assert!(c.x[1].abs() < 1e-9);
    }

    #[test]
    fn cosines_match_independent_finite_differences() {
        // g₁ of the two-variable benchmark at its reported optimum; the
        // oracle recomputes the gradient with step 1e-7 and normalizes.
        let g = lim(|_, x, _| x[0] * x[0] * x[1] / 20.0 - 1.0);
        let x0 = [3.4405576, 3.2799744];
        let c = directional_cosines(&g, &[], &x0, &[], &[0.3, 0.3], &[]).unwrap();

        let eval = |x: &[f64]| x[0] * x[0] * x[1] / 20.0 - 1.0;
        let mut grad = [0.0; 2];
        for j in 0..2 {
            let mut hi = x0;
            let mut lo = x0;
            hi[j] += 1e-7;
            lo[j] -= 1e-7;
            grad[j] = (eval(&hi) - eval(&lo)) / 2e-7;
        }
        let n = (grad[0] * grad[0] + grad[1] * grad[1]).sqrt() * 0.3 / 0.3;
        let expect = [0.3 * grad[0] / (0.3 * n), 0.3 * grad[1] / (0.3 * n)];
        assert!((c.x[0] - expect[0]).abs() < 1e-7, "{} vs {}", c.x[0], expect[0]);
        assert!((c.x[1] - expect[1]).abs() < 1e-7);
        // frozen from the oracle
        assert!((c.x[0] - 0.885_587_597_573_5).abs() < 1e-7);
        assert!((c.x[1] - 0.464_472_396_406_9).abs() < 1e-7);
    }

    #[test]
    fn degenerate_gradient_is_an_error() {
        let g = lim(|_, _, _| 1.0);
        let err = directional_cosines(&g, &[], &[1.0], &[], &[1.0], &[]);
        assert!(matches!(err, Err(RdsError::DegenerateGradient)));
    }

    #[test]
    fn shift_normal_arithmetic() {
        assert_eq!(shift_normal(5.0, 1.0, 1.0, 3.0), 2.0);
        assert_eq!(shift_normal(5.0, 1.0, 0.0, 3.0), 5.0);
    }

    #[test]
    fn marginal_shift_equals_two_step_transform_for_gumbel() {
        // Oracle: map the standard-normal point −βα̃ through the marginal
        // quantile explicitly.
        let d = DistributionSpec::gumbel(3.44, 0.3).unwrap();
        for &(alpha, beta) in &[(0.7, 3.0), (-0.4, 2.0), (1.0, 1.28), (0.0, 3.0)] {
            let shifted = shift_marginal(&d, alpha, beta).unwrap();
            let u = -beta * alpha;
            let by_hand = d.quantile(std_normal_cdf(u)).unwrap();
            assert!((shifted - by_hand).abs() < 1e-12);
        }
    }

    #[test]
    fn epsilon_compare_worked_example() {
        // (f, ν) = (4, 3) against (2, 5)
        assert!(epsilon_less((2.0, 5.0), (4.0, 3.0), 7.0));
        assert!(epsilon_less((4.0, 3.0), (2.0, 5.0), 2.0));
        assert_eq!(epsilon_compare((1.0, 0.0), (1.0, 0.0), 0.0), Ordering::Equal);
        assert!(epsilon_less_eq((1.0, 0.0), (1.0, 0.0), 5.0));
        assert!(!epsilon_less((1.0, 0.0), (1.0, 0.0), 5.0));
    }

    #[test]
    fn epsilon_compare_at_zero_is_lexicographic() {
        assert!(epsilon_less((9.0, 0.0), (1.0, 0.1), 0.0));
        assert!(epsilon_less((9.0, 0.1), (1.0, 0.2), 0.0));
        assert!(epsilon_less((1.0, 0.1), (9.0, 0.1), 0.0));
    }

    #[test]
    fn epsilon_schedule_values() {
        let s = EpsilonSchedule::new(16.0, 100.0, 5.0).unwrap();
        assert_eq!(s.value(0), 16.0);
        assert_eq!(s.value(100), 0.0);
        assert_eq!(s.value(150), 0.0);
        assert!((s.value(50) - 0.5).abs() < 1e-12);
        assert!(EpsilonSchedule::new(-1.0, 10.0, 5.0).is_err());
        assert!(EpsilonSchedule::new(1.0, 10.0, 1.0).is_err());
    }

    #[test]
    fn epsilon_schedule_nonincreasing() {
        let s = EpsilonSchedule::new(3.7, 95.0, 5.0).unwrap();
        let mut prev = f64::INFINITY;
        for t in 0..=120 {
            let e = s.value(t);
            assert!(e <= prev);
            prev = e;
        }
    }

    #[test]
    fn init_epsilon_rank_selection() {
        assert_eq!(init_epsilon(&[0.0, 1.0, 2.0, 3.0, 4.0], 0.2).unwrap(), 0.0);
        assert_eq!(init_epsilon(&[5.0, 1.0, 9.0, 3.0, 7.0], 0.6).unwrap(), 5.0);
        assert_eq!(init_epsilon(&[0.0, 0.0, 0.0], 0.9).unwrap(), 0.0);
        assert!(init_epsilon(&[], 0.2).is_err());
    }

    fn one_constraint_problem() -> ProblemDefinition {
        ProblemDefinition {
            name: "shift-demo".into(),
            det_vars: vec![],
            random_vars: vec![RandomVar {
                family: Family::Normal,
                std: StdSpec::Fixed(1.0),
                bounds: Bounds::new(-100.0, 100.0),
                values: None,
            }],
            random_params: vec![],
            objective: Arc::new(|_, x| x[0]),
            probabilistic: vec![ProbabilisticConstraint {
                name: "g".into(),
                target_pf: std_normal_cdf(-3.0),
                g: Arc::new(|_, x, _| x[0] - 2.0),
            }],
            deterministic: vec![],
            violation_exponent: 2,
        }
    }

    #[test]
    fn shift_point_linear_normal() {
        // g = x − 2, x ~ N(μ, 1), β = 3 ⇒ x̄ = μ − 3
        let p = one_constraint_problem();
        let s = shift_point(&p, 0, &[5.0]).unwrap();
        assert!((s.x[0] - 2.0).abs() < 1e-9);
        assert_eq!(s.constraint_index, 0);
    }

    #[test]
    fn violation_zero_iff_shifted_feasible() {
        let p = one_constraint_problem();
        // x̄ = μ − 3: feasible for μ ≥ 5, violated below
        assert_eq!(constraint_violation(&p, &[5.5]).unwrap(), 0.0);
        let nu = constraint_violation(&p, &[3.0]).unwrap();
        assert!((nu - 4.0).abs() < 1e-9, "min(0, -2)² should be 4, got {nu}");
    }

    #[test]
    fn violation_counts_deterministic_constraints() {
        let mut p = one_constraint_problem();
        p.deterministic.push(crate::problem::DeterministicConstraint {
            name: "h".into(),
            h: Arc::new(|_, x, _| x[0] - 10.0),
        });
        assert_eq!(constraint_violation(&p, &[6.0]).unwrap(), 0.0);
        let nu = constraint_violation(&p, &[12.0]).unwrap();
        assert!((nu - 4.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_gradient_falls_back_to_mean_point() {
        let mut p = one_constraint_problem();
        p.probabilistic[0].g = Arc::new(|_, _, _| 0.25);
        // α = 0 ⇒ shifted point is the mean point, g = 0.25 ≥ 0 ⇒ ν = 0
        assert_eq!(constraint_violation(&p, &[5.0]).unwrap(), 0.0);
    }
}
