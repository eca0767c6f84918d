//! Post-hoc reliability verification of candidate designs.
//!
//! The reliability index is found by the improved Hasofer-Lind–Rackwitz-
//! Fiessler iteration in standard-normal space; the second-order correction
//! multiplies the first-order failure probability by Π(1 + βκ_j)^{-1/2} over
//! the principal curvatures of the limit surface at the most probable point;
//! crude Monte Carlo estimates P(g < 0) directly by sampling the marginals.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::problem::{LimitStateFn, ProblemDefinition};
use crate::rds::{self, RdsError};
use crate::stats::{std_normal_cdf, std_normal_quantile, DistributionSpec, Family, StatsError};

const MAX_FORM_ITERATIONS: usize = 200;
const STEP_TOLERANCE: f64 = 1e-8;
const G_TOLERANCE: f64 = 1e-8;
const GRADIENT_STEP: f64 = 1e-6;
const HESSIAN_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Form,
    SormBreitung,
    Mcs,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Form => "form",
            Method::SormBreitung => "sorm-breitung",
            Method::Mcs => "mcs",
        }
    }
}

/// Reliability of one limit state for one design.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityReport {
    pub constraint_index: usize,
    pub method: Method,
    pub beta: f64,
    pub pf: f64,
    /// Most probable point in standard-normal space (empty for Monte Carlo).
    pub mpp_u: Vec<f64>,
    pub mcs_samples: u64,
    pub mcs_stderr: f64,
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("iteration did not converge within {iterations} steps (last ‖u‖ = {beta:.6}, G = {g:.3e})")]
    NonConvergence { iterations: usize, beta: f64, g: f64, last_u: Vec<f64> },
    #[error("gradient vanished at the iterate; most probable point is undefined")]
    DegenerateGradient,
    #[error("curvature correction undefined: 1 + βκ = {0:.3e} is not positive")]
    CurvatureDomain(f64),
    #[error("second-order correction needs a converged first-order report with β > 0")]
    FormRequired,
    #[error("Monte Carlo needs at least 1000 samples, got {0}")]
    TooFewSamples(u64),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Rds(#[from] RdsError),
}

/// g(d, x(u), p(u)) over the stochastic coordinates only; deterministic
/// quantities stay at their point values.
struct USpace<'a> {
    g: &'a LimitStateFn,
    d: &'a [f64],
    x_dists: &'a [DistributionSpec],
    p_dists: &'a [DistributionSpec],
    /// (is_param, index) per stochastic u-coordinate
    coords: Vec<(bool, usize)>,
}

impl<'a> USpace<'a> {
    fn new(g: &'a LimitStateFn, d: &'a [f64], x_dists: &'a [DistributionSpec], p_dists: &'a [DistributionSpec]) -> Self {
        let mut coords = Vec::new();
        for (j, dist) in x_dists.iter().enumerate() {
            if dist.family() != Family::Deterministic {
                coords.push((false, j));
            }
        }
        for (j, dist) in p_dists.iter().enumerate() {
            if dist.family() != Family::Deterministic {
                coords.push((true, j));
            }
        }
        Self { g, d, x_dists, p_dists, coords }
    }

    fn dim(&self) -> usize {
        self.coords.len()
    }

    fn eval(&self, u: &[f64]) -> f64 {
        let mut x: Vec<f64> = self.x_dists.iter().map(|d| d.mean()).collect();
        let mut p: Vec<f64> = self.p_dists.iter().map(|d| d.mean()).collect();
        for (k, &(is_param, j)) in self.coords.iter().enumerate() {
            if is_param {
                p[j] = self.p_dists[j].from_u(u[k]);
            } else {
                x[j] = self.x_dists[j].from_u(u[k]);
            }
        }
        (self.g)(self.d, &x, &p)
    }

    fn gradient(&self, u: &[f64]) -> Vec<f64> {
        let mut grad = vec![0.0; u.len()];
        let mut probe = u.to_vec();
        for k in 0..u.len() {
            let h = GRADIENT_STEP * u[k].abs().max(1.0);
            probe[k] = u[k] + h;
            let hi = self.eval(&probe);
            probe[k] = u[k] - h;
            let lo = self.eval(&probe);
            probe[k] = u[k];
            grad[k] = (hi - lo) / (2.0 * h);
        }
        grad
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// First-order reliability analysis of one limit state.
///
/// Improved HL-RF: the classic update with merit-guarded step halving.
/// Converged when the step shrinks below 1e-8 and |G| ≤ 1e-8·(1 + |G(0)|).
/// β is the distance to the most probable point, signed negative when the
/// mean point already fails.
pub fn form_beta(
    g: &LimitStateFn,
    d: &[f64],
    x_dists: &[DistributionSpec],
    p_dists: &[DistributionSpec],
) -> Result<ReliabilityReport, VerifyError> {
    let space = USpace::new(g, d, x_dists, p_dists);
    let n = space.dim();
    let mut u = vec![0.0; n];
    let g0 = space.eval(&u);
    let g_tol = G_TOLERANCE * (1.0 + g0.abs());
    let mean_failed = g0 < 0.0;

    let mut g_val = g0;
    for _ in 0..MAX_FORM_ITERATIONS {
        let grad = space.gradient(&u);
        let grad_norm = norm(&grad);
        if grad_norm < 1e-14 {
            return Err(VerifyError::DegenerateGradient);
        }
        let scale = (dot(&grad, &u) - g_val) / (grad_norm * grad_norm);
        let target: Vec<f64> = grad.iter().map(|&gk| scale * gk).collect();

        // merit-guarded backtracking toward the HL-RF target
        let merit_c = 2.0 * norm(&u) / grad_norm + 10.0;
        let merit = |v: &[f64], gv: f64| 0.5 * dot(v, v) + merit_c * gv.abs();
        let m0 = merit(&u, g_val);
        let mut lambda = 1.0;
        let mut next = u.clone();
        let mut g_next = g_val;
        for _ in 0..30 {
            let cand: Vec<f64> = u
                .iter()
                .zip(&target)
                .map(|(&uk, &tk)| uk + lambda * (tk - uk))
                .collect();
            let gc = space.eval(&cand);
            if merit(&cand, gc) <= m0 || lambda < 1e-6 {
                next = cand;
                g_next = gc;
                break;
            }
            lambda *= 0.5;
        }

        let step = u
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        u = next;
        g_val = g_next;
        if step <= STEP_TOLERANCE && g_val.abs() <= g_tol {
            let distance = norm(&u);
            let beta = if mean_failed { -distance } else { distance };
            return Ok(ReliabilityReport {
                constraint_index: 0,
                method: Method::Form,
                beta,
                pf: std_normal_cdf(-beta),
                mpp_u: u,
                mcs_samples: 0,
                mcs_stderr: 0.0,
            });
        }
    }
    Err(VerifyError::NonConvergence {
        iterations: MAX_FORM_ITERATIONS,
        beta: norm(&u),
        g: g_val,
        last_u: u,
    })
}

/// Second-order (curvature-corrected) failure probability from a converged
/// first-order report: pf = Φ(−β)·Π(1 + βκ_j)^{-1/2}.
///
/// The κ_j are eigenvalues of the limit-surface Hessian at the most probable
/// point, projected on the tangent space and scaled by ‖∇G‖.
pub fn sorm_breitung(
    form: &ReliabilityReport,
    g: &LimitStateFn,
    d: &[f64],
    x_dists: &[DistributionSpec],
    p_dists: &[DistributionSpec],
) -> Result<ReliabilityReport, VerifyError> {
    if form.method != Method::Form || !(form.beta > 0.0) || form.mpp_u.is_empty() {
        return Err(VerifyError::FormRequired);
    }
    let space = USpace::new(g, d, x_dists, p_dists);
    let n = space.dim();
    let u_star = &form.mpp_u;
    let beta = form.beta;

    if n == 1 {
        // no tangent directions: the correction is empty
        return Ok(ReliabilityReport { method: Method::SormBreitung, ..form.clone() });
    }

    let grad = space.gradient(u_star);
    // failure-pointing normal; at a converged MPP this is u*/β
    let s = -dot(&grad, u_star) / beta;
    if !(s > 0.0) {
        return Err(VerifyError::DegenerateGradient);
    }

    // full Hessian by central second differences
    let mut hess = DMatrix::zeros(n, n);
    let h = HESSIAN_STEP;
    let g_center = space.eval(u_star);
    let mut probe = u_star.clone();
    for i in 0..n {
        probe[i] = u_star[i] + h;
        let hi = space.eval(&probe);
        probe[i] = u_star[i] - h;
        let lo = space.eval(&probe);
        probe[i] = u_star[i];
        hess[(i, i)] = (hi - 2.0 * g_center + lo) / (h * h);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut val = 0.0;
            for (si, sj, sign) in [(h, h, 1.0), (h, -h, -1.0), (-h, h, -1.0), (-h, -h, 1.0)] {
                probe[i] = u_star[i] + si;
                probe[j] = u_star[j] + sj;
                val += sign * space.eval(&probe);
                probe[i] = u_star[i];
                probe[j] = u_star[j];
            }
            let second = val / (4.0 * h * h);
            hess[(i, j)] = second;
            hess[(j, i)] = second;
        }
    }

    // Gram-Schmidt tangent basis orthogonal to α = u*/β
    let alpha: Vec<f64> = u_star.iter().map(|v| v / beta).collect();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
    for k in 0..n {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        let a = dot(&v, &alpha);
        for (vi, &ai) in v.iter_mut().zip(&alpha) {
            *vi -= a * ai;
        }
        for b in &basis {
            let c = dot(&v, b);
            for (vi, &bi) in v.iter_mut().zip(b) {
                *vi -= c * bi;
            }
        }
        let len = norm(&v);
        if len > 1e-8 {
            for vi in &mut v {
                *vi /= len;
            }
            basis.push(v);
            if basis.len() == n - 1 {
                break;
            }
        }
    }

    // project: A = T H Tᵀ / s, curvatures are its eigenvalues
    let m = basis.len();
    let mut projected = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let mut acc = 0.0;
            for a in 0..n {
                for b in 0..n {
                    acc += basis[i][a] * hess[(a, b)] * basis[j][b];
                }
            }
            projected[(i, j)] = acc / s;
        }
    }
    let eigen = projected.symmetric_eigen();

    let mut correction = 1.0;
    for kappa in eigen.eigenvalues.iter() {
        let factor = 1.0 + beta * kappa;
        if !(factor > 0.0) {
            return Err(VerifyError::CurvatureDomain(factor));
        }
        correction /= factor.sqrt();
    }
    let pf = (std_normal_cdf(-beta) * correction).clamp(0.0, 1.0);
    let corrected_beta = if pf > 0.0 { -std_normal_quantile(pf)? } else { f64::INFINITY };
    Ok(ReliabilityReport {
        constraint_index: form.constraint_index,
        method: Method::SormBreitung,
        beta: corrected_beta,
        pf,
        mpp_u: form.mpp_u.clone(),
        mcs_samples: 0,
        mcs_stderr: 0.0,
    })
}

/// Crude Monte Carlo estimate of P(g < 0) with a seeded stream.
pub fn mcs_pf(
    g: &LimitStateFn,
    d: &[f64],
    x_dists: &[DistributionSpec],
    p_dists: &[DistributionSpec],
    n_samples: u64,
    seed: u64,
) -> Result<ReliabilityReport, VerifyError> {
    if n_samples < 1000 {
        return Err(VerifyError::TooFewSamples(n_samples));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; x_dists.len()];
    let mut p = vec![0.0; p_dists.len()];
    let mut failures = 0u64;
    for _ in 0..n_samples {
        for (xi, dist) in x.iter_mut().zip(x_dists) {
            *xi = dist.sample(&mut rng);
        }
        for (pi, dist) in p.iter_mut().zip(p_dists) {
            *pi = dist.sample(&mut rng);
        }
        if g(d, &x, &p) < 0.0 {
            failures += 1;
        }
    }
    let pf = failures as f64 / n_samples as f64;
    let stderr = (pf * (1.0 - pf) / n_samples as f64).sqrt();
    let beta = if pf <= 0.0 {
        f64::INFINITY
    } else if pf >= 1.0 {
        f64::NEG_INFINITY
    } else {
        -std_normal_quantile(pf)?
    };
    Ok(ReliabilityReport {
        constraint_index: 0,
        method: Method::Mcs,
        beta,
        pf,
        mpp_u: Vec::new(),
        mcs_samples: n_samples,
        mcs_stderr: stderr,
    })
}

/// Fraction of uniform box samples that fall in the reliable design space
/// (ν = 0).
pub fn feasible_space_fraction(
    problem: &ProblemDefinition,
    n_samples: u64,
    seed: u64,
) -> Result<f64, VerifyError> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = problem.bound_vectors();
    let mut y = vec![0.0; problem.dimension()];
    let mut feasible = 0u64;
    for _ in 0..n_samples {
        for ((yi, &l), &u) in y.iter_mut().zip(&lo).zip(&hi) {
            *yi = rng.random_range(l..=u);
        }
        if rds::constraint_violation(problem, &y)? == 0.0 {
            feasible += 1;
        }
    }
    Ok(feasible as f64 / n_samples as f64)
}
