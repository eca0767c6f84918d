//! Directional bat algorithm and the standard bat algorithm baseline, both
//! running under the ε-constraint handling harness on the deterministic
//! problem produced by the reliable-design-space transform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::problem::{EvaluatedSolution, ProblemDefinition, ProblemError};
use crate::rds::{self, EpsilonSchedule, RdsError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Directional bat algorithm: two echolocation pulses plus a shrinking
    /// local random walk.
    Dba,
    /// Classic bat algorithm with velocity state and geometric loudness decay.
    StandardBa,
}

#[derive(Debug, Error)]
pub enum SwarmError {
    #[error("invalid swarm configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Rds(#[from] RdsError),
}

/// Tuning knobs of one trial.
#[derive(Debug, Clone)]
pub struct SwarmConfig {
    pub algorithm: Algorithm,
    /// Population size NB.
    pub population: usize,
    /// Iteration budget t_max.
    pub iterations: u32,
    pub pulse_rate_initial: f64,
    pub pulse_rate_final: f64,
    pub loudness_initial: f64,
    pub loudness_final: f64,
    pub frequency_min: f64,
    pub frequency_max: f64,
    /// ε-schedule exponent cp.
    pub cp: f64,
    /// T_c as a fraction of t_max.
    pub tc_fraction: f64,
    /// θ used when seeding ε⁰ from the initial population.
    pub theta_fraction: f64,
    pub seed: u64,
    /// Use the raw-fitness form of the peer test in the directional move
    /// instead of the ε-comparison.
    pub raw_fitness_branch: bool,
    /// Loudness decay factor of the standard algorithm.
    pub standard_alpha: f64,
    /// Pulse-rate growth constant of the standard algorithm.
    pub standard_gamma: f64,
}

impl Default for SwarmConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Dba,
            population: 50,
            iterations: 1000,
            pulse_rate_initial: 0.1,
            pulse_rate_final: 0.7,
            loudness_initial: 0.9,
            loudness_final: 0.6,
            frequency_min: 0.0,
            frequency_max: 2.0,
            cp: 5.0,
            tc_fraction: 0.95,
            theta_fraction: 0.2,
            seed: 0,
            raw_fitness_branch: false,
            standard_alpha: 0.9,
            standard_gamma: 0.9,
        }
    }
}

impl SwarmConfig {
    pub fn validate(&self) -> Result<(), SwarmError> {
        let bad = |msg: String| Err(SwarmError::InvalidConfig(msg));
        if self.population < 2 {
            return bad(format!("population {} < 2", self.population));
        }
        if self.iterations < 1 {
            return bad("iterations must be >= 1".into());
        }
        if !(0.0 <= self.pulse_rate_initial
            && self.pulse_rate_initial <= self.pulse_rate_final
            && self.pulse_rate_final <= 1.0)
        {
            return bad(format!(
                "pulse rates must satisfy 0 <= r0 <= r_inf <= 1, got {} / {}",
                self.pulse_rate_initial, self.pulse_rate_final
            ));
        }
        if !(0.0 < self.loudness_final && self.loudness_final <= self.loudness_initial) {
            return bad(format!(
                "loudness must satisfy 0 < A_inf <= A0, got {} / {}",
                self.loudness_initial, self.loudness_final
            ));
        }
        if !(self.frequency_min < self.frequency_max) {
            return bad(format!(
                "frequency bounds must satisfy min < max, got {} / {}",
                self.frequency_min, self.frequency_max
            ));
        }
        if !(0.0 < self.tc_fraction && self.tc_fraction <= 1.0) {
            return bad(format!("tc fraction {} outside (0, 1]", self.tc_fraction));
        }
        if !(0.0 < self.theta_fraction && self.theta_fraction <= 1.0) {
            return bad(format!("theta fraction {} outside (0, 1]", self.theta_fraction));
        }
        if !(2.0..=10.0).contains(&self.cp) {
            return bad(format!("cp {} outside [2, 10]", self.cp));
        }
        if !(0.0 < self.standard_alpha && self.standard_alpha < 1.0) {
            return bad(format!("alpha {} outside (0, 1)", self.standard_alpha));
        }
        if !(self.standard_gamma > 0.0) {
            return bad(format!("gamma {} must be positive", self.standard_gamma));
        }
        Ok(())
    }
}

/// One bat of the swarm.
#[derive(Clone, Debug)]
pub struct BatState {
    pub position: Vec<f64>,
    pub fitness: f64,
    pub violation: f64,
    pub pulse_rate: f64,
    pub loudness: f64,
    pub search_width: Vec<f64>,
}

/// One point of the per-iteration convergence trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePoint {
    pub best_fitness: f64,
    pub best_violation: f64,
    pub epsilon: f64,
}

/// Outcome of a single seeded trial.
#[derive(Clone, Debug)]
pub struct TrialResult {
    pub best: EvaluatedSolution,
    pub trace: Vec<TracePoint>,
    pub evaluation_count: u64,
    pub seed: u64,
}

/// Linear parameter schedule with value(1) = start and value(t_max) = end.
pub fn schedule_linear(t: u32, t_max: u32, start: f64, end: f64) -> f64 {
    if t_max <= 1 {
        return end;
    }
    let tm = f64::from(t_max);
    (start - end) / (1.0 - tm) * (f64::from(t) - tm) + end
}

pub fn schedule_r(t: u32, t_max: u32, r0: f64, r_inf: f64) -> f64 {
    schedule_linear(t, t_max, r0, r_inf)
}

pub fn schedule_a(t: u32, t_max: u32, a0: f64, a_inf: f64) -> f64 {
    schedule_linear(t, t_max, a0, a_inf)
}

pub fn schedule_w(t: u32, t_max: u32, w0: &[f64], w_inf: &[f64]) -> Vec<f64> {
    w0.iter()
        .zip(w_inf)
        .map(|(&s, &e)| schedule_linear(t, t_max, s, e))
        .collect()
}

/// Initial local-search widths (U − L)/4 and their final values w0/100.
pub fn width_endpoints(lo: &[f64], hi: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let w0: Vec<f64> = lo.iter().zip(hi).map(|(&l, &u)| (u - l) / 4.0).collect();
    let w_inf: Vec<f64> = w0.iter().map(|w| w / 100.0).collect();
    (w0, w_inf)
}

/// Replace each discrete component by its nearest set member; ties go to the
/// lower value.
pub fn snap_discrete(position: &mut [f64], value_sets: &[Option<&[f64]>]) {
    for (v, set) in position.iter_mut().zip(value_sets) {
        if let Some(set) = set {
            let idx = set.partition_point(|&s| s < *v);
            *v = if idx == 0 {
                set[0]
            } else if idx == set.len() {
                set[set.len() - 1]
            } else {
                let (lo, hi) = (set[idx - 1], set[idx]);
                if *v - lo <= hi - *v {
                    lo
                } else {
                    hi
                }
            };
        }
    }
}

fn clamp_to_bounds(position: &mut [f64], lo: &[f64], hi: &[f64]) {
    for ((v, &l), &u) in position.iter_mut().zip(lo).zip(hi) {
        *v = v.clamp(l, u);
    }
}

/// Directional move with the frequency vectors already drawn: pulls toward
/// the global best and, when the random peer is better, toward the peer too.
pub fn dba_move_with(
    y: &[f64],
    best: &[f64],
    peer: &[f64],
    peer_better: bool,
    phi1: &[f64],
    phi2: &[f64],
    lo: &[f64],
    hi: &[f64],
) -> Vec<f64> {
    let mut out: Vec<f64> = if peer_better {
        y.iter()
            .zip(best)
            .zip(peer)
            .zip(phi1.iter().zip(phi2))
            .map(|(((&yi, &bi), &ki), (&f1, &f2))| yi + (bi - yi) * f1 + (ki - yi) * f2)
            .collect()
    } else {
        y.iter()
            .zip(best)
            .zip(phi1)
            .map(|((&yi, &bi), &f1)| yi + (bi - yi) * f1)
            .collect()
    };
    clamp_to_bounds(&mut out, lo, hi);
    out
}

/// Directional move drawing both frequency vectors uniformly within
/// `phi_bounds`.
pub fn dba_move<R: Rng + ?Sized>(
    y: &[f64],
    best: &[f64],
    peer: &[f64],
    peer_better: bool,
    phi_bounds: (f64, f64),
    lo: &[f64],
    hi: &[f64],
    rng: &mut R,
) -> Vec<f64> {
    let (fmin, fmax) = phi_bounds;
    let n = y.len();
    let phi1: Vec<f64> = (0..n).map(|_| fmin + (fmax - fmin) * rng.random::<f64>()).collect();
    let phi2: Vec<f64> = (0..n).map(|_| fmin + (fmax - fmin) * rng.random::<f64>()).collect();
    dba_move_with(y, best, peer, peer_better, &phi1, &phi2, lo, hi)
}

/// Local random walk with the per-component draws already made.
pub fn local_search_with(
    y: &[f64],
    mean_loudness: f64,
    eta: &[f64],
    width: &[f64],
    lo: &[f64],
    hi: &[f64],
) -> Vec<f64> {
    let mut out: Vec<f64> = y
        .iter()
        .zip(eta.iter().zip(width))
        .map(|(&yi, (&e, &w))| yi + mean_loudness * e * w)
        .collect();
    clamp_to_bounds(&mut out, lo, hi);
    out
}

/// Local random walk around the bat's own position, η ~ U[−1, 1] per
/// component, scaled by the mean loudness and the shrinking width.
pub fn local_search<R: Rng + ?Sized>(
    y: &[f64],
    mean_loudness: f64,
    width: &[f64],
    lo: &[f64],
    hi: &[f64],
    rng: &mut R,
) -> Vec<f64> {
    let eta: Vec<f64> = (0..y.len()).map(|_| rng.random_range(-1.0..=1.0)).collect();
    local_search_with(y, mean_loudness, &eta, width, lo, hi)
}

struct Evaluator<'a> {
    problem: &'a ProblemDefinition,
    count: u64,
}

impl<'a> Evaluator<'a> {
    fn eval(&mut self, y: &[f64]) -> Result<(f64, f64), SwarmError> {
        let sol = rds::evaluate(self.problem, y)?;
        self.count += 1;
        Ok((sol.fitness, sol.violation))
    }
}

struct BestTracker {
    position: Vec<f64>,
    fitness: f64,
    violation: f64,
    feasible: Option<(Vec<f64>, f64)>,
}

impl BestTracker {
    fn new(position: Vec<f64>, fitness: f64, violation: f64) -> Self {
        let feasible = (violation == 0.0).then(|| (position.clone(), fitness));
        Self { position, fitness, violation, feasible }
    }

    fn offer_feasible(&mut self, position: &[f64], fitness: f64, violation: f64) {
        if violation == 0.0 {
            match &self.feasible {
                Some((_, f)) if *f <= fitness => {}
                _ => self.feasible = Some((position.to_vec(), fitness)),
            }
        }
    }

    fn offer_best(&mut self, position: &[f64], fitness: f64, violation: f64, eps: f64) {
        if rds::epsilon_less((fitness, violation), (self.fitness, self.violation), eps) {
            self.position = position.to_vec();
            self.fitness = fitness;
            self.violation = violation;
        }
    }

    /// The reported best: the final ε-best, replaced by the best feasible
    /// candidate ever seen if the ε-best itself ends infeasible.
    fn into_solution(self) -> EvaluatedSolution {
        if self.violation > 0.0 {
            if let Some((position, fitness)) = self.feasible {
                return EvaluatedSolution { position, fitness, violation: 0.0 };
            }
        }
        EvaluatedSolution {
            position: self.position,
            fitness: self.fitness,
            violation: self.violation,
        }
    }
}

fn init_population(
    problem: &ProblemDefinition,
    config: &SwarmConfig,
    lo: &[f64],
    hi: &[f64],
    w0: &[f64],
    initial_pulse_rate: f64,
    rng: &mut ChaCha8Rng,
    ev: &mut Evaluator,
) -> Result<Vec<BatState>, SwarmError> {
    let sets = problem.value_sets();
    let mut bats = Vec::with_capacity(config.population);
    for _ in 0..config.population {
        let mut y: Vec<f64> = lo
            .iter()
            .zip(hi)
            .map(|(&l, &u)| rng.random_range(l..=u))
            .collect();
        snap_discrete(&mut y, &sets);
        let (fitness, violation) = ev.eval(&y)?;
        bats.push(BatState {
            position: y,
            fitness,
            violation,
            pulse_rate: initial_pulse_rate,
            loudness: config.loudness_initial,
            search_width: w0.to_vec(),
        });
    }
    Ok(bats)
}

fn pick_best(bats: &[BatState], eps: f64) -> BestTracker {
    let mut idx = 0;
    for i in 1..bats.len() {
        if rds::epsilon_less(
            (bats[i].fitness, bats[i].violation),
            (bats[idx].fitness, bats[idx].violation),
            eps,
        ) {
            idx = i;
        }
    }
    let mut tracker =
        BestTracker::new(bats[idx].position.clone(), bats[idx].fitness, bats[idx].violation);
    for b in bats {
        tracker.offer_feasible(&b.position, b.fitness, b.violation);
    }
    tracker
}

/// Run one trial with the algorithm selected by the configuration.
pub fn run(problem: &ProblemDefinition, config: &SwarmConfig) -> Result<TrialResult, SwarmError> {
    match config.algorithm {
        Algorithm::Dba => run_dba(problem, config),
        Algorithm::StandardBa => run_standard_ba(problem, config),
    }
}

/// The directional bat algorithm under ε-constraint handling.
///
/// Per bat and iteration: a directional move (two pulses), optionally an
/// extra local-walk candidate when the pulse-rate gate fires (the proposal is
/// the ε-better of the two), discrete snapping, then loudness-gated
/// acceptance against the bat's own previous solution and an unconditional
/// global-best update.
pub fn run_dba(problem: &ProblemDefinition, config: &SwarmConfig) -> Result<TrialResult, SwarmError> {
    config.validate()?;
    problem.validate()?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (lo, hi) = problem.bound_vectors();
    let sets = problem.value_sets();
    let (w0, w_inf) = width_endpoints(&lo, &hi);
    let mut ev = Evaluator { problem, count: 0 };

    let mut bats = init_population(
        problem,
        config,
        &lo,
        &hi,
        &w0,
        config.pulse_rate_initial,
        &mut rng,
        &mut ev,
    )?;

    let violations: Vec<f64> = bats.iter().map(|b| b.violation).collect();
    let eps0 = rds::init_epsilon(&violations, config.theta_fraction)?;
    let schedule = EpsilonSchedule::new(
        eps0,
        config.tc_fraction * f64::from(config.iterations),
        config.cp,
    )?;
    let mut best = pick_best(&bats, schedule.value(0));

    let t_max = config.iterations;
    let mut trace = Vec::with_capacity(t_max as usize);
    for t in 1..=t_max {
        let eps = schedule.value(t);
        let r_t = schedule_r(t, t_max, config.pulse_rate_initial, config.pulse_rate_final);
        let a_t = schedule_a(t, t_max, config.loudness_initial, config.loudness_final);
        let w_t = schedule_w(t, t_max, &w0, &w_inf);
        for i in 0..bats.len() {
            let mean_loudness =
                bats.iter().map(|b| b.loudness).sum::<f64>() / bats.len() as f64;

            let k = {
                let draw = rng.random_range(0..bats.len() - 1);
                if draw >= i {
                    draw + 1
                } else {
                    draw
                }
            };
            let peer_better = if config.raw_fitness_branch {
                bats[k].fitness < bats[i].fitness
            } else {
                rds::epsilon_less(
                    (bats[k].fitness, bats[k].violation),
                    (bats[i].fitness, bats[i].violation),
                    eps,
                )
            };
            let mut candidate = dba_move(
                &bats[i].position,
                &best.position,
                &bats[k].position,
                peer_better,
                (config.frequency_min, config.frequency_max),
                &lo,
                &hi,
                &mut rng,
            );
            snap_discrete(&mut candidate, &sets);
            let (mut cf, mut cv) = ev.eval(&candidate)?;

            if rng.random::<f64>() > bats[i].pulse_rate {
                let mut walked = local_search(
                    &bats[i].position,
                    mean_loudness,
                    &bats[i].search_width,
                    &lo,
                    &hi,
                    &mut rng,
                );
                snap_discrete(&mut walked, &sets);
                let (wf, wv) = ev.eval(&walked)?;
                bats[i].search_width = w_t.clone();
                if rds::epsilon_less((wf, wv), (cf, cv), eps) {
                    candidate = walked;
                    cf = wf;
                    cv = wv;
                }
            }

            let accept = rng.random::<f64>() < bats[i].loudness
                && rds::epsilon_less((cf, cv), (bats[i].fitness, bats[i].violation), eps);
            if accept {
                bats[i].position = candidate.clone();
                bats[i].fitness = cf;
                bats[i].violation = cv;
                bats[i].pulse_rate = r_t;
                bats[i].loudness = a_t;
            }
            // the global best moves even when the bat itself rejected
            best.offer_best(&candidate, cf, cv, eps);
            best.offer_feasible(&candidate, cf, cv);
        }
        trace.push(TracePoint {
            best_fitness: best.fitness,
            best_violation: best.violation,
            epsilon: eps,
        });
    }

    Ok(TrialResult {
        best: best.into_solution(),
        trace,
        evaluation_count: ev.count,
        seed: config.seed,
    })
}

/// The classic bat algorithm under the same ε-constraint harness: velocity
/// update toward the global best, loudness-gated greedy acceptance against
/// the global best, geometric loudness decay and saturating pulse-rate
/// growth.
pub fn run_standard_ba(
    problem: &ProblemDefinition,
    config: &SwarmConfig,
) -> Result<TrialResult, SwarmError> {
    config.validate()?;
    problem.validate()?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (lo, hi) = problem.bound_vectors();
    let sets = problem.value_sets();
    let (w0, _) = width_endpoints(&lo, &hi);
    let mut ev = Evaluator { problem, count: 0 };

    // pulse rates start at r⁰(1 − e⁰) = 0
    let mut bats = init_population(problem, config, &lo, &hi, &w0, 0.0, &mut rng, &mut ev)?;
    let mut velocities = vec![vec![0.0; problem.dimension()]; bats.len()];

    let violations: Vec<f64> = bats.iter().map(|b| b.violation).collect();
    let eps0 = rds::init_epsilon(&violations, config.theta_fraction)?;
    let schedule = EpsilonSchedule::new(
        eps0,
        config.tc_fraction * f64::from(config.iterations),
        config.cp,
    )?;
    let mut best = pick_best(&bats, schedule.value(0));

    let t_max = config.iterations;
    let mut trace = Vec::with_capacity(t_max as usize);
    for t in 1..=t_max {
        let eps = schedule.value(t);
        for i in 0..bats.len() {
            let mean_loudness =
                bats.iter().map(|b| b.loudness).sum::<f64>() / bats.len() as f64;

            let mut candidate = bats[i].position.clone();
            for j in 0..candidate.len() {
                let phi = config.frequency_min
                    + (config.frequency_max - config.frequency_min) * rng.random::<f64>();
                velocities[i][j] += (best.position[j] - bats[i].position[j]) * phi;
                candidate[j] += velocities[i][j];
            }
            clamp_to_bounds(&mut candidate, &lo, &hi);
            snap_discrete(&mut candidate, &sets);
            let (mut cf, mut cv) = ev.eval(&candidate)?;

            if rng.random::<f64>() > bats[i].pulse_rate {
                let mut walked: Vec<f64> = best
                    .position
                    .iter()
                    .map(|&b| b + mean_loudness * rng.random_range(-1.0..=1.0))
                    .collect();
                clamp_to_bounds(&mut walked, &lo, &hi);
                snap_discrete(&mut walked, &sets);
                let (wf, wv) = ev.eval(&walked)?;
                if rds::epsilon_less((wf, wv), (cf, cv), eps) {
                    candidate = walked;
                    cf = wf;
                    cv = wv;
                }
            }

            let beats_best =
                rds::epsilon_less((cf, cv), (best.fitness, best.violation), eps);
            if rng.random::<f64>() < bats[i].loudness && beats_best {
                bats[i].position = candidate.clone();
                bats[i].fitness = cf;
                bats[i].violation = cv;
                bats[i].loudness *= config.standard_alpha;
                bats[i].pulse_rate = config.pulse_rate_initial
                    * (1.0 - (-config.standard_gamma * f64::from(t)).exp());
            }
            best.offer_best(&candidate, cf, cv, eps);
            best.offer_feasible(&candidate, cf, cv);
        }
        trace.push(TracePoint {
            best_fitness: best.fitness,
            best_violation: best.violation,
            epsilon: eps,
        });
    }

    Ok(TrialResult {
        best: best.into_solution(),
        trace,
        evaluation_count: ev.count,
        seed: config.seed,
    })
}

/// Run `trials` independent seeded trials (seed, seed+1, …) in parallel and
/// return them ordered by trial index.
pub fn run_trials(
    problem: &ProblemDefinition,
    config: &SwarmConfig,
    trials: u32,
) -> Result<Vec<TrialResult>, SwarmError> {
    (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut c = config.clone();
            c.seed = config.seed + u64::from(k);
            run(problem, &c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Bounds, ProbabilisticConstraint, RandomVar, StdSpec};
    use crate::stats::{std_normal_cdf, Family};
    use std::sync::Arc;

    #[test]
    fn schedule_endpoints() {
        assert!((schedule_r(1, 1000, 0.1, 0.7) - 0.1).abs() < 1e-12);
        assert!((schedule_r(1000, 1000, 0.1, 0.7) - 0.7).abs() < 1e-12);
        assert!((schedule_a(1, 500, 0.9, 0.6) - 0.9).abs() < 1e-12);
        assert!((schedule_a(500, 500, 0.9, 0.6) - 0.6).abs() < 1e-12);
        // t_max = 1 degenerates to the final endpoint
        assert_eq!(schedule_r(1, 1, 0.1, 0.7), 0.7);
    }

    #[test]
    fn schedule_monotonicity() {
        let mut prev_r = -1.0;
        let mut prev_a = f64::INFINITY;
        for t in 1..=100 {
            let r = schedule_r(t, 100, 0.1, 0.7);
            let a = schedule_a(t, 100, 0.9, 0.6);
            assert!(r >= prev_r && a <= prev_a);
            prev_r = r;
            prev_a = a;
        }
    }

    #[test]
    fn width_endpoints_quarter_span() {
        let (w0, w_inf) = width_endpoints(&[0.1], &[10.0]);
        assert!((w0[0] - 2.475).abs() < 1e-12);
        assert!((w_inf[0] - 0.02475).abs() < 1e-12);
    }

    #[test]
    fn snap_discrete_nearest_and_ties() {
        let set = [2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0, 12.0, 14.0, 15.0, 16.0, 18.0, 20.0, 22.0, 25.0];
        let sets: Vec<Option<&[f64]>> = vec![Some(&set), None];
        let mut y = [6.4, 6.4];
        snap_discrete(&mut y, &sets);
        assert_eq!(y, [6.0, 6.4]);
        let mut y = [6.5, 0.0];
        snap_discrete(&mut y, &sets);
        assert_eq!(y[0], 6.0, "midpoint resolves to the lower value");
        let mut y = [23.9, 0.0];
        snap_discrete(&mut y, &sets);
        assert_eq!(y[0], 25.0);
        let mut y = [-3.0, 0.0];
        snap_discrete(&mut y, &sets);
        assert_eq!(y[0], 2.0);
        let mut y = [99.0, 0.0];
        snap_discrete(&mut y, &sets);
        assert_eq!(y[0], 25.0);
    }

    #[test]
    fn dba_move_fixed_points() {
        let lo = [-10.0, -10.0];
        let hi = [10.0, 10.0];
        // zero frequencies leave the bat in place
        let y = [1.0, 2.0];
        let out = dba_move_with(&y, &[5.0, 5.0], &[0.0, 0.0], true, &[0.0, 0.0], &[0.0, 0.0], &lo, &hi);
        assert_eq!(out, vec![1.0, 2.0]);
        // at the best with a worse peer, any phi1 is a fixed point
        let out = dba_move_with(&[5.0, 5.0], &[5.0, 5.0], &[9.0, 9.0], false, &[1.7, 0.3], &[0.9, 0.9], &lo, &hi);
        assert_eq!(out, vec![5.0, 5.0]);
    }

    #[test]
    fn dba_move_direct_arithmetic() {
        let out = dba_move_with(
            &[0.0, 0.0],
            &[1.0, 1.0],
            &[2.0, 0.0],
            true,
            &[1.0, 1.0],
            &[0.5, 0.5],
            &[-10.0, -10.0],
            &[10.0, 10.0],
        );
        assert_eq!(out, vec![2.0, 1.0]);
    }

    #[test]
    fn local_search_bounds_and_arithmetic() {
        let out = local_search_with(&[3.0], 1.0, &[0.5], &[2.0], &[-10.0], &[10.0]);
        assert!((out[0] - 4.0).abs() < 1e-12);
        let out = local_search_with(&[3.0], 1.0, &[0.0], &[0.0], &[-10.0], &[10.0]);
        assert_eq!(out[0], 3.0);
    }

    #[test]
    fn local_search_displacement_is_uniform() {
        // Kolmogorov–Smirnov check of the one-component displacement against
        // U[−⟨A⟩w, ⟨A⟩w].
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let (mean_a, w) = (0.8, 2.0);
        let n = 10_000;
        let mut disp: Vec<f64> = (0..n)
            .map(|_| local_search(&[0.0], mean_a, &[w], &[-100.0], &[100.0], &mut rng)[0])
            .collect();
        disp.sort_by(f64::total_cmp);
        let span = mean_a * w;
        let mut ks: f64 = 0.0;
        for (i, &d) in disp.iter().enumerate() {
            assert!(d.abs() <= span + 1e-12);
            let cdf = (d + span) / (2.0 * span);
            let emp_hi = (i + 1) as f64 / n as f64;
            let emp_lo = i as f64 / n as f64;
            ks = ks.max((cdf - emp_hi).abs()).max((cdf - emp_lo).abs());
        }
        // 1% critical value 1.63/√n ≈ 0.0163
        assert!(ks < 0.0163, "KS statistic {ks}");
    }

    fn sphere_problem(n: usize) -> ProblemDefinition {
        ProblemDefinition {
            name: "sphere".into(),
            det_vars: vec![Bounds::new(-5.0, 5.0); n],
            random_vars: vec![],
            random_params: vec![],
            objective: Arc::new(|d, _| d.iter().map(|v| v * v).sum()),
            probabilistic: vec![],
            deterministic: vec![],
            violation_exponent: 2,
        }
    }

    #[test]
    fn dba_minimizes_sphere() {
        let problem = sphere_problem(5);
        let config = SwarmConfig { population: 30, iterations: 500, seed: 3, ..Default::default() };
        let result = run_dba(&problem, &config).unwrap();
        assert!(result.best.fitness <= 1e-6, "sphere best {}", result.best.fitness);
        assert_eq!(result.best.violation, 0.0);
    }

    #[test]
    fn trace_shape_and_final_epsilon() {
        let problem = sphere_problem(3);
        let config = SwarmConfig { population: 10, iterations: 40, seed: 1, ..Default::default() };
        let result = run_dba(&problem, &config).unwrap();
        assert_eq!(result.trace.len(), 40);
        assert_eq!(result.trace.last().unwrap().epsilon, 0.0);
        // ε column nonincreasing
        let mut prev = f64::INFINITY;
        for p in &result.trace {
            assert!(p.epsilon <= prev);
            prev = p.epsilon;
        }
    }

    #[test]
    fn determinism_bit_identical_traces() {
        let problem = constrained_problem();
        let config = SwarmConfig { population: 12, iterations: 60, seed: 99, ..Default::default() };
        let a = run_dba(&problem, &config).unwrap();
        let b = run_dba(&problem, &config).unwrap();
        assert_eq!(a.evaluation_count, b.evaluation_count);
        assert_eq!(a.best.position, b.best.position);
        for (pa, pb) in a.trace.iter().zip(&b.trace) {
            assert_eq!(pa.best_fitness.to_bits(), pb.best_fitness.to_bits());
            assert_eq!(pa.best_violation.to_bits(), pb.best_violation.to_bits());
            assert_eq!(pa.epsilon.to_bits(), pb.epsilon.to_bits());
        }
        let c = run_standard_ba(&problem, &config).unwrap();
        let d = run_standard_ba(&problem, &config).unwrap();
        assert_eq!(c.best.position, d.best.position);
        assert_eq!(c.evaluation_count, d.evaluation_count);
    }

    fn constrained_problem() -> ProblemDefinition {
        // minimize x₁ + x₂ with one reliability constraint keeping the
        // shifted product x₁·x₂ above 4
        ProblemDefinition {
            name: "toy-constrained".into(),
            det_vars: vec![],
            random_vars: vec![
                RandomVar {
                    family: Family::Normal,
                    std: StdSpec::Fixed(0.1),
                    bounds: Bounds::new(0.5, 8.0),
                    values: None,
                },
                RandomVar {
                    family: Family::Normal,
                    std: StdSpec::Fixed(0.1),
                    bounds: Bounds::new(0.5, 8.0),
                    values: None,
                },
            ],
            random_params: vec![],
            objective: Arc::new(|_, x| x[0] + x[1]),
            probabilistic: vec![ProbabilisticConstraint {
                name: "g".into(),
                target_pf: std_normal_cdf(-2.0),
                g: Arc::new(|_, x, _| x[0] * x[1] - 4.0),
            }],
            deterministic: vec![],
            violation_exponent: 2,
        }
    }

    #[test]
    fn evaluation_count_matches_exact_accounting() {
        let problem = constrained_problem();
        let config = SwarmConfig { population: 8, iterations: 50, seed: 7, ..Default::default() };
        let result = run_dba(&problem, &config).unwrap();
        // NB·(1 + t_max·(1 + fired-fraction)): the count equals initial
        // evaluations plus one per move plus one per fired local search.
        let base = 8 * (1 + 50);
        let fired = result.evaluation_count - base as u64;
        let fraction = fired as f64 / (8.0 * 50.0);
        assert_eq!(
            result.evaluation_count,
            (8.0 * (1.0 + 50.0 * (1.0 + fraction))).round() as u64
        );
        // early pulse rates are low, so walks fire most of the time
        assert!(fraction > 0.2 && fraction < 1.0, "fired fraction {fraction}");
    }

    #[test]
    fn constrained_toy_converges_feasible() {
        let problem = constrained_problem();
        let config = SwarmConfig { population: 20, iterations: 300, seed: 11, ..Default::default() };
        let result = run_dba(&problem, &config).unwrap();
        assert_eq!(result.best.violation, 0.0);
        // optimum sits where the shifted constraint is active at x₁ = x₂
        assert!((result.best.fitness - result.best.position.iter().sum::<f64>()).abs() < 1e-12);
        assert!(result.best.fitness < 4.45, "fitness {}", result.best.fitness);
    }

    #[test]
    fn positions_respect_bounds_and_discrete_sets() {
        let mut problem = constrained_problem();
        problem.random_vars[1].values = Some((1..=16).map(f64::from).collect());
        problem.random_vars[1].bounds = Bounds::new(1.0, 16.0);
        let config = SwarmConfig { population: 10, iterations: 80, seed: 21, ..Default::default() };
        let result = run_dba(&problem, &config).unwrap();
        let y = &result.best.position;
        assert!(y[0] >= 0.5 && y[0] <= 8.0);
        assert_eq!(y[1], y[1].round());
        assert!(y[1] >= 1.0 && y[1] <= 16.0);
    }

    #[test]
    fn standard_ba_schedules() {
        // Eq. 19/20 anchors
        assert!((0.9f64 * 0.9 - 0.81).abs() < 1e-15);
        let r_limit = 0.1 * (1.0 - (-0.9f64 * 1e9).exp());
        assert!((r_limit - 0.1).abs() < 1e-12);
    }

    #[test]
    fn standard_ba_runs_and_stays_feasible() {
        let problem = constrained_problem();
        let config = SwarmConfig {
            algorithm: Algorithm::StandardBa,
            population: 20,
            iterations: 300,
            seed: 4,
            ..Default::default()
        };
        let result = run_standard_ba(&problem, &config).unwrap();
        assert_eq!(result.trace.len(), 300);
        assert_eq!(result.best.violation, 0.0);
    }

    #[test]
    fn invalid_config_rejected_before_any_evaluation() {
        let problem = sphere_problem(2);
        let mut config = SwarmConfig::default();
        config.population = 1;
        assert!(matches!(run(&problem, &config), Err(SwarmError::InvalidConfig(_))));
        let mut config = SwarmConfig::default();
        config.pulse_rate_initial = 0.9;
        config.pulse_rate_final = 0.2;
        assert!(run(&problem, &config).is_err());
        let mut config = SwarmConfig::default();
        config.loudness_final = 0.0;
        assert!(run(&problem, &config).is_err());
        let mut config = SwarmConfig::default();
        config.frequency_min = 2.0;
        config.frequency_max = 2.0;
        assert!(run(&problem, &config).is_err());
    }

    #[test]
    fn run_trials_is_ordered_and_seeded() {
        let problem = sphere_problem(2);
        let config = SwarmConfig { population: 8, iterations: 30, seed: 100, ..Default::default() };
        let results = run_trials(&problem, &config, 4).unwrap();
        assert_eq!(results.len(), 4);
        for (k, r) in results.iter().enumerate() {
            assert_eq!(r.seed, 100 + k as u64);
        }
        // trial 2 standalone reproduces the batched trial 2
        let mut single = config.clone();
        single.seed = 102;
        let alone = run(&problem, &single).unwrap();
        assert_eq!(alone.best.position, results[2].best.position);
    }
}
