//! Multi-trial statistics in the layout the result tables use.

use thiserror::Error;

use crate::problem::EvaluatedSolution;
use crate::swarm::TrialResult;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("at least one trial is required")]
    NoTrials,
}

/// Order statistics and moments of the per-trial final fitness values.
#[derive(Debug, Clone, PartialEq)]
pub struct StatsSummary {
    pub best: f64,
    pub median: f64,
    pub worst: f64,
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator), 0 for a single trial.
    pub std_dev: f64,
    pub mean_violation: f64,
    /// Per-trial best designs, ordered by trial index.
    pub per_trial: Vec<EvaluatedSolution>,
}

/// Summarize a batch of trials. The median of an even count is the
/// lower-middle order statistic.
pub fn summarize(trials: &[TrialResult]) -> Result<StatsSummary, ReportError> {
    if trials.is_empty() {
        return Err(ReportError::NoTrials);
    }
    let finals: Vec<f64> = trials.iter().map(|t| t.best.fitness).collect();
    let mut sorted = finals.clone();
    sorted.sort_by(f64::total_cmp);

    let n = sorted.len();
    let mean = finals.iter().sum::<f64>() / n as f64;
    let std_dev = if n > 1 {
        (finals.iter().map(|f| (f - mean) * (f - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let mean_violation = trials.iter().map(|t| t.best.violation).sum::<f64>() / n as f64;

    Ok(StatsSummary {
        best: sorted[0],
        median: sorted[(n - 1) / 2],
        worst: sorted[n - 1],
        mean,
        std_dev,
        mean_violation,
        per_trial: trials.iter().map(|t| t.best.clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(fitness: f64, violation: f64) -> TrialResult {
        TrialResult {
            best: EvaluatedSolution { position: vec![fitness], fitness, violation },
            trace: vec![],
            evaluation_count: 0,
            seed: 0,
        }
    }

    #[test]
    fn hand_arithmetic_three_trials() {
        let s = summarize(&[trial(3.0, 0.0), trial(1.0, 0.0), trial(2.0, 0.0)]).unwrap();
        assert_eq!(s.best, 1.0);
        assert_eq!(s.median, 2.0);
        assert_eq!(s.worst, 3.0);
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.std_dev, 1.0);
        assert_eq!(s.mean_violation, 0.0);
    }

    #[test]
    fn single_trial_collapses() {
        let s = summarize(&[trial(7.0, 0.25)]).unwrap();
        assert_eq!((s.best, s.median, s.worst, s.mean), (7.0, 7.0, 7.0, 7.0));
        assert_eq!(s.std_dev, 0.0);
        assert_eq!(s.mean_violation, 0.25);
    }

    #[test]
    fn even_count_takes_lower_middle() {
        let s = summarize(&[trial(4.0, 0.0), trial(1.0, 0.0), trial(3.0, 0.0), trial(2.0, 0.0)])
            .unwrap();
        assert_eq!(s.median, 2.0);
    }

    #[test]
    fn cross_check_against_independent_statistics() {
        // second implementation: one-pass accumulators over 25 synthetic finals
        let finals: Vec<f64> = (0..25).map(|k| 10.0 + ((k * 7919) % 97) as f64 / 10.0).collect();
        let trials: Vec<TrialResult> = finals.iter().map(|&f| trial(f, 0.0)).collect();
        let s = summarize(&trials).unwrap();

        let n = finals.len() as f64;
        let sum: f64 = finals.iter().sum();
        let sumsq: f64 = finals.iter().map(|f| f * f).sum();
        let mean = sum / n;
        let var = (sumsq - n * mean * mean) / (n - 1.0);
        assert!((s.mean - mean).abs() < 1e-12);
        assert!((s.std_dev - var.sqrt()).abs() < 1e-10);
        let mut sorted = finals;
        sorted.sort_by(f64::total_cmp);
        assert_eq!(s.best, sorted[0]);
        assert_eq!(s.worst, sorted[24]);
        assert_eq!(s.median, sorted[12]);
        assert!(s.best <= s.median && s.median <= s.worst);
    }

    #[test]
    fn empty_batch_is_an_error() {
        assert!(matches!(summarize(&[]), Err(ReportError::NoTrials)));
    }
}
