// SPDX-License-Identifier: Apache-2.0

use crate::recognizer::RankingResult;

/// Number of trailing observations over which the true goal stays top ranked.
///
/// Zero when the true goal is not top ranked on the final observation.
pub fn convergence_metric(rankings: &[RankingResult], true_goal: usize) -> usize {
    let n = rankings.len();
    let since = rankings
        .iter()
        .rposition(|r| !r.is_top_ranked(true_goal))
        .map_or(0, |i| i + 1);
    n - since
}

/// Fraction of observations after which the true goal is top ranked.
pub fn ranked_first_fraction(rankings: &[RankingResult], true_goal: usize) -> f64 {
    if rankings.is_empty() {
        return 0.0;
    }
    let hits = rankings
        .iter()
        .filter(|r| r.is_top_ranked(true_goal))
        .count();
    hits as f64 / rankings.len() as f64
}

/// Relative increase of a cost, in percent. `None` when the reference is 0.
pub fn cost_deterioration(scattered: f64, clustered: f64) -> Option<f64> {
    (scattered != 0.0).then(|| 100.0 * (clustered - scattered) / scattered)
}

/// Relative drop of a performance metric, in percent. `None` when the reference is 0.
pub fn performance_deterioration(scattered: f64, clustered: f64) -> Option<f64> {
    (scattered != 0.0).then(|| 100.0 * (scattered - clustered) / scattered)
}
