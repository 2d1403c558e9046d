// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use serde::{Deserialize, Serialize};

use super::state::{StepReport, UpdateReport};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RecourseStats {
    pub updates: usize,
    pub mean: f64,
    pub max: usize,
    /// `histogram[r]`: updates with recourse exactly `r`.
    pub histogram: Vec<usize>,
    pub mean_dummy: f64,
    pub mean_simplecolor_events: f64,
    /// Mean per real update of the round-`i` dirty-set size, entry `i - 1`.
    pub mean_dirty_per_round: Vec<f64>,
}

pub fn recourse_stats(reports: &[UpdateReport]) -> RecourseStats {
    let n = reports.len();
    if n == 0 {
        return RecourseStats::default();
    }
    let max = reports.iter().map(|r| r.recourse).max().unwrap_or(0);
    let mut histogram = vec![0usize; max + 1];
    for r in reports {
        histogram[r.recourse] += 1;
    }
    let rounds = reports[0].dirty_per_round.len();
    let mut dirty = vec![0.0; rounds];
    for r in reports {
        for (acc, &d) in dirty.iter_mut().zip(&r.dirty_per_round) {
            *acc += d as f64;
        }
    }
    let nf = n as f64;
    RecourseStats {
        updates: n,
        mean: reports.iter().map(|r| r.recourse as f64).sum::<f64>() / nf,
        max,
        histogram,
        mean_dummy: reports.iter().map(|r| r.dummy_recourse as f64).sum::<f64>() / nf,
        mean_simplecolor_events: reports
            .iter()
            .map(|r| r.simplecolor_events as f64)
            .sum::<f64>()
            / nf,
        mean_dirty_per_round: dirty.into_iter().map(|d| d / nf).collect(),
    }
}

/// Dirty-set growth across rounds, measured per padded-graph update.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirtyRound {
    pub round: usize,
    pub mean: f64,
    /// Standard error of `mean`.
    pub std_err: f64,
    /// Mean of the total dirty count over earlier rounds.
    pub mean_before: f64,
    /// `6 eps (1 + mean_before)`.
    pub bound: f64,
    /// `mean <= bound + 3 std_err`.
    pub holds: bool,
}

pub fn dirty_recursion<'a, I>(steps: I, epsilon: f64) -> Vec<DirtyRound>
where
    I: IntoIterator<Item = &'a StepReport>,
{
    let steps: Vec<&StepReport> = steps.into_iter().collect();
    let Some(first) = steps.first() else {
        return Vec::new();
    };
    let rounds = first.dirty_per_round.len();
    let n = steps.len() as f64;
    (0..rounds)
        .map(|i| {
            let xs = steps.iter().map(|s| s.dirty_per_round[i] as f64);
            let mean = xs.clone().sum::<f64>() / n;
            let var = if steps.len() > 1 {
                xs.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            let std_err = (var / n).sqrt();
            let mean_before = steps
                .iter()
                .map(|s| s.dirty_per_round[..i].iter().sum::<usize>() as f64)
                .sum::<f64>()
                / n;
            let bound = 6.0 * epsilon * (1.0 + mean_before);
            DirtyRound {
                round: i + 1,
                mean,
                std_err,
                mean_before,
                bound,
                holds: mean <= bound + 3.0 * std_err,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep(recourse: usize, dirty: Vec<usize>) -> UpdateReport {
        UpdateReport {
            recourse,
            dirty_per_round: dirty,
            ..Default::default()
        }
    }

    #[test]
    fn histogram_sums_to_updates() {
        let rs = vec![rep(0, vec![0, 0]), rep(2, vec![0, 1]), rep(2, vec![0, 3])];
        let s = recourse_stats(&rs);
        assert_eq!(s.histogram, vec![1, 0, 2]);
        assert_eq!(s.histogram.iter().sum::<usize>(), 3);
        assert_eq!(s.max, 2);
        assert!((s.mean - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(s.mean_dirty_per_round, vec![0.0, 4.0 / 3.0]);
    }

    #[test]
    fn quiet_run_has_zero_dirty_sets() {
        let steps: Vec<StepReport> = (0..5)
            .map(|_| StepReport {
                dirty_per_round: vec![0, 0, 0],
                ..Default::default()
            })
            .collect();
        let rows = dirty_recursion(&steps, 0.2);
        assert!(rows.iter().all(|r| r.mean == 0.0 && r.holds));
    }
}
