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

//! Empirical checks of the per-round concentration events.
//!
//! Each round `i` gets a nominal window `(1-eps)^(2(i-1)) (1 +- gamma_i) D`
//! for palette sizes and c-degrees, and `eps +- eps^2` for the fraction of a
//! neighborhood that was sampled. The slack widens both windows relative to
//! their own scale: `gamma_i + slack` for the first, `eps^2 + slack * eps` for
//! the second.

use serde::{Deserialize, Serialize};

use crate::nibble::RoundTrace;
use crate::params::Params;

/// Fraction of `xs` inside `[lo, hi]`; 1 for an empty sample.
fn pass_fraction<I: IntoIterator<Item = f64>>(xs: I, lo: f64, hi: f64) -> (f64, usize) {
    let mut n = 0usize;
    let mut ok = 0usize;
    for x in xs {
        n += 1;
        if x >= lo - 1e-9 && x <= hi + 1e-9 {
            ok += 1;
        }
    }
    if n == 0 {
        (1.0, 0)
    } else {
        (ok as f64 / n as f64, n)
    }
}

fn range<I: IntoIterator<Item = f64>>(xs: I) -> Option<(f64, f64)> {
    xs.into_iter().fold(None, |acc, x| match acc {
        None => Some((x, x)),
        Some((a, b)) => Some((a.min(x), b.max(x))),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundEvents {
    pub round: usize,
    /// Unwidened window `(1-eps)^(2(i-1)) (1 +- gamma_i) D`.
    pub target: (f64, f64),
    /// Window after slack.
    pub envelope: (f64, f64),
    pub palette_range: Option<(f64, f64)>,
    pub palette_samples: usize,
    pub palette_pass: f64,
    pub c_degree_range: Option<(f64, f64)>,
    pub c_degree_samples: usize,
    pub c_degree_pass: f64,
    /// Window for sampled fractions after slack.
    pub sampled_envelope: (f64, f64),
    pub sampled_range: Option<(f64, f64)>,
    /// Node neighborhoods and `(v, c)` neighborhoods pooled.
    pub sampled_samples: usize,
    pub sampled_pass: f64,
    pub node_sampled_pass: f64,
    pub c_sampled_pass: f64,
    /// `Delta(G_{F_i})` and the bound it is held to.
    pub failed_max_degree: usize,
    pub failed_bound: f64,
}

impl RoundEvents {
    pub fn min_pass(&self) -> f64 {
        self.palette_pass
            .min(self.c_degree_pass)
            .min(self.sampled_pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventReport {
    pub slack: f64,
    pub rounds: Vec<RoundEvents>,
}

impl EventReport {
    /// Pooled pass fractions over all rounds: (palettes, c-degrees, sampled).
    pub fn pooled(&self) -> (f64, f64, f64) {
        let pool = |f: fn(&RoundEvents) -> (f64, usize)| {
            let (mut ok, mut n) = (0.0, 0usize);
            for r in &self.rounds {
                let (p, k) = f(r);
                ok += p * k as f64;
                n += k;
            }
            if n == 0 {
                1.0
            } else {
                ok / n as f64
            }
        };
        (
            pool(|r| (r.palette_pass, r.palette_samples)),
            pool(|r| (r.c_degree_pass, r.c_degree_samples)),
            pool(|r| (r.sampled_pass, r.sampled_samples)),
        )
    }

    pub fn min_pass(&self) -> f64 {
        self.rounds
            .iter()
            .map(RoundEvents::min_pass)
            .fold(1.0, f64::min)
    }

    pub fn failed_degree_ok(&self) -> bool {
        self.rounds
            .iter()
            .all(|r| r.failed_max_degree as f64 <= r.failed_bound + 1e-9)
    }

    pub fn passes(&self, threshold: f64) -> bool {
        self.min_pass() >= threshold
    }
}

/// Checks the samples stored in `trace` against the windows of `params`.
///
/// Rounds without stored samples report vacuous pass fractions of 1 with
/// zero sample counts. The failure bound is `9 eps^2 D + 3 sqrt(D ln n)`.
pub fn verify_events(trace: &[RoundTrace], params: &Params, slack: f64) -> EventReport {
    let eps = params.epsilon;
    let d = params.delta as f64;
    let failed_bound = 9.0 * eps * eps * d + 3.0 * (d * (params.n.max(2) as f64).ln()).sqrt();
    let s_lo = eps - (eps * eps + slack * eps);
    let s_hi = eps + (eps * eps + slack * eps);
    let rounds = trace
        .iter()
        .map(|t| {
            let center = params.envelope_center(t.round);
            let g = params.gamma_at(t.round);
            let target = (center * (1.0 - g), center * (1.0 + g));
            let envelope = (center * (1.0 - g - slack), center * (1.0 + g + slack));
            let empty = Default::default();
            let s = t.samples.as_ref().unwrap_or(&empty);
            let pal = s.palette_sizes.iter().map(|&x| x as f64);
            let cdeg = s.c_degrees.iter().map(|&x| x as f64);
            let (palette_pass, palette_samples) =
                pass_fraction(pal.clone(), envelope.0, envelope.1);
            let (c_degree_pass, c_degree_samples) =
                pass_fraction(cdeg.clone(), envelope.0, envelope.1);
            let pooled = s
                .sampled_fractions
                .iter()
                .chain(&s.c_sampled_fractions)
                .copied();
            let (sampled_pass, sampled_samples) = pass_fraction(pooled.clone(), s_lo, s_hi);
            let (node_sampled_pass, _) =
                pass_fraction(s.sampled_fractions.iter().copied(), s_lo, s_hi);
            let (c_sampled_pass, _) =
                pass_fraction(s.c_sampled_fractions.iter().copied(), s_lo, s_hi);
            RoundEvents {
                round: t.round,
                target,
                envelope,
                palette_range: range(pal),
                palette_samples,
                palette_pass,
                c_degree_range: range(cdeg),
                c_degree_samples,
                c_degree_pass,
                sampled_envelope: (s_lo, s_hi),
                sampled_range: range(pooled),
                sampled_samples,
                sampled_pass,
                node_sampled_pass,
                c_sampled_pass,
                failed_max_degree: t.failed_max_degree,
                failed_bound,
            }
        })
        .collect();
    EventReport { slack, rounds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nibble::RoundSamples;

    fn trace(palettes: Vec<usize>, fractions: Vec<f64>) -> RoundTrace {
        RoundTrace {
            round: 1,
            live: 0,
            sampled: 0,
            failed: 0,
            palette_min: 0,
            palette_max: 0,
            palette_mean: 0.0,
            c_degree_min: 0,
            c_degree_max: 0,
            failed_max_degree: 0,
            samples: Some(RoundSamples {
                palette_sizes: palettes,
                c_degrees: vec![100, 100],
                c_sampled_fractions: vec![],
                sampled_fractions: fractions,
                failed_fractions: vec![],
            }),
        }
    }

    #[test]
    fn round_one_windows() {
        let p = Params::custom(1000, 100, 0.1, 1, 5).unwrap();
        // gamma_1 = 0.01: window [99, 101] before slack.
        let r = verify_events(&[trace(vec![101, 100, 120], vec![0.1, 0.2])], &p, 0.0);
        let r0 = &r.rounds[0];
        assert!((r0.target.0 - 99.0).abs() < 1e-9);
        assert!((r0.palette_pass - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(r0.c_degree_pass, 1.0);
        assert_eq!(r0.sampled_pass, 0.5);
        let wide = verify_events(&[trace(vec![120], vec![0.1, 0.2])], &p, 2.0);
        assert_eq!(wide.rounds[0].min_pass(), 1.0);
    }

    #[test]
    fn missing_samples_are_vacuous() {
        let p = Params::custom(10, 4, 0.1, 1, 3).unwrap();
        let mut t = trace(vec![], vec![]);
        t.samples = None;
        let r = verify_events(&[t], &p, 0.1);
        assert_eq!(r.rounds[0].palette_samples, 0);
        assert_eq!(r.min_pass(), 1.0);
    }
}
