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

//! Parameters shared by every nibble-style algorithm in the crate.

use serde::{Deserialize, Serialize};

use crate::error::{ColoringError, Result};

/// Default constant in the round-count formula.
pub const DEFAULT_K: u32 = 48;

/// `ceil((1 + eps^2) * delta)`, ignoring float noise below 1e-9.
pub fn phase_one_colors(epsilon: f64, delta: usize) -> usize {
    let x = (1.0 + epsilon * epsilon) * delta as f64;
    (x - 1e-9).ceil().max(0.0) as usize
}

/// `floor(ln(1/eps) / (2 K eps))`.
pub fn round_count(epsilon: f64, k: u32) -> usize {
    let t = (1.0 / epsilon).ln() / (2.0 * k as f64 * epsilon);
    if t.is_finite() && t > 0.0 {
        (t + 1e-12).floor() as usize
    } else {
        0
    }
}

/// Error envelope: `g_1 = K eps^2`, `g_{i+1} = (1 + K eps) g_i + K eps^2`.
pub fn gamma_sequence(epsilon: f64, k: u32, len: usize) -> Vec<f64> {
    let k = k as f64;
    let mut out = Vec::with_capacity(len);
    let mut g = k * epsilon * epsilon;
    for _ in 0..len {
        out.push(g);
        g = (1.0 + k * epsilon) * g + k * epsilon * epsilon;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub delta: usize,
    pub epsilon: f64,
    pub k: u32,
    /// Number of rounds `t_eps`; phase one runs `t_eps - 1` of them.
    pub t_eps: usize,
    /// Size `C` of the phase-one palette `[C]`.
    pub phase1_colors: usize,
    /// `gamma[i - 1]` is the envelope width of round `i`, for `i in 1..=t_eps`.
    pub gamma: Vec<f64>,
    /// Whether `1e-4 >= eps >= 10 (ln n / delta)^(1/6)` holds. Informational.
    pub regime_holds: bool,
}

impl Params {
    /// Derives all quantities from `(n, delta, eps, K)`.
    pub fn derive(n: usize, delta: usize, epsilon: f64, k: u32) -> Result<Params> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(ColoringError::InvalidEpsilon {
                epsilon,
                reason: "must lie in (0, 1)".into(),
            });
        }
        check_common(delta, k)?;
        let t_eps = round_count(epsilon, k);
        if t_eps == 0 {
            return Err(ColoringError::InvalidEpsilon {
                epsilon,
                reason: format!("ln(1/eps)/(2*{k}*eps) < 1, so there are no rounds"),
            });
        }
        Ok(Self::assemble(n, delta, epsilon, k, t_eps))
    }

    /// Same as [`Params::derive`] but with an explicit round count. Accepts
    /// `eps = 0`, which gives a phase one that never samples.
    pub fn custom(n: usize, delta: usize, epsilon: f64, k: u32, t_eps: usize) -> Result<Params> {
        if !(0.0..1.0).contains(&epsilon) {
            return Err(ColoringError::InvalidEpsilon {
                epsilon,
                reason: "must lie in [0, 1)".into(),
            });
        }
        check_common(delta, k)?;
        if t_eps == 0 {
            return Err(ColoringError::InvalidParams(
                "t_eps must be at least 1".into(),
            ));
        }
        Ok(Self::assemble(n, delta, epsilon, k, t_eps))
    }

    fn assemble(n: usize, delta: usize, epsilon: f64, k: u32, t_eps: usize) -> Params {
        let lower = if delta > 0 && n > 1 {
            10.0 * ((n as f64).ln() / delta as f64).powf(1.0 / 6.0)
        } else {
            f64::INFINITY
        };
        Params {
            n,
            delta,
            epsilon,
            k,
            t_eps,
            phase1_colors: phase_one_colors(epsilon, delta),
            gamma: gamma_sequence(epsilon, k, t_eps),
            regime_holds: epsilon <= 1e-4 && epsilon >= lower,
        }
    }

    /// Number of sampling rounds in phase one (`t_eps - 1`).
    pub fn phase_one_rounds(&self) -> usize {
        self.t_eps - 1
    }

    /// `gamma_i` for 1-based round `i`.
    pub fn gamma_at(&self, round: usize) -> f64 {
        self.gamma[round - 1]
    }

    /// Nominal palette size of round `i`: `(1 - eps)^(2(i-1)) * delta`.
    pub fn envelope_center(&self, round: usize) -> f64 {
        (1.0 - self.epsilon).powi(2 * (round as i32 - 1)) * self.delta as f64
    }
}

fn check_common(delta: usize, k: u32) -> Result<()> {
    if delta == 0 {
        return Err(ColoringError::InvalidParams(
            "delta must be at least 1".into(),
        ));
    }
    if k == 0 {
        return Err(ColoringError::InvalidParams("K must be at least 1".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_reference_values() {
        let p = Params::derive(10_000, 1000, 0.01, 48).unwrap();
        assert_eq!(p.t_eps, 4);
        assert_eq!(p.phase1_colors, 1001);
        assert!((p.gamma[0] - 0.0048).abs() < 1e-12);
        assert!((p.gamma[1] - 0.011904).abs() < 1e-12);
        assert_eq!(p.gamma.len(), 4);
        assert!(!p.regime_holds);
    }

    #[test]
    fn k_one_round_count() {
        let p = Params::derive(100, 1000, 0.1, 1).unwrap();
        assert_eq!(p.t_eps, 11);
    }

    #[test]
    fn too_large_epsilon_rejected() {
        assert!(matches!(
            Params::derive(100, 1000, 0.9, 48),
            Err(ColoringError::InvalidEpsilon { .. })
        ));
        assert!(Params::derive(100, 1000, 0.0, 1).is_err());
        assert!(Params::derive(100, 0, 0.1, 1).is_err());
    }

    #[test]
    fn integral_products_do_not_gain_a_color() {
        assert_eq!(phase_one_colors(0.1, 300), 303);
        assert_eq!(phase_one_colors(0.05, 500), 502);
        assert_eq!(phase_one_colors(0.0, 7), 7);
    }

    #[test]
    fn gamma_stays_below_sqrt_eps_when_rounds_follow_formula() {
        for &(eps, k) in &[(1e-4, 48u32), (0.001, 48), (0.01, 10)] {
            let p = Params::derive(1 << 20, 1 << 30, eps, k).unwrap();
            for &g in &p.gamma {
                assert!(g <= eps.sqrt() + 1e-12, "eps={eps} k={k} g={g}");
            }
        }
    }

    #[test]
    fn custom_allows_degenerate_epsilon() {
        let p = Params::custom(10, 4, 0.0, 1, 5).unwrap();
        assert_eq!(p.phase1_colors, 4);
        assert_eq!(p.phase_one_rounds(), 4);
        assert!(Params::custom(10, 4, 0.1, 1, 0).is_err());
    }
}
