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

//! Distribution comparisons.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{ColoringError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TvResult {
    pub tv: f64,
    pub n_a: usize,
    pub n_b: usize,
}

fn counts<T: Hash + Eq + Clone>(xs: &[T]) -> HashMap<T, usize> {
    let mut m = HashMap::new();
    for x in xs {
        *m.entry(x.clone()).or_insert(0) += 1;
    }
    m
}

/// Half the L1 distance between the empirical pmfs of `a` and `b`.
pub fn tv_distance<T: Hash + Eq + Clone>(a: &[T], b: &[T]) -> Result<TvResult> {
    if a.is_empty() || b.is_empty() {
        return Err(ColoringError::EmptySamples);
    }
    let (ca, cb) = (counts(a), counts(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut l1 = 0.0;
    for (k, &x) in &ca {
        let y = cb.get(k).copied().unwrap_or(0);
        l1 += (x as f64 / na - y as f64 / nb).abs();
    }
    for (k, &y) in &cb {
        if !ca.contains_key(k) {
            l1 += y as f64 / nb;
        }
    }
    Ok(TvResult {
        tv: (0.5 * l1).min(1.0),
        n_a: a.len(),
        n_b: b.len(),
    })
}

/// TV distance between the empirical pmf of `samples` and an exact pmf.
/// Mass of `pmf` missing from the samples counts in full.
pub fn tv_to_pmf<T: Hash + Eq + Clone>(samples: &[T], pmf: &HashMap<T, f64>) -> Result<f64> {
    if samples.is_empty() {
        return Err(ColoringError::EmptySamples);
    }
    let c = counts(samples);
    let n = samples.len() as f64;
    let mut l1 = 0.0;
    for (k, &p) in pmf {
        l1 += (c.get(k).copied().unwrap_or(0) as f64 / n - p).abs();
    }
    for (k, &x) in &c {
        if !pmf.contains_key(k) {
            l1 += x as f64 / n;
        }
    }
    Ok((0.5 * l1).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquare {
    pub fn rejects(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// Pearson goodness of fit of `observed` counts against `expected`
/// probabilities (renormalized). Cells with zero expectation must be empty.
pub fn chi_square_gof(observed: &[u64], expected: &[f64]) -> Result<ChiSquare> {
    if observed.len() != expected.len() || observed.len() < 2 {
        return Err(ColoringError::InvalidParams(
            "need matching count and probability vectors of length >= 2".into(),
        ));
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(ColoringError::EmptySamples);
    }
    let mass: f64 = expected.iter().sum();
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&o, &p) in observed.iter().zip(expected) {
        let e = total as f64 * p / mass;
        if e <= 0.0 {
            if o > 0 {
                return Ok(ChiSquare {
                    statistic: f64::INFINITY,
                    dof: observed.len() - 1,
                    p_value: 0.0,
                });
            }
            continue;
        }
        cells += 1;
        stat += (o as f64 - e).powi(2) / e;
    }
    let dof = cells.saturating_sub(1).max(1);
    let dist = ChiSquared::new(dof as f64).expect("positive dof");
    Ok(ChiSquare {
        statistic: stat,
        dof,
        p_value: 1.0 - dist.cdf(stat),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tv_extremes() {
        let a = [1, 2, 3, 3];
        assert_eq!(tv_distance(&a, &a).unwrap().tv, 0.0);
        assert_eq!(tv_distance(&[1, 1], &[2]).unwrap().tv, 1.0);
        assert_eq!(
            tv_distance::<u8>(&[], &[1]),
            Err(ColoringError::EmptySamples)
        );
    }

    #[test]
    fn tv_half_overlap() {
        let r = tv_distance(&[0, 1], &[1, 2]).unwrap();
        assert!((r.tv - 0.5).abs() < 1e-12);
        let pmf: HashMap<u8, f64> = [(0, 0.5), (1, 0.5)].into_iter().collect();
        assert!((tv_to_pmf(&[0u8, 0, 1, 1], &pmf).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn chi_square_fit() {
        let ok = chi_square_gof(&[250, 248, 251, 251], &[0.25; 4]).unwrap();
        assert!(!ok.rejects(0.01));
        let bad = chi_square_gof(&[400, 200, 200, 200], &[0.25; 4]).unwrap();
        assert!(bad.rejects(0.01));
        assert_eq!(chi_square_gof(&[1, 0], &[1.0, 0.0]).unwrap().dof, 1);
    }
}
