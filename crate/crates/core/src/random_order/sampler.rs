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

use rand::Rng;
use rand_distr::{Binomial, Distribution};

/// Cumulative cut points `b_1 <= ... <= b_rounds` with
/// `b_i - b_{i-1} ~ Bin(total - b_{i-1}, eps)`.
///
/// If the items arrive in uniformly random order, the items at positions
/// `(b_{i-1}, b_i]` form a sample of the items after `b_{i-1}` that contains
/// each of them independently with probability `eps`.
pub fn binomial_prefix_partition<R: Rng + ?Sized>(
    total: usize,
    epsilon: f64,
    rounds: usize,
    rng: &mut R,
) -> Vec<usize> {
    let mut out = Vec::with_capacity(rounds);
    let mut cut = 0usize;
    for _ in 0..rounds {
        let rest = (total - cut) as u64;
        let x = Binomial::new(rest, epsilon)
            .expect("epsilon in [0, 1]")
            .sample(rng);
        cut += x as usize;
        out.push(cut);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn extremes() {
        let mut rng = rng_from_seed(1);
        assert_eq!(binomial_prefix_partition(50, 0.0, 4, &mut rng), vec![0; 4]);
        let b = binomial_prefix_partition(50, 1.0, 3, &mut rng);
        assert_eq!(b, vec![50, 50, 50]);
        assert!(binomial_prefix_partition(0, 0.5, 2, &mut rng)
            .iter()
            .all(|&x| x == 0));
    }

    #[test]
    fn boundaries_are_monotone_and_bounded() {
        let mut rng = rng_from_seed(4);
        for _ in 0..200 {
            let b = binomial_prefix_partition(1000, 0.3, 8, &mut rng);
            assert!(b.windows(2).all(|w| w[0] <= w[1]));
            assert!(*b.last().unwrap() <= 1000);
        }
    }
}
