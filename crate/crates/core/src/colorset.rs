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

//! Per-node color sets packed as rows of a flat bit matrix.
//!
//! Bit `c - 1` of row `v` stands for color `c`, so a row covers colors
//! `1..=width`.

use crate::graph::{Color, NodeId};

#[derive(Debug, Clone)]
pub struct ColorMatrix {
    words: Vec<u64>,
    words_per_row: usize,
    width: usize,
}

impl ColorMatrix {
    pub fn new(rows: usize, width: usize) -> Self {
        let words_per_row = width.div_ceil(64).max(1);
        ColorMatrix {
            words: vec![0; rows * words_per_row],
            words_per_row,
            width,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    fn row(&self, v: NodeId) -> &[u64] {
        let s = v as usize * self.words_per_row;
        &self.words[s..s + self.words_per_row]
    }

    #[inline]
    fn row_mut(&mut self, v: NodeId) -> &mut [u64] {
        let s = v as usize * self.words_per_row;
        &mut self.words[s..s + self.words_per_row]
    }

    #[inline]
    pub fn contains(&self, v: NodeId, c: Color) -> bool {
        debug_assert!(c >= 1 && c as usize <= self.width);
        let b = (c - 1) as usize;
        self.row(v)[b / 64] >> (b % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: NodeId, c: Color) {
        debug_assert!(c >= 1 && c as usize <= self.width);
        let b = (c - 1) as usize;
        self.row_mut(v)[b / 64] |= 1 << (b % 64);
    }

    pub fn clear_all(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    /// `self[v] |= other[v]` for every row, then clears `other`.
    pub fn absorb(&mut self, other: &mut ColorMatrix) {
        debug_assert_eq!(self.words.len(), other.words.len());
        for (a, b) in self.words.iter_mut().zip(other.words.iter_mut()) {
            *a |= *b;
            *b = 0;
        }
    }

    /// Number of colors present in row `v`.
    pub fn count(&self, v: NodeId) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    fn tail_mask(&self, word: usize) -> u64 {
        let last = self.words_per_row - 1;
        if word < last || self.width.is_multiple_of(64) {
            u64::MAX
        } else {
            (1u64 << (self.width % 64)) - 1
        }
    }

    /// Number of colors in `1..=width` absent from both rows.
    pub fn count_free(&self, u: NodeId, v: NodeId) -> usize {
        let (ru, rv) = (self.row(u), self.row(v));
        (0..self.words_per_row)
            .map(|i| (!(ru[i] | rv[i]) & self.tail_mask(i)).count_ones() as usize)
            .sum()
    }

    /// The `k`-th (0-based, ascending) color absent from both rows.
    pub fn nth_free(&self, u: NodeId, v: NodeId, mut k: usize) -> Option<Color> {
        let (ru, rv) = (self.row(u), self.row(v));
        for i in 0..self.words_per_row {
            let mut free = !(ru[i] | rv[i]) & self.tail_mask(i);
            let n = free.count_ones() as usize;
            if k >= n {
                k -= n;
                continue;
            }
            for _ in 0..k {
                free &= free - 1;
            }
            return Some((i * 64 + free.trailing_zeros() as usize + 1) as Color);
        }
        None
    }

    /// All colors absent from both rows, ascending.
    pub fn free_colors(&self, u: NodeId, v: NodeId) -> Vec<Color> {
        let (ru, rv) = (self.row(u), self.row(v));
        let mut out = Vec::new();
        for i in 0..self.words_per_row {
            let mut free = !(ru[i] | rv[i]) & self.tail_mask(i);
            while free != 0 {
                out.push((i * 64 + free.trailing_zeros() as usize + 1) as Color);
                free &= free - 1;
            }
        }
        out
    }
}

/// First-fit color search above a band floor over per-node sorted color
/// lists. Used by every greedy stage.
#[derive(Debug, Clone, Default)]
pub struct FirstFit {
    used: Vec<Vec<Color>>,
}

impl FirstFit {
    pub fn new(nodes: usize) -> Self {
        FirstFit {
            used: vec![Vec::new(); nodes],
        }
    }

    pub fn used(&self, v: NodeId) -> &[Color] {
        &self.used[v as usize]
    }

    /// Smallest color `> floor` missing at both endpoints.
    pub fn smallest_free(&self, u: NodeId, v: NodeId, floor: Color) -> Color {
        let (a, b) = (&self.used[u as usize], &self.used[v as usize]);
        let mut i = a.partition_point(|&c| c <= floor);
        let mut j = b.partition_point(|&c| c <= floor);
        let mut cand = floor + 1;
        loop {
            while i < a.len() && a[i] < cand {
                i += 1;
            }
            while j < b.len() && b[j] < cand {
                j += 1;
            }
            let hit = (i < a.len() && a[i] == cand) || (j < b.len() && b[j] == cand);
            if !hit {
                return cand;
            }
            cand += 1;
        }
    }

    pub fn occupy(&mut self, u: NodeId, v: NodeId, c: Color) {
        for x in [u, v] {
            let list = &mut self.used[x as usize];
            let pos = list.partition_point(|&y| y < c);
            debug_assert!(list.get(pos) != Some(&c), "color {c} already used at {x}");
            list.insert(pos, c);
        }
    }

    pub fn release(&mut self, u: NodeId, v: NodeId, c: Color) {
        for x in [u, v] {
            let list = &mut self.used[x as usize];
            if let Ok(pos) = list.binary_search(&c) {
                list.remove(pos);
            }
        }
    }

    /// Picks the first-fit color above `floor` and records it.
    pub fn assign(&mut self, u: NodeId, v: NodeId, floor: Color) -> Color {
        let c = self.smallest_free(u, v, floor);
        self.occupy(u, v, c);
        c
    }
}

/// A set of colors `1..=width`, used for single-edge palettes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Palette {
    words: Vec<u64>,
    width: usize,
}

impl Palette {
    pub fn empty(width: usize) -> Self {
        Palette {
            words: vec![0; width.div_ceil(64).max(1)],
            width,
        }
    }

    /// All of `1..=width`.
    pub fn full(width: usize) -> Self {
        let mut p = Self::empty(width);
        for c in 1..=width {
            p.insert(c as Color);
        }
        p
    }

    pub fn from_colors(width: usize, colors: &[Color]) -> Self {
        let mut p = Self::empty(width);
        for &c in colors {
            p.insert(c);
        }
        p
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn contains(&self, c: Color) -> bool {
        if c == 0 || c as usize > self.width {
            return false;
        }
        let b = (c - 1) as usize;
        self.words[b / 64] >> (b % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, c: Color) {
        let b = (c - 1) as usize;
        self.words[b / 64] |= 1 << (b % 64);
    }

    /// Removes `c`; colors outside `1..=width` are ignored.
    #[inline]
    pub fn remove(&mut self, c: Color) {
        if c == 0 || c as usize > self.width {
            return;
        }
        let b = (c - 1) as usize;
        self.words[b / 64] &= !(1 << (b % 64));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// The `k`-th smallest member (0-based).
    pub fn nth(&self, mut k: usize) -> Option<Color> {
        for (i, &w) in self.words.iter().enumerate() {
            let ones = w.count_ones() as usize;
            if k < ones {
                let mut w = w;
                for _ in 0..k {
                    w &= w - 1;
                }
                return Some((i * 64 + w.trailing_zeros() as usize + 1) as Color);
            }
            k -= ones;
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = Color> + '_ {
        (1..=self.width as Color).filter(move |&c| self.contains(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn palette_membership_and_rank() {
        let mut p = Palette::full(130);
        assert_eq!(p.len(), 130);
        p.remove(1);
        p.remove(65);
        p.remove(0);
        p.remove(200);
        assert_eq!(p.len(), 128);
        assert_eq!(p.nth(0), Some(2));
        assert_eq!(p.nth(63), Some(66));
        assert_eq!(p.nth(127), Some(130));
        assert_eq!(p.nth(128), None);
        assert!(!p.contains(65) && p.contains(66));
        let q = Palette::from_colors(130, &p.iter().collect::<Vec<_>>());
        assert_eq!(p, q);
        assert!(Palette::empty(3).is_empty());
    }

    #[test]
    fn free_colors_across_word_boundary() {
        let mut m = ColorMatrix::new(2, 70);
        m.insert(0, 1);
        m.insert(1, 64);
        m.insert(1, 70);
        assert_eq!(m.count_free(0, 1), 67);
        let free = m.free_colors(0, 1);
        assert_eq!(free.len(), 67);
        assert_eq!(free[0], 2);
        assert!(!free.contains(&64));
        assert_eq!(*free.last().unwrap(), 69);
        for (k, &c) in free.iter().enumerate() {
            assert_eq!(m.nth_free(0, 1, k), Some(c));
        }
        assert_eq!(m.nth_free(0, 1, 67), None);
    }

    #[test]
    fn first_fit_skips_used() {
        let mut ff = FirstFit::new(3);
        assert_eq!(ff.assign(0, 1, 5), 6);
        assert_eq!(ff.assign(1, 2, 5), 7);
        assert_eq!(ff.assign(0, 2, 5), 8);
        ff.release(0, 1, 6);
        assert_eq!(ff.smallest_free(0, 1, 5), 6);
        assert_eq!(ff.smallest_free(0, 1, 0), 1);
    }
}
