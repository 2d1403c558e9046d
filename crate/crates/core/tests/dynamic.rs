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

use nibble_color::dynamic::{
    capped_geometric, recourse_stats, DynamicColoring, DynamicConfig, RoundAssignment, SweepMode,
};
use nibble_color::error::ColoringError;
use nibble_color::generators::{gen_update_sequence, Update, UpdateSequenceParams};
use nibble_color::graph::NULL_COLOR;
use proptest::prelude::*;

fn plain(n: usize, delta: usize, eps: f64, t_eps: usize, seed: u64) -> DynamicConfig {
    DynamicConfig {
        t_eps: Some(t_eps),
        gadget: false,
        check: true,
        ..DynamicConfig::new(n, delta, eps, 1, seed)
    }
}

#[test]
fn last_round_edge_only_touches_the_fallback() {
    let cfg = plain(6, 3, 0.2, 4, 1);
    let mut ra = RoundAssignment::new(1, 0.2, 4);
    ra.set(0, 1, 4);
    let mut s = DynamicColoring::with_rounds(cfg, ra).unwrap();
    let r = s.apply(Update::Insert(0, 1)).unwrap();
    assert_eq!(r.recourse, 0);
    assert_eq!(r.simplecolor_events, 1);
    assert_eq!(s.final_color(0, 1), Some(s.phase1_colors() as u32 + 1));
    assert_eq!(s.tentative(0, 1), Some(NULL_COLOR));
}

#[test]
fn deletion_without_palette_effect_has_no_recourse() {
    let cfg = plain(6, 3, 0.2, 4, 2);
    let mut ra = RoundAssignment::new(2, 0.2, 4);
    ra.set(0, 1, 1);
    ra.set(2, 3, 2);
    ra.set(1, 4, 4);
    let mut s = DynamicColoring::with_rounds(cfg, ra).unwrap();
    for up in [
        Update::Insert(0, 1),
        Update::Insert(2, 3),
        Update::Insert(1, 4),
    ] {
        s.apply(up).unwrap();
    }
    let r = s.apply(Update::Delete(2, 3)).unwrap();
    assert_eq!(r.recourse, 0);
    assert!(r.dirty_per_round.iter().all(|&d| d == 0));
    assert!(s.verify().valid);
}

#[test]
fn rounds_survive_reinsertion() {
    let cfg = plain(10, 4, 0.3, 5, 3);
    let mut s = DynamicColoring::new(cfg).unwrap();
    let r0 = s.round_of(2, 7);
    s.apply(Update::Insert(2, 7)).unwrap();
    s.apply(Update::Delete(2, 7)).unwrap();
    s.apply(Update::Insert(7, 2)).unwrap();
    assert_eq!(s.round_of(2, 7), r0);
}

#[test]
fn capped_geometric_frequencies() {
    // eps = 1/2, t = 3: (1/2, 1/4, 1/4)
    let ra = RoundAssignment::new(11, 0.5, 3);
    let mut hist = [0usize; 4];
    let trials = 100_000u32;
    for v in 1..=trials {
        hist[ra.round(0, v)] += 1;
    }
    let f: Vec<f64> = hist[1..]
        .iter()
        .map(|&h| h as f64 / trials as f64)
        .collect();
    for (got, want) in f.iter().zip([0.5, 0.25, 0.25]) {
        assert!((got - want).abs() < 0.01, "{f:?}");
    }
    assert_eq!(capped_geometric(0.3, 0.5, 1), 1);
}

#[test]
fn gadget_keeps_padded_degrees() {
    let mut cfg = DynamicConfig::new(8, 3, 0.2, 1, 4);
    cfg.t_eps = Some(4);
    cfg.check = true;
    let mut s = DynamicColoring::new(cfg).unwrap();
    let ups = [
        Update::Insert(0, 1),
        Update::Insert(0, 2),
        Update::Insert(1, 2),
        Update::Delete(0, 1),
        Update::Insert(3, 0),
    ];
    for up in ups {
        s.apply(up).unwrap();
        let g = s.graph();
        for x in 0..g.node_count() as u32 {
            let d = g.degree(x);
            assert!(d == 3 || d == 2, "node {x} has padded degree {d}");
        }
        assert!(s.verify().valid);
        assert!(s.bands_ok());
    }
    assert_eq!(s.real_graph().edge_count(), 3);
    s.apply(Update::Insert(0, 4)).unwrap();
    assert_eq!(
        s.apply(Update::Insert(0, 5)).unwrap_err(),
        ColoringError::GadgetExhausted(0)
    );
}

#[test]
fn update_reports_serialize_as_json_lines() {
    let cfg = plain(5, 2, 0.3, 3, 5);
    let mut s = DynamicColoring::new(cfg).unwrap();
    let r = s.apply(Update::Insert(0, 1)).unwrap();
    let line = serde_json::to_string(&r).unwrap();
    for key in [
        "\"t\":1",
        "\"op\":\"+ 0 1\"",
        "\"recourse\"",
        "\"dirty_per_round\"",
        "\"simplecolor_events\"",
        "\"colors_in_use\"",
    ] {
        assert!(line.contains(key), "{line}");
    }
    assert!(!line.contains('\n'));
}

#[test]
fn proper_after_every_update_with_gadget() {
    let ups = gen_update_sequence(&UpdateSequenceParams {
        n: 40,
        delta: 6,
        length: 600,
        churn: 0.4,
        warmup: None,
        seed: 9,
    })
    .unwrap();
    let mut cfg = DynamicConfig::new(40, 6, 0.2, 1, 12);
    cfg.check = true;
    let mut s = DynamicColoring::new(cfg).unwrap();
    let mut reports = Vec::new();
    for &up in &ups {
        reports.push(s.apply(up).unwrap());
        assert!(s.verify().valid);
    }
    let st = recourse_stats(&reports);
    assert_eq!(st.histogram.iter().sum::<usize>(), ups.len());
}

fn run_mode(
    mode: SweepMode,
    gadget: bool,
    seed: u64,
    ups: &[Update],
    n: usize,
    delta: usize,
) -> Vec<String> {
    let mut cfg = DynamicConfig::new(n, delta, 0.25, 1, seed);
    cfg.t_eps = Some(5);
    cfg.gadget = gadget;
    cfg.mode = mode;
    cfg.check = true;
    let mut s = DynamicColoring::new(cfg).unwrap();
    let mut trace = Vec::new();
    for &up in ups {
        let r = s.apply(up).unwrap();
        let mut state: Vec<_> = s
            .graph()
            .edges()
            .map(|(_, a, b)| {
                (
                    a,
                    b,
                    s.tentative(a, b),
                    s.is_failed(a, b),
                    s.final_color(a, b),
                )
            })
            .collect();
        state.sort_unstable();
        trace.push(format!(
            "{}|{:?}",
            serde_json::to_string(&r).unwrap(),
            state
        ));
    }
    trace
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cone_matches_full_sweep(seed in 0u64..10_000, gseed in 0u64..10_000, churn in 0.0f64..0.7, gadget in any::<bool>()) {
        let (n, delta) = if gadget { (8, 3) } else { (14, 5) };
        let ups = gen_update_sequence(&UpdateSequenceParams {
            n, delta, length: 60, churn, warmup: Some(20), seed: gseed,
        }).unwrap();
        let cone = run_mode(SweepMode::Cone, gadget, seed, &ups, n, delta);
        let full = run_mode(SweepMode::Full, gadget, seed, &ups, n, delta);
        prop_assert_eq!(cone, full);
    }

    #[test]
    fn never_improper_never_out_of_band(seed in 0u64..10_000, gseed in 0u64..10_000, churn in 0.0f64..0.8) {
        let ups = gen_update_sequence(&UpdateSequenceParams {
            n: 20, delta: 5, length: 150, churn, warmup: Some(40), seed: gseed,
        }).unwrap();
        let mut cfg = DynamicConfig::new(20, 5, 0.3, 1, seed);
        cfg.t_eps = Some(4);
        cfg.gadget = false;
        cfg.check = true;
        let mut s = DynamicColoring::new(cfg).unwrap();
        for up in ups {
            s.apply(up).unwrap();
            prop_assert!(s.verify().valid);
            prop_assert!(s.bands_ok());
        }
    }
}

#[test]
fn cone_matches_full_sweep_under_real_churn() {
    let ups = gen_update_sequence(&UpdateSequenceParams {
        n: 30,
        delta: 8,
        length: 500,
        churn: 0.5,
        warmup: Some(150),
        seed: 77,
    })
    .unwrap();
    let cone = run_mode(SweepMode::Cone, false, 5, &ups, 30, 8);
    let full = run_mode(SweepMode::Full, false, 5, &ups, 30, 8);
    assert_eq!(cone, full);
    // make sure repairs actually happened
    let mut cfg = DynamicConfig::new(30, 8, 0.25, 1, 5);
    cfg.t_eps = Some(5);
    cfg.gadget = false;
    let mut s = DynamicColoring::new(cfg).unwrap();
    let dirty: usize = ups
        .iter()
        .map(|&u| s.apply(u).unwrap().dirty_per_round.iter().sum::<usize>())
        .sum();
    assert!(dirty >= 5, "only {dirty} tentative repairs");
}
