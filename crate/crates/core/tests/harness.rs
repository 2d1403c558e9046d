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

use std::process::Command;

use nibble_color::baselines::GreedyOnline;
use nibble_color::generators::{gen_near_regular, gen_random_order_stream};
use nibble_color::harness::{
    records_to_csv, records_to_json, replay_validate, run_experiment, tv_distance, verify_events,
    Algorithm, DecisionLog, ExperimentConfig, InstanceSource, Record, ReplayVerdict,
};
use nibble_color::io::{format_edge_list, format_update_stream, Header};
use nibble_color::nibble::{run_basic, PhaseOneOptions};
use nibble_color::params::Params;
use nibble_color::random_order::{GeneralOnline, WarmupOnline};
use nibble_color::rng::rng_from_seed;
use rand::Rng;

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn path_file(dir: &tempfile::TempDir) -> std::path::PathBuf {
    let text = format_edge_list(Header { n: 4, delta: 2 }, &[(0, 1), (1, 2), (2, 3)]);
    write(dir, "path.txt", &text)
}

#[test]
fn greedy_on_a_path_uses_two_colors() {
    let dir = tempfile::tempdir().unwrap();
    let src = InstanceSource::File {
        path: path_file(&dir),
        shuffle: false,
    };
    let cfg = ExperimentConfig::new(Algorithm::Greedy, src, 0.0, vec![1]);
    let recs = run_experiment(&cfg).unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0].colors_used, 2);
    assert!(recs[0].proper && recs[0].greedy_bound_ok == Some(true));
    assert_eq!(recs[0].config_hash, cfg.hash());
}

#[test]
fn basic_with_zero_epsilon_is_pure_phase_two() {
    let src = InstanceSource::NearRegular {
        n: 60,
        delta: 6,
        slack: 0.0,
    };
    let cfg = ExperimentConfig::new(Algorithm::Basic, src, 0.0, vec![3]);
    let r = &run_experiment(&cfg).unwrap()[0];
    let c = r.band_floor.unwrap();
    assert!(r.proper && r.band_ok);
    assert!(r.max_color as usize > c);
    assert!(r.colors_used <= r.max_color as usize - c);
    // Same instance through the library: nothing is colored in phase one.
    let g = gen_near_regular(60, 6, 0.0, nibble_color::rng::derive_seed(3, &[0x11])).unwrap();
    let p = Params::custom(60, 6, 0.0, 48, 1).unwrap();
    let (_, m) = run_basic(
        &g,
        &p,
        &mut rng_from_seed(0),
        &PhaseOneOptions::default(),
        0,
    )
    .unwrap();
    assert_eq!(m.phase_one_max, 0);
    assert_eq!(m.phase_one_colored_fraction, 0.0);
}

fn all_algorithms(dir: &tempfile::TempDir) -> Vec<ExperimentConfig> {
    let graph = InstanceSource::NearRegular {
        n: 120,
        delta: 10,
        slack: 0.0,
    };
    let mut out = Vec::new();
    for (alg, eps) in [
        (Algorithm::Greedy, 0.0),
        (Algorithm::Basic, 0.2),
        (Algorithm::Warmup, 0.2),
        (Algorithm::General, 0.1),
    ] {
        let mut c = ExperimentConfig::new(alg, graph.clone(), eps, vec![5, 1, 3]);
        c.k = 1;
        c.verify.replay = alg != Algorithm::Basic;
        c.verify.events = alg == Algorithm::Basic;
        out.push(c);
    }
    let ups = nibble_color::generators::gen_update_sequence(
        &nibble_color::generators::UpdateSequenceParams {
            n: 40,
            delta: 5,
            length: 300,
            churn: 0.4,
            warmup: None,
            seed: 9,
        },
    )
    .unwrap();
    let file = write(
        dir,
        "ups.txt",
        &format_update_stream(Header { n: 40, delta: 5 }, &ups),
    );
    let mut c = ExperimentConfig::new(
        Algorithm::Dynamic,
        InstanceSource::File {
            path: file,
            shuffle: false,
        },
        0.2,
        vec![2, 0],
    );
    c.k = 1;
    c.verify.per_update = true;
    out.push(c);
    out
}

#[test]
fn reruns_are_byte_identical_and_sorted_by_seed() {
    let dir = tempfile::tempdir().unwrap();
    for cfg in all_algorithms(&dir) {
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(records_to_csv(&a).unwrap(), records_to_csv(&b).unwrap());
        assert_eq!(records_to_json(&a).unwrap(), records_to_json(&b).unwrap());
        let seeds: Vec<u64> = a.iter().map(|r| r.seed).collect();
        let mut sorted = seeds.clone();
        sorted.sort();
        assert_eq!(seeds, sorted);
        for r in &a {
            assert!(r.proper && r.band_ok, "{r:?}");
            assert_ne!(r.replay_valid, Some(false));
        }
    }
}

#[test]
fn json_mirrors_csv() {
    let dir = tempfile::tempdir().unwrap();
    for cfg in all_algorithms(&dir) {
        let mut recs = run_experiment(&cfg).unwrap();
        for r in &mut recs {
            r.runtime = Default::default();
        }
        let from_json: Vec<Record> =
            serde_json::from_str(&records_to_json(&recs).unwrap()).unwrap();
        let text = records_to_csv(&recs).unwrap();
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let from_csv: Vec<Record> = rd.deserialize().collect::<Result<_, _>>().unwrap();
        assert_eq!(from_json, from_csv);
        assert_eq!(from_json, recs);
    }
}

#[test]
fn config_errors_name_the_field() {
    let src = InstanceSource::NearRegular {
        n: 10,
        delta: 3,
        slack: 0.0,
    };
    let mut cfg = ExperimentConfig::new(Algorithm::General, src, 0.0, vec![0]);
    let err = run_experiment(&cfg).unwrap_err().to_string();
    assert!(err.contains("epsilon"), "{err}");
    cfg.epsilon = 0.2;
    cfg.instance = InstanceSource::File {
        path: "/nonexistent/graph.txt".into(),
        shuffle: false,
    };
    let err = run_experiment(&cfg).unwrap_err().to_string();
    assert!(err.contains("/nonexistent/graph.txt"), "{err}");
}

#[test]
fn round_one_palettes_sit_inside_the_envelope() {
    // (1 + eps^2) * delta is integral here, so C sits exactly on the edge.
    let (n, delta) = (400, 100);
    let g = gen_near_regular(n, delta, 0.0, 4).unwrap();
    let p = Params::custom(n, delta, 0.1, 1, 3).unwrap();
    let opts = PhaseOneOptions {
        keep_samples: true,
        ..Default::default()
    };
    let (_, m) = run_basic(&g, &p, &mut rng_from_seed(4), &opts, 4).unwrap();
    let r = verify_events(&m.trace, &p, 0.0);
    let r1 = &r.rounds[0];
    assert_eq!(
        r1.palette_range,
        Some((p.phase1_colors as f64, p.phase1_colors as f64))
    );
    assert_eq!(r1.palette_pass, 1.0);
    assert_eq!(r1.c_degree_pass, 1.0);
}

#[test]
fn halved_gamma_fails_the_event_check() {
    let (n, delta, eps) = (1000, 400, 0.05);
    let g = gen_near_regular(n, delta, 0.0, 8).unwrap();
    let p = Params::custom(n, delta, eps, 48, 4).unwrap();
    let opts = PhaseOneOptions {
        keep_samples: true,
        event_budget: 5000,
        ..Default::default()
    };
    let (_, m) = run_basic(&g, &p, &mut rng_from_seed(8), &opts, 8).unwrap();
    let mut bad = p.clone();
    for x in bad.gamma.iter_mut() {
        *x /= 2.0;
    }
    let r = verify_events(&m.trace, &bad, 0.0);
    assert!(r.min_pass() < 0.99);
    assert!(!r.passes(0.99));
}

#[test]
fn same_uniform_draws_are_close_in_tv() {
    let mut rng = rng_from_seed(17);
    let a: Vec<u8> = (0..100_000).map(|_| rng.random_range(0..4)).collect();
    let b: Vec<u8> = (0..100_000).map(|_| rng.random_range(0..4)).collect();
    let r = tv_distance(&a, &b).unwrap();
    assert!(r.tv < 0.02, "{}", r.tv);
    assert_eq!((r.n_a, r.n_b), (100_000, 100_000));
}

fn stream(n: usize, delta: usize, seed: u64) -> Vec<(u32, u32)> {
    let g = gen_near_regular(n, delta, 0.0, seed).unwrap();
    gen_random_order_stream(&g, seed + 1)
}

#[test]
fn online_logs_replay_cleanly() {
    let (n, delta) = (200, 12);
    let s = stream(n, delta, 2);
    let log = DecisionLog::record(&mut GreedyOnline::new(n), &s);
    assert!(replay_validate(&log, &s, |_| GreedyOnline::new(n), 5, 1).is_valid());

    let p = Params::derive(n, delta, 0.1, 1).unwrap();
    let m = s.len();
    let log = DecisionLog::record(&mut WarmupOnline::new(n, &p, m, 7), &s);
    assert!(replay_validate(&log, &s, |_| WarmupOnline::new(n, &p, m, 7), 5, 1).is_valid());

    let fresh = |_: &[(u32, u32)]| GeneralOnline::new(n, delta, 0.1, 1, 7).unwrap();
    let log = DecisionLog::record(&mut fresh(&s), &s);
    assert!(replay_validate(&log, &s, fresh, 5, 1).is_valid());
}

#[test]
fn retroactive_recolor_is_rejected() {
    let n = 50;
    let s = stream(n, 4, 6);
    let mut log = DecisionLog::record(&mut GreedyOnline::new(n), &s);
    // Edge 3 is decided again after edge 10 with a different color.
    let mut again = log.decisions[3];
    again.color += 1;
    log.decisions.insert(11, again);
    match replay_validate(&log, &s, |_| GreedyOnline::new(n), 3, 0) {
        ReplayVerdict::Invalid { index, .. } => assert_eq!(index, 3),
        v => panic!("{v:?}"),
    }
}

fn nibble() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nibble"))
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.txt");
    let st = nibble()
        .args([
            "gen", "graph", "--n", "60", "--delta", "5", "--seed", "2", "--output",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let run = nibble()
        .args(["run", "greedy", "--input"])
        .arg(&out)
        .args(["--shuffle", "--seeds", "0..3", "--replay"])
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
    let csv = String::from_utf8(run.stdout).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("config_hash,seed,algorithm"));
    // Event windows cannot hold at this size.
    let ev = nibble()
        .args([
            "run", "basic", "--n", "100", "--delta", "10", "--eps", "0.2", "--K", "1", "--events",
        ])
        .output()
        .unwrap();
    assert_eq!(ev.status.code(), Some(1));
    let bad = nibble()
        .args(["run", "warmup", "--n", "10", "--delta", "3", "--eps", "2"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let missing = nibble()
        .args(["run", "greedy", "--input", "/nonexistent"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn cli_config_file_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::new(
        Algorithm::Warmup,
        InstanceSource::NearRegular {
            n: 80,
            delta: 8,
            slack: 0.0,
        },
        0.2,
        vec![0, 1],
    );
    let cfg = ExperimentConfig { k: 1, ..cfg };
    let path = write(&dir, "cfg.json", &serde_json::to_string(&cfg).unwrap());
    let out = nibble()
        .args(["run", "warmup", "--config"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let expect = records_to_csv(&run_experiment(&cfg).unwrap()).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), expect);
}
