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

//! Running configured experiments.
//!
//! Every seed `s` splits into independent streams: `derive_seed(s, [0x11])`
//! builds the instance, `[0x12]` orders its edges, `[0x13]` drives the
//! algorithm and `[0x14]` the event sampling. Instances therefore do not
//! depend on the algorithm under test.
//!
//! CSV columns, in order: `config_hash, seed, algorithm, n, delta, m,
//! epsilon, k, t_eps, band_floor, colors_used, max_color, proper, band_ok,
//! greedy_bound_ok, delta1, delta2, delta3, m_prime_capped, mean_recourse,
//! max_recourse, mean_dummy_recourse, events_min_pass, replay_valid`.
//! Fields that do not apply to an algorithm are empty. The JSON output is
//! an array of the same records with `null` for empty fields.

use std::path::Path;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{coloring_from_stream, run_online, GreedyOnline, OnlineColorer};
use crate::dynamic::{recourse_stats, DynamicColoring, DynamicConfig, SweepMode};
use crate::error::HarnessError;
use crate::generators::{
    gen_bounded_degree, gen_lower_bound_instance, gen_near_regular, gen_random_order_stream,
    gen_update_sequence, LowerBoundParams, Update, UpdateSequenceParams,
};
use crate::graph::{verify_proper_coloring, Color, NodeId};
use crate::io::{read_edge_list, read_update_stream};
use crate::nibble::{run_basic, PhaseOneOptions};
use crate::params::Params;
use crate::random_order::{GeneralOnline, Step, WarmupOnline};
use crate::rng::{derive_seed, rng_from_seed};

use super::config::{Algorithm, ExperimentConfig, InstanceSource, OutputFormat};
use super::events::verify_events;
use super::replay::{replay_validate, DecisionLog};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub config_hash: String,
    pub seed: u64,
    pub algorithm: String,
    pub n: usize,
    pub delta: usize,
    /// Edges streamed, or updates applied.
    pub m: usize,
    pub epsilon: f64,
    pub k: u32,
    pub t_eps: Option<usize>,
    /// Largest color of the palette band (`C`, or `delta2` for general).
    pub band_floor: Option<usize>,
    pub colors_used: usize,
    pub max_color: Color,
    pub proper: bool,
    pub band_ok: bool,
    /// `max_color <= 2 D - 1` with `D` the realized maximum degree.
    pub greedy_bound_ok: Option<bool>,
    pub delta1: Option<Color>,
    pub delta2: Option<Color>,
    pub delta3: Option<Color>,
    pub m_prime_capped: Option<bool>,
    pub mean_recourse: Option<f64>,
    pub max_recourse: Option<usize>,
    pub mean_dummy_recourse: Option<f64>,
    pub events_min_pass: Option<f64>,
    pub replay_valid: Option<bool>,
    /// Wall time; kept out of both output formats.
    #[serde(skip)]
    pub runtime: Duration,
}

impl Record {
    /// Properness, band discipline, and every verification that ran.
    pub fn passed(&self, event_pass: f64) -> bool {
        self.proper
            && self.band_ok
            && self.greedy_bound_ok != Some(false)
            && self.replay_valid != Some(false)
            && self.events_min_pass.is_none_or(|p| p >= event_pass)
    }
}

enum Input {
    Stream {
        n: usize,
        delta: usize,
        stream: Vec<(NodeId, NodeId)>,
    },
    Updates {
        n: usize,
        delta: usize,
        updates: Vec<Update>,
    },
}

fn cfg_err(field: &str, msg: impl Into<String>) -> HarnessError {
    HarnessError::Config {
        field: field.into(),
        msg: msg.into(),
    }
}

fn load(cfg: &ExperimentConfig, seed: u64) -> Result<Input, HarnessError> {
    let gseed = derive_seed(seed, &[0x11]);
    let oseed = derive_seed(seed, &[0x12]);
    let input = match &cfg.instance {
        InstanceSource::File { path, shuffle } => {
            if cfg.algorithm == Algorithm::Dynamic {
                let (h, updates) = read_update_stream(path)?;
                Input::Updates {
                    n: h.n,
                    delta: h.delta,
                    updates,
                }
            } else {
                let (h, mut stream) = read_edge_list(path)?;
                if *shuffle {
                    stream.shuffle(&mut rng_from_seed(oseed));
                }
                Input::Stream {
                    n: h.n,
                    delta: h.delta,
                    stream,
                }
            }
        }
        InstanceSource::NearRegular { n, delta, slack } => {
            let g = gen_near_regular(*n, *delta, *slack, gseed)?;
            Input::Stream {
                n: *n,
                delta: *delta,
                stream: gen_random_order_stream(&g, oseed),
            }
        }
        InstanceSource::BoundedDegree { n, lo, hi, slack } => {
            let g = gen_bounded_degree(*n, *lo, *hi, *slack, gseed)?;
            Input::Stream {
                n: *n,
                delta: *hi,
                stream: gen_random_order_stream(&g, oseed),
            }
        }
        InstanceSource::LowerBound {
            delta,
            copies,
            node_budget,
        } => {
            let inst = gen_lower_bound_instance(&LowerBoundParams {
                delta: *delta,
                copies: *copies,
                node_budget: *node_budget,
                seed: gseed,
            })?;
            Input::Stream {
                n: inst.graph.node_count(),
                delta: *delta,
                stream: inst.stream,
            }
        }
        InstanceSource::Updates {
            n,
            delta,
            length,
            churn,
            warmup,
        } => Input::Updates {
            n: *n,
            delta: *delta,
            updates: gen_update_sequence(&UpdateSequenceParams {
                n: *n,
                delta: *delta,
                length: *length,
                churn: *churn,
                warmup: *warmup,
                seed: gseed,
            })?,
        },
    };
    Ok(match input {
        Input::Stream { n, delta, stream } if cfg.algorithm == Algorithm::Dynamic => {
            Input::Updates {
                n,
                delta,
                updates: stream
                    .into_iter()
                    .map(|(u, v)| Update::Insert(u, v))
                    .collect(),
            }
        }
        other => other,
    })
}

fn params_for(cfg: &ExperimentConfig, n: usize, delta: usize) -> Result<Params, HarnessError> {
    let p = match cfg.t_eps {
        Some(t) => Params::custom(n, delta, cfg.epsilon, cfg.k, t),
        None if cfg.epsilon == 0.0 => Params::custom(n, delta, 0.0, cfg.k, 1),
        None => Params::derive(n, delta, cfg.epsilon, cfg.k),
    };
    Ok(p?)
}

fn blank(
    cfg: &ExperimentConfig,
    hash: &str,
    seed: u64,
    n: usize,
    delta: usize,
    m: usize,
) -> Record {
    Record {
        config_hash: hash.to_string(),
        seed,
        algorithm: cfg.algorithm.name().to_string(),
        n,
        delta,
        m,
        epsilon: cfg.epsilon,
        k: cfg.k,
        t_eps: None,
        band_floor: None,
        colors_used: 0,
        max_color: 0,
        proper: false,
        band_ok: false,
        greedy_bound_ok: None,
        delta1: None,
        delta2: None,
        delta3: None,
        m_prime_capped: None,
        mean_recourse: None,
        max_recourse: None,
        mean_dummy_recourse: None,
        events_min_pass: None,
        replay_valid: None,
        runtime: Duration::ZERO,
    }
}

/// Colors `stream` with `alg`, logging decisions when a replay is wanted.
fn drive<A, F>(
    cfg: &ExperimentConfig,
    seed: u64,
    stream: &[(NodeId, NodeId)],
    mut fresh: F,
    rec: &mut Record,
) -> Vec<Color>
where
    A: OnlineColorer,
    F: FnMut(&[(NodeId, NodeId)]) -> A,
{
    if !cfg.verify.replay {
        return run_online(&mut fresh(stream), stream);
    }
    let log = DecisionLog::record(&mut fresh(stream), stream);
    let verdict = replay_validate(&log, stream, &mut fresh, cfg.thresholds.replay_probes, seed);
    rec.replay_valid = Some(verdict.is_valid());
    log.decisions.iter().map(|d| d.color).collect()
}

fn finish_stream(
    rec: &mut Record,
    n: usize,
    delta: usize,
    stream: &[(NodeId, NodeId)],
    colors: &[Color],
) -> Result<usize, HarnessError> {
    let (g, col) = coloring_from_stream(n, delta, stream, colors)?;
    rec.proper = verify_proper_coloring(&g, &col, true).valid;
    rec.colors_used = col.distinct_colors(&g);
    rec.max_color = col.max_color(&g);
    Ok(g.max_degree())
}

fn run_one(cfg: &ExperimentConfig, hash: &str, seed: u64) -> Result<Record, HarnessError> {
    let start = Instant::now();
    let aseed = derive_seed(seed, &[0x13]);
    let input = load(cfg, seed)?;
    let mut rec = match input {
        Input::Stream { n, delta, stream } => {
            let delta = cfg.delta.unwrap_or(delta);
            let mut rec = blank(cfg, hash, seed, n, delta, stream.len());
            match cfg.algorithm {
                Algorithm::Greedy => {
                    let colors = drive(cfg, seed, &stream, |_| GreedyOnline::new(n), &mut rec);
                    let d = finish_stream(&mut rec, n, delta, &stream, &colors)?;
                    rec.band_ok = true;
                    rec.greedy_bound_ok = Some(rec.max_color as usize <= (2 * d).saturating_sub(1));
                }
                Algorithm::Warmup => {
                    let params = params_for(cfg, n, delta)?;
                    let m = stream.len();
                    let colors = drive(
                        cfg,
                        seed,
                        &stream,
                        |_| WarmupOnline::new(n, &params, m, aseed),
                        &mut rec,
                    );
                    finish_stream(&mut rec, n, delta, &stream, &colors)?;
                    // Replaying does not need the metrics; recompute them.
                    let mut alg = WarmupOnline::new(n, &params, m, aseed);
                    let mut band_ok = true;
                    for &(u, v) in &stream {
                        let c = alg.process(u, v);
                        let d = alg.last_decision().expect("just processed");
                        let tentative = d.tentative != 0 && d.color == d.tentative;
                        band_ok &= (c as usize <= params.phase1_colors) == tentative;
                    }
                    rec.band_ok = band_ok;
                    rec.t_eps = Some(params.t_eps);
                    rec.band_floor = Some(params.phase1_colors);
                }
                Algorithm::General => {
                    let mut alg = GeneralOnline::new(n, delta, cfg.epsilon, cfg.k, aseed)?;
                    let mut colors = Vec::with_capacity(stream.len());
                    let mut steps = Vec::with_capacity(stream.len());
                    for &(u, v) in &stream {
                        colors.push(alg.try_process(u, v)?);
                        steps.push(alg.last_step());
                    }
                    let met = alg.finish();
                    if cfg.verify.replay {
                        let log = DecisionLog {
                            decisions: stream
                                .iter()
                                .zip(&colors)
                                .enumerate()
                                .map(|(index, (&(u, v), &color))| super::replay::Decision {
                                    index,
                                    u,
                                    v,
                                    color,
                                })
                                .collect(),
                        };
                        let (eps, k) = (cfg.epsilon, cfg.k);
                        let verdict = replay_validate(
                            &log,
                            &stream,
                            |_| {
                                GeneralOnline::new(n, delta, eps, k, aseed)
                                    .expect("validated above")
                            },
                            cfg.thresholds.replay_probes,
                            seed,
                        );
                        rec.replay_valid = Some(verdict.is_valid());
                    }
                    finish_stream(&mut rec, n, delta, &stream, &colors)?;
                    rec.band_ok = colors.iter().zip(&steps).all(|(&c, s)| match s {
                        Step::Estimate => c >= 1 && c <= met.delta1,
                        Step::Padded => c > met.delta1 && c <= met.delta2,
                        Step::Greedy => c > met.delta2,
                    });
                    rec.band_floor = Some(met.delta2 as usize);
                    rec.delta1 = Some(met.delta1);
                    rec.delta2 = Some(met.delta2);
                    rec.delta3 = Some(met.delta3);
                    rec.m_prime_capped = Some(met.m_prime_capped);
                }
                Algorithm::Basic => {
                    let params = params_for(cfg, n, delta)?;
                    let mut g = crate::graph::Graph::unbounded(n, delta);
                    for &(u, v) in &stream {
                        g.insert_edge(u, v)?;
                    }
                    let opts = PhaseOneOptions {
                        strict_regularity: cfg.strict_regularity,
                        event_budget: cfg.thresholds.event_budget,
                        keep_samples: cfg.verify.events,
                    };
                    let mut rng = rng_from_seed(aseed);
                    let (col, met) =
                        run_basic(&g, &params, &mut rng, &opts, derive_seed(seed, &[0x14]))?;
                    rec.proper = verify_proper_coloring(&g, &col, true).valid;
                    rec.colors_used = met.colors_used;
                    rec.max_color = met.max_color;
                    let c = params.phase1_colors as Color;
                    rec.band_ok =
                        met.phase_one_max <= c && (met.phase_two_min == 0 || met.phase_two_min > c);
                    rec.t_eps = Some(params.t_eps);
                    rec.band_floor = Some(params.phase1_colors);
                    if cfg.verify.events {
                        let report = verify_events(&met.trace, &params, cfg.thresholds.slack);
                        rec.events_min_pass = Some(report.min_pass());
                    }
                }
                Algorithm::Dynamic => unreachable!("converted to updates"),
            }
            rec
        }
        Input::Updates { n, delta, updates } => {
            if cfg.algorithm != Algorithm::Dynamic {
                return Err(cfg_err(
                    "instance",
                    "update sequences only feed the dynamic algorithm",
                ));
            }
            let delta = cfg.delta.unwrap_or(delta);
            let mut rec = blank(cfg, hash, seed, n, delta, updates.len());
            let dcfg = DynamicConfig {
                n,
                delta,
                epsilon: cfg.epsilon,
                k: cfg.k,
                t_eps: cfg.t_eps,
                gadget: cfg.gadget,
                mode: SweepMode::Cone,
                check: false,
                seed: aseed,
            };
            let mut s = DynamicColoring::new(dcfg)?;
            let mut reports = Vec::with_capacity(updates.len());
            let mut ok = true;
            let mut bands = true;
            for &up in &updates {
                reports.push(s.apply(up)?);
                if cfg.verify.per_update {
                    ok &= s.verify().valid;
                    bands &= s.bands_ok();
                }
            }
            rec.proper = ok && s.verify().valid;
            rec.band_ok = bands && s.bands_ok();
            let real = s.real_graph();
            let max_color = real
                .edges()
                .filter_map(|(_, u, v)| s.final_color(u, v))
                .max()
                .unwrap_or(0);
            rec.max_color = max_color;
            rec.colors_used = s.colors_in_use();
            rec.t_eps = Some(s.t_eps());
            rec.band_floor = Some(s.phase1_colors());
            let st = recourse_stats(&reports);
            rec.mean_recourse = Some(st.mean);
            rec.max_recourse = Some(st.max);
            rec.mean_dummy_recourse = Some(st.mean_dummy);
            rec
        }
    };
    rec.runtime = start.elapsed();
    Ok(rec)
}

/// Runs every seed of `cfg` (in parallel) and returns the records in seed
/// order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<Record>, HarnessError> {
    cfg.validate()?;
    let hash = cfg.hash();
    let mut out = cfg
        .seeds
        .par_iter()
        .map(|&s| run_one(cfg, &hash, s))
        .collect::<Result<Vec<_>, _>>()?;
    out.sort_by_key(|r| r.seed);
    Ok(out)
}

pub fn records_to_csv(records: &[Record]) -> Result<String, HarnessError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Io {
        path: "<memory>".into(),
        source: e.into_error(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn records_to_json(records: &[Record]) -> Result<String, HarnessError> {
    Ok(serde_json::to_string_pretty(records)? + "\n")
}

pub fn format_records(records: &[Record], format: OutputFormat) -> Result<String, HarnessError> {
    match format {
        OutputFormat::Csv => records_to_csv(records),
        OutputFormat::Json => records_to_json(records),
    }
}

pub fn write_records(
    records: &[Record],
    path: &Path,
    format: OutputFormat,
) -> Result<(), HarnessError> {
    crate::io::write_text(path, &format_records(records, format)?)
}
