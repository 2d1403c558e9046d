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

//! Command-line front end: `gen`, `run`, `verify`, `bench`.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad configuration or
//! input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nibble_color::baselines::{GreedyOnline, OnlineColorer};
use nibble_color::dynamic::DynamicConfig;
use nibble_color::error::HarnessError;
use nibble_color::generators::{
    gen_bounded_degree, gen_lower_bound_instance, gen_near_regular, gen_random_order_stream,
    gen_update_sequence, LowerBoundParams, Update, UpdateSequenceParams,
};
use nibble_color::graph::{Graph, NodeId};
use nibble_color::harness::{
    self, bench, Algorithm, DecisionLog, ExperimentConfig, InstanceSource, OutputFormat,
};
use nibble_color::io::{self, Header};
use nibble_color::nibble::{run_basic, PhaseOneOptions};
use nibble_color::params::Params;
use nibble_color::random_order::{GeneralOnline, WarmupOnline};
use nibble_color::rng::{derive_seed, rng_from_seed};

#[derive(Parser)]
#[command(
    name = "nibble",
    version,
    about = "Nibble-method edge coloring experiments"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance file.
    Gen {
        #[command(subcommand)]
        what: GenCmd,
    },
    /// Run an algorithm over one or more seeds and emit records.
    Run(RunArgs),
    /// Run a statistical or online-model check.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    /// Parameter sweeps.
    Bench {
        #[command(subcommand)]
        what: BenchCmd,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Near-regular graph as an edge list in random order.
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = 0.0)]
        slack: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Degrees uniform in [lo, hi], edges in random order.
    Bounded {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lo: usize,
        #[arg(long)]
        hi: usize,
        #[arg(long, default_value_t = 0.0)]
        slack: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Oblivious insert/delete sequence.
    Updates {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 0.5)]
        churn: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Hub-and-stars instance on which greedy needs 2D-1 colors.
    LowerBound {
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = 10_000)]
        budget: u128,
        #[arg(long)]
        copies: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Alg {
    Basic,
    Warmup,
    General,
    Dynamic,
    Greedy,
}

impl From<Alg> for Algorithm {
    fn from(a: Alg) -> Self {
        match a {
            Alg::Basic => Algorithm::Basic,
            Alg::Warmup => Algorithm::Warmup,
            Alg::General => Algorithm::General,
            Alg::Dynamic => Algorithm::Dynamic,
            Alg::Greedy => Algorithm::Greedy,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Switch {
    On,
    Off,
}

/// Flags shared by `run` and `bench`.
#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long = "K", default_value_t = nibble_color::params::DEFAULT_K)]
    k: u32,
    /// Override the derived round count.
    #[arg(long)]
    t_eps: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seed list: `a..b` or `a,b,c`. Overrides --seed.
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    gadget: Switch,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct RunArgs {
    #[arg(value_enum)]
    algorithm: Alg,
    /// JSON experiment config; other flags are ignored when given.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Edge list, or update stream for `dynamic`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Shuffle the edges of --input per seed.
    #[arg(long)]
    shuffle: bool,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<usize>,
    /// Length of the generated update sequence (dynamic).
    #[arg(long, default_value_t = 10_000)]
    updates: usize,
    #[arg(long, default_value_t = 0.5)]
    churn: f64,
    #[arg(long)]
    strict_regularity: bool,
    /// Check concentration events (basic).
    #[arg(long)]
    events: bool,
    /// Replay decision logs (online algorithms).
    #[arg(long)]
    replay: bool,
    /// Verify after every update (dynamic).
    #[arg(long)]
    per_update: bool,
    #[arg(long, default_value_t = 0.1)]
    slack: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Concentration events of the offline algorithm on a regular graph.
    Events {
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        delta: usize,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long = "K", default_value_t = 48)]
        k: u32,
        #[arg(long, default_value_t = 4)]
        t_eps: usize,
        #[arg(long, default_value_t = 0.1)]
        slack: f64,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value_t = 0.99)]
        pass: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Replay an online run and check it respected the arrival order.
    Replay {
        #[arg(value_enum)]
        algorithm: Alg,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        delta: usize,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long = "K", default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 5)]
        probes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Dynamic versus fresh static coloring, total variation distance.
    Distribution {
        /// Update stream; defaults to a built-in 5-node script.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[arg(long = "K", default_value_t = 1)]
        k: u32,
        #[arg(long)]
        t_eps: Option<usize>,
        #[arg(long, default_value_t = 20_000)]
        trials: usize,
        #[arg(long, default_value_t = 0.05)]
        tv: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Dynamic recourse for several n at fixed degree bound.
    Recourse {
        #[arg(long, value_delimiter = ',', default_values_t = [500, 1000, 2000])]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 64)]
        delta: usize,
        #[arg(long, default_value_t = 10_000)]
        updates: usize,
        #[arg(long, default_value_t = 0.5)]
        churn: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Colors used for several epsilon, with greedy as reference.
    Colors {
        #[arg(value_enum, default_value_t = Alg::Warmup)]
        algorithm: Alg,
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[arg(long, default_value_t = 300)]
        delta: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.1, 0.2])]
        eps_list: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Check(String),
    Config(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<nibble_color::error::ColoringError> for Failure {
    fn from(e: nibble_color::error::ColoringError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn parse_seeds(c: &Common) -> Result<Vec<u64>, Failure> {
    let Some(s) = &c.seeds else {
        return Ok(vec![c.seed]);
    };
    let bad = || Failure::Config(format!("--seeds: cannot parse `{s}`"));
    if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        return Ok((a..b).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| bad()))
        .collect()
}

fn base_config(
    algorithm: Algorithm,
    instance: InstanceSource,
    c: &Common,
) -> Result<ExperimentConfig, Failure> {
    let mut cfg = ExperimentConfig::new(algorithm, instance, c.eps, parse_seeds(c)?);
    if algorithm == Algorithm::Greedy {
        cfg.epsilon = 0.0;
    }
    cfg.k = c.k;
    cfg.t_eps = c.t_eps;
    cfg.gadget = c.gadget == Switch::On;
    cfg.output = c.output.clone();
    cfg.format = match c.format {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    };
    Ok(cfg)
}

fn emit(records: &[harness::Record], cfg: &ExperimentConfig) -> Result<(), Failure> {
    let text = harness::format_records(records, cfg.format)?;
    match &cfg.output {
        Some(p) => io::write_text(p, &text)?,
        None => print!("{text}"),
    }
    for r in records {
        eprintln!("seed {} finished in {:.2?}", r.seed, r.runtime);
    }
    Ok(())
}

fn run(a: RunArgs) -> Result<(), Failure> {
    let cfg = if let Some(path) = &a.config {
        ExperimentConfig::from_json_file(path)?
    } else {
        let algorithm: Algorithm = a.algorithm.into();
        let need = |x: Option<usize>, f: &str| {
            x.ok_or_else(|| Failure::Config(format!("--{f} is required without --input")))
        };
        let instance = match &a.input {
            Some(path) => InstanceSource::File {
                path: path.clone(),
                shuffle: a.shuffle,
            },
            None if algorithm == Algorithm::Dynamic => InstanceSource::Updates {
                n: need(a.n, "n")?,
                delta: need(a.delta, "delta")?,
                length: a.updates,
                churn: a.churn,
                warmup: None,
            },
            None => InstanceSource::NearRegular {
                n: need(a.n, "n")?,
                delta: need(a.delta, "delta")?,
                slack: 0.0,
            },
        };
        let mut cfg = base_config(algorithm, instance, &a.common)?;
        cfg.strict_regularity = a.strict_regularity;
        cfg.verify.events = a.events;
        cfg.verify.replay = a.replay;
        cfg.verify.per_update = a.per_update;
        cfg.thresholds.slack = a.slack;
        cfg
    };
    let records = harness::run_experiment(&cfg)?;
    emit(&records, &cfg)?;
    let bad: Vec<u64> = records
        .iter()
        .filter(|r| !r.passed(cfg.thresholds.event_pass))
        .map(|r| r.seed)
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("checks failed for seeds {bad:?}")))
    }
}

fn gen(what: GenCmd) -> Result<(), Failure> {
    match what {
        GenCmd::Graph {
            n,
            delta,
            slack,
            seed,
            output,
        } => {
            let g = gen_near_regular(n, delta, slack, seed)?;
            write_stream(&g, delta, seed, &output)
        }
        GenCmd::Bounded {
            n,
            lo,
            hi,
            slack,
            seed,
            output,
        } => {
            let g = gen_bounded_degree(n, lo, hi, slack, seed)?;
            write_stream(&g, hi, seed, &output)
        }
        GenCmd::Updates {
            n,
            delta,
            length,
            churn,
            seed,
            output,
        } => {
            let ups = gen_update_sequence(&UpdateSequenceParams {
                n,
                delta,
                length,
                churn,
                warmup: None,
                seed,
            })?;
            io::write_text(
                &output,
                &io::format_update_stream(Header { n, delta }, &ups),
            )?;
            Ok(())
        }
        GenCmd::LowerBound {
            delta,
            budget,
            copies,
            seed,
            output,
        } => {
            let inst = gen_lower_bound_instance(&LowerBoundParams {
                delta,
                copies,
                node_budget: budget,
                seed,
            })?;
            let h = Header {
                n: inst.graph.node_count(),
                delta,
            };
            io::write_text(&output, &io::format_edge_list(h, &inst.stream))?;
            eprintln!("{} copies, beta = {}", inst.copies, inst.beta);
            Ok(())
        }
    }
}

fn write_stream(g: &Graph, delta: usize, seed: u64, output: &Path) -> Result<(), Failure> {
    let stream = gen_random_order_stream(g, derive_seed(seed, &[1]));
    let h = Header {
        n: g.node_count(),
        delta,
    };
    io::write_text(output, &io::format_edge_list(h, &stream))?;
    Ok(())
}

/// Five nodes, eight updates, with one deletion in the middle.
fn toy_script() -> (usize, usize, Vec<Update>, Vec<(NodeId, NodeId, usize)>) {
    use Update::*;
    let ups = vec![
        Insert(0, 1),
        Insert(0, 4),
        Insert(1, 2),
        Insert(0, 2),
        Insert(2, 3),
        Delete(0, 4),
        Insert(3, 4),
        Insert(1, 3),
    ];
    let rounds = vec![
        (0, 1, 1),
        (0, 4, 1),
        (0, 2, 1),
        (1, 2, 2),
        (2, 3, 2),
        (1, 3, 3),
        (3, 4, 4),
    ];
    (5, 3, ups, rounds)
}

fn verify(what: VerifyCmd) -> Result<(), Failure> {
    match what {
        VerifyCmd::Events {
            n,
            delta,
            eps,
            k,
            t_eps,
            slack,
            budget,
            pass,
            seed,
            output,
        } => {
            let params = Params::custom(n, delta, eps, k, t_eps)?;
            let g = gen_near_regular(n, delta, 0.0, derive_seed(seed, &[0x11]))?;
            let opts = PhaseOneOptions {
                strict_regularity: false,
                event_budget: budget,
                keep_samples: true,
            };
            let mut rng = rng_from_seed(derive_seed(seed, &[0x13]));
            let (_, met) = run_basic(&g, &params, &mut rng, &opts, derive_seed(seed, &[0x14]))?;
            let report = harness::verify_events(&met.trace, &params, slack);
            for r in &report.rounds {
                println!(
                    "round {}: palette {:.4} c-degree {:.4} sampled {:.4} failed-degree {} (bound {:.1})",
                    r.round, r.palette_pass, r.c_degree_pass, r.sampled_pass, r.failed_max_degree, r.failed_bound
                );
            }
            if let Some(p) = output {
                let json = serde_json::to_string_pretty(&report).map_err(HarnessError::from)?;
                io::write_text(&p, &(json + "\n"))?;
            }
            if report.passes(pass) && report.failed_degree_ok() {
                Ok(())
            } else {
                Err(Failure::Check(format!(
                    "pass fraction {:.4} below {pass}",
                    report.min_pass()
                )))
            }
        }
        VerifyCmd::Replay {
            algorithm,
            input,
            n,
            delta,
            eps,
            k,
            probes,
            seed,
        } => {
            let (n, delta, stream) = match input {
                Some(p) => {
                    let (h, s) = io::read_edge_list(&p)?;
                    (h.n, h.delta, s)
                }
                None => {
                    let g = gen_near_regular(n, delta, 0.0, derive_seed(seed, &[0x11]))?;
                    (
                        n,
                        delta,
                        gen_random_order_stream(&g, derive_seed(seed, &[0x12])),
                    )
                }
            };
            let aseed = derive_seed(seed, &[0x13]);
            let verdict = match algorithm {
                Alg::Greedy => replay_with(&stream, probes, seed, |_| GreedyOnline::new(n)),
                Alg::Warmup => {
                    let params = Params::derive(n, delta, eps, k)?;
                    let m = stream.len();
                    replay_with(&stream, probes, seed, |_| {
                        WarmupOnline::new(n, &params, m, aseed)
                    })
                }
                Alg::General => {
                    GeneralOnline::new(n, delta, eps, k, aseed)?;
                    replay_with(&stream, probes, seed, |_| {
                        GeneralOnline::new(n, delta, eps, k, aseed).expect("checked")
                    })
                }
                Alg::Basic | Alg::Dynamic => {
                    return Err(Failure::Config(
                        "replay applies to greedy, warmup and general".into(),
                    ))
                }
            };
            println!("{verdict:?}");
            if verdict.is_valid() {
                Ok(())
            } else {
                Err(Failure::Check("replay found a violation".into()))
            }
        }
        VerifyCmd::Distribution {
            input,
            eps,
            k,
            t_eps,
            trials,
            tv,
            seed,
        } => {
            let (n, delta, ups, fixed) = match input {
                Some(p) => {
                    let (h, ups) = io::read_update_stream(&p)?;
                    (h.n, h.delta, ups, Vec::new())
                }
                None => toy_script(),
            };
            let mut cfg = DynamicConfig::new(n, delta, eps, k, seed);
            cfg.gadget = false;
            cfg.t_eps = t_eps.or(if fixed.is_empty() { None } else { Some(4) });
            let r = harness::equivalence_tv(&cfg, &ups, &fixed, trials, seed)?;
            println!("tv = {:.4} over {} + {} samples", r.tv, r.n_a, r.n_b);
            if r.tv < tv {
                Ok(())
            } else {
                Err(Failure::Check(format!("tv {:.4} >= {tv}", r.tv)))
            }
        }
    }
}

fn replay_with<A: OnlineColorer, F: FnMut(&[(NodeId, NodeId)]) -> A>(
    stream: &[(NodeId, NodeId)],
    probes: usize,
    seed: u64,
    mut fresh: F,
) -> harness::ReplayVerdict {
    let log = DecisionLog::record(&mut fresh(stream), stream);
    harness::replay_validate(&log, stream, fresh, probes, seed)
}

fn bench_cmd(what: BenchCmd) -> Result<(), Failure> {
    let (records, cfg) = match what {
        BenchCmd::Recourse {
            ns,
            delta,
            updates,
            churn,
            common,
        } => {
            let instance = InstanceSource::Updates {
                n: ns.first().copied().unwrap_or(0),
                delta,
                length: updates,
                churn,
                warmup: None,
            };
            let cfg = base_config(Algorithm::Dynamic, instance, &common)?;
            (bench::recourse_vs_n(&cfg, &ns, delta, updates, churn)?, cfg)
        }
        BenchCmd::Colors {
            algorithm,
            n,
            delta,
            eps_list,
            common,
        } => {
            let instance = InstanceSource::NearRegular {
                n,
                delta,
                slack: 0.0,
            };
            let cfg = base_config(algorithm.into(), instance, &common)?;
            (bench::colors_vs_epsilon(&cfg, &eps_list)?, cfg)
        }
    };
    emit(&records, &cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.cmd {
        Cmd::Gen { what } => gen(what),
        Cmd::Run(a) => run(a),
        Cmd::Verify { what } => verify(what),
        Cmd::Bench { what } => bench_cmd(what),
    };
    match out {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
