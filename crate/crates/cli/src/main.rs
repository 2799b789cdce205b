use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use codedcast::analysis::{analyze, Exponent, PsiOptions};
use codedcast::coloring::{
    brute_force_oracle, gclc, gclc2, hglc, write_coloring_dump, ColoringOutcome, ColoringSummary, Grouping,
    HglcParams, ORACLE_MAX_VERTICES,
};
use codedcast::graph::ConflictGraph;
use codedcast::harness::{run_experiment, write_outputs, ExperimentSpec};
use codedcast::model::{rap_place, sample_demands, NetworkConfig};
use codedcast::{Error, Result};

#[derive(Parser)]
#[command(
    name = "codedcast",
    version,
    about = "Coded multicasting experiments over shared-link caching networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo sweep and write results.csv, trials.csv and rates.svg.
    Simulate {
        /// Experiment spec (JSON).
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// HgLC seed window.
        #[arg(long)]
        a: Option<f64>,
        /// HgLC candidate window.
        #[arg(long)]
        b: Option<f64>,
        #[arg(long, value_enum)]
        verify_coding: Option<Toggle>,
    },
    /// Print the rate bounds of a network as JSON.
    Analyze {
        /// Network config (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Subsets sampled per size when enumeration is too large.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ExponentArg::Subset)]
        exponent: ExponentArg,
    },
    /// Exact local chromatic number of one sampled realization, next to the heuristics.
    Oracle {
        /// Refuse realizations with more vertices than this.
        #[arg(long, default_value_t = ORACLE_MAX_VERTICES)]
        vertices: usize,
        #[arg(long)]
        config: PathBuf,
        /// Realization seed; defaults to the config's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Color one sampled realization and write `<vertex> <color>` lines.
    Color {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Hglc)]
        algorithm: Algo,
        #[arg(long)]
        seed: Option<u64>,
        /// Dump file; the JSON summary goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the conflict graph of one sampled realization as an arc list.
    Graph {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExponentArg {
    Subset,
    Network,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Gclc,
    Gclc2,
    Hglc,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_config_error() {
        2
    } else if e.is_invariant_breach() {
        3
    } else {
        1
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))
}

fn load_network(path: &Path) -> Result<NetworkConfig> {
    NetworkConfig::from_json_str(&read(path)?)
}

fn realize(config: &Path, seed: Option<u64>) -> Result<ConflictGraph> {
    let cfg = load_network(config)?;
    let seed = seed.unwrap_or(cfg.seed());
    let cache = rap_place(&cfg, seed)?;
    let demand = sample_demands(&cfg, &cache, seed.wrapping_add(1))?;
    ConflictGraph::build(&cache, &demand)
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate {
            config,
            out,
            trials,
            seed,
            a,
            b,
            verify_coding,
        } => {
            let mut spec = ExperimentSpec::from_json_str(&read(&config)?)?;
            if let Some(t) = trials {
                spec.trials = t;
            }
            if let Some(s) = seed {
                spec.seed = s;
            }
            if let Some(a) = a {
                spec.hglc.a = a;
            }
            if let Some(b) = b {
                spec.hglc.b = b;
            }
            if let Some(v) = verify_coding {
                spec.verify_coding = Some(matches!(v, Toggle::On));
            }
            spec.validate()?;
            let result = run_experiment(&spec)?;
            write_outputs(&result, &out)?;
            for agg in &result.aggregates {
                println!(
                    "{}={} {:<10} mean {:.4} [{:.4}, {:.4}] ({} trials)",
                    agg.sweep_param.name(),
                    agg.value,
                    agg.scheme.name(),
                    agg.mean_rate,
                    agg.ci95_lo,
                    agg.ci95_hi,
                    agg.trials
                );
            }
            Ok(())
        }
        Command::Analyze {
            config,
            samples,
            seed,
            exponent,
        } => {
            let cfg = load_network(&config)?;
            let opts = PsiOptions {
                samples,
                seed,
                exponent: match exponent {
                    ExponentArg::Subset => Exponent::Subset,
                    ExponentArg::Network => Exponent::Network,
                },
            };
            let report = analyze(&cfg, opts)?;
            print_json(&serde_json::to_value(report).map_err(io::Error::from)?)
        }
        Command::Oracle {
            vertices,
            config,
            seed,
        } => {
            if vertices > ORACLE_MAX_VERTICES {
                return Err(Error::InvalidConfig(format!(
                    "--vertices {vertices} exceeds the exhaustive-search limit {ORACLE_MAX_VERTICES}"
                )));
            }
            let g = realize(&config, seed)?;
            if g.len() > vertices {
                return Err(Error::TooLarge {
                    size: g.len(),
                    limit: vertices,
                });
            }
            let start = Instant::now();
            let best = brute_force_oracle(&g)?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let h = hglc(&g, HglcParams::default(), seed.unwrap_or(0));
            let c = gclc(&g, Grouping::Cardinality);
            let b = g.packets_per_file() as f64;
            print_json(&json!({
                "vertices": g.len(),
                "edges": g.edge_count(),
                "oracle": {"nu": best.local_number, "rate": best.local_number as f64 / b, "runtime_ms": ms},
                "gclc": {"nu": c.local_number, "num_colors": c.num_colors()},
                "hglc": {"nu": h.local_number, "num_colors": h.num_colors()},
            }))
        }
        Command::Color {
            config,
            algorithm,
            seed,
            out,
        } => {
            let g = realize(&config, seed)?;
            let start = Instant::now();
            let outcome: ColoringOutcome = match algorithm {
                Algo::Gclc => gclc(&g, Grouping::Cardinality),
                Algo::Gclc2 => gclc2(&g),
                Algo::Hglc => hglc(&g, HglcParams::default(), seed.unwrap_or(0)),
            };
            let summary = ColoringSummary::new(&outcome, start.elapsed().as_secs_f64() * 1e3);
            if let Some(path) = out {
                let mut w = io::BufWriter::new(fs::File::create(path)?);
                write_coloring_dump(&outcome.coloring, &mut w)?;
                w.flush()?;
            }
            print_json(&serde_json::to_value(summary).map_err(io::Error::from)?)
        }
        Command::Graph { config, seed, out } => {
            let g = realize(&config, seed)?;
            let sink: Box<dyn Write> = match out {
                Some(path) => Box::new(fs::File::create(path)?),
                None => Box::new(io::stdout().lock()),
            };
            let mut w = io::BufWriter::new(sink);
            g.write_dimacs(&mut w)?;
            w.flush()?;
            Ok(())
        }
    }
}
