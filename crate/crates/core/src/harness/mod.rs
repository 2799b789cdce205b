//! Seeded Monte Carlo experiments: place, demand, build, color, code, verify.

mod output;

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{lfu_rate, rate_bound, PsiOptions};
use crate::coding::{mds_generator, verify_round_trip, DefaultField, PacketStore};
use crate::coloring::{gclc, gclc2, hglc, ColoringOutcome, Grouping, HglcParams};
use crate::error::{parse_json, Error, Result};
use crate::graph::ConflictGraph;
use crate::model::{
    lfu_place, rap_place, sample_requests, CacheRealization, DemandModel, DemandRealization, NamedDemand,
    NetworkConfig, NetworkConfigFile, PacketId, PerUser,
};

pub use output::{emit_csv, emit_svg, emit_trials_csv, write_outputs};

/// Graphs up to this many vertices are round-trip verified unless the spec says otherwise.
pub const VERIFY_VERTEX_LIMIT: usize = 5000;

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "COLOR_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "GCLC")]
    Gclc,
    #[serde(rename = "HGLC")]
    Hglc,
    #[serde(rename = "LFU-sim")]
    LfuSim,
    #[serde(rename = "GCLC2-only")]
    Gclc2Only,
    #[serde(rename = "bound-GCLC")]
    BoundGclc,
    #[serde(rename = "bound-LFU")]
    BoundLfu,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Gclc => "GCLC",
            Scheme::Hglc => "HGLC",
            Scheme::LfuSim => "LFU-sim",
            Scheme::Gclc2Only => "GCLC2-only",
            Scheme::BoundGclc => "bound-GCLC",
            Scheme::BoundLfu => "bound-LFU",
        }
    }

    fn colors(self) -> bool {
        matches!(self, Scheme::Gclc | Scheme::Hglc | Scheme::Gclc2Only)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParam {
    /// Cache size of every user, in files.
    M,
    /// Packets per file.
    B,
    /// Requests per user.
    L,
    /// Zipf exponent of the shared demand.
    #[serde(rename = "gamma")]
    Gamma,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::M => "M",
            SweepParam::B => "B",
            SweepParam::L => "L",
            SweepParam::Gamma => "gamma",
        }
    }

    pub fn axis_label(self) -> &'static str {
        match self {
            SweepParam::M => "M (files)",
            SweepParam::B => "B (packets per file)",
            SweepParam::L => "L (requests per user)",
            SweepParam::Gamma => "gamma (Zipf exponent)",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HglcSpec {
    pub a: f64,
    pub b: f64,
}

impl Default for HglcSpec {
    fn default() -> Self {
        let d = HglcParams::default();
        HglcSpec { a: d.a, b: d.b }
    }
}

/// A sweep over one network parameter with a set of delivery schemes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub network: NetworkConfigFile,
    pub sweep: Sweep,
    pub schemes: Vec<Scheme>,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub hglc: HglcSpec,
    /// `None` verifies graphs of at most [`VERIFY_VERTEX_LIMIT`] vertices.
    #[serde(default)]
    pub verify_coding: Option<bool>,
}

impl ExperimentSpec {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let spec: ExperimentSpec = parse_json(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::config("trials must be at least 1"));
        }
        if self.sweep.values.is_empty() {
            return Err(Error::config("sweep has no values"));
        }
        if self.schemes.is_empty() {
            return Err(Error::config("no schemes selected"));
        }
        self.hglc_params()?;
        for i in 0..self.sweep.values.len() {
            self.point_config(i)?;
        }
        Ok(())
    }

    pub fn hglc_params(&self) -> Result<HglcParams> {
        HglcParams::new(self.hglc.a, self.hglc.b)
    }

    /// The network at sweep point `i`.
    pub fn point_config(&self, i: usize) -> Result<NetworkConfig> {
        let x = self.sweep.values[i];
        let mut file = self.network.clone();
        let whole = |name: &str| -> Result<usize> {
            if x < 0.0 || x.fract() != 0.0 {
                return Err(Error::config(format!(
                    "sweep value {x} for {name} is not a whole number"
                )));
            }
            Ok(x as usize)
        };
        match self.sweep.param {
            SweepParam::M => file.cache_sizes = PerUser::Same(x),
            SweepParam::B => file.packets = whole("B")?,
            SweepParam::L => file.requests = PerUser::Same(whole("L")?),
            SweepParam::Gamma => file.demand = DemandModel::Named(NamedDemand::Zipf { gamma: x }),
        }
        NetworkConfig::from_file(file)
    }

    fn schemes_dedup(&self) -> Vec<Scheme> {
        let mut out: Vec<Scheme> = Vec::new();
        for &s in &self.schemes {
            if !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }
}

/// One scheme's outcome on one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub point: usize,
    pub value: f64,
    pub scheme: Scheme,
    pub trial: usize,
    /// File units.
    pub rate: f64,
    pub nu: Option<usize>,
    pub num_colors: Option<usize>,
    pub vertices: Option<usize>,
    pub edges: Option<usize>,
    pub runtime_ms: f64,
    pub decode_ok: Option<bool>,
}

/// Mean rate per sweep point and scheme with a normal-approximation 95% interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub sweep_param: SweepParam,
    pub value: f64,
    pub scheme: Scheme,
    pub mean_rate: f64,
    pub ci95_lo: f64,
    pub ci95_hi: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub param: SweepParam,
    /// Ordered by sweep point, then scheme as listed in the spec, then trial.
    pub records: Vec<TrialRecord>,
    pub aggregates: Vec<Aggregate>,
}

impl ExperimentResult {
    pub fn aggregate(&self, value: f64, scheme: Scheme) -> Option<&Aggregate> {
        self.aggregates
            .iter()
            .find(|a| a.value == value && a.scheme == scheme)
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable 64-bit mix of a seed with a sequence of indices.
pub fn sub_seed(seed: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix(seed), |acc, &x| splitmix(acc ^ splitmix(x)))
}

/// Worker count: `COLOR_THREADS` if set to a positive integer, else rayon's default.
pub fn worker_count() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
}

struct Point {
    config: NetworkConfig,
    lfu_cache: Option<CacheRealization>,
    bound_gclc: Option<f64>,
    bound_lfu: Option<f64>,
}

/// Runs every sweep point and trial. Trials share one placement and demand
/// realization across schemes; HgLC additionally draws from its own stream.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let schemes = spec.schemes_dedup();
    let params = spec.hglc_params()?;
    let points = (0..spec.sweep.values.len())
        .map(|i| {
            let config = spec.point_config(i)?;
            let has = |s: Scheme| schemes.contains(&s);
            let bound_gclc = if has(Scheme::BoundGclc) {
                Some(
                    rate_bound(
                        &config,
                        PsiOptions {
                            seed: spec.seed,
                            ..Default::default()
                        },
                    )?
                    .r_gclc,
                )
            } else {
                None
            };
            Ok(Point {
                lfu_cache: has(Scheme::LfuSim).then(|| lfu_place(&config)),
                bound_lfu: has(Scheme::BoundLfu).then(|| lfu_rate(&config)),
                bound_gclc,
                config,
            })
        })
        .collect::<Result<Vec<Point>>>()?;

    let jobs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|i| (0..spec.trials).map(move |t| (i, t)))
        .collect();
    let work = || -> Result<Vec<Vec<TrialRecord>>> {
        jobs.par_iter()
            .map(|&(i, t)| run_trial(spec, &schemes, params, &points[i], i, t))
            .collect()
    };
    let per_job = match worker_count() {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::config(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };

    let mut records: Vec<TrialRecord> = per_job.into_iter().flatten().collect();
    let rank = |s: Scheme| schemes.iter().position(|&x| x == s).expect("listed");
    records.sort_by(|a, b| (a.point, rank(a.scheme), a.trial).cmp(&(b.point, rank(b.scheme), b.trial)));
    let aggregates = aggregate(spec.sweep.param, &records);
    Ok(ExperimentResult {
        param: spec.sweep.param,
        records,
        aggregates,
    })
}

fn run_trial(
    spec: &ExperimentSpec,
    schemes: &[Scheme],
    params: HglcParams,
    point: &Point,
    i: usize,
    t: usize,
) -> Result<Vec<TrialRecord>> {
    let cfg = &point.config;
    let value = spec.sweep.values[i];
    let base = sub_seed(spec.seed, &[i as u64, t as u64]);
    let requests = sample_requests(cfg, sub_seed(base, &[2]));
    let graph = if schemes.iter().any(|s| s.colors()) {
        let cache = rap_place(cfg, sub_seed(base, &[1]))?;
        let demand = DemandRealization::new(requests.clone(), &cache)?;
        Some(ConflictGraph::build(&cache, &demand)?)
    } else {
        None
    };
    let record = |scheme: Scheme, rate: f64| TrialRecord {
        point: i,
        value,
        scheme,
        trial: t,
        rate,
        nu: None,
        num_colors: None,
        vertices: None,
        edges: None,
        runtime_ms: 0.0,
        decode_ok: None,
    };

    let mut out = Vec::with_capacity(schemes.len());
    for &scheme in schemes {
        let start = Instant::now();
        let colored: Option<ColoringOutcome> = match scheme {
            Scheme::Gclc => Some(gclc(graph.as_ref().expect("built"), Grouping::Cardinality)),
            Scheme::Gclc2Only => Some(gclc2(graph.as_ref().expect("built"))),
            Scheme::Hglc => Some(hglc(
                graph.as_ref().expect("built"),
                params,
                sub_seed(base, &[3, scheme as u64]),
            )),
            _ => None,
        };
        let Some(outcome) = colored else {
            let rate = match scheme {
                Scheme::LfuSim => {
                    let lfu = point.lfu_cache.as_ref().expect("placed");
                    lfu_misses(lfu, &requests) as f64
                }
                Scheme::BoundGclc => point.bound_gclc.expect("computed"),
                Scheme::BoundLfu => point.bound_lfu.expect("computed"),
                _ => unreachable!("coloring schemes handled above"),
            };
            let mut r = record(scheme, rate);
            r.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
            out.push(r);
            continue;
        };
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        let g = graph.as_ref().expect("built");
        let verify = spec.verify_coding.unwrap_or(g.len() <= VERIFY_VERTEX_LIMIT);
        let decode_ok = if verify {
            let gm = mds_generator::<DefaultField>(outcome.num_colors(), outcome.local_number)?;
            let store = PacketStore::random(cfg.m(), cfg.packets(), 1, sub_seed(base, &[4]));
            verify_round_trip(g, &outcome, &gm, &store).map_err(|e| {
                Error::InvariantBreach(format!(
                    "{scheme} at {}={value}, trial {t}: {e}",
                    spec.sweep.param.name()
                ))
            })?;
            Some(true)
        } else {
            None
        };
        let mut r = record(scheme, outcome.rate(cfg.packets()));
        r.nu = Some(outcome.local_number);
        r.num_colors = Some(outcome.num_colors());
        r.vertices = Some(g.len());
        r.edges = Some(g.edge_count());
        r.runtime_ms = elapsed;
        r.decode_ok = decode_ok;
        out.push(r);
    }
    Ok(out)
}

/// Distinct requested files missing from at least one requester's whole-file cache.
pub fn lfu_misses(cache: &CacheRealization, requests: &[Vec<usize>]) -> usize {
    let mut missing: Vec<usize> = requests
        .iter()
        .enumerate()
        .flat_map(|(u, files)| {
            files
                .iter()
                .copied()
                .filter(move |&f| !cache.contains(u, PacketId::new(f, 0)))
        })
        .collect();
    missing.sort_unstable();
    missing.dedup();
    missing.len()
}

/// Groups records by (point, scheme) in record order.
pub fn aggregate(param: SweepParam, records: &[TrialRecord]) -> Vec<Aggregate> {
    let mut out: Vec<Aggregate> = Vec::new();
    let mut start = 0;
    while start < records.len() {
        let head = &records[start];
        let end = start
            + records[start..]
                .iter()
                .take_while(|r| r.point == head.point && r.scheme == head.scheme)
                .count();
        let rates: Vec<f64> = records[start..end].iter().map(|r| r.rate).collect();
        let n = rates.len() as f64;
        let mean = rates.iter().sum::<f64>() / n;
        let half = if rates.len() > 1 {
            let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0);
            1.96 * (var / n).sqrt()
        } else {
            0.0
        };
        out.push(Aggregate {
            sweep_param: param,
            value: head.value,
            scheme: head.scheme,
            mean_rate: mean,
            ci95_lo: mean - half,
            ci95_hi: mean + half,
            trials: rates.len(),
        });
        start = end;
    }
    out
}
