//! Benchmark protocol over random (s, t) pairs.
//!
//! Pairs are drawn uniformly at random (optionally requiring that `t` is
//! reachable from `s`), each configured algorithm runs on every pair, and the
//! per-pair records are aggregated into the maxima reported by the harness:
//! largest retained fraction of the graph (`max_sz`), slowest pruning
//! (`max_tm`), and per algorithm the largest count and slowest total run.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Duration;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use stpaths::{
    espe_count, estimate_count, pruned_espe_count, scope_stats, CountLimits, DirectedGraph,
    EstimateReport, Variant, VertexId,
};

use crate::error::CliError;
use crate::render::{decimal, seconds};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    PruneStats,
    Espe,
    PrunedEspe,
    EstimateBaseline,
    EstimatePruned,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::PruneStats,
        Algorithm::Espe,
        Algorithm::PrunedEspe,
        Algorithm::EstimateBaseline,
        Algorithm::EstimatePruned,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::PruneStats => "prune-stats",
            Algorithm::Espe => "espe",
            Algorithm::PrunedEspe => "pruned-espe",
            Algorithm::EstimateBaseline => "estimate-baseline",
            Algorithm::EstimatePruned => "estimate-pruned",
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub pairs: usize,
    pub seed: u64,
    pub require_reachable: bool,
    pub per_pair_time_limit: Option<Duration>,
    pub max_paths: Option<u64>,
    pub algorithms: BTreeSet<Algorithm>,
    /// Samples per estimate.
    pub samples: u64,
    /// Rejection-sampling cap when `require_reachable` is set.
    pub max_attempts: u64,
    /// Run only this pair instead of drawing.
    pub fixed_pair: Option<(VertexId, VertexId)>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            pairs: 500,
            seed: 0,
            require_reachable: false,
            per_pair_time_limit: None,
            max_paths: None,
            algorithms: BTreeSet::from([Algorithm::PruneStats]),
            samples: 1000,
            max_attempts: 1_000_000,
            fixed_pair: None,
        }
    }
}

impl BenchConfig {
    fn validate(&self) -> Result<(), CliError> {
        if self.pairs == 0 {
            return Err(CliError::Usage("pairs must be at least 1".into()));
        }
        if self.samples == 0 {
            return Err(CliError::Usage("samples must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(CliError::Usage("no algorithms selected".into()));
        }
        CountLimits::new(self.max_paths, self.per_pair_time_limit)?;
        Ok(())
    }
}

/// Exact-count result for one pair.
#[derive(Clone, Debug, Serialize)]
pub struct CountCell {
    pub count: String,
    pub complete: bool,
    pub total_seconds: f64,
}

/// Estimate result for one pair.
#[derive(Clone, Debug, Serialize)]
pub struct EstimateCell {
    pub estimate: String,
    pub dead_end_samples: u64,
    pub total_seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairRecord {
    pub index: usize,
    pub s_label: String,
    pub t_label: String,
    pub intersection_size: Option<usize>,
    pub ratio: Option<f64>,
    pub prune_seconds: Option<f64>,
    pub espe: Option<CountCell>,
    pub pruned_espe: Option<CountCell>,
    pub estimate_baseline: Option<EstimateCell>,
    pub estimate_pruned: Option<EstimateCell>,
    #[serde(skip)]
    count_values: [Option<BigUint>; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    /// Largest count (or estimate) over all pairs, as a decimal string.
    pub max_paths: String,
    pub max_total_seconds: f64,
    pub incomplete_pairs: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchSummary {
    pub vertices: usize,
    pub edges: usize,
    pub pairs: usize,
    pub seed: u64,
    pub require_reachable: bool,
    /// Max over pairs of |intersection| / |V|.
    pub max_sz: Option<f64>,
    /// Max over pairs of the scope computation time, in seconds.
    pub max_tm: Option<f64>,
    pub algorithms: Vec<AlgorithmSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub summary: BenchSummary,
    pub records: Vec<PairRecord>,
}

/// Plain BFS reachability test, kept apart from scope computation so that
/// pair selection does not touch the code being timed.
pub fn reachable(g: &DirectedGraph, s: VertexId, t: VertexId) -> bool {
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = std::collections::VecDeque::from([s]);
    seen[s.index()] = true;
    while let Some(v) = queue.pop_front() {
        if v == t {
            return true;
        }
        for &w in g.out_neighbors(v) {
            if !seen[w.index()] {
                seen[w.index()] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

/// Draws the benchmark pairs. Deterministic given the seed.
pub fn draw_pairs(g: &DirectedGraph, config: &BenchConfig) -> Result<Vec<(VertexId, VertexId)>, CliError> {
    if let Some(pair) = config.fixed_pair {
        return Ok(vec![pair]);
    }
    let n = g.vertex_count();
    if n < 2 {
        return Err(CliError::Usage("graph needs at least 2 vertices to draw pairs".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut pairs = Vec::with_capacity(config.pairs);
    let mut attempts = 0u64;
    while pairs.len() < config.pairs {
        if attempts >= config.max_attempts {
            return Err(CliError::Resource(format!(
                "found only {} of {} pairs after {attempts} attempts",
                pairs.len(),
                config.pairs
            )));
        }
        attempts += 1;
        let s = VertexId(rng.gen_range(0..n as u32));
        let t = VertexId(rng.gen_range(0..n as u32));
        if s == t {
            continue;
        }
        if config.require_reachable && !reachable(g, s, t) {
            continue;
        }
        pairs.push((s, t));
    }
    Ok(pairs)
}

fn estimate_cell(r: &EstimateReport) -> EstimateCell {
    EstimateCell {
        estimate: decimal(&r.estimate),
        dead_end_samples: r.dead_end_samples,
        total_seconds: seconds(r.elapsed),
    }
}

/// Runs every configured algorithm on every pair.
pub fn run_bench(g: &DirectedGraph, config: &BenchConfig) -> Result<BenchReport, CliError> {
    config.validate()?;
    let pairs = draw_pairs(g, config)?;
    let limits = CountLimits::new(config.max_paths, config.per_pair_time_limit)?;
    let has = |a: Algorithm| config.algorithms.contains(&a);

    let mut records = Vec::with_capacity(pairs.len());
    for (index, &(s, t)) in pairs.iter().enumerate() {
        let mut rec = PairRecord {
            index,
            s_label: g.display_name(s),
            t_label: g.display_name(t),
            intersection_size: None,
            ratio: None,
            prune_seconds: None,
            espe: None,
            pruned_espe: None,
            estimate_baseline: None,
            estimate_pruned: None,
            count_values: [None, None],
        };
        if has(Algorithm::PruneStats) {
            let st = scope_stats(g, s, t)?;
            rec.intersection_size = Some(st.intersection_size);
            rec.ratio = Some(st.ratio());
            rec.prune_seconds = Some(seconds(st.elapsed));
        }
        if has(Algorithm::Espe) {
            let out = espe_count(g, s, t, limits)?;
            rec.espe = Some(CountCell {
                count: out.count.to_string(),
                complete: out.complete,
                total_seconds: seconds(out.elapsed),
            });
            rec.count_values[0] = Some(out.count.0);
        }
        if has(Algorithm::PrunedEspe) {
            let out = pruned_espe_count(g, s, t, limits)?;
            rec.pruned_espe = Some(CountCell {
                count: out.count.to_string(),
                complete: out.complete,
                total_seconds: seconds(out.elapsed_total),
            });
            rec.count_values[1] = Some(out.count.0);
        }
        let pair_seed = config.seed.wrapping_add(1 + index as u64);
        if has(Algorithm::EstimateBaseline) {
            let r = estimate_count(g, s, t, config.samples, pair_seed, Variant::Baseline)?;
            rec.estimate_baseline = Some(estimate_cell(&r));
        }
        if has(Algorithm::EstimatePruned) {
            let r = estimate_count(g, s, t, config.samples, pair_seed, Variant::Pruned)?;
            rec.estimate_pruned = Some(estimate_cell(&r));
        }
        records.push(rec);
    }

    let summary = summarize(g, config, &records);
    Ok(BenchReport { summary, records })
}

fn max_f64(it: impl Iterator<Item = f64>) -> Option<f64> {
    it.fold(None, |acc, x| Some(acc.map_or(x, |a: f64| a.max(x))))
}

fn summarize(g: &DirectedGraph, config: &BenchConfig, records: &[PairRecord]) -> BenchSummary {
    let mut algorithms = Vec::new();
    for alg in Algorithm::ALL.into_iter().filter(|a| config.algorithms.contains(a)) {
        let summary = match alg {
            Algorithm::PruneStats => continue,
            Algorithm::Espe | Algorithm::PrunedEspe => {
                let slot = usize::from(alg == Algorithm::PrunedEspe);
                let cells = records.iter().filter_map(|r| match alg {
                    Algorithm::Espe => r.espe.as_ref(),
                    _ => r.pruned_espe.as_ref(),
                });
                let max_paths = records
                    .iter()
                    .filter_map(|r| r.count_values[slot].clone())
                    .max()
                    .unwrap_or_default();
                AlgorithmSummary {
                    algorithm: alg,
                    max_paths: max_paths.to_string(),
                    max_total_seconds: max_f64(cells.clone().map(|c| c.total_seconds)).unwrap_or(0.0),
                    incomplete_pairs: cells.filter(|c| !c.complete).count(),
                }
            }
            Algorithm::EstimateBaseline | Algorithm::EstimatePruned => {
                let cells: Vec<&EstimateCell> = records
                    .iter()
                    .filter_map(|r| match alg {
                        Algorithm::EstimateBaseline => r.estimate_baseline.as_ref(),
                        _ => r.estimate_pruned.as_ref(),
                    })
                    .collect();
                // estimates are decimal strings; compare numerically
                let max_paths = cells
                    .iter()
                    .max_by(|a, b| {
                        let (x, y): (f64, f64) =
                            (a.estimate.parse().unwrap_or(0.0), b.estimate.parse().unwrap_or(0.0));
                        x.total_cmp(&y)
                    })
                    .map_or_else(|| "0".to_string(), |c| c.estimate.clone());
                AlgorithmSummary {
                    algorithm: alg,
                    max_paths,
                    max_total_seconds: max_f64(cells.iter().map(|c| c.total_seconds)).unwrap_or(0.0),
                    incomplete_pairs: 0,
                }
            }
        };
        algorithms.push(summary);
    }
    BenchSummary {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        pairs: records.len(),
        seed: config.seed,
        require_reachable: config.require_reachable,
        max_sz: max_f64(records.iter().filter_map(|r| r.ratio)),
        max_tm: max_f64(records.iter().filter_map(|r| r.prune_seconds)),
        algorithms,
    }
}

/// Column names of the per-pair CSV. Columns ending in `_seconds` carry
/// wall-clock timings; all others are deterministic given the seed.
pub const CSV_HEADER: [&str; 19] = [
    "pair",
    "s",
    "t",
    "intersection_size",
    "ratio",
    "prune_seconds",
    "espe_count",
    "espe_complete",
    "espe_seconds",
    "pruned_espe_count",
    "pruned_espe_complete",
    "pruned_espe_seconds",
    "estimate_baseline",
    "estimate_baseline_dead_ends",
    "estimate_baseline_seconds",
    "estimate_pruned",
    "estimate_pruned_dead_ends",
    "estimate_pruned_seconds",
    "total_seconds",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl PairRecord {
    /// Wall time spent on this pair across all algorithms.
    pub fn total_seconds(&self) -> f64 {
        self.prune_seconds.unwrap_or(0.0)
            + self.espe.as_ref().map_or(0.0, |c| c.total_seconds)
            + self.pruned_espe.as_ref().map_or(0.0, |c| c.total_seconds)
            + self.estimate_baseline.as_ref().map_or(0.0, |c| c.total_seconds)
            + self.estimate_pruned.as_ref().map_or(0.0, |c| c.total_seconds)
    }

    fn csv_row(&self) -> Vec<String> {
        let count = |c: &Option<CountCell>| {
            [
                opt(c.as_ref().map(|c| c.count.clone())),
                opt(c.as_ref().map(|c| c.complete)),
                opt(c.as_ref().map(|c| c.total_seconds)),
            ]
        };
        let est = |c: &Option<EstimateCell>| {
            [
                opt(c.as_ref().map(|c| c.estimate.clone())),
                opt(c.as_ref().map(|c| c.dead_end_samples)),
                opt(c.as_ref().map(|c| c.total_seconds)),
            ]
        };
        let mut row = vec![
            self.index.to_string(),
            self.s_label.clone(),
            self.t_label.clone(),
            opt(self.intersection_size),
            opt(self.ratio),
            opt(self.prune_seconds),
        ];
        row.extend(count(&self.espe));
        row.extend(count(&self.pruned_espe));
        row.extend(est(&self.estimate_baseline));
        row.extend(est(&self.estimate_pruned));
        row.push(self.total_seconds().to_string());
        row
    }
}

/// Writes one CSV row per pair, in pair order, with a header row.
pub fn write_csv<W: Write>(report: &BenchReport, out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &report.records {
        w.write_record(r.csv_row())?;
    }
    w.flush()?;
    Ok(())
}
