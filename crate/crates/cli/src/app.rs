//! Argument parsing and subcommand dispatch.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use stpaths::{
    espe_count, estimate_count, load_edge_list_file, pruned_espe_count, scope_stats, write_edge_list,
    CountLimits, DirectedGraph, LoadOptions, Variant, VertexId,
};

use crate::bench::{run_bench, write_csv, Algorithm, BenchConfig};
use crate::error::CliError;
use crate::generate::{self, AppendageSide};
use crate::render::{decimal, seconds};

#[derive(Debug, Parser)]
#[command(name = "stpaths", version, about = "Count simple s-t paths in directed graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count simple paths exactly.
    Count(CountArgs),
    /// Estimate the number of simple paths by importance sampling.
    Estimate(EstimateArgs),
    /// Report the size of the pruned search space.
    PruneStats(PruneStatsArgs),
    /// Run the benchmark protocol over random vertex pairs.
    Bench(BenchArgs),
    /// Write a synthetic graph as an edge list on standard output.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Baseline,
    Pruned,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Baseline => Variant::Baseline,
            VariantArg::Pruned => Variant::Pruned,
        }
    }
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// SNAP-style edge list.
    #[arg(long, value_name = "FILE")]
    pub graph: PathBuf,
    /// Accept a third (weight) column; weights are ignored.
    #[arg(long)]
    pub weighted: bool,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Source vertex label.
    #[arg(short = 's', long = "source", value_name = "LABEL")]
    pub source: String,
    /// Target vertex label.
    #[arg(short = 't', long = "target", value_name = "LABEL")]
    pub target: String,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Wall-clock budget in seconds.
    #[arg(long, value_name = "SECONDS")]
    pub time_limit: Option<f64>,
    /// Stop after this many paths.
    #[arg(long, value_name = "N")]
    pub max_paths: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub pair: PairArgs,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Enumerate on the unpruned graph.
    #[arg(long, conflicts_with = "pruned")]
    pub raw: bool,
    /// Enumerate on the pruned graph (default).
    #[arg(long)]
    pub pruned: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub pair: PairArgs,
    /// Number of samples.
    #[arg(short = 'n', long = "samples", default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = VariantArg::Pruned)]
    pub variant: VariantArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PruneStatsArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Number of random (s, t) pairs.
    #[arg(long, default_value_t = 500)]
    pub pairs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Only draw pairs where t is reachable from s.
    #[arg(long)]
    pub require_reachable: bool,
    /// Give up drawing reachable pairs after this many attempts.
    #[arg(long, default_value_t = 1_000_000)]
    pub max_attempts: u64,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Algorithms to run, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "prune-stats")]
    pub algorithms: Vec<Algorithm>,
    /// Samples per estimate.
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    /// Run only this source (requires --target).
    #[arg(long, requires = "target", value_name = "LABEL")]
    pub source: Option<String>,
    /// Run only this target (requires --source).
    #[arg(long, requires = "source", value_name = "LABEL")]
    pub target: Option<String>,
    /// Also write the per-pair CSV here.
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// Also write the JSON summary here.
    #[arg(long, value_name = "FILE")]
    pub summary: Option<PathBuf>,
    /// Standard output: the summary as JSON, or the per-pair rows as CSV.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub kind: GraphKind,
}

#[derive(Debug, Subcommand)]
pub enum GraphKind {
    /// Core s-t structure plus dead branches fanning out of s.
    Broom {
        #[arg(long, default_value_t = 4)]
        branches: usize,
        /// Layers per branch.
        #[arg(long, default_value_t = 1)]
        length: usize,
        /// Vertices per branch layer.
        #[arg(long, default_value_t = 1)]
        width: usize,
        /// Intermediate core vertices between s and t.
        #[arg(long, default_value_t = 1)]
        core: usize,
    },
    /// Uniform random digraph.
    Random {
        #[arg(long)]
        vertices: usize,
        /// Independent edge probability.
        #[arg(long, conflicts_with = "edges")]
        edge_prob: Option<f64>,
        /// Exact number of distinct edges.
        #[arg(long)]
        edges: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Complete digraph.
    Complete {
        #[arg(long)]
        vertices: usize,
    },
    /// Fixed-size core plus an appendage of a given number of edges.
    FixedCore {
        #[arg(long, default_value_t = 4)]
        core: usize,
        #[arg(long)]
        appendage: usize,
        #[arg(long, value_enum, default_value_t = AppendageSide::Outside)]
        side: AppendageSide,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn load(args: &GraphArgs) -> Result<DirectedGraph, CliError> {
    let loaded = load_edge_list_file(&args.graph, LoadOptions { weighted: args.weighted })?;
    if loaded.stats.self_loops_dropped > 0 || loaded.stats.duplicates_collapsed > 0 {
        eprintln!(
            "{}: dropped {} self-loops, collapsed {} duplicate edges",
            args.graph.display(),
            loaded.stats.self_loops_dropped,
            loaded.stats.duplicates_collapsed
        );
    }
    Ok(loaded.graph)
}

fn resolve(g: &DirectedGraph, label: &str) -> Result<VertexId, CliError> {
    g.vertex_by_label(label).ok_or_else(|| CliError::UnknownLabel(label.to_owned()))
}

fn resolve_pair(g: &DirectedGraph, pair: &PairArgs) -> Result<(VertexId, VertexId), CliError> {
    let s = resolve(g, &pair.source)?;
    let t = resolve(g, &pair.target)?;
    if s == t {
        return Err(CliError::Usage(format!("source and target are both {:?}", pair.source)));
    }
    Ok((s, t))
}

fn limits(args: &LimitArgs) -> Result<CountLimits, CliError> {
    let time = match args.time_limit {
        Some(secs) if !(secs.is_finite() && secs > 0.0) => {
            return Err(CliError::Usage(format!("time limit {secs} must be positive")))
        }
        Some(secs) => Some(Duration::from_secs_f64(secs)),
        None => None,
    };
    Ok(CountLimits::new(args.max_paths, time)?)
}

/// Writes a flat JSON object, or a two-line CSV with the same keys.
fn emit<W: Write>(out: &mut W, format: Format, obj: Value) -> Result<(), CliError> {
    match format {
        Format::Json => {
            serde_json::to_writer(&mut *out, &obj)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let map = obj.as_object().expect("flat object");
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(map.keys())?;
            w.write_record(map.values().map(|v| match v {
                Value::String(s) => s.clone(),
                Value::Null => String::new(),
                other => other.to_string(),
            }))?;
            w.flush()?;
        }
    }
    Ok(())
}

fn cmd_count<W: Write>(args: &CountArgs, out: &mut W) -> Result<(), CliError> {
    let g = load(&args.graph)?;
    let (s, t) = resolve_pair(&g, &args.pair)?;
    let limits = limits(&args.limits)?;
    let obj = if args.raw {
        let r = espe_count(&g, s, t, limits)?;
        json!({
            "source": args.pair.source,
            "target": args.pair.target,
            "mode": "raw",
            "count": r.count.to_string(),
            "complete": r.complete,
            "elapsed_prune": 0.0,
            "elapsed_total": seconds(r.elapsed),
            "intersection_size": Value::Null,
        })
    } else {
        let r = pruned_espe_count(&g, s, t, limits)?;
        json!({
            "source": args.pair.source,
            "target": args.pair.target,
            "mode": "pruned",
            "count": r.count.to_string(),
            "complete": r.complete,
            "elapsed_prune": seconds(r.elapsed_prune),
            "elapsed_total": seconds(r.elapsed_total),
            "intersection_size": r.intersection_size,
        })
    };
    emit(out, args.format, obj)
}

fn cmd_estimate<W: Write>(args: &EstimateArgs, out: &mut W) -> Result<(), CliError> {
    if args.samples == 0 {
        return Err(CliError::Usage("samples must be at least 1".into()));
    }
    let g = load(&args.graph)?;
    let (s, t) = resolve_pair(&g, &args.pair)?;
    let r = estimate_count(&g, s, t, args.samples, args.seed, args.variant.into())?;
    let obj = json!({
        "source": args.pair.source,
        "target": args.pair.target,
        "variant": r.variant.name(),
        "n_samples": r.n_samples,
        "estimate": decimal(&r.estimate),
        "sample_variance": r.sample_variance.as_ref().map(decimal),
        "variance_of_mean": r.variance_of_mean().as_ref().map(decimal),
        "dead_end_samples": r.dead_end_samples,
        "seed": r.seed,
        "elapsed": seconds(r.elapsed),
        "pruned_vertices": r.pruned_vertices,
    });
    emit(out, args.format, obj)
}

fn cmd_prune_stats<W: Write>(args: &PruneStatsArgs, out: &mut W) -> Result<(), CliError> {
    let g = load(&args.graph)?;
    let (s, t) = resolve_pair(&g, &args.pair)?;
    let st = scope_stats(&g, s, t)?;
    let obj = json!({
        "source": args.pair.source,
        "target": args.pair.target,
        "intersection_size": st.intersection_size,
        "vertex_count": st.vertex_count,
        "ratio": st.ratio(),
        "elapsed": seconds(st.elapsed),
    });
    emit(out, args.format, obj)
}

fn cmd_bench<W: Write>(args: &BenchArgs, out: &mut W) -> Result<(), CliError> {
    let g = load(&args.graph)?;
    let per_pair_time_limit = limits(&args.limits)?.max_time();
    let fixed_pair = match (&args.source, &args.target) {
        (Some(s), Some(t)) => {
            let pair = PairArgs { source: s.clone(), target: t.clone() };
            Some(resolve_pair(&g, &pair)?)
        }
        _ => None,
    };
    let config = BenchConfig {
        pairs: if fixed_pair.is_some() { 1 } else { args.pairs },
        seed: args.seed,
        require_reachable: args.require_reachable,
        per_pair_time_limit,
        max_paths: args.limits.max_paths,
        algorithms: args.algorithms.iter().copied().collect::<BTreeSet<_>>(),
        samples: args.samples,
        max_attempts: args.max_attempts,
        fixed_pair,
    };
    let report = run_bench(&g, &config)?;
    if let Some(path) = &args.csv {
        write_csv(&report, std::fs::File::create(path)?)?;
    }
    if let Some(path) = &args.summary {
        write_summary(&report, path)?;
    }
    match args.format {
        Format::Csv => write_csv(&report, &mut *out)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &report.summary)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn write_summary(report: &crate::bench::BenchReport, path: &Path) -> Result<(), CliError> {
    let mut f = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, &report.summary)?;
    writeln!(f)?;
    Ok(())
}

fn cmd_generate<W: Write>(args: &GenerateArgs, out: &mut W) -> Result<(), CliError> {
    let g = match args.kind {
        GraphKind::Broom { branches, length, width, core } => {
            generate::broom(branches, length, width, core)?
        }
        GraphKind::Random { vertices, edge_prob, edges, seed } => {
            generate::random(vertices, edge_prob, edges, seed)?
        }
        GraphKind::Complete { vertices } => generate::complete(vertices)?,
        GraphKind::FixedCore { core, appendage, side, seed } => {
            generate::fixed_core(core, appendage, side, seed)?
        }
    };
    write_edge_list(&g, &mut *out)?;
    Ok(())
}

/// Runs a parsed command, writing results to `out`.
pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<(), CliError> {
    match &cli.command {
        Command::Count(a) => cmd_count(a, out),
        Command::Estimate(a) => cmd_estimate(a, out),
        Command::PruneStats(a) => cmd_prune_stats(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Generate(a) => cmd_generate(a, out),
    }
}
