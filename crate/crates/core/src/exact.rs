//! Exhaustive s-t simple path enumeration by backtracking.

use std::fmt;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, VertexId};
use crate::pruning::prune;

/// Number of s-t simple paths. Unbounded so factorial growth never wraps.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathCount(pub BigUint);

impl PathCount {
    pub fn zero() -> Self {
        PathCount(BigUint::default())
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

impl From<u64> for PathCount {
    fn from(v: u64) -> Self {
        PathCount(BigUint::from(v))
    }
}

impl fmt::Display for PathCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Optional caps on an enumeration. Hitting one is not an error; the run
/// reports `complete = false` and the count is a lower bound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CountLimits {
    max_paths: Option<u64>,
    max_time: Option<Duration>,
}

impl CountLimits {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn new(max_paths: Option<u64>, max_time: Option<Duration>) -> Result<Self> {
        if max_paths == Some(0) {
            return Err(Error::InvalidArgument("max_paths must be positive".into()));
        }
        if max_time.is_some_and(|d| d.is_zero()) {
            return Err(Error::InvalidArgument("time limit must be positive".into()));
        }
        Ok(CountLimits { max_paths, max_time })
    }

    pub fn with_max_paths(self, n: u64) -> Result<Self> {
        Self::new(Some(n), self.max_time)
    }

    pub fn with_max_time(self, d: Duration) -> Result<Self> {
        Self::new(self.max_paths, Some(d))
    }

    pub fn max_paths(&self) -> Option<u64> {
        self.max_paths
    }

    pub fn max_time(&self) -> Option<Duration> {
        self.max_time
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountOutcome {
    pub count: PathCount,
    pub complete: bool,
    pub elapsed: Duration,
}

// Clock reads are amortised over this many search steps.
const CLOCK_STRIDE: u32 = 1 << 12;

/// Enumerates every simple path from `s` to `t`, calling `sink` once per
/// path in lexicographic order of vertex sequences. The sink may return
/// `ControlFlow::Break` to stop early.
pub fn espe_enumerate<F>(
    g: &DirectedGraph,
    s: VertexId,
    t: VertexId,
    limits: CountLimits,
    mut sink: F,
) -> Result<CountOutcome>
where
    F: FnMut(&[VertexId]) -> ControlFlow<()>,
{
    run(g, s, t, limits, Some(&mut sink))
}

/// Counts simple paths from `s` to `t` without pruning.
pub fn espe_count(
    g: &DirectedGraph,
    s: VertexId,
    t: VertexId,
    limits: CountLimits,
) -> Result<CountOutcome> {
    run::<fn(&[VertexId]) -> ControlFlow<()>>(g, s, t, limits, None)
}

fn run<F>(
    g: &DirectedGraph,
    s: VertexId,
    t: VertexId,
    limits: CountLimits,
    mut sink: Option<&mut F>,
) -> Result<CountOutcome>
where
    F: FnMut(&[VertexId]) -> ControlFlow<()>,
{
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if s == t {
        return Err(Error::SameEndpoints(s.index()));
    }
    let start = Instant::now();
    let deadline = limits.max_time.map(|d| start + d);

    let mut count: u64 = 0;
    let mut overflow = BigUint::default();
    let mut complete = true;

    let mut on_path = vec![false; g.vertex_count()];
    // (vertex, index of the next out-neighbor to try)
    let mut stack: Vec<(VertexId, usize)> = vec![(s, 0)];
    let mut path: Vec<VertexId> = vec![s];
    on_path[s.index()] = true;
    let mut ticks = 0u32;

    while let Some(top) = stack.last_mut() {
        let (v, i) = *top;
        let nbrs = g.out_neighbors(v);
        if i == nbrs.len() {
            on_path[v.index()] = false;
            stack.pop();
            path.pop();
            continue;
        }
        top.1 += 1;

        ticks += 1;
        if ticks == CLOCK_STRIDE {
            ticks = 0;
            if deadline.is_some_and(|d| Instant::now() >= d) {
                complete = false;
                break;
            }
        }

        let w = nbrs[i];
        if on_path[w.index()] {
            continue;
        }
        if w == t {
            if limits.max_paths.is_some_and(|cap| count == cap && overflow.bits() == 0) {
                complete = false;
                break;
            }
            match count.checked_add(1) {
                Some(c) => count = c,
                None => {
                    overflow += count;
                    count = 1;
                }
            }
            if let Some(sink) = sink.as_mut() {
                path.push(t);
                let flow = sink(&path);
                path.pop();
                if flow.is_break() {
                    complete = false;
                    break;
                }
            }
            continue;
        }
        on_path[w.index()] = true;
        stack.push((w, 0));
        path.push(w);
    }

    Ok(CountOutcome {
        count: PathCount(overflow + count),
        complete,
        elapsed: start.elapsed(),
    })
}

/// Result of counting on the pruned graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrunedCountOutcome {
    pub count: PathCount,
    pub complete: bool,
    /// Pruning plus enumeration.
    pub elapsed_total: Duration,
    pub elapsed_prune: Duration,
    /// Vertices retained by pruning. Zero on the degree early exit.
    pub intersection_size: usize,
}

/// Prunes to the scope intersection, then enumerates there. Paths handed to
/// `sink` use the parent graph's ids.
pub fn pruned_espe_enumerate<F>(
    g: &DirectedGraph,
    s: VertexId,
    t: VertexId,
    limits: CountLimits,
    mut sink: F,
) -> Result<PrunedCountOutcome>
where
    F: FnMut(&[VertexId]) -> ControlFlow<()>,
{
    pruned_run(g, s, t, limits, Some(&mut sink))
}

/// Prunes to the scope intersection, then counts there.
pub fn pruned_espe_count(
    g: &DirectedGraph,
    s: VertexId,
    t: VertexId,
    limits: CountLimits,
) -> Result<PrunedCountOutcome> {
    pruned_run::<fn(&[VertexId]) -> ControlFlow<()>>(g, s, t, limits, None)
}

fn pruned_run<F>(
    g: &DirectedGraph,
    s: VertexId,
    t: VertexId,
    limits: CountLimits,
    sink: Option<&mut F>,
) -> Result<PrunedCountOutcome>
where
    F: FnMut(&[VertexId]) -> ControlFlow<()>,
{
    let start = Instant::now();
    let pruned = prune(g, s, t)?;
    let elapsed_prune = start.elapsed();
    let intersection_size = pruned.intersection_size();
    let finish = |count: PathCount, complete: bool| PrunedCountOutcome {
        count,
        complete,
        elapsed_total: start.elapsed(),
        elapsed_prune,
        intersection_size,
    };

    let Some((ls, lt)) = pruned.endpoints else {
        return Ok(finish(PathCount::zero(), true));
    };
    let max_time = match limits.max_time {
        Some(budget) => match budget.checked_sub(elapsed_prune) {
            Some(rest) if !rest.is_zero() => Some(rest),
            _ => return Ok(finish(PathCount::zero(), false)),
        },
        None => None,
    };
    let local_limits = CountLimits { max_paths: limits.max_paths, max_time };

    let outcome = match sink {
        Some(sink) => {
            let mut translated = Vec::new();
            espe_enumerate(pruned.graph(), ls, lt, local_limits, |p| {
                translated.clear();
                translated.extend(p.iter().map(|&v| pruned.induced.to_parent(v)));
                sink(&translated)
            })?
        }
        None => espe_count(pruned.graph(), ls, lt, local_limits)?,
    };
    Ok(finish(outcome.count, outcome.complete))
}
