//! Synthetic graph families. Every generator labels its designated source
//! `s` and target `t`.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stpaths::{DirectedGraph, VertexId};

use crate::error::CliError;

/// Where a fixed-core appendage is attached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum AppendageSide {
    /// Downstream of `t` and upstream of `s`; neither scope traversal enters it.
    Outside,
    /// Reachable from `s` but unable to reach `t`; the forward scope covers it.
    Source,
}

/// Incrementally assigns ids to labelled vertices and collects edges.
#[derive(Default)]
struct Builder {
    labels: Vec<String>,
    edges: Vec<(VertexId, VertexId)>,
}

impl Builder {
    fn vertex(&mut self, label: String) -> VertexId {
        self.labels.push(label);
        VertexId((self.labels.len() - 1) as u32)
    }

    fn edge(&mut self, u: VertexId, v: VertexId) {
        self.edges.push((u, v));
    }

    fn finish(self) -> DirectedGraph {
        let (g, _) = DirectedGraph::from_edges(self.labels.len(), self.edges)
            .expect("generated ids are in range");
        g.with_labels(self.labels).expect("generated labels are unique")
    }
}

/// `s`, `core` intermediate vertices `c1..`, and `t`. Every core vertex is
/// entered from `s`, exits to `t`, and is joined both ways to every other
/// core vertex. There is no direct `s -> t` edge.
fn add_core(b: &mut Builder, core: usize) -> (VertexId, VertexId, Vec<VertexId>) {
    let s = b.vertex("s".into());
    let cs: Vec<VertexId> = (1..=core).map(|i| b.vertex(format!("c{i}"))).collect();
    let t = b.vertex("t".into());
    for &c in &cs {
        b.edge(s, c);
        b.edge(c, t);
        for &d in &cs {
            if c != d {
                b.edge(c, d);
            }
        }
    }
    (s, t, cs)
}

fn positive(name: &str, v: usize) -> Result<(), CliError> {
    if v == 0 {
        Err(CliError::Usage(format!("{name} must be positive")))
    } else {
        Ok(())
    }
}

/// A core plus `branches` dead branches fanning out of `s`. Each branch is
/// `length` layers of `width` vertices with every vertex of a layer linked to
/// every vertex of the next, so it holds `width^length` maximal walks while
/// never reaching `t`.
pub fn broom(
    branches: usize,
    length: usize,
    width: usize,
    core: usize,
) -> Result<DirectedGraph, CliError> {
    positive("length", length)?;
    positive("width", width)?;
    positive("core", core)?;
    let mut b = Builder::default();
    let (s, _, _) = add_core(&mut b, core);
    for j in 1..=branches {
        let mut prev = vec![s];
        for k in 1..=length {
            let layer: Vec<VertexId> = (1..=width)
                .map(|i| {
                    let name = if width == 1 { format!("b{j}_{k}") } else { format!("b{j}_{k}_{i}") };
                    b.vertex(name)
                })
                .collect();
            for &u in &prev {
                for &v in &layer {
                    b.edge(u, v);
                }
            }
            prev = layer;
        }
    }
    Ok(b.finish())
}

/// Complete digraph on `n` vertices, `s` first and `t` last.
pub fn complete(n: usize) -> Result<DirectedGraph, CliError> {
    if n < 2 {
        return Err(CliError::Usage("complete graph needs at least 2 vertices".into()));
    }
    let mut b = Builder::default();
    let vs: Vec<VertexId> = (0..n)
        .map(|i| {
            let name = match i {
                0 => "s".to_string(),
                i if i == n - 1 => "t".to_string(),
                i => format!("v{i}"),
            };
            b.vertex(name)
        })
        .collect();
    for &u in &vs {
        for &v in &vs {
            if u != v {
                b.edge(u, v);
            }
        }
    }
    Ok(b.finish())
}

/// Random digraph on `n` vertices. With `edges` set, exactly that many
/// distinct ordered pairs are drawn uniformly; otherwise each ordered pair is
/// an edge independently with probability `p`.
pub fn random(
    n: usize,
    p: Option<f64>,
    edges: Option<usize>,
    seed: u64,
) -> Result<DirectedGraph, CliError> {
    if n < 2 {
        return Err(CliError::Usage("random graph needs at least 2 vertices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Builder::default();
    for i in 0..n {
        let name = match i {
            0 => "s".to_string(),
            i if i == n - 1 => "t".to_string(),
            i => format!("v{i}"),
        };
        b.vertex(name);
    }
    match (p, edges) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("give either an edge probability or an edge count".into()))
        }
        (Some(p), None) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::Usage(format!("edge probability {p} outside [0, 1]")));
            }
            for u in 0..n as u32 {
                for v in 0..n as u32 {
                    if u != v && rng.gen_bool(p) {
                        b.edge(VertexId(u), VertexId(v));
                    }
                }
            }
        }
        (None, Some(m)) => {
            let max = n * (n - 1);
            if m > max {
                return Err(CliError::Usage(format!("{m} edges exceed the maximum {max}")));
            }
            let mut seen = HashSet::with_capacity(m);
            while seen.len() < m {
                let u = rng.gen_range(0..n as u32);
                let v = rng.gen_range(0..n as u32);
                if u != v && seen.insert((u, v)) {
                    b.edge(VertexId(u), VertexId(v));
                }
            }
        }
        (None, None) => {
            return Err(CliError::Usage("random graph needs an edge probability or count".into()))
        }
    }
    Ok(b.finish())
}

/// A fixed core plus an appendage of exactly `appendage` extra edges. The
/// pruned graph is the core (`core + 2` vertices) whatever the appendage size.
pub fn fixed_core(
    core: usize,
    appendage: usize,
    side: AppendageSide,
    seed: u64,
) -> Result<DirectedGraph, CliError> {
    positive("core", core)?;
    positive("appendage", appendage)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Builder::default();
    let (s, t, _) = add_core(&mut b, core);

    // Each region is a random recursive tree rooted at its anchor, topped up
    // with random extra edges inside the region. Downstream regions point
    // away from their anchor, upstream regions point towards it.
    let regions: Vec<(VertexId, bool, usize)> = match side {
        AppendageSide::Outside => {
            let down = appendage.div_ceil(2);
            vec![(t, true, down), (s, false, appendage - down)]
        }
        AppendageSide::Source => vec![(s, true, appendage)],
    };
    for (r, (anchor, downstream, budget)) in regions.into_iter().enumerate() {
        if budget == 0 {
            continue;
        }
        let size = (budget / 2).max(1);
        let mut members = vec![anchor];
        let mut seen = HashSet::new();
        let mut placed = 0;
        for i in 0..size {
            let v = b.vertex(format!("a{r}_{i}"));
            let parent = members[rng.gen_range(0..members.len())];
            members.push(v);
            let e = if downstream { (parent, v) } else { (v, parent) };
            seen.insert(e);
            b.edge(e.0, e.1);
            placed += 1;
        }
        // extra edges stay among non-anchor members so the anchor's degree
        // inside the region is fixed by the tree
        let inner = &members[1..];
        let capacity = inner.len() * inner.len().saturating_sub(1) + size;
        let target = budget.min(capacity);
        while placed < target {
            let u = inner[rng.gen_range(0..inner.len())];
            let v = inner[rng.gen_range(0..inner.len())];
            if u != v && seen.insert((u, v)) {
                b.edge(u, v);
                placed += 1;
            }
        }
    }
    Ok(b.finish())
}
