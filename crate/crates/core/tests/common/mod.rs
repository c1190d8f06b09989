//! Test-only oracles and fixtures. Nothing here calls into the code paths
//! it is used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use stpaths::{load_edge_list, DirectedGraph, LoadOptions, VertexId};

/// The 8-vertex example: s fans out to v1..v5, only v5 continues to t, and v6
/// hangs off t.
pub const EXAMPLE_EDGES: &str = "\
# s fans out to five vertices; only v5 leads on to t
s v1
s v2
s v3
s v4
s v5
v5 t
t v6
";

pub fn example_graph() -> DirectedGraph {
    load_edge_list(EXAMPLE_EDGES.as_bytes(), LoadOptions::default()).unwrap().graph
}

pub fn id(g: &DirectedGraph, label: &str) -> VertexId {
    g.vertex_by_label(label).unwrap_or_else(|| panic!("no vertex {label}"))
}

pub fn ids(g: &DirectedGraph, labels: &[&str]) -> BTreeSet<VertexId> {
    labels.iter().map(|l| id(g, l)).collect()
}

/// Erdős–Rényi style digraph: each ordered pair (u, v), u != v, is an edge
/// with probability `p`.
pub fn random_digraph<R: Rng>(n: usize, p: f64, rng: &mut R) -> DirectedGraph {
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in 0..n as u32 {
            if u != v && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    DirectedGraph::from_pairs(n, &edges)
}

pub fn complete_digraph(n: u32) -> DirectedGraph {
    let edges: Vec<(u32, u32)> =
        (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    DirectedGraph::from_pairs(n as usize, &edges)
}

/// The four-vertex trap {s=0, a=1, b=2, t=3}: s->a, a->b, a->t, b->a. Every
/// vertex survives pruning, yet b lies on no simple s-t path and the walk
/// s->a->b strands.
pub fn trap_graph() -> DirectedGraph {
    DirectedGraph::from_pairs(4, &[(0, 1), (1, 2), (1, 3), (2, 1)])
}

/// Plain recursive enumeration of all simple s-t paths, straight from the
/// definition.
pub fn naive_paths(g: &DirectedGraph, s: VertexId, t: VertexId) -> Vec<Vec<VertexId>> {
    fn go(
        g: &DirectedGraph,
        t: VertexId,
        path: &mut Vec<VertexId>,
        out: &mut Vec<Vec<VertexId>>,
    ) {
        let last = *path.last().unwrap();
        if last == t {
            out.push(path.clone());
            return;
        }
        for (u, w) in g.edges() {
            if u == last && !path.contains(&w) {
                path.push(w);
                go(g, t, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, t, &mut vec![s], &mut out);
    out
}

/// `{s} ∪ {v : some simple path s ⇝ v has no interior vertex equal to t}`,
/// found by walking every simple path from s.
pub fn oracle_scope(g: &DirectedGraph, s: VertexId, t: VertexId) -> BTreeSet<VertexId> {
    fn go(g: &DirectedGraph, t: VertexId, path: &mut Vec<VertexId>, seen: &mut BTreeSet<VertexId>) {
        let last = *path.last().unwrap();
        seen.insert(last);
        if last == t {
            return;
        }
        for (u, w) in g.edges() {
            if u == last && !path.contains(&w) {
                path.push(w);
                go(g, t, path, seen);
                path.pop();
            }
        }
    }
    let mut seen = BTreeSet::new();
    go(g, t, &mut vec![s], &mut seen);
    seen
}

/// Checks the simple-path contract for `p` on `g`.
pub fn assert_simple_path(g: &DirectedGraph, p: &[VertexId], s: VertexId, t: VertexId) {
    assert_eq!(p.first(), Some(&s));
    assert_eq!(p.last(), Some(&t));
    let distinct: BTreeSet<_> = p.iter().collect();
    assert_eq!(distinct.len(), p.len(), "repeated vertex in {p:?}");
    for w in p.windows(2) {
        assert!(g.has_edge(w[0], w[1]), "{:?}->{:?} is not an edge", w[0], w[1]);
    }
}
