//! Scope-based pruning of the search space for s-t simple paths.
//!
//! The scope of `s` with respect to `t` holds `s` and every vertex reachable
//! from `s` by a directed path that never continues through `t`. The inverse
//! scope of `t` with respect to `s` is the mirror image: `t` and every vertex
//! that reaches `t` without continuing through `s`. Any simple s-t path lies
//! entirely inside their intersection, so counting on the subgraph induced by
//! the intersection gives the same answer as counting on the whole graph.

use std::time::{Duration, Instant};

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, InducedSubgraph, VertexId};

/// Sets smaller than `universe / SPARSE_FRACTION` stay hashed; larger ones
/// switch to a dense flag array.
const SPARSE_FRACTION: usize = 64;

#[derive(Clone, Debug)]
enum Membership {
    Sparse(FxHashSet<VertexId>),
    Dense(Vec<bool>),
}

/// A vertex subset of a graph with O(1) membership and discovery-ordered
/// members.
///
/// Small sets are kept in a hash set, so building one costs time
/// proportional to its size rather than to the size of the graph.
#[derive(Clone, Debug)]
pub struct VertexSet {
    universe: usize,
    membership: Membership,
    members: Vec<VertexId>,
}

impl VertexSet {
    fn with_universe(n: usize) -> Self {
        VertexSet {
            universe: n,
            membership: Membership::Sparse(FxHashSet::default()),
            members: Vec::new(),
        }
    }

    /// Inserts `v`; returns false if it was already present.
    #[inline]
    fn insert(&mut self, v: VertexId) -> bool {
        match &mut self.membership {
            Membership::Dense(flags) => {
                let slot = &mut flags[v.index()];
                if *slot {
                    return false;
                }
                *slot = true;
            }
            Membership::Sparse(set) => {
                if !set.insert(v) {
                    return false;
                }
                if set.len() > self.universe / SPARSE_FRACTION {
                    let mut flags = vec![false; self.universe];
                    for &u in set.iter() {
                        flags[u.index()] = true;
                    }
                    self.membership = Membership::Dense(flags);
                }
            }
        }
        self.members.push(v);
        true
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        match &self.membership {
            Membership::Dense(flags) => flags.get(v.index()).copied().unwrap_or(false),
            Membership::Sparse(set) => set.contains(&v),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in the order the traversal discovered them.
    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    /// Members in ascending id order.
    pub fn sorted(&self) -> Vec<VertexId> {
        let mut v = self.members.clone();
        v.sort_unstable();
        v
    }
}

/// Result of one guarded traversal, with the number of adjacency entries
/// it inspected.
#[derive(Clone, Debug)]
pub struct Traversal {
    pub reached: VertexSet,
    pub edges_visited: usize,
}

/// BFS from `start` that may reach `barrier` but never expands it.
fn guarded_bfs<'g, F>(n: usize, start: VertexId, barrier: VertexId, neighbors: F) -> Traversal
where
    F: Fn(VertexId) -> &'g [VertexId],
{
    let mut reached = VertexSet::with_universe(n);
    let mut edges_visited = 0;
    reached.insert(start);
    let mut head = 0;
    // the member list doubles as the BFS queue
    while head < reached.members.len() {
        let v = reached.members[head];
        head += 1;
        if v == barrier {
            continue;
        }
        for &w in neighbors(v) {
            edges_visited += 1;
            reached.insert(w);
        }
    }
    Traversal { reached, edges_visited }
}

fn check_pair(g: &DirectedGraph, s: VertexId, t: VertexId) -> Result<()> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if s == t {
        return Err(Error::SameEndpoints(s.index()));
    }
    Ok(())
}

/// Scope of `s` with respect to `t`, with edge-visit instrumentation.
pub fn compute_scope_traced(g: &DirectedGraph, s: VertexId, t: VertexId) -> Result<Traversal> {
    check_pair(g, s, t)?;
    Ok(guarded_bfs(g.vertex_count(), s, t, |v| g.out_neighbors(v)))
}

/// Inverse scope of `t` with respect to `s`, with edge-visit instrumentation.
///
/// Walks in-adjacency directly; the inverse graph is never built.
pub fn compute_inverse_scope_traced(
    g: &DirectedGraph,
    s: VertexId,
    t: VertexId,
) -> Result<Traversal> {
    check_pair(g, s, t)?;
    Ok(guarded_bfs(g.vertex_count(), t, s, |v| g.in_neighbors(v)))
}

/// `s` plus every vertex reachable from `s` without passing through `t`.
pub fn compute_scope(g: &DirectedGraph, s: VertexId, t: VertexId) -> Result<VertexSet> {
    compute_scope_traced(g, s, t).map(|tr| tr.reached)
}

/// `t` plus every vertex that reaches `t` without passing through `s`.
pub fn compute_inverse_scope(g: &DirectedGraph, s: VertexId, t: VertexId) -> Result<VertexSet> {
    compute_inverse_scope_traced(g, s, t).map(|tr| tr.reached)
}

/// Both scopes and their intersection for one (s, t) query.
#[derive(Clone, Debug)]
pub struct ScopeResult {
    pub s: VertexId,
    pub t: VertexId,
    pub scope: VertexSet,
    pub inverse_scope: VertexSet,
    /// Ascending.
    pub intersection: Vec<VertexId>,
}

impl ScopeResult {
    pub fn compute(g: &DirectedGraph, s: VertexId, t: VertexId) -> Result<Self> {
        let scope = compute_scope(g, s, t)?;
        let inverse_scope = compute_inverse_scope(g, s, t)?;
        let (small, large) = if scope.len() <= inverse_scope.len() {
            (&scope, &inverse_scope)
        } else {
            (&inverse_scope, &scope)
        };
        let mut intersection: Vec<VertexId> =
            small.members().iter().copied().filter(|&v| large.contains(v)).collect();
        intersection.sort_unstable();
        Ok(ScopeResult { s, t, scope, inverse_scope, intersection })
    }
}

/// The subgraph induced by the scope intersection, with local endpoints.
#[derive(Clone, Debug)]
pub struct PrunedGraph {
    pub induced: InducedSubgraph,
    /// Local ids of (s, t). `None` when no s-t path can exist.
    pub endpoints: Option<(VertexId, VertexId)>,
    /// Absent when the degree test short-circuited the traversals.
    pub scopes: Option<ScopeResult>,
}

impl PrunedGraph {
    pub fn graph(&self) -> &DirectedGraph {
        &self.induced.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.induced.graph.vertex_count()
    }

    /// True when the out-degree of s or the in-degree of t was zero.
    pub fn is_early_exit(&self) -> bool {
        self.scopes.is_none()
    }

    pub fn intersection_size(&self) -> usize {
        self.scopes.as_ref().map_or(0, |sc| sc.intersection.len())
    }
}

/// Builds the pruned graph for an (s, t) query.
pub fn prune(g: &DirectedGraph, s: VertexId, t: VertexId) -> Result<PrunedGraph> {
    check_pair(g, s, t)?;
    if g.out_degree(s) == 0 || g.in_degree(t) == 0 {
        return Ok(PrunedGraph {
            induced: g.induced_subgraph(&[])?,
            endpoints: None,
            scopes: None,
        });
    }
    let scopes = ScopeResult::compute(g, s, t)?;
    let induced = g.induced_subgraph(&scopes.intersection)?;
    // s and t are either both retained (t reachable from s) or both absent
    let endpoints = induced.from_parent(s).zip(induced.from_parent(t));
    Ok(PrunedGraph { induced, endpoints, scopes: Some(scopes) })
}

/// Size of the scope intersection and how long it took to compute.
#[derive(Clone, Copy, Debug)]
pub struct ScopeStats {
    pub intersection_size: usize,
    pub vertex_count: usize,
    pub elapsed: Duration,
}

impl ScopeStats {
    /// `intersection_size / vertex_count`, in [0, 1].
    pub fn ratio(&self) -> f64 {
        if self.vertex_count == 0 {
            0.0
        } else {
            self.intersection_size as f64 / self.vertex_count as f64
        }
    }
}

pub fn scope_stats(g: &DirectedGraph, s: VertexId, t: VertexId) -> Result<ScopeStats> {
    check_pair(g, s, t)?;
    let start = Instant::now();
    let scopes = ScopeResult::compute(g, s, t)?;
    let elapsed = start.elapsed();
    Ok(ScopeStats {
        intersection_size: scopes.intersection.len(),
        vertex_count: g.vertex_count(),
        elapsed,
    })
}
