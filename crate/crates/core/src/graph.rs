//! Immutable directed graphs over dense vertex ids.
//!
//! Graphs are stored as two CSR arrays, one for out-neighbors and one for
//! in-neighbors, so that forward and backward traversals are both O(degree)
//! per vertex. Neighbor lists are sorted ascending. Self-loops and duplicate
//! edges are removed during construction.

use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;

use crate::error::{Error, Result};

/// Dense 0-based vertex index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Counters describing what construction discarded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub self_loops_dropped: usize,
    pub duplicates_collapsed: usize,
}

/// Options for [`load_edge_list`].
#[derive(Clone, Copy, Debug, Default)]
pub struct LoadOptions {
    /// Accept (and discard) a third weight column.
    pub weighted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
}

impl Csr {
    /// Builds from edges already sorted by (source, target) and deduplicated.
    fn from_sorted(vertex_count: usize, edges: &[(VertexId, VertexId)]) -> Self {
        let mut offsets = vec![0usize; vertex_count + 1];
        for &(u, _) in edges {
            offsets[u.index() + 1] += 1;
        }
        for i in 0..vertex_count {
            offsets[i + 1] += offsets[i];
        }
        let targets = edges.iter().map(|&(_, v)| v).collect();
        Csr { offsets, targets }
    }

    #[inline]
    fn row(&self, v: VertexId) -> &[VertexId] {
        &self.targets[self.offsets[v.index()]..self.offsets[v.index() + 1]]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Labels {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
}

/// A simple directed graph: no self-loops, no parallel edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    vertex_count: usize,
    out: Csr,
    inc: Csr,
    labels: Option<Labels>,
}

impl DirectedGraph {
    /// Builds a graph on `vertex_count` vertices. Self-loops are dropped and
    /// duplicate edges collapsed; both are counted in the returned stats.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<(Self, BuildStats)>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        if vertex_count > u32::MAX as usize {
            return Err(Error::InvalidArgument(format!(
                "{vertex_count} vertices exceed the 32-bit id space"
            )));
        }
        let mut stats = BuildStats::default();
        let mut list = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w.index() >= vertex_count {
                    return Err(Error::VertexOutOfRange { id: w.index(), vertex_count });
                }
            }
            if u == v {
                stats.self_loops_dropped += 1;
            } else {
                list.push((u, v));
            }
        }
        list.sort_unstable();
        let before = list.len();
        list.dedup();
        stats.duplicates_collapsed = before - list.len();

        let out = Csr::from_sorted(vertex_count, &list);
        let mut flipped: Vec<_> = list.iter().map(|&(u, v)| (v, u)).collect();
        flipped.sort_unstable();
        let inc = Csr::from_sorted(vertex_count, &flipped);
        Ok((DirectedGraph { vertex_count, out, inc, labels: None }, stats))
    }

    /// Convenience constructor from raw index pairs; panics on out-of-range ids.
    pub fn from_pairs(vertex_count: usize, edges: &[(u32, u32)]) -> Self {
        Self::from_edges(vertex_count, edges.iter().map(|&(u, v)| (VertexId(u), VertexId(v))))
            .expect("edge endpoints within vertex_count")
            .0
    }

    /// Attaches external labels, one per vertex in id order.
    pub fn with_labels(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.vertex_count {
            return Err(Error::InvalidArgument(format!(
                "{} labels supplied for {} vertices",
                names.len(),
                self.vertex_count
            )));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), VertexId(i as u32)).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate label {name:?}")));
            }
        }
        self.labels = Some(Labels { names, index });
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.out.targets.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count as u32).map(VertexId)
    }

    /// Out-neighbors of `v`, ascending.
    #[inline]
    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        self.out.row(v)
    }

    /// In-neighbors of `v`, ascending.
    #[inline]
    pub fn in_neighbors(&self, v: VertexId) -> &[VertexId] {
        self.inc.row(v)
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_neighbors(v).len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_neighbors(v).len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.out_neighbors(u).binary_search(&v).is_ok()
    }

    /// All edges in (source, target) lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices()
            .flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v)))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.index() < self.vertex_count
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { id: v.index(), vertex_count: self.vertex_count })
        }
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.labels.as_ref()?.index.get(label).copied()
    }

    /// External label of `v`, if the graph was loaded with labels.
    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.as_ref().map(|l| l.names[v.index()].as_str())
    }

    /// Label if present, otherwise the numeric id.
    pub fn display_name(&self, v: VertexId) -> String {
        self.label(v).map_or_else(|| v.to_string(), str::to_owned)
    }

    /// The graph with every edge reversed. Labels are kept.
    pub fn inverse(&self) -> DirectedGraph {
        DirectedGraph {
            vertex_count: self.vertex_count,
            out: self.inc.clone(),
            inc: self.out.clone(),
            labels: self.labels.clone(),
        }
    }

    /// Subgraph induced by `keep`, re-indexed densely in ascending parent-id
    /// order. Duplicates in `keep` are ignored.
    pub fn induced_subgraph(&self, keep: &[VertexId]) -> Result<InducedSubgraph> {
        for &v in keep {
            self.check_vertex(v)?;
        }
        let mut to_parent = keep.to_vec();
        to_parent.sort_unstable();
        to_parent.dedup();

        let mut edges = Vec::new();
        for (local, &parent) in to_parent.iter().enumerate() {
            for &w in self.out_neighbors(parent) {
                if let Ok(j) = to_parent.binary_search(&w) {
                    edges.push((VertexId(local as u32), VertexId(j as u32)));
                }
            }
        }
        let (mut graph, _) = DirectedGraph::from_edges(to_parent.len(), edges)?;
        if let Some(labels) = &self.labels {
            let names = to_parent.iter().map(|&p| labels.names[p.index()].clone()).collect();
            graph = graph.with_labels(names)?;
        }
        Ok(InducedSubgraph { graph, to_parent })
    }
}

/// An induced subgraph together with its id mapping back to the parent.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: DirectedGraph,
    to_parent: Vec<VertexId>,
}

impl InducedSubgraph {
    pub fn to_parent(&self, local: VertexId) -> VertexId {
        self.to_parent[local.index()]
    }

    /// Local id of a parent vertex, if it was retained.
    pub fn from_parent(&self, parent: VertexId) -> Option<VertexId> {
        // to_parent is sorted, so the inverse map is a binary search
        self.to_parent.binary_search(&parent).ok().map(|i| VertexId(i as u32))
    }

    /// Parent ids of the retained vertices, ascending.
    pub fn parent_ids(&self) -> &[VertexId] {
        &self.to_parent
    }
}

/// A loaded graph plus what the loader discarded.
#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: DirectedGraph,
    pub stats: BuildStats,
}

/// Parses a SNAP-style edge list.
///
/// Lines starting with `#` and blank lines are skipped. Each data line holds
/// `u v` (or `u v w` when `weighted`), separated by whitespace. Labels are
/// arbitrary tokens; ids are assigned in order of first appearance.
pub fn load_edge_list<R: BufRead>(reader: R, options: LoadOptions) -> Result<LoadedGraph> {
    let mut interner = Interner::default();
    let mut edges = Vec::new();

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim_end_matches('\r').trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let ok = match tokens.len() {
            2 => true,
            3 => options.weighted,
            _ => false,
        };
        if !ok {
            let expected = if options.weighted { "2 or 3" } else { "2" };
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected {expected} tokens, found {}", tokens.len()),
            });
        }
        let (Some(u), Some(v)) = (interner.intern(tokens[0]), interner.intern(tokens[1])) else {
            return Err(Error::Parse {
                line: lineno + 1,
                message: "too many distinct vertices".into(),
            });
        };
        edges.push((u, v));
    }

    let (graph, stats) = DirectedGraph::from_edges(interner.names.len(), edges)?;
    let graph = graph.with_labels(interner.names)?;
    Ok(LoadedGraph { graph, stats })
}

#[derive(Default)]
struct Interner {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
}

impl Interner {
    fn intern(&mut self, name: &str) -> Option<VertexId> {
        if let Some(&id) = self.index.get(name) {
            return Some(id);
        }
        let id = VertexId(u32::try_from(self.names.len()).ok()?);
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        Some(id)
    }
}

/// Loads an edge list from a file path.
pub fn load_edge_list_file(
    path: impl AsRef<std::path::Path>,
    options: LoadOptions,
) -> Result<LoadedGraph> {
    let file = std::fs::File::open(path)?;
    load_edge_list(std::io::BufReader::new(file), options)
}

/// Writes `g` as a SNAP edge list, using labels when present.
pub fn write_edge_list<W: std::io::Write>(g: &DirectedGraph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# Nodes: {} Edges: {}", g.vertex_count(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{}\t{}", g.display_name(u), g.display_name(v))?;
    }
    Ok(())
}
