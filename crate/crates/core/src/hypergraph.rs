//! k-uniform hypergraphs in the vertex-arrival model.
//!
//! Vertices are labeled `1..=n` by arrival rank, so an edge becomes visible exactly when its
//! largest label arrives.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::colorer::{run_colorer, FirstFitColorer};
use crate::error::{Error, Result};

pub type Vertex = usize;
pub type Color = u32;

pub const DEFAULT_CHI_CAP_GRAPH: usize = 16;
pub const DEFAULT_CHI_CAP_HYPERGRAPH: usize = 12;

/// A hyperedge as a strictly increasing list of vertex labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Edge(Vec<Vertex>);

impl Edge {
    /// Sorts the labels; duplicates are rejected.
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::malformed(format!("edge {:?} repeats a vertex", vertices)));
        }
        Ok(Edge(vertices))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// The arrival that reveals this edge.
    pub fn last(&self) -> Vertex {
        *self.0.last().expect("edges are nonempty")
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v)?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HypergraphRecord", into = "HypergraphRecord")]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: BTreeSet<Edge>,
    /// `by_last[t]` holds the edges revealed at arrival `t` (index 0 unused).
    by_last: Vec<Vec<Edge>>,
}

impl Hypergraph {
    pub fn new<I>(n: usize, k: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<Vertex>>,
    {
        if k < 2 {
            return Err(Error::malformed(format!("uniformity must be at least 2, got {}", k)));
        }
        let mut set = BTreeSet::new();
        for raw in edges {
            let e = Edge::new(raw)?;
            if e.len() != k {
                return Err(Error::malformed(format!("edge {} does not have {} vertices", e, k)));
            }
            if e.vertices()[0] == 0 || e.last() > n {
                return Err(Error::malformed(format!("edge {} has a label outside 1..={}", e, n)));
            }
            if !set.insert(e.clone()) {
                return Err(Error::malformed(format!("edge {} listed twice", e)));
            }
        }
        Ok(Self::from_edge_set(n, k, set))
    }

    fn from_edge_set(n: usize, k: usize, edges: BTreeSet<Edge>) -> Self {
        let mut by_last = vec![Vec::new(); n + 1];
        for e in &edges {
            by_last[e.last()].push(e.clone());
        }
        Hypergraph { n, k, edges, by_last }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    /// Edges in the order they are revealed (by last vertex, then lexicographically).
    pub fn edges_in_arrival_order(&self) -> impl Iterator<Item = &Edge> {
        self.by_last.iter().flatten()
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    /// The edges whose last vertex is `t`.
    pub fn reveal_at_arrival(&self, t: Vertex) -> &[Edge] {
        self.by_last.get(t).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Serialized form: edges listed in arrival order.
#[derive(Serialize, Deserialize)]
struct HypergraphRecord {
    k: usize,
    n: usize,
    edges: Vec<Vec<Vertex>>,
}

impl From<Hypergraph> for HypergraphRecord {
    fn from(h: Hypergraph) -> Self {
        HypergraphRecord {
            k: h.k,
            n: h.n,
            edges: h.edges_in_arrival_order().map(|e| e.0.clone()).collect(),
        }
    }
}

impl TryFrom<HypergraphRecord> for Hypergraph {
    type Error = Error;

    fn try_from(r: HypergraphRecord) -> Result<Self> {
        Hypergraph::new(r.n, r.k, r.edges)
    }
}

/// A vertex coloring; `colors[v - 1]` is the color of vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coloring(Vec<Color>);

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Self {
        Coloring(colors)
    }

    pub fn color_of(&self, v: Vertex) -> Option<Color> {
        v.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(vertex, color)` pairs in vertex order.
    pub fn pairs(&self) -> impl Iterator<Item = (Vertex, Color)> + '_ {
        self.0.iter().enumerate().map(|(i, &c)| (i + 1, c))
    }
}

pub fn colors_used(c: &Coloring) -> BTreeSet<Color> {
    c.0.iter().copied().collect()
}

pub fn first_fit_color(h: &Hypergraph) -> Coloring {
    let mut colorer = FirstFitColorer::new();
    run_colorer(h, &mut colorer).expect("FirstFit only returns safe colors")
}

fn is_monochromatic(e: &Edge, colors: &[Color]) -> bool {
    let first = colors[e.vertices()[0] - 1];
    e.vertices().iter().all(|&u| colors[u - 1] == first)
}

/// True iff no edge has all of its vertices in one color.
pub fn is_proper(h: &Hypergraph, c: &Coloring) -> Result<bool> {
    if c.len() != h.n() {
        return Err(Error::malformed(format!(
            "coloring covers {} vertices, hypergraph has {}",
            c.len(),
            h.n()
        )));
    }
    if c.0.contains(&0) {
        return Err(Error::malformed("colors are positive integers"));
    }
    Ok(!h.edges().any(|e| is_monochromatic(e, &c.0)))
}

pub fn chromatic_number(h: &Hypergraph) -> Result<usize> {
    let cap = if h.k() == 2 {
        DEFAULT_CHI_CAP_GRAPH
    } else {
        DEFAULT_CHI_CAP_HYPERGRAPH
    };
    chromatic_number_with_cap(h, cap)
}

/// Exact chromatic number by backtracking.
///
/// Vertices are colored in label order; vertex `i` may only use colors up to one more than the
/// largest color among earlier vertices, which removes color-permutation symmetry.
pub fn chromatic_number_with_cap(h: &Hypergraph, cap: usize) -> Result<usize> {
    if h.n() > cap {
        return Err(Error::Capacity {
            what: "vertex count",
            value: h.n(),
            cap,
        });
    }
    if h.n() == 0 {
        return Ok(0);
    }
    let upper = colors_used(&first_fit_color(h)).len();
    let mut colors = vec![0 as Color; h.n()];
    for target in 1..upper {
        if extend_coloring(h, target as Color, 0, &mut colors, 1) {
            return Ok(target);
        }
    }
    Ok(upper)
}

fn extend_coloring(h: &Hypergraph, limit: Color, max_used: Color, colors: &mut [Color], v: Vertex) -> bool {
    if v > h.n() {
        return true;
    }
    for c in 1..=limit.min(max_used + 1) {
        colors[v - 1] = c;
        let safe = h.reveal_at_arrival(v).iter().all(|e| !is_monochromatic(e, colors));
        if safe && extend_coloring(h, limit, max_used.max(c), colors, v + 1) {
            return true;
        }
    }
    colors[v - 1] = 0;
    false
}

/// Connected and free of Berge cycles.
///
/// Works on the bipartite incidence graph (one node per vertex and per edge, a link per
/// membership): that graph must be a tree.
pub fn is_hypertree(h: &Hypergraph) -> bool {
    if h.n() == 0 {
        return false;
    }
    let nodes = h.n() + h.edge_count();
    let mut dsu = DisjointSets::new(nodes);
    for (i, e) in h.edges().enumerate() {
        let edge_node = h.n() + i;
        for &v in e.vertices() {
            if !dsu.union(v - 1, edge_node) {
                return false;
            }
        }
    }
    dsu.components == 1
}

struct DisjointSets {
    parent: Vec<usize>,
    components: usize,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            components: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// False if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.components -= 1;
        true
    }
}

/// `1 + log_k(n)`, the FirstFit color bound on k-uniform hypertrees with `n` vertices.
pub fn ff_hypertree_upper(n: usize, k: usize) -> f64 {
    1.0 + (n as f64).ln() / (k as f64).ln()
}

/// Exact `floor(1 + log_k(n))`.
pub fn ff_hypertree_upper_floor(n: usize, k: usize) -> usize {
    assert!(n >= 1 && k >= 2);
    let mut m = 1;
    let mut power = k;
    while power <= n {
        m += 1;
        power = power.saturating_mul(k);
    }
    m
}
