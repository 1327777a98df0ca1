//! Lower-bound constructions for online coloring.
//!
//! [`KillerAdversary`] replays a fixed bipartite graph on which FirstFit needs `n/2` colors.
//! [`HypertreeAdversary`] is adaptive: it watches the colorer's answers and grows a k-uniform
//! hypertree with at most `k^(m-1)` vertices on which any deterministic colorer uses at least
//! `m` colors.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::colorer::{ColoringSession, OnlineColorer};
use crate::error::{Error, Result};
use crate::hypergraph::{Color, Coloring, Edge, Hypergraph, Vertex};
use crate::partition::{diverse_to_starry, verify_diverse, BlockPartition, MultiFamily};

/// An interactive instance generator for online colorers.
pub trait Adversary {
    fn name(&self) -> &str;
    fn run(&self, colorer: &mut dyn OnlineColorer) -> Result<AdversaryTranscript>;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub vertex: Vertex,
    pub revealed: Vec<Edge>,
    pub color: Color,
}

/// Full record of one adversary session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryTranscript {
    pub adversary: String,
    pub colorer: String,
    pub k: usize,
    /// Vertex count the colorer was told in advance, if any.
    pub vertex_hint: Option<usize>,
    pub steps: Vec<Step>,
    pub hypergraph: Hypergraph,
    pub coloring: Coloring,
    pub colors_used: BTreeSet<Color>,
    /// How the hypertree adversary assembled the final tree.
    pub provenance: Option<SubtreeRecord>,
}

impl AdversaryTranscript {
    fn from_session(
        adversary: &str,
        colorer: &dyn OnlineColorer,
        steps: Vec<Step>,
        session: ColoringSession,
        provenance: Option<SubtreeRecord>,
    ) -> Result<Self> {
        let (hypergraph, coloring) = session.finish()?;
        Ok(AdversaryTranscript {
            adversary: adversary.to_string(),
            colorer: colorer.name().to_string(),
            k: hypergraph.k(),
            vertex_hint: colorer.vertex_hint(),
            colors_used: coloring.as_slice().iter().copied().collect(),
            steps,
            hypergraph,
            coloring,
            provenance,
        })
    }

    pub fn final_hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn color_count(&self) -> usize {
        self.colors_used.len()
    }

    /// Feeds the final hypergraph to a fresh copy of the colorer and checks that it answers
    /// exactly as recorded.
    pub fn replay(&self, colorer: &mut dyn OnlineColorer) -> Result<bool> {
        let mut session = ColoringSession::new(self.k);
        for step in &self.steps {
            if step.vertex != session.next_vertex() {
                return Ok(false);
            }
            if session.arrive(colorer, &step.revealed)? != step.color {
                return Ok(false);
            }
        }
        let (h, c) = session.finish()?;
        Ok(h == self.hypergraph && c == self.coloring)
    }
}

/// The bipartite graph on `u_1, v_1, ..., u_{n/2}, v_{n/2}` (arriving in that order) with an
/// edge `u_i v_j` for every `i != j`. Labels: `u_i = 2i - 1`, `v_j = 2j`.
pub fn killer_graph_stream(n: usize) -> Result<Hypergraph> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::domain(format!(
            "the killer graph needs an even n >= 2, got {}",
            n
        )));
    }
    let half = n / 2;
    let mut edges = Vec::new();
    for i in 1..=half {
        for j in 1..=half {
            if i != j {
                edges.push(vec![2 * i - 1, 2 * j]);
            }
        }
    }
    Hypergraph::new(n, 2, edges)
}

#[derive(Debug, Clone)]
pub struct KillerAdversary {
    n: usize,
    graph: Hypergraph,
}

impl KillerAdversary {
    pub fn new(n: usize) -> Result<Self> {
        Ok(KillerAdversary {
            n,
            graph: killer_graph_stream(n)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

impl Adversary for KillerAdversary {
    fn name(&self) -> &str {
        "killer"
    }

    fn run(&self, colorer: &mut dyn OnlineColorer) -> Result<AdversaryTranscript> {
        let mut session = ColoringSession::new(2);
        let mut steps = Vec::with_capacity(self.n);
        for v in 1..=self.n {
            let revealed = self.graph.reveal_at_arrival(v);
            let color = session.arrive(colorer, revealed)?;
            steps.push(Step {
                vertex: v,
                revealed: revealed.to_vec(),
                color,
            });
        }
        AdversaryTranscript::from_session(self.name(), colorer, steps, session, None)
    }
}

/// `k^(m-1)`: vertices in the tree built against depth `m`.
pub fn vertex_count_bound(k: usize, m: usize) -> usize {
    assert!(k >= 2 && m >= 1);
    k.pow((m - 1) as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MergeCase {
    /// The forest already carried at least `m` colors; one edge per block, lowest labels.
    Surplus,
    /// Exactly `m - 1` colors; edges follow a starry partition of the per-tree color sets.
    Starry,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeRecord {
    pub vertex: Vertex,
    pub case: MergeCase,
    pub edges: Vec<Edge>,
    /// Starry case only: `renaming[i]` is the original color that was renamed to `i + 1`.
    pub renaming: Vec<Color>,
    /// Starry case only: child indices forming star `i`.
    pub stars: Vec<Vec<usize>>,
    pub color: Color,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChildRecord {
    /// The child is a copy of the depth-`block` tree.
    pub block: usize,
    pub copy: usize,
    pub tree: SubtreeRecord,
}

/// One tree built by the hypertree adversary, with the sub-trees it was merged from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubtreeRecord {
    pub depth: usize,
    pub vertices: Vec<Vertex>,
    pub colors: BTreeSet<Color>,
    pub children: Vec<ChildRecord>,
    pub merge: Option<MergeRecord>,
}

/// A color-subset family read off a forest, with the renaming applied to its colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorSubsetFamily {
    pub family: MultiFamily,
    pub partition: BlockPartition,
    /// `renaming[i]` is the original color now called `i + 1`.
    pub renaming: Vec<Color>,
}

/// Builds the multi-family of per-tree color sets of a forest.
///
/// `forest[i][j]` lists the colors of the vertices of copy `j` of the depth-`(i+1)` tree, in
/// arrival order. Colors are renamed to `1..=q` by first occurrence; block `i` holds the copies
/// of depth `i + 1`. The result must be `(p, [q])`-diverse with `p` the copies per block.
pub fn color_subset_family(forest: &[Vec<Vec<Color>>]) -> Result<ColorSubsetFamily> {
    let q = forest.len();
    let p = forest.first().map_or(0, Vec::len);
    if forest.iter().any(|b| b.len() != p) {
        return Err(Error::malformed("every block needs the same number of copies"));
    }
    let mut renaming: Vec<Color> = Vec::new();
    for &c in forest.iter().flatten().flatten() {
        if !renaming.contains(&c) {
            renaming.push(c);
        }
    }
    if renaming.len() != q {
        return Err(Error::domain(format!(
            "forest uses {} colors, expected exactly {}",
            renaming.len(),
            q
        )));
    }
    let rename = |c: &Color| renaming.iter().position(|r| r == c).unwrap() as Color + 1;
    let mut members = Vec::with_capacity(p * q);
    let mut blocks = Vec::with_capacity(q);
    for block in forest {
        let mut ids = Vec::with_capacity(p);
        for tree in block {
            ids.push(members.len());
            members.push(tree.iter().map(rename).collect::<BTreeSet<Color>>());
        }
        blocks.push(ids);
    }
    let family = MultiFamily::new((1..=q as Color).collect(), members)?;
    let partition = BlockPartition::new(blocks);
    if !verify_diverse(&family, &partition, p)? {
        return Err(Error::Invariant("forest color sets are not diverse".into()));
    }
    Ok(ColorSubsetFamily {
        family,
        partition,
        renaming,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct HypertreeAdversary {
    k: usize,
    m: usize,
}

impl HypertreeAdversary {
    pub fn new(k: usize, m: usize) -> Result<Self> {
        if k < 2 || m < 1 {
            return Err(Error::domain(format!(
                "need k >= 2 and m >= 1, got k = {}, m = {}",
                k, m
            )));
        }
        Ok(HypertreeAdversary { k, m })
    }
}

impl Adversary for HypertreeAdversary {
    fn name(&self) -> &str {
        "hypertree"
    }

    fn run(&self, colorer: &mut dyn OnlineColorer) -> Result<AdversaryTranscript> {
        let mut builder = Builder {
            k: self.k,
            session: ColoringSession::new(self.k),
            steps: Vec::new(),
            colorer,
        };
        let root = builder.build(self.m)?;
        let Builder {
            session,
            steps,
            colorer,
            ..
        } = builder;
        AdversaryTranscript::from_session(self.name(), &*colorer, steps, session, Some(root))
    }
}

struct Builder<'a> {
    k: usize,
    session: ColoringSession,
    steps: Vec<Step>,
    colorer: &'a mut dyn OnlineColorer,
}

impl Builder<'_> {
    fn arrive(&mut self, revealed: Vec<Edge>) -> Result<(Vertex, Color)> {
        let vertex = self.session.next_vertex();
        let color = self.session.arrive(self.colorer, &revealed)?;
        self.steps.push(Step {
            vertex,
            revealed,
            color,
        });
        Ok((vertex, color))
    }

    /// Builds a tree on which the colorer uses at least `m` colors.
    fn build(&mut self, m: usize) -> Result<SubtreeRecord> {
        if m == 1 {
            let (v, c) = self.arrive(Vec::new())?;
            return Ok(SubtreeRecord {
                depth: 1,
                vertices: vec![v],
                colors: BTreeSet::from([c]),
                children: Vec::new(),
                merge: None,
            });
        }

        let mut children = Vec::with_capacity((m - 1) * (self.k - 1));
        for block in 1..m {
            for copy in 1..self.k {
                let tree = self.build(block)?;
                children.push(ChildRecord { block, copy, tree });
            }
        }
        let forest_colors: BTreeSet<Color> = children.iter().flat_map(|c| c.tree.colors.iter().copied()).collect();
        if forest_colors.len() + 1 < m {
            return Err(Error::Invariant(format!(
                "forest for depth {} carries only {} colors",
                m,
                forest_colors.len()
            )));
        }

        let v = self.session.next_vertex();
        let (case, edges, renaming, stars) = if forest_colors.len() >= m {
            let edges = (1..m)
                .map(|block| {
                    let mut e: Vec<Vertex> = children
                        .iter()
                        .filter(|c| c.block == block)
                        .map(|c| c.tree.vertices[0])
                        .collect();
                    e.push(v);
                    Edge::new(e)
                })
                .collect::<Result<Vec<_>>>()?;
            (MergeCase::Surplus, edges, Vec::new(), Vec::new())
        } else {
            let forest: Vec<Vec<Vec<Color>>> = (1..m)
                .map(|block| {
                    children
                        .iter()
                        .filter(|c| c.block == block)
                        .map(|c| c.tree.vertices.iter().map(|&u| self.session.color_of(u)).collect())
                        .collect()
                })
                .collect();
            let csf = color_subset_family(&forest)?;
            let starry = diverse_to_starry(&csf.family, &csf.partition, self.k - 1)?;
            let mut edges = Vec::with_capacity(m - 1);
            for (i, star) in starry.blocks().iter().enumerate() {
                if star.len() != self.k - 1 {
                    return Err(Error::Invariant(format!(
                        "star {} has {} trees, expected {}",
                        i + 1,
                        star.len(),
                        self.k - 1
                    )));
                }
                let color = csf.renaming[i];
                let mut e = Vec::with_capacity(self.k);
                for &child in star {
                    let u = children[child]
                        .tree
                        .vertices
                        .iter()
                        .copied()
                        .find(|&u| self.session.color_of(u) == color)
                        .ok_or_else(|| Error::Invariant(format!("tree {} lacks color {}", child, color)))?;
                    e.push(u);
                }
                e.push(v);
                edges.push(Edge::new(e)?);
            }
            (MergeCase::Starry, edges, csf.renaming, starry.into_blocks())
        };

        let (vertex, color) = self.arrive(edges.clone())?;
        debug_assert_eq!(vertex, v);
        let mut vertices: Vec<Vertex> = children.iter().flat_map(|c| c.tree.vertices.iter().copied()).collect();
        vertices.push(v);
        let mut colors = forest_colors;
        colors.insert(color);
        if colors.len() < m {
            return Err(Error::Invariant(format!(
                "depth {} tree ended with {} colors",
                m,
                colors.len()
            )));
        }
        Ok(SubtreeRecord {
            depth: m,
            vertices,
            colors,
            children,
            merge: Some(MergeRecord {
                vertex: v,
                case,
                edges,
                renaming,
                stars,
                color,
            }),
        })
    }
}
