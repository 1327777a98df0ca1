//! Online colorers and the session that referees them.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hypergraph::{Color, Coloring, Edge, Hypergraph, Vertex};

/// A deterministic online coloring algorithm for k-uniform hypergraphs.
///
/// `color` is called once per arriving vertex, in label order, with the edges whose last vertex
/// is the new one. The answer is irrevocable.
pub trait OnlineColorer {
    fn name(&self) -> &str;

    fn color(&mut self, vertex: Vertex, revealed: &[Edge]) -> Result<Color>;

    /// The vertex count this colorer was told in advance, if any.
    fn vertex_hint(&self) -> Option<usize> {
        None
    }
}

impl<C: OnlineColorer + ?Sized> OnlineColorer for Box<C> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn color(&mut self, vertex: Vertex, revealed: &[Edge]) -> Result<Color> {
        (**self).color(vertex, revealed)
    }

    fn vertex_hint(&self) -> Option<usize> {
        (**self).vertex_hint()
    }
}

/// Tracks the true coloring of a run and rejects any answer that completes a monochromatic edge.
#[derive(Debug, Clone)]
pub struct ColoringSession {
    k: usize,
    colors: Vec<Color>,
    edges: Vec<Edge>,
}

impl ColoringSession {
    pub fn new(k: usize) -> Self {
        ColoringSession {
            k,
            colors: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn next_vertex(&self) -> Vertex {
        self.colors.len() + 1
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn color_of(&self, v: Vertex) -> Color {
        self.colors[v - 1]
    }

    /// Presents the next vertex with its revealed edges and records the colorer's answer.
    pub fn arrive(&mut self, colorer: &mut dyn OnlineColorer, revealed: &[Edge]) -> Result<Color> {
        let v = self.next_vertex();
        for e in revealed {
            if e.len() != self.k || !e.contains(v) || e.last() != v {
                return Err(Error::malformed(format!(
                    "edge {} cannot be revealed at the arrival of vertex {} (k = {})",
                    e, v, self.k
                )));
            }
        }
        let c = colorer.color(v, revealed)?;
        if c == 0 {
            return Err(Error::Validity(format!(
                "colorer {} returned color 0 for vertex {}",
                colorer.name(),
                v
            )));
        }
        if let Some(e) = revealed.iter().find(|e| others_share(e, v, &self.colors) == Some(c)) {
            return Err(Error::Validity(format!(
                "colorer {} gave vertex {} color {}, making edge {} monochromatic",
                colorer.name(),
                v,
                c,
                e
            )));
        }
        self.colors.push(c);
        self.edges.extend(revealed.iter().cloned());
        Ok(c)
    }

    pub fn finish(self) -> Result<(Hypergraph, Coloring)> {
        let n = self.colors.len();
        let h = Hypergraph::new(n, self.k, self.edges.into_iter().map(|e| e.vertices().to_vec()))?;
        Ok((h, Coloring::new(self.colors)))
    }
}

/// The single color shared by every vertex of `e` other than `v`, if there is one.
fn others_share(e: &Edge, v: Vertex, colors: &[Color]) -> Option<Color> {
    let mut shared = None;
    for &u in e.vertices() {
        if u == v {
            continue;
        }
        let c = colors[u - 1];
        match shared {
            None => shared = Some(c),
            Some(s) if s != c => return None,
            _ => {}
        }
    }
    shared
}

/// Colors the vertex would be forbidden from taking, given the colors in `colors`.
pub fn blocked_colors(colors: &[Color], v: Vertex, revealed: &[Edge]) -> BTreeSet<Color> {
    revealed.iter().filter_map(|e| others_share(e, v, colors)).collect()
}

/// Feeds `h` to `colorer` in arrival order.
pub fn run_colorer(h: &Hypergraph, colorer: &mut dyn OnlineColorer) -> Result<Coloring> {
    let mut session = ColoringSession::new(h.k());
    for v in 1..=h.n() {
        session.arrive(colorer, h.reveal_at_arrival(v))?;
    }
    Ok(session.finish()?.1)
}

/// Smallest positive color that keeps every revealed edge non-monochromatic.
#[derive(Debug, Clone, Default)]
pub struct FirstFitColorer {
    colors: Vec<Color>,
}

impl FirstFitColorer {
    pub fn new() -> Self {
        Self::default()
    }
}

impl OnlineColorer for FirstFitColorer {
    fn name(&self) -> &str {
        "firstfit"
    }

    fn color(&mut self, v: Vertex, revealed: &[Edge]) -> Result<Color> {
        let blocked = blocked_colors(&self.colors, v, revealed);
        let c = (1..)
            .find(|c| !blocked.contains(c))
            .expect("finitely many blocked colors");
        self.colors.push(c);
        Ok(c)
    }
}

/// Reuses the largest safe color already in use; opens a new color only when none is safe.
#[derive(Debug, Clone, Default)]
pub struct LargestFirstColorer {
    colors: Vec<Color>,
    max_used: Color,
}

impl LargestFirstColorer {
    pub fn new() -> Self {
        Self::default()
    }
}

impl OnlineColorer for LargestFirstColorer {
    fn name(&self) -> &str {
        "largest-first"
    }

    fn color(&mut self, v: Vertex, revealed: &[Edge]) -> Result<Color> {
        let blocked = blocked_colors(&self.colors, v, revealed);
        let c = (1..=self.max_used)
            .rev()
            .find(|c| !blocked.contains(c))
            .unwrap_or(self.max_used + 1);
        self.max_used = self.max_used.max(c);
        self.colors.push(c);
        Ok(c)
    }
}

/// Greedy over the fixed color order 2, 1, 4, 3, 6, 5, ...
#[derive(Debug, Clone, Default)]
pub struct PermutedGreedyColorer {
    colors: Vec<Color>,
}

impl PermutedGreedyColorer {
    pub fn new() -> Self {
        Self::default()
    }
}

impl OnlineColorer for PermutedGreedyColorer {
    fn name(&self) -> &str {
        "permuted-greedy"
    }

    fn color(&mut self, v: Vertex, revealed: &[Edge]) -> Result<Color> {
        let blocked = blocked_colors(&self.colors, v, revealed);
        let swap = |i: Color| if i % 2 == 1 { i + 1 } else { i - 1 };
        let c = (1..)
            .map(swap)
            .find(|c| !blocked.contains(c))
            .expect("finitely many blocked colors");
        self.colors.push(c);
        Ok(c)
    }
}

pub const COLORER_NAMES: [&str; 3] = ["firstfit", "largest-first", "permuted-greedy"];

/// Fresh colorer by name.
pub fn colorer_by_name(name: &str) -> Option<Box<dyn OnlineColorer>> {
    match name {
        "firstfit" => Some(Box::new(FirstFitColorer::new())),
        "largest-first" => Some(Box::new(LargestFirstColorer::new())),
        "permuted-greedy" => Some(Box::new(PermutedGreedyColorer::new())),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::is_proper;

    fn triangle_plus() -> Hypergraph {
        Hypergraph::new(5, 2, vec![vec![1, 2], vec![1, 3], vec![2, 3], vec![3, 4], vec![4, 5]]).unwrap()
    }

    #[test]
    fn all_named_colorers_are_proper() {
        for name in COLORER_NAMES {
            let mut c = colorer_by_name(name).unwrap();
            let h = triangle_plus();
            let coloring = run_colorer(&h, &mut c).unwrap();
            assert!(is_proper(&h, &coloring).unwrap(), "{name}");
        }
        assert!(colorer_by_name("nope").is_none());
    }

    #[test]
    fn permuted_greedy_starts_at_two() {
        let h = Hypergraph::new(3, 2, vec![vec![1, 2], vec![2, 3]]).unwrap();
        let c = run_colorer(&h, &mut PermutedGreedyColorer::new()).unwrap();
        assert_eq!(c.as_slice(), &[2, 1, 2]);
    }

    #[test]
    fn largest_first_reuses_top_color() {
        // 1-2 edge forces a second color; 3 is free and takes the largest one.
        let h = Hypergraph::new(3, 2, vec![vec![1, 2]]).unwrap();
        let c = run_colorer(&h, &mut LargestFirstColorer::new()).unwrap();
        assert_eq!(c.as_slice(), &[1, 2, 2]);
    }

    #[test]
    fn session_rejects_monochromatic_answer() {
        struct Stubborn;
        impl OnlineColorer for Stubborn {
            fn name(&self) -> &str {
                "stubborn"
            }
            fn color(&mut self, _: Vertex, _: &[Edge]) -> Result<Color> {
                Ok(1)
            }
        }
        let h = Hypergraph::new(2, 2, vec![vec![1, 2]]).unwrap();
        assert!(matches!(run_colorer(&h, &mut Stubborn), Err(Error::Validity(_))));
    }

    #[test]
    fn session_rejects_edge_not_completed_by_arrival() {
        let mut s = ColoringSession::new(2);
        let e = Edge::new(vec![1, 2]).unwrap();
        assert!(matches!(
            s.arrive(&mut FirstFitColorer::new(), &[e]),
            Err(Error::Malformed(_))
        ));
    }
}
