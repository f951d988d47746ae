//! Simple undirected colored graphs.
//!
//! Vertices are dense 0-based integers. Initial colors are normalized on
//! construction so that color ids form a contiguous range 0..c-1 ordered by
//! first occurrence over the vertex index; that normalization is what every
//! refinement procedure and the isomorphism solver compare against.

mod corpus;
mod edgelist;
mod graph6;

pub use corpus::{all_graphs, connected_graphs};

use crate::error::GraphError;
use crate::rng::SplitMix64;

/// A simple undirected graph with an initial vertex coloring.
///
/// Immutable after construction; safe to share across workers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Unordered edges stored once as (min, max), sorted.
    edges: Vec<(u32, u32)>,
    /// Sorted neighbor lists, symmetric.
    adj: Vec<Vec<u32>>,
    /// Normalized initial colors, contiguous 0..c-1 by first occurrence.
    colors: Vec<u32>,
}

impl Graph {
    /// Builds a graph, validating and normalizing all invariants.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        colors: Option<Vec<u32>>,
    ) -> Result<Self, GraphError> {
        let mut norm: Vec<(u32, u32)> = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for &w in &[u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            let e = (u.min(v) as u32, u.max(v) as u32);
            norm.push(e);
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0 as usize, w[0].1 as usize));
        }
        let raw = colors.unwrap_or_else(|| vec![0; n]);
        if raw.len() != n {
            return Err(GraphError::InvalidParameter(format!(
                "color array length {} != n = {}",
                raw.len(),
                n
            )));
        }
        let colors = normalize_colors(&raw);
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: norm,
            adj,
            colors,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// Normalized initial colors.
    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn num_colors(&self) -> usize {
        self.colors.iter().map(|&c| c as usize + 1).max().unwrap_or(0)
    }

    /// Relabels vertices by `perm` (vertex v becomes perm[v]).
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph, GraphError> {
        if perm.len() != self.n {
            return Err(GraphError::InvalidParameter(
                "permutation length mismatch".into(),
            ));
        }
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| (perm[u as usize], perm[v as usize]));
        let mut colors = vec![0u32; self.n];
        for v in 0..self.n {
            colors[perm[v]] = self.colors[v];
        }
        Graph::new(self.n, edges, Some(colors))
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w as usize);
                }
            }
        }
        count == self.n
    }

    // ---- parsing / serialization ----

    pub fn parse_graph6(bytes: &[u8]) -> Result<Graph, GraphError> {
        graph6::parse(bytes)
    }

    pub fn to_graph6(&self) -> String {
        graph6::encode(self)
    }

    pub fn parse_edgelist(text: &str) -> Result<Graph, GraphError> {
        edgelist::parse(text)
    }

    pub fn to_edgelist(&self) -> String {
        edgelist::encode(self)
    }

    // ---- deterministic generators ----

    pub fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i)), None).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        if n < 3 {
            return Graph::path(n);
        }
        let edges = (0..n).map(|i| (i, (i + 1) % n));
        Graph::new(n, edges, None).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)));
        Graph::new(n, edges, None).unwrap()
    }

    /// Erdos-Renyi G(n, p), reproducible: the SplitMix64 stream seeded with
    /// `seed` is consumed once per vertex pair in (0,1), (0,2), ... order.
    pub fn random(n: usize, edge_probability: f64, seed: u64) -> Result<Graph, GraphError> {
        if !(0.0..=1.0).contains(&edge_probability) {
            return Err(GraphError::InvalidParameter(format!(
                "edge probability {edge_probability} outside [0, 1]"
            )));
        }
        let mut rng = SplitMix64::new(seed);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.next_f64() < edge_probability {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, edges, None)
    }

    /// Disjoint union, vertices of `other` shifted by `self.n`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| (u as usize, v as usize))
            .chain(
                other
                    .edges
                    .iter()
                    .map(|&(u, v)| (u as usize + self.n, v as usize + self.n)),
            );
        let colors = self
            .colors
            .iter()
            .chain(other.colors.iter())
            .copied()
            .collect();
        Graph::new(self.n + other.n, edges, Some(colors)).unwrap()
    }

    /// Built-in pairs of non-isomorphic graphs that color refinement cannot
    /// distinguish (regular graphs of equal degree and order).
    pub fn hard_pair(id: &str) -> Result<(Graph, Graph), GraphError> {
        match id {
            "c6-vs-2c3" => {
                let c6 = Graph::cycle(6);
                let two_c3 = Graph::cycle(3).disjoint_union(&Graph::cycle(3));
                Ok((c6, two_c3))
            }
            "c8-vs-2c4" => {
                let c8 = Graph::cycle(8);
                let two_c4 = Graph::cycle(4).disjoint_union(&Graph::cycle(4));
                Ok((c8, two_c4))
            }
            other => Err(GraphError::UnknownHardPair(other.to_string())),
        }
    }
}

/// Remaps arbitrary color labels to 0..c-1 ordered by first occurrence.
fn normalize_colors(raw: &[u32]) -> Vec<u32> {
    let mut map: Vec<(u32, u32)> = Vec::new();
    let mut out = Vec::with_capacity(raw.len());
    for &c in raw {
        let id = match map.iter().find(|&&(orig, _)| orig == c) {
            Some(&(_, id)) => id,
            None => {
                let id = map.len() as u32;
                map.push((c, id));
                id
            }
        };
        out.push(id);
    }
    out
}
