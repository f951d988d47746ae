//! The layered auxiliary graph on which plain color refinement simulates
//! k-dimensional WL refinement.
//!
//! For every ordered k-tuple of input vertices there is one base vertex.
//! Each base vertex x for tuple t grows an out-layer: n vertices u_1..u_n
//! (one per substituting vertex) adjacent to x, and n*k vertices v_{i,j},
//! each adjacent to its u_i and to the base vertex of the tuple t with
//! position j replaced by vertex i. Base vertices carry the atomic tuple
//! colors; all u vertices share one fresh color band and the v vertices one
//! fresh band per position index j.

use crate::error::{BudgetError, PartitionMismatch};
use crate::graph::Graph;
use crate::par::par_map;
use crate::partition::{index_tuple, TupleColoring, VertexPartition};
use crate::refine::{
    color_refine_with, simulate_cr_by_wl2_with, wlk_refine,
    RefineOptions, RefinementReport,
};
use serde::Serialize;

/// Which vertex a gadget-graph index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "layer", rename_all = "kebab-case")]
pub enum Layer {
    /// Base vertex for the tuple with this row-major index.
    Base { tuple: usize },
    /// Out-layer u_i of a base vertex (i = substituting vertex).
    OutU { base: usize, i: usize },
    /// Out-layer v_{i,j} of a base vertex (substitute vertex i at position j).
    OutV { base: usize, i: usize, j: usize },
}

#[derive(Debug, Clone)]
pub struct GadgetGraph {
    pub graph: Graph,
    pub n: usize,
    pub k: usize,
    /// Number of base (tuple) vertices, n^k. Base vertex id == tuple index.
    pub base_count: usize,
    /// Number of atomic base colors; the u band is this id, the v band for
    /// position j is this id + 1 + j.
    pub base_color_count: u32,
    /// Band-structured initial coloring used when refining the gadget.
    pub initial_colors: Vec<u32>,
}

impl GadgetGraph {
    /// Vertices per out-layer block.
    fn block(&self) -> usize {
        self.n + self.n * self.k
    }

    pub fn total_vertices(&self) -> usize {
        self.base_count * (1 + self.n + self.n * self.k)
    }

    pub fn layer_of(&self, vertex: usize) -> Layer {
        if vertex < self.base_count {
            return Layer::Base { tuple: vertex };
        }
        let off = vertex - self.base_count;
        let base = off / self.block();
        let inner = off % self.block();
        if inner < self.n {
            Layer::OutU { base, i: inner }
        } else {
            let rest = inner - self.n;
            Layer::OutV {
                base,
                i: rest / self.k,
                j: rest % self.k,
            }
        }
    }

    /// Sidecar mapping (base tuples and layer tags) for external inspection.
    pub fn mapping_json(&self) -> serde_json::Value {
        let tuples: Vec<Vec<usize>> = (0..self.base_count)
            .map(|idx| index_tuple(idx, self.n, self.k))
            .collect();
        let layers: Vec<Layer> = (0..self.total_vertices())
            .map(|v| self.layer_of(v))
            .collect();
        serde_json::json!({
            "n": self.n,
            "k": self.k,
            "base_count": self.base_count,
            "base_color_count": self.base_color_count,
            "u_band_color": self.base_color_count,
            "v_band_colors": (0..self.k).map(|j| self.base_color_count + 1 + j as u32).collect::<Vec<_>>(),
            "base_index": tuples,
            "layers": layers,
        })
    }
}

/// Builds the auxiliary graph for k-dimensional WL on `g`.
pub fn build_gadget(g: &Graph, k: usize, opts: &RefineOptions) -> Result<GadgetGraph, BudgetError> {
    build_gadget_with(g, g.colors(), k, opts)
}

pub fn build_gadget_with(
    g: &Graph,
    vertex_colors: &[u32],
    k: usize,
    opts: &RefineOptions,
) -> Result<GadgetGraph, BudgetError> {
    assert!(k >= 2, "gadget requires k >= 2");
    let n = g.n();
    let base = (n as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
    let total = base.saturating_mul(1 + n as u64 + (n * k) as u64);
    if total > opts.memory_budget {
        return Err(BudgetError {
            needed: total,
            budget: opts.memory_budget,
        });
    }
    let atomic =
        crate::refine::initial_tuple_coloring_with(g, vertex_colors, k, opts.memory_budget)?;
    let base_count = base as usize;
    let block = n + n * k;
    let strides: Vec<usize> = (0..k).map(|i| n.pow((k - 1 - i) as u32)).collect();

    // out-layer construction is independent per base tuple
    let per_base: Vec<Vec<(usize, usize)>> = par_map(base_count, opts.workers, |b| {
        let t = index_tuple(b, n, k);
        let start = base_count + b * block;
        let mut edges = Vec::with_capacity(n + 2 * n * k);
        for i in 0..n {
            let u = start + i;
            edges.push((b, u));
            for j in 0..k {
                let v = start + n + i * k + j;
                let target = b - t[j] * strides[j] + i * strides[j];
                edges.push((v, u));
                edges.push((v, target));
            }
        }
        edges
    });

    let mut colors = Vec::with_capacity(total as usize);
    colors.extend_from_slice(&atomic.color_of);
    let u_band = atomic.num_colors;
    for _ in 0..base_count {
        colors.extend(std::iter::repeat(u_band).take(n));
        for _ in 0..n {
            for j in 0..k {
                colors.push(u_band + 1 + j as u32);
            }
        }
    }

    let graph = Graph::new(
        total as usize,
        per_base.into_iter().flatten(),
        Some(colors.clone()),
    )
    .expect("gadget construction produced an invalid graph");
    Ok(GadgetGraph {
        graph,
        n,
        k,
        base_count,
        base_color_count: atomic.num_colors,
        initial_colors: colors,
    })
}

/// Restricts a partition of the gadget's vertices to the base layer,
/// yielding a canonical partition of ordered k-tuples.
pub fn induced_tuple_partition(
    gg: &GadgetGraph,
    vp: &VertexPartition,
) -> Result<TupleColoring, PartitionMismatch> {
    if vp.n() != gg.total_vertices() {
        return Err(PartitionMismatch(vp.n(), gg.total_vertices()));
    }
    let labels = &vp.color_of[..gg.base_count];
    let base = VertexPartition::from_labels(labels);
    Ok(TupleColoring {
        n: gg.n,
        k: gg.k,
        color_of: base.color_of,
        num_colors: base.num_colors,
    })
}

/// Which engine refines the gadget graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrEngine {
    /// Sequential color refinement.
    Naive,
    /// Bulk-synchronous parallel color refinement.
    Parallel,
    /// The logarithmic-round 2-WL simulation of color refinement.
    Wl2LogSim,
}

/// Simulates k-dimensional WL refinement of `g` by running color refinement
/// on the gadget graph and restricting to the base layer.
pub fn simulate_kwl_via_cr(
    g: &Graph,
    k: usize,
    engine: CrEngine,
    opts: &RefineOptions,
) -> Result<(TupleColoring, RefinementReport<VertexPartition>), BudgetError> {
    simulate_kwl_via_cr_with(g, g.colors(), k, engine, opts)
}

pub fn simulate_kwl_via_cr_with(
    g: &Graph,
    vertex_colors: &[u32],
    k: usize,
    engine: CrEngine,
    opts: &RefineOptions,
) -> Result<(TupleColoring, RefinementReport<VertexPartition>), BudgetError> {
    let gg = build_gadget_with(g, vertex_colors, k, opts)?;
    let mut inner = opts.clone();
    inner.max_rounds = None; // run the gadget to stability
    let report = match engine {
        CrEngine::Naive => {
            inner.workers = 1;
            color_refine_with(&gg.graph, &gg.initial_colors, &inner)
        }
        CrEngine::Parallel => color_refine_with(&gg.graph, &gg.initial_colors, &inner),
        CrEngine::Wl2LogSim => simulate_cr_by_wl2_with(&gg.graph, &gg.initial_colors, &inner),
    };
    let tuples = induced_tuple_partition(&gg, &report.partition)
        .expect("partition came from the gadget graph");
    Ok((tuples, report))
}

/// A tuple pair on which the gadget pipeline and direct k-WL disagree.
#[derive(Debug, Clone, Serialize)]
pub struct GadgetMismatch {
    pub graph6: String,
    pub n: usize,
    pub k: usize,
    pub tuple_a: Vec<usize>,
    pub tuple_b: Vec<usize>,
    pub gadget_distinguishes: bool,
    pub direct_distinguishes: bool,
}

/// Compares the gadget pipeline's tuple-distinguishing relation against
/// direct k-WL. Returns the first disagreeing tuple pair, if any.
pub fn compare_with_direct(
    g: &Graph,
    k: usize,
    opts: &RefineOptions,
) -> Result<Option<GadgetMismatch>, BudgetError> {
    let (via_gadget, _) = simulate_kwl_via_cr(g, k, CrEngine::Parallel, opts)?;
    let direct = wlk_refine(g, k, opts)?.partition;
    let total = via_gadget.color_of.len();
    debug_assert_eq!(total, direct.color_of.len());
    // group by gadget color and check the direct colors agree classwise,
    // then the reverse direction
    if let Some((a, b)) = disagreeing_pair(&via_gadget.color_of, &direct.color_of) {
        return Ok(Some(GadgetMismatch {
            graph6: g.to_graph6(),
            n: g.n(),
            k,
            tuple_a: index_tuple(a, g.n(), k),
            tuple_b: index_tuple(b, g.n(), k),
            gadget_distinguishes: via_gadget.color_of[a] != via_gadget.color_of[b],
            direct_distinguishes: direct.color_of[a] != direct.color_of[b],
        }));
    }
    Ok(None)
}

/// Finds an index pair classed together by one labeling and apart by the
/// other, if the two labelings induce different partitions.
fn disagreeing_pair(a: &[u32], b: &[u32]) -> Option<(usize, usize)> {
    use std::collections::HashMap;
    // representative of each a-class; if two a-equal indices differ in b
    // (or vice versa) that's the witness
    for (x, y) in [(a, b), (b, a)] {
        let mut rep: HashMap<u32, usize> = HashMap::new();
        for idx in 0..x.len() {
            match rep.get(&x[idx]) {
                None => {
                    rep.insert(x[idx], idx);
                }
                Some(&first) => {
                    if y[first] != y[idx] {
                        return Some((first, idx));
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::labels_equal;

    fn opts() -> RefineOptions {
        RefineOptions::default()
    }

    #[test]
    fn counts_for_n4_k2() {
        let gg = build_gadget(&Graph::complete(4), 2, &opts()).unwrap();
        assert_eq!(gg.base_count, 16);
        assert_eq!(gg.total_vertices(), 208); // 16 * (1 + 4 + 8)
        assert_eq!(gg.graph.n(), 208);
    }

    #[test]
    fn smallest_instance() {
        let g = Graph::new(1, vec![], None).unwrap();
        let gg = build_gadget(&g, 2, &opts()).unwrap();
        assert_eq!(gg.total_vertices(), 4); // base, u_0, v_{0,0}, v_{0,1}
        let u = 1;
        for v in [2, 3] {
            assert!(gg.graph.has_edge(v, u));
            assert!(gg.graph.has_edge(v, 0));
        }
        assert!(gg.graph.has_edge(0, u));
    }

    #[test]
    fn structural_invariants() {
        let g = Graph::path(3);
        let k = 2;
        let gg = build_gadget(&g, k, &opts()).unwrap();
        let n = g.n();
        // each v vertex: degree 2 or (own-base case) still adjacent to
        // exactly one u and one base vertex
        for v in 0..gg.total_vertices() {
            match gg.layer_of(v) {
                Layer::OutV { base, i, j } => {
                    let nbrs = gg.graph.neighbors(v);
                    let us: Vec<_> = nbrs
                        .iter()
                        .filter(|&&w| matches!(gg.layer_of(w as usize), Layer::OutU { .. }))
                        .collect();
                    let bases: Vec<_> = nbrs
                        .iter()
                        .filter(|&&w| matches!(gg.layer_of(w as usize), Layer::Base { .. }))
                        .collect();
                    assert_eq!(us.len(), 1, "v_{{{i},{j}}} of base {base}");
                    assert_eq!(bases.len(), 1);
                }
                Layer::OutU { base, .. } => {
                    assert!(gg.graph.has_edge(v, base));
                }
                Layer::Base { .. } => {}
            }
        }
        // layer color bands are pairwise disjoint
        for v in 0..gg.total_vertices() {
            let c = gg.initial_colors[v];
            match gg.layer_of(v) {
                Layer::Base { .. } => assert!(c < gg.base_color_count),
                Layer::OutU { .. } => assert_eq!(c, gg.base_color_count),
                Layer::OutV { j, .. } => assert_eq!(c, gg.base_color_count + 1 + j as u32),
            }
        }
        assert_eq!(gg.total_vertices(), n * n * (1 + n + n * k));
    }

    #[test]
    fn induced_partition_from_initial_coloring_is_atomic() {
        let g = Graph::path(3);
        let gg = build_gadget(&g, 2, &opts()).unwrap();
        let vp = VertexPartition::from_labels(&gg.initial_colors);
        let induced = induced_tuple_partition(&gg, &vp).unwrap();
        let atomic = crate::refine::initial_tuple_coloring(&g, 2, u64::MAX).unwrap();
        assert!(labels_equal(&induced.color_of, &atomic.color_of).unwrap());
    }

    #[test]
    fn induced_partition_size_mismatch() {
        let gg = build_gadget(&Graph::path(3), 2, &opts()).unwrap();
        let vp = VertexPartition::from_labels(&[0, 1, 2]);
        assert!(induced_tuple_partition(&gg, &vp).is_err());
    }

    #[test]
    fn p3_pipeline_distinguishes_edge_from_nonedge() {
        let g = Graph::path(3);
        let (tuples, _) = simulate_kwl_via_cr(&g, 2, CrEngine::Naive, &opts()).unwrap();
        assert_ne!(
            tuples.color_of_tuple(&[0, 1]),
            tuples.color_of_tuple(&[0, 2])
        );
    }

    #[test]
    fn k4_pipeline_matches_direct_kwl() {
        assert!(compare_with_direct(&Graph::complete(4), 2, &opts())
            .unwrap()
            .is_none());
    }

    #[test]
    fn pipeline_distinguishes_the_hard_pair() {
        let (a, b) = Graph::hard_pair("c6-vs-2c3").unwrap();
        let (ta, _) = simulate_kwl_via_cr(&a, 2, CrEngine::Parallel, &opts()).unwrap();
        let (tb, _) = simulate_kwl_via_cr(&b, 2, CrEngine::Parallel, &opts()).unwrap();
        let mut ha = ta.class_sizes();
        let mut hb = tb.class_sizes();
        ha.sort_unstable();
        hb.sort_unstable();
        assert_ne!(ha, hb);
    }

    #[test]
    fn budget_error_reports_size() {
        let err = build_gadget(
            &Graph::path(10),
            4,
            &RefineOptions {
                memory_budget: 1000,
                ..Default::default()
            },
        )
        .unwrap_err();
        assert_eq!(err.needed, 10_000 * (1 + 10 + 40));
    }
}
