//! Refinement procedures: color refinement (1-WL), classic 2-WL on ordered
//! pairs, walk refinement by round doubling, the logarithmic-round simulation
//! of color refinement via 2-WL, and direct k-dimensional WL on tuples.
//!
//! Every procedure is a bulk-synchronous round loop: signatures for all
//! indices are computed by independent workers over disjoint ranges, then a
//! deterministic sort-and-rank renumbering assigns canonical color ids.
//! Output is a pure function of the input graph, independent of worker count.

use crate::error::BudgetError;
use crate::graph::Graph;
use crate::par::par_map;
use crate::partition::{canonical_ranks, PairColoring, TupleColoring, VertexPartition};
use crate::DEFAULT_MEMORY_BUDGET;
use serde_json::json;

#[derive(Debug, Clone)]
pub struct RefineOptions {
    /// Round budget; `None` selects the trivial bound for the procedure
    /// (n for CR, n^2 for 2-WL, n^k for k-WL).
    pub max_rounds: Option<usize>,
    pub workers: usize,
    /// Cap on dense color-array entries for k-WL.
    pub memory_budget: u64,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            max_rounds: None,
            workers: 1,
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

/// Outcome of an iterated refinement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementReport<P> {
    pub algorithm: &'static str,
    pub n: usize,
    pub k: Option<usize>,
    /// Rounds actually executed (the stabilizing round included).
    pub rounds: usize,
    pub stabilized: bool,
    /// Color counts: the initial coloring first, then one entry per round.
    pub color_counts: Vec<u32>,
    pub partition: P,
}

/// Access to the flat color array of a partition, for report serialization.
pub trait ColorArray {
    fn color_array(&self) -> &[u32];
    fn num_colors(&self) -> u32;
}

impl ColorArray for VertexPartition {
    fn color_array(&self) -> &[u32] {
        &self.color_of
    }
    fn num_colors(&self) -> u32 {
        self.num_colors
    }
}

impl ColorArray for PairColoring {
    fn color_array(&self) -> &[u32] {
        &self.color_of
    }
    fn num_colors(&self) -> u32 {
        self.num_colors
    }
}

impl ColorArray for TupleColoring {
    fn color_array(&self) -> &[u32] {
        &self.color_of
    }
    fn num_colors(&self) -> u32 {
        self.num_colors
    }
}

impl<P: ColorArray> RefinementReport<P> {
    /// Serializes to the documented report schema.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "algorithm": self.algorithm,
            "n": self.n,
            "k": self.k,
            "rounds": self.rounds,
            "stabilized": self.stabilized,
            "color_counts": self.color_counts,
            "num_colors": self.partition.num_colors(),
            "partition": self.partition.color_array(),
        })
    }
}

fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

// ---------------------------------------------------------------- 1-WL

/// Color refinement from the graph's own initial coloring.
pub fn color_refine(g: &Graph, opts: &RefineOptions) -> RefinementReport<VertexPartition> {
    color_refine_with(g, g.colors(), opts)
}

/// Color refinement from an explicit initial vertex coloring.
pub fn color_refine_with(
    g: &Graph,
    initial: &[u32],
    opts: &RefineOptions,
) -> RefinementReport<VertexPartition> {
    assert_eq!(initial.len(), g.n());
    let n = g.n();
    let max_rounds = opts.max_rounds.unwrap_or(n);
    let (mut colors, mut nc) = canonical_ranks(initial);
    let mut counts = vec![nc];
    let mut rounds = 0;
    let mut stabilized = nc as usize == n;
    while !stabilized && rounds < max_rounds {
        let sigs = par_map(n, opts.workers, |v| {
            let mut sig = Vec::with_capacity(1 + g.degree(v));
            sig.push(colors[v]);
            sig.extend(g.neighbors(v).iter().map(|&w| colors[w as usize]));
            sig[1..].sort_unstable();
            sig
        });
        let (new_colors, new_nc) = canonical_ranks(&sigs);
        rounds += 1;
        counts.push(new_nc);
        if new_nc == nc {
            debug_assert_eq!(new_colors, colors);
            stabilized = true;
        }
        colors = new_colors;
        nc = new_nc;
    }
    RefinementReport {
        algorithm: "cr",
        n,
        k: None,
        rounds,
        stabilized,
        color_counts: counts,
        partition: VertexPartition {
            color_of: colors,
            num_colors: nc,
        },
    }
}

// ---------------------------------------------------------------- 2-WL

/// The atomic pair coloring: equality pattern, adjacency, endpoint colors.
pub fn initial_pair_coloring(g: &Graph) -> PairColoring {
    initial_pair_coloring_with(g, g.colors())
}

pub fn initial_pair_coloring_with(g: &Graph, vertex_colors: &[u32]) -> PairColoring {
    let n = g.n();
    let sigs: Vec<[u32; 4]> = (0..n * n)
        .map(|idx| {
            let (x, y) = (idx / n, idx % n);
            [
                u32::from(x == y),
                u32::from(x != y && g.has_edge(x, y)),
                vertex_colors[x],
                vertex_colors[y],
            ]
        })
        .collect();
    let (color_of, num_colors) = canonical_ranks(&sigs);
    PairColoring {
        n,
        color_of,
        num_colors,
    }
}

/// One 2-WL round: the new color of (x, y) is the old color together with
/// the sorted multiset over z of the pairs (C(x,z), C(z,y)).
pub fn wl2_round(pc: &PairColoring, workers: usize) -> PairColoring {
    let n = pc.n;
    let sigs = par_map(n * n, workers, |idx| {
        let (x, y) = (idx / n, idx % n);
        let mut pairs: Vec<(u32, u32)> = (0..n)
            .map(|z| (pc.color(x, z), pc.color(z, y)))
            .collect();
        pairs.sort_unstable();
        let mut sig = Vec::with_capacity(1 + 2 * n);
        sig.push(pc.color(x, y));
        for (a, b) in pairs {
            sig.push(a);
            sig.push(b);
        }
        sig
    });
    let (color_of, num_colors) = canonical_ranks(&sigs);
    PairColoring {
        n,
        color_of,
        num_colors,
    }
}

/// Classic 2-WL iterated to stability (or the round budget).
pub fn wl2_refine(g: &Graph, opts: &RefineOptions) -> RefinementReport<PairColoring> {
    wl2_refine_with(g, g.colors(), opts)
}

pub fn wl2_refine_with(
    g: &Graph,
    vertex_colors: &[u32],
    opts: &RefineOptions,
) -> RefinementReport<PairColoring> {
    let n = g.n();
    let max_rounds = opts.max_rounds.unwrap_or(n * n);
    let mut pc = initial_pair_coloring_with(g, vertex_colors);
    let mut counts = vec![pc.num_colors];
    let mut rounds = 0;
    let mut stabilized = pc.num_colors as usize == n * n;
    while !stabilized && rounds < max_rounds {
        let next = wl2_round(&pc, opts.workers);
        rounds += 1;
        counts.push(next.num_colors);
        if next.num_colors == pc.num_colors {
            debug_assert_eq!(next.color_of, pc.color_of);
            stabilized = true;
        }
        pc = next;
    }
    RefinementReport {
        algorithm: "wl2",
        n,
        k: Some(2),
        rounds,
        stabilized,
        color_counts: counts,
        partition: pc,
    }
}

/// Walk refinement of length `walk_len`, realized by round doubling: each
/// 2-WL round concatenates two half-walks through every midpoint, and
/// stationary prefixes are covered by the diagonal colors. Lengths that are
/// not powers of two are rounded up (longer walks only refine).
pub fn walk_refine(g: &Graph, walk_len: usize, workers: usize) -> Result<PairColoring, String> {
    if walk_len == 0 {
        return Err("walk length must be at least 1".into());
    }
    let rounds = ceil_log2(walk_len.next_power_of_two());
    let mut pc = initial_pair_coloring(g);
    for _ in 0..rounds {
        pc = wl2_round(&pc, workers);
    }
    Ok(pc)
}

/// Simulates the result of color refinement with a logarithmic number of
/// 2-WL rounds: ceil(log2(2n)) rounds (or pair-coloring stability, whichever
/// comes first), then the vertex partition induced by the diagonal colors.
pub fn simulate_cr_by_wl2(g: &Graph, opts: &RefineOptions) -> RefinementReport<VertexPartition> {
    simulate_cr_by_wl2_with(g, g.colors(), opts)
}

pub fn simulate_cr_by_wl2_with(
    g: &Graph,
    vertex_colors: &[u32],
    opts: &RefineOptions,
) -> RefinementReport<VertexPartition> {
    let n = g.n();
    let budget = ceil_log2(2 * n.max(1));
    let max_rounds = opts.max_rounds.unwrap_or(budget).min(budget);
    let mut pc = initial_pair_coloring_with(g, vertex_colors);
    let mut counts = vec![pc.num_colors];
    let mut rounds = 0;
    let mut stabilized = false;
    while !stabilized && rounds < max_rounds {
        let next = wl2_round(&pc, opts.workers);
        rounds += 1;
        counts.push(next.num_colors);
        if next.num_colors == pc.num_colors {
            stabilized = true;
        }
        pc = next;
    }
    RefinementReport {
        algorithm: "cr-via-wl2",
        n,
        k: Some(2),
        rounds,
        stabilized,
        color_counts: counts,
        partition: pc.diagonal_partition(),
    }
}

// ---------------------------------------------------------------- k-WL

/// The atomic k-tuple coloring: the ordered-isomorphism type of the tuple
/// (equality pattern, adjacency pattern, sequence of vertex colors).
pub fn initial_tuple_coloring(
    g: &Graph,
    k: usize,
    budget: u64,
) -> Result<TupleColoring, BudgetError> {
    initial_tuple_coloring_with(g, g.colors(), k, budget)
}

pub fn initial_tuple_coloring_with(
    g: &Graph,
    vertex_colors: &[u32],
    k: usize,
    budget: u64,
) -> Result<TupleColoring, BudgetError> {
    let n = g.n();
    let total = (n as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
    if total > budget {
        return Err(BudgetError {
            needed: total,
            budget,
        });
    }
    let total = total as usize;
    let sigs: Vec<Vec<u32>> = (0..total)
        .map(|idx| atomic_tuple_sig(g, vertex_colors, idx, k))
        .collect();
    let (color_of, num_colors) = canonical_ranks(&sigs);
    Ok(TupleColoring {
        n,
        k,
        color_of,
        num_colors,
    })
}

pub(crate) fn atomic_tuple_sig(g: &Graph, vertex_colors: &[u32], idx: usize, k: usize) -> Vec<u32> {
    let n = g.n();
    let t = crate::partition::index_tuple(idx, n, k);
    let mut sig = Vec::with_capacity(k * (k - 1) + k);
    for i in 0..k {
        for j in (i + 1)..k {
            sig.push(u32::from(t[i] == t[j]));
        }
    }
    for i in 0..k {
        for j in (i + 1)..k {
            sig.push(u32::from(t[i] != t[j] && g.has_edge(t[i], t[j])));
        }
    }
    for &v in &t {
        sig.push(vertex_colors[v]);
    }
    sig
}

/// Direct k-dimensional WL refinement (the non-gadget reference path).
///
/// The signature of tuple t is its old color together with the sorted
/// multiset, over all vertices y, of the k-vector of colors of t with each
/// position in turn replaced by y.
pub fn wlk_refine(
    g: &Graph,
    k: usize,
    opts: &RefineOptions,
) -> Result<RefinementReport<TupleColoring>, BudgetError> {
    wlk_refine_with(g, g.colors(), k, opts)
}

pub fn wlk_refine_with(
    g: &Graph,
    vertex_colors: &[u32],
    k: usize,
    opts: &RefineOptions,
) -> Result<RefinementReport<TupleColoring>, BudgetError> {
    assert!(k >= 2, "k-WL requires k >= 2");
    let n = g.n();
    let mut tc = initial_tuple_coloring_with(g, vertex_colors, k, opts.memory_budget)?;
    let total = tc.color_of.len();
    let max_rounds = opts
        .max_rounds
        .unwrap_or_else(|| n.checked_pow(k as u32).unwrap_or(usize::MAX));
    // n^{k-1-i} strides for substituting position i
    let strides: Vec<usize> = (0..k).map(|i| n.pow((k - 1 - i) as u32)).collect();
    let mut counts = vec![tc.num_colors];
    let mut rounds = 0;
    let mut stabilized = tc.num_colors as usize == total;
    while !stabilized && rounds < max_rounds {
        let colors = &tc.color_of;
        let sigs = par_map(total, opts.workers, |idx| {
            let t = crate::partition::index_tuple(idx, n, k);
            let mut vectors: Vec<Vec<u32>> = (0..n)
                .map(|y| {
                    (0..k)
                        .map(|i| colors[idx - t[i] * strides[i] + y * strides[i]])
                        .collect()
                })
                .collect();
            vectors.sort_unstable();
            let mut sig = Vec::with_capacity(1 + n * k);
            sig.push(colors[idx]);
            for v in vectors {
                sig.extend(v);
            }
            sig
        });
        let (color_of, num_colors) = canonical_ranks(&sigs);
        rounds += 1;
        counts.push(num_colors);
        if num_colors == tc.num_colors {
            debug_assert_eq!(color_of, tc.color_of);
            stabilized = true;
        }
        tc = TupleColoring {
            n,
            k,
            color_of,
            num_colors,
        };
    }
    Ok(RefinementReport {
        algorithm: "kwl",
        n,
        k: Some(k),
        rounds,
        stabilized,
        color_counts: counts,
        partition: tc,
    })
}
