//! Individualization-refinement isomorphism solver.
//!
//! The search alternates a stable refinement of both graphs with the
//! individualization of one vertex pair. Because every coloring in the crate
//! is canonically numbered, color ids correspond across the two graphs, so a
//! node is dead as soon as the per-color class sizes disagree. Sibling
//! branches are independent work items; under `workers > 1` they are explored
//! concurrently with a first-verified-witness-wins policy.

use crate::error::GraphError;
use crate::gadget::{simulate_kwl_via_cr_with, CrEngine};
use crate::graph::Graph;
use crate::partition::{canonical_ranks, VertexPartition};
use crate::perm::Permutation;
use crate::refine::{
    color_refine_with, simulate_cr_by_wl2_with, wlk_refine_with, RefineOptions,
};
use crate::BudgetError;
use crate::DEFAULT_MEMORY_BUDGET;
use itertools::Itertools;
use serde_json::json;
use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::{Condvar, Mutex};
use std::time::Instant;

/// Refinement procedure run at every search node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Refiner {
    /// Plain color refinement.
    Cr,
    /// Color refinement simulated by 2-WL in logarithmically many rounds.
    Wl2LogSim,
    /// Direct k-dimensional WL; the vertex partition is read off the
    /// diagonal tuples.
    Kwl(usize),
    /// k-dimensional WL simulated by color refinement on the gadget graph.
    GadgetKwl(usize),
}

#[derive(Debug, Clone)]
pub struct IsoOptions {
    pub refiner: Refiner,
    /// Concurrent branch explorers; 1 selects the deterministic sequential
    /// depth-first order.
    pub workers: usize,
    /// Cap on search nodes; exceeding it yields `Inconclusive`, never a
    /// verdict.
    pub node_budget: Option<u64>,
    /// Forwarded to the k-WL refiners.
    pub memory_budget: u64,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions {
            refiner: Refiner::Cr,
            workers: 1,
            node_budget: None,
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoOutcome {
    /// Carries an edge- and color-verified isomorphism from g1 to g2.
    Isomorphic(Permutation),
    NotIsomorphic,
    /// The node budget ran out before the search was exhausted.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct IsoResult {
    pub outcome: IsoOutcome,
    pub nodes_explored: u64,
    pub max_depth: usize,
    pub wall_time_ms: f64,
}

impl IsoResult {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self.outcome, IsoOutcome::Isomorphic(_))
    }

    pub fn witness(&self) -> Option<&Permutation> {
        match &self.outcome {
            IsoOutcome::Isomorphic(w) => Some(w),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (verdict, witness) = match &self.outcome {
            IsoOutcome::Isomorphic(w) => ("isomorphic", json!(w.images())),
            IsoOutcome::NotIsomorphic => ("not-isomorphic", json!(null)),
            IsoOutcome::Inconclusive => ("inconclusive", json!(null)),
        };
        json!({
            "verdict": verdict,
            "witness": witness,
            "nodes_explored": self.nodes_explored,
            "max_depth": self.max_depth,
            "wall_time_ms": self.wall_time_ms,
        })
    }
}

/// Splits vertex `v` off into a singleton class, canonically renumbered.
/// All other classes are unchanged (the target sorts after its old
/// classmates), so individualizing matching vertices of two aligned
/// colorings keeps the colorings aligned.
pub fn individualize(vp: &VertexPartition, v: usize) -> VertexPartition {
    let sigs: Vec<(u32, u32)> = vp
        .color_of
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, u32::from(i == v)))
        .collect();
    let (color_of, num_colors) = canonical_ranks(&sigs);
    VertexPartition {
        color_of,
        num_colors,
    }
}

fn refine(
    g: &Graph,
    colors: &[u32],
    refiner: Refiner,
    memory_budget: u64,
) -> Result<VertexPartition, BudgetError> {
    let opts = RefineOptions {
        max_rounds: None,
        workers: 1,
        memory_budget,
    };
    Ok(match refiner {
        Refiner::Cr => color_refine_with(g, colors, &opts).partition,
        Refiner::Wl2LogSim => simulate_cr_by_wl2_with(g, colors, &opts).partition,
        Refiner::Kwl(k) => wlk_refine_with(g, colors, k, &opts)?
            .partition
            .diagonal_partition(),
        Refiner::GadgetKwl(k) => {
            simulate_kwl_via_cr_with(g, colors, k, CrEngine::Parallel, &opts)?
                .0
                .diagonal_partition()
        }
    })
}

#[derive(Debug, Clone)]
struct Node {
    p1: VertexPartition,
    p2: VertexPartition,
    depth: usize,
}

enum Expansion {
    /// Verified isomorphism found at this node.
    Witness(Permutation),
    /// Child nodes to explore (possibly none: a dead node).
    Children(Vec<Node>),
}

/// Smallest non-singleton class, ties broken by lowest color id.
fn target_color(sizes: &[usize]) -> Option<usize> {
    sizes
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s > 1)
        .min_by_key(|&(c, &s)| (s, c))
        .map(|(c, _)| c)
}

fn expand(
    g1: &Graph,
    g2: &Graph,
    node: &Node,
    refiner: Refiner,
    memory_budget: u64,
) -> Result<Expansion, BudgetError> {
    let n = g1.n();
    let sizes1 = node.p1.class_sizes();
    if sizes1 != node.p2.class_sizes() {
        return Ok(Expansion::Children(Vec::new()));
    }
    if node.p1.discrete() {
        // read the mapping off the aligned singleton colors
        let mut images = vec![0u32; n];
        let mut slot = vec![usize::MAX; n];
        for (w, &c) in node.p2.color_of.iter().enumerate() {
            slot[c as usize] = w;
        }
        for (v, &c) in node.p1.color_of.iter().enumerate() {
            images[v] = slot[c as usize] as u32;
        }
        let pi = Permutation::from_images(images).expect("aligned discrete colorings");
        if verify_iso(g1, g2, &pi) {
            return Ok(Expansion::Witness(pi));
        }
        return Ok(Expansion::Children(Vec::new()));
    }
    let color = target_color(&sizes1).expect("non-discrete partition");
    let v = node
        .p1
        .color_of
        .iter()
        .position(|&c| c as usize == color)
        .expect("class is non-empty");
    let p1 = refine(g1, &individualize(&node.p1, v).color_of, refiner, memory_budget)?;
    let mut children = Vec::new();
    for (w, &c) in node.p2.color_of.iter().enumerate() {
        if c as usize != color {
            continue;
        }
        let p2 = refine(g2, &individualize(&node.p2, w).color_of, refiner, memory_budget)?;
        children.push(Node {
            p1: p1.clone(),
            p2,
            depth: node.depth + 1,
        });
    }
    Ok(Expansion::Children(children))
}

/// True iff `pi` maps g1 onto g2 preserving edges and (normalized) colors.
pub fn verify_iso(g1: &Graph, g2: &Graph, pi: &Permutation) -> bool {
    if pi.n() != g1.n() || g1.n() != g2.n() || g1.num_edges() != g2.num_edges() {
        return false;
    }
    (0..g1.n()).all(|v| g1.colors()[v] == g2.colors()[pi.apply(v)])
        && g1
            .edges()
            .iter()
            .all(|&(u, v)| g2.has_edge(pi.apply(u as usize), pi.apply(v as usize)))
}

/// Decides isomorphism of two graphs by individualization-refinement search.
///
/// Branching rule: target cell is the first smallest non-singleton class;
/// the branching vertex in g1 is the lowest index in the cell; branches run
/// over the matching g2 class in ascending vertex order. With `workers == 1`
/// the branches are explored in exactly that depth-first order; with more
/// workers, sibling branches run concurrently and the first verified witness
/// wins (the verdict itself is schedule-independent).
pub fn iso(g1: &Graph, g2: &Graph, opts: &IsoOptions) -> Result<IsoResult, BudgetError> {
    let start = Instant::now();
    let done = |outcome, nodes, max_depth| IsoResult {
        outcome,
        nodes_explored: nodes,
        max_depth,
        wall_time_ms: start.elapsed().as_secs_f64() * 1000.0,
    };
    if g1.n() != g2.n() || g1.num_edges() != g2.num_edges() {
        return Ok(done(IsoOutcome::NotIsomorphic, 0, 0));
    }
    let root = Node {
        p1: refine(g1, g1.colors(), opts.refiner, opts.memory_budget)?,
        p2: refine(g2, g2.colors(), opts.refiner, opts.memory_budget)?,
        depth: 0,
    };
    if opts.workers <= 1 {
        let mut nodes = 0u64;
        let mut max_depth = 0usize;
        let mut stack = vec![root];
        while let Some(node) = stack.pop() {
            nodes += 1;
            max_depth = max_depth.max(node.depth);
            if opts.node_budget.is_some_and(|b| nodes > b) {
                return Ok(done(IsoOutcome::Inconclusive, nodes, max_depth));
            }
            match expand(g1, g2, &node, opts.refiner, opts.memory_budget)? {
                Expansion::Witness(pi) => {
                    return Ok(done(IsoOutcome::Isomorphic(pi), nodes, max_depth));
                }
                Expansion::Children(children) => {
                    // push in reverse so the lowest-index branch pops first
                    stack.extend(children.into_iter().rev());
                }
            }
        }
        return Ok(done(IsoOutcome::NotIsomorphic, nodes, max_depth));
    }

    // Branch-parallel exploration: a shared LIFO work stack, a cooperative
    // cancellation flag checked at node boundaries, and a first-writer-wins
    // witness slot.
    struct Shared {
        queue: Mutex<(VecDeque<Node>, usize)>, // (work items, idle workers)
        wake: Condvar,
        cancel: AtomicBool,
        witness: Mutex<Option<Permutation>>,
        budget_hit: AtomicBool,
        error: Mutex<Option<BudgetError>>,
        nodes: AtomicU64,
        max_depth: AtomicUsize,
    }
    let shared = Shared {
        queue: Mutex::new((VecDeque::from(vec![root]), 0)),
        wake: Condvar::new(),
        cancel: AtomicBool::new(false),
        witness: Mutex::new(None),
        budget_hit: AtomicBool::new(false),
        error: Mutex::new(None),
        nodes: AtomicU64::new(0),
        max_depth: AtomicUsize::new(0),
    };
    std::thread::scope(|scope| {
        for _ in 0..opts.workers {
            scope.spawn(|| {
                loop {
                    let node = {
                        let mut q = shared.queue.lock().unwrap();
                        loop {
                            if shared.cancel.load(Ordering::SeqCst) {
                                return;
                            }
                            if let Some(node) = q.0.pop_back() {
                                break node;
                            }
                            q.1 += 1;
                            if q.1 == opts.workers {
                                // everyone idle with an empty stack: finished
                                shared.cancel.store(true, Ordering::SeqCst);
                                shared.wake.notify_all();
                                return;
                            }
                            q = shared.wake.wait(q).unwrap();
                            q.1 -= 1;
                        }
                    };
                    let nodes = shared.nodes.fetch_add(1, Ordering::SeqCst) + 1;
                    shared.max_depth.fetch_max(node.depth, Ordering::SeqCst);
                    if opts.node_budget.is_some_and(|b| nodes > b) {
                        shared.budget_hit.store(true, Ordering::SeqCst);
                        shared.cancel.store(true, Ordering::SeqCst);
                        shared.wake.notify_all();
                        return;
                    }
                    match expand(g1, g2, &node, opts.refiner, opts.memory_budget) {
                        Ok(Expansion::Witness(pi)) => {
                            let mut slot = shared.witness.lock().unwrap();
                            if slot.is_none() {
                                *slot = Some(pi);
                            }
                            drop(slot);
                            shared.cancel.store(true, Ordering::SeqCst);
                            shared.wake.notify_all();
                            return;
                        }
                        Ok(Expansion::Children(children)) => {
                            if !children.is_empty() {
                                let mut q = shared.queue.lock().unwrap();
                                for child in children.into_iter().rev() {
                                    q.0.push_back(child);
                                }
                                shared.wake.notify_all();
                            }
                        }
                        Err(e) => {
                            let mut slot = shared.error.lock().unwrap();
                            if slot.is_none() {
                                *slot = Some(e);
                            }
                            drop(slot);
                            shared.cancel.store(true, Ordering::SeqCst);
                            shared.wake.notify_all();
                            return;
                        }
                    }
                }
            });
        }
    });
    if let Some(e) = shared.error.lock().unwrap().take() {
        return Err(e);
    }
    let nodes = shared.nodes.load(Ordering::SeqCst);
    let max_depth = shared.max_depth.load(Ordering::SeqCst);
    if let Some(pi) = shared.witness.lock().unwrap().take() {
        debug_assert!(verify_iso(g1, g2, &pi));
        return Ok(done(IsoOutcome::Isomorphic(pi), nodes, max_depth));
    }
    if shared.budget_hit.load(Ordering::SeqCst) {
        return Ok(done(IsoOutcome::Inconclusive, nodes, max_depth));
    }
    Ok(done(IsoOutcome::NotIsomorphic, nodes, max_depth))
}

/// Exhaustive oracle: tries all n! bijections in lexicographic order and
/// returns the least witness, if any. Colors are compared after the graphs'
/// usual normalization.
pub fn brute_force_iso(g1: &Graph, g2: &Graph, cap: usize) -> Result<IsoResult, GraphError> {
    let start = Instant::now();
    if g1.n() > cap || g2.n() > cap {
        return Err(GraphError::InvalidParameter(format!(
            "brute_force_iso: n = {} exceeds cap {}",
            g1.n().max(g2.n()),
            cap
        )));
    }
    let mut checked = 0u64;
    let mut outcome = IsoOutcome::NotIsomorphic;
    if g1.n() == g2.n() {
        for images in (0..g1.n() as u32).permutations(g1.n()) {
            checked += 1;
            let pi = Permutation::from_images(images).expect("permutation by construction");
            if verify_iso(g1, g2, &pi) {
                outcome = IsoOutcome::Isomorphic(pi);
                break;
            }
        }
    }
    Ok(IsoResult {
        outcome,
        nodes_explored: checked,
        max_depth: 0,
        wall_time_ms: start.elapsed().as_secs_f64() * 1000.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn random_relabel(g: &Graph, seed: u64) -> (Graph, Vec<usize>) {
        let mut rng = SplitMix64::new(seed);
        let mut perm: Vec<usize> = (0..g.n()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.next_below(i as u64 + 1) as usize);
        }
        (g.relabel(&perm).unwrap(), perm)
    }

    #[test]
    fn individualize_examples() {
        let uniform = VertexPartition::from_labels(&[0, 0, 0]);
        let split = individualize(&uniform, 0);
        assert_eq!(split.classes(), vec![vec![1, 2], vec![0]]);

        let already = VertexPartition::from_labels(&[0, 1, 2]);
        assert!(individualize(&already, 1)
            .same_partition(&already)
            .unwrap());
    }

    #[test]
    fn individualize_then_refine_p4() {
        let g = Graph::path(4);
        let opts = RefineOptions::default();
        let stable = color_refine_with(&g, g.colors(), &opts).partition;
        assert_eq!(stable.classes(), vec![vec![0, 3], vec![1, 2]]);
        let refined =
            color_refine_with(&g, &individualize(&stable, 0).color_of, &opts).partition;
        // individualizing an endpoint splits everything
        assert!(refined.discrete());
    }

    #[test]
    fn brute_force_examples() {
        let k3 = Graph::complete(3);
        let c3 = Graph::cycle(3);
        assert!(brute_force_iso(&k3, &c3, 8).unwrap().is_isomorphic());

        let (c6, cc3) = Graph::hard_pair("c6-vs-2c3").unwrap();
        let r = brute_force_iso(&c6, &cc3, 8).unwrap();
        assert_eq!(r.outcome, IsoOutcome::NotIsomorphic);
        assert_eq!(r.nodes_explored, 720);

        let g = Graph::cycle(5);
        let r = brute_force_iso(&g, &g, 8).unwrap();
        assert_eq!(r.witness().unwrap(), &Permutation::identity(5));

        assert!(brute_force_iso(&Graph::path(9), &Graph::path(9), 8).is_err());
    }

    #[test]
    fn iso_easy_cases() {
        let opts = IsoOptions::default();
        let r = iso(&Graph::path(4), &Graph::path(4), &opts).unwrap();
        assert!(r.is_isomorphic());

        // star vs path: dead at the root, no branching needed
        let star = Graph::new(4, vec![(0, 1), (0, 2), (0, 3)], None).unwrap();
        let r = iso(&Graph::path(4), &star, &opts).unwrap();
        assert_eq!(r.outcome, IsoOutcome::NotIsomorphic);
        assert_eq!(r.nodes_explored, 1);

        let r = iso(&Graph::path(3), &Graph::path(4), &opts).unwrap();
        assert_eq!(r.outcome, IsoOutcome::NotIsomorphic);
        assert_eq!(r.nodes_explored, 0);
    }

    #[test]
    fn iso_needs_branching_on_hard_pair() {
        let (c6, cc3) = Graph::hard_pair("c6-vs-2c3").unwrap();
        for workers in [1, 2, 8] {
            let opts = IsoOptions {
                workers,
                ..IsoOptions::default()
            };
            let r = iso(&c6, &cc3, &opts).unwrap();
            assert_eq!(r.outcome, IsoOutcome::NotIsomorphic);
            assert!(r.nodes_explored > 1);
        }
    }

    #[test]
    fn iso_relabeled_graphs_all_refiners() {
        let g = Graph::random(7, 0.4, 99).unwrap();
        let (h, _) = random_relabel(&g, 5);
        for refiner in [
            Refiner::Cr,
            Refiner::Wl2LogSim,
            Refiner::Kwl(2),
            Refiner::GadgetKwl(2),
        ] {
            let opts = IsoOptions {
                refiner,
                ..IsoOptions::default()
            };
            let r = iso(&g, &h, &opts).unwrap();
            let w = r.witness().expect("relabeled graph is isomorphic");
            assert!(verify_iso(&g, &h, w));
        }
    }

    #[test]
    fn iso_respects_vertex_colors() {
        // colors are compared as normalized ids (first-occurrence order),
        // so [7,3,3] and [9,5,5] carry the same coloring...
        let a = Graph::new(3, vec![(0, 1), (1, 2)], Some(vec![7, 3, 3])).unwrap();
        let b = Graph::new(3, vec![(0, 1), (1, 2)], Some(vec![9, 5, 5])).unwrap();
        let r = iso(&a, &b, &IsoOptions::default()).unwrap();
        let w = r.witness().unwrap();
        assert!(verify_iso(&a, &b, w));
        assert_eq!(w.apply(0), 0); // the unique-colored endpoints must match
        let oracle = brute_force_iso(&a, &b, 8).unwrap();
        assert_eq!(oracle.witness().unwrap().apply(0), 0);

        // ...while [3,3,7] normalizes to a different id structure: under the
        // id semantics the graphs are distinguishable, and solver and oracle
        // agree on that
        let c = Graph::new(3, vec![(0, 1), (1, 2)], Some(vec![3, 3, 7])).unwrap();
        let r = iso(&a, &c, &IsoOptions::default()).unwrap();
        assert_eq!(r.outcome, IsoOutcome::NotIsomorphic);
        assert!(!brute_force_iso(&a, &c, 8).unwrap().is_isomorphic());
    }

    #[test]
    fn verdict_matches_oracle_on_random_pairs() {
        let mut rng = SplitMix64::new(17);
        for trial in 0..40 {
            let n = 4 + (trial % 4);
            let g1 = Graph::random(n, 0.5, rng.next_u64()).unwrap();
            let g2 = Graph::random(n, 0.5, rng.next_u64()).unwrap();
            let want = brute_force_iso(&g1, &g2, 8).unwrap().is_isomorphic();
            for workers in [1, 3] {
                let opts = IsoOptions {
                    workers,
                    ..IsoOptions::default()
                };
                let r = iso(&g1, &g2, &opts).unwrap();
                assert_eq!(r.is_isomorphic(), want, "n={n} trial={trial}");
                if let Some(w) = r.witness() {
                    assert!(verify_iso(&g1, &g2, w));
                }
            }
        }
    }

    #[test]
    fn node_budget_gives_inconclusive() {
        let (c6, cc3) = Graph::hard_pair("c6-vs-2c3").unwrap();
        for workers in [1, 4] {
            let opts = IsoOptions {
                node_budget: Some(1),
                workers,
                ..IsoOptions::default()
            };
            let r = iso(&c6, &cc3, &opts).unwrap();
            assert_eq!(r.outcome, IsoOutcome::Inconclusive);
        }
    }

    #[test]
    fn sequential_node_count_is_deterministic() {
        let (c8, cc4) = Graph::hard_pair("c8-vs-2c4").unwrap();
        let opts = IsoOptions::default();
        let a = iso(&c8, &cc4, &opts).unwrap();
        let b = iso(&c8, &cc4, &opts).unwrap();
        assert_eq!(a.outcome, b.outcome);
        assert_eq!(a.nodes_explored, b.nodes_explored);
        assert_eq!(a.max_depth, b.max_depth);
    }

    #[test]
    fn json_shape() {
        let r = iso(&Graph::path(3), &Graph::path(3), &IsoOptions::default()).unwrap();
        let v = r.to_json();
        assert_eq!(v["verdict"], "isomorphic");
        assert!(v["witness"].is_array());
        assert!(v["nodes_explored"].is_u64());
    }
}
