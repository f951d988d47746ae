//! Exhaustive small-graph corpora, one representative per isomorphism class.
//!
//! Connected graphs are generated by vertex augmentation: every connected
//! graph on n vertices arises from a connected graph on n-1 vertices by
//! adding one vertex with a non-empty neighborhood (delete a leaf of any
//! spanning tree to see this). Deduplication uses the brute-force canonical
//! form: the minimum edge bitmask over all vertex permutations. Feasible for
//! n <= 7 (21 edge bits, 5040 permutations).

use super::Graph;
use itertools::Itertools;
use std::collections::BTreeSet;

const MAX_N: usize = 7;

/// Bit position of pair (i, j), i < j, in column order (0,1),(0,2),(1,2),...
fn pair_bit(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

/// For each permutation of 0..n, the induced permutation of pair-bit indices.
fn pair_tables(n: usize) -> Vec<Vec<u8>> {
    (0..n)
        .permutations(n)
        .map(|p| {
            let mut table = vec![0u8; n * (n - 1) / 2];
            for j in 1..n {
                for i in 0..j {
                    let (a, b) = (p[i].min(p[j]), p[i].max(p[j]));
                    table[pair_bit(i, j)] = pair_bit(a, b) as u8;
                }
            }
            table
        })
        .collect()
}

fn apply_table(mask: u32, table: &[u8]) -> u32 {
    let mut out = 0u32;
    let mut rest = mask;
    while rest != 0 {
        let e = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out |= 1 << table[e];
    }
    out
}

fn canonical_mask(mask: u32, tables: &[Vec<u8>]) -> u32 {
    tables
        .iter()
        .map(|t| apply_table(mask, t))
        .min()
        .unwrap_or(mask)
}

fn mask_to_graph(mask: u32, n: usize) -> Graph {
    let edges = (1..n)
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .filter(|&(i, j)| mask & (1 << pair_bit(i, j)) != 0);
    Graph::new(n, edges, None).unwrap()
}

#[cfg(test)]
fn graph_to_mask(g: &Graph) -> u32 {
    let mut mask = 0u32;
    for &(u, v) in g.edges() {
        mask |= 1 << pair_bit(u as usize, v as usize);
    }
    mask
}

/// All connected graphs on exactly `n` vertices, up to isomorphism,
/// in canonical-mask order. Supported for 1 <= n <= 7.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!(n >= 1 && n <= MAX_N, "corpus supports 1 <= n <= {MAX_N}");
    let mut masks: BTreeSet<u32> = BTreeSet::new();
    masks.insert(0); // K_1
    for size in 2..=n {
        let tables = pair_tables(size);
        let mut next = BTreeSet::new();
        for &base in &masks {
            // attach vertex size-1 with every non-empty neighborhood
            for nb in 1u32..(1 << (size - 1)) {
                let mut mask = base;
                for i in 0..(size - 1) {
                    if nb & (1 << i) != 0 {
                        mask |= 1 << pair_bit(i, size - 1);
                    }
                }
                next.insert(canonical_mask(mask, &tables));
            }
        }
        masks = next;
    }
    masks.into_iter().map(|m| mask_to_graph(m, n)).collect()
}

/// All graphs (connected or not) on exactly `n` vertices, up to isomorphism.
/// Supported for 1 <= n <= 5 (direct sweep over all edge masks).
pub fn all_graphs(n: usize) -> Vec<Graph> {
    assert!(n >= 1 && n <= 5, "all_graphs supports 1 <= n <= 5");
    let tables = pair_tables(n);
    let mut masks: BTreeSet<u32> = BTreeSet::new();
    for mask in 0..(1u32 << (n * (n - 1) / 2)) {
        masks.insert(canonical_mask(mask, &tables));
    }
    masks.into_iter().map(|m| mask_to_graph(m, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_counts_match_oeis_a001349() {
        // 1, 1, 2, 6, 21, 112 connected graphs on 1..=6 vertices
        let expected = [1, 1, 2, 6, 21, 112];
        for (n, &want) in expected.iter().enumerate() {
            assert_eq!(connected_graphs(n + 1).len(), want, "n = {}", n + 1);
        }
    }

    #[test]
    fn all_graph_counts_match_oeis_a000088() {
        let expected = [1, 2, 4, 11, 34];
        for (n, &want) in expected.iter().enumerate() {
            assert_eq!(all_graphs(n + 1).len(), want, "n = {}", n + 1);
        }
    }

    #[test]
    fn members_are_connected_and_distinct() {
        let graphs = connected_graphs(5);
        for g in &graphs {
            assert!(g.is_connected());
            assert_eq!(g.n(), 5);
        }
        let masks: BTreeSet<u32> = graphs.iter().map(graph_to_mask).collect();
        assert_eq!(masks.len(), graphs.len());
    }

    #[test]
    fn canonical_mask_is_isomorphism_invariant() {
        let tables = pair_tables(5);
        let g = Graph::random(5, 0.5, 3).unwrap();
        let h = g.relabel(&[4, 2, 0, 1, 3]).unwrap();
        assert_eq!(
            canonical_mask(graph_to_mask(&g), &tables),
            canonical_mask(graph_to_mask(&h), &tables)
        );
    }
}
