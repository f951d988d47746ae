//! Canonical colorings of vertices, ordered pairs, and ordered k-tuples.
//!
//! Every coloring in the crate obeys the same numbering rule: color ids are
//! the ranks of the lexicographically sorted distinct signatures that
//! produced them. Computing the same partition twice therefore yields
//! identical arrays, and the ids are invariant under vertex relabeling.

use crate::error::PartitionMismatch;
use serde::{Deserialize, Serialize};

/// Sorts distinct signatures lexicographically and assigns rank ids.
///
/// Returns the per-index color array and the number of distinct colors.
pub fn canonical_ranks<S: Ord>(sigs: &[S]) -> (Vec<u32>, u32) {
    let mut order: Vec<u32> = (0..sigs.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| sigs[a as usize].cmp(&sigs[b as usize]));
    let mut colors = vec![0u32; sigs.len()];
    let mut next = 0u32;
    for (pos, &idx) in order.iter().enumerate() {
        if pos > 0 {
            let prev = order[pos - 1] as usize;
            if sigs[prev] != sigs[idx as usize] {
                next += 1;
            }
        }
        colors[idx as usize] = next;
    }
    let count = if sigs.is_empty() { 0 } else { next + 1 };
    (colors, count)
}

/// Checks that every class of `a` is contained in a class of `b`.
pub fn labels_refine(a: &[u32], b: &[u32]) -> Result<bool, PartitionMismatch> {
    if a.len() != b.len() {
        return Err(PartitionMismatch(a.len(), b.len()));
    }
    let max_a = a.iter().max().map_or(0, |&m| m as usize + 1);
    let mut image: Vec<Option<u32>> = vec![None; max_a];
    for (&ca, &cb) in a.iter().zip(b) {
        match image[ca as usize] {
            None => image[ca as usize] = Some(cb),
            Some(prev) if prev != cb => return Ok(false),
            _ => {}
        }
    }
    Ok(true)
}

/// Equality as set partitions (mutual refinement).
pub fn labels_equal(a: &[u32], b: &[u32]) -> Result<bool, PartitionMismatch> {
    Ok(labels_refine(a, b)? && labels_refine(b, a)?)
}

/// A coloring of the vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexPartition {
    pub color_of: Vec<u32>,
    pub num_colors: u32,
}

impl VertexPartition {
    /// Canonicalizes arbitrary labels by signature rank (here the label
    /// itself is the signature, so ranks follow label order).
    pub fn from_labels(labels: &[u32]) -> Self {
        let (color_of, num_colors) = canonical_ranks(labels);
        VertexPartition {
            color_of,
            num_colors,
        }
    }

    pub fn n(&self) -> usize {
        self.color_of.len()
    }

    pub fn discrete(&self) -> bool {
        self.num_colors as usize == self.color_of.len()
    }

    pub fn refines(&self, other: &VertexPartition) -> Result<bool, PartitionMismatch> {
        labels_refine(&self.color_of, &other.color_of)
    }

    pub fn same_partition(&self, other: &VertexPartition) -> Result<bool, PartitionMismatch> {
        labels_equal(&self.color_of, &other.color_of)
    }

    pub fn distinguishes(&self, x: usize, y: usize) -> bool {
        self.color_of[x] != self.color_of[y]
    }

    /// Class sizes indexed by color id.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.num_colors as usize];
        for &c in &self.color_of {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// Members of each class, indexed by color id, ascending vertex order.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_colors as usize];
        for (v, &c) in self.color_of.iter().enumerate() {
            out[c as usize].push(v);
        }
        out
    }
}

/// A coloring of all ordered pairs (diagonal included), row-major n x n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairColoring {
    pub n: usize,
    pub color_of: Vec<u32>,
    pub num_colors: u32,
}

impl PairColoring {
    pub fn color(&self, x: usize, y: usize) -> u32 {
        self.color_of[x * self.n + y]
    }

    /// Vertex partition induced by the diagonal colors.
    pub fn diagonal_partition(&self) -> VertexPartition {
        let labels: Vec<u32> = (0..self.n).map(|v| self.color(v, v)).collect();
        VertexPartition::from_labels(&labels)
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.num_colors as usize];
        for &c in &self.color_of {
            sizes[c as usize] += 1;
        }
        sizes
    }
}

/// A coloring of all ordered k-tuples, row-major over n^k indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleColoring {
    pub n: usize,
    pub k: usize,
    pub color_of: Vec<u32>,
    pub num_colors: u32,
}

impl TupleColoring {
    /// Row-major index of a tuple.
    pub fn index_of(&self, tuple: &[usize]) -> usize {
        tuple_index(tuple, self.n)
    }

    pub fn color_of_tuple(&self, tuple: &[usize]) -> u32 {
        self.color_of[self.index_of(tuple)]
    }

    /// Vertex partition induced by the constant tuples (v, v, ..., v).
    pub fn diagonal_partition(&self) -> VertexPartition {
        let labels: Vec<u32> = (0..self.n)
            .map(|v| self.color_of_tuple(&vec![v; self.k]))
            .collect();
        VertexPartition::from_labels(&labels)
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.num_colors as usize];
        for &c in &self.color_of {
            sizes[c as usize] += 1;
        }
        sizes
    }
}

pub fn tuple_index(tuple: &[usize], n: usize) -> usize {
    tuple.iter().fold(0, |acc, &t| acc * n + t)
}

/// Decodes a row-major tuple index.
pub fn index_tuple(mut idx: usize, n: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0usize; k];
    for slot in out.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_are_sorted_signature_order() {
        let sigs = vec![vec![2u32], vec![0], vec![2], vec![1]];
        let (colors, count) = canonical_ranks(&sigs);
        assert_eq!(colors, vec![2, 0, 2, 1]);
        assert_eq!(count, 3);
    }

    #[test]
    fn refines_basics() {
        let single: Vec<u32> = vec![0, 1, 2, 3];
        let coarse: Vec<u32> = vec![0, 0, 1, 1];
        assert!(labels_refine(&single, &coarse).unwrap());
        assert!(!labels_refine(&coarse, &single).unwrap());
        assert!(labels_refine(&coarse, &coarse).unwrap());
        assert!(labels_equal(&coarse, &[1, 1, 0, 0]).unwrap());
        assert!(labels_refine(&coarse, &[0, 0]).is_err());
    }

    #[test]
    fn tuple_indexing_round_trip() {
        let n = 5;
        for idx in 0..n * n * n {
            let t = index_tuple(idx, n, 3);
            assert_eq!(tuple_index(&t, n), idx);
        }
    }

    #[test]
    fn from_labels_canonicalizes() {
        let p = VertexPartition::from_labels(&[5, 5, 9, 5]);
        assert_eq!(p.color_of, vec![0, 0, 1, 0]);
        assert_eq!(p.num_colors, 2);
    }
}
