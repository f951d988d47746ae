//! Permutation groups: orbits, minimal block systems, stabilizer chains,
//! sifting, generating-set refinement, and a full Schreier-Sims closure.
//!
//! Composition is left-to-right throughout: `a.then(&b)` maps i to b[a[i]],
//! i.e. apply `a` first. All chain code is pinned to this convention.

use crate::error::PermError;
use crate::par::par_map;
use crate::rng::SplitMix64;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A permutation of 0..n-1 stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    images: Vec<u32>,
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = PermError;
    fn try_from(images: Vec<u32>) -> Result<Self, PermError> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Vec<u32> {
        p.images
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img as usize >= n || seen[img as usize] {
                return Err(PermError::NotBijection(n));
            }
            seen[img as usize] = true;
        }
        Ok(Permutation { images })
    }

    /// Convenience constructor from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for cycle in cycles {
            for w in 0..cycle.len() {
                let from = cycle[w];
                let to = cycle[(w + 1) % cycle.len()];
                if from >= n || to >= n {
                    return Err(PermError::NotBijection(n));
                }
                images[from] = to as u32;
            }
        }
        Permutation::from_images(images)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i as u32 == img)
    }

    /// Left-to-right composition: apply `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.n(), other.n());
        Permutation {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.n()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u32;
        }
        Permutation { images }
    }

    /// Cycle notation for human-facing output, e.g. "(0 1 2)(3 4)".
    pub fn to_cycle_string(&self) -> String {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            out.push('(');
            let mut p = start;
            loop {
                seen[p] = true;
                out.push_str(&p.to_string());
                p = self.apply(p);
                if p == start {
                    break;
                }
                out.push(' ');
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

/// Checked composition (size mismatch is an error).
pub fn compose(a: &Permutation, b: &Permutation) -> Result<Permutation, PermError> {
    if a.n() != b.n() {
        return Err(PermError::SizeMismatch(a.n(), b.n()));
    }
    Ok(a.then(b))
}

/// A group given by generators; the identity is filtered on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingSet {
    n: usize,
    gens: Vec<Permutation>,
}

impl GeneratingSet {
    pub fn new(n: usize, gens: Vec<Permutation>) -> Result<Self, PermError> {
        for g in &gens {
            if g.n() != n {
                return Err(PermError::SizeMismatch(n, g.n()));
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(GeneratingSet { n, gens })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }
}

// ---------------------------------------------------------------- orbits

/// Orbit partition of the domain, blocks sorted by minimum element.
pub fn orbits(gs: &GeneratingSet) -> Vec<Vec<usize>> {
    let n = gs.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for g in gs.gens() {
        for i in 0..n {
            let (a, b) = (find(&mut parent, i), find(&mut parent, g.apply(i)));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    groups.into_values().collect()
}

pub fn is_transitive(gs: &GeneratingSet) -> bool {
    orbits(gs).len() <= 1
}

// ---------------------------------------------------------------- blocks

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockSystem {
    pub blocks: Vec<Vec<usize>>,
    pub primitive: bool,
}

/// Minimal block system of a transitive group (fewest blocks, i.e. maximum
/// block size). For each b != 0, the connected component of 0 in the graph
/// whose edges are the orbit of {0, b} is the smallest block containing both;
/// the component partition of that graph is the corresponding block system.
pub fn minimal_block_system(gs: &GeneratingSet) -> Result<BlockSystem, PermError> {
    if !is_transitive(gs) {
        return Err(PermError::NotTransitive);
    }
    let n = gs.n();
    if n <= 1 {
        return Ok(BlockSystem {
            blocks: (0..n).map(|i| vec![i]).collect(),
            primitive: true,
        });
    }
    let mut best: Option<Vec<Vec<usize>>> = None;
    for b in 1..n {
        let blocks = block_system_from_pair(gs, 0, b);
        let size = blocks[0].len();
        if size > 1 && size < n {
            let better = match &best {
                None => true,
                Some(cur) => size > cur[0].len(),
            };
            if better {
                best = Some(blocks);
            }
        }
    }
    match best {
        Some(mut blocks) => {
            for block in &mut blocks {
                block.sort_unstable();
            }
            blocks.sort();
            Ok(BlockSystem {
                blocks,
                primitive: false,
            })
        }
        None => Ok(BlockSystem {
            blocks: (0..n).map(|i| vec![i]).collect(),
            primitive: true,
        }),
    }
}

/// Component partition of the graph on the domain with the orbit of {a, b}
/// as edge set; the component of `a` appears first.
fn block_system_from_pair(gs: &GeneratingSet, a: usize, b: usize) -> Vec<Vec<usize>> {
    let n = gs.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![(a.min(b), a.max(b))];
    seen.insert((a.min(b), a.max(b)));
    while let Some((x, y)) = stack.pop() {
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        if rx != ry {
            parent[rx.max(ry)] = rx.min(ry);
        }
        for g in gs.gens() {
            let (gx, gy) = (g.apply(x), g.apply(y));
            let e = (gx.min(gy), gx.max(gy));
            if seen.insert(e) {
                stack.push(e);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    let root_a = find(&mut parent, a);
    let mut blocks = vec![groups.remove(&root_a).unwrap()];
    blocks.extend(groups.into_values());
    blocks
}

// ---------------------------------------------------------------- chain

/// Per-level coset representatives for the tower of stabilizers of the
/// natural base 0, 1, ..., n-2. Every element of level i fixes 0..i-1
/// pointwise and representatives within a level have pairwise distinct
/// images of point i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerChain {
    n: usize,
    levels: Vec<Vec<Permutation>>,
}

/// Result of sifting a permutation through a chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sift {
    pub member: bool,
    /// Level at which reduction failed, or -1 on success.
    pub drop_level: isize,
    pub residue: Permutation,
}

impl StabilizerChain {
    pub fn empty(n: usize) -> Self {
        StabilizerChain {
            n,
            levels: vec![Vec::new(); n.saturating_sub(1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> &[Vec<Permutation>] {
        &self.levels
    }

    pub fn rep_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// Inserts a representative at `level`; it must fix all earlier base
    /// points, move the base point, and carry a fresh image of it.
    pub fn insert(&mut self, level: usize, rep: Permutation) {
        debug_assert!((0..level).all(|p| rep.apply(p) == p));
        debug_assert_ne!(rep.apply(level), level);
        debug_assert!(self.levels[level]
            .iter()
            .all(|r| r.apply(level) != rep.apply(level)));
        self.levels[level].push(rep);
    }

    /// Reduces `x` level by level: at level i, if the residue moves point i
    /// and some representative shares its image of i, multiply by that
    /// representative's inverse; otherwise the test fails at level i.
    pub fn sift(&self, x: &Permutation) -> Sift {
        let mut residue = x.clone();
        for (i, level) in self.levels.iter().enumerate() {
            let img = residue.apply(i);
            if img == i {
                continue;
            }
            match level.iter().find(|rep| rep.apply(i) == img) {
                Some(rep) => residue = residue.then(&rep.inverse()),
                None => {
                    return Sift {
                        member: false,
                        drop_level: i as isize,
                        residue,
                    }
                }
            }
        }
        debug_assert!(residue.is_identity());
        Sift {
            member: true,
            drop_level: -1,
            residue,
        }
    }

    pub fn contains(&self, x: &Permutation) -> bool {
        self.sift(x).member
    }

    /// Product over levels of (representatives + 1), counting the implicit
    /// identity at each level. Exact for Schreier-Sims-closed chains.
    pub fn order(&self) -> BigUint {
        let mut order = BigUint::from(1u32);
        for level in &self.levels {
            order *= BigUint::from(level.len() as u64 + 1);
        }
        order
    }
}

// --------------------------------------------------- generating-set refinement

/// How the refinement loop picks among failing elements.
#[derive(Debug, Clone, Copy)]
pub enum Selection {
    /// Lowest index first: reproducible across runs and worker counts.
    Deterministic,
    /// Uniformly random under a SplitMix64 stream.
    Seeded(u64),
}

/// Refines a (possibly huge) generating set: repeatedly sift every element
/// against the chain of the set built so far in parallel, pick one failing
/// element, add it, and stop when everything passes.
///
/// The membership chain is kept Schreier-Sims-closed between rounds, so each
/// added element lies outside the group generated so far and at least
/// doubles it: |A'| <= floor(log2 |G|) + 1. The returned chain is a complete
/// membership oracle for the generated group.
pub fn refine_generating_set(
    gs: &GeneratingSet,
    selection: Selection,
    workers: usize,
) -> (GeneratingSet, StabilizerChain) {
    let n = gs.n();
    let mut chain = StabilizerChain::empty(n);
    let mut refined: Vec<Permutation> = Vec::new();
    let mut rng = match selection {
        Selection::Seeded(seed) => Some(SplitMix64::new(seed)),
        Selection::Deterministic => None,
    };
    loop {
        let member = par_map(gs.len(), workers, |i| chain.contains(&gs.gens()[i]));
        let failing: Vec<usize> = (0..gs.len()).filter(|&i| !member[i]).collect();
        if failing.is_empty() {
            break;
        }
        let pick = match rng.as_mut() {
            None => failing[0],
            Some(rng) => failing[rng.next_below(failing.len() as u64) as usize],
        };
        refined.push(gs.gens()[pick].clone());
        chain = schreier_sims(
            &GeneratingSet::new(n, refined.clone()).expect("elements share the domain"),
        );
    }
    (
        GeneratingSet::new(n, refined).expect("elements share the domain"),
        chain,
    )
}

// ---------------------------------------------------------------- Schreier-Sims

/// Deterministic orbit/transversal of base point `base` under `gens`:
/// BFS in ascending point order, representative maps `base` to the key.
fn orbit_transversal(
    n: usize,
    base: usize,
    gens: &[Permutation],
) -> BTreeMap<usize, Permutation> {
    let mut transversal = BTreeMap::new();
    transversal.insert(base, Permutation::identity(n));
    let mut queue = vec![base];
    let mut qi = 0;
    while qi < queue.len() {
        let beta = queue[qi];
        qi += 1;
        let rep = transversal[&beta].clone();
        for s in gens {
            let target = s.apply(beta);
            if !transversal.contains_key(&target) {
                transversal.insert(target, rep.then(s));
                queue.push(target);
            }
        }
    }
    transversal
}

/// Strips `x` through the transversals; the returned residue fixes all
/// levels before the returned one, and on failure its image of that level's
/// base point lies outside the level's orbit.
fn strip_through(
    transversals: &[BTreeMap<usize, Permutation>],
    x: &Permutation,
) -> (Permutation, usize) {
    let mut residue = x.clone();
    for (lv, transversal) in transversals.iter().enumerate() {
        let img = residue.apply(lv);
        match transversal.get(&img) {
            Some(rep) => residue = residue.then(&rep.inverse()),
            None => return (residue, lv),
        }
    }
    (residue, transversals.len())
}

/// Full deterministic Schreier-Sims closure: builds a chain for which `sift`
/// is a sound and complete membership test for the generated group.
///
/// A generator fixing base points 0..t-1 is an element of every stabilizer
/// subgroup H_s with s <= t, so it is stacked onto all those levels; orbits
/// and transversals are recomputed and every Schreier generator is stripped
/// until no new residue appears. Each inserted residue enlarges the orbit at
/// its drop level, which bounds the number of rounds by log2 of the group
/// order.
pub fn schreier_sims(gs: &GeneratingSet) -> StabilizerChain {
    let n = gs.n();
    let depth = n.saturating_sub(1);
    let mut level_gens: Vec<Vec<Permutation>> = vec![Vec::new(); depth];
    let stack = |level_gens: &mut Vec<Vec<Permutation>>, g: &Permutation| {
        let first_moved = (0..n).find(|&p| g.apply(p) != p).expect("non-identity");
        for t in 0..=first_moved.min(depth.saturating_sub(1)) {
            level_gens[t].push(g.clone());
        }
    };
    for g in gs.gens() {
        stack(&mut level_gens, g);
    }
    let transversals = 'closure: loop {
        let transversals: Vec<BTreeMap<usize, Permutation>> = (0..depth)
            .map(|t| orbit_transversal(n, t, &level_gens[t]))
            .collect();
        for (j, transversal) in transversals.iter().enumerate() {
            for (&beta, u_beta) in transversal {
                for s in &level_gens[j] {
                    let target = s.apply(beta);
                    let u_target = &transversal[&target];
                    let schreier = u_beta.then(s).then(&u_target.inverse());
                    if schreier.is_identity() {
                        continue;
                    }
                    let (residue, _) = strip_through(&transversals, &schreier);
                    if !residue.is_identity() {
                        stack(&mut level_gens, &residue);
                        continue 'closure;
                    }
                }
            }
        }
        break transversals;
    };
    let mut chain = StabilizerChain::empty(n);
    for (i, transversal) in transversals.into_iter().enumerate() {
        for (point, rep) in transversal {
            if point != i {
                chain.insert(i, rep);
            }
        }
    }
    chain
}

/// Exhaustive closure of the generators under composition; `None` when the
/// group is larger than `cap`. Independent of all chain machinery.
pub fn enumerate_group(gs: &GeneratingSet, cap: usize) -> Option<Vec<Permutation>> {
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(Permutation::identity(gs.n()));
    let mut queue: Vec<Permutation> = seen.iter().cloned().collect();
    while let Some(p) = queue.pop() {
        for g in gs.gens() {
            let q = p.then(g);
            if seen.insert(q.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push(q);
            }
        }
    }
    Some(seen.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s4() -> GeneratingSet {
        GeneratingSet::new(
            4,
            vec![
                Permutation::from_cycles(4, &[&[0, 1]]).unwrap(),
                Permutation::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap(),
            ],
        )
        .unwrap()
    }

    fn a4() -> GeneratingSet {
        GeneratingSet::new(
            4,
            vec![
                Permutation::from_cycles(4, &[&[0, 1, 2]]).unwrap(),
                Permutation::from_cycles(4, &[&[1, 2, 3]]).unwrap(),
            ],
        )
        .unwrap()
    }

    /// Brute-force block-system oracle: all partitions of the domain
    /// preserved by every generator, restricted to equal-size blocks.
    fn preserved_partitions(gs: &GeneratingSet) -> Vec<Vec<Vec<usize>>> {
        let n = gs.n();
        // enumerate set partitions via restricted growth strings
        let mut out = Vec::new();
        let mut rgs = vec![0usize; n];
        loop {
            let num_blocks = rgs.iter().max().map_or(0, |&m| m + 1);
            let mut blocks = vec![Vec::new(); num_blocks];
            for (i, &b) in rgs.iter().enumerate() {
                blocks[b].push(i);
            }
            let sizes_equal = blocks.windows(2).all(|w| w[0].len() == w[1].len());
            if sizes_equal && preserved(gs, &rgs) {
                out.push(blocks);
            }
            // next restricted growth string
            let mut i = n;
            loop {
                if i == 1 {
                    return out;
                }
                i -= 1;
                let max_prefix = rgs[..i].iter().max().copied().unwrap_or(0);
                if rgs[i] <= max_prefix {
                    rgs[i] += 1;
                    for slot in rgs.iter_mut().skip(i + 1) {
                        *slot = 0;
                    }
                    break;
                }
            }
        }
    }

    fn preserved(gs: &GeneratingSet, labels: &[usize]) -> bool {
        gs.gens().iter().all(|g| {
            // blocks map onto blocks
            let n = labels.len();
            let mut image_of = vec![None; n];
            (0..n).all(|i| {
                let (b, gb) = (labels[i], labels[g.apply(i)]);
                match image_of[b] {
                    None => {
                        image_of[b] = Some(gb);
                        true
                    }
                    Some(prev) => prev == gb,
                }
            })
        })
    }

    #[test]
    fn composition_convention() {
        let a = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        // left-to-right: i -> b[a[i]]
        assert_eq!(compose(&a, &b).unwrap().images(), &[2, 0, 1]);
        let p = Permutation::from_images(vec![3, 0, 2, 1]).unwrap();
        assert_eq!(p.then(&p.inverse()), Permutation::identity(4));
        assert_eq!(Permutation::identity(5).inverse(), Permutation::identity(5));
        assert!(compose(&a, &Permutation::identity(4)).is_err());
    }

    #[test]
    fn bijection_validation() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3]).is_err());
    }

    #[test]
    fn cycle_string() {
        assert_eq!(
            Permutation::from_cycles(5, &[&[0, 1, 2], &[3, 4]])
                .unwrap()
                .to_cycle_string(),
            "(0 1 2)(3 4)"
        );
        assert_eq!(Permutation::identity(3).to_cycle_string(), "()");
    }

    #[test]
    fn orbit_examples() {
        let gs = GeneratingSet::new(
            5,
            vec![
                Permutation::from_cycles(5, &[&[0, 1]]).unwrap(),
                Permutation::from_cycles(5, &[&[2, 3]]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(orbits(&gs), vec![vec![0, 1], vec![2, 3], vec![4]]);
        assert!(!is_transitive(&gs));

        let c4 = GeneratingSet::new(
            4,
            vec![Permutation::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap()],
        )
        .unwrap();
        assert!(is_transitive(&c4));

        let empty = GeneratingSet::new(3, vec![]).unwrap();
        assert_eq!(orbits(&empty), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn block_systems() {
        let c4 = GeneratingSet::new(
            4,
            vec![Permutation::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap()],
        )
        .unwrap();
        let bs = minimal_block_system(&c4).unwrap();
        assert_eq!(bs.blocks, vec![vec![0, 2], vec![1, 3]]);
        assert!(!bs.primitive);
        // matches the brute-force oracle's maximum non-trivial block size
        let oracle = preserved_partitions(&c4);
        let max_nontrivial = oracle
            .iter()
            .map(|p| p[0].len())
            .filter(|&s| s > 1 && s < 4)
            .max()
            .unwrap();
        assert_eq!(bs.blocks[0].len(), max_nontrivial);

        let c3 = GeneratingSet::new(
            3,
            vec![Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()],
        )
        .unwrap();
        let bs = minimal_block_system(&c3).unwrap();
        assert!(bs.primitive);
        assert!(preserved_partitions(&c3)
            .iter()
            .all(|p| p[0].len() == 1 || p[0].len() == 3));

        assert!(minimal_block_system(&s4()).unwrap().primitive);

        let intransitive = GeneratingSet::new(3, vec![]).unwrap();
        assert_eq!(
            minimal_block_system(&intransitive),
            Err(PermError::NotTransitive)
        );
    }

    #[test]
    fn sift_basics() {
        let chain = StabilizerChain::empty(3);
        let id = Permutation::identity(3);
        let r = chain.sift(&id);
        assert!(r.member);
        assert_eq!(r.drop_level, -1);

        let swap = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let r = chain.sift(&swap);
        assert!(!r.member);
        assert_eq!(r.drop_level, 0);
        assert_eq!(r.residue, swap);

        let mut chain = StabilizerChain::empty(3);
        chain.insert(0, swap.clone());
        assert!(chain.sift(&swap).member);
        let other = Permutation::from_cycles(3, &[&[0, 2]]).unwrap();
        let r = chain.sift(&other);
        assert!(!r.member);
        assert_eq!(r.drop_level, 0);
    }

    #[test]
    fn schreier_sims_orders() {
        assert_eq!(schreier_sims(&s4()).order(), BigUint::from(24u32));
        assert_eq!(
            schreier_sims(&GeneratingSet::new(4, vec![]).unwrap()).order(),
            BigUint::from(1u32)
        );
        let a4_chain = schreier_sims(&a4());
        assert_eq!(a4_chain.order(), BigUint::from(12u32));
        assert!(!a4_chain.contains(&Permutation::from_cycles(4, &[&[0, 1]]).unwrap()));
        assert!(a4_chain.contains(&Permutation::from_cycles(4, &[&[0, 1, 2]]).unwrap()));
    }

    #[test]
    fn sift_matches_enumeration_on_small_groups() {
        for gs in [s4(), a4()] {
            let chain = schreier_sims(&gs);
            let elements = enumerate_group(&gs, 5040).unwrap();
            let members: std::collections::BTreeSet<_> = elements.iter().cloned().collect();
            assert_eq!(BigUint::from(elements.len() as u64), chain.order());
            // every element sifts; a sample of non-elements does not
            for e in &elements {
                assert!(chain.contains(e));
            }
            let mut rng = SplitMix64::new(7);
            for _ in 0..50 {
                let mut images: Vec<u32> = (0..gs.n() as u32).collect();
                for i in (1..images.len()).rev() {
                    images.swap(i, rng.next_below(i as u64 + 1) as usize);
                }
                let p = Permutation::from_images(images).unwrap();
                assert_eq!(chain.contains(&p), members.contains(&p));
            }
        }
    }

    #[test]
    fn refine_all_of_s4() {
        let elements = enumerate_group(&s4(), 100).unwrap();
        let gs = GeneratingSet::new(4, elements).unwrap();
        assert_eq!(gs.len(), 23); // identity filtered
        let (refined, chain) = refine_generating_set(&gs, Selection::Deterministic, 1);
        // each addition at least doubles the generated group
        assert!(refined.len() <= 5); // floor(log2 24) + 1
        assert_eq!(chain.order(), BigUint::from(24u32));
        // the refined set generates the same group
        let regenerated = enumerate_group(&refined, 100).unwrap();
        assert_eq!(regenerated.len(), 24);
        // determinism across runs and worker counts
        let (again, _) = refine_generating_set(&gs, Selection::Deterministic, 4);
        assert_eq!(again, refined);
    }

    #[test]
    fn refine_identities_only() {
        let id = Permutation::identity(5);
        let gs = GeneratingSet::new(5, vec![id; 100]).unwrap();
        let (refined, chain) = refine_generating_set(&gs, Selection::Deterministic, 2);
        assert!(refined.is_empty());
        assert_eq!(chain.order(), BigUint::from(1u32));
    }

    #[test]
    fn refine_redundant_cyclic_generators() {
        let g = Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap();
        let mut rng = SplitMix64::new(3);
        let gens: Vec<Permutation> = (0..50)
            .map(|_| {
                let mut p = Permutation::identity(5);
                for _ in 0..rng.next_below(5) {
                    p = p.then(&g);
                }
                p
            })
            .collect();
        let gs = GeneratingSet::new(5, gens).unwrap();
        let (refined, _) = refine_generating_set(&gs, Selection::Deterministic, 1);
        assert!(refined.len() <= 3);
        assert_eq!(enumerate_group(&refined, 100).unwrap().len(), 5);
        // seeded selection also lands on the same group
        let (seeded, _) = refine_generating_set(&gs, Selection::Seeded(11), 1);
        assert_eq!(enumerate_group(&seeded, 100).unwrap().len(), 5);
    }

    #[test]
    fn refined_elements_lie_in_original_group() {
        let gs = a4();
        let inflated: Vec<Permutation> = {
            let els = enumerate_group(&gs, 100).unwrap();
            els.iter()
                .flat_map(|a| els.iter().map(move |b| a.then(b)))
                .collect()
        };
        let big = GeneratingSet::new(4, inflated).unwrap();
        let (refined, chain) = refine_generating_set(&big, Selection::Deterministic, 2);
        let oracle = schreier_sims(&gs);
        for r in refined.gens() {
            assert!(oracle.contains(r));
        }
        for g in gs.gens() {
            assert!(chain.contains(g) || oracle.contains(g));
        }
        assert_eq!(chain.order(), BigUint::from(12u32));
    }

    #[test]
    fn orbits_commute_with_conjugation() {
        let gs = GeneratingSet::new(
            5,
            vec![
                Permutation::from_cycles(5, &[&[0, 1]]).unwrap(),
                Permutation::from_cycles(5, &[&[2, 3]]).unwrap(),
            ],
        )
        .unwrap();
        let pi = Permutation::from_images(vec![4, 2, 0, 1, 3]).unwrap();
        let conjugated = GeneratingSet::new(
            5,
            gs.gens()
                .iter()
                .map(|g| pi.inverse().then(g).then(&pi))
                .collect(),
        )
        .unwrap();
        let mapped: std::collections::BTreeSet<Vec<usize>> = orbits(&gs)
            .into_iter()
            .map(|orbit| {
                let mut o: Vec<usize> = orbit.into_iter().map(|p| pi.apply(p)).collect();
                o.sort_unstable();
                o
            })
            .collect();
        let actual: std::collections::BTreeSet<Vec<usize>> =
            orbits(&conjugated).into_iter().collect();
        assert_eq!(mapped, actual);
    }
}
