//! Exact isomorphism search between finite set systems.
//!
//! A simplicial complex is handed in as its facet list; a Morse complex as its
//! minimal non-faces. Two complexes on the same number of vertices are
//! isomorphic exactly when such a system of one is carried onto the other.
//!
//! The search is backtracking with individualization and colour refinement on
//! the point/block incidence graph. It always branches on the smallest point
//! that is not yet in a singleton cell and tries images in increasing order,
//! so the first isomorphism found is the lexicographically least one.

use std::collections::HashMap;
use std::ops::ControlFlow;

use crate::budget::Parallelism;
use crate::complex::{SimplicialComplex, VertexBijection, VertexId};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Points `0..n` and a multiset of blocks (sorted point lists).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    n: usize,
    blocks: Vec<Vec<u32>>,
}

impl SetSystem {
    pub fn new(n: usize, blocks: Vec<Vec<u32>>) -> Self {
        let mut blocks: Vec<Vec<u32>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        debug_assert!(blocks.iter().flatten().all(|&p| (p as usize) < n));
        SetSystem { n, blocks }
    }

    pub fn of_complex(k: &SimplicialComplex) -> Self {
        SetSystem::new(k.num_vertices(), k.facets().iter().map(|f| f.vertices().to_vec()).collect())
    }

    pub fn num_points(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// True iff `perm` carries the block multiset of `self` onto that of `other`.
    pub fn is_isomorphism(&self, other: &SetSystem, perm: &[u32]) -> bool {
        if perm.len() != self.n || other.n != self.n || self.blocks.len() != other.blocks.len() {
            return false;
        }
        let mut image: Vec<Vec<u32>> = self
            .blocks
            .iter()
            .map(|b| {
                let mut m: Vec<u32> = b.iter().map(|&p| perm[p as usize]).collect();
                m.sort_unstable();
                m
            })
            .collect();
        image.sort();
        image == other.blocks
    }

    fn incidence(&self) -> Vec<Vec<u32>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &p in b {
                inc[p as usize].push(i as u32);
            }
        }
        inc
    }

    fn size_profile(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.blocks.iter().map(Vec::len).collect();
        s.sort_unstable();
        s
    }
}

#[derive(Clone, Default)]
struct Interner {
    blocks: HashMap<Vec<u32>, u32>,
    points: HashMap<Vec<u32>, u32>,
    next: u32,
}

impl Interner {
    fn fresh(&mut self) -> u32 {
        self.next += 1;
        self.next
    }

    fn block(&mut self, key: Vec<u32>) -> u32 {
        if let Some(&c) = self.blocks.get(&key) {
            return c;
        }
        let c = self.fresh();
        self.blocks.insert(key, c);
        c
    }

    fn point(&mut self, key: Vec<u32>) -> u32 {
        if let Some(&c) = self.points.get(&key) {
            return c;
        }
        let c = self.fresh();
        self.points.insert(key, c);
        c
    }
}

struct Side<'a> {
    sys: &'a SetSystem,
    inc: Vec<Vec<u32>>,
}

struct Search<'a> {
    a: Side<'a>,
    b: Side<'a>,
}

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}

fn distinct(v: &[u32]) -> usize {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len()
}

impl<'a> Search<'a> {
    fn new(a: &'a SetSystem, b: &'a SetSystem) -> Self {
        Search { a: Side { sys: a, inc: a.incidence() }, b: Side { sys: b, inc: b.incidence() } }
    }

    fn block_colors(side: &Side<'_>, colors: &[u32], interner: &mut Interner) -> Vec<u32> {
        side.sys
            .blocks
            .iter()
            .map(|blk| interner.block(sorted(blk.iter().map(|&p| colors[p as usize]).collect())))
            .collect()
    }

    fn point_colors(side: &Side<'_>, colors: &[u32], bc: &[u32], interner: &mut Interner) -> Vec<u32> {
        (0..side.sys.n)
            .map(|p| {
                let mut key = sorted(side.inc[p].iter().map(|&b| bc[b as usize]).collect());
                key.push(colors[p]);
                interner.point(key)
            })
            .collect()
    }

    /// Refines both colourings to a common equitable partition. Returns false
    /// as soon as the two sides disagree.
    fn refine(&self, ca: &mut Vec<u32>, cb: &mut Vec<u32>, interner: &mut Interner) -> bool {
        let mut cells = distinct(ca);
        loop {
            let ba = Self::block_colors(&self.a, ca, interner);
            let bb = Self::block_colors(&self.b, cb, interner);
            if sorted(ba.clone()) != sorted(bb.clone()) {
                return false;
            }
            let na = Self::point_colors(&self.a, ca, &ba, interner);
            let nb = Self::point_colors(&self.b, cb, &bb, interner);
            if sorted(na.clone()) != sorted(nb.clone()) {
                return false;
            }
            let new_cells = distinct(&na);
            *ca = na;
            *cb = nb;
            if new_cells == cells {
                return true;
            }
            cells = new_cells;
        }
    }

    /// Smallest point of `a` whose colour class is not a singleton.
    fn branch_point(ca: &[u32]) -> Option<usize> {
        let mut count: HashMap<u32, usize> = HashMap::new();
        for &c in ca {
            *count.entry(c).or_insert(0) += 1;
        }
        (0..ca.len()).find(|&p| count[&ca[p]] > 1)
    }

    fn candidates(ca: &[u32], cb: &[u32], p: usize) -> Vec<usize> {
        (0..cb.len()).filter(|&q| cb[q] == ca[p]).collect()
    }

    fn leaf_map(ca: &[u32], cb: &[u32]) -> Vec<u32> {
        let by_color: HashMap<u32, u32> = cb.iter().enumerate().map(|(q, &c)| (c, q as u32)).collect();
        ca.iter().map(|c| by_color[c]).collect()
    }

    fn individualize(
        &self,
        ca: &[u32],
        cb: &[u32],
        p: usize,
        q: usize,
        interner: &mut Interner,
    ) -> Option<(Vec<u32>, Vec<u32>)> {
        let (mut ca, mut cb) = (ca.to_vec(), cb.to_vec());
        let c = interner.fresh();
        ca[p] = c;
        cb[q] = c;
        self.refine(&mut ca, &mut cb, interner).then_some((ca, cb))
    }

    fn descend<F>(&self, ca: Vec<u32>, cb: Vec<u32>, interner: &mut Interner, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(Vec<u32>) -> ControlFlow<()>,
    {
        let Some(p) = Self::branch_point(&ca) else {
            let perm = Self::leaf_map(&ca, &cb);
            if self.a.sys.is_isomorphism(self.b.sys, &perm) {
                return visit(perm);
            }
            return ControlFlow::Continue(());
        };
        for q in Self::candidates(&ca, &cb, p) {
            if let Some((na, nb)) = self.individualize(&ca, &cb, p, q, interner) {
                self.descend(na, nb, interner, visit)?;
            }
        }
        ControlFlow::Continue(())
    }

    /// Root colouring, or `None` when cheap invariants already differ.
    fn root(&self, interner: &mut Interner) -> Option<(Vec<u32>, Vec<u32>)> {
        let (a, b) = (self.a.sys, self.b.sys);
        if a.n != b.n || a.blocks.len() != b.blocks.len() || a.size_profile() != b.size_profile() {
            return None;
        }
        let mut ca = vec![0; a.n];
        let mut cb = vec![0; b.n];
        self.refine(&mut ca, &mut cb, interner).then_some((ca, cb))
    }
}

/// Lexicographically least isomorphism `a -> b` as a point map, if any.
pub fn find_set_isomorphism(a: &SetSystem, b: &SetSystem, parallelism: Parallelism) -> Option<Vec<u32>> {
    let search = Search::new(a, b);
    let mut interner = Interner::default();
    let (ca, cb) = search.root(&mut interner)?;
    let Some(p) = Search::branch_point(&ca) else {
        let perm = Search::leaf_map(&ca, &cb);
        return a.is_isomorphism(b, &perm).then_some(perm);
    };
    let candidates = Search::candidates(&ca, &cb, p);
    let branch = |q: usize| -> Option<Vec<u32>> {
        let mut local = interner.clone();
        let (na, nb) = search.individualize(&ca, &cb, p, q, &mut local)?;
        let mut found = None;
        let _ = search.descend(na, nb, &mut local, &mut |perm| {
            found = Some(perm);
            ControlFlow::Break(())
        });
        found
    };
    #[cfg(feature = "parallel")]
    if parallelism.is_parallel() {
        return candidates.into_par_iter().find_map_first(branch);
    }
    let _ = parallelism;
    candidates.into_iter().find_map(branch)
}

/// All isomorphisms `a -> b` in lexicographic order, stopping after `limit`.
pub fn all_set_isomorphisms(a: &SetSystem, b: &SetSystem, limit: usize) -> Vec<Vec<u32>> {
    let search = Search::new(a, b);
    let mut interner = Interner::default();
    let Some((ca, cb)) = search.root(&mut interner) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    let _ = search.descend(ca, cb, &mut interner, &mut |perm| {
        out.push(perm);
        if out.len() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    out
}

/// A vertex bijection inducing a simplicial isomorphism `k -> l`, if one exists.
pub fn find_isomorphism(k: &SimplicialComplex, l: &SimplicialComplex) -> Option<VertexBijection> {
    find_isomorphism_with(k, l, Parallelism::default())
}

pub fn find_isomorphism_with(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    parallelism: Parallelism,
) -> Option<VertexBijection> {
    if k.num_simplices() != l.num_simplices() {
        return None;
    }
    let perm = find_set_isomorphism(&SetSystem::of_complex(k), &SetSystem::of_complex(l), parallelism)?;
    Some(VertexBijection::new(perm.into_iter().map(|v| v as VertexId).collect()).expect("search returns bijections"))
}

/// Simplicial automorphisms of `k`, at most `limit` of them.
pub fn automorphisms(k: &SimplicialComplex, limit: usize) -> Vec<VertexBijection> {
    let s = SetSystem::of_complex(k);
    all_set_isomorphisms(&s, &s, limit)
        .into_iter()
        .map(|p| VertexBijection::new(p).expect("bijection"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    /// Brute force over all permutations.
    fn brute_isos(a: &SetSystem, b: &SetSystem) -> Vec<Vec<u32>> {
        (0..a.n as u32).permutations(a.n).filter(|p| a.is_isomorphism(b, p)).collect()
    }

    #[test]
    fn relabeled_square_is_found() {
        let c4 = SimplicialComplex::cycle(4);
        let other = c4.permuted(&[2, 0, 3, 1]);
        let f = find_isomorphism(&c4, &other).expect("isomorphic");
        assert!(f.is_isomorphism(&c4, &other));
    }

    #[test]
    fn triangle_vs_path() {
        assert!(find_isomorphism(&SimplicialComplex::cycle(3), &SimplicialComplex::path(3)).is_none());
    }

    #[test]
    fn least_witness_matches_brute_force() {
        let k = SimplicialComplex::from_facets_numbered(5, &[&[0, 1, 2], &[2, 3], &[3, 4], &[1, 4]]);
        let l = k.permuted(&[4, 2, 0, 1, 3]);
        let (a, b) = (SetSystem::of_complex(&k), SetSystem::of_complex(&l));
        let brute = brute_isos(&a, &b);
        for par in [Parallelism::Sequential, Parallelism::Parallel] {
            assert_eq!(find_set_isomorphism(&a, &b, par).as_ref(), brute.first());
        }
        assert_eq!(all_set_isomorphisms(&a, &b, usize::MAX), brute);
    }

    #[test]
    fn automorphism_count_of_cycle() {
        assert_eq!(automorphisms(&SimplicialComplex::cycle(5), 100).len(), 10);
        assert_eq!(automorphisms(&SimplicialComplex::boundary_of_simplex(3), 100).len(), 24);
    }

    #[test]
    fn duplicate_blocks_are_counted() {
        let a = SetSystem::new(3, vec![vec![0, 1], vec![0, 1], vec![1, 2]]);
        let b = SetSystem::new(3, vec![vec![0, 1], vec![1, 2], vec![1, 2]]);
        let c = SetSystem::new(3, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert!(find_set_isomorphism(&a, &b, Parallelism::Sequential).is_some());
        assert!(find_set_isomorphism(&a, &c, Parallelism::Sequential).is_none());
    }
}
