//! Cheap topological invariants: f-vector, Euler characteristic, connected
//! components, Betti numbers over Z/2 and a greedy collapsibility witness.

use std::collections::{BTreeSet, HashMap};

use crate::complex::{immediate_faces, Multigraph, Simplex, SimplicialComplex, UnionFind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    pub f_vector: Vec<usize>,
    pub euler: i64,
    pub components: usize,
    pub betti_mod2: Vec<usize>,
    /// A greedy sequence of elementary collapses down to a point was found.
    /// `false` proves nothing.
    pub collapsible: bool,
}

impl InvariantReport {
    /// `key=value` lines, vectors comma-separated.
    pub fn to_lines(&self) -> Vec<String> {
        let join = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        vec![
            format!("f_vector={}", join(&self.f_vector)),
            format!("euler={}", self.euler),
            format!("components={}", self.components),
            format!("betti_mod2={}", join(&self.betti_mod2)),
            format!("collapsible={}", self.collapsible),
        ]
    }
}

pub fn invariants(k: &SimplicialComplex) -> InvariantReport {
    let f_vector = k.f_vector();
    InvariantReport {
        euler: euler_characteristic(&f_vector),
        components: components(k),
        betti_mod2: betti_mod2(k),
        collapsible: greedy_collapse(k).is_some(),
        f_vector,
    }
}

/// The same report for a multigraph viewed as a 1-dimensional cell complex.
/// It collapses to a point exactly when it is a tree.
pub fn multigraph_invariants(g: &Multigraph) -> InvariantReport {
    let (v, e) = (g.num_vertices(), g.num_edges());
    let mut uf = UnionFind::new(v);
    for edge in g.edges() {
        uf.union(edge.ends.0 as usize, edge.ends.1 as usize);
    }
    let c = uf.components();
    let f_vector = if e == 0 { vec![v] } else { vec![v, e] };
    let mut betti_mod2 = vec![c];
    if e > 0 {
        betti_mod2.push(e + c - v);
    }
    InvariantReport {
        euler: euler_characteristic(&f_vector),
        components: c,
        collapsible: c == 1 && e + 1 == v,
        f_vector,
        betti_mod2,
    }
}

pub fn euler_characteristic(f_vector: &[usize]) -> i64 {
    f_vector.iter().enumerate().map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) }).sum()
}

pub fn components(k: &SimplicialComplex) -> usize {
    let mut uf = UnionFind::new(k.num_vertices());
    for (a, b) in k.edges() {
        uf.union(a as usize, b as usize);
    }
    uf.components()
}

/// Ranks of the homology groups with Z/2 coefficients, one per dimension.
pub fn betti_mod2(k: &SimplicialComplex) -> Vec<usize> {
    let Some(dim) = k.dim() else {
        return Vec::new();
    };
    let mut layers: Vec<Vec<Simplex>> = vec![Vec::new(); dim + 1];
    for s in k.simplices_sorted() {
        layers[s.dim()].push(s);
    }
    let index: Vec<HashMap<&Simplex, usize>> =
        layers.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s, i)).collect()).collect();
    // rank[d] = rank of the boundary map C_d -> C_{d-1}
    let mut rank = vec![0usize; dim + 2];
    for d in 1..=dim {
        let columns = layers[d].iter().map(|s| {
            let mut rows: Vec<usize> = immediate_faces(s).iter().map(|f| index[d - 1][f]).collect();
            rows.sort_unstable();
            rows
        });
        rank[d] = rank_mod2(layers[d - 1].len(), columns);
    }
    (0..=dim).map(|d| layers[d].len() - rank[d] - rank[d + 1]).collect()
}

/// Rank over Z/2 of the matrix whose columns list their nonzero rows.
fn rank_mod2(num_rows: usize, columns: impl Iterator<Item = Vec<usize>>) -> usize {
    let words = num_rows.div_ceil(64);
    let mut pivots: HashMap<usize, Vec<u64>> = HashMap::new();
    let mut rank = 0;
    for rows in columns {
        let mut col = vec![0u64; words];
        for r in rows {
            col[r / 64] ^= 1 << (r % 64);
        }
        while let Some(low) = highest_bit(&col) {
            match pivots.get(&low) {
                Some(p) => {
                    for (c, q) in col.iter_mut().zip(p) {
                        *c ^= q;
                    }
                }
                None => {
                    pivots.insert(low, col);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn highest_bit(v: &[u64]) -> Option<usize> {
    v.iter().enumerate().rev().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
}

/// Greedy elementary collapses. Repeatedly removes the first free pair
/// `(σ, τ)` in (dimension descending, lexicographic) order, where σ has τ as
/// its only proper coface. Returns the sequence when a single vertex remains.
pub fn greedy_collapse(k: &SimplicialComplex) -> Option<Vec<(Simplex, Simplex)>> {
    if k.is_empty() {
        return None;
    }
    let mut alive: HashMap<Simplex, Vec<Simplex>> = HashMap::new();
    for s in k.simplices() {
        alive.entry(s.clone()).or_default();
    }
    for s in k.simplices() {
        for f in immediate_faces(s) {
            alive.get_mut(&f).expect("face-closed").push(s.clone());
        }
    }
    // Free faces keyed for ordering: larger dimension first, then lexicographic.
    let key = |s: &Simplex| (usize::MAX - s.dim(), s.clone());
    let mut free: BTreeSet<(usize, Simplex)> =
        alive.iter().filter(|(_, cof)| cof.len() == 1).map(|(s, _)| key(s)).collect();
    let mut sequence = Vec::new();
    while let Some((_, sigma)) = free.pop_first() {
        let tau = alive[&sigma][0].clone();
        alive.remove(&sigma);
        alive.remove(&tau);
        free.remove(&key(&tau));
        for f in immediate_faces(&tau).into_iter().filter(|f| *f != sigma) {
            let cof = alive.get_mut(&f).expect("alive");
            cof.retain(|c| *c != tau);
            if cof.len() == 1 {
                free.insert(key(&f));
            } else {
                free.remove(&key(&f));
            }
        }
        for f in immediate_faces(&sigma) {
            let cof = alive.get_mut(&f).expect("alive");
            cof.retain(|c| *c != sigma);
            if cof.len() == 1 {
                free.insert(key(&f));
            } else {
                free.remove(&key(&f));
            }
        }
        sequence.push((sigma, tau));
    }
    (alive.len() == 1).then_some(sequence)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplices_are_points() {
        for n in 0..5 {
            let r = invariants(&SimplicialComplex::simplex(n));
            assert_eq!(r.euler, 1);
            assert_eq!(r.betti_mod2[0], 1);
            assert!(r.betti_mod2[1..].iter().all(|&b| b == 0));
            assert!(r.collapsible);
        }
    }

    #[test]
    fn spheres() {
        let r = invariants(&SimplicialComplex::boundary_of_simplex(3));
        assert_eq!(r.betti_mod2, vec![1, 0, 1]);
        assert_eq!(r.euler, 2);
        assert!(!r.collapsible);
        assert!(greedy_collapse(&SimplicialComplex::cycle(3)).is_none());
    }

    #[test]
    fn trees_collapse() {
        let t = SimplicialComplex::from_facets_numbered(6, &[&[0, 1], &[1, 2], &[1, 3], &[3, 4], &[3, 5]]);
        let seq = greedy_collapse(&t).unwrap();
        assert_eq!(seq.len(), 5);
    }

    #[test]
    fn two_points() {
        let k = SimplicialComplex::closure([["a"], ["b"]]).unwrap();
        let r = invariants(&k);
        assert_eq!(r.components, 2);
        assert_eq!(r.betti_mod2, vec![2]);
        assert!(!r.collapsible);
    }

    #[test]
    fn multigraphs_as_cell_complexes() {
        let theta = Multigraph::new(&[], &[("a", "u", "v"), ("b", "u", "v"), ("c", "u", "v")]).unwrap();
        let r = multigraph_invariants(&theta);
        assert_eq!((r.euler, r.betti_mod2.clone(), r.collapsible), (-1, vec![1, 2], false));
        let path = SimplicialComplex::path(4).to_multigraph().unwrap();
        let r = multigraph_invariants(&path);
        assert_eq!(r, invariants(&SimplicialComplex::path(4)));
    }

    #[test]
    fn projective_plane_has_mod2_homology() {
        // 6-vertex RP²: H₁ and H₂ are Z/2 over Z/2.
        let rp2 = SimplicialComplex::from_facets_numbered(
            6,
            &[
                &[0, 1, 2], &[0, 2, 3], &[0, 3, 4], &[0, 4, 5], &[0, 1, 5],
                &[1, 2, 4], &[2, 3, 5], &[1, 3, 4], &[2, 4, 5], &[1, 3, 5],
            ],
        );
        assert_eq!(betti_mod2(&rp2), vec![1, 1, 1]);
    }
}
