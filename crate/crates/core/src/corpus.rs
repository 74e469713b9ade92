//! Small test families: exhaustive lists up to isomorphism, and seeded
//! random samples.
//!
//! Isomorphism classes here are decided by brute-force canonical forms over
//! all vertex permutations, independently of the search in `iso`.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{Multigraph, Simplex, SimplicialComplex, UnionFind, VertexBijection, VertexId};

pub const DEFAULT_SEED: u64 = 20_241_017;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    (0..n).permutations(n).collect()
}

fn apply_mask(mask: u32, perm: &[usize]) -> u32 {
    (0..perm.len()).filter(|&i| mask & (1 << i) != 0).fold(0, |acc, i| acc | (1 << perm[i]))
}

/// Least sorted image of a multiset of vertex bitmasks over all permutations.
fn canonical(masks: &[u32], perms: &[Vec<usize>]) -> Vec<u32> {
    perms
        .iter()
        .map(|p| {
            let mut image: Vec<u32> = masks.iter().map(|&m| apply_mask(m, p)).collect();
            image.sort_unstable();
            image
        })
        .min()
        .unwrap_or_default()
}

fn masks_connected(n: usize, masks: &[u32]) -> bool {
    let mut uf = UnionFind::new(n);
    for &m in masks {
        let vs: Vec<usize> = (0..n).filter(|&i| m & (1 << i) != 0).collect();
        for w in vs.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    uf.components() == 1
}

fn complex_from_masks(n: usize, masks: &[u32]) -> SimplicialComplex {
    let labels = (0..n).map(|i| i.to_string()).collect();
    let gens = masks
        .iter()
        .map(|&m| Simplex::new((0..n as VertexId).filter(|&i| m & (1 << i) != 0)).expect("nonempty"))
        .collect();
    SimplicialComplex::from_generators(labels, gens)
}

/// Antichains of nonempty subsets of `[n]` covering every vertex, i.e. the
/// facet sets of complexes on exactly `n` vertices.
fn facet_sets(n: usize) -> Vec<Vec<u32>> {
    let mut subsets: Vec<u32> = (1..1u32 << n).collect();
    subsets.sort_by_key(|s| (std::cmp::Reverse(s.count_ones()), *s));
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    antichains(&subsets, 0, &mut chosen, (1 << n) - 1, &mut out);
    out
}

fn antichains(subsets: &[u32], i: usize, chosen: &mut Vec<u32>, full: u32, out: &mut Vec<Vec<u32>>) {
    if i == subsets.len() {
        if chosen.iter().fold(0, |a, m| a | m) == full {
            out.push(chosen.clone());
        }
        return;
    }
    let s = subsets[i];
    // Subsets come in non-increasing size, so s can only be a face of a chosen one.
    if chosen.iter().all(|&c| c & s != s) {
        chosen.push(s);
        antichains(subsets, i + 1, chosen, full, out);
        chosen.pop();
    }
    antichains(subsets, i + 1, chosen, full, out);
}

/// Connected simplicial complexes on `1..=max_vertices` vertices, one per
/// isomorphism class, ordered by vertex count, then f-vector, then facets.
pub fn connected_complexes(max_vertices: usize) -> Vec<SimplicialComplex> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let perms = permutations(n);
        let mut classes: Vec<Vec<u32>> = facet_sets(n)
            .into_iter()
            .filter(|f| masks_connected(n, f))
            .map(|f| canonical(&f, &perms))
            .collect();
        classes.sort();
        classes.dedup();
        let mut complexes: Vec<SimplicialComplex> = classes.iter().map(|c| complex_from_masks(n, c)).collect();
        complexes.sort_by(|a, b| a.f_vector().cmp(&b.f_vector()).then_with(|| a.facets().cmp(b.facets())));
        out.extend(complexes);
    }
    out
}

fn edge_pairs(n: usize) -> Vec<(VertexId, VertexId)> {
    (0..n as VertexId).tuple_combinations().collect()
}

fn graph_from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> SimplicialComplex {
    let labels = (0..n).map(|i| i.to_string()).collect();
    let gens = (0..n as VertexId)
        .map(Simplex::vertex)
        .chain(edges.iter().map(|&(u, v)| Simplex::new([u, v]).expect("edge")))
        .collect();
    SimplicialComplex::from_generators(labels, gens)
}

/// Connected simple graphs on `min_vertices..=max_vertices` vertices, one
/// per isomorphism class, as 1-dimensional complexes.
pub fn connected_graphs(min_vertices: usize, max_vertices: usize) -> Vec<SimplicialComplex> {
    let mut out = Vec::new();
    for n in min_vertices.max(1)..=max_vertices {
        let perms = permutations(n);
        let all = edge_pairs(n);
        let mut classes = Vec::new();
        for bits in 0u32..1 << all.len() {
            let masks: Vec<u32> =
                all.iter().enumerate().filter(|(i, _)| bits & (1 << i) != 0).map(|(_, &(u, v))| (1 << u) | (1 << v)).collect();
            if n == 1 || masks_connected(n, &masks) {
                classes.push(canonical(&masks, &perms));
            }
        }
        classes.sort();
        classes.dedup();
        classes.sort_by_key(Vec::len);
        out.extend(classes.iter().map(|c| {
            let edges: Vec<(VertexId, VertexId)> = c
                .iter()
                .map(|&m| (m.trailing_zeros(), 31 - m.leading_zeros()))
                .collect();
            graph_from_edges(n, &edges)
        }));
    }
    out
}

/// `count` connected graphs on `n` vertices with edges drawn independently
/// with probability one half. Not deduplicated.
pub fn random_connected_graphs(n: usize, count: usize, seed: u64) -> Vec<SimplicialComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = edge_pairs(n);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let edges: Vec<(VertexId, VertexId)> = all.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let g = graph_from_edges(n, &edges);
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

/// Connected multigraphs on `1..=max_vertices` vertices with between one and
/// `max_multiplicity` edges per parallel class, one per isomorphism class.
pub fn connected_multigraphs(max_vertices: usize, max_multiplicity: usize) -> Vec<Multigraph> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        let perms = permutations(n);
        let mut classes: Vec<Vec<u32>> = Vec::new();
        for g in connected_graphs(n, n) {
            let edges = g.edges();
            for mult in (0..edges.len()).map(|_| 1..=max_multiplicity).multi_cartesian_product() {
                let masks: Vec<u32> = edges
                    .iter()
                    .zip(&mult)
                    .flat_map(|(&(u, v), &m)| std::iter::repeat_n((1 << u) | (1 << v), m))
                    .collect();
                classes.push(canonical(&masks, &perms));
            }
            if edges.is_empty() {
                classes.push(Vec::new());
            }
        }
        classes.sort();
        classes.dedup();
        classes.sort_by_key(Vec::len);
        out.extend(classes.iter().map(|c| {
            let grouped: Vec<((VertexId, VertexId), usize)> = c
                .iter()
                .map(|&m| (m.trailing_zeros(), 31 - m.leading_zeros()))
                .dedup_with_count()
                .map(|(k, e)| (e, k))
                .collect();
            let pairs: Vec<_> = grouped.iter().map(|g| g.0).collect();
            let mult: Vec<_> = grouped.iter().map(|g| g.1).collect();
            Multigraph::with_multiplicities(n, &pairs, &mult)
        }));
    }
    out
}

pub fn random_permutation(n: usize, rng: &mut impl Rng) -> VertexBijection {
    let mut forward: Vec<VertexId> = (0..n as VertexId).collect();
    forward.shuffle(rng);
    VertexBijection::new(forward).expect("permutation")
}

/// A random connected complex on 3 to `max_vertices` vertices, generated by
/// up to five random simplices of dimension 1 to 3.
pub fn random_connected_complex(max_vertices: usize, rng: &mut impl Rng) -> SimplicialComplex {
    loop {
        let n = rng.gen_range(3..=max_vertices);
        let count = rng.gen_range(1..=5);
        let masks: Vec<u32> = (0..count)
            .map(|_| {
                let size = rng.gen_range(2..=n.min(4));
                let vs = rand::seq::index::sample(rng, n, size);
                vs.iter().fold(0, |a, v| a | (1 << v))
            })
            .collect();
        if masks.iter().fold(0, |a, m| a | m) == (1 << n) - 1 && masks_connected(n, &masks) {
            return complex_from_masks(n, &masks);
        }
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
