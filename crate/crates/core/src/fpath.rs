//! Closed V-paths (f-cycles) and the minimal ones that show up as empty
//! triangles of the Morse complex.

use crate::hasse::{HasseDiagram, PairId, RegularPair};
use crate::morse::MorseComplex;

/// A sequence of same-index regular pairs `(σ₀,τ₀), …, (σᵣ,τᵣ)` with
/// `σᵢ₊₁ ≺ τᵢ` and `σᵢ₊₁ ≠ σᵢ`. When `closed`, the last step leads back to `σ₀`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FPath {
    pub index: usize,
    pub steps: Vec<PairId>,
    pub closed: bool,
}

fn step(diagram: &HasseDiagram, from: RegularPair, to: RegularPair) -> bool {
    from.index == to.index && to.source != from.source && diagram.faces(from.target).contains(&to.source)
}

fn shares_cell(a: RegularPair, b: RegularPair) -> bool {
    a.source == b.source || a.source == b.target || a.target == b.source || a.target == b.target
}

/// Every closed non-stationary V-path whose pairs are drawn from `pairs` and
/// form a matching. Each cycle is reported once, starting at its smallest pair.
pub fn find_f_cycles(diagram: &HasseDiagram, pairs: &[PairId]) -> Vec<FPath> {
    let mut pool = pairs.to_vec();
    pool.sort_unstable();
    pool.dedup();
    let mut out = Vec::new();
    let mut path = Vec::new();
    for (i, &start) in pool.iter().enumerate() {
        path.clear();
        path.push(start);
        extend(diagram, &pool[i + 1..], start, &mut path, &mut out);
    }
    out.sort();
    out
}

fn extend(diagram: &HasseDiagram, rest: &[PairId], start: PairId, path: &mut Vec<PairId>, out: &mut Vec<FPath>) {
    let last = diagram.pair(*path.last().unwrap());
    let first = diagram.pair(start);
    if path.len() >= 2 && step(diagram, last, first) {
        out.push(FPath { index: first.index, steps: path.clone(), closed: true });
    }
    for &q in rest {
        let qp = diagram.pair(q);
        if path.contains(&q) || !step(diagram, last, qp) {
            continue;
        }
        if path.iter().any(|&r| shares_cell(diagram.pair(r), qp)) {
            continue;
        }
        path.push(q);
        extend(diagram, rest, start, path, out);
        path.pop();
    }
}

/// Three pairwise compatible pairs that are jointly incompatible; these are
/// exactly the empty triangles of the Morse complex.
pub fn minimal_f_cycles(m: &MorseComplex) -> Vec<[PairId; 3]> {
    m.non_faces().iter().filter(|nf| nf.len() == 3).map(|nf| [nf[0], nf[1], nf[2]]).collect()
}

/// Two minimal f-cycles are adjacent when they share exactly one pair.
pub fn adjacent(a: &[PairId; 3], b: &[PairId; 3]) -> bool {
    a.iter().filter(|p| b.contains(p)).count() == 1
}

/// Index pairs `(i, j)`, `i < j`, of adjacent cycles in `cycles`.
pub fn adjacent_minimal_cycles(cycles: &[[PairId; 3]]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..cycles.len() {
        for j in i + 1..cycles.len() {
            if adjacent(&cycles[i], &cycles[j]) {
                out.push((i, j));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{SimplicialComplex, VertexId};
    use std::collections::BTreeSet;

    #[test]
    fn triangle_has_two_oriented_cycles() {
        let c3 = SimplicialComplex::cycle(3);
        let d = HasseDiagram::of_complex(&c3);
        let all: Vec<PairId> = (0..d.num_pairs() as PairId).collect();
        let cycles = find_f_cycles(&d, &all);
        assert_eq!(cycles.len(), 2);
        assert!(cycles.iter().all(|c| c.closed && c.index == 0 && c.steps.len() == 3));
    }

    #[test]
    fn trees_have_no_cycles() {
        let k = SimplicialComplex::from_facets_numbered(5, &[&[0, 1], &[1, 2], &[1, 3], &[3, 4]]);
        let d = HasseDiagram::of_complex(&k);
        let all: Vec<PairId> = (0..d.num_pairs() as PairId).collect();
        assert!(find_f_cycles(&d, &all).is_empty());
        assert!(minimal_f_cycles(&MorseComplex::structure(d)).is_empty());
    }

    #[test]
    fn minimal_cycle_targets_span_complete_skeleton() {
        // For index k-1 the three targets span k+2 vertices, all joined.
        for k in [SimplicialComplex::simplex(3), SimplicialComplex::boundary_of_simplex(3)] {
            let m = MorseComplex::of_complex(&k);
            let d = m.diagram();
            let cycles = minimal_f_cycles(&m);
            assert!(!cycles.is_empty());
            for c in &cycles {
                let idx = d.pair(c[0]).index;
                let verts: BTreeSet<VertexId> =
                    c.iter().flat_map(|&p| d.cell(d.pair(p).target).vertices()).collect();
                assert_eq!(verts.len(), idx + 3);
                let vs: Vec<VertexId> = verts.into_iter().collect();
                for i in 0..vs.len() {
                    for j in i + 1..vs.len() {
                        let e = crate::complex::Simplex::new([vs[i], vs[j]]).unwrap();
                        assert!(k.contains(&e));
                    }
                }
            }
        }
    }

    #[test]
    fn adjacency_helper() {
        let cycles = [[0, 1, 2], [2, 3, 4], [0, 1, 5], [6, 7, 8]];
        assert_eq!(adjacent_minimal_cycles(&cycles), vec![(0, 1)]);
    }
}
