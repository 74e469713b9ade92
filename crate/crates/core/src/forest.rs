//! Complexes of directed forests of directed multigraphs.
//!
//! Arc convention: the regular pair `(v, e)` of a graph, `e = vw`, is the arc
//! `v -> w` of the doubled graph. Under it an acyclic matching is an arc set
//! in which every vertex has at most one outgoing arc and whose underlying
//! graph is a forest, i.e. a forest with all arcs pointing towards the roots.
//! This module computes that complex directly on the digraph, without any
//! Hasse-diagram machinery, so it can serve as an independent check.

use crate::complex::{Multigraph, SimplicialComplex, UnionFind, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
    /// Edge of the undirected graph this arc was doubled from, if any.
    pub edge: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Digraph {
    pub num_vertices: usize,
    pub arcs: Vec<Arc>,
}

impl Digraph {
    pub fn new(num_vertices: usize, arcs: Vec<Arc>) -> Self {
        assert!(arcs.iter().all(|a| a.tail != a.head), "loops are not allowed");
        Digraph { num_vertices, arcs }
    }
}

/// `d(G)`: one arc in each direction for every edge, ordered by edge then tail.
pub fn double(g: &Multigraph) -> Digraph {
    let mut arcs = Vec::with_capacity(2 * g.num_edges());
    for (i, e) in g.edges().iter().enumerate() {
        let (u, v) = e.ends;
        arcs.push(Arc { tail: u, head: v, edge: Some(i) });
        arcs.push(Arc { tail: v, head: u, edge: Some(i) });
    }
    Digraph::new(g.num_vertices(), arcs)
}

/// `d(G)` for a simple graph given as a 1-dimensional complex.
pub fn double_complex(g: &SimplicialComplex) -> Digraph {
    double(&g.to_multigraph().expect("graph"))
}

/// Facets (maximal directed forests) of `Δ(D)`, each a sorted list of arc
/// indices, in lexicographic order.
pub fn directed_forest_complex(d: &Digraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut has_out = vec![false; d.num_vertices];
    grow(d, 0, &mut chosen, &mut has_out, &mut out);
    out
}

fn connected(d: &Digraph, chosen: &[usize], a: VertexId, b: VertexId) -> bool {
    let mut uf = UnionFind::new(d.num_vertices);
    for &i in chosen {
        uf.union(d.arcs[i].tail as usize, d.arcs[i].head as usize);
    }
    uf.find(a as usize) == uf.find(b as usize)
}

fn addable(d: &Digraph, chosen: &[usize], has_out: &[bool], i: usize) -> bool {
    let a = &d.arcs[i];
    !has_out[a.tail as usize] && !connected(d, chosen, a.tail, a.head)
}

fn grow(d: &Digraph, i: usize, chosen: &mut Vec<usize>, has_out: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
    if i == d.arcs.len() {
        let maximal = (0..d.arcs.len()).all(|j| chosen.contains(&j) || !addable(d, chosen, has_out, j));
        if maximal {
            out.push(chosen.clone());
        }
        return;
    }
    if addable(d, chosen, has_out, i) {
        chosen.push(i);
        has_out[d.arcs[i].tail as usize] = true;
        grow(d, i + 1, chosen, has_out, out);
        has_out[d.arcs[i].tail as usize] = false;
        chosen.pop();
    }
    grow(d, i + 1, chosen, has_out, out);
}

/// Whether an arc set is a directed forest in the above sense.
pub fn is_directed_forest(d: &Digraph, arcs: &[usize]) -> bool {
    let mut has_out = vec![false; d.num_vertices];
    let mut uf = UnionFind::new(d.num_vertices);
    arcs.iter().all(|&i| {
        let a = &d.arcs[i];
        let fresh = !std::mem::replace(&mut has_out[a.tail as usize], true);
        fresh && uf.union(a.tail as usize, a.head as usize)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arc() {
        let d = Digraph::new(2, vec![Arc { tail: 0, head: 1, edge: None }]);
        assert_eq!(directed_forest_complex(&d), vec![vec![0]]);
    }

    #[test]
    fn doubled_edge_is_two_points() {
        let d = double_complex(&SimplicialComplex::simplex(1));
        assert_eq!(directed_forest_complex(&d), vec![vec![0], vec![1]]);
    }

    #[test]
    fn forest_predicate() {
        let d = double_complex(&SimplicialComplex::cycle(3));
        // arcs: 0->1, 1->0, 0->2, 2->0, 1->2, 2->1
        assert!(is_directed_forest(&d, &[0, 4]));
        assert!(!is_directed_forest(&d, &[0, 1]));
        assert!(!is_directed_forest(&d, &[0, 2]));
        assert!(!is_directed_forest(&d, &[0, 4, 3]));
    }
}
