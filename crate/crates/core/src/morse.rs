//! Acyclic matchings on a Hasse diagram and the complex they form.
//!
//! A set of regular pairs is a simplex of the Morse complex iff it is a
//! matching (no cell used twice) and has no closed non-stationary V-path.
//! V-paths never mix indices, so acyclicity is a per-index property; the
//! incremental check below only ever walks pairs of the index being added.

use std::sync::OnceLock;

use crate::budget::{Budget, BudgetGuard};
use crate::complex::{Multigraph, SimplicialComplex};
use crate::error::{Error, Result};
use crate::hasse::{CellId, HasseDiagram, PairId, RegularPair};
use crate::iso::SetSystem;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

const NONE: u32 = u32::MAX;

/// True iff no cell occurs in two of the given pairs.
pub fn is_matching(diagram: &HasseDiagram, pairs: &[PairId]) -> bool {
    let mut used = std::collections::HashSet::new();
    pairs.iter().all(|&p| {
        let pair = diagram.pair(p);
        used.insert(pair.source) && used.insert(pair.target)
    })
}

/// True iff the matching has no closed V-path. Errors if `pairs` is not a matching.
pub fn is_acyclic(diagram: &HasseDiagram, pairs: &[PairId]) -> Result<bool> {
    if !is_matching(diagram, pairs) {
        return Err(Error::Precondition("pairs do not form a matching".into()));
    }
    let mut state = GradientState::new(diagram);
    for &p in pairs {
        if state.closes_cycle(diagram, diagram.pair(p)) {
            return Ok(false);
        }
        state.add(diagram, p);
    }
    Ok(true)
}

/// True iff `{p, q}` is an acyclic matching, i.e. an edge of the Morse complex.
pub fn compatible(diagram: &HasseDiagram, p: PairId, q: PairId) -> bool {
    if p == q {
        return true;
    }
    let (a, b) = (diagram.pair(p), diagram.pair(q));
    if a.source == b.source || a.source == b.target || a.target == b.source || a.target == b.target {
        return false;
    }
    // Only a 2-cycle is possible: each source lies under the other's target.
    !(a.index == b.index && diagram.faces(a.target).contains(&b.source) && diagram.faces(b.target).contains(&a.source))
}

/// Mutable matching with O(1) membership and an incremental cycle test.
pub(crate) struct GradientState {
    /// Pair occupying each cell, or `NONE`.
    partner: Vec<u32>,
    /// For a cell matched as a source, its target.
    up: Vec<u32>,
    seen: Vec<u32>,
    epoch: u32,
    stack: Vec<CellId>,
}

impl GradientState {
    pub fn new(diagram: &HasseDiagram) -> Self {
        let n = diagram.num_cells();
        GradientState { partner: vec![NONE; n], up: vec![NONE; n], seen: vec![0; n], epoch: 0, stack: Vec::new() }
    }

    pub fn is_free(&self, pair: RegularPair) -> bool {
        self.partner[pair.source as usize] == NONE && self.partner[pair.target as usize] == NONE
    }

    /// Whether adding `pair` would close a V-path: walk down from its target
    /// through matched sources and see if we come back to its source.
    pub fn closes_cycle(&mut self, diagram: &HasseDiagram, pair: RegularPair) -> bool {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.seen.fill(0);
            self.epoch = 1;
        }
        self.stack.clear();
        for &f in diagram.faces(pair.target) {
            if f != pair.source {
                self.stack.push(f);
            }
        }
        while let Some(c) = self.stack.pop() {
            if c == pair.source {
                return true;
            }
            if self.seen[c as usize] == self.epoch {
                continue;
            }
            self.seen[c as usize] = self.epoch;
            let t = self.up[c as usize];
            if t != NONE {
                for &f in diagram.faces(t) {
                    if f != c && self.seen[f as usize] != self.epoch {
                        self.stack.push(f);
                    }
                }
            }
        }
        false
    }

    pub fn can_add(&mut self, diagram: &HasseDiagram, p: PairId) -> bool {
        let pair = diagram.pair(p);
        self.is_free(pair) && !self.closes_cycle(diagram, pair)
    }

    pub fn add(&mut self, diagram: &HasseDiagram, p: PairId) {
        let pair = diagram.pair(p);
        self.partner[pair.source as usize] = p;
        self.partner[pair.target as usize] = p;
        self.up[pair.source as usize] = pair.target;
    }

    pub fn remove(&mut self, diagram: &HasseDiagram, p: PairId) {
        let pair = diagram.pair(p);
        self.partner[pair.source as usize] = NONE;
        self.partner[pair.target as usize] = NONE;
        self.up[pair.source as usize] = NONE;
    }
}

/// Backtracking enumeration of maximal acyclic matchings.
///
/// Covers are decided in `(index, source, target)` order, include before
/// exclude, so facets come out in lexicographic order. An excluded pair that
/// is still addable once nothing decided later can block it (no later cover
/// touches its cells and its index is finished) makes the branch non-maximal.
struct FacetEnumerator<'a> {
    diagram: &'a HasseDiagram,
    /// `expire_at[i]`: pairs whose fate is final when position `i` is reached.
    expire_at: Vec<Vec<PairId>>,
}

struct Worker<'a, 'g> {
    shared: &'a FacetEnumerator<'a>,
    guard: &'g BudgetGuard,
    state: GradientState,
    chosen: Vec<PairId>,
    in_set: Vec<bool>,
    out: Vec<Vec<PairId>>,
    nodes: u64,
}

impl<'a> FacetEnumerator<'a> {
    fn new(diagram: &'a HasseDiagram) -> Self {
        let covers = diagram.covers();
        let np = covers.len();
        let mut last_touch = vec![0usize; diagram.num_cells()];
        let mut last_of_index = std::collections::HashMap::new();
        for (i, p) in covers.iter().enumerate() {
            last_touch[p.source as usize] = i;
            last_touch[p.target as usize] = i;
            last_of_index.insert(p.index, i);
        }
        let mut expire_at = vec![Vec::new(); np + 1];
        for (i, p) in covers.iter().enumerate() {
            let deadline = i
                .max(last_touch[p.source as usize])
                .max(last_touch[p.target as usize])
                .max(last_of_index[&p.index]);
            expire_at[deadline + 1].push(i as PairId);
        }
        FacetEnumerator { diagram, expire_at }
    }

    fn worker<'g>(&'a self, guard: &'g BudgetGuard) -> Worker<'a, 'g> {
        Worker {
            shared: self,
            guard,
            state: GradientState::new(self.diagram),
            chosen: Vec::new(),
            in_set: vec![false; self.diagram.num_pairs()],
            out: Vec::new(),
            nodes: 0,
        }
    }
}

impl Worker<'_, '_> {
    fn push(&mut self, p: PairId) {
        self.state.add(self.shared.diagram, p);
        self.chosen.push(p);
        self.in_set[p as usize] = true;
    }

    fn pop(&mut self) {
        let p = self.chosen.pop().expect("nonempty");
        self.state.remove(self.shared.diagram, p);
        self.in_set[p as usize] = false;
    }

    /// Returns false when the budget guard asks to stop.
    fn decide(&mut self, i: usize, stop_at: usize, prefixes: &mut Vec<Vec<PairId>>) -> bool {
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) && !self.guard.tick() {
            return false;
        }
        let diagram = self.shared.diagram;
        for &q in &self.shared.expire_at[i] {
            if !self.in_set[q as usize] && self.state.can_add(diagram, q) {
                return true;
            }
        }
        let np = diagram.num_pairs();
        if i == np {
            self.out.push(self.chosen.clone());
            return self.guard.emit();
        }
        if i == stop_at {
            prefixes.push(self.chosen.clone());
            return true;
        }
        let p = i as PairId;
        if self.state.can_add(diagram, p) {
            self.push(p);
            let go_on = self.decide(i + 1, stop_at, prefixes);
            self.pop();
            if !go_on {
                return false;
            }
        }
        self.decide(i + 1, stop_at, prefixes)
    }
}

/// Facets of the Morse complex: every maximal acyclic matching, each as a
/// sorted list of pair ids, in lexicographic order.
pub fn enumerate_facets(diagram: &HasseDiagram, budget: &Budget) -> Result<Vec<Vec<PairId>>> {
    let np = diagram.num_pairs();
    if np == 0 {
        return Ok(Vec::new());
    }
    let enumerator = FacetEnumerator::new(diagram);
    let guard = budget.start();

    if !budget.parallelism.is_parallel() || np < 12 {
        let mut w = enumerator.worker(&guard);
        w.decide(0, usize::MAX, &mut Vec::new());
        guard.finish()?;
        return Ok(w.out);
    }

    // Split the search tree into independent prefixes, then finish each
    // prefix on its own. Prefixes come out in DFS order, so concatenating the
    // per-prefix results in order reproduces the sequential output exactly.
    let target = 8 * available_threads();
    let mut depth = 8.min(np);
    let (mut prefixes, mut head) = loop {
        let mut w = enumerator.worker(&guard);
        let mut prefixes = Vec::new();
        w.decide(0, depth, &mut prefixes);
        if prefixes.len() >= target || depth == np || guard.is_aborted() {
            break (prefixes, w.out);
        }
        depth = (depth + 4).min(np);
    };
    guard.finish()?;

    let run = |prefix: &Vec<PairId>| -> Vec<Vec<PairId>> {
        if guard.is_aborted() {
            return Vec::new();
        }
        let mut w = enumerator.worker(&guard);
        for &p in prefix {
            w.push(p);
        }
        w.decide(depth, usize::MAX, &mut Vec::new());
        w.out
    };
    let parts: Vec<Vec<Vec<PairId>>> = par_map(&prefixes, run);
    guard.finish()?;
    // Facets found before the split depth (only possible when np == depth) come first.
    head.extend(parts.into_iter().flatten());
    prefixes.clear();
    Ok(head)
}

#[cfg(feature = "parallel")]
fn available_threads() -> usize {
    rayon::current_num_threads()
}

#[cfg(not(feature = "parallel"))]
fn available_threads() -> usize {
    1
}

#[cfg(feature = "parallel")]
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}

/// Arc of the V-path graph: from `p` one can step to `q`.
fn v_arc(diagram: &HasseDiagram, p: RegularPair, q: RegularPair) -> bool {
    p.index == q.index && q.source != p.source && diagram.faces(p.target).contains(&q.source)
}

fn disjoint(p: RegularPair, q: RegularPair) -> bool {
    p.source != q.source && p.source != q.target && p.target != q.source && p.target != q.target
}

/// Minimal sets of regular pairs that are not simplices of the Morse complex.
///
/// These are the incompatible pairs (two pairs sharing a cell, or a 2-cycle
/// between parallel edges of a multigraph) together with the matchings whose
/// V-graph is a single chordless cycle. Each is a sorted id list; the list is
/// sorted.
pub fn minimal_non_faces(diagram: &HasseDiagram) -> Vec<Vec<PairId>> {
    let covers = diagram.covers();
    let mut out = Vec::new();
    // Pairs sharing a cell.
    let mut by_cell: Vec<Vec<PairId>> = vec![Vec::new(); diagram.num_cells()];
    for (i, p) in covers.iter().enumerate() {
        by_cell[p.source as usize].push(i as PairId);
        by_cell[p.target as usize].push(i as PairId);
    }
    for list in &by_cell {
        for (a, &p) in list.iter().enumerate() {
            for &q in &list[a + 1..] {
                out.push(vec![p.min(q), p.max(q)]);
            }
        }
    }
    // Chordless V-cycles, rooted at their smallest pair.
    let by_source = &by_cell;
    let mut path: Vec<PairId> = Vec::new();
    for start in 0..covers.len() as PairId {
        path.clear();
        path.push(start);
        chordless_cycles(diagram, by_source, start, &mut path, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

fn chordless_cycles(
    diagram: &HasseDiagram,
    by_cell: &[Vec<PairId>],
    start: PairId,
    path: &mut Vec<PairId>,
    out: &mut Vec<Vec<PairId>>,
) {
    let last = diagram.pair(*path.last().unwrap());
    let first = diagram.pair(start);
    for &face in diagram.faces(last.target) {
        if face == last.source {
            continue;
        }
        for &q in &by_cell[face as usize] {
            let qp = diagram.pair(q);
            if q <= start || qp.source != face || path.contains(&q) {
                continue;
            }
            if !path.iter().all(|&r| disjoint(diagram.pair(r), qp)) {
                continue;
            }
            // Arcs into q from anything but the last step are chords.
            let m = path.len();
            if path[..m - 1].iter().any(|&r| v_arc(diagram, diagram.pair(r), qp)) {
                continue;
            }
            if path[1..].iter().any(|&r| v_arc(diagram, qp, diagram.pair(r))) {
                continue;
            }
            path.push(q);
            if v_arc(diagram, qp, first) {
                let mut cycle = path.clone();
                cycle.sort_unstable();
                out.push(cycle);
            } else {
                chordless_cycles(diagram, by_cell, start, path, out);
            }
            path.pop();
        }
    }
}

/// The complex of discrete Morse functions: vertices are the regular pairs of
/// the diagram, simplices the acyclic matchings.
///
/// Minimal non-faces are computed eagerly (they are small and determine the
/// complex); facets are enumerated on first request under a [`Budget`].
pub struct MorseComplex {
    diagram: HasseDiagram,
    non_faces: Vec<Vec<PairId>>,
    facets: OnceLock<Vec<Vec<PairId>>>,
}

impl std::fmt::Debug for MorseComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MorseComplex")
            .field("pairs", &self.diagram.num_pairs())
            .field("non_faces", &self.non_faces.len())
            .field("facets", &self.facets.get().map(Vec::len))
            .finish()
    }
}

/// Builds the Morse complex of `k` and enumerates its facets.
pub fn morse_complex(k: &SimplicialComplex, budget: &Budget) -> Result<MorseComplex> {
    let m = MorseComplex::structure(HasseDiagram::of_complex(k));
    m.ensure_facets(budget)?;
    Ok(m)
}

/// Multigraph counterpart of [`morse_complex`].
pub fn morse_complex_of_multigraph(g: &Multigraph, budget: &Budget) -> Result<MorseComplex> {
    let m = MorseComplex::structure(HasseDiagram::of_multigraph(g));
    m.ensure_facets(budget)?;
    Ok(m)
}

impl MorseComplex {
    /// Vertices and minimal non-faces only; facets are enumerated lazily.
    pub fn structure(diagram: HasseDiagram) -> Self {
        let non_faces = minimal_non_faces(&diagram);
        MorseComplex { diagram, non_faces, facets: OnceLock::new() }
    }

    pub fn of_complex(k: &SimplicialComplex) -> Self {
        Self::structure(HasseDiagram::of_complex(k))
    }

    pub fn of_multigraph(g: &Multigraph) -> Self {
        Self::structure(HasseDiagram::of_multigraph(g))
    }

    pub fn diagram(&self) -> &HasseDiagram {
        &self.diagram
    }

    pub fn num_vertices(&self) -> usize {
        self.diagram.num_pairs()
    }

    pub fn pair(&self, p: PairId) -> RegularPair {
        self.diagram.pair(p)
    }

    pub fn pairs(&self) -> &[RegularPair] {
        self.diagram.covers()
    }

    pub fn non_faces(&self) -> &[Vec<PairId>] {
        &self.non_faces
    }

    /// The minimal non-faces as a set system, for isomorphism testing.
    pub fn non_face_system(&self) -> SetSystem {
        SetSystem::new(self.num_vertices(), self.non_faces.clone())
    }

    pub fn facets(&self) -> Option<&[Vec<PairId>]> {
        self.facets.get().map(Vec::as_slice)
    }

    pub fn ensure_facets(&self, budget: &Budget) -> Result<&[Vec<PairId>]> {
        if let Some(f) = self.facets.get() {
            return Ok(f);
        }
        let facets = enumerate_facets(&self.diagram, budget)?;
        Ok(self.facets.get_or_init(|| facets))
    }

    pub fn is_simplex(&self, pairs: &[PairId]) -> bool {
        is_matching(&self.diagram, pairs) && is_acyclic(&self.diagram, pairs).unwrap_or(false)
    }

    pub fn compatible(&self, p: PairId, q: PairId) -> bool {
        compatible(&self.diagram, p, q)
    }

    /// Degree of `p` in the 1-skeleton.
    pub fn degree(&self, p: PairId) -> usize {
        (0..self.num_vertices() as PairId).filter(|&q| q != p && self.compatible(p, q)).count()
    }

    pub fn dim(&self, budget: &Budget) -> Result<Option<usize>> {
        let facets = self.ensure_facets(budget)?;
        Ok(facets.iter().map(|f| f.len() - 1).max())
    }

    /// Vertex label used for pair `p` in files: `p0`, `p1`, ...
    pub fn pair_label(p: PairId) -> String {
        format!("p{p}")
    }

    /// The Morse complex as an ordinary simplicial complex on pair labels.
    pub fn underlying(&self, budget: &Budget) -> Result<SimplicialComplex> {
        let facets = self.ensure_facets(budget)?;
        let labels = (0..self.num_vertices() as PairId).map(Self::pair_label).collect();
        let gens = facets.iter().map(|f| crate::complex::Simplex::from_sorted(f)).collect();
        Ok(SimplicialComplex::from_generators(labels, gens))
    }

    /// Rows `<pair-id> <index> <source> -> <target>`.
    pub fn pair_table(&self) -> Vec<String> {
        (0..self.num_vertices() as PairId)
            .map(|p| {
                let pair = self.pair(p);
                format!(
                    "{} {} {} -> {}",
                    Self::pair_label(p),
                    pair.index,
                    self.diagram.format_cell(pair.source),
                    self.diagram.format_cell(pair.target)
                )
            })
            .collect()
    }

    /// Facets of the link of vertex `p`, sorted. Requires facets.
    pub fn vertex_link_facets(&self, p: PairId, budget: &Budget) -> Result<Vec<Vec<PairId>>> {
        let facets = self.ensure_facets(budget)?;
        let mut out: Vec<Vec<PairId>> = facets
            .iter()
            .filter(|f| f.binary_search(&p).is_ok())
            .map(|f| f.iter().copied().filter(|&q| q != p).collect::<Vec<_>>())
            .filter(|r| !r.is_empty())
            .collect();
        out.sort();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Parallelism;
    use crate::complex::Simplex;

    fn pid(d: &HasseDiagram, src: &[u32], tgt: &[u32]) -> PairId {
        let s = d.simplex_id(&Simplex::new(src.iter().copied()).unwrap()).unwrap();
        let t = d.simplex_id(&Simplex::new(tgt.iter().copied()).unwrap()).unwrap();
        d.pair_id(s, t).unwrap()
    }

    #[test]
    fn matching_examples() {
        let d = HasseDiagram::of_complex(&SimplicialComplex::cycle(3));
        let a_ab = pid(&d, &[0], &[0, 1]);
        let b_ab = pid(&d, &[1], &[0, 1]);
        let c_bc = pid(&d, &[2], &[1, 2]);
        assert!(!is_matching(&d, &[a_ab, b_ab]));
        assert!(is_matching(&d, &[a_ab, c_bc]));
        assert!(is_matching(&d, &[]));
    }

    #[test]
    fn oriented_triangle_is_cyclic() {
        let d = HasseDiagram::of_complex(&SimplicialComplex::cycle(3));
        let cyc = [pid(&d, &[0], &[0, 1]), pid(&d, &[1], &[1, 2]), pid(&d, &[2], &[0, 2])];
        assert!(!is_acyclic(&d, &cyc).unwrap());
        for i in 0..3 {
            let sub: Vec<PairId> = cyc.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &p)| p).collect();
            assert!(is_acyclic(&d, &sub).unwrap());
            for &p in &sub {
                assert!(is_acyclic(&d, &[p]).unwrap());
            }
        }
        assert!(is_acyclic(&d, &[cyc[0], pid(&d, &[1], &[0, 1])]).is_err());
    }

    #[test]
    fn compatibility_examples() {
        let p3 = SimplicialComplex::path(3);
        let d = HasseDiagram::of_complex(&p3);
        // shared edge
        assert!(!compatible(&d, pid(&d, &[0], &[0, 1]), pid(&d, &[1], &[0, 1])));
        // shared source
        assert!(!compatible(&d, pid(&d, &[1], &[0, 1]), pid(&d, &[1], &[1, 2])));
        // disjoint in a tree
        assert!(compatible(&d, pid(&d, &[0], &[0, 1]), pid(&d, &[2], &[1, 2])));
        assert!(compatible(&d, pid(&d, &[1], &[0, 1]), pid(&d, &[2], &[1, 2])));
    }

    #[test]
    fn parallel_edges_form_a_two_cycle() {
        let g = Multigraph::new(&[], &[("e", "u", "v"), ("f", "u", "v")]).unwrap();
        let d = HasseDiagram::of_multigraph(&g);
        let m = MorseComplex::structure(d);
        // every pair of pairs is a minimal non-face: 4 isolated vertices
        assert_eq!(m.non_faces().len(), 6);
        assert_eq!(m.ensure_facets(&Budget::default()).unwrap().len(), 4);
    }

    #[test]
    fn edge_complex_is_two_points() {
        let m = morse_complex(&SimplicialComplex::simplex(1), &Budget::default()).unwrap();
        assert_eq!(m.facets().unwrap(), &[vec![0], vec![1]]);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let k = SimplicialComplex::from_facets_numbered(5, &[&[0, 1, 2], &[1, 2, 3], &[3, 4], &[0, 4]]);
        let d = HasseDiagram::of_complex(&k);
        let seq = enumerate_facets(&d, &Budget::default().with_parallelism(Parallelism::Sequential)).unwrap();
        let par = enumerate_facets(&d, &Budget::default().with_parallelism(Parallelism::Parallel)).unwrap();
        assert_eq!(seq, par);
        assert!(seq.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn budget_overrun_is_an_error() {
        let d = HasseDiagram::of_complex(&SimplicialComplex::simplex(3));
        let err = enumerate_facets(&d, &Budget::default().with_max_facets(10)).unwrap_err();
        assert!(matches!(err, Error::Budget(_)));
    }

    #[test]
    fn pair_table_rows() {
        let m = MorseComplex::of_complex(&SimplicialComplex::simplex(1));
        assert_eq!(m.pair_table(), ["p0 0 0 -> 0,1", "p1 0 1 -> 0,1"]);
    }
}
