//! Desk-scale checks of the structural results, shared by the acceptance
//! tests and the `verify corpus` command.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use crate::budget::{Budget, Parallelism};
use crate::complex::{Multigraph, Simplex, SimplicialComplex, VertexBijection};
use crate::corpus;
use crate::error::{Error, Result};
use crate::forest::{directed_forest_complex, double};
use crate::hasse::{Cell, HasseDiagram, Origin, PairId};
use crate::invariants::{greedy_collapse, invariants};
use crate::iso::{find_isomorphism_with, SetSystem};
use crate::morse::{enumerate_facets, is_acyclic, is_matching, MorseComplex};
use crate::reconstruct::{
    check_parallel_lemma, find_morse_isomorphism, find_multigraph_isomorphism, reconstruct_complex_iso,
    reconstruct_multigraph_iso, MorseIso,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {verdict} {}: {}", self.id, self.name, self.detail)
    }
}

#[derive(Debug, Clone)]
pub struct CorpusConfig {
    pub seed: u64,
    pub budget: Budget,
    /// Largest vertex count for the exhaustive complex corpus.
    pub max_vertices: usize,
    pub random_graphs: usize,
    pub functoriality_trials: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            seed: corpus::DEFAULT_SEED,
            budget: Budget::default(),
            max_vertices: 5,
            random_graphs: 200,
            functoriality_trials: 1000,
        }
    }
}

impl CorpusConfig {
    fn parallelism(&self) -> Parallelism {
        self.budget.parallelism
    }
}

fn report(id: u8, name: &'static str, outcome: Result<String>, started: Instant) -> CriterionReport {
    let secs = started.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => CriterionReport { id, name, passed: true, detail: format!("{detail} ({secs:.1}s)") },
        Err(e) => CriterionReport { id, name, passed: false, detail: format!("{e} ({secs:.1}s)") },
    }
}

fn fail(detail: String) -> Error {
    Error::Contradiction { theorem: "acceptance", detail }
}

/// Applies `f` to every item, in parallel when asked and available, and
/// returns the first error in item order.
fn try_for_each<T: Sync>(items: &[T], parallelism: Parallelism, f: impl Fn(usize, &T) -> Result<()> + Sync) -> Result<()> {
    #[cfg(feature = "parallel")]
    if parallelism.is_parallel() {
        use rayon::prelude::*;
        let errors: Vec<Error> = items.par_iter().enumerate().filter_map(|(i, t)| f(i, t).err()).collect();
        return errors.into_iter().next().map_or(Ok(()), Err);
    }
    let _ = parallelism;
    items.iter().enumerate().try_for_each(|(i, t)| f(i, t))
}

fn describe(k: &SimplicialComplex) -> String {
    let facets: Vec<String> = k.facets().iter().map(|f| k.format_simplex(f)).collect();
    format!("[{}]", facets.join(" "))
}

/// `|V(𝔐(G))| = 2|E|` and `dim 𝔐(G) = |V| - 2` for one connected graph.
pub fn check_graph_lemma(g: &SimplicialComplex, budget: &Budget) -> Result<()> {
    let m = MorseComplex::of_complex(g);
    let edges = g.edges().len();
    if m.num_vertices() != 2 * edges {
        return Err(fail(format!("{}: {} pairs for {} edges", describe(g), m.num_vertices(), edges)));
    }
    let dim = m.dim(budget)?;
    if dim != Some(g.num_vertices() - 2) {
        return Err(fail(format!("{}: dimension {:?}", describe(g), dim)));
    }
    Ok(())
}

pub fn graph_lemma(cfg: &CorpusConfig) -> CriterionReport {
    let started = Instant::now();
    let outcome = (|| {
        let mut graphs = corpus::connected_graphs(3, 6);
        let exhaustive = graphs.len();
        graphs.extend(corpus::random_connected_graphs(7, cfg.random_graphs, cfg.seed));
        try_for_each(&graphs, cfg.parallelism(), |_, g| check_graph_lemma(g, &cfg.budget))?;
        Ok(format!("{exhaustive} graphs on 3-6 vertices, {} random on 7", cfg.random_graphs))
    })();
    report(1, "graph lemma", outcome, started)
}

/// Regular pair corresponding to an arc of the doubled graph.
fn pair_of_arc(d: &HasseDiagram, g: &Multigraph, tail: u32, head: u32, edge: usize) -> PairId {
    let target = match d.origin() {
        Origin::Complex => d.simplex_id(&Simplex::new([tail, head]).expect("edge")),
        Origin::Multigraph => d.cell_id(&Cell::Edge { edge, ends: g.edge(edge).ends }),
    };
    d.pair_id(d.vertex_cell(tail), target.expect("edge cell")).expect("cover")
}

/// Whether the facets of `𝔐` equal the maximal directed forests of the
/// doubled graph, with arc `v -> w` identified with the pair `(v, vw)`.
pub fn forest_identity_holds(d: &HasseDiagram, m: &MorseComplex, g: &Multigraph, budget: &Budget) -> Result<bool> {
    let digraph = double(g);
    let forests: BTreeSet<Vec<PairId>> = directed_forest_complex(&digraph)
        .into_iter()
        .filter(|f| !f.is_empty())
        .map(|f| {
            let mut pairs: Vec<PairId> = f
                .iter()
                .map(|&a| {
                    let arc = &digraph.arcs[a];
                    pair_of_arc(d, g, arc.tail, arc.head, arc.edge.expect("doubled"))
                })
                .collect();
            pairs.sort_unstable();
            pairs
        })
        .collect();
    let facets: BTreeSet<Vec<PairId>> = m.ensure_facets(budget)?.iter().cloned().collect();
    Ok(forests == facets)
}

pub fn forest_identity(cfg: &CorpusConfig) -> CriterionReport {
    let started = Instant::now();
    let outcome = (|| {
        let graphs = corpus::connected_graphs(2, 6);
        try_for_each(&graphs, cfg.parallelism(), |_, g| {
            let m = MorseComplex::of_complex(g);
            let mg = g.to_multigraph()?;
            if forest_identity_holds(m.diagram(), &m, &mg, &cfg.budget)? {
                Ok(())
            } else {
                Err(fail(format!("{} differs from its directed-forest complex", describe(g))))
            }
        })?;
        Ok(format!("{} graphs on 2-6 vertices", graphs.len()))
    })();
    report(2, "directed forest identity", outcome, started)
}

/// A vertex is a leaf iff each of its pairs has degree `2|E| - 2` in the
/// 1-skeleton of `𝔐(G)`.
pub fn check_leaf_characterization(g: &SimplicialComplex) -> Result<()> {
    let m = MorseComplex::of_complex(g);
    let d = m.diagram();
    let full = 2 * g.edges().len() - 2;
    for p in 0..m.num_vertices() as PairId {
        let pair = d.pair(p);
        let Some(v) = d.vertex_of(pair.source) else { continue };
        let leaf = g.neighbors(v).len() == 1;
        if leaf != (m.degree(p) == full) {
            return Err(fail(format!("{}: pair {} has degree {}", describe(g), d.format_pair(p), m.degree(p))));
        }
    }
    Ok(())
}

pub fn leaf_characterization(cfg: &CorpusConfig) -> CriterionReport {
    let started = Instant::now();
    let outcome = (|| {
        let mut graphs = corpus::connected_graphs(2, 6);
        graphs.extend(corpus::random_connected_graphs(7, cfg.random_graphs, cfg.seed));
        try_for_each(&graphs, cfg.parallelism(), |_, g| check_leaf_characterization(g))?;
        Ok(format!("{} graphs", graphs.len()))
    })();
    report(3, "leaf characterization", outcome, started)
}

pub fn wedge_of_circles(cfg: &CorpusConfig) -> CriterionReport {
    let started = Instant::now();
    let outcome = (|| {
        let triangle = invariants(&MorseComplex::of_complex(&SimplicialComplex::simplex(2)).underlying(&cfg.budget)?);
        let mut betti = triangle.betti_mod2.clone();
        while betti.last() == Some(&0) {
            betti.pop();
        }
        if triangle.euler != -3 || betti != vec![1, 4] {
            return Err(fail(format!("Morse complex of the 2-simplex: {}", triangle.to_lines().join(" "))));
        }
        let edge = invariants(&MorseComplex::of_complex(&SimplicialComplex::simplex(1)).underlying(&cfg.budget)?);
        if edge.components != 2 {
            return Err(fail(format!("Morse complex of an edge has {} components", edge.components)));
        }
        Ok(format!("euler={} betti_mod2={:?}; edge: components={}", triangle.euler, triangle.betti_mod2, edge.components))
    })();
    report(4, "wedge of four circles", outcome, started)
}

/// The path u-v-w and the triangle with a pendant edge.
pub fn counterexample_pair() -> (SimplicialComplex, SimplicialComplex) {
    let g = SimplicialComplex::closure([["u", "v"], ["u", "w"]]).expect("valid");
    let h = SimplicialComplex::closure([["a", "b"], ["b", "c"], ["a", "c"], ["a", "d"]]).expect("valid");
    (g, h)
}

pub fn counterexample(cfg: &CorpusConfig) -> CriterionReport {
    let started = Instant::now();
    let outcome = (|| {
        let (g, h) = counterexample_pair();
        for k in [&g, &h] {
            let mk = MorseComplex::of_complex(k).underlying(&cfg.budget)?;
            if greedy_collapse(&mk).is_none() {
                return Err(fail(format!("no greedy collapse of the Morse complex of {}", describe(k))));
            }
        }
        if find_isomorphism_with(&g, &h, cfg.parallelism()).is_some() {
            return Err(fail("the graphs are isomorphic".into()));
        }
        let (eg, eh) = (invariants(&g).euler, invariants(&h).euler);
        if (eg, eh) != (1, 0) {
            return Err(fail(format!("euler characteristics {eg} and {eh}")));
        }
        Ok("both Morse complexes collapse; graphs differ; euler 1 vs 0".into())
    })();
    report(5, "contractible Morse complexes of non-equivalent graphs", outcome, started)
}

/// Decides `𝔐(K) ≅ 𝔐(L)` and `K ≅ L`, requires them to agree, and runs the
/// reconstruction on any isomorphism found.
pub fn check_complex_pair(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    mk: &MorseComplex,
    ml: &MorseComplex,
    parallelism: Parallelism,
) -> Result<bool> {
    let morse = find_morse_isomorphism(mk, ml, parallelism);
    let plain = find_isomorphism_with(k, l, parallelism).is_some();
    if morse.is_some() != plain {
        return Err(fail(format!("{} vs {}: Morse iso {}, iso {plain}", describe(k), describe(l), morse.is_some())));
    }
    if let Some(f) = morse {
        reconstruct_complex_iso(&f, k, l, mk, ml)?;
    }
    Ok(plain)
}

pub fn complex_reconstruction(cfg: &CorpusConfig) -> CriterionReport {
    let started = Instant::now();
    let outcome = (|| {
        let complexes = corpus::connected_complexes(cfg.max_vertices);
        let morse: Vec<MorseComplex> = complexes.iter().map(MorseComplex::of_complex).collect();
        let mut rng = corpus::seeded_rng(cfg.seed);
        // Diagonal pairs use a random relabeling so the search has work to do.
        let relabeled: Vec<SimplicialComplex> = complexes
            .iter()
            .map(|k| k.permuted(corpus::random_permutation(k.num_vertices(), &mut rng).forward()))
            .collect();
        let relabeled_morse: Vec<MorseComplex> = relabeled.iter().map(MorseComplex::of_complex).collect();
        let pairs: Vec<(usize, usize)> =
            (0..complexes.len()).flat_map(|i| (i..complexes.len()).map(move |j| (i, j))).collect();
        try_for_each(&pairs, cfg.parallelism(), |_, &(i, j)| {
            let (l, ml) = if i == j { (&relabeled[j], &relabeled_morse[j]) } else { (&complexes[j], &morse[j]) };
            let iso = check_complex_pair(&complexes[i], l, &morse[i], ml, Parallelism::Sequential)?;
            if iso != (i == j) {
                return Err(fail(format!("corpus classes {i} and {j} are not distinct")));
            }
            Ok(())
        })?;
        Ok(format!("{} complexes on at most {} vertices, {} pairs", complexes.len(), cfg.max_vertices, pairs.len()))
    })();
    report(6, "complex reconstruction", outcome, started)
}

/// The same multigraph with vertex `v` renamed to id `perm(v)`.
pub fn permute_multigraph(g: &Multigraph, perm: &VertexBijection) -> Multigraph {
    let edges = g
        .edges()
        .iter()
        .map(|e| (e.label.clone(), perm.apply(e.ends.0), perm.apply(e.ends.1)))
        .collect();
    Multigraph::from_ids(g.vertex_labels().to_vec(), edges).expect("permuted multigraph")
}

pub fn check_multigraph_pair(
    g: &Multigraph,
    h: &Multigraph,
    mg: &MorseComplex,
    mh: &MorseComplex,
    budget: &Budget,
) -> Result<bool> {
    let morse = find_morse_isomorphism(mg, mh, Parallelism::Sequential);
    let plain = find_multigraph_isomorphism(g, h).is_some();
    if morse.is_some() != plain {
        return Err(fail(format!("multigraphs with {} and {} edges: Morse iso {}, iso {plain}", g.num_edges(), h.num_edges(), morse.is_some())));
    }
    if let Some(f) = morse {
        reconstruct_multigraph_iso(&f, g, h, mg, mh, budget)?;
    }
    Ok(plain)
}

pub fn multigraph_reconstruction(cfg: &CorpusConfig) -> CriterionReport {
    let started = Instant::now();
    let outcome = (|| {
        let graphs = corpus::connected_multigraphs(4, 3);
        let morse: Vec<MorseComplex> = graphs.iter().map(MorseComplex::of_multigraph).collect();
        let checked = std::sync::atomic::AtomicUsize::new(0);
        try_for_each(&graphs, cfg.parallelism(), |i, g| {
            if g.num_vertices() >= 3 {
                let n = check_parallel_lemma(g, &morse[i], &cfg.budget)?;
                checked.fetch_add(n, std::sync::atomic::Ordering::Relaxed);
            }
            Ok(())
        })?;
        let mut rng = corpus::seeded_rng(cfg.seed);
        let relabeled: Vec<Multigraph> = graphs
            .iter()
            .map(|g| permute_multigraph(g, &corpus::random_permutation(g.num_vertices(), &mut rng)))
            .collect();
        let relabeled_morse: Vec<MorseComplex> = relabeled.iter().map(MorseComplex::of_multigraph).collect();
        let pairs: Vec<(usize, usize)> = (0..graphs.len()).flat_map(|i| (i..graphs.len()).map(move |j| (i, j))).collect();
        try_for_each(&pairs, cfg.parallelism(), |_, &(i, j)| {
            let (h, mh) = if i == j { (&relabeled[j], &relabeled_morse[j]) } else { (&graphs[j], &morse[j]) };
            let iso = check_multigraph_pair(&graphs[i], h, &morse[i], mh, &cfg.budget)?;
            if iso != (i == j) {
                return Err(fail(format!("corpus classes {i} and {j} are not distinct")));
            }
            Ok(())
        })?;
        Ok(format!(
            "{} multigraphs, {} pairs; parallel pairs agree on {} pairs of pairs",
            graphs.len(),
            pairs.len(),
            checked.into_inner()
        ))
    })();
    report(7, "multigraph reconstruction", outcome, started)
}

/// The 1-skeleton is a cycle, or the complex is a simplex boundary; the
/// roundtrip is not required to return `h` there.
pub fn functoriality_excluded(k: &SimplicialComplex) -> bool {
    k.is_boundary_simplex().is_some() || crate::reconstruct::as_cycle(&k.skeleton(1)).is_some()
}

pub fn check_functoriality(k: &SimplicialComplex, h: &VertexBijection) -> Result<()> {
    let image = k.permuted(h.forward());
    let (mk, ml) = (MorseComplex::of_complex(k), MorseComplex::of_complex(&image));
    let f = MorseIso::induced(h, mk.diagram(), ml.diagram())?;
    let r = reconstruct_complex_iso(&f, k, &image, &mk, &ml)?;
    if &r.map != h {
        return Err(fail(format!("{}: recovered {:?}, expected {:?}", describe(k), r.map.forward(), h.forward())));
    }
    Ok(())
}

pub fn functoriality(cfg: &CorpusConfig) -> CriterionReport {
    let started = Instant::now();
    let outcome = (|| {
        let mut rng = corpus::seeded_rng(cfg.seed);
        let mut trials = Vec::with_capacity(cfg.functoriality_trials);
        let mut excluded = 0;
        while trials.len() < cfg.functoriality_trials {
            let k = corpus::random_connected_complex(6, &mut rng);
            let h = corpus::random_permutation(k.num_vertices(), &mut rng);
            if functoriality_excluded(&k) {
                excluded += 1;
            } else {
                trials.push((k, h));
            }
        }
        try_for_each(&trials, cfg.parallelism(), |_, (k, h)| check_functoriality(k, h))?;
        Ok(format!("{} roundtrips, {excluded} excluded samples skipped", trials.len()))
    })();
    report(8, "functoriality roundtrip", outcome, started)
}

/// Simplices of `𝔐` by filtering the power set of covers. Returns the
/// facets and the minimal non-faces, both sorted.
pub fn brute_force_morse(d: &HasseDiagram) -> (Vec<Vec<PairId>>, Vec<Vec<PairId>>) {
    let n = d.num_pairs();
    assert!(n <= 20, "power set too large");
    let subset = |mask: u32| -> Vec<PairId> { (0..n as PairId).filter(|&i| mask & (1 << i) != 0).collect() };
    let good: Vec<bool> = (0..1u32 << n)
        .map(|mask| {
            let s = subset(mask);
            is_matching(d, &s) && is_acyclic(d, &s).expect("matching")
        })
        .collect();
    let mut facets = Vec::new();
    let mut non_faces = Vec::new();
    for mask in 1..1u32 << n {
        let bits = (0..n).filter(|&i| mask & (1 << i) != 0);
        if good[mask as usize] {
            if (0..n).all(|i| mask & (1 << i) != 0 || !good[(mask | (1 << i)) as usize]) {
                facets.push(subset(mask));
            }
        } else if bits.clone().all(|i| good[(mask & !(1 << i)) as usize]) {
            non_faces.push(subset(mask));
        }
    }
    facets.sort();
    non_faces.sort();
    (facets, non_faces)
}

pub fn check_oracle(d: &HasseDiagram, budget: &Budget) -> Result<()> {
    let (facets, non_faces) = brute_force_morse(d);
    let m = MorseComplex::structure(d.clone());
    let mut fast_facets = enumerate_facets(d, budget)?;
    fast_facets.sort();
    let mut fast_non_faces = m.non_faces().to_vec();
    fast_non_faces.sort();
    if fast_facets != facets || fast_non_faces != non_faces {
        return Err(fail(format!("mismatch on a diagram with {} covers", d.num_pairs())));
    }
    Ok(())
}

/// Every diagram with at most `max_covers` covers among the small corpora,
/// plus a few disconnected complexes.
pub fn oracle_corpus(max_covers: usize) -> Vec<HasseDiagram> {
    let mut out: Vec<HasseDiagram> = corpus::connected_complexes(5).iter().map(HasseDiagram::of_complex).collect();
    out.extend(corpus::connected_multigraphs(4, 3).iter().map(HasseDiagram::of_multigraph));
    for extra in [
        SimplicialComplex::closure([["a"], ["b"]]),
        SimplicialComplex::closure(vec![vec!["a", "b"], vec!["c"]]),
        SimplicialComplex::closure([["a", "b"], ["c", "d"]]),
        SimplicialComplex::closure(vec![vec!["a", "b", "c"], vec!["d"]]),
    ] {
        out.push(HasseDiagram::of_complex(&extra.expect("valid")));
    }
    out.retain(|d| d.num_pairs() <= max_covers);
    out
}

pub fn oracle_equivalence(cfg: &CorpusConfig) -> CriterionReport {
    let started = Instant::now();
    let outcome = (|| {
        let diagrams = oracle_corpus(12);
        try_for_each(&diagrams, cfg.parallelism(), |_, d| check_oracle(d, &cfg.budget))?;
        Ok(format!("{} diagrams with at most 12 covers", diagrams.len()))
    })();
    report(9, "brute-force oracle", outcome, started)
}

/// The three index-0 pairs of the 3-cycle oriented one way round: pairwise
/// compatible, not jointly, spanning an empty triangle.
pub fn minimal_f_cycle_law(cfg: &CorpusConfig) -> CriterionReport {
    let started = Instant::now();
    let outcome = (|| {
        let c3 = SimplicialComplex::cycle(3);
        let m = MorseComplex::of_complex(&c3);
        let d = m.diagram();
        let pair = |v: u32, w: u32| {
            let e = d.simplex_id(&Simplex::new([v, w]).expect("edge")).expect("edge present");
            d.pair_id(d.vertex_cell(v), e).expect("cover")
        };
        let mut cycle = [pair(0, 1), pair(1, 2), pair(2, 0)];
        cycle.sort_unstable();
        for (i, &p) in cycle.iter().enumerate() {
            for &q in &cycle[i + 1..] {
                if !m.compatible(p, q) {
                    return Err(fail(format!("{} and {} are incompatible", d.format_pair(p), d.format_pair(q))));
                }
            }
        }
        if m.is_simplex(&cycle) {
            return Err(fail("the oriented triple is an acyclic matching".into()));
        }
        let whole = m.underlying(&cfg.budget)?;
        let gens: Vec<Simplex> = whole
            .simplices()
            .filter(|s| s.vertices().iter().all(|v| cycle.contains(v)))
            .cloned()
            .collect();
        let spanned = SimplicialComplex::from_generators(whole.labels().to_vec(), gens);
        if SetSystem::of_complex(&spanned).blocks() != SetSystem::of_complex(&SimplicialComplex::boundary_of_simplex(2)).blocks() {
            return Err(fail(format!("spanned subcomplex is {}", describe(&spanned))));
        }
        Ok(format!("pairs {:?} span an empty triangle", cycle))
    })();
    report(10, "minimal f-cycle", outcome, started)
}

pub fn run_all(cfg: &CorpusConfig) -> Vec<CriterionReport> {
    vec![
        graph_lemma(cfg),
        forest_identity(cfg),
        leaf_characterization(cfg),
        wedge_of_circles(cfg),
        counterexample(cfg),
        complex_reconstruction(cfg),
        multigraph_reconstruction(cfg),
        functoriality(cfg),
        oracle_equivalence(cfg),
        minimal_f_cycle_law(cfg),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_on_triangle() {
        let d = HasseDiagram::of_complex(&SimplicialComplex::simplex(2));
        let (facets, non_faces) = brute_force_morse(&d);
        assert_eq!(facets.len(), 9);
        assert_eq!(non_faces.len(), 17);
        check_oracle(&d, &Budget::default()).unwrap();
    }

    #[test]
    fn permuting_a_multigraph() {
        let g = Multigraph::new(&[], &[("a", "0", "1"), ("b", "0", "1"), ("c", "1", "2")]).unwrap();
        let p = VertexBijection::new(vec![2, 0, 1]).unwrap();
        let h = permute_multigraph(&g, &p);
        assert_eq!(h.multiplicity(0, 2), 2);
        assert!(find_multigraph_isomorphism(&g, &h).is_some());
    }
}
