//! Recovering a complex isomorphism from an isomorphism of Morse complexes.
//!
//! Every step a proof would take for granted is checked here: a map that is
//! not well defined, or an inductive step that fails, is reported as
//! [`Error::Contradiction`] with the offending witness rather than assumed away.

use std::collections::BTreeMap;

use crate::budget::{Budget, Parallelism};
use crate::complex::{Multigraph, Simplex, SimplicialComplex, VertexBijection, VertexId};
use crate::error::{Error, Result};
use crate::hasse::{Cell, HasseDiagram, PairId};
use crate::iso::find_set_isomorphism;
use crate::morse::MorseComplex;

const GRAPH_THEOREM: &str = "the graph reconstruction theorem";
const COMPLEX_THEOREM: &str = "the complex reconstruction theorem";
const MULTIGRAPH_THEOREM: &str = "the multigraph reconstruction theorem";
const PARALLEL_LEMMA: &str = "the parallel-pair lemma";
const QUOTIENT_PROPOSITION: &str = "the quotient isomorphism proposition";

/// A simplicial isomorphism between two Morse complexes, as a bijection of
/// regular-pair ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseIso {
    map: VertexBijection,
}

impl MorseIso {
    pub fn new(map: VertexBijection) -> Self {
        MorseIso { map }
    }

    pub fn from_forward(forward: Vec<PairId>) -> Result<Self> {
        Ok(MorseIso { map: VertexBijection::new(forward)? })
    }

    pub fn apply(&self, p: PairId) -> PairId {
        self.map.apply(p)
    }

    pub fn apply_inverse(&self, q: PairId) -> PairId {
        self.map.apply_inverse(q)
    }

    pub fn bijection(&self) -> &VertexBijection {
        &self.map
    }

    pub fn inverse(&self) -> MorseIso {
        MorseIso { map: self.map.inverse() }
    }

    /// Checks that the map carries simplices to simplices in both directions.
    pub fn verify(&self, a: &MorseComplex, b: &MorseComplex) -> Result<()> {
        if a.num_vertices() != b.num_vertices() || self.map.len() != a.num_vertices() {
            return Err(Error::InvalidIso("vertex counts differ".into()));
        }
        if !a.non_face_system().is_isomorphism(&b.non_face_system(), self.map.forward()) {
            return Err(Error::InvalidIso("minimal non-faces are not carried onto minimal non-faces".into()));
        }
        Ok(())
    }

    /// `𝔐(h)`: the pair `(σ, τ)` goes to `(h(σ), h(τ))`.
    pub fn induced(h: &VertexBijection, from: &HasseDiagram, to: &HasseDiagram) -> Result<MorseIso> {
        let image_of = |c: &Cell| -> Result<u32> {
            let Cell::Simplex(s) = c else {
                return Err(Error::Precondition("induced map needs simplicial cells".into()));
            };
            to.simplex_id(&h.map_simplex(s)).ok_or_else(|| Error::InvalidIso("image is not a simplex".into()))
        };
        let forward = (0..from.num_pairs() as PairId)
            .map(|p| {
                let pair = from.pair(p);
                let (s, t) = (image_of(from.cell(pair.source))?, image_of(from.cell(pair.target))?);
                to.pair_id(s, t).ok_or_else(|| Error::InvalidIso("image is not a cover".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_forward(forward)
    }

    /// `𝔐(h)` for a multigraph isomorphism given on vertices and edges.
    pub fn induced_multigraph(
        vertices: &VertexBijection,
        edges: &[usize],
        from: &HasseDiagram,
        to: &HasseDiagram,
    ) -> Result<MorseIso> {
        let image_of = |c: &Cell| -> Option<u32> {
            match c {
                Cell::Simplex(s) => to.simplex_id(&vertices.map_simplex(s)),
                Cell::Edge { edge, .. } => {
                    let target = edges[*edge];
                    (0..to.num_cells() as u32).find(|&i| matches!(to.cell(i), Cell::Edge { edge, .. } if *edge == target))
                }
            }
        };
        let forward = (0..from.num_pairs() as PairId)
            .map(|p| {
                let pair = from.pair(p);
                image_of(from.cell(pair.source))
                    .zip(image_of(from.cell(pair.target)))
                    .and_then(|(s, t)| to.pair_id(s, t))
                    .ok_or_else(|| Error::InvalidIso("image is not a regular pair".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_forward(forward)
    }
}

/// Lexicographically least isomorphism between two Morse complexes, if any.
pub fn find_morse_isomorphism(a: &MorseComplex, b: &MorseComplex, parallelism: Parallelism) -> Option<MorseIso> {
    let perm = find_set_isomorphism(&a.non_face_system(), &b.non_face_system(), parallelism)?;
    Some(MorseIso::from_forward(perm).expect("search returns bijections"))
}

/// A regular pair of index 0 sent to index ≥ 1 by `F` (`forward`) or by `F⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexAnomaly {
    pub forward: bool,
    pub pair: PairId,
    pub image: PairId,
}

/// Looks for an index-0 pair mapped to a pair of positive index, in both
/// directions. When one exists both complexes must be boundaries of a simplex.
pub fn detect_index_anomaly(f: &MorseIso, a: &MorseComplex, b: &MorseComplex) -> Option<IndexAnomaly> {
    let scan = |from: &MorseComplex, to: &MorseComplex, map: &dyn Fn(PairId) -> PairId, forward: bool| {
        (0..from.num_vertices() as PairId)
            .filter(|&p| from.pair(p).index == 0)
            .find(|&p| to.pair(map(p)).index >= 1)
            .map(|p| IndexAnomaly { forward, pair: p, image: map(p) })
    };
    scan(a, b, &|p| f.apply(p), true).or_else(|| scan(b, a, &|q| f.apply_inverse(q), false))
}

/// `Some(n)` when the complex is the cycle graph Cₙ.
pub fn as_cycle(k: &SimplicialComplex) -> Option<usize> {
    let n = k.num_vertices();
    let ok = n >= 3
        && k.dim() == Some(1)
        && k.is_connected()
        && k.edges().len() == n
        && (0..n as VertexId).all(|v| k.neighbors(v).len() == 2);
    ok.then_some(n)
}

fn vertex_cell_of_pair_source(d: &HasseDiagram, p: PairId) -> Option<VertexId> {
    d.vertex_of(d.pair(p).source)
}

/// The map `v ↦ s(F(v, e))`, taking `e` to be the least edge at `v`, after
/// checking that every edge at `v` gives the same answer.
fn source_map(f: &MorseIso, mg: &MorseComplex, mh: &MorseComplex) -> Result<Vec<VertexId>> {
    let (dg, dh) = (mg.diagram(), mh.diagram());
    let n = dg.vertex_labels().len();
    let mut out = Vec::with_capacity(n);
    for v in 0..n as VertexId {
        let vc = dg.vertex_cell(v);
        let mut image: Option<(VertexId, PairId)> = None;
        for &e in dg.cofaces(vc) {
            let p = dg.pair_id(vc, e).expect("cover");
            let q = f.apply(p);
            let w = vertex_cell_of_pair_source(dh, q).ok_or_else(|| Error::Contradiction {
                theorem: GRAPH_THEOREM,
                detail: format!("{} is sent to {}, which has positive index", dg.format_pair(p), dh.format_pair(q)),
            })?;
            match image {
                None => image = Some((w, p)),
                Some((w0, p0)) if w0 != w => {
                    return Err(Error::Contradiction {
                        theorem: GRAPH_THEOREM,
                        detail: format!(
                            "not well defined at {}: {} and {} have sources {} and {}",
                            dg.vertex_labels()[v as usize],
                            dg.format_pair(p0),
                            dg.format_pair(p),
                            dh.vertex_labels()[w0 as usize],
                            dh.vertex_labels()[w as usize],
                        ),
                    })
                }
                _ => {}
            }
        }
        match image {
            Some((w, _)) => out.push(w),
            None if n == 1 => out.push(0),
            None => {
                return Err(Error::Hypothesis { theorem: GRAPH_THEOREM, detail: "isolated vertex".into() });
            }
        }
    }
    Ok(out)
}

fn require_connected_graph(g: &SimplicialComplex, theorem: &'static str) -> Result<()> {
    if !g.is_connected() {
        return Err(Error::Hypothesis { theorem, detail: "complex is not connected".into() });
    }
    if g.dim().is_some_and(|d| d > 1) {
        return Err(Error::Hypothesis { theorem, detail: "not a graph".into() });
    }
    Ok(())
}

/// For connected simple graphs that are not cycles: `f(v) = s(F(v, e))`.
pub fn reconstruct_graph_iso(
    f: &MorseIso,
    g: &SimplicialComplex,
    h: &SimplicialComplex,
    mg: &MorseComplex,
    mh: &MorseComplex,
) -> Result<VertexBijection> {
    require_connected_graph(g, GRAPH_THEOREM)?;
    require_connected_graph(h, GRAPH_THEOREM)?;
    for k in [g, h] {
        if let Some(n) = as_cycle(k) {
            return Err(Error::Hypothesis { theorem: GRAPH_THEOREM, detail: format!("input is the cycle C{n}") });
        }
    }
    f.verify(mg, mh)?;
    if g.num_vertices() != h.num_vertices() {
        return Err(Error::Contradiction { theorem: GRAPH_THEOREM, detail: "vertex counts differ".into() });
    }
    let forward = source_map(f, mg, mh)?;
    let map = VertexBijection::new(forward).map_err(|_| Error::Contradiction {
        theorem: GRAPH_THEOREM,
        detail: "source map is not injective".into(),
    })?;
    if !map.is_isomorphism(g, h) {
        return Err(Error::Contradiction { theorem: GRAPH_THEOREM, detail: "source map is not simplicial".into() });
    }
    Ok(map)
}

/// For `g = Cₙ`: `Some(n)` iff `h` is a cycle of the same length, checked by
/// counting (connected, `|V| = |E|`, no leaves).
pub fn reconstruct_cycle(g: &SimplicialComplex, h: &SimplicialComplex) -> Result<Option<usize>> {
    let Some(n) = as_cycle(g) else {
        return Err(Error::Hypothesis { theorem: "the cycle corollary", detail: "first graph is not a cycle".into() });
    };
    let leaves = (0..h.num_vertices() as VertexId).any(|v| h.neighbors(v).len() <= 1);
    let ok = h.is_connected()
        && h.dim() == Some(1)
        && h.num_vertices() == n
        && h.edges().len() == h.num_vertices()
        && !leaves;
    Ok(ok.then_some(n))
}

/// The 2n isomorphisms between two n-cycles (given by their 1-skeletons),
/// in lexicographic order.
pub fn cycle_isomorphisms(g: &SimplicialComplex, h: &SimplicialComplex) -> Vec<VertexBijection> {
    let walk = |k: &SimplicialComplex| -> Vec<VertexId> {
        let mut order = vec![0];
        let mut prev = None;
        let mut cur = 0;
        while order.len() < k.num_vertices() {
            let next = k.neighbors(cur).into_iter().find(|&w| Some(w) != prev).expect("cycle");
            order.push(next);
            prev = Some(cur);
            cur = next;
        }
        order
    };
    let (wg, wh) = (walk(&g.skeleton(1)), walk(&h.skeleton(1)));
    let n = wg.len();
    let mut out = Vec::new();
    for shift in 0..n {
        for dir in [1, n - 1] {
            let mut forward = vec![0; n];
            for i in 0..n {
                forward[wg[i] as usize] = wh[(shift + dir * i) % n];
            }
            out.push(VertexBijection::new(forward).expect("bijection"));
        }
    }
    out.sort_by(|a, b| a.forward().cmp(b.forward()));
    out.dedup();
    out
}

/// `F` restricted to index-0 pairs, as a map between the Morse complexes of
/// the 1-skeletons.
fn restrict_to_one_skeleton(
    f: &MorseIso,
    mk: &MorseComplex,
    ml: &MorseComplex,
    mk1: &MorseComplex,
    ml1: &MorseComplex,
) -> Result<MorseIso> {
    let lookup = |from: &HasseDiagram, to: &HasseDiagram, p: PairId| -> Option<PairId> {
        let pair = from.pair(p);
        let s = to.cell_id(from.cell(pair.source))?;
        let t = to.cell_id(from.cell(pair.target))?;
        to.pair_id(s, t)
    };
    let forward = (0..mk1.num_vertices() as PairId)
        .map(|p| {
            let in_k = lookup(mk1.diagram(), mk.diagram(), p).expect("skeleton pair");
            let in_l = f.apply(in_k);
            lookup(ml.diagram(), ml1.diagram(), in_l).ok_or_else(|| Error::Contradiction {
                theorem: COMPLEX_THEOREM,
                detail: format!("index-0 pair {} is sent to index ≥ 1", mk.diagram().format_pair(in_k)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let restricted = MorseIso::from_forward(forward).map_err(|_| Error::Contradiction {
        theorem: COMPLEX_THEOREM,
        detail: "restriction to index 0 is not a bijection".into(),
    })?;
    restricted.verify(mk1, ml1)?;
    Ok(restricted)
}

/// Checks, dimension by dimension, that `F(σ, τ) = (f(σ), f(τ))` for all
/// pairs of positive index. For `τ = v₀⋯vₙ₊₁` the two pairs
/// `(v₀⋯vₙ, τ)` and `(v₁⋯vₙ₊₁, τ)` must land on a common target whose extra
/// vertices are `f(vₙ₊₁)` and `f(v₀)` respectively.
fn check_inductive_steps(
    f: &MorseIso,
    map: &VertexBijection,
    k: &SimplicialComplex,
    mk: &MorseComplex,
    ml: &MorseComplex,
) -> Result<()> {
    let (dk, dl) = (mk.diagram(), ml.diagram());
    let simplex_of = |d: &HasseDiagram, c| match d.cell(c) {
        Cell::Simplex(s) => s.clone(),
        Cell::Edge { .. } => unreachable!("simplicial diagram"),
    };
    let image = |s: &Simplex, t: &Simplex| -> (Simplex, Simplex) {
        let p = dk.pair_id(dk.simplex_id(s).unwrap(), dk.simplex_id(t).unwrap()).unwrap();
        let q = dl.pair(f.apply(p));
        (simplex_of(dl, q.source), simplex_of(dl, q.target))
    };
    let extra = |source: &Simplex, target: &Simplex| -> VertexId {
        *target.vertices().iter().find(|v| !source.contains(**v)).expect("target is one vertex larger")
    };
    let fail = |detail: String| Error::Contradiction { theorem: COMPLEX_THEOREM, detail };
    let dim = k.dim().unwrap_or(0);
    for n in 0..dim.saturating_sub(1) {
        for tau in k.simplices_sorted().into_iter().filter(|s| s.dim() == n + 2) {
            let vs = tau.vertices();
            let front = Simplex::from_sorted(&vs[..vs.len() - 1]);
            let back = Simplex::from_sorted(&vs[1..]);
            let (fs, ft) = image(&front, &tau);
            let (bs, bt) = image(&back, &tau);
            if fs != map.map_simplex(&front) || bs != map.map_simplex(&back) {
                return Err(fail(format!("sources over {} are not the images of their faces", k.format_simplex(&tau))));
            }
            if ft != bt {
                return Err(fail(format!("the two pairs into {} have different targets", k.format_simplex(&tau))));
            }
            let (w, u) = (extra(&fs, &ft), extra(&bs, &bt));
            if w != map.apply(vs[vs.len() - 1]) || u != map.apply(vs[0]) {
                return Err(fail(format!("extra vertices over {} do not match", k.format_simplex(&tau))));
            }
        }
    }
    for p in 0..mk.num_vertices() as PairId {
        let pair = dk.pair(p);
        let (s, t) = (simplex_of(dk, pair.source), simplex_of(dk, pair.target));
        if image(&s, &t) != (map.map_simplex(&s), map.map_simplex(&t)) {
            return Err(fail(format!("{} is not sent to the image pair", dk.format_pair(p))));
        }
    }
    Ok(())
}

/// How the vertex map of [`reconstruct_complex_iso`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReconstructionRoute {
    /// `f(v) = s(F(v, e))` on the 1-skeleton, extended and checked inductively.
    SourceMap,
    /// `F` mixes indices; both complexes are the same ∂Δᵐ.
    BoundarySimplex(usize),
    /// The 1-skeleton is a cycle and `F` does not induce the map; an explicit
    /// cycle isomorphism that is simplicial was chosen.
    Cycle(usize),
    SingleVertex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub map: VertexBijection,
    pub route: ReconstructionRoute,
}

/// From `F: 𝔐(K) → 𝔐(L)` produce a verified isomorphism `K → L`.
pub fn reconstruct_complex_iso(
    f: &MorseIso,
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    mk: &MorseComplex,
    ml: &MorseComplex,
) -> Result<Reconstruction> {
    for c in [k, l] {
        if !c.is_connected() {
            return Err(Error::Hypothesis { theorem: COMPLEX_THEOREM, detail: "complex is not connected".into() });
        }
    }
    f.verify(mk, ml)?;
    let done = |map: VertexBijection, route| -> Result<Reconstruction> {
        if map.is_isomorphism(k, l) {
            Ok(Reconstruction { map, route })
        } else {
            Err(Error::Contradiction { theorem: COMPLEX_THEOREM, detail: format!("{route:?} map is not an isomorphism") })
        }
    };

    if let Some(anomaly) = detect_index_anomaly(f, mk, ml) {
        return match (k.is_boundary_simplex(), l.is_boundary_simplex()) {
            (Some(m), Some(m2)) if m == m2 => done(VertexBijection::identity(k.num_vertices()), ReconstructionRoute::BoundarySimplex(m)),
            _ => Err(Error::Contradiction {
                theorem: "the index-mixing proposition",
                detail: format!("index-0 pair {} changes index but the complexes are not ∂Δᵐ", anomaly.pair),
            }),
        };
    }
    if k.num_vertices() == 1 {
        if l.num_vertices() != 1 {
            return Err(Error::Contradiction { theorem: COMPLEX_THEOREM, detail: "vertex counts differ".into() });
        }
        return done(VertexBijection::identity(1), ReconstructionRoute::SingleVertex);
    }

    let (k1, l1) = (k.skeleton(1), l.skeleton(1));
    let (mk1, ml1) = (MorseComplex::of_complex(&k1), MorseComplex::of_complex(&l1));
    let f1 = restrict_to_one_skeleton(f, mk, ml, &mk1, &ml1)?;

    if let Some(n) = as_cycle(&k1) {
        if reconstruct_cycle(&k1, &l1)?.is_none() {
            return Err(Error::Contradiction { theorem: "the cycle corollary", detail: "second 1-skeleton is not a cycle".into() });
        }
        // F may or may not come from a vertex map here; use it when it does.
        if let Ok(forward) = source_map(&f1, &mk1, &ml1) {
            if let Ok(map) = VertexBijection::new(forward) {
                if map.is_isomorphism(k, l) && check_inductive_steps(f, &map, k, mk, ml).is_ok() {
                    return done(map, ReconstructionRoute::SourceMap);
                }
            }
        }
        return match cycle_isomorphisms(&k1, &l1).into_iter().find(|m| m.is_isomorphism(k, l)) {
            Some(map) => done(map, ReconstructionRoute::Cycle(n)),
            None => Err(Error::Contradiction { theorem: COMPLEX_THEOREM, detail: format!("no isomorphism of C{n} extends") }),
        };
    }

    let map = reconstruct_graph_iso(&f1, &k1, &l1, &mk1, &ml1)?;
    check_inductive_steps(f, &map, k, mk, ml)?;
    done(map, ReconstructionRoute::SourceMap)
}

/// Whether `(v, e)` and `(v', e')` are parallel in `𝔐(G)`, decided through the
/// Morse complex alone: incompatible with equal links. Needs `G` connected
/// with at least three vertices.
pub fn parallel_pairs(g: &Multigraph, m: &MorseComplex, p: PairId, q: PairId, budget: &Budget) -> Result<bool> {
    if !g.is_connected() || g.num_vertices() < 3 {
        return Err(Error::Hypothesis {
            theorem: PARALLEL_LEMMA,
            detail: "multigraph must be connected with more than two vertices".into(),
        });
    }
    if p == q || m.compatible(p, q) {
        return Ok(false);
    }
    Ok(m.vertex_link_facets(p, budget)? == m.vertex_link_facets(q, budget)?)
}

/// The literal definition: same source vertex and parallel edges.
pub fn literally_parallel(m: &MorseComplex, p: PairId, q: PairId) -> bool {
    let d = m.diagram();
    let (a, b) = (d.pair(p), d.pair(q));
    let ends = |c| match d.cell(c) {
        Cell::Edge { ends, .. } => Some(*ends),
        Cell::Simplex(s) if s.dim() == 1 => Some((s.vertices()[0], s.vertices()[1])),
        _ => None,
    };
    p != q && a.source == b.source && ends(a.target).is_some() && ends(a.target) == ends(b.target)
}

/// Vertex classes of the relation `v ~ w ⟺ v = w, or {v,w} ∉ K and lk(v) = lk(w)`,
/// and the complex they span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientComplex {
    /// Classes ordered by their least member; each class is sorted.
    pub classes: Vec<Vec<VertexId>>,
    /// Vertex of `K` to class index.
    pub projection: Vec<usize>,
    /// Vertices are classes, labeled by their least member.
    pub quotient: SimplicialComplex,
}

pub fn quotient(k: &SimplicialComplex) -> QuotientComplex {
    let n = k.num_vertices();
    let links: Vec<Vec<Vec<VertexId>>> = (0..n as VertexId).map(|v| k.vertex_link_facets(v)).collect();
    let mut projection = vec![usize::MAX; n];
    let mut classes: Vec<Vec<VertexId>> = Vec::new();
    for v in 0..n {
        if projection[v] != usize::MAX {
            continue;
        }
        let class_id = classes.len();
        let mut class = vec![v as VertexId];
        projection[v] = class_id;
        for w in v + 1..n {
            let adjacent = k.contains(&Simplex::from_sorted(&[v as VertexId, w as VertexId]));
            if projection[w] == usize::MAX && !adjacent && links[v] == links[w] {
                projection[w] = class_id;
                class.push(w as VertexId);
            }
        }
        classes.push(class);
    }
    let labels: Vec<String> = classes.iter().map(|c| k.label(c[0]).to_string()).collect();
    let gens = k
        .facets()
        .iter()
        .map(|f| Simplex::new(f.vertices().iter().map(|&v| projection[v as usize] as VertexId)).expect("classes are independent"))
        .collect();
    let quotient = SimplicialComplex::from_generators(labels, gens);
    QuotientComplex { classes, projection, quotient }
}

/// `f̃(ṽ) = class of f(v)`, checked to be well defined and an isomorphism.
pub fn induced_quotient_iso(
    f: &VertexBijection,
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    qk: &QuotientComplex,
    ql: &QuotientComplex,
) -> Result<VertexBijection> {
    if !f.is_isomorphism(k, l) {
        return Err(Error::InvalidIso("map is not simplicial in both directions".into()));
    }
    let mut forward = Vec::with_capacity(qk.classes.len());
    for class in &qk.classes {
        let image = ql.projection[f.apply(class[0]) as usize];
        if let Some(&v) = class.iter().find(|&&v| ql.projection[f.apply(v) as usize] != image) {
            return Err(Error::Contradiction {
                theorem: QUOTIENT_PROPOSITION,
                detail: format!("class of {} is split by the map at {}", k.label(class[0]), k.label(v)),
            });
        }
        forward.push(image as VertexId);
    }
    let map = VertexBijection::new(forward)
        .map_err(|_| Error::Contradiction { theorem: QUOTIENT_PROPOSITION, detail: "induced map is not a bijection".into() })?;
    if !map.is_isomorphism(&qk.quotient, &ql.quotient) {
        return Err(Error::Contradiction { theorem: QUOTIENT_PROPOSITION, detail: "induced map is not simplicial".into() });
    }
    Ok(map)
}

/// `sG` together with the image `ē` of every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplification {
    pub graph: SimplicialComplex,
    pub edge_map: Vec<Simplex>,
}

pub fn simplify(g: &Multigraph) -> Simplification {
    Simplification {
        graph: g.underlying_complex(),
        edge_map: g.edges().iter().map(|e| Simplex::from_sorted(&[e.ends.0, e.ends.1])).collect(),
    }
}

/// The identification `𝔐(G)~ → 𝔐(sG)`, class of `(v, e)` ↦ `(v, ē)`,
/// checked to be well defined and simplicial.
pub fn quotient_to_simplification(
    m: &MorseComplex,
    q: &QuotientComplex,
    ms: &MorseComplex,
    budget: &Budget,
) -> Result<VertexBijection> {
    let (d, ds) = (m.diagram(), ms.diagram());
    let target_of = |p: PairId| -> Option<PairId> {
        let pair = d.pair(p);
        let v = d.vertex_of(pair.source)?;
        let Cell::Edge { ends, .. } = d.cell(pair.target) else { return None };
        let s = ds.simplex_id(&Simplex::vertex(v))?;
        let t = ds.simplex_id(&Simplex::from_sorted(&[ends.0, ends.1]))?;
        ds.pair_id(s, t)
    };
    let mut forward = Vec::with_capacity(q.classes.len());
    for class in &q.classes {
        let images: Vec<Option<PairId>> = class.iter().map(|&p| target_of(p)).collect();
        match images[0] {
            Some(t) if images.iter().all(|&i| i == Some(t)) => forward.push(t),
            _ => {
                return Err(Error::Contradiction {
                    theorem: PARALLEL_LEMMA,
                    detail: format!("class of {} mixes non-parallel pairs", d.format_pair(class[0])),
                })
            }
        }
    }
    let map = VertexBijection::new(forward)
        .map_err(|_| Error::Contradiction { theorem: PARALLEL_LEMMA, detail: "classes do not match pairs of sG".into() })?;
    let us = ms.underlying(budget)?;
    if !map.is_isomorphism(&q.quotient, &us) {
        return Err(Error::Contradiction { theorem: PARALLEL_LEMMA, detail: "quotient is not 𝔐(sG)".into() });
    }
    Ok(map)
}

/// A multigraph isomorphism: vertex bijection plus edge index map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultigraphIso {
    pub vertices: VertexBijection,
    pub edges: Vec<usize>,
}

impl MultigraphIso {
    pub fn is_isomorphism(&self, g: &Multigraph, h: &Multigraph) -> bool {
        if g.num_vertices() != h.num_vertices() || g.num_edges() != h.num_edges() || self.edges.len() != g.num_edges() {
            return false;
        }
        let mut seen = vec![false; h.num_edges()];
        self.edges.iter().enumerate().all(|(i, &j)| {
            let (a, b) = g.edge(i).ends;
            let (fa, fb) = (self.vertices.apply(a), self.vertices.apply(b));
            !std::mem::replace(&mut seen[j], true) && h.edge(j).ends == (fa.min(fb), fa.max(fb))
        })
    }
}

/// Pairs each parallel class of `g` with the matching class of `h` under
/// `f`, edges in label order. `None` if some cardinality differs.
fn edge_bijection(g: &Multigraph, h: &Multigraph, f: &VertexBijection) -> Option<Vec<usize>> {
    let mut edges = vec![usize::MAX; g.num_edges()];
    let hm = h.multiplicities();
    let gm = g.multiplicities();
    if gm.len() != hm.len() {
        return None;
    }
    for (&(u, v), &count) in &gm {
        let (fu, fv) = (f.apply(u), f.apply(v));
        if hm.get(&(fu.min(fv), fu.max(fv))) != Some(&count) {
            return None;
        }
        for (a, b) in g.parallel_class(u, v).into_iter().zip(h.parallel_class(fu, fv)) {
            edges[a] = b;
        }
    }
    Some(edges)
}

/// Checks the lemma on every pair of pairs: parallel through the Morse
/// complex iff parallel by definition. Returns the number of pairs checked.
pub fn check_parallel_lemma(g: &Multigraph, m: &MorseComplex, budget: &Budget) -> Result<usize> {
    let n = m.num_vertices() as PairId;
    let mut checked = 0;
    for p in 0..n {
        for q in p + 1..n {
            let via_morse = parallel_pairs(g, m, p, q, budget)?;
            if via_morse != literally_parallel(m, p, q) {
                return Err(Error::Contradiction {
                    theorem: PARALLEL_LEMMA,
                    detail: format!("{} and {}", m.diagram().format_pair(p), m.diagram().format_pair(q)),
                });
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// From `F: 𝔐(G) → 𝔐(G')` of connected multigraphs, an explicit
/// isomorphism `G → G'`, routed through the quotient by parallel pairs and
/// the simplifications.
pub fn reconstruct_multigraph_iso(
    f: &MorseIso,
    g: &Multigraph,
    h: &Multigraph,
    mg: &MorseComplex,
    mh: &MorseComplex,
    budget: &Budget,
) -> Result<MultigraphIso> {
    if !g.is_connected() || !h.is_connected() {
        return Err(Error::Hypothesis { theorem: MULTIGRAPH_THEOREM, detail: "multigraph is not connected".into() });
    }
    f.verify(mg, mh)?;
    let contradiction = |detail: &str| Error::Contradiction { theorem: MULTIGRAPH_THEOREM, detail: detail.into() };
    // dim 𝔐(G) = |V_G| - 2 for connected G, so F preserves the vertex count.
    let (dg, dh) = (mg.dim(budget)?, mh.dim(budget)?);
    if dg != dh || g.num_vertices() != h.num_vertices() {
        return Err(contradiction("vertex counts differ"));
    }
    let finish = |vertices: VertexBijection| -> Result<MultigraphIso> {
        let edges = edge_bijection(g, h, &vertices).ok_or_else(|| contradiction("parallel class sizes differ"))?;
        let iso = MultigraphIso { vertices, edges };
        if iso.is_isomorphism(g, h) {
            Ok(iso)
        } else {
            Err(contradiction("result is not an isomorphism"))
        }
    };
    if g.num_vertices() <= 2 {
        // One vertex, or k parallel edges between two vertices; 𝔐 is 2k points.
        return finish(VertexBijection::identity(g.num_vertices()));
    }

    check_parallel_lemma(g, mg, budget)?;
    check_parallel_lemma(h, mh, budget)?;
    let (ug, uh) = (mg.underlying(budget)?, mh.underlying(budget)?);
    let (qg, qh) = (quotient(&ug), quotient(&uh));
    let f_tilde = induced_quotient_iso(f.bijection(), &ug, &uh, &qg, &qh)?;

    let (sg, sh) = (simplify(g), simplify(h));
    let (msg, msh) = (MorseComplex::of_complex(&sg.graph), MorseComplex::of_complex(&sh.graph));
    let phi_g = quotient_to_simplification(mg, &qg, &msg, budget)?;
    let phi_h = quotient_to_simplification(mh, &qh, &msh, budget)?;
    let f_simple = MorseIso::new(phi_g.inverse().then(&f_tilde).then(&phi_h));
    f_simple.verify(&msg, &msh)?;

    if let Some(n) = as_cycle(&sg.graph) {
        if reconstruct_cycle(&sg.graph, &sh.graph)?.is_none() {
            return Err(contradiction("simplification of the second multigraph is not a cycle"));
        }
        if let Ok(Ok(map)) = source_map(&f_simple, &msg, &msh).map(VertexBijection::new) {
            if let Ok(iso) = finish(map) {
                return Ok(iso);
            }
        }
        return cycle_isomorphisms(&sg.graph, &sh.graph)
            .into_iter()
            .find_map(|m| finish(m).ok())
            .ok_or_else(|| contradiction(&format!("no isomorphism of C{n} preserves multiplicities")));
    }
    let map = reconstruct_graph_iso(&f_simple, &sg.graph, &sh.graph, &msg, &msh)?;
    finish(map)
}

/// Multigraph isomorphism by search on the underlying simple graph with
/// multiplicities as a multiset of edge blocks.
pub fn find_multigraph_isomorphism(g: &Multigraph, h: &Multigraph) -> Option<MultigraphIso> {
    let system = |m: &Multigraph| {
        crate::iso::SetSystem::new(
            m.num_vertices(),
            m.edges()
                .iter()
                .map(|e| vec![e.ends.0, e.ends.1])
                .collect(),
        )
    };
    if g.num_edges() != h.num_edges() {
        return None;
    }
    let perm = find_set_isomorphism(&system(g), &system(h), Parallelism::Sequential)?;
    let vertices = VertexBijection::new(perm).ok()?;
    let edges = edge_bijection(g, h, &vertices)?;
    Some(MultigraphIso { vertices, edges })
}

/// Counts of edges per unordered vertex pair, keyed by label.
pub fn multiplicity_table(g: &Multigraph) -> BTreeMap<(String, String), usize> {
    g.multiplicities()
        .into_iter()
        .map(|((u, v), c)| ((g.label(u).to_string(), g.label(v).to_string()), c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hasse::HasseDiagram;
    use crate::iso::automorphisms;

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn functoriality_on_triangle() {
        let k = SimplicialComplex::simplex(2);
        let m = MorseComplex::of_complex(&k);
        for h in crate::iso::automorphisms(&k, 10) {
            let f = MorseIso::induced(&h, m.diagram(), m.diagram()).unwrap();
            f.verify(&m, &m).unwrap();
            let r = reconstruct_complex_iso(&f, &k, &k, &m, &m).unwrap();
            assert_eq!(r.map, h);
        }
    }

    #[test]
    fn star_relabeling_is_recovered() {
        let star = SimplicialComplex::from_facets_numbered(4, &[&[0, 1], &[0, 2], &[0, 3]]);
        let other = star.permuted(&[2, 0, 3, 1]);
        let (ma, mb) = (MorseComplex::of_complex(&star), MorseComplex::of_complex(&other));
        let f = find_morse_isomorphism(&ma, &mb, Parallelism::Sequential).unwrap();
        let map = reconstruct_graph_iso(&f, &star, &other, &ma, &mb).unwrap();
        assert!(map.is_isomorphism(&star, &other));
        assert_eq!(map.apply(0), 2);
    }

    #[test]
    fn path_automorphisms_swap_leaves() {
        let p3 = SimplicialComplex::path(3);
        let m = MorseComplex::of_complex(&p3);
        let s = m.non_face_system();
        let autos = crate::iso::all_set_isomorphisms(&s, &s, 1000);
        assert!(autos.len() >= 2);
        let mut seen = std::collections::BTreeSet::new();
        for a in autos {
            let f = MorseIso::from_forward(a).unwrap();
            let map = reconstruct_graph_iso(&f, &p3, &p3, &m, &m).unwrap();
            assert_eq!(map.apply(1), 1);
            seen.insert(map.forward().to_vec());
        }
        assert!(seen.contains(&vec![2, 1, 0]));
    }

    #[test]
    fn cycles_are_rejected_by_graph_theorem() {
        let c4 = SimplicialComplex::cycle(4);
        let m = MorseComplex::of_complex(&c4);
        let id = MorseIso::new(VertexBijection::identity(m.num_vertices()));
        assert!(matches!(reconstruct_graph_iso(&id, &c4, &c4, &m, &m), Err(Error::Hypothesis { .. })));
    }

    #[test]
    fn bad_map_is_invalid() {
        let p3 = SimplicialComplex::path(3);
        let m = MorseComplex::of_complex(&p3);
        let f = MorseIso::from_forward(vec![1, 0, 2, 3]).unwrap();
        assert!(f.verify(&m, &m).is_err());
    }

    #[test]
    fn cycle_corollary() {
        let c4 = SimplicialComplex::cycle(4);
        assert_eq!(reconstruct_cycle(&c4, &c4.permuted(&[1, 3, 0, 2])).unwrap(), Some(4));
        let c5 = SimplicialComplex::cycle(5);
        assert_eq!(reconstruct_cycle(&c5, &c5).unwrap(), Some(5));
        assert_eq!(reconstruct_cycle(&SimplicialComplex::cycle(3), &SimplicialComplex::path(3)).unwrap(), None);
        assert!(reconstruct_cycle(&SimplicialComplex::path(3), &c4).is_err());
        assert_eq!(cycle_isomorphisms(&c5, &c5).len(), 10);
    }

    #[test]
    fn simplification() {
        let g = Multigraph::new(&[], &[("a", "u", "v"), ("b", "u", "v")]).unwrap();
        let s = simplify(&g);
        assert_eq!(s.graph.f_vector(), vec![2, 1]);
        assert_eq!(s.edge_map[0], s.edge_map[1]);
        let theta = Multigraph::new(&[], &[("a", "u", "v"), ("b", "u", "v"), ("c", "u", "v")]).unwrap();
        assert_eq!(simplify(&theta).graph, SimplicialComplex::closure([["u", "v"]]).unwrap());
        let simple = SimplicialComplex::path(3).to_multigraph().unwrap();
        assert_eq!(simplify(&simple).graph, SimplicialComplex::path(3));
    }

    #[test]
    fn quotient_examples() {
        let two = SimplicialComplex::closure([["a"], ["b"]]).unwrap();
        assert_eq!(quotient(&two).classes, vec![vec![0, 1]]);
        let p4 = SimplicialComplex::path(4);
        assert_eq!(quotient(&p4).classes.len(), 4);
        // 0 and 2 both have link {1,3} in C4.
        let c4 = SimplicialComplex::cycle(4);
        assert_eq!(quotient(&c4).classes, vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn identity_on_quotient() {
        let c4 = SimplicialComplex::cycle(4);
        let q = quotient(&c4);
        let id = induced_quotient_iso(&VertexBijection::identity(4), &c4, &c4, &q, &q).unwrap();
        assert_eq!(id, VertexBijection::identity(2));
        let bad = VertexBijection::new(vec![1, 0, 2, 3]).unwrap();
        assert!(matches!(induced_quotient_iso(&bad, &c4, &c4, &q, &q), Err(Error::InvalidIso(_))));
    }

    #[test]
    fn triangle_morse_automorphisms_have_trivial_quotient() {
        let c3 = SimplicialComplex::cycle(3);
        let u = MorseComplex::of_complex(&c3).underlying(&budget()).unwrap();
        let q = quotient(&u);
        assert_eq!(q.classes.len(), u.num_vertices());
        for a in automorphisms(&u, 100) {
            let induced = induced_quotient_iso(&a, &u, &u, &q, &q).unwrap();
            assert_eq!(induced, a);
        }
    }

    #[test]
    fn parallel_pairs_in_a_multigraph() {
        let g = Multigraph::new(&[], &[("a", "v", "w"), ("b", "v", "w"), ("c", "w", "x")]).unwrap();
        let m = MorseComplex::of_multigraph(&g);
        let d = m.diagram();
        let v = d.vertex_cell(0);
        let pairs_at_v: Vec<PairId> = d.cofaces(v).iter().map(|&e| d.pair_id(v, e).unwrap()).collect();
        assert!(parallel_pairs(&g, &m, pairs_at_v[0], pairs_at_v[1], &budget()).unwrap());
        assert_eq!(check_parallel_lemma(&g, &m, &budget()).unwrap(), 15);

        let p3 = SimplicialComplex::path(3).to_multigraph().unwrap();
        let mp = MorseComplex::of_multigraph(&p3);
        check_parallel_lemma(&p3, &mp, &budget()).unwrap();
        assert!((0..4).all(|p| (0..4).all(|q| !parallel_pairs(&p3, &mp, p, q, &budget()).unwrap())));

        let two = Multigraph::new(&[], &[("a", "v", "w"), ("b", "v", "w")]).unwrap();
        let m2 = MorseComplex::of_multigraph(&two);
        assert!(matches!(parallel_pairs(&two, &m2, 0, 1, &budget()), Err(Error::Hypothesis { .. })));
    }

    #[test]
    fn theta_relabeled() {
        let theta = Multigraph::new(&[], &[("a", "u", "v"), ("b", "u", "v"), ("c", "u", "v"), ("d", "v", "w")]).unwrap();
        let other = Multigraph::new(&[], &[("x", "B", "C"), ("y", "B", "C"), ("z", "B", "C"), ("t", "A", "B")]).unwrap();
        let (ma, mb) = (MorseComplex::of_multigraph(&theta), MorseComplex::of_multigraph(&other));
        let f = find_morse_isomorphism(&ma, &mb, Parallelism::Sequential).unwrap();
        let iso = reconstruct_multigraph_iso(&f, &theta, &other, &ma, &mb, &budget()).unwrap();
        assert!(iso.is_isomorphism(&theta, &other));
        assert_eq!(iso.vertices.apply(0), 2);
    }

    #[test]
    fn different_multiplicities_have_non_isomorphic_complexes() {
        let g = Multigraph::new(&[], &[("a", "u", "v"), ("b", "u", "v"), ("c", "v", "w")]).unwrap();
        let h = Multigraph::new(&[], &[("a", "u", "v"), ("b", "v", "w"), ("c", "w", "u")]).unwrap();
        let (mg, mh) = (MorseComplex::of_multigraph(&g), MorseComplex::of_multigraph(&h));
        assert!(find_morse_isomorphism(&mg, &mh, Parallelism::Sequential).is_none());
        let (fg, fh) = (mg.ensure_facets(&budget()).unwrap().len(), mh.ensure_facets(&budget()).unwrap().len());
        assert_ne!(fg, fh);
    }

    #[test]
    fn index_anomaly_absent_for_induced_maps() {
        let k = SimplicialComplex::from_facets_numbered(4, &[&[0, 1, 2], &[2, 3]]);
        let m = MorseComplex::of_complex(&k);
        let d = HasseDiagram::of_complex(&k);
        for h in automorphisms(&k, 10) {
            let f = MorseIso::induced(&h, &d, &d).unwrap();
            assert!(detect_index_anomaly(&f, &m, &m).is_none());
        }
    }
}
