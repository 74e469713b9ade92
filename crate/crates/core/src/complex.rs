//! Finite abstract simplicial complexes and multigraphs.
//!
//! Vertices carry string labels at the boundary and dense `u32` ids inside.
//! Ids are always assigned in natural label order (digit runs compare
//! numerically), so "lexicographic on ids" and "lexicographic on labels"
//! agree and every derived ordering is reproducible.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use itertools::Itertools;
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type VertexId = u32;

/// Compares labels so that `v2 < v10`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let mut ia = a.chars().peekable();
    let mut ib = b.chars().peekable();
    loop {
        match (ia.peek().copied(), ib.peek().copied()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(ca), Some(cb)) if ca.is_ascii_digit() && cb.is_ascii_digit() => {
                let mut da = String::new();
                while let Some(c) = ia.peek().copied().filter(char::is_ascii_digit) {
                    da.push(c);
                    ia.next();
                }
                let mut db = String::new();
                while let Some(c) = ib.peek().copied().filter(char::is_ascii_digit) {
                    db.push(c);
                    ib.next();
                }
                let ta = da.trim_start_matches('0');
                let tb = db.trim_start_matches('0');
                let ord = ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            (Some(ca), Some(cb)) => {
                if ca != cb {
                    return ca.cmp(&cb);
                }
                ia.next();
                ib.next();
            }
        }
    }
}

/// A nonempty, strictly increasing list of vertex ids.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(SmallVec<[VertexId; 4]>);

impl Simplex {
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        let mut vs: SmallVec<[VertexId; 4]> = vertices.into_iter().collect();
        if vs.is_empty() {
            return Err(Error::Malformed("empty simplex".into()));
        }
        vs.sort_unstable();
        if vs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Malformed(format!("repeated vertex in simplex {vs:?}")));
        }
        Ok(Simplex(vs))
    }

    /// Caller guarantees `vertices` is nonempty and strictly increasing.
    pub(crate) fn from_sorted(vertices: &[VertexId]) -> Self {
        debug_assert!(!vertices.is_empty());
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(SmallVec::from_slice(vertices))
    }

    pub fn vertex(v: VertexId) -> Self {
        Simplex(smallvec::smallvec![v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| !other.contains(*v))
    }

    /// `self ∪ other`.
    pub fn join(&self, other: &Simplex) -> Simplex {
        let vs: SmallVec<[VertexId; 4]> = self.0.iter().merge(other.0.iter()).dedup().copied().collect();
        Simplex(vs)
    }

    /// The codimension-one face obtained by deleting the vertex at position `i`.
    pub fn without(&self, i: usize) -> Option<Simplex> {
        if self.0.len() < 2 {
            return None;
        }
        let mut vs = self.0.clone();
        vs.remove(i);
        Some(Simplex(vs))
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        (1u32..(1u32 << n)).map(move |mask| {
            Simplex((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect())
        })
    }

    /// Image under a vertex map. Fails if the map is not injective on `self`.
    pub fn map(&self, f: impl Fn(VertexId) -> VertexId) -> Result<Simplex> {
        Simplex::new(self.0.iter().map(|v| f(*v)))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// Codimension-one faces of `tau` in lexicographic order (`abc -> [ab, ac, bc]`).
/// A vertex has none.
pub fn immediate_faces(tau: &Simplex) -> Vec<Simplex> {
    if tau.dim() == 0 {
        return Vec::new();
    }
    (0..tau.0.len()).rev().filter_map(|i| tau.without(i)).collect()
}

/// A finite simplicial complex over labeled vertices.
///
/// Invariant: every id in `0..labels.len()` is a vertex (`{v}` is a member).
#[derive(Clone)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    simplices: HashSet<Simplex>,
    facets: Vec<Simplex>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let facets: Vec<String> = self.facets.iter().map(|s| self.format_simplex(s)).collect();
        f.debug_struct("SimplicialComplex").field("facets", &facets).finish()
    }
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex { labels: Vec::new(), simplices: HashSet::new(), facets: Vec::new() }
    }

    /// Smallest face-closed complex containing the given label lists.
    pub fn closure<I, F, S>(faces: I) -> Result<Self>
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let faces: Vec<Vec<String>> = faces
            .into_iter()
            .map(|f| f.into_iter().map(|s| s.as_ref().to_string()).collect())
            .collect();
        let mut labels: Vec<String> = faces.iter().flatten().cloned().collect();
        labels.sort_by(|a, b| natural_cmp(a, b));
        labels.dedup();
        let index: HashMap<&str, VertexId> =
            labels.iter().enumerate().map(|(i, l)| (l.as_str(), i as VertexId)).collect();
        let mut simplices = Vec::with_capacity(faces.len());
        for face in &faces {
            let s = Simplex::new(face.iter().map(|l| index[l.as_str()])).map_err(|_| {
                Error::Malformed(format!("repeated vertex in simplex {{{}}}", face.join(",")))
            })?;
            simplices.push(s);
        }
        Ok(Self::from_generators(labels, simplices))
    }

    /// Closure of simplices given by ids into `labels`. Labels of vertices
    /// that occur in no generator are dropped.
    pub fn from_generators(labels: Vec<String>, generators: Vec<Simplex>) -> Self {
        let mut used = vec![false; labels.len()];
        for s in &generators {
            for &v in s.vertices() {
                used[v as usize] = true;
            }
        }
        // Natural label order, compacted to the used vertices.
        let mut order: Vec<usize> = (0..labels.len()).filter(|&i| used[i]).collect();
        order.sort_by(|&a, &b| natural_cmp(&labels[a], &labels[b]));
        let mut remap = vec![u32::MAX; labels.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new as VertexId;
        }
        let new_labels: Vec<String> = order.iter().map(|&i| labels[i].clone()).collect();
        let mut simplices = HashSet::new();
        for g in &generators {
            let g = g.map(|v| remap[v as usize]).expect("remap is injective");
            if simplices.contains(&g) {
                continue;
            }
            for face in g.faces() {
                simplices.insert(face);
            }
        }
        let facets = compute_facets(&simplices);
        SimplicialComplex { labels: new_labels, simplices, facets }
    }

    /// Complex on vertices labeled `"0"`, `"1"`, ... generated by the given id lists.
    pub fn from_facets_numbered(n: usize, generators: &[&[VertexId]]) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let gens = generators.iter().map(|g| Simplex::new(g.iter().copied()).expect("valid simplex")).collect();
        Self::from_generators(labels, gens)
    }

    /// The full simplex Δⁿ on vertices `0..=n`.
    pub fn simplex(n: usize) -> Self {
        let all: Vec<VertexId> = (0..=n as VertexId).collect();
        Self::from_facets_numbered(n + 1, &[&all])
    }

    /// ∂Δⁿ, `n ≥ 1`.
    pub fn boundary_of_simplex(n: usize) -> Self {
        assert!(n >= 1);
        let gens: Vec<Vec<VertexId>> =
            (0..=n as VertexId).map(|skip| (0..=n as VertexId).filter(|&v| v != skip).collect()).collect();
        let refs: Vec<&[VertexId]> = gens.iter().map(|g| g.as_slice()).collect();
        Self::from_facets_numbered(n + 1, &refs)
    }

    /// The cycle graph Cₙ, `n ≥ 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let gens: Vec<[VertexId; 2]> = (0..n).map(|i| [i as VertexId, ((i + 1) % n) as VertexId]).collect();
        let refs: Vec<&[VertexId]> = gens.iter().map(|g| g.as_slice()).collect();
        Self::from_facets_numbered(n, &refs)
    }

    /// The path graph on `n ≥ 1` vertices.
    pub fn path(n: usize) -> Self {
        if n == 1 {
            return Self::from_facets_numbered(1, &[&[0]]);
        }
        let gens: Vec<[VertexId; 2]> = (0..n - 1).map(|i| [i as VertexId, i as VertexId + 1]).collect();
        let refs: Vec<&[VertexId]> = gens.iter().map(|g| g.as_slice()).collect();
        Self::from_facets_numbered(n, &refs)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v as usize]
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.labels.iter().position(|l| l == label).map(|i| i as VertexId)
    }

    /// Parses a comma-separated label list such as `a,b,c` into a member-or-not simplex.
    pub fn simplex_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Simplex> {
        let ids = labels
            .iter()
            .map(|l| {
                self.vertex_by_label(l.as_ref())
                    .ok_or_else(|| Error::NotAFace(format!("vertex {}", l.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        Simplex::new(ids)
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_simplices(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.facets.iter().map(Simplex::dim).max()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains(s)
    }

    /// Maximal simplices in lexicographic order.
    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    /// All simplices ordered by dimension, then lexicographically.
    pub fn simplices_sorted(&self) -> Vec<Simplex> {
        let mut all: Vec<Simplex> = self.simplices.iter().cloned().collect();
        all.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
        all
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    /// Number of simplices in each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim().map_or(0, |d| d + 1)];
        for s in &self.simplices {
            f[s.dim()] += 1;
        }
        f
    }

    /// Edges as sorted id pairs, lexicographic.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut e: Vec<_> = self
            .simplices
            .iter()
            .filter(|s| s.dim() == 1)
            .map(|s| (s.vertices()[0], s.vertices()[1]))
            .collect();
        e.sort_unstable();
        e
    }

    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut n: Vec<VertexId> = self
            .edges()
            .into_iter()
            .filter_map(|(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect();
        n.sort_unstable();
        n
    }

    pub fn format_simplex(&self, s: &Simplex) -> String {
        s.vertices().iter().map(|&v| self.label(v)).join(",")
    }

    /// Simplices of dimension at most `k`.
    pub fn skeleton(&self, k: usize) -> SimplicialComplex {
        if self.dim().is_none_or(|d| d <= k) {
            return self.clone();
        }
        let simplices: HashSet<Simplex> = self.simplices.iter().filter(|s| s.dim() <= k).cloned().collect();
        let facets = compute_facets(&simplices);
        SimplicialComplex { labels: self.labels.clone(), simplices, facets }
    }

    /// `lk(σ, K) = {τ ∈ K : τ ∩ σ = ∅, τ ∪ σ ∈ K}`. Vertex labels are kept.
    pub fn link(&self, sigma: &Simplex) -> Result<SimplicialComplex> {
        if !self.contains(sigma) {
            return Err(Error::NotAFace(self.format_simplex_lossy(sigma)));
        }
        let gens: Vec<Simplex> = self
            .facets
            .iter()
            .filter(|f| sigma.is_face_of(f))
            .filter_map(|f| {
                let rest: Vec<VertexId> = f.vertices().iter().copied().filter(|v| !sigma.contains(*v)).collect();
                (!rest.is_empty()).then(|| Simplex::from_sorted(&rest))
            })
            .collect();
        Ok(Self::from_generators(self.labels.clone(), gens))
    }

    /// Sorted facets of the link of a vertex, as id lists in this complex.
    /// Two vertices have equal links iff these lists are equal.
    pub fn vertex_link_facets(&self, v: VertexId) -> Vec<Vec<VertexId>> {
        let mut out: Vec<Vec<VertexId>> = self
            .facets
            .iter()
            .filter(|f| f.contains(v))
            .map(|f| f.vertices().iter().copied().filter(|&w| w != v).collect::<Vec<_>>())
            .filter(|rest| !rest.is_empty())
            .collect();
        out.sort();
        out
    }

    fn format_simplex_lossy(&self, s: &Simplex) -> String {
        s.vertices()
            .iter()
            .map(|&v| self.labels.get(v as usize).cloned().unwrap_or_else(|| format!("#{v}")))
            .join(",")
    }

    /// One component in the 1-skeleton. The empty complex is not connected.
    pub fn is_connected(&self) -> bool {
        if self.labels.is_empty() {
            return false;
        }
        let mut uf = UnionFind::new(self.labels.len());
        for (a, b) in self.edges() {
            uf.union(a as usize, b as usize);
        }
        uf.components() == 1
    }

    /// `Some(m)` when the complex is isomorphic to ∂Δᵐ (m ≥ 1).
    pub fn is_boundary_simplex(&self) -> Option<usize> {
        let n = self.labels.len();
        if n < 2 || self.facets.len() != n {
            return None;
        }
        // n distinct (n-1)-subsets of an n-set are all of them.
        self.facets.iter().all(|f| f.vertices().len() == n - 1).then_some(n - 1)
    }

    /// The same complex with simplices pushed through the vertex permutation
    /// `perm` (`v -> perm[v]`); labels stay attached to ids.
    pub fn permuted(&self, perm: &[VertexId]) -> SimplicialComplex {
        let gens = self.facets.iter().map(|f| f.map(|v| perm[v as usize]).expect("permutation")).collect();
        Self::from_generators(self.labels.clone(), gens)
    }

    /// Graph view of a complex of dimension at most one.
    pub fn to_multigraph(&self) -> Result<Multigraph> {
        if self.dim().is_some_and(|d| d > 1) {
            return Err(Error::Malformed("complex has simplices of dimension > 1".into()));
        }
        let edges = self
            .edges()
            .into_iter()
            .map(|(a, b)| (format!("{}-{}", self.label(a), self.label(b)), a, b))
            .collect();
        Multigraph::from_ids(self.labels.clone(), edges)
    }
}

fn compute_facets(simplices: &HashSet<Simplex>) -> Vec<Simplex> {
    let mut by_dim: BTreeMap<usize, Vec<&Simplex>> = BTreeMap::new();
    for s in simplices {
        by_dim.entry(s.dim()).or_default().push(s);
    }
    let mut covered: HashSet<&Simplex> = HashSet::new();
    let mut facets = Vec::new();
    for (_, layer) in by_dim.iter().rev() {
        for s in layer {
            if !covered.contains(*s) {
                facets.push((*s).clone());
            }
        }
        for s in layer {
            if s.dim() > 0 {
                for i in 0..=s.dim() {
                    let face = s.without(i).unwrap();
                    if let Some(f) = simplices.get(&face) {
                        covered.insert(f);
                    }
                }
            }
        }
    }
    facets.sort();
    facets
}

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    /// Returns false if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }

    pub fn components(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}

/// An edge of a multigraph; `ends.0 < ends.1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub label: String,
    pub ends: (VertexId, VertexId),
}

/// A loopless multigraph `(V, E, boundary)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    vertex_labels: Vec<String>,
    edges: Vec<Edge>,
}

impl Multigraph {
    /// Builds from labels. Vertices are the union of `isolated` and all edge ends.
    pub fn new<S: AsRef<str>>(isolated: &[S], edges: &[(S, S, S)]) -> Result<Self> {
        let mut labels: Vec<String> = isolated.iter().map(|s| s.as_ref().to_string()).collect();
        for (_, u, v) in edges {
            labels.push(u.as_ref().to_string());
            labels.push(v.as_ref().to_string());
        }
        labels.sort_by(|a, b| natural_cmp(a, b));
        labels.dedup();
        let index: HashMap<&str, VertexId> =
            labels.iter().enumerate().map(|(i, l)| (l.as_str(), i as VertexId)).collect();
        let e = edges
            .iter()
            .map(|(id, u, v)| (id.as_ref().to_string(), index[u.as_ref()], index[v.as_ref()]))
            .collect();
        Self::from_ids(labels, e)
    }

    /// `vertex_labels` must already be in natural order.
    pub fn from_ids(vertex_labels: Vec<String>, edges: Vec<(String, VertexId, VertexId)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (label, u, v) in edges {
            if u == v {
                return Err(Error::Malformed(format!("edge {label} is a loop")));
            }
            if u as usize >= vertex_labels.len() || v as usize >= vertex_labels.len() {
                return Err(Error::Malformed(format!("edge {label} has an unknown end")));
            }
            if !seen.insert(label.clone()) {
                return Err(Error::Malformed(format!("duplicate edge id {label}")));
            }
            out.push(Edge { label, ends: (u.min(v), u.max(v)) });
        }
        out.sort_by(|a, b| natural_cmp(&a.label, &b.label));
        Ok(Multigraph { vertex_labels, edges: out })
    }

    /// Multigraph with `multiplicity[i]` parallel copies of `pairs[i]`,
    /// vertices labeled `0..n`, edges labeled `e0, e1, ...`.
    pub fn with_multiplicities(n: usize, pairs: &[(VertexId, VertexId)], multiplicity: &[usize]) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let mut edges = Vec::new();
        for (&(u, v), &m) in pairs.iter().zip(multiplicity) {
            for _ in 0..m {
                edges.push((format!("e{}", edges.len()), u, v));
            }
        }
        Self::from_ids(labels, edges).expect("well-formed multigraph")
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.vertex_labels[v as usize]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    /// Indices of the edges in `E(u, v)`.
    pub fn parallel_class(&self, u: VertexId, v: VertexId) -> Vec<usize> {
        let key = (u.min(v), u.max(v));
        (0..self.edges.len()).filter(|&i| self.edges[i].ends == key).collect()
    }

    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        self.parallel_class(u, v).len()
    }

    pub fn incident_edges(&self, v: VertexId) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].ends.0 == v || self.edges[i].ends.1 == v).collect()
    }

    pub fn other_end(&self, e: usize, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e].ends;
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::new();
        self.edges.iter().all(|e| seen.insert(e.ends))
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_labels.is_empty() {
            return false;
        }
        let mut uf = UnionFind::new(self.vertex_labels.len());
        for e in &self.edges {
            uf.union(e.ends.0 as usize, e.ends.1 as usize);
        }
        uf.components() == 1
    }

    /// Distinct vertex pairs carrying at least one edge, with multiplicities.
    pub fn multiplicities(&self) -> BTreeMap<(VertexId, VertexId), usize> {
        let mut m = BTreeMap::new();
        for e in &self.edges {
            *m.entry(e.ends).or_insert(0) += 1;
        }
        m
    }

    /// The 1-dimensional complex of the underlying simple graph.
    pub fn underlying_complex(&self) -> SimplicialComplex {
        let mut gens: Vec<Simplex> = (0..self.vertex_labels.len() as VertexId).map(Simplex::vertex).collect();
        gens.extend(self.multiplicities().keys().map(|&(u, v)| Simplex::from_sorted(&[u, v])));
        SimplicialComplex::from_generators(self.vertex_labels.clone(), gens)
    }
}

/// A pair of mutually inverse total maps between two vertex sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexBijection {
    forward: Vec<VertexId>,
    backward: Vec<VertexId>,
}

impl VertexBijection {
    pub fn new(forward: Vec<VertexId>) -> Result<Self> {
        let n = forward.len();
        let mut backward = vec![VertexId::MAX; n];
        for (i, &j) in forward.iter().enumerate() {
            if j as usize >= n || backward[j as usize] != VertexId::MAX {
                return Err(Error::Malformed("vertex map is not a bijection".into()));
            }
            backward[j as usize] = i as VertexId;
        }
        Ok(VertexBijection { forward, backward })
    }

    pub fn identity(n: usize) -> Self {
        let forward: Vec<VertexId> = (0..n as VertexId).collect();
        VertexBijection { backward: forward.clone(), forward }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        self.forward[v as usize]
    }

    pub fn apply_inverse(&self, v: VertexId) -> VertexId {
        self.backward[v as usize]
    }

    pub fn forward(&self) -> &[VertexId] {
        &self.forward
    }

    pub fn backward(&self) -> &[VertexId] {
        &self.backward
    }

    pub fn inverse(&self) -> VertexBijection {
        VertexBijection { forward: self.backward.clone(), backward: self.forward.clone() }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &VertexBijection) -> VertexBijection {
        let forward = self.forward.iter().map(|&v| other.apply(v)).collect();
        VertexBijection::new(forward).expect("composition of bijections")
    }

    pub fn map_simplex(&self, s: &Simplex) -> Simplex {
        s.map(|v| self.apply(v)).expect("bijection is injective")
    }

    /// True iff this map is a simplicial isomorphism `k -> l`.
    pub fn is_isomorphism(&self, k: &SimplicialComplex, l: &SimplicialComplex) -> bool {
        if self.len() != k.num_vertices() || self.len() != l.num_vertices() || k.num_simplices() != l.num_simplices() {
            return false;
        }
        k.facets().iter().all(|f| l.facets().binary_search(&self.map_simplex(f)).is_ok())
    }

    /// `label -> label` lines in source vertex order.
    pub fn format_lines(&self, from: &[String], to: &[String]) -> Vec<String> {
        self.forward.iter().enumerate().map(|(i, &j)| format!("{} -> {}", from[i], to[j as usize])).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(k: &SimplicialComplex, s: &Simplex) -> String {
        k.format_simplex(s)
    }

    #[test]
    fn closure_of_triangle() {
        let k = SimplicialComplex::closure([["a", "b", "c"]]).unwrap();
        assert_eq!(k.num_simplices(), 7);
        assert_eq!(k.f_vector(), vec![3, 3, 1]);
        assert_eq!(k.facets().len(), 1);
    }

    #[test]
    fn closure_single_vertex_and_cycle() {
        let k = SimplicialComplex::closure([["a"]]).unwrap();
        assert_eq!(k.num_simplices(), 1);
        let c = SimplicialComplex::closure([["a", "b"], ["b", "c"], ["a", "c"]]).unwrap();
        assert_eq!(c.num_simplices(), 6);
        assert_eq!(c.is_boundary_simplex(), Some(2));
    }

    #[test]
    fn closure_rejects_repeated_vertex() {
        let err = SimplicialComplex::closure([["a", "a", "b"]]).unwrap_err();
        assert!(matches!(err, Error::Malformed(_)));
    }

    #[test]
    fn closure_is_idempotent() {
        let k = SimplicialComplex::closure([vec!["a", "b", "c"], vec!["c", "d"]]).unwrap();
        let again = SimplicialComplex::from_generators(k.labels().to_vec(), k.simplices().cloned().collect());
        assert_eq!(k, again);
    }

    #[test]
    fn skeletons() {
        let t = SimplicialComplex::simplex(2);
        let s1 = t.skeleton(1);
        assert_eq!(s1.f_vector(), vec![3, 3]);
        assert_eq!(t.skeleton(0).num_simplices(), 3);
        assert_eq!(t.skeleton(7), t);
        // 1-skeleton of ∂Δ³ is K₄: every pair of the 4 vertices is an edge.
        let b = SimplicialComplex::boundary_of_simplex(3).skeleton(1);
        assert_eq!(b.edges().len(), 6);
        assert!(b.edges().iter().all(|(u, v)| u < v && *v < 4));
    }

    #[test]
    fn links() {
        let t = SimplicialComplex::closure([["a", "b", "c"]]).unwrap();
        let a = t.simplex_from_labels(&["a"]).unwrap();
        let lk = t.link(&a).unwrap();
        assert_eq!(lk.labels(), &["b".to_string(), "c".to_string()]);
        assert_eq!(lk.f_vector(), vec![2, 1]);

        let c3 = SimplicialComplex::closure([["a", "b"], ["b", "c"], ["a", "c"]]).unwrap();
        let ab = c3.simplex_from_labels(&["a", "b"]).unwrap();
        assert!(c3.link(&ab).unwrap().is_empty());

        for n in 3..7 {
            let c = SimplicialComplex::cycle(n);
            let lk = c.link(&Simplex::vertex(0)).unwrap();
            assert_eq!(lk.f_vector(), vec![2]);
        }
    }

    #[test]
    fn link_of_non_face_is_an_error() {
        let c3 = SimplicialComplex::cycle(3);
        let abc = Simplex::new([0, 1, 2]).unwrap();
        assert!(matches!(c3.link(&abc), Err(Error::NotAFace(_))));
    }

    #[test]
    fn immediate_faces_in_canonical_order() {
        let t = SimplicialComplex::closure([["a", "b", "c", "d"]]).unwrap();
        let abc = t.simplex_from_labels(&["a", "b", "c"]).unwrap();
        let faces: Vec<String> = immediate_faces(&abc).iter().map(|s| labels(&t, s)).collect();
        assert_eq!(faces, ["a,b", "a,c", "b,c"]);
        let ab = t.simplex_from_labels(&["a", "b"]).unwrap();
        assert_eq!(immediate_faces(&ab).len(), 2);
        let abcd = t.simplex_from_labels(&["a", "b", "c", "d"]).unwrap();
        assert_eq!(immediate_faces(&abcd).len(), 4);
        assert!(immediate_faces(&Simplex::vertex(0)).is_empty());
    }

    #[test]
    fn connectivity() {
        assert!(SimplicialComplex::simplex(3).is_connected());
        assert!(SimplicialComplex::cycle(5).is_connected());
        let two = SimplicialComplex::closure([["a"], ["b"]]).unwrap();
        assert!(!two.is_connected());
        assert!(!SimplicialComplex::empty().is_connected());
    }

    #[test]
    fn boundary_detection() {
        assert_eq!(SimplicialComplex::boundary_of_simplex(3).is_boundary_simplex(), Some(3));
        assert_eq!(SimplicialComplex::cycle(3).is_boundary_simplex(), Some(2));
        assert_eq!(SimplicialComplex::simplex(2).is_boundary_simplex(), None);
        assert_eq!(SimplicialComplex::cycle(4).is_boundary_simplex(), None);
    }

    #[test]
    fn natural_order() {
        let mut v = vec!["p10", "p2", "p1", "a", "10", "9"];
        v.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(v, ["9", "10", "a", "p1", "p2", "p10"]);
    }

    #[test]
    fn multigraph_rejects_loops_and_duplicates() {
        assert!(Multigraph::new::<&str>(&[], &[("e", "u", "u")]).is_err());
        assert!(Multigraph::new(&[], &[("e", "u", "v"), ("e", "v", "w")]).is_err());
        let g = Multigraph::new(&[], &[("e1", "u", "v"), ("e2", "u", "v")]).unwrap();
        assert_eq!(g.multiplicity(0, 1), 2);
        assert!(!g.is_simple());
        assert!(g.is_connected());
    }

    #[test]
    fn bijection_inverse() {
        let f = VertexBijection::new(vec![2, 0, 1]).unwrap();
        assert_eq!(f.then(&f.inverse()), VertexBijection::identity(3));
        assert!(VertexBijection::new(vec![0, 0, 1]).is_err());
    }
}
