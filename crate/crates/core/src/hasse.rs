//! Hasse diagrams of face posets and regular pairs.
//!
//! Simplicial complexes and multigraphs are both flattened into a
//! [`HasseDiagram`]: numbered cells with dimensions and immediate faces. All of
//! the Morse machinery works on this one representation.

use std::collections::HashMap;
use std::fmt;

use crate::complex::{immediate_faces, Multigraph, Simplex, SimplicialComplex, VertexId};

pub type CellId = u32;
pub type PairId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cell {
    Simplex(Simplex),
    /// An edge of a multigraph, by its index in [`Multigraph::edges`].
    Edge { edge: usize, ends: (VertexId, VertexId) },
}

impl Cell {
    pub fn dim(&self) -> usize {
        match self {
            Cell::Simplex(s) => s.dim(),
            Cell::Edge { .. } => 1,
        }
    }

    /// Vertex ids of the closed cell.
    pub fn vertices(&self) -> Vec<VertexId> {
        match self {
            Cell::Simplex(s) => s.vertices().to_vec(),
            Cell::Edge { ends, .. } => vec![ends.0, ends.1],
        }
    }
}

/// A cover relation `σ ≺ τ` viewed as a primitive Morse function.
///
/// Field order makes the derived ordering `(index, source, target)`, which is
/// lexicographic on the canonical vertex sequences since cells are numbered by
/// dimension first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegularPair {
    pub index: usize,
    pub source: CellId,
    pub target: CellId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Complex,
    Multigraph,
}

#[derive(Clone)]
pub struct HasseDiagram {
    origin: Origin,
    vertex_labels: Vec<String>,
    edge_labels: Vec<String>,
    cells: Vec<Cell>,
    faces: Vec<Vec<CellId>>,
    cofaces: Vec<Vec<CellId>>,
    covers: Vec<RegularPair>,
    pair_index: HashMap<(CellId, CellId), PairId>,
    cell_index: HashMap<Cell, CellId>,
}

impl fmt::Debug for HasseDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HasseDiagram")
            .field("cells", &self.cells.len())
            .field("covers", &self.covers.len())
            .finish()
    }
}

impl HasseDiagram {
    pub fn of_complex(k: &SimplicialComplex) -> Self {
        let cells: Vec<Cell> = k.simplices_sorted().into_iter().map(Cell::Simplex).collect();
        Self::build(Origin::Complex, k.labels().to_vec(), Vec::new(), cells, |cell, index| match cell {
            Cell::Simplex(s) => immediate_faces(s).into_iter().map(|f| index[&Cell::Simplex(f)]).collect(),
            Cell::Edge { .. } => unreachable!(),
        })
    }

    pub fn of_multigraph(g: &Multigraph) -> Self {
        let mut cells: Vec<Cell> = (0..g.num_vertices() as VertexId).map(|v| Cell::Simplex(Simplex::vertex(v))).collect();
        cells.extend(g.edges().iter().enumerate().map(|(i, e)| Cell::Edge { edge: i, ends: e.ends }));
        let edge_labels = g.edges().iter().map(|e| e.label.clone()).collect();
        Self::build(Origin::Multigraph, g.vertex_labels().to_vec(), edge_labels, cells, |cell, index| match cell {
            Cell::Simplex(_) => Vec::new(),
            Cell::Edge { ends, .. } => vec![
                index[&Cell::Simplex(Simplex::vertex(ends.0))],
                index[&Cell::Simplex(Simplex::vertex(ends.1))],
            ],
        })
    }

    fn build(
        origin: Origin,
        vertex_labels: Vec<String>,
        edge_labels: Vec<String>,
        cells: Vec<Cell>,
        faces_of: impl Fn(&Cell, &HashMap<Cell, CellId>) -> Vec<CellId>,
    ) -> Self {
        let cell_index: HashMap<Cell, CellId> = cells.iter().enumerate().map(|(i, c)| (c.clone(), i as CellId)).collect();
        let faces: Vec<Vec<CellId>> = cells.iter().map(|c| faces_of(c, &cell_index)).collect();
        let mut cofaces = vec![Vec::new(); cells.len()];
        let mut covers = Vec::new();
        for (t, fs) in faces.iter().enumerate() {
            for &s in fs {
                cofaces[s as usize].push(t as CellId);
                covers.push(RegularPair { index: cells[s as usize].dim(), source: s, target: t as CellId });
            }
        }
        for c in &mut cofaces {
            c.sort_unstable();
        }
        covers.sort();
        let pair_index = covers.iter().enumerate().map(|(i, p)| ((p.source, p.target), i as PairId)).collect();
        HasseDiagram { origin, vertex_labels, edge_labels, cells, faces, cofaces, covers, pair_index, cell_index }
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, c: CellId) -> &Cell {
        &self.cells[c as usize]
    }

    pub fn cell_id(&self, cell: &Cell) -> Option<CellId> {
        self.cell_index.get(cell).copied()
    }

    pub fn simplex_id(&self, s: &Simplex) -> Option<CellId> {
        self.cell_id(&Cell::Simplex(s.clone()))
    }

    pub fn dim_of(&self, c: CellId) -> usize {
        self.cells[c as usize].dim()
    }

    /// Immediate faces of a cell.
    pub fn faces(&self, c: CellId) -> &[CellId] {
        &self.faces[c as usize]
    }

    pub fn cofaces(&self, c: CellId) -> &[CellId] {
        &self.cofaces[c as usize]
    }

    /// All cover relations, sorted by `(index, source, target)`.
    pub fn covers(&self) -> &[RegularPair] {
        &self.covers
    }

    pub fn num_pairs(&self) -> usize {
        self.covers.len()
    }

    pub fn pair(&self, p: PairId) -> RegularPair {
        self.covers[p as usize]
    }

    pub fn pair_id(&self, source: CellId, target: CellId) -> Option<PairId> {
        self.pair_index.get(&(source, target)).copied()
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    /// The vertex id of a 0-cell.
    pub fn vertex_of(&self, c: CellId) -> Option<VertexId> {
        match &self.cells[c as usize] {
            Cell::Simplex(s) if s.dim() == 0 => Some(s.vertices()[0]),
            _ => None,
        }
    }

    /// Cell id of the 0-cell of vertex `v`.
    pub fn vertex_cell(&self, v: VertexId) -> CellId {
        self.simplex_id(&Simplex::vertex(v)).expect("vertex present")
    }

    pub fn format_cell(&self, c: CellId) -> String {
        match &self.cells[c as usize] {
            Cell::Simplex(s) => s.vertices().iter().map(|&v| self.vertex_labels[v as usize].as_str()).collect::<Vec<_>>().join(","),
            Cell::Edge { edge, .. } => self.edge_labels[*edge].clone(),
        }
    }

    pub fn format_pair(&self, p: PairId) -> String {
        let pair = self.pair(p);
        format!("({} -> {})", self.format_cell(pair.source), self.format_cell(pair.target))
    }
}

/// The primitive Morse functions of the diagram: one per cover.
pub fn primitive_pairs(diagram: &HasseDiagram) -> &[RegularPair] {
    diagram.covers()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_covers() {
        let d = HasseDiagram::of_complex(&SimplicialComplex::simplex(1));
        let shown: Vec<String> = (0..d.num_pairs() as PairId).map(|p| d.format_pair(p)).collect();
        assert_eq!(shown, ["(0 -> 0,1)", "(1 -> 0,1)"]);
    }

    #[test]
    fn cover_counts() {
        let d = HasseDiagram::of_complex(&SimplicialComplex::simplex(2));
        assert_eq!(d.num_pairs(), 9);
        assert_eq!(d.covers().iter().filter(|p| p.index == 0).count(), 6);
        let g = Multigraph::new(&[], &[("e", "u", "v"), ("f", "u", "v")]).unwrap();
        assert_eq!(HasseDiagram::of_multigraph(&g).num_pairs(), 4);
    }

    #[test]
    fn cover_count_formula() {
        let k = SimplicialComplex::from_facets_numbered(5, &[&[0, 1, 2, 3], &[2, 4], &[3, 4]]);
        let expected: usize = k.simplices().filter(|s| s.dim() >= 1).map(|s| s.dim() + 1).sum();
        assert_eq!(HasseDiagram::of_complex(&k).num_pairs(), expected);
    }

    #[test]
    fn covers_are_sorted_by_index_then_cells() {
        let d = HasseDiagram::of_complex(&SimplicialComplex::simplex(3));
        assert!(d.covers().windows(2).all(|w| w[0] < w[1]));
        for p in d.covers() {
            assert_eq!(p.index + 1, d.dim_of(p.target));
            assert!(d.faces(p.target).contains(&p.source));
        }
    }
}
