//! Complexes of discrete Morse functions.
//!
//! Build the Morse complex `𝔐(K)` of a finite simplicial complex or
//! multigraph (vertices: regular pairs, simplices: acyclic matchings), decide
//! isomorphism of Morse complexes, and turn an isomorphism `𝔐(K) ≅ 𝔐(L)` back
//! into an explicit isomorphism `K ≅ L`.

pub mod budget;
pub mod complex;
pub mod corpus;
pub mod error;
pub mod forest;
pub mod fpath;
pub mod hasse;
pub mod invariants;
pub mod io;
pub mod iso;
pub mod morse;
pub mod reconstruct;
pub mod verify;

pub use budget::{Budget, Parallelism};
pub use complex::{immediate_faces, Multigraph, Simplex, SimplicialComplex, VertexBijection, VertexId};
pub use error::{Error, Result};
pub use hasse::{primitive_pairs, HasseDiagram, PairId, RegularPair};
pub use iso::{find_isomorphism, SetSystem};
pub use morse::{compatible, is_acyclic, is_matching, morse_complex, morse_complex_of_multigraph, MorseComplex};
pub use reconstruct::{find_morse_isomorphism, reconstruct_complex_iso, reconstruct_graph_iso, MorseIso};
