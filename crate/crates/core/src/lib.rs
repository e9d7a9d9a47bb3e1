//! Exact echelon data on lattices over a local polynomial ring: validation,
//! echelon decompositions, echelon modifications and their poly-echelon
//! iterates, with determinant bookkeeping and a deterministic text/JSON layer.

pub mod echelon;
pub mod invariants;
pub mod io;
pub mod lattice;
pub mod modification;
pub mod poly;
pub mod polyechelon;
