//! Exact computations in the Heisenberg group `H = UT3(Z)` and in groups of
//! unitriangular matrices over products of integer polynomial rings.

pub mod formula;
pub mod group;
pub mod nilform;
pub mod reprs;
pub mod rings;
pub mod ut3;
pub mod zlattice;

pub use group::Group;
pub use rings::{parse_element, parse_ring, Retraction, Ring, RingDesc, RingElem, RingError};
pub use ut3::{Generator, UT3Elem, UT3Group};
pub use zlattice::{Lattice, LatticeError};
