//! Combinatorial front projections of Legendrian graphs and the complete
//! classification machinery for topologically trivial Θ-embeddings.
//!
//! A front is encoded as a Morse event word: an ordered list of left cusps,
//! right cusps, crossings and vertex events acting on a stack of horizontal
//! strands. All invariants (Thurston–Bennequin, rotation, coorientation
//! signs) are computed exactly over the integers and half-integers.

pub mod classify;
pub mod cli;
pub mod frontdiagram;
pub mod halfint;
pub mod jsonutil;
pub mod moves;
pub mod planar;
pub mod realize;

pub use frontdiagram::{CycleStep, CycleTraversal, Dir, Event, FrontDiagram, ThetaInvariants};
pub use halfint::HalfInt;
