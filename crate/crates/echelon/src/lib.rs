//! Echelonmotion and rowmotion on finite posets and lattices.
//!
//! The library computes echelonmotion (the bijection extracted from the Bruhat
//! decomposition of a poset's order matrix with respect to a linear extension),
//! several flavors of rowmotion on distributive, semidistributive, and trim
//! lattices, Dedekind-MacNeille completions, and exact-arithmetic linear algebra
//! underpinning all of it.  A verification harness (`suites`) re-checks the
//! structural identities relating these maps on exhaustively enumerated and
//! sampled inputs.
//!
//! All element indices are 0-based throughout the API and in the JSON poset
//! format; the comma-separated extension and bijection arrays in [`io`] are
//! 1-based.

pub mod bits;
pub mod echelon;
pub mod extension;
pub mod families;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod macneille;
pub mod poset;
pub mod suites;
pub mod trim;

pub use extension::{ElementBijection, LinearExtension};
pub use lattice::Lattice;
pub use poset::Poset;
