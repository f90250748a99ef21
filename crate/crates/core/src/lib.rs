//! Exact-arithmetic face-number calculus for Minkowski sums of convex
//! polytopes via the Cayley trick.
//!
//! Everything here is computed over arbitrary-precision rationals: convex
//! hulls and face lattices at desk scale, f/h/g-vector transforms, the
//! mixed-face sets of Cayley polytopes and their subset calculus, the
//! recursively defined upper-bound tables with their tightness construction,
//! and a verification engine that checks every equality and inequality the
//! library claims on concrete enumerated instances.

pub mod arith;
pub mod bounds;
pub mod cayley;
pub mod combid;
pub mod construct;
pub mod geom;
pub mod laws;
pub mod minksum;
pub mod subset;
pub mod vectors;

pub use arith::{Int, Matrix, Rational};
pub use subset::Subset;
