//! Moduli spaces of smooth tropical plane curves.
//!
//! The pipeline runs from lattice polygons ([`lattice`]) through their
//! regular unimodular triangulations ([`triangulate`]) and secondary cones
//! ([`cone`]) to skeleton graphs ([`skeleton`]), moduli cones and censuses
//! ([`moduli`]), and realizability probabilities ([`volume`]).

pub mod arith;
pub mod cone;
pub mod error;
pub mod lattice;
pub mod lp;
pub mod moduli;
pub mod skeleton;
pub mod triangulate;
pub mod volume;

pub use error::{Error, Result};
