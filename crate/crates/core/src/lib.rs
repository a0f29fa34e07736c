//! Quantum mechanics over sets: the vector spaces `Z2^n` read as subsets of a
//! universe, with exact rational probabilities throughout.
//!
//! The modules follow the usual order of the theory: linear algebra over
//! `Z2` ([`gf2`]), kets and brackets ([`setspace`]), partitions and logical
//! entropy ([`partitions`]), attributes as observables ([`attributes`]),
//! density matrices ([`density`]), nonsingular dynamics ([`dynamics`]),
//! product universes and Bell ([`entangle`]), and quantum computing over `Z2`
//! ([`qc2`], with the circuit language in [`dsl`]).

pub mod attributes;
pub mod density;
pub mod dsl;
pub mod dynamics;
pub mod entangle;
pub mod error;
pub mod gf2;
pub mod partitions;
pub mod presets;
pub mod prob;
pub mod qc2;
pub mod setspace;

pub use error::{Error, Result};
pub use gf2::{BitVec, Gf2Matrix};
pub use prob::{Probability, Rational};
pub use setspace::{BasisFrame, SubsetKet, Universe};
