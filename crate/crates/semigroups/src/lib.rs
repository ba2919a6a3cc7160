//! Computations in finite semigroups: Green's relations and eggbox data,
//! dominions with verifiable zigzag certificates, pseudoidentity checks,
//! Rees matrix semigroups, and semiautomaton enlargements.
//!
//! Semigroups are dense multiplication tables over 0-based element indices.
//! Everything is immutable after construction, so values can be shared
//! freely between threads; all searches are deterministic, with ties broken
//! by least element index.

pub mod catalog;
pub mod cli;
pub mod construct;
pub mod corpus;
pub mod dominion;
pub mod error;
pub mod green;
pub mod io;
pub mod pseudo;
pub mod semigroup;
pub mod suite;
pub mod transform;

pub use error::{Error, Result};
pub use semigroup::{FiniteSemigroup, Subset};
