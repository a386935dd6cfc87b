//! Exact computations in the endomorphism algebra of a finite lattice.
//!
//! The crate builds finite lattices (from cover relations or named
//! generators), enumerates their join-morphisms, and computes the central
//! idempotent `e_T^tot` of `End_{kℒ}(T)` that acts as the identity on maps
//! with totally ordered image. Two independent constructions of that
//! idempotent are provided, along with a [`verify`] harness that checks their
//! algebraic properties exhaustively on small lattices.
//!
//! ```
//! use std::sync::Arc;
//! use latidem::{generate, idempotent_direct, RingSpec};
//!
//! let diamond = Arc::new(generate("boolean:2").unwrap());
//! let e = idempotent_direct(&diamond, RingSpec::Integers, false);
//! assert_eq!(e.mul(&e).unwrap(), e);
//! assert_eq!(e.len(), 3);
//! ```

pub mod algebra;
pub mod error;
pub mod generate;
pub mod idempotent;
pub mod io;
pub mod lattice;
pub mod morphism;
pub mod poset;
pub mod ring;
pub mod verify;

pub use algebra::FormalSum;
pub use error::{Bound, Error, Result};
pub use generate::{generate, Descriptor, GenerateOptions};
pub use idempotent::{
    f_of_chain, idempotent_direct, idempotent_original, j_upper, mu_chain_infinity,
    mu_chain_infinity_oracle, mu_family,
};
pub use lattice::{ChainFamilyKind, Lattice};
pub use morphism::{
    alpha_of_chain, compose, enumerate_join_endomorphisms, enumerate_join_maps,
    families_over_chain, j_of_family, pi_of_chain, FamilyOverChain, JoinMap,
};
pub use poset::{Chain, IntervalKind, Poset};
pub use ring::{Coeff, RingSpec};
