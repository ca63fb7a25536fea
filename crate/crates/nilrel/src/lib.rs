//! Workbench for finite nilpotent monoids built from word sets.
//!
//! The pipeline: build a Rees quotient of a free monoid from a finite set of
//! words, decide equational properties of the resulting finite monoid, build
//! and verify scheme families from chain/maelstrom/crown words, decide whether
//! a scheme comes from a term, and run the two positive reconstruction
//! algorithms (kappa-limited monoids and the six-letter spine monoid).

pub mod asabtb;
pub mod families;
pub mod identities;
pub mod impossibility;
pub mod mak;
pub mod monoid;
pub mod schemes;
pub mod words;
