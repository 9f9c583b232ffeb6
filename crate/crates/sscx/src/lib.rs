//! Subsemigroup complexes of finite semigroups, specialized for the aperiodic
//! Brandt semigroups B(n).
//!
//! The crate has three layers:
//!
//! - exact machinery for arbitrary small finite semigroups: multiplication
//!   tables ([`semigroup`]), subsemigroup lattices ([`lattice`]), and the
//!   brute-force subsemigroup complex with its boolean-representability
//!   toolkit ([`complex`]);
//! - the dictionary between subsemigroups of B(n) and binary relations
//!   ([`relation`]);
//! - graph-theoretic fast paths for H(B(n)): separating-edge peeling, facet
//!   enumeration, and facet-count bounds ([`brandt`]).
//!
//! Every fast path is cross-checked against the brute-force oracle in the
//! test suite; `verify` bundles those checks into named, reportable suites.

pub mod brandt;
pub mod complex;
pub mod error;
pub mod lattice;
pub mod relation;
pub mod semigroup;
pub mod set;
pub mod verify;

pub use error::{Error, Result};
pub use set::ElementSet;
