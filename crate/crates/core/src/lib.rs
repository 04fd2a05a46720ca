//! Exact combinatorics of root systems, (extended) affine Weyl groups and
//! alcoves, together with the nonemptiness criterion for affine
//! Deligne-Lusztig varieties `X_x(b)` at Iwahori level with `b` basic.
//!
//! Everything is computed with integers and exact rationals. The group is
//! modelled in the adjoint case, `W̃ = P∨ ⋊ W₀`, so the Kottwitz map lands in
//! `P∨/Q∨` (and its σ-coinvariants).
//!
//! Module map:
//!
//! * [`cartan`]: root systems, coweights, closed/radical/parabolic subsets.
//! * [`weyl`]: the finite Weyl group, diagram automorphisms, supports.
//! * [`iwahori`]: the Iwahori-Weyl group, length, Kottwitz and Newton maps.
//! * [`alcove`]: k-values, critical strips, `η_σ(x)`, `Φ_x` and `W_x`.
//! * [`criterion`]: the σ-support criterion, the `(J,w)_σ`-alcove oracle,
//!   `B(G)_x` for `v·t^μ`, defects and dimension formulas.
//! * [`notation`]: text notation for elements and JSON-ready records.

pub mod alcove;
pub mod cartan;
pub mod criterion;
mod error;
pub mod iwahori;
mod linalg;
pub mod notation;
pub mod weyl;

pub use error::{Error, Result};

/// Exact rational scalar used throughout.
pub type Q = num_rational::Ratio<i64>;
