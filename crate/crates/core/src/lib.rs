//! Exact computations on the group-cohomological side of twisted orbifold
//! correspondences.
//!
//! Classes in `H²(G, ℂ*)` are represented by normalized 2-cocycles with values
//! in a finite group of roots of unity, written additively as exponents in
//! `Z_m`. On top of that the crate decides membership in the unramified
//! subgroup `B₀(G)` and in the subgroup `B_G(U)` attached to a linear action
//! model `U = V ∖ Z`, and evaluates twisted orbifold dimension sums.
//!
//! Module map:
//!
//! * [`grp`]: finite groups as dense Cayley tables.
//! * [`cyclo`]: exact arithmetic in cyclotomic fields and linear algebra over them.
//! * [`zmod`]: Howell and Smith forms over `Z_m`.
//! * [`cocycle`]: 2-cocycles, coboundaries, small Schur multipliers, twisted group algebras.
//! * [`rep`]: matrix representations, fixed subspaces, linear action models.
//! * [`brauer`]: `L_g` characters, `B₀`, `B_G(U)`, span analysis, orbifold dimensions.
//! * [`bogomolov`]: the order-`p⁷` example group with its model and class catalog.
//! * [`io`]: JSON file formats shared with the `tbk` binary.
//! * [`cli`]: commands and reports behind the `tbk` binary.

pub mod bogomolov;
pub mod brauer;
pub mod cli;
pub mod cocycle;
pub mod cyclo;
pub mod error;
pub mod grp;
pub mod io;
pub mod rep;
pub mod zmod;

pub use error::{Error, Result};
