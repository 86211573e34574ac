//! Tricolor DAGs (TDAGs): rooted, acyclic feature graphs whose nodes and
//! arcs each carry one of three constraint strengths — red (essential),
//! yellow (may be ignored, must not be violated), green (defeasible).
//!
//! The crate provides the TDAG algebra (color-extended subsumption and
//! unification), the semantic-transfer operations that gradually relax a
//! source TDAG (the "painter" plus yellow/green additions), constraint
//! extraction with the C₀/C₊/C₋/C_new partition of translation quality,
//! a path-equation grammar layer, and a color-aware generation algorithm
//! whose successful outputs always sit between the red core of the input
//! and its fully saturated form under subsumption.
//!
//! The core is `no_std` (alloc only); text formats and the CLI live in
//! the companion `tricolor` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod color;
pub mod generator;
pub mod grammar;
pub mod partition;
pub mod subsume;
pub mod tdag;
pub mod transfer;
mod unify;

pub use color::Color;
pub use subsume::{iso_equal, subsumes};
pub use tdag::{Arc, ArcId, BuildError, Node, NodeId, Tdag, TdagBuilder, Violation};
pub use unify::{unify, UnifyConflict, UnifyFailure, UnifyOutcome};
