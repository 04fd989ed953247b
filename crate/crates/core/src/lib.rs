//! A desk-scale laboratory for partition regularity in finite semigroups and
//! semirings.
//!
//! The crate is organized around five subsystems:
//!
//! * [`algebra`]: finite and windowed carriers with one or two partial binary
//!   operations, axiom validation, homomorphisms, preimages and translates.
//! * [`largeness`]: exact decision procedures for thick / syndetic /
//!   piecewise syndetic / IP_r / IP_r* / combinatorially rich subsets, plus
//!   finite-sum generation and D-set computation.
//! * [`patterns`]: a small term DSL ("{x, y, x+y, x*y}"), instantiation over
//!   a carrier, and monochromatic witness search against a coloring.
//! * [`search`]: avoiding-coloring enumeration with constraint propagation,
//!   monochromatic thresholds, DIMACS CNF export, and experiment presets.
//! * [`constructive`]: executable forms of the constructive proofs: the
//!   thick-and-syndetic pattern constructor, the two-coloring decision-tree
//!   walk, a finite multidimensional intersection checker, and D-set probes.
//!
//! Everything operates on carrier *indices* (`Elem`); windowed structures
//! report out-of-window results as undefined rather than wrapping, and every
//! positive verdict carries a witness that re-verifies by direct evaluation.

pub mod algebra;
pub mod catalog;
pub mod constructive;
pub mod largeness;
pub mod mask;
pub mod patterns;
pub mod search;

/// Canonical index of a carrier element, `0..carrier_size`.
pub type Elem = usize;

pub use algebra::{GroundStructure, Homomorphism, OpKind, StructureKind};
pub use mask::SubsetMask;
