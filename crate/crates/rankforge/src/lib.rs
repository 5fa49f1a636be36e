//! rankforge: a desk-scale laboratory for rank-metric codes.
//!
//! The crate builds, encodes and cross-checks three families of rank-metric
//! codes over small prime fields:
//!
//! - classical Gabidulin codes, in both their matrix and vector
//!   representations ([`gabidulin`]);
//! - MRD codes assembled purely from circular-shift operations over `F_q`,
//!   together with every equivalence and difference checker that relates
//!   them back to Gabidulin codes ([`circmrd`]);
//! - a generalization of Gabidulin codes obtained by summing and stacking
//!   several short Gabidulin codes ([`circmrd::GeneralizedCode`]).
//!
//! Exact XOR/multiplication counting for the encoders lives in [`analysis`].
//! Everything is brute-force verifiable at desk scale; enumeration caps keep
//! the library from walking off a cliff.
//!
//! Start with the runnable walkthroughs:
//!
//! ```text
//! cargo run --example field_tour
//! cargo run --example gabidulin_two_views
//! cargo run --example circulant_mrd
//! cargo run --example code_equivalences
//! cargo run --example fast_encoding_xor_count
//! ```
//!
//! A thin `rankforge` binary exposes the same operations as subcommands
//! (`construct`, `encode`, `verify-mrd`, `compare`, `bench`, `examples`).

pub mod analysis;
pub mod circmrd;
pub mod cli;
pub mod field;
pub mod gabidulin;
pub mod linalg;
pub mod tables;

pub use field::{FieldElement, FieldSpec, Poly};
pub use linalg::{MatFq, MatFqm};
