//! Exact q-series toolkit for replicable functions.
//!
//! The crate is organised bottom-up:
//!
//! * [`qseries`], [`intseries`], [`modular`]: truncated Laurent series with
//!   exact rational coefficients and the classical oracles (η, E4, Δ, j).
//! * [`frames`]: partitions, frame shapes, eta products and the degree-24
//!   multiplicative classification.
//! * [`faber`], [`grunsky`]: Faber polynomials and Grunsky coefficients, each
//!   computed by several independent routes.
//! * [`replicable`], [`norton`]: replicability, replication powers and the
//!   Norton basis reduction.
//! * [`hecke`], [`mahler`]: weight-0 and twisted Hecke operators and the
//!   p = 2 coefficient recurrences.
//! * [`numerology`], [`verify`]: small closed checks and the suite driver used
//!   by the command-line tool.

pub mod arith;
pub mod error;
pub mod faber;
pub mod frames;
pub mod function;
pub mod grunsky;
pub mod hecke;
pub mod intseries;
pub mod mahler;
pub mod modular;
pub mod norton;
pub mod numerology;
pub mod qseries;
pub mod replicable;
pub mod verify;

pub use error::{Error, Result};
pub use faber::FaberPolynomial;
pub use frames::{FrameShape, Partition};
pub use function::FunctionSpec;
pub use grunsky::GrunskyTable;
pub use qseries::{exp, exp_frac, Exponent, QSeries};
pub use replicable::ReplicationFamily;
