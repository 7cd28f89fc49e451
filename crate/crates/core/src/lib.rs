//! Finite-scale machinery for halting probabilities of oracle, monotone and
//! infinitary self-delimiting machines.
//!
//! Everything is exact: measures are [`bits::Dyadic`] values, interval
//! endpoints in the Martin-Löf test are big rationals, and class measures are
//! computed by exhaustive enumeration at a declared depth.

pub mod bits;
pub mod stagewise;
pub mod machines;
pub mod measure;
pub mod constructions;
