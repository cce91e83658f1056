//! Analogy mining over short product descriptions.
//!
//! Each product is described by two learned vectors: a *purpose* vector (what
//! it does) and a *mechanism* vector (how it does it). This crate holds the
//! pure algorithmic core:
//!
//! - [`corpus`]: tokenization and span-to-token annotation alignment
//! - [`vectors`]: word-vector tables, TF-IDF and annotation-derived targets
//! - [`encoder`]: a bidirectional GRU with purpose/mechanism heads, trained
//!   by backpropagation through time
//! - [`interpret`]: nearest vocabulary words and OMP sparse codes
//! - [`retrieval`]: dual-metric queries, pair ranking, label construction,
//!   keyword search and precision/recall evaluation
//! - [`ideation`]: purpose clustering and mechanism-diverse inspiration sets
//! - [`synth`]: a seeded synthetic corpus with planted purpose/mechanism pools
//!
//! The crate is `no_std` and needs only `alloc`. File formats, logging
//! setup and the command-line driver live in the `analogy` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod corpus;
pub mod encoder;
mod error;
pub mod ideation;
pub mod interpret;
pub mod linalg;
pub mod retrieval;
pub mod synth;
pub mod vectors;

pub use error::{Error, Result};
