//! File formats, pipeline stages and the `analogy` command-line tool built on
//! [`analogy_core`].

pub mod cli;
pub mod config;
mod error;
pub mod formats;
pub mod pipeline;

pub use analogy_core as core;
pub use error::{FormatError, Result};
