//! Everything around the `psg-core` algorithms that touches the outside
//! world: JSONL and checkpoint files, the Codeforces fetcher, experiment
//! runs and reports, and the `psg` command line.

pub mod checkpoint;
pub mod cli;
pub mod config;
pub mod error;
pub mod experiment;
pub mod fetch;
pub mod io;
pub mod report;
pub mod synth;

pub use error::{PsgError, Result};
