//! IO, file formats, acceptance checks and the `ratnorm` command line for
//! [`ratnorm_core`].

pub mod checks;
pub mod cli;
pub mod dto;
pub mod error;
pub mod report;
pub mod space;
pub mod sweep;

pub use ratnorm_core as core;
