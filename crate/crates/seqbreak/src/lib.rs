//! Storage, generators and the `seqbreak` command-line tool on top of
//! [`seqbreak_core`].

pub mod catalog;
pub mod cli;
pub mod format;
pub mod generate;

pub use seqbreak_core as core;
