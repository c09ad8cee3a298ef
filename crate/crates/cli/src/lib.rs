//! Command-line layer over the resonator library: argument parsing, config
//! resolution, output emission, and the embedded benchmark/selftest suites.

pub mod args;
pub mod commands;
pub mod config;
pub mod emit;
pub mod selftest;
pub mod svg;
pub mod table1;
