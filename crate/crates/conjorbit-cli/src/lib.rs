//! Support library for the `conjorbit` command-line driver: matrix file
//! I/O, the angle-map/symbol catalog, and the reproducible verification
//! suite with its JSON report format.

pub mod files;
pub mod report;
pub mod suite;
pub mod symbolspec;
