//! Library surface of the CLI: claims table, report document, suite rows.
//! The binary in `main.rs` is a thin argument-parsing layer over these.

pub mod claims;
pub mod report;
pub mod suite;
