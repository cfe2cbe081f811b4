//! Std companion of `su3-rwc-core`: floating point oracle, disk cache,
//! reference tables, output formats and verification suites behind the CLI.

pub mod cache;
pub mod format;
pub mod oracle;
pub mod reference;
pub mod verify;
