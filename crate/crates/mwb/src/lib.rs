//! Command-line front end for `mwb-core`: descriptor and factor codecs, the
//! seeded verification suites, and command dispatch.

pub mod cli;
pub mod codec;
pub mod verify;
