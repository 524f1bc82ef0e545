//! Support library for the `pprank` binary: seeded graph generation, file
//! I/O with run manifests, and the embedded selftest suite.

pub mod gen;
pub mod io;
pub mod selftest;
