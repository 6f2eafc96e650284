//! Library side of the `submod` command: file formats and the benchmark
//! driver, shared with the integration tests.

pub mod bench;
pub mod io;
