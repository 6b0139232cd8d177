//! File formats, random system generation and benchmark drivers behind the
//! `subsq` binary. Kept as a library so integration tests can drive the
//! experiments without spawning processes.

pub mod experiments;
pub mod generate;
pub mod sysfile;
