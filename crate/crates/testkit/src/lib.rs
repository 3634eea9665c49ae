//! Test-only support: independent oracles and synthetic corpora.
//!
//! Nothing here depends on the `gatemplate` library, so the oracles stay
//! independent of the code they check.

pub mod brute;
pub mod kn;
pub mod synth;

use std::path::PathBuf;

/// Path of a file under the workspace `data/` directory.
pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data_path(name)).unwrap_or_else(|e| panic!("reading data/{name}: {e}"))
}
