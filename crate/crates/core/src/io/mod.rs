//! Snapshot ingestion, polytope files and the benchmark harness.

pub mod bench;
pub mod polytope_file;
pub mod snapshot;

pub use polytope_file::{project_file, PolytopeFile};
pub use snapshot::{load_snapshot, parse_snapshot, SnapshotFile};
