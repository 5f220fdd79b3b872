//! Embedded, file-backed table store with half-open time-range queries.
//!
//! Layout under a data directory:
//!
//! ```text
//! <data_dir>/credentials          lines of `user:password`
//! <data_dir>/<database>/<table>.seg
//! ```
//!
//! Each `.seg` file is append-only. Rows are little-endian `i64` timestamps
//! followed by the row's `f64` values, grouped in blocks. Every committed batch
//! ends with a footer listing all blocks (offset, row count, first and last
//! timestamp) and a checksummed trailer pointing at it, so a reader that finds
//! a valid trailer at the end of the file sees a complete batch.

mod connection;
mod csv_ingest;
mod error;
mod segment;

pub use connection::{connect_server, ingest_csv, query_data, Connection, ConnectionConfig, TableHandle};
pub use csv_ingest::{parse_csv, write_csv};
pub use error::{Result, StoreError};
pub use segment::QueryStats;
