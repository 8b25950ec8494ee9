//! Line-delimited store of classified rank-3 matroids, with a query language
//! and whole-store analyses.

pub mod classify;
pub mod io;
pub mod pipeline;
pub mod query;
pub mod record;

pub use classify::{classify, classify_all, classify_record, ClassifyOptions};
pub use io::{read_file, read_records, write_file, write_records, RecordWriter, Store, StoreError};
pub use pipeline::{generate_into, generate_records, stats, terao_pipeline, tutte_unique_within, GenTarget, TeraoReport};
pub use query::{count, query, Query, QueryError};
pub use record::{Flags, MatroidRecord, Representability, Witness, SCHEMA_VERSION};
