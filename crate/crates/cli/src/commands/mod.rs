pub mod ingest;
pub mod plot;
pub mod run;
pub mod stats;
