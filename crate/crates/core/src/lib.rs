//! Interdisciplinary citation analysis: node embeddings, citation prediction
//! and citation-distance analytics over labeled citation graphs.

pub mod analysis;
pub mod distance;
pub mod embeddings;
pub mod error;
pub mod graph;
pub mod linkpred;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use graph::{CitationGraph, Edge};

pub type Embedding = embeddings::EmbeddingMatrix<f32>;
pub type EmbeddingF64 = embeddings::EmbeddingMatrix<f64>;
pub type Classifier = linkpred::Mlp<f32>;
pub type ClassifierF64 = linkpred::Mlp<f64>;
