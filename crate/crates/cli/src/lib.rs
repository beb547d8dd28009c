//! Command-line orchestration of the citation-analysis pipeline:
//! ingest, split, embed, train, evaluate, measure distances, analyze, report.

pub mod cli;
pub mod commands;
pub mod config;
pub mod data;
pub mod manifest;
pub mod report;
pub mod stage;
