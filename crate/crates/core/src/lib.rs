//! Profiling social-media reaction to 51% attacks on proof-of-work
//! cryptocurrencies.
//!
//! The crate is organised as a pipeline:
//!
//! * [`corpus`] ingests JSONL/CSV message corpora, cleans them and cuts them
//!   into whole / attack / benchmark datasets per event.
//! * [`timeline`] holds the attack timeline and resolves data windows.
//! * [`sentiment`] scores valence and builds (negative, neutral, positive)
//!   profiles.
//! * [`emotion`] scores five emotions and builds intensity, volume and
//!   32-cell combination profiles.
//! * [`analytics`] computes volumetrics, daily series, peak days, heat maps
//!   and intensity tables.
//! * [`trigger`] compares live windows against a benchmark baseline and
//!   raises alerts.
//!
//! Every operation is a pure function over immutable inputs.

pub mod analytics;
pub mod corpus;
pub mod emotion;
mod error;
pub mod lexicon;
pub mod pipeline;
pub mod sentiment;
pub mod timeline;
pub mod trigger;

pub use error::{Error, Result};
