//! Field-level university rankings built on the IFQ²A composite index, and
//! concordance analysis between ranking systems.
//!
//! The pipeline runs in stages, each in its own module:
//!
//! - [`corpus`]: load publications and journal quartiles, apply a time window
//! - [`taxonomy`]: fields as unions of subject categories; per-field corpora
//! - [`indicators`]: NDOC, NCIT, H, %1Q, ACIT and TOPCIT per institution
//! - [`composite`]: QNIF, QLIF, IFQ²A and quadrant classification
//! - [`ranking`]: league tables, including interval ranks such as `201-300`
//! - [`concordance`]: Spearman's rho and top-|S| agreement between systems
//!
//! [`app`] wires the stages into the `validate`, `rank`, `quadrant` and
//! `compare` commands of the `unirank` binary.

pub mod app;
pub mod composite;
pub mod concordance;
pub mod config;
pub mod corpus;
pub mod error;
pub mod indicators;
pub mod output;
pub mod ranking;
pub mod taxonomy;

pub use error::{Error, Result};
