//! Experiment runner for `musielak-core`: JSON configs, seeded instance
//! families, parallel campaigns, and JSON/CSV reports.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod campaigns;
pub mod config;
mod error;
pub mod instances;
pub mod io;
pub mod report;

pub use error::{Error, Result};
