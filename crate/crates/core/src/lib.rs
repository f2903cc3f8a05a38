//! h-index analytics for researcher citation profiles.
//!
//! * [`corpus`]: profile and citation-corpus ingestion, validation, exclusions.
//! * [`indices`]: h, fractional h_m and derived ratios.
//! * [`fitting`]: Hirsch, Egghe-Rousseau and Glänzel-Schubert power-law fits,
//!   log-log correlation, χ² profiles and prediction intervals.
//! * [`deviation`]: δh / δh_m against a reference Egghe-Rousseau curve.
//! * [`citestats`]: ccdf, Lorenz curve, age profile and the expected h(P) curve.
//! * [`synth`]: seeded synthetic populations for validating the fits.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod citestats;
pub mod corpus;
pub mod deviation;
pub mod error;
pub mod fitting;
pub mod indices;
pub mod optimize;
pub mod quantile;
pub mod synth;

pub use error::{Error, Result};
