//! Shared failure type for the degree-by-degree verification routines.

use serde::Serialize;
use thiserror::Error;

/// A verification check that did not hold, with enough context to locate
/// and reproduce the offending degree.
#[derive(Debug, Clone, Error, Serialize)]
#[error("check {check} failed at degree {degree:?}: {detail}")]
pub struct VerifyFailure {
    pub check: String,
    pub degree: Option<usize>,
    pub detail: String,
    /// Machine-readable witness (an offending vector, class, or monomial).
    pub witness: serde_json::Value,
}

impl VerifyFailure {
    pub fn new(
        check: &str,
        degree: impl Into<Option<usize>>,
        detail: impl Into<String>,
        witness: serde_json::Value,
    ) -> Self {
        VerifyFailure {
            check: check.to_string(),
            degree: degree.into(),
            detail: detail.into(),
            witness,
        }
    }
}
