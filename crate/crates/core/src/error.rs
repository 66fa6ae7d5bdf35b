use thiserror::Error;

use crate::formulas::FormulaError;
use crate::sets::SetParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    SetLiteral(#[from] SetParseError),
    #[error("{theory} does not provide {capability}")]
    CapabilityMissing { theory: String, capability: String },
    #[error("iteration cap exceeded at {0}")]
    IterationCapExceeded(u64),
    #[error("method {method} is not applicable: {reason}")]
    MethodNotApplicable { method: String, reason: String },
    #[error("predicate {predicate} is not in the signature of {theory}")]
    ForeignPredicate { theory: String, predicate: String },
    #[error("signatures of {0} and {1} overlap")]
    SignatureOverlap(String, String),
    #[error("certificate violates implication {from} => {to}")]
    CertificateClosure { from: String, to: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("registry: {0}")]
    Registry(String),
}

impl Error {
    pub fn missing(theory: &str, capability: impl Into<String>) -> Self {
        Error::CapabilityMissing { theory: theory.to_string(), capability: capability.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
