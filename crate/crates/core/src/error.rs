use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("size limit exceeded: {what} = {got}, limit {limit}")]
    Size {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("mapping error: variable {var} occurs in {count} terms (at most 2 supported)")]
    VariableMultiplicity { var: usize, count: usize },

    #[error("gauge operator {site} overlaps plaquette {plaquette} in an odd number of links")]
    OddOverlap { site: usize, plaquette: usize },

    #[error("random graph generation failed after {attempts} attempts; try a different seed")]
    Generation { attempts: usize },

    #[error("divergence at iteration {iteration}: link {link} has w = {value}")]
    Divergence {
        iteration: usize,
        link: usize,
        value: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical consistency check failed: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
