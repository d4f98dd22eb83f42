use thiserror::Error;

/// Errors raised by the geometry, mesh and evolution layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point {0:?} lies outside the admissible part of the unit ball")]
    OutsideBall([f64; 3]),
    #[error("parameter out of range: {0}")]
    Domain(String),
    #[error("degenerate facet {0}")]
    DegenerateFacet(usize),
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("volume restoration failed after {iterations} Newton steps (residual {residual:e})")]
    VolumeRestore { iterations: usize, residual: f64 },
    #[error("step rejected after {0} halvings")]
    StepFailure(usize),
    #[error("config error: {0}")]
    Config(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
