use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error(
        "quadrature did not converge: value {value:e}, estimated error {abs_err:e} after {evaluations} evaluations"
    )]
    Quadrature {
        value: f64,
        abs_err: f64,
        evaluations: usize,
    },

    #[error("Matsubara sum not converged after {terms} terms (tail estimate {tail:e}, partial sum {partial:e})")]
    MatsubaraNotConverged { terms: usize, tail: f64, partial: f64 },

    #[error("differentiation step collapsed at {variable} = {at:e} (step {step:e})")]
    StepCollapse { variable: &'static str, at: f64, step: f64 },

    #[error("invalid material '{name}': {detail}")]
    InvalidMaterial { name: String, detail: String },

    #[error("material '{0}' not found")]
    MaterialNotFound(String),

    #[error("failed to parse materials file {path}: {source}")]
    MaterialParse {
        path: String,
        #[source]
        source: toml::de::Error,
    },

    #[error("failed to serialize material: {0}")]
    MaterialSerialize(#[from] toml::ser::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        op,
        detail: detail.into(),
    }
}
