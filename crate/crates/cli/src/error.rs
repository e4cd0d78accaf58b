use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Material(Box<casimir_film::Error>),

    #[error("computation failed at {row}: {source}")]
    Numerical {
        row: String,
        #[source]
        source: Box<casimir_film::Error>,
    },

    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn material(e: casimir_film::Error) -> Self {
        CliError::Material(Box::new(e))
    }

    pub fn numerical(row: impl Into<String>, source: casimir_film::Error) -> Self {
        CliError::Numerical {
            row: row.into(),
            source: Box::new(source),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Material(_) => 3,
            CliError::Numerical { .. } => 4,
            CliError::Output(_) => 5,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}
