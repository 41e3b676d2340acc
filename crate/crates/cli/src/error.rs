use ncg_core::NcgError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid scenario: {0}")]
    Schema(String),
    #[error("numerical ambiguity: {0}")]
    Ambiguity(NcgError),
    #[error("internal failure: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Ambiguity(_) => 3,
            CliError::Internal(_) => 1,
        }
    }

    /// Errors raised while turning scenario data into core objects.
    pub fn input(e: NcgError) -> Self {
        if e.is_numerical_ambiguity() {
            CliError::Ambiguity(e)
        } else {
            CliError::Schema(e.to_string())
        }
    }

    /// Errors raised by the computation itself.
    pub fn compute(e: NcgError) -> Self {
        if e.is_numerical_ambiguity() {
            CliError::Ambiguity(e)
        } else {
            CliError::Internal(e.to_string())
        }
    }
}
