use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty range: {0}")]
    EmptyRange(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole: {0}")]
    Pole(String),

    /// Invalid kernel, integrand or abscissa parameters.
    #[error("invalid parameters: {0}")]
    Spec(String),

    #[error("insufficient precision: {0}")]
    PrecisionInsufficient(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// Two closed forms that should agree up to a constant do not.
    #[error("inconsistent closed forms: {0}")]
    Errata(String),
}

pub type Result<T> = std::result::Result<T, Error>;
