use thiserror::Error;

/// Errors surfaced by the engine. Everything is recoverable; no panics on
/// user input.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("division by zero scalar")]
    DivisionByZero,

    #[error("substitution makes a denominator vanish")]
    VanishingDenominator,

    #[error("syntax error at column {col}: {msg}")]
    Syntax { col: usize, msg: String },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("unknown parameter `{0}` (expected q, u or s)")]
    UnknownParameter(String),

    #[error("generator name `{0}` declared twice")]
    DuplicateName(String),

    #[error("precedence {0} assigned to two generators")]
    DuplicatePrecedence(i64),

    #[error("alphabets share generator name `{0}`")]
    NameCollision(String),

    #[error("relation cannot be oriented: {0}")]
    NotOrientable(String),

    #[error("rewrite rule left side must contain at least two letters")]
    RuleTooShort,

    #[error("rewrite rule right side contains its own left side")]
    RuleNotReduced,

    #[error("two rules share the left side `{0}`")]
    DuplicateRule(String),

    #[error("fuel exhausted after {steps} rewrite steps")]
    FuelExhausted {
        steps: u64,
        /// Steps taken before running out; lets callers resume or report.
        partial: Box<crate::rewrite::ReductionTrace>,
    },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("unknown system `{0}`")]
    UnknownSystem(String),

    #[error("cannot read fixture `{0}`")]
    FixtureUnavailable(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
