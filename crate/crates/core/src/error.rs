use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A product or morphism image left the carrier budget of its instance.
    #[error("budget exceeded in {instance}: {detail}")]
    BudgetExceeded { instance: String, detail: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot parse element `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("coloring `{coloring}` is not total: no color for {element}")]
    ColoringNotTotal { coloring: String, element: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    pub fn budget(instance: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::BudgetExceeded {
            instance: instance.into(),
            detail: detail.into(),
        }
    }

    pub fn parse(input: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.into(),
            reason: reason.into(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
