use thiserror::Error;

/// Errors shared across the solver library.
///
/// Arithmetic is checked everywhere: anything that would wrap a 128-bit signed
/// integer, exceed a table budget, or blow past an enumeration guard surfaces
/// as an error instead of silently degrading.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input text; `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A value or index left the wide-integer range, or a kernel was asked for
    /// a transform it cannot represent exactly.
    #[error("capacity exceeded: {context}")]
    Capacity { context: String },

    /// The level-table memory estimate exceeds the configured byte budget.
    #[error("estimated table memory {estimated_bytes} bytes exceeds budget {budget_bytes} bytes")]
    Budget {
        estimated_bytes: u128,
        budget_bytes: u64,
    },

    /// An exhaustive-enumeration helper was invoked outside its guarded range.
    #[error("enumeration guard: {message}")]
    Guard { message: String },

    /// An internal invariant failed; indicates a bug, not a bad input.
    #[error("internal invariant violated: {message}")]
    Internal { message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn capacity(context: impl Into<String>) -> Self {
        Error::Capacity {
            context: context.into(),
        }
    }

    pub(crate) fn guard(message: impl Into<String>) -> Self {
        Error::Guard {
            message: message.into(),
        }
    }

    pub(crate) fn internal(message: impl Into<String>) -> Self {
        Error::Internal {
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
