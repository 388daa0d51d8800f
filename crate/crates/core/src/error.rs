use core::fmt;

/// Errors surfaced by the algebraic layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreError {
    /// Division by the zero element of the coefficient field.
    DivisionByZero,
    /// Leading-term queries on the zero polynomial.
    NoLeadingTerm,
    /// Basis computation received only zero generators.
    ZeroIdealInput,
    /// A polynomial does not live over the ring or ranking it was used with.
    RingMismatch(&'static str),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::DivisionByZero => write!(f, "division by zero in \u{1d542}"),
            CoreError::NoLeadingTerm => write!(f, "no leading term"),
            CoreError::ZeroIdealInput => write!(f, "zero ideal input"),
            CoreError::RingMismatch(what) => write!(f, "ring/ranking mismatch: {what}"),
        }
    }
}

#[cfg(test)]
impl std::error::Error for CoreError {}
