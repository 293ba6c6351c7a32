use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A denominator factor vanished while evaluating a series or coefficient.
    #[error("pole: factor `{factor}` vanishes at index {index}")]
    Pole { factor: String, index: usize },

    /// A parameter set lies on the excluded (non-generic) variety.
    #[error("non-generic parameters: `{factor}` vanishes at index {index}")]
    Genericity { factor: String, index: usize },

    /// Favard-style nondegeneracy failure of a polynomial family.
    #[error("degenerate family: `{factor}` vanishes at index {index}")]
    Nondegeneracy { factor: String, index: usize },

    #[error("malformed series: {0}")]
    Shape(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("invalid rational literal {0:?}")]
    Parse(String),

    #[error("matrix is singular")]
    Singular,

    /// Every resampling attempt for one battery slot was non-generic.
    #[error("no generic parameter set after {attempts} attempts; last failure: {last}")]
    GenericityExhausted { attempts: usize, last: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Re-labels a pole as a genericity failure, used by constructors that
    /// probe every denominator up front.
    pub fn into_genericity(self) -> Error {
        match self {
            Error::Pole { factor, index } => Error::Genericity { factor, index },
            other => other,
        }
    }
}

/// Divides `num / den`, reporting `factor` if the denominator is zero.
pub(crate) fn quot(num: Scalar, den: &Scalar, factor: &str, index: usize) -> Result<Scalar> {
    if den.is_zero() {
        return Err(Error::Pole {
            factor: factor.to_string(),
            index,
        });
    }
    Ok(num / den)
}

/// Fails with a genericity error when `value` is zero.
pub(crate) fn require_nonzero(value: &Scalar, factor: &str, index: usize) -> Result<()> {
    if value.is_zero() {
        Err(Error::Genericity {
            factor: factor.to_string(),
            index,
        })
    } else {
        Ok(())
    }
}
