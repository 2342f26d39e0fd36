use thiserror::Error;

/// Errors raised across the crate.
///
/// Variants split into domain errors (bad inputs, empty windows, unsupported
/// requests) and numerical failures; [`Error::is_numerical`] tells them apart
/// so front ends can map them to distinct exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid subgraph: {0}")]
    InvalidSubgraph(String),

    #[error("invalid graphon: {0}")]
    InvalidGraphon(String),

    #[error("{name} = {value} is outside {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("block evaluation needs {terms} terms, budget is {budget}")]
    BudgetExceeded { terms: u128, budget: u64 },

    #[error("no admissible edge count at n = {n} with |2m/n^2 - {epsilon}| < {delta}")]
    EmptyWindow { n: usize, epsilon: f64, delta: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("did not converge: {0}")]
    NonConvergence(String),
}

impl Error {
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence(_))
    }

    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Rejects values outside the closed unit interval (and NaN).
pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::domain(name, value, "[0, 1]"))
    }
}

/// Rejects values outside the open unit interval (and NaN).
pub(crate) fn check_open_unit(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(name, value, "(0, 1)"))
    }
}

pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(name, value, "finite reals"))
    }
}
