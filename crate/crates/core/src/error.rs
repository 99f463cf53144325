use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A model specification violates one of its invariants.
    #[error("invalid model: {0}")]
    InvalidSpec(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("potential is not finite at node {node} (x = {x})")]
    NonFinitePotential { node: usize, x: f64 },

    #[error("potential never reaches {bound} before x = 1e6; check the model parameters")]
    DomainBoundNotReached { bound: f64 },

    #[error("inverse iteration did not converge for eigenvalue index {index}")]
    NoConvergence { index: usize },

    #[error("requested {requested} eigenvalues from an operator of size {size}")]
    TooManyLevels { requested: usize, size: usize },

    #[error("|E + mc^2| = {0} is too small to recover the lower spinor component")]
    DegenerateEnergy(f64),

    #[error("negative squared energy {e2} at level {n}; the discretization failed")]
    NegativeEnergySquared { n: usize, e2: f64 },
}

impl Error {
    /// True for errors caused by bad input rather than by a failed computation.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::InvalidSpec(_)
                | Error::InvalidGrid(_)
                | Error::TooManyLevels { .. }
        )
    }
}
