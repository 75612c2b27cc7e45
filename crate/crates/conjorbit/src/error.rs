//! Error type shared by all modules of the library.

/// Library-wide error type.
///
/// Operations validate their numerical preconditions (unitarity, symmetry,
/// involutivity, grid shape, …) and report the measured residual together
/// with the tolerance that was violated, so callers can distinguish
/// "mathematically ineligible input" from plain shape errors.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Incompatible or invalid shapes (dimensions, grid sizes, index ranges).
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A numerical precondition failed: `property` names the violated
    /// contract, `residual` the measured deviation, `tol` the threshold.
    #[error("{property} violated: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    Validation {
        property: String,
        residual: f64,
        tol: f64,
    },

    /// An iterative kernel did not converge within its sweep budget.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// Input is outside the domain an operation supports
    /// (e.g. eigenvalue collision below the resolvable gap).
    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// A mathematical domain error (non-invertible map piece, negative
    /// density, undefined principal branch, …).
    #[error("domain error: {0}")]
    Domain(String),
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand for a [`Error::Validation`] value.
    pub fn validation(property: impl Into<String>, residual: f64, tol: f64) -> Self {
        Error::Validation {
            property: property.into(),
            residual,
            tol,
        }
    }
}
