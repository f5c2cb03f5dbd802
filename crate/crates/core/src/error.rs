use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid angular momentum: {0}")]
    InvalidAngularMomentum(String),

    #[error("transition {ground} -> {excited} is not dipole allowed")]
    NotDipoleAllowed { ground: String, excited: String },

    #[error("polarization vector is not unit-normalized (norm {0})")]
    NonUnitPolarization(f64),

    #[error("basis mismatch: {0} vs {1}")]
    BasisMismatch(String, String),

    #[error("invalid mode {0}")]
    InvalidMode(String),

    #[error("Pauli exclusion: mode {0} occupied twice")]
    PauliViolation(String),

    #[error("site {site} out of range for {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("state on site {site} is not dark (residual {residual:.3e})")]
    NotDark { site: usize, residual: f64 },

    #[error("trace drift {drift:.3e} at t = {time}: step size dt = {dt} is too large for this generator")]
    TraceDrift { drift: f64, time: f64, dt: f64 },

    #[error("effective coupling between initial and target state vanishes; no pulse can be defined")]
    ZeroCoupling,

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
