use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial of degree {0} has no roots")]
    NoRoots(usize),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("not a removable quotient: jet residual {residual:e} at z = {at}")]
    NotRemovable { residual: f64, at: String },

    #[error("type C fiber at z = {0}: no period")]
    TypeCFiber(String),

    #[error("degenerate fiber at z = {0}: all coefficients vanish")]
    DegenerateFiber(String),

    #[error("parabolic fiber at z = {0}: double root, no multiplier")]
    Parabolic(String),

    #[error("not holomorphic: negative power z^{power} survives with coefficient modulus {modulus:e}")]
    NotHolomorphic { power: i32, modulus: f64 },

    #[error("degenerate zero: {0}")]
    Degenerate(String),

    #[error("escape/blow-up before segment end: segment {segment}, tau = {tau}")]
    Escape { segment: usize, tau: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Numerical failures (exit code 2) as opposed to validation or
    /// precondition failures (exit code 1).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_) | Error::Escape { .. })
    }
}
