use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// ε² = M² removes the quartic term; neither bound nor scattering regime applies.
    #[error("massless shell: |eps^2 - M^2| = {gap:e} is below the degeneracy threshold")]
    MasslessShell { gap: f64 },

    /// A = ((ε² − M²)Σ²)^(1/4) vanishes (α = 0 or ε² = M²).
    #[error("degenerate transform: A = 0 (alpha = 0 or eps^2 = M^2)")]
    DegenerateA,

    #[error("singular point: {0}")]
    Singular(String),

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("no real root on the requested branch over kappa in [{lo}, {hi}]")]
    NoRealRoot { lo: f64, hi: f64 },

    #[error("no bound state found for e in [{lo}, {hi}]")]
    NoBoundState { lo: f64, hi: f64 },

    #[error("{method} did not converge within {budget} iterations")]
    NonConvergence { method: &'static str, budget: usize },

    /// |f| left the representable range during integration; expected off-eigenvalue.
    #[error("solution overflow at r = {r:e} (|f| > 1e100)")]
    Overflow { r: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
