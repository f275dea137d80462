use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures split into two families: bad inputs (`is_validation`) and
/// numerical breakdown during a run.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no double well: A = {a} must be positive")]
    NoDoubleWell { a: f64 },

    #[error("supersonic kink unsupported: v = {v} >= v0 = {v0}")]
    Supersonic { v: f64, v0: f64 },

    #[error("degenerate or single-well: fewer than 3 real roots (|sigma| = {sigma} >= 2/(3*sqrt 3))")]
    DegenerateCubic { sigma: f64 },

    #[error("no propagating damped kink at sigma = 0")]
    NoPropagatingKink,

    #[error("null boost singular: v_s^2 = {vs_squared}")]
    NullBoost { vs_squared: f64 },

    #[error("unstable time step: dt = {dt:e} exceeds bound {bound:e} ({reason})")]
    StepBound { dt: f64, bound: f64, reason: &'static str },

    #[error("blow-up detected at step {step}")]
    BlowUp { step: usize },

    #[error("subcritical: Q imaginary (C = {c} < 25)")]
    Subcritical { c: f64 },

    #[error("insufficient trace: {len} samples, need at least 3")]
    InsufficientTrace { len: usize },

    #[error("ADM mass singular: k = {k} <= 2")]
    AdmSingular { k: f64 },

    #[error("integrator tolerance exceeded at step {step}: {detail}")]
    IntegratorTolerance { step: usize, detail: String },

    #[error("step-size error at step {step}: norm drift {drift:e} exceeds 1e-3 after refinement")]
    StepSize { step: usize, drift: f64 },

    #[error("Gaussian ansatz breakdown at t = {t}: G lost positive definiteness")]
    AnsatzBreakdown { t: f64 },

    #[error("infrared-divergent in 1+1 dimensions: m_eff must be positive")]
    InfraredDivergent,

    #[error("quadrature did not converge: worst point x = {x}, t = {t}, error estimate {err:e}")]
    Quadrature { x: f64, t: f64, err: f64 },

    #[error("not yet asymptotic: fit residual {residual:e} exceeds 1e-3")]
    NotAsymptotic { residual: f64 },
}

impl Error {
    /// True for errors caused by the inputs rather than by the integration.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::BlowUp { .. }
                | Error::IntegratorTolerance { .. }
                | Error::StepSize { .. }
                | Error::AnsatzBreakdown { .. }
                | Error::Quadrature { .. }
                | Error::NotAsymptotic { .. }
                | Error::Subcritical { .. }
        )
    }
}

pub(crate) fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}
