use thiserror::Error;

/// Errors reported by kernel evaluation, solving, simulation and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The oscillatory quadrature is only trusted for alpha in [0.3, 2);
    /// alpha = 2 is served by the Gaussian closed form.
    #[error("alpha = {0} is outside the quadrature range [0.3, 2)")]
    UnsupportedAlpha(f64),

    #[error(
        "quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e} \
         after {panels} panels"
    )]
    QuadratureNonConvergence {
        achieved: f64,
        requested: f64,
        panels: usize,
    },

    /// The dilated and the effective-time evaluation of the drift kernel
    /// must agree; a mismatch indicates a numerical fault.
    #[error("kernel route mismatch: dilated {dilated:.6e}, reduced {reduced:.6e}, allowed {allowed:.3e}")]
    RouteMismatch {
        dilated: f64,
        reduced: f64,
        allowed: f64,
    },

    #[error(
        "derivative cross-check failed: quadrature {primary:.6e}, finite differences {check:.6e}, \
         allowed {allowed:.3e}"
    )]
    DerivativeCrossCheck {
        primary: f64,
        check: f64,
        allowed: f64,
    },

    #[error(
        "grid headroom violated: the input grid must extend to {required:.3} \
         but only reaches {available:.3}; enlarge the input half-width"
    )]
    GridHeadroom { required: f64, available: f64 },

    #[error("tail mass budget exceeded: estimated {estimated:.3e} > budget {budget:.3e}")]
    TailMassBudget { estimated: f64, budget: f64 },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("{0} is not a declared continuity point of the initial data")]
    NotContinuityPoint(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
