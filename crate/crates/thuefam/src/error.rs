//! Error type shared by the whole pipeline, mapped onto process exit codes
//! by the CLI layer.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller passed arguments outside an operation's domain.
    #[error("usage: {0}")]
    Usage(String),

    /// The current working precision cannot certify the requested result.
    /// Retryable: double the precision and recompute.
    #[error("insufficient precision: {context}")]
    InsufficientPrecision {
        context: String,
        /// Rough estimate of extra mantissa bits needed, when one is available.
        hint_bits: Option<u32>,
    },

    /// The precision ladder hit the configured cap without certifying.
    #[error("precision cap of {cap} bits exhausted while {context}")]
    PrecisionCap { cap: u32, context: String },

    /// No convergent produced a certified positive epsilon.
    #[error("reduction failed for n={n}, type {j}: {reason}")]
    ReductionFailed { n: u32, j: u8, reason: String },

    /// A certified computation contradicts a proved statement. Never
    /// retryable; indicates a genuine defect somewhere.
    #[error("integrity check failed: {0}")]
    Integrity(String),

    /// The lattice quality gate c^2 > T^2 + S failed for the given C = 10^exponent.
    #[error("lattice gate failed at C = 10^{exponent}: reduced basis too short")]
    GateFailed { exponent: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn insufficient(context: impl Into<String>) -> Self {
        Error::InsufficientPrecision {
            context: context.into(),
            hint_bits: None,
        }
    }

    pub fn insufficient_hint(context: impl Into<String>, hint_bits: u32) -> Self {
        Error::InsufficientPrecision {
            context: context.into(),
            hint_bits: Some(hint_bits),
        }
    }

    /// Exit code contract: 0 success, 1 mathematical failure, 2 usage error,
    /// 3 precision cap exhausted.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::PrecisionCap { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Runs `f` at doubling precisions starting from `start` until it succeeds or
/// the cap is passed. Only `InsufficientPrecision` triggers a retry; other
/// errors propagate unchanged.
pub fn with_precision_ladder<T>(
    start: u32,
    cap: u32,
    context: &str,
    mut f: impl FnMut(u32) -> Result<T>,
) -> Result<T> {
    let mut prec = start.max(16);
    loop {
        match f(prec) {
            Err(Error::InsufficientPrecision { .. }) => {
                let next = prec.saturating_mul(2);
                if next > cap {
                    return Err(Error::PrecisionCap {
                        cap,
                        context: context.to_string(),
                    });
                }
                prec = next;
            }
            other => return other,
        }
    }
}
