use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("mode q={q} is not a half-integer in (0, {n})")]
    ModeOutOfRange { q: f64, n: usize },

    #[error("eigensolver did not converge for the {dim}x{dim} matrix")]
    EigenSolverFailed { dim: usize },

    #[error("time step {dt} does not resolve the fastest frequency; need dt <= {bound}")]
    TimeStepTooCoarse { dt: f64, bound: f64 },

    #[error("time {0} must be finite and non-negative")]
    InvalidTime(f64),

    #[error("no charging occurred: the stored energy vanishes identically")]
    NoCharging,

    #[error("trace has no local maximum on [{t_start}, {t_end}]")]
    NoLocalMaximum { t_start: f64, t_end: f64 },

    #[error("recurrence window [{t_min}, {t_max}] is not covered by the trace")]
    WindowOutsideTrace { t_min: f64, t_max: f64 },

    #[error("parameter grid is empty")]
    EmptyGrid,

    #[error("chain of {n_sites} sites is outside the supported range: {reason}")]
    SizeOutOfRange {
        n_sites: usize,
        reason: &'static str,
    },

    #[error("Bogoliubov angle undefined: dispersion {eps:e} underflows")]
    AngleUndefined { eps: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTime(t))
    }
}
