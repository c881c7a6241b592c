use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter was outside its admissible range.
    #[error("invalid `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The stationary density collapses to a point mass (input correlation 1).
    #[error("stationary phase-difference density is degenerate: {0}")]
    DegenerateDensity(&'static str),

    /// A sample statistic cannot be formed because a variable has zero variance.
    #[error("degenerate statistics: {0}")]
    DegenerateStatistics(String),

    #[error("invalid simulation config key `{key}`: {reason}")]
    Config { key: &'static str, reason: String },
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }

    /// True for errors caused by numerically degenerate inputs rather than
    /// out-of-range arguments.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DegenerateDensity(_) | Error::DegenerateStatistics(_)
        )
    }
}

/// Checks an input correlation against `[0, 1]` (or `[0, 1)` when
/// `allow_one` is false).
pub(crate) fn check_correlation(c: f64, allow_one: bool) -> Result<()> {
    if !c.is_finite() || !(0.0..=1.0).contains(&c) {
        return Err(Error::param("c", c, "input correlation must lie in [0, 1]"));
    }
    if !allow_one && c == 1.0 {
        return Err(Error::DegenerateDensity(
            "input correlation c = 1 gives a point mass at zero phase difference",
        ));
    }
    Ok(())
}
