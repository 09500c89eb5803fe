use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("uniform {u} is beyond the last threshold of a finite schedule ({len} values, no continuation)")]
    ScheduleExhausted { u: f64, len: usize },

    #[error("invalid threshold schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid specification: {0}")]
    InvalidSpecification(String),

    #[error("uniform {u} not covered by levels 0..={cap} (boundary {boundary}); minorants violate the threshold schedule")]
    DominanceViolation { u: f64, cap: usize, boundary: f64 },

    #[error("regeneration search aborted after looking {depth} sites into the past")]
    Aborted { depth: usize },

    #[error("bound is vacuous: tail mass {mass} >= 1, raise the abort depth")]
    BoundVacuous { mass: f64 },

    #[error("coefficient tail sum r_{k} unavailable: {reason}")]
    TailUnavailable { k: usize, reason: String },

    #[error("no admissible k0 <= {k_enum}: 2 C+ r_k0 >= 1 for every candidate")]
    InfeasibleK0 { k_enum: usize },

    #[error("transition operator is reducible or periodic; no unique stationary law")]
    Reducible,
}
