use std::fmt;

/// Which of the stabbed-L preconditions an instance failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assumption {
    /// The stabbing line must cross every path.
    LineCrossesAll,
    /// Every corner must lie strictly left of the stabbing line.
    CornerLeftOfLine,
    /// Two distinct intersecting paths must meet in exactly one point.
    SinglePointContact,
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            Assumption::LineCrossesAll => "i",
            Assumption::CornerLeftOfLine => "ii",
            Assumption::SinglePointContact => "iii",
        };
        f.write_str(tag)
    }
}

/// Segment orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orientation::Horizontal => f.write_str("horizontal"),
            Orientation::Vertical => f.write_str("vertical"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("segment {0} is not stabbed by any ray")]
    InfeasibleSegment(usize),
    #[error("ray {0} is not stabbed by any segment")]
    InfeasibleRay(usize),
    #[error("target {0} meets no candidate")]
    InfeasibleTarget(usize),
    #[error("constraint {0} meets no candidate")]
    InfeasibleConstraint(usize),
    #[error("instance is infeasible")]
    Infeasible,
    #[error("size {size} exceeds cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("assumption ({which}) violated by ids {ids:?}")]
    AssumptionViolation { which: Assumption, ids: Vec<usize> },
    #[error("{0} projections are not a proper interval family")]
    NotProper(Orientation),
    #[error("row {0} falls below the threshold in every part")]
    UncoveredRow(usize),
    #[error("invalid path {0}")]
    InvalidPath(usize),
    #[error("no valid instance after {0} attempts")]
    GenerationExhausted(usize),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors that mean "no solution exists" rather than "bad data".
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::InfeasibleSegment(_)
                | Error::InfeasibleRay(_)
                | Error::InfeasibleTarget(_)
                | Error::InfeasibleConstraint(_)
                | Error::Infeasible
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
