use thiserror::Error;

/// Which leg of the mechanism an inverse-kinematics failure refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Leg {
    One,
    Two,
}

impl Leg {
    pub fn index(self) -> usize {
        match self {
            Leg::One => 0,
            Leg::Two => 1,
        }
    }
}

impl std::fmt::Display for Leg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Leg::One => f.write_str("leg 1"),
            Leg::Two => f.write_str("leg 2"),
        }
    }
}

/// Why a leg's inverse kinematics has no admissible solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LegFailure {
    /// The end point is farther than the bar length from the actuator axis.
    NoRealRoot { distance_to_axis: f64 },
    /// The selected root lies outside `[rho_min, rho_max]`.
    StrokeViolation { rho: f64 },
}

impl std::fmt::Display for LegFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            LegFailure::NoRealRoot { distance_to_axis } => {
                write!(f, "point is {distance_to_axis} away from the actuator axis, beyond the bar length")
            }
            LegFailure::StrokeViolation { rho } => {
                write!(f, "required stroke {rho} lies outside the actuator limits")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("actuator strokes ({0}, {1}) outside the stroke limits")]
    StrokeOutOfRange(f64, f64),

    #[error("loop cannot close: elbow distance {distance} outside [{min}, {max}]")]
    NoAssembly { distance: f64, min: f64, max: f64 },

    #[error("structural singularity: elbows C and D coincide")]
    StructuralSingularity,

    #[error("no inverse kinematic solution for {leg}: {failure}")]
    NoSolution { leg: Leg, failure: LegFailure },

    #[error("actuator axes are parallel; posture is not determined by bar angles")]
    ParallelAxes,

    #[error("parallel singularity: det(A) = {det}")]
    ParallelSingular { det: f64 },

    #[error("serial singularity: det(B) = {det}")]
    SerialSingular { det: f64 },

    #[error("matrix is singular")]
    Singular,

    #[error("condition number undefined for the zero matrix")]
    UndefinedCondition,

    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("no feasible cell: useful zone is empty")]
    EmptyZone,

    #[error("operation requires a {expected} atlas")]
    WrongSpace { expected: &'static str },

    #[error("design {index}: {source}")]
    DesignFailed { index: usize, source: Box<Error> },

    #[error("designs are not comparable: {0}")]
    IncomparableDesigns(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
