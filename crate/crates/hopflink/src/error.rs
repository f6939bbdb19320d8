//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the geometric pipeline.
///
/// Variants are grouped by the module that raises them; all of them
/// describe either invalid input data or a geometric degeneracy.
#[derive(Debug, Clone, Error)]
pub enum Error {
    // quaternions & rotations
    #[error("quaternion is not unit length (|q| = {norm})")]
    NonUnit { norm: f64 },
    #[error("matrix is not a rotation: {reason}")]
    NotRotation { reason: String },
    #[error("adjacent rotation samples differ by {angle} rad, exceeding the step bound {bound}")]
    StepTooLarge { angle: f64, bound: f64 },
    #[error("set of quaternions is not a subgroup: {reason}")]
    NotSubgroup { reason: String },

    // round links
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("circles are not linked (linking number 0)")]
    NotLinked,
    #[error("disc planes are parallel")]
    ParallelPlanes,
    #[error("disc chords do not overlap: no arc of intersection")]
    EmptyIntersection,

    // retraction
    #[error("configuration does not satisfy the normal-form conditions: {0}")]
    NotInY(String),
    #[error("stage postcondition failed: {0}")]
    PostconditionFailed(String),
    #[error("loop is not closed up to relabelling/reorientation")]
    NotClosed,

    // PL geometry
    #[error("invalid polyline: {0}")]
    InvalidPolyline(String),
    #[error("invalid triangle mesh: {0}")]
    InvalidMesh(String),
    #[error("curves pass within {dist} of each other; Gauss sum unreliable")]
    TooClose { dist: f64 },
    #[error("no transverse height found in the search range")]
    NoTransverseHeight,
    #[error("mesh is not transverse to the ellipsoid at this height")]
    NotTransverse,
    #[error("intersection pattern has {count} mixed-sign chords, expected exactly one")]
    NoMixedChord { count: usize },

    // chord diagrams
    #[error("chords {0} and {1} cross inside the disc")]
    CrossingChords(usize, usize),
    #[error("pattern has {count} mixed-sign chords, expected exactly one")]
    WrongAlphaCount { count: usize },
    #[error("chord {0} is not innermost")]
    NotInnermost(usize),
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    // Grassmannian
    #[error("vectors are not an orthonormal pair: {reason}")]
    NotOrthonormal { reason: String },
    #[error("point lies within {dist} of the projection pole")]
    PoleProximity { dist: f64 },

    // I/O and configuration
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl Error {
    /// Process exit code used by the command-line tool: 1 for input or
    /// configuration problems, 2 for geometric degeneracies.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::Json(_) => 1,
            _ => 2,
        }
    }
}
