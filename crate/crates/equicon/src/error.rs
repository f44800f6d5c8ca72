use thiserror::Error;

/// Errors produced by construction, projection, and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("latitude {0} rad is outside [-pi/2, pi/2]")]
    InvalidLatitude(f64),

    #[error("coordinate is not finite")]
    NonFiniteCoordinate,

    #[error("points are antipodal; the midpoint is not unique")]
    AntipodalPoints,

    #[error("degenerate spherical triangle: {0}")]
    DegenerateTriangle(String),

    /// The Menelaus obstruction: a flat or deficient angle sum admits no
    /// spherical triangle.
    #[error("not a spherical triangle: angle sum {sum_rad} rad does not exceed pi")]
    AngleSumNotSpherical { sum_rad: f64 },

    #[error("no spherical triangle has these angles: {0}")]
    InvalidAngles(String),

    #[error("standard parallels must satisfy phi1 < phi2, got {phi1} >= {phi2} (rad)")]
    ParallelOrder { phi1: f64, phi2: f64 },

    #[error("cone constant {n} is outside (0, 1]; the given parallels do not define a north-apex cone")]
    InvalidConeConstant { n: f64 },

    #[error("latitude {phi} rad is not usable as a standard parallel: {reason}")]
    InvalidStandardParallel { phi: f64, reason: &'static str },

    #[error("latitude {lat} rad lies beyond the cone apex (C = {apex_offset} rad)")]
    BeyondApex { lat: f64, apex_offset: f64 },

    #[error("plane point ({x}, {y}) is outside the image of the projection domain: {reason}")]
    OutsideImage { x: f64, y: f64, reason: &'static str },

    #[error("scale factors are unbounded at latitude {lat} rad")]
    SingularLatitude { lat: f64 },

    #[error("operation requires the conic branch, got {got}")]
    WrongBranch { got: &'static str },

    #[error("invalid annulus: {0}")]
    InvalidAnnulus(String),

    #[error("grid step must be positive, got {0}")]
    InvalidGridStep(f64),

    #[error("apex colatitude target must lie in (0, 45) degrees, got {target_deg}")]
    InvalidApexTarget { target_deg: f64 },

    #[error(
        "apex colatitude {target_deg} deg is unreachable in this band; attainable range is [{lo_deg}, {hi_deg}] deg"
    )]
    ApexTargetUnreachable {
        target_deg: f64,
        lo_deg: f64,
        hi_deg: f64,
    },

    #[error("{path}:{line}: {msg}")]
    Csv { path: String, line: u64, msg: String },

    #[error("polyline {id:?} has fewer than 2 points")]
    PolylineTooShort { id: String },

    #[error("invalid render configuration: {0}")]
    InvalidRenderConfig(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
