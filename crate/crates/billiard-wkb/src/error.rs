use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),
    #[error("ray hits a corner near s = {s}")]
    CornerAmbiguity { s: f64 },
    #[error("grazing hit near s = {s}")]
    Grazing { s: f64 },
    #[error("ray does not reach the boundary")]
    NoIntersection,
    #[error("phase constant is not constant over the segment (spread {spread:e})")]
    DeltaNotConstant { spread: f64 },
    #[error("image of the bundle has a non-constant incidence")]
    NonConstantIncidence,
    #[error("unsupported bundle family: {0}")]
    UnsupportedBundleFamily(String),
    #[error("contour side does not match the signature")]
    ContourSignatureMismatch,
    #[error("orbit trace did not close")]
    TraceNotClosed,
    #[error("no root bracketed: {0}")]
    RootNotBracketed(String),
    #[error("side lengths are not commensurate: {0}")]
    IncommensurateSides(String),
    #[error("sample x = {x} sits on a focal point")]
    SampleAtFocalPoint { x: f64 },
    #[error("zero scan exhausted for order {m}")]
    ScanExhausted { m: u32 },
    #[error("quadrature did not converge (error estimate {estimate:e})")]
    QuadratureNotConverged { estimate: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("malformed data: {0}")]
    Format(String),
    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Error {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Error {
        Error::Format(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
