use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("point {index} has a non-finite coordinate")]
    NonFinitePoint { index: usize },
    #[error("rectangle must have min < max on both axes")]
    InvalidRect,
    #[error("polygon needs at least 3 distinct vertices")]
    TooFewVertices,
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(&'static str),
    #[error("polygon is not simple")]
    SelfIntersectingPolygon,
    #[error("obstacles {first} and {second} overlap or touch")]
    OverlappingObstacles { first: usize, second: usize },
    #[error("segment endpoint lies strictly inside an obstacle")]
    EndpointInsideObstacle,
    #[error("no obstacle-free path between the two points")]
    NoPath,
    #[error("every candidate center has infinite cost")]
    CenterUndefined,
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("cell count m = {0} is not a perfect square")]
    NonSquareM(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("point {index} lies outside the configured scene bounds")]
    PointOutsideBounds { index: usize },
    #[error("region has no points")]
    EmptyRegion,
    #[error("unknown point id {0}")]
    UnknownPointId(usize),
    #[error("k = {k} exceeds the number of points ({n})")]
    KTooLarge { k: usize, n: usize },
    #[error("label sequences differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("{}: file contains no data", .0.display())]
    EmptyFile(PathBuf),
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Bad input or parameters, as opposed to a failure while running.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::Io { .. } | Error::NoPath | Error::CenterUndefined
        )
    }
}
