use thiserror::Error;

/// Errors produced by the modelling and planning pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("PARSE_ERROR: {0}")]
    Parse(String),
    #[error("INVALID_POLYGON: {0}")]
    InvalidPolygon(String),
    #[error("OVERLAPPING_OBSTACLES: obstacles {0} and {1} intersect")]
    OverlappingObstacles(usize, usize),
    #[error("ANCHOR_IN_OBSTACLE: anchor lies in obstacle {0}")]
    AnchorInObstacle(usize),
    #[error("ANCHOR_OUTSIDE_WORKSPACE: anchor is not inside the workspace")]
    AnchorOutsideWorkspace,
    #[error("OBSTACLE_OUTSIDE_WORKSPACE: obstacle {0} is not contained in the workspace")]
    ObstacleOutsideWorkspace(usize),
    #[error("NONPOSITIVE_TETHER: tether length {0} must be positive and finite")]
    NonpositiveTether(f64),
    #[error("GENERATOR_CONSTRUCTION_FAILED: no admissible ray for obstacle {0}")]
    GeneratorConstructionFailed(usize),
    #[error("INVALID_GENERATOR: {0}")]
    InvalidGenerator(String),
    #[error("INDEX_OUT_OF_RANGE: generator index {index} not in 1..={max}")]
    IndexOutOfRange { index: i32, max: usize },
    #[error("VERTEX_ON_GENERATOR: path vertex {0} lies on a generator ray")]
    VertexOnGenerator(usize),
    #[error("CONNECTIVITY_ERROR: free workspace has {0} connected components")]
    Connectivity(usize),
    #[error("DEGENERATE_INPUT: {0}")]
    DegenerateInput(String),
    #[error("POINT_NOT_IN_FREE_SPACE: ({0}, {1})")]
    PointNotInFreeSpace(f64, f64),
    #[error("SLEEVE_INVALID: {0}")]
    SleeveInvalid(String),
    #[error("NOT_A_SLEEVE: triangles {0} and {1} are not adjacent")]
    NotASleeve(usize, usize),
    #[error("PATH_LEAVES_FREE_SPACE: segment {0} crosses the free-space boundary")]
    PathLeavesFreeSpace(usize),
    #[error("ANCHOR_NOT_IN_FREE_SPACE")]
    AnchorNotInFreeSpace,
    #[error("ELEMENT_NOT_IN_COMPLEX: {0}")]
    ElementNotInComplex(String),
    #[error("LIFT_EXCEEDS_TETHER: class {0:?} of the tether is not in the truncated cover")]
    LiftExceedsTether(String),
    #[error("TETHER_INFEASIBLE: {0}")]
    TetherInfeasible(String),
    #[error("GOAL_UNREACHABLE: ({0}, {1})")]
    GoalUnreachable(f64, f64),
    #[error("ANCHOR_CELL_BLOCKED")]
    AnchorCellBlocked,
    #[error("IO_ERROR: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
