//! Tethered-robot path planning on a truncated universal cover of the free
//! workspace.

pub mod baseline;
pub mod cli;
pub mod cover;
pub mod environment;
pub mod error;
pub mod geometry;
pub mod homotopy;
pub mod planner;
pub mod render;
pub mod triangulation;

pub use cover::{build_complex, CoverComplex};
pub use environment::{load_environment, validate, Environment, Generator, ValidatedEnvironment};
pub use error::{Error, Result};
pub use geometry::{Point, Polygon, Polyline};
pub use homotopy::{signature_of_path, Signature};
pub use planner::{plan, rank_homotopy_classes, PlanQuery, PlanResult};
pub use triangulation::{dual_graph, triangulate, DualGraph, Triangulation};
