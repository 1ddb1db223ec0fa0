//! Command implementations behind the `tactile` binary: scene files, trace
//! replay to image files, calibration compositing, scenario generation and
//! the timing benchmark.

mod bench;
mod commands;
mod scenario;
mod scene_file;
mod timing;

pub use bench::{run_bench, BenchRun, BenchSpec, BENCH_BODY_RADIUS};
pub use commands::{
    cmd_bench, cmd_composite, cmd_demo, cmd_render, cmd_validate, frame_file_names,
    DemoSummary, FrameRange, RenderSummary,
};
pub use scenario::{generate_trace, Primitive, ScenarioKind, ScenarioSpec, CONTACT_CLEARANCE, OBJECT_ID};
pub use scene_file::{load_scene_file, BodySpec, LoadedScene, SceneFile};
pub use timing::{TimingBreakdown, CSV_HEADER};

use crate::config::ConfigError;
use crate::geometry::MeshError;
use crate::imaging::{DimensionMismatch, ImageIoError};
use crate::scene::{SceneError, TraceError};
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),
    #[error("file not found: {0}")]
    MissingFile(PathBuf),
    #[error("{path}: {message}")]
    SceneFile { path: PathBuf, message: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Image(#[from] ImageIoError),
    #[error(transparent)]
    Dimension(#[from] DimensionMismatch),
}

impl HarnessError {
    /// Process exit status: 2 for I/O failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::MissingFile(_) | HarnessError::Io { .. } => 2,
            HarnessError::Config(ConfigError::MissingFile(_) | ConfigError::Io(_)) => 2,
            HarnessError::Trace(TraceError::MissingFile(_) | TraceError::Io(_)) => 2,
            HarnessError::Mesh(MeshError::MissingFile(_) | MeshError::Io(_)) => 2,
            HarnessError::Image(ImageIoError::Io(_)) => 2,
            HarnessError::Scene(SceneError::Gel(MeshError::MissingFile(_) | MeshError::Io(_))) => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }
}
