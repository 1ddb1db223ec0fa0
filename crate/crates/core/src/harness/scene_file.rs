use super::HarnessError;
use crate::config::{load_config, SensorConfig};
use crate::geometry::{load_mesh, Pose, TriangleMesh};
use crate::scene::{load_trace, Scene, TraceFrame};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

/// A body to load into the scene at start-up.
#[derive(Debug, Clone, PartialEq)]
pub struct BodySpec {
    pub id: String,
    pub mesh: PathBuf,
    pub scale: f64,
    pub pose: Pose,
}

/// Scene description: sensor config, sensor pose, bodies and an optional
/// trace. Relative paths are relative to the scene file.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneFile {
    pub config: PathBuf,
    pub sensor_pose: Pose,
    pub bodies: Vec<BodySpec>,
    pub trace: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneDoc {
    config: String,
    #[serde(default)]
    sensor_pose: PoseDoc,
    #[serde(default)]
    bodies: Vec<BodyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trace: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PoseDoc {
    #[serde(default)]
    position: [f64; 3],
    #[serde(default = "identity_quat")]
    orientation_quat: [f64; 4],
}

impl Default for PoseDoc {
    fn default() -> Self {
        Self {
            position: [0.0; 3],
            orientation_quat: identity_quat(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BodyDoc {
    id: String,
    mesh: String,
    #[serde(default = "unit_scale")]
    scale: f64,
    #[serde(default)]
    position: [f64; 3],
    #[serde(default = "identity_quat")]
    orientation_quat: [f64; 4],
}

fn identity_quat() -> [f64; 4] {
    [1.0, 0.0, 0.0, 0.0]
}

fn unit_scale() -> f64 {
    1.0
}

impl SceneFile {
    /// YAML text; paths are written exactly as stored.
    pub fn to_yaml_string(&self) -> String {
        let doc = SceneDoc {
            config: self.config.to_string_lossy().into_owned(),
            sensor_pose: PoseDoc {
                position: self.sensor_pose.position_array(),
                orientation_quat: self.sensor_pose.quaternion_wxyz(),
            },
            bodies: self
                .bodies
                .iter()
                .map(|b| BodyDoc {
                    id: b.id.clone(),
                    mesh: b.mesh.to_string_lossy().into_owned(),
                    scale: b.scale,
                    position: b.pose.position_array(),
                    orientation_quat: b.pose.quaternion_wxyz(),
                })
                .collect(),
            trace: self.trace.as_ref().map(|p| p.to_string_lossy().into_owned()),
        };
        serde_yaml::to_string(&doc).expect("scene document serializes")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), HarnessError> {
        let path = path.as_ref();
        fs::write(path, self.to_yaml_string()).map_err(|e| HarnessError::io(path, e))
    }
}

/// Parses a scene file and checks that every referenced file exists.
pub fn load_scene_file(path: impl AsRef<Path>) -> Result<SceneFile, HarnessError> {
    let path = path.as_ref();
    if !path.is_file() {
        return Err(HarnessError::MissingFile(path.to_path_buf()));
    }
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let invalid = |message: String| HarnessError::SceneFile {
        path: path.to_path_buf(),
        message,
    };
    let doc: SceneDoc = serde_yaml::from_str(&text).map_err(|e| {
        let line = e.location().map(|l| l.line()).unwrap_or(0);
        invalid(format!("parse error at line {line}: {e}"))
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let resolve = |p: &str| base.join(p);
    let pose = |field: &str, p: [f64; 3], q: [f64; 4]| {
        Pose::from_parts(p, q)
            .ok_or_else(|| invalid(format!("{field}: position must be finite and orientation_quat non-zero")))
    };

    let sensor_pose = pose(
        "sensor_pose",
        doc.sensor_pose.position,
        doc.sensor_pose.orientation_quat,
    )?;
    let mut ids = HashSet::new();
    let mut bodies = Vec::with_capacity(doc.bodies.len());
    for (i, b) in doc.bodies.into_iter().enumerate() {
        if !ids.insert(b.id.clone()) {
            return Err(invalid(format!("bodies[{i}].id: duplicate id {:?}", b.id)));
        }
        if !(b.scale > 0.0 && b.scale.is_finite()) {
            return Err(invalid(format!("bodies[{i}].scale: must be positive")));
        }
        bodies.push(BodySpec {
            pose: pose(&format!("bodies[{i}]"), b.position, b.orientation_quat)?,
            id: b.id,
            mesh: resolve(&b.mesh),
            scale: b.scale,
        });
    }
    let file = SceneFile {
        config: resolve(&doc.config),
        sensor_pose,
        bodies,
        trace: doc.trace.as_deref().map(resolve),
    };
    let referenced = std::iter::once(&file.config)
        .chain(file.bodies.iter().map(|b| &b.mesh))
        .chain(file.trace.iter());
    for p in referenced {
        if !p.is_file() {
            return Err(HarnessError::MissingFile(p.clone()));
        }
    }
    Ok(file)
}

/// A scene file with its config, populated scene and trace frames.
#[derive(Debug)]
pub struct LoadedScene {
    pub file: SceneFile,
    pub config: SensorConfig,
    pub scene: Scene,
    pub frames: Vec<TraceFrame>,
}

impl LoadedScene {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let file = load_scene_file(path)?;
        let config = load_config(&file.config)?;
        let mut scene = Scene::new(&config, file.sensor_pose)?;
        let mut meshes: HashMap<&Path, Arc<TriangleMesh>> = HashMap::new();
        for b in &file.bodies {
            let mesh = match meshes.get(b.mesh.as_path()) {
                Some(m) => m.clone(),
                None => {
                    let m = Arc::new(load_mesh(&b.mesh)?);
                    meshes.insert(&b.mesh, m.clone());
                    m
                }
            };
            scene.add_body(&b.id, mesh, b.pose, b.scale)?;
        }
        let frames = match &file.trace {
            Some(p) => load_trace(p)?.collect::<Result<Vec<_>, _>>()?,
            None => Vec::new(),
        };
        Ok(Self {
            file,
            config,
            scene,
            frames,
        })
    }
}
