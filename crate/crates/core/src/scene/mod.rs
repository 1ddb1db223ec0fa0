//! Renderer-side mirror of the physics world.
//!
//! Meshes enter a [`Scene`] once, through [`Scene::add_body`]; afterwards the
//! physics side only sends poses and contact reports. Each frame,
//! [`apply_deformation`] produces an immutable [`DeformedScene`] snapshot in
//! which contacted bodies are pushed into the (rigid) gel.

mod deform;
mod trace;

pub use deform::{apply_deformation, deformation_offset};
pub use trace::{frame_to_json, load_trace, write_trace, PoseUpdate, TraceError, TraceFrame, TraceReader};

use crate::config::{GelMesh, SensorConfig};
use crate::geometry::{gel_slab, load_mesh, Aabb, MeshError, Pose, TriangleMesh, Vec3};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("body id already in use: {0}")]
    DuplicateId(String),
    #[error("unknown body id: {0}")]
    UnknownId(String),
    #[error("invalid body {id}: {reason}")]
    InvalidBody { id: String, reason: String },
    #[error("invalid contact report for {id}: {reason}")]
    InvalidContact { id: String, reason: String },
    #[error("gel mesh: {0}")]
    Gel(#[from] MeshError),
}

/// Geometry prepared once for rendering.
#[derive(Debug)]
pub struct SceneMesh {
    mesh: Arc<TriangleMesh>,
    local_aabb: Aabb,
}

impl SceneMesh {
    pub fn new(mesh: impl Into<Arc<TriangleMesh>>) -> Self {
        let mesh = mesh.into();
        let local_aabb = mesh.local_aabb();
        Self { mesh, local_aabb }
    }

    pub fn mesh(&self) -> &TriangleMesh {
        &self.mesh
    }

    pub fn local_aabb(&self) -> &Aabb {
        &self.local_aabb
    }
}

#[derive(Debug, Clone)]
pub struct Body {
    pub id: String,
    pub mesh: Arc<SceneMesh>,
    /// World-frame pose as last reported by the physics side.
    pub pose: Pose,
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContactReport {
    pub body_id: String,
    /// Newtons, ≥ 0.
    pub normal_force: f64,
    /// Unit world-frame vector pointing out of the gel.
    pub contact_normal: Vec3,
}

/// Mirrored world state for one sensor.
#[derive(Debug, Clone)]
pub struct Scene {
    bodies: BTreeMap<String, Body>,
    gel: Body,
    gel_local_pose: Pose,
    contacts: Vec<ContactReport>,
    sensor_pose: Pose,
    geometry_loads: usize,
}

impl Scene {
    /// Builds the gel surface from the config and places the sensor.
    pub fn new(config: &SensorConfig, sensor_pose: Pose) -> Result<Self, SceneError> {
        let gel_mesh = match &config.gel.mesh {
            GelMesh::File(path) => load_mesh(path)?,
            GelMesh::Planar {
                width,
                height,
                curvature,
                segments,
            } => gel_slab(*width, *height, *curvature, *segments),
        };
        Ok(Self::with_gel_mesh(gel_mesh, config.gel.pose, sensor_pose))
    }

    /// Scene with an explicit gel surface, `gel_local_pose` in the sensor frame.
    pub fn with_gel_mesh(gel_mesh: TriangleMesh, gel_local_pose: Pose, sensor_pose: Pose) -> Self {
        Self {
            bodies: BTreeMap::new(),
            gel: Body {
                id: "gel".into(),
                mesh: Arc::new(SceneMesh::new(gel_mesh)),
                pose: sensor_pose.compose(&gel_local_pose),
                scale: 1.0,
            },
            gel_local_pose,
            contacts: Vec::new(),
            sensor_pose,
            geometry_loads: 0,
        }
    }

    pub fn add_body(
        &mut self,
        id: impl Into<String>,
        mesh: impl Into<Arc<TriangleMesh>>,
        initial_pose: Pose,
        scale: f64,
    ) -> Result<(), SceneError> {
        let id = id.into();
        if self.bodies.contains_key(&id) {
            return Err(SceneError::DuplicateId(id));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(SceneError::InvalidBody {
                id,
                reason: format!("scale {scale} must be positive"),
            });
        }
        let mesh = Arc::new(SceneMesh::new(mesh));
        self.geometry_loads += 1;
        self.bodies.insert(
            id.clone(),
            Body {
                id,
                mesh,
                pose: initial_pose,
                scale,
            },
        );
        Ok(())
    }

    /// Moves a body. Touches only the pose; geometry is never reloaded.
    pub fn update_pose(&mut self, id: &str, pose: Pose) -> Result<(), SceneError> {
        match self.bodies.get_mut(id) {
            Some(b) => {
                b.pose = pose;
                Ok(())
            }
            None => Err(SceneError::UnknownId(id.to_string())),
        }
    }

    /// Replaces the contact list. On error the previous list is kept.
    pub fn set_contacts(&mut self, reports: Vec<ContactReport>) -> Result<(), SceneError> {
        for r in &reports {
            self.check_contact(r)?;
        }
        self.contacts = reports;
        Ok(())
    }

    fn check_contact(&self, r: &ContactReport) -> Result<(), SceneError> {
        if !self.bodies.contains_key(&r.body_id) {
            return Err(SceneError::UnknownId(r.body_id.clone()));
        }
        let invalid = |reason: String| SceneError::InvalidContact {
            id: r.body_id.clone(),
            reason,
        };
        if !(r.normal_force >= 0.0 && r.normal_force.is_finite()) {
            return Err(invalid(format!("normal force {} must be >= 0", r.normal_force)));
        }
        if (r.contact_normal.norm() - 1.0).abs() > 1e-6 {
            return Err(invalid("contact normal must be unit length".into()));
        }
        Ok(())
    }

    /// Undeformed snapshot holding only the gel: what the sensor sees with
    /// nothing touching it.
    pub fn background(&self) -> DeformedScene {
        let mut d = DeformedScene::new(self.sensor_pose);
        d.gel = Some(Instance::new(
            self.gel.id.clone(),
            self.gel.mesh.clone(),
            self.gel.pose,
            self.gel.scale,
            Role::Gel,
        ));
        d
    }

    pub fn set_sensor_pose(&mut self, pose: Pose) {
        self.sensor_pose = pose;
        self.gel.pose = pose.compose(&self.gel_local_pose);
    }

    /// Applies one trace frame: pose updates then the frame's contact list.
    /// Nothing changes if any referenced id is unknown.
    pub fn apply_frame(&mut self, frame: &TraceFrame) -> Result<(), SceneError> {
        if let Some(u) = frame.poses.iter().find(|u| !self.bodies.contains_key(&u.id)) {
            return Err(SceneError::UnknownId(u.id.clone()));
        }
        for r in &frame.contacts {
            self.check_contact(r)?;
        }
        for u in &frame.poses {
            self.update_pose(&u.id, u.pose)?;
        }
        self.contacts = frame.contacts.clone();
        Ok(())
    }

    pub fn body(&self, id: &str) -> Option<&Body> {
        self.bodies.get(id)
    }

    /// Bodies in id order.
    pub fn bodies(&self) -> impl Iterator<Item = &Body> {
        self.bodies.values()
    }

    pub fn body_count(&self) -> usize {
        self.bodies.len()
    }

    pub fn gel(&self) -> &Body {
        &self.gel
    }

    pub fn contacts(&self) -> &[ContactReport] {
        &self.contacts
    }

    pub fn sensor_pose(&self) -> &Pose {
        &self.sensor_pose
    }

    /// Number of meshes prepared so far; one per `add_body` call.
    pub fn geometry_loads(&self) -> usize {
        self.geometry_loads
    }
}

/// How an instance takes part in rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// Seen from inside the sensor: two-sided, receives but does not cast
    /// shadows.
    Gel,
    /// Contact object: back faces culled, casts shadows.
    Object,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub id: String,
    pub mesh: Arc<SceneMesh>,
    pub pose: Pose,
    pub scale: f64,
    pub role: Role,
}

impl Instance {
    pub fn new(id: impl Into<String>, mesh: Arc<SceneMesh>, pose: Pose, scale: f64, role: Role) -> Self {
        Self {
            id: id.into(),
            mesh,
            pose,
            scale,
            role,
        }
    }

    pub fn world_aabb(&self) -> Aabb {
        self.mesh.local_aabb().transformed(&self.pose, self.scale)
    }
}

/// Immutable per-frame snapshot handed to the renderer.
#[derive(Debug, Clone)]
pub struct DeformedScene {
    pub sensor_pose: Pose,
    pub gel: Option<Instance>,
    pub objects: Vec<Instance>,
}

impl DeformedScene {
    pub fn new(sensor_pose: Pose) -> Self {
        Self {
            sensor_pose,
            gel: None,
            objects: Vec::new(),
        }
    }

    /// All instances, gel first.
    pub fn instances(&self) -> impl Iterator<Item = &Instance> {
        self.gel.iter().chain(self.objects.iter())
    }

    pub fn object(&self, id: &str) -> Option<&Instance> {
        self.objects.iter().find(|o| o.id == id)
    }

    /// Bounds of the gel surface, or of everything when there is no gel.
    pub fn gel_aabb(&self) -> Aabb {
        match &self.gel {
            Some(g) => g.world_aabb(),
            None => self
                .objects
                .iter()
                .fold(Aabb::empty(), |acc, o| acc.union(&o.world_aabb())),
        }
    }

    /// Replaces the gel surface, e.g. with a heightfield built from depth.
    pub fn with_gel_surface(mut self, mesh: TriangleMesh, world_pose: Pose) -> Self {
        self.gel = Some(Instance::new(
            "gel",
            Arc::new(SceneMesh::new(mesh)),
            world_pose,
            1.0,
            Role::Gel,
        ));
        self
    }
}
