use super::HarnessError;
use crate::config::SensorConfig;
use crate::geometry::{benchmark_sphere, cuboid, cylinder, Pose, TriangleMesh, Vec3};
use crate::scene::{ContactReport, PoseUpdate, TraceFrame};
use nalgebra::UnitQuaternion;
use std::fmt;
use std::str::FromStr;

/// Gap left between a resting object and the gel so that coplanar faces do
/// not fight in the depth buffer.
pub const CONTACT_CLEARANCE: f64 = 2e-6;

/// Body id used for the scenario object in generated traces.
pub const OBJECT_ID: &str = "object";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// Force ramps up at a fixed position.
    Press,
    /// Constant force while sliding along +x.
    Shear,
    /// Force ramps up over the first quarter while sliding along +y.
    Sweep,
}

impl FromStr for ScenarioKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "press" => Ok(Self::Press),
            "shear" => Ok(Self::Shear),
            "sweep" => Ok(Self::Sweep),
            _ => Err(HarnessError::InvalidArguments(format!(
                "unknown scenario kind {s:?} (press, shear or sweep)"
            ))),
        }
    }
}

/// Contact primitive, dimensions in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Primitive {
    Sphere { radius: f64 },
    Box { extents: Vec3 },
    /// Axis along x, lying flat on the gel.
    Cylinder { radius: f64, length: f64 },
}

impl Primitive {
    pub fn mesh(&self) -> TriangleMesh {
        match *self {
            Primitive::Sphere { radius } => benchmark_sphere(radius),
            Primitive::Box { extents } => cuboid(extents),
            Primitive::Cylinder { radius, length } => cylinder(radius, length, 64),
        }
    }

    /// Distance from the centre to the lowest point along local -z.
    pub fn half_height(&self) -> f64 {
        match *self {
            Primitive::Sphere { radius } => radius,
            Primitive::Box { extents } => extents.z / 2.0,
            Primitive::Cylinder { radius, .. } => radius,
        }
    }

    fn validate(&self) -> Result<(), HarnessError> {
        let dims: Vec<f64> = match *self {
            Primitive::Sphere { radius } => vec![radius],
            Primitive::Box { extents } => extents.iter().copied().collect(),
            Primitive::Cylinder { radius, length } => vec![radius, length],
        };
        if dims.iter().all(|d| d.is_finite() && *d > 0.0) {
            Ok(())
        } else {
            Err(HarnessError::InvalidArguments(format!("object dimensions must be positive: {self}")))
        }
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Primitive::Sphere { radius } => write!(f, "sphere:{radius}"),
            Primitive::Box { extents } => write!(f, "box:{},{},{}", extents.x, extents.y, extents.z),
            Primitive::Cylinder { radius, length } => write!(f, "cylinder:{radius},{length}"),
        }
    }
}

/// Parses `sphere:r`, `box:x,y,z` or `cylinder:r,l`.
impl FromStr for Primitive {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HarnessError::InvalidArguments(format!("bad object {s:?}; expected sphere:r, box:x,y,z or cylinder:r,l"));
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        let nums = args
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        let p = match (kind, nums.as_slice()) {
            ("sphere", [r]) => Primitive::Sphere { radius: *r },
            ("box", [x, y, z]) => Primitive::Box {
                extents: Vec3::new(*x, *y, *z),
            },
            ("cylinder", [r, l]) => Primitive::Cylinder {
                radius: *r,
                length: *l,
            },
            _ => return Err(bad()),
        };
        p.validate()?;
        Ok(p)
    }
}

/// A scripted contact: one object, a force profile and a motion path.
///
/// Motion poses are relative to the rest pose, where the object sits on the
/// centre of the gel with its local z axis along the gel's outward normal.
/// One trace frame is generated per force sample.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub object: Primitive,
    /// (t seconds, normal force newtons), strictly increasing in t.
    pub force_profile: Vec<(f64, f64)>,
    /// (t seconds, pose relative to rest), strictly increasing in t.
    pub motion: Vec<(f64, Pose)>,
}

impl ScenarioSpec {
    /// Standard profile of the given kind with `frames` samples at 20 Hz.
    pub fn standard(kind: ScenarioKind, object: Primitive, force_max: f64, frames: usize) -> Self {
        let n = frames.max(2);
        let dt = 0.05;
        let t_end = (n - 1) as f64 * dt;
        let force_profile = (0..n)
            .map(|i| {
                let s = i as f64 / (n - 1) as f64;
                let f = match kind {
                    ScenarioKind::Press => force_max * s,
                    ScenarioKind::Shear => force_max,
                    ScenarioKind::Sweep => force_max * (4.0 * s).min(1.0),
                };
                (i as f64 * dt, f)
            })
            .collect();
        let travel = match kind {
            ScenarioKind::Press => Vec3::zeros(),
            ScenarioKind::Shear => Vec3::new(0.003, 0.0, 0.0),
            ScenarioKind::Sweep => Vec3::new(0.0, 0.004, 0.0),
        };
        let motion = vec![
            (0.0, Pose::identity()),
            (t_end, Pose::from_translation(travel)),
        ];
        Self {
            kind,
            object,
            force_profile,
            motion,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        self.object.validate()?;
        let bad = |m: &str| Err(HarnessError::InvalidArguments(m.to_string()));
        if self.force_profile.is_empty() || self.motion.is_empty() {
            return bad("force profile and motion path must be non-empty");
        }
        let increasing = |ts: &mut dyn Iterator<Item = f64>| {
            let ts: Vec<f64> = ts.collect();
            ts.iter().all(|t| t.is_finite()) && ts.windows(2).all(|w| w[0] < w[1])
        };
        if !increasing(&mut self.force_profile.iter().map(|p| p.0))
            || !increasing(&mut self.motion.iter().map(|p| p.0))
        {
            return bad("timestamps must be strictly increasing");
        }
        if self.force_profile.iter().any(|p| !(p.1 >= 0.0) || !p.1.is_finite()) {
            return bad("forces must be finite and non-negative");
        }
        Ok(())
    }

    /// Motion pose at time `t`: linear in translation, slerp in rotation,
    /// held constant outside the path.
    pub fn motion_at(&self, t: f64) -> Pose {
        let m = &self.motion;
        let k = m.partition_point(|(tk, _)| *tk <= t);
        if k == 0 {
            return m[0].1;
        }
        if k == m.len() {
            return m[m.len() - 1].1;
        }
        let (t0, a) = &m[k - 1];
        let (t1, b) = &m[k];
        let s = (t - t0) / (t1 - t0);
        let rotation: UnitQuaternion<f64> = a.rotation.slerp(&b.rotation, s);
        Pose::new(a.translation.lerp(&b.translation, s), rotation)
    }
}

/// Analytic trace for a scenario: the object rests on the gel centre,
/// follows the motion path, and reports the profile force along the gel's
/// outward normal whenever it is positive.
pub fn generate_trace(spec: &ScenarioSpec, config: &SensorConfig) -> Result<Vec<TraceFrame>, HarnessError> {
    spec.validate()?;
    let gel = config.gel.pose;
    let normal = gel.transform_vector(&Vec3::z());
    let lift = Pose::from_translation(Vec3::new(0.0, 0.0, spec.object.half_height() + CONTACT_CLEARANCE));
    Ok(spec
        .force_profile
        .iter()
        .map(|&(t, force)| {
            let pose = gel.compose(&spec.motion_at(t)).compose(&lift);
            let contacts = if force > 0.0 {
                vec![ContactReport {
                    body_id: OBJECT_ID.to_string(),
                    normal_force: force,
                    contact_normal: normal,
                }]
            } else {
                Vec::new()
            };
            TraceFrame {
                t,
                poses: vec![PoseUpdate {
                    id: OBJECT_ID.to_string(),
                    pose,
                }],
                contacts,
            }
        })
        .collect())
}

/// Rest pose of the scenario object (before any trace frame).
pub(crate) fn rest_pose(spec: &ScenarioSpec, config: &SensorConfig) -> Pose {
    config
        .gel
        .pose
        .compose(&Pose::from_translation(Vec3::new(0.0, 0.0, spec.object.half_height() + CONTACT_CLEARANCE)))
}
