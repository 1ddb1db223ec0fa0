//! Sensor configuration: cameras, lights, gel, force response and
//! post-processing for one vision-based tactile sensor.
//!
//! Files are YAML with a strict schema (unknown keys are rejected). Angles
//! are degrees, lengths meters and forces newtons. Relative paths inside a
//! file are resolved against the file's directory when loading.
//!
//! ```text
//! SensorConfig
//! ├── name
//! ├── cameras[]          position, orientation_quat, fov_y_deg, near, far, width, height
//! ├── lights[]           position, color, intensity, attenuation [c, l, q]
//! ├── gel                position, orientation_quat, mesh (path | planar), material
//! ├── force_mapping      breakpoints [[force_n, depth_m], ...]
//! ├── noise_std, blur_kernel, shadows_enabled, background_real
//! └── ambient, shadow_bias, shadow_map_size
//! ```

use crate::geometry::{Pinhole, Pose, Vec3};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Linear RGB triple.
pub type Rgb = Vec3;

pub const DEFAULT_ATTENUATION: [f64; 3] = [1.0, 0.0, 25.0];
pub const DEFAULT_SHADOW_BIAS: f64 = 5e-5;
pub const DEFAULT_SHADOW_MAP_SIZE: usize = 512;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config file not found: {0}")]
    MissingFile(PathBuf),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid {field}: {constraint}")]
    Validation { field: String, constraint: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// A single broken invariant, naming the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub constraint: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.constraint)
    }
}

impl From<Violation> for ConfigError {
    fn from(v: Violation) -> Self {
        ConfigError::Validation {
            field: v.field,
            constraint: v.constraint,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CameraSpec {
    pub name: String,
    /// Pose in the sensor frame. The camera looks along its local +z.
    pub pose: Pose,
    /// Vertical field of view as written in the file, in degrees.
    pub fov_y_deg: f64,
    pub near_clip: f64,
    pub far_clip: f64,
    pub width: usize,
    pub height: usize,
}

impl CameraSpec {
    pub fn fov_y(&self) -> f64 {
        self.fov_y_deg.to_radians()
    }

    pub fn intrinsics(&self) -> Pinhole {
        Pinhole::from_fov(self.width, self.height, self.fov_y(), self.near_clip, self.far_clip)
    }
}

/// Point light.
#[derive(Debug, Clone, PartialEq)]
pub struct LightSpec {
    /// Position in the sensor frame.
    pub position: Vec3,
    pub color: Rgb,
    pub intensity: f64,
    /// Constant, linear and quadratic distance attenuation coefficients.
    pub attenuation: [f64; 3],
}

impl LightSpec {
    /// `1 / (c + l·d + q·d²)`
    #[inline]
    pub fn attenuation_at(&self, distance: f64) -> f64 {
        let [c, l, q] = self.attenuation;
        1.0 / (c + l * distance + q * distance * distance)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhongMaterial {
    pub ambient: Rgb,
    pub diffuse: Rgb,
    pub specular: Rgb,
    pub shininess: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GelMesh {
    /// OBJ or STL file, normals facing into the sensor.
    File(PathBuf),
    /// Procedural slab, see [`crate::geometry::gel_slab`].
    Planar {
        width: f64,
        height: f64,
        curvature: f64,
        segments: [usize; 2],
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GelSpec {
    pub mesh: GelMesh,
    /// Pose in the sensor frame; local +z points out of the sensor.
    pub pose: Pose,
    pub material: PhongMaterial,
}

/// Piecewise-linear map from normal force (N) to penetration depth (m).
#[derive(Debug, Clone, PartialEq)]
pub struct ForceMapping {
    pub breakpoints: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensorConfig {
    pub name: String,
    pub cameras: Vec<CameraSpec>,
    pub lights: Vec<LightSpec>,
    pub gel: GelSpec,
    pub force_mapping: ForceMapping,
    /// Standard deviation of additive Gaussian noise, linear units, applied
    /// to every channel.
    pub noise_std: f64,
    /// Side of the square Gaussian blur kernel in pixels; 1 disables it.
    pub blur_kernel: usize,
    pub shadows_enabled: bool,
    pub background_real: Option<PathBuf>,
    /// Ambient light colour multiplied by the material's ambient term.
    pub ambient: Rgb,
    pub shadow_bias: f64,
    pub shadow_map_size: usize,
}

const DIGIT_YAML: &str = include_str!("../configs/digit.yaml");
const OMNITACT_YAML: &str = include_str!("../configs/omnitact.yaml");

impl SensorConfig {
    /// DIGIT-like reference sensor: one camera, red/green/blue side lights.
    /// Values are tuning estimates, not measurements.
    pub fn digit() -> Self {
        Self::from_yaml_str(DIGIT_YAML, Path::new(".")).expect("bundled DIGIT config is valid")
    }

    /// OmniTact-like reference sensor: curved gel, 5 cameras, 11 lights.
    pub fn omnitact() -> Self {
        Self::from_yaml_str(OMNITACT_YAML, Path::new("."))
            .expect("bundled OmniTact config is valid")
    }

    /// Parses and validates a YAML document. Relative paths resolve against
    /// `base_dir`.
    pub fn from_yaml_str(text: &str, base_dir: &Path) -> Result<Self, ConfigError> {
        let config = parse_unvalidated(text, base_dir)?;
        if let Some(v) = validate_config(&config).into_iter().next() {
            return Err(v.into());
        }
        Ok(config)
    }

    pub fn to_yaml_string(&self) -> String {
        serde_yaml::to_string(&ConfigDoc::from_config(self)).expect("config document serializes")
    }

    /// Copy with every camera's resolution replaced.
    pub fn with_resolution(&self, width: usize, height: usize) -> Self {
        let mut c = self.clone();
        for cam in &mut c.cameras {
            cam.width = width;
            cam.height = height;
        }
        c
    }
}

/// Reads, parses and validates a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<SensorConfig, ConfigError> {
    let path = path.as_ref();
    if !path.is_file() {
        return Err(ConfigError::MissingFile(path.to_path_buf()));
    }
    let text = fs::read_to_string(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let config = SensorConfig::from_yaml_str(&text, base)?;
    if let GelMesh::File(mesh) = &config.gel.mesh {
        crate::geometry::load_mesh(mesh).map_err(|e| ConfigError::Validation {
            field: "gel.mesh".into(),
            constraint: format!("must load to a valid triangle mesh ({e})"),
        })?;
    }
    Ok(config)
}

/// Parses a config file and reports every constraint violation instead of
/// stopping at the first one. Read and syntax errors are still errors.
pub fn check_config_file(path: impl AsRef<Path>) -> Result<Vec<Violation>, ConfigError> {
    let path = path.as_ref();
    if !path.is_file() {
        return Err(ConfigError::MissingFile(path.to_path_buf()));
    }
    let text = fs::read_to_string(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let config = match parse_unvalidated(&text, base) {
        Ok(c) => c,
        Err(ConfigError::Validation { field, constraint }) => {
            return Ok(vec![Violation { field, constraint }])
        }
        Err(e) => return Err(e),
    };
    let mut violations = validate_config(&config);
    if let GelMesh::File(mesh) = &config.gel.mesh {
        if let Err(e) = crate::geometry::load_mesh(mesh) {
            violations.push(Violation {
                field: "gel.mesh".into(),
                constraint: format!("must load to a valid triangle mesh ({e})"),
            });
        }
    }
    Ok(violations)
}

fn parse_unvalidated(text: &str, base_dir: &Path) -> Result<SensorConfig, ConfigError> {
    let doc: ConfigDoc = serde_yaml::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.location().map(|l| l.line()).unwrap_or(0),
        message: e.to_string(),
    })?;
    doc.into_config(base_dir)
}

pub fn save_config(config: &SensorConfig, path: impl AsRef<Path>) -> Result<(), ConfigError> {
    fs::write(path, config.to_yaml_string())?;
    Ok(())
}

struct Checker {
    out: Vec<Violation>,
}

impl Checker {
    fn check(&mut self, ok: bool, field: impl Into<String>, constraint: &str) {
        if !ok {
            self.out.push(Violation {
                field: field.into(),
                constraint: constraint.to_string(),
            });
        }
    }

    fn unit_rgb(&mut self, c: &Rgb, field: String) {
        self.check(
            c.iter().all(|v| (0.0..=1.0).contains(v)),
            field,
            "each channel must lie in [0, 1]",
        );
    }

    fn finite_vec(&mut self, v: &Vec3, field: String) {
        self.check(v.iter().all(|c| c.is_finite()), field, "must be finite");
    }
}

/// Lists every broken invariant. Empty exactly when the config is valid.
pub fn validate_config(config: &SensorConfig) -> Vec<Violation> {
    let mut c = Checker { out: Vec::new() };

    c.check(!config.name.trim().is_empty(), "name", "must not be empty");
    c.check(!config.cameras.is_empty(), "cameras", "at least one camera is required");
    c.check(!config.lights.is_empty(), "lights", "at least one light is required");

    let mut names = HashSet::new();
    for (i, cam) in config.cameras.iter().enumerate() {
        let f = |k: &str| format!("cameras[{i}].{k}");
        c.check(
            !cam.name.is_empty()
                && cam
                    .name
                    .chars()
                    .all(|ch| ch.is_ascii_alphanumeric() || ch == '_' || ch == '-'),
            f("name"),
            "must be non-empty and use only [A-Za-z0-9_-]",
        );
        c.check(names.insert(cam.name.as_str()), f("name"), "must be unique");
        c.finite_vec(&cam.pose.translation, f("position"));
        c.check(
            cam.fov_y_deg > 0.0 && cam.fov_y_deg < 180.0,
            f("fov_y_deg"),
            "must lie in (0, 180) degrees",
        );
        c.check(
            cam.near_clip > 0.0 && cam.near_clip.is_finite(),
            f("near_clip"),
            "must be > 0",
        );
        c.check(
            cam.far_clip > cam.near_clip && cam.far_clip.is_finite(),
            f("far_clip"),
            "must be greater than near_clip",
        );
        c.check(cam.width >= 8, f("width"), "must be at least 8 pixels");
        c.check(cam.height >= 8, f("height"), "must be at least 8 pixels");
    }

    for (i, light) in config.lights.iter().enumerate() {
        let f = |k: &str| format!("lights[{i}].{k}");
        c.finite_vec(&light.position, f("position"));
        c.unit_rgb(&light.color, f("color"));
        c.check(
            light.intensity >= 0.0 && light.intensity.is_finite(),
            f("intensity"),
            "must be >= 0",
        );
        let att = light.attenuation;
        c.check(
            att.iter().all(|&a| a >= 0.0 && a.is_finite()) && att.iter().any(|&a| a > 0.0),
            f("attenuation"),
            "coefficients must be >= 0 and not all zero",
        );
    }

    let gel = &config.gel;
    c.finite_vec(&gel.pose.translation, "gel.position".into());
    match &gel.mesh {
        GelMesh::File(p) => c.check(
            !p.as_os_str().is_empty(),
            "gel.mesh.path",
            "must not be empty",
        ),
        GelMesh::Planar {
            width,
            height,
            curvature,
            segments,
        } => {
            c.check(*width > 0.0 && width.is_finite(), "gel.mesh.planar.width", "must be > 0");
            c.check(*height > 0.0 && height.is_finite(), "gel.mesh.planar.height", "must be > 0");
            c.check(curvature.is_finite(), "gel.mesh.planar.curvature", "must be finite");
            c.check(
                segments[0] >= 1 && segments[1] >= 1,
                "gel.mesh.planar.segments",
                "must be >= 1 along both axes",
            );
        }
    }
    let m = &gel.material;
    c.unit_rgb(&m.ambient, "gel.material.ambient".into());
    c.unit_rgb(&m.diffuse, "gel.material.diffuse".into());
    c.unit_rgb(&m.specular, "gel.material.specular".into());
    c.check(
        m.shininess >= 1.0 && m.shininess.is_finite(),
        "gel.material.shininess",
        "must be >= 1",
    );

    let bp = &config.force_mapping.breakpoints;
    c.check(
        bp.len() >= 2,
        "force_mapping.breakpoints",
        "needs a lower threshold and a saturation point",
    );
    c.check(
        bp.iter()
            .all(|&(f, d)| f >= 0.0 && d >= 0.0 && f.is_finite() && d.is_finite()),
        "force_mapping.breakpoints",
        "forces and depths must be finite and >= 0",
    );
    c.check(
        bp.windows(2).all(|w| w[1].0 > w[0].0),
        "force_mapping.breakpoints",
        "forces must be strictly increasing",
    );
    c.check(
        bp.windows(2).all(|w| w[1].1 >= w[0].1),
        "force_mapping.breakpoints",
        "depths must be non-decreasing",
    );
    c.check(
        bp.first().is_none_or(|&(_, d)| d == 0.0),
        "force_mapping.breakpoints",
        "first depth must be 0",
    );

    c.check(
        (0.0..=0.5).contains(&config.noise_std),
        "noise_std",
        "must lie in [0, 0.5]",
    );
    c.check(
        config.blur_kernel >= 1 && config.blur_kernel % 2 == 1,
        "blur_kernel",
        "must be odd and >= 1",
    );
    c.unit_rgb(&config.ambient, "ambient".into());
    c.check(
        config.shadow_bias > 0.0 && config.shadow_bias.is_finite(),
        "shadow_bias",
        "must be > 0",
    );
    c.check(
        config.shadow_map_size >= 8,
        "shadow_map_size",
        "must be at least 8",
    );
    c.out
}

// ---------------------------------------------------------------------------
// File schema
// ---------------------------------------------------------------------------

fn default_attenuation() -> [f64; 3] {
    DEFAULT_ATTENUATION
}
fn default_blur() -> usize {
    1
}
fn default_ambient() -> [f64; 3] {
    [1.0, 1.0, 1.0]
}
fn default_bias() -> f64 {
    DEFAULT_SHADOW_BIAS
}
fn default_map_size() -> usize {
    DEFAULT_SHADOW_MAP_SIZE
}
fn default_quat() -> [f64; 4] {
    [1.0, 0.0, 0.0, 0.0]
}
fn default_segments() -> [usize; 2] {
    [32, 24]
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    name: String,
    cameras: Vec<CameraDoc>,
    lights: Vec<LightDoc>,
    gel: GelDoc,
    force_mapping: ForceMappingDoc,
    #[serde(default)]
    noise_std: f64,
    #[serde(default = "default_blur")]
    blur_kernel: usize,
    #[serde(default)]
    shadows_enabled: bool,
    #[serde(default)]
    background_real: Option<String>,
    #[serde(default = "default_ambient")]
    ambient: [f64; 3],
    #[serde(default = "default_bias")]
    shadow_bias: f64,
    #[serde(default = "default_map_size")]
    shadow_map_size: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CameraDoc {
    #[serde(default)]
    name: Option<String>,
    position: [f64; 3],
    #[serde(default = "default_quat")]
    orientation_quat: [f64; 4],
    fov_y_deg: f64,
    near: f64,
    far: f64,
    width: usize,
    height: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LightDoc {
    position: [f64; 3],
    color: [f64; 3],
    intensity: f64,
    #[serde(default = "default_attenuation")]
    attenuation: [f64; 3],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GelDoc {
    position: [f64; 3],
    #[serde(default = "default_quat")]
    orientation_quat: [f64; 4],
    mesh: GelMeshDoc,
    material: MaterialDoc,
}

/// Exactly one of `path` or `planar`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GelMeshDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    planar: Option<PlanarDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanarDoc {
    width: f64,
    height: f64,
    #[serde(default)]
    curvature: f64,
    #[serde(default = "default_segments")]
    segments: [usize; 2],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialDoc {
    ambient: [f64; 3],
    diffuse: [f64; 3],
    specular: [f64; 3],
    shininess: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ForceMappingDoc {
    breakpoints: Vec<[f64; 2]>,
}

fn pose_from(field: &str, position: [f64; 3], quat: [f64; 4]) -> Result<Pose, ConfigError> {
    Pose::from_parts(position, quat).ok_or_else(|| ConfigError::Validation {
        field: field.to_string(),
        constraint: "position must be finite and orientation_quat non-zero".into(),
    })
}

fn resolve(base: &Path, p: &str) -> PathBuf {
    let p = Path::new(p);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn path_string(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

impl ConfigDoc {
    fn into_config(self, base: &Path) -> Result<SensorConfig, ConfigError> {
        let cameras = self
            .cameras
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                Ok(CameraSpec {
                    name: c.name.unwrap_or_else(|| format!("cam{i}")),
                    pose: pose_from(&format!("cameras[{i}].pose"), c.position, c.orientation_quat)?,
                    fov_y_deg: c.fov_y_deg,
                    near_clip: c.near,
                    far_clip: c.far,
                    width: c.width,
                    height: c.height,
                })
            })
            .collect::<Result<Vec<_>, ConfigError>>()?;
        let lights = self
            .lights
            .into_iter()
            .map(|l| LightSpec {
                position: Vec3::from(l.position),
                color: Rgb::from(l.color),
                intensity: l.intensity,
                attenuation: l.attenuation,
            })
            .collect();
        let mesh = match (self.gel.mesh.path, self.gel.mesh.planar) {
            (Some(p), None) => GelMesh::File(resolve(base, &p)),
            (None, Some(p)) => GelMesh::Planar {
                width: p.width,
                height: p.height,
                curvature: p.curvature,
                segments: p.segments,
            },
            _ => {
                return Err(ConfigError::Validation {
                    field: "gel.mesh".into(),
                    constraint: "exactly one of 'path' or 'planar' is required".into(),
                })
            }
        };
        let m = self.gel.material;
        Ok(SensorConfig {
            name: self.name,
            cameras,
            lights,
            gel: GelSpec {
                mesh,
                pose: pose_from("gel.pose", self.gel.position, self.gel.orientation_quat)?,
                material: PhongMaterial {
                    ambient: Rgb::from(m.ambient),
                    diffuse: Rgb::from(m.diffuse),
                    specular: Rgb::from(m.specular),
                    shininess: m.shininess,
                },
            },
            force_mapping: ForceMapping {
                breakpoints: self
                    .force_mapping
                    .breakpoints
                    .into_iter()
                    .map(|[f, d]| (f, d))
                    .collect(),
            },
            noise_std: self.noise_std,
            blur_kernel: self.blur_kernel,
            shadows_enabled: self.shadows_enabled,
            background_real: self.background_real.map(|p| resolve(base, &p)),
            ambient: Rgb::from(self.ambient),
            shadow_bias: self.shadow_bias,
            shadow_map_size: self.shadow_map_size,
        })
    }

    fn from_config(c: &SensorConfig) -> Self {
        let arr = |v: &Vec3| [v.x, v.y, v.z];
        ConfigDoc {
            name: c.name.clone(),
            cameras: c
                .cameras
                .iter()
                .map(|cam| CameraDoc {
                    name: Some(cam.name.clone()),
                    position: cam.pose.position_array(),
                    orientation_quat: cam.pose.quaternion_wxyz(),
                    fov_y_deg: cam.fov_y_deg,
                    near: cam.near_clip,
                    far: cam.far_clip,
                    width: cam.width,
                    height: cam.height,
                })
                .collect(),
            lights: c
                .lights
                .iter()
                .map(|l| LightDoc {
                    position: arr(&l.position),
                    color: arr(&l.color),
                    intensity: l.intensity,
                    attenuation: l.attenuation,
                })
                .collect(),
            gel: GelDoc {
                position: c.gel.pose.position_array(),
                orientation_quat: c.gel.pose.quaternion_wxyz(),
                mesh: match &c.gel.mesh {
                    GelMesh::File(p) => GelMeshDoc {
                        path: Some(path_string(p)),
                        planar: None,
                    },
                    GelMesh::Planar {
                        width,
                        height,
                        curvature,
                        segments,
                    } => GelMeshDoc {
                        path: None,
                        planar: Some(PlanarDoc {
                            width: *width,
                            height: *height,
                            curvature: *curvature,
                            segments: *segments,
                        }),
                    },
                },
                material: MaterialDoc {
                    ambient: arr(&c.gel.material.ambient),
                    diffuse: arr(&c.gel.material.diffuse),
                    specular: arr(&c.gel.material.specular),
                    shininess: c.gel.material.shininess,
                },
            },
            force_mapping: ForceMappingDoc {
                breakpoints: c.force_mapping.breakpoints.iter().map(|&(f, d)| [f, d]).collect(),
            },
            noise_std: c.noise_std,
            blur_kernel: c.blur_kernel,
            shadows_enabled: c.shadows_enabled,
            background_real: c.background_real.as_deref().map(path_string),
            ambient: arr(&c.ambient),
            shadow_bias: c.shadow_bias,
            shadow_map_size: c.shadow_map_size,
        }
    }
}
