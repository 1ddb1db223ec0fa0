use super::raster::{rasterize_instance, FragmentSink};
use crate::config::LightSpec;
use crate::geometry::{Aabb, Pinhole, Pose, Vec3};
use crate::scene::{DeformedScene, Role};
use nalgebra::UnitQuaternion;

/// Stored value for texels that no caster covers.
pub const SHADOW_SENTINEL: f32 = f32::INFINITY;

/// Widest half-angle tangent used when the gel wraps around the light.
const MAX_HALF_TAN: f64 = 5.671_281_819_617_709; // tan 80°
const LIGHT_NEAR: f64 = 1e-6;

/// Depth map seen from a point light, looking at the centre of the gel's
/// bounding box. Only object instances cast shadows, and only the parts of
/// them on the sensor side of the gel's outer bounding plane: the gel is
/// opaque, so geometry behind it cannot block light inside the sensor.
#[derive(Debug, Clone)]
pub struct ShadowMap {
    pub light_index: usize,
    size: usize,
    depth: Vec<f32>,
    camera: Pinhole,
    /// World to light frame.
    view: Pose,
    bias: f64,
    /// Texel rectangle written since the last clear: x0, y0, x1, y1 inclusive.
    dirty: Option<[usize; 4]>,
    scratch: Vec<Vec3>,
}

impl ShadowMap {
    pub fn new(light_index: usize, size: usize, bias: f64) -> Self {
        assert!(bias > 0.0, "shadow bias must be positive");
        let size = size.max(1);
        Self {
            light_index,
            size,
            depth: vec![SHADOW_SENTINEL; size * size],
            camera: Pinhole::from_fov(size, size, 1.0, LIGHT_NEAR, f64::INFINITY),
            view: Pose::identity(),
            bias,
            dirty: None,
            scratch: Vec::new(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn depth(&self) -> &[f32] {
        &self.depth
    }

    pub fn texel(&self, i: usize, j: usize) -> f32 {
        self.depth[j * self.size + i]
    }

    /// World to light-frame transform.
    pub fn view(&self) -> &Pose {
        &self.view
    }

    pub fn camera(&self) -> &Pinhole {
        &self.camera
    }

    /// Texel and light-frame depth of a world point, if it lands on the map.
    pub fn project(&self, world: &Vec3) -> Option<(usize, usize, f64)> {
        let q = self.view.transform_point(world);
        if !(q.z > LIGHT_NEAR) {
            return None;
        }
        let (u, v) = self.camera.project(&q);
        let n = self.size as f64;
        if !(u >= 0.0 && v >= 0.0 && u < n && v < n) {
            return None;
        }
        Some((u as usize, v as usize, q.z))
    }

    /// Shadow test: the point is farther from the light than the stored
    /// occluder depth plus bias.
    #[inline]
    pub fn occluded(&self, world: &Vec3) -> bool {
        match self.project(world) {
            Some((i, j, z)) => {
                let d = self.texel(i, j);
                d != SHADOW_SENTINEL && z > d as f64 + self.bias
            }
            None => false,
        }
    }

    /// Re-renders the map for a light at `light_position` (world frame).
    pub fn update(&mut self, scene: &DeformedScene, light_position: &Vec3, cull: bool) {
        self.clear();
        let (view, camera) = light_frustum(light_position, &scene.gel_aabb(), self.size);
        self.view = view;
        self.camera = camera;
        let clip = scene.gel.as_ref().map(|g| {
            let top = g.mesh.local_aabb().max.z * g.scale;
            let normal = g.pose.transform_vector(&Vec3::z());
            let origin = g.pose.transform_point(&Vec3::new(0.0, 0.0, top));
            // the plane expressed in the light frame
            let n = view.transform_vector(&normal);
            (n, n.dot(&view.transform_point(&origin)))
        });
        let mut sink = DepthSink {
            depth: &mut self.depth,
            width: self.size,
            dirty: self.dirty,
            camera,
            clip,
        };
        for inst in scene.objects.iter().filter(|o| o.role == Role::Object) {
            rasterize_instance(&camera, &view, inst, cull, &mut self.scratch, &mut sink);
        }
        self.dirty = sink.dirty;
    }

    fn clear(&mut self) {
        if let Some([x0, y0, x1, y1]) = self.dirty.take() {
            for j in y0..=y1 {
                self.depth[j * self.size + x0..=j * self.size + x1].fill(SHADOW_SENTINEL);
            }
        }
    }
}

/// Renders a fresh shadow map. `light` must be in the world frame.
pub fn render_shadow_map(
    scene: &DeformedScene,
    light: &LightSpec,
    light_index: usize,
    resolution: usize,
    bias: f64,
) -> ShadowMap {
    let mut map = ShadowMap::new(light_index, resolution, bias);
    map.update(scene, &light.position, true);
    map
}

fn light_frustum(light: &Vec3, target: &Aabb, size: usize) -> (Pose, Pinhole) {
    let mut dir = if target.is_empty() {
        Vec3::z()
    } else {
        target.center() - light
    };
    if dir.norm() < 1e-12 {
        dir = Vec3::z();
    }
    dir.normalize_mut();
    let up = if dir.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let rotation = UnitQuaternion::face_towards(&dir, &up);
    let view = Pose::new(*light, rotation).inverse();

    let mut half = 1e-3_f64;
    if !target.is_empty() {
        for c in target.corners() {
            let q = view.transform_point(&c);
            if q.z <= LIGHT_NEAR {
                half = MAX_HALF_TAN;
                break;
            }
            half = half.max(q.x.abs() / q.z).max(q.y.abs() / q.z);
        }
    }
    let half = (half * 1.05).min(MAX_HALF_TAN);
    let f = size as f64 / 2.0 / half;
    let camera = Pinhole {
        width: size,
        height: size,
        fx: f,
        fy: f,
        cx: size as f64 / 2.0,
        cy: size as f64 / 2.0,
        near: LIGHT_NEAR,
        far: f64::INFINITY,
    };
    (view, camera)
}

struct DepthSink<'a> {
    depth: &'a mut [f32],
    width: usize,
    dirty: Option<[usize; 4]>,
    camera: Pinhole,
    /// Light-frame half-space `n·p > d` whose fragments are discarded.
    clip: Option<(Vec3, f64)>,
}

impl FragmentSink for DepthSink<'_> {
    #[inline]
    fn test(&mut self, index: usize, z: f64) -> bool {
        if (z as f32) >= self.depth[index] {
            return false;
        }
        match self.clip {
            Some((n, d)) => {
                let p = self.camera.unproject(index % self.width, index / self.width, z);
                n.dot(&p) <= d
            }
            None => true,
        }
    }

    #[inline]
    fn write(&mut self, index: usize, z: f64, _: u32, _: [f64; 3]) {
        self.depth[index] = z as f32;
        let (i, j) = (index % self.width, index / self.width);
        self.dirty = Some(match self.dirty {
            None => [i, j, i, j],
            Some([x0, y0, x1, y1]) => [x0.min(i), y0.min(j), x1.max(i), y1.max(j)],
        });
    }
}
