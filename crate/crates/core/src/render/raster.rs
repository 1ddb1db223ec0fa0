//! Triangle rasterization with pixel-centre sampling.
//!
//! Depth is interpolated as 1/z in screen space, which gives the exact
//! camera-frame z of the triangle's plane along each pixel ray. Attribute
//! weights are perspective-correct barycentrics of the original (unclipped)
//! triangle.

use crate::geometry::{Aabb, Pinhole, Pose, Vec3};
use crate::scene::{Instance, Role};

/// Coverage tolerance on normalized barycentrics. Pixel centres lying on a
/// shared edge are covered by both triangles; the depth test picks one.
const COVERAGE_EPS: f64 = 1e-9;

/// Receives candidate fragments from the rasterizer.
pub trait FragmentSink {
    /// Depth test; `true` means the fragment should be written.
    fn test(&mut self, index: usize, z: f64) -> bool;
    fn write(&mut self, index: usize, z: f64, triangle: u32, bary: [f64; 3]);
}

#[derive(Clone, Copy)]
struct ClipVertex {
    p: Vec3,
    bary: [f64; 3],
}

/// Conservative frustum test of a box given in the instance's local frame.
pub fn box_outside_frustum(cam: &Pinhole, model_view: &Pose, scale: f64, local: &Aabb) -> bool {
    if local.is_empty() {
        return true;
    }
    let corners = local.corners().map(|c| model_view.transform_point(&(c * scale)));
    let (hx, hy) = cam.half_extents();
    let all = |f: &dyn Fn(&Vec3) -> bool| corners.iter().all(f);
    all(&|p| p.z < cam.near)
        || all(&|p| p.z >= cam.far)
        || all(&|p| p.x > hx * p.z)
        || all(&|p| p.x < -hx * p.z)
        || all(&|p| p.y > hy * p.z)
        || all(&|p| p.y < -hy * p.z)
}

/// Rasterizes every triangle of one instance. `view` maps world to camera.
pub fn rasterize_instance<S: FragmentSink>(
    cam: &Pinhole,
    view: &Pose,
    instance: &Instance,
    cull_frustum: bool,
    scratch: &mut Vec<Vec3>,
    sink: &mut S,
) {
    let model_view = view.compose(&instance.pose);
    if cull_frustum
        && box_outside_frustum(cam, &model_view, instance.scale, instance.mesh.local_aabb())
    {
        return;
    }
    let mesh = instance.mesh.mesh();
    let s = instance.scale;
    scratch.clear();
    scratch.extend(
        mesh.vertices()
            .iter()
            .map(|v| model_view.transform_point(&(v * s))),
    );
    let cull_back = instance.role == Role::Object;
    for (t, f) in mesh.faces().iter().enumerate() {
        let tri = [
            scratch[f[0] as usize],
            scratch[f[1] as usize],
            scratch[f[2] as usize],
        ];
        rasterize_triangle(cam, tri, t as u32, cull_back, sink);
    }
}

/// Rasterizes one camera-frame triangle, clipping it against the near plane.
pub fn rasterize_triangle<S: FragmentSink>(
    cam: &Pinhole,
    tri: [Vec3; 3],
    triangle: u32,
    cull_back: bool,
    sink: &mut S,
) {
    if cull_back {
        // Camera at the origin: front faces have their normal pointing at it.
        let n = (tri[1] - tri[0]).cross(&(tri[2] - tri[0]));
        if n.dot(&tri[0]) >= 0.0 {
            return;
        }
    }
    let near = cam.near;
    let behind = tri.iter().filter(|p| p.z < near).count();
    let corners = [
        ClipVertex { p: tri[0], bary: [1.0, 0.0, 0.0] },
        ClipVertex { p: tri[1], bary: [0.0, 1.0, 0.0] },
        ClipVertex { p: tri[2], bary: [0.0, 0.0, 1.0] },
    ];
    match behind {
        0 => fill(cam, &corners, triangle, sink),
        3 => {}
        _ => {
            let mut poly: Vec<ClipVertex> = Vec::with_capacity(4);
            for k in 0..3 {
                let a = corners[k];
                let b = corners[(k + 1) % 3];
                let a_in = a.p.z >= near;
                let b_in = b.p.z >= near;
                if a_in {
                    poly.push(a);
                }
                if a_in != b_in {
                    let t = (near - a.p.z) / (b.p.z - a.p.z);
                    let mut p = a.p + (b.p - a.p) * t;
                    p.z = near;
                    let bary = std::array::from_fn(|i| a.bary[i] + (b.bary[i] - a.bary[i]) * t);
                    poly.push(ClipVertex { p, bary });
                }
            }
            for k in 1..poly.len().saturating_sub(1) {
                fill(cam, &[poly[0], poly[k], poly[k + 1]], triangle, sink);
            }
        }
    }
}

fn fill<S: FragmentSink>(cam: &Pinhole, v: &[ClipVertex; 3], triangle: u32, sink: &mut S) {
    let mut sx = [0.0; 3];
    let mut sy = [0.0; 3];
    let mut iz = [0.0; 3];
    for k in 0..3 {
        let (u, w) = cam.project(&v[k].p);
        sx[k] = u;
        sy[k] = w;
        iz[k] = 1.0 / v[k].p.z;
    }
    let area = (sx[1] - sx[0]) * (sy[2] - sy[0]) - (sy[1] - sy[0]) * (sx[2] - sx[0]);
    if area == 0.0 || !area.is_finite() {
        return;
    }
    let inv_area = 1.0 / area;

    let min_x = sx[0].min(sx[1]).min(sx[2]);
    let max_x = sx[0].max(sx[1]).max(sx[2]);
    let min_y = sy[0].min(sy[1]).min(sy[2]);
    let max_y = sy[0].max(sy[1]).max(sy[2]);
    let pad = 1e-7;
    let i0 = ((min_x - 0.5 - pad).ceil().max(0.0)) as i64;
    let i1 = ((max_x - 0.5 + pad).floor()).min(cam.width as f64 - 1.0) as i64;
    let j0 = ((min_y - 0.5 - pad).ceil().max(0.0)) as i64;
    let j1 = ((max_y - 0.5 + pad).floor()).min(cam.height as f64 - 1.0) as i64;
    if i0 > i1 || j0 > j1 {
        return;
    }

    for j in j0..=j1 {
        let py = j as f64 + 0.5;
        for i in i0..=i1 {
            let px = i as f64 + 0.5;
            let b0 = ((sx[2] - sx[1]) * (py - sy[1]) - (sy[2] - sy[1]) * (px - sx[1])) * inv_area;
            let b1 = ((sx[0] - sx[2]) * (py - sy[2]) - (sy[0] - sy[2]) * (px - sx[2])) * inv_area;
            let b2 = ((sx[1] - sx[0]) * (py - sy[0]) - (sy[1] - sy[0]) * (px - sx[0])) * inv_area;
            if b0 < -COVERAGE_EPS || b1 < -COVERAGE_EPS || b2 < -COVERAGE_EPS {
                continue;
            }
            let inv_z = b0 * iz[0] + b1 * iz[1] + b2 * iz[2];
            let z = 1.0 / inv_z;
            if !(z >= cam.near * (1.0 - 1e-12)) || z >= cam.far {
                continue;
            }
            let index = j as usize * cam.width + i as usize;
            if !sink.test(index, z) {
                continue;
            }
            let q = [b0 * iz[0] * z, b1 * iz[1] * z, b2 * iz[2] * z];
            let bary = std::array::from_fn(|c| {
                q[0] * v[0].bary[c] + q[1] * v[1].bary[c] + q[2] * v[2].bary[c]
            });
            sink.write(index, z, triangle, bary);
        }
    }
}

pub const NO_HIT: u32 = u32::MAX;

/// Per-pixel nearest surface: depth, instance, triangle and weights.
#[derive(Debug, Clone)]
pub struct GBuffer {
    pub width: usize,
    pub height: usize,
    pub depth: Vec<f64>,
    pub instance: Vec<u32>,
    pub triangle: Vec<u32>,
    pub bary: Vec<[f64; 3]>,
    far: f64,
    current: u32,
}

impl GBuffer {
    pub fn new() -> Self {
        Self {
            width: 0,
            height: 0,
            depth: Vec::new(),
            instance: Vec::new(),
            triangle: Vec::new(),
            bary: Vec::new(),
            far: f64::INFINITY,
            current: 0,
        }
    }

    pub fn reset(&mut self, width: usize, height: usize, far: f64) {
        let n = width * height;
        self.width = width;
        self.height = height;
        self.far = far;
        self.depth.clear();
        self.depth.resize(n, far);
        self.instance.clear();
        self.instance.resize(n, NO_HIT);
        self.triangle.clear();
        self.triangle.resize(n, 0);
        self.bary.clear();
        self.bary.resize(n, [0.0; 3]);
    }

    pub fn set_current_instance(&mut self, index: u32) {
        self.current = index;
    }

    pub fn far(&self) -> f64 {
        self.far
    }
}

impl Default for GBuffer {
    fn default() -> Self {
        Self::new()
    }
}

impl FragmentSink for GBuffer {
    #[inline]
    fn test(&mut self, index: usize, z: f64) -> bool {
        z < self.depth[index]
    }

    #[inline]
    fn write(&mut self, index: usize, z: f64, triangle: u32, bary: [f64; 3]) {
        self.depth[index] = z;
        self.instance[index] = self.current;
        self.triangle[index] = triangle;
        self.bary[index] = bary;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Collect(Vec<(usize, f64, [f64; 3])>);

    impl FragmentSink for Collect {
        fn test(&mut self, _: usize, _: f64) -> bool {
            true
        }
        fn write(&mut self, index: usize, z: f64, _: u32, bary: [f64; 3]) {
            self.0.push((index, z, bary));
        }
    }

    fn cam() -> Pinhole {
        Pinhole::from_fov(16, 12, 60f64.to_radians(), 0.01, 10.0)
    }

    #[test]
    fn back_faces_are_culled_for_objects_only() {
        let c = cam();
        // counter-clockwise as seen from the camera (y points down)
        let front = [
            Vec3::new(-1.0, -1.0, 2.0),
            Vec3::new(-1.0, 1.0, 2.0),
            Vec3::new(1.0, -1.0, 2.0),
        ];
        let n = (front[1] - front[0]).cross(&(front[2] - front[0]));
        assert!(n.dot(&front[0]) < 0.0);
        let back = [front[0], front[2], front[1]];
        let mut a = Collect(Vec::new());
        rasterize_triangle(&c, front, 0, true, &mut a);
        let mut b = Collect(Vec::new());
        rasterize_triangle(&c, back, 0, true, &mut b);
        let mut g = Collect(Vec::new());
        rasterize_triangle(&c, back, 0, false, &mut g);
        assert!(!a.0.is_empty());
        assert!(b.0.is_empty());
        assert_eq!(a.0.len(), g.0.len());
    }

    #[test]
    fn near_clipped_triangle_keeps_original_weights() {
        let c = cam();
        // plane z = 1 + y, partially behind the near plane
        let tri = [
            Vec3::new(-3.0, -0.999, 0.001),
            Vec3::new(3.0, -0.999, 0.001),
            Vec3::new(0.0, 2.0, 3.0),
        ];
        let mut out = Collect(Vec::new());
        rasterize_triangle(&c, tri, 0, false, &mut out);
        assert!(!out.0.is_empty());
        for (idx, z, bary) in out.0 {
            assert!(z >= c.near * (1.0 - 1e-9));
            let p = tri[0] * bary[0] + tri[1] * bary[1] + tri[2] * bary[2];
            assert!((p.z - z).abs() < 1e-9);
            let ray = c.pixel_ray(idx % c.width, idx / c.width);
            assert!((p - ray * z).norm() < 1e-9);
        }
    }

    #[test]
    fn frustum_test() {
        let c = cam();
        let b = Aabb {
            min: Vec3::repeat(-0.1),
            max: Vec3::repeat(0.1),
        };
        let at = |x: f64, z: f64| Pose::from_translation(Vec3::new(x, 0.0, z));
        assert!(!box_outside_frustum(&c, &at(0.0, 1.0), 1.0, &b));
        assert!(box_outside_frustum(&c, &at(5.0, 1.0), 1.0, &b));
        assert!(box_outside_frustum(&c, &at(0.0, -1.0), 1.0, &b));
        assert!(box_outside_frustum(&c, &at(0.0, 20.0), 1.0, &b));
        assert!(box_outside_frustum(&c, &at(0.0, 1.0), 1.0, &Aabb::empty()));
    }
}
