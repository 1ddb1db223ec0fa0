//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::Vector3;
use std::sync::Arc;
use tactile_core::config::{LightSpec, PhongMaterial, SensorConfig};
use tactile_core::geometry::{benchmark_sphere, Pose, TriangleMesh};
use tactile_core::scene::{apply_deformation, ContactReport, DeformedScene, Role, Scene};

pub type V3 = Vector3<f64>;

/// Möller–Trumbore ray/triangle intersection without back-face rejection.
/// Returns (t, u, v) with the hit at `orig + t·dir = (1-u-v)·a + u·b + v·c`.
pub fn moller_trumbore(orig: &V3, dir: &V3, a: &V3, b: &V3, c: &V3) -> Option<(f64, f64, f64)> {
    let e1 = b - a;
    let e2 = c - a;
    let p = dir.cross(&e2);
    let det = e1.dot(&p);
    if det.abs() < 1e-300 {
        return None;
    }
    let inv = 1.0 / det;
    let s = orig - a;
    let u = s.dot(&p) * inv;
    if !(0.0..=1.0).contains(&u) {
        return None;
    }
    let q = s.cross(&e1);
    let v = dir.dot(&q) * inv;
    if v < 0.0 || u + v > 1.0 {
        return None;
    }
    let t = e2.dot(&q) * inv;
    (t > 0.0).then_some((t, u, v))
}

/// Phong sum written out channel by channel, no shadows.
pub fn phong_reference(
    p: &V3,
    n: &V3,
    v: &V3,
    m: &PhongMaterial,
    ambient: &V3,
    lights: &[LightSpec],
) -> [f64; 3] {
    let mut out = [0.0; 3];
    for ch in 0..3 {
        let mut c = m.ambient[ch] * ambient[ch];
        for light in lights {
            let d = (light.position - p).norm();
            let l = (light.position - p) / d;
            let ndl = n.dot(&l);
            if ndl <= 0.0 {
                continue;
            }
            let r = 2.0 * ndl * n - l;
            let rv = r.dot(v).max(0.0);
            let [k0, k1, k2] = light.attenuation;
            let att = 1.0 / (k0 + k1 * d + k2 * d * d);
            c += att * light.intensity * light.color[ch] * (m.diffuse[ch] * ndl + m.specular[ch] * rv.powf(m.shininess));
        }
        out[ch] = c.clamp(0.0, 1.0);
    }
    out
}

/// World-space triangle of a snapshot with its vertex normals.
pub struct WorldTriangle {
    pub v: [V3; 3],
    pub n: [V3; 3],
    pub role: Role,
}

pub fn world_triangles(scene: &DeformedScene) -> Vec<WorldTriangle> {
    let mut out = Vec::new();
    for inst in scene.instances() {
        let mesh = inst.mesh.mesh();
        for f in mesh.faces() {
            let idx = f.map(|k| k as usize);
            out.push(WorldTriangle {
                v: idx.map(|k| inst.pose.transform_point(&(mesh.vertices()[k] * inst.scale))),
                n: idx.map(|k| inst.pose.transform_vector(&mesh.normals()[k])),
                role: inst.role,
            });
        }
    }
    out
}

/// Nearest visible hit along a ray: objects are one-sided, the gel is not.
pub fn cast(tris: &[WorldTriangle], orig: &V3, dir: &V3) -> Option<(f64, usize, f64, f64)> {
    let mut best: Option<(f64, usize, f64, f64)> = None;
    for (k, t) in tris.iter().enumerate() {
        if t.role == Role::Object {
            let n = (t.v[1] - t.v[0]).cross(&(t.v[2] - t.v[0]));
            if n.dot(&(t.v[0] - orig)) >= 0.0 {
                continue;
            }
        }
        if let Some((d, u, v)) = moller_trumbore(orig, dir, &t.v[0], &t.v[1], &t.v[2]) {
            if best.is_none_or(|b| d < b.0) {
                best = Some((d, k, u, v));
            }
        }
    }
    best
}

/// Sensor config with a sphere of `radius` resting on the gel centre,
/// offset by `(dx, dy)` and pressed with `force`.
pub fn pressed_sphere(config: &SensorConfig, radius: f64, dx: f64, dy: f64, force: f64) -> (Scene, DeformedScene) {
    let mut scene = Scene::new(config, Pose::identity()).unwrap();
    let gel = config.gel.pose;
    let normal = gel.transform_vector(&V3::z());
    let pose = gel.compose(&Pose::from_translation(V3::new(dx, dy, radius + 2e-6)));
    scene
        .add_body("ball", Arc::new(benchmark_sphere(radius)) as Arc<TriangleMesh>, pose, 1.0)
        .unwrap();
    scene
        .set_contacts(vec![ContactReport {
            body_id: "ball".into(),
            normal_force: force,
            contact_normal: normal,
        }])
        .unwrap();
    let deformed = apply_deformation(&scene, config);
    (scene, deformed)
}

pub fn luminance(p: [u8; 3]) -> f64 {
    0.299 * p[0] as f64 + 0.587 * p[1] as f64 + 0.114 * p[2] as f64
}
