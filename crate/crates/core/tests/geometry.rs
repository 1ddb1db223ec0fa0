use nalgebra::UnitQuaternion;
use proptest::prelude::*;
use tactile_core::config::SensorConfig;
use tactile_core::geometry::{
    cuboid, depth_to_heightfield, geodesic_sphere, load_mesh, mesh_aabb, parse_obj, parse_stl, planar_grid,
    smooth_mesh, stl_bytes, write_obj, write_stl, Pose, TriangleMesh, Vec3,
};
use tactile_core::imaging::DepthImage;
use tactile_core::render::rasterize_depth;
use tactile_core::scene::{DeformedScene, Instance, Role, SceneMesh};
use std::sync::Arc;

fn pose() -> impl Strategy<Value = Pose> {
    (
        prop::array::uniform3(-1.0..1.0f64),
        prop::array::uniform3(-3.2..3.2f64),
    )
        .prop_map(|(t, r)| Pose::new(Vec3::from(t), UnitQuaternion::from_scaled_axis(Vec3::from(r))))
}

fn jittered(mesh: TriangleMesh, noise: &[f64]) -> TriangleMesh {
    let verts = mesh
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| v + Vec3::new(noise[3 * i % noise.len()], noise[(3 * i + 1) % noise.len()], noise[(3 * i + 2) % noise.len()]))
        .collect();
    TriangleMesh::new(verts, mesh.faces().to_vec()).unwrap()
}

// Laplacian quadratic form: sum over unique edges of |vi - vj|^2.
fn energy(mesh: &TriangleMesh) -> f64 {
    let mut edges = std::collections::BTreeSet::new();
    for f in mesh.faces() {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let v = mesh.vertices();
    edges.iter().map(|&(a, b)| (v[a as usize] - v[b as usize]).norm_squared()).sum()
}

fn scene_of(mesh: TriangleMesh) -> DeformedScene {
    let mut s = DeformedScene::new(Pose::identity());
    s.gel = Some(Instance::new("hf", Arc::new(SceneMesh::new(mesh)), Pose::identity(), 1.0, Role::Gel));
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_round_trips_points(p in pose(), x in prop::array::uniform3(-1.0..1.0f64)) {
        let x = Vec3::from(x);
        let back = p.inverse().transform_point(&p.transform_point(&x));
        prop_assert!((back - x).norm() < 1e-12);
        let id = p.compose(&p.inverse());
        prop_assert!(id.translation.norm() < 1e-12);
        prop_assert!(id.rotation.angle() < 1e-9);
    }

    #[test]
    fn identity_is_neutral(p in pose()) {
        for q in [Pose::identity().compose(&p), p.compose(&Pose::identity())] {
            prop_assert!((q.translation - p.translation).norm() < 1e-15);
            prop_assert!(q.rotation.angle_to(&p.rotation) < 1e-9);
        }
    }

    #[test]
    fn smoothing_keeps_counts_and_lowers_energy(
        noise in prop::collection::vec(-0.05..0.05f64, 30..90),
        lambda in 0.01..=1.0f64,
        closed in any::<bool>(),
    ) {
        let base = if closed { geodesic_sphere(1.0, 3) } else { planar_grid(7, 6, 0.2) };
        let mut mesh = jittered(base, &noise);
        let mut e = energy(&mesh);
        for _ in 0..4 {
            let next = smooth_mesh(&mesh, 1, lambda).unwrap();
            prop_assert_eq!(next.vertex_count(), mesh.vertex_count());
            prop_assert_eq!(next.face_count(), mesh.face_count());
            prop_assert_eq!(next.faces(), mesh.faces());
            let e2 = energy(&next);
            prop_assert!(e2 <= e * (1.0 + 1e-12) + 1e-18, "energy rose {} -> {}", e, e2);
            mesh = next;
            e = e2;
        }
    }

    #[test]
    fn rotated_box_aabb_contains_corners(p in pose(), ext in prop::array::uniform3(0.01..2.0f64)) {
        let mesh = cuboid(Vec3::from(ext));
        let aabb = mesh_aabb(&mesh, &p);
        for v in mesh.vertices() {
            let w = p.transform_point(v);
            prop_assert!((0..3).all(|k| w[k] >= aabb.min[k] - 1e-12 && w[k] <= aabb.max[k] + 1e-12));
        }
        // tight: every face of the box touches some vertex
        for k in 0..3 {
            let lo = mesh.vertices().iter().map(|v| p.transform_point(v)[k]).fold(f64::INFINITY, f64::min);
            prop_assert!((lo - aabb.min[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn heightfield_reproduces_smooth_depth(
        amp in 0.0..0.003f64,
        fx in 0.5..3.0f64,
        fy in 0.5..3.0f64,
        base in 0.015..0.03f64,
    ) {
        let mut cam = SensorConfig::digit().cameras[0].clone();
        cam.width = 48;
        cam.height = 36;
        let mut depth = DepthImage::filled(48, 36, cam.far_clip as f32);
        for j in 0..36 {
            for i in 0..48 {
                let (u, v) = (i as f64 / 47.0, j as f64 / 35.0);
                let z = base + amp * (fx * u * std::f64::consts::PI).sin() * (fy * v * std::f64::consts::PI).cos();
                depth.values[j * 48 + i] = z as f32;
            }
        }
        let mesh = depth_to_heightfield(&depth, &cam).unwrap();
        let back = rasterize_depth(&scene_of(mesh), &cam);
        for j in 1..35 {
            for i in 1..47 {
                let (a, b) = (depth.get(i, j) as f64, back.get(i, j) as f64);
                prop_assert!((a - b).abs() <= 1e-4, "pixel ({}, {}): {} vs {}", i, j, a, b);
            }
        }
    }
}

#[test]
fn load_mesh_is_deterministic_for_both_formats() {
    let tmp = tempfile::tempdir().unwrap();
    let mesh = geodesic_sphere(0.01, 4);
    let obj = tmp.path().join("m.obj");
    let stl = tmp.path().join("m.stl");
    write_obj(&mesh, &obj).unwrap();
    write_stl(&mesh, &stl).unwrap();
    for path in [&obj, &stl] {
        let a = load_mesh(path).unwrap();
        let b = load_mesh(path).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.face_count(), mesh.face_count());
        assert!(a.normals().iter().all(|n| (n.norm() - 1.0).abs() < 1e-9));
    }
    let bytes = std::fs::read(&stl).unwrap();
    assert_eq!(bytes.len(), 84 + 50 * mesh.face_count());
    assert_eq!(u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize, mesh.face_count());
    assert_eq!(parse_stl(&stl_bytes(&mesh)).unwrap(), parse_stl(&bytes).unwrap());
    let text = std::fs::read_to_string(&obj).unwrap();
    assert_eq!(parse_obj(&text).unwrap(), load_mesh(&obj).unwrap());
}

#[test]
fn unknown_extension_and_missing_file_are_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let ply = tmp.path().join("m.ply");
    std::fs::write(&ply, "ply\n").unwrap();
    assert!(load_mesh(&ply).is_err());
    assert!(load_mesh(tmp.path().join("absent.obj")).is_err());
}
