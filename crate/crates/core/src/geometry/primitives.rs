//! Procedural meshes: the benchmark icosphere, demo primitives and the
//! parametric gel slab.

use super::mesh::TriangleMesh;
use super::pose::Vec3;
use std::collections::HashMap;

/// Axis-aligned unit cube centred on the origin: 8 shared vertices, 12 faces.
pub fn unit_cube() -> TriangleMesh {
    let v: Vec<Vec3> = (0..8)
        .map(|i| {
            Vec3::new(
                if i & 1 == 0 { -0.5 } else { 0.5 },
                if i & 2 == 0 { -0.5 } else { 0.5 },
                if i & 4 == 0 { -0.5 } else { 0.5 },
            )
        })
        .collect();
    let faces = vec![
        [0, 2, 1], [1, 2, 3], // -z
        [4, 5, 6], [5, 7, 6], // +z
        [0, 1, 4], [1, 5, 4], // -y
        [2, 6, 3], [3, 6, 7], // +y
        [0, 4, 2], [2, 4, 6], // -x
        [1, 3, 5], [3, 7, 5], // +x
    ];
    TriangleMesh::new(v, faces).expect("static cube topology")
}

/// Box with the given full extents, centred on the origin. Each side has its
/// own four vertices so that faces shade flat.
pub fn cuboid(extents: Vec3) -> TriangleMesh {
    let h = extents * 0.5;
    let mut vertices = Vec::with_capacity(24);
    let mut normals = Vec::with_capacity(24);
    let mut faces = Vec::with_capacity(12);
    for axis in 0..3 {
        for sign in [-1.0, 1.0] {
            let n = Vec3::ith(axis, sign);
            let u = Vec3::ith((axis + 1) % 3, 1.0);
            let w = n.cross(&u);
            let c = n.component_mul(&h);
            let hu = u.component_mul(&h);
            let hw = w.component_mul(&h);
            let base = vertices.len() as u32;
            for (a, b) in [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)] {
                vertices.push(c + hu * a + hw * b);
                normals.push(n);
            }
            faces.push([base, base + 1, base + 2]);
            faces.push([base, base + 2, base + 3]);
        }
    }
    TriangleMesh::with_normals(vertices, normals, faces).expect("static box topology")
}

const ICOSAHEDRON_FACES: [[usize; 3]; 20] = [
    [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
    [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
    [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
    [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
];

fn icosahedron_vertices() -> [Vec3; 12] {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    [
        Vec3::new(-1.0, t, 0.0),
        Vec3::new(1.0, t, 0.0),
        Vec3::new(-1.0, -t, 0.0),
        Vec3::new(1.0, -t, 0.0),
        Vec3::new(0.0, -1.0, t),
        Vec3::new(0.0, 1.0, t),
        Vec3::new(0.0, -1.0, -t),
        Vec3::new(0.0, 1.0, -t),
        Vec3::new(t, 0.0, -1.0),
        Vec3::new(t, 0.0, 1.0),
        Vec3::new(-t, 0.0, -1.0),
        Vec3::new(-t, 0.0, 1.0),
    ]
    .map(|v| v.normalize())
}

#[derive(Hash, PartialEq, Eq)]
enum GridKey {
    Corner(usize),
    Edge(usize, usize, usize),
    Interior(usize, usize, usize),
}

/// Geodesic sphere: each icosahedron face split into `frequency²` triangles
/// and projected onto the sphere, giving `20·frequency²` faces.
/// Normals are the exact radial directions.
pub fn geodesic_sphere(radius: f64, frequency: usize) -> TriangleMesh {
    let n = frequency.max(1);
    let base = icosahedron_vertices();
    let mut index: HashMap<GridKey, u32> = HashMap::new();
    let mut dirs: Vec<Vec3> = Vec::new();
    let mut faces = Vec::with_capacity(20 * n * n);

    let mut vertex = |face: usize, i: usize, j: usize| -> u32 {
        let [a, b, c] = ICOSAHEDRON_FACES[face];
        let k = n - i - j;
        // Point = (k·A + i·B + j·C) / n, keyed canonically so shared edges
        // and corners are generated once.
        let key = match (i, j, k) {
            (0, 0, _) => GridKey::Corner(a),
            (_, 0, 0) => GridKey::Corner(b),
            (0, _, 0) => GridKey::Corner(c),
            (_, 0, _) => edge_key(a, b, i, n),
            (0, _, _) => edge_key(a, c, j, n),
            (_, _, 0) => edge_key(b, c, j, n),
            _ => GridKey::Interior(face, i, j),
        };
        *index.entry(key).or_insert_with_key(|key| {
            let p = match *key {
                GridKey::Corner(v) => base[v],
                GridKey::Edge(lo, hi, s) => {
                    let t = s as f64 / n as f64;
                    base[lo] * (1.0 - t) + base[hi] * t
                }
                GridKey::Interior(..) => {
                    (base[a] * k as f64 + base[b] * i as f64 + base[c] * j as f64) / n as f64
                }
            };
            dirs.push(p.normalize());
            (dirs.len() - 1) as u32
        })
    };

    for face in 0..20 {
        for i in 0..n {
            for j in 0..(n - i) {
                let p00 = vertex(face, i, j);
                let p10 = vertex(face, i + 1, j);
                let p01 = vertex(face, i, j + 1);
                faces.push([p00, p10, p01]);
                if i + j + 1 < n {
                    let p11 = vertex(face, i + 1, j + 1);
                    faces.push([p10, p11, p01]);
                }
            }
        }
    }

    let vertices = dirs.iter().map(|d| d * radius).collect();
    TriangleMesh::with_normals(vertices, dirs, faces).expect("geodesic topology")
}

fn edge_key(a: usize, b: usize, steps_from_a: usize, n: usize) -> GridKey {
    if a < b {
        GridKey::Edge(a, b, steps_from_a)
    } else {
        GridKey::Edge(b, a, n - steps_from_a)
    }
}

/// Sphere used by the benchmark: 20·25² = 12 500 faces.
pub fn benchmark_sphere(radius: f64) -> TriangleMesh {
    geodesic_sphere(radius, BENCHMARK_SPHERE_FREQUENCY)
}

pub const BENCHMARK_SPHERE_FREQUENCY: usize = 25;

/// Closed cylinder of the given radius and length with its axis along x.
pub fn cylinder(radius: f64, length: f64, segments: usize) -> TriangleMesh {
    let segments = segments.max(3);
    let hl = length / 2.0;
    let mut vertices = Vec::new();
    let mut normals = Vec::new();
    let mut faces = Vec::new();
    // side rings
    for s in 0..segments {
        let a = std::f64::consts::TAU * s as f64 / segments as f64;
        let (sin, cos) = a.sin_cos();
        let radial = Vec3::new(0.0, cos, sin);
        for x in [-hl, hl] {
            vertices.push(Vec3::new(x, 0.0, 0.0) + radial * radius);
            normals.push(radial);
        }
    }
    for s in 0..segments {
        let i0 = (2 * s) as u32;
        let i1 = (2 * ((s + 1) % segments)) as u32;
        faces.push([i0, i1, i0 + 1]);
        faces.push([i0 + 1, i1, i1 + 1]);
    }
    // caps
    for (x, sign) in [(-hl, -1.0), (hl, 1.0)] {
        let center = vertices.len() as u32;
        vertices.push(Vec3::new(x, 0.0, 0.0));
        normals.push(Vec3::new(sign, 0.0, 0.0));
        let first = vertices.len() as u32;
        for s in 0..segments {
            let a = std::f64::consts::TAU * s as f64 / segments as f64;
            let (sin, cos) = a.sin_cos();
            vertices.push(Vec3::new(x, cos * radius, sin * radius));
            normals.push(Vec3::new(sign, 0.0, 0.0));
        }
        for s in 0..segments as u32 {
            let a = first + s;
            let b = first + (s + 1) % segments as u32;
            if sign > 0.0 {
                faces.push([center, a, b]);
            } else {
                faces.push([center, b, a]);
            }
        }
    }
    TriangleMesh::with_normals(vertices, normals, faces).expect("cylinder topology")
}

/// Rectangular gel surface in its local frame, centred on the origin in the
/// xy-plane. A point at radius r sits at `z = -curvature·r²/2`, so a positive
/// curvature bulges the centre outwards (+z). Normals face −z, into the
/// sensor.
pub fn gel_slab(width: f64, height: f64, curvature: f64, segments: [usize; 2]) -> TriangleMesh {
    let (nx, ny) = (segments[0].max(1), segments[1].max(1));
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        let y = -height / 2.0 + height * j as f64 / ny as f64;
        for i in 0..=nx {
            let x = -width / 2.0 + width * i as f64 / nx as f64;
            vertices.push(Vec3::new(x, y, -curvature * (x * x + y * y) / 2.0));
        }
    }
    let idx = |i: usize, j: usize| (j * (nx + 1) + i) as u32;
    let mut faces = Vec::with_capacity(nx * ny * 2);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i, j + 1), idx(i + 1, j + 1));
            faces.push([a, c, b]);
            faces.push([b, c, d]);
        }
    }
    TriangleMesh::new(vertices, faces).expect("grid topology")
}

/// Flat grid in the xy-plane with normals facing +z, used by tests and
/// smoothing experiments.
pub fn planar_grid(nx: usize, ny: usize, spacing: f64) -> TriangleMesh {
    gel_slab(nx as f64 * spacing, ny as f64 * spacing, 0.0, [nx, ny]).flipped()
}
