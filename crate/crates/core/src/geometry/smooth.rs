use super::mesh::{MeshError, TriangleMesh};
use super::pose::Vec3;
use std::collections::{BTreeSet, HashMap};

/// One-ring neighbour lists, sorted.
pub fn vertex_neighbors(mesh: &TriangleMesh) -> Vec<Vec<u32>> {
    let mut sets = vec![BTreeSet::new(); mesh.vertex_count()];
    for &[a, b, c] in mesh.faces() {
        for (p, q) in [(a, b), (b, c), (c, a)] {
            sets[p as usize].insert(q);
            sets[q as usize].insert(p);
        }
    }
    sets.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// Vertices lying on an edge used by exactly one face.
pub fn boundary_vertices(mesh: &TriangleMesh) -> Vec<bool> {
    let mut edge_use: HashMap<(u32, u32), u32> = HashMap::new();
    for &[a, b, c] in mesh.faces() {
        for (p, q) in [(a, b), (b, c), (c, a)] {
            *edge_use.entry((p.min(q), p.max(q))).or_default() += 1;
        }
    }
    let mut boundary = vec![false; mesh.vertex_count()];
    for ((p, q), n) in edge_use {
        if n == 1 {
            boundary[p as usize] = true;
            boundary[q as usize] = true;
        }
    }
    boundary
}

/// Uniform (umbrella) Laplacian smoothing.
///
/// Each interior vertex moves `lambda` of the way towards the centroid of its
/// one-ring, `iterations` times, with Jacobi updates. Boundary vertices of
/// open meshes stay fixed. Faces are untouched and normals are recomputed.
pub fn smooth_mesh(
    mesh: &TriangleMesh,
    iterations: usize,
    lambda: f64,
) -> Result<TriangleMesh, MeshError> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(MeshError::MalformedMesh(format!(
            "smoothing strength {lambda} outside (0, 1]"
        )));
    }
    let neighbors = vertex_neighbors(mesh);
    if let Some(v) = neighbors.iter().position(|n| n.is_empty()) {
        return Err(MeshError::MalformedMesh(format!("vertex {v} has no neighbours")));
    }
    if iterations == 0 {
        return Ok(mesh.clone());
    }
    let fixed = boundary_vertices(mesh);
    let mut current: Vec<Vec3> = mesh.vertices().to_vec();
    let mut next = current.clone();
    for _ in 0..iterations {
        for (v, ring) in neighbors.iter().enumerate() {
            if fixed[v] {
                next[v] = current[v];
                continue;
            }
            let centroid =
                ring.iter().map(|&n| current[n as usize]).sum::<Vec3>() / ring.len() as f64;
            next[v] = current[v] + (centroid - current[v]) * lambda;
        }
        std::mem::swap(&mut current, &mut next);
    }
    TriangleMesh::new(current, mesh.faces().to_vec())
}
