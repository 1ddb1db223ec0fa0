use super::pose::{Pose, Vec3};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("mesh file not found: {0}")]
    MissingFile(String),
    #[error("malformed mesh: {0}")]
    MalformedMesh(String),
    #[error("i/o error reading mesh: {0}")]
    Io(#[from] std::io::Error),
}

/// Indexed triangle mesh with one unit normal per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    vertices: Vec<Vec3>,
    normals: Vec<Vec3>,
    faces: Vec<[u32; 3]>,
}

impl TriangleMesh {
    /// Builds a mesh and computes area-weighted vertex normals.
    pub fn new(vertices: Vec<Vec3>, faces: Vec<[u32; 3]>) -> Result<Self, MeshError> {
        check_topology(&vertices, &faces)?;
        let normals = area_weighted_normals(&vertices, &faces);
        Ok(Self {
            vertices,
            normals,
            faces,
        })
    }

    /// Builds a mesh with caller-supplied normals. Normals are renormalized;
    /// a zero normal is replaced by the area-weighted one.
    pub fn with_normals(
        vertices: Vec<Vec3>,
        normals: Vec<Vec3>,
        faces: Vec<[u32; 3]>,
    ) -> Result<Self, MeshError> {
        check_topology(&vertices, &faces)?;
        if normals.len() != vertices.len() {
            return Err(MeshError::MalformedMesh(format!(
                "{} normals for {} vertices",
                normals.len(),
                vertices.len()
            )));
        }
        let fallback = area_weighted_normals(&vertices, &faces);
        let normals = normals
            .into_iter()
            .zip(fallback)
            .map(|(n, f)| {
                let len = n.norm();
                if len.is_finite() && len > 1e-12 {
                    n / len
                } else {
                    f
                }
            })
            .collect();
        Ok(Self {
            vertices,
            normals,
            faces,
        })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn normals(&self) -> &[Vec3] {
        &self.normals
    }

    pub fn faces(&self) -> &[[u32; 3]] {
        &self.faces
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn face_normal(&self, face: usize) -> Vec3 {
        let [a, b, c] = self.faces[face];
        let (a, b, c) = (
            self.vertices[a as usize],
            self.vertices[b as usize],
            self.vertices[c as usize],
        );
        (b - a).cross(&(c - a)).normalize()
    }

    /// Axis-aligned bounds in the mesh's own frame.
    pub fn local_aabb(&self) -> Aabb {
        Aabb::from_points(self.vertices.iter().copied())
    }

    /// Flips every face's winding and every normal.
    pub fn flipped(&self) -> Self {
        Self {
            vertices: self.vertices.clone(),
            normals: self.normals.iter().map(|n| -n).collect(),
            faces: self.faces.iter().map(|&[a, b, c]| [a, c, b]).collect(),
        }
    }

    /// Returns a copy with every vertex scaled about the origin.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            vertices: self.vertices.iter().map(|v| v * s).collect(),
            normals: self.normals.clone(),
            faces: self.faces.clone(),
        }
    }
}

fn check_topology(vertices: &[Vec3], faces: &[[u32; 3]]) -> Result<(), MeshError> {
    if let Some(i) = vertices.iter().position(|v| !v.iter().all(|c| c.is_finite())) {
        return Err(MeshError::MalformedMesh(format!("vertex {i} is not finite")));
    }
    let n = vertices.len();
    for (i, f) in faces.iter().enumerate() {
        if f.iter().any(|&idx| idx as usize >= n) {
            return Err(MeshError::MalformedMesh(format!(
                "face {i} references a vertex outside 0..{n}"
            )));
        }
        if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
            return Err(MeshError::MalformedMesh(format!(
                "face {i} repeats a vertex index"
            )));
        }
    }
    Ok(())
}

/// Sum of unnormalized face normals (|cross| = 2·area) around each vertex,
/// normalized. Isolated vertices get +z.
pub fn area_weighted_normals(vertices: &[Vec3], faces: &[[u32; 3]]) -> Vec<Vec3> {
    let mut acc = vec![Vec3::zeros(); vertices.len()];
    for &[a, b, c] in faces {
        let (pa, pb, pc) = (
            vertices[a as usize],
            vertices[b as usize],
            vertices[c as usize],
        );
        let n = (pb - pa).cross(&(pc - pa));
        acc[a as usize] += n;
        acc[b as usize] += n;
        acc[c as usize] += n;
    }
    acc.into_iter()
        .map(|n| {
            let len = n.norm();
            if len > 0.0 && len.is_finite() {
                n / len
            } else {
                Vec3::z()
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn empty() -> Self {
        Self {
            min: Vec3::repeat(f64::INFINITY),
            max: Vec3::repeat(f64::NEG_INFINITY),
        }
    }

    pub fn from_points(points: impl IntoIterator<Item = Vec3>) -> Self {
        let mut b = Self::empty();
        for p in points {
            b.grow(&p);
        }
        b
    }

    pub fn is_empty(&self) -> bool {
        self.min.x > self.max.x
    }

    pub fn grow(&mut self, p: &Vec3) {
        self.min = self.min.inf(p);
        self.max = self.max.sup(p);
    }

    pub fn union(&self, other: &Aabb) -> Aabb {
        Aabb {
            min: self.min.inf(&other.min),
            max: self.max.sup(&other.max),
        }
    }

    pub fn center(&self) -> Vec3 {
        (self.min + self.max) * 0.5
    }

    pub fn contains(&self, p: &Vec3) -> bool {
        (0..3).all(|i| p[i] >= self.min[i] && p[i] <= self.max[i])
    }

    pub fn corners(&self) -> [Vec3; 8] {
        let (a, b) = (self.min, self.max);
        [
            Vec3::new(a.x, a.y, a.z),
            Vec3::new(b.x, a.y, a.z),
            Vec3::new(a.x, b.y, a.z),
            Vec3::new(b.x, b.y, a.z),
            Vec3::new(a.x, a.y, b.z),
            Vec3::new(b.x, a.y, b.z),
            Vec3::new(a.x, b.y, b.z),
            Vec3::new(b.x, b.y, b.z),
        ]
    }

    /// Bounds of this box after a scale about the origin and a rigid pose.
    pub fn transformed(&self, pose: &Pose, scale: f64) -> Aabb {
        if self.is_empty() {
            return *self;
        }
        Aabb::from_points(
            self.corners()
                .iter()
                .map(|c| pose.transform_point(&(c * scale))),
        )
    }
}

/// World-space bounds of every vertex of `mesh` placed at `pose`.
pub fn mesh_aabb(mesh: &TriangleMesh, pose: &Pose) -> Aabb {
    Aabb::from_points(mesh.vertices().iter().map(|v| pose.transform_point(v)))
}
