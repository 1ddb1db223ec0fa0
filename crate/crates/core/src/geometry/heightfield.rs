use super::mesh::TriangleMesh;
use super::pose::Vec3;
use crate::config::CameraSpec;
use crate::imaging::{check_dims, DepthImage, DimensionMismatch};

/// Depth samples on the pixel grid of a camera.
#[derive(Debug, Clone, PartialEq)]
pub struct Heightfield {
    pub width: usize,
    pub height: usize,
    /// Row-major camera-frame z in meters; `None` marks background.
    pub depths: Vec<Option<f64>>,
    pub camera: CameraSpec,
}

impl Heightfield {
    pub fn from_depth(depth: &DepthImage, camera: &CameraSpec) -> Result<Self, DimensionMismatch> {
        check_dims((camera.width, camera.height), depth.dims())?;
        let (near, far) = (camera.near_clip, camera.far_clip);
        let depths = depth
            .values
            .iter()
            .map(|&v| {
                let v = v as f64;
                (v.is_finite() && v >= near && v < far && v < depth.far as f64).then_some(v)
            })
            .collect();
        Ok(Self {
            width: depth.width,
            height: depth.height,
            depths,
            camera: camera.clone(),
        })
    }

    /// Grid mesh in the camera frame: one vertex per valid sample, unprojected
    /// through the pixel centre, and two triangles per quad of four valid
    /// samples. Faces wind towards the camera.
    pub fn to_mesh(&self) -> TriangleMesh {
        let cam = self.camera.intrinsics();
        let mut index = vec![u32::MAX; self.width * self.height];
        let mut vertices = Vec::new();
        for j in 0..self.height {
            for i in 0..self.width {
                if let Some(z) = self.depths[j * self.width + i] {
                    index[j * self.width + i] = vertices.len() as u32;
                    vertices.push(cam.unproject(i, j, z));
                }
            }
        }
        let mut faces = Vec::new();
        for j in 0..self.height.saturating_sub(1) {
            for i in 0..self.width.saturating_sub(1) {
                let a = index[j * self.width + i];
                let b = index[j * self.width + i + 1];
                let c = index[(j + 1) * self.width + i];
                let d = index[(j + 1) * self.width + i + 1];
                if [a, b, c, d].contains(&u32::MAX) {
                    continue;
                }
                faces.push([a, c, b]);
                faces.push([b, c, d]);
            }
        }
        let mut mesh = TriangleMesh::new(vertices, faces).expect("grid topology is valid");
        // isolated samples default to facing the camera
        let normals: Vec<Vec3> = mesh
            .normals()
            .iter()
            .map(|n| if *n == Vec3::z() { -Vec3::z() } else { *n })
            .collect();
        if normals.as_slice() != mesh.normals() {
            mesh = TriangleMesh::with_normals(mesh.vertices().to_vec(), normals, mesh.faces().to_vec())
                .expect("same topology");
        }
        mesh
    }
}

/// Converts a depth image into a camera-frame surface mesh.
pub fn depth_to_heightfield(
    depth: &DepthImage,
    camera: &CameraSpec,
) -> Result<TriangleMesh, DimensionMismatch> {
    Ok(Heightfield::from_depth(depth, camera)?.to_mesh())
}
