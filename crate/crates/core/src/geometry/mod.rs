//! Poses, triangle meshes, mesh I/O, smoothing and depth heightfields.

mod camera;
mod heightfield;
mod io;
mod mesh;
mod pose;
mod primitives;
mod smooth;

pub use camera::Pinhole;
pub use heightfield::{depth_to_heightfield, Heightfield};
pub use io::{load_mesh, obj_string, parse_obj, parse_stl, stl_bytes, write_obj, write_stl};
pub use mesh::{area_weighted_normals, mesh_aabb, Aabb, MeshError, TriangleMesh};
pub use pose::{compose, transform_point, Pose, Vec3};
pub use primitives::{
    benchmark_sphere, cuboid, cylinder, gel_slab, geodesic_sphere, planar_grid, unit_cube,
    BENCHMARK_SPHERE_FREQUENCY,
};
pub use smooth::{boundary_vertices, smooth_mesh, vertex_neighbors};
