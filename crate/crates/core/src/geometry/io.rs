//! OBJ and binary STL reading and writing.

use super::mesh::{MeshError, TriangleMesh};
use super::pose::Vec3;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// Loads an OBJ or binary STL mesh, chosen by file extension.
pub fn load_mesh(path: impl AsRef<Path>) -> Result<TriangleMesh, MeshError> {
    let path = path.as_ref();
    if !path.is_file() {
        return Err(MeshError::MissingFile(path.display().to_string()));
    }
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase());
    match ext.as_deref() {
        Some("obj") => parse_obj(&fs::read_to_string(path)?),
        Some("stl") => parse_stl(&fs::read(path)?),
        _ => Err(MeshError::MalformedMesh(format!(
            "unsupported mesh extension: {}",
            path.display()
        ))),
    }
}

fn obj_index(token: &str, count: usize, line: usize) -> Result<Option<usize>, MeshError> {
    if token.is_empty() {
        return Ok(None);
    }
    let raw: i64 = token
        .parse()
        .map_err(|_| MeshError::MalformedMesh(format!("line {line}: bad index '{token}'")))?;
    let idx = if raw > 0 {
        raw - 1
    } else if raw < 0 {
        count as i64 + raw
    } else {
        -1
    };
    if idx < 0 || idx as usize >= count {
        return Err(MeshError::MalformedMesh(format!(
            "line {line}: index {raw} out of range (have {count})"
        )));
    }
    Ok(Some(idx as usize))
}

fn parse_floats<const N: usize>(
    parts: &mut std::str::SplitWhitespace<'_>,
    line: usize,
) -> Result<[f64; N], MeshError> {
    let mut out = [0.0; N];
    for slot in out.iter_mut() {
        let tok = parts
            .next()
            .ok_or_else(|| MeshError::MalformedMesh(format!("line {line}: too few components")))?;
        *slot = tok
            .parse()
            .map_err(|_| MeshError::MalformedMesh(format!("line {line}: bad number '{tok}'")))?;
    }
    Ok(out)
}

/// Parses `v`, `vn` and `f` records. Polygons are fan-triangulated. When every
/// face corner carries a normal index, per-vertex normals are the normalized
/// average of the normals referenced at that vertex.
pub fn parse_obj(text: &str) -> Result<TriangleMesh, MeshError> {
    let mut positions: Vec<Vec3> = Vec::new();
    let mut file_normals: Vec<Vec3> = Vec::new();
    let mut faces: Vec<[u32; 3]> = Vec::new();
    let mut corner_normals: Vec<(usize, usize)> = Vec::new();
    let mut all_corners_have_normals = true;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        let mut parts = content.split_whitespace();
        match parts.next() {
            Some("v") => positions.push(Vec3::from(parse_floats::<3>(&mut parts, line)?)),
            Some("vn") => file_normals.push(Vec3::from(parse_floats::<3>(&mut parts, line)?)),
            Some("f") => {
                let mut corners = Vec::new();
                for tok in parts {
                    let mut fields = tok.split('/');
                    let v = obj_index(fields.next().unwrap_or(""), positions.len(), line)?
                        .ok_or_else(|| {
                            MeshError::MalformedMesh(format!("line {line}: face corner without vertex"))
                        })?;
                    let _texcoord = fields.next();
                    let n = match fields.next() {
                        Some(t) => obj_index(t, file_normals.len(), line)?,
                        None => None,
                    };
                    corners.push((v, n));
                }
                if corners.len() < 3 {
                    return Err(MeshError::MalformedMesh(format!(
                        "line {line}: face with fewer than 3 vertices"
                    )));
                }
                for &(v, n) in &corners {
                    match n {
                        Some(n) => corner_normals.push((v, n)),
                        None => all_corners_have_normals = false,
                    }
                }
                for k in 1..corners.len() - 1 {
                    faces.push([
                        corners[0].0 as u32,
                        corners[k].0 as u32,
                        corners[k + 1].0 as u32,
                    ]);
                }
            }
            _ => {}
        }
    }

    if faces.is_empty() {
        return Err(MeshError::MalformedMesh("no faces".into()));
    }
    if all_corners_have_normals && !corner_normals.is_empty() {
        let mut acc = vec![Vec3::zeros(); positions.len()];
        for (v, n) in corner_normals {
            acc[v] += file_normals[n];
        }
        TriangleMesh::with_normals(positions, acc, faces)
    } else {
        TriangleMesh::new(positions, faces)
    }
}

/// Parses a binary STL: 80-byte header, little-endian u32 triangle count,
/// then 50-byte records. Vertices with identical coordinates are merged.
pub fn parse_stl(bytes: &[u8]) -> Result<TriangleMesh, MeshError> {
    if bytes.len() < 84 {
        return Err(MeshError::MalformedMesh("STL shorter than its header".into()));
    }
    let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    let expected = 84 + 50 * count;
    if bytes.len() != expected {
        return Err(MeshError::MalformedMesh(format!(
            "binary STL declares {count} triangles ({expected} bytes) but file has {} bytes",
            bytes.len()
        )));
    }
    let mut lookup: HashMap<[u32; 3], u32> = HashMap::new();
    let mut vertices = Vec::new();
    let mut faces = Vec::with_capacity(count);
    for rec in bytes[84..].chunks_exact(50) {
        let mut face = [0u32; 3];
        for (k, slot) in face.iter_mut().enumerate() {
            let off = 12 + 12 * k;
            let bits: [u32; 3] = std::array::from_fn(|c| {
                u32::from_le_bytes(rec[off + 4 * c..off + 4 * c + 4].try_into().unwrap())
            });
            *slot = *lookup.entry(bits).or_insert_with(|| {
                vertices.push(Vec3::new(
                    f32::from_bits(bits[0]) as f64,
                    f32::from_bits(bits[1]) as f64,
                    f32::from_bits(bits[2]) as f64,
                ));
                (vertices.len() - 1) as u32
            });
        }
        faces.push(face);
    }
    TriangleMesh::new(vertices, faces)
}

pub fn obj_string(mesh: &TriangleMesh) -> String {
    let mut out = String::new();
    for v in mesh.vertices() {
        let _ = writeln!(out, "v {} {} {}", v.x, v.y, v.z);
    }
    for n in mesh.normals() {
        let _ = writeln!(out, "vn {} {} {}", n.x, n.y, n.z);
    }
    for f in mesh.faces() {
        let (a, b, c) = (f[0] + 1, f[1] + 1, f[2] + 1);
        let _ = writeln!(out, "f {a}//{a} {b}//{b} {c}//{c}");
    }
    out
}

pub fn write_obj(mesh: &TriangleMesh, path: impl AsRef<Path>) -> std::io::Result<()> {
    fs::write(path, obj_string(mesh))
}

pub fn stl_bytes(mesh: &TriangleMesh) -> Vec<u8> {
    let mut out = vec![0u8; 80];
    out.extend_from_slice(&(mesh.face_count() as u32).to_le_bytes());
    for (i, f) in mesh.faces().iter().enumerate() {
        let n = mesh.face_normal(i);
        for c in [n.x, n.y, n.z] {
            out.extend_from_slice(&(c as f32).to_le_bytes());
        }
        for &idx in f {
            let v = mesh.vertices()[idx as usize];
            for c in [v.x, v.y, v.z] {
                out.extend_from_slice(&(c as f32).to_le_bytes());
            }
        }
        out.extend_from_slice(&[0, 0]);
    }
    out
}

pub fn write_stl(mesh: &TriangleMesh, path: impl AsRef<Path>) -> std::io::Result<()> {
    fs::write(path, stl_bytes(mesh))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::primitives::geodesic_sphere;

    const CUBE_OBJ: &str = "\
# unit cube
v -0.5 -0.5 -0.5
v 0.5 -0.5 -0.5
v -0.5 0.5 -0.5
v 0.5 0.5 -0.5
v -0.5 -0.5 0.5
v 0.5 -0.5 0.5
v -0.5 0.5 0.5
v 0.5 0.5 0.5
f 1 3 4 2
f 5 6 8 7
f 1 2 6 5
f 3 7 8 4
f 1 5 7 3
f 2 4 8 6
";

    #[test]
    fn cube_obj_has_twelve_faces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("cube.obj");
        fs::write(&p, CUBE_OBJ).unwrap();
        let mesh = load_mesh(&p).unwrap();
        assert_eq!(mesh.vertex_count(), 8);
        assert_eq!(mesh.face_count(), 12);
        for n in mesh.normals() {
            assert!((n.norm() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn stl_face_count_matches_header() {
        let sphere = geodesic_sphere(1.0, 3);
        let bytes = stl_bytes(&sphere);
        let declared = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("ico.STL");
        fs::write(&p, &bytes).unwrap();
        let mesh = load_mesh(&p).unwrap();
        assert_eq!(mesh.face_count(), declared);
        assert_eq!(mesh.vertex_count(), sphere.vertex_count());
    }

    #[test]
    fn watertight_normals_are_unit() {
        let mesh = parse_stl(&stl_bytes(&geodesic_sphere(0.3, 4))).unwrap();
        for (v, n) in mesh.vertices().iter().zip(mesh.normals()) {
            // independent check: recompute |n| and compare direction with the radial
            assert!((n.dot(n).sqrt() - 1.0).abs() < 1e-6);
            assert!(n.dot(&v.normalize()) > 0.99);
        }
    }

    #[test]
    fn obj_normals_and_negative_indices() {
        let text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 2\nf -3//1 -2//1 -1//1\n";
        let mesh = parse_obj(text).unwrap();
        assert_eq!(mesh.normals()[0], Vec3::z());
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            load_mesh("/definitely/not/here.obj"),
            Err(MeshError::MissingFile(_))
        ));
        assert!(parse_obj("v 0 0 0\nf 1 2 3\n").is_err());
        assert!(parse_obj("v 0 0 x\n").is_err());
        assert!(parse_obj("v 0 0 0\n").is_err());
        let mut bytes = stl_bytes(&geodesic_sphere(1.0, 1));
        bytes.pop();
        assert!(parse_stl(&bytes).is_err());
    }

    #[test]
    fn obj_round_trip_is_deterministic() {
        let sphere = geodesic_sphere(0.01, 4);
        let text = obj_string(&sphere);
        let a = parse_obj(&text).unwrap();
        let b = parse_obj(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.face_count(), sphere.face_count());
    }
}
