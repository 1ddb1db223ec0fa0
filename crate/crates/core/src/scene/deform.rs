use super::{DeformedScene, Instance, Role, Scene};
use crate::config::{ForceMapping, SensorConfig};
use crate::geometry::{Pose, Vec3};
use std::collections::HashMap;

/// Penetration depth for a normal force: 0 up to the first breakpoint,
/// linear between breakpoints, constant past the last one.
pub fn deformation_offset(mapping: &ForceMapping, force: f64) -> f64 {
    let bp = &mapping.breakpoints;
    let (Some(&(f0, _)), Some(&(f_last, d_last))) = (bp.first(), bp.last()) else {
        return 0.0;
    };
    if !(force > f0) {
        return 0.0;
    }
    if force >= f_last {
        return d_last;
    }
    // first breakpoint with force strictly above the query
    let k = bp.partition_point(|&(f, _)| f <= force);
    let (fa, da) = bp[k - 1];
    let (fb, db) = bp[k];
    da + (force - fa) / (fb - fa) * (db - da)
}

/// Snapshot in which every contacted body is translated along −normal by the
/// mapped depth of each of its reports (offsets from several reports add up).
/// The gel stays rigid and the scene itself is not modified.
pub fn apply_deformation(scene: &Scene, config: &SensorConfig) -> DeformedScene {
    let mut offsets: HashMap<&str, Vec3> = HashMap::new();
    for r in scene.contacts() {
        let depth = deformation_offset(&config.force_mapping, r.normal_force);
        *offsets.entry(r.body_id.as_str()).or_insert_with(Vec3::zeros) -= r.contact_normal * depth;
    }
    let gel = scene.gel();
    DeformedScene {
        sensor_pose: *scene.sensor_pose(),
        gel: Some(Instance::new(
            gel.id.clone(),
            gel.mesh.clone(),
            gel.pose,
            gel.scale,
            Role::Gel,
        )),
        objects: scene
            .bodies()
            .map(|b| {
                let pose = match offsets.get(b.id.as_str()) {
                    Some(off) => Pose::new(b.pose.translation + off, b.pose.rotation),
                    None => b.pose,
                };
                Instance::new(b.id.clone(), b.mesh.clone(), pose, b.scale, Role::Object)
            })
            .collect(),
    }
}
