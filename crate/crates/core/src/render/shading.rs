use super::shadow::ShadowMap;
use crate::config::{LightSpec, PhongMaterial, Rgb};
use crate::geometry::Vec3;

/// Phong illumination at a world-space point.
///
/// `lights` must carry world-frame positions. When `shadow_maps` is given,
/// map `k` gates light `k`; lights without a map are always visible. The
/// result is clamped to [0, 1] per channel.
pub fn shade_phong(
    position: &Vec3,
    normal: &Vec3,
    view_dir: &Vec3,
    material: &PhongMaterial,
    ambient: &Rgb,
    lights: &[LightSpec],
    shadow_maps: Option<&[ShadowMap]>,
) -> Rgb {
    let mut color = material.ambient.component_mul(ambient);
    for (k, light) in lights.iter().enumerate() {
        let to_light = light.position - position;
        let d = to_light.norm();
        if d == 0.0 {
            continue;
        }
        let l = to_light / d;
        let n_dot_l = normal.dot(&l);
        if n_dot_l <= 0.0 {
            continue;
        }
        if let Some(map) = shadow_maps.and_then(|m| m.get(k)) {
            if map.occluded(position) {
                continue;
            }
        }
        let r = normal * (2.0 * n_dot_l) - l;
        let r_dot_v = r.dot(view_dir).max(0.0);
        let spec = if material.shininess == 0.0 {
            1.0
        } else {
            r_dot_v.powf(material.shininess)
        };
        let scale = light.attenuation_at(d) * light.intensity;
        let term = material.diffuse * n_dot_l + material.specular * spec;
        color += light.color.component_mul(&term) * scale;
    }
    color.map(|c| if c.is_nan() { 0.0 } else { c.clamp(0.0, 1.0) })
}
