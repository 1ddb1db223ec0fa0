//! Software renderer: z-buffered rasterization, Phong shading with point
//! lights and shadow maps, blur, noise and 8-bit quantization.
//!
//! Each camera is rendered in two passes. The raster pass keeps, per pixel,
//! the nearest surface's instance, triangle and perspective-correct
//! barycentrics; the shading pass interpolates world-space position and
//! normal from those and evaluates [`shade_phong`].

mod composite;
mod post;
pub mod raster;
mod shading;
mod shadow;

pub use composite::{composite_calibrated, contact_mask, Mask};
pub use post::{
    add_noise, add_noise_linear, gaussian_blur, gaussian_blur_linear, gaussian_kernel,
    sigma_for_kernel,
};
pub use shading::shade_phong;
pub use shadow::{render_shadow_map, ShadowMap, SHADOW_SENTINEL};

use crate::config::{CameraSpec, LightSpec, SensorConfig};
use crate::geometry::{depth_to_heightfield, Pinhole, Pose, Vec3};
use crate::imaging::{DepthImage, DimensionMismatch, LinearImage, RgbImage};
use crate::scene::{DeformedScene, Instance, Role};
use raster::{rasterize_instance, GBuffer, NO_HIT};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderOptions {
    /// Shade pixels on the rayon pool. Output is identical either way.
    pub parallel: bool,
    /// Skip instances whose bounding box lies outside the view frustum.
    pub frustum_culling: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            parallel: true,
            frustum_culling: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CameraView {
    pub name: String,
    pub rgb: RgbImage,
    pub depth: DepthImage,
}

/// One view per configured camera, in configuration order.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderOutput {
    pub views: Vec<CameraView>,
}

/// Interpolated surface attributes of a visible pixel, world frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fragment {
    pub position: Vec3,
    /// Unit normal, flipped toward the viewer on the two-sided gel.
    pub normal: Vec3,
    pub view_dir: Vec3,
    pub role: Role,
    /// Bit `k` set when light `k` failed its shadow test (first 64 lights).
    pub shadowed: u64,
}

/// Pre-post-processing output of one camera, with per-pixel fragments.
#[derive(Debug, Clone)]
pub struct ShadedFrame {
    pub color: LinearImage,
    pub depth: DepthImage,
    pub fragments: Vec<Option<Fragment>>,
    /// Lights transformed to the world frame, in configuration order.
    pub lights: Vec<LightSpec>,
}

/// Noise seed of camera `index` for frame seed `seed`.
pub fn camera_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Reusable renderer. Scratch buffers persist across frames; one instance
/// must not be shared between threads mid-frame.
#[derive(Debug, Default)]
pub struct Renderer {
    options: RenderOptions,
    gbuffer: GBuffer,
    shadow_maps: Vec<ShadowMap>,
    world_lights: Vec<LightSpec>,
    scratch: Vec<Vec3>,
}

impl Renderer {
    pub fn new(options: RenderOptions) -> Self {
        Self {
            options,
            ..Self::default()
        }
    }

    pub fn options(&self) -> RenderOptions {
        self.options
    }

    pub fn set_options(&mut self, options: RenderOptions) {
        self.options = options;
    }

    /// Shadow maps of the last rendered frame (empty when shadows are off).
    pub fn shadow_maps(&self) -> &[ShadowMap] {
        &self.shadow_maps
    }

    /// Renders every camera. Shadow maps are built once per light.
    pub fn render(&mut self, scene: &DeformedScene, config: &SensorConfig, seed: u64) -> RenderOutput {
        self.prepare_lights(scene, config);
        let views = config
            .cameras
            .iter()
            .enumerate()
            .map(|(k, cam)| {
                let (color, depth) = self.shade(scene, config, cam, None);
                CameraView {
                    name: cam.name.clone(),
                    rgb: post_process(&color, config, camera_seed(seed, k)),
                    depth,
                }
            })
            .collect();
        RenderOutput { views }
    }

    /// Shaded colour before blur, noise and quantization, plus the
    /// fragments it was computed from.
    pub fn inspect(&mut self, scene: &DeformedScene, config: &SensorConfig, camera: usize) -> ShadedFrame {
        self.prepare_lights(scene, config);
        let mut fragments = Vec::new();
        let (color, depth) = self.shade(scene, config, &config.cameras[camera], Some(&mut fragments));
        ShadedFrame {
            color,
            depth,
            fragments,
            lights: self.world_lights.clone(),
        }
    }

    /// Camera-frame depth of the nearest front-facing surface per pixel.
    pub fn rasterize_depth(&mut self, scene: &DeformedScene, camera: &CameraSpec) -> DepthImage {
        let instances: Vec<&Instance> = scene.instances().collect();
        self.rasterize(&instances, &scene.sensor_pose, camera);
        self.depth_image(camera)
    }

    /// Shades a heightfield built from `depth` in place of the gel, seen by
    /// camera 0.
    pub fn render_from_depth(
        &mut self,
        depth: &DepthImage,
        config: &SensorConfig,
        seed: u64,
    ) -> Result<RgbImage, DimensionMismatch> {
        let cam = &config.cameras[0];
        let mesh = depth_to_heightfield(depth, cam)?;
        let scene = DeformedScene::new(Pose::identity()).with_gel_surface(mesh, cam.pose);
        self.prepare_lights(&scene, config);
        let (color, _) = self.shade(&scene, config, cam, None);
        Ok(post_process(&color, config, camera_seed(seed, 0)))
    }

    fn prepare_lights(&mut self, scene: &DeformedScene, config: &SensorConfig) {
        self.world_lights.clear();
        self.world_lights.extend(config.lights.iter().map(|l| LightSpec {
            position: scene.sensor_pose.transform_point(&l.position),
            ..l.clone()
        }));
        if !config.shadows_enabled {
            self.shadow_maps.clear();
            return;
        }
        let size = config.shadow_map_size;
        let bias = config.shadow_bias;
        if self.shadow_maps.len() != self.world_lights.len()
            || self
                .shadow_maps
                .iter()
                .any(|m| m.size() != size || m.bias() != bias)
        {
            self.shadow_maps = (0..self.world_lights.len())
                .map(|k| ShadowMap::new(k, size, bias))
                .collect();
        }
        let cull = self.options.frustum_culling;
        for (map, light) in self.shadow_maps.iter_mut().zip(&self.world_lights) {
            map.update(scene, &light.position, cull);
        }
    }

    fn rasterize(&mut self, instances: &[&Instance], sensor_pose: &Pose, camera: &CameraSpec) -> Pinhole {
        let pinhole = camera.intrinsics();
        let view = sensor_pose.compose(&camera.pose).inverse();
        self.gbuffer.reset(pinhole.width, pinhole.height, camera.far_clip);
        for (k, inst) in instances.iter().enumerate() {
            self.gbuffer.set_current_instance(k as u32);
            rasterize_instance(
                &pinhole,
                &view,
                inst,
                self.options.frustum_culling,
                &mut self.scratch,
                &mut self.gbuffer,
            );
        }
        pinhole
    }

    fn depth_image(&self, camera: &CameraSpec) -> DepthImage {
        let far = camera.far_clip as f32;
        let mut img = DepthImage::filled(camera.width, camera.height, far);
        for (v, (&d, &inst)) in img
            .values
            .iter_mut()
            .zip(self.gbuffer.depth.iter().zip(&self.gbuffer.instance))
        {
            if inst != NO_HIT {
                *v = (d as f32).min(far);
            }
        }
        img
    }

    fn shade(
        &mut self,
        scene: &DeformedScene,
        config: &SensorConfig,
        camera: &CameraSpec,
        fragments: Option<&mut Vec<Option<Fragment>>>,
    ) -> (LinearImage, DepthImage) {
        let instances: Vec<&Instance> = scene.instances().collect();
        self.rasterize(&instances, &scene.sensor_pose, camera);
        let depth = self.depth_image(camera);
        let eye = scene.sensor_pose.compose(&camera.pose).translation;
        let ctx = ShadeContext {
            gbuffer: &self.gbuffer,
            instances: &instances,
            eye,
            config,
            lights: &self.world_lights,
            shadow_maps: config.shadows_enabled.then_some(self.shadow_maps.as_slice()),
        };
        let mut color = LinearImage::black(camera.width, camera.height);
        match fragments {
            Some(out) => {
                out.clear();
                for (k, px) in color.pixels.iter_mut().enumerate() {
                    let frag = ctx.fragment(k);
                    if let Some(f) = &frag {
                        *px = ctx.color(f);
                    }
                    out.push(frag);
                }
            }
            None if self.options.parallel => {
                color
                    .pixels
                    .par_chunks_mut(camera.width.max(1))
                    .enumerate()
                    .for_each(|(row, chunk)| {
                        for (i, px) in chunk.iter_mut().enumerate() {
                            if let Some(f) = ctx.fragment(row * camera.width + i) {
                                *px = ctx.color(&f);
                            }
                        }
                    });
            }
            None => {
                for (k, px) in color.pixels.iter_mut().enumerate() {
                    if let Some(f) = ctx.fragment(k) {
                        *px = ctx.color(&f);
                    }
                }
            }
        }
        (color, depth)
    }
}

struct ShadeContext<'a> {
    gbuffer: &'a GBuffer,
    instances: &'a [&'a Instance],
    eye: Vec3,
    config: &'a SensorConfig,
    lights: &'a [LightSpec],
    shadow_maps: Option<&'a [ShadowMap]>,
}

impl ShadeContext<'_> {
    fn fragment(&self, k: usize) -> Option<Fragment> {
        let inst_index = self.gbuffer.instance[k];
        if inst_index == NO_HIT {
            return None;
        }
        let inst = self.instances[inst_index as usize];
        let mesh = inst.mesh.mesh();
        let tri = self.gbuffer.triangle[k] as usize;
        let face = mesh.faces()[tri];
        let b = self.gbuffer.bary[k];
        let (vs, ns) = (mesh.vertices(), mesh.normals());
        let mut p = Vec3::zeros();
        let mut n = Vec3::zeros();
        for c in 0..3 {
            p += vs[face[c] as usize] * b[c];
            n += ns[face[c] as usize] * b[c];
        }
        let position = inst.pose.transform_point(&(p * inst.scale));
        let mut normal = inst.pose.transform_vector(&n);
        if normal.norm_squared() < 1e-24 {
            normal = inst.pose.transform_vector(&mesh.face_normal(tri));
        }
        normal.normalize_mut();
        let view_dir = (self.eye - position).normalize();
        if inst.role == Role::Gel && normal.dot(&view_dir) < 0.0 {
            normal = -normal;
        }
        let mut shadowed = 0u64;
        if let Some(maps) = self.shadow_maps {
            for (bit, map) in maps.iter().enumerate().take(64) {
                if map.occluded(&position) {
                    shadowed |= 1 << bit;
                }
            }
        }
        Some(Fragment {
            position,
            normal,
            view_dir,
            role: inst.role,
            shadowed,
        })
    }

    fn color(&self, f: &Fragment) -> [f32; 3] {
        let c = shade_phong(
            &f.position,
            &f.normal,
            &f.view_dir,
            &self.config.gel.material,
            &self.config.ambient,
            self.lights,
            self.shadow_maps,
        );
        [c.x as f32, c.y as f32, c.z as f32]
    }
}

fn post_process(color: &LinearImage, config: &SensorConfig, seed: u64) -> RgbImage {
    let mut img = if config.blur_kernel > 1 {
        gaussian_blur_linear(color, config.blur_kernel, sigma_for_kernel(config.blur_kernel))
    } else {
        color.clone()
    };
    add_noise_linear(&mut img, config.noise_std, seed);
    img.quantize()
}

/// One-shot render with default options.
pub fn render(scene: &DeformedScene, config: &SensorConfig, seed: u64) -> RenderOutput {
    Renderer::default().render(scene, config, seed)
}

pub fn rasterize_depth(scene: &DeformedScene, camera: &CameraSpec) -> DepthImage {
    Renderer::default().rasterize_depth(scene, camera)
}

pub fn render_from_depth(depth: &DepthImage, config: &SensorConfig) -> Result<RgbImage, DimensionMismatch> {
    Renderer::default().render_from_depth(depth, config, 0)
}
