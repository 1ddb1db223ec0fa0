use super::scenario::CONTACT_CLEARANCE;
use super::timing::TimingBreakdown;
use super::HarnessError;
use crate::config::SensorConfig;
use crate::geometry::{benchmark_sphere, Pose, TriangleMesh, Vec3};
use crate::render::{RenderOptions, RenderOutput, Renderer};
use crate::scene::{apply_deformation, ContactReport, PoseUpdate, Scene, TraceFrame};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use std::time::Instant;

/// Radius of the reference benchmark body.
pub const BENCH_BODY_RADIUS: f64 = 0.003;

#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub config: SensorConfig,
    pub width: usize,
    pub height: usize,
    pub bodies: usize,
    /// The first `contacts` bodies are pressed into the gel; the rest are
    /// parked behind the camera.
    pub contacts: usize,
    pub frames: usize,
    pub warmup: usize,
    pub seed: u64,
    pub options: RenderOptions,
}

impl BenchSpec {
    pub fn new(config: SensorConfig, width: usize, height: usize, bodies: usize, contacts: usize, frames: usize) -> Self {
        Self {
            config,
            width,
            height,
            bodies,
            contacts,
            frames,
            warmup: 5,
            seed: 0,
            options: RenderOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let err = |m: String| Err(HarnessError::InvalidArguments(m));
        if self.width == 0 || self.height == 0 {
            return err("resolution must be positive".into());
        }
        if self.bodies == 0 {
            return err("at least one body is required".into());
        }
        if self.contacts > self.bodies {
            return err(format!("contacts ({}) exceed bodies ({})", self.contacts, self.bodies));
        }
        if self.frames < 10 {
            return err(format!("at least 10 measured frames are required, got {}", self.frames));
        }
        if self.warmup < 5 {
            return err(format!("at least 5 warmup frames are required, got {}", self.warmup));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct BenchRun {
    pub timing: TimingBreakdown,
    /// Output of the last measured frame.
    pub last: RenderOutput,
    /// Render time of every measured frame, milliseconds.
    pub render_ms: Vec<f64>,
}

/// Replays precomputed pose perturbations and synthetic contact reports
/// over copies of the reference mesh and times each phase.
pub fn run_bench(spec: &BenchSpec) -> Result<BenchRun, HarnessError> {
    spec.validate()?;
    let config = spec.config.with_resolution(spec.width, spec.height);
    let mesh: Arc<TriangleMesh> = Arc::new(benchmark_sphere(BENCH_BODY_RADIUS));
    let mut scene = Scene::new(&config, Pose::identity())?;

    let gel = config.gel.pose;
    let normal = gel.transform_vector(&Vec3::z());
    let extent = scene.gel().mesh.local_aabb().max - scene.gel().mesh.local_aabb().min;
    let homes: Vec<Pose> = (0..spec.bodies)
        .map(|k| {
            if k < spec.contacts {
                let (x, y) = contact_slot(k, spec.contacts, extent.x, extent.y);
                gel.compose(&Pose::from_translation(Vec3::new(x, y, BENCH_BODY_RADIUS + CONTACT_CLEARANCE)))
            } else {
                // behind the camera and every light
                Pose::from_translation(Vec3::new(0.0, 0.0, -0.1 - 0.01 * k as f64))
            }
        })
        .collect();
    for (k, home) in homes.iter().enumerate() {
        scene.add_body(body_id(k), mesh.clone(), *home, 1.0)?;
    }

    let total = spec.warmup + spec.frames;
    let mut rngs: Vec<ChaCha8Rng> = (0..spec.bodies)
        .map(|k| ChaCha8Rng::seed_from_u64(spec.seed ^ (k as u64).wrapping_mul(0xD1B5_4A32_D192_ED03)))
        .collect();
    let frames: Vec<TraceFrame> = (0..total)
        .map(|f| {
            let mut poses = Vec::with_capacity(spec.bodies);
            let mut contacts = Vec::with_capacity(spec.contacts);
            for (k, rng) in rngs.iter_mut().enumerate() {
                let jitter = Vec3::new(rng.random_range(-1e-4..1e-4), rng.random_range(-1e-4..1e-4), 0.0);
                let force = 2.0 + rng.random_range(-0.2..0.2);
                poses.push(PoseUpdate {
                    id: body_id(k),
                    pose: Pose::new(homes[k].translation + gel.transform_vector(&jitter), homes[k].rotation),
                });
                if k < spec.contacts {
                    contacts.push(ContactReport {
                        body_id: body_id(k),
                        normal_force: force,
                        contact_normal: normal,
                    });
                }
            }
            TraceFrame {
                t: f as f64 / 60.0,
                poses,
                contacts,
            }
        })
        .collect();

    let mut renderer = Renderer::new(spec.options);
    let (mut sync, mut deform, mut render) = (0.0, 0.0, 0.0);
    let mut render_ms = Vec::with_capacity(spec.frames);
    let mut last = None;
    for (f, frame) in frames.iter().enumerate() {
        let t0 = Instant::now();
        scene.apply_frame(frame)?;
        let t1 = Instant::now();
        let deformed = apply_deformation(&scene, &config);
        let t2 = Instant::now();
        let out = renderer.render(&deformed, &config, spec.seed.wrapping_add(f as u64));
        let t3 = Instant::now();
        if f >= spec.warmup {
            sync += ms(t1 - t0);
            deform += ms(t2 - t1);
            let r = ms(t3 - t2);
            render += r;
            render_ms.push(r);
        }
        last = Some(out);
    }
    let n = spec.frames as f64;
    Ok(BenchRun {
        timing: TimingBreakdown {
            sync_ms: sync / n,
            deform_ms: deform / n,
            render_ms: render / n,
            frames: spec.frames,
            width: spec.width,
            height: spec.height,
            bodies: spec.bodies,
            contacts: spec.contacts,
            threads: if spec.options.parallel {
                rayon::current_num_threads()
            } else {
                1
            },
        },
        last: last.expect("at least one frame"),
        render_ms,
    })
}

fn body_id(k: usize) -> String {
    format!("body{k:03}")
}

fn ms(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Gel-local xy of the k-th of n contact slots on a grid inside the gel.
fn contact_slot(k: usize, n: usize, width: f64, height: f64) -> (f64, f64) {
    if n <= 1 {
        return (0.0, 0.0);
    }
    let cols = (n as f64).sqrt().ceil() as usize;
    let rows = n.div_ceil(cols);
    let (c, r) = (k % cols, k / cols);
    let at = |i: usize, m: usize, span: f64| {
        if m == 1 {
            0.0
        } else {
            (i as f64 / (m - 1) as f64 - 0.5) * span * 0.6
        }
    };
    (at(c, cols, width), at(r, rows, height))
}
