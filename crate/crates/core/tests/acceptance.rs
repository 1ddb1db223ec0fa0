//! Release gate: runs every acceptance criterion sequentially (so timing
//! measurements do not compete) and prints one PASS/FAIL line per criterion.

mod common;

use common::{cast, luminance, phong_reference, pressed_sphere, world_triangles, V3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};
use tactile_core::config::{CameraSpec, ForceMapping, LightSpec, PhongMaterial, SensorConfig};
use tactile_core::geometry::{depth_to_heightfield, Pose, TriangleMesh};
use tactile_core::harness::{
    cmd_composite, cmd_demo, cmd_render, frame_file_names, run_bench, BenchSpec, LoadedScene, Primitive,
    ScenarioKind, ScenarioSpec,
};
use tactile_core::imaging::{load_pfm, load_png, save_png, DepthImage, RgbImage};
use tactile_core::render::{contact_mask, rasterize_depth, RenderOptions, Renderer};
use tactile_core::scene::{apply_deformation, deformation_offset, DeformedScene, Instance, Role, SceneMesh};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn camera(width: usize, height: usize, near: f64, far: f64) -> CameraSpec {
    CameraSpec {
        name: "cam0".into(),
        pose: Pose::identity(),
        fov_y_deg: 60.0,
        near_clip: near,
        far_clip: far,
        width,
        height,
    }
}

fn seg_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (cx, cy) = (a.0 + t * dx - p.0, a.1 + t * dy - p.1);
    (cx * cx + cy * cy).sqrt()
}

fn depth_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD0);
    let cam = camera(32, 24, 0.01, 2.0);
    let pin = cam.intrinsics();
    let (hx, hy) = pin.half_extents();
    let (mut checked, mut worst) = (0usize, 0.0f64);
    for scene_index in 0..50 {
        let n = rng.random_range(1..=50);
        let mut vertices = Vec::new();
        let mut faces = Vec::new();
        for t in 0..n {
            let z = rng.random_range(0.2..1.5);
            let c = V3::new(rng.random_range(-1.2..1.2) * hx * z, rng.random_range(-1.2..1.2) * hy * z, z);
            let size = rng.random_range(0.05..0.6) * z;
            for _ in 0..3 {
                let mut v = c + V3::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-0.5..0.5),
                ) * size;
                v.z = v.z.max(0.05);
                vertices.push(v);
            }
            faces.push([3 * t as u32, 3 * t as u32 + 1, 3 * t as u32 + 2]);
        }
        let mesh = TriangleMesh::new(vertices, faces).map_err(|e| e.to_string())?;
        let mut scene = DeformedScene::new(Pose::identity());
        scene.objects.push(Instance::new(
            "tris",
            Arc::new(SceneMesh::new(mesh)),
            Pose::identity(),
            1.0,
            Role::Object,
        ));
        let depth = rasterize_depth(&scene, &cam);
        let tris = world_triangles(&scene);
        let screen: Vec<[(f64, f64); 3]> = tris.iter().map(|t| t.v.map(|v| pin.project(&v))).collect();
        for j in 0..pin.height {
            for i in 0..pin.width {
                let centre = (i as f64 + 0.5, j as f64 + 0.5);
                let near_edge = screen.iter().any(|s| {
                    (0..3).any(|e| seg_distance(centre, s[e], s[(e + 1) % 3]) < 1.0)
                });
                if near_edge {
                    continue;
                }
                let ray = pin.pixel_ray(i, j);
                let expected = match cast(&tris, &V3::zeros(), &ray) {
                    Some((t, ..)) if t >= cam.near_clip && t < cam.far_clip => t,
                    _ => cam.far_clip,
                };
                let err = (depth.get(i, j) as f64 - expected).abs();
                worst = worst.max(err);
                ensure(err <= 1e-4, || {
                    format!("scene {scene_index} pixel ({i},{j}): raster {} vs ray cast {expected}", depth.get(i, j))
                })?;
                checked += 1;
            }
        }
    }
    ensure(checked > 5000, || format!("only {checked} interior pixels checked"))?;
    Ok(format!("{checked} interior pixels, max error {worst:.2e} m"))
}

fn shading_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5A);
    let (mut compared, mut skipped, mut worst) = (0usize, 0usize, 0.0f64);
    let mut scene_index = 0;
    while compared < 1000 {
        scene_index += 1;
        ensure(scene_index <= 40, || format!("only {compared} comparable fragments found"))?;
        let mut config = SensorConfig::digit();
        config.shadows_enabled = false;
        config.noise_std = 0.0;
        config.blur_kernel = 1;
        config.ambient = V3::new(rng.random(), rng.random(), rng.random());
        config.gel.material = PhongMaterial {
            ambient: V3::repeat(rng.random_range(0.0..0.3)),
            diffuse: V3::new(rng.random(), rng.random(), rng.random()),
            specular: V3::repeat(rng.random_range(0.0..1.0)),
            shininess: rng.random_range(1.0..64.0),
        };
        config.lights = (0..rng.random_range(1..5))
            .map(|_| LightSpec {
                position: V3::new(
                    rng.random_range(-0.015..0.015),
                    rng.random_range(-0.015..0.015),
                    rng.random_range(0.002..0.015),
                ),
                color: V3::new(rng.random(), rng.random(), rng.random()),
                intensity: rng.random_range(0.2..3.0),
                attenuation: [1.0, rng.random_range(0.0..10.0), rng.random_range(0.0..3000.0)],
            })
            .collect();
        let (_, deformed) = pressed_sphere(
            &config,
            rng.random_range(0.002..0.004),
            rng.random_range(-0.005..0.005),
            rng.random_range(-0.004..0.004),
            rng.random_range(0.5..5.0),
        );
        let frame = Renderer::default().inspect(&deformed, &config, 0);
        let tris = world_triangles(&deformed);
        let pin = config.cameras[0].intrinsics();
        let eye = config.cameras[0].pose.translation;
        let covered: Vec<usize> = (0..frame.fragments.len()).filter(|&k| frame.fragments[k].is_some()).collect();
        for _ in 0..100 {
            let k = covered[rng.random_range(0..covered.len())];
            let frag = frame.fragments[k].unwrap();
            let dir = config.cameras[0].pose.transform_vector(&pin.pixel_ray(k % pin.width, k / pin.width));
            let Some((t, tri, u, v)) = cast(&tris, &eye, &dir) else {
                skipped += 1;
                continue;
            };
            let p = eye + dir * t;
            if (p - frag.position).norm() > 1e-9 {
                // silhouette or gel/sphere crossing: nearest surface differs
                skipped += 1;
                continue;
            }
            let w = &tris[tri];
            let mut n = (w.n[0] * (1.0 - u - v) + w.n[1] * u + w.n[2] * v).normalize();
            let view = (eye - p).normalize();
            if w.role == Role::Gel && n.dot(&view) < 0.0 {
                n = -n;
            }
            let expected = phong_reference(&p, &n, &view, &config.gel.material, &config.ambient, &frame.lights);
            let got = frame.color.pixels[k];
            for ch in 0..3 {
                let err = (got[ch] as f64 - expected[ch]).abs();
                worst = worst.max(err);
                ensure(err <= 1e-6, || {
                    format!("scene {scene_index} pixel {k} channel {ch}: {} vs {}", got[ch], expected[ch])
                })?;
            }
            compared += 1;
        }
    }
    Ok(format!("{compared} fragments over {scene_index} scenes ({skipped} edge samples skipped), max error {worst:.2e}"))
}

fn bench(config: SensorConfig, w: usize, h: usize, bodies: usize, contacts: usize) -> Result<tactile_core::harness::BenchRun, String> {
    run_bench(&BenchSpec::new(config, w, h, bodies, contacts, 100)).map_err(|e| e.to_string())
}

fn spectator_invariance() -> Outcome {
    let one = bench(SensorConfig::digit(), 160, 120, 1, 1)?;
    let hundred = bench(SensorConfig::digit(), 160, 120, 100, 1)?;
    ensure(one.last == hundred.last, || "images differ between 1 and 100 bodies".into())?;
    let ratio = hundred.timing.render_ms / one.timing.render_ms;
    ensure(ratio < 1.25, || format!("render time ratio {ratio:.3} >= 1.25"))?;
    Ok(format!(
        "identical images; render {:.3} ms vs {:.3} ms, ratio {ratio:.3}",
        one.timing.render_ms, hundred.timing.render_ms
    ))
}

fn resolution_trend() -> Outcome {
    let t: Vec<f64> = [(160, 120), (320, 240), (640, 480)]
        .iter()
        .map(|&(w, h)| bench(SensorConfig::digit(), w, h, 1, 1).map(|r| r.timing.render_ms))
        .collect::<Result<_, _>>()?;
    ensure(t[0] <= t[1] && t[1] <= t[2], || format!("render times not ordered: {t:?}"))?;
    Ok(format!("{:.2} <= {:.2} <= {:.2} ms", t[0], t[1], t[2]))
}

fn shadow_overhead() -> Outcome {
    let mut off = SensorConfig::digit();
    off.shadows_enabled = false;
    let without = bench(off, 160, 120, 1, 1)?.timing.render_ms;
    let with = bench(SensorConfig::digit(), 160, 120, 1, 1)?.timing.render_ms;
    let factor = with / without;
    ensure(factor < 2.0, || format!("shadows slow rendering by {factor:.3}x"))?;
    Ok(format!("{without:.3} ms -> {with:.3} ms, factor {factor:.3}"))
}

fn throughput_floor() -> Outcome {
    let config = SensorConfig::digit();
    ensure(config.shadows_enabled, || "reference config must have shadows on".into())?;
    let run = bench(config, 160, 120, 1, 1)?;
    let fps = run.timing.fps();
    ensure(fps >= 30.0, || format!("{fps:.1} FPS < 30"))?;
    Ok(format!("{fps:.1} FPS (sync {:.4} / deform {:.4} / render {:.3} ms, {} thread(s))",
        run.timing.sync_ms, run.timing.deform_ms, run.timing.render_ms, run.timing.threads))
}

fn real_background(w: u32, h: u32) -> RgbImage {
    RgbImage::from_fn(w, h, |x, y| image::Rgb([(x * 255 / w) as u8, (y * 255 / h) as u8, ((x + y) % 256) as u8]))
}

fn demo(dir: &Path, force: f64, steps: usize, config: &SensorConfig) -> Result<std::path::PathBuf, String> {
    let spec = ScenarioSpec::standard(ScenarioKind::Press, Primitive::Sphere { radius: 0.00265 }, force, steps);
    cmd_demo(&spec, config, dir, 0).map(|s| s.scene).map_err(|e| e.to_string())
}

/// Pixels of the press composite that differ from `real`, split into
/// (inside, outside) the contact mask dilated by the blur radius.
fn composite_spill(config: &SensorConfig, dir: &Path, real: &RgbImage, real_path: &Path) -> Result<(usize, usize, usize), String> {
    let cam = &config.cameras[0];
    let press = demo(&dir.join("press"), 5.0, 3, config)?;
    let out = cmd_composite(&press, real_path, &dir.join("press_out")).map_err(|e| e.to_string())?;
    let pressed = load_png(&out[0]).map_err(|e| e.to_string())?;

    let mut loaded = LoadedScene::load(&press).map_err(|e| e.to_string())?;
    for f in &loaded.frames {
        loaded.scene.apply_frame(f).map_err(|e| e.to_string())?;
    }
    let mut r = Renderer::default();
    let depth = r.rasterize_depth(&apply_deformation(&loaded.scene, &loaded.config), cam);
    let bg = r.rasterize_depth(&loaded.scene.background(), cam);
    let mask = contact_mask(&depth, &bg, 1e-5).map_err(|e| e.to_string())?;
    let dilated = mask.dilate(config.blur_kernel / 2);
    let (mut inside, mut outside) = (0usize, 0usize);
    for (x, y, p) in pressed.enumerate_pixels() {
        if p != real.get_pixel(x, y) {
            if dilated.get(x as usize, y as usize) {
                inside += 1;
            } else {
                outside += 1;
            }
        }
    }
    Ok((mask.count(), inside, outside))
}

/// Asserted with shadows disabled: cast shadows of the intruding cap are a
/// real lighting effect that reaches past the blur radius, so the shadowed
/// configuration is measured and reported but not gated.
fn compositing() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut config = SensorConfig::digit();
    config.shadows_enabled = false;
    let cam = &config.cameras[0];
    let real = real_background(cam.width as u32, cam.height as u32);
    let real_path = tmp.path().join("real.png");
    save_png(&real, &real_path).map_err(|e| e.to_string())?;

    let idle = demo(&tmp.path().join("idle"), 0.0, 3, &config)?;
    let out = cmd_composite(&idle, &real_path, &tmp.path().join("idle_out")).map_err(|e| e.to_string())?;
    let idle_img = load_png(&out[0]).map_err(|e| e.to_string())?;
    ensure(idle_img == real, || "zero-contact composite differs from the real background".into())?;

    let (mask, inside, outside) = composite_spill(&config, &tmp.path().join("flat"), &real, &real_path)?;
    ensure(mask > 0 && inside > 0, || "press frame produced no difference".into())?;
    ensure(outside == 0, || format!("{outside} pixels differ outside the dilated contact mask"))?;

    let mut shadowed = config.clone();
    shadowed.shadows_enabled = true;
    let (_, _, spill) = composite_spill(&shadowed, &tmp.path().join("shadowed"), &real, &real_path)?;
    Ok(format!(
        "idle composite exact; press differs on {inside} px, all inside the mask ({mask} px) dilated by {} \
         [shadows off; with shadows on, {spill} px of cast shadow fall outside]",
        config.blur_kernel / 2
    ))
}

fn random_mapping(rng: &mut ChaCha8Rng) -> ForceMapping {
    let n = rng.random_range(2..8);
    let mut f = rng.random_range(0.0..1.0);
    let mut d = 0.0;
    let mut breakpoints = vec![(f, d)];
    for _ in 1..n {
        f += rng.random_range(0.01..3.0);
        if rng.random_bool(0.8) {
            d += rng.random_range(0.0..0.001);
        }
        breakpoints.push((f, d));
    }
    ForceMapping { breakpoints }
}

fn interpolate_by_scan(bp: &[(f64, f64)], f: f64) -> f64 {
    if f <= bp[0].0 {
        return 0.0;
    }
    for w in bp.windows(2) {
        if f <= w[1].0 {
            return w[0].1 + (w[1].1 - w[0].1) * (f - w[0].0) / (w[1].0 - w[0].0);
        }
    }
    bp[bp.len() - 1].1
}

fn deformation_mapping() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xDEF);
    let mut evaluated = 0;
    for _ in 0..100 {
        let m = random_mapping(&mut rng);
        let bp = &m.breakpoints;
        let (f0, fl, dl) = (bp[0].0, bp[bp.len() - 1].0, bp[bp.len() - 1].1);
        let mut forces: Vec<f64> = (0..100).map(|_| rng.random_range(-1.0..fl + 2.0)).collect();
        forces.sort_by(f64::total_cmp);
        let mut prev = 0.0;
        for &f in &forces {
            let d = deformation_offset(&m, f);
            ensure(d >= prev, || format!("not monotone at {f} N for {bp:?}"))?;
            prev = d;
            if f <= f0 {
                ensure(d == 0.0, || format!("{f} N below threshold {f0} gave {d}"))?;
            }
            if f >= fl {
                ensure(d == dl, || format!("{f} N above saturation gave {d}, expected {dl}"))?;
            }
            let expected = interpolate_by_scan(bp, f);
            ensure((d - expected).abs() <= 1e-12, || format!("{f} N: {d} vs oracle {expected}"))?;
            evaluated += 1;
        }
    }
    Ok(format!("{evaluated} forces over 100 random mappings"))
}

fn heightfield_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4F);
    let cam = camera(64, 48, 0.001, 0.05);
    let mut worst = 0.0f64;
    for map in 0..20 {
        let bumps: Vec<(f64, f64, f64, f64)> = (0..rng.random_range(1..5))
            .map(|_| {
                (
                    rng.random_range(0.0..64.0),
                    rng.random_range(0.0..48.0),
                    rng.random_range(-0.002..0.002),
                    rng.random_range(3.0..12.0),
                )
            })
            .collect();
        let base = rng.random_range(0.015..0.03);
        let mut depth = DepthImage::filled(cam.width, cam.height, cam.far_clip as f32);
        for j in 0..cam.height {
            for i in 0..cam.width {
                let z = base
                    + bumps
                        .iter()
                        .map(|&(cx, cy, a, s)| {
                            let r2 = (i as f64 - cx).powi(2) + (j as f64 - cy).powi(2);
                            a * (-r2 / (2.0 * s * s)).exp()
                        })
                        .sum::<f64>();
                depth.values[j * cam.width + i] = z as f32;
            }
        }
        let mesh = depth_to_heightfield(&depth, &cam).map_err(|e| e.to_string())?;
        let scene = DeformedScene::new(Pose::identity()).with_gel_surface(mesh, cam.pose);
        let back = rasterize_depth(&scene, &cam);
        for j in 1..cam.height - 1 {
            for i in 1..cam.width - 1 {
                let err = (back.get(i, j) as f64 - depth.get(i, j) as f64).abs();
                worst = worst.max(err);
                ensure(err <= 1e-4, || format!("map {map} pixel ({i},{j}): {} vs {}", back.get(i, j), depth.get(i, j)))?;
            }
        }
    }
    Ok(format!("20 maps at 64x48, max interior error {worst:.2e} m"))
}

fn demo_realism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = SensorConfig::digit();
    let steps = 20;
    let scene_path = demo(tmp.path(), 5.0, steps, &config)?;
    let cam = &config.cameras[0];
    let far = cam.far_clip as f32;

    let loaded = LoadedScene::load(&scene_path).map_err(|e| e.to_string())?;
    let mut quiet = config.clone();
    quiet.noise_std = 0.0;
    let background = Renderer::default().render(&loaded.scene.background(), &quiet, 0);
    let (bg_rgb, bg_depth) = (&background.views[0].rgb, &background.views[0].depth);

    let mut prev = 0;
    let mut last = None;
    for f in 0..steps {
        let (rgb, depth) = frame_file_names(&cam.name, f);
        let depth = load_pfm(tmp.path().join(depth), far).map_err(|e| e.to_string())?;
        let mask = contact_mask(&depth, bg_depth, 1e-5).map_err(|e| e.to_string())?;
        let count = mask.count();
        ensure(count >= prev, || format!("mask shrank at frame {f}: {prev} -> {count}"))?;
        if count > 0 {
            let parts = mask.components();
            ensure(parts == 1, || format!("frame {f}: mask has {parts} components"))?;
        }
        prev = count;
        last = Some((rgb, mask));
    }
    let (rgb, mask) = last.unwrap();
    ensure(mask.count() > 0, || "final frame has no contact".into())?;
    let img = load_png(tmp.path().join(rgb)).map_err(|e| e.to_string())?;
    let mean = |im: &RgbImage| {
        let (mut s, mut n) = (0.0, 0usize);
        for (x, y, p) in im.enumerate_pixels() {
            if mask.get(x as usize, y as usize) {
                s += luminance(p.0);
                n += 1;
            }
        }
        s / n as f64
    };
    let (lc, lb) = (mean(&img), mean(bg_rgb));
    ensure((lc - lb).abs() > 5.0, || format!("imprint luminance {lc:.2} vs background {lb:.2}"))?;
    Ok(format!(
        "{steps} frames, final mask {} px in 1 component, luminance {lc:.1} vs {lb:.1}",
        mask.count()
    ))
}

fn files_equal(a: &Path, b: &Path) -> Result<usize, String> {
    let mut names: Vec<_> = std::fs::read_dir(a)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    for n in &names {
        let x = std::fs::read(a.join(n)).map_err(|e| e.to_string())?;
        let y = std::fs::read(b.join(n)).map_err(|e| e.to_string())?;
        ensure(x == y, || format!("{n:?} differs between runs"))?;
    }
    Ok(names.len())
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let scene = demo(&tmp.path().join("demo"), 5.0, 6, &SensorConfig::digit())?;
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    cmd_render(&scene, &a, None, 7).map_err(|e| e.to_string())?;
    cmd_render(&scene, &b, None, 7).map_err(|e| e.to_string())?;
    let files = files_equal(&a, &b)?;

    let config = SensorConfig::digit();
    let (_, deformed) = pressed_sphere(&config, 0.00265, 0.001, -0.002, 4.0);
    let parallel = Renderer::new(RenderOptions { parallel: true, frustum_culling: true }).render(&deformed, &config, 3);
    let serial = Renderer::new(RenderOptions { parallel: false, frustum_culling: true }).render(&deformed, &config, 3);
    ensure(parallel == serial, || "parallel and serial renders differ".into())?;
    Ok(format!("{files} files byte-identical across runs; parallel == serial"))
}

fn config_round_trip() -> Outcome {
    for (name, c) in [("digit", SensorConfig::digit()), ("omnitact", SensorConfig::omnitact())] {
        let text = c.to_yaml_string();
        let back = SensorConfig::from_yaml_str(&text, Path::new(".")).map_err(|e| e.to_string())?;
        ensure(back == c, || format!("{name}: reloaded config differs"))?;
        ensure(back.to_yaml_string() == text, || format!("{name}: serialization is not a fixpoint"))?;
    }
    let omni = SensorConfig::omnitact();
    ensure(omni.cameras.len() == 5 && omni.lights.len() == 11, || "omnitact shape".into())?;
    Ok("digit and omnitact (5 cameras, 11 lights) reload to equal configs".into())
}

fn main() {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 12] = [
        (1, "depth oracle equivalence", 10, depth_oracle),
        (2, "shading oracle equivalence", 1, shading_oracle),
        (3, "spectator invariance", 60, spectator_invariance),
        (4, "resolution trend", 120, resolution_trend),
        (5, "shadow overhead", 60, shadow_overhead),
        (6, "throughput floor", 60, throughput_floor),
        (7, "calibration compositing", 5, compositing),
        (8, "deformation mapping", 1, deformation_mapping),
        (9, "heightfield round trip", 10, heightfield_round_trip),
        (10, "demo realism proxy", 10, demo_realism),
        (11, "determinism", 30, determinism),
        (12, "config round trip", 1, config_round_trip),
    ];
    let mut failed = 0;
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed > Duration::from_secs(limit) {
                Err(format!("took {:.2}s, limit {limit}s ({detail})", elapsed.as_secs_f64()))
            } else {
                Ok(detail)
            }
        });
        match &result {
            Ok(detail) => println!("PASS criterion {id:>2} {name}: {detail} [{:.2}s]", elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id:>2} {name}: {why} [{:.2}s]", elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
