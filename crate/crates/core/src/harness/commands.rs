use super::bench::{run_bench, BenchRun, BenchSpec};
use super::scenario::{generate_trace, rest_pose, ScenarioSpec, OBJECT_ID};
use super::scene_file::{BodySpec, LoadedScene, SceneFile};
use super::timing::CSV_HEADER;
use super::HarnessError;
use crate::config::{check_config_file, save_config, SensorConfig, Violation};
use crate::geometry::{write_obj, Pose};
use crate::imaging::{check_dims, load_png, rgb_dims, save_pfm, save_png};
use crate::render::{camera_seed, composite_calibrated, RenderOutput, Renderer};
use crate::scene::{apply_deformation, write_trace};
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Half-open frame interval `a..b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameRange {
    pub start: usize,
    pub end: usize,
}

impl FromStr for FrameRange {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HarnessError::InvalidArguments(format!("bad frame range {s:?}, expected a..b"));
        let (a, b) = s.split_once("..").ok_or_else(bad)?;
        let start = a.trim().parse().map_err(|_| bad())?;
        let end = b.trim().parse().map_err(|_| bad())?;
        if start >= end {
            return Err(bad());
        }
        Ok(Self { start, end })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSummary {
    pub frames: usize,
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemoSummary {
    pub scene: PathBuf,
    pub trace: PathBuf,
    pub render: RenderSummary,
}

/// Output file names of one camera and frame.
pub fn frame_file_names(camera: &str, frame: usize) -> (String, String) {
    (
        format!("rgb_{camera}_{frame:04}.png"),
        format!("depth_{camera}_{frame:04}.pfm"),
    )
}

fn frame_seed(seed: u64, frame: usize) -> u64 {
    camera_seed(seed, 0) ^ (frame as u64).wrapping_mul(0xA24B_AED4_963E_E407)
}

fn create_dir(dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))
}

fn write_views(out: &RenderOutput, dir: &Path, frame: usize, files: &mut Vec<PathBuf>) -> Result<(), HarnessError> {
    for view in &out.views {
        let (rgb, depth) = frame_file_names(&view.name, frame);
        let (rgb, depth) = (dir.join(rgb), dir.join(depth));
        save_png(&view.rgb, &rgb)?;
        save_pfm(&view.depth, &depth)?;
        files.push(rgb);
        files.push(depth);
    }
    Ok(())
}

/// Replays the scene's trace (or renders the static scene as frame 0) and
/// writes an RGB PNG and a depth PFM per camera per frame in `range`.
pub fn cmd_render(
    scene_path: &Path,
    out_dir: &Path,
    range: Option<FrameRange>,
    seed: u64,
) -> Result<RenderSummary, HarnessError> {
    let mut loaded = LoadedScene::load(scene_path)?;
    let available = loaded.frames.len().max(1);
    let range = range.unwrap_or(FrameRange {
        start: 0,
        end: available,
    });
    if range.end > available {
        return Err(HarnessError::InvalidArguments(format!(
            "frame range {}..{} exceeds the {available} available frames",
            range.start, range.end
        )));
    }
    create_dir(out_dir)?;
    let mut renderer = Renderer::default();
    let mut files = Vec::new();
    for f in 0..range.end {
        if let Some(frame) = loaded.frames.get(f) {
            loaded.scene.apply_frame(frame)?;
        }
        if f < range.start {
            continue;
        }
        let deformed = apply_deformation(&loaded.scene, &loaded.config);
        let out = renderer.render(&deformed, &loaded.config, frame_seed(seed, f));
        write_views(&out, out_dir, f, &mut files)?;
    }
    Ok(RenderSummary {
        frames: range.end - range.start,
        files,
    })
}

/// Generates the scenario's trace, writes it with the object mesh, the
/// config and a scene file into `out_dir`, then renders every frame.
pub fn cmd_demo(
    spec: &ScenarioSpec,
    config: &SensorConfig,
    out_dir: &Path,
    seed: u64,
) -> Result<DemoSummary, HarnessError> {
    let frames = generate_trace(spec, config)?;
    create_dir(out_dir)?;
    save_config(config, out_dir.join("config.yaml"))?;
    let mesh_path = out_dir.join("object.obj");
    write_obj(&spec.object.mesh(), &mesh_path).map_err(|e| HarnessError::io(&mesh_path, e))?;
    let trace = out_dir.join("trace.jsonl");
    write_trace(&trace, &frames).map_err(|e| HarnessError::io(&trace, e))?;
    let scene = out_dir.join("scene.yaml");
    SceneFile {
        config: "config.yaml".into(),
        sensor_pose: Pose::identity(),
        bodies: vec![BodySpec {
            id: OBJECT_ID.to_string(),
            mesh: "object.obj".into(),
            scale: 1.0,
            pose: rest_pose(spec, config),
        }],
        trace: Some("trace.jsonl".into()),
    }
    .save(&scene)?;
    let render = cmd_render(&scene, out_dir, None, seed)?;
    Ok(DemoSummary { scene, trace, render })
}

/// Renders the final frame of the scene and the untouched gel with noise
/// off, and writes `composite_<cam>.png = clamp(sim - background + real)`.
pub fn cmd_composite(scene_path: &Path, real_background: &Path, out_dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    let mut loaded = LoadedScene::load(scene_path)?;
    if !real_background.is_file() {
        return Err(HarnessError::MissingFile(real_background.to_path_buf()));
    }
    let real = load_png(real_background)?;
    for cam in &loaded.config.cameras {
        check_dims((cam.width, cam.height), rgb_dims(&real))?;
    }
    for frame in &loaded.frames {
        loaded.scene.apply_frame(frame)?;
    }
    let mut config = loaded.config.clone();
    config.noise_std = 0.0;
    let mut renderer = Renderer::default();
    let sim = renderer.render(&apply_deformation(&loaded.scene, &config), &config, 0);
    let background = renderer.render(&loaded.scene.background(), &config, 0);
    create_dir(out_dir)?;
    let mut files = Vec::new();
    for (s, b) in sim.views.iter().zip(&background.views) {
        let out = composite_calibrated(&s.rgb, &b.rgb, &real)?;
        let path = out_dir.join(format!("composite_{}.png", s.name));
        save_png(&out, &path)?;
        files.push(path);
    }
    Ok(files)
}

/// All constraint violations of a config file (empty when valid).
pub fn cmd_validate(config_path: &Path) -> Result<Vec<Violation>, HarnessError> {
    Ok(check_config_file(config_path)?)
}

/// Runs the benchmark and, when `report` is given, appends a CSV row
/// (writing the header first if the file is new).
pub fn cmd_bench(spec: &BenchSpec, report: Option<&Path>) -> Result<BenchRun, HarnessError> {
    let run = run_bench(spec)?;
    if let Some(path) = report {
        let fresh = !path.exists();
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| HarnessError::io(path, e))?;
        let mut text = String::new();
        if fresh {
            text.push_str(CSV_HEADER);
            text.push('\n');
        }
        text.push_str(&run.timing.csv_row());
        text.push('\n');
        file.write_all(text.as_bytes()).map_err(|e| HarnessError::io(path, e))?;
    }
    Ok(run)
}
