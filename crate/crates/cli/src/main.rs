use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use tactile_core::config::load_config;
use tactile_core::harness::{
    cmd_bench, cmd_composite, cmd_demo, cmd_render, cmd_validate, BenchSpec, FrameRange, HarnessError, Primitive,
    ScenarioKind, ScenarioSpec, CSV_HEADER,
};

#[derive(Parser)]
#[command(name = "tactile", version, about = "Headless vision-based tactile sensor simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a scene file's trace and write RGB PNG and depth PFM frames.
    Render {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Half-open frame interval, e.g. 0..10.
        #[arg(long)]
        frames: Option<FrameRange>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time sync, deformation and rendering over perturbed copies of a 12.5K-face sphere.
    Bench {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Resolution as WxH.
        #[arg(long, default_value = "160x120", value_parser = parse_resolution)]
        res: (usize, usize),
        #[arg(long, default_value_t = 1)]
        bodies: usize,
        #[arg(long, default_value_t = 1)]
        contacts: usize,
        #[arg(long, default_value_t = 100)]
        frames: usize,
        /// CSV file to append the result row to.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Shade on one thread.
        #[arg(long)]
        serial: bool,
    },
    /// Generate an analytic contact trace for a primitive and render it.
    Demo {
        #[arg(long, default_value = "press")]
        kind: ScenarioKind,
        /// sphere:r, box:x,y,z or cylinder:r,l in meters.
        #[arg(long, default_value = "sphere:0.00265")]
        object: Primitive,
        #[arg(long, default_value_t = 5.0)]
        force_max: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Transplant the simulated contact onto a real background image.
    Composite {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        real_bg: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a sensor config and list every violation.
    Validate { config: PathBuf },
}

fn parse_resolution(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or("expected WxH")?;
    let w = w.parse().map_err(|_| "bad width")?;
    let h = h.parse().map_err(|_| "bad height")?;
    Ok((w, h))
}

fn sensor(path: Option<PathBuf>) -> Result<tactile_core::config::SensorConfig, HarnessError> {
    match path {
        Some(p) => Ok(load_config(p)?),
        None => Ok(tactile_core::config::SensorConfig::digit()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, HarnessError> {
    match cli.command {
        Command::Render { scene, out, frames, seed } => {
            let summary = cmd_render(&scene, &out, frames, seed)?;
            println!("rendered {} frames ({} files)", summary.frames, summary.files.len());
        }
        Command::Bench {
            config,
            res: (w, h),
            bodies,
            contacts,
            frames,
            report,
            serial,
        } => {
            let mut spec = BenchSpec::new(sensor(config)?, w, h, bodies, contacts, frames);
            spec.options.parallel = !serial;
            let run = cmd_bench(&spec, report.as_deref())?;
            println!("{CSV_HEADER}");
            println!("{}", run.timing.csv_row());
            println!("threads: {}", run.timing.threads);
        }
        Command::Demo {
            kind,
            object,
            force_max,
            steps,
            config,
            seed,
            out,
        } => {
            let spec = ScenarioSpec::standard(kind, object, force_max, steps);
            let summary = cmd_demo(&spec, &sensor(config)?, &out, seed)?;
            println!(
                "rendered {} frames; scene {}",
                summary.render.frames,
                summary.scene.display()
            );
        }
        Command::Composite { scene, real_bg, out } => {
            for f in cmd_composite(&scene, &real_bg, &out)? {
                println!("{}", f.display());
            }
        }
        Command::Validate { config } => {
            let violations = cmd_validate(&config)?;
            if !violations.is_empty() {
                for v in &violations {
                    eprintln!("{v}");
                }
                return Ok(ExitCode::from(1));
            }
            println!("ok");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are invalid input, not I/O failures
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
