use std::fmt::Write as _;

pub const CSV_HEADER: &str = "resolution,bodies,contacts,sync_ms,deform_ms,render_ms,fps";

/// Mean per-frame phase durations of a benchmark run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingBreakdown {
    /// Applying pose updates and contact reports to the scene.
    pub sync_ms: f64,
    pub deform_ms: f64,
    /// Rasterization, shading and post-processing of every camera.
    pub render_ms: f64,
    pub frames: usize,
    pub width: usize,
    pub height: usize,
    pub bodies: usize,
    pub contacts: usize,
    pub threads: usize,
}

impl TimingBreakdown {
    pub fn total_ms(&self) -> f64 {
        self.sync_ms + self.deform_ms + self.render_ms
    }

    pub fn fps(&self) -> f64 {
        1000.0 / self.total_ms()
    }

    pub fn csv_row(&self) -> String {
        let mut row = String::new();
        write!(
            row,
            "{}x{},{},{},{:.4},{:.4},{:.4},{:.2}",
            self.width,
            self.height,
            self.bodies,
            self.contacts,
            self.sync_ms,
            self.deform_ms,
            self.render_ms,
            self.fps()
        )
        .unwrap();
        row
    }
}
