//! JSON-lines trace of physics frames.
//!
//! `{"t": s, "poses": [{"id", "p": [x,y,z], "q": [w,x,y,z]}], "contacts": [{"id", "f", "n": [x,y,z]}]}`

use super::ContactReport;
use crate::geometry::{Pose, Vec3};
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Lines, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("trace file not found: {0}")]
    MissingFile(PathBuf),
    #[error("trace parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoseUpdate {
    pub id: String,
    pub pose: Pose,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceFrame {
    pub t: f64,
    pub poses: Vec<PoseUpdate>,
    pub contacts: Vec<ContactReport>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameDoc {
    t: f64,
    #[serde(default)]
    poses: Vec<PoseDoc>,
    #[serde(default)]
    contacts: Vec<ContactDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PoseDoc {
    id: String,
    p: [f64; 3],
    q: [f64; 4],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContactDoc {
    id: String,
    f: f64,
    n: [f64; 3],
}

/// Pull-based reader: each `next()` parses one more frame.
pub struct TraceReader<R> {
    lines: Lines<R>,
    line: usize,
    last_t: f64,
    failed: bool,
}

impl<R: BufRead> TraceReader<R> {
    pub fn new(reader: R) -> Self {
        Self {
            lines: reader.lines(),
            line: 0,
            last_t: f64::NEG_INFINITY,
            failed: false,
        }
    }

    fn parse(&mut self, text: &str) -> Result<TraceFrame, TraceError> {
        let line = self.line;
        let err = |message: String| TraceError::Parse { line, message };
        let doc: FrameDoc = serde_json::from_str(text).map_err(|e| err(e.to_string()))?;
        if !doc.t.is_finite() {
            return Err(err("timestamp is not finite".into()));
        }
        if doc.t < self.last_t {
            return Err(err(format!(
                "timestamp {} precedes previous frame at {}",
                doc.t, self.last_t
            )));
        }
        self.last_t = doc.t;
        let poses = doc
            .poses
            .into_iter()
            .map(|p| {
                Pose::from_parts(p.p, p.q)
                    .map(|pose| PoseUpdate { id: p.id.clone(), pose })
                    .ok_or_else(|| err(format!("invalid pose for '{}'", p.id)))
            })
            .collect::<Result<_, _>>()?;
        let contacts = doc
            .contacts
            .into_iter()
            .map(|c| {
                let n = Vec3::from(c.n);
                let len = n.norm();
                if !(len > 1e-12 && len.is_finite()) {
                    return Err(err(format!("contact normal for '{}' is zero", c.id)));
                }
                if !(c.f >= 0.0 && c.f.is_finite()) {
                    return Err(err(format!("negative contact force for '{}'", c.id)));
                }
                let contact_normal = if (len - 1.0).abs() <= 1e-12 { n } else { n / len };
                Ok(ContactReport {
                    body_id: c.id,
                    normal_force: c.f,
                    contact_normal,
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(TraceFrame {
            t: doc.t,
            poses,
            contacts,
        })
    }
}

impl<R: BufRead> Iterator for TraceReader<R> {
    type Item = Result<TraceFrame, TraceError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        loop {
            let text = match self.lines.next()? {
                Ok(t) => t,
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e.into()));
                }
            };
            self.line += 1;
            if text.trim().is_empty() {
                continue;
            }
            let frame = self.parse(&text);
            self.failed = frame.is_err();
            return Some(frame);
        }
    }
}

/// Opens a trace file for frame-by-frame replay.
pub fn load_trace(path: impl AsRef<Path>) -> Result<TraceReader<BufReader<File>>, TraceError> {
    let path = path.as_ref();
    if !path.is_file() {
        return Err(TraceError::MissingFile(path.to_path_buf()));
    }
    Ok(TraceReader::new(BufReader::new(File::open(path)?)))
}

pub fn frame_to_json(frame: &TraceFrame) -> String {
    let doc = FrameDoc {
        t: frame.t,
        poses: frame
            .poses
            .iter()
            .map(|u| PoseDoc {
                id: u.id.clone(),
                p: u.pose.position_array(),
                q: u.pose.quaternion_wxyz(),
            })
            .collect(),
        contacts: frame
            .contacts
            .iter()
            .map(|c| ContactDoc {
                id: c.body_id.clone(),
                f: c.normal_force,
                n: [c.contact_normal.x, c.contact_normal.y, c.contact_normal.z],
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("frame serializes")
}

pub fn write_trace<'a>(
    path: impl AsRef<Path>,
    frames: impl IntoIterator<Item = &'a TraceFrame>,
) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for f in frames {
        writeln!(out, "{}", frame_to_json(f))?;
    }
    out.flush()
}
