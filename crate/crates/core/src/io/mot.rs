//! The 10-field MOT CSV format.
//!
//! ```text
//! frame, id, bb_left, bb_top, bb_width, bb_height, conf, x, y, z
//! ```
//!
//! The same layout carries detections, ground truth and tracker results; the
//! [`EntryRole`] decides how `id` and `conf` are interpreted.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::{BBox, WorldPoint};

pub const FIELD_COUNT: usize = 10;

/// Value used in the id and world columns when nothing is known.
pub const UNSET: f64 = -1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EntryRole {
    /// `conf` is a detector score and ids are `-1`.
    Detection,
    /// `conf` is a 0/1 flag; entries flagged 0 are ignored in evaluation.
    GroundTruth,
    /// Tracker output.
    Result,
}

impl EntryRole {
    pub fn as_str(self) -> &'static str {
        match self {
            EntryRole::Detection => "detection",
            EntryRole::GroundTruth => "ground truth",
            EntryRole::Result => "result",
        }
    }
}

/// One line of a MOT file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotEntry {
    pub frame: u32,
    pub id: i64,
    pub bb_left: f64,
    pub bb_top: f64,
    pub bb_width: f64,
    pub bb_height: f64,
    pub conf: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl MotEntry {
    /// Entry with the given box, `conf = 1` and no world position.
    pub fn new(frame: u32, id: i64, bbox: BBox) -> Self {
        MotEntry {
            frame,
            id,
            bb_left: bbox.left,
            bb_top: bbox.top,
            bb_width: bbox.width,
            bb_height: bbox.height,
            conf: 1.0,
            x: UNSET,
            y: UNSET,
            z: UNSET,
        }
    }

    pub fn with_conf(mut self, conf: f64) -> Self {
        self.conf = conf;
        self
    }

    pub fn with_world(mut self, p: WorldPoint) -> Self {
        self.x = p.x;
        self.y = p.y;
        self.z = p.z;
        self
    }

    pub fn bbox(&self) -> BBox {
        BBox {
            left: self.bb_left,
            top: self.bb_top,
            width: self.bb_width,
            height: self.bb_height,
        }
    }

    /// World position, or `None` when all three columns hold the `-1`
    /// sentinel.
    pub fn world(&self) -> Option<WorldPoint> {
        if self.x == UNSET && self.y == UNSET && self.z == UNSET {
            None
        } else {
            Some(WorldPoint::new(self.x, self.y, self.z))
        }
    }

    /// Whether a ground-truth entry takes part in evaluation.
    pub fn is_active(&self) -> bool {
        self.conf != 0.0
    }
}

impl fmt::Display for MotEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // `{}` on f64 prints the shortest string that parses back to the same value
        write!(
            f,
            "{},{},{},{},{},{},{},{},{},{}",
            self.frame,
            self.id,
            self.bb_left,
            self.bb_top,
            self.bb_width,
            self.bb_height,
            self.conf,
            self.x,
            self.y,
            self.z
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FormatErrorKind {
    FieldCount { found: usize },
    NotANumber { column: usize, text: String },
    Invalid(String),
}

/// A rejected line. `line` is 1-based.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct FormatError {
    pub line: usize,
    pub kind: FormatErrorKind,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FormatErrorKind::FieldCount { found } => write!(
                f,
                "line {}: expected {FIELD_COUNT} comma-separated fields, found {found}",
                self.line
            ),
            FormatErrorKind::NotANumber { column, text } => {
                write!(f, "line {}, column {column}: not a number: {text:?}", self.line)
            }
            FormatErrorKind::Invalid(msg) => write!(f, "line {}: {msg}", self.line),
        }
    }
}

fn parse_real(field: &str, line: usize, column: usize) -> Result<f64, FormatError> {
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(FormatError {
            line,
            kind: FormatErrorKind::NotANumber {
                column,
                text: field.to_string(),
            },
        }),
    }
}

/// Integer columns also accept integral reals such as `3.000`.
fn parse_integer(field: &str, line: usize, column: usize) -> Result<i64, FormatError> {
    if let Ok(v) = field.parse::<i64>() {
        return Ok(v);
    }
    let v = parse_real(field, line, column)?;
    if v.fract() == 0.0 && v.abs() < 9.0e15 {
        Ok(v as i64)
    } else {
        Err(FormatError {
            line,
            kind: FormatErrorKind::NotANumber {
                column,
                text: field.to_string(),
            },
        })
    }
}

fn parse_line(raw: &str, line: usize, role: EntryRole) -> Result<MotEntry, FormatError> {
    let fields: Vec<&str> = raw.split(',').map(str::trim).collect();
    if fields.len() != FIELD_COUNT {
        return Err(FormatError {
            line,
            kind: FormatErrorKind::FieldCount {
                found: fields.len(),
            },
        });
    }
    let invalid = |msg: String| FormatError {
        line,
        kind: FormatErrorKind::Invalid(msg),
    };

    let frame = parse_integer(fields[0], line, 1)?;
    let id = parse_integer(fields[1], line, 2)?;
    let mut reals = [0.0; 8];
    for (i, r) in reals.iter_mut().enumerate() {
        *r = parse_real(fields[i + 2], line, i + 3)?;
    }
    let [bb_left, bb_top, bb_width, bb_height, conf, x, y, z] = reals;

    if frame < 1 || frame > u32::MAX as i64 {
        return Err(invalid(format!("frame must be >= 1, got {frame}")));
    }
    if bb_width <= 0.0 || bb_height <= 0.0 {
        return Err(invalid(format!(
            "box width and height must be positive, got {bb_width} x {bb_height}"
        )));
    }
    match role {
        EntryRole::Detection => {}
        EntryRole::GroundTruth | EntryRole::Result => {
            if id < 0 {
                return Err(invalid(format!(
                    "{} entries need a non-negative id, got {id}",
                    role.as_str()
                )));
            }
        }
    }
    if role == EntryRole::GroundTruth && conf != 0.0 && conf != 1.0 {
        return Err(invalid(format!("ground-truth flag must be 0 or 1, got {conf}")));
    }

    Ok(MotEntry {
        frame: frame as u32,
        id,
        bb_left,
        bb_top,
        bb_width,
        bb_height,
        conf,
        x,
        y,
        z,
    })
}

/// Parses a MOT file. Entries come back in file order; blank lines are
/// skipped and both LF and CRLF endings are accepted. For ground truth and
/// results a repeated `(frame, id)` pair is rejected.
pub fn parse_mot_file(text: &str, role: EntryRole) -> Result<Vec<MotEntry>, FormatError> {
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in text.split('\n').enumerate() {
        let line = idx + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        if raw.trim().is_empty() {
            continue;
        }
        let entry = parse_line(raw, line, role)?;
        if role != EntryRole::Detection && !seen.insert((entry.frame, entry.id)) {
            return Err(FormatError {
                line,
                kind: FormatErrorKind::Invalid(format!(
                    "duplicate entry for frame {}, id {}",
                    entry.frame, entry.id
                )),
            });
        }
        entries.push(entry);
    }
    Ok(entries)
}

/// Serializes entries one per line, LF-terminated, without spaces.
pub fn write_mot_file(entries: &[MotEntry]) -> String {
    let mut out = String::with_capacity(entries.len() * 48);
    for e in entries {
        out.push_str(&e.to_string());
        out.push('\n');
    }
    out
}

/// Stable sort by `(frame, id)`.
pub fn sort_entries(entries: &mut [MotEntry]) {
    entries.sort_by_key(|e| (e.frame, e.id));
}
