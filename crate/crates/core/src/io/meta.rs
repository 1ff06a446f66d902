//! Sequence maps and per-sequence metadata sidecars.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Ordered list of sequence names forming a benchmark split.
///
/// The file form is one name per line. Blank lines and lines starting with
/// `#` are ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqMap {
    names: Vec<String>,
}

impl SeqMap {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = HashSet::new();
        for n in &names {
            if n.trim().is_empty() {
                return Err(Error::SeqMap("empty sequence name".into()));
            }
            if n.contains(['/', '\\']) {
                return Err(Error::SeqMap(format!("sequence name {n:?} contains a path separator")));
            }
            if !seen.insert(n.as_str()) {
                return Err(Error::SeqMap(format!("sequence {n:?} listed twice")));
            }
        }
        Ok(SeqMap { names })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = self.names.join("\n");
        out.push('\n');
        out
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Camera {
    Static,
    Moving,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Viewpoint {
    Low,
    Medium,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Weather {
    Sunny,
    Cloudy,
    Night,
}

macro_rules! keyword_enum {
    ($ty:ident { $($variant:ident => $word:literal),+ $(,)? }) => {
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($word => Ok($ty::$variant),)+
                    other => Err(Error::Metadata(format!(
                        concat!("unknown ", stringify!($ty), " {:?}"), other
                    ))),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($ty::$variant => $word,)+ })
            }
        }
    };
}

keyword_enum!(Camera { Static => "static", Moving => "moving" });
keyword_enum!(Viewpoint { Low => "low", Medium => "medium", High => "high" });
keyword_enum!(Weather { Sunny => "sunny", Cloudy => "cloudy", Night => "night" });

/// Per-sequence description, stored as a `key=value` sidecar.
///
/// ```text
/// name=TUD-Campus
/// fps=25
/// width=640
/// height=480
/// length=71
/// has3d=false
/// camera=static
/// viewpoint=medium
/// weather=cloudy
/// ```
///
/// `name`, `fps`, `width`, `height` and `length` are required; the rest
/// default to `has3d=false` and unknown tags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceMeta {
    pub name: String,
    pub fps: f64,
    pub width: u32,
    pub height: u32,
    pub length: u32,
    pub has3d: bool,
    pub camera: Option<Camera>,
    pub viewpoint: Option<Viewpoint>,
    pub weather: Option<Weather>,
}

impl SequenceMeta {
    pub fn new(name: impl Into<String>, fps: f64, width: u32, height: u32, length: u32) -> Result<Self> {
        let meta = SequenceMeta {
            name: name.into(),
            fps,
            width,
            height,
            length,
            has3d: false,
            camera: None,
            viewpoint: None,
            weather: None,
        };
        meta.validate()?;
        Ok(meta)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::Metadata("empty name".into()));
        }
        if !(self.fps.is_finite() && self.fps > 0.0) {
            return Err(Error::Metadata(format!("fps must be positive, got {}", self.fps)));
        }
        if self.length < 1 {
            return Err(Error::Metadata("length must be at least 1 frame".into()));
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut name = None;
        let mut fps = None;
        let mut width = None;
        let mut height = None;
        let mut length = None;
        let mut has3d = false;
        let (mut camera, mut viewpoint, mut weather) = (None, None, None);

        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Metadata(format!("line {}: expected key=value", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| Error::Metadata(format!("line {}: invalid {what} {value:?}", n + 1));
            match key {
                "name" => name = Some(value.to_string()),
                "fps" => fps = Some(value.parse::<f64>().map_err(|_| bad("fps"))?),
                "width" => width = Some(value.parse::<u32>().map_err(|_| bad("width"))?),
                "height" => height = Some(value.parse::<u32>().map_err(|_| bad("height"))?),
                "length" => length = Some(value.parse::<u32>().map_err(|_| bad("length"))?),
                "has3d" => has3d = value.parse::<bool>().map_err(|_| bad("has3d"))?,
                "camera" => camera = Some(value.parse()?),
                "viewpoint" => viewpoint = Some(value.parse()?),
                "weather" => weather = Some(value.parse()?),
                // unknown keys are left for other tools
                _ => {}
            }
        }

        let missing = |k: &str| Error::Metadata(format!("missing key {k:?}"));
        let meta = SequenceMeta {
            name: name.ok_or_else(|| missing("name"))?,
            fps: fps.ok_or_else(|| missing("fps"))?,
            width: width.ok_or_else(|| missing("width"))?,
            height: height.ok_or_else(|| missing("height"))?,
            length: length.ok_or_else(|| missing("length"))?,
            has3d,
            camera,
            viewpoint,
            weather,
        };
        meta.validate()?;
        Ok(meta)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "name={}\nfps={}\nwidth={}\nheight={}\nlength={}\nhas3d={}\n",
            self.name, self.fps, self.width, self.height, self.length, self.has3d
        );
        if let Some(c) = self.camera {
            out.push_str(&format!("camera={c}\n"));
        }
        if let Some(v) = self.viewpoint {
            out.push_str(&format!("viewpoint={v}\n"));
        }
        if let Some(w) = self.weather {
            out.push_str(&format!("weather={w}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seqmap_parsing() {
        let m = SeqMap::parse("# test split\nTUD-Campus\n\n  Venice-1 \n").unwrap();
        assert_eq!(m.names(), ["TUD-Campus", "Venice-1"]);
        assert!(SeqMap::parse("A\nB\nA\n").is_err());
        assert!(SeqMap::new(["../x"]).is_err());
        assert_eq!(SeqMap::parse(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn meta_round_trip() {
        let mut m = SequenceMeta::new("PETS09-S2L2", 7.0, 768, 576, 436).unwrap();
        m.has3d = true;
        m.camera = Some(Camera::Static);
        m.viewpoint = Some(Viewpoint::High);
        m.weather = Some(Weather::Cloudy);
        assert_eq!(SequenceMeta::parse(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn meta_errors() {
        assert!(SequenceMeta::parse("name=x\nfps=0\nwidth=1\nheight=1\nlength=1").is_err());
        assert!(SequenceMeta::parse("name=x\nfps=25\nwidth=1\nheight=1\nlength=0").is_err());
        assert!(SequenceMeta::parse("name=x\nfps=25\nwidth=1\nheight=1").is_err());
        assert!(SequenceMeta::parse("name=x\nfps=25\nwidth=1\nheight=1\nlength=3\ncamera=drone").is_err());
        assert!(SequenceMeta::parse("garbage").is_err());
    }
}
