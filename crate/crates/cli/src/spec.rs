//! Curve specifications of the form `kind:key=value,...`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use isoknot::curve::{Circle, Helix, SharedCurve, Segment, TorusKnot};
use isoknot::offsets::offset_curve_at;

use crate::error::CliError;
use crate::io::read_polyline;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    Circle,
    Helix,
    TorusKnot,
    OffsetHelix,
    Segment,
    PlFile,
}

impl CurveKind {
    fn keys(self) -> &'static [&'static str] {
        match self {
            CurveKind::Circle => &["r"],
            CurveKind::Helix | CurveKind::OffsetHelix => &["a", "b", "turns"],
            CurveKind::TorusKnot => &["p", "q", "R", "rho"],
            CurveKind::Segment => &["length"],
            CurveKind::PlFile => &[],
        }
    }

    /// Keys that may be left out.
    fn optional(self) -> &'static [&'static str] {
        match self {
            CurveKind::OffsetHelix => &["d"],
            _ => &[],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveSpec {
    pub kind: CurveKind,
    pub params: BTreeMap<String, f64>,
    pub path: Option<PathBuf>,
    text: String,
}

impl FromStr for CurveSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = |msg: String| CliError::Validation(format!("curve spec `{s}`: {msg}"));
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let kind = match name {
            "circle" => CurveKind::Circle,
            "helix" => CurveKind::Helix,
            "torus_knot" => CurveKind::TorusKnot,
            "offset_helix" => CurveKind::OffsetHelix,
            "segment" => CurveKind::Segment,
            "pl_file" => CurveKind::PlFile,
            other => return Err(bad(format!("unknown curve kind `{other}`"))),
        };
        if kind == CurveKind::PlFile {
            if rest.is_empty() {
                return Err(bad("pl_file needs a path".into()));
            }
            return Ok(CurveSpec {
                kind,
                params: BTreeMap::new(),
                path: Some(PathBuf::from(rest)),
                text: s.to_string(),
            });
        }
        let mut params = BTreeMap::new();
        for item in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| bad(format!("`{item}` is not key=value")))?;
            if !kind.keys().contains(&k) && !kind.optional().contains(&k) {
                return Err(bad(format!("unknown parameter `{k}`")));
            }
            let v: f64 = v.parse().map_err(|_| bad(format!("`{v}` is not a number")))?;
            if params.insert(k.to_string(), v).is_some() {
                return Err(bad(format!("parameter `{k}` given twice")));
            }
        }
        for k in kind.keys() {
            if !params.contains_key(*k) {
                return Err(bad(format!("missing parameter `{k}`")));
            }
        }
        Ok(CurveSpec {
            kind,
            params,
            path: None,
            text: s.to_string(),
        })
    }
}

impl CurveSpec {
    pub fn text(&self) -> &str {
        &self.text
    }

    fn get(&self, k: &str) -> f64 {
        self.params[k]
    }

    fn count(&self, k: &str) -> Result<u32, CliError> {
        let v = self.get(k);
        if v.fract() != 0.0 || v < 1.0 || v > u32::MAX as f64 {
            return Err(CliError::Validation(format!("`{k}` must be a positive integer, got {v}")));
        }
        Ok(v as u32)
    }

    /// The helix an `offset_helix` spec is built on.
    pub fn base_helix(&self) -> Result<SharedCurve, CliError> {
        match self.kind {
            CurveKind::Helix | CurveKind::OffsetHelix => {
                Ok(Arc::new(Helix::new(self.get("a"), self.get("b"), self.get("turns"))?))
            }
            _ => Err(CliError::Validation(format!("`{}` is not a helix", self.text))),
        }
    }

    pub fn offset_distance(&self) -> f64 {
        self.params.get("d").copied().unwrap_or(1.0)
    }

    pub fn build(&self) -> Result<SharedCurve, CliError> {
        Ok(match self.kind {
            CurveKind::Circle => Arc::new(Circle::new(self.get("r"))?),
            CurveKind::Helix => self.base_helix()?,
            CurveKind::TorusKnot => Arc::new(TorusKnot::new(
                self.count("p")?,
                self.count("q")?,
                self.get("R"),
                self.get("rho"),
            )?),
            CurveKind::OffsetHelix => Arc::new(offset_curve_at(&self.base_helix()?, self.offset_distance())?),
            CurveKind::Segment => Arc::new(Segment::along_x(self.get("length"))?),
            CurveKind::PlFile => Arc::new(read_polyline(self.path.as_ref().expect("pl_file has a path"))?),
        })
    }
}
