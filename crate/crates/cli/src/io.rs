//! Polyline CSV files and JSON output.
//!
//! A polyline file holds an optional `closed=true|false` line, an optional
//! `x,y,z` (or `x,y,z,t`) header and one vertex per row. Lines starting
//! with `#` are comments. Without a `t` column the parameters are uniform.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use isoknot::curve::Polyline;
use isoknot::Vec3;
use serde::Serialize;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub fn read_polyline(path: &Path) -> Result<Polyline, CliError> {
    let file = File::open(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    parse_polyline(file, &path.display().to_string())
}

pub fn parse_polyline(input: impl std::io::Read, name: &str) -> Result<Polyline, CliError> {
    let bad = |msg: String| CliError::Validation(format!("{name}: {msg}"));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut closed = false;
    let mut pts = Vec::new();
    let mut ts = Vec::new();
    let mut with_t = None;
    for (row, rec) in reader.records().enumerate() {
        let rec = rec?;
        let first = rec.get(0).unwrap_or("");
        if rec.len() == 1 {
            if let Some(flag) = first.strip_prefix("closed=") {
                closed = flag
                    .parse()
                    .map_err(|_| bad(format!("`{first}` must be closed=true or closed=false")))?;
                continue;
            }
            if first.is_empty() {
                continue;
            }
        }
        if first == "x" {
            match rec.iter().collect::<Vec<_>>().as_slice() {
                ["x", "y", "z"] => with_t = Some(false),
                ["x", "y", "z", "t"] => with_t = Some(true),
                _ => return Err(bad(format!("unexpected header {rec:?}"))),
            }
            continue;
        }
        let want = if with_t == Some(true) || (with_t.is_none() && rec.len() == 4) { 4 } else { 3 };
        if rec.len() != want {
            return Err(bad(format!("row {} has {} fields, expected {want}", row + 1, rec.len())));
        }
        let nums = rec
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| bad(format!("`{f}` is not a number"))))
            .collect::<Result<Vec<_>, _>>()?;
        pts.push(Vec3::new(nums[0], nums[1], nums[2]));
        if want == 4 {
            ts.push(nums[3]);
        }
    }
    let p = if ts.is_empty() {
        Polyline::uniform(pts, closed)
    } else {
        Polyline::new(pts, ts, closed)
    };
    p.map_err(|e| bad(e.to_string()))
}

/// Writes a polyline with its parameters; floats use Rust's shortest
/// round-trip formatting.
pub fn write_polyline(p: &Polyline, out: impl Write) -> Result<(), CliError> {
    let mut out = BufWriter::new(out);
    writeln!(out, "closed={}", p.closed())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y", "z", "t"])?;
    for (v, t) in p.vertices().iter().zip(p.params()) {
        w.write_record([v.x, v.y, v.z, *t].map(|c| c.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_polyline_file(p: &Polyline, path: &Path) -> Result<(), CliError> {
    write_polyline(p, File::create(path)?)
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    version: u32,
    command: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON with the common `version` and `command` fields. Non-finite
/// numbers become `null`.
pub fn to_json<T: Serialize>(command: &str, body: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(&Envelope {
        version: SCHEMA_VERSION,
        command,
        body,
    })?)
}
