use std::fs;
use std::path::PathBuf;

use isoknot::certify::{
    find_isotopy_index, offset_sequence, partition_curve, refinement_sequence, Certificate, CertifyOptions,
    IsotopySearch, Partition, Trial,
};
use isoknot::curvature::{piecewise_total_curvature, TotalCurvature, DEFAULT_PARTITION_BUDGET};
use isoknot::curve::{ParamWindow, Polyline};
use isoknot::inscribe::{pl_representation_with, DEFAULT_EPS, DEFAULT_MAX_ROUNDS};
use isoknot::pl_ops::{push_monotone_check, push_trace, MonotoneReport, PushTrace};
use isoknot::tubular::{tube_radius_with, TubeOptions, TubeRadius, DEFAULT_SAFETY};
use serde::Serialize;

use crate::error::CliError;
use crate::io::{to_json, write_polyline_file};
use crate::property::{self, PropertyName};
use crate::spec::{CurveKind, CurveSpec};

/// JSON text for stdout and whether the command's criteria were met.
pub struct Outcome {
    pub json: String,
    pub ok: bool,
}

fn certify_options(fast: bool) -> CertifyOptions {
    CertifyOptions {
        fast,
        ..CertifyOptions::default()
    }
}

fn parse_window(s: &str) -> Result<ParamWindow, CliError> {
    let bad = || CliError::Validation(format!("window `{s}` must be LO,HI"));
    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    Ok(ParamWindow::modular(lo, hi)?)
}

#[derive(Serialize)]
struct CurvatureReport<'a> {
    curve: &'a str,
    window: ParamWindow,
    #[serde(flatten)]
    total: TotalCurvature,
}

pub fn curvature(spec: &CurveSpec, window: Option<&str>, tol: f64) -> Result<Outcome, CliError> {
    let curve = spec.build()?;
    let window = window.map(parse_window).transpose()?.unwrap_or(ParamWindow::FULL);
    let total = piecewise_total_curvature(curve.as_ref(), window, tol)?;
    Ok(Outcome {
        json: to_json(
            "curvature",
            &CurvatureReport {
                curve: spec.text(),
                window,
                total,
            },
        )?,
        ok: true,
    })
}

#[derive(Serialize)]
struct TubeReport<'a> {
    curve: &'a str,
    #[serde(flatten)]
    radius: TubeRadius,
}

pub fn tube(spec: &CurveSpec, safety: f64, grid: Option<usize>) -> Result<Outcome, CliError> {
    let curve = spec.build()?;
    let mut opts = TubeOptions::default();
    if let Some(g) = grid {
        opts.separation_grid = g;
    }
    let radius = tube_radius_with(curve.as_ref(), safety, &opts)?;
    Ok(Outcome {
        json: to_json("tube", &TubeReport { curve: spec.text(), radius })?,
        ok: true,
    })
}

#[derive(Serialize)]
struct InscribeReport<'a> {
    curve: &'a str,
    eps: f64,
    vertices: usize,
    rounds: u32,
    hausdorff: f64,
    passed: bool,
    polyline_file: Option<PathBuf>,
    certificate_file: Option<PathBuf>,
    certificate: &'a Certificate,
}

pub struct InscribeArgs {
    pub eps: f64,
    pub safety: f64,
    pub max_rounds: u32,
    pub out: Option<PathBuf>,
    pub fast: bool,
}

impl Default for InscribeArgs {
    fn default() -> Self {
        InscribeArgs {
            eps: DEFAULT_EPS,
            safety: DEFAULT_SAFETY,
            max_rounds: DEFAULT_MAX_ROUNDS,
            out: None,
            fast: false,
        }
    }
}

pub fn inscribe(spec: &CurveSpec, args: &InscribeArgs) -> Result<Outcome, CliError> {
    let curve = spec.build()?;
    let r = tube_radius_with(curve.as_ref(), args.safety, &TubeOptions::default())?;
    let rep = pl_representation_with(&curve, args.eps, &r, args.max_rounds, &certify_options(args.fast))?;
    let (mut poly_file, mut cert_file) = (None, None);
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        let pf = dir.join("polyline.csv");
        write_polyline_file(&rep.polyline, &pf)?;
        let cf = dir.join("certificate.json");
        fs::write(&cf, to_json("certificate", &rep.certificate)?)?;
        poly_file = Some(pf);
        cert_file = Some(cf);
    }
    let report = InscribeReport {
        curve: spec.text(),
        eps: args.eps,
        vertices: rep.polyline.len(),
        rounds: rep.rounds,
        hausdorff: rep.hausdorff,
        passed: rep.certificate.passed,
        polyline_file: poly_file,
        certificate_file: cert_file,
        certificate: &rep.certificate,
    };
    Ok(Outcome {
        json: to_json("inscribe", &report)?,
        ok: rep.certificate.passed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceKind {
    /// Midpoint refinements of the seed inscription of the curve.
    Refinement,
    /// PL representations of the normal offsets C + ((i−1)/i)·N of a helix.
    Offset,
}

#[derive(Serialize)]
struct ConvergeReport<'a> {
    curve: &'a str,
    sequence: SequenceKind,
    i_max: u32,
    status: &'static str,
    index: Option<u32>,
    r_used: TubeRadius,
    partition: &'a Partition,
    trials: &'a [Trial],
    certificate_index: Option<u32>,
    certificate: Option<&'a Certificate>,
}

pub struct ConvergeArgs {
    pub sequence: SequenceKind,
    pub i_max: u32,
    pub eps: f64,
    pub safety: f64,
    pub budget: f64,
    pub max_rounds: u32,
    pub fast: bool,
    pub out: Option<PathBuf>,
}

impl Default for ConvergeArgs {
    fn default() -> Self {
        ConvergeArgs {
            sequence: SequenceKind::Refinement,
            i_max: 64,
            eps: DEFAULT_EPS,
            safety: DEFAULT_SAFETY,
            budget: DEFAULT_PARTITION_BUDGET,
            max_rounds: DEFAULT_MAX_ROUNDS,
            fast: false,
            out: None,
        }
    }
}

pub fn converge(spec: &CurveSpec, args: &ConvergeArgs) -> Result<Outcome, CliError> {
    let curve = spec.build()?;
    let opts = certify_options(args.fast);
    let r = tube_radius_with(curve.as_ref(), args.safety, &TubeOptions::default())?;
    let partition = partition_curve(curve.as_ref(), &r, args.budget)?;
    partition.validate(curve.as_ref())?;
    let search: Option<IsotopySearch> = if args.i_max == 0 {
        None
    } else {
        Some(match args.sequence {
            SequenceKind::Refinement => {
                let mut seq = refinement_sequence(curve.clone());
                find_isotopy_index(&partition, curve.as_ref(), &mut seq, args.i_max, &r, &opts)?
            }
            SequenceKind::Offset => {
                if spec.kind != CurveKind::OffsetHelix || spec.offset_distance() != 1.0 {
                    return Err(CliError::Validation(
                        "the offset sequence needs an offset_helix curve with unit offset".into(),
                    ));
                }
                let mut seq = offset_sequence(spec.base_helix()?, args.eps, args.safety, args.max_rounds);
                find_isotopy_index(&partition, curve.as_ref(), &mut seq, args.i_max, &r, &opts)?
            }
        })
    };
    let index = search.as_ref().and_then(|s| s.index);
    let report = ConvergeReport {
        curve: spec.text(),
        sequence: args.sequence,
        i_max: args.i_max,
        status: if index.is_some() { "FOUND" } else { "NOT_FOUND" },
        index,
        r_used: r,
        partition: &partition,
        trials: search.as_ref().map(|s| s.trials.as_slice()).unwrap_or(&[]),
        certificate_index: search.as_ref().map(|s| s.certificate_index),
        certificate: search.as_ref().map(|s| &s.certificate),
    };
    let json = to_json("converge", &report)?;
    if let Some(path) = &args.out {
        fs::write(path, &json)?;
    }
    Ok(Outcome {
        json,
        ok: index.is_some(),
    })
}

#[derive(Serialize)]
struct PushReport<'a> {
    curve: &'a str,
    vertex: usize,
    frames: usize,
    obj_file: Option<PathBuf>,
    #[serde(flatten)]
    monotone: MonotoneReport,
}

fn load_polyline(spec: &CurveSpec) -> Result<Polyline, CliError> {
    match (&spec.kind, &spec.path) {
        (CurveKind::PlFile, Some(path)) => crate::io::read_polyline(path),
        _ => Err(CliError::Validation(format!("`{}` is not a pl_file curve", spec.text()))),
    }
}

pub fn push_demo(spec: &CurveSpec, vertex: usize, frames: usize, out: Option<PathBuf>) -> Result<Outcome, CliError> {
    let p = load_polyline(spec)?;
    let trace = push_trace(&p, vertex, frames)?;
    if let Some(path) = &out {
        fs::write(path, trace.to_obj())?;
    }
    let monotone = push_monotone_check(&p, vertex, frames)?;
    let ok = monotone.monotone;
    let report = PushReport {
        curve: spec.text(),
        vertex,
        frames: trace.len(),
        obj_file: out,
        monotone,
    };
    Ok(Outcome {
        json: to_json("push-demo", &report)?,
        ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ExportFormat {
    Csv,
    Obj,
}

#[derive(Serialize)]
struct ExportReport<'a> {
    curve: &'a str,
    vertices: usize,
    out: PathBuf,
}

/// Writes a PL file unchanged, or samples a smooth curve at `samples`
/// equally spaced parameters.
pub fn export(spec: &CurveSpec, samples: usize, format: ExportFormat, out: PathBuf) -> Result<Outcome, CliError> {
    let p = if spec.kind == CurveKind::PlFile {
        load_polyline(spec)?
    } else {
        let curve = spec.build()?;
        if samples < 2 {
            return Err(CliError::Validation("need at least 2 samples".into()));
        }
        let n = if curve.is_closed() { samples } else { samples - 1 };
        let ts: Vec<f64> = (0..samples).map(|k| k as f64 / n as f64).collect();
        isoknot::inscribe::inscribe_at(curve.as_ref(), ts)?
    };
    match format {
        ExportFormat::Csv => write_polyline_file(&p, &out)?,
        ExportFormat::Obj => {
            let trace = PushTrace { frames: vec![p.clone()] };
            fs::write(&out, trace.to_obj())?;
        }
    }
    Ok(Outcome {
        json: to_json(
            "export",
            &ExportReport {
                curve: spec.text(),
                vertices: p.len(),
                out,
            },
        )?,
        ok: true,
    })
}

pub fn property(name: PropertyName, trials: usize, seed: u64) -> Result<Outcome, CliError> {
    let report = property::run(name, trials, seed)?;
    Ok(Outcome {
        json: to_json("property", &report)?,
        ok: report.passed,
    })
}
