//! Median pushes on polylines and the chord reduction built from them.

use std::fmt::Write as _;

use serde::Serialize;

use crate::curvature::{exterior_angle, pl_total_curvature, vertex_chain_curvature};
use crate::curve::Polyline;
use crate::metric::{polyline_is_simple_oracle, DEFAULT_CLEARANCE};
use crate::{Error, Result, Vec3};

pub const DEFAULT_FRAMES: usize = 50;
/// Allowed increase of total curvature between consecutive frames.
pub const MONOTONE_SLACK: f64 = 1e-9;
/// Relative area below which a vertex and its neighbours count as collinear.
pub const COLLINEAR_TOL: f64 = 1e-12;

/// Snapshots of a polyline during one or more pushes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PushTrace {
    pub frames: Vec<Polyline>,
}

impl PushTrace {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Wavefront OBJ text: one object per frame with its vertices and a
    /// single line element.
    pub fn to_obj(&self) -> String {
        let mut out = String::new();
        let mut base = 1;
        for (k, f) in self.frames.iter().enumerate() {
            writeln!(out, "o frame_{k}").unwrap();
            for v in f.vertices() {
                writeln!(out, "v {} {} {}", v.x, v.y, v.z).unwrap();
            }
            let mut idx: Vec<usize> = (base..base + f.len()).collect();
            if f.closed() {
                idx.push(base);
            }
            let line: Vec<String> = idx.iter().map(usize::to_string).collect();
            writeln!(out, "l {}", line.join(" ")).unwrap();
            base += f.len();
        }
        out
    }
}

fn neighbours(p: &Polyline, vertex: usize) -> Result<(usize, usize)> {
    let n = p.len();
    if vertex >= n {
        return Err(Error::NotInterior { index: vertex });
    }
    if p.closed() {
        if n < 3 {
            return Err(Error::NotInterior { index: vertex });
        }
        Ok(((vertex + n - 1) % n, (vertex + 1) % n))
    } else if vertex == 0 || vertex + 1 == n {
        Err(Error::NotInterior { index: vertex })
    } else {
        Ok((vertex - 1, vertex + 1))
    }
}

/// Moves vertex `B` toward the midpoint of its neighbours `A`, `C`:
/// `B' = (1 − s)·B + s·(A + C)/2`.
pub fn median_push(p: &Polyline, vertex: usize, s: f64) -> Result<Polyline> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidArgument(format!("push fraction must be in [0, 1], got {s}")));
    }
    let (ia, ic) = neighbours(p, vertex)?;
    let v = p.vertices();
    let (a, b, c) = (v[ia], v[vertex], v[ic]);
    let area = (a - b).cross(&(c - b)).norm();
    if area <= COLLINEAR_TOL * (a - b).norm() * (c - b).norm() {
        return Err(Error::CollinearTriple { index: vertex });
    }
    if s == 0.0 {
        return Ok(p.clone());
    }
    let target: Vec3 = b * (1.0 - s) + (a + c) * (0.5 * s);
    p.with_vertex(vertex, target)
}

/// Frames of a single median push at `s = k/(frames − 1)`.
pub fn push_trace(p: &Polyline, vertex: usize, frames: usize) -> Result<PushTrace> {
    if frames < 2 {
        return Err(Error::InvalidArgument(format!("a trace needs at least 2 frames, got {frames}")));
    }
    let frames = (0..frames)
        .map(|k| median_push(p, vertex, k as f64 / (frames - 1) as f64))
        .collect::<Result<_>>()?;
    Ok(PushTrace { frames })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotoneReport {
    pub monotone: bool,
    /// Largest increase of total curvature between consecutive frames
    /// (0 when strictly nonincreasing).
    pub max_violation: f64,
    pub curvatures: Vec<f64>,
}

/// Whether total curvature is nonincreasing along the push trace of
/// `vertex`.
pub fn push_monotone_check(p: &Polyline, vertex: usize, frames: usize) -> Result<MonotoneReport> {
    let trace = push_trace(p, vertex, frames)?;
    let curvatures = trace
        .frames
        .iter()
        .map(|f| pl_total_curvature(f).map(|t| t.value))
        .collect::<Result<Vec<_>>>()?;
    let max_violation = curvatures.windows(2).map(|w| (w[1] - w[0]).max(0.0)).fold(0.0, f64::max);
    Ok(MonotoneReport {
        monotone: max_violation <= MONOTONE_SLACK,
        max_violation,
        curvatures,
    })
}

/// Median-pushes the interior vertices of the sub-polyline `j..=k` one at a
/// time (largest exterior angle first) until only the chord from vertex `j`
/// to vertex `k` remains. A vertex pushed to `s = 1` lies on its
/// neighbours' segment and is then dropped. Every frame is checked with the
/// simplicity oracle.
pub fn reduce_to_chord(p: &Polyline, j: usize, k: usize, frames: usize) -> Result<PushTrace> {
    if !(j < k && k < p.len()) {
        return Err(Error::InvalidArgument(format!("bad sub-polyline {j}..={k} of {} vertices", p.len())));
    }
    if frames < 2 {
        return Err(Error::InvalidArgument(format!("a push needs at least 2 frames, got {frames}")));
    }
    if k == j + 1 {
        return Ok(PushTrace::default());
    }
    let sub = &p.vertices()[j..=k];
    let total = vertex_chain_curvature(sub, false)?;
    if total >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::BudgetExceeded {
            total,
            limit: std::f64::consts::FRAC_PI_2,
        });
    }
    let check = |f: &Polyline, stage: &str| {
        if polyline_is_simple_oracle(f, DEFAULT_CLEARANCE) {
            Ok(())
        } else {
            Err(Error::Internal(format!("chord reduction lost simplicity {stage}")))
        }
    };
    let mut cur = p.clone();
    let mut end = k;
    check(&cur, "at the start")?;
    let mut out = vec![cur.clone()];
    while end > j + 1 {
        let v = cur.vertices();
        let mut pick = (j + 1, -1.0);
        for i in j + 1..end {
            let angle = exterior_angle(&(v[i] - v[i - 1]), &(v[i + 1] - v[i]))?.radians();
            if angle > pick.1 {
                pick = (i, angle);
            }
        }
        let vertex = pick.0;
        match push_trace(&cur, vertex, frames) {
            Ok(trace) => {
                for (n, f) in trace.frames.into_iter().enumerate().skip(1) {
                    check(&f, &format!("pushing vertex {vertex}, frame {n}"))?;
                    out.push(f);
                }
            }
            // already on its neighbours' segment: nothing to push
            Err(Error::CollinearTriple { .. }) => {}
            Err(e) => return Err(e),
        }
        cur = cur.without_vertex(vertex)?;
        end -= 1;
    }
    let last = out.last_mut().expect("trace has the start frame");
    *last = cur;
    Ok(PushTrace { frames: out })
}
