//! Distances between sampled sets and curves, convex hulls, segment
//! predicates and the normal-plane separation test.

pub mod hull;
pub mod segments;

use serde::Serialize;

use crate::curve::{deriv1, wrap_param, CurveSource, ParamWindow, Side, TANGENT_EPS};
use crate::{Error, Result, Vec3};

pub use hull::{convex_hull, HullSet, HullShape};
pub use segments::{
    closest_on_segment, point_segment_distance, polyline_is_simple_oracle, segment_segment_distance,
    DEFAULT_CLEARANCE,
};

/// A distance together with two points realizing it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistanceReport {
    pub value: f64,
    pub witness_a: Vec3,
    pub witness_b: Vec3,
}

impl DistanceReport {
    fn between(a: Vec3, b: Vec3) -> Self {
        DistanceReport {
            value: (a - b).norm(),
            witness_a: a,
            witness_b: b,
        }
    }

    fn zero() -> Self {
        DistanceReport::between(Vec3::zeros(), Vec3::zeros())
    }

    fn max(self, other: DistanceReport) -> DistanceReport {
        if other.value > self.value {
            other
        } else {
            self
        }
    }
}

/// A visiting order that spreads early queries over the whole set, so the
/// running maximum in [`directed_hausdorff`] grows fast.
fn spread_order(n: usize) -> impl Iterator<Item = usize> {
    let mut step = ((n as f64) * 0.618_033_988_75).round().max(1.0) as usize;
    while n > 1 && gcd(step, n) != 1 {
        step += 1;
    }
    (0..n).map(move |k| (k * step) % n.max(1))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `sup_{x∈A} inf_{y∈B} |x − y|` over finite samples. Witnesses are
/// `(x, nearest y)`.
///
/// Uses the early-break scan: the inner search for `x` stops as soon as a
/// `y` closer than the running maximum is found, starting from the index of
/// `B` proportional to that of `x` (which is close for samples of two curves
/// sharing a parametrization).
pub fn directed_hausdorff(a: &[Vec3], b: &[Vec3]) -> Result<DistanceReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(directed_scan(a, b.len(), |_, j| b[j]))
}

/// Like [`directed_hausdorff`], but measured to the polyline through `b`
/// rather than to its points.
pub fn directed_to_chain(a: &[Vec3], b: &[Vec3]) -> Result<DistanceReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    if b.len() == 1 {
        return directed_hausdorff(a, b);
    }
    Ok(directed_scan(a, b.len() - 1, |x, j| closest_on_segment(x, &b[j], &b[j + 1])))
}

/// Early-break scan shared by the directed distances: `nearest(x, j)` is
/// the closest point of the `j`-th of `m` target pieces.
fn directed_scan(a: &[Vec3], m: usize, nearest: impl Fn(&Vec3, usize) -> Vec3) -> DistanceReport {
    let n = a.len();
    let mut best = DistanceReport::zero();
    let mut best2 = -1.0_f64;
    for i in spread_order(n) {
        let x = a[i];
        let j0 = if n > 1 { i * (m - 1) / (n - 1) } else { 0 };
        let mut near = f64::INFINITY;
        let mut near_p = x;
        let mut early = false;
        'scan: for off in 0..m {
            let up = j0 + off;
            let down = j0.checked_sub(off).filter(|_| off > 0);
            if up >= m && down.is_none() {
                break;
            }
            for j in [Some(up).filter(|&u| u < m), down].into_iter().flatten() {
                let p = nearest(&x, j);
                let d2 = (x - p).norm_squared();
                if d2 < near {
                    near = d2;
                    near_p = p;
                    if near <= best2 {
                        early = true;
                        break 'scan;
                    }
                }
            }
        }
        if !early && near > best2 {
            best2 = near;
            best = DistanceReport::between(x, near_p);
        }
    }
    best
}

/// Symmetric Hausdorff distance between two finite point samples.
pub fn hausdorff_distance(a: &[Vec3], b: &[Vec3]) -> Result<DistanceReport> {
    let ab = directed_hausdorff(a, b)?;
    let ba = directed_hausdorff(b, a)?;
    let ba = DistanceReport {
        value: ba.value,
        witness_a: ba.witness_b,
        witness_b: ba.witness_a,
    };
    Ok(ab.max(ba))
}

/// Hausdorff distance between segment `ab` and a sampled curve. Distances
/// from the samples to the segment are exact; the segment side is sampled
/// at `spacing` and measured to the polyline through the samples.
pub fn segment_hausdorff(a: &Vec3, b: &Vec3, samples: &[Vec3], spacing: f64) -> Result<DistanceReport> {
    if samples.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut best = DistanceReport::zero();
    for p in samples {
        let q = closest_on_segment(p, a, b);
        best = best.max(DistanceReport::between(q, *p));
    }
    let len = (b - a).norm();
    let n = ((len / spacing.max(f64::MIN_POSITIVE)).ceil() as usize).clamp(1, 1 << 20);
    let chord: Vec<Vec3> = (0..=n).map(|k| a + (b - a) * (k as f64 / n as f64)).collect();
    Ok(best.max(directed_to_chain(&chord, samples)?))
}

/// Points of the sub-curve over `window` (window coordinates, modular on
/// closed curves), with consecutive samples at most `spacing` apart in
/// space. Corners inside the window are always sampled. Returns
/// `(window coordinate, point)` pairs in increasing order.
pub fn sample_window(curve: &dyn CurveSource, window: ParamWindow, spacing: f64) -> Result<Vec<(f64, Vec3)>> {
    window.validate_for(curve)?;
    if !(spacing > 0.0) {
        return Err(Error::InvalidArgument(format!("sample spacing must be positive, got {spacing}")));
    }
    let closed = curve.is_closed();
    let at = |x: f64| curve.position(wrap_param(x, closed, Side::Right));
    let mut knots = vec![window.lo];
    let corners = window.interior_points(&crate::curve::corner_candidates(curve), closed);
    const BASE: usize = 32;
    let mut grid: Vec<f64> = (1..BASE).map(|k| window.lo + window.len() * k as f64 / BASE as f64).collect();
    grid.extend(corners);
    grid.sort_by(f64::total_cmp);
    knots.extend(grid);
    knots.push(window.hi);
    knots.dedup();

    let mut out = Vec::with_capacity(knots.len() * 2);
    out.push((knots[0], at(knots[0])));
    for w in knots.windows(2) {
        let start = *out.last().unwrap();
        refine_samples(&at, start, (w[1], at(w[1])), spacing, 48, &mut out);
    }
    Ok(out)
}

fn refine_samples(
    at: &dyn Fn(f64) -> Vec3,
    a: (f64, Vec3),
    b: (f64, Vec3),
    spacing: f64,
    depth: u32,
    out: &mut Vec<(f64, Vec3)>,
) {
    if (b.1 - a.1).norm() <= spacing || depth == 0 {
        out.push(b);
        return;
    }
    let m = 0.5 * (a.0 + b.0);
    let mid = (m, at(m));
    refine_samples(at, a, mid, spacing, depth - 1, out);
    refine_samples(at, mid, b, spacing, depth - 1, out);
}

pub fn sample_points(curve: &dyn CurveSource, window: ParamWindow, spacing: f64) -> Result<Vec<Vec3>> {
    Ok(sample_window(curve, window, spacing)?.into_iter().map(|(_, p)| p).collect())
}

/// Arc length of a window, from a fine chord sum.
pub fn approx_length(curve: &dyn CurveSource, window: ParamWindow) -> Result<f64> {
    let n = 2048;
    let closed = curve.is_closed();
    window.validate_for(curve)?;
    let mut prev = curve.position(wrap_param(window.lo, closed, Side::Right));
    let mut total = 0.0;
    for k in 1..=n {
        let x = window.lo + window.len() * k as f64 / n as f64;
        let p = curve.position(wrap_param(x, closed, Side::Right));
        total += (p - prev).norm();
        prev = p;
    }
    Ok(total)
}

/// Nearest point of a curve to a query point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Projection {
    pub distance: f64,
    /// Curve parameter of the foot point.
    pub t: f64,
    pub point: Vec3,
}

/// Minimum grid size for [`point_to_curve`].
pub const MIN_PROJECTION_GRID: usize = 64;

/// Grid samples of a curve reused across many projections.
pub struct ProjectionIndex<'a> {
    curve: &'a dyn CurveSource,
    ts: Vec<f64>,
    pts: Vec<Vec3>,
}

impl<'a> ProjectionIndex<'a> {
    pub fn new(curve: &'a dyn CurveSource, grid: usize) -> Result<Self> {
        if grid < MIN_PROJECTION_GRID {
            return Err(Error::InvalidArgument(format!(
                "projection grid must be at least {MIN_PROJECTION_GRID}, got {grid}"
            )));
        }
        let mut ts: Vec<f64> = (0..=grid).map(|k| k as f64 / grid as f64).collect();
        ts.extend(curve.breakpoints());
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let pts = ts.iter().map(|&t| curve.position(t)).collect();
        Ok(ProjectionIndex { curve, ts, pts })
    }

    pub fn project(&self, p: &Vec3) -> Projection {
        let closed = self.curve.is_closed();
        let n = self.ts.len();
        let d: Vec<f64> = self.pts.iter().map(|q| (q - p).norm()).collect();
        let (mut bi, mut best) = (0, f64::INFINITY);
        for (i, &di) in d.iter().enumerate() {
            if di < best {
                best = di;
                bi = i;
            }
        }
        let slack = self
            .pts
            .windows(2)
            .map(|w| (w[1] - w[0]).norm())
            .fold(0.0, f64::max);
        let mut out = Projection {
            distance: best,
            t: self.ts[bi],
            point: self.pts[bi],
        };
        for i in 0..n {
            if d[i] > best + slack {
                continue;
            }
            let left = if i > 0 { d[i - 1] } else { f64::INFINITY };
            let right = if i + 1 < n { d[i + 1] } else { f64::INFINITY };
            if d[i] > left || d[i] > right {
                continue;
            }
            let lo = if i > 0 {
                self.ts[i - 1]
            } else if closed {
                self.ts[n - 2] - 1.0
            } else {
                0.0
            };
            let hi = if i + 1 < n {
                self.ts[i + 1]
            } else if closed {
                1.0 + self.ts[1]
            } else {
                1.0
            };
            let f = |x: f64| (self.curve.position(wrap_param(x, closed, Side::Right)) - p).norm();
            let (x, fx) = golden_section(&f, lo, hi);
            if fx < out.distance {
                let t = wrap_param(x, closed, Side::Right);
                out = Projection {
                    distance: fx,
                    t,
                    point: self.curve.position(t),
                };
            }
        }
        out
    }
}

/// Distance from `p` to the curve, by grid minimization refined with golden
/// section search around every competitive grid minimum.
pub fn point_to_curve(curve: &dyn CurveSource, p: &Vec3, grid: usize) -> Result<Projection> {
    Ok(ProjectionIndex::new(curve, grid)?.project(p))
}

fn golden_section(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - (b - a) * INV_PHI;
    let mut d = a + (b - a) * INV_PHI;
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if b - a <= 1e-14 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * INV_PHI;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * INV_PHI;
            fd = f(d);
        }
    }
    let ends = [(a, f(a)), (b, f(b)), (c, fc), (d, fd)];
    ends.into_iter().fold((a, f64::INFINITY), |acc, e| if e.1 < acc.1 { e } else { acc })
}

/// Whether the normal plane at `C(t0)` strictly separates the sub-curves
/// over `left` (ending at `t0`) and `right` (starting at `t0`), judged on
/// `samples` points per window. The shared point `C(t0)` is excluded.
pub fn normal_plane_separates(
    curve: &dyn CurveSource,
    t0: f64,
    left: ParamWindow,
    right: ParamWindow,
    samples: usize,
) -> Result<bool> {
    Ok(normal_plane_margin(curve, t0, left, right, samples)? > 0.0)
}

/// Smallest signed distance of the samples of [`normal_plane_separates`] to
/// the normal plane, positive on the expected side.
pub fn normal_plane_margin(
    curve: &dyn CurveSource,
    t0: f64,
    left: ParamWindow,
    right: ParamWindow,
    samples: usize,
) -> Result<f64> {
    let closed = curve.is_closed();
    let same = |x: f64| {
        let d = x - t0;
        if closed {
            (d - d.round()).abs() <= 1e-12
        } else {
            d.abs() <= 1e-12
        }
    };
    if !same(left.hi) || !same(right.lo) {
        return Err(Error::InvalidArgument(format!(
            "windows {left:?} and {right:?} do not meet at {t0}"
        )));
    }
    left.validate_for(curve)?;
    right.validate_for(curve)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample per window".into()));
    }
    let tp = wrap_param(t0, closed, Side::Right);
    let tangent = deriv1(curve, tp);
    if !(tangent.norm() >= TANGENT_EPS) {
        return Err(Error::DegenerateTangent { t: t0 });
    }
    let unit = tangent.normalize();
    let origin = curve.position(tp);
    let side = |x: f64| (curve.position(wrap_param(x, closed, Side::Right)) - origin).dot(&unit);
    let n = samples as f64;
    let left_min = (0..samples)
        .map(|k| -side(left.lo + left.len() * k as f64 / n))
        .fold(f64::INFINITY, f64::min);
    let right_min = (1..=samples)
        .map(|k| side(right.lo + right.len() * k as f64 / n))
        .fold(f64::INFINITY, f64::min);
    Ok(left_min.min(right_min))
}
