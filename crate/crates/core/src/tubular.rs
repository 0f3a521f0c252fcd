//! Radius of a non-self-intersecting tube around a smooth simple curve.
//!
//! The radius is `safety · min(1/κ_max, d_min/2, r_end)` where
//!
//! * `κ_max` is the maximum curvature,
//! * `d_min` is the shortest doubly-critical chord: a chord `C(s)C(t)`
//!   perpendicular to the curve at both ends, with `s` and `t` at least
//!   `band` apart in parameter,
//! * `r_end` is the end radius of an open curve. Walking away from an end
//!   `e`, the distance `g(t) = |C(t) − e|` first grows; `r_end` is the
//!   smallest value `g` takes after it has started to come back, or the
//!   largest value of `g` if it never does. Every ball around `e` of smaller
//!   radius meets the curve in a single arc.

use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::curvature_with_side;
use crate::curve::{derivative, wrap_param, CurveSource, Side, TANGENT_EPS};
use crate::{Error, Result, Vec3};

pub const DEFAULT_SAFETY: f64 = 0.9;
pub const DEFAULT_BAND: f64 = 0.01;
/// Chords shorter than this mean the curve touches itself.
pub const SIMPLICITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TubeRadius {
    pub r: f64,
    pub kappa_max: f64,
    /// `f64::INFINITY` when the curve has no doubly-critical chord.
    pub d_min: f64,
    /// `f64::INFINITY` for closed curves.
    pub r_end: f64,
    pub safety: f64,
}

impl TubeRadius {
    /// A radius given directly rather than computed; all three bounds are
    /// set so that the defining identity holds with `safety = 1`.
    pub fn from_radius(r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidArgument(format!("tube radius must be positive, got {r}")));
        }
        Ok(TubeRadius {
            r,
            kappa_max: 1.0 / r,
            d_min: 2.0 * r,
            r_end: r,
            safety: 1.0,
        })
    }

    /// The smallest of the three bounds, before the safety factor.
    pub fn bound(&self) -> f64 {
        (1.0 / self.kappa_max).min(self.d_min / 2.0).min(self.r_end)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TubeOptions {
    pub curvature_grid: usize,
    pub separation_grid: usize,
    pub end_grid: usize,
    pub band: f64,
}

impl Default for TubeOptions {
    fn default() -> Self {
        TubeOptions {
            curvature_grid: 1024,
            separation_grid: 400,
            end_grid: 4096,
            band: DEFAULT_BAND,
        }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimizes `f` on `[a, b]` by golden-section search.
fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let mut c = b - (b - a) * INV_PHI;
    let mut d = a + (b - a) * INV_PHI;
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-13 {
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
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Maximum curvature, evaluated per C2 piece on a grid and refined by
/// golden-section search around the best grid cell of each piece.
///
/// A single straight segment has `κ_max = 0`; PL curves with corners are
/// rejected since their curvature is concentrated at the vertices.
pub fn max_curvature(curve: &dyn CurveSource, grid: usize) -> Result<f64> {
    if grid < 256 {
        return Err(Error::InvalidArgument(format!("curvature grid must be at least 256, got {grid}")));
    }
    let breaks = curve.breakpoints();
    if curve.is_piecewise_linear() {
        if breaks.is_empty() && !curve.is_closed() {
            return Ok(0.0);
        }
        return Err(Error::PiecewiseLinear);
    }
    let mut knots = vec![0.0];
    knots.extend(&breaks);
    knots.push(1.0);
    let mut best = 0.0_f64;
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let n = ((grid as f64 * (b - a)).ceil() as usize).max(16);
        let ts: Vec<f64> = (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
        let side_at = |k: usize| if k == n { Side::Left } else { Side::Right };
        let vals: Vec<f64> = (0..=n)
            .map(|k| curvature_with_side(curve, ts[k], side_at(k)))
            .collect::<Result<_>>()?;
        let (kbest, &vbest) = vals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(y.1))
            .expect("non-empty grid");
        best = best.max(vbest);
        let lo = ts[kbest.saturating_sub(1)];
        let hi = ts[(kbest + 1).min(n)];
        let f = |t: f64| -curvature_with_side(curve, t, Side::Right).unwrap_or(0.0);
        let (_, fv) = golden_min(&f, lo, hi);
        best = best.max(-fv);
    }
    Ok(best)
}

/// A doubly-critical chord.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Chord {
    pub distance: f64,
    pub s: f64,
    pub t: f64,
}

fn separation(s: f64, t: f64, closed: bool) -> f64 {
    let d = (t - s).abs();
    if closed {
        d.min(1.0 - d)
    } else {
        d
    }
}

struct Local {
    p: Vec3,
    d1: Vec3,
    d2: Vec3,
}

fn local(curve: &dyn CurveSource, t: f64) -> Local {
    let side = crate::curve::default_side(t);
    Local {
        p: curve.position(t),
        d1: derivative(curve, t, 1, side),
        d2: derivative(curve, t, 2, side),
    }
}

/// Solves `(C(t) − C(s))·C'(s) = 0 = (C(t) − C(s))·C'(t)` by damped Newton
/// iteration from `(s, t)`.
fn newton_chord(curve: &dyn CurveSource, mut s: f64, mut t: f64) -> Option<(f64, f64)> {
    let closed = curve.is_closed();
    let fix = |x: f64| if closed { wrap_param(x, true, Side::Right) } else { x };
    let resid = |s: f64, t: f64| -> Option<(f64, f64, Local, Local)> {
        if !closed && !(0.0..=1.0).contains(&s) || !closed && !(0.0..=1.0).contains(&t) {
            return None;
        }
        let a = local(curve, s);
        let b = local(curve, t);
        let delta = b.p - a.p;
        Some((delta.dot(&a.d1), delta.dot(&b.d1), a, b))
    };
    for _ in 0..80 {
        let (c1, c2, a, b) = resid(s, t)?;
        let delta = b.p - a.p;
        let scale = delta.norm() * a.d1.norm().max(b.d1.norm());
        if c1.abs().max(c2.abs()) <= 1e-13 * scale.max(1e-300) {
            return Some((s, t));
        }
        let j11 = -a.d1.norm_squared() + delta.dot(&a.d2);
        let j12 = a.d1.dot(&b.d1);
        let j21 = -a.d1.dot(&b.d1);
        let j22 = b.d1.norm_squared() + delta.dot(&b.d2);
        let det = j11 * j22 - j12 * j21;
        if det.abs() < 1e-300 {
            return None;
        }
        let mut ds = -(j22 * c1 - j12 * c2) / det;
        let mut dt = -(-j21 * c1 + j11 * c2) / det;
        let len = ds.hypot(dt);
        if len > 0.05 {
            ds *= 0.05 / len;
            dt *= 0.05 / len;
        }
        let norm0 = c1.hypot(c2);
        let mut step = 1.0;
        loop {
            let (ns, nt) = (fix(s + step * ds), fix(t + step * dt));
            if let Some((e1, e2, _, _)) = resid(ns, nt) {
                if e1.hypot(e2) < norm0 {
                    s = ns;
                    t = nt;
                    break;
                }
            }
            step *= 0.5;
            if step < 1e-8 {
                // No further decrease in floating point: accept if close.
                let close = c1.abs().max(c2.abs()) <= 1e-9 * scale;
                return close.then_some((s, t));
            }
        }
    }
    None
}

/// Shortest doubly-critical chord with parameter separation at least
/// `band` (modular on closed curves), or `None` when there is none.
///
/// A grid scan of the normalized residual
/// `((Δ·T(s))² + (Δ·T(t))²) / |Δ|²` seeds Newton refinement at each of its
/// grid-local minima.
pub fn shortest_critical_chord(curve: &dyn CurveSource, grid: usize, band: f64) -> Result<Option<Chord>> {
    if grid < 16 {
        return Err(Error::InvalidArgument(format!("separation grid must be at least 16, got {grid}")));
    }
    if !(band > 0.0 && band < 0.5) {
        return Err(Error::InvalidArgument(format!("band must be in (0, 0.5), got {band}")));
    }
    let closed = curve.is_closed();
    let n = if closed { grid } else { grid + 1 };
    let ts: Vec<f64> = (0..n).map(|k| k as f64 / grid as f64).collect();
    let pts: Vec<Vec3> = ts.iter().map(|&t| curve.position(t)).collect();
    let tans: Vec<Vec3> = ts
        .iter()
        .map(|&t| {
            let d = derivative(curve, t, 1, crate::curve::default_side(t));
            if d.norm() < TANGENT_EPS {
                Err(Error::DegenerateTangent { t })
            } else {
                Ok(d.normalize())
            }
        })
        .collect::<Result<_>>()?;
    let valid = |i: usize, j: usize| i != j && separation(ts[i], ts[j], closed) >= band;
    let resid: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    if !valid(i, j) {
                        return f64::NAN;
                    }
                    let d = pts[j] - pts[i];
                    let l2 = d.norm_squared();
                    if l2 == 0.0 {
                        return 0.0;
                    }
                    (d.dot(&tans[i]).powi(2) + d.dot(&tans[j]).powi(2)) / l2
                })
                .collect()
        })
        .collect();
    let closest = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .filter(|&j| valid(i, j))
                .map(|j| (pts[j] - pts[i]).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    if closest < SIMPLICITY_TOL {
        return Err(Error::NotSimple { distance: closest });
    }

    let step = |i: usize, d: isize| -> Option<usize> {
        let k = i as isize + d;
        if closed {
            Some(k.rem_euclid(n as isize) as usize)
        } else if k >= 0 && (k as usize) < n {
            Some(k as usize)
        } else {
            None
        }
    };
    let mut seeds = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = resid[i][j];
            if !(v < 0.5) {
                continue;
            }
            let is_min = (-1..=1).all(|di| {
                (-1..=1).all(|dj| match (step(i, di), step(j, dj)) {
                    (Some(a), Some(b)) => {
                        let w = resid[a][b];
                        w.is_nan() || w >= v
                    }
                    _ => true,
                })
            });
            if is_min {
                seeds.push((ts[i], ts[j]));
            }
        }
    }
    let found: Vec<Chord> = seeds
        .par_iter()
        .filter_map(|&(s, t)| {
            let (s, t) = newton_chord(curve, s, t)?;
            if separation(s, t, closed) < 0.5 * band {
                return None;
            }
            let (s, t) = if s <= t { (s, t) } else { (t, s) };
            Some(Chord {
                distance: (curve.position(t) - curve.position(s)).norm(),
                s,
                t,
            })
        })
        .collect();
    let best = found.into_iter().min_by(|a, b| {
        a.distance
            .total_cmp(&b.distance)
            .then(a.s.total_cmp(&b.s))
            .then(a.t.total_cmp(&b.t))
    });
    if let Some(c) = best {
        if c.distance < SIMPLICITY_TOL {
            return Err(Error::NotSimple { distance: c.distance });
        }
    }
    Ok(best)
}

pub fn min_separation_distance(curve: &dyn CurveSource, grid: usize, band: f64) -> Result<f64> {
    Ok(shortest_critical_chord(curve, grid, band)?.map_or(f64::INFINITY, |c| c.distance))
}

/// End radius of an open curve (see the module docs); infinite for closed
/// curves.
pub fn end_radius(curve: &dyn CurveSource, grid: usize) -> Result<f64> {
    if curve.is_closed() {
        return Ok(f64::INFINITY);
    }
    if grid < 64 {
        return Err(Error::InvalidArgument(format!("end grid must be at least 64, got {grid}")));
    }
    let from_end = |origin: f64, dir: f64| {
        let e = curve.position(origin);
        let at = |k: f64| origin + dir * k / grid as f64;
        let g: Vec<f64> = (0..=grid).map(|k| (curve.position(at(k as f64)) - e).norm()).collect();
        let mut running = 0.0_f64;
        let mut best = g.iter().copied().fold(0.0, f64::max);
        for k in 1..=grid {
            running = running.max(g[k - 1]);
            if g[k] >= running * (1.0 - 1e-12) {
                continue;
            }
            best = best.min(g[k]);
            if k < grid && g[k] <= g[k - 1] && g[k] <= g[k + 1] {
                let f = |x: f64| (curve.position(at(x)) - e).norm();
                let (_, v) = golden_min(&f, (k - 1) as f64, (k + 1) as f64);
                best = best.min(v);
            }
        }
        best
    };
    Ok(from_end(0.0, 1.0).min(from_end(1.0, -1.0)))
}

pub fn tube_radius(curve: &dyn CurveSource, safety: f64) -> Result<TubeRadius> {
    tube_radius_with(curve, safety, &TubeOptions::default())
}

pub fn tube_radius_with(curve: &dyn CurveSource, safety: f64, opts: &TubeOptions) -> Result<TubeRadius> {
    if !(safety > 0.0 && safety < 1.0) {
        return Err(Error::InvalidArgument(format!("safety must be in (0, 1), got {safety}")));
    }
    let kappa_max = max_curvature(curve, opts.curvature_grid)?;
    let d_min = min_separation_distance(curve, opts.separation_grid, opts.band)?;
    let r_end = end_radius(curve, opts.end_grid)?;
    let out = TubeRadius {
        r: 0.0,
        kappa_max,
        d_min,
        r_end,
        safety,
    };
    let bound = out.bound();
    if !(bound.is_finite() && bound > 0.0) {
        return Err(Error::InvalidArgument(format!("tube radius bound is {bound}")));
    }
    Ok(TubeRadius {
        r: safety * bound,
        ..out
    })
}

/// The disk of radius `radius` centred on the curve, spanning its normal
/// plane.
#[derive(Clone, Copy, Debug)]
pub struct NormalDisk {
    pub center: Vec3,
    pub normal: Vec3,
    pub radius: f64,
}

impl NormalDisk {
    pub fn at(curve: &dyn CurveSource, t: f64, radius: f64) -> Result<Self> {
        let d = derivative(curve, t, 1, crate::curve::default_side(t));
        if d.norm() < TANGENT_EPS {
            return Err(Error::DegenerateTangent { t });
        }
        Ok(NormalDisk {
            center: curve.position(t),
            normal: d.normalize(),
            radius,
        })
    }

    /// Exact test for a common point of two closed disks.
    pub fn intersects(&self, other: &NormalDisk) -> bool {
        let dir = self.normal.cross(&other.normal);
        let dn = dir.norm();
        if dn < 1e-12 {
            let gap = (other.center - self.center).dot(&self.normal).abs();
            return gap <= 1e-12 && (other.center - self.center).norm() <= self.radius + other.radius;
        }
        let h1 = self.normal.dot(&self.center);
        let h2 = other.normal.dot(&other.center);
        let p0 = (other.normal * h1 - self.normal * h2).cross(&dir) / (dn * dn);
        let u = dir / dn;
        let chord = |d: &NormalDisk| -> Option<(f64, f64)> {
            let w = p0 - d.center;
            let b = u.dot(&w);
            let disc = b * b - (w.norm_squared() - d.radius * d.radius);
            (disc >= 0.0).then(|| (-b - disc.sqrt(), -b + disc.sqrt()))
        };
        match (chord(self), chord(other)) {
            (Some((a0, a1)), Some((b0, b1))) => a0.max(b0) <= a1.min(b1),
            _ => false,
        }
    }
}
