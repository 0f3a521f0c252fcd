//! Parametric curves on `[0, 1]`: the [`CurveSource`] trait, parameter
//! windows, restriction to sub-curves, and one-sided tangents.

mod catalog;
mod piecewise;
mod polyline;
mod sampled;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::jet::CurveJet;
use crate::{Error, Result, Vec3};

pub use catalog::{Circle, Helix, Segment, TorusKnot};
pub use piecewise::PiecewiseCurve;
pub use polyline::Polyline;
pub use sampled::FnCurve;

/// Norm below which a tangent counts as vanished.
pub const TANGENT_EPS: f64 = 1e-12;

/// Which adjoining piece to use at a breakpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A parametric space curve on `[0, 1]`.
///
/// Implementations must be continuous, and regular at every parameter that
/// is not listed in [`breakpoints`](CurveSource::breakpoints). Closed curves
/// satisfy `position(0) == position(1)`.
pub trait CurveSource: Send + Sync {
    fn position(&self, t: f64) -> Vec3;

    /// Taylor jet at `t` taken from the C2 piece on `side` of `t`. Jets may
    /// carry fewer orders than requested; [`derivative`] falls back to
    /// finite differences for the rest.
    fn jet(&self, t: f64, side: Side) -> CurveJet;

    /// Strictly increasing parameters in `(0, 1)` where the curve is not C2.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    fn is_closed(&self) -> bool;

    /// True when every piece is a straight segment (curvature identically 0).
    fn is_piecewise_linear(&self) -> bool {
        false
    }

    fn label(&self) -> String;
}

pub type SharedCurve = Arc<dyn CurveSource>;

impl fmt::Debug for dyn CurveSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CurveSource({})", self.label())
    }
}

/// A parameter interval `[lo, hi]`.
///
/// On open curves windows live inside `[0, 1]`. On closed curves they are
/// read modulo 1, so `[-0.1, 0.2]` is the arc through the seam.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamWindow {
    pub lo: f64,
    pub hi: f64,
}

impl ParamWindow {
    pub const FULL: ParamWindow = ParamWindow { lo: 0.0, hi: 1.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&lo) || !(hi > lo && hi <= 1.0) {
            return Err(Error::InvalidWindow { lo, hi });
        }
        Ok(ParamWindow { lo, hi })
    }

    /// A window read modulo 1; only meaningful on closed curves.
    pub fn modular(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo && hi - lo <= 1.0) {
            return Err(Error::InvalidWindow { lo, hi });
        }
        Ok(ParamWindow { lo, hi })
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn is_full(&self) -> bool {
        self.len() >= 1.0
    }

    fn is_standard(&self) -> bool {
        self.lo >= 0.0 && self.hi <= 1.0
    }

    /// Checks the window against a curve: non-standard windows need a
    /// closed curve.
    pub fn validate_for(&self, curve: &dyn CurveSource) -> Result<()> {
        if self.is_standard() || curve.is_closed() {
            Ok(())
        } else {
            Err(Error::InvalidWindow {
                lo: self.lo,
                hi: self.hi,
            })
        }
    }

    /// Whether `t` (a curve parameter in `[0, 1]`) lies in the window,
    /// allowing `slack` on both ends. Closed curves test all representatives.
    pub fn contains(&self, t: f64, closed: bool, slack: f64) -> bool {
        let inside = |x: f64| x >= self.lo - slack && x <= self.hi + slack;
        if closed {
            let base = t - t.floor();
            (-2..=2).any(|k| inside(base + k as f64))
        } else {
            inside(t)
        }
    }

    /// Representatives of the curve parameters `ts` lying strictly inside
    /// the window, in window coordinates, sorted.
    pub fn interior_points(&self, ts: &[f64], closed: bool) -> Vec<f64> {
        let mut out = Vec::new();
        for &t in ts {
            if closed {
                let k_lo = (self.lo - t).floor() as i64;
                let k_hi = (self.hi - t).ceil() as i64;
                for k in k_lo..=k_hi {
                    let x = t + k as f64;
                    if x > self.lo && x < self.hi {
                        out.push(x);
                    }
                }
            } else if t > self.lo && t < self.hi {
                out.push(t);
            }
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

/// Maps a window coordinate to a curve parameter in `[0, 1]`. At an exact
/// multiple of the period a left-sided query lands on 1, a right-sided on 0.
pub fn wrap_param(t: f64, closed: bool, side: Side) -> f64 {
    if !closed {
        return t.clamp(0.0, 1.0);
    }
    let w = t - t.floor();
    if w == 0.0 && side == Side::Left {
        1.0
    } else {
        w
    }
}

/// Curve parameters where the curve may fail to be C2, including the seam
/// of a closed curve.
pub fn corner_candidates(curve: &dyn CurveSource) -> Vec<f64> {
    let mut b = curve.breakpoints();
    if curve.is_closed() {
        b.insert(0, 0.0);
    }
    b
}

pub fn eval_point(curve: &dyn CurveSource, t: f64) -> Result<Vec3> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::ParameterOutOfRange(t));
    }
    Ok(curve.position(t))
}

/// `k`-th derivative at `t`. Uses the analytic jet when it carries order
/// `k`, otherwise finite differences of the highest exact derivative:
/// central where the C2 piece allows it, one-sided towards `side` at
/// breakpoints and ends.
pub fn derivative(curve: &dyn CurveSource, t: f64, k: usize, side: Side) -> Vec3 {
    if k == 0 {
        return curve.position(t);
    }
    let jet = curve.jet(t, side);
    if let Some(d) = jet.derivative(k) {
        return d;
    }
    let known = jet.order().unwrap_or(0).min(k - 1);
    let extra = k - known;
    let (lo, hi) = piece_bounds(curve, t, side);
    if extra > 3 {
        let f = |s: f64| derivative(curve, s, k - 1, side);
        return finite_difference(&f, t, 1, side, lo, hi);
    }
    let f = |s: f64| {
        if known == 0 {
            curve.position(s)
        } else {
            curve
                .jet(s, side)
                .derivative(known)
                .unwrap_or_else(|| derivative(curve, s, known, side))
        }
    };
    finite_difference(&f, t, extra, side, lo, hi)
}

pub fn deriv1(curve: &dyn CurveSource, t: f64) -> Vec3 {
    derivative(curve, t, 1, default_side(t))
}

pub fn deriv2(curve: &dyn CurveSource, t: f64) -> Vec3 {
    derivative(curve, t, 2, default_side(t))
}

/// Right-sided everywhere except at `t = 1`.
pub fn default_side(t: f64) -> Side {
    if t >= 1.0 {
        Side::Left
    } else {
        Side::Right
    }
}

/// The C2 piece containing `t` on the given side.
fn piece_bounds(curve: &dyn CurveSource, t: f64, side: Side) -> (f64, f64) {
    let mut lo = 0.0;
    let mut hi = 1.0;
    for b in curve.breakpoints() {
        let left_of = b < t || (b == t && side == Side::Right);
        if left_of {
            lo = f64::max(lo, b);
        } else {
            hi = f64::min(hi, b);
        }
    }
    (lo, hi)
}

const FD_STEPS: [f64; 3] = [1e-6, 1e-4, 1e-3];

fn finite_difference(
    f: &dyn Fn(f64) -> Vec3,
    t: f64,
    order: usize,
    side: Side,
    lo: f64,
    hi: f64,
) -> Vec3 {
    let h = FD_STEPS[order - 1];
    let reach = 2.0 * h * order as f64;
    let central = t - reach >= lo && t + reach <= hi;
    if central {
        return match order {
            1 => (f(t + h) - f(t - h)) / (2.0 * h),
            2 => (f(t + h) - f(t) * 2.0 + f(t - h)) / (h * h),
            _ => (f(t + 2.0 * h) - f(t + h) * 2.0 + f(t - h) * 2.0 - f(t - 2.0 * h)) / (2.0 * h * h * h),
        };
    }
    let forward = match side {
        Side::Right => t + reach <= hi || t - reach < lo,
        Side::Left => t - reach < lo,
    };
    let s = if forward { 1.0 } else { -1.0 };
    let g = |i: f64| f(t + s * i * h);
    match order {
        1 => (g(0.0) * -3.0 + g(1.0) * 4.0 - g(2.0)) * (s / (2.0 * h)),
        2 => (g(0.0) * 2.0 - g(1.0) * 5.0 + g(2.0) * 4.0 - g(3.0)) / (h * h),
        _ => {
            (g(0.0) * -5.0 + g(1.0) * 18.0 - g(2.0) * 24.0 + g(3.0) * 14.0 - g(4.0) * 3.0)
                * (s / (2.0 * h * h * h))
        }
    }
}

/// One-sided tangents `(C'(t0-), C'(t0+))`. On closed curves `t0 = 0` and
/// `t0 = 1` both denote the seam.
pub fn one_sided_tangents(curve: &dyn CurveSource, t0: f64) -> Result<(Vec3, Vec3)> {
    let at_seam = t0 <= 0.0 || t0 >= 1.0;
    if !(0.0..=1.0).contains(&t0) || (at_seam && !curve.is_closed()) {
        return Err(Error::ParameterOutOfRange(t0));
    }
    let (left, right) = if at_seam {
        (
            derivative(curve, 1.0, 1, Side::Left),
            derivative(curve, 0.0, 1, Side::Right),
        )
    } else {
        (
            derivative(curve, t0, 1, Side::Left),
            derivative(curve, t0, 1, Side::Right),
        )
    };
    if !(left.norm() >= TANGENT_EPS && right.norm() >= TANGENT_EPS) {
        return Err(Error::DegenerateTangent { t: t0 });
    }
    Ok((left, right))
}

/// The sub-curve over a window, reparametrized to `[0, 1]`.
#[derive(Clone)]
pub struct Restricted {
    base: SharedCurve,
    window: ParamWindow,
    breaks: Vec<f64>,
    closed: bool,
}

impl Restricted {
    pub fn window(&self) -> ParamWindow {
        self.window
    }

    fn map(&self, u: f64, side: Side) -> (f64, Side) {
        let t = self.window.lo + u * self.window.len();
        let side = if u <= 0.0 {
            Side::Right
        } else if u >= 1.0 {
            Side::Left
        } else {
            side
        };
        (wrap_param(t, self.base.is_closed(), side), side)
    }
}

pub fn restrict(curve: &SharedCurve, window: ParamWindow) -> Result<Restricted> {
    window.validate_for(curve.as_ref())?;
    let closed = curve.is_closed() && window.is_full();
    let candidates = if curve.is_closed() && !closed {
        corner_candidates(curve.as_ref())
    } else {
        curve.breakpoints()
    };
    let breaks = window
        .interior_points(&candidates, curve.is_closed())
        .into_iter()
        .map(|t| (t - window.lo) / window.len())
        .collect();
    Ok(Restricted {
        base: curve.clone(),
        window,
        breaks,
        closed,
    })
}

impl CurveSource for Restricted {
    fn position(&self, u: f64) -> Vec3 {
        let (t, _) = self.map(u, Side::Right);
        self.base.position(t)
    }

    fn jet(&self, u: f64, side: Side) -> CurveJet {
        let (t, side) = self.map(u, side);
        self.base.jet(t, side).rescale(self.window.len())
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breaks.clone()
    }

    fn is_closed(&self) -> bool {
        self.closed
    }

    fn is_piecewise_linear(&self) -> bool {
        self.base.is_piecewise_linear()
    }

    fn label(&self) -> String {
        format!("{}[{},{}]", self.base.label(), self.window.lo, self.window.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn angle(a: &Vec3, b: &Vec3) -> f64 {
        a.cross(b).norm().atan2(a.dot(b))
    }

    fn circle() -> SharedCurve {
        Arc::new(Circle::new(1.0).unwrap())
    }

    #[test]
    fn eval_point_anchors() {
        let c = circle();
        assert!((eval_point(c.as_ref(), 0.0).unwrap() - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-15);
        let h = Helix::new(2.0, 1.0, 1.0).unwrap();
        let p = eval_point(&h, 0.25).unwrap();
        assert!((p - Vec3::new(0.0, 2.0, PI / 2.0)).norm() < 1e-12);
        assert!((c.position(1.0) - c.position(0.0)).norm() < 1e-12);
        assert!(matches!(eval_point(&h, 1.5), Err(Error::ParameterOutOfRange(_))));
        assert!(matches!(eval_point(&h, -0.1), Err(Error::ParameterOutOfRange(_))));
    }

    #[test]
    fn tangents_agree_at_smooth_points() {
        let h = Helix::new(2.0, 1.0, 1.0).unwrap();
        let (a, b) = one_sided_tangents(&h, 0.37).unwrap();
        assert!(angle(&a, &b) < 1e-9);
    }

    #[test]
    fn tangents_at_right_angle_corner() {
        let o = Vec3::zeros();
        let a = Arc::new(Segment::new(Vec3::new(-1.0, 0.0, 0.0), o).unwrap()) as SharedCurve;
        let b = Arc::new(Segment::new(o, Vec3::new(0.0, 1.0, 0.0)).unwrap()) as SharedCurve;
        let corner = PiecewiseCurve::new(vec![a, b], false).unwrap();
        let (l, r) = one_sided_tangents(&corner, 0.5).unwrap();
        assert!(l.dot(&r).abs() < 1e-12);
        assert!(l.norm() > 0.0 && r.norm() > 0.0);
    }

    #[test]
    fn seam_tangents_on_closed_curve() {
        let c = circle();
        let (l, r) = one_sided_tangents(c.as_ref(), 0.0).unwrap();
        assert!(angle(&l, &r) < 1e-9);
        let h = Helix::new(1.0, 1.0, 1.0).unwrap();
        assert!(one_sided_tangents(&h, 0.0).is_err());
    }

    #[test]
    fn restrict_identity_and_half_circle() {
        let c = circle();
        let full = restrict(&c, ParamWindow::FULL).unwrap();
        assert!(full.is_closed());
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            assert!((full.position(t) - c.position(t)).norm() < 1e-15);
        }
        let half = restrict(&c, ParamWindow::new(0.0, 0.5).unwrap()).unwrap();
        assert!(!half.is_closed());
        assert!((half.position(0.0) + half.position(1.0)).norm() < 1e-12);
    }

    #[test]
    fn restrict_through_seam_marks_seam_breakpoint() {
        let c = circle();
        let w = ParamWindow::modular(-0.25, 0.25).unwrap();
        let r = restrict(&c, w).unwrap();
        assert_eq!(r.breakpoints(), vec![0.5]);
        assert!((r.position(0.0) - Vec3::new(0.0, -1.0, 0.0)).norm() < 1e-12);
        assert!((r.position(0.5) - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-12);
        let h: SharedCurve = Arc::new(Helix::new(1.0, 1.0, 1.0).unwrap());
        assert!(restrict(&h, w).is_err());
    }

    #[test]
    fn restrict_composes() {
        let c: SharedCurve = Arc::new(TorusKnot::new(2, 3, 2.0, 0.5).unwrap());
        let (a, b) = (0.2, 0.7);
        let once: SharedCurve = Arc::new(restrict(&c, ParamWindow::new(a, b).unwrap()).unwrap());
        let twice = restrict(&once, ParamWindow::FULL).unwrap();
        for i in 0..100 {
            let u = i as f64 / 99.0;
            assert!((twice.position(u) - c.position(a + u * (b - a))).norm() < 1e-12);
        }
    }

    #[test]
    fn finite_difference_fallback_tracks_analytic_derivatives() {
        let h = Helix::new(2.0, 1.0, 1.0).unwrap();
        let f = FnCurve::new(move |t| h.position(t), false, vec![]).unwrap();
        let h = Helix::new(2.0, 1.0, 1.0).unwrap();
        for &t in &[0.0, 0.3, 0.999, 1.0] {
            let side = default_side(t);
            for k in 1..=3 {
                let exact = derivative(&h, t, k, side);
                let approx = derivative(&f, t, k, side);
                let rel = (exact - approx).norm() / exact.norm();
                assert!(rel < 1e-3, "t={t} k={k} rel={rel}");
            }
        }
    }

    #[test]
    fn window_validation() {
        assert!(ParamWindow::new(0.5, 0.5).is_err());
        assert!(ParamWindow::new(-0.1, 0.5).is_err());
        assert!(ParamWindow::modular(0.9, 2.0).is_err());
        let w = ParamWindow::modular(-0.1, 0.1).unwrap();
        assert!(w.contains(0.95, true, 0.0));
        assert!(!w.contains(0.5, true, 0.0));
        assert_eq!(w.interior_points(&[0.0, 0.5], true), vec![0.0]);
    }
}
