//! Exterior angles and total curvature of PL, C2 and piecewise-C2 curves.
//!
//! For a piecewise-C2 curve the total curvature is the integral of `|κ| ds`
//! over its C2 pieces plus the exterior angles between one-sided tangents at
//! the breakpoints. On closed curves the seam `t = 0 ≡ 1` counts as a
//! breakpoint whenever the two tangents there disagree.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::curve::{corner_candidates, derivative, wrap_param, CurveSource, ParamWindow, Polyline, Side, TANGENT_EPS};
use crate::quadrature::adaptive_simpson;
use crate::{Error, Result, Vec3};

/// Default absolute quadrature tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Parameter resolution of [`advance_by_budget`].
pub const PARAM_TOL: f64 = 1e-10;

/// An angle in radians.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct Angle(f64);

impl Angle {
    pub fn radians(self) -> f64 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TotalCurvature {
    pub value: f64,
    pub smooth_part: f64,
    pub corner_part: f64,
}

impl TotalCurvature {
    fn new(smooth_part: f64, corner_part: f64) -> Self {
        TotalCurvature {
            value: smooth_part + corner_part,
            smooth_part,
            corner_part,
        }
    }
}

/// Angle in `[0, π]` between two vectors joined at their initial points.
pub fn exterior_angle(v1: &Vec3, v2: &Vec3) -> Result<Angle> {
    if !(v1.norm() >= TANGENT_EPS && v2.norm() >= TANGENT_EPS) {
        return Err(Error::ZeroVector);
    }
    Ok(Angle(v1.cross(v2).norm().atan2(v1.dot(v2))))
}

/// Sum of exterior angles of a vertex chain.
pub fn vertex_chain_curvature(vertices: &[Vec3], closed: bool) -> Result<f64> {
    let n = vertices.len();
    if closed && n < 3 {
        return Err(Error::TooFewVertices { needed: 3, got: n });
    }
    let turns: Box<dyn Iterator<Item = usize>> = if closed {
        Box::new(0..n)
    } else {
        Box::new(1..n.saturating_sub(1))
    };
    let mut sum = 0.0;
    for i in turns {
        let prev = vertices[(i + n - 1) % n];
        let next = vertices[(i + 1) % n];
        sum += exterior_angle(&(vertices[i] - prev), &(next - vertices[i]))?.radians();
    }
    Ok(sum)
}

pub fn pl_total_curvature(p: &Polyline) -> Result<TotalCurvature> {
    Ok(TotalCurvature::new(0.0, vertex_chain_curvature(p.vertices(), p.closed())?))
}

fn is_breakpoint(curve: &dyn CurveSource, t: f64) -> bool {
    curve.breakpoints().iter().any(|&b| (b - t).abs() <= 1e-12)
}

/// Curvature `|C' × C''| / |C'|³` at a C2 parameter.
pub fn curvature_at(curve: &dyn CurveSource, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::ParameterOutOfRange(t));
    }
    if is_breakpoint(curve, t) {
        return Err(Error::AtBreakpoint { t });
    }
    let side = crate::curve::default_side(t);
    curvature_with_side(curve, t, side)
}

pub(crate) fn curvature_with_side(curve: &dyn CurveSource, t: f64, side: Side) -> Result<f64> {
    let d1 = derivative(curve, t, 1, side);
    let speed = d1.norm();
    if !(speed >= TANGENT_EPS) {
        return Err(Error::DegenerateTangent { t });
    }
    let d2 = derivative(curve, t, 2, side);
    Ok(d1.cross(&d2).norm() / (speed * speed * speed))
}

/// `κ(t)·|C'(t)|`, the arc-length density of total curvature.
fn curvature_density(curve: &dyn CurveSource, t: f64, side: Side) -> f64 {
    if curve.is_piecewise_linear() {
        return 0.0;
    }
    let d1 = derivative(curve, t, 1, side);
    let d2 = derivative(curve, t, 2, side);
    let s2 = d1.norm_squared();
    if s2 == 0.0 {
        return f64::NAN;
    }
    d1.cross(&d2).norm() / s2
}

/// Integral of `κ ds` over a window free of interior breakpoints, in window
/// coordinates (closed curves wrap).
fn integrate_piece(curve: &dyn CurveSource, a: f64, b: f64, tol: f64) -> Result<f64> {
    let closed = curve.is_closed();
    let f = |x: f64| curvature_density(curve, wrap_param(x, closed, Side::Right), Side::Right);
    let fa = curvature_density(curve, wrap_param(a, closed, Side::Right), Side::Right);
    let fb = curvature_density(curve, wrap_param(b, closed, Side::Left), Side::Left);
    let r = adaptive_simpson(&f, a, b, fa, fb, tol);
    if !r.value.is_finite() {
        return Err(Error::DegenerateTangent { t: a });
    }
    r.into_result()
}

/// Total curvature of a C2 sub-curve.
pub fn smooth_total_curvature(curve: &dyn CurveSource, window: ParamWindow, tol: f64) -> Result<f64> {
    window.validate_for(curve)?;
    let cuts = window.interior_points(&corner_candidates(curve), curve.is_closed());
    if let Some(&t) = cuts.first() {
        return Err(Error::AtBreakpoint { t });
    }
    integrate_piece(curve, window.lo, window.hi, tol)
}

/// Exterior angle between the one-sided tangents at window coordinate `x`.
fn corner_angle(curve: &dyn CurveSource, x: f64) -> Result<f64> {
    let closed = curve.is_closed();
    let tl = wrap_param(x, closed, Side::Left);
    let tr = wrap_param(x, closed, Side::Right);
    let left = derivative(curve, tl, 1, Side::Left);
    let right = derivative(curve, tr, 1, Side::Right);
    exterior_angle(&left, &right)
        .map(Angle::radians)
        .map_err(|_| Error::DegenerateTangent { t: tr })
}

pub fn piecewise_total_curvature(curve: &dyn CurveSource, window: ParamWindow, tol: f64) -> Result<TotalCurvature> {
    window.validate_for(curve)?;
    let closed = curve.is_closed();
    let cuts = window.interior_points(&corner_candidates(curve), closed);
    let mut corner = 0.0;
    for &c in &cuts {
        corner += corner_angle(curve, c)?;
    }
    if closed && window.is_full() {
        corner += corner_angle(curve, window.lo)?;
    }
    let mut knots = Vec::with_capacity(cuts.len() + 2);
    knots.push(window.lo);
    knots.extend_from_slice(&cuts);
    knots.push(window.hi);
    let piece_tol = tol / (knots.len() - 1) as f64;
    let mut smooth = 0.0;
    for w in knots.windows(2) {
        smooth += integrate_piece(curve, w[0], w[1], piece_tol)?;
    }
    Ok(TotalCurvature::new(smooth, corner))
}

/// Total curvature of `C_[0, t]`.
pub fn cumulative_total_curvature(curve: &dyn CurveSource, t: f64, tol: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::ParameterOutOfRange(t));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(piecewise_total_curvature(curve, ParamWindow { lo: 0.0, hi: t }, tol)?.value)
}

/// Result of [`advance_by_budget`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Advance {
    To(f64),
    /// The rest of the curve has total curvature below the budget.
    End,
}

/// Smallest `t ≥ t_start` at which the total curvature of `C_[t_start, t]`
/// reaches `budget`, found by bisection to [`PARAM_TOL`].
///
/// When the budget is crossed by a corner jump, the corner's parameter is
/// returned, so the slice before it stays under budget.
pub fn advance_by_budget(curve: &dyn CurveSource, t_start: f64, budget: f64, tol: f64) -> Result<Advance> {
    if !(budget > 0.0) {
        return Err(Error::InvalidArgument(format!("budget must be positive, got {budget}")));
    }
    if !(0.0..1.0).contains(&t_start) {
        return Err(Error::ParameterOutOfRange(t_start));
    }
    let f = |t: f64| -> Result<f64> {
        if t <= t_start {
            return Ok(0.0);
        }
        Ok(piecewise_total_curvature(curve, ParamWindow { lo: t_start, hi: t }, tol)?.value)
    };
    if f(1.0)? <= budget {
        return Ok(Advance::End);
    }
    let (mut lo, mut hi) = (t_start, 1.0);
    while hi - lo > PARAM_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid)? >= budget {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let corner = corner_candidates(curve)
        .into_iter()
        .find(|&b| b > t_start && b >= lo - PARAM_TOL && b <= hi + PARAM_TOL);
    Ok(Advance::To(corner.unwrap_or(hi)))
}

/// Default budget slice used when partitioning: `0.9 · π/2`.
pub const DEFAULT_PARTITION_BUDGET: f64 = 0.9 * FRAC_PI_2;
