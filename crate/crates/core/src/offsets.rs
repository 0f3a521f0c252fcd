//! Frenet frames and normal offset curves `Ω(t) = C(t) + d·N(t)`.

use serde::Serialize;

use crate::curvature::curvature_with_side;
use crate::curve::{default_side, derivative, CurveSource, SharedCurve, Side};
use crate::jet::CurveJet;
use crate::{Error, Result, Vec3};

/// Curvature below this leaves the principal normal undefined.
pub const MIN_FRAME_CURVATURE: f64 = 1e-9;
/// Tolerance of the offset precondition scan.
pub const OFFSET_GATE_TOL: f64 = 1e-6;
pub const OFFSET_GATE_POINTS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrenetData {
    pub tangent: Vec3,
    pub normal: Vec3,
    pub binormal: Vec3,
    pub kappa: f64,
    pub tau: f64,
    pub speed: f64,
}

pub fn frenet_frame(curve: &dyn CurveSource, t: f64) -> Result<FrenetData> {
    frenet_frame_on(curve, t, default_side(t))
}

pub fn frenet_frame_on(curve: &dyn CurveSource, t: f64, side: Side) -> Result<FrenetData> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::ParameterOutOfRange(t));
    }
    let d1 = derivative(curve, t, 1, side);
    let d2 = derivative(curve, t, 2, side);
    let speed = d1.norm();
    if speed < crate::curve::TANGENT_EPS {
        return Err(Error::DegenerateTangent { t });
    }
    let cross = d1.cross(&d2);
    let kappa = cross.norm() / speed.powi(3);
    if kappa <= MIN_FRAME_CURVATURE {
        return Err(Error::VanishingCurvature { t });
    }
    let d3 = derivative(curve, t, 3, side);
    let tangent = d1 / speed;
    let binormal = cross.normalize();
    Ok(FrenetData {
        tangent,
        normal: binormal.cross(&tangent),
        binormal,
        kappa,
        tau: cross.dot(&d3) / cross.norm_squared(),
        speed,
    })
}

/// Jet of the unit principal normal, `N ∝ C''|C'|² − C'(C'·C'')`.
fn normal_jet(j: &CurveJet) -> Option<CurveJet> {
    if j.order()? < 2 {
        return None;
    }
    let d1 = j.differentiate();
    let d2 = d1.differentiate();
    let w = d2.scale(d1.dot(&d1)) - d1.scale(d1.dot(&d2));
    let len = w.dot(&w).sqrt();
    Some(CurveJet::from_components(w.0.map(|c| c / len)))
}

/// `Ω(t) = C(t) + distance · N(t)`.
#[derive(Clone, Debug)]
pub struct OffsetCurve {
    base: SharedCurve,
    distance: f64,
}

impl OffsetCurve {
    pub fn base(&self) -> &SharedCurve {
        &self.base
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    fn normal(&self, t: f64, side: Side) -> Vec3 {
        match normal_jet(&self.base.jet(t, side)) {
            Some(n) => n.point(),
            None => frenet_frame_on(self.base.as_ref(), t, side)
                .map(|f| f.normal)
                .unwrap_or_else(|_| Vec3::zeros()),
        }
    }
}

impl CurveSource for OffsetCurve {
    fn position(&self, t: f64) -> Vec3 {
        let side = default_side(t);
        self.base.position(t) + self.normal(t, side) * self.distance
    }

    fn jet(&self, t: f64, side: Side) -> CurveJet {
        let j = self.base.jet(t, side);
        match normal_jet(&j) {
            Some(n) => {
                let order = n.order().unwrap_or(0);
                j.truncate(order) + n.scale_f64(self.distance)
            }
            None => CurveJet::value_only(self.position(t)),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.base.breakpoints()
    }

    fn is_closed(&self) -> bool {
        self.base.is_closed()
    }

    fn label(&self) -> String {
        format!("offset(d={}):{}", self.distance, self.base.label())
    }
}

/// Checks `κ` on an evenly spaced scan: it must stay away from 0 (no
/// principal normal) and from `1/gate_distance` (the offset would be
/// singular).
fn gate(curve: &dyn CurveSource, gate_distance: f64) -> Result<()> {
    let n = OFFSET_GATE_POINTS;
    for k in 0..n {
        let t = k as f64 / (n - 1) as f64;
        let kappa = curvature_with_side(curve, t, default_side(t))?;
        if kappa < OFFSET_GATE_TOL {
            return Err(Error::VanishingCurvature { t });
        }
        if (kappa * gate_distance - 1.0).abs() < OFFSET_GATE_TOL {
            return Err(Error::OffsetCurvature {
                t,
                kappa,
                forbidden: 1.0 / gate_distance,
            });
        }
    }
    Ok(())
}

/// The unit-normal offset `Ω = C + N`.
pub fn offset_curve(curve: &SharedCurve) -> Result<OffsetCurve> {
    offset_curve_at(curve, 1.0)
}

/// `C + distance · N`, gated on `κ·distance ≠ 1`.
pub fn offset_curve_at(curve: &SharedCurve, distance: f64) -> Result<OffsetCurve> {
    if !distance.is_finite() {
        return Err(Error::InvalidArgument(format!("offset distance must be finite, got {distance}")));
    }
    if curve.is_piecewise_linear() {
        return Err(Error::PiecewiseLinear);
    }
    gate(curve.as_ref(), if distance == 0.0 { 1.0 } else { distance })?;
    Ok(OffsetCurve {
        base: curve.clone(),
        distance,
    })
}

/// `Ω_i = C + ((i − 1)/i)·N`, which tends to the unit offset as `i` grows.
/// The curve must satisfy the unit-offset precondition.
pub fn offset_approximant(curve: &SharedCurve, i: u32) -> Result<OffsetCurve> {
    if i == 0 {
        return Err(Error::InvalidArgument("approximant index starts at 1".into()));
    }
    if curve.is_piecewise_linear() {
        return Err(Error::PiecewiseLinear);
    }
    gate(curve.as_ref(), 1.0)?;
    Ok(OffsetCurve {
        base: curve.clone(),
        distance: (i - 1) as f64 / i as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::curvature_at;
    use crate::curve::{Circle, Helix, TorusKnot};
    use std::f64::consts::TAU;
    use std::sync::Arc;

    fn helix() -> SharedCurve {
        Arc::new(Helix::new(2.0, 1.0, 1.0).unwrap())
    }

    #[test]
    fn helix_frame() {
        let h = helix();
        for k in 0..=20 {
            let t = k as f64 / 20.0;
            let f = frenet_frame(h.as_ref(), t).unwrap();
            let th = TAU * t;
            assert!((f.kappa - 0.4).abs() < 1e-12);
            assert!((f.normal - Vec3::new(-th.cos(), -th.sin(), 0.0)).norm() < 1e-12);
            // torsion b / (a² + b²)
            assert!((f.tau - 0.2).abs() < 1e-9);
        }
        let c = Circle::new(1.0).unwrap();
        let f = frenet_frame(&c, 0.0).unwrap();
        assert!((f.normal - Vec3::new(-1.0, 0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn frames_are_orthonormal() {
        let curves: Vec<SharedCurve> = vec![helix(), Arc::new(TorusKnot::new(2, 3, 2.0, 0.5).unwrap())];
        for c in &curves {
            for k in 0..200 {
                let t = (k as f64 * 0.618_033_988_7).fract();
                let f = frenet_frame(c.as_ref(), t).unwrap();
                for v in [f.tangent, f.normal, f.binormal] {
                    assert!((v.norm() - 1.0).abs() < 1e-9);
                }
                assert!(f.tangent.dot(&f.normal).abs() < 1e-9);
                assert!(f.tangent.dot(&f.binormal).abs() < 1e-9);
                assert!(f.normal.dot(&f.binormal).abs() < 1e-9);
                assert!((f.tangent.cross(&f.normal) - f.binormal).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn helix_offset_is_unit_helix() {
        let o = offset_curve(&helix()).unwrap();
        for k in 0..1000 {
            let t = k as f64 / 999.0;
            let th = TAU * t;
            assert!((o.position(t) - Vec3::new(th.cos(), th.sin(), th)).norm() < 1e-9);
            assert!((curvature_at(&o, t).unwrap() - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn circle_offsets() {
        let c: SharedCurve = Arc::new(Circle::new(2.0).unwrap());
        let o = offset_curve(&c).unwrap();
        for k in 0..100 {
            let t = k as f64 / 100.0;
            let p = o.position(t);
            assert!((p.norm() - 1.0).abs() < 1e-12);
            assert!((p.normalize() - c.position(t).normalize()).norm() < 1e-12);
        }
        let unit: SharedCurve = Arc::new(Circle::new(1.0).unwrap());
        assert!(matches!(offset_curve(&unit), Err(Error::OffsetCurvature { .. })));
    }

    #[test]
    fn approximants() {
        let h = helix();
        let first = offset_approximant(&h, 1).unwrap();
        let omega = offset_curve(&h).unwrap();
        for k in 0..1000 {
            let t = k as f64 / 999.0;
            assert!((first.position(t) - h.position(t)).norm() < 1e-12);
        }
        for i in [2u32, 4, 8, 256] {
            let oi = offset_approximant(&h, i).unwrap();
            let sup = (0..1000)
                .map(|k| {
                    let t = k as f64 / 999.0;
                    (oi.position(t) - omega.position(t)).norm()
                })
                .fold(0.0, f64::max);
            assert!((sup - 1.0 / i as f64).abs() < 1e-12);
        }
        assert!(offset_approximant(&h, 0).is_err());
    }
}
