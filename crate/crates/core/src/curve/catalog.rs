//! Analytic catalog curves. Each shape is written once over [`Real`] so the
//! same formula yields positions and exact derivative jets.

use std::f64::consts::TAU;

use crate::curve::{CurveSource, Side};
use crate::jet::{CurveJet, Jet, Real};
use crate::{Error, Result, Vec3};

trait Shape {
    fn shape<R: Real>(&self, t: R) -> [R; 3];
}

macro_rules! analytic_curve {
    ($ty:ty, closed = $closed:expr) => {
        analytic_curve!($ty, closed = $closed, linear = false);
    };
    ($ty:ty, closed = $closed:expr, linear = $linear:expr) => {
        impl CurveSource for $ty {
            fn position(&self, t: f64) -> Vec3 {
                let [x, y, z] = self.shape(t);
                Vec3::new(x, y, z)
            }

            fn jet(&self, t: f64, _side: Side) -> CurveJet {
                CurveJet::from_components(self.shape(Jet::variable(t)))
            }

            fn is_closed(&self) -> bool {
                $closed
            }

            fn is_piecewise_linear(&self) -> bool {
                $linear
            }

            fn label(&self) -> String {
                self.describe()
            }
        }
    };
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")))
    }
}

/// Circle of radius `r` in the xy-plane, `(r cos 2πt, r sin 2πt, 0)`.
#[derive(Clone, Debug)]
pub struct Circle {
    pub radius: f64,
}

impl Circle {
    pub fn new(radius: f64) -> Result<Self> {
        Ok(Circle {
            radius: positive("radius", radius)?,
        })
    }

    fn describe(&self) -> String {
        format!("circle:r={}", self.radius)
    }
}

impl Shape for Circle {
    fn shape<R: Real>(&self, t: R) -> [R; 3] {
        let th = t * TAU;
        [th.cos() * self.radius, th.sin() * self.radius, th * 0.0]
    }
}

analytic_curve!(Circle, closed = true);

/// Circular helix `(a cos θ, a sin θ, b θ)` with `θ = 2π·turns·t`.
///
/// `a = 2, b = 1, turns = 1` is the curve `(2 cos s, 2 sin s, s)` for
/// `s ∈ [0, 2π]`, with constant curvature `a / (a² + b²) = 2/5`.
#[derive(Clone, Debug)]
pub struct Helix {
    pub radius: f64,
    pub pitch: f64,
    pub turns: f64,
}

impl Helix {
    pub fn new(radius: f64, pitch: f64, turns: f64) -> Result<Self> {
        if !pitch.is_finite() {
            return Err(Error::InvalidArgument(format!("pitch must be finite, got {pitch}")));
        }
        Ok(Helix {
            radius: positive("radius", radius)?,
            pitch,
            turns: positive("turns", turns)?,
        })
    }

    pub fn curvature(&self) -> f64 {
        self.radius / (self.radius * self.radius + self.pitch * self.pitch)
    }

    fn describe(&self) -> String {
        format!("helix:a={},b={},turns={}", self.radius, self.pitch, self.turns)
    }
}

impl Shape for Helix {
    fn shape<R: Real>(&self, t: R) -> [R; 3] {
        let th = t * (TAU * self.turns);
        [th.cos() * self.radius, th.sin() * self.radius, th * self.pitch]
    }
}

analytic_curve!(Helix, closed = false);

/// `(p, q)` torus knot on a torus with major radius `R` and tube radius `ρ`:
/// `((R + ρ cos qθ) cos pθ, (R + ρ cos qθ) sin pθ, ρ sin qθ)`, `θ = 2πt`.
/// `(2, 3)` is the trefoil.
#[derive(Clone, Debug)]
pub struct TorusKnot {
    pub p: u32,
    pub q: u32,
    pub major: f64,
    pub minor: f64,
}

impl TorusKnot {
    pub fn new(p: u32, q: u32, major: f64, minor: f64) -> Result<Self> {
        if p == 0 || q == 0 || gcd(p, q) != 1 {
            return Err(Error::InvalidArgument(format!(
                "torus knot needs coprime positive p, q; got ({p}, {q})"
            )));
        }
        let major = positive("R", major)?;
        let minor = positive("rho", minor)?;
        if minor >= major {
            return Err(Error::InvalidArgument(format!(
                "rho ({minor}) must be smaller than R ({major})"
            )));
        }
        Ok(TorusKnot { p, q, major, minor })
    }

    fn describe(&self) -> String {
        format!(
            "torus_knot:p={},q={},R={},rho={}",
            self.p, self.q, self.major, self.minor
        )
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Shape for TorusKnot {
    fn shape<R: Real>(&self, t: R) -> [R; 3] {
        let th = t * TAU;
        let (p, q) = (self.p as f64, self.q as f64);
        let ring = (th * q).cos() * self.minor + self.major;
        [
            ring * (th * p).cos(),
            ring * (th * p).sin(),
            (th * q).sin() * self.minor,
        ]
    }
}

analytic_curve!(TorusKnot, closed = true);

/// Straight segment from `a` to `b`.
#[derive(Clone, Debug)]
pub struct Segment {
    pub a: Vec3,
    pub b: Vec3,
}

impl Segment {
    pub fn new(a: Vec3, b: Vec3) -> Result<Self> {
        if (b - a).norm() == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Segment { a, b })
    }

    /// Segment of the given length along the x-axis, starting at the origin.
    pub fn along_x(length: f64) -> Result<Self> {
        Segment::new(Vec3::zeros(), Vec3::new(positive("length", length)?, 0.0, 0.0))
    }

    fn describe(&self) -> String {
        format!("segment:length={}", (self.b - self.a).norm())
    }
}

impl Shape for Segment {
    fn shape<R: Real>(&self, t: R) -> [R; 3] {
        let d = self.b - self.a;
        [t * d.x + self.a.x, t * d.y + self.a.y, t * d.z + self.a.z]
    }
}

analytic_curve!(Segment, closed = false, linear = true);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::derivative;

    #[test]
    fn closed_catalog_curves_close() {
        let curves: Vec<Box<dyn CurveSource>> = vec![
            Box::new(Circle::new(3.0).unwrap()),
            Box::new(TorusKnot::new(2, 3, 2.0, 0.5).unwrap()),
            Box::new(TorusKnot::new(3, 5, 4.0, 1.0).unwrap()),
        ];
        for c in curves {
            assert!(c.is_closed());
            assert!((c.position(0.0) - c.position(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn helix_jet_matches_hand_derivatives() {
        let h = Helix::new(2.0, 1.0, 1.0).unwrap();
        let t = 0.3;
        let th = TAU * t;
        let d1 = derivative(&h, t, 1, Side::Right);
        let want = Vec3::new(-2.0 * th.sin(), 2.0 * th.cos(), 1.0) * TAU;
        assert!((d1 - want).norm() < 1e-12);
        let d3 = derivative(&h, t, 3, Side::Right);
        let want3 = Vec3::new(2.0 * th.sin(), -2.0 * th.cos(), 0.0) * TAU.powi(3);
        assert!((d3 - want3).norm() < 1e-9);
    }

    #[test]
    fn constructors_reject_bad_parameters() {
        assert!(Circle::new(0.0).is_err());
        assert!(Helix::new(1.0, 1.0, -1.0).is_err());
        assert!(TorusKnot::new(2, 4, 2.0, 0.5).is_err());
        assert!(TorusKnot::new(2, 3, 1.0, 1.5).is_err());
        assert!(Segment::new(Vec3::zeros(), Vec3::zeros()).is_err());
    }
}
