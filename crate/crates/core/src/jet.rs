//! Truncated Taylor arithmetic.
//!
//! A [`Jet`] carries the Taylor coefficients `f(t0), f'(t0), f''(t0)/2!, ...`
//! of a scalar function around a point. Catalog curves are written once,
//! generically over [`Real`], and evaluated either on plain `f64` (positions)
//! or on jets (exact derivatives up to [`JET_ORDER`]).

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::Vec3;

/// Highest derivative order a fresh jet carries.
pub const JET_ORDER: usize = 6;
const LEN: usize = JET_ORDER + 1;

/// Scalar field the catalog shapes are generic over.
pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + Add<f64, Output = Self>
{
    fn sin(self) -> Self;
    fn cos(self) -> Self;
}

impl Real for f64 {
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    c: [f64; LEN],
    /// Number of leading coefficients that are meaningful.
    valid: usize,
}

impl Jet {
    pub fn constant(x: f64) -> Self {
        let mut c = [0.0; LEN];
        c[0] = x;
        Jet { c, valid: LEN }
    }

    /// The independent variable, expanded at `t`.
    pub fn variable(t: f64) -> Self {
        let mut c = [0.0; LEN];
        c[0] = t;
        c[1] = 1.0;
        Jet { c, valid: LEN }
    }

    /// A jet that only knows its value.
    pub fn value_only(x: f64) -> Self {
        let mut j = Jet::constant(x);
        j.valid = 1;
        j
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Highest derivative order this jet carries, or `None` when even the
    /// value is unknown.
    pub fn order(&self) -> Option<usize> {
        self.valid.checked_sub(1)
    }

    /// The `k`-th derivative, if known.
    pub fn derivative(&self, k: usize) -> Option<f64> {
        (k < self.valid).then(|| self.c[k] * factorial(k))
    }

    /// Jet of the derivative function.
    pub fn differentiate(&self) -> Jet {
        let mut c = [0.0; LEN];
        for k in 0..LEN - 1 {
            c[k] = (k + 1) as f64 * self.c[k + 1];
        }
        Jet {
            c,
            valid: self.valid.saturating_sub(1),
        }
    }

    /// Re-expand in a parameter `u` with `dt/du = scale`.
    pub fn rescale(&self, scale: f64) -> Jet {
        let mut out = *self;
        let mut s = 1.0;
        for k in 0..LEN {
            out.c[k] *= s;
            s *= scale;
        }
        out
    }

    /// Truncates the carried order to at most `order`.
    pub fn truncate(mut self, order: usize) -> Jet {
        self.valid = self.valid.min(order + 1);
        self
    }

    pub fn sin_cos(self) -> (Jet, Jet) {
        let mut s = [0.0; LEN];
        let mut c = [0.0; LEN];
        s[0] = self.c[0].sin();
        c[0] = self.c[0].cos();
        for k in 1..LEN {
            let (mut sk, mut ck) = (0.0, 0.0);
            for j in 1..=k {
                let w = j as f64 * self.c[j];
                sk += w * c[k - j];
                ck -= w * s[k - j];
            }
            s[k] = sk / k as f64;
            c[k] = ck / k as f64;
        }
        (
            Jet { c: s, valid: self.valid },
            Jet { c, valid: self.valid },
        )
    }

    pub fn sqrt(self) -> Jet {
        let mut s = [0.0; LEN];
        s[0] = self.c[0].sqrt();
        for k in 1..LEN {
            let mut acc = self.c[k];
            for i in 1..k {
                acc -= s[i] * s[k - i];
            }
            s[k] = acc / (2.0 * s[0]);
        }
        Jet { c: s, valid: self.valid }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

impl Real for Jet {
    fn sin(self) -> Self {
        self.sin_cos().0
    }
    fn cos(self) -> Self {
        self.sin_cos().1
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        for k in 0..LEN {
            self.c[k] += rhs.c[k];
        }
        self.valid = self.valid.min(rhs.valid);
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        for v in &mut self.c {
            *v = -*v;
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut c = [0.0; LEN];
        for k in 0..LEN {
            for i in 0..=k {
                c[k] += self.c[i] * rhs.c[k - i];
            }
        }
        Jet {
            c,
            valid: self.valid.min(rhs.valid),
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let mut q = [0.0; LEN];
        for k in 0..LEN {
            let mut acc = self.c[k];
            for i in 1..=k {
                acc -= rhs.c[i] * q[k - i];
            }
            q[k] = acc / rhs.c[0];
        }
        Jet {
            c: q,
            valid: self.valid.min(rhs.valid),
        }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(mut self, rhs: f64) -> Jet {
        for v in &mut self.c {
            *v *= rhs;
        }
        self
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.c[0] += rhs;
        self
    }
}

/// Component-wise jet of a space curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveJet(pub [Jet; 3]);

impl CurveJet {
    pub fn from_components(c: [Jet; 3]) -> Self {
        CurveJet(c)
    }

    pub fn constant(p: Vec3) -> Self {
        CurveJet([Jet::constant(p.x), Jet::constant(p.y), Jet::constant(p.z)])
    }

    /// Jet of a point that moves linearly: `p + (t - t0) v`.
    pub fn linear(p: Vec3, v: Vec3) -> Self {
        let mk = |a: f64, b: f64| {
            let mut j = Jet::constant(a);
            j.c[1] = b;
            j
        };
        CurveJet([mk(p.x, v.x), mk(p.y, v.y), mk(p.z, v.z)])
    }

    pub fn value_only(p: Vec3) -> Self {
        CurveJet([
            Jet::value_only(p.x),
            Jet::value_only(p.y),
            Jet::value_only(p.z),
        ])
    }

    pub fn point(&self) -> Vec3 {
        Vec3::new(self.0[0].value(), self.0[1].value(), self.0[2].value())
    }

    pub fn order(&self) -> Option<usize> {
        self.0.iter().map(|j| j.order()).min().flatten()
    }

    pub fn derivative(&self, k: usize) -> Option<Vec3> {
        Some(Vec3::new(
            self.0[0].derivative(k)?,
            self.0[1].derivative(k)?,
            self.0[2].derivative(k)?,
        ))
    }

    pub fn differentiate(&self) -> CurveJet {
        CurveJet(self.0.map(|j| j.differentiate()))
    }

    pub fn rescale(&self, scale: f64) -> CurveJet {
        CurveJet(self.0.map(|j| j.rescale(scale)))
    }

    pub fn truncate(&self, order: usize) -> CurveJet {
        CurveJet(self.0.map(|j| j.truncate(order)))
    }

    pub fn dot(&self, other: &CurveJet) -> Jet {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn scale(&self, s: Jet) -> CurveJet {
        CurveJet(self.0.map(|j| j * s))
    }

    pub fn scale_f64(&self, s: f64) -> CurveJet {
        CurveJet(self.0.map(|j| j * s))
    }
}

impl Add for CurveJet {
    type Output = CurveJet;
    fn add(self, rhs: CurveJet) -> CurveJet {
        CurveJet([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Sub for CurveJet {
    type Output = CurveJet;
    fn sub(self, rhs: CurveJet) -> CurveJet {
        CurveJet([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}
