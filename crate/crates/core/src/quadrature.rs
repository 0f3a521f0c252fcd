//! Adaptive Simpson quadrature.

use crate::{Error, Result};

const MAX_DEPTH: u32 = 48;
const INITIAL_PANELS: usize = 8;

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

/// Outcome of one adaptive run.
#[derive(Clone, Copy, Debug)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

impl Integral {
    pub fn into_result(self) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::QuadratureNotConverged {
                estimate: self.value,
                error: self.error,
            })
        }
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// `fa` and `fb` are the end values supplied by the caller, which lets
/// one-sided evaluations at breakpoints stay out of `f`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fb: f64, tol: f64) -> Integral {
    let mut out = Integral {
        value: 0.0,
        error: 0.0,
        converged: true,
    };
    if b <= a {
        return out;
    }
    let h = (b - a) / INITIAL_PANELS as f64;
    let mut left = fa;
    for i in 0..INITIAL_PANELS {
        let pa = a + i as f64 * h;
        let pb = if i + 1 == INITIAL_PANELS { b } else { pa + h };
        let right = if i + 1 == INITIAL_PANELS { fb } else { f(pb) };
        let fm = f(0.5 * (pa + pb));
        let panel = Panel {
            a: pa,
            b: pb,
            fa: left,
            fm,
            fb: right,
            whole: simpson(pa, pb, left, fm, right),
        };
        refine(f, panel, tol / INITIAL_PANELS as f64, MAX_DEPTH, &mut out);
        left = right;
    }
    out
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) * (fa + 4.0 * fm + fb) / 6.0
}

fn refine(f: &dyn Fn(f64) -> f64, p: Panel, tol: f64, depth: u32, out: &mut Integral) {
    let m = 0.5 * (p.a + p.b);
    let lm = 0.5 * (p.a + m);
    let rm = 0.5 * (m + p.b);
    let (flm, frm) = (f(lm), f(rm));
    let l = simpson(p.a, m, p.fa, flm, p.fm);
    let r = simpson(m, p.b, p.fm, frm, p.fb);
    let delta = l + r - p.whole;
    let floor = 64.0 * f64::EPSILON * (l.abs() + r.abs());
    if delta.abs() <= 15.0 * tol.max(floor) {
        out.value += l + r + delta / 15.0;
        out.error += delta.abs() / 15.0;
        return;
    }
    if depth == 0 || m <= p.a || m >= p.b {
        out.value += l + r;
        out.error += delta.abs();
        out.converged = false;
        return;
    }
    refine(
        f,
        Panel { a: p.a, b: m, fa: p.fa, fm: flm, fb: p.fm, whole: l },
        0.5 * tol,
        depth - 1,
        out,
    );
    refine(
        f,
        Panel { a: m, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: r },
        0.5 * tol,
        depth - 1,
        out,
    );
}
