//! Inscribed PL curves: seeding, midpoint refinement and PL representations
//! whose inter-vertex sub-curves stay under the `π/2` curvature budget.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::certify::{certify_inscribed, Certificate, CertifyOptions};
use crate::curvature::{advance_by_budget, Advance, DEFAULT_TOL};
use crate::curve::{CurveSource, ParamWindow, Polyline, SharedCurve};
use crate::metric::{sample_points, segment_hausdorff, DistanceReport};
use crate::tubular::TubeRadius;
use crate::{Error, Result};

/// Default `ε` of the PL representation budget `π/2 − ε`.
pub const DEFAULT_EPS: f64 = 0.1;
pub const DEFAULT_MAX_ROUNDS: u32 = 24;
/// Sampling spacing used for distance checks, as a fraction of `r`.
pub const SPACING_FRACTION: f64 = 0.1;

/// A polyline inscribed in `source`, with its refinement generation.
#[derive(Clone, Debug)]
pub struct InscriptionState {
    pub polyline: Polyline,
    pub source: SharedCurve,
    pub generation: u32,
}

/// The polyline with vertices `C(t)` for the given parameters.
pub fn inscribe_at(curve: &dyn CurveSource, params: Vec<f64>) -> Result<Polyline> {
    let vertices = params.iter().map(|&t| curve.position(t)).collect();
    Polyline::new(vertices, params, curve.is_closed())
}

/// Pads a closed curve's parameter set to at least three entries by
/// bisecting the widest gaps (measured around the circle).
fn pad_closed(mut params: Vec<f64>) -> Vec<f64> {
    while params.len() < 3 {
        let n = params.len();
        let (mut at, mut widest) = (0, 0.0);
        for k in 0..n {
            let next = if k + 1 < n { params[k + 1] } else { 1.0 };
            if next - params[k] > widest {
                widest = next - params[k];
                at = k;
            }
        }
        params.insert(at + 1, params[at] + widest / 2.0);
    }
    params
}

/// Vertices at `t = 0`, every breakpoint and `t = 1`. A closed curve is
/// seeded once at the seam; a closed C2 curve gets `0, 1/3, 2/3`.
pub fn seed_inscription(curve: &SharedCurve) -> Result<InscriptionState> {
    let breaks = curve.breakpoints();
    let params = if curve.is_closed() {
        if breaks.is_empty() {
            vec![0.0, 1.0 / 3.0, 2.0 / 3.0]
        } else {
            let mut p = vec![0.0];
            p.extend(breaks);
            pad_closed(p)
        }
    } else {
        let mut p = vec![0.0];
        p.extend(breaks);
        p.push(1.0);
        p
    };
    Ok(InscriptionState {
        polyline: inscribe_at(curve.as_ref(), params)?,
        source: curve.clone(),
        generation: 0,
    })
}

/// Parameter midpoints between consecutive vertices (and across the seam
/// of a closed polyline).
pub fn midpoint_params(p: &Polyline) -> Vec<f64> {
    let ts = p.params();
    let mut out = Vec::with_capacity(2 * ts.len());
    for j in 0..p.segment_count() {
        let (_, _, t0, t1) = p.segment(j);
        out.push(t0);
        out.push(0.5 * (t0 + t1));
    }
    if !p.closed() {
        out.push(*ts.last().expect("non-empty polyline"));
    }
    out
}

pub fn refine_midpoints(state: &InscriptionState) -> Result<InscriptionState> {
    let params = midpoint_params(&state.polyline);
    Ok(InscriptionState {
        polyline: inscribe_at(state.source.as_ref(), params)?,
        source: state.source.clone(),
        generation: state.generation + 1,
    })
}

/// Curve window of segment `j` of an inscribed polyline.
pub fn segment_window(p: &Polyline, j: usize) -> ParamWindow {
    let (_, _, t0, t1) = p.segment(j);
    ParamWindow { lo: t0, hi: t1 }
}

/// Per-segment Hausdorff distances between an inscribed polyline and the
/// sub-curves its segments span, sampled at `spacing`.
pub fn segment_deviations(curve: &dyn CurveSource, p: &Polyline, spacing: f64) -> Result<Vec<DistanceReport>> {
    (0..p.segment_count())
        .into_par_iter()
        .map(|j| {
            let (a, b, _, _) = p.segment(j);
            let samples = sample_points(curve, segment_window(p, j), spacing)?;
            segment_hausdorff(&a, &b, &samples, spacing)
        })
        .collect()
}

/// Upper bound on the Hausdorff distance between an inscribed polyline and
/// its curve: the largest segment-to-sub-curve distance.
pub fn inscribed_hausdorff(curve: &dyn CurveSource, p: &Polyline, spacing: f64) -> Result<DistanceReport> {
    let all = segment_deviations(curve, p, spacing)?;
    Ok(all
        .into_iter()
        .reduce(|a, b| if b.value > a.value { b } else { a })
        .expect("a polyline has at least one segment"))
}

/// Knots `0 = t_0 < t_1 < …` with the curvature of each slice at most
/// `budget`, plus every breakpoint.
pub fn budget_knots(curve: &dyn CurveSource, budget: f64, tol: f64) -> Result<Vec<f64>> {
    let mut knots = vec![0.0];
    let mut t = 0.0;
    loop {
        match advance_by_budget(curve, t, budget, tol)? {
            Advance::End => break,
            Advance::To(next) => {
                if next >= 1.0 {
                    break;
                }
                knots.push(next);
                t = next;
            }
        }
    }
    knots.extend(curve.breakpoints());
    knots.sort_by(f64::total_cmp);
    knots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    if curve.is_closed() {
        knots = pad_closed(knots);
    } else {
        knots.push(1.0);
    }
    Ok(knots)
}

/// Result of [`pl_representation`].
#[derive(Clone, Debug)]
pub struct PlRepresentation {
    pub polyline: Polyline,
    pub certificate: Certificate,
    /// Midpoint refinement rounds performed after the budget knots.
    pub rounds: u32,
    pub hausdorff: f64,
}

/// An inscribed polyline certified isotopic to `curve`: budget knots at
/// `π/2 − eps`, then midpoint refinement until the Hausdorff distance drops
/// below `r` and the certificate passes.
pub fn pl_representation(
    curve: &SharedCurve,
    eps: f64,
    r: &TubeRadius,
    max_rounds: u32,
) -> Result<PlRepresentation> {
    pl_representation_with(curve, eps, r, max_rounds, &CertifyOptions::default())
}

/// [`pl_representation`] with explicit certificate options.
pub fn pl_representation_with(
    curve: &SharedCurve,
    eps: f64,
    r: &TubeRadius,
    max_rounds: u32,
    opts: &CertifyOptions,
) -> Result<PlRepresentation> {
    if !(eps > 0.0 && eps < FRAC_PI_2) {
        return Err(Error::InvalidArgument(format!("eps must be in (0, π/2), got {eps}")));
    }
    let knots = budget_knots(curve.as_ref(), FRAC_PI_2 - eps, DEFAULT_TOL)?;
    let mut state = InscriptionState {
        polyline: inscribe_at(curve.as_ref(), knots)?,
        source: curve.clone(),
        generation: 0,
    };
    let spacing = SPACING_FRACTION * r.r;
    loop {
        let h = inscribed_hausdorff(curve.as_ref(), &state.polyline, spacing)?.value;
        if h < r.r {
            let certificate = certify_inscribed(curve.as_ref(), &state.polyline, r, opts)?;
            if certificate.passed {
                return Ok(PlRepresentation {
                    polyline: state.polyline,
                    certificate,
                    rounds: state.generation,
                    hausdorff: h,
                });
            }
        }
        if state.generation >= max_rounds {
            return Err(Error::MaxRoundsExceeded {
                rounds: state.generation as usize,
                hausdorff: h,
                r: r.r,
            });
        }
        state = refine_midpoints(&state)?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::pl_total_curvature;
    use crate::curve::{Circle, Helix, PiecewiseCurve, Segment};
    use crate::metric::polyline_is_simple_oracle;
    use crate::tubular::tube_radius;
    use crate::Vec3;
    use std::f64::consts::{PI, TAU};
    use std::sync::Arc;

    fn circle() -> SharedCurve {
        Arc::new(Circle::new(1.0).unwrap())
    }

    #[test]
    fn seeds() {
        let h: SharedCurve = Arc::new(Helix::new(2.0, 1.0, 1.0).unwrap());
        assert_eq!(seed_inscription(&h).unwrap().polyline.len(), 2);
        let c = seed_inscription(&circle()).unwrap();
        assert_eq!(c.polyline.params(), &[0.0, 1.0 / 3.0, 2.0 / 3.0]);
        let pts = [
            Vec3::new(0., 0., 0.),
            Vec3::new(1., 0., 0.),
            Vec3::new(1., 1., 0.),
            Vec3::new(2., 1., 0.),
            Vec3::new(2., 2., 1.),
        ];
        let pieces: Vec<SharedCurve> = pts
            .windows(2)
            .map(|w| Arc::new(Segment::new(w[0], w[1]).unwrap()) as SharedCurve)
            .collect();
        let zig: SharedCurve = Arc::new(PiecewiseCurve::new(pieces, false).unwrap());
        assert_eq!(seed_inscription(&zig).unwrap().polyline.len(), 5);
    }

    #[test]
    fn refinement_of_circle_gives_regular_polygons() {
        let mut s = seed_inscription(&circle()).unwrap();
        for g in 1..=5 {
            s = refine_midpoints(&s).unwrap();
            assert_eq!(s.generation, g);
            let n = 3 * (1 << g);
            assert_eq!(s.polyline.len(), n);
            let side = 2.0 * (PI / n as f64).sin();
            for (a, b) in s.polyline.segments() {
                assert!(((b - a).norm() - side).abs() < 1e-12);
            }
            assert!((pl_total_curvature(&s.polyline).unwrap().value - TAU).abs() < 1e-10);
        }
    }

    #[test]
    fn open_refinement_counts() {
        let h: SharedCurve = Arc::new(Helix::new(2.0, 1.0, 1.0).unwrap());
        let mut s = seed_inscription(&h).unwrap();
        for g in 1..=6u32 {
            s = refine_midpoints(&s).unwrap();
            let n = (1usize << g) + 1;
            assert_eq!(s.polyline.len(), n);
            for (k, &t) in s.polyline.params().iter().enumerate() {
                assert!((t - k as f64 / (n - 1) as f64).abs() < 1e-15);
                assert!((s.polyline.vertices()[k] - h.position(t)).norm() == 0.0);
            }
        }
    }

    #[test]
    fn quarter_arc_chord_deviation() {
        let c = circle();
        let p = Polyline::new(vec![c.position(0.0), c.position(0.25)], vec![0.0, 0.25], false).unwrap();
        let d = inscribed_hausdorff(c.as_ref(), &p, 1e-3).unwrap().value;
        let exact = 1.0 - (PI / 4.0).cos();
        assert!((d - exact).abs() < 1e-6);
    }

    #[test]
    fn circle_representation() {
        let c = circle();
        let r = tube_radius(c.as_ref(), 0.9).unwrap();
        let knots = budget_knots(c.as_ref(), FRAC_PI_2 - 0.1, DEFAULT_TOL).unwrap();
        assert!(knots.len() >= (TAU / (FRAC_PI_2 - 0.1)).ceil() as usize);
        let rep = pl_representation(&c, 0.1, &r, 10).unwrap();
        assert!(rep.certificate.passed);
        assert!(rep.hausdorff < 0.9);
        assert!(polyline_is_simple_oracle(&rep.polyline, 1e-9));
    }

    #[test]
    fn segment_representation() {
        let s: SharedCurve = Arc::new(Segment::along_x(3.0).unwrap());
        let r = tube_radius(s.as_ref(), 0.9).unwrap();
        let rep = pl_representation(&s, 0.1, &r, 10).unwrap();
        assert_eq!(rep.polyline.len(), 2);
        assert_eq!(rep.rounds, 0);
        assert!(rep.hausdorff < 1e-14, "{}", rep.hausdorff);
    }
}
