//! Sufficient conditions for ambient isotopy between a curve and a PL
//! curve: the inscribed-polyline test and the per-window criteria for
//! arbitrary approximants, plus the search for the first passing member of
//! an approximant sequence.
//!
//! Margins are signed: positive means the criterion holds with room to
//! spare. Budget margins are angles (`π/2 − T`), the others are lengths.
//! A margin of `+∞` marks a check that does not apply (an open end or a
//! breakpoint); `NaN` marks a check skipped in fast mode.

use std::f64::consts::FRAC_PI_2;

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{piecewise_total_curvature, vertex_chain_curvature, DEFAULT_TOL};
use crate::curve::{wrap_param, CurveSource, ParamWindow, Polyline, SharedCurve, Side};
use crate::inscribe::{budget_knots, pl_representation, refine_midpoints, seed_inscription, InscriptionState};
use crate::offsets::offset_approximant;
use crate::metric::{
    convex_hull, directed_to_chain, normal_plane_margin, sample_points, segment_hausdorff, ProjectionIndex,
};
use crate::tubular::{tube_radius, TubeRadius};
use crate::{Error, Result, Vec3};

/// Hard limit on sub-curve total curvature.
pub const BUDGET_LIMIT: f64 = FRAC_PI_2;
/// Times a partition window may be halved.
pub const MAX_SPLITS: usize = 20;
/// Largest chord-to-window distance in a partition, as a fraction of `r`.
pub const CHORD_FRACTION: f64 = 0.4;
/// Parameter slack when testing whether a foot point lies in a window.
pub const WINDOW_SLACK: f64 = 1e-9;
/// Vertices may sit this far (relative) from `C(t)` and still count as
/// inscribed.
pub const INSCRIBED_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    /// Stop evaluating a window at its first failing criterion.
    pub fast: bool,
    /// Curve sample spacing as a fraction of `r`.
    pub spacing_factor: f64,
    /// Samples per side for the normal-plane test.
    pub sep_samples: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            fast: false,
            spacing_factor: 0.1,
            sep_samples: 64,
        }
    }
}

impl CertifyOptions {
    fn spacing(&self, r: f64) -> Result<f64> {
        if !(self.spacing_factor > 0.0 && self.spacing_factor.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "spacing factor must be positive, got {}",
                self.spacing_factor
            )));
        }
        Ok(self.spacing_factor * r)
    }
}

/// Windows covering `[0, 1]`, each with curvature below `π/2`, and their
/// widened copies.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Partition {
    pub windows: Vec<ParamWindow>,
    pub extended: Vec<ParamWindow>,
    pub eps_w: f64,
    pub closed: bool,
}

impl Partition {
    /// Builds the extended windows for a given list of windows.
    pub fn from_windows(windows: Vec<ParamWindow>, closed: bool) -> Result<Self> {
        if windows.is_empty() {
            return Err(Error::InvalidArgument("a partition needs at least one window".into()));
        }
        let min_len = windows.iter().map(ParamWindow::len).fold(f64::INFINITY, f64::min);
        let eps_w = min_len / 4.0;
        let extended = windows
            .iter()
            .map(|w| {
                if closed && windows.len() > 1 {
                    ParamWindow::modular(w.lo - eps_w, w.hi + eps_w)
                } else {
                    Ok(ParamWindow {
                        lo: (w.lo - eps_w).max(0.0),
                        hi: (w.hi + eps_w).min(1.0),
                    })
                }
            })
            .collect::<Result<_>>()?;
        Ok(Partition {
            windows,
            extended,
            eps_w,
            closed,
        })
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    /// Re-checks the structural invariants: the windows tile `[0, 1]`, each
    /// has curvature below `π/2`, `eps_w` is under every half-length and
    /// extended windows overlap only their neighbours.
    pub fn validate(&self, curve: &dyn CurveSource) -> Result<()> {
        let n = self.windows.len();
        let bad = |msg: String| Err(Error::Internal(format!("partition invariant: {msg}")));
        if self.windows[0].lo != 0.0 || self.windows[n - 1].hi != 1.0 {
            return bad("windows do not span [0, 1]".into());
        }
        for k in 0..n {
            let w = self.windows[k];
            if k + 1 < n && w.hi != self.windows[k + 1].lo {
                return bad(format!("gap after window {k}"));
            }
            if self.eps_w >= w.len() / 2.0 {
                return bad(format!("eps_w {} not below half of window {k}", self.eps_w));
            }
            let t = piecewise_total_curvature(curve, w, DEFAULT_TOL)?.value;
            if t >= BUDGET_LIMIT {
                return bad(format!("window {k} has curvature {t}"));
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                let neighbours = b == a + 1 || (self.closed && a == 0 && b == n - 1);
                if !neighbours && overlap(self.extended[a], self.extended[b], self.closed) {
                    return bad(format!("extended windows {a} and {b} overlap"));
                }
            }
        }
        Ok(())
    }
}

fn overlap(a: ParamWindow, b: ParamWindow, closed: bool) -> bool {
    let shifts: &[f64] = if closed { &[-1.0, 0.0, 1.0] } else { &[0.0] };
    shifts.iter().any(|s| a.lo < b.hi + s && b.lo + s < a.hi)
}

/// Grid for global projections: fine enough that grid steps stay well
/// under `r`.
fn projection_grid(curve: &dyn CurveSource, r: f64) -> Result<usize> {
    let length = crate::metric::approx_length(curve, ParamWindow::FULL)?;
    Ok(((4.0 * length / r).ceil() as usize).clamp(256, 1 << 20))
}

/// Containment margin of the convex hull of `samples` in the tube piece over
/// `window_ext`. Each hull vertex and hull edge midpoint contributes
/// `r − distance` when its nearest curve point lies in the window and the
/// negative parameter excess when it does not.
fn hull_tube_margin(
    samples: &[Vec3],
    index: &ProjectionIndex<'_>,
    closed: bool,
    window_ext: ParamWindow,
    r: f64,
) -> Result<f64> {
    let hull = convex_hull(samples)?;
    let mut margin = f64::INFINITY;
    for q in hull.vertex_points().chain(hull.edge_midpoints()) {
        let proj = index.project(&q);
        let m = if window_ext.contains(proj.t, closed, WINDOW_SLACK) {
            r - proj.distance
        } else {
            -param_excess(window_ext, proj.t, closed)
        };
        margin = margin.min(m);
    }
    Ok(margin)
}

fn param_excess(w: ParamWindow, t: f64, closed: bool) -> f64 {
    let gap = |x: f64| {
        if x < w.lo {
            w.lo - x
        } else if x > w.hi {
            x - w.hi
        } else {
            0.0
        }
    };
    if closed {
        (-2..=2).map(|k| gap(t + k as f64)).fold(f64::INFINITY, f64::min)
    } else {
        gap(t)
    }
}

/// Whether the convex hull of `samples` lies in the radius-`r` tube piece
/// over `window_ext`, judged on hull vertices and hull edge midpoints.
pub fn hull_in_extended_tube(
    samples: &[Vec3],
    curve: &dyn CurveSource,
    window_ext: ParamWindow,
    r: f64,
) -> Result<bool> {
    window_ext.validate_for(curve)?;
    let index = ProjectionIndex::new(curve, projection_grid(curve, r)?)?;
    Ok(hull_tube_margin(samples, &index, curve.is_closed(), window_ext, r)? > 0.0)
}

/// Splits `[0, 1]` into windows of curvature at most `budget` (cut at every
/// breakpoint), halving any window whose sampled hull leaves its tube piece
/// or whose end-to-end chord strays `0.4·r` or more from it. The chord rule
/// keeps the chord criterion of [`certify_approximant`] (distance below
/// `r/2`) attainable by approximants close to the curve.
pub fn partition_curve(curve: &dyn CurveSource, r: &TubeRadius, budget: f64) -> Result<Partition> {
    if !(budget > 0.0 && budget < BUDGET_LIMIT) {
        return Err(Error::InvalidArgument(format!("partition budget must be in (0, π/2), got {budget}")));
    }
    let closed = curve.is_closed();
    let mut knots = budget_knots(curve, budget, DEFAULT_TOL)?;
    if closed {
        knots.push(1.0);
    }
    let mut pending: Vec<(ParamWindow, usize)> =
        knots.windows(2).map(|w| (ParamWindow { lo: w[0], hi: w[1] }, 0)).collect();
    pending.reverse();
    let index = ProjectionIndex::new(curve, projection_grid(curve, r.r)?)?;
    let spacing = 0.1 * r.r;
    let mut windows = Vec::new();
    while let Some((w, splits)) = pending.pop() {
        let samples = sample_points(curve, w, spacing)?;
        let (a, b) = (samples[0], samples[samples.len() - 1]);
        let chord_ok = segment_hausdorff(&a, &b, &samples, spacing)?.value < CHORD_FRACTION * r.r;
        if chord_ok && hull_tube_margin(&samples, &index, closed, w, r.r)? > 0.0 {
            windows.push(w);
            continue;
        }
        if splits == MAX_SPLITS {
            return Err(Error::ContainmentUnachievable {
                lo: w.lo,
                hi: w.hi,
                splits,
            });
        }
        let m = w.mid();
        pending.push((ParamWindow { lo: m, hi: w.hi }, splits + 1));
        pending.push((ParamWindow { lo: w.lo, hi: m }, splits + 1));
    }
    Partition::from_windows(windows, closed)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Margins {
    pub budget: f64,
    pub containment: f64,
    pub endpoint: f64,
    pub hausdorff: f64,
}

impl Margins {
    fn unevaluated() -> Self {
        Margins {
            budget: f64::NAN,
            containment: f64::NAN,
            endpoint: f64::NAN,
            hausdorff: f64::NAN,
        }
    }

    fn all(&self) -> [f64; 4] {
        [self.budget, self.containment, self.endpoint, self.hausdorff]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SegmentReport {
    pub window: ParamWindow,
    pub budget_ok: bool,
    pub containment_ok: bool,
    pub endpoint_ok: bool,
    pub hausdorff_ok: bool,
    pub margins: Margins,
}

impl SegmentReport {
    pub fn passed(&self) -> bool {
        self.budget_ok && self.containment_ok && self.endpoint_ok && self.hausdorff_ok
    }

    fn from_margins(window: ParamWindow, margins: Margins) -> Self {
        let ok = |m: f64| m > 0.0;
        SegmentReport {
            window,
            budget_ok: ok(margins.budget),
            containment_ok: ok(margins.containment),
            endpoint_ok: ok(margins.endpoint),
            hausdorff_ok: ok(margins.hausdorff),
            margins,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Inscribed,
    Approximant,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub passed: bool,
    pub kind: CertificateKind,
    pub curve: String,
    pub per_segment: Vec<SegmentReport>,
    pub r_used: TubeRadius,
}

impl Certificate {
    fn assemble(kind: CertificateKind, curve: &dyn CurveSource, per_segment: Vec<SegmentReport>, r: &TubeRadius) -> Self {
        Certificate {
            passed: per_segment.iter().all(SegmentReport::passed),
            kind,
            curve: curve.label(),
            per_segment,
            r_used: *r,
        }
    }

    /// Smallest evaluated margin over all segments and criteria.
    pub fn min_margin(&self) -> f64 {
        self.per_segment
            .iter()
            .flat_map(|s| s.margins.all())
            .filter(|m| !m.is_nan())
            .fold(f64::INFINITY, f64::min)
    }
}

fn check_params(curve: &dyn CurveSource, p: &Polyline) -> Result<()> {
    if p.closed() != curve.is_closed() {
        return Err(Error::ParameterMismatch(format!(
            "polyline closed = {}, curve closed = {}",
            p.closed(),
            curve.is_closed()
        )));
    }
    let ts = p.params();
    if ts[0] != 0.0 || (!p.closed() && ts[ts.len() - 1] != 1.0) {
        return Err(Error::ParameterMismatch(format!(
            "polyline parameters [{}, {}] do not span the curve",
            ts[0],
            ts[ts.len() - 1]
        )));
    }
    Ok(())
}

/// Checks an inscribed polyline: on each inter-vertex window the sub-curve
/// curvature is below `π/2`, the segment stays within `r` of the sub-curve
/// (containment) and is `r`-close to it in Hausdorff distance, and the
/// normal plane at the segment's first vertex separates the neighbouring
/// sub-curves.
pub fn certify_inscribed(
    curve: &dyn CurveSource,
    p: &Polyline,
    r: &TubeRadius,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    check_params(curve, p)?;
    for (index, (&t, v)) in p.params().iter().zip(p.vertices()).enumerate() {
        let deviation = (curve.position(t) - v).norm();
        if deviation > INSCRIBED_TOL * (1.0 + v.norm()) {
            return Err(Error::NotInscribed { index, deviation });
        }
    }
    let spacing = opts.spacing(r.r)?;
    let breaks = curve.breakpoints();
    let n = p.segment_count();
    let closed = p.closed();
    let reports = (0..n)
        .into_par_iter()
        .map(|j| {
            let (a, b, t0, t1) = p.segment(j);
            let window = ParamWindow { lo: t0, hi: t1 };
            let mut m = Margins::unevaluated();
            m.budget = BUDGET_LIMIT - piecewise_total_curvature(curve, window, DEFAULT_TOL)?.value;
            if opts.fast && m.budget <= 0.0 {
                return Ok(SegmentReport::from_margins(window, m));
            }
            let samples = sample_points(curve, window, spacing)?;
            let len = (b - a).norm();
            let k = ((len / spacing).ceil() as usize).max(1);
            let chord: Vec<Vec3> = (0..=k).map(|i| a + (b - a) * (i as f64 / k as f64)).collect();
            m.containment = r.r - directed_to_chain(&chord, &samples)?.value;
            if opts.fast && m.containment <= 0.0 {
                return Ok(SegmentReport::from_margins(window, m));
            }
            m.hausdorff = r.r - segment_hausdorff(&a, &b, &samples, spacing)?.value;
            let at_break = breaks.iter().any(|&s| (s - t0).abs() <= 1e-12);
            m.endpoint = if (j == 0 && !closed) || at_break || (closed && t0 == 0.0 && !breaks.is_empty()) {
                f64::INFINITY
            } else {
                let prev = (j + n - 1) % n;
                let (_, _, s0, s1) = p.segment(prev);
                let left = if j == 0 {
                    ParamWindow { lo: s0 - 1.0, hi: 0.0 }
                } else {
                    ParamWindow { lo: s0, hi: s1 }
                };
                normal_plane_margin(curve, t0, left, window, opts.sep_samples)?
            };
            Ok(SegmentReport::from_margins(window, m))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Certificate::assemble(CertificateKind::Inscribed, curve, reports, r))
}

/// Checks an approximant window by window: the sub-polyline over the window
/// has curvature below `π/2`, its hull lies in the tube piece over the
/// extended window, its end points are within `r/2` of the curve points at
/// the same parameters, and the chord joining them is within `r/2` of the
/// sub-curve in Hausdorff distance.
pub fn certify_approximant(
    partition: &Partition,
    curve: &dyn CurveSource,
    approx: &Polyline,
    r: &TubeRadius,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    check_params(curve, approx)?;
    if partition.closed != curve.is_closed() {
        return Err(Error::ParameterMismatch("partition and curve disagree on closedness".into()));
    }
    let spacing = opts.spacing(r.r)?;
    let index = ProjectionIndex::new(curve, projection_grid(curve, r.r)?)?;
    let closed = curve.is_closed();
    let half = 0.5 * r.r;
    let reports = partition
        .windows
        .par_iter()
        .zip(partition.extended.par_iter())
        .map(|(&window, &ext)| {
            let mut m = Margins::unevaluated();
            let chain = approx.window_vertices(window.lo, window.hi);
            m.budget = BUDGET_LIMIT
                - if chain.len() >= 3 {
                    vertex_chain_curvature(&chain, false)?
                } else {
                    0.0
                };
            if opts.fast && m.budget <= 0.0 {
                return Ok(SegmentReport::from_margins(window, m));
            }
            m.containment = hull_tube_margin(&chain, &index, closed, ext, r.r)?;
            if opts.fast && m.containment <= 0.0 {
                return Ok(SegmentReport::from_margins(window, m));
            }
            let u0 = chain[0];
            let u1 = chain[chain.len() - 1];
            let v0 = curve.position(wrap_param(window.lo, closed, Side::Right));
            let v1 = curve.position(wrap_param(window.hi, closed, Side::Left));
            m.endpoint = half - (u0 - v0).norm().max((u1 - v1).norm());
            let samples = sample_points(curve, window, spacing)?;
            m.hausdorff = half - segment_hausdorff(&u0, &u1, &samples, spacing)?.value;
            Ok(SegmentReport::from_margins(window, m))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Certificate::assemble(CertificateKind::Approximant, curve, reports, r))
}

/// One evaluated member of an approximant sequence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Trial {
    pub i: u32,
    pub vertices: usize,
    pub passed: bool,
    pub min_margin: f64,
}

/// Outcome of [`find_isotopy_index`]. `index` is the first passing `i`;
/// otherwise `certificate` belongs to the trial with the best minimum
/// margin.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsotopySearch {
    pub index: Option<u32>,
    pub certificate_index: u32,
    pub certificate: Certificate,
    pub trials: Vec<Trial>,
}

impl IsotopySearch {
    pub fn found(&self) -> bool {
        self.index.is_some()
    }
}

/// Tests `sequence(1), sequence(2), …` against [`certify_approximant`] and
/// stops at the first pass.
pub fn find_isotopy_index(
    partition: &Partition,
    curve: &dyn CurveSource,
    sequence: &mut dyn FnMut(u32) -> Result<Polyline>,
    i_max: u32,
    r: &TubeRadius,
    opts: &CertifyOptions,
) -> Result<IsotopySearch> {
    if i_max == 0 {
        return Err(Error::InvalidArgument("i_max must be at least 1".into()));
    }
    let mut trials = Vec::new();
    let mut best: Option<(u32, Certificate)> = None;
    for i in 1..=i_max {
        let approx = sequence(i)?;
        let cert = certify_approximant(partition, curve, &approx, r, opts)?;
        let min_margin = cert.min_margin();
        trials.push(Trial {
            i,
            vertices: approx.len(),
            passed: cert.passed,
            min_margin,
        });
        if cert.passed {
            return Ok(IsotopySearch {
                index: Some(i),
                certificate_index: i,
                certificate: cert,
                trials,
            });
        }
        if best.as_ref().is_none_or(|(_, b)| min_margin > b.min_margin()) {
            best = Some((i, cert));
        }
    }
    let (certificate_index, certificate) = best.expect("at least one trial");
    Ok(IsotopySearch {
        index: None,
        certificate_index,
        certificate,
        trials,
    })
}

/// `L_i` = the `(i−1)`-th midpoint refinement of the seed inscription.
pub fn refinement_sequence(curve: SharedCurve) -> impl FnMut(u32) -> Result<Polyline> {
    let mut state: Option<InscriptionState> = None;
    move |i: u32| {
        let target = i.saturating_sub(1);
        if state.as_ref().is_none_or(|s| s.generation > target) {
            state = Some(seed_inscription(&curve)?);
        }
        let s = state.as_mut().expect("seeded above");
        while s.generation < target {
            *s = refine_midpoints(s)?;
        }
        Ok(s.polyline.clone())
    }
}

/// `L_i` = a certified PL representation of the `i`-th normal offset
/// approximant `C + ((i−1)/i)·N`, with its own tube radius.
pub fn offset_sequence(
    base: SharedCurve,
    eps: f64,
    safety: f64,
    max_rounds: u32,
) -> impl FnMut(u32) -> Result<Polyline> {
    move |i: u32| {
        let omega: SharedCurve = Arc::new(offset_approximant(&base, i)?);
        let r = tube_radius(omega.as_ref(), safety)?;
        Ok(pl_representation(&omega, eps, &r, max_rounds)?.polyline)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::DEFAULT_PARTITION_BUDGET;
    use crate::curve::{Circle, Helix, Segment};
    use crate::inscribe::inscribe_at;
    use crate::metric::polyline_is_simple_oracle;
    use crate::tubular::tube_radius;
    use std::f64::consts::PI;

    fn circle() -> SharedCurve {
        Arc::new(Circle::new(1.0).unwrap())
    }

    fn regular(curve: &dyn CurveSource, n: usize) -> Polyline {
        inscribe_at(curve, (0..n).map(|k| k as f64 / n as f64).collect()).unwrap()
    }

    #[test]
    fn partitions() {
        let c = circle();
        let r = tube_radius(c.as_ref(), 0.9).unwrap();
        let p = partition_curve(c.as_ref(), &r, DEFAULT_PARTITION_BUDGET).unwrap();
        assert_eq!(p.len(), (2.0 * PI / DEFAULT_PARTITION_BUDGET).ceil() as usize);
        p.validate(c.as_ref()).unwrap();
        assert!(p.eps_w > 0.0);

        let s = Segment::along_x(2.0).unwrap();
        let rs = tube_radius(&s, 0.9).unwrap();
        assert_eq!(partition_curve(&s, &rs, DEFAULT_PARTITION_BUDGET).unwrap().len(), 1);

        let h = Helix::new(2.0, 1.0, 1.0).unwrap();
        let rh = tube_radius(&h, 0.9).unwrap();
        let total = 2.0 * PI * h.curvature() * (4.0f64 + 1.0).sqrt();
        let ph = partition_curve(&h, &rh, DEFAULT_PARTITION_BUDGET).unwrap();
        assert_eq!(ph.len(), (total / DEFAULT_PARTITION_BUDGET).ceil() as usize);
        ph.validate(&h).unwrap();
        assert!(partition_curve(&h, &rh, FRAC_PI_2).is_err());
    }

    #[test]
    fn hull_containment() {
        let c = circle();
        let w = ParamWindow::new(0.0, 0.25).unwrap();
        let on_curve = sample_points(c.as_ref(), w, 0.01).unwrap();
        assert!(hull_in_extended_tube(&on_curve, c.as_ref(), w, 0.5).unwrap());
        let mut off = on_curve.clone();
        let mid = off.len() / 2;
        off[mid] *= 2.0;
        assert!(!hull_in_extended_tube(&off, c.as_ref(), w, 0.5).unwrap());
        // chord samples: deviation 1 − cos(π/4) ≈ 0.293
        let (a, b) = (c.position(0.0), c.position(0.25));
        let chord: Vec<Vec3> = (0..=50).map(|k| a + (b - a) * (k as f64 / 50.0)).collect();
        assert!(hull_in_extended_tube(&chord, c.as_ref(), w, 0.9).unwrap());
        assert!(!hull_in_extended_tube(&chord, c.as_ref(), w, 0.29).unwrap());
        assert!(hull_in_extended_tube(&chord, c.as_ref(), w, 0.3).unwrap());
    }

    #[test]
    fn inscribed_polygons() {
        let c = circle();
        let r = tube_radius(c.as_ref(), 0.9).unwrap();
        let opts = CertifyOptions::default();
        let oct = regular(c.as_ref(), 8);
        let cert = certify_inscribed(c.as_ref(), &oct, &r, &opts).unwrap();
        assert!(cert.passed);
        let dev = 1.0 - (PI / 8.0).cos();
        for s in &cert.per_segment {
            assert!((s.margins.budget - PI / 4.0).abs() < 1e-8);
            assert!((s.margins.hausdorff - (0.9 - dev)).abs() < 1e-3);
        }
        let tri = regular(c.as_ref(), 3);
        let cert = certify_inscribed(c.as_ref(), &tri, &r, &opts).unwrap();
        assert!(!cert.passed);
        assert!(cert.per_segment.iter().all(|s| !s.budget_ok));
        assert!((cert.per_segment[0].margins.budget - (FRAC_PI_2 - 2.0 * PI / 3.0)).abs() < 1e-8);

        let s = Segment::along_x(1.0).unwrap();
        let chord = inscribe_at(&s, vec![0.0, 1.0]).unwrap();
        let rs = tube_radius(&s, 0.9).unwrap();
        assert!(certify_inscribed(&s, &chord, &rs, &opts).unwrap().passed);
    }

    #[test]
    fn inscribed_rejects_off_curve() {
        let c = circle();
        let r = tube_radius(c.as_ref(), 0.9).unwrap();
        let p = regular(c.as_ref(), 8).map_points(|v| v * 1.01).unwrap();
        assert!(matches!(
            certify_inscribed(c.as_ref(), &p, &r, &CertifyOptions::default()),
            Err(Error::NotInscribed { .. })
        ));
    }

    #[test]
    fn fast_mode_short_circuits() {
        let c = circle();
        let r = tube_radius(c.as_ref(), 0.9).unwrap();
        let tri = regular(c.as_ref(), 3);
        let opts = CertifyOptions {
            fast: true,
            ..Default::default()
        };
        let cert = certify_inscribed(c.as_ref(), &tri, &r, &opts).unwrap();
        assert!(!cert.passed);
        assert!(cert.per_segment.iter().all(|s| s.margins.hausdorff.is_nan()));
    }

    #[test]
    fn approximants() {
        let c = circle();
        let r = tube_radius(c.as_ref(), 0.9).unwrap();
        let part = partition_curve(c.as_ref(), &r, DEFAULT_PARTITION_BUDGET).unwrap();
        let opts = CertifyOptions::default();
        let dense = regular(c.as_ref(), 96);
        let cert = certify_approximant(&part, c.as_ref(), &dense, &r, &opts).unwrap();
        assert!(cert.passed);
        assert!(polyline_is_simple_oracle(&dense, 1e-9));
        let pushed = dense.map_points(|v| v * (1.0 + r.r)).unwrap();
        let cert = certify_approximant(&part, c.as_ref(), &pushed, &r, &opts).unwrap();
        assert!(!cert.passed);
        assert!(cert.per_segment.iter().all(|s| !s.endpoint_ok));

        let open = Polyline::new(dense.vertices().to_vec(), dense.params().to_vec(), false);
        if let Ok(open) = open {
            assert!(matches!(
                certify_approximant(&part, c.as_ref(), &open, &r, &opts),
                Err(Error::ParameterMismatch(_))
            ));
        }
    }

    #[test]
    fn isotopy_index() {
        let c = circle();
        let r = tube_radius(c.as_ref(), 0.9).unwrap();
        let part = partition_curve(c.as_ref(), &r, DEFAULT_PARTITION_BUDGET).unwrap();
        let opts = CertifyOptions::default();
        let mut seq = refinement_sequence(c.clone());
        let found = find_isotopy_index(&part, c.as_ref(), &mut seq, 10, &r, &opts).unwrap();
        let n = found.index.unwrap();
        for t in &found.trials[..found.trials.len() - 1] {
            assert!(!t.passed);
        }
        let mut seq = refinement_sequence(c.clone());
        let direct = certify_approximant(&part, c.as_ref(), &seq(n).unwrap(), &r, &opts).unwrap();
        assert!(direct.passed);
        if n > 1 {
            let before = certify_approximant(&part, c.as_ref(), &seq(n - 1).unwrap(), &r, &opts).unwrap();
            assert!(!before.passed);
            let short = find_isotopy_index(&part, c.as_ref(), &mut refinement_sequence(c.clone()), n - 1, &r, &opts)
                .unwrap();
            assert!(!short.found());
            assert_eq!(short.trials.len() as u32, n - 1);
        }
        let fixed = regular(c.as_ref(), 96);
        let mut constant = |_| Ok(fixed.clone());
        let once = find_isotopy_index(&part, c.as_ref(), &mut constant, 5, &r, &opts).unwrap();
        assert_eq!(once.index, Some(1));
    }
}
