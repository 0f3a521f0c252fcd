//! Point/segment distances and the brute-force simplicity oracle for polylines.

use rayon::prelude::*;

use crate::curve::Polyline;
use crate::Vec3;

/// Default clearance of [`polyline_is_simple_oracle`].
pub const DEFAULT_CLEARANCE: f64 = 1e-9;

/// Closest point to `p` on segment `ab`.
pub fn closest_on_segment(p: &Vec3, a: &Vec3, b: &Vec3) -> Vec3 {
    let d = b - a;
    let len2 = d.norm_squared();
    if len2 == 0.0 {
        return *a;
    }
    let s = ((p - a).dot(&d) / len2).clamp(0.0, 1.0);
    a + d * s
}

pub fn point_segment_distance(p: &Vec3, a: &Vec3, b: &Vec3) -> f64 {
    (p - closest_on_segment(p, a, b)).norm()
}

/// Closest points between segments `p1q1` and `p2q2` (Ericson's clamped
/// parametric method). Returns the pair of points.
pub fn closest_points_segments(p1: &Vec3, q1: &Vec3, p2: &Vec3, q2: &Vec3) -> (Vec3, Vec3) {
    let d1 = q1 - p1;
    let d2 = q2 - p2;
    let r = p1 - p2;
    let a = d1.norm_squared();
    let e = d2.norm_squared();
    let f = d2.dot(&r);
    const TINY: f64 = 1e-300;
    let (s, t);
    if a <= TINY && e <= TINY {
        return (*p1, *p2);
    }
    if a <= TINY {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(&r);
        if e <= TINY {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > 1e-14 * a * e {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    (p1 + d1 * s, p2 + d2 * t)
}

pub fn segment_segment_distance(p1: &Vec3, q1: &Vec3, p2: &Vec3, q2: &Vec3) -> f64 {
    let (a, b) = closest_points_segments(p1, q1, p2, q2);
    (a - b).norm()
}

/// Whether two segments of a chain with `n_seg` segments share a vertex.
fn adjacent(i: usize, j: usize, n_seg: usize, closed: bool) -> bool {
    j == i + 1 || (closed && i == 0 && j == n_seg - 1)
}

/// True iff non-adjacent segments stay more than `clearance` apart and
/// adjacent segments meet only in their shared vertex.
pub fn polyline_is_simple_oracle(p: &Polyline, clearance: f64) -> bool {
    let segs: Vec<(Vec3, Vec3)> = p.segments().collect();
    let n = segs.len();
    let closed = p.closed();
    (0..n).into_par_iter().all(|i| {
        let (a1, b1) = segs[i];
        (i + 1..n).all(|j| {
            let (a2, b2) = segs[j];
            if adjacent(i, j, n, closed) {
                // Shared vertex is b1 == a2 (or a1 == b2 for the wrap pair).
                let (far1, far2) = if j == i + 1 { (a1, b2) } else { (b1, a2) };
                point_segment_distance(&far1, &a2, &b2) > clearance
                    && point_segment_distance(&far2, &a1, &b1) > clearance
            } else {
                segment_segment_distance(&a1, &b1, &a2, &b2) > clearance
            }
        })
    })
}
