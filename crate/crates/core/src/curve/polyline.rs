use crate::curve::{CurveSource, Side};
use crate::jet::CurveJet;
use crate::{Error, Result, Vec3};

/// A PL curve with one parameter per vertex.
///
/// Open polylines span `params[0] = 0 ..= params[n-1] = 1`. Closed
/// polylines keep `params` in `[0, 1)`; the closing segment runs from the
/// last vertex (at `params[n-1]`) back to the first (at `t = 1`).
#[derive(Clone, Debug, PartialEq)]
pub struct Polyline {
    vertices: Vec<Vec3>,
    params: Vec<f64>,
    closed: bool,
}

impl Polyline {
    pub fn new(vertices: Vec<Vec3>, params: Vec<f64>, closed: bool) -> Result<Self> {
        let n = vertices.len();
        if n < 2 {
            return Err(Error::TooFewVertices { needed: 2, got: n });
        }
        if params.len() != n {
            return Err(Error::BadParams(format!(
                "{} params for {n} vertices",
                params.len()
            )));
        }
        let top_ok = if closed { params[n - 1] < 1.0 } else { params[n - 1] <= 1.0 };
        if params[0] < 0.0 || !top_ok || params.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::BadParams(format!("{params:?}")));
        }
        for i in 0..n - 1 {
            if vertices[i] == vertices[i + 1] {
                return Err(Error::DuplicateVertex { index: i, next: i + 1 });
            }
        }
        if closed && vertices[n - 1] == vertices[0] {
            return Err(Error::DuplicateVertex { index: n - 1, next: 0 });
        }
        if vertices.iter().any(|v| !v.iter().all(|c| c.is_finite())) {
            return Err(Error::InvalidArgument("non-finite vertex".into()));
        }
        Ok(Polyline {
            vertices,
            params,
            closed,
        })
    }

    /// Equally spaced parameters: `j / (n-1)` when open, `j / n` when closed.
    pub fn uniform(vertices: Vec<Vec3>, closed: bool) -> Result<Self> {
        let n = vertices.len();
        if n < 2 {
            return Err(Error::TooFewVertices { needed: 2, got: n });
        }
        let denom = if closed { n } else { n - 1 } as f64;
        let params = (0..n).map(|j| j as f64 / denom).collect();
        Polyline::new(vertices, params, closed)
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.len()
        } else {
            self.len() - 1
        }
    }

    /// Endpoints and parameter span of segment `j`.
    pub fn segment(&self, j: usize) -> (Vec3, Vec3, f64, f64) {
        let n = self.len();
        let k = (j + 1) % n;
        let t1 = if k == 0 { 1.0 } else { self.params[k] };
        (self.vertices[j], self.vertices[k], self.params[j], t1)
    }

    pub fn segments(&self) -> impl Iterator<Item = (Vec3, Vec3)> + '_ {
        (0..self.segment_count()).map(|j| {
            let (a, b, _, _) = self.segment(j);
            (a, b)
        })
    }

    /// Total Euclidean length.
    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| (b - a).norm()).sum()
    }

    fn locate(&self, t: f64, side: Side) -> usize {
        let last = self.segment_count() - 1;
        let j = self.params.partition_point(|&p| p <= t).saturating_sub(1);
        let j = if j > 0 && self.params[j] == t && side == Side::Left {
            j - 1
        } else {
            j
        };
        j.min(last)
    }

    pub fn eval(&self, t: f64) -> Vec3 {
        let (a, b, t0, t1) = self.segment(self.locate(t, Side::Right));
        let s = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
        a + (b - a) * s
    }

    /// Vertices of the sub-curve over `[lo, hi]`: the interpolated end points
    /// and every vertex strictly between them. On closed polylines the window
    /// is read modulo 1.
    pub fn window_vertices(&self, lo: f64, hi: f64) -> Vec<Vec3> {
        let wrap = |t: f64| if self.closed { t - t.floor() } else { t.clamp(0.0, 1.0) };
        let mut pts = vec![self.eval(wrap(lo))];
        let mut interior: Vec<(f64, Vec3)> = Vec::new();
        for (&p, &v) in self.params.iter().zip(&self.vertices) {
            let reps: &[f64] = if self.closed { &[-1.0, 0.0, 1.0] } else { &[0.0] };
            for &k in reps {
                let x = p + k;
                if x > lo && x < hi {
                    interior.push((x, v));
                }
            }
        }
        interior.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts.extend(interior.into_iter().map(|(_, v)| v));
        let end = self.eval(if self.closed && hi - hi.floor() == 0.0 { 1.0 } else { wrap(hi) });
        pts.push(end);
        pts.dedup_by(|b, a| (*b - *a).norm() <= 1e-14 * (1.0 + a.norm()));
        pts
    }

    /// Copy with vertex `j` moved.
    pub fn with_vertex(&self, j: usize, p: Vec3) -> Result<Polyline> {
        let mut v = self.vertices.clone();
        v[j] = p;
        Polyline::new(v, self.params.clone(), self.closed)
    }

    /// Copy with vertex `j` removed.
    pub fn without_vertex(&self, j: usize) -> Result<Polyline> {
        let mut v = self.vertices.clone();
        let mut p = self.params.clone();
        v.remove(j);
        p.remove(j);
        Polyline::new(v, p, self.closed)
    }

    /// Rigid/affine image under `f`, parameters unchanged.
    pub fn map_points(&self, f: impl Fn(&Vec3) -> Vec3) -> Result<Polyline> {
        Polyline::new(self.vertices.iter().map(f).collect(), self.params.clone(), self.closed)
    }
}

impl CurveSource for Polyline {
    fn position(&self, t: f64) -> Vec3 {
        self.eval(t)
    }

    fn jet(&self, t: f64, side: Side) -> CurveJet {
        let (a, b, t0, t1) = self.segment(self.locate(t, side));
        let s = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
        CurveJet::linear(a + (b - a) * s, (b - a) / (t1 - t0))
    }

    /// Interior vertex parameters; the seam of a closed polyline is
    /// handled as the closing corner.
    fn breakpoints(&self) -> Vec<f64> {
        let n = self.len();
        if self.closed {
            self.params[1..].to_vec()
        } else {
            self.params[1..n - 1].to_vec()
        }
    }

    fn is_closed(&self) -> bool {
        self.closed
    }

    fn is_piecewise_linear(&self) -> bool {
        true
    }

    fn label(&self) -> String {
        format!(
            "polyline:{}:{}",
            if self.closed { "closed" } else { "open" },
            self.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(raw: &[[f64; 3]]) -> Vec<Vec3> {
        raw.iter().map(|p| Vec3::new(p[0], p[1], p[2])).collect()
    }

    #[test]
    fn uniform_params() {
        let p = Polyline::uniform(pts(&[[0., 0., 0.], [1., 0., 0.], [1., 1., 0.]]), false).unwrap();
        assert_eq!(p.params(), &[0.0, 0.5, 1.0]);
        let q = Polyline::uniform(pts(&[[0., 0., 0.], [1., 0., 0.], [2., 0., 0.], [3., 0., 0.], [4., 1., 0.]]), false).unwrap();
        assert_eq!(q.params(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        // linear interpolation: mid-parameter is the segment midpoint
        assert!((p.eval(0.25) - Vec3::new(0.5, 0.0, 0.0)).norm() < 1e-15);
        assert!((p.eval(0.75) - Vec3::new(1.0, 0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn closed_polyline_wraps() {
        let sq = Polyline::uniform(pts(&[[0., 0., 0.], [1., 0., 0.], [1., 1., 0.], [0., 1., 0.]]), true).unwrap();
        assert_eq!(sq.segment_count(), 4);
        assert!((sq.eval(0.875) - Vec3::new(0.0, 0.5, 0.0)).norm() < 1e-15);
        assert!((sq.eval(1.0) - sq.eval(0.0)).norm() < 1e-15);
        assert_eq!(sq.breakpoints(), vec![0.25, 0.5, 0.75]);
    }

    #[test]
    fn rejects_duplicates_and_bad_params() {
        let dup = pts(&[[0., 0., 0.], [0., 0., 0.], [1., 0., 0.]]);
        assert!(matches!(Polyline::uniform(dup, false), Err(Error::DuplicateVertex { index: 0, .. })));
        let v = pts(&[[0., 0., 0.], [1., 0., 0.]]);
        assert!(Polyline::new(v.clone(), vec![0.5, 0.5], false).is_err());
        assert!(Polyline::uniform(v[..1].to_vec(), false).is_err());
    }

    #[test]
    fn window_vertices_cut_segments() {
        let p = Polyline::uniform(pts(&[[0., 0., 0.], [1., 0., 0.], [1., 1., 0.]]), false).unwrap();
        let w = p.window_vertices(0.25, 0.75);
        assert_eq!(w.len(), 3);
        assert!((w[0] - Vec3::new(0.5, 0.0, 0.0)).norm() < 1e-15);
        assert!((w[2] - Vec3::new(1.0, 0.5, 0.0)).norm() < 1e-15);
        let sq = Polyline::uniform(pts(&[[0., 0., 0.], [1., 0., 0.], [1., 1., 0.], [0., 1., 0.]]), true).unwrap();
        let seam = sq.window_vertices(-0.125, 0.125);
        assert_eq!(seam.len(), 3);
        assert!((seam[1] - Vec3::zeros()).norm() < 1e-15);
    }
}
