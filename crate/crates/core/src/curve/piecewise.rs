use crate::curve::{CurveSource, SharedCurve, Side};
use crate::jet::CurveJet;
use crate::{Error, Result, Vec3};

const JOIN_TOL: f64 = 1e-9;

/// Concatenation of curves. Piece `i` occupies `[knots[i], knots[i+1]]`;
/// interior knots become breakpoints.
#[derive(Clone)]
pub struct PiecewiseCurve {
    pieces: Vec<SharedCurve>,
    knots: Vec<f64>,
    closed: bool,
}

impl PiecewiseCurve {
    /// Pieces on equally long parameter intervals.
    pub fn new(pieces: Vec<SharedCurve>, closed: bool) -> Result<Self> {
        let n = pieces.len();
        let knots = (0..=n).map(|i| i as f64 / n as f64).collect();
        Self::with_knots(pieces, knots, closed)
    }

    pub fn with_knots(pieces: Vec<SharedCurve>, knots: Vec<f64>, closed: bool) -> Result<Self> {
        if pieces.is_empty() || knots.len() != pieces.len() + 1 {
            return Err(Error::InvalidArgument(
                "need one more knot than pieces".into(),
            ));
        }
        if knots[0] != 0.0 || *knots.last().unwrap() != 1.0 || knots.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::BadParams(format!("{knots:?}")));
        }
        for (i, w) in pieces.windows(2).enumerate() {
            let gap = (w[0].position(1.0) - w[1].position(0.0)).norm();
            if gap > JOIN_TOL {
                return Err(Error::InvalidArgument(format!(
                    "pieces {i} and {} do not join (gap {gap})",
                    i + 1
                )));
            }
        }
        if closed {
            let gap = (pieces[pieces.len() - 1].position(1.0) - pieces[0].position(0.0)).norm();
            if gap > JOIN_TOL {
                return Err(Error::InvalidArgument(format!(
                    "closed curve does not close (gap {gap})"
                )));
            }
        }
        Ok(PiecewiseCurve {
            pieces,
            knots,
            closed,
        })
    }

    fn locate(&self, t: f64, side: Side) -> (usize, f64) {
        let n = self.pieces.len();
        let t = t.clamp(0.0, 1.0);
        let mut i = self.knots[1..n].partition_point(|&k| k < t);
        if i < n - 1 && self.knots[i + 1] == t && side == Side::Right {
            i += 1;
        }
        let (a, b) = (self.knots[i], self.knots[i + 1]);
        (i, ((t - a) / (b - a)).clamp(0.0, 1.0))
    }
}

impl CurveSource for PiecewiseCurve {
    fn position(&self, t: f64) -> Vec3 {
        let (i, u) = self.locate(t, Side::Right);
        self.pieces[i].position(u)
    }

    fn jet(&self, t: f64, side: Side) -> CurveJet {
        let (i, u) = self.locate(t, side);
        let piece_side = if u <= 0.0 {
            Side::Right
        } else if u >= 1.0 {
            Side::Left
        } else {
            side
        };
        let span = self.knots[i + 1] - self.knots[i];
        self.pieces[i].jet(u, piece_side).rescale(1.0 / span)
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (i, piece) in self.pieces.iter().enumerate() {
            let (a, b) = (self.knots[i], self.knots[i + 1]);
            if i > 0 {
                out.push(a);
            }
            out.extend(piece.breakpoints().into_iter().map(|u| a + u * (b - a)));
        }
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    fn is_closed(&self) -> bool {
        self.closed
    }

    fn is_piecewise_linear(&self) -> bool {
        self.pieces.iter().all(|p| p.is_piecewise_linear())
    }

    fn label(&self) -> String {
        let parts: Vec<_> = self.pieces.iter().map(|p| p.label()).collect();
        format!("piecewise({})", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{derivative, Segment};
    use std::sync::Arc;

    fn v_shape() -> PiecewiseCurve {
        let a: SharedCurve = Arc::new(Segment::new(Vec3::new(-1.0, 1.0, 0.0), Vec3::zeros()).unwrap());
        let b: SharedCurve = Arc::new(Segment::new(Vec3::zeros(), Vec3::new(2.0, 2.0, 0.0)).unwrap());
        PiecewiseCurve::with_knots(vec![a, b], vec![0.0, 0.25, 1.0], false).unwrap()
    }

    #[test]
    fn sides_select_adjacent_pieces() {
        let v = v_shape();
        assert_eq!(v.breakpoints(), vec![0.25]);
        let l = derivative(&v, 0.25, 1, Side::Left);
        let r = derivative(&v, 0.25, 1, Side::Right);
        assert!((l - Vec3::new(4.0, -4.0, 0.0)).norm() < 1e-12);
        assert!((r - Vec3::new(2.0 / 0.75, 2.0 / 0.75, 0.0)).norm() < 1e-12);
        assert!(v.position(0.25).norm() < 1e-15);
    }

    #[test]
    fn rejects_gaps() {
        let a: SharedCurve = Arc::new(Segment::new(Vec3::zeros(), Vec3::x()).unwrap());
        let b: SharedCurve = Arc::new(Segment::new(Vec3::y(), Vec3::z()).unwrap());
        assert!(PiecewiseCurve::new(vec![a.clone(), b], false).is_err());
        let c: SharedCurve = Arc::new(Segment::new(Vec3::x(), Vec3::y()).unwrap());
        assert!(PiecewiseCurve::new(vec![a, c], true).is_err());
    }
}
