use std::fmt;

use crate::curve::{CurveSource, Side};
use crate::jet::CurveJet;
use crate::{Error, Result, Vec3};

type PositionFn = dyn Fn(f64) -> Vec3 + Send + Sync;

/// A curve known only through its position map. All derivatives come from
/// the finite-difference fallback in [`derivative`](crate::curve::derivative).
pub struct FnCurve {
    f: Box<PositionFn>,
    closed: bool,
    breaks: Vec<f64>,
}

impl FnCurve {
    pub fn new(
        f: impl Fn(f64) -> Vec3 + Send + Sync + 'static,
        closed: bool,
        breakpoints: Vec<f64>,
    ) -> Result<Self> {
        let ordered = breakpoints.windows(2).all(|w| w[0] < w[1]);
        let inside = breakpoints.iter().all(|&b| b > 0.0 && b < 1.0);
        if !ordered || !inside {
            return Err(Error::BadParams(format!("breakpoints {breakpoints:?}")));
        }
        Ok(FnCurve {
            f: Box::new(f),
            closed,
            breaks: breakpoints,
        })
    }
}

impl fmt::Debug for FnCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnCurve")
            .field("closed", &self.closed)
            .field("breakpoints", &self.breaks)
            .finish()
    }
}

impl CurveSource for FnCurve {
    fn position(&self, t: f64) -> Vec3 {
        (self.f)(t)
    }

    fn jet(&self, t: f64, _side: Side) -> CurveJet {
        CurveJet::value_only((self.f)(t))
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breaks.clone()
    }

    fn is_closed(&self) -> bool {
        self.closed
    }

    fn label(&self) -> String {
        "fn".into()
    }
}
