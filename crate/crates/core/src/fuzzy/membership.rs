use serde::{Deserialize, Serialize};

use super::FuzzyError;

/// Trapezoidal membership function with breakpoints `a <= b <= c <= d`.
///
/// Degenerate shapes are allowed: `a == b` gives a vertical left edge,
/// `c == d` a vertical right edge and `b == c` a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct TrapezoidMf {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl TrapezoidMf {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, FuzzyError> {
        let finite = [a, b, c, d].iter().all(|v| v.is_finite());
        if !finite || !(a <= b && b <= c && c <= d) {
            return Err(FuzzyError::InvalidMembership { a, b, c, d });
        }
        Ok(Self { a, b, c, d })
    }

    pub fn breakpoints(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Degree of membership of `x`, always in `[0, 1]`.
    #[inline]
    pub fn membership(&self, x: f64) -> f64 {
        if x < self.a || x > self.d {
            0.0
        } else if x < self.b {
            (x - self.a) / (self.b - self.a)
        } else if x <= self.c {
            1.0
        } else {
            (self.d - x) / (self.d - self.c)
        }
    }

    /// Closed-form centroid of the full (unclipped) trapezoid.
    pub fn centroid(&self) -> f64 {
        let [a, b, c, d] = self.breakpoints();
        // Split into rising triangle, plateau rectangle and falling triangle.
        let parts = [
            ((b - a) / 2.0, a + 2.0 * (b - a) / 3.0),
            (c - b, (b + c) / 2.0),
            ((d - c) / 2.0, c + (d - c) / 3.0),
        ];
        let area: f64 = parts.iter().map(|p| p.0).sum();
        if area == 0.0 {
            return (a + d) / 2.0;
        }
        parts.iter().map(|(w, x)| w * x).sum::<f64>() / area
    }

    /// Where `membership(x) > 0`, as `(lo, lo_closed, hi, hi_closed)`.
    pub(crate) fn support(&self) -> (f64, bool, f64, bool) {
        (self.a, self.a == self.b, self.d, self.c == self.d)
    }
}

impl TryFrom<[f64; 4]> for TrapezoidMf {
    type Error = FuzzyError;

    fn try_from(v: [f64; 4]) -> Result<Self, Self::Error> {
        Self::new(v[0], v[1], v[2], v[3])
    }
}

impl From<TrapezoidMf> for [f64; 4] {
    fn from(mf: TrapezoidMf) -> Self {
        mf.breakpoints()
    }
}
