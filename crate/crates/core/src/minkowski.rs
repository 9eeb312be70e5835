//! Flat two-dimensional Minkowski space: events, the causal order and the
//! Lorentzian length (proper time) of piecewise-linear causal curves.
//!
//! Signature is `(−, +)` with coordinates `(t, x)`; a displacement is
//! future-directed causal when `Δt ≥ |Δx|`.

use alloc::vec::Vec;

use libm::{fabs, sqrt};

use crate::tol;
use crate::{Error, Result};

/// An event of `R^{1,1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: f64,
}

impl SpacetimePoint {
    pub fn new(t: f64, x: f64) -> Result<Self> {
        if !t.is_finite() || !x.is_finite() {
            return Err(Error::NonFinite("spacetime point"));
        }
        Ok(Self { t, x })
    }

    pub const fn origin() -> Self {
        Self { t: 0.0, x: 0.0 }
    }

    /// Equality within [`tol::POINT_EQ`].
    pub fn approx_eq(&self, other: &Self) -> bool {
        fabs(self.t - other.t) <= tol::POINT_EQ && fabs(self.x - other.x) <= tol::POINT_EQ
    }

    /// Affine interpolation `self + s·(other − self)`.
    pub fn lerp(&self, other: &Self, s: f64) -> Self {
        Self {
            t: self.t + s * (other.t - self.t),
            x: self.x + s * (other.x - self.x),
        }
    }
}

fn is_causal_displacement(dt: f64, dx: f64) -> bool {
    dt >= fabs(dx) - tol::CAUSAL_SLACK * fabs(dt).max(1.0)
}

/// The causal order of flat Minkowski space: `p ⪯ q` iff `q − p` is
/// future-directed causal or zero.
///
/// Lightlike displacements computed in floating point are accepted up to the
/// relative slack [`tol::CAUSAL_SLACK`].
pub fn causally_precedes(p: SpacetimePoint, q: SpacetimePoint) -> bool {
    let dt = q.t - p.t;
    let dx = q.x - p.x;
    dt >= -tol::POINT_EQ && is_causal_displacement(dt, dx)
}

/// Proper time of the straight segment between two events, `√(Δt² − Δx²)`,
/// clamped at zero for (numerically) null separations.
fn segment_proper_time(dt: f64, dx: f64) -> f64 {
    let s = (dt - dx) * (dt + dx);
    if s > 0.0 {
        sqrt(s)
    } else {
        0.0
    }
}

/// Supremum of the proper time over causal curves from `p` to `q`.
///
/// In flat space the straight segment is the maximiser (reverse triangle
/// inequality), so this is `√(Δt² − Δx²)`.
pub fn max_proper_time(p: SpacetimePoint, q: SpacetimePoint) -> Result<f64> {
    if !causally_precedes(p, q) {
        return Err(Error::NotCausallyOrdered { from: p, to: q });
    }
    Ok(segment_proper_time(q.t - p.t, q.x - p.x))
}

/// One sample of a curve: parameter value and event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub s: f64,
    pub point: SpacetimePoint,
}

/// A future-directed piecewise-linear causal curve.
///
/// Parameters are strictly increasing and every segment satisfies
/// `Δt > 0`, `Δt ≥ |Δx|` (within [`tol::CAUSAL_SLACK`]).
#[derive(Debug, Clone, PartialEq)]
pub struct CausalCurve {
    samples: Vec<CurveSample>,
}

impl CausalCurve {
    pub fn new(samples: Vec<CurveSample>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::CurveTooShort);
        }
        for (index, w) in samples.windows(2).enumerate() {
            let (a, b) = (w[0], w[1]);
            if !a.s.is_finite() || !b.s.is_finite() {
                return Err(Error::NonFinite("curve parameter"));
            }
            SpacetimePoint::new(b.point.t, b.point.x)?;
            SpacetimePoint::new(a.point.t, a.point.x)?;
            if b.s <= a.s {
                return Err(Error::NonIncreasingParameter { index });
            }
            let dt = b.point.t - a.point.t;
            let dx = b.point.x - a.point.x;
            if dt <= 0.0 || !is_causal_displacement(dt, dx) {
                return Err(Error::NonCausalSegment { index });
            }
        }
        Ok(Self { samples })
    }

    /// Build from `(s, t, x)` triples.
    pub fn from_triples(triples: &[[f64; 3]]) -> Result<Self> {
        Self::new(
            triples
                .iter()
                .map(|&[s, t, x]| CurveSample {
                    s,
                    point: SpacetimePoint { t, x },
                })
                .collect(),
        )
    }

    /// The straight segment from `p` to `q`, parameterised by `s ∈ [0, 1]`.
    pub fn straight(p: SpacetimePoint, q: SpacetimePoint) -> Result<Self> {
        Self::new(alloc::vec![
            CurveSample { s: 0.0, point: p },
            CurveSample { s: 1.0, point: q },
        ])
    }

    pub fn samples(&self) -> &[CurveSample] {
        &self.samples
    }

    pub fn to_triples(&self) -> Vec<[f64; 3]> {
        self.samples
            .iter()
            .map(|c| [c.s, c.point.t, c.point.x])
            .collect()
    }

    pub fn start(&self) -> SpacetimePoint {
        self.samples[0].point
    }

    pub fn end(&self) -> SpacetimePoint {
        self.samples[self.samples.len() - 1].point
    }

    pub fn parameter_range(&self) -> (f64, f64) {
        (self.samples[0].s, self.samples[self.samples.len() - 1].s)
    }

    pub fn segment_count(&self) -> usize {
        self.samples.len() - 1
    }

    /// Endpoints of segment `i`.
    pub fn segment(&self, i: usize) -> (CurveSample, CurveSample) {
        (self.samples[i], self.samples[i + 1])
    }

    /// Total proper time, exact for polylines.
    pub fn proper_time(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| segment_proper_time(w[1].point.t - w[0].point.t, w[1].point.x - w[0].point.x))
            .sum()
    }

    /// Index of the segment containing parameter `s` (clamped to the range).
    pub fn segment_index(&self, s: f64) -> usize {
        let n = self.segment_count();
        // first segment whose upper parameter is >= s
        let idx = self.samples[1..].partition_point(|c| c.s < s);
        idx.min(n - 1)
    }

    /// Event at parameter `s` (clamped to the parameter range).
    pub fn point_at(&self, s: f64) -> SpacetimePoint {
        let i = self.segment_index(s);
        let (a, b) = self.segment(i);
        let u = ((s - a.s) / (b.s - a.s)).clamp(0.0, 1.0);
        a.point.lerp(&b.point, u)
    }

    /// Proper time of the restriction of the curve to parameters `≤ s`.
    pub fn proper_time_until(&self, s: f64) -> f64 {
        let i = self.segment_index(s);
        let mut acc = 0.0;
        for w in self.samples[..=i].windows(2) {
            acc += segment_proper_time(w[1].point.t - w[0].point.t, w[1].point.x - w[0].point.x);
        }
        let (a, _) = self.segment(i);
        let here = self.point_at(s);
        acc + segment_proper_time(here.t - a.point.t, here.x - a.point.x)
    }

    /// Velocity `dx/dt` on segment `i`.
    pub fn segment_velocity(&self, i: usize) -> f64 {
        let (a, b) = self.segment(i);
        (b.point.x - a.point.x) / (b.point.t - a.point.t)
    }

    /// Concatenate with a curve that starts where this one ends. The
    /// parameters of `other` are shifted to continue this curve's range.
    pub fn concat(&self, other: &CausalCurve) -> Result<Self> {
        if !self.end().approx_eq(&other.start()) {
            return Err(Error::NotCausallyOrdered {
                from: self.end(),
                to: other.start(),
            });
        }
        let shift = self.parameter_range().1 - other.parameter_range().0;
        let mut samples = self.samples.clone();
        samples.extend(other.samples[1..].iter().map(|c| CurveSample {
            s: c.s + shift,
            point: c.point,
        }));
        Self::new(samples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pt(t: f64, x: f64) -> SpacetimePoint {
        SpacetimePoint::new(t, x).unwrap()
    }

    #[test]
    fn causal_order_examples() {
        assert!(causally_precedes(pt(0.0, 0.0), pt(1.0, 0.0)));
        assert!(!causally_precedes(pt(0.0, 0.0), pt(0.0, 1.0)));
        assert!(causally_precedes(pt(0.0, 0.0), pt(1.0, 1.0)));
        assert!(!causally_precedes(pt(1.0, 0.0), pt(0.0, 0.0)));
        assert!(causally_precedes(pt(0.3, 0.2), pt(0.3, 0.2)));
    }

    #[test]
    fn rejects_non_finite_points() {
        assert!(SpacetimePoint::new(f64::NAN, 0.0).is_err());
        assert!(SpacetimePoint::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn proper_time_examples() {
        let rest = CausalCurve::straight(pt(0.0, 0.0), pt(2.0, 0.0)).unwrap();
        assert_abs_diff_eq!(rest.proper_time(), 2.0);
        let null = CausalCurve::straight(pt(0.0, 0.0), pt(1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(null.proper_time(), 0.0);
        let bent = CausalCurve::from_triples(&[[0.0, 0.0, 0.0], [1.0, 1.0, 0.5], [2.0, 2.0, 0.0]]).unwrap();
        assert_abs_diff_eq!(bent.proper_time(), 2.0 * sqrt(0.75), epsilon = 1e-15);
        assert_abs_diff_eq!(bent.proper_time(), 1.7320508075688772, epsilon = 1e-12);
    }

    #[test]
    fn curve_validation() {
        assert_eq!(
            CausalCurve::from_triples(&[[0.0, 0.0, 0.0], [1.0, 1.0, 2.0]]),
            Err(Error::NonCausalSegment { index: 0 })
        );
        assert_eq!(
            CausalCurve::from_triples(&[[0.0, 0.0, 0.0], [0.0, 1.0, 0.0]]),
            Err(Error::NonIncreasingParameter { index: 0 })
        );
        assert_eq!(
            CausalCurve::from_triples(&[[0.0, 0.0, 0.0]]),
            Err(Error::CurveTooShort)
        );
        // past-directed
        assert!(CausalCurve::from_triples(&[[0.0, 1.0, 0.0], [1.0, 0.0, 0.0]]).is_err());
        // lightlike entered at floating point precision
        let third = 1.0 / 3.0;
        assert!(CausalCurve::from_triples(&[[0.0, 0.0, 0.0], [1.0, third, third * (1.0 + 1e-15)]]).is_ok());
    }

    #[test]
    fn max_proper_time_examples() {
        assert_abs_diff_eq!(max_proper_time(pt(0.0, 0.0), pt(2.0, 0.0)).unwrap(), 2.0);
        assert_abs_diff_eq!(max_proper_time(pt(0.0, 0.0), pt(1.0, 1.0)).unwrap(), 0.0);
        assert_abs_diff_eq!(max_proper_time(pt(0.0, 0.0), pt(5.0, 3.0)).unwrap(), 4.0);
        assert!(max_proper_time(pt(0.0, 0.0), pt(0.0, 1.0)).is_err());
    }

    #[test]
    fn straight_line_maximises_over_random_polylines() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let (p, q) = (pt(0.0, 0.0), pt(5.0, 3.0));
        let mut best = 0.0_f64;
        for _ in 0..2000 {
            // random intermediate events inside the causal diamond
            let k = rng.random_range(1..6);
            let mut ts: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..5.0)).collect();
            ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut pts = alloc::vec![[0.0, 0.0, 0.0]];
            let mut prev = (0.0, 0.0);
            let mut ok = true;
            for (i, &t) in ts.iter().enumerate() {
                // stay inside J+(prev) ∩ J-(q)
                let lo = (prev.1 - (t - prev.0)).max(3.0 - (5.0 - t));
                let hi = (prev.1 + (t - prev.0)).min(3.0 + (5.0 - t));
                if lo > hi || t <= prev.0 {
                    ok = false;
                    break;
                }
                let x = rng.random_range(lo..=hi);
                pts.push([(i + 1) as f64, t, x]);
                prev = (t, x);
            }
            pts.push([(k + 1) as f64, 5.0, 3.0]);
            if !ok {
                continue;
            }
            if let Ok(c) = CausalCurve::from_triples(&pts) {
                let l = c.proper_time();
                assert!(l <= 4.0 + 1e-12, "{l}");
                best = best.max(l);
            }
        }
        assert!(best > 3.0);
        assert_abs_diff_eq!(CausalCurve::straight(p, q).unwrap().proper_time(), 4.0);
    }

    #[test]
    fn restriction_and_interpolation() {
        let c = CausalCurve::from_triples(&[[0.0, 0.0, 0.0], [1.0, 1.0, 0.5], [3.0, 2.0, 0.0]]).unwrap();
        assert_abs_diff_eq!(c.proper_time_until(0.0), 0.0);
        assert_abs_diff_eq!(c.proper_time_until(3.0), c.proper_time(), epsilon = 1e-15);
        assert_abs_diff_eq!(c.proper_time_until(1.0), sqrt(0.75), epsilon = 1e-15);
        let mid = c.point_at(2.0);
        assert_abs_diff_eq!(mid.t, 1.5);
        assert_abs_diff_eq!(mid.x, 0.25);
        assert_eq!(c.segment_index(0.5), 0);
        assert_eq!(c.segment_index(1.0), 0);
        assert_eq!(c.segment_index(1.5), 1);
    }

    #[test]
    fn concatenation_is_additive() {
        let a = CausalCurve::from_triples(&[[0.0, 0.0, 0.0], [1.0, 1.0, 0.5]]).unwrap();
        let b = CausalCurve::from_triples(&[[5.0, 1.0, 0.5], [6.0, 3.0, -0.5]]).unwrap();
        let ab = a.concat(&b).unwrap();
        assert_abs_diff_eq!(ab.proper_time(), a.proper_time() + b.proper_time(), epsilon = 1e-14);
        assert_eq!(ab.parameter_range(), (0.0, 2.0));
        assert!(b.concat(&a).is_err());
    }
}
