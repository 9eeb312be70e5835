//! Closed-form causal verdicts between product states.
//!
//! For pure states `(p, ξ)` and `(q, φ)` with a non-degenerate gap
//! `d = |d1 − d2|`, the second follows the first iff `p ⪯ q`, both internal
//! states lie on the same parallel of the Bloch sphere, and the longest
//! causal curve from `p` to `q` has proper time at least `|θ_φ − θ_ξ| / d`.
//! Internal motion is therefore bounded by `d` per unit proper time, and
//! along a null curve no internal motion is possible at all.
//!
//! The boundary case of equality counts as related. Pole states are fixed
//! points of the internal motion. When `d = 0` no internal motion is allowed.
//!
//! For the mixed states `(p, ρ)` the angular distance is replaced by a
//! supremum over an auxiliary angle, computed numerically.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use libm::{atan2, cos, fabs, sin, sqrt};

use crate::minkowski::{causally_precedes, max_proper_time, SpacetimePoint};
use crate::states::{
    angular_distance, signed_angle_difference, DiracData, DiracMatrix, InternalUnitary, MixedInternalState,
    PureInternalState,
};
use crate::tol;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState {
    pub point: SpacetimePoint,
    pub internal: PureInternalState,
}

impl PureState {
    pub fn new(point: SpacetimePoint, internal: PureInternalState) -> Self {
        Self { point, internal }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedState {
    pub point: SpacetimePoint,
    pub internal: MixedInternalState,
}

impl MixedState {
    pub fn new(point: SpacetimePoint, internal: MixedInternalState) -> Self {
        Self { point, internal }
    }
}

/// Which branch decided a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reason {
    /// The events are not causally ordered.
    SpacetimeOrder,
    /// The internal states lie on different parallels.
    LatitudeMismatch,
    /// Not enough proper time to cover the internal angle.
    SpeedBound,
    /// Degenerate Dirac data forbid any change of internal state.
    DegenerateInternalChange,
    Ok,
}

impl Reason {
    /// Stable upper-case name used in serialised verdicts.
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::SpacetimeOrder => "SPACETIME_ORDER",
            Reason::LatitudeMismatch => "LATITUDE_MISMATCH",
            Reason::SpeedBound => "SPEED_BOUND",
            Reason::DegenerateInternalChange => "DEGENERATE_INTERNAL_CHANGE",
            Reason::Ok => "OK",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausalVerdict {
    pub related: bool,
    pub reason: Reason,
    /// Proper time needed for the internal motion.
    pub bound_required: Option<f64>,
    /// Longest proper time from the first event to the second.
    pub bound_available: Option<f64>,
}

impl CausalVerdict {
    fn refused(reason: Reason) -> Self {
        Self {
            related: false,
            reason,
            bound_required: None,
            bound_available: None,
        }
    }

    fn bounded(required: f64, available: f64) -> Self {
        let related = available >= required - tol::BOUND;
        Self {
            related,
            reason: if related { Reason::Ok } else { Reason::SpeedBound },
            bound_required: Some(required),
            bound_available: Some(available),
        }
    }
}

/// Available proper time, or `None` when `p ⋠ q`.
fn available_time(p: SpacetimePoint, q: SpacetimePoint) -> Option<f64> {
    if causally_precedes(p, q) {
        max_proper_time(p, q).ok()
    } else {
        None
    }
}

/// Causal verdict between pure product states for diagonal Dirac data.
pub fn pure_causal(omega: &PureState, eta: &PureState, dirac: DiracData) -> CausalVerdict {
    let Some(available) = available_time(omega.point, eta.point) else {
        return CausalVerdict::refused(Reason::SpacetimeOrder);
    };
    let (xi, phi) = (&omega.internal, &eta.internal);
    if dirac.is_degenerate() {
        return if xi.approx_eq(phi) {
            CausalVerdict::bounded(0.0, available)
        } else {
            CausalVerdict::refused(Reason::DegenerateInternalChange)
        };
    }
    if fabs(xi.latitude() - phi.latitude()) > tol::LATITUDE {
        return CausalVerdict::refused(Reason::LatitudeMismatch);
    }
    let (Ok(a), Ok(b)) = (xi.parallel_angle(), phi.parallel_angle()) else {
        // on a pole, and the latitudes agree: both states are that pole
        return CausalVerdict::bounded(0.0, available);
    };
    CausalVerdict::bounded(angular_distance(a, b) / dirac.gap(), available)
}

/// Causal verdict for Dirac data given as an arbitrary Hermitian matrix.
///
/// The matrix is diagonalised as `V diag(d1, d2) V*`; in the eigenbasis the
/// states become `V* ξ`, where the diagonal criterion applies.
pub fn pure_causal_general(omega: &PureState, eta: &PureState, dirac: &DiracMatrix) -> CausalVerdict {
    let (diag, v) = dirac.diagonalize();
    let back = v.adjoint();
    let omega = PureState::new(omega.point, back.apply(&omega.internal));
    let eta = PureState::new(eta.point, back.apply(&eta.internal));
    pure_causal(&omega, &eta, diag)
}

/// Whether the verdict is unchanged when both internal states are moved by
/// `U` and the Dirac data by `U D U*`. Always true; exposed as a self-test.
pub fn unitary_transport_check(
    omega: &PureState,
    eta: &PureState,
    u: &InternalUnitary,
    dirac: DiracData,
) -> bool {
    let direct = pure_causal(omega, eta, dirac);
    let moved_dirac = dirac.matrix().conjugated(u);
    let moved_omega = PureState::new(omega.point, u.apply(&omega.internal));
    let moved_eta = PureState::new(eta.point, u.apply(&eta.internal));
    let rotated = pure_causal_general(&moved_omega, &moved_eta, &moved_dirac);
    direct.related == rotated.related
}

/// Supremum of the auxiliary-angle objective for mixed states, and where it
/// is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSup {
    pub angle: f64,
    /// Maximising auxiliary angle `θ ∈ [0, 2π)`.
    pub theta: f64,
    /// `arccos(r/√(1−z²)·cos(θ_r + θ))` at the maximiser.
    pub theta_r: f64,
    /// `arccos(s/√(1−z²)·cos(θ_s + θ))` at the maximiser.
    pub theta_s: f64,
}

/// Projection of a mixed state onto its parallel: `(r/√(1−z²), θ_r)`.
fn parallel_coords(rho: &MixedInternalState, radius: f64) -> (f64, f64) {
    let r = rho.parallel_radius();
    let ratio = if radius > 0.0 { (r / radius).clamp(0.0, 1.0) } else { 0.0 };
    (ratio, if r > 0.0 { rho.parallel_angle() } else { 0.0 })
}

const SCAN_SAMPLES: usize = 4096;

/// `arccos(ρ cos φ)` through `atan2`, which keeps full precision where the
/// cosine is near ±1.
fn polar_angle(rho: f64, phi: f64) -> f64 {
    let c = rho * cos(phi);
    let s = sqrt(((1.0 - rho) * (1.0 + rho)).max(0.0) + (rho * sin(phi)) * (rho * sin(phi)));
    atan2(s, c)
}

/// `sup_θ |arccos(s̃ cos(θ_s+θ)) − arccos(r̃ cos(θ_r+θ))|` with
/// `r̃ = r/√(1−z²)`, `s̃ = s/√(1−z²)`, for `ρ` and `σ` on a common
/// latitude `z`.
///
/// A dense scan over `θ` brackets the maximiser, which golden-section search
/// then refines to [`tol::SUP_ANGLE`].
pub fn mixed_required_angle_sup(rho: &MixedInternalState, sigma: &MixedInternalState) -> Result<AngleSup> {
    let (zr, zs) = (rho.latitude(), sigma.latitude());
    if fabs(zr - zs) > tol::LATITUDE {
        return Err(Error::LatitudeMismatch(zr, zs));
    }
    let z = 0.5 * (zr + zs);
    if 1.0 - fabs(z) <= tol::POLE {
        return if rho.approx_eq(sigma) {
            Ok(AngleSup {
                angle: 0.0,
                theta: 0.0,
                theta_r: 0.0,
                theta_s: 0.0,
            })
        } else {
            Err(Error::Pole)
        };
    }
    let radius = sqrt(1.0 - z * z);
    let (rr, ar) = parallel_coords(rho, radius);
    let (ss, as_) = parallel_coords(sigma, radius);
    let parts = |th: f64| {
        (polar_angle(rr, ar + th), polar_angle(ss, as_ + th))
    };
    let f = |th: f64| {
        let (tr, ts) = parts(th);
        fabs(ts - tr)
    };

    let step = TAU / SCAN_SAMPLES as f64;
    let (mut best_k, mut best) = (0, f(0.0));
    for k in 1..SCAN_SAMPLES {
        let v = f(k as f64 * step);
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let centre = best_k as f64 * step;
    let (mut lo, mut hi) = (centre - step, centre + step);
    let g = 0.5 * (sqrt(5.0) - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol::SUP_ANGLE {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    let mut theta = centre;
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best {
            best = v;
            theta = x;
        }
    }
    let theta = libm::fmod(theta, TAU);
    let theta = if theta < 0.0 { theta + TAU } else { theta };
    let (theta_r, theta_s) = parts(theta);
    Ok(AngleSup {
        angle: best.min(PI),
        theta,
        theta_r,
        theta_s,
    })
}

/// The internal angle a mixed state must cover; see [`mixed_required_angle_sup`].
pub fn mixed_required_angle(rho: &MixedInternalState, sigma: &MixedInternalState) -> Result<f64> {
    mixed_required_angle_sup(rho, sigma).map(|s| s.angle)
}

/// Causal verdict between mixed product states.
pub fn mixed_causal(omega: &MixedState, eta: &MixedState, dirac: DiracData) -> CausalVerdict {
    let Some(available) = available_time(omega.point, eta.point) else {
        return CausalVerdict::refused(Reason::SpacetimeOrder);
    };
    let (rho, sigma) = (&omega.internal, &eta.internal);
    if dirac.is_degenerate() {
        return if rho.approx_eq(sigma) {
            CausalVerdict::bounded(0.0, available)
        } else {
            CausalVerdict::refused(Reason::DegenerateInternalChange)
        };
    }
    if fabs(rho.latitude() - sigma.latitude()) > tol::LATITUDE {
        return CausalVerdict::refused(Reason::LatitudeMismatch);
    }
    match mixed_required_angle(rho, sigma) {
        Ok(angle) => CausalVerdict::bounded(angle / dirac.gap(), available),
        // distinct states at a pole latitude cannot exist within tolerance;
        // treat the residual as a change of parallel
        Err(_) => CausalVerdict::refused(Reason::LatitudeMismatch),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSample {
    pub s: f64,
    pub point: SpacetimePoint,
    pub internal: PureInternalState,
}

/// A feasible trajectory from `ω` to `η`: the straight segment from `p` to
/// `q` at constant velocity, with the internal angle advancing at the
/// maximal rate `d` per unit proper time until it reaches `θ_φ` and holding
/// afterwards. Returns `n + 1` samples at `s = k/n`.
pub fn plan_causal_path(omega: &PureState, eta: &PureState, dirac: DiracData, n: usize) -> Result<Vec<PathSample>> {
    if n == 0 {
        return Err(Error::Config("path needs at least one step"));
    }
    if !pure_causal(omega, eta, dirac).related {
        return Err(Error::NotRelated);
    }
    let (p, q) = (omega.point, eta.point);
    let total = max_proper_time(p, q)?;
    let (xi, phi) = (omega.internal, eta.internal);
    let motion = match (xi.parallel_angle(), phi.parallel_angle()) {
        (Ok(a), Ok(b)) if !dirac.is_degenerate() => Some((a, signed_angle_difference(a, b))),
        _ => None,
    };
    let z = xi.latitude();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let s = k as f64 / n as f64;
        let internal = if k == n {
            phi
        } else {
            match motion {
                Some((theta0, delta)) if delta != 0.0 => {
                    let advance = (dirac.gap() * s * total).min(fabs(delta));
                    PureInternalState::from_latitude_angle(z, theta0 + delta.signum() * advance)?
                }
                _ => xi,
            }
        };
        let point = if k == n { q } else { p.lerp(&q, s) };
        out.push(PathSample { s, point, internal });
    }
    Ok(out)
}
