//! Separating causal elements for pairs of states that are not causally
//! related although their events are.
//!
//! Along a timelike curve `γ` from `p` to `q` the element is
//!
//! ```text
//! c(γ(t)) = −csc Θ(t) · e^{iθ_c},      Θ(t) = d·l_γ(t) + ε,
//! a(γ(t)) = (|φ2|/|φ1|)(cot ε − cot Θ(t)),
//! b(γ(t)) = (|φ1|/|φ2|)(cot ε − cot Θ(t)),
//! ```
//!
//! with first partials chosen so that the directional derivative of `c` is
//! maximal along `γ`. At every point of `γ` its cone matrix has a kernel
//! and non-negative characteristic coefficients, and at the endpoints it
//! satisfies `η(a) < ω(a)` whenever `l(γ) < |Δθ|/d`. The element is only
//! constructed on `γ`; any smooth extension off the curve serves.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{cos, fabs, sin, sqrt, tan};

use crate::causality::{
    mixed_causal, mixed_required_angle_sup, pure_causal, AngleSup, MixedState, PureState, Reason,
};
use crate::cone::{cone_matrix_from_jet, ElementJet, ElementValue};
use crate::linalg::{self, Mat4};
use crate::minkowski::{max_proper_time, CausalCurve, SpacetimePoint};
use crate::oracle::{mixed_pairing, pure_pairing, Observable};
use crate::states::{signed_angle_difference, DiracData, MixedInternalState, PureInternalState};
use crate::tol;
use crate::{Complex64, Error, Result};

/// Number of curve samples used by the refutation certificates.
pub const CERTIFICATE_SAMPLES: usize = 64;

/// Simpson panels per curve segment for the numeric route to `lhs`.
pub const SIMPSON_PANELS: usize = 64;
/// Relative local error target of the adaptive quadrature.
const SIMPSON_TOL: f64 = 1e-13;

/// The states a witness separates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WitnessTarget {
    Pure {
        from: PureInternalState,
        to: PureInternalState,
        /// Signed shortest rotation from `θ_ξ` to `θ_φ`.
        delta_theta: f64,
    },
    Mixed {
        from: MixedInternalState,
        to: MixedInternalState,
        /// Auxiliary angle at which the mixed separation is built.
        aux: AngleSup,
    },
}

/// A fully specified witness along a curve.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSpec {
    pub epsilon: f64,
    pub theta_c: f64,
    pub curve: CausalCurve,
    pub dirac: DiracData,
    /// `(|φ1|, |φ2|)` normalised to `|φ1|² + |φ2|² = 1`.
    pub phi_abs: [f64; 2],
    pub target: WitnessTarget,
}

impl WitnessSpec {
    fn new(
        epsilon: f64,
        theta_c: f64,
        curve: CausalCurve,
        dirac: DiracData,
        z: f64,
        target: WitnessTarget,
    ) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < PI) {
            return Err(Error::WitnessPrecondition("ε must lie in (0, π)"));
        }
        for i in 0..curve.segment_count() {
            if fabs(curve.segment_velocity(i)) >= 1.0 {
                return Err(Error::WitnessPrecondition("the curve must be timelike on every segment"));
            }
        }
        let spec = Self {
            epsilon,
            theta_c,
            curve,
            dirac,
            phi_abs: [sqrt(0.5 * (1.0 + z)), sqrt(0.5 * (1.0 - z))],
            target,
        };
        if !(spec.final_theta() < PI) {
            return Err(Error::WitnessPrecondition("schedule Θ leaves (0, π) along the curve"));
        }
        Ok(spec)
    }

    pub fn gap(&self) -> f64 {
        self.dirac.gap()
    }

    /// `Θ(s) = d·l_γ(s) + ε`.
    pub fn theta_at(&self, s: f64) -> f64 {
        self.gap() * self.curve.proper_time_until(s) + self.epsilon
    }

    /// `Θ` at the end of the curve.
    pub fn final_theta(&self) -> f64 {
        self.gap() * self.curve.proper_time() + self.epsilon
    }

    /// `|φ2| / |φ1|`.
    fn ratio(&self) -> f64 {
        self.phi_abs[1] / self.phi_abs[0]
    }

    /// Weight of the diagonal terms in the state pairing: 1 for pure states,
    /// 2 for the Bloch-ball normalisation `Tr ρ = 1` with `|φ|² = 1 ± z`.
    fn pairing_weight(&self) -> f64 {
        match self.target {
            WitnessTarget::Pure { .. } => 1.0,
            WitnessTarget::Mixed { .. } => 2.0,
        }
    }

    fn phase(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta_c)
    }

    pub fn value_on_curve(&self, s: f64) -> ElementValue {
        let th = self.theta_at(s);
        let rise = 1.0 / tan(self.epsilon) - 1.0 / tan(th);
        ElementValue {
            a: self.ratio() * rise,
            b: rise / self.ratio(),
            c: -self.phase() / sin(th),
        }
    }

    /// Value and the partials of the construction at curve parameter `s`.
    pub fn jet_on_curve(&self, s: f64) -> ElementJet {
        self.jet_on_segment(self.curve.segment_index(s), s)
    }

    /// As [`Self::jet_on_curve`], with the velocity taken from segment `i`.
    fn jet_on_segment(&self, i: usize, s: f64) -> ElementJet {
        let (l1, l2) = lambdas(self.curve.segment_velocity(i));
        let th = self.theta_at(s);
        let d = self.gap();
        let csc2 = 1.0 / (sin(th) * sin(th));
        let (up, down) = (sqrt(l2 / l1), sqrt(l1 / l2));
        let r = self.ratio();
        let split = |plus: f64, minus: f64| (0.5 * (plus + minus), 0.5 * (plus - minus));
        let (a0, a1) = split(d * up * r * csc2, d * down * r * csc2);
        let (b0, b1) = split(d * up / r * csc2, d * down / r * csc2);
        let k = self.phase() * (d * cos(th) * csc2);
        let (cp, cm) = (k * up, k * down);
        let v = self.value_on_curve(s);
        ElementJet {
            a: [v.a, a0, a1],
            b: [v.b, b0, b1],
            c: [v.c, (cp + cm) * 0.5, (cp - cm) * 0.5],
        }
    }

    /// The matrix written out entrywise in terms of `Θ`, `λ1`, `λ2`, `θ_c`,
    /// with the opposite sign convention for `c_{,0} ± c_{,1}`. It is
    /// unitarily similar to [`Self::cone_matrix_on_curve`] through
    /// `diag(1, −1, −1, 1)`, so the two share their spectrum.
    pub fn reference_matrix(&self, s: f64) -> Mat4 {
        let i = self.curve.segment_index(s);
        let (l1, l2) = lambdas(self.curve.segment_velocity(i));
        let th = self.theta_at(s);
        let (up, down) = (sqrt(l2 / l1), sqrt(l1 / l2));
        let r = self.ratio();
        let scale = self.gap() / (sin(th) * sin(th));
        let e = self.phase();
        let sign = if self.dirac.signed_gap() >= 0.0 { 1.0 } else { -1.0 };
        let re = |x: f64| Complex64::new(x, 0.0);
        let z = re(0.0);
        let cs = cos(th);
        let sn = sin(th);
        let m = [
            [re(up * r), z, e * (up * cs), e * (sign * sn)],
            [z, re(down * r), e * (-sign * sn), e * (down * cs)],
            [e.conj() * (up * cs), e.conj() * (-sign * sn), re(up / r), z],
            [e.conj() * (sign * sn), e.conj() * (down * cs), z, re(down / r)],
        ];
        m.map(|row| row.map(|x| x * scale))
    }

    pub fn cone_matrix_on_curve(&self, s: f64) -> Mat4 {
        cone_matrix_from_jet(&self.jet_on_curve(s), self.dirac).m
    }

    /// `(c1, c2)` from the closed forms in `Θ`, `λ1`, `λ2`, `|φ1|`, `|φ2|`.
    pub fn closed_form_coefficients(&self, s: f64) -> [f64; 2] {
        let i = self.curve.segment_index(s);
        let (l1, l2) = lambdas(self.curve.segment_velocity(i));
        let th = self.theta_at(s);
        let d = self.gap();
        let csc2 = 1.0 / (sin(th) * sin(th));
        let [p1, p2] = self.phi_abs;
        let pp = p1 * p1 * p2 * p2;
        let ll = l1 * l2;
        let c1 = d * csc2 / (sqrt(ll) * p1 * p2);
        let c2 = d * d * csc2 * csc2 * (pp * (l2 - l1) * (l2 - l1) * sin(th) * sin(th) + ll) / (ll * pp);
        [c1, c2]
    }
}

fn lambdas(v: f64) -> (f64, f64) {
    (0.5 * (1.0 + v), 0.5 * (1.0 - v))
}

fn check_curve_endpoints(curve: &CausalCurve, p: SpacetimePoint, q: SpacetimePoint) -> Result<()> {
    if !curve.start().approx_eq(&p) || !curve.end().approx_eq(&q) {
        return Err(Error::WitnessPrecondition("the curve must run from the first event to the second"));
    }
    Ok(())
}

fn refusal_reason(reason: Reason) -> Error {
    match reason {
        Reason::Ok => Error::Related,
        Reason::SpacetimeOrder => Error::WitnessPrecondition("events are not causally ordered"),
        Reason::LatitudeMismatch => Error::WitnessPrecondition("states lie on different parallels"),
        Reason::DegenerateInternalChange => Error::WitnessPrecondition("Dirac data are degenerate"),
        Reason::SpeedBound => Error::WitnessPrecondition("unexpected speed-bound verdict"),
    }
}

/// Build the witness on the straight segment with the default
/// `ε = (π − |Δθ|)/2`.
pub fn build_witness(omega: &PureState, eta: &PureState, dirac: DiracData) -> Result<WitnessSpec> {
    build_witness_with(omega, eta, dirac, None, None)
}

/// Build the witness on a caller-supplied curve and/or with a chosen `ε`.
/// The curve must run from `p` to `q` and be timelike on every segment;
/// `ε` must satisfy `0 < ε < π − |Δθ|`.
pub fn build_witness_with(
    omega: &PureState,
    eta: &PureState,
    dirac: DiracData,
    curve: Option<CausalCurve>,
    epsilon: Option<f64>,
) -> Result<WitnessSpec> {
    let verdict = pure_causal(omega, eta, dirac);
    if verdict.reason != Reason::SpeedBound {
        return Err(refusal_reason(verdict.reason));
    }
    let (xi, phi) = (omega.internal, eta.internal);
    let theta_xi = xi.parallel_angle()?;
    let delta = signed_angle_difference(theta_xi, phi.parallel_angle()?);
    if fabs(delta) >= PI - tol::BOUND {
        return Err(Error::WitnessPrecondition("antipodal internal states admit no direct witness"));
    }
    let (p, q) = (omega.point, eta.point);
    if max_proper_time(p, q)? <= 0.0 {
        return Err(Error::WitnessPrecondition("null-separated events admit no timelike curve"));
    }
    let curve = match curve {
        Some(c) => {
            check_curve_endpoints(&c, p, q)?;
            c
        }
        None => CausalCurve::straight(p, q)?,
    };
    let epsilon = epsilon.unwrap_or(0.5 * (PI - fabs(delta)));
    if !(epsilon > 0.0 && fabs(delta) + epsilon < PI) {
        return Err(Error::WitnessPrecondition("ε must satisfy 0 < ε < π − |Δθ|"));
    }
    let theta_c = delta.signum() * epsilon - theta_xi;
    WitnessSpec::new(
        epsilon,
        theta_c,
        curve,
        dirac,
        xi.latitude(),
        WitnessTarget::Pure {
            from: xi,
            to: phi,
            delta_theta: delta,
        },
    )
}

/// Witness for mixed states on a common parallel, on the straight segment.
///
/// The auxiliary angle is chosen among those that keep at least half of the
/// separation slack `sup − d·l` so as to keep `Θ` furthest from `0` and `π`.
pub fn build_mixed_witness(omega: &MixedState, eta: &MixedState, dirac: DiracData) -> Result<WitnessSpec> {
    let verdict = mixed_causal(omega, eta, dirac);
    if verdict.reason != Reason::SpeedBound {
        return Err(refusal_reason(verdict.reason));
    }
    let (p, q) = (omega.point, eta.point);
    let length = max_proper_time(p, q)?;
    if length <= 0.0 {
        return Err(Error::WitnessPrecondition("null-separated events admit no timelike curve"));
    }
    let (rho, sigma) = (omega.internal, eta.internal);
    let sup = mixed_required_angle_sup(&rho, &sigma)?;
    let dl = dirac.gap() * length;
    let threshold = dl + 0.5 * (sup.angle - dl);

    let z = 0.5 * (rho.latitude() + sigma.latitude());
    let big = sqrt(1.0 - z * z);
    let coords = |m: &MixedInternalState| {
        let r = m.parallel_radius();
        ((r / big).clamp(0.0, 1.0), if r > 0.0 { m.parallel_angle() } else { 0.0 })
    };
    let ((rr, ar), (ss, as_)) = (coords(&rho), coords(&sigma));
    let at = |theta: f64| AngleSup {
        angle: 0.0,
        theta,
        theta_r: libm::acos((rr * cos(ar + theta)).clamp(-1.0, 1.0)),
        theta_s: libm::acos((ss * cos(as_ + theta)).clamp(-1.0, 1.0)),
    };
    // (ε, θ_c offset, room) for an auxiliary angle
    let layout = |a: &AngleSup| {
        let (eps, shift) = if a.theta_s > a.theta_r {
            (a.theta_r, 0.0)
        } else {
            (PI - a.theta_r, PI)
        };
        (eps, shift, eps.min(PI - (dl + eps)))
    };
    let mut best = sup;
    let mut best_room = layout(&sup).2;
    const CANDIDATES: usize = 4096;
    for k in 0..CANDIDATES {
        let cand = at(core::f64::consts::TAU * k as f64 / CANDIDATES as f64);
        if fabs(cand.theta_s - cand.theta_r) < threshold {
            continue;
        }
        let room = layout(&cand).2;
        if room > best_room {
            best_room = room;
            best = cand;
        }
    }
    best.angle = fabs(best.theta_s - best.theta_r);
    let (epsilon, shift, _) = layout(&best);
    WitnessSpec::new(
        epsilon,
        best.theta + shift,
        CausalCurve::straight(p, q)?,
        dirac,
        z,
        WitnessTarget::Mixed {
            from: rho,
            to: sigma,
            aux: best,
        },
    )
}

/// Both sides of the endpoint inequality; the states are separated iff
/// `lhs < rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Separation {
    /// Weighted change of the diagonal part, `Σ |φ_k|² Δa_k`.
    pub lhs: f64,
    /// Change of the off-diagonal part, `2 Re{φ1* φ2 c(q) − ξ1* ξ2 c(p)}`.
    pub rhs: f64,
}

impl Separation {
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// Closed forms of both sides.
pub fn separation_values(spec: &WitnessSpec) -> Separation {
    let eps = spec.epsilon;
    let th = spec.final_theta();
    let cot = |x: f64| 1.0 / tan(x);
    let [p1, p2] = spec.phi_abs;
    let w = spec.pairing_weight();
    let lhs = w * 2.0 * p1 * p2 * (cot(eps) - cot(th));
    let rhs = match spec.target {
        WitnessTarget::Pure { delta_theta, .. } => 2.0 * p1 * p2 * (-cos(fabs(delta_theta) + eps) / sin(th) + cot(eps)),
        WitnessTarget::Mixed { from, to, .. } => {
            let tc = spec.theta_c;
            let (r, s) = (from.parallel_radius(), to.parallel_radius());
            let (ar, as_) = (from.parallel_angle(), to.parallel_angle());
            2.0 * (-s * cos(as_ + tc) / sin(th) + r * cos(ar + tc) / sin(eps))
        }
    };
    Separation { lhs, rhs }
}

fn simpson_step<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64, m: f64, fm: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let (lm, flm, left) = simpson_step(f, a, fa, m, fm);
    let (rm, frm, right) = simpson_step(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
        + adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson over `panels` equal starting panels.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for k in 0..panels {
        let (lo, hi) = (a + h * k as f64, if k + 1 == panels { b } else { a + h * (k + 1) as f64 });
        let (flo, fhi) = (f(lo), f(hi));
        let (m, fm, whole) = simpson_step(&f, lo, flo, hi, fhi);
        let tol = SIMPSON_TOL * whole.abs().max(f64::MIN_POSITIVE);
        acc += adaptive(&f, lo, flo, hi, fhi, m, fm, whole, tol, 40);
    }
    acc
}

/// `lhs` by integrating the diagonal derivatives along the curve with
/// adaptive Simpson, [`SIMPSON_PANELS`] starting panels per segment.
pub fn lhs_numeric(spec: &WitnessSpec) -> f64 {
    let [p1, p2] = spec.phi_abs;
    let w = spec.pairing_weight();
    let (w1, w2) = (w * p1 * p1, w * p2 * p2);
    let mut total = 0.0;
    for i in 0..spec.curve.segment_count() {
        let (a, b) = spec.curve.segment(i);
        let t_rate = (b.point.t - a.point.t) / (b.s - a.s);
        let v = spec.curve.segment_velocity(i);
        let (l1, l2) = lambdas(v);
        let seg = |s: f64| {
            let j = spec.jet_on_segment(i, s.clamp(a.s, b.s));
            // d/dt along γ of a is λ1(a0+a1) + λ2(a0−a1)
            let da = l1 * (j.a[1] + j.a[2]) + l2 * (j.a[1] - j.a[2]);
            let db = l1 * (j.b[1] + j.b[2]) + l2 * (j.b[1] - j.b[2]);
            t_rate * (w1 * da + w2 * db)
        };
        total += simpson(seg, a.s, b.s, SIMPSON_PANELS);
    }
    total
}

/// `rhs` by evaluating `c` at both endpoints against the state components.
pub fn rhs_direct(spec: &WitnessSpec) -> f64 {
    let (s0, s1) = spec.curve.parameter_range();
    let (cp, cq) = (spec.value_on_curve(s0).c, spec.value_on_curve(s1).c);
    match spec.target {
        WitnessTarget::Pure { from, to, .. } => {
            2.0 * (to.xi1().conj() * to.xi2() * cq - from.xi1().conj() * from.xi2() * cp).re
        }
        WitnessTarget::Mixed { from, to, .. } => {
            let plus = |m: &MixedInternalState| Complex64::new(m.rx, m.ry);
            2.0 * (plus(&to) * cq - plus(&from) * cp).re
        }
    }
}

/// `η(a) − ω(a)` evaluated through the state pairings at the endpoints.
pub fn endpoint_gap(spec: &WitnessSpec) -> f64 {
    let (s0, s1) = spec.curve.parameter_range();
    let (vp, vq) = (spec.value_on_curve(s0), spec.value_on_curve(s1));
    match spec.target {
        WitnessTarget::Pure { from, to, .. } => pure_pairing(&vq, &to) - pure_pairing(&vp, &from),
        WitnessTarget::Mixed { from, to, .. } => mixed_pairing(&vq, &to) - mixed_pairing(&vp, &from),
    }
}

/// Characteristic coefficients at one curve sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdSample {
    pub s: f64,
    pub theta: f64,
    /// `c1..c4` of the cone matrix, `det(λ − A) = λ⁴ − c1λ³ + c2λ² − c3λ + c4`.
    pub coefficients: [f64; 4],
    /// `c1, c2` from their closed forms.
    pub closed_form: [f64; 2],
    /// `c1..c4` of the entrywise reference matrix.
    pub reference: [f64; 4],
    pub min_eigenvalue: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsdReport {
    pub samples: Vec<PsdSample>,
    pub passed: bool,
    pub first_failure: Option<PsdSample>,
}

/// Absolute floor for `c1, c2`.
pub const COEFF_FLOOR: f64 = 1e-12;
/// Relative bound on `|c3|`, `|c4|` and on the reference mismatch, in units
/// of `max(1, tr A)^k`.
pub const COEFF_REL: f64 = 1e-9;

/// Certify positive semi-definiteness of the cone matrix at `n` equally
/// spaced curve parameters through its characteristic coefficients.
///
/// A sample passes iff `c1, c2 ≥ −1e−12`, `|c3|, |c4| ≤ 1e−9·max(1, tr A)^k`,
/// `c1`, `c2` match their closed forms to relative `1e−8`, and the
/// coefficients of the reference matrix agree to `1e−9·max(1, tr A)^k`.
pub fn certify_witness_psd(spec: &WitnessSpec, n: usize) -> Result<PsdReport> {
    if n < 2 {
        return Err(Error::Config("certification needs at least two samples"));
    }
    let (s0, s1) = spec.curve.parameter_range();
    let mut samples = Vec::with_capacity(n);
    let mut first_failure = None;
    for k in 0..n {
        let s = if k + 1 == n {
            s1
        } else {
            s0 + (s1 - s0) * k as f64 / (n - 1) as f64
        };
        let m = spec.cone_matrix_on_curve(s);
        let c = linalg::char_poly_coefficients(&m);
        let reference = linalg::char_poly_coefficients(&spec.reference_matrix(s));
        let closed_form = spec.closed_form_coefficients(s);
        let base = c[0].max(1.0);
        let scale = [base, base * base, base * base * base, base * base * base * base];
        let rel = |a: f64, b: f64| fabs(a - b) <= tol::CLOSED_FORM_REL * fabs(b);
        let passed = c[0] >= -COEFF_FLOOR
            && c[1] >= -COEFF_FLOOR
            && fabs(c[2]) <= COEFF_REL * scale[2]
            && fabs(c[3]) <= COEFF_REL * scale[3]
            && rel(c[0], closed_form[0])
            && rel(c[1], closed_form[1])
            && (0..4).all(|j| fabs(c[j] - reference[j]) <= COEFF_REL * scale[j]);
        let sample = PsdSample {
            s,
            theta: spec.theta_at(s),
            coefficients: c,
            closed_form,
            reference,
            min_eigenvalue: linalg::hermitian_eigenvalues(&m)[0],
            passed,
        };
        if !passed && first_failure.is_none() {
            first_failure = Some(sample);
        }
        samples.push(sample);
    }
    Ok(PsdReport {
        passed: first_failure.is_none(),
        samples,
        first_failure,
    })
}

/// A machine-checkable refutation of a causal relation.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub spec: WitnessSpec,
    pub separation: Separation,
    pub lhs_numeric: f64,
    pub rhs_direct: f64,
    /// `η(a) − ω(a)` through the state pairings; negative when separated.
    pub endpoint_gap: f64,
    pub psd: PsdReport,
    pub valid: bool,
}

impl Certificate {
    pub fn margin(&self) -> f64 {
        self.separation.margin()
    }

    pub fn lhs_agrees(&self) -> bool {
        agree(self.lhs_numeric, self.separation.lhs)
    }

    pub fn rhs_agrees(&self) -> bool {
        agree(self.rhs_direct, self.separation.rhs)
    }
}

fn agree(a: f64, b: f64) -> bool {
    fabs(a - b) <= tol::CLOSED_FORM_REL * fabs(b).max(1.0)
}

/// Assemble and check a certificate for a spec.
pub fn certify(spec: WitnessSpec, n: usize) -> Result<Certificate> {
    let separation = separation_values(&spec);
    let psd = certify_witness_psd(&spec, n)?;
    let mut cert = Certificate {
        lhs_numeric: lhs_numeric(&spec),
        rhs_direct: rhs_direct(&spec),
        endpoint_gap: endpoint_gap(&spec),
        separation,
        psd,
        spec,
        valid: false,
    };
    cert.valid = cert.margin() > 0.0 && cert.endpoint_gap < 0.0 && cert.psd.passed && cert.lhs_agrees() && cert.rhs_agrees();
    Ok(cert)
}

/// Build the default witness for a pure pair and certify it at
/// [`CERTIFICATE_SAMPLES`] curve samples.
pub fn refute_with_witness(omega: &PureState, eta: &PureState, dirac: DiracData) -> Result<Certificate> {
    certify(build_witness(omega, eta, dirac)?, CERTIFICATE_SAMPLES)
}

/// Mixed-state counterpart of [`refute_with_witness`].
pub fn refute_mixed_with_witness(omega: &MixedState, eta: &MixedState, dirac: DiracData) -> Result<Certificate> {
    certify(build_mixed_witness(omega, eta, dirac)?, CERTIFICATE_SAMPLES)
}

/// The witness as an observable defined on its curve only.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessElement {
    pub spec: WitnessSpec,
}

impl WitnessElement {
    pub fn new(spec: WitnessSpec) -> Self {
        Self { spec }
    }

    /// Curve parameter of `p`, if `p` lies on the curve.
    pub fn locate(&self, p: SpacetimePoint) -> Option<f64> {
        let curve = &self.spec.curve;
        for i in 0..curve.segment_count() {
            let (a, b) = curve.segment(i);
            let dt = b.point.t - a.point.t;
            let u = (p.t - a.point.t) / dt;
            if !(-tol::POINT_EQ..=1.0 + tol::POINT_EQ).contains(&u) {
                continue;
            }
            let x = a.point.x + u * (b.point.x - a.point.x);
            if fabs(x - p.x) <= tol::POINT_EQ * p.x.abs().max(1.0) {
                return Some(a.s + u.clamp(0.0, 1.0) * (b.s - a.s));
            }
        }
        None
    }
}

impl Observable for WitnessElement {
    fn value_at(&self, p: SpacetimePoint) -> Result<ElementValue> {
        self.locate(p)
            .map(|s| self.spec.value_on_curve(s))
            .ok_or(Error::OffCurve { at: p })
    }
}
