//! Internal degrees of freedom: pure states of `M2(C)` as points of the Bloch
//! sphere, mixed states as Bloch-ball vectors, the finite Dirac data and
//! unitary actions.
//!
//! Pure states are stored in the canonical gauge `ξ1 ∈ R≥0`; at the south
//! pole (`ξ1 = 0`) the gauge is fixed by `ξ2 ∈ R>0`. The parallel angle
//! `θ` is the argument of `ξ2` in that gauge and lives in `(−π, π]`.

use core::f64::consts::{PI, TAU};

use libm::{atan2, fabs, fmod, sqrt};
use num_complex::Complex64;
use rand::Rng;

use crate::tol;
use crate::{Error, Result};

type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Finite part of the Dirac operator, `D_F = diag(d1, d2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracData {
    pub d1: f64,
    pub d2: f64,
}

impl DiracData {
    pub fn new(d1: f64, d2: f64) -> Result<Self> {
        if !d1.is_finite() || !d2.is_finite() {
            return Err(Error::NonFinite("Dirac data"));
        }
        Ok(Self { d1, d2 })
    }

    /// `d = |d1 − d2|`.
    pub fn gap(&self) -> f64 {
        fabs(self.d1 - self.d2)
    }

    /// `d1 − d2`, the signed gap entering the cone matrix.
    pub fn signed_gap(&self) -> f64 {
        self.d1 - self.d2
    }

    pub fn is_degenerate(&self) -> bool {
        self.gap() <= tol::DEGENERATE_GAP
    }

    /// `D_F` as a Hermitian 2×2 matrix.
    pub fn matrix(&self) -> DiracMatrix {
        DiracMatrix {
            m: [
                [Complex64::new(self.d1, 0.0), ZERO],
                [ZERO, Complex64::new(self.d2, 0.0)],
            ],
        }
    }
}

/// A general (not necessarily diagonal) Hermitian finite Dirac operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracMatrix {
    pub m: Mat2,
}

impl DiracMatrix {
    /// `U D U*`.
    pub fn conjugated(&self, u: &InternalUnitary) -> Self {
        Self {
            m: mat_mul(&mat_mul(&u.u, &self.m), &adjoint(&u.u)),
        }
    }

    /// Diagonalise: returns `(D, V)` with `self = V diag(d1, d2) V*`.
    ///
    /// Closed form for 2×2 Hermitian matrices; for a multiple of the identity
    /// `V` is the identity.
    pub fn diagonalize(&self) -> (DiracData, InternalUnitary) {
        let p = self.m[0][0].re;
        let r = self.m[1][1].re;
        let w = self.m[0][1];
        let mean = 0.5 * (p + r);
        let half = 0.5 * (p - r);
        let rad = sqrt(half * half + w.norm_sqr());
        let d1 = mean + rad;
        let d2 = mean - rad;
        if rad <= tol::DEGENERATE_GAP * (1.0 + fabs(mean)) {
            return (DiracData { d1: mean, d2: mean }, InternalUnitary::identity());
        }
        // eigenvector for d1: (w, d1 − p) or (d1 − r, w*), pick the better conditioned one
        let (e1, e2) = if half >= 0.0 {
            (Complex64::new(d1 - r, 0.0), w.conj())
        } else {
            (w, Complex64::new(d1 - p, 0.0))
        };
        let n = sqrt(e1.norm_sqr() + e2.norm_sqr());
        let (e1, e2) = (e1 / n, e2 / n);
        // orthogonal complement (−e2*, e1*) spans the d2 eigenspace
        let v = [[e1, -e2.conj()], [e2, e1.conj()]];
        (DiracData { d1, d2 }, InternalUnitary { u: v })
    }
}

/// A pure internal state, i.e. a point of `CP¹ ≅ S²`, in canonical gauge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureInternalState {
    xi1: Complex64,
    xi2: Complex64,
}

impl PureInternalState {
    /// Accepts any representative of the ray with `|ξ1|² + |ξ2|² = 1`
    /// (within [`tol::NORM`]) and stores the canonical one.
    pub fn new(xi1: Complex64, xi2: Complex64) -> Result<Self> {
        if !(xi1.re.is_finite() && xi1.im.is_finite() && xi2.re.is_finite() && xi2.im.is_finite()) {
            return Err(Error::NonFinite("state vector"));
        }
        let norm_sq = xi1.norm_sqr() + xi2.norm_sqr();
        if fabs(norm_sq - 1.0) > tol::NORM {
            return Err(Error::NotNormalised { norm_sq });
        }
        Ok(Self::canonical(xi1, xi2))
    }

    /// Normalise a non-zero vector and return its canonical representative.
    pub fn from_unnormalized(xi1: Complex64, xi2: Complex64) -> Result<Self> {
        let n = sqrt(xi1.norm_sqr() + xi2.norm_sqr());
        if !n.is_finite() || n == 0.0 {
            return Err(Error::NotNormalised { norm_sq: n * n });
        }
        Self::new(xi1 / n, xi2 / n)
    }

    fn canonical(xi1: Complex64, xi2: Complex64) -> Self {
        let a = xi1.norm();
        if a > 0.0 {
            let phase = xi1 / a;
            Self {
                xi1: Complex64::new(a, 0.0),
                xi2: xi2 * phase.conj(),
            }
        } else {
            Self {
                xi1: ZERO,
                xi2: Complex64::new(xi2.norm(), 0.0),
            }
        }
    }

    /// North pole `(1, 0)`.
    pub fn north() -> Self {
        Self { xi1: ONE, xi2: ZERO }
    }

    /// South pole `(0, 1)`.
    pub fn south() -> Self {
        Self { xi1: ZERO, xi2: ONE }
    }

    /// State with latitude `z ∈ [−1, 1]` and parallel angle `θ`.
    pub fn from_latitude_angle(z: f64, theta: f64) -> Result<Self> {
        if !z.is_finite() || !theta.is_finite() {
            return Err(Error::NonFinite("latitude/angle"));
        }
        if fabs(z) > 1.0 + tol::NORM {
            return Err(Error::OutsideBlochBall { norm: fabs(z) });
        }
        let z = z.clamp(-1.0, 1.0);
        let a = sqrt(0.5 * (1.0 + z));
        let b = sqrt(0.5 * (1.0 - z));
        Ok(Self::canonical(
            Complex64::new(a, 0.0),
            Complex64::from_polar(b, theta),
        ))
    }

    /// Inverse of [`Self::bloch`]; the vector must have unit norm within
    /// [`tol::NORM`].
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::NonFinite("Bloch vector"));
        }
        let n = sqrt(x * x + y * y + z * z);
        if fabs(n - 1.0) > tol::NORM {
            return Err(Error::NotNormalised { norm_sq: n * n });
        }
        let (x, y, z) = (x / n, y / n, z / n);
        let a = sqrt(0.5 * (1.0 + z).max(0.0));
        if a > 0.0 {
            // 2 ξ1 ξ2 = x + i y with ξ1 = a real
            let xi2 = Complex64::new(x, y) / (2.0 * a);
            // restore exact |ξ2|² = (1 − z)/2 lost to cancellation near the south pole
            let b = sqrt(0.5 * (1.0 - z).max(0.0));
            let m = xi2.norm();
            let xi2 = if m > 0.0 { xi2 * (b / m) } else { xi2 };
            Ok(Self::canonical(Complex64::new(a, 0.0), xi2))
        } else {
            Ok(Self::south())
        }
    }

    pub fn xi1(&self) -> Complex64 {
        self.xi1
    }

    pub fn xi2(&self) -> Complex64 {
        self.xi2
    }

    /// `(x, y, z) = (2 Re ξ1*ξ2, 2 Im ξ1*ξ2, |ξ1|² − |ξ2|²)`.
    pub fn bloch(&self) -> [f64; 3] {
        let w = self.xi1.conj() * self.xi2;
        [2.0 * w.re, 2.0 * w.im, self.latitude()]
    }

    /// Latitude `z = |ξ1|² − |ξ2|²`.
    pub fn latitude(&self) -> f64 {
        (self.xi1.norm_sqr() - self.xi2.norm_sqr()).clamp(-1.0, 1.0)
    }

    pub fn is_pole(&self) -> bool {
        1.0 - fabs(self.latitude()) <= tol::POLE
    }

    /// Parallel angle `θ ∈ (−π, π]`, the argument of `ξ2` in canonical gauge.
    pub fn parallel_angle(&self) -> Result<f64> {
        if self.is_pole() {
            return Err(Error::Pole);
        }
        Ok(wrap_angle(atan2(self.xi2.im, self.xi2.re)))
    }

    /// Entrywise comparison of canonical representatives.
    pub fn approx_eq(&self, other: &Self) -> bool {
        (self.xi1 - other.xi1).norm() <= tol::STATE_EQ && (self.xi2 - other.xi2).norm() <= tol::STATE_EQ
    }

    /// The density matrix `ξ ξ*` as a Bloch-ball vector.
    pub fn to_mixed(&self) -> MixedInternalState {
        let [rx, ry, rz] = self.bloch();
        MixedInternalState { rx, ry, rz }
    }
}

/// Map an angle to `(−π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut r = fmod(theta, TAU);
    if r <= -PI {
        r += TAU;
    } else if r > PI {
        r -= TAU;
    }
    r
}

/// Geodesic distance of two angles on the circle, in `[0, π]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    fabs(signed_angle_difference(a, b))
}

/// Shortest signed rotation taking `from` to `to`, in `(−π, π]`.
pub fn signed_angle_difference(from: f64, to: f64) -> f64 {
    wrap_angle(to - from)
}

/// A mixed internal state `ρ = ½(1 + r·σ)` given by its Bloch vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedInternalState {
    pub rx: f64,
    pub ry: f64,
    pub rz: f64,
}

impl MixedInternalState {
    pub fn new(rx: f64, ry: f64, rz: f64) -> Result<Self> {
        if !(rx.is_finite() && ry.is_finite() && rz.is_finite()) {
            return Err(Error::NonFinite("Bloch vector"));
        }
        let n2 = rx * rx + ry * ry + rz * rz;
        if n2 > 1.0 + tol::NORM {
            return Err(Error::OutsideBlochBall { norm: sqrt(n2) });
        }
        Ok(Self { rx, ry, rz })
    }

    /// The maximally mixed state `r = 0`.
    pub fn center() -> Self {
        Self { rx: 0.0, ry: 0.0, rz: 0.0 }
    }

    pub fn norm(&self) -> f64 {
        sqrt(self.rx * self.rx + self.ry * self.ry + self.rz * self.rz)
    }

    pub fn is_pure(&self) -> bool {
        fabs(self.norm() - 1.0) <= tol::NORM
    }

    pub fn latitude(&self) -> f64 {
        self.rz
    }

    /// Distance `r = √(rx² + ry²)` from the axis.
    pub fn parallel_radius(&self) -> f64 {
        sqrt(self.rx * self.rx + self.ry * self.ry)
    }

    /// `θ_r = atan2(ry, rx)`.
    pub fn parallel_angle(&self) -> f64 {
        wrap_angle(atan2(self.ry, self.rx))
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        fabs(self.rx - other.rx) <= tol::STATE_EQ
            && fabs(self.ry - other.ry) <= tol::STATE_EQ
            && fabs(self.rz - other.rz) <= tol::STATE_EQ
    }

    /// `ρ = ½(1 + r·σ)`.
    pub fn density_matrix(&self) -> Mat2 {
        [
            [
                Complex64::new(0.5 * (1.0 + self.rz), 0.0),
                Complex64::new(0.5 * self.rx, -0.5 * self.ry),
            ],
            [
                Complex64::new(0.5 * self.rx, 0.5 * self.ry),
                Complex64::new(0.5 * (1.0 - self.rz), 0.0),
            ],
        ]
    }

    fn from_density(rho: &Mat2) -> Self {
        Self {
            rx: 2.0 * rho[1][0].re,
            ry: 2.0 * rho[1][0].im,
            rz: rho[0][0].re - rho[1][1].re,
        }
    }
}

/// A 2×2 unitary acting on the internal space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InternalUnitary {
    pub u: Mat2,
}

impl InternalUnitary {
    /// Validates `U U* = 1` entrywise within [`tol::NORM`].
    pub fn new(u: Mat2) -> Result<Self> {
        let p = mat_mul(&u, &adjoint(&u));
        let mut dev = 0.0_f64;
        for (i, row) in p.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let target = if i == j { ONE } else { ZERO };
                dev = dev.max((e - target).norm());
            }
        }
        if !(dev <= tol::NORM) {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(Self { u })
    }

    pub fn identity() -> Self {
        Self {
            u: [[ONE, ZERO], [ZERO, ONE]],
        }
    }

    /// `diag(1, e^{iα})`, a rotation along the parallels by `α`.
    pub fn phase(alpha: f64) -> Self {
        Self {
            u: [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, alpha)]],
        }
    }

    /// Pauli `σ_x`, exchanging the poles.
    pub fn pauli_x() -> Self {
        Self {
            u: [[ZERO, ONE], [ONE, ZERO]],
        }
    }

    /// Haar-distributed random unitary: a uniform point of `S³` gives an
    /// `SU(2)` element, times a uniform global phase.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let q = loop {
            let v = [
                standard_normal(rng),
                standard_normal(rng),
                standard_normal(rng),
                standard_normal(rng),
            ];
            let n = sqrt(v.iter().map(|c| c * c).sum::<f64>());
            if n > 1e-6 {
                break [v[0] / n, v[1] / n, v[2] / n, v[3] / n];
            }
        };
        let phase = Complex64::from_polar(1.0, rng.random_range(-PI..PI));
        let a = Complex64::new(q[0], q[1]);
        let b = Complex64::new(q[2], q[3]);
        Self {
            u: [[a * phase, b * phase], [-b.conj() * phase, a.conj() * phase]],
        }
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            u: mat_mul(&self.u, &other.u),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self { u: adjoint(&self.u) }
    }

    /// `U ξ`, returned in canonical gauge.
    pub fn apply(&self, xi: &PureInternalState) -> PureInternalState {
        let a = self.u[0][0] * xi.xi1 + self.u[0][1] * xi.xi2;
        let b = self.u[1][0] * xi.xi1 + self.u[1][1] * xi.xi2;
        // renormalise away rounding drift
        let n = sqrt(a.norm_sqr() + b.norm_sqr());
        PureInternalState::canonical(a / n, b / n)
    }

    /// `U ρ U*` in Bloch coordinates.
    pub fn apply_mixed(&self, rho: &MixedInternalState) -> MixedInternalState {
        let d = rho.density_matrix();
        let r = mat_mul(&mat_mul(&self.u, &d), &adjoint(&self.u));
        MixedInternalState::from_density(&r)
    }
}

/// Box–Muller standard normal sample.
fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    sqrt(-2.0 * libm::log(u1)) * libm::cos(TAU * u2)
}

/// `(U, ξ) ↦ Uξ`.
pub fn apply_unitary(u: &InternalUnitary, xi: &PureInternalState) -> PureInternalState {
    u.apply(xi)
}

/// `(U, ρ) ↦ UρU*`.
pub fn apply_unitary_mixed(u: &InternalUnitary, rho: &MixedInternalState) -> MixedInternalState {
    u.apply_mixed(rho)
}

/// Latitude of a pure state.
pub fn latitude(xi: &PureInternalState) -> f64 {
    xi.latitude()
}

/// Parallel angle of a pure state; fails at the poles.
pub fn parallel_angle(xi: &PureInternalState) -> Result<f64> {
    xi.parallel_angle()
}

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn adjoint(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}
