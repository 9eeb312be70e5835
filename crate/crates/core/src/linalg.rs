//! Small dense linear algebra on 4×4 complex matrices.

use crate::Complex64;

pub type Mat4 = [[Complex64; 4]; 4];

pub fn zero4() -> Mat4 {
    [[Complex64::new(0.0, 0.0); 4]; 4]
}

pub fn matmul4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = zero4();
    for i in 0..4 {
        for j in 0..4 {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..4 {
                s += a[i][k] * b[k][j];
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn trace4(a: &Mat4) -> Complex64 {
    a[0][0] + a[1][1] + a[2][2] + a[3][3]
}

/// Largest deviation from Hermiticity, `max |a_ij - conj(a_ji)|`.
pub fn hermitian_defect(a: &Mat4) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((a[i][j] - a[j][i].conj()).norm());
        }
    }
    worst
}

pub fn max_abs_entry(a: &Mat4) -> f64 {
    a.iter().flatten().fold(0.0f64, |m, z| m.max(z.norm()))
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// The matrix `A + iB` is embedded as the real symmetric `[[A, -B], [B, A]]`,
/// whose spectrum is that of `A + iB` with every eigenvalue doubled, and
/// diagonalised by cyclic Jacobi rotations. Only the Hermitian part of the
/// input is used.
pub fn hermitian_eigenvalues(a: &Mat4) -> [f64; 4] {
    let mut m = [[0.0f64; 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            let h = (a[i][j] + a[j][i].conj()) * 0.5;
            m[i][j] = h.re;
            m[i + 4][j + 4] = h.re;
            m[i][j + 4] = -h.im;
            m[i + 4][j] = h.im;
        }
    }
    let mut ev = jacobi_symmetric(m);
    ev.sort_by(f64::total_cmp);
    [
        0.5 * (ev[0] + ev[1]),
        0.5 * (ev[2] + ev[3]),
        0.5 * (ev[4] + ev[5]),
        0.5 * (ev[6] + ev[7]),
    ]
}

fn jacobi_symmetric<const N: usize>(mut m: [[f64; N]; N]) -> [f64; N] {
    let scale = m.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
    if scale > 0.0 {
        for _sweep in 0..100 {
            let mut off = 0.0;
            for (i, row) in m.iter().enumerate() {
                for v in &row[i + 1..] {
                    off += v * v;
                }
            }
            if off <= (f64::EPSILON * scale) * (f64::EPSILON * scale) {
                break;
            }
            for p in 0..N {
                for q in p + 1..N {
                    let apq = m[p][q];
                    if apq == 0.0 {
                        continue;
                    }
                    let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / libm::sqrt(t * t + 1.0);
                    let s = t * c;
                    for k in 0..N {
                        let mkp = m[k][p];
                        let mkq = m[k][q];
                        m[k][p] = c * mkp - s * mkq;
                        m[k][q] = s * mkp + c * mkq;
                    }
                    for k in 0..N {
                        let mpk = m[p][k];
                        let mqk = m[q][k];
                        m[p][k] = c * mpk - s * mqk;
                        m[q][k] = s * mpk + c * mqk;
                    }
                }
            }
        }
    }
    core::array::from_fn(|i| m[i][i])
}

/// Coefficients `c1..c4` of `det(λ - A) = λ⁴ - c1 λ³ + c2 λ² - c3 λ + c4`,
/// i.e. the elementary symmetric polynomials of the eigenvalues, obtained
/// from power traces by Newton's identities.
pub fn char_poly_coefficients(a: &Mat4) -> [f64; 4] {
    let a2 = matmul4(a, a);
    let a3 = matmul4(&a2, a);
    let a4 = matmul4(&a3, a);
    let p1 = trace4(a).re;
    let p2 = trace4(&a2).re;
    let p3 = trace4(&a3).re;
    let p4 = trace4(&a4).re;
    let c1 = p1;
    let c2 = (c1 * p1 - p2) / 2.0;
    let c3 = (c2 * p1 - c1 * p2 + p3) / 3.0;
    let c4 = (c3 * p1 - c2 * p2 + c1 * p3 - p4) / 4.0;
    [c1, c2, c3, c4]
}
