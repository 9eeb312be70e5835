//! Hermitian elements `[[a, -c], [-c*, b]]` of the two-point algebra over
//! `R^{1,1}` and their membership in the causal cone.
//!
//! An element is in the cone iff a certain 4×4 Hermitian matrix built from
//! the first derivatives of `a`, `b`, `c` and from `(d1 - d2)·c` is positive
//! semi-definite at every event. [`cone_matrix_at`] builds that matrix;
//! [`cone_membership`] checks it on a finite grid, which certifies a
//! violation exactly but membership only up to sampling.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::field::{Expr, FieldEval};
use crate::linalg::{self, Mat4};
use crate::minkowski::SpacetimePoint;
use crate::states::DiracData;
use crate::tol;
use crate::{Complex64, Error, Result};

/// A Hermitian algebra element given by four real field expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub a: Expr,
    pub b: Expr,
    pub c_re: Expr,
    pub c_im: Expr,
}

/// Pointwise value of an element: the real diagonal and the complex `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementValue {
    pub a: f64,
    pub b: f64,
    pub c: Complex64,
}

/// Value and first partials of an element at one event. Index 0 is `∂_t`,
/// index 1 is `∂_x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementJet {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub c: [Complex64; 3],
}

impl ElementJet {
    pub fn value(&self) -> ElementValue {
        ElementValue {
            a: self.a[0],
            b: self.b[0],
            c: self.c[0],
        }
    }
}

fn jet_of(e: FieldEval) -> [f64; 3] {
    [e.value, e.d_dt, e.d_dx]
}

impl AlgebraElement {
    pub fn new(a: Expr, b: Expr, c_re: Expr, c_im: Expr) -> Self {
        Self { a, b, c_re, c_im }
    }

    /// `diag(a, b)` with `c = 0`.
    pub fn diagonal(a: Expr, b: Expr) -> Self {
        Self::new(a, b, Expr::num(0.0), Expr::num(0.0))
    }

    pub fn parse(a: &str, b: &str, c_re: &str, c_im: &str) -> Result<Self> {
        Ok(Self::new(Expr::parse(a)?, Expr::parse(b)?, Expr::parse(c_re)?, Expr::parse(c_im)?))
    }

    pub fn jet_at(&self, p: SpacetimePoint) -> Result<ElementJet> {
        let a = jet_of(self.a.eval(p)?);
        let b = jet_of(self.b.eval(p)?);
        let re = jet_of(self.c_re.eval(p)?);
        let im = jet_of(self.c_im.eval(p)?);
        Ok(ElementJet {
            a,
            b,
            c: core::array::from_fn(|k| Complex64::new(re[k], im[k])),
        })
    }

    pub fn value_at(&self, p: SpacetimePoint) -> Result<ElementValue> {
        Ok(ElementValue {
            a: self.a.eval(p)?.value,
            b: self.b.eval(p)?.value,
            c: Complex64::new(self.c_re.eval(p)?.value, self.c_im.eval(p)?.value),
        })
    }
}

/// The 4×4 matrix whose positive semi-definiteness at an event is the
/// pointwise cone condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeMatrix {
    pub m: Mat4,
}

impl ConeMatrix {
    /// Wrap a matrix, checking Hermiticity entrywise.
    pub fn new(m: Mat4) -> Result<Self> {
        if m.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("cone matrix entry"));
        }
        let defect = linalg::hermitian_defect(&m);
        if defect > tol::HERMITIAN * linalg::max_abs_entry(&m).max(1.0) {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self { m })
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> [f64; 4] {
        linalg::hermitian_eigenvalues(&self.m)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn max_abs_entry(&self) -> f64 {
        linalg::max_abs_entry(&self.m)
    }
}

/// Assemble the cone matrix from a jet:
///
/// ```text
/// [ a0+a1      0          -(c0+c1)    -δc      ]
/// [ 0          a0-a1       δc        -(c0-c1)  ]
/// [ -(c0+c1)*  δc*         b0+b1      0        ]
/// [ -δc*      -(c0-c1)*    0          b0-b1    ]
/// ```
///
/// with `δ = d1 - d2`, subscripts 0 and 1 the `t` and `x` partials.
pub fn cone_matrix_from_jet(jet: &ElementJet, dirac: DiracData) -> ConeMatrix {
    let z = Complex64::new(0.0, 0.0);
    let re = |v: f64| Complex64::new(v, 0.0);
    let [_, a0, a1] = jet.a;
    let [_, b0, b1] = jet.b;
    let [c, c0, c1] = jet.c;
    let dc = c * dirac.signed_gap();
    let cp = c0 + c1;
    let cm = c0 - c1;
    ConeMatrix {
        m: [
            [re(a0 + a1), z, -cp, -dc],
            [z, re(a0 - a1), dc, -cm],
            [-cp.conj(), dc.conj(), re(b0 + b1), z],
            [-dc.conj(), -cm.conj(), z, re(b0 - b1)],
        ],
    }
}

pub fn cone_matrix_at(el: &AlgebraElement, dirac: DiracData, p: SpacetimePoint) -> Result<ConeMatrix> {
    Ok(cone_matrix_from_jet(&el.jet_at(p)?, dirac))
}

/// Smallest eigenvalue `>= -tol·max|m_ij|`.
///
/// The threshold scales with the matrix itself and with nothing else, so
/// the verdict is unchanged by any positive rescaling of the matrix. The
/// zero matrix is positive semi-definite.
pub fn is_psd(m: &ConeMatrix, tol: f64) -> bool {
    psd_margin(m, tol) >= 0.0
}

/// `λ_min + tol·max|m_ij|`; non-negative iff [`is_psd`].
fn psd_margin(m: &ConeMatrix, tol: f64) -> f64 {
    m.min_eigenvalue() + tol * m.max_abs_entry()
}

/// Sufficient condition for an element with `a = b`:
/// `a_{,0} - |a_{,1}| >= |c_{,0}| + |c_{,1}| + |d1 - d2|·|c|`.
pub fn lemma_sufficient_check(el: &AlgebraElement, dirac: DiracData, p: SpacetimePoint) -> Result<bool> {
    if el.a != el.b {
        return Err(Error::DiagonalMismatch);
    }
    let jet = el.jet_at(p)?;
    let [_, a0, a1] = jet.a;
    let [c, c0, c1] = jet.c;
    let lhs = a0 - a1.abs();
    let rhs = c0.norm() + c1.norm() + dirac.gap() * c.norm();
    Ok(lhs >= rhs - tol::LEMMA_SLACK)
}

/// A rectangular grid of events, `nt × nx` nodes including the bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionGrid {
    t_min: f64,
    t_max: f64,
    x_min: f64,
    x_max: f64,
    nt: usize,
    nx: usize,
}

impl RegionGrid {
    pub fn new(t_min: f64, t_max: f64, x_min: f64, x_max: f64, nt: usize, nx: usize) -> Result<Self> {
        if ![t_min, t_max, x_min, x_max].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("grid bound"));
        }
        if t_min >= t_max || x_min >= x_max {
            return Err(Error::InvalidGrid("bounds must satisfy min < max"));
        }
        if nt < 2 || nx < 2 {
            return Err(Error::InvalidGrid("need at least two nodes per axis"));
        }
        Ok(Self {
            t_min,
            t_max,
            x_min,
            x_max,
            nt,
            nx,
        })
    }

    /// The square `[-h, h]²` with `n × n` nodes.
    pub fn square(h: f64, n: usize) -> Result<Self> {
        Self::new(-h, h, -h, h, n, n)
    }

    pub fn bounds(&self) -> [f64; 4] {
        [self.t_min, self.t_max, self.x_min, self.x_max]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nt, self.nx)
    }

    pub fn len(&self) -> usize {
        self.nt * self.nx
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: SpacetimePoint) -> bool {
        (self.t_min..=self.t_max).contains(&p.t) && (self.x_min..=self.x_max).contains(&p.x)
    }

    pub fn node(&self, i: usize, j: usize) -> SpacetimePoint {
        let along = |lo: f64, hi: f64, k: usize, n: usize| {
            if k + 1 == n {
                hi
            } else {
                lo + (hi - lo) * (k as f64) / ((n - 1) as f64)
            }
        };
        SpacetimePoint {
            t: along(self.t_min, self.t_max, i, self.nt),
            x: along(self.x_min, self.x_max, j, self.nx),
        }
    }

    /// Nodes in row-major order, `t` outer.
    pub fn nodes(&self) -> impl Iterator<Item = SpacetimePoint> + '_ {
        (0..self.nt).flat_map(move |i| (0..self.nx).map(move |j| self.node(i, j)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub point: SpacetimePoint,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub member_on_grid: bool,
    /// Smallest eigenvalue seen over the whole grid.
    pub min_eigenvalue: f64,
    pub first_violation: Option<Violation>,
    /// Violation with the most negative eigenvalue.
    pub worst_violation: Option<Violation>,
    pub violations: Vec<Violation>,
    pub nodes_checked: usize,
}

/// Check the pointwise cone condition at every grid node.
pub fn cone_membership(
    el: &AlgebraElement,
    dirac: DiracData,
    region: &RegionGrid,
    tol: f64,
) -> Result<MembershipReport> {
    let mut report = MembershipReport {
        member_on_grid: true,
        min_eigenvalue: f64::INFINITY,
        first_violation: None,
        worst_violation: None,
        violations: Vec::new(),
        nodes_checked: 0,
    };
    for p in region.nodes() {
        let m = cone_matrix_at(el, dirac, p).map_err(|e| Error::AtNode {
            at: p,
            source: Box::new(e),
        })?;
        let lmin = m.min_eigenvalue();
        report.nodes_checked += 1;
        report.min_eigenvalue = report.min_eigenvalue.min(lmin);
        if !is_psd(&m, tol) {
            let v = Violation {
                point: p,
                min_eigenvalue: lmin,
            };
            report.member_on_grid = false;
            report.first_violation.get_or_insert(v);
            if report.worst_violation.is_none_or(|w| lmin < w.min_eigenvalue) {
                report.worst_violation = Some(v);
            }
            report.violations.push(v);
        }
    }
    Ok(report)
}

/// The cone matrix for the conformally rescaled Dirac operator `Ω D Ω`,
/// namely `Ω² M`.
pub fn conformal_rescale_matrix(m: &ConeMatrix, omega: f64) -> Result<ConeMatrix> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::NonPositiveConformalFactor(omega));
    }
    let w = omega * omega;
    let mut out = m.m;
    for z in out.iter_mut().flatten() {
        *z *= w;
    }
    Ok(ConeMatrix { m: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pt(t: f64, x: f64) -> SpacetimePoint {
        SpacetimePoint::new(t, x).unwrap()
    }

    fn diag(m: &ConeMatrix) -> [f64; 4] {
        core::array::from_fn(|i| m.m[i][i].re)
    }

    fn off_diagonal_zero(m: &ConeMatrix) -> bool {
        (0..4).all(|i| (0..4).all(|j| i == j || m.m[i][j].norm() == 0.0))
    }

    #[test]
    fn examples_from_hand_expansion() {
        let d = DiracData::new(1.0, -0.5).unwrap();
        let tt = AlgebraElement::parse("t", "t", "0", "0").unwrap();
        let m = cone_matrix_at(&tt, d, pt(0.0, 0.0)).unwrap();
        assert_eq!(diag(&m), [1.0; 4]);
        assert!(off_diagonal_zero(&m));
        assert!(is_psd(&m, 1e-9));

        let xx = AlgebraElement::parse("x", "x", "0", "0").unwrap();
        let m = cone_matrix_at(&xx, d, pt(0.3, 0.2)).unwrap();
        assert_eq!(diag(&m), [1.0, -1.0, 1.0, -1.0]);
        assert!(!is_psd(&m, 1e-9));

        let constant = AlgebraElement::parse("0", "0", "1", "0").unwrap();
        let m = cone_matrix_at(&constant, DiracData::new(2.0, 2.0).unwrap(), pt(1.0, 1.0)).unwrap();
        assert!(m.m.iter().flatten().all(|z| z.norm() == 0.0));
        assert!(is_psd(&m, 1e-9));
    }

    #[test]
    fn entries_follow_the_layout() {
        // c = t + 2ix: c0 = 1, c1 = 2i; a = 3t + x: a0 = 3, a1 = 1; b = 2t - x
        let el = AlgebraElement::parse("3*t + x", "2*t - x", "t", "2*x").unwrap();
        let d = DiracData::new(1.5, 0.5).unwrap();
        let p = pt(0.5, 0.25);
        let m = cone_matrix_at(&el, d, p).unwrap().m;
        let c = Complex64::new(0.5, 0.5);
        let c0 = Complex64::new(1.0, 0.0);
        let c1 = Complex64::new(0.0, 2.0);
        assert_eq!(m[0][0].re, 4.0);
        assert_eq!(m[1][1].re, 2.0);
        assert_eq!(m[2][2].re, 1.0);
        assert_eq!(m[3][3].re, 3.0);
        assert_eq!(m[0][2], -(c0 + c1));
        assert_eq!(m[1][3], -(c0 - c1));
        assert_eq!(m[0][3], -c);
        assert_eq!(m[1][2], c);
        assert_eq!(m[2][0], -(c0 + c1).conj());
        assert_eq!(m[3][1], -(c0 - c1).conj());
        assert!(linalg::hermitian_defect(&m) == 0.0);
    }

    #[test]
    fn psd_reference_matrices() {
        let mut id = linalg::zero4();
        for (i, row) in id.iter_mut().enumerate() {
            row[i] = Complex64::new(1.0, 0.0);
        }
        assert!(is_psd(&ConeMatrix::new(id).unwrap(), 1e-9));
        let mut ind = id;
        ind[1][1] = Complex64::new(-1.0, 0.0);
        ind[3][3] = Complex64::new(-1.0, 0.0);
        assert!(!is_psd(&ConeMatrix::new(ind).unwrap(), 1e-9));
        let mut skew = id;
        skew[0][1] = Complex64::new(0.0, 1.0);
        assert!(ConeMatrix::new(skew).is_err());
    }

    #[test]
    fn lemma_check_examples() {
        let d = DiracData::new(1.0, 0.0).unwrap();
        let el = AlgebraElement::parse(
            "2*t",
            "2*t",
            "exp(-t^2 - x^2)*cos(x)",
            "exp(-t^2 - x^2)*sin(x)",
        )
        .unwrap();
        // at the origin: c = 1, c_t = 0, c_x = i, so rhs = 0 + 1 + 1 = 2 = lhs
        assert!(lemma_sufficient_check(&el, d, pt(0.0, 0.0)).unwrap());
        let jet = el.jet_at(pt(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(jet.c[1].norm() + jet.c[2].norm() + jet.c[0].norm(), 2.0, epsilon = 1e-15);
        assert!(is_psd(&cone_matrix_at(&el, d, pt(0.0, 0.0)).unwrap(), 1e-9));

        let tt = AlgebraElement::parse("t", "t", "0", "0").unwrap();
        assert!(lemma_sufficient_check(&tt, d, pt(-3.0, 7.0)).unwrap());
        let c1 = AlgebraElement::parse("0", "0", "1", "0").unwrap();
        assert!(!lemma_sufficient_check(&c1, d, pt(0.0, 0.0)).unwrap());
        let mismatch = AlgebraElement::parse("t", "2*t", "0", "0").unwrap();
        assert_eq!(lemma_sufficient_check(&mismatch, d, pt(0.0, 0.0)), Err(Error::DiagonalMismatch));
    }

    #[test]
    fn membership_reports() {
        let d = DiracData::new(1.0, 0.0).unwrap();
        let grid = RegionGrid::square(1.0, 21).unwrap();
        let tt = AlgebraElement::parse("t", "t", "0", "0").unwrap();
        let r = cone_membership(&tt, d, &grid, 1e-9).unwrap();
        assert!(r.member_on_grid && r.first_violation.is_none());
        assert_eq!(r.nodes_checked, 441);

        let xx = AlgebraElement::parse("x", "x", "0", "0").unwrap();
        let r = cone_membership(&xx, d, &grid, 1e-9).unwrap();
        assert!(!r.member_on_grid);
        assert_eq!(r.violations.len(), 441);
        assert_eq!(r.first_violation.unwrap().point, pt(-1.0, -1.0));
        assert_abs_diff_eq!(r.min_eigenvalue, -1.0, epsilon = 1e-12);

        let causal = AlgebraElement::parse("tanh(t + x) + tanh(t - x)", "t", "0", "0").unwrap();
        assert!(cone_membership(&causal, d, &grid, 1e-9).unwrap().member_on_grid);

        let bad = AlgebraElement::parse("log(t)", "t", "0", "0").unwrap();
        match cone_membership(&bad, d, &grid, 1e-9) {
            Err(Error::AtNode { at, source }) => {
                assert_eq!(at, pt(-1.0, -1.0));
                assert!(matches!(*source, Error::Domain { .. }));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn grid_validation() {
        assert!(RegionGrid::new(0.0, 1.0, 0.0, 1.0, 1, 5).is_err());
        assert!(RegionGrid::new(1.0, 0.0, 0.0, 1.0, 2, 2).is_err());
        assert!(RegionGrid::new(0.0, f64::NAN, 0.0, 1.0, 2, 2).is_err());
        let g = RegionGrid::new(0.0, 1.0, -2.0, 2.0, 3, 5).unwrap();
        let nodes: Vec<_> = g.nodes().collect();
        assert_eq!(nodes.len(), 15);
        assert_eq!(nodes[1], pt(0.0, -1.0));
        assert_eq!(nodes[5], pt(0.5, -2.0));
        assert_eq!(nodes[14], pt(1.0, 2.0));
    }

    #[test]
    fn conformal_rescaling() {
        let d = DiracData::new(1.0, 0.0).unwrap();
        let xx = AlgebraElement::parse("x", "x", "0", "0").unwrap();
        let m = cone_matrix_at(&xx, d, pt(0.0, 0.0)).unwrap();
        assert_eq!(conformal_rescale_matrix(&m, 1.0).unwrap(), m);
        let half = conformal_rescale_matrix(&m, 0.5).unwrap();
        assert!(!is_psd(&half, 1e-9));
        assert_eq!(half.m[0][0].re, 0.25);
        assert!(conformal_rescale_matrix(&m, 0.0).is_err());
        assert!(conformal_rescale_matrix(&m, -1.0).is_err());
    }
}
