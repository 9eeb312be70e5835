//! JSON and CSV formats.

use causalnc_core::causality::{CausalVerdict, MixedState, PathSample, PureState};
use causalnc_core::cone::{AlgebraElement, MembershipReport, RegionGrid, Violation};
use causalnc_core::minkowski::{CausalCurve, SpacetimePoint};
use causalnc_core::states::{signed_angle_difference, DiracData, MixedInternalState, PureInternalState};
use causalnc_core::witness::Certificate;
use causalnc_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Version tag carried by every JSON document this crate writes.
pub const SCHEMA: &str = "causalnc/1";

/// Pure internal state: components (normalised on read) or a unit Bloch vector.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum PureJson {
    Components { xi: [[f64; 2]; 2] },
    Bloch { bloch: [f64; 3] },
}

impl PureJson {
    pub fn to_state(&self) -> Result<PureInternalState, CliError> {
        Ok(match *self {
            PureJson::Components { xi: [[a, b], [c, d]] } => {
                PureInternalState::from_unnormalized(Complex64::new(a, b), Complex64::new(c, d))?
            }
            PureJson::Bloch { bloch: [x, y, z] } => PureInternalState::from_bloch(x, y, z)?,
        })
    }
}

/// Mixed internal state as a Bloch vector with `|r| ≤ 1`.
#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct MixedJson {
    pub bloch: [f64; 3],
}

impl MixedJson {
    pub fn to_state(&self) -> Result<MixedInternalState, CliError> {
        let [x, y, z] = self.bloch;
        Ok(MixedInternalState::new(x, y, z)?)
    }
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
pub struct DiracJson {
    pub d1: f64,
    pub d2: f64,
}

impl DiracJson {
    pub fn to_dirac(self) -> Result<DiracData, CliError> {
        Ok(DiracData::new(self.d1, self.d2)?)
    }
}

fn point(p: [f64; 2]) -> Result<SpacetimePoint, CliError> {
    Ok(SpacetimePoint::new(p[0], p[1])?)
}

/// Two pure states and the Dirac data.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PurePairJson {
    pub p: [f64; 2],
    pub q: [f64; 2],
    pub xi: PureJson,
    pub phi: PureJson,
    pub dirac: DiracJson,
    /// Optional witness curve as `[s, t, x]` triples.
    #[serde(default)]
    pub curve: Option<Vec<[f64; 3]>>,
    /// Optional witness offset `ε`.
    #[serde(default)]
    pub epsilon: Option<f64>,
    /// Optional sample count for certificates and paths.
    #[serde(default)]
    pub n: Option<usize>,
}

impl PurePairJson {
    pub fn states(&self) -> Result<(PureState, PureState, DiracData), CliError> {
        Ok((
            PureState::new(point(self.p)?, self.xi.to_state()?),
            PureState::new(point(self.q)?, self.phi.to_state()?),
            self.dirac.to_dirac()?,
        ))
    }

    pub fn curve(&self) -> Result<Option<CausalCurve>, CliError> {
        self.curve.as_deref().map(|c| Ok(CausalCurve::from_triples(c)?)).transpose()
    }
}

/// Two mixed states and the Dirac data.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixedPairJson {
    pub p: [f64; 2],
    pub q: [f64; 2],
    pub rho: MixedJson,
    pub sigma: MixedJson,
    pub dirac: DiracJson,
}

impl MixedPairJson {
    pub fn states(&self) -> Result<(MixedState, MixedState, DiracData), CliError> {
        Ok((
            MixedState::new(point(self.p)?, self.rho.to_state()?),
            MixedState::new(point(self.q)?, self.sigma.to_state()?),
            self.dirac.to_dirac()?,
        ))
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct ComplexExprJson {
    pub re: String,
    pub im: String,
}

/// Algebra element with field expressions; `c` defaults to zero.
#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct ElementJson {
    pub a: String,
    pub b: String,
    #[serde(default)]
    pub c: Option<ComplexExprJson>,
}

impl ElementJson {
    pub fn to_element(&self) -> Result<AlgebraElement, CliError> {
        let (re, im) = match &self.c {
            Some(c) => (c.re.as_str(), c.im.as_str()),
            None => ("0", "0"),
        };
        Ok(AlgebraElement::parse(&self.a, &self.b, re, im)?)
    }
}

/// Cone-check input. The grid may also come from `--grid`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeCheckJson {
    pub element: ElementJson,
    pub dirac: DiracJson,
    #[serde(default)]
    pub grid: Option<String>,
}

/// Parse `"tmin,tmax,xmin,xmax,nt,nx"`.
pub fn parse_grid(s: &str) -> Result<RegionGrid, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(CliError::Input(format!("grid needs 6 comma-separated fields, got {}", parts.len())));
    }
    let mut b = [0.0; 4];
    for (k, slot) in b.iter_mut().enumerate() {
        *slot = parts[k]
            .parse()
            .map_err(|_| CliError::Input(format!("grid field {} is not a number: {:?}", k + 1, parts[k])))?;
    }
    let count = |k: usize| -> Result<usize, CliError> {
        parts[k]
            .parse()
            .map_err(|_| CliError::Input(format!("grid field {} is not a count: {:?}", k + 1, parts[k])))
    };
    Ok(RegionGrid::new(b[0], b[1], b[2], b[3], count(4)?, count(5)?)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictJson {
    pub schema: &'static str,
    pub related: bool,
    pub reason: &'static str,
    pub bound_required: Option<f64>,
    pub bound_available: Option<f64>,
}

impl From<&CausalVerdict> for VerdictJson {
    fn from(v: &CausalVerdict) -> Self {
        Self {
            schema: SCHEMA,
            related: v.related,
            reason: v.reason.as_str(),
            bound_required: v.bound_required,
            bound_available: v.bound_available,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationJson {
    pub t: f64,
    pub x: f64,
    pub min_eigenvalue: f64,
}

impl From<&Violation> for ViolationJson {
    fn from(v: &Violation) -> Self {
        Self { t: v.point.t, x: v.point.x, min_eigenvalue: v.min_eigenvalue }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MembershipJson {
    pub schema: &'static str,
    pub member_on_grid: bool,
    pub min_eigenvalue: f64,
    pub nodes_checked: usize,
    pub tol: f64,
    pub first_violation: Option<ViolationJson>,
    pub worst_violation: Option<ViolationJson>,
    pub violations: Vec<ViolationJson>,
}

impl MembershipJson {
    pub fn new(r: &MembershipReport, tol: f64) -> Self {
        Self {
            schema: SCHEMA,
            member_on_grid: r.member_on_grid,
            min_eigenvalue: r.min_eigenvalue,
            nodes_checked: r.nodes_checked,
            tol,
            first_violation: r.first_violation.as_ref().map(Into::into),
            worst_violation: r.worst_violation.as_ref().map(Into::into),
            violations: r.violations.iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PsdSampleJson {
    pub s: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub min_eigenvalue: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateJson {
    pub schema: &'static str,
    pub valid: bool,
    pub epsilon: f64,
    pub theta_c: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub lhs_numeric: f64,
    pub rhs_direct: f64,
    pub endpoint_gap: f64,
    pub psd_samples: Vec<PsdSampleJson>,
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        Self {
            schema: SCHEMA,
            valid: c.valid,
            epsilon: c.spec.epsilon,
            theta_c: c.spec.theta_c,
            lhs: c.separation.lhs,
            rhs: c.separation.rhs,
            margin: c.margin(),
            lhs_numeric: c.lhs_numeric,
            rhs_direct: c.rhs_direct,
            endpoint_gap: c.endpoint_gap,
            psd_samples: c
                .psd
                .samples
                .iter()
                .map(|s| {
                    let [c1, c2, c3, c4] = s.coefficients;
                    PsdSampleJson { s: s.s, c1, c2, c3, c4, min_eigenvalue: s.min_eigenvalue, passed: s.passed }
                })
                .collect(),
        }
    }
}

/// Path samples as CSV with columns `s,t,x,theta,z`. `theta` is unwrapped
/// along the path so it plots without jumps at ±π.
pub fn path_csv(path: &[PathSample]) -> String {
    let mut out = String::from("s,t,x,theta,z\n");
    let mut theta: Option<f64> = None;
    for sample in path {
        let here = sample.internal.parallel_angle().unwrap_or(0.0);
        let unwrapped = match theta {
            Some(prev) => prev + signed_angle_difference(prev, here),
            None => here,
        };
        theta = Some(unwrapped);
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            sample.s,
            sample.point.t,
            sample.point.x,
            unwrapped,
            sample.internal.latitude()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_string_round_trip() {
        let g = parse_grid("-1, 1, -2, 2, 3, 5").unwrap();
        assert_eq!(g.bounds(), [-1.0, 1.0, -2.0, 2.0]);
        assert_eq!(g.shape(), (3, 5));
        assert!(parse_grid("0,1,0,1,3").is_err());
        assert!(parse_grid("0,1,0,1,3,x").is_err());
        assert!(parse_grid("1,0,0,1,3,3").is_err());
    }

    #[test]
    fn pure_state_forms() {
        let a: PureJson = serde_json::from_str(r#"{"xi": [[2, 0], [0, 0]]}"#).unwrap();
        assert!(a.to_state().unwrap().approx_eq(&PureInternalState::north()));
        let b: PureJson = serde_json::from_str(r#"{"bloch": [0, 0, -1]}"#).unwrap();
        assert!(b.to_state().unwrap().approx_eq(&PureInternalState::south()));
        let c: PureJson = serde_json::from_str(r#"{"bloch": [0, 0, 0.5]}"#).unwrap();
        assert!(c.to_state().is_err());
    }

    #[test]
    fn element_without_c() {
        let e: ElementJson = serde_json::from_str(r#"{"a": "t", "b": "t"}"#).unwrap();
        e.to_element().unwrap();
        let bad: ElementJson = serde_json::from_str(r#"{"a": "t +", "b": "t"}"#).unwrap();
        assert!(bad.to_element().is_err());
    }
}
