//! Subcommands on parsed JSON input. Each returns the rendered output and
//! its exit code; input problems surface as [`CliError`].

use causalnc_core::causality::{mixed_causal, plan_causal_path, pure_causal};
use causalnc_core::cone::cone_membership;
use causalnc_core::witness::{build_mixed_witness, build_witness_with, certify, CERTIFICATE_SAMPLES};
use serde::Serialize;
use serde_json::Value;

use crate::format::{
    parse_grid, path_csv, CertificateJson, ConeCheckJson, MembershipJson, MixedPairJson, PurePairJson,
    VerdictJson,
};
use crate::{CliError, Outcome};

/// Grid used by `cone-check` when neither the input nor `--grid` gives one.
pub const DEFAULT_GRID: &str = "-1,1,-1,1,21,21";

/// Samples per path when neither the input nor `--n` gives a count.
pub const DEFAULT_PATH_SAMPLES: usize = 100;

fn render<T: Serialize>(v: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

pub fn check_pure(input: &str) -> Result<Outcome, CliError> {
    let pair: PurePairJson = serde_json::from_str(input)?;
    let (a, b, dirac) = pair.states()?;
    let v = pure_causal(&a, &b, dirac);
    Ok(Outcome::new(render(&VerdictJson::from(&v))?, v.related))
}

pub fn check_mixed(input: &str) -> Result<Outcome, CliError> {
    let pair: MixedPairJson = serde_json::from_str(input)?;
    let (a, b, dirac) = pair.states()?;
    let v = mixed_causal(&a, &b, dirac);
    Ok(Outcome::new(render(&VerdictJson::from(&v))?, v.related))
}

/// `grid` from the command line takes precedence over the input's.
pub fn cone_check(input: &str, grid: Option<&str>, tol: f64) -> Result<Outcome, CliError> {
    let req: ConeCheckJson = serde_json::from_str(input)?;
    let el = req.element.to_element()?;
    let dirac = req.dirac.to_dirac()?;
    let region = parse_grid(grid.or(req.grid.as_deref()).unwrap_or(DEFAULT_GRID))?;
    let report = cone_membership(&el, dirac, &region, tol)?;
    Ok(Outcome::new(render(&MembershipJson::new(&report, tol))?, report.member_on_grid))
}

/// Pure input uses `xi`/`phi`; mixed input uses `rho`/`sigma`. Exit 0 iff
/// the certificate is valid.
pub fn witness(input: &str, n: Option<usize>) -> Result<Outcome, CliError> {
    let raw: Value = serde_json::from_str(input)?;
    let is_mixed = raw.get("rho").is_some() || raw.get("sigma").is_some();
    let (spec, samples) = if is_mixed {
        let pair: MixedPairJson = serde_json::from_value(raw)?;
        let (a, b, dirac) = pair.states()?;
        (build_mixed_witness(&a, &b, dirac)?, n)
    } else {
        let pair: PurePairJson = serde_json::from_value(raw)?;
        let (a, b, dirac) = pair.states()?;
        (build_witness_with(&a, &b, dirac, pair.curve()?, pair.epsilon)?, n.or(pair.n))
    };
    let samples = samples.unwrap_or(CERTIFICATE_SAMPLES);
    if samples < 2 {
        return Err(CliError::Input(format!("need at least 2 certificate samples, got {samples}")));
    }
    let cert = certify(spec, samples)?;
    Ok(Outcome::new(render(&CertificateJson::from(&cert))?, cert.valid))
}

/// CSV on success; the verdict JSON with exit 1 when the pair is unrelated.
pub fn plan_path(input: &str, n: Option<usize>) -> Result<Outcome, CliError> {
    let pair: PurePairJson = serde_json::from_str(input)?;
    let (a, b, dirac) = pair.states()?;
    let v = pure_causal(&a, &b, dirac);
    if !v.related {
        return Ok(Outcome::new(render(&VerdictJson::from(&v))?, false));
    }
    let n = n.or(pair.n).unwrap_or(DEFAULT_PATH_SAMPLES);
    if n == 0 {
        return Err(CliError::Input("path needs at least one step".into()));
    }
    let path = plan_causal_path(&a, &b, dirac, n)?;
    Ok(Outcome::new(path_csv(&path), true))
}
