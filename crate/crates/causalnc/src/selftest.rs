//! Reduced-scale self-test battery. Each check compares the library
//! against an oracle computed here.

use std::f64::consts::PI;

use causalnc_core::causality::{
    mixed_causal, mixed_required_angle, plan_causal_path, pure_causal, unitary_transport_check, MixedState,
    PureState,
};
use causalnc_core::cone::{
    cone_matrix_from_jet, cone_membership, conformal_rescale_matrix, is_psd, AlgebraElement, ElementJet,
    RegionGrid,
};
use causalnc_core::field::{Expr, Func};
use causalnc_core::minkowski::SpacetimePoint;
use causalnc_core::oracle::{cross_validate_pure, lemma_b_element, Family, SamplerConfig};
use causalnc_core::states::{angular_distance, DiracData, InternalUnitary, PureInternalState};
use causalnc_core::witness::{lhs_numeric, refute_with_witness};
use causalnc_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::format::SCHEMA;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub schema: &'static str,
    pub seed: u64,
    pub quick: bool,
    /// Tolerance as given; `null` in JSON when it did not parse.
    pub tol: Option<f64>,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Problem sizes for one run.
#[derive(Debug, Clone, Copy)]
struct Scale {
    grid: usize,
    pairs: usize,
    witnesses: usize,
    elements: usize,
    oracle_pairs: usize,
    unitaries: usize,
    matrices: usize,
    expressions: usize,
    paths: usize,
}

const QUICK: Scale = Scale {
    grid: 8,
    pairs: 100,
    witnesses: 10,
    elements: 200,
    oracle_pairs: 10,
    unitaries: 10,
    matrices: 200,
    expressions: 10,
    paths: 10,
};

const FULL: Scale = Scale {
    grid: 12,
    pairs: 300,
    witnesses: 30,
    elements: 1000,
    oracle_pairs: 30,
    unitaries: 30,
    matrices: 500,
    expressions: 25,
    paths: 30,
};

type CheckResult = Result<String, String>;

fn verdict(ok: bool, detail: String) -> CheckResult {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn pt(t: f64, x: f64) -> SpacetimePoint {
    SpacetimePoint::new(t, x).expect("finite point")
}

fn on_parallel(z: f64, theta: f64) -> PureInternalState {
    PureInternalState::from_latitude_angle(z, theta).expect("valid latitude")
}

fn random_state(r: &mut ChaCha8Rng) -> PureInternalState {
    on_parallel(r.random_range(-1.0..1.0), r.random_range(-PI..PI))
}

fn gap(d: f64) -> DiracData {
    DiracData::new(0.25 + d, 0.25).expect("finite gap")
}

fn boosted(p: SpacetimePoint, l: f64, v: f64) -> SpacetimePoint {
    let g = 1.0 / (1.0 - v * v).sqrt();
    pt(p.t + l * g, p.x + l * g * v)
}

/// Run the battery. `tol` is the PSD tolerance under test; `None` means the
/// override did not parse.
pub fn run(seed: u64, quick: bool, tol: Option<f64>) -> Summary {
    let scale = if quick { QUICK } else { FULL };
    let t = tol.unwrap_or(f64::NAN);
    let rng = |k: u64| {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        r.set_stream(k);
        r
    };
    let battery: Vec<(&'static str, Box<dyn Fn() -> CheckResult>)> = vec![
        ("tolerance", Box::new(move || tolerance_sane(tol))),
        ("cone-reference-elements", Box::new(move || reference_elements(t))),
        ("pure-oracle-grid", Box::new(move || pure_grid(scale.grid))),
        ("necessary-conditions", Box::new(move || necessary(&mut rng(2), scale.pairs))),
        ("null-lockout", Box::new(move || null_lockout(&mut rng(3), scale.pairs))),
        ("witness-certificates", Box::new(move || witnesses(&mut rng(4), scale.witnesses))),
        ("oracle-soundness", Box::new(move || soundness(&mut rng(5), seed, scale, t))),
        ("order-axioms", Box::new(move || order_axioms(&mut rng(6), scale.pairs))),
        ("mixed-pure-consistency", Box::new(move || mixed_pure(&mut rng(7), scale.pairs))),
        ("unitary-equivariance", Box::new(move || unitary(&mut rng(8), scale.unitaries))),
        ("conformal-invariance", Box::new(move || conformal(&mut rng(9), scale.matrices, t))),
        ("dsl-derivatives", Box::new(move || derivatives(&mut rng(10), scale.expressions))),
        ("path-prefix", Box::new(move || path_prefix(&mut rng(11), scale.paths))),
    ];
    let checks: Vec<Check> = battery
        .into_iter()
        .map(|(name, f)| {
            let (passed, detail) = match f() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            Check { name, passed, detail }
        })
        .collect();
    Summary { schema: SCHEMA, seed, quick, tol, passed: checks.iter().all(|c| c.passed), checks }
}

fn tolerance_sane(tol: Option<f64>) -> CheckResult {
    match tol {
        Some(t) if t.is_finite() && t > 0.0 && t <= 1e-6 => Ok(format!("PSD tolerance {t:e}")),
        Some(t) => Err(format!("PSD tolerance {t:e} outside (0, 1e-6]")),
        None => Err("PSD tolerance override is not a number".into()),
    }
}

fn reference_elements(tol: f64) -> CheckResult {
    let dirac = DiracData::new(1.0, 0.0).map_err(|e| e.to_string())?;
    let grid = RegionGrid::square(1.0, 11).map_err(|e| e.to_string())?;
    let member = |el: &AlgebraElement| cone_membership(el, dirac, &grid, tol).map(|r| r.member_on_grid);
    let diag = |s: &str| AlgebraElement::parse(s, s, "0", "0");
    let t = member(&diag("t").map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let x = member(&diag("x").map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let lb = member(&lemma_b_element(1.0, 2.0, 0.3, 0.5, dirac)).map_err(|e| e.to_string())?;
    verdict(
        t && !x && lb,
        format!("diag(t,t) member {t}, diag(x,x) member {x}, bounded-oscillation element member {lb}"),
    )
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| if k + 1 == n { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 })
}

fn pure_grid(n: usize) -> CheckResult {
    let mut bad = 0;
    let mut cases = 0;
    for t in linspace(0.0, 3.0, n) {
        for u in linspace(-1.0, 1.0, n) {
            for dth in linspace(0.0, PI, n) {
                for d in [0.5, 1.0, 2.0, 5.0, 10.0] {
                    let dx = t * u;
                    let a = PureState::new(pt(0.0, 0.0), on_parallel(0.3, 0.7));
                    let b = PureState::new(pt(t, dx), on_parallel(0.3, 0.7 + dth));
                    let lhs = (t * t - dx * dx).max(0.0).sqrt();
                    let want = lhs >= dth / d - 1e-12;
                    let ambiguous = (lhs - dth / d + 1e-12).abs() < 1e-14;
                    cases += 1;
                    bad += (pure_causal(&a, &b, gap(d)).related != want && !ambiguous) as usize;
                }
            }
        }
    }
    verdict(bad == 0, format!("{cases} grid cases, {bad} mismatches"))
}

fn necessary(r: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let mut related = 0;
    for _ in 0..n {
        let p = pt(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        let q = boosted(p, r.random_range(0.0..10.0), r.random_range(-0.99..0.99));
        let z1: f64 = r.random_range(-0.9..0.9);
        let z2 = z1 + r.random_range(0.01..0.1);
        let a = PureState::new(p, on_parallel(z1, 0.0));
        let b = PureState::new(q, on_parallel(z2, 0.0));
        related += pure_causal(&a, &b, gap(1.0)).related as usize;

        let d = r.random_range(-5.0..5.0);
        let flat = DiracData::new(d, d).map_err(|e| e.to_string())?;
        let (xi, phi) = (on_parallel(z1, 0.0), on_parallel(z1, r.random_range(0.01..PI)));
        related += pure_causal(&PureState::new(p, xi), &PureState::new(q, phi), flat).related as usize;

        let past = pt(p.t - r.random_range(1e-6..3.0), p.x + r.random_range(-1.0..1.0));
        related += pure_causal(&PureState::new(p, xi), &PureState::new(past, xi), gap(1.0)).related as usize;
    }
    verdict(related == 0, format!("{} pairs violating a necessary condition, {related} related", 3 * n))
}

fn null_lockout(r: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let mut related = 0;
    for _ in 0..n {
        let t = r.random_range(0.0..10.0);
        let sign = if r.random::<bool>() { 1.0 } else { -1.0 };
        let z = r.random_range(-0.99..0.99);
        let a = PureState::new(pt(0.0, 0.0), on_parallel(z, 0.0));
        let b = PureState::new(pt(t, sign * t), on_parallel(z, r.random_range(1e-6..PI)));
        related += pure_causal(&a, &b, gap(r.random_range(0.1..1e3))).related as usize;
    }
    verdict(related == 0, format!("{n} lightlike pairs, {related} related"))
}

fn witnesses(r: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let mut failures = 0;
    let mut min_margin = f64::INFINITY;
    for _ in 0..n {
        let z = r.random_range(-0.9..0.9);
        let dth = r.random_range(0.1..PI - 0.1);
        let d = r.random_range(0.5..5.0);
        let l = r.random_range(0.05..0.99) * dth / d;
        let a = PureState::new(pt(0.0, 0.0), on_parallel(z, 0.2));
        let b = PureState::new(boosted(pt(0.0, 0.0), l, r.random_range(-0.9..0.9)), on_parallel(z, 0.2 + dth));
        match refute_with_witness(&a, &b, gap(d)) {
            Ok(cert) => {
                let rel = (lhs_numeric(&cert.spec) - cert.separation.lhs).abs() / cert.separation.lhs;
                min_margin = min_margin.min(cert.margin());
                failures += !(cert.valid && cert.margin() > 0.0 && rel <= 1e-8) as usize;
            }
            Err(_) => failures += 1,
        }
    }
    verdict(failures == 0, format!("{n} certificates, {failures} failures, min margin {min_margin:.3e}"))
}

fn soundness(r: &mut ChaCha8Rng, seed: u64, scale: Scale, tol: f64) -> CheckResult {
    let dirac = DiracData::new(1.3, 0.3).map_err(|e| e.to_string())?;
    let mut pairs = Vec::new();
    while pairs.len() < scale.oracle_pairs {
        let z = r.random_range(-0.95..0.95);
        let th = r.random_range(-PI..PI);
        let dth: f64 = r.random_range(-1.5..1.5);
        let p = pt(r.random_range(-3.0..-2.5), r.random_range(-1.0..1.0));
        let slack = if pairs.len() % 3 == 0 { 1.0 } else { 1.0 + r.random_range(0.0..1.0) };
        let q = boosted(p, (dth.abs() * slack).max(0.05), r.random_range(-0.5..0.5));
        let (a, b) = (PureState::new(p, on_parallel(z, th)), PureState::new(q, on_parallel(z, th + dth)));
        if pure_causal(&a, &b, dirac).related {
            pairs.push((a, b));
        }
    }
    let mut cfg = SamplerConfig::new(seed, scale.elements, vec![Family::DiagonalCausal, Family::LemmaB])
        .map_err(|e| e.to_string())?;
    cfg.tol = tol;
    let rep = cross_validate_pure(&pairs, dirac, &cfg).map_err(|e| e.to_string())?;
    let bad = rep.soundness_violations();
    verdict(bad == 0, format!("{} elements x {} pairs, {bad} soundness violations", rep.elements, rep.pairs.len()))
}

fn order_axioms(r: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let mut failures = 0;
    let mut chains = 0;
    for _ in 0..n {
        let z = r.random_range(-0.99..0.99);
        let dirac = gap(r.random_range(0.5..3.0));
        let (mut t, mut x, mut th) = (0.0, 0.0, r.random_range(-PI..PI));
        let mut s = Vec::new();
        for _ in 0..3 {
            s.push(PureState::new(pt(t, x), on_parallel(z, th)));
            let dt = r.random_range(0.0..1.5);
            t += dt;
            x += r.random_range(-1.0..1.0) * dt;
            th += r.random_range(-1.5..1.5);
        }
        let rel = |i: usize, j: usize| pure_causal(&s[i], &s[j], dirac).related;
        for i in 0..3 {
            failures += !rel(i, i) as usize;
            for j in 0..3 {
                if i != j && rel(i, j) && rel(j, i) {
                    failures += !(s[i].point.approx_eq(&s[j].point) && s[i].internal.approx_eq(&s[j].internal)) as usize;
                }
            }
        }
        if rel(0, 1) && rel(1, 2) {
            chains += 1;
            failures += !rel(0, 2) as usize;
        }
    }
    verdict(failures == 0, format!("{n} triples, {chains} chains, {failures} axiom failures"))
}

fn mixed_pure(r: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let mut disagree = 0;
    let mut worst = 0.0f64;
    for k in 0..n {
        let xi = random_state(r);
        let phi = if k % 5 == 0 { random_state(r) } else { on_parallel(xi.latitude(), r.random_range(-PI..PI)) };
        let p = pt(0.0, 0.0);
        let q = boosted(p, r.random_range(0.0..4.0), r.random_range(-0.9..0.9));
        let dirac = gap(r.random_range(0.2..3.0));
        let pure = pure_causal(&PureState::new(p, xi), &PureState::new(q, phi), dirac).related;
        let mixed = mixed_causal(&MixedState::new(p, xi.to_mixed()), &MixedState::new(q, phi.to_mixed()), dirac);
        disagree += (pure != mixed.related) as usize;
        let z = r.random_range(-0.99..0.99);
        let (a, b) = (r.random_range(-PI..PI), r.random_range(-PI..PI));
        let got = mixed_required_angle(&on_parallel(z, a).to_mixed(), &on_parallel(z, b).to_mixed())
            .map_err(|e| e.to_string())?;
        worst = worst.max((got - angular_distance(a, b)).abs());
    }
    verdict(disagree == 0 && worst <= 1e-8, format!("{n} pairs, {disagree} disagreements, worst angle error {worst:.2e}"))
}

fn unitary(r: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let mut pairs = Vec::new();
    for _ in 0..n {
        let xi = random_state(r);
        let phi = on_parallel(xi.latitude(), r.random_range(-PI..PI));
        let q = boosted(pt(0.0, 0.0), r.random_range(0.0..4.0), r.random_range(-0.9..0.9));
        let dirac = DiracData::new(r.random_range(-3.0..3.0), r.random_range(-3.0..3.0)).map_err(|e| e.to_string())?;
        pairs.push((PureState::new(pt(0.0, 0.0), xi), PureState::new(q, phi), dirac));
    }
    let mut failures = 0;
    for _ in 0..n {
        let u = InternalUnitary::random(r);
        for (a, b, d) in &pairs {
            failures += !unitary_transport_check(a, b, &u, *d) as usize;
        }
    }
    verdict(failures == 0, format!("{n} unitaries x {n} pairs, {failures} failures"))
}

fn conformal(r: &mut ChaCha8Rng, n: usize, tol: f64) -> CheckResult {
    let mut flips = 0;
    let mut psd = 0;
    for k in 0..n {
        let mut c = || Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        let cc = [c(), c(), c()];
        let dirac = DiracData::new(r.random_range(-3.0..3.0), r.random_range(-3.0..3.0)).map_err(|e| e.to_string())?;
        let a1: f64 = r.random_range(-1.0..1.0);
        let a0 = if k % 2 == 0 {
            r.random_range(-2.0..2.0)
        } else {
            (cc[1].norm() + cc[2].norm() + dirac.gap() * cc[0].norm() + a1.abs()) * (1.0 + r.random_range(0.0..0.3))
        };
        let jet = ElementJet { a: [0.0, a0, a1], b: [0.0, a0, a1], c: cc };
        let m = cone_matrix_from_jet(&jet, dirac);
        let base = is_psd(&m, tol);
        psd += base as usize;
        for omega in [1e-3, 0.5, 1.0, 2.0, 1e3] {
            let scaled = conformal_rescale_matrix(&m, omega).map_err(|e| e.to_string())?;
            flips += (is_psd(&scaled, tol) != base) as usize;
        }
    }
    verdict(flips == 0, format!("{n} matrices ({psd} PSD) x 5 factors, {flips} verdict changes"))
}

fn random_expr(r: &mut ChaCha8Rng, depth: usize) -> Expr {
    if depth == 0 || r.random_range(0..4) == 0 {
        return match r.random_range(0..3) {
            0 => Expr::t(),
            1 => Expr::x(),
            _ => Expr::num(r.random_range(1..200) as f64 / 100.0),
        };
    }
    let op = r.random_range(0..8);
    let mut sub = || random_expr(r, depth - 1);
    match op {
        0 => sub() + sub(),
        1 => sub() * sub(),
        2 => sub() / (Expr::num(2.0) + Expr::call(Func::Cos, sub())),
        3 => Expr::call(Func::Sin, sub()),
        4 => Expr::call(Func::Tanh, sub()),
        5 => Expr::call(Func::Exp, Expr::call(Func::Sin, sub())),
        6 => Expr::call(Func::Log, Expr::num(1.0) + sub().pow(2)),
        _ => Expr::call(Func::Atan, sub()) - sub(),
    }
}

fn richardson<F: Fn(f64) -> f64>(f: F, at: f64) -> f64 {
    let h = 1e-3;
    let d1 = (f(at + h) - f(at - h)) / (2.0 * h);
    let d2 = (f(at + h / 2.0) - f(at - h / 2.0)) / h;
    (4.0 * d2 - d1) / 3.0
}

fn derivatives(r: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let mut worst = 0.0f64;
    for _ in 0..n {
        let built = random_expr(r, 5);
        let e = Expr::parse(&built.to_string()).map_err(|e| e.to_string())?;
        if e != built {
            return Err(format!("print/parse mismatch for {built}"));
        }
        for _ in 0..20 {
            let (t, x) = (r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
            let fe = e.eval(pt(t, x)).map_err(|err| err.to_string())?;
            let value = |t: f64, x: f64| e.eval(pt(t, x)).map(|v| v.value).unwrap_or(f64::NAN);
            let ft = richardson(|s| value(s, x), t);
            let fx = richardson(|s| value(t, s), x);
            for (exact, approx) in [(fe.d_dt, ft), (fe.d_dx, fx)] {
                worst = worst.max((exact - approx).abs() / exact.abs().max(1e-3));
            }
        }
    }
    verdict(worst < 1e-6, format!("{n} expressions x 20 points, worst relative error {worst:.2e}"))
}

fn path_prefix(r: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let mut failures = 0;
    for _ in 0..n {
        let z = r.random_range(-0.95..0.95);
        let dth = r.random_range(-PI..PI);
        let d = r.random_range(0.5..4.0);
        let slack = 1.0 + r.random_range(0.0..1.0);
        let q = boosted(pt(0.0, 0.0), dth.abs() / d * slack, r.random_range(-0.9..0.9));
        let a = PureState::new(pt(0.0, 0.0), on_parallel(z, 0.0));
        let b = PureState::new(q, on_parallel(z, dth));
        let path = plan_causal_path(&a, &b, gap(d), 32).map_err(|e| e.to_string())?;
        for s in &path {
            let here = PureState::new(s.point, s.internal);
            failures += !pure_causal(&a, &here, gap(d)).related as usize;
            failures += !pure_causal(&here, &b, gap(d)).related as usize;
        }
    }
    verdict(failures == 0, format!("{n} paths with 32 steps, {failures} unrelated prefixes"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_battery_passes() {
        let s = run(0, true, Some(crate::DEFAULT_TOL));
        for c in &s.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn corrupted_tolerance_fails_named_checks() {
        let s = run(0, true, Some(1e3));
        let failed: Vec<_> = s.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        assert!(failed.contains(&"tolerance"));
        assert!(failed.contains(&"cone-reference-elements"));
        assert!(!s.passed);
        assert!(!run(0, true, None).passed);
    }
}
