//! Brute-force cross-validation of the closed-form verdicts.
//!
//! Random elements of the causal cone are drawn from explicit families that
//! are causal by construction, each certified on a grid before use. For a
//! related pair `ω ⪯ η` no causal element may give `ω(a) > η(a)`; a sampled
//! violation therefore exposes a soundness bug. Sampling can never prove
//! that two states are unrelated, so unviolated non-related pairs are
//! reported as inconclusive; refutation is the job of [`crate::witness`].

use alloc::vec::Vec;
use core::f64::consts::{E, SQRT_2, TAU};

use libm::sqrt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::causality::{pure_causal, PureState};
use crate::cone::{cone_membership, AlgebraElement, ElementValue, RegionGrid};
use crate::field::{Expr, Func};
use crate::minkowski::SpacetimePoint;
use crate::states::{DiracData, MixedInternalState, PureInternalState};
use crate::tol;
use crate::{Complex64, Error, Result};

/// Anything that can be evaluated pointwise as a Hermitian element.
pub trait Observable {
    fn value_at(&self, p: SpacetimePoint) -> Result<ElementValue>;
}

impl Observable for AlgebraElement {
    fn value_at(&self, p: SpacetimePoint) -> Result<ElementValue> {
        AlgebraElement::value_at(self, p)
    }
}

/// `ξ* a ξ = |ξ1|² a + |ξ2|² b − 2 Re{ξ1* ξ2 c}`.
pub fn pure_pairing(v: &ElementValue, xi: &PureInternalState) -> f64 {
    let (x1, x2) = (xi.xi1(), xi.xi2());
    x1.norm_sqr() * v.a + x2.norm_sqr() * v.b - 2.0 * (x1.conj() * x2 * v.c).re
}

/// `Tr ρ a = ½[(1 + r_z) a + (1 − r_z) b] − Re{(r_x + i r_y) c}`.
pub fn mixed_pairing(v: &ElementValue, rho: &MixedInternalState) -> f64 {
    0.5 * ((1.0 + rho.rz) * v.a + (1.0 - rho.rz) * v.b) - (Complex64::new(rho.rx, rho.ry) * v.c).re
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `c = 0` with `a`, `b` causal functions (`∂_t f ≥ |∂_x f|`).
    DiagonalCausal,
    /// `a = b = K t` with a bounded Gaussian `c` and `K` above the bound that
    /// makes the element causal.
    LemmaB,
    /// Constant `a`, `b`, `c`; causal only for degenerate Dirac data.
    ConstantDegenerate,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::DiagonalCausal => "DIAGONAL_CAUSAL",
            Family::LemmaB => "LEMMA_B",
            Family::ConstantDegenerate => "CONSTANT_DEGENERATE",
        }
    }
}

/// Upper ends of the parameter ranges; lower ends are zero unless noted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ranges {
    /// Constant offset of diagonal functions, drawn from `[−offset, offset]`.
    pub offset: f64,
    /// Coefficient of `t`.
    pub slope: f64,
    /// Coefficients of the `tanh(μ(t+x))` and `atan(μ(t−x))` terms.
    pub wave: f64,
    /// Rates `μ`, drawn from `(0, rate]`.
    pub rate: f64,
    /// Amplitude of the Gaussian `c`.
    pub amplitude: f64,
    /// Angular frequency of the Gaussian `c`.
    pub frequency: f64,
    /// Relative excess of `K` over the causality bound.
    pub margin: f64,
    /// Magnitude of constant elements.
    pub constant: f64,
}

impl Default for Ranges {
    fn default() -> Self {
        Self {
            offset: 1.0,
            slope: 2.0,
            wave: 2.0,
            rate: 3.0,
            amplitude: 1.0,
            frequency: 3.0,
            margin: 0.5,
            constant: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub n_elements: usize,
    pub families: Vec<Family>,
    pub ranges: Ranges,
    /// Grid on which every generated element is certified.
    pub region: RegionGrid,
    /// Relative PSD tolerance of the certification.
    pub tol: f64,
}

impl SamplerConfig {
    /// Default ranges, certified on `[−3, 3]²` with an 11×11 grid.
    pub fn new(seed: u64, n_elements: usize, families: Vec<Family>) -> Result<Self> {
        let cfg = Self {
            seed,
            n_elements,
            families,
            ranges: Ranges::default(),
            region: RegionGrid::square(3.0, 11)?,
            tol: tol::PSD_REL,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_elements == 0 {
            return Err(Error::Config("n_elements must be at least 1"));
        }
        if self.families.is_empty() {
            return Err(Error::Config("at least one family is required"));
        }
        let r = &self.ranges;
        let all = [r.offset, r.slope, r.wave, r.rate, r.amplitude, r.frequency, r.margin, r.constant];
        if !all.iter().all(|v| v.is_finite() && *v > 0.0) {
            return Err(Error::Config("ranges must be positive and finite"));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(Error::Config("tolerance must be non-negative"));
        }
        Ok(())
    }
}

/// `coef·e`, dropping the factor when it is 1.
fn scaled(coef: f64, e: Expr) -> Expr {
    if coef == 1.0 {
        e
    } else {
        Expr::num(coef) * e
    }
}

/// `κ + α t + β tanh(μ1 (t + x)) + γ atan(μ2 (t − x))`, skipping zero terms.
///
/// Both wave terms have `∂_t = ±∂_x ≥ 0`, so with `α, β, γ, μ1, μ2 ≥ 0` the
/// function satisfies `∂_t f − |∂_x f| ≥ α ≥ 0`.
pub fn diagonal_causal_function(kappa: f64, alpha: f64, beta: f64, mu1: f64, gamma: f64, mu2: f64) -> Expr {
    let terms = [
        (kappa != 0.0).then(|| Expr::num(kappa)),
        (alpha != 0.0).then(|| scaled(alpha, Expr::t())),
        (beta != 0.0).then(|| scaled(beta, Expr::call(Func::Tanh, scaled(mu1, Expr::t() + Expr::x())))),
        (gamma != 0.0).then(|| scaled(gamma, Expr::call(Func::Atan, scaled(mu2, Expr::t() - Expr::x())))),
    ];
    terms
        .into_iter()
        .flatten()
        .reduce(|acc, e| acc + e)
        .unwrap_or_else(|| Expr::num(0.0))
}

/// `max_{R²} (|∂_t c| + |∂_x c|)/A + d` for `c = A e^{−(t²+x²)} e^{i(ωt+φ0)}`,
/// bounded by `2√2 e^{−1/2} + ω + d`.
pub fn lemma_b_bound(amplitude: f64, omega: f64, dirac: DiracData) -> f64 {
    amplitude * (2.0 * SQRT_2 / sqrt(E) + omega + dirac.gap())
}

/// `a = b = K t`, `c = A e^{−(t²+x²)} (cos(ωt+φ0) + i sin(ωt+φ0))` with
/// `K = (1 + margin)·A(2√2 e^{−1/2} + ω + d)`.
pub fn lemma_b_element(amplitude: f64, omega: f64, phase: f64, margin: f64, dirac: DiracData) -> AlgebraElement {
    let k = (1.0 + margin) * lemma_b_bound(amplitude, omega, dirac);
    let diag = scaled(k, Expr::t());
    let envelope = scaled(amplitude, Expr::call(Func::Exp, -(Expr::t().pow(2) + Expr::x().pow(2))));
    let arg = scaled(omega, Expr::t()) + Expr::num(phase);
    AlgebraElement::new(
        diag.clone(),
        diag,
        envelope.clone() * Expr::call(Func::Cos, arg.clone()),
        envelope * Expr::call(Func::Sin, arg),
    )
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    rng.random::<f64>()
}

/// Element `k` of the stream for `cfg`, certified on `cfg.region`.
///
/// The stream is reproducible: element `k` depends only on `(cfg, k, dirac)`.
pub fn sample_causal_element(cfg: &SamplerConfig, k: usize, dirac: DiracData) -> Result<AlgebraElement> {
    cfg.validate()?;
    let family = cfg.families[k % cfg.families.len()];
    if family == Family::ConstantDegenerate && !dirac.is_degenerate() {
        return Err(Error::Config("constant elements are causal only for degenerate Dirac data"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(k as u64);
    let r = &cfg.ranges;
    let el = match family {
        Family::DiagonalCausal => {
            let f = |rng: &mut ChaCha8Rng| {
                diagonal_causal_function(
                    r.offset * (2.0 * unit(rng) - 1.0),
                    r.slope * unit(rng),
                    r.wave * unit(rng),
                    r.rate * (1.0 - unit(rng)),
                    r.wave * unit(rng),
                    r.rate * (1.0 - unit(rng)),
                )
            };
            let a = f(&mut rng);
            let b = f(&mut rng);
            AlgebraElement::diagonal(a, b)
        }
        Family::LemmaB => lemma_b_element(
            r.amplitude * unit(&mut rng),
            r.frequency * unit(&mut rng),
            TAU * unit(&mut rng),
            r.margin * unit(&mut rng),
            dirac,
        ),
        Family::ConstantDegenerate => {
            let mut c = || Expr::num(r.constant * (2.0 * unit(&mut rng) - 1.0));
            let (a, b, re, im) = (c(), c(), c(), c());
            AlgebraElement::new(a, b, re, im)
        }
    };
    let report = cone_membership(&el, dirac, &cfg.region, cfg.tol)?;
    if !report.member_on_grid {
        return Err(Error::GeneratorCertification {
            min_eigenvalue: report.min_eigenvalue,
        });
    }
    Ok(el)
}

/// The first `cfg.n_elements` elements of the stream.
pub fn sample_elements(cfg: &SamplerConfig, dirac: DiracData) -> Result<Vec<AlgebraElement>> {
    (0..cfg.n_elements).map(|k| sample_causal_element(cfg, k, dirac)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairVerdict {
    /// Related, and no element separates the states.
    Consistent,
    /// Related, yet some causal element separates the states.
    SoundnessViolation,
    /// Not related, and some element separates the states.
    Refuted,
    /// Not related and no separating element found, or nothing evaluated.
    Inconclusive,
}

impl PairVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            PairVerdict::Consistent => "CONSISTENT",
            PairVerdict::SoundnessViolation => "SOUNDNESS_VIOLATION",
            PairVerdict::Refuted => "REFUTED",
            PairVerdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairReport {
    pub related: bool,
    pub verdict: PairVerdict,
    /// Elements with `ω(a) > η(a) + 1e−10`.
    pub violations: usize,
    /// Elements that could be evaluated at both events.
    pub evaluated: usize,
    /// Smallest `η(a) − ω(a)` seen; negative when some element separates.
    pub worst_margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossReport {
    pub pairs: Vec<PairReport>,
    pub elements: usize,
}

impl CrossReport {
    pub fn count(&self, v: PairVerdict) -> usize {
        self.pairs.iter().filter(|p| p.verdict == v).count()
    }

    pub fn soundness_violations(&self) -> usize {
        self.count(PairVerdict::SoundnessViolation)
    }
}

/// Check every pair against the given elements. Elements that cannot be
/// evaluated at one of the two events are skipped for that pair.
pub fn cross_validate_pure_with(
    pairs: &[(PureState, PureState)],
    dirac: DiracData,
    elements: &[&dyn Observable],
) -> CrossReport {
    let pairs = pairs
        .iter()
        .map(|(omega, eta)| {
            let related = pure_causal(omega, eta, dirac).related;
            let mut violations = 0;
            let mut evaluated = 0;
            let mut worst: Option<f64> = None;
            for el in elements {
                let (Ok(vp), Ok(vq)) = (el.value_at(omega.point), el.value_at(eta.point)) else {
                    continue;
                };
                evaluated += 1;
                let gap = pure_pairing(&vq, &eta.internal) - pure_pairing(&vp, &omega.internal);
                if gap < -tol::PAIRING {
                    violations += 1;
                }
                worst = Some(worst.map_or(gap, |w| w.min(gap)));
            }
            let verdict = match (evaluated, related, violations) {
                (0, _, _) => PairVerdict::Inconclusive,
                (_, true, 0) => PairVerdict::Consistent,
                (_, true, _) => PairVerdict::SoundnessViolation,
                (_, false, 0) => PairVerdict::Inconclusive,
                (_, false, _) => PairVerdict::Refuted,
            };
            PairReport {
                related,
                verdict,
                violations,
                evaluated,
                worst_margin: worst,
            }
        })
        .collect();
    CrossReport {
        pairs,
        elements: elements.len(),
    }
}

/// Sample `cfg.n_elements` certified elements and check every pair. All
/// events must lie in the certification region.
pub fn cross_validate_pure(
    pairs: &[(PureState, PureState)],
    dirac: DiracData,
    cfg: &SamplerConfig,
) -> Result<CrossReport> {
    for (a, b) in pairs {
        for p in [a.point, b.point] {
            if !cfg.region.contains(p) {
                return Err(Error::OutsideRegion { at: p });
            }
        }
    }
    let elements = sample_elements(cfg, dirac)?;
    let refs: Vec<&dyn Observable> = elements.iter().map(|e| e as &dyn Observable).collect();
    Ok(cross_validate_pure_with(pairs, dirac, &refs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::lemma_sufficient_check;
    use crate::witness::{build_witness, WitnessElement};
    use alloc::vec;
    use core::f64::consts::FRAC_PI_2;

    fn pt(t: f64, x: f64) -> SpacetimePoint {
        SpacetimePoint::new(t, x).unwrap()
    }

    fn eq_state(t: f64, x: f64, th: f64) -> PureState {
        PureState::new(pt(t, x), PureInternalState::from_latitude_angle(0.0, th).unwrap())
    }

    fn d1() -> DiracData {
        DiracData::new(1.0, 0.0).unwrap()
    }

    #[test]
    fn family_examples() {
        let f = diagonal_causal_function(0.0, 1.0, 0.0, 1.0, 0.0, 1.0);
        assert_eq!(AlgebraElement::diagonal(f.clone(), f), AlgebraElement::parse("t", "t", "0", "0").unwrap());

        let zero = lemma_b_element(0.0, 1.0, 0.3, 0.2, d1());
        assert_eq!(zero.a, zero.b);
        assert_eq!(zero.a.eval(pt(2.0, 1.0)).unwrap().value, 0.0);

        let el = lemma_b_element(0.1, 1.0, 0.0, 0.0, d1());
        let grid = RegionGrid::square(3.0, 41).unwrap();
        assert!(cone_membership(&el, d1(), &grid, tol::PSD_REL).unwrap().member_on_grid);
        for p in grid.nodes() {
            assert!(lemma_sufficient_check(&el, d1(), p).unwrap());
        }
    }

    #[test]
    fn streams_are_deterministic_and_certified() {
        let cfg = SamplerConfig::new(11, 30, vec![Family::DiagonalCausal, Family::LemmaB]).unwrap();
        let a = sample_elements(&cfg, d1()).unwrap();
        let b = sample_elements(&cfg, d1()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a[0], a[2]);
        let other = SamplerConfig { seed: 12, ..cfg.clone() };
        assert_ne!(sample_causal_element(&other, 0, d1()).unwrap(), a[0]);

        let deg = DiracData::new(0.5, 0.5).unwrap();
        let consts = SamplerConfig::new(1, 5, vec![Family::ConstantDegenerate]).unwrap();
        assert!(sample_elements(&consts, deg).is_ok());
        assert!(matches!(sample_causal_element(&consts, 0, d1()), Err(Error::Config(_))));
        assert!(SamplerConfig::new(1, 0, vec![Family::LemmaB]).is_err());
        assert!(SamplerConfig::new(1, 1, vec![]).is_err());
    }

    #[test]
    fn related_pairs_are_never_separated() {
        let cfg = SamplerConfig::new(5, 200, vec![Family::DiagonalCausal, Family::LemmaB]).unwrap();
        let pairs = vec![
            (eq_state(0.0, 0.0, 0.0), eq_state(2.0, 0.0, FRAC_PI_2)),
            (eq_state(-1.0, 0.5, 1.0), eq_state(1.0, -0.5, 0.2)),
            (eq_state(0.0, 0.0, 0.3), eq_state(1.0, 1.0, 0.3)),
        ];
        let rep = cross_validate_pure(&pairs, d1(), &cfg).unwrap();
        assert!(rep.pairs.iter().all(|p| p.verdict == PairVerdict::Consistent), "{rep:?}");

        let far = vec![(eq_state(0.0, 0.0, 0.0), eq_state(5.0, 0.0, 0.0))];
        assert!(matches!(cross_validate_pure(&far, d1(), &cfg), Err(Error::OutsideRegion { .. })));
    }

    #[test]
    fn witness_refutes_and_empty_is_inconclusive() {
        let pair = (eq_state(0.0, 0.0, 0.0), eq_state(1.0, 0.0, FRAC_PI_2));
        let rep = cross_validate_pure_with(&[pair], d1(), &[]);
        assert_eq!(rep.pairs[0].verdict, PairVerdict::Inconclusive);
        assert_eq!(rep.pairs[0].worst_margin, None);

        let w = WitnessElement::new(build_witness(&pair.0, &pair.1, d1()).unwrap());
        let tt = AlgebraElement::parse("t", "t", "0", "0").unwrap();
        let rep = cross_validate_pure_with(&[pair], d1(), &[&tt, &w]);
        assert_eq!(rep.pairs[0].verdict, PairVerdict::Refuted);
        assert_eq!(rep.pairs[0].violations, 1);
        assert!(rep.pairs[0].worst_margin.unwrap() < 0.0);
    }

    #[test]
    fn pairings_agree_on_pure_states() {
        let v = ElementValue {
            a: 0.7,
            b: -1.3,
            c: Complex64::new(0.4, -0.9),
        };
        for (z, th) in [(0.0, 0.0), (0.3, 2.0), (-0.8, -1.0), (1.0, 0.0)] {
            let s = PureInternalState::from_latitude_angle(z, th).unwrap();
            let p = pure_pairing(&v, &s);
            let m = mixed_pairing(&v, &s.to_mixed());
            assert!((p - m).abs() < 1e-14, "{p} vs {m}");
        }
    }
}
