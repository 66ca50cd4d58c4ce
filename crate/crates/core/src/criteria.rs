//! Ergodicity classification, explicit rate bounds and the Lyapunov-type
//! sufficient conditions.

use alloc::format;

use crate::sigma::{
    delta, delta_minus, delta_plus, i_integral, mu_total, regime, CriterionValue, Regime, SigmaProfile, Tail, TailExponent,
};
use crate::special::gamma;
use crate::{AlphaConstants, Error, Result};

// Float math for no_std builds; shadowed by std's inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

impl TriState {
    pub fn as_str(self) -> &'static str {
        match self {
            TriState::Yes => "yes",
            TriState::No => "no",
            TriState::Unknown => "unknown",
        }
    }
}

/// Criterion values and the three verdicts. A `None` value means the tail
/// behaviour of σ could not be determined.
#[derive(Debug, Clone, PartialEq)]
pub struct ErgodicityReport {
    pub alpha: f64,
    pub ergodic: TriState,
    pub exponentially_ergodic: TriState,
    pub strongly_ergodic: TriState,
    pub mu_total: Option<CriterionValue>,
    pub delta: Option<CriterionValue>,
    pub delta_plus: Option<CriterionValue>,
    pub delta_minus: Option<CriterionValue>,
    pub i_integral: Option<CriterionValue>,
}

fn known(r: Result<CriterionValue>) -> Result<Option<CriterionValue>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::TailUndetermined(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn verdict(v: &Option<CriterionValue>) -> TriState {
    match v {
        None => TriState::Unknown,
        Some(c) if c.is_finite() => TriState::Yes,
        Some(_) => TriState::No,
    }
}

/// Ergodic iff μ(ℝ) < ∞, exponentially ergodic iff δ < ∞, strongly ergodic
/// iff I < ∞.
pub fn classify(profile: &SigmaProfile, alpha: f64) -> Result<ErgodicityReport> {
    AlphaConstants::new(alpha)?;
    let mu = known(mu_total(profile, alpha))?;
    let d = known(delta(profile, alpha))?;
    let dp = known(delta_plus(profile, alpha))?;
    let dm = known(delta_minus(profile, alpha))?;
    let i = known(i_integral(profile, alpha))?;
    Ok(ErgodicityReport {
        alpha,
        ergodic: verdict(&mu),
        exponentially_ergodic: verdict(&d),
        strongly_ergodic: verdict(&i),
        mu_total: mu,
        delta: d,
        delta_plus: dp,
        delta_minus: dm,
        i_integral: i,
    })
}

/// Rate bounds; a bound is `None` when its governing criterion is infinite
/// or unknown.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RateBounds {
    /// λ₁ ≥ 1/(4ω_α δ).
    pub lambda1_lower: Option<f64>,
    /// λ₀(ℝ∖{0}) ≥ 1/(4ω_α δ).
    pub lambda0_lower: Option<f64>,
    /// λ₀(ℝ∖{0}) ≤ (2/ω_α)(1/δ₊ + 1/δ₋).
    pub lambda0_upper: Option<f64>,
    /// λ₀((0,∞)) ≥ (α−1)Γ(α/2)²/(4δ₊).
    pub lambda0_halfline_lower: Option<f64>,
    /// κ ≥ 1/(ω_α I).
    pub kappa_lower: Option<f64>,
}

impl RateBounds {
    pub fn is_empty(&self) -> bool {
        *self == RateBounds::default()
    }
}

fn bounds_from(c: &AlphaConstants, d: Option<f64>, dp: Option<f64>, dm: Option<f64>, i: Option<f64>) -> RateBounds {
    let w = c.omega();
    let lower = d.map(|d| 1.0 / (4.0 * w * d));
    RateBounds {
        lambda1_lower: lower,
        lambda0_lower: lower,
        lambda0_upper: match (dp, dm) {
            (Some(p), Some(m)) => Some(2.0 / w * (1.0 / p + 1.0 / m)),
            _ => None,
        },
        lambda0_halfline_lower: dp.map(|p| (c.alpha() - 1.0) * c.gamma_half_sq() / (4.0 * p)),
        kappa_lower: i.map(|i| 1.0 / (w * i)),
    }
}

pub fn rate_bounds_from_report(report: &ErgodicityReport) -> Result<RateBounds> {
    let c = AlphaConstants::new(report.alpha)?;
    let f = |v: &Option<CriterionValue>| v.as_ref().and_then(CriterionValue::finite);
    Ok(bounds_from(&c, f(&report.delta), f(&report.delta_plus), f(&report.delta_minus), f(&report.i_integral)))
}

pub fn rate_bounds(profile: &SigmaProfile, alpha: f64) -> Result<RateBounds> {
    rate_bounds_from_report(&classify(profile, alpha)?)
}

/// Closed forms for σ(x) = (1+|x|)^γ.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialForms {
    pub gamma: f64,
    pub mu_total: f64,
    pub delta_plus: CriterionValue,
    pub delta: CriterionValue,
    pub i_integral: CriterionValue,
    pub bounds: RateBounds,
    /// The cruder κ ≥ α(γ−1)/(2ω_α), from I ≤ 2/(α(γ−1)).
    pub kappa_lower_corollary: Option<f64>,
}

pub fn polynomial_closed_forms(gamma_exp: f64, alpha: f64) -> Result<PolynomialForms> {
    let c = AlphaConstants::new(alpha)?;
    if !(gamma_exp * alpha > 1.0) {
        return Err(Error::Domain(format!("gamma = {gamma_exp} <= 1/alpha: not ergodic")));
    }
    let g = gamma_exp;
    let a = alpha;
    let exact = |value: f64, argsup: Option<f64>| CriterionValue::Finite { value, abs_error: 0.0, argsup };
    let (dp, d) = if g > 1.0 {
        let b = a * (g - 1.0);
        let v = (a - 1.0).powf(a - 1.0) * b.powf(b) / (a * g - 1.0).powf(a * g);
        let x = (a - 1.0) / b;
        (exact(v, Some(x)), exact(2.0 * v, Some(x)))
    } else if g == 1.0 {
        let v = 1.0 / (a - 1.0);
        (exact(v, Some(f64::INFINITY)), exact(2.0 * v, Some(f64::INFINITY)))
    } else {
        let inf = || CriterionValue::Infinite { reason: format!("gamma = {g} < 1") };
        (inf(), inf())
    };
    let i = if g > 1.0 {
        // 2∫_0^∞ x^{α−1}(1+x)^{−αγ} dx = 2B(α, α(γ−1))
        exact(2.0 * gamma(a) * gamma(a * (g - 1.0)) / gamma(a * g), None)
    } else {
        CriterionValue::Infinite { reason: format!("gamma = {g} <= 1") }
    };
    let bounds = bounds_from(&c, d.finite(), dp.finite(), dp.finite(), i.finite());
    Ok(PolynomialForms {
        gamma: g,
        mu_total: 2.0 / (a * g - 1.0),
        delta_plus: dp,
        delta: d,
        i_integral: i,
        bounds,
        kappa_lower_corollary: (g > 1.0).then(|| a * (g - 1.0) / (2.0 * c.omega())),
    })
}

/// Outcome of the Lyapunov-type sufficient conditions. They are advisory:
/// a non-positive liminf proves nothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovCheck {
    /// liminf σ(x)/|x| (may be +∞).
    pub a1: f64,
    /// (γ, liminf σ(x)/|x|^γ) for the estimated tail exponent γ > 1.
    pub a2: Option<(f64, f64)>,
    pub exponential_sufficient: bool,
    pub strong_sufficient: bool,
}

impl LyapunovCheck {
    pub fn verdict(&self) -> &'static str {
        match (self.exponential_sufficient, self.strong_sufficient) {
            (_, true) => "sufficient for strong ergodicity",
            (true, false) => "sufficient for exponential ergodicity",
            _ => "inconclusive",
        }
    }
}

/// min over x ∈ [10³, 10⁶] (both signs) of σ(x)/|x|^γ.
fn sampled_liminf(profile: &SigmaProfile, gamma_exp: f64, signs: &[f64]) -> Result<f64> {
    let mut m = f64::INFINITY;
    for &s in signs {
        for k in 0..=30 {
            let x = 10f64.powf(3.0 + 0.1 * k as f64);
            m = m.min(profile.eval(s * x)? / x.powf(gamma_exp));
        }
    }
    Ok(m)
}

fn liminf(profile: &SigmaProfile, tails: [(f64, Tail); 2], gamma_exp: f64) -> Result<f64> {
    let mut out = f64::INFINITY;
    for (s, t) in tails {
        let v = match regime(t, gamma_exp) {
            Regime::Below => 0.0,
            Regime::Above => f64::INFINITY,
            Regime::Critical => sampled_liminf(profile, gamma_exp, &[s])?,
        };
        out = out.min(v);
    }
    Ok(out)
}

pub fn lyapunov_check(profile: &SigmaProfile, alpha: f64) -> Result<LyapunovCheck> {
    AlphaConstants::new(alpha)?;
    let t = profile.tail_exponents()?;
    let tails = [(1.0, t.plus), (-1.0, t.minus)];
    let a1 = liminf(profile, tails, 1.0)?;
    let slowest = tails
        .iter()
        .map(|(_, t)| match t.exponent {
            TailExponent::Finite(g) => g,
            TailExponent::PlusInfinity => f64::INFINITY,
            TailExponent::MinusInfinity => f64::NEG_INFINITY,
        })
        .fold(f64::INFINITY, f64::min);
    let a2 = if slowest == f64::INFINITY {
        Some((2.0, f64::INFINITY))
    } else if regime(Tail { exponent: TailExponent::Finite(slowest), exact: t.plus.exact }, 1.0) == Regime::Above {
        Some((slowest, liminf(profile, tails, slowest)?))
    } else {
        None
    };
    Ok(LyapunovCheck { a1, a2, exponential_sufficient: a1 > 0.0, strong_sufficient: matches!(a2, Some((_, v)) if v > 0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use TriState::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        ((a - b) / b).abs() <= rel
    }

    #[test]
    fn corollary_classification_table() {
        let cases = [(0.5, [No, No, No]), (0.7, [Yes, No, No]), (1.0, [Yes, Yes, No]), (2.0, [Yes, Yes, Yes])];
        for (g, want) in cases {
            let r = classify(&SigmaProfile::polynomial(g).unwrap(), 1.5).unwrap();
            assert_eq!([r.ergodic, r.exponentially_ergodic, r.strongly_ergodic], want, "gamma {g}");
        }
    }

    #[test]
    fn bounds_poly2() {
        let b = rate_bounds(&SigmaProfile::polynomial(2.0).unwrap(), 1.5).unwrap();
        assert!(close(b.lambda1_lower.unwrap(), 0.48240, 1e-4));
        assert_eq!(b.lambda1_lower, b.lambda0_lower);
        assert!(close(b.lambda0_upper.unwrap(), 15.437, 1e-4));
        assert!(close(b.kappa_lower.unwrap(), 0.79788, 1e-4));
        assert!(close(b.lambda0_halfline_lower.unwrap(), 1.15594, 1e-4));
        assert!(close(b.lambda0_upper.unwrap() / b.lambda0_lower.unwrap(), 32.0, 1e-10));
    }

    #[test]
    fn bounds_poly1_and_constant() {
        let b = rate_bounds(&SigmaProfile::polynomial(1.0).unwrap(), 1.5).unwrap();
        assert!(close(b.lambda0_lower.unwrap(), 0.039164, 1e-4));
        // (2/ω)(1/δ₊ + 1/δ₋) with δ± = 1/(α−1)
        assert!(close(b.lambda0_upper.unwrap(), 4.0 * 0.5 / 1.5957691216057307, 1e-8));
        assert_eq!(b.kappa_lower, None);
        let b = rate_bounds(&SigmaProfile::expression("1").unwrap(), 1.5).unwrap();
        assert!(b.is_empty());
    }

    #[test]
    fn closed_forms_poly2() {
        let f = polynomial_closed_forms(2.0, 1.5).unwrap();
        let want = 2f64.powf(-0.5) * 1.5f64.powf(1.5) / 8.0;
        assert!(close(f.delta_plus.finite().unwrap(), want, 1e-14));
        assert!(close(f.i_integral.finite().unwrap(), core::f64::consts::FRAC_PI_4, 1e-13));
        assert!(close(f.kappa_lower_corollary.unwrap(), 0.46999, 1e-4));
        assert!(f.kappa_lower_corollary.unwrap() <= f.bounds.kappa_lower.unwrap());
        assert!(matches!(polynomial_closed_forms(0.6, 1.5), Err(Error::Domain(_))));
        let f = polynomial_closed_forms(1.0, 1.5).unwrap();
        assert!(close(f.bounds.lambda0_lower.unwrap(), 0.039164, 1e-4));
        assert!(close(f.bounds.lambda0_upper.unwrap(), 1.25331, 1e-4));
    }

    #[test]
    fn lyapunov_examples() {
        let l = lyapunov_check(&SigmaProfile::polynomial(1.0).unwrap(), 1.5).unwrap();
        assert!((l.a1 - 1.0).abs() < 1e-5 && l.exponential_sufficient && !l.strong_sufficient);
        let l = lyapunov_check(&SigmaProfile::polynomial(2.0).unwrap(), 1.5).unwrap();
        let (g, a2) = l.a2.unwrap();
        assert_eq!(g, 2.0);
        assert!(a2 > 0.0 && l.strong_sufficient);
        let l = lyapunov_check(&SigmaProfile::expression("1").unwrap(), 1.5).unwrap();
        assert_eq!(l.a1, 0.0);
        assert_eq!(l.verdict(), "inconclusive");
    }

    #[test]
    fn undetermined_tail_is_unknown() {
        let p = SigmaProfile::expression("(1+abs(x))*log(2+abs(x))").unwrap();
        let r = classify(&p, 1.5).unwrap();
        assert_eq!(r.strongly_ergodic, Unknown);
        assert!(r.i_integral.is_none());
    }
}
