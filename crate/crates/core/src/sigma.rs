//! σ profiles, the speed measure μ(dx) = σ(x)^{−α} dx and the criterion
//! functionals μ(ℝ), δ₊, δ₋, δ and I.
//!
//! Finiteness is always decided from the tail exponents of σ; quadrature only
//! ever runs on integrals already known to converge.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::RefCell;

// Float math for no_std builds; shadowed by std's inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::expr::{parse_sigma, ExprNode};
use crate::quad::{integrate, integrate_to_infinity, Estimate, QuadSpec};
use crate::special::check_alpha;
use crate::{Error, Result};

/// Default rejection threshold for σ values.
pub const DEFAULT_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    xs: Vec<f64>,
    log_sigma: Vec<f64>,
    /// Power-law exponents beyond the last node, (left, right).
    tail: (f64, f64),
    even: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SigmaKind {
    /// σ(x) = (1+|x|)^γ.
    Polynomial {
        gamma: f64,
    },
    Expression {
        expr: ExprNode,
        text: String,
    },
    Tabulated(Table),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaProfile {
    kind: SigmaKind,
    floor: f64,
}

/// Growth exponent of σ along one tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailExponent {
    Finite(f64),
    /// σ grows faster than any power.
    PlusInfinity,
    /// σ decays faster than any power.
    MinusInfinity,
}

/// A tail exponent together with whether it is exact (polynomial or
/// declared) or a numerical estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tail {
    pub exponent: TailExponent,
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailExponents {
    pub minus: Tail,
    pub plus: Tail,
}

impl SigmaProfile {
    pub fn polynomial(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidConfig(format!("polynomial exponent must be positive, got {gamma}")));
        }
        Ok(SigmaProfile { kind: SigmaKind::Polynomial { gamma }, floor: DEFAULT_FLOOR })
    }

    pub fn expression(text: &str) -> Result<Self> {
        let expr = parse_sigma(text)?;
        Ok(SigmaProfile { kind: SigmaKind::Expression { expr, text: text.into() }, floor: DEFAULT_FLOOR })
    }

    /// Tabulated σ, interpolated linearly in log σ and extended by
    /// `σ(x) = σ_end (|x|/|x_end|)^γ` beyond the end nodes.
    ///
    /// An even table lists `x ≥ 0` starting at 0 and is mirrored; otherwise
    /// the nodes must straddle 0.
    pub fn tabulated(points: &[(f64, f64)], tail_minus: f64, tail_plus: f64, even: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidConfig("a table needs at least two points".into()));
        }
        if points.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(Error::InvalidConfig("table abscissae must be strictly increasing".into()));
        }
        if let Some(&(x, s)) = points.iter().find(|p| !(p.1 > 0.0 && p.1.is_finite() && p.0.is_finite())) {
            return Err(Error::NonPositiveSigma { x, value: s });
        }
        let (first, last) = (points[0].0, points[points.len() - 1].0);
        let straddles = if even { first == 0.0 && last > 0.0 } else { first < 0.0 && last > 0.0 };
        if !straddles {
            return Err(Error::InvalidConfig(if even {
                "an even table must start at x = 0".into()
            } else {
                "table abscissae must straddle 0 (or declare the table even)".into()
            }));
        }
        if !(tail_minus.is_finite() && tail_plus.is_finite()) {
            return Err(Error::InvalidConfig("table tail exponents must be finite".into()));
        }
        let tail = if even { (tail_plus, tail_plus) } else { (tail_minus, tail_plus) };
        Ok(SigmaProfile {
            kind: SigmaKind::Tabulated(Table {
                xs: points.iter().map(|p| p.0).collect(),
                log_sigma: points.iter().map(|p| p.1.ln()).collect(),
                tail,
                even,
            }),
            floor: DEFAULT_FLOOR,
        })
    }

    pub fn with_floor(mut self, floor: f64) -> Result<Self> {
        if !(floor > 0.0) {
            return Err(Error::InvalidConfig(format!("positivity floor must be positive, got {floor}")));
        }
        self.floor = floor;
        Ok(self)
    }

    pub fn kind(&self) -> &SigmaKind {
        &self.kind
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    /// Symmetric under x ↦ −x by construction (not by numerical test).
    pub fn is_even(&self) -> bool {
        match &self.kind {
            SigmaKind::Polynomial { .. } => true,
            SigmaKind::Tabulated(t) => t.even,
            SigmaKind::Expression { .. } => false,
        }
    }

    fn raw(&self, x: f64) -> Result<f64> {
        match &self.kind {
            SigmaKind::Polynomial { gamma } => Ok((1.0 + x.abs()).powf(*gamma)),
            SigmaKind::Expression { expr, .. } => expr.eval(x),
            SigmaKind::Tabulated(t) => Ok(t.eval(x)),
        }
    }

    /// σ(x), rejecting values at or below the positivity floor.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = self.raw(x)?;
        if v > self.floor {
            Ok(v)
        } else {
            Err(Error::NonPositiveSigma { x, value: v })
        }
    }

    /// Speed-measure density σ(x)^{−α}.
    pub fn density(&self, x: f64, alpha: f64) -> Result<f64> {
        Ok(self.eval(x)?.powf(-alpha))
    }

    /// Tail exponents: exact for polynomial and tabulated kinds, estimated by
    /// log–log regression for expressions.
    pub fn tail_exponents(&self) -> Result<TailExponents> {
        match &self.kind {
            SigmaKind::Polynomial { gamma } => {
                let t = Tail { exponent: TailExponent::Finite(*gamma), exact: true };
                Ok(TailExponents { minus: t, plus: t })
            }
            SigmaKind::Tabulated(t) => Ok(TailExponents {
                minus: Tail { exponent: TailExponent::Finite(t.tail.0), exact: true },
                plus: Tail { exponent: TailExponent::Finite(t.tail.1), exact: true },
            }),
            SigmaKind::Expression { expr, .. } => Ok(TailExponents {
                minus: Tail { exponent: regress_tail(expr, -1.0)?, exact: false },
                plus: Tail { exponent: regress_tail(expr, 1.0)?, exact: false },
            }),
        }
    }

    /// lim σ(x)/|x|^γ along one side (`sign` = ±1), for the given exponent.
    pub fn tail_coefficient(&self, sign: f64, gamma: f64) -> Result<f64> {
        match &self.kind {
            SigmaKind::Polynomial { .. } => Ok(1.0),
            SigmaKind::Tabulated(t) => {
                let (x_end, ls) = if sign > 0.0 || t.even {
                    (t.xs[t.xs.len() - 1], t.log_sigma[t.log_sigma.len() - 1])
                } else {
                    (t.xs[0], t.log_sigma[0])
                };
                Ok(ls.exp() / x_end.abs().powf(gamma))
            }
            SigmaKind::Expression { .. } => {
                let mut last = None;
                for e in [8, 10, 12] {
                    let x: f64 = 10f64.powi(e);
                    let v = self.raw(sign * x)?;
                    let c = v / x.powf(gamma);
                    if c.is_finite() && c > 0.0 {
                        last = Some(c);
                    }
                }
                last.ok_or(Error::TailUndetermined(side_name(sign)))
            }
        }
    }
}

impl Table {
    fn eval(&self, x: f64) -> f64 {
        let x = if self.even { x.abs() } else { x };
        let n = self.xs.len();
        if x >= self.xs[n - 1] {
            return self.log_sigma[n - 1].exp() * (x / self.xs[n - 1]).powf(self.tail.1);
        }
        if x <= self.xs[0] {
            return self.log_sigma[0].exp() * (x / self.xs[0]).powf(self.tail.0);
        }
        let k = self.xs.partition_point(|&v| v <= x) - 1;
        let t = (x - self.xs[k]) / (self.xs[k + 1] - self.xs[k]);
        (self.log_sigma[k] * (1.0 - t) + self.log_sigma[k + 1] * t).exp()
    }
}

fn side_name(sign: f64) -> &'static str {
    if sign > 0.0 {
        "right"
    } else {
        "left"
    }
}

/// Agreement required between the two regression windows, relative to
/// max(1, |γ|). Also the band within which an estimated exponent counts as
/// sitting exactly on a critical value.
pub const TAIL_TOL: f64 = 1e-3;

fn regress_tail(expr: &ExprNode, sign: f64) -> Result<TailExponent> {
    // log-spaced x = 10^{3 + 0.1k}, k = 0..=30; windows k ≤ 15 and k ≥ 15.
    let mut lx = [0.0; 31];
    let mut ls = [0.0; 31];
    for k in 0..31 {
        let x = 10f64.powf(3.0 + 0.1 * k as f64);
        let v = expr.eval(sign * x)?;
        if v == f64::INFINITY {
            return Ok(TailExponent::PlusInfinity);
        }
        if v <= 0.0 {
            // Underflow to zero is super-polynomial decay; a negative value is a
            // genuine positivity violation.
            return if v == 0.0 { Ok(TailExponent::MinusInfinity) } else { Err(Error::NonPositiveSigma { x: sign * x, value: v }) };
        }
        lx[k] = x.ln();
        ls[k] = v.ln();
    }
    let slope = |r: core::ops::Range<usize>| {
        let n = r.len() as f64;
        let mx = lx[r.clone()].iter().sum::<f64>() / n;
        let my = ls[r.clone()].iter().sum::<f64>() / n;
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for k in r {
            sxy += (lx[k] - mx) * (ls[k] - my);
            sxx += (lx[k] - mx) * (lx[k] - mx);
        }
        sxy / sxx
    };
    let (s1, s2) = (slope(0..16), slope(15..31));
    if (s1 - s2).abs() <= TAIL_TOL * s2.abs().max(1.0) {
        Ok(TailExponent::Finite(s2))
    } else if s2 > s1 && s2 > 20.0 {
        Ok(TailExponent::PlusInfinity)
    } else if s2 < s1 && s2 < -20.0 {
        Ok(TailExponent::MinusInfinity)
    } else {
        Err(Error::TailUndetermined(side_name(sign)))
    }
}

/// Tail exponents of σ; see [`SigmaProfile::tail_exponents`].
pub fn estimate_tail_exponent(profile: &SigmaProfile) -> Result<TailExponents> {
    profile.tail_exponents()
}

/// Where a tail exponent sits relative to a critical value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Below,
    Critical,
    Above,
}

pub fn regime(tail: Tail, critical: f64) -> Regime {
    match tail.exponent {
        TailExponent::PlusInfinity => Regime::Above,
        TailExponent::MinusInfinity => Regime::Below,
        TailExponent::Finite(g) => {
            let band = if tail.exact { 1e-12 } else { TAIL_TOL } * critical.abs().max(1.0);
            if (g - critical).abs() <= band {
                Regime::Critical
            } else if g > critical {
                Regime::Above
            } else {
                Regime::Below
            }
        }
    }
}

/// A criterion functional: a finite value with its quadrature error and, for
/// suprema, the maximizer (`+∞` when only approached in the limit), or a
/// divergence with its reason.
#[derive(Debug, Clone, PartialEq)]
pub enum CriterionValue {
    Finite { value: f64, abs_error: f64, argsup: Option<f64> },
    Infinite { reason: String },
}

impl CriterionValue {
    pub fn finite(&self) -> Option<f64> {
        match self {
            CriterionValue::Finite { value, .. } => Some(*value),
            CriterionValue::Infinite { .. } => None,
        }
    }
    pub fn is_finite(&self) -> bool {
        self.finite().is_some()
    }
    pub fn argsup(&self) -> Option<f64> {
        match self {
            CriterionValue::Finite { argsup, .. } => *argsup,
            CriterionValue::Infinite { .. } => None,
        }
    }
    fn infinite(reason: String) -> Self {
        CriterionValue::Infinite { reason }
    }
}

/// Collects the first error raised inside a quadrature closure, which can
/// only return `f64`.
pub(crate) struct Guard(RefCell<Option<Error>>);

impl Guard {
    pub(crate) fn new() -> Self {
        Guard(RefCell::new(None))
    }
    pub(crate) fn take(&self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }
    pub(crate) fn finish<T>(&self, r: Result<T>) -> Result<T> {
        match self.0.borrow_mut().take() {
            Some(e) => Err(e),
            None => r,
        }
    }
}

pub(crate) fn spec() -> QuadSpec {
    QuadSpec::with_rel_tol(1e-12)
}

/// Which part of the line a tail functional looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sides {
    Plus,
    Minus,
    Both,
}

impl Sides {
    fn signs(self) -> &'static [f64] {
        match self {
            Sides::Plus => &[1.0],
            Sides::Minus => &[-1.0],
            Sides::Both => &[1.0, -1.0],
        }
    }
}

fn side_tail(t: &TailExponents, sign: f64) -> Tail {
    if sign > 0.0 {
        t.plus
    } else {
        t.minus
    }
}

fn describe(t: Tail) -> String {
    match t.exponent {
        TailExponent::Finite(g) => format!("tail exponent {g}"),
        TailExponent::PlusInfinity => "super-polynomial growth".into(),
        TailExponent::MinusInfinity => "super-polynomial decay".into(),
    }
}

/// `∫_a^∞ σ(s·u)^{−α} du` summed over the requested sides.
fn folded_tail(profile: &SigmaProfile, alpha: f64, sides: Sides, a: f64) -> Result<Estimate> {
    let g = Guard::new();
    let f = |u: f64| sides.signs().iter().map(|&s| g.take(profile.density(s * u, alpha))).sum::<f64>();
    let r = integrate_to_infinity(f, a, &spec());
    g.finish(r)
}

fn folded_piece(profile: &SigmaProfile, alpha: f64, sides: Sides, a: f64, b: f64) -> Result<Estimate> {
    let g = Guard::new();
    let f = |u: f64| sides.signs().iter().map(|&s| g.take(profile.density(s * u, alpha))).sum::<f64>();
    let r = integrate(f, a, b, &spec());
    g.finish(r)
}

/// μ(ℝ) = ∫ σ^{−α}; finite iff αγ > 1 on both sides.
pub fn mu_total(profile: &SigmaProfile, alpha: f64) -> Result<CriterionValue> {
    check_alpha(alpha)?;
    let tails = profile.tail_exponents()?;
    for s in [1.0, -1.0] {
        let t = side_tail(&tails, s);
        if regime(t, 1.0 / alpha) != Regime::Above {
            return Ok(CriterionValue::infinite(format!("{} side: {} needs alpha*gamma > 1", side_name(s), describe(t))));
        }
    }
    let e = folded_tail(profile, alpha, Sides::Both, 0.0)?;
    Ok(CriterionValue::Finite { value: e.value, abs_error: e.abs_error, argsup: None })
}

/// μ(ℝ∖(−y, y)) for y ≥ 0, +∞ when μ(ℝ) is.
pub fn tail_mass(profile: &SigmaProfile, alpha: f64, y: f64) -> Result<f64> {
    match mu_total(profile, alpha)? {
        CriterionValue::Infinite { .. } => Ok(f64::INFINITY),
        CriterionValue::Finite { .. } => Ok(folded_tail(profile, alpha, Sides::Both, y.max(0.0))?.value),
    }
}

/// μ((−∞, x]); requires μ(ℝ) < ∞.
pub fn mu_below(profile: &SigmaProfile, alpha: f64, x: f64) -> Result<f64> {
    if x <= 0.0 {
        Ok(folded_tail(profile, alpha, Sides::Minus, -x)?.value)
    } else {
        Ok(folded_tail(profile, alpha, Sides::Minus, 0.0)?.value + folded_piece(profile, alpha, Sides::Plus, 0.0, x)?.value)
    }
}

/// μ((a, b]).
pub fn mu_interval(profile: &SigmaProfile, alpha: f64, a: f64, b: f64) -> Result<f64> {
    let g = Guard::new();
    let r = integrate(|y: f64| g.take(profile.density(y, alpha)), a, b, &spec());
    Ok(g.finish(r)?.value)
}

const SUP_GRID: usize = 512;
const SUP_LO: f64 = 1e-3;
const SUP_HI: f64 = 1e6;

/// sup_{x>0} x^{α−1} μ(tails beyond x) over the requested sides.
fn sup_functional(profile: &SigmaProfile, alpha: f64, sides: Sides) -> Result<CriterionValue> {
    check_alpha(alpha)?;
    let tails = profile.tail_exponents()?;
    let mut limit = 0.0;
    let mut limit_err = 0.0;
    for &s in sides.signs() {
        let t = side_tail(&tails, s);
        match regime(t, 1.0) {
            Regime::Below => {
                return Ok(CriterionValue::infinite(format!("{} side: {} needs gamma >= 1", side_name(s), describe(t))));
            }
            Regime::Critical => {
                // x^{α−1}∫_x^∞ σ^{−α} → A^{−α}/(α−1) when σ ~ A|x|.
                let a = profile.tail_coefficient(s, 1.0)?;
                limit += a.powf(-alpha) / (alpha - 1.0);
                if !t.exact {
                    limit_err += 1e-6 * limit;
                }
            }
            Regime::Above => {}
        }
    }

    let grid: Vec<f64> = (0..SUP_GRID).map(|k| SUP_LO * (SUP_HI / SUP_LO).powf(k as f64 / (SUP_GRID - 1) as f64)).collect();
    let mut tail = alloc::vec![Estimate::ZERO; SUP_GRID];
    tail[SUP_GRID - 1] = folded_tail(profile, alpha, sides, SUP_HI)?;
    for k in (0..SUP_GRID - 1).rev() {
        tail[k] = tail[k + 1] + folded_piece(profile, alpha, sides, grid[k], grid[k + 1])?;
    }
    let s = |k: usize| grid[k].powf(alpha - 1.0) * tail[k].value;
    let kmax = (0..SUP_GRID).max_by(|&i, &j| s(i).total_cmp(&s(j))).expect("non-empty grid");

    let (best_x, best, best_err) = if kmax == SUP_GRID - 1 {
        // Still rising at the grid edge: march outward by decades.
        let mut x = grid[kmax];
        let mut best = (x, s(kmax), tail[kmax].abs_error * x.powf(alpha - 1.0));
        for _ in 0..9 {
            x *= 10.0;
            let t = folded_tail(profile, alpha, sides, x)?;
            let v = x.powf(alpha - 1.0) * t.value;
            if v <= best.1 {
                break;
            }
            best = (x, v, t.abs_error * x.powf(alpha - 1.0));
        }
        best
    } else {
        let lo = if kmax == 0 { grid[0] * 0.5 } else { grid[kmax - 1] };
        let hi = grid[kmax + 1];
        let base = if kmax == 0 { tail[0].value + folded_piece(profile, alpha, sides, lo, grid[0])?.value } else { tail[kmax - 1].value };
        let g = Guard::new();
        let f = |x: f64| {
            let piece = folded_piece(profile, alpha, sides, lo, x);
            x.powf(alpha - 1.0) * (base - g.take(piece.map(|e| e.value)))
        };
        let (x, v) = golden_max(f, lo, hi, 1e-10);
        g.finish(Ok(()))?;
        (x, v.max(s(kmax)), tail[kmax].abs_error * x.powf(alpha - 1.0))
    };

    // A critical side approaches its limit from below; a grid value above it
    // by no more than quadrature noise is the same supremum.
    if limit > 0.0 && limit >= best - best_err - 1e-9 * limit {
        Ok(CriterionValue::Finite { value: limit, abs_error: limit_err, argsup: Some(f64::INFINITY) })
    } else {
        Ok(CriterionValue::Finite { value: best, abs_error: best_err, argsup: Some(best_x) })
    }
}

/// Golden-section maximization of a unimodal function on `[a, b]` down to a
/// relative bracket of `rel`.
pub(crate) fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, rel: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a) <= rel * 0.5 * (a.abs() + b.abs()) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// δ₊ = sup_{x>0} x^{α−1} ∫_x^∞ σ^{−α}.
pub fn delta_plus(profile: &SigmaProfile, alpha: f64) -> Result<CriterionValue> {
    sup_functional(profile, alpha, Sides::Plus)
}

/// δ₋ = sup_{x>0} x^{α−1} ∫_{−∞}^{−x} σ^{−α}.
pub fn delta_minus(profile: &SigmaProfile, alpha: f64) -> Result<CriterionValue> {
    sup_functional(profile, alpha, Sides::Minus)
}

/// δ = sup_{x>0} x^{α−1} μ(ℝ∖[−x, x]), evaluated directly (not as δ₊ + δ₋).
pub fn delta(profile: &SigmaProfile, alpha: f64) -> Result<CriterionValue> {
    sup_functional(profile, alpha, Sides::Both)
}

/// I = ∫ |x|^{α−1} σ(x)^{−α} dx; finite iff γ > 1 on both sides.
pub fn i_integral(profile: &SigmaProfile, alpha: f64) -> Result<CriterionValue> {
    check_alpha(alpha)?;
    let tails = profile.tail_exponents()?;
    for s in [1.0, -1.0] {
        let t = side_tail(&tails, s);
        if regime(t, 1.0) != Regime::Above {
            return Ok(CriterionValue::infinite(format!("{} side: {} needs gamma > 1", side_name(s), describe(t))));
        }
    }
    let g = Guard::new();
    let both = |y: f64| g.take(profile.density(y, alpha)) + g.take(profile.density(-y, alpha));
    // [0, 1] with x = u^{1/α}, which absorbs the x^{α−1} endpoint singularity.
    let head = integrate(|u: f64| both(u.powf(1.0 / alpha)) / alpha, 0.0, 1.0, &spec());
    let rest = integrate_to_infinity(|y: f64| y.powf(alpha - 1.0) * both(y), 1.0, &spec());
    let e = g.finish(head.and_then(|h| rest.map(|r| h + r)))?;
    Ok(CriterionValue::Finite { value: e.value, abs_error: e.abs_error, argsup: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed_delta_plus(gamma: f64, alpha: f64) -> f64 {
        if gamma == 1.0 {
            return 1.0 / (alpha - 1.0);
        }
        let a = alpha * (gamma - 1.0);
        (alpha - 1.0).powf(alpha - 1.0) * a.powf(a) / (alpha * gamma - 1.0).powf(alpha * gamma)
    }

    #[test]
    fn polynomial_evaluation() {
        let p = SigmaProfile::polynomial(2.0).unwrap();
        assert_eq!(p.eval(1.0).unwrap(), 4.0);
        assert_eq!(p.eval(-1.0).unwrap(), 4.0);
        assert!(SigmaProfile::polynomial(0.0).is_err());
    }

    #[test]
    fn zero_sigma_rejected() {
        let p = SigmaProfile::expression("x").unwrap();
        assert!(matches!(p.eval(0.0), Err(Error::NonPositiveSigma { .. })));
    }

    #[test]
    fn mu_total_values() {
        let p = SigmaProfile::polynomial(2.0).unwrap();
        let v = mu_total(&p, 1.5).unwrap().finite().unwrap();
        assert!((v - 1.0).abs() < 1e-10, "{v}");
        let one = SigmaProfile::expression("1").unwrap();
        assert!(!mu_total(&one, 1.5).unwrap().is_finite());
        // γ = 1/α exactly is critical and divergent.
        assert!(!mu_total(&SigmaProfile::polynomial(1.0 / 1.5).unwrap(), 1.5).unwrap().is_finite());
        assert!(mu_total(&SigmaProfile::polynomial(0.7).unwrap(), 1.5).unwrap().is_finite());
    }

    #[test]
    fn delta_plus_closed_forms() {
        for gamma in [1.5, 2.0, 3.0] {
            for alpha in [1.2, 1.5, 1.8] {
                let p = SigmaProfile::polynomial(gamma).unwrap();
                let v = delta_plus(&p, alpha).unwrap().finite().unwrap();
                let c = closed_delta_plus(gamma, alpha);
                assert!(((v - c) / c).abs() < 1e-6, "γ={gamma} α={alpha}: {v} vs {c}");
            }
        }
        let d = delta_plus(&SigmaProfile::polynomial(2.0).unwrap(), 1.5).unwrap();
        assert!((d.argsup().unwrap() - 1.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn critical_exponent_gives_limit_exactly() {
        for alpha in [1.2, 1.5, 1.8] {
            let d = delta_plus(&SigmaProfile::polynomial(1.0).unwrap(), alpha).unwrap();
            assert_eq!(d.finite().unwrap(), 1.0 / (alpha - 1.0));
            assert_eq!(d.argsup(), Some(f64::INFINITY));
        }
        let e = SigmaProfile::expression("1+abs(x)").unwrap();
        let d = delta_plus(&e, 1.5).unwrap().finite().unwrap();
        assert!((d - 2.0).abs() < 1e-9, "{d}");
    }

    #[test]
    fn subcritical_delta_is_infinite() {
        assert!(!delta_plus(&SigmaProfile::polynomial(0.8).unwrap(), 1.5).unwrap().is_finite());
        assert!(!delta(&SigmaProfile::expression("1").unwrap(), 1.5).unwrap().is_finite());
    }

    #[test]
    fn delta_is_twice_delta_plus_for_even_profiles() {
        let p = SigmaProfile::polynomial(2.0).unwrap();
        let d = delta(&p, 1.5).unwrap().finite().unwrap();
        assert!((d - 0.32475952).abs() < 1e-7, "{d}");
        let dp = delta_plus(&p, 1.5).unwrap().finite().unwrap();
        let dm = delta_minus(&p, 1.5).unwrap().finite().unwrap();
        assert!((dp - dm).abs() <= 1e-12 * dp);
    }

    #[test]
    fn i_integral_values() {
        let p = SigmaProfile::polynomial(2.0).unwrap();
        let v = i_integral(&p, 1.5).unwrap().finite().unwrap();
        assert!(((v - core::f64::consts::FRAC_PI_4) / v).abs() < 1e-8, "{v}");
        assert!(!i_integral(&SigmaProfile::polynomial(1.0).unwrap(), 1.5).unwrap().is_finite());
        assert!(!i_integral(&SigmaProfile::expression("1").unwrap(), 1.5).unwrap().is_finite());
    }

    #[test]
    fn tail_exponent_estimates() {
        let t = SigmaProfile::expression("(1+abs(x))^2").unwrap().tail_exponents().unwrap();
        for side in [t.plus, t.minus] {
            let TailExponent::Finite(g) = side.exponent else { panic!() };
            assert!((g - 2.0).abs() < 1e-3);
        }
        let t = SigmaProfile::expression("exp(abs(x))").unwrap().tail_exponents().unwrap();
        assert_eq!(t.plus.exponent, TailExponent::PlusInfinity);
        let t = SigmaProfile::expression("exp(-abs(x))").unwrap().tail_exponents().unwrap();
        assert_eq!(t.minus.exponent, TailExponent::MinusInfinity);
        let t = SigmaProfile::expression("(1+abs(x))^5").unwrap().tail_exponents().unwrap();
        assert!(matches!(t.plus.exponent, TailExponent::Finite(g) if (g - 5.0).abs() < 5e-3));
    }

    #[test]
    fn table_profile() {
        let pts: Vec<(f64, f64)> = (0..=20).map(|k| k as f64 * 0.5).map(|x| (x, (1.0 + x).powf(1.5))).collect();
        let p = SigmaProfile::tabulated(&pts, 1.5, 1.5, true).unwrap();
        let t = p.tail_exponents().unwrap();
        assert_eq!(t.plus.exponent, TailExponent::Finite(1.5));
        assert_eq!(t.minus.exponent, TailExponent::Finite(1.5));
        assert!((p.eval(-3.0).unwrap() - 8.0).abs() < 1e-12);
        // log-linear between nodes stays between the neighbours
        let v = p.eval(0.25).unwrap();
        assert!(v > 1.0 && v < 1.5f64.powf(1.5));
        assert!(SigmaProfile::tabulated(&pts, 1.5, 1.5, false).is_err());
        assert!(SigmaProfile::tabulated(&[(0.0, 1.0), (0.0, 2.0)], 1.0, 1.0, true).is_err());
    }

    #[test]
    fn tail_mass_is_nonincreasing() {
        let p = SigmaProfile::expression("1+x^2").unwrap();
        let mut prev = f64::INFINITY;
        for k in 0..30 {
            let m = tail_mass(&p, 1.5, 0.3 * k as f64).unwrap();
            assert!(m <= prev);
            prev = m;
        }
    }
}
