//! Adaptive Gauss–Kronrod quadrature on finite intervals and half-lines.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

// Float math for no_std builds; shadowed by std's inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Tolerances and budgets for one integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of subintervals (per finite integral) or dyadic panels
    /// (per half-line integral).
    pub max_panels: usize,
    /// Half-line integrals start their dyadic panels at this width.
    pub tail_cut: f64,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec { rel_tol: 1e-11, abs_tol: 1e-300, max_panels: 2000, tail_cut: 1.0 }
    }
}

impl QuadSpec {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadSpec { rel_tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol >= 1e-14 && self.rel_tol < 1.0) {
            return Err(Error::InvalidConfig(alloc::format!("rel_tol {} outside [1e-14, 1)", self.rel_tol)));
        }
        if !(self.abs_tol >= 0.0) || self.max_panels < 64 || !(self.tail_cut > 0.0) {
            return Err(Error::InvalidConfig("abs_tol >= 0, max_panels >= 64 and tail_cut > 0 required".into()));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// An integral estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
    pub converged: bool,
}

impl Estimate {
    pub const ZERO: Estimate = Estimate { value: 0.0, abs_error: 0.0, converged: true };

    pub fn scale(self, c: f64) -> Estimate {
        Estimate { value: self.value * c, abs_error: self.abs_error * c.abs(), converged: self.converged }
    }
}

impl core::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, other: Estimate) -> Estimate {
        Estimate {
            value: self.value + other.value,
            abs_error: self.abs_error + other.abs_error,
            converged: self.converged && other.converged,
        }
    }
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One 15-point Kronrod rule with its embedded 7-point Gauss estimate.
/// Returns `(kronrod, |kronrod - gauss|)`.
pub fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Globally adaptive integral of `f` over `[a, b]`.
///
/// Fails only if the integrand produces a non-finite value; running out of
/// subdivisions yields an estimate with `converged == false`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate::ZERO);
    }
    if b < a {
        return integrate(f, b, a, spec).map(|e| e.scale(-1.0));
    }
    let mut heap = BinaryHeap::new();
    let (v, e) = gk15(&mut f, a, b);
    let (mut total, mut err) = (v, e);
    heap.push(Piece { a, b, value: v, err: e });
    let mut pieces = 1;
    while err > spec.target(total) {
        if !total.is_finite() {
            return Err(Error::Eval(alloc::format!("non-finite integrand on [{a}, {b}]")));
        }
        if pieces >= spec.max_panels {
            break;
        }
        let p = heap.pop().expect("heap holds every piece");
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // Interval exhausted in floating point; keep it and stop refining.
            heap.push(p);
            break;
        }
        let (v1, e1) = gk15(&mut f, p.a, m);
        let (v2, e2) = gk15(&mut f, m, p.b);
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.err;
        heap.push(Piece { a: p.a, b: m, value: v1, err: e1 });
        heap.push(Piece { a: m, b: p.b, value: v2, err: e2 });
        pieces += 1;
    }
    // Resum to shed accumulated cancellation in the running totals.
    let (mut value, mut abs_error) = (0.0, 0.0);
    for p in heap.iter() {
        value += p.value;
        abs_error += p.err;
    }
    if !value.is_finite() {
        return Err(Error::Eval(alloc::format!("non-finite integrand on [{a}, {b}]")));
    }
    let converged = abs_error <= spec.target(value);
    Ok(Estimate { value, abs_error, converged })
}

/// Integral over consecutive intervals `[p0, p1], [p1, p2], ...` of a sorted
/// breakpoint list.
pub fn integrate_breaks<F: FnMut(f64) -> f64>(mut f: F, breaks: &[f64], spec: &QuadSpec) -> Result<Estimate> {
    let mut acc = Estimate::ZERO;
    for w in breaks.windows(2) {
        acc = acc + integrate(&mut f, w[0], w[1], spec)?;
    }
    Ok(acc)
}

/// `∫_a^∞ f`, for an integrand that is eventually monotone and decays at
/// least like a power `x^{-p}`, `p > 1`.
///
/// Panels grow geometrically from `a`; once successive panel ratios settle the
/// remainder is closed by the geometric series they imply.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, spec: &QuadSpec) -> Result<Estimate> {
    let width = spec.tail_cut.max(1e-3 * a.abs());
    let mut acc = Estimate::ZERO;
    let mut lo = a;
    let mut step = width;
    let mut prev: Option<f64> = None;
    let mut prev_ratio: Option<f64> = None;
    for _ in 0..spec.max_panels {
        let hi = lo + step;
        if !hi.is_finite() {
            break;
        }
        let panel_spec = QuadSpec { rel_tol: spec.rel_tol * 0.25, ..*spec };
        let p = integrate(&mut f, lo, hi, &panel_spec)?;
        acc = acc + p;
        let target = spec.target(acc.value);
        if let Some(q) = prev {
            if p.value == 0.0 && q == 0.0 {
                return Ok(acc);
            }
            if q != 0.0 {
                let r = p.value / q;
                if (0.0..1.0).contains(&r) {
                    let remainder = p.value * r / (1.0 - r);
                    let drift = prev_ratio.map_or(1.0, |r0| (r - r0).abs());
                    let unsure = remainder.abs() * (drift / (1.0 - r)).min(1.0);
                    if remainder.abs() <= 0.1 * target || (drift < 1e-3 && unsure <= 0.5 * target) {
                        acc.value += remainder;
                        acc.abs_error += unsure;
                        acc.converged &= acc.abs_error <= 4.0 * spec.target(acc.value);
                        return Ok(acc);
                    }
                }
                prev_ratio = Some(r);
            }
        }
        prev = Some(p.value);
        lo = hi;
        step *= 2.0;
    }
    acc.converged = false;
    Ok(acc)
}

/// `∫_{-∞}^b f`.
pub fn integrate_from_neg_infinity<F: FnMut(f64) -> f64>(mut f: F, b: f64, spec: &QuadSpec) -> Result<Estimate> {
    integrate_to_infinity(|u| f(-u), -b, spec)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (core::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_rule_is_exact_to_degree_22() {
        for deg in 0..=22 {
            let mut f = |x: f64| x.powi(deg);
            let (k, _) = gk15(&mut f, 0.0, 1.0);
            assert!((k - 1.0 / (deg as f64 + 1.0)).abs() < 1e-15, "degree {deg}");
        }
    }

    #[test]
    fn gauss_part_is_exact_to_degree_13() {
        for deg in 0..=13 {
            let mut f = |x: f64| x.powi(deg);
            let (_, e) = gk15(&mut f, 0.0, 1.0);
            assert!(e < 1e-15, "degree {deg}: {e}");
        }
    }

    #[test]
    fn adaptive_handles_sqrt_endpoint() {
        let e = integrate(|x: f64| x.sqrt(), 0.0, 1.0, &QuadSpec::with_rel_tol(1e-12)).unwrap();
        assert!((e.value - 2.0 / 3.0).abs() < 1e-12);
        assert!(e.converged);
    }

    #[test]
    fn half_line_power_tail() {
        let spec = QuadSpec::with_rel_tol(1e-12);
        let e = integrate_to_infinity(|x: f64| (1.0 + x).powf(-3.0), 0.0, &spec).unwrap();
        assert!((e.value - 0.5).abs() < 1e-11, "{}", e.value);
        let e = integrate_to_infinity(|x: f64| (1.0 + x).powf(-1.2), 0.0, &spec).unwrap();
        assert!((e.value - 5.0).abs() < 1e-9, "{}", e.value);
        let e = integrate_from_neg_infinity(|x: f64| (x * x).exp().recip(), 0.0, &spec).unwrap();
        assert!((e.value - core::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_legendre_weights() {
        for n in [1, 2, 5, 6, 10] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(2 * n as i32 - 2)).sum();
            assert!((m - 2.0 / (2.0 * n as f64 - 1.0)).abs() < 1e-13, "n={n}");
        }
    }
}
