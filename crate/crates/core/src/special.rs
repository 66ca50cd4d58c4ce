//! Γ, the α-dependent constants and the two one-dimensional special
//! integrals `h` and `J_α` used by the Green kernels.

use core::f64::consts::PI;

// Float math for no_std builds; shadowed by std's inherent methods when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::quad::{integrate, QuadSpec};
use crate::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for real `x` away from the poles at 0, −1, −2, …
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = LANCZOS[0];
        for (i, c) in LANCZOS.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha < 2.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

/// ω_α = −1/(cos(πα/2) Γ(α)).
pub fn omega_alpha(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(-1.0 / ((PI * alpha / 2.0).cos() * gamma(alpha)))
}

/// Jump-kernel constant C_α of the fractional Laplacian with symbol |ξ|^α.
pub fn frac_kernel_constant(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(alpha * 2f64.powf(alpha - 1.0) * gamma((alpha + 1.0) / 2.0) / (PI.sqrt() * gamma(1.0 - alpha / 2.0)))
}

/// c_α = 2^{1−α}/Γ(α/2)².
pub fn complement_constant(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(2f64.powf(1.0 - alpha) / gamma(alpha / 2.0).powi(2))
}

fn spec() -> QuadSpec {
    QuadSpec::with_rel_tol(1e-13)
}

/// `(2/α) ∫_0^U (b + u^{2/α})^{α/2−1} du`, the common shape of `h` and `J_α`
/// after the substitution that removes their endpoint singularity.
fn substituted(b: f64, upper: f64, alpha: f64) -> f64 {
    let p = 2.0 / alpha;
    let e = alpha / 2.0 - 1.0;
    let g = |u: f64| (b + u.powf(p)).powf(e);
    let s = spec();
    let head = integrate(g, 0.0, upper.min(1.0), &s).expect("smooth integrand").value;
    let tail =
        if upper > 1.0 { integrate(|t: f64| g(t.exp()) * t.exp(), 0.0, upper.ln(), &s).expect("smooth integrand").value } else { 0.0 };
    p * (head + tail)
}

pub(crate) fn h_unchecked(x: f64, alpha: f64) -> f64 {
    let z = x.abs();
    if z <= 1.0 {
        return 0.0;
    }
    // z = 1 + u^{2/α}
    substituted(2.0, (z - 1.0).powf(alpha / 2.0), alpha)
}

/// h(x) = ∫_1^{|x|} (z²−1)^{α/2−1} dz for |x| ≥ 1.
pub fn harmonic_h(x: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(x.abs() >= 1.0) {
        return Err(Error::Domain(alloc::format!("harmonic_h needs |x| >= 1, got {x}")));
    }
    Ok(h_unchecked(x, alpha))
}

pub(crate) fn j_unchecked(t: f64, alpha: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    // s = u^{2/α}
    substituted(1.0, t.powf(alpha / 2.0), alpha)
}

/// J_α(t) = ∫_0^t [s(s+1)]^{α/2−1} ds.
pub fn j_alpha(t: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(t >= 0.0) {
        return Err(Error::Domain(alloc::format!("J_alpha needs t >= 0, got {t}")));
    }
    Ok(j_unchecked(t, alpha))
}

/// K_α = 2c_α(1−α/2)Γ(α/2)/Γ(1−α/2) · ∫_1^∞ (v²−1)^{α/2−1}/(1+v) dv.
pub fn k_alpha(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let e = alpha / 2.0 - 1.0;
    let p = 2.0 / alpha;
    let s = spec();
    // [1, 2] with v = 1 + u^{2/α}
    let near = integrate(|u: f64| p * (2.0 + u.powf(p)).powf(e) / (2.0 + u.powf(p)), 0.0, 1.0, &s)?.value;
    let v_cut: f64 = 1e3;
    let mid = integrate(
        |t: f64| {
            let v = t.exp();
            (v * v - 1.0).powf(e) / (1.0 + v) * v
        },
        2f64.ln(),
        v_cut.ln(),
        &s,
    )?
    .value;
    // Beyond V the integrand is v^{α−3}(1−w²)^e/(1+w) with w = 1/v; integrate
    // the expansion in w term by term.
    let mut binom = [0.0; 8];
    binom[0] = 1.0;
    for j in 1..8 {
        binom[j] = -(binom[j - 1] * (e - (j as f64 - 1.0)) / j as f64);
    }
    let mut tail = 0.0;
    for m in 0..14usize {
        let mut c = 0.0;
        for (j, b) in binom.iter().enumerate() {
            if 2 * j <= m {
                c += b * if (m - 2 * j) % 2 == 0 { 1.0 } else { -1.0 };
            }
        }
        let q = m as f64 + 2.0 - alpha;
        tail += c * v_cut.powf(-q) / q;
    }
    let pre = 2.0 * complement_constant(alpha)? * (1.0 - alpha / 2.0) * gamma(alpha / 2.0) / gamma(1.0 - alpha / 2.0);
    Ok(pre * (near + mid + tail))
}

// ∫_Y^∞ ((s²−1)^{α/2−1} − s^{α−2}) ds from the binomial expansion in s^{−2}; Y ≥ 2.
fn h_tail_series(y: f64, alpha: f64) -> f64 {
    let beta = alpha / 2.0 - 1.0;
    let w = 1.0 / (y * y);
    let mut c = 1.0;
    let mut pw = y.powf(alpha - 1.0);
    let mut sum = 0.0;
    for k in 1..40 {
        c *= -(beta - (k as f64 - 1.0)) / k as f64;
        pw *= w;
        let t = c * pw / (2.0 * k as f64 + 1.0 - alpha);
        sum += t;
        if t.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// The constants of one stability index, validated once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaConstants {
    alpha: f64,
    omega: f64,
    c_kernel: f64,
    c_green: f64,
    gamma_half_sq: f64,
    h_limit: f64,
}

impl AlphaConstants {
    pub fn new(alpha: f64) -> Result<Self> {
        Ok(AlphaConstants {
            alpha,
            omega: omega_alpha(alpha)?,
            c_kernel: frac_kernel_constant(alpha)?,
            c_green: complement_constant(alpha)?,
            gamma_half_sq: gamma(alpha / 2.0).powi(2),
            h_limit: {
                let y0: f64 = 4.0;
                y0.powf(alpha - 1.0) / (alpha - 1.0) - h_unchecked(y0, alpha) - h_tail_series(y0, alpha)
            },
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    /// ω_α.
    pub fn omega(&self) -> f64 {
        self.omega
    }
    /// C_α, the jump-kernel constant.
    pub fn c_kernel(&self) -> f64 {
        self.c_kernel
    }
    /// c_α, the constant of the Green function of [−1,1]ᶜ.
    pub fn c_green(&self) -> f64 {
        self.c_green
    }
    /// Γ(α/2)².
    pub fn gamma_half_sq(&self) -> f64 {
        self.gamma_half_sq
    }
    /// |y|^{α−1}/(α−1) − h(y) for |y| ≥ 4, free of cancellation.
    pub fn h_defect(&self, y: f64) -> f64 {
        self.h_limit + h_tail_series(y.abs(), self.alpha)
    }
    /// K_α, by quadrature (not cached).
    pub fn k_alpha(&self) -> f64 {
        k_alpha(self.alpha).expect("alpha validated at construction")
    }
}
