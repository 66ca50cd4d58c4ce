//! The acceptance suite: twelve checks, each reported as one PASS/FAIL line.

use std::f64::consts::PI;
use std::time::Instant;

use stable_ergo_core::criteria::{classify, rate_bounds, TriState};
use stable_ergo_core::green::{self, KillingDomain};
use stable_ergo_core::montecarlo::{self, PathConfig, Scheme, Seeding, StableSampler};
use stable_ergo_core::sigma::{delta, delta_plus, i_integral, SigmaProfile};
use stable_ergo_core::spectral::{self, Mesh, SolveOptions};
use stable_ergo_core::{AlphaConstants, Result};

use crate::commands::{Sandwich, SANDWICH_SLACK};
use crate::runner::Threaded;

const ALPHAS: [f64; 3] = [1.2, 1.5, 1.8];

pub struct Options {
    /// Smaller samples and grids.
    pub quick: bool,
    /// Factor applied to ω_α in the Green inequality checks; 1 in normal runs.
    pub omega_scale: f64,
    pub runner: Threaded,
}

impl Default for Options {
    fn default() -> Self {
        Options { quick: false, omega_scale: 1.0, runner: Threaded::from_env() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!("{} {:>2} {}: {} ({:.1} s)", if self.pass { "PASS" } else { "FAIL" }, self.id, self.name, self.detail, self.seconds)
    }
}

type Check = fn(&Options) -> Result<(bool, String)>;

pub const CRITERIA: [(u32, &str, Check); 12] = [
    (1, "closed-form delta_plus", closed_forms),
    (2, "I-integral oracle", i_oracle),
    (3, "classification table", classification),
    (4, "sandwich ratio", sandwich_ratio),
    (5, "Green inequalities", green_inequalities),
    (6, "II-operator bounds", ii_bounds),
    (7, "eigenvalue sandwich", eigen_sandwich),
    (8, "half-line bound", halfline_bound),
    (9, "stable sampler", sampler),
    (10, "hitting-time bound", hitting),
    (11, "stationarity", stationarity),
    (12, "decay rate", decay),
];

/// Runs one criterion; an error counts as a failure.
pub fn run_one(id: u32, opts: &Options) -> Outcome {
    let (_, name, check) = CRITERIA[(id - 1) as usize];
    let t = Instant::now();
    let (pass, detail) = check(opts).unwrap_or_else(|e| (false, format!("error: {e}")));
    Outcome { id, name, pass, detail, seconds: t.elapsed().as_secs_f64() }
}

/// Runs every criterion in order, reporting each as it finishes.
pub fn run(opts: &Options, mut report: impl FnMut(&Outcome)) -> Vec<Outcome> {
    CRITERIA
        .iter()
        .map(|&(id, ..)| {
            let o = run_one(id, opts);
            report(&o);
            o
        })
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn poly(g: f64) -> SigmaProfile {
    SigmaProfile::polynomial(g).expect("positive exponent")
}

fn closed_forms(_: &Options) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for g in [1.5, 2.0, 3.0] {
        for a in ALPHAS {
            let b = a * (g - 1.0);
            let exact = (a - 1.0).powf(a - 1.0) * b.powf(b) / (a * g - 1.0).powf(a * g);
            let v = delta_plus(&poly(g), a)?.finite().unwrap_or(f64::INFINITY);
            worst = worst.max(rel(v, exact));
        }
    }
    let mut exact_one = true;
    for a in ALPHAS {
        exact_one &= delta_plus(&poly(1.0), a)?.finite() == Some(1.0 / (a - 1.0));
    }
    Ok((worst <= 1e-6 && exact_one, format!("max rel error {worst:.2e}; gamma=1 gives 1/(alpha-1) exactly: {exact_one}")))
}

fn i_oracle(_: &Options) -> Result<(bool, String)> {
    let v = i_integral(&poly(2.0), 1.5)?.finite().unwrap_or(f64::INFINITY);
    let e = rel(v, PI / 4.0);
    Ok((e <= 1e-8, format!("I = {v:.12}, rel error {e:.2e}")))
}

fn classification(_: &Options) -> Result<(bool, String)> {
    use TriState::{No, Yes};
    let expected = [(0.5, (No, No, No)), (0.7, (Yes, No, No)), (1.0, (Yes, Yes, No)), (2.0, (Yes, Yes, Yes))];
    let mut ok = true;
    let mut got = Vec::new();
    for (g, want) in expected {
        let r = classify(&poly(g), 1.5)?;
        let have = (r.ergodic, r.exponentially_ergodic, r.strongly_ergodic);
        ok &= have == want;
        got.push(format!("{g}:{}/{}/{}", have.0.as_str(), have.1.as_str(), have.2.as_str()));
    }
    Ok((ok, got.join(" ")))
}

fn sandwich_ratio(_: &Options) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for g in [1.0, 1.5, 2.0, 3.0] {
        for a in ALPHAS {
            let b = rate_bounds(&poly(g), a)?;
            let r = b.lambda0_upper.unwrap_or(f64::NAN) / b.lambda0_lower.unwrap_or(f64::NAN);
            worst = worst.max((r - 32.0).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max |upper/lower - 32| = {worst:.2e}")))
}

fn green_inequalities(o: &Options) -> Result<(bool, String)> {
    let n = if o.quick { 2_000 } else { 10_000 };
    let clamp = |b: f64| 1e-12 * b.abs().max(1.0);
    let mut violations = [0usize; 3];
    for (k, a) in ALPHAS.into_iter().enumerate() {
        let c = AlphaConstants::new(a)?;
        let w = c.omega() * o.omega_scale;
        let mut rng = StableSampler::new(a, 0x5eed, k as u64)?;
        let mut coord = |signed: bool| {
            let m = 10f64.powf(-4.0 + 6.0 * rng.uniform());
            if signed && rng.uniform() < 0.5 {
                -m
            } else {
                m
            }
        };
        for _ in 0..n {
            let (x, y) = (coord(true), coord(true));
            let g = green::green_punctured(x, y, a)?;
            let m = x.abs().min(y.abs()).powf(a - 1.0);
            if g > w * m + clamp(w * m) {
                violations[0] += 1;
            }
            if x * y > 0.0 && g < 0.5 * w * m - clamp(w * m) {
                violations[1] += 1;
            }
            let (x, y) = (coord(false), coord(false));
            let lhs = (a - 1.0) * c.gamma_half_sq() * green::green_halfline(x, y, a)?;
            let m = x.min(y).powf(a - 1.0);
            if lhs > m + clamp(m) {
                violations[2] += 1;
            }
        }
    }
    let ok = violations == [0, 0, 0];
    Ok((ok, format!("{n} points per alpha; violations upper {} lower {} half-line {}", violations[0], violations[1], violations[2])))
}

fn ii_bounds(o: &Options) -> Result<(bool, String)> {
    let a = 1.5;
    let c = AlphaConstants::new(a)?;
    let per_side = if o.quick { 5 } else { 25 };
    let mut ok = true;
    let mut parts = Vec::new();
    for g in [2.0, 1.5] {
        let p = poly(g);
        let d = delta(&p, a)?.finite().unwrap_or(f64::INFINITY);
        let dp = delta_plus(&p, a)?.finite().unwrap_or(f64::INFINITY);
        let (b, bp) = (4.0 * c.omega() * d, 4.0 * dp / ((a - 1.0) * c.gamma_half_sq()));
        let mut m: f64 = 0.0;
        for x in spectral::sample_points(KillingDomain::PuncturedLine, per_side) {
            m = m.max(green::ii_operator(&p, a, x, None)?);
        }
        let mut mp: f64 = 0.0;
        for x in spectral::sample_points(KillingDomain::HalfLine, 2 * per_side) {
            mp = mp.max(green::ii_plus_operator(&p, a, x)?);
        }
        ok &= m <= b + 1e-6 && mp <= bp + 1e-6;
        parts.push(format!("poly:{g} II {m:.5}<={b:.5} II+ {mp:.5}<={bp:.5}"));
    }
    Ok((ok, format!("{} points each; {}", 2 * per_side, parts.join("; "))))
}

fn eigen_sandwich(o: &Options) -> Result<(bool, String)> {
    let (p, a, d) = (poly(2.0), 1.5, KillingDomain::PuncturedLine);
    let n = if o.quick { 800 } else { 2000 };
    let res = spectral::lambda0_numeric(&p, a, d, &[10.0, 25.0, 50.0], Mesh::Uniform { n }, &SolveOptions::default())?;
    let s = Sandwich::new(&p, a, d)?;
    let lam = res[2].lambda0;
    let inside = s.contains(lam);
    let ordered = s.ordered(lam);
    let monotone = spectral::is_monotone(&res, 1e-3);
    let seq: Vec<String> = res.iter().map(|r| format!("{:.4}", r.lambda0)).collect();
    Ok((
        inside && ordered && monotone,
        format!(
            "n={n} lambda(R=10,25,50) = {}; bounds [{:.4}, {:.4}] slack {}; variational {:.4} rayleigh {:.4}; monotone {monotone}",
            seq.join(", "),
            s.lower.unwrap_or(f64::NAN),
            s.upper.unwrap_or(f64::NAN),
            SANDWICH_SLACK,
            s.variational_lower.unwrap_or(f64::NAN),
            s.rayleigh_upper.unwrap_or(f64::NAN),
        ),
    ))
}

fn halfline_bound(o: &Options) -> Result<(bool, String)> {
    let (p, a) = (poly(2.0), 1.5);
    let n = if o.quick { 800 } else { 2000 };
    let lam = spectral::lambda0_at(&p, a, KillingDomain::HalfLine, 50.0, Mesh::Uniform { n }, &SolveOptions::default())?.lambda0;
    let lower = rate_bounds(&p, a)?.lambda0_halfline_lower.unwrap_or(f64::INFINITY);
    Ok((lam >= 0.9 * lower, format!("lambda0 = {lam:.4} >= 0.9 * {lower:.5}")))
}

fn sampler(_: &Options) -> Result<(bool, String)> {
    let n = 1_000_000;
    let mut ok = true;
    let mut parts = Vec::new();
    for (k, a) in ALPHAS.into_iter().enumerate() {
        let mut s = StableSampler::new(a, 2024, k as u64)?;
        let xs: Vec<f64> = (0..n).map(|_| s.standard()).collect();
        let mut cf_err: f64 = 0.0;
        for xi in [0.5f64, 1.0, 2.0] {
            let (mut c, mut si) = (0.0, 0.0);
            for &x in &xs {
                c += (xi * x).cos();
                si += (xi * x).sin();
            }
            let nf = n as f64;
            cf_err = cf_err.max((c / nf - (-xi.powf(a)).exp()).abs()).max((si / nf).abs());
        }
        let mut abs: Vec<f64> = xs.iter().map(|x| x.abs()).collect();
        abs.sort_by(f64::total_cmp);
        let surv = |x: f64| (abs.len() - abs.partition_point(|&v| v <= x)) as f64 / n as f64;
        let (lo, hi) = (20.0, 200.0);
        let index = -(surv(hi) / surv(lo)).ln() / (hi / lo).ln();
        ok &= cf_err <= 4e-3 && (index - a).abs() <= 0.1;
        parts.push(format!("alpha {a}: cf error {cf_err:.1e}, tail index {index:.3}"));
    }
    Ok((ok, format!("{n} samples; {}", parts.join("; "))))
}

fn hitting(o: &Options) -> Result<(bool, String)> {
    let (p, a) = (poly(2.0), 1.5);
    let (dt, paths) = if o.quick { (2e-3, 2000) } else { (1e-3, 10_000) };
    let cfg = PathConfig::new(dt, 50.0, Scheme::TimeChange, paths)?;
    let est = montecarlo::estimate_hitting_sweep(&p, a, 5.0, &[0.2, 0.1, 0.05], &cfg, Seeding::new(10), &o.runner)?;
    let e = est[2];
    let bound = AlphaConstants::new(a)?.omega() * PI / 4.0;
    let sweep: Vec<String> = est.iter().map(|e| format!("{}:{:.4}", e.epsilon, e.mean)).collect();
    Ok((
        e.mean <= bound + 3.0 * e.stderr,
        format!(
            "{paths} paths; mean {:.4} +- {:.4} <= {bound:.5} + 3 se; sweep {}; censored {}",
            e.mean,
            e.stderr,
            sweep.join(" "),
            e.n_censored
        ),
    ))
}

fn stationarity(o: &Options) -> Result<(bool, String)> {
    let (p, a) = (poly(2.0), 1.5);
    let paths = if o.quick { 20 } else { 40 };
    let cfg = PathConfig::new(1e-2, 250.0, Scheme::TimeChange, paths)?;
    let e = montecarlo::estimate_stationary(&p, a, &cfg, Seeding::new(11), 20, &o.runner)?;
    let ok = e.ks_distance <= 0.05 && e.n_samples >= 100_000;
    Ok((ok, format!("KS {:.4} over {} samples", e.ks_distance, e.n_samples)))
}

fn decay(o: &Options) -> Result<(bool, String)> {
    let (p, a) = (poly(2.0), 1.5);
    let paths = if o.quick { 3000 } else { 10_000 };
    let cfg = PathConfig::new(1e-2, 6.0, Scheme::TimeChange, paths)?;
    let f = |x: f64| x / (1.0 + x.abs());
    let e = montecarlo::estimate_decay_rate(&p, a, &f, &[1.0, 3.0], &cfg, Seeding::new(12), &o.runner)?;
    let threshold = 0.5 * rate_bounds(&p, a)?.lambda1_lower.unwrap_or(f64::INFINITY);
    Ok((e.rate >= threshold, format!("{paths} paths; rate {:.3} +- {:.3} >= {threshold:.4}", e.rate, e.stderr)))
}
