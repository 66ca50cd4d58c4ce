//! Path simulation of dY = σ(Y−)dX, by Euler steps or by the time change
//! Y_t = X_{ζ_t}, and the estimators built on it.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::quad::QuadSpec;
use crate::sigma::{mu_below, mu_interval, mu_total, SigmaProfile};
use crate::special::check_alpha;
use crate::{Error, Result};

#[allow(unused_imports)]
use num_traits::Float;

/// Symmetric α-stable variates with E e^{iξS} = e^{−|ξ|^α}, one ChaCha8
/// stream per `(master_seed, stream_id)`.
#[derive(Debug, Clone)]
pub struct StableSampler {
    alpha: f64,
    master_seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl StableSampler {
    pub fn new(alpha: f64, master_seed: u64, stream_id: u64) -> Result<Self> {
        check_alpha(alpha)?;
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        Ok(StableSampler { alpha, master_seed, stream_id, rng })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }
    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on the open interval (0,1).
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Chambers–Mallows–Stuck.
    pub fn standard(&mut self) -> f64 {
        let a = self.alpha;
        let u = PI * (self.uniform() - 0.5);
        let e = -self.uniform().ln();
        (a * u).sin() / u.cos().powf(1.0 / a) * (((1.0 - a) * u).cos() / e).powf((1.0 - a) / a)
    }

    /// Increment of X over a step `dt`: dt^{1/α}·S.
    pub fn increment(&mut self, dt: f64) -> f64 {
        dt.powf(1.0 / self.alpha) * self.standard()
    }
}

/// [`StableSampler::increment`] as a free function.
pub fn sample_stable_increment(sampler: &mut StableSampler, dt: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::InvalidConfig(format!("dt = {dt} must be positive")));
    }
    Ok(sampler.increment(dt))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Euler,
    TimeChange,
}

impl core::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euler" => Ok(Scheme::Euler),
            "timechange" => Ok(Scheme::TimeChange),
            _ => Err(Error::InvalidConfig(format!("unknown scheme '{s}' (euler, timechange)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathConfig {
    pub dt: f64,
    pub horizon: f64,
    pub scheme: Scheme,
    pub n_paths: usize,
    /// X-step budget per path for the time-change scheme; default 1000·horizon/dt.
    pub max_steps: Option<u64>,
}

impl PathConfig {
    pub fn new(dt: f64, horizon: f64, scheme: Scheme, n_paths: usize) -> Result<Self> {
        let c = PathConfig { dt, horizon, scheme, n_paths, max_steps: None };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfig(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.horizon >= self.dt && self.horizon.is_finite()) {
            return Err(Error::InvalidConfig(format!("horizon {} must be at least dt {}", self.horizon, self.dt)));
        }
        if self.n_paths == 0 {
            return Err(Error::InvalidConfig("n_paths must be at least 1".into()));
        }
        Ok(())
    }

    fn steps(&self) -> u64 {
        (self.horizon / self.dt - 1e-9).ceil().max(1.0) as u64
    }

    fn budget(&self) -> u64 {
        self.max_steps.unwrap_or_else(|| self.steps().saturating_mul(1000))
    }
}

/// Y sampled at the times `k·dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// |Y| exceeded 1e300 (Euler); the remaining values are NaN.
    pub diverged: bool,
    /// Steps of the driving process taken.
    pub steps: u64,
}

const BLOWUP: f64 = 1e300;

/// One step of the driving X in the time-change scheme: X-time advance
/// dt·min(σ^α, (1+|x|)^α), clock advance by the left-endpoint rule.
struct Clock<'a> {
    profile: &'a SigmaProfile,
    alpha: f64,
    dt: f64,
}

impl Clock<'_> {
    /// Returns (new x, intrinsic time spent at the old x).
    fn step(&self, x: f64, s: &mut StableSampler) -> Result<(f64, f64)> {
        let a = self.alpha;
        let sig = self.profile.eval(x)?;
        let sa = sig.powf(a);
        let cap = (1.0 + x.abs()).powf(a);
        let ds = self.dt * sa.min(cap);
        Ok((x + s.increment(ds), ds / sa))
    }
}

/// Drives a path and reports the value at each intrinsic grid time through
/// `visit(k, y)`; stops early when `visit` returns false.
fn drive(
    profile: &SigmaProfile,
    alpha: f64,
    y0: f64,
    cfg: &PathConfig,
    s: &mut StableSampler,
    mut visit: impl FnMut(u64, f64) -> bool,
) -> Result<(bool, u64)> {
    let n = cfg.steps();
    match cfg.scheme {
        Scheme::Euler => {
            let mut y = y0;
            if !visit(0, y) {
                return Ok((false, 0));
            }
            for k in 1..=n {
                y += profile.eval(y)? * s.increment(cfg.dt);
                if !(y.abs() <= BLOWUP) {
                    return Ok((true, k));
                }
                if !visit(k, y) {
                    return Ok((false, k));
                }
            }
            Ok((false, n))
        }
        Scheme::TimeChange => {
            let clock = Clock { profile, alpha, dt: cfg.dt };
            let budget = cfg.budget();
            let (mut x, mut a) = (y0, 0.0);
            let mut k = 0u64;
            let mut steps = 0u64;
            // Y_t = x for t ∈ [a, a + dA)
            loop {
                let (nx, da) = clock.step(x, s)?;
                let next = a + da;
                // guard against the accumulated clock drifting past a grid time by rounding
                while k <= n && (k as f64) * cfg.dt < next - 1e-9 * cfg.dt {
                    if !visit(k, x) {
                        return Ok((false, steps));
                    }
                    k += 1;
                }
                if k > n {
                    return Ok((false, steps));
                }
                steps += 1;
                if steps >= budget {
                    return Err(Error::HorizonExceeded { target: cfg.horizon, steps });
                }
                x = nx;
                a = next;
            }
        }
    }
}

fn record(profile: &SigmaProfile, alpha: f64, y0: f64, cfg: &PathConfig, s: &mut StableSampler) -> Result<Path> {
    cfg.validate()?;
    let n = cfg.steps() as usize;
    let mut values = Vec::with_capacity(n + 1);
    let (diverged, steps) = drive(profile, alpha, y0, cfg, s, |_, y| {
        values.push(y);
        true
    })?;
    values.resize(n + 1, f64::NAN);
    let times = (0..=n).map(|k| k as f64 * cfg.dt).collect();
    Ok(Path { times, values, diverged, steps })
}

/// Euler: Y_{k+1} = Y_k + σ(Y_k)ΔX_k.
pub fn simulate_euler(profile: &SigmaProfile, alpha: f64, y0: f64, cfg: &PathConfig, s: &mut StableSampler) -> Result<Path> {
    record(profile, alpha, y0, &PathConfig { scheme: Scheme::Euler, ..*cfg }, s)
}

/// Y_t = X_{ζ_t}, ζ the inverse of A_s = ∫_0^s σ(X_u)^{−α}du.
pub fn simulate_timechange(profile: &SigmaProfile, alpha: f64, y0: f64, cfg: &PathConfig, s: &mut StableSampler) -> Result<Path> {
    record(profile, alpha, y0, &PathConfig { scheme: Scheme::TimeChange, ..*cfg }, s)
}

/// Dispatch on `cfg.scheme`.
pub fn simulate(profile: &SigmaProfile, alpha: f64, y0: f64, cfg: &PathConfig, s: &mut StableSampler) -> Result<Path> {
    record(profile, alpha, y0, cfg, s)
}

/// Runs independent per-path tasks; results come back in path order.
pub trait PathRunner {
    fn run<T, F>(&self, n: usize, task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync;
}

/// In-order, single-threaded.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl PathRunner for Sequential {
    fn run<T, F>(&self, n: usize, task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        (0..n).map(task).collect()
    }
}

/// Where path `i` draws its randomness: stream `first_stream + i` of `master_seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Seeding {
    pub master_seed: u64,
    pub first_stream: u64,
}

impl Seeding {
    pub fn new(master_seed: u64) -> Self {
        Seeding { master_seed, first_stream: 0 }
    }
    pub fn sampler(&self, alpha: f64, path: usize) -> Result<StableSampler> {
        StableSampler::new(alpha, self.master_seed, self.first_stream + path as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HittingEstimate {
    /// Mean of min(τ, horizon): censored paths enter at the horizon.
    pub mean: f64,
    pub stderr: f64,
    pub n_hit: usize,
    pub n_censored: usize,
    pub epsilon: f64,
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (m, f64::INFINITY);
    }
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

/// First entrance time into [−ε, ε] from `x0`, averaged over paths.
pub fn estimate_hitting_time<R: PathRunner>(
    profile: &SigmaProfile,
    alpha: f64,
    x0: f64,
    epsilon: f64,
    cfg: &PathConfig,
    seeding: Seeding,
    runner: &R,
) -> Result<HittingEstimate> {
    Ok(estimate_hitting_sweep(profile, alpha, x0, &[epsilon], cfg, seeding, runner)?.remove(0))
}

/// Several target half-widths on the same paths, so the estimates are
/// pathwise ordered.
pub fn estimate_hitting_sweep<R: PathRunner>(
    profile: &SigmaProfile,
    alpha: f64,
    x0: f64,
    epsilons: &[f64],
    cfg: &PathConfig,
    seeding: Seeding,
    runner: &R,
) -> Result<Vec<HittingEstimate>> {
    cfg.validate()?;
    check_alpha(alpha)?;
    if epsilons.is_empty() || epsilons.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::InvalidConfig("epsilon must be positive".into()));
    }
    let ne = epsilons.len();
    let smallest = epsilons.iter().copied().fold(f64::INFINITY, f64::min);
    let per_path = runner.run(cfg.n_paths, |i| -> Result<Vec<Option<f64>>> {
        let mut s = seeding.sampler(alpha, i)?;
        let mut hit: Vec<Option<f64>> = vec![None; ne];
        if cfg.scheme == Scheme::Euler {
            drive(profile, alpha, x0, cfg, &mut s, |k, y| {
                for (h, &e) in hit.iter_mut().zip(epsilons) {
                    if h.is_none() && y.abs() <= e {
                        *h = Some(k as f64 * cfg.dt);
                    }
                }
                y.abs() > smallest
            })?;
            return Ok(hit);
        }
        // Exact entry epochs on the clock, not rounded to the output grid.
        let clock = Clock { profile, alpha, dt: cfg.dt };
        let (mut x, mut a, mut steps) = (x0, 0.0, 0u64);
        let budget = cfg.budget();
        loop {
            for (h, &e) in hit.iter_mut().zip(epsilons) {
                if h.is_none() && x.abs() <= e {
                    *h = Some(a);
                }
            }
            if x.abs() <= smallest || a >= cfg.horizon {
                return Ok(hit);
            }
            let (nx, da) = clock.step(x, &mut s)?;
            x = nx;
            a += da;
            steps += 1;
            if steps >= budget {
                // out of X steps before the clock reached the horizon: censored
                return Ok(hit);
            }
        }
    });
    let per_path: Vec<Vec<Option<f64>>> = per_path.into_iter().collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(ne);
    for (j, &epsilon) in epsilons.iter().enumerate() {
        let times: Vec<f64> = per_path.iter().map(|h| h[j].map_or(cfg.horizon, |t| t.min(cfg.horizon))).collect();
        let n_censored = per_path.iter().filter(|h| h[j].is_none_or(|t| t >= cfg.horizon)).count();
        if n_censored == cfg.n_paths {
            return Err(Error::AllCensored(cfg.n_paths));
        }
        let (mean, stderr) = mean_se(&times);
        out.push(HittingEstimate { mean, stderr, n_hit: cfg.n_paths - n_censored, n_censored, epsilon });
    }
    Ok(out)
}

/// Piecewise-linear interpolation of the π CDF on a fixed ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct PiCdf {
    xs: Vec<f64>,
    fs: Vec<f64>,
}

impl PiCdf {
    pub fn new(profile: &SigmaProfile, alpha: f64) -> Result<Self> {
        let Some(total) = mu_total(profile, alpha)?.finite() else {
            return Err(Error::NotErgodic("mu(R) is infinite".into()));
        };
        let mut pos: Vec<f64> = (0..=1200).map(|k| 10f64.powf(-4.0 + k as f64 / 100.0)).collect();
        pos.insert(0, 0.0);
        let mut xs: Vec<f64> = pos.iter().rev().map(|x| -x).collect();
        xs.extend(pos.iter().skip(1));
        let mut fs = Vec::with_capacity(xs.len());
        let mut f = mu_below(profile, alpha, xs[0])? / total;
        fs.push(f);
        for w in xs.windows(2) {
            f += mu_interval(profile, alpha, w[0], w[1])? / total;
            fs.push(f);
        }
        Ok(PiCdf { xs, fs })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.fs[0];
        }
        if x >= self.xs[n - 1] {
            return 1.0;
        }
        let i = self.xs.partition_point(|&v| v <= x) - 1;
        let t = (x - self.xs[i]) / (self.xs[i + 1] - self.xs[i]);
        (self.fs[i] + t * (self.fs[i + 1] - self.fs[i])).min(1.0)
    }

    /// Smallest ladder point with CDF ≥ q.
    pub fn quantile(&self, q: f64) -> f64 {
        let i = self.fs.partition_point(|&f| f < q).min(self.xs.len() - 1);
        self.xs[i]
    }
}

/// sup_x |F_n(x) − F(x)| for the empirical law of `samples`.
pub fn ks_distance(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    d
}

/// Two-sample Kolmogorov distance.
pub fn ks_two_sample(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub center: f64,
    pub lo: f64,
    pub hi: f64,
    /// Fraction of samples in the bin.
    pub mass: f64,
    pub pi_mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryEstimate {
    pub ks_distance: f64,
    pub n_samples: usize,
    pub burn_in: f64,
    pub histogram: Vec<HistogramBin>,
}

/// Time-average occupation after a burn-in of 20% of the horizon, each
/// path started at 0, compared with π = μ/μ(ℝ).
pub fn estimate_stationary<R: PathRunner>(
    profile: &SigmaProfile,
    alpha: f64,
    cfg: &PathConfig,
    seeding: Seeding,
    bins: usize,
    runner: &R,
) -> Result<StationaryEstimate> {
    cfg.validate()?;
    let cdf = PiCdf::new(profile, alpha)?;
    let burn_in = 0.2 * cfg.horizon;
    let first = (burn_in / cfg.dt).ceil() as u64;
    let per_path = runner.run(cfg.n_paths, |i| -> Result<Vec<f64>> {
        let mut s = seeding.sampler(alpha, i)?;
        let mut out = Vec::new();
        let (diverged, _) = drive(profile, alpha, 0.0, cfg, &mut s, |k, y| {
            if k >= first {
                out.push(y);
            }
            true
        })?;
        if diverged {
            return Err(Error::Eval(format!("path {i} diverged; use the time-change scheme or a smaller dt")));
        }
        Ok(out)
    });
    let mut samples: Vec<f64> = Vec::new();
    for p in per_path {
        samples.extend(p?);
    }
    let n = samples.len();
    let ks = ks_distance(&mut samples, |x| cdf.eval(x));
    let bins = bins.max(1);
    let (lo, hi) = (cdf.quantile(0.01), cdf.quantile(0.99));
    let w = (hi - lo) / bins as f64;
    let mut histogram: Vec<HistogramBin> = (0..bins)
        .map(|b| {
            let (a, c) = (lo + w * b as f64, lo + w * (b + 1) as f64);
            HistogramBin { center: 0.5 * (a + c), lo: a, hi: c, mass: 0.0, pi_mass: cdf.eval(c) - cdf.eval(a) }
        })
        .collect();
    for &y in &samples {
        if y >= lo && y < hi {
            let b = (((y - lo) / w) as usize).min(bins - 1);
            histogram[b].mass += 1.0 / n as f64;
        }
    }
    Ok(StationaryEstimate { ks_distance: ks, n_samples: n, burn_in, histogram })
}

/// Fitted exponential decay of E_{x0} f(Y_t) − π(f) for one start point.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    pub x0: f64,
    pub rate: f64,
    pub stderr: f64,
    /// Grid times used in the regression.
    pub window: (f64, f64),
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayEstimate {
    /// Inverse-variance combination over the start points.
    pub rate: f64,
    pub stderr: f64,
    pub pi_f: f64,
    pub fits: Vec<DecayFit>,
}

/// π(f) = ∫ f dμ / μ(ℝ).
pub fn pi_expectation(profile: &SigmaProfile, alpha: f64, f: &dyn Fn(f64) -> f64) -> Result<f64> {
    use crate::quad::{integrate, integrate_from_neg_infinity, integrate_to_infinity};
    let Some(total) = mu_total(profile, alpha)?.finite() else {
        return Err(Error::NotErgodic("mu(R) is infinite".into()));
    };
    let spec = QuadSpec::with_rel_tol(1e-10);
    let g = crate::sigma::Guard::new();
    let h = |y: f64| f(y) * g.take(profile.density(y, alpha));
    let r = (|| -> Result<f64> {
        Ok(integrate_from_neg_infinity(&h, -1.0, &spec)?.value
            + integrate(&h, -1.0, 0.0, &spec)?.value
            + integrate(&h, 0.0, 1.0, &spec)?.value
            + integrate_to_infinity(&h, 1.0, &spec)?.value)
    })();
    Ok(g.finish(r)? / total)
}

/// Weighted least squares of log|mean_t − π(f)| on t over the leading run
/// of grid times where the signal exceeds three standard errors.
pub fn estimate_decay_rate<R: PathRunner>(
    profile: &SigmaProfile,
    alpha: f64,
    f: &(dyn Fn(f64) -> f64 + Sync),
    x0_list: &[f64],
    cfg: &PathConfig,
    seeding: Seeding,
    runner: &R,
) -> Result<DecayEstimate> {
    cfg.validate()?;
    if x0_list.is_empty() {
        return Err(Error::InvalidConfig("no start points".into()));
    }
    let pi_f = pi_expectation(profile, alpha, f)?;
    let n = cfg.steps() as usize;
    let mut fits = Vec::new();
    for (j, &x0) in x0_list.iter().enumerate() {
        let seeding = Seeding { first_stream: seeding.first_stream + (j * cfg.n_paths) as u64, ..seeding };
        let per_path = runner.run(cfg.n_paths, |i| -> Result<Vec<f64>> {
            let mut s = seeding.sampler(alpha, i)?;
            let mut out = vec![f64::NAN; n + 1];
            let (diverged, _) = drive(profile, alpha, x0, cfg, &mut s, |k, y| {
                out[k as usize] = f(y);
                true
            })?;
            if diverged {
                return Err(Error::Eval(format!("path {i} diverged; use the time-change scheme or a smaller dt")));
            }
            Ok(out)
        });
        let paths: Vec<Vec<f64>> = per_path.into_iter().collect::<Result<_>>()?;
        let np = paths.len() as f64;
        let mut ts = Vec::new();
        let mut ys = Vec::new();
        let mut ws = Vec::new();
        for k in 1..=n {
            let m = paths.iter().map(|p| p[k]).sum::<f64>() / np;
            let v = paths.iter().map(|p| (p[k] - m).powi(2)).sum::<f64>() / (np - 1.0).max(1.0);
            let se = (v / np).sqrt();
            let signal = (m - pi_f).abs();
            if !(signal > 3.0 * se && signal > 1e-8 * (1.0 + pi_f.abs())) {
                if ts.is_empty() {
                    continue;
                }
                break;
            }
            ts.push(k as f64 * cfg.dt);
            ys.push(signal.ln());
            // var(log s) ≈ (se/s)²
            ws.push((signal / se).powi(2).min(1e12));
        }
        if ts.len() < 4 {
            continue;
        }
        let sw: f64 = ws.iter().sum();
        let tm = ts.iter().zip(&ws).map(|(t, w)| t * w).sum::<f64>() / sw;
        let ym = ys.iter().zip(&ws).map(|(y, w)| y * w).sum::<f64>() / sw;
        let sxx: f64 = ts.iter().zip(&ws).map(|(t, w)| w * (t - tm).powi(2)).sum();
        let sxy: f64 = ts.iter().zip(&ys).zip(&ws).map(|((t, y), w)| w * (t - tm) * (y - ym)).sum();
        let slope = sxy / sxx;
        // residual-scaled standard error
        let rss: f64 = ts.iter().zip(&ys).zip(&ws).map(|((t, y), w)| w * (y - ym - slope * (t - tm)).powi(2)).sum();
        let dof = (ts.len() - 2) as f64;
        let stderr = (rss / dof / sxx).sqrt().max((1.0 / sxx).sqrt());
        fits.push(DecayFit { x0, rate: -slope, stderr, window: (ts[0], ts[ts.len() - 1]), points: ts.len() });
    }
    if fits.is_empty() {
        return Err(Error::SignalTooNoisy("no start point has four grid times with signal above 3 standard errors".into()));
    }
    let wsum: f64 = fits.iter().map(|f| f.stderr.powi(-2)).sum();
    let rate = fits.iter().map(|f| f.rate * f.stderr.powi(-2)).sum::<f64>() / wsum;
    Ok(DecayEstimate { rate, stderr: wsum.powf(-0.5), pi_f, fits })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let mut a = StableSampler::new(1.5, 7, 3).unwrap();
        let mut b = StableSampler::new(1.5, 7, 3).unwrap();
        let mut c = StableSampler::new(1.5, 7, 4).unwrap();
        let xa: Vec<f64> = (0..10).map(|_| a.standard()).collect();
        let xb: Vec<f64> = (0..10).map(|_| b.standard()).collect();
        let xc: Vec<f64> = (0..10).map(|_| c.standard()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
        assert!(xa.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn characteristic_function_and_symmetry() {
        for alpha in [1.2, 1.5, 1.8] {
            let mut s = StableSampler::new(alpha, 1, 0).unwrap();
            let n = 200_000;
            let xs: Vec<f64> = (0..n).map(|_| s.increment(0.5)).collect();
            for xi in [0.5f64, 1.0, 2.0] {
                let cf = xs.iter().map(|x| (xi * x).cos()).sum::<f64>() / n as f64;
                let exact = (-0.5 * xi.powf(alpha)).exp();
                assert!((cf - exact).abs() < 0.01, "alpha {alpha}, xi {xi}: {cf} vs {exact}");
            }
            let sign = xs.iter().map(|x| x.signum()).sum::<f64>() / n as f64;
            assert!(sign.abs() < 3.0 / (n as f64).sqrt() * 1.5);
        }
    }

    #[test]
    fn constant_sigma_euler_is_the_driver() {
        let one = SigmaProfile::expression("1").unwrap();
        let cfg = PathConfig::new(0.01, 1.0, Scheme::Euler, 1).unwrap();
        let mut s = StableSampler::new(1.5, 9, 0).unwrap();
        let p = simulate_euler(&one, 1.5, 0.0, &cfg, &mut s).unwrap();
        let mut d = StableSampler::new(1.5, 9, 0).unwrap();
        let mut x = 0.0;
        for k in 1..p.values.len() {
            x += d.increment(0.01);
            assert_eq!(p.values[k], x);
        }
        assert_eq!(p.times.len(), 101);
        let mut s = StableSampler::new(1.5, 9, 0).unwrap();
        let q = simulate_timechange(&one, 1.5, 0.0, &cfg, &mut s).unwrap();
        // A_t = t, so Y ≡ X
        for k in 0..p.values.len() {
            assert!((q.values[k] - p.values[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn hitting_edge_cases() {
        let p = SigmaProfile::polynomial(2.0).unwrap();
        let cfg = PathConfig::new(1e-3, 20.0, Scheme::TimeChange, 50).unwrap();
        let h = estimate_hitting_time(&p, 1.5, 0.01, 0.05, &cfg, Seeding::new(1), &Sequential).unwrap();
        assert_eq!(h.mean, 0.0);
        let sweep = estimate_hitting_sweep(&p, 1.5, 5.0, &[0.2, 0.1, 0.05], &cfg, Seeding::new(1), &Sequential).unwrap();
        assert!(sweep[0].mean <= sweep[1].mean && sweep[1].mean <= sweep[2].mean);
        let tiny = PathConfig::new(1e-3, 1e-3, Scheme::TimeChange, 3).unwrap();
        assert!(matches!(estimate_hitting_time(&p, 1.5, 50.0, 0.05, &tiny, Seeding::new(1), &Sequential), Err(Error::AllCensored(3))));
    }

    #[test]
    fn pi_cdf_for_cubic_density() {
        // σ = (1+|x|)², α = 1.5: π(dx) = (1+|x|)^{−3}dx, F(x) = 1 − 1/(2(1+x)²) for x ≥ 0
        let p = SigmaProfile::polynomial(2.0).unwrap();
        let c = PiCdf::new(&p, 1.5).unwrap();
        for x in [0.0, 0.3, 2.0, 50.0] {
            let exact = 1.0 - 0.5 / (1.0f64 + x).powi(2);
            assert!((c.eval(x) - exact).abs() < 2e-5, "{x}");
            assert!((c.eval(-x) - (1.0 - exact)).abs() < 2e-5);
        }
        assert!(matches!(PiCdf::new(&SigmaProfile::expression("1").unwrap(), 1.5), Err(Error::NotErgodic(_))));
    }

    #[test]
    fn constant_test_function_has_no_signal() {
        let p = SigmaProfile::polynomial(2.0).unwrap();
        let cfg = PathConfig::new(0.01, 1.0, Scheme::TimeChange, 20).unwrap();
        let r = estimate_decay_rate(&p, 1.5, &|_| 1.0, &[2.0], &cfg, Seeding::new(3), &Sequential);
        assert!(matches!(r, Err(Error::SignalTooNoisy(_))));
    }

    #[test]
    fn horizon_budget_is_enforced() {
        let p = SigmaProfile::polynomial(2.0).unwrap();
        let cfg = PathConfig { max_steps: Some(10), ..PathConfig::new(0.01, 5.0, Scheme::TimeChange, 1).unwrap() };
        let mut s = StableSampler::new(1.5, 1, 0).unwrap();
        assert!(matches!(simulate_timechange(&p, 1.5, 0.0, &cfg, &mut s), Err(Error::HorizonExceeded { .. })));
    }
}
