//! Bottom of the spectrum λ₀(B) of the killed Dirichlet form
//! `ℰ(f,f) = (C_α/2)∬(f(x)−f(y))²|x−y|^{−1−α}dxdy` on `L²(μ)`, μ = σ^{−α}dx.
//!
//! Discretization: continuous piecewise-linear hats on a node set in
//! [−R,R], f = 0 on the killing set and outside [−R,R]. Cell indicator
//! functions are not in the form domain for α > 1 (adjacent cells couple
//! with infinite energy), so the hats carry the Galerkin space. The mass
//! is lumped: m_i = ∫ φ_i dμ. Entries for nearby hats use the exact
//! fourth-antiderivative identity, distant ones Gauss–Legendre.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::green::{green_apply, GreenKernel, KillingDomain, TestFn};
use crate::quad::{gauss_legendre, integrate, QuadSpec};
use crate::sigma::{delta, Guard, SigmaProfile};
use crate::special::{gamma, h_unchecked};
use crate::{AlphaConstants, Error, Result};

#[allow(unused_imports)]
use num_traits::Float;

/// Node set with its active (free) nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub domain: KillingDomain,
    pub r: f64,
    /// All nodes, increasing. The end nodes ±R (or 0 and R) are always inactive.
    pub nodes: Vec<f64>,
    /// Indices into `nodes` of the free values.
    pub active: Vec<usize>,
    /// Number of cells for a uniform grid before boundary insertion.
    pub cells: usize,
    uniform: Option<f64>,
}

fn check_r(domain: KillingDomain, r: f64) -> Result<()> {
    let min = if domain == KillingDomain::ComplementUnitInterval { 1.0 } else { 0.0 };
    if !(r.is_finite() && r > min) {
        return Err(Error::InvalidConfig(format!("R = {r} must exceed {min}")));
    }
    Ok(())
}

impl Grid {
    /// `n` equal cells on [−R,R]. For the interval complement the nodes ±1
    /// are inserted when the cells do not already land on them.
    pub fn uniform(domain: KillingDomain, r: f64, n: usize) -> Result<Self> {
        check_r(domain, r)?;
        if n % 2 == 1 {
            return Err(Error::InvalidConfig(format!("n = {n} must be even")));
        }
        if n < 8 {
            return Err(Error::GridTooCoarse(format!("n = {n} cells; at least 8 are needed")));
        }
        let h = 2.0 * r / n as f64;
        let half = (n / 2) as i64;
        let mut nodes: Vec<f64> = (-half..=half).map(|j| j as f64 * h).collect();
        let mut uniform = Some(h);
        if domain == KillingDomain::ComplementUnitInterval {
            for b in [-1.0f64, 1.0] {
                if !nodes.iter().any(|&x| (x - b).abs() <= 1e-9 * h) {
                    nodes.push(b);
                    uniform = None;
                } else if let Some(x) = nodes.iter_mut().find(|x| (**x - b).abs() <= 1e-9 * h) {
                    *x = b;
                }
            }
            nodes.sort_by(f64::total_cmp);
        }
        Self::finish(domain, r, nodes, n, uniform)
    }

    /// Geometric grading away from the killing boundary: first cell `h0`,
    /// node distances growing by `ratio`. Defaults: h0 = (10⁻³)^{1/(α−1)}
    /// clamped to [1e−14, 1e−2], ratio 1.15.
    pub fn graded(domain: KillingDomain, r: f64, alpha: f64, h0: Option<f64>, ratio: Option<f64>) -> Result<Self> {
        check_r(domain, r)?;
        crate::special::check_alpha(alpha)?;
        let h0 = h0.unwrap_or_else(|| 1e-3f64.powf(1.0 / (alpha - 1.0)).clamp(1e-14, 1e-2));
        let ratio = ratio.unwrap_or(1.15);
        if !(h0 > 0.0 && ratio > 1.0 && ratio <= 4.0) {
            return Err(Error::InvalidConfig(format!("graded mesh needs h0 > 0 and ratio in (1, 4], got {h0}, {ratio}")));
        }
        let (origin, reach) = match domain {
            KillingDomain::ComplementUnitInterval => (1.0, r - 1.0),
            _ => (0.0, r),
        };
        if h0 >= reach / 4.0 {
            return Err(Error::GridTooCoarse(format!("h0 = {h0} is too large for R = {r}")));
        }
        let mut offsets = vec![0.0];
        let mut d = h0;
        while d < reach * (1.0 - 0.5 * (ratio - 1.0)) {
            offsets.push(d);
            d *= ratio;
        }
        offsets.push(reach);
        let right: Vec<f64> = offsets.iter().map(|o| origin + o).collect();
        let nodes: Vec<f64> = match domain {
            KillingDomain::HalfLine => right,
            KillingDomain::PuncturedLine => right.iter().rev().map(|x| -x).chain(right[1..].iter().copied()).collect(),
            KillingDomain::ComplementUnitInterval => right.iter().rev().map(|x| -x).chain(right.iter().copied()).collect(),
        };
        let cells = nodes.len() - 1;
        Self::finish(domain, r, nodes, cells, None)
    }

    fn finish(domain: KillingDomain, r: f64, nodes: Vec<f64>, cells: usize, uniform: Option<f64>) -> Result<Self> {
        let last = nodes.len() - 1;
        let scale = uniform.unwrap_or(1e-300);
        let active: Vec<usize> = (1..last)
            .filter(|&i| {
                let x = nodes[i];
                match domain {
                    KillingDomain::PuncturedLine => x.abs() > 1e-9 * scale,
                    KillingDomain::HalfLine => x > 1e-9 * scale,
                    KillingDomain::ComplementUnitInterval => x.abs() > 1.0,
                }
            })
            .collect();
        if active.len() < 2 {
            return Err(Error::GridTooCoarse(format!("{} free nodes", active.len())));
        }
        Ok(Grid { domain, r, nodes, active, cells, uniform })
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform.is_some()
    }

    /// Positions of the free nodes.
    pub fn active_nodes(&self) -> Vec<f64> {
        self.active.iter().map(|&i| self.nodes[i]).collect()
    }

    fn hat(&self, i: usize) -> [f64; 3] {
        [self.nodes[i - 1], self.nodes[i], self.nodes[i + 1]]
    }
}

/// Stiffness matrix over the free nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum Stiffness {
    /// Row-major, n×n.
    Dense { n: usize, data: Vec<f64> },
    /// Uniform grid: entry (p,q) = `coeffs[|index[p] − index[q]|]`, built per product.
    Toeplitz { coeffs: Vec<f64>, index: Vec<usize> },
}

impl Stiffness {
    pub fn dim(&self) -> usize {
        match self {
            Stiffness::Dense { n, .. } => *n,
            Stiffness::Toeplitz { index, .. } => index.len(),
        }
    }

    pub fn get(&self, p: usize, q: usize) -> f64 {
        match self {
            Stiffness::Dense { n, data } => data[p * n + q],
            Stiffness::Toeplitz { coeffs, index } => coeffs[index[p].abs_diff(index[q])],
        }
    }

    pub fn matvec(&self, x: &[f64], out: &mut [f64]) {
        let n = self.dim();
        match self {
            Stiffness::Dense { data, .. } => {
                for (p, o) in out.iter_mut().enumerate() {
                    *o = dot(&data[p * n..(p + 1) * n], x);
                }
            }
            Stiffness::Toeplitz { coeffs, index } => {
                for (p, o) in out.iter_mut().enumerate() {
                    let ip = index[p];
                    *o = index.iter().zip(x).map(|(&iq, &v)| coeffs[ip.abs_diff(iq)] * v).sum();
                }
            }
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        match self {
            Stiffness::Dense { data, .. } => data.clone(),
            Stiffness::Toeplitz { .. } => {
                let n = self.dim();
                let mut d = vec![0.0; n * n];
                for p in 0..n {
                    for q in 0..n {
                        d[p * n + q] = self.get(p, q);
                    }
                }
                d
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Assembled pencil (K, diag(m)).
#[derive(Debug, Clone, PartialEq)]
pub struct FormSystem {
    pub stiffness: Stiffness,
    pub mass: Vec<f64>,
    /// Free node positions.
    pub nodes: Vec<f64>,
    pub alpha: f64,
    pub r: f64,
    pub cells: usize,
}

impl FormSystem {
    /// A pencil given directly, dense row-major.
    pub fn from_parts(stiffness: Vec<f64>, mass: Vec<f64>) -> Result<Self> {
        let n = mass.len();
        if n == 0 || stiffness.len() != n * n {
            return Err(Error::InvalidConfig(format!("stiffness has {} entries for {n} masses", stiffness.len())));
        }
        if mass.iter().any(|&m| !(m > 0.0)) {
            return Err(Error::InvalidConfig("masses must be positive".into()));
        }
        Ok(FormSystem {
            stiffness: Stiffness::Dense { n, data: stiffness },
            mass,
            nodes: Vec::new(),
            alpha: f64::NAN,
            r: f64::NAN,
            cells: n,
        })
    }

    pub fn dim(&self) -> usize {
        self.mass.len()
    }

    /// Graph weights W_ij = −K_ij (i ≠ j).
    pub fn weight(&self, p: usize, q: usize) -> f64 {
        -self.stiffness.get(p, q)
    }

    /// Killing terms k_i = Σ_j K_ij, so that ℰ(f,f) = Σ_{i<j} W_ij(f_i−f_j)² + Σ k_i f_i².
    pub fn killing(&self) -> Vec<f64> {
        let ones = vec![1.0; self.dim()];
        let mut k = vec![0.0; self.dim()];
        self.stiffness.matvec(&ones, &mut k);
        k
    }

    pub fn energy(&self, f: &[f64]) -> f64 {
        let mut kf = vec![0.0; self.dim()];
        self.stiffness.matvec(f, &mut kf);
        dot(f, &kf)
    }
}

struct Assembler {
    c: f64,
    kappa: f64,
    alpha: f64,
    gl4: (Vec<f64>, Vec<f64>),
    gl6: (Vec<f64>, Vec<f64>),
}

impl Assembler {
    fn new(alpha: f64) -> Result<Self> {
        let consts = AlphaConstants::new(alpha)?;
        Ok(Assembler {
            c: consts.c_kernel(),
            kappa: -4.0 * gamma(alpha - 3.0) * (core::f64::consts::FRAC_PI_2 * alpha).sin() / core::f64::consts::PI,
            alpha,
            gl4: gauss_legendre(4),
            gl6: gauss_legendre(6),
        })
    }

    // A hat on (a,b,c) is Σ c_k |x − x_k|; the form pairs |x−u| with |x−v|
    // to a multiple of |u−v|^{3−α}.
    fn closed(&self, hi: [f64; 3], hj: [f64; 3]) -> f64 {
        let co = |h: [f64; 3]| {
            let (l, r) = (h[1] - h[0], h[2] - h[1]);
            [0.5 / l, -0.5 * (1.0 / l + 1.0 / r), 0.5 / r]
        };
        let (ci, cj) = (co(hi), co(hj));
        let p = 3.0 - self.alpha;
        let mut s = 0.0;
        for k in 0..3 {
            for l in 0..3 {
                let d = (hi[k] - hj[l]).abs();
                if d > 0.0 {
                    s += ci[k] * cj[l] * d.powf(p);
                }
            }
        }
        self.kappa * s
    }

    fn points(&self, h: [f64; 3], rule: &(Vec<f64>, Vec<f64>), sub: usize, out: &mut Vec<(f64, f64)>) {
        out.clear();
        for (lo, hi, up) in [(h[0], h[1], true), (h[1], h[2], false)] {
            let w = (hi - lo) / sub as f64;
            for s in 0..sub {
                let a = lo + w * s as f64;
                for (t, wt) in rule.0.iter().zip(&rule.1) {
                    let x = a + 0.5 * w * (t + 1.0);
                    let phi = if up { (x - lo) / (hi - lo) } else { (hi - x) / (hi - lo) };
                    out.push((x, 0.5 * w * wt * phi));
                }
            }
        }
    }

    // Disjoint supports: −C ∬ φ_i(x)φ_j(y)|x−y|^{−1−α}.
    fn far(&self, hi: [f64; 3], hj: [f64; 3], buf: &mut PointBufs) -> f64 {
        let gap = if hi[1] < hj[1] { hj[0] - hi[2] } else { hi[0] - hj[2] };
        let width = (hi[2] - hi[0]).max(hj[2] - hj[0]);
        let (rule, sub) = if gap >= 6.0 * width { (&self.gl4, 1) } else { (&self.gl6, ((2.0 * width / gap).ceil() as usize).clamp(1, 64)) };
        self.points(hi, rule, sub, &mut buf.0);
        self.points(hj, rule, sub, &mut buf.1);
        let e = -1.0 - self.alpha;
        let mut s = 0.0;
        for &(x, wx) in &buf.0 {
            for &(y, wy) in &buf.1 {
                s += wx * wy * (x - y).abs().powf(e);
            }
        }
        -self.c * s
    }

    fn entry(&self, hi: [f64; 3], hj: [f64; 3], index_gap: usize, buf: &mut PointBufs) -> f64 {
        if index_gap <= 2 {
            self.closed(hi, hj)
        } else {
            self.far(hi, hj, buf)
        }
    }
}

/// Options for [`assemble_form`] and [`solve_lambda0`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Largest system stored densely; above it uniform grids use a lazy Toeplitz product.
    pub dense_limit: usize,
    pub max_iter: usize,
    /// Target for ‖Kv − λMv‖/‖Mv‖.
    pub tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { dense_limit: 4096, max_iter: 5000, tol: 1e-8 }
    }
}

/// Assemble the Galerkin pencil on `grid`.
pub fn assemble_form(profile: &SigmaProfile, alpha: f64, grid: &Grid, opts: &SolveOptions) -> Result<FormSystem> {
    let asm = Assembler::new(alpha)?;
    let n = grid.active.len();
    let mut buf = (Vec::new(), Vec::new());
    let stiffness = if let Some(h) = grid.uniform {
        // Entries depend on the index gap only.
        let span = grid.active[n - 1] - grid.active[0];
        let base = [-h, 0.0, h];
        let coeffs: Vec<f64> = (0..=span)
            .map(|k| {
                let s = k as f64 * h;
                asm.entry(base, [s - h, s, s + h], k, &mut buf)
            })
            .collect();
        if n > opts.dense_limit {
            Stiffness::Toeplitz { coeffs, index: grid.active.clone() }
        } else {
            let mut data = vec![0.0; n * n];
            for p in 0..n {
                for q in 0..n {
                    data[p * n + q] = coeffs[grid.active[p].abs_diff(grid.active[q])];
                }
            }
            Stiffness::Dense { n, data }
        }
    } else {
        if n > opts.dense_limit {
            return Err(Error::InvalidConfig(format!("{n} free nodes on a non-uniform grid exceed the dense limit {}", opts.dense_limit)));
        }
        let mut data = vec![0.0; n * n];
        for p in 0..n {
            let i = grid.active[p];
            for q in p..n {
                let j = grid.active[q];
                let v = asm.entry(grid.hat(i), grid.hat(j), i.abs_diff(j), &mut buf);
                data[p * n + q] = v;
                data[q * n + p] = v;
            }
        }
        Stiffness::Dense { n, data }
    };
    if (0..n.min(64)).any(|p| !(stiffness.get(p, p) > 0.0) || !stiffness.get(p, p).is_finite()) {
        return Err(Error::GridTooCoarse("non-positive diagonal stiffness".into()));
    }

    let spec = QuadSpec::with_rel_tol(1e-10);
    let g = Guard::new();
    let mut mass = Vec::with_capacity(n);
    for &i in &grid.active {
        let [a, b, c] = grid.hat(i);
        let left = integrate(|x| (x - a) / (b - a) * g.take(profile.density(x, alpha)), a, b, &spec);
        let right = integrate(|x| (c - x) / (c - b) * g.take(profile.density(x, alpha)), b, c, &spec);
        let m = g.finish(left.and_then(|l| right.map(|r| l.value + r.value)))?;
        if !(m > 0.0) {
            return Err(Error::GridTooCoarse(format!("zero mass at node {b}")));
        }
        mass.push(m);
    }
    Ok(FormSystem { stiffness, mass, nodes: grid.active_nodes(), alpha, r: grid.r, cells: grid.cells })
}

type PointBufs = (Vec<(f64, f64)>, Vec<(f64, f64)>);

/// Ground state of the pencil.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub lambda0: f64,
    /// Normalized so that Σ m_i v_i² = 1, with positive sum.
    pub eigvec: Vec<f64>,
    pub nodes: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub r: f64,
    pub cells: usize,
    /// All entries of one sign.
    pub ground_state: bool,
}

enum Solver {
    Cholesky { l: Vec<f64>, d: Vec<f64>, n: usize },
    Cg,
}

impl Solver {
    fn new(k: &Stiffness) -> Result<Self> {
        let n = k.dim();
        if matches!(k, Stiffness::Toeplitz { .. }) {
            return Ok(Solver::Cg);
        }
        let d: Vec<f64> = (0..n).map(|p| 1.0 / k.get(p, p).sqrt()).collect();
        let mut l = k.to_dense();
        for p in 0..n {
            for q in 0..n {
                l[p * n + q] *= d[p] * d[q];
            }
        }
        for i in 0..n {
            let (upper, lower) = l.split_at_mut(i * n);
            let row = &mut lower[..n];
            for j in 0..i {
                let rj = &upper[j * n..j * n + j + 1];
                row[j] = (row[j] - dot(&row[..j], &rj[..j])) / rj[j];
            }
            let s = row[i] - dot(&row[..i], &row[..i]);
            if !(s > 0.0) {
                return Err(Error::GridTooCoarse("stiffness is not positive definite".into()));
            }
            row[i] = s.sqrt();
        }
        Ok(Solver::Cholesky { l, d, n })
    }

    fn solve(&self, k: &Stiffness, b: &[f64], x: &mut [f64]) -> Result<()> {
        match self {
            Solver::Cholesky { l, d, n } => {
                let n = *n;
                let mut y: Vec<f64> = b.iter().zip(d).map(|(b, d)| b * d).collect();
                for i in 0..n {
                    y[i] = (y[i] - dot(&l[i * n..i * n + i], &y[..i])) / l[i * n + i];
                }
                for i in (0..n).rev() {
                    let mut s = y[i];
                    for j in i + 1..n {
                        s -= l[j * n + i] * y[j];
                    }
                    y[i] = s / l[i * n + i];
                }
                for i in 0..n {
                    x[i] = y[i] * d[i];
                }
                Ok(())
            }
            Solver::Cg => cg(k, b, x),
        }
    }
}

// Jacobi-preconditioned conjugate gradients, warm-started from `x`.
fn cg(k: &Stiffness, b: &[f64], x: &mut [f64]) -> Result<()> {
    let n = b.len();
    let dinv: Vec<f64> = (0..n).map(|p| 1.0 / k.get(p, p)).collect();
    let mut r = vec![0.0; n];
    k.matvec(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let bnorm = dot(b, b).sqrt();
    let mut z: Vec<f64> = r.iter().zip(&dinv).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut kp = vec![0.0; n];
    for it in 0..10 * n + 100 {
        if dot(&r, &r).sqrt() <= 1e-13 * bnorm {
            return Ok(());
        }
        k.matvec(&p, &mut kp);
        let a = rz / dot(&p, &kp);
        for i in 0..n {
            x[i] += a * p[i];
            r[i] -= a * kp[i];
        }
        for i in 0..n {
            z[i] = r[i] * dinv[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        let _ = it;
    }
    Err(Error::NoConvergence { iterations: 10 * n + 100, residual: dot(&r, &r).sqrt() / bnorm })
}

/// Smallest eigenvalue of K v = λ M v by inverse iteration from the positive vector.
pub fn solve_lambda0(system: &FormSystem, opts: &SolveOptions) -> Result<EigenResult> {
    let n = system.dim();
    let k = &system.stiffness;
    let m = &system.mass;
    let solver = Solver::new(k)?;
    let mut v = vec![1.0; n];
    let norm = |v: &[f64]| v.iter().zip(m).map(|(x, m)| m * x * x).sum::<f64>().sqrt();
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    let mut kv = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut residual = f64::INFINITY;
    let mut lambda = 0.0;
    for it in 1..=opts.max_iter {
        let mv: Vec<f64> = v.iter().zip(m).map(|(x, m)| x * m).collect();
        // warm start for the iterative solver: previous iterate scaled by 1/λ
        if it > 1 {
            for i in 0..n {
                w[i] = v[i] / lambda;
            }
        }
        solver.solve(k, &mv, &mut w)?;
        let s = norm(&w);
        for i in 0..n {
            v[i] = w[i] / s;
        }
        k.matvec(&v, &mut kv);
        lambda = dot(&v, &kv);
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..n {
            let mvi = m[i] * v[i];
            num += (kv[i] - lambda * mvi).powi(2);
            den += mvi * mvi;
        }
        residual = (num / den).sqrt();
        if residual <= opts.tol {
            if v.iter().sum::<f64>() < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            let vmax = v.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
            let ground_state = v.iter().all(|&x| x >= -1e-10 * vmax);
            return Ok(EigenResult {
                lambda0: lambda,
                eigvec: v,
                nodes: system.nodes.clone(),
                residual,
                iterations: it,
                r: system.r,
                cells: system.cells,
                ground_state,
            });
        }
    }
    Err(Error::NoConvergence { iterations: opts.max_iter, residual })
}

/// Mesh family for [`lambda0_numeric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mesh {
    Uniform { n: usize },
    Graded { h0: Option<f64>, ratio: Option<f64> },
}

impl Mesh {
    pub fn grid(&self, domain: KillingDomain, r: f64, alpha: f64) -> Result<Grid> {
        match *self {
            Mesh::Uniform { n } => Grid::uniform(domain, r, n),
            Mesh::Graded { h0, ratio } => Grid::graded(domain, r, alpha, h0, ratio),
        }
    }
}

/// One eigensolve per truncation radius.
pub fn lambda0_at(
    profile: &SigmaProfile,
    alpha: f64,
    domain: KillingDomain,
    r: f64,
    mesh: Mesh,
    opts: &SolveOptions,
) -> Result<EigenResult> {
    let grid = mesh.grid(domain, r, alpha)?;
    let system = assemble_form(profile, alpha, &grid, opts)?;
    solve_lambda0(&system, opts)
}

/// λ₀ on the truncations B ∩ [−R,R] for increasing R.
pub fn lambda0_numeric(
    profile: &SigmaProfile,
    alpha: f64,
    domain: KillingDomain,
    r_list: &[f64],
    mesh: Mesh,
    opts: &SolveOptions,
) -> Result<Vec<EigenResult>> {
    if r_list.is_empty() || r_list.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidConfig("R values must be increasing".into()));
    }
    r_list.iter().map(|&r| lambda0_at(profile, alpha, domain, r, mesh, opts)).collect()
}

/// Whether the sequence is nonincreasing up to relative `noise`.
pub fn is_monotone(results: &[EigenResult], noise: f64) -> bool {
    results.windows(2).all(|w| w[1].lambda0 <= w[0].lambda0 * (1.0 + noise))
}

/// Sample points in B used for sups and infs over x.
pub fn sample_points(domain: KillingDomain, per_side: usize) -> Vec<f64> {
    let per_side = per_side.max(2);
    let ladder: Vec<f64> = (0..per_side).map(|k| 10f64.powf(-3.0 + 7.0 * k as f64 / (per_side - 1) as f64)).collect();
    match domain {
        KillingDomain::PuncturedLine => ladder.iter().flat_map(|&x| [x, -x]).collect(),
        KillingDomain::HalfLine => ladder,
        KillingDomain::ComplementUnitInterval => ladder.iter().flat_map(|&x| [1.0 + x, -1.0 - x]).collect(),
    }
}

fn quad_spec() -> QuadSpec {
    QuadSpec::with_rel_tol(1e-9)
}

/// min over x₀ of sup_{x>0} g/U^{(0)}g + sup_{x<0} g/U^{(0)}g with
/// g = (|x|∧x₀)^{α−1}, an upper bound on λ₀(ℝ∖{0}).
pub fn rayleigh_upper(profile: &SigmaProfile, alpha: f64, x0_grid: &[f64]) -> Result<f64> {
    if x0_grid.is_empty() || x0_grid.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::InvalidConfig("x0 values must be positive".into()));
    }
    if !delta(profile, alpha)?.is_finite() {
        return Err(Error::IntegralDiverged("delta is infinite".into()));
    }
    let kernel = GreenKernel::new(KillingDomain::PuncturedLine, alpha)?;
    let xs = sample_points(KillingDomain::PuncturedLine, 40);
    let spec = quad_spec();
    let mut best = f64::INFINITY;
    for &x0 in x0_grid {
        let g = move |y: f64| y.abs().min(x0).powf(alpha - 1.0);
        let tf = TestFn::new(g, 0.0);
        let (mut sup_pos, mut sup_neg) = (0.0f64, 0.0f64);
        for &x in &xs {
            let r = g(x) / green_apply(&kernel, profile, &tf, x, &spec)?.value;
            if x > 0.0 {
                sup_pos = sup_pos.max(r);
            } else {
                sup_neg = sup_neg.max(r);
            }
        }
        best = best.min(sup_pos + sup_neg);
    }
    Ok(best)
}

/// Default x₀ family for [`rayleigh_upper`].
pub fn default_x0_grid() -> Vec<f64> {
    (0..25).map(|k| 0.05 * 10f64.powf(3.0 * k as f64 / 24.0)).collect()
}

/// inf over sample points of f/U^B f, a lower bound on λ₀(B).
/// Default f: |x|^{(α−1)/2} on ℝ∖{0} and (0,∞), √h on [−1,1]ᶜ.
pub fn variational_lower(profile: &SigmaProfile, alpha: f64, domain: KillingDomain, f: Option<&TestFn<'_>>) -> Result<f64> {
    let kernel = GreenKernel::new(domain, alpha)?;
    let p = (alpha - 1.0) / 2.0;
    let default = match domain {
        KillingDomain::ComplementUnitInterval => {
            TestFn::new(move |y: f64| if y.abs() <= 1.0 { 0.0 } else { h_unchecked(y, alpha).sqrt() }, p)
        }
        _ => TestFn::power(p),
    };
    let f = f.unwrap_or(&default);
    let edge: &[f64] = match domain {
        KillingDomain::PuncturedLine | KillingDomain::HalfLine => &[0.0],
        KillingDomain::ComplementUnitInterval => &[-1.0, 1.0],
    };
    if edge.iter().any(|&b| f.eval(b).abs() > 1e-12) {
        return Err(Error::Precondition("the test function must vanish on the killing boundary".into()));
    }
    let spec = quad_spec();
    let mut inf = f64::INFINITY;
    for x in sample_points(domain, 40) {
        let fx = f.eval(x);
        if !(fx > 0.0) {
            return Err(Error::Precondition(format!("the test function must be positive on B, f({x}) = {fx}")));
        }
        inf = inf.min(fx / green_apply(&kernel, profile, f, x, &spec)?.value);
    }
    Ok(inf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn closed_form_matches_quadrature_for_separated_hats() {
        let asm = Assembler::new(1.5).unwrap();
        let mut buf = (Vec::new(), Vec::new());
        let hi = [0.0, 1.0, 2.0];
        for (s, w) in [(4.0, 1.0), (6.0, 1.0), (9.0, 1.5)] {
            let hj = [s - w, s, s + w];
            let a = asm.closed(hi, hj);
            let b = asm.far(hi, hj, &mut buf);
            assert!(rel(a, b) < 1e-7, "{a} {b}");
        }
    }

    #[test]
    fn uniform_rows_sum_to_killing() {
        let p = SigmaProfile::polynomial(2.0).unwrap();
        let g = Grid::uniform(KillingDomain::PuncturedLine, 5.0, 40).unwrap();
        let s = assemble_form(&p, 1.5, &g, &SolveOptions::default()).unwrap();
        let n = s.dim();
        for a in 0..n {
            for b in 0..n {
                assert_eq!(s.stiffness.get(a, b), s.stiffness.get(b, a));
                if a != b {
                    assert!(s.weight(a, b) >= 0.0);
                }
            }
        }
        let k = s.killing();
        assert!(k.iter().all(|&k| k > 0.0));
        let ones = vec![1.0; n];
        let e = s.energy(&ones);
        assert!(rel(e, k.iter().sum()) < 1e-12);
    }

    #[test]
    fn scalar_and_scaled_pencils() {
        let s = FormSystem::from_parts(vec![3.0], vec![2.0]).unwrap();
        assert!(rel(solve_lambda0(&s, &SolveOptions::default()).unwrap().lambda0, 1.5) < 1e-14);
        let p = SigmaProfile::polynomial(2.0).unwrap();
        let g = Grid::uniform(KillingDomain::PuncturedLine, 5.0, 40).unwrap();
        let mut s = assemble_form(&p, 1.5, &g, &SolveOptions::default()).unwrap();
        let a = solve_lambda0(&s, &SolveOptions::default()).unwrap();
        s.mass.iter_mut().for_each(|m| *m *= 2.0);
        let b = solve_lambda0(&s, &SolveOptions::default()).unwrap();
        assert!(rel(b.lambda0, 0.5 * a.lambda0) < 1e-9);
        assert!(a.ground_state && a.residual <= 1e-8);
    }

    #[test]
    fn lazy_toeplitz_agrees_with_dense() {
        let p = SigmaProfile::polynomial(2.0).unwrap();
        let g = Grid::uniform(KillingDomain::PuncturedLine, 10.0, 200).unwrap();
        let dense = solve_lambda0(&assemble_form(&p, 1.5, &g, &SolveOptions::default()).unwrap(), &SolveOptions::default()).unwrap();
        let opts = SolveOptions { dense_limit: 50, ..SolveOptions::default() };
        let sys = assemble_form(&p, 1.5, &g, &opts).unwrap();
        assert!(matches!(sys.stiffness, Stiffness::Toeplitz { .. }));
        let lazy = solve_lambda0(&sys, &opts).unwrap();
        assert!(rel(lazy.lambda0, dense.lambda0) < 1e-9, "{} {}", lazy.lambda0, dense.lambda0);
    }

    #[test]
    fn grid_errors() {
        assert!(matches!(Grid::uniform(KillingDomain::PuncturedLine, 10.0, 4), Err(Error::GridTooCoarse(_))));
        assert!(matches!(Grid::uniform(KillingDomain::PuncturedLine, 10.0, 11), Err(Error::InvalidConfig(_))));
        assert!(matches!(Grid::uniform(KillingDomain::ComplementUnitInterval, 0.5, 100), Err(Error::InvalidConfig(_))));
        let g = Grid::uniform(KillingDomain::ComplementUnitInterval, 10.0, 30).unwrap();
        assert!(g.nodes.contains(&1.0) && g.nodes.contains(&-1.0) && !g.is_uniform());
        assert!(g.active_nodes().iter().all(|x| x.abs() > 1.0));
    }

    #[test]
    fn uniform_refinement_approaches_graded_limit() {
        let p = SigmaProfile::polynomial(2.0).unwrap();
        let o = SolveOptions::default();
        let at = |m| lambda0_at(&p, 1.5, KillingDomain::PuncturedLine, 10.0, m, &o).unwrap();
        let g1 = at(Mesh::Graded { h0: None, ratio: None });
        let g2 = at(Mesh::Graded { h0: None, ratio: Some(1.07) });
        assert!(rel(g1.lambda0, g2.lambda0) < 1e-3 && g1.ground_state);
        let u1 = at(Mesh::Uniform { n: 200 }).lambda0;
        let u2 = at(Mesh::Uniform { n: 400 }).lambda0;
        assert!(u1 > u2 && u2 > g2.lambda0 && u2 - g2.lambda0 < 0.8 * (u1 - g2.lambda0), "{u1} {u2} {}", g2.lambda0);
    }

    #[test]
    fn half_line_exceeds_punctured() {
        let p = SigmaProfile::polynomial(2.0).unwrap();
        let o = SolveOptions::default();
        let m = Mesh::Graded { h0: None, ratio: None };
        let a = lambda0_at(&p, 1.5, KillingDomain::PuncturedLine, 25.0, m, &o).unwrap().lambda0;
        let b = lambda0_at(&p, 1.5, KillingDomain::HalfLine, 25.0, m, &o).unwrap().lambda0;
        let c = lambda0_at(&p, 1.5, KillingDomain::ComplementUnitInterval, 25.0, m, &o).unwrap().lambda0;
        assert!(b >= a && c >= a, "{a} {b} {c}");
    }

    #[test]
    fn variational_preconditions() {
        let p = SigmaProfile::polynomial(2.0).unwrap();
        let one = TestFn::constant(1.0);
        assert!(matches!(variational_lower(&p, 1.5, KillingDomain::PuncturedLine, Some(&one)), Err(Error::Precondition(_))));
        let p1 = SigmaProfile::polynomial(0.5).unwrap();
        assert!(matches!(rayleigh_upper(&p1, 1.5, &[1.0]), Err(Error::IntegralDiverged(_))));
    }
}
