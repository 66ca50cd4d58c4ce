//! Command execution: each command turns its arguments into a [`Document`].

use serde_json::{json, Value};
use stable_ergo_core::criteria::{classify, lyapunov_check, polynomial_closed_forms, rate_bounds_from_report, TriState};
use stable_ergo_core::expr::parse_sigma;
use stable_ergo_core::green::{self, GreenKernel, KillingDomain, TestFn};
use stable_ergo_core::montecarlo::{self, PathConfig, Scheme, Seeding, StableSampler};
use stable_ergo_core::quad::QuadSpec;
use stable_ergo_core::sigma::SigmaProfile;
use stable_ergo_core::spectral::{self, Mesh, SolveOptions};
use stable_ergo_core::{AlphaConstants, Error as CoreError};

use crate::acceptance;
use crate::cli::{self, Cli, Command, GreenMode, Simulate};
use crate::error::{CliError, Result};
use crate::profile::{parse_tails, ProfileSpec};
use crate::report::{self, cell, num, opt, Document, Table};
use crate::runner::Threaded;
use crate::ExitCode;

/// Relative slack granted to discretized eigenvalues against the bounds.
pub const SANDWICH_SLACK: f64 = 0.1;

/// A finished command: its document, the resolved configuration for the
/// manifest, and where to write.
pub struct Run {
    pub doc: Document,
    pub config: Value,
    pub output: cli::Output,
}

fn load(p: &cli::Profile) -> Result<(ProfileSpec, SigmaProfile)> {
    let tails = p.tail_exponents.as_deref().map(parse_tails).transpose()?;
    let spec = match (&p.sigma, &p.sigma_file) {
        (Some(s), _) => ProfileSpec::parse_shorthand(s, tails)?,
        (None, Some(f)) => ProfileSpec::from_file(f)?,
        (None, None) => return Err(CliError::Config("--sigma or --sigma-file is required".into())),
    }
    .resolve()?;
    let profile = spec.build()?;
    Ok((spec, profile))
}

fn domain(s: &str) -> Result<KillingDomain> {
    Ok(s.parse::<KillingDomain>()?)
}

pub fn execute(cli: &Cli) -> Result<Run> {
    let args = serde_json::to_value(cli)?;
    let threads = Threaded::from_env();
    let (doc, spec, output) = match &cli.command {
        Command::Classify(a) => {
            let (spec, p) = load(&a.profile)?;
            (classify_cmd(&p, a.alpha)?, Some(spec), a.output.clone())
        }
        Command::Bounds(a) => {
            let (spec, p) = load(&a.profile)?;
            (bounds_cmd(&spec, &p, a.alpha)?, Some(spec), a.output.clone())
        }
        Command::Eigen(a) => {
            let (spec, p) = load(&a.profile)?;
            (eigen_cmd(&p, a)?, Some(spec), a.output.clone())
        }
        Command::Green(a) => {
            let loaded = if a.mode == GreenMode::Kernel { None } else { Some(load(&a.profile)?) };
            let doc = green_cmd(loaded.as_ref().map(|l| &l.1), a)?;
            (doc, loaded.map(|l| l.0), a.output.clone())
        }
        Command::Simulate(s) => {
            let sim = match s {
                Simulate::Hitting { sim, .. }
                | Simulate::Stationary { sim, .. }
                | Simulate::Decay { sim, .. }
                | Simulate::Path { sim, .. } => sim,
            };
            let (spec, p) = load(&sim.profile)?;
            (simulate_cmd(&p, s, &threads)?, Some(spec), sim.output.clone())
        }
        Command::Validate(v) => (validate_cmd(v, threads)?, None, v.output.clone()),
    };
    let config = json!({ "args": args, "profile": spec, "threads": threads.threads() });
    Ok(Run { doc, config, output })
}

fn classify_cmd(p: &SigmaProfile, alpha: f64) -> Result<Document> {
    let r = classify(p, alpha)?;
    let lyapunov = match lyapunov_check(p, alpha) {
        Ok(l) => json!({
            "liminf_sigma_over_x": num(l.a1),
            "liminf_sigma_over_x_gamma": l.a2.map(|(g, a)| json!({"gamma": g, "value": num(a)})),
            "exponential_sufficient": l.exponential_sufficient,
            "strong_sufficient": l.strong_sufficient,
            "verdict": l.verdict(),
        }),
        Err(CoreError::TailUndetermined(side)) => json!({ "unknown": true, "reason": format!("tail undetermined on the {side} side") }),
        Err(e) => return Err(e.into()),
    };
    let mut doc = Document::new("classify", json!({ "report": report::ergodicity(&r), "lyapunov": lyapunov }));
    doc.tables.push(verdict_table(&r));
    doc.exit = exit_for(&r);
    Ok(doc)
}

fn exit_for(r: &stable_ergo_core::criteria::ErgodicityReport) -> ExitCode {
    if [r.ergodic, r.exponentially_ergodic, r.strongly_ergodic].contains(&TriState::Unknown) {
        ExitCode::Unknown
    } else {
        ExitCode::Ok
    }
}

fn verdict_table(r: &stable_ergo_core::criteria::ErgodicityReport) -> Table {
    let mut t = Table::new("classify", vec!["property", "verdict", "criterion", "value"]);
    let v = |c: &Option<stable_ergo_core::sigma::CriterionValue>| match c {
        None => "unknown".to_string(),
        Some(c) => c.finite().map_or("inf".into(), cell),
    };
    t.push(vec!["ergodic".into(), r.ergodic.as_str().into(), "mu_total".into(), v(&r.mu_total)]);
    t.push(vec!["exponentially_ergodic".into(), r.exponentially_ergodic.as_str().into(), "delta".into(), v(&r.delta)]);
    t.push(vec!["strongly_ergodic".into(), r.strongly_ergodic.as_str().into(), "i_integral".into(), v(&r.i_integral)]);
    t
}

fn bounds_cmd(spec: &ProfileSpec, p: &SigmaProfile, alpha: f64) -> Result<Document> {
    let r = classify(p, alpha)?;
    let b = rate_bounds_from_report(&r)?;
    let closed = match spec {
        ProfileSpec::Polynomial { gamma } if gamma * alpha > 1.0 => {
            let f = polynomial_closed_forms(*gamma, alpha)?;
            json!({
                "gamma": f.gamma,
                "mu_total": num(f.mu_total),
                "delta_plus": report::criterion(&Some(f.delta_plus.clone())),
                "delta": report::criterion(&Some(f.delta.clone())),
                "i_integral": report::criterion(&Some(f.i_integral.clone())),
                "bounds": report::bounds(&f.bounds),
                "kappa_lower_corollary": opt(f.kappa_lower_corollary),
            })
        }
        _ => Value::Null,
    };
    let mut doc =
        Document::new("bounds", json!({ "report": report::ergodicity(&r), "bounds": report::bounds(&b), "closed_forms": closed }));
    if b.is_empty() {
        doc.notes.push("no finite criterion: all bounds absent".into());
    }
    let mut t = Table::new("bounds", vec!["bound", "value"]);
    for (name, v) in [
        ("lambda1_lower", b.lambda1_lower),
        ("lambda0_lower", b.lambda0_lower),
        ("lambda0_upper", b.lambda0_upper),
        ("lambda0_halfline_lower", b.lambda0_halfline_lower),
        ("kappa_lower", b.kappa_lower),
    ] {
        t.push(vec![name.into(), v.map_or("absent".into(), cell)]);
    }
    doc.tables.push(t);
    doc.exit = exit_for(&r);
    Ok(doc)
}

/// Lower and upper comparison values for λ₀ on a domain.
pub struct Sandwich {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub variational_lower: Option<f64>,
    pub rayleigh_upper: Option<f64>,
}

impl Sandwich {
    pub fn new(p: &SigmaProfile, alpha: f64, d: KillingDomain) -> stable_ergo_core::Result<Self> {
        let b = rate_bounds_from_report(&classify(p, alpha)?)?;
        let soft = |r: stable_ergo_core::Result<f64>| match r {
            Ok(v) => Ok(Some(v)),
            Err(CoreError::IntegralDiverged(_) | CoreError::TailUndetermined(_) | CoreError::Precondition(_)) => Ok(None),
            Err(e) => Err(e),
        };
        let vl = soft(spectral::variational_lower(p, alpha, d, None))?;
        Ok(match d {
            KillingDomain::PuncturedLine => Sandwich {
                lower: b.lambda0_lower,
                upper: b.lambda0_upper,
                variational_lower: vl,
                rayleigh_upper: soft(spectral::rayleigh_upper(p, alpha, &spectral::default_x0_grid()))?,
            },
            // a smaller domain only raises λ₀
            KillingDomain::ComplementUnitInterval => {
                Sandwich { lower: b.lambda0_lower, upper: None, variational_lower: vl, rayleigh_upper: None }
            }
            KillingDomain::HalfLine => {
                Sandwich { lower: b.lambda0_halfline_lower, upper: None, variational_lower: vl, rayleigh_upper: None }
            }
        })
    }

    pub fn contains(&self, lambda: f64) -> bool {
        self.lower.is_none_or(|l| lambda >= (1.0 - SANDWICH_SLACK) * l) && self.upper.is_none_or(|u| lambda <= (1.0 + SANDWICH_SLACK) * u)
    }

    /// variational_lower ≤ λ ≤ rayleigh_upper, each with the slack.
    pub fn ordered(&self, lambda: f64) -> bool {
        self.variational_lower.is_none_or(|l| l <= (1.0 + SANDWICH_SLACK) * lambda)
            && self.rayleigh_upper.is_none_or(|u| lambda <= (1.0 + SANDWICH_SLACK) * u)
    }
}

fn eigen_cmd(p: &SigmaProfile, a: &cli::Eigen) -> Result<Document> {
    let d = domain(&a.domain)?;
    let mesh = if a.graded { Mesh::Graded { h0: a.h0, ratio: a.ratio } } else { Mesh::Uniform { n: a.n.unwrap_or(2000) } };
    let opts = SolveOptions { dense_limit: a.dense_limit, max_iter: a.max_iter, tol: a.tol };
    let results = spectral::lambda0_numeric(p, a.alpha, d, &a.r, mesh, &opts)?;
    let s = Sandwich::new(p, a.alpha, d)?;
    let last = results.last().expect("at least one radius").lambda0;
    let monotone = spectral::is_monotone(&results, 1e-3);
    let inside = s.contains(last);
    let mut t = Table::new("eigen", vec!["R", "n", "lambda0", "residual", "iterations", "ground_state"]);
    for r in &results {
        t.push(vec![
            cell(r.r),
            r.cells.to_string(),
            cell(r.lambda0),
            cell(r.residual),
            r.iterations.to_string(),
            r.ground_state.to_string(),
        ]);
    }
    let show = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.6}"));
    let verdict = format!(
        "{} sandwich [{}, {}] ({}% slack); {}",
        if inside { "inside" } else { "outside" },
        show(s.lower),
        show(s.upper),
        SANDWICH_SLACK * 100.0,
        if monotone { "monotone in R" } else { "not monotone in R" }
    );
    let rows: Vec<Value> = results
        .iter()
        .map(|r| json!({"R": r.r, "n": r.cells, "lambda0": num(r.lambda0), "residual": num(r.residual), "iterations": r.iterations, "ground_state": r.ground_state}))
        .collect();
    let mut doc = Document::new(
        "eigen",
        json!({
            "domain": d.name(),
            "mesh": if a.graded { "graded" } else { "uniform" },
            "results": rows,
            "monotone_in_R": monotone,
            "sandwich": {
                "lower": opt(s.lower),
                "upper": opt(s.upper),
                "variational_lower": opt(s.variational_lower),
                "rayleigh_upper": opt(s.rayleigh_upper),
                "slack": SANDWICH_SLACK,
                "inside": inside,
                "ordered": s.ordered(last),
            },
            "verdict": verdict,
        }),
    );
    doc.tables.push(t);
    doc.notes.push(verdict);
    Ok(doc)
}

fn test_fn(s: &str) -> Result<TestFn<'static>> {
    match s {
        "one" => Ok(TestFn::constant(1.0)),
        _ => match s.strip_prefix("power:").and_then(|p| p.parse::<f64>().ok()) {
            Some(p) => Ok(TestFn::power(p)),
            None => Err(CliError::Config(format!("--f '{s}': expected one or power:<p>"))),
        },
    }
}

fn green_cmd(p: Option<&SigmaProfile>, a: &cli::Green) -> Result<Document> {
    let d = domain(&a.domain)?;
    let c = AlphaConstants::new(a.alpha)?;
    let xs = |default: Vec<f64>| if a.x.is_empty() { default } else { a.x.clone() };
    let need = || p.ok_or_else(|| CliError::Config("this mode needs --sigma".into()));
    let mut body = json!({ "mode": a.mode, "domain": d.name(), "alpha": a.alpha });
    let table = match a.mode {
        GreenMode::Kernel => {
            if a.x.is_empty() || a.y.is_empty() {
                return Err(CliError::Config("--mode kernel needs --x and --y".into()));
            }
            let k = GreenKernel::new(d, a.alpha)?;
            let mut t = Table::new("green", vec!["x", "y", "G"]);
            for &x in &a.x {
                for &y in &a.y {
                    t.push(vec![cell(x), cell(y), cell(k.eval(x, y)?)]);
                }
            }
            t
        }
        GreenMode::Apply => {
            let p = need()?;
            let f = test_fn(&a.f)?;
            let k = GreenKernel::new(d, a.alpha)?;
            let spec = QuadSpec::with_rel_tol(a.rel_tol);
            let mut t = Table::new("green", vec!["x", "Uf", "abs_error"]);
            for x in xs(spectral::sample_points(d, 8)) {
                let e = green::green_apply(&k, p, &f, x, &spec)?;
                t.push(vec![cell(x), cell(e.value), cell(e.abs_error)]);
            }
            body["f"] = json!(a.f);
            t
        }
        GreenMode::Ii | GreenMode::IiPlus => {
            let p = need()?;
            let plus = a.mode == GreenMode::IiPlus;
            let r = classify(p, a.alpha)?;
            let crit = if plus { &r.delta_plus } else { &r.delta };
            let bound = crit.as_ref().and_then(|v| v.finite()).map(|v| {
                if plus {
                    4.0 * v / ((a.alpha - 1.0) * c.gamma_half_sq())
                } else {
                    4.0 * c.omega() * v
                }
            });
            let default = if plus {
                spectral::sample_points(KillingDomain::HalfLine, 50)
            } else {
                spectral::sample_points(KillingDomain::PuncturedLine, 25)
            };
            let mut t = Table::new("green", vec!["x", "value", "bound"]);
            let mut worst: f64 = 0.0;
            for x in xs(default) {
                let v = if plus { green::ii_plus_operator(p, a.alpha, x)? } else { green::ii_operator(p, a.alpha, x, None)? };
                worst = worst.max(v);
                t.push(vec![cell(x), cell(v), bound.map_or("inf".into(), cell)]);
            }
            body["bound"] = bound.map_or_else(|| report::infinite("criterion infinite"), num);
            body["max"] = num(worst);
            body["holds"] = json!(bound.is_none_or(|b| worst <= b + 1e-6));
            t
        }
        GreenMode::ExitBound => {
            let m = green::mean_exit_bound(need()?, a.alpha)?;
            body["bound"] = num(m.bound);
            body["sharper"] = num(m.sharper);
            body["argsup"] = num(m.argsup);
            let mut t = Table::new("green", vec!["bound", "sharper", "argsup"]);
            t.push(vec![cell(m.bound), cell(m.sharper), cell(m.argsup)]);
            t
        }
    };
    body["values"] = json!(table
        .rows
        .iter()
        .map(|r| r.iter().map(|s| s.parse::<f64>().map_or_else(|_| json!(s), num)).collect::<Vec<_>>())
        .collect::<Vec<_>>());
    body["columns"] = json!(table.header);
    let mut doc = Document::new("green", body);
    doc.tables.push(table);
    Ok(doc)
}

fn path_config(sim: &cli::Sim, dt: f64, horizon: f64, paths: usize) -> Result<PathConfig> {
    let scheme: Scheme = sim.scheme.parse()?;
    let mut cfg = PathConfig::new(sim.dt.unwrap_or(dt), sim.horizon.unwrap_or(horizon), scheme, sim.paths.unwrap_or(paths))?;
    cfg.max_steps = sim.max_steps;
    Ok(cfg)
}

fn config_json(cfg: &PathConfig, seed: u64) -> Value {
    json!({
        "dt": cfg.dt,
        "horizon": cfg.horizon,
        "scheme": match cfg.scheme { Scheme::Euler => "euler", Scheme::TimeChange => "timechange" },
        "paths": cfg.n_paths,
        "max_steps": cfg.max_steps,
        "seed": seed,
        "first_stream": 0,
    })
}

fn simulate_cmd(p: &SigmaProfile, s: &Simulate, runner: &Threaded) -> Result<Document> {
    match s {
        Simulate::Hitting { sim, x0, eps, sweep } => {
            let cfg = path_config(sim, 1e-3, 50.0, 10_000)?;
            let mut all: Vec<f64> = sweep.iter().copied().chain([*eps]).collect();
            all.sort_by(|a, b| b.total_cmp(a));
            all.dedup();
            let est = montecarlo::estimate_hitting_sweep(p, sim.alpha, *x0, &all, &cfg, Seeding::new(sim.seed), runner)?;
            let c = AlphaConstants::new(sim.alpha)?;
            let i = stable_ergo_core::sigma::i_integral(p, sim.alpha)?.finite();
            let bound = i.map(|i| c.omega() * i);
            let main = est.iter().find(|e| e.epsilon == *eps).expect("primary epsilon is in the sweep");
            let holds = bound.map(|b| main.mean <= b + 3.0 * main.stderr);
            let mut t = Table::new("hitting", vec!["epsilon", "mean", "stderr", "n_hit", "n_censored"]);
            for e in &est {
                t.push(vec![cell(e.epsilon), cell(e.mean), cell(e.stderr), e.n_hit.to_string(), e.n_censored.to_string()]);
            }
            let verdict = match (bound, holds) {
                (Some(b), Some(true)) => format!("mean {:.5} <= omega*I + 3 stderr = {:.5}", main.mean, b + 3.0 * main.stderr),
                (Some(b), _) => format!("mean {:.5} exceeds omega*I + 3 stderr = {:.5}", main.mean, b + 3.0 * main.stderr),
                (None, _) => "I is infinite: no bound to compare".into(),
            };
            let rows: Vec<Value> = est
                .iter()
                .map(|e| json!({"epsilon": e.epsilon, "mean": num(e.mean), "stderr": num(e.stderr), "n_hit": e.n_hit, "n_censored": e.n_censored}))
                .collect();
            let mut doc = Document::new(
                "simulate hitting",
                json!({"x0": x0, "epsilon": eps, "config": config_json(&cfg, sim.seed), "estimates": rows, "bound": opt(bound), "holds": holds, "verdict": verdict}),
            );
            doc.tables.push(t);
            doc.notes.push(verdict);
            Ok(doc)
        }
        Simulate::Stationary { sim, bins } => {
            let cfg = path_config(sim, 1e-2, 250.0, 40)?;
            let e = montecarlo::estimate_stationary(p, sim.alpha, &cfg, Seeding::new(sim.seed), *bins, runner)?;
            let holds = e.ks_distance <= 0.05;
            let verdict = format!("KS {:.5} {} 0.05 over {} samples", e.ks_distance, if holds { "<=" } else { ">" }, e.n_samples);
            let mut t = Table::new("histogram", vec!["lo", "hi", "center", "mass", "pi_mass"]);
            for b in &e.histogram {
                t.push(vec![cell(b.lo), cell(b.hi), cell(b.center), cell(b.mass), cell(b.pi_mass)]);
            }
            let mut doc = Document::new(
                "simulate stationary",
                json!({"config": config_json(&cfg, sim.seed), "ks_distance": num(e.ks_distance), "n_samples": e.n_samples, "burn_in": e.burn_in, "holds": holds, "verdict": verdict}),
            );
            doc.tables.push(t);
            doc.notes.push(verdict);
            Ok(doc)
        }
        Simulate::Decay { sim, x0, f } => {
            let cfg = path_config(sim, 1e-2, 6.0, 10_000)?;
            let expr = parse_sigma(f)?;
            let obs = |x: f64| expr.eval(x).unwrap_or(f64::NAN);
            let e = montecarlo::estimate_decay_rate(p, sim.alpha, &obs, x0, &cfg, Seeding::new(sim.seed), runner)?;
            let lower = rate_bounds_from_report(&classify(p, sim.alpha)?)?.lambda1_lower;
            let holds = lower.map(|l| e.rate >= 0.5 * l);
            let verdict = match lower {
                Some(l) => format!(
                    "rate {:.4} +- {:.4} {} 0.5*lambda1_lower = {:.4}",
                    e.rate,
                    e.stderr,
                    if e.rate >= 0.5 * l { ">=" } else { "<" },
                    0.5 * l
                ),
                None => format!("rate {:.4} +- {:.4}; no lambda1 bound", e.rate, e.stderr),
            };
            let mut t = Table::new("decay", vec!["x0", "rate", "stderr", "t_start", "t_end", "points"]);
            for fit in &e.fits {
                t.push(vec![
                    cell(fit.x0),
                    cell(fit.rate),
                    cell(fit.stderr),
                    cell(fit.window.0),
                    cell(fit.window.1),
                    fit.points.to_string(),
                ]);
            }
            let mut doc = Document::new(
                "simulate decay",
                json!({"config": config_json(&cfg, sim.seed), "f": f, "pi_f": num(e.pi_f), "rate": num(e.rate), "stderr": num(e.stderr), "lambda1_lower": opt(lower), "holds": holds, "verdict": verdict}),
            );
            doc.tables.push(t);
            doc.notes.push(verdict);
            Ok(doc)
        }
        Simulate::Path { sim, x0, stream } => {
            let cfg = path_config(sim, 1e-3, 10.0, 1)?;
            let mut s = StableSampler::new(sim.alpha, sim.seed, *stream)?;
            let path = montecarlo::simulate(p, sim.alpha, *x0, &cfg, &mut s)?;
            let mut t = Table::new("path", vec!["t", "y"]);
            for (tm, y) in path.times.iter().zip(&path.values) {
                t.push(vec![cell(*tm), cell(*y)]);
            }
            let mut doc = Document::new(
                "simulate path",
                json!({"config": config_json(&cfg, sim.seed), "stream": stream, "x0": x0, "diverged": path.diverged, "steps": path.steps, "final": path.values.last().copied().map(num)}),
            );
            doc.tables.push(t);
            Ok(doc)
        }
    }
}

fn validate_cmd(v: &cli::Validate, threads: Threaded) -> Result<Document> {
    let opts = acceptance::Options { quick: v.quick, omega_scale: v.inject_omega_scale, runner: threads };
    let outcomes = acceptance::run(&opts, |o| eprintln!("{}", o.line()));
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.pass).map(|o| format!("{}", o.id)).collect();
    let mut t = Table::new("validate", vec!["id", "criterion", "pass", "detail"]);
    for o in &outcomes {
        t.push(vec![o.id.to_string(), o.name.into(), o.pass.to_string(), o.detail.clone()]);
    }
    let rows: Vec<Value> = outcomes
        .iter()
        .map(|o| json!({"id": o.id, "criterion": o.name, "pass": o.pass, "detail": o.detail, "seconds": o.seconds}))
        .collect();
    let mut doc = Document::new("validate", json!({"quick": v.quick, "criteria": rows, "all_pass": failed.is_empty(), "failed": failed}));
    doc.tables.push(t);
    if !failed.is_empty() {
        doc.exit = ExitCode::Validation;
        doc.notes.push(format!("failed criteria: {}", failed.join(", ")));
    }
    Ok(doc)
}
