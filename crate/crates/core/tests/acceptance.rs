//! Acceptance criteria, one pass/fail line each. Exits non-zero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use memvel::analysis::{
    dependence_experiment, error_control, mean_value_point, recovery_curve, remainder, PerturbationTarget,
    ERROR_CONTROL_GRID,
};
use memvel::appendix::{log_growth_bound, log_power_bound, power_linear_bound};
use memvel::bounds::{check_case_envelopes, check_weighted_bound};
use memvel::cli::suites::EXPRESSION_POOL;
use memvel::expr;
use memvel::kernel::{denominator, kernel_mass};
use memvel::operator::velocity;
use memvel::quadrature::{oracle_integrate, QuadratureSpec};
use memvel::schedule::ExponentSchedule;
use memvel::specfun::gamma;
use memvel::trajectory::Trajectory;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn positive_grid(h: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|k| h * k as f64 / n as f64).collect()
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn identity() -> Outcome {
    let h = 2.0;
    let x = Trajectory::parse("t", h).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for src in ["0.3", "0.7", "1.0", "0.5+0.4*sin(t)"] {
        let rho = ExponentSchedule::parse(src, h).map_err(|e| e.to_string())?;
        for t in positive_grid(h, 50) {
            let v = velocity(&x, &rho, &rho, t, &spec()).map_err(|e| format!("{src} at t={t}: {e}"))?;
            worst = worst.max((v.value - 1.0).abs());
        }
    }
    ensure(worst <= 1e-8, format!("max |V - 1| = {worst:.3e} (limit 1e-8)"))
}

fn kernel_mass_closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let r = rng.gen_range(0.1..=1.0);
        let t = 2.0 * (1.0 - rng.gen::<f64>());
        let rho = ExponentSchedule::constant(r, 2.0).map_err(|e| e.to_string())?;
        let g = gamma(r).map_err(|e| e.to_string())?;
        let m_oracle = oracle_integrate(|_| Ok(1.0 / g), r, t).map_err(|e| e.to_string())?;
        let d_oracle = oracle_integrate(|u| Ok(u / g), r, t).map_err(|e| e.to_string())?;
        let m = kernel_mass(&rho, t).map_err(|e| e.to_string())?;
        let d = denominator(&rho, t).map_err(|e| e.to_string())?;
        worst = worst.max((m - m_oracle).abs() / m_oracle).max((d - d_oracle).abs() / d_oracle);
    }
    ensure(worst <= 1e-10, format!("max relative error = {worst:.3e} over 100 samples (limit 1e-10)"))
}

fn recovery() -> Outcome {
    let x = Trajectory::parse("sin(t)", 1.0).map_err(|e| e.to_string())?;
    let one = ExponentSchedule::constant(1.0, 1.0).map_err(|e| e.to_string())?;
    let t: f64 = 0.1;
    let v = velocity(&x, &one, &one, t, &spec()).map_err(|e| e.to_string())?.value;
    let closed = 2.0 / (t * t) * (t * t.sin() - 1.0 + t.cos());
    let listed = 0.9975013876040703;
    if (v - listed).abs() > 1e-6 || (v - closed).abs() > 1e-12 {
        return Err(format!("V11(0.1) = {v}, closed form {closed}, listed {listed}"));
    }
    let ts: Vec<f64> = (0..9).map(|k| 0.1 * 0.5f64.powi(k)).collect();
    let curve = recovery_curve(&x, &ts, &spec()).map_err(|e| e.to_string())?;
    if let Some((t, e)) = curve.failures.first() {
        return Err(format!("evaluation failed at t={t}: {e}"));
    }
    if let Some(p) = curve.points.iter().find(|p| p.deviation > 3.0 * p.eps_t * (1.0 + 1e-3) + 1e-10) {
        return Err(format!("certificate violated at t={}: {} > 3·{}", p.t, p.deviation, p.eps_t));
    }
    if let Some(w) = curve.points.windows(2).find(|w| w[1].deviation >= w[0].deviation) {
        return Err(format!("deviation not decreasing at t={}", w[1].t));
    }
    ensure(
        true,
        format!(
            "V11(0.1) = {v:.16} (closed form {closed:.16}); 9 certified points, final deviation {:.3e}",
            curve.points[8].deviation
        ),
    )
}

fn midpoint() -> Outcome {
    let ts = [0.9, 0.5, 0.1, 0.01, 0.001];
    let theta = |src: &str, t: f64| -> Result<f64, String> {
        let x = Trajectory::parse(src, 1.0).map_err(|e| e.to_string())?;
        Ok(mean_value_point(&x, t, 1e-14).map_err(|e| e.to_string())?.theta)
    };
    let d_sin = (theta("sin(t)", 1e-3)? - 0.5).abs();
    if d_sin > 1e-3 {
        return Err(format!("sin: |theta(1e-3) - 0.5| = {d_sin:e}"));
    }
    let inv_sqrt3 = 1.0 / 3f64.sqrt();
    let (mut d_lin, mut d_sq): (f64, f64) = (0.0, 0.0);
    for t in ts {
        d_lin = d_lin.max((theta("t", t)? - 0.5).abs());
        d_sq = d_sq.max((theta("t^2", t)? - inv_sqrt3).abs());
    }
    ensure(
        d_lin <= 1e-10 && d_sq <= 1e-6,
        format!("sin: {d_sin:.3e}; t: max dev {d_lin:.3e} (1e-10); t^2: max dev from 1/sqrt(3) {d_sq:.3e} (1e-6)"),
    )
}

fn weighted_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut violations, mut worst_rel) = (0usize, f64::INFINITY);
    for _ in 0..1000 {
        let h = [0.5, 1.0, 2.0][rng.gen_range(0..3)];
        let src = EXPRESSION_POOL[rng.gen_range(0..EXPRESSION_POOL.len())];
        let (a, b) = (rng.gen_range(0.2..=1.0), rng.gen_range(0.2..=1.0));
        let x = Trajectory::parse(src, h).map_err(|e| e.to_string())?;
        let alpha = ExponentSchedule::constant(a, h).map_err(|e| e.to_string())?;
        let beta = ExponentSchedule::constant(b, h).map_err(|e| e.to_string())?;
        let report = check_weighted_bound(&x, &alpha, &beta, &positive_grid(h, 20), &spec())
            .map_err(|e| format!("{src}, a={a}, b={b}, T={h}: {e}"))?;
        let c = &report.checks[0];
        if !c.passed() {
            violations += 1;
            eprintln!("  violation: x={src} a={a} b={b} T={h}: {}", c.detail);
        }
        if let Some(s) = c.worst_slack {
            worst_rel = worst_rel.min(s);
        }
    }
    ensure(
        violations == 0,
        format!("{violations} failing configurations of 1000; smallest slack {worst_rel:.3e}"),
    )
}

fn envelopes() -> Outcome {
    let mut summary = Vec::new();
    for (src, a, b, h, case) in [("sin(t)", 0.9, 0.4, 2.0, "A"), ("t", 0.4, 0.9, 1.0, "B"), ("t", 0.6, 0.6, 1.0, "C")] {
        let x = Trajectory::parse(src, h).map_err(|e| e.to_string())?;
        let alpha = ExponentSchedule::constant(a, h).map_err(|e| e.to_string())?;
        let beta = ExponentSchedule::constant(b, h).map_err(|e| e.to_string())?;
        let r = check_case_envelopes(&x, &alpha, &beta, &positive_grid(h, 50), &spec()).map_err(|e| e.to_string())?;
        let c = &r.checks[0];
        if c.name != format!("case_{case}_envelope") || !c.passed() {
            return Err(format!("expected case {case}: {} {:?} ({})", c.name, c.status, c.detail));
        }
        summary.push(format!("{case}: slack {:.3e}", c.worst_slack.unwrap_or(f64::NAN)));
    }
    Ok(summary.join(", "))
}

fn dependence() -> Outcome {
    let s = |e: memvel::Error| e.to_string();
    let x = Trajectory::parse("sin(t)", 1.0).map_err(s)?;
    let alpha = ExponentSchedule::constant(0.5, 1.0).map_err(s)?;
    let beta = ExponentSchedule::constant(0.8, 1.0).map_err(s)?;
    let p = expr::parse("0.2*sin(t)").map_err(s)?;
    let res = dependence_experiment(&x, &alpha, &beta, &p, PerturbationTarget::Alpha, &[2, 4, 8, 16, 32], 0.1, &spec())
        .map_err(s)?;
    let devs: Vec<f64> = res.iter().map(|r| r.sup_dev).collect();
    let ratio = devs[devs.len() - 1] / devs[0];
    let decreasing = devs.windows(2).all(|w| w[1] < w[0]);
    let bounded = res.iter().all(|r| r.sup_integral_dev <= r.integral_bound);
    ensure(
        decreasing && ratio <= 0.2 && bounded,
        format!(
            "sup_dev {devs:.3?}, ratio {ratio:.4} (≤ 0.2), strictly decreasing: {decreasing}, integral bound holds: {bounded}"
        ),
    )
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    10f64.powf(rng.gen_range(lo..=hi))
}

fn appendix_a() -> Outcome {
    const N: usize = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let params = [0.1, 0.5, 1.0, 2.0];
    let gammas = [0.1, 0.5, 1.0];
    let mut violations = [0usize; 3];
    for k in 0..N {
        let d = params[k % 4];
        let samples = [
            log_power_bound(d, log_uniform(&mut rng, -10.0, 0.0)),
            log_growth_bound(d, log_uniform(&mut rng, 0.0, 10.0)),
            power_linear_bound(gammas[k % 3], log_uniform(&mut rng, -5.0, 5.0)),
        ];
        for (i, s) in samples.into_iter().enumerate() {
            if !s.map_err(|e| e.to_string())?.holds() {
                violations[i] += 1;
            }
        }
    }
    let mut sharp: f64 = 0.0;
    for d in params {
        let s = log_power_bound(d, (-1.0 / d).exp()).map_err(|e| e.to_string())?;
        sharp = sharp.max((s.rhs / s.lhs - 1.0).abs());
    }
    ensure(
        violations == [0; 3] && sharp <= 1e-12,
        format!("violations {violations:?} over {N} samples each; sharpness gap {sharp:.3e}"),
    )
}

fn appendix_c() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures = Vec::new();
    let mut trajectories = 0;
    for h in [1.0, 2.0] {
        for src in EXPRESSION_POOL {
            trajectories += 1;
            let x = Trajectory::parse(src, h).map_err(|e| e.to_string())?;
            let eps = |s: f64| error_control(&x, s, ERROR_CONTROL_GRID).map_err(|e| e.to_string());
            let mut prev = 0.0;
            for k in 1..=40 {
                let e = eps(h * k as f64 / 40.0)?;
                if prev > e + 1e-12 {
                    failures.push(format!("{src}: eps not monotone at s={}", h * k as f64 / 40.0));
                }
                prev = e;
            }
            let mut prev = eps(1.0)?;
            for k in 1..=6 {
                let e = eps(10f64.powi(-k))?;
                if e > prev {
                    failures.push(format!("{src}: eps(1e-{k}) = {e:e} > {prev:e}"));
                }
                prev = e;
            }
            for _ in 0..100 {
                let t = h * (1.0 - rng.gen::<f64>());
                let tau = rng.gen_range(0.0..=t);
                let r = remainder(&x, tau).map_err(|e| e.to_string())?.abs();
                if r > (eps(t)? * (1.0 + 1e-3) + 1e-12) * tau {
                    failures.push(format!("{src}: remainder bound fails at t={t}, tau={tau}"));
                }
            }
        }
    }
    ensure(
        failures.is_empty(),
        match failures.first() {
            None => format!("{trajectories} trajectories: monotone, vanishing, remainder bound hold"),
            Some(f) => format!("{} violations; first: {f}", failures.len()),
        },
    )
}

fn linearity() -> Outcome {
    let h = 1.0;
    let pool: Vec<Trajectory> = EXPRESSION_POOL
        .iter()
        .map(|s| Trajectory::parse(s, h))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let alpha = ExponentSchedule::parse("0.7", h).map_err(|e| e.to_string())?;
    let beta = ExponentSchedule::parse("0.5+0.4*sin(t)", h).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let ts: Vec<f64> = (0..20).map(|k| h * k as f64 / 19.0).collect();
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..200 {
        let (i, j) = (rng.gen_range(0..pool.len()), rng.gen_range(0..pool.len()));
        let (c1, c2): (f64, f64) = (rng.gen_range(-5.0..=5.0), rng.gen_range(-5.0..=5.0));
        let combo = Trajectory::linear_combination(c1, &pool[i], c2, &pool[j]).map_err(|e| e.to_string())?;
        for &t in &ts {
            let v = |x: &Trajectory| velocity(x, &alpha, &beta, t, &spec()).map(|b| b.value).map_err(|e| e.to_string());
            let (v1, v2, vc) = (v(&pool[i])?, v(&pool[j])?, v(&combo)?);
            let tol = 1e-8 * (1.0 + c1.abs() + c2.abs()) * 1f64.max(v1.abs()).max(v2.abs());
            worst_ratio = worst_ratio.max((vc - c1 * v1 - c2 * v2).abs() / tol);
        }
    }
    ensure(
        worst_ratio <= 1.0,
        format!("200 triples x 20 times; worst residual / tolerance = {worst_ratio:.3e}"),
    )
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_memvel");
    let invoke = |args: &[&str]| -> Result<Vec<u8>, String> {
        let out = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("{args:?} exited with {}", out.status));
        }
        Ok(out.stdout)
    };
    let sweep = ["sweep", "--x", "sin(t)", "--alpha", "0.7", "--beta", "0.5+0.4*sin(t)", "--grid", "0,1,21"];
    let verify = ["verify", "--suite", "kernel-mass,midpoint,dependence", "--format", "json"];
    let (s1, s2) = (invoke(&sweep)?, invoke(&sweep)?);
    let (j1, j2) = (invoke(&verify)?, invoke(&verify)?);
    ensure(
        s1 == s2 && j1 == j2 && !s1.is_empty() && !j1.is_empty(),
        format!("sweep CSV {} bytes identical: {}; verify JSON {} bytes identical: {}", s1.len(), s1 == s2, j1.len(), j1 == j2),
    )
}

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn main() {
    let criteria: [Criterion; 11] = [
        ("identity invariant", identity, Some(Duration::from_secs(10))),
        ("kernel mass and denominator closed forms", kernel_mass_closed_forms, Some(Duration::from_secs(30))),
        ("uniform-memory recovery", recovery, None),
        ("midpoint law", midpoint, None),
        ("weighted bound, 1000 random configurations", weighted_bound, Some(Duration::from_secs(180))),
        ("case envelopes A/B/C", envelopes, None),
        ("continuous dependence", dependence, None),
        ("elementary inequalities", appendix_a, None),
        ("error-control function", appendix_c, None),
        ("linearity", linearity, None),
        ("CLI determinism", determinism, None),
    ];
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let (Ok(msg), Some(limit)) = (&outcome, limit) {
            if elapsed > limit {
                outcome = Err(format!("{msg}; runtime {elapsed:.1?} exceeds {limit:?}"));
            }
        }
        let (tag, msg) = match outcome {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("{tag} {:>2} {name}: {msg} [{elapsed:.2?}]", k + 1);
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
