//! Verification suites run by `memvel verify`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    dependence_experiment, error_control, midpoint_limit_check, recovery_curve, remainder, PerturbationTarget,
    ERROR_CONTROL_GRID, SUP_INFLATION,
};
use crate::appendix::{log_growth_bound, log_power_bound, power_linear_bound, InequalitySample};
use crate::bounds::{check_case_envelopes, check_weighted_bound};
use crate::error::{Error, Result};
use crate::expr;
use crate::grid;
use crate::kernel::{denominator, kernel_mass};
use crate::operator::velocity;
use crate::quadrature::{oracle_integrate, QuadratureSpec};
use crate::report::{Check, CheckBuilder, VerificationReport};
use crate::schedule::ExponentSchedule;
use crate::specfun::gamma;
use crate::trajectory::Trajectory;

/// Fixed seed: suites are reproducible run to run.
const SEED: u64 = 0x6d65_6d76;

/// Smooth test trajectories used by the randomized suites.
pub const EXPRESSION_POOL: [&str; 10] = [
    "t",
    "sin(t)",
    "t^2",
    "cos(3*t)",
    "exp(-t)",
    "t^3 - t",
    "log(1+t)",
    "sqrt(1+t^2)",
    "t*exp(t/2)",
    "sin(t)^2 + t/3",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Linearity,
    KernelMass,
    WeightedBound,
    Envelopes,
    Recovery,
    Midpoint,
    Dependence,
    Appendix,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Linearity,
        Suite::KernelMass,
        Suite::WeightedBound,
        Suite::Envelopes,
        Suite::Recovery,
        Suite::Midpoint,
        Suite::Dependence,
        Suite::Appendix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Linearity => "linearity",
            Suite::KernelMass => "kernel-mass",
            Suite::WeightedBound => "weighted-bound",
            Suite::Envelopes => "envelopes",
            Suite::Recovery => "recovery",
            Suite::Midpoint => "midpoint",
            Suite::Dependence => "dependence",
            Suite::Appendix => "appendix",
        }
    }

    /// Parse a list of names; `all` expands to every suite. Sorted, deduplicated.
    pub fn parse_list<S: AsRef<str>>(names: &[S]) -> Result<Vec<Suite>> {
        let mut out = Vec::new();
        for n in names {
            for part in n.as_ref().split(',').map(str::trim).filter(|p| !p.is_empty()) {
                if part == "all" {
                    out.extend(Suite::ALL);
                } else {
                    out.push(part.parse()?);
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                Error::Config(format!("unknown suite `{s}` (expected one of: all, {})", names.join(", ")))
            })
    }
}

/// Validated inputs shared by all suites.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub x: Trajectory,
    pub alpha: ExponentSchedule,
    pub beta: ExponentSchedule,
    pub spec: QuadratureSpec,
}

impl Inputs {
    fn horizon(&self) -> f64 {
        self.x.horizon()
    }
}

/// Run `suites` and merge their checks (named `suite/check`) into one report.
pub fn run_suites(suites: &[Suite], inputs: &Inputs) -> Result<VerificationReport> {
    if suites.is_empty() {
        return Err(Error::Config("no verification suite selected".into()));
    }
    let mut checks = Vec::new();
    for &s in suites {
        for mut c in run_suite(s, inputs)? {
            c.name = format!("{s}/{}", c.name);
            checks.push(c);
        }
    }
    let name = if suites.len() == Suite::ALL.len() {
        "all".to_string()
    } else {
        suites.iter().map(|s| s.name()).collect::<Vec<_>>().join("+")
    };
    Ok(VerificationReport::new(name, checks, inputs.spec))
}

pub fn run_suite(suite: Suite, inputs: &Inputs) -> Result<Vec<Check>> {
    match suite {
        Suite::Linearity => linearity(inputs),
        Suite::KernelMass => kernel_mass_suite(inputs),
        Suite::WeightedBound => weighted_bound(inputs),
        Suite::Envelopes => envelopes(inputs),
        Suite::Recovery => recovery(inputs),
        Suite::Midpoint => midpoint(inputs),
        Suite::Dependence => dependence(inputs),
        Suite::Appendix => Ok(appendix()),
    }
}

fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ salt)
}

fn pool(horizon: f64) -> Result<Vec<Trajectory>> {
    EXPRESSION_POOL.iter().map(|s| Trajectory::parse(s, horizon)).collect()
}

fn linearity(inp: &Inputs) -> Result<Vec<Check>> {
    const TRIALS: usize = 200;
    const TIMES: usize = 20;
    let h = inp.horizon();
    let pool = pool(h)?;
    let mut rng = rng(1);
    let mut check = CheckBuilder::new("residual");
    let ts = grid::linspace(0.0, h, TIMES);
    for _ in 0..TRIALS {
        let (i, j) = (rng.gen_range(0..pool.len()), rng.gen_range(0..pool.len()));
        let (c1, c2): (f64, f64) = (rng.gen_range(-5.0..=5.0), rng.gen_range(-5.0..=5.0));
        let combo = Trajectory::linear_combination(c1, &pool[i], c2, &pool[j])?;
        for &t in &ts {
            let eval = |x: &Trajectory| velocity(x, &inp.alpha, &inp.beta, t, &inp.spec).map(|b| b.value);
            match (eval(&pool[i]), eval(&pool[j]), eval(&combo)) {
                (Ok(v1), Ok(v2), Ok(vc)) => {
                    let tol = 1e-8 * (1.0 + c1.abs() + c2.abs()) * 1f64.max(v1.abs()).max(v2.abs());
                    let slack = tol - (vc - c1 * v1 - c2 * v2).abs();
                    check.observe(t, slack, slack >= 0.0);
                }
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => check.error(t, &e),
            }
        }
    }
    check.note(format!("{TRIALS} random combinations of the expression pool"));
    Ok(vec![check.finish()])
}

fn kernel_mass_suite(inp: &Inputs) -> Result<Vec<Check>> {
    const SAMPLES: usize = 100;
    const TOL: f64 = 1e-10;
    let h = inp.horizon();
    let mut rng = rng(2);
    let mut mass = CheckBuilder::new("mass_closed_form");
    let mut den = CheckBuilder::new("denominator_closed_form");
    for _ in 0..SAMPLES {
        let r: f64 = rng.gen_range(0.1..=1.0);
        let t = h * (1.0 - rng.gen::<f64>());
        let rho = ExponentSchedule::constant(r, h)?;
        let g = gamma(r)?;
        let rel = |closed: f64, oracle: f64| (closed - oracle).abs() / oracle.abs();
        let e = rel(kernel_mass(&rho, t)?, oracle_integrate(|_| Ok(1.0 / g), r, t)?);
        mass.observe(t, TOL - e, e <= TOL);
        let e = rel(denominator(&rho, t)?, oracle_integrate(|u| Ok(u / g), r, t)?);
        den.observe(t, TOL - e, e <= TOL);
    }
    Ok(vec![mass.finish(), den.finish()])
}

fn weighted_bound(inp: &Inputs) -> Result<Vec<Check>> {
    const TRIALS: usize = 1000;
    let h = inp.horizon();
    let mut configured = check_weighted_bound(&inp.x, &inp.alpha, &inp.beta, &grid::linspace(0.0, h, 50), &inp.spec)?
        .checks
        .remove(0);
    configured.name = "configured".into();

    let mut rng = rng(3);
    let mut randomized = CheckBuilder::new("randomized");
    for _ in 0..TRIALS {
        let th = [0.5, 1.0, 2.0][rng.gen_range(0..3)];
        let x = Trajectory::parse(EXPRESSION_POOL[rng.gen_range(0..EXPRESSION_POOL.len())], th)?;
        let a = ExponentSchedule::constant(rng.gen_range(0.2..=1.0), th)?;
        let b = ExponentSchedule::constant(rng.gen_range(0.2..=1.0), th)?;
        let ts: Vec<f64> = (1..=20).map(|k| th * k as f64 / 20.0).collect();
        let c = check_weighted_bound(&x, &a, &b, &ts, &inp.spec)?.checks.remove(0);
        fold_check(&mut randomized, &c);
    }
    randomized.note(format!("{TRIALS} random configurations"));
    Ok(vec![configured, randomized.finish()])
}

// Fold a finished per-configuration check into an aggregate.
fn fold_check(agg: &mut CheckBuilder, c: &Check) {
    if c.errored {
        agg.error(c.witness_t.unwrap_or(f64::NAN), &Error::Solver(c.detail.clone()));
    } else {
        agg.observe(c.witness_t.unwrap_or(f64::NAN), c.worst_slack.unwrap_or(f64::NAN), c.passed());
    }
}

fn envelopes(inp: &Inputs) -> Result<Vec<Check>> {
    let h = inp.horizon();
    let positive = |h: f64, n: usize| -> Vec<f64> { (1..=n).map(|k| h * k as f64 / n as f64).collect() };
    let mut configured = check_case_envelopes(&inp.x, &inp.alpha, &inp.beta, &positive(h, 50), &inp.spec)?
        .checks
        .remove(0);
    configured.name = format!("configured_{}", configured.name);
    let mut checks = vec![configured];
    for (x, a, b, th) in [("sin(t)", 0.9, 0.4, 2.0), ("t", 0.4, 0.9, 1.0), ("t", 0.6, 0.6, 1.0)] {
        let (x, a, b) = (
            Trajectory::parse(x, th)?,
            ExponentSchedule::constant(a, th)?,
            ExponentSchedule::constant(b, th)?,
        );
        let mut c = check_case_envelopes(&x, &a, &b, &positive(th, 50), &inp.spec)?.checks.remove(0);
        c.name = format!("reference_{}", c.name);
        checks.push(c);
    }
    Ok(checks)
}

fn recovery(inp: &Inputs) -> Result<Vec<Check>> {
    let x = &inp.x;
    let h = inp.horizon();
    let t0 = 0.1f64.min(h);
    let ts: Vec<f64> = (0..9).map(|k| t0 * 0.5f64.powi(k)).collect();
    let curve = recovery_curve(x, &ts, &inp.spec)?;

    let mut cert = CheckBuilder::new("certificate");
    for p in &curve.points {
        let slack = p.certificate * (1.0 + SUP_INFLATION) + 1e-10 - p.deviation;
        cert.observe(p.t, slack, p.certified);
    }
    for (t, e) in &curve.failures {
        cert.error(*t, e);
    }
    let mut mono = CheckBuilder::new("deviation_decreasing");
    for w in curve.points.windows(2) {
        let slack = w[0].deviation + 1e-14 - w[1].deviation;
        mono.observe(w[1].t, slack, slack >= 0.0);
    }

    let mut xs = vec![x.clone()];
    xs.extend(pool(h)?);
    let mut checks = vec![cert.finish(), mono.finish()];
    checks.extend(error_control_checks(&xs)?);
    Ok(checks)
}

/// Monotonicity and vanishing of the error-control function, and the uniform
/// remainder bound it yields, over each trajectory in `xs`.
pub fn error_control_checks(xs: &[Trajectory]) -> Result<Vec<Check>> {
    let mut eps_mono = CheckBuilder::new("error_control_monotone");
    let mut vanish = CheckBuilder::new("error_control_vanishing");
    let mut rem = CheckBuilder::new("remainder_uniform_bound");
    let mut rng = rng(5);
    for x in xs {
        let h = x.horizon();
        let ss = grid::linspace(0.0, h, 41);
        let eps = ss
            .iter()
            .map(|&s| error_control(x, s, ERROR_CONTROL_GRID))
            .collect::<Result<Vec<f64>>>()?;
        for k in 1..ss.len() {
            let slack = eps[k] + 1e-12 - eps[k - 1];
            eps_mono.observe(ss[k], slack, slack >= 0.0);
        }

        let scale = h.min(1.0);
        let mut prev = error_control(x, scale, ERROR_CONTROL_GRID)?;
        for k in 1..=6 {
            let s = scale * 10f64.powi(-k);
            let e = error_control(x, s, ERROR_CONTROL_GRID)?;
            vanish.observe(s, prev - e, e <= prev);
            prev = e;
        }

        for _ in 0..100 {
            let t = h * (1.0 - rng.gen::<f64>());
            let tau = rng.gen_range(0.0..=t);
            let bound = (error_control(x, t, ERROR_CONTROL_GRID)? * (1.0 + SUP_INFLATION) + 1e-12) * tau;
            let slack = bound - remainder(x, tau)?.abs();
            rem.observe(tau, slack, slack >= 0.0);
        }
    }
    let n = format!("{} trajectories", xs.len());
    eps_mono.note(n.clone());
    vanish.note(n.clone());
    rem.note(n);
    Ok(vec![eps_mono.finish(), vanish.finish(), rem.finish()])
}

fn midpoint(inp: &Inputs) -> Result<Vec<Check>> {
    let scale = inp.horizon().min(1.0);
    let ts = [0.1 * scale, 0.01 * scale, 0.001 * scale];
    Ok(midpoint_limit_check(&inp.x, &ts, 1e-3)?.checks)
}

fn dependence(inp: &Inputs) -> Result<Vec<Check>> {
    let h = inp.horizon();
    let ns = [2, 4, 8, 16, 32];
    // push α downward when there is no room above it
    let p = if inp.alpha.upper() + 0.1 <= 1.0 { "0.2*sin(t)" } else { "-0.2*sin(t)" };
    let res = dependence_experiment(
        &inp.x,
        &inp.alpha,
        &inp.beta,
        &expr::parse(p)?,
        PerturbationTarget::Alpha,
        &ns,
        0.1 * h,
        &inp.spec,
    )?;
    let mut mono = CheckBuilder::new("sup_dev_non_increasing");
    for w in res.windows(2) {
        let slack = w[0].sup_dev - w[1].sup_dev;
        mono.observe(w[1].n as f64, slack, slack >= 0.0);
    }
    mono.note("witness_t holds n");
    let mut ratio = CheckBuilder::new("decay_ratio");
    let (first, last) = (res[0].sup_dev, res[res.len() - 1].sup_dev);
    let slack = 0.25 * first - last;
    ratio.observe(res[res.len() - 1].n as f64, slack, slack >= 0.0);
    ratio.note(format!("perturbation {p}, first {first:e}, last {last:e}"));
    let mut bound = CheckBuilder::new("integral_part_bound");
    for r in &res {
        let slack = r.integral_bound - r.sup_integral_dev;
        bound.observe(r.n as f64, slack, slack >= 0.0);
    }
    Ok(vec![mono.finish(), ratio.finish(), bound.finish()])
}

fn appendix() -> Vec<Check> {
    const SAMPLES: usize = 100_000;
    let mut rng = rng(8);
    let mut log_uniform = |lo: f64, hi: f64| 10f64.powf(rng.gen_range(lo..=hi));
    let observe = |b: &mut CheckBuilder, s: InequalitySample| b.observe(s.point, s.slack(), s.holds());
    let params = [0.1, 0.5, 1.0, 2.0];
    let gammas = [0.1, 0.5, 1.0];

    let mut lp = CheckBuilder::new("log_power");
    let mut lg = CheckBuilder::new("log_growth");
    let mut pl = CheckBuilder::new("power_linear");
    for k in 0..SAMPLES {
        let d = params[k % params.len()];
        observe(&mut lp, log_power_bound(d, log_uniform(-10.0, 0.0)).expect("sample in domain"));
        observe(&mut lg, log_growth_bound(d, log_uniform(0.0, 10.0)).expect("sample in domain"));
        let g = gammas[k % gammas.len()];
        observe(&mut pl, power_linear_bound(g, log_uniform(-5.0, 5.0)).expect("sample in domain"));
    }
    let mut sharp = CheckBuilder::new("log_power_sharpness");
    for d in params {
        let s = log_power_bound(d, (-1.0 / d).exp()).expect("maximizer in domain");
        let gap = (s.rhs / s.lhs - 1.0).abs();
        sharp.observe(s.point, 1e-12 - gap, gap <= 1e-12);
    }
    vec![lp.finish(), lg.finish(), pl.finish(), sharp.finish()]
}
