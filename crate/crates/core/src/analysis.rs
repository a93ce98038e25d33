//! Limit behaviour of the operator: first-order remainder control near `t = 0`,
//! recovery of `ẋ(0)` under uniform memory, the midpoint law for the
//! mean-value point, and convergence under perturbed exponents.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::dependence_bound_constant;
use crate::error::{Error, Result};
use crate::expr::{BinOp, Expr};
use crate::grid::{self, DEFAULT_GRID_POINTS};
use crate::operator::{check_horizons, velocity, velocity_grid};
use crate::quadrature::{legendre, QuadratureSpec};
use crate::report::{CheckBuilder, VerificationReport};
use crate::schedule::{ExponentSchedule, ScheduleDef};
use crate::trajectory::Trajectory;

/// Samples used by [`error_control`] when callers have no preference.
pub const ERROR_CONTROL_GRID: usize = 400;
/// Decades spanned by the geometric grid in [`error_control`].
pub const ERROR_CONTROL_DECADES: f64 = 6.0;
/// Inflation applied to the numeric sup in certificate comparisons.
pub const SUP_INFLATION: f64 = 1e-3;
/// Perturbed exponents may overshoot one by at most this much before rejection.
pub const PERTURBATION_CLAMP_TOL: f64 = 1e-9;
/// Points in the `[ε, T]` grid of the dependence experiment.
pub const DEPENDENCE_GRID: usize = 100;

const SCAN_POINTS: usize = 1001;
const AVERAGE_NODES: usize = 64;
const MEAN_VALUE_TOL: f64 = 1e-12;

fn check_in_horizon(x: &Trajectory, h: f64, what: &str) -> Result<()> {
    if (0.0..=x.horizon()).contains(&h) {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} = {h} outside [0, {}]", x.horizon())))
    }
}

/// `r(h) = x(h) − x(0) − ẋ(0)·h`.
pub fn remainder(x: &Trajectory, h: f64) -> Result<f64> {
    check_in_horizon(x, h, "h")?;
    Ok(x.x_at(h)? - x.x_at(0.0)? - x.xdot_at(0.0)? * h)
}

/// `r(h)/h`, free of the cancellation that plagues the direct formula at
/// small `h`: it is also computed as `∫₀¹ (ẋ(hs) − ẋ(0)) ds` and whichever
/// route has the smaller rounding/truncation estimate wins.
pub fn remainder_ratio(x: &Trajectory, h: f64) -> Result<f64> {
    check_in_horizon(x, h, "h")?;
    if h == 0.0 {
        return Ok(0.0);
    }
    let (x0, xh, d0) = (x.x_at(0.0)?, x.x_at(h)?, x.xdot_at(0.0)?);
    let direct = (xh - x0 - d0 * h) / h;
    // rounding in x(h), x(0), and in the argument of x (≈ ε·|ẋ|) — all divided by h
    let direct_err = 4.0 * f64::EPSILON * (xh.abs() + x0.abs() + d0.abs() * h.max(1.0)) / h;
    if direct_err <= 1e-13 * direct.abs() {
        return Ok(direct);
    }
    let mean = |n: usize| -> Result<(f64, f64)> {
        let rule = legendre(n);
        let (mut v, mut scale) = (0.0, 0.0);
        for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
            let d = x.xdot_at(h * s)?;
            v += w * (d - d0);
            scale += w * (d.abs() + d0.abs());
        }
        Ok((v, scale))
    };
    let (coarse, _) = mean(20)?;
    let (fine, scale) = mean(40)?;
    let integral_err = (fine - coarse).abs() + 4.0 * f64::EPSILON * scale;
    Ok(if integral_err < direct_err { fine } else { direct })
}

/// Numeric `ε(s) = sup_{0<h≤s} |r(h)/h|` over a geometric grid spanning
/// six decades below `s`, refined around the grid maximum. `ε(0) = 0`.
///
/// This under-approximates the true sup; compare against it with
/// [`SUP_INFLATION`].
pub fn error_control(x: &Trajectory, s: f64, grid_points: usize) -> Result<f64> {
    check_in_horizon(x, s, "s")?;
    if grid_points < 2 {
        return Err(Error::domain("error control needs at least 2 grid points"));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let hs = grid::geomspace(s * 10f64.powf(-ERROR_CONTROL_DECADES), s, grid_points);
    let ext = grid::refined_extrema(|h| Ok(remainder_ratio(x, h)?.abs()), &hs)?;
    Ok(ext.max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecoveryPoint {
    pub t: f64,
    /// `V_{1,1}[x](t)`.
    pub v11: f64,
    /// `|V_{1,1}[x](t) − ẋ(0)|`.
    pub deviation: f64,
    pub eps_t: f64,
    /// `3·ε_t`.
    pub certificate: f64,
    /// `deviation ≤ 3 ε_t (1 + 1e-3) + 1e-10`.
    pub certified: bool,
}

#[derive(Debug, Default)]
pub struct RecoveryCurve {
    pub points: Vec<RecoveryPoint>,
    pub failures: Vec<(f64, Error)>,
}

fn recovery_point(x: &Trajectory, t: f64, unit: &ExponentSchedule, spec: &QuadratureSpec) -> Result<RecoveryPoint> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("recovery times must be positive, got {t}")));
    }
    let v11 = velocity(x, unit, unit, t, spec)?.value;
    let deviation = (v11 - x.xdot_at(0.0)?).abs();
    let eps_t = error_control(x, t, ERROR_CONTROL_GRID)?;
    let certificate = 3.0 * eps_t;
    Ok(RecoveryPoint {
        t,
        v11,
        deviation,
        eps_t,
        certificate,
        certified: deviation <= certificate * (1.0 + SUP_INFLATION) + 1e-10,
    })
}

/// Uniform-memory velocity against `ẋ(0)` with its `3 ε_t` certificate.
pub fn recovery_curve(x: &Trajectory, ts: &[f64], spec: &QuadratureSpec) -> Result<RecoveryCurve> {
    let unit = ExponentSchedule::constant(1.0, x.horizon())?;
    let results: Vec<(f64, Result<RecoveryPoint>)> = ts
        .par_iter()
        .map(|&t| (t, recovery_point(x, t, &unit, spec)))
        .collect();
    let mut out = RecoveryCurve::default();
    for (t, r) in results {
        match r {
            Ok(p) => out.points.push(p),
            Err(e) => out.failures.push((t, e)),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanValueResult {
    pub t: f64,
    pub xi: f64,
    /// `ξ / t`.
    pub theta: f64,
    /// `x` is constant on `[0, t]` to within the tolerance; `ξ = t/2`.
    pub degenerate: bool,
}

/// `(1/t) ∫₀ᵗ x(τ) dτ` by Gauss–Legendre.
fn average(x: &Trajectory, t: f64) -> Result<f64> {
    let rule = legendre(AVERAGE_NODES);
    let mut sum = 0.0;
    for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
        sum += w * x.x_at(t * s)?;
    }
    Ok(sum)
}

/// Leftmost `ξ ∈ [0, t]` with `x(ξ)` equal to the average of `x` over `[0, t]`.
pub fn mean_value_point(x: &Trajectory, t: f64, tol: f64) -> Result<MeanValueResult> {
    if !(t > 0.0 && t <= x.horizon()) {
        return Err(Error::domain(format!("t = {t} outside (0, {}]", x.horizon())));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let avg = average(x, t)?;
    let taus = grid::linspace(0.0, t, SCAN_POINTS);
    let values = taus.iter().map(|&s| x.x_at(s)).collect::<Result<Vec<f64>>>()?;
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let result = |xi: f64, degenerate: bool| MeanValueResult {
        t,
        xi,
        theta: xi / t,
        degenerate,
    };
    if hi - lo < tol {
        return Ok(result(t / 2.0, true));
    }
    let f = |s: f64| -> Result<f64> { Ok(x.x_at(s)? - avg) };
    for k in 0..taus.len() {
        let fa = values[k] - avg;
        if fa == 0.0 {
            return Ok(result(taus[k], false));
        }
        if k + 1 == taus.len() {
            break;
        }
        let fb = values[k + 1] - avg;
        if fa.signum() != fb.signum() {
            let (mut a, mut b, mut fa) = (taus[k], taus[k + 1], fa);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let fm = f(mid)?;
                if fm == 0.0 {
                    return Ok(result(mid, false));
                }
                if fm.signum() == fa.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            return Ok(result(0.5 * (a + b), false));
        }
    }
    Err(Error::Solver(format!(
        "no crossing of the average {avg} found on [0, {t}] although x varies by {}",
        hi - lo
    )))
}

/// Check `θ(t) → 1/2` along decreasing `ts`: the last point is within
/// `tol_final` of one half and the distance does not grow (10% slack) over
/// the last three points. Requires `ẋ(0) ≠ 0`.
pub fn midpoint_limit_check(x: &Trajectory, ts: &[f64], tol_final: f64) -> Result<VerificationReport> {
    if x.xdot_at(0.0)?.abs() < 1e-12 {
        return Err(Error::Hypothesis(
            "midpoint law requires a non-zero initial derivative".into(),
        ));
    }
    if ts.is_empty() {
        return Err(Error::domain("midpoint check needs at least one time"));
    }
    if ts.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::domain("midpoint check times must be strictly decreasing"));
    }
    let results = ts
        .iter()
        .map(|&t| mean_value_point(x, t, MEAN_VALUE_TOL))
        .collect::<Result<Vec<_>>>()?;
    let dist: Vec<f64> = results.iter().map(|r| (r.theta - 0.5).abs()).collect();

    let mut last = CheckBuilder::new("final_distance_to_midpoint");
    let (t_last, d_last) = (ts[ts.len() - 1], dist[dist.len() - 1]);
    last.observe(t_last, tol_final - d_last, d_last <= tol_final);
    last.note(format!("theta = {}", results[results.len() - 1].theta));

    let mut trend = CheckBuilder::new("distance_non_increasing");
    let start = dist.len().saturating_sub(3);
    if dist.len() - start < 2 {
        trend.observe(t_last, 0.0, true);
        trend.note("fewer than two points; trend vacuous");
    }
    for k in start..dist.len().saturating_sub(1) {
        let allowed = 1.1 * dist[k] + 1e-10;
        let slack = allowed - dist[k + 1];
        trend.observe(ts[k + 1], slack, slack >= 0.0);
    }
    Ok(VerificationReport::new(
        "midpoint",
        vec![last.finish(), trend.finish()],
        QuadratureSpec::default(),
    ))
}

/// Which exponent(s) receive the perturbation `p(t)/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationTarget {
    Alpha,
    Beta,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DependenceResult {
    pub n: u32,
    /// `sup |V_n − V|` over the `[ε, T]` grid.
    pub sup_dev: f64,
    /// `max(sup |α_n − α|, sup |β_n − β|)` over `[0, T]`.
    pub sup_exp_dev: f64,
    pub sup_alpha_dev: f64,
    /// `sup |I_n − I|` over the `[ε, T]` grid (integral parts only).
    pub sup_integral_dev: f64,
    /// `L_x · C_F · T · sup |α_n − α|`.
    pub integral_bound: f64,
}

fn perturbed(base: &ExponentSchedule, p: &Expr, n: u32) -> Result<ExponentSchedule> {
    let e = Expr::binary(
        BinOp::Add,
        base.definition().to_expr(),
        Expr::binary(BinOp::Div, p.clone(), Expr::num(n as f64)),
    );
    ExponentSchedule::with_clamp_tolerance(ScheduleDef::from_expr(e)?, base.horizon(), PERTURBATION_CLAMP_TOL)
}

fn sup_difference(a: &ExponentSchedule, b: &ExponentSchedule) -> Result<f64> {
    let ext = grid::extrema_on(|t| Ok((a.at(t)? - b.at(t)?).abs()), 0.0, a.horizon(), DEFAULT_GRID_POINTS)?;
    Ok(ext.max)
}

/// Sup deviation of `V_{α_n,β_n}` from `V_{α,β}` on `[ε, T]` with
/// `α_n = α + p/n` (and/or `β_n`), for each `n` in ascending order.
#[allow(clippy::too_many_arguments)]
pub fn dependence_experiment(
    x: &Trajectory,
    alpha: &ExponentSchedule,
    beta: &ExponentSchedule,
    perturbation: &Expr,
    target: PerturbationTarget,
    ns: &[u32],
    eps_lo: f64,
    spec: &QuadratureSpec,
) -> Result<Vec<DependenceResult>> {
    check_horizons(x, alpha, beta)?;
    let horizon = x.horizon();
    if !(eps_lo > 0.0 && eps_lo < horizon) {
        return Err(Error::domain(format!("interval start {eps_lo} outside (0, {horizon})")));
    }
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.first() == Some(&0) {
        return Err(Error::domain("perturbation indices must be positive"));
    }
    let ts = grid::linspace(eps_lo, horizon, DEPENDENCE_GRID);
    let first_failure = |g: &crate::operator::GridEvaluation| -> Result<()> {
        match g.failures.first() {
            Some((_, e)) => Err(Error::Solver(format!("velocity evaluation failed: {e}"))),
            None => Ok(()),
        }
    };
    let base = velocity_grid(x, alpha, beta, &ts, spec);
    first_failure(&base)?;
    let lx = x.lipschitz()?;

    let mut out = Vec::with_capacity(ns.len());
    for n in ns {
        let alpha_n = match target {
            PerturbationTarget::Alpha | PerturbationTarget::Both => perturbed(alpha, perturbation, n)?,
            PerturbationTarget::Beta => alpha.clone(),
        };
        let beta_n = match target {
            PerturbationTarget::Beta | PerturbationTarget::Both => perturbed(beta, perturbation, n)?,
            PerturbationTarget::Alpha => beta.clone(),
        };
        let g = velocity_grid(x, &alpha_n, &beta_n, &ts, spec);
        first_failure(&g)?;
        let (mut sup_dev, mut sup_integral_dev) = (0.0f64, 0.0f64);
        for (p, q) in base.points.iter().zip(&g.points) {
            sup_dev = sup_dev.max((q.value - p.value).abs());
            sup_integral_dev = sup_integral_dev.max((q.integral - p.integral).abs());
        }
        let sup_alpha_dev = sup_difference(&alpha_n, alpha)?;
        let sup_beta_dev = sup_difference(&beta_n, beta)?;
        let m = alpha.lower().min(beta.lower()).min(alpha_n.lower()).min(beta_n.lower());
        let big_m = alpha.upper().max(beta.upper()).max(alpha_n.upper()).max(beta_n.upper());
        let c_f = dependence_bound_constant(m, big_m, horizon)?;
        out.push(DependenceResult {
            n,
            sup_dev,
            sup_exp_dev: sup_alpha_dev.max(sup_beta_dev),
            sup_alpha_dev,
            sup_integral_dev,
            integral_bound: lx * c_f * horizon * sup_alpha_dev,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn traj(src: &str, horizon: f64) -> Trajectory {
        Trajectory::parse(src, horizon).unwrap()
    }

    fn sched(src: &str, horizon: f64) -> ExponentSchedule {
        ExponentSchedule::parse(src, horizon).unwrap()
    }

    const POOL: [&str; 10] = [
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

    #[test]
    fn remainder_examples() {
        assert_eq!(remainder(&traj("t", 1.0), 0.5).unwrap(), 0.0);
        let r = remainder(&traj("sin(t)", 1.0), 0.1).unwrap();
        assert!((r - (0.1f64.sin() - 0.1)).abs() < 1e-18);
        assert!((r + 1.665833531718508e-4).abs() < 1e-17);
        assert!((remainder(&traj("t^2", 1.0), 0.3).unwrap() - 0.09).abs() < 1e-16);
        assert!(matches!(remainder(&traj("t", 1.0), 1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn remainder_ratio_is_accurate_at_tiny_steps() {
        // sin: r(h)/h = (sin h − h)/h ≈ −h²/6
        let x = traj("sin(t)", 1.0);
        for h in [1e-3, 1e-5, 1e-7] {
            let r = remainder_ratio(&x, h).unwrap();
            let exact = -h * h / 6.0 + h.powi(4) / 120.0;
            // limited by the rounding of ẋ itself, not by 1/h cancellation
            assert!((r - exact).abs() <= 1e-6 * exact.abs() + 4.0 * f64::EPSILON, "h={h}: {r} vs {exact}");
        }
        // exp: (e^h − 1 − h)/h ≈ h/2
        let x = traj("exp(t)", 1.0);
        let r = remainder_ratio(&x, 1e-8).unwrap();
        assert!((r - 5e-9).abs() <= 1e-6 * 5e-9 + 4.0 * f64::EPSILON);
        // log(1+h): the direct route loses everything to rounding of 1+h
        let x = traj("log(1+t)", 1.0);
        let r = remainder_ratio(&x, 1e-12).unwrap();
        assert!((r + 5e-13).abs() <= 1e-15, "{r}");
    }

    #[test]
    fn error_control_examples() {
        assert_eq!(error_control(&traj("t", 1.0), 0.5, 100).unwrap(), 0.0);
        assert!((error_control(&traj("t^2", 1.0), 0.3, 100).unwrap() - 0.3).abs() < 1e-15);
        let e = error_control(&traj("sin(t)", 1.0), 0.1, 100).unwrap();
        assert!((e - 1.665833531718508e-3).abs() < 1e-15, "{e}");
        assert_eq!(error_control(&traj("sin(t)", 1.0), 0.0, 100).unwrap(), 0.0);
        assert!(error_control(&traj("sin(t)", 1.0), 2.0, 100).is_err());
    }

    #[test]
    fn error_control_is_monotone() {
        for src in POOL {
            let x = traj(src, 1.0);
            let mut prev = 0.0;
            for k in 1..=40 {
                let s = k as f64 / 40.0;
                let e = error_control(&x, s, ERROR_CONTROL_GRID).unwrap();
                assert!(prev <= e + 1e-12, "{src} s={s}: {prev} > {e}");
                prev = e;
            }
        }
    }

    #[test]
    fn error_control_vanishes() {
        for src in POOL {
            let x = traj(src, 1.0);
            let mut prev = f64::INFINITY;
            for k in 1..=6 {
                let e = error_control(&x, 10f64.powi(-k), ERROR_CONTROL_GRID).unwrap();
                assert!(e <= prev, "{src} k={k}");
                prev = e;
            }
            assert!(prev < 1e-5, "{src}: {prev}");
        }
    }

    #[test]
    fn remainder_uniform_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for src in POOL {
            let x = traj(src, 1.0);
            for _ in 0..100 {
                let t: f64 = rng.gen_range(1e-4..=1.0);
                let tau: f64 = rng.gen_range(0.0..=t);
                let eps = error_control(&x, t, ERROR_CONTROL_GRID).unwrap();
                let r = remainder(&x, tau).unwrap().abs();
                assert!(r <= (eps * (1.0 + SUP_INFLATION) + 1e-12) * tau, "{src} t={t} tau={tau}");
            }
        }
    }

    #[test]
    fn recovery_examples() {
        let spec = QuadratureSpec::default();
        let c = recovery_curve(&traj("t", 1.0), &[0.1, 0.5, 1.0], &spec).unwrap();
        assert!(c.points.iter().all(|p| p.deviation <= 1e-14 && p.eps_t == 0.0 && p.certified));
        let c = recovery_curve(&traj("sin(t)", 1.0), &[0.1], &spec).unwrap();
        let p = c.points[0];
        assert!((p.v11 - 0.9975013885417163).abs() < 1e-13);
        assert!((p.deviation - 2.4986114582837e-3).abs() < 1e-12);
        assert!(p.certified && p.certificate < 5.0025e-3);
        let c = recovery_curve(&traj("t^2", 1.0), &[0.2], &spec).unwrap();
        let p = c.points[0];
        assert!((p.v11 - 0.8 / 3.0).abs() < 1e-13);
        assert!((p.certificate - 0.6).abs() < 1e-14 && p.certified);
        let c = recovery_curve(&traj("t", 1.0), &[0.0, 0.5], &spec).unwrap();
        assert_eq!(c.failures.len(), 1);
    }

    #[test]
    fn recovery_certificate_on_pool() {
        let spec = QuadratureSpec::default();
        let ts: Vec<f64> = (0..9).map(|k| 0.1 * 0.5f64.powi(k)).collect();
        for src in POOL {
            let c = recovery_curve(&traj(src, 1.0), &ts, &spec).unwrap();
            assert!(c.failures.is_empty());
            for p in &c.points {
                assert!(p.certified, "{src}: {p:?}");
            }
        }
    }

    #[test]
    fn mean_value_examples() {
        let r = mean_value_point(&traj("t", 1.0), 0.8, 1e-12).unwrap();
        assert!((r.xi - 0.4).abs() < 1e-15 && (r.theta - 0.5).abs() < 1e-15 && !r.degenerate);
        let r = mean_value_point(&traj("t^2", 1.0), 0.9, 1e-12).unwrap();
        assert!((r.theta - 0.5773502691896258).abs() < 1e-12);
        assert!((1.0 / 3f64.sqrt() - 0.5773502691896258).abs() < 1e-16);
        let r = mean_value_point(&traj("7", 1.0), 0.5, 1e-12).unwrap();
        assert_eq!((r.xi, r.theta, r.degenerate), (0.25, 0.5, true));
    }

    #[test]
    fn mean_value_picks_leftmost_root() {
        // average of cos(8t) over [0, π] is 0: roots at π/16, 3π/16, ...
        let pi = std::f64::consts::PI;
        let r = mean_value_point(&traj("cos(8*t)", 4.0), pi, 1e-12).unwrap();
        assert!((r.xi - pi / 16.0).abs() < 1e-9, "{}", r.xi);
    }

    #[test]
    fn mean_value_solves_identity() {
        for src in POOL {
            let x = traj(src, 2.0);
            for t in [0.01, 0.3, 1.0, 2.0] {
                let r = mean_value_point(&x, t, 1e-12).unwrap();
                if r.degenerate {
                    continue;
                }
                assert!((0.0..=1.0).contains(&r.theta));
                let avg = average(&x, t).unwrap();
                assert!((x.x_at(r.xi).unwrap() - avg).abs() <= 1e-12 * (1.0 + avg.abs()), "{src} t={t}");
            }
        }
    }

    #[test]
    fn midpoint_examples() {
        let r = midpoint_limit_check(&traj("t", 1.0), &[0.5, 0.1, 0.01], 1e-10).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
        let r = midpoint_limit_check(&traj("sin(t)", 1.0), &[0.1, 0.01, 0.001], 1e-3).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
        assert!(matches!(
            midpoint_limit_check(&traj("t^2", 1.0), &[0.1, 0.01], 1e-3),
            Err(Error::Hypothesis(_))
        ));
        assert!(midpoint_limit_check(&traj("sin(t)", 1.0), &[0.001, 0.01, 0.1], 1e-3).is_err());
    }

    #[test]
    fn dependence_zero_perturbation() {
        let h = 1.0;
        let res = dependence_experiment(
            &traj("sin(t)", h),
            &sched("0.5", h),
            &sched("0.8", h),
            &parse("0").unwrap(),
            PerturbationTarget::Both,
            &[1, 2, 4],
            0.1,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!(res.iter().all(|r| r.sup_dev == 0.0 && r.sup_exp_dev == 0.0));
    }

    #[test]
    fn dependence_identity_with_shared_perturbation() {
        let h = 1.0;
        let res = dependence_experiment(
            &traj("t", h),
            &sched("0.5", h),
            &sched("0.5", h),
            &parse("0.2").unwrap(),
            PerturbationTarget::Both,
            &[1, 2, 4, 8],
            0.1,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!(res.iter().all(|r| r.sup_dev <= 1e-8));
    }

    #[test]
    fn dependence_decays_for_alpha_perturbation() {
        let h = 1.0;
        let res = dependence_experiment(
            &traj("sin(t)", h),
            &sched("0.5", h),
            &sched("0.8", h),
            &parse("0.2*sin(t)").unwrap(),
            PerturbationTarget::Alpha,
            &[2, 4, 8, 16, 32],
            0.1,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert_eq!(res.iter().map(|r| r.n).collect::<Vec<_>>(), vec![2, 4, 8, 16, 32]);
        assert!(res.windows(2).all(|w| w[1].sup_dev < w[0].sup_dev));
        assert!(res[4].sup_dev / res[0].sup_dev <= 0.2);
        assert!(res.iter().all(|r| r.sup_integral_dev <= r.integral_bound));
    }

    #[test]
    fn dependence_rejects_invalid_perturbations() {
        let h = 1.0;
        let run = |p: &str, eps: f64| {
            dependence_experiment(
                &traj("sin(t)", h),
                &sched("0.9", h),
                &sched("0.8", h),
                &parse(p).unwrap(),
                PerturbationTarget::Alpha,
                &[1, 2],
                eps,
                &QuadratureSpec::default(),
            )
        };
        assert!(matches!(run("0.5", 0.1), Err(Error::Range(_))));
        assert!(matches!(run("-1", 0.1), Err(Error::Range(_))));
        assert!(matches!(run("0.05", 0.0), Err(Error::Domain(_))));
    }
}
