//! Explicit constants of the weighted estimate and its case-wise envelopes.
//!
//! With `m ≤ α, β ≤ M` on `[0, T]`:
//!
//! ```text
//! C_W = (M+1) Γ(m) / ((m+1) Γ(M))
//! min{1, t^(β−α)} |V(t)| ≤ C_W ‖x‖_{C¹}
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{self, DEFAULT_GRID_POINTS};
use crate::operator::{check_horizons, velocity_grid};
use crate::quadrature::QuadratureSpec;
use crate::report::{CheckBuilder, VerificationReport};
use crate::schedule::ExponentSchedule;
use crate::specfun::gamma;
use crate::trajectory::Trajectory;

/// Relative slack allowed in every bound comparison.
pub const SLACK_TOL: f64 = 1e-9;
/// Exponent differences within this of zero count as zero when classifying.
pub const CASE_TOL: f64 = 1e-12;

const GAMMA_CROSS_CHECK_POINTS: usize = 1000;

fn check_exponent_bounds(m: f64, big_m: f64) -> Result<()> {
    if !(m > 0.0 && m <= big_m && big_m <= 1.0) {
        return Err(Error::domain(format!("exponent bounds must satisfy 0 < m ≤ M ≤ 1, got m = {m}, M = {big_m}")));
    }
    Ok(())
}

/// `(Γ_low, Γ_up) = (Γ(M), Γ(m))`, using that Γ decreases on `(0, 1]`.
pub fn gamma_extrema(m: f64, big_m: f64) -> Result<(f64, f64)> {
    check_exponent_bounds(m, big_m)?;
    let (low, up) = (gamma(big_m)?, gamma(m)?);
    // guard the monotonicity shortcut with a plain grid search
    let (mut grid_low, mut grid_up) = (f64::INFINITY, f64::NEG_INFINITY);
    for z in grid::linspace(m, big_m, GAMMA_CROSS_CHECK_POINTS) {
        let g = gamma(z)?;
        grid_low = grid_low.min(g);
        grid_up = grid_up.max(g);
    }
    if (grid_low - low).abs() > 1e-12 * low || (grid_up - up).abs() > 1e-12 * up {
        return Err(Error::Solver(format!(
            "gamma extrema on [{m}, {big_m}] disagree with grid search: ({low}, {up}) vs ({grid_low}, {grid_up})"
        )));
    }
    Ok((low, up))
}

/// `C_W = (M+1) Γ_up / ((m+1) Γ_low)`.
pub fn weighted_constant(m: f64, big_m: f64) -> Result<f64> {
    let (low, up) = gamma_extrema(m, big_m)?;
    Ok((big_m + 1.0) * up / ((m + 1.0) * low))
}

/// `C_F = 2/(m e)` for `T ≤ 1`, else `max(2/(m e), T^(M+1))`.
pub fn dependence_bound_constant(m: f64, big_m: f64, horizon: f64) -> Result<f64> {
    check_exponent_bounds(m, big_m)?;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::domain(format!("horizon must be positive, got {horizon}")));
    }
    let base = 2.0 / (m * std::f64::consts::E);
    Ok(if horizon <= 1.0 {
        base
    } else {
        base.max(horizon.powf(big_m + 1.0))
    })
}

/// `(Δ_min, Δ_max)` of `β(t) − α(t)` over `[0, T]`.
pub fn exponent_difference_extrema(alpha: &ExponentSchedule, beta: &ExponentSchedule) -> Result<(f64, f64)> {
    if alpha.horizon() != beta.horizon() {
        return Err(Error::Config("alpha and beta have different horizons".into()));
    }
    if alpha.is_constant() && beta.is_constant() {
        let d = beta.at(0.0)? - alpha.at(0.0)?;
        return Ok((d, d));
    }
    let ext = grid::extrema_on(|t| Ok(beta.at(t)? - alpha.at(t)?), 0.0, alpha.horizon(), DEFAULT_GRID_POINTS)?;
    Ok((ext.min, ext.max))
}

/// Sign pattern of the exponent difference `Δ = β − α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundCase {
    /// `Δ < 0` throughout.
    A,
    /// `Δ > 0` throughout.
    B,
    /// Mixed signs, or touching zero.
    C,
}

pub fn classify(delta_min: f64, delta_max: f64) -> BoundCase {
    if delta_max < -CASE_TOL {
        BoundCase::A
    } else if delta_min > CASE_TOL {
        BoundCase::B
    } else {
        BoundCase::C
    }
}

/// All constants for one `(α, β, T)` configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundContext {
    pub m: f64,
    pub big_m: f64,
    pub gamma_low: f64,
    pub gamma_up: f64,
    pub c_w: f64,
    pub delta_min: f64,
    pub delta_max: f64,
    pub c_f: f64,
    pub horizon: f64,
}

impl BoundContext {
    pub fn new(alpha: &ExponentSchedule, beta: &ExponentSchedule) -> Result<Self> {
        let m = alpha.lower().min(beta.lower());
        let big_m = alpha.upper().max(beta.upper());
        let (gamma_low, gamma_up) = gamma_extrema(m, big_m)?;
        let (delta_min, delta_max) = exponent_difference_extrema(alpha, beta)?;
        let horizon = alpha.horizon();
        Ok(BoundContext {
            m,
            big_m,
            gamma_low,
            gamma_up,
            c_w: (big_m + 1.0) * gamma_up / ((m + 1.0) * gamma_low),
            delta_min,
            delta_max,
            c_f: dependence_bound_constant(m, big_m, horizon)?,
            horizon,
        })
    }

    pub fn case(&self) -> BoundCase {
        classify(self.delta_min, self.delta_max)
    }

    /// Pointwise consequence of the weighted estimate:
    /// `|V(t)| ≤ C_W ‖x‖ / min{1, t^Δ(t)}`.
    pub fn pointwise_bound(&self, norm: f64, t: f64, delta_t: f64) -> f64 {
        self.c_w * norm / 1f64.min(t.powf(delta_t))
    }

    /// Case-wise envelope for `|V(t)|`, `t > 0`.
    pub fn envelope(&self, norm: f64, t: f64) -> f64 {
        let base = self.c_w * norm;
        match self.case() {
            BoundCase::A => base * 1f64.max(self.horizon.powf(self.big_m - self.m)),
            BoundCase::B if t <= 1.0 => base * t.powf(-self.delta_max),
            BoundCase::B => base,
            BoundCase::C if t <= 1.0 => base * t.powf(-self.delta_max),
            BoundCase::C => base * t.powf(-self.delta_min),
        }
    }
}

fn context_note(ctx: &BoundContext) -> String {
    format!(
        "m = {}, M = {}, C_W = {}, delta = [{}, {}], case {:?}",
        ctx.m,
        ctx.big_m,
        ctx.c_w,
        ctx.delta_min,
        ctx.delta_max,
        ctx.case()
    )
}

/// Verify `min{1, t^(β−α)} |V(t)| ≤ C_W ‖x‖_{C¹}` at every `t` in `ts`
/// (at `t = 0` the left side is `|ẋ(0)|`).
pub fn check_weighted_bound(
    x: &Trajectory,
    alpha: &ExponentSchedule,
    beta: &ExponentSchedule,
    ts: &[f64],
    spec: &QuadratureSpec,
) -> Result<VerificationReport> {
    check_horizons(x, alpha, beta)?;
    let ctx = BoundContext::new(alpha, beta)?;
    let rhs = ctx.c_w * x.c1_norm()?.c1;
    let mut check = CheckBuilder::new("weighted_inequality");
    let grid = velocity_grid(x, alpha, beta, ts, spec);
    for p in &grid.points {
        let lhs = if p.t == 0.0 {
            p.value.abs()
        } else {
            match (alpha.at(p.t), beta.at(p.t)) {
                (Ok(a), Ok(b)) => 1f64.min(p.t.powf(b - a)) * p.value.abs(),
                (Err(e), _) | (_, Err(e)) => {
                    check.error(p.t, &e);
                    continue;
                }
            }
        };
        let slack = rhs - lhs;
        check.observe(p.t, slack, slack >= -SLACK_TOL * rhs);
    }
    for (t, e) in &grid.failures {
        check.error(*t, e);
    }
    check.note(format!("rhs = {rhs}"));
    check.note(context_note(&ctx));
    Ok(VerificationReport::new("weighted-bound", vec![check.finish()], *spec))
}

/// Verify `|V(t)| ≤ envelope(t)` for the configuration's case, `t > 0`.
pub fn check_case_envelopes(
    x: &Trajectory,
    alpha: &ExponentSchedule,
    beta: &ExponentSchedule,
    ts: &[f64],
    spec: &QuadratureSpec,
) -> Result<VerificationReport> {
    check_horizons(x, alpha, beta)?;
    let ctx = BoundContext::new(alpha, beta)?;
    let norm = x.c1_norm()?.c1;
    let mut check = CheckBuilder::new(format!("case_{:?}_envelope", ctx.case()));
    let positive: Vec<f64> = ts.iter().copied().filter(|&t| t > 0.0).collect();
    if positive.len() != ts.len() {
        check.note("t = 0 skipped: envelopes are stated for t > 0");
    }
    let grid = velocity_grid(x, alpha, beta, &positive, spec);
    for p in &grid.points {
        let env = ctx.envelope(norm, p.t);
        let slack = env - p.value.abs();
        check.observe(p.t, slack, slack >= -SLACK_TOL * env);
    }
    for (t, e) in &grid.failures {
        check.error(*t, e);
    }
    check.note(context_note(&ctx));
    Ok(VerificationReport::new("envelopes", vec![check.finish()], *spec))
}
