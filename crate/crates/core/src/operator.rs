//! The memory-weighted velocity `V_{α,β}[x](t) = A(t)·I(t)` with
//!
//! ```text
//! A(t) = (β+1) Γ(β) / (t^(β+1) Γ(α)),   I(t) = ∫₀ᵗ u^(α−1) [x(t) − x(t−u)] du
//! ```
//!
//! evaluated at `α = α(t)`, `β = β(t)`, and `V(0) = ẋ(0)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel;
use crate::quadrature::{integrate_singular, QuadratureSpec};
use crate::schedule::ExponentSchedule;
use crate::specfun::gamma;
use crate::trajectory::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvaluationBreakdown {
    pub t: f64,
    /// `A(t)`; 1 at `t = 0` by convention.
    pub coefficient: f64,
    /// `I(t)`; `ẋ(0)` at `t = 0` by convention.
    pub integral: f64,
    /// `V = A·I`.
    pub value: f64,
    pub quad_err: f64,
    /// Set at `t = 0`, where `A` and `I` are not defined.
    pub degenerate: bool,
}

pub(crate) fn check_horizons(x: &Trajectory, alpha: &ExponentSchedule, beta: &ExponentSchedule) -> Result<()> {
    let h = x.horizon();
    if alpha.horizon() != h || beta.horizon() != h {
        return Err(Error::Config(format!(
            "horizon mismatch: trajectory {h}, alpha {}, beta {}",
            alpha.horizon(),
            beta.horizon()
        )));
    }
    Ok(())
}

/// `V_{α,β}[x](t)` for `t ∈ [0, T]`.
pub fn velocity(
    x: &Trajectory,
    alpha: &ExponentSchedule,
    beta: &ExponentSchedule,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<EvaluationBreakdown> {
    check_horizons(x, alpha, beta)?;
    if t == 0.0 {
        let v = x.xdot_at(0.0)?;
        return Ok(EvaluationBreakdown {
            t,
            coefficient: 1.0,
            integral: v,
            value: v,
            quad_err: 0.0,
            degenerate: true,
        });
    }
    let a = alpha.at(t)?;
    let coefficient = 1.0 / (gamma(a)? * kernel::denominator(beta, t)?);
    let xt = x.x_at(t)?;
    let integral = integrate_singular(|u| Ok(xt - x.x_at(t - u)?), a, t, spec)?;
    Ok(EvaluationBreakdown {
        t,
        coefficient,
        integral: integral.value,
        value: coefficient * integral.value,
        quad_err: integral.err_estimate,
        degenerate: false,
    })
}

#[derive(Debug, Default)]
pub struct GridEvaluation {
    pub points: Vec<EvaluationBreakdown>,
    /// Times whose evaluation failed, in input order.
    pub failures: Vec<(f64, Error)>,
}

/// [`velocity`] at every time in `ts`, evaluated in parallel. Failures are
/// collected rather than aborting the sweep.
pub fn velocity_grid(
    x: &Trajectory,
    alpha: &ExponentSchedule,
    beta: &ExponentSchedule,
    ts: &[f64],
    spec: &QuadratureSpec,
) -> GridEvaluation {
    let results: Vec<(f64, Result<EvaluationBreakdown>)> = ts
        .par_iter()
        .map(|&t| (t, velocity(x, alpha, beta, t, spec)))
        .collect();
    let mut out = GridEvaluation::default();
    for (t, r) in results {
        match r {
            Ok(b) => out.points.push(b),
            Err(e) => out.failures.push((t, e)),
        }
    }
    out
}
