//! Power-law memory kernel `K_ρ(t,τ) = (t−τ)^(ρ(t)−1) / Γ(ρ(t))`, its total
//! mass and the elapsed-time denominator, all in closed form.

use crate::error::{Error, Result};
use crate::schedule::ExponentSchedule;
use crate::specfun::gamma;

fn check_time(rho: &ExponentSchedule, t: f64, what: &str) -> Result<()> {
    if (0.0..=rho.horizon()).contains(&t) {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} = {t} outside [0, {}]", rho.horizon())))
    }
}

fn check_positive_time(rho: &ExponentSchedule, t: f64) -> Result<()> {
    if t > 0.0 && t <= rho.horizon() {
        Ok(())
    } else {
        Err(Error::domain(format!("t = {t} outside (0, {}]", rho.horizon())))
    }
}

/// `K_ρ(t, τ)`; exactly zero for `τ ≥ t`. Unbounded as `τ → t⁻` when `ρ(t) < 1`.
pub fn kernel_value(rho: &ExponentSchedule, t: f64, tau: f64) -> Result<f64> {
    check_time(rho, t, "t")?;
    check_time(rho, tau, "tau")?;
    if tau >= t {
        return Ok(0.0);
    }
    let r = rho.at(t)?;
    Ok(((r - 1.0) * (t - tau).ln()).exp() / gamma(r)?)
}

/// `∫₀ᵗ K_ρ(t,τ) dτ = t^ρ(t) / Γ(ρ(t) + 1)`.
pub fn kernel_mass(rho: &ExponentSchedule, t: f64) -> Result<f64> {
    check_positive_time(rho, t)?;
    let r = rho.at(t)?;
    Ok((r * t.ln()).exp() / gamma(r + 1.0)?)
}

/// `D_β(t) = ∫₀ᵗ K_β(t,τ)(t−τ) dτ = t^(β+1) / ((β+1) Γ(β))`.
pub fn denominator(beta: &ExponentSchedule, t: f64) -> Result<f64> {
    check_positive_time(beta, t)?;
    let b = beta.at(t)?;
    Ok(((b + 1.0) * t.ln()).exp() / ((b + 1.0) * gamma(b)?))
}
