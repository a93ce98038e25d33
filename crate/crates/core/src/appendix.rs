//! Elementary inequalities behind the operator estimates, exposed as
//! `(lhs, rhs)` pairs so callers can inspect slack and sharpness:
//!
//! * `|ln x| ≤ x^(−δ) / (δ e)` on `(0, 1]`, equality at `x = e^(−1/δ)`;
//! * `ln x ≤ x^α₀ / α₀` on `[1, ∞)`;
//! * `u^γ ≤ 1 + u` on `[0, ∞)` for `γ ∈ (0, 1]`.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Inequality {
    LogPower,
    LogGrowth,
    PowerLinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalitySample {
    pub name: Inequality,
    /// `δ`, `α₀` or `γ`.
    pub parameter: f64,
    /// `x` or `u`.
    pub point: f64,
    pub lhs: f64,
    pub rhs: f64,
}

impl InequalitySample {
    /// `lhs ≤ rhs` up to `1e-12·max(1, |rhs|)`.
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + 1e-12 * 1f64.max(self.rhs.abs())
    }

    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// `(|ln x|, x^(−δ)/(δ e))` for `δ > 0`, `0 < x ≤ 1`.
pub fn log_power_bound(delta: f64, x: f64) -> Result<InequalitySample> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::domain(format!("delta must be positive, got {delta}")));
    }
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::domain(format!("x must lie in (0, 1], got {x}")));
    }
    Ok(InequalitySample {
        name: Inequality::LogPower,
        parameter: delta,
        point: x,
        lhs: x.ln().abs(),
        rhs: x.powf(-delta) / (delta * std::f64::consts::E),
    })
}

/// `(ln x, x^α₀/α₀)` for `α₀ > 0`, `x ≥ 1`.
pub fn log_growth_bound(alpha0: f64, x: f64) -> Result<InequalitySample> {
    if !(alpha0 > 0.0 && alpha0.is_finite()) {
        return Err(Error::domain(format!("alpha0 must be positive, got {alpha0}")));
    }
    if !(x >= 1.0 && x.is_finite()) {
        return Err(Error::domain(format!("x must be at least 1, got {x}")));
    }
    Ok(InequalitySample {
        name: Inequality::LogGrowth,
        parameter: alpha0,
        point: x,
        lhs: x.ln(),
        rhs: x.powf(alpha0) / alpha0,
    })
}

/// `(u^γ, 1 + u)` for `γ ∈ (0, 1]`, `u ≥ 0`.
pub fn power_linear_bound(gamma: f64, u: f64) -> Result<InequalitySample> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::domain(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    if !(u >= 0.0 && u.is_finite()) {
        return Err(Error::domain(format!("u must be non-negative, got {u}")));
    }
    Ok(InequalitySample {
        name: Inequality::PowerLinear,
        parameter: gamma,
        point: u,
        lhs: u.powf(gamma),
        rhs: 1.0 + u,
    })
}
