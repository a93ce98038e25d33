//! Time-varying memory exponents `ρ : [0, T] → (0, 1]` with certified bounds.

use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::grid::{self, DEFAULT_GRID_POINTS};

/// Values this far above one are treated as float noise and clamped to one.
pub const CEILING_CLAMP_TOL: f64 = 1e-12;

/// Slack allowed when comparing off-grid exponent values against `[m, M]`.
pub const BOUND_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum ScheduleDef {
    Constant(f64),
    Expr(Expr),
}

impl ScheduleDef {
    /// Constant-valued expressions become [`ScheduleDef::Constant`].
    pub fn from_expr(e: Expr) -> Result<Self> {
        if e.is_constant() {
            Ok(ScheduleDef::Constant(e.eval(0.0)?))
        } else {
            Ok(ScheduleDef::Expr(e))
        }
    }

    pub fn parse(source: &str) -> Result<Self> {
        ScheduleDef::from_expr(expr::parse(source)?)
    }

    pub fn to_expr(&self) -> Expr {
        match self {
            ScheduleDef::Constant(v) => Expr::num(*v),
            ScheduleDef::Expr(e) => e.clone(),
        }
    }

    fn raw(&self, t: f64) -> Result<f64> {
        match self {
            ScheduleDef::Constant(v) => Ok(*v),
            ScheduleDef::Expr(e) => e.eval(t),
        }
    }
}

impl fmt::Display for ScheduleDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleDef::Constant(v) => write!(f, "{v}"),
            ScheduleDef::Expr(e) => write!(f, "{e}"),
        }
    }
}

/// A validated memory exponent on `[0, T]` together with its bounds `m ≤ ρ ≤ M`.
#[derive(Debug, Clone)]
pub struct ExponentSchedule {
    def: ScheduleDef,
    horizon: f64,
    lower: f64,
    upper: f64,
    clamp_tol: f64,
}

impl ExponentSchedule {
    /// Validate `def` on `[0, horizon]` and certify its bounds.
    pub fn new(def: ScheduleDef, horizon: f64) -> Result<Self> {
        Self::with_clamp_tolerance(def, horizon, CEILING_CLAMP_TOL)
    }

    pub fn constant(value: f64, horizon: f64) -> Result<Self> {
        Self::new(ScheduleDef::Constant(value), horizon)
    }

    pub fn parse(source: &str, horizon: f64) -> Result<Self> {
        Self::new(ScheduleDef::parse(source)?, horizon)
    }

    /// Like [`ExponentSchedule::new`] but clamping overshoot above one of up to
    /// `clamp_tol`.
    pub(crate) fn with_clamp_tolerance(def: ScheduleDef, horizon: f64, clamp_tol: f64) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::domain(format!("horizon must be positive, got {horizon}")));
        }
        let (lo, hi) = match &def {
            ScheduleDef::Constant(v) => (*v, *v),
            ScheduleDef::Expr(e) => {
                let ext = grid::extrema_on(|t| e.eval(t), 0.0, horizon, DEFAULT_GRID_POINTS)?;
                (ext.min, ext.max)
            }
        };
        if !(lo > 0.0) {
            return Err(Error::Range(format!(
                "memory exponent `{def}` reaches {lo} on [0, {horizon}]; must stay in (0, 1]"
            )));
        }
        if hi > 1.0 + clamp_tol {
            return Err(Error::Range(format!(
                "memory exponent `{def}` reaches {hi} on [0, {horizon}]; must stay in (0, 1]"
            )));
        }
        Ok(ExponentSchedule {
            def,
            horizon,
            lower: lo.min(1.0),
            upper: hi.min(1.0),
            clamp_tol,
        })
    }

    /// ρ(t) for `t ∈ [0, T]`.
    pub fn at(&self, t: f64) -> Result<f64> {
        if !(0.0..=self.horizon).contains(&t) {
            return Err(Error::domain(format!(
                "time {t} outside [0, {}]",
                self.horizon
            )));
        }
        let v = self.def.raw(t)?;
        if v > 1.0 && v <= 1.0 + self.clamp_tol {
            return Ok(1.0);
        }
        if !(v > 0.0 && v <= 1.0) {
            return Err(Error::Range(format!(
                "memory exponent `{}` evaluates to {v} at t = {t}",
                self.def
            )));
        }
        Ok(v)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn definition(&self) -> &ScheduleDef {
        &self.def
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.def, ScheduleDef::Constant(_))
    }
}
