//! C¹ trajectories `x` on `[0, T]` with symbolic derivative and sup norms.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::expr::{self, BinOp, Expr};
use crate::grid::{self, DEFAULT_GRID_POINTS};

const VALIDATION_POINTS: usize = 1001;
const FD_CHECK_POINTS: usize = 200;
const FD_STEP: f64 = 1e-5;
const FD_REL_TOL: f64 = 1e-6;

/// `‖x‖∞`, `‖ẋ‖∞` and their sum `‖x‖_{C¹}`. `sup_xdot` doubles as the
/// Lipschitz constant of `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C1Norm {
    pub sup_x: f64,
    pub sup_xdot: f64,
    pub c1: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    value: Expr,
    derivative: Expr,
    horizon: f64,
    norm: OnceLock<C1Norm>,
}

impl Trajectory {
    /// Build from an expression, checking that `x` and its symbolic derivative
    /// are finite on `[0, T]` and that the derivative agrees with central
    /// differences.
    pub fn new(value: Expr, horizon: f64) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::domain(format!("horizon must be positive, got {horizon}")));
        }
        let derivative = value.differentiate();
        let tr = Trajectory {
            value,
            derivative,
            horizon,
            norm: OnceLock::new(),
        };
        tr.validate()?;
        Ok(tr)
    }

    pub fn parse(source: &str, horizon: f64) -> Result<Self> {
        Self::new(expr::parse(source)?, horizon)
    }

    /// `c1·x1 + c2·x2` on the shared horizon.
    pub fn linear_combination(c1: f64, x1: &Trajectory, c2: f64, x2: &Trajectory) -> Result<Self> {
        if x1.horizon != x2.horizon {
            return Err(Error::Config("trajectories have different horizons".into()));
        }
        let scaled = |c: f64, e: &Expr| Expr::binary(BinOp::Mul, Expr::num(c), e.clone());
        let value = Expr::binary(BinOp::Add, scaled(c1, &x1.value), scaled(c2, &x2.value));
        Self::new(value, x1.horizon)
    }

    fn validate(&self) -> Result<()> {
        for t in grid::linspace(0.0, self.horizon, VALIDATION_POINTS) {
            self.value.eval(t)?;
            self.derivative.eval(t)?;
        }
        let h = FD_STEP.min(self.horizon / 8.0);
        // keep the stencil well inside [0, T] and away from endpoint singular behaviour
        let lo = (2.0 * h).max(self.horizon / 1000.0);
        let hi = self.horizon - lo;
        if hi <= lo {
            return Ok(());
        }
        for t in grid::linspace(lo, hi, FD_CHECK_POINTS) {
            let exact = self.derivative.eval(t)?;
            let central = |h: f64| -> Result<f64> {
                Ok((self.value.eval(t + h)? - self.value.eval(t - h)?) / (2.0 * h))
            };
            let fd = (4.0 * central(h / 2.0)? - central(h)?) / 3.0;
            let scale = 1f64.max(exact.abs()).max(self.value.eval(t)?.abs());
            if (exact - fd).abs() > FD_REL_TOL * scale {
                return Err(Error::Range(format!(
                    "`{}` is not continuously differentiable near t = {t}: derivative {exact}, difference quotient {fd}",
                    self.value
                )));
            }
        }
        Ok(())
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if (0.0..=self.horizon).contains(&t) {
            Ok(())
        } else {
            Err(Error::domain(format!("time {t} outside [0, {}]", self.horizon)))
        }
    }

    pub fn x_at(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        self.value.eval(t)
    }

    pub fn xdot_at(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        self.derivative.eval(t)
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn value_expr(&self) -> &Expr {
        &self.value
    }

    pub fn derivative_expr(&self) -> &Expr {
        &self.derivative
    }

    /// Grid sup norms (1e4 points plus refinement), computed once.
    pub fn c1_norm(&self) -> Result<C1Norm> {
        if let Some(n) = self.norm.get() {
            return Ok(*n);
        }
        let sup = |e: &Expr| -> Result<f64> {
            let ext = grid::extrema_on(|t| e.eval(t), 0.0, self.horizon, DEFAULT_GRID_POINTS)?;
            Ok(ext.max.abs().max(ext.min.abs()))
        };
        let sup_x = sup(&self.value)?;
        let sup_xdot = sup(&self.derivative)?;
        let n = C1Norm {
            sup_x,
            sup_xdot,
            c1: sup_x + sup_xdot,
        };
        Ok(*self.norm.get_or_init(|| n))
    }

    /// Lipschitz constant `L_x = ‖ẋ‖∞`.
    pub fn lipschitz(&self) -> Result<f64> {
        Ok(self.c1_norm()?.sup_xdot)
    }
}
