//! Weakly singular integrals `∫₀ᵗ u^(a-1) g(u) du`, `0 < a ≤ 1`.
//!
//! The default scheme substitutes `u = t·s` and integrates `s^(a-1) g(t·s)`
//! with a Gauss–Jacobi rule whose weight absorbs the singularity. The graded
//! scheme maps `u = t·(v/N)^q` and applies Gauss–Legendre on each unit panel
//! in `v`; with `q·a ≥ 1` the transformed integrand is bounded.

mod rules;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use rules::{jacobi, legendre, Rule};

/// Largest Jacobi rule the ladder will build.
pub const MAX_JACOBI_ORDER: usize = 256;
/// Largest panel count the ladder will try.
pub const MAX_PANELS: usize = 4096;
/// Nodes per panel once the ladder falls back to the graded scheme.
pub const FALLBACK_NODES: usize = 16;

pub const ORACLE_PANELS: usize = 512;
pub const ORACLE_NODES: usize = 16;

// Differences below this many ulps of the absolute integrand mass are
// treated as converged: the rules agree to rounding.
const ROUNDOFF_ULPS: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Jacobi,
    GradedComposite,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Jacobi => "jacobi",
            Scheme::GradedComposite => "graded_composite",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jacobi" => Ok(Scheme::Jacobi),
            "graded_composite" | "graded" => Ok(Scheme::GradedComposite),
            other => Err(Error::Config(format!(
                "unknown quadrature scheme `{other}` (expected jacobi or graded_composite)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    /// Jacobi rule size, or nodes per panel for the graded scheme.
    pub order: usize,
    pub panels: usize,
    /// `q` in `u = t·(v/N)^q`; `None` picks `max(2, 2/a)`.
    pub grading_exponent: Option<f64>,
    pub target_rel_err: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            scheme: Scheme::Jacobi,
            order: 64,
            panels: 32,
            grading_exponent: None,
            target_rel_err: 1e-10,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.order < 4 {
            return Err(Error::Config(format!("quadrature order must be at least 4, got {}", self.order)));
        }
        if self.panels == 0 {
            return Err(Error::Config("panel count must be positive".into()));
        }
        if let Some(q) = self.grading_exponent {
            if !(q.is_finite() && q >= 1.0) {
                return Err(Error::Config(format!("grading exponent must be ≥ 1, got {q}")));
            }
        }
        if !(1e-14..=1e-3).contains(&self.target_rel_err) {
            return Err(Error::Config(format!(
                "target relative error must lie in [1e-14, 1e-3], got {}",
                self.target_rel_err
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub err_estimate: f64,
}

// One rule application: the integral and Σ|w·g| on the same scale.
#[derive(Clone, Copy)]
struct Sum {
    value: f64,
    abs_mass: f64,
}

fn check_args(a: f64, t: f64) -> Result<()> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::domain(format!("singularity exponent must lie in (0, 1], got {a}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("upper limit must be positive, got {t}")));
    }
    Ok(())
}

fn default_grading(a: f64) -> f64 {
    2f64.max(2.0 / a)
}

fn jacobi_sum<G>(g: &G, a: f64, t: f64, n: usize) -> Result<Sum>
where
    G: Fn(f64) -> Result<f64>,
{
    let rule = rules::jacobi(n, a)?;
    let (mut value, mut abs_mass) = (0.0, 0.0);
    for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
        let term = w * g(t * s)?;
        value += term;
        abs_mass += term.abs();
    }
    let scale = t.powf(a);
    Ok(Sum {
        value: scale * value,
        abs_mass: scale * abs_mass,
    })
}

// ∫₀ᵗ u^(a-1) g(u) du with u = t r^q, r = v/N:
//   = (q t^a / N) Σ_panels ∫ r^(qa-1) g(t r^q) dv
fn graded_sum<G>(g: &G, a: f64, t: f64, panels: usize, nodes: usize, q: f64) -> Result<Sum>
where
    G: Fn(f64) -> Result<f64>,
{
    let rule = rules::legendre(nodes);
    let nf = panels as f64;
    let p = q * a - 1.0;
    let (mut value, mut abs_mass) = (0.0, 0.0);
    for k in 0..panels {
        let mut panel = 0.0;
        let mut panel_abs = 0.0;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let r = (k as f64 + x) / nf;
            let term = w * r.powf(p) * g(t * r.powf(q))?;
            panel += term;
            panel_abs += term.abs();
        }
        value += panel;
        abs_mass += panel_abs;
    }
    let scale = q * t.powf(a) / nf;
    Ok(Sum {
        value: scale * value,
        abs_mass: scale * abs_mass,
    })
}

fn relative_gap(coarse: Sum, fine: Sum) -> f64 {
    (coarse.value - fine.value).abs() / fine.value.abs().max(1e-300)
}

fn converged(coarse: Sum, fine: Sum, target: f64) -> bool {
    let diff = (coarse.value - fine.value).abs();
    relative_gap(coarse, fine) <= target || diff <= ROUNDOFF_ULPS * f64::EPSILON * fine.abs_mass
}

fn accept(fine: Sum, coarse: Sum) -> Integral {
    Integral {
        value: fine.value,
        err_estimate: relative_gap(coarse, fine),
    }
}

/// `∫₀ᵗ u^(a-1) g(u) du` to `spec.target_rel_err`.
///
/// Escalation: Jacobi order doubling up to [`MAX_JACOBI_ORDER`], then graded
/// panel doubling up to [`MAX_PANELS`], then [`Error::Convergence`].
pub fn integrate_singular<G>(g: G, a: f64, t: f64, spec: &QuadratureSpec) -> Result<Integral>
where
    G: Fn(f64) -> Result<f64>,
{
    check_args(a, t)?;
    spec.validate()?;
    let target = spec.target_rel_err;
    let mut last_estimate = f64::INFINITY;

    let (nodes, mut panels) = match spec.scheme {
        Scheme::Jacobi => {
            let mut n = spec.order.min(MAX_JACOBI_ORDER / 2);
            let mut coarse = jacobi_sum(&g, a, t, n)?;
            loop {
                let fine = jacobi_sum(&g, a, t, 2 * n)?;
                if converged(coarse, fine, target) {
                    return Ok(accept(fine, coarse));
                }
                last_estimate = relative_gap(coarse, fine);
                if 2 * n >= MAX_JACOBI_ORDER {
                    break;
                }
                n *= 2;
                coarse = fine;
            }
            (FALLBACK_NODES, spec.panels)
        }
        Scheme::GradedComposite => (spec.order, spec.panels),
    };

    let q = spec.grading_exponent.unwrap_or_else(|| default_grading(a));
    let mut coarse = graded_sum(&g, a, t, panels, nodes, q)?;
    while 2 * panels <= MAX_PANELS {
        let fine = graded_sum(&g, a, t, 2 * panels, nodes, q)?;
        if converged(coarse, fine, target) {
            return Ok(accept(fine, coarse));
        }
        last_estimate = relative_gap(coarse, fine);
        panels *= 2;
        coarse = fine;
    }
    Err(Error::Convergence {
        estimate: last_estimate,
        target,
    })
}

/// Brute-force reference value: graded rule with `q = max(2, 2/a)`,
/// 512 panels and 16 Legendre nodes each. Valid for `g(0) ≠ 0` as well.
pub fn oracle_integrate<G>(g: G, a: f64, t: f64) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
{
    check_args(a, t)?;
    Ok(graded_sum(&g, a, t, ORACLE_PANELS, ORACLE_NODES, default_grading(a))?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(scheme: Scheme) -> QuadratureSpec {
        QuadratureSpec {
            scheme,
            ..QuadratureSpec::default()
        }
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn examples() {
        let s = QuadratureSpec::default();
        let v = integrate_singular(Ok, 0.5, 1.0, &s).unwrap().value;
        assert!(rel(v, 1.0 / 1.5) < 1e-14);
        let v = integrate_singular(|u| Ok(u * u), 0.5, 1.0, &s).unwrap().value;
        assert!(rel(v, 0.4) < 1e-14);
        let r = integrate_singular(|_| Ok(0.0), 0.3, 2.0, &s).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn oracle_examples() {
        let v = oracle_integrate(Ok, 0.7, 1.0).unwrap();
        assert!((v - 0.5882352941176471).abs() <= 1e-12);
        let v = oracle_integrate(Ok, 1.0, 2.0).unwrap();
        assert!((v - 2.0).abs() <= 1e-12);
        // a = 1/2, g(u) = sin u: ∫₀¹ u^(-1/2) sin u du = Σ (-1)^k / ((2k+1)! (2k+3/2))
        let mut exact = 0.0;
        let mut fact = 1.0;
        for k in 0..15 {
            if k > 0 {
                fact *= (2 * k) as f64 * (2 * k + 1) as f64;
            }
            exact += (-1f64).powi(k) / (fact * (2.0 * k as f64 + 1.5));
        }
        let v = oracle_integrate(|u| Ok(u.sin()), 0.5, 1.0).unwrap();
        assert!((v - exact).abs() <= 1e-10 * exact, "{v} vs {exact}");
        // non-vanishing g: ∫₀ᵗ u^(a-1) du = t^a / a
        for a in [0.1, 0.35, 0.9] {
            let v = oracle_integrate(|_| Ok(1.0), a, 1.7).unwrap();
            assert!(rel(v, 1.7f64.powf(a) / a) < 1e-12);
        }
    }

    #[test]
    fn monomials_are_integrated_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for scheme in [Scheme::Jacobi, Scheme::GradedComposite] {
            let s = spec(scheme);
            for k in 1..=3 {
                for _ in 0..50 {
                    let a: f64 = rng.gen_range(0.05..=1.0);
                    let t: f64 = rng.gen_range(0.01..=5.0);
                    let v = integrate_singular(|u| Ok(u.powi(k)), a, t, &s).unwrap().value;
                    let exact = t.powf(a + k as f64) / (a + k as f64);
                    assert!(rel(v, exact) <= 1e-11, "{scheme} k={k} a={a} t={t}: {v} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn schemes_agree_on_smooth_pool() {
        let pool: [fn(f64) -> f64; 5] = [
            |u| u.sin(),
            |u| 1.0 - (-u).exp(),
            |u| u * (3.0 * u).cos(),
            |u| (1.0 + u).ln(),
            |u| u / (1.0 + u * u),
        ];
        for g in pool {
            for a in [0.1, 0.3, 0.5, 0.8, 1.0] {
                for t in [0.05, 0.7, 2.0] {
                    let j = integrate_singular(|u| Ok(g(u)), a, t, &spec(Scheme::Jacobi)).unwrap();
                    let c = integrate_singular(|u| Ok(g(u)), a, t, &spec(Scheme::GradedComposite)).unwrap();
                    assert!(rel(j.value, c.value) <= 1e-9, "a={a} t={t}: {} vs {}", j.value, c.value);
                }
            }
        }
    }

    #[test]
    fn panel_doubling_never_increases_error() {
        for a in [0.1, 0.5, 0.9] {
            for k in 1..=3 {
                let exact = 1.0 / (a + k as f64);
                let q = default_grading(a);
                let mut prev = f64::INFINITY;
                for panels in [1, 2, 4, 8, 16, 32] {
                    let v = graded_sum(&|u: f64| Ok(u.powi(k)), a, 1.0, panels, 4, q).unwrap().value;
                    let err = (v - exact).abs();
                    assert!(err <= prev + 4.0 * f64::EPSILON * exact, "a={a} k={k} panels={panels}");
                    prev = err;
                }
            }
        }
    }

    #[test]
    fn error_estimate_within_target() {
        let s = QuadratureSpec::default();
        let r = integrate_singular(|u| Ok((1.0 - u).exp() - (1.0f64).exp()), 0.4, 1.0, &s).unwrap();
        assert!(r.err_estimate <= s.target_rel_err);
    }

    #[test]
    fn rejects_bad_arguments() {
        let s = QuadratureSpec::default();
        assert!(matches!(integrate_singular(Ok, 0.0, 1.0, &s), Err(Error::Domain(_))));
        assert!(matches!(integrate_singular(Ok, 1.2, 1.0, &s), Err(Error::Domain(_))));
        assert!(matches!(integrate_singular(Ok, 0.5, 0.0, &s), Err(Error::Domain(_))));
        let bad = QuadratureSpec {
            order: 2,
            ..s
        };
        assert!(matches!(integrate_singular(Ok, 0.5, 1.0, &bad), Err(Error::Config(_))));
        let bad = QuadratureSpec {
            target_rel_err: 1e-16,
            ..s
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn unresolvable_integrand_reports_convergence_failure() {
        // endpoint kink at u = t/√2 limits every rule to algebraic convergence
        let s = QuadratureSpec {
            target_rel_err: 1e-14,
            ..QuadratureSpec::default()
        };
        let r = integrate_singular(|u| Ok((u - 0.5f64.sqrt()).abs().powf(1.5) - 0.5f64.sqrt().powf(1.5)), 0.5, 1.0, &s);
        assert!(matches!(r, Err(Error::Convergence { .. })), "{r:?}");
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in [Scheme::Jacobi, Scheme::GradedComposite] {
            assert_eq!(s.to_string().parse::<Scheme>().unwrap(), s);
        }
        assert!("simpson".parse::<Scheme>().is_err());
    }
}
