//! Dense-grid extremum search with golden-section refinement.
//!
//! Shared by schedule bound certification, trajectory norms, exponent
//! difference extrema and the error-control sup.

use crate::error::{Error, Result};

/// Default number of uniform grid points.
pub const DEFAULT_GRID_POINTS: usize = 10_000;

const GOLDEN_ITERATIONS: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrema {
    pub min: f64,
    pub argmin: f64,
    pub max: f64,
    pub argmax: f64,
}

/// `n` points evenly spaced over `[lo, hi]`, both endpoints exact.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// `n` points geometrically spaced over `[lo, hi]` with `0 < lo`, endpoints exact.
pub fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    match n {
        0 => Vec::new(),
        1 => vec![hi],
        _ => (0..n)
            .map(|k| match k {
                0 => lo,
                k if k == n - 1 => hi,
                k => (a + (b - a) * k as f64 / (n - 1) as f64).exp(),
            })
            .collect(),
    }
}

/// Extrema of `f` over the sample points `xs` (sorted ascending), refined by a
/// golden-section search in the two cells adjacent to each grid extremum.
pub fn refined_extrema<F>(f: F, xs: &[f64]) -> Result<Extrema>
where
    F: Fn(f64) -> Result<f64>,
{
    if xs.is_empty() {
        return Err(Error::domain("empty grid"));
    }
    let values = xs.iter().map(|&x| f(x)).collect::<Result<Vec<f64>>>()?;
    let (mut imin, mut imax) = (0, 0);
    for (i, &v) in values.iter().enumerate() {
        if v < values[imin] {
            imin = i;
        }
        if v > values[imax] {
            imax = i;
        }
    }
    let bracket = |i: usize| (xs[i.saturating_sub(1)], xs[(i + 1).min(xs.len() - 1)]);

    let (lo, hi) = bracket(imax);
    let (argmax, max) = golden_max(&f, lo, hi, xs[imax], values[imax])?;
    let neg = |x: f64| f(x).map(|v| -v);
    let (lo, hi) = bracket(imin);
    let (argmin, negmin) = golden_max(&neg, lo, hi, xs[imin], -values[imin])?;
    Ok(Extrema {
        min: -negmin,
        argmin,
        max,
        argmax,
    })
}

/// Extrema over `[lo, hi]` on a uniform grid of `n` points plus refinement.
pub fn extrema_on<F>(f: F, lo: f64, hi: f64, n: usize) -> Result<Extrema>
where
    F: Fn(f64) -> Result<f64>,
{
    refined_extrema(f, &linspace(lo, hi, n))
}

// Golden-section maximization on [lo, hi]; never returns less than the seed.
fn golden_max<F>(f: &F, lo: f64, hi: f64, seed_x: f64, seed_v: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut best = (seed_x, seed_v);
    if hi <= lo {
        return Ok(best);
    }
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..GOLDEN_ITERATIONS {
        if fc > best.1 {
            best = (c, fc);
        }
        if fd > best.1 {
            best = (d, fd);
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d)?;
        }
        if (b - a) <= 1e-15 * (a.abs() + b.abs()).max(f64::MIN_POSITIVE) {
            break;
        }
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    Ok(best)
}
