//! Gauss rules on `[0, 1]`: Legendre by Newton iteration on the three-term
//! recurrence, Jacobi with weight `s^(a-1)` by Golub-Welsch.
//!
//! Rules are cached per `(n, a)` behind a mutex; readers share `Arc`s.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Nodes in `(0, 1)` ascending, with matching weights.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

const CACHE_LIMIT: usize = 4096;

type Cache = Mutex<HashMap<(usize, u64), Arc<Rule>>>;

fn cached(cache: &'static OnceLock<Cache>, key: (usize, u64), build: impl FnOnce() -> Result<Rule>) -> Result<Arc<Rule>> {
    let cache = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(build()?);
    let mut map = cache.lock().expect("rule cache poisoned");
    if map.len() >= CACHE_LIMIT {
        map.clear();
    }
    map.insert(key, Arc::clone(&rule));
    Ok(rule)
}

/// `n`-point Gauss-Legendre rule on `[0, 1]`.
pub fn legendre(n: usize) -> Arc<Rule> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    cached(&CACHE, (n, 0), || Ok(build_legendre(n))).expect("legendre construction is infallible")
}

fn build_legendre(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x_i > 0 descending with i; mirror into ascending order on [0, 1]
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        nodes[i] = 0.5 * (1.0 - x);
        weights[n - 1 - i] = 0.5 * w;
        weights[i] = 0.5 * w;
    }
    Rule { nodes, weights }
}

/// `n`-point Gauss rule on `[0, 1]` for the weight `s^(a-1)`, `0 < a ≤ 1`.
pub fn jacobi(n: usize, a: f64) -> Result<Arc<Rule>> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    cached(&CACHE, (n, a.to_bits()), || build_jacobi(n, a))
}

fn build_jacobi(n: usize, a: f64) -> Result<Rule> {
    // Jacobi parameters on [-1, 1]: weight (1-x)^0 (1+x)^beta
    let alpha = 0.0;
    let beta = a - 1.0;
    let ab = alpha + beta;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    for k in 0..n {
        let kf = k as f64;
        let a_k = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        diag[k] = 0.5 * (1.0 + a_k);
        if k + 1 < n {
            let j = kf + 1.0;
            let s = 2.0 * j + ab;
            let b2 = 4.0 * j * (j + alpha) * (j + beta) * (j + ab) / (s * s * (s + 1.0) * (s - 1.0));
            off[k] = 0.5 * b2.sqrt();
        }
    }
    let mut first = vec![0.0; n];
    first[0] = 1.0;
    symmetric_tridiagonal_ql(&mut diag, &mut off, &mut first)?;
    let mass = 1.0 / a;
    let mut pairs: Vec<(f64, f64)> = diag
        .into_iter()
        .zip(first)
        .map(|(x, z)| (x, mass * z * z))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(Rule { nodes, weights })
}

// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix
// (diagonal `d`, sub-diagonal `e` with e[i] coupling i and i+1). Rotations are
// applied to the row vector `z`, which ends up holding the first components of
// the normalized eigenvectors.
fn symmetric_tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 60 {
                return Err(Error::Solver("tridiagonal eigensolver did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
