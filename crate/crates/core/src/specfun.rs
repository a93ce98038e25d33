//! Gamma function on the bounded real range used by the memory kernels.
//!
//! Arguments are shifted upward with the recurrence `Γ(z) = Γ(z + n) / (z (z+1) ... (z+n-1))`
//! until `z + n ≥ 12`, where the Stirling series with eight Bernoulli terms is accurate
//! to a few ulps. Integer arguments return the exact factorial.

use crate::error::{Error, Result};

/// Largest argument accepted by [`gamma`].
pub const GAMMA_DOMAIN_MAX: f64 = 4.0;

const STIRLING_SHIFT_TARGET: f64 = 12.0;

// B_{2k} / (2k (2k-1)) for k = 1..8
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// An argument of Γ validated against the supported range `(0, 4]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GammaArg(f64);

impl GammaArg {
    pub fn new(z: f64) -> Result<Self> {
        if z.is_finite() && z > 0.0 && z <= GAMMA_DOMAIN_MAX {
            Ok(GammaArg(z))
        } else {
            Err(Error::domain(format!(
                "gamma argument {z} outside (0, {GAMMA_DOMAIN_MAX}]"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Γ(z) for `0 < z ≤ 4`, relative error below 1e-13.
pub fn gamma(z: f64) -> Result<f64> {
    GammaArg::new(z).map(gamma_of)
}

/// Γ on an already validated argument.
pub fn gamma_of(z: GammaArg) -> f64 {
    let z = z.get();
    if z.fract() == 0.0 {
        // 1, 2, 3, 4 -> 0!, 1!, 2!, 3!
        return (1..z as u32).map(f64::from).product();
    }
    let mut w = z;
    let mut product = 1.0;
    while w < STIRLING_SHIFT_TARGET {
        product *= w;
        w += 1.0;
    }
    stirling(w) / product
}

fn stirling(w: f64) -> f64 {
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut power = inv;
    for c in STIRLING_COEFFS {
        series += c * power;
        power *= inv2;
    }
    (2.0 * std::f64::consts::PI).sqrt() * w.powf(w - 0.5) * (-w).exp() * series.exp()
}
