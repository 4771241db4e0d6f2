//! Standard normal CDF and quantile.
//!
//! `Φ` comes from the complementary error function in `libm` (a port of the
//! musl/FreeBSD implementation, accurate to about one ulp). The quantile
//! starts from `statrs`' inverse error function, which is only good to about
//! `1e-10`, and is polished with Newton steps against that `Φ`.

use libm::erfc;
use statrs::function::erf::erfc_inv;

/// Φ(x).
pub fn cdf(x: f64) -> f64 {
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Φ⁻¹(p), with Φ⁻¹(0) = −∞ and Φ⁻¹(1) = +∞.
pub fn quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let mut x = -std::f64::consts::SQRT_2 * erfc_inv(2.0 * p);
    for _ in 0..2 {
        let density = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        if density == 0.0 || !x.is_finite() {
            break;
        }
        x -= (cdf(x) - p) / density;
    }
    x
}
