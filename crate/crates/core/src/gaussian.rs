//! Closed-form trimmed Kolmogorov distances from `N(mu, sigma²)` to `N(0, 1)`.
//!
//! Only the location family (`sigma = 1`) and the scale family (`mu = 0`)
//! have closed forms.

use serde::Serialize;

use crate::error::{invalid, Result, TrimError};
use crate::normal::cdf as phi;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `sigma = 1`, `mu ≠ 0`.
    LocationShift,
    /// `mu = 0`, `sigma < 1`.
    ScaleBelowOne,
    /// `mu = 0`, `1 ≤ sigma ≤ 1 / (1 - alpha)`: distance zero.
    ScaleInBand,
    /// `mu = 0`, `sigma > 1 / (1 - alpha)`.
    ScaleAboveBand,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::LocationShift => "LocationShift",
            Regime::ScaleBelowOne => "ScaleBelowOne",
            Regime::ScaleInBand => "ScaleInBand",
            Regime::ScaleAboveBand => "ScaleAboveBand",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianCase {
    pub mu: f64,
    pub sigma: f64,
    pub alpha: f64,
    pub regime: Regime,
    /// Location shift: the point where `G` attains its extremum.
    /// Scale regimes: `Φ(x_a)`, the left end of the interval where the
    /// density ratio crosses `1 / (1 - alpha)`.
    pub t_a: Option<f64>,
    /// Scale regimes: `Φ(x_b)`.
    pub t_b: Option<f64>,
    /// `sqrt(8 |sigma² - 1| |log(sigma (1 - alpha))|)` in the scale regimes.
    pub delta: Option<f64>,
}

fn classify(mu: f64, sigma: f64, alpha: f64) -> Result<Regime> {
    if !mu.is_finite() || !sigma.is_finite() || sigma <= 0.0 {
        return invalid(format!("need finite mu and sigma > 0, got mu = {mu}, sigma = {sigma}"));
    }
    if !(0.0..1.0).contains(&alpha) {
        return invalid(format!("alpha = {alpha} must lie in [0, 1)"));
    }
    if mu != 0.0 {
        if sigma != 1.0 {
            return Err(TrimError::UnsupportedCase(format!(
                "no closed form for mu = {mu} together with sigma = {sigma}"
            )));
        }
        return Ok(Regime::LocationShift);
    }
    Ok(if sigma < 1.0 {
        Regime::ScaleBelowOne
    } else if sigma <= 1.0 / (1.0 - alpha) {
        Regime::ScaleInBand
    } else {
        Regime::ScaleAboveBand
    })
}

/// `d_K(R_α(N(mu, sigma²)), N(0, 1))` with its regime.
pub fn gaussian_trimmed_distance(mu: f64, sigma: f64, alpha: f64) -> Result<(f64, GaussianCase)> {
    let regime = classify(mu, sigma, alpha)?;
    let lip = 1.0 / (1.0 - alpha);
    let log_keep = (1.0 - alpha).ln();
    let mut case = GaussianCase { mu, sigma, alpha, regime, t_a: None, t_b: None, delta: None };
    let delta = || (8.0 * (sigma * sigma - 1.0).abs() * (sigma * (1.0 - alpha)).ln().abs()).sqrt();
    let distance = match regime {
        Regime::LocationShift => {
            let m = mu.abs();
            let x0 = -m / 2.0 + log_keep / m;
            // For mu > 0, G rises up to Φ(x0); for mu < 0 it falls down to
            // the mirrored point.
            case.t_a = Some(if mu > 0.0 { phi(x0) } else { phi(-x0) });
            phi(m / 2.0 + log_keep / m) - lip * phi(x0)
        }
        Regime::ScaleBelowOne => {
            let d = delta();
            let s = 1.0 - sigma * sigma;
            let x_b = d / 2.0 / s;
            case.delta = Some(d);
            case.t_a = Some(phi(-x_b));
            case.t_b = Some(phi(x_b));
            phi(-sigma * x_b) - lip * phi(-x_b)
        }
        Regime::ScaleInBand => {
            case.delta = Some(delta());
            0.0
        }
        Regime::ScaleAboveBand => {
            let d = delta();
            let s = sigma * sigma - 1.0;
            let x_b = d / 2.0 / s;
            case.delta = Some(d);
            case.t_a = Some(phi(-x_b));
            case.t_b = Some(phi(x_b));
            phi(sigma * x_b) - lip * (phi(x_b) - alpha / 2.0)
        }
    };
    Ok((distance.max(0.0), case))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values evaluated with mpmath at 30 digits.
    const REFERENCE: [(f64, f64, f64, f64); 7] = [
        (1.0, 1.0, 0.1, 0.350_701_359_609_462_98),
        (0.0, 0.5, 0.1, 0.152_533_989_621_759_49),
        (0.0, 2.5, 0.25, 0.139_135_239_760_211_84),
        (0.5, 1.0, 0.05, 0.177_334_827_471_703_22),
        (-2.0, 1.0, 0.25, 0.635_585_359_265_385_4),
        (0.0, 0.8, 0.05, 0.047_455_008_497_781_632),
        (0.0, 1.5, 0.1, 0.066_441_400_106_145_48),
    ];

    #[test]
    fn reference_values() {
        for (mu, sigma, alpha, want) in REFERENCE {
            let (d, _) = gaussian_trimmed_distance(mu, sigma, alpha).unwrap();
            assert!((d - want).abs() < 1e-13, "({mu}, {sigma}, {alpha}): {d} vs {want}");
        }
    }

    #[test]
    fn zero_band() {
        let (d, c) = gaussian_trimmed_distance(0.0, 1.0, 0.1).unwrap();
        assert_eq!((d, c.regime), (0.0, Regime::ScaleInBand));
        let (d, c) = gaussian_trimmed_distance(0.0, 1.05, 0.1).unwrap();
        assert_eq!((d, c.regime), (0.0, Regime::ScaleInBand));
    }

    #[test]
    fn location_optimizer() {
        let (_, c) = gaussian_trimmed_distance(1.0, 1.0, 0.1).unwrap();
        assert!((c.t_a.unwrap() - 0.272_469_740_081_041_74).abs() < 1e-14);
        assert_eq!(c.t_b, None);
        let (_, c) = gaussian_trimmed_distance(-1.0, 1.0, 0.1).unwrap();
        assert!((c.t_a.unwrap() - (1.0 - 0.272_469_740_081_041_74)).abs() < 1e-14);
    }

    #[test]
    fn errors() {
        assert_eq!(gaussian_trimmed_distance(1.0, 2.0, 0.1).unwrap_err().kind(), "UnsupportedCase");
        assert_eq!(gaussian_trimmed_distance(0.0, 0.0, 0.1).unwrap_err().kind(), "InvalidInput");
        assert_eq!(gaussian_trimmed_distance(0.0, -1.0, 0.1).unwrap_err().kind(), "InvalidInput");
        assert_eq!(gaussian_trimmed_distance(0.0, 1.0, 1.0).unwrap_err().kind(), "InvalidInput");
    }

    #[test]
    fn symmetric_in_mu() {
        for mu in [0.1, 0.5, 1.0, 3.0] {
            for alpha in [0.0, 0.1, 0.4] {
                let a = gaussian_trimmed_distance(mu, 1.0, alpha).unwrap().0;
                let b = gaussian_trimmed_distance(-mu, 1.0, alpha).unwrap().0;
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn monotone_in_alpha_and_mu() {
        for (mu, sigma) in [(1.0, 1.0), (0.0, 0.6), (0.0, 3.0), (-0.7, 1.0)] {
            let mut prev = f64::INFINITY;
            for k in 0..=95 {
                let d = gaussian_trimmed_distance(mu, sigma, 0.01 * k as f64).unwrap().0;
                assert!(d <= prev + 1e-15, "({mu}, {sigma}) at alpha {}", 0.01 * k as f64);
                prev = d;
            }
        }
        for alpha in [0.0, 0.1, 0.3] {
            let mut prev = 0.0;
            for k in 1..=60 {
                let d = gaussian_trimmed_distance(0.05 * k as f64, 1.0, alpha).unwrap().0;
                assert!(d >= prev - 1e-15);
                prev = d;
            }
        }
    }

    #[test]
    fn continuous_at_band_edges() {
        for alpha in [0.05, 0.1, 0.3] {
            let edge = 1.0 / (1.0 - alpha);
            let (d, c) = gaussian_trimmed_distance(0.0, edge + 1e-6, alpha).unwrap();
            assert_eq!(c.regime, Regime::ScaleAboveBand);
            assert!(d <= 1e-3);
            let (d, c) = gaussian_trimmed_distance(0.0, 1.0 - 1e-6, alpha).unwrap();
            assert_eq!(c.regime, Regime::ScaleBelowOne);
            assert!(d <= 1e-3, "{d}");
        }
    }

    #[test]
    fn delta_is_real_in_scale_regimes() {
        for sigma in [0.3, 0.9, 1.02, 1.5, 4.0] {
            let (_, c) = gaussian_trimmed_distance(0.0, sigma, 0.1).unwrap();
            let d = c.delta.unwrap();
            assert!(d.is_finite() && d >= 0.0);
        }
    }

    #[test]
    fn alpha_zero_is_classical_ks() {
        // With no trimming the location-shift distance is 2Φ(|mu|/2) - 1.
        for mu in [0.3, 1.0, 2.5] {
            let (d, _) = gaussian_trimmed_distance(mu, 1.0, 0.0).unwrap();
            assert!((d - (2.0 * phi(mu / 2.0) - 1.0)).abs() < 1e-15);
        }
    }
}
