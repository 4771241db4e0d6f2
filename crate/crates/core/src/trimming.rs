//! Trimmed Kolmogorov distance between a reference law and the trimmings of
//! another law.

use serde::Serialize;

use crate::distribution::{compose_gamma, DistributionKind, DistributionSpec};
use crate::envelopes::BoxBounds;
use crate::error::{invalid, Result, TrimError};
use crate::grid::{GridFunction, Interp};
use crate::monotone_box::best_monotone_box;

/// Largest contamination level probed by [`min_contamination_level`].
pub const ALPHA_MAX: f64 = 1.0 - 1e-9;

/// Contamination level `alpha` and the slope bound `lip = 1 / (1 - alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrimParams {
    alpha: f64,
    lip: f64,
}

impl TrimParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return invalid(format!("alpha = {alpha} must lie in [0, 1)"));
        }
        Ok(Self { alpha, lip: 1.0 / (1.0 - alpha) })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lip(&self) -> f64 {
        self.lip
    }

    /// `[-alpha / (1 - alpha), 0]`.
    pub fn bounds(&self) -> BoxBounds {
        BoxBounds::lipschitz(self.lip)
    }
}

#[derive(Debug, Clone)]
pub struct TrimResult {
    pub distance: f64,
    /// `h̃_α`, the optimal `h` minus `t / (1 - α)`.
    pub h_tilde: GridFunction,
    /// `h_α = h̃_α + t / (1 - α)`.
    pub h_opt: GridFunction,
    /// `G(t) = Γ(t) - t / (1 - α)`.
    pub g_fun: GridFunction,
    /// `Γ = F0 ∘ F⁻¹`.
    pub gamma: GridFunction,
    pub params: TrimParams,
    /// Grid used for an analytic `F`; `None` for samples.
    pub grid_size: Option<usize>,
    /// Sample size for an empirical `F`.
    pub n: Option<usize>,
}

/// `d_K(F0, R_α(F))` with the optimal trimming.
pub fn trimmed_distance(
    f0: &DistributionSpec,
    f: &DistributionSpec,
    params: TrimParams,
    grid_size: usize,
) -> Result<TrimResult> {
    let gamma = compose_gamma(f0, f, grid_size)?;
    let mut result = trim_gamma(&gamma, params)?;
    match f.kind() {
        DistributionKind::Empirical => result.n = f.sample().map(<[f64]>::len),
        DistributionKind::Analytic => result.grid_size = Some(grid_size),
    }
    Ok(result)
}

/// `min over h ∈ 𝒞_α of ‖h - Γ‖` for a nondecreasing `Γ: [0, 1] → [0, 1]`.
///
/// Subtracting `t / (1 - α)` turns the feasible set into nonincreasing
/// functions with values in `[-α / (1 - α), 0]`, where the best approximation
/// is the clamped midpoint of the running extrema.
pub fn trim_gamma(gamma: &GridFunction, params: TrimParams) -> Result<TrimResult> {
    if !gamma.is_nondecreasing() || gamma.min_value() < 0.0 || gamma.max_value() > 1.0 {
        return invalid("Γ must be nondecreasing with values in [0, 1]");
    }
    let lip = params.lip();
    let g_fun = gamma.add_linear(-lip);
    let boxed = best_monotone_box(&g_fun, params.bounds());
    // G only jumps upwards, so its running extrema and the clamp are continuous.
    let h_tilde = boxed.approximant.into_continuous();
    let h_opt = h_tilde.add_linear(lip).pin_endpoints(0.0, 1.0).monotone_repair(1.0);
    Ok(TrimResult {
        distance: boxed.distance,
        h_tilde,
        h_opt,
        g_fun,
        gamma: gamma.clone(),
        params,
        grid_size: None,
        n: None,
    })
}

/// `(1 - alpha) F0 + alpha Q`.
pub fn mixture_cdf(f0: &DistributionSpec, q: &DistributionSpec, alpha: f64) -> Result<DistributionSpec> {
    DistributionSpec::mixture(f0.clone(), q.clone(), alpha)
}

/// Independent evaluation for a step `Γ` with `n` equal cells.
///
/// Over `h` in `𝒞_α` the error on the cell `((i-1)/n, i/n]` is
/// `max(F_{0,i} - h_{i-1}, h_i - F_{0,i})`, so only the node values matter.
/// For a given `ε` the node values that keep every error below `ε` form an
/// interval at each step, propagated forward; the smallest feasible `ε` is
/// found by bisection to `1e-12`.
pub fn oracle_distance(gamma: &GridFunction, params: TrimParams) -> Result<f64> {
    if gamma.interp() != Interp::StepLeft {
        return invalid("the oracle needs a step function from a sample");
    }
    let nodes = gamma.nodes();
    let n = nodes.len() - 1;
    let uniform = nodes.iter().enumerate().all(|(i, &t)| (t - i as f64 / n as f64).abs() <= 1e-15);
    if !uniform {
        return invalid("the oracle needs jumps at i / n");
    }
    let heights = &gamma.values()[1..];
    let inc = params.lip() / n as f64;
    let feasible = |eps: f64| {
        let (mut lo, mut hi) = (0.0_f64, 0.0_f64);
        if lo < heights[0] - eps {
            return false;
        }
        for i in 0..n {
            hi = (hi + inc).min(heights[i] + eps);
            if i + 1 < n {
                lo = lo.max(heights[i + 1] - eps);
            }
            if lo > hi {
                return false;
            }
        }
        lo <= 1.0 && 1.0 <= hi + 1e-12
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    if feasible(0.0) {
        return Ok(0.0);
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaMinResult {
    pub alpha_hat: f64,
    pub iterations: usize,
    /// Distance at `alpha_hat`.
    pub distance: f64,
}

/// Smallest `α` with `d_K(F0, R_α(F)) ≤ threshold`, by bisection to `1e-6`
/// (the distance is nonincreasing in `α`). The returned value is the upper
/// end of the final bracket, so the threshold holds there.
pub fn min_contamination_level(
    f0: &DistributionSpec,
    f: &DistributionSpec,
    threshold: f64,
    grid_size: usize,
) -> Result<AlphaMinResult> {
    if threshold.is_nan() || threshold < 0.0 {
        return invalid(format!("threshold must be nonnegative, got {threshold}"));
    }
    let gamma = compose_gamma(f0, f, grid_size)?;
    let dist = |alpha: f64| trim_gamma(&gamma, TrimParams::new(alpha)?).map(|r| r.distance);
    let at_zero = dist(0.0)?;
    if at_zero <= threshold {
        return Ok(AlphaMinResult { alpha_hat: 0.0, iterations: 0, distance: at_zero });
    }
    let mut d_hi = dist(ALPHA_MAX)?;
    if d_hi > threshold {
        return Err(TrimError::NotAttained { threshold, alpha_max: ALPHA_MAX });
    }
    let (mut lo, mut hi) = (0.0, ALPHA_MAX);
    let mut iterations = 0;
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        let d = dist(mid)?;
        if d <= threshold {
            hi = mid;
            d_hi = d;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Ok(AlphaMinResult { alpha_hat: hi, iterations, distance: d_hi })
}
