//! Distributions on the real line and the composed quantile `Γ = F0 ∘ F⁻¹`.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result, TrimError};
use crate::grid::{uniform_nodes, GridFunction};
use crate::normal;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    Analytic,
    Empirical,
}

#[derive(Clone)]
enum Law {
    Normal { mu: f64, sigma: f64 },
    Uniform { a: f64, b: f64 },
    Mixture { base: Box<DistributionSpec>, other: Box<DistributionSpec>, alpha: f64 },
    Custom { name: String, cdf: RealFn, quantile: RealFn, strictly_increasing: bool, support: (f64, f64) },
    Empirical { sorted: Vec<f64> },
}

/// A distribution given by its CDF and left-continuous quantile function,
/// either in closed form or as the empirical law of a sample.
#[derive(Clone)]
pub struct DistributionSpec {
    law: Law,
}

impl fmt::Debug for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.law {
            Law::Normal { mu, sigma } => write!(f, "Normal({mu}, {sigma})"),
            Law::Uniform { a, b } => write!(f, "Uniform({a}, {b})"),
            Law::Mixture { base, other, alpha } => {
                write!(f, "Mixture({:?}, {:?}, {alpha})", base, other)
            }
            Law::Custom { name, .. } => write!(f, "Custom({name})"),
            Law::Empirical { sorted } => write!(f, "Empirical(n = {})", sorted.len()),
        }
    }
}

/// Empirical distribution of `sample`: right-continuous step CDF with a jump
/// of `1/n` at every observation.
pub fn empirical_cdf(sample: &[f64]) -> Result<DistributionSpec> {
    if sample.is_empty() {
        return invalid("empty sample");
    }
    if sample.iter().any(|x| !x.is_finite()) {
        return invalid("sample contains a non-finite value");
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(DistributionSpec { law: Law::Empirical { sorted } })
}

impl DistributionSpec {
    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() || !sigma.is_finite() || sigma <= 0.0 {
            return invalid(format!("normal({mu}, {sigma}) needs finite mu and sigma > 0"));
        }
        Ok(Self { law: Law::Normal { mu, sigma } })
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || a >= b {
            return invalid(format!("uniform({a}, {b}) needs finite a < b"));
        }
        Ok(Self { law: Law::Uniform { a, b } })
    }

    /// A user-supplied law. `quantile` must be the left-continuous inverse of
    /// `cdf`; `support` is the closed hull of the support (ends may be
    /// infinite). Only laws flagged `strictly_increasing` (continuous and
    /// strictly increasing on the support) can play the role of `F` in
    /// [`compose_gamma`].
    pub fn custom(
        name: impl Into<String>,
        cdf: impl Fn(f64) -> f64 + Send + Sync + 'static,
        quantile: impl Fn(f64) -> f64 + Send + Sync + 'static,
        strictly_increasing: bool,
        support: (f64, f64),
    ) -> Self {
        Self {
            law: Law::Custom {
                name: name.into(),
                cdf: Arc::new(cdf),
                quantile: Arc::new(quantile),
                strictly_increasing,
                support,
            },
        }
    }

    pub(crate) fn mixture(base: DistributionSpec, other: DistributionSpec, alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return invalid(format!("mixture weight alpha = {alpha} must lie in [0, 1)"));
        }
        Ok(Self { law: Law::Mixture { base: Box::new(base), other: Box::new(other), alpha } })
    }

    pub fn kind(&self) -> DistributionKind {
        match self.law {
            Law::Empirical { .. } => DistributionKind::Empirical,
            _ => DistributionKind::Analytic,
        }
    }

    /// Sorted sample for empirical laws.
    pub fn sample(&self) -> Option<&[f64]> {
        match &self.law {
            Law::Empirical { sorted } => Some(sorted),
            _ => None,
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match &self.law {
            Law::Normal { mu, sigma } => normal::cdf((x - mu) / sigma),
            Law::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            Law::Mixture { base, other, alpha } => (1.0 - alpha) * base.cdf(x) + alpha * other.cdf(x),
            Law::Custom { cdf, .. } => cdf(x),
            Law::Empirical { sorted } => {
                let count = sorted.partition_point(|&s| s <= x);
                count as f64 / sorted.len() as f64
            }
        }
    }

    /// `inf{x : cdf(x) ≥ t}`. At `t = 0` this is the lower end of the
    /// support, at `t = 1` the upper end (possibly infinite).
    pub fn quantile(&self, t: f64) -> f64 {
        let (lo, hi) = self.support();
        if t <= 0.0 {
            return lo;
        }
        if t >= 1.0 && !matches!(self.law, Law::Empirical { .. }) {
            return hi;
        }
        match &self.law {
            Law::Normal { mu, sigma } => mu + sigma * normal::quantile(t),
            Law::Uniform { a, b } => a + t * (b - a),
            Law::Mixture { base, other, .. } => {
                let (q1, q2) = (base.quantile(t), other.quantile(t));
                self.bisect_quantile(t, q1.min(q2), q1.max(q2))
            }
            Law::Custom { quantile, .. } => quantile(t),
            Law::Empirical { sorted } => sorted[empirical_rank(sorted.len(), t) - 1],
        }
    }

    // cdf(x) ≥ t for x ≥ hi and cdf(x) < t for x < lo.
    fn bisect_quantile(&self, t: f64, mut lo: f64, mut hi: f64) -> f64 {
        if self.cdf(lo) >= t {
            return lo;
        }
        for _ in 0..200 {
            let mid = lo + 0.5 * (hi - lo);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid) >= t {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// Closed hull of the support.
    pub fn support(&self) -> (f64, f64) {
        match &self.law {
            Law::Normal { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Law::Uniform { a, b } => (*a, *b),
            Law::Mixture { base, other, alpha } => {
                let (a0, b0) = base.support();
                if *alpha == 0.0 {
                    return (a0, b0);
                }
                let (a1, b1) = other.support();
                (a0.min(a1), b0.max(b1))
            }
            Law::Custom { support, .. } => *support,
            Law::Empirical { sorted } => (f64::NEG_INFINITY, sorted[sorted.len() - 1]),
        }
    }

    /// Continuous and strictly increasing on the support hull.
    pub fn is_strictly_increasing(&self) -> bool {
        match &self.law {
            Law::Normal { .. } | Law::Uniform { .. } => true,
            Law::Custom { strictly_increasing, .. } => *strictly_increasing,
            Law::Empirical { .. } => false,
            Law::Mixture { base, other, alpha } => {
                if *alpha == 0.0 {
                    return base.is_strictly_increasing();
                }
                if !(base.is_strictly_increasing() && other.is_strictly_increasing()) {
                    return false;
                }
                // The union of the two supports must have no gap.
                let (a0, b0) = base.support();
                let (a1, b1) = other.support();
                a0 <= b1 && a1 <= b0
            }
        }
    }

    /// Structural equality for closed-form laws (same family, same
    /// parameters). Custom laws never compare equal.
    pub fn same_law(&self, other: &DistributionSpec) -> bool {
        match (&self.law, &other.law) {
            (Law::Normal { mu: m1, sigma: s1 }, Law::Normal { mu: m2, sigma: s2 }) => m1 == m2 && s1 == s2,
            (Law::Uniform { a: a1, b: b1 }, Law::Uniform { a: a2, b: b2 }) => a1 == a2 && b1 == b2,
            (Law::Mixture { base: x0, other: x1, alpha: p }, Law::Mixture { base: y0, other: y1, alpha: q }) => {
                p == q && x0.same_law(y0) && x1.same_law(y1)
            }
            (Law::Empirical { sorted: a }, Law::Empirical { sorted: b }) => a == b,
            _ => false,
        }
    }
}

/// Smallest `k ≥ 1` with `k / n ≥ t`, evaluated with the same floating-point
/// expression the empirical CDF uses.
fn empirical_rank(n: usize, t: f64) -> usize {
    let nf = n as f64;
    let mut k = ((t * nf).ceil() as usize).clamp(1, n);
    while k > 1 && (k - 1) as f64 / nf >= t {
        k -= 1;
    }
    while k < n && (k as f64 / nf) < t {
        k += 1;
    }
    k
}

fn monotone_clamped(values: &mut [f64]) {
    let mut run = 0.0_f64;
    for v in values.iter_mut() {
        run = run.max(v.clamp(0.0, 1.0));
        *v = run;
    }
}

/// `Γ(t) = F0(F⁻¹(t))` on `[0, 1]`.
///
/// For an empirical `f` with `n` points this is exact: a left-continuous step
/// function on the nodes `i / n` with `Γ(0) = 0` and value `F0(x_(i))` on
/// `((i-1)/n, i/n]`. For an analytic `f` (which must be continuous and
/// strictly increasing) `Γ` is sampled on `grid_size` uniform nodes and
/// interpolated linearly, using the support ends at `t = 0` and `t = 1`.
pub fn compose_gamma(f0: &DistributionSpec, f: &DistributionSpec, grid_size: usize) -> Result<GridFunction> {
    if let Some(sorted) = f.sample() {
        let n = sorted.len();
        let mut values = Vec::with_capacity(n + 1);
        values.push(0.0);
        values.extend(sorted.iter().map(|&x| f0.cdf(x)));
        monotone_clamped(&mut values);
        return GridFunction::step_left(uniform_nodes(n + 1), values);
    }
    if !f.is_strictly_increasing() {
        return Err(TrimError::UnsupportedDistribution(format!(
            "{f:?} is not declared continuous and strictly increasing on its support"
        )));
    }
    if grid_size < 2 {
        return invalid("grid_size must be at least 2");
    }
    let nodes = uniform_nodes(grid_size);
    if f0.same_law(f) {
        let values = nodes.clone();
        return GridFunction::linear(nodes, values);
    }
    let mut values: Vec<f64> = nodes.iter().map(|&t| f0.cdf(f.quantile(t))).collect();
    monotone_clamped(&mut values);
    GridFunction::linear(nodes, values)
}
