//! Lipschitz (Pasch-Hausdorff) and monotone (running extremum) envelopes.

use crate::error::{invalid, Result};
use crate::grid::GridFunction;

/// A closed interval `[a, b]` with possibly infinite ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxBounds {
    pub a: f64,
    pub b: f64,
}

impl BoxBounds {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_nan() || b.is_nan() || a > b || a == f64::INFINITY || b == f64::NEG_INFINITY {
            return invalid(format!("box [{a}, {b}] is empty"));
        }
        Ok(Self { a, b })
    }

    pub fn unbounded() -> Self {
        Self { a: f64::NEG_INFINITY, b: f64::INFINITY }
    }

    /// `[1 - L, 0]`, the box that encodes `h(0) = 0`, `h(1) = 1` after
    /// subtracting `L·x`.
    pub fn lipschitz(lip: f64) -> Self {
        Self { a: 1.0 - lip, b: 0.0 }
    }
}

/// Largest `L`-Lipschitz minorant, smallest `L`-Lipschitz majorant and their
/// midpoint.
#[derive(Debug, Clone)]
pub struct LipEnvelopes {
    pub lower: GridFunction,
    pub upper: GridFunction,
    pub mid: GridFunction,
    pub lip: f64,
}

/// `U(x) = sup_{y ≥ x} g(y)`, `L(x) = inf_{y ≤ x} g(y)` and `(U + L) / 2`.
#[derive(Debug, Clone)]
pub struct MonotoneEnvelopes {
    pub upper_env: GridFunction,
    pub lower_env: GridFunction,
    pub mid: GridFunction,
}

fn check_lip(lip: f64) -> Result<()> {
    if !lip.is_finite() || lip < 0.0 {
        return invalid(format!("Lipschitz constant must be finite and nonnegative, got {lip}"));
    }
    Ok(())
}

/// `f_{L,1}(x) = inf_y f(y) + L|x - y|` and `f_{L,2}(x) = sup_y f(y) - L|x - y|`.
///
/// Splitting the infimum at `y = x` turns each envelope into a running
/// extremum of `f ∓ L·y` plus a linear term. For nondecreasing `f` only the
/// `y ≤ x` half matters for the lower envelope and only `y ≥ x` for the
/// upper one.
pub fn pasch_hausdorff(f: &GridFunction, lip: f64) -> Result<LipEnvelopes> {
    check_lip(lip)?;
    let (lower, upper) = if f.is_nondecreasing() {
        let (g1, g2) = gamma_pair(f, lip);
        (g1.add_linear(lip).monotone_repair(f64::INFINITY), g2.add_linear(lip).monotone_repair(f64::INFINITY))
    } else {
        let down = f.add_linear(-lip);
        let up = f.add_linear(lip);
        let lower = down.prefix_inf().add_linear(lip).pointwise_min(&up.suffix_inf().add_linear(-lip));
        let upper = down.suffix_sup().add_linear(lip).pointwise_max(&up.prefix_sup().add_linear(-lip));
        (lower, upper)
    };
    let lower = lower.into_continuous();
    let upper = upper.into_continuous();
    let mid = lower.average(&upper);
    Ok(LipEnvelopes { lower, upper, mid, lip })
}

fn gamma_pair(f: &GridFunction, lip: f64) -> (GridFunction, GridFunction) {
    let shifted = f.add_linear(-lip);
    (shifted.prefix_inf().into_continuous(), shifted.suffix_sup().into_continuous())
}

/// `γ_{L,1}(x) = inf_{y ≤ x} (f(y) - L·y)` and `γ_{L,2}(x) = sup_{y ≥ x} (f(y) - L·y)`
/// for nondecreasing `f`; `γ_{L,j} + L·x` are the Pasch-Hausdorff envelopes.
pub fn gamma_envelopes(f: &GridFunction, lip: f64) -> Result<(GridFunction, GridFunction)> {
    check_lip(lip)?;
    if !f.is_nondecreasing() {
        return invalid("gamma envelopes need a nondecreasing function");
    }
    Ok(gamma_pair(f, lip))
}

pub fn ubhaya_envelopes(g: &GridFunction) -> MonotoneEnvelopes {
    let upper_env = g.suffix_sup();
    let lower_env = g.prefix_inf();
    let mid = upper_env.average(&lower_env);
    MonotoneEnvelopes { upper_env, lower_env, mid }
}

/// Pointwise `max(min(g, b), a)`.
pub fn clamp_box(g: &GridFunction, bounds: BoxBounds) -> GridFunction {
    g.clamp(bounds.a, bounds.b)
}
