//! Best uniform approximation of a nondecreasing `f` by `L`-Lipschitz
//! functions with `h(0) = 0` and `h(1) = 1`.

use crate::envelopes::BoxBounds;
use crate::error::{invalid, Result};
use crate::grid::{sup_norm_distance, GridFunction};
use crate::monotone_box::{best_monotone_box, rep1_expressions, OptimizerSets};

#[derive(Debug, Clone)]
pub struct BoxLipResult {
    /// `f̃_L = clamp(γ_L, 1 - L, 0) + L·x`.
    pub approximant: GridFunction,
    /// `‖f - f̃_L‖`.
    pub distance: f64,
    /// `γ_L = (γ_{L,1} + γ_{L,2}) / 2`.
    pub gamma_mid: GridFunction,
    pub lip: f64,
}

/// The three expressions of the distance for continuous `f`, their spread
/// and the optimizer sets.
#[derive(Debug, Clone)]
pub struct LipOptimizerReport {
    pub distance: f64,
    /// Envelope form: third term `(γ_{L,2} - γ_{L,1}) / 2` on `{1 - L ≤ γ_L ≤ 0}`.
    pub alter: f64,
    /// Pair form: third term over admissible pairs `y ≤ x`.
    pub alter2: f64,
    /// [`minvalue`].
    pub minvalue: f64,
    /// Largest pairwise difference among `distance`, `alter`, `alter2`, `minvalue`.
    pub max_discrepancy: f64,
    pub sets: OptimizerSets,
}

fn check_input(f: &GridFunction, lip: f64) -> Result<()> {
    if !lip.is_finite() || lip < 1.0 {
        return invalid(format!("Lipschitz constant must be at least 1, got {lip}"));
    }
    if !f.is_nondecreasing() {
        return invalid("f must be nondecreasing");
    }
    if f.min_value() < 0.0 || f.max_value() > 1.0 {
        return invalid("f must take values in [0, 1]");
    }
    Ok(())
}

/// Best approximation of `f` among nondecreasing `L`-Lipschitz `h` with
/// `h(0) = 0`, `h(1) = 1`.
pub fn best_lipschitz_box(f: &GridFunction, lip: f64) -> Result<BoxLipResult> {
    check_input(f, lip)?;
    let g = f.add_linear(-lip);
    let boxed = best_monotone_box(&g, BoxBounds::lipschitz(lip));
    // f nondecreasing means G only jumps upwards, which the running
    // extrema absorb.
    let gamma_mid = boxed.envelopes.mid.into_continuous();
    let approximant = boxed.approximant.into_continuous().add_linear(lip).pin_endpoints(0.0, 1.0).monotone_repair(1.0);
    let distance = sup_norm_distance(f, &approximant);
    Ok(BoxLipResult { approximant, distance, gamma_mid, lip })
}

/// `max(f_{L,2}(0), 1 - f_{L,1}(1), sup_{y ≤ x} (f(x) - f(y) - L(x - y)) / 2)`.
///
/// With `G = f - L·x` the first two terms are `sup G` and `1 - L - inf G`,
/// and the last is half the largest rise of `G`, found in one left-to-right
/// pass over the node values and right limits.
pub fn minvalue(f: &GridFunction, lip: f64) -> Result<f64> {
    check_input(f, lip)?;
    let samples = f.add_linear(-lip).samples();
    let mut sup = f64::NEG_INFINITY;
    let mut inf = f64::INFINITY;
    let mut rise = 0.0_f64;
    for &(_, v) in &samples {
        inf = inf.min(v);
        sup = sup.max(v);
        rise = rise.max(v - inf);
    }
    Ok(sup.max(1.0 - lip - inf).max(0.5 * rise))
}

/// Optimizer sets for continuous `f`, together with the three expressions
/// of the distance.
pub fn optimizer_sets(f: &GridFunction, lip: f64, tol: f64) -> Result<LipOptimizerReport> {
    check_input(f, lip)?;
    if !f.is_continuous() {
        return invalid("optimizer sets need a continuous f");
    }
    let distance = best_lipschitz_box(f, lip)?.distance;
    let rep = rep1_expressions(&f.add_linear(-lip), BoxBounds::lipschitz(lip), tol)?;
    let minvalue = minvalue(f, lip)?;
    let all = [distance, rep.expr_envelope, rep.expr_pairs, minvalue];
    let hi = all.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = all.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(LipOptimizerReport {
        distance,
        alter: rep.expr_envelope,
        alter2: rep.expr_pairs,
        minvalue,
        max_discrepancy: hi - lo,
        sets: rep.sets,
    })
}
