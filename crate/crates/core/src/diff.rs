//! Directional derivatives of `G ↦ ‖G - Ḡ_{A,B}‖` and of `f ↦ ‖f - f̃_L‖`.

use crate::envelopes::BoxBounds;
use crate::error::{invalid, Result, TrimError};
use crate::grid::GridFunction;
use crate::lipschitz_box::best_lipschitz_box;
use crate::monotone_box::{best_monotone_box, rep1_expressions, OptimizerSets};

#[derive(Debug, Clone)]
pub struct Derivative {
    pub value: f64,
    pub sets: OptimizerSets,
}

fn check_continuous(name: &str, f: &GridFunction) -> Result<()> {
    if !f.is_continuous() {
        return invalid(format!("{name} must be continuous"));
    }
    Ok(())
}

/// `lim r (‖G + J/r - Ḡ_{A,B,r}‖ - ‖G - Ḡ_{A,B}‖)`, equal to
/// `max(max_{T1} J, max_{T2} (-J), max_{T3} (J(x) - J(y)) / 2)`.
///
/// Refuses with `BoundaryDegenerate` when an optimizer is within `tol` of
/// a clamp boundary (`Ḡ = B` on `T1`, `Ḡ = A` on `T2`, a `T3` midpoint at
/// `A` or `B`), where the limit may not exist.
pub fn directional_derivative_monotone(
    g: &GridFunction,
    j: &GridFunction,
    bounds: BoxBounds,
    tol: f64,
) -> Result<Derivative> {
    check_continuous("g", g)?;
    check_continuous("j", j)?;
    let rep = rep1_expressions(g, bounds, tol)?;
    let sets = rep.sets;
    if sets.t3_truncated {
        return Err(TrimError::DegenerateCase(format!(
            "more than {} optimal pairs; the optimizer sets are not isolated",
            sets.t3.len()
        )));
    }
    if sets.is_empty() {
        return Err(TrimError::DegenerateCase("all optimizer sets are empty".into()));
    }
    let (a, b) = (bounds.a, bounds.b);
    if let Some(x) = sets.t1.iter().zip(&rep.mid_at_t1).find(|(_, &m)| m - b <= tol).map(|p| p.0) {
        return Err(TrimError::BoundaryDegenerate(format!("T1 point {x} has Ḡ within {tol} of B")));
    }
    if let Some(x) = sets.t2.iter().zip(&rep.mid_at_t2).find(|(_, &m)| a - m <= tol).map(|p| p.0) {
        return Err(TrimError::BoundaryDegenerate(format!("T2 point {x} has Ḡ within {tol} of A")));
    }
    for &(y, x) in &sets.t3 {
        let m = 0.5 * (g.eval(x) + g.eval(y));
        if (m - a).abs() <= tol || (m - b).abs() <= tol {
            return Err(TrimError::BoundaryDegenerate(format!(
                "T3 pair ({y}, {x}) has midpoint within {tol} of the box"
            )));
        }
    }
    let mut value = f64::NEG_INFINITY;
    for &x in &sets.t1 {
        value = value.max(j.eval(x));
    }
    for &x in &sets.t2 {
        value = value.max(-j.eval(x));
    }
    for &(y, x) in &sets.t3 {
        value = value.max(0.5 * (j.eval(x) - j.eval(y)));
    }
    Ok(Derivative { value, sets })
}

/// Same limit for `f ↦ ‖f - f̃_L‖`: the monotone case with `G = f - L·x`
/// and the box `[1 - L, 0]`.
pub fn directional_derivative_lipschitz(f: &GridFunction, j: &GridFunction, lip: f64, tol: f64) -> Result<Derivative> {
    check_continuous("f", f)?;
    if !f.is_nondecreasing() {
        return invalid("f must be nondecreasing");
    }
    if !lip.is_finite() || lip < 1.0 {
        return invalid(format!("Lipschitz constant must be at least 1, got {lip}"));
    }
    directional_derivative_monotone(&f.add_linear(-lip), j, BoxBounds::lipschitz(lip), tol)
}

/// `r (‖G + J/r - Ḡ_{A,B,r}‖ - ‖G - Ḡ_{A,B}‖)`.
pub fn finite_difference_monotone(g: &GridFunction, j: &GridFunction, bounds: BoxBounds, r: f64) -> f64 {
    let base = best_monotone_box(g, bounds).distance;
    let moved = best_monotone_box(&g.add(&j.affine(1.0 / r, 0.0)), bounds).distance;
    r * (moved - base)
}

/// `r (‖f_r - f̃_{L,r}‖ - ‖f - f̃_L‖)` with `f_r = f + J/r`, which must stay
/// nondecreasing with values in `[0, 1]`.
pub fn finite_difference_lipschitz(f: &GridFunction, j: &GridFunction, lip: f64, r: f64) -> Result<f64> {
    let base = best_lipschitz_box(f, lip)?.distance;
    let moved = best_lipschitz_box(&f.add(&j.affine(1.0 / r, 0.0)), lip)?.distance;
    Ok(r * (moved - base))
}
