//! Best uniform approximation by nonincreasing functions with values in a box.

use std::collections::BTreeSet;

use ordered_float::OrderedFloat;
use serde::Serialize;

use crate::envelopes::{clamp_box, ubhaya_envelopes, BoxBounds, MonotoneEnvelopes};
use crate::error::{invalid, Result};
use crate::grid::{sup_norm_distance, GridFunction};

/// Upper bound on the number of reported pairs in [`OptimizerSets::t3`].
pub const MAX_REPORTED_PAIRS: usize = 10_000;

#[derive(Debug, Clone)]
pub struct MonotoneBoxResult {
    pub approximant: GridFunction,
    pub distance: f64,
    pub envelopes: MonotoneEnvelopes,
    pub bounds: BoxBounds,
}

/// Points and pairs at which the distance is attained, up to `tol`.
///
/// `t1` collects `x` with `Ḡ(x) ≥ B` and `G(x) - B ≥ d - tol`, `t2` collects
/// `x` with `Ḡ(x) ≤ A` and `A - G(x) ≥ d - tol`, and `t3` collects `(y, x)`
/// with `y ≤ x`, `A ≤ (G(x) + G(y)) / 2 ≤ B` and `(G(x) - G(y)) / 2 ≥ d - tol`.
/// Candidates are the knots of the envelope construction. All lists are
/// sorted; `t3` stops at [`MAX_REPORTED_PAIRS`] entries and sets
/// `t3_truncated`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerSets {
    pub t1: Vec<f64>,
    pub t2: Vec<f64>,
    pub t3: Vec<(f64, f64)>,
    pub tol: f64,
    pub t3_truncated: bool,
}

impl OptimizerSets {
    pub fn is_empty(&self) -> bool {
        self.t1.is_empty() && self.t2.is_empty() && self.t3.is_empty()
    }
}

/// Both closed-form expressions of the distance for continuous `G`, with the
/// optimizer sets.
#[derive(Debug, Clone)]
pub struct Rep1Report {
    /// `‖G - Ḡ_{A,B}‖` evaluated directly.
    pub distance: f64,
    /// Maximum of `G - B` on `{Ḡ ≥ B}`, `A - G` on `{Ḡ ≤ A}` and
    /// `(U - L) / 2` on `{A ≤ Ḡ ≤ B}`.
    pub expr_envelope: f64,
    /// Same first two terms, third term `(G(x) - G(y)) / 2` over admissible
    /// pairs `y ≤ x`.
    pub expr_pairs: f64,
    pub sets: OptimizerSets,
    /// `Ḡ` at each reported `t1` point, in the same order.
    pub mid_at_t1: Vec<f64>,
    /// `Ḡ` at each reported `t2` point, in the same order.
    pub mid_at_t2: Vec<f64>,
}

/// `Ḡ_{A,B} = clamp((U + L) / 2, A, B)` and its sup distance to `g`.
pub fn best_monotone_box(g: &GridFunction, bounds: BoxBounds) -> MonotoneBoxResult {
    let envelopes = ubhaya_envelopes(g);
    let approximant = clamp_box(&envelopes.mid, bounds);
    let distance = sup_norm_distance(g, &approximant);
    MonotoneBoxResult { approximant, distance, envelopes, bounds }
}

/// `g`, `U`, `L`, `Ḡ` on a common node set that also contains every point
/// where `Ḡ` crosses `A` or `B`.
struct Knots {
    t: Vec<f64>,
    g: Vec<f64>,
    upper: Vec<f64>,
    lower: Vec<f64>,
    mid: Vec<f64>,
}

impl Knots {
    fn build(g: &GridFunction, env: &MonotoneEnvelopes, bounds: BoxBounds) -> Knots {
        let mid = env.mid.insert_level_crossings(&[bounds.a, bounds.b]);
        let t = mid.nodes().to_vec();
        let on = |f: &GridFunction| f.on_nodes(&t).values().to_vec();
        Knots { g: on(g), upper: on(&env.upper_env), lower: on(&env.lower_env), mid: mid.values().to_vec(), t }
    }

    fn in_t1(&self, i: usize, b: f64) -> bool {
        b.is_finite() && self.mid[i] >= b
    }

    fn in_t2(&self, i: usize, a: f64) -> bool {
        a.is_finite() && self.mid[i] <= a
    }
}

fn in_pair_box(gx: f64, gy: f64, bounds: BoxBounds) -> bool {
    let m = 0.5 * (gx + gy);
    bounds.a <= m && m <= bounds.b
}

fn fold_max(acc: Option<f64>, v: f64) -> Option<f64> {
    Some(acc.map_or(v, |a| a.max(v)))
}

fn max_present(terms: &[Option<f64>]) -> f64 {
    // The three sets cover [0, 1], so at least one term is present.
    terms.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// `max over y ≤ x, A ≤ (G(x)+G(y))/2 ≤ B` of `(G(x) - G(y)) / 2`, scanning
/// `x` left to right. For each `x` the best partner is the smallest earlier
/// value `G(y)` that keeps the midpoint at or above `A`; if its midpoint
/// exceeds `B`, every admissible partner would have to be smaller, so there
/// is none.
fn pair_term(values: &[f64], bounds: BoxBounds) -> Option<f64> {
    let mut seen: BTreeSet<(OrderedFloat<f64>, usize)> = BTreeSet::new();
    let mut best = None;
    for (i, &gx) in values.iter().enumerate() {
        seen.insert((OrderedFloat(gx), i));
        let start = if bounds.a == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            let s = 2.0 * bounds.a - gx;
            s - 4.0 * f64::EPSILON * (s.abs() + gx.abs())
        };
        let hit = seen
            .range((OrderedFloat(start), 0)..)
            .map(|&(OrderedFloat(gy), _)| gy)
            .find(|&gy| 0.5 * (gx + gy) >= bounds.a);
        if let Some(gy) = hit {
            if in_pair_box(gx, gy, bounds) {
                best = fold_max(best, 0.5 * (gx - gy));
            }
        }
    }
    best
}

/// Evaluates both expressions of the distance for continuous `g` and
/// collects the optimizer sets with reporting tolerance `tol`.
pub fn rep1_expressions(g: &GridFunction, bounds: BoxBounds, tol: f64) -> Result<Rep1Report> {
    if !g.is_continuous() {
        return invalid("the optimizer-set representation needs a continuous function");
    }
    if !tol.is_finite() || tol < 0.0 {
        return invalid(format!("tolerance must be finite and nonnegative, got {tol}"));
    }
    let result = best_monotone_box(g, bounds);
    let k = Knots::build(g, &result.envelopes, bounds);
    let (a, b) = (bounds.a, bounds.b);

    let (mut e1, mut e2, mut e3) = (None, None, None);
    for i in 0..k.t.len() {
        if k.in_t1(i, b) {
            e1 = fold_max(e1, k.g[i] - b);
        }
        if k.in_t2(i, a) {
            e2 = fold_max(e2, a - k.g[i]);
        }
        if a <= k.mid[i] && k.mid[i] <= b {
            e3 = fold_max(e3, 0.5 * (k.upper[i] - k.lower[i]));
        }
    }
    let expr_envelope = max_present(&[e1, e2, e3]);
    let expr_pairs = max_present(&[e1, e2, pair_term(&k.g, bounds)]);

    let d = result.distance;
    let floor = d - tol;
    let mut sets = OptimizerSets { t1: vec![], t2: vec![], t3: vec![], tol, t3_truncated: false };
    let (mut mid_at_t1, mut mid_at_t2) = (vec![], vec![]);
    for i in 0..k.t.len() {
        if k.in_t1(i, b) && k.g[i] - b >= floor {
            sets.t1.push(k.t[i]);
            mid_at_t1.push(k.mid[i]);
        }
        if k.in_t2(i, a) && a - k.g[i] >= floor {
            sets.t2.push(k.t[i]);
            mid_at_t2.push(k.mid[i]);
        }
    }
    collect_pairs(&k, bounds, floor, &mut sets);
    Ok(Rep1Report { distance: d, expr_envelope, expr_pairs, sets, mid_at_t1, mid_at_t2 })
}

fn collect_pairs(k: &Knots, bounds: BoxBounds, floor: f64, sets: &mut OptimizerSets) {
    let mut running_min = f64::INFINITY;
    'outer: for x in 0..k.t.len() {
        let gx = k.g[x];
        running_min = running_min.min(gx);
        if 0.5 * (gx - running_min) < floor {
            continue;
        }
        for y in 0..=x {
            let gy = k.g[y];
            if 0.5 * (gx - gy) >= floor && in_pair_box(gx, gy, bounds) {
                if sets.t3.len() == MAX_REPORTED_PAIRS {
                    sets.t3_truncated = true;
                    break 'outer;
                }
                sets.t3.push((k.t[y], k.t[x]));
            }
        }
    }
    sets.t3.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
}
