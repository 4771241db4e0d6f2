//! Functions on `[0, 1]` stored on a finite node set.
//!
//! A [`GridFunction`] is left-continuous and piecewise linear: at each node
//! `t_i` it carries the point value (which is also the left limit) and the
//! right limit, and on `(t_i, t_{i+1})` it is the straight line from the
//! right limit at `t_i` to the value at `t_{i+1}`. Continuous
//! piecewise-linear functions ([`Interp::Linear`]) and left-continuous step
//! functions ([`Interp::StepLeft`]) are special cases, and the class is
//! closed under every operation used by the envelope constructions (affine
//! combinations, running infima/suprema, clamping, pointwise min/max), so all
//! of them are computed exactly, inserting new nodes wherever a kink or a
//! crossing falls strictly inside a cell.

use serde::Serialize;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Interp {
    /// Continuous, linear between consecutive nodes.
    Linear,
    /// Value `v_i` on `(t_{i-1}, t_i]`, value `v_0` at `0`.
    StepLeft,
    /// Linear between nodes with left-continuous jumps at nodes.
    Jump,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    nodes: Vec<f64>,
    values: Vec<f64>,
    right: Vec<f64>,
    interp: Interp,
}

fn check_nodes(nodes: &[f64]) -> Result<()> {
    if nodes.len() < 2 {
        return invalid("a grid function needs at least two nodes");
    }
    if nodes[0] != 0.0 || nodes[nodes.len() - 1] != 1.0 {
        return invalid("grid nodes must start at 0 and end at 1");
    }
    if nodes.iter().any(|t| !t.is_finite()) {
        return invalid("grid nodes must be finite");
    }
    if nodes.windows(2).any(|w| w[0] >= w[1]) {
        return invalid("grid nodes must be strictly increasing");
    }
    Ok(())
}

fn check_values(values: &[f64], len: usize) -> Result<()> {
    if values.len() != len {
        return invalid(format!("expected {len} values, got {}", values.len()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return invalid("grid values must be finite");
    }
    Ok(())
}

fn classify(values: &[f64], right: &[f64]) -> Interp {
    if values == right {
        Interp::Linear
    } else {
        Interp::Jump
    }
}

/// Whether a computed crossing `x` is far enough inside `(t0, t1)` to be
/// worth a node. Crossings within a few ulps of a cell end are rounding
/// artefacts; dropping them moves values by at most slope times that gap.
#[inline]
fn interior(x: f64, t0: f64, t1: f64) -> bool {
    let eps = 4.0 * f64::EPSILON * x.abs().max(1.0);
    x - t0 > eps && t1 - x > eps
}

#[inline]
fn lerp(a: f64, b: f64, s: f64) -> f64 {
    a + (b - a) * s
}

/// `n` equally spaced nodes `i / (n - 1)`.
pub fn uniform_nodes(n: usize) -> Vec<f64> {
    assert!(n >= 2, "uniform grid needs at least two nodes");
    let last = (n - 1) as f64;
    let mut nodes: Vec<f64> = (0..n).map(|i| i as f64 / last).collect();
    nodes[n - 1] = 1.0;
    nodes
}

/// Sorted union of two strictly increasing node sets.
pub fn union_nodes(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

impl GridFunction {
    pub fn linear(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_nodes(&nodes)?;
        check_values(&values, nodes.len())?;
        let right = values.clone();
        Ok(Self { nodes, values, right, interp: Interp::Linear })
    }

    pub fn step_left(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_nodes(&nodes)?;
        check_values(&values, nodes.len())?;
        let m = values.len() - 1;
        let right = (0..=m).map(|i| values[(i + 1).min(m)]).collect();
        Ok(Self { nodes, values, right, interp: Interp::StepLeft })
    }

    /// General form: point values (equal to left limits) and right limits.
    /// `right[last]` must equal `values[last]`.
    pub fn with_jumps(nodes: Vec<f64>, values: Vec<f64>, right: Vec<f64>) -> Result<Self> {
        check_nodes(&nodes)?;
        check_values(&values, nodes.len())?;
        check_values(&right, nodes.len())?;
        if right[right.len() - 1] != values[values.len() - 1] {
            return invalid("no right limit exists at t = 1");
        }
        let interp = classify(&values, &right);
        Ok(Self { nodes, values, right, interp })
    }

    /// Builds a function from `(t, value)` rows in increasing `t`. A repeated
    /// `t` marks a jump: the first row is the value (left limit), the second
    /// the right limit.
    pub fn from_rows(rows: &[(f64, f64)]) -> Result<Self> {
        let mut nodes = Vec::with_capacity(rows.len());
        let mut values: Vec<f64> = Vec::with_capacity(rows.len());
        let mut right: Vec<f64> = Vec::with_capacity(rows.len());
        let mut repeated = false;
        for &(t, v) in rows {
            if nodes.last() == Some(&t) {
                if repeated {
                    return invalid(format!("more than two rows at t = {t}"));
                }
                *right.last_mut().unwrap() = v;
                repeated = true;
            } else {
                nodes.push(t);
                values.push(v);
                right.push(v);
                repeated = false;
            }
        }
        Self::with_jumps(nodes, values, right)
    }

    /// Samples `f` on `grid_size` uniform nodes, linear in between.
    pub fn sample_uniform(grid_size: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if grid_size < 2 {
            return invalid("grid_size must be at least 2");
        }
        let nodes = uniform_nodes(grid_size);
        let values = nodes.iter().map(|&t| f(t)).collect();
        Self::linear(nodes, values)
    }

    pub fn identity() -> Self {
        Self::linear(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap()
    }

    pub fn constant(c: f64) -> Self {
        Self::linear(vec![0.0, 1.0], vec![c, c]).unwrap()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn right_limits(&self) -> &[f64] {
        &self.right
    }

    pub fn interp(&self) -> Interp {
        self.interp
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_continuous(&self) -> bool {
        self.values == self.right
    }

    /// `(value, right limit)` at `t`; arguments outside `[0, 1]` are clamped.
    pub fn eval_sides(&self, t: f64) -> (f64, f64) {
        let t = t.clamp(0.0, 1.0);
        let idx = self.nodes.partition_point(|&x| x < t);
        if self.nodes[idx] == t {
            return (self.values[idx], self.right[idx]);
        }
        let (t0, t1) = (self.nodes[idx - 1], self.nodes[idx]);
        let v = lerp(self.right[idx - 1], self.values[idx], (t - t0) / (t1 - t0));
        (v, v)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_sides(t).0
    }

    /// Point values and right limits in order along `[0, 1]`, with the
    /// right limit listed only where it differs from the value.
    pub fn samples(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.nodes.len());
        for i in 0..self.nodes.len() {
            out.push((self.nodes[i], self.values[i]));
            if self.right[i] != self.values[i] {
                out.push((self.nodes[i], self.right[i]));
            }
        }
        out
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().chain(&self.right).copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().chain(&self.right).copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.samples().windows(2).all(|w| w[1].1 >= w[0].1)
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.samples().windows(2).all(|w| w[1].1 <= w[0].1)
    }

    /// `sup |f(x) - f(y)| / |x - y|`; infinite when the function jumps.
    pub fn lipschitz_seminorm(&self) -> f64 {
        self.samples()
            .windows(2)
            .map(|w| {
                let dv = (w[1].1 - w[0].1).abs();
                let dt = w[1].0 - w[0].0;
                if dt == 0.0 {
                    if dv > 0.0 {
                        f64::INFINITY
                    } else {
                        0.0
                    }
                } else {
                    dv / dt
                }
            })
            .fold(0.0, f64::max)
    }

    /// Same function on `nodes`, which must contain every node of `self`.
    pub(crate) fn on_nodes(&self, nodes: &[f64]) -> GridFunction {
        debug_assert!(nodes.len() >= self.nodes.len());
        if nodes.len() == self.nodes.len() {
            return self.clone();
        }
        let mut values = Vec::with_capacity(nodes.len());
        let mut right = Vec::with_capacity(nodes.len());
        let mut j = 0;
        for &t in nodes {
            while self.nodes[j] < t {
                j += 1;
            }
            if self.nodes[j] == t {
                values.push(self.values[j]);
                right.push(self.right[j]);
            } else {
                let (t0, t1) = (self.nodes[j - 1], self.nodes[j]);
                let v = lerp(self.right[j - 1], self.values[j], (t - t0) / (t1 - t0));
                values.push(v);
                right.push(v);
            }
        }
        GridFunction { nodes: nodes.to_vec(), values, right, interp: self.interp }
    }

    /// Same function with `extra` points added to the node set.
    pub fn refine(&self, extra: &[f64]) -> Result<GridFunction> {
        check_nodes_subset(extra)?;
        let nodes = union_nodes(&self.nodes, extra);
        Ok(self.on_nodes(&nodes))
    }

    /// Pointwise `op(self, other)`. Exact only for affine `op`, which is
    /// the only way it is used.
    fn combine_affine(&self, other: &GridFunction, op: impl Fn(f64, f64) -> f64) -> GridFunction {
        let nodes = union_nodes(&self.nodes, &other.nodes);
        let a = self.on_nodes(&nodes);
        let b = other.on_nodes(&nodes);
        let values: Vec<f64> = a.values.iter().zip(&b.values).map(|(&x, &y)| op(x, y)).collect();
        let right: Vec<f64> = a.right.iter().zip(&b.right).map(|(&x, &y)| op(x, y)).collect();
        let interp = classify(&values, &right);
        GridFunction { nodes, values, right, interp }
    }

    pub fn add(&self, other: &GridFunction) -> GridFunction {
        self.combine_affine(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &GridFunction) -> GridFunction {
        self.combine_affine(other, |x, y| x - y)
    }

    /// `(self + other) / 2`.
    pub fn average(&self, other: &GridFunction) -> GridFunction {
        self.combine_affine(other, |x, y| 0.5 * (x + y))
    }

    /// `scale * self + shift`.
    pub fn affine(&self, scale: f64, shift: f64) -> GridFunction {
        let f = |v: f64| scale * v + shift;
        let values: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        let right: Vec<f64> = self.right.iter().map(|&v| f(v)).collect();
        let interp = match self.interp {
            Interp::StepLeft => Interp::StepLeft,
            _ => classify(&values, &right),
        };
        GridFunction { nodes: self.nodes.clone(), values, right, interp }
    }

    pub fn negate(&self) -> GridFunction {
        self.affine(-1.0, 0.0)
    }

    /// `self(t) + slope * t`.
    pub fn add_linear(&self, slope: f64) -> GridFunction {
        let values: Vec<f64> = self.values.iter().zip(&self.nodes).map(|(&v, &t)| v + slope * t).collect();
        let right: Vec<f64> = self.right.iter().zip(&self.nodes).map(|(&v, &t)| v + slope * t).collect();
        let interp = classify(&values, &right);
        GridFunction { nodes: self.nodes.clone(), values, right, interp }
    }

    /// Adds a node wherever the function crosses one of `levels` strictly
    /// inside a cell. The value stored at the new node is the level itself.
    pub fn insert_level_crossings(&self, levels: &[f64]) -> GridFunction {
        let levels: Vec<f64> = levels.iter().copied().filter(|c| c.is_finite()).collect();
        if levels.is_empty() {
            return self.clone();
        }
        let n = self.nodes.len();
        let mut nodes = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        let mut cuts: Vec<(f64, f64)> = Vec::new();
        for i in 0..n {
            nodes.push(self.nodes[i]);
            values.push(self.values[i]);
            right.push(self.right[i]);
            if i + 1 == n {
                break;
            }
            let (t0, t1) = (self.nodes[i], self.nodes[i + 1]);
            let (a, b) = (self.right[i], self.values[i + 1]);
            cuts.clear();
            for &c in &levels {
                if (a - c) * (b - c) < 0.0 {
                    let x = t0 + (c - a) / (b - a) * (t1 - t0);
                    if interior(x, t0, t1) {
                        cuts.push((x, c));
                    }
                }
            }
            cuts.sort_by(|p, q| p.0.total_cmp(&q.0));
            cuts.dedup_by(|p, q| p.0 == q.0);
            for &(x, c) in &cuts {
                nodes.push(x);
                values.push(c);
                right.push(c);
            }
        }
        let interp = match self.interp {
            Interp::Linear => Interp::Linear,
            _ => classify(&values, &right),
        };
        GridFunction { nodes, values, right, interp }
    }

    /// Pointwise `max(min(self, hi), lo)`; either bound may be infinite.
    pub fn clamp(&self, lo: f64, hi: f64) -> GridFunction {
        debug_assert!(lo <= hi);
        let mut out = self.insert_level_crossings(&[lo, hi]);
        for v in out.values.iter_mut().chain(out.right.iter_mut()) {
            *v = v.min(hi).max(lo);
        }
        if out.interp != Interp::Linear {
            out.interp = classify(&out.values, &out.right);
        }
        out
    }

    fn pointwise_select(&self, other: &GridFunction, take_min: bool) -> GridFunction {
        let nodes = union_nodes(&self.nodes, &other.nodes);
        let a = self.on_nodes(&nodes);
        let b = other.on_nodes(&nodes);
        let pick = |x: f64, y: f64| if take_min { x.min(y) } else { x.max(y) };
        let n = nodes.len();
        let mut out_nodes = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        for i in 0..n {
            out_nodes.push(nodes[i]);
            values.push(pick(a.values[i], b.values[i]));
            right.push(pick(a.right[i], b.right[i]));
            if i + 1 == n {
                break;
            }
            let da = a.right[i] - b.right[i];
            let db = a.values[i + 1] - b.values[i + 1];
            if da * db < 0.0 {
                let s = da / (da - db);
                let x = nodes[i] + s * (nodes[i + 1] - nodes[i]);
                if interior(x, nodes[i], nodes[i + 1]) {
                    let v = lerp(a.right[i], a.values[i + 1], s);
                    out_nodes.push(x);
                    values.push(v);
                    right.push(v);
                }
            }
        }
        let interp = classify(&values, &right);
        GridFunction { nodes: out_nodes, values, right, interp }
    }

    pub fn pointwise_min(&self, other: &GridFunction) -> GridFunction {
        self.pointwise_select(other, true)
    }

    pub fn pointwise_max(&self, other: &GridFunction) -> GridFunction {
        self.pointwise_select(other, false)
    }

    /// Running infimum `x ↦ inf_{0 ≤ y ≤ x} self(y)`.
    pub fn prefix_inf(&self) -> GridFunction {
        let n = self.nodes.len();
        let mut nodes = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        let mut run = self.values[0];
        nodes.push(self.nodes[0]);
        values.push(run);
        right.push(run);
        for i in 0..n - 1 {
            let (t0, t1) = (self.nodes[i], self.nodes[i + 1]);
            let (a, b) = (self.right[i], self.values[i + 1]);
            run = run.min(a);
            *right.last_mut().unwrap() = run;
            // On the open cell the running infimum is min(run, line a -> b).
            if a > run && b < run {
                let x = t0 + (run - a) / (b - a) * (t1 - t0);
                if interior(x, t0, t1) {
                    nodes.push(x);
                    values.push(run);
                    right.push(run);
                }
            }
            run = run.min(b);
            nodes.push(t1);
            values.push(run);
            right.push(run);
        }
        let interp = classify(&values, &right);
        GridFunction { nodes, values, right, interp }
    }

    /// Running supremum from the right, `x ↦ sup_{x ≤ y ≤ 1} self(y)`.
    pub fn suffix_sup(&self) -> GridFunction {
        let n = self.nodes.len();
        let mut nodes = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        // Built from t = 1 backwards, reversed at the end.
        let mut run = self.values[n - 1];
        nodes.push(self.nodes[n - 1]);
        values.push(run);
        right.push(run);
        for i in (0..n - 1).rev() {
            let (t0, t1) = (self.nodes[i], self.nodes[i + 1]);
            let (a, b) = (self.right[i], self.values[i + 1]);
            if a > run && b < run {
                let x = t0 + (run - a) / (b - a) * (t1 - t0);
                if interior(x, t0, t1) {
                    nodes.push(x);
                    values.push(run);
                    right.push(run);
                }
            }
            let right_limit = run.max(a);
            run = right_limit.max(self.values[i]);
            nodes.push(t0);
            values.push(run);
            right.push(right_limit);
        }
        nodes.reverse();
        values.reverse();
        right.reverse();
        let interp = classify(&values, &right);
        GridFunction { nodes, values, right, interp }
    }

    /// Running supremum `x ↦ sup_{0 ≤ y ≤ x} self(y)`.
    pub fn prefix_sup(&self) -> GridFunction {
        self.negate().prefix_inf().negate()
    }

    /// Running infimum from the right, `x ↦ inf_{x ≤ y ≤ 1} self(y)`.
    pub fn suffix_inf(&self) -> GridFunction {
        self.negate().suffix_sup().negate()
    }

    /// Drops right limits. Used for results that are continuous in exact
    /// arithmetic, where any recorded jump is rounding noise.
    pub(crate) fn into_continuous(mut self) -> GridFunction {
        debug_assert!(self.values.iter().zip(&self.right).all(|(v, r)| (v - r).abs() <= 1e-9 * (1.0 + v.abs())));
        self.right.clone_from(&self.values);
        self.interp = Interp::Linear;
        self
    }

    /// Running maximum of the node values, capped at `cap`. Removes the
    /// ulp-sized decreases that `h + L·t` picks up on flat stretches of an
    /// exactly nondecreasing result. Continuous functions only.
    pub(crate) fn monotone_repair(mut self, cap: f64) -> GridFunction {
        debug_assert!(self.is_continuous());
        for i in 1..self.values.len() {
            self.values[i] = self.values[i].max(self.values[i - 1]).min(cap);
        }
        self.right.clone_from(&self.values);
        self
    }

    /// `|f(s) - f(t)| ≤ lip·|s - t| + abs_tol` between consecutive samples.
    /// The absolute slack absorbs rounding on cells a few ulps wide, where
    /// the plain difference quotient is meaningless.
    pub fn is_lipschitz(&self, lip: f64, abs_tol: f64) -> bool {
        self.samples().windows(2).all(|w| (w[1].1 - w[0].1).abs() <= lip * (w[1].0 - w[0].0) + abs_tol)
    }

    /// Overwrites the values at `t = 0` and `t = 1`.
    pub(crate) fn pin_endpoints(mut self, at_zero: f64, at_one: f64) -> GridFunction {
        let last = self.values.len() - 1;
        let continuous_start = self.values[0] == self.right[0];
        self.values[0] = at_zero;
        if continuous_start {
            self.right[0] = at_zero;
        }
        self.values[last] = at_one;
        self.right[last] = at_one;
        self
    }
}

fn check_nodes_subset(extra: &[f64]) -> Result<()> {
    if extra.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return invalid("refinement points must lie in [0, 1]");
    }
    if extra.windows(2).any(|w| w[0] >= w[1]) {
        return invalid("refinement points must be strictly increasing");
    }
    Ok(())
}

/// Exact `sup_{t ∈ [0,1]} |f(t) - g(t)|`, including one-sided limits.
///
/// Both functions are linear between consecutive nodes of the union grid,
/// so the supremum is attained at a node value or a right limit.
pub fn sup_norm_distance(f: &GridFunction, g: &GridFunction) -> f64 {
    let nodes = union_nodes(&f.nodes, &g.nodes);
    let a = f.on_nodes(&nodes);
    let b = g.on_nodes(&nodes);
    a.values.iter().zip(&b.values).chain(a.right.iter().zip(&b.right)).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
