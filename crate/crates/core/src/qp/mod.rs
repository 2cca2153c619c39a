//! The continuous bilinear separator program
//!
//! ```text
//! max  f(x, y) = c'(x + y) - gamma * x'Hy
//! s.t. 0 <= x, y <= 1,  la <= w'x <= ua,  lb <= w'y <= ub
//! ```
//!
//! with `H = A + I`. Binary maximizers with zero penalty `x'Hy` are vertex
//! separators: `x` and `y` are the incidence vectors of the two shores.

mod lp;
mod mca;
mod rounding;
mod separator;

use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use crate::error::{Result, VsepError};
use crate::graph::WeightedGraph;

pub use lp::{greedy_lp, greedy_lp_value};
pub use mca::{mca, mca_traced, McaReport};
pub use rounding::{force_binary, push_fractional, round_mostly_binary};
pub use separator::{extract_partition, make_separator, repair_separator};

/// A component within this distance of 0 or 1 counts as binary.
pub const BINARY_TOL: f64 = 1e-9;
/// Absolute slack allowed on the knapsack constraints `l <= w'z <= u`.
pub const FEAS_TOL: f64 = 1e-9;
/// Default joint-step margin for the mountain-climbing iteration.
pub const DEFAULT_ETA: f64 = 1e-5;
/// Relative termination tolerance: a step must improve `f` by more than
/// `DEFAULT_IMPROVE_REL_TOL * (1 + |f|)`.
pub const DEFAULT_IMPROVE_REL_TOL: f64 = 1e-10;

#[inline]
pub fn is_zero(v: f64) -> bool {
    v <= BINARY_TOL
}

#[inline]
pub fn is_one(v: f64) -> bool {
    v >= 1.0 - BINARY_TOL
}

#[inline]
pub fn is_binary(v: f64) -> bool {
    is_zero(v) || is_one(v)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The two blocks of variables: `x` (shore A) and `y` (shore B).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    A,
    B,
    S,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub la: f64,
    pub ua: f64,
    pub lb: f64,
    pub ub: f64,
}

impl Bounds {
    pub fn new(la: f64, ua: f64, lb: f64, ub: f64) -> Self {
        Self { la, ua, lb, ub }
    }

    pub fn symmetric(l: f64, u: f64) -> Self {
        Self::new(l, u, l, u)
    }

    pub fn lower(&self, side: Side) -> f64 {
        match side {
            Side::A => self.la,
            Side::B => self.lb,
        }
    }

    pub fn upper(&self, side: Side) -> f64 {
        match side {
            Side::A => self.ua,
            Side::B => self.ub,
        }
    }

    /// Checks ordering and that two disjoint shores can fit in `total_weight`.
    pub fn check(&self, total_weight: f64) -> Result<()> {
        let ok = |l: f64, u: f64| l.is_finite() && u.is_finite() && 0.0 <= l && l <= u;
        if !ok(self.la, self.ua) || !ok(self.lb, self.ub) {
            return Err(VsepError::Infeasible(format!(
                "bounds must satisfy 0 <= l <= u, got {self:?}"
            )));
        }
        if self.la > total_weight || self.lb > total_weight {
            return Err(VsepError::Infeasible(format!(
                "lower bounds exceed total weight {total_weight}"
            )));
        }
        if self.la + self.lb > total_weight + FEAS_TOL {
            return Err(VsepError::Infeasible(format!(
                "shores need weight {} but the graph only has {total_weight}",
                self.la + self.lb
            )));
        }
        Ok(())
    }
}

/// One instance of the bilinear program over a borrowed graph.
///
/// Costs are usually the graph's vertex costs but may be replaced by a
/// perturbed copy; `gamma` may likewise be overridden. Neither affects
/// feasibility, so points move freely between such variants.
#[derive(Clone, Debug)]
pub struct SeparatorProblem<'g> {
    graph: &'g WeightedGraph,
    costs: Cow<'g, [f64]>,
    bounds: Bounds,
    gamma: f64,
    eta: f64,
    improve_rel_tol: f64,
}

impl<'g> SeparatorProblem<'g> {
    /// Validates the bounds and sets `gamma = max c_i`.
    pub fn new(graph: &'g WeightedGraph, bounds: Bounds) -> Result<Self> {
        bounds.check(graph.total_weight())?;
        if graph.is_complete() && bounds.la > 0.0 && bounds.lb > 0.0 {
            return Err(VsepError::Infeasible(
                "a complete graph has no separator with two nonempty shores".into(),
            ));
        }
        Ok(Self {
            graph,
            costs: Cow::Borrowed(graph.costs()),
            bounds,
            gamma: graph.max_cost(),
            eta: DEFAULT_ETA,
            improve_rel_tol: DEFAULT_IMPROVE_REL_TOL,
        })
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_improve_tol(mut self, rel_tol: f64) -> Self {
        self.improve_rel_tol = rel_tol;
        self
    }

    /// A copy of this problem with the cost vector replaced.
    pub fn with_costs(&self, costs: Vec<f64>) -> Result<SeparatorProblem<'g>> {
        if costs.len() != self.n() {
            return Err(VsepError::DimensionMismatch {
                expected: self.n(),
                found: costs.len(),
            });
        }
        Ok(SeparatorProblem {
            costs: Cow::Owned(costs),
            ..self.clone()
        })
    }

    /// A copy of this problem with a different penalty parameter.
    pub fn with_gamma_value(&self, gamma: f64) -> SeparatorProblem<'g> {
        self.clone().with_gamma(gamma)
    }

    pub fn graph(&self) -> &'g WeightedGraph {
        self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn weights(&self) -> &'g [f64] {
        self.graph.weights()
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn improve_tol(&self, f: f64) -> f64 {
        self.improve_rel_tol * (1.0 + f.abs())
    }

    /// `c'(x + y) - gamma * x'(Ay + y)`.
    pub fn objective(&self, pt: &ContinuousPoint) -> f64 {
        self.objective_of(&pt.x, &pt.y, &pt.hy)
    }

    /// Objective from raw vectors, `hy = H y`. Every evaluation in the crate
    /// goes through here so equal inputs give bit-identical values.
    pub(crate) fn objective_of(&self, x: &[f64], y: &[f64], hy: &[f64]) -> f64 {
        let mut linear = 0.0;
        let mut bilinear = 0.0;
        for i in 0..x.len() {
            linear += self.costs[i] * (x[i] + y[i]);
            bilinear += x[i] * hy[i];
        }
        linear - self.gamma * bilinear
    }

    /// Gradient of `f` with respect to one block: `c - gamma * H z_other`.
    pub fn gradient(&self, pt: &ContinuousPoint, side: Side) -> Vec<f64> {
        let h_other = match side {
            Side::A => &pt.hy,
            Side::B => &pt.hx,
        };
        self.costs
            .iter()
            .zip(h_other)
            .map(|(c, h)| c - self.gamma * h)
            .collect()
    }

    /// Box and knapsack feasibility within [`FEAS_TOL`].
    pub fn is_feasible(&self, pt: &ContinuousPoint) -> bool {
        let w = self.weights();
        [Side::A, Side::B].into_iter().all(|side| {
            let z = pt.side(side);
            let wz = dot(w, z);
            z.iter().all(|&v| (-FEAS_TOL..=1.0 + FEAS_TOL).contains(&v))
                && wz >= self.bounds.lower(side) - FEAS_TOL
                && wz <= self.bounds.upper(side) + FEAS_TOL
        })
    }

    /// The uniform starting guess `x_i = ua / W(V)`, `y_i = ub / W(V)`.
    pub fn uniform_start(&self) -> ContinuousPoint {
        let total = self.graph.total_weight();
        let n = self.n();
        let x = vec![self.bounds.ua / total; n];
        let y = vec![self.bounds.ub / total; n];
        ContinuousPoint::from_vectors(self.graph, x, y)
    }

    pub(crate) fn check_dims(&self, pt: &ContinuousPoint) -> Result<()> {
        if pt.n() != self.n() {
            return Err(VsepError::DimensionMismatch {
                expected: self.n(),
                found: pt.n(),
            });
        }
        Ok(())
    }
}

/// A point `(x, y)` with cached products `Hx` and `Hy`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuousPoint {
    x: Vec<f64>,
    y: Vec<f64>,
    hx: Vec<f64>,
    hy: Vec<f64>,
}

impl ContinuousPoint {
    /// Builds a point, rejecting wrong dimensions and entries outside [0, 1].
    pub fn new(graph: &WeightedGraph, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        for z in [&x, &y] {
            if z.len() != graph.n() {
                return Err(VsepError::DimensionMismatch {
                    expected: graph.n(),
                    found: z.len(),
                });
            }
            if let Some(v) = z
                .iter()
                .find(|v| !(-FEAS_TOL..=1.0 + FEAS_TOL).contains(*v))
            {
                return Err(VsepError::InvalidArgument(format!(
                    "component {v} lies outside [0, 1]"
                )));
            }
        }
        Ok(Self::from_vectors(graph, x, y))
    }

    pub(crate) fn from_vectors(graph: &WeightedGraph, x: Vec<f64>, y: Vec<f64>) -> Self {
        let hx = graph.h_times(&x);
        let hy = graph.h_times(&y);
        Self { x, y, hx, hy }
    }

    /// Incidence vectors of the shores in `labels`.
    pub fn from_labels(graph: &WeightedGraph, labels: &[Label]) -> Result<Self> {
        let x = labels
            .iter()
            .map(|&l| f64::from(u8::from(l == Label::A)))
            .collect();
        let y = labels
            .iter()
            .map(|&l| f64::from(u8::from(l == Label::B)))
            .collect();
        Self::new(graph, x, y)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn hx(&self) -> &[f64] {
        &self.hx
    }

    pub fn hy(&self) -> &[f64] {
        &self.hy
    }

    pub fn side(&self, side: Side) -> &[f64] {
        match side {
            Side::A => &self.x,
            Side::B => &self.y,
        }
    }

    pub fn set_x(&mut self, graph: &WeightedGraph, x: Vec<f64>) {
        graph.mul_h(&x, &mut self.hx);
        self.x = x;
    }

    pub fn set_y(&mut self, graph: &WeightedGraph, y: Vec<f64>) {
        graph.mul_h(&y, &mut self.hy);
        self.y = y;
    }

    pub fn set_side(&mut self, graph: &WeightedGraph, side: Side, z: Vec<f64>) {
        match side {
            Side::A => self.set_x(graph, z),
            Side::B => self.set_y(graph, z),
        }
    }

    /// Replaces one block together with its already computed `H` product.
    pub(crate) fn set_side_cached(&mut self, side: Side, z: Vec<f64>, hz: Vec<f64>) {
        match side {
            Side::A => {
                self.x = z;
                self.hx = hz;
            }
            Side::B => {
                self.y = z;
                self.hy = hz;
            }
        }
    }

    pub(crate) fn side_mut(&mut self, side: Side) -> &mut Vec<f64> {
        match side {
            Side::A => &mut self.x,
            Side::B => &mut self.y,
        }
    }

    /// `x'Hy`.
    pub fn penalty(&self) -> f64 {
        dot(&self.x, &self.hy)
    }

    /// Whether the cached products equal a fresh recomputation exactly.
    pub fn is_cache_coherent(&self, graph: &WeightedGraph) -> bool {
        graph.h_times(&self.x) == self.hx && graph.h_times(&self.y) == self.hy
    }

    pub fn fractional_indices(&self, side: Side) -> Vec<usize> {
        self.side(side)
            .iter()
            .enumerate()
            .filter(|(_, &v)| !is_binary(v))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_binary(&self) -> bool {
        self.x.iter().chain(&self.y).all(|&v| is_binary(v))
    }

    /// At most one non-binary component in each block.
    pub fn is_mostly_binary(&self) -> bool {
        [Side::A, Side::B]
            .into_iter()
            .all(|s| self.side(s).iter().filter(|&&v| !is_binary(v)).count() <= 1)
    }

    /// Shore labels: `A` where `x_i = 1`, `B` where `y_i = 1`, `S` otherwise.
    /// Fractional components count as 0.
    pub fn labels(&self) -> Vec<Label> {
        self.x
            .iter()
            .zip(&self.y)
            .map(|(&xi, &yi)| match (is_one(xi), is_one(yi)) {
                (true, false) => Label::A,
                (false, true) => Label::B,
                _ => Label::S,
            })
            .collect()
    }
}

/// A labelled partition `(A, S, B)` of the vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub labels: Vec<Label>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub s: Vec<usize>,
    pub cost_s: f64,
    pub weight_a: f64,
    pub weight_b: f64,
    /// Whether both shore weights respect their bounds.
    pub feasible: bool,
}

impl Partition {
    /// Builds the partition and checks that no edge joins A and B.
    pub fn from_labels(graph: &WeightedGraph, labels: Vec<Label>, bounds: &Bounds) -> Result<Self> {
        if labels.len() != graph.n() {
            return Err(VsepError::DimensionMismatch {
                expected: graph.n(),
                found: labels.len(),
            });
        }
        for (u, v, _) in graph.edges() {
            match (labels[u], labels[v]) {
                (Label::A, Label::B) | (Label::B, Label::A) => {
                    return Err(VsepError::InvalidSeparator { u: u + 1, v: v + 1 })
                }
                _ => {}
            }
        }
        let (mut a, mut b, mut s) = (Vec::new(), Vec::new(), Vec::new());
        let (mut cost_s, mut weight_a, mut weight_b) = (0.0, 0.0, 0.0);
        for (i, &l) in labels.iter().enumerate() {
            match l {
                Label::A => {
                    a.push(i);
                    weight_a += graph.weights()[i];
                }
                Label::B => {
                    b.push(i);
                    weight_b += graph.weights()[i];
                }
                Label::S => {
                    s.push(i);
                    cost_s += graph.costs()[i];
                }
            }
        }
        let within = |w: f64, l: f64, u: f64| w >= l - FEAS_TOL && w <= u + FEAS_TOL;
        let feasible =
            within(weight_a, bounds.la, bounds.ua) && within(weight_b, bounds.lb, bounds.ub);
        Ok(Self {
            labels,
            a,
            b,
            s,
            cost_s,
            weight_a,
            weight_b,
            feasible,
        })
    }
}
