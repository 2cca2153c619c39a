//! Exhaustive solvers for tiny instances, used as ground truth.

use std::cmp::Ordering;

use crate::error::{Result, VsepError};
use crate::graph::WeightedGraph;
use crate::qp::{Bounds, Label, Partition, FEAS_TOL};

pub const VSP_CAP: usize = 14;
pub const LP_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct ExactSolution {
    pub cost: f64,
    pub partition: Partition,
}

struct Search<'a> {
    g: &'a WeightedGraph,
    bounds: Bounds,
    labels: Vec<Label>,
    best: Option<(f64, Vec<usize>, Vec<Label>)>,
    /// Weight still unassigned after position `v`, for lower-bound pruning.
    suffix_weight: Vec<f64>,
}

fn separator_of(labels: &[Label]) -> Vec<usize> {
    (0..labels.len())
        .filter(|&i| labels[i] == Label::S)
        .collect()
}

impl Search<'_> {
    fn run(&mut self, v: usize, wa: f64, wb: f64, cost: f64) {
        let b = self.bounds;
        if wa + self.suffix_weight[v] < b.la - FEAS_TOL
            || wb + self.suffix_weight[v] < b.lb - FEAS_TOL
        {
            return;
        }
        if let Some((best, _, _)) = &self.best {
            if cost > *best {
                return;
            }
        }
        if v == self.g.n() {
            let s = separator_of(&self.labels);
            let better = match &self.best {
                None => true,
                Some((bc, bs, _)) => match cost.partial_cmp(bc) {
                    Some(Ordering::Less) => true,
                    Some(Ordering::Equal) => s < *bs,
                    _ => false,
                },
            };
            if better {
                self.best = Some((cost, s, self.labels.clone()));
            }
            return;
        }
        let w = self.g.weights()[v];
        let c = self.g.costs()[v];
        let earlier = |l: Label, labels: &[Label]| {
            self.g.neighbors(v).iter().any(|&u| u < v && labels[u] == l)
        };
        let touches_a = earlier(Label::A, &self.labels);
        let touches_b = earlier(Label::B, &self.labels);
        if !touches_b && wa + w <= b.ua + FEAS_TOL {
            self.labels[v] = Label::A;
            self.run(v + 1, wa + w, wb, cost);
        }
        self.labels[v] = Label::S;
        self.run(v + 1, wa, wb, cost + c);
        if !touches_a && wb + w <= b.ub + FEAS_TOL {
            self.labels[v] = Label::B;
            self.run(v + 1, wa, wb + w, cost);
        }
        self.labels[v] = Label::S;
    }
}

/// Minimum-cost vertex separator by enumerating all `3^n` labelings.
///
/// Ties go to the lexicographically smallest separator (as a sorted index
/// list). Fails with `Infeasible` when no labeling meets the bounds.
pub fn exact_vsp(g: &WeightedGraph, bounds: Bounds) -> Result<ExactSolution> {
    let n = g.n();
    if n > VSP_CAP {
        return Err(VsepError::SizeCap { n, cap: VSP_CAP });
    }
    let mut suffix_weight = vec![0.0; n + 1];
    for v in (0..n).rev() {
        suffix_weight[v] = suffix_weight[v + 1] + g.weights()[v];
    }
    let mut search = Search {
        g,
        bounds,
        labels: vec![Label::S; n],
        best: None,
        suffix_weight,
    };
    search.run(0, 0.0, 0.0, 0.0);
    match search.best {
        Some((cost, _, labels)) => Ok(ExactSolution {
            cost,
            partition: Partition::from_labels(g, labels, &bounds)?,
        }),
        None => Err(VsepError::Infeasible(
            "no labeling satisfies the shore bounds".into(),
        )),
    }
}

/// Maximum of `gradient' z` over `{0 <= z <= 1, lower <= w'z <= upper}` by
/// enumerating candidate vertices: every subset at 1, optionally completed
/// by one fractional component that makes a weight bound tight.
pub fn exact_lp(gradient: &[f64], w: &[f64], lower: f64, upper: f64) -> Result<f64> {
    let n = gradient.len();
    if n > LP_CAP {
        return Err(VsepError::SizeCap { n, cap: LP_CAP });
    }
    if w.len() != n {
        return Err(VsepError::DimensionMismatch {
            expected: n,
            found: w.len(),
        });
    }
    let total: f64 = w.iter().sum();
    if lower > upper || lower > total || upper < 0.0 {
        return Err(VsepError::Infeasible(format!(
            "knapsack bounds [{lower}, {upper}] infeasible for total weight {total}"
        )));
    }
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1 << n) {
        let mut s = 0.0;
        let mut v = 0.0;
        for i in (0..n).filter(|&i| mask >> i & 1 == 1) {
            s += w[i];
            v += gradient[i];
        }
        if s >= lower && s <= upper {
            best = best.max(v);
        }
        for k in (0..n).filter(|&k| mask >> k & 1 == 0) {
            for target in [lower, upper] {
                let t = (target - s) / w[k];
                if t > 0.0 && t < 1.0 {
                    best = best.max(v + t * gradient[k]);
                }
            }
        }
    }
    Ok(best)
}
