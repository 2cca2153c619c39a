#![allow(dead_code)]

use std::collections::HashSet;

use rand::Rng;
use vsep::qp::greedy_lp;
use vsep::{Bounds, ContinuousPoint, Label, WeightedGraph};

pub fn path(n: usize) -> WeightedGraph {
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
    WeightedGraph::from_edges(n, &edges).unwrap().0
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> WeightedGraph {
    let e: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
    WeightedGraph::from_edges(n, &e).unwrap().0
}

/// Erdős–Rényi graph with unit weights.
pub fn erdos_renyi<R: Rng>(rng: &mut R, n: usize, p: f64) -> WeightedGraph {
    let mut e = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                e.push((u, v, 1.0));
            }
        }
    }
    WeightedGraph::from_edges(n, &e).unwrap().0
}

/// Random graph with exactly `m` distinct edges of integer weight in `1..=max_w`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, m: usize, max_w: u32) -> WeightedGraph {
    let m = m.min(n * (n - 1) / 2);
    let mut seen = HashSet::new();
    let mut e = Vec::with_capacity(m);
    while e.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && seen.insert((u.min(v), u.max(v))) {
            e.push((u, v, rng.gen_range(1..=max_w) as f64));
        }
    }
    WeightedGraph::from_edges(n, &e).unwrap().0
}

pub fn int_vec<R: Rng>(rng: &mut R, n: usize, lo: u32, hi: u32) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..=hi) as f64).collect()
}

/// A feasible point: a convex combination of a few greedy LP vertices.
pub fn random_feasible_point<R: Rng>(
    rng: &mut R,
    g: &WeightedGraph,
    b: &Bounds,
) -> ContinuousPoint {
    let n = g.n();
    let w = g.weights();
    let mut block = |lower: f64, upper: f64| {
        let k = rng.gen_range(1..=3);
        let mut z = vec![0.0; n];
        let mut total = 0.0;
        for _ in 0..k {
            let grad: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v = greedy_lp(&grad, w, lower, upper).unwrap();
            let t: f64 = rng.gen_range(0.1..1.0);
            total += t;
            for i in 0..n {
                z[i] += t * v[i];
            }
        }
        z.iter()
            .map(|v| (v / total).clamp(0.0, 1.0))
            .collect::<Vec<_>>()
    };
    let x = block(b.la, b.ua);
    let y = block(b.lb, b.ub);
    ContinuousPoint::new(g, x, y).unwrap()
}

/// Independent separator validity: no A–B edge and both shores in bounds.
pub fn is_valid_separator(g: &WeightedGraph, labels: &[Label], b: &Bounds) -> bool {
    if labels.len() != g.n() {
        return false;
    }
    for (u, v, _) in g.edges() {
        if matches!(
            (labels[u], labels[v]),
            (Label::A, Label::B) | (Label::B, Label::A)
        ) {
            return false;
        }
    }
    let weight = |l: Label| -> f64 {
        (0..g.n())
            .filter(|&i| labels[i] == l)
            .map(|i| g.weights()[i])
            .sum()
    };
    let (wa, wb) = (weight(Label::A), weight(Label::B));
    wa >= b.la - 1e-9 && wa <= b.ua + 1e-9 && wb >= b.lb - 1e-9 && wb <= b.ub + 1e-9
}

pub fn separator_cost(g: &WeightedGraph, labels: &[Label]) -> f64 {
    (0..g.n())
        .filter(|&i| labels[i] == Label::S)
        .map(|i| g.costs()[i])
        .sum()
}

/// `c'(x + y)` summed directly.
pub fn linear_part(g: &WeightedGraph, pt: &ContinuousPoint) -> f64 {
    (0..g.n())
        .map(|i| g.costs()[i] * (pt.x()[i] + pt.y()[i]))
        .sum()
}

/// `x'(A + I)y` from the edge list.
pub fn penalty_by_edges(g: &WeightedGraph, pt: &ContinuousPoint) -> f64 {
    let (x, y) = (pt.x(), pt.y());
    let mut p: f64 = (0..g.n()).map(|i| x[i] * y[i]).sum();
    for (u, v, _) in g.edges() {
        p += x[u] * y[v] + x[v] * y[u];
    }
    p
}
