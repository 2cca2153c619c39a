use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{is_one, is_zero, ContinuousPoint, Label, Partition, SeparatorProblem, Side, FEAS_TOL};
use crate::error::{Result, VsepError};

/// Heap entry: larger gain first, then smaller index.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Candidate {
    gain: f64,
    index: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.index.cmp(&self.index))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Block {
    z: Vec<f64>,
    hz: Vec<f64>,
    count: f64,
    weight: f64,
    lower: f64,
    /// Candidates keyed on the other block's `H` product; stale once that
    /// product changes.
    heap: Option<BinaryHeap<Candidate>>,
}

/// Zeroes shore members that touch the other shore until `x'Hy = 0`.
///
/// Each step removes the index with the largest `gamma * H_i z_other - c_i`
/// from `x` while `1'x > la`, otherwise from `y` while `1'y > lb`. With
/// `w >= 1`, `gamma >= max c` and `f >= gamma (la + lb)` every removal keeps
/// the point feasible and does not decrease `f`. If neither block can give
/// up a vertex while the penalty is positive the precondition was violated.
pub fn make_separator(p: &SeparatorProblem<'_>, pt: ContinuousPoint) -> Result<ContinuousPoint> {
    p.check_dims(&pt)?;
    let g = p.graph();
    let w = p.weights();
    let c = p.costs();
    let gamma = p.gamma();
    let bounds = p.bounds();

    let binarize = |z: &[f64]| -> Result<Vec<f64>> {
        z.iter()
            .map(|&v| {
                if is_zero(v) {
                    Ok(0.0)
                } else if is_one(v) {
                    Ok(1.0)
                } else {
                    Err(VsepError::PreconditionViolated(format!(
                        "make_separator needs a binary point, found component {v}"
                    )))
                }
            })
            .collect()
    };
    let make_block = |z: Vec<f64>, lower: f64| {
        let hz = g.h_times(&z);
        let count = z.iter().sum();
        let weight = z.iter().zip(w).map(|(a, b)| a * b).sum();
        Block {
            z,
            hz,
            count,
            weight,
            lower,
            heap: None,
        }
    };
    let mut blocks = [
        make_block(binarize(pt.x())?, bounds.la),
        make_block(binarize(pt.y())?, bounds.lb),
    ];
    let mut penalty: f64 = blocks[0]
        .z
        .iter()
        .zip(&blocks[1].hz)
        .map(|(a, b)| a * b)
        .sum();

    while penalty > 0.0 {
        let mut removed = false;
        for (k, side) in [(0usize, Side::A), (1, Side::B)] {
            if blocks[k].count <= blocks[k].lower {
                continue;
            }
            let (this, other) = if k == 0 {
                let (a, b) = blocks.split_at_mut(1);
                (&mut a[0], &mut b[0])
            } else {
                let (a, b) = blocks.split_at_mut(1);
                (&mut b[0], &mut a[0])
            };
            let heap = this.heap.get_or_insert_with(|| {
                (0..this.z.len())
                    .filter(|&i| this.z[i] == 1.0 && other.hz[i] >= 1.0)
                    .map(|i| Candidate {
                        gain: gamma * other.hz[i] - c[i],
                        index: i,
                    })
                    .collect()
            });
            let mut chosen = None;
            while let Some(cand) = heap.pop() {
                let i = cand.index;
                if this.z[i] == 1.0 && this.weight - w[i] >= this.lower - FEAS_TOL {
                    chosen = Some(i);
                    break;
                }
            }
            let Some(i) = chosen else {
                continue;
            };
            log::trace!("make_separator: dropping vertex {i} from shore {side:?}");
            this.z[i] = 0.0;
            this.count -= 1.0;
            this.weight -= w[i];
            penalty -= other.hz[i];
            this.hz[i] -= 1.0;
            for &j in g.neighbors(i) {
                this.hz[j] -= 1.0;
            }
            // the other block's candidates were keyed on this block's product
            other.heap = None;
            removed = true;
            break;
        }
        if !removed {
            return Err(VsepError::PreconditionViolated(format!(
                "penalty {penalty} remains but neither shore can shrink \
                 (requires f >= gamma * (la + lb))"
            )));
        }
    }
    let [a, b] = blocks;
    Ok(ContinuousPoint::from_vectors(g, a.z, b.z))
}

/// Turns a binary point into a separated one without the objective
/// guarantee of [`make_separator`]; used when its precondition fails.
///
/// Vertices in both shores go to `S`. Each remaining `A`-`B` edge sends
/// one endpoint to `S`, preferring a shore with weight to spare. Shores
/// left below their lower bound are then refilled from `S` with vertices
/// that have no neighbor in the other shore, fewest neighbors first, then
/// highest cost. The result always has zero penalty but may miss a bound.
pub fn repair_separator(p: &SeparatorProblem<'_>, pt: &ContinuousPoint) -> Result<ContinuousPoint> {
    p.check_dims(pt)?;
    let g = p.graph();
    let w = p.weights();
    let c = p.costs();
    let bounds = p.bounds();
    let n = g.n();
    let mut labels = pt.labels();
    let mut weight = [0.0, 0.0];
    let slot = |l: Label| match l {
        Label::A => Some(0),
        Label::B => Some(1),
        Label::S => None,
    };
    for i in 0..n {
        if let Some(k) = slot(labels[i]) {
            weight[k] += w[i];
        }
    }
    let lower = [bounds.la, bounds.lb];
    let upper = [bounds.ua, bounds.ub];
    for u in 0..n {
        for &v in g.neighbors(u) {
            let (Some(ku), Some(kv)) = (slot(labels[u]), slot(labels[v])) else {
                continue;
            };
            if ku == kv {
                continue;
            }
            let spare_u = weight[ku] - w[u] - lower[ku];
            let spare_v = weight[kv] - w[v] - lower[kv];
            let drop = if spare_u >= spare_v { u } else { v };
            weight[slot(labels[drop]).unwrap()] -= w[drop];
            labels[drop] = Label::S;
            if drop == u {
                break;
            }
        }
    }
    for (k, label) in [(0, Label::A), (1, Label::B)] {
        if weight[k] >= lower[k] - FEAS_TOL {
            continue;
        }
        let other = if k == 0 { Label::B } else { Label::A };
        let mut cands: Vec<usize> = (0..n).filter(|&i| labels[i] == Label::S).collect();
        cands.sort_by(|&a, &b| {
            g.degree(a)
                .cmp(&g.degree(b))
                .then(c[b].total_cmp(&c[a]))
                .then(a.cmp(&b))
        });
        for i in cands {
            if weight[k] >= lower[k] - FEAS_TOL {
                break;
            }
            if weight[k] + w[i] <= upper[k] + FEAS_TOL
                && g.neighbors(i).iter().all(|&j| labels[j] != other)
            {
                labels[i] = label;
                weight[k] += w[i];
            }
        }
    }
    ContinuousPoint::from_labels(g, &labels)
}

/// Reads the partition off a binary point: `A = {x_i = 1}`, `B = {y_i = 1}`,
/// `S` the rest (fractional components count as 0).
///
/// Fails if a vertex sits in both shores or an edge joins them.
pub fn extract_partition(p: &SeparatorProblem<'_>, pt: &ContinuousPoint) -> Result<Partition> {
    p.check_dims(pt)?;
    if let Some(i) = (0..pt.n()).find(|&i| is_one(pt.x()[i]) && is_one(pt.y()[i])) {
        return Err(VsepError::InvalidSeparator { u: i + 1, v: i + 1 });
    }
    Partition::from_labels(p.graph(), pt.labels(), &p.bounds())
}
