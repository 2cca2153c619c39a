//! Multilevel solve: coarsen, refine at the coarsest level, then prolong and
//! refine level by level back to the input graph.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::coarsen::{build_hierarchy, prolong, MatchingRule};
use crate::error::{Result, VsepError};
use crate::graph::WeightedGraph;
use crate::perturb::{mca_gr, EscapeOptions, DEFAULT_DECREMENTS, DEFAULT_EPSILON};
use crate::qp::{
    extract_partition, force_binary, make_separator, push_fractional, repair_separator,
    round_mostly_binary, Bounds, ContinuousPoint, Label, Partition, SeparatorProblem, DEFAULT_ETA,
};

pub const DEFAULT_BALANCE: f64 = 0.6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Upper shore bound as a fraction of the total vertex weight.
    pub balance: f64,
    /// Lower shore bound (absolute weight).
    pub lower: f64,
    pub rule: MatchingRule,
    pub seed: u64,
    /// Penalty parameter; defaults to the largest vertex cost of each level.
    pub gamma: Option<f64>,
    pub epsilon: f64,
    pub eta: f64,
    pub decrements: usize,
    /// Only refine levels whose vertex count at least doubled since the
    /// last refined level (the coarsest and finest are always refined).
    pub refine_stride: bool,
    /// Run the plug-in refiner before the continuous refinement.
    pub fm_first: bool,
    /// Keep the start and final labels of every level in the stats.
    pub record_labels: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            balance: DEFAULT_BALANCE,
            lower: 1.0,
            rule: MatchingRule::HeavyEdge,
            seed: 0,
            gamma: None,
            epsilon: DEFAULT_EPSILON,
            eta: DEFAULT_ETA,
            decrements: DEFAULT_DECREMENTS,
            refine_stride: false,
            fm_first: false,
            record_labels: false,
        }
    }
}

/// External refinement pass (for example FM swaps) run on each level.
pub trait LevelRefiner: Sync {
    fn refine(&self, p: &SeparatorProblem<'_>, pt: ContinuousPoint) -> Result<ContinuousPoint>;
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LevelStats {
    /// 0 is the input graph.
    pub level: usize,
    pub n: usize,
    pub m: usize,
    pub gamma: f64,
    pub refined: bool,
    pub f_start: f64,
    /// `f` after the continuous refinement, before rounding.
    pub f_refined: f64,
    pub f_final: f64,
    /// Separator cost of the prolonged start; absent at the coarsest level.
    pub cost_start: Option<f64>,
    pub cost_final: f64,
    pub total_cost: f64,
    /// `100 * (cost_start - cost_final) / C(V)`.
    pub improvement_pct: Option<f64>,
    pub start_labels: Option<Vec<Label>>,
    pub final_labels: Option<Vec<Label>>,
    pub time_ms: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub bounds: Option<Bounds>,
    /// Coarsest level first.
    pub levels: Vec<LevelStats>,
    pub coarsen_ms: f64,
    pub refine_ms: f64,
    pub total_ms: f64,
}

impl RunStats {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn finest(&self) -> Option<&LevelStats> {
        self.levels.last()
    }
}

/// Improvement of a separator cost relative to the total cost, in percent.
pub fn improvement_pct(cost_start: f64, cost_final: f64, total_cost: f64) -> f64 {
    100.0 * (cost_start - cost_final) / total_cost
}

/// `la = lb = 1`, `ua = ub = floor(balance * W(V))`.
pub fn derive_bounds(g: &WeightedGraph, balance: f64) -> Result<Bounds> {
    derive_bounds_with_lower(g, balance, 1.0)
}

pub fn derive_bounds_with_lower(g: &WeightedGraph, balance: f64, lower: f64) -> Result<Bounds> {
    if !(balance > 0.0 && balance <= 1.0) {
        return Err(VsepError::InvalidArgument(format!(
            "balance must be in (0, 1], got {balance}"
        )));
    }
    let u = (balance * g.total_weight() + 1e-9).floor();
    if u < lower {
        return Err(VsepError::Infeasible(format!(
            "upper shore bound {u} is below the lower bound {lower}"
        )));
    }
    let bounds = Bounds::symmetric(lower, u);
    bounds.check(g.total_weight())?;
    Ok(bounds)
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

pub fn solve(g: &WeightedGraph, opts: &SolveOptions) -> Result<(Partition, RunStats)> {
    solve_with(g, opts, None)
}

pub fn solve_with(
    g: &WeightedGraph,
    opts: &SolveOptions,
    refiner: Option<&dyn LevelRefiner>,
) -> Result<(Partition, RunStats)> {
    let t_total = Instant::now();
    let bounds = derive_bounds_with_lower(g, opts.balance, opts.lower)?;
    SeparatorProblem::new(g, bounds)?;
    let escape = EscapeOptions {
        epsilon: opts.epsilon,
        decrements: opts.decrements,
    };

    let t = Instant::now();
    let hierarchy = build_hierarchy(g, opts.rule, opts.seed);
    let mut stats = RunStats {
        bounds: Some(bounds),
        coarsen_ms: ms(t),
        ..RunStats::default()
    };
    log::info!(
        "hierarchy: {} levels, coarsest {} vertices",
        hierarchy.depth(),
        hierarchy.coarsest().n()
    );

    let t_refine = Instant::now();
    // contraction keeps a complete graph complete, so cut the hierarchy at
    // the first level that has no separator
    let depth = hierarchy
        .levels()
        .iter()
        .take_while(|lg| SeparatorProblem::new(lg, bounds).is_ok())
        .count();
    let mut carried: Option<ContinuousPoint> = None;
    let mut last_refined_n = 0usize;
    for level in (0..depth).rev() {
        let t = Instant::now();
        let lg = &hierarchy.levels()[level];
        let gamma = opts.gamma.unwrap_or_else(|| lg.max_cost());
        let p = SeparatorProblem::new(lg, bounds)?
            .with_gamma(gamma)
            .with_eta(opts.eta);
        let start = match carried.take() {
            None => p.uniform_start(),
            Some(coarse) => prolong(&coarse, &hierarchy.matchings()[level], lg)?,
        };
        let coarsest = level + 1 == depth;
        let refine = !opts.refine_stride || coarsest || level == 0 || lg.n() >= 2 * last_refined_n;
        let f_start = p.objective(&start);
        let start_labels = (!coarsest).then(|| start.labels());
        let cost_start = start_labels.as_ref().map(|l| separator_cost(lg, l));

        let (point, f_refined) = if refine {
            last_refined_n = lg.n();
            refine_level(
                &p,
                start.clone(),
                &escape,
                opts.fm_first.then_some(refiner).flatten(),
            )?
        } else {
            (Ok(start.clone()), f_start)
        };
        // never hand back something worse than a valid prolonged start
        let point = match (&start_labels, &point) {
            (Some(_), Ok(pt)) if p.objective(pt) >= f_start => point,
            (Some(_), _) => {
                log::debug!("level {level}: keeping prolonged start");
                Ok(start)
            }
            (None, _) => point,
        }?;
        let part = extract_partition(&p, &point)?;
        let total_cost = lg.total_cost();
        let cost_final = part.cost_s;
        stats.levels.push(LevelStats {
            level,
            n: lg.n(),
            m: lg.num_edges(),
            gamma,
            refined: refine,
            f_start,
            f_refined,
            f_final: p.objective(&point),
            cost_start,
            cost_final,
            total_cost,
            improvement_pct: cost_start.map(|c| improvement_pct(c, cost_final, total_cost)),
            start_labels: if opts.record_labels {
                start_labels
            } else {
                None
            },
            final_labels: opts.record_labels.then(|| part.labels.clone()),
            time_ms: ms(t),
        });
        log::debug!(
            "level {level}: n = {}, f {f_start} -> {f_refined}, cost_S = {cost_final}",
            lg.n()
        );
        if level == 0 {
            stats.refine_ms = ms(t_refine);
            stats.total_ms = ms(t_total);
            return Ok((part, stats));
        }
        carried = Some(point);
    }
    unreachable!("hierarchy has at least one level")
}

fn separator_cost(g: &WeightedGraph, labels: &[Label]) -> f64 {
    labels
        .iter()
        .zip(g.costs())
        .filter(|(l, _)| **l == Label::S)
        .map(|(_, c)| c)
        .sum()
}

/// Continuous refinement then rounding to a separated binary point. The
/// second element is `f` right after the continuous phase.
fn refine_level(
    p: &SeparatorProblem<'_>,
    start: ContinuousPoint,
    escape: &EscapeOptions,
    refiner: Option<&dyn LevelRefiner>,
) -> Result<(Result<ContinuousPoint>, f64)> {
    let start = match refiner {
        Some(r) => r.refine(p, start)?,
        None => start,
    };
    let (pt, _) = mca_gr(p, start, escape)?;
    let f_refined = p.objective(&pt);
    let pt = round_mostly_binary(p, pt);
    let pt = push_fractional(p, pt);
    let pt = force_binary(p, pt);
    let separated = match make_separator(p, pt.clone()) {
        Err(VsepError::PreconditionViolated(msg)) => {
            log::debug!("make_separator: {msg}; repairing");
            repair_separator(p, &pt)
        }
        other => other,
    };
    Ok((separated, f_refined))
}
