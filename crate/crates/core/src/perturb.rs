//! Stationarity certificates and the escape loops built on them.
//!
//! A feasible point is first-order stationary for one block when no
//! direction from `{±e_i} ∪ {w_j e_i - w_i e_j}` that stays feasible
//! increases `f`. Stationary points that are not local maxima are left by
//! perturbing the costs slightly ([`mca_cp`]) or by temporarily lowering the
//! penalty parameter ([`mca_gr`]).

use serde::{Deserialize, Serialize};

use crate::error::{Result, VsepError};
use crate::qp::{dot, is_one, is_zero, mca, ContinuousPoint, SeparatorProblem, Side, FEAS_TOL};

/// Multipliers with `|mu_i|` below this mark an index as a perturbation
/// candidate.
pub const MU_THRESHOLD: f64 = 1e-5;
pub const DEFAULT_EPSILON: f64 = 1e-6;
/// Slack allowed in directional derivatives by the optimality checks.
pub const STATIONARITY_TOL: f64 = 1e-9;
/// An outer-loop trial is accepted only if it beats the best `f` by this.
pub const STRICT_IMPROVEMENT: f64 = 1e-9;
pub const DEFAULT_DECREMENTS: usize = 10;
pub const LOCAL_MAX_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KktCertificate {
    pub mu_a: Vec<f64>,
    pub mu_b: Vec<f64>,
    pub lambda_a: f64,
    pub lambda_b: f64,
    /// Largest sign violation among the `mu` entries.
    pub residual: f64,
}

impl KktCertificate {
    pub fn mu(&self, side: Side) -> &[f64] {
        match side {
            Side::A => &self.mu_a,
            Side::B => &self.mu_b,
        }
    }

    pub fn lambda(&self, side: Side) -> f64 {
        match side {
            Side::A => self.lambda_a,
            Side::B => self.lambda_b,
        }
    }
}

/// Which knapsack bounds are tight for one block.
#[derive(Clone, Copy, Debug)]
struct Activity {
    lower: bool,
    upper: bool,
}

fn activity(p: &SeparatorProblem<'_>, z: &[f64], side: Side) -> Activity {
    let wz = dot(p.weights(), z);
    let b = p.bounds();
    Activity {
        lower: (wz - b.lower(side)).abs() <= FEAS_TOL,
        upper: (wz - b.upper(side)).abs() <= FEAS_TOL,
    }
}

fn block_multipliers(g: &[f64], z: &[f64], w: &[f64], act: Activity) -> (Vec<f64>, f64, f64) {
    // mu = -g - lambda w must be >= 0 at zeros, <= 0 at ones and 0 between,
    // which confines lambda to [lo, hi].
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for i in 0..z.len() {
        let r = -g[i] / w[i];
        if !is_zero(z[i]) {
            lo = lo.max(r);
        }
        if !is_one(z[i]) {
            hi = hi.min(r);
        }
    }
    let (slo, shi) = match (act.lower, act.upper) {
        (true, true) => (f64::NEG_INFINITY, f64::INFINITY),
        (true, false) => (0.0, f64::INFINITY),
        (false, true) => (f64::NEG_INFINITY, 0.0),
        (false, false) => (0.0, 0.0),
    };
    let lambda = if lo <= hi {
        let a = lo.max(slo);
        let b = hi.min(shi);
        if a <= b {
            0.0f64.clamp(a, b)
        } else {
            0.0f64.clamp(lo, hi).clamp(slo, shi)
        }
    } else {
        // no exact multiplier; split the violation
        ((lo + hi) / 2.0).clamp(slo, shi)
    };
    let lambda = lambda + 0.0;
    let mut residual: f64 = 0.0;
    let mu: Vec<f64> = (0..z.len())
        .map(|i| {
            let m = -g[i] - lambda * w[i];
            let violation = if is_zero(z[i]) {
                (-m).max(0.0)
            } else if is_one(z[i]) {
                m.max(0.0)
            } else {
                m.abs()
            };
            residual = residual.max(violation);
            m
        })
        .collect();
    (mu, lambda, residual)
}

/// Recovers `(mu, lambda)` for both blocks with `-grad f = mu + lambda w`.
///
/// `lambda` is the sign-admissible value nearest zero that makes every
/// `mu_i` sign-correct; when none exists the residual records how far off
/// the best choice is.
pub fn kkt_multipliers(p: &SeparatorProblem<'_>, pt: &ContinuousPoint) -> KktCertificate {
    let w = p.weights();
    let (mu_a, lambda_a, ra) = block_multipliers(
        &p.gradient(pt, Side::A),
        pt.x(),
        w,
        activity(p, pt.x(), Side::A),
    );
    let (mu_b, lambda_b, rb) = block_multipliers(
        &p.gradient(pt, Side::B),
        pt.y(),
        w,
        activity(p, pt.y(), Side::B),
    );
    KktCertificate {
        mu_a,
        mu_b,
        lambda_a,
        lambda_b,
        residual: ra.max(rb),
    }
}

/// Tracks the two largest values with their indices.
#[derive(Clone, Copy)]
struct Top2 {
    best: (f64, usize),
    second: (f64, usize),
}

impl Top2 {
    fn new() -> Self {
        Self {
            best: (f64::NEG_INFINITY, usize::MAX),
            second: (f64::NEG_INFINITY, usize::MAX),
        }
    }

    fn push(&mut self, v: f64, i: usize) {
        if v > self.best.0 {
            self.second = self.best;
            self.best = (v, i);
        } else if v > self.second.0 {
            self.second = (v, i);
        }
    }
}

/// Largest directional derivative of `f` along feasible directions from
/// `{±e_i} ∪ {w_j e_i - w_i e_j}` (pair directions scaled by `1/(w_i w_j)`)
/// for one block. Non-positive means stationary in that block.
pub fn max_ascent(p: &SeparatorProblem<'_>, pt: &ContinuousPoint, side: Side) -> f64 {
    let g = p.gradient(pt, side);
    let z = pt.side(side);
    let w = p.weights();
    let act = activity(p, z, side);
    let mut worst = f64::NEG_INFINITY;
    let mut raise = Top2::new();
    let mut lower = Top2::new();
    for i in 0..z.len() {
        let r = g[i] / w[i];
        if !is_one(z[i]) {
            if !act.upper {
                worst = worst.max(g[i]);
            }
            raise.push(r, i);
        }
        if !is_zero(z[i]) {
            if !act.lower {
                worst = worst.max(-g[i]);
            }
            lower.push(-r, i);
        }
    }
    let pair = |a: (f64, usize), b: (f64, usize)| {
        if a.1 == usize::MAX || b.1 == usize::MAX || a.1 == b.1 {
            f64::NEG_INFINITY
        } else {
            a.0 + b.0
        }
    };
    worst
        .max(pair(raise.best, lower.best))
        .max(pair(raise.best, lower.second))
        .max(pair(raise.second, lower.best))
}

/// First-order condition for one block.
pub fn check_first_order_side(p: &SeparatorProblem<'_>, pt: &ContinuousPoint, side: Side) -> bool {
    max_ascent(p, pt, side) <= STATIONARITY_TOL
}

/// First-order stationarity in both blocks.
pub fn check_first_order(p: &SeparatorProblem<'_>, pt: &ContinuousPoint) -> bool {
    check_first_order_side(p, pt, Side::A) && check_first_order_side(p, pt, Side::B)
}

/// A direction with at most two nonzero entries.
#[derive(Clone, Copy, Debug)]
struct Dir {
    terms: [(usize, f64); 2],
}

fn critical_directions(p: &SeparatorProblem<'_>, pt: &ContinuousPoint, side: Side) -> Vec<Dir> {
    let g = p.gradient(pt, side);
    let z = pt.side(side);
    let w = p.weights();
    let act = activity(p, z, side);
    let critical = |d: f64| d.abs() <= STATIONARITY_TOL;
    let mut out = Vec::new();
    for i in 0..z.len() {
        if !is_one(z[i]) && !act.upper && critical(g[i]) {
            out.push(Dir {
                terms: [(i, 1.0), (i, 0.0)],
            });
        }
        if !is_zero(z[i]) && !act.lower && critical(g[i]) {
            out.push(Dir {
                terms: [(i, -1.0), (i, 0.0)],
            });
        }
        if is_one(z[i]) {
            continue;
        }
        for j in 0..z.len() {
            if j != i && !is_zero(z[j]) && critical(w[j] * g[i] - w[i] * g[j]) {
                out.push(Dir {
                    terms: [(i, w[j]), (j, -w[i])],
                });
            }
        }
    }
    out
}

/// Second-order test over the critical directions (small graphs only).
///
/// Requires first-order stationarity, then checks that
/// `-gamma * u' H v <= tol` for every critical `u` of the `x` block and
/// critical `v` of the `y` block.
pub fn check_local_max(p: &SeparatorProblem<'_>, pt: &ContinuousPoint) -> Result<bool> {
    check_local_max_capped(p, pt, LOCAL_MAX_CAP)
}

pub fn check_local_max_capped(
    p: &SeparatorProblem<'_>,
    pt: &ContinuousPoint,
    cap: usize,
) -> Result<bool> {
    let n = p.n();
    if n > cap {
        return Err(VsepError::SizeCap { n, cap });
    }
    if pt.n() != n {
        return Err(VsepError::DimensionMismatch {
            expected: n,
            found: pt.n(),
        });
    }
    if !check_first_order(p, pt) {
        return Ok(false);
    }
    let g = p.graph();
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        h[i * n + i] = 1.0;
        for &j in g.neighbors(i) {
            h[i * n + j] = 1.0;
        }
    }
    let du = critical_directions(p, pt, Side::A);
    let dv = critical_directions(p, pt, Side::B);
    for u in &du {
        for v in &dv {
            let mut uhv = 0.0;
            for &(i, a) in &u.terms {
                for &(j, b) in &v.terms {
                    uhv += a * b * h[i * n + j];
                }
            }
            if -p.gamma() * uhv > STATIONARITY_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Cost shifts from one block: `+epsilon` where `z_i < 0.5`, `-epsilon`
/// otherwise, at every index with `|mu_i| < MU_THRESHOLD`.
pub fn c_perturb_side(
    pt: &ContinuousPoint,
    cert: &KktCertificate,
    side: Side,
    epsilon: f64,
) -> Vec<f64> {
    let z = pt.side(side);
    cert.mu(side)
        .iter()
        .zip(z)
        .map(|(&m, &v)| match (m.abs() < MU_THRESHOLD, v < 0.5) {
            (false, _) => 0.0,
            (true, true) => epsilon,
            (true, false) => -epsilon,
        })
        .collect()
}

/// Perturbed costs: both blocks' shifts added to `c`. Returns `c` unchanged
/// when no index qualifies.
pub fn c_perturb(
    p: &SeparatorProblem<'_>,
    pt: &ContinuousPoint,
    cert: &KktCertificate,
    epsilon: f64,
) -> Vec<f64> {
    let da = c_perturb_side(pt, cert, Side::A, epsilon);
    let db = c_perturb_side(pt, cert, Side::B, epsilon);
    p.costs()
        .iter()
        .zip(da.iter().zip(&db))
        .map(|(c, (a, b))| c + a + b)
        .collect()
}

/// `max { c_j / (H z_other)_j : z_j < 1, (H z_other)_j > 0 }`, or `-inf`.
///
/// Below this value of gamma some `e_j` becomes an ascent direction.
pub fn alpha1(p: &SeparatorProblem<'_>, pt: &ContinuousPoint, side: Side) -> f64 {
    let z = pt.side(side);
    let h_other = match side {
        Side::A => pt.hy(),
        Side::B => pt.hx(),
    };
    let c = p.costs();
    (0..z.len())
        .filter(|&j| !is_one(z[j]) && h_other[j] > 0.0)
        .map(|j| c[j] / h_other[j])
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Starting gamma for the refinement schedule: the larger `alpha1` over
/// blocks whose weight sum is strictly between its bounds.
pub fn alpha1_start(p: &SeparatorProblem<'_>, pt: &ContinuousPoint) -> f64 {
    [Side::A, Side::B]
        .into_iter()
        .filter(|&side| {
            let act = activity(p, pt.side(side), side);
            !act.lower && !act.upper
        })
        .map(|side| alpha1(p, pt, side))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Infimum of the gammas keeping every pair direction non-ascending for a
/// block at its upper weight bound, clamped to `[0, gamma]`.
pub fn alpha2(p: &SeparatorProblem<'_>, pt: &ContinuousPoint, side: Side) -> Result<f64> {
    let z = pt.side(side);
    if !activity(p, z, side).upper {
        return Err(VsepError::PreconditionViolated(
            "alpha2 needs the block at its upper weight bound".into(),
        ));
    }
    let h = match side {
        Side::A => pt.hy(),
        Side::B => pt.hx(),
    };
    let c = p.costs();
    let w = p.weights();
    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    for i in (0..z.len()).filter(|&i| !is_one(z[i])) {
        for j in (0..z.len()).filter(|&j| j != i && !is_zero(z[j])) {
            // (c_i - a h_i) / w_i <= (c_j - a h_j) / w_j  <=>  a * s <= t
            let s = h[j] / w[j] - h[i] / w[i];
            let t = c[j] / w[j] - c[i] / w[i];
            if s < 0.0 {
                lower = lower.max(t / s);
            } else if s > 0.0 {
                upper = upper.min(t / s);
            } else if t < 0.0 {
                upper = f64::NEG_INFINITY;
            }
        }
    }
    let inf = if lower <= upper { lower } else { f64::INFINITY };
    Ok(inf.min(p.gamma()).max(0.0) + 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EscapeOptions {
    pub epsilon: f64,
    /// Number of equal steps from `alpha1` down to 0.
    pub decrements: usize,
}

impl Default for EscapeOptions {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            decrements: DEFAULT_DECREMENTS,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CpReport {
    /// Perturbation rounds attempted, including the final unsuccessful one.
    pub rounds: usize,
    pub improvements: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GrReport {
    pub alpha1: Option<f64>,
    /// Every reduced gamma tried, in order.
    pub gammas_tried: Vec<f64>,
    /// Schedule restarts after an improvement.
    pub resets: usize,
    /// Best `f` after the initial `mca_cp` and after each accepted trial.
    pub best_trace: Vec<f64>,
}

/// Mountain climbing with cost perturbations.
pub fn mca_cp(
    p: &SeparatorProblem<'_>,
    pt: ContinuousPoint,
    opts: &EscapeOptions,
) -> Result<(ContinuousPoint, CpReport)> {
    let mut report = CpReport::default();
    let mut best = mca(p, pt)?;
    let mut f_best = p.objective(&best);
    loop {
        let cert = kkt_multipliers(p, &best);
        let costs = c_perturb(p, &best, &cert, opts.epsilon);
        if costs.as_slice() == p.costs() {
            break;
        }
        report.rounds += 1;
        let perturbed = p.with_costs(costs)?;
        let trial = mca(&perturbed, best.clone())?;
        let trial = mca(p, trial)?;
        let f = p.objective(&trial);
        if f > f_best + STRICT_IMPROVEMENT {
            log::trace!("mca_cp: {f_best} -> {f}");
            best = trial;
            f_best = f;
            report.improvements += 1;
        } else {
            break;
        }
    }
    Ok((best, report))
}

/// Mountain climbing with cost perturbations and gamma refinement.
///
/// After [`mca_cp`], gamma is lowered from `alpha1` to 0 in equal steps;
/// at each value `mca_cp` runs under the reduced gamma and then under the
/// original one. An improvement restarts the schedule from the new point's
/// `alpha1`. Skipped when `alpha1` is not a positive finite number.
pub fn mca_gr(
    p: &SeparatorProblem<'_>,
    pt: ContinuousPoint,
    opts: &EscapeOptions,
) -> Result<(ContinuousPoint, GrReport)> {
    let mut report = GrReport::default();
    let (mut best, _) = mca_cp(p, pt, opts)?;
    let mut f_best = p.objective(&best);
    report.best_trace.push(f_best);
    let steps = opts.decrements.max(1);
    let mut a1 = alpha1_start(p, &best);
    report.alpha1 = Some(a1);
    let mut k = 1;
    while a1.is_finite() && a1 > 0.0 && k <= steps {
        let gamma = a1 * (steps - k) as f64 / steps as f64;
        report.gammas_tried.push(gamma);
        let relaxed = p.with_gamma_value(gamma);
        let (trial, _) = mca_cp(&relaxed, best.clone(), opts)?;
        let (trial, _) = mca_cp(p, trial, opts)?;
        let f = p.objective(&trial);
        if f > f_best + STRICT_IMPROVEMENT {
            log::trace!("mca_gr: gamma {gamma}: {f_best} -> {f}");
            best = trial;
            f_best = f;
            report.best_trace.push(f);
            report.resets += 1;
            a1 = alpha1_start(p, &best);
            k = 1;
        } else {
            k += 1;
        }
    }
    Ok((best, report))
}
