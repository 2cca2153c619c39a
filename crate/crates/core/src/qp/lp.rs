use super::{dot, SeparatorProblem, Side};
use crate::error::{Result, VsepError};

/// Maximizes `gradient' z` over `{0 <= z <= 1, lower <= w'z <= upper}`.
///
/// Components are visited in decreasing order of `gradient_i / w_i` (ties by
/// index) and raised from 0 toward 1 while the ratio is positive and the
/// upper bound has room; the last one may stop fractionally. If `w'z` is
/// still below `lower`, filling continues through the non-positive ratios
/// until the lower bound is met exactly.
pub fn greedy_lp(gradient: &[f64], weights: &[f64], lower: f64, upper: f64) -> Result<Vec<f64>> {
    let n = gradient.len();
    if weights.len() != n {
        return Err(VsepError::DimensionMismatch {
            expected: n,
            found: weights.len(),
        });
    }
    let total: f64 = weights.iter().sum();
    if lower > upper || lower > total {
        return Err(VsepError::Infeasible(format!(
            "knapsack bounds [{lower}, {upper}] infeasible for total weight {total}"
        )));
    }

    let desc = |a: &(f64, usize), b: &(f64, usize)| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1));
    let (mut positive, mut rest): (Vec<_>, Vec<_>) = (0..n)
        .map(|i| (gradient[i] / weights[i], i))
        .partition(|&(r, _): &(f64, usize)| r > 0.0);
    positive.sort_unstable_by(desc);

    let mut z = vec![0.0; n];
    let mut filled = 0.0;
    let mut k = 0;
    while k < positive.len() && filled < upper {
        let i = positive[k].1;
        let room = upper - filled;
        if weights[i] <= room {
            z[i] = 1.0;
            filled += weights[i];
        } else {
            z[i] = room / weights[i];
            filled = upper;
        }
        k += 1;
    }
    if filled < lower {
        // only reachable when every positive ratio is already at 1
        rest.sort_unstable_by(desc);
        for &(_, i) in &rest {
            if filled >= lower {
                break;
            }
            let need = lower - filled;
            if weights[i] <= need {
                z[i] = 1.0;
                filled += weights[i];
            } else {
                z[i] = need / weights[i];
                filled = lower;
            }
        }
    }
    Ok(z)
}

/// Objective value `gradient' z` at the greedy maximizer.
pub fn greedy_lp_value(gradient: &[f64], weights: &[f64], lower: f64, upper: f64) -> Result<f64> {
    Ok(dot(gradient, &greedy_lp(gradient, weights, lower, upper)?))
}

impl SeparatorProblem<'_> {
    /// Maximizer of the linear function `gradient' z` over the feasible set
    /// of one block.
    pub fn lp_maximizer(&self, gradient: &[f64], side: Side) -> Result<Vec<f64>> {
        let b = self.bounds();
        greedy_lp(gradient, self.weights(), b.lower(side), b.upper(side))
    }
}
