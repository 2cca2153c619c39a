use super::{dot, is_binary, is_one, is_zero, ContinuousPoint, SeparatorProblem, Side, FEAS_TOL};

/// Moves pairs of fractional components along `e_i / w_i - e_j / w_j` until
/// each block has at most one fractional component.
///
/// The direction of travel follows the sign of the directional derivative
/// (ties increase `z_i`), so `f` does not decrease and `w'x`, `w'y` are
/// unchanged up to rounding.
pub fn round_mostly_binary(p: &SeparatorProblem<'_>, mut pt: ContinuousPoint) -> ContinuousPoint {
    let g = p.graph();
    let w = p.weights();
    for side in [Side::A, Side::B] {
        let grad = p.gradient(&pt, side);
        let z = pt.side_mut(side);
        let mut carry: Option<usize> = None;
        let mut changed = false;
        for j in 0..z.len() {
            if is_binary(z[j]) {
                continue;
            }
            let Some(i) = carry else {
                carry = Some(j);
                continue;
            };
            changed = true;
            let d = grad[i] / w[i] - grad[j] / w[j];
            if d >= 0.0 {
                let room_i = (1.0 - z[i]) * w[i];
                let room_j = z[j] * w[j];
                if room_i <= room_j {
                    z[i] = 1.0;
                    z[j] -= room_i / w[j];
                } else {
                    z[j] = 0.0;
                    z[i] += room_j / w[i];
                }
            } else {
                let room_i = z[i] * w[i];
                let room_j = (1.0 - z[j]) * w[j];
                if room_i <= room_j {
                    z[i] = 0.0;
                    z[j] += room_i / w[j];
                } else {
                    z[j] = 1.0;
                    z[i] -= room_j / w[i];
                }
            }
            carry = match (is_binary(z[i]), is_binary(z[j])) {
                (false, _) => Some(i),
                (true, false) => Some(j),
                (true, true) => None,
            };
        }
        if changed {
            let z = pt.side(side).to_vec();
            pt.set_side(g, side, z);
        }
    }
    pt
}

/// Pushes a lone fractional component of each block to 0 or 1.
///
/// When both moves keep `w'z` within its bounds, the sign of `df/dz_i`
/// decides (ties go to 0). When only one move is feasible it is taken if
/// it does not decrease `f`; otherwise the component stays fractional.
/// Blocks with zero or several fractional components are left alone.
pub fn push_fractional(p: &SeparatorProblem<'_>, mut pt: ContinuousPoint) -> ContinuousPoint {
    let g = p.graph();
    let w = p.weights();
    let bounds = p.bounds();
    for side in [Side::A, Side::B] {
        let frac = pt.fractional_indices(side);
        let &[i] = frac.as_slice() else {
            continue;
        };
        let d = p.gradient(&pt, side)[i];
        let z = pt.side(side);
        let wz = dot(w, z);
        let up_ok = wz + w[i] * (1.0 - z[i]) <= bounds.upper(side) + FEAS_TOL;
        let down_ok = wz - w[i] * z[i] >= bounds.lower(side) - FEAS_TOL;
        let target = match (up_ok, down_ok) {
            (true, true) => Some(if d > 0.0 { 1.0 } else { 0.0 }),
            (true, false) if d >= 0.0 => Some(1.0),
            (false, true) if d <= 0.0 => Some(0.0),
            _ => None,
        };
        if let Some(v) = target {
            let mut z = z.to_vec();
            z[i] = v;
            pt.set_side(g, side, z);
        }
    }
    pt
}

/// Makes every component exactly 0 or 1.
///
/// Components within tolerance of a bound are snapped. Each remaining
/// fractional component is compared in two settings, since `f` is linear
/// in one block: rounded up, or rounded down and the block then refilled
/// to its lower bound with the zero components of largest partial
/// derivative. The feasible option with the larger gain wins; if neither is
/// feasible the component goes to 0. Unlike [`push_fractional`], `f` may
/// decrease.
pub fn force_binary(p: &SeparatorProblem<'_>, mut pt: ContinuousPoint) -> ContinuousPoint {
    let g = p.graph();
    let w = p.weights();
    let bounds = p.bounds();
    for side in [Side::A, Side::B] {
        let (lower, upper) = (bounds.lower(side), bounds.upper(side));
        let mut z = pt.side(side).to_vec();
        let mut frac = Vec::new();
        for (i, v) in z.iter_mut().enumerate() {
            if is_zero(*v) {
                *v = 0.0;
            } else if is_one(*v) {
                *v = 1.0;
            } else {
                frac.push(i);
            }
        }
        if frac.is_empty() {
            if z != pt.side(side) {
                pt.set_side(g, side, z);
            }
            continue;
        }
        let d = p.gradient(&pt, side);
        for i in frac {
            let wz = dot(w, &z);
            let up = (wz + w[i] * (1.0 - z[i]) <= upper + FEAS_TOL).then(|| d[i] * (1.0 - z[i]));
            let down_weight = wz - w[i] * z[i];
            let refill = if down_weight >= lower - FEAS_TOL {
                Some((0.0, Vec::new()))
            } else {
                refill_to_lower(&z, w, &d, i, down_weight, lower, upper)
            };
            let down = refill.map(|(gain, picks)| (gain - d[i] * z[i], picks));
            match (up, down) {
                (Some(gu), Some((gd, _))) if gu >= gd => z[i] = 1.0,
                (Some(_), None) => z[i] = 1.0,
                (_, Some((_, picks))) => {
                    z[i] = 0.0;
                    for j in picks {
                        z[j] = 1.0;
                    }
                }
                (None, None) => z[i] = 0.0,
            }
        }
        pt.set_side(g, side, z);
    }
    pt
}

/// Zero components (other than `skip`) to raise `weight` to `lower` without
/// passing `upper`, best partial derivative first. Returns their total
/// gain, or `None` if the bound cannot be reached.
fn refill_to_lower(
    z: &[f64],
    w: &[f64],
    d: &[f64],
    skip: usize,
    mut weight: f64,
    lower: f64,
    upper: f64,
) -> Option<(f64, Vec<usize>)> {
    let mut order: Vec<usize> = (0..z.len()).filter(|&j| j != skip && z[j] == 0.0).collect();
    order.sort_by(|&a, &b| d[b].total_cmp(&d[a]).then(a.cmp(&b)));
    let mut gain = 0.0;
    let mut picks = Vec::new();
    for j in order {
        if weight >= lower - FEAS_TOL {
            break;
        }
        if weight + w[j] <= upper + FEAS_TOL {
            weight += w[j];
            gain += d[j];
            picks.push(j);
        }
    }
    (weight >= lower - FEAS_TOL).then_some((gain, picks))
}
