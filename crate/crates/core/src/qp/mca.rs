use super::{ContinuousPoint, SeparatorProblem, Side};
use crate::error::Result;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct McaReport {
    /// Accepted steps.
    pub iterations: usize,
    pub joint_steps: usize,
    /// Objective after each accepted step, starting with the input value.
    /// Empty unless tracing was requested.
    pub trace: Vec<f64>,
}

#[derive(Clone, Copy)]
enum NextSolve {
    Both,
    Only(Side),
}

/// Mountain climbing: alternating linear maximization in `x` and `y`.
///
/// Both block maximizers `x^` and `y^` are computed; the joint step is
/// taken only when it beats the better single step by at least `eta`.
/// After a single step the other block is the only one that can improve,
/// so just that linear program is solved next. Stops when the best step
/// gains no more than the problem's improvement tolerance; `f` never
/// decreases.
pub fn mca(p: &SeparatorProblem<'_>, pt: ContinuousPoint) -> Result<ContinuousPoint> {
    mca_traced(p, pt, false).map(|(pt, _)| pt)
}

pub fn mca_traced(
    p: &SeparatorProblem<'_>,
    mut pt: ContinuousPoint,
    record: bool,
) -> Result<(ContinuousPoint, McaReport)> {
    p.check_dims(&pt)?;
    let g = p.graph();
    let mut report = McaReport::default();
    let mut f = p.objective(&pt);
    if record {
        report.trace.push(f);
    }
    let mut next = NextSolve::Both;
    loop {
        let tol = p.improve_tol(f);
        match next {
            NextSolve::Both => {
                let x_hat = p.lp_maximizer(&p.gradient(&pt, Side::A), Side::A)?;
                let y_hat = p.lp_maximizer(&p.gradient(&pt, Side::B), Side::B)?;
                let hy_hat = g.h_times(&y_hat);
                let f_x = p.objective_of(&x_hat, pt.y(), pt.hy());
                let f_y = p.objective_of(pt.x(), &y_hat, &hy_hat);
                let f_xy = p.objective_of(&x_hat, &y_hat, &hy_hat);
                if f_xy > f_x.max(f_y) + p.eta() && f_xy - f > tol {
                    let hx_hat = g.h_times(&x_hat);
                    pt.set_side_cached(Side::A, x_hat, hx_hat);
                    pt.set_side_cached(Side::B, y_hat, hy_hat);
                    f = f_xy;
                    report.joint_steps += 1;
                } else if f_x > f_y {
                    if f_x - f <= tol {
                        break;
                    }
                    let hx_hat = g.h_times(&x_hat);
                    pt.set_side_cached(Side::A, x_hat, hx_hat);
                    f = f_x;
                    next = NextSolve::Only(Side::B);
                } else {
                    if f_y - f <= tol {
                        break;
                    }
                    pt.set_side_cached(Side::B, y_hat, hy_hat);
                    f = f_y;
                    next = NextSolve::Only(Side::A);
                }
            }
            NextSolve::Only(side) => {
                let z_hat = p.lp_maximizer(&p.gradient(&pt, side), side)?;
                let hz_hat = g.h_times(&z_hat);
                let f_new = match side {
                    Side::A => p.objective_of(&z_hat, pt.y(), pt.hy()),
                    Side::B => p.objective_of(pt.x(), &z_hat, &hz_hat),
                };
                if f_new - f <= tol {
                    break;
                }
                pt.set_side_cached(side, z_hat, hz_hat);
                f = f_new;
                next = NextSolve::Only(side.other());
            }
        }
        report.iterations += 1;
        if record {
            report.trace.push(f);
        }
    }
    log::trace!("mca: {} steps, f = {f}", report.iterations);
    Ok((pt, report))
}
