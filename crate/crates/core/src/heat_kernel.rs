//! The linear comparison temperature
//!
//! `theta2(x, t) = theta- + int_0^inf (4 pi a t)^{-1/2} (Theta0(h) - theta-)
//!                 [exp(-(h-x)^2 / 4at) - exp(-(h+x)^2 / 4at)] dh`,
//!
//! the half-line heat semigroup with Dirichlet value `theta-` applied to
//! `Theta0`, computed by locally adaptive trapezoid quadrature with
//! Richardson correction.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::profile::{theta0_eval, ProfileState};
use crate::stencil::{central_time_derivative, d2};
use crate::types::{Delta0, EndStates, GasParams, Grid};

pub const DEFAULT_TOL: f64 = 1e-8;

/// Panels are split at most this many times.
const MAX_DEPTH: u32 = 40;
/// Integrand evaluations allowed per query.
const EVAL_BUDGET: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelQuery {
    pub x: f64,
    pub t: f64,
    pub tol: f64,
}

impl KernelQuery {
    pub fn new(x: f64, t: f64, tol: f64) -> Result<Self> {
        if !(x >= 0.0) {
            return Err(Error::domain("x", "must be non-negative"));
        }
        if !(t > 0.0) {
            return Err(Error::domain("t", "must be positive"));
        }
        if !(tol > 0.0 && tol <= 1e-4) {
            return Err(Error::domain("tol", "must lie in (0, 1e-4]"));
        }
        Ok(KernelQuery { x, t, tol })
    }
}

/// Evaluates `theta2(x, t)`.
///
/// The integral is truncated to `|h - x| <= 8 sqrt(4at)` and each panel is
/// bisected until the two-interval trapezoid sum, corrected by one Richardson
/// step, agrees with the one-interval sum to within the panel's share of
/// `tol * max(theta-, theta+)`.
pub fn theta2_eval(
    query: KernelQuery,
    delta0: Delta0,
    states: &EndStates,
    gas: &GasParams,
) -> Result<f64> {
    let KernelQuery { x, t, tol } = query;
    if states.is_degenerate() {
        return Ok(states.theta_minus);
    }
    let at = gas.a() * t;
    let norm = 1.0 / (4.0 * PI * at).sqrt();
    let integrand = |h: f64| {
        if h <= 0.0 {
            return 0.0;
        }
        let base = theta0_eval(h, delta0, states).unwrap() - states.theta_minus;
        // e^{-(h-x)^2/4at} - e^{-(h+x)^2/4at} = e^{-(h-x)^2/4at} (1 - e^{-hx/at})
        let kernel = (-(h - x).powi(2) / (4.0 * at)).exp() * -(-h * x / at).exp_m1();
        norm * base * kernel
    };

    let radius = 8.0 * (4.0 * at).sqrt();
    let (lo, hi) = ((x - radius).max(0.0), x + radius);
    let width = hi - lo;
    // Start panels no wider than a quarter of the kernel scale.
    let sigma = (2.0 * at).sqrt();
    let panels = ((width / (0.25 * sigma)).ceil() as usize).clamp(16, 1 << 20);
    let tol_abs = tol * states.theta_max();

    let mut evals = 0usize;
    let mut total = 0.0;
    let mut stack: Vec<(f64, f64, f64, f64, f64, u32)> = Vec::new();
    let step = width / panels as f64;
    let mut f_left = integrand(lo);
    evals += 1;
    for p in 0..panels {
        let a = lo + p as f64 * step;
        let b = if p + 1 == panels { hi } else { a + step };
        let f_right = integrand(b);
        let f_mid = integrand(0.5 * (a + b));
        evals += 2;
        stack.push((a, b, f_left, f_mid, f_right, 0));
        while let Some((a, b, fa, fm, fb, depth)) = stack.pop() {
            let (q1, q3) = (0.75 * a + 0.25 * b, 0.25 * a + 0.75 * b);
            let (f1, f3) = (integrand(q1), integrand(q3));
            evals += 2;
            let h = b - a;
            // Trapezoid sums on 2 and 4 intervals, each Richardson-corrected.
            let t2 = 0.25 * h * (fa + 2.0 * fm + fb);
            let t4 = 0.125 * h * (fa + 2.0 * (f1 + fm + f3) + fb);
            let coarse = t2 + (t2 - 0.5 * h * (fa + fb)) / 3.0;
            let fine = t4 + (t4 - t2) / 3.0;
            let allowed = tol_abs * h / width;
            if (fine - coarse).abs() <= 15.0 * allowed {
                total += fine + (fine - coarse) / 15.0;
            } else if depth >= MAX_DEPTH || evals > EVAL_BUDGET {
                return Err(Error::NonConvergence(format!(
                    "theta2 at x = {x}, t = {t}: panel [{a}, {b}] unresolved after {evals} evaluations"
                )));
            } else {
                let m = 0.5 * (a + b);
                stack.push((m, b, fm, f3, fb, depth + 1));
                stack.push((a, m, fa, f1, fm, depth + 1));
            }
        }
        f_left = f_right;
    }
    Ok(states.theta_minus + total)
}

/// `theta2(., t)` at every grid node; `t = 0` returns `Theta0`.
///
/// Nodes are split across threads.
pub fn theta2_field(
    grid: &Grid,
    t: f64,
    tol: f64,
    delta0: Delta0,
    states: &EndStates,
    gas: &GasParams,
) -> Result<Vec<f64>> {
    let nodes = grid.nodes();
    if t == 0.0 {
        return Ok(crate::profile::theta0_field(grid, delta0, states));
    }
    KernelQuery::new(0.0, t, tol)?;
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(16);
    let chunk = nodes.len().div_ceil(workers);
    let parts: Vec<Result<Vec<f64>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = nodes
            .chunks(chunk)
            .map(|xs| {
                scope.spawn(move || {
                    xs.iter()
                        .map(|&x| theta2_eval(KernelQuery { x, t, tol }, delta0, states, gas))
                        .collect::<Result<Vec<f64>>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut out = Vec::with_capacity(nodes.len());
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelResidual {
    pub t: f64,
    /// `||theta2_t - a theta2_xx|| / max(||theta2_t||, ||a theta2_xx||)` over interior nodes.
    pub relative: f64,
}

/// Relative heat-equation residual of `theta2` at every interior entry of
/// `times`, using the three-point time derivative and the compact second
/// difference.
pub fn kernel_residual(
    grid: &Grid,
    times: &[f64],
    tol: f64,
    delta0: Delta0,
    states: &EndStates,
    gas: &GasParams,
) -> Result<Vec<KernelResidual>> {
    if times.len() < 3 {
        return Err(Error::domain("times", "need at least 3 sample times"));
    }
    if !(times[0] > 0.0) || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain(
            "times",
            "must be positive and strictly increasing",
        ));
    }
    let fields = times
        .iter()
        .map(|&t| theta2_field(grid, t, tol, delta0, states, gas))
        .collect::<Result<Vec<_>>>()?;
    let n = grid.cells();
    let dx = grid.dx();
    let interior_l2 = |f: &dyn Fn(usize) -> f64| -> f64 {
        ((1..n).map(|i| f(i).powi(2)).sum::<f64>() * dx).sqrt()
    };
    let mut out = Vec::with_capacity(times.len() - 2);
    for k in 1..times.len() - 1 {
        let tt = [times[k - 1], times[k], times[k + 1]];
        let th_t = central_time_derivative(tt, &fields[k - 1], &fields[k], &fields[k + 1]);
        let th_xx = d2(&fields[k], dx);
        let diff = interior_l2(&|i| th_t[i] - gas.a() * th_xx[i]);
        let scale = interior_l2(&|i| th_t[i]).max(interior_l2(&|i| gas.a() * th_xx[i]));
        out.push(KernelResidual {
            t: times[k],
            relative: if scale == 0.0 { 0.0 } else { diff / scale },
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapSample {
    pub t: f64,
    /// `q(t) = ||Theta - theta2||^2`.
    pub q: f64,
    /// `q(t) / (1 + t)^{1/3}`.
    pub normalized: f64,
}

/// `||Theta(., t) - theta2(., t)||^2` for matching profile and kernel fields.
pub fn kernel_profile_gap(
    profiles: &[ProfileState],
    kernel_fields: &[(f64, Vec<f64>)],
    grid: &Grid,
) -> Result<Vec<GapSample>> {
    if profiles.len() != kernel_fields.len() {
        return Err(Error::Shape(format!(
            "{} profile states but {} kernel fields",
            profiles.len(),
            kernel_fields.len()
        )));
    }
    profiles
        .iter()
        .zip(kernel_fields)
        .map(|(p, (t, k))| {
            grid.check_len("profile", p.theta.len())?;
            grid.check_len("kernel field", k.len())?;
            if (p.t - t).abs() > 1e-12 * t.abs().max(1.0) {
                return Err(Error::Shape(format!(
                    "profile at t = {} vs kernel at t = {t}",
                    p.t
                )));
            }
            let diff: Vec<f64> = p.theta.iter().zip(k).map(|(a, b)| a - b).collect();
            let q = crate::diagnostics::norms(&diff, grid)?.l2.powi(2);
            Ok(GapSample {
                t: *t,
                q,
                normalized: q / (1.0 + t).powf(1.0 / 3.0),
            })
        })
        .collect()
}
