//! Norms, perturbation fields, relative entropy, a priori quantities and
//! decay-rate fits.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::profile::ProfileState;
use crate::stencil::{d1, d2, d3};
use crate::types::{FlowState, GasParams, Grid};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Norms {
    pub l2: f64,
    pub linf: f64,
    pub l1: f64,
}

/// Trapezoid L1 and L2 norms and the nodal maximum.
pub fn norms(field: &[f64], grid: &Grid) -> Result<Norms> {
    grid.check_len("field", field.len())?;
    let n = field.len() - 1;
    let dx = grid.dx();
    let ends = |g: fn(f64) -> f64| 0.5 * (g(field[0]) + g(field[n]));
    let l1 = dx * (field.iter().map(|x| x.abs()).sum::<f64>() - ends(f64::abs));
    let l2sq = dx * (field.iter().map(|x| x * x).sum::<f64>() - ends(|x| x * x));
    Ok(Norms {
        l2: l2sq.max(0.0).sqrt(),
        linf: field.iter().map(|x| x.abs()).fold(0.0, f64::max),
        l1,
    })
}

fn l2(field: &[f64], grid: &Grid) -> f64 {
    norms(field, grid).map(|n| n.l2).unwrap_or(f64::NAN)
}

/// `(phi, psi, zeta) = (v - V, u - U, theta - Theta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationFields {
    pub t: f64,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    pub zeta: Vec<f64>,
    /// `|psi(0) + kappa (gamma - 1) Theta_x(0) / (gamma R theta-)|`.
    pub boundary_residual: f64,
    /// One-sided differencing allowance `5 c dx^2 max |(ln Theta)_xxx|`.
    pub boundary_budget: f64,
}

impl PerturbationFields {
    pub fn boundary_identity_holds(&self) -> bool {
        self.boundary_residual <= self.boundary_budget
    }

    pub fn linf(&self) -> f64 {
        self.phi
            .iter()
            .chain(&self.psi)
            .chain(&self.zeta)
            .map(|x| x.abs())
            .fold(0.0, f64::max)
    }
}

pub fn perturbation(
    state: &FlowState,
    profile: &ProfileState,
    gas: &GasParams,
    grid: &Grid,
) -> Result<PerturbationFields> {
    grid.check_len("state", state.len())?;
    grid.check_len("profile", profile.theta.len())?;
    if (state.t - profile.t).abs() > 1e-12 * state.t.abs().max(1.0) {
        return Err(Error::Shape(format!(
            "state at t = {} but profile at t = {}",
            state.t, profile.t
        )));
    }
    let sub = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x - y).collect() };
    let dx = grid.dx();
    let c = gas.velocity_coeff();
    let psi = sub(&state.u, &profile.u);
    let theta_x0 = d1(&profile.theta, dx)[0];
    let boundary_residual = (psi[0] + c * theta_x0 / profile.theta[0]).abs();
    let ln: Vec<f64> = profile.theta.iter().map(|x| x.ln()).collect();
    let lxxx = d3(&ln, dx).iter().map(|x| x.abs()).fold(0.0, f64::max);
    Ok(PerturbationFields {
        t: state.t,
        phi: sub(&state.v, &profile.v),
        psi,
        zeta: sub(&state.theta, &profile.theta),
        boundary_residual,
        boundary_budget: 5.0 * c * dx * dx * lxxx,
    })
}

/// `Phi(z) = z - ln z - 1`, convex with its minimum `Phi(1) = 0`.
pub fn entropy_phi(z: f64) -> f64 {
    z - z.ln() - 1.0
}

/// `E = int (psi^2 / 2 + R Theta Phi(v / V) + C_v Theta Phi(theta / Theta)) dx`.
pub fn relative_entropy(
    state: &FlowState,
    profile: &ProfileState,
    gas: &GasParams,
    grid: &Grid,
) -> Result<f64> {
    grid.check_len("state", state.len())?;
    grid.check_len("profile", profile.theta.len())?;
    let n = state.len();
    let mut density = Vec::with_capacity(n);
    for i in 0..n {
        let (v, th, vv, tt) = (state.v[i], state.theta[i], profile.v[i], profile.theta[i]);
        if !(v > 0.0 && th > 0.0 && vv > 0.0 && tt > 0.0) {
            return Err(Error::Positivity(format!("relative entropy at node {i}")));
        }
        let psi = state.u[i] - profile.u[i];
        density.push(
            0.5 * psi * psi
                + gas.r() * tt * entropy_phi(v / vv)
                + gas.cv() * tt * entropy_phi(th / tt),
        );
    }
    Ok(norms(&density, grid)?.l1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    pub exponent: f64,
    pub log_constant: f64,
    pub r2: f64,
    pub window: (f64, f64),
}

/// Least-squares line of `ln q` against `ln(1 + t)` over samples with
/// `t` inside `window`.
pub fn decay_fit(t: &[f64], q: &[f64], window: (f64, f64)) -> Result<DecayFit> {
    if t.len() != q.len() {
        return Err(Error::Shape(format!(
            "{} times but {} values",
            t.len(),
            q.len()
        )));
    }
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(Error::domain("window", "t_lo must be below t_hi"));
    }
    let pts: Vec<(f64, f64)> = t
        .iter()
        .zip(q)
        .filter(|(t, _)| **t >= lo && **t <= hi)
        .map(|(&t, &q)| (t, q))
        .collect();
    if pts.len() < 10 {
        return Err(Error::domain(
            "window",
            format!("need at least 10 samples in window, got {}", pts.len()),
        ));
    }
    if pts.iter().any(|&(_, q)| !(q > 0.0)) {
        return Err(Error::domain("q", "all samples must be positive"));
    }
    let xs: Vec<f64> = pts.iter().map(|(t, _)| (1.0 + t).ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, q)| q.ln()).collect();
    let (slope, intercept, r2) = least_squares(&xs, &ys)?;
    Ok(DecayFit {
        exponent: slope,
        log_constant: intercept,
        r2,
        window,
    })
}

fn least_squares(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::domain("window", "all sample times coincide"));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok((slope, intercept, r2))
}

/// Slope of window means against `ln(1 + t)` for samples in
/// `[t_hi / 10, t_hi]`, split into `bins` logarithmically equal windows.
/// A non-positive value means the series shows no increasing trend.
pub fn last_decade_trend(t: &[f64], y: &[f64], t_hi: f64, bins: usize) -> Result<f64> {
    windowed_trend(t, y, (t_hi / 10.0, t_hi), bins)
}

/// As [`last_decade_trend`] on an arbitrary window.
pub fn windowed_trend(t: &[f64], y: &[f64], window: (f64, f64), bins: usize) -> Result<f64> {
    if t.len() != y.len() {
        return Err(Error::Shape(format!(
            "{} times but {} values",
            t.len(),
            y.len()
        )));
    }
    let (lo, hi) = window;
    if !(lo > 0.0 && lo < hi) || bins < 2 {
        return Err(Error::domain(
            "window",
            "need 0 < t_lo < t_hi and at least 2 bins",
        ));
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for b in 0..bins {
        let a = (llo + (lhi - llo) * b as f64 / bins as f64).exp();
        let z = (llo + (lhi - llo) * (b + 1) as f64 / bins as f64).exp();
        let inside: Vec<(f64, f64)> = t
            .iter()
            .zip(y)
            .filter(|(t, _)| **t >= a && (**t < z || (b + 1 == bins && **t <= z)))
            .map(|(&t, &y)| (t, y))
            .collect();
        if inside.is_empty() {
            continue;
        }
        let m = inside.len() as f64;
        xs.push(inside.iter().map(|(t, _)| (1.0 + t).ln()).sum::<f64>() / m);
        ys.push(inside.iter().map(|(_, y)| y).sum::<f64>() / m);
    }
    if xs.len() < 2 {
        return Err(Error::domain("window", "fewer than two populated bins"));
    }
    Ok(least_squares(&xs, &ys)?.0)
}

/// Time series of the ansatz decay quantities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma32Series {
    pub t: Vec<f64>,
    /// `||(ln Theta)_x||^2`.
    pub lx_sq: Vec<f64>,
    /// `||(ln Theta)_xx||^2`.
    pub lxx_sq: Vec<f64>,
    /// `||(ln Theta)_xxx||^2`.
    pub lxxx_sq: Vec<f64>,
    /// `||Theta - theta+||_inf^2`.
    pub theta_gap_linf_sq: Vec<f64>,
    /// `int_0^t ||(ln Theta)_x||^2 dtau` by the trapezoid rule over samples.
    pub cumulative_lx_sq: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateCheck {
    pub fit: DecayFit,
    /// Reference rate `r` in `q <= C (1+t)^{-r}`.
    pub reference_rate: f64,
    /// Last-decade trend of `q (1+t)^r`.
    pub normalized_trend: f64,
}

impl RateCheck {
    pub fn bounded(&self) -> bool {
        self.normalized_trend <= 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma32Report {
    pub series: Lemma32Series,
    pub lx: RateCheck,
    pub lxx: RateCheck,
    pub lxxx: RateCheck,
    /// `min_t ||Theta - theta+||_inf / |theta+ - theta-|`; equals 1 whenever the
    /// wall node is pinned to `theta-`.
    pub min_gap_ratio: f64,
}

/// Number of log-spaced bins used for trend estimates.
pub const TREND_BINS: usize = 5;

pub fn lemma32_series(
    profiles: &[ProfileState],
    grid: &Grid,
    theta_plus: f64,
) -> Result<Lemma32Series> {
    let dx = grid.dx();
    let mut s = Lemma32Series {
        t: Vec::new(),
        lx_sq: Vec::new(),
        lxx_sq: Vec::new(),
        lxxx_sq: Vec::new(),
        theta_gap_linf_sq: Vec::new(),
        cumulative_lx_sq: Vec::new(),
    };
    for p in profiles {
        grid.check_len("profile", p.theta.len())?;
        let ln: Vec<f64> = p.theta.iter().map(|x| x.ln()).collect();
        s.t.push(p.t);
        s.lx_sq.push(l2(&d1(&ln, dx), grid).powi(2));
        s.lxx_sq.push(l2(&d2(&ln, dx), grid).powi(2));
        s.lxxx_sq.push(l2(&d3(&ln, dx), grid).powi(2));
        let gap = p
            .theta
            .iter()
            .map(|x| (x - theta_plus).abs())
            .fold(0.0, f64::max);
        s.theta_gap_linf_sq.push(gap * gap);
        let cum = match s.cumulative_lx_sq.last() {
            None => 0.0,
            Some(&prev) => {
                let k = s.t.len() - 1;
                prev + 0.5 * (s.t[k] - s.t[k - 1]) * (s.lx_sq[k] + s.lx_sq[k - 1])
            }
        };
        s.cumulative_lx_sq.push(cum);
    }
    Ok(s)
}

/// Decay measurements for the ansatz over `window`, with the normalised
/// series `q (1+t)^r` checked for an increasing trend over the last decade
/// of the window, against the rates 2/3, 5/3 and 8/3.
pub fn lemma32_suite(
    profiles: &[ProfileState],
    grid: &Grid,
    theta_minus: f64,
    theta_plus: f64,
    window: (f64, f64),
) -> Result<Lemma32Report> {
    let (Some(first), Some(last)) = (profiles.first(), profiles.last()) else {
        return Err(Error::domain("profiles", "empty sequence"));
    };
    if (1.0 + last.t) < 100.0 * (1.0 + first.t) {
        return Err(Error::domain(
            "profiles",
            "sequence must span at least two decades of (1 + t)",
        ));
    }
    let series = lemma32_series(profiles, grid, theta_plus)?;
    let check = |q: &[f64], rate: f64| -> Result<RateCheck> {
        let fit = decay_fit(&series.t, q, window)?;
        let normalized: Vec<f64> = series
            .t
            .iter()
            .zip(q)
            .map(|(t, q)| q * (1.0 + t).powf(rate))
            .collect();
        let normalized_trend = last_decade_trend(&series.t, &normalized, window.1, TREND_BINS)?;
        Ok(RateCheck {
            fit,
            reference_rate: rate,
            normalized_trend,
        })
    };
    let strength = (theta_plus - theta_minus).abs();
    let min_gap_ratio = if strength == 0.0 {
        1.0
    } else {
        series
            .theta_gap_linf_sq
            .iter()
            .map(|g| g.sqrt() / strength)
            .fold(f64::INFINITY, f64::min)
    };
    Ok(Lemma32Report {
        lx: check(&series.lx_sq, 2.0 / 3.0)?,
        lxx: check(&series.lxx_sq, 5.0 / 3.0)?,
        lxxx: check(&series.lxxx_sq, 8.0 / 3.0)?,
        min_gap_ratio,
        series,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AprioriReport {
    pub m_rho: f64,
    #[serde(rename = "M_rho")]
    pub big_m_rho: f64,
    pub m_theta: f64,
    #[serde(rename = "M_theta")]
    pub big_m_theta: f64,
    pub h1_norm: f64,
    pub n1_bar: f64,
}

/// `N1 = max(1/m_rho, M_rho, 1/m_theta, M_theta, ||(phi, psi, zeta)||_1)` with
/// `rho = 1/v` and the H1 norm built from the same central differences as
/// the solver.
pub fn apriori_report(
    state: &FlowState,
    profile: &ProfileState,
    grid: &Grid,
) -> Result<AprioriReport> {
    grid.check_len("state", state.len())?;
    grid.check_len("profile", profile.theta.len())?;
    let (vmin, vmax) = min_max(&state.v);
    let (tmin, tmax) = min_max(&state.theta);
    let dx = grid.dx();
    let mut h1_sq = 0.0;
    for (a, b) in [
        (&state.v, &profile.v),
        (&state.u, &profile.u),
        (&state.theta, &profile.theta),
    ] {
        let f: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        h1_sq += l2(&f, grid).powi(2) + l2(&d1(&f, dx), grid).powi(2);
    }
    let m_rho = 1.0 / vmax;
    let big_m_rho = 1.0 / vmin;
    let h1_norm = h1_sq.sqrt();
    let n1_bar = [1.0 / m_rho, big_m_rho, 1.0 / tmin, tmax, h1_norm]
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(AprioriReport {
        m_rho,
        big_m_rho,
        m_theta: tmin,
        big_m_theta: tmax,
        h1_norm,
        n1_bar,
    })
}

fn min_max(f: &[f64]) -> (f64, f64) {
    f.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
            (a.min(x), b.max(x))
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterpolationEntry {
    /// `||f||_inf^2`.
    pub lhs: f64,
    /// `2 ||f|| ||f_x||`.
    pub rhs: f64,
    pub holds: bool,
    /// `rhs / lhs`, infinite for a zero field.
    pub slack: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterpolationSample {
    pub t: f64,
    pub phi: InterpolationEntry,
    /// Applied to `psi - psi(0)`.
    pub psi: InterpolationEntry,
    pub zeta: InterpolationEntry,
}

/// Checks `||f||_inf^2 <= 2 ||f|| ||f_x||` for fields vanishing at `x = 0`.
///
/// `||f||` is the trapezoid norm and `f_x` the cell difference
/// `(f_{i+1} - f_i) / dx`, a pairing for which the inequality is exact at the
/// discrete level.
pub fn linf_interpolation_check(
    perts: &[PerturbationFields],
    grid: &Grid,
) -> Result<Vec<InterpolationSample>> {
    let dx = grid.dx();
    let entry = |f: &[f64]| -> Result<InterpolationEntry> {
        grid.check_len("perturbation", f.len())?;
        let linf = f.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let lhs = linf * linf;
        let grad_sq: f64 = f
            .windows(2)
            .map(|w| ((w[1] - w[0]) / dx).powi(2))
            .sum::<f64>()
            * dx;
        let rhs = 2.0 * l2(f, grid) * grad_sq.sqrt();
        Ok(InterpolationEntry {
            lhs,
            rhs,
            holds: lhs <= rhs * (1.0 + 1e-12),
            slack: if lhs == 0.0 { f64::INFINITY } else { rhs / lhs },
        })
    };
    perts
        .iter()
        .map(|p| {
            let shifted: Vec<f64> = p.psi.iter().map(|x| x - p.psi[0]).collect();
            Ok(InterpolationSample {
                t: p.t,
                phi: entry(&p.phi)?,
                psi: entry(&shifted)?,
                zeta: entry(&p.zeta)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid() -> Grid {
        Grid::new(200.0, 2048).unwrap()
    }

    #[test]
    fn norms_of_simple_fields() {
        let g = grid();
        let z = norms(&vec![0.0; g.len()], &g).unwrap();
        assert_eq!((z.l2, z.linf, z.l1), (0.0, 0.0, 0.0));
        let one = norms(&vec![1.0; g.len()], &g).unwrap();
        assert!((one.l2 - 200f64.sqrt()).abs() < 1e-12);
        assert!((one.l1 - 200.0).abs() < 1e-12);
        assert_eq!(one.linf, 1.0);
        let e: Vec<f64> = g.nodes().iter().map(|x| (-x).exp()).collect();
        // Trapezoid error on e^{-2x} is dx^2/3 relative.
        assert!((norms(&e, &g).unwrap().l2 - 0.5f64.sqrt()).abs() < 2e-3);
        assert!(matches!(norms(&[1.0; 3], &g), Err(Error::Shape(_))));
    }

    #[test]
    fn phi_values() {
        assert_eq!(entropy_phi(1.0), 0.0);
        assert!((entropy_phi(2.0) - (1.0 - 2f64.ln())).abs() < 1e-14);
        assert!((entropy_phi(2.0) - 0.30685).abs() < 1e-5);
    }

    #[test]
    fn decay_fit_exact_power_law() {
        let t: Vec<f64> = (0..200).map(|i| 10.0 + i as f64 * 2.5).collect();
        let q: Vec<f64> = t.iter().map(|t| (1.0 + t).powf(-2.0 / 3.0)).collect();
        let fit = decay_fit(&t, &q, (10.0, 500.0)).unwrap();
        assert!((fit.exponent + 2.0 / 3.0).abs() < 1e-10);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
        let flat = vec![3.0; t.len()];
        assert!(decay_fit(&t, &flat, (10.0, 500.0)).unwrap().exponent.abs() < 1e-12);
    }

    #[test]
    fn decay_fit_with_ripple() {
        let t: Vec<f64> = (0..=490).map(|i| 10.0 + i as f64).collect();
        let q: Vec<f64> = t
            .iter()
            .map(|t| (1.0 + t).powf(-2.0 / 3.0) * (1.0 + 0.01 * t.sin()))
            .collect();
        let fit = decay_fit(&t, &q, (10.0, 500.0)).unwrap();
        assert!((fit.exponent + 2.0 / 3.0).abs() < 0.02);
    }

    #[test]
    fn decay_fit_degenerate_windows() {
        let t = vec![5.0; 20];
        let q = vec![1.0; 20];
        assert!(decay_fit(&t, &q, (1.0, 10.0)).is_err());
        let t: Vec<f64> = (0..5).map(|i| i as f64).collect();
        assert!(decay_fit(&t, &[1.0; 5], (0.0, 10.0)).is_err());
        assert!(decay_fit(&t, &[1.0; 5], (3.0, 3.0)).is_err());
    }

    #[test]
    fn trend_sign() {
        let t: Vec<f64> = (1..=500).map(|i| i as f64).collect();
        let up: Vec<f64> = t.iter().map(|t| t.powf(0.2)).collect();
        let down: Vec<f64> = t.iter().map(|t| t.powf(-0.2)).collect();
        assert!(last_decade_trend(&t, &up, 500.0, TREND_BINS).unwrap() > 0.0);
        assert!(last_decade_trend(&t, &down, 500.0, TREND_BINS).unwrap() < 0.0);
        assert_eq!(
            last_decade_trend(&t, &vec![0.0; 500], 500.0, TREND_BINS).unwrap(),
            0.0
        );
    }

    fn flow_and_profile(g: &Grid) -> (FlowState, ProfileState) {
        let n = g.len();
        let v: Vec<f64> = (0..n).map(|i| 1.0 + i as f64 / (n - 1) as f64).collect();
        let state = FlowState::new(0.0, v.clone(), vec![0.0; n], v.clone()).unwrap();
        let profile = ProfileState {
            t: 0.0,
            delta0: Default::default(),
            theta: v.clone(),
            v,
            u: vec![0.0; n],
            f: vec![0.0; n],
            g: vec![0.0; n],
        };
        (state, profile)
    }

    #[test]
    fn apriori_on_matching_fields() {
        let g = Grid::new(10.0, 64).unwrap();
        let (state, profile) = flow_and_profile(&g);
        let rep = apriori_report(&state, &profile, &g).unwrap();
        assert_eq!(rep.h1_norm, 0.0);
        assert!((rep.n1_bar - 2.0).abs() < 1e-15);
        assert!(rep.m_rho <= rep.big_m_rho && rep.m_theta <= rep.big_m_theta);
    }

    #[test]
    fn apriori_h1_is_homogeneous() {
        let g = Grid::new(10.0, 64).unwrap();
        let (mut state, profile) = flow_and_profile(&g);
        for (i, x) in g.nodes().iter().enumerate() {
            state.u[i] = 5.0 * (x * 0.7).sin();
        }
        let base = apriori_report(&state, &profile, &g).unwrap();
        state.u.iter_mut().for_each(|u| *u *= 2.0);
        let doubled = apriori_report(&state, &profile, &g).unwrap();
        assert!((doubled.h1_norm - 2.0 * base.h1_norm).abs() < 1e-12 * base.h1_norm);
        assert!(doubled.n1_bar >= base.n1_bar);
        assert_eq!(doubled.n1_bar, doubled.h1_norm);
    }

    #[test]
    fn entropy_zero_only_on_match() {
        let g = Grid::new(10.0, 64).unwrap();
        let gas = GasParams::new(1.4, 1.0, 1.0, 1.0, 1.0).unwrap();
        let (mut state, profile) = flow_and_profile(&g);
        assert_eq!(relative_entropy(&state, &profile, &gas, &g).unwrap(), 0.0);
        state.theta[7] *= 1.01;
        assert!(relative_entropy(&state, &profile, &gas, &g).unwrap() > 0.0);
    }

    #[test]
    fn interpolation_inequality() {
        let g = Grid::new(10.0, 128).unwrap();
        let bump: Vec<f64> = g
            .nodes()
            .iter()
            .map(|x| (-(x - 4.0).powi(2)).exp() - (-16f64).exp())
            .collect();
        let p = PerturbationFields {
            t: 0.0,
            phi: bump.clone(),
            psi: bump.iter().map(|x| x + 0.3).collect(),
            zeta: bump.iter().map(|x| -x).collect(),
            boundary_residual: 0.0,
            boundary_budget: 0.0,
        };
        let r = linf_interpolation_check(&[p], &g).unwrap();
        assert!(r[0].phi.holds && r[0].psi.holds && r[0].zeta.holds);
        assert_eq!(r[0].phi.lhs, r[0].zeta.lhs);
        assert_eq!(r[0].phi.rhs, r[0].zeta.rhs);
        assert!((r[0].psi.rhs - r[0].phi.rhs).abs() < 1e-12);
        let zero = PerturbationFields {
            t: 0.0,
            phi: vec![0.0; g.len()],
            psi: vec![0.0; g.len()],
            zeta: vec![0.0; g.len()],
            boundary_residual: 0.0,
            boundary_budget: 0.0,
        };
        let r = linf_interpolation_check(&[zero], &g).unwrap();
        assert!(r[0].phi.holds && r[0].phi.lhs == 0.0 && r[0].phi.rhs == 0.0);
    }

    proptest! {
        #[test]
        fn norm_axioms(
            a in proptest::collection::vec(-5.0f64..5.0, 17),
            b in proptest::collection::vec(-5.0f64..5.0, 17),
            c in -10.0f64..10.0,
        ) {
            let g = Grid::new(3.0, 16).unwrap();
            let na = norms(&a, &g).unwrap();
            let nb = norms(&b, &g).unwrap();
            let scaled: Vec<f64> = a.iter().map(|x| c * x).collect();
            let ns = norms(&scaled, &g).unwrap();
            prop_assert!(na.l2 >= 0.0 && na.l1 >= 0.0 && na.linf >= 0.0);
            prop_assert!((ns.l2 - c.abs() * na.l2).abs() <= 1e-12 * (1.0 + ns.l2));
            prop_assert!((ns.l1 - c.abs() * na.l1).abs() <= 1e-12 * (1.0 + ns.l1));
            prop_assert!((ns.linf - c.abs() * na.linf).abs() <= 1e-12 * (1.0 + ns.linf));
            let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let nsum = norms(&sum, &g).unwrap();
            prop_assert!(nsum.l2 <= na.l2 + nb.l2 + 1e-12);
            prop_assert!(nsum.l1 <= na.l1 + nb.l1 + 1e-12);
            prop_assert!(nsum.linf <= na.linf + nb.linf + 1e-12);
        }

        #[test]
        fn interpolation_holds_for_random_fields(
            mut f in proptest::collection::vec(-3.0f64..3.0, 17),
        ) {
            let g = Grid::new(2.0, 16).unwrap();
            f[0] = 0.0;
            let p = PerturbationFields {
                t: 0.0, phi: f.clone(), psi: f.clone(), zeta: f,
                boundary_residual: 0.0, boundary_budget: 0.0,
            };
            let r = linf_interpolation_check(&[p], &g).unwrap();
            prop_assert!(r[0].phi.holds && r[0].psi.holds && r[0].zeta.holds);
        }
    }
}
