//! The contact-wave ansatz `(V, U, Theta)`.
//!
//! `Theta` solves the nonlinear diffusion equation `Theta_t = a (ln Theta)_xx`
//! with `Theta(0, t) = theta-`, starting from the closed-form profile
//! [`theta0_eval`]. Specific volume and velocity follow from
//! `R Theta / V = p+` and `U = kappa (gamma - 1) (ln Theta)_x / (gamma R)`,
//! and `F`, `G` are the momentum and energy sources by which the ansatz
//! fails to solve the full system.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ns_solver;
use crate::stencil::{central_time_derivative, d1, d2};
use crate::types::{Delta0, EndStates, GasParams, Grid};

/// `ln(x + sqrt(1 + x^2))`, i.e. `asinh` restricted to `x >= 0`.
pub fn k_map(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("x", format!("must be non-negative, got {x}")));
    }
    Ok(x.asinh())
}

/// Normalised power `H / theta_max^(1/delta0)` and the signed slope factor
/// `(theta+^(1/delta0) - theta-^(1/delta0)) / theta_max^(1/delta0)`.
fn normalised_power(x: f64, delta0: Delta0, states: &EndStates) -> (f64, f64) {
    let n = delta0.inverse() as f64;
    let r = ((states.theta_min().ln() - states.theta_max().ln()) * n).exp();
    let erf_k = libm::erf(x.asinh());
    if states.theta_minus <= states.theta_plus {
        (r + (1.0 - r) * erf_k, 1.0 - r)
    } else {
        (1.0 - (1.0 - r) * erf_k, r - 1.0)
    }
}

/// Initial temperature profile
///
/// `Theta0(x) = ( (2/sqrt(pi)) (theta+^n - theta-^n) int_0^K(x) exp(-y^2) dy + theta-^n )^(1/n)`
///
/// with `n = 1/delta0`, evaluated as `theta_max * (r + (1 - r) erf(K))^delta0`
/// where `r = (theta_min / theta_max)^n` is formed in logarithms so large `n`
/// cannot overflow.
pub fn theta0_eval(x: f64, delta0: Delta0, states: &EndStates) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("x", format!("must be non-negative, got {x}")));
    }
    if x == 0.0 || states.is_degenerate() {
        return Ok(states.theta_minus);
    }
    let (h, _) = normalised_power(x, delta0, states);
    Ok(states.theta_max() * (delta0.value() * h.ln()).exp())
}

/// Exact `x`-derivative of [`theta0_eval`].
pub fn theta0_derivative(x: f64, delta0: Delta0, states: &EndStates) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("x", format!("must be non-negative, got {x}")));
    }
    if states.is_degenerate() {
        return Ok(0.0);
    }
    let (h, slope) = normalised_power(x, delta0, states);
    let k = x.asinh();
    let dh = slope * 2.0 / PI.sqrt() * (-k * k).exp() / (1.0 + x * x).sqrt();
    let d = delta0.value();
    Ok(states.theta_max() * d * ((d - 1.0) * h.ln()).exp() * dh)
}

/// `Theta0` sampled at every grid node.
pub fn theta0_field(grid: &Grid, delta0: Delta0, states: &EndStates) -> Vec<f64> {
    grid.nodes()
        .iter()
        .map(|&x| theta0_eval(x, delta0, states).expect("grid nodes are non-negative"))
        .collect()
}

/// `(V, U)` from `Theta`: `V = R Theta / p+`, `U = c (ln Theta)_x`.
pub fn derive_velocity(theta: &[f64], gas: &GasParams, dx: f64) -> (Vec<f64>, Vec<f64>) {
    let vol = theta.iter().map(|th| gas.r() * th / gas.p_plus()).collect();
    let c = gas.velocity_coeff();
    let ln: Vec<f64> = theta.iter().map(|th| th.ln()).collect();
    let u = d1(&ln, dx).into_iter().map(|g| c * g).collect();
    (vol, u)
}

/// `U_x = c (ln Theta)_xx`, the chain-rule form of the ansatz velocity gradient.
pub fn velocity_gradient(theta: &[f64], gas: &GasParams, dx: f64) -> Vec<f64> {
    let c = gas.velocity_coeff();
    let ln: Vec<f64> = theta.iter().map(|th| th.ln()).collect();
    d2(&ln, dx).into_iter().map(|g| c * g).collect()
}

/// Coefficient of `((ln Theta)_xx / Theta)_x` in the momentum source `F`.
///
/// Substituting `(ln Theta)_t = a (ln Theta)_xx / Theta` and `V = R Theta / p+`
/// into `F = c ((ln Theta)_xt - mu ((ln Theta)_xx / V)_x)` gives
/// `c (a - mu p+ / R)`; it vanishes when `mu = c`.
pub fn momentum_source_coeff(gas: &GasParams) -> f64 {
    gas.velocity_coeff() * (gas.a() - gas.mu() * gas.p_plus() / gas.r())
}

/// Source terms `F = c_F ((ln Theta)_xx / Theta)_x` and `G = -mu U_x^2 / V`.
pub fn source_terms(theta: &[f64], vol: &[f64], gas: &GasParams, dx: f64) -> (Vec<f64>, Vec<f64>) {
    let ln: Vec<f64> = theta.iter().map(|th| th.ln()).collect();
    let lxx = d2(&ln, dx);
    let ratio: Vec<f64> = lxx.iter().zip(theta).map(|(l, th)| l / th).collect();
    let cf = momentum_source_coeff(gas);
    let f = d1(&ratio, dx).into_iter().map(|r| cf * r).collect();
    let c = gas.velocity_coeff();
    let g = lxx
        .iter()
        .zip(vol)
        .map(|(l, v)| {
            let ux = c * l;
            -gas.mu() * ux * ux / v
        })
        .collect();
    (f, g)
}

/// The ansatz fields at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileState {
    pub t: f64,
    pub delta0: Delta0,
    pub theta: Vec<f64>,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

impl ProfileState {
    pub fn from_theta(
        t: f64,
        theta: Vec<f64>,
        delta0: Delta0,
        gas: &GasParams,
        grid: &Grid,
    ) -> Result<Self> {
        grid.check_len("Theta", theta.len())?;
        if let Some(i) = theta.iter().position(|&th| !(th > 0.0)) {
            return Err(Error::Positivity(format!("Theta[{i}] = {}", theta[i])));
        }
        let (v, u) = derive_velocity(&theta, gas, grid.dx());
        let (f, g) = source_terms(&theta, &v, gas, grid.dx());
        Ok(ProfileState {
            t,
            delta0,
            theta,
            v,
            u,
            f,
            g,
        })
    }

    /// The ansatz at `t = 0`.
    pub fn initial(
        delta0: Delta0,
        gas: &GasParams,
        states: &EndStates,
        grid: &Grid,
    ) -> Result<Self> {
        Self::from_theta(0.0, theta0_field(grid, delta0, states), delta0, gas, grid)
    }
}

/// Step-size rule `dt = safety * dx^2 * min(theta+-) / a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileDtPolicy {
    pub safety: f64,
}

impl Default for ProfileDtPolicy {
    fn default() -> Self {
        ProfileDtPolicy { safety: 0.4 }
    }
}

impl ProfileDtPolicy {
    pub fn dt(&self, gas: &GasParams, states: &EndStates, grid: &Grid) -> f64 {
        self.safety * grid.dx() * grid.dx() * states.theta_min() / gas.a()
    }
}

/// Explicit integrator for `Theta_t = a (ln Theta)_xx` on the truncated
/// half-line, clamped to `theta-` at `x = 0` and `theta+` at `x = L`.
///
/// The face flux is `a (ln Theta_{i+1} - ln Theta_i) / dx`, which is the
/// conservative flux `a Theta_x / Theta` with the logarithmic mean of the two
/// nodal values at the face. The logarithmic mean lies between its
/// arguments, so with `safety <= 0.5` each forward-Euler stage is a convex
/// combination of neighbouring values, and so is the two-stage SSP update.
#[derive(Debug, Clone)]
pub struct ProfileSolver {
    gas: GasParams,
    states: EndStates,
    delta0: Delta0,
    grid: Grid,
    dt_max: f64,
    t: f64,
    theta: Vec<f64>,
    steps: usize,
    running_min: f64,
    running_max: f64,
    lower: f64,
    upper: f64,
    work: Vec<f64>,
    stage: Vec<f64>,
}

impl ProfileSolver {
    pub fn new(
        initial: &ProfileState,
        gas: &GasParams,
        states: &EndStates,
        grid: &Grid,
        policy: ProfileDtPolicy,
    ) -> Result<Self> {
        grid.check_len("Theta", initial.theta.len())?;
        if !(policy.safety > 0.0 && policy.safety <= 0.5) {
            return Err(Error::domain("safety", "must lie in (0, 0.5]"));
        }
        let eps = 1e-10 * states.strength();
        let (lo, hi) = extrema(&initial.theta);
        let mut theta = initial.theta.clone();
        let n = theta.len() - 1;
        theta[0] = states.theta_minus;
        theta[n] = states.theta_plus;
        Ok(ProfileSolver {
            gas: *gas,
            states: *states,
            delta0: initial.delta0,
            grid: grid.clone(),
            dt_max: policy.dt(gas, states, grid),
            t: initial.t,
            theta,
            steps: 0,
            running_min: lo,
            running_max: hi,
            lower: states.theta_min() - eps,
            upper: states.theta_max() + eps,
            work: vec![0.0; n + 1],
            stage: vec![0.0; n + 1],
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }
    pub fn dt_max(&self) -> f64 {
        self.dt_max
    }
    pub fn steps(&self) -> usize {
        self.steps
    }
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Smallest and largest nodal temperature seen over every step so far.
    pub fn extrema(&self) -> (f64, f64) {
        (self.running_min, self.running_max)
    }

    pub fn state(&self) -> Result<ProfileState> {
        ProfileState::from_theta(
            self.t,
            self.theta.clone(),
            self.delta0,
            &self.gas,
            &self.grid,
        )
    }

    /// `a (ln Theta)_xx` with the boundary rows zeroed.
    fn rate(a: f64, dx: f64, theta: &[f64], out: &mut [f64]) {
        let n = theta.len() - 1;
        let coef = a / (dx * dx);
        let mut ln_prev = theta[0].ln();
        let mut ln_here = theta[1].ln();
        out[0] = 0.0;
        for i in 1..n {
            let ln_next = theta[i + 1].ln();
            out[i] = coef * ((ln_next - ln_here) - (ln_here - ln_prev));
            ln_prev = ln_here;
            ln_here = ln_next;
        }
        out[n] = 0.0;
    }

    /// One SSP-RK2 step of size `dt`.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        let a = self.gas.a();
        let dx = self.grid.dx();
        Self::rate(a, dx, &self.theta, &mut self.work);
        for i in 0..self.theta.len() {
            self.stage[i] = self.theta[i] + dt * self.work[i];
        }
        Self::rate(a, dx, &self.stage, &mut self.work);
        for i in 0..self.theta.len() {
            self.theta[i] = 0.5 * (self.theta[i] + self.stage[i] + dt * self.work[i]);
        }
        let n = self.theta.len() - 1;
        self.theta[0] = self.states.theta_minus;
        self.theta[n] = self.states.theta_plus;
        self.t += dt;
        self.steps += 1;

        let (lo, hi) = extrema(&self.theta);
        self.running_min = self.running_min.min(lo);
        self.running_max = self.running_max.max(hi);
        if !(lo >= self.lower && hi <= self.upper) {
            return Err(Error::Instability(format!(
                "Theta left [{}, {}] at t = {}: range [{lo}, {hi}]",
                self.lower, self.upper, self.t
            )));
        }
        Ok(())
    }

    /// Advances to exactly `target`, shortening the last step if needed.
    pub fn advance_to(&mut self, target: f64) -> Result<()> {
        let slack = 1e-12 * target.abs().max(1.0);
        while target - self.t > slack {
            let dt = self.dt_max.min(target - self.t);
            self.step(dt)?;
        }
        self.t = self.t.max(target);
        Ok(())
    }
}

fn extrema(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

/// Evolves `initial` and returns the ansatz at every requested output time.
///
/// `output_times` must be non-decreasing and not precede `initial.t`; the
/// last entry is the final time.
pub fn solve_profile(
    initial: &ProfileState,
    gas: &GasParams,
    states: &EndStates,
    grid: &Grid,
    output_times: &[f64],
    policy: ProfileDtPolicy,
) -> Result<Vec<ProfileState>> {
    check_schedule(initial.t, output_times)?;
    let mut solver = ProfileSolver::new(initial, gas, states, grid, policy)?;
    let mut out = Vec::with_capacity(output_times.len());
    for &t in output_times {
        solver.advance_to(t)?;
        out.push(solver.state()?);
    }
    Ok(out)
}

pub(crate) fn check_schedule(t0: f64, times: &[f64]) -> Result<()> {
    let Some(&last) = times.last() else {
        return Err(Error::domain("output_times", "must not be empty"));
    };
    if !(last > t0) {
        return Err(Error::domain("t_end", "must exceed the initial time"));
    }
    if times[0] < t0 || times.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::domain(
            "output_times",
            "must be non-decreasing and start at or after the initial time",
        ));
    }
    Ok(())
}

/// Relative residuals of the ansatz against the full system at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileResidual {
    pub t: f64,
    /// `V_t - U_x`.
    pub kinematic: f64,
    /// `U_t + P_x - mu (U_x / V)_x - F`.
    pub momentum: f64,
    /// `C_v Theta_t + (R Theta / V) U_x - kappa (Theta_x / V)_x - mu U_x^2 / V - G`.
    pub energy: f64,
}

/// Nodes closer than this to either end are left out of residual norms.
const RESIDUAL_MARGIN: usize = 3;

/// Discrete residuals of the ansatz at the middle of three consecutive
/// stored states.
///
/// Time derivatives use the three-point formula. The kinematic residual
/// compares against `U_x = c (ln Theta)_xx`; the momentum and energy
/// residuals apply the same spatial operator as the Navier-Stokes solver.
/// Each residual is divided by the L2 norm of its largest term.
pub fn profile_residual(
    seq: &[ProfileState],
    gas: &GasParams,
    grid: &Grid,
) -> Result<ProfileResidual> {
    let [s0, s1, s2] = seq else {
        return Err(Error::Shape(format!(
            "profile residual needs 3 consecutive states, got {}",
            seq.len()
        )));
    };
    for s in seq {
        grid.check_len("profile", s.theta.len())?;
    }
    if !(s0.t < s1.t && s1.t < s2.t) {
        return Err(Error::Shape("profile times must increase".into()));
    }
    let times = [s0.t, s1.t, s2.t];
    let dx = grid.dx();

    let v_t = central_time_derivative(times, &s0.v, &s1.v, &s2.v);
    let u_t = central_time_derivative(times, &s0.u, &s1.u, &s2.u);
    let theta_t = central_time_derivative(times, &s0.theta, &s1.theta, &s2.theta);

    let u_x = velocity_gradient(&s1.theta, gas, dx);
    let kinematic = relative(&[&v_t, &u_x], |i| v_t[i] - u_x[i], grid);

    let ops = ns_solver::spatial_terms(&s1.v, &s1.u, &s1.theta, gas, dx);
    let momentum = relative(
        &[&u_t, &ops.pressure_gradient, &ops.viscous, &s1.f],
        |i| u_t[i] + ops.pressure_gradient[i] - ops.viscous[i] - s1.f[i],
        grid,
    );
    let cv_theta_t: Vec<f64> = theta_t.iter().map(|x| gas.cv() * x).collect();
    let energy = relative(
        &[
            &cv_theta_t,
            &ops.pressure_work,
            &ops.heat,
            &ops.dissipation,
            &s1.g,
        ],
        |i| cv_theta_t[i] + ops.pressure_work[i] - ops.heat[i] - ops.dissipation[i] - s1.g[i],
        grid,
    );
    Ok(ProfileResidual {
        t: s1.t,
        kinematic,
        momentum,
        energy,
    })
}

fn interior_l2(f: impl Fn(usize) -> f64, grid: &Grid) -> f64 {
    let n = grid.cells();
    let sum: f64 = (RESIDUAL_MARGIN..=n - RESIDUAL_MARGIN)
        .map(|i| f(i).powi(2))
        .sum();
    (sum * grid.dx()).sqrt()
}

fn relative(terms: &[&Vec<f64>], residual: impl Fn(usize) -> f64, grid: &Grid) -> f64 {
    let scale = terms
        .iter()
        .map(|t| interior_l2(|i| t[i], grid))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    interior_l2(residual, grid) / scale
}

/// Bound checks on `Theta0` over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InitialProfileReport {
    /// Total variation `sum |Theta_{i+1} - Theta_i|`.
    pub derivative_l1: f64,
    /// `max |Theta0_x|` over the nodes, from the exact derivative.
    pub derivative_max: f64,
    /// `max |Theta0_x|` restricted to `x >= 1`.
    pub derivative_max_away_from_wall: f64,
    /// Trapezoid `int_0^L |Theta0 - theta+|`.
    pub gap_l1: f64,
}

pub fn initial_profile_report(
    grid: &Grid,
    delta0: Delta0,
    states: &EndStates,
) -> InitialProfileReport {
    let theta = theta0_field(grid, delta0, states);
    let derivative_l1 = theta.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    let mut derivative_max = 0.0f64;
    let mut derivative_max_away_from_wall = 0.0f64;
    for &x in grid.nodes() {
        let d = theta0_derivative(x, delta0, states).unwrap().abs();
        derivative_max = derivative_max.max(d);
        if x >= 1.0 {
            derivative_max_away_from_wall = derivative_max_away_from_wall.max(d);
        }
    }
    let gap: Vec<f64> = theta
        .iter()
        .map(|th| (th - states.theta_plus).abs())
        .collect();
    let dx = grid.dx();
    let gap_l1 = dx * (gap.iter().sum::<f64>() - 0.5 * (gap[0] + gap[gap.len() - 1]));
    InitialProfileReport {
        derivative_l1,
        derivative_max,
        derivative_max_away_from_wall,
        gap_l1,
    }
}
