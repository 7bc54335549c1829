//! Explicit solver for the Lagrangian full Navier-Stokes system
//!
//! ```text
//! v_t - u_x = 0
//! u_t + (R theta / v)_x = mu (u_x / v)_x
//! C_v theta_t + R (theta / v) u_x = kappa (theta_x / v)_x + mu u_x^2 / v
//! ```
//!
//! on a truncated half-line with `u(0) = 0`, `theta(0) = theta-` and the far
//! end clamped to `(v+, 0, theta+)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::profile::{check_schedule, ProfileDtPolicy, ProfileSolver, ProfileState};
use crate::types::{EndStates, FlowState, GasParams, Grid};

/// Time-stepping controls.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    pub cfl_advective: f64,
    pub cfl_diffusive: f64,
    pub t_end: f64,
    pub output_times: Vec<f64>,
    /// Far-field clamp `(v+, 0, theta+)`.
    pub right_bc: (f64, f64, f64),
}

impl SolverConfig {
    pub fn new(
        cfl_advective: f64,
        cfl_diffusive: f64,
        output_times: Vec<f64>,
        states: &EndStates,
    ) -> Result<Self> {
        let cfg = SolverConfig {
            cfl_advective,
            cfl_diffusive,
            t_end: output_times.last().copied().unwrap_or(0.0),
            output_times,
            right_bc: (states.v_plus, 0.0, states.theta_plus),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, x) in [
            ("cfl_advective", self.cfl_advective),
            ("cfl_diffusive", self.cfl_diffusive),
        ] {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::domain(
                    if name == "cfl_advective" {
                        "cfl_advective"
                    } else {
                        "cfl_diffusive"
                    },
                    format!("safety factor must lie in (0, 1), got {x}"),
                ));
            }
        }
        if !(self.t_end > 0.0) {
            return Err(Error::domain("t_end", "must be positive"));
        }
        check_schedule(0.0, &self.output_times)
    }
}

/// Nodal time derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct Rhs {
    pub v_t: Vec<f64>,
    pub u_t: Vec<f64>,
    pub theta_t: Vec<f64>,
}

/// The individual spatial terms of the momentum and energy equations,
/// evaluated at interior nodes (end entries are zero).
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialTerms {
    /// `(R theta / v)_x`, central.
    pub pressure_gradient: Vec<f64>,
    /// `mu (u_x / v)_x` in face form.
    pub viscous: Vec<f64>,
    /// `(R theta / v) u_x`, nodal.
    pub pressure_work: Vec<f64>,
    /// `kappa (theta_x / v)_x` in face form.
    pub heat: Vec<f64>,
    /// `mu u_x^2 / v`, nodal.
    pub dissipation: Vec<f64>,
}

/// Face values use `1/v_{i+1/2} = 2 / (v_i + v_{i+1})`, the harmonic mean of
/// the two nodal `1/v`.
pub fn spatial_terms(
    v: &[f64],
    u: &[f64],
    theta: &[f64],
    gas: &GasParams,
    dx: f64,
) -> SpatialTerms {
    let n = v.len();
    let mut out = SpatialTerms {
        pressure_gradient: vec![0.0; n],
        viscous: vec![0.0; n],
        pressure_work: vec![0.0; n],
        heat: vec![0.0; n],
        dissipation: vec![0.0; n],
    };
    let r = gas.r();
    let inv_2dx = 0.5 / dx;
    let inv_dx2 = 1.0 / (dx * dx);
    let face = |i: usize| 2.0 / (v[i] + v[i + 1]);
    let mut w_left = face(0);
    for i in 1..n - 1 {
        let w_right = face(i);
        let p_left = r * theta[i - 1] / v[i - 1];
        let p_right = r * theta[i + 1] / v[i + 1];
        let p = r * theta[i] / v[i];
        let ux = (u[i + 1] - u[i - 1]) * inv_2dx;
        out.pressure_gradient[i] = (p_right - p_left) * inv_2dx;
        out.viscous[i] =
            gas.mu() * inv_dx2 * ((u[i + 1] - u[i]) * w_right - (u[i] - u[i - 1]) * w_left);
        out.heat[i] = gas.kappa()
            * inv_dx2
            * ((theta[i + 1] - theta[i]) * w_right - (theta[i] - theta[i - 1]) * w_left);
        out.pressure_work[i] = p * ux;
        out.dissipation[i] = gas.mu() * ux * ux / v[i];
        w_left = w_right;
    }
    out
}

/// Right-hand side of the semi-discrete system.
///
/// `v_t = u_x` is central inside, second-order one-sided at the wall and
/// first-order one-sided at the clamped far end. For trapezoid weights `w`
/// this gives `sum_i w_i v_t,i dx = u_N - u_0 - (u_0 - 2 u_1 + u_2) / 4`.
/// `u_t` and `theta_t` vanish at the Dirichlet ends.
pub fn ns_rhs(state: &FlowState, gas: &GasParams, grid: &Grid) -> Result<Rhs> {
    grid.check_len("state", state.len())?;
    state.validate()?;
    let dx = grid.dx();
    let n = state.len();
    let (v, u, theta) = (&state.v, &state.u, &state.theta);
    let terms = spatial_terms(v, u, theta, gas, dx);

    let mut v_t = vec![0.0; n];
    v_t[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dx);
    for i in 1..n - 1 {
        v_t[i] = (u[i + 1] - u[i - 1]) / (2.0 * dx);
    }
    v_t[n - 1] = (u[n - 1] - u[n - 2]) / dx;

    let mut u_t = vec![0.0; n];
    let mut theta_t = vec![0.0; n];
    for i in 1..n - 1 {
        u_t[i] = -terms.pressure_gradient[i] + terms.viscous[i];
        theta_t[i] = (terms.heat[i] + terms.dissipation[i] - terms.pressure_work[i]) / gas.cv();
    }
    Ok(Rhs { v_t, u_t, theta_t })
}

/// `min(cfl_a dx / max(sqrt(gamma R theta) / v), cfl_d dx^2 min(v) / max(mu, kappa / C_v))`.
pub fn stable_dt(state: &FlowState, gas: &GasParams, grid: &Grid, config: &SolverConfig) -> f64 {
    let dx = grid.dx();
    let max_speed = state
        .v
        .iter()
        .zip(&state.theta)
        .map(|(v, th)| (gas.gamma() * gas.r() * th).sqrt() / v)
        .fold(0.0, f64::max);
    let min_v = state.v.iter().copied().fold(f64::INFINITY, f64::min);
    let advective = config.cfl_advective * dx / max_speed;
    let diffusive = config.cfl_diffusive * dx * dx * min_v / gas.mu().max(gas.kappa() / gas.cv());
    advective.min(diffusive)
}

fn apply_boundary(state: &mut FlowState, theta_wall: f64, right: (f64, f64, f64)) {
    let n = state.len() - 1;
    state.u[0] = 0.0;
    state.theta[0] = theta_wall;
    state.v[n] = right.0;
    state.u[n] = right.1;
    state.theta[n] = right.2;
}

/// One two-stage (Heun / SSP-RK2) step of size `dt`, then the boundary
/// values `u(0) = 0`, `theta(0) = theta-` and the far-field clamp. `v(0)`
/// is evolved, not imposed.
pub fn ns_step(
    state: &FlowState,
    gas: &GasParams,
    states: &EndStates,
    grid: &Grid,
    config: &SolverConfig,
    dt: f64,
) -> Result<FlowState> {
    let k1 = ns_rhs(state, gas, grid)?;
    let mut stage = FlowState {
        t: state.t + dt,
        v: axpy(&state.v, dt, &k1.v_t),
        u: axpy(&state.u, dt, &k1.u_t),
        theta: axpy(&state.theta, dt, &k1.theta_t),
    };
    apply_boundary(&mut stage, states.theta_minus, config.right_bc);
    let k2 = ns_rhs(&stage, gas, grid)?;
    let avg = |a: &[f64], b: &[f64], k: &[f64]| -> Vec<f64> {
        a.iter()
            .zip(b)
            .zip(k)
            .map(|((x, y), z)| 0.5 * (x + y + dt * z))
            .collect()
    };
    let mut next = FlowState {
        t: state.t + dt,
        v: avg(&state.v, &stage.v, &k2.v_t),
        u: avg(&state.u, &stage.u, &k2.u_t),
        theta: avg(&state.theta, &stage.theta, &k2.theta_t),
    };
    apply_boundary(&mut next, states.theta_minus, config.right_bc);
    next.validate()?;
    Ok(next)
}

fn axpy(x: &[f64], a: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(x, y)| x + a * y).collect()
}

/// Rejects states that have wandered more than ten initial ranges away from
/// the initial data.
#[derive(Debug, Clone, Copy)]
pub struct StabilityGuard {
    bounds: [(f64, f64); 3],
}

impl StabilityGuard {
    const FACTOR: f64 = 10.0;

    pub fn new(initial: &FlowState) -> Self {
        let bound = |f: &[f64]| {
            let (lo, hi) = f
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
                    (a.min(x), b.max(x))
                });
            let scale = hi.abs().max(lo.abs()).max(1.0);
            let range = (hi - lo).max(1e-6 * scale);
            (lo - Self::FACTOR * range, hi + Self::FACTOR * range)
        };
        StabilityGuard {
            bounds: [bound(&initial.v), bound(&initial.u), bound(&initial.theta)],
        }
    }

    pub fn check(&self, state: &FlowState) -> Result<()> {
        for ((name, field), (lo, hi)) in [("v", &state.v), ("u", &state.u), ("theta", &state.theta)]
            .into_iter()
            .zip(self.bounds)
        {
            if let Some(i) = field.iter().position(|&x| !(x >= lo && x <= hi)) {
                return Err(Error::Instability(format!(
                    "{name}[{i}] = {} outside [{lo}, {hi}] at t = {}",
                    field[i], state.t
                )));
            }
        }
        Ok(())
    }
}

/// Gaussian bump `amp (exp(-((x-c)/w)^2) - exp(-((x+c)/w)^2))`, odd about
/// `x = 0` so it vanishes at the wall.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianBump {
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
}

impl GaussianBump {
    pub fn eval(&self, x: f64) -> f64 {
        let g = |s: f64| (-(s / self.width).powi(2)).exp();
        self.amplitude * (g(x - self.center) - g(x + self.center))
    }

    /// `v = V (1 + b)`, `u = U + b`, `theta = Theta (1 + b)` with `u(0) = 0`
    /// and the far end set to `(v+, 0, theta+)`.
    pub fn perturb(
        &self,
        profile: &ProfileState,
        states: &EndStates,
        grid: &Grid,
    ) -> Result<FlowState> {
        let b: Vec<f64> = grid.nodes().iter().map(|&x| self.eval(x)).collect();
        let n = grid.cells();
        let mut state = FlowState {
            t: profile.t,
            v: profile
                .v
                .iter()
                .zip(&b)
                .map(|(v, b)| v * (1.0 + b))
                .collect(),
            u: profile.u.iter().zip(&b).map(|(u, b)| u + b).collect(),
            theta: profile
                .theta
                .iter()
                .zip(&b)
                .map(|(th, b)| th * (1.0 + b))
                .collect(),
        };
        state.u[0] = 0.0;
        state.theta[0] = states.theta_minus;
        state.v[n] = states.v_plus;
        state.u[n] = 0.0;
        state.theta[n] = states.theta_plus;
        state.validate()?;
        Ok(state)
    }
}

/// Flow and co-evolved ansatz at one output time.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub flow: FlowState,
    pub profile: ProfileState,
    /// `|v(0, t) - v-|`.
    pub v0_drift: f64,
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub snapshots: Vec<Snapshot>,
    pub steps: usize,
    pub first_dt: f64,
    pub min_dt: f64,
    /// Largest `|v(0, t) - v-|` over every step.
    pub max_v0_drift: f64,
}

/// Advances `initial` to `config.t_end`, storing the flow and the ansatz
/// (evolved on the same grid from `profile0`) at each output time.
pub fn simulate(
    initial: &FlowState,
    profile0: &ProfileState,
    gas: &GasParams,
    states: &EndStates,
    grid: &Grid,
    config: &SolverConfig,
) -> Result<Simulation> {
    config.validate()?;
    grid.check_len("initial state", initial.len())?;
    initial.validate()?;
    if initial.u[0] != 0.0 {
        return Err(Error::domain("initial", "u(0) must be 0"));
    }
    if (initial.theta[0] - states.theta_minus).abs() > 1e-12 * states.theta_minus {
        return Err(Error::domain("initial", "theta(0) must equal theta-"));
    }
    if profile0.t != initial.t {
        return Err(Error::Shape(
            "profile and flow start at different times".into(),
        ));
    }

    let guard = StabilityGuard::new(initial);
    let mut profile = ProfileSolver::new(profile0, gas, states, grid, ProfileDtPolicy::default())?;
    let mut state = initial.clone();
    let drift = |s: &FlowState| (s.v[0] - states.v_minus).abs();
    let mut max_v0_drift = drift(&state);
    let mut steps = 0;
    let mut first_dt = f64::NAN;
    let mut min_dt = f64::INFINITY;
    let mut snapshots = Vec::with_capacity(config.output_times.len());

    for &target in &config.output_times {
        let slack = 1e-12 * target.abs().max(1.0);
        while target - state.t > slack {
            let dt = stable_dt(&state, gas, grid, config).min(target - state.t);
            if steps == 0 {
                first_dt = dt;
            }
            min_dt = min_dt.min(dt);
            state = ns_step(&state, gas, states, grid, config, dt)?;
            guard.check(&state)?;
            max_v0_drift = max_v0_drift.max(drift(&state));
            steps += 1;
        }
        state.t = state.t.max(target);
        profile.advance_to(target)?;
        snapshots.push(Snapshot {
            v0_drift: drift(&state),
            flow: state.clone(),
            profile: profile.state()?,
        });
    }
    Ok(Simulation {
        snapshots,
        steps,
        first_dt,
        min_dt,
        max_v0_drift,
    })
}
