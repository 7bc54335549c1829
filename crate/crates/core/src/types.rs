//! Gas parameters, end states, the spatial mesh and the discrete flow state.

use serde::Serialize;

use crate::error::{Error, Result};

/// Ideal-gas and transport constants together with the derived
/// diffusion constant `a` and specific heat `C_v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GasParams {
    gamma: f64,
    r: f64,
    mu: f64,
    kappa: f64,
    a: f64,
    cv: f64,
    p_plus: f64,
}

impl GasParams {
    pub fn new(gamma: f64, r: f64, mu: f64, kappa: f64, p_plus: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::domain("gamma", "gamma must exceed 1"));
        }
        positive("R", r)?;
        positive("mu", mu)?;
        positive("kappa", kappa)?;
        positive("p_plus", p_plus)?;
        Ok(GasParams {
            gamma,
            r,
            mu,
            kappa,
            a: Self::diffusion_constant(gamma, r, kappa, p_plus),
            cv: Self::specific_heat(gamma, r),
            p_plus,
        })
    }

    /// `a = kappa * p_plus * (gamma - 1) / (gamma * R^2)`.
    pub fn diffusion_constant(gamma: f64, r: f64, kappa: f64, p_plus: f64) -> f64 {
        kappa * p_plus * (gamma - 1.0) / (gamma * r * r)
    }

    /// `C_v = R / (gamma - 1)`.
    pub fn specific_heat(gamma: f64, r: f64) -> f64 {
        r / (gamma - 1.0)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn cv(&self) -> f64 {
        self.cv
    }
    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }

    /// Coefficient of `(ln Theta)_x` in the ansatz velocity,
    /// `kappa (gamma - 1) / (gamma R)`.
    pub fn velocity_coeff(&self) -> f64 {
        self.kappa * (self.gamma - 1.0) / (self.gamma * self.r)
    }

    /// Returns a copy whose `a` is multiplied by `scale`. Only meant for
    /// fault-injection runs of the verification suite.
    #[doc(hidden)]
    pub fn with_scaled_a(mut self, scale: f64) -> Self {
        self.a *= scale;
        self
    }
}

/// End states `(v-, theta-)` and `(v+, theta+)` sharing one pressure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EndStates {
    pub v_minus: f64,
    pub theta_minus: f64,
    pub v_plus: f64,
    pub theta_plus: f64,
    /// Common pressure `R theta- / v-`.
    pub p_plus: f64,
}

impl EndStates {
    /// Builds the end states with `v+` chosen so the two pressures agree.
    pub fn new(v_minus: f64, theta_minus: f64, theta_plus: f64, r: f64) -> Result<Self> {
        positive("v_minus", v_minus)?;
        positive("theta_minus", theta_minus)?;
        positive("theta_plus", theta_plus)?;
        positive("R", r)?;
        let v_plus = v_minus * theta_plus / theta_minus;
        Ok(EndStates {
            v_minus,
            theta_minus,
            v_plus,
            theta_plus,
            p_plus: r * theta_minus / v_minus,
        })
    }

    pub fn theta_min(&self) -> f64 {
        self.theta_minus.min(self.theta_plus)
    }

    pub fn theta_max(&self) -> f64 {
        self.theta_minus.max(self.theta_plus)
    }

    /// `|theta+ - theta-|`.
    pub fn strength(&self) -> f64 {
        (self.theta_plus - self.theta_minus).abs()
    }

    pub fn is_degenerate(&self) -> bool {
        self.theta_plus == self.theta_minus
    }
}

/// Exponent `delta0 = 1/n` of the initial temperature profile, `n` odd and at least 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Delta0 {
    inverse: u32,
}

impl Delta0 {
    pub const DEFAULT_K: u32 = 10;

    /// `delta0 = 1/(2k+1)`.
    pub fn from_k(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("delta0", "k must be at least 1"));
        }
        Self::from_inverse(2 * k + 1)
    }

    pub fn from_inverse(inverse: u32) -> Result<Self> {
        if inverse.is_multiple_of(2) {
            return Err(Error::domain("delta0", "1/delta0 must be an odd integer"));
        }
        if inverse < 3 {
            return Err(Error::domain(
                "delta0",
                "1/delta0 must be an odd integer of at least 3",
            ));
        }
        Ok(Delta0 { inverse })
    }

    pub fn from_value(delta0: f64) -> Result<Self> {
        if !(delta0 > 0.0) || !delta0.is_finite() {
            return Err(Error::domain("delta0", "delta0 must be positive"));
        }
        let inv = 1.0 / delta0;
        let n = inv.round();
        if (inv - n).abs() > 1e-9 * n || n > u32::MAX as f64 {
            return Err(Error::domain("delta0", "1/delta0 must be an odd integer"));
        }
        Self::from_inverse(n as u32)
    }

    pub fn inverse(&self) -> u32 {
        self.inverse
    }

    pub fn value(&self) -> f64 {
        1.0 / self.inverse as f64
    }
}

impl Default for Delta0 {
    fn default() -> Self {
        Delta0 {
            inverse: 2 * Self::DEFAULT_K + 1,
        }
    }
}

/// Uniform mesh `x_i = i * dx` on `[0, L]` with `N` cells and `N + 1` nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    length: f64,
    cells: usize,
    dx: f64,
    #[serde(skip)]
    nodes: Vec<f64>,
}

impl Grid {
    pub const MIN_CELLS: usize = 16;

    pub fn new(length: f64, cells: usize) -> Result<Self> {
        positive("L", length)?;
        if cells < Self::MIN_CELLS {
            return Err(Error::domain(
                "N",
                format!(
                    "cell count must be at least {}, got {cells}",
                    Self::MIN_CELLS
                ),
            ));
        }
        let dx = length / cells as f64;
        let mut nodes: Vec<f64> = (0..=cells).map(|i| i as f64 * dx).collect();
        nodes[cells] = length;
        Ok(Grid {
            length,
            cells,
            dx,
            nodes,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }
    pub fn cells(&self) -> usize {
        self.cells
    }
    pub fn len(&self) -> usize {
        self.cells + 1
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn dx(&self) -> f64 {
        self.dx
    }
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub(crate) fn check_len(&self, what: &str, len: usize) -> Result<()> {
        if len != self.len() {
            return Err(Error::Shape(format!(
                "{what} has {len} values but the grid has {} nodes",
                self.len()
            )));
        }
        Ok(())
    }
}

/// Specific volume, velocity and temperature at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
}

impl FlowState {
    pub fn new(t: f64, v: Vec<f64>, u: Vec<f64>, theta: Vec<f64>) -> Result<Self> {
        let state = FlowState { t, v, u, theta };
        state.validate()?;
        Ok(state)
    }

    pub fn uniform(grid: &Grid, v: f64, u: f64, theta: f64) -> Result<Self> {
        let n = grid.len();
        Self::new(0.0, vec![v; n], vec![u; n], vec![theta; n])
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.u.len() != self.v.len() || self.theta.len() != self.v.len() {
            return Err(Error::Shape(format!(
                "flow fields have lengths v={}, u={}, theta={}",
                self.v.len(),
                self.u.len(),
                self.theta.len()
            )));
        }
        if let Some(i) = self.v.iter().position(|&v| !(v > 0.0)) {
            return Err(Error::Positivity(format!(
                "v[{i}] = {} at t = {}",
                self.v[i], self.t
            )));
        }
        if let Some(i) = self.theta.iter().position(|&th| !(th > 0.0)) {
            return Err(Error::Positivity(format!(
                "theta[{i}] = {} at t = {}",
                self.theta[i], self.t
            )));
        }
        Ok(())
    }
}

fn positive(field: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            field,
            format!("must be positive, got {value}"),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diffusion_constant_monatomic() {
        let gas = GasParams::new(5.0 / 3.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!((gas.a() - 0.4).abs() < 1e-15);
        assert!((gas.cv() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn specific_heat_gamma_two() {
        let gas = GasParams::new(2.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(gas.cv(), 1.0);
    }

    #[test]
    fn gamma_one_rejected() {
        let err = GasParams::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap_err();
        assert!(err.to_string().contains("gamma must exceed 1"), "{err}");
    }

    #[test]
    fn bad_field_is_named() {
        let err = GasParams::new(1.4, 1.0, -1.0, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::Domain { field: "mu", .. }));
        let err = GasParams::new(1.4, 1.0, 1.0, 0.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::Domain { field: "kappa", .. }));
    }

    #[test]
    fn stored_constants_round_trip() {
        let gas = GasParams::new(1.4, 287.0, 0.3, 2.5, 101.325).unwrap();
        assert_eq!(
            gas.a().to_bits(),
            GasParams::diffusion_constant(gas.gamma(), gas.r(), gas.kappa(), gas.p_plus())
                .to_bits()
        );
        assert_eq!(
            gas.cv().to_bits(),
            GasParams::specific_heat(gas.gamma(), gas.r()).to_bits()
        );
    }

    #[test]
    fn end_states_examples() {
        let s = EndStates::new(1.0, 1.0, 2.0, 1.0).unwrap();
        assert_eq!((s.v_plus, s.p_plus), (2.0, 1.0));
        let s = EndStates::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(s.v_plus, 1.0);
        assert!(s.is_degenerate());
        let s = EndStates::new(2.0, 1.0, 3.0, 1.0).unwrap();
        assert_eq!((s.v_plus, s.p_plus), (6.0, 0.5));
        assert!(EndStates::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(EndStates::new(1.0, 1.0, -2.0, 1.0).is_err());
    }

    #[test]
    fn delta0_parity() {
        assert_eq!(Delta0::from_k(10).unwrap().inverse(), 21);
        assert_eq!(Delta0::default().inverse(), 21);
        let err = Delta0::from_value(0.5).unwrap_err();
        assert!(err.to_string().contains("1/delta0 must be an odd integer"));
        assert!(Delta0::from_value(1.0 / 3.0).is_ok());
        assert!(Delta0::from_value(0.3).is_err());
        assert!(Delta0::from_inverse(1).is_err());
        assert!(Delta0::from_k(0).is_err());
    }

    #[test]
    fn grid_is_uniform() {
        let g = Grid::new(200.0, 2048).unwrap();
        assert_eq!(g.len(), 2049);
        assert_eq!(g.nodes()[0], 0.0);
        assert_eq!(g.nodes()[2048], 200.0);
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
        assert!(Grid::new(1.0, 15).is_err());
        assert!(Grid::new(0.0, 32).is_err());
    }

    #[test]
    fn flow_state_positivity() {
        let g = Grid::new(1.0, 16).unwrap();
        assert!(FlowState::uniform(&g, 1.0, 0.0, 1.0).is_ok());
        assert!(matches!(
            FlowState::uniform(&g, 1.0, 0.0, 0.0),
            Err(Error::Positivity(_))
        ));
        assert!(matches!(
            FlowState::new(0.0, vec![1.0; 3], vec![0.0; 2], vec![1.0; 3]),
            Err(Error::Shape(_))
        ));
    }

    proptest::proptest! {
        #[test]
        fn end_states_share_pressure(
            v_minus in 1e-3f64..1e3,
            theta_minus in 1e-3f64..1e3,
            theta_plus in 1e-3f64..1e3,
            r in 1e-2f64..1e3,
        ) {
            let s = EndStates::new(v_minus, theta_minus, theta_plus, r).unwrap();
            let p_minus = r * s.theta_minus / s.v_minus;
            let p_plus = r * s.theta_plus / s.v_plus;
            proptest::prop_assert!((p_minus - p_plus).abs() <= 1e-12 * s.p_plus);
        }
    }
}
