//! Run configuration read from a TOML file with sections `[gas]`, `[states]`,
//! `[grid]`, `[run]` and an optional `[perturbation]`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ns_solver::{GaussianBump, SolverConfig};
use crate::types::{Delta0, EndStates, GasParams, Grid};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasSection {
    pub gamma: f64,
    pub r: f64,
    pub mu: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatesSection {
    pub v_minus: f64,
    pub theta_minus: f64,
    pub theta_plus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub length: f64,
    pub cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub t_end: f64,
    /// `1/delta0`; must be odd.
    #[serde(default = "default_delta0_inv")]
    pub delta0_inv: u32,
    #[serde(default = "default_cfl_advective")]
    pub cfl_advective: f64,
    #[serde(default = "default_cfl_diffusive")]
    pub cfl_diffusive: f64,
    /// Profile diffusion step as a fraction of `dx^2 min(theta+-) / a`.
    #[serde(default = "default_profile_safety")]
    pub profile_safety: f64,
    /// Number of log-spaced diagnostic sample times in `(0, t_end]`.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Times at which full fields are written.
    #[serde(default = "default_snapshot_times")]
    pub snapshot_times: Vec<f64>,
    #[serde(default = "default_kernel_tol")]
    pub kernel_tol: f64,
}

fn default_delta0_inv() -> u32 {
    Delta0::default().inverse()
}
fn default_cfl_advective() -> f64 {
    0.5
}
fn default_cfl_diffusive() -> f64 {
    0.4
}
fn default_profile_safety() -> f64 {
    0.4
}
fn default_samples() -> usize {
    120
}
fn default_snapshot_times() -> Vec<f64> {
    vec![0.0, 1.0, 10.0, 100.0]
}
fn default_kernel_tol() -> f64 {
    crate::heat_kernel::DEFAULT_TOL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSection {
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub gas: GasSection,
    pub states: StatesSection,
    pub grid: GridSection,
    pub run: RunSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<PerturbationSection>,
}

/// Validated physical setup derived from a [`Config`].
#[derive(Debug, Clone)]
pub struct Setup {
    pub gas: GasParams,
    pub states: EndStates,
    pub grid: Grid,
    pub delta0: Delta0,
}

impl Config {
    /// The standard configuration: `gamma = 5/3`, `R = mu = kappa = 1`,
    /// `(v-, theta-, theta+) = (1, 1, 2)`, `L = 200`, `N = 2048`.
    pub fn standard() -> Self {
        Config {
            gas: GasSection {
                gamma: 5.0 / 3.0,
                r: 1.0,
                mu: 1.0,
                kappa: 1.0,
            },
            states: StatesSection {
                v_minus: 1.0,
                theta_minus: 1.0,
                theta_plus: 2.0,
            },
            grid: GridSection {
                length: 200.0,
                cells: 2048,
            },
            run: RunSection {
                t_end: 500.0,
                delta0_inv: default_delta0_inv(),
                cfl_advective: default_cfl_advective(),
                cfl_diffusive: default_cfl_diffusive(),
                profile_safety: default_profile_safety(),
                samples: default_samples(),
                snapshot_times: default_snapshot_times(),
                kernel_tol: default_kernel_tol(),
            },
            perturbation: Some(PerturbationSection {
                amplitude: 0.05,
                center: 50.0,
                width: 5.0,
            }),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Config =
            toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        cfg.setup()?;
        cfg.check_run()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn setup(&self) -> Result<Setup> {
        let states = EndStates::new(
            self.states.v_minus,
            self.states.theta_minus,
            self.states.theta_plus,
            self.gas.r,
        )?;
        let gas = GasParams::new(
            self.gas.gamma,
            self.gas.r,
            self.gas.mu,
            self.gas.kappa,
            states.p_plus,
        )?;
        let grid = Grid::new(self.grid.length, self.grid.cells)?;
        let delta0 = Delta0::from_inverse(self.run.delta0_inv)?;
        Ok(Setup {
            gas,
            states,
            grid,
            delta0,
        })
    }

    fn check_run(&self) -> Result<()> {
        let run = &self.run;
        if !(run.t_end > 0.0 && run.t_end.is_finite()) {
            return Err(Error::domain("t_end", "must be positive and finite"));
        }
        if run.samples < 3 {
            return Err(Error::domain("samples", "need at least 3"));
        }
        if run.snapshot_times.iter().any(|t| !(*t >= 0.0)) {
            return Err(Error::domain("snapshot_times", "must be non-negative"));
        }
        if !(run.profile_safety > 0.0 && run.profile_safety <= 0.5) {
            return Err(Error::domain("profile_safety", "must lie in (0, 0.5]"));
        }
        if !(run.kernel_tol > 0.0 && run.kernel_tol <= 1e-4) {
            return Err(Error::domain("kernel_tol", "must lie in (0, 1e-4]"));
        }
        if let Some(p) = &self.perturbation {
            if !(p.width > 0.0) || !(p.center >= 0.0) || !p.amplitude.is_finite() {
                return Err(Error::domain(
                    "perturbation",
                    "need width > 0, center >= 0, finite amplitude",
                ));
            }
        }
        Ok(())
    }

    /// Applies command-line overrides and revalidates.
    pub fn with_overrides(
        mut self,
        cells: Option<usize>,
        t_end: Option<f64>,
        delta0_k: Option<u32>,
    ) -> Result<Self> {
        if let Some(n) = cells {
            self.grid.cells = n;
        }
        if let Some(t) = t_end {
            self.run.t_end = t;
        }
        if let Some(k) = delta0_k {
            self.run.delta0_inv = Delta0::from_k(k)?.inverse();
        }
        self.setup()?;
        self.check_run()?;
        Ok(self)
    }

    /// `samples` times spaced evenly in `ln(1 + t)` over `(0, t_end]`, merged
    /// with the snapshot times that fall inside the run.
    pub fn sample_times(&self) -> Vec<f64> {
        let t_end = self.run.t_end;
        let m = self.run.samples;
        let top = (1.0 + t_end).ln();
        let mut times: Vec<f64> = (1..=m)
            .map(|k| (top * k as f64 / m as f64).exp() - 1.0)
            .collect();
        times[m - 1] = t_end;
        times.extend(self.snapshot_times());
        times.retain(|&t| t > 0.0);
        times.sort_by(f64::total_cmp);
        times.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.abs().max(1.0));
        times
    }

    /// Snapshot times inside `[0, t_end]`, always including `t_end`.
    pub fn snapshot_times(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self
            .run
            .snapshot_times
            .iter()
            .copied()
            .filter(|&t| t <= self.run.t_end)
            .collect();
        t.push(self.run.t_end);
        t.sort_by(f64::total_cmp);
        t.dedup();
        t
    }

    pub fn solver_config(
        &self,
        states: &EndStates,
        output_times: Vec<f64>,
    ) -> Result<SolverConfig> {
        SolverConfig::new(
            self.run.cfl_advective,
            self.run.cfl_diffusive,
            output_times,
            states,
        )
    }

    pub fn bump(&self) -> Option<GaussianBump> {
        self.perturbation.as_ref().map(|p| GaussianBump {
            amplitude: p.amplitude,
            center: p.center,
            width: p.width,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_round_trips() {
        let cfg = Config::standard();
        let back = Config::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(cfg, back);
        let s = cfg.setup().unwrap();
        assert_eq!(s.states.v_plus, 2.0);
        assert_eq!(s.states.p_plus, 1.0);
        assert!((s.gas.a() - 0.4).abs() < 1e-15);
        assert_eq!(s.delta0.inverse(), 21);
    }

    #[test]
    fn missing_key_is_named() {
        let text = Config::standard().to_toml().replace("kappa = 1.0\n", "");
        let err = Config::from_toml(&text).unwrap_err().to_string();
        assert!(err.contains("kappa"), "{err}");
    }

    #[test]
    fn unknown_key_rejected() {
        let text = Config::standard()
            .to_toml()
            .replace("[grid]\n", "[grid]\nspacing = 1.0\n");
        assert!(Config::from_toml(&text).is_err());
    }

    #[test]
    fn even_reciprocal_rejected() {
        let text = Config::standard()
            .to_toml()
            .replace("delta0_inv = 21", "delta0_inv = 2");
        let err = Config::from_toml(&text).unwrap_err().to_string();
        assert!(err.contains("1/delta0 must be an odd integer"), "{err}");
    }

    #[test]
    fn run_defaults_fill_in() {
        let text = "[gas]\ngamma = 1.4\nr = 1.0\nmu = 1.0\nkappa = 1.0\n\
                    [states]\nv_minus = 1.0\ntheta_minus = 1.0\ntheta_plus = 1.5\n\
                    [grid]\nlength = 100.0\ncells = 512\n[run]\nt_end = 10.0\n";
        let cfg = Config::from_toml(text).unwrap();
        assert_eq!(cfg.run.delta0_inv, 21);
        assert!(cfg.perturbation.is_none());
    }

    #[test]
    fn overrides_apply() {
        let cfg = Config::standard()
            .with_overrides(Some(1024), Some(20.0), Some(2))
            .unwrap();
        assert_eq!(cfg.grid.cells, 1024);
        assert_eq!(cfg.run.t_end, 20.0);
        assert_eq!(cfg.run.delta0_inv, 5);
        assert!(Config::standard()
            .with_overrides(Some(4), None, None)
            .is_err());
    }

    #[test]
    fn sample_times_are_increasing_and_end_at_t_end() {
        let cfg = Config::standard();
        let t = cfg.sample_times();
        assert!(t.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(*t.last().unwrap(), 500.0);
        assert!(t.contains(&10.0) && t.contains(&100.0));
        assert_eq!(cfg.snapshot_times(), vec![0.0, 1.0, 10.0, 100.0, 500.0]);
    }
}
