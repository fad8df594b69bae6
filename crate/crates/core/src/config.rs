//! TOML run configuration.
//!
//! ```toml
//! [geometry]
//! radius = 1.0
//! center = [0.3, 0.0]
//! eps = 0.05                    # single runs; optional
//!
//! [data]                        # arrays are [mean, c1, s1, c2, s2, ...]
//! f_outer = [0.0]
//! f_inclusion = [0.0, 1.0, 0.0]
//! g_outer = []                  # optional, default zero
//! g_inclusion = []
//! # or instead of the arrays:
//! # random = { order = 8, amplitude = 1.0, decay = 0.6 }
//!
//! [sweep]
//! eps = [0.08, 0.04]
//! kappa = [1.0]
//!
//! [solver]                      # every key optional
//! order = 32                    # data truncation of the approximation
//! green_order = 64
//! reference_order = 32
//! collocation = 132             # points per boundary, c ≠ 0
//! tolerance = 1e-8
//! seed = 0
//! workers = 0                   # 0: one per core
//! scaling = "rescaled"          # or "unscaled"
//! boundary_samples = 128
//! radial = 32
//! angular = 64
//! ```

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{SolverOptions, SweepConfig};
use crate::boundary_data::{FourierData, RobinData, DEFAULT_ORDER};
use crate::compound::BuildOptions;
use crate::error::{Error, Result};
use crate::exterior::ExteriorScaling;
use crate::geometry::{Geometry, Point};
use crate::interior::DEFAULT_GREEN_ORDER;
use crate::reference::{Sampling, DEFAULT_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub geometry: GeometrySection,
    pub data: DataSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub solver: SolverSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub radius: f64,
    pub center: [f64; 2],
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSection {
    pub f_outer: Option<Vec<f64>>,
    pub f_inclusion: Option<Vec<f64>>,
    #[serde(default)]
    pub g_outer: Vec<f64>,
    #[serde(default)]
    pub g_inclusion: Vec<f64>,
    pub random: Option<RandomData>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomData {
    pub order: usize,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default = "half")]
    pub decay: f64,
}

fn one() -> f64 {
    1.0
}

fn half() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default)]
    pub eps: Vec<f64>,
    #[serde(default)]
    pub kappa: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub order: usize,
    pub green_order: usize,
    pub reference_order: usize,
    pub collocation: Option<usize>,
    pub tolerance: f64,
    pub seed: u64,
    pub workers: usize,
    pub scaling: ExteriorScaling,
    pub boundary_samples: Option<usize>,
    pub radial: usize,
    pub angular: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection {
            order: DEFAULT_ORDER,
            green_order: DEFAULT_GREEN_ORDER,
            reference_order: 32,
            collocation: None,
            tolerance: DEFAULT_TOLERANCE,
            seed: 0,
            workers: 0,
            scaling: ExteriorScaling::Rescaled,
            boundary_samples: None,
            radial: 32,
            angular: 64,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Geometry with the given `ε`, or the configured one.
    pub fn geometry(&self, eps: Option<f64>) -> Result<Geometry> {
        let eps = eps
            .or(self.geometry.eps)
            .or_else(|| self.sweep.eps.first().copied())
            .ok_or_else(|| Error::Config("no eps in [geometry] or [sweep]".into()))?;
        let [x, y] = self.geometry.center;
        Geometry::new(self.geometry.radius, Point::new(x, y), eps)
    }

    pub fn kappa(&self, kappa: Option<f64>) -> Result<f64> {
        kappa
            .or_else(|| self.sweep.kappa.first().copied())
            .ok_or_else(|| Error::Config("no kappa given and [sweep] kappa is empty".into()))
    }

    /// Explicit coefficient arrays, or random data drawn from the solver
    /// seed (outer data first).
    pub fn robin_data(&self) -> Result<RobinData> {
        let d = &self.data;
        let flat = |v: &[f64]| {
            if v.is_empty() {
                Ok(FourierData::constant(0.0))
            } else {
                FourierData::from_flat(v)
            }
        };
        let (f_outer, f_inclusion) = match (&d.random, &d.f_outer, &d.f_inclusion) {
            (Some(r), None, None) => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.solver.seed);
                let a = FourierData::random(&mut rng, r.order, r.amplitude, r.decay);
                let b = FourierData::random(&mut rng, r.order, r.amplitude, r.decay);
                (a, b)
            }
            (None, Some(a), Some(b)) => (flat(a)?, flat(b)?),
            _ => {
                return Err(Error::Config(
                    "[data] needs either f_outer and f_inclusion or random".into(),
                ))
            }
        };
        RobinData::new(
            f_outer,
            flat(&d.g_outer)?,
            f_inclusion,
            flat(&d.g_inclusion)?,
        )
    }

    pub fn solver_options(&self) -> SolverOptions {
        let s = &self.solver;
        SolverOptions {
            build: BuildOptions {
                order: s.order,
                green_order: s.green_order,
                scaling: s.scaling,
            },
            reference_order: s.reference_order,
            collocation: s.collocation,
            tolerance: s.tolerance,
            sampling: Some(Sampling {
                boundary: s.boundary_samples.unwrap_or(4 * s.reference_order.max(1)),
                radial: s.radial,
                angular: s.angular,
            }),
            c0_factor: 1.0,
        }
    }

    pub fn sweep_config(&self) -> Result<SweepConfig> {
        if self.sweep.eps.is_empty() || self.sweep.kappa.is_empty() {
            return Err(Error::Config(
                "[sweep] needs non-empty eps and kappa lists".into(),
            ));
        }
        // any admissible ε works as a base; rows replace it
        let smallest = self
            .sweep
            .eps
            .iter()
            .copied()
            .filter(|e| *e > 0.0)
            .fold(f64::INFINITY, f64::min);
        let base = self.geometry(
            self.geometry
                .eps
                .or(Some(smallest).filter(|e| e.is_finite())),
        )?;
        Ok(SweepConfig {
            geometry: base,
            data: self.robin_data()?,
            eps: self.sweep.eps.clone(),
            kappa: self.sweep.kappa.clone(),
            solver: self.solver_options(),
            workers: self.solver.workers,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
[geometry]
radius = 1.0
center = [0.3, 0.0]

[data]
f_outer = [0.0]
f_inclusion = [0.0, 1.0, 0.0]

[sweep]
eps = [0.08, 0.04]
kappa = [1.0]

[solver]
collocation = 200
scaling = "unscaled"
"#;

    #[test]
    fn parses_example() {
        let c = Config::from_toml(EXAMPLE).unwrap();
        assert_eq!(c.solver.collocation, Some(200));
        assert_eq!(c.solver.scaling, ExteriorScaling::Unscaled);
        assert_eq!(c.solver.order, DEFAULT_ORDER);
        let d = c.robin_data().unwrap();
        assert_eq!(d.f_inclusion.coefficient(1), [1.0, 0.0]);
        assert!(d.g_outer.is_zero());
        let s = c.sweep_config().unwrap();
        assert_eq!(s.geometry.eps(), 0.04);
        assert_eq!(c.geometry(None).unwrap().eps(), 0.08);
    }

    #[test]
    fn round_trips() {
        let c = Config::from_toml(EXAMPLE).unwrap();
        assert_eq!(Config::from_toml(&c.to_toml().unwrap()).unwrap(), c);
    }

    #[test]
    fn rejects_unknown_keys_and_mixed_data() {
        assert!(Config::from_toml(&EXAMPLE.replace("radius", "raduis")).is_err());
        let mixed = EXAMPLE.replace("[sweep]", "random = { order = 3 }\n[sweep]");
        assert!(Config::from_toml(&mixed).unwrap().robin_data().is_err());
    }

    #[test]
    fn random_data_follows_seed() {
        let text = EXAMPLE.replace(
            "f_outer = [0.0]\nf_inclusion = [0.0, 1.0, 0.0]",
            "random = { order = 4 }",
        );
        let a = Config::from_toml(&text).unwrap().robin_data().unwrap();
        let b = Config::from_toml(&text).unwrap().robin_data().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.f_outer.order(), 4);
        let other = Config::from_toml(&text.replace("[solver]", "[solver]\nseed = 7")).unwrap();
        assert_ne!(other.robin_data().unwrap(), a);
    }

    #[test]
    fn geometry_errors_surface() {
        let c = Config::from_toml(
            &EXAMPLE.replace("center = [0.3, 0.0]", "center = [0.3, 0.0]\neps = 0.5"),
        )
        .unwrap();
        assert!(matches!(c.geometry(None), Err(Error::EpsilonBound { .. })));
    }
}
