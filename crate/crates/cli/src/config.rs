//! Scenario configuration files.
//!
//! TOML with nested sections. Indices are 1-based. Structure constants are
//! listed sparsely as `[i, j, k, value]` meaning `c[i][j][k] = value`;
//! antisymmetric partners are not implied.

use std::fmt;
use std::path::{Path, PathBuf};

use relconv::grid::{Axis, BoxGrid, GridError, RepGrid};
use relconv::lie::{LieError, NilpotentAlgebra};
use relconv::repkit::KernelFamily;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Environment variable naming the directory searched for `<name>.toml`.
pub const CONFIG_DIR_ENV: &str = "RELCONV_CONFIG_DIR";

const BUILTIN: &[(&str, &str)] = &[
    ("heisenberg-default", include_str!("builtin/heisenberg-default.toml")),
    ("free-step2", include_str!("builtin/free-step2.toml")),
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{origin}: {message}")]
    Parse { origin: String, message: String },
    #[error("{origin}: {field}: {message}")]
    Field {
        origin: String,
        field: String,
        message: String,
    },
    #[error("no config named `{0}` (not a file, not in ${CONFIG_DIR_ENV}, not built in)")]
    NotFound(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Algebra,
    Ccp,
    Reconstruction,
    Intertwine,
    LemmaBound,
    PropBound,
    Sweep,
}

impl Suite {
    /// Execution order.
    pub const ALL: [Suite; 7] = [
        Suite::Algebra,
        Suite::Ccp,
        Suite::Reconstruction,
        Suite::Intertwine,
        Suite::LemmaBound,
        Suite::PropBound,
        Suite::Sweep,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Ccp => "ccp",
            Suite::Reconstruction => "reconstruction",
            Suite::Intertwine => "intertwine",
            Suite::LemmaBound => "lemma-bound",
            Suite::PropBound => "prop-bound",
            Suite::Sweep => "sweep",
        }
    }

    /// Process exit code when this suite is the first to fail.
    pub fn exit_code(&self) -> u8 {
        match self {
            Suite::Algebra => 2,
            Suite::Ccp => 3,
            Suite::Reconstruction => 4,
            Suite::Intertwine => 5,
            Suite::LemmaBound => 6,
            Suite::PropBound => 7,
            Suite::Sweep => 8,
        }
    }

    pub fn parse(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub dim: usize,
    pub step: usize,
    /// `[i, j, k, value]`, 1-based.
    #[serde(default)]
    pub constants: Vec<(usize, usize, usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    /// Basis indices spanning `H`, 1-based.
    pub h_indices: Vec<usize>,
    /// Further choices of `H` checked by the ccp suite.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_h: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RepSpec {
    pub lambda: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub n_points: usize,
}

impl Default for RepSpec {
    fn default() -> Self {
        let g = RepGrid::default_grid();
        RepSpec {
            lambda: 1.0,
            t_min: g.t_min(),
            t_max: g.t_max(),
            n_points: g.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoxSpec {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Default for BoxSpec {
    fn default() -> Self {
        BoxSpec {
            min: -6.0,
            max: 6.0,
            n: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "family", rename_all = "kebab-case")]
pub enum KernelSpec {
    Gaussian {
        #[serde(default = "one")]
        width: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    BandLimitedRandom {
        /// Defaults to the scenario seed.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        #[serde(default = "four")]
        modes: usize,
        #[serde(default = "two")]
        max_frequency: f64,
        #[serde(default = "one")]
        width: f64,
    },
    Delta,
}

fn one() -> f64 {
    1.0
}
fn two() -> f64 {
    2.0
}
fn four() -> usize {
    4
}

impl Default for KernelSpec {
    fn default() -> Self {
        KernelSpec::Gaussian {
            width: 1.0,
            amplitude: 1.0,
        }
    }
}

impl KernelSpec {
    /// The family member used by single-kernel suites.
    pub fn family(&self, scenario_seed: u64) -> KernelFamily {
        self.member(scenario_seed, 0)
    }

    /// Member `index` of the seeded family swept by the sweep suite:
    /// band-limited kernels step the seed, Gaussians step the width by 0.1.
    pub fn member(&self, scenario_seed: u64, index: u64) -> KernelFamily {
        match *self {
            KernelSpec::Gaussian { width, amplitude } => KernelFamily::Gaussian {
                width: width + 0.1 * index as f64,
                amplitude,
            },
            KernelSpec::BandLimitedRandom {
                seed,
                modes,
                max_frequency,
                width,
            } => KernelFamily::BandLimitedRandom {
                seed: seed.unwrap_or(scenario_seed).wrapping_add(index),
                modes,
                max_frequency,
                width,
            },
            KernelSpec::Delta => KernelFamily::Delta,
        }
    }

    pub fn is_parameterized(&self) -> bool {
        !matches!(self, KernelSpec::Delta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub algebra: f64,
    pub ccp: f64,
    pub reconstruction: f64,
    pub refine_gain: f64,
    pub intertwining: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        use relconv::tolerances as t;
        Tolerances {
            algebra: t::EXACT,
            ccp: t::EXACT,
            reconstruction: t::RECONSTRUCTION,
            refine_gain: t::RECONSTRUCTION_REFINE_GAIN,
            intertwining: t::INTERTWINING,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteParams {
    /// Random associativity triples in the algebra suite.
    pub associativity_samples: usize,
    /// Random `(x, g)` pairs in the ccp suite.
    pub ccp_samples: usize,
    /// Hermite orders reconstructed one by one.
    pub hermite_orders: Vec<usize>,
    /// `(h_n + i h_{n+1}) / √2` for each listed `n`.
    pub hermite_pairs: Vec<usize>,
    /// Seeded `(g, v)` pairs in the intertwine suite.
    pub intertwine_pairs: usize,
    /// Half-width and points of the centre axis of the `G`-grid used by the
    /// intertwine suite.
    pub center_half_width: f64,
    pub center_points: usize,
    /// Kernels in the sweep.
    pub family_size: usize,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            associativity_samples: 100,
            ccp_samples: 1000,
            hermite_orders: vec![0, 1, 2, 3, 4, 5],
            hermite_pairs: vec![0, 1, 2, 3],
            intertwine_pairs: 20,
            center_half_width: 10.0,
            center_points: 64,
            family_size: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub suites: Vec<Suite>,
    pub algebra: AlgebraSpec,
    pub chart: ChartSpec,
    #[serde(default)]
    pub rep: RepSpec,
    #[serde(default)]
    pub x_grid: BoxSpec,
    #[serde(default)]
    pub kernel: KernelSpec,
    #[serde(default)]
    pub params: SuiteParams,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl ScenarioConfig {
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
            origin: origin.to_string(),
            message: e.to_string().trim_end().to_string(),
        })?;
        cfg.check(origin)?;
        Ok(cfg)
    }

    /// Resolves `name` as a file path, then as `<name>.toml` in
    /// `$RELCONV_CONFIG_DIR`, then as a built-in config.
    pub fn load(name: &str) -> Result<Self, ConfigError> {
        let direct = Path::new(name);
        if direct.is_file() {
            return Self::from_file(direct);
        }
        if let Some(dir) = std::env::var_os(CONFIG_DIR_ENV) {
            let candidate = Path::new(&dir).join(format!("{name}.toml"));
            if candidate.is_file() {
                return Self::from_file(&candidate);
            }
        }
        Self::builtin(name).ok_or_else(|| ConfigError::NotFound(name.to_string()))?
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn builtin(name: &str) -> Option<Result<Self, ConfigError>> {
        BUILTIN
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(n, text)| Self::parse(text, &format!("builtin:{n}")))
    }

    pub fn builtin_names() -> Vec<&'static str> {
        BUILTIN.iter().map(|(n, _)| *n).collect()
    }

    fn check(&self, origin: &str) -> Result<(), ConfigError> {
        let field = |field: String, message: String| ConfigError::Field {
            origin: origin.to_string(),
            field,
            message,
        };
        let dim = self.algebra.dim;
        if dim == 0 {
            return Err(field("algebra.dim".into(), "must be positive".into()));
        }
        for (n, &(i, j, k, value)) in self.algebra.constants.iter().enumerate() {
            for index in [i, j, k] {
                if index == 0 || index > dim {
                    return Err(field(
                        format!("algebra.constants[{}]", n + 1),
                        format!("index {index} outside 1..={dim}"),
                    ));
                }
            }
            if !value.is_finite() {
                return Err(field(format!("algebra.constants[{}]", n + 1), "value must be finite".into()));
            }
        }
        let check_h = |name: &str, h: &[usize]| -> Result<(), ConfigError> {
            for &i in h {
                if i == 0 || i > dim {
                    return Err(field(name.to_string(), format!("index {i} outside 1..={dim}")));
                }
            }
            Ok(())
        };
        check_h("chart.h_indices", &self.chart.h_indices)?;
        for (n, h) in self.chart.extra_h.iter().enumerate() {
            check_h(&format!("chart.extra_h[{}]", n + 1), h)?;
        }
        RepGrid::new(self.rep.t_min, self.rep.t_max, self.rep.n_points)
            .map_err(|e| field("rep".into(), e.to_string()))?;
        if !(self.rep.lambda.is_finite() && self.rep.lambda != 0.0) {
            return Err(field("rep.lambda".into(), "must be finite and nonzero".into()));
        }
        Axis::new(self.x_grid.min, self.x_grid.max, self.x_grid.n)
            .map_err(|e| field("x_grid".into(), e.to_string()))?;
        if self.params.center_points < 2 || !(self.params.center_half_width > 0.0) {
            return Err(field(
                "params.center_points".into(),
                "centre axis needs at least 2 points and a positive half-width".into(),
            ));
        }
        Ok(())
    }

    /// Structure constants with 0-based indices.
    pub fn algebra(&self) -> Result<NilpotentAlgebra, LieError> {
        let triples: Vec<_> = self
            .algebra
            .constants
            .iter()
            .map(|&(i, j, k, v)| (i - 1, j - 1, k - 1, v))
            .collect();
        NilpotentAlgebra::from_triples(self.algebra.dim, self.algebra.step, &triples)
    }

    pub fn h_indices(&self) -> Vec<usize> {
        self.chart.h_indices.iter().map(|i| i - 1).collect()
    }

    pub fn extra_h(&self) -> Vec<Vec<usize>> {
        self.chart
            .extra_h
            .iter()
            .map(|h| h.iter().map(|i| i - 1).collect())
            .collect()
    }

    pub fn rep_grid(&self) -> RepGrid {
        RepGrid::new(self.rep.t_min, self.rep.t_max, self.rep.n_points).expect("checked on load")
    }

    pub fn x_grid(&self) -> Result<BoxGrid, GridError> {
        BoxGrid::cube(self.x_grid.min, self.x_grid.max, self.x_grid.n, 2)
    }

    /// Canonical TOML echo of the parsed config.
    pub fn echo(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Compact grid description for CSV rows.
    pub fn grid_label(&self) -> String {
        format!(
            "x{n}x{n}[{}:{}]/t{}[{}:{}]",
            self.x_grid.min,
            self.x_grid.max,
            self.rep.n_points,
            self.rep.t_min,
            self.rep.t_max,
            n = self.x_grid.n
        )
    }
}
