//! Experiment configuration: JSON schema, defaults and conversion into core
//! types.
//!
//! The configuration file is a single JSON object. Every key is optional;
//! the defaults are su2 on an 8⁴ lattice with h = 0.25, g = 1, m = 1,
//! ε = 1e-3 and seeded random field draws. Schema:
//!
//! ```json
//! {
//!   "algebra": "su2",
//!   "lattice": { "extents": [8, 8, 8, 8], "spacing": 0.25 },
//!   "velocity": { "family": "affine", "matrix": [[1,0,0,0], ...], "offset": [0,0,0,0] },
//!   "matter":  { "components": [ { "re": <function>, "im": <function> }, ... ] },
//!   "gauge":   { "components": [ [<function>, <function>, <function>, <function>], ... ],
//!                "velocity_independent": false },
//!   "parameters": { "functions": [ <function>, ... ] },
//!   "coupling": 1.0,
//!   "mass": 1.0,
//!   "epsilon": 1e-3,
//!   "suites": ["algebra", "lattice", "fields", "noether", "reduction"],
//!   "seed": 42,
//!   "output": "out"
//! }
//! ```
//!
//! A `<function>` is a closed-form scalar function of four coordinates:
//!
//! ```json
//! { "kind": "constant", "value": 0.5 }
//! { "kind": "polynomial", "terms": [ { "coeff": 0.3, "powers": [1, 0, 2, 0] } ] }
//! { "kind": "harmonic", "offset": 0.0, "amplitude": 1.0,
//!   "wave": [1.0, 0.0, 0.0, 0.0], "phase": 0.0 }
//! ```
//!
//! A custom algebra replaces the name with generator matrices, row-major
//! `(re, im)` pairs:
//!
//! ```json
//! { "algebra": { "name": "custom-su2",
//!                "generators": [ [ [[0.0,0.0],[0.5,0.0]], [[0.5,0.0],[0.0,0.0]] ], ... ] } }
//! ```
//!
//! The velocity families are `affine` (with `matrix`/`offset`), `identity`,
//! `trigonometric` and `polynomial` (both with four `components`). Matter
//! components are sampled through ẋ(x) by default; `"frame": "spacetime"`
//! samples them at x directly.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use velgauge::fields::{FieldConfiguration, GaugeField, MatterField};
use velgauge::kinematics::{GaugeParameterSet, PolyTerm, ScalarFunction, VelocityField};
use velgauge::lattice::Lattice;
use velgauge::lie::{builtin_algebra, LieAlgebra};
use velgauge::matrix::CMatrix;

use crate::error::CliError;
use crate::suites::{random_gauge, random_matter, random_parameters, suite_rng};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_algebra")]
    pub algebra: AlgebraSpec,
    #[serde(default)]
    pub lattice: LatticeSpec,
    #[serde(default)]
    pub velocity: Option<VelocitySpec>,
    #[serde(default)]
    pub matter: Option<MatterSpec>,
    #[serde(default)]
    pub gauge: Option<GaugeSpec>,
    #[serde(default)]
    pub parameters: Option<ParameterSpec>,
    #[serde(default = "default_coupling")]
    pub coupling: f64,
    #[serde(default = "default_mass")]
    pub mass: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Suites to run, in dependency order; default: all of
    /// `algebra`, `lattice`, `fields`, `noether`, `reduction`.
    #[serde(default)]
    pub suites: Option<Vec<String>>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_algebra() -> AlgebraSpec {
    AlgebraSpec::Name("su2".to_string())
}

fn default_coupling() -> f64 {
    1.0
}

fn default_mass() -> f64 {
    1.0
}

fn default_epsilon() -> f64 {
    1e-3
}

fn default_seed() -> u64 {
    42
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            algebra: default_algebra(),
            lattice: LatticeSpec::default(),
            velocity: None,
            matter: None,
            gauge: None,
            parameters: None,
            coupling: default_coupling(),
            mass: default_mass(),
            epsilon: default_epsilon(),
            suites: None,
            seed: default_seed(),
            output: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AlgebraSpec {
    /// One of `u1`, `su2`, `su3`.
    Name(String),
    /// Custom generator set, row-major `(re, im)` pairs per matrix.
    Custom {
        name: String,
        generators: Vec<Vec<Vec<[f64; 2]>>>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    #[serde(default = "default_extents")]
    pub extents: [usize; 4],
    #[serde(default = "default_spacing")]
    pub spacing: f64,
}

fn default_extents() -> [usize; 4] {
    [8; 4]
}

fn default_spacing() -> f64 {
    0.25
}

impl Default for LatticeSpec {
    fn default() -> Self {
        Self {
            extents: default_extents(),
            spacing: default_spacing(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FunctionSpec {
    Constant {
        value: f64,
    },
    Polynomial {
        terms: Vec<TermSpec>,
    },
    Harmonic {
        #[serde(default)]
        offset: f64,
        amplitude: f64,
        wave: [f64; 4],
        #[serde(default)]
        phase: f64,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coeff: f64,
    pub powers: [u8; 4],
}

impl FunctionSpec {
    pub fn build(&self) -> Result<ScalarFunction<f64>, CliError> {
        match self {
            FunctionSpec::Constant { value } => Ok(ScalarFunction::Constant(*value)),
            FunctionSpec::Polynomial { terms } => ScalarFunction::polynomial(
                terms
                    .iter()
                    .map(|t| PolyTerm {
                        coeff: t.coeff,
                        powers: t.powers,
                    })
                    .collect(),
            )
            .map_err(CliError::from),
            FunctionSpec::Harmonic {
                offset,
                amplitude,
                wave,
                phase,
            } => Ok(ScalarFunction::harmonic(*offset, *amplitude, *wave, *phase)),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum VelocitySpec {
    Identity,
    Affine {
        matrix: [[f64; 4]; 4],
        #[serde(default)]
        offset: [f64; 4],
    },
    Trigonometric {
        components: [FunctionSpec; 4],
    },
    Polynomial {
        components: [FunctionSpec; 4],
    },
}

impl VelocitySpec {
    pub fn build(&self) -> Result<VelocityField<f64>, CliError> {
        Ok(match self {
            VelocitySpec::Identity => VelocityField::identity_map(),
            VelocitySpec::Affine { matrix, offset } => VelocityField::affine(*matrix, *offset),
            VelocitySpec::Trigonometric { components } => {
                let built: [ScalarFunction<f64>; 4] = build4(components)?;
                VelocityField::trigonometric(built)
            }
            VelocitySpec::Polynomial { components } => {
                let built: [ScalarFunction<f64>; 4] = build4(components)?;
                VelocityField::polynomial(built)
            }
        })
    }
}

fn build4(specs: &[FunctionSpec; 4]) -> Result<[ScalarFunction<f64>; 4], CliError> {
    Ok([
        specs[0].build()?,
        specs[1].build()?,
        specs[2].build()?,
        specs[3].build()?,
    ])
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatterSpec {
    pub components: Vec<MatterComponentSpec>,
    /// `velocity` (default): sampled as functions of ẋ(x);
    /// `spacetime`: sampled as functions of x.
    #[serde(default = "default_frame")]
    pub frame: String,
}

fn default_frame() -> String {
    "velocity".to_string()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatterComponentSpec {
    pub re: FunctionSpec,
    pub im: FunctionSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeSpec {
    /// `components[alpha][mu]`, functions of the velocity coordinates.
    pub components: Vec<[FunctionSpec; 4]>,
    #[serde(default)]
    pub velocity_independent: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterSpec {
    pub functions: Vec<FunctionSpec>,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config '{}': {e}", path.display()))
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: ExperimentConfig = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("config parse error: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        for (axis, &l) in self.lattice.extents.iter().enumerate() {
            if l < Lattice::<f64>::MIN_EXTENT {
                return Err(CliError::Config(format!(
                    "lattice.extents[{axis}] = {l} is below the minimum of 4 \
                     (central stencils need two neighbours per side)"
                )));
            }
        }
        if self.lattice.spacing <= 0.0 {
            return Err(CliError::Config(format!(
                "lattice.spacing must be positive, got {}",
                self.lattice.spacing
            )));
        }
        if self.coupling <= 0.0 {
            return Err(CliError::Config(format!(
                "coupling must be positive, got {}",
                self.coupling
            )));
        }
        if self.mass < 0.0 {
            return Err(CliError::Config(format!(
                "mass must be non-negative, got {}",
                self.mass
            )));
        }
        if let Some(gauge) = &self.gauge {
            if gauge.velocity_independent
                && !gauge
                    .components
                    .iter()
                    .flatten()
                    .all(|f| matches!(f, FunctionSpec::Constant { .. }))
            {
                return Err(CliError::Config(
                    "gauge.velocity_independent requires every component to be constant"
                        .to_string(),
                ));
            }
        }
        if let Some(suites) = &self.suites {
            for s in suites {
                if normalize_suite(s).is_none() {
                    return Err(CliError::Config(format!(
                        "unknown suite '{s}'; supported: algebra (verify-algebra), lattice, \
                         fields, noether, reduction (reduce-akt)"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> Result<LieAlgebra<f64>, CliError> {
        match &self.algebra {
            AlgebraSpec::Name(name) => builtin_algebra(name).map_err(CliError::from),
            AlgebraSpec::Custom { name, generators } => {
                let matrices = generators
                    .iter()
                    .map(|rows| {
                        let pairs: Vec<Vec<(f64, f64)>> = rows
                            .iter()
                            .map(|row| row.iter().map(|p| (p[0], p[1])).collect())
                            .collect();
                        CMatrix::from_rows(&pairs)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                LieAlgebra::from_generators(name, matrices).map_err(CliError::from)
            }
        }
    }

    pub fn build_lattice(&self) -> Result<Lattice<f64>, CliError> {
        Lattice::new(self.lattice.extents, self.lattice.spacing).map_err(CliError::from)
    }

    /// Suites selected for `run`, normalised and in dependency order.
    pub fn selected_suites(&self) -> Vec<&'static str> {
        const ORDER: [&str; 5] = ["algebra", "lattice", "fields", "noether", "reduction"];
        match &self.suites {
            None => ORDER.to_vec(),
            Some(list) => {
                let wanted: Vec<&'static str> =
                    list.iter().filter_map(|s| normalize_suite(s)).collect();
                ORDER
                    .iter()
                    .copied()
                    .filter(|name| wanted.contains(name))
                    .collect()
            }
        }
    }

    /// Build the full field configuration; unspecified fields are drawn from
    /// the seeded generator.
    pub fn build_configuration(&self, seed: u64) -> Result<FieldConfiguration<f64>, CliError> {
        let algebra = self.algebra()?;
        let lattice = self.build_lattice()?;
        let velocity = match &self.velocity {
            Some(spec) => spec.build()?,
            None => VelocityField::identity_map(),
        };
        let mut rng = suite_rng(seed);
        let matter = match &self.matter {
            Some(spec) => {
                let components = spec
                    .components
                    .iter()
                    .map(|c| Ok((c.re.build()?, c.im.build()?)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                match spec.frame.as_str() {
                    "velocity" => {
                        MatterField::from_velocity_functions(components, &velocity, lattice)
                    }
                    "spacetime" => MatterField::from_spacetime_functions(&components, lattice),
                    other => {
                        return Err(CliError::Config(format!(
                            "matter.frame must be 'velocity' or 'spacetime', got '{other}'"
                        )))
                    }
                }
            }
            None => random_matter(algebra.n_rep(), &velocity, lattice, &mut rng),
        };
        let gauge = match &self.gauge {
            Some(spec) => {
                let components = spec
                    .components
                    .iter()
                    .map(build4)
                    .collect::<Result<Vec<_>, CliError>>()?;
                GaugeField::from_functions(components, &velocity, lattice)
            }
            None => random_gauge(algebra.n_adj(), &velocity, lattice, &mut rng),
        };
        let params = match &self.parameters {
            Some(spec) => GaugeParameterSet::new(
                spec.functions
                    .iter()
                    .map(|f| f.build())
                    .collect::<Result<Vec<_>, CliError>>()?,
                self.epsilon,
            ),
            None => random_parameters(algebra.n_adj(), self.epsilon, &mut rng),
        };
        FieldConfiguration::new(
            algebra,
            lattice,
            velocity,
            matter,
            gauge,
            params,
            self.coupling,
            self.mass,
        )
        .map_err(CliError::from)
    }
}

pub fn normalize_suite(name: &str) -> Option<&'static str> {
    match name {
        "algebra" | "verify-algebra" => Some("algebra"),
        "lattice" | "convergence" => Some("lattice"),
        "fields" => Some("fields"),
        "noether" => Some("noether"),
        "reduction" | "reduce-akt" => Some("reduction"),
        _ => None,
    }
}
