//! Experiment configuration files (TOML) and built-in presets.
//!
//! ```toml
//! polynomial = "T1*T2"
//! m_max = 8
//! seed = 7
//!
//! [input]
//! kind = "all-integers"
//! x = 1000000
//!
//! [window]
//! policy = "auto"
//!
//! [[functions]]
//! kind = "omega-class"
//! modulus = 4
//! residues = [1]
//!
//! [[functions]]
//! kind = "file"
//! path = "g2.toml"
//!
//! [output]
//! dir = "out"
//! ```

use std::path::{Path, PathBuf};

use ekac_core::additive::{builtin_omega, omega_residue_classes};
use ekac_core::{InputSet, PolyQ, StronglyAdditive};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};
use crate::funcfile;

pub const DEFAULT_M_MAX: u32 = 8;
pub const DEFAULT_SEED: u64 = 20_240_101;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum InputSpec {
    AllIntegers { x: u64 },
    ShiftedPrimes { x: u64, shift: i64 },
}

impl InputSpec {
    pub fn x(&self) -> u64 {
        match *self {
            InputSpec::AllIntegers { x } | InputSpec::ShiftedPrimes { x, .. } => x,
        }
    }

    pub fn to_set(&self) -> InputSet {
        match *self {
            InputSpec::AllIntegers { x } => InputSet::AllIntegers { x },
            InputSpec::ShiftedPrimes { x, shift } => InputSet::ShiftedPrimes { x, shift },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum FunctionSpec {
    Omega,
    OmegaClass { modulus: u64, residues: Vec<u64> },
    Constant { value: f64 },
    File { path: PathBuf },
}

impl FunctionSpec {
    /// Resolve to a function; relative file paths are taken from `base`.
    pub fn build(&self, base: &Path) -> CliResult<StronglyAdditive> {
        Ok(match self {
            FunctionSpec::Omega => builtin_omega(),
            FunctionSpec::OmegaClass { modulus, residues } => {
                omega_residue_classes(*modulus, residues).map_err(|e| CliError::Config(e.to_string()))?
            }
            FunctionSpec::Constant { value } => StronglyAdditive::constant(&format!("const {value}"), *value)
                .map_err(|e| CliError::Config(e.to_string()))?,
            FunctionSpec::File { path } => funcfile::load(&base.join(path))?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "policy")]
pub enum WindowPolicy {
    /// Smallest `z` with `z^{max(1, 𝔐(z)^{1/3})} >= x`.
    Auto,
    /// `z = x`.
    Full,
    Explicit { z: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub polynomial: String,
    #[serde(default = "default_m_max")]
    pub m_max: u32,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub input: InputSpec,
    #[serde(default = "default_window")]
    pub window: WindowPolicy,
    pub functions: Vec<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

fn default_m_max() -> u32 {
    DEFAULT_M_MAX
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_window() -> WindowPolicy {
    WindowPolicy::Auto
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> CliResult<ExperimentConfig> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<ExperimentConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        ExperimentConfig::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration always serializes")
    }

    /// SHA-256 of the canonical serialization, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.input.x() < 16 {
            return Err(CliError::Config(format!("x must be at least 16, got {}", self.input.x())));
        }
        if self.m_max < 2 || self.m_max % 2 == 1 {
            return Err(CliError::Config(format!("m_max must be even and >= 2, got {}", self.m_max)));
        }
        if self.functions.is_empty() {
            return Err(CliError::Config("at least one function is required".into()));
        }
        if let InputSpec::ShiftedPrimes { shift: 0, .. } = self.input {
            return Err(CliError::Config("shift must be nonzero".into()));
        }
        if let WindowPolicy::Explicit { z } = self.window {
            if !(z >= 2.0) {
                return Err(CliError::Config(format!("explicit z must be >= 2, got {z}")));
            }
        }
        self.polynomial()?;
        Ok(())
    }

    pub fn polynomial(&self) -> CliResult<PolyQ> {
        PolyQ::parse_with_vars(&self.polynomial, self.functions.len())
            .map_err(|e| CliError::Config(format!("polynomial {:?}: {e}", self.polynomial)))
    }

    pub fn build_functions(&self, base: &Path) -> CliResult<Vec<StronglyAdditive>> {
        self.functions.iter().map(|f| f.build(base)).collect()
    }
}

pub const PRESETS: &[&str] = &[
    "thm11-omega",
    "cor1-omega-square",
    "cor1-omega-cube",
    "ex2-product-classes",
    "ex3-linear",
    "thm15-shifted",
];

pub fn preset(name: &str) -> CliResult<ExperimentConfig> {
    let integers = InputSpec::AllIntegers { x: 1_000_000 };
    let classes = vec![
        FunctionSpec::OmegaClass { modulus: 4, residues: vec![1] },
        FunctionSpec::OmegaClass { modulus: 3, residues: vec![1] },
    ];
    let make = |polynomial: &str, input: InputSpec, functions: Vec<FunctionSpec>| ExperimentConfig {
        polynomial: polynomial.into(),
        m_max: DEFAULT_M_MAX,
        seed: DEFAULT_SEED,
        input,
        window: WindowPolicy::Auto,
        functions,
        output: None,
    };
    let cfg = match name {
        "thm11-omega" => make("T", integers, vec![FunctionSpec::Omega]),
        "cor1-omega-square" => make("T^2", integers, vec![FunctionSpec::Omega]),
        "cor1-omega-cube" => make("T^3", integers, vec![FunctionSpec::Omega]),
        "ex2-product-classes" => make("T1*T2", integers, classes),
        "ex3-linear" => make("2*T1 + 3*T2", integers, classes),
        "thm15-shifted" => make(
            "T",
            InputSpec::ShiftedPrimes { x: 1_000_000, shift: 1 },
            vec![FunctionSpec::Omega],
        ),
        other => {
            return Err(CliError::Config(format!(
                "unknown preset {other:?}; available: {}",
                PRESETS.join(", ")
            )))
        }
    };
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_round_trip() {
        for name in PRESETS {
            let cfg = preset(name).unwrap();
            cfg.validate().unwrap();
            let back = ExperimentConfig::parse(&cfg.to_toml()).unwrap();
            assert_eq!(back, cfg, "{name}");
            assert_eq!(back.hash(), cfg.hash());
        }
    }

    #[test]
    fn rejects_bad_values() {
        let base = preset("thm11-omega").unwrap();
        let mut small = base.clone();
        small.input = InputSpec::AllIntegers { x: 10 };
        assert!(matches!(small.validate(), Err(CliError::Config(_))));
        let mut odd = base.clone();
        odd.m_max = 5;
        assert!(odd.validate().is_err());
        let mut neg = base;
        neg.polynomial = "T1-T2".into();
        assert!(neg.validate().is_err());
    }

    #[test]
    fn toml_errors_carry_position() {
        let err = ExperimentConfig::parse("polynomial = \"T\"\nm_max = \n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn parses_documented_example() {
        let text = r#"
polynomial = "T1*T2"
m_max = 6

[input]
kind = "shifted-primes"
x = 5000
shift = -2

[window]
policy = "explicit"
z = 100.0

[[functions]]
kind = "omega"

[[functions]]
kind = "omega-class"
modulus = 4
residues = [1, 3]
"#;
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.input, InputSpec::ShiftedPrimes { x: 5000, shift: -2 });
        assert_eq!(cfg.window, WindowPolicy::Explicit { z: 100.0 });
        assert_eq!(cfg.seed, DEFAULT_SEED);
        assert_eq!(cfg.polynomial().unwrap().vars(), 2);
    }
}
