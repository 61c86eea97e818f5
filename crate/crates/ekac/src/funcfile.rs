//! Table-valued additive functions stored as TOML.
//!
//! ```toml
//! name = "weighted"
//! bound = 2.0
//! default = 0.0
//!
//! [[prime]]
//! p = 3
//! value = 0.5
//!
//! [[class]]
//! modulus = 4
//! residues = [1]
//! value = 2.0
//! ```
//!
//! Explicit primes win over classes; the first matching class wins over
//! the default.

use std::collections::BTreeMap;
use std::path::Path;

use ekac_core::additive::ClassRule;
use ekac_core::StronglyAdditive;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeValue {
    pub p: u64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassValue {
    pub modulus: u64,
    pub residues: Vec<u64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionFile {
    pub name: String,
    pub bound: f64,
    #[serde(default)]
    pub default: f64,
    #[serde(default, rename = "prime")]
    pub primes: Vec<PrimeValue>,
    #[serde(default, rename = "class")]
    pub classes: Vec<ClassValue>,
}

impl FunctionFile {
    pub fn parse(text: &str) -> CliResult<FunctionFile> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn build(&self) -> CliResult<StronglyAdditive> {
        let mut explicit = BTreeMap::new();
        for pv in &self.primes {
            if !ekac_core::sieve::is_prime(pv.p) {
                return Err(CliError::Config(format!("{}: {} is not prime", self.name, pv.p)));
            }
            if explicit.insert(pv.p, pv.value).is_some() {
                return Err(CliError::Config(format!("{}: prime {} listed twice", self.name, pv.p)));
            }
        }
        let classes = self
            .classes
            .iter()
            .map(|c| ClassRule { modulus: c.modulus, residues: c.residues.clone(), value: c.value })
            .collect();
        StronglyAdditive::table(&self.name, self.bound, explicit, classes, self.default)
            .map_err(|e| CliError::Config(e.to_string()))
    }
}

pub fn load(path: &Path) -> CliResult<StronglyAdditive> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    FunctionFile::parse(&text)
        .and_then(|f| f.build())
        .map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
name = "weighted"
bound = 2.0

[[prime]]
p = 3
value = 0.5

[[class]]
modulus = 4
residues = [1]
value = 2.0
"#;

    #[test]
    fn precedence() {
        let g = FunctionFile::parse(SAMPLE).unwrap().build().unwrap();
        assert_eq!(g.value(3), 0.5);
        assert_eq!(g.value(5), 2.0);
        assert_eq!(g.value(7), 0.0);
        assert_eq!(g.eval_full(&[3, 5, 7]), 2.5);
    }

    #[test]
    fn rejections() {
        let over = SAMPLE.replace("value = 2.0", "value = 3.0");
        assert!(FunctionFile::parse(&over).unwrap().build().is_err());
        let composite = SAMPLE.replace("p = 3", "p = 9");
        assert!(FunctionFile::parse(&composite).unwrap().build().is_err());
        assert!(FunctionFile::parse("name = 1").is_err());
    }
}
