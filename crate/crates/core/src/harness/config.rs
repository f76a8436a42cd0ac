//! TOML configuration for custom varieties and identities.
//!
//! ```toml
//! [settings]
//! coefficient_bound = 200   # overrides every check bound when set
//! brute_budget = 100000000
//!
//! [[variety]]
//! name = "E6"
//! weights = [1, 2, 3]
//! exponents = [6, 3, 2]
//! degree = 6
//! coefficients = [1, 1, 1]          # optional
//! hodge = [[1, 0, 1], [0, 1, 1]]    # optional (p, q, h)
//!
//! [[identity]]
//! id = "C1"
//! description = "..."
//! left = "motive(E6)"
//! right = "hecke(psi27,1)"
//! domain = "good-supported"        # good-primes, split-primes:eisenstein, split-primes:gauss
//! bound = 100
//!
//! [[identity]]
//! id = "C2"
//! kind = "hodge"
//! variety = "E6"
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{HodgeTable, VarietyDescriptor};

use super::{Check, Domain, IdentityCase, Recipe, VarietyEntry, DEFAULT_COEFFICIENT_BOUND};

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub coefficient_bound: Option<usize>,
    pub brute_budget: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct VarietyConfig {
    pub name: String,
    pub weights: Vec<u32>,
    pub exponents: Vec<u32>,
    pub degree: u32,
    pub coefficients: Option<Vec<i64>>,
    pub hodge: Option<Vec<[u64; 3]>>,
    pub level: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct IdentityConfig {
    pub id: String,
    pub description: Option<String>,
    pub kind: Option<String>,
    pub left: Option<String>,
    pub right: Option<String>,
    pub domain: Option<String>,
    pub bound: Option<usize>,
    pub variety: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub settings: Settings,
    #[serde(default, rename = "variety")]
    pub varieties: Vec<VarietyConfig>,
    #[serde(default, rename = "identity")]
    pub identities: Vec<IdentityConfig>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn variety_entries(&self) -> Result<Vec<VarietyEntry>> {
        self.varieties.iter().map(VarietyConfig::to_entry).collect()
    }

    pub fn identity_cases(&self) -> Result<Vec<IdentityCase>> {
        self.identities.iter().map(IdentityConfig::to_case).collect()
    }
}

impl VarietyConfig {
    pub fn to_entry(&self) -> Result<VarietyEntry> {
        let descriptor = VarietyDescriptor::new(
            self.name.as_str(),
            self.weights.clone(),
            self.exponents.clone(),
            self.degree,
            self.coefficients.clone(),
        )?;
        let expected_hodge = self.hodge.as_ref().map(|rows| {
            HodgeTable(
                rows.iter()
                    .map(|&[p, q, h]| ((p as u32, q as u32), h))
                    .collect::<BTreeMap<_, _>>(),
            )
        });
        Ok(VarietyEntry {
            descriptor,
            level: self.level,
            expected_hodge,
            expected_hodge_full: None,
        })
    }
}

impl IdentityConfig {
    fn field(&self, value: &Option<String>, name: &str) -> Result<String> {
        value
            .clone()
            .ok_or_else(|| Error::Config(format!("identity {}: missing {name}", self.id)))
    }

    pub fn to_case(&self) -> Result<IdentityCase> {
        let check = match self.kind.as_deref().unwrap_or("series") {
            "series" => {
                let left = self.field(&self.left, "left")?;
                let right = self.field(&self.right, "right")?;
                let domain = self.domain.as_deref().unwrap_or("good-supported");
                Check::Series {
                    label: self.id.clone(),
                    left: Recipe::parse(&left)?,
                    right: Recipe::parse(&right)?,
                    domain: Domain::parse(domain)?,
                    bound: self.bound.unwrap_or(DEFAULT_COEFFICIENT_BOUND),
                }
            }
            "hodge" => {
                let variety = self.field(&self.variety, "variety")?;
                Check::Hodge {
                    label: format!("hodge({variety})"),
                    variety,
                }
            }
            other => return Err(Error::Config(format!("identity {}: unknown kind {other:?}", self.id))),
        };
        Ok(IdentityCase {
            id: self.id.clone(),
            description: self.description.clone().unwrap_or_default(),
            checks: vec![check],
        })
    }
}
