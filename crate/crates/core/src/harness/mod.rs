//! Variety and identity registries, series recipes, and the verification
//! engine behind the command-line tool.

pub mod config;
pub mod recipe;
pub mod registry;
pub mod verify;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::charsums::{point_count_brute, JacobiCache, DEFAULT_BRUTE_BUDGET};
use crate::error::{Error, Result};
use crate::ffield::FiniteField;
use crate::geometry::{HodgeTable, VarietyDescriptor};
use crate::motive::{LSeries, OmegaMotive};
use crate::numtheory::primes_up_to;

pub use config::ConfigFile;
pub use recipe::Recipe;
pub use registry::{builtin_identities, builtin_varieties};
pub use verify::{run_identities, ReportFile, VerificationReport};

/// Environment variable naming a directory for the persistent Jacobi-sum
/// cache.
pub const CACHE_DIR_ENV: &str = "FANOMOTIVE_CACHE_DIR";
pub const DEFAULT_COEFFICIENT_BOUND: usize = 200;
pub const DEFAULT_SERIES_BOUND: usize = 100;

#[derive(Clone, Debug)]
pub struct VarietyEntry {
    pub descriptor: VarietyDescriptor,
    /// Level of the associated modular form, as recorded metadata.
    pub level: Option<u64>,
    pub expected_hodge: Option<HodgeTable>,
    /// Expected primitive table is completed by the hyperplane class.
    pub expected_hodge_full: Option<HodgeTable>,
}

impl VarietyEntry {
    pub fn new(descriptor: VarietyDescriptor) -> Self {
        VarietyEntry {
            descriptor,
            level: None,
            expected_hodge: None,
            expected_hodge_full: None,
        }
    }
}

/// Index sets on which two coefficient sequences are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// Every `n ≤ bound` free of bad primes.
    GoodSupported,
    /// Good primes `p ≤ bound`.
    GoodPrimes,
    /// Good primes `p ≤ bound` that split in the given ring.
    SplitPrimes(crate::heckechar::FieldTag),
}

impl Domain {
    pub fn parse(s: &str) -> Result<Self> {
        use crate::heckechar::FieldTag;
        match s {
            "good-supported" => Ok(Domain::GoodSupported),
            "good-primes" => Ok(Domain::GoodPrimes),
            "split-primes:eisenstein" => Ok(Domain::SplitPrimes(FieldTag::Eisenstein)),
            "split-primes:gauss" => Ok(Domain::SplitPrimes(FieldTag::Gauss)),
            _ => Err(Error::Config(format!("unknown domain {s:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        use crate::heckechar::FieldTag;
        match self {
            Domain::GoodSupported => "good-supported",
            Domain::GoodPrimes => "good-primes",
            Domain::SplitPrimes(FieldTag::Eisenstein) => "split-primes:eisenstein",
            Domain::SplitPrimes(FieldTag::Gauss) => "split-primes:gauss",
        }
    }

    pub fn indices(&self, bound: usize, bad: &BTreeSet<u64>) -> Vec<usize> {
        use crate::heckechar::{split_prime, Splitting};
        let good = |n: usize| bad.iter().all(|&p| n as u64 % p != 0);
        match self {
            Domain::GoodSupported => (1..=bound).filter(|&n| good(n)).collect(),
            Domain::GoodPrimes => primes_up_to(bound as u64)
                .into_iter()
                .map(|p| p as usize)
                .filter(|&p| good(p))
                .collect(),
            Domain::SplitPrimes(tag) => primes_up_to(bound as u64)
                .into_iter()
                .filter(|&p| matches!(split_prime(p, *tag), Ok(Splitting::Split(_))))
                .map(|p| p as usize)
                .filter(|&p| good(p))
                .collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Check {
    /// Coefficientwise equality of two recipes on a domain.
    Series {
        label: String,
        left: Recipe,
        right: Recipe,
        domain: Domain,
        bound: usize,
    },
    /// The twist map of two registry varieties (each with a distinguished
    /// coordinate; `second_sign` multiplies the second variety's
    /// distinguished coefficient) normalizes to `target`.
    TwistMap {
        label: String,
        first: (String, usize),
        second: (String, usize),
        second_sign: i64,
        target: String,
    },
    /// Hodge numbers from exponent enumeration equal the recorded table.
    Hodge { label: String, variety: String },
}

impl Check {
    pub fn label(&self) -> &str {
        match self {
            Check::Series { label, .. } | Check::TwistMap { label, .. } | Check::Hodge { label, .. } => label,
        }
    }

    /// Stable text used for configuration hashing.
    pub fn canonical(&self) -> String {
        match self {
            Check::Series {
                label,
                left,
                right,
                domain,
                bound,
            } => format!("series|{label}|{left}|{right}|{}|{bound}", domain.name()),
            Check::TwistMap {
                label,
                first,
                second,
                second_sign,
                target,
            } => format!(
                "twist|{label}|{}:{}|{}:{}|{second_sign}|{target}",
                first.0, first.1, second.0, second.1
            ),
            Check::Hodge { label, variety } => format!("hodge|{label}|{variety}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct IdentityCase {
    pub id: String,
    pub description: String,
    pub checks: Vec<Check>,
}

/// Shared state for evaluating recipes: the variety table, the Jacobi-sum
/// cache and memoized L-series.
pub struct Context {
    varieties: BTreeMap<String, VarietyEntry>,
    cache: JacobiCache,
    brute_budget: u128,
    lseries: Mutex<HashMap<String, Arc<LSeries>>>,
}

impl Context {
    pub fn new(varieties: Vec<VarietyEntry>) -> Self {
        let mut ctx = Context {
            varieties: BTreeMap::new(),
            cache: JacobiCache::new(),
            brute_budget: DEFAULT_BRUTE_BUDGET,
            lseries: Mutex::new(HashMap::new()),
        };
        for v in varieties {
            ctx.add_variety(v);
        }
        ctx
    }

    pub fn with_builtin() -> Self {
        Self::new(builtin_varieties())
    }

    pub fn add_variety(&mut self, entry: VarietyEntry) {
        self.varieties
            .insert(entry.descriptor.name().to_string(), entry);
    }

    pub fn set_brute_budget(&mut self, budget: u128) {
        self.brute_budget = budget;
    }

    pub fn brute_budget(&self) -> u128 {
        self.brute_budget
    }

    pub fn varieties(&self) -> impl Iterator<Item = &VarietyEntry> {
        self.varieties.values()
    }

    pub fn variety(&self, name: &str) -> Result<&VarietyEntry> {
        self.varieties.get(name).ok_or_else(|| Error::Unknown {
            kind: "variety",
            name: name.to_string(),
        })
    }

    pub fn cache(&self) -> &JacobiCache {
        &self.cache
    }

    pub fn motive(&self, name: &str) -> Result<OmegaMotive> {
        OmegaMotive::new(&self.variety(name)?.descriptor)
    }

    /// `a_1..=a_n` of the motive of `name`, memoized (a longer cached
    /// expansion is truncated).
    pub fn motive_lseries(&self, name: &str, n: usize) -> Result<Arc<LSeries>> {
        if let Some(l) = self.lseries.lock().unwrap().get(name) {
            if l.bound() >= n {
                return Ok(Arc::new(truncate_lseries(l, n)));
            }
        }
        let l = Arc::new(self.motive(name)?.lseries_coefficients(n, &self.cache)?);
        let mut memo = self.lseries.lock().unwrap();
        let keep = memo.get(name).map_or(true, |old| old.bound() < n);
        if keep {
            memo.insert(name.to_string(), l.clone());
        }
        Ok(l)
    }

    /// Twisted Frobenius traces on the primitive middle cohomology at good
    /// primes `p ≤ n`, from literal point counts; other indices are zero.
    pub fn brute_traces(&self, name: &str, n: usize) -> Result<(Vec<BigInt>, BTreeSet<u64>)> {
        let motive = self.motive(name)?;
        let v = motive.variety();
        let mut out = vec![BigInt::zero(); n + 1];
        let mut bad = BTreeSet::new();
        for p in primes_up_to(n as u64) {
            if motive.is_bad_prime(p) {
                bad.insert(p);
                continue;
            }
            let field = FiniteField::new(p, 1)?;
            let count = point_count_brute(v, &field, self.brute_budget)?;
            let pb = BigInt::from(p);
            let ambient: BigInt = (0..v.s() as u32).map(|i| pb.pow(i)).sum();
            let trace = (count - ambient) * BigInt::from(motive.sign());
            let scale = pb.pow(motive.twist());
            if !trace.is_multiple_of(&scale) {
                return Err(Error::InexactDivision(format!(
                    "{name}: point-count trace {trace} at {p} is not divisible by {scale}"
                )));
            }
            out[p as usize] = trace / scale;
        }
        Ok((out, bad))
    }

    fn cache_file(dir: &Path) -> PathBuf {
        dir.join("jacobi.json")
    }

    /// Loads the Jacobi cache from `dir` when present.
    pub fn load_cache(&self, dir: &Path) -> Result<usize> {
        let path = Self::cache_file(dir);
        if !path.exists() {
            return Ok(0);
        }
        let text = std::fs::read_to_string(&path)?;
        self.cache.load_json(&text)
    }

    pub fn save_cache(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(Self::cache_file(dir), self.cache.to_json())?;
        Ok(())
    }
}

fn truncate_lseries(l: &LSeries, n: usize) -> LSeries {
    LSeries {
        name: l.name.clone(),
        twist: l.twist,
        weight: l.weight,
        coeffs: l.coeffs[..=n].to_vec(),
        bad_primes: l.bad_primes.iter().copied().filter(|&p| p as usize <= n).collect(),
        flagged: l.flagged.iter().copied().filter(|&m| m <= n).collect(),
    }
}
