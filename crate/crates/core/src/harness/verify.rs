//! Runs identity checks and assembles deterministic JSON reports.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{full_middle_hodge_numbers, hodge_numbers, twist_map, HodgeTable, VarietyDescriptor};
use crate::qseries::int_json;

use super::{Check, Context, Domain, IdentityCase, Recipe};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Mismatch {
    pub index: u64,
    pub left: Value,
    pub right: Value,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckReport {
    pub label: String,
    pub kind: &'static str,
    pub left: String,
    pub right: String,
    pub domain: Option<String>,
    pub bound: Option<usize>,
    pub compared: usize,
    pub passed: bool,
    pub first_mismatch: Option<Mismatch>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VerificationReport {
    pub id: String,
    pub description: String,
    pub status: &'static str,
    pub checks: Vec<CheckReport>,
    pub timing_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ReportFile {
    pub tool_version: &'static str,
    pub config_hash: String,
    pub status: &'static str,
    pub reports: Vec<VerificationReport>,
}

impl ReportFile {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

/// SHA-256 of a canonical JSON rendering of the varieties, the checks and
/// the bound override.
pub fn config_hash(ctx: &Context, cases: &[IdentityCase], bound: Option<usize>) -> String {
    let varieties: BTreeMap<&str, Value> = ctx
        .varieties()
        .map(|v| {
            let d = &v.descriptor;
            (
                d.name(),
                json!({
                    "weights": d.weights(),
                    "exponents": d.exponents(),
                    "degree": d.degree(),
                    "coefficients": d.coefficients(),
                }),
            )
        })
        .collect();
    let identities: BTreeMap<&str, Vec<String>> = cases
        .iter()
        .map(|c| (c.id.as_str(), c.checks.iter().map(Check::canonical).collect()))
        .collect();
    let canonical = json!({
        "bound": bound,
        "brute_budget": ctx.brute_budget().to_string(),
        "varieties": varieties,
        "identities": identities,
    });
    let digest = Sha256::digest(canonical.to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Verifies `cases` in parallel; reports are ordered by identity id.
/// `bound` replaces every series bound when given.
pub fn run_identities(ctx: &Context, cases: &[IdentityCase], bound: Option<usize>) -> ReportFile {
    let mut reports: Vec<VerificationReport> = cases.par_iter().map(|c| run_case(ctx, c, bound)).collect();
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    let ok = reports.iter().all(VerificationReport::passed);
    ReportFile {
        tool_version: TOOL_VERSION,
        config_hash: config_hash(ctx, cases, bound),
        status: status(ok),
        reports,
    }
}

pub fn run_case(ctx: &Context, case: &IdentityCase, bound: Option<usize>) -> VerificationReport {
    let start = Instant::now();
    let checks: Vec<CheckReport> = case.checks.iter().map(|c| run_check(ctx, c, bound)).collect();
    let ok = !checks.is_empty() && checks.iter().all(|c| c.passed);
    VerificationReport {
        id: case.id.clone(),
        description: case.description.clone(),
        status: status(ok),
        checks,
        timing_ms: start.elapsed().as_millis() as u64,
    }
}

pub fn run_check(ctx: &Context, check: &Check, bound_override: Option<usize>) -> CheckReport {
    match check {
        Check::Series {
            label,
            left,
            right,
            domain,
            bound,
        } => {
            let bound = bound_override.unwrap_or(*bound);
            let mut report = CheckReport {
                label: label.clone(),
                kind: "series",
                left: left.to_string(),
                right: right.to_string(),
                domain: Some(domain.name().to_string()),
                bound: Some(bound),
                compared: 0,
                passed: false,
                first_mismatch: None,
                error: None,
            };
            match compare_series(ctx, left, right, *domain, bound) {
                Ok((compared, mismatch)) => {
                    report.compared = compared;
                    report.passed = mismatch.is_none() && compared > 0;
                    report.first_mismatch = mismatch;
                }
                Err(e) => report.error = Some(e.to_string()),
            }
            report
        }
        Check::TwistMap {
            label,
            first,
            second,
            second_sign,
            target,
        } => {
            let mut report = CheckReport {
                label: label.clone(),
                kind: "twist-map",
                left: format!("{}[{}] x {}[{}] (sign {second_sign})", first.0, first.1, second.0, second.1),
                right: target.clone(),
                domain: None,
                bound: None,
                compared: 1,
                passed: false,
                first_mismatch: None,
                error: None,
            };
            match check_twist(ctx, first, second, *second_sign, target) {
                Ok((image, ok)) => {
                    report.left = format!("{} -> {image}", report.left);
                    report.passed = ok;
                }
                Err(e) => report.error = Some(e.to_string()),
            }
            report
        }
        Check::Hodge { label, variety } => {
            let mut report = CheckReport {
                label: label.clone(),
                kind: "hodge",
                left: variety.clone(),
                right: "recorded table".to_string(),
                domain: None,
                bound: None,
                compared: 0,
                passed: false,
                first_mismatch: None,
                error: None,
            };
            match check_hodge(ctx, variety) {
                Ok((computed, compared, ok)) => {
                    report.left = format!("{variety}: {computed}");
                    report.compared = compared;
                    report.passed = ok;
                }
                Err(e) => report.error = Some(e.to_string()),
            }
            report
        }
    }
}

/// Number of compared indices and the first disagreement.
pub fn compare_series(
    ctx: &Context,
    left: &Recipe,
    right: &Recipe,
    domain: Domain,
    bound: usize,
) -> Result<(usize, Option<Mismatch>)> {
    let precision = bound as i64 + 1;
    let l = left.evaluate(ctx, precision)?;
    let r = right.evaluate(ctx, precision)?;
    if (l.primes_only || r.primes_only) && domain == Domain::GoodSupported {
        return Err(Error::Config(
            "a recipe defined only at primes needs a prime domain".into(),
        ));
    }
    let a = l.series.integral_coefficients(bound)?;
    let b = r.series.integral_coefficients(bound)?;
    let mut bad = l.bad_primes;
    bad.extend(r.bad_primes);
    let indices = domain.indices(bound, &bad);
    let mismatch = indices.iter().find(|&&n| a[n] != b[n]).map(|&n| Mismatch {
        index: n as u64,
        left: int_json(&a[n]),
        right: int_json(&b[n]),
    });
    Ok((indices.len(), mismatch))
}

fn with_sign(v: &VarietyDescriptor, sign: i64) -> Result<VarietyDescriptor> {
    let mut c = v.coefficients().to_vec();
    c[0] *= sign;
    VarietyDescriptor::new(v.name(), v.weights().to_vec(), v.exponents().to_vec(), v.degree(), Some(c))
}

fn shape(v: &VarietyDescriptor) -> (u32, Vec<(u32, u32, i64)>) {
    let mut cols: Vec<(u32, u32, i64)> = (0..v.weights().len())
        .map(|i| (v.weights()[i], v.exponents()[i], v.coefficients()[i]))
        .collect();
    cols.sort_unstable();
    (v.degree(), cols)
}

fn check_twist(
    ctx: &Context,
    first: &(String, usize),
    second: &(String, usize),
    sign: i64,
    target: &str,
) -> Result<(String, bool)> {
    let x1 = ctx.variety(&first.0)?.descriptor.move_to_front(first.1)?;
    let x2 = with_sign(&ctx.variety(&second.0)?.descriptor.move_to_front(second.1)?, sign)?;
    let image = twist_map(&x1, &x2)?;
    let expected = &ctx.variety(target)?.descriptor;
    Ok((image.to_string(), shape(&image) == shape(expected)))
}

fn render(t: &HodgeTable) -> String {
    let cells: Vec<String> = t.entries().iter().map(|((p, q), h)| format!("h{p}{q}={h}")).collect();
    cells.join(" ")
}

fn check_hodge(ctx: &Context, name: &str) -> Result<(String, usize, bool)> {
    let entry = ctx.variety(name)?;
    let expected = entry
        .expected_hodge
        .as_ref()
        .ok_or_else(|| Error::Config(format!("{name} has no recorded Hodge table")))?;
    let computed = hodge_numbers(&entry.descriptor);
    let mut ok = &computed == expected;
    let mut compared = expected.0.len();
    let mut text = render(&computed);
    if let Some(full) = &entry.expected_hodge_full {
        let computed_full = full_middle_hodge_numbers(&entry.descriptor);
        ok &= &computed_full == full;
        compared += full.0.len();
        text = format!("{text}; full {}", render(&computed_full));
    }
    Ok((text, compared, ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{builtin_identities, Context};

    fn find(id: &str) -> IdentityCase {
        builtin_identities().into_iter().find(|c| c.id == id).unwrap()
    }

    #[test]
    fn cheap_identities_pass() {
        let ctx = Context::with_builtin();
        for id in ["I8", "I9"] {
            let r = run_case(&ctx, &find(id), None);
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn small_bound_series_identities_pass() {
        let ctx = Context::with_builtin();
        for id in ["I1", "I2", "I5", "I7"] {
            let r = run_case(&ctx, &find(id), Some(40));
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn corrupted_identity_reports_first_mismatch() {
        let ctx = Context::with_builtin();
        let check = Check::Series {
            label: "wrong weight".into(),
            left: Recipe::parse("motive(X73)").unwrap(),
            right: Recipe::parse("hecke(psi27,2)").unwrap(),
            domain: Domain::GoodSupported,
            bound: 30,
        };
        let r = run_check(&ctx, &check, None);
        assert!(!r.passed);
        let m = r.first_mismatch.unwrap();
        assert_eq!(m.index, 4);
        assert_eq!(m.left, json!(-8));
    }

    #[test]
    fn primes_only_recipe_rejects_full_domain() {
        let ctx = Context::with_builtin();
        let check = Check::Series {
            label: "x".into(),
            left: Recipe::parse("brute(E3)").unwrap(),
            right: Recipe::parse("motive(E3)").unwrap(),
            domain: Domain::GoodSupported,
            bound: 20,
        };
        let r = run_check(&ctx, &check, None);
        assert!(r.error.is_some());
    }

    #[test]
    fn reports_are_deterministic() {
        let ctx = Context::with_builtin();
        let cases = vec![find("I9"), find("I8")];
        let a = run_identities(&ctx, &cases, None);
        let b = run_identities(&ctx, &cases, None);
        let strip = |mut r: ReportFile| {
            for rep in &mut r.reports {
                rep.timing_ms = 0;
            }
            r.to_json()
        };
        assert_eq!(a.reports[0].id, "I8");
        assert_eq!(strip(a), strip(b));
    }
}
