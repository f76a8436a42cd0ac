//! Built-in varieties and identities.

use std::collections::BTreeMap;

use crate::geometry::{HodgeTable, VarietyDescriptor};
use crate::heckechar::FieldTag;

use super::{
    Check, Domain, IdentityCase, Recipe, VarietyEntry, DEFAULT_COEFFICIENT_BOUND, DEFAULT_SERIES_BOUND,
};

fn table(entries: &[((u32, u32), u64)]) -> HodgeTable {
    HodgeTable(entries.iter().copied().collect::<BTreeMap<_, _>>())
}

fn entry(descriptor: VarietyDescriptor, level: u64) -> VarietyEntry {
    VarietyEntry {
        level: Some(level),
        ..VarietyEntry::new(descriptor)
    }
}

/// The cubic sevenfold, quartic fivefold, cubic fourfold, the two elliptic
/// curves and the sextic K3 double cover of the plane.
pub fn builtin_varieties() -> Vec<VarietyEntry> {
    let mut x73 = entry(VarietyDescriptor::fermat("X73", 3, 9).expect("valid"), 9);
    x73.expected_hodge = Some(table(&[((5, 2), 1), ((4, 3), 84), ((3, 4), 84), ((2, 5), 1)]));

    let mut w = vec![1; 6];
    w.push(2);
    let mut n = vec![4; 6];
    n.push(2);
    let mut x54 = entry(VarietyDescriptor::new("X54", w, n, 4, None).expect("valid"), 64);
    x54.expected_hodge = Some(table(&[((4, 1), 1), ((3, 2), 90), ((2, 3), 90), ((1, 4), 1)]));

    let mut x43 = entry(VarietyDescriptor::fermat("X43", 3, 6).expect("valid"), 27);
    x43.expected_hodge = Some(table(&[((3, 1), 1), ((2, 2), 20), ((1, 3), 1)]));
    x43.expected_hodge_full = Some(table(&[((3, 1), 1), ((2, 2), 21), ((1, 3), 1)]));

    let e3 = entry(VarietyDescriptor::fermat("E3", 3, 3).expect("valid"), 27);
    let e4 = entry(
        VarietyDescriptor::new("E4", vec![1, 1, 2], vec![4, 4, 2], 4, None).expect("valid"),
        64,
    );
    let s6 = entry(
        VarietyDescriptor::new("S6", vec![1, 1, 1, 3], vec![6, 6, 6, 2], 6, None).expect("valid"),
        27,
    );
    vec![x73, x54, x43, e3, e4, s6]
}

fn series(label: &str, left: &str, right: &str, domain: Domain, bound: usize) -> Check {
    Check::Series {
        label: label.to_string(),
        left: Recipe::parse(left).expect("built-in recipe"),
        right: Recipe::parse(right).expect("built-in recipe"),
        domain,
        bound,
    }
}

fn hodge(variety: &str) -> Check {
    Check::Hodge {
        label: format!("hodge({variety})"),
        variety: variety.to_string(),
    }
}

fn case(id: &str, description: &str, checks: Vec<Check>) -> IdentityCase {
    IdentityCase {
        id: id.to_string(),
        description: description.to_string(),
        checks,
    }
}

pub fn builtin_identities() -> Vec<IdentityCase> {
    use Domain::*;
    let c = DEFAULT_COEFFICIENT_BOUND;
    let s = DEFAULT_SERIES_BOUND;
    let e3_theta = "theta(1,1,1)@3 * theta(1,1,1)@9";
    let e4_theta = "theta(2,1,1)@4^2 | chi2";
    vec![
        case(
            "I1",
            "cubic sevenfold motive equals the fourth power of a Hecke indefinite theta series",
            vec![series("X73", "motive(X73)", "theta(1,1,1)@3^4", GoodSupported, s)],
        ),
        case(
            "I2",
            "cubic elliptic curve equals a product of two indefinite theta series",
            vec![
                series("motive", "motive(E3)", e3_theta, GoodSupported, c),
                series("points", "brute(E3)", e3_theta, GoodPrimes, c),
                series("hecke", "hecke(psi27,1)", e3_theta, GoodSupported, c),
            ],
        ),
        case(
            "I3",
            "quartic elliptic curve equals a quadratic twist of a squared theta series",
            vec![
                series("motive", "motive(E4)", e4_theta, GoodSupported, c),
                series("points", "brute(E4)", e4_theta, GoodPrimes, c),
                series("hecke", "hecke(psi64,1)", e4_theta, GoodSupported, c),
            ],
        ),
        case(
            "I4",
            "cubic fourfold motive equals a triple product of theta series",
            vec![series(
                "X43",
                "motive(X43)",
                "fieldtheta(eisenstein)@3 * theta(1,1,1)@3 * theta(1,1,1)@9",
                GoodSupported,
                s,
            )],
        ),
        case(
            "I5",
            "motivic L-series equal Hecke character L-series",
            vec![
                series("X73", "motive(X73)", "hecke(psi27,3)", GoodSupported, c),
                series("X54", "motive(X54)", "hecke(psi64,3)", GoodSupported, c),
                series("X43", "motive(X43)", "hecke(psi27,2)", GoodSupported, c),
                series("E3", "motive(E3)", "hecke(psi27,1)", GoodSupported, c),
                series("E4", "motive(E4)", "hecke(psi64,1)", GoodSupported, c),
            ],
        ),
        case(
            "I6",
            "power relations with elliptic traces at split primes",
            vec![
                series("X73", "motive(X73)", "powertrace(brute(E3),3)", SplitPrimes(FieldTag::Eisenstein), c),
                series("X54", "motive(X54)", "powertrace(brute(E4),3)", SplitPrimes(FieldTag::Gauss), c),
                series("X43", "motive(X43)", "powertrace(brute(E3),2)", SplitPrimes(FieldTag::Eisenstein), c),
            ],
        ),
        case(
            "I7",
            "cubic fourfold and sextic K3 double cover share their motive",
            vec![series("X43-S6", "motive(X43)", "motive(S6)", GoodSupported, c)],
        ),
        case(
            "I8",
            "twist map of the sextic pair lands on the cubic fourfold",
            vec![Check::TwistMap {
                label: "S6+ x S6-".to_string(),
                first: ("S6".to_string(), 3),
                second: ("S6".to_string(), 3),
                second_sign: -1,
                target: "X43".to_string(),
            }],
        ),
        case(
            "I9",
            "Hodge numbers from exponent enumeration",
            vec![hodge("X73"), hodge("X54"), hodge("X43")],
        ),
    ]
}
