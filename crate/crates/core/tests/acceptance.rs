//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line.

use std::time::Instant;

use num_bigint::BigInt;

use fanomotive::charsums::{
    exponent_set, jacobi_sum_direct, jacobi_sum_fast, point_count, point_count_brute, ExponentVector, JacobiCache,
    DEFAULT_BRUTE_BUDGET,
};
use fanomotive::ffield::FiniteField;
use fanomotive::geometry::{full_middle_hodge_numbers, hodge_numbers, twist_map, VarietyDescriptor};
use fanomotive::harness::verify::compare_series;
use fanomotive::harness::{Context, Domain, Recipe};
use fanomotive::heckechar::{
    canonical_generator, elliptic_ap_brute, hecke_ap, split_prime, EllipticModel, FieldTag, HeckeCharacter, Splitting,
};
use fanomotive::numtheory::{prime_power, primes_up_to};

fn report(n: u32, title: &str, start: Instant, failures: &[String]) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {n}: {status} {title} ({} ms)", start.elapsed().as_millis());
    for f in failures.iter().take(10) {
        println!("  {f}");
    }
    assert!(failures.is_empty(), "criterion {n} failed: {failures:?}");
}

fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

#[test]
fn criterion_1_coefficient_tables() {
    let start = Instant::now();
    let ctx = Context::with_builtin();
    let tables: [(&str, &str, u32, [(usize, i64); 4]); 3] = [
        ("X73", "psi27", 3, [(7, 20), (13, -70), (19, 56), (31, 308)]),
        ("X54", "psi64", 3, [(5, -22), (13, 18), (17, -94), (29, 130)]),
        ("X43", "psi27", 2, [(7, -13), (13, -1), (19, 11), (31, -46)]),
    ];
    let mut failures = Vec::new();
    for (name, chr, k, table) in tables {
        let l = ctx.motive_lseries(name, 31).unwrap();
        let chr = HeckeCharacter::by_name(chr).unwrap();
        for (p, expected) in table {
            if l.coeffs[p] != int(expected) {
                failures.push(format!("{name} motive a_{p} = {} (want {expected})", l.coeffs[p]));
            }
            let h = hecke_ap(&chr, k, p as u64).unwrap();
            if h != int(expected) {
                failures.push(format!("{name} hecke a_{p} = {h} (want {expected})"));
            }
        }
    }
    report(1, "coefficient tables from Jacobi sums and Hecke characters", start, &failures);
}

#[test]
fn criterion_2_theta_products_for_fourfold_and_sevenfold() {
    let start = Instant::now();
    let ctx = Context::with_builtin();
    let mut failures = Vec::new();
    let cases = [
        ("motive(X73)", "theta(1,1,1)@3^4"),
        ("motive(X43)", "fieldtheta(eisenstein)@3 * theta(1,1,1)@3 * theta(1,1,1)@9"),
    ];
    for (left, right) in cases {
        let l = Recipe::parse(left).unwrap();
        let r = Recipe::parse(right).unwrap();
        match compare_series(&ctx, &l, &r, Domain::GoodSupported, 100) {
            Ok((compared, None)) if compared > 0 => {}
            Ok((_, Some(m))) => failures.push(format!("{left} vs {right}: index {} {} vs {}", m.index, m.left, m.right)),
            Ok(_) => failures.push(format!("{left}: nothing compared")),
            Err(e) => failures.push(format!("{left}: {e}")),
        }
    }
    report(2, "motivic series equal theta products to exponent 100", start, &failures);
}

#[test]
fn criterion_3_theta_products_give_elliptic_traces() {
    let start = Instant::now();
    let ctx = Context::with_builtin();
    let mut failures = Vec::new();
    let cases = [
        (EllipticModel::E3, "theta(1,1,1)@3 * theta(1,1,1)@9"),
        (EllipticModel::E4, "theta(2,1,1)@4^2 | chi2"),
    ];
    for (curve, recipe) in cases {
        let series = Recipe::parse(recipe).unwrap().evaluate(&ctx, 201).unwrap().series;
        let coeffs = series.integral_coefficients(200).unwrap();
        for p in primes_up_to(200).into_iter().filter(|&p| curve.is_good(p)) {
            let b = elliptic_ap_brute(curve, p, DEFAULT_BRUTE_BUDGET).unwrap();
            if coeffs[p as usize] != b {
                failures.push(format!("{curve:?} p = {p}: theta {} vs count {b}", coeffs[p as usize]));
            }
        }
    }
    report(3, "theta expansions reproduce elliptic point counts for p <= 200", start, &failures);
}

#[test]
fn criterion_4_power_relations_at_split_primes() {
    let start = Instant::now();
    let ctx = Context::with_builtin();
    let mut failures = Vec::new();
    let cases = [
        ("X73", EllipticModel::E3, FieldTag::Eisenstein, 3),
        ("X54", EllipticModel::E4, FieldTag::Gauss, 3),
        ("X43", EllipticModel::E3, FieldTag::Eisenstein, 2),
    ];
    for (name, curve, tag, k) in cases {
        let l = ctx.motive_lseries(name, 200).unwrap();
        let motive = ctx.motive(name).unwrap();
        let mut compared = 0;
        for p in primes_up_to(200) {
            if motive.is_bad_prime(p) || !curve.is_good(p) {
                continue;
            }
            if !matches!(split_prime(p, tag).unwrap(), Splitting::Split(_)) {
                continue;
            }
            let b = elliptic_ap_brute(curve, p, DEFAULT_BRUTE_BUDGET).unwrap();
            let pb = int(p as i64);
            let expected = if k == 3 { b.pow(3) - int(3) * &pb * &b } else { b.pow(2) - int(2) * &pb };
            compared += 1;
            if l.coeffs[p as usize] != expected {
                failures.push(format!("{name} p = {p}: {} vs {expected}", l.coeffs[p as usize]));
            }
        }
        if compared == 0 {
            failures.push(format!("{name}: no split primes compared"));
        }
    }
    report(4, "cube and square relations with elliptic traces", start, &failures);
}

fn all_vectors(q: u64, len: usize, integral_only: bool) -> Vec<ExponentVector> {
    let den = (q - 1) as u32;
    let mut out = Vec::new();
    let mut num = vec![1u32; len];
    loop {
        let sum: u32 = num.iter().sum();
        if !integral_only || sum % den == 0 {
            out.push(ExponentVector::from_parts(den, num.clone()).unwrap());
        }
        let mut i = 0;
        loop {
            if i == len {
                return out;
            }
            num[i] += 1;
            if num[i] < den {
                break;
            }
            num[i] = 1;
            i += 1;
        }
    }
}

#[test]
fn criterion_5_oracle_equivalence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut jacobi_checked = 0usize;
    for q in 3..=49u64 {
        let Some((p, f)) = prime_power(q) else { continue };
        let field = FiniteField::new(p, f).unwrap();
        let mut vectors = all_vectors(q, 2, false);
        vectors.extend(all_vectors(q, 3, false));
        if q <= 16 {
            vectors.extend(all_vectors(q, 4, true));
        }
        for alpha in vectors {
            let fast = jacobi_sum_fast(&alpha, &field).unwrap();
            let direct = jacobi_sum_direct(&alpha, &field).unwrap();
            jacobi_checked += 1;
            if fast != direct {
                failures.push(format!("q = {q}, alpha = {:?}: fast {fast} vs direct {direct}", alpha.entries()));
            }
        }
    }
    let ctx = Context::with_builtin();
    let mut counts_checked = 0usize;
    for name in ["E3", "E4", "S6", "X43"] {
        let motive = ctx.motive(name).unwrap();
        let v = motive.variety();
        for p in primes_up_to(10_000) {
            if (p as u128).pow(v.s() as u32) > DEFAULT_BRUTE_BUDGET {
                break;
            }
            if motive.is_bad_prime(p) {
                continue;
            }
            let field = FiniteField::new(p, 1).unwrap();
            let fast = point_count(v, &field).unwrap();
            let brute = point_count_brute(v, &field, DEFAULT_BRUTE_BUDGET).unwrap();
            counts_checked += 1;
            if fast != brute {
                failures.push(format!("{name} p = {p}: {fast} vs {brute}"));
            }
        }
    }
    println!("  {jacobi_checked} Jacobi sums and {counts_checked} point counts compared");
    report(5, "fast and direct oracles agree", start, &failures);
}

#[test]
fn criterion_6_hodge_tables() {
    let start = Instant::now();
    let ctx = Context::with_builtin();
    let mut failures = Vec::new();
    let d = |n: &str| ctx.variety(n).unwrap().descriptor.clone();
    let checks = [
        ("X73", hodge_numbers(&d("X73")).get(5, 2), 1),
        ("X73", hodge_numbers(&d("X73")).get(4, 3), 84),
        ("X54", hodge_numbers(&d("X54")).get(4, 1), 1),
        ("X54", hodge_numbers(&d("X54")).get(3, 2), 90),
        ("X43", hodge_numbers(&d("X43")).get(3, 1), 1),
        ("X43", hodge_numbers(&d("X43")).get(2, 2), 20),
        ("X43", hodge_numbers(&d("X43")).get(1, 3), 1),
        ("X43 full", full_middle_hodge_numbers(&d("X43")).get(2, 2), 21),
    ];
    for (name, got, want) in checks {
        if got != want {
            failures.push(format!("{name}: {got} vs {want}"));
        }
    }
    report(6, "Hodge numbers from exponent enumeration", start, &failures);
}

#[test]
fn criterion_7_property_suite() {
    let start = Instant::now();
    let ctx = Context::with_builtin();
    let mut failures = Vec::new();

    let cache = JacobiCache::new();
    for entry in ctx.varieties() {
        let v = &entry.descriptor;
        for q in [7u64, 13, 16, 19, 25, 37, 49] {
            let (p, f) = prime_power(q).unwrap();
            let field = FiniteField::new(p, f).unwrap();
            for alpha in exponent_set(v.exponents(), q) {
                let j = cache.jacobi(&alpha, &field).unwrap().embed();
                let expected = (q as f64).powi(alpha.len() as i32 - 2);
                if ((j.norm_sqr() - expected) / expected).abs() > 1e-6 {
                    failures.push(format!("{} q = {q}: |j|^2 = {} vs {expected}", v.name(), j.norm_sqr()));
                }
            }
        }
    }

    let theta = Recipe::parse("theta(1,1,1)").unwrap().evaluate(&ctx, 500).unwrap().series;
    let eta2 = Recipe::parse("eta^2").unwrap().evaluate(&ctx, 500).unwrap().series;
    if !theta.compare(&eta2).is_equal() {
        failures.push("theta(1,1,1) differs from eta^2 below 500".into());
    }

    for name in ["E3", "E4", "S6", "X43"] {
        let v = ctx.variety(name).unwrap().descriptor.clone();
        for q in [7u64, 13, 16, 25] {
            let (p, f) = prime_power(q).unwrap();
            let base = point_count(&v, &FiniteField::new(p, f).unwrap()).unwrap();
            for g in 2..q as u32 {
                let Ok(field) = FiniteField::with_generator(p, f, g) else { continue };
                let n = point_count(&v, &field).unwrap();
                if n != base {
                    failures.push(format!("{name} q = {q} generator {g}: {n} vs {base}"));
                }
            }
        }
    }

    for chr in [HeckeCharacter::psi27(), HeckeCharacter::psi32()] {
        for p in primes_up_to(10_000) {
            if !chr.is_good(p) {
                continue;
            }
            if let Splitting::Split(pi) = split_prime(p, chr.tag).unwrap() {
                if let Err(e) = canonical_generator(&pi, &chr) {
                    failures.push(format!("{} p = {p}: {e}", chr.name));
                }
            }
        }
    }
    report(7, "Weil magnitudes, theta = eta^2, generator independence, canonical generators", start, &failures);
}

#[test]
fn criterion_8_twist_map() {
    let start = Instant::now();
    let plus = VarietyDescriptor::new("S6+", vec![1, 1, 1, 3], vec![6, 6, 6, 2], 6, None).unwrap();
    let minus = VarietyDescriptor::new("S6-", vec![1, 1, 1, 3], vec![6, 6, 6, 2], 6, Some(vec![1, 1, 1, -1])).unwrap();
    let image = twist_map(&plus.move_to_front(3).unwrap(), &minus.move_to_front(3).unwrap()).unwrap();
    let mut failures = Vec::new();
    let w = image.weights();
    if w.len() != 6 || w.iter().any(|&k| k != w[0]) {
        failures.push(format!("weights {w:?}"));
    }
    if image.degree() != 3 * w[0] || image.exponents().iter().any(|&n| n != 3) {
        failures.push(format!("target {image}"));
    }
    report(8, "sextic pair twist map lands on the cubic in P5", start, &failures);
}

#[test]
fn criterion_9_levels_recorded_as_metadata() {
    let start = Instant::now();
    let ctx = Context::with_builtin();
    let mut failures = Vec::new();
    for (name, level) in [("X73", 9), ("X54", 64), ("X43", 27), ("E3", 27), ("E4", 64)] {
        if ctx.variety(name).unwrap().level != Some(level) {
            failures.push(format!("{name}: level metadata missing"));
        }
    }
    println!("  newform levels and mirror h11 are recorded only, not asserted");
    report(9, "excluded level assertions kept as metadata", start, &failures);
}
