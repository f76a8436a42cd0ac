//! Exponent sets, Jacobi sums and point counts of diagonal hypersurfaces.
//!
//! For `α = (α_0, …, α_s)` the Jacobi sum is
//! `j_q(α) = (q-1)^{-1} Σ_{u_0+…+u_s=0} χ_{α_0}(u_0) ⋯ χ_{α_s}(u_s)` and the
//! number of points of `Σ b_i z_i^{n_i} = 0` is
//! `1 + q + … + q^{s-1} + Σ_α j_q(α) Π_i χ̄_{α_i}(b_i)`.
//!
//! Two independent evaluation paths are provided: [`jacobi_sum_direct`]
//! enumerates tuples, [`jacobi_sum_fast`] chains two-character sums or
//! convolves character tables.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::ffield::FiniteField;
use crate::geometry::VarietyDescriptor;
use crate::numtheory::{gcd, lcm};

/// Default budget for literal enumeration (tuples evaluated).
pub const DEFAULT_BRUTE_BUDGET: u128 = 100_000_000;

/// A vector of rationals in (0,1) stored over a common denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExponentVector {
    den: u32,
    num: Vec<u32>,
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries().iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl ExponentVector {
    /// Entries `num[i] / den`, each required to lie strictly between 0 and 1.
    pub fn from_parts(den: u32, num: Vec<u32>) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidExponent("zero denominator".into()));
        }
        if let Some(bad) = num.iter().find(|&&n| n == 0 || n >= den) {
            return Err(Error::InvalidExponent(format!(
                "entry {bad}/{den} is not in (0,1)"
            )));
        }
        let g = num.iter().fold(den as u64, |g, &n| gcd(g, n as u64)) as u32;
        Ok(ExponentVector {
            den: den / g,
            num: num.into_iter().map(|n| n / g).collect(),
        })
    }

    pub fn new(entries: &[Ratio<u32>]) -> Result<Self> {
        let den = entries
            .iter()
            .fold(1u64, |l, r| lcm(l, *r.denom() as u64)) as u32;
        let num = entries
            .iter()
            .map(|r| r.numer() * (den / r.denom()))
            .collect();
        Self::from_parts(den, num)
    }

    /// Common denominator (lcm of the entry denominators).
    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn numerators(&self) -> &[u32] {
        &self.num
    }

    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    pub fn entries(&self) -> Vec<Ratio<u32>> {
        self.num.iter().map(|&n| Ratio::new(n, self.den)).collect()
    }

    pub fn sum_is_integral(&self) -> bool {
        self.num.iter().map(|&n| n as u64).sum::<u64>() % self.den as u64 == 0
    }

    /// `Σ α_i` as an integer, when integral.
    pub fn integral_sum(&self) -> Option<u32> {
        let s: u64 = self.num.iter().map(|&n| n as u64).sum();
        (s % self.den as u64 == 0).then(|| (s / self.den as u64) as u32)
    }

    /// Entrywise dual `1 - α`.
    pub fn dual(&self) -> Self {
        ExponentVector {
            den: self.den,
            num: self.num.iter().map(|&n| self.den - n).collect(),
        }
    }

    /// `t·α mod 1`, an error if an entry becomes integral.
    pub fn scaled(&self, t: u64) -> Result<Self> {
        let num = self
            .num
            .iter()
            .map(|&n| ((n as u64 * t) % self.den as u64) as u32)
            .collect();
        Self::from_parts(self.den, num)
    }
}

/// Every `α` with `0 < α_i < 1`, `gcd(n_i, q-1)·α_i ∈ Z` and `Σ α_i ∈ Z`, in
/// lexicographic order.
pub fn exponent_set(degrees: &[u32], q: u64) -> Vec<ExponentVector> {
    exponent_set_for_orders(
        &degrees
            .iter()
            .map(|&n| gcd(n as u64, q - 1) as u32)
            .collect::<Vec<_>>(),
    )
}

/// Same enumeration with the per-coordinate orders `d_i` given directly.
pub fn exponent_set_for_orders(orders: &[u32]) -> Vec<ExponentVector> {
    if orders.iter().any(|&d| d < 2) {
        return Vec::new();
    }
    let big = orders.iter().fold(1u64, |l, &d| lcm(l, d as u64)) as u32;
    let mut out = Vec::new();
    let mut cur = vec![0u32; orders.len()];
    fn rec(i: usize, orders: &[u32], big: u32, cur: &mut Vec<u32>, acc: u64, out: &mut Vec<ExponentVector>) {
        if i == orders.len() {
            if acc % big as u64 == 0 {
                out.push(ExponentVector::from_parts(big, cur.clone()).expect("entries in range"));
            }
            return;
        }
        let step = big / orders[i];
        for j in 1..orders[i] {
            cur[i] = j * step;
            rec(i + 1, orders, big, cur, acc + (j * step) as u64, out);
        }
    }
    rec(0, orders, big, &mut cur, 0, &mut out);
    out
}

fn check_orders(alpha: &ExponentVector, field: &FiniteField) -> Result<()> {
    let n = field.q() - 1;
    if n % alpha.den() != 0 {
        return Err(Error::CharacterOrder {
            den: alpha.den(),
            q_minus_one: n as u64,
        });
    }
    Ok(())
}

/// Exponent table `u ↦ e` with `χ_{num/den}(u) = ζ_den^e` (`None` at 0).
fn exponent_table(field: &FiniteField, num: u64, den: u32) -> Vec<Option<u32>> {
    let d = den as u64;
    field
        .elements()
        .map(|u| field.dlog(u).map(|m| ((num % d) * (m as u64 % d) % d) as u32))
        .collect()
}

fn finish(counts: &[u128], den: u32, field: &FiniteField) -> Result<CycInt> {
    let total = CycInt::from_root_counts(den, counts);
    let n = BigInt::from(field.q() - 1);
    total.div_exact(&n).ok_or_else(|| {
        Error::InexactDivision(format!("Jacobi sum total {total} not divisible by {n}"))
    })
}

/// Literal enumeration of `(u_0, …, u_s)` with `Σ u_i = 0`. Intended for
/// small `q^s` (oracle role).
pub fn jacobi_sum_direct(alpha: &ExponentVector, field: &FiniteField) -> Result<CycInt> {
    jacobi_sum_direct_with_budget(alpha, field, DEFAULT_BRUTE_BUDGET)
}

pub fn jacobi_sum_direct_with_budget(
    alpha: &ExponentVector,
    field: &FiniteField,
    budget: u128,
) -> Result<CycInt> {
    check_orders(alpha, field)?;
    let den = alpha.den();
    let s = alpha.len() - 1;
    let q = field.q();
    let needed = (q as u128).saturating_pow(s as u32);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let tables: Vec<Vec<Option<u32>>> = alpha
        .numerators()
        .iter()
        .map(|&n| exponent_table(field, n as u64, den))
        .collect();
    let mut counts = vec![0u128; den as usize];
    // odometer over u_0..u_{s-1} in F_q^*
    let mut u = vec![1u32; s];
    if s == 0 {
        return finish(&counts, den, field);
    }
    loop {
        let mut sum = 0u32;
        let mut e = 0u32;
        for (i, &x) in u.iter().enumerate() {
            sum = field.add(sum, x);
            e += tables[i][x as usize].expect("nonzero");
        }
        let last = field.neg(sum);
        if let Some(el) = tables[s][last as usize] {
            counts[((e + el) % den) as usize] += 1;
        }
        let mut k = 0;
        loop {
            if k == s {
                return finish(&counts, den, field);
            }
            u[k] += 1;
            if u[k] < q {
                break;
            }
            u[k] = 1;
            k += 1;
        }
    }
}

/// An ordering of the entries in which no proper partial sum
/// `α_0 + … + α_i` (`i ≤ s-2`) is integral, if one exists.
fn chain_order(alpha: &ExponentVector) -> Option<Vec<u32>> {
    let den = alpha.den();
    let target = alpha.len();
    fn dfs(remaining: &mut Vec<u32>, chosen: &mut Vec<u32>, acc: u32, den: u32, target: usize) -> bool {
        if chosen.len() == target {
            return true;
        }
        let mut tried: Vec<u32> = Vec::new();
        for idx in 0..remaining.len() {
            let v = remaining[idx];
            if tried.contains(&v) {
                continue;
            }
            tried.push(v);
            let next = (acc + v) % den;
            // P_0..P_{s-2} must be non-integral; P_{s-1} and P_s are unconstrained.
            let position = chosen.len();
            if position + 2 < target && next == 0 {
                continue;
            }
            remaining.swap_remove(idx);
            chosen.push(v);
            if dfs(remaining, chosen, next, den, target) {
                return true;
            }
            chosen.pop();
            remaining.push(v);
            let last = remaining.len() - 1;
            remaining.swap(idx, last);
        }
        false
    }
    let mut remaining = alpha.numerators().to_vec();
    remaining.sort_unstable();
    let mut chosen = Vec::with_capacity(target);
    dfs(&mut remaining, &mut chosen, 0, den, target).then_some(chosen)
}

/// `J(χ_a, χ_b) = Σ_u χ_a(u) χ_b(1-u)` as counts of root exponents.
fn two_character_sum(field: &FiniteField, ta: &[Option<u32>], tb: &[Option<u32>], den: u32) -> CycInt {
    let mut counts = vec![0u64; den as usize];
    // element codes 0 and 1 are the field's 0 and 1, where one factor vanishes
    for u in 2..field.q() {
        let v = field.sub(1, u);
        if let (Some(a), Some(b)) = (ta[u as usize], tb[v as usize]) {
            counts[((a + b) % den) as usize] += 1;
        }
    }
    CycInt::from_root_counts(den, &counts)
}

fn jacobi_chained(order: &[u32], den: u32, field: &FiniteField) -> CycInt {
    let s = order.len() - 1;
    let minus_one = field.neg(1);
    let last = exponent_table(field, order[s] as u64, den);
    let sign = CycInt::root(den, last[minus_one as usize].expect("-1 ≠ 0") as i64);
    let mut acc = sign;
    let mut partial = order[0];
    for &entry in &order[1..s] {
        let ta = exponent_table(field, partial as u64, den);
        let tb = exponent_table(field, entry as u64, den);
        acc = &acc * &two_character_sum(field, &ta, &tb, den);
        partial = (partial + entry) % den;
    }
    acc
}

fn jacobi_convolution(alpha: &ExponentVector, field: &FiniteField) -> Result<CycInt> {
    let den = alpha.den() as usize;
    let q = field.q() as usize;
    let tables: Vec<Vec<Option<u32>>> = alpha
        .numerators()
        .iter()
        .map(|&n| exponent_table(field, n as u64, alpha.den()))
        .collect();
    let s = tables.len() - 1;
    // acc[x * den + j] = #{partial tuples with sum x and total exponent j}
    let mut acc = vec![0u128; q * den];
    for (u, e) in tables[0].iter().enumerate() {
        if let Some(e) = e {
            acc[u * den + *e as usize] += 1;
        }
    }
    for table in &tables[1..s] {
        let mut next = vec![0u128; q * den];
        for x in 0..q {
            let row = &acc[x * den..(x + 1) * den];
            if row.iter().all(|&c| c == 0) {
                continue;
            }
            for y in 1..q {
                let e = table[y].expect("nonzero") as usize;
                let w = field.add(x as u32, y as u32) as usize;
                let out = &mut next[w * den..(w + 1) * den];
                for (j, &c) in row.iter().enumerate() {
                    if c != 0 {
                        out[(j + e) % den] += c;
                    }
                }
            }
        }
        acc = next;
    }
    let mut counts = vec![0u128; den];
    for x in 1..q {
        let y = field.neg(x as u32) as usize;
        let e = tables[s][y].expect("nonzero") as usize;
        for j in 0..den {
            counts[(j + e) % den] += acc[x * den + j];
        }
    }
    finish(&counts, alpha.den(), field)
}

/// Fast exact Jacobi sum. Uses chained two-character sums (O(s·q)) when an
/// entry ordering avoids integral partial sums, otherwise iterated additive
/// convolution of character tables (O(s·q²)).
pub fn jacobi_sum_fast(alpha: &ExponentVector, field: &FiniteField) -> Result<CycInt> {
    check_orders(alpha, field)?;
    if !alpha.sum_is_integral() {
        // the sum is invariant under u ↦ cu, which scales it by χ_{Σα}(c) ≠ 1
        return Ok(CycInt::zero(alpha.den()));
    }
    match chain_order(alpha) {
        Some(order) => Ok(jacobi_chained(&order, alpha.den(), field)),
        None => jacobi_convolution(alpha, field),
    }
}

/// Convolution path only (exposed for testing the fast path's fallback).
pub fn jacobi_sum_convolution(alpha: &ExponentVector, field: &FiniteField) -> Result<CycInt> {
    check_orders(alpha, field)?;
    jacobi_convolution(alpha, field)
}

/// Whether the chained two-character path applies to `alpha`.
pub fn chaining_applies(alpha: &ExponentVector) -> bool {
    alpha.sum_is_integral() && chain_order(alpha).is_some()
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Debug)]
struct CacheKey {
    q: u32,
    generator: u32,
    alpha: ExponentVector,
}

/// Thread-safe memo of Jacobi sums keyed by `(q, α, generator)`.
#[derive(Default)]
pub struct JacobiCache {
    map: RwLock<HashMap<CacheKey, CycInt>>,
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    key: CacheKey,
    value: CycInt,
}

impl JacobiCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn jacobi(&self, alpha: &ExponentVector, field: &FiniteField) -> Result<CycInt> {
        let key = CacheKey {
            q: field.q(),
            generator: field.generator(),
            alpha: alpha.clone(),
        };
        if let Some(v) = self.map.read().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = jacobi_sum_fast(alpha, field)?;
        self.map.write().unwrap().entry(key).or_insert_with(|| v.clone());
        Ok(v)
    }

    /// Serializes entries in key order.
    pub fn to_json(&self) -> String {
        let map = self.map.read().unwrap();
        let mut entries: Vec<CacheEntry> = map
            .iter()
            .map(|(k, v)| CacheEntry {
                key: k.clone(),
                value: v.clone(),
            })
            .collect();
        entries.sort_by(|a, b| a.key.cmp(&b.key));
        serde_json::to_string(&entries).expect("cache entries serialize")
    }

    pub fn load_json(&self, text: &str) -> Result<usize> {
        let entries: Vec<CacheEntry> =
            serde_json::from_str(text).map_err(|e| Error::Io(format!("cache file: {e}")))?;
        let n = entries.len();
        let mut map = self.map.write().unwrap();
        for e in entries {
            map.insert(e.key, e.value);
        }
        Ok(n)
    }
}

/// `Π_i χ̄_{α_i}(b_i)` as a root exponent modulo `den`.
fn coefficient_twist(
    alpha: &ExponentVector,
    coefficients: &[i64],
    field: &FiniteField,
) -> Result<u32> {
    let den = alpha.den() as u64;
    let mut e = 0u64;
    for (&n, &b) in alpha.numerators().iter().zip(coefficients) {
        if b == 1 {
            continue;
        }
        let m = field.dlog(field.from_integer(b)).ok_or_else(|| Error::BadPrime {
            p: field.p() as u64,
            what: format!("coefficient {b}"),
        })?;
        e += (n as u64 % den) * (m as u64 % den) % den;
    }
    Ok(((den - e % den) % den) as u32)
}

/// `Σ_{α∈A} j_q(α) Π χ̄_{α_i}(b_i)` as a rational integer.
pub fn character_sum_total(
    variety: &VarietyDescriptor,
    field: &FiniteField,
    cache: &JacobiCache,
) -> Result<BigInt> {
    let set = exponent_set(variety.exponents(), field.q() as u64);
    let order = set.iter().fold(1u64, |l, a| lcm(l, a.den() as u64)) as u32;
    let mut total = CycInt::zero(order);
    for alpha in &set {
        let j = cache.jacobi(alpha, field)?;
        let tw = coefficient_twist(alpha, variety.coefficients(), field)?;
        let term = &j * &CycInt::root(alpha.den(), tw as i64);
        total = &total + &term.lift(order)?;
    }
    total.as_integer().ok_or_else(|| {
        Error::InexactDivision(format!("character-sum total {total} is not a rational integer"))
    })
}

/// Point count from Jacobi sums.
pub fn point_count(variety: &VarietyDescriptor, field: &FiniteField) -> Result<BigInt> {
    point_count_cached(variety, field, &JacobiCache::new())
}

pub fn point_count_cached(
    variety: &VarietyDescriptor,
    field: &FiniteField,
    cache: &JacobiCache,
) -> Result<BigInt> {
    if variety.coefficients().iter().any(|&b| field.from_integer(b) == 0) {
        return Err(Error::BadPrime {
            p: field.p() as u64,
            what: format!("coefficients of {}", variety.name()),
        });
    }
    let q = BigInt::from(field.q());
    let mut ambient = BigInt::zero();
    let mut power = BigInt::one();
    for _ in 0..variety.s() {
        ambient += &power;
        power *= &q;
    }
    Ok(ambient + character_sum_total(variety, field, cache)?)
}

/// Literal weighted-projective count: affine solutions of
/// `Σ b_i z_i^{n_i} = 0` over `F_q^{s+1}` minus the origin, divided by
/// `q - 1`. Equal summands are grouped by multiplicity, which does not change
/// the enumeration order of magnitude `q^s` checked against `budget`.
pub fn point_count_brute(
    variety: &VarietyDescriptor,
    field: &FiniteField,
    budget: u128,
) -> Result<BigInt> {
    let s = variety.s();
    let q = field.q();
    let needed = (q as u128).saturating_pow(s as u32);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    // histogram per coordinate: value v ↦ #{z : b z^n = v}
    let hist: Vec<Vec<u64>> = variety
        .exponents()
        .iter()
        .zip(variety.coefficients())
        .map(|(&n, &b)| {
            let b = field.from_integer(b);
            let mut h = vec![0u64; q as usize];
            for z in field.elements() {
                h[field.mul(b, field.pow(z, n as u64)) as usize] += 1;
            }
            h
        })
        .collect();
    let support: Vec<Vec<(u32, u64)>> = hist
        .iter()
        .map(|h| {
            h.iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(v, &c)| (v as u32, c))
                .collect()
        })
        .collect();
    // minus_last[w] = #{z_s : b_s z_s^{n_s} = -w}
    let minus_last: Vec<u64> = field
        .elements()
        .map(|w| hist[s][field.neg(w) as usize])
        .collect();
    let prime_field = field.degree() == 1;
    // Σ_v h[v]·minus_last[partial + v]
    let pair = |partial: u32, h: &[u64]| -> u128 {
        if prime_field {
            let cut = (q - partial) as usize;
            let head: u64 = h[..cut]
                .iter()
                .zip(&minus_last[partial as usize..])
                .map(|(a, b)| a * b)
                .sum();
            let tail: u64 = h[cut..].iter().zip(&minus_last).map(|(a, b)| a * b).sum();
            head as u128 + tail as u128
        } else {
            h.iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(v, &c)| (c * minus_last[field.add(partial, v as u32) as usize]) as u128)
                .sum()
        }
    };
    fn rec(
        i: usize,
        partial: u32,
        weight: u128,
        support: &[Vec<(u32, u64)>],
        finish: &dyn Fn(u32) -> u128,
        field: &FiniteField,
    ) -> u128 {
        if i == support.len() {
            return weight * finish(partial);
        }
        let mut total = 0u128;
        for &(v, c) in &support[i] {
            total += rec(i + 1, field.add(partial, v), weight * c as u128, support, finish, field);
        }
        total
    }
    let affine = if s == 0 {
        hist[0][0] as u128
    } else {
        let finish = |partial: u32| pair(partial, &hist[s - 1]);
        rec(0, 0, 1, &support[..s - 1], &finish, field)
    };
    let projective = affine - 1;
    if projective % (q as u128 - 1) != 0 {
        return Err(Error::InexactDivision(format!(
            "affine count {affine} does not give a whole number of orbits"
        )));
    }
    Ok(BigInt::from(projective / (q as u128 - 1)))
}

/// `| |J|² - q^{s-1} | < 1e-6 · q^{s-1}` where `s + 1` is the length of `alpha`.
pub fn weil_magnitude_check(alpha: &ExponentVector, field: &FiniteField, j: &CycInt) -> bool {
    let expected = (field.q() as f64).powi(alpha.len() as i32 - 2);
    ((j.embed().norm_sqr() - expected).abs()) < 1e-6 * expected
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::prime_power;

    fn ev(den: u32, num: &[u32]) -> ExponentVector {
        ExponentVector::from_parts(den, num.to_vec()).unwrap()
    }

    #[test]
    fn exponent_vectors_normalize() {
        let a = ev(6, &[2, 2, 2]);
        assert_eq!(a.den(), 3);
        assert_eq!(a.numerators(), &[1, 1, 1]);
        assert_eq!(a.dual(), ev(3, &[2, 2, 2]));
        assert_eq!(a.scaled(2).unwrap(), a.dual());
        assert!(a.scaled(3).is_err());
        assert!(ExponentVector::from_parts(3, vec![0, 1]).is_err());
        assert!(ExponentVector::from_parts(3, vec![3, 1]).is_err());
        assert_eq!(
            ExponentVector::new(&[Ratio::new(1, 4), Ratio::new(1, 2)]).unwrap(),
            ev(4, &[1, 2])
        );
    }

    #[test]
    fn exponent_set_examples() {
        let set = exponent_set(&[3, 3, 3], 7);
        assert_eq!(set, vec![ev(3, &[1, 1, 1]), ev(3, &[2, 2, 2])]);
        assert_eq!(exponent_set(&[3; 9], 7).len(), 170);
        assert!(exponent_set(&[3, 3, 3], 5).is_empty());
        let e4 = exponent_set(&[4, 4, 2], 5);
        assert_eq!(e4, vec![ev(4, &[1, 1, 2]), ev(4, &[3, 3, 2])]);
    }

    #[test]
    fn direct_examples() {
        let f7 = FiniteField::new(7, 1).unwrap();
        let j = jacobi_sum_direct(&ev(3, &[1, 1, 1]), &f7).unwrap();
        assert_eq!((&j + &j.complex_conjugate()).as_integer(), Some(BigInt::from(1)));
        assert_eq!(j.norm_squared_exact(), Some(BigInt::from(7)));

        let f3 = FiniteField::new(3, 1).unwrap();
        let j = jacobi_sum_direct(&ev(2, &[1, 1, 1, 1]), &f3).unwrap();
        assert!((j.embed().norm_sqr() - 9.0).abs() < 1e-9);

        // two entries: the sum collapses along u_1 = -u_0 to χ_{2/3}(-1)
        let j = jacobi_sum_direct(&ev(3, &[1, 2]), &f7).unwrap();
        let chi = crate::ffield::MultChar::new(&f7, Ratio::new(2, 3)).unwrap();
        assert_eq!(j, chi.eval(f7.neg(1)));
        assert_eq!(j, CycInt::one(3));
    }

    #[test]
    fn direct_rejects_bad_orders_and_budget() {
        let f5 = FiniteField::new(5, 1).unwrap();
        assert!(matches!(
            jacobi_sum_direct(&ev(3, &[1, 1, 1]), &f5),
            Err(Error::CharacterOrder { .. })
        ));
        let f7 = FiniteField::new(7, 1).unwrap();
        assert!(matches!(
            jacobi_sum_direct_with_budget(&ev(3, &[1; 9]), &f7, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn chaining_and_fallback() {
        assert!(chaining_applies(&ev(3, &[1, 1, 1])));
        assert!(chaining_applies(&ev(6, &[1, 1, 1, 3])));
        // every three entries of (1/3,…,1/3) sum to an integer
        assert!(!chaining_applies(&ev(3, &[1; 9])));
        // reordering rescues (1/3, 2/3, 1/3, 2/3)
        assert!(chaining_applies(&ev(3, &[1, 2, 1, 2])));
        assert!(!chaining_applies(&ev(3, &[1, 1])));
    }

    #[test]
    fn fast_matches_direct_small() {
        for q in [4u64, 7, 9, 13, 16, 25] {
            let (p, f) = prime_power(q).unwrap();
            let field = FiniteField::new(p, f).unwrap();
            for n in [vec![3, 3, 3], vec![3, 3, 3, 3], vec![4, 4, 2], vec![6, 6, 6, 2], vec![3, 3]] {
                for alpha in exponent_set(&n, q) {
                    let d = jacobi_sum_direct(&alpha, &field).unwrap();
                    assert_eq!(jacobi_sum_fast(&alpha, &field).unwrap(), d, "q={q} α={alpha}");
                    assert_eq!(jacobi_sum_convolution(&alpha, &field).unwrap(), d);
                }
            }
        }
    }

    #[test]
    fn galois_action_on_jacobi_sums() {
        let f13 = FiniteField::new(13, 1).unwrap();
        for alpha in exponent_set(&[6, 6, 6, 2], 13) {
            let j = jacobi_sum_fast(&alpha, &f13).unwrap();
            for t in [5u64, 7, 11] {
                if gcd(t, alpha.den() as u64) != 1 {
                    continue;
                }
                let lhs = jacobi_sum_fast(&alpha.scaled(t).unwrap(), &f13).unwrap();
                assert_eq!(lhs, j.conjugate(t as i64).unwrap());
            }
        }
    }

    #[test]
    fn cache_round_trip() {
        let cache = JacobiCache::new();
        let f7 = FiniteField::new(7, 1).unwrap();
        let a = ev(3, &[1, 1, 1]);
        let j = cache.jacobi(&a, &f7).unwrap();
        assert_eq!(cache.len(), 1);
        assert_eq!(cache.jacobi(&a, &f7).unwrap(), j);
        let text = cache.to_json();
        let other = JacobiCache::new();
        assert_eq!(other.load_json(&text).unwrap(), 1);
        assert_eq!(other.jacobi(&a, &f7).unwrap(), j);
    }

    #[test]
    fn weil_examples() {
        let f7 = FiniteField::new(7, 1).unwrap();
        let a = ev(3, &[1, 1, 1]);
        let j = jacobi_sum_fast(&a, &f7).unwrap();
        assert!(weil_magnitude_check(&a, &f7, &j));
        assert!(!weil_magnitude_check(&a, &f7, &CycInt::one(3)));
        let a9 = ev(3, &[1; 9]);
        let j9 = jacobi_sum_fast(&a9, &f7).unwrap();
        assert_eq!(j9.norm_squared_exact(), Some(BigInt::from(7u64.pow(7))));
        assert!(weil_magnitude_check(&a9, &f7, &j9));
        let a6 = ev(3, &[1; 6]);
        let j6 = jacobi_sum_fast(&a6, &f7).unwrap();
        assert_eq!(j6.norm_squared_exact(), Some(BigInt::from(7u64.pow(4))));
    }

    fn variety(weights: &[u32], exps: &[u32], d: u32, b: Option<Vec<i64>>) -> VarietyDescriptor {
        VarietyDescriptor::new("V", weights.to_vec(), exps.to_vec(), d, b).unwrap()
    }

    #[test]
    fn point_count_examples() {
        let e3 = variety(&[1, 1, 1], &[3, 3, 3], 3, None);
        let e4 = variety(&[1, 1, 2], &[4, 4, 2], 4, None);
        let f7 = FiniteField::new(7, 1).unwrap();
        let f5 = FiniteField::new(5, 1).unwrap();
        assert_eq!(point_count(&e3, &f7).unwrap(), BigInt::from(9));
        assert_eq!(point_count_brute(&e3, &f7, DEFAULT_BRUTE_BUDGET).unwrap(), BigInt::from(9));
        assert_eq!(point_count(&e3, &f5).unwrap(), BigInt::from(6));
        assert_eq!(point_count_brute(&e4, &f5, DEFAULT_BRUTE_BUDGET).unwrap(), BigInt::from(4));
        assert_eq!(point_count(&e4, &f5).unwrap(), BigInt::from(4));
        let x43 = variety(&[1; 6], &[3; 6], 3, None);
        assert_eq!(
            point_count(&x43, &f7).unwrap(),
            point_count_brute(&x43, &f7, DEFAULT_BRUTE_BUDGET).unwrap()
        );
        assert!(matches!(
            point_count_brute(&x43, &f7, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
        // odd exponents over F_2: every z^n is z, so the equation is linear
        let f2 = FiniteField::new(2, 1).unwrap();
        assert_eq!(point_count_brute(&e3, &f2, 100).unwrap(), BigInt::from(3));
        assert_eq!(point_count(&e3, &f2).unwrap(), BigInt::from(3));
    }

    #[test]
    fn point_count_with_coefficients_matches_brute() {
        let cases = [
            variety(&[1, 1, 1], &[3, 3, 3], 3, Some(vec![1, 2, 3])),
            variety(&[1, 1, 1], &[3, 3, 3], 3, Some(vec![2, -1, 5])),
            variety(&[1, 1, 2], &[4, 4, 2], 4, Some(vec![1, 3, -2])),
            variety(&[1, 1, 1, 3], &[6, 6, 6, 2], 6, Some(vec![1, 1, 1, -1])),
            variety(&[1, 1, 1, 1], &[4, 4, 4, 4], 4, Some(vec![1, 2, 3, 4])),
        ];
        for v in &cases {
            for q in [7u64, 9, 13, 25, 37] {
                let (p, f) = prime_power(q).unwrap();
                let field = FiniteField::new(p, f).unwrap();
                if v.coefficients().iter().any(|&b| field.from_integer(b) == 0) {
                    continue;
                }
                assert_eq!(
                    point_count(v, &field).unwrap(),
                    point_count_brute(v, &field, DEFAULT_BRUTE_BUDGET).unwrap(),
                    "{v} over F_{q}"
                );
            }
        }
    }

    #[test]
    fn generator_independence_of_orbit_sums() {
        let field = FiniteField::new(13, 1).unwrap();
        let others: Vec<FiniteField> = (2..13)
            .filter_map(|g| FiniteField::with_generator(13, 1, g).ok())
            .collect();
        assert_eq!(others.len(), 4);
        for alpha in exponent_set(&[6, 6, 6, 2], 13) {
            let den = alpha.den() as u64;
            let orbit: Vec<ExponentVector> = (1..den)
                .filter(|&t| gcd(t, den) == 1)
                .map(|t| alpha.scaled(t).unwrap())
                .collect();
            let sum = |f: &FiniteField| {
                orbit
                    .iter()
                    .map(|a| jacobi_sum_fast(a, f).unwrap())
                    .fold(CycInt::zero(alpha.den()), |acc, j| &acc + &j)
            };
            let base = sum(&field);
            for other in &others {
                assert_eq!(sum(other), base, "α={alpha} g={}", other.generator());
            }
        }
    }

    #[test]
    fn totals_are_integral_over_extension_fields() {
        let x43 = variety(&[1; 6], &[3; 6], 3, None);
        for (p, f) in [(2u64, 2u32), (5, 2), (2, 4), (11, 2)] {
            let field = FiniteField::new(p, f).unwrap();
            assert!(character_sum_total(&x43, &field, &JacobiCache::new()).is_ok());
        }
    }
}
