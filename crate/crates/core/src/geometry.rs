//! Diagonal hypersurfaces `Σ b_i z_i^{n_i} = 0` in weighted projective space
//! `P(k_0, …, k_s)`: charge, critical dimension, Hodge numbers of the
//! primitive middle cohomology, and the twist map on weight data.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::charsums::{exponent_set_for_orders, ExponentVector};
use crate::error::{Error, Result};
use crate::numtheory::gcd;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyDescriptor {
    name: String,
    weights: Vec<u32>,
    exponents: Vec<u32>,
    degree: u32,
    coefficients: Vec<i64>,
    charge: u32,
}

/// `Q = Σ k_i / d`.
pub fn derive_charge(weights: &[u32], degree: u32) -> Result<u32> {
    if degree == 0 {
        return Err(Error::InvalidVariety("degree must be positive".into()));
    }
    let total: u64 = weights.iter().map(|&k| k as u64).sum();
    if total % degree as u64 != 0 {
        return Err(Error::InvalidVariety(format!(
            "charge {total}/{degree} is not an integer"
        )));
    }
    Ok((total / degree as u64) as u32)
}

impl VarietyDescriptor {
    /// Validates `n_i k_i = d` and integrality of the charge. Coefficients
    /// default to all ones.
    pub fn new(
        name: impl Into<String>,
        weights: Vec<u32>,
        exponents: Vec<u32>,
        degree: u32,
        coefficients: Option<Vec<i64>>,
    ) -> Result<Self> {
        let name = name.into();
        if weights.len() < 2 {
            return Err(Error::InvalidVariety(format!(
                "{name}: need at least two coordinates"
            )));
        }
        if exponents.len() != weights.len() {
            return Err(Error::InvalidVariety(format!(
                "{name}: {} weights but {} exponents",
                weights.len(),
                exponents.len()
            )));
        }
        let coefficients = coefficients.unwrap_or_else(|| vec![1; weights.len()]);
        if coefficients.len() != weights.len() {
            return Err(Error::InvalidVariety(format!(
                "{name}: {} coefficients for {} coordinates",
                coefficients.len(),
                weights.len()
            )));
        }
        if coefficients.contains(&0) {
            return Err(Error::InvalidVariety(format!("{name}: zero coefficient")));
        }
        for (i, (&k, &n)) in weights.iter().zip(&exponents).enumerate() {
            if k == 0 || n == 0 {
                return Err(Error::InvalidVariety(format!(
                    "{name}: weights and exponents must be positive"
                )));
            }
            if k as u64 * n as u64 != degree as u64 {
                return Err(Error::InvalidVariety(format!(
                    "{name}: coordinate {i} has k·n = {k}·{n} ≠ {degree}"
                )));
            }
        }
        let charge = derive_charge(&weights, degree)?;
        if charge == 0 {
            return Err(Error::InvalidVariety(format!("{name}: zero charge")));
        }
        Ok(VarietyDescriptor {
            name,
            weights,
            exponents,
            degree,
            coefficients,
            charge,
        })
    }

    /// Fermat-type hypersurface of the given degree in `P^{s}` (all weights 1).
    pub fn fermat(name: impl Into<String>, degree: u32, coordinates: usize) -> Result<Self> {
        Self::new(name, vec![1; coordinates], vec![degree; coordinates], degree, None)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn charge(&self) -> u32 {
        self.charge
    }

    /// Index of the last coordinate: the ambient space has dimension `s`.
    pub fn s(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn dimension(&self) -> usize {
        self.s() - 1
    }

    /// The distinguished exponent vector `(k_0/d, …, k_s/d)`.
    pub fn alpha_omega(&self) -> Result<ExponentVector> {
        ExponentVector::from_parts(self.degree, self.weights.clone())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Reorders coordinates so that `index` comes first.
    pub fn move_to_front(&self, index: usize) -> Result<Self> {
        if index > self.s() {
            return Err(Error::InvalidVariety(format!(
                "{}: no coordinate {index}",
                self.name
            )));
        }
        let perm = |v: &[u32]| {
            let mut out = vec![v[index]];
            out.extend(v.iter().enumerate().filter(|(i, _)| *i != index).map(|(_, &x)| x));
            out
        };
        let mut coefficients = vec![self.coefficients[index]];
        coefficients.extend(
            self.coefficients
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != index)
                .map(|(_, &x)| x),
        );
        Self::new(
            self.name.clone(),
            perm(&self.weights),
            perm(&self.exponents),
            self.degree,
            Some(coefficients),
        )
    }
}

impl fmt::Display for VarietyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .exponents
            .iter()
            .zip(&self.coefficients)
            .enumerate()
            .map(|(i, (&n, &b))| match b {
                1 => format!("z{i}^{n}"),
                -1 => format!("-z{i}^{n}"),
                _ => format!("{b}*z{i}^{n}"),
            })
            .collect();
        let w: Vec<String> = self.weights.iter().map(|k| k.to_string()).collect();
        write!(
            f,
            "{}: {} = 0 in P({}), degree {}",
            self.name,
            terms.join(" + ").replace("+ -", "- "),
            w.join(","),
            self.degree
        )
    }
}

/// `(s-1) + 2(1-Q)`.
pub fn critical_dimension(variety: &VarietyDescriptor) -> Result<u32> {
    let value = variety.dimension() as i64 + 2 * (1 - variety.charge() as i64);
    if value < 0 {
        return Err(Error::InvalidVariety(format!(
            "{}: negative critical dimension {value}",
            variety.name()
        )));
    }
    Ok(value as u32)
}

/// Hodge numbers `h^{p,q}` keyed by `(p, q)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HodgeTable(pub BTreeMap<(u32, u32), u64>);

impl HodgeTable {
    pub fn get(&self, p: u32, q: u32) -> u64 {
        self.0.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.0.iter().all(|(&(p, q), &h)| self.get(q, p) == h)
    }

    /// Entries in decreasing `p`.
    pub fn entries(&self) -> Vec<((u32, u32), u64)> {
        self.0.iter().rev().map(|(&k, &v)| (k, v)).collect()
    }
}

/// Primitive middle cohomology: each `α` in the full exponent set (orders
/// `n_i`) contributes to `h^{(s-1)-r, r}` with `r = Σα_i - 1`.
pub fn hodge_numbers(variety: &VarietyDescriptor) -> HodgeTable {
    let dim = variety.dimension() as u32;
    let mut table = BTreeMap::new();
    for alpha in exponent_set_for_orders(variety.exponents()) {
        let r = alpha.integral_sum().expect("exponent set sums are integral") - 1;
        *table.entry((dim - r, r)).or_insert(0) += 1;
    }
    HodgeTable(table)
}

/// Middle cohomology including the hyperplane class in even dimension.
pub fn full_middle_hodge_numbers(variety: &VarietyDescriptor) -> HodgeTable {
    let mut table = hodge_numbers(variety);
    let dim = variety.dimension() as u32;
    if dim % 2 == 0 {
        *table.0.entry((dim / 2, dim / 2)).or_insert(0) += 1;
    }
    table
}

fn content(values: &[u32]) -> u32 {
    values.iter().fold(0u64, |g, &v| gcd(g, v as u64)) as u32
}

/// Divides weights and degree by their common content.
pub fn normalize(variety: &VarietyDescriptor) -> Result<VarietyDescriptor> {
    let mut all = variety.weights().to_vec();
    all.push(variety.degree());
    let g = content(&all);
    VarietyDescriptor::new(
        variety.name(),
        variety.weights().iter().map(|k| k / g).collect(),
        variety.exponents().to_vec(),
        variety.degree() / g,
        Some(variety.coefficients().to_vec()),
    )
}

/// Quotient by `z_i ↦ ζ_e z_i` for `e` dividing every exponent: the
/// coordinates `z_i^e` have weights `e·k_i` and exponents `n_i / e`.
pub fn power_quotient(variety: &VarietyDescriptor, e: u32) -> Result<VarietyDescriptor> {
    if e == 0 || variety.exponents().iter().any(|n| n % e != 0) {
        return Err(Error::InvalidVariety(format!(
            "{}: {e} does not divide every exponent",
            variety.name()
        )));
    }
    normalize(&VarietyDescriptor::new(
        variety.name(),
        variety.weights().iter().map(|k| k * e).collect(),
        variety.exponents().iter().map(|n| n / e).collect(),
        variety.degree(),
        Some(variety.coefficients().to_vec()),
    )?)
}

/// Combines `x_0^ℓ + p(x) = 0` in `P(w_0, …, w_m)` and `y_0^ℓ + q(y) = 0` in
/// `P(v_0, …, v_n)` into `c_y p(x) - c_x q(y) = 0` in
/// `P(v_0 w_1, …, v_0 w_m, w_0 v_1, …, w_0 v_n)` of degree `v_0 w_0 ℓ`, then
/// normalizes and passes to the quotient by `μ_ℓ` when `ℓ` divides every
/// exponent. Coordinate 0 of each input is the distinguished one.
pub fn twist_map(x1: &VarietyDescriptor, x2: &VarietyDescriptor) -> Result<VarietyDescriptor> {
    let raw = normalize(&twist_map_raw(x1, x2)?)?;
    let l = x1.exponents()[0];
    if raw.exponents().iter().all(|n| n % l == 0) {
        power_quotient(&raw, l)
    } else {
        Ok(raw)
    }
}

/// The twist-map target before normalization.
pub fn twist_map_raw(x1: &VarietyDescriptor, x2: &VarietyDescriptor) -> Result<VarietyDescriptor> {
    let l1 = x1.exponents()[0];
    let l2 = x2.exponents()[0];
    if l1 != l2 {
        return Err(Error::InvalidVariety(format!(
            "twist map needs equal distinguished exponents, got {l1} and {l2}"
        )));
    }
    if l1 < 2 {
        return Err(Error::InvalidVariety(format!(
            "twist map with ℓ = {l1} has a linear target"
        )));
    }
    let (w0, v0) = (x1.weights()[0], x2.weights()[0]);
    let (c1, c2) = (x1.coefficients()[0], x2.coefficients()[0]);
    let mut weights: Vec<u32> = x1.weights()[1..].iter().map(|&w| v0 * w).collect();
    weights.extend(x2.weights()[1..].iter().map(|&v| w0 * v));
    let mut exponents = x1.exponents()[1..].to_vec();
    exponents.extend_from_slice(&x2.exponents()[1..]);
    let mut coefficients: Vec<i64> = x1.coefficients()[1..].iter().map(|&b| c2 * b).collect();
    coefficients.extend(x2.coefficients()[1..].iter().map(|&b| -c1 * b));
    let g = coefficients
        .iter()
        .fold(0u64, |g, &b| gcd(g, b.unsigned_abs())) as i64;
    let sign = coefficients[0].signum();
    coefficients.iter_mut().for_each(|b| *b = sign * *b / g);
    VarietyDescriptor::new(
        format!("{}x{}", x1.name(), x2.name()),
        weights,
        exponents,
        v0 * w0 * l1,
        Some(coefficients),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x73() -> VarietyDescriptor {
        VarietyDescriptor::fermat("X73", 3, 9).unwrap()
    }

    fn x54() -> VarietyDescriptor {
        let mut w = vec![1; 6];
        w.push(2);
        let mut n = vec![4; 6];
        n.push(2);
        VarietyDescriptor::new("X54", w, n, 4, None).unwrap()
    }

    fn x43() -> VarietyDescriptor {
        VarietyDescriptor::fermat("X43", 3, 6).unwrap()
    }

    fn sextic(name: &str, sign: i64) -> VarietyDescriptor {
        VarietyDescriptor::new(name, vec![1, 1, 1, 3], vec![6, 6, 6, 2], 6, Some(vec![1, 1, 1, sign]))
            .unwrap()
    }

    #[test]
    fn charges() {
        assert_eq!(derive_charge(&[1; 9], 3).unwrap(), 3);
        assert_eq!(derive_charge(&[1, 1, 1, 1, 1, 1, 2], 4).unwrap(), 2);
        assert_eq!(derive_charge(&[1, 1, 1], 3).unwrap(), 1);
        assert!(derive_charge(&[1, 1, 1, 1], 3).is_err());
    }

    #[test]
    fn critical_dimensions() {
        assert_eq!(critical_dimension(&x73()).unwrap(), 3);
        assert_eq!(critical_dimension(&x54()).unwrap(), 3);
        assert_eq!(critical_dimension(&x43()).unwrap(), 2);
        let e3 = VarietyDescriptor::fermat("E3", 3, 3).unwrap();
        assert_eq!(critical_dimension(&e3).unwrap(), 1);
        let linear = VarietyDescriptor::fermat("P", 1, 3).unwrap();
        assert!(critical_dimension(&linear).is_err());
    }

    #[test]
    fn descriptor_validation() {
        assert!(VarietyDescriptor::new("bad", vec![1, 1, 2], vec![4, 4, 4], 4, None).is_err());
        assert!(VarietyDescriptor::new("bad", vec![1, 1], vec![3], 3, None).is_err());
        assert!(VarietyDescriptor::new("bad", vec![1, 1, 1], vec![3, 3, 3], 3, Some(vec![1, 0, 1])).is_err());
        let s6 = sextic("S6", 1);
        assert_eq!(s6.charge(), 1);
        assert_eq!(s6.alpha_omega().unwrap().numerators(), &[1, 1, 1, 3]);
    }

    #[test]
    fn hodge_tables() {
        let h = hodge_numbers(&x73());
        assert_eq!(h.get(5, 2), 1);
        assert_eq!(h.get(4, 3), 84);
        assert_eq!(h.get(3, 4), 84);
        assert_eq!(h.get(2, 5), 1);
        assert_eq!(h.total(), 170);

        let h = hodge_numbers(&x54());
        assert_eq!(h.get(4, 1), 1);
        assert_eq!(h.get(3, 2), 90);
        assert_eq!(h.get(5, 0), 0);

        let h = hodge_numbers(&x43());
        assert_eq!((h.get(3, 1), h.get(2, 2), h.get(1, 3)), (1, 20, 1));
        assert_eq!(h.total(), 22);
        assert_eq!(full_middle_hodge_numbers(&x43()).get(2, 2), 21);

        let k3 = hodge_numbers(&sextic("S6", 1));
        assert_eq!((k3.get(2, 0), k3.get(1, 1), k3.get(0, 2)), (1, 19, 1));
        for v in [x73(), x54(), x43()] {
            assert!(hodge_numbers(&v).is_symmetric());
        }
    }

    #[test]
    fn twist_map_sextic_pair() {
        let plus = sextic("S6+", 1).move_to_front(3).unwrap();
        let minus = sextic("S6-", -1).move_to_front(3).unwrap();
        assert_eq!(plus.weights()[0] * plus.exponents()[0], 6);
        let raw = twist_map_raw(&plus, &minus).unwrap();
        assert_eq!(raw.weights(), &[3; 6]);
        assert_eq!(raw.degree(), 18);
        let reduced = normalize(&raw).unwrap();
        assert_eq!((reduced.weights(), reduced.degree()), (&[1u32; 6][..], 6));
        let target = twist_map(&plus, &minus).unwrap();
        assert_eq!(target.weights(), &[1; 6]);
        assert_eq!(target.exponents(), &[3; 6]);
        assert_eq!(target.degree(), 3);
        assert_eq!(target.coefficients(), &[1; 6]);
        assert_eq!(target.charge(), 2);
        assert_eq!(critical_dimension(&target).unwrap(), 2);
    }

    #[test]
    fn twist_map_guards() {
        let e3 = VarietyDescriptor::fermat("E3", 3, 3).unwrap();
        let linear = VarietyDescriptor::new("L", vec![3, 1, 1, 1], vec![1, 3, 3, 3], 3, None).unwrap();
        assert!(twist_map(&linear, &linear).is_err());
        let plus = sextic("S6+", 1).move_to_front(3).unwrap();
        assert!(twist_map(&plus, &e3).is_err());
    }
}
