//! Exact arithmetic in the cyclotomic integer rings `Z[ζ_D]`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(D)-1}` reduced
//! modulo the cyclotomic polynomial `Φ_D`. The power basis is an integral
//! basis, so the reduced coefficient vector is canonical and equality of
//! values is equality of vectors.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::gcd;

/// Per-order reduction data: `Φ_D` and the reduced images of `ζ^j`, `0 ≤ j < D`.
#[derive(Debug)]
struct Tables {
    phi: usize,
    powers: Vec<Vec<i64>>,
}

fn poly_divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic.
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                rem[k + i] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

/// Coefficients (constant term first) of `Φ_n`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for e in 1..n {
        if n % e == 0 {
            poly = poly_divide_exact(&poly, &cyclotomic_polynomial(e));
        }
    }
    poly
}

fn tables(order: u32) -> Arc<Tables> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Tables>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(t) = cache.read().unwrap().get(&order) {
        return t.clone();
    }
    let phi_poly = cyclotomic_polynomial(order);
    let phi = phi_poly.len() - 1;
    let mut powers = Vec::with_capacity(order as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..order {
        powers.push(cur.clone());
        // multiply by x and reduce the x^phi term.
        let top = cur[phi - 1];
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..phi {
                cur[i] -= top * phi_poly[i];
            }
        }
    }
    let t = Arc::new(Tables { phi, powers });
    cache.write().unwrap().insert(order, t.clone());
    t
}

/// An element of `Z[ζ_D]`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycInt {
    order: u32,
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt[{}]({})", self.order, self)
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if j == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{j}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl CycInt {
    pub fn zero(order: u32) -> Self {
        assert!(order >= 1, "root-of-unity order must be positive");
        let phi = tables(order).phi;
        CycInt {
            order,
            coeffs: vec![BigInt::zero(); phi],
        }
    }

    pub fn from_integer(order: u32, n: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = n.into();
        z
    }

    pub fn one(order: u32) -> Self {
        Self::from_integer(order, 1)
    }

    /// `ζ_order^exponent`.
    pub fn root(order: u32, exponent: i64) -> Self {
        assert!(order >= 1, "root-of-unity order must be positive");
        let t = tables(order);
        let k = exponent.rem_euclid(order as i64) as usize;
        CycInt {
            order,
            coeffs: t.powers[k].iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    /// Builds `Σ_j counts[j] ζ^j` over `j = 0..order`.
    pub fn from_root_counts<T: Copy + Into<BigInt>>(order: u32, counts: &[T]) -> Self {
        assert_eq!(counts.len(), order as usize);
        let t = tables(order);
        let mut coeffs = vec![BigInt::zero(); t.phi];
        for (j, &c) in counts.iter().enumerate() {
            let c: BigInt = c.into();
            if c.is_zero() {
                continue;
            }
            for (slot, &b) in coeffs.iter_mut().zip(&t.powers[j]) {
                if b != 0 {
                    *slot += &c * b;
                }
            }
        }
        CycInt { order, coeffs }
    }

    /// Builds an element from power-basis coefficients, reducing if the vector
    /// is longer than `φ(order)`.
    pub fn from_coeffs(order: u32, coeffs: Vec<BigInt>) -> Self {
        let t = tables(order);
        if coeffs.len() == t.phi {
            return CycInt { order, coeffs };
        }
        let mut out = vec![BigInt::zero(); t.phi];
        for (j, c) in coeffs.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, &b) in out.iter_mut().zip(&t.powers[j % order as usize]) {
                if b != 0 {
                    *slot += &c * b;
                }
            }
        }
        CycInt { order, coeffs: out }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(CycInt {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(CycInt {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let phi = self.coeffs.len();
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_coeffs(self.order, prod))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CycInt {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Exact division by a rational integer; `None` if some coefficient is
    /// not divisible.
    pub fn div_exact(&self, k: &BigInt) -> Option<Self> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        Some(CycInt {
            order: self.order,
            coeffs,
        })
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Galois automorphism `ζ ↦ ζ^t`.
    pub fn conjugate(&self, t: i64) -> Result<Self> {
        let d = self.order as i64;
        if gcd(t.rem_euclid(d) as u64, d as u64) != 1 {
            return Err(Error::NotCoprime {
                t,
                order: self.order,
            });
        }
        let mut relabeled = vec![BigInt::zero(); self.order as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            relabeled[(j as i64 * t).rem_euclid(d) as usize] = c.clone();
        }
        Ok(Self::from_coeffs(self.order, relabeled))
    }

    /// Complex conjugation (`t = D - 1`).
    pub fn complex_conjugate(&self) -> Self {
        self.conjugate(self.order as i64 - 1)
            .expect("-1 is a unit modulo every order")
    }

    /// Re-expresses the element in `Z[ζ_M]` for a multiple `M` of the order.
    pub fn lift(&self, new_order: u32) -> Result<Self> {
        if new_order % self.order != 0 {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: new_order,
            });
        }
        let step = (new_order / self.order) as usize;
        let mut v = vec![BigInt::zero(); new_order as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            v[j * step] = c.clone();
        }
        Ok(Self::from_coeffs(new_order, v))
    }

    /// Complex embedding under `ζ_D ↦ e^{2πi/D}`, evaluated in double
    /// precision (absolute error about 1e-15 times the coefficient size).
    pub fn embed(&self) -> Complex64 {
        let d = self.order as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let theta = 2.0 * std::f64::consts::PI * j as f64 / d;
            let cf = c.to_f64().unwrap_or(f64::NAN);
            acc += Complex64::new(theta.cos(), theta.sin()) * cf;
        }
        acc
    }

    /// Exact `a · conj(a)`, for elements whose squared magnitude is rational.
    pub fn norm_squared_exact(&self) -> Option<BigInt> {
        (self * &self.complex_conjugate()).as_integer()
    }
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        self.try_add(rhs).expect("CycInt order mismatch")
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        self.try_sub(rhs).expect("CycInt order mismatch")
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        self.try_mul(rhs).expect("CycInt order mismatch")
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_reduce() {
        assert_eq!(CycInt::root(3, 0).coeffs(), ints(&[1, 0]).as_slice());
        assert_eq!(CycInt::root(3, 2).coeffs(), ints(&[-1, -1]).as_slice());
        assert_eq!(CycInt::root(4, 3).coeffs(), ints(&[0, -1]).as_slice());
        assert_eq!(CycInt::root(4, -1), CycInt::root(4, 3));
        assert_eq!(CycInt::root(1, 5), CycInt::one(1));
        assert_eq!(CycInt::root(2, 1).as_integer(), Some(BigInt::from(-1)));
    }

    #[test]
    fn ring_examples() {
        let z = CycInt::root(3, 1);
        let z2 = CycInt::root(3, 2);
        let one = CycInt::one(3);
        assert!((&(&z + &z2) + &one).is_zero());
        let i = CycInt::root(4, 1);
        assert_eq!((&i * &i).as_integer(), Some(BigInt::from(-1)));
        let a = &one + &z;
        let b = &one + &z2;
        assert_eq!(&a * &b, one);
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = CycInt::root(3, 1);
        let b = CycInt::root(4, 1);
        assert_eq!(
            a.try_add(&b),
            Err(Error::OrderMismatch { left: 3, right: 4 })
        );
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn conjugation_examples() {
        let z = CycInt::root(3, 1);
        assert_eq!(z.conjugate(2).unwrap(), CycInt::root(3, 2));
        assert_eq!(CycInt::one(3).conjugate(2).unwrap(), CycInt::one(3));
        let a = CycInt::from_coeffs(3, ints(&[-2, -3]));
        assert_eq!(
            a.conjugate(2).unwrap(),
            CycInt::from_coeffs(3, ints(&[1, 3]))
        );
        assert!(matches!(z.conjugate(3), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn embedding_examples() {
        let i = CycInt::root(4, 1).embed();
        assert!((i.re).abs() < 1e-12 && (i.im - 1.0).abs() < 1e-12);
        let a = CycInt::from_coeffs(3, ints(&[-2, -3])).embed();
        assert!((a.re + 0.5).abs() < 1e-12);
        assert!((a.im + 2.598076211353316).abs() < 1e-12);
        assert!((a.norm_sqr() - 7.0).abs() < 1e-10);
        assert_eq!(
            CycInt::from_coeffs(3, ints(&[-2, -3])).norm_squared_exact(),
            Some(BigInt::from(7))
        );
    }

    #[test]
    fn lift_preserves_value() {
        let z3 = CycInt::root(3, 1);
        assert_eq!(z3.lift(6).unwrap(), CycInt::root(6, 2));
        assert_eq!(z3.lift(12).unwrap(), CycInt::root(12, 4));
        assert!(z3.lift(4).is_err());
    }

    fn element(order: u32) -> impl Strategy<Value = CycInt> {
        let phi = tables(order).phi;
        prop::collection::vec(-50i64..50, phi)
            .prop_map(move |v| CycInt::from_coeffs(order, ints(&v)))
    }

    fn order_and_pair() -> impl Strategy<Value = (CycInt, CycInt, CycInt)> {
        prop_oneof![Just(3u32), Just(4u32), Just(6u32), Just(12u32)]
            .prop_flat_map(|d| (element(d), element(d), element(d)))
    }

    proptest! {
        #[test]
        fn ring_axioms((a, b, c) in order_and_pair()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn embedding_is_multiplicative((a, b, _c) in order_and_pair()) {
            let lhs = (&a * &b).embed();
            let rhs = a.embed() * b.embed();
            prop_assert!((lhs - rhs).norm() < 1e-9);
        }

        #[test]
        fn conjugations_compose((a, _b, _c) in order_and_pair(), t in 0i64..12, u in 0i64..12) {
            let d = a.order() as i64;
            prop_assume!(gcd(t.rem_euclid(d) as u64, d as u64) == 1);
            prop_assume!(gcd(u.rem_euclid(d) as u64, d as u64) == 1);
            let two_step = a.conjugate(t).unwrap().conjugate(u).unwrap();
            prop_assert_eq!(two_step, a.conjugate((t * u) % d).unwrap());
        }

        #[test]
        fn complex_conjugation_matches_embedding((a, _b, _c) in order_and_pair()) {
            let lhs = a.complex_conjugate().embed();
            prop_assert!((lhs - a.embed().conj()).norm() < 1e-9);
        }
    }
}
