//! Gaussian and Eisenstein integers and the Hecke characters `ψ_27`, `ψ_32`
//! and `ψ_64 = ψ_32 χ_2` with their powers.
//!
//! At a split prime `p = π π̄` the character value is the associate `α` of
//! `π` congruent to 1 modulo the character's modulus, and
//! `a_p(ψ^k) = α^k + ᾱ^k`. At an inert prime the ideal `(p)` is generated by
//! whichever of `±p` is congruent to 1, giving `a_{p²} = (±p)^k` and
//! `a_p = 0`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler;
use crate::ffield::FiniteField;
use crate::geometry::VarietyDescriptor;
use crate::charsums::point_count_brute;
use crate::numtheory::{is_prime, isqrt, kronecker_two};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldTag {
    /// `Z[i]`
    Gauss,
    /// `Z[ω]`, `ω² + ω + 1 = 0`
    Eisenstein,
}

/// `a + b·i` or `a + b·ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub tag: FieldTag,
    pub a: i128,
    pub b: i128,
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = match self.tag {
            FieldTag::Gauss => "i",
            FieldTag::Eisenstein => "ω",
        };
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}{unit}"),
            (a, b) if b < 0 => write!(f, "{a}{b}{unit}"),
            (a, b) => write!(f, "{a}+{b}{unit}"),
        }
    }
}

fn overflow() -> Error {
    Error::Convention("quadratic integer arithmetic overflow".into())
}

impl QuadInt {
    pub fn new(tag: FieldTag, a: i128, b: i128) -> Self {
        QuadInt { tag, a, b }
    }

    pub fn from_integer(tag: FieldTag, a: i128) -> Self {
        QuadInt { tag, a, b: 0 }
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadInt::new(self.tag, self.a + o.a, self.b + o.b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuadInt::new(self.tag, self.a - o.a, self.b - o.b)
    }

    pub fn neg(&self) -> Self {
        QuadInt::new(self.tag, -self.a, -self.b)
    }

    pub fn checked_mul(&self, o: &Self) -> Option<Self> {
        let ac = self.a.checked_mul(o.a)?;
        let bd = self.b.checked_mul(o.b)?;
        let ad = self.a.checked_mul(o.b)?;
        let bc = self.b.checked_mul(o.a)?;
        let (a, b) = match self.tag {
            FieldTag::Gauss => (ac.checked_sub(bd)?, ad.checked_add(bc)?),
            // ω² = -1 - ω
            FieldTag::Eisenstein => (ac.checked_sub(bd)?, ad.checked_add(bc)?.checked_sub(bd)?),
        };
        Some(QuadInt::new(self.tag, a, b))
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.checked_mul(o).expect("quadratic integer overflow")
    }

    pub fn conj(&self) -> Self {
        match self.tag {
            FieldTag::Gauss => QuadInt::new(self.tag, self.a, -self.b),
            // ω̄ = ω² = -1 - ω
            FieldTag::Eisenstein => QuadInt::new(self.tag, self.a - self.b, -self.b),
        }
    }

    pub fn norm(&self) -> i128 {
        match self.tag {
            FieldTag::Gauss => self.a * self.a + self.b * self.b,
            FieldTag::Eisenstein => self.a * self.a - self.a * self.b + self.b * self.b,
        }
    }

    pub fn trace(&self) -> i128 {
        match self.tag {
            FieldTag::Gauss => 2 * self.a,
            FieldTag::Eisenstein => 2 * self.a - self.b,
        }
    }

    /// Whether `self` divides `x`.
    pub fn divides(&self, x: &Self) -> bool {
        let n = self.norm();
        if n == 0 {
            return x.a == 0 && x.b == 0;
        }
        let y = x.mul(&self.conj());
        y.a % n == 0 && y.b % n == 0
    }

    pub fn checked_pow(&self, k: u32) -> Option<Self> {
        let mut acc = QuadInt::from_integer(self.tag, 1);
        for _ in 0..k {
            acc = acc.checked_mul(self)?;
        }
        Some(acc)
    }
}

/// The units of `Z[i]` or `Z[ω]`.
pub fn units(tag: FieldTag) -> Vec<QuadInt> {
    let q = |a, b| QuadInt::new(tag, a, b);
    match tag {
        FieldTag::Gauss => vec![q(1, 0), q(0, 1), q(-1, 0), q(0, -1)],
        FieldTag::Eisenstein => vec![q(1, 0), q(0, 1), q(-1, -1), q(-1, 0), q(0, -1), q(1, 1)],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    Split(QuadInt),
    Inert,
    Ramified,
}

/// Splitting of a rational prime, with a prime of norm `p` when split. The
/// search runs over `b = 1, 2, …` and returns the largest `a` of the first
/// `b` admitting a solution.
pub fn split_prime(p: u64, tag: FieldTag) -> Result<Splitting> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let split = match tag {
        FieldTag::Gauss if p == 2 => return Ok(Splitting::Ramified),
        FieldTag::Eisenstein if p == 3 => return Ok(Splitting::Ramified),
        FieldTag::Gauss => p % 4 == 1,
        FieldTag::Eisenstein => p % 3 == 1,
    };
    if !split {
        return Ok(Splitting::Inert);
    }
    let p = p as i128;
    for b in 1i128.. {
        let candidate = match tag {
            FieldTag::Gauss => {
                let rest = p - b * b;
                if rest < 0 {
                    break;
                }
                let a = isqrt(rest as u64) as i128;
                (a * a == rest).then_some(a)
            }
            FieldTag::Eisenstein => {
                // a = (b ± sqrt(4p - 3b²)) / 2
                let disc = 4 * p - 3 * b * b;
                if disc < 0 {
                    break;
                }
                let r = isqrt(disc as u64) as i128;
                (r * r == disc && (b + r) % 2 == 0).then_some((b + r) / 2)
            }
        };
        if let Some(a) = candidate {
            let pi = QuadInt::new(tag, a, b);
            debug_assert_eq!(pi.norm(), p);
            return Ok(Splitting::Split(pi));
        }
    }
    Err(Error::Convention(format!("no element of norm {p} found")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeCharacter {
    pub name: String,
    pub tag: FieldTag,
    /// Congruence modulus `m`: generators are normalized by `α ≡ 1 mod m`.
    pub modulus: (i128, i128),
    /// Conductor as recorded metadata.
    pub conductor: u64,
    /// Multiply by the Kronecker symbol `(2/N𝔭)`.
    pub quadratic_twist: bool,
}

impl HeckeCharacter {
    pub fn psi27() -> Self {
        HeckeCharacter {
            name: "psi27".into(),
            tag: FieldTag::Eisenstein,
            modulus: (3, 0),
            conductor: 27,
            quadratic_twist: false,
        }
    }

    pub fn psi32() -> Self {
        HeckeCharacter {
            name: "psi32".into(),
            tag: FieldTag::Gauss,
            modulus: (2, 2),
            conductor: 32,
            quadratic_twist: false,
        }
    }

    pub fn psi64() -> Self {
        HeckeCharacter {
            name: "psi64".into(),
            quadratic_twist: true,
            conductor: 64,
            ..Self::psi32()
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "psi27" => Ok(Self::psi27()),
            "psi32" => Ok(Self::psi32()),
            "psi64" => Ok(Self::psi64()),
            _ => Err(Error::Unknown {
                kind: "character",
                name: name.into(),
            }),
        }
    }

    pub fn modulus(&self) -> QuadInt {
        QuadInt::new(self.tag, self.modulus.0, self.modulus.1)
    }

    pub fn is_good(&self, p: u64) -> bool {
        match self.tag {
            FieldTag::Gauss => p != 2,
            FieldTag::Eisenstein => p != 3,
        }
    }

    fn congruent_to_one(&self, x: &QuadInt) -> bool {
        self.modulus()
            .divides(&x.sub(&QuadInt::from_integer(self.tag, 1)))
    }

    /// Value of the twist on an ideal of norm `n`.
    fn twist_value(&self, n: u64) -> i64 {
        if self.quadratic_twist {
            kronecker_two(n as i64)
        } else {
            1
        }
    }

    fn check(&self, p: u64) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !self.is_good(p) {
            return Err(Error::BadPrime {
                p,
                what: format!("the conductor of {}", self.name),
            });
        }
        Ok(())
    }
}

/// The unique associate of `pi` congruent to 1 modulo the character's
/// modulus.
pub fn canonical_generator(pi: &QuadInt, chr: &HeckeCharacter) -> Result<QuadInt> {
    let hits: Vec<QuadInt> = units(pi.tag)
        .iter()
        .map(|u| u.mul(pi))
        .filter(|a| chr.congruent_to_one(a))
        .collect();
    match hits.as_slice() {
        [alpha] => Ok(*alpha),
        [] => Err(Error::Convention(format!(
            "no associate of {pi} is 1 modulo {}",
            chr.modulus()
        ))),
        many => Err(Error::Convention(format!(
            "{} associates of {pi} are 1 modulo {}",
            many.len(),
            chr.modulus()
        ))),
    }
}

/// `±p`, whichever is 1 modulo the character's modulus.
pub fn inert_generator(p: u64, chr: &HeckeCharacter) -> Result<i128> {
    let hits: Vec<i128> = [p as i128, -(p as i128)]
        .into_iter()
        .filter(|&x| chr.congruent_to_one(&QuadInt::from_integer(chr.tag, x)))
        .collect();
    match hits.as_slice() {
        [g] => Ok(*g),
        _ => Err(Error::Convention(format!(
            "{} of ±{p} are 1 modulo {}",
            hits.len(),
            chr.modulus()
        ))),
    }
}

/// Local factor of `L(ψ^k, s)` at a good prime as a polynomial in `t = p^{-s}`.
pub fn hecke_local_factor(chr: &HeckeCharacter, k: u32, p: u64) -> Result<Vec<BigInt>> {
    chr.check(p)?;
    match split_prime(p, chr.tag)? {
        Splitting::Split(pi) => {
            let alpha = canonical_generator(&pi, chr)?;
            let ak = alpha.checked_pow(k).ok_or_else(overflow)?;
            let trace = BigInt::from(ak.trace()) * BigInt::from(chr.twist_value(p).pow(k));
            Ok(vec![BigInt::one(), -trace, BigInt::from(p).pow(k)])
        }
        Splitting::Inert => {
            let g = inert_generator(p, chr)?;
            let value = BigInt::from(g).pow(k) * BigInt::from(chr.twist_value(p * p).pow(k));
            Ok(vec![BigInt::one(), BigInt::zero(), -value])
        }
        Splitting::Ramified => unreachable!("ramified primes are bad"),
    }
}

/// `a_p(ψ^k)`.
pub fn hecke_ap(chr: &HeckeCharacter, k: u32, p: u64) -> Result<BigInt> {
    Ok(-hecke_local_factor(chr, k, p)?[1].clone())
}

/// `a_1..=a_n` of `L(ψ^k, s)`; coefficients at multiples of the ramified
/// prime are zero.
pub fn hecke_lseries(chr: &HeckeCharacter, k: u32, n: usize) -> Result<Vec<BigInt>> {
    let mut failure = None;
    let coeffs = euler::expand(n, |p, e| {
        if !chr.is_good(p) {
            let mut v = vec![BigInt::zero(); e + 1];
            v[0] = BigInt::one();
            return v;
        }
        match hecke_local_factor(chr, k, p) {
            Ok(poly) => euler::inverse_series(&poly, e),
            Err(err) => {
                failure.get_or_insert(err);
                vec![BigInt::zero(); e + 1]
            }
        }
    });
    match failure {
        Some(err) => Err(err),
        None => Ok(coeffs),
    }
}

/// The two plane curves attached to the characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EllipticModel {
    /// `z_0³ + z_1³ + z_2³ = 0` in `P²`
    E3,
    /// `z_0⁴ + z_1⁴ + z_2² = 0` in `P(1,1,2)`
    E4,
}

impl EllipticModel {
    pub fn descriptor(&self) -> VarietyDescriptor {
        match self {
            EllipticModel::E3 => VarietyDescriptor::fermat("E3", 3, 3).expect("valid"),
            EllipticModel::E4 => {
                VarietyDescriptor::new("E4", vec![1, 1, 2], vec![4, 4, 2], 4, None).expect("valid")
            }
        }
    }

    pub fn character(&self) -> HeckeCharacter {
        match self {
            EllipticModel::E3 => HeckeCharacter::psi27(),
            EllipticModel::E4 => HeckeCharacter::psi64(),
        }
    }

    pub fn is_good(&self, p: u64) -> bool {
        match self {
            EllipticModel::E3 => p != 3,
            EllipticModel::E4 => p != 2,
        }
    }
}

/// `p + 1 - #E(F_p)` by enumeration.
pub fn elliptic_ap_brute(curve: EllipticModel, p: u64, budget: u128) -> Result<BigInt> {
    if !curve.is_good(p) {
        return Err(Error::BadPrime {
            p,
            what: format!("{curve:?}"),
        });
    }
    let field = FiniteField::new(p, 1)?;
    let n = point_count_brute(&curve.descriptor(), &field, budget)?;
    Ok(BigInt::from(p + 1) - n)
}
