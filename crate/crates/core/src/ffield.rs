//! Prime and prime-power finite fields with a pinned generator and a full
//! discrete-logarithm table.
//!
//! Elements are encoded as integers `0..q`: the residue polynomial
//! `c_0 + c_1 x + … + c_{f-1} x^{f-1}` has code `Σ c_i p^i`. The modulus is
//! the first monic irreducible polynomial in code order of its lower
//! coefficients, and the generator is the primitive element of least code.

use num_rational::Ratio;

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::numtheory::{is_prime, prime_factors};

/// Default cap on `q` for in-memory tables.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 24;

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    f: u32,
    q: u32,
    /// Lower coefficients `c_0..c_{f-1}` of the monic modulus.
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    dlog: Vec<u32>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.f == other.f
            && self.modulus == other.modulus
            && self.generator == other.generator
    }
}

impl Eq for FiniteField {}

fn digits(mut code: u32, p: u32, f: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(f as usize);
    for _ in 0..f {
        out.push(code % p);
        code /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Multiplies residues modulo a monic polynomial with lower coefficients `m`.
fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let f = m.len();
    let p64 = p as u64;
    let mut prod = vec![0u64; 2 * f];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    for k in (f..2 * f).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        // x^k = x^{k-f} · x^f and x^f = -Σ m_i x^i
        for (i, &mi) in m.iter().enumerate() {
            let t = (c * mi as u64) % p64;
            prod[k - f + i] = (prod[k - f + i] + p64 - t) % p64;
        }
    }
    prod.truncate(f);
    prod.into_iter().map(|c| c as u32).collect()
}

/// Remainder of `a` (any length, constant first) modulo a monic `g` of full
/// coefficient list `g` (leading 1 included).
fn poly_rem(a: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    let p64 = p as u64;
    if r.len() <= dg {
        return r.into_iter().map(|c| c as u32).collect();
    }
    for k in (dg..r.len()).rev() {
        let c = r[k] % p64;
        if c == 0 {
            continue;
        }
        for (i, &gi) in g.iter().enumerate() {
            let t = c * gi as u64 % p64;
            r[k - dg + i] = (r[k - dg + i] + p64 - t) % p64;
        }
    }
    r.truncate(dg);
    r.into_iter().map(|c| c as u32).collect()
}

fn is_irreducible(lower: &[u32], p: u32) -> bool {
    let f = lower.len();
    let mut full = lower.to_vec();
    full.push(1);
    for deg in 1..=f / 2 {
        let count = (p as u64).pow(deg as u32);
        for code in 0..count {
            let mut g = digits(code as u32, p, deg as u32);
            g.push(1);
            if poly_rem(&full, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    /// Builds `F_{p^f}` with the default size cap.
    pub fn new(p: u64, f: u32) -> Result<Self> {
        Self::with_cap(p, f, DEFAULT_FIELD_CAP)
    }

    pub fn with_cap(p: u64, f: u32, cap: u64) -> Result<Self> {
        let (p32, q, modulus) = Self::setup(p, f, cap)?;
        let generator = (1..q)
            .find(|&g| Self::is_primitive_code(g, p32, &modulus, q))
            .expect("every finite field has a primitive element");
        Ok(Self::build(p32, f, q, modulus, generator))
    }

    /// Same field as [`FiniteField::new`] but with an explicitly chosen
    /// primitive element.
    pub fn with_generator(p: u64, f: u32, generator: u32) -> Result<Self> {
        let (p32, q, modulus) = Self::setup(p, f, DEFAULT_FIELD_CAP)?;
        if generator == 0 || generator >= q || !Self::is_primitive_code(generator, p32, &modulus, q)
        {
            return Err(Error::NotPrimitive(generator));
        }
        Ok(Self::build(p32, f, q, modulus, generator))
    }

    fn setup(p: u64, f: u32, cap: u64) -> Result<(u32, u32, Vec<u32>)> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if f == 0 {
            return Err(Error::InvalidExponent("extension degree must be ≥ 1".into()));
        }
        let q = (p as u128).checked_pow(f).unwrap_or(u128::MAX);
        if q > cap as u128 || q > u32::MAX as u128 {
            return Err(Error::FieldTooLarge {
                q: q.min(u64::MAX as u128) as u64,
                cap,
            });
        }
        let p32 = p as u32;
        let q = q as u32;
        let modulus = if f == 1 {
            vec![0]
        } else {
            (0..q)
                .map(|code| digits(code, p32, f))
                .find(|lower| is_irreducible(lower, p32))
                .expect("irreducible polynomials exist in every degree")
        };
        Ok((p32, q, modulus))
    }

    fn pow_code(g: u32, mut e: u64, p: u32, modulus: &[u32]) -> Vec<u32> {
        let f = modulus.len() as u32;
        let mut base = digits(g, p, f);
        let mut acc = digits(1, p, f);
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, modulus, p);
            }
            base = poly_mulmod(&base, &base, modulus, p);
            e >>= 1;
        }
        acc
    }

    fn is_primitive_code(g: u32, p: u32, modulus: &[u32], q: u32) -> bool {
        let n = (q - 1) as u64;
        let one = digits(1, p, modulus.len() as u32);
        if q == 2 {
            return g == 1;
        }
        prime_factors(n)
            .into_iter()
            .all(|r| Self::pow_code(g, n / r, p, modulus) != one)
    }

    fn build(p: u32, f: u32, q: u32, modulus: Vec<u32>, generator: u32) -> Self {
        let n = (q - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut dlog = vec![u32::MAX; q as usize];
        let g = digits(generator, p, f);
        let mut cur = digits(1, p, f);
        for m in 0..n {
            let code = undigits(&cur, p);
            exp.push(code);
            dlog[code as usize] = m as u32;
            cur = poly_mulmod(&cur, &g, &modulus, p);
        }
        debug_assert_eq!(undigits(&cur, p), 1);
        FiniteField {
            p,
            f,
            q,
            modulus,
            generator,
            exp,
            dlog,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    /// Lower coefficients of the monic modulus (`[0]` for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// `m` with `g^m = u`, or `None` for `u = 0`.
    #[inline]
    pub fn dlog(&self, u: u32) -> Option<u32> {
        match self.dlog[u as usize] {
            u32::MAX => None,
            m => Some(m),
        }
    }

    /// `g^m`.
    #[inline]
    pub fn exp(&self, m: u64) -> u32 {
        self.exp[(m % (self.q as u64 - 1)) as usize]
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.f == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else {
            let (mut a, mut b) = (a, b);
            let mut out = 0;
            let mut place = 1;
            for _ in 0..self.f {
                let s = (a % self.p + b % self.p) % self.p;
                out += s * place;
                place *= self.p;
                a /= self.p;
                b /= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.f == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else {
            let mut a = a;
            let mut out = 0;
            let mut place = 1;
            for _ in 0..self.f {
                let c = a % self.p;
                out += ((self.p - c) % self.p) * place;
                place *= self.p;
                a /= self.p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match (self.dlog(a), self.dlog(b)) {
            (Some(x), Some(y)) => self.exp(x as u64 + y as u64),
            _ => 0,
        }
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        match self.dlog(a) {
            None => {
                if e == 0 {
                    1
                } else {
                    0
                }
            }
            Some(m) => self.exp((m as u64 % (self.q as u64 - 1)) * (e % (self.q as u64 - 1))),
        }
    }

    /// Image of a rational integer in the prime subfield.
    pub fn from_integer(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }
}

/// Multiplicative character `χ_α(g^m) = e^{2πi α m}` with `χ_α(0) = 0`.
#[derive(Clone, Debug)]
pub struct MultChar<'a> {
    field: &'a FiniteField,
    alpha: Ratio<u32>,
}

impl<'a> MultChar<'a> {
    pub fn new(field: &'a FiniteField, alpha: Ratio<u32>) -> Result<Self> {
        let den = *alpha.denom();
        if (field.q() - 1) % den != 0 {
            return Err(Error::CharacterOrder {
                den,
                q_minus_one: field.q() as u64 - 1,
            });
        }
        Ok(MultChar { field, alpha })
    }

    /// Order of the value group (denominator of α).
    pub fn value_order(&self) -> u32 {
        *self.alpha.denom()
    }

    /// Exponent `e` with `χ(u) = ζ_D^e`, or `None` at `u = 0`.
    pub fn exponent(&self, u: u32) -> Option<u32> {
        let d = self.value_order() as u64;
        let num = *self.alpha.numer() as u64;
        self.field
            .dlog(u)
            .map(|m| ((num % d) * (m as u64 % d) % d) as u32)
    }

    pub fn eval(&self, u: u32) -> CycInt {
        let d = self.value_order();
        match self.exponent(u) {
            Some(e) => CycInt::root(d, e as i64),
            None => CycInt::zero(d),
        }
    }
}
