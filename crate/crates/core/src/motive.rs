//! The Ω-motive of a diagonal hypersurface: the Galois orbit of
//! `α_Ω = (k_0/d, …, k_s/d)`, its Tate-twisted local factors and the
//! Dirichlet coefficients of its L-series.
//!
//! Frobenius at a good prime `p` permutes the orbit by `α ↦ pα`. A cycle of
//! length `f` with representative `β` contributes `1 - λ t^f` with
//! `λ = ε j_{p^f}(β) Π χ̄_{β_i}(b_i) / p^{f·twist}` and `ε = (-1)^{dim X}`.
//! For split primes (`f = 1`) this gives `1 - a_p t + p^w t²`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charsums::{ExponentVector, JacobiCache};
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::euler;
use crate::ffield::FiniteField;
use crate::geometry::VarietyDescriptor;
use crate::numtheory::{gcd, is_prime, mult_order, primes_up_to};
use crate::qseries::QSeries;

#[derive(Clone, Debug)]
pub struct OmegaMotive {
    variety: VarietyDescriptor,
    alpha_omega: ExponentVector,
    orbit: Vec<ExponentVector>,
    twist: u32,
}

impl OmegaMotive {
    pub fn new(variety: &VarietyDescriptor) -> Result<Self> {
        let alpha_omega = variety.alpha_omega()?;
        let den = alpha_omega.den() as u64;
        let mut orbit: Vec<ExponentVector> = (1..den.max(2))
            .filter(|&t| gcd(t, den) == 1)
            .filter_map(|t| alpha_omega.scaled(t).ok())
            .collect();
        orbit.sort();
        orbit.dedup();
        Ok(OmegaMotive {
            variety: variety.clone(),
            alpha_omega,
            orbit,
            twist: variety.charge() - 1,
        })
    }

    /// Same motive with a different Tate twist.
    pub fn with_twist(mut self, twist: u32) -> Self {
        self.twist = twist;
        self
    }

    pub fn variety(&self) -> &VarietyDescriptor {
        &self.variety
    }

    pub fn alpha_omega(&self) -> &ExponentVector {
        &self.alpha_omega
    }

    pub fn orbit(&self) -> &[ExponentVector] {
        &self.orbit
    }

    pub fn rank(&self) -> usize {
        self.orbit.len()
    }

    pub fn twist(&self) -> u32 {
        self.twist
    }

    /// `w = dim X - 2·twist`.
    pub fn motive_weight(&self) -> i64 {
        self.variety.dimension() as i64 - 2 * self.twist as i64
    }

    /// `(-1)^{dim X}`.
    pub fn sign(&self) -> i64 {
        if self.variety.dimension() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Primes dividing the degree or a coefficient.
    pub fn is_bad_prime(&self, p: u64) -> bool {
        self.variety.degree() as u64 % p == 0
            || self
                .variety
                .coefficients()
                .iter()
                .any(|&b| b.unsigned_abs() % p == 0)
    }

    /// Cycles of `α ↦ pα` on the orbit, as (representative, length).
    pub fn frobenius_cycles(&self, p: u64) -> Vec<(ExponentVector, u32)> {
        let mut seen = vec![false; self.orbit.len()];
        let mut cycles = Vec::new();
        for i in 0..self.orbit.len() {
            if seen[i] {
                continue;
            }
            let rep = self.orbit[i].clone();
            let mut cur = rep.clone();
            let mut len = 0;
            loop {
                let idx = self.orbit.binary_search(&cur).expect("orbit is Frobenius-stable");
                if seen[idx] {
                    break;
                }
                seen[idx] = true;
                len += 1;
                cur = cur.scaled(p).expect("p is prime to the denominator");
            }
            cycles.push((rep, len));
        }
        cycles
    }

    /// `ε Π χ̄(b) j_{p^f}(β)` over `F_{p^f}`, not yet divided by the twist.
    fn frobenius_eigenvalue(
        &self,
        beta: &ExponentVector,
        field: &FiniteField,
        cache: &JacobiCache,
    ) -> Result<CycInt> {
        let j = cache.jacobi(beta, field)?;
        let mut e = 0u64;
        let den = beta.den() as u64;
        for (&n, &b) in beta.numerators().iter().zip(self.variety.coefficients()) {
            if b != 1 {
                let m = field.dlog(field.from_integer(b)).ok_or_else(|| Error::BadPrime {
                    p: field.p() as u64,
                    what: format!("coefficient {b}"),
                })?;
                e += n as u64 * (m as u64 % den);
            }
        }
        let twist = CycInt::root(beta.den(), -((e % den) as i64));
        Ok((&j * &twist).scale(&BigInt::from(self.sign())))
    }

    /// `Tr(Frob_p^f)` on the twisted motive.
    pub fn frobenius_power_trace(&self, p: u64, f: u32, cache: &JacobiCache) -> Result<BigInt> {
        self.check_good(p)?;
        let field = FiniteField::new(p, f)?;
        if (field.q() - 1) % self.alpha_omega.den() != 0 {
            return Ok(BigInt::zero());
        }
        let order = self.alpha_omega.den();
        let mut total = CycInt::zero(order);
        for beta in &self.orbit {
            let v = self.frobenius_eigenvalue(beta, &field, cache)?;
            total = &total + &v.lift(order)?;
        }
        let total = total.as_integer().ok_or_else(|| {
            Error::InexactDivision(format!("Frobenius trace {total} is not rational"))
        })?;
        let scale = BigInt::from(p).pow(f * self.twist);
        if !total.is_multiple_of(&scale) {
            return Err(Error::InexactDivision(format!(
                "trace {total} over F_{p}^{f} is not divisible by {scale}"
            )));
        }
        Ok(total / scale)
    }

    fn check_good(&self, p: u64) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if self.is_bad_prime(p) {
            return Err(Error::BadPrime {
                p,
                what: format!("the degree or coefficients of {}", self.variety.name()),
            });
        }
        Ok(())
    }

    /// Local factor at a good prime.
    pub fn local_factor(&self, p: u64, cache: &JacobiCache) -> Result<LocalFactor> {
        self.local_factor_up_to(p, usize::MAX, cache)
    }

    /// Local factor truncated to `t`-degree `max_degree`: cycles whose length
    /// exceeds it contribute nothing below that degree and are skipped.
    fn local_factor_up_to(&self, p: u64, max_degree: usize, cache: &JacobiCache) -> Result<LocalFactor> {
        self.check_good(p)?;
        let order = self.alpha_omega.den();
        let f = mult_order(p % order as u64, order as u64) as u32;
        let cycles = self.frobenius_cycles(p);
        let mut poly = vec![CycInt::one(order)];
        let mut complete = true;
        for (beta, len) in &cycles {
            if *len as usize > max_degree {
                complete = false;
                continue;
            }
            let field = FiniteField::new(p, *len)?;
            let lambda = self.frobenius_eigenvalue(beta, &field, cache)?.lift(order)?;
            // multiply by 1 - λ t^len
            let len = *len as usize;
            let mut next = vec![CycInt::zero(order); poly.len() + len];
            for (i, c) in poly.iter().enumerate() {
                next[i] = &next[i] + c;
                next[i + len] = &next[i + len] - &(c * &lambda);
            }
            poly = next;
        }
        let mut coeffs = Vec::with_capacity(poly.len());
        for (m, c) in poly.iter().enumerate() {
            let c = c.as_integer().ok_or_else(|| {
                Error::InexactDivision(format!("local factor at {p}: coefficient {c} is not rational"))
            })?;
            let scale = BigInt::from(p).pow(self.twist * m as u32);
            if !c.is_multiple_of(&scale) {
                return Err(Error::InexactDivision(format!(
                    "local factor at {p}: coefficient {c} of t^{m} is not divisible by {scale}"
                )));
            }
            coeffs.push(c / scale);
        }
        let kind = if f == 1 {
            FactorKind::Split
        } else {
            FactorKind::Inert { f }
        };
        Ok(LocalFactor {
            p,
            kind,
            poly: coeffs,
            complete,
        })
    }

    /// `a_1..=a_n` of the twisted L-series; indices divisible by bad primes
    /// are zero and listed in `flagged`.
    pub fn lseries_coefficients(&self, n: usize, cache: &JacobiCache) -> Result<LSeries> {
        let primes = primes_up_to(n as u64);
        let factors: Vec<Result<Option<LocalFactor>>> = primes
            .par_iter()
            .map(|&p| {
                if self.is_bad_prime(p) {
                    return Ok(None);
                }
                let e = euler::max_power(p, n as u64);
                self.local_factor_up_to(p, e, cache).map(Some)
            })
            .collect();
        let mut locals = std::collections::HashMap::new();
        let mut bad_primes = Vec::new();
        for (&p, f) in primes.iter().zip(factors) {
            match f? {
                Some(lf) => {
                    locals.insert(p, lf);
                }
                None => bad_primes.push(p),
            }
        }
        let coeffs = euler::expand(n, |p, e| match locals.get(&p) {
            Some(lf) => euler::inverse_series(&lf.poly, e),
            None => {
                let mut v = vec![BigInt::zero(); e + 1];
                v[0] = BigInt::one();
                v
            }
        });
        let flagged = (1..=n)
            .filter(|&m| bad_primes.iter().any(|&p| m as u64 % p == 0))
            .collect();
        Ok(LSeries {
            name: self.variety.name().to_string(),
            twist: self.twist,
            weight: self.motive_weight(),
            coeffs,
            bad_primes,
            flagged,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactorKind {
    Split,
    Inert { f: u32 },
}

/// `poly[m]` is the coefficient of `t^m`; `poly[0] = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFactor {
    pub p: u64,
    pub kind: FactorKind,
    pub poly: Vec<BigInt>,
    /// False when Frobenius cycles longer than the requested degree were
    /// omitted.
    pub complete: bool,
}

impl LocalFactor {
    /// Dirichlet coefficient `a_p = -poly[1]`.
    pub fn ap(&self) -> BigInt {
        self.poly.get(1).map_or_else(BigInt::zero, |c| -c)
    }

    /// `|a_p| ≤ r·p^{w/2}` for a split factor of rank `r` and weight `w`.
    pub fn weil_ok(&self, rank: usize, weight: i64) -> bool {
        if self.kind != FactorKind::Split || weight < 0 {
            return true;
        }
        let a = self.ap();
        let bound = BigInt::from(rank * rank) * BigInt::from(self.p).pow(weight as u32);
        &a * &a <= bound
    }
}

/// Dirichlet coefficients with bad-prime bookkeeping; `coeffs[0]` is unused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LSeries {
    pub name: String,
    pub twist: u32,
    pub weight: i64,
    pub coeffs: Vec<BigInt>,
    pub bad_primes: Vec<u64>,
    pub flagged: Vec<usize>,
}

impl LSeries {
    pub fn get(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn bound(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// `Σ a_n q^n` with precision `len(coeffs)`.
pub fn to_q_series(coeffs: &[BigInt]) -> QSeries {
    QSeries::from_integral(coeffs, coeffs.len() as i64)
}

/// Largest `|a_p|` encountered, for diagnostics.
pub fn max_abs(coeffs: &[BigInt]) -> BigInt {
    coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
}
