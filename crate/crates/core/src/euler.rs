//! Dirichlet coefficients of an Euler product `Π_p P_p(p^{-s})^{-1}`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::numtheory::primes_up_to;

/// Coefficients `c_0..=c_e` of `1 / P(t)` for a polynomial with `P(0) = 1`.
pub fn inverse_series(poly: &[BigInt], e: usize) -> Vec<BigInt> {
    debug_assert!(poly.first().map_or(false, |c| c.is_one()));
    let mut c = vec![BigInt::zero(); e + 1];
    c[0] = BigInt::one();
    for k in 1..=e {
        let mut acc = BigInt::zero();
        for (i, pi) in poly.iter().enumerate().skip(1).take(k) {
            if !pi.is_zero() {
                acc -= pi * &c[k - i];
            }
        }
        c[k] = acc;
    }
    c
}

/// Largest `e` with `p^e ≤ n`.
pub fn max_power(p: u64, n: u64) -> usize {
    let mut e = 0;
    let mut pe = 1u64;
    while pe.saturating_mul(p) <= n {
        pe *= p;
        e += 1;
    }
    e
}

/// Expands `a_1..=a_n` (index 0 holds 0) from per-prime local series
/// `local(p, e) = [a_1, a_p, …, a_{p^e}]`.
pub fn expand<F>(n: usize, mut local: F) -> Vec<BigInt>
where
    F: FnMut(u64, usize) -> Vec<BigInt>,
{
    let mut a = vec![BigInt::zero(); n + 1];
    if n == 0 {
        return a;
    }
    a[1] = BigInt::one();
    // smallest prime factor sieve
    let mut spf = vec![0u32; n + 1];
    for p in primes_up_to(n as u64) {
        let p = p as usize;
        let mut m = p;
        while m <= n {
            if spf[m] == 0 {
                spf[m] = p as u32;
            }
            m += p;
        }
    }
    let mut locals: Vec<Vec<BigInt>> = vec![Vec::new(); n + 1];
    for p in primes_up_to(n as u64) {
        let e = max_power(p, n as u64);
        let series = local(p, e);
        debug_assert_eq!(series.len(), e + 1);
        locals[p as usize] = series;
    }
    for m in 2..=n {
        let p = spf[m] as usize;
        let mut rest = m;
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        a[m] = &locals[p][e] * &a[rest];
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn inverse_of_quadratic_is_hecke_recursion() {
        // 1 / (1 - a t + p t²) with a = -1, p = 7
        let c = inverse_series(&ints(&[1, 1, 7]), 4);
        let mut expect = vec![BigInt::one(), BigInt::from(-1)];
        for k in 2..=4 {
            let next = BigInt::from(-1) * &expect[k - 1] - BigInt::from(7) * &expect[k - 2];
            expect.push(next);
        }
        assert_eq!(c, expect);
    }

    #[test]
    fn zeta_and_powers() {
        assert_eq!(max_power(2, 31), 4);
        assert_eq!(max_power(7, 6), 0);
        // 1/(1 - t) at every prime gives all ones
        let a = expand(30, |_, e| inverse_series(&ints(&[1, -1]), e));
        assert!(a[1..].iter().all(|c| c.is_one()));
        // 1/(1 - t²) at every prime: indicator of squares
        let a = expand(50, |_, e| inverse_series(&ints(&[1, 0, -1]), e));
        for (n, c) in a.iter().enumerate().skip(1) {
            let r = (n as f64).sqrt().round() as usize;
            assert_eq!(c.is_one(), r * r == n, "n = {n}");
        }
        assert_eq!(expand(1, |_, e| vec![BigInt::one(); e + 1]), ints(&[0, 1]));
    }
}
