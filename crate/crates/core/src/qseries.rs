//! Truncated q-expansions with rational exponents.
//!
//! A [`QSeries`] stores `Σ c_j q^{j/denom}` for exponents below a rational
//! precision `P`. Products keep only what both operands determine: the
//! precision of `f·g` is `min(P_f, P_g, P_f + v_g, P_g + v_f)` where `v` is
//! the valuation (the valuation of a zero series is its precision).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::heckechar::FieldTag;
use crate::numtheory::{gcd, isqrt, lcm};

pub type Exponent = Ratio<i64>;

#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    denom: i64,
    coeffs: BTreeMap<i64, BigInt>,
    precision: Exponent,
}

/// Result of [`QSeries::compare`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// Coefficients agree for every exponent below `precision`.
    Equal { precision: Exponent },
    Mismatch {
        exponent: Exponent,
        left: BigInt,
        right: BigInt,
    },
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal { .. })
    }
}

/// JSON value for an integer: a number when it fits in `i64`, else a string.
pub fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn ceil_units(precision: Exponent, denom: i64) -> i64 {
    // smallest key k with k/denom ≥ precision
    let scaled = precision * denom;
    scaled.ceil().to_integer()
}

impl QSeries {
    /// Builds a series from `(numerator, coefficient)` pairs over `denom`,
    /// dropping zeros and exponents at or beyond `precision`.
    pub fn new<I>(denom: i64, terms: I, precision: Exponent) -> Self
    where
        I: IntoIterator<Item = (i64, BigInt)>,
    {
        assert!(denom > 0, "denominator must be positive");
        let cut = ceil_units(precision, denom);
        let mut coeffs: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (k, c) in terms {
            if k >= cut || c.is_zero() {
                continue;
            }
            *coeffs.entry(k).or_insert_with(BigInt::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        let mut s = QSeries {
            denom,
            coeffs,
            precision,
        };
        s.reduce_denom();
        s
    }

    fn reduce_denom(&mut self) {
        let g = self
            .coeffs
            .keys()
            .fold(self.denom as u64, |g, &k| gcd(g, k.unsigned_abs())) as i64;
        if g > 1 {
            self.coeffs = std::mem::take(&mut self.coeffs)
                .into_iter()
                .map(|(k, c)| (k / g, c))
                .collect();
            self.denom /= g;
        }
        if self.coeffs.is_empty() {
            self.denom = 1;
        }
    }

    pub fn zero(precision: Exponent) -> Self {
        Self::new(1, [], precision)
    }

    pub fn one(precision: Exponent) -> Self {
        Self::monomial(Exponent::zero(), BigInt::one(), precision)
    }

    pub fn monomial(exponent: Exponent, c: BigInt, precision: Exponent) -> Self {
        Self::new(*exponent.denom(), [(*exponent.numer(), c)], precision)
    }

    /// `Σ c[n] q^n` with the given precision.
    pub fn from_integral(coeffs: &[BigInt], precision: i64) -> Self {
        Self::new(
            1,
            coeffs.iter().enumerate().map(|(n, c)| (n as i64, c.clone())),
            Exponent::from_integer(precision),
        )
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn precision(&self) -> Exponent {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest exponent with a nonzero coefficient, or the precision.
    pub fn valuation(&self) -> Exponent {
        self.coeffs
            .keys()
            .next()
            .map_or(self.precision, |&k| Exponent::new(k, self.denom))
    }

    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.coeffs.values().next()
    }

    pub fn coefficient(&self, exponent: Exponent) -> BigInt {
        let scaled = exponent * self.denom;
        if !scaled.is_integer() {
            return BigInt::zero();
        }
        self.coeffs
            .get(&scaled.to_integer())
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn coefficient_at_integer(&self, n: i64) -> BigInt {
        self.coefficient(Exponent::from_integer(n))
    }

    /// Nonzero terms in increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .map(move |(&k, c)| (Exponent::new(k, self.denom), c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn has_integral_exponents(&self) -> bool {
        self.denom == 1
    }

    /// Coefficients of `q^0..q^{n}`; an error if exponents are fractional
    /// or `n` is not below the precision.
    pub fn integral_coefficients(&self, n: usize) -> Result<Vec<BigInt>> {
        if !self.has_integral_exponents() {
            return Err(Error::Series(format!(
                "exponents have denominator {}",
                self.denom
            )));
        }
        if Exponent::from_integer(n as i64) >= self.precision {
            return Err(Error::Series(format!(
                "coefficient {n} requested from a series known below {}",
                self.precision
            )));
        }
        let mut out = vec![BigInt::zero(); n + 1];
        for (&k, c) in self.coeffs.range(0..=n as i64) {
            out[k as usize] = c.clone();
        }
        if self.coeffs.range(..0).next().is_some() {
            return Err(Error::Series("negative exponents present".into()));
        }
        Ok(out)
    }

    pub fn truncate(&self, precision: Exponent) -> Self {
        let p = precision.min(self.precision);
        Self::new(self.denom, self.coeffs.clone(), p)
    }

    fn aligned(&self, denom: i64) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        let m = denom / self.denom;
        self.coeffs.iter().map(move |(&k, c)| (k * m, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let d = lcm(self.denom as u64, other.denom as u64) as i64;
        let terms: Vec<(i64, BigInt)> = self
            .aligned(d)
            .chain(other.aligned(d))
            .map(|(k, c)| (k, c.clone()))
            .collect();
        Self::new(d, terms, self.precision.min(other.precision))
    }

    pub fn neg(&self) -> Self {
        QSeries {
            denom: self.denom,
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c)).collect(),
            precision: self.precision,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(
            self.denom,
            self.coeffs.iter().map(|(&k, x)| (k, x * c)),
            self.precision,
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let precision = self
            .precision
            .min(other.precision)
            .min(self.precision + other.valuation())
            .min(other.precision + self.valuation());
        let d = lcm(self.denom as u64, other.denom as u64) as i64;
        let cut = ceil_units(precision, d);
        let a: Vec<(i64, &BigInt)> = self.aligned(d).collect();
        let b: Vec<(i64, &BigInt)> = other.aligned(d).collect();
        let mut out: BTreeMap<i64, BigInt> = BTreeMap::new();
        for &(ka, ca) in &a {
            for &(kb, cb) in &b {
                if ka + kb >= cut {
                    break;
                }
                *out.entry(ka + kb).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        Self::new(d, out, precision)
    }

    pub fn pow(&self, k: u32) -> Self {
        if k == 0 {
            return Self::one(self.precision - self.valuation());
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut k = k;
        loop {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.mul(&base);
        }
        result.expect("k > 0")
    }

    /// Reciprocal of a series whose leading coefficient is `±1`.
    pub fn inverse(&self) -> Result<Self> {
        let lead = self
            .leading_coefficient()
            .ok_or_else(|| Error::Series("division by a zero series".into()))?;
        if lead.abs() != BigInt::one() {
            return Err(Error::Series(format!("leading coefficient {lead} is not a unit")));
        }
        let lead = lead.clone();
        let v = self.valuation();
        let d = self.denom;
        let v_key = *self.coeffs.keys().next().expect("nonzero");
        // h = q^{-v}·self = lead + Σ_{j≥1} h_j q^{j/d}, known below P - v
        let rel = self.precision - v;
        let n = ceil_units(rel, d).max(0) as usize;
        let mut h = vec![BigInt::zero(); n];
        for (&k, c) in &self.coeffs {
            let j = (k - v_key) as usize;
            if j < n {
                h[j] = c.clone();
            }
        }
        let mut inv = vec![BigInt::zero(); n];
        for j in 0..n {
            let mut acc = if j == 0 { BigInt::one() } else { BigInt::zero() };
            for i in 1..=j {
                if !h[i].is_zero() {
                    acc -= &h[i] * &inv[j - i];
                }
            }
            // lead = ±1, so dividing is multiplying
            inv[j] = acc * &lead;
        }
        let shift = -v_key;
        Ok(Self::new(
            d,
            inv.into_iter()
                .enumerate()
                .map(|(j, c)| (j as i64 + shift, c)),
            rel - v,
        ))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `f(q^m)`.
    pub fn rescale(&self, m: i64) -> Self {
        assert!(m > 0, "rescale factor must be positive");
        Self::new(
            self.denom,
            self.coeffs.iter().map(|(&k, c)| (k * m, c.clone())),
            self.precision * m,
        )
    }

    /// `Σ χ(n) a_n q^n`; exponents must be integral.
    pub fn twist(&self, chi: impl Fn(i64) -> i64) -> Result<Self> {
        if !self.has_integral_exponents() {
            return Err(Error::Series(format!(
                "twist needs integral exponents, denominator is {}",
                self.denom
            )));
        }
        Ok(Self::new(
            1,
            self.coeffs
                .iter()
                .map(|(&k, c)| (k, c * BigInt::from(chi(k)))),
            self.precision,
        ))
    }

    /// Smallest exponent below the common precision where the series differ.
    pub fn compare(&self, other: &Self) -> Comparison {
        let precision = self.precision.min(other.precision);
        let diff = self.sub(other).truncate(precision);
        let first = diff.terms().next().map(|(e, _)| e);
        match first {
            None => Comparison::Equal { precision },
            Some(e) => Comparison::Mismatch {
                exponent: e,
                left: self.coefficient(e),
                right: other.coefficient(e),
            },
        }
    }

    /// `[[numerator, denominator, coefficient], …]` with exponents in lowest
    /// terms.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|(e, c)| json!([e.numer(), e.denom(), int_json(c)]))
            .collect();
        json!({
            "precision": [self.precision.numer(), self.precision.denom()],
            "terms": terms,
        })
    }

    /// The first `k` nonzero terms.
    pub fn pretty(&self, k: usize) -> String {
        let mut out = String::new();
        for (i, (e, c)) in self.terms().take(k).enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = if e.is_zero() {
                String::new()
            } else if e.is_one() {
                "q".to_string()
            } else if e.is_integer() {
                format!("q^{e}")
            } else {
                format!("q^({e})")
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}{mono}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out.push_str(&format!(" + O(q^{})", fmt_exponent(self.precision)));
        out
    }
}

fn fmt_exponent(e: Exponent) -> String {
    if e.is_integer() {
        e.to_string()
    } else {
        format!("({e})")
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty(12))
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty(usize::MAX))
    }
}

/// `η = q^{1/24} Π (1 - q^n)` for exponents below `n`, by the pentagonal
/// number theorem.
pub fn eta(n: i64) -> QSeries {
    let precision = Exponent::from_integer(n);
    let mut terms = Vec::new();
    let mut j = 0i64;
    loop {
        let mut any = false;
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let mut pents = vec![j * (3 * j - 1) / 2];
        if j > 0 {
            pents.push(j * (3 * j + 1) / 2);
        }
        for g in pents {
            let key = 1 + 24 * g;
            if key < 24 * n {
                any = true;
                terms.push((key, BigInt::from(sign)));
            }
        }
        if !any {
            break;
        }
        j += 1;
    }
    QSeries::new(24, terms, precision)
}

/// `Θ^k_{l,m}`: the sum of `sign(x) q^{(k+2)x² - ky²}` over `(x, y)` with
/// `-|x| < y ≤ |x|` lying in `L = Z² + ((l+1)/(2(k+2)), m/(2k))` or with
/// `(1/2 - x, 1/2 + y) ∈ L`; points in both sets are counted once.
pub fn theta_hecke(k: i64, l: i64, m: i64, n: i64) -> Result<QSeries> {
    if k < 1 || l < 0 || l > k {
        return Err(Error::Series(format!("theta needs k ≥ 1 and 0 ≤ l ≤ k, got k={k} l={l}")));
    }
    // X = 2(k+2)x, Y = 2k·y
    let mx = 2 * (k + 2);
    let my = 2 * k;
    let in_lattice = |x: i64, y: i64| {
        let first = (x - (l + 1)).rem_euclid(mx) == 0 && (y - m).rem_euclid(my) == 0;
        let second = (x - (k + 1 - l)).rem_euclid(mx) == 0 && (y - (m - k)).rem_euclid(my) == 0;
        first || second
    };
    let denom = 4 * k * (k + 2);
    // exponent ≥ 2x² on the cone, so |X| < 2(k+2)·sqrt(n/2)
    let x_max = (mx as f64 * (n.max(0) as f64 / 2.0).sqrt()).ceil() as i64 + 1;
    let mut terms = Vec::new();
    for x in -x_max..=x_max {
        if x == 0 {
            continue;
        }
        let ax = x.abs();
        // -|X|k < Y(k+2) ≤ |X|k
        let y_max = ax * k / (k + 2);
        for y in -y_max..=y_max {
            if !(-ax * k < y * (k + 2) && y * (k + 2) <= ax * k) {
                continue;
            }
            if !in_lattice(x, y) {
                continue;
            }
            let key = k * x * x - (k + 2) * y * y;
            if key < denom * n {
                terms.push((key, BigInt::from(x.signum())));
            }
        }
    }
    Ok(QSeries::new(denom, terms, Exponent::from_integer(n)))
}

/// `c^k_{l,m} = Θ^k_{l,m} / η³`, exact below `n`.
pub fn string_function(k: i64, l: i64, m: i64, n: i64) -> Result<QSeries> {
    let theta = theta_hecke(k, l, m, n + 1)?;
    let eta3 = eta(n + 1).pow(3);
    let c = theta.div(&eta3)?;
    if c.precision() < Exponent::from_integer(n) {
        return Err(Error::Series(format!(
            "string function only determined below {}",
            c.precision()
        )));
    }
    Ok(c.truncate(Exponent::from_integer(n)))
}

/// `Σ_{z ∈ O_K} q^{N(z)}` for exponents below `n`.
pub fn theta_numberfield(tag: FieldTag, n: i64) -> QSeries {
    let n = n.max(0);
    let bound = isqrt((4 * n as u64) / 3 + 4) as i64 + 1;
    let mut counts = vec![0i64; n as usize];
    for a in -bound..=bound {
        for b in -bound..=bound {
            let norm = match tag {
                FieldTag::Gauss => a * a + b * b,
                FieldTag::Eisenstein => a * a - a * b + b * b,
            };
            if norm < n {
                counts[norm as usize] += 1;
            }
        }
    }
    QSeries::new(
        1,
        counts
            .into_iter()
            .enumerate()
            .map(|(i, c)| (i as i64, BigInt::from(c))),
        Exponent::from_integer(n),
    )
}

/// Coefficients `a_0, a_1, …` of an integral-exponent series below its
/// precision.
pub fn integral_prefix(series: &QSeries) -> Result<Vec<BigInt>> {
    let top = (series.precision().ceil().to_integer() - 1).max(0) as usize;
    series.integral_coefficients(top)
}
