//! Series recipes: a small expression language over named q-expansions.
//!
//! ```text
//! expr   := term ('*' term)* ('|' twist)?
//! term   := factor ('@' int)? ('^' int)?
//! factor := 'eta' | 'theta(' k ',' l ',' m ')' | 'string(' k ',' l ',' m ')'
//!         | 'fieldtheta(' ('eisenstein' | 'gauss') ')'
//!         | 'motive(' name ')' | 'hecke(' name ',' k ')' | 'brute(' name ')'
//!         | 'powertrace(' expr ',' k ')' | '(' expr ')'
//! twist  := 'chi2' | 'trivial'
//! ```
//!
//! `f@m` is `f(q^m)`. `brute(V)` and `powertrace(f, k)` only define
//! coefficients at primes: the first is the twisted Frobenius trace on the
//! primitive middle cohomology from a literal point count, the second is
//! `α^k + ᾱ^k` where `α + ᾱ = a_p` and `αᾱ = p`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::heckechar::{hecke_lseries, FieldTag, HeckeCharacter};
use crate::numtheory::{is_prime, kronecker_two};
use crate::qseries::{eta, integral_prefix, string_function, theta_hecke, theta_numberfield, Exponent, QSeries};

use super::Context;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Eta,
    Theta { k: i64, l: i64, m: i64 },
    StringFunction { k: i64, l: i64, m: i64 },
    FieldTheta(FieldTag),
    Motive(String),
    Hecke { name: String, k: u32 },
    Brute(String),
    PowerTrace { inner: Box<Recipe>, k: u32 },
    Group(Box<Recipe>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub factor: Factor,
    pub scale: i64,
    pub power: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Twist {
    Trivial,
    Chi2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recipe {
    pub terms: Vec<Term>,
    pub twist: Option<Twist>,
}

/// An evaluated recipe with the primes at which it is not meaningful.
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub series: QSeries,
    pub bad_primes: BTreeSet<u64>,
    /// Coefficients are only defined at prime indices.
    pub primes_only: bool,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Eta => write!(f, "eta"),
            Factor::Theta { k, l, m } => write!(f, "theta({k},{l},{m})"),
            Factor::StringFunction { k, l, m } => write!(f, "string({k},{l},{m})"),
            Factor::FieldTheta(FieldTag::Eisenstein) => write!(f, "fieldtheta(eisenstein)"),
            Factor::FieldTheta(FieldTag::Gauss) => write!(f, "fieldtheta(gauss)"),
            Factor::Motive(n) => write!(f, "motive({n})"),
            Factor::Hecke { name, k } => write!(f, "hecke({name},{k})"),
            Factor::Brute(n) => write!(f, "brute({n})"),
            Factor::PowerTrace { inner, k } => write!(f, "powertrace({inner},{k})"),
            Factor::Group(r) => write!(f, "({r})"),
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "{}", t.factor)?;
            if t.scale != 1 {
                write!(f, "@{}", t.scale)?;
            }
            if t.power != 1 {
                write!(f, "^{}", t.power)?;
            }
        }
        match self.twist {
            Some(Twist::Chi2) => write!(f, " | chi2"),
            Some(Twist::Trivial) => write!(f, " | trivial"),
            None => Ok(()),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '-' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.err("expected an integer"))
    }

    fn positive(&mut self) -> Result<i64> {
        let v = self.int()?;
        if v < 1 {
            return Err(self.err("expected a positive integer"));
        }
        Ok(v)
    }

    fn triple(&mut self) -> Result<(i64, i64, i64)> {
        self.expect('(')?;
        let k = self.int()?;
        self.expect(',')?;
        let l = self.int()?;
        self.expect(',')?;
        let m = self.int()?;
        self.expect(')')?;
        Ok((k, l, m))
    }

    fn factor(&mut self) -> Result<Factor> {
        if self.eat('(') {
            let inner = self.expr()?;
            self.expect(')')?;
            return Ok(Factor::Group(Box::new(inner)));
        }
        let name = self.ident()?;
        Ok(match name.as_str() {
            "eta" => Factor::Eta,
            "theta" => {
                let (k, l, m) = self.triple()?;
                Factor::Theta { k, l, m }
            }
            "string" => {
                let (k, l, m) = self.triple()?;
                Factor::StringFunction { k, l, m }
            }
            "fieldtheta" => {
                self.expect('(')?;
                let tag = match self.ident()?.as_str() {
                    "eisenstein" => FieldTag::Eisenstein,
                    "gauss" => FieldTag::Gauss,
                    other => return Err(self.err(&format!("unknown field {other:?}"))),
                };
                self.expect(')')?;
                Factor::FieldTheta(tag)
            }
            "motive" | "brute" => {
                self.expect('(')?;
                let v = self.ident()?;
                self.expect(')')?;
                if name == "motive" {
                    Factor::Motive(v)
                } else {
                    Factor::Brute(v)
                }
            }
            "hecke" => {
                self.expect('(')?;
                let chr = self.ident()?;
                self.expect(',')?;
                let k = self.positive()? as u32;
                self.expect(')')?;
                Factor::Hecke { name: chr, k }
            }
            "powertrace" => {
                self.expect('(')?;
                let inner = self.expr()?;
                self.expect(',')?;
                let k = self.positive()? as u32;
                self.expect(')')?;
                Factor::PowerTrace {
                    inner: Box::new(inner),
                    k,
                }
            }
            other => return Err(self.err(&format!("unknown form {other:?}"))),
        })
    }

    fn term(&mut self) -> Result<Term> {
        let factor = self.factor()?;
        let scale = if self.eat('@') { self.positive()? } else { 1 };
        let power = if self.eat('^') { self.positive()? as u32 } else { 1 };
        Ok(Term {
            factor,
            scale,
            power,
        })
    }

    fn expr(&mut self) -> Result<Recipe> {
        let mut terms = vec![self.term()?];
        while self.eat('*') {
            terms.push(self.term()?);
        }
        let twist = if self.eat('|') {
            Some(match self.ident()?.as_str() {
                "chi2" => Twist::Chi2,
                "trivial" => Twist::Trivial,
                other => return Err(self.err(&format!("unknown character {other:?}"))),
            })
        } else {
            None
        };
        Ok(Recipe { terms, twist })
    }
}

impl Recipe {
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser { src, pos: 0 };
        let r = p.expr()?;
        p.skip_ws();
        if p.pos != src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(r)
    }

    /// Variety names referenced anywhere in the recipe.
    pub fn varieties(&self) -> Vec<String> {
        let mut out = Vec::new();
        for t in &self.terms {
            match &t.factor {
                Factor::Motive(n) | Factor::Brute(n) => out.push(n.clone()),
                Factor::PowerTrace { inner, .. } | Factor::Group(inner) => out.extend(inner.varieties()),
                _ => {}
            }
        }
        out
    }

    /// Evaluates with every exponent below `precision` determined; retries
    /// with more terms when negative valuations eat into the precision.
    pub fn evaluate(&self, ctx: &Context, precision: i64) -> Result<Evaluated> {
        let mut working = precision;
        for _ in 0..4 {
            let e = self.evaluate_at(ctx, working)?;
            if e.series.precision() >= Exponent::from_integer(precision) {
                return Ok(Evaluated {
                    series: e.series.truncate(Exponent::from_integer(precision)),
                    ..e
                });
            }
            let shortfall = (Exponent::from_integer(precision) - e.series.precision()).ceil().to_integer();
            working += shortfall + 1;
        }
        Err(Error::Series(format!("could not reach precision {precision} for {self}")))
    }

    fn evaluate_at(&self, ctx: &Context, precision: i64) -> Result<Evaluated> {
        let mut bad = BTreeSet::new();
        let mut acc: Option<QSeries> = None;
        let mut primes_only = false;
        for t in &self.terms {
            // f(q^m) below P needs f below ceil(P / m)
            let inner_precision = (precision + t.scale - 1) / t.scale;
            let e = t.factor.evaluate(ctx, inner_precision)?;
            if e.primes_only && (self.terms.len() > 1 || t.scale != 1 || t.power != 1) {
                return Err(Error::Config(format!(
                    "{} only defines prime coefficients and cannot be multiplied, rescaled or raised to a power",
                    t.factor
                )));
            }
            primes_only |= e.primes_only;
            bad.extend(e.bad_primes);
            let mut s = e.series;
            if t.scale != 1 {
                s = s.rescale(t.scale);
            }
            if t.power != 1 {
                s = s.pow(t.power);
            }
            acc = Some(match acc {
                None => s,
                Some(a) => a.mul(&s),
            });
        }
        let mut series = acc.expect("recipes have at least one term");
        match self.twist {
            Some(Twist::Chi2) => {
                series = series.twist(kronecker_two)?;
                bad.insert(2);
            }
            Some(Twist::Trivial) | None => {}
        }
        Ok(Evaluated {
            series,
            bad_primes: bad,
            primes_only,
        })
    }
}

fn integral(coeffs: Vec<BigInt>, precision: i64) -> QSeries {
    QSeries::from_integral(&coeffs, precision)
}

impl Factor {
    fn evaluate(&self, ctx: &Context, precision: i64) -> Result<Evaluated> {
        let plain = |series: QSeries| Evaluated {
            series,
            bad_primes: BTreeSet::new(),
            primes_only: false,
        };
        let n = (precision - 1).max(0) as usize;
        Ok(match self {
            Factor::Eta => plain(eta(precision)),
            Factor::Theta { k, l, m } => plain(theta_hecke(*k, *l, *m, precision)?),
            Factor::StringFunction { k, l, m } => plain(string_function(*k, *l, *m, precision)?),
            Factor::FieldTheta(tag) => plain(theta_numberfield(*tag, precision)),
            Factor::Motive(name) => {
                let l = ctx.motive_lseries(name, n)?;
                Evaluated {
                    series: integral(l.coeffs.clone(), precision),
                    bad_primes: l.bad_primes.iter().copied().collect(),
                    primes_only: false,
                }
            }
            Factor::Hecke { name, k } => {
                let chr = HeckeCharacter::by_name(name)?;
                let coeffs = hecke_lseries(&chr, *k, n)?;
                let bad = (2..=precision.max(2) as u64).filter(|&p| is_prime(p) && !chr.is_good(p));
                Evaluated {
                    series: integral(coeffs, precision),
                    bad_primes: bad.collect(),
                    primes_only: false,
                }
            }
            Factor::Brute(name) => {
                let (coeffs, bad) = ctx.brute_traces(name, n)?;
                Evaluated {
                    series: integral(coeffs, precision),
                    bad_primes: bad,
                    primes_only: true,
                }
            }
            Factor::PowerTrace { inner, k } => {
                let e = inner.evaluate(ctx, precision)?;
                let a = integral_prefix(&e.series)?;
                let mut out = vec![BigInt::zero(); a.len()];
                for (p, slot) in out.iter_mut().enumerate() {
                    if is_prime(p as u64) {
                        *slot = power_trace(&a[p], &BigInt::from(p), *k);
                    }
                }
                Evaluated {
                    series: integral(out, precision),
                    bad_primes: e.bad_primes,
                    primes_only: true,
                }
            }
            Factor::Group(r) => r.evaluate_at(ctx, precision)?,
        })
    }
}

/// `α^k + ᾱ^k` from `α + ᾱ = b` and `αᾱ = p` (Newton recursion).
pub fn power_trace(b: &BigInt, p: &BigInt, k: u32) -> BigInt {
    let mut prev = BigInt::from(2);
    let mut cur = b.clone();
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = b * &cur - p * &prev;
        prev = cur;
        cur = next;
    }
    cur
}
