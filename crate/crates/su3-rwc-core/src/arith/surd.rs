use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Finite sum `sum_i c_i * sqrt(n_i)` with squarefree, distinct `n_i >= 1` and
/// nonzero rational `c_i`.
///
/// The map is kept canonical after every operation, so structural equality
/// is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SurdSum {
    terms: BTreeMap<BigUint, Rational>,
}

/// Splits `n = s^2 * f` with `f` squarefree.
///
/// Trial division runs up to 65536. A cofactor left after that is tested for
/// being a perfect square and otherwise kept as is; factorial-derived
/// radicands never get there because their prime factors are tiny.
pub fn squarefree_split(n: &BigUint) -> (BigUint, BigUint) {
    if n.is_zero() {
        return (BigUint::zero(), BigUint::one());
    }
    if let Some(small) = n.to_u128() {
        let (s, f) = squarefree_u128(small);
        return (BigUint::from(s), BigUint::from(f));
    }
    let mut rest = n.clone();
    let mut s = BigUint::one();
    let mut f = BigUint::one();
    let mut d: u64 = 2;
    while d <= 65_536 && BigUint::from(d * d) <= rest {
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&BigUint::from(d));
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            s *= BigUint::from(d).pow(e / 2);
            if e % 2 == 1 {
                f *= d;
            }
            if let Some(small) = rest.to_u128() {
                let (s2, f2) = squarefree_u128_from(small, d + 1);
                return (s * BigUint::from(s2), f * BigUint::from(f2));
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    finish_cofactor(rest, s, f)
}

fn finish_cofactor(rest: BigUint, mut s: BigUint, mut f: BigUint) -> (BigUint, BigUint) {
    if !rest.is_one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            s *= r;
        } else {
            f *= rest;
        }
    }
    (s, f)
}

fn squarefree_u128(n: u128) -> (u128, u128) {
    squarefree_u128_from(n, 2)
}

fn squarefree_u128_from(mut n: u128, start: u64) -> (u128, u128) {
    let mut s: u128 = 1;
    let mut f: u128 = 1;
    let mut d = start.max(2) as u128;
    while d <= 65_536 && d * d <= n {
        let mut e = 0u32;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            s *= d.pow(e / 2);
            if e % 2 == 1 {
                f *= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        let r = n.sqrt();
        if r * r == n {
            s *= r;
        } else {
            f *= n;
        }
    }
    (s, f)
}

fn big(n: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n.clone())
}

impl SurdSum {
    pub fn zero() -> Self {
        SurdSum::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut s = SurdSum::zero();
        s.push(BigUint::one(), r);
        s
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `c * sqrt(radicand)` for an arbitrary nonnegative integer radicand.
    pub fn term(c: Rational, radicand: &BigUint) -> Self {
        let (s, f) = squarefree_split(radicand);
        let mut out = SurdSum::zero();
        out.push(f, c * Rational::from_integer(big(&s)));
        out
    }

    /// `sign * sqrt(r)` for a rational `r >= 0`.
    pub fn sqrt_of(r: &Rational, negative: bool) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::Domain(format!("square root of negative rational {r}")));
        }
        if r.is_zero() {
            return Ok(SurdSum::zero());
        }
        let p = r.numer().magnitude();
        let q = r.denom().magnitude();
        let (s, f) = squarefree_split(&(p * q));
        let c = Rational::new(big(&s), big(q));
        let mut out = SurdSum::zero();
        out.push(f, if negative { -c } else { c });
        Ok(out)
    }

    fn push(&mut self, radicand: BigUint, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&radicand) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&radicand);
                }
            }
            None => {
                self.terms.insert(radicand, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates `(radicand, coefficient)` pairs in ascending radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &Rational)> {
        self.terms.iter()
    }

    /// The unique `(radicand, coefficient)` when the value is a single surd.
    pub fn single(&self) -> Option<(&BigUint, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// The value as a rational, when it has no irrational part.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&BigUint::one()).cloned(),
            _ => None,
        }
    }

    /// `x` such that `self = sign(self) * sqrt(x)`, for zero or single surds.
    pub fn signed_square(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        let (f, c) = self.single()?;
        let sq = c * c * Rational::from_integer(big(f));
        Some(if c.is_negative() { -sq } else { sq })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return SurdSum::zero();
        }
        SurdSum { terms: self.terms.iter().map(|(f, c)| (f.clone(), c * r)).collect() }
    }

    /// Exact quotient by a single nonzero surd.
    pub fn div_single(&self, b: &SurdSum) -> Result<Self> {
        let (f, c) = match b.single() {
            Some(t) => t,
            None if b.is_zero() => return Err(Error::Arithmetic("division by zero".into())),
            None => return Err(Error::Arithmetic(format!("division by multi-term surd {b}"))),
        };
        let inv = Rational::one() / (c * Rational::from_integer(big(f)));
        let mut root = SurdSum::zero();
        root.push(f.clone(), inv);
        Ok(self * &root)
    }

    /// Exact sign, decided by refining a decimal enclosure.
    pub fn signum(&self) -> Ordering {
        if let Some(r) = self.as_rational() {
            return r.cmp(&Rational::zero());
        }
        let mut digits = 8u32;
        loop {
            let (lo, hi) = self.enclose(digits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            digits *= 2;
        }
    }

    /// Integers `lo <= self * 10^digits <= hi` with `hi - lo <= 2 * #terms`.
    fn enclose(&self, digits: u32) -> (BigInt, BigInt) {
        let scale = BigInt::from(10u32).pow(digits);
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (f, c) in &self.terms {
            let num = c.numer().abs() * &scale;
            let den = c.denom();
            let inside = (&num * &num * big(f)) / (den * den);
            let fl = inside.sqrt();
            if c.is_negative() {
                lo -= &fl + BigInt::one();
                hi -= fl;
            } else {
                lo += &fl;
                hi += fl + BigInt::one();
            }
        }
        (lo, hi)
    }

    /// Decimal string rounded to `digits` places (trailing zeros trimmed).
    pub fn to_decimal(&self, digits: u32) -> String {
        let digits = digits.max(1);
        let scale = BigInt::from(10u32).pow(digits);
        let n = if let Some(r) = self.as_rational() {
            let v = r * Rational::from_integer(scale.clone());
            let half = Rational::new(BigInt::one(), BigInt::from(2));
            if v.is_negative() {
                -((-v) + half).floor().to_integer()
            } else {
                (v + half).floor().to_integer()
            }
        } else {
            let mut guard = 4u32;
            loop {
                let g = BigInt::from(10u32).pow(guard);
                let (lo, hi) = self.enclose(digits + guard);
                let half = &g / BigInt::from(2);
                let a = (lo + &half).div_floor(&g);
                let b = (hi + &half).div_floor(&g);
                if a == b {
                    break a;
                }
                guard += 4;
            }
        };
        format_fixed(&n, digits as usize)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_decimal(20).parse().unwrap_or(f64::NAN)
    }
}

fn format_fixed(n: &BigInt, digits: usize) -> String {
    let neg = n.is_negative();
    let mut s = n.abs().to_string();
    if s.len() <= digits {
        let pad = digits + 1 - s.len();
        s = "0".repeat(pad) + &s;
    }
    let (int, frac) = s.split_at(s.len() - digits);
    let frac = frac.trim_end_matches('0');
    let frac = if frac.is_empty() { "0" } else { frac };
    let sign = if neg && !(int.chars().all(|c| c == '0') && frac == "0") { "-" } else { "" };
    format!("{sign}{int}.{frac}")
}

/// `sign * sqrt(r)` in canonical form.
pub fn surd_from_sqrt(r: &Rational, sign: i32) -> Result<SurdSum> {
    SurdSum::sqrt_of(r, sign < 0)
}

pub fn surd_mul(a: &SurdSum, b: &SurdSum) -> SurdSum {
    a * b
}

pub fn surd_div_single(a: &SurdSum, b: &SurdSum) -> Result<SurdSum> {
    a.div_single(b)
}

pub fn surd_to_float(a: &SurdSum, digits: u32) -> String {
    a.to_decimal(digits)
}

impl fmt::Display for SurdSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        if let Some(sq) = self.signed_square() {
            let sign = if sq.is_negative() { "-" } else { "" };
            let a = sq.abs();
            return write!(f, "{sign}sqrt({}/{})", a.numer(), a.denom());
        }
        let parts: Vec<String> = self.terms.iter().map(|(n, c)| format!("{c}*sqrt({n})")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for SurdSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SurdSum({self})")
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn parse_piece(piece: &str) -> Result<SurdSum> {
    let p = piece.trim();
    if p.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    let (neg, body) = match p.strip_prefix('-') {
        Some(rest) if rest.trim_start().starts_with("sqrt(") => (true, rest.trim_start()),
        _ => (false, p),
    };
    if let Some(inner) = body.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        return SurdSum::sqrt_of(&parse_rational(inner)?, neg);
    }
    if let Some((c, root)) = body.split_once("*sqrt(") {
        let inner = root.strip_suffix(')').ok_or_else(|| Error::Parse(format!("unclosed sqrt in `{p}`")))?;
        let r = parse_rational(inner)?;
        return Ok(SurdSum::sqrt_of(&r, false)?.scale(&parse_rational(c)?));
    }
    Ok(SurdSum::from_rational(parse_rational(body)?))
}

impl FromStr for SurdSum {
    type Err = Error;

    /// Accepts everything `Display` emits, plus bare rationals.
    fn from_str(s: &str) -> Result<Self> {
        let mut acc = SurdSum::zero();
        for piece in s.split(" + ") {
            acc += parse_piece(piece)?;
        }
        Ok(acc)
    }
}

impl From<Rational> for SurdSum {
    fn from(r: Rational) -> Self {
        SurdSum::from_rational(r)
    }
}

impl<'a> Add<&'a SurdSum> for &'a SurdSum {
    type Output = SurdSum;
    fn add(self, rhs: &SurdSum) -> SurdSum {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for SurdSum {
    type Output = SurdSum;
    fn add(mut self, rhs: SurdSum) -> SurdSum {
        self += &rhs;
        self
    }
}

impl AddAssign<&SurdSum> for SurdSum {
    fn add_assign(&mut self, rhs: &SurdSum) {
        for (f, c) in &rhs.terms {
            self.push(f.clone(), c.clone());
        }
    }
}

impl AddAssign for SurdSum {
    fn add_assign(&mut self, rhs: SurdSum) {
        for (f, c) in rhs.terms {
            self.push(f, c);
        }
    }
}

impl SubAssign<&SurdSum> for SurdSum {
    fn sub_assign(&mut self, rhs: &SurdSum) {
        for (f, c) in &rhs.terms {
            self.push(f.clone(), -c);
        }
    }
}

impl<'a> Sub<&'a SurdSum> for &'a SurdSum {
    type Output = SurdSum;
    fn sub(self, rhs: &SurdSum) -> SurdSum {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for SurdSum {
    type Output = SurdSum;
    fn sub(mut self, rhs: SurdSum) -> SurdSum {
        self -= &rhs;
        self
    }
}

impl Neg for SurdSum {
    type Output = SurdSum;
    fn neg(self) -> SurdSum {
        SurdSum { terms: self.terms.into_iter().map(|(f, c)| (f, -c)).collect() }
    }
}

impl Neg for &SurdSum {
    type Output = SurdSum;
    fn neg(self) -> SurdSum {
        -self.clone()
    }
}

impl<'a> Mul<&'a SurdSum> for &'a SurdSum {
    type Output = SurdSum;
    fn mul(self, rhs: &SurdSum) -> SurdSum {
        let mut out = SurdSum::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let g = a.gcd(b);
                let rad = (a / &g) * (b / &g);
                out.push(rad, ca * cb * Rational::from_integer(big(&g)));
            }
        }
        out
    }
}

impl Mul for SurdSum {
    type Output = SurdSum;
    fn mul(self, rhs: SurdSum) -> SurdSum {
        &self * &rhs
    }
}

impl MulAssign<&SurdSum> for SurdSum {
    fn mul_assign(&mut self, rhs: &SurdSum) {
        *self = &*self * rhs;
    }
}

impl core::iter::Sum for SurdSum {
    fn sum<I: Iterator<Item = SurdSum>>(iter: I) -> SurdSum {
        let mut acc = SurdSum::zero();
        for x in iter {
            acc += x;
        }
        acc
    }
}
