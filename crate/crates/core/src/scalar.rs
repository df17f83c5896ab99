//! Exact scalars in Q(i).
//!
//! Rational parts use a machine-word fast path and promote to big integers
//! on overflow, so small structure constants never allocate.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational number. `Big` is only used when the value does not fit
/// the word-sized representation, so derived equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Q(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(Ratio<i64>),
    Big(BigRational),
}

impl Q {
    pub const fn zero() -> Q {
        Q(Repr::Small(Ratio::new_raw(0, 1)))
    }

    pub const fn one() -> Q {
        Q(Repr::Small(Ratio::new_raw(1, 1)))
    }

    pub fn from_int(n: i64) -> Q {
        Q::small(Ratio::from_integer(n))
    }

    /// `n / d`; panics if `d == 0`.
    pub fn frac(n: i64, d: i64) -> Q {
        assert!(d != 0, "zero denominator");
        Q::from_big(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn small(r: Ratio<i64>) -> Q {
        // i64::MIN cannot be negated, keep it out of the fast path.
        if *r.numer() == i64::MIN || *r.denom() == i64::MIN {
            Q(Repr::Big(BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))))
        } else {
            Q(Repr::Small(r))
        }
    }

    pub fn from_big(r: BigRational) -> Q {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => {
                Q(Repr::Small(Ratio::new_raw(n, d)))
            }
            _ => Q(Repr::Big(r)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_zero(),
            Repr::Big(b) => b.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_one(),
            Repr::Big(_) => false,
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_negative(),
            Repr::Big(b) => b.is_negative(),
        }
    }

    fn binop(
        &self,
        rhs: &Q,
        small: impl Fn(&Ratio<i64>, &Ratio<i64>) -> Option<Ratio<i64>>,
        big: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> Q {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(r) = small(a, b) {
                return Q::small(r);
            }
        }
        Q::from_big(big(&self.to_big(), &rhs.to_big()))
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Q> {
        if self.is_zero() {
            return None;
        }
        Some(match &self.0 {
            Repr::Small(r) => Q::small(r.recip()),
            Repr::Big(b) => Q::from_big(b.recip()),
        })
    }

    pub fn checked_div(&self, rhs: &Q) -> Option<Q> {
        if rhs.is_zero() {
            return None;
        }
        Some(self.binop(rhs, |a, b| a.checked_div(b), |a, b| a / b))
    }
}

impl Default for Q {
    fn default() -> Q {
        Q::zero()
    }
}

impl PartialOrd for Q {
    fn partial_cmp(&self, other: &Q) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Q {
    fn cmp(&self, other: &Q) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl<'a> Add<&'a Q> for &'a Q {
    type Output = Q;
    fn add(self, rhs: &Q) -> Q {
        self.binop(rhs, |a, b| a.checked_add(b), |a, b| a + b)
    }
}

impl<'a> Sub<&'a Q> for &'a Q {
    type Output = Q;
    fn sub(self, rhs: &Q) -> Q {
        self.binop(rhs, |a, b| a.checked_sub(b), |a, b| a - b)
    }
}

impl<'a> Mul<&'a Q> for &'a Q {
    type Output = Q;
    fn mul(self, rhs: &Q) -> Q {
        if self.is_zero() || rhs.is_zero() {
            return Q::zero();
        }
        self.binop(rhs, |a, b| a.checked_mul(b), |a, b| a * b)
    }
}

impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        match &self.0 {
            Repr::Small(r) => Q::small(-r),
            Repr::Big(b) => Q::from_big(-b),
        }
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Repr::Small(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Repr::Big(b) if b.denom().is_one() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `[+-]digits[/digits]`. Decimal points and exponents are rejected.
fn parse_rational(s: &str) -> Result<Q, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = num.strip_prefix(['+', '-']).unwrap_or(num);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("malformed numerator {num:?}"));
    }
    let n: BigInt = num.trim_start_matches('+').parse().map_err(|e| format!("{e}"))?;
    let d: BigInt = match den {
        None => BigInt::one(),
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return Err(format!("malformed denominator {d:?}"));
            }
            d.parse().map_err(|e| format!("{e}"))?
        }
    };
    if d.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(Q::from_big(BigRational::new(n, d)))
}

/// Element of Q(i).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    pub re: Q,
    pub im: Q,
}

impl Scalar {
    pub const fn zero() -> Scalar {
        Scalar { re: Q::zero(), im: Q::zero() }
    }

    pub const fn one() -> Scalar {
        Scalar { re: Q::one(), im: Q::zero() }
    }

    pub fn i() -> Scalar {
        Scalar { re: Q::zero(), im: Q::one() }
    }

    pub fn new(re: Q, im: Q) -> Scalar {
        Scalar { re, im }
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar { re: Q::from_int(n), im: Q::zero() }
    }

    pub fn frac(n: i64, d: i64) -> Scalar {
        Scalar { re: Q::frac(n, d), im: Q::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Scalar {
        Scalar { re: self.re.clone(), im: -&self.im }
    }

    /// `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.im.is_zero() {
            return self.re.inv().map(|re| Scalar { re, im: Q::zero() });
        }
        let norm = &(&self.re * &self.re) + &(&self.im * &self.im);
        let inv_norm = norm.inv()?;
        Some(Scalar { re: &self.re * &inv_norm, im: -&(&self.im * &inv_norm) })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, Error> {
        let inv = rhs.inv().ok_or(Error::DivisionByZero)?;
        Ok(self * &inv)
    }

    /// `self += a * b` without intermediate clones where possible.
    pub fn add_mul(&mut self, a: &Scalar, b: &Scalar) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let p = a * b;
        *self += &p;
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar { re: &self.re * &rhs.re, im: Q::zero() };
        }
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        Scalar { re, im }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -&self.re, im: -&self.im }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re = &self.re + &rhs.re;
        if !rhs.im.is_zero() {
            self.im = &self.im + &rhs.im;
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re = &self.re - &rhs.re;
        if !rhs.im.is_zero() {
            self.im = &self.im - &rhs.im;
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::from_int(n)
    }
}

/// Canonical text form: `a/b`, `c/d i`, or `a/b+c/d i` (also `-`).
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{} i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{} i", self.re, -&self.im)
        } else {
            write!(f, "{}+{} i", self.re, self.im)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(text: &str) -> Result<Scalar, Error> {
        let bad = |why: String| Error::Parse(format!("scalar {text:?}: {why}"));
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad("empty".into()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Scalar { re: parse_rational(&s).map_err(bad)?, im: Q::zero() });
        };
        // Split at the last sign that is not the leading one.
        let split = body
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k)
            .next_back();
        let (re_txt, im_txt) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let re = if re_txt.is_empty() { Q::zero() } else { parse_rational(re_txt).map_err(bad)? };
        let im = match im_txt {
            "" | "+" => Q::one(),
            "-" => -&Q::one(),
            t => parse_rational(t).map_err(bad)?,
        };
        Ok(Scalar { re, im })
    }
}
