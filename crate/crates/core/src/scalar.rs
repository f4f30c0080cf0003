//! Exact arithmetic in the real quadratic field Q(√6).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// An element `rat + irr·√6` with exact rational parts.
///
/// `BigRational` keeps both parts in lowest terms with a positive denominator,
/// so structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    rat: BigRational,
    irr: BigRational,
}

impl Scalar {
    pub fn new(rat: BigRational, irr: BigRational) -> Self {
        Scalar { rat, irr }
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    /// √6 itself.
    pub fn sqrt6() -> Self {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::new(BigRational::from_integer(n), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn rational(r: BigRational) -> Self {
        Scalar::new(r, BigRational::zero())
    }

    /// `(num/den)·√6`.
    pub fn sqrt6_ratio(num: i64, den: i64) -> Self {
        Scalar::new(
            BigRational::zero(),
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        )
    }

    pub fn rat(&self) -> &BigRational {
        &self.rat
    }

    pub fn irr(&self) -> &BigRational {
        &self.irr
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rat.is_one() && self.irr.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    /// The rational value, if the √6 part vanishes.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.rat.clone())
    }

    /// The value as an integer, if it is one.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_rational() && self.rat.is_integer() {
            self.rat.to_integer().to_i64()
        } else {
            None
        }
    }

    /// Galois conjugate `rat − irr·√6`.
    pub fn conjugate(&self) -> Scalar {
        Scalar::new(self.rat.clone(), -self.irr.clone())
    }

    /// Field norm `rat² − 6·irr²`; zero only for the zero element.
    pub fn norm(&self) -> BigRational {
        &self.rat * &self.rat - BigRational::from_integer(BigInt::from(6)) * &self.irr * &self.irr
    }

    /// Sign of the real embedding (√6 > 0).
    pub fn signum(&self) -> Ordering {
        let a = self.rat.signum();
        let b = self.irr.signum();
        let sa = cmp_zero(&a);
        let sb = cmp_zero(&b);
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // opposite signs: compare rat² with 6·irr²
            (sa, _) => match (&self.rat * &self.rat)
                .cmp(&(BigRational::from_integer(BigInt::from(6)) * &self.irr * &self.irr))
            {
                Ordering::Greater => sa,
                Ordering::Less => sa.reverse(),
                Ordering::Equal => Ordering::Equal,
            },
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Scalar::new(&self.rat / &n, -(&self.irr / &n)))
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut out = Scalar::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Approximate real value, for display and sanity checks only.
    pub fn to_f64(&self) -> f64 {
        self.rat.to_f64().unwrap_or(f64::NAN) + self.irr.to_f64().unwrap_or(f64::NAN) * 6f64.sqrt()
    }

    /// Generalized binomial coefficient `m(m−1)⋯(m−j+1)/j!`.
    pub fn binomial(m: &Scalar, j: u32) -> Scalar {
        let mut num = Scalar::one();
        for i in 0..j {
            num = &num * &(m - &Scalar::from_int(i as i64));
        }
        &num / &Scalar::from_bigint(factorial(j))
    }

    /// Rising factorial `m(m+1)⋯(m+k−1)`.
    pub fn rising(m: &Scalar, k: u32) -> Scalar {
        let mut out = Scalar::one();
        for i in 0..k {
            out = &out * &(m + &Scalar::from_int(i as i64));
        }
        out
    }
}

fn cmp_zero(x: &BigRational) -> Ordering {
    if x.is_positive() {
        Ordering::Greater
    } else if x.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Integer binomial `n choose k` for any integer `n` (falling factorial over k!).
pub fn int_binomial(n: i64, k: u32) -> BigInt {
    let mut num = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(n - i);
    }
    num / factorial(k)
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::rational(r)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $tr<&'b Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| Scalar::new(&a.rat + &b.rat, &a.irr + &b.irr));
forward_binop!(Sub, sub, |a, b| Scalar::new(&a.rat - &b.rat, &a.irr - &b.irr));
forward_binop!(Mul, mul, |a, b| {
    if a.irr.is_zero() && b.irr.is_zero() {
        return Scalar::new(&a.rat * &b.rat, BigRational::zero());
    }
    let six = BigRational::from_integer(BigInt::from(6));
    Scalar::new(
        &a.rat * &b.rat + six * &a.irr * &b.irr,
        &a.rat * &b.irr + &a.irr * &b.rat,
    )
});
forward_binop!(Div, div, |a, b| {
    let inv = b.inverse().expect("division by zero in Q(sqrt6)");
    a * &inv
});

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.rat, -self.irr)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.rat.clone(), -self.irr.clone())
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.rat += &rhs.rat;
        self.irr += &rhs.irr;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.rat -= &rhs.rat;
        self.irr -= &rhs.irr;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn sqrt6_part(r: &BigRational) -> String {
    if r.is_one() {
        "sqrt6".into()
    } else {
        format!("{}*sqrt6", fmt_rat(r))
    }
}

impl Scalar {
    /// Canonical literal text: `p/q`, `p/q*sqrt6`, or `p/q+r/s*sqrt6`.
    ///
    /// The two-part form is not parenthesised; callers embedding it in a
    /// larger expression wrap it themselves.
    pub fn to_literal(&self) -> String {
        match (self.rat.is_zero(), self.irr.is_zero()) {
            (_, true) => fmt_rat(&self.rat),
            (true, false) if self.irr.is_negative() => format!("-{}", sqrt6_part(&-self.irr.clone())),
            (true, false) => sqrt6_part(&self.irr),
            (false, false) => {
                let sign = if self.irr.is_negative() { "-" } else { "+" };
                format!("{}{}{}", fmt_rat(&self.rat), sign, sqrt6_part(&self.irr.abs()))
            }
        }
    }

    /// Whether the literal needs parentheses when used as a coefficient.
    pub fn is_compound(&self) -> bool {
        !self.rat.is_zero() && !self.irr.is_zero()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self.to_literal())
    }
}

fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("malformed rational literal '{s}'"));
    if s.is_empty() {
        return Err(bad());
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::InvalidInput(format!("zero denominator in '{s}'")));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Parses one signed summand such as `-3/2`, `sqrt6`, `2*sqrt6`, `1/9sqrt6`.
fn parse_summand(s: &str) -> Result<Scalar, Error> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b.to_string()),
        None => (false, t.strip_prefix('+').unwrap_or(&t).to_string()),
    };
    let value = if let Some(coef) = body.strip_suffix("sqrt6") {
        let coef = coef.strip_suffix('*').unwrap_or(coef);
        let r = if coef.is_empty() { BigRational::one() } else { parse_rational(coef)? };
        Scalar::new(BigRational::zero(), r)
    } else {
        Scalar::rational(parse_rational(&body)?)
    };
    Ok(if neg { -value } else { value })
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts the scalar literal grammar: `signedRat ['*'] ['sqrt6']`
    /// optionally followed by a second signed summand, and optionally wrapped
    /// in parentheses.
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.starts_with('(') && t.ends_with(')') {
            t = t[1..t.len() - 1].to_string();
        }
        if t.is_empty() {
            return Err(Error::InvalidInput("empty scalar literal".into()));
        }
        // split at a sign that is not the leading one
        let bytes = t.as_bytes();
        let split = (1..bytes.len()).find(|&i| {
            (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/' && bytes[i - 1] != b'*'
        });
        match split {
            None => parse_summand(&t),
            Some(i) => {
                let a = parse_summand(&t[..i])?;
                let b = parse_summand(&t[i..])?;
                Ok(a + b)
            }
        }
    }
}

/// JSON form `{"rat": "p/q", "irr": "p/q"}`, `irr` omitted when zero.
#[derive(Serialize, Deserialize)]
struct ScalarJson {
    rat: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    irr: Option<String>,
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ScalarJson {
            rat: fmt_rat(&self.rat),
            irr: (!self.irr.is_zero()).then(|| fmt_rat(&self.irr)),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    /// Accepts either the object form or a bare literal string.
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Obj(ScalarJson),
            Lit(String),
            Int(i64),
        }
        match Repr::deserialize(de)? {
            Repr::Obj(o) => {
                let rat = parse_rational(&o.rat).map_err(serde::de::Error::custom)?;
                let irr = match o.irr {
                    Some(s) => parse_rational(&s).map_err(serde::de::Error::custom)?,
                    None => BigRational::zero(),
                };
                Ok(Scalar::new(rat, irr))
            }
            Repr::Lit(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(Scalar::from_int(n)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt6_squares_to_six() {
        assert_eq!(Scalar::sqrt6() * Scalar::sqrt6(), Scalar::from_int(6));
    }

    #[test]
    fn inverse_and_division() {
        let x: Scalar = "1+2*sqrt6".parse().unwrap();
        assert_eq!(&x * &x.inverse().unwrap(), Scalar::one());
        assert!(Scalar::zero().inverse().is_none());
        // √(2/27) = √6/9
        let s = Scalar::sqrt6_ratio(1, 9);
        assert_eq!(&s * &s, Scalar::from_ratio(2, 27));
    }

    #[test]
    fn literal_round_trip() {
        for lit in ["0", "-3/2", "1/9*sqrt6", "-2/3*sqrt6", "1/2-1/6*sqrt6", "7+sqrt6"] {
            let x: Scalar = lit.parse().unwrap();
            let y: Scalar = x.to_literal().parse().unwrap();
            assert_eq!(x, y, "{lit}");
        }
        assert_eq!("sqrt6".parse::<Scalar>().unwrap(), Scalar::sqrt6());
        assert_eq!("(1/2 + 3 sqrt6)".parse::<Scalar>().unwrap().irr(), &BigRational::from_integer(3.into()));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn sign_of_real_embedding() {
        // 5 - 2√6 ≈ 0.101
        assert!("5-2*sqrt6".parse::<Scalar>().unwrap().is_positive());
        assert!("-5+2*sqrt6".parse::<Scalar>().unwrap().is_negative());
        assert!("2-sqrt6".parse::<Scalar>().unwrap().is_negative());
        assert_eq!(Scalar::zero().signum(), Ordering::Equal);
    }

    #[test]
    fn json_forms() {
        let x: Scalar = "1/2-1/3*sqrt6".parse().unwrap();
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(j, r#"{"rat":"1/2","irr":"-1/3"}"#);
        assert_eq!(serde_json::from_str::<Scalar>(&j).unwrap(), x);
        assert_eq!(serde_json::to_string(&Scalar::from_int(-1)).unwrap(), r#"{"rat":"-1"}"#);
        assert_eq!(serde_json::from_str::<Scalar>("\"-1\"").unwrap(), Scalar::from_int(-1));
    }

    #[test]
    fn binomials() {
        assert_eq!(int_binomial(-3, 2), BigInt::from(6));
        assert_eq!(int_binomial(5, 2), BigInt::from(10));
        assert_eq!(int_binomial(2, 3), BigInt::from(0));
        assert_eq!(Scalar::binomial(&Scalar::from_ratio(1, 2), 2), Scalar::from_ratio(-1, 8));
        assert_eq!(Scalar::rising(&Scalar::from_int(2), 3), Scalar::from_int(24));
    }
}
