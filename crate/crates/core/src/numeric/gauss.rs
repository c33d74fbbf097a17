use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// An element `re + im·i` of the Gaussian rationals.
///
/// Both parts are kept in lowest terms by `BigRational`, so structural
/// equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        GaussRat::new(BigRational::new(n.into(), d.into()), BigRational::zero())
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        GaussRat::new(
            BigRational::new(re.0.into(), re.1.into()),
            BigRational::new(im.0.into(), im.1.into()),
        )
    }

    pub fn i() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::one())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    /// `re² + im²`.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sq();
        Some(GaussRat::new(&self.re / &n, -(&self.im / &n)))
    }

    /// The value as an integer, if it is one.
    pub fn to_i64(&self) -> Option<i64> {
        if !self.im.is_zero() || !self.re.is_integer() {
            return None;
        }
        self.re.to_integer().to_i64()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Least common denominator of both parts.
    pub fn denom_lcm(&self) -> BigInt {
        num_integer::Integer::lcm(self.re.denom(), self.im.denom())
    }

    /// Lexicographic order on `(re, im)`, used wherever a canonical order of
    /// eigenvalues or coefficients is needed.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

impl PartialOrd for GaussRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GaussRat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_cmp(other)
    }
}

impl Zero for GaussRat {
    fn zero() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRat {
    fn one() -> Self {
        GaussRat::from_int(1)
    }
}

impl From<i64> for GaussRat {
    fn from(n: i64) -> Self {
        GaussRat::from_int(n)
    }
}

impl From<BigRational> for GaussRat {
    fn from(r: BigRational) -> Self {
        GaussRat::new(r, BigRational::zero())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a GaussRat> for &'a GaussRat {
            type Output = GaussRat;
            fn $m(self, rhs: &'a GaussRat) -> GaussRat {
                let f: fn(&GaussRat, &GaussRat) -> GaussRat = $body;
                f(self, rhs)
            }
        }
        impl $tr<GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $m(self, rhs: GaussRat) -> GaussRat {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $m(self, rhs: &'a GaussRat) -> GaussRat {
                (&self).$m(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| GaussRat::new(&a.re + &b.re, &a.im + &b.im));
forward_binop!(Sub, sub, |a, b| GaussRat::new(&a.re - &b.re, &a.im - &b.im));
forward_binop!(Mul, mul, |a, b| {
    if a.im.is_zero() && b.im.is_zero() {
        return GaussRat::new(&a.re * &b.re, BigRational::zero());
    }
    GaussRat::new(
        &a.re * &b.re - &a.im * &b.im,
        &a.re * &b.im + &a.im * &b.re,
    )
});
forward_binop!(Div, div, |a, b| {
    let inv = b.inv().expect("division by zero in GaussRat");
    a * &inv
});

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re, -self.im)
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, rhs: &GaussRat) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussRat> for GaussRat {
    fn sub_assign(&mut self, rhs: &GaussRat) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussRat> for GaussRat {
    fn mul_assign(&mut self, rhs: &GaussRat) {
        *self = &*self * rhs;
    }
}

fn write_rat(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write_rat(f, &self.re);
        }
        if !self.re.is_zero() {
            write_rat(f, &self.re)?;
            if self.im.is_positive() {
                f.write_str("+")?;
            } else {
                f.write_str("-")?;
                write_rat(f, &-self.im.clone())?;
                return f.write_str("i");
            }
        }
        write_rat(f, &self.im)?;
        f.write_str("i")
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_unsigned_rational(s: &str) -> Option<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(n) {
        return None;
    }
    let num: BigInt = n.parse().ok()?;
    let den: BigInt = match d {
        Some(d) if digits(d) => d.parse().ok()?,
        Some(_) => return None,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.strip_prefix('-') {
        Some(rest) => parse_unsigned_rational(rest).map(|r| -r),
        None => parse_unsigned_rational(s),
    }
}

/// Unsigned coefficient of `i`; an empty coefficient means 1.
fn parse_coefficient(s: &str) -> Option<BigRational> {
    if s.is_empty() {
        Some(BigRational::one())
    } else {
        parse_unsigned_rational(s)
    }
}

/// Parses the textual grammar
///
/// ```text
/// rational ::= ['-'] digits ['/' digits]
/// gauss    ::= rational | [rational] ('+'|'-') rational 'i' | rational 'i'
/// ```
///
/// A bare `i` (as in `i`, `-i`, `1+i`) is accepted with coefficient 1.
pub fn gauss_parse(s: &str) -> Result<GaussRat, Error> {
    let bad = || Error::Parse(s.to_string());
    let t = s.trim();
    let Some(body) = t.strip_suffix('i') else {
        return parse_rational(t).map(GaussRat::from).ok_or_else(bad);
    };
    // The last sign that is not in leading position separates the parts.
    let split = body
        .char_indices()
        .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
        .map(|(k, _)| k)
        .last();
    match split {
        Some(k) => {
            let head = &body[..k];
            let re = if head.is_empty() {
                BigRational::zero()
            } else {
                parse_rational(head).ok_or_else(bad)?
            };
            let im = parse_coefficient(&body[k + 1..]).ok_or_else(bad)?;
            let im = if body.as_bytes()[k] == b'-' { -im } else { im };
            Ok(GaussRat::new(re, im))
        }
        None => {
            let im = match (body.strip_prefix('+'), body.strip_prefix('-')) {
                (Some(rest), _) => parse_coefficient(rest),
                (_, Some(rest)) => parse_coefficient(rest).map(|r| -r),
                _ => parse_coefficient(body),
            }
            .ok_or_else(bad)?;
            Ok(GaussRat::new(BigRational::zero(), im))
        }
    }
}

impl FromStr for GaussRat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        gauss_parse(s)
    }
}

impl GaussRat {
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussRat {
        gauss_parse(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(g("3/2"), GaussRat::from_frac(3, 2));
        assert_eq!(g("-1/3+2i"), GaussRat::from_parts((-1, 3), (2, 1)));
        assert!(g("0i").is_zero());
        assert_eq!(g("2i"), GaussRat::from_parts((0, 1), (2, 1)));
        assert_eq!(g("-2i"), GaussRat::from_parts((0, 1), (-2, 1)));
        assert_eq!(g("1-5/7i"), GaussRat::from_parts((1, 1), (-5, 7)));
        assert_eq!(g("6/4"), GaussRat::from_frac(3, 2));
        assert_eq!(g("i"), GaussRat::i());
        assert_eq!(g("-i"), -GaussRat::i());
        assert_eq!(g("3/4-i"), GaussRat::from_parts((3, 4), (-1, 1)));
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "1/0", "1/-2", "1--2i", "a", "+-i", "3/", "/3", "1.5", "2+3", "ii"] {
            assert!(gauss_parse(s).is_err(), "{s}");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "3/2", "-1/3+2i", "1-5/7i", "2i", "-2i", "-7"] {
            assert_eq!(g(s).to_string(), s);
        }
        assert_eq!(g("0i").to_string(), "0");
    }

    #[test]
    fn field_arithmetic() {
        let a = g("1+2i");
        let b = g("3-1/2i");
        assert_eq!(&a * &b, g("4+11/2i"));
        assert_eq!(&(&a / &b) * &b, a);
        assert_eq!(&a * &a.inv().unwrap(), GaussRat::one());
        assert!(GaussRat::zero().inv().is_none());
        assert_eq!(&GaussRat::i() * &GaussRat::i(), GaussRat::from_int(-1));
    }
}
