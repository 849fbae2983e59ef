//! Exact elements of ℚ or a real quadratic field ℚ(√D).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The ambient scalar field of a session.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    /// ℚ(√D), D square-free and at least 2.
    Quadratic(u32),
}

impl Field {
    pub fn quadratic(d: u32) -> Result<Self> {
        if d < 2 || !is_square_free(d) {
            return Err(Error::domain(format!("sqrt({d}) does not define a quadratic field")));
        }
        Ok(Field::Quadratic(d))
    }

    pub fn root(self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Quadratic(d) => d,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Quadratic(d) => write!(f, "Qsqrt:{d}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rational);
        }
        if let Some(d) = s.strip_prefix("Qsqrt:") {
            let d: u32 = d
                .parse()
                .map_err(|_| Error::domain(format!("bad field radicand `{d}`")))?;
            return Field::quadratic(d);
        }
        Err(Error::domain(format!("unknown field `{s}` (expected Q or Qsqrt:D)")))
    }
}

fn is_square_free(d: u32) -> bool {
    let mut p = 2u32;
    while p * p <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

/// `rational + radical·√root`. Canonical: `root == 0` iff `radical == 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    rational: BigRational,
    radical: BigRational,
    root: u32,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::from_rational(BigRational::from_integer(n))
    }

    pub fn frac(num: i64, den: i64) -> Self {
        Scalar::from_rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar {
            rational: q,
            radical: BigRational::zero(),
            root: 0,
        }
    }

    /// `rational + radical·√d`; `d` must be square-free (checked by [`Field::quadratic`]).
    pub fn quadratic(rational: BigRational, radical: BigRational, d: u32) -> Self {
        if radical.is_zero() || d == 0 {
            return Scalar::from_rational(rational);
        }
        Scalar {
            rational,
            radical,
            root: d,
        }
    }

    /// √d as a scalar.
    pub fn sqrt_of(d: u32) -> Self {
        Scalar::quadratic(BigRational::zero(), BigRational::one(), d)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.radical
    }

    /// Radicand, or 0 for a rational scalar.
    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn is_rational(&self) -> bool {
        self.root == 0
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rational)
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.radical.is_zero()
    }

    /// Whether this scalar can live in `field`.
    pub fn fits(&self, field: Field) -> bool {
        self.root == 0 || self.root == field.root()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.rational.is_integer()
    }

    pub fn to_bigint(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.rational.to_integer())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_bigint().and_then(|n| n.to_i64())
    }

    /// Exact sign of `p + q√D`.
    pub fn signum(&self) -> Ordering {
        let sp = sign_of(&self.rational);
        let sq = sign_of(&self.radical);
        if sq == Ordering::Equal {
            return sp;
        }
        if sp == Ordering::Equal || sp == sq {
            return sq;
        }
        // opposite signs: compare p² against q²·D
        let p2 = &self.rational * &self.rational;
        let q2d = &self.radical * &self.radical * BigRational::from_integer(self.root.into());
        if p2 > q2d {
            sp
        } else {
            sq
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn conjugate(&self) -> Scalar {
        Scalar::quadratic(self.rational.clone(), -&self.radical, self.root)
    }

    /// `p² − q²·D`, always rational.
    pub fn norm(&self) -> BigRational {
        &self.rational * &self.rational
            - &self.radical * &self.radical * BigRational::from_integer(self.root.into())
    }

    pub fn recip(&self) -> Scalar {
        assert!(!self.is_zero(), "division by zero scalar");
        let n = self.norm();
        let c = self.conjugate();
        Scalar::quadratic(&c.rational / &n, &c.radical / &n, self.root)
    }

    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.rational.floor().to_integer();
        }
        let base = self.rational.floor().to_integer() + floor_radical(&self.radical, self.root);
        let next = Scalar::from_bigint(&base + BigInt::one());
        if next <= *self {
            base + 1
        } else {
            base
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Float approximation, for display only.
    pub fn to_f64(&self) -> f64 {
        let p = self.rational.to_f64().unwrap_or(f64::NAN);
        if self.is_rational() {
            return p;
        }
        p + self.radical.to_f64().unwrap_or(f64::NAN) * f64::from(self.root).sqrt()
    }

    fn unify_root(&self, other: &Scalar) -> u32 {
        match (self.root, other.root) {
            (0, r) | (r, 0) => r,
            (a, b) if a == b => a,
            (a, b) => panic!("mixed scalar fields: sqrt({a}) and sqrt({b})"),
        }
    }

    /// Arithmetic that reports a field mismatch instead of panicking.
    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        check_roots(self, other)?;
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        check_roots(self, other)?;
        Ok(self * other)
    }
}

fn check_roots(a: &Scalar, b: &Scalar) -> Result<()> {
    if a.root != 0 && b.root != 0 && a.root != b.root {
        return Err(Error::ModeMismatch(format!(
            "sqrt({}) and sqrt({})",
            a.root, b.root
        )));
    }
    Ok(())
}

fn sign_of(q: &BigRational) -> Ordering {
    match q.numer().sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

/// floor(q·√d) for rational q.
fn floor_radical(q: &BigRational, d: u32) -> BigInt {
    let a = q.numer();
    let b = q.denom();
    let n = a * a * BigInt::from(d);
    let s = n.sqrt();
    let exact = &s * &s == n;
    if a.is_negative() {
        // floor(-√n / b) = -ceil(√n / b) = -ceil(ceil(√n) / b)
        let c = if exact { s } else { s + 1 };
        -c.div_ceil(b)
    } else {
        s.div_floor(b)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::from_rational(q)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::from_bigint(n)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            rational: -&self.rational,
            radical: -&self.radical,
            root: self.root,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let root = self.unify_root(rhs);
        Scalar::quadratic(
            &self.rational + &rhs.rational,
            &self.radical + &rhs.radical,
            root,
        )
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let root = self.unify_root(rhs);
        Scalar::quadratic(
            &self.rational - &rhs.rational,
            &self.radical - &rhs.radical,
            root,
        )
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.root == 0 && rhs.root == 0 {
            return Scalar::from_rational(&self.rational * &rhs.rational);
        }
        let root = self.unify_root(rhs);
        let d = BigRational::from_integer(root.into());
        Scalar::quadratic(
            &self.rational * &rhs.rational + &self.radical * &rhs.radical * d,
            &self.rational * &rhs.radical + &self.radical * &rhs.rational,
            root,
        )
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        if self.root == 0 && rhs.root == 0 {
            assert!(!rhs.rational.is_zero(), "division by zero scalar");
            return Scalar::from_rational(&self.rational / &rhs.rational);
        }
        self * &rhs.recip()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Canonical literal: `p/q`, `sqrt(D)`, `-3/2*sqrt(D)`, `1/2+sqrt(D)`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", fmt_rational(&self.rational));
        }
        let mut out = String::new();
        if !self.rational.is_zero() {
            out.push_str(&fmt_rational(&self.rational));
        }
        let q = &self.radical;
        if q.is_negative() {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let aq = q.abs();
        if !aq.is_one() {
            out.push_str(&fmt_rational(&aq));
            out.push('*');
        }
        out.push_str(&format!("sqrt({})", self.root));
        write!(f, "{out}")
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::domain(format!("bad rational literal `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Parses one signed term: `p/q`, `sqrt(D)` or `p/q*sqrt(D)` (sign already stripped).
fn parse_term(s: &str) -> Result<(BigRational, Option<(BigRational, u32)>)> {
    let s = s.trim();
    if let Some(pos) = s.find("sqrt(") {
        let coeff = s[..pos].trim().trim_end_matches('*').trim();
        let inner = s[pos + 5..]
            .strip_suffix(')')
            .ok_or_else(|| Error::domain(format!("unclosed sqrt in `{s}`")))?;
        let d: u32 = inner
            .trim()
            .parse()
            .map_err(|_| Error::domain(format!("bad radicand `{inner}`")))?;
        let c = if coeff.is_empty() {
            BigRational::one()
        } else {
            parse_rational(coeff)?
        };
        Ok((BigRational::zero(), Some((c, d))))
    } else {
        Ok((parse_rational(s)?, None))
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `p/q`, `p/q+r/s*sqrt(D)`, and the shorthand forms printed by `Display`.
    fn from_str(src: &str) -> Result<Self> {
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::domain("empty scalar literal"));
        }
        // split into signed terms at top-level + / - (not the leading sign)
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        let mut depth = 0;
        for i in 0..bytes.len() {
            match bytes[i] {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if i > start && depth == 0 && bytes[i - 1] != b'/' => {
                    terms.push(&s[start..i]);
                    start = i;
                }
                _ => {}
            }
        }
        terms.push(&s[start..]);
        if terms.len() > 2 {
            return Err(Error::domain(format!("bad scalar literal `{src}`")));
        }
        let mut rational = BigRational::zero();
        let mut radical = BigRational::zero();
        let mut root = 0u32;
        let mut seen_rat = false;
        for t in terms {
            let (neg, body) = match t.as_bytes()[0] {
                b'-' => (true, &t[1..]),
                b'+' => (false, &t[1..]),
                _ => (false, t),
            };
            let (r, q) = parse_term(body)?;
            match q {
                Some((c, d)) => {
                    if root != 0 {
                        return Err(Error::domain(format!("two radical terms in `{src}`")));
                    }
                    let field = Field::quadratic(d)?;
                    root = field.root();
                    radical = if neg { -c } else { c };
                }
                None => {
                    if seen_rat {
                        return Err(Error::domain(format!("two rational terms in `{src}`")));
                    }
                    seen_rat = true;
                    rational = if neg { -r } else { r };
                }
            }
        }
        Ok(Scalar::quadratic(rational, radical, root))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        for lit in ["0", "3", "-1/2", "sqrt(2)", "-sqrt(2)", "1/2*sqrt(2)", "1+sqrt(3)", "-1/3-5/2*sqrt(7)"] {
            assert_eq!(s(lit).to_string(), lit);
        }
        assert_eq!(s("2/4"), s("1/2"));
        assert_eq!(s("1/2 + 0*sqrt(2)"), s("1/2"));
        assert_eq!(s("1/2+1/1*sqrt(2)").to_string(), "1/2+sqrt(2)");
        assert!("sqrt(4)".parse::<Scalar>().is_err());
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("".parse::<Scalar>().is_err());
    }

    #[test]
    fn signs() {
        assert!(s("1-sqrt(2)").is_negative());
        assert!(s("-1+sqrt(2)").is_positive());
        assert!(s("3/2-sqrt(2)").is_positive());
        assert!(s("7/5-sqrt(2)").is_negative());
        assert_eq!(s("0").signum(), Ordering::Equal);
    }

    #[test]
    fn field_ops() {
        let r2 = Scalar::sqrt_of(2);
        assert_eq!(&r2 * &r2, Scalar::from_int(2));
        let x = s("1+sqrt(2)");
        assert_eq!(&x * &x.recip(), Scalar::one());
        assert_eq!(&x / &x, Scalar::one());
        assert_eq!((&x - &x).root(), 0);
    }

    #[test]
    fn floors() {
        assert_eq!(s("7/2").floor(), BigInt::from(3));
        assert_eq!(s("-7/2").floor(), BigInt::from(-4));
        assert_eq!(s("sqrt(2)").floor(), BigInt::from(1));
        assert_eq!(s("-sqrt(2)").floor(), BigInt::from(-2));
        assert_eq!(s("3-2*sqrt(2)").floor(), BigInt::from(0));
        assert_eq!(s("1/2*sqrt(2)").ceil(), BigInt::from(1));
    }

    #[test]
    fn checked_mismatch() {
        let a = Scalar::sqrt_of(2);
        let b = Scalar::sqrt_of(3);
        assert!(matches!(a.checked_add(&b), Err(Error::ModeMismatch(_))));
        assert!(a.checked_add(&Scalar::one()).is_ok());
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (-20i64..20, 1i64..6, -20i64..20, 1i64..6).prop_map(|(a, b, c, d)| {
            Scalar::quadratic(
                BigRational::new(a.into(), b.into()),
                BigRational::new(c.into(), d.into()),
                2,
            )
        })
    }

    proptest! {
        #[test]
        fn order_matches_float(x in arb_scalar(), y in arb_scalar()) {
            let fx = x.to_f64();
            let fy = y.to_f64();
            if (fx - fy).abs() > 1e-9 {
                prop_assert_eq!(x < y, fx < fy);
            }
            prop_assert_eq!(x.cmp(&y), (&x - &y).signum());
            prop_assert_eq!(x.cmp(&y), y.cmp(&x).reverse());
        }

        #[test]
        fn order_transitive(x in arb_scalar(), y in arb_scalar(), z in arb_scalar()) {
            if x <= y && y <= z {
                prop_assert!(x <= z);
            }
        }

        #[test]
        fn display_roundtrip(x in arb_scalar()) {
            prop_assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x);
        }

        #[test]
        fn floor_bounds(x in arb_scalar()) {
            let f = Scalar::from_bigint(x.floor());
            prop_assert!(f <= x);
            prop_assert!(x < &f + &Scalar::one());
        }
    }
}
