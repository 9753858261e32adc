//! Exact arithmetic in `Q(√q)` plus a complex floating-point fallback.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Largest squarefree `d` and `s` with `n = s^2 d`.
pub fn squarefree_split(n: u64) -> (u64, u64) {
    let mut d = 1u64;
    let mut s = 1u64;
    for (r, e) in crate::gf::factorize(n) {
        s *= r.pow(e / 2);
        if e % 2 == 1 {
            d *= r;
        }
    }
    (s, d)
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

/// `a + b·√d` with `a, b` rational and `d` squarefree; `d = 1` forces `b = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QScalar {
    a: BigRational,
    b: BigRational,
    d: u64,
}

impl QScalar {
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Self {
        let (s, d) = squarefree_split(d);
        let b = b * BigRational::from_integer(BigInt::from(s));
        Self { a, b, d }.normalize()
    }

    fn normalize(mut self) -> Self {
        if self.d == 1 {
            self.a = &self.a + &self.b;
            self.b = BigRational::zero();
        }
        if self.b.is_zero() {
            self.d = 1;
        }
        self
    }

    pub fn rational(a: BigRational) -> Self {
        Self {
            a,
            b: BigRational::zero(),
            d: 1,
        }
    }
    pub fn from_int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }
    pub fn from_ratio(n: i64, m: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(n), BigInt::from(m)))
    }
    pub fn zero() -> Self {
        Self::from_int(0)
    }
    pub fn one() -> Self {
        Self::from_int(1)
    }
    /// `√q`.
    pub fn sqrt_of(q: u64) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), q)
    }
    /// `(√q)^k` for any integer `k`.
    pub fn sqrt_power(q: u64, k: i64) -> Self {
        Self::sqrt_of(q).powi(k)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }
    pub fn radical_part(&self) -> &BigRational {
        &self.b
    }
    /// Squarefree radicand (1 when the value is rational).
    pub fn radicand(&self) -> u64 {
        self.d
    }
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn common_d(&self, other: &Self) -> u64 {
        match (self.d, other.d) {
            (1, d) | (d, 1) => d,
            (d, e) if d == e => d,
            (d, e) => panic!("mixing Q(sqrt {d}) and Q(sqrt {e})"),
        }
    }

    /// Field norm `a^2 - d b^2`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(BigInt::from(self.d)) * &self.b * &self.b
    }

    pub fn conjugate(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conjugate();
        Some(Self {
            a: c.a / &n,
            b: c.b / &n,
            d: self.d,
        })
    }

    pub fn powi(&self, k: i64) -> Self {
        let base = if k < 0 {
            self.inverse().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut e = k.unsigned_abs();
        let mut result = Self::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        result
    }

    /// Exact square root inside `Q(√d)` (or `Q(√m)` for rational input), if any.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.b.is_zero() {
            if let Some(s) = rational_sqrt(&self.a) {
                return Some(Self::rational(s));
            }
            // a = t^2 m with m squarefree: √a = t √m.
            if self.a.is_negative() {
                return None;
            }
            let num = self.a.numer().to_u64()?;
            let den = self.a.denom().to_u64()?;
            let (s1, d1) = squarefree_split(num * den);
            let t = BigRational::new(BigInt::from(s1), BigInt::from(den));
            return Some(Self::new(BigRational::zero(), t, d1));
        }
        let disc = rational_sqrt(&self.norm())?;
        let two = BigRational::from_integer(BigInt::from(2));
        for sign in [1i32, -1] {
            let s2 = if sign > 0 {
                (&self.a + &disc) / &two
            } else {
                (&self.a - &disc) / &two
            };
            if let Some(s) = rational_sqrt(&s2) {
                if s.is_zero() {
                    continue;
                }
                let t = &self.b / (&two * &s);
                let cand = Self {
                    a: s,
                    b: t,
                    d: self.d,
                };
                if &cand * &cand == *self {
                    return Some(cand);
                }
            }
        }
        // b ≠ 0 rules out a purely radical root, since (t√d)^2 is rational.
        None
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // Opposite signs: compare a^2 with d b^2.
        let lhs = &self.a * &self.a;
        let rhs = BigRational::from_integer(BigInt::from(self.d)) * &self.b * &self.b;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64(), 0.0)
    }

    /// Coefficients `(x, y)` with value `x + y·√q`. Requires `q = s^2 d`.
    pub fn sqrtq_parts(&self, q: u64) -> (BigRational, BigRational) {
        let (s, d) = squarefree_split(q);
        if self.is_rational() {
            return (self.a.clone(), BigRational::zero());
        }
        assert_eq!(d, self.d, "value does not live in Q(sqrt {q})");
        (
            self.a.clone(),
            &self.b / BigRational::from_integer(BigInt::from(s)),
        )
    }

    pub fn from_sqrtq_parts(x: BigRational, y: BigRational, q: u64) -> Self {
        Self::new(x, y, q)
    }

    pub fn to_json(&self, q: u64) -> ExactJson {
        let (x, y) = self.sqrtq_parts(q);
        ExactJson {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
            sqrtq_num: y.numer().to_string(),
            sqrtq_den: y.denom().to_string(),
        }
    }
}

impl PartialOrd for QScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for QScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rat(&self.a));
        }
        let rad = if self.b.is_one() {
            format!("sqrt{}", self.d)
        } else if (-self.b.clone()).is_one() {
            format!("-sqrt{}", self.d)
        } else {
            format!("{}*sqrt{}", fmt_rat(&self.b), self.d)
        };
        if self.a.is_zero() {
            write!(f, "{rad}")
        } else if self.b.sign_is_negative() {
            write!(f, "{}{}", fmt_rat(&self.a), rad)
        } else {
            write!(f, "{}+{}", fmt_rat(&self.a), rad)
        }
    }
}

trait SignIsNegative {
    fn sign_is_negative(&self) -> bool;
}
impl SignIsNegative for BigRational {
    fn sign_is_negative(&self) -> bool {
        self.numer().sign() == Sign::Minus
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &QScalar {
    type Output = QScalar;
    fn add(self, rhs: &QScalar) -> QScalar {
        let d = self.common_d(rhs);
        QScalar {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            d,
        }
        .normalize()
    }
}
impl Sub for &QScalar {
    type Output = QScalar;
    fn sub(self, rhs: &QScalar) -> QScalar {
        self + &(-rhs)
    }
}
impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }
}
impl Mul for &QScalar {
    type Output = QScalar;
    fn mul(self, rhs: &QScalar) -> QScalar {
        let d = self.common_d(rhs);
        let dd = BigRational::from_integer(BigInt::from(d));
        QScalar {
            a: &self.a * &rhs.a + dd * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            d,
        }
        .normalize()
    }
}
impl Div for &QScalar {
    type Output = QScalar;
    fn div(self, rhs: &QScalar) -> QScalar {
        self * &rhs.inverse().expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QScalar {
            type Output = QScalar;
            fn $m(self, rhs: QScalar) -> QScalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -&self
    }
}

/// JSON rendering of an exact scalar `num/den + (sqrtq_num/sqrtq_den)·√q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactJson {
    pub num: String,
    pub den: String,
    pub sqrtq_num: String,
    pub sqrtq_den: String,
}

/// A character value: exact when possible, complex float otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(QScalar),
    Float(Complex64),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(x) => x.is_zero(),
            Scalar::Float(z) => z.norm() == 0.0,
        }
    }
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(x) => x.to_complex(),
            Scalar::Float(z) => *z,
        }
    }
    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_complex())
    }
    /// Exact equality when both sides are exact, else `|x - y| < tol`.
    pub fn matches(&self, other: &QScalar, tol: f64) -> bool {
        match self {
            Scalar::Exact(x) => x == other,
            Scalar::Float(z) => (z - other.to_complex()).norm() < tol,
        }
    }

    /// Parses `3`, `-1/3`, `2+1/2*sqrtq`, `sqrtq`, `0.25`, or `re,im`.
    pub fn parse(s: &str, q: u64) -> Option<Scalar> {
        let s = s.trim();
        if let Some((re, im)) = s.split_once(',') {
            let re: f64 = re.trim().parse().ok()?;
            let im: f64 = im.trim().parse().ok()?;
            return Some(Scalar::Float(Complex64::new(re, im)));
        }
        if let Some(pos) = s.find("sqrtq") {
            let head = &s[..pos];
            let (rat, coeff) = split_radical_term(head)?;
            let x = match rat {
                Some(r) => parse_rational(r)?,
                None => BigRational::zero(),
            };
            let y = coeff;
            if !s[pos + 5..].trim().is_empty() {
                return None;
            }
            return Some(Scalar::Exact(QScalar::from_sqrtq_parts(x, y, q)));
        }
        if let Some(r) = parse_rational(s) {
            return Some(Scalar::Exact(QScalar::rational(r)));
        }
        s.parse::<f64>()
            .ok()
            .map(|x| Scalar::Float(Complex64::new(x, 0.0)))
    }
}

/// Splits `"<rat>+<coeff>*"` / `"<coeff>*"` / `"-"` into its rational part and radical coefficient.
fn split_radical_term(head: &str) -> Option<(Option<&str>, BigRational)> {
    let head = head.trim_end_matches('*');
    // Find the sign that starts the radical coefficient (not at position 0).
    let split = head
        .char_indices()
        .skip(1)
        .filter(|(_, c)| *c == '+' || *c == '-')
        .map(|(i, _)| i)
        .last();
    let (rat, coeff) = match split {
        Some(i) if !head[..i].ends_with('/') => (Some(&head[..i]), &head[i..]),
        _ => (None, head),
    };
    let coeff = match coeff {
        "" | "+" => BigRational::one(),
        "-" => -BigRational::one(),
        c => parse_rational(c.trim_start_matches('+'))?,
    };
    Some((rat, coeff))
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(x) => write!(f, "{x}"),
            Scalar::Float(z) if z.im == 0.0 => write!(f, "{}", z.re),
            Scalar::Float(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}
