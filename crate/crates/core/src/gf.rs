//! Finite field towers `F_p ⊂ F_q ⊂ k_E ⊂ l`.
//!
//! A [`Field`] is `F_p[x] / (m(x))` with `m` the lexicographically smallest
//! monic irreducible of the requested degree, so every build of the same
//! `(p, k)` is bit-identical. Elements are coefficient vectors
//! ([`FieldElement`]); hot loops (matrix groups) use the packed integer
//! encoding and the log/antilog [`Tables`].
//!
//! Coefficient vectors are ordered lexicographically from the constant term
//! upwards. The packed index of `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` is
//! `c_0 p^{k-1} + c_1 p^{k-2} + ... + c_{k-1}`, so index order and canonical
//! enumeration order coincide.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest extension degree accepted by [`build_field`].
pub const MAX_DEGREE: u32 = 12;
/// Largest field order accepted by [`build_field`]; keeps baby-step tables small.
pub const MAX_FIELD_SIZE: u64 = 1 << 40;
/// Largest field order for which log/antilog tables are built.
pub const MAX_TABLE_SIZE: u64 = 1 << 20;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// An odd prime power `q = p^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub p: u64,
    pub r: u32,
    pub q: u64,
}

impl PrimePower {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if p == 2 {
            return Err(Error::InvalidParameter(
                "residue characteristic must be odd".into(),
            ));
        }
        if r == 0 {
            return Err(Error::InvalidParameter("exponent r must be positive".into()));
        }
        let q = p
            .checked_pow(r)
            .ok_or_else(|| Error::TooLarge(format!("{p}^{r} overflows")))?;
        Ok(Self { p, r, q })
    }

    /// Recovers `(p, r)` from `q`; fails unless `q` is a power of one odd prime.
    pub fn from_q(q: u64) -> Result<Self> {
        let f = factorize(q);
        match f.as_slice() {
            [(p, r)] => Self::new(*p, *r),
            _ => Err(Error::InvalidParameter(format!(
                "q = {q} is not a power of an odd prime"
            ))),
        }
    }
}

/// `(p, k, modulus)`; the modulus is monic of degree `k`, coefficients low to high.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub k: u32,
    pub modulus: Vec<u64>,
}

impl FieldDescriptor {
    pub fn size(&self) -> u64 {
        self.p.pow(self.k)
    }
}

// ---------------------------------------------------------------------------
// Polynomials over F_p, coefficient vectors low to high, no trailing zeros.

mod poly {
    pub(super) fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub(super) fn inv_mod_p(a: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let mut b = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    pub(super) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub(super) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo `m` (m nonzero).
    pub(super) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod_p(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            let shift = top - dm;
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub(super) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// `base^e mod m`.
    pub(super) fn pow_mod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = rem(&mul(&result, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        result
    }
}

/// Rabin's irreducibility test for a monic `f` of degree `k` over `F_p`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = [0u64, 1];
    let k128 = k as u32;
    let full = poly::pow_mod(&x, (p as u128).pow(k128), f, p);
    if poly::sub(&full, &x, p) != Vec::<u64>::new() {
        return false;
    }
    for (r, _) in factorize(k as u64) {
        let e = (p as u128).pow(k128 / r as u32);
        let h = poly::sub(&poly::pow_mod(&x, e, f, p), &x, p);
        if poly::gcd(f, &h, p).len() != 1 {
            return false;
        }
    }
    true
}

/// Digits of `m` in base `p`, most significant first, `k` digits.
fn index_to_digits(mut m: u64, p: u64, k: usize) -> Vec<u64> {
    let mut d = vec![0u64; k];
    for slot in d.iter_mut().rev() {
        *slot = m % p;
        m /= p;
    }
    d
}

/// Builds `GF(p^k)` with its canonical modulus.
pub fn build_field(p: u64, k: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if k == 0 || k > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(k));
    }
    if p >= 1 << 31 {
        return Err(Error::TooLarge(format!("characteristic {p}")));
    }
    let size = p
        .checked_pow(k)
        .filter(|s| *s <= MAX_FIELD_SIZE)
        .ok_or_else(|| Error::TooLarge(format!("field of order {p}^{k}")))?;
    // Candidates c_0..c_{k-1} in lexicographic order starting from c_0.
    let modulus = (0..size)
        .map(|m| {
            let mut f = index_to_digits(m, p, k as usize);
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .expect("an irreducible polynomial exists in every degree");
    Ok(Field::from_descriptor(FieldDescriptor { p, k, modulus }))
}

// ---------------------------------------------------------------------------

struct FieldInner {
    desc: FieldDescriptor,
    size: u64,
    generator: OnceLock<Vec<u64>>,
    tables: OnceLock<Tables>,
}

/// Shared handle to a built field; cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.desc.p, self.0.desc.k)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.desc == other.0.desc
    }
}
impl Eq for Field {}

impl Field {
    /// Wraps an explicit descriptor. The modulus is trusted to be irreducible.
    pub fn from_descriptor(desc: FieldDescriptor) -> Self {
        let size = desc.size();
        Field(Arc::new(FieldInner {
            desc,
            size,
            generator: OnceLock::new(),
            tables: OnceLock::new(),
        }))
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.0.desc
    }
    pub fn p(&self) -> u64 {
        self.0.desc.p
    }
    pub fn degree(&self) -> u32 {
        self.0.desc.k
    }
    pub fn size(&self) -> u64 {
        self.0.size
    }
    /// Order of the multiplicative group.
    pub fn unit_order(&self) -> u64 {
        self.0.size - 1
    }

    pub fn zero(&self) -> FieldElement {
        self.from_coeffs(Vec::new())
    }
    pub fn one(&self) -> FieldElement {
        self.from_coeffs(vec![1])
    }
    /// The class of `x`.
    pub fn x(&self) -> FieldElement {
        self.from_coeffs(vec![0, 1])
    }
    pub fn from_int(&self, c: i64) -> FieldElement {
        let p = self.p() as i64;
        self.from_coeffs(vec![c.rem_euclid(p) as u64])
    }

    /// Reduces arbitrary coefficients (low to high) into the field.
    pub fn from_coeffs(&self, coeffs: Vec<u64>) -> FieldElement {
        let p = self.p();
        let mut c: Vec<u64> = coeffs.into_iter().map(|x| x % p).collect();
        poly::trim(&mut c);
        let c = poly::rem(&c, &self.0.desc.modulus, p);
        self.normalized(c)
    }

    fn normalized(&self, mut c: Vec<u64>) -> FieldElement {
        c.resize(self.degree() as usize, 0);
        FieldElement {
            field: self.clone(),
            coeffs: c,
        }
    }

    pub fn element_from_index(&self, idx: u64) -> FieldElement {
        assert!(idx < self.size(), "index out of range");
        self.normalized(index_to_digits(idx, self.p(), self.degree() as usize))
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size()).map(move |i| self.element_from_index(i))
    }

    /// First element (canonical order) of multiplicative order `p^k - 1`.
    pub fn primitive_generator(&self) -> FieldElement {
        let c = self.0.generator.get_or_init(|| {
            let n = self.unit_order();
            let primes: Vec<u64> = factorize(n).into_iter().map(|(r, _)| r).collect();
            (1..self.size())
                .map(|i| self.element_from_index(i))
                .find(|x| primes.iter().all(|r| !x.pow(n / r).is_one()))
                .expect("the multiplicative group is cyclic")
                .coeffs
        });
        self.normalized(c.clone())
    }

    /// Elements fixed by `x -> x^{p^d}`: the subfield of order `p^d` (`d | k`).
    pub fn subfield_elements(&self, d: u32) -> Result<Vec<FieldElement>> {
        if d == 0 || self.degree() % d != 0 {
            return Err(Error::InvalidParameter(format!(
                "{d} does not divide the degree {}",
                self.degree()
            )));
        }
        Ok(self.elements().filter(|x| x.frobenius(d as u64) == *x).collect())
    }

    /// Packed lookup tables; built on first use.
    pub fn tables(&self) -> Result<&Tables> {
        if self.size() > MAX_TABLE_SIZE {
            return Err(Error::TooLarge(format!(
                "lookup tables for a field of order {}",
                self.size()
            )));
        }
        Ok(self.0.tables.get_or_init(|| Tables::build(self)))
    }
}

/// Element of a [`Field`], as a residue-class polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    coeffs: Vec<u64>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }
    /// Coefficients `c_0..c_{k-1}`.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
    pub fn index(&self) -> u64 {
        let p = self.field.p();
        self.coeffs.iter().fold(0u64, |acc, &c| acc * p + c)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn check(&self, other: &Self) {
        assert!(self.field == other.field, "elements of different fields");
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let p = self.field.p();
        let m = &self.field.descriptor().modulus;
        let mut result = vec![1u64];
        let mut b = self.coeffs.clone();
        poly::trim(&mut b);
        while e > 0 {
            if e & 1 == 1 {
                result = poly::rem(&poly::mul(&result, &b, p), m, p);
            }
            b = poly::rem(&poly::mul(&b, &b, p), m, p);
            e >>= 1;
        }
        self.field.normalized(result)
    }

    pub fn inverse(&self) -> Option<FieldElement> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.field.size() - 2))
        }
    }

    /// `x^{p^e}` by repeated `p`-th powering.
    pub fn frobenius(&self, e: u64) -> FieldElement {
        let k = self.field.degree() as u64;
        let p = self.field.p();
        (0..e % k).fold(self.clone(), |acc, _| acc.pow(p))
    }

    /// Multiplicative order; `None` for zero.
    pub fn multiplicative_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let mut n = self.field.unit_order();
        for (r, e) in factorize(n) {
            for _ in 0..e {
                if self.pow(n / r).is_one() {
                    n /= r;
                } else {
                    break;
                }
            }
        }
        Some(n)
    }

    /// `t` in `[0, p^k - 1)` with `g^t = self`, by baby-step/giant-step.
    pub fn discrete_log(&self, g: &FieldElement) -> Result<u64> {
        self.check(g);
        if self.is_zero() {
            return Err(Error::NotInGroup("zero has no discrete logarithm".into()));
        }
        let n = self.field.unit_order();
        let m = (n as f64).sqrt().ceil() as u64;
        let m = m.max(1);
        let mut baby: HashMap<Vec<u64>, u64> = HashMap::with_capacity(m as usize);
        let mut cur = self.field.one();
        for j in 0..m {
            baby.entry(cur.coeffs.clone()).or_insert(j);
            cur = &cur * g;
        }
        let giant = g
            .pow(m)
            .inverse()
            .expect("a generator power is a unit");
        let mut gamma = self.clone();
        for i in 0..=m {
            if let Some(&j) = baby.get(&gamma.coeffs) {
                let t = (i * m + j) % n;
                return Ok(t);
            }
            gamma = &gamma * &giant;
        }
        Err(Error::NotInGroup(format!(
            "{self} is not a power of {g}"
        )))
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> FieldElement {
        self.check(rhs);
        let p = self.field.p();
        let c = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| (a + b) % p)
            .collect();
        FieldElement {
            field: self.field.clone(),
            coeffs: c,
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> FieldElement {
        self + &(-rhs)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let p = self.field.p();
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| (p - c) % p).collect(),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> FieldElement {
        self.check(rhs);
        let p = self.field.p();
        let mut a = self.coeffs.clone();
        let mut b = rhs.coeffs.clone();
        poly::trim(&mut a);
        poly::trim(&mut b);
        let prod = poly::mul(&a, &b, p);
        self.field
            .normalized(poly::rem(&prod, &self.field.descriptor().modulus, p))
    }
}

/// `frobenius` as a free function.
pub fn frobenius(x: &FieldElement, e: u64) -> FieldElement {
    x.frobenius(e)
}

/// `discrete_log` as a free function.
pub fn discrete_log(x: &FieldElement, g: &FieldElement) -> Result<u64> {
    x.discrete_log(g)
}

// ---------------------------------------------------------------------------

/// Packed arithmetic on element indices (see module docs for the encoding).
///
/// Logarithms are taken with respect to [`Field::primitive_generator`].
pub struct Tables {
    p: u32,
    k: u32,
    size: u32,
    add: Vec<u32>,
    neg: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

const ADD_TABLE_LIMIT: u32 = 1024;

impl Tables {
    fn build(field: &Field) -> Tables {
        let size = field.size() as u32;
        let p = field.p() as u32;
        let k = field.degree();
        let n = size - 1;
        let g = field.primitive_generator();
        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![u32::MAX; size as usize];
        let mut cur = field.one();
        for t in 0..n {
            let idx = cur.index() as u32;
            exp.push(idx);
            log[idx as usize] = t;
            cur = &cur * &g;
        }
        let mut t = Tables {
            p,
            k,
            size,
            add: Vec::new(),
            neg: Vec::new(),
            exp,
            log,
        };
        t.neg = (0..size).map(|a| t.digit_op(a, 0, |x, _| (p - x) % p)).collect();
        if size <= ADD_TABLE_LIMIT {
            let mut add = vec![0u32; (size * size) as usize];
            for a in 0..size {
                for b in 0..size {
                    add[(a * size + b) as usize] = t.digit_op(a, b, |x, y| (x + y) % p);
                }
            }
            t.add = add;
        }
        t
    }

    fn digit_op(&self, mut a: u32, mut b: u32, f: impl Fn(u32, u32) -> u32) -> u32 {
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.k {
            let d = f(a % self.p, b % self.p);
            out += d * scale;
            scale *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn size(&self) -> u32 {
        self.size
    }
    pub fn unit_order(&self) -> u32 {
        self.size - 1
    }
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Packed index of the integer `c mod p` (a prime-field element).
    pub fn int(&self, c: i64) -> u32 {
        (c.rem_euclid(self.p as i64) as u32) * self.p.pow(self.k - 1)
    }
    pub fn one(&self) -> u32 {
        self.int(1)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.add.is_empty() {
            let p = self.p;
            self.digit_op(a, b, |x, y| (x + y) % p)
        } else {
            self.add[(a * self.size + b) as usize]
        }
    }
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.size - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= n { s - n } else { s }) as usize]
    }
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.size - 1;
        let l = self.log[a as usize];
        Some(self.exp[((n - l) % n) as usize])
    }
    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return self.one();
        }
        if a == 0 {
            return 0;
        }
        let n = (self.size - 1) as u64;
        let l = self.log[a as usize] as u64;
        self.exp[((l * (e % n)) % n) as usize]
    }
    /// `x^{p^e}`.
    pub fn frob(&self, a: u32, e: u32) -> u32 {
        self.pow(a, (self.p as u64).pow(e % self.k))
    }
    /// Discrete log against the primitive generator; `None` for zero.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }
    /// `g^t` for the primitive generator `g`.
    pub fn exp(&self, t: u64) -> u32 {
        self.exp[(t % (self.size as u64 - 1)) as usize]
    }
    /// Square root, if one exists in the field.
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        let l = self.log[a as usize];
        (l % 2 == 0).then(|| self.exp[(l / 2) as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_modulus_is_x() {
        let f = build_field(3, 1).unwrap();
        assert_eq!(f.descriptor().modulus, vec![0, 1]);
        assert_eq!(f.size(), 3);
        assert_eq!(f.one().coeffs().len(), 1);
    }

    #[test]
    fn gf9_modulus_is_x2_plus_1() {
        let f = build_field(3, 2).unwrap();
        assert_eq!(f.descriptor().modulus, vec![1, 0, 1]);
    }

    #[test]
    fn gf729_has_the_right_size() {
        let f = build_field(3, 6).unwrap();
        assert_eq!(f.descriptor().modulus.len(), 7);
        let x = f.x();
        assert_eq!(x.pow(729), x);
        assert_eq!(f.primitive_generator().multiplicative_order(), Some(728));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(build_field(9, 1), Err(Error::NonPrime(9))));
        assert!(matches!(build_field(3, 13), Err(Error::DegreeTooLarge(13))));
        assert!(matches!(build_field(3, 0), Err(Error::DegreeTooLarge(0))));
        assert!(PrimePower::new(2, 1).is_err());
        assert_eq!(PrimePower::from_q(27).unwrap(), PrimePower { p: 3, r: 3, q: 27 });
        assert!(PrimePower::from_q(15).is_err());
    }

    #[test]
    fn frobenius_examples() {
        let f = build_field(3, 2).unwrap();
        let g = f.primitive_generator();
        assert_eq!(g.frobenius(1), g.pow(3));
        for x in f.elements() {
            assert_eq!(x.frobenius(2), x);
        }
        let f3 = build_field(3, 1).unwrap();
        for x in f3.elements() {
            for e in 0..4 {
                assert_eq!(x.frobenius(e), x);
            }
        }
    }

    #[test]
    fn primitive_generators() {
        let f3 = build_field(3, 1).unwrap();
        assert_eq!(f3.primitive_generator(), f3.from_int(2));
        let f9 = build_field(3, 2).unwrap();
        let g = f9.primitive_generator();
        assert_eq!(g, f9.from_coeffs(vec![1, 1]));
        assert_eq!(f9.x().multiplicative_order(), Some(4));
        assert_eq!(g.pow(4), f9.from_int(2));
    }

    #[test]
    fn discrete_log_examples() {
        let f9 = build_field(3, 2).unwrap();
        let g = f9.primitive_generator();
        assert_eq!(g.discrete_log(&g).unwrap(), 1);
        assert_eq!(f9.one().discrete_log(&g).unwrap(), 0);
        assert_eq!(f9.from_int(2).discrete_log(&g).unwrap(), 4);
        assert!(matches!(
            f9.zero().discrete_log(&g),
            Err(Error::NotInGroup(_))
        ));
    }

    #[test]
    fn tables_agree_with_polynomial_arithmetic() {
        let f = build_field(5, 2).unwrap();
        let t = f.tables().unwrap();
        for a in f.elements() {
            for b in f.elements() {
                let (ia, ib) = (a.index() as u32, b.index() as u32);
                assert_eq!(t.add(ia, ib) as u64, (&a + &b).index());
                assert_eq!(t.mul(ia, ib) as u64, (&a * &b).index());
            }
            assert_eq!(t.neg(a.index() as u32) as u64, (-&a).index());
        }
        assert_eq!(t.int(1) as u64, f.one().index());
    }

    #[test]
    fn subfield_of_gf81() {
        let f = build_field(3, 4).unwrap();
        let sub = f.subfield_elements(2).unwrap();
        assert_eq!(sub.len(), 9);
        assert!(f.subfield_elements(3).is_err());
    }
}
