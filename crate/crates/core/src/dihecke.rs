//! The two-generator Hecke algebra with `g_i^2 = (γ - γ^{-1}) g_i + 1`, its
//! Laurent subalgebra `C[X^{±1}]` with `X = g_0 g_1`, and the two-dimensional
//! modules induced from characters of that subalgebra.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::QScalar;

/// A reduced word `s_{start} s_{1-start} …` of length `len` in the infinite
/// dihedral group. Ordered by length first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    len: u32,
    start: u8,
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, start: 0 };

    pub fn new(start: u8, len: u32) -> Self {
        assert!(start < 2, "letters are 0 and 1");
        if len == 0 {
            Self::EMPTY
        } else {
            Self { len, start }
        }
    }
    pub fn len(&self) -> u32 {
        self.len
    }
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
    /// First letter; `None` for the empty word.
    pub fn first(&self) -> Option<u8> {
        (self.len > 0).then_some(self.start)
    }
    pub fn last(&self) -> Option<u8> {
        (self.len > 0).then(|| self.start ^ ((self.len - 1) % 2) as u8)
    }
    pub fn letters(&self) -> Vec<u8> {
        (0..self.len).map(|k| self.start ^ (k % 2) as u8).collect()
    }
    /// Parses `"0101"`; `""` is the identity. Rejects repeated letters.
    pub fn parse(s: &str) -> Option<Self> {
        let letters: Vec<u8> = s
            .chars()
            .map(|c| match c {
                '0' => Some(0),
                '1' => Some(1),
                _ => None,
            })
            .collect::<Option<_>>()?;
        if letters.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(letters.first().map_or(Self::EMPTY, |&s| Self::new(s, letters.len() as u32)))
    }

    /// `s_i w`, together with whether the length went up.
    fn left_mul(self, i: u8) -> (Word, bool) {
        match self.first() {
            Some(f) if f == i => (Word::new(1 - i, self.len - 1), false),
            _ => (Word::new(i, self.len + 1), true),
        }
    }

    /// `w ↦` the word with letters `0 ↔ 1` exchanged.
    pub fn swap_letters(self) -> Self {
        Word::new(1 - self.start, self.len)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("e");
        }
        for l in self.letters() {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// `Σ c_w T_w` with exact coefficients and parameter `γ`.
#[derive(Clone, PartialEq, Eq)]
pub struct HeckeElement {
    gamma: QScalar,
    terms: BTreeMap<Word, QScalar>,
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("({c})T_{w}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl HeckeElement {
    pub fn zero(gamma: &QScalar) -> Self {
        Self {
            gamma: gamma.clone(),
            terms: BTreeMap::new(),
        }
    }
    pub fn basis(gamma: &QScalar, w: Word) -> Self {
        Self::zero(gamma).with_term(w, QScalar::one())
    }
    pub fn scalar(gamma: &QScalar, c: QScalar) -> Self {
        Self::zero(gamma).with_term(Word::EMPTY, c)
    }
    pub fn one(gamma: &QScalar) -> Self {
        Self::basis(gamma, Word::EMPTY)
    }
    /// `g_i`.
    pub fn generator(gamma: &QScalar, i: u8) -> Self {
        Self::basis(gamma, Word::new(i, 1))
    }
    /// `g_i^{-1} = g_i - (γ - γ^{-1})`.
    pub fn generator_inverse(gamma: &QScalar, i: u8) -> Self {
        let c = relation_coefficient(gamma);
        Self::generator(gamma, i).with_term(Word::EMPTY, -c)
    }

    fn with_term(mut self, w: Word, c: QScalar) -> Self {
        self.add_term(w, c);
        self
    }

    fn add_term(&mut self, w: Word, c: QScalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w).or_insert_with(QScalar::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn gamma(&self) -> &QScalar {
        &self.gamma
    }
    pub fn coefficient(&self, w: Word) -> QScalar {
        self.terms.get(&w).cloned().unwrap_or_else(QScalar::zero)
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &QScalar)> {
        self.terms.iter()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    /// Longest word in the support.
    pub fn max_length(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|w| w.len())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.gamma != other.gamma {
            return Err(Error::ParameterMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&QScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        let mut out = Self::zero(&self.gamma);
        for (w, x) in &self.terms {
            out.add_term(*w, x * c);
        }
        out
    }

    /// `g_i · self`.
    pub fn left_mul_generator(&self, i: u8) -> Self {
        let c = relation_coefficient(&self.gamma);
        let mut out = Self::zero(&self.gamma);
        for (w, x) in &self.terms {
            let (sw, up) = w.left_mul(i);
            out.add_term(sw, x.clone());
            if !up {
                out.add_term(*w, x * &c);
            }
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.gamma);
        for (w, x) in &self.terms {
            // T_w · other = g_{i_1}(g_{i_2}(… (g_{i_l} · other))).
            let mut acc = other.clone();
            for &l in w.letters().iter().rev() {
                acc = acc.left_mul_generator(l);
            }
            for (v, y) in acc.terms {
                out.add_term(v, x * &y);
            }
        }
        Ok(out)
    }

    /// The image under the automorphism `g_0 ↔ g_1`.
    pub fn swap_letters(&self) -> Self {
        let mut out = Self::zero(&self.gamma);
        for (w, x) in &self.terms {
            out.add_term(w.swap_letters(), x.clone());
        }
        out
    }

    /// Coefficients `(c_k, d_k)` with `self = Σ_k X^k (c_k + d_k g_0)`.
    pub fn decompose(&self) -> BTreeMap<i64, (QScalar, QScalar)> {
        let mut rest = self.clone();
        let mut out: BTreeMap<i64, (QScalar, QScalar)> = BTreeMap::new();
        while let Some((&w, c)) = rest.terms.iter().next_back() {
            let c = c.clone();
            let (k, with_g0) = leading_index(w);
            let b = free_basis_element(&self.gamma, k, with_g0);
            debug_assert_eq!(b.coefficient(w), QScalar::one());
            rest = rest.try_sub(&b.scale(&c)).expect("same gamma");
            let slot = out.entry(k).or_insert_with(|| (QScalar::zero(), QScalar::zero()));
            if with_g0 {
                slot.1 = &slot.1 + &c;
            } else {
                slot.0 = &slot.0 + &c;
            }
        }
        out
    }

    /// Inverse of [`decompose`](Self::decompose).
    pub fn recompose(gamma: &QScalar, parts: &BTreeMap<i64, (QScalar, QScalar)>) -> Self {
        let mut out = Self::zero(gamma);
        for (&k, (c, d)) in parts {
            out = out
                .try_add(&free_basis_element(gamma, k, false).scale(c))
                .and_then(|o| o.try_add(&free_basis_element(gamma, k, true).scale(d)))
                .expect("same gamma");
        }
        out
    }
}

/// `γ - γ^{-1}`.
pub fn relation_coefficient(gamma: &QScalar) -> QScalar {
    gamma - &gamma.inverse().expect("gamma is nonzero")
}

/// Which basis element `X^k` or `X^k g_0` has `w` as its leading word.
fn leading_index(w: Word) -> (i64, bool) {
    let l = w.len() as i64;
    match (w.first(), l % 2) {
        (None, _) => (0, false),
        (Some(0), 0) => (l / 2, false),
        (Some(0), _) => ((l - 1) / 2, true),
        (Some(_), 0) => (-(l / 2), false),
        (Some(_), _) => (-(l + 1) / 2, true),
    }
}

fn free_basis_element(gamma: &QScalar, k: i64, with_g0: bool) -> HeckeElement {
    let x = laurent_embed(gamma, k);
    if with_g0 {
        x.try_mul(&HeckeElement::generator(gamma, 0)).expect("same gamma")
    } else {
        x
    }
}

/// `X^k` with `X = g_0 g_1`.
pub fn laurent_embed(gamma: &QScalar, k: i64) -> HeckeElement {
    let step = if k >= 0 {
        HeckeElement::generator(gamma, 0)
            .try_mul(&HeckeElement::generator(gamma, 1))
            .expect("same gamma")
    } else {
        HeckeElement::generator_inverse(gamma, 1)
            .try_mul(&HeckeElement::generator_inverse(gamma, 0))
            .expect("same gamma")
    };
    let mut out = HeckeElement::one(gamma);
    for _ in 0..k.unsigned_abs() {
        out = out.try_mul(&step).expect("same gamma");
    }
    out
}

/// The one-dimensional module `C_λ` of `C[X^{±1}]`, `X ↦ λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentModule {
    pub nu_zeta: QScalar,
}

impl LaurentModule {
    pub fn new(nu_zeta: QScalar) -> Result<Self> {
        if nu_zeta.is_zero() {
            return Err(Error::ZeroScalar);
        }
        Ok(Self { nu_zeta })
    }
    /// Action of `X^k`.
    pub fn action(&self, k: i64) -> QScalar {
        self.nu_zeta.powi(k)
    }
}

/// Scalars the two-dimensional modules can be evaluated over.
pub trait Coeff: Clone + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_exact(x: &QScalar) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn sqrt(&self) -> Option<Self>;
    fn near_zero(&self, tol: f64) -> bool;
    fn powi(&self, k: i64) -> Self {
        let base = if k < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        (0..k.unsigned_abs()).fold(Self::one(), |acc, _| acc.mul(&base))
    }
}

impl Coeff for QScalar {
    fn zero() -> Self {
        QScalar::zero()
    }
    fn one() -> Self {
        QScalar::one()
    }
    fn from_exact(x: &QScalar) -> Self {
        x.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
    fn sqrt(&self) -> Option<Self> {
        QScalar::sqrt(self)
    }
    fn near_zero(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_exact(x: &QScalar) -> Self {
        x.to_complex()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Option<Self> {
        (self.norm() != 0.0).then(|| 1.0 / self)
    }
    fn sqrt(&self) -> Option<Self> {
        Some(Complex64::sqrt(*self))
    }
    fn near_zero(&self, tol: f64) -> bool {
        self.norm() <= tol
    }
}

/// Row-major 2×2 matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat2<T>(pub [[T; 2]; 2]);

impl<T: Coeff> Mat2<T> {
    pub fn identity() -> Self {
        Mat2([[T::one(), T::zero()], [T::zero(), T::one()]])
    }
    pub fn mul(&self, o: &Self) -> Self {
        let a = &self.0;
        let b = &o.0;
        let e = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
    pub fn add(&self, o: &Self) -> Self {
        let e = |i: usize, j: usize| self.0[i][j].add(&o.0[i][j]);
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
    pub fn scale(&self, c: &T) -> Self {
        let e = |i: usize, j: usize| self.0[i][j].mul(c);
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
    pub fn apply(&self, v: &[T; 2]) -> [T; 2] {
        [
            self.0[0][0].mul(&v[0]).add(&self.0[0][1].mul(&v[1])),
            self.0[1][0].mul(&v[0]).add(&self.0[1][1].mul(&v[1])),
        ]
    }
    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        (0..2).all(|i| (0..2).all(|j| self.0[i][j].sub(&o.0[i][j]).near_zero(tol)))
    }
    fn is_scalar(&self, tol: f64) -> bool {
        self.0[0][1].near_zero(tol)
            && self.0[1][0].near_zero(tol)
            && self.0[0][0].sub(&self.0[1][1]).near_zero(tol)
    }
}

/// Which Laurent subalgebra the module is induced from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `X = g_0 g_1`, functional basis `{ψ(1), ψ(g_0)}`.
    Standard,
    /// `X' = g_1 g_0`, functional basis `{ψ(1), ψ(g_1)}`.
    Swapped,
}

/// `ψ(h)` as a row `(α, β)` with `ψ(h) = α ψ(1) + β ψ(g)` on `Hom_{C[X^{±1}]}(𝒜, C_λ)`.
fn functional<T: Coeff>(h: &HeckeElement, lambda: &T, orient: Orientation) -> [T; 2] {
    let h = match orient {
        Orientation::Standard => h.clone(),
        Orientation::Swapped => h.swap_letters(),
    };
    let mut row = [T::zero(), T::zero()];
    for (k, (c, d)) in h.decompose() {
        let lk = lambda.powi(k);
        row[0] = row[0].add(&lk.mul(&T::from_exact(&c)));
        row[1] = row[1].add(&lk.mul(&T::from_exact(&d)));
    }
    row
}

/// Matrices of `g_0, g_1` on `Hom_{C[X^{±1}]}(𝒜, C_λ)`, `(h·ψ)(h_1) = ψ(h_1 h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoDimModule<T> {
    pub lambda: T,
    pub gamma: QScalar,
    pub orientation: Orientation,
    pub m: [Mat2<T>; 2],
}

impl<T: Coeff> TwoDimModule<T> {
    pub fn new(lambda: T, gamma: &QScalar, orientation: Orientation) -> Result<Self> {
        if lambda.near_zero(0.0) {
            return Err(Error::ZeroScalar);
        }
        let basis_letter = match orientation {
            Orientation::Standard => 0,
            Orientation::Swapped => 1,
        };
        let g = HeckeElement::generator(gamma, basis_letter);
        let m = [0u8, 1].map(|i| {
            let gi = HeckeElement::generator(gamma, i);
            let top = functional(&gi, &lambda, orientation);
            let bottom = functional(&g.try_mul(&gi).expect("same gamma"), &lambda, orientation);
            Mat2([top, bottom])
        });
        Ok(Self {
            lambda,
            gamma: gamma.clone(),
            orientation,
            m,
        })
    }

    /// Matrix of an arbitrary algebra element.
    pub fn action(&self, h: &HeckeElement) -> Mat2<T> {
        let mut out = Mat2([[T::zero(), T::zero()], [T::zero(), T::zero()]]);
        for (w, c) in h.terms() {
            let mut mw = Mat2::identity();
            for l in w.letters() {
                mw = mw.mul(&self.m[l as usize]);
            }
            out = out.add(&mw.scale(&T::from_exact(c)));
        }
        out
    }

    /// `M_i^2 = (γ - γ^{-1}) M_i + I` for both generators.
    pub fn satisfies_relations(&self, tol: f64) -> bool {
        let c = T::from_exact(&relation_coefficient(&self.gamma));
        self.m.iter().all(|mi| {
            mi.mul(mi)
                .approx_eq(&mi.scale(&c).add(&Mat2::identity()), tol)
        })
    }

    /// Simple iff no line over `C` is stable under both generators.
    pub fn is_simple(&self, tol: f64) -> bool {
        let [m0, m1] = &self.m;
        if m0.is_scalar(tol) {
            return false;
        }
        let vs = eigenvectors(m0, tol);
        if vs.is_empty() {
            // Eigenvalues of M_0 leave the scalar field. A stable line and its
            // conjugate would then diagonalize both, so test commutation.
            return !m0.mul(m1).approx_eq(&m1.mul(m0), tol);
        }
        self.invariant_line(tol).is_none()
    }

    /// A common eigenvector of `M_0` and `M_1` defined over the scalars.
    pub fn invariant_line(&self, tol: f64) -> Option<[T; 2]> {
        let [m0, m1] = &self.m;
        if m0.is_scalar(tol) {
            return eigenvectors(m1, tol).into_iter().next();
        }
        eigenvectors(m0, tol).into_iter().find(|v| {
            let w = m1.apply(v);
            v[0].mul(&w[1]).sub(&v[1].mul(&w[0])).near_zero(tol)
        })
    }
}

/// One eigenvector per eigenvalue, when the eigenvalues lie in the scalar field.
fn eigenvectors<T: Coeff>(m: &Mat2<T>, tol: f64) -> Vec<[T; 2]> {
    let [[a, b], [c, d]] = &m.0;
    let tr = a.add(d);
    let det = a.mul(d).sub(&b.mul(c));
    let four = T::from_exact(&QScalar::from_int(4));
    let half = T::from_exact(&QScalar::from_ratio(1, 2));
    let Some(root) = tr.mul(&tr).sub(&four.mul(&det)).sqrt() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for mu in [tr.add(&root).mul(&half), tr.sub(&root).mul(&half)] {
        // Kernel of M - μI from its first nonzero row.
        let r0 = [a.sub(&mu), b.clone()];
        let r1 = [c.clone(), d.sub(&mu)];
        let row = if !r0[0].near_zero(tol) || !r0[1].near_zero(tol) {
            r0
        } else {
            r1
        };
        if row[0].near_zero(tol) && row[1].near_zero(tol) {
            out.push([T::one(), T::zero()]);
            out.push([T::zero(), T::one()]);
        } else {
            out.push([T::zero().sub(&row[1]), row[0].clone()]);
        }
    }
    out
}

/// Exact module `M(λ)` in the standard orientation.
pub fn induced_module(nu_zeta: &QScalar, gamma: &QScalar) -> Result<TwoDimModule<QScalar>> {
    TwoDimModule::new(nu_zeta.clone(), gamma, Orientation::Standard)
}

/// Laurent polynomial in `λ` with exact coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Laurent(BTreeMap<i64, QScalar>);

impl Laurent {
    fn constant(c: QScalar) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(0, c);
        }
        Laurent(m)
    }
    fn add(&self, o: &Self) -> Self {
        let mut m = self.0.clone();
        for (k, c) in &o.0 {
            let e = m.entry(*k).or_insert_with(QScalar::zero);
            *e = &*e + c;
            if e.is_zero() {
                m.remove(k);
            }
        }
        Laurent(m)
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = Laurent::default();
        for (i, a) in &self.0 {
            for (j, b) in &o.0 {
                out = out.add(&Laurent([(i + j, a * b)].into_iter().collect()));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        Laurent(self.0.iter().map(|(k, c)| (*k, -c)).collect())
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    /// Nonzero roots, exactly when the cleared polynomial has degree ≤ 2.
    fn nonzero_roots(&self) -> Result<Vec<QScalar>> {
        let Some((&lo, _)) = self.0.iter().next() else {
            return Err(Error::InvalidParameter("identically zero condition".into()));
        };
        let coeff = |k: i64| self.0.get(&(k + lo)).cloned().unwrap_or_else(QScalar::zero);
        let deg = self.0.keys().next_back().unwrap() - lo;
        match deg {
            0 => Ok(Vec::new()),
            1 => Ok(vec![-(&coeff(0) / &coeff(1))]),
            2 => {
                let (a, b, c) = (coeff(2), coeff(1), coeff(0));
                let disc = &(&b * &b) - &(&QScalar::from_int(4) * &(&a * &c));
                let Some(root) = disc.sqrt() else {
                    return Ok(Vec::new());
                };
                let two_a = &QScalar::from_int(2) * &a;
                Ok(vec![&(&(-&b) + &root) / &two_a, &(&(-&b) - &root) / &two_a])
            }
            d => Err(Error::InvalidParameter(format!(
                "invariant-line condition has degree {d}"
            ))),
        }
    }
}

impl Coeff for Laurent {
    fn zero() -> Self {
        Laurent::default()
    }
    fn one() -> Self {
        Laurent::constant(QScalar::one())
    }
    fn from_exact(x: &QScalar) -> Self {
        Laurent::constant(x.clone())
    }
    fn add(&self, o: &Self) -> Self {
        Laurent::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Laurent::add(self, &o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        Laurent::mul(self, o)
    }
    fn inv(&self) -> Option<Self> {
        // Only monomials are invertible.
        (self.0.len() == 1).then(|| {
            let (k, c) = self.0.iter().next().unwrap();
            Laurent([(-k, c.inverse().unwrap())].into_iter().collect())
        })
    }
    fn sqrt(&self) -> Option<Self> {
        None
    }
    fn near_zero(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

impl Laurent {
    /// Value at `λ = z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0.iter().map(|(k, c)| c.to_complex() * z.powi(*k as i32)).sum()
    }

    fn as_constant(&self) -> Option<QScalar> {
        match self.0.len() {
            0 => Some(QScalar::zero()),
            1 => self.0.get(&0).cloned(),
            _ => None,
        }
    }
}

/// All `λ ≠ 0` where the induced module is not simple, found by solving the
/// invariant-line condition symbolically in `λ`.
pub fn gamma_set_oracle(gamma: &QScalar) -> Result<Vec<QScalar>> {
    gamma_set_oracle_oriented(gamma, Orientation::Standard)
}

pub fn gamma_set_oracle_oriented(gamma: &QScalar, orient: Orientation) -> Result<Vec<QScalar>> {
    let lambda = Laurent([(1, QScalar::one())].into_iter().collect());
    let module = TwoDimModule::new(lambda, gamma, orient)?;
    // Use whichever generator acts by a λ-free matrix for the eigenvectors.
    let (fixed, other) = match module.m.iter().position(|m| {
        m.0.iter().flatten().all(|e| e.as_constant().is_some())
    }) {
        Some(0) => (&module.m[0], &module.m[1]),
        Some(_) => (&module.m[1], &module.m[0]),
        None => {
            return Err(Error::InvalidParameter(
                "neither generator acts independently of lambda".into(),
            ))
        }
    };
    let exact = Mat2(fixed.0.clone().map(|r| r.map(|e| e.as_constant().unwrap())));
    if exact.is_scalar(0.0) {
        return Err(Error::InvalidParameter("generator acts by a scalar".into()));
    }
    let mut roots = Vec::new();
    for v in eigenvectors(&exact, 0.0) {
        let v = v.map(Laurent::constant);
        let w = other.apply(&v);
        let cond = v[0].mul(&w[1]).sub(&v[1].mul(&w[0]));
        if cond.is_zero() {
            return Err(Error::InvalidParameter("every lambda is non-simple".into()));
        }
        roots.extend(cond.nonzero_roots()?);
    }
    roots.retain(|r| !r.is_zero());
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// Float scan: every non-simple `λ` among `points`, for comparison with the exact locus.
pub fn scan_non_simple(gamma: &QScalar, points: &[Complex64], tol: f64) -> Vec<Complex64> {
    // Built once with λ symbolic, then evaluated at each point.
    let lambda = Laurent([(1, QScalar::one())].into_iter().collect());
    let symbolic = TwoDimModule::new(lambda, gamma, Orientation::Standard).expect("λ is nonzero");
    points
        .par_iter()
        .filter(|z| z.norm() > 0.0)
        .filter(|&&z| {
            let m = TwoDimModule {
                lambda: z,
                gamma: gamma.clone(),
                orientation: Orientation::Standard,
                m: symbolic.m.clone().map(|mi| Mat2(mi.0.map(|r| r.map(|e| e.eval(z))))),
            };
            !m.is_simple(tol)
        })
        .copied()
        .collect()
}

/// `steps` evenly spaced points on `[lo, hi]` plus `steps` on the unit circle.
pub fn scan_points(lo: f64, hi: f64, steps: usize) -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(2 * steps);
    for k in 0..steps {
        let t = if steps > 1 {
            lo + (hi - lo) * k as f64 / (steps - 1) as f64
        } else {
            lo
        };
        pts.push(Complex64::new(t, 0.0));
    }
    for k in 0..steps {
        pts.push(Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / steps as f64));
    }
    pts
}
