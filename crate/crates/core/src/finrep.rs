//! Class functions and matrix models on the finite groups of [`crate::fingrp`],
//! with the cuspidal representations of `GL_2(F_q)` and their inflation to
//! the Siegel parabolic.

use std::collections::hash_map::DefaultHasher;
use std::f64::consts::TAU;
use std::hash::{Hash, Hasher};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chars::{Case, CharContext, CharExponent};
use crate::error::{Error, Result};
use crate::fingrp::{FiniteGroup, GroupSpec, GroupType, ParabolicData};
use crate::gf::Tables;

/// Tolerance for pointwise comparisons of complex values.
pub const TOL: f64 = 1e-9;
/// Tolerance for "this inner product is an integer".
pub const INTEGRALITY_TOL: f64 = 1e-6;

/// Identifies the group a class function lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DomainKey {
    pub spec: GroupSpec,
    pub size: usize,
    tag: u64,
}

/// A subgroup of a [`FiniteGroup`] given by its (sorted) element indices.
pub struct Subgroup<'a> {
    pub group: &'a FiniteGroup,
    elements: Vec<u32>,
    position: Vec<u32>,
}

impl<'a> Subgroup<'a> {
    pub fn whole(group: &'a FiniteGroup) -> Self {
        let elements: Vec<u32> = (0..group.order() as u32).collect();
        Self::unchecked(group, elements)
    }

    /// Checks closure exhaustively when `|H|² ≤ 2·10⁶`, otherwise on 10⁴
    /// seeded random pairs.
    pub fn new(group: &'a FiniteGroup, mut elements: Vec<u32>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        let h = Self::unchecked(group, elements);
        if !h.contains(group.identity()) {
            return Err(Error::NotSubgroup("identity missing".into()));
        }
        let n = h.elements.len();
        let closed = |a: u32, b: u32| h.contains(group.mul(a, group.inv(b)));
        let ok = if n * n <= 2_000_000 {
            h.elements
                .iter()
                .all(|&a| h.elements.iter().all(|&b| closed(a, b)))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            (0..10_000).all(|_| {
                let a = h.elements[rng.gen_range(0..n)];
                let b = h.elements[rng.gen_range(0..n)];
                closed(a, b)
            })
        };
        if !ok {
            return Err(Error::NotSubgroup("not closed under a·b⁻¹".into()));
        }
        Ok(h)
    }

    fn unchecked(group: &'a FiniteGroup, elements: Vec<u32>) -> Self {
        let mut position = vec![u32::MAX; group.order()];
        for (i, &x) in elements.iter().enumerate() {
            position[x as usize] = i as u32;
        }
        Self {
            group,
            elements,
            position,
        }
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn contains(&self, x: u32) -> bool {
        self.position[x as usize] != u32::MAX
    }
    /// Index of `x` in [`elements`](Self::elements).
    pub fn position(&self, x: u32) -> Option<usize> {
        let p = self.position[x as usize];
        (p != u32::MAX).then_some(p as usize)
    }

    pub fn key(&self) -> DomainKey {
        let mut h = DefaultHasher::new();
        if self.elements.len() != self.group.order() {
            self.elements.hash(&mut h);
        }
        DomainKey {
            spec: *self.group.spec(),
            size: self.elements.len(),
            tag: h.finish(),
        }
    }

    /// Representatives `x` of the left cosets `xH` in `G`, first found in index order.
    pub fn left_transversal(&self) -> Vec<u32> {
        let g = self.group;
        let mut seen = vec![false; g.order()];
        let mut reps = Vec::with_capacity(g.order() / self.order());
        for x in 0..g.order() as u32 {
            if seen[x as usize] {
                continue;
            }
            reps.push(x);
            for &h in &self.elements {
                seen[g.mul(x, h) as usize] = true;
            }
        }
        reps
    }
}

/// A complex function on a group, stored per element.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassFunction {
    pub domain: DomainKey,
    /// Values in the order of the domain's element list.
    pub values: Vec<Complex64>,
}

impl ClassFunction {
    pub fn trivial(h: &Subgroup) -> Self {
        Self {
            domain: h.key(),
            values: vec![Complex64::new(1.0, 0.0); h.order()],
        }
    }

    pub fn from_fn(h: &Subgroup, f: impl Fn(u32) -> Complex64) -> Self {
        Self {
            domain: h.key(),
            values: h.elements().iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn degree(&self) -> Complex64 {
        // The identity is always the least index, hence first.
        self.values[0]
    }

    /// `χ(hgh⁻¹) = χ(g)`: exhaustive when `|H|² ≤ 10⁶`, else 10³ seeded probes.
    pub fn is_class_function(&self, h: &Subgroup) -> bool {
        let g = h.group;
        let n = h.order();
        let check = |a: usize, b: usize| {
            let c = g.conj(h.elements()[b], h.elements()[a]);
            (self.values[h.position(c).expect("closed")] - self.values[a]).norm() < TOL
        };
        if n * n <= 1_000_000 {
            (0..n).all(|a| (0..n).all(|b| check(a, b)))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0xc1a55);
            (0..1000).all(|_| check(rng.gen_range(0..n), rng.gen_range(0..n)))
        }
    }
}

/// `(1/|G|) Σ χ₁(g) conj(χ₂(g))`.
pub fn inner_product(a: &ClassFunction, b: &ClassFunction) -> Result<Complex64> {
    if a.domain != b.domain {
        return Err(Error::DomainMismatch);
    }
    let s: Complex64 = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| x * y.conj())
        .sum();
    Ok(s / a.values.len() as f64)
}

/// Rounds an inner product, failing if it is not an integer.
pub fn integral(z: Complex64) -> Option<i64> {
    let r = z.re.round();
    ((z - Complex64::new(r, 0.0)).norm() < INTEGRALITY_TOL).then_some(r as i64)
}

/// `Ind_H^G χ(g) = Σ_{x ∈ G/H} χ°(x⁻¹ g x)` over a left transversal.
pub fn induced_character(h: &Subgroup, g_whole: &Subgroup, chi: &ClassFunction) -> Result<ClassFunction> {
    if chi.domain != h.key() {
        return Err(Error::DomainMismatch);
    }
    if g_whole.order() != h.group.order() || !std::ptr::eq(h.group, g_whole.group) {
        return Err(Error::NotSubgroup("induction target must be the whole group".into()));
    }
    let g = h.group;
    let reps = h.left_transversal();
    let rep_inv: Vec<u32> = reps.iter().map(|&x| g.inv(x)).collect();
    let values = (0..g.order() as u32)
        .map(|y| {
            reps.iter()
                .zip(&rep_inv)
                .filter_map(|(&x, &xi)| h.position(g.mul(g.mul(xi, y), x)))
                .map(|p| chi.values[p])
                .sum()
        })
        .collect();
    Ok(ClassFunction {
        domain: g_whole.key(),
        values,
    })
}

/// `θ(x) = exp(2πi·a·log_g(x)/N)` on `l^×`.
pub fn eval_theta(theta: &CharExponent, t: &Tables, x: u32) -> Complex64 {
    let log = t.log(x).expect("character argument is nonzero") as u64;
    let n = theta.modulus();
    let e = ((theta.a() as u128 * log as u128) % n as u128) as f64 / n as f64;
    Complex64::from_polar(1.0, TAU * e)
}

/// The integer value of a prime-field element of `l`, if it is one.
pub fn prime_field_value(t: &Tables, x: u32) -> Option<u32> {
    let unit = t.one();
    (x % unit == 0).then_some(x / unit)
}

/// `ψ(x) = exp(2πi·Tr_{F_q/F_p}(u·x)/p)` for `x ∈ F_q ⊆ l`, `r = [F_q : F_p]`.
#[derive(Debug, Clone, Copy)]
pub struct AdditiveCharacter {
    pub r: u32,
    pub unit: u32,
}

impl AdditiveCharacter {
    pub fn eval(&self, t: &Tables, x: u32) -> Complex64 {
        let y = t.mul(self.unit, x);
        let mut tr = 0;
        let mut cur = y;
        for _ in 0..self.r {
            tr = t.add(tr, cur);
            cur = t.frob(cur, 1);
        }
        let v = prime_field_value(t, tr).expect("trace lands in F_p");
        Complex64::from_polar(1.0, TAU * v as f64 / t.p() as f64)
    }
}

/// Conjugacy type of an element of `GL_2(F_q)`, with the data the character
/// table needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gl2Class {
    Central { z: u32 },
    CentralUnipotent { z: u32 },
    Split { a: u32, b: u32 },
    Elliptic { x: u32, xq: u32 },
}

/// Classifies `m ∈ GL_2(F_q)` by its characteristic polynomial; eigenvalues
/// of elliptic elements are taken in `l = F_{q²}`.
pub fn gl2_class(t: &Tables, q: u64, m: &[u32]) -> Gl2Class {
    let tr = t.add(m[0], m[3]);
    let det = t.sub(t.mul(m[0], m[3]), t.mul(m[1], m[2]));
    let four = t.int(4);
    let disc = t.sub(t.mul(tr, tr), t.mul(four, det));
    let half = t.inv(t.int(2)).expect("odd characteristic");
    if disc == 0 {
        let z = t.mul(tr, half);
        if m[1] == 0 && m[2] == 0 {
            Gl2Class::Central { z }
        } else {
            Gl2Class::CentralUnipotent { z }
        }
    } else {
        let root = t.sqrt(disc).expect("every element of F_q is a square in F_{q²}");
        let a = t.mul(t.add(tr, root), half);
        let b = t.mul(t.sub(tr, root), half);
        // In F_q iff fixed by x ↦ x^q.
        if t.pow(root, q) == root {
            Gl2Class::Split { a, b }
        } else {
            Gl2Class::Elliptic { x: a, xq: b }
        }
    }
}

fn gl2_check(g: &FiniteGroup) -> Result<()> {
    let s = g.spec();
    if s.kind != GroupType::Gl || s.n != 2 {
        return Err(Error::InvalidParameter("expected GL_2(F_q)".into()));
    }
    if g.field().size() != s.q * s.q {
        return Err(Error::InvalidParameter("GL_2 must be built over l = F_{q²}".into()));
    }
    Ok(())
}

/// The character context for `θ` on `F_{q²}^×`.
pub fn gl2_theta(q: u64, a: u64) -> Result<CharExponent> {
    let ctx = CharContext::new(q, 2, Case::Ramified)?;
    if a >= ctx.modulus() {
        return Err(Error::InvalidParameter(format!("exponent {a} outside [0, {})", ctx.modulus())));
    }
    Ok(ctx.exponent(a))
}

/// The cuspidal character of `GL_2(F_q)` attached to a regular `θ` of `F_{q²}^×`.
pub fn cuspidal_character_gl2(g: &FiniteGroup, theta: &CharExponent) -> Result<ClassFunction> {
    gl2_check(g)?;
    if !theta.is_regular() {
        return Err(Error::NotRegular(theta.a()));
    }
    let q = g.spec().q;
    let t = g.tables();
    let whole = Subgroup::whole(g);
    let qm1 = Complex64::new(q as f64 - 1.0, 0.0);
    Ok(ClassFunction::from_fn(&whole, |x| {
        match gl2_class(t, q, g.element(x)) {
            Gl2Class::Central { z } => qm1 * eval_theta(theta, t, z),
            Gl2Class::CentralUnipotent { z } => -eval_theta(theta, t, z),
            Gl2Class::Split { .. } => Complex64::new(0.0, 0.0),
            Gl2Class::Elliptic { x, xq } => -(eval_theta(theta, t, x) + eval_theta(theta, t, xq)),
        }
    }))
}

/// `d × d` complex matrices indexed like the domain's element list.
#[derive(Debug, Clone)]
pub struct MatrixRep {
    pub domain: DomainKey,
    pub dim: usize,
    pub mats: Vec<DMatrix<Complex64>>,
}

impl MatrixRep {
    pub fn character(&self) -> ClassFunction {
        ClassFunction {
            domain: self.domain,
            values: self.mats.iter().map(|m| m.trace()).collect(),
        }
    }

    /// `ρ(ab) = ρ(a)ρ(b)` on `samples` seeded random pairs (all pairs if fewer).
    pub fn is_homomorphism(&self, h: &Subgroup, samples: usize, seed: u64) -> bool {
        let g = h.group;
        let n = h.order();
        let check = |a: usize, b: usize| {
            let ab = h.position(g.mul(h.elements()[a], h.elements()[b])).expect("closed");
            (&self.mats[a] * &self.mats[b] - &self.mats[ab]).norm() < TOL * self.dim as f64 * 10.0
        };
        if n * n <= samples {
            (0..n).all(|a| (0..n).all(|b| check(a, b)))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..samples).all(|_| check(rng.gen_range(0..n), rng.gen_range(0..n)))
        }
    }
}

/// The Gelfand–Graev representation `Ind_U^G ψ` of `GL_2(F_q)` as monomial
/// matrices on the left cosets of `U = {[[1, b], [0, 1]]}`.
pub struct GelfandGraev {
    pub u: Vec<u32>,
    pub psi: AdditiveCharacter,
    pub reps: Vec<u32>,
    pub mats: Vec<DMatrix<Complex64>>,
}

impl GelfandGraev {
    pub fn new(g: &FiniteGroup) -> Result<Self> {
        gl2_check(g)?;
        let t = g.tables();
        let one = t.one();
        let mut u: Vec<u32> = (0..g.order() as u32)
            .filter(|&x| {
                let m = g.element(x);
                m[0] == one && m[2] == 0 && m[3] == one
            })
            .collect();
        u.sort_unstable();
        let psi = AdditiveCharacter {
            r: crate::gf::PrimePower::from_q(g.spec().q)?.r,
            unit: one,
        };
        let sub = Subgroup::new(g, u.clone())?;
        let reps = sub.left_transversal();
        let mut rep_pos = vec![usize::MAX; g.order()];
        // coset(x) = index of the rep of xU, and the u with x = rep·u.
        let mut coset_of = vec![(usize::MAX, 0u32); g.order()];
        for (i, &r) in reps.iter().enumerate() {
            rep_pos[r as usize] = i;
            for &h in &u {
                coset_of[g.mul(r, h) as usize] = (i, h);
            }
        }
        let d = reps.len();
        let mats = (0..g.order() as u32)
            .map(|x| {
                let mut m = DMatrix::zeros(d, d);
                for (i, &r) in reps.iter().enumerate() {
                    let (j, h) = coset_of[g.mul(x, r) as usize];
                    m[(j, i)] = psi.eval(t, g.element(h)[1]);
                }
                m
            })
            .collect();
        Ok(Self { u, psi, reps, mats })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn character(&self, g: &FiniteGroup) -> ClassFunction {
        ClassFunction {
            domain: Subgroup::whole(g).key(),
            values: self.mats.iter().map(|m| m.trace()).collect(),
        }
    }
}

/// Cuspidal model: the `χ`-isotypic part of the Gelfand–Graev space,
/// cut out by `e_χ = (χ(1)/|G|) Σ conj(χ(g)) Ind(g)`.
pub fn realize_cuspidal_gl2(g: &FiniteGroup, theta: &CharExponent) -> Result<MatrixRep> {
    let chi = cuspidal_character_gl2(g, theta)?;
    let gg = GelfandGraev::new(g)?;
    realize_from(g, &chi, &gg)
}

pub fn realize_from(g: &FiniteGroup, chi: &ClassFunction, gg: &GelfandGraev) -> Result<MatrixRep> {
    let d = gg.dim();
    let deg = chi.degree().re;
    let mut e = DMatrix::<Complex64>::zeros(d, d);
    for (m, c) in gg.mats.iter().zip(&chi.values) {
        e += m * c.conj();
    }
    e *= Complex64::new(deg / g.order() as f64, 0.0);
    let expected = deg.round() as usize;
    let svd = e.svd(true, false);
    let u = svd.u.expect("requested");
    let cols: Vec<usize> = (0..d).filter(|&i| svd.singular_values[i] > 0.5).collect();
    if cols.len() != expected {
        return Err(Error::ProjectorRankMismatch {
            expected,
            found: cols.len(),
        });
    }
    let b = u.select_columns(&cols);
    let bh = b.adjoint();
    let mats = gg.mats.iter().map(|m| &bh * m * &b).collect();
    Ok(MatrixRep {
        domain: Subgroup::whole(g).key(),
        dim: expected,
        mats,
    })
}

/// One-dimensional `θ` on `GL_1(k_E) = k_E^× ⊆ l^×`.
pub fn character_rep_gl1(g: &FiniteGroup, theta: &CharExponent) -> Result<MatrixRep> {
    let s = g.spec();
    if s.kind != GroupType::Gl || s.n != 1 {
        return Err(Error::InvalidParameter("expected GL_1".into()));
    }
    let t = g.tables();
    Ok(MatrixRep {
        domain: Subgroup::whole(g).key(),
        dim: 1,
        mats: (0..g.order() as u32)
            .map(|x| DMatrix::from_element(1, 1, eval_theta(theta, t, g.element(x)[0])))
            .collect(),
    })
}

/// `ρ̄(l·u) = ρ(π_L(l))` on `P`, indexed like `pd.p`.
pub fn inflate_to_parabolic(
    rep: &MatrixRep,
    g: &FiniteGroup,
    levi: &FiniteGroup,
    pd: &ParabolicData,
) -> Result<MatrixRep> {
    if rep.domain != Subgroup::whole(levi).key() {
        return Err(Error::LeviMismatch("representation lives on another group".into()));
    }
    let mats = pd
        .p
        .iter()
        .map(|&x| pd.levi_projection(g, levi, x).map(|l| rep.mats[l as usize].clone()))
        .collect::<Result<Vec<_>>>()?;
    let sub = Subgroup::new(g, pd.p.clone())?;
    Ok(MatrixRep {
        domain: sub.key(),
        dim: rep.dim,
        mats,
    })
}

/// `c` with `τ_θ(x) = c·(θ(x) + θ(x^q))`, measured from the model's traces
/// over elliptic `x` where the bracket is nonzero. Returns every sample.
pub fn green_constant_samples(g: &FiniteGroup, theta: &CharExponent, model: &MatrixRep) -> Vec<Complex64> {
    let t = g.tables();
    let q = g.spec().q;
    let mut out = Vec::new();
    for x in 0..g.order() as u32 {
        if let Gl2Class::Elliptic { x: e, xq } = gl2_class(t, q, g.element(x)) {
            let s = eval_theta(theta, t, e) + eval_theta(theta, t, xq);
            if s.norm() > 1e-6 {
                out.push(model.mats[x as usize].trace() / s);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingrp::DEFAULT_MAX_ORDER;

    fn gl2(q: u64) -> FiniteGroup {
        FiniteGroup::build(GroupSpec::new(GroupType::Gl, 2, q).unwrap(), DEFAULT_MAX_ORDER).unwrap()
    }

    #[test]
    fn gl2_order_and_trivial_pairing() {
        let g = gl2(3);
        assert_eq!(g.order(), 48);
        let w = Subgroup::whole(&g);
        let one = ClassFunction::trivial(&w);
        assert_eq!(integral(inner_product(&one, &one).unwrap()), Some(1));
    }

    #[test]
    fn borel_induction_has_two_constituents() {
        let g = gl2(3);
        let b: Vec<u32> = (0..48).filter(|&x| g.element(x)[2] == 0).collect();
        let b = Subgroup::new(&g, b).unwrap();
        let w = Subgroup::whole(&g);
        let ind = induced_character(&b, &w, &ClassFunction::trivial(&b)).unwrap();
        assert_eq!(integral(ind.degree()), Some(4));
        assert_eq!(integral(inner_product(&ind, &ind).unwrap()), Some(2));
    }

    #[test]
    fn cuspidal_values() {
        let g = gl2(3);
        let theta = gl2_theta(3, 2).unwrap();
        let chi = cuspidal_character_gl2(&g, &theta).unwrap();
        assert!((chi.degree() - Complex64::new(2.0, 0.0)).norm() < TOL);
        assert!(chi.is_class_function(&Subgroup::whole(&g)));
        assert_eq!(integral(inner_product(&chi, &chi).unwrap()), Some(1));
        // Values at elliptic elements with eigenvalue g and g² in F_9.
        let t = g.tables();
        for x in 0..48u32 {
            if let Gl2Class::Elliptic { x: e, .. } = gl2_class(t, 3, g.element(x)) {
                let l = t.log(e).unwrap() % 8;
                let expect = match l {
                    1 | 3 | 5 | 7 => 0.0,
                    2 | 6 => 2.0,
                    _ => continue,
                };
                assert!((chi.values[x as usize] - Complex64::new(expect, 0.0)).norm() < TOL);
            }
        }
    }

    #[test]
    fn irregular_theta_rejected() {
        let g = gl2(3);
        assert!(matches!(
            cuspidal_character_gl2(&g, &gl2_theta(3, 4).unwrap()),
            Err(Error::NotRegular(4))
        ));
    }

    #[test]
    fn model_matches_character() {
        let g = gl2(3);
        let theta = gl2_theta(3, 2).unwrap();
        let gg = GelfandGraev::new(&g).unwrap();
        assert_eq!(gg.dim(), 16);
        let chi = cuspidal_character_gl2(&g, &theta).unwrap();
        let model = realize_from(&g, &chi, &gg).unwrap();
        assert_eq!(model.dim, 2);
        for (a, b) in model.character().values.iter().zip(&chi.values) {
            assert!((a - b).norm() < TOL);
        }
        assert!(model.is_homomorphism(&Subgroup::whole(&g), 1000, 7));
    }

    #[test]
    fn non_subgroup_rejected() {
        let g = gl2(3);
        assert!(matches!(Subgroup::new(&g, vec![0, 5]), Err(Error::NotSubgroup(_))));
    }
}
