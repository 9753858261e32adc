//! The finite Hecke algebra `H(G, ρ̄)` of `End(ρ̄^∨)`-valued functions on `G`
//! that are bi-equivariant under the Siegel parabolic, and the quadratic
//! relation of its non-identity generator.

use std::collections::VecDeque;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fingrp::{cache, FiniteGroup, GroupSpec, GroupType, ParabolicData};
use crate::finrep::{
    character_rep_gl1, gl2_theta, induced_character, inflate_to_parabolic, inner_product, integral,
    realize_cuspidal_gl2, ClassFunction, MatrixRep, Subgroup,
};
use crate::chars::{Case, CharContext};

type CMat = DMatrix<Complex64>;

/// Residual above which a convolution is said to leave the basis span.
pub const EXPRESS_TOL: f64 = 1e-6;
/// Tolerance on the measured `λ`.
pub const LAMBDA_TOL: f64 = 1e-6;

const CHUNK: usize = 512;

fn tree_sum(mut v: Vec<CMat>, d: usize) -> CMat {
    if v.is_empty() {
        return CMat::zeros(d, d);
    }
    while v.len() > 1 {
        v = v
            .chunks(2)
            .map(|p| if p.len() == 2 { &p[0] + &p[1] } else { p[0].clone() })
            .collect();
    }
    v.pop().unwrap()
}

/// Group, parabolic, and the dual of the inflated representation, with a
/// factorization `y = p · w_c · p'` for every `y` in every double coset `c`.
pub struct HeckeContext<'a> {
    pub g: &'a FiniteGroup,
    pub pd: &'a ParabolicData,
    pub dim: usize,
    /// `ρ̄^∨(p) = ᵗρ̄(p⁻¹)`, indexed like `pd.p`.
    dual: Vec<CMat>,
    p_pos: Vec<u32>,
    /// Chosen representative of each double coset.
    pub reps: Vec<u32>,
    factor: Vec<(u32, u32)>,
}

impl<'a> HeckeContext<'a> {
    /// `rho` must be indexed like `pd.p`. The representative of each double
    /// coset is the form matrix when it lies there, else `pd`'s representative.
    pub fn new(g: &'a FiniteGroup, pd: &'a ParabolicData, rho: &MatrixRep) -> Result<Self> {
        if rho.mats.len() != pd.p.len() {
            return Err(Error::LeviMismatch("representation is not indexed by P".into()));
        }
        let mut p_pos = vec![u32::MAX; g.order()];
        for (i, &x) in pd.p.iter().enumerate() {
            p_pos[x as usize] = i as u32;
        }
        let dual = pd
            .p
            .iter()
            .map(|&x| rho.mats[p_pos[g.inv(x) as usize] as usize].transpose())
            .collect();
        let weyl = g.form().and_then(|f| g.index_of(&f.matrix));
        let reps: Vec<u32> = pd
            .double_cosets
            .iter()
            .enumerate()
            .map(|(c, dc)| match weyl {
                Some(w) if pd.coset_index(w) == c && c != 0 => w,
                _ => dc.rep,
            })
            .collect();
        let mut factor = vec![(u32::MAX, u32::MAX); g.order()];
        for &r in &reps {
            factor[r as usize] = (g.identity(), g.identity());
            let mut queue = VecDeque::from([r]);
            while let Some(y) = queue.pop_front() {
                let (p, pp) = factor[y as usize];
                for &s in &pd.p_generators {
                    let left = g.mul(s, y);
                    if factor[left as usize].0 == u32::MAX {
                        factor[left as usize] = (g.mul(s, p), pp);
                        queue.push_back(left);
                    }
                    let right = g.mul(y, s);
                    if factor[right as usize].0 == u32::MAX {
                        factor[right as usize] = (p, g.mul(pp, s));
                        queue.push_back(right);
                    }
                }
            }
        }
        Ok(Self {
            g,
            pd,
            dim: rho.dim,
            dual,
            p_pos,
            reps,
            factor,
        })
    }

    pub fn dual(&self, p: u32) -> &CMat {
        &self.dual[self.p_pos[p as usize] as usize]
    }

    /// `(p, p')` with `y = p · w · p'` for the representative `w` of `y`'s coset.
    pub fn factorization(&self, y: u32) -> (u32, u32) {
        self.factor[y as usize]
    }

    /// `P ∩ w P w⁻¹` for the representative of coset `c`.
    pub fn stabilizer(&self, c: usize) -> Vec<u32> {
        self.pd.intersection_with_conjugate(self.g, self.reps[c])
    }

    /// Orthonormal basis (Frobenius inner product) of the `A` with
    /// `ρ̄^∨(x) A = A ρ̄^∨(w⁻¹xw)` for all `x ∈ P ∩ wPw⁻¹`.
    pub fn intertwiner_space(&self, c: usize) -> Vec<CMat> {
        let g = self.g;
        let w = self.reps[c];
        let wi = g.inv(w);
        let h = self.stabilizer(c);
        let d = self.dim;
        // Average of A ↦ ρ̄^∨(x) A ρ̄^∨(w⁻¹xw)⁻¹ over the stabilizer: the
        // projector onto the intertwiners.
        let mut proj = CMat::zeros(d * d, d * d);
        for &x in &h {
            let left = self.dual(x);
            let right_inv = self.dual(g.mul(g.mul(wi, g.inv(x)), w));
            for col in 0..d * d {
                let mut e = CMat::zeros(d, d);
                e[(col / d, col % d)] = Complex64::new(1.0, 0.0);
                let img = left * e * right_inv;
                for row in 0..d * d {
                    proj[(row, col)] += img[(row / d, row % d)];
                }
            }
        }
        proj /= Complex64::new(h.len() as f64, 0.0);
        let svd = proj.svd(true, false);
        let u = svd.u.expect("requested");
        (0..d * d)
            .filter(|&i| svd.singular_values[i] > 0.5)
            .map(|i| CMat::from_fn(d, d, |r, s| u[(r * d + s, i)]))
            .collect()
    }

    /// `Σ_c dim` of the intertwiner spaces.
    pub fn hecke_dimension(&self) -> usize {
        (0..self.reps.len()).map(|c| self.intertwiner_space(c).len()).sum()
    }

    /// Basis functions: the identity on `P`, and one normalized function per
    /// remaining coset with a one-dimensional intertwiner space.
    pub fn basis(&self) -> Result<Vec<EquivariantFunction>> {
        let mut out = vec![EquivariantFunction {
            coset: 0,
            value: CMat::identity(self.dim, self.dim),
        }];
        for c in 1..self.reps.len() {
            let space = self.intertwiner_space(c);
            match space.len() {
                0 => {}
                1 => out.push(EquivariantFunction {
                    coset: c,
                    value: self.normalize(c, space.into_iter().next().unwrap()),
                }),
                k => {
                    return Err(Error::InvalidParameter(format!(
                        "double coset {c} carries a {k}-dimensional intertwiner space"
                    )))
                }
            }
        }
        Ok(out)
    }

    /// Scales `A` so that `A² = I` when `w² ∈ P` (then `A²` is scalar), with
    /// the first nonzero entry on the positive side.
    fn normalize(&self, c: usize, a: CMat) -> CMat {
        let g = self.g;
        let w = self.reps[c];
        let mut a = a;
        if self.pd.contains(g.mul(w, w)) {
            let s = (&a * &a).trace() / Complex64::new(self.dim as f64, 0.0);
            if s.norm() > 1e-12 {
                a /= s.sqrt();
            }
        }
        if let Some(first) = a.iter().find(|z| z.norm() > 1e-9) {
            let positive = if first.re.abs() > 1e-9 { first.re > 0.0 } else { first.im > 0.0 };
            if !positive {
                a = -a;
            }
        }
        a
    }

    pub fn eval(&self, f: &EquivariantFunction, y: u32) -> CMat {
        if self.pd.coset_index(y) != f.coset {
            return CMat::zeros(self.dim, self.dim);
        }
        let (p, pp) = self.factor[y as usize];
        self.dual(p) * &f.value * self.dual(pp)
    }

    /// `(f * h)(x) = (1/|P|) Σ_{y ∈ supp f} f(y) h(y⁻¹x)`, at each coset
    /// representative. Chunks are summed in parallel and then combined by a
    /// fixed pairwise tree, so results do not depend on scheduling.
    pub fn convolve_at_reps(&self, f: &EquivariantFunction, h: &EquivariantFunction) -> Vec<CMat> {
        let g = self.g;
        let support: Vec<u32> = (0..g.order() as u32)
            .filter(|&y| self.pd.coset_index(y) == f.coset)
            .collect();
        let scale = Complex64::new(1.0 / self.pd.p.len() as f64, 0.0);
        self.reps
            .iter()
            .map(|&x| {
                let partials: Vec<CMat> = support
                    .par_chunks(CHUNK)
                    .map(|chunk| {
                        let mut acc = CMat::zeros(self.dim, self.dim);
                        for &y in chunk {
                            let z = g.mul(g.inv(y), x);
                            if self.pd.coset_index(z) == h.coset {
                                acc += self.eval(f, y) * self.eval(h, z);
                            }
                        }
                        acc
                    })
                    .collect();
                tree_sum(partials, self.dim) * scale
            })
            .collect()
    }

    /// `f * h` expressed as coefficients on `basis`.
    pub fn convolve(
        &self,
        f: &EquivariantFunction,
        h: &EquivariantFunction,
        basis: &[EquivariantFunction],
    ) -> Result<Vec<Complex64>> {
        let values = self.convolve_at_reps(f, h);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); basis.len()];
        for (c, v) in values.iter().enumerate() {
            let residual = match basis.iter().position(|b| b.coset == c) {
                Some(i) => {
                    let a = &basis[i].value;
                    let coef = a.dotc(v) / a.dotc(a);
                    coeffs[i] = coef;
                    (v - a * coef).norm()
                }
                None => v.norm(),
            };
            if residual > EXPRESS_TOL {
                return Err(Error::BasisExpressFailure(residual));
            }
        }
        Ok(coeffs)
    }

    /// `f(p y p') = ρ̄^∨(p) f(y) ρ̄^∨(p')` on seeded random samples.
    pub fn check_equivariance(&self, f: &EquivariantFunction, samples: usize, seed: u64) -> bool {
        let g = self.g;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let np = self.pd.p.len();
        (0..samples).all(|_| {
            let y = rng.gen_range(0..g.order() as u32);
            let p = self.pd.p[rng.gen_range(0..np)];
            let pp = self.pd.p[rng.gen_range(0..np)];
            let lhs = self.eval(f, g.mul(g.mul(p, y), pp));
            let rhs = self.dual(p) * self.eval(f, y) * self.dual(pp);
            (lhs - rhs).norm() < 1e-9
        })
    }
}

/// A function supported on one double coset, determined by its value at the
/// coset's chosen representative.
#[derive(Debug, Clone)]
pub struct EquivariantFunction {
    pub coset: usize,
    pub value: CMat,
}

impl EquivariantFunction {
    pub fn scaled(&self, t: Complex64) -> Self {
        Self {
            coset: self.coset,
            value: &self.value * t,
        }
    }
}

/// `φ² = a φ + b`, its root ratio `λ`, and `t` with `(tφ)² = (λ-1)(tφ) + λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadRelation {
    pub a: f64,
    pub b: f64,
    pub mu_plus: f64,
    pub mu_minus: f64,
    pub lambda: f64,
    pub t: f64,
}

impl QuadRelation {
    pub fn from_coefficients(a: f64, b: f64) -> Result<Self> {
        if b <= 0.0 {
            return Err(Error::InvalidParameter(format!("constant term {b} is not positive")));
        }
        let root = (a * a + 4.0 * b).sqrt();
        let mu_plus = (a + root) / 2.0;
        let mu_minus = (a - root) / 2.0;
        Ok(Self {
            a,
            b,
            mu_plus,
            mu_minus,
            lambda: -mu_plus / mu_minus,
            t: -1.0 / mu_minus,
        })
    }

    /// Coefficients of the normalized relation `(λ-1, λ)`.
    pub fn normalized(&self) -> (f64, f64) {
        (self.t * self.a, self.t * self.t * self.b)
    }
}

/// `f * f = a f + b·1` for the non-identity basis element, rearranged so `a ≥ 0`.
pub fn quadratic_relation(
    ctx: &HeckeContext,
    basis: &mut [EquivariantFunction],
) -> Result<QuadRelation> {
    let (a, b) = relation_coefficients(ctx, basis)?;
    QuadRelation::from_coefficients(a, b)
}

/// `(a, b)` with `φ² = a φ + b` for `φ = basis[1]`, flipping the sign of `φ`
/// so that `a ≥ 0`.
pub fn relation_coefficients(ctx: &HeckeContext, basis: &mut [EquivariantFunction]) -> Result<(f64, f64)> {
    if basis.len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "the Hecke algebra has dimension {}, not 2",
            basis.len()
        )));
    }
    let f = basis[1].clone();
    let coeffs = ctx.convolve(&f, &f, basis)?;
    let (b, mut a) = (coeffs[0], coeffs[1]);
    if a.im.abs() > EXPRESS_TOL || b.im.abs() > EXPRESS_TOL {
        return Err(Error::InvalidParameter(format!("non-real relation {a}, {b}")));
    }
    if a.re < 0.0 {
        basis[1] = f.scaled(Complex64::new(-1.0, 0.0));
        a = -a;
    }
    Ok((a.re, b.re))
}

/// Predicted `λ` for the model: `q^n` unitary, `q^{n/2}` symplectic
/// or orthogonal with `n` even.
pub fn predicted_lambda(kind: GroupType, n: u32, q: u64) -> Option<f64> {
    match kind {
        GroupType::Gu => Some((q as f64).powi(n as i32)),
        GroupType::Sp | GroupType::Oj if n % 2 == 0 => Some((q as f64).powi(n as i32 / 2)),
        _ => None,
    }
}

pub fn check_lambda(measured: f64, expected: f64) -> Result<()> {
    if (measured - expected).abs() > LAMBDA_TOL {
        return Err(Error::RelationMismatch { measured, expected });
    }
    Ok(())
}

fn representations(
    group: &FiniteGroup,
    levi: &FiniteGroup,
    pd: &ParabolicData,
    a: u64,
) -> Result<(MatrixRep, MatrixRep)> {
    let spec = group.spec();
    let levi_rep = if spec.n == 1 {
        let case = if spec.kind == GroupType::Gu { Case::Unramified } else { Case::Ramified };
        let ctx = CharContext::new(spec.q, 1, case)?;
        if a >= ctx.modulus() {
            return Err(Error::InvalidParameter(format!(
                "exponent {a} outside [0, {})",
                ctx.modulus()
            )));
        }
        character_rep_gl1(levi, &ctx.exponent(a))?
    } else {
        realize_cuspidal_gl2(levi, &gl2_theta(spec.q, a)?)?
    };
    let rho = inflate_to_parabolic(&levi_rep, group, levi, pd)?;
    Ok((levi_rep, rho))
}

/// Everything [`verify`] builds, kept for further probing.
pub struct Pipeline {
    pub group: FiniteGroup,
    pub levi: FiniteGroup,
    pub pd: ParabolicData,
    pub levi_rep: MatrixRep,
    pub rho: MatrixRep,
    pub cache_hit: bool,
}

impl Pipeline {
    /// Group, Levi, parabolic, and `ρ̄` for `θ = a` (a character of `F_{q²}^×`).
    /// Supported: `gu` with `n = 1`, `sp` and `oj` with `n ∈ {1, 2}`.
    pub fn build(kind: GroupType, n: u32, q: u64, a: u64, max_order: u64, cache_dir: Option<&Path>) -> Result<Self> {
        let supported = matches!((kind, n), (GroupType::Gu, 1) | (GroupType::Sp | GroupType::Oj, 1 | 2));
        if !supported {
            return Err(Error::TooLarge(format!(
                "{kind} with n={n}: only gu n=1 and sp/oj n≤2 have cuspidal models here"
            )));
        }
        let spec = GroupSpec::new(kind, n, q)?;
        let (group, cache_hit) = cache::build_cached(spec, max_order, cache_dir)?;
        let levi = FiniteGroup::levi(&group)?;
        let pd = ParabolicData::siegel(&group)?;
        let (levi_rep, rho) = representations(&group, &levi, &pd, a)?;
        Ok(Self {
            group,
            levi,
            pd,
            levi_rep,
            rho,
            cache_hit,
        })
    }

    /// The same group data with `ρ̄` rebuilt for another exponent.
    pub fn with_theta(&self, a: u64) -> Result<Self> {
        let (levi_rep, rho) = representations(&self.group, &self.levi, &self.pd, a)?;
        Ok(Self {
            group: self.group.clone(),
            levi: self.levi.clone(),
            pd: self.pd.clone(),
            levi_rep,
            rho,
            cache_hit: self.cache_hit,
        })
    }

    pub fn context(&self) -> Result<HeckeContext<'_>> {
        HeckeContext::new(&self.group, &self.pd, &self.rho)
    }

    /// `⟨Ind_P^G tr ρ̄, Ind_P^G tr ρ̄⟩`, computed from characters alone.
    pub fn mackey_dimension(&self) -> Result<i64> {
        let p = Subgroup::new(&self.group, self.pd.p.clone())?;
        let whole = Subgroup::whole(&self.group);
        let chi = ClassFunction {
            domain: p.key(),
            values: self.rho.mats.iter().map(|m| m.trace()).collect(),
        };
        let ind = induced_character(&p, &whole, &chi)?;
        let ip = inner_product(&ind, &ind)?;
        integral(ip).ok_or_else(|| Error::InvalidParameter(format!("non-integral pairing {ip}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub group: GroupType,
    pub n: u32,
    pub q: u64,
    pub theta: u64,
    pub order: usize,
    pub parabolic_order: usize,
    pub double_cosets: usize,
    pub dimension: usize,
    pub mackey_dimension: i64,
    pub index: Option<usize>,
    pub raw: Option<(f64, f64)>,
    pub lambda: Option<f64>,
    pub t: Option<f64>,
    pub normalized: Option<(f64, f64)>,
    pub expected_lambda: Option<f64>,
    pub dual_minus_one_is_identity: Option<bool>,
    pub note: Option<String>,
    pub pass: bool,
}

/// Builds everything and extracts the relation. A measured `λ` that differs
/// from the predicted value gives `pass = false`; see [`check_lambda`].
pub fn verify(kind: GroupType, n: u32, q: u64, a: u64, max_order: u64, cache_dir: Option<&Path>) -> Result<VerifyReport> {
    let pipe = Pipeline::build(kind, n, q, a, max_order, cache_dir)?;
    let ctx = pipe.context()?;
    let mut basis = ctx.basis()?;
    let dimension = basis.len();
    let mackey = pipe.mackey_dimension()?;
    let expected = predicted_lambda(kind, n, q);
    let g = &pipe.group;
    let minus_one = {
        let t = g.tables();
        let d = g.dim();
        let mut m = vec![0u32; d * d];
        for i in 0..d {
            m[i * d + i] = t.neg(t.one());
        }
        g.index_of(&m)
    };
    let dual_minus_one_is_identity = (kind == GroupType::Sp).then(|| {
        minus_one.is_some_and(|x| (ctx.dual(x) - CMat::identity(ctx.dim, ctx.dim)).norm() < 1e-9)
    });
    let mut report = VerifyReport {
        group: kind,
        n,
        q,
        theta: a,
        order: g.order(),
        parabolic_order: pipe.pd.p.len(),
        double_cosets: pipe.pd.double_cosets.len(),
        dimension,
        mackey_dimension: mackey,
        index: None,
        raw: None,
        lambda: None,
        t: None,
        normalized: None,
        expected_lambda: expected,
        dual_minus_one_is_identity,
        note: None,
        pass: dimension as i64 == mackey,
    };
    if dimension < 2 {
        report.note = Some("induced irreducible at finite level".into());
        return Ok(report);
    }
    let (a, b) = relation_coefficients(&ctx, &mut basis)?;
    report.index = Some(pipe.pd.index_of_intersection(g, ctx.reps[basis[1].coset]));
    report.raw = Some((a, b));
    if b <= 0.0 {
        // Happens for sp with n = 1 and a quadratic character odd at -1.
        report.note = Some(format!("constant term {b} is not positive; no real normalization"));
        if expected.is_some() {
            report.pass = false;
        }
        return Ok(report);
    }
    let rel = QuadRelation::from_coefficients(a, b)?;
    report.lambda = Some(rel.lambda);
    report.t = Some(rel.t);
    report.normalized = Some(rel.normalized());
    if let Some(e) = expected {
        report.pass &= check_lambda(rel.lambda, e).is_ok();
    }
    if let Some(false) = dual_minus_one_is_identity {
        report.pass = false;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingrp::DEFAULT_MAX_ORDER;

    #[test]
    fn unitary_relation() {
        let r = verify(GroupType::Gu, 1, 3, 2, DEFAULT_MAX_ORDER, None).unwrap();
        assert_eq!(r.dimension, 2);
        assert_eq!(r.mackey_dimension, 2);
        let (a, b) = r.raw.unwrap();
        assert!((a - 2.0).abs() < 1e-9 && (b - 3.0).abs() < 1e-9, "{a} {b}");
        assert!((r.lambda.unwrap() - 3.0).abs() < 1e-9);
        assert!(r.pass);
    }

    #[test]
    fn unitary_negative_control() {
        let r = verify(GroupType::Gu, 1, 3, 1, DEFAULT_MAX_ORDER, None).unwrap();
        assert_eq!((r.dimension, r.mackey_dimension), (1, 1));
        assert!(r.pass && r.lambda.is_none());
    }

    #[test]
    fn relation_algebra() {
        let r = QuadRelation::from_coefficients(6.0, 27.0).unwrap();
        assert!((r.lambda - 3.0).abs() < 1e-12);
        assert!((r.t - 1.0 / 3.0).abs() < 1e-12);
        let (x, y) = r.normalized();
        assert!((x - 2.0).abs() < 1e-12 && (y - 3.0).abs() < 1e-12);
    }

    #[test]
    fn mismatch_is_an_error() {
        assert!(matches!(check_lambda(2.0, 3.0), Err(Error::RelationMismatch { .. })));
    }
}
