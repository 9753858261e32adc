//! Finite classical groups over `k_E` as explicit element lists, their Siegel
//! parabolics, and the double cosets `P \ G / P`.
//!
//! Matrices are row-major slices of packed field indices (see [`gf::Tables`]);
//! every group carries the ambient field `l` and its entries lie in `k_E ⊆ l`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{build_field, Field, PrimePower, Tables};

pub mod cache;

/// Default cap on the order of a group built by closure.
pub const DEFAULT_MAX_ORDER: u64 = 100_000;
/// Largest candidate count for the brute-force filter.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupType {
    /// `{g : ᵗḡ J g = J}` over `F_{q²}`.
    Gu,
    /// `{g : ᵗg J' g = J'}` over `F_q`.
    Sp,
    /// `{g : ᵗg J g = J}` over `F_q`.
    Oj,
    /// `GL_n(k_E)`, no form.
    Gl,
}

impl GroupType {
    pub fn as_str(self) -> &'static str {
        match self {
            GroupType::Gu => "gu",
            GroupType::Sp => "sp",
            GroupType::Oj => "oj",
            GroupType::Gl => "gl",
        }
    }
    fn code(self) -> u8 {
        match self {
            GroupType::Gu => 0,
            GroupType::Sp => 1,
            GroupType::Oj => 2,
            GroupType::Gl => 3,
        }
    }
    /// `[k_E : F_q]`.
    pub fn entry_degree(self) -> u32 {
        match self {
            GroupType::Gu => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GroupType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gu" => Ok(GroupType::Gu),
            "sp" => Ok(GroupType::Sp),
            "oj" => Ok(GroupType::Oj),
            "gl" => Ok(GroupType::Gl),
            other => Err(Error::InvalidParameter(format!("unknown group type {other:?}"))),
        }
    }
}

/// Which group, over which fields. For the forms, matrices are `2n × 2n`;
/// for [`GroupType::Gl`] they are `n × n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub kind: GroupType,
    pub n: u32,
    pub q: u64,
}

impl GroupSpec {
    pub fn new(kind: GroupType, n: u32, q: u64) -> Result<Self> {
        PrimePower::from_q(q)?;
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        Ok(Self { kind, n, q })
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            GroupType::Gl => self.n as usize,
            _ => 2 * self.n as usize,
        }
    }

    /// `|k_E|`.
    pub fn entry_field_size(&self) -> u64 {
        self.q.pow(self.kind.entry_degree())
    }

    /// Classical order formula.
    pub fn predicted_order(&self) -> u128 {
        let q = self.q as u128;
        let n = self.n;
        match self.kind {
            GroupType::Gu => {
                let m = 2 * n;
                let mut o = q.pow(m * (m - 1) / 2);
                for i in 1..=m {
                    let s = q.pow(i);
                    o *= if i % 2 == 0 { s - 1 } else { s + 1 };
                }
                o
            }
            GroupType::Sp => (1..=n).fold(q.pow(n * n), |o, i| o * (q.pow(2 * i) - 1)),
            GroupType::Oj => {
                (1..n).fold(2 * q.pow(n * (n - 1)) * (q.pow(n) - 1), |o, i| o * (q.pow(2 * i) - 1))
            }
            GroupType::Gl => {
                let qe = self.entry_field_size() as u128;
                (0..n).fold(1, |o, i| o * (qe.pow(n) - qe.pow(i)))
            }
        }
    }

    /// The ambient field `l`: `F_{q^{2n}}` for the unitary data, `F_{q^n}` otherwise.
    /// For `Gl` the Levi of the corresponding form group is meant, so the caller
    /// chooses via [`GroupSpec::levi_of`].
    fn ambient_degree(&self) -> u32 {
        let r = PrimePower::from_q(self.q).expect("validated").r;
        r * self.kind.entry_degree() * self.n
    }

    /// The Levi `GL_n(k_E)` of a form group, sharing its ambient field.
    pub fn levi_of(&self) -> GroupSpec {
        GroupSpec {
            kind: GroupType::Gl,
            n: self.n,
            q: self.q,
        }
    }
}

/// Row-major matrix arithmetic on packed indices.
pub mod mat {
    use crate::gf::Tables;

    pub fn identity(t: &Tables, d: usize) -> Vec<u32> {
        let mut m = vec![0; d * d];
        for i in 0..d {
            m[i * d + i] = t.one();
        }
        m
    }

    pub fn mul(t: &Tables, d: usize, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; d * d];
        for i in 0..d {
            for k in 0..d {
                let x = a[i * d + k];
                if x == 0 {
                    continue;
                }
                for j in 0..d {
                    let y = b[k * d + j];
                    if y != 0 {
                        out[i * d + j] = t.add(out[i * d + j], t.mul(x, y));
                    }
                }
            }
        }
        out
    }

    pub fn transpose(d: usize, a: &[u32]) -> Vec<u32> {
        let mut out = vec![0; d * d];
        for i in 0..d {
            for j in 0..d {
                out[j * d + i] = a[i * d + j];
            }
        }
        out
    }

    /// Entrywise `x ↦ x^{p^e}`.
    pub fn frob(t: &Tables, a: &[u32], e: u32) -> Vec<u32> {
        if e == 0 {
            return a.to_vec();
        }
        a.iter().map(|&x| t.frob(x, e)).collect()
    }

    /// Gaussian elimination; `None` if singular.
    pub fn inverse(t: &Tables, d: usize, a: &[u32]) -> Option<Vec<u32>> {
        let mut m = a.to_vec();
        let mut inv = identity(t, d);
        for col in 0..d {
            let piv = (col..d).find(|&r| m[r * d + col] != 0)?;
            if piv != col {
                for j in 0..d {
                    m.swap(piv * d + j, col * d + j);
                    inv.swap(piv * d + j, col * d + j);
                }
            }
            let s = t.inv(m[col * d + col])?;
            for j in 0..d {
                m[col * d + j] = t.mul(m[col * d + j], s);
                inv[col * d + j] = t.mul(inv[col * d + j], s);
            }
            for r in 0..d {
                let f = m[r * d + col];
                if r == col || f == 0 {
                    continue;
                }
                for j in 0..d {
                    m[r * d + j] = t.sub(m[r * d + j], t.mul(f, m[col * d + j]));
                    inv[r * d + j] = t.sub(inv[r * d + j], t.mul(f, inv[col * d + j]));
                }
            }
        }
        Some(inv)
    }

    pub fn det(t: &Tables, d: usize, a: &[u32]) -> u32 {
        let mut m = a.to_vec();
        let mut det = t.one();
        for col in 0..d {
            let Some(piv) = (col..d).find(|&r| m[r * d + col] != 0) else {
                return 0;
            };
            if piv != col {
                for j in 0..d {
                    m.swap(piv * d + j, col * d + j);
                }
                det = t.neg(det);
            }
            let p = m[col * d + col];
            det = t.mul(det, p);
            let pinv = t.inv(p).expect("nonzero pivot");
            for r in col + 1..d {
                let f = t.mul(m[r * d + col], pinv);
                if f == 0 {
                    continue;
                }
                for j in col..d {
                    m[r * d + j] = t.sub(m[r * d + j], t.mul(f, m[col * d + j]));
                }
            }
        }
        det
    }

    /// Top-left `k × k` block of a `d × d` matrix.
    pub fn block(d: usize, k: usize, a: &[u32], row0: usize, col0: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(k * k);
        for i in 0..k {
            out.extend_from_slice(&a[(row0 + i) * d + col0..(row0 + i) * d + col0 + k]);
        }
        out
    }

    /// `[[a, b], [c, d]]` from four `k × k` blocks.
    pub fn from_blocks(k: usize, a: &[u32], b: &[u32], c: &[u32], e: &[u32]) -> Vec<u32> {
        let d = 2 * k;
        let mut out = vec![0; d * d];
        for i in 0..k {
            for j in 0..k {
                out[i * d + j] = a[i * k + j];
                out[i * d + k + j] = b[i * k + j];
                out[(k + i) * d + j] = c[i * k + j];
                out[(k + i) * d + k + j] = e[i * k + j];
            }
        }
        out
    }
}

/// The defining form: `ᵗσ(g) F g = F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormSpec {
    pub dim: usize,
    pub matrix: Vec<u32>,
    /// `σ = Frob^{sigma_exp}` over `F_p`; zero means the identity.
    pub sigma_exp: u32,
}

impl FormSpec {
    pub fn for_spec(spec: &GroupSpec, t: &Tables) -> Option<Self> {
        let k = spec.n as usize;
        let zero = vec![0; k * k];
        let id = mat::identity(t, k);
        let neg_id: Vec<u32> = id.iter().map(|&x| t.neg(x)).collect();
        let r = PrimePower::from_q(spec.q).expect("validated").r;
        match spec.kind {
            GroupType::Gu => Some(FormSpec {
                dim: 2 * k,
                matrix: mat::from_blocks(k, &zero, &id, &id, &zero),
                sigma_exp: r,
            }),
            GroupType::Sp => Some(FormSpec {
                dim: 2 * k,
                matrix: mat::from_blocks(k, &zero, &neg_id, &id, &zero),
                sigma_exp: 0,
            }),
            GroupType::Oj => Some(FormSpec {
                dim: 2 * k,
                matrix: mat::from_blocks(k, &zero, &id, &id, &zero),
                sigma_exp: 0,
            }),
            GroupType::Gl => None,
        }
    }

    pub fn preserves(&self, t: &Tables, g: &[u32]) -> bool {
        let d = self.dim;
        let lhs = mat::mul(
            t,
            d,
            &mat::mul(t, d, &mat::transpose(d, &mat::frob(t, g, self.sigma_exp)), &self.matrix),
            g,
        );
        lhs == self.matrix
    }
}

/// A finite matrix group, fully enumerated. Element 0 is the identity and the
/// remaining elements are in breadth-first discovery order.
#[derive(Clone)]
pub struct FiniteGroup {
    spec: GroupSpec,
    field: Field,
    form: Option<FormSpec>,
    dim: usize,
    data: Vec<u32>,
    index: HashMap<Box<[u32]>, u32>,
    inverse: Vec<u32>,
    generators: Vec<u32>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("spec", &self.spec)
            .field("order", &self.order())
            .finish()
    }
}

/// `l` for a spec, plus the packed indices of `k_E ⊆ l`.
pub fn fields_for(spec: &GroupSpec) -> Result<(Field, Vec<u32>)> {
    let pp = PrimePower::from_q(spec.q)?;
    let kind_for_field = match spec.kind {
        // A Gl spec stands for the Levi of the unitary group when its entries
        // live in F_{q²}; callers build it through `FiniteGroup::levi`.
        GroupType::Gl => GroupType::Sp,
        k => k,
    };
    let amb = GroupSpec {
        kind: kind_for_field,
        ..*spec
    };
    let field = build_field(pp.p, amb.ambient_degree())?;
    field.tables()?;
    let sub = field
        .subfield_elements(pp.r * kind_for_field.entry_degree())?
        .iter()
        .map(|x| x.index() as u32)
        .collect();
    Ok((field, sub))
}

/// Generators: Levi embeddings, the whole unipotent radical, the Weyl element
/// of the form, and for the orthogonal group a reflection of determinant −1.
fn generators(spec: &GroupSpec, t: &Tables, form: &FormSpec, entries: &[u32]) -> Vec<Vec<u32>> {
    let k = spec.n as usize;
    let mut gens = Vec::new();
    for a in gl_generators(t, k, entries) {
        gens.push(levi_embed(t, form, k, &a));
    }
    for x in unipotent_blocks(t, form, k, entries) {
        if x.iter().any(|&e| e != 0) {
            let id = mat::identity(t, k);
            gens.push(mat::from_blocks(k, &id, &x, &vec![0; k * k], &id));
        }
    }
    gens.push(form.matrix.clone());
    if spec.kind == GroupType::Oj {
        let d = 2 * k;
        let mut s = mat::identity(t, d);
        let (a, b) = (k - 1, d - 1);
        s[a * d + a] = 0;
        s[b * d + b] = 0;
        s[a * d + b] = t.one();
        s[b * d + a] = t.one();
        gens.push(s);
    }
    gens
}

/// Generators of `GL_k` over the given entry set.
fn gl_generators(t: &Tables, k: usize, entries: &[u32]) -> Vec<Vec<u32>> {
    let qe = entries.len() as u64;
    // Primitive element of the entry field: g^{(|l|-1)/(|k_E|-1)}.
    let omega = t.exp(t.unit_order() as u64 / (qe - 1));
    let mut gens = Vec::new();
    let mut diag = mat::identity(t, k);
    diag[0] = omega;
    gens.push(diag);
    if k >= 2 {
        let mut e = mat::identity(t, k);
        e[1] = t.one();
        gens.push(e);
        let mut swap = vec![0; k * k];
        swap[1] = t.one();
        swap[k] = t.one();
        for i in 2..k {
            swap[i * k + i] = t.one();
        }
        gens.push(swap);
        let mut cycle = vec![0; k * k];
        for i in 0..k {
            cycle[i * k + (i + 1) % k] = t.one();
        }
        gens.push(cycle);
    }
    gens
}

/// `diag(a, ᵗσ(a)^{-1})` (symplectic and unitary alike reduce to this shape).
fn levi_embed(t: &Tables, form: &FormSpec, k: usize, a: &[u32]) -> Vec<u32> {
    let d = mat::inverse(t, k, &mat::transpose(k, &mat::frob(t, a, form.sigma_exp)))
        .expect("Levi block is invertible");
    let z = vec![0; k * k];
    mat::from_blocks(k, a, &z, &z, &d)
}

/// All `X` with `[[I, X], [0, I]]` in the group.
fn unipotent_blocks(t: &Tables, form: &FormSpec, k: usize, entries: &[u32]) -> Vec<Vec<u32>> {
    let qe = entries.len();
    let count = qe.pow((k * k) as u32);
    let id = mat::identity(t, k);
    let z = vec![0; k * k];
    let mut out = Vec::new();
    let mut x = vec![0u32; k * k];
    for mut c in 0..count {
        for e in x.iter_mut() {
            *e = entries[c % qe];
            c /= qe;
        }
        let u = mat::from_blocks(k, &id, &x, &z, &id);
        if form.preserves(t, &u) {
            out.push(x.clone());
        }
    }
    out.sort();
    out
}

impl FiniteGroup {
    /// Closure of the standard generators, capped at `max_order`.
    pub fn build(spec: GroupSpec, max_order: u64) -> Result<Self> {
        let predicted = spec.predicted_order();
        if predicted > max_order as u128 {
            return Err(Error::TooLarge(format!(
                "{} with n={} over q={} has order {predicted} > {max_order}",
                spec.kind, spec.n, spec.q
            )));
        }
        let (field, entries) = fields_for(&spec)?;
        let t = field.tables()?;
        let form = FormSpec::for_spec(&spec, t);
        let gens = match &form {
            Some(f) => {
                let gens = generators(&spec, t, f, &entries);
                if let Some(bad) = gens.iter().position(|g| !f.preserves(t, g)) {
                    return Err(Error::ClosureIncomplete(format!("generator {bad}")));
                }
                gens
            }
            None => gl_generators(t, spec.dim(), &entries),
        };
        Self::closure(spec, field, form, gens, max_order)
    }

    /// `GL_n(k_E)` over the same ambient field as a form group.
    pub fn levi(parent: &FiniteGroup) -> Result<Self> {
        let spec = parent.spec.levi_of();
        let field = parent.field.clone();
        let t = field.tables()?;
        let d = PrimePower::from_q(spec.q)?.r * parent.spec.kind.entry_degree();
        let entries: Vec<u32> = field
            .subfield_elements(d)?
            .iter()
            .map(|x| x.index() as u32)
            .collect();
        let gens = gl_generators(t, spec.dim(), &entries);
        Self::closure(spec, field, None, gens, u64::MAX)
    }

    fn closure(
        spec: GroupSpec,
        field: Field,
        form: Option<FormSpec>,
        gens: Vec<Vec<u32>>,
        max_order: u64,
    ) -> Result<Self> {
        let t = field.tables()?;
        let dim = spec.dim();
        let mut data: Vec<u32> = mat::identity(t, dim);
        let mut index: HashMap<Box<[u32]>, u32> = HashMap::new();
        index.insert(data.clone().into_boxed_slice(), 0);
        let mut queue = VecDeque::from([0u32]);
        while let Some(i) = queue.pop_front() {
            let g = data[i as usize * dim * dim..(i as usize + 1) * dim * dim].to_vec();
            for h in &gens {
                let gh = mat::mul(t, dim, &g, h);
                if index.contains_key(gh.as_slice()) {
                    continue;
                }
                let id = index.len() as u32;
                if id as u64 >= max_order {
                    return Err(Error::TooLarge(format!("closure exceeded {max_order} elements")));
                }
                data.extend_from_slice(&gh);
                index.insert(gh.into_boxed_slice(), id);
                queue.push_back(id);
            }
        }
        let gen_ids = gens.iter().map(|g| index[g.as_slice()]).collect();
        Self::assemble(spec, field, form, data, index, gen_ids)
    }

    fn assemble(
        spec: GroupSpec,
        field: Field,
        form: Option<FormSpec>,
        data: Vec<u32>,
        index: HashMap<Box<[u32]>, u32>,
        generators: Vec<u32>,
    ) -> Result<Self> {
        let t = field.tables()?;
        let dim = spec.dim();
        let dd = dim * dim;
        let order = data.len() / dd;
        let mut inverse = Vec::with_capacity(order);
        for i in 0..order {
            let g = &data[i * dd..(i + 1) * dd];
            let gi = mat::inverse(t, dim, g)
                .ok_or_else(|| Error::NotInGroup("singular element".into()))?;
            let j = *index
                .get(gi.as_slice())
                .ok_or_else(|| Error::ClosureIncomplete("inverse missing".into()))?;
            inverse.push(j);
        }
        Ok(Self {
            spec,
            field,
            form,
            dim,
            data,
            index,
            inverse,
            generators,
        })
    }

    /// Rebuilds from stored element data (used by the cache).
    pub(crate) fn from_parts(spec: GroupSpec, data: Vec<u32>, generators: Vec<u32>) -> Result<Self> {
        let (field, _) = fields_for(&spec)?;
        let t = field.tables()?;
        let form = FormSpec::for_spec(&spec, t);
        let dd = spec.dim() * spec.dim();
        if dd == 0 || data.len() % dd != 0 {
            return Err(Error::Cache("element data has the wrong length".into()));
        }
        if data.iter().any(|&x| x >= t.size()) {
            return Err(Error::Cache("entry outside the field".into()));
        }
        let mut index = HashMap::with_capacity(data.len() / dd);
        for (i, g) in data.chunks(dd).enumerate() {
            if index.insert(g.to_vec().into_boxed_slice(), i as u32).is_some() {
                return Err(Error::Cache("duplicate element".into()));
            }
        }
        if generators.iter().any(|&g| g as usize >= data.len() / dd) {
            return Err(Error::Cache("generator out of range".into()));
        }
        Self::assemble(spec, field, form, data, index, generators)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn tables(&self) -> &Tables {
        self.field.tables().expect("checked at build")
    }
    pub fn form(&self) -> Option<&FormSpec> {
        self.form.as_ref()
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn order(&self) -> usize {
        self.inverse.len()
    }
    pub fn identity(&self) -> u32 {
        0
    }
    pub fn generators(&self) -> &[u32] {
        &self.generators
    }
    pub(crate) fn raw_data(&self) -> &[u32] {
        &self.data
    }

    pub fn element(&self, i: u32) -> &[u32] {
        let dd = self.dim * self.dim;
        &self.data[i as usize * dd..(i as usize + 1) * dd]
    }
    pub fn index_of(&self, m: &[u32]) -> Option<u32> {
        self.index.get(m).copied()
    }
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let m = mat::mul(self.tables(), self.dim, self.element(a), self.element(b));
        self.index[m.as_slice()]
    }
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }
    /// `a b a^{-1}`.
    pub fn conj(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(a, b), self.inv(a))
    }
    pub fn det(&self, a: u32) -> u32 {
        mat::det(self.tables(), self.dim, self.element(a))
    }

    /// Every element satisfies the form equation.
    pub fn form_check(&self) -> bool {
        match &self.form {
            Some(f) => (0..self.order() as u32).all(|i| f.preserves(self.tables(), self.element(i))),
            None => true,
        }
    }

    /// Counts of elements by determinant, as `(packed det, count)` ascending.
    pub fn det_distribution(&self) -> Vec<(u32, usize)> {
        let mut counts: HashMap<u32, usize> = HashMap::new();
        for i in 0..self.order() as u32 {
            *counts.entry(self.det(i)).or_default() += 1;
        }
        let mut v: Vec<_> = counts.into_iter().collect();
        v.sort();
        v
    }
}

/// Every matrix over `k_E` satisfying the form equation, sorted. Independent
/// of the generator-based construction.
pub fn brute_force_elements(spec: &GroupSpec) -> Result<Vec<Vec<u32>>> {
    let (field, entries) = fields_for(spec)?;
    let t = field.tables()?;
    let form = FormSpec::for_spec(spec, t)
        .ok_or_else(|| Error::InvalidParameter("brute force needs a form".into()))?;
    let d = form.dim;
    let qe = entries.len() as u64;
    let count = (qe as u128).checked_pow((d * d) as u32).unwrap_or(u128::MAX);
    if count > BRUTE_FORCE_LIMIT as u128 {
        return Err(Error::TooLarge(format!("{count} candidate matrices")));
    }
    let mut out = Vec::new();
    let mut m = vec![0u32; d * d];
    for mut c in 0..count as u64 {
        for e in m.iter_mut() {
            *e = entries[(c % qe) as usize];
            c /= qe;
        }
        if form.preserves(t, &m) {
            out.push(m.clone());
        }
    }
    out.sort();
    Ok(out)
}

/// A double coset `P w P` with its first-found representative.
#[derive(Debug, Clone)]
pub struct DoubleCoset {
    pub rep: u32,
    pub size: usize,
}

/// Siegel parabolic `P = L ⋉ U` (zero lower-left block) and `P \ G / P`.
#[derive(Debug, Clone)]
pub struct ParabolicData {
    /// Group indices of `P`, ascending.
    pub p: Vec<u32>,
    pub levi: Vec<u32>,
    pub unipotent: Vec<u32>,
    in_p: Vec<bool>,
    /// Generators of `P` (Levi and unipotent elements among the group generators).
    pub p_generators: Vec<u32>,
    pub double_cosets: Vec<DoubleCoset>,
    coset_label: Vec<u32>,
}

impl ParabolicData {
    pub fn siegel(g: &FiniteGroup) -> Result<Self> {
        if g.form.is_none() {
            return Err(Error::InvalidParameter("Siegel parabolic needs a form group".into()));
        }
        let k = g.spec.n as usize;
        let d = g.dim;
        let zero_block = |m: &[u32], r0: usize, c0: usize| {
            (0..k).all(|i| (0..k).all(|j| m[(r0 + i) * d + c0 + j] == 0))
        };
        let t = g.tables();
        let id_k = mat::identity(t, k);
        let mut p = Vec::new();
        let mut levi = Vec::new();
        let mut unipotent = Vec::new();
        let mut in_p = vec![false; g.order()];
        for i in 0..g.order() as u32 {
            let m = g.element(i);
            if !zero_block(m, k, 0) {
                continue;
            }
            p.push(i);
            in_p[i as usize] = true;
            if zero_block(m, 0, k) {
                levi.push(i);
            }
            if mat::block(d, k, m, 0, 0) == id_k && mat::block(d, k, m, k, k) == id_k {
                unipotent.push(i);
            }
        }
        let p_generators: Vec<u32> = {
            let mut v: Vec<u32> = g.generators.iter().copied().filter(|&x| in_p[x as usize]).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let mut coset_label = vec![u32::MAX; g.order()];
        let mut double_cosets = Vec::new();
        for start in 0..g.order() as u32 {
            if coset_label[start as usize] != u32::MAX {
                continue;
            }
            let label = double_cosets.len() as u32;
            coset_label[start as usize] = label;
            let mut queue = VecDeque::from([start]);
            let mut size = 0;
            while let Some(x) = queue.pop_front() {
                size += 1;
                for &s in &p_generators {
                    for y in [g.mul(s, x), g.mul(x, s)] {
                        if coset_label[y as usize] == u32::MAX {
                            coset_label[y as usize] = label;
                            queue.push_back(y);
                        }
                    }
                }
            }
            double_cosets.push(DoubleCoset { rep: start, size });
        }
        Ok(Self {
            p,
            levi,
            unipotent,
            in_p,
            p_generators,
            double_cosets,
            coset_label,
        })
    }

    pub fn contains(&self, x: u32) -> bool {
        self.in_p[x as usize]
    }

    /// Representative of `P g P`.
    pub fn double_coset_of(&self, g: u32) -> Result<u32> {
        let label = *self
            .coset_label
            .get(g as usize)
            .ok_or_else(|| Error::NotInGroup(format!("element {g}")))?;
        Ok(self.double_cosets[label as usize].rep)
    }

    /// Position of `P g P` in [`double_cosets`](Self::double_cosets).
    pub fn coset_index(&self, g: u32) -> usize {
        self.coset_label[g as usize] as usize
    }

    /// `P ∩ w P w^{-1}`, ascending.
    pub fn intersection_with_conjugate(&self, g: &FiniteGroup, w: u32) -> Vec<u32> {
        let wi = g.inv(w);
        self.p
            .iter()
            .copied()
            .filter(|&x| self.contains(g.mul(g.mul(wi, x), w)))
            .collect()
    }

    /// `[P : P ∩ w P w^{-1}]`.
    pub fn index_of_intersection(&self, g: &FiniteGroup, w: u32) -> usize {
        self.p.len() / self.intersection_with_conjugate(g, w).len()
    }

    /// The representative that is not in `P`, when there are exactly two cosets.
    pub fn long_element(&self) -> Option<u32> {
        self.double_cosets
            .iter()
            .map(|c| c.rep)
            .find(|&r| !self.contains(r))
    }

    /// Top-left `n × n` block of `x ∈ P`, as an element of the Levi group.
    pub fn levi_projection(&self, g: &FiniteGroup, levi: &FiniteGroup, x: u32) -> Result<u32> {
        if !self.contains(x) {
            return Err(Error::NotInGroup("not in P".into()));
        }
        let k = g.spec.n as usize;
        let block = mat::block(g.dim, k, g.element(x), 0, 0);
        levi.index_of(&block)
            .ok_or_else(|| Error::LeviMismatch("top-left block outside the Levi group".into()))
    }
}
