//! Characters of `l^×` as exponents modulo `N = |l^×|`, with the Frobenius
//! twist, regularity, and the reducibility congruences.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::PrimePower;

/// Largest `N` accepted by the exhaustive scans.
pub const MAX_SCAN_MODULUS: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Unramified,
    Ramified,
}

impl Case {
    /// `[k_E : F_q]`.
    pub fn residue_degree(self) -> u32 {
        match self {
            Case::Unramified => 2,
            Case::Ramified => 1,
        }
    }

    /// Whether `n` has the parity at which the normalizer contains `J`.
    pub fn parity_ok(self, n: u32) -> bool {
        match self {
            Case::Unramified => n % 2 == 1,
            Case::Ramified => n % 2 == 0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Case::Unramified => "unramified",
            Case::Ramified => "ramified",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unramified" | "u" => Ok(Case::Unramified),
            "ramified" | "r" => Ok(Case::Ramified),
            other => Err(Error::InvalidParameter(format!("unknown case {other:?}"))),
        }
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(q, n, case)` together with `N = |l^×|` and the twist base `s = |k_E|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharContext {
    pub q: u64,
    pub n: u32,
    pub case: Case,
    modulus: u64,
    s: u64,
}

impl CharContext {
    pub fn new(q: u64, n: u32, case: Case) -> Result<Self> {
        PrimePower::from_q(q)?;
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        let deg = case.residue_degree() * n;
        let size = (q as u128)
            .checked_pow(deg)
            .filter(|&v| v - 1 <= u64::MAX as u128)
            .ok_or_else(|| Error::TooLarge(format!("|l^x| = {q}^{deg} - 1 exceeds 64 bits")))?;
        let s = q.pow(case.residue_degree());
        Ok(Self {
            q,
            n,
            case,
            modulus: (size - 1) as u64,
            s,
        })
    }

    /// `N = |l^×|`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    /// `s = |k_E|`; twisting by Frobenius multiplies exponents by `s`.
    pub fn twist_base(&self) -> u64 {
        self.s
    }
    pub fn parity_ok(&self) -> bool {
        self.case.parity_ok(self.n)
    }

    pub fn exponent(&self, a: u64) -> CharExponent {
        CharExponent {
            a: a % self.modulus,
            ctx: *self,
        }
    }

    /// Exponent of the constructive witness: the character of order
    /// `q^n + 1` (unramified, odd `n`) or `q^{n/2} + 1` (ramified, even `n`).
    pub fn witness_exponent(&self) -> Option<CharExponent> {
        if !self.parity_ok() {
            return None;
        }
        let half = match self.case {
            Case::Unramified => self.n,
            Case::Ramified => self.n / 2,
        };
        let ord = self.q.pow(half) + 1;
        Some(self.exponent(self.modulus / ord))
    }

    fn check_scan_cap(&self) -> Result<()> {
        if self.modulus > MAX_SCAN_MODULUS {
            return Err(Error::TooLarge(format!(
                "N = {} exceeds the scan cap {MAX_SCAN_MODULUS}",
                self.modulus
            )));
        }
        Ok(())
    }
}

/// `θ(g^t) = exp(2πi·a·t/N)` for the fixed primitive generator `g` of `l^×`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CharExponent {
    a: u64,
    ctx: CharContext,
}

impl CharExponent {
    pub fn a(&self) -> u64 {
        self.a
    }
    pub fn context(&self) -> &CharContext {
        &self.ctx
    }
    pub fn modulus(&self) -> u64 {
        self.ctx.modulus
    }

    pub fn order(&self) -> u64 {
        self.ctx.modulus / gcd(self.ctx.modulus, self.a)
    }

    /// `θ^{Φ^j}`: exponent `a·s^j mod N`. Negative `j` are taken mod `n`.
    pub fn galois_twist(&self, j: i64) -> CharExponent {
        let j = j.rem_euclid(self.ctx.n as i64) as u64;
        let m = self.ctx.modulus;
        self.ctx.exponent(mulmod(self.a, powmod(self.ctx.s, j, m), m))
    }

    /// `a·s^j` for `j = 0..n`.
    pub fn orbit(&self) -> Vec<u64> {
        let m = self.ctx.modulus;
        let mut out = Vec::with_capacity(self.ctx.n as usize);
        let mut x = self.a;
        for _ in 0..self.ctx.n {
            out.push(x);
            x = mulmod(x, self.ctx.s, m);
        }
        out
    }

    pub fn is_regular(&self) -> bool {
        let mut orbit = self.orbit();
        orbit.sort_unstable();
        orbit.dedup();
        orbit.len() == self.ctx.n as usize
    }

    /// Number of `j ∈ [0, n)` with `θ^{Φ^j} = θ`.
    pub fn stabilizer_order(&self) -> u32 {
        let m = self.ctx.modulus;
        (0..self.ctx.n)
            .filter(|&j| {
                let sj = powmod(self.ctx.s, j as u64, m);
                mulmod(self.a, (sj + m - 1) % m, m) == 0
            })
            .count() as u32
    }

    /// The bare congruence `a(q^{n+1} + q) ≡ 0` (unramified) or
    /// `a(q^{n/2} + 1) ≡ 0` (ramified, `n` even); `false` for ramified odd `n`.
    pub fn theta_congruence(&self) -> bool {
        let m = self.ctx.modulus;
        let q = self.ctx.q;
        let n = self.ctx.n as u64;
        let factor = match self.ctx.case {
            Case::Unramified => (powmod(q, n + 1, m) + q % m) % m,
            Case::Ramified if n % 2 == 0 => (powmod(q, n / 2, m) + 1) % m,
            Case::Ramified => return false,
        };
        mulmod(self.a, factor, m) == 0
    }

    /// The reducibility condition on `θ`. Outside the matching parity the
    /// normalizer of the type has no `J` and the condition is vacuous, so this
    /// is `false` there even when the bare congruence happens to hold.
    pub fn condition_theta(&self) -> bool {
        self.ctx.parity_ok() && self.theta_congruence()
    }

    /// Least `j ∈ [0, n)` with `a·s^j ≡ -a·q` (unramified) or `≡ -a` (ramified).
    pub fn condition_witness(&self) -> Option<u32> {
        let m = self.ctx.modulus;
        let target = match self.ctx.case {
            Case::Unramified => mulmod(self.a, self.ctx.q % m, m),
            Case::Ramified => self.a,
        };
        let target = (m - target) % m;
        self.orbit()
            .iter()
            .position(|&x| x == target)
            .map(|j| j as u32)
    }

    /// `θ^γ = θ^{-q}` (resp. `θ^{-1}`) for some Galois `γ`.
    pub fn has_witness(&self) -> bool {
        self.condition_witness().is_some()
    }

    pub fn summary(&self) -> CharSummary {
        let regular = self.is_regular();
        CharSummary {
            a: self.a,
            order: self.order(),
            regular,
            condition: self.condition_theta(),
            witness: if regular {
                self.condition_witness()
            } else {
                None
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharSummary {
    pub a: u64,
    pub order: u64,
    pub regular: bool,
    pub condition: bool,
    pub witness: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CharFilter {
    All,
    Regular,
    RegularAndCondition,
}

impl FromStr for CharFilter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(CharFilter::All),
            "regular" => Ok(CharFilter::Regular),
            "regular-and-condition" => Ok(CharFilter::RegularAndCondition),
            other => Err(Error::InvalidParameter(format!("unknown filter {other:?}"))),
        }
    }
}

/// All exponents passing `filter`, ascending.
pub fn enumerate_characters(ctx: &CharContext, filter: CharFilter) -> Result<Vec<CharExponent>> {
    ctx.check_scan_cap()?;
    Ok((0..ctx.modulus)
        .into_par_iter()
        .map(|a| ctx.exponent(a))
        .filter(|c| match filter {
            CharFilter::All => true,
            CharFilter::Regular => c.is_regular(),
            CharFilter::RegularAndCondition => c.is_regular() && c.condition_theta(),
        })
        .collect())
}

/// Twist orbits, each sorted ascending, listed by least member.
pub fn galois_orbits(ctx: &CharContext, only_regular: bool) -> Result<Vec<Vec<u64>>> {
    ctx.check_scan_cap()?;
    let mut seen = vec![false; ctx.modulus as usize];
    let mut orbits = Vec::new();
    for a in 0..ctx.modulus {
        if seen[a as usize] {
            continue;
        }
        let c = ctx.exponent(a);
        let mut orbit = c.orbit();
        orbit.sort_unstable();
        orbit.dedup();
        for &x in &orbit {
            seen[x as usize] = true;
        }
        if !only_regular || orbit.len() == ctx.n as usize {
            orbits.push(orbit);
        }
    }
    Ok(orbits)
}
