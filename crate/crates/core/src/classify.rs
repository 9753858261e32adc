//! Reducibility verdict for `(q, n, case, θ, ν(ζ))`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::chars::{Case, CharContext};
use crate::error::{Error, Result};
use crate::scalar::{ExactJson, QScalar, Scalar};

/// Default tolerance for float membership tests.
pub const FLOAT_TOL: f64 = 1e-9;

/// Parameters of the two quadratic relations `g_i^2 = (γ - γ^{-1}) g_i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeckeParams {
    pub q: u64,
    pub n: u32,
    pub case: Case,
    /// `q^n` (unramified) or `q^{n/2}` (ramified).
    pub lambda: QScalar,
    /// `λ^{1/2}`.
    pub gamma: QScalar,
}

impl HeckeParams {
    /// `None` for ramified odd `n`, where `γ = q^{n/4}` leaves `Q(√q)` and the
    /// algebra has no `J` generator anyway.
    pub fn new(q: u64, n: u32, case: Case) -> Option<Self> {
        let (lambda_exp, gamma_exp) = match case {
            Case::Unramified => (2 * n as i64, n as i64),
            Case::Ramified if n % 2 == 0 => (n as i64, n as i64 / 2),
            Case::Ramified => return None,
        };
        Some(Self {
            q,
            n,
            case,
            lambda: QScalar::sqrt_power(q, lambda_exp),
            gamma: QScalar::sqrt_power(q, gamma_exp),
        })
    }

    /// `γ - γ^{-1}`, the linear coefficient of the normalized relation.
    pub fn relation_coefficient(&self) -> QScalar {
        &self.gamma - &self.gamma.inverse().expect("gamma is nonzero")
    }
}

/// `δ_P(ζ)`: `q^{-2n²}` unramified, `q^{-n²}` ramified.
pub fn delta_p_zeta(q: u64, n: u32, case: Case) -> BigRational {
    let e = match case {
        Case::Unramified => 2 * n * n,
        Case::Ramified => n * n,
    };
    BigRational::one() / BigRational::from_integer(Pow::pow(BigInt::from(q), e))
}

/// `{γ², -1, γ^{-2}}` sorted ascending, or empty off parity.
pub fn gamma_set(q: u64, n: u32, case: Case) -> Vec<QScalar> {
    if !case.parity_ok(n) {
        return Vec::new();
    }
    let h = HeckeParams::new(q, n, case).expect("parity matches");
    closed_form_gamma_set(&h.gamma)
}

/// `{γ², -1, γ^{-2}}` for an arbitrary nonzero `γ`, sorted and deduplicated.
pub fn closed_form_gamma_set(gamma: &QScalar) -> Vec<QScalar> {
    let g2 = gamma * gamma;
    let mut set = vec![g2.inverse().expect("gamma is nonzero"), QScalar::from_int(-1), g2];
    set.sort();
    set.dedup();
    set
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducibilityReport {
    pub q: u64,
    pub n: u32,
    pub case: Case,
    pub a: u64,
    pub nu_zeta: Scalar,
    pub theta_order: u64,
    pub regular: bool,
    /// The parity-gated condition on `θ`.
    pub condition: bool,
    /// The bare exponent congruence, reported for comparison.
    pub congruence: bool,
    pub witness: Option<u32>,
    pub parity_ok: bool,
    pub hecke: Option<HeckeParams>,
    pub delta_p_zeta: BigRational,
    pub gamma_set: Vec<QScalar>,
    pub nu_in_gamma_set: bool,
    pub reducible: bool,
    pub commutative_case: bool,
    pub warnings: Vec<String>,
}

pub fn classify(q: u64, n: u32, case: Case, a: u64, nu_zeta: Scalar) -> Result<ReducibilityReport> {
    classify_with_tol(q, n, case, a, nu_zeta, FLOAT_TOL)
}

pub fn classify_with_tol(
    q: u64,
    n: u32,
    case: Case,
    a: u64,
    nu_zeta: Scalar,
    tol: f64,
) -> Result<ReducibilityReport> {
    if nu_zeta.is_zero() {
        return Err(Error::ZeroCharacterValue);
    }
    let ctx = CharContext::new(q, n, case)?;
    if a >= ctx.modulus() {
        return Err(Error::InvalidParameter(format!(
            "exponent {a} outside [0, {})",
            ctx.modulus()
        )));
    }
    let theta = ctx.exponent(a);
    let regular = theta.is_regular();
    let condition = theta.condition_theta();
    let congruence = theta.theta_congruence();
    let witness = theta.condition_witness();
    let parity_ok = ctx.parity_ok();
    let gamma_set = gamma_set(q, n, case);
    let nu_in_gamma_set = gamma_set.iter().any(|g| nu_zeta.matches(g, tol));

    let mut warnings = Vec::new();
    if !regular {
        warnings.push(format!(
            "exponent {a} is not regular and parametrizes no cuspidal representation"
        ));
    }
    if regular && congruence != witness.is_some() {
        warnings.push(format!(
            "exponent congruence ({congruence}) and Galois witness search ({}) disagree",
            witness.is_some()
        ));
    }

    Ok(ReducibilityReport {
        q,
        n,
        case,
        a,
        nu_zeta,
        theta_order: theta.order(),
        regular,
        condition,
        congruence,
        witness,
        parity_ok,
        hecke: HeckeParams::new(q, n, case),
        delta_p_zeta: delta_p_zeta(q, n, case),
        gamma_set,
        nu_in_gamma_set,
        reducible: parity_ok && regular && condition && nu_in_gamma_set,
        commutative_case: !parity_ok,
        warnings,
    })
}

/// JSON form of a scalar: exact parts relative to `√q`, or a complex pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarJson {
    Exact(ExactJson),
    Float { re: f64, im: f64 },
}

impl ScalarJson {
    pub fn new(s: &Scalar, q: u64) -> Self {
        match s {
            Scalar::Exact(x) => ScalarJson::Exact(x.to_json(q)),
            Scalar::Float(z) => ScalarJson::Float { re: z.re, im: z.im },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalJson {
    fn from(r: &BigRational) -> Self {
        Self {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeckeParamsJson {
    pub lambda: ExactJson,
    pub gamma: ExactJson,
    pub relation_coefficient: ExactJson,
    pub relation_constant: ExactJson,
}

/// Serializable mirror of [`ReducibilityReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub q: u64,
    pub n: u32,
    pub case: Case,
    pub a: u64,
    pub nu_zeta: ScalarJson,
    pub theta_order: u64,
    pub regular: bool,
    pub condition: bool,
    pub congruence: bool,
    pub witness: Option<u32>,
    pub parity_ok: bool,
    pub hecke: Option<HeckeParamsJson>,
    pub delta_p_zeta: RationalJson,
    pub gamma_set: Vec<ExactJson>,
    pub nu_in_gamma_set: bool,
    pub reducible: bool,
    pub commutative_case: bool,
    pub warnings: Vec<String>,
}

impl ReducibilityReport {
    pub fn to_json(&self) -> ReportJson {
        let q = self.q;
        ReportJson {
            q,
            n: self.n,
            case: self.case,
            a: self.a,
            nu_zeta: ScalarJson::new(&self.nu_zeta, q),
            theta_order: self.theta_order,
            regular: self.regular,
            condition: self.condition,
            congruence: self.congruence,
            witness: self.witness,
            parity_ok: self.parity_ok,
            hecke: self.hecke.as_ref().map(|h| HeckeParamsJson {
                lambda: h.lambda.to_json(q),
                gamma: h.gamma.to_json(q),
                relation_coefficient: h.relation_coefficient().to_json(q),
                relation_constant: QScalar::one().to_json(q),
            }),
            delta_p_zeta: (&self.delta_p_zeta).into(),
            gamma_set: self.gamma_set.iter().map(|g| g.to_json(q)).collect(),
            nu_in_gamma_set: self.nu_in_gamma_set,
            reducible: self.reducible,
            commutative_case: self.commutative_case,
            warnings: self.warnings.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn ex(n: i64) -> Scalar {
        Scalar::Exact(QScalar::from_int(n))
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_p_zeta(3, 1, Case::Unramified), BigRational::new(1.into(), 9.into()));
        assert_eq!(delta_p_zeta(3, 2, Case::Ramified), BigRational::new(1.into(), 81.into()));
        assert!(delta_p_zeta(7, 0, Case::Ramified).is_one());
    }

    #[test]
    fn gamma_set_examples() {
        let expect = vec![QScalar::from_int(-1), QScalar::from_ratio(1, 3), QScalar::from_int(3)];
        assert_eq!(gamma_set(3, 1, Case::Unramified), expect);
        assert_eq!(gamma_set(3, 2, Case::Ramified), expect);
        assert!(gamma_set(3, 2, Case::Unramified).is_empty());
    }

    #[test]
    fn hecke_params_square() {
        for (q, n, case) in [(3, 1, Case::Unramified), (5, 2, Case::Ramified), (3, 6, Case::Ramified)] {
            let h = HeckeParams::new(q, n, case).unwrap();
            assert_eq!(&h.gamma * &h.gamma, h.lambda);
        }
        assert!(HeckeParams::new(3, 3, Case::Ramified).is_none());
    }

    #[test]
    fn classify_examples() {
        assert!(classify(3, 1, Case::Unramified, 2, ex(3)).unwrap().reducible);
        assert!(!classify(3, 1, Case::Unramified, 2, ex(2)).unwrap().reducible);
        for a in 0..80 {
            for nu in [ex(9), ex(-1), ex(1), ex(3)] {
                let r = classify(3, 2, Case::Unramified, a, nu).unwrap();
                assert!(!r.reducible && r.commutative_case);
            }
        }
        assert!(!classify(3, 1, Case::Unramified, 1, ex(3)).unwrap().reducible);
    }

    #[test]
    fn float_membership_uses_tolerance() {
        let near = Scalar::Float(Complex64::new(1.0 / 3.0 + 1e-12, 0.0));
        assert!(classify(3, 1, Case::Unramified, 2, near).unwrap().reducible);
        let far = Scalar::Float(Complex64::new(1.0 / 3.0 + 1e-6, 0.0));
        assert!(!classify(3, 1, Case::Unramified, 2, far).unwrap().reducible);
    }

    #[test]
    fn zero_nu_rejected() {
        assert!(matches!(
            classify(3, 1, Case::Unramified, 2, ex(0)),
            Err(Error::ZeroCharacterValue)
        ));
    }

    #[test]
    fn divergence_is_flagged() {
        let r = classify(3, 2, Case::Unramified, 8, ex(9)).unwrap();
        assert!(r.congruence && !r.condition && r.witness.is_none());
        assert!(r.warnings.iter().any(|w| w.contains("disagree")));
    }

    #[test]
    fn irregular_is_reported_not_rejected() {
        let r = classify(3, 2, Case::Ramified, 4, ex(3)).unwrap();
        assert!(!r.regular && !r.reducible);
        assert!(!r.warnings.is_empty());
    }
}
