use num_complex::Complex64;
use parind_core::chars::{enumerate_characters, CharFilter};
use parind_core::fingrp::{GroupType, DEFAULT_MAX_ORDER};
use parind_core::finhecke::{quadratic_relation, verify, Pipeline, QuadRelation};
use parind_core::{Case, CharContext};

#[test]
fn unitary_dimension_matches_condition_for_every_theta() {
    let ctx = CharContext::new(3, 1, Case::Unramified).unwrap();
    for a in 0..ctx.modulus() {
        let pipe = Pipeline::build(GroupType::Gu, 1, 3, a, DEFAULT_MAX_ORDER, None).unwrap();
        let h = pipe.context().unwrap();
        let expected = if ctx.exponent(a).condition_theta() { 2 } else { 1 };
        assert_eq!(h.hecke_dimension(), expected, "a={a}");
        assert_eq!(pipe.mackey_dimension().unwrap(), expected as i64);
    }
}

#[test]
fn symplectic_dimension_matches_condition_for_every_regular_theta() {
    let ctx = CharContext::new(3, 2, Case::Ramified).unwrap();
    let thetas = enumerate_characters(&ctx, CharFilter::Regular).unwrap();
    let base = Pipeline::build(GroupType::Sp, 2, 3, 2, DEFAULT_MAX_ORDER, None).unwrap();
    for th in thetas {
        let pipe = base.with_theta(th.a()).unwrap();
        let h = pipe.context().unwrap();
        let expected = if th.condition_theta() { 2 } else { 1 };
        assert_eq!(h.hecke_dimension(), expected, "a={}", th.a());
    }
}

#[test]
fn basis_is_equivariant_and_associative() {
    for (kind, n, a) in [(GroupType::Gu, 1, 2), (GroupType::Oj, 2, 2), (GroupType::Gu, 1, 6)] {
        let pipe = Pipeline::build(kind, n, 3, a, DEFAULT_MAX_ORDER, None).unwrap();
        let h = pipe.context().unwrap();
        let basis = h.basis().unwrap();
        assert_eq!(basis.len(), 2);
        for f in &basis {
            assert!(h.check_equivariance(f, 300, 11));
        }
        let prod = |x: &[Complex64], y: &[Complex64]| -> Vec<Complex64> {
            // Structure constants of the 2-dimensional algebra from f*f.
            let ff = h.convolve(&basis[1], &basis[1], &basis).unwrap();
            let mut out = vec![Complex64::new(0.0, 0.0); 2];
            out[0] += x[0] * y[0] + x[1] * y[1] * ff[0];
            out[1] += x[0] * y[1] + x[1] * y[0] + x[1] * y[1] * ff[1];
            out
        };
        for i in 0..2 {
            for j in 0..2 {
                let direct = h.convolve(&basis[i], &basis[j], &basis).unwrap();
                let e = |k: usize| {
                    let mut v = vec![Complex64::new(0.0, 0.0); 2];
                    v[k] = Complex64::new(1.0, 0.0);
                    v
                };
                let via = prod(&e(i), &e(j));
                for k in 0..2 {
                    assert!((direct[k] - via[k]).norm() < 1e-9);
                }
                for k in 0..2 {
                    let left = h.convolve(&basis[i], &basis[j], &basis).unwrap();
                    let right = h.convolve(&basis[j], &basis[k], &basis).unwrap();
                    let lhs = prod(&left, &e(k));
                    let rhs = prod(&e(i), &right);
                    for t in 0..2 {
                        assert!((lhs[t] - rhs[t]).norm() < 1e-9);
                    }
                }
            }
        }
    }
}

#[test]
fn lambda_is_rescaling_invariant() {
    let pipe = Pipeline::build(GroupType::Gu, 1, 3, 2, DEFAULT_MAX_ORDER, None).unwrap();
    let h = pipe.context().unwrap();
    let mut basis = h.basis().unwrap();
    let rel = quadratic_relation(&h, &mut basis).unwrap();
    for t in [0.5, 2.0, 7.0] {
        let scaled = basis[1].scaled(Complex64::new(t, 0.0));
        let c = h.convolve(&scaled, &scaled, &[basis[0].clone(), scaled.clone()]).unwrap();
        assert!((c[1].re - t * rel.a).abs() < 1e-9);
        assert!((c[0].re - t * t * rel.b).abs() < 1e-9);
        let r2 = QuadRelation::from_coefficients(c[1].re, c[0].re).unwrap();
        assert!((r2.lambda - rel.lambda).abs() < 1e-9);
    }
}

#[test]
fn symplectic_relation() {
    let r = verify(GroupType::Sp, 2, 3, 2, DEFAULT_MAX_ORDER, None).unwrap();
    assert!(r.pass);
    assert_eq!(r.index, Some(27));
    let (a, b) = r.raw.unwrap();
    assert!((a - 6.0).abs() < 1e-6 && (b - 27.0).abs() < 1e-6);
    assert!((r.lambda.unwrap() - 3.0).abs() < 1e-6);
    assert_eq!(r.dual_minus_one_is_identity, Some(true));
}

#[test]
fn orthogonal_relation() {
    let r = verify(GroupType::Oj, 2, 3, 2, DEFAULT_MAX_ORDER, None).unwrap();
    assert!(r.pass);
    assert!((r.lambda.unwrap() - 3.0).abs() < 1e-6);
}

#[test]
fn convolution_is_deterministic() {
    let pipe = Pipeline::build(GroupType::Gu, 1, 5, 4, DEFAULT_MAX_ORDER, None).unwrap();
    let h = pipe.context().unwrap();
    let basis = h.basis().unwrap();
    let first = h.convolve_at_reps(&basis[1], &basis[1]);
    for _ in 0..3 {
        assert_eq!(h.convolve_at_reps(&basis[1], &basis[1]), first);
    }
}

#[test]
fn sl2_quadratic_sign() {
    // T² = χ(-1)·q for the quadratic character of F_q^×.
    for (q, a, b) in [(3, 1, -3.0), (5, 2, 5.0), (7, 3, -7.0)] {
        let r = verify(GroupType::Sp, 1, q, a, DEFAULT_MAX_ORDER, None).unwrap();
        assert_eq!(r.dimension, 2);
        let (ra, rb) = r.raw.unwrap();
        assert!(ra.abs() < 1e-9 && (rb - b).abs() < 1e-9, "q={q}: {ra} {rb}");
        assert_eq!(r.lambda.is_some(), b > 0.0);
        assert!(r.pass);
    }
}
