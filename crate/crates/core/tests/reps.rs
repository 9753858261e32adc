use num_complex::Complex64;
use parind_core::chars::{enumerate_characters, galois_orbits, CharFilter};
use parind_core::fingrp::{FiniteGroup, GroupSpec, GroupType, DEFAULT_MAX_ORDER};
use parind_core::finrep::{
    cuspidal_character_gl2, gl2_theta, green_constant_samples, inner_product, integral,
    realize_cuspidal_gl2, ClassFunction, GelfandGraev, Subgroup,
};
use parind_core::{Case, CharContext};

fn gl2(q: u64) -> FiniteGroup {
    FiniteGroup::build(GroupSpec::new(GroupType::Gl, 2, q).unwrap(), DEFAULT_MAX_ORDER).unwrap()
}

fn cuspidals(g: &FiniteGroup, q: u64) -> Vec<(u64, ClassFunction)> {
    let ctx = CharContext::new(q, 2, Case::Ramified).unwrap();
    galois_orbits(&ctx, true)
        .unwrap()
        .into_iter()
        .map(|o| {
            let th = gl2_theta(q, o[0]).unwrap();
            (o[0], cuspidal_character_gl2(g, &th).unwrap())
        })
        .collect()
}

#[test]
fn three_orthonormal_cuspidals_at_q3() {
    let g = gl2(3);
    let cs = cuspidals(&g, 3);
    assert_eq!(cs.len(), 3);
    for (i, (_, a)) in cs.iter().enumerate() {
        assert!((a.degree() - Complex64::new(2.0, 0.0)).norm() < 1e-9);
        assert!(a.is_class_function(&Subgroup::whole(&g)));
        for (j, (_, b)) in cs.iter().enumerate() {
            let ip = integral(inner_product(a, b).unwrap()).unwrap();
            assert_eq!(ip, (i == j) as i64);
        }
    }
}

#[test]
fn cuspidal_count_at_q5() {
    let g = gl2(5);
    let cs = cuspidals(&g, 5);
    assert_eq!(cs.len(), (25 - 5) / 2);
    for (_, c) in &cs {
        assert_eq!(integral(inner_product(c, c).unwrap()), Some(1));
    }
}

#[test]
fn gelfand_graev_contains_each_cuspidal_once() {
    let g = gl2(3);
    let gg = GelfandGraev::new(&g).unwrap();
    assert_eq!(gg.dim(), 16);
    let gg_char = gg.character(&g);
    for (_, c) in cuspidals(&g, 3) {
        assert_eq!(integral(inner_product(&gg_char, &c).unwrap()), Some(1));
    }
}

#[test]
fn twist_invariance() {
    let g = gl2(3);
    let ctx = CharContext::new(3, 2, Case::Ramified).unwrap();
    for th in enumerate_characters(&ctx, CharFilter::Regular).unwrap() {
        let a = cuspidal_character_gl2(&g, &th).unwrap();
        let b = cuspidal_character_gl2(&g, &th.galois_twist(1)).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).norm() < 1e-9);
        }
    }
}

#[test]
fn models_and_green_constant() {
    let g = gl2(3);
    let ctx = CharContext::new(3, 2, Case::Ramified).unwrap();
    let mut samples = Vec::new();
    for th in enumerate_characters(&ctx, CharFilter::Regular).unwrap() {
        let model = realize_cuspidal_gl2(&g, &th).unwrap();
        let chi = cuspidal_character_gl2(&g, &th).unwrap();
        for (m, v) in model.mats.iter().zip(&chi.values) {
            assert!((m.trace() - v).norm() < 1e-9);
        }
        assert!(model.is_homomorphism(&Subgroup::whole(&g), 200, 7));
        samples.extend(green_constant_samples(&g, &th, &model));
    }
    assert!(!samples.is_empty());
    let c0 = samples[0];
    assert!(samples.iter().all(|c| (c - c0).norm() < 1e-9));
    assert!((c0 - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
}
