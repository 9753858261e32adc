use std::collections::BTreeMap;

use parind_core::chars::Case;
use parind_core::classify::{gamma_set, HeckeParams};
use parind_core::dihecke::{
    gamma_set_oracle, gamma_set_oracle_oriented, induced_module, laurent_embed, relation_coefficient,
    HeckeElement, Orientation, TwoDimModule, Word,
};
use parind_core::QScalar;
use proptest::prelude::*;

fn gamma_strategy() -> impl Strategy<Value = QScalar> {
    prop::sample::select(vec![(3u64, 1i64), (3, 2), (5, 1), (7, 3), (3, 4)])
        .prop_map(|(q, k)| QScalar::sqrt_power(q, k))
}

fn word_strategy() -> impl Strategy<Value = Word> {
    (0u8..2, 0u32..5).prop_map(|(s, l)| if l == 0 { Word::EMPTY } else { Word::new(s, l) })
}

fn element(gamma: &QScalar, terms: &[(Word, i64)]) -> HeckeElement {
    terms.iter().fold(HeckeElement::zero(gamma), |acc, (w, c)| {
        acc.try_add(&HeckeElement::basis(gamma, *w).scale(&QScalar::from_int(*c)))
            .unwrap()
    })
}

fn terms_strategy() -> impl Strategy<Value = Vec<(Word, i64)>> {
    prop::collection::vec((word_strategy(), -3i64..=3), 0..4)
}

/// Products computed on raw letter strings, reducing `ii → c·i + 1`.
struct Rewriter {
    c: QScalar,
}

impl Rewriter {
    fn normal_form(&self, start: BTreeMap<Vec<u8>, QScalar>) -> BTreeMap<Vec<u8>, QScalar> {
        let mut todo: Vec<(Vec<u8>, QScalar)> = start.into_iter().collect();
        let mut done: BTreeMap<Vec<u8>, QScalar> = BTreeMap::new();
        while let Some((w, x)) = todo.pop() {
            match w.windows(2).position(|p| p[0] == p[1]) {
                None => {
                    let e = done.entry(w).or_insert_with(QScalar::zero);
                    *e = &*e + &x;
                }
                Some(i) => {
                    let mut single = w[..i + 1].to_vec();
                    single.extend_from_slice(&w[i + 2..]);
                    let mut empty = w[..i].to_vec();
                    empty.extend_from_slice(&w[i + 2..]);
                    todo.push((single, &x * &self.c));
                    todo.push((empty, x));
                }
            }
        }
        done.retain(|_, v| !v.is_zero());
        done
    }

    fn mul(&self, a: &HeckeElement, b: &HeckeElement) -> BTreeMap<Vec<u8>, QScalar> {
        let mut raw: BTreeMap<Vec<u8>, QScalar> = BTreeMap::new();
        for (u, x) in a.terms() {
            for (v, y) in b.terms() {
                let mut w = u.letters();
                w.extend(v.letters());
                let e = raw.entry(w).or_insert_with(QScalar::zero);
                *e = &*e + &(x * y);
            }
        }
        self.normal_form(raw)
    }
}

fn as_strings(h: &HeckeElement) -> BTreeMap<Vec<u8>, QScalar> {
    h.terms().map(|(w, c)| (w.letters(), c.clone())).collect()
}

proptest! {
    #[test]
    fn associativity(gamma in gamma_strategy(), a in terms_strategy(), b in terms_strategy(), c in terms_strategy()) {
        let (a, b, c) = (element(&gamma, &a), element(&gamma, &b), element(&gamma, &c));
        let left = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
        let right = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multiplication_matches_rewriting(gamma in gamma_strategy(), a in terms_strategy(), b in terms_strategy()) {
        let (a, b) = (element(&gamma, &a), element(&gamma, &b));
        let oracle = Rewriter { c: relation_coefficient(&gamma) };
        prop_assert_eq!(as_strings(&a.try_mul(&b).unwrap()), oracle.mul(&a, &b));
    }

    #[test]
    fn freeness_round_trip(gamma in gamma_strategy(), terms in prop::collection::vec((0u8..2, 0u32..=6, -4i64..=4), 0..5)) {
        let terms: Vec<(Word, i64)> = terms
            .into_iter()
            .map(|(s, l, c)| (if l == 0 { Word::EMPTY } else { Word::new(s, l) }, c))
            .collect();
        let h = element(&gamma, &terms);
        let parts = h.decompose();
        prop_assert_eq!(HeckeElement::recompose(&gamma, &parts), h);
    }

    #[test]
    fn swap_is_an_automorphism(gamma in gamma_strategy(), a in terms_strategy(), b in terms_strategy()) {
        let (a, b) = (element(&gamma, &a), element(&gamma, &b));
        prop_assert_eq!(a.try_mul(&b).unwrap().swap_letters(), a.swap_letters().try_mul(&b.swap_letters()).unwrap());
    }

    #[test]
    fn module_is_a_representation(gamma in gamma_strategy(), num in 1i64..20, den in 1i64..20, neg in any::<bool>(), a in terms_strategy(), b in terms_strategy()) {
        let nu = QScalar::from_ratio(if neg { -num } else { num }, den);
        let m = induced_module(&nu, &gamma).unwrap();
        prop_assert!(m.satisfies_relations(0.0));
        let (a, b) = (element(&gamma, &a), element(&gamma, &b));
        let ab = a.try_mul(&b).unwrap();
        prop_assert_eq!(m.action(&ab), m.action(&a).mul(&m.action(&b)));
    }

    #[test]
    fn orientation_does_not_change_simplicity(gamma in gamma_strategy(), num in 1i64..30, den in 1i64..30, neg in any::<bool>()) {
        let nu = QScalar::from_ratio(if neg { -num } else { num }, den);
        let std = TwoDimModule::new(nu.clone(), &gamma, Orientation::Standard).unwrap();
        let swp = TwoDimModule::new(nu, &gamma, Orientation::Swapped).unwrap();
        prop_assert_eq!(std.is_simple(0.0), swp.is_simple(0.0));
        prop_assert!(swp.satisfies_relations(0.0));
    }
}

#[test]
fn laurent_powers_add() {
    let gamma = QScalar::sqrt_power(3, 1);
    for j in -5i64..=5 {
        for k in -5i64..=5 {
            let lhs = laurent_embed(&gamma, j).try_mul(&laurent_embed(&gamma, k)).unwrap();
            assert_eq!(lhs, laurent_embed(&gamma, j + k), "j={j} k={k}");
        }
    }
}

#[test]
fn freeness_exhaustive_up_to_length_six() {
    let gamma = QScalar::sqrt_power(5, 2);
    let mut words = vec![Word::EMPTY];
    for l in 1..=6 {
        words.push(Word::new(0, l));
        words.push(Word::new(1, l));
    }
    for &w in &words {
        let h = HeckeElement::basis(&gamma, w);
        assert_eq!(HeckeElement::recompose(&gamma, &h.decompose()), h, "{w:?}");
    }
    // Distinct free-basis elements stay linearly independent: their leading
    // words are distinct, so a triangular system recovers each coefficient.
    let mut leads = BTreeMap::new();
    for k in -3i64..=3 {
        for with_g0 in [false, true] {
            let mut e = laurent_embed(&gamma, k);
            if with_g0 {
                e = e.try_mul(&HeckeElement::generator(&gamma, 0)).unwrap();
            }
            let top = e.terms().map(|(w, _)| *w).max().unwrap();
            assert!(leads.insert(top, (k, with_g0)).is_none());
        }
    }
}

#[test]
fn oracle_agrees_with_closed_form() {
    for q in [3u64, 5, 7] {
        for n in 1..=4u32 {
            for case in [Case::Unramified, Case::Ramified] {
                if !case.parity_ok(n) {
                    continue;
                }
                let h = HeckeParams::new(q, n, case).unwrap();
                let oracle = gamma_set_oracle(&h.gamma).unwrap();
                assert_eq!(oracle, gamma_set(q, n, case), "q={q} n={n} {case:?}");
                let swapped = gamma_set_oracle_oriented(&h.gamma, Orientation::Swapped).unwrap();
                assert_eq!(swapped, oracle);
            }
        }
    }
}

#[test]
fn relation_coefficient_of_unit_gamma_is_zero() {
    assert!(relation_coefficient(&QScalar::one()).is_zero());
}

#[test]
fn scan_matches_direct_construction() {
    use num_complex::Complex64;
    use parind_core::dihecke::{scan_non_simple, scan_points};
    // γ = 5, so the locus is {1/25, -1, 25}; the grid itself contains -1 and 0.
    let gamma = QScalar::sqrt_power(5, 2);
    let mut pts = scan_points(-6.0, 6.0, 97);
    pts.extend([25.0, 0.04, -1.0, 5.0].map(|x| Complex64::new(x, 0.0)));
    let direct: Vec<Complex64> = pts
        .iter()
        .copied()
        .filter(|z| z.norm() > 0.0)
        .filter(|&z| !TwoDimModule::new(z, &gamma, Orientation::Standard).unwrap().is_simple(1e-9))
        .collect();
    assert_eq!(scan_non_simple(&gamma, &pts, 1e-9), direct);
    assert_eq!(direct.len(), 4);
}

#[test]
fn zero_lambda_is_rejected() {
    let gamma = QScalar::sqrt_power(3, 2);
    let z = num_complex::Complex64::new(0.0, 0.0);
    assert!(TwoDimModule::new(z, &gamma, Orientation::Standard).is_err());
    assert!(TwoDimModule::new(QScalar::zero(), &gamma, Orientation::Standard).is_err());
}

