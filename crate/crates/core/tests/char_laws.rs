use parind_core::chars::{enumerate_characters, galois_orbits, CharFilter};
use parind_core::{Case, CharContext};
use proptest::prelude::*;

fn contexts() -> impl Iterator<Item = (u64, u32, Case)> {
    [3u64, 5].into_iter().flat_map(|q| {
        (1..=4u32).flat_map(move |n| [Case::Unramified, Case::Ramified].map(|c| (q, n, c)))
    })
}

#[test]
fn parity_law_no_witness_off_parity() {
    for (q, n, case) in contexts().filter(|&(_, n, c)| !c.parity_ok(n)) {
        let ctx = CharContext::new(q, n, case).unwrap();
        for th in enumerate_characters(&ctx, CharFilter::Regular).unwrap() {
            assert!(!th.condition_theta());
            // At n = 1 every character is regular, and self-dual ones meet
            // the ramified witness equation trivially.
            if n > 1 {
                assert!(!th.has_witness(), "q={q} n={n} {case:?} a={}", th.a());
            }
        }
    }
}

#[test]
fn existence_law_at_matching_parity() {
    for (q, n, case) in contexts().filter(|&(_, n, c)| c.parity_ok(n)) {
        let ctx = CharContext::new(q, n, case).unwrap();
        let w = ctx.witness_exponent().unwrap();
        let half = if case == Case::Unramified { n } else { n / 2 };
        assert_eq!(w.order(), q.pow(half) + 1);
        assert!(w.is_regular(), "q={q} n={n}");
        assert!(w.condition_theta());
        let m = n / 2;
        let expected = if case == Case::Unramified { (m + 1) % n } else { m };
        assert_eq!(w.condition_witness(), Some(expected), "q={q} n={n} {case:?}");
    }
}

#[test]
fn congruence_matches_witness_for_regular_at_matching_parity() {
    for (q, n, case) in contexts().filter(|&(_, n, c)| c.parity_ok(n)) {
        let ctx = CharContext::new(q, n, case).unwrap();
        for th in enumerate_characters(&ctx, CharFilter::Regular).unwrap() {
            assert_eq!(th.condition_theta(), th.has_witness(), "q={q} n={n} a={}", th.a());
        }
    }
}

#[test]
fn orbits_partition_regular_exponents() {
    let ctx = CharContext::new(3, 3, Case::Unramified).unwrap();
    let orbits = galois_orbits(&ctx, true).unwrap();
    let regular = enumerate_characters(&ctx, CharFilter::Regular).unwrap();
    assert!(orbits.iter().all(|o| o.len() == 3));
    assert_eq!(orbits.iter().map(Vec::len).sum::<usize>(), regular.len());
}

#[test]
fn filters_nest() {
    let ctx = CharContext::new(5, 1, Case::Unramified).unwrap();
    let all = enumerate_characters(&ctx, CharFilter::All).unwrap().len();
    let reg = enumerate_characters(&ctx, CharFilter::Regular).unwrap().len();
    let cond = enumerate_characters(&ctx, CharFilter::RegularAndCondition).unwrap().len();
    assert_eq!(all as u64, ctx.modulus());
    assert!(cond <= reg && reg <= all);
}

proptest! {
    #[test]
    fn twist_equivariance(q in prop::sample::select(vec![3u64, 5, 7]), n in 1u32..=3, ram in any::<bool>(), a in 0u64..1_000_000, j in -5i64..5) {
        let case = if ram { Case::Ramified } else { Case::Unramified };
        let ctx = CharContext::new(q, n, case).unwrap();
        let th = ctx.exponent(a % ctx.modulus());
        let tw = th.galois_twist(j);
        prop_assert_eq!(th.is_regular(), tw.is_regular());
        prop_assert_eq!(th.condition_theta(), tw.condition_theta());
        prop_assert_eq!(th.has_witness(), tw.has_witness());
        prop_assert_eq!(th.order(), tw.order());
        let mut o1 = th.orbit();
        let mut o2 = tw.orbit();
        o1.sort_unstable();
        o2.sort_unstable();
        prop_assert_eq!(o1, o2);
    }
}
