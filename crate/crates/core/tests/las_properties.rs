use apseq::counting::APSpec;
use apseq::group::AdditiveSet;
use apseq::las::{
    count_k_subsequences, longest_ap, longest_ap_orbitwalk, longest_ap_pairdp, Ordering,
};
use apseq::montecarlo::{sample_ordering, substream};
use apseq::Element;
use proptest::prelude::*;

fn random_ordering(set: &AdditiveSet, seed: u64) -> Ordering {
    sample_ordering(set, &mut substream(seed, 0))
}

fn map_ordering(ordering: &Ordering, f: impl Fn(&Element) -> Element) -> Ordering {
    let mapped: Vec<Element> = ordering.elements().iter().map(f).collect();
    Ordering::new(ordering.set().clone(), &mapped).unwrap()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn group_strategy() -> impl Strategy<Value = AdditiveSet> {
    prop_oneof![
        (2u64..80).prop_map(|n| AdditiveSet::cyclic(n).unwrap()),
        prop::sample::select(vec![
            "abelian:2x4",
            "abelian:3x6",
            "abelian:2x2x4",
            "abelian:4x8",
            "elementary:3^3",
            "elementary:5^2"
        ])
        .prop_map(|s| s.parse().unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn group_affine_maps_preserve_length(set in group_strategy(), seed: u64, u_raw: u64, b_raw: u64) {
        let ordering = random_ordering(&set, seed);
        let exponent = set.exponent().unwrap();
        let mut u = 1 + u_raw % exponent.max(1);
        while gcd(u, exponent) != 1 {
            u += 1;
        }
        let b = set.element_at(b_raw % set.cardinality()).unwrap();
        let mapped = map_ordering(&ordering, |x| {
            set.add(&set.scalar_mul(u as i64, x).unwrap(), &b).unwrap()
        });
        prop_assert_eq!(longest_ap(&mapped).unwrap().length, longest_ap(&ordering).unwrap().length);
    }

    #[test]
    fn interval_reflections_preserve_length(n in 2u64..60, d in 1usize..3, seed: u64, axis_mask: u8) {
        prop_assume!((n as u32).pow(d as u32) <= 400);
        let set = AdditiveSet::interval(n, d).unwrap();
        let ordering = random_ordering(&set, seed);
        let mapped = map_ordering(&ordering, |x| {
            Element(
                x.coords()
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| if axis_mask >> i & 1 == 1 { n as i64 + 1 - c } else { c })
                    .collect(),
            )
        });
        prop_assert_eq!(longest_ap(&mapped).unwrap().length, longest_ap(&ordering).unwrap().length);
        if d == 2 {
            let swapped = map_ordering(&ordering, |x| Element(vec![x.coords()[1], x.coords()[0]]));
            prop_assert_eq!(longest_ap(&swapped).unwrap().length, longest_ap(&ordering).unwrap().length);
        }
    }

    #[test]
    fn reversal_preserves_length(set in group_strategy(), seed: u64) {
        let ordering = random_ordering(&set, seed);
        prop_assert_eq!(
            longest_ap(&ordering.reversed()).unwrap().length,
            longest_ap(&ordering).unwrap().length
        );
    }

    #[test]
    fn witness_and_subsequence_counts_are_consistent(set in group_strategy(), seed: u64) {
        let ordering = random_ordering(&set, seed);
        let r = longest_ap(&ordering).unwrap();
        prop_assert!(r.length >= 2);
        prop_assert!(r.verify(&ordering));
        prop_assert!(count_k_subsequences(&ordering, r.length).unwrap() >= 1);
        if r.length < ordering.len() {
            prop_assert_eq!(count_k_subsequences(&ordering, r.length + 1).unwrap(), 0);
        }
    }

    #[test]
    fn interval_witness_and_counts(n in 2u64..120, seed: u64) {
        let set = AdditiveSet::interval(n, 1).unwrap();
        let ordering = random_ordering(&set, seed);
        let r = longest_ap(&ordering).unwrap();
        prop_assert!(r.length >= 2);
        prop_assert!(r.verify(&ordering));
        prop_assert!(count_k_subsequences(&ordering, r.length).unwrap() >= 1);
        if r.length < ordering.len() {
            prop_assert_eq!(count_k_subsequences(&ordering, r.length + 1).unwrap(), 0);
        }
    }

    #[test]
    fn full_length_exactly_when_the_ordering_is_a_progression(n in 2u64..40, seed: u64, base: u64, step: u64) {
        let set = AdditiveSet::cyclic(n).unwrap();
        let ordering = random_ordering(&set, seed);
        let elems = ordering.elements();
        let is_progression = {
            let r = set.sub(&elems[1], &elems[0]).unwrap();
            elems.windows(2).all(|w| set.sub(&w[1], &w[0]).unwrap() == r)
        };
        prop_assert_eq!(longest_ap(&ordering).unwrap().length == n as usize, is_progression);

        let r = Element::scalar(1 + (step % (n - 1)) as i64);
        prop_assume!(set.element_order(&r).unwrap() == n);
        let spec = APSpec { base: Element::scalar((base % n) as i64), step: r, length: n as usize };
        let full = Ordering::new(set.clone(), &spec.terms(&set).unwrap()).unwrap();
        prop_assert_eq!(longest_ap(&full).unwrap().length, n as usize);
    }
}

#[test]
fn orbit_walk_and_pair_dp_agree_up_to_500() {
    for (i, spec) in [
        "cyclic:500",
        "cyclic:499",
        "abelian:2x250",
        "abelian:5x100",
        "elementary:7^3",
        "abelian:2x2x2x60",
    ]
    .iter()
    .enumerate()
    {
        let set: AdditiveSet = spec.parse().unwrap();
        for s in 0..5 {
            let ordering = random_ordering(&set, 1000 * i as u64 + s);
            let a = longest_ap_orbitwalk(&ordering).unwrap();
            let b = longest_ap_pairdp(&ordering).unwrap();
            assert_eq!(a.length, b.length, "{spec} sample {s}");
            assert_eq!(a, b, "{spec} sample {s}: witnesses use the same tie-break");
        }
    }
}
