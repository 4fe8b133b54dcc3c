use std::collections::BTreeSet;

use proptest::prelude::*;

use finring::builders::{predicted_unit_group, BuildRecipe, Builder};
use finring::groups::{blackbox_structure, canonical_type, explicit_group, parse_group, AbelianGroupType};
use finring::realize::{self, Status};
use finring::units::Analyzer;
use finring::{direct_product, FiniteRing};

const SMALL: u64 = 1 << 12;

fn small_recipe() -> impl Strategy<Value = BuildRecipe> {
    prop_oneof![
        (2u64..=60).prop_map(|n| BuildRecipe::Zn { n }),
        prop::sample::select(vec![(2u64, 1u32, 1u32), (2, 2, 2), (2, 3, 1), (3, 1, 2), (3, 2, 2), (5, 2, 1), (2, 1, 3)])
            .prop_map(|(p, m, lambda)| BuildRecipe::Galois { p, m, lambda }),
        prop::sample::select(vec![(3u64, 1u32, vec![1u32]), (3, 1, vec![2]), (3, 1, vec![1, 1]), (5, 1, vec![1]), (3, 2, vec![1])])
            .prop_map(|(p, lambda, partition)| BuildRecipe::OddFamily { p, lambda, partition }),
        prop::sample::select(vec![(1u32, 1u32, vec![]), (1, 2, vec![1u32]), (1, 1, vec![2]), (2, 1, vec![]), (1, 3, vec![1])])
            .prop_map(|(lambda, a0, partition)| BuildRecipe::TwoFamily { lambda, a0, partition }),
        prop::sample::select(vec![(2u64, 3u32), (2, 4), (3, 3), (5, 2)]).prop_map(|(p, e)| BuildRecipe::Truncated { p, e }),
    ]
}

fn build(recipe: &BuildRecipe) -> FiniteRing {
    Builder::new(1 << 20).build(recipe).expect("desk-scale recipe")
}

fn small_group() -> impl Strategy<Value = AbelianGroupType> {
    prop::collection::vec(1u64..=30, 0..4).prop_map(|orders| canonical_type(&orders).expect("positive"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms_on_random_elements(recipe in small_recipe(), picks in prop::collection::vec(any::<u64>(), 3)) {
        let r = build(&recipe);
        let [x, y, z] = [0, 1, 2].map(|i| r.element_at((picks[i] % r.order()) as usize));
        prop_assert_eq!(r.mul(&x, &y).unwrap(), r.mul(&y, &x).unwrap());
        prop_assert_eq!(r.mul(&r.mul(&x, &y).unwrap(), &z).unwrap(), r.mul(&x, &r.mul(&y, &z).unwrap()).unwrap());
        let lhs = r.mul(&x, &r.add(&y, &z).unwrap()).unwrap();
        let rhs = r.add(&r.mul(&x, &y).unwrap(), &r.mul(&x, &z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(r.mul(&r.one(), &x).unwrap(), x.clone());
        prop_assert!(r.is_zero(&r.add(&x, &r.neg(&x).unwrap()).unwrap()));
    }

    #[test]
    fn unit_zero_divisor_dichotomy(recipe in small_recipe()) {
        let r = build(&recipe);
        prop_assume!(r.order() <= SMALL);
        for x in r.elements() {
            let zero_divisor = r.elements().any(|y| !r.is_zero(&y) && r.is_zero(&r.mul(&x, &y).unwrap()));
            prop_assert!(r.is_unit(&x) != zero_divisor, "{:?}", x);
        }
    }

    #[test]
    fn local_structure(recipe in small_recipe()) {
        let r = build(&recipe);
        prop_assume!(r.is_local());
        let m = r.maximal_ideal().unwrap();
        prop_assert_eq!(r.unit_count(), r.order() - m.order());
        let nil: BTreeSet<usize> = r.nilradical().member_indices().iter().copied().collect();
        let max: BTreeSet<usize> = m.member_indices().iter().copied().collect();
        prop_assert_eq!(&nil, &max);
        for a in m.elements(&r) {
            prop_assert!(r.is_unit(&r.add(&r.one(), &a).unwrap()));
        }
        let chain = r.ideal_power_chain().unwrap();
        prop_assert!(chain.windows(2).all(|w| w[0].order() > w[1].order()));
        prop_assert!(chain.last().unwrap().is_zero());
    }

    #[test]
    fn exact_sequence_over_powers_of_m(recipe in small_recipe()) {
        let r = build(&recipe);
        prop_assume!(r.is_local() && r.order() <= 4096);
        let analyzer = Analyzer::default();
        for ideal in r.ideal_power_chain().unwrap() {
            let counts = analyzer.exact_sequence_counts(&r, &ideal).unwrap();
            prop_assert!(counts.holds(), "{:?}", counts);
        }
    }

    #[test]
    fn families_match_their_predictions(recipe in small_recipe()) {
        let report = Analyzer::default().analyze(&build(&recipe)).unwrap();
        prop_assert_eq!(&report.unit_group_type, &predicted_unit_group(&recipe).unwrap());
        prop_assert_eq!(report.unit_group_type.order(), report.unit_count);
        if report.is_local {
            let residue = report.residue.unwrap();
            let h = report.h_type.unwrap();
            let k = report.k.unwrap();
            prop_assert_eq!(h.order(), residue.size().pow(k));
            prop_assert!(h.exponent() <= residue.p.pow(k));
            prop_assert_eq!(report.filtration_ks.iter().sum::<u32>(), k);
        }
    }

    #[test]
    fn products_multiply_unit_groups(a in small_recipe(), b in small_recipe()) {
        let (ra, rb) = (build(&a), build(&b));
        prop_assume!(ra.order() * rb.order() <= 1 << 14);
        let analyzer = Analyzer::default();
        let prod = direct_product(&ra, &rb).unwrap();
        prop_assert_eq!(prod.order(), ra.order() * rb.order());
        let want = analyzer.unit_group_type(&ra).unwrap().product(&analyzer.unit_group_type(&rb).unwrap());
        prop_assert_eq!(analyzer.analyze(&prod).unwrap().unit_group_type, want);
    }

    #[test]
    fn blackbox_round_trip(g in small_group()) {
        prop_assert_eq!(blackbox_structure(&explicit_group(&g)).unwrap(), g);
    }

    #[test]
    fn blackbox_of_products(g in small_group(), h in small_group()) {
        prop_assume!(g.order() * h.order() <= 1 << 14);
        prop_assert_eq!(blackbox_structure(&explicit_group(&g.product(&h))).unwrap(), g.product(&h));
    }

    #[test]
    fn torsion_counts_grow_by_powers_of_p(g in small_group()) {
        let explicit = explicit_group(&g);
        for p in g.primes().collect::<Vec<_>>() {
            let counts: Vec<usize> = (0..=4u32)
                .map(|j| explicit.elements.iter().filter(|x| explicit.pow(x, p.pow(j)) == explicit.identity).count())
                .collect();
            for w in counts.windows(2) {
                prop_assert!(w[1] >= w[0] && w[1] % w[0] == 0);
                prop_assert!(finring::arith::exact_log((w[1] / w[0]) as u64, p).is_some() || w[1] == w[0]);
            }
        }
    }

    #[test]
    fn group_text_round_trip(g in small_group()) {
        prop_assert_eq!(parse_group(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn realizable_verdicts_rebuild(g in prop::collection::vec(2u64..=40, 1..4).prop_map(|o| canonical_type(&o).unwrap())) {
        prop_assume!(g.order() <= 1 << 16);
        let verdict = realize::group_realizable(&g).unwrap();
        if verdict.status == Status::Realizable {
            let w = verdict.witness.unwrap();
            prop_assert_eq!(&predicted_unit_group(&w).unwrap(), &g);
            let ring = Builder::new(1 << 20).build(&w).unwrap();
            prop_assert_eq!(Analyzer::default().unit_group_type(&ring).unwrap(), g);
        }
    }
}

fn partitions(total: u32, max_part: u32) -> Vec<Vec<u32>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max_part.min(total)).rev() {
        for mut rest in partitions(total - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[test]
fn sufficiency_implies_necessity() {
    let mut matched = 0;
    for p in [2u64, 3, 5] {
        for lambda in 1..=4u32 {
            let mut log = 0;
            while p.pow(log) <= 1 << 12 {
                for exps in partitions(log, log) {
                    let h = AbelianGroupType::from_primary([(p, exps)]);
                    if let Some(recipe) = realize::local_factor_sufficient(p, lambda, &h).unwrap() {
                        matched += 1;
                        let check = realize::local_factor_necessary(p, lambda, &h).unwrap();
                        assert!(check.passes, "p = {p}, lambda = {lambda}, H = {h}: {recipe} but {:?}", check.reason);
                        let predicted = predicted_unit_group(&recipe).unwrap();
                        assert_eq!(predicted.p_part(p), h, "{recipe}");
                    }
                }
                log += 1;
            }
        }
    }
    assert!(matched > 100);
}

#[test]
fn cyclic_agrees_with_group_search() {
    for n in 1..=200 {
        let cyclic = realize::cyclic_realizable(n);
        let group = realize::group_realizable(&AbelianGroupType::cyclic(n)).unwrap();
        if group.status != Status::Unknown {
            assert_eq!(cyclic.status, group.status, "n = {n}");
        }
    }
}

#[test]
fn ditor_agrees_with_enumeration() {
    let listed: BTreeSet<u64> = realize::enumerate_cardinalities(500).into_iter().collect();
    for n in 1..=500 {
        let v = realize::ditor_realizable(n, None);
        assert_eq!(v.is_realizable(), listed.contains(&n), "n = {n}");
        if let Some(w) = v.witness {
            assert_eq!(predicted_unit_group(&w).unwrap().order(), n);
        }
    }
    let odd: Vec<u64> = listed.iter().copied().filter(|n| n % 2 == 1).collect();
    let mersenne: Vec<u64> = (1..=9).map(|l| (1u64 << l) - 1).collect();
    fn product_of(n: u64, factors: &[u64]) -> bool {
        n == 1 || factors.iter().any(|&f| f > 1 && n.is_multiple_of(f) && product_of(n / f, factors))
    }
    let want: Vec<u64> = (1..=500).filter(|&n| n % 2 == 1 && product_of(n, &mersenne)).collect();
    assert_eq!(odd, want);
}

#[test]
fn odd_classification_is_mersenne_products() {
    let mersenne = [1u64, 3, 7, 15, 31, 63, 127];
    for n in (1..=127).step_by(2) {
        let v = realize::odd_order_classify(&AbelianGroupType::cyclic(n)).unwrap();
        assert_ne!(v.status, Status::Unknown);
        // a cyclic product of coprime Mersenne numbers
        let mut reachable = BTreeSet::from([1u64]);
        for &m in &mersenne {
            for r in reachable.clone() {
                if finring::arith::gcd(r, m) == 1 && r * m <= 127 {
                    reachable.insert(r * m);
                }
            }
        }
        assert_eq!(v.is_realizable(), reachable.contains(&n), "n = {n}");
    }
}

#[test]
fn characteristic_primes_are_all_used() {
    let primes = BTreeSet::from([2u64, 3]);
    for n in 1..=120 {
        if let Some(w) = realize::ditor_realizable(n, Some(&primes)).witness {
            let ring = build(&w);
            let chars: BTreeSet<u64> = finring::arith::factorize(ring.characteristic()).into_iter().map(|(p, _)| p).collect();
            assert_eq!(chars, primes, "n = {n}: {w}");
            assert_eq!(ring.unit_count(), n);
        }
    }
}
