use std::collections::BTreeMap;

use proptest::prelude::*;

use equivol_core::geometry::{classify_stability, moment_image, vanishing_certificate, StabilityClass};
use equivol_core::multiplicity::{full_weight_distribution, irrep_dimension, section_dimension};
use equivol_core::oracle::brute_force_oracle;
use equivol_core::{GroupSpec, LinearizedBundle, ProjectiveFactor, Rational, Scenario, Weight};

fn circle_scenario(g: usize) -> impl Strategy<Value = Scenario> {
    let factor = (1usize..=3).prop_flat_map(move |dim| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, g), dim + 1)
    });
    (
        prop::collection::vec((factor, 1i64..=3), 1..=2),
        prop::collection::vec(-3i64..=3, g),
    )
        .prop_map(move |(factors, twist)| {
            let degrees = factors.iter().map(|(_, d)| *d).collect();
            let factors = factors.into_iter().map(|(w, _)| ProjectiveFactor::circle(w)).collect();
            Scenario::new(GroupSpec::circle(g), factors, LinearizedBundle::new(degrees, twist)).unwrap()
        })
}

fn su2_scenario() -> impl Strategy<Value = Scenario> {
    (prop::collection::vec(0u32..=3, 1..=2), 1i64..=2)
        .prop_filter("at least two coordinates", |(p, _)| p.iter().map(|m| m + 1).sum::<u32>() >= 2)
        .prop_map(|(powers, d)| {
        Scenario::new(
            GroupSpec::su2(),
            vec![ProjectiveFactor::su2(powers)],
            LinearizedBundle::new(vec![d], vec![]),
        )
        .unwrap()
    })
}

fn small(s: &Scenario, k: u64) -> bool {
    s.total_dimension(k).is_ok_and(|n| n <= 20_000)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engine_matches_oracle_rank_one(s in circle_scenario(1), k in 0u64..=5) {
        prop_assume!(small(&s, k));
        prop_assert_eq!(full_weight_distribution(&s, k).unwrap(), brute_force_oracle(&s, k).unwrap());
    }

    #[test]
    fn engine_matches_oracle_rank_two(s in circle_scenario(2), k in 0u64..=4) {
        prop_assume!(small(&s, k));
        prop_assert_eq!(full_weight_distribution(&s, k).unwrap(), brute_force_oracle(&s, k).unwrap());
    }

    #[test]
    fn engine_matches_oracle_su2(s in su2_scenario(), k in 0u64..=4) {
        prop_assume!(small(&s, k));
        prop_assert_eq!(full_weight_distribution(&s, k).unwrap(), brute_force_oracle(&s, k).unwrap());
    }

    #[test]
    fn dimensions_are_conserved(s in prop_oneof![circle_scenario(1), circle_scenario(2), su2_scenario()], k in 0u64..=6) {
        let dist = full_weight_distribution(&s, k).unwrap();
        let total: u128 = dist.iter().map(|(mu, n)| n * irrep_dimension(&s, mu)).sum();
        prop_assert_eq!(total, s.total_dimension(k).unwrap());
    }

    #[test]
    fn negating_weights_reflects_distribution(s in circle_scenario(1), k in 0u64..=6) {
        let flipped = full_weight_distribution(&s.negated().unwrap(), k).unwrap();
        let reflected: BTreeMap<Weight, u128> =
            full_weight_distribution(&s, k).unwrap().into_iter().map(|(mu, n)| (mu.neg(), n)).collect();
        prop_assert_eq!(flipped, reflected);
    }

    #[test]
    fn tensor_powers_compose(s in circle_scenario(1), p in 1u64..=3, q in 1u64..=3, k in 0u64..=3, mu in -6i64..=6) {
        let pq = s.power(p).unwrap().power(q).unwrap();
        prop_assert_eq!(&pq, &s.power(p * q).unwrap());
        let mu = Weight::scalar(mu);
        prop_assert_eq!(
            section_dimension(&pq, k, &mu).unwrap(),
            section_dimension(&s, p * q * k, &mu).unwrap()
        );
    }

    #[test]
    fn validation_is_idempotent(s in prop_oneof![circle_scenario(1), circle_scenario(2), su2_scenario()]) {
        prop_assert_eq!(s.validate().unwrap(), s);
    }

    #[test]
    fn monomial_weights_are_additive(s in circle_scenario(2), seed in prop::collection::vec(0u64..=3, 16)) {
        let mut it = seed.iter().cycle();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (j, f) in s.factors.iter().enumerate() {
            let d = s.bundle.degrees[j] as u64;
            // one monomial of degree d and one of degree 2d
            let len = f.coordinate_count();
            let mut x = vec![0u64; len];
            let mut y = vec![0u64; len];
            for _ in 0..d {
                x[*it.next().unwrap() as usize % len] += 1;
                y[*it.next().unwrap() as usize % len] += 2;
            }
            a.push(x);
            b.push(y);
        }
        let sum: Vec<Vec<u64>> = a.iter().zip(&b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect()).collect();
        prop_assert_eq!(
            s.weight_of_monomial(&sum).unwrap(),
            s.weight_of_monomial(&a).unwrap().add(&s.weight_of_monomial(&b).unwrap())
        );
    }

    #[test]
    fn support_lies_in_scaled_image(s in prop_oneof![circle_scenario(1), circle_scenario(2)], k in 0u64..=5) {
        let image = moment_image(&s).unwrap();
        for mu in full_weight_distribution(&s, k).unwrap().keys() {
            prop_assert!(image.contains(mu, k), "{} not in {}·{}", mu, k, image);
        }
    }

    #[test]
    fn unstable_sections_vanish(s in circle_scenario(1), mu in -6i64..=6) {
        prop_assume!(classify_stability(&s).unwrap().class == StabilityClass::UnstableEverywhere);
        let mu = Weight::scalar(mu);
        let r = vanishing_certificate(&s, &mu).unwrap().unwrap();
        for k in r..r + 12 {
            prop_assert_eq!(section_dimension(&s, k, &mu).unwrap(), 0);
        }
    }

    #[test]
    fn rationals_round_trip(n in -1000i64..=1000, d in 1i64..=1000) {
        let x = Rational::new(n.into(), d.into());
        prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
    }
}
