use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spincalc_core::charoracle::{decompose_spin, pin_character, recombine_spin};
use spincalc_core::diagrams::{hom_dim, normalize, normalize_random, random_morphism, random_raw, Flavor};
use spincalc_core::modrule::{tau_j_border, tau_j_weyl, ModResult, RuleRegistry};
use spincalc_core::symfunc::{from_square_basis, lr_coefficient, omega_transpose, schur_multiply, to_square_basis};
use spincalc_core::{Partition, SchurVector};

fn partition(max_parts: usize, max_part: u32) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..=max_part, 0..=max_parts).prop_map(Partition::from_unsorted)
}

fn flavor() -> impl Strategy<Value = Flavor> {
    prop_oneof![Just(Flavor::Spin), Just(Flavor::Osc)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn transpose_is_an_involution(p in partition(7, 7)) {
        prop_assert_eq!(p.transpose().transpose(), p.clone());
        prop_assert_eq!(p.transpose().size(), p.size());
        prop_assert_eq!(p.transpose().durfee_rank(), p.durfee_rank());
    }

    #[test]
    fn partition_text_round_trip(p in partition(6, 9)) {
        let back: Partition = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn lr_is_symmetric_and_transpose_invariant(lam in partition(4, 4), mu in partition(3, 3)) {
        for k in 0..=lam.size() {
            for nu in lam.sub_partitions_of_size(k) {
                let c = lr_coefficient(&lam, &mu, &nu);
                prop_assert_eq!(c, lr_coefficient(&lam, &nu, &mu));
                prop_assert_eq!(c, lr_coefficient(&lam.transpose(), &mu.transpose(), &nu.transpose()));
            }
        }
    }

    #[test]
    fn omega_respects_products(a in partition(3, 3), b in partition(3, 3)) {
        let (sa, sb) = (SchurVector::basis(a), SchurVector::basis(b));
        prop_assert_eq!(
            omega_transpose(&schur_multiply(&sa, &sb)),
            schur_multiply(&omega_transpose(&sa), &omega_transpose(&sb))
        );
    }

    #[test]
    fn square_basis_round_trip(p in partition(4, 4)) {
        let v = SchurVector::basis(p);
        prop_assert_eq!(from_square_basis(&to_square_basis(&v)), v.clone());
        prop_assert_eq!(to_square_basis(&from_square_basis(&v)), v);
    }

    #[test]
    fn modification_rules_agree(p in partition(8, 6), n in 1u32..=9) {
        let reg = RuleRegistry::default();
        let results: Vec<ModResult> = reg.iter().map(|r| r.tau_j(&p, n)).collect();
        prop_assert!(results.windows(2).all(|w| w[0] == w[1]));
        prop_assert_eq!(tau_j_border(&p, n), tau_j_weyl(&p, n));
    }

    #[test]
    fn short_partitions_are_fixed(p in partition(3, 5), n in 6u32..=9) {
        prop_assert_eq!(tau_j_border(&p, n), ModResult::defined(p.clone(), 0));
    }

    #[test]
    fn tau_is_short(p in partition(8, 5), n in 1u32..=8) {
        if let ModResult::Defined { tau, .. } = tau_j_border(&p, n) {
            prop_assert!(tau.len() <= (n / 2) as usize);
            prop_assert!(tau.size() <= p.size());
        }
    }

    #[test]
    fn pin_characters_decompose_to_themselves(p in partition(2, 3), n in 4u32..=6) {
        let ch = pin_character(&p, n).unwrap();
        let mult = decompose_spin(&ch, n).unwrap();
        prop_assert_eq!(mult.len(), 1);
        prop_assert_eq!(mult.get(&p), Some(&1));
        prop_assert_eq!(recombine_spin(&mult, n).unwrap(), ch);
    }

    #[test]
    fn normalization_is_confluent(seed in any::<u64>(), s in 0u32..=6, f in flavor()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = s % 3;
        let src: Vec<u32> = (1..=s).collect();
        let tgt: Vec<u32> = (1..=t.min(s)).collect();
        let raw = random_raw(&mut rng, &src, &tgt, f);
        let a = normalize(&raw).unwrap();
        let b = normalize_random(&raw, &mut rng).unwrap();
        prop_assert!(a.terms.keys().all(|d| d.is_normal()));
        prop_assert!(a.terms.len() as u64 <= hom_dim(s as u64, tgt.len() as u64));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>(), f in flavor()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sizes = [5u32, 3, 2, 1];
        let labels: Vec<Vec<u32>> = sizes.iter().map(|&k| (1..=k).collect()).collect();
        let a = random_morphism(&mut rng, &labels[0], &labels[1], f);
        let b = random_morphism(&mut rng, &labels[1], &labels[2], f);
        let c = random_morphism(&mut rng, &labels[2], &labels[3], f);
        prop_assert_eq!(c.compose(&b.compose(&a).unwrap()).unwrap(), c.compose(&b).unwrap().compose(&a).unwrap());
    }
}
