mod common;

use algsurg_core::complex::{homology, is_chain_equivalence, mapping_cone, reduce_complex};
use algsurg_core::sampler::{random_complex, random_iso};
use algsurg_core::{ChainComplex, ChainMap, Ring};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn torsion_product(c: &ChainComplex) -> Vec<i128> {
    homology(c).unwrap().iter().map(|h| h.torsion.iter().product()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn free_ranks_match_rational_oracle(seed in any::<u64>(), lo in -2i64..3, len in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(&mut rng, Ring::Integers, lo, len, 3);
        for h in homology(&c).unwrap() {
            prop_assert_eq!(h.free_rank, common::betti_oracle(&c, h.degree));
        }
    }

    #[test]
    fn homology_is_invariant_under_isomorphism(seed in any::<u64>(), len in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(&mut rng, Ring::Integers, 0, len, 3);
        let f = random_iso(&mut rng, &c);
        let d = f.target().clone();
        prop_assert_eq!(homology(&c).unwrap(), homology(&d).unwrap());
        prop_assert!(is_chain_equivalence(&f).unwrap().holds);
    }

    #[test]
    fn reduction_preserves_homology(seed in any::<u64>(), len in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(&mut rng, Ring::Integers, 0, len, 3);
        let red = reduce_complex(&c).unwrap();
        prop_assert_eq!(torsion_product(&c), torsion_product(&red.reduced.with_window(c.lo(), c.hi()).unwrap()));
        prop_assert!(red.f.validate().is_valid());
        prop_assert!(is_chain_equivalence(&red.f).unwrap().holds);
    }

    #[test]
    fn group_ring_isomorphisms_are_equivalences(seed in any::<u64>(), len in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(&mut rng, Ring::CyclicGroupRing(2), 0, len, 2);
        let f = random_iso(&mut rng, &c);
        prop_assert!(is_chain_equivalence(&f).unwrap().holds);
    }
}

#[test]
fn zero_map_of_a_sphere_is_not_an_equivalence() {
    let s = ChainComplex::sphere_module(Ring::Integers, 2, 1);
    assert!(!is_chain_equivalence(&ChainMap::zero(&s, &s)).unwrap().holds);
    assert!(is_chain_equivalence(&ChainMap::identity(&s)).unwrap().holds);
    let cone = mapping_cone(&ChainMap::identity(&s));
    assert!(homology(&cone).unwrap().iter().all(|h| h.is_zero()));
}
