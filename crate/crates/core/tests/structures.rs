use algsurg_core::complex::{homology, is_chain_equivalence};
use algsurg_core::forms::{instant_obstruction, witt_class_z};
use algsurg_core::sampler::{self, random_iso};
use algsurg_core::structure::{check_quadratic, check_symmetric, is_poincare_quad, is_poincare_sym, symmetrize};
use algsurg_core::surgery::{cobordism_to_data_quad, surgery_quad, surgery_sym};
use algsurg_core::{Error, Ring};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ring_of(k: u8) -> Ring {
    if k == 0 {
        Ring::Integers
    } else {
        Ring::CyclicGroupRing(2 + usize::from(k) % 2)
    }
}

/// Unwrap a library result; an explicit overflow rejects the case, any other error fails it.
fn fit<T>(r: Result<T, Error>) -> Result<T, TestCaseError> {
    r.map_err(|e| match e {
        Error::Overflow => TestCaseError::reject("entries exceed machine integers"),
        e => TestCaseError::fail(format!("{e}")),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transport_along_isomorphisms_keeps_poincare(seed in any::<u64>(), n in 0i64..5, k in 0u8..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = ring_of(k);
        let x = sampler::random_symmetric_poincare(&mut rng, ring, n, 3);
        let f = random_iso(&mut rng, x.complex());
        let y = fit(x.transport(&f))?;
        prop_assert!(check_symmetric(&y).is_valid());
        prop_assert!(fit(is_poincare_sym(&y))?);
        let q = sampler::random_quadratic_poincare(&mut rng, ring, n, 3);
        let g = random_iso(&mut rng, q.complex());
        let z = fit(q.transport(&g))?;
        prop_assert!(check_quadratic(&z).is_valid());
        prop_assert!(fit(is_poincare_quad(&z))?);
    }

    #[test]
    fn symmetrization_and_shift_preserve_validity(seed in any::<u64>(), n in 0i64..5, k in 0u8..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = fit(sampler::random_quadratic(&mut rng, ring_of(k), n, 3))?;
        prop_assert!(check_symmetric(&symmetrize(&q)).is_valid());
        let s = fit(q.shift(2))?;
        prop_assert!(check_quadratic(&s).is_valid());
        prop_assert_eq!(s.n(), n + 4);
    }

    #[test]
    fn sampled_pairs_satisfy_the_pair_relation(seed in any::<u64>(), n in 0i64..5, k in 0u8..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sampler::random_symmetric_poincare(&mut rng, ring_of(k), n, 3);
        if let Some(p) = fit(sampler::random_sym_pair(&mut rng, &x, 2))? {
            prop_assert!(p.check_relations().is_valid(), "{}", p.check_relations());
        }
        let q = sampler::random_quadratic_poincare(&mut rng, ring_of(k), n, 3);
        if let Some(p) = fit(sampler::random_quad_pair(&mut rng, &q, 2))? {
            prop_assert!(p.check_relations().is_valid(), "{}", p.check_relations());
        }
    }

    #[test]
    fn surgery_outcomes_round_trip(seed in any::<u64>(), n in 0i64..4, k in 0u8..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = sampler::random_quadratic_poincare(&mut rng, ring_of(k), n, 3);
        if let Some(p) = fit(sampler::random_quad_pair(&mut rng, &q, 2))? {
            let out = fit(surgery_quad(&p))?;
            let rt = fit(cobordism_to_data_quad(&out.trace))?;
            prop_assert!(rt.g_verdict.holds);
        }
        let x = sampler::random_symmetric_poincare(&mut rng, ring_of(k), n, 3);
        if let Some(p) = fit(sampler::random_sym_pair(&mut rng, &x, 2))? {
            let out = fit(surgery_sym(&p))?;
            prop_assert!(fit(is_poincare_sym(&out.effect))?);
        }
    }

    #[test]
    fn obstruction_is_invariant_under_transport(seed in any::<u64>(), i in 1i64..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = sampler::random_quadratic_poincare(&mut rng, Ring::Integers, 2 * i, 8);
        let f = random_iso(&mut rng, q.complex());
        prop_assert!(fit(is_chain_equivalence(&f))?.holds);
        let a = fit(witt_class_z(&fit(instant_obstruction(&q))?.form))?;
        let b = fit(witt_class_z(&fit(instant_obstruction(&fit(q.transport(&f))?))?.form))?;
        prop_assert_eq!(a, b);
    }
}

#[test]
fn surgery_on_the_double_cover_fixture() {
    use algsurg_core::fixtures::{double_cover_surgery, DoubleCover};
    let out = surgery_quad(&double_cover_surgery(DoubleCover::Orientable)).unwrap();
    let h = homology(out.effect.complex()).unwrap();
    let ranks: Vec<usize> = h.iter().map(|g| g.free_rank).collect();
    assert_eq!(ranks, vec![2, 2]);
    assert!(out.trace.check(true).unwrap().is_valid());
}
