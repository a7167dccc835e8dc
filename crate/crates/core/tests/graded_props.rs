//! Property tests for the graded module layer: realization is independent of
//! enumeration order, and shifting composes additively on catalog models.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use std::sync::Arc;
use thh_core::arith::Prime;
use thh_core::catalog::{thh_bp2_bp1_closed, thh_ell, thh_ell_zp};
use thh_core::graded::Presentation;

/// Re-emit a presentation with both enumerators shuffled by a seeded rng.
fn shuffled(pres: &Presentation, seed: u64) -> Presentation {
    let p1 = pres.clone();
    let p2 = pres.clone();
    Presentation::from_parts(
        pres.prime(),
        pres.has_v1(),
        Arc::new(move |d| {
            let mut out = p1.generators_up_to(d);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ d as u64);
            out.shuffle(&mut rng);
            out
        }),
        Arc::new(move |d| {
            let mut out = p2.relations_up_to(d);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_mul(3) ^ d as u64);
            out.shuffle(&mut rng);
            out
        }),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn realization_is_enumeration_order_independent(seed in any::<u64>(), d in 0i64..80) {
        let p = Prime::new(2).unwrap();
        for pres in [thh_ell(p), thh_ell_zp(p), thh_bp2_bp1_closed(p)] {
            let shuffled = shuffled(&pres, seed);
            prop_assert_eq!(pres.realize(d), shuffled.realize(d));
        }
    }

    #[test]
    fn shift_composes_additively(s in -6i64..6, t in -6i64..6, d in 0i64..40) {
        let p = Prime::new(2).unwrap();
        let pres = thh_ell(p);
        let a = pres.shift(s).shift(t);
        let b = pres.shift(s + t);
        prop_assert_eq!(a.realize(d), b.realize(d));
    }

    #[test]
    fn shift_moves_degrees(t in 0i64..10, d in 0i64..40) {
        let p = Prime::new(2).unwrap();
        let pres = thh_ell_zp(p);
        prop_assert_eq!(pres.shift(t).realize(d + t), pres.realize(d));
    }
}
