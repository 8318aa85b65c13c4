use nlg_core::analytic;
use nlg_core::behavior::random_ns_behavior;
use nlg_core::catalog;
use nlg_core::rational::{one, zero};
use nlg_core::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn behavior(n: usize, seed: u64) -> Behavior {
    random_ns_behavior(n, 3, 2, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pair_bound_holds_pointwise(seed in any::<u64>(), i in 0usize..16, j in 0usize..16) {
        let games = enumerate_games(3).unwrap();
        let (gi, gj) = (&games[i], &games[j]);
        let b = behavior(3, seed);
        let x = b.value(&gi.to_functional()).unwrap();
        let y = b.value(&gj.to_functional()).unwrap();
        let bound = analytic::theorem1(&x, gi.relation(gj).unwrap()).unwrap();
        prop_assert!(y <= bound);
        let lp = constrained_max(3, &gj.to_functional(), &gi.to_functional(), &x).unwrap();
        prop_assert_eq!(lp.value().cloned(), Some(bound));
    }

    #[test]
    fn constrained_max_dominates_samples(seed in any::<u64>(), which in 0usize..5) {
        let (g, _) = catalog::table3().swap_remove(which);
        let f = catalog::chsh().lift(3, &[0, 1]).unwrap();
        let b = behavior(3, seed);
        let x = b.value(&g).unwrap();
        let lp = constrained_max(3, &f, &g, &x).unwrap();
        let y = lp.value().cloned().unwrap();
        prop_assert!(y >= b.value(&f).unwrap());
        let w = lp.witness().unwrap();
        prop_assert!(w.is_fully_no_signaling());
        prop_assert_eq!(w.value(&g).unwrap(), x);
        prop_assert_eq!(w.value(&f).unwrap(), y);
    }

    #[test]
    fn lift_ignores_idle_parties(seed in any::<u64>(), c in 0usize..8, first in 0usize..3) {
        let game = enumerate_games(2).unwrap()[c];
        let parties = [first, (first + 1) % 3];
        let lifted = game.to_functional().lift(3, &parties).unwrap();
        let b = behavior(3, seed);
        let direct = b.marginal(&parties).unwrap().value(&game.to_functional()).unwrap();
        prop_assert_eq!(b.value(&lifted).unwrap(), direct);
    }

    #[test]
    fn svetlichny_values_are_probabilities(seed in any::<u64>(), c in 0usize..16) {
        let game = enumerate_games(3).unwrap()[c];
        let v = behavior(3, seed).value(&game.to_functional()).unwrap();
        prop_assert!(v >= zero() && v <= one());
    }
}
