mod common;

use common::{random_composition, random_space, random_weights};
use num_rational::BigRational;
use num_traits::{One, Zero};
use parastab::exactnum::field::{int, rat};
use parastab::exactnum::{enumerate_all_subspaces, PrimeField};
use parastab::parabolic::{
    delta_gap, gieseker_leq, min_quotient_slope, telescoped_weight, weighted_jump_sum, Parabolic, ParabolicNumerics,
    Precedence, WeightSystem,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn jump_sum_telescopes(seed: u64, r in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let jumps = random_composition(&mut rng, r);
        let weights = random_weights(&mut rng, jumps.len(), 7);
        let mut dims = vec![r];
        for m in &jumps {
            dims.push(dims.last().unwrap() - m);
        }
        let direct: BigRational = weights.iter().zip(&jumps).map(|(a, &m)| a * int(m as i64)).sum();
        prop_assert_eq!(weighted_jump_sum(&weights, &dims), direct.clone());
        prop_assert_eq!(telescoped_weight(&weights, &dims), direct);
    }

    #[test]
    fn direct_sum_is_additive(seed: u64, r1 in 1usize..=2, r2 in 1usize..=2) {
        let f = PrimeField::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (d1, d2) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
        let a = random_space(&f, &mut rng, r1, 2, d1);
        let b = random_space(&f, &mut rng, r2, 2, d2);
        let s = a.direct_sum(&b).unwrap();
        prop_assert_eq!(s.rank(), r1 + r2);
        prop_assert_eq!(s.degree(), d1 + d2);
        prop_assert_eq!(s.owt(), a.owt() + b.owt());
        prop_assert_eq!(s.pdeg(), a.pdeg() + b.pdeg());
    }

    #[test]
    fn min_quotient_slope_is_minimal(seed: u64, r in 1usize..=3) {
        let f = PrimeField::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_space(&f, &mut rng, r, 1, 0);
        let (m, w) = min_quotient_slope(&e, 1_000_000).unwrap();
        prop_assert!(!w.is_full());
        prop_assert_eq!(e.quotient_structure(&w, 0).unwrap().pmu(), m.clone());
        for u in enumerate_all_subspaces(&f, r, 1_000_000).unwrap() {
            if !u.is_full() {
                prop_assert!(e.quotient_structure(&u, 0).unwrap().pmu() >= m);
            }
        }
    }

    #[test]
    fn gieseker_is_reflexive_and_gap_positive(seed: u64, r in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let jumps = random_composition(&mut rng, r);
        let weights = random_weights(&mut rng, jumps.len(), 6);
        let mut dims = vec![r];
        for m in &jumps {
            dims.push(dims.last().unwrap() - m);
        }
        let ws = WeightSystem::new(vec![("x".into(), weights)]).unwrap();
        let e = ParabolicNumerics::new(r, rng.gen_range(-5..=5), rng.gen_range(0..=3), ws.clone(), vec![dims]).unwrap();
        prop_assert_eq!(gieseker_leq(&e, &e).unwrap(), Precedence::PrecedesEq);
        let delta = delta_gap(r, &ws);
        prop_assert!(delta > BigRational::zero() && delta <= BigRational::one());
    }
}

#[test]
fn slope_examples() {
    let ws = WeightSystem::new(vec![("x".into(), vec![rat(0, 1), rat(1, 2)])]).unwrap();
    let e = ParabolicNumerics::new(2, 1, 0, ws, vec![vec![2, 1, 0]]).unwrap();
    assert_eq!(e.owt(), rat(1, 2));
    assert_eq!(e.pdeg(), rat(3, 2));
    assert_eq!(e.pmu(), rat(3, 4));
}
