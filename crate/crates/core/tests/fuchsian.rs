mod common;

use common::{flag_from_columns, random_composition, random_fp_system, random_invertible, random_matrix, random_weights};
use num_rational::BigRational;
use parastab::exactnum::matrix::poly_from_roots;
use parastab::exactnum::{enumerate_all_subspaces, Field, Matrix, PrimeField, Rationals};
use parastab::fuchsian::{
    algebra_span, classify_stability, graded_invariants, hn_filtration, invariant_subspaces, jh_filtration,
    validate_lambda_connection, CheckMode, CheckedMode, EnumerationOrder, FuchsianLambdaSystem, Verdict,
};
use parastab::parabolic::{Parabolic, ParabolicSpace, WeightSystem};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BUDGET: u64 = 1_000_000;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hn_chain_properties(seed: u64) {
        let f = PrimeField::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random_fp_system(&f, &mut rng, 3);
        let hn = hn_filtration(&sys, &CheckMode::Exhaustive, EnumerationOrder::Forward, BUDGET).unwrap();
        prop_assert!(hn.slopes.windows(2).all(|s| s[0] > s[1]));
        for (k, factor) in hn.factors(&sys).unwrap().iter().enumerate() {
            prop_assert_eq!(factor.space().pmu(), hn.slopes[k].clone());
            let rep = classify_stability(factor, &CheckMode::Exhaustive, BUDGET).unwrap();
            prop_assert!(rep.verdict.is_semistable());
        }
        let verdict = classify_stability(&sys, &CheckMode::Exhaustive, BUDGET).unwrap().verdict;
        prop_assert_eq!(hn.len() == 1, verdict.is_semistable());
        // degree is pdeg-additive across the graded pieces
        let total: BigRational = hn
            .factors(&sys)
            .unwrap()
            .iter()
            .map(|q| q.space().pdeg())
            .sum();
        prop_assert_eq!(total, sys.space().pdeg());
    }

    #[test]
    fn jh_of_semistable(seed: u64) {
        let f = PrimeField::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random_fp_system(&f, &mut rng, 3);
        let verdict = classify_stability(&sys, &CheckMode::Exhaustive, BUDGET).unwrap().verdict;
        match jh_filtration(&sys, &CheckMode::Exhaustive, BUDGET) {
            Ok(jh) => {
                prop_assert!(verdict.is_semistable());
                prop_assert!(jh.slopes.iter().all(|s| *s == sys.space().pmu()));
                prop_assert_eq!(jh.len() == 1, verdict == Verdict::Stable);
                for factor in jh.factors(&sys).unwrap() {
                    let rep = classify_stability(&factor, &CheckMode::Exhaustive, BUDGET).unwrap();
                    prop_assert_eq!(rep.verdict, Verdict::Stable);
                }
                let graded = graded_invariants(&sys, &CheckMode::Exhaustive, BUDGET).unwrap();
                prop_assert_eq!(graded.len(), jh.len());
            }
            Err(_) => prop_assert_eq!(verdict, Verdict::Unstable),
        }
    }

    #[test]
    fn scaling_preserves_stability(seed: u64, mu in 1u32..5) {
        let f = PrimeField::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random_fp_system(&f, &mut rng, 3);
        let scaled = sys.scale_action(&mu).unwrap();
        let a = classify_stability(&sys, &CheckMode::Exhaustive, BUDGET).unwrap();
        let b = classify_stability(&scaled, &CheckMode::Exhaustive, BUDGET).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.witness, b.witness);
        prop_assert!(sys.scale_action(&0).is_err());
    }

    #[test]
    fn burnside_agrees_with_exhaustive_over_fp(seed: u64) {
        let f = PrimeField::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random_fp_system(&f, &mut rng, 3);
        let exhaustive = invariant_subspaces(&sys, &CheckMode::Exhaustive, BUDGET).unwrap();
        let burnside = invariant_subspaces(&sys, &CheckMode::Burnside, BUDGET).unwrap();
        if burnside.checked_mode == CheckedMode::BurnsideCertified {
            prop_assert!(exhaustive.subspaces.is_empty());
        }
        for w in &burnside.subspaces {
            prop_assert!(exhaustive.subspaces.contains(w));
        }
    }

    #[test]
    fn burnside_over_q_is_sound_mod_p(seed: u64, r in 2usize..=3) {
        // A full algebra mod p lifts to a full algebra over Q, so the
        // rational certificate must fire whenever the reduction is full.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = Rationals;
        let fp = PrimeField::new(5).unwrap();
        let ints: Vec<Vec<Vec<i64>>> = (0..2)
            .map(|_| (0..r).map(|_| (0..r).map(|_| rng.gen_range(-2..=2)).collect()).collect())
            .collect();
        let residues_q: Vec<Matrix<Rationals>> = ints
            .iter()
            .map(|m| Matrix::from_i64(&q, &m.iter().map(|row| row.as_slice()).collect::<Vec<_>>()))
            .collect();
        let residues_p: Vec<Matrix<PrimeField>> = ints
            .iter()
            .map(|m| Matrix::from_i64(&fp, &m.iter().map(|row| row.as_slice()).collect::<Vec<_>>()))
            .collect();
        let full_mod_p = algebra_span(&fp, r, &residues_p).unwrap().dim == r * r;
        let span_q = algebra_span(&q, r, &residues_q).unwrap();
        if full_mod_p {
            prop_assert_eq!(span_q.dim, r * r);
        }
        let ws = WeightSystem::new(vec![("a".into(), vec![q.zero()]), ("b".into(), vec![q.zero()])]).unwrap();
        let space = ParabolicSpace::from_interior(&q, r, 0, ws, vec![vec![], vec![]]).unwrap();
        let sys = FuchsianLambdaSystem::new(space, residues_q, q.zero()).unwrap();
        let fam = invariant_subspaces(&sys, &CheckMode::Burnside, BUDGET).unwrap();
        prop_assert_eq!(fam.checked_mode == CheckedMode::BurnsideCertified, span_q.dim == r * r);
        for w in &fam.subspaces {
            prop_assert!(sys.is_invariant(w).unwrap());
        }
    }

    #[test]
    fn lambda_connection_char_poly(seed: u64, r in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = Rationals;
        let jumps = random_composition(&mut rng, r);
        let alpha = random_weights(&mut rng, jumps.len(), 6);
        let lambda = parastab::exactnum::field::rat(rng.gen_range(1..=5), rng.gen_range(1..=3));
        let blocks: Vec<usize> = jumps.iter().enumerate().flat_map(|(b, &m)| std::iter::repeat_n(b, m)).collect();
        let p = random_invertible(&q, &mut rng, r, -2, 2);
        let noise = random_matrix(&q, &mut rng, r, r, -3, 3);
        let mut a = Matrix::zeros(&q, r, r);
        let mut roots = Vec::new();
        for i in 0..r {
            for j in 0..r {
                if i == j {
                    a.set(i, i, &lambda * &alpha[blocks[i]]);
                } else if blocks[i] > blocks[j] {
                    a.set(i, j, noise.get(i, j).clone());
                }
            }
            roots.push(&lambda * &alpha[blocks[i]]);
        }
        let a = p.mul(&a).unwrap().mul(&p.inverse().unwrap()).unwrap();
        prop_assert_eq!(a.char_poly().unwrap(), poly_from_roots(&q, &roots));
        let ws = WeightSystem::new(vec![("x".into(), alpha)]).unwrap();
        let space = ParabolicSpace::from_interior(&q, r, 0, ws, vec![flag_from_columns(&q, &p, &jumps)]).unwrap();
        let sys = FuchsianLambdaSystem::new(space, vec![a], lambda).unwrap();
        prop_assert!(validate_lambda_connection(&sys).unwrap().passes());
    }
}

#[test]
fn hn_witness_is_invariant_and_maximal() {
    let f = PrimeField::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let sys = random_fp_system(&f, &mut rng, 3);
        let hn = hn_filtration(&sys, &CheckMode::Exhaustive, EnumerationOrder::Forward, BUDGET).unwrap();
        if hn.len() < 2 {
            continue;
        }
        let w1 = &hn.steps[1];
        assert!(sys.is_invariant(w1).unwrap());
        let s1 = sys.space().induced_substructure(w1, 0).unwrap().pmu();
        for u in enumerate_all_subspaces(&f, sys.rank(), BUDGET).unwrap() {
            if u.is_zero() || u.is_full() || !sys.is_invariant(&u).unwrap() {
                continue;
            }
            let s = sys.space().induced_substructure(&u, 0).unwrap().pmu();
            assert!(s < s1 || (s == s1 && u.dim() <= w1.dim()));
            if s == s1 {
                assert!(u.is_subspace_of(w1).unwrap());
            }
        }
    }
}
