mod common;

use common::{random_invertible, random_matrix};
use parastab::exactnum::matrix::{poly_eval, poly_from_roots};
use parastab::exactnum::subspace::{gaussian_binomial, subspace_count};
use parastab::exactnum::{enumerate_all_subspaces, enumerate_subspaces, Field, Matrix, PrimeField, Rationals, Subspace};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Number of `d`-subspaces of `F_q^n` as (ordered bases) / |GL_d|.
fn count_by_bases(n: u32, d: u32, q: u128) -> u128 {
    let num: u128 = (0..d).map(|i| q.pow(n) - q.pow(i)).product();
    let den: u128 = (0..d).map(|i| q.pow(d) - q.pow(i)).product();
    num / den
}

#[test]
fn enumeration_counts() {
    for p in [2u32, 3, 5] {
        let f = PrimeField::new(p).unwrap();
        for n in 0..=4usize {
            if p == 5 && n == 4 {
                continue;
            }
            let mut total = 0;
            for d in 0..=n {
                let subs = enumerate_subspaces(&f, n, d, 1_000_000).unwrap();
                let expected = count_by_bases(n as u32, d as u32, p as u128);
                assert_eq!(subs.len() as u128, expected, "p={p} n={n} d={d}");
                assert_eq!(gaussian_binomial(n, d, p as u64), expected);
                assert!(subs.iter().all(|s| s.dim() == d));
                let mut dedup = subs.clone();
                dedup.dedup();
                assert_eq!(dedup.len(), subs.len());
                total += subs.len();
            }
            assert_eq!(total as u128, subspace_count(n, p as u64));
            assert_eq!(enumerate_all_subspaces(&f, n, 1_000_000).unwrap().len(), total);
        }
    }
}

#[test]
fn enumeration_respects_budget() {
    let f = PrimeField::new(3).unwrap();
    assert!(enumerate_all_subspaces(&f, 4, 10).is_err());
}

fn matrix_poly<F: Field>(a: &Matrix<F>, coeffs: &[F::Elem]) -> Matrix<F> {
    let f = a.field();
    let n = a.rows();
    coeffs.iter().rev().fold(Matrix::zeros(f, n, n), |acc, c| {
        acc.mul(a).unwrap().add(&Matrix::scalar(f, n, c)).unwrap()
    })
}

proptest! {
    #[test]
    fn inverse_and_determinant(seed: u64, n in 1usize..=4) {
        let f = PrimeField::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&f, &mut rng, n, n, 0, 4);
        let b = random_matrix(&f, &mut rng, n, n, 0, 4);
        let det_ab = a.mul(&b).unwrap().determinant().unwrap();
        prop_assert_eq!(det_ab, f.mul(&a.determinant().unwrap(), &b.determinant().unwrap()));
        match a.inverse() {
            Some(inv) => prop_assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(&f, n)),
            None => prop_assert!(f.is_zero(&a.determinant().unwrap())),
        }
    }

    #[test]
    fn cayley_hamilton(seed: u64, n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = PrimeField::new(7).unwrap();
        let a = random_matrix(&f, &mut rng, n, n, 0, 6);
        let cp = a.char_poly().unwrap();
        prop_assert_eq!(cp.len(), n + 1);
        prop_assert!(matrix_poly(&a, &cp).is_zero());
        let sign = if n % 2 == 0 { f.one() } else { f.neg(&f.one()) };
        prop_assert_eq!(cp[0], f.mul(&sign, &a.determinant().unwrap()));

        let q = Rationals;
        let a = random_matrix(&q, &mut rng, n, n, -3, 3);
        prop_assert!(matrix_poly(&a, &a.char_poly().unwrap()).is_zero());
    }

    #[test]
    fn conjugated_diagonal_char_poly(seed: u64, n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = Rationals;
        let roots: Vec<_> = (0..n).map(|i| q.from_i64((seed as i64 % 5) - i as i64)).collect();
        let mut d = Matrix::zeros(&q, n, n);
        for (i, r) in roots.iter().enumerate() {
            d.set(i, i, r.clone());
        }
        let p = random_invertible(&q, &mut rng, n, -2, 2);
        let a = p.mul(&d).unwrap().mul(&p.inverse().unwrap()).unwrap();
        let cp = a.char_poly().unwrap();
        prop_assert_eq!(&cp, &poly_from_roots(&q, &roots));
        for r in &roots {
            prop_assert!(q.is_zero(&poly_eval(&q, &cp, r)));
        }
    }

    #[test]
    fn subspace_dimension_formulas(seed: u64, n in 1usize..=5) {
        let f = PrimeField::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = Subspace::row_space(&random_matrix(&f, &mut rng, n / 2 + 1, n, 0, 2));
        let v = Subspace::row_space(&random_matrix(&f, &mut rng, n.div_ceil(2), n, 0, 2));
        let sum = u.sum(&v).unwrap();
        let cap = u.intersect(&v).unwrap();
        prop_assert_eq!(sum.dim() + cap.dim(), u.dim() + v.dim());
        prop_assert!(cap.is_subspace_of(&u).unwrap() && u.is_subspace_of(&sum).unwrap());
        prop_assert_eq!(u.annihilator().dim(), n - u.dim());
        prop_assert_eq!(u.annihilator().annihilator(), u.clone());
        let g = random_invertible(&f, &mut rng, n, 0, 2);
        let img = u.image(&g).unwrap();
        prop_assert_eq!(img.dim(), u.dim());
        prop_assert_eq!(img.preimage(&g).unwrap(), u.clone());
    }

    #[test]
    fn quotient_map_round_trip(seed: u64, n in 1usize..=4) {
        let f = PrimeField::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = Subspace::row_space(&random_matrix(&f, &mut rng, n / 2, n, 0, 4));
        let u = Subspace::row_space(&random_matrix(&f, &mut rng, 1, n, 0, 4)).sum(&w).unwrap();
        let qm = w.quotient_map();
        prop_assert_eq!(qm.quotient_dim(), n - w.dim());
        let pushed = qm.push(&u).unwrap();
        prop_assert_eq!(pushed.dim(), u.dim() - w.dim());
        prop_assert_eq!(qm.lift(&pushed).unwrap(), u);
    }
}
