#![allow(dead_code)]

use std::collections::BTreeSet;

use num_rational::BigRational;
use parastab::exactnum::field::rat;
use parastab::exactnum::{Field, Matrix, PrimeField, Subspace};
use parastab::fuchsian::FuchsianLambdaSystem;
use parastab::parabolic::{ParabolicSpace, WeightSystem};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_matrix<F: Field>(f: &F, rng: &mut ChaCha8Rng, rows: usize, cols: usize, lo: i64, hi: i64) -> Matrix<F> {
    let mut m = Matrix::zeros(f, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, f.from_i64(rng.gen_range(lo..=hi)));
        }
    }
    m
}

pub fn random_invertible<F: Field>(f: &F, rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> Matrix<F> {
    loop {
        let m = random_matrix(f, rng, n, n, lo, hi);
        if m.inverse().is_some() {
            return m;
        }
    }
}

pub fn random_weights(rng: &mut ChaCha8Rng, l: usize, max_den: i64) -> Vec<BigRational> {
    let pool: BTreeSet<BigRational> = (1..=max_den).flat_map(|d| (0..d).map(move |k| rat(k, d))).collect();
    let pool: Vec<BigRational> = pool.into_iter().collect();
    let mut w: Vec<BigRational> = pool.choose_multiple(rng, l).cloned().collect();
    w.sort();
    w
}

pub fn random_composition(rng: &mut ChaCha8Rng, r: usize) -> Vec<usize> {
    let l = rng.gen_range(1..=r);
    let mut cuts: Vec<usize> = (1..r).collect::<Vec<_>>().choose_multiple(rng, l - 1).copied().collect();
    cuts.sort();
    let mut parts = Vec::new();
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(r)) {
        parts.push(c - prev);
        prev = c;
    }
    parts
}

/// Interior flag steps spanned by trailing columns of `p`.
pub fn flag_from_columns<F: Field>(f: &F, p: &Matrix<F>, jumps: &[usize]) -> Vec<Subspace<F>> {
    let r = p.rows();
    let mut steps = Vec::new();
    let mut dim = r;
    for &m in &jumps[..jumps.len() - 1] {
        dim -= m;
        steps.push(Subspace::span(f, r, (r - dim..r).map(|c| p.column(c)).collect()).unwrap());
    }
    steps
}

pub fn random_space<F: Field>(f: &F, rng: &mut ChaCha8Rng, r: usize, punctures: usize, degree: i64) -> ParabolicSpace<F> {
    let mut weights = Vec::new();
    let mut flags = Vec::new();
    for x in 0..punctures {
        let jumps = random_composition(rng, r);
        weights.push((format!("x{x}"), random_weights(rng, jumps.len(), 4)));
        let p = random_invertible(f, rng, r, -2, 2);
        flags.push(flag_from_columns(f, &p, &jumps));
    }
    ParabolicSpace::from_interior(f, r, degree, WeightSystem::new(weights).unwrap(), flags).unwrap()
}

/// Random system over `F_p`; residues are zero, block triangular in a
/// common basis, or arbitrary.
pub fn random_fp_system(f: &PrimeField, rng: &mut ChaCha8Rng, max_rank: usize) -> FuchsianLambdaSystem<PrimeField> {
    let p = f.p() as i64;
    let r = rng.gen_range(1..=max_rank);
    let punctures = rng.gen_range(1..=2);
    let degree = rng.gen_range(0..=1);
    let space = random_space(f, rng, r, punctures, degree);
    let q = random_invertible(f, rng, r, 0, p - 1);
    let q_inv = q.inverse().unwrap();
    let split = rng.gen_range(1..=r);
    let style = rng.gen_range(0..3);
    let residues = (0..punctures)
        .map(|_| match style {
            0 => Matrix::zeros(f, r, r),
            1 => {
                let mut t = random_matrix(f, rng, r, r, 0, p - 1);
                for i in split..r {
                    for j in 0..split {
                        t.set(i, j, 0);
                    }
                }
                q.mul(&t).unwrap().mul(&q_inv).unwrap()
            }
            _ => random_matrix(f, rng, r, r, 0, p - 1),
        })
        .collect();
    FuchsianLambdaSystem::new(space, residues, 0).unwrap()
}
