//! Common invariant subspaces of the residues.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::FuchsianLambdaSystem;
use crate::error::Result;
use crate::exactnum::ext::FieldAlgorithms;
use crate::exactnum::field::Field;
use crate::exactnum::matrix::Matrix;
use crate::exactnum::subspace::Subspace;

/// How sub-objects are searched for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckMode<F: Field> {
    /// Every subspace over a prime field.
    Exhaustive,
    /// Irreducibility certificate via the span of the generated algebra;
    /// falls back to eigenspace-generated candidates.
    Burnside,
    /// Only the supplied subspaces.
    Candidates(Vec<Subspace<F>>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckedMode {
    ExhaustiveFp,
    BurnsideCertified,
    CandidateList,
}

/// Proper nonzero invariant subspaces, sorted canonically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFamily<F: Field> {
    pub subspaces: Vec<Subspace<F>>,
    /// `true` when the list contains every proper nonzero invariant subspace.
    pub complete: bool,
    pub checked_mode: CheckedMode,
}

/// Span of the unital algebra generated by some matrices, with one word
/// (sequence of generator indices) per basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpan {
    pub dim: usize,
    pub words: Vec<Vec<usize>>,
}

pub fn algebra_span<F: Field>(field: &F, n: usize, generators: &[Matrix<F>]) -> Result<AlgebraSpan> {
    let flat = |m: &Matrix<F>| m.entries().to_vec();
    let mut basis: Vec<Vec<F::Elem>> = Vec::new();
    let mut span = Subspace::zero(field, n * n);
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut elements: Vec<Matrix<F>> = Vec::new();
    let id = Matrix::identity(field, n);
    span = span.sum(&Subspace::span(field, n * n, vec![flat(&id)])?)?;
    basis.push(flat(&id));
    words.push(Vec::new());
    elements.push(id);
    let mut frontier = 0;
    while frontier < elements.len() && span.dim() < n * n {
        let current = elements[frontier].clone();
        let word = words[frontier].clone();
        for (g, a) in generators.iter().enumerate() {
            let prod = a.mul(&current)?;
            if span.contains(prod.entries())? {
                continue;
            }
            span = span.sum(&Subspace::span(field, n * n, vec![flat(&prod)])?)?;
            let mut w = word.clone();
            w.push(g);
            words.push(w);
            elements.push(prod);
        }
        frontier += 1;
    }
    Ok(AlgebraSpan { dim: span.dim(), words })
}

pub fn invariant_subspaces<F: FieldAlgorithms>(
    sys: &FuchsianLambdaSystem<F>,
    mode: &CheckMode<F>,
    budget: u64,
) -> Result<InvariantFamily<F>> {
    let f = sys.field();
    let r = sys.rank();
    match mode {
        CheckMode::Exhaustive => {
            let all = f.all_subspaces(r, budget)?;
            let flags: Vec<bool> = all
                .par_iter()
                .map(|w| !w.is_zero() && !w.is_full() && sys.is_invariant(w).unwrap_or(false))
                .collect();
            let subspaces = all.into_iter().zip(flags).filter_map(|(w, keep)| keep.then_some(w)).collect();
            Ok(InvariantFamily {
                subspaces,
                complete: true,
                checked_mode: CheckedMode::ExhaustiveFp,
            })
        }
        CheckMode::Burnside => {
            let span = algebra_span(f, r, sys.residues())?;
            if span.dim == r * r {
                return Ok(InvariantFamily {
                    subspaces: Vec::new(),
                    complete: true,
                    checked_mode: CheckedMode::BurnsideCertified,
                });
            }
            Ok(InvariantFamily {
                subspaces: eigen_candidates(sys)?,
                complete: false,
                checked_mode: CheckedMode::CandidateList,
            })
        }
        CheckMode::Candidates(list) => {
            let mut subspaces = Vec::new();
            for w in list {
                if w.ambient_dim() == r && !w.is_zero() && !w.is_full() && sys.is_invariant(w)? {
                    subspaces.push(w.clone());
                }
            }
            subspaces.sort();
            subspaces.dedup();
            Ok(InvariantFamily {
                subspaces,
                complete: false,
                checked_mode: CheckedMode::CandidateList,
            })
        }
    }
}

/// Smallest subspace containing `seed` and stable under every residue.
fn invariant_closure<F: Field>(sys: &FuchsianLambdaSystem<F>, seed: Subspace<F>) -> Result<Subspace<F>> {
    let mut current = seed;
    loop {
        let mut next = current.clone();
        for a in sys.residues() {
            next = next.sum(&current.image(a)?)?;
        }
        if next.dim() == current.dim() {
            return Ok(current);
        }
        current = next;
    }
}

/// Invariant closures of eigenvectors, eigenspaces, generalized eigenspaces,
/// kernels and images of the individual residues.
fn eigen_candidates<F: FieldAlgorithms>(sys: &FuchsianLambdaSystem<F>) -> Result<Vec<Subspace<F>>> {
    let f = sys.field();
    let r = sys.rank();
    let mut seeds = Vec::new();
    for a in sys.residues() {
        seeds.push(Subspace::kernel_of(a));
        seeds.push(Subspace::column_space(a));
        for c in f.roots(&a.char_poly()?) {
            let shifted = a.sub(&Matrix::scalar(f, r, &c))?;
            let eigen = Subspace::kernel_of(&shifted);
            for v in eigen.basis_vectors() {
                seeds.push(Subspace::span(f, r, vec![v])?);
            }
            seeds.push(eigen);
            seeds.push(Subspace::kernel_of(&shifted.pow(r as u32)?));
        }
    }
    let mut out = Vec::new();
    for seed in seeds {
        if seed.is_zero() {
            continue;
        }
        let closed = invariant_closure(sys, seed)?;
        if !closed.is_full() {
            out.push(closed);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}
