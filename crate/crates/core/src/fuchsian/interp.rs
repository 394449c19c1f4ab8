//! The C*-action `(∇, λ) ↦ (μ∇, μλ)` sampled at finitely many μ, and the
//! Higgs field obtained in the λ → 0 limit.

use serde::{Deserialize, Serialize};

use super::filtration::{classify_stability, Verdict};
use super::invariant::CheckMode;
use super::validate::{validate_lambda_connection, ValidationReport};
use super::FuchsianLambdaSystem;
use crate::error::{Error, Result};
use crate::exactnum::ext::FieldAlgorithms;
use crate::exactnum::field::Field;
use crate::exactnum::matrix::Matrix;
use crate::exactnum::subspace::Subspace;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterpRow {
    pub mu: String,
    pub lambda: String,
    pub validation: ValidationReport,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterpTable {
    pub rows: Vec<InterpRow>,
    /// Validation and stability verdicts agree across all rows.
    pub constant: bool,
    /// Per puncture: whether the nilpotent part of the residue maps each
    /// flag step into the next; `None` when the characteristic polynomial
    /// does not split over the field.
    pub limit_strongly_parabolic: Vec<Option<bool>>,
    pub limit_passes: Option<bool>,
}

/// Nilpotent part `N = A - S` of the Jordan–Chevalley decomposition, where
/// `S` acts on each generalized eigenspace by its eigenvalue. `None` when
/// the eigenvalues do not all lie in the field.
pub fn jordan_nilpotent_part<F: FieldAlgorithms>(a: &Matrix<F>) -> Result<Option<Matrix<F>>> {
    let f = a.field();
    let r = a.rows();
    let mut columns: Vec<Vec<F::Elem>> = Vec::new();
    let mut eigen: Vec<F::Elem> = Vec::new();
    for c in f.roots(&a.char_poly()?) {
        let shifted = a.sub(&Matrix::scalar(f, r, &c))?;
        let gen = Subspace::kernel_of(&shifted.pow(r as u32)?);
        for v in gen.basis_vectors() {
            columns.push(v);
            eigen.push(c.clone());
        }
    }
    if columns.len() != r {
        return Ok(None);
    }
    let p = Matrix::from_rows(f, r, columns)?.transpose();
    let p_inv = p.inverse().ok_or_else(|| Error::Precondition("generalized eigenvectors are dependent".into()))?;
    let mut d = Matrix::zeros(f, r, r);
    for (i, c) in eigen.into_iter().enumerate() {
        d.set(i, i, c);
    }
    let s = p.mul(&d)?.mul(&p_inv)?;
    Ok(Some(a.sub(&s)?))
}

pub fn interp_sweep<F: FieldAlgorithms>(
    sys: &FuchsianLambdaSystem<F>,
    mus: &[F::Elem],
    mode: &CheckMode<F>,
    budget: u64,
) -> Result<InterpTable> {
    let f = sys.field();
    let mut rows = Vec::new();
    for mu in mus {
        let scaled = sys.scale_action(mu)?;
        rows.push(InterpRow {
            mu: f.format(mu),
            lambda: f.format(scaled.lambda()),
            validation: validate_lambda_connection(&scaled)?,
            verdict: classify_stability(&scaled, mode, budget)?.verdict,
        });
    }
    let constant = rows
        .windows(2)
        .all(|w| w[0].verdict == w[1].verdict && w[0].validation.same_verdicts(&w[1].validation));

    let mut limit = Vec::new();
    for (a, chain) in sys.residues().iter().zip(sys.space().flags()) {
        limit.push(match jordan_nilpotent_part(a)? {
            Some(n) => Some(maps_into_next(&n, chain)?),
            None => None,
        });
    }
    let limit_passes = limit.iter().try_fold(true, |acc, x| x.map(|b| acc && b));
    Ok(InterpTable {
        rows,
        constant,
        limit_strongly_parabolic: limit,
        limit_passes,
    })
}

fn maps_into_next<F: Field>(n: &Matrix<F>, chain: &[Subspace<F>]) -> Result<bool> {
    for w in chain.windows(2) {
        if !w[0].image(n)?.is_subspace_of(&w[1])? {
            return Ok(false);
        }
    }
    Ok(true)
}
