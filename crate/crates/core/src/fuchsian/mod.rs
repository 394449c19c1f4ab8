//! Parabolic λ-connections on the trivial bundle over the line, modelled by
//! their residue matrices at the punctures together with weighted flags.
//!
//! Sub-objects are common invariant subspaces of the residues; each one is
//! treated as a saturated degree-0 subbundle carrying the induced flags.

mod filtration;
mod interp;
mod invariant;
mod validate;

pub use filtration::{
    classify_stability, graded_invariants, hn_filtration, isomorphic_brute_force, jh_filtration,
    s_equivalent_weak, EnumerationOrder, Filtration, GradedFactor, SEquivalence, StabilityReport,
    Verdict, DEGREE_ZERO_CAVEAT,
};
pub use interp::{interp_sweep, jordan_nilpotent_part, InterpRow, InterpTable};
pub use invariant::{algebra_span, invariant_subspaces, AlgebraSpan, CheckMode, CheckedMode, InvariantFamily};
pub use validate::{validate_lambda_connection, PunctureValidation, ValidationReport};

use crate::error::{Error, Result};
use crate::exactnum::field::Field;
use crate::exactnum::matrix::Matrix;
use crate::exactnum::subspace::Subspace;
use crate::parabolic::{restrict_to, Parabolic, ParabolicSpace, WeightSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuchsianLambdaSystem<F: Field> {
    space: ParabolicSpace<F>,
    residues: Vec<Matrix<F>>,
    lambda: F::Elem,
}

impl<F: Field> FuchsianLambdaSystem<F> {
    /// One residue per puncture of `space`, each `r x r`.
    pub fn new(space: ParabolicSpace<F>, residues: Vec<Matrix<F>>, lambda: F::Elem) -> Result<Self> {
        let r = space.ambient();
        if space.weight_system().is_empty() {
            return Err(Error::invalid("punctures", "at least one puncture is required"));
        }
        if residues.len() != space.weight_system().len() {
            return Err(Error::dim("residues per puncture", space.weight_system().len(), residues.len()));
        }
        for (j, a) in residues.iter().enumerate() {
            if a.rows() != r || a.cols() != r {
                return Err(Error::invalid(
                    format!("punctures[{j}].residue"),
                    format!("expected {r}x{r}, found {}x{}", a.rows(), a.cols()),
                ));
            }
        }
        Ok(FuchsianLambdaSystem { space, residues, lambda })
    }

    pub fn field(&self) -> &F {
        self.space.field()
    }
    pub fn rank(&self) -> usize {
        self.space.ambient()
    }
    pub fn degree(&self) -> i64 {
        self.space.degree()
    }
    pub fn lambda(&self) -> &F::Elem {
        &self.lambda
    }
    pub fn space(&self) -> &ParabolicSpace<F> {
        &self.space
    }
    pub fn weights(&self) -> &WeightSystem {
        self.space.weight_system()
    }
    pub fn residues(&self) -> &[Matrix<F>] {
        &self.residues
    }

    pub fn is_invariant(&self, w: &Subspace<F>) -> Result<bool> {
        for a in &self.residues {
            if !w.is_invariant_under(a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The C*-action `(∇, λ) ↦ (μ∇, μλ)`; flags and weights are unchanged.
    pub fn scale_action(&self, mu: &F::Elem) -> Result<Self> {
        let f = self.field();
        if f.is_zero(mu) {
            return Err(Error::Precondition("scaling by zero is not an isomorphism".into()));
        }
        Ok(FuchsianLambdaSystem {
            space: self.space.clone(),
            residues: self.residues.iter().map(|a| a.scale(mu)).collect(),
            lambda: f.mul(mu, &self.lambda),
        })
    }

    /// Sub-object on an invariant `W`, in the coordinates of its echelon basis.
    pub fn restrict(&self, w: &Subspace<F>, degree: i64) -> Result<Self> {
        if !self.is_invariant(w)? {
            return Err(Error::Precondition("restriction to a non-invariant subspace".into()));
        }
        let space = self.space.induced_substructure(w, degree)?;
        let residues = self
            .residues
            .iter()
            .map(|a| restrict_matrix(a, w))
            .collect::<Result<Vec<_>>>()?;
        Ok(FuchsianLambdaSystem {
            space,
            residues,
            lambda: self.lambda.clone(),
        })
    }

    /// Quotient by an invariant `W`; keeps the degree of the whole system.
    pub fn quotient(&self, w: &Subspace<F>) -> Result<Self> {
        if !self.is_invariant(w)? {
            return Err(Error::Precondition("quotient by a non-invariant subspace".into()));
        }
        let qm = w.quotient_map();
        let space = self.space.quotient_structure(w, self.degree())?;
        let residues = self.residues.iter().map(|a| qm.induced(a)).collect::<Result<Vec<_>>>()?;
        Ok(FuchsianLambdaSystem {
            space,
            residues,
            lambda: self.lambda.clone(),
        })
    }

    /// `upper / lower` for invariant `lower ⊆ upper`. The factor has degree
    /// 0 unless `upper` is the whole space.
    pub fn subquotient(&self, upper: &Subspace<F>, lower: &Subspace<F>) -> Result<Self> {
        let degree = if upper.is_full() { self.degree() } else { 0 };
        let sub = self.restrict(upper, degree)?;
        sub.quotient(&restrict_to(lower, upper))
    }

    /// Block-diagonal direct sum; both systems must share λ and punctures.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.lambda != other.lambda {
            return Err(Error::Precondition("direct sum needs equal λ".into()));
        }
        let space = self.space.direct_sum(&other.space)?;
        let residues = self.residues.iter().zip(&other.residues).map(|(a, b)| a.block_diag(b)).collect();
        Self::new(space, residues, self.lambda.clone())
    }

    /// `Σ_j A_j`, which vanishes for a global system on the trivial bundle.
    pub fn residue_sum(&self) -> Matrix<F> {
        let r = self.rank();
        self.residues
            .iter()
            .fold(Matrix::zeros(self.field(), r, r), |acc, a| acc.add(a).expect("square residues"))
    }
}

/// Matrix of `A|_W` in the echelon coordinates of an `A`-invariant `W`.
pub(crate) fn restrict_matrix<F: Field>(a: &Matrix<F>, w: &Subspace<F>) -> Result<Matrix<F>> {
    let f = a.field();
    let k = w.dim();
    let mut m = Matrix::zeros(f, k, k);
    for (col, b) in w.basis_vectors().iter().enumerate() {
        let image = a.apply(b)?;
        for (row, &p) in w.pivots().iter().enumerate() {
            m.set(row, col, image[p].clone());
        }
    }
    Ok(m)
}
