use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::FuchsianLambdaSystem;
use crate::error::Result;
use crate::exactnum::field::Field;
use crate::exactnum::matrix::Matrix;
use crate::parabolic::Parabolic;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PunctureValidation {
    pub id: String,
    /// `A(E_i) ⊆ E_i` for every step.
    pub flag_preserved: bool,
    /// `(A - λ a_i)(E_i) ⊆ E_{i+1}` for every step.
    pub residual: bool,
    /// `tr A = λ β` with `β = Σ a_i m_i`.
    pub trace: bool,
    /// `A(E_i) ⊆ E_{i+1}`, the residual condition at λ = 0.
    pub strongly_parabolic: bool,
    #[serde(with = "crate::serde_rational")]
    pub beta: BigRational,
    /// First step (1-based) where the residual condition fails.
    pub residual_failure_step: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub punctures: Vec<PunctureValidation>,
    /// `Σ_j A_j = 0`; informational, see [`ValidationReport::passes`].
    pub residue_sum_zero: bool,
    #[serde(with = "crate::serde_rational")]
    pub pdeg: BigRational,
    pub pdeg_zero: bool,
}

impl ValidationReport {
    /// All per-puncture conditions hold. The global residue sum is not part
    /// of this verdict: with λ ≠ 0 and weights in `[0,1)` the trace
    /// conditions force `tr Σ A_j = λ Σ β_j`, which is nonzero whenever some
    /// weight is.
    pub fn passes(&self) -> bool {
        self.punctures.iter().all(|p| p.flag_preserved && p.residual && p.trace)
    }

    /// Verdict-level comparison, ignoring the numerical fields.
    pub fn same_verdicts(&self, other: &Self) -> bool {
        self.residue_sum_zero == other.residue_sum_zero
            && self.punctures.len() == other.punctures.len()
            && self.punctures.iter().zip(&other.punctures).all(|(a, b)| {
                a.flag_preserved == b.flag_preserved
                    && a.residual == b.residual
                    && a.trace == b.trace
                    && a.strongly_parabolic == b.strongly_parabolic
            })
    }
}

pub fn validate_lambda_connection<F: Field>(sys: &FuchsianLambdaSystem<F>) -> Result<ValidationReport> {
    let f = sys.field();
    let r = sys.rank();
    let space = sys.space();
    let jumps = space.jumps();
    let mut punctures = Vec::new();
    for (j, a) in sys.residues().iter().enumerate() {
        let chain = &space.flags()[j];
        let ws = space.weight_system().weights(j);
        let mut flag_preserved = true;
        let mut strongly_parabolic = true;
        let mut residual_failure_step = None;
        for i in 0..ws.len() {
            let (step, next) = (&chain[i], &chain[i + 1]);
            flag_preserved &= step.image(a)?.is_subspace_of(step)?;
            strongly_parabolic &= step.image(a)?.is_subspace_of(next)?;
            let shift = lambda_times(sys, &ws[i])?;
            let shifted = a.sub(&Matrix::scalar(f, r, &shift))?;
            if residual_failure_step.is_none() && !step.image(&shifted)?.is_subspace_of(next)? {
                residual_failure_step = Some(i + 1);
            }
        }
        let beta = ws
            .iter()
            .zip(&jumps[j])
            .fold(BigRational::zero(), |acc, (w, &m)| acc + w * BigRational::from_integer(BigInt::from(m)));
        let trace = a.trace() == lambda_times(sys, &beta)?;
        punctures.push(PunctureValidation {
            id: space.weight_system().punctures()[j].id.clone(),
            flag_preserved,
            residual: residual_failure_step.is_none(),
            trace,
            strongly_parabolic,
            beta,
            residual_failure_step,
        });
    }
    let pdeg = space.pdeg();
    Ok(ValidationReport {
        punctures,
        residue_sum_zero: sys.residue_sum().is_zero(),
        pdeg_zero: pdeg.is_zero(),
        pdeg,
    })
}

/// `λ q` in the field; a weight whose denominator vanishes in the field is
/// only an error when λ ≠ 0.
fn lambda_times<F: Field>(sys: &FuchsianLambdaSystem<F>, q: &BigRational) -> Result<F::Elem> {
    let f = sys.field();
    if f.is_zero(sys.lambda()) {
        return Ok(f.zero());
    }
    Ok(f.mul(sys.lambda(), &f.from_rational(q)?))
}
