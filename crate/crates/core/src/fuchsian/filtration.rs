//! Slope stability, Harder–Narasimhan and Jordan–Hölder filtrations, and
//! S-equivalence invariants.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::invariant::{invariant_subspaces, CheckMode, CheckedMode, InvariantFamily};
use super::FuchsianLambdaSystem;
use crate::error::{Error, Result};
use crate::exactnum::ext::FieldAlgorithms;
use crate::exactnum::field::{Field, PrimeField};
use crate::exactnum::matrix::Matrix;
use crate::exactnum::subspace::{check_budget, Subspace};
use crate::parabolic::Parabolic;

pub const DEGREE_ZERO_CAVEAT: &str = "sub-objects are invariant subspaces treated as saturated degree-0 \
subbundles of the trivial bundle; invariant subbundles of negative degree are not detected";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl Verdict {
    pub fn is_semistable(self) -> bool {
        self != Verdict::Unstable
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport<F: Field> {
    pub verdict: Verdict,
    /// Max-slope invariant subspace and its slope, present iff not stable.
    pub witness: Option<(Subspace<F>, BigRational)>,
    pub slope: BigRational,
    pub checked_mode: CheckedMode,
    /// Set when the search was incomplete and no destabilizing subspace was
    /// found, i.e. the verdict holds relative to the checked family only.
    pub relative_to_checked_family: bool,
    pub caveat: &'static str,
}

/// Slope of an invariant subspace with its induced flags and degree 0.
pub(crate) fn sub_slope<F: Field>(sys: &FuchsianLambdaSystem<F>, w: &Subspace<F>) -> Result<BigRational> {
    Ok(sys.space().induced_substructure(w, 0)?.pmu())
}

pub fn classify_stability<F: FieldAlgorithms>(
    sys: &FuchsianLambdaSystem<F>,
    mode: &CheckMode<F>,
    budget: u64,
) -> Result<StabilityReport<F>> {
    let family = invariant_subspaces(sys, mode, budget)?;
    classify_family(sys, &family)
}

fn classify_family<F: Field>(sys: &FuchsianLambdaSystem<F>, family: &InvariantFamily<F>) -> Result<StabilityReport<F>> {
    let slope = sys.space().pmu();
    let mut best: Option<(Subspace<F>, BigRational)> = None;
    for w in &family.subspaces {
        let s = sub_slope(sys, w)?;
        if best.as_ref().is_none_or(|(_, b)| s > *b) {
            best = Some((w.clone(), s));
        }
    }
    let verdict = match &best {
        Some((_, s)) if *s > slope => Verdict::Unstable,
        Some((_, s)) if *s == slope => Verdict::StrictlySemistable,
        _ => Verdict::Stable,
    };
    Ok(StabilityReport {
        verdict,
        witness: if verdict == Verdict::Stable { None } else { best },
        slope,
        checked_mode: family.checked_mode,
        relative_to_checked_family: !family.complete && verdict != Verdict::Unstable,
        caveat: DEGREE_ZERO_CAVEAT,
    })
}

/// A chain `0 = W_0 ⊊ W_1 ⊊ ... ⊊ W_k = F^r` with the slope of each factor
/// `W_i / W_{i-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration<F: Field> {
    pub steps: Vec<Subspace<F>>,
    pub slopes: Vec<BigRational>,
}

impl<F: Field> Filtration<F> {
    pub fn len(&self) -> usize {
        self.slopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slopes.is_empty()
    }

    pub fn factors(&self, sys: &FuchsianLambdaSystem<F>) -> Result<Vec<FuchsianLambdaSystem<F>>> {
        self.steps.windows(2).map(|w| sys.subquotient(&w[1], &w[0])).collect()
    }
}

/// Order in which tied candidates are scanned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationOrder {
    Forward,
    Reversed,
}

fn complete_family<F: FieldAlgorithms>(
    sys: &FuchsianLambdaSystem<F>,
    mode: &CheckMode<F>,
    budget: u64,
    what: &str,
) -> Result<InvariantFamily<F>> {
    let fam = invariant_subspaces(sys, mode, budget)?;
    if !fam.complete {
        return Err(Error::Precondition(format!("{what} needs a complete invariant-subspace enumeration")));
    }
    Ok(fam)
}

/// Harder–Narasimhan filtration: repeatedly split off the invariant
/// subspace of maximal slope and, among those, maximal dimension. Ties,
/// which can only occur for negative degree, go to the canonically smallest
/// subspace.
pub fn hn_filtration<F: FieldAlgorithms>(
    sys: &FuchsianLambdaSystem<F>,
    mode: &CheckMode<F>,
    order: EnumerationOrder,
    budget: u64,
) -> Result<Filtration<F>> {
    let f = sys.field();
    let r = sys.rank();
    let mut steps = vec![Subspace::zero(f, r)];
    let mut slopes = Vec::new();
    let mut current = Subspace::zero(f, r);
    loop {
        let quot = sys.quotient(&current)?;
        let qm = current.quotient_map();
        let mut fam = complete_family(&quot, mode, budget, "the HN filtration")?.subspaces;
        if order == EnumerationOrder::Reversed {
            fam.reverse();
        }
        let whole = quot.space().pmu();
        let mut best: Option<(BigRational, usize, Subspace<F>)> = None;
        for u in fam {
            let s = sub_slope(&quot, &u)?;
            let better = match &best {
                None => true,
                Some((bs, bd, bu)) => {
                    s > *bs || (s == *bs && (u.dim() > *bd || (u.dim() == *bd && u.canonical_cmp(bu).is_lt())))
                }
            };
            if better {
                best = Some((s, u.dim(), u));
            }
        }
        match best {
            Some((s, _, u)) if s > whole => {
                current = qm.lift(&u)?;
                steps.push(current.clone());
                slopes.push(s);
            }
            _ => {
                steps.push(Subspace::full(f, r));
                slopes.push(whole);
                return Ok(Filtration { steps, slopes });
            }
        }
    }
}

/// Jordan–Hölder filtration of a semistable system: repeatedly split off a
/// minimal-dimension invariant subspace of the same slope. All factor
/// slopes equal the slope of the system.
pub fn jh_filtration<F: FieldAlgorithms>(
    sys: &FuchsianLambdaSystem<F>,
    mode: &CheckMode<F>,
    budget: u64,
) -> Result<Filtration<F>> {
    let fam = complete_family(sys, mode, budget, "the JH filtration")?;
    if !classify_family(sys, &fam)?.verdict.is_semistable() {
        return Err(Error::Precondition("JH filtration requires a semistable system".into()));
    }
    let f = sys.field();
    let r = sys.rank();
    let slope = sys.space().pmu();
    let mut steps = vec![Subspace::zero(f, r)];
    let mut current = Subspace::zero(f, r);
    loop {
        let quot = sys.quotient(&current)?;
        let qm = current.quotient_map();
        let fam = complete_family(&quot, mode, budget, "the JH filtration")?.subspaces;
        let mut next: Option<Subspace<F>> = None;
        for u in fam {
            if sub_slope(&quot, &u)? == slope && next.as_ref().is_none_or(|n| u.dim() < n.dim()) {
                next = Some(u);
            }
        }
        match next {
            Some(u) => {
                current = qm.lift(&u)?;
                steps.push(current.clone());
            }
            None => {
                steps.push(Subspace::full(f, r));
                let slopes = vec![slope; steps.len() - 1];
                return Ok(Filtration { steps, slopes });
            }
        }
    }
}

/// Isomorphism invariants of one JH factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GradedFactor {
    pub dim: usize,
    #[serde(with = "crate::serde_rational")]
    pub slope: BigRational,
    /// Per puncture, coefficients of the characteristic polynomial of the
    /// induced residue, constant term first.
    pub char_polys: Vec<Vec<String>>,
    /// Per puncture, `dim` of the image of each original flag step.
    pub flag_dims: Vec<Vec<usize>>,
}

/// Sorted multiset of factor invariants of the JH filtration.
pub fn graded_invariants<F: FieldAlgorithms>(
    sys: &FuchsianLambdaSystem<F>,
    mode: &CheckMode<F>,
    budget: u64,
) -> Result<Vec<GradedFactor>> {
    let jh = jh_filtration(sys, mode, budget)?;
    let f = sys.field();
    let mut out = Vec::new();
    for (i, w) in jh.steps.windows(2).enumerate() {
        let factor = sys.subquotient(&w[1], &w[0])?;
        let char_polys = factor
            .residues()
            .iter()
            .map(|a| Ok(a.char_poly()?.iter().map(|c| f.format(c)).collect()))
            .collect::<Result<Vec<_>>>()?;
        let upper = sys.space().induced_flag_dims(&w[1])?;
        let lower = sys.space().induced_flag_dims(&w[0])?;
        let flag_dims = upper
            .iter()
            .zip(&lower)
            .map(|(u, l)| u.iter().zip(l).map(|(a, b)| a - b).collect())
            .collect();
        out.push(GradedFactor {
            dim: factor.rank(),
            slope: jh.slopes[i].clone(),
            char_polys,
            flag_dims,
        });
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SEquivalence {
    EquivalentInvariants,
    Distinguished,
}

/// Compares graded invariants; equality is necessary for S-equivalence.
pub fn s_equivalent_weak<F: FieldAlgorithms>(
    a: &FuchsianLambdaSystem<F>,
    b: &FuchsianLambdaSystem<F>,
    mode: &CheckMode<F>,
    budget: u64,
) -> Result<SEquivalence> {
    if a.rank() != b.rank() || a.degree() != b.degree() || a.weights() != b.weights() {
        return Err(Error::Precondition("S-equivalence needs equal rank, degree and weights".into()));
    }
    let ga = graded_invariants(a, mode, budget)?;
    let gb = graded_invariants(b, mode, budget)?;
    Ok(if ga == gb {
        SEquivalence::EquivalentInvariants
    } else {
        SEquivalence::Distinguished
    })
}

/// Brute-force search for `g ∈ GL_r(F_p)` with `g A_j g^{-1} = B_j` and
/// `g(E_{j,i}) = F_{j,i}` for all `j, i`. Rank at most 3.
pub fn isomorphic_brute_force(
    a: &FuchsianLambdaSystem<PrimeField>,
    b: &FuchsianLambdaSystem<PrimeField>,
    budget: u64,
) -> Result<Option<Matrix<PrimeField>>> {
    let r = a.rank();
    if r > 3 {
        return Err(Error::Precondition("brute-force isomorphism search is limited to rank 3".into()));
    }
    if r != b.rank() || a.weights() != b.weights() || a.lambda() != b.lambda() || a.degree() != b.degree() {
        return Ok(None);
    }
    let f = *a.field();
    let p = f.p() as u128;
    let total = p.pow((r * r) as u32);
    check_budget(total, budget)?;
    for code in 0..total {
        let mut g = Matrix::zeros(&f, r, r);
        let mut c = code;
        for i in 0..r {
            for j in 0..r {
                g.set(i, j, (c % p) as u32);
                c /= p;
            }
        }
        if f.is_zero(&g.determinant()?) {
            continue;
        }
        let intertwines = a
            .residues()
            .iter()
            .zip(b.residues())
            .all(|(x, y)| g.mul(x).ok() == y.mul(&g).ok());
        if !intertwines {
            continue;
        }
        let flags_match = a
            .space()
            .flags()
            .iter()
            .zip(b.space().flags())
            .all(|(ca, cb)| ca.iter().zip(cb).all(|(s, t)| s.image(&g).ok().as_ref() == Some(t)));
        if flags_match {
            return Ok(Some(g));
        }
    }
    Ok(None)
}
