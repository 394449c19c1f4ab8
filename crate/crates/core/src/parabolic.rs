//! Weighted flags and their numerical invariants: parabolic weight, degree,
//! slope and Hilbert polynomial; induced and quotient structures; the
//! minimum quotient slope; and the denominator bound separating distinct
//! slopes.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::field::{Field, PrimeField};
use crate::exactnum::subspace::{enumerate_all_subspaces, Subspace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PunctureWeights {
    pub id: String,
    pub weights: Vec<BigRational>,
}

/// Per-puncture weights `0 <= a_1 < ... < a_l < 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightSystem {
    punctures: Vec<PunctureWeights>,
}

impl WeightSystem {
    pub fn new(punctures: Vec<(String, Vec<BigRational>)>) -> Result<Self> {
        for (x, (_, ws)) in punctures.iter().enumerate() {
            validate_weights(ws, &format!("punctures[{x}].weights"))?;
        }
        let mut seen = std::collections::BTreeSet::new();
        for (x, (id, _)) in punctures.iter().enumerate() {
            if !seen.insert(id.clone()) {
                return Err(Error::invalid(format!("punctures[{x}].id"), format!("duplicate puncture id {id:?}")));
            }
        }
        Ok(WeightSystem {
            punctures: punctures
                .into_iter()
                .map(|(id, weights)| PunctureWeights { id, weights })
                .collect(),
        })
    }

    pub fn empty() -> Self {
        WeightSystem::default()
    }

    pub fn punctures(&self) -> &[PunctureWeights] {
        &self.punctures
    }

    pub fn len(&self) -> usize {
        self.punctures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.punctures.is_empty()
    }

    pub fn weights(&self, x: usize) -> &[BigRational] {
        &self.punctures[x].weights
    }

    pub fn ids(&self) -> Vec<String> {
        self.punctures.iter().map(|p| p.id.clone()).collect()
    }

    /// Keeps, at each puncture, only the weights whose index is listed.
    pub(crate) fn restrict(&self, kept: &[Vec<usize>]) -> Self {
        WeightSystem {
            punctures: self
                .punctures
                .iter()
                .zip(kept)
                .map(|(p, idx)| PunctureWeights {
                    id: p.id.clone(),
                    weights: idx.iter().map(|&i| p.weights[i].clone()).collect(),
                })
                .collect(),
        }
    }
}

pub(crate) fn validate_weights(ws: &[BigRational], path: &str) -> Result<()> {
    for (i, a) in ws.iter().enumerate() {
        let bad = |reason: &str| Error::InvalidWeights {
            path: format!("{path}[{i}]"),
            reason: reason.to_string(),
        };
        if a.is_negative() {
            return Err(bad("weight is negative"));
        }
        if *a >= BigRational::one() {
            return Err(bad("weight must be < 1"));
        }
        if i > 0 && *a <= ws[i - 1] {
            return Err(bad("weights must be strictly increasing"));
        }
    }
    Ok(())
}

/// `sum_i a_i (dims[i] - dims[i+1])`. The chain may be non-strict.
pub fn weighted_jump_sum(weights: &[BigRational], dims: &[usize]) -> BigRational {
    weights
        .iter()
        .enumerate()
        .fold(BigRational::zero(), |acc, (i, a)| {
            acc + a * BigRational::from_integer(BigInt::from(dims[i] as i64 - dims[i + 1] as i64))
        })
}

/// The same quantity in the telescoped form
/// `sum_{i>=2} dims[i] (a_i - a_{i-1}) + a_1 dims[1]`.
pub fn telescoped_weight(weights: &[BigRational], dims: &[usize]) -> BigRational {
    let mut acc = BigRational::zero();
    let mut prev = BigRational::zero();
    for (i, a) in weights.iter().enumerate() {
        acc += (a - &prev) * BigRational::from_integer(BigInt::from(dims[i]));
        prev = a.clone();
    }
    acc
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Numerical invariants shared by [`ParabolicNumerics`] and [`ParabolicSpace`].
pub trait Parabolic {
    fn rank(&self) -> usize;
    fn degree(&self) -> i64;
    fn weight_system(&self) -> &WeightSystem;
    /// Per puncture, `dim E_{x,i}` for `i = 1..=l_x + 1`.
    fn flag_dims(&self) -> Vec<Vec<usize>>;

    /// `m_{x,i} = dim E_{x,i} - dim E_{x,i+1}`.
    fn jumps(&self) -> Vec<Vec<usize>> {
        self.flag_dims()
            .iter()
            .map(|d| d.windows(2).map(|w| w[0] - w[1]).collect())
            .collect()
    }

    fn owt_at(&self, x: usize) -> BigRational {
        weighted_jump_sum(self.weight_system().weights(x), &self.flag_dims()[x])
    }

    fn owt(&self) -> BigRational {
        (0..self.weight_system().len()).map(|x| self.owt_at(x)).sum()
    }

    fn pdeg(&self) -> BigRational {
        int(self.degree()) + self.owt()
    }

    /// Parabolic slope `pdeg / rank`. Rank must be positive.
    fn pmu(&self) -> BigRational {
        self.pdeg() / int(self.rank() as i64)
    }

    fn eta(&self) -> BigRational {
        self.owt() / int(self.rank() as i64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicNumerics {
    rank: usize,
    degree: i64,
    genus: u32,
    weights: WeightSystem,
    flag_dims: Vec<Vec<usize>>,
}

impl ParabolicNumerics {
    pub fn new(
        rank: usize,
        degree: i64,
        genus: u32,
        weights: WeightSystem,
        flag_dims: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::invalid("rank", "rank must be positive"));
        }
        if flag_dims.len() != weights.len() {
            return Err(Error::dim("flag dims per puncture", weights.len(), flag_dims.len()));
        }
        for (x, dims) in flag_dims.iter().enumerate() {
            let path = format!("punctures[{x}].flag_dims");
            let l = weights.weights(x).len();
            if dims.len() != l + 1 {
                return Err(Error::InvalidFlag {
                    path,
                    reason: format!("expected {} dimensions, found {}", l + 1, dims.len()),
                });
            }
            if dims[0] != rank || dims[l] != 0 {
                return Err(Error::InvalidFlag {
                    path,
                    reason: "flag must start at the rank and end at 0".into(),
                });
            }
            if dims.windows(2).any(|w| w[0] <= w[1]) {
                return Err(Error::InvalidFlag {
                    path,
                    reason: "flag dimensions must strictly decrease".into(),
                });
            }
        }
        Ok(ParabolicNumerics {
            rank,
            degree,
            genus,
            weights,
            flag_dims,
        })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Quotient ranks `r_{x,i} = r - dim E_{x,i}`.
    pub fn quotient_ranks(&self) -> Vec<Vec<usize>> {
        self.flag_dims
            .iter()
            .map(|d| d.iter().map(|&k| self.rank - k).collect())
            .collect()
    }

    /// Riemann-Roch Hilbert polynomial `d + r (m + 1 - g)`.
    pub fn hilbert(&self, m: i64) -> BigRational {
        int(self.degree + self.rank as i64 * (m + 1 - self.genus as i64))
    }

    /// `parP(m) = P(m) + owt`.
    pub fn par_hilbert(&self, m: i64) -> BigRational {
        self.hilbert(m) + self.owt()
    }
}

impl Parabolic for ParabolicNumerics {
    fn rank(&self) -> usize {
        self.rank
    }
    fn degree(&self) -> i64 {
        self.degree
    }
    fn weight_system(&self) -> &WeightSystem {
        &self.weights
    }
    fn flag_dims(&self) -> Vec<Vec<usize>> {
        self.flag_dims.clone()
    }
}

/// Outcome of comparing reduced parabolic Hilbert polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precedence {
    PrecedesStrictly,
    PrecedesEq,
    Exceeds,
}

/// Compares `parP_F / rk F` against `parP_E / rk E` as polynomials in `m`
/// (leading coefficient first).
pub fn gieseker_leq(sub: &ParabolicNumerics, ambient: &ParabolicNumerics) -> Result<Precedence> {
    if sub.genus != ambient.genus {
        return Err(Error::Precondition(format!(
            "genus mismatch: {} vs {}",
            sub.genus, ambient.genus
        )));
    }
    // reduced polynomial a + b m, recovered from two evaluations
    let reduced = |p: &ParabolicNumerics| {
        let rk = int(p.rank as i64);
        let at0 = p.par_hilbert(0) / &rk;
        let at1 = p.par_hilbert(1) / &rk;
        (&at1 - &at0, at0)
    };
    let (bf, af) = reduced(sub);
    let (be, ae) = reduced(ambient);
    Ok(match bf.cmp(&be).then_with(|| af.cmp(&ae)) {
        Ordering::Less => Precedence::PrecedesStrictly,
        Ordering::Equal => Precedence::PrecedesEq,
        Ordering::Greater => Precedence::Exceeds,
    })
}

/// `1 / (r! * prod q_{x,i})` where `a_{x,i} = p_{x,i}/q_{x,i}` in lowest terms.
pub fn delta_gap(rank: usize, weights: &WeightSystem) -> BigRational {
    let mut den: BigInt = (1..=rank as u64).map(BigInt::from).product();
    for p in weights.punctures() {
        for a in &p.weights {
            den *= a.denom();
        }
    }
    BigRational::new(BigInt::one(), den)
}

/// Concrete weighted flags in `F^r`: per puncture a strictly decreasing chain
/// `F^r = E_{x,1} ⊋ ... ⊋ E_{x,l_x+1} = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicSpace<F: Field> {
    field: F,
    ambient: usize,
    degree: i64,
    weights: WeightSystem,
    flags: Vec<Vec<Subspace<F>>>,
}

impl<F: Field> ParabolicSpace<F> {
    /// `flags[x]` is the full chain including the whole space and zero.
    pub fn new(field: &F, ambient: usize, degree: i64, weights: WeightSystem, flags: Vec<Vec<Subspace<F>>>) -> Result<Self> {
        if flags.len() != weights.len() {
            return Err(Error::dim("flags per puncture", weights.len(), flags.len()));
        }
        for (x, chain) in flags.iter().enumerate() {
            let path = format!("punctures[{x}].flag");
            let l = weights.weights(x).len();
            if chain.len() != l + 1 {
                return Err(Error::InvalidFlag {
                    path,
                    reason: format!("expected {} steps, found {}", l + 1, chain.len()),
                });
            }
            for (i, s) in chain.iter().enumerate() {
                if s.ambient_dim() != ambient {
                    return Err(Error::InvalidFlag {
                        path: format!("{path}[{i}]"),
                        reason: format!("ambient dimension {} instead of {ambient}", s.ambient_dim()),
                    });
                }
            }
            if !chain[0].is_full() || !chain[l].is_zero() {
                return Err(Error::InvalidFlag {
                    path,
                    reason: "flag must start at the whole space and end at 0".into(),
                });
            }
            for i in 0..l {
                if chain[i + 1].dim() >= chain[i].dim() || !chain[i + 1].is_subspace_of(&chain[i])? {
                    return Err(Error::InvalidFlag {
                        path: format!("{path}[{}]", i + 1),
                        reason: "flag steps must be strictly nested".into(),
                    });
                }
            }
        }
        Ok(ParabolicSpace {
            field: field.clone(),
            ambient,
            degree,
            weights,
            flags,
        })
    }

    /// Like [`new`](Self::new) but given only the interior steps
    /// `E_{x,2}, ..., E_{x,l_x}`.
    pub fn from_interior(
        field: &F,
        ambient: usize,
        degree: i64,
        weights: WeightSystem,
        interior: Vec<Vec<Subspace<F>>>,
    ) -> Result<Self> {
        let flags = interior
            .into_iter()
            .map(|steps| {
                let mut chain = vec![Subspace::full(field, ambient)];
                chain.extend(steps);
                chain.push(Subspace::zero(field, ambient));
                chain
            })
            .collect();
        Self::new(field, ambient, degree, weights, flags)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn flags(&self) -> &[Vec<Subspace<F>>] {
        &self.flags
    }
    pub fn with_degree(mut self, degree: i64) -> Self {
        self.degree = degree;
        self
    }

    pub fn numerics(&self, genus: u32) -> Result<ParabolicNumerics> {
        ParabolicNumerics::new(self.ambient, self.degree, genus, self.weights.clone(), self.flag_dims())
    }

    /// `dim(W ∩ E_{x,i})` for every step, without collapsing repeats.
    pub fn induced_flag_dims(&self, w: &Subspace<F>) -> Result<Vec<Vec<usize>>> {
        self.flags
            .iter()
            .map(|chain| chain.iter().map(|e| Ok(w.intersect(e)?.dim())).collect())
            .collect()
    }

    /// Induced structure on `W`: steps `W ∩ E_{x,i}`, expressed in the
    /// coordinates of `W`'s echelon basis, with empty jumps dropped.
    pub fn induced_substructure(&self, w: &Subspace<F>, degree: i64) -> Result<ParabolicSpace<F>> {
        if w.ambient_dim() != self.ambient {
            return Err(Error::dim("induced substructure", self.ambient, w.ambient_dim()));
        }
        let chains = self
            .flags
            .iter()
            .map(|chain| {
                chain
                    .iter()
                    .map(|e| Ok(restrict_to(&w.intersect(e)?, w)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(collapse(&self.field, w.dim(), degree, &self.weights, chains))
    }

    /// Quotient structure on `F^r / W`: steps `(E_{x,i} + W) / W`.
    pub fn quotient_structure(&self, w: &Subspace<F>, degree: i64) -> Result<ParabolicSpace<F>> {
        if w.ambient_dim() != self.ambient {
            return Err(Error::dim("quotient structure", self.ambient, w.ambient_dim()));
        }
        let qm = w.quotient_map();
        let chains = self
            .flags
            .iter()
            .map(|chain| chain.iter().map(|e| qm.push(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(collapse(&self.field, qm.quotient_dim(), degree, &self.weights, chains))
    }

    /// Direct sum; weights at each puncture are merged and the steps are
    /// `E1_{>=a} (+) E2_{>=a}` for every weight `a` of either summand.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.weights.ids() != other.weights.ids() {
            return Err(Error::Precondition("direct sum needs identical puncture lists".into()));
        }
        let f = &self.field;
        let mut merged_weights = Vec::new();
        let mut flags = Vec::new();
        for x in 0..self.weights.len() {
            let (wa, wb) = (self.weights.weights(x), other.weights.weights(x));
            let mut all: Vec<BigRational> = wa.iter().chain(wb).cloned().collect();
            all.sort();
            all.dedup();
            let step = |ws: &[BigRational], chain: &[Subspace<F>], a: &BigRational| {
                let i = ws.iter().position(|w| w >= a).unwrap_or(ws.len());
                chain[i].clone()
            };
            let mut chain: Vec<Subspace<F>> = all
                .iter()
                .map(|a| step(wa, &self.flags[x], a).direct_sum(&step(wb, &other.flags[x], a)))
                .collect();
            chain.push(Subspace::zero(f, self.ambient + other.ambient));
            if all.is_empty() {
                chain.insert(0, Subspace::full(f, self.ambient + other.ambient));
            }
            merged_weights.push((self.weights.punctures()[x].id.clone(), all));
            flags.push(chain);
        }
        Self::new(
            f,
            self.ambient + other.ambient,
            self.degree + other.degree,
            WeightSystem::new(merged_weights)?,
            flags,
        )
    }
}

impl<F: Field> Parabolic for ParabolicSpace<F> {
    fn rank(&self) -> usize {
        self.ambient
    }
    fn degree(&self) -> i64 {
        self.degree
    }
    fn weight_system(&self) -> &WeightSystem {
        &self.weights
    }
    fn flag_dims(&self) -> Vec<Vec<usize>> {
        self.flags.iter().map(|c| c.iter().map(Subspace::dim).collect()).collect()
    }
}

/// Coordinates of `u ⊆ w` relative to the echelon basis of `w`.
pub(crate) fn restrict_to<F: Field>(u: &Subspace<F>, w: &Subspace<F>) -> Subspace<F> {
    let rows = u
        .basis_vectors()
        .into_iter()
        .map(|v| w.pivots().iter().map(|&p| v[p].clone()).collect())
        .collect();
    Subspace::span(u.field(), w.dim(), rows).expect("restricted coordinates")
}

/// Drops flag steps with zero jump together with their weights.
fn collapse<F: Field>(
    field: &F,
    ambient: usize,
    degree: i64,
    weights: &WeightSystem,
    chains: Vec<Vec<Subspace<F>>>,
) -> ParabolicSpace<F> {
    let mut kept_idx = Vec::new();
    let mut flags = Vec::new();
    for chain in chains {
        let l = chain.len() - 1;
        let kept: Vec<usize> = (0..l).filter(|&i| chain[i].dim() > chain[i + 1].dim()).collect();
        let mut c: Vec<Subspace<F>> = kept.iter().map(|&i| chain[i].clone()).collect();
        c.push(Subspace::zero(field, ambient));
        kept_idx.push(kept);
        flags.push(c);
    }
    ParabolicSpace {
        field: field.clone(),
        ambient,
        degree,
        weights: weights.restrict(&kept_idx),
        flags,
    }
}

/// Minimum slope over the quotients `E / W`, `W` ranging over all subspaces
/// other than the whole space (so `E` itself counts). Quotients keep the
/// degree of `E`. The witness is the first minimiser in canonical order.
pub fn min_quotient_slope(
    e: &ParabolicSpace<PrimeField>,
    budget: u64,
) -> Result<(BigRational, Subspace<PrimeField>)> {
    let subs = enumerate_all_subspaces(e.field(), e.ambient(), budget)?;
    let mut best: Option<(BigRational, Subspace<PrimeField>)> = None;
    for w in subs.into_iter().filter(|w| !w.is_full()) {
        let slope = e.quotient_structure(&w, e.degree())?.pmu();
        if best.as_ref().is_none_or(|(b, _)| slope < *b) {
            best = Some((slope, w));
        }
    }
    best.ok_or_else(|| Error::Precondition("minimum quotient slope needs positive rank".into()))
}

/// Lowest-terms denominators of all weights, in puncture order.
pub fn weight_denominators(weights: &WeightSystem) -> Vec<BigInt> {
    weights
        .punctures()
        .iter()
        .flat_map(|p| p.weights.iter().map(|a| a.denom().clone()))
        .collect()
}

/// Least common multiple of the weight denominators.
pub fn weight_lcm(weights: &WeightSystem) -> BigInt {
    weight_denominators(weights)
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(&q))
}
