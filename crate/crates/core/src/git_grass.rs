//! Hilbert–Mumford weights for `SL(V)` acting on products of Grassmannians
//! of quotients `W_i ⊗ V -> F^{p_i}`, and the subspace criterion for
//! (semi)stability.
//!
//! Tensor coordinates are V-major: `w_k ⊗ e_j` sits at index `j·m + k`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::field::{Field, PrimeField};
use crate::exactnum::matrix::Matrix;
use crate::exactnum::subspace::{check_budget, enumerate_all_subspaces, Subspace};
use crate::fuchsian::Verdict;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassFactor<F: Field> {
    pub m: usize,
    /// Quotient map `W ⊗ V -> F^p`, full row rank.
    pub phi: Matrix<F>,
    pub epsilon: BigRational,
}

impl<F: Field> GrassFactor<F> {
    pub fn p(&self) -> usize {
        self.phi.rows()
    }

    pub fn kernel(&self) -> Subspace<F> {
        Subspace::kernel_of(&self.phi)
    }

    /// The point with kernel `k`; `φ` is the echelon basis of `ann k`.
    pub fn from_kernel(m: usize, kernel: &Subspace<F>, epsilon: BigRational) -> Self {
        GrassFactor {
            m,
            phi: kernel.annihilator().basis().clone(),
            epsilon,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassConfig<F: Field> {
    field: F,
    n: usize,
    factors: Vec<GrassFactor<F>>,
}

impl<F: Field> GrassConfig<F> {
    pub fn new(field: &F, n: usize, factors: Vec<GrassFactor<F>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "V must be nonzero"));
        }
        for (i, fac) in factors.iter().enumerate() {
            let path = format!("factors[{i}]");
            if fac.m == 0 {
                return Err(Error::invalid(format!("{path}.m"), "W must be nonzero"));
            }
            if fac.phi.cols() != n * fac.m {
                return Err(Error::invalid(
                    format!("{path}.phi"),
                    format!("expected {} columns, found {}", n * fac.m, fac.phi.cols()),
                ));
            }
            if fac.phi.rank() != fac.phi.rows() {
                return Err(Error::invalid(format!("{path}.phi"), "quotient map must have full row rank"));
            }
            if !fac.epsilon.is_positive() {
                return Err(Error::invalid(format!("{path}.epsilon"), "must be positive"));
            }
        }
        Ok(GrassConfig {
            field: field.clone(),
            n,
            factors,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn factors(&self) -> &[GrassFactor<F>] {
        &self.factors
    }

    /// `Σ ε_i p_i / n`.
    pub fn criterion_rhs(&self) -> BigRational {
        self.factors.iter().fold(BigRational::zero(), |acc, f| acc + &f.epsilon * q(f.p())) / q(self.n)
    }

    /// `Σ ε_i dim φ_i(W_i ⊗ L) / dim L` for nonzero `L`.
    pub fn criterion_lhs(&self, l: &Subspace<F>) -> Result<BigRational> {
        if l.is_zero() || l.ambient_dim() != self.n {
            return Err(Error::Precondition("criterion needs a nonzero subspace of V".into()));
        }
        let mut sum = BigRational::zero();
        for fac in &self.factors {
            let image = tensor_with(fac.m, l).image(&fac.phi)?;
            sum += &fac.epsilon * q(image.dim());
        }
        Ok(sum / q(l.dim()))
    }
}

fn q(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `W ⊗ L` inside `W ⊗ V` with `dim W = m`.
pub fn tensor_with<F: Field>(m: usize, l: &Subspace<F>) -> Subspace<F> {
    let f = l.field();
    let n = l.ambient_dim();
    let mut rows = Vec::new();
    for v in l.basis_vectors() {
        for k in 0..m {
            let mut t = vec![f.zero(); n * m];
            for (j, c) in v.iter().enumerate() {
                t[j * m + k] = c.clone();
            }
            rows.push(t);
        }
    }
    Subspace::span(f, n * m, rows).expect("tensor vectors have the right length")
}

/// One-parameter subgroup `t ↦ diag(t^{r_j})` in the basis given by the
/// columns of `basis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnePS<F: Field> {
    basis: Matrix<F>,
    weights: Vec<i64>,
}

impl<F: Field> OnePS<F> {
    pub fn new(basis: Matrix<F>, weights: Vec<i64>) -> Result<Self> {
        let n = basis.rows();
        if !basis.is_square() || weights.len() != n {
            return Err(Error::dim("one-parameter subgroup", n, weights.len()));
        }
        if basis.inverse().is_none() {
            return Err(Error::invalid("basis", "must be invertible"));
        }
        if weights.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid("weights", "must be non-increasing"));
        }
        if weights.iter().sum::<i64>() != 0 {
            return Err(Error::invalid("weights", "must sum to zero"));
        }
        Ok(OnePS { basis, weights })
    }

    /// Extreme weights `r_1 = … = r_l = n − l`, `r_{l+1} = … = r_n = −l`
    /// for `1 ≤ l < n`.
    pub fn extreme(basis: Matrix<F>, l: usize) -> Result<Self> {
        let n = basis.rows() as i64;
        let l = l as i64;
        if l < 1 || l >= n {
            return Err(Error::invalid("l", "must satisfy 1 <= l < n"));
        }
        let weights = (0..n).map(|j| if j < l { n - l } else { -l }).collect();
        Self::new(basis, weights)
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }
    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// `span(b_1, …, b_j)`.
    pub fn flag_step(&self, j: usize) -> Subspace<F> {
        let n = self.basis.rows();
        let cols = (0..j).map(|c| self.basis.column(c)).collect();
        Subspace::span(self.basis.field(), n, cols).expect("basis columns")
    }
}

/// `−p r_n + Σ_{j<n} dim(L ∩ (W ⊗ span(b_1..b_j))) (r_{j+1} − r_j)` with
/// `p = dim L`, for `L ⊆ W ⊗ V`, `dim W = m`.
pub fn mu_factor<F: Field>(l: &Subspace<F>, m: usize, ops: &OnePS<F>) -> Result<i64> {
    let n = ops.weights.len();
    if l.ambient_dim() != n * m {
        return Err(Error::dim("subspace of W ⊗ V", n * m, l.ambient_dim()));
    }
    let r = &ops.weights;
    let mut mu = -(l.dim() as i64) * r[n - 1];
    for j in 1..n {
        let step = r[j] - r[j - 1];
        if step != 0 {
            let meet = l.intersect(&tensor_with(m, &ops.flag_step(j)))?;
            mu += meet.dim() as i64 * step;
        }
    }
    Ok(mu)
}

/// `Σ ε_i μ(Ker φ_i, λ)`.
pub fn mu_total<F: Field>(cfg: &GrassConfig<F>, ops: &OnePS<F>) -> Result<BigRational> {
    if ops.weights.len() != cfg.n {
        return Err(Error::dim("one-parameter subgroup", cfg.n, ops.weights.len()));
    }
    let mut sum = BigRational::zero();
    for fac in &cfg.factors {
        sum += &fac.epsilon * BigRational::from_integer(BigInt::from(mu_factor(&fac.kernel(), fac.m, ops)?));
    }
    Ok(sum)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GitReport<F: Field> {
    pub verdict: Verdict,
    /// Subspace attaining the least `LHS − RHS`, first in enumeration order;
    /// present iff not stable.
    pub witness: Option<Subspace<F>>,
    /// Least `LHS − RHS` over the checked subspaces, `None` if there were none.
    pub margin: Option<BigRational>,
    pub rhs: BigRational,
    pub complete: bool,
}

fn classify_over<F: Field>(cfg: &GrassConfig<F>, subspaces: &[Subspace<F>], complete: bool) -> Result<GitReport<F>> {
    let rhs = cfg.criterion_rhs();
    let margins = subspaces
        .par_iter()
        .map(|l| Ok(cfg.criterion_lhs(l)? - &rhs))
        .collect::<Result<Vec<_>>>()?;
    let mut best: Option<(usize, &BigRational)> = None;
    for (i, m) in margins.iter().enumerate() {
        if best.is_none_or(|(_, b)| m < b) {
            best = Some((i, m));
        }
    }
    let verdict = match best {
        Some((_, m)) if m.is_negative() => Verdict::Unstable,
        Some((_, m)) if m.is_zero() => Verdict::StrictlySemistable,
        _ => Verdict::Stable,
    };
    Ok(GitReport {
        verdict,
        witness: match (verdict, best) {
            (Verdict::Stable, _) | (_, None) => None,
            (_, Some((i, _))) => Some(subspaces[i].clone()),
        },
        margin: best.map(|(_, m)| m.clone()),
        rhs,
        complete,
    })
}

/// Exhaustive subspace criterion over every proper nonzero `L ⊆ V`.
pub fn classify_git(cfg: &GrassConfig<PrimeField>, budget: u64) -> Result<GitReport<PrimeField>> {
    let all: Vec<_> = enumerate_all_subspaces(cfg.field(), cfg.n, budget)?
        .into_iter()
        .filter(|l| !l.is_zero() && !l.is_full())
        .collect();
    classify_over(cfg, &all, true)
}

/// Subspace criterion restricted to the supplied proper nonzero subspaces.
pub fn classify_git_candidates<F: Field>(cfg: &GrassConfig<F>, candidates: &[Subspace<F>]) -> Result<GitReport<F>> {
    let mut list: Vec<_> = candidates
        .iter()
        .filter(|l| l.ambient_dim() == cfg.n && !l.is_zero() && !l.is_full())
        .cloned()
        .collect();
    list.sort();
    list.dedup();
    classify_over(cfg, &list, false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertMumfordReport<F: Field> {
    /// Least `mu_total` over all ordered bases and extreme weights; `None`
    /// when `n = 1` (no nontrivial one-parameter subgroups).
    pub min_mu: Option<BigRational>,
    pub minimizer: Option<OnePS<F>>,
    pub criterion: Verdict,
    /// `min ≥ 0 ⟺ not unstable` and `min > 0 ⟺ stable`.
    pub agrees: bool,
    pub bases_checked: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HmSign {
    Negative,
    Zero,
    Positive,
}

/// Runs every ordered basis of `V` against every extreme weight vector and
/// compares the sign of the least weight with [`classify_git`].
pub fn verify_hilbert_mumford(cfg: &GrassConfig<PrimeField>, budget: u64) -> Result<HilbertMumfordReport<PrimeField>> {
    let f = *cfg.field();
    let n = cfg.n;
    let p = f.p() as u128;
    let total = p
        .checked_pow((n * n) as u32)
        .ok_or(Error::BudgetExceeded { needed: u128::MAX, budget })?;
    check_budget(total, budget)?;
    let criterion = classify_git(cfg, budget)?;

    // For extreme weights the weight only depends on span(b_1..b_l).
    let mut cache: BTreeMap<(usize, Subspace<PrimeField>), BigRational> = BTreeMap::new();
    let mut best: Option<(BigRational, u128, usize)> = None;
    let mut bases_checked = 0;
    for code in 0..total {
        let basis = decode_matrix(&f, n, code);
        if f.is_zero(&basis.determinant()?) {
            continue;
        }
        bases_checked += 1;
        for l in 1..n {
            let ops = OnePS::extreme(basis.clone(), l)?;
            let key = (l, ops.flag_step(l));
            let mu = match cache.get(&key) {
                Some(mu) => mu.clone(),
                None => {
                    let mu = mu_total(cfg, &ops)?;
                    cache.insert(key, mu.clone());
                    mu
                }
            };
            if best.as_ref().is_none_or(|(b, _, _)| mu < *b) {
                best = Some((mu, code, l));
            }
        }
    }
    let (min_mu, minimizer) = match best {
        Some((mu, code, l)) => (Some(mu), Some(OnePS::extreme(decode_matrix(&f, n, code), l)?)),
        None => (None, None),
    };
    let agrees = match &min_mu {
        None => true,
        Some(mu) => {
            (!mu.is_negative() == criterion.verdict.is_semistable()) && (mu.is_positive() == (criterion.verdict == Verdict::Stable))
        }
    };
    Ok(HilbertMumfordReport {
        min_mu,
        minimizer,
        criterion: criterion.verdict,
        agrees,
        bases_checked,
    })
}

impl<F: Field> HilbertMumfordReport<F> {
    pub fn sign(&self) -> Option<HmSign> {
        self.min_mu.as_ref().map(|m| {
            if m.is_negative() {
                HmSign::Negative
            } else if m.is_zero() {
                HmSign::Zero
            } else {
                HmSign::Positive
            }
        })
    }
}

fn decode_matrix(f: &PrimeField, n: usize, mut code: u128) -> Matrix<PrimeField> {
    let p = f.p() as u128;
    let mut m = Matrix::zeros(f, n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, (code % p) as u32);
            code /= p;
        }
    }
    m
}
