//! Subspaces of `F^n` in canonical reduced row-echelon form.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::exactnum::field::{Field, PrimeField};
use crate::exactnum::matrix::Matrix;

/// A linear subspace of `F^n`, stored as its unique reduced row-echelon
/// basis. Equality of subspaces is equality of the representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    /// Span of the given vectors (rows); dependent rows are allowed.
    pub fn span(field: &F, ambient: usize, vectors: Vec<Vec<F::Elem>>) -> Result<Self> {
        let m = Matrix::from_rows(field, ambient, vectors)?;
        Ok(Self::row_space(&m))
    }

    pub fn row_space(m: &Matrix<F>) -> Self {
        let (r, pivots) = m.rref();
        let rows = r.row_vecs().into_iter().take(pivots.len()).collect();
        let basis = Matrix::from_rows(m.field(), m.cols(), rows).expect("rows have ambient length");
        Subspace { basis, pivots }
    }

    pub fn zero(field: &F, ambient: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &F, ambient: usize) -> Self {
        Subspace {
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the standard basis vectors with the given (0-based) indices.
    pub fn coordinate(field: &F, ambient: usize, indices: &[usize]) -> Self {
        let vectors = indices
            .iter()
            .map(|&i| {
                let mut v = vec![field.zero(); ambient];
                v[i] = field.one();
                v
            })
            .collect();
        Self::span(field, ambient, vectors).expect("coordinate vectors")
    }

    /// `{x : A x = 0}`.
    pub fn kernel_of(a: &Matrix<F>) -> Self {
        Self::span(a.field(), a.cols(), a.kernel()).expect("kernel vectors")
    }

    /// Column space of `A`.
    pub fn column_space(a: &Matrix<F>) -> Self {
        Self::row_space(&a.transpose())
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }
    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }
    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }
    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }
    pub fn basis_vectors(&self) -> Vec<Vec<F::Elem>> {
        self.basis.row_vecs()
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, other: &Self, context: &str) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::dim(context, self.ambient_dim(), other.ambient_dim()));
        }
        Ok(())
    }

    pub fn contains(&self, v: &[F::Elem]) -> Result<bool> {
        if v.len() != self.ambient_dim() {
            return Err(Error::dim("subspace membership", self.ambient_dim(), v.len()));
        }
        let f = self.field();
        // reduce against the echelon basis
        let mut w = v.to_vec();
        for (row, &pc) in self.pivots.iter().enumerate() {
            let c = w[pc].clone();
            if f.is_zero(&c) {
                continue;
            }
            for (j, b) in self.basis.row(row).iter().enumerate() {
                w[j] = f.sub(&w[j], &f.mul(&c, b));
            }
        }
        Ok(w.iter().all(|x| f.is_zero(x)))
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<bool> {
        self.check_ambient(other, "subspace inclusion")?;
        for row in 0..self.dim() {
            if !other.contains(self.basis.row(row))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other, "subspace sum")?;
        let mut rows = self.basis_vectors();
        rows.extend(other.basis_vectors());
        Self::span(self.field(), self.ambient_dim(), rows)
    }

    /// `{x : <s, x> = 0 for all s}` under the standard bilinear form.
    pub fn annihilator(&self) -> Self {
        Self::span(self.field(), self.ambient_dim(), self.basis.kernel()).expect("kernel vectors")
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other, "subspace intersection")?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    /// `A(W)` for `A` with `A.cols() == W.ambient_dim()`.
    pub fn image(&self, a: &Matrix<F>) -> Result<Self> {
        if a.cols() != self.ambient_dim() {
            return Err(Error::dim("image of subspace", a.cols(), self.ambient_dim()));
        }
        let rows = self
            .basis_vectors()
            .iter()
            .map(|v| a.apply(v))
            .collect::<Result<Vec<_>>>()?;
        Self::span(self.field(), a.rows(), rows)
    }

    /// `A^{-1}(W) = {x : A x in W}`.
    pub fn preimage(&self, a: &Matrix<F>) -> Result<Self> {
        if a.rows() != self.ambient_dim() {
            return Err(Error::dim("preimage of subspace", a.rows(), self.ambient_dim()));
        }
        // x in A^{-1}(W) iff (ann W) A x = 0
        let ann = self.annihilator();
        let constraint = ann.basis.mul(a)?;
        Ok(Self::kernel_of(&constraint))
    }

    pub fn is_invariant_under(&self, a: &Matrix<F>) -> Result<bool> {
        self.image(a)?.is_subspace_of(self)
    }

    /// Direct sum `self (+) other` inside `F^{n1 + n2}`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let f = self.field();
        let n1 = self.ambient_dim();
        let n2 = other.ambient_dim();
        let mut rows = Vec::new();
        for v in self.basis_vectors() {
            let mut w = v;
            w.extend(vec![f.zero(); n2]);
            rows.push(w);
        }
        for v in other.basis_vectors() {
            let mut w = vec![f.zero(); n1];
            w.extend(v);
            rows.push(w);
        }
        Self::span(f, n1 + n2, rows).expect("block vectors")
    }

    /// Projection `F^n -> F^n / W` in coordinates indexed by the non-pivot
    /// columns of `W`.
    pub fn quotient_map(&self) -> QuotientMap<F> {
        let f = self.field();
        let n = self.ambient_dim();
        let complement: Vec<usize> = (0..n).filter(|c| !self.pivots.contains(c)).collect();
        let mut proj = Matrix::zeros(f, complement.len(), n);
        for j in 0..n {
            // reduce e_j against W, then read the complement coordinates
            let mut v = vec![f.zero(); n];
            v[j] = f.one();
            for (row, &pc) in self.pivots.iter().enumerate() {
                let c = v[pc].clone();
                if f.is_zero(&c) {
                    continue;
                }
                for (k, b) in self.basis.row(row).iter().enumerate() {
                    v[k] = f.sub(&v[k], &f.mul(&c, b));
                }
            }
            for (t, &cc) in complement.iter().enumerate() {
                proj.set(t, j, v[cc].clone());
            }
        }
        let mut section = Matrix::zeros(f, n, complement.len());
        for (t, &cc) in complement.iter().enumerate() {
            section.set(cc, t, f.one());
        }
        QuotientMap {
            kernel: self.clone(),
            projection: proj,
            section,
        }
    }

    /// Total order: by dimension, then lexicographically on the echelon
    /// entries. Witnesses throughout the crate are minima of this order.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.dim()
            .cmp(&other.dim())
            .then_with(|| self.ambient_dim().cmp(&other.ambient_dim()))
            .then_with(|| self.basis.entries().cmp(other.basis.entries()))
    }
}

impl<F: Field> PartialOrd for Subspace<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Field> Ord for Subspace<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_cmp(other)
    }
}

/// `V -> V/W` with a linear section, used to push residues and flags to
/// quotients and to lift subspaces back.
#[derive(Clone, Debug)]
pub struct QuotientMap<F: Field> {
    kernel: Subspace<F>,
    projection: Matrix<F>,
    section: Matrix<F>,
}

impl<F: Field> QuotientMap<F> {
    pub fn kernel(&self) -> &Subspace<F> {
        &self.kernel
    }
    pub fn projection(&self) -> &Matrix<F> {
        &self.projection
    }
    pub fn quotient_dim(&self) -> usize {
        self.projection.rows()
    }

    /// Induced endomorphism on the quotient; requires `A(W) ⊆ W`.
    pub fn induced(&self, a: &Matrix<F>) -> Result<Matrix<F>> {
        self.projection.mul(a)?.mul(&self.section)
    }

    pub fn push(&self, s: &Subspace<F>) -> Result<Subspace<F>> {
        s.image(&self.projection)
    }

    /// Preimage of a quotient subspace; always contains the kernel.
    pub fn lift(&self, u: &Subspace<F>) -> Result<Subspace<F>> {
        u.preimage(&self.projection)
    }
}

/// Number of `d`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: usize, d: usize, q: u64) -> u128 {
    if d > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Total number of subspaces of `F_q^n` (all dimensions).
pub fn subspace_count(n: usize, q: u64) -> u128 {
    (0..=n).map(|d| gaussian_binomial(n, d, q)).sum()
}

pub(crate) fn check_budget(needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

/// All `d`-dimensional subspaces of `F_p^n` in canonical form, sorted
/// lexicographically by their echelon entries.
pub fn enumerate_subspaces(
    field: &PrimeField,
    n: usize,
    d: usize,
    budget: u64,
) -> Result<Vec<Subspace<PrimeField>>> {
    if d > n {
        return Err(Error::dim("enumeration dimension", n, d));
    }
    check_budget(gaussian_binomial(n, d, field.p() as u64), budget)?;
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(d);
    pivot_sets(n, d, 0, &mut pivots, &mut |piv| fill_echelon(field, n, piv, &mut out));
    out.sort_by(|a, b| a.basis.entries().cmp(b.basis.entries()));
    Ok(out)
}

/// All subspaces of `F_p^n` of every dimension, ordered by dimension and
/// then lexicographically.
pub fn enumerate_all_subspaces(
    field: &PrimeField,
    n: usize,
    budget: u64,
) -> Result<Vec<Subspace<PrimeField>>> {
    check_budget(subspace_count(n, field.p() as u64), budget)?;
    let mut out = Vec::new();
    for d in 0..=n {
        out.extend(enumerate_subspaces(field, n, d, budget)?);
    }
    Ok(out)
}

fn pivot_sets(n: usize, d: usize, start: usize, acc: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if acc.len() == d {
        visit(acc);
        return;
    }
    for c in start..n {
        if n - c < d - acc.len() {
            break;
        }
        acc.push(c);
        pivot_sets(n, d, c + 1, acc, visit);
        acc.pop();
    }
}

fn fill_echelon(field: &PrimeField, n: usize, pivots: &[usize], out: &mut Vec<Subspace<PrimeField>>) {
    // free slots: (row, col) with col > pivot[row] and col not a pivot
    let free: Vec<(usize, usize)> = pivots
        .iter()
        .enumerate()
        .flat_map(|(r, &pc)| (pc + 1..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
        .collect();
    let p = field.p();
    let total = (p as u128).pow(free.len() as u32);
    let d = pivots.len();
    for code in 0..total {
        let mut m = Matrix::zeros(field, d, n);
        for (r, &pc) in pivots.iter().enumerate() {
            m.set(r, pc, 1);
        }
        let mut c = code;
        for &(r, col) in &free {
            m.set(r, col, (c % p as u128) as u32);
            c /= p as u128;
        }
        out.push(Subspace {
            basis: m,
            pivots: pivots.to_vec(),
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::field::Rationals;

    fn q_span(ambient: usize, rows: &[&[i64]]) -> Subspace<Rationals> {
        let q = Rationals;
        Subspace::span(
            &q,
            ambient,
            rows.iter().map(|r| r.iter().map(|&x| q.from_i64(x)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn intersection_examples() {
        let u = q_span(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let w = q_span(3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(u.intersect(&w).unwrap(), q_span(3, &[&[0, 1, 0]]));
        assert_eq!(u.intersect(&u).unwrap(), u);

        let f2 = PrimeField::new(2).unwrap();
        let e1 = Subspace::coordinate(&f2, 2, &[0]);
        let e2 = Subspace::coordinate(&f2, 2, &[1]);
        assert!(e1.intersect(&e2).unwrap().is_zero());
    }

    #[test]
    fn intersection_rejects_ambient_mismatch() {
        let u = q_span(3, &[&[1, 0, 0]]);
        let w = q_span(2, &[&[1, 0]]);
        assert!(matches!(u.intersect(&w), Err(Error::Dimension { .. })));
    }

    #[test]
    fn image_examples() {
        let q = Rationals;
        let full = Subspace::full(&q, 2);
        assert_eq!(full.image(&Matrix::identity(&q, 2)).unwrap(), full);
        let nil = Matrix::from_i64(&q, &[&[0, 1], &[0, 0]]);
        assert_eq!(full.image(&nil).unwrap(), q_span(2, &[&[1, 0]]));
        // rank-1 map on a 2-dim subspace of Q^3
        let a = Matrix::from_i64(&q, &[&[1, 1, 0], &[2, 2, 0]]);
        let w = q_span(3, &[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(w.image(&a).unwrap().dim(), 1);
        assert!(w.image(&Matrix::identity(&q, 2)).is_err());
    }

    #[test]
    fn canonical_representative() {
        let a = q_span(3, &[&[1, 2, 3], &[0, 1, 1]]);
        let b = q_span(3, &[&[1, 3, 4], &[2, 5, 7], &[1, 2, 3]]);
        assert_eq!(a, b);
    }

    #[test]
    fn enumeration_counts() {
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(enumerate_subspaces(&f2, 2, 1, 1000).unwrap().len(), 3);
        assert_eq!(enumerate_subspaces(&f2, 4, 2, 1000).unwrap().len(), 35);
        let zero = enumerate_subspaces(&f2, 3, 0, 1000).unwrap();
        assert_eq!(zero.len(), 1);
        assert!(zero[0].is_zero());
    }

    #[test]
    fn enumeration_matches_gaussian_binomial() {
        // oracle: q-binomial via the product formula
        fn oracle(n: u32, d: u32, q: u128) -> u128 {
            let mut num = 1u128;
            let mut den = 1u128;
            for i in 0..d {
                num *= q.pow(n) - q.pow(i);
                den *= q.pow(d) - q.pow(i);
            }
            num / den
        }
        for p in [2u32, 3] {
            let f = PrimeField::new(p).unwrap();
            for n in 0..=4usize {
                for d in 0..=n {
                    let subs = enumerate_subspaces(&f, n, d, 1 << 20).unwrap();
                    assert_eq!(subs.len() as u128, oracle(n as u32, d as u32, p as u128));
                    for w in subs.windows(2) {
                        assert!(w[0].basis.entries() < w[1].basis.entries());
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_budget() {
        let f = PrimeField::new(3).unwrap();
        let err = enumerate_subspaces(&f, 4, 2, 10).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { needed: 130, budget: 10 }));
    }

    #[test]
    fn quotient_map_roundtrip() {
        let q = Rationals;
        let w = q_span(3, &[&[1, 1, 0]]);
        let qm = w.quotient_map();
        assert_eq!(qm.quotient_dim(), 2);
        assert!(qm.projection().apply(&[q.one(), q.one(), q.zero()]).unwrap().iter().all(|x| q.is_zero(x)));
        let line = Subspace::full(&q, 2);
        assert_eq!(qm.lift(&line).unwrap(), Subspace::full(&q, 3));
        assert_eq!(qm.lift(&Subspace::zero(&q, 2)).unwrap(), w);
    }

    #[test]
    fn preimage_under_nilpotent() {
        let q = Rationals;
        let nil = Matrix::from_i64(&q, &[&[0, 1], &[0, 0]]);
        let zero = Subspace::zero(&q, 2);
        assert_eq!(zero.preimage(&nil).unwrap(), q_span(2, &[&[1, 0]]));
    }
}
