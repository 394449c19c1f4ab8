//! Logarithmic differential operators `g + t·θ`, `θ = z∂_z`, in one chart
//! around a puncture at `z = 0`, deformed by a parameter λ:
//! `θ f = f θ + λ z f'`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::field::{format_rational, Rationals};
use crate::exactnum::matrix::Matrix;

/// Polynomial in `z` with rational coefficients, constant term first and
/// no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PolyFn(Vec<BigRational>);

impl PolyFn {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyFn(coeffs)
    }

    pub fn zero() -> Self {
        PolyFn(Vec::new())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// The coordinate function `z`.
    pub fn z() -> Self {
        PolyFn(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let zero = BigRational::zero();
        Self::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&zero) + other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        PolyFn(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// `z f'`, the action of `θ` on a function.
    pub fn theta(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn at_zero(&self) -> BigRational {
        self.0.first().cloned().unwrap_or_else(BigRational::zero)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or_else(|| Error::Precondition("polynomial division by zero".into()))?;
        let lead = &d.0[dd];
        let mut rem = self.0.clone();
        let mut quot = vec![BigRational::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = &rem[rem.len() - 1] / lead;
            for (i, dc) in d.0.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Monic gcd; the gcd of two zero polynomials is zero.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        match a.0.last() {
            Some(lead) => a.scale(&(BigRational::one() / lead)),
            None => a,
        }
    }
}

impl fmt::Display for PolyFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format_rational(c),
                1 => format!("({})z", format_rational(c)),
                _ => format!("({})z^{i}", format_rational(c)),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Serialize for PolyFn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::serde_rational::vec::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for PolyFn {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        crate::serde_rational::vec::deserialize(d).map(PolyFn::new)
    }
}

/// `g + t·θ`; order 0 when `t = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogDiffOperator {
    pub g: PolyFn,
    pub t: PolyFn,
}

impl LogDiffOperator {
    pub fn new(g: PolyFn, t: PolyFn) -> Self {
        LogDiffOperator { g, t }
    }

    pub fn function(g: PolyFn) -> Self {
        Self::new(g, PolyFn::zero())
    }

    pub fn theta() -> Self {
        Self::new(PolyFn::zero(), PolyFn::one())
    }

    pub fn order(&self) -> usize {
        usize::from(!self.t.is_zero())
    }

    /// Left multiplication by a function: `f·(g, t) = (fg, ft)`.
    pub fn left_product(&self, f: &PolyFn) -> Self {
        Self::new(f.mul(&self.g), f.mul(&self.t))
    }

    /// Right multiplication by a function:
    /// `(g, t)·f = (fg + λ t z f', f t)`.
    pub fn right_product(&self, f: &PolyFn, lambda: &BigRational) -> Self {
        let g = f.mul(&self.g).add(&self.t.mul(&f.theta()).scale(lambda));
        Self::new(g, f.mul(&self.t))
    }

    /// `self ∘ other` as `c0 + c1 θ + c2 θ²`.
    pub fn compose(&self, other: &Self, lambda: &BigRational) -> Order2Operator {
        let (g1, t1, g2, t2) = (&self.g, &self.t, &other.g, &other.t);
        Order2Operator {
            c0: g1.mul(g2).add(&t1.mul(&g2.theta()).scale(lambda)),
            c1: g1.mul(t2).add(&t1.mul(g2)).add(&t1.mul(&t2.theta()).scale(lambda)),
            c2: t1.mul(t2),
        }
    }
}

/// `c0 + c1 θ + c2 θ²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Order2Operator {
    pub c0: PolyFn,
    pub c1: PolyFn,
    pub c2: PolyFn,
}

impl Order2Operator {
    pub fn order(&self) -> usize {
        if !self.c2.is_zero() {
            2
        } else {
            usize::from(!self.c1.is_zero())
        }
    }

    /// Coefficient of `θ²`.
    pub fn principal_symbol(&self) -> &PolyFn {
        &self.c2
    }

    fn coords(&self) -> [PolyFn; 3] {
        [self.c0.clone(), self.c1.clone(), self.c2.clone()]
    }
}

/// Section `s` of a rank-`r` bundle in the chart, with connection
/// `θ·s = A s + λ z s'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySection {
    pub comps: Vec<PolyFn>,
    pub residue: Matrix<Rationals>,
    pub lambda: BigRational,
}

impl PolySection {
    pub fn new(comps: Vec<PolyFn>, residue: Matrix<Rationals>, lambda: BigRational) -> Result<Self> {
        let r = comps.len();
        if residue.rows() != r || residue.cols() != r {
            return Err(Error::dim("residue of section", r, residue.rows()));
        }
        Ok(PolySection { comps, residue, lambda })
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    fn with_comps(&self, comps: Vec<PolyFn>) -> Self {
        PolySection {
            comps,
            residue: self.residue.clone(),
            lambda: self.lambda.clone(),
        }
    }

    pub fn scale_by(&self, f: &PolyFn) -> Self {
        self.with_comps(self.comps.iter().map(|c| f.mul(c)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.with_comps(self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect())
    }

    /// `A s + λ z s'`.
    pub fn theta(&self) -> Self {
        let r = self.rank();
        let comps = (0..r)
            .map(|i| {
                let mut acc = self.comps[i].theta().scale(&self.lambda);
                for j in 0..r {
                    acc = acc.add(&self.comps[j].scale(self.residue.get(i, j)));
                }
                acc
            })
            .collect();
        self.with_comps(comps)
    }

    pub fn at_zero(&self) -> Vec<BigRational> {
        self.comps.iter().map(PolyFn::at_zero).collect()
    }
}

/// `(g + tθ)·s = g s + t (A s + λ z s')`.
pub fn apply_op(op: &LogDiffOperator, s: &PolySection) -> PolySection {
    s.scale_by(&op.g).add(&s.theta().scale_by(&op.t))
}

pub fn apply_order2(op: &Order2Operator, s: &PolySection) -> PolySection {
    let ts = s.theta();
    let tts = ts.theta();
    s.scale_by(&op.c0).add(&ts.scale_by(&op.c1)).add(&tts.scale_by(&op.c2))
}

/// `(op·f)·s = op·(f s)`, acting at deformation parameter λ.
pub fn associativity_check(op: &LogDiffOperator, f: &PolyFn, s: &PolySection, lambda: &BigRational) -> bool {
    let s = PolySection {
        lambda: lambda.clone(),
        ..s.clone()
    };
    apply_op(&op.right_product(f, lambda), &s) == apply_op(op, &s.scale_by(f))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationReport {
    /// Every pairwise composition has order ≤ 2 with principal symbol
    /// `t_a t_b`.
    pub symbols_multiply: bool,
    /// Every pairwise composition acts on a probe section as the two
    /// operators applied in turn.
    pub composition_consistent: bool,
    /// Compositions with an order-0 factor stay of order ≤ 1.
    pub order_bounds: bool,
    /// The operators generate all first-order operators as a module.
    pub generates_order1: bool,
    /// Pairwise compositions generate all operators of order ≤ 2.
    pub products_generate_order2: bool,
    /// The products of principal symbols generate the order-2 symbols.
    pub symbol_surjective: bool,
}

impl FiltrationReport {
    pub fn passes(&self) -> bool {
        self.symbols_multiply && self.composition_consistent && self.order_bounds
    }
}

pub fn filtration_check(ops: &[LogDiffOperator], lambda: &BigRational) -> Result<FiltrationReport> {
    let probe = probe_section(lambda)?;
    let mut symbols_multiply = true;
    let mut composition_consistent = true;
    let mut order_bounds = true;
    let mut products = Vec::new();
    let mut symbol_gcd = PolyFn::zero();
    for a in ops {
        for b in ops {
            let c = a.compose(b, lambda);
            symbols_multiply &= c.order() <= 2 && *c.principal_symbol() == a.t.mul(&b.t);
            composition_consistent &= apply_order2(&c, &probe) == apply_op(a, &apply_op(b, &probe));
            if a.order() == 0 || b.order() == 0 {
                order_bounds &= c.order() <= 1;
            }
            symbol_gcd = symbol_gcd.gcd(c.principal_symbol());
            products.push(c.coords().to_vec());
        }
    }
    let gens: Vec<Vec<PolyFn>> = ops.iter().map(|o| vec![o.g.clone(), o.t.clone()]).collect();
    Ok(FiltrationReport {
        symbols_multiply,
        composition_consistent,
        order_bounds,
        generates_order1: generates_free_module(&gens, 2),
        products_generate_order2: generates_free_module(&products, 3),
        symbol_surjective: symbol_gcd == PolyFn::one(),
    })
}

fn probe_section(lambda: &BigRational) -> Result<PolySection> {
    let q = Rationals;
    PolySection::new(
        vec![PolyFn::from_i64(&[1, 1, 0, 1]), PolyFn::from_i64(&[0, 0, 1])],
        Matrix::from_i64(&q, &[&[1, 1], &[0, 2]]),
        lambda.clone(),
    )
}

/// Whether the vectors generate `Q[z]^k`: the `k x k` minors must have a
/// nonzero constant gcd.
fn generates_free_module(vectors: &[Vec<PolyFn>], k: usize) -> bool {
    let mut g = PolyFn::zero();
    let mut chosen = Vec::with_capacity(k);
    subsets(vectors.len(), k, 0, &mut chosen, &mut |idx| {
        if g == PolyFn::one() {
            return;
        }
        let rows: Vec<&Vec<PolyFn>> = idx.iter().map(|&i| &vectors[i]).collect();
        g = g.gcd(&poly_det(&rows));
    });
    g == PolyFn::one()
}

fn subsets(n: usize, k: usize, start: usize, acc: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if acc.len() == k {
        visit(acc);
        return;
    }
    for i in start..n {
        acc.push(i);
        subsets(n, k, i + 1, acc, visit);
        acc.pop();
    }
}

/// Determinant by cofactor expansion; sizes here are at most 3.
fn poly_det(rows: &[&Vec<PolyFn>]) -> PolyFn {
    let k = rows.len();
    if k == 0 {
        return PolyFn::one();
    }
    let mut det = PolyFn::zero();
    for col in 0..k {
        let minor: Vec<Vec<PolyFn>> = rows[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, p)| p.clone()).collect())
            .collect();
        let minor_refs: Vec<&Vec<PolyFn>> = minor.iter().collect();
        let term = rows[0][col].mul(&poly_det(&minor_refs));
        det = if col % 2 == 0 { det.add(&term) } else { det.sub(&term) };
    }
    det
}

/// `g(0) v + t(0) A v`.
pub fn total_residue(op: &LogDiffOperator, a: &Matrix<Rationals>, v: &[BigRational]) -> Result<Vec<BigRational>> {
    let av = a.apply(v)?;
    let (g0, t0) = (op.g.at_zero(), op.t.at_zero());
    Ok(v.iter().zip(av).map(|(x, y)| &g0 * x + &t0 * y).collect())
}

/// For a section vanishing at the puncture, whether `op·s` vanishes there
/// too; `None` when `s(0) ≠ 0`.
pub fn residue_well_defined(op: &LogDiffOperator, s: &PolySection) -> Option<bool> {
    if s.at_zero().iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(apply_op(op, s).at_zero().iter().all(Zero::is_zero))
}
