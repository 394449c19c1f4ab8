//! Field-specific algorithms: exhaustive subspace enumeration and roots of
//! polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::field::{Field, PrimeField, Rationals};
use crate::exactnum::matrix::poly_eval;
use crate::exactnum::subspace::{enumerate_all_subspaces, Subspace};

/// Divisor search is abandoned above this magnitude; root lists over `Q`
/// are then partial.
const DIVISOR_SEARCH_LIMIT: u64 = 1 << 40;

pub trait FieldAlgorithms: Field {
    /// Every subspace of `F^n`, ordered by dimension then lexicographically.
    /// Only finite fields support this.
    fn all_subspaces(&self, n: usize, budget: u64) -> Result<Vec<Subspace<Self>>>;

    /// Distinct roots in the field, ascending. Over `Q` the list may be
    /// partial for polynomials with huge coefficients.
    fn roots(&self, poly: &[Self::Elem]) -> Vec<Self::Elem>;
}

impl FieldAlgorithms for PrimeField {
    fn all_subspaces(&self, n: usize, budget: u64) -> Result<Vec<Subspace<Self>>> {
        enumerate_all_subspaces(self, n, budget)
    }

    fn roots(&self, poly: &[u32]) -> Vec<u32> {
        if poly.iter().all(|c| *c == 0) {
            return Vec::new();
        }
        (0..self.p()).filter(|x| poly_eval(self, poly, x) == 0).collect()
    }
}

impl FieldAlgorithms for Rationals {
    fn all_subspaces(&self, _n: usize, _budget: u64) -> Result<Vec<Subspace<Self>>> {
        Err(Error::Precondition(
            "exhaustive enumeration requires a prime field; use burnside or candidates over Q".into(),
        ))
    }

    fn roots(&self, poly: &[BigRational]) -> Vec<BigRational> {
        rational_roots(poly)
    }
}

fn rational_roots(poly: &[BigRational]) -> Vec<BigRational> {
    let lcm = poly.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut coeffs: Vec<BigInt> = poly
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    if coeffs.len() <= 1 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    if coeffs[0].is_zero() {
        roots.push(BigRational::zero());
        while coeffs[0].is_zero() {
            coeffs.remove(0);
        }
    }
    if coeffs.len() > 1 {
        let (Some(ps), Some(qs)) = (divisors(&coeffs[0]), divisors(coeffs.last().unwrap())) else {
            return roots;
        };
        let q = Rationals;
        let as_rat: Vec<BigRational> = coeffs.iter().cloned().map(BigRational::from_integer).collect();
        for p in &ps {
            for d in &qs {
                for sign in [1i64, -1] {
                    let cand = BigRational::new(p * sign, d.clone());
                    if q.is_zero(&poly_eval(&q, &as_rat, &cand)) && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    roots
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > DIVISOR_SEARCH_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    let mut k = 1u64;
    while k * k <= n {
        if n % k == 0 {
            out.push(BigInt::from(k));
            if k * k != n {
                out.push(BigInt::from(n / k));
            }
        }
        k += 1;
    }
    Some(out)
}
