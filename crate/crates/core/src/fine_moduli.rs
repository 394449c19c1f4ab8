//! Arithmetic criterion for a universal family: the gcd of the degree and
//! the flag jumps, with an explicit Bezout certificate in terms of
//! `χ(κ, h) = d + r(1 − g − h) − Σ_x Σ_{i<κ(x)} m_{x,i}`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinePuncture {
    pub id: String,
    /// Jumps `m_{x,1}, …, m_{x,l_x}`, positive and summing to `r`.
    pub jumps: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FineInput {
    pub d: i64,
    pub r: u64,
    pub g: u64,
    pub punctures: Vec<FinePuncture>,
}

impl FineInput {
    pub fn new(d: i64, r: u64, g: u64, punctures: Vec<FinePuncture>) -> Result<Self> {
        if r == 0 {
            return Err(Error::invalid("r", "rank must be positive"));
        }
        for (x, p) in punctures.iter().enumerate() {
            if let Some(i) = p.jumps.iter().position(|&m| m == 0) {
                return Err(Error::invalid(format!("punctures[{x}].jumps[{i}]"), "jumps must be positive"));
            }
            let sum: u64 = p.jumps.iter().sum();
            if sum != r {
                return Err(Error::invalid(
                    format!("punctures[{x}].jumps"),
                    format!("jumps sum to {sum}, expected r = {r}"),
                ));
            }
        }
        Ok(FineInput { d, r, g, punctures })
    }

    /// Full flags (all jumps 1) at the given number of punctures.
    pub fn full_flag(d: i64, r: u64, g: u64, punctures: usize) -> Self {
        let ps = (0..punctures)
            .map(|x| FinePuncture {
                id: format!("x{x}"),
                jumps: vec![1; r as usize],
            })
            .collect();
        FineInput { d, r, g, punctures: ps }
    }

    /// `κ ≡ 1`.
    pub fn base_kappa(&self) -> Vec<usize> {
        vec![1; self.punctures.len()]
    }

    /// `gcd({d, r} ∪ {m_{x,i}})`; `r` only matters without punctures, since
    /// otherwise it is a sum of jumps.
    pub fn gcd(&self) -> u64 {
        self.punctures
            .iter()
            .flat_map(|p| p.jumps.iter())
            .fold(self.d.unsigned_abs().gcd(&self.r), |acc, &m| acc.gcd(&m))
    }
}

pub fn chi(input: &FineInput, kappa: &[usize], h: i64) -> Result<i64> {
    if kappa.len() != input.punctures.len() {
        return Err(Error::dim("kappa entries", input.punctures.len(), kappa.len()));
    }
    let r = input.r as i128;
    let mut value = input.d as i128 + r * (1 - input.g as i128 - h as i128);
    for (x, (p, &k)) in input.punctures.iter().zip(kappa).enumerate() {
        if k < 1 || k > p.jumps.len() + 1 {
            return Err(Error::invalid(
                format!("kappa[{x}]"),
                format!("must lie in 1..={}", p.jumps.len() + 1),
            ));
        }
        value -= p.jumps[..k - 1].iter().map(|&m| m as i128).sum::<i128>();
    }
    i64::try_from(value).map_err(|_| Error::Precondition("chi overflows i64".into()))
}

pub fn is_fine(input: &FineInput) -> bool {
    input.gcd() == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiTerm {
    pub a: i64,
    pub kappa: Vec<usize>,
    pub h: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiCertificate {
    pub terms: Vec<ChiTerm>,
    pub value: i64,
}

impl ChiCertificate {
    /// `Σ a χ(κ, h)`, recomputed from the input.
    pub fn evaluate(&self, input: &FineInput) -> Result<i64> {
        let mut total: i128 = 0;
        for t in &self.terms {
            total += t.a as i128 * chi(input, &t.kappa, t.h)? as i128;
        }
        i64::try_from(total).map_err(|_| Error::Precondition("certificate value overflows i64".into()))
    }
}

/// `Σ sign · χ(κ, h)` terms expressing one generator.
type Expansion = Vec<(i64, Vec<usize>, i64)>;

/// Integer combination `Σ a_i χ(κ_i, h_i) = 1`.
pub fn bezout_certificate(input: &FineInput) -> Result<ChiCertificate> {
    let gcd = input.gcd();
    if gcd != 1 {
        return Err(Error::NotFine { gcd });
    }
    let base = input.base_kappa();
    let c = chi(input, &base, 0)?;
    let r = input.r as i64;

    // χ(1, h) = c − r h hits 1 directly when r | c − 1
    if (c - 1).rem_euclid(r) == 0 {
        let terms = vec![ChiTerm { a: 1, kappa: base, h: (c - 1) / r }];
        return finish(input, terms);
    }

    // Generators and their χ-expansions:
    //   c       = χ(1, 0)
    //   m_{x,i} = χ(κ_{x,i}, 0) − χ(κ_{x,i}^+, 0)
    //   r       = χ(1, 0) − χ(1, 1)
    let mut gens: Vec<(i64, Expansion)> = vec![(c, vec![(1, base.clone(), 0)])];
    for (x, p) in input.punctures.iter().enumerate() {
        for (i, &m) in p.jumps.iter().enumerate() {
            let mut lo = base.clone();
            lo[x] = i + 1;
            let mut hi = base.clone();
            hi[x] = i + 2;
            gens.push((m as i64, vec![(1, lo, 0), (-1, hi, 0)]));
        }
    }
    gens.push((r, vec![(1, base.clone(), 0), (-1, base, 1)]));

    // extended Euclid over the generator list, stopping once the running
    // gcd reaches 1
    let mut running = gens[0].0.abs();
    let mut coeffs = vec![gens[0].0.signum()];
    for (value, _) in gens.iter().skip(1) {
        if running == 1 {
            break;
        }
        let e = running.extended_gcd(value);
        let (g, s, t) = normalize(e.gcd, e.x, e.y);
        coeffs.iter_mut().for_each(|k| *k *= s);
        coeffs.push(t);
        running = g;
    }
    if running != 1 {
        return Err(Error::NotFine { gcd: running as u64 });
    }

    let mut terms: Vec<ChiTerm> = Vec::new();
    for (k, (_, expansion)) in coeffs.iter().zip(&gens) {
        if *k == 0 {
            continue;
        }
        for (sign, kappa, h) in expansion {
            let a = k * sign;
            match terms.iter_mut().find(|t| t.kappa == *kappa && t.h == *h) {
                Some(t) => t.a += a,
                None => terms.push(ChiTerm { a, kappa: kappa.clone(), h: *h }),
            }
        }
    }
    terms.retain(|t| t.a != 0);
    finish(input, terms)
}

fn normalize(g: i64, x: i64, y: i64) -> (i64, i64, i64) {
    if g < 0 {
        (-g, -x, -y)
    } else {
        (g, x, y)
    }
}

fn finish(input: &FineInput, terms: Vec<ChiTerm>) -> Result<ChiCertificate> {
    let mut cert = ChiCertificate { terms, value: 0 };
    cert.value = cert.evaluate(input)?;
    Ok(cert)
}
