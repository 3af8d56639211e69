//! Multivariate polynomials with exact coefficients, the determinant products
//! attached to partitions, and the raising/lowering operators that realize
//! left and right multiplication by elementary invariant matrices.

use crate::combinatorics::{factorial, Partition, Profile};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use itertools::Itertools;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector, one entry per variable.
pub type Exps = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exps, Scalar>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Poly {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Poly {
        Poly::constant(nvars, Scalar::one())
    }

    pub fn var(nvars: usize, idx: usize) -> Poly {
        let mut exps = vec![0; nvars];
        exps[idx] = 1;
        Poly::monomial(nvars, exps, Scalar::one())
    }

    pub fn monomial(nvars: usize, exps: Exps, c: Scalar) -> Poly {
        assert_eq!(exps.len(), nvars);
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(Scalar::zero)
    }

    fn insert_term(&mut self, exps: Exps, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(cur) => {
                let v = &*cur + &c;
                if v.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *cur = v;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), -c);
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exps: Exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert_term(exps, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Total degree of each term must agree for the polynomials built here;
    /// returns the degree of the first term, or 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next().map_or(0, |e| e.iter().sum())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                    .collect();
                if vars.is_empty() {
                    format!("{c}")
                } else {
                    format!("({c})*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Index of the matrix variable x_{i,j} within a p x p grid.
pub fn var_index(i: usize, j: usize, p: usize) -> usize {
    i * p + j
}

/// The monomial x^D attached to a profile, as a polynomial in p^2 variables.
pub fn profile_monomial(d: &Profile, c: Scalar) -> Poly {
    let p = d.p();
    Poly::monomial(p * p, d.entries().to_vec(), c)
}

pub fn permutation_sign(perm: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 { 1 } else { -1 }
}

/// k! times the determinant of the top-left k x k corner of the variable
/// matrix (x_{i,j}); exactly k! monomials, each with coefficient plus or
/// minus k!.
pub fn q_poly(k: usize, p: usize) -> Result<Poly> {
    if k > p {
        return Err(Error::DeterminantOrder { k, p });
    }
    let nvars = p * p;
    if k == 0 {
        return Ok(Poly::one(nvars));
    }
    let kfact = Scalar::from_bigint(factorial(k as u64));
    let mut out = Poly::zero(nvars);
    for perm in (0..k).permutations(k) {
        let sign = permutation_sign(&perm);
        let mut exps = vec![0u32; nvars];
        for (col, &row) in perm.iter().enumerate() {
            exps[var_index(row, col, p)] += 1;
        }
        let coeff = if sign > 0 { kfact.clone() } else { -&kfact };
        out.insert_term(exps, coeff);
    }
    Ok(out)
}

/// Product over the columns of lambda of the determinant factors Q: the
/// polynomial generated by the pairing of e_lambda with itself.
pub fn p_lambda(lambda: &Partition, p: usize) -> Result<Poly> {
    if lambda.num_parts() > p {
        return Err(Error::TooManyParts(lambda.to_string(), p));
    }
    let dual = lambda.dual();
    let mut out = Poly::one(p * p);
    for j in 0..dual.num_parts() {
        out = out.mul(&q_poly(dual.part(j), p)?);
    }
    Ok(out)
}

/// Lowering operator for left multiplication: sum over s of
/// x_{i,s} d/dx_{j,s}.
pub fn apply_d(f: &Poly, i: usize, j: usize, p: usize) -> Poly {
    assert_eq!(f.nvars(), p * p);
    let mut out = Poly::zero(p * p);
    for (exps, c) in f.terms() {
        for s in 0..p {
            let from = var_index(j, s, p);
            let e = exps[from];
            if e == 0 {
                continue;
            }
            let mut ne = exps.clone();
            ne[from] -= 1;
            ne[var_index(i, s, p)] += 1;
            out.insert_term(ne, c * &Scalar::from_int(e as i64));
        }
    }
    out
}

/// Raising operator for right multiplication: sum over s of
/// x_{s,j} d/dx_{s,i}.
pub fn apply_d_star(f: &Poly, i: usize, j: usize, p: usize) -> Poly {
    assert_eq!(f.nvars(), p * p);
    let mut out = Poly::zero(p * p);
    for (exps, c) in f.terms() {
        for s in 0..p {
            let from = var_index(s, i, p);
            let e = exps[from];
            if e == 0 {
                continue;
            }
            let mut ne = exps.clone();
            ne[from] -= 1;
            ne[var_index(s, j, p)] += 1;
            out.insert_term(ne, c * &Scalar::from_int(e as i64));
        }
    }
    out
}
