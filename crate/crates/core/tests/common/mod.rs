//! Dense oracles shared by the integration suites: generalized basis
//! elements expanded as literal Kronecker sums over all words, and exact
//! re-expression of a dense invariant matrix in the orbit basis. Independent
//! of the coefficient-transport pipeline under test.

// Each integration binary compiles this module separately and may use only
// part of it.
#![allow(dead_code)]

use symtensor::general::{BaseAlgebra, GeneralElement};
use symtensor::linalg::Mat;
use symtensor::scalar::Scalar;
use std::collections::BTreeMap;

fn for_each_word(s: usize, n: usize, mut f: impl FnMut(&[usize])) {
    let mut word = vec![0usize; n];
    loop {
        f(&word);
        let mut k = n;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            word[k] += 1;
            if word[k] < s {
                break;
            }
            word[k] = 0;
        }
    }
}

fn weight(word: &[usize], s: usize) -> Vec<u32> {
    let mut nu = vec![0u32; s];
    for &x in word {
        nu[x] += 1;
    }
    nu
}

/// The element as an explicit matrix on m^n word indices: the sum over all
/// words of the Kronecker product of base matrices, weighted by the
/// coefficient of the word's symbol count.
pub fn dense_general(base: &BaseAlgebra, elem: &GeneralElement) -> Mat {
    let m = base.m();
    let s = base.s();
    let n = elem.n() as usize;
    let dim = m.pow(n as u32);
    let mut out = Mat::zeros(dim, dim);
    for_each_word(s, n, |word| {
        let c = elem.coeff(&weight(word, s));
        if c.is_zero() {
            return;
        }
        let mut t = Mat::identity(1);
        for &x in word {
            t = t.kron(&base.basis()[x]);
        }
        out = out.add(&t.scale(&c));
    });
    out
}

/// Reads the orbit-basis coefficients back off a dense matrix. Requires the
/// base matrices to have pairwise disjoint supports (all bases in this
/// repository do), checks that words of equal symbol count agree, and checks
/// the full reconstruction, so any matrix outside the span panics.
pub fn dense_to_general(base: &BaseAlgebra, mat: &Mat, n: u32) -> GeneralElement {
    let m = base.m();
    let s = base.s();
    let witness: Vec<(usize, usize, Scalar)> = base
        .basis()
        .iter()
        .map(|b| {
            for r in 0..m {
                for c in 0..m {
                    if !b.get(r, c).is_zero() {
                        return (r, c, b.get(r, c).clone());
                    }
                }
            }
            panic!("zero base matrix");
        })
        .collect();
    let mut seen: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
    for_each_word(s, n as usize, |word| {
        let mut row = 0usize;
        let mut col = 0usize;
        let mut scale = Scalar::one();
        for &x in word {
            let (r, c, v) = &witness[x];
            row = row * m + r;
            col = col * m + c;
            scale = &scale * v;
        }
        let v = &mat.get(row, col).clone() * &scale.inv();
        let nu = weight(word, s);
        match seen.get(&nu) {
            None => {
                seen.insert(nu, v);
            }
            Some(prev) => assert_eq!(prev, &v, "matrix is not constant on the orbit of {nu:?}"),
        }
    });
    let mut elem = GeneralElement::zero(n, s);
    for (nu, v) in seen {
        elem.add_term(nu, v);
    }
    assert_eq!(
        dense_general(base, &elem),
        *mat,
        "matrix lies outside the span of the orbit basis"
    );
    elem
}
