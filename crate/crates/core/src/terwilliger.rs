//! Closed forms for the Hamming-scheme specializations: the binary algebra
//! indexed by (i, j, t) with its beta coefficients, the nonbinary base
//! algebra over a quadratic extension, and the t-fold binary base whose
//! symmetric powers refine the binary bounds.
//!
//! Norm convention: the exact pairing of the basis vectors of the two-row
//! shape (n-k, k) carries a factor 2^k times a binomial; in the orthonormal
//! image the 2^k cancels between the two normalizing factors, leaving the
//! plain inverse square roots of the binomials next to beta.

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::general::{BaseAlgebra, FactorMap, GeneralElement};
use crate::linalg::Mat;
use crate::scalar::Scalar;
use nalgebra::DMatrix;
use num::{BigInt, BigRational, One, Zero};

/// Index of a binary basis element: word pair with i ones in the column
/// word, j ones in the row word, and t shared positions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BinaryIndex {
    pub i: usize,
    pub j: usize,
    pub t: usize,
}

impl BinaryIndex {
    pub fn validate(&self, n: u32) -> Result<()> {
        let n = n as usize;
        let BinaryIndex { i, j, t } = *self;
        if i > n || j > n || t > i.min(j) || i + j - t > n {
            return Err(Error::BadIndex(format!(
                "(i,j,t) = ({i},{j},{t}) out of range for n = {n}"
            )));
        }
        Ok(())
    }

    /// All valid triples, i then j then t ascending.
    pub fn all(n: u32) -> Vec<BinaryIndex> {
        let n = n as usize;
        let mut out = Vec::new();
        for i in 0..=n {
            for j in 0..=n {
                for t in 0..=i.min(j) {
                    if i + j - t <= n {
                        out.push(BinaryIndex { i, j, t });
                    }
                }
            }
        }
        out
    }
}

/// The profile of the binary basis element: row word weight j, column word
/// weight i, overlap t.
pub fn binary_profile(i: usize, j: usize, t: usize, n: u32) -> Result<crate::combinatorics::Profile> {
    BinaryIndex { i, j, t }.validate(n)?;
    let n = n as usize;
    Ok(crate::combinatorics::Profile::from_rows(&[
        &[(n + t - i - j) as u32, (i - t) as u32],
        &[(j - t) as u32, t as u32],
    ]))
}

fn sign_pow(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn check_beta_indices(i: usize, j: usize, k: usize, t: usize, n: u32) -> Result<()> {
    BinaryIndex { i, j, t }.validate(n)?;
    let n = n as usize;
    if 2 * k > n || k > i || i > n - k || k > j || j > n - k {
        return Err(Error::BadIndex(format!(
            "(i,j,k) = ({i},{j},{k}) out of block range for n = {n}"
        )));
    }
    Ok(())
}

/// The block entry coefficient of the binary algebra, as an alternating sum
/// of binomial products.
pub fn binary_beta(i: usize, j: usize, k: usize, t: usize, n: u32) -> Result<BigRational> {
    check_beta_indices(i, j, k, t, n)?;
    let (i, j, k, t, n) = (i as i64, j as i64, k as i64, t as i64, n as i64);
    let mut acc = BigInt::zero();
    for s in 0..=(j - k) {
        let term = sign_pow(j - t - s)
            * binomial(n - 2 * k, i - k)
            * binomial(n - k - i, s)
            * binomial(i - k, j - k - s)
            * binomial(k, j - t - s);
        acc += term;
    }
    Ok(BigRational::from_integer(acc))
}

/// Schrijver's expression for the same coefficient: a sum over the overlap
/// parameter instead.
pub fn binary_beta_schrijver(
    i: usize,
    j: usize,
    k: usize,
    t: usize,
    n: u32,
) -> Result<BigRational> {
    check_beta_indices(i, j, k, t, n)?;
    let (i, j, k, t, n) = (i as i64, j as i64, k as i64, t as i64, n as i64);
    let mut acc = BigInt::zero();
    for u in 0..=n {
        let term = sign_pow(u - t)
            * binomial(u, t)
            * binomial(n - 2 * k, u - k)
            * binomial(n - k - u, i - u)
            * binomial(n - k - u, j - u);
        acc += term;
    }
    Ok(BigRational::from_integer(acc))
}

/// One nonzero entry of one block of the image of a binary basis element.
#[derive(Clone, PartialEq, Debug)]
pub struct BinaryBlockEntry {
    pub k: usize,
    pub row: usize,
    pub col: usize,
    /// Exact unnormalized value: beta itself.
    pub beta: BigRational,
    /// Orthonormalized value: beta scaled by the inverse square roots of the
    /// two diagonal binomials.
    pub normalized: f64,
}

/// The closed-form block diagonalization of the binary algebra: for every
/// valid (i, j, t), each block k holds a single potentially nonzero entry at
/// (j - k, i - k).
#[derive(Clone, Debug)]
pub struct BinaryBlockDiag {
    n: u32,
    entries: Vec<(BinaryIndex, Vec<BinaryBlockEntry>)>,
}

impl BinaryBlockDiag {
    pub fn new(n: u32) -> BinaryBlockDiag {
        let mut entries = Vec::new();
        for idx in BinaryIndex::all(n) {
            let BinaryIndex { i, j, t } = idx;
            let mut blocks = Vec::new();
            for k in 0..=(n as usize / 2) {
                if k > i || k > j || i > n as usize - k || j > n as usize - k {
                    continue;
                }
                let beta = binary_beta(i, j, k, t, n).expect("indices validated");
                let ci = binomial((n as i64) - 2 * k as i64, i as i64 - k as i64);
                let cj = binomial((n as i64) - 2 * k as i64, j as i64 - k as i64);
                let scale = 1.0
                    / (rational_to_f64(&BigRational::from_integer(ci))
                        * rational_to_f64(&BigRational::from_integer(cj)))
                    .sqrt();
                blocks.push(BinaryBlockEntry {
                    k,
                    row: j - k,
                    col: i - k,
                    normalized: rational_to_f64(&beta) * scale,
                    beta,
                });
            }
            entries.push((idx, blocks));
        }
        BinaryBlockDiag { n, entries }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn entries(&self) -> &[(BinaryIndex, Vec<BinaryBlockEntry>)] {
        &self.entries
    }

    pub fn entry(&self, idx: &BinaryIndex) -> Option<&[BinaryBlockEntry]> {
        self.entries
            .iter()
            .find(|(e, _)| e == idx)
            .map(|(_, blocks)| blocks.as_slice())
    }

    pub fn block_size(&self, k: usize) -> usize {
        self.n as usize - 2 * k + 1
    }

    /// Materializes the orthonormalized blocks of one basis element, one
    /// matrix per k.
    pub fn numeric_blocks(&self, idx: &BinaryIndex) -> Vec<DMatrix<f64>> {
        let blocks = self.entry(idx).unwrap_or(&[]);
        (0..=(self.n as usize / 2))
            .map(|k| {
                let size = self.block_size(k);
                let mut m = DMatrix::<f64>::zeros(size, size);
                if let Some(e) = blocks.iter().find(|e| e.k == k) {
                    m[(e.row, e.col)] = e.normalized;
                }
                m
            })
            .collect()
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    Scalar::from_rational(r.clone()).to_f64()
}

/// The base algebra of the nonbinary scheme: matrices indexed by one
/// distinguished symbol and q - 1 interchangeable ones, with the five orbit
/// basis matrices and the explicit two-block diagonalization over the
/// quadratic extension by sqrt(q - 1).
pub fn nonbinary_base(q: u32) -> Result<BaseAlgebra> {
    if q < 3 {
        return Err(Error::BadInput(format!("nonbinary base needs q >= 3, got {q}")));
    }
    let q = q as usize;
    let one = Scalar::one();
    let mut b1 = Mat::zeros(q, q);
    b1.set(0, 0, one.clone());
    let mut b2 = Mat::zeros(q, q);
    for j in 1..q {
        b2.set(0, j, one.clone());
    }
    let mut b3 = Mat::zeros(q, q);
    for i in 1..q {
        b3.set(i, 0, one.clone());
    }
    let mut b4 = Mat::zeros(q, q);
    for i in 1..q {
        b4.set(i, i, one.clone());
    }
    let mut b5 = Mat::zeros(q, q);
    for i in 1..q {
        for j in 1..q {
            if i != j {
                b5.set(i, j, one.clone());
            }
        }
    }
    let root = Scalar::root_of(q as u64 - 1);
    let mk2 = |entries: [[Scalar; 2]; 2]| {
        Mat::from_rows(entries.into_iter().map(|r| r.to_vec()).collect())
    };
    let zero = Scalar::zero;
    let images2 = vec![
        mk2([[one.clone(), zero()], [zero(), zero()]]),
        mk2([[zero(), root.clone()], [zero(), zero()]]),
        mk2([[zero(), zero()], [root.clone(), zero()]]),
        mk2([[zero(), zero()], [zero(), one.clone()]]),
        mk2([[zero(), zero()], [zero(), Scalar::from_int(q as i64 - 2)]]),
    ];
    let mk1 = |v: Scalar| Mat::from_rows(vec![vec![v]]);
    let images1 = vec![
        mk1(zero()),
        mk1(zero()),
        mk1(zero()),
        mk1(one.clone()),
        mk1(Scalar::from_int(-1)),
    ];
    Ok(BaseAlgebra::new(
        vec![b1, b2, b3, b4, b5],
        vec![FactorMap { size: 2, images: images2 }, FactorMap { size: 1, images: images1 }],
    ))
}

/// One sector of the closed-form nonbinary image: the second block absorbs w
/// of the diagonal degree, the rest lands on a single two-by-two profile.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NonbinarySector {
    pub w: u32,
    pub profile: crate::combinatorics::Profile,
    pub coeff: Scalar,
}

/// Closed form for the transported coefficients of a nonbinary basis
/// element: for each sector w, one target profile and one exact coefficient
/// in the quadratic extension. Zero coefficients are omitted.
pub fn nonbinary_psi(nu: &[u32], n: u32, q: u32) -> Result<Vec<NonbinarySector>> {
    if q < 3 {
        return Err(Error::BadInput(format!("nonbinary map needs q >= 3, got {q}")));
    }
    if nu.len() != 5 || nu.iter().sum::<u32>() != n {
        return Err(Error::BadInput(format!(
            "nu must have 5 entries summing to {n}, got {nu:?}"
        )));
    }
    let root = Scalar::root_of(q as u64 - 1);
    let mut out = Vec::new();
    for w in 0..=n {
        if w > nu[3] + nu[4] {
            continue;
        }
        let a = nu[3] + nu[4] - w;
        let mut sum = BigInt::zero();
        for g in 0..=a {
            let term = binomial(a as i64, g as i64)
                * binomial(w as i64, nu[4] as i64 - g as i64)
                * BigInt::from(q as i64 - 2).pow(g)
                * sign_pow(nu[4] as i64 - g as i64);
            sum += term;
        }
        let coeff = &Scalar::from_bigint(sum) * &root.pow(nu[1] + nu[2]);
        if coeff.is_zero() {
            continue;
        }
        let profile = crate::combinatorics::Profile::from_rows(&[&[nu[0], nu[1]], &[nu[2], a]]);
        out.push(NonbinarySector { w, profile, coeff });
    }
    Ok(out)
}

/// Basis index pairs of the t-fold binary base: representatives (x, y) of
/// word pairs modulo the simultaneous complement, x ranging over words with
/// leading bit zero, ordered x-major then y ascending.
pub fn tfold_basis_pairs(t: u32) -> Vec<(u64, u64)> {
    let half = 1u64 << (t - 1);
    let full = 1u64 << t;
    let mut out = Vec::new();
    for x in 0..half {
        for y in 0..full {
            out.push((x, y));
        }
    }
    out
}

/// The algebra of complement-invariant matrices on binary words of length t,
/// with its two-block diagonalization sending the invariant matrix
/// [[A, B], [B, A]] to A + B and A - B.
pub fn binary_tfold_base(t: u32) -> BaseAlgebra {
    assert!(t >= 1, "need at least one bit");
    let half = 1usize << (t - 1);
    let full = 1usize << t;
    let mask = (full - 1) as u64;
    let pairs = tfold_basis_pairs(t);
    let mut basis = Vec::with_capacity(pairs.len());
    let mut plus = Vec::with_capacity(pairs.len());
    let mut minus = Vec::with_capacity(pairs.len());
    for &(x, y) in &pairs {
        let mut r = Mat::zeros(full, full);
        r.set(x as usize, y as usize, Scalar::one());
        r.set((x ^ mask) as usize, (y ^ mask) as usize, Scalar::one());
        basis.push(r);
        // In the paired basis the block entry sits at (x, y reduced to the
        // leading-zero half), with a sign in the minus block when y crosses.
        let (col, negate) = if (y as usize) < half {
            (y as usize, false)
        } else {
            ((y ^ mask) as usize, true)
        };
        let mut p = Mat::zeros(half, half);
        p.set(x as usize, col, Scalar::one());
        plus.push(p);
        let mut m = Mat::zeros(half, half);
        m.set(x as usize, col, if negate { Scalar::from_int(-1) } else { Scalar::one() });
        minus.push(m);
    }
    BaseAlgebra::new(
        basis,
        vec![FactorMap { size: half, images: plus }, FactorMap { size: half, images: minus }],
    )
}

/// The distance class element of the t = 1 construction: identity factors on
/// all but k positions, the swap on k.
pub fn tfold_distance_class(k: u32, n: u32) -> GeneralElement {
    GeneralElement::basis(vec![n - k, k], n)
}
