//! Block diagonalization of the invariant algebra: per-shape inner product
//! tables computed through the polynomial calculus, Gram matrices on the
//! semistandard basis, and the induced exact and orthonormal representations.

use crate::algebra::AlgebraElement;
use crate::combinatorics::{enum_partitions, enum_ssyt, profile_count, Partition, Profile, Tableau};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::poly::{apply_d, apply_d_star, p_lambda};
use crate::scalar::Scalar;
use nalgebra::DMatrix;
use num::BigInt;
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, LazyLock, RwLock};

/// All pairings of a shape's semistandard basis against every profile basis
/// element: entry(D) holds the matrix with (r, c) entry the pairing of the
/// image of basis vector c under the profile element against basis vector r.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InnerProductTable {
    lambda: Partition,
    basis: Vec<Tableau>,
    entries: BTreeMap<Profile, Mat>,
}

impl InnerProductTable {
    pub(crate) fn from_parts(
        lambda: Partition,
        basis: Vec<Tableau>,
        entries: BTreeMap<Profile, Mat>,
    ) -> InnerProductTable {
        InnerProductTable { lambda, basis, entries }
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn basis(&self) -> &[Tableau] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn entry(&self, d: &Profile) -> Option<&Mat> {
        self.entries.get(d)
    }

    pub fn entry_or_zero(&self, d: &Profile) -> Mat {
        self.entries
            .get(d)
            .cloned()
            .unwrap_or_else(|| Mat::zeros(self.basis.len(), self.basis.len()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Profile, &Mat)> {
        self.entries.iter()
    }

    /// Gram matrix of the semistandard basis: pairings of basis vectors with
    /// equal symbol counts, read off the diagonal-profile entries.
    pub fn gram(&self, p: usize) -> Mat {
        let m = self.basis.len();
        let weights: Vec<Vec<u32>> = self.basis.iter().map(|t| t.weight(p)).collect();
        Mat::from_fn(m, m, |r, c| {
            if weights[r] != weights[c] {
                return Scalar::zero();
            }
            let d = Profile::diagonal(&weights[r]);
            self.entries
                .get(&d)
                .map(|mat| mat.get(r, c).clone())
                .unwrap_or_else(Scalar::zero)
        })
    }
}

/// Builds the table for one shape by operator calculus: the shape polynomial
/// is lowered according to the profiles of the two tableaux being paired, and
/// every coefficient of the result is one table entry.
pub fn inner_product_table(lambda: &Partition, n: u32, p: usize) -> Result<InnerProductTable> {
    assert_eq!(lambda.n() as u32, n, "shape size must match degree");
    let plam = p_lambda(lambda, p)?;
    let basis = enum_ssyt(lambda, p);
    let profiles: Vec<Profile> = basis.iter().map(|t| t.profile(p)).collect();
    let denoms: Vec<Scalar> = profiles
        .iter()
        .map(|d| {
            let mut den = BigInt::from(1);
            for i in 0..p {
                for j in 0..i {
                    den *= crate::combinatorics::factorial(d.get(i, j) as u64);
                }
            }
            Scalar::from_bigint(den)
        })
        .collect();
    let m = basis.len();
    let mut entries: BTreeMap<Profile, Mat> = BTreeMap::new();
    for c in 0..m {
        for r in 0..m {
            let mut q = plam.clone();
            // Innermost factors act first: traverse shapes of the operator
            // product from the last column pair upward.
            for j in (0..p.saturating_sub(1)).rev() {
                for i in ((j + 1)..p).rev() {
                    for _ in 0..profiles[c].get(i, j) {
                        q = apply_d_star(&q, j, i, p);
                    }
                    for _ in 0..profiles[r].get(i, j) {
                        q = apply_d(&q, i, j, p);
                    }
                }
            }
            let norm = (&denoms[c] * &denoms[r]).inv();
            for (exps, coeff) in q.terms() {
                let d = Profile::new(p, exps.clone());
                let mat = entries.entry(d).or_insert_with(|| Mat::zeros(m, m));
                mat.set(r, c, coeff * &norm);
            }
        }
    }
    entries.retain(|_, mat| !mat.is_zero());
    Ok(InnerProductTable { lambda: lambda.clone(), basis, entries })
}

/// Recomputes a shape's table by brute force on words: each basis vector is
/// expanded as a signed vector over all length-n words, the profile basis
/// matrices act as literal 0/1 matrices, and entries are plain dot products.
/// Shares no code path with the operator calculus, so agreement between the
/// two is a real check.
pub fn dense_oracle_table(
    lambda: &Partition,
    n: u32,
    p: usize,
    cap: usize,
) -> Result<InnerProductTable> {
    use crate::algebra::dense;
    assert_eq!(lambda.n() as u32, n, "shape size must match degree");
    let basis = enum_ssyt(lambda, p);
    let vecs: Vec<Vec<i64>> = basis
        .iter()
        .map(|t| dense::tableau_vector(t, p, cap))
        .collect::<Result<Vec<_>>>()?;
    let m = basis.len();
    let mut entries: BTreeMap<Profile, Mat> = BTreeMap::new();
    for d in crate::combinatorics::enum_profiles(n, p) {
        let a = dense::basis_matrix(&d, cap)?;
        let mut mat = Mat::zeros(m, m);
        for c in 0..m {
            let image = dense::matvec(&a, &vecs[c]);
            for r in 0..m {
                let v = dense::dot(&vecs[r], &image);
                if v != 0 {
                    mat.set(r, c, Scalar::from_int(v));
                }
            }
        }
        if !mat.is_zero() {
            entries.insert(d, mat);
        }
    }
    Ok(InnerProductTable { lambda: lambda.clone(), basis, entries })
}

/// Exact orthonormalizing change of basis derived from a Gram matrix: the
/// inverse Gram factors as L diag(delta) L^T with positive pivots, and the
/// columns of L sqrt(diag(delta)) form an orthonormal basis. The square roots
/// are the only inexact step and stay confined to r_matrix.
#[derive(Clone, Debug)]
pub struct Orthonormalizer {
    l: Mat,
    delta: Vec<Scalar>,
}

impl Orthonormalizer {
    pub fn from_gram(gram: &Mat) -> Result<Orthonormalizer> {
        let inv = gram.inverse()?;
        if !inv.is_symmetric() {
            return Err(Error::BadInput("gram inverse is not symmetric".into()));
        }
        let (l, delta) = inv.ldl()?;
        Ok(Orthonormalizer { l, delta })
    }

    pub fn unit_lower(&self) -> &Mat {
        &self.l
    }

    pub fn pivots(&self) -> &[Scalar] {
        &self.delta
    }

    pub fn dimension(&self) -> usize {
        self.delta.len()
    }

    pub fn r_matrix(&self) -> DMatrix<f64> {
        let m = self.delta.len();
        DMatrix::from_fn(m, m, |i, j| self.l.get(i, j).to_f64() * self.delta[j].to_f64().sqrt())
    }
}

/// The full block diagonalization at one degree and symbol count: one table,
/// Gram matrix, and orthonormalizer per admissible shape, shapes in
/// decreasing lexicographic order.
#[derive(Debug)]
pub struct BlockDiagonalizer {
    n: u32,
    p: usize,
    lambdas: Vec<Partition>,
    tables: Vec<InnerProductTable>,
    grams: Vec<Mat>,
    orthos: Vec<Orthonormalizer>,
}

static DIAGONALIZER_CACHE: LazyLock<RwLock<HashMap<(u32, usize), Arc<BlockDiagonalizer>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

impl BlockDiagonalizer {
    /// Builds or fetches the process-wide instance for (n, p).
    pub fn get(n: u32, p: usize) -> Result<Arc<BlockDiagonalizer>> {
        if let Some(hit) = DIAGONALIZER_CACHE.read().unwrap().get(&(n, p)) {
            return Ok(hit.clone());
        }
        let built = Arc::new(BlockDiagonalizer::build(n, p)?);
        DIAGONALIZER_CACHE
            .write()
            .unwrap()
            .insert((n, p), built.clone());
        Ok(built)
    }

    fn build(n: u32, p: usize) -> Result<BlockDiagonalizer> {
        assert!(p >= 1, "need at least one symbol");
        let lambdas = enum_partitions(n as usize, p);
        let tables: Vec<InnerProductTable> = lambdas
            .par_iter()
            .map(|lambda| inner_product_table(lambda, n, p))
            .collect::<Result<Vec<_>>>()?;
        BlockDiagonalizer::from_tables(n, p, tables)
    }

    /// Assembles the diagonalizer from precomputed tables, recomputing only
    /// the cheap Gram and orthonormalization data. Tables must cover exactly
    /// the admissible shapes; used when reloading from the file cache.
    pub fn from_tables(
        n: u32,
        p: usize,
        tables: Vec<InnerProductTable>,
    ) -> Result<BlockDiagonalizer> {
        let lambdas = enum_partitions(n as usize, p);
        if tables.len() != lambdas.len()
            || tables.iter().zip(&lambdas).any(|(t, l)| t.lambda() != l)
        {
            return Err(Error::BadInput(
                "tables do not match the shape list for this degree".into(),
            ));
        }
        let grams: Vec<Mat> = tables.iter().map(|t| t.gram(p)).collect();
        let orthos: Vec<Orthonormalizer> = grams
            .iter()
            .map(Orthonormalizer::from_gram)
            .collect::<Result<Vec<_>>>()?;
        Ok(BlockDiagonalizer { n, p, lambdas, tables, grams, orthos })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn lambdas(&self) -> &[Partition] {
        &self.lambdas
    }

    pub fn tables(&self) -> &[InnerProductTable] {
        &self.tables
    }

    pub fn table(&self, lambda: &Partition) -> Option<&InnerProductTable> {
        self.lambdas
            .iter()
            .position(|l| l == lambda)
            .map(|i| &self.tables[i])
    }

    pub fn grams(&self) -> &[Mat] {
        &self.grams
    }

    pub fn orthonormalizers(&self) -> &[Orthonormalizer] {
        &self.orthos
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.tables.iter().map(|t| t.dimension()).collect()
    }

    /// Sum of squared block sizes equals the number of profiles.
    pub fn dimension_identity_holds(&self) -> bool {
        let total: BigInt = self
            .block_sizes()
            .iter()
            .map(|&m| BigInt::from(m) * BigInt::from(m))
            .sum();
        total == profile_count(self.n, self.p)
    }

    /// Exact block image: one matrix per shape, linear in the element. Sends
    /// products to products and positive semidefinite elements to tuples that
    /// are positive semidefinite against the Gram inner product.
    pub fn apply_exact(&self, a: &AlgebraElement) -> Vec<Mat> {
        assert_eq!((a.n(), a.p()), (self.n, self.p), "element shape mismatch");
        self.tables
            .iter()
            .map(|table| {
                let m = table.dimension();
                let mut acc = Mat::zeros(m, m);
                for (d, c) in a.terms() {
                    if let Some(mat) = table.entry(d) {
                        acc = acc.add(&mat.scale(c));
                    }
                }
                acc
            })
            .collect()
    }

    /// Orthonormalized numeric image: conjugates the exact blocks by the
    /// orthonormalizing basis change, yielding an approximate *-homomorphism
    /// into symmetric matrices.
    pub fn apply_orthonormal(&self, a: &AlgebraElement) -> Vec<DMatrix<f64>> {
        self.apply_exact(a)
            .into_iter()
            .zip(&self.orthos)
            .map(|(block, ortho)| {
                let r = ortho.r_matrix();
                r.transpose() * block.to_f64() * r
            })
            .collect()
    }
}

/// Clears the process-wide diagonalizer cache; used by tests that measure
/// build cost.
pub fn clear_diagonalizer_cache() {
    DIAGONALIZER_CACHE.write().unwrap().clear();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{dense, AlgebraElement, DEFAULT_CAP};
    use crate::combinatorics::enum_profiles;
    use crate::linalg;

    fn pairing_matrix_dense(
        d: &Profile,
        basis: &[Tableau],
        _n: u32,
        p: usize,
    ) -> Vec<Vec<i64>> {
        let ad = dense::basis_matrix(d, DEFAULT_CAP).unwrap();
        let vs: Vec<Vec<i64>> = basis
            .iter()
            .map(|t| dense::tableau_vector(t, p, DEFAULT_CAP).unwrap())
            .collect();
        let m = basis.len();
        let mut out = vec![vec![0i64; m]; m];
        for c in 0..m {
            let av = dense::matvec(&ad, &vs[c]);
            for r in 0..m {
                out[r][c] = dense::dot(&av, &vs[r]);
            }
        }
        out
    }

    fn check_table_against_dense(n: u32, p: usize) {
        for lambda in enum_partitions(n as usize, p) {
            let table = inner_product_table(&lambda, n, p).unwrap();
            for d in enum_profiles(n, p) {
                let expected = pairing_matrix_dense(&d, table.basis(), n, p);
                let got = table.entry_or_zero(&d);
                for r in 0..table.dimension() {
                    for c in 0..table.dimension() {
                        assert_eq!(
                            got.get(r, c),
                            &Scalar::from_int(expected[r][c]),
                            "lambda {lambda} profile {d} entry ({r},{c})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn single_box_table_is_matrix_units() {
        let lambda = Partition::new(vec![1]);
        let table = inner_product_table(&lambda, 1, 2).unwrap();
        assert_eq!(table.dimension(), 2);
        for i in 0..2 {
            for j in 0..2 {
                let mut d = Profile::diagonal(&[0, 0]);
                d = d.with_delta(i, j, 1).unwrap();
                let mat = table.entry_or_zero(&d);
                for r in 0..2 {
                    for c in 0..2 {
                        let expect = if (r, c) == (i, j) { 1 } else { 0 };
                        assert_eq!(mat.get(r, c), &Scalar::from_int(expect));
                    }
                }
            }
        }
    }

    #[test]
    fn two_box_tables_match_hand_values() {
        // Row shape (2): basis 00, 01, 11; the off-diagonal profile pairs the
        // middle vector with itself with value 2.
        let lambda = Partition::new(vec![2]);
        let table = inner_product_table(&lambda, 2, 2).unwrap();
        let d = Profile::from_rows(&[&[0, 1], &[1, 0]]);
        let mat = table.entry_or_zero(&d);
        assert_eq!(mat.get(1, 1), &Scalar::from_int(2));
        // Column shape (1,1): single basis vector, pairings +2 and -2.
        let lambda = Partition::new(vec![1, 1]);
        let table = inner_product_table(&lambda, 2, 2).unwrap();
        let id = Profile::diagonal(&[1, 1]);
        assert_eq!(table.entry_or_zero(&id).get(0, 0), &Scalar::from_int(2));
        assert_eq!(table.entry_or_zero(&d).get(0, 0), &Scalar::from_int(-2));
    }

    #[test]
    fn tables_match_dense_pairings_n2() {
        check_table_against_dense(2, 2);
    }

    #[test]
    fn tables_match_dense_pairings_n3() {
        check_table_against_dense(3, 2);
    }

    #[test]
    fn tables_match_dense_pairings_p3() {
        check_table_against_dense(2, 3);
    }

    #[test]
    fn gram_matches_dense_norms() {
        for (n, p) in [(2u32, 2usize), (3, 2), (2, 3)] {
            for lambda in enum_partitions(n as usize, p) {
                let table = inner_product_table(&lambda, n, p).unwrap();
                let gram = table.gram(p);
                let vs: Vec<Vec<i64>> = table
                    .basis()
                    .iter()
                    .map(|t| dense::tableau_vector(t, p, DEFAULT_CAP).unwrap())
                    .collect();
                for r in 0..table.dimension() {
                    for c in 0..table.dimension() {
                        assert_eq!(
                            gram.get(r, c),
                            &Scalar::from_int(dense::dot(&vs[r], &vs[c])),
                            "gram of {lambda} at ({r},{c})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn orthonormalizer_inverts_gram() {
        let bd = BlockDiagonalizer::get(4, 2).unwrap();
        for (gram, ortho) in bd.grams().iter().zip(bd.orthonormalizers()) {
            let r = ortho.r_matrix();
            let prod = r.transpose() * gram.to_f64() * r;
            let id = DMatrix::<f64>::identity(prod.nrows(), prod.ncols());
            assert!(linalg::max_abs(&(prod - id)) < 1e-12);
        }
    }

    #[test]
    fn dimension_identity_small() {
        for (n, p) in [(1u32, 2usize), (2, 2), (3, 2), (4, 2), (1, 3), (2, 3), (3, 3)] {
            let bd = BlockDiagonalizer::get(n, p).unwrap();
            assert!(bd.dimension_identity_holds(), "n={n} p={p}");
        }
    }

    #[test]
    fn exact_image_of_identity_is_gram() {
        let bd = BlockDiagonalizer::get(3, 2).unwrap();
        let id = AlgebraElement::identity(3, 2);
        let blocks = bd.apply_exact(&id);
        for (block, gram) in blocks.iter().zip(bd.grams()) {
            assert_eq!(block, gram);
        }
    }

    #[test]
    fn exact_image_is_multiplicative_against_gram() {
        // psi'(ab) = psi'(a) gram^{-1} psi'(b): the exact blocks compose
        // through the Gram matrix because the basis is not orthonormal.
        let n = 3;
        let p = 2;
        let bd = BlockDiagonalizer::get(n, p).unwrap();
        let a = AlgebraElement::basis(Profile::from_rows(&[&[1, 1], &[0, 1]]));
        let b = AlgebraElement::basis(Profile::from_rows(&[&[0, 1], &[1, 1]]));
        let ab = a.multiply(&b);
        let ia = bd.apply_exact(&a);
        let ib = bd.apply_exact(&b);
        let iab = bd.apply_exact(&ab);
        for (i, gram) in bd.grams().iter().enumerate() {
            let ginv = gram.inverse().unwrap();
            assert_eq!(ia[i].matmul(&ginv).matmul(&ib[i]), iab[i]);
        }
    }

    #[test]
    fn orthonormal_image_is_multiplicative() {
        let n = 3;
        let p = 2;
        let bd = BlockDiagonalizer::get(n, p).unwrap();
        let a = AlgebraElement::basis(Profile::from_rows(&[&[2, 0], &[1, 0]]));
        let b = AlgebraElement::basis(Profile::from_rows(&[&[1, 0], &[0, 2]]));
        let ab = a.multiply(&b);
        let ia = bd.apply_orthonormal(&a);
        let ib = bd.apply_orthonormal(&b);
        let iab = bd.apply_orthonormal(&ab);
        for i in 0..ia.len() {
            let diff = &ia[i] * &ib[i] - &iab[i];
            assert!(linalg::max_abs(&diff) < 1e-9);
        }
        let id_blocks = bd.apply_orthonormal(&AlgebraElement::identity(n, p));
        for blk in id_blocks {
            let idm = DMatrix::<f64>::identity(blk.nrows(), blk.ncols());
            assert!(linalg::max_abs(&(blk - idm)) < 1e-10);
        }
    }

    #[test]
    fn exact_image_has_full_rank() {
        // The map from profile coordinates to stacked block entries is a
        // bijection onto the direct sum; certify injectivity modulo a large
        // prime.
        let n = 4;
        let p = 2;
        let bd = BlockDiagonalizer::get(n, p).unwrap();
        let profiles = enum_profiles(n, p);
        let cols: usize = bd.block_sizes().iter().map(|m| m * m).sum();
        assert_eq!(profiles.len(), cols);
        let mut rows = Vec::with_capacity(profiles.len());
        for d in &profiles {
            let blocks = bd.apply_exact(&AlgebraElement::basis(d.clone()));
            let mut row = Vec::with_capacity(cols);
            for blk in blocks {
                for r in 0..blk.nrows() {
                    for c in 0..blk.ncols() {
                        row.push(blk.get(r, c).clone());
                    }
                }
            }
            rows.push(row);
        }
        let mat = Mat::from_rows(rows);
        assert_eq!(mat.rank_mod_m61().unwrap(), profiles.len());
    }

    #[test]
    fn adjoint_transposes_blocks() {
        let n = 3;
        let p = 2;
        let bd = BlockDiagonalizer::get(n, p).unwrap();
        for d in enum_profiles(n, p) {
            let a = AlgebraElement::basis(d);
            let blocks = bd.apply_orthonormal(&a);
            let adj_blocks = bd.apply_orthonormal(&a.adjoint());
            for (b, ba) in blocks.iter().zip(&adj_blocks) {
                assert!(linalg::max_abs(&(b.transpose() - ba)) < 1e-9);
            }
        }
    }
}
