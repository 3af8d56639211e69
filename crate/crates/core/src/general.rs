//! Block diagonalization for symmetric tensor powers of an arbitrary matrix
//! *-algebra given with an explicit isomorphism onto a sum of full matrix
//! blocks: coefficients transport through a polynomial substitution, and the
//! per-degree diagonalizers compose by Kronecker products.

use crate::blockdiag::BlockDiagonalizer;
use crate::combinatorics::{enum_compositions, enum_profiles, Partition, Profile};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::poly::Poly;
use crate::scalar::Scalar;
use nalgebra::DMatrix;
use std::collections::BTreeMap;
use std::fmt;

/// One full matrix block of the image: the size and the image of every basis
/// matrix under the block's coordinate map.
#[derive(Clone, Debug)]
pub struct FactorMap {
    pub size: usize,
    pub images: Vec<Mat>,
}

/// A matrix *-algebra with a distinguished basis R_1..R_s and an explicit
/// isomorphism onto a direct sum of full matrix algebras, given blockwise.
#[derive(Clone, Debug)]
pub struct BaseAlgebra {
    m: usize,
    basis: Vec<Mat>,
    factors: Vec<FactorMap>,
}

impl BaseAlgebra {
    pub fn new(basis: Vec<Mat>, factors: Vec<FactorMap>) -> BaseAlgebra {
        assert!(!basis.is_empty(), "empty basis");
        let m = basis[0].nrows();
        for b in &basis {
            assert_eq!((b.nrows(), b.ncols()), (m, m), "basis matrices must share a square shape");
        }
        for f in &factors {
            assert_eq!(f.images.len(), basis.len(), "one image per basis matrix per factor");
            for img in &f.images {
                assert_eq!((img.nrows(), img.ncols()), (f.size, f.size));
            }
        }
        BaseAlgebra { m, basis, factors }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    pub fn factors(&self) -> &[FactorMap] {
        &self.factors
    }

    pub fn factor_sizes(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.size).collect()
    }

    fn span_solver(&self) -> SpanSolver {
        SpanSolver::new(self.basis.iter().map(flatten).collect())
    }

    /// Coefficients of the identity matrix in the basis.
    pub fn identity_coeffs(&self) -> Result<Vec<Scalar>> {
        self.span_solver()
            .solve(&flatten(&Mat::identity(self.m)))
            .ok_or_else(|| Error::InvalidBase("identity is not in the span of the basis".into()))
    }

    /// Structural checks: basis independence, closure under products and
    /// transposes, the map being a unital *-homomorphism on every block, and
    /// the dimension count that makes it an isomorphism.
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let s = self.s();
        let solver = self.span_solver();
        if solver.rank() != s {
            failures.push(format!(
                "basis is linearly dependent: rank {} of {s} matrices",
                solver.rank()
            ));
        }
        let dim_sum: usize = self.factors.iter().map(|f| f.size * f.size).sum();
        if dim_sum != s {
            failures.push(format!(
                "block dimensions sum to {dim_sum}, basis has {s} elements"
            ));
        }
        if solver.solve(&flatten(&Mat::identity(self.m))).is_none() {
            failures.push("identity matrix is not in the span".into());
        }
        for i in 0..s {
            for j in 0..s {
                let prod = self.basis[i].matmul(&self.basis[j]);
                match solver.solve(&flatten(&prod)) {
                    None => {
                        failures.push(format!(
                            "product R_{} R_{} leaves the span",
                            i + 1,
                            j + 1
                        ));
                    }
                    Some(coeffs) => {
                        for (fi, factor) in self.factors.iter().enumerate() {
                            let lhs = factor.images[i].matmul(&factor.images[j]);
                            let mut rhs = Mat::zeros(factor.size, factor.size);
                            for (k, c) in coeffs.iter().enumerate() {
                                if !c.is_zero() {
                                    rhs = rhs.add(&factor.images[k].scale(c));
                                }
                            }
                            if lhs != rhs {
                                failures.push(format!(
                                    "block {} is not multiplicative on R_{} R_{}",
                                    fi + 1,
                                    i + 1,
                                    j + 1
                                ));
                            }
                        }
                    }
                }
            }
        }
        for i in 0..s {
            match solver.solve(&flatten(&self.basis[i].transpose())) {
                None => {
                    failures.push(format!("transpose of R_{} leaves the span", i + 1));
                }
                Some(coeffs) => {
                    for (fi, factor) in self.factors.iter().enumerate() {
                        let lhs = factor.images[i].transpose();
                        let mut rhs = Mat::zeros(factor.size, factor.size);
                        for (k, c) in coeffs.iter().enumerate() {
                            if !c.is_zero() {
                                rhs = rhs.add(&factor.images[k].scale(c));
                            }
                        }
                        if lhs != rhs {
                            failures.push(format!(
                                "block {} does not respect the transpose of R_{}",
                                fi + 1,
                                i + 1
                            ));
                        }
                    }
                }
            }
        }
        // The blockwise map must be injective on the basis span.
        let joint: Vec<Vec<Scalar>> = (0..s)
            .map(|i| {
                let mut row = Vec::new();
                for factor in &self.factors {
                    row.extend(flatten(&factor.images[i]));
                }
                row
            })
            .collect();
        if Mat::from_rows(joint).rank() != s {
            failures.push("blockwise map is not injective".into());
        }
        ValidationReport { failures }
    }
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            write!(f, "valid")
        } else {
            write!(f, "{}", self.failures.join("; "))
        }
    }
}

fn flatten(m: &Mat) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m.get(i, j).clone());
        }
    }
    out
}

/// Incremental exact row reduction that can express later vectors as
/// combinations of the originals.
struct SpanSolver {
    nvecs: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    transforms: Vec<Vec<Scalar>>,
}

impl SpanSolver {
    fn new(vectors: Vec<Vec<Scalar>>) -> SpanSolver {
        let nvecs = vectors.len();
        let mut solver =
            SpanSolver { nvecs, rows: Vec::new(), pivots: Vec::new(), transforms: Vec::new() };
        for (idx, v) in vectors.into_iter().enumerate() {
            let mut tr = vec![Scalar::zero(); nvecs];
            tr[idx] = Scalar::one();
            let (mut row, mut tr) = solver.reduce(v, tr);
            if let Some(pc) = row.iter().position(|x| !x.is_zero()) {
                let pinv = row[pc].inv();
                for x in row.iter_mut() {
                    *x = &*x * &pinv;
                }
                for x in tr.iter_mut() {
                    *x = &*x * &pinv;
                }
                // Keep reduced form: clear the new pivot column everywhere.
                for r in 0..solver.rows.len() {
                    let f = solver.rows[r][pc].clone();
                    if f.is_zero() {
                        continue;
                    }
                    for c in 0..row.len() {
                        let v = &solver.rows[r][c] - &(&f * &row[c]);
                        solver.rows[r][c] = v;
                    }
                    for c in 0..nvecs {
                        let v = &solver.transforms[r][c] - &(&f * &tr[c]);
                        solver.transforms[r][c] = v;
                    }
                }
                solver.rows.push(row);
                solver.pivots.push(pc);
                solver.transforms.push(tr);
            }
        }
        solver
    }

    fn reduce(&self, mut v: Vec<Scalar>, mut tr: Vec<Scalar>) -> (Vec<Scalar>, Vec<Scalar>) {
        for (r, &pc) in self.pivots.iter().enumerate() {
            let f = v[pc].clone();
            if f.is_zero() {
                continue;
            }
            for c in 0..v.len() {
                let nv = &v[c] - &(&f * &self.rows[r][c]);
                v[c] = nv;
            }
            for c in 0..self.nvecs {
                let nv = &tr[c] - &(&f * &self.transforms[r][c]);
                tr[c] = nv;
            }
        }
        (v, tr)
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Coefficients over the original vectors reproducing the target, if it
    /// lies in the span.
    fn solve(&self, target: &[Scalar]) -> Option<Vec<Scalar>> {
        let mut coeffs = vec![Scalar::zero(); self.nvecs];
        let mut rem = target.to_vec();
        for (r, &pc) in self.pivots.iter().enumerate() {
            let f = rem[pc].clone();
            if f.is_zero() {
                continue;
            }
            for c in 0..rem.len() {
                let v = &rem[c] - &(&f * &self.rows[r][c]);
                rem[c] = v;
            }
            for c in 0..self.nvecs {
                let v = &coeffs[c] + &(&f * &self.transforms[r][c]);
                coeffs[c] = v;
            }
        }
        if rem.iter().all(Scalar::is_zero) {
            Some(coeffs)
        } else {
            None
        }
    }
}

/// An invariant element of the n-th symmetric tensor power of the base
/// algebra: exact coefficients on the symmetrized basis indexed by exponent
/// vectors over the base matrices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneralElement {
    n: u32,
    s: usize,
    coeffs: BTreeMap<Vec<u32>, Scalar>,
}

impl GeneralElement {
    pub fn zero(n: u32, s: usize) -> GeneralElement {
        GeneralElement { n, s, coeffs: BTreeMap::new() }
    }

    pub fn basis(nu: Vec<u32>, n: u32) -> GeneralElement {
        assert_eq!(nu.iter().sum::<u32>(), n);
        let s = nu.len();
        let mut out = GeneralElement::zero(n, s);
        out.add_term(nu, Scalar::one());
        out
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn add_term(&mut self, nu: Vec<u32>, c: Scalar) {
        assert_eq!(nu.len(), self.s);
        assert_eq!(nu.iter().sum::<u32>(), self.n);
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&nu) {
            Some(cur) => {
                let v = &*cur + &c;
                if v.is_zero() {
                    self.coeffs.remove(&nu);
                } else {
                    *cur = v;
                }
            }
            None => {
                self.coeffs.insert(nu, c);
            }
        }
    }

    pub fn coeff(&self, nu: &[u32]) -> Scalar {
        self.coeffs.get(nu).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn scale(&self, s: &Scalar) -> GeneralElement {
        let mut out = GeneralElement::zero(self.n, self.s);
        for (nu, c) in &self.coeffs {
            out.add_term(nu.clone(), c * s);
        }
        out
    }

    pub fn add(&self, other: &GeneralElement) -> GeneralElement {
        assert_eq!((self.n, self.s), (other.n, other.s));
        let mut out = self.clone();
        for (nu, c) in &other.coeffs {
            out.add_term(nu.clone(), c.clone());
        }
        out
    }
}

/// The identity of the tensor power algebra, expanded on the symmetrized
/// basis: each basis element already sums over all words of its content, so
/// the identity's coefficient at nu is the plain product of the identity
/// coefficients of the base.
pub fn general_identity(base: &BaseAlgebra, n: u32) -> Result<GeneralElement> {
    let c = base.identity_coeffs()?;
    let mut out = GeneralElement::zero(n, base.s());
    for nu in enum_compositions(n, base.s()) {
        let mut coeff = Scalar::one();
        for (i, &e) in nu.iter().enumerate() {
            if e > 0 {
                coeff = &coeff * &c[i].pow(e);
            }
        }
        out.add_term(nu, coeff);
    }
    Ok(out)
}

/// Index into one sector of the composed diagonalization: a degree split
/// across the factors together with one profile per factor.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct SectorProfile {
    pub mu: Vec<u32>,
    pub parts: Vec<Profile>,
}

impl fmt::Display for SectorProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "mu{:?}:{}", self.mu, parts.join("x"))
    }
}

/// Degree splits of n across t factors, in decreasing lexicographic order.
pub fn enum_sectors(n: u32, t: usize) -> Vec<Vec<u32>> {
    let mut out = enum_compositions(n, t);
    out.reverse();
    out
}

/// All per-factor profile tuples of one sector, factors nested left to right.
fn sector_profiles(mu: &[u32], sizes: &[usize]) -> Vec<Vec<Profile>> {
    let mut out: Vec<Vec<Profile>> = vec![Vec::new()];
    for (j, &p) in sizes.iter().enumerate() {
        let options = enum_profiles(mu[j], p);
        let mut next = Vec::with_capacity(out.len() * options.len());
        for prefix in &out {
            for d in &options {
                let mut tuple = prefix.clone();
                tuple.push(d.clone());
                next.push(tuple);
            }
        }
        out = next;
    }
    out
}

/// Transports an invariant element of the tensor power into profile
/// coordinates on the block side: for every sector and profile tuple, the
/// coefficient is a polynomial substitution of the blockwise images into the
/// element's coefficients. Returned in sector order, zero entries omitted.
pub fn y_coefficients(
    elem: &GeneralElement,
    base: &BaseAlgebra,
) -> Result<Vec<(SectorProfile, Scalar)>> {
    if elem.s() != base.s() {
        return Err(Error::BadInput(format!(
            "element over {} basis matrices, base has {}",
            elem.s(),
            base.s()
        )));
    }
    let s = base.s();
    let sizes = base.factor_sizes();
    let t = sizes.len();
    let n = elem.n();
    // Linear forms: variable i carries the (k, l) entry of the image of R_i
    // in block j.
    let mut linforms: Vec<Vec<Vec<Poly>>> = Vec::with_capacity(t);
    for (j, factor) in base.factors().iter().enumerate() {
        let p = sizes[j];
        let mut block = vec![vec![Poly::zero(s); p]; p];
        for (k, row) in block.iter_mut().enumerate() {
            for (l, slot) in row.iter_mut().enumerate() {
                let mut form = Poly::zero(s);
                for i in 0..s {
                    let c = factor.images[i].get(k, l);
                    if !c.is_zero() {
                        form = form.add(&Poly::var(s, i).scale(c));
                    }
                }
                *slot = form;
            }
        }
        linforms.push(block);
    }
    let mut out = Vec::new();
    for mu in enum_sectors(n, t) {
        for tuple in sector_profiles(&mu, &sizes) {
            let mut prod = Poly::one(s);
            for (j, d) in tuple.iter().enumerate() {
                for k in 0..sizes[j] {
                    for l in 0..sizes[j] {
                        let e = d.get(k, l);
                        if e > 0 {
                            prod = prod.mul(&linforms[j][k][l].pow(e));
                        }
                    }
                }
            }
            let mut y = Scalar::zero();
            for (nu, c) in elem.terms() {
                let coeff = prod.coeff(nu);
                if !coeff.is_zero() {
                    y = &y + &(c * &coeff);
                }
            }
            if !y.is_zero() {
                out.push((SectorProfile { mu: mu.clone(), parts: tuple }, y));
            }
        }
    }
    Ok(out)
}

/// One sector of the composed block diagonalization: shape tuples paired with
/// exact blocks, shape tuples nested left to right over the factors.
#[derive(Clone, Debug)]
pub struct ComposedSector {
    pub mu: Vec<u32>,
    pub tuples: Vec<(Vec<Partition>, Mat)>,
}

#[derive(Clone, Debug)]
pub struct ComposedBlocks {
    pub sectors: Vec<ComposedSector>,
}

impl ComposedBlocks {
    pub fn block_sizes(&self) -> Vec<usize> {
        self.sectors
            .iter()
            .flat_map(|s| s.tuples.iter().map(|(_, m)| m.nrows()))
            .collect()
    }

    /// Conjugates every block by the Kronecker product of the per-factor
    /// orthonormalizers.
    pub fn orthonormal(&self, base: &BaseAlgebra) -> Result<Vec<DMatrix<f64>>> {
        let sizes = base.factor_sizes();
        let mut out = Vec::new();
        for sector in &self.sectors {
            let bds: Vec<_> = sector
                .mu
                .iter()
                .zip(&sizes)
                .map(|(&m, &p)| BlockDiagonalizer::get(m, p))
                .collect::<Result<Vec<_>>>()?;
            for (lambdas, block) in &sector.tuples {
                let mut r = DMatrix::<f64>::identity(1, 1);
                for (j, lambda) in lambdas.iter().enumerate() {
                    let idx = bds[j]
                        .lambdas()
                        .iter()
                        .position(|l| l == lambda)
                        .expect("shape from the diagonalizer");
                    r = r.kronecker(&bds[j].orthonormalizers()[idx].r_matrix());
                }
                out.push(r.transpose() * block.to_f64() * r);
            }
        }
        Ok(out)
    }
}

/// Composes the coefficient transport with the per-factor diagonalizations:
/// every sector splits into Kronecker blocks indexed by shape tuples, and the
/// result is the exact block image of the element.
pub fn compose_blockdiag(elem: &GeneralElement, base: &BaseAlgebra) -> Result<ComposedBlocks> {
    let ys = y_coefficients(elem, base)?;
    let sizes = base.factor_sizes();
    let t = sizes.len();
    let n = elem.n();
    let mut grouped: BTreeMap<Vec<u32>, Vec<(Vec<Profile>, Scalar)>> = BTreeMap::new();
    for (sp, y) in ys {
        grouped.entry(sp.mu).or_default().push((sp.parts, y));
    }
    let mut sectors = Vec::new();
    for mu in enum_sectors(n, t) {
        let bds: Vec<_> = mu
            .iter()
            .zip(&sizes)
            .map(|(&m, &p)| BlockDiagonalizer::get(m, p))
            .collect::<Result<Vec<_>>>()?;
        // Shape tuples in the product order of the per-factor shape lists.
        let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
        for bd in &bds {
            let mut next = Vec::new();
            for prefix in &tuples {
                for idx in 0..bd.lambdas().len() {
                    let mut tup = prefix.clone();
                    tup.push(idx);
                    next.push(tup);
                }
            }
            tuples = next;
        }
        let terms = grouped.get(&mu).cloned().unwrap_or_default();
        let mut out_tuples = Vec::with_capacity(tuples.len());
        for tup in tuples {
            let lambdas: Vec<Partition> = tup
                .iter()
                .enumerate()
                .map(|(j, &idx)| bds[j].lambdas()[idx].clone())
                .collect();
            let size: usize = tup
                .iter()
                .enumerate()
                .map(|(j, &idx)| bds[j].tables()[idx].dimension())
                .product();
            let mut acc = Mat::zeros(size, size);
            for (parts, y) in &terms {
                let mut kron = Mat::identity(1);
                let mut missing = false;
                for (j, d) in parts.iter().enumerate() {
                    match bds[j].tables()[tup[j]].entry(d) {
                        Some(mat) => kron = kron.kron(mat),
                        None => {
                            missing = true;
                            break;
                        }
                    }
                }
                if missing {
                    continue;
                }
                acc = acc.add(&kron.scale(y));
            }
            out_tuples.push((lambdas, acc));
        }
        sectors.push(ComposedSector { mu, tuples: out_tuples });
    }
    Ok(ComposedBlocks { sectors })
}

/// The full matrix algebra on p symbols as a base, with the elementary
/// matrices in row-major order and the identity coordinate map.
pub fn full_matrix_base(p: usize) -> BaseAlgebra {
    let mut basis = Vec::with_capacity(p * p);
    let mut images = Vec::with_capacity(p * p);
    for i in 0..p {
        for j in 0..p {
            let mut e = Mat::zeros(p, p);
            e.set(i, j, Scalar::one());
            basis.push(e.clone());
            images.push(e);
        }
    }
    BaseAlgebra::new(basis, vec![FactorMap { size: p, images }])
}
