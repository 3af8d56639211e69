//! Python bindings. Exact scalars cross the boundary as strings in the same
//! notation the JSON dumps use ("3/4", "1/2+3*sqrt(2)"); numeric results come
//! back as nested float lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use std::path::PathBuf;
use std::sync::Arc;
use symtensor::algebra::AlgebraElement;
use symtensor::blockdiag::BlockDiagonalizer;
use symtensor::combinatorics::Profile;
use symtensor::general::{
    compose_blockdiag, full_matrix_base, general_identity, BaseAlgebra, GeneralElement,
};
use symtensor::linalg::Mat;
use symtensor::scalar::Scalar;

fn to_py(e: symtensor::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn profile_from_rows(rows: Vec<Vec<u32>>) -> PyResult<Profile> {
    let p = rows.len();
    if rows.iter().any(|r| r.len() != p) {
        return Err(PyValueError::new_err("profile must be a square matrix"));
    }
    Ok(Profile::new(p, rows.into_iter().flatten().collect()))
}

fn profile_rows(d: &Profile) -> Vec<Vec<u32>> {
    (0..d.p()).map(|i| (0..d.p()).map(|j| d.get(i, j)).collect()).collect()
}

fn mat_strings(m: &Mat) -> Vec<Vec<String>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m.get(r, c).to_string()).collect())
        .collect()
}

fn dmat_rows(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect()).collect()
}

fn parse_scalar(s: &str) -> PyResult<Scalar> {
    let r: num::BigRational = s
        .parse()
        .map_err(|_| PyValueError::new_err(format!("not a rational: {s:?}")))?;
    Ok(Scalar::from_rational(r))
}

/// Element of the invariant algebra at fixed degree and symbol count, stored
/// exactly on the profile basis.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Element {
    inner: AlgebraElement,
}

#[pymethods]
impl Element {
    #[staticmethod]
    fn zero(n: u32, p: usize) -> Element {
        Element { inner: AlgebraElement::zero(n, p) }
    }

    #[staticmethod]
    fn identity(n: u32, p: usize) -> Element {
        Element { inner: AlgebraElement::identity(n, p) }
    }

    #[staticmethod]
    fn basis(profile: Vec<Vec<u32>>) -> PyResult<Element> {
        Ok(Element { inner: AlgebraElement::basis(profile_from_rows(profile)?) })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    fn add_term(&mut self, profile: Vec<Vec<u32>>, coeff: &str) -> PyResult<()> {
        let d = profile_from_rows(profile)?;
        if (d.n(), d.p()) != (self.inner.n(), self.inner.p()) {
            return Err(PyValueError::new_err("profile shape does not match the element"));
        }
        self.inner.add_term(d, parse_scalar(coeff)?);
        Ok(())
    }

    fn coeff(&self, profile: Vec<Vec<u32>>) -> PyResult<String> {
        Ok(self.inner.coeff(&profile_from_rows(profile)?).to_string())
    }

    fn terms(&self) -> Vec<(Vec<Vec<u32>>, String)> {
        self.inner
            .terms()
            .map(|(d, c)| (profile_rows(d), c.to_string()))
            .collect()
    }

    fn add(&self, other: &Element) -> PyResult<Element> {
        self.check_shape(other)?;
        Ok(Element { inner: self.inner.add(&other.inner) })
    }

    fn scale(&self, coeff: &str) -> PyResult<Element> {
        Ok(Element { inner: self.inner.scale(&parse_scalar(coeff)?) })
    }

    fn multiply(&self, other: &Element) -> PyResult<Element> {
        self.check_shape(other)?;
        Ok(Element { inner: self.inner.multiply(&other.inner) })
    }

    fn adjoint(&self) -> Element {
        Element { inner: self.inner.adjoint() }
    }

    fn __repr__(&self) -> String {
        format!(
            "Element(n={}, p={}, terms={})",
            self.inner.n(),
            self.inner.p(),
            self.inner.num_terms()
        )
    }
}

impl Element {
    fn check_shape(&self, other: &Element) -> PyResult<()> {
        if (self.inner.n(), self.inner.p()) != (other.inner.n(), other.inner.p()) {
            return Err(PyValueError::new_err("elements live in different algebras"));
        }
        Ok(())
    }
}

/// The block diagonalization of one invariant algebra: pairing tables, Gram
/// matrices, and exact or orthonormalized images of elements.
#[pyclass]
struct Diagonalizer {
    inner: Arc<BlockDiagonalizer>,
}

#[pymethods]
impl Diagonalizer {
    #[new]
    fn new(n: u32, p: usize) -> PyResult<Diagonalizer> {
        Ok(Diagonalizer { inner: BlockDiagonalizer::get(n, p).map_err(to_py)? })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    fn shapes(&self) -> Vec<Vec<usize>> {
        self.inner.lambdas().iter().map(|l| l.parts().to_vec()).collect()
    }

    fn block_sizes(&self) -> Vec<usize> {
        self.inner.block_sizes()
    }

    fn algebra_dimension(&self) -> String {
        symtensor::combinatorics::profile_count(self.inner.n(), self.inner.p()).to_string()
    }

    fn gram(&self, block: usize) -> PyResult<Vec<Vec<String>>> {
        self.inner
            .grams()
            .get(block)
            .map(mat_strings)
            .ok_or_else(|| PyValueError::new_err(format!("no block {block}")))
    }

    fn apply(&self, element: &Element) -> PyResult<Vec<Vec<Vec<f64>>>> {
        self.check_element(element)?;
        Ok(self.inner.apply_orthonormal(&element.inner).iter().map(dmat_rows).collect())
    }

    fn apply_exact(&self, element: &Element) -> PyResult<Vec<Vec<Vec<String>>>> {
        self.check_element(element)?;
        Ok(self.inner.apply_exact(&element.inner).iter().map(mat_strings).collect())
    }

    fn tables_json(&self, orthonormal: bool) -> PyResult<String> {
        let bytes = symtensor::io::to_pretty_bytes(&symtensor::io::dump_full_tables(
            &self.inner,
            orthonormal,
        ))
        .map_err(to_py)?;
        Ok(String::from_utf8(bytes).expect("json is utf-8"))
    }

    fn __repr__(&self) -> String {
        format!("Diagonalizer(n={}, p={})", self.inner.n(), self.inner.p())
    }
}

impl Diagonalizer {
    fn check_element(&self, element: &Element) -> PyResult<()> {
        if (element.inner.n(), element.inner.p()) != (self.inner.n(), self.inner.p()) {
            return Err(PyValueError::new_err("element does not match this diagonalization"));
        }
        Ok(())
    }
}

/// A base algebra with its explicit factor maps; inputs to the generalized
/// construction.
#[pyclass]
struct Base {
    inner: BaseAlgebra,
}

#[pymethods]
impl Base {
    #[staticmethod]
    fn full_matrix(p: usize) -> PyResult<Base> {
        if p == 0 {
            return Err(PyValueError::new_err("need at least one symbol"));
        }
        Ok(Base { inner: full_matrix_base(p) })
    }

    #[staticmethod]
    fn nonbinary(q: u32) -> PyResult<Base> {
        Ok(Base { inner: symtensor::terwilliger::nonbinary_base(q).map_err(to_py)? })
    }

    #[staticmethod]
    fn binary_tfold(t: u32) -> PyResult<Base> {
        if !(1..=10).contains(&t) {
            return Err(PyValueError::new_err("supported fold counts are 1..=10"));
        }
        Ok(Base { inner: symtensor::terwilliger::binary_tfold_base(t) })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Base> {
        Ok(Base { inner: symtensor::io::load_base_algebra(&path).map_err(to_py)? })
    }

    fn dump(&self, path: PathBuf) -> PyResult<()> {
        symtensor::io::dump_base_algebra(&self.inner, &path).map_err(to_py)
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn s(&self) -> usize {
        self.inner.s()
    }

    fn factor_sizes(&self) -> Vec<usize> {
        self.inner.factor_sizes()
    }

    fn validate(&self) -> Vec<String> {
        self.inner.validate().failures
    }

    fn __repr__(&self) -> String {
        format!("Base(m={}, s={})", self.inner.m(), self.inner.s())
    }
}

/// Element of a generalized invariant algebra on the weight basis.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct GenElement {
    inner: GeneralElement,
}

#[pymethods]
impl GenElement {
    #[staticmethod]
    fn zero(n: u32, s: usize) -> GenElement {
        GenElement { inner: GeneralElement::zero(n, s) }
    }

    #[staticmethod]
    fn basis(nu: Vec<u32>, n: u32) -> PyResult<GenElement> {
        if nu.iter().sum::<u32>() != n {
            return Err(PyValueError::new_err("weights must sum to the degree"));
        }
        Ok(GenElement { inner: GeneralElement::basis(nu, n) })
    }

    #[staticmethod]
    fn identity(base: &Base, n: u32) -> PyResult<GenElement> {
        Ok(GenElement { inner: general_identity(&base.inner, n).map_err(to_py)? })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn s(&self) -> usize {
        self.inner.s()
    }

    fn add_term(&mut self, nu: Vec<u32>, coeff: &str) -> PyResult<()> {
        if nu.len() != self.inner.s() || nu.iter().sum::<u32>() != self.inner.n() {
            return Err(PyValueError::new_err("weight vector does not match the element"));
        }
        self.inner.add_term(nu, parse_scalar(coeff)?);
        Ok(())
    }

    fn coeff(&self, nu: Vec<u32>) -> String {
        self.inner.coeff(&nu).to_string()
    }

    fn terms(&self) -> Vec<(Vec<u32>, String)> {
        self.inner.terms().map(|(nu, c)| (nu.clone(), c.to_string())).collect()
    }

    fn add(&self, other: &GenElement) -> PyResult<GenElement> {
        if (self.inner.n(), self.inner.s()) != (other.inner.n(), other.inner.s()) {
            return Err(PyValueError::new_err("elements live in different algebras"));
        }
        Ok(GenElement { inner: self.inner.add(&other.inner) })
    }

    fn scale(&self, coeff: &str) -> PyResult<GenElement> {
        Ok(GenElement { inner: self.inner.scale(&parse_scalar(coeff)?) })
    }

    fn __repr__(&self) -> String {
        format!("GenElement(n={}, s={})", self.inner.n(), self.inner.s())
    }
}

fn check_general(elem: &GenElement, base: &Base) -> PyResult<()> {
    if elem.inner.s() != base.inner.s() {
        return Err(PyValueError::new_err("element has the wrong number of weights for the base"));
    }
    Ok(())
}

/// Exact composed blocks of a generalized element: a list of sectors, each a
/// weight vector together with (shape tuple, matrix of scalar strings) pairs.
#[pyfunction]
fn compose_exact(
    elem: &GenElement,
    base: &Base,
) -> PyResult<Vec<(Vec<u32>, Vec<(Vec<Vec<usize>>, Vec<Vec<String>>)>)>> {
    check_general(elem, base)?;
    let blocks = compose_blockdiag(&elem.inner, &base.inner).map_err(to_py)?;
    Ok(blocks
        .sectors
        .iter()
        .map(|sec| {
            let tuples = sec
                .tuples
                .iter()
                .map(|(lambdas, m)| {
                    (lambdas.iter().map(|l| l.parts().to_vec()).collect(), mat_strings(m))
                })
                .collect();
            (sec.mu.clone(), tuples)
        })
        .collect())
}

/// Orthonormalized composed blocks as float matrices, flattened over sectors
/// in the canonical layout.
#[pyfunction]
fn compose_numeric(elem: &GenElement, base: &Base) -> PyResult<Vec<Vec<Vec<f64>>>> {
    check_general(elem, base)?;
    let blocks = compose_blockdiag(&elem.inner, &base.inner).map_err(to_py)?;
    Ok(blocks.orthonormal(&base.inner).map_err(to_py)?.iter().map(dmat_rows).collect())
}

#[pyfunction]
fn binary_beta(i: usize, j: usize, k: usize, t: usize, n: u32) -> PyResult<String> {
    symtensor::terwilliger::binary_beta(i, j, k, t, n)
        .map(|r| r.to_string())
        .map_err(to_py)
}

#[pyfunction]
fn binary_beta_schrijver(i: usize, j: usize, k: usize, t: usize, n: u32) -> PyResult<String> {
    symtensor::terwilliger::binary_beta_schrijver(i, j, k, t, n)
        .map(|r| r.to_string())
        .map_err(to_py)
}

/// All closed-form block entries at degree n as tuples
/// (i, j, t, k, row, col, beta, normalized).
#[pyfunction]
fn binary_block_entries(
    n: u32,
) -> Vec<(usize, usize, usize, usize, usize, usize, String, f64)> {
    let table = symtensor::terwilliger::BinaryBlockDiag::new(n);
    let mut out = Vec::new();
    for (idx, entries) in table.entries() {
        for e in entries {
            out.push((idx.i, idx.j, idx.t, e.k, e.row, e.col, e.beta.to_string(), e.normalized));
        }
    }
    out
}

/// Closed-form sectors of one nonbinary weight vector as tuples
/// (w, profile, coeff).
#[pyfunction]
fn nonbinary_sectors(
    nu: Vec<u32>,
    n: u32,
    q: u32,
) -> PyResult<Vec<(u32, Vec<Vec<u32>>, String)>> {
    let sectors = symtensor::terwilliger::nonbinary_psi(&nu, n, q).map_err(to_py)?;
    Ok(sectors
        .iter()
        .map(|s| (s.w, profile_rows(&s.profile), s.coeff.to_string()))
        .collect())
}

/// Reads a program file and writes its SDPA sparse reduction.
#[pyfunction]
fn export_sdpa(program: PathBuf, out: PathBuf) -> PyResult<()> {
    let (prog, base) = symtensor::io::load_sdp_program(&program).map_err(to_py)?;
    let mut buf = Vec::new();
    symtensor::sdpa::export_sdpa(&prog, base.as_ref(), &mut buf).map_err(to_py)?;
    symtensor::io::write_atomic(&out, &buf).map_err(to_py)
}

#[pymodule]
fn symtensor_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Element>()?;
    m.add_class::<Diagonalizer>()?;
    m.add_class::<Base>()?;
    m.add_class::<GenElement>()?;
    m.add_function(wrap_pyfunction!(compose_exact, m)?)?;
    m.add_function(wrap_pyfunction!(compose_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(binary_beta, m)?)?;
    m.add_function(wrap_pyfunction!(binary_beta_schrijver, m)?)?;
    m.add_function(wrap_pyfunction!(binary_block_entries, m)?)?;
    m.add_function(wrap_pyfunction!(nonbinary_sectors, m)?)?;
    m.add_function(wrap_pyfunction!(export_sdpa, m)?)?;
    Ok(())
}
