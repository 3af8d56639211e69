//! JSON serialization for tables, base algebras, and SDP programs, plus the
//! on-disk table cache.
//!
//! Scalars serialize as decimal rational strings "num/den" ("3", "-1/2"); a
//! value with an irrational part becomes an object carrying "rational",
//! "sqrt_coeff", and the squarefree "radicand". Parsing is lossless. All
//! container keys are emitted in sorted order, so output bytes are a pure
//! function of the data.

use crate::algebra::AlgebraElement;
use crate::blockdiag::{BlockDiagonalizer, InnerProductTable};
use crate::combinatorics::{enum_compositions, Partition, Profile, Tableau};
use crate::error::{Error, Result};
use crate::general::{BaseAlgebra, FactorMap, GeneralElement};
use crate::linalg::Mat;
use crate::scalar::Scalar;
use crate::terwilliger::{BinaryBlockDiag, BinaryIndex};
use num::BigRational;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

/// Bumped whenever any on-disk layout changes; embedded in every file and in
/// cache file names, so stale caches are never read.
pub const FORMAT_VERSION: u64 = 1;

fn jerr(path: &str, msg: impl AsRef<str>) -> Error {
    Error::Schema(format!("{path}: {}", msg.as_ref()))
}

fn as_obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| jerr(path, "expected object"))
}

fn as_arr<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| jerr(path, "expected array"))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| jerr(path, "expected string"))
}

fn as_u64(v: &Value, path: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| jerr(path, "expected nonnegative integer"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| jerr(&format!("{path}/{key}"), "missing field"))
}

fn check_version(obj: &Map<String, Value>, kind: &str, path: &str) -> Result<()> {
    let v = as_u64(field(obj, "format_version", path)?, &format!("{path}/format_version"))?;
    if v != FORMAT_VERSION {
        return Err(jerr(
            &format!("{path}/format_version"),
            format!("unsupported version {v}, expected {FORMAT_VERSION}"),
        ));
    }
    let k = as_str(field(obj, "kind", path)?, &format!("{path}/kind"))?;
    if k != kind {
        return Err(jerr(&format!("{path}/kind"), format!("expected \"{kind}\", got \"{k}\"")));
    }
    Ok(())
}

pub fn rational_to_string(r: &BigRational) -> String {
    r.to_string()
}

pub fn rational_from_str(s: &str, path: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim())
        .map_err(|e| jerr(path, format!("bad rational \"{s}\": {e}")))
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    if s.is_rational() {
        Value::String(rational_to_string(
            s.as_rational().expect("rational scalar"),
        ))
    } else {
        json!({
            "rational": rational_to_string(s.rational_part()),
            "sqrt_coeff": rational_to_string(s.sqrt_part()),
            "radicand": s.radicand(),
        })
    }
}

pub fn scalar_from_json(v: &Value, path: &str) -> Result<Scalar> {
    match v {
        Value::String(s) => Ok(Scalar::from_rational(rational_from_str(s, path)?)),
        Value::Object(obj) => {
            let a = rational_from_str(
                as_str(field(obj, "rational", path)?, &format!("{path}/rational"))?,
                &format!("{path}/rational"),
            )?;
            let b = rational_from_str(
                as_str(field(obj, "sqrt_coeff", path)?, &format!("{path}/sqrt_coeff"))?,
                &format!("{path}/sqrt_coeff"),
            )?;
            let d = as_u64(field(obj, "radicand", path)?, &format!("{path}/radicand"))?;
            Ok(Scalar::new(a, b, d))
        }
        _ => Err(jerr(path, "expected rational string or extension object")),
    }
}

pub fn mat_to_json(m: &Mat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| {
                Value::Array((0..m.ncols()).map(|c| scalar_to_json(m.get(r, c))).collect())
            })
            .collect(),
    )
}

pub fn mat_from_json(v: &Value, path: &str) -> Result<Mat> {
    let rows = as_arr(v, path)?;
    if rows.is_empty() {
        return Err(jerr(path, "matrix needs at least one row"));
    }
    let mut data = Vec::new();
    let mut ncols = None;
    for (r, row) in rows.iter().enumerate() {
        let rpath = format!("{path}/{r}");
        let cells = as_arr(row, &rpath)?;
        match ncols {
            None => ncols = Some(cells.len()),
            Some(w) if w != cells.len() => {
                return Err(jerr(&rpath, "ragged matrix rows"));
            }
            _ => {}
        }
        for (c, cell) in cells.iter().enumerate() {
            data.push(scalar_from_json(cell, &format!("{rpath}/{c}"))?);
        }
    }
    let ncols = ncols.unwrap();
    if ncols == 0 {
        return Err(jerr(path, "matrix needs at least one column"));
    }
    Ok(Mat::from_rows(
        data.chunks(ncols).map(|ch| ch.to_vec()).collect(),
    ))
}

fn mat_to_json_f64(m: &nalgebra::DMatrix<f64>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| Value::Array((0..m.ncols()).map(|c| json!(m[(r, c)])).collect()))
            .collect(),
    )
}

pub fn profile_to_json(d: &Profile) -> Value {
    let p = d.p();
    Value::Array(
        (0..p)
            .map(|i| Value::Array((0..p).map(|j| json!(d.get(i, j))).collect()))
            .collect(),
    )
}

pub fn profile_from_json(v: &Value, path: &str) -> Result<Profile> {
    let rows = as_arr(v, path)?;
    let p = rows.len();
    let mut d = Vec::with_capacity(p * p);
    for (i, row) in rows.iter().enumerate() {
        let rpath = format!("{path}/{i}");
        let cells = as_arr(row, &rpath)?;
        if cells.len() != p {
            return Err(jerr(&rpath, "profile must be square"));
        }
        for (j, cell) in cells.iter().enumerate() {
            d.push(as_u64(cell, &format!("{rpath}/{j}"))? as u32);
        }
    }
    Ok(Profile::new(p, d))
}

fn partition_to_json(l: &Partition) -> Value {
    Value::Array(l.parts().iter().map(|&x| json!(x)).collect())
}

fn partition_from_json(v: &Value, path: &str) -> Result<Partition> {
    let arr = as_arr(v, path)?;
    let mut parts = Vec::with_capacity(arr.len());
    for (i, x) in arr.iter().enumerate() {
        parts.push(as_u64(x, &format!("{path}/{i}"))? as usize);
    }
    if parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(jerr(path, "partition parts must be weakly decreasing"));
    }
    Ok(Partition::new(parts))
}

fn tableau_to_json(t: &Tableau) -> Value {
    let shape = t.shape().clone();
    Value::Array(
        (0..shape.num_parts())
            .map(|r| {
                Value::Array(
                    (0..shape.part(r))
                        .map(|c| json!(t.entry(r, c)))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn tableau_from_json(v: &Value, path: &str) -> Result<Tableau> {
    let rows = as_arr(v, path)?;
    let mut parts = Vec::new();
    let mut entries = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let rpath = format!("{path}/{i}");
        let cells = as_arr(row, &rpath)?;
        parts.push(cells.len());
        for (j, cell) in cells.iter().enumerate() {
            entries.push(as_u64(cell, &format!("{rpath}/{j}"))? as usize);
        }
    }
    if parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(jerr(path, "tableau rows must weakly shorten downward"));
    }
    Ok(Tableau::new(Partition::new(parts), entries))
}

/// Serializes the per-shape tables. With `orthonormal` set, entry matrices
/// are the numeric conjugated images and each block carries its basis-change
/// matrix; otherwise entries are the exact table values.
pub fn dump_full_tables(bd: &BlockDiagonalizer, orthonormal: bool) -> Value {
    let mut blocks = Vec::new();
    for (idx, table) in bd.tables().iter().enumerate() {
        let mut entries = Vec::new();
        for (d, mat) in table.entries() {
            let matrix = if orthonormal {
                let r = bd.orthonormalizers()[idx].r_matrix();
                mat_to_json_f64(&(r.transpose() * mat.to_f64() * &r))
            } else {
                mat_to_json(mat)
            };
            entries.push(json!({
                "profile": profile_to_json(d),
                "matrix": matrix,
            }));
        }
        let mut block = json!({
            "lambda": partition_to_json(table.lambda()),
            "size": table.dimension(),
            "basis": Value::Array(table.basis().iter().map(tableau_to_json).collect()),
            "gram": mat_to_json(&bd.grams()[idx]),
            "entries": Value::Array(entries),
        });
        if orthonormal {
            block["r_matrix"] = mat_to_json_f64(&bd.orthonormalizers()[idx].r_matrix());
        }
        blocks.push(block);
    }
    json!({
        "format_version": FORMAT_VERSION,
        "kind": "blockdiag-full",
        "n": bd.n(),
        "p": bd.p(),
        "algebra_dimension": crate::combinatorics::profile_count(bd.n(), bd.p()).to_string(),
        "normalization": if orthonormal { "orthonormal" } else { "exact" },
        "blocks": Value::Array(blocks),
    })
}

/// Parses an exact table dump back into tables; rejects orthonormal dumps,
/// which are lossy by construction.
pub fn tables_from_json(v: &Value) -> Result<(u32, usize, Vec<InnerProductTable>)> {
    let obj = as_obj(v, "")?;
    check_version(obj, "blockdiag-full", "")?;
    let norm = as_str(field(obj, "normalization", "")?, "/normalization")?;
    if norm != "exact" {
        return Err(jerr("/normalization", "only exact dumps can be reloaded"));
    }
    let n = as_u64(field(obj, "n", "")?, "/n")? as u32;
    let p = as_u64(field(obj, "p", "")?, "/p")? as usize;
    let blocks = as_arr(field(obj, "blocks", "")?, "/blocks")?;
    let mut tables = Vec::with_capacity(blocks.len());
    for (bi, block) in blocks.iter().enumerate() {
        let bpath = format!("/blocks/{bi}");
        let bobj = as_obj(block, &bpath)?;
        let lambda = partition_from_json(field(bobj, "lambda", &bpath)?, &format!("{bpath}/lambda"))?;
        let basis_v = as_arr(field(bobj, "basis", &bpath)?, &format!("{bpath}/basis"))?;
        let basis = basis_v
            .iter()
            .enumerate()
            .map(|(i, t)| tableau_from_json(t, &format!("{bpath}/basis/{i}")))
            .collect::<Result<Vec<_>>>()?;
        let entries_v = as_arr(field(bobj, "entries", &bpath)?, &format!("{bpath}/entries"))?;
        let mut entries = BTreeMap::new();
        for (ei, e) in entries_v.iter().enumerate() {
            let epath = format!("{bpath}/entries/{ei}");
            let eobj = as_obj(e, &epath)?;
            let d = profile_from_json(field(eobj, "profile", &epath)?, &format!("{epath}/profile"))?;
            let m = mat_from_json(field(eobj, "matrix", &epath)?, &format!("{epath}/matrix"))?;
            entries.insert(d, m);
        }
        tables.push(InnerProductTable::from_parts(lambda, basis, entries));
    }
    Ok((n, p, tables))
}

pub fn base_to_json(base: &BaseAlgebra) -> Value {
    json!({
        "format_version": FORMAT_VERSION,
        "kind": "base-algebra",
        "m": base.m(),
        "basis": Value::Array(base.basis().iter().map(mat_to_json).collect()),
        "factors": Value::Array(
            base.factors()
                .iter()
                .map(|f| {
                    json!({
                        "size": f.size,
                        "images": Value::Array(f.images.iter().map(mat_to_json).collect()),
                    })
                })
                .collect()
        ),
    })
}

pub fn base_from_json(v: &Value) -> Result<BaseAlgebra> {
    let obj = as_obj(v, "")?;
    check_version(obj, "base-algebra", "")?;
    let m = as_u64(field(obj, "m", "")?, "/m")? as usize;
    if m == 0 {
        return Err(jerr("/m", "base matrices need positive size"));
    }
    let basis_v = as_arr(field(obj, "basis", "")?, "/basis")?;
    if basis_v.is_empty() {
        return Err(jerr("/basis", "need at least one basis matrix"));
    }
    let mut basis = Vec::with_capacity(basis_v.len());
    for (i, bv) in basis_v.iter().enumerate() {
        let path = format!("/basis/{i}");
        let mat = mat_from_json(bv, &path)?;
        if mat.nrows() != m || mat.ncols() != m {
            return Err(jerr(&path, format!("expected {m}x{m} matrix")));
        }
        basis.push(mat);
    }
    let s = basis.len();
    let factors_v = as_arr(field(obj, "factors", "")?, "/factors")?;
    if factors_v.is_empty() {
        return Err(jerr("/factors", "need at least one factor"));
    }
    let mut factors = Vec::with_capacity(factors_v.len());
    for (fi, fv) in factors_v.iter().enumerate() {
        let fpath = format!("/factors/{fi}");
        let fobj = as_obj(fv, &fpath)?;
        let size = as_u64(field(fobj, "size", &fpath)?, &format!("{fpath}/size"))? as usize;
        if size == 0 {
            return Err(jerr(&format!("{fpath}/size"), "factor size must be positive"));
        }
        let images_v = as_arr(field(fobj, "images", &fpath)?, &format!("{fpath}/images"))?;
        if images_v.len() != s {
            return Err(jerr(
                &format!("{fpath}/images"),
                format!("expected one image per basis matrix ({s})"),
            ));
        }
        let mut images = Vec::with_capacity(s);
        for (i, iv) in images_v.iter().enumerate() {
            let ipath = format!("{fpath}/images/{i}");
            let mat = mat_from_json(iv, &ipath)?;
            if mat.nrows() != size || mat.ncols() != size {
                return Err(jerr(&ipath, format!("expected {size}x{size} matrix")));
            }
            images.push(mat);
        }
        factors.push(FactorMap { size, images });
    }
    Ok(BaseAlgebra::new(basis, factors))
}

pub fn load_base_algebra(path: &Path) -> Result<BaseAlgebra> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text)?;
    base_from_json(&v)
}

pub fn dump_base_algebra(base: &BaseAlgebra, path: &Path) -> Result<()> {
    write_atomic(path, to_pretty_bytes(&base_to_json(base))?.as_slice())
}

/// The transported coefficients of every generalized basis element, plus the
/// sector and block layout shared by all of them.
pub fn dump_general_transport(base: &BaseAlgebra, n: u32) -> Result<Value> {
    let identity = crate::general::general_identity(base, n)?;
    let composed = crate::general::compose_blockdiag(&identity, base)?;
    let layout: Vec<Value> = composed
        .sectors
        .iter()
        .map(|sector| {
            json!({
                "mu": sector.mu.clone(),
                "blocks": Value::Array(
                    sector
                        .tuples
                        .iter()
                        .map(|(lambdas, mat)| {
                            json!({
                                "lambdas": Value::Array(
                                    lambdas.iter().map(partition_to_json).collect()
                                ),
                                "size": mat.nrows(),
                            })
                        })
                        .collect()
                ),
            })
        })
        .collect();
    let mut elements = Vec::new();
    for nu in enum_compositions(n, base.s()) {
        let elem = GeneralElement::basis(nu.clone(), n);
        let ys = crate::general::y_coefficients(&elem, base)?;
        let sectors: Vec<Value> = ys
            .iter()
            .map(|(sp, y)| {
                json!({
                    "mu": sp.mu.clone(),
                    "profiles": Value::Array(sp.parts.iter().map(profile_to_json).collect()),
                    "y": scalar_to_json(y),
                })
            })
            .collect();
        elements.push(json!({ "nu": nu, "sectors": Value::Array(sectors) }));
    }
    Ok(json!({
        "format_version": FORMAT_VERSION,
        "kind": "blockdiag-general",
        "n": n,
        "base_size": base.m(),
        "basis_count": base.s(),
        "factor_sizes": base.factor_sizes(),
        "layout": Value::Array(layout),
        "elements": Value::Array(elements),
    }))
}

/// Closed-form binary output; entries carry both the exact coefficient and
/// its orthonormalized value.
pub fn dump_binary_blockdiag(bd: &BinaryBlockDiag) -> Value {
    let entries: Vec<Value> = bd
        .entries()
        .iter()
        .map(|(idx, blocks)| {
            json!({
                "i": idx.i,
                "j": idx.j,
                "t": idx.t,
                "blocks": Value::Array(
                    blocks
                        .iter()
                        .map(|b| {
                            json!({
                                "k": b.k,
                                "row": b.row,
                                "col": b.col,
                                "beta": rational_to_string(&b.beta),
                                "normalized": b.normalized,
                            })
                        })
                        .collect()
                ),
            })
        })
        .collect();
    json!({
        "format_version": FORMAT_VERSION,
        "kind": "terwilliger-binary",
        "n": bd.n(),
        "block_sizes": (0..=(bd.n() as usize / 2)).map(|k| bd.block_size(k)).collect::<Vec<_>>(),
        "normalization": "entry (j-k, i-k) of block k is \
            binom(n-2k,i-k)^{-1/2} binom(n-2k,j-k)^{-1/2} beta; the squared norm of basis \
            vector (k,i) is 2^k binom(n-2k,i-k), and the 2^k factor cancels between the two \
            normalizing factors",
        "entries": Value::Array(entries),
    })
}

pub fn dump_nonbinary(q: u32, n: u32) -> Result<Value> {
    let mut elements = Vec::new();
    for nu in enum_compositions(n, 5) {
        let sectors = crate::terwilliger::nonbinary_psi(&nu, n, q)?;
        elements.push(json!({
            "nu": nu,
            "sectors": Value::Array(
                sectors
                    .iter()
                    .map(|s| {
                        json!({
                            "w": s.w,
                            "profile": profile_to_json(&s.profile),
                            "coeff": scalar_to_json(&s.coeff),
                        })
                    })
                    .collect()
            ),
        }));
    }
    Ok(json!({
        "format_version": FORMAT_VERSION,
        "kind": "terwilliger-nonbinary",
        "q": q,
        "n": n,
        "radicand": q as u64 - 1,
        "elements": Value::Array(elements),
    }))
}

pub fn dump_beta_json(n: u32, schrijver: bool) -> Result<Value> {
    let mut rows = Vec::new();
    for idx in BinaryIndex::all(n) {
        let BinaryIndex { i, j, t } = idx;
        for k in 0..=(n as usize / 2) {
            if k > i || k > j || i > n as usize - k || j > n as usize - k {
                continue;
            }
            let value = if schrijver {
                crate::terwilliger::binary_beta_schrijver(i, j, k, t, n)?
            } else {
                crate::terwilliger::binary_beta(i, j, k, t, n)?
            };
            rows.push(json!({
                "i": i, "j": j, "t": t, "k": k,
                "beta": rational_to_string(&value),
            }));
        }
    }
    Ok(json!({
        "format_version": FORMAT_VERSION,
        "kind": "beta-table",
        "n": n,
        "formula": if schrijver { "schrijver" } else { "direct" },
        "rows": Value::Array(rows),
    }))
}

pub fn beta_csv(n: u32, schrijver: bool) -> Result<String> {
    let mut out = String::from("i,j,t,k,beta\n");
    for idx in BinaryIndex::all(n) {
        let BinaryIndex { i, j, t } = idx;
        for k in 0..=(n as usize / 2) {
            if k > i || k > j || i > n as usize - k || j > n as usize - k {
                continue;
            }
            let value = if schrijver {
                crate::terwilliger::binary_beta_schrijver(i, j, k, t, n)?
            } else {
                crate::terwilliger::binary_beta(i, j, k, t, n)?
            };
            out.push_str(&format!("{i},{j},{t},{k},{}\n", rational_to_string(&value)));
        }
    }
    Ok(out)
}

pub fn to_pretty_bytes(v: &Value) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(v)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::Io(e)
    })
}

pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os("SYMTENSOR_CACHE_DIR").map(PathBuf::from)
}

fn cache_file(dir: &Path, n: u32, p: usize) -> PathBuf {
    dir.join(format!("tables-p{p}-n{n}-v{FORMAT_VERSION}.json"))
}

/// Returns the diagonalizer for (n, p), reading and writing the file cache
/// under `dir` when given. A cache file that fails to parse or does not match
/// the requested degree is ignored and rewritten.
pub fn diagonalizer_cached(
    n: u32,
    p: usize,
    dir: Option<&Path>,
) -> Result<Arc<BlockDiagonalizer>> {
    let Some(dir) = dir else {
        return BlockDiagonalizer::get(n, p);
    };
    let file = cache_file(dir, n, p);
    if let Ok(text) = std::fs::read_to_string(&file) {
        if let Ok(v) = serde_json::from_str::<Value>(&text) {
            if let Ok((fn_, fp, tables)) = tables_from_json(&v) {
                if (fn_, fp) == (n, p) {
                    if let Ok(bd) = BlockDiagonalizer::from_tables(n, p, tables) {
                        return Ok(Arc::new(bd));
                    }
                }
            }
        }
    }
    let bd = BlockDiagonalizer::get(n, p)?;
    write_atomic(&file, to_pretty_bytes(&dump_full_tables(&bd, false))?.as_slice())?;
    Ok(bd)
}

/// Constraint relations of a program; for export they constrain the sign of
/// the matching variable.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl Relation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }

    fn parse(s: &str, path: &str) -> Result<Relation> {
        match s {
            "=" | "==" => Ok(Relation::Eq),
            "<=" => Ok(Relation::Le),
            ">=" => Ok(Relation::Ge),
            _ => Err(jerr(path, format!("unknown relation \"{s}\""))),
        }
    }
}

#[derive(Clone, Debug)]
pub enum ProgramAlgebra {
    Full { n: u32, p: usize },
    General { base: PathBuf },
}

#[derive(Clone, Debug)]
pub enum ProgramElement {
    Full(AlgebraElement),
    General(GeneralElement),
}

#[derive(Clone, Debug)]
pub struct SdpConstraint {
    pub element: ProgramElement,
    pub relation: Relation,
    pub rhs: BigRational,
}

/// A linear program over the coefficients of an invariant element, with the
/// element itself required positive semidefinite. The exporter realizes it
/// blockwise through the exact reduction.
#[derive(Clone, Debug)]
pub struct SdpProgram {
    pub algebra: ProgramAlgebra,
    pub objective: ProgramElement,
    pub constraints: Vec<SdpConstraint>,
}

fn full_element_from_json(v: &Value, n: u32, p: usize, path: &str) -> Result<ProgramElement> {
    let obj = as_obj(v, path)?;
    let terms = as_arr(field(obj, "terms", path)?, &format!("{path}/terms"))?;
    let mut elem = AlgebraElement::zero(n, p);
    for (i, term) in terms.iter().enumerate() {
        let tpath = format!("{path}/terms/{i}");
        let tobj = as_obj(term, &tpath)?;
        let d = profile_from_json(field(tobj, "profile", &tpath)?, &format!("{tpath}/profile"))?;
        if d.p() != p || d.n() != n {
            return Err(jerr(
                &format!("{tpath}/profile"),
                format!("profile must be {p}x{p} with entries summing to {n}"),
            ));
        }
        let c = scalar_from_json(field(tobj, "coeff", &tpath)?, &format!("{tpath}/coeff"))?;
        elem.add_term(d, c);
    }
    // Real-symmetric programs: the coefficient map must be invariant under
    // profile transposition, else the block images cannot be symmetric.
    for (d, c) in elem.terms() {
        if elem.coeff(&d.transpose()) != *c {
            return Err(jerr(
                &format!("{path}/terms"),
                format!("coefficient at {d} differs from its transposed profile"),
            ));
        }
    }
    Ok(ProgramElement::Full(elem))
}

fn general_element_from_json(v: &Value, n: u32, s: usize, path: &str) -> Result<ProgramElement> {
    let obj = as_obj(v, path)?;
    let terms = as_arr(field(obj, "terms", path)?, &format!("{path}/terms"))?;
    let mut elem = GeneralElement::zero(n, s);
    for (i, term) in terms.iter().enumerate() {
        let tpath = format!("{path}/terms/{i}");
        let tobj = as_obj(term, &tpath)?;
        let nu_v = as_arr(field(tobj, "nu", &tpath)?, &format!("{tpath}/nu"))?;
        let mut nu = Vec::with_capacity(nu_v.len());
        for (k, x) in nu_v.iter().enumerate() {
            nu.push(as_u64(x, &format!("{tpath}/nu/{k}"))? as u32);
        }
        if nu.len() != s || nu.iter().sum::<u32>() != n {
            return Err(jerr(
                &format!("{tpath}/nu"),
                format!("need {s} entries summing to {n}"),
            ));
        }
        let c = scalar_from_json(field(tobj, "coeff", &tpath)?, &format!("{tpath}/coeff"))?;
        elem.add_term(nu, c);
    }
    Ok(ProgramElement::General(elem))
}

/// Loads a program file; a generalized program also loads its base algebra,
/// resolving a relative path against the program file's directory.
pub fn load_sdp_program(path: &Path) -> Result<(SdpProgram, Option<BaseAlgebra>)> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text)?;
    let obj = as_obj(&v, "")?;
    check_version(obj, "sdp-program", "")?;
    let alg_v = field(obj, "algebra", "")?;
    let alg_obj = as_obj(alg_v, "/algebra")?;
    let kind = as_str(field(alg_obj, "type", "/algebra")?, "/algebra/type")?;
    let n = as_u64(field(alg_obj, "n", "/algebra")?, "/algebra/n")? as u32;
    let (algebra, base, parse): (
        ProgramAlgebra,
        Option<BaseAlgebra>,
        Box<dyn Fn(&Value, &str) -> Result<ProgramElement>>,
    ) = match kind {
        "full" => {
            let p = as_u64(field(alg_obj, "p", "/algebra")?, "/algebra/p")? as usize;
            if p == 0 {
                return Err(jerr("/algebra/p", "need at least one symbol"));
            }
            (
                ProgramAlgebra::Full { n, p },
                None,
                Box::new(move |v, path| full_element_from_json(v, n, p, path)),
            )
        }
        "general" => {
            let rel = as_str(field(alg_obj, "base", "/algebra")?, "/algebra/base")?;
            let base_path = {
                let candidate = PathBuf::from(rel);
                if candidate.is_absolute() {
                    candidate
                } else {
                    path.parent().unwrap_or(Path::new(".")).join(candidate)
                }
            };
            let base = load_base_algebra(&base_path)?;
            let s = base.s();
            (
                ProgramAlgebra::General { base: base_path },
                Some(base),
                Box::new(move |v, path| general_element_from_json(v, n, s, path)),
            )
        }
        other => {
            return Err(jerr("/algebra/type", format!("unknown algebra type \"{other}\"")));
        }
    };
    let objective = parse(field(obj, "objective", "")?, "/objective")?;
    let cons_v = as_arr(field(obj, "constraints", "")?, "/constraints")?;
    let mut constraints = Vec::with_capacity(cons_v.len());
    for (i, cv) in cons_v.iter().enumerate() {
        let cpath = format!("/constraints/{i}");
        let cobj = as_obj(cv, &cpath)?;
        let element = parse(cv, &cpath)?;
        let relation = Relation::parse(
            as_str(field(cobj, "relation", &cpath)?, &format!("{cpath}/relation"))?,
            &format!("{cpath}/relation"),
        )?;
        let rhs = rational_from_str(
            as_str(field(cobj, "rhs", &cpath)?, &format!("{cpath}/rhs"))?,
            &format!("{cpath}/rhs"),
        )?;
        constraints.push(SdpConstraint { element, relation, rhs });
    }
    Ok((SdpProgram { algebra, objective, constraints }, base))
}
