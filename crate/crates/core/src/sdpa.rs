//! SDPA sparse-format export of block-reduced programs.
//!
//! The emitted file encodes: minimize sum_k rhs_k x_k subject to
//! sum_k x_k Psi(C_k) - Psi(objective) psd, where Psi is the exact block
//! image, one SDPA block per reduced block. A ">=" constraint additionally
//! forces x_k >= 0 and a "<=" constraint x_k <= 0, realized as a trailing
//! diagonal slack block; "=" rows leave x_k free. Output bytes depend only
//! on the program and the block data.

use crate::blockdiag::BlockDiagonalizer;
use crate::error::{Error, Result};
use crate::general::{compose_blockdiag, BaseAlgebra};
use crate::io::{ProgramAlgebra, ProgramElement, Relation, SdpProgram};
use crate::linalg::Mat;
use crate::scalar::Scalar;
use num::BigRational;
use std::io::Write;

/// Materialized export data: identical block structure across the objective
/// and every constraint.
pub struct SdpaData {
    pub block_sizes: Vec<usize>,
    pub objective: Vec<Mat>,
    pub constraints: Vec<(Vec<Mat>, Relation, BigRational)>,
}

fn element_blocks(
    element: &ProgramElement,
    algebra: &ProgramAlgebra,
    base: Option<&BaseAlgebra>,
) -> Result<Vec<Mat>> {
    match (element, algebra) {
        (ProgramElement::Full(elem), ProgramAlgebra::Full { n, p }) => {
            if (elem.n(), elem.p()) != (*n, *p) {
                return Err(Error::BadInput("element does not match program algebra".into()));
            }
            let bd = BlockDiagonalizer::get(*n, *p)?;
            Ok(bd.apply_exact(elem))
        }
        (ProgramElement::General(elem), ProgramAlgebra::General { .. }) => {
            let base = base.ok_or_else(|| {
                Error::BadInput("generalized program export needs its base algebra".into())
            })?;
            let composed = compose_blockdiag(elem, base)?;
            Ok(composed
                .sectors
                .into_iter()
                .flat_map(|s| s.tuples.into_iter().map(|(_, m)| m))
                .collect())
        }
        _ => Err(Error::BadInput("element kind does not match program algebra".into())),
    }
}

fn check_symmetric(blocks: &[Mat], what: &str) -> Result<()> {
    for (i, b) in blocks.iter().enumerate() {
        if !b.is_symmetric() {
            return Err(Error::BadInput(format!(
                "{what}: block {i} is not symmetric; the program must be invariant under \
                 taking adjoints"
            )));
        }
    }
    Ok(())
}

/// Runs the reduction on the objective and all constraint elements.
pub fn prepare_sdpa(program: &SdpProgram, base: Option<&BaseAlgebra>) -> Result<SdpaData> {
    let objective = element_blocks(&program.objective, &program.algebra, base)?;
    check_symmetric(&objective, "objective")?;
    let block_sizes: Vec<usize> = objective.iter().map(|m| m.nrows()).collect();
    let mut constraints = Vec::with_capacity(program.constraints.len());
    for (k, c) in program.constraints.iter().enumerate() {
        let blocks = element_blocks(&c.element, &program.algebra, base)?;
        check_symmetric(&blocks, &format!("constraint {k}"))?;
        let sizes: Vec<usize> = blocks.iter().map(|m| m.nrows()).collect();
        if sizes != block_sizes {
            return Err(Error::BadInput(format!(
                "constraint {k}: block sizes {sizes:?} differ from the objective's \
                 {block_sizes:?}"
            )));
        }
        constraints.push((blocks, c.relation, c.rhs.clone()));
    }
    Ok(SdpaData { block_sizes, objective, constraints })
}

fn fmt_value(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_block_entries(
    out: &mut dyn Write,
    matno: usize,
    blocks: &[Mat],
) -> std::io::Result<()> {
    for (b, mat) in blocks.iter().enumerate() {
        for i in 0..mat.nrows() {
            for j in i..mat.ncols() {
                let v = mat.get(i, j);
                if v.is_zero() {
                    continue;
                }
                writeln!(
                    out,
                    "{matno} {} {} {} {}",
                    b + 1,
                    i + 1,
                    j + 1,
                    fmt_value(v.to_f64())
                )?;
            }
        }
    }
    Ok(())
}

/// Writes the sparse file. Entries are upper-triangular, indices 1-based,
/// values printed with 17 significant digits.
pub fn write_sdpa(data: &SdpaData, out: &mut dyn Write) -> Result<()> {
    let m = data.constraints.len();
    let slack_slots: Vec<Option<usize>> = {
        let mut next = 0usize;
        data.constraints
            .iter()
            .map(|(_, rel, _)| match rel {
                Relation::Eq => None,
                Relation::Le | Relation::Ge => {
                    next += 1;
                    Some(next)
                }
            })
            .collect()
    };
    let num_slack = slack_slots.iter().flatten().count();
    writeln!(
        out,
        "* minimize sum rhs_k x_k with sum x_k Psi(C_k) - Psi(objective) psd; \
         inequality rows bound the sign of x_k via the trailing diagonal block"
    )?;
    writeln!(out, "{m}")?;
    let nblocks = data.block_sizes.len() + usize::from(num_slack > 0);
    writeln!(out, "{nblocks}")?;
    let mut struct_parts: Vec<String> = data.block_sizes.iter().map(|s| s.to_string()).collect();
    if num_slack > 0 {
        struct_parts.push(format!("-{num_slack}"));
    }
    writeln!(out, "{}", struct_parts.join(" "))?;
    let rhs_line: Vec<String> = data
        .constraints
        .iter()
        .map(|(_, _, rhs)| fmt_value(Scalar::from_rational(rhs.clone()).to_f64()))
        .collect();
    writeln!(out, "{}", rhs_line.join(" "))?;
    write_block_entries(out, 0, &data.objective)?;
    let slack_block = data.block_sizes.len() + 1;
    for (k, (blocks, rel, _)) in data.constraints.iter().enumerate() {
        write_block_entries(out, k + 1, blocks)?;
        if let Some(slot) = slack_slots[k] {
            let sign = match rel {
                Relation::Ge => 1.0,
                Relation::Le => -1.0,
                Relation::Eq => unreachable!("equality rows have no slack slot"),
            };
            writeln!(
                out,
                "{} {slack_block} {slot} {slot} {}",
                k + 1,
                fmt_value(sign)
            )?;
        }
    }
    Ok(())
}

/// Convenience wrapper: reduce and serialize in one step.
pub fn export_sdpa(
    program: &SdpProgram,
    base: Option<&BaseAlgebra>,
    out: &mut dyn Write,
) -> Result<()> {
    let data = prepare_sdpa(program, base)?;
    write_sdpa(&data, out)
}
