//! Cross-checks between the coefficient-transport pipeline, the closed-form
//! tables, and literal dense tensor arithmetic.

mod common;

use common::{dense_general, dense_to_general};
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symtensor::algebra::{dense, AlgebraElement};
use symtensor::blockdiag::BlockDiagonalizer;
use symtensor::combinatorics::{enum_compositions, enum_profiles};
use symtensor::general::{
    compose_blockdiag, full_matrix_base, general_identity, BaseAlgebra, GeneralElement,
};
use symtensor::linalg::{max_abs, Mat};
use symtensor::scalar::Scalar;
use symtensor::terwilliger::{nonbinary_base, BinaryBlockDiag, BinaryIndex};

fn orthonormal_blocks(e: &GeneralElement, base: &BaseAlgebra) -> Vec<DMatrix<f64>> {
    compose_blockdiag(e, base)
        .expect("composition")
        .orthonormal(base)
        .expect("orthonormalization")
}

/// Elements used for the multiplicativity sweep: the identity, every basis
/// element at small degree, and a few seeded integer combinations.
fn sample_elements(base: &BaseAlgebra, n: u32) -> Vec<GeneralElement> {
    let mut out = vec![general_identity(base, n).expect("identity")];
    let compositions = enum_compositions(n, base.s());
    if n <= 2 {
        for nu in &compositions {
            out.push(GeneralElement::basis(nu.clone(), n));
        }
    } else {
        for nu in compositions.iter().step_by(5) {
            out.push(GeneralElement::basis(nu.clone(), n));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..4 {
            let mut e = GeneralElement::zero(n, base.s());
            for nu in &compositions {
                let c = rng.random_range(-2..=2i64);
                if c != 0 {
                    e.add_term(nu.clone(), Scalar::from_int(c));
                }
            }
            out.push(e);
        }
    }
    out
}

#[test]
fn nonbinary_pipeline_is_multiplicative_against_dense_products() {
    let base = nonbinary_base(3).unwrap();
    for n in 1..=3u32 {
        let elements = sample_elements(&base, n);
        let dense_mats: Vec<Mat> = elements.iter().map(|e| dense_general(&base, e)).collect();
        let images: Vec<Vec<DMatrix<f64>>> = elements
            .iter()
            .map(|e| orthonormal_blocks(e, &base))
            .collect();
        for ia in 0..elements.len() {
            for ib in 0..elements.len() {
                let product_dense = dense_mats[ia].matmul(&dense_mats[ib]);
                let product = dense_to_general(&base, &product_dense, n);
                let got = orthonormal_blocks(&product, &base);
                for (blk, (g, (pa, pb))) in got
                    .iter()
                    .zip(images[ia].iter().zip(images[ib].iter()))
                    .enumerate()
                {
                    let err = max_abs(&(g - pa * pb));
                    assert!(
                        err <= 1e-8,
                        "n={n} elements {ia}x{ib} block {blk}: image of the product is off by \
                         {err:.3e}"
                    );
                }
            }
        }
    }
}

#[test]
fn binary_closed_form_matches_generic_blocks_numerically() {
    for n in 5..=6u32 {
        let closed = BinaryBlockDiag::new(n);
        let bd = BlockDiagonalizer::get(n, 2).unwrap();
        for idx in BinaryIndex::all(n) {
            let BinaryIndex { i, j, t } = idx;
            let d = symtensor::terwilliger::binary_profile(i, j, t, n).unwrap();
            let generic = bd.apply_orthonormal(&AlgebraElement::basis(d));
            let formula = closed.numeric_blocks(&idx);
            assert_eq!(generic.len(), formula.len());
            for (k, (g, f)) in generic.iter().zip(&formula).enumerate() {
                let err = max_abs(&(g - f));
                assert!(
                    err <= 1e-9,
                    "n={n} (i,j,t)=({i},{j},{t}) block {k}: closed form deviates by {err:.3e}"
                );
            }
        }
    }
}

#[test]
fn three_symbol_composition_matches_direct_diagonalization() {
    let p = 3;
    let n = 2u32;
    let base = full_matrix_base(p);
    let bd = BlockDiagonalizer::get(n, p).unwrap();
    for d in enum_profiles(n, p) {
        let direct = bd.apply_exact(&AlgebraElement::basis(d.clone()));
        let composed =
            compose_blockdiag(&GeneralElement::basis(d.entries().to_vec(), n), &base).unwrap();
        assert_eq!(composed.sectors.len(), 1);
        let tuples = &composed.sectors[0].tuples;
        assert_eq!(tuples.len(), direct.len());
        for (idx, (lambdas, block)) in tuples.iter().enumerate() {
            assert_eq!(&lambdas[0], &bd.lambdas()[idx]);
            assert_eq!(block, &direct[idx], "composed block differs at {d}");
        }
    }
}

#[test]
fn dense_general_oracle_agrees_with_word_level_basis_matrices() {
    let (n, p, cap) = (3u32, 2usize, 4096);
    let base = full_matrix_base(p);
    for d in enum_profiles(n, p) {
        let from_words = dense::basis_matrix(&d, cap).unwrap();
        let from_tensor = dense_general(&base, &GeneralElement::basis(d.entries().to_vec(), n));
        let dim = from_words.len();
        assert_eq!(from_tensor.nrows(), dim);
        for r in 0..dim {
            for c in 0..dim {
                assert_eq!(
                    from_tensor.get(r, c),
                    &Scalar::from_int(from_words[r][c]),
                    "entry ({r},{c}) differs at {d}"
                );
            }
        }
    }
}

#[test]
fn dense_to_general_round_trips() {
    let base = nonbinary_base(4).unwrap();
    let n = 2u32;
    for nu in enum_compositions(n, base.s()) {
        let e = GeneralElement::basis(nu.clone(), n);
        let back = dense_to_general(&base, &dense_general(&base, &e), n);
        assert_eq!(back, e, "round trip changed the element at {nu:?}");
    }
}
