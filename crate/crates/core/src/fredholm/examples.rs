//! Bundled and randomly generated modules used by tests, the acceptance
//! suite and the command-line data files.

use std::collections::BTreeMap;

use rand::{Rng, RngCore};

use super::{identity, CMatrix, EvenFredholmModule, LinearPath, OddFredholmModule, C64};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Entries with real and imaginary parts uniform in `[-1, 1]`.
pub fn random_matrix(rng: &mut dyn RngCore, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
    })
}

pub fn random_hermitian(rng: &mut dyn RngCore, n: usize) -> CMatrix {
    let a = random_matrix(rng, n, n);
    (&a + a.adjoint()) * c(0.5)
}

/// The `Q` factor of a random matrix.
pub fn random_unitary(rng: &mut dyn RngCore, n: usize) -> CMatrix {
    random_matrix(rng, n, n).qr().q()
}

/// Even and odd parts `(x + γxγ)/2`, `(x - γxγ)/2`.
pub fn split_parity(x: &CMatrix, gamma: &CMatrix) -> (CMatrix, CMatrix) {
    let conj = gamma * x * gamma;
    ((x + &conj) * c(0.5), (x - &conj) * c(0.5))
}

/// `H⁺ = ℂ²`, `H⁻ = ℂ¹`, `B = (1, 0)ᵀ`, algebra `{p = Id}`. Index 1.
pub fn index_one_module() -> EvenFredholmModule {
    let mut block = CMatrix::zeros(2, 1);
    block[(0, 0)] = c(1.0);
    let alg = BTreeMap::from([("p".to_string(), identity(3))]);
    EvenFredholmModule::from_block(&block, alg, 0.5).expect("valid bundled module")
}

/// `D = 0` on `ℂ^{1|1}` with `p = diag(1, 0)`. Index 1.
pub fn trivial_dirac_module() -> EvenFredholmModule {
    let mut p = CMatrix::zeros(2, 2);
    p[(0, 0)] = c(1.0);
    let alg = BTreeMap::from([("p".to_string(), p)]);
    EvenFredholmModule::from_block(&CMatrix::zeros(1, 1), alg, 0.5).expect("valid bundled module")
}

/// `D = antidiag(b, b)` on `ℂ^{1|1}` with `p = Id`. Index 0.
pub fn balanced_module(b: f64) -> EvenFredholmModule {
    let block = CMatrix::from_element(1, 1, c(b));
    let alg = BTreeMap::from([("p".to_string(), identity(2))]);
    EvenFredholmModule::from_block(&block, alg, 0.5).expect("valid bundled module")
}

/// A random odd Dirac operator on `ℂ^{dp|dm}` with a random even element
/// `a` (which does not commute with `D`).
pub fn random_even_module(rng: &mut dyn RngCore, dp: usize, dm: usize) -> EvenFredholmModule {
    let block = random_matrix(rng, dp, dm);
    let mut a = CMatrix::zeros(dp + dm, dp + dm);
    a.view_mut((0, 0), (dp, dp)).copy_from(&random_matrix(rng, dp, dp));
    a.view_mut((dp, dp), (dm, dm)).copy_from(&random_matrix(rng, dm, dm));
    let alg = BTreeMap::from([("a".to_string(), a)]);
    EvenFredholmModule::from_block(&block, alg, 0.5).expect("random module is valid")
}

/// A module on `ℂ^{3|3}` with an even self-adjoint idempotent `p` commuting
/// with `D`, of index `+1`.
///
/// `D` is block diagonal for `ℂ^{3|3} = ℂ^{2|1} ⊕ ℂ^{1|2}` with random
/// blocks, `p` projects on the first summand, and both are conjugated by a
/// random even unitary so that neither is diagonal.
pub fn random_commuting_projection(rng: &mut dyn RngCore) -> EvenFredholmModule {
    let b1 = random_matrix(rng, 2, 1);
    let b2 = random_matrix(rng, 1, 2);
    // H⁺ = (e0, e1 | e2), H⁻ = (f0 | f1, f2); ordering H⁺ then H⁻.
    let mut block = CMatrix::zeros(3, 3);
    block.view_mut((0, 0), (2, 1)).copy_from(&b1);
    block.view_mut((2, 1), (1, 2)).copy_from(&b2);
    let mut p = CMatrix::zeros(6, 6);
    for i in [0, 1, 3] {
        p[(i, i)] = c(1.0);
    }
    let mut u = CMatrix::zeros(6, 6);
    u.view_mut((0, 0), (3, 3)).copy_from(&random_unitary(rng, 3));
    u.view_mut((3, 3), (3, 3)).copy_from(&random_unitary(rng, 3));
    let mut d = CMatrix::zeros(6, 6);
    d.view_mut((0, 3), (3, 3)).copy_from(&block);
    d.view_mut((3, 0), (3, 3)).copy_from(&block.adjoint());
    let ud = &u * d * u.adjoint();
    let d = (&ud + ud.adjoint()) * c(0.5);
    let up = &u * p * u.adjoint();
    let p = (&up + up.adjoint()) * c(0.5);
    let alg = BTreeMap::from([("p".to_string(), p)]);
    // Conjugation by an even unitary keeps the block pattern up to
    // rounding; clear the stray entries.
    let d = zero_blocks(d, 3, false);
    let alg = alg
        .into_iter()
        .map(|(k, v)| (k, zero_blocks(v, 3, true)))
        .collect();
    EvenFredholmModule::new(3, 3, d, alg, 0.5).expect("random module is valid")
}

fn zero_blocks(mut a: CMatrix, dim_plus: usize, keep_diagonal: bool) -> CMatrix {
    let n = a.nrows();
    for i in 0..n {
        for j in 0..n {
            if ((i < dim_plus) == (j < dim_plus)) != keep_diagonal {
                a[(i, j)] = C64::ZERO;
            }
        }
    }
    a
}

/// The linear path `diag(-1, 2) → diag(1, 2)`, spectral flow `+1`.
pub fn generic_test_path() -> LinearPath {
    let start = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(-1.0), c(2.0)]));
    let end = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(2.0)]));
    LinearPath::new(start, end).expect("Hermitian endpoints")
}

/// Random invertible `D` and random unitary `g` on `ℂⁿ`.
pub fn random_odd_module(rng: &mut dyn RngCore, n: usize) -> OddFredholmModule {
    let d = random_hermitian(rng, n);
    let g = random_unitary(rng, n);
    OddFredholmModule::new(d, g).expect("random module is valid")
}

/// `D = diag(-1, 2, 3)` with the diagonal unitary `g = diag(i, -1, 1)`,
/// which commutes with `D`.
pub fn commuting_odd_module() -> OddFredholmModule {
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(-1.0), c(2.0), c(3.0)]));
    let g = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        C64::new(0.0, 1.0),
        c(-1.0),
        c(1.0),
    ]));
    OddFredholmModule::new(d, g).expect("valid bundled module")
}
