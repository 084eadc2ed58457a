//! Finite-dimensional theta-summable Fredholm modules.
//!
//! Operators are dense complex matrices. Every module caches the
//! eigendecomposition of its Dirac operator, so heat kernels
//! `e(t) = e^{-tD²}` are evaluated by scaling eigenvectors and `e(0)` is
//! the identity exactly.

mod even;
pub mod examples;
mod jlo;
mod odd;
mod pairing;
mod spectrum;

pub use even::EvenFredholmModule;
pub use jlo::{
    chern_component, jlo_bracket, jlo_exact, jlo_quadrature, simplex_exp_integral,
    simplex_volume, JloMode, JloValue, QuadratureMethod, QuadratureSpec,
};
pub use odd::{
    erf_path_oracle, negative_count_difference, odd_index_constant, pair_odd_k1, spectral_flow_crossings,
    spectral_flow_integral, Crossing, LinearPath, OddConstant, OddFredholmModule, OddPairing,
    OddPairingTerm, SpectralFlow, SpectralFlowIntegral,
};
pub use pairing::{
    even_index_cochain_pairing, even_index_series, mckean_singer_index, pair_even_k0,
    EvenIndexReport, EvenIndexTerm, K0Pairing, K0Term, McKeanSinger, MCKEAN_SINGER_TIMES,
};
pub use spectrum::Spectrum;

pub(crate) use odd::pair;
pub(crate) use pairing::even_pairing_factor;

use nalgebra::DMatrix;
use num::Complex;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Which trace closes a product of operators: the supertrace `Str` of a
/// graded module or the plain trace `Tr`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Even,
    Odd,
}

/// Common interface of even and odd modules.
pub trait HeatModule {
    fn dim(&self) -> usize;
    fn dirac(&self) -> &CMatrix;
    fn spectrum(&self) -> &Spectrum;
    /// Diagonal of the grading operator, if the module is graded.
    fn grading(&self) -> Option<&[f64]>;

    /// `γ`, or the identity for an ungraded module.
    fn gamma_matrix(&self) -> CMatrix {
        match self.grading() {
            Some(g) => CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                g.len(),
                g.iter().map(|x| C64::new(*x, 0.0)),
            )),
            None => identity(self.dim()),
        }
    }

    fn heat(&self, t: f64) -> Result<CMatrix> {
        self.spectrum().heat(t)
    }

    /// `Str` for graded modules, `Tr` otherwise.
    fn default_flavor(&self) -> Flavor {
        if self.grading().is_some() {
            Flavor::Even
        } else {
            Flavor::Odd
        }
    }

    fn closing_trace(&self, a: &CMatrix, flavor: Flavor) -> Result<C64> {
        check_square(a, self.dim())?;
        match (flavor, self.grading()) {
            (Flavor::Odd, _) => Ok(a.trace()),
            (Flavor::Even, Some(g)) => Ok(graded_trace(g, a)),
            (Flavor::Even, None) => Err(Error::InvalidInput(
                "supertrace requested on an ungraded module".into(),
            )),
        }
    }

    /// `[D, a]`.
    fn commutator(&self, a: &CMatrix) -> Result<CMatrix> {
        check_square(a, self.dim())?;
        Ok(commutator(self.dirac(), a))
    }
}

pub(crate) fn graded_trace(grading: &[f64], a: &CMatrix) -> C64 {
    grading
        .iter()
        .enumerate()
        .map(|(i, g)| a[(i, i)] * *g)
        .sum()
}

pub(crate) fn check_square(a: &CMatrix, dim: usize) -> Result<()> {
    if a.nrows() != dim || a.ncols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "expected a {dim}×{dim} matrix, found {}×{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(())
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Largest singular value.
pub fn operator_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().max()
}

pub fn is_hermitian(a: &CMatrix) -> bool {
    a.is_square() && a == &a.adjoint()
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// `‖a - b‖` in the Frobenius norm.
pub fn distance(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}
