use nalgebra::SymmetricEigen;

use super::{CMatrix, C64};
use crate::{Error, Result};

/// Eigendecomposition `D = V Λ V†` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    vectors: CMatrix,
}

/// Relative gap below which two eigenvalues of `D²` share a projector.
const CLUSTER_TOL: f64 = 1e-10;

impl Spectrum {
    pub fn new(d: &CMatrix) -> Result<Self> {
        if !d.is_square() {
            return Err(Error::DimensionMismatch("Dirac operator is not square".into()));
        }
        if d != &d.adjoint() {
            return Err(Error::InvalidModule("Dirac operator is not Hermitian".into()));
        }
        let eig = SymmetricEigen::new(d.clone());
        Ok(Self {
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V f(Λ) V†`.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let mut scaled = self.vectors.clone();
        for (j, l) in self.eigenvalues.iter().enumerate() {
            let s = f(*l);
            for x in scaled.column_mut(j).iter_mut() {
                *x *= s;
            }
        }
        scaled * self.vectors.adjoint()
    }

    /// `e^{-tD²}`; exactly the identity at `t = 0`.
    pub fn heat(&self, t: f64) -> Result<CMatrix> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidInput(format!("heat time {t} is not a finite t ≥ 0")));
        }
        if t == 0.0 {
            return Ok(CMatrix::identity(self.dim(), self.dim()));
        }
        Ok(self.apply(|l| C64::new((-t * l * l).exp(), 0.0)))
    }

    /// Distinct eigenvalues `μ_k` of `D²` with their spectral projectors.
    pub fn squared_projectors(&self) -> Vec<(f64, CMatrix)> {
        let mut order: Vec<usize> = (0..self.dim()).collect();
        let sq: Vec<f64> = self.eigenvalues.iter().map(|l| l * l).collect();
        order.sort_by(|a, b| sq[*a].total_cmp(&sq[*b]));
        let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
        for i in order {
            match groups.last_mut() {
                Some((mu, members)) if (sq[i] - *mu).abs() <= CLUSTER_TOL * (1.0 + mu.abs()) => {
                    members.push(i)
                }
                _ => groups.push((sq[i], vec![i])),
            }
        }
        groups
            .into_iter()
            .map(|(_, members)| {
                let mu = members.iter().map(|&i| sq[i]).sum::<f64>() / members.len() as f64;
                let cols: Vec<_> = members.iter().map(|&i| self.vectors.column(i)).collect();
                let v = CMatrix::from_columns(&cols);
                (mu, &v * v.adjoint())
            })
            .collect()
    }

    /// Number of negative eigenvalues.
    pub fn negative_count(&self) -> usize {
        self.eigenvalues.iter().filter(|l| **l < 0.0).count()
    }
}
