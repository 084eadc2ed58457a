use std::collections::BTreeMap;

use super::{check_square, graded_trace, operator_norm, CMatrix, HeatModule, Spectrum, C64};
use crate::{Error, Result};

/// `H = H⁺ ⊕ H⁻` with grading `γ = diag(1, …, 1, -1, …, -1)`, an odd
/// Hermitian Dirac operator and a finite set of named even operators.
#[derive(Clone, Debug)]
pub struct EvenFredholmModule {
    dim_plus: usize,
    dim_minus: usize,
    dirac: CMatrix,
    algebra: BTreeMap<String, CMatrix>,
    epsilon: f64,
    grading: Vec<f64>,
    boundedness: f64,
    spectrum: Spectrum,
}

fn is_even(a: &CMatrix, dim_plus: usize) -> bool {
    let n = a.nrows();
    (0..n).all(|i| (0..n).all(|j| (i < dim_plus) == (j < dim_plus) || a[(i, j)] == C64::ZERO))
}

fn is_odd(a: &CMatrix, dim_plus: usize) -> bool {
    let n = a.nrows();
    (0..n).all(|i| (0..n).all(|j| (i < dim_plus) != (j < dim_plus) || a[(i, j)] == C64::ZERO))
}

impl EvenFredholmModule {
    /// Validates `D = D†`, `γD + Dγ = 0` and that every algebra element is
    /// even, all exactly, then computes `N(D)`.
    pub fn new(
        dim_plus: usize,
        dim_minus: usize,
        dirac: CMatrix,
        algebra: BTreeMap<String, CMatrix>,
        epsilon: f64,
    ) -> Result<Self> {
        let dim = dim_plus + dim_minus;
        if dim == 0 {
            return Err(Error::InvalidModule("zero-dimensional Hilbert space".into()));
        }
        check_square(&dirac, dim)?;
        if !(epsilon > 0.0) {
            return Err(Error::InvalidModule(format!("theta margin {epsilon} is not positive")));
        }
        if !is_odd(&dirac, dim_plus) {
            return Err(Error::InvalidModule("Dirac operator is not odd".into()));
        }
        for (name, a) in &algebra {
            check_square(a, dim)?;
            if !is_even(a, dim_plus) {
                return Err(Error::InvalidModule(format!("algebra element `{name}` is not even")));
            }
        }
        let spectrum = Spectrum::new(&dirac)?;
        let boundedness = algebra
            .values()
            .filter_map(|a| {
                let na = operator_norm(a);
                (na > 0.0).then(|| (na + operator_norm(&(&dirac * a - a * &dirac))) / na)
            })
            .fold(1.0, f64::max);
        let grading = (0..dim)
            .map(|i| if i < dim_plus { 1.0 } else { -1.0 })
            .collect();
        Ok(Self {
            dim_plus,
            dim_minus,
            dirac,
            algebra,
            epsilon,
            grading,
            boundedness,
            spectrum,
        })
    }

    /// `D = [[0, B], [B†, 0]]` for `B: H⁻ → H⁺`.
    pub fn from_block(
        block: &CMatrix,
        algebra: BTreeMap<String, CMatrix>,
        epsilon: f64,
    ) -> Result<Self> {
        let (p, m) = block.shape();
        let mut d = CMatrix::zeros(p + m, p + m);
        d.view_mut((0, p), (p, m)).copy_from(block);
        d.view_mut((p, 0), (m, p)).copy_from(&block.adjoint());
        Self::new(p, m, d, algebra, epsilon)
    }

    pub fn dim_plus(&self) -> usize {
        self.dim_plus
    }

    pub fn dim_minus(&self) -> usize {
        self.dim_minus
    }

    pub fn algebra(&self) -> &BTreeMap<String, CMatrix> {
        &self.algebra
    }

    pub fn element(&self, name: &str) -> Result<&CMatrix> {
        self.algebra
            .get(name)
            .ok_or_else(|| Error::InvalidInput(format!("no algebra element `{name}`")))
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `N(D) = max ‖a‖⁻¹(‖a‖ + ‖[D, a]‖)` over the algebra, at least 1.
    pub fn boundedness(&self) -> f64 {
        self.boundedness
    }

    pub fn gamma(&self) -> CMatrix {
        self.gamma_matrix()
    }

    /// `Str(a) = Tr(γa)`.
    pub fn supertrace(&self, a: &CMatrix) -> Result<C64> {
        check_square(a, self.dim())?;
        Ok(graded_trace(&self.grading, a))
    }

    pub fn is_even_operator(&self, a: &CMatrix) -> bool {
        a.shape() == (self.dim(), self.dim()) && is_even(a, self.dim_plus)
    }
}

impl HeatModule for EvenFredholmModule {
    fn dim(&self) -> usize {
        self.dim_plus + self.dim_minus
    }

    fn dirac(&self) -> &CMatrix {
        &self.dirac
    }

    fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    fn grading(&self) -> Option<&[f64]> {
        Some(&self.grading)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fredholm::{distance, examples, identity};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validation() {
        let mut d = CMatrix::zeros(2, 2);
        d[(0, 0)] = C64::new(1.0, 0.0);
        assert!(EvenFredholmModule::new(1, 1, d, BTreeMap::new(), 0.5).is_err());
        let mut d = CMatrix::zeros(2, 2);
        d[(0, 1)] = C64::new(1.0, 0.0);
        assert!(EvenFredholmModule::new(1, 1, d.clone(), BTreeMap::new(), 0.5).is_err());
        d[(1, 0)] = C64::new(1.0, 0.0);
        assert!(EvenFredholmModule::new(1, 1, d.clone(), BTreeMap::new(), 0.5).is_ok());
        let mut odd_a = CMatrix::zeros(2, 2);
        odd_a[(0, 1)] = C64::new(1.0, 0.0);
        let alg = BTreeMap::from([("a".to_string(), odd_a)]);
        assert!(EvenFredholmModule::new(1, 1, d, alg, 0.5).is_err());
    }

    #[test]
    fn supertrace_basics() {
        let m = examples::index_one_module();
        assert_eq!(m.supertrace(&identity(3)).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(m.supertrace(&m.gamma()).unwrap(), C64::new(3.0, 0.0));
        assert!(m.supertrace(&identity(2)).is_err());
    }

    #[test]
    fn heat_semigroup() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for dim in 1..=8usize {
            let dp = dim / 2 + dim % 2;
            let block = examples::random_matrix(&mut rng, dp, dim - dp);
            let m = EvenFredholmModule::from_block(&block, BTreeMap::new(), 0.5).unwrap();
            assert_eq!(m.heat(0.0).unwrap(), identity(dim));
            let (s, t) = (rng.random::<f64>(), rng.random::<f64>());
            let lhs = m.heat(s).unwrap() * m.heat(t).unwrap();
            assert!(distance(&lhs, &m.heat(s + t).unwrap()) <= 1e-12);
        }
    }

    #[test]
    fn scalar_heat() {
        let d = CMatrix::from_element(1, 1, C64::new(2.0, 0.0));
        let s = Spectrum::new(&d).unwrap();
        assert!((s.heat(0.3).unwrap()[(0, 0)].re - (-1.2f64).exp()).abs() < 1e-15);
        let zero = EvenFredholmModule::from_block(&CMatrix::zeros(2, 1), BTreeMap::new(), 0.5)
            .unwrap();
        assert_eq!(zero.heat(0.7).unwrap(), identity(3));
    }

    #[test]
    fn supercommutators_have_zero_supertrace() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let m = examples::random_even_module(&mut rng, 2, 3);
        let g = m.gamma();
        for _ in 0..20 {
            let x = examples::random_matrix(&mut rng, 5, 5);
            let y = examples::random_matrix(&mut rng, 5, 5);
            let (x0, x1) = examples::split_parity(&x, &g);
            let (y0, y1) = examples::split_parity(&y, &g);
            // [a, b]_s = ab - (-1)^{|a||b|} ba
            let pairs = [
                (&x0, &y0, 1.0),
                (&x0, &y1, 1.0),
                (&x1, &y0, 1.0),
                (&x1, &y1, -1.0),
            ];
            for (a, b, s) in pairs {
                let sc = a * b - (b * a) * C64::new(s, 0.0);
                assert!(m.supertrace(&sc).unwrap().norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn boundedness_constant() {
        let m = examples::index_one_module();
        assert!(m.boundedness() >= 1.0);
        let p = m.element("p").unwrap();
        let bound = m.boundedness() * operator_norm(p);
        let lhs = operator_norm(p) + operator_norm(&crate::fredholm::commutator(m.dirac(), p));
        assert!(lhs <= bound + 1e-12);
    }
}
