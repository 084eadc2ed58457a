use num::Zero;
use serde::{Deserialize, Serialize};

use super::jlo::adaptive_gauss;
use super::{check_square, commutator, distance, identity, operator_norm, CMatrix, HeatModule, Spectrum, C64};
use crate::rational::{factorial, to_f64};
use crate::{Error, Rational, Result};

/// Tolerance for `g†g = Id` on input data.
const UNITARY_TOL: f64 = 1e-10;
/// Eigenvalues closer than this (relative to `‖A‖`) to 0 at an endpoint
/// are treated as a kernel.
const KERNEL_TOL: f64 = 1e-12;

/// An ungraded module: Hermitian `D` and a unitary `g`.
#[derive(Clone, Debug)]
pub struct OddFredholmModule {
    dirac: CMatrix,
    unitary: CMatrix,
    derivation_constant: f64,
    spectrum: Spectrum,
}

impl OddFredholmModule {
    pub fn new(dirac: CMatrix, unitary: CMatrix) -> Result<Self> {
        let spectrum = Spectrum::new(&dirac)?;
        check_square(&unitary, dirac.nrows())?;
        let n = dirac.nrows();
        if distance(&(unitary.adjoint() * &unitary), &identity(n)) > UNITARY_TOL {
            return Err(Error::InvalidModule("g is not unitary".into()));
        }
        let derivation_constant = [unitary.clone(), unitary.adjoint()]
            .iter()
            .map(|a| operator_norm(&commutator(&dirac, a)) / operator_norm(a))
            .fold(0.0, f64::max);
        Ok(Self {
            dirac,
            unitary,
            derivation_constant,
            spectrum,
        })
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn unitary_inverse(&self) -> CMatrix {
        self.unitary.adjoint()
    }

    /// `c` with `‖[D, a]‖ ≤ c‖a‖` for `a ∈ {g, g⁻¹}`.
    pub fn derivation_constant(&self) -> f64 {
        self.derivation_constant
    }

    /// `D_u = (1 - u) D + u g⁻¹Dg`.
    pub fn dirac_path(&self, u: f64) -> Result<CMatrix> {
        self.path().at(u)
    }

    /// The straight path from `D` to `g⁻¹Dg`.
    pub fn path(&self) -> LinearPath {
        let end = self.unitary_inverse() * &self.dirac * &self.unitary;
        let end = (&end + end.adjoint()) * C64::new(0.5, 0.0);
        LinearPath {
            start: self.dirac.clone(),
            end,
        }
    }

    /// `g⁻¹[D, g]`, equal to the path velocity `g⁻¹Dg - D`.
    pub fn velocity_commutator(&self) -> CMatrix {
        self.unitary_inverse() * commutator(&self.dirac, &self.unitary)
    }
}

impl HeatModule for OddFredholmModule {
    fn dim(&self) -> usize {
        self.dirac.nrows()
    }

    fn dirac(&self) -> &CMatrix {
        &self.dirac
    }

    fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    fn grading(&self) -> Option<&[f64]> {
        None
    }
}

/// `A_u = (1 - u) A₀ + u A₁` with Hermitian endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearPath {
    pub start: CMatrix,
    pub end: CMatrix,
}

impl LinearPath {
    pub fn new(start: CMatrix, end: CMatrix) -> Result<Self> {
        check_square(&end, start.nrows())?;
        if start != start.adjoint() || end != end.adjoint() {
            return Err(Error::InvalidInput("path endpoints must be Hermitian".into()));
        }
        Ok(Self { start, end })
    }

    pub fn at(&self, u: f64) -> Result<CMatrix> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::InvalidInput(format!("path parameter {u} outside [0, 1]")));
        }
        if u == 0.0 {
            return Ok(self.start.clone());
        }
        if u == 1.0 {
            return Ok(self.end.clone());
        }
        Ok(&self.start + self.velocity() * C64::new(u, 0.0))
    }

    pub fn velocity(&self) -> CMatrix {
        &self.end - &self.start
    }

    fn eigenvalues(&self, u: f64) -> Result<Vec<f64>> {
        let mut ev = Spectrum::new(&self.at(u)?)?.eigenvalues().to_vec();
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    /// Location of the zero, bisected to `1e-12`.
    pub u: f64,
    /// `+1` for an upward crossing, `-1` downward.
    pub direction: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralFlow {
    pub flow: i64,
    pub crossings: Vec<Crossing>,
    /// Number of accepted path steps after refinement.
    pub steps: usize,
}

fn neg_count(ev: &[f64]) -> usize {
    ev.iter().filter(|l| **l < 0.0).count()
}

/// Net signed count of eigenvalue zero-crossings along `path`.
///
/// The path is sampled at `samples` uniform steps. A step is refined by
/// bisection until at most one sorted eigenvalue branch changes sign across
/// it and that branch moves by at most half its distance to its
/// neighbours; every sign change is then located by bisection.
pub fn spectral_flow_crossings(path: &LinearPath, samples: usize) -> Result<SpectralFlow> {
    if samples == 0 {
        return Err(Error::InvalidInput("at least one path step is required".into()));
    }
    let scale = operator_norm(&path.start).max(operator_norm(&path.end)).max(1.0);
    for (u, name) in [(0.0, "start"), (1.0, "end")] {
        if path.eigenvalues(u)?.iter().any(|l| l.abs() <= KERNEL_TOL * scale) {
            return Err(Error::Hypothesis(format!("path {name} has a kernel")));
        }
    }
    let mut crossings = Vec::new();
    let mut steps = 0;
    for k in 0..samples {
        let (a, b) = (k as f64 / samples as f64, (k + 1) as f64 / samples as f64);
        refine(path, a, b, 0, &mut crossings, &mut steps)?;
    }
    let flow = crossings.iter().map(|c| c.direction as i64).sum();
    Ok(SpectralFlow {
        flow,
        crossings,
        steps,
    })
}

const MAX_DEPTH: usize = 40;

fn resolved(ea: &[f64], eb: &[f64]) -> bool {
    let changed: Vec<usize> = (0..ea.len())
        .filter(|&i| (ea[i] < 0.0) != (eb[i] < 0.0))
        .collect();
    match changed.as_slice() {
        [] => true,
        [i] => {
            let i = *i;
            let gap = [i.checked_sub(1), (i + 1 < ea.len()).then_some(i + 1)]
                .into_iter()
                .flatten()
                .map(|j| (ea[j] - ea[i]).abs())
                .filter(|g| *g > 0.0)
                .fold(f64::INFINITY, f64::min);
            (eb[i] - ea[i]).abs() <= 0.5 * gap
        }
        _ => false,
    }
}

fn refine(
    path: &LinearPath,
    a: f64,
    b: f64,
    depth: usize,
    out: &mut Vec<Crossing>,
    steps: &mut usize,
) -> Result<()> {
    let (ea, eb) = (path.eigenvalues(a)?, path.eigenvalues(b)?);
    if depth < MAX_DEPTH && !resolved(&ea, &eb) {
        let m = 0.5 * (a + b);
        refine(path, a, m, depth + 1, out, steps)?;
        return refine(path, m, b, depth + 1, out, steps);
    }
    *steps += 1;
    for i in 0..ea.len() {
        let (x, y) = (ea[i] < 0.0, eb[i] < 0.0);
        if x != y {
            out.push(Crossing {
                u: locate(path, i, a, b)?,
                direction: if x { 1 } else { -1 },
            });
        }
    }
    Ok(())
}

fn locate(path: &LinearPath, branch: usize, mut a: f64, mut b: f64) -> Result<f64> {
    let neg_a = path.eigenvalues(a)?[branch] < 0.0;
    while b - a > 1e-12 {
        let m = 0.5 * (a + b);
        if (path.eigenvalues(m)?[branch] < 0.0) == neg_a {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralFlowIntegral {
    pub scale: f64,
    pub value: f64,
    pub error_estimate: f64,
    /// Largest imaginary part met by the integrand, a Hermiticity check.
    pub max_imaginary: f64,
}

/// `√t/√π ∫₀¹ Tr(Ȧ e^{-t A_u²}) du` by adaptive Gauss–Legendre in `u`.
pub fn spectral_flow_integral(
    path: &LinearPath,
    scale: f64,
    tolerance: f64,
) -> Result<SpectralFlowIntegral> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::InvalidInput(format!("heat scale {scale} is not positive")));
    }
    let v = path.velocity();
    let mut max_imaginary: f64 = 0.0;
    let mut failure = None;
    let mut f = |u: f64| -> f64 {
        match path.at(u).and_then(|a| Spectrum::new(&a)).and_then(|s| s.heat(scale)) {
            Ok(h) => {
                let z = (&v * h).trace();
                max_imaginary = max_imaginary.max(z.im.abs());
                z.re
            }
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let pre = (scale / std::f64::consts::PI).sqrt();
    let (integral, err) = adaptive_gauss(&mut f, 0.0, 1.0, tolerance / pre)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(SpectralFlowIntegral {
        scale,
        value: pre * integral,
        error_estimate: pre * err,
        max_imaginary,
    })
}

/// `½ Σ_i [erf(√t λ_i(A₁)) - erf(√t λ_i(A₀))]` given an `erf`.
///
/// For a straight path `Tr(Ȧ e^{-tA²}) = d/du Tr F(A_u)` with
/// `F' = e^{-tx²}`, so this closed form equals the scaled integral.
pub fn erf_path_oracle(path: &LinearPath, scale: f64, erf: impl Fn(f64) -> f64) -> Result<f64> {
    let r = scale.sqrt();
    let s0: f64 = path.eigenvalues(0.0)?.iter().map(|l| erf(r * l)).sum();
    let s1: f64 = path.eigenvalues(1.0)?.iter().map(|l| erf(r * l)).sum();
    Ok(0.5 * (s1 - s0))
}

pub fn negative_count_difference(path: &LinearPath) -> Result<i64> {
    Ok(neg_count(&path.eigenvalues(0.0)?) as i64 - neg_count(&path.eigenvalues(1.0)?) as i64)
}

/// `√(2πi)` on the principal branch.
fn sqrt_2pi_i() -> C64 {
    C64::new(0.0, 2.0 * std::f64::consts::PI).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OddPairingTerm {
    pub n: usize,
    /// `(-1)ⁿ n!`.
    pub factor: f64,
    /// `ψ_{2n+1}(g⁻¹, g, …, g⁻¹, g)` as `[re, im]`.
    pub value: [f64; 2],
    pub contribution: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OddPairing {
    pub terms: Vec<OddPairingTerm>,
    /// `1/√(2πi)`, principal branch.
    pub prefactor: [f64; 2],
    pub total: [f64; 2],
}

pub(crate) fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

/// `(1/√(2πi)) Σ_{n=0}^{N} (-1)ⁿ n! ψ_{2n+1}(g⁻¹, g, …, g⁻¹, g)`.
pub fn pair_odd_k1(
    om: &OddFredholmModule,
    psi: &dyn Fn(usize, &[CMatrix]) -> Result<C64>,
    n_max: usize,
) -> Result<OddPairing> {
    let g = om.unitary().clone();
    let gi = om.unitary_inverse();
    let prefactor = sqrt_2pi_i().inv();
    let mut terms = Vec::new();
    let mut total = C64::zero();
    for n in 0..=n_max {
        let args: Vec<CMatrix> = (0..2 * n + 2)
            .map(|k| if k % 2 == 0 { gi.clone() } else { g.clone() })
            .collect();
        let value = psi(2 * n + 1, &args)?;
        let factor = sign(n) * to_f64(&Rational::from(factorial(n as u64)));
        let contribution = value * factor * prefactor;
        total += contribution;
        terms.push(OddPairingTerm {
            n,
            factor,
            value: pair(value),
            contribution: pair(contribution),
        });
    }
    Ok(OddPairing {
        terms,
        prefactor: pair(prefactor),
        total: pair(total),
    })
}

pub(crate) fn sign(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OddConstant {
    pub terms: usize,
    /// `Σ_{n=1}^{N} (n+1)/2ⁿ`.
    pub partial_sum: f64,
    /// The `n = 0` summand `1`, kept apart so either reading can be used.
    pub zero_term: f64,
    /// `1/√(2i)`, principal branch.
    pub prefactor: [f64; 2],
    /// `partial_sum / √(2i)`.
    pub value: [f64; 2],
    /// `(partial_sum + zero_term) / √(2i)`.
    pub value_with_zero_term: [f64; 2],
}

/// `(1/√(2i)) Σ_{n=1}^{N} (n+1)/2ⁿ`.
pub fn odd_index_constant(n_max: usize) -> Result<OddConstant> {
    if n_max == 0 {
        return Err(Error::InvalidInput("the odd constant starts at n = 1".into()));
    }
    let term = |n: usize| (n as f64 + 1.0) / 2f64.powi(n as i32);
    let partial_sum: f64 = (1..=n_max).map(term).sum();
    let zero_term = term(0);
    let prefactor = C64::new(0.0, 2.0).sqrt().inv();
    Ok(OddConstant {
        terms: n_max,
        partial_sum,
        zero_term,
        prefactor: pair(prefactor),
        value: pair(prefactor * partial_sum),
        value_with_zero_term: pair(prefactor * (partial_sum + zero_term)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fredholm::examples;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn path_endpoints_and_velocity() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let om = examples::random_odd_module(&mut rng, 4);
        assert_eq!(om.dirac_path(0.0).unwrap(), *om.dirac());
        let end = om.unitary_inverse() * om.dirac() * om.unitary();
        assert!(distance(&om.dirac_path(1.0).unwrap(), &end) < 1e-12);
        assert!(distance(&om.path().velocity(), &om.velocity_commutator()) < 1e-12);
        assert!(om.dirac_path(1.5).is_err());
    }

    #[test]
    fn commuting_unitary_gives_constant_path() {
        let om = examples::commuting_odd_module();
        assert_eq!(om.dirac_path(0.3).unwrap(), *om.dirac());
        assert_eq!(om.derivation_constant(), 0.0);
        let i = spectral_flow_integral(&om.path(), 1.0, 1e-10).unwrap();
        assert_eq!(i.value, 0.0);
    }

    #[test]
    fn generic_path_flow() {
        let p = examples::generic_test_path();
        let sf = spectral_flow_crossings(&p, 8).unwrap();
        assert_eq!(sf.flow, 1);
        assert!((sf.crossings[0].u - 0.5).abs() < 1e-9);
        let reversed = LinearPath::new(p.end.clone(), p.start.clone()).unwrap();
        assert_eq!(spectral_flow_crossings(&reversed, 8).unwrap().flow, -1);
        let constant = LinearPath::new(p.end.clone(), p.end.clone()).unwrap();
        assert_eq!(spectral_flow_crossings(&constant, 4).unwrap().flow, 0);
    }

    #[test]
    fn endpoint_kernel_is_rejected() {
        let z = CMatrix::zeros(2, 2);
        let p = LinearPath::new(z.clone(), examples::generic_test_path().end).unwrap();
        assert!(matches!(
            spectral_flow_crossings(&p, 4),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn odd_constant_partial_sums() {
        let c = odd_index_constant(20).unwrap();
        assert!((c.partial_sum - 3.0).abs() <= 2.3e-5);
        let one = odd_index_constant(1).unwrap();
        assert_eq!(one.partial_sum, 1.0);
        let mag = (c.value[0].powi(2) + c.value[1].powi(2)).sqrt();
        assert!((mag - c.partial_sum / 2f64.sqrt()).abs() < 1e-14);
        assert!(odd_index_constant(0).is_err());
    }
}
