//! Even pairings with `K₀`, the McKean–Singer index and the itemised even
//! index computation.

use num::Zero;
use serde::{Deserialize, Serialize};

use super::odd::pair;
use super::{
    check_square, commutator, distance, CMatrix, EvenFredholmModule, HeatModule, Spectrum, C64,
};
use crate::charmaps::{
    alpha_partial_sum, chi_evaluate, general_even_index_pairing, GeneralEvenPairing, HopfWord,
};
use crate::rational::{factorial, to_f64};
use crate::simplex::universal_cocycle;
use crate::{Error, Rational, Result};

/// Tolerance for `p² = p` and `p = p†`.
const IDEMPOTENT_TOL: f64 = 1e-12;
/// Tolerance for `[D, p] = 0` and for the `t`-independence of the index.
const COMMUTING_TOL: f64 = 1e-10;
/// Values farther than this from an integer are not accepted as an index.
const INDEX_GUARD: f64 = 0.1;

pub const MCKEAN_SINGER_TIMES: [f64; 4] = [0.25, 0.5, 1.0, 2.0];

fn check_idempotent(p: &CMatrix) -> Result<()> {
    if distance(&(p * p), p) > IDEMPOTENT_TOL {
        return Err(Error::Hypothesis("p is not idempotent".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct K0Term {
    pub n: usize,
    /// `(-1)ⁿ (2n)!/n!`.
    pub factor: f64,
    /// `ψ_{2n}(p, …, p)` as `[re, im]`.
    pub value: [f64; 2],
    pub contribution: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct K0Pairing {
    pub terms: Vec<K0Term>,
    pub total: [f64; 2],
}

/// `(-1)ⁿ (2n)!/n!`.
pub(crate) fn even_pairing_factor(n: usize) -> Rational {
    let r = Rational::new(factorial(2 * n as u64), factorial(n as u64));
    if n % 2 == 0 {
        r
    } else {
        -r
    }
}

/// `Σ_{n=0}^{N} (-1)ⁿ (2n)!/n! ψ_{2n}(p, …, p)`; `psi` receives the degree
/// `2n` and `2n + 1` copies of `p`.
pub fn pair_even_k0(
    fm: &EvenFredholmModule,
    psi: &dyn Fn(usize, &[CMatrix]) -> Result<C64>,
    p: &CMatrix,
    n_max: usize,
) -> Result<K0Pairing> {
    check_square(p, fm.dim())?;
    check_idempotent(p)?;
    let mut terms = Vec::new();
    let mut total = C64::zero();
    for n in 0..=n_max {
        let args = vec![p.clone(); 2 * n + 1];
        let value = psi(2 * n, &args)?;
        let factor = to_f64(&even_pairing_factor(n));
        let contribution = value * factor;
        total += contribution;
        terms.push(K0Term {
            n,
            factor,
            value: pair(value),
            contribution: pair(contribution),
        });
    }
    Ok(K0Pairing {
        terms,
        total: pair(total),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McKeanSinger {
    pub times: Vec<f64>,
    /// `Str(p e^{-t D_p²} p)` at each time, as `[re, im]`.
    pub values: Vec<[f64; 2]>,
    /// Largest deviation between values.
    pub spread: f64,
    pub index: i64,
}

fn check_index_hypotheses(fm: &EvenFredholmModule, p: &CMatrix) -> Result<()> {
    check_square(p, fm.dim())?;
    check_idempotent(p)?;
    if distance(p, &p.adjoint()) > IDEMPOTENT_TOL {
        return Err(Error::Hypothesis("p is not self-adjoint".into()));
    }
    if !fm.is_even_operator(p) {
        return Err(Error::Hypothesis("p is not even".into()));
    }
    let c = commutator(fm.dirac(), p).norm();
    if c > COMMUTING_TOL {
        return Err(Error::Hypothesis(format!("‖[D, p]‖ = {c:e} exceeds {COMMUTING_TOL:e}")));
    }
    Ok(())
}

/// The index of `D_p = pDp` as `Str(p e^{-tD_p²} p)`, checked to be
/// independent of `t ∈ {0.25, 0.5, 1, 2}` and within `0.1` of an integer.
pub fn mckean_singer_index(fm: &EvenFredholmModule, p: &CMatrix) -> Result<McKeanSinger> {
    check_index_hypotheses(fm, p)?;
    let dp = p * fm.dirac() * p;
    let dp = (&dp + dp.adjoint()) * C64::new(0.5, 0.0);
    let sp = Spectrum::new(&dp)?;
    let values: Vec<C64> = MCKEAN_SINGER_TIMES
        .iter()
        .map(|t| fm.supertrace(&(p * sp.heat(*t)? * p)))
        .collect::<Result<_>>()?;
    let spread = values
        .iter()
        .flat_map(|a| values.iter().map(move |b| (a - b).norm()))
        .fold(0.0, f64::max);
    if spread > COMMUTING_TOL {
        return Err(Error::Hypothesis(format!(
            "Str(p e^(-tD_p²) p) varies by {spread:e} over t"
        )));
    }
    let v = values[2];
    let index = v.re.round();
    if (v - C64::new(index, 0.0)).norm() > INDEX_GUARD {
        return Err(Error::Hypothesis(format!("{v} is not within {INDEX_GUARD} of an integer")));
    }
    Ok(McKeanSinger {
        times: MCKEAN_SINGER_TIMES.to_vec(),
        values: values.into_iter().map(pair).collect(),
        spread,
        index: index as i64,
    })
}

/// `Σ_{n=0}^{N} (n+1)/(2ⁿ (n!)²)`, summed directly in floating point.
pub fn even_index_series(n_max: usize) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for n in 0..=n_max {
        if n > 0 {
            term /= 2.0 * (n * n) as f64;
        }
        sum += term * (n + 1) as f64;
    }
    sum
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvenIndexTerm {
    pub n: usize,
    /// `(-1)ⁿ (2n)!/n!`, from the `K₀` pairing.
    pub pairing_factor: String,
    /// Common coefficient of the points of `φ_{2n}`.
    pub cocycle_coefficient: String,
    /// Number of points in the support of `φ_{2n}`.
    pub point_count: usize,
    /// `Σ_{r ≤ n} α_r`.
    pub iota_weight: String,
    /// Product of the three rational factors.
    pub rational_factor: String,
    /// `Str(p e^{-D²})` as `[re, im]`.
    pub supertrace: [f64; 2],
    /// Largest `|χ(1…1 | x)(p, …, p) - Str(p e^{-D²})|` over the points `x`
    /// of `φ_{2n}`: the collapse used by the collapsed evaluation.
    pub collapse_deviation: f64,
    pub contribution: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvenIndexReport {
    pub truncation: usize,
    pub mckean_singer: McKeanSinger,
    pub terms: Vec<EvenIndexTerm>,
    /// Collapsed pairing `⟨χ∘∪∘ι(φ), [p]⟩` through degree `2N`.
    pub pairing: [f64; 2],
    /// `pairing / ind`, absent when the index vanishes.
    pub ratio: Option<f64>,
    /// `Σ_{n ≤ N} (n+1)/(2ⁿ (n!)²)`, summed independently.
    pub series_oracle: f64,
    /// `ratio - series_oracle`.
    pub ratio_error: Option<f64>,
    /// The fully expanded cup-then-`χ` evaluation, when requested.
    pub general: Option<GeneralEvenPairing>,
    /// `general.total` minus the collapsed partial sum through the same degree.
    pub general_mismatch: Option<[f64; 2]>,
}

/// The even index cochain paired with `[p]`, one itemised factor per
/// source: the `K₀` pairing factor, the coefficient and point count of
/// `φ_{2n}`, the `ι` weights, and `Str(p e^{-D²})`. With `general_up_to =
/// Some(M)` the fully expanded evaluation through degree `2·min(M, N)` is
/// attached for comparison.
pub fn even_index_cochain_pairing(
    fm: &EvenFredholmModule,
    p: &CMatrix,
    n_max: usize,
    general_up_to: Option<usize>,
) -> Result<EvenIndexReport> {
    let mckean_singer = mckean_singer_index(fm, p)?;
    let str_heat = fm.supertrace(&(p * fm.heat(1.0)?))?;
    let mut terms = Vec::new();
    let mut total = C64::zero();
    for n in 0..=n_max {
        let phi = universal_cocycle(n)?;
        let coeffs: Vec<&Rational> = phi.iter().map(|(_, c)| c).collect();
        let coefficient = coeffs.first().copied().cloned().unwrap_or_else(Rational::zero);
        if coeffs.iter().any(|c| **c != coefficient) {
            return Err(Error::InvalidInput(format!("φ_{} has unequal coefficients", 2 * n)));
        }
        let word = HopfWord::units(2 * n);
        let args = vec![p.clone(); 2 * n + 1];
        let mut collapse_deviation: f64 = 0.0;
        for (x, _) in phi.iter() {
            let v = chi_evaluate(fm, &word, x, &args, fm.default_flavor())?;
            collapse_deviation = collapse_deviation.max((v - str_heat).norm());
        }
        let pairing_factor = even_pairing_factor(n);
        let iota_weight = alpha_partial_sum(n);
        let rational_factor = &pairing_factor
            * &coefficient
            * Rational::from_integer((phi.len() as i64).into())
            * &iota_weight;
        let contribution = str_heat * to_f64(&rational_factor);
        total += contribution;
        terms.push(EvenIndexTerm {
            n,
            pairing_factor: pairing_factor.to_string(),
            cocycle_coefficient: coefficient.to_string(),
            point_count: phi.len(),
            iota_weight: iota_weight.to_string(),
            rational_factor: rational_factor.to_string(),
            supertrace: pair(str_heat),
            collapse_deviation,
            contribution: pair(contribution),
        });
    }
    let ind = mckean_singer.index;
    let ratio = (ind != 0).then(|| total.re / ind as f64);
    let series_oracle = even_index_series(n_max);
    let general = general_up_to
        .map(|m| general_even_index_pairing(fm, p, m.min(n_max)))
        .transpose()?;
    let general_mismatch = general.as_ref().map(|g| {
        let collapsed: C64 = terms[..=g.truncation]
            .iter()
            .map(|t| C64::new(t.contribution[0], t.contribution[1]))
            .sum();
        pair(C64::new(g.total[0], g.total[1]) - collapsed)
    });
    Ok(EvenIndexReport {
        truncation: n_max,
        mckean_singer,
        terms,
        pairing: pair(total),
        ratio,
        series_oracle,
        ratio_error: ratio.map(|r| r - series_oracle),
        general,
        general_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fredholm::{examples, identity, jlo_exact, Flavor};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn series_oracle() {
        assert!((even_index_series(8) - 2.2019446).abs() < 1e-6);
        assert_eq!(even_index_series(0), 1.0);
    }

    #[test]
    fn mckean_singer_examples() {
        let m = examples::index_one_module();
        assert_eq!(mckean_singer_index(&m, m.element("p").unwrap()).unwrap().index, 1);
        let z = examples::trivial_dirac_module();
        assert_eq!(mckean_singer_index(&z, z.element("p").unwrap()).unwrap().index, 1);
        let b = examples::balanced_module(0.7);
        assert_eq!(mckean_singer_index(&b, &identity(2)).unwrap().index, 0);
    }

    #[test]
    fn index_one_ratio() {
        let m = examples::index_one_module();
        let r = even_index_cochain_pairing(&m, m.element("p").unwrap(), 8, None).unwrap();
        assert!(r.ratio_error.unwrap().abs() < 1e-10);
        let r0 = even_index_cochain_pairing(&m, m.element("p").unwrap(), 0, None).unwrap();
        assert!((r0.pairing[0] - 1.0).abs() < 1e-12);
        for t in &r.terms {
            assert!(t.collapse_deviation < 1e-12);
        }
    }

    #[test]
    fn random_commuting_projection_ratio() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let m = examples::random_commuting_projection(&mut rng);
        let r = even_index_cochain_pairing(&m, m.element("p").unwrap(), 8, Some(2)).unwrap();
        assert_eq!(r.mckean_singer.index, 1);
        assert!(r.ratio_error.unwrap().abs() < 1e-10);
        assert!(r.general.is_some());
    }

    #[test]
    fn zero_projection_and_hypotheses() {
        let m = examples::index_one_module();
        let r = even_index_cochain_pairing(&m, &CMatrix::zeros(3, 3), 4, None).unwrap();
        assert_eq!((r.mckean_singer.index, r.ratio), (0, None));
        assert_eq!(r.pairing, [0.0, 0.0]);
        let mut q = CMatrix::zeros(3, 3);
        q[(0, 0)] = C64::new(1.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = examples::random_even_module(&mut rng, 2, 1);
        assert!(matches!(
            mckean_singer_index(&g, &q),
            Err(Error::Hypothesis(_))
        ));
        let half = identity(3) * C64::new(0.5, 0.0);
        assert!(pair_even_k0(&m, &|_, _| Ok(C64::zero()), &half, 1).is_err());
    }

    #[test]
    fn k0_pairing_with_jlo_collapses() {
        let m = examples::index_one_module();
        let p = m.element("p").unwrap();
        let psi = |deg: usize, args: &[CMatrix]| {
            let n = deg / 2;
            let mut a = vec![args[0].clone()];
            for x in &args[1..] {
                a.push(m.commutator(x)?);
            }
            debug_assert_eq!(a.len(), 2 * n + 1);
            Ok(jlo_exact(&m, &a, Flavor::Even)?.value)
        };
        let r = pair_even_k0(&m, &psi, p, 3).unwrap();
        assert!((r.total[0] - 1.0).abs() < 1e-12 && r.total[1].abs() < 1e-12);
        for t in &r.terms[1..] {
            assert!(t.value[0].abs() < 1e-12);
        }
        let zero = pair_even_k0(&m, &psi, &CMatrix::zeros(3, 3), 3).unwrap();
        assert_eq!(zero.total, [0.0, 0.0]);
    }

    #[test]
    fn general_expansion_is_reported() {
        let m = examples::index_one_module();
        let r = even_index_cochain_pairing(&m, m.element("p").unwrap(), 2, Some(2)).unwrap();
        let g = r.general.unwrap();
        assert_eq!(g.truncation, 2);
        assert!(r.general_mismatch.is_some());
    }
}
