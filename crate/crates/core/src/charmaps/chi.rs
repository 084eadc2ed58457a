//! The characteristic map `χ(h¹ ⊗ … ⊗ hⁿ | t₁, …, t_n)(a₀, …, a_n)
//! = Str(a₀ e(t₁) h¹(a₁) e(t₂ - t₁) … hⁿ(a_n) e(1 - t_n))`, with `Tr` in
//! place of `Str` for the odd flavor.

use std::cell::RefCell;
use std::collections::BTreeMap;

use num::Zero;
use serde::{Deserialize, Serialize};

use super::hopf::HopfWord;
use super::iota::{eta_cochain, eta_expand, iota_cochain, iota_expand, HopfSimplexChain};
use crate::fredholm::{
    check_square, even_pairing_factor, pair, CMatrix, EvenFredholmModule, Flavor, HeatModule, C64,
};
use crate::rational::to_f64;
use crate::simplex::{universal_cocycle, universal_cocycle_prefix, SimplexPoint};
use crate::{Error, Rational, Result};

/// Evaluates `χ` on a fixed argument list `a₀, …, a_n`, caching heat
/// kernels per gap time and iterated commutators per argument.
pub struct ChiEvaluator<'a, M: HeatModule + ?Sized> {
    fm: &'a M,
    flavor: Flavor,
    /// `letters[i][k] = [D, ·]^k (a_i)`.
    letters: RefCell<Vec<Vec<CMatrix>>>,
    heat: RefCell<BTreeMap<Rational, CMatrix>>,
}

impl<'a, M: HeatModule + ?Sized> ChiEvaluator<'a, M> {
    pub fn new(fm: &'a M, args: &[CMatrix], flavor: Flavor) -> Result<Self> {
        if args.is_empty() {
            return Err(Error::InvalidInput("χ needs at least a₀".into()));
        }
        for a in args {
            check_square(a, fm.dim())?;
        }
        if flavor == Flavor::Even && fm.grading().is_none() {
            return Err(Error::InvalidInput("supertrace requested on an ungraded module".into()));
        }
        Ok(Self {
            fm,
            flavor,
            letters: RefCell::new(args.iter().map(|a| vec![a.clone()]).collect()),
            heat: RefCell::new(BTreeMap::new()),
        })
    }

    /// `n`, the degree of words and points this evaluator accepts.
    pub fn degree(&self) -> usize {
        self.letters.borrow().len() - 1
    }

    fn letter(&self, i: usize, k: u32) -> Result<CMatrix> {
        let mut letters = self.letters.borrow_mut();
        let row = &mut letters[i];
        while row.len() <= k as usize {
            let next = self.fm.commutator(row.last().expect("row starts with a_i"))?;
            row.push(next);
        }
        Ok(row[k as usize].clone())
    }

    fn heat(&self, t: &Rational) -> Result<CMatrix> {
        if let Some(h) = self.heat.borrow().get(t) {
            return Ok(h.clone());
        }
        let h = self.fm.heat(to_f64(t))?;
        self.heat.borrow_mut().insert(t.clone(), h.clone());
        Ok(h)
    }

    pub fn evaluate(&self, word: &HopfWord, point: &SimplexPoint) -> Result<C64> {
        let n = self.degree();
        for found in [word.degree(), point.degree()] {
            if found != n {
                return Err(Error::DegreeMismatch { expected: n, found });
            }
        }
        let gaps = point.gaps();
        let mut prod = self.letter(0, 0)?;
        for (i, gap) in gaps.iter().enumerate() {
            if !gap.is_zero() {
                prod *= self.heat(gap)?;
            }
            if i < n {
                prod *= self.letter(i + 1, word.exponents()[i])?;
            }
        }
        self.fm.closing_trace(&prod, self.flavor)
    }

    /// `Σ c · χ(word | point)` over a chain in `Diag(H ⊗ Δ)`.
    pub fn evaluate_chain(&self, chain: &HopfSimplexChain) -> Result<C64> {
        let mut total = C64::zero();
        for (key, c) in chain.iter() {
            total += self.evaluate(&key.0, &key.1)? * to_f64(c);
        }
        Ok(total)
    }
}

/// `χ(word | point)(a₀, …, a_n)`.
pub fn chi_evaluate<M: HeatModule + ?Sized>(
    fm: &M,
    word: &HopfWord,
    point: &SimplexPoint,
    args: &[CMatrix],
    flavor: Flavor,
) -> Result<C64> {
    ChiEvaluator::new(fm, args, flavor)?.evaluate(word, point)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralEvenTerm {
    pub n: usize,
    /// `(-1)ⁿ (2n)!/n!`.
    pub pairing_factor: String,
    /// Number of distinct `(word | point)` keys in `ι(φ)_{2n}`.
    pub key_count: usize,
    /// Sum of the coefficients of `ι(φ)_{2n}`.
    pub coefficient_sum: String,
    /// `χ(ι(φ)_{2n})(p, …, p)` as `[re, im]`.
    pub value: [f64; 2],
    pub contribution: [f64; 2],
}

/// The even index cochain paired with `[p]` by expanding every shuffle of
/// `I^r ∪ φ_{2n-2r}` and evaluating `χ` key by key.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralEvenPairing {
    pub truncation: usize,
    pub terms: Vec<GeneralEvenTerm>,
    pub total: [f64; 2],
}

pub fn general_even_index_pairing(
    fm: &EvenFredholmModule,
    p: &CMatrix,
    n_max: usize,
) -> Result<GeneralEvenPairing> {
    let prefix = universal_cocycle_prefix(n_max)?;
    let mut terms = Vec::new();
    let mut total = C64::zero();
    for ex in iota_expand(&prefix, n_max)? {
        let n = ex.degree / 2;
        let chain = iota_cochain(&ex)?;
        let eval = ChiEvaluator::new(fm, &vec![p.clone(); ex.degree + 1], Flavor::Even)?;
        let value = eval.evaluate_chain(&chain)?;
        let factor = even_pairing_factor(n);
        let contribution = value * to_f64(&factor);
        total += contribution;
        terms.push(GeneralEvenTerm {
            n,
            pairing_factor: factor.to_string(),
            key_count: chain.len(),
            coefficient_sum: chain
                .iter()
                .fold(Rational::zero(), |a, (_, c)| a + c)
                .to_string(),
            value: pair(value),
            contribution: pair(contribution),
        });
    }
    Ok(GeneralEvenPairing {
        truncation: n_max,
        terms,
        total: pair(total),
    })
}

/// `ψ_{2n+1} = χ(η(φ_{2n}))` with the plain trace, for `n ≤ N`, in the form
/// taken by the odd `K₁` pairing.
pub fn eta_index_evaluator<M: HeatModule + ?Sized>(
    fm: &M,
    n_max: usize,
) -> Result<impl Fn(usize, &[CMatrix]) -> Result<C64> + '_> {
    let chains: Vec<HopfSimplexChain> = (0..=n_max)
        .map(|n| eta_cochain(&eta_expand(&universal_cocycle(n)?)))
        .collect::<Result<_>>()?;
    Ok(move |degree: usize, args: &[CMatrix]| {
        let chain = (degree % 2 == 1)
            .then(|| chains.get(degree / 2))
            .flatten()
            .ok_or_else(|| Error::InvalidInput(format!("η cochain has no degree {degree}")))?;
        ChiEvaluator::new(fm, args, Flavor::Odd)?.evaluate_chain(chain)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocyclic::{coface, Chain, Pair};
    use crate::charmaps::HopfModule;
    use crate::fredholm::{examples, identity};
    use crate::rational::frac;
    use crate::simplex::SimplexModule;
    use rand::{Rng, RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut dyn RngCore, n: usize) -> SimplexPoint {
        let mut c: Vec<Rational> = (0..n).map(|_| frac(rng.random_range(0..=16), 16)).collect();
        c.sort();
        SimplexPoint::new(c).unwrap()
    }

    fn random_word(rng: &mut dyn RngCore, n: usize) -> HopfWord {
        HopfWord::new((0..n).map(|_| rng.random_range(0..=2)).collect())
    }

    fn random_even(rng: &mut dyn RngCore, fm: &EvenFredholmModule) -> CMatrix {
        let x = examples::random_matrix(rng, fm.dim(), fm.dim());
        examples::split_parity(&x, &fm.gamma()).0
    }

    #[test]
    fn cone_point_collapses_heat() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let fm = examples::random_even_module(&mut rng, 2, 2);
        for n in 0..=3usize {
            let args: Vec<CMatrix> = (0..=n).map(|_| random_even(&mut rng, &fm)).collect();
            let v = chi_evaluate(&fm, &HopfWord::units(n), &SimplexPoint::cone(n), &args, Flavor::Even)
                .unwrap();
            let prod = args.iter().fold(identity(fm.dim()), |acc, a| acc * a);
            let expected = fm.supertrace(&(prod * fm.heat(1.0).unwrap())).unwrap();
            assert!((v - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn commuting_projection_is_point_independent() {
        let fm = examples::index_one_module();
        let p = fm.element("p").unwrap().clone();
        let target = fm.supertrace(&(&p * fm.heat(1.0).unwrap())).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 0..=4usize {
            let x = random_point(&mut rng, n);
            let v = chi_evaluate(&fm, &HopfWord::units(n), &x, &vec![p.clone(); n + 1], Flavor::Even)
                .unwrap();
            assert!((v - target).norm() < 1e-12);
        }
    }

    #[test]
    fn gap_multiset_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let fm = examples::random_even_module(&mut rng, 2, 2);
        let d2 = fm.dirac() * fm.dirac();
        // polynomials in D² commute with D
        let poly = |rng: &mut ChaCha8Rng| {
            let (a, b) = (rng.random::<f64>(), rng.random::<f64>());
            identity(4) * C64::new(a, 0.0) + &d2 * C64::new(b, 0.0)
        };
        for n in 1..=4usize {
            let args: Vec<CMatrix> = (0..=n).map(|_| poly(&mut rng)).collect();
            let x = random_point(&mut rng, n);
            let mut gaps = x.gaps();
            gaps.rotate_left(1);
            gaps.reverse();
            let mut t = Rational::zero();
            let coords = gaps[..n].iter().map(|g| { t += g; t.clone() }).collect();
            let y = SimplexPoint::new(coords).unwrap();
            let w = HopfWord::units(n);
            let a = chi_evaluate(&fm, &w, &x, &args, Flavor::Even).unwrap();
            let b = chi_evaluate(&fm, &w, &y, &args, Flavor::Even).unwrap();
            assert!((a - b).norm() < 1e-10 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn first_coface_compatibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let fm = examples::random_even_module(&mut rng, 2, 1);
        for n in 0..=3usize {
            let w = random_word(&mut rng, n);
            let x = random_point(&mut rng, n);
            let args: Vec<CMatrix> = (0..=n + 1).map(|_| random_even(&mut rng, &fm)).collect();
            let dw = coface(&HopfModule, 0, &Chain::basis(n, w.clone())).unwrap();
            let dx = coface(&SimplexModule, 0, &Chain::basis(n, x.clone())).unwrap();
            let (dw, dx) = (dw.keys().next().unwrap().clone(), dx.keys().next().unwrap().clone());
            let lhs = chi_evaluate(&fm, &dw, &dx, &args, Flavor::Even).unwrap();
            let mut merged = vec![&args[0] * &args[1]];
            merged.extend_from_slice(&args[2..]);
            let rhs = chi_evaluate(&fm, &w, &x, &merged, Flavor::Even).unwrap();
            assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn degree_and_dimension_errors() {
        let fm = examples::index_one_module();
        let p = identity(3);
        assert!(chi_evaluate(&fm, &HopfWord::units(1), &SimplexPoint::cone(2), &[p.clone(), p.clone(), p.clone()], Flavor::Even).is_err());
        assert!(chi_evaluate(&fm, &HopfWord::units(0), &SimplexPoint::basepoint(), &[identity(2)], Flavor::Even).is_err());
        let ev = ChiEvaluator::new(&fm, &[p.clone()], Flavor::Even).unwrap();
        let chain = Chain::basis(0, Pair(HopfWord::units(0), SimplexPoint::basepoint()));
        assert!((ev.evaluate_chain(&chain).unwrap() - fm.supertrace(&fm.heat(1.0).unwrap()).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn eta_pairing_vanishes_for_commuting_unitary() {
        let om = examples::commuting_odd_module();
        let psi = eta_index_evaluator(&om, 3).unwrap();
        let r = crate::fredholm::pair_odd_k1(&om, &psi, 3).unwrap();
        assert!(r.total[0].abs() < 1e-12 && r.total[1].abs() < 1e-12);
    }

    #[test]
    fn general_pairing_on_index_one() {
        let fm = examples::index_one_module();
        let p = fm.element("p").unwrap().clone();
        let g = general_even_index_pairing(&fm, &p, 2).unwrap();
        assert_eq!(g.terms.len(), 3);
        // the degree-0 term is the collapsed one: Str(p e^{-D²}) = 1
        assert!((g.terms[0].contribution[0] - 1.0).abs() < 1e-12);
    }
}
