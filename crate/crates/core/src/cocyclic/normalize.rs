//! Asymptotic normalisation: rescaling cofaces and codegeneracies by the
//! norms of `d_0` and `s_0`.
//!
//! With `a_n = ‖d₀ⁿ‖` and `c_n = ‖s₀ⁿ‖` the rescaled maps are
//! `δ_i = d_i / a_n` and `σ_j = s_j / c_n`. The relations among cofaces
//! alone, codegeneracies alone and the cyclic operator are homogeneous and
//! survive. `σ_j δ_i = Id` becomes `σ_j δ_i = κ_n Id` with
//! `κ_n = 1 / (a_n c_{n+1})`, and the mixed relations `σ_j δ_i = δ σ`
//! survive only when `a_{n-1} c_n` does not depend on `n`.
//!
//! The rescaled operators are `b̃ = b / a_n` and `B̃ = B / c_n`. The scalar
//! automorphism `ψ_n = Π_{k<n} a_k⁻¹` satisfies `ψ b = b̃ ψ` exactly, and
//! `B̃ ψ = ψ B / P_n` with `P_n = a_{n-1} c_n`. So `(b̃, B̃)` is a mixed
//! complex isomorphic to `(b, B / P)` precisely when `P_n` is a constant
//! `P`.

use num::{One, Zero};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::identities::{check_identities, random_chain, IdentityReport};
use super::operators::{connes_b, hochschild_b};
use super::{Chain, CocyclicModule, Terms};
use crate::{Error, Rational, Result};

#[derive(Clone, Debug)]
pub struct Normalized<M> {
    pub inner: M,
    d0_norms: Vec<Rational>,
    s0_norms: Vec<Rational>,
}

impl<M> Normalized<M> {
    fn a(&self, n: usize) -> Result<&Rational> {
        self.d0_norms.get(n).ok_or(Error::IndexOutOfRange {
            map: "normalised coface",
            index: n,
            degree: self.d0_norms.len(),
        })
    }

    fn c(&self, n: usize) -> Result<&Rational> {
        self.s0_norms.get(n).filter(|_| n >= 1).ok_or(Error::IndexOutOfRange {
            map: "normalised codegeneracy",
            index: n,
            degree: self.s0_norms.len(),
        })
    }

    /// `ψ_n = Π_{k<n} ‖d₀ᵏ‖⁻¹`.
    pub fn psi(&self, n: usize) -> Result<Rational> {
        (0..n).try_fold(Rational::one(), |acc, k| Ok(acc / self.a(k)?))
    }
}

fn scale_terms<K>(terms: Terms<K>, s: &Rational) -> Terms<K> {
    terms.into_iter().map(|(k, v)| (k, v * s)).collect()
}

impl<M: CocyclicModule> CocyclicModule for Normalized<M> {
    type Key = M::Key;

    fn name(&self) -> String {
        format!("normalised {}", self.inner.name())
    }

    fn coface_key(&self, n: usize, i: usize, key: &M::Key) -> Result<Terms<M::Key>> {
        let s = self.a(n)?.recip();
        Ok(scale_terms(self.inner.coface_key(n, i, key)?, &s))
    }

    fn codegeneracy_key(&self, n: usize, j: usize, key: &M::Key) -> Result<Terms<M::Key>> {
        let s = self.c(n)?.recip();
        Ok(scale_terms(self.inner.codegeneracy_key(n, j, key)?, &s))
    }

    fn cyclic_key(&self, n: usize, key: &M::Key) -> Result<Terms<M::Key>> {
        self.inner.cyclic_key(n, key)
    }

    fn random_key(&self, degree: usize, rng: &mut dyn RngCore) -> M::Key {
        self.inner.random_key(degree, rng)
    }

    fn basis(&self, degree: usize) -> Option<Vec<M::Key>> {
        self.inner.basis(degree)
    }

    fn norm(&self, x: &Chain<M::Key>) -> Option<Rational> {
        self.inner.norm(x)
    }

    fn degeneracy_face_scale(&self, n: usize) -> Rational {
        match (self.a(n), self.c(n + 1)) {
            (Ok(a), Ok(c)) => self.inner.degeneracy_face_scale(n) / (a * c),
            _ => self.inner.degeneracy_face_scale(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationReport {
    /// `κ_n` for `n` in the checked range.
    pub kappa: Vec<String>,
    /// `ψ_n`.
    pub psi: Vec<String>,
    /// `P_n = a_{n-1} c_n` for `n ≥ 1`.
    pub b_rescaling: Vec<String>,
    /// All cocyclic identities of the rescaled module, with `σ_j δ_i = κ_n Id`.
    pub structure_identities_pass: bool,
    /// `b̃ B̃ + B̃ b̃ = 0` on the samples.
    pub mixed_complex_pass: bool,
    /// `ψ b = b̃ ψ` on the samples.
    pub psi_intertwines_b: bool,
    /// `B̃ ψ = ψ B / P` on the samples, when `P_n` is constant.
    pub psi_intertwines_connes_b_up_to: Option<String>,
    pub identities: IdentityReport,
}

/// Rescales `m` by the given norm tables (index `n` is the norm of the map
/// out of degree `n`; `s0_norms[0]` is ignored) and checks the result
/// through `max_degree`. The tables must reach degree `max_degree + 1`.
pub fn asymptotic_normalize<M: CocyclicModule>(
    m: M,
    d0_norms: Vec<Rational>,
    s0_norms: Vec<Rational>,
    max_degree: usize,
    samples: usize,
    rng: &mut dyn RngCore,
) -> Result<(Normalized<M>, NormalizationReport)> {
    if d0_norms.len() < max_degree + 2 || s0_norms.len() < max_degree + 2 {
        return Err(Error::InvalidInput(format!(
            "norm tables must cover degrees 0..={}",
            max_degree + 1
        )));
    }
    let zero_at = d0_norms
        .iter()
        .chain(s0_norms.iter().skip(1))
        .position(|v| v <= &Rational::zero());
    if zero_at.is_some() {
        return Err(Error::InvalidInput("norm tables must be positive".into()));
    }
    let norm = Normalized {
        inner: m,
        d0_norms,
        s0_norms,
    };

    let identities = check_identities(&norm, max_degree, samples, rng)?;
    let is_mixed = |name: &str| name == "b B + B b = 0";
    let structure_identities_pass = identities
        .checks
        .iter()
        .filter(|c| !is_mixed(&c.identity))
        .all(|c| c.passed);
    let mixed_complex_pass = identities
        .checks
        .iter()
        .filter(|c| is_mixed(&c.identity))
        .all(|c| c.passed);

    let kappa = (0..=max_degree)
        .map(|n| norm.degeneracy_face_scale(n).to_string())
        .collect();
    let psi: Vec<Rational> = (0..=max_degree + 1)
        .map(|n| norm.psi(n))
        .collect::<Result<_>>()?;
    let products: Vec<Rational> = (1..=max_degree)
        .map(|n| Ok(norm.a(n - 1)? * norm.c(n)?))
        .collect::<Result<_>>()?;
    let constant = products
        .first()
        .filter(|p0| products.iter().all(|p| p == *p0))
        .cloned();

    let mut psi_b = true;
    let mut psi_big_b = constant.is_some();
    for n in 0..=max_degree {
        for _ in 0..samples {
            let x = random_chain(&norm.inner, n, rng);
            let lhs = hochschild_b(&norm.inner, &x)?.scale(&psi[n + 1]);
            let rhs = hochschild_b(&norm, &x.scale(&psi[n]))?;
            psi_b &= lhs == rhs;
            if let (Some(p), true) = (&constant, n >= 1) {
                let lhs = connes_b(&norm, &x.scale(&psi[n]))?;
                let rhs = connes_b(&norm.inner, &x)?.scale(&(&psi[n - 1] / p));
                psi_big_b &= lhs == rhs;
            }
        }
    }

    let report = NormalizationReport {
        kappa,
        psi: psi.iter().map(ToString::to_string).collect(),
        b_rescaling: products.iter().map(ToString::to_string).collect(),
        structure_identities_pass,
        mixed_complex_pass,
        psi_intertwines_b: psi_b,
        psi_intertwines_connes_b_up_to: constant.filter(|_| psi_big_b).map(|p| p.to_string()),
        identities,
    };
    Ok((norm, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocyclic::{AlgebraCochains, FiniteAlgebra};
    use crate::rational::{frac, int};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn module() -> AlgebraCochains {
        AlgebraCochains::new(FiniteAlgebra::cyclic_group(2))
    }

    #[test]
    fn unit_norms_give_identity_rescaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (_, r) =
            asymptotic_normalize(module(), vec![int(1); 5], vec![int(1); 5], 3, 2, &mut rng)
                .unwrap();
        assert!(r.psi.iter().all(|p| p == "1"));
        assert!(r.structure_identities_pass && r.mixed_complex_pass && r.psi_intertwines_b);
        assert_eq!(r.psi_intertwines_connes_b_up_to.as_deref(), Some("1"));
    }

    #[test]
    fn constant_coface_norm_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (norm, r) =
            asymptotic_normalize(module(), vec![int(2); 5], vec![int(1); 5], 3, 2, &mut rng)
                .unwrap();
        assert_eq!(norm.degeneracy_face_scale(1), frac(1, 2));
        assert!(r.structure_identities_pass);
        assert!(r.mixed_complex_pass);
        assert!(r.psi_intertwines_b);
        assert_eq!(r.psi_intertwines_connes_b_up_to.as_deref(), Some("2"));
    }

    #[test]
    fn degree_dependent_norms_break_anticommutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d0: Vec<Rational> = (1..=5).map(int).collect();
        let (_, r) = asymptotic_normalize(module(), d0, vec![int(1); 5], 3, 3, &mut rng).unwrap();
        assert!(!r.structure_identities_pass);
        assert!(r.psi_intertwines_b);
        assert!(!r.mixed_complex_pass);
        assert!(r.psi_intertwines_connes_b_up_to.is_none());
    }

    #[test]
    fn zero_norm_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut d0 = vec![int(1); 5];
        d0[2] = int(0);
        assert!(asymptotic_normalize(module(), d0, vec![int(1); 5], 3, 1, &mut rng).is_err());
    }
}
