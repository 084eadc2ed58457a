//! The weights `α_r` and the embeddings `ι` (even) and `η` (odd) of simplex
//! cochains into the diagonal `Diag(H ⊗ Δ)`.

use num::{One, Zero};

use super::cup::cup_diagonal;
use super::hopf::{multiply_pairs, HopfModule, HopfWord};
use crate::cocyclic::{Chain, Diagonal, Pair, TruncatedCochain};
use crate::rational::factorial;
use crate::simplex::{SimplexChain, SimplexModule, SimplexPoint};
use crate::{Error, Rational, Result};

pub type HopfSimplexChain = Chain<Pair<HopfWord, SimplexPoint>>;

/// `α₀ = 1`, `α_r = 1/(2r)! - 1/(2r-2)!`.
pub fn alpha(r: usize) -> Rational {
    let inv = |m: u64| Rational::new(One::one(), factorial(m));
    if r == 0 {
        Rational::one()
    } else {
        inv(2 * r as u64) - inv(2 * r as u64 - 2)
    }
}

/// `Σ_{r=0}^{n} α_r`, summed term by term.
pub fn alpha_partial_sum(n: usize) -> Rational {
    (0..=n).map(alpha).fold(Rational::zero(), |a, b| a + b)
}

#[derive(Clone, Debug, PartialEq)]
pub struct IotaTerm {
    pub r: usize,
    pub weight: Rational,
    /// `φ_{2n-2r}`.
    pub component: SimplexChain,
}

/// The degree-`2n` part `Σ_r α_r I^r ∪ φ_{2n-2r}` of `ι(φ)`, unexpanded.
#[derive(Clone, Debug, PartialEq)]
pub struct IotaExpansion {
    pub degree: usize,
    pub terms: Vec<IotaTerm>,
}

impl IotaExpansion {
    pub fn weight_sum(&self) -> Rational {
        self.terms.iter().fold(Rational::zero(), |a, t| a + &t.weight)
    }
}

/// One [`IotaExpansion`] per even degree `0, 2, …, 2N`.
pub fn iota_expand(
    prefix: &TruncatedCochain<SimplexPoint>,
    n_max: usize,
) -> Result<Vec<IotaExpansion>> {
    if prefix.parity() != 0 || prefix.truncation() < n_max {
        return Err(Error::InvalidInput(format!(
            "ι needs an even prefix through degree {}",
            2 * n_max
        )));
    }
    Ok((0..=n_max)
        .map(|n| IotaExpansion {
            degree: 2 * n,
            terms: (0..=n)
                .map(|r| IotaTerm {
                    r,
                    weight: alpha(r),
                    component: prefix.components()[n - r].clone(),
                })
                .collect(),
        })
        .collect())
}

/// `I = 1 ⊗ 1`.
pub fn fundamental_cocycle() -> Chain<HopfWord> {
    Chain::basis(2, HopfWord::units(2))
}

/// `I^r`, the iterated shuffle cup of `I` pushed through the product of `H`;
/// `I⁰` is the empty word.
pub fn fundamental_power(r: usize) -> Result<Chain<HopfWord>> {
    let diag = Diagonal::new(HopfModule, HopfModule);
    let i = fundamental_cocycle();
    let mut power = Chain::basis(0, HopfWord::units(0));
    for _ in 0..r {
        power = multiply_pairs(&cup_diagonal(&diag, &power, &i)?)?;
    }
    Ok(power)
}

/// `ι(φ)_{2n}` fully expanded in `Diag(H ⊗ Δ)`.
pub fn iota_cochain(expansion: &IotaExpansion) -> Result<HopfSimplexChain> {
    let diag = Diagonal::new(HopfModule, SimplexModule);
    let mut out = Chain::zero(expansion.degree);
    for t in &expansion.terms {
        let c = cup_diagonal(&diag, &fundamental_power(t.r)?, &t.component)?;
        out.add_scaled(&t.weight, &c)?;
    }
    Ok(out)
}

/// `η(φ_{2n}) = (X | φ_{2n})`, recorded before expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaExpansion {
    /// `2n + 1`.
    pub degree: usize,
    pub word: HopfWord,
    pub component: SimplexChain,
}

pub fn eta_expand(phi: &SimplexChain) -> EtaExpansion {
    EtaExpansion {
        degree: phi.degree() + 1,
        word: HopfWord::x(),
        component: phi.clone(),
    }
}

/// `X ∪ φ_{2n}` fully expanded.
pub fn eta_cochain(expansion: &EtaExpansion) -> Result<HopfSimplexChain> {
    let diag = Diagonal::new(HopfModule, SimplexModule);
    cup_diagonal(
        &diag,
        &Chain::basis(expansion.word.degree(), expansion.word.clone()),
        &expansion.component,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::simplex::{universal_cocycle, universal_cocycle_prefix};

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(0), Rational::one());
        assert_eq!(alpha(1), frac(-1, 2));
        assert_eq!(alpha_partial_sum(2), frac(1, 24));
        for n in 0..=20usize {
            assert_eq!(
                alpha_partial_sum(n) * Rational::from(factorial(2 * n as u64)),
                Rational::one()
            );
        }
    }

    #[test]
    fn iota_expansion_shape() {
        let prefix = universal_cocycle_prefix(3).unwrap();
        let ex = iota_expand(&prefix, 3).unwrap();
        assert_eq!(ex[0].terms.len(), 1);
        assert_eq!(ex[0].terms[0].component, Chain::basis(0, SimplexPoint::basepoint()));
        let two = &ex[1].terms;
        assert_eq!((two[0].r, two[0].weight.clone()), (0, Rational::one()));
        assert_eq!(two[0].component, universal_cocycle(1).unwrap());
        assert_eq!((two[1].r, two[1].weight.clone()), (1, frac(-1, 2)));
        assert_eq!(two[1].component, universal_cocycle(0).unwrap());
        for (n, e) in ex.iter().enumerate() {
            assert_eq!(e.weight_sum(), alpha_partial_sum(n));
            assert_eq!(e.degree, 2 * n);
        }
        assert!(iota_expand(&prefix, 4).is_err());
    }

    #[test]
    fn fundamental_powers_are_unit_words() {
        for r in 0..=4usize {
            let p = fundamental_power(r).unwrap();
            assert_eq!(p.degree(), 2 * r);
            assert_eq!(p.len(), 1);
            assert_eq!(p.coeff(&HopfWord::units(2 * r)), Rational::from(factorial(r as u64)));
        }
    }

    #[test]
    fn eta_bookkeeping() {
        let phi0 = universal_cocycle(0).unwrap();
        let e = eta_expand(&phi0);
        assert_eq!((e.degree, e.word.to_string()), (1, "[X]".to_string()));
        let c = eta_cochain(&e).unwrap();
        assert_eq!(c.degree(), 1);
        let zero = eta_cochain(&eta_expand(&Chain::zero(2))).unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.degree(), 3);
        let iota2 = iota_cochain(&iota_expand(&universal_cocycle_prefix(1).unwrap(), 1).unwrap()[1])
            .unwrap();
        assert_eq!(iota2.degree(), 2);
    }
}
