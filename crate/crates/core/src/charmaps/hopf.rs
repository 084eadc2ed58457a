//! The Hopf cocyclic module of the polynomial Hopf algebra `ℚ[X]` with `X`
//! primitive, antipode `S(X) = -X` and the trivial modular pair.
//!
//! Degree `n` is `H^{⊗n}`; a basis key is a word `X^{k₁} ⊗ … ⊗ X^{k_n}`:
//!
//! - `d₀(h) = 1 ⊗ h`, `d_{n+1}(h) = h ⊗ 1`, and `d_i` applies the coproduct
//!   `Δ(X^k) = Σ binom(k, a) X^a ⊗ X^{k-a}` to the `i`-th letter;
//! - `s_j` applies the counit to letter `j + 1`;
//! - `t(h¹ ⊗ … ⊗ hⁿ) = Δ^{n-1}S(h¹) · (h² ⊗ … ⊗ hⁿ ⊗ 1)`.
//!
//! Bound to a Fredholm module, the letter `X^k` acts on operators as the
//! `k`-fold commutator with `D` and `1` acts as the identity.

use std::fmt;

use num::{BigInt, One};
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::cocyclic::{Chain, CocyclicModule, Terms};
use crate::rational::{binomial, factorial};
use crate::{Error, Rational, Result};

/// Exponents of `X` in each tensor slot.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HopfWord(Vec<u32>);

impl HopfWord {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    /// `1 ⊗ … ⊗ 1` of length `n`.
    pub fn units(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// The one-letter word `X`.
    pub fn x() -> Self {
        Self(vec![1])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Total `X`-degree, preserved by cofaces and the cyclic operator.
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Slotwise product in `H^{⊗n}`.
    pub fn multiply(&self, other: &HopfWord) -> Result<HopfWord> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }
}

impl fmt::Display for HopfWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<String> = self
            .0
            .iter()
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "X".to_string(),
                k => format!("X^{k}"),
            })
            .collect();
        write!(f, "[{}]", letters.join(","))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct HopfModule;

/// All `(m₁, …, m_parts)` with `Σ m_i = k`.
fn compositions(k: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if k == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if parts == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for first in 0..=k {
        for mut rest in compositions(k - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn multinomial(k: u32, parts: &[u32]) -> BigInt {
    parts
        .iter()
        .fold(factorial(k as u64), |acc, m| acc / factorial(*m as u64))
}

impl CocyclicModule for HopfModule {
    type Key = HopfWord;

    fn name(&self) -> String {
        "Hopf(Q[X])".into()
    }

    fn coface_key(&self, n: usize, i: usize, w: &HopfWord) -> Result<Terms<HopfWord>> {
        let mut out = Vec::new();
        if i == 0 {
            let mut h = vec![0];
            h.extend_from_slice(&w.0);
            out.push((HopfWord(h), Rational::one()));
        } else if i == n + 1 {
            let mut h = w.0.clone();
            h.push(0);
            out.push((HopfWord(h), Rational::one()));
        } else {
            let k = w.0[i - 1];
            for a in 0..=k {
                let mut h = Vec::with_capacity(n + 1);
                h.extend_from_slice(&w.0[..i - 1]);
                h.push(a);
                h.push(k - a);
                h.extend_from_slice(&w.0[i..]);
                out.push((HopfWord(h), Rational::from(binomial(k as u64, a as u64))));
            }
        }
        Ok(out)
    }

    fn codegeneracy_key(&self, _n: usize, j: usize, w: &HopfWord) -> Result<Terms<HopfWord>> {
        if w.0[j] != 0 {
            return Ok(Vec::new());
        }
        let mut h = w.0.clone();
        h.remove(j);
        Ok(vec![(HopfWord(h), Rational::one())])
    }

    fn cyclic_key(&self, n: usize, w: &HopfWord) -> Result<Terms<HopfWord>> {
        if n == 0 {
            return Ok(vec![(w.clone(), Rational::one())]);
        }
        let k = w.0[0];
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let mut out = Vec::new();
        for m in compositions(k, n) {
            let mut h: Vec<u32> = w.0[1..].to_vec();
            h.push(0);
            for (slot, add) in h.iter_mut().zip(&m) {
                *slot += add;
            }
            let c = multinomial(k, &m) * sign;
            out.push((HopfWord(h), Rational::from(c)));
        }
        Ok(out)
    }

    fn random_key(&self, degree: usize, rng: &mut dyn RngCore) -> HopfWord {
        HopfWord(
            (0..degree)
                .map(|_| match rng.random_range(0..6) {
                    0..=2 => 0,
                    3 | 4 => 1,
                    _ => 2,
                })
                .collect(),
        )
    }

    fn norm(&self, x: &Chain<HopfWord>) -> Option<Rational> {
        Some(x.l1_norm())
    }
}

/// Multiplies the two factors of every diagonal key, `Diag(H ⊗ H) → H`.
pub fn multiply_pairs(
    c: &Chain<crate::cocyclic::Pair<HopfWord, HopfWord>>,
) -> Result<Chain<HopfWord>> {
    let mut out = Chain::zero(c.degree());
    for (k, v) in c.iter() {
        out.add_term(k.0.multiply(&k.1)?, v);
    }
    Ok(out)
}
