//! Finite prefixes of infinite-support cochains and the total differentials
//! acting on them.

use std::collections::BTreeMap;

use num::One;

use super::operators::{bar_b_prime, connes_b_or_zero, cyclic_n, hochschild_b, one_minus_lambda};
use super::{Chain, CocyclicModule};
use crate::{Error, Rational, Result};

/// Components `φ_i, φ_{i+2}, …, φ_{i+2N}` of a cochain of parity `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedCochain<K: Ord> {
    parity: usize,
    components: Vec<Chain<K>>,
    norms: Option<Vec<Rational>>,
}

impl<K: Ord + Clone> TruncatedCochain<K> {
    /// Component `k` must live in degree `parity + 2k`; norms are taken from
    /// the module when it has one.
    pub fn new<M>(m: &M, parity: usize, components: Vec<Chain<K>>) -> Result<Self>
    where
        M: CocyclicModule<Key = K> + ?Sized,
    {
        if parity > 1 {
            return Err(Error::InvalidInput(format!("parity {parity} is not 0 or 1")));
        }
        for (k, c) in components.iter().enumerate() {
            if c.degree() != parity + 2 * k {
                return Err(Error::DegreeMismatch {
                    expected: parity + 2 * k,
                    found: c.degree(),
                });
            }
        }
        let norms = components.iter().map(|c| m.norm(c)).collect();
        Ok(Self {
            parity,
            components,
            norms,
        })
    }

    pub fn parity(&self) -> usize {
        self.parity
    }

    /// `N`, the index of the last component.
    pub fn truncation(&self) -> usize {
        self.components.len().saturating_sub(1)
    }

    pub fn components(&self) -> &[Chain<K>] {
        &self.components
    }

    pub fn component(&self, k: usize) -> Option<&Chain<K>> {
        self.components.get(k)
    }

    pub fn norm_profile(&self) -> Option<&[Rational]> {
        self.norms.as_deref()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Chain::is_zero)
    }
}

/// `(b + B) φ` with its top component marked as boundary-truncated: that
/// component is missing the `B` contribution of the first dropped term.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicImage<K: Ord> {
    pub cochain: TruncatedCochain<K>,
    pub boundary_truncated_degree: usize,
}

impl<K: Ord + Clone> PeriodicImage<K> {
    /// Components below the truncated boundary.
    pub fn interior(&self) -> &[Chain<K>] {
        let c = self.cochain.components();
        &c[..c.len() - 1]
    }

    pub fn interior_is_zero(&self) -> bool {
        self.interior().iter().all(Chain::is_zero)
    }
}

/// The `(b, B)` total differential on a truncated cochain.
///
/// The output has parity `1 - i`; its component in degree `m` is
/// `b φ_{m-1} + B φ_{m+1}`.
pub fn periodic_differential<M: CocyclicModule + ?Sized>(
    m: &M,
    c: &TruncatedCochain<M::Key>,
) -> Result<PeriodicImage<M::Key>> {
    if c.components.is_empty() {
        return Err(Error::InvalidInput("empty truncated cochain".into()));
    }
    let i = c.parity;
    let top = i + 2 * c.truncation() + 1;
    let by_degree: BTreeMap<usize, &Chain<M::Key>> =
        c.components.iter().map(|x| (x.degree(), x)).collect();
    let mut out = Vec::new();
    let mut degree = 1 - i;
    while degree <= top {
        let mut acc = Chain::zero(degree);
        if degree >= 1 {
            if let Some(x) = by_degree.get(&(degree - 1)) {
                acc.add_scaled(&Rational::one(), &hochschild_b(m, x)?)?;
            }
        }
        if let Some(x) = by_degree.get(&(degree + 1)) {
            if let Some(bx) = connes_b_or_zero(m, x)? {
                acc.add_scaled(&Rational::one(), &bx)?;
            }
        }
        out.push(acc);
        degree += 2;
    }
    Ok(PeriodicImage {
        cochain: TruncatedCochain::new(m, 1 - i, out)?,
        boundary_truncated_degree: top,
    })
}

/// A finitely supported element of the Tsygan bicomplex: entry `(p, n)`
/// lives in column `p`, cochain degree `n`, total degree `p + n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TsyganCochain<K: Ord> {
    pub entries: BTreeMap<(usize, usize), Chain<K>>,
}

impl<K: Ord + Clone> TsyganCochain<K> {
    pub fn new() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, column: usize, x: Chain<K>) {
        self.entries.insert((column, x.degree()), x);
    }

    fn accumulate(&mut self, column: usize, x: Chain<K>) -> Result<()> {
        let key = (column, x.degree());
        match self.entries.get_mut(&key) {
            Some(existing) => existing.add_scaled(&Rational::one(), &x)?,
            None => {
                self.entries.insert(key, x);
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(Chain::is_zero)
    }
}

impl<K: Ord + Clone> Default for TsyganCochain<K> {
    fn default() -> Self {
        Self::new()
    }
}

/// The Tsygan total differential: columns alternate `b` (even `p`) and
/// `-b'` (odd `p`); rows alternate `Id - λ` (even to odd) and `N` (odd to
/// even).
pub fn tsygan_total_differential<M: CocyclicModule + ?Sized>(
    m: &M,
    c: &TsyganCochain<M::Key>,
) -> Result<TsyganCochain<M::Key>> {
    tsygan_total_differential_with(m, c, &|x| cyclic_n(m, x))
}

/// As [`tsygan_total_differential`] with a replacement for the norm
/// operator `N`.
pub fn tsygan_total_differential_with<M: CocyclicModule + ?Sized>(
    m: &M,
    c: &TsyganCochain<M::Key>,
    norm_op: &dyn Fn(&Chain<M::Key>) -> Result<Chain<M::Key>>,
) -> Result<TsyganCochain<M::Key>> {
    let mut out = TsyganCochain::new();
    for (&(p, _), x) in &c.entries {
        if p % 2 == 0 {
            out.accumulate(p, hochschild_b(m, x)?)?;
            out.accumulate(p + 1, one_minus_lambda(m, x)?)?;
        } else {
            out.accumulate(p, bar_b_prime(m, x)?.neg())?;
            out.accumulate(p + 1, norm_op(x)?)?;
        }
    }
    out.entries.retain(|_, v| !v.is_zero());
    Ok(out)
}
