use std::collections::BTreeMap;
use std::fmt;

use num::{Signed, Zero};

use crate::{Error, Rational, Result};

/// A finitely supported rational combination of basis keys in one degree.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain<K: Ord> {
    degree: usize,
    terms: BTreeMap<K, Rational>,
}

impl<K: Ord + Clone> Chain<K> {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(degree: usize, key: K) -> Self {
        Self::from_terms(degree, [(key, num::One::one())])
    }

    /// Sums duplicate keys and drops zeros.
    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (K, Rational)>) -> Self {
        let mut c = Self::zero(degree);
        for (k, v) in terms {
            c.add_term(k, &v);
        }
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn coeff(&self, key: &K) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, key: K, coeff: &Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `self += coeff · other`.
    pub fn add_scaled(&mut self, coeff: &Rational, other: &Chain<K>) -> Result<()> {
        if other.is_zero() || coeff.is_zero() {
            return Ok(());
        }
        self.check_degree(other)?;
        for (k, v) in &other.terms {
            self.add_term(k.clone(), &(v * coeff));
        }
        Ok(())
    }

    pub fn add(&self, other: &Chain<K>) -> Result<Chain<K>> {
        let mut out = self.clone();
        out.add_scaled(&num::One::one(), other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Chain<K>) -> Result<Chain<K>> {
        let mut out = self.clone();
        out.add_scaled(&-Rational::from_integer(1.into()), other)?;
        Ok(out)
    }

    pub fn scale(&self, s: &Rational) -> Chain<K> {
        if s.is_zero() {
            return Self::zero(self.degree);
        }
        Self {
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * s)).collect(),
        }
    }

    pub fn neg(&self) -> Chain<K> {
        Self {
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    /// `Σ |coefficient|`.
    pub fn l1_norm(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, v| acc + v.abs())
    }

    /// `max |coefficient|`.
    pub fn max_norm(&self) -> Rational {
        self.terms
            .values()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn check_degree(&self, other: &Chain<K>) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    /// Applies a linear map given on keys.
    pub fn map_linear<L: Ord + Clone>(
        &self,
        degree: usize,
        mut f: impl FnMut(&K) -> Result<Vec<(L, Rational)>>,
    ) -> Result<Chain<L>> {
        let mut out = Chain::zero(degree);
        for (k, v) in &self.terms {
            for (l, w) in f(k)? {
                out.add_term(l, &(w * v));
            }
        }
        Ok(out)
    }
}

impl<K: Ord + fmt::Display> fmt::Display for Chain<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, v)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{v}·{k}")?;
        }
        Ok(())
    }
}
