//! Deliberate corruptions of a module, for exercising the identity suites.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::{CocyclicModule, Terms};
use crate::rational::int;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Mutation {
    /// Multiplies `t_n` by 2 in one degree.
    ScaleCyclic { degree: usize },
    /// Flips the sign of `d_i` in one degree.
    NegateCoface { degree: usize, index: usize },
    /// Replaces `s_j` by zero in one degree.
    DropCodegeneracy { degree: usize, index: usize },
}

/// A module whose structure maps are corrupted by a [`Mutation`].
#[derive(Clone, Debug)]
pub struct Mutated<M> {
    pub inner: M,
    pub mutation: Mutation,
}

impl<M> Mutated<M> {
    pub fn new(inner: M, mutation: Mutation) -> Self {
        Self { inner, mutation }
    }
}

fn scale<K>(terms: Terms<K>, s: i64) -> Terms<K> {
    terms.into_iter().map(|(k, v)| (k, v * int(s))).collect()
}

impl<M: CocyclicModule> CocyclicModule for Mutated<M> {
    type Key = M::Key;

    fn name(&self) -> String {
        format!("{} with {:?}", self.inner.name(), self.mutation)
    }

    fn coface_key(&self, n: usize, i: usize, key: &M::Key) -> Result<Terms<M::Key>> {
        let terms = self.inner.coface_key(n, i, key)?;
        Ok(match self.mutation {
            Mutation::NegateCoface { degree, index } if degree == n && index == i => {
                scale(terms, -1)
            }
            _ => terms,
        })
    }

    fn codegeneracy_key(&self, n: usize, j: usize, key: &M::Key) -> Result<Terms<M::Key>> {
        Ok(match self.mutation {
            Mutation::DropCodegeneracy { degree, index } if degree == n && index == j => {
                Vec::new()
            }
            _ => self.inner.codegeneracy_key(n, j, key)?,
        })
    }

    fn cyclic_key(&self, n: usize, key: &M::Key) -> Result<Terms<M::Key>> {
        let terms = self.inner.cyclic_key(n, key)?;
        Ok(match self.mutation {
            Mutation::ScaleCyclic { degree } if degree == n => scale(terms, 2),
            _ => terms,
        })
    }

    fn random_key(&self, degree: usize, rng: &mut dyn RngCore) -> M::Key {
        self.inner.random_key(degree, rng)
    }

    fn basis(&self, degree: usize) -> Option<Vec<M::Key>> {
        self.inner.basis(degree)
    }

    fn norm(&self, x: &super::Chain<M::Key>) -> Option<crate::Rational> {
        self.inner.norm(x)
    }

    fn degeneracy_face_scale(&self, n: usize) -> crate::Rational {
        self.inner.degeneracy_face_scale(n)
    }
}
