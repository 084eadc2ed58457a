//! The diagonal `Diag(C ⊗ D)` of two cocyclic modules: every structure map
//! acts on both tensor factors at once.

use std::fmt;

use rand::RngCore;

use super::{CocyclicModule, Terms};
use crate::Result;

/// Basis key `u ⊗ v` of the diagonal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair<A, B>(pub A, pub B);

impl<A: fmt::Display, B: fmt::Display> fmt::Display for Pair<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} | {})", self.0, self.1)
    }
}

#[derive(Clone, Debug)]
pub struct Diagonal<C, D> {
    pub left: C,
    pub right: D,
}

impl<C, D> Diagonal<C, D> {
    pub fn new(left: C, right: D) -> Self {
        Self { left, right }
    }
}

fn tensor<A: Clone, B: Clone>(a: Terms<A>, b: Terms<B>) -> Terms<Pair<A, B>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (ka, va) in &a {
        for (kb, vb) in &b {
            out.push((Pair(ka.clone(), kb.clone()), va * vb));
        }
    }
    out
}

impl<C: CocyclicModule, D: CocyclicModule> CocyclicModule for Diagonal<C, D> {
    type Key = Pair<C::Key, D::Key>;

    fn name(&self) -> String {
        format!("Diag({} ⊗ {})", self.left.name(), self.right.name())
    }

    fn coface_key(&self, n: usize, i: usize, key: &Self::Key) -> Result<Terms<Self::Key>> {
        Ok(tensor(
            self.left.coface_key(n, i, &key.0)?,
            self.right.coface_key(n, i, &key.1)?,
        ))
    }

    fn codegeneracy_key(&self, n: usize, j: usize, key: &Self::Key) -> Result<Terms<Self::Key>> {
        Ok(tensor(
            self.left.codegeneracy_key(n, j, &key.0)?,
            self.right.codegeneracy_key(n, j, &key.1)?,
        ))
    }

    fn cyclic_key(&self, n: usize, key: &Self::Key) -> Result<Terms<Self::Key>> {
        Ok(tensor(
            self.left.cyclic_key(n, &key.0)?,
            self.right.cyclic_key(n, &key.1)?,
        ))
    }

    fn random_key(&self, degree: usize, rng: &mut dyn RngCore) -> Self::Key {
        Pair(
            self.left.random_key(degree, rng),
            self.right.random_key(degree, rng),
        )
    }

    fn basis(&self, degree: usize) -> Option<Vec<Self::Key>> {
        let a = self.left.basis(degree)?;
        let b = self.right.basis(degree)?;
        Some(
            a.iter()
                .flat_map(|x| b.iter().map(move |y| Pair(x.clone(), y.clone())))
                .collect(),
        )
    }
}
