//! Cocyclic modules over exact rationals.
//!
//! A module is described by its structure maps on basis keys; every map is
//! extended linearly to finitely supported [`Chain`]s. Carriers that are
//! infinite-dimensional (simplex chains, Hopf words) are never materialised:
//! maps are evaluated on demand.
//!
//! Conventions, for `x` in degree `n`:
//!
//! - cofaces `d_i: Cⁿ → Cⁿ⁺¹`, `0 ≤ i ≤ n+1`;
//! - codegeneracies `s_j: Cⁿ → Cⁿ⁻¹`, `0 ≤ j ≤ n-1`;
//! - cyclic operator `t_n: Cⁿ → Cⁿ` with `t_n^{n+1} = Id`.

mod algebra;
mod chain;
mod complexes;
mod diagonal;
mod identities;
mod mixed;
mod mutation;
mod normalize;
mod operators;

pub use algebra::{AlgebraCochains, FiniteAlgebra, TupleKey};
pub use chain::Chain;
pub use complexes::{
    periodic_differential, tsygan_total_differential, tsygan_total_differential_with,
    PeriodicImage, TruncatedCochain, TsyganCochain,
};
pub use diagonal::{Diagonal, Pair};
pub use identities::{
    check_identities, norm_estimate_check, random_chain, IdentityCheck, IdentityFailure,
    IdentityReport, NormEstimateReport, NormViolation,
};
pub use mixed::{
    presentation_from_module, Direction, MixedComplexPresentation, PresentationJson, Side,
};
pub use mutation::{Mutated, Mutation};
pub use normalize::{asymptotic_normalize, NormalizationReport, Normalized};
pub use operators::{
    bar_b_prime, codegeneracy, coface, connes_b, cyclic, cyclic_n, cyclic_pow, hochschild_b,
    lambda, one_minus_lambda,
};

use std::fmt::{Debug, Display};

use rand::RngCore;

use crate::{Rational, Result};

/// A linear combination of basis keys, as produced by a structure map.
pub type Terms<K> = Vec<(K, Rational)>;

/// Structure maps of a cocyclic module, given on basis keys.
///
/// Index ranges are validated by the linear extensions in this module, so
/// implementations may assume `i ≤ n+1`, `j ≤ n-1` and `key` in degree `n`.
pub trait CocyclicModule {
    type Key: Ord + Clone + Debug + Display;

    fn name(&self) -> String;

    fn coface_key(&self, n: usize, i: usize, key: &Self::Key) -> Result<Terms<Self::Key>>;

    fn codegeneracy_key(&self, n: usize, j: usize, key: &Self::Key) -> Result<Terms<Self::Key>>;

    fn cyclic_key(&self, n: usize, key: &Self::Key) -> Result<Terms<Self::Key>>;

    /// A random basis key of the given degree.
    fn random_key(&self, degree: usize, rng: &mut dyn RngCore) -> Self::Key;

    /// Full basis of a degree, when it is finite and small enough to enumerate.
    fn basis(&self, _degree: usize) -> Option<Vec<Self::Key>> {
        None
    }

    fn norm(&self, _x: &Chain<Self::Key>) -> Option<Rational> {
        None
    }

    /// The scalar `κ_n` in `s_j d_i = κ_n · Id` (`i ∈ {j, j+1}`) on degree `n`;
    /// `1` for an honest cocyclic module.
    fn degeneracy_face_scale(&self, _n: usize) -> Rational {
        num::One::one()
    }
}
