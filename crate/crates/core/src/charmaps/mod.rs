//! Cup products on the diagonal, the polynomial Hopf cocyclic module and
//! the characteristic maps carrying simplex cochains to Fredholm
//! functionals.

mod chi;
mod cup;
mod hopf;
mod iota;

pub use chi::{
    chi_evaluate, eta_index_evaluator, general_even_index_pairing, ChiEvaluator,
    GeneralEvenPairing, GeneralEvenTerm,
};
pub use cup::{
    cup, cup_alexander_whitney, cup_diagonal, leibniz_defect, shuffles, CupKind, Shuffle,
};
pub use hopf::{multiply_pairs, HopfModule, HopfWord};
pub use iota::{
    alpha, alpha_partial_sum, eta_cochain, eta_expand, fundamental_cocycle, fundamental_power,
    iota_cochain, iota_expand, EtaExpansion, HopfSimplexChain, IotaExpansion, IotaTerm,
};
