//! The cocyclic module of geometric simplices and the universal even index
//! cocycle.
//!
//! A point of `Δⁿ` is stored by its inner coordinates `t₁ ≤ … ≤ t_n` in
//! `[0, 1]`; the implicit `t₀ = 0` and `t_{n+1} = 1` are not stored. The
//! degree-0 point is the basepoint `*`.
//!
//! - `δ_i` repeats `t_i` (so `δ₀` prepends 0 and `δ_{n+1}` appends 1);
//! - `σ_j` deletes `t_{j+1}`;
//! - `τ(t₁, …, t_n) = (t₂ - t₁, …, t_n - t₁, 1 - t₁)`.
//!
//! Chains carry exact rational coefficients and the `ℓ¹` norm on
//! coefficients.

use std::fmt;

use num::{One, Zero};
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::cocyclic::{
    coface, connes_b, cyclic_n, cyclic_pow, hochschild_b, periodic_differential, Chain,
    CocyclicModule, Terms, TruncatedCochain,
};
use crate::growth::{
    entire_test, nth_root_profile, precedes_prefix, EntireVerdict, GrowthSequence, GrowthVerdict,
    Parity,
};
use crate::rational::{factorial, frac, int, pow2, to_f64};
use crate::{Error, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimplexPoint {
    coords: Vec<Rational>,
}

impl SimplexPoint {
    /// Rejects coordinates outside `[0, 1]` or out of order.
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        let zero = Rational::zero();
        let one = Rational::one();
        if coords.iter().any(|t| t < &zero || t > &one) {
            return Err(Error::InvalidPoint("coordinate outside [0, 1]".into()));
        }
        if coords.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidPoint("coordinates are not monotone".into()));
        }
        Ok(Self { coords })
    }

    pub fn basepoint() -> Self {
        Self { coords: Vec::new() }
    }

    /// The cone point `(0, …, 0)` of `Δⁿ`.
    pub fn cone(n: usize) -> Self {
        Self {
            coords: vec![Rational::zero(); n],
        }
    }

    pub fn degree(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// `max t_i`, zero at the basepoint.
    pub fn point_norm(&self) -> Rational {
        self.coords.last().cloned().unwrap_or_else(Rational::zero)
    }

    /// Number of trailing coordinates equal to 1.
    pub fn trailing_ones(&self) -> usize {
        self.coords.iter().rev().take_while(|t| t.is_one()).count()
    }

    /// Gap times `(t₁, t₂ - t₁, …, 1 - t_n)`.
    pub fn gaps(&self) -> Vec<Rational> {
        let mut prev = Rational::zero();
        let mut out = Vec::with_capacity(self.coords.len() + 1);
        for t in &self.coords {
            out.push(t - &prev);
            prev = t.clone();
        }
        out.push(Rational::one() - prev);
        out
    }

    pub fn coface(&self, i: usize) -> Result<Self> {
        let n = self.degree();
        if i > n + 1 {
            return Err(Error::IndexOutOfRange {
                map: "coface",
                index: i,
                degree: n,
            });
        }
        let repeated = match i {
            0 => Rational::zero(),
            i if i == n + 1 => Rational::one(),
            i => self.coords[i - 1].clone(),
        };
        let mut coords = self.coords.clone();
        coords.insert(i.min(n), repeated);
        Ok(Self { coords })
    }

    pub fn codegeneracy(&self, j: usize) -> Result<Self> {
        let n = self.degree();
        if n == 0 || j >= n {
            return Err(Error::IndexOutOfRange {
                map: "codegeneracy",
                index: j,
                degree: n,
            });
        }
        let mut coords = self.coords.clone();
        coords.remove(j);
        Ok(Self { coords })
    }

    pub fn cyclic(&self) -> Self {
        let Some(t1) = self.coords.first() else {
            return self.clone();
        };
        let mut coords: Vec<Rational> = self.coords[1..].iter().map(|t| t - t1).collect();
        coords.push(Rational::one() - t1);
        Self { coords }
    }
}

impl fmt::Display for SimplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "*");
        }
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub type SimplexChain = Chain<SimplexPoint>;

/// `Δ•` as a cocyclic module.
#[derive(Clone, Copy, Debug, Default)]
pub struct SimplexModule;

impl CocyclicModule for SimplexModule {
    type Key = SimplexPoint;

    fn name(&self) -> String {
        "simplex".into()
    }

    fn coface_key(&self, _n: usize, i: usize, p: &SimplexPoint) -> Result<Terms<SimplexPoint>> {
        Ok(vec![(p.coface(i)?, Rational::one())])
    }

    fn codegeneracy_key(
        &self,
        _n: usize,
        j: usize,
        p: &SimplexPoint,
    ) -> Result<Terms<SimplexPoint>> {
        Ok(vec![(p.codegeneracy(j)?, Rational::one())])
    }

    fn cyclic_key(&self, _n: usize, p: &SimplexPoint) -> Result<Terms<SimplexPoint>> {
        Ok(vec![(p.cyclic(), Rational::one())])
    }

    /// Sorted coordinates drawn from `{0, 1/6, …, 1}`, with endpoints
    /// weighted up so that repeated and boundary coordinates occur often.
    fn random_key(&self, degree: usize, rng: &mut dyn RngCore) -> SimplexPoint {
        let mut coords: Vec<Rational> = (0..degree)
            .map(|_| match rng.random_range(0..10) {
                0 | 1 => Rational::zero(),
                2 | 3 => Rational::one(),
                _ => frac(rng.random_range(0..=6), 6),
            })
            .collect();
        coords.sort();
        SimplexPoint { coords }
    }

    fn norm(&self, x: &SimplexChain) -> Option<Rational> {
        Some(chain_norm(x))
    }
}

/// `Σ |coefficient|` over the support.
pub fn chain_norm(c: &SimplexChain) -> Rational {
    c.l1_norm()
}

fn cone_chain(n: usize) -> SimplexChain {
    Chain::basis(n, SimplexPoint::cone(n))
}

/// `δ₀ⁿ(*)`, computed through the module maps.
fn delta0_power(n: usize) -> Result<SimplexChain> {
    let mut c = Chain::basis(0, SimplexPoint::basepoint());
    for _ in 0..n {
        c = coface(&SimplexModule, 0, &c)?;
    }
    Ok(c)
}

/// `φ_{2n}`: `*` for `n = 0`, otherwise
/// `((-1)ⁿ / (2ⁿ n!)) Σ_{r=0}^{n} τ^{2r} δ₀^{2n}(*)`.
pub fn universal_cocycle(n: usize) -> Result<SimplexChain> {
    let base = delta0_power(2 * n)?;
    if n == 0 {
        return Ok(base);
    }
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let coeff = Rational::new(int(sign).to_integer(), pow2(n as u32) * factorial(n as u64));
    let mut sum = Chain::zero(2 * n);
    let mut rotated = base;
    for r in 0..=n {
        if r > 0 {
            rotated = cyclic_pow(&SimplexModule, &rotated, 2)?;
        }
        sum.add_scaled(&Rational::one(), &rotated)?;
    }
    Ok(sum.scale(&coeff))
}

/// `(φ₀, φ₂, …, φ_{2N})` as an even truncated cochain.
pub fn universal_cocycle_prefix(n_max: usize) -> Result<TruncatedCochain<SimplexPoint>> {
    let comps = (0..=n_max).map(universal_cocycle).collect::<Result<_>>()?;
    TruncatedCochain::new(&SimplexModule, 0, comps)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueEntry {
    pub degree: usize,
    pub zero: bool,
    pub residue: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplayCheck {
    pub identity: String,
    pub degree: usize,
    pub index: usize,
    pub passed: bool,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleWindowReport {
    pub window: usize,
    /// `b φ_{2n} + B φ_{2n+2}` for `0 ≤ n < N`.
    pub residues: Vec<ResidueEntry>,
    pub boundary_truncated_degree: usize,
    /// `b φ₀` and `B φ₂`, whose sum is the first residue.
    pub first_cancellation: (String, String),
    /// `B(τ^{2r} δ₀^{2n}(*))` against `2 N δ₀^{2n-1}(*)` (`r < n`) or 0.
    pub intermediate: Vec<DisplayCheck>,
    /// Odd-degree displays in their degree-consistent reading.
    pub odd_displays: Vec<DisplayCheck>,
    pub closure_passed: bool,
    pub intermediate_passed: bool,
    pub odd_displays_passed: bool,
    pub all_passed: bool,
}

fn display_check(
    identity: &str,
    degree: usize,
    index: usize,
    lhs: &SimplexChain,
    rhs: &SimplexChain,
) -> DisplayCheck {
    DisplayCheck {
        identity: identity.into(),
        degree,
        index,
        passed: lhs == rhs,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

/// Exact `(b + B)`-closure of the universal cocycle on `φ₀, …, φ_{2N}`
/// together with the operator identities its proof rests on.
pub fn verify_cocycle_window(n_max: usize) -> Result<CocycleWindowReport> {
    verify_cocycle_window_for(&universal_cocycle_prefix(n_max)?)
}

/// As [`verify_cocycle_window`] for an arbitrary even prefix.
pub fn verify_cocycle_window_for(
    prefix: &TruncatedCochain<SimplexPoint>,
) -> Result<CocycleWindowReport> {
    let n_max = prefix.truncation();
    if n_max < 1 || prefix.parity() != 0 {
        return Err(Error::InvalidInput("window needs an even prefix with N ≥ 1".into()));
    }
    let m = &SimplexModule;
    let image = periodic_differential(m, prefix)?;
    let residues: Vec<ResidueEntry> = image
        .interior()
        .iter()
        .map(|c| ResidueEntry {
            degree: c.degree(),
            zero: c.is_zero(),
            residue: c.to_string(),
        })
        .collect();
    let comps = prefix.components();
    let first_cancellation = (
        hochschild_b(m, &comps[0])?.to_string(),
        connes_b(m, &comps[1])?.to_string(),
    );

    let mut intermediate = Vec::new();
    for n in 1..=n_max {
        let target = cyclic_n(m, &delta0_power(2 * n - 1)?)?.scale(&int(2));
        let mut rotated = cone_chain(2 * n);
        for r in 0..=n {
            if r > 0 {
                rotated = cyclic_pow(m, &rotated, 2)?;
            }
            let lhs = connes_b(m, &rotated)?;
            let rhs = if r < n { target.clone() } else { Chain::zero(2 * n - 1) };
            intermediate.push(display_check(
                "B(t^{2r} d0^{2n}(*))",
                2 * n,
                r,
                &lhs,
                &rhs,
            ));
        }
    }

    let mut odd_displays = Vec::new();
    for n in 0..n_max {
        // B_{2n+1}(τ^s δ₀^{2n+1}(*)) = 2 N_{2n} δ₀^{2n}(*).
        let target = cyclic_n(m, &delta0_power(2 * n)?)?.scale(&int(2));
        let mut rotated = cone_chain(2 * n + 1);
        for s in 0..=2 * n + 1 {
            if s > 0 {
                rotated = cyclic_pow(m, &rotated, 1)?;
            }
            let lhs = connes_b(m, &rotated)?;
            odd_displays.push(display_check(
                "B(t^s d0^{2n+1}(*))",
                2 * n + 1,
                s,
                &lhs,
                &target,
            ));
        }
    }
    for n in 1..=n_max {
        // b_{2n-1}(τ^s δ₀^{2n-1}(*)) = τ^{s+1} δ₀^{2n}(*) (s even), τ^s δ₀^{2n}(*) (s odd).
        let cone = cone_chain(2 * n);
        let mut rotated = cone_chain(2 * n - 1);
        for s in 0..2 * n {
            if s > 0 {
                rotated = cyclic_pow(m, &rotated, 1)?;
            }
            let lhs = hochschild_b(m, &rotated)?;
            let power = if s % 2 == 0 { s + 1 } else { s };
            let rhs = cyclic_pow(m, &cone, power as i64)?;
            odd_displays.push(display_check(
                "b(t^s d0^{2n-1}(*))",
                2 * n - 1,
                s,
                &lhs,
                &rhs,
            ));
        }
    }

    let closure_passed = residues.iter().all(|r| r.zero);
    let intermediate_passed = intermediate.iter().all(|c| c.passed);
    let odd_displays_passed = odd_displays.iter().all(|c| c.passed);
    Ok(CocycleWindowReport {
        window: n_max,
        residues,
        boundary_truncated_degree: image.boundary_truncated_degree,
        first_cancellation,
        intermediate,
        odd_displays,
        closure_passed,
        intermediate_passed,
        odd_displays_passed,
        all_passed: closure_passed && intermediate_passed && odd_displays_passed,
    })
}

/// Exact `(n+1) / (2ⁿ n!)`.
pub fn cocycle_norm_law(n: usize) -> Rational {
    Rational::new(int(n as i64 + 1).to_integer(), pow2(n as u32) * factorial(n as u64))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthClassification {
    pub prefix_length: usize,
    /// `‖φ_{2n}‖` as exact rationals.
    pub norms: Vec<String>,
    pub norm_law_exact: bool,
    /// `‖φ_{2n}‖^{1/n}` for `1 ≤ n ≤ N`.
    pub root_profile: Vec<f64>,
    pub e1_verdict: GrowthVerdict,
    pub entire: EntireVerdict,
    pub e1_consistent: bool,
    pub not_entire: bool,
    pub all_passed: bool,
}

pub const E1_PROBE_RADII: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

/// Feeds `‖φ_{2n}‖`, `n ≤ N`, to the growth procedures: membership in
/// `E(1)` on the prefix, and the entire test (expected to fail).
pub fn classify_cocycle_growth(n_max: usize) -> Result<GrowthClassification> {
    if n_max < 16 {
        return Err(Error::InvalidInput("growth classification needs N ≥ 16".into()));
    }
    let norms: Vec<Rational> = (0..=n_max)
        .map(|n| Ok(chain_norm(&universal_cocycle(n)?)))
        .collect::<Result<_>>()?;
    let norm_law_exact = norms
        .iter()
        .enumerate()
        .all(|(n, v)| *v == cocycle_norm_law(n));
    let seq = GrowthSequence::tabulated(
        "universal cocycle norms",
        &norms.iter().map(to_f64).collect::<Vec<_>>(),
    )?;
    let ones = GrowthSequence::ones(n_max);
    let root_profile = nth_root_profile(&seq, &ones, n_max)?;
    let e1_verdict = precedes_prefix(&seq, &ones, &E1_PROBE_RADII, n_max)?;
    let entire = entire_test(&seq, Parity::Even, n_max)?;
    let e1_consistent = e1_verdict.holds();
    let not_entire = !entire.entire_consistent;
    Ok(GrowthClassification {
        prefix_length: n_max,
        norms: norms.iter().map(ToString::to_string).collect(),
        norm_law_exact,
        root_profile,
        e1_verdict,
        entire,
        e1_consistent,
        not_entire,
        all_passed: norm_law_exact && e1_consistent && not_entire,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocyclic::check_identities;
    use crate::growth::Relation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pt(coords: &[(i64, i64)]) -> SimplexPoint {
        SimplexPoint::new(coords.iter().map(|&(p, q)| frac(p, q)).collect()).unwrap()
    }

    #[test]
    fn coface_examples() {
        let star = SimplexPoint::basepoint();
        assert_eq!(star.coface(0).unwrap(), pt(&[(0, 1)]));
        assert_eq!(star.coface(1).unwrap(), pt(&[(1, 1)]));
        assert!(star.coface(2).is_err());
        assert_eq!(
            pt(&[(1, 3), (1, 2)]).coface(2).unwrap(),
            pt(&[(1, 3), (1, 2), (1, 2)])
        );
    }

    #[test]
    fn cyclic_examples() {
        let p = pt(&[(0, 1), (0, 1)]);
        assert_eq!(p.cyclic(), pt(&[(0, 1), (1, 1)]));
        assert_eq!(p.cyclic().cyclic(), pt(&[(1, 1), (1, 1)]));
        assert_eq!(pt(&[(1, 3)]).codegeneracy(0).unwrap(), SimplexPoint::basepoint());
    }

    #[test]
    fn invalid_points_are_rejected() {
        assert!(SimplexPoint::new(vec![frac(1, 2), frac(1, 3)]).is_err());
        assert!(SimplexPoint::new(vec![frac(3, 2)]).is_err());
    }

    #[test]
    fn b_of_basepoint() {
        let b = hochschild_b(&SimplexModule, &Chain::basis(0, SimplexPoint::basepoint())).unwrap();
        let expected = Chain::from_terms(1, [(pt(&[(0, 1)]), int(1)), (pt(&[(1, 1)]), int(-1))]);
        assert_eq!(b, expected);
    }

    #[test]
    fn first_components() {
        assert_eq!(universal_cocycle(0).unwrap(), Chain::basis(0, SimplexPoint::basepoint()));
        let phi2 = universal_cocycle(1).unwrap();
        let expected = Chain::from_terms(
            2,
            [
                (pt(&[(0, 1), (0, 1)]), frac(-1, 2)),
                (pt(&[(1, 1), (1, 1)]), frac(-1, 2)),
            ],
        );
        assert_eq!(phi2, expected);
        let phi4 = universal_cocycle(2).unwrap();
        assert_eq!(phi4.len(), 3);
        for (p, c) in phi4.iter() {
            assert_eq!(*c, frac(1, 8));
            assert_eq!(p.trailing_ones() % 2, 0);
            assert!(p.coords().iter().all(|t| t.is_zero() || t.is_one()));
        }
    }

    #[test]
    fn rotations_of_cone_add_trailing_ones() {
        for n in 1..=6 {
            let mut p = SimplexPoint::cone(2 * n);
            for s in 0..=2 * n {
                assert_eq!(p.trailing_ones(), s);
                assert!(p.coords().iter().all(|t| t.is_zero() || t.is_one()));
                p = p.cyclic();
            }
        }
    }

    #[test]
    fn window_of_eight_closes() {
        let r = verify_cocycle_window(8).unwrap();
        assert!(r.closure_passed, "{:?}", r.residues);
        assert!(r.intermediate_passed);
        assert!(r.odd_displays_passed, "{:?}", r.odd_displays.iter().find(|c| !c.passed));
        assert_eq!(r.boundary_truncated_degree, 17);
        assert_eq!(r.residues.len(), 8);
    }

    #[test]
    fn first_cancellation_witness() {
        let r = verify_cocycle_window(1).unwrap();
        assert_eq!(r.first_cancellation.0, "1·(0) + -1·(1)");
        assert_eq!(r.first_cancellation.1, "-1·(0) + 1·(1)");
    }

    #[test]
    fn mutated_prefix_fails() {
        let mut comps: Vec<SimplexChain> = (0..=3).map(|n| universal_cocycle(n).unwrap()).collect();
        comps[2] = comps[2].scale(&int(2));
        let prefix = TruncatedCochain::new(&SimplexModule, 0, comps).unwrap();
        let r = verify_cocycle_window_for(&prefix).unwrap();
        assert!(!r.closure_passed);
    }

    #[test]
    fn norms_follow_the_law() {
        for n in 0..=12 {
            assert_eq!(chain_norm(&universal_cocycle(n).unwrap()), cocycle_norm_law(n));
        }
        assert_eq!(chain_norm(&Chain::zero(3)), Rational::zero());
    }

    #[test]
    fn growth_classification() {
        let g = classify_cocycle_growth(40).unwrap();
        assert!(g.all_passed);
        assert!(g.root_profile[15] < 0.2);
        // Radius 8 has not started to decay by n = 16.
        let short = classify_cocycle_growth(16).unwrap();
        assert_eq!(short.e1_verdict.relation, Relation::Inconclusive { radius: 8.0 });
        assert!(!short.all_passed);
        assert!(classify_cocycle_growth(15).is_err());
    }

    #[test]
    fn simplex_identities_through_degree_six() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = check_identities(&SimplexModule, 6, 4, &mut rng).unwrap();
        assert!(r.all_passed, "{:?}", r.failures);
    }

    #[test]
    fn structure_maps_preserve_monotonicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in 1..=8 {
            let p = SimplexModule.random_key(n, &mut rng);
            for i in 0..=n + 1 {
                let q = p.coface(i).unwrap();
                assert!(SimplexPoint::new(q.coords().to_vec()).is_ok());
            }
            assert!(SimplexPoint::new(p.cyclic().coords().to_vec()).is_ok());
        }
    }
}
