//! The cocyclic module of cochains on a finite-dimensional algebra.
//!
//! Degree `n` is `Hom(A^{⊗ n+1}, ℚ)`, presented in the dual basis `e*_g`
//! indexed by tuples `g = (g_0, …, g_n)` of basis indices:
//!
//! - `(d_i φ)(a_0, …, a_{n+1}) = φ(a_0, …, a_i a_{i+1}, …, a_{n+1})`, `i ≤ n`;
//! - `(d_{n+1} φ)(a_0, …, a_{n+1}) = φ(a_{n+1} a_0, a_1, …, a_n)`;
//! - `(s_j φ)(a_0, …, a_{n-1}) = φ(a_0, …, a_j, 1, a_{j+1}, …, a_{n-1})`;
//! - `(t φ)(a_0, …, a_n) = φ(a_n, a_0, …, a_{n-1})`.

use std::fmt;

use num::{One, Zero};
use rand::{Rng, RngCore};

use super::{Chain, CocyclicModule, Terms};
use crate::{Error, Rational, Result};

/// An associative unital algebra over ℚ given by structure constants.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteAlgebra {
    name: String,
    /// `mult[a][b]` are the coordinates of `e_a e_b`.
    mult: Vec<Vec<Vec<Rational>>>,
    unit: Vec<Rational>,
    multiplicative_basis: bool,
}

impl FiniteAlgebra {
    /// Validates associativity and the unit exactly.
    pub fn new(
        name: impl Into<String>,
        mult: Vec<Vec<Vec<Rational>>>,
        unit: Vec<Rational>,
    ) -> Result<Self> {
        let k = unit.len();
        if k == 0
            || mult.len() != k
            || mult.iter().any(|row| row.len() != k || row.iter().any(|v| v.len() != k))
        {
            return Err(Error::InvalidModule("structure constants have wrong shape".into()));
        }
        let multiplicative_basis = mult.iter().flatten().all(|v| {
            let nonzero: Vec<&Rational> = v.iter().filter(|c| !c.is_zero()).collect();
            nonzero.is_empty() || (nonzero.len() == 1 && nonzero[0].is_one())
        });
        let alg = Self {
            name: name.into(),
            mult,
            unit,
            multiplicative_basis,
        };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<()> {
        let k = self.dim();
        let basis = |a: usize| {
            let mut v = vec![Rational::zero(); k];
            v[a] = Rational::one();
            v
        };
        for a in 0..k {
            if self.product(&self.unit, &basis(a)) != basis(a)
                || self.product(&basis(a), &self.unit) != basis(a)
            {
                return Err(Error::InvalidModule(format!("unit fails on e_{a}")));
            }
            for b in 0..k {
                for c in 0..k {
                    let left = self.product(&self.mult[a][b], &basis(c));
                    let right = self.product(&basis(a), &self.mult[b][c]);
                    if left != right {
                        return Err(Error::InvalidModule(format!(
                            "not associative on (e_{a}, e_{b}, e_{c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Group algebra `ℚ[ℤ/m]`.
    pub fn cyclic_group(m: usize) -> Self {
        let mult = (0..m)
            .map(|a| {
                (0..m)
                    .map(|b| unit_vector(m, (a + b) % m))
                    .collect()
            })
            .collect();
        Self::new(format!("Q[Z/{m}]"), mult, unit_vector(m, 0)).expect("group algebra")
    }

    /// Dual numbers `ℚ[ε]/(ε²)` in the basis `1, ε`.
    pub fn dual_numbers() -> Self {
        let z = vec![Rational::zero(); 2];
        let mult = vec![
            vec![unit_vector(2, 0), unit_vector(2, 1)],
            vec![unit_vector(2, 1), z],
        ];
        Self::new("Q[e]/(e^2)", mult, unit_vector(2, 0)).expect("dual numbers")
    }

    /// The diagonal algebra `ℚᵏ` with idempotent basis.
    pub fn diagonal(k: usize) -> Self {
        let mult = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| {
                        if a == b {
                            unit_vector(k, a)
                        } else {
                            vec![Rational::zero(); k]
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(format!("Q^{k}"), mult, vec![Rational::one(); k]).expect("diagonal algebra")
    }

    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Every product of basis elements is zero or a basis element.
    pub fn has_multiplicative_basis(&self) -> bool {
        self.multiplicative_basis
    }

    pub fn product(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let k = self.dim();
        let mut out = vec![Rational::zero(); k];
        for a in 0..k {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..k {
                if y[b].is_zero() {
                    continue;
                }
                let s = &x[a] * &y[b];
                for c in 0..k {
                    if !self.mult[a][b][c].is_zero() {
                        out[c] += &s * &self.mult[a][b][c];
                    }
                }
            }
        }
        out
    }
}

fn unit_vector(k: usize, a: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); k];
    v[a] = Rational::one();
    v
}

/// Dual basis element `e*_g`, written `[g_0,…,g_n]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TupleKey(pub Vec<usize>);

impl fmt::Display for TupleKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Cochains on a [`FiniteAlgebra`].
///
/// With a multiplicative basis the norm is `max |φ(e_{g_0}, …, e_{g_n})|`,
/// for which every coface and the cyclic operator have norm at most 1.
#[derive(Clone, Debug)]
pub struct AlgebraCochains {
    algebra: FiniteAlgebra,
}

impl AlgebraCochains {
    pub fn new(algebra: FiniteAlgebra) -> Self {
        Self { algebra }
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    /// Evaluates a cochain on basis elements.
    pub fn evaluate(&self, phi: &Chain<TupleKey>, args: &[usize]) -> Rational {
        phi.coeff(&TupleKey(args.to_vec()))
    }
}

impl CocyclicModule for AlgebraCochains {
    type Key = TupleKey;

    fn name(&self) -> String {
        format!("cochains on {}", self.algebra.name)
    }

    fn coface_key(&self, n: usize, i: usize, key: &TupleKey) -> Result<Terms<TupleKey>> {
        let g = &key.0;
        let k = self.algebra.dim();
        let mut out = Vec::new();
        for x in 0..k {
            for y in 0..k {
                if i <= n {
                    let c = &self.algebra.mult[x][y][g[i]];
                    if c.is_zero() {
                        continue;
                    }
                    let mut h = Vec::with_capacity(n + 2);
                    h.extend_from_slice(&g[..i]);
                    h.push(x);
                    h.push(y);
                    h.extend_from_slice(&g[i + 1..]);
                    out.push((TupleKey(h), c.clone()));
                } else {
                    // a_{n+1} = e_y, a_0 = e_x, product e_y e_x.
                    let c = &self.algebra.mult[y][x][g[0]];
                    if c.is_zero() {
                        continue;
                    }
                    let mut h = Vec::with_capacity(n + 2);
                    h.push(x);
                    h.extend_from_slice(&g[1..]);
                    h.push(y);
                    out.push((TupleKey(h), c.clone()));
                }
            }
        }
        Ok(out)
    }

    fn codegeneracy_key(&self, _n: usize, j: usize, key: &TupleKey) -> Result<Terms<TupleKey>> {
        let g = &key.0;
        let u = &self.algebra.unit[g[j + 1]];
        if u.is_zero() {
            return Ok(Vec::new());
        }
        let mut h = g.clone();
        h.remove(j + 1);
        Ok(vec![(TupleKey(h), u.clone())])
    }

    fn cyclic_key(&self, _n: usize, key: &TupleKey) -> Result<Terms<TupleKey>> {
        let mut h = key.0.clone();
        h.rotate_left(1);
        Ok(vec![(TupleKey(h), Rational::one())])
    }

    fn random_key(&self, degree: usize, rng: &mut dyn RngCore) -> TupleKey {
        let k = self.algebra.dim();
        TupleKey((0..=degree).map(|_| rng.random_range(0..k)).collect())
    }

    fn basis(&self, degree: usize) -> Option<Vec<TupleKey>> {
        let k = self.algebra.dim();
        let count = k.checked_pow(degree as u32 + 1)?;
        if count > 4096 {
            return None;
        }
        Some(
            (0..count)
                .map(|mut idx| {
                    let mut g = vec![0; degree + 1];
                    for slot in g.iter_mut().rev() {
                        *slot = idx % k;
                        idx /= k;
                    }
                    TupleKey(g)
                })
                .collect(),
        )
    }

    fn norm(&self, x: &Chain<TupleKey>) -> Option<Rational> {
        self.algebra.multiplicative_basis.then(|| x.max_norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocyclic::{bar_b_prime, check_identities, coface, hochschild_b};
    use crate::rational::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn invalid_data_is_rejected() {
        let alg = FiniteAlgebra::cyclic_group(2);
        assert!(FiniteAlgebra::new("bad unit", alg.mult.clone(), unit_vector(2, 1)).is_err());
        // e_1 e_1 = e_2, e_2 e_1 = e_1, e_1 e_2 = 0: (e_1 e_1) e_1 ≠ e_1 (e_1 e_1).
        let z = || vec![Rational::zero(); 3];
        let mut mult = vec![vec![z(), z(), z()], vec![z(), z(), z()], vec![z(), z(), z()]];
        for a in 0..3 {
            mult[0][a] = unit_vector(3, a);
            mult[a][0] = unit_vector(3, a);
        }
        mult[1][1] = unit_vector(3, 2);
        mult[2][1] = unit_vector(3, 1);
        assert!(FiniteAlgebra::new("bad", mult, unit_vector(3, 0)).is_err());
    }

    #[test]
    fn two_dimensional_algebras_pass_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for alg in [FiniteAlgebra::cyclic_group(2), FiniteAlgebra::dual_numbers()] {
            let m = AlgebraCochains::new(alg);
            let report = check_identities(&m, 4, 3, &mut rng).unwrap();
            assert!(report.all_passed, "{:?}", report.failures);
        }
    }

    #[test]
    fn coface_evaluates_products() {
        // (d_0 e*_{[1]})(e_x, e_y) = 1 iff x + y = 1 mod 3.
        let m = AlgebraCochains::new(FiniteAlgebra::cyclic_group(3));
        let phi = Chain::basis(0, TupleKey(vec![1]));
        let d0 = coface(&m, 0, &phi).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                let expected = if (x + y) % 3 == 1 { int(1) } else { int(0) };
                assert_eq!(m.evaluate(&d0, &[x, y]), expected);
            }
        }
    }

    #[test]
    fn b_prime_in_degree_zero_is_d0() {
        let m = AlgebraCochains::new(FiniteAlgebra::dual_numbers());
        let phi = Chain::from_terms(0, [(TupleKey(vec![0]), int(2)), (TupleKey(vec![1]), int(-3))]);
        assert_eq!(bar_b_prime(&m, &phi).unwrap(), coface(&m, 0, &phi).unwrap());
        // b φ (a_0, a_1) = φ(a_0 a_1) - φ(a_1 a_0) vanishes on a commutative algebra.
        assert!(hochschild_b(&m, &phi).unwrap().is_zero());
    }
}
