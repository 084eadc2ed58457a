//! Shuffles and external cup products into the diagonal `Diag(C ⊗ D)`.

use num::One;
use serde::{Deserialize, Serialize};

use crate::cocyclic::{coface, hochschild_b, Chain, CocyclicModule, Diagonal, Pair};
use crate::{Rational, Result};

/// A `(p, q)`-shuffle `μ`, stored as the images of the two blocks
/// (1-based, increasing): `first = μ(1..p)`, `second = μ(p+1..p+q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shuffle {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub sign: i32,
}

impl Shuffle {
    /// The permutation as the word `μ(1) … μ(p+q)`.
    pub fn permutation(&self) -> Vec<usize> {
        self.first.iter().chain(&self.second).copied().collect()
    }
}

/// All `binom(p+q, p)` shuffles, lexicographic in `first`.
pub fn shuffles(p: usize, q: usize) -> Vec<Shuffle> {
    let n = p + q;
    let mut out = Vec::new();
    let mut first = Vec::with_capacity(p);
    enumerate(1, n, p, &mut first, &mut out);
    out
}

fn enumerate(start: usize, n: usize, p: usize, first: &mut Vec<usize>, out: &mut Vec<Shuffle>) {
    if first.len() == p {
        let second = (1..=n).filter(|i| !first.contains(i)).collect();
        // inversions: pairs (a ∈ first, b ∈ second) with b < a
        let inversions: usize = first.iter().enumerate().map(|(k, a)| a - 1 - k).sum();
        out.push(Shuffle {
            first: first.clone(),
            second,
            sign: if inversions % 2 == 0 { 1 } else { -1 },
        });
        return;
    }
    let remaining = p - first.len();
    for a in start..=n + 1 - remaining {
        first.push(a);
        enumerate(a + 1, n, p, first, out);
        first.pop();
    }
}

fn apply_cofaces<M: CocyclicModule + ?Sized>(
    m: &M,
    x: &Chain<M::Key>,
    indices: impl IntoIterator<Item = usize>,
) -> Result<Chain<M::Key>> {
    let mut c = x.clone();
    for i in indices {
        c = coface(m, i, &c)?;
    }
    Ok(c)
}

fn tensor<A: Ord + Clone, B: Ord + Clone>(
    degree: usize,
    u: &Chain<A>,
    v: &Chain<B>,
    scale: &Rational,
    out: &mut Chain<Pair<A, B>>,
) {
    debug_assert_eq!(out.degree(), degree);
    for (ku, cu) in u.iter() {
        for (kv, cv) in v.iter() {
            out.add_term(Pair(ku.clone(), kv.clone()), &(scale * cu * cv));
        }
    }
}

/// `u ∪ v = Σ_{μ ∈ Sh(k, n-k)} sign(μ) d_{μ̄(n)}…d_{μ̄(k+1)} u ⊗ d_{μ̄(k)}…d_{μ̄(1)} v`
/// with `μ̄ = μ - 1` and `k = deg u`.
pub fn cup_diagonal<C: CocyclicModule, D: CocyclicModule>(
    diag: &Diagonal<C, D>,
    u: &Chain<C::Key>,
    v: &Chain<D::Key>,
) -> Result<Chain<Pair<C::Key, D::Key>>> {
    let k = u.degree();
    let n = k + v.degree();
    let mut out = Chain::zero(n);
    for mu in shuffles(k, n - k) {
        let du = apply_cofaces(&diag.left, u, mu.second.iter().map(|i| i - 1))?;
        let dv = apply_cofaces(&diag.right, v, mu.first.iter().map(|i| i - 1))?;
        tensor(n, &du, &dv, &Rational::from_integer(mu.sign.into()), &mut out);
    }
    Ok(out)
}

/// `u ⌣ v = d_n…d_{k+1} u ⊗ d₀^k v`.
pub fn cup_alexander_whitney<C: CocyclicModule, D: CocyclicModule>(
    diag: &Diagonal<C, D>,
    u: &Chain<C::Key>,
    v: &Chain<D::Key>,
) -> Result<Chain<Pair<C::Key, D::Key>>> {
    let k = u.degree();
    let n = k + v.degree();
    let du = apply_cofaces(&diag.left, u, k + 1..=n)?;
    let dv = apply_cofaces(&diag.right, v, std::iter::repeat_n(0, k))?;
    let mut out = Chain::zero(n);
    tensor(n, &du, &dv, &Rational::one(), &mut out);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CupKind {
    Shuffle,
    AlexanderWhitney,
}

pub fn cup<C: CocyclicModule, D: CocyclicModule>(
    diag: &Diagonal<C, D>,
    kind: CupKind,
    u: &Chain<C::Key>,
    v: &Chain<D::Key>,
) -> Result<Chain<Pair<C::Key, D::Key>>> {
    match kind {
        CupKind::Shuffle => cup_diagonal(diag, u, v),
        CupKind::AlexanderWhitney => cup_alexander_whitney(diag, u, v),
    }
}

/// `b(u ∪ v) - b(u) ∪ v - (-1)^k u ∪ b(v)`.
pub fn leibniz_defect<C: CocyclicModule, D: CocyclicModule>(
    diag: &Diagonal<C, D>,
    kind: CupKind,
    u: &Chain<C::Key>,
    v: &Chain<D::Key>,
) -> Result<Chain<Pair<C::Key, D::Key>>> {
    let k = u.degree();
    let lhs = hochschild_b(diag, &cup(diag, kind, u, v)?)?;
    let mut rhs = cup(diag, kind, &hochschild_b(&diag.left, u)?, v)?;
    let sign = Rational::from_integer(if k % 2 == 0 { 1.into() } else { (-1).into() });
    rhs.add_scaled(&sign, &cup(diag, kind, u, &hochschild_b(&diag.right, v)?)?)?;
    lhs.sub(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charmaps::{HopfModule, HopfWord};
    use crate::cocyclic::random_chain;
    use crate::rational::binomial;
    use crate::simplex::{SimplexModule, SimplexPoint};
    use num::{ToPrimitive, Zero};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sign_of_permutation(w: &[usize]) -> i32 {
        let mut inv = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn shuffle_counts_and_signs() {
        assert_eq!(shuffles(2, 2).len(), 6);
        let id = shuffles(0, 3);
        assert_eq!(id.len(), 1);
        assert_eq!((id[0].permutation(), id[0].sign), (vec![1, 2, 3], 1));
        let mut s11: Vec<i32> = shuffles(1, 1).iter().map(|s| s.sign).collect();
        s11.sort();
        assert_eq!(s11, vec![-1, 1]);
        for n in 0..=10usize {
            for p in 0..=n {
                let sh = shuffles(p, n - p);
                assert_eq!(sh.len(), binomial(n as u64, p as u64).to_usize().unwrap());
                for s in &sh {
                    assert_eq!(s.sign, sign_of_permutation(&s.permutation()));
                    assert!(s.first.windows(2).all(|w| w[0] < w[1]));
                    assert!(s.second.windows(2).all(|w| w[0] < w[1]));
                }
                assert!(sh.windows(2).all(|w| w[0].first < w[1].first));
            }
        }
    }

    #[test]
    fn degree_zero_cup_is_tensor() {
        let diag = Diagonal::new(SimplexModule, HopfModule);
        let u = Chain::basis(0, SimplexPoint::basepoint());
        let v = Chain::basis(0, HopfWord::units(0));
        let c = cup_diagonal(&diag, &u, &v).unwrap();
        assert_eq!(c, Chain::basis(0, Pair(SimplexPoint::basepoint(), HopfWord::units(0))));
    }

    #[test]
    fn alexander_whitney_is_leibniz() {
        let diag = Diagonal::new(SimplexModule, SimplexModule);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 0..=4usize {
            for k in 0..=n {
                for _ in 0..3 {
                    let u = random_chain(&SimplexModule, k, &mut rng);
                    let v = random_chain(&SimplexModule, n - k, &mut rng);
                    let d = leibniz_defect(&diag, CupKind::AlexanderWhitney, &u, &v).unwrap();
                    assert!(d.is_zero(), "k = {k}, n = {n}: {d}");
                }
            }
        }
    }

    #[test]
    fn shuffle_cup_has_leibniz_defect() {
        let diag = Diagonal::new(SimplexModule, SimplexModule);
        let u = Chain::basis(0, SimplexPoint::basepoint());
        let d = leibniz_defect(&diag, CupKind::Shuffle, &u, &u).unwrap();
        // b(* ⊗ *) - d₀* ⊗ d₀* + d₀* ⊗ d₁* - d₀* ⊗ d₀* + d₁* ⊗ d₀*
        let (lo, hi) = (SimplexPoint::cone(1), SimplexPoint::new(vec![Rational::one()]).unwrap());
        let mut expected = Chain::zero(1);
        for (a, b, c) in [(&lo, &lo, -1), (&hi, &hi, -1), (&lo, &hi, 1), (&hi, &lo, 1)] {
            expected.add_term(Pair(a.clone(), b.clone()), &Rational::from_integer(c.into()));
        }
        assert_eq!(d, expected);
    }

    #[test]
    fn cup_norm_bound() {
        let diag = Diagonal::new(SimplexModule, SimplexModule);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in 0..=5usize {
            for _ in 0..5 {
                let us: Vec<_> = (0..=n).map(|k| random_chain(&SimplexModule, k, &mut rng)).collect();
                let vs: Vec<_> = (0..=n).map(|k| random_chain(&SimplexModule, k, &mut rng)).collect();
                let mut total = Chain::zero(n);
                let mut bound = Rational::zero();
                for k in 0..=n {
                    let c = cup_diagonal(&diag, &us[k], &vs[n - k]).unwrap();
                    total.add_scaled(&Rational::one(), &c).unwrap();
                    bound += Rational::from(binomial(n as u64, k as u64))
                        * us[k].l1_norm()
                        * vs[n - k].l1_norm();
                }
                assert!(total.l1_norm() <= bound);
            }
        }
    }
}
