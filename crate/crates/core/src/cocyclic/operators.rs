//! Linear extensions of the structure maps and the derived operators.

use num::One;

use super::{Chain, CocyclicModule};
use crate::{Error, Rational, Result};

fn sign(k: usize) -> Rational {
    if k % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub fn coface<M: CocyclicModule + ?Sized>(
    m: &M,
    i: usize,
    x: &Chain<M::Key>,
) -> Result<Chain<M::Key>> {
    let n = x.degree();
    if i > n + 1 {
        return Err(Error::IndexOutOfRange {
            map: "coface",
            index: i,
            degree: n,
        });
    }
    x.map_linear(n + 1, |k| m.coface_key(n, i, k))
}

pub fn codegeneracy<M: CocyclicModule + ?Sized>(
    m: &M,
    j: usize,
    x: &Chain<M::Key>,
) -> Result<Chain<M::Key>> {
    let n = x.degree();
    if n == 0 || j > n - 1 {
        return Err(Error::IndexOutOfRange {
            map: "codegeneracy",
            index: j,
            degree: n,
        });
    }
    x.map_linear(n - 1, |k| m.codegeneracy_key(n, j, k))
}

pub fn cyclic<M: CocyclicModule + ?Sized>(m: &M, x: &Chain<M::Key>) -> Result<Chain<M::Key>> {
    let n = x.degree();
    x.map_linear(n, |k| m.cyclic_key(n, k))
}

/// `t^k`; negative powers use `t^{-1} = t^n`.
pub fn cyclic_pow<M: CocyclicModule + ?Sized>(
    m: &M,
    x: &Chain<M::Key>,
    k: i64,
) -> Result<Chain<M::Key>> {
    let order = x.degree() as i64 + 1;
    let mut out = x.clone();
    for _ in 0..k.rem_euclid(order) {
        out = cyclic(m, &out)?;
    }
    Ok(out)
}

/// `λ = (-1)ⁿ t_n`.
pub fn lambda<M: CocyclicModule + ?Sized>(m: &M, x: &Chain<M::Key>) -> Result<Chain<M::Key>> {
    Ok(cyclic(m, x)?.scale(&sign(x.degree())))
}

/// `(Id - λ) x`.
pub fn one_minus_lambda<M: CocyclicModule + ?Sized>(
    m: &M,
    x: &Chain<M::Key>,
) -> Result<Chain<M::Key>> {
    x.sub(&lambda(m, x)?)
}

fn alternating_cofaces<M: CocyclicModule + ?Sized>(
    m: &M,
    x: &Chain<M::Key>,
    last: usize,
) -> Result<Chain<M::Key>> {
    let mut out = Chain::zero(x.degree() + 1);
    for i in 0..=last {
        out.add_scaled(&sign(i), &coface(m, i, x)?)?;
    }
    Ok(out)
}

/// `b = Σ_{i=0}^{n+1} (-1)^i d_i`.
pub fn hochschild_b<M: CocyclicModule + ?Sized>(
    m: &M,
    x: &Chain<M::Key>,
) -> Result<Chain<M::Key>> {
    alternating_cofaces(m, x, x.degree() + 1)
}

/// `b' = Σ_{i=0}^{n} (-1)^i d_i`.
pub fn bar_b_prime<M: CocyclicModule + ?Sized>(
    m: &M,
    x: &Chain<M::Key>,
) -> Result<Chain<M::Key>> {
    alternating_cofaces(m, x, x.degree())
}

/// `N_n = Σ_{i=0}^{n} (-1)^{ni} t^i`.
pub fn cyclic_n<M: CocyclicModule + ?Sized>(m: &M, x: &Chain<M::Key>) -> Result<Chain<M::Key>> {
    let n = x.degree();
    let mut out = Chain::zero(n);
    let mut power = x.clone();
    for i in 0..=n {
        out.add_scaled(&sign(n * i), &power)?;
        if i < n {
            power = cyclic(m, &power)?;
        }
    }
    Ok(out)
}

/// `B_n = N_{n-1} s_{n-1} t_n (Id - (-1)ⁿ t_n)`; requires `n ≥ 1`.
pub fn connes_b<M: CocyclicModule + ?Sized>(m: &M, x: &Chain<M::Key>) -> Result<Chain<M::Key>> {
    let n = x.degree();
    if n == 0 {
        return Err(Error::IndexOutOfRange {
            map: "connes_B",
            index: 0,
            degree: 0,
        });
    }
    let y = one_minus_lambda(m, x)?;
    if y.is_zero() {
        return Ok(Chain::zero(n - 1));
    }
    let y = cyclic(m, &y)?;
    let y = codegeneracy(m, n - 1, &y)?;
    cyclic_n(m, &y)
}

/// `B` extended by zero to degree 0.
pub(crate) fn connes_b_or_zero<M: CocyclicModule + ?Sized>(
    m: &M,
    x: &Chain<M::Key>,
) -> Result<Option<Chain<M::Key>>> {
    if x.degree() == 0 {
        Ok(None)
    } else {
        connes_b(m, x).map(Some)
    }
}
