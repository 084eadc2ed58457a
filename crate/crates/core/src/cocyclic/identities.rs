//! Identity suites and the structure-map norm estimates.

use std::collections::BTreeMap;

use num::{One, Zero};
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::operators::*;
use super::{Chain, CocyclicModule};
use crate::{Rational, Result};

const MAX_BASIS_ENUMERATION: usize = 64;
const MAX_RECORDED_FAILURES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub degree: usize,
    pub cases: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityFailure {
    pub identity: String,
    pub degree: usize,
    pub indices: Vec<usize>,
    pub witness: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub module: String,
    pub max_degree: usize,
    pub all_passed: bool,
    pub checks: Vec<IdentityCheck>,
    pub failures: Vec<IdentityFailure>,
    pub failure_count: usize,
}

impl IdentityReport {
    pub fn failed_identities(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.identity.as_str())
            .collect();
        names.dedup();
        names
    }
}

/// A random chain with 1 to 3 terms and small rational coefficients.
pub fn random_chain<M: CocyclicModule + ?Sized>(
    m: &M,
    degree: usize,
    rng: &mut dyn RngCore,
) -> Chain<M::Key> {
    loop {
        let terms = rng.random_range(1..=3);
        let c = Chain::from_terms(
            degree,
            (0..terms).map(|_| (m.random_key(degree, rng), random_rational(rng))),
        );
        if !c.is_zero() {
            return c;
        }
    }
}

pub(crate) fn random_rational(rng: &mut dyn RngCore) -> Rational {
    let mut p: i64 = rng.random_range(-5..=5);
    if p == 0 {
        p = 1;
    }
    crate::rational::frac(p, rng.random_range(1..=4))
}

fn test_elements<M: CocyclicModule + ?Sized>(
    m: &M,
    degree: usize,
    samples: usize,
    rng: &mut dyn RngCore,
) -> Vec<Chain<M::Key>> {
    let mut out = Vec::new();
    if let Some(basis) = m.basis(degree) {
        if basis.len() <= MAX_BASIS_ENUMERATION {
            out.extend(basis.into_iter().map(|k| Chain::basis(degree, k)));
        }
    }
    out.extend((0..samples).map(|_| random_chain(m, degree, rng)));
    out
}

struct Recorder {
    checks: BTreeMap<(usize, String), (usize, bool)>,
    order: Vec<(usize, String)>,
    failures: Vec<IdentityFailure>,
    failure_count: usize,
}

impl Recorder {
    fn new() -> Self {
        Self {
            checks: BTreeMap::new(),
            order: Vec::new(),
            failures: Vec::new(),
            failure_count: 0,
        }
    }

    fn record<K: Ord + Clone + std::fmt::Display>(
        &mut self,
        name: &str,
        degree: usize,
        indices: &[usize],
        witness: &Chain<K>,
        lhs: &Chain<K>,
        rhs: &Chain<K>,
    ) {
        let key = (degree, name.to_string());
        if !self.checks.contains_key(&key) {
            self.order.push(key.clone());
        }
        let ok = lhs == rhs;
        let entry = self.checks.entry(key).or_insert((0, true));
        entry.0 += 1;
        entry.1 &= ok;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(IdentityFailure {
                    identity: name.to_string(),
                    degree,
                    indices: indices.to_vec(),
                    witness: witness.to_string(),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                });
            }
        }
    }

    fn finish(self, module: String, max_degree: usize) -> IdentityReport {
        let checks: Vec<IdentityCheck> = self
            .order
            .iter()
            .map(|key| {
                let (cases, passed) = self.checks[key];
                IdentityCheck {
                    identity: key.1.clone(),
                    degree: key.0,
                    cases,
                    passed,
                }
            })
            .collect();
        IdentityReport {
            module,
            max_degree,
            all_passed: self.failure_count == 0,
            checks,
            failures: self.failures,
            failure_count: self.failure_count,
        }
    }
}

/// Checks every cosimplicial and cyclic identity, `t^{n+1} = Id`, the
/// conjugation formulas for `d_i` and `s_j`, and the derived relations
/// `b² = b'² = B² = bB + Bb = 0`, `(Id-λ)N = N(Id-λ) = 0`, on elements of
/// degrees `0..=max_degree`.
///
/// Test elements are the full basis where it is small, plus `samples`
/// random chains per degree. Comparisons are exact.
pub fn check_identities<M: CocyclicModule + ?Sized>(
    m: &M,
    max_degree: usize,
    samples: usize,
    rng: &mut dyn RngCore,
) -> Result<IdentityReport> {
    let mut rec = Recorder::new();
    for n in 0..=max_degree {
        for x in test_elements(m, n, samples, rng) {
            check_element(m, &x, &mut rec)?;
        }
    }
    Ok(rec.finish(m.name(), max_degree))
}

fn check_element<M: CocyclicModule + ?Sized>(
    m: &M,
    x: &Chain<M::Key>,
    rec: &mut Recorder,
) -> Result<()> {
    let n = x.degree();
    let faces: Vec<Chain<M::Key>> = (0..=n + 1)
        .map(|i| coface(m, i, x))
        .collect::<Result<_>>()?;
    let degens: Vec<Chain<M::Key>> = if n >= 1 {
        (0..n).map(|j| codegeneracy(m, j, x)).collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    // d_j d_i = d_i d_{j-1}, i < j.
    for j in 1..=n + 2 {
        for i in 0..j {
            let lhs = coface(m, j, &faces[i])?;
            let rhs = coface(m, i, &faces[j - 1])?;
            rec.record("d_j d_i = d_i d_{j-1}", n, &[i, j], x, &lhs, &rhs);
        }
    }

    // s_j s_i = s_i s_{j+1}, i ≤ j.
    if n >= 2 {
        for j in 0..=n - 2 {
            for i in 0..=j {
                let lhs = codegeneracy(m, j, &degens[i])?;
                let rhs = codegeneracy(m, i, &degens[j + 1])?;
                rec.record("s_j s_i = s_i s_{j+1}", n, &[i, j], x, &lhs, &rhs);
            }
        }
    }

    // s_j d_i.
    let kappa = m.degeneracy_face_scale(n);
    for j in 0..=n {
        for i in 0..=n + 1 {
            let lhs = codegeneracy(m, j, &faces[i])?;
            let (name, rhs) = if i < j {
                ("s_j d_i = d_i s_{j-1}", coface(m, i, &degens[j - 1])?)
            } else if i == j || i == j + 1 {
                ("s_j d_i = Id", x.scale(&kappa))
            } else {
                ("s_j d_i = d_{i-1} s_j", coface(m, i - 1, &degens[j])?)
            };
            rec.record(name, n, &[i, j], x, &lhs, &rhs);
        }
    }

    // t d_i = d_{i-1} t, t d_0 = d_{n+1}.
    let tx = cyclic(m, x)?;
    for i in 0..=n + 1 {
        let lhs = cyclic(m, &faces[i])?;
        if i == 0 {
            rec.record("t d_0 = d_{n+1}", n, &[0], x, &lhs, &faces[n + 1]);
        } else {
            let rhs = coface(m, i - 1, &tx)?;
            rec.record("t d_i = d_{i-1} t", n, &[i], x, &lhs, &rhs);
        }
    }

    // t s_i = s_{i-1} t, t s_0 = s_{n-1} t².
    if n >= 1 {
        for i in 0..n {
            let lhs = cyclic(m, &degens[i])?;
            if i == 0 {
                let rhs = codegeneracy(m, n - 1, &cyclic(m, &tx)?)?;
                rec.record("t s_0 = s_{n-1} t^2", n, &[0], x, &lhs, &rhs);
            } else {
                let rhs = codegeneracy(m, i - 1, &tx)?;
                rec.record("t s_i = s_{i-1} t", n, &[i], x, &lhs, &rhs);
            }
        }
    }

    let name = format!("t^{} = Id", n + 1);
    let full = cyclic_pow(m, x, n as i64 + 1)?;
    rec.record(&name, n, &[], x, &full, x);

    // d_i = t^{-i} d_0 t^i, s_j = t^{-j} s_0 t^j.
    for i in 1..=n + 1 {
        let rhs = cyclic_pow(m, &coface(m, 0, &cyclic_pow(m, x, i as i64)?)?, -(i as i64))?;
        rec.record("d_i = t^-i d_0 t^i", n, &[i], x, &faces[i], &rhs);
    }
    for j in 1..n {
        let rhs = cyclic_pow(m, &codegeneracy(m, 0, &cyclic_pow(m, x, j as i64)?)?, -(j as i64))?;
        rec.record("s_j = t^-j s_0 t^j", n, &[j], x, &degens[j], &rhs);
    }

    // Derived operators.
    let zero_up2 = Chain::zero(n + 2);
    let bx = hochschild_b(m, x)?;
    rec.record("b b = 0", n, &[], x, &hochschild_b(m, &bx)?, &zero_up2);
    let bpx = bar_b_prime(m, x)?;
    rec.record("b' b' = 0", n, &[], x, &bar_b_prime(m, &bpx)?, &zero_up2);

    let zero = Chain::zero(n);
    let nx = cyclic_n(m, x)?;
    rec.record("(1-lambda) N = 0", n, &[], x, &one_minus_lambda(m, &nx)?, &zero);
    rec.record(
        "N (1-lambda) = 0",
        n,
        &[],
        x,
        &cyclic_n(m, &one_minus_lambda(m, x)?)?,
        &zero,
    );
    rec.record(
        "(1-lambda) b = b' (1-lambda)",
        n,
        &[],
        x,
        &one_minus_lambda(m, &bx)?,
        &bar_b_prime(m, &one_minus_lambda(m, x)?)?,
    );
    rec.record(
        "N b' = b N",
        n,
        &[],
        x,
        &cyclic_n(m, &bpx)?,
        &hochschild_b(m, &nx)?,
    );

    let bbx = connes_b(m, &bx)?;
    if n >= 1 {
        let big_b = connes_b(m, x)?;
        let lhs = if n >= 2 {
            connes_b(m, &big_b)?
        } else {
            Chain::zero(n.saturating_sub(2))
        };
        rec.record("B B = 0", n, &[], x, &lhs, &Chain::zero(n.saturating_sub(2)));
        let mut anti = hochschild_b(m, &big_b)?;
        anti.add_scaled(&Rational::one(), &bbx)?;
        rec.record("b B + B b = 0", n, &[], x, &anti, &zero);
    } else {
        rec.record("b B + B b = 0", n, &[], x, &bbx, &zero);
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormViolation {
    pub bound: String,
    pub witness: String,
    pub ratio: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormEstimateReport {
    pub module: String,
    pub degree: usize,
    pub samples: usize,
    pub all_passed: bool,
    /// Largest observed `‖b x‖ / ‖x‖`, `‖b' x‖ / ‖x‖`, `‖N x‖ / ‖x‖`, `‖t x‖ / ‖x‖`.
    pub max_ratio_b: String,
    pub max_ratio_b_prime: String,
    pub max_ratio_n: String,
    pub max_ratio_t: String,
    pub violations: Vec<NormViolation>,
}

/// Samples random elements of degree `n` and checks `‖b x‖ ≤ (n+2)‖x‖`,
/// `‖b' x‖ ≤ (n+1)‖x‖`, `‖N x‖ ≤ (n+1)‖x‖` and `‖t x‖ ≤ ‖x‖`. Returns `None`
/// when the module has no norm.
pub fn norm_estimate_check<M: CocyclicModule + ?Sized>(
    m: &M,
    n: usize,
    samples: usize,
    rng: &mut dyn RngCore,
) -> Result<Option<NormEstimateReport>> {
    let probe = random_chain(m, n, rng);
    if m.norm(&probe).is_none() {
        return Ok(None);
    }
    let bounds = [
        ("b", Rational::from_integer((n as i64 + 2).into())),
        ("b'", Rational::from_integer((n as i64 + 1).into())),
        ("N", Rational::from_integer((n as i64 + 1).into())),
        ("t", Rational::one()),
    ];
    let mut max_ratio = vec![Rational::zero(); 4];
    let mut violations = Vec::new();
    for _ in 0..samples {
        let x = random_chain(m, n, rng);
        let nx = m.norm(&x).expect("module norm");
        if nx.is_zero() {
            continue;
        }
        let images = [
            hochschild_b(m, &x)?,
            bar_b_prime(m, &x)?,
            cyclic_n(m, &x)?,
            cyclic(m, &x)?,
        ];
        for (idx, image) in images.iter().enumerate() {
            let ratio = m.norm(image).expect("module norm") / &nx;
            if ratio > bounds[idx].1 && violations.len() < MAX_RECORDED_FAILURES {
                violations.push(NormViolation {
                    bound: format!("‖{} x‖ ≤ {}‖x‖", bounds[idx].0, bounds[idx].1),
                    witness: x.to_string(),
                    ratio: ratio.to_string(),
                });
            }
            if ratio > max_ratio[idx] {
                max_ratio[idx] = ratio;
            }
        }
    }
    Ok(Some(NormEstimateReport {
        module: m.name(),
        degree: n,
        samples,
        all_passed: violations.is_empty(),
        max_ratio_b: max_ratio[0].to_string(),
        max_ratio_b_prime: max_ratio[1].to_string(),
        max_ratio_n: max_ratio[2].to_string(),
        max_ratio_t: max_ratio[3].to_string(),
        violations,
    }))
}
