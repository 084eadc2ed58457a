//! JLO brackets `⟨a₀, …, a_n⟩ = ∫_{Δⁿ} Tr(γ a₀ e(t₁) a₁ e(t₂ - t₁) … a_n e(1 - t_n))`.

use std::collections::BTreeMap;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use nalgebra::DMatrix;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_square, CMatrix, Flavor, HeatModule, C64};
use crate::{Error, Result};

/// `∫ e^{-Σ s_i x_i} ds` over `{s ∈ ℝ^{n+1}_{≥0} : Σ s_i = 1}`, normalised
/// so that the volume is `1/n!`.
///
/// This is the top-right entry of `exp(M)` for the bidiagonal matrix with
/// diagonal `-x` and unit superdiagonal, i.e. the divided difference of
/// `e^{-x}` up to sign. After shifting by `min x` the matrix is scaled and
/// squared; all squarings act on entrywise nonnegative matrices, so
/// confluent and widely spread nodes are both handled without
/// cancellation.
pub fn simplex_exp_integral(x: &[f64]) -> f64 {
    let n = x.len();
    if n == 0 {
        return 0.0;
    }
    let m = x.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = x.iter().map(|v| v - m).fold(0.0, f64::max);
    let mut s = 0;
    while (spread + 1.0) / 2f64.powi(s) > 0.5 {
        s += 1;
    }
    let h = 2f64.powi(-s);
    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = -(x[i] - m) * h;
        if i + 1 < n {
            a[(i, i + 1)] = h;
        }
    }
    let mut e = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    for k in 1..=30 {
        term = &term * &a / k as f64;
        e += &term;
    }
    for _ in 0..s {
        e = &e * &e;
    }
    (-m).exp() * e[(0, n - 1)]
}

/// How the simplex integral is approximated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum QuadratureMethod {
    /// Iterated Gauss–Legendre in ordered coordinates: `t_n ∈ [0, 1]`, then
    /// `t_{n-1} ∈ [0, t_n]`, and so on. The rule with `nodes` points per
    /// axis is compared with the rule with `2·nodes`; the finer value is
    /// returned.
    Gauss { nodes: usize },
    /// Uniform samples of the ordered simplex (sorted uniforms).
    MonteCarlo { samples: usize, seed: u64 },
    /// Gauss with doubling node counts from 8 to 64 for `n ≤ 3`, Monte
    /// Carlo with `10⁶` samples above.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    #[serde(flatten)]
    pub method: QuadratureMethod,
    pub tolerance: f64,
}

impl QuadratureSpec {
    pub fn new(method: QuadratureMethod, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0) {
            return Err(Error::InvalidInput(format!("tolerance {tolerance} is not positive")));
        }
        Ok(Self { method, tolerance })
    }

    pub fn auto(tolerance: f64) -> Result<Self> {
        Self::new(QuadratureMethod::Auto, tolerance)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum JloMode {
    Exact,
    Quadrature(QuadratureSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub struct JloValue {
    pub value: C64,
    /// Zero in exact mode.
    pub error_estimate: f64,
    pub method: String,
    /// Integrand evaluations (exact mode: eigenvalue tuples).
    pub evaluations: usize,
}

/// Ordered-simplex Gauss rule: nodes `(t₁, …, t_n)` with weights.
struct OrderedRule {
    nodes: Vec<(f64, f64)>,
}

impl OrderedRule {
    fn new(q: usize) -> Self {
        let rule = GaussLegendre::new(NonZeroUsize::new(q).expect("positive node count"));
        let nodes = rule
            .as_node_weight_pairs()
            .iter()
            .map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .collect();
        Self { nodes }
    }
}

/// Integrates `f(t₁, …, t_n)` over `0 ≤ t₁ ≤ … ≤ t_n ≤ 1`.
fn ordered_gauss<T>(n: usize, q: usize, f: &mut dyn FnMut(&[f64]) -> T) -> T
where
    T: Zero + Copy + std::ops::Mul<f64, Output = T> + std::ops::AddAssign,
{
    let rule = OrderedRule::new(q);
    let mut t = vec![0.0; n];
    fn rec<T>(
        level: usize,
        upper: f64,
        t: &mut [f64],
        rule: &OrderedRule,
        f: &mut dyn FnMut(&[f64]) -> T,
    ) -> T
    where
        T: Zero + Copy + std::ops::Mul<f64, Output = T> + std::ops::AddAssign,
    {
        if level == 0 {
            return f(t);
        }
        let mut acc = T::zero();
        for (x, w) in &rule.nodes {
            t[level - 1] = x * upper;
            acc += rec(level - 1, t[level - 1], t, rule, f) * (w * upper);
        }
        acc
    }
    rec(n, 1.0, &mut t, &rule, f)
}

/// `∫_{Δⁿ} 1`, which should be `1/n!`, by the quadrature of `spec`.
pub fn simplex_volume(n: usize, spec: &QuadratureSpec) -> Result<JloValue> {
    integrate(n, spec, &mut |_| C64::new(1.0, 0.0))
}

fn integrate(
    n: usize,
    spec: &QuadratureSpec,
    f: &mut dyn FnMut(&[f64]) -> C64,
) -> Result<JloValue> {
    let gauss = |q: usize, f: &mut dyn FnMut(&[f64]) -> C64| {
        let coarse = ordered_gauss(n, q, f);
        let fine = ordered_gauss(n, 2 * q, f);
        (fine, (fine - coarse).norm(), q.pow(n as u32) + (2 * q).pow(n as u32))
    };
    let (value, error_estimate, evaluations, method) = match spec.method {
        QuadratureMethod::Gauss { nodes } => {
            if nodes == 0 {
                return Err(Error::InvalidInput("Gauss rule needs at least one node".into()));
            }
            let (v, e, k) = gauss(nodes, f);
            (v, e, k, format!("gauss({nodes},{})", 2 * nodes))
        }
        QuadratureMethod::MonteCarlo { samples, seed } => {
            let (v, e) = monte_carlo(n, samples, seed, f)?;
            (v, e, samples, format!("monte_carlo({samples})"))
        }
        QuadratureMethod::Auto if n <= 3 => {
            let mut q = 8;
            loop {
                let (v, e, k) = gauss(q, f);
                if e <= spec.tolerance || q >= 64 {
                    break (v, e, k, format!("gauss({q},{})", 2 * q));
                }
                q *= 2;
            }
        }
        QuadratureMethod::Auto => {
            let (v, e) = monte_carlo(n, 1_000_000, 0, f)?;
            (v, e, 1_000_000, "monte_carlo(1000000)".to_string())
        }
    };
    if !(error_estimate <= spec.tolerance) {
        return Err(Error::QuadratureNonConvergence {
            estimate: error_estimate,
            tolerance: spec.tolerance,
        });
    }
    Ok(JloValue {
        value,
        error_estimate,
        method,
        evaluations,
    })
}

fn monte_carlo(
    n: usize,
    samples: usize,
    seed: u64,
    f: &mut dyn FnMut(&[f64]) -> C64,
) -> Result<(C64, f64)> {
    if samples < 2 {
        return Err(Error::InvalidInput("Monte Carlo needs at least two samples".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = vec![0.0; n];
    let mut sum = C64::zero();
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        for x in t.iter_mut() {
            *x = rng.random::<f64>();
        }
        t.sort_by(f64::total_cmp);
        let v = f(&t);
        sum += v;
        sum_sq += v.norm_sqr();
    }
    let k = samples as f64;
    let mean = sum / k;
    let var = ((sum_sq / k - mean.norm_sqr()) * k / (k - 1.0)).max(0.0);
    let vol = (1..=n).fold(1.0, |acc, i| acc / i as f64);
    Ok((mean * vol, vol * (var / k).sqrt()))
}

fn check_args<M: HeatModule + ?Sized>(m: &M, args: &[CMatrix]) -> Result<()> {
    if args.is_empty() {
        return Err(Error::InvalidInput("a bracket needs at least a₀".into()));
    }
    args.iter().try_for_each(|a| check_square(a, m.dim()))
}

/// Exact bracket from the spectral projectors `P_k` of `D²`:
/// `Σ Tr(γ a₀ P_{k₀} a₁ P_{k₁} … a_n P_{k_n}) · I(μ_{k₀}, …, μ_{k_n})` with
/// `I` the simplex exponential integral. `I` is symmetric, so products are
/// accumulated by multiplicity vector.
pub fn jlo_exact<M: HeatModule + ?Sized>(
    m: &M,
    args: &[CMatrix],
    flavor: Flavor,
) -> Result<JloValue> {
    check_args(m, args)?;
    let proj = m.spectrum().squared_projectors();
    let k = proj.len();
    let mut layer: BTreeMap<Vec<usize>, CMatrix> = BTreeMap::new();
    for (j, (_, p)) in proj.iter().enumerate() {
        let mut c = vec![0; k];
        c[j] = 1;
        layer.insert(c, &args[0] * p);
    }
    for a in &args[1..] {
        let mut next: BTreeMap<Vec<usize>, CMatrix> = BTreeMap::new();
        for (c, s) in &layer {
            let sa = s * a;
            if sa.iter().all(|z| *z == C64::ZERO) {
                continue;
            }
            for (j, (_, p)) in proj.iter().enumerate() {
                let mut c2 = c.clone();
                c2[j] += 1;
                let x = &sa * p;
                match next.get_mut(&c2) {
                    Some(acc) => *acc += x,
                    None => {
                        next.insert(c2, x);
                    }
                }
            }
        }
        layer = next;
    }
    let mut value = C64::zero();
    for (c, s) in &layer {
        let nodes: Vec<f64> = c
            .iter()
            .enumerate()
            .flat_map(|(j, &cnt)| std::iter::repeat_n(proj[j].0, cnt))
            .collect();
        value += m.closing_trace(s, flavor)? * simplex_exp_integral(&nodes);
    }
    Ok(JloValue {
        value,
        error_estimate: 0.0,
        method: "exact".into(),
        evaluations: layer.len(),
    })
}

/// Bracket by quadrature of the integrand, evaluated in the eigenbasis of
/// `D` where every heat factor is diagonal.
pub fn jlo_quadrature<M: HeatModule + ?Sized>(
    m: &M,
    args: &[CMatrix],
    flavor: Flavor,
    spec: &QuadratureSpec,
) -> Result<JloValue> {
    check_args(m, args)?;
    let sp = m.spectrum();
    let v = sp.vectors();
    let mu: Vec<f64> = sp.eigenvalues().iter().map(|l| l * l).collect();
    let tilde: Vec<CMatrix> = args.iter().map(|a| v.adjoint() * a * v).collect();
    let dim = m.dim();
    let closing = match (flavor, m.grading()) {
        (Flavor::Odd, _) => CMatrix::identity(dim, dim),
        (Flavor::Even, Some(_)) => v.adjoint() * m.gamma_matrix() * v,
        (Flavor::Even, None) => {
            return Err(Error::InvalidInput("supertrace requested on an ungraded module".into()))
        }
    };
    let first = &closing * &tilde[0];
    let n = args.len() - 1;
    let heat_rows = |s: f64, x: &mut CMatrix| {
        for (i, m) in mu.iter().enumerate() {
            let e = (-s * m).exp();
            for z in x.row_mut(i).iter_mut() {
                *z *= e;
            }
        }
    };
    let mut f = |t: &[f64]| -> C64 {
        // Right product R = a_m e(t_{m+1} - t_m) … a_n e(1 - t_n).
        let mut r = CMatrix::identity(dim, dim);
        let mut upper = 1.0;
        for j in (1..=n).rev() {
            heat_rows(upper - t[j - 1], &mut r);
            r = &tilde[j] * r;
            upper = t[j - 1];
        }
        heat_rows(upper, &mut r);
        (&first * r).trace()
    };
    integrate(n, spec, &mut f)
}

/// `⟨a₀, …, a_n⟩` closed by the module's own trace (`Str` when graded).
pub fn jlo_bracket<M: HeatModule + ?Sized>(
    m: &M,
    args: &[CMatrix],
    mode: &JloMode,
) -> Result<JloValue> {
    let flavor = m.default_flavor();
    match mode {
        JloMode::Exact => jlo_exact(m, args, flavor),
        JloMode::Quadrature(spec) => jlo_quadrature(m, args, flavor, spec),
    }
}

/// `Ch^{2n}(a₀, …, a_{2n}) = ⟨a₀, [D, a₁], …, [D, a_{2n}]⟩`.
pub fn chern_component<M: HeatModule + ?Sized>(
    m: &M,
    n: usize,
    args: &[CMatrix],
    mode: &JloMode,
) -> Result<JloValue> {
    if args.len() != 2 * n + 1 {
        return Err(Error::InvalidInput(format!(
            "Ch^{} takes {} arguments, got {}",
            2 * n,
            2 * n + 1,
            args.len()
        )));
    }
    let mut subst = Vec::with_capacity(args.len());
    subst.push(args[0].clone());
    for a in &args[1..] {
        subst.push(m.commutator(a)?);
    }
    jlo_bracket(m, &subst, mode)
}

/// Adaptive Gauss–Legendre (10 points per panel, bisection) on `[a, b]`.
/// Returns the integral and the accumulated panel error estimate.
pub(crate) fn adaptive_gauss(
    f: &mut dyn FnMut(f64) -> f64,
    a: f64,
    b: f64,
    tolerance: f64,
) -> Result<(f64, f64)> {
    let rule = OrderedRule::new(10);
    let panel = |f: &mut dyn FnMut(f64) -> f64, lo: f64, hi: f64| -> f64 {
        rule.nodes
            .iter()
            .map(|(x, w)| w * f(lo + x * (hi - lo)))
            .sum::<f64>()
            * (hi - lo)
    };
    let mut stack = vec![(a, b, panel(f, a, b), 0usize)];
    let (mut total, mut err) = (0.0, 0.0);
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let (left, right) = (panel(f, lo, mid), panel(f, mid, hi));
        let diff = (left + right - whole).abs();
        let budget = tolerance * (hi - lo) / (b - a);
        if diff <= budget {
            total += left + right;
            err += diff;
        } else if depth >= 30 {
            return Err(Error::QuadratureNonConvergence {
                estimate: diff,
                tolerance: budget,
            });
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    Ok((total, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fredholm::{examples, identity, EvenFredholmModule};
    use rand::SeedableRng;
    use std::collections::BTreeMap;

    fn distinct_oracle(x: &[f64]) -> f64 {
        (0..x.len())
            .map(|i| {
                let den: f64 = (0..x.len())
                    .filter(|&j| j != i)
                    .map(|j| x[j] - x[i])
                    .product();
                (-x[i]).exp() / den
            })
            .sum()
    }

    #[test]
    fn exp_integral_matches_partial_fractions() {
        for x in [vec![0.3], vec![0.0, 1.0], vec![0.5, 2.0, 4.5], vec![0.1, 1.3, 2.9, 7.0]] {
            let got = simplex_exp_integral(&x);
            let want = distinct_oracle(&x);
            assert!((got - want).abs() <= 1e-14 * want.abs().max(1e-3), "{x:?}");
        }
    }

    #[test]
    fn exp_integral_confluent_nodes() {
        // All nodes equal: e^{-x}/n!.
        for n in 0..6 {
            let x = vec![1.5; n + 1];
            let want = (-1.5f64).exp() / (1..=n).product::<usize>().max(1) as f64;
            assert!((simplex_exp_integral(&x) - want).abs() < 1e-15);
        }
        // Two equal nodes: d/dx of the first divided difference.
        let (a, b) = (0.5f64, 2.0f64);
        let want = ((-a).exp() * (b - a - 1.0) + (-b).exp()) / (b - a).powi(2);
        assert!((simplex_exp_integral(&[a, a, b]) - want).abs() < 1e-14);
    }

    #[test]
    fn exp_integral_wide_spread() {
        let x = [0.0, 50.0, 400.0];
        let got = simplex_exp_integral(&x);
        let want = distinct_oracle(&x);
        assert!((got - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn simplex_volumes() {
        let spec = QuadratureSpec::new(QuadratureMethod::Gauss { nodes: 4 }, 1e-6).unwrap();
        for n in 0..=4 {
            let v = simplex_volume(n, &spec).unwrap();
            let want = 1.0 / (1..=n).product::<usize>().max(1) as f64;
            assert!((v.value.re - want).abs() <= 1e-6);
        }
    }

    #[test]
    fn bracket_special_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let m = examples::random_even_module(&mut rng, 2, 2);
        let a = m.element("a").unwrap().clone();
        let spec = QuadratureSpec::auto(1e-8).unwrap();
        // n = 0
        let str0 = m.supertrace(&(&a * m.heat(1.0).unwrap())).unwrap();
        let ex = jlo_bracket(&m, &[a.clone()], &JloMode::Exact).unwrap();
        assert!((ex.value - str0).norm() < 1e-12);
        // identities
        let id = identity(4);
        let str_heat = m.supertrace(&m.heat(1.0).unwrap()).unwrap();
        for n in 1..=3 {
            let args = vec![id.clone(); n + 1];
            let want = str_heat / (1..=n).product::<usize>() as f64;
            let ex = jlo_bracket(&m, &args, &JloMode::Exact).unwrap();
            assert!((ex.value - want).norm() < 1e-12);
            let q = jlo_bracket(&m, &args, &JloMode::Quadrature(spec)).unwrap();
            assert!((q.value - want).norm() < 1e-8);
        }
    }

    #[test]
    fn zero_dirac_brackets() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let m = EvenFredholmModule::from_block(&CMatrix::zeros(2, 1), BTreeMap::new(), 0.5)
            .unwrap();
        let args: Vec<CMatrix> = (0..3)
            .map(|_| {
                let x = examples::random_matrix(&mut rng, 3, 3);
                examples::split_parity(&x, &m.gamma()).0
            })
            .collect();
        let prod = &args[0] * &args[1] * &args[2];
        let want = m.supertrace(&prod).unwrap() / 2.0;
        let ex = jlo_bracket(&m, &args, &JloMode::Exact).unwrap();
        assert!((ex.value - want).norm() < 1e-13);
    }

    #[test]
    fn exact_and_quadrature_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let spec = QuadratureSpec::auto(1e-6).unwrap();
        for n in 0..=3 {
            let m = examples::random_even_module(&mut rng, 2, 2);
            let args: Vec<CMatrix> =
                (0..=n).map(|_| examples::random_matrix(&mut rng, 4, 4)).collect();
            let ex = jlo_bracket(&m, &args, &JloMode::Exact).unwrap();
            let q = jlo_bracket(&m, &args, &JloMode::Quadrature(spec)).unwrap();
            assert!((ex.value - q.value).norm() <= spec.tolerance, "n = {n}");
        }
    }

    #[test]
    fn monte_carlo_volume() {
        let spec = QuadratureSpec::new(
            QuadratureMethod::MonteCarlo {
                samples: 20_000,
                seed: 3,
            },
            1e-2,
        )
        .unwrap();
        let v = simplex_volume(3, &spec).unwrap();
        assert!((v.value.re - 1.0 / 6.0).abs() < 1e-2);
    }

    #[test]
    fn adaptive_gauss_gaussian() {
        let mut f = |x: f64| (-100.0 * (x - 0.5) * (x - 0.5)).exp();
        let (v, _) = adaptive_gauss(&mut f, 0.0, 1.0, 1e-12).unwrap();
        let want = (std::f64::consts::PI / 100.0).sqrt() * statrs::function::erf::erf(5.0);
        assert!((v - want).abs() < 1e-11);
    }

    #[test]
    fn chern_argument_count() {
        let m = examples::index_one_module();
        let p = m.element("p").unwrap().clone();
        assert!(chern_component(&m, 1, &[p.clone(), p.clone()], &JloMode::Exact).is_err());
        let c0 = chern_component(&m, 0, &[p.clone()], &JloMode::Exact).unwrap();
        assert!((c0.value.re - 1.0).abs() < 1e-14);
        let c2 = chern_component(&m, 2, &vec![p; 5], &JloMode::Exact).unwrap();
        assert!(c2.value.norm() < 1e-14);
    }
}
