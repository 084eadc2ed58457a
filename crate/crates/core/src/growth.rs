//! The asymptotic hierarchy `E(y_n)` as finite-prefix decision procedures.
//!
//! `(x_n) ≺ (y_n)` means `limsup rⁿ x_n / y_n = 0` for every `r > 0`. A
//! limsup cannot be decided from finitely many terms, so every verdict here
//! is a statement about an explicit prefix `0..=N` and an explicit list of
//! probe radii. All ratios and powers are evaluated in log-space: with
//! `r = 8` and `N = 40` the raw products span hundreds of decades.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// First index of the tail window used by every prefix test of length `n_max`.
pub fn tail_window_start(n_max: usize) -> usize {
    n_max.div_ceil(2).max(1)
}

/// `ln(n!)` by direct summation of logarithms.
pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// A product of factorials of affine functions of `n`, times `scale · baseⁿ ·
/// (n+1)^power`.
///
/// `numerator: [[k, m], …]` contributes `Π (k n + m)!`, likewise for the
/// denominator. The universal cocycle norms `(n+1)/(2ⁿ n!)`, for instance, are
/// `numerator [[1,1]]`, `denominator [[1,0],[1,0]]`, `base 0.5`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorialRatio {
    #[serde(default)]
    pub numerator: Vec<[u64; 2]>,
    #[serde(default)]
    pub denominator: Vec<[u64; 2]>,
    #[serde(default = "one")]
    pub base: f64,
    #[serde(default)]
    pub power: f64,
    #[serde(default = "one")]
    pub scale: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for FactorialRatio {
    fn default() -> Self {
        Self {
            numerator: Vec::new(),
            denominator: Vec::new(),
            base: 1.0,
            power: 0.0,
            scale: 1.0,
        }
    }
}

impl FactorialRatio {
    pub fn ln_term(&self, n: usize) -> f64 {
        let n64 = n as u64;
        let fact = |pairs: &[[u64; 2]]| -> f64 {
            pairs
                .iter()
                .map(|[k, m]| ln_factorial(k * n64 + m))
                .sum()
        };
        self.scale.ln()
            + n as f64 * self.base.ln()
            + self.power * ((n + 1) as f64).ln()
            + fact(&self.numerator)
            - fact(&self.denominator)
    }
}

/// Generator specification in the JSON form
/// `{ "kind": "factorial_ratio" | "tabulated", "params": {...} }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum GeneratorSpec {
    FactorialRatio(FactorialRatio),
    Tabulated { terms: Vec<f64> },
}

/// A positive sequence known on `0..=max_index`, stored as logarithms.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthSequence {
    label: String,
    ln_terms: Vec<f64>,
}

/// JSON profile form `{ "label": ..., "terms": [...] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthProfile {
    pub label: String,
    pub terms: Vec<f64>,
}

impl GrowthSequence {
    pub fn tabulated(label: impl Into<String>, terms: &[f64]) -> Result<Self> {
        let label = label.into();
        if terms.is_empty() {
            return Err(Error::InvalidInput(format!("sequence `{label}` is empty")));
        }
        for (index, &value) in terms.iter().enumerate() {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositiveTerm {
                    label,
                    index,
                    value,
                });
            }
        }
        Ok(Self {
            label,
            ln_terms: terms.iter().map(|t| t.ln()).collect(),
        })
    }

    /// From logarithms directly; used for terms outside the `f64` range.
    pub fn from_ln_terms(label: impl Into<String>, ln_terms: Vec<f64>) -> Result<Self> {
        let label = label.into();
        if ln_terms.is_empty() {
            return Err(Error::InvalidInput(format!("sequence `{label}` is empty")));
        }
        if let Some(index) = ln_terms.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonPositiveTerm {
                label,
                index,
                value: ln_terms[index].exp(),
            });
        }
        Ok(Self { label, ln_terms })
    }

    pub fn from_generator(
        label: impl Into<String>,
        spec: &GeneratorSpec,
        max_index: usize,
    ) -> Result<Self> {
        match spec {
            GeneratorSpec::FactorialRatio(g) => {
                if !(g.base > 0.0) || !(g.scale > 0.0) {
                    return Err(Error::InvalidInput(
                        "factorial_ratio needs positive base and scale".into(),
                    ));
                }
                Self::from_ln_terms(label, (0..=max_index).map(|n| g.ln_term(n)).collect())
            }
            GeneratorSpec::Tabulated { terms } => {
                if terms.len() <= max_index {
                    return Err(Error::InvalidInput(format!(
                        "tabulated sequence has {} terms, index {max_index} requested",
                        terms.len()
                    )));
                }
                Self::tabulated(label, &terms[..=max_index])
            }
        }
    }

    pub fn from_profile(profile: &GrowthProfile) -> Result<Self> {
        Self::tabulated(profile.label.clone(), &profile.terms)
    }

    pub fn to_profile(&self) -> GrowthProfile {
        GrowthProfile {
            label: self.label.clone(),
            terms: self.terms(),
        }
    }

    /// The constant sequence 1.
    pub fn ones(max_index: usize) -> Self {
        Self {
            label: "1".into(),
            ln_terms: vec![0.0; max_index + 1],
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn max_index(&self) -> usize {
        self.ln_terms.len() - 1
    }

    pub fn ln_term(&self, n: usize) -> f64 {
        self.ln_terms[n]
    }

    pub fn term(&self, n: usize) -> f64 {
        self.ln_terms[n].exp()
    }

    pub fn terms(&self) -> Vec<f64> {
        self.ln_terms.iter().map(|l| l.exp()).collect()
    }

    pub fn ln_terms(&self) -> &[f64] {
        &self.ln_terms
    }
}

/// Thresholds of the prefix decision procedure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionThresholds {
    /// `rⁿ x_n / y_n` above this at the end of the prefix counts as growth.
    pub divergence: f64,
    /// Growth also requires strict increase over this many final steps.
    pub increasing_run: usize,
    /// Decay requires the final ratio to be below this.
    pub decay: f64,
}

impl Default for DecisionThresholds {
    fn default() -> Self {
        Self {
            divergence: 1e6,
            increasing_run: 5,
            decay: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    HoldsOnPrefix,
    ViolatedAt { radius: f64, index: usize },
    /// Neither monotone decay nor the divergence witness on this prefix.
    Inconclusive { radius: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusOutcome {
    pub radius: f64,
    pub relation: Relation,
    /// `log10 sup_{n in tail window} rⁿ x_n / y_n`.
    pub tail_sup_log10: f64,
    /// `log10 r^N x_N / y_N`.
    pub final_log10: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthVerdict {
    pub relation: Relation,
    pub probe_radii: Vec<f64>,
    pub prefix_length: usize,
    pub outcomes: Vec<RadiusOutcome>,
}

impl GrowthVerdict {
    pub fn holds(&self) -> bool {
        self.relation == Relation::HoldsOnPrefix
    }
}

fn check_prefix(x: &GrowthSequence, n_max: usize) -> Result<()> {
    if n_max > x.max_index() {
        return Err(Error::InvalidInput(format!(
            "prefix {n_max} exceeds computed range of `{}` ({})",
            x.label,
            x.max_index()
        )));
    }
    Ok(())
}

/// Finite-prefix test of `(x_n) ≺ (y_n)` at the given probe radii.
pub fn precedes_prefix(
    x: &GrowthSequence,
    y: &GrowthSequence,
    radii: &[f64],
    n_max: usize,
) -> Result<GrowthVerdict> {
    precedes_prefix_with(x, y, radii, n_max, &DecisionThresholds::default())
}

pub fn precedes_prefix_with(
    x: &GrowthSequence,
    y: &GrowthSequence,
    radii: &[f64],
    n_max: usize,
    thresholds: &DecisionThresholds,
) -> Result<GrowthVerdict> {
    if radii.is_empty() {
        return Err(Error::InvalidInput("no probe radii".into()));
    }
    if let Some(r) = radii.iter().find(|r| !(**r > 0.0)) {
        return Err(Error::InvalidInput(format!("probe radius {r} is not positive")));
    }
    if n_max < thresholds.increasing_run.max(2) {
        return Err(Error::InvalidInput(format!("prefix {n_max} is too short")));
    }
    check_prefix(x, n_max)?;
    check_prefix(y, n_max)?;

    let outcomes: Vec<RadiusOutcome> = radii
        .iter()
        .map(|&r| radius_outcome(x, y, r, n_max, thresholds))
        .collect();

    let relation = outcomes
        .iter()
        .find(|o| matches!(o.relation, Relation::ViolatedAt { .. }))
        .or_else(|| {
            outcomes
                .iter()
                .find(|o| matches!(o.relation, Relation::Inconclusive { .. }))
        })
        .map_or(Relation::HoldsOnPrefix, |o| o.relation.clone());

    Ok(GrowthVerdict {
        relation,
        probe_radii: radii.to_vec(),
        prefix_length: n_max,
        outcomes,
    })
}

fn radius_outcome(
    x: &GrowthSequence,
    y: &GrowthSequence,
    r: f64,
    n_max: usize,
    t: &DecisionThresholds,
) -> RadiusOutcome {
    let ln_r = r.ln();
    let logs: Vec<f64> = (0..=n_max)
        .map(|n| n as f64 * ln_r + x.ln_term(n) - y.ln_term(n))
        .collect();
    let start = tail_window_start(n_max);
    let tail = &logs[start..];
    let tail_sup = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let last = logs[n_max];

    let ln_div = t.divergence.ln();
    let run = &logs[n_max - t.increasing_run..];
    let increasing = run.windows(2).all(|w| w[1] > w[0]);
    let relation = if last > ln_div && increasing {
        let index = (0..=n_max)
            .rev()
            .take_while(|&n| logs[n] > ln_div)
            .last()
            .unwrap_or(n_max);
        Relation::ViolatedAt { radius: r, index }
    } else {
        let decreasing = tail.windows(2).all(|w| w[1] < w[0]);
        if decreasing && tail_sup < 0.0 && last < t.decay.ln() {
            Relation::HoldsOnPrefix
        } else {
            Relation::Inconclusive { radius: r }
        }
    };
    RadiusOutcome {
        radius: r,
        relation,
        tail_sup_log10: tail_sup / std::f64::consts::LN_10,
        final_log10: last / std::f64::consts::LN_10,
    }
}

/// `((x_n / y_n)^{1/n})` for `1 ≤ n ≤ N`, computed in log-space.
pub fn nth_root_profile(x: &GrowthSequence, y: &GrowthSequence, n_max: usize) -> Result<Vec<f64>> {
    if n_max < 1 {
        return Err(Error::InvalidInput("root profile needs N ≥ 1".into()));
    }
    check_prefix(x, n_max)?;
    check_prefix(y, n_max)?;
    Ok((1..=n_max)
        .map(|n| ((x.ln_term(n) - y.ln_term(n)) / n as f64).exp())
        .collect())
}

/// Maximum of a root profile (indexed from `n = 1`) over the tail window.
pub fn profile_tail_max(profile: &[f64]) -> f64 {
    let n_max = profile.len();
    profile[tail_window_start(n_max) - 1..]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusConfig {
    /// A limsup proxy below this is reported as an infinite radius.
    pub floor: f64,
    /// Relative step needed to call the tail of the root profile strictly
    /// decreasing.
    pub monotone_margin: f64,
}

impl Default for RadiusConfig {
    fn default() -> Self {
        Self {
            floor: 0.125,
            monotone_margin: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    #[serde(with = "extended_f64")]
    pub radius: f64,
    pub limsup_proxy: f64,
    pub tail_max: f64,
    /// The tail of `c_n^{1/n}` decreased strictly, so its last value bounds
    /// the limsup.
    pub monotone_tail: bool,
}

/// Radius of convergence of `Σ c_n zⁿ` from the prefix `0..=N`.
pub fn radius_estimate(coeffs: &GrowthSequence, n_max: usize) -> Result<f64> {
    Ok(radius_estimate_with(coeffs, n_max, &RadiusConfig::default())?.radius)
}

pub fn radius_estimate_with(
    coeffs: &GrowthSequence,
    n_max: usize,
    config: &RadiusConfig,
) -> Result<RadiusEstimate> {
    if n_max < 8 {
        return Err(Error::InvalidInput("radius estimate needs N ≥ 8".into()));
    }
    check_prefix(coeffs, n_max)?;
    let roots: Vec<f64> = (1..=n_max)
        .map(|n| (coeffs.ln_term(n) / n as f64).exp())
        .collect();
    let tail = &roots[tail_window_start(n_max) - 1..];
    let tail_max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let monotone_tail = tail
        .windows(2)
        .all(|w| w[1] < w[0] * (1.0 - config.monotone_margin));
    let limsup_proxy = if monotone_tail {
        *tail.last().expect("nonempty tail")
    } else {
        tail_max
    };
    let radius = if limsup_proxy < config.floor {
        f64::INFINITY
    } else {
        1.0 / limsup_proxy
    };
    Ok(RadiusEstimate {
        radius,
        limsup_proxy,
        tail_max,
        monotone_tail,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn offset(self) -> u64 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntireConfig {
    /// Radii beyond this (or infinite) count as entire-consistent.
    pub radius_threshold: f64,
    pub radius: RadiusConfig,
}

impl Default for EntireConfig {
    fn default() -> Self {
        Self {
            radius_threshold: 1e3,
            radius: RadiusConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntireVerdict {
    pub entire_consistent: bool,
    pub parity: Parity,
    pub prefix_length: usize,
    pub estimate: RadiusEstimate,
}

/// Entire test on a norm profile `‖φ_{2n+i}‖`, `n = 0..=N`: the radius of
/// `Σ (2n+i)! ‖φ_{2n+i}‖ / n! · zⁿ` must be (effectively) infinite.
pub fn entire_test(norms: &GrowthSequence, parity: Parity, n_max: usize) -> Result<EntireVerdict> {
    entire_test_with(norms, parity, n_max, &EntireConfig::default())
}

pub fn entire_test_with(
    norms: &GrowthSequence,
    parity: Parity,
    n_max: usize,
    config: &EntireConfig,
) -> Result<EntireVerdict> {
    check_prefix(norms, n_max)?;
    let i = parity.offset();
    let coeffs = GrowthSequence::from_ln_terms(
        format!("entire coefficients of {}", norms.label()),
        (0..=n_max)
            .map(|n| {
                let n64 = n as u64;
                ln_factorial(2 * n64 + i) + norms.ln_term(n) - ln_factorial(n64)
            })
            .collect(),
    )?;
    let estimate = radius_estimate_with(&coeffs, n_max, &config.radius)?;
    Ok(EntireVerdict {
        entire_consistent: estimate.radius > config.radius_threshold,
        parity,
        prefix_length: n_max,
        estimate,
    })
}

/// Serialises non-finite floats as the strings `"inf"`/`"-inf"`/`"nan"`.
pub mod extended_f64 {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(de::Error::custom(format!("bad float `{other}`"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr(num: &[[u64; 2]], den: &[[u64; 2]], base: f64) -> GeneratorSpec {
        GeneratorSpec::FactorialRatio(FactorialRatio {
            numerator: num.to_vec(),
            denominator: den.to_vec(),
            base,
            ..Default::default()
        })
    }

    fn seq(spec: GeneratorSpec, n: usize) -> GrowthSequence {
        GrowthSequence::from_generator("test", &spec, n).unwrap()
    }

    const PROBES: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

    #[test]
    fn inverse_factorial_precedes_one() {
        let x = seq(fr(&[], &[[1, 0]], 1.0), 40);
        let v = precedes_prefix(&x, &GrowthSequence::ones(40), &PROBES, 40).unwrap();
        assert_eq!(v.relation, Relation::HoldsOnPrefix);
    }

    #[test]
    fn constant_is_violated_at_radius_two() {
        let v = precedes_prefix(
            &GrowthSequence::ones(40),
            &GrowthSequence::ones(40),
            &[2.0],
            40,
        )
        .unwrap();
        // 2ⁿ first exceeds 10⁶ at n = 20.
        assert_eq!(
            v.relation,
            Relation::ViolatedAt {
                radius: 2.0,
                index: 20
            }
        );
    }

    #[test]
    fn entire_class_sits_inside_e_one() {
        let x = seq(fr(&[[1, 0]], &[[2, 0]], 1.0), 40);
        let v = precedes_prefix(&x, &GrowthSequence::ones(40), &PROBES, 40).unwrap();
        assert!(v.holds());
    }

    #[test]
    fn constant_at_radius_one_is_inconclusive() {
        let v = precedes_prefix(
            &GrowthSequence::ones(40),
            &GrowthSequence::ones(40),
            &[1.0],
            40,
        )
        .unwrap();
        assert_eq!(v.relation, Relation::Inconclusive { radius: 1.0 });
    }

    #[test]
    fn nonpositive_terms_are_rejected() {
        assert!(matches!(
            GrowthSequence::tabulated("bad", &[1.0, 0.0]),
            Err(Error::NonPositiveTerm { index: 1, .. })
        ));
        assert!(GrowthSequence::tabulated("bad", &[-1.0]).is_err());
    }

    #[test]
    fn no_overflow_at_large_prefix() {
        let x = seq(fr(&[[2, 0]], &[], 1.0), 400);
        let v = precedes_prefix(&x, &GrowthSequence::ones(400), &[8.0], 400).unwrap();
        assert!(matches!(v.relation, Relation::ViolatedAt { .. }));
        assert!(v.outcomes[0].final_log10.is_finite());
    }

    #[test]
    fn root_profile_of_inverse_factorial() {
        let x = seq(fr(&[], &[[1, 0]], 1.0), 20);
        let p = nth_root_profile(&x, &GrowthSequence::ones(20), 20).unwrap();
        // (1/10!)^{1/10} = 0.22081...
        assert!((p[9] - 0.220_812_52).abs() < 1e-8, "{}", p[9]);
        assert!(p.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn root_profile_of_equal_sequences_is_one() {
        let x = seq(fr(&[[1, 0]], &[], 3.0), 12);
        let p = nth_root_profile(&x, &x, 12).unwrap();
        assert!(p.iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn root_profile_of_cocycle_norms() {
        // (n+1)/(2ⁿ n!) at n = 4 is 5/384, fourth root 0.33780...
        let x = seq(fr(&[[1, 1]], &[[1, 0], [1, 0]], 0.5), 12);
        let p = nth_root_profile(&x, &GrowthSequence::ones(12), 12).unwrap();
        assert!((p[3] - (5.0f64 / 384.0).powf(0.25)).abs() < 1e-12);
        assert!(p[3..].iter().all(|&v| v < 0.5));
    }

    #[test]
    fn radius_of_universal_coefficients_is_near_half() {
        let c = seq(fr(&[[2, 0], [1, 1]], &[[1, 0], [1, 0], [1, 0]], 0.5), 40);
        let r = radius_estimate(&c, 40).unwrap();
        assert!((0.45..=0.55).contains(&r), "{r}");
    }

    #[test]
    fn radius_of_exponential_series_is_infinite() {
        let c = seq(fr(&[], &[[1, 0]], 1.0), 40);
        assert_eq!(radius_estimate(&c, 40).unwrap(), f64::INFINITY);
    }

    #[test]
    fn radius_of_geometric_series() {
        let c = seq(fr(&[], &[], 2.0), 40);
        assert!((radius_estimate(&c, 40).unwrap() - 0.5).abs() < 1e-12);
        assert!(radius_estimate(&c, 7).is_err());
    }

    #[test]
    fn entire_boundary_case_is_not_entire() {
        // ‖φ_{2n}‖ = n!/(2n)! gives coefficients identically 1.
        let norms = seq(fr(&[[1, 0]], &[[2, 0]], 1.0), 40);
        let v = entire_test(&norms, Parity::Even, 40).unwrap();
        assert!(!v.entire_consistent);
        assert!((v.estimate.radius - 1.0).abs() < 1e-9);
    }

    #[test]
    fn super_geometric_coefficients_are_entire() {
        // ‖φ_{2n}‖ = 1/(2n)! gives coefficients 1/n!.
        let norms = seq(fr(&[], &[[2, 0]], 1.0), 40);
        assert!(entire_test(&norms, Parity::Even, 40).unwrap().entire_consistent);
    }

    #[test]
    fn universal_cocycle_norms_are_not_entire() {
        let norms = seq(fr(&[[1, 1]], &[[1, 0], [1, 0]], 0.5), 40);
        let v = entire_test(&norms, Parity::Even, 40).unwrap();
        assert!(!v.entire_consistent);
        assert!((0.45..=0.55).contains(&v.estimate.radius));
    }

    #[test]
    fn generator_json_schema() {
        let spec: GeneratorSpec = serde_json::from_str(
            r#"{"kind":"factorial_ratio","params":{"numerator":[[1,0]],"denominator":[[2,0]]}}"#,
        )
        .unwrap();
        assert_eq!(spec, fr(&[[1, 0]], &[[2, 0]], 1.0));
        let tab: GeneratorSpec =
            serde_json::from_str(r#"{"kind":"tabulated","params":{"terms":[1.0,0.5]}}"#).unwrap();
        let s = GrowthSequence::from_generator("t", &tab, 1).unwrap();
        assert_eq!(s.terms(), vec![1.0, 0.5]);
    }

    #[test]
    fn closed_form_terms_are_reproducible() {
        let spec = fr(&[[1, 0]], &[[2, 0]], 1.0);
        let a = seq(spec.clone(), 30);
        let b = seq(spec, 30);
        assert_eq!(a.ln_terms(), b.ln_terms());
    }
}
