use std::path::Path;

use ncindex::charmaps::eta_index_evaluator;
use ncindex::cocyclic::{
    check_identities, norm_estimate_check, AlgebraCochains, Direction, FiniteAlgebra,
    IdentityReport, MixedComplexPresentation, NormEstimateReport, PresentationJson,
    TruncatedCochain,
};
use ncindex::fredholm::{
    chern_component, even_index_cochain_pairing, jlo_bracket, negative_count_difference,
    odd_index_constant, pair_even_k0, pair_odd_k1, spectral_flow_crossings,
    spectral_flow_integral, CMatrix, EvenIndexReport, HeatModule, JloMode, K0Pairing,
    OddConstant, OddPairing, QuadratureMethod, QuadratureSpec, SpectralFlow,
    SpectralFlowIntegral,
};
use ncindex::growth::{
    nth_root_profile, precedes_prefix, radius_estimate_with, GeneratorSpec, GrowthProfile,
    GrowthSequence, GrowthVerdict, RadiusConfig, RadiusEstimate,
};
use ncindex::io::{read_json, to_json_string, ModuleSpec, SimplexChainJson};
use ncindex::simplex::{
    classify_cocycle_growth, cocycle_norm_law, universal_cocycle, verify_cocycle_window_for,
    CocycleWindowReport, GrowthClassification, SimplexModule,
};
use ncindex::charmaps::HopfModule;
use ncindex::rational::to_f64;
use ncindex::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Command, Method};

pub struct Outcome {
    pub report: String,
    pub passed: bool,
}

/// Echo of the command line, embedded in every report.
#[derive(Serialize)]
struct RunConfig {
    command: &'static str,
    inputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    truncation: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quadrature: Option<JloMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    radii: Option<Vec<f64>>,
    seed: u64,
}

impl RunConfig {
    fn new(command: &'static str, seed: u64) -> Self {
        Self {
            command,
            inputs: Vec::new(),
            truncation: None,
            quadrature: None,
            radii: None,
            seed,
        }
    }
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    config: RunConfig,
    passed: bool,
    #[serde(flatten)]
    body: T,
}

fn finish<T: Serialize>(config: RunConfig, passed: bool, body: T) -> Result<Outcome> {
    let report = to_json_string(&Report {
        config,
        passed,
        body,
    })?;
    Ok(Outcome { report, passed })
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn jlo_mode(method: Method, tol: f64, n: usize, seed: u64) -> Result<JloMode> {
    Ok(match method {
        Method::Exact => JloMode::Exact,
        Method::Quadrature if n <= 3 => JloMode::Quadrature(QuadratureSpec::auto(tol)?),
        Method::Quadrature => JloMode::Quadrature(QuadratureSpec::new(
            QuadratureMethod::MonteCarlo {
                samples: 1_000_000,
                seed,
            },
            tol,
        )?),
    })
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::VerifySimplex {
            max_even_degree,
            terms,
            mutate,
            common,
        } => verify_simplex(*max_even_degree, *terms, *mutate, common.seed),
        Command::GrowthClassify {
            input,
            terms,
            radii,
            common,
        } => growth_classify(input.as_deref(), *terms, radii, common.seed),
        Command::Jlo {
            module,
            args,
            chern,
            method,
            tol,
            common,
        } => jlo(module, args, *chern, *method, *tol, common.seed),
        Command::EvenIndex {
            module,
            projection,
            terms,
            general,
            method,
            tol,
            common,
        } => even_index(module, projection, *terms, *general, *method, *tol, common.seed),
        Command::SpectralFlow {
            module,
            terms,
            pairing_terms,
            samples,
            scales,
            tol,
            common,
        } => spectral_flow(module, *terms, *pairing_terms, *samples, scales, *tol, common.seed),
        Command::Identities {
            max_degree,
            samples,
            presentation,
            common,
        } => identities(*max_degree, *samples, presentation.as_deref(), common.seed),
    }
}

#[derive(Serialize)]
struct VerifySimplexBody {
    mutated_component: Option<usize>,
    cocycle: Vec<SimplexChainJson>,
    window: CocycleWindowReport,
    growth: GrowthClassification,
    identities: IdentityReport,
}

fn verify_simplex(n: usize, terms: usize, mutate: Option<usize>, seed: u64) -> Result<Outcome> {
    if n == 0 {
        return Err(Error::InvalidInput("--max-even-degree must be at least 1".into()));
    }
    let mut comps = (0..=n).map(universal_cocycle).collect::<Result<Vec<_>>>()?;
    if let Some(k) = mutate {
        let c = comps
            .get_mut(k)
            .ok_or_else(|| Error::InvalidInput(format!("cannot mutate φ_{} beyond the window", 2 * k)))?;
        let (key, v) = c.iter().next().map(|(k, v)| (k.clone(), v.clone())).expect("nonzero component");
        c.add_term(key, &v);
    }
    let prefix = TruncatedCochain::new(&SimplexModule, 0, comps)?;
    let window = verify_cocycle_window_for(&prefix)?;
    let growth = classify_cocycle_growth(terms)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let identities = check_identities(&SimplexModule, (2 * n).min(10), 4, &mut rng)?;
    let passed = window.all_passed && growth.all_passed && identities.all_passed;
    let mut config = RunConfig::new("verify-simplex", seed);
    config.truncation = Some(n);
    finish(
        config,
        passed,
        VerifySimplexBody {
            mutated_component: mutate,
            cocycle: prefix.components().iter().map(SimplexChainJson::from).collect(),
            window,
            growth,
            identities,
        },
    )
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SequenceInput {
    Profile(GrowthProfile),
    Generator(GeneratorSpec),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GrowthInput {
    x: SequenceInput,
    #[serde(default)]
    y: Option<SequenceInput>,
}

fn sequence(s: &SequenceInput, label: &str, n: usize) -> Result<GrowthSequence> {
    match s {
        SequenceInput::Profile(p) => GrowthSequence::from_profile(p),
        SequenceInput::Generator(g) => GrowthSequence::from_generator(label, g, n),
    }
}

#[derive(Serialize)]
struct GrowthBody {
    x: String,
    y: String,
    verdict: GrowthVerdict,
    root_profile: Vec<f64>,
    radius: RadiusEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    cocycle: Option<GrowthClassification>,
}

fn growth_classify(input: Option<&Path>, n: usize, radii: &[f64], seed: u64) -> Result<Outcome> {
    let mut config = RunConfig::new("growth-classify", seed);
    config.truncation = Some(n);
    config.radii = Some(radii.to_vec());
    let ones = GrowthSequence::ones(n);
    let (x, y, cocycle) = match input {
        Some(path) => {
            config.inputs.push(path_str(path));
            let g: GrowthInput = read_json(path)?;
            let x = sequence(&g.x, "x", n)?;
            let y = match &g.y {
                Some(s) => sequence(s, "y", n)?,
                None => ones,
            };
            (x, y, None)
        }
        None => {
            let norms: Vec<f64> = (0..=n).map(|k| to_f64(&cocycle_norm_law(k))).collect();
            let x = GrowthSequence::tabulated("universal cocycle norms", &norms)?;
            (x, ones, Some(classify_cocycle_growth(n)?))
        }
    };
    let verdict = precedes_prefix(&x, &y, radii, n)?;
    let root_profile = nth_root_profile(&x, &y, n)?;
    let radius = radius_estimate_with(&x, n, &RadiusConfig::default())?;
    let passed = verdict.holds() && cocycle.as_ref().is_none_or(|c| c.all_passed);
    finish(
        config,
        passed,
        GrowthBody {
            x: x.label().to_string(),
            y: y.label().to_string(),
            verdict,
            root_profile,
            radius,
            cocycle,
        },
    )
}

/// Algebra elements of an even module, or `g`/`g_inv` of an odd one.
fn lookup(spec: &ModuleSpec, names: &[String]) -> Result<(Box<dyn HeatModule>, Vec<CMatrix>)> {
    match spec {
        ModuleSpec::Even(_) => {
            let m = spec.even()?;
            let args = names
                .iter()
                .map(|n| m.element(n).cloned())
                .collect::<Result<Vec<_>>>()?;
            Ok((Box::new(m), args))
        }
        ModuleSpec::Odd(_) => {
            let m = spec.odd()?;
            let args = names
                .iter()
                .map(|n| match n.as_str() {
                    "g" => Ok(m.unitary().clone()),
                    "g_inv" => Ok(m.unitary_inverse()),
                    _ => Err(Error::InvalidInput(format!("odd modules provide g and g_inv, not `{n}`"))),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((Box::new(m), args))
        }
        ModuleSpec::Path(_) => Err(Error::InvalidModule("a path spec has no algebra".into())),
    }
}

#[derive(Serialize)]
struct JloBody {
    module_kind: &'static str,
    args: Vec<String>,
    chern: bool,
    value: [f64; 2],
    error_estimate: f64,
    method: String,
    evaluations: usize,
}

fn jlo(module: &Path, names: &[String], chern: bool, method: Method, tol: f64, seed: u64) -> Result<Outcome> {
    let spec: ModuleSpec = read_json(module)?;
    let (m, mut args) = lookup(&spec, names)?;
    let mode = jlo_mode(method, tol, args.len() - 1, seed)?;
    if chern {
        for a in args.iter_mut().skip(1) {
            *a = m.commutator(a)?;
        }
    }
    let v = jlo_bracket(m.as_ref(), &args, &mode)?;
    let mut config = RunConfig::new("jlo", seed);
    config.inputs.push(path_str(module));
    config.quadrature = Some(mode);
    finish(
        config,
        true,
        JloBody {
            module_kind: spec.kind(),
            args: names.to_vec(),
            chern,
            value: [v.value.re, v.value.im],
            error_estimate: v.error_estimate,
            method: v.method,
            evaluations: v.evaluations,
        },
    )
}

#[derive(Serialize)]
struct EvenIndexBody {
    projection: String,
    index: EvenIndexReport,
    /// `Σ (-1)ⁿ (2n)!/n! Ch^{2n}(p, …, p)`, which collapses to the index.
    jlo_pairing: K0Pairing,
    jlo_deviation: f64,
}

/// Exact pairings are compared to this; quadrature pairings to `--tol`.
const EXACT_TOL: f64 = 1e-10;

fn even_index(
    module: &Path,
    projection: &str,
    terms: usize,
    general: Option<usize>,
    method: Method,
    tol: f64,
    seed: u64,
) -> Result<Outcome> {
    let spec: ModuleSpec = read_json(module)?;
    let fm = spec.even()?;
    let p = fm.element(projection)?.clone();
    let index = even_index_cochain_pairing(&fm, &p, terms, general)?;
    let jlo_terms = terms.min(3);
    let mode = jlo_mode(method, tol, 2 * jlo_terms, seed)?;
    let psi = |deg: usize, args: &[CMatrix]| -> Result<_> {
        Ok(chern_component(&fm, deg / 2, args, &mode)?.value)
    };
    let jlo_pairing = pair_even_k0(&fm, &psi, &p, jlo_terms)?;
    let ind = index.mckean_singer.index as f64;
    let jlo_deviation = (jlo_pairing.total[0] - ind).hypot(jlo_pairing.total[1]);
    let jlo_tol = if method == Method::Exact { EXACT_TOL } else { tol };
    let ratio_ok = match index.ratio_error {
        Some(e) => e.abs() <= EXACT_TOL,
        None => index.pairing[0].hypot(index.pairing[1]) <= EXACT_TOL,
    };
    let passed = ratio_ok && jlo_deviation <= jlo_tol;
    let mut config = RunConfig::new("even-index", seed);
    config.inputs.push(path_str(module));
    config.truncation = Some(terms);
    config.quadrature = Some(mode);
    finish(
        config,
        passed,
        EvenIndexBody {
            projection: projection.to_string(),
            index,
            jlo_pairing,
            jlo_deviation,
        },
    )
}

#[derive(Serialize)]
struct SpectralFlowBody {
    module_kind: &'static str,
    crossings: SpectralFlow,
    /// `#neg(A₀) - #neg(A₁)`.
    negative_count_difference: i64,
    integrals: Vec<SpectralFlowIntegral>,
    #[serde(skip_serializing_if = "Option::is_none")]
    derivation_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    odd_pairing: Option<OddPairing>,
    odd_constant: OddConstant,
}

/// Integral tolerance for isospectral (conjugation) paths.
const CONJUGATION_TOL: f64 = 1e-8;
/// Agreement of the large-scale integral with the crossing count.
const LARGE_SCALE_TOL: f64 = 0.05;

fn spectral_flow(
    module: &Path,
    terms: usize,
    pairing_terms: usize,
    samples: usize,
    scales: &[f64],
    tol: f64,
    seed: u64,
) -> Result<Outcome> {
    let spec: ModuleSpec = read_json(module)?;
    let path = spec.path()?;
    let crossings = spectral_flow_crossings(&path, samples)?;
    let oracle = negative_count_difference(&path)?;
    let integrals = scales
        .iter()
        .map(|t| spectral_flow_integral(&path, *t, tol))
        .collect::<Result<Vec<_>>>()?;
    let (derivation_constant, odd_pairing) = match &spec {
        ModuleSpec::Odd(_) => {
            let om = spec.odd()?;
            let psi = eta_index_evaluator(&om, pairing_terms)?;
            (Some(om.derivation_constant()), Some(pair_odd_k1(&om, &psi, pairing_terms)?))
        }
        _ => (None, None),
    };
    let odd_constant = odd_index_constant(terms)?;
    let mut passed = crossings.flow == oracle;
    if matches!(spec, ModuleSpec::Odd(_)) {
        passed &= integrals.iter().all(|i| i.value.abs() <= CONJUGATION_TOL);
    }
    if let Some(large) = integrals.iter().rfind(|i| i.scale >= 100.0) {
        passed &= (large.value - crossings.flow as f64).abs() <= LARGE_SCALE_TOL;
    }
    let mut config = RunConfig::new("spectral-flow", seed);
    config.inputs.push(path_str(module));
    config.truncation = Some(terms);
    finish(
        config,
        passed,
        SpectralFlowBody {
            module_kind: spec.kind(),
            crossings,
            negative_count_difference: oracle,
            integrals,
            derivation_constant,
            odd_pairing,
            odd_constant,
        },
    )
}

#[derive(Serialize)]
struct BettiRow {
    degree: usize,
    b: usize,
    #[serde(rename = "B")]
    big_b: usize,
}

#[derive(Serialize)]
struct IdentitiesBody {
    suites: Vec<IdentityReport>,
    norm_estimates: Vec<NormEstimateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    betti: Option<Vec<BettiRow>>,
}

/// Degrees and samples of the norm estimates on algebra cochains.
const NORM_DEGREES: usize = 6;
const NORM_SAMPLES: usize = 100;

fn identities(max_degree: usize, samples: usize, presentation: Option<&Path>, seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suites = vec![check_identities(&SimplexModule, max_degree, samples, &mut rng)?];
    suites.push(check_identities(&HopfModule, max_degree.min(6), samples, &mut rng)?);
    for a in [
        FiniteAlgebra::cyclic_group(3),
        FiniteAlgebra::dual_numbers(),
        FiniteAlgebra::diagonal(2),
    ] {
        suites.push(check_identities(&AlgebraCochains::new(a), max_degree.min(4), samples, &mut rng)?);
    }
    let cochains = AlgebraCochains::new(FiniteAlgebra::cyclic_group(3));
    let norm_estimates = (0..=NORM_DEGREES)
        .filter_map(|n| norm_estimate_check(&cochains, n, NORM_SAMPLES, &mut rng).transpose())
        .collect::<Result<Vec<_>>>()?;
    let mut config = RunConfig::new("identities", seed);
    config.truncation = Some(max_degree);
    let betti = match presentation {
        Some(path) => {
            config.inputs.push(path_str(path));
            let p = MixedComplexPresentation::from_json(&read_json::<PresentationJson>(path)?)?;
            Some(
                (0..=p.top())
                    .map(|m| {
                        Ok(BettiRow {
                            degree: m,
                            b: p.betti(m, Direction::LittleB)?,
                            big_b: p.betti(m, Direction::BigB)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            )
        }
        None => None,
    };
    let passed = suites.iter().all(|s| s.all_passed) && norm_estimates.iter().all(|r| r.all_passed);
    finish(
        config,
        passed,
        IdentitiesBody {
            suites,
            norm_estimates,
            betti,
        },
    )
}
