//! Command-line front end: `analyze`, `region`, `verify` and `corpus`.
//!
//! [`run`] does all the work and returns the exit code with the text that
//! would go to stdout and stderr, so the binary is a thin wrapper.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use rsharp_core::classify::check_hypothesis;
use rsharp_core::corpus;
use rsharp_core::factor::{linearly_adapt, FactorDecomposition, FactorError};
use rsharp_core::newton::newton_data;
use rsharp_core::poly::{int, PolyError, DEFAULT_DEGREE_CAP};
use rsharp_core::region::{
    excluded_region, newton_inputs, point_json, rational_json, region_factor_form, region_json, region_newton_form,
    relevant_vertices, RegionError, RieszRegion, VertexInfo,
};
use rsharp_core::univariate::RootKind;
use rsharp_core::{classify, format, lemma_consistency_suite, parse, CaseLabel, ClassifyError, ParseError, Rational, SurfaceInvariants};
use rsharp_verify::families::Condition;
use rsharp_verify::measure::{self, MEASURE_TOLERANCE};
use rsharp_verify::scaling::{default_x_grid, DEFAULT_RESOLUTION};
use rsharp_verify::{necessity_slope_test, scaling_identity_check, Box3, Verdict, VerificationReport, VerifyError};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Relative residual accepted by `verify --condition scaling`.
pub const SCALING_TOLERANCE: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "rsharp", version, about = "Riesz regions of averaging operators over mixed-homogeneous graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariants, case label and region of a polynomial.
    Analyze(AnalyzeArgs),
    /// Only the region, as vertex JSON.
    Region(RegionArgs),
    /// Numerical checks: necessity slopes, scaling identity, level-set measures.
    Verify(VerifyArgs),
    /// Sweep of seeded random polynomials through the exact checks.
    Corpus(CorpusArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Formulation {
    Newton,
    Factor,
    Both,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Compact JSON on stdout.
    #[arg(long)]
    json: bool,
    /// Indented JSON on stdout.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    poly: String,
    #[arg(long, value_enum, default_value = "both")]
    formulation: Formulation,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct RegionArgs {
    poly: String,
    #[arg(long, value_enum, default_value = "factor")]
    formulation: Formulation,
    #[arg(long)]
    pretty: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    poly: String,
    /// One of q_ge_p, q_le_3p, scaling_line, case_nu, case_N_1overN,
    /// case_N_slope, case_A_slope, scaling, measure.
    #[arg(long)]
    condition: String,
    /// Comma-separated parameters (epsilon or K; dyadic levels m for `measure`).
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Dilation for `scaling`.
    #[arg(long, default_value_t = 2.0)]
    sigma: f64,
    /// Region index for `measure` (all applicable regions when absent).
    #[arg(long)]
    region: Option<usize>,
    /// Quadrature step for `scaling`.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: f64,
    #[arg(long)]
    pretty: bool,
}

#[derive(Args, Debug)]
struct CorpusArgs {
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = corpus::DEFAULT_MAX_DEGREE)]
    max_degree: u32,
    #[arg(long)]
    pretty: bool,
}

/// Result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum CliError {
    User { kind: String, message: String },
    Internal(String),
}

impl CliError {
    fn user(kind: &str, message: impl ToString) -> Self {
        CliError::User { kind: kind.into(), message: message.to_string() }
    }
}

fn poly_error_kind(e: &PolyError) -> &'static str {
    match e {
        PolyError::DegreeCap { .. } => "DegreeCap",
        PolyError::NotMixedHomogeneous => "NotMixedHomogeneous",
        PolyError::NonpositiveWeight { .. } => "NonpositiveWeight",
        PolyError::ZeroPolynomial => "ZeroPolynomial",
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        let kind = match &e {
            ParseError::SyntaxError { .. } => "SyntaxError",
            ParseError::UnknownVariable { .. } => "UnknownVariable",
            ParseError::NegativeExponent { .. } => "NegativeExponent",
            ParseError::Degree(p) => poly_error_kind(p),
        };
        CliError::user(kind, e)
    }
}

impl From<FactorError> for CliError {
    fn from(e: FactorError) -> Self {
        match &e {
            FactorError::Poly(p) => CliError::user(poly_error_kind(p), e),
            FactorError::IrrationalAdaptationRoot => CliError::user("IrrationalAdaptationRoot", e),
            FactorError::InternalInconsistency { .. } => CliError::Internal(e.to_string()),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Poly(p) => CliError::user(poly_error_kind(&p), p),
            ClassifyError::Factor(f) => f.into(),
            ClassifyError::HypothesisViolation(_) => CliError::user("HypothesisViolation", e),
            ClassifyError::UniquenessViolation(_) => CliError::user("UniquenessViolation", e),
            ClassifyError::ConsistencyFailure { .. } => CliError::Internal(e.to_string()),
        }
    }
}

impl From<RegionError> for CliError {
    fn from(e: RegionError) -> Self {
        match e {
            RegionError::Classify(c) => c.into(),
            RegionError::Factor(f) => f.into(),
            RegionError::ExcludedCase(_) => CliError::user("ExcludedCase", e),
            RegionError::AdaptationRequired => CliError::user("AdaptationRequired", e),
            RegionError::ConsistencyFailure { .. } => CliError::Internal(e.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        let kind = match &e {
            VerifyError::DegenerateBox => "DegenerateBox",
            VerifyError::TooFewSamples(_) => "TooFewSamples",
            VerifyError::InapplicableCondition(_) => "InapplicableCondition",
            VerifyError::UnknownCondition(_) => "UnknownCondition",
            VerifyError::GridTooShort(_) => "GridTooShort",
        };
        CliError::user(kind, e)
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => cmd_analyze(&a),
        Command::Region(a) => cmd_region(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Corpus(a) => cmd_corpus(&a),
    };
    match result {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(CliError::User { kind, message }) => {
            Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error[{kind}]: {message}\n") }
        }
        Err(CliError::Internal(message)) => Outcome {
            code: EXIT_INTERNAL,
            stdout: String::new(),
            stderr: format!("internal error[ConsistencyFailure]: {message}\n"),
        },
    }
}

/// Builds the global rayon pool from `RSHARP_THREADS` when it is set.
pub fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("RSHARP_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("RSHARP_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("RSHARP_THREADS must be a positive integer, got 0".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn render<T: Serialize>(value: &T, pretty: bool) -> String {
    let mut s = if pretty {
        serde_json::to_string_pretty(value).expect("reports serialize")
    } else {
        serde_json::to_string(value).expect("reports serialize")
    };
    s.push('\n');
    s
}

fn parse_input(src: &str) -> Result<SurfaceInvariants, CliError> {
    let phi = parse(src)?;
    check_hypothesis(&phi)?;
    let inv = classify(&phi)?;
    lemma_consistency_suite(&phi, &inv).ensure()?;
    Ok(inv)
}

fn rat(q: &Rational) -> Value {
    json!(rational_json(q))
}

fn opt_rat(q: Option<&Rational>) -> Value {
    q.map_or(Value::Null, rat)
}

fn factors_json(fd: &FactorDecomposition) -> Value {
    let real: Vec<Value> = fd
        .real_factors
        .iter()
        .map(|f| {
            let root = match &f.root.kind {
                RootKind::Rational(q) => json!({"exact": rat(q)}),
                RootKind::Isolated { lo, hi, .. } => json!({"interval": [rat(lo), rat(hi)]}),
            };
            json!({"lambda": root, "approx": f.root.approx, "multiplicity": f.mult})
        })
        .collect();
    let complex: Vec<Value> =
        fd.complex_layers.iter().map(|&(roots, mult)| json!({"roots": roots, "multiplicity": mult})).collect();
    json!({
        "r": fd.r,
        "s": fd.s,
        "constant": rat(&fd.constant),
        "nu1": fd.nu1_tilde,
        "nu2": fd.nu2_tilde,
        "real": real,
        "complex": complex,
    })
}

struct Regions {
    factor: Option<RieszRegion>,
    newton: Option<RieszRegion>,
    equivalent: Option<bool>,
    infos: Vec<VertexInfo>,
    newton_json: Value,
    warnings: Vec<String>,
}

fn build_regions(inv: &SurfaceInvariants, formulation: Formulation) -> Result<Regions, CliError> {
    let mut warnings = Vec::new();
    if inv.case.is_excluded() {
        let region = excluded_region(inv.case);
        if inv.case == CaseLabel::ExcludedZero {
            warnings.push("zero polynomial: the region is the diagonal".to_string());
        }
        let newton_json = if inv.phi.is_zero() {
            Value::Null
        } else {
            let nd = newton_data(&inv.phi.support());
            json!({
                "polytope_vertices": nd.polytope_vertices,
                "d_phi": rat(&nd.d_phi),
                "d_r": opt_rat(nd.d_r.as_ref()),
            })
        };
        return Ok(Regions {
            factor: Some(region),
            newton: None,
            equivalent: None,
            infos: Vec::new(),
            newton_json,
            warnings,
        });
    }

    let want_factor = formulation != Formulation::Newton;
    let want_newton = formulation != Formulation::Factor;
    let factor = region_factor_form(inv)?;

    let nd = newton_data(&inv.phi.support());
    let mut newton_json = json!({
        "polytope_vertices": nd.polytope_vertices,
        "d_phi": rat(&nd.d_phi),
        "d_r1": opt_rat(nd.d_r1.as_ref()),
        "d_r2": opt_rat(nd.d_r2.as_ref()),
        "d_r": opt_rat(nd.d_r.as_ref()),
    });
    let newton = match linearly_adapt(&inv.phi) {
        Ok((adapted, shear)) => {
            let ni = newton_inputs(&adapted)?;
            let obj = newton_json.as_object_mut().expect("object");
            obj.insert("adapted".into(), json!(shear == int(0)));
            obj.insert("shear".into(), rat(&shear));
            obj.insert("adapted_polynomial".into(), json!(format(&adapted)));
            obj.insert("adapted_d_phi".into(), rat(&ni.d_phi));
            obj.insert("adapted_d_r".into(), opt_rat(ni.d_r.as_ref()));
            obj.insert("o_phi".into(), json!(ni.o_phi));
            obj.insert("height".into(), rat(&ni.h));
            if inv.case == CaseLabel::CaseN && int(inv.n as i64) != ni.d_phi {
                warnings.push(format!(
                    "N = {} differs from d(phi) = {} of the adapted polynomial; the formulations are matched with N = h(phi) = {}",
                    inv.n, ni.d_phi, ni.h
                ));
            }
            Some(region_newton_form(&ni.d_phi, ni.d_r.as_ref(), &ni.h))
        }
        Err(FactorError::IrrationalAdaptationRoot) => {
            warnings.push(
                "adaptation pending: the shear that adapts phi has an irrational slope; the Newton form is not computed"
                    .to_string(),
            );
            None
        }
        Err(e) => return Err(e.into()),
    };
    let equivalent = newton.as_ref().map(|n| n.vertices == factor.vertices);
    if equivalent == Some(false) {
        return Err(CliError::Internal(format!(
            "factor and Newton formulations disagree for {}",
            format(&inv.phi)
        )));
    }
    let base = if want_factor { &factor } else { newton.as_ref().unwrap_or(&factor) };
    let infos = relevant_vertices(base, inv)?;
    Ok(Regions {
        factor: want_factor.then_some(factor),
        newton: if want_newton { newton } else { None },
        equivalent: if want_factor && want_newton { equivalent } else { None },
        infos,
        newton_json,
        warnings,
    })
}

fn weight_json(inv: &SurfaceInvariants) -> Value {
    inv.weight.as_ref().map_or(Value::Null, |w| {
        json!({
            "kappa": [rat(&w.kappa1), rat(&w.kappa2)],
            "r": w.r,
            "s": w.s,
            "m": w.m,
            "d_h": rat(&w.d_h),
            "homogeneous": w.is_homogeneous(),
        })
    })
}

fn analysis_report(src: &str, inv: &SurfaceInvariants, regions: &Regions) -> Value {
    let mut region_obj = serde_json::Map::new();
    if let Some(f) = &regions.factor {
        region_obj.insert("factor".into(), region_json(f, &regions.infos));
    }
    if let Some(n) = &regions.newton {
        region_obj.insert("newton".into(), region_json(n, &regions.infos));
    }
    let vertices: Vec<Value> = regions
        .infos
        .iter()
        .map(|v| {
            json!({
                "index": v.index,
                "point": point_json(&v.point),
                "relevant": v.relevant,
                "on_scaling_line": v.on_scaling_line,
                "subcase": v.subcase.map(|s| s.to_string()),
            })
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": "analyze",
        "input": src,
        "polynomial": format(&inv.phi),
        "weight": weight_json(inv),
        "newton": regions.newton_json,
        "factors": {
            "phi": inv.phi_factors.as_ref().map_or(Value::Null, factors_json),
            "omega": inv.omega_factors.as_ref().map_or(Value::Null, factors_json),
        },
        "hessian": format(&inv.omega),
        "invariants": {
            "d_omega": rat(&inv.d_omega),
            "T": inv.t,
            "f_T": inv.f_t.label(),
            "nu": inv.nu,
            "A": inv.a,
            "N": inv.n,
            "J": inv.j,
            "Q": inv.q,
            "adaptation_pending": inv.adaptation_pending,
        },
        "case": inv.case.to_string(),
        "region": Value::Object(region_obj),
        "equivalent": regions.equivalent,
        "vertices": vertices,
        "warnings": regions.warnings,
    })
}

fn text_point(p: &(Rational, Rational)) -> String {
    format!("({}, {})", p.0, p.1)
}

fn analysis_text(inv: &SurfaceInvariants, regions: &Regions) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "polynomial: {}", format(&inv.phi));
    let _ = writeln!(out, "case:       {}", inv.case);
    if let Some(w) = &inv.weight {
        let _ = writeln!(out, "weight:     kappa = ({}, {}), r = {}, s = {}, d_h = {}", w.kappa1, w.kappa2, w.r, w.s, w.d_h);
    }
    let _ = writeln!(
        out,
        "invariants: d_omega = {}, T = {}, nu = {}, A = {}, N = {}, J = {}",
        inv.d_omega, inv.t, inv.nu, inv.a, inv.n, inv.j
    );
    for (name, region) in [("factor", &regions.factor), ("newton", &regions.newton)] {
        if let Some(r) = region {
            let pts: Vec<String> = r.vertices.iter().map(text_point).collect();
            let _ = writeln!(out, "region ({name}): {}", pts.join(" "));
        }
    }
    if let Some(eq) = regions.equivalent {
        let _ = writeln!(out, "formulations agree: {eq}");
    }
    for v in regions.infos.iter().filter(|v| v.relevant) {
        let sub = v.subcase.map(|s| format!(" [{s}]")).unwrap_or_default();
        let _ = writeln!(out, "relevant vertex: {}{sub}", text_point(&v.point));
    }
    for w in &regions.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

fn cmd_analyze(a: &AnalyzeArgs) -> Result<(i32, String), CliError> {
    let inv = parse_input(&a.poly)?;
    let regions = build_regions(&inv, a.formulation)?;
    let out = if a.output.json || a.output.pretty {
        render(&analysis_report(&a.poly, &inv, &regions), a.output.pretty)
    } else {
        analysis_text(&inv, &regions)
    };
    Ok((EXIT_OK, out))
}

fn cmd_region(a: &RegionArgs) -> Result<(i32, String), CliError> {
    let inv = parse_input(&a.poly)?;
    let regions = build_regions(&inv, a.formulation)?;
    let region = match a.formulation {
        Formulation::Newton => regions.newton.as_ref().or(regions.factor.as_ref()),
        _ => regions.factor.as_ref(),
    }
    .ok_or_else(|| CliError::user("AdaptationRequired", "the Newton form needs an irrational shear"))?;
    let mut v = region_json(region, &regions.infos);
    let obj = v.as_object_mut().expect("object");
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("case".into(), json!(inv.case.to_string()));
    Ok((EXIT_OK, render(&v, a.pretty)))
}

fn scaling_report(inv: &SurfaceInvariants, a: &VerifyArgs) -> Result<VerificationReport, CliError> {
    let w = inv.weight.as_ref().ok_or_else(|| {
        CliError::user("InapplicableCondition", "the zero polynomial has no homogeneity weight")
    })?;
    if !(a.sigma.is_finite() && a.sigma > 0.0) {
        return Err(CliError::user("InvalidArgument", format!("sigma must be positive, got {}", a.sigma)));
    }
    if !(a.resolution.is_finite() && a.resolution > 0.0 && a.resolution <= 1.0) {
        return Err(CliError::user("InvalidArgument", format!("resolution must lie in (0, 1], got {}", a.resolution)));
    }
    let residual = scaling_identity_check(&inv.phi, w, a.sigma, &Box3::symmetric([2.0; 3]), &default_x_grid(), a.resolution);
    Ok(VerificationReport {
        condition: "scaling".into(),
        polynomial: format(&inv.phi),
        grid: vec![a.sigma],
        estimates: Vec::new(),
        slope: None,
        intercept: None,
        residual: Some(residual),
        predicted: Some(0.0),
        predicted_exact: Some("0".into()),
        tolerance: SCALING_TOLERANCE,
        verdict: if residual < SCALING_TOLERANCE { Verdict::Pass } else { Verdict::Fail },
        seed: a.seed,
        samples: 0,
        note: Some(format!("quadrature step {}", a.resolution)),
    })
}

fn measure_reports(inv: &SurfaceInvariants, a: &VerifyArgs) -> Result<Vec<VerificationReport>, CliError> {
    let m_grid: Vec<i32> = match &a.grid {
        None => measure::default_m_grid(),
        Some(g) => g
            .iter()
            .map(|&m| {
                if m.fract() == 0.0 && (0.0..=60.0).contains(&m) {
                    Ok(m as i32)
                } else {
                    Err(CliError::user("InvalidArgument", format!("dyadic levels must be integers in 0..=60, got {m}")))
                }
            })
            .collect::<Result<_, _>>()?,
    };
    if inv.case.is_excluded() {
        return Err(CliError::user("InapplicableCondition", format!("{} has no Hessian factorization", inv.case)));
    }
    match a.region {
        None => Ok(measure::measure_slope_tests(inv, &m_grid, a.samples, a.seed)?),
        Some(index) => {
            let regions = rsharp_core::decomposition::covering_for(inv).ok_or_else(|| {
                CliError::user("InapplicableCondition", format!("{} has no Hessian factorization", inv.case))
            })?;
            let spec = regions.iter().find(|r| r.index == index).ok_or_else(|| {
                let have: Vec<usize> = regions.iter().map(|r| r.index).collect();
                CliError::user("InapplicableCondition", format!("no region R_{index}; available: {have:?}"))
            })?;
            Ok(vec![measure::measure_slope_test(inv, spec, &regions, &m_grid, a.samples, a.seed)?])
        }
    }
}

fn cmd_verify(a: &VerifyArgs) -> Result<(i32, String), CliError> {
    let inv = parse_input(&a.poly)?;
    let reports = match a.condition.as_str() {
        "scaling" => vec![scaling_report(&inv, a)?],
        "measure" => measure_reports(&inv, a)?,
        id => {
            let cond: Condition = id.parse()?;
            if inv.case.is_excluded() {
                return Err(CliError::user("InapplicableCondition", format!("{} for {}", id, inv.case)));
            }
            let grid = a.grid.clone().unwrap_or_else(|| cond.default_grid());
            if grid.iter().any(|&p| !(p.is_finite() && p > 0.0)) {
                return Err(CliError::user("InvalidArgument", "grid parameters must be positive"));
            }
            vec![necessity_slope_test(&inv, cond, &grid, a.samples, a.seed)?]
        }
    };
    let failed = reports.iter().any(|r| r.verdict == Verdict::Fail);
    let body = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "input": a.poly,
        "condition": a.condition,
        "seed": a.seed,
        "samples": a.samples,
        "verdict": if failed { "FAIL" } else { "PASS" },
        "measure_tolerance": MEASURE_TOLERANCE,
        "reports": reports,
    });
    Ok((if failed { EXIT_FAIL } else { EXIT_OK }, render(&body, a.pretty)))
}

#[derive(Serialize)]
struct CorpusFailure {
    polynomial: String,
    error: String,
}

fn check_corpus_entry(phi: &rsharp_core::BivarPoly) -> Result<CaseLabel, String> {
    let inv = classify(phi).map_err(|e| e.to_string())?;
    lemma_consistency_suite(phi, &inv).ensure().map_err(|e| e.to_string())?;
    if !inv.case.is_excluded() {
        let regions = build_regions(&inv, Formulation::Both).map_err(|e| match e {
            CliError::User { message, .. } | CliError::Internal(message) => message,
        })?;
        if regions.equivalent == Some(false) {
            return Err("formulations disagree".into());
        }
    }
    Ok(inv.case)
}

fn cmd_corpus(a: &CorpusArgs) -> Result<(i32, String), CliError> {
    if a.max_degree < 2 || a.max_degree > DEFAULT_DEGREE_CAP {
        return Err(CliError::user(
            "InvalidArgument",
            format!("max-degree must lie in 2..={DEFAULT_DEGREE_CAP}, got {}", a.max_degree),
        ));
    }
    let polys = corpus::generate(a.count, a.seed, a.max_degree);
    let results: Vec<Result<CaseLabel, String>> = polys.par_iter().map(check_corpus_entry).collect();
    let mut cases: BTreeMap<String, usize> = BTreeMap::new();
    let mut failures = Vec::new();
    for (p, r) in polys.iter().zip(results) {
        match r {
            Ok(c) => *cases.entry(c.to_string()).or_default() += 1,
            Err(error) => failures.push(CorpusFailure { polynomial: format(p), error }),
        }
    }
    let body = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "corpus",
        "seed": a.seed,
        "count": a.count,
        "max_degree": a.max_degree,
        "passed": a.count - failures.len(),
        "failed": failures.len(),
        "cases": cases,
        "failures": failures,
    });
    Ok((if failures.is_empty() { EXIT_OK } else { EXIT_FAIL }, render(&body, a.pretty)))
}
