//! Verification suites over the algebra catalog.
//!
//! A plan is a list of (algebra, suite) pairs expanded from the `--algebra`
//! and `--what` selectors. Each pair runs as one check: all internal steps
//! must pass, and the first failing step becomes the check's witness. Checks
//! are independent, so the plan runs on a small thread pool; the report
//! preserves plan order regardless of scheduling.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::Serialize;

use g2flow::curvature::{
    coflow_ricci_ratio_check, flat_limit_check, ricci, riemann, LimitDirection,
};
use g2flow::exterior::{Form, MultiIndex};
use g2flow::flow::{
    coflow_residual, coflow_to_flow, correspondence_identity_holds, flow_residual,
    flow_to_coflow, heisenberg_coflow_example, lemma13_checks, nilpotent_flow_example,
    solve_flow_parameters, soliton_check, SolitonType, TimeInterval,
};
use g2flow::g2ops::{classify_torsion, lcp_conditions, G2Structure, TorsionClass};
use g2flow::liealg::{find_algebra, AlgebraSpec, ScaledAlgebra};
use g2flow::scalar::{rat, rat_int, rational_to_string, Rational, RingContext, Scalar};

/// One verification suite: a named bundle of exact checks for one algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Solve the flow parameters and check the flow residual vanishes.
    Flow,
    /// Map the flow solution to the coflow, check residual, identity and
    /// round trip.
    Coflow,
    /// Torsion classification and derived pair-relation conditions.
    Lcp,
    /// Soliton certificate with a shrinking constant.
    Soliton,
    /// Riemann/Ricci structure, flat limits and the coflow Ricci ratio.
    Curvature,
    /// Coefficient-ratio closure properties along the flow solution.
    Lemma,
    /// Warm-up fixtures: exact nilpotent flow and numeric coflow.
    Examples,
}

impl Suite {
    /// Every suite, in report order.
    pub const ALL: [Suite; 7] = [
        Suite::Flow,
        Suite::Coflow,
        Suite::Lcp,
        Suite::Soliton,
        Suite::Curvature,
        Suite::Lemma,
        Suite::Examples,
    ];

    /// Stable lowercase name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            Suite::Flow => "flow",
            Suite::Coflow => "coflow",
            Suite::Lcp => "lcp",
            Suite::Soliton => "soliton",
            Suite::Curvature => "curvature",
            Suite::Lemma => "lemma",
            Suite::Examples => "examples",
        }
    }

    /// Whether this suite is defined for the given catalog algebra.
    pub fn applies_to(self, spec: &AlgebraSpec) -> bool {
        match self {
            Suite::Flow | Suite::Coflow | Suite::Lcp | Suite::Soliton | Suite::Lemma => {
                spec.cp_index().is_some()
            }
            Suite::Curvature => spec.cp_index().is_some() || spec.name() == "abelian",
            Suite::Examples => matches!(spec.name(), "n2" | "h7"),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

/// Pass/fail status of one check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Pass => f.write_str("pass"),
            CheckStatus::Fail => f.write_str("FAIL"),
        }
    }
}

/// Result of one (algebra, suite) check. On failure the witness holds the
/// full offending form or scalar; on success it summarizes the certified
/// data (solved parameters, soliton constant, component counts).
#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    /// Suite name.
    pub id: String,
    /// Catalog algebra name.
    pub algebra: String,
    /// Pass or fail.
    pub status: CheckStatus,
    /// Certificate summary (pass) or the offending object (fail).
    pub witness: String,
    /// Wall-clock runtime of the check.
    pub runtime_ms: u128,
}

/// Ordered list of check outcomes for one `verify` invocation.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    /// One entry per (algebra, suite) pair, in plan order.
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    /// Whether every check passed.
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    /// Human-readable report: one aligned line per check plus a summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for check in &self.checks {
            out.push_str(&format!(
                "{} {:<9} {:<8} {:>4} ms  {}\n",
                check.status, check.id, check.algebra, check.runtime_ms, check.witness
            ));
        }
        let passed = self.checks.iter().filter(|c| c.status == CheckStatus::Pass).count();
        let failed = self.checks.len() - passed;
        out.push_str(&format!("{} checks: {passed} passed, {failed} failed\n", self.checks.len()));
        out
    }

    /// JSON report with the full check list.
    ///
    /// # Panics
    /// Never: the report serializes infallibly.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// CSV report with one row per check.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,algebra,status,witness,runtime_ms\n");
        for check in &self.checks {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                csv_field(&check.id),
                csv_field(&check.algebra),
                check.status,
                csv_field(&check.witness),
                check.runtime_ms
            ));
        }
        out
    }
}

/// Quotes a CSV field when it contains separators or quotes.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Expands `--algebra` and `--what` selectors into an ordered plan.
///
/// `"all"` selects every algebra (sorted by name) or every suite; explicit
/// selections must name a catalog algebra and a known suite. Suites are
/// silently skipped for algebras they do not apply to, but a selection that
/// matches nothing at all is an error.
///
/// # Errors
/// A message naming the unknown algebra, unknown suite, or empty selection;
/// callers map this to exit code 2.
pub fn expand_plan<'a>(
    catalog: &'a [AlgebraSpec],
    algebra: &str,
    what: &str,
) -> Result<Vec<(&'a AlgebraSpec, Suite)>, String> {
    let suites: Vec<Suite> = if what == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![what.parse()?]
    };
    let specs: Vec<&AlgebraSpec> = if algebra == "all" {
        let mut all: Vec<&AlgebraSpec> = catalog.iter().collect();
        all.sort_by(|a, b| a.name().cmp(b.name()));
        all
    } else {
        vec![find_algebra(catalog, algebra).map_err(|e| e.to_string())?]
    };
    let mut plan = Vec::new();
    for spec in specs {
        for &suite in &suites {
            if suite.applies_to(spec) {
                plan.push((spec, suite));
            }
        }
    }
    if plan.is_empty() {
        return Err(format!("suite '{what}' does not apply to algebra '{algebra}'"));
    }
    Ok(plan)
}

/// Runs one suite on one algebra and times it.
pub fn run_suite(spec: &AlgebraSpec, suite: Suite, t_sample: Option<&Rational>) -> CheckOutcome {
    let started = Instant::now();
    let result = match suite {
        Suite::Flow => suite_flow(spec),
        Suite::Coflow => suite_coflow(spec),
        Suite::Lcp => suite_lcp(spec),
        Suite::Soliton => suite_soliton(spec),
        Suite::Curvature => suite_curvature(spec),
        Suite::Lemma => suite_lemma(spec),
        Suite::Examples => suite_examples(spec, t_sample),
    };
    let runtime_ms = started.elapsed().as_millis();
    let (status, witness) = match result {
        Ok(witness) => (CheckStatus::Pass, witness),
        Err(witness) => (CheckStatus::Fail, witness),
    };
    CheckOutcome {
        id: suite.name().to_string(),
        algebra: spec.name().to_string(),
        status,
        witness,
        runtime_ms,
    }
}

/// Runs a plan on a thread pool, preserving plan order in the report.
///
/// # Panics
/// Only if a worker thread panics, which would indicate a bug in a suite.
pub fn run_plan(plan: &[(&AlgebraSpec, Suite)], t_sample: Option<&Rational>) -> VerifyReport {
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(4)
        .min(plan.len().max(1));
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<CheckOutcome>>> = Mutex::new(vec![None; plan.len()]);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= plan.len() {
                    break;
                }
                let (spec, suite) = plan[idx];
                let outcome = run_suite(spec, suite, t_sample);
                results.lock().expect("results lock")[idx] = Some(outcome);
            });
        }
    });
    let checks = results
        .into_inner()
        .expect("results lock")
        .into_iter()
        .map(|slot| slot.expect("every plan slot filled"))
        .collect();
    VerifyReport { checks }
}

/// Formats seven exponents as a parenthesized tuple.
fn exponent_tuple(values: &[Rational; 7]) -> String {
    let parts: Vec<String> = values.iter().map(rational_to_string).collect();
    format!("({})", parts.join(", "))
}

fn suite_flow(spec: &AlgebraSpec) -> Result<String, String> {
    let sol = solve_flow_parameters(spec).map_err(|e| e.to_string())?;
    let residual = flow_residual(spec, &sol).map_err(|e| e.to_string())?;
    if !residual.is_zero() {
        return Err(format!(
            "nonzero flow residual dphi/dt - Lap(phi) = {}",
            residual.display_with("x")
        ));
    }
    Ok(format!(
        "alpha = {}, beta = {}, t in {}",
        rational_to_string(&sol.alpha),
        exponent_tuple(&sol.beta),
        sol.interval
    ))
}

fn suite_coflow(spec: &AlgebraSpec) -> Result<String, String> {
    let sol = solve_flow_parameters(spec).map_err(|e| e.to_string())?;
    let co = flow_to_coflow(&sol).map_err(|e| e.to_string())?;
    let residual = coflow_residual(spec, &co).map_err(|e| e.to_string())?;
    if !residual.is_zero() {
        return Err(format!(
            "nonzero coflow residual dpsi/dt + Lap(psi) = {}",
            residual.display_with("x")
        ));
    }
    if !correspondence_identity_holds(&sol, &co) {
        return Err("complementary-index identity fails between flow and coflow".to_string());
    }
    let back = coflow_to_flow(&co).map_err(|e| e.to_string())?;
    if back != sol {
        return Err(format!(
            "round trip returned alpha = {}, beta = {}",
            rational_to_string(&back.alpha),
            exponent_tuple(&back.beta)
        ));
    }
    Ok(format!(
        "gamma = {}, delta = {}, t in {}",
        rational_to_string(&co.gamma),
        exponent_tuple(&co.delta),
        co.interval
    ))
}

/// Checks that the structure is LCP with Lee form `coeff · x^7`.
fn expect_lee_form(
    structure: &G2Structure,
    coeff: &Scalar,
    stage: &str,
) -> Result<(), String> {
    let torsion = classify_torsion(structure).map_err(|e| e.to_string())?;
    match torsion {
        TorsionClass::Lcp { ref tau } => {
            let mut expected: Form<Scalar> = Form::zero(1);
            expected.accumulate(MultiIndex::new(&[7]).expect("valid index"), coeff.clone());
            if tau == &expected {
                Ok(())
            } else {
                Err(format!(
                    "{stage}: lee form {} differs from expected {}",
                    tau.display_with("x"),
                    expected.display_with("x")
                ))
            }
        }
        other => Err(format!("{stage}: torsion class {other}, expected lcp")),
    }
}

fn suite_lcp(spec: &AlgebraSpec) -> Result<String, String> {
    // At unit scaling the Lee form is m x^7 with a constant coefficient.
    let unit_ctx = RingContext::constant();
    let unit = G2Structure::canonical(ScaledAlgebra::unit(spec.clone(), unit_ctx.clone()));
    expect_lee_form(&unit, &Scalar::term(&unit_ctx, rat_int(1), 1, rat_int(0)), "unit scaling")?;
    // Along both solutions the Lee form is m u^{-1/2} x^7 for all time.
    let sol = solve_flow_parameters(spec).map_err(|e| e.to_string())?;
    let flow_scaling = sol.scaling();
    let flow_ctx = flow_scaling.context().clone();
    let on_flow = G2Structure::canonical(ScaledAlgebra::new(spec.clone(), flow_scaling));
    expect_lee_form(
        &on_flow,
        &Scalar::term(&flow_ctx, rat_int(1), 1, rat(-1, 2)),
        "flow scaling",
    )?;
    let co = flow_to_coflow(&sol).map_err(|e| e.to_string())?;
    let co_scaling = co.scaling();
    let co_ctx = co_scaling.context().clone();
    let on_coflow = G2Structure::canonical(ScaledAlgebra::new(spec.clone(), co_scaling));
    expect_lee_form(
        &on_coflow,
        &Scalar::term(&co_ctx, rat_int(1), 1, rat(-1, 2)),
        "coflow scaling",
    )?;
    // The derived pair relations must hold for both exponent vectors.
    let classes = lcp_conditions(spec).map_err(|e| e.to_string())?;
    for class in &classes {
        if !class.holds_for_exponents(&sol.beta) {
            return Err(format!("flow exponents violate {class}"));
        }
        if !class.holds_for_exponents(&co.delta) {
            return Err(format!("coflow exponents violate {class}"));
        }
    }
    Ok(format!(
        "lee form m x^7 at unit scaling and along both solutions; {} relation classes hold",
        classes.len()
    ))
}

fn suite_soliton(spec: &AlgebraSpec) -> Result<String, String> {
    let cert = soliton_check(spec).map_err(|e| e.to_string())?;
    if cert.soliton_type != SolitonType::Shrinking {
        return Err(format!(
            "soliton constant {} * m^2/f_7^2 is {}, expected shrinking",
            rational_to_string(&cert.lambda_ratio),
            cert.soliton_type
        ));
    }
    Ok(format!(
        "lambda = {} * m^2/f_7^2 ({}); X = ({}) x_7",
        rational_to_string(&cert.lambda_ratio),
        cert.soliton_type,
        cert.vector_coefficient
    ))
}

fn suite_curvature(spec: &AlgebraSpec) -> Result<String, String> {
    if spec.cp_index().is_none() {
        // The abelian algebra is flat at unit scaling.
        let ctx = RingContext::constant();
        let alg = ScaledAlgebra::unit(spec.clone(), ctx.clone());
        let tensor = riemann(&alg).map_err(|e| e.to_string())?;
        if let Some((key, value)) = tensor.nonzero_entries().next() {
            return Err(format!("expected a flat metric, found R_{key:?} = {value}"));
        }
        let data = ricci(&alg).map_err(|e| e.to_string())?;
        if data.einstein_constant != Some(Scalar::zero(&ctx)) {
            return Err("expected einstein constant 0".to_string());
        }
        if !flat_limit_check(&tensor, LimitDirection::MinusInfinity)
            || !flat_limit_check(&tensor, LimitDirection::PlusInfinity)
        {
            return Err("zero tensor must be flat in both limits".to_string());
        }
        return Ok("zero curvature tensor; einstein constant 0".to_string());
    }
    let sol = solve_flow_parameters(spec).map_err(|e| e.to_string())?;
    let alg = ScaledAlgebra::new(spec.clone(), sol.scaling());
    let tensor = riemann(&alg).map_err(|e| e.to_string())?;
    // First Bianchi identity on the assembled tensor.
    for i in 1..=7u8 {
        for j in (i + 1)..=7u8 {
            for k in 1..=7u8 {
                for l in 1..=7u8 {
                    let sum = tensor
                        .get(i, j, k, l)
                        .add(&tensor.get(j, k, i, l))
                        .add(&tensor.get(k, i, j, l));
                    if !sum.is_zero() {
                        return Err(format!("bianchi sum at ({i},{j},{k},{l}) = {sum}"));
                    }
                }
            }
        }
    }
    // The Ricci tensor is diagonal in the adapted coframe.
    let data = ricci(&alg).map_err(|e| e.to_string())?;
    for i in 0..7 {
        for j in 0..7 {
            if i != j && !data.ric[i][j].is_zero() {
                return Err(format!(
                    "off-diagonal ricci entry Ric_{}{} = {}",
                    i + 1,
                    j + 1,
                    data.ric[i][j]
                ));
            }
        }
    }
    // Flow metrics flatten only toward the infinite past.
    if !flat_limit_check(&tensor, LimitDirection::MinusInfinity) {
        return Err("curvature does not vanish as t -> -oo".to_string());
    }
    if flat_limit_check(&tensor, LimitDirection::PlusInfinity) {
        return Err("curvature unexpectedly vanishes as t -> +oo".to_string());
    }
    // Coflow comparison: the Ricci tensors differ by one rational function.
    match coflow_ricci_ratio_check(spec) {
        Ok(true) => {}
        Ok(false) => {
            return Err("coflow ricci is not the predicted rational multiple of the flow ricci"
                .to_string())
        }
        Err(e) => return Err(e.to_string()),
    }
    let components = tensor.nonzero_entries().count();
    Ok(format!(
        "{components} canonical components; bianchi holds; ricci diagonal; flat limit t -> -oo; coflow ratio exact"
    ))
}

fn suite_lemma(spec: &AlgebraSpec) -> Result<String, String> {
    let sol = solve_flow_parameters(spec).map_err(|e| e.to_string())?;
    let report = lemma13_checks(spec, &sol).map_err(|e| e.to_string())?;
    if let Some(failed) = report.entries.iter().find(|e| !e.pass) {
        return Err(format!(
            "part {} at ({}, {}): {}",
            failed.part, failed.lhs, failed.rhs, failed.detail
        ));
    }
    Ok(format!(
        "{} coefficient-ratio implications hold",
        report.entries.len()
    ))
}

fn suite_examples(spec: &AlgebraSpec, t_sample: Option<&Rational>) -> Result<String, String> {
    match spec.name() {
        "n2" => {
            let report = nilpotent_flow_example(spec).map_err(|e| e.to_string())?;
            if !report.pass {
                return Err(format!(
                    "closed = {}, exact flow equation = {}, laplacian matches = {}, torsion = {}",
                    report.closed,
                    report.flow_equation_exact,
                    report.laplacian_matches_expected,
                    report.torsion
                ));
            }
            Ok(format!(
                "exact: dphi = 0 and dphi/dt = Lap(phi) for all time; torsion {}",
                report.torsion
            ))
        }
        "h7" => {
            // Existence interval of the fixture's base 1 - (5/3) t.
            let interval = TimeInterval::from_kappa(&rat(-5, 3));
            let one = rat_int(1);
            let mut times = interval.sample_times(&one, 5);
            if let Some(t) = t_sample {
                if !interval.contains(&one, t) {
                    return Err(format!(
                        "sample time {} lies outside the existence interval {}",
                        rational_to_string(t),
                        interval
                    ));
                }
                times.push(t.clone());
            }
            let report = heisenberg_coflow_example(spec, &times).map_err(|e| e.to_string())?;
            if !report.pass {
                return Err(format!(
                    "max coflow residual {:e} over {} samples exceeds 1e-9",
                    report.max_residual,
                    report.residuals.len()
                ));
            }
            Ok(format!(
                "numeric: max coflow residual {:.3e} over {} samples",
                report.max_residual,
                report.residuals.len()
            ))
        }
        other => Err(format!("no example fixture for algebra '{other}'")),
    }
}
