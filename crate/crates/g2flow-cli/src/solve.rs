//! Exact flow and coflow parameters for one catalog algebra, with optional
//! numeric coframe sampling at a rational `(m, t)`.

use serde::Serialize;

use g2flow::flow::{flow_to_coflow, solve_flow_parameters};
use g2flow::liealg::AlgebraSpec;
use g2flow::scalar::{rational_to_string, Rational};

use crate::verify::csv_field;

/// One solved branch: the flow `(alpha; beta)` or the coflow
/// `(gamma; delta)`, both with the maximal existence interval.
#[derive(Clone, Debug, Serialize)]
pub struct BranchOutput {
    /// Rate constant, `alpha` or `gamma`.
    pub rate: String,
    /// The seven coframe exponents.
    pub exponents: [String; 7],
    /// Existence interval in terms of `1/m^2`.
    pub interval: String,
}

/// Numeric coframe values `f_i(t) = u^{exponent}` at a rational `(m, t)`.
#[derive(Clone, Debug, Serialize)]
pub struct SampleOutput {
    /// The sampled bracket scale.
    pub m: String,
    /// The sampled time.
    pub t: String,
    /// Flow coframe values `f_1(t), ..., f_7(t)`.
    pub flow_coframe: [f64; 7],
    /// Coflow coframe values.
    pub coflow_coframe: [f64; 7],
}

/// Exact parameters of both branches for one algebra.
#[derive(Clone, Debug, Serialize)]
pub struct SolveOutput {
    /// Catalog algebra name.
    pub algebra: String,
    /// Flow branch `(alpha; beta_1..beta_7)`.
    pub flow: BranchOutput,
    /// Coflow branch `(gamma; delta_1..delta_7)`.
    pub coflow: BranchOutput,
    /// Numeric sampling block, present only when `t` was given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<SampleOutput>,
}

fn exponent_strings(values: &[Rational; 7]) -> [String; 7] {
    std::array::from_fn(|i| rational_to_string(&values[i]))
}

/// Solves both branches exactly; when `t` is given, also evaluates both
/// coframes numerically at `(m, t)`.
///
/// # Errors
/// A message when the algebra has no flow solution or `t` lies outside
/// either existence interval; callers map this to exit code 2.
pub fn solve(
    spec: &AlgebraSpec,
    m: &Rational,
    t: Option<&Rational>,
) -> Result<SolveOutput, String> {
    let sol = solve_flow_parameters(spec).map_err(|e| e.to_string())?;
    let co = flow_to_coflow(&sol).map_err(|e| e.to_string())?;
    let samples = match t {
        None => None,
        Some(t) => {
            if !sol.interval.contains(m, t) {
                return Err(format!(
                    "t = {} is outside the flow interval {}",
                    rational_to_string(t),
                    sol.interval
                ));
            }
            if !co.interval.contains(m, t) {
                return Err(format!(
                    "t = {} is outside the coflow interval {}",
                    rational_to_string(t),
                    co.interval
                ));
            }
            let flow_scaling = sol.scaling();
            let co_scaling = co.scaling();
            let eval = |s: &g2flow::liealg::FrameScaling, i: usize| {
                s.f(i as u8 + 1)
                    .eval(m, t)
                    .map_err(|e| format!("coframe evaluation: {e}"))
            };
            let mut flow_coframe = [0.0f64; 7];
            let mut coflow_coframe = [0.0f64; 7];
            for i in 0..7 {
                flow_coframe[i] = eval(&flow_scaling, i)?;
                coflow_coframe[i] = eval(&co_scaling, i)?;
            }
            Some(SampleOutput {
                m: rational_to_string(m),
                t: rational_to_string(t),
                flow_coframe,
                coflow_coframe,
            })
        }
    };
    Ok(SolveOutput {
        algebra: spec.name().to_string(),
        flow: BranchOutput {
            rate: rational_to_string(&sol.alpha),
            exponents: exponent_strings(&sol.beta),
            interval: sol.interval.to_string(),
        },
        coflow: BranchOutput {
            rate: rational_to_string(&co.gamma),
            exponents: exponent_strings(&co.delta),
            interval: co.interval.to_string(),
        },
        samples,
    })
}

impl SolveOutput {
    /// Human-readable listing of both branches.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("algebra {}\n", self.algebra));
        out.push_str(&format!(
            "flow:   alpha = {}\n        beta  = ({})\n        t in {}\n",
            self.flow.rate,
            self.flow.exponents.join(", "),
            self.flow.interval
        ));
        out.push_str(&format!(
            "coflow: gamma = {}\n        delta = ({})\n        t in {}\n",
            self.coflow.rate,
            self.coflow.exponents.join(", "),
            self.coflow.interval
        ));
        if let Some(samples) = &self.samples {
            out.push_str(&format!(
                "at m = {}, t = {}:\n        flow coframe   = {:?}\n        coflow coframe = {:?}\n",
                samples.m, samples.t, samples.flow_coframe, samples.coflow_coframe
            ));
        }
        out
    }

    /// JSON listing of both branches.
    ///
    /// # Panics
    /// Never: the output serializes infallibly.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("output serializes");
        text.push('\n');
        text
    }

    /// CSV listing with one row per branch.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("algebra,branch,rate,e1,e2,e3,e4,e5,e6,e7,interval\n");
        for (branch, data) in [("flow", &self.flow), ("coflow", &self.coflow)] {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                csv_field(&self.algebra),
                branch,
                csv_field(&data.rate),
                data.exponents
                    .iter()
                    .map(|e| csv_field(e))
                    .collect::<Vec<_>>()
                    .join(","),
                csv_field(&data.interval)
            ));
        }
        out
    }
}
