//! Golden data tables regenerated from the engine.
//!
//! Six files are produced, all computed from the catalog at report time and
//! serialized with canonical sorting so that identical inputs give
//! byte-identical bytes: the catalog echo, the flow parameters, the Ricci
//! diagonal profiles, the full curvature tables, the soliton constants and
//! the coflow parameters.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_traits::Signed;
use serde::Serialize;

use g2flow::curvature::{ricci, riemann};
use g2flow::flow::{flow_to_coflow, solve_flow_parameters, soliton_check};
use g2flow::liealg::{AlgebraSpec, ScaledAlgebra};
use g2flow::scalar::{rat_int, rational_to_string, Rational, Scalar};

use crate::verify::csv_field;

/// A generated golden file: fixed name plus full contents.
#[derive(Clone, Debug)]
pub struct GoldenFile {
    /// File name inside the output directory.
    pub name: &'static str,
    /// Complete file contents.
    pub contents: String,
}

/// Failure while producing or writing golden files.
#[derive(Debug)]
pub enum ReportError {
    /// The engine failed to produce a table (indicates a data bug).
    Generate(String),
    /// Writing a file failed.
    Io(std::io::Error),
}

impl std::fmt::Display for ReportError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReportError::Generate(msg) => write!(f, "table generation: {msg}"),
            ReportError::Io(e) => write!(f, "io: {e}"),
        }
    }
}

/// Serializes rows as a pretty JSON array with a trailing newline.
fn json_file<T: Serialize>(rows: &[T]) -> String {
    let mut text = serde_json::to_string_pretty(rows).expect("rows serialize");
    text.push('\n');
    text
}

/// Catalog algebras of the solvable family, sorted by family index.
fn cp_family(catalog: &[AlgebraSpec]) -> Vec<&AlgebraSpec> {
    let mut family: Vec<&AlgebraSpec> =
        catalog.iter().filter(|s| s.cp_index().is_some()).collect();
    family.sort_by_key(|s| s.cp_index());
    family
}

#[derive(Serialize)]
struct CatalogRow {
    name: String,
    eta_over_m: [String; 6],
    c_over_m: [String; 6],
    extra: Vec<ExtraTermRow>,
    numeric_only: bool,
}

#[derive(Serialize)]
struct ExtraTermRow {
    target: u8,
    i: u8,
    j: u8,
    value: String,
    m_power: u8,
}

/// Catalog echo, sorted by algebra name.
fn catalog_table(catalog: &[AlgebraSpec]) -> String {
    let mut sorted: Vec<&AlgebraSpec> = catalog.iter().collect();
    sorted.sort_by(|a, b| a.name().cmp(b.name()));
    let rows: Vec<CatalogRow> = sorted
        .iter()
        .map(|spec| CatalogRow {
            name: spec.name().to_string(),
            eta_over_m: std::array::from_fn(|i| rational_to_string(&spec.eta()[i])),
            c_over_m: std::array::from_fn(|i| rational_to_string(&spec.c6()[i])),
            extra: spec
                .extra()
                .iter()
                .map(|term| ExtraTermRow {
                    target: term.target,
                    i: term.i,
                    j: term.j,
                    value: match term.value.exact() {
                        Some(r) => rational_to_string(r),
                        None => format!("{}", term.value.to_f64()),
                    },
                    m_power: term.m_pow,
                })
                .collect(),
            numeric_only: spec.is_numeric_only(),
        })
        .collect();
    json_file(&rows)
}

#[derive(Serialize)]
struct FlowRow {
    algebra: String,
    alpha: String,
    beta: [String; 7],
    interval: String,
}

/// Flow parameters for the solvable family, in family order.
fn flow_table(catalog: &[AlgebraSpec]) -> Result<String, String> {
    let mut rows = Vec::new();
    for spec in cp_family(catalog) {
        let sol = solve_flow_parameters(spec).map_err(|e| e.to_string())?;
        rows.push(FlowRow {
            algebra: spec.name().to_string(),
            alpha: rational_to_string(&sol.alpha),
            beta: std::array::from_fn(|i| rational_to_string(&sol.beta[i])),
            interval: sol.interval.to_string(),
        });
    }
    Ok(json_file(&rows))
}

#[derive(Serialize)]
struct CoflowRow {
    algebra: String,
    gamma: String,
    delta: [String; 7],
    interval: String,
}

/// Coflow parameters for the solvable family, in family order.
fn coflow_table(catalog: &[AlgebraSpec]) -> Result<String, String> {
    let mut rows = Vec::new();
    for spec in cp_family(catalog) {
        let sol = solve_flow_parameters(spec).map_err(|e| e.to_string())?;
        let co = flow_to_coflow(&sol).map_err(|e| e.to_string())?;
        rows.push(CoflowRow {
            algebra: spec.name().to_string(),
            gamma: rational_to_string(&co.gamma),
            delta: std::array::from_fn(|i| rational_to_string(&co.delta[i])),
            interval: co.interval.to_string(),
        });
    }
    Ok(json_file(&rows))
}

/// Greatest common divisor of two nonnegative rationals.
fn rational_gcd(a: &Rational, b: &Rational) -> Rational {
    use num_integer::Integer;
    let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    Rational::new(num, a.denom() * b.denom())
}

/// Ricci profile of a flow solution: the negative rational `c` such that
/// `Ric_ii = c n_i m^2 u^{-1}` with coprime positive integers `n_i`, plus
/// the seven `n_i`.
fn ricci_profile(spec: &AlgebraSpec) -> Result<(Rational, [Rational; 7]), String> {
    let sol = solve_flow_parameters(spec).map_err(|e| e.to_string())?;
    let alg = ScaledAlgebra::new(spec.clone(), sol.scaling());
    let ctx = alg.context().clone();
    let data = ricci(&alg).map_err(|e| e.to_string())?;
    let unit = Scalar::term(&ctx, rat_int(1), 2, rat_int(-1));
    let mut ratios = Vec::with_capacity(7);
    for i in 0..7 {
        let ratio = data.ric[i][i]
            .div_exact(&unit)
            .and_then(|s| s.as_rational())
            .ok_or_else(|| {
                format!("Ric_{}{} = {} is not a multiple of m^2 u^-1", i + 1, i + 1, data.ric[i][i])
            })?;
        ratios.push(ratio);
    }
    let content = ratios
        .iter()
        .map(|r| r.abs())
        .reduce(|a, b| rational_gcd(&a, &b))
        .expect("seven ratios");
    let c = -content;
    let diagonal = std::array::from_fn(|i| &ratios[i] / &c);
    Ok((c, diagonal))
}

#[derive(Serialize)]
struct RicciRow {
    algebra: String,
    c: String,
    diagonal_over_c: [String; 7],
}

/// Ricci diagonal profiles for the solvable family, in family order.
fn ricci_table(catalog: &[AlgebraSpec]) -> Result<String, String> {
    let mut rows = Vec::new();
    for spec in cp_family(catalog) {
        let (c, diagonal) = ricci_profile(spec)?;
        rows.push(RicciRow {
            algebra: spec.name().to_string(),
            c: rational_to_string(&c),
            diagonal_over_c: std::array::from_fn(|i| rational_to_string(&diagonal[i])),
        });
    }
    Ok(json_file(&rows))
}

/// Full curvature tables as CSV, one row per canonical nonzero component,
/// expressed as a rational multiple of `C = c m^2 u^{-1}` with `c` the
/// algebra's Ricci content.
fn curvature_csv(catalog: &[AlgebraSpec]) -> Result<String, String> {
    let mut out = String::from("algebra,i,j,k,l,coeff_over_C,which_C\n");
    for spec in cp_family(catalog) {
        let (c, _) = ricci_profile(spec)?;
        let sol = solve_flow_parameters(spec).map_err(|e| e.to_string())?;
        let alg = ScaledAlgebra::new(spec.clone(), sol.scaling());
        let ctx = alg.context().clone();
        let tensor = riemann(&alg).map_err(|e| e.to_string())?;
        let unit = Scalar::term(&ctx, c.clone(), 2, rat_int(-1));
        let entries: BTreeMap<(u8, u8, u8, u8), Rational> = tensor
            .nonzero_entries()
            .map(|(key, value)| {
                let ratio = value
                    .div_exact(&unit)
                    .and_then(|s| s.as_rational())
                    .ok_or_else(|| format!("R_{key:?} = {value} is not a multiple of C"))?;
                Ok((*key, ratio))
            })
            .collect::<Result<_, String>>()?;
        let c_str = rational_to_string(&c);
        for ((i, j, k, l), ratio) in entries {
            out.push_str(&format!(
                "{},{i},{j},{k},{l},{},{}\n",
                csv_field(spec.name()),
                csv_field(&rational_to_string(&ratio)),
                csv_field(&c_str)
            ));
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct SolitonRow {
    algebra: String,
    lambda_times_f7sq_over_m2: String,
    soliton_type: String,
}

/// Soliton constants for the solvable family, in family order.
fn soliton_table(catalog: &[AlgebraSpec]) -> Result<String, String> {
    let mut rows = Vec::new();
    for spec in cp_family(catalog) {
        let cert = soliton_check(spec).map_err(|e| e.to_string())?;
        rows.push(SolitonRow {
            algebra: spec.name().to_string(),
            lambda_times_f7sq_over_m2: rational_to_string(&cert.lambda_ratio),
            soliton_type: cert.soliton_type.to_string(),
        });
    }
    Ok(json_file(&rows))
}

/// Generates all six golden files in a fixed order.
///
/// # Errors
/// [`ReportError::Generate`] when the engine cannot produce a table.
pub fn generate_all(catalog: &[AlgebraSpec]) -> Result<Vec<GoldenFile>, ReportError> {
    let build = |name, contents: Result<String, String>| {
        contents
            .map(|contents| GoldenFile { name, contents })
            .map_err(ReportError::Generate)
    };
    Ok(vec![
        GoldenFile { name: "table2.json", contents: catalog_table(catalog) },
        build("table3.json", flow_table(catalog))?,
        build("ricci_diagonals.json", ricci_table(catalog))?,
        build("curvature_tables.csv", curvature_csv(catalog))?,
        build("soliton_constants.json", soliton_table(catalog))?,
        build("coflow_solutions.json", coflow_table(catalog))?,
    ])
}

/// Generates and writes all golden files into `dir`, creating it if needed.
///
/// # Errors
/// [`ReportError::Generate`] on table-generation failure,
/// [`ReportError::Io`] when the directory or a file cannot be written.
pub fn write_all(catalog: &[AlgebraSpec], dir: &Path) -> Result<Vec<PathBuf>, ReportError> {
    let files = generate_all(catalog)?;
    std::fs::create_dir_all(dir).map_err(ReportError::Io)?;
    let mut written = Vec::new();
    for file in files {
        let path = dir.join(file.name);
        std::fs::write(&path, file.contents).map_err(ReportError::Io)?;
        written.push(path);
    }
    Ok(written)
}
