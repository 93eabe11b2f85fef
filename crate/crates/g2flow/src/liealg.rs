//! Catalog of solvable Lie algebras, frame scalings and the
//! Chevalley-Eilenberg exterior differential.
//!
//! Every algebra is a rank-one solvable extension of a six-dimensional
//! nilpotent algebra: in the fixed coframe `e^1, ..., e^7` the structure
//! equations read `de^k = η_k e^{k7} + Σ c^k_{ij} e^{ij}` for `k ≤ 6` and
//! `de^7 = 0` (plus optional extra terms for the warm-up fixtures). The
//! catalog stores `η_k/m` and `c^k_{ij}/m`, so one free parameter `m > 0`
//! scales the whole bracket.
//!
//! A [`FrameScaling`] attaches time-dependent factors `f_i = u^{β_i}` to
//! the coframe; the orthonormal coframe of the evolving metric is
//! `x^i = f_i e^i`, and all geometric operators are computed in the
//! `x`-basis, where structure constants pick up factors `f_k/(f_i f_j)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Deserialize;
use thiserror::Error;

use crate::exterior::{Coefficient, Form, MultiIndex, DIM};
use crate::scalar::{parse_rational, rational_to_f64, Rational, RingContext, Scalar, ScalarError};

/// Errors produced by catalog loading and differential operators.
#[derive(Debug, Error)]
pub enum LieAlgError {
    /// The catalog file failed to parse.
    #[error("catalog parse error: {0}")]
    Parse(String),
    /// A catalog record is structurally invalid.
    #[error("invalid catalog record {name:?}: {reason}")]
    InvalidRecord { name: String, reason: String },
    /// The Jacobi identity (d² = 0) fails for a catalog record.
    #[error("algebra {name:?} violates d^2 = 0 on one-forms")]
    JacobiViolation { name: String },
    /// An exact operation was requested on an algebra with floating-point
    /// structure constants.
    #[error("algebra {0:?} has floating-point structure constants; use the numeric interface")]
    NumericOnly(String),
    /// A numeric evaluation failed.
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    /// The algebra name is not in the catalog.
    #[error("unknown algebra {0:?}")]
    UnknownAlgebra(String),
}

/// A structure constant value: exact rational or floating point.
#[derive(Clone, Debug, PartialEq)]
pub enum StructureValue {
    /// Exact rational constant.
    Exact(Rational),
    /// Floating-point constant (fixtures with irrational brackets).
    Numeric(f64),
}

impl StructureValue {
    /// The exact value, if this constant is rational.
    pub fn exact(&self) -> Option<&Rational> {
        match self {
            StructureValue::Exact(r) => Some(r),
            StructureValue::Numeric(_) => None,
        }
    }

    /// The value as floating point.
    pub fn to_f64(&self) -> f64 {
        match self {
            StructureValue::Exact(r) => rational_to_f64(r),
            StructureValue::Numeric(x) => *x,
        }
    }
}

/// One term of a structure equation: `de^{target} += value · m^{m_pow} e^{ij}`.
#[derive(Clone, Debug)]
pub struct StructureTerm {
    /// Index `k` of the coframe element being differentiated.
    pub target: u8,
    /// First wedge index (`i < j`).
    pub i: u8,
    /// Second wedge index.
    pub j: u8,
    /// Constant in front of `m^{m_pow} e^{ij}`.
    pub value: StructureValue,
    /// Power of the bracket-scale parameter `m` (0 or 1).
    pub m_pow: u8,
}

/// Order of the six tabulated nilpotent structure constants:
/// `c^1_36, c^1_45, c^2_35, c^2_46, c^4_26, c^5_23`.
pub const C6_SLOTS: [(u8, u8, u8); 6] =
    [(1, 3, 6), (1, 4, 5), (2, 3, 5), (2, 4, 6), (4, 2, 6), (5, 2, 3)];

/// A catalog Lie algebra: diagonal derivation data plus nilpotent bracket.
#[derive(Clone, Debug)]
pub struct AlgebraSpec {
    name: String,
    eta: [Rational; 6],
    c6: [Rational; 6],
    extra: Vec<StructureTerm>,
}

impl AlgebraSpec {
    /// The catalog name.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Derivation eigenvalues `η_k/m` for `k = 1..6`.
    pub fn eta(&self) -> &[Rational; 6] {
        &self.eta
    }

    /// The six tabulated nilpotent constants `c^k_{ij}/m` in the order of
    /// [`C6_SLOTS`].
    pub fn c6(&self) -> &[Rational; 6] {
        &self.c6
    }

    /// Additional structure terms outside the tabulated pattern.
    pub fn extra(&self) -> &[StructureTerm] {
        &self.extra
    }

    /// Whether any structure constant is floating point.
    pub fn is_numeric_only(&self) -> bool {
        self.extra.iter().any(|t| matches!(t.value, StructureValue::Numeric(_)))
    }

    /// For names of the form `cpN` with `N` in `1..=7`, the family index.
    pub fn cp_index(&self) -> Option<usize> {
        let n: usize = self.name.strip_prefix("cp")?.parse().ok()?;
        (1..=7).contains(&n).then_some(n)
    }

    /// All structure terms, including the derivation part `η_k e^{k7}`.
    pub fn structure_terms(&self) -> Vec<StructureTerm> {
        let mut terms = Vec::new();
        for k in 1..=6u8 {
            let v = &self.eta[k as usize - 1];
            if !v.is_zero() {
                terms.push(StructureTerm {
                    target: k,
                    i: k,
                    j: 7,
                    value: StructureValue::Exact(v.clone()),
                    m_pow: 1,
                });
            }
        }
        for (slot, (k, i, j)) in C6_SLOTS.iter().enumerate() {
            let v = &self.c6[slot];
            if !v.is_zero() {
                terms.push(StructureTerm {
                    target: *k,
                    i: *i,
                    j: *j,
                    value: StructureValue::Exact(v.clone()),
                    m_pow: 1,
                });
            }
        }
        terms.extend(self.extra.iter().cloned());
        terms
    }

    /// All structure terms with exact rational values.
    ///
    /// # Errors
    /// Returns [`LieAlgError::NumericOnly`] when the algebra has floating
    /// point constants.
    pub fn exact_structure_terms(&self) -> Result<Vec<(u8, u8, u8, Rational, u8)>, LieAlgError> {
        self.structure_terms()
            .into_iter()
            .map(|t| match t.value {
                StructureValue::Exact(r) => Ok((t.target, t.i, t.j, r, t.m_pow)),
                StructureValue::Numeric(_) => Err(LieAlgError::NumericOnly(self.name.clone())),
            })
            .collect()
    }
}

/// Diagonal time-dependent coframe scaling `x^i = f_i e^i` with
/// `f_i = u^{β_i}` in a fixed [`RingContext`].
#[derive(Clone, Debug, PartialEq)]
pub struct FrameScaling {
    exponents: [Rational; 7],
    context: RingContext,
}

impl FrameScaling {
    /// The unit scaling `f_i ≡ 1`.
    pub fn unit(context: RingContext) -> Self {
        FrameScaling { exponents: std::array::from_fn(|_| Rational::zero()), context }
    }

    /// Scaling with the given exponents in the given context.
    pub fn new(context: RingContext, exponents: [Rational; 7]) -> Self {
        FrameScaling { exponents, context }
    }

    /// Power-law scaling `f_i = u^{β_i}` with base `u = 1 − rate · m² t`
    /// (m-graded ring context with κ = −rate).
    pub fn power_law(rate: &Rational, exponents: [Rational; 7]) -> Self {
        FrameScaling { exponents, context: RingContext::graded(-rate.clone()) }
    }

    /// The exponent vector `β`.
    pub fn exponents(&self) -> &[Rational; 7] {
        &self.exponents
    }

    /// The ring context of the scaling functions.
    pub fn context(&self) -> &RingContext {
        &self.context
    }

    /// The scaling function `f_i = u^{β_i}` (`i` in `1..=7`).
    pub fn f(&self, i: u8) -> Scalar {
        assert!((1..=DIM).contains(&i), "frame index out of range");
        Scalar::u_pow(&self.context, self.exponents[i as usize - 1].clone())
    }

    /// Exponent sum `Σ_{i ∈ I} β_i` of a multi-index.
    pub fn exponent_sum(&self, idx: &MultiIndex) -> Rational {
        idx.indices().iter().map(|&i| &self.exponents[i as usize - 1]).sum()
    }

    /// The product `f_I = Π_{i ∈ I} f_i = u^{Σ β_i}`.
    pub fn f_index(&self, idx: &MultiIndex) -> Scalar {
        Scalar::u_pow(&self.context, self.exponent_sum(idx))
    }
}

/// A catalog algebra equipped with a coframe scaling; the carrier of all
/// exact differential-geometric computations.
#[derive(Clone, Debug)]
pub struct ScaledAlgebra {
    spec: AlgebraSpec,
    scaling: FrameScaling,
}

impl ScaledAlgebra {
    /// Attaches a scaling to an algebra.
    pub fn new(spec: AlgebraSpec, scaling: FrameScaling) -> Self {
        ScaledAlgebra { spec, scaling }
    }

    /// The algebra with unit scaling in the given ring context.
    pub fn unit(spec: AlgebraSpec, context: RingContext) -> Self {
        let scaling = FrameScaling::unit(context);
        ScaledAlgebra { spec, scaling }
    }

    /// The underlying catalog record.
    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    /// The coframe scaling.
    pub fn scaling(&self) -> &FrameScaling {
        &self.scaling
    }

    /// The common ring context.
    pub fn context(&self) -> &RingContext {
        self.scaling.context()
    }

    /// Differentials `dx^1, ..., dx^7` of the scaled orthonormal coframe:
    /// each structure term `v m^{m_pow} e^{ij}` of `de^k` contributes
    /// `v m^{m_pow} u^{β_k − β_i − β_j} x^{ij}` to `dx^k`.
    ///
    /// # Errors
    /// Returns [`LieAlgError::NumericOnly`] for floating-point algebras.
    pub fn d_one_forms(&self) -> Result<[Form<Scalar>; 7], LieAlgError> {
        let ctx = self.context();
        let beta = self.scaling.exponents();
        let mut table: [Form<Scalar>; 7] = std::array::from_fn(|_| Form::zero(2));
        for (k, i, j, v, m_pow) in self.spec.exact_structure_terms()? {
            let u_pow = &beta[k as usize - 1] - &beta[i as usize - 1] - &beta[j as usize - 1];
            let coeff = Scalar::term(ctx, v, i64::from(m_pow), u_pow);
            let idx = MultiIndex::new(&[i, j]).expect("catalog indices are valid");
            table[k as usize - 1].accumulate(idx, coeff);
        }
        Ok(table)
    }

    /// Floating-point coframe differentials at rational `(m, t)`.
    ///
    /// # Errors
    /// Fails when the scaling base `u(m, t)` is not positive.
    pub fn d_one_forms_numeric(
        &self,
        m: &Rational,
        t: &Rational,
    ) -> Result<[Form<f64>; 7], LieAlgError> {
        let ctx = self.context();
        let beta = self.scaling.exponents();
        let u = ctx.base_at(m, t);
        if u <= Rational::zero() {
            return Err(ScalarError::NonPositiveBase {
                u: crate::scalar::rational_to_string(&u),
                m: crate::scalar::rational_to_string(m),
                t: crate::scalar::rational_to_string(t),
            }
            .into());
        }
        let uf = rational_to_f64(&u);
        let mf = rational_to_f64(m);
        let mut table: [Form<f64>; 7] = std::array::from_fn(|_| Form::zero(2));
        for term in self.spec.structure_terms() {
            let (k, i, j) = (term.target, term.i, term.j);
            let u_pow =
                &beta[k as usize - 1] - &beta[i as usize - 1] - &beta[j as usize - 1];
            let coeff = term.value.to_f64()
                * mf.powi(i64::from(term.m_pow) as i32)
                * uf.powf(rational_to_f64(&u_pow));
            let idx = MultiIndex::new(&[i, j]).expect("catalog indices are valid");
            table[k as usize - 1].accumulate(idx, coeff);
        }
        Ok(table)
    }

    /// Exterior differential of a form with `t`-dependent coefficients in
    /// the scaled coframe (spatial differential only; time is frozen).
    ///
    /// # Errors
    /// Returns [`LieAlgError::NumericOnly`] for floating-point algebras.
    pub fn exterior_d(&self, a: &Form<Scalar>) -> Result<Form<Scalar>, LieAlgError> {
        let table = self.d_one_forms()?;
        Ok(d_from_table(&table, a))
    }

    /// Floating-point exterior differential at rational `(m, t)`.
    pub fn exterior_d_numeric(
        &self,
        a: &Form<f64>,
        m: &Rational,
        t: &Rational,
    ) -> Result<Form<f64>, LieAlgError> {
        let table = self.d_one_forms_numeric(m, t)?;
        Ok(d_from_table(&table, a))
    }

    /// Structure constants of the scaled orthonormal frame:
    /// `[x_i, x_j] = Σ_k a^k_{ij} x_k` with `a^k_{ij} = −(dx^k)(x_i, x_j)`.
    ///
    /// # Errors
    /// Returns [`LieAlgError::NumericOnly`] for floating-point algebras.
    pub fn x_structure_constants(&self) -> Result<BracketTable, LieAlgError> {
        let table = self.d_one_forms()?;
        let mut coeffs = BTreeMap::new();
        for (k, dxk) in table.iter().enumerate() {
            for (idx, c) in dxk.terms() {
                let (i, j) = (idx.indices()[0], idx.indices()[1]);
                coeffs.insert((k as u8 + 1, i, j), c.neg());
            }
        }
        Ok(BracketTable { context: self.context().clone(), coeffs })
    }

    /// Exact time derivative of a form given in the scaled coframe.
    ///
    /// Coefficients relative to the frozen coframe `e^I` are
    /// `c_I f_I`; differentiating those and re-expressing in the moving
    /// coframe gives `c_I ↦ (d/dt)(c_I f_I) · f_I^{−1}`.
    pub fn time_derivative(&self, a: &Form<Scalar>) -> Form<Scalar> {
        let mut out = Form::zero(a.degree());
        for (idx, c) in a.terms() {
            let f_idx = self.scaling.f_index(idx);
            let f_idx_inv = Scalar::u_pow(self.context(), -self.scaling.exponent_sum(idx));
            let dc = c.mul(&f_idx).ddt().mul(&f_idx_inv);
            out.accumulate(*idx, dc);
        }
        out
    }
}

/// Evaluates an exterior differential from a table of coframe
/// differentials, extending as an antiderivation with `t`-frozen
/// coefficients: `d(c x^{i_1...i_k}) = c Σ_j (−1)^{j−1} dx^{i_j} ∧ x^{I∖i_j}`.
pub fn d_from_table<C: Coefficient>(table: &[Form<C>; 7], a: &Form<C>) -> Form<C> {
    let degree = a.degree() + 1;
    if degree > DIM as usize {
        // Top-degree forms are closed; Λ^8 = 0 is represented by the
        // degree-7 zero form.
        return Form::zero(DIM as usize);
    }
    let mut out = Form::zero(degree);
    for (idx, c) in a.terms() {
        for (pos, &i) in idx.indices().iter().enumerate() {
            let rest = idx.without(i).expect("index entry is present");
            let slot_sign = if pos % 2 == 1 { -1 } else { 1 };
            for (two_idx, w) in table[i as usize - 1].terms() {
                if let Some((merged, merge_sign)) = two_idx.merge(&rest) {
                    let mut coeff = c.mul(w);
                    if slot_sign * merge_sign < 0 {
                        coeff = coeff.neg();
                    }
                    out.accumulate(merged, coeff);
                }
            }
        }
    }
    out
}

/// Frame bracket coefficients `a^k_{ij}` of a scaled algebra.
#[derive(Clone, Debug)]
pub struct BracketTable {
    context: RingContext,
    coeffs: BTreeMap<(u8, u8, u8), Scalar>,
}

impl BracketTable {
    /// Coefficient `a^k_{ij}` of `x_k` in `[x_i, x_j]`, for any `i, j`.
    pub fn coeff(&self, k: u8, i: u8, j: u8) -> Scalar {
        if i == j {
            return Scalar::zero(&self.context);
        }
        let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        match self.coeffs.get(&(k, a, b)) {
            None => Scalar::zero(&self.context),
            Some(c) => {
                if flip {
                    c.neg()
                } else {
                    c.clone()
                }
            }
        }
    }

    /// Iterates over stored coefficients `((k, i, j), a^k_{ij})` with `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = (&(u8, u8, u8), &Scalar)> {
        self.coeffs.iter()
    }

    /// The ring context of the coefficients.
    pub fn context(&self) -> &RingContext {
        &self.context
    }
}

#[derive(Deserialize)]
struct RawRecord {
    name: String,
    eta: Vec<String>,
    c6: Vec<String>,
    #[serde(default)]
    extra: Vec<(u8, u8, u8, serde_json::Value)>,
}

/// Default catalog shipped with the crate.
pub const DEFAULT_CATALOG_JSON: &str = include_str!("../data/catalog.json");

/// Environment variable naming an alternative catalog file.
pub const CATALOG_ENV_VAR: &str = "G2FLOW_CATALOG";

/// Loads the default catalog, honoring the `G2FLOW_CATALOG` environment
/// variable when set (path to a JSON catalog file).
///
/// # Errors
/// Fails on I/O problems, parse errors, invalid records or Jacobi
/// violations.
pub fn load_catalog() -> Result<Vec<AlgebraSpec>, LieAlgError> {
    match std::env::var(CATALOG_ENV_VAR) {
        Ok(path) if !path.is_empty() => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| LieAlgError::Parse(format!("cannot read {path:?}: {e}")))?;
            load_catalog_from_str(&text)
        }
        _ => load_catalog_from_str(DEFAULT_CATALOG_JSON),
    }
}

/// Parses and validates a catalog from JSON text.
///
/// Validation checks the record shape (six `eta` entries, six `c6`
/// entries, index ranges, unique names) and certifies `d² = 0` on
/// one-forms for every record: symbolically for exact algebras, with
/// residual below `1e-12` at `(m, t) = (1, 0)` for floating-point ones.
pub fn load_catalog_from_str(text: &str) -> Result<Vec<AlgebraSpec>, LieAlgError> {
    let raw: Vec<RawRecord> =
        serde_json::from_str(text).map_err(|e| LieAlgError::Parse(e.to_string()))?;
    let mut out = Vec::with_capacity(raw.len());
    let mut names = std::collections::BTreeSet::new();
    for record in raw {
        let spec = validate_record(record)?;
        if !names.insert(spec.name.clone()) {
            return Err(LieAlgError::InvalidRecord {
                name: spec.name.clone(),
                reason: "duplicate name".to_string(),
            });
        }
        check_jacobi(&spec)?;
        out.push(spec);
    }
    Ok(out)
}

/// Finds an algebra by name.
pub fn find_algebra<'a>(
    catalog: &'a [AlgebraSpec],
    name: &str,
) -> Result<&'a AlgebraSpec, LieAlgError> {
    catalog
        .iter()
        .find(|a| a.name() == name)
        .ok_or_else(|| LieAlgError::UnknownAlgebra(name.to_string()))
}

fn validate_record(record: RawRecord) -> Result<AlgebraSpec, LieAlgError> {
    let name = record.name.clone();
    let invalid = |reason: &str| LieAlgError::InvalidRecord {
        name: name.clone(),
        reason: reason.to_string(),
    };
    if name.is_empty() {
        return Err(invalid("empty name"));
    }
    if record.eta.len() != 6 || record.c6.len() != 6 {
        return Err(invalid("eta and c6 must have six entries"));
    }
    let parse6 = |v: &[String]| -> Result<[Rational; 6], LieAlgError> {
        let mut out: [Rational; 6] = std::array::from_fn(|_| Rational::zero());
        for (slot, s) in v.iter().enumerate() {
            out[slot] =
                parse_rational(s).map_err(|e| invalid(&format!("bad rational {s:?}: {e}")))?;
        }
        Ok(out)
    };
    let eta = parse6(&record.eta)?;
    let c6 = parse6(&record.c6)?;
    let mut extra = Vec::new();
    for (k, i, j, value) in record.extra {
        if !(1..=DIM).contains(&k) || !(1..=DIM).contains(&i) || !(1..=DIM).contains(&j) || i >= j {
            return Err(invalid(&format!("bad extra indices ({k}, {i}, {j})")));
        }
        let value = match &value {
            serde_json::Value::String(s) => StructureValue::Exact(
                parse_rational(s).map_err(|e| invalid(&format!("bad rational {s:?}: {e}")))?,
            ),
            serde_json::Value::Number(n) => StructureValue::Numeric(
                n.as_f64().ok_or_else(|| invalid("non-finite extra value"))?,
            ),
            _ => return Err(invalid("extra value must be a rational string or a number")),
        };
        extra.push(StructureTerm { target: k, i, j, value, m_pow: 0 });
    }
    Ok(AlgebraSpec { name, eta, c6, extra })
}

/// Certifies `d² = 0` on all coframe one-forms.
fn check_jacobi(spec: &AlgebraSpec) -> Result<(), LieAlgError> {
    let ctx = RingContext::constant();
    let alg = ScaledAlgebra::unit(spec.clone(), ctx);
    if spec.is_numeric_only() {
        let m = crate::scalar::rat_int(1);
        let t = Rational::zero();
        let table = alg.d_one_forms_numeric(&m, &t)?;
        for k in 1..=DIM {
            let dd = d_from_table(&table, &table[k as usize - 1]);
            let sup = dd.terms().map(|(_, c)| c.abs()).fold(0.0f64, f64::max);
            if sup >= 1e-12 {
                return Err(LieAlgError::JacobiViolation { name: spec.name.clone() });
            }
        }
    } else {
        let table = alg.d_one_forms()?;
        for k in 1..=DIM {
            let dd = d_from_table(&table, &table[k as usize - 1]);
            if !dd.is_zero() {
                return Err(LieAlgError::JacobiViolation { name: spec.name.clone() });
            }
        }
    }
    Ok(())
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}
