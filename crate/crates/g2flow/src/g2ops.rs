//! G2-structure operations: induced metric, torsion classification,
//! codifferential and Hodge Laplacian.
//!
//! All operators act in the scaled orthonormal coframe `x^i = f_i e^i` of a
//! [`ScaledAlgebra`], where the canonical three-form
//! `φ = x^{127} + x^{347} + x^{567} + x^{135} − x^{146} − x^{236} − x^{245}`
//! has constant coefficients and the metric is the identity. The Hodge
//! codifferential uses `δa = (−1)^{deg a} ∗d∗a` (Riemannian signature,
//! orientation `x^{1...7}`), and the Hodge Laplacian is `Δ = dδ + δd`.
//!
//! Locally conformal parallel (LCP) structures are certified by solving
//! `dφ = 3τ∧φ`, `dψ = 4τ∧ψ`, `dτ = 0` exactly for a one-form `τ` (the Lee
//! form) with coefficients in the scalar ring.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exterior::{Coefficient, EpsilonTable, Form, MultiIndex, DIM};
use crate::liealg::{AlgebraSpec, LieAlgError, ScaledAlgebra};
use crate::ratlin::in_rational_span;
use crate::scalar::{rat, rat_int, Rational, RingContext, Scalar};

/// Errors produced by G2-structure operations.
#[derive(Debug, Error)]
pub enum G2Error {
    /// An underlying Lie algebra operation failed.
    #[error(transparent)]
    LieAlg(#[from] LieAlgError),
    /// A form of unexpected degree was supplied.
    #[error("expected a form of degree {expected}, found degree {found}")]
    InvalidDegree { expected: usize, found: usize },
    /// The exact metric extraction needs numeric mode for this input.
    #[error("exact metric extraction requires numeric mode: {0}")]
    RequiresNumericMode(String),
    /// The three-form does not induce a definite metric.
    #[error("three-form does not induce a definite metric: {0}")]
    DegenerateForm(String),
    /// The operation is only defined for the solvable catalog family.
    #[error("operation not supported for algebra {0:?}")]
    UnsupportedAlgebra(String),
    /// The torsion equations do not reduce to scaling-pair equalities.
    #[error("conformal-parallel conditions do not reduce to pair relations: {0}")]
    UnreducibleConditions(String),
}

/// The canonical G2 three-form with coefficients `±1` in the scaled
/// orthonormal coframe.
pub fn canonical_phi(ctx: &RingContext) -> Form<Scalar> {
    pattern_form(ctx, 3)
}

/// The canonical four-form `ψ = ∗φ` with coefficients `±1`.
pub fn canonical_psi(ctx: &RingContext) -> Form<Scalar> {
    pattern_form(ctx, 4)
}

/// Floating-point canonical three-form.
pub fn canonical_phi_f64() -> Form<f64> {
    pattern_form_f64(3)
}

/// Floating-point canonical four-form.
pub fn canonical_psi_f64() -> Form<f64> {
    pattern_form_f64(4)
}

fn pattern_form(ctx: &RingContext, degree: usize) -> Form<Scalar> {
    let eps = EpsilonTable::new();
    let mut out = Form::zero(degree);
    let items: Vec<(MultiIndex, i8)> = match degree {
        3 => eps.triples().map(|(i, s)| (*i, s)).collect(),
        4 => eps.quadruples().map(|(i, s)| (*i, s)).collect(),
        _ => unreachable!("pattern degree is 3 or 4"),
    };
    for (idx, sign) in items {
        out.accumulate(idx, Scalar::int(ctx, i64::from(sign)));
    }
    out
}

fn pattern_form_f64(degree: usize) -> Form<f64> {
    let eps = EpsilonTable::new();
    let mut out = Form::zero(degree);
    let items: Vec<(MultiIndex, i8)> = match degree {
        3 => eps.triples().map(|(i, s)| (*i, s)).collect(),
        4 => eps.quadruples().map(|(i, s)| (*i, s)).collect(),
        _ => unreachable!("pattern degree is 3 or 4"),
    };
    for (idx, sign) in items {
        out.accumulate(idx, f64::from(sign));
    }
    out
}

/// A G2-structure on a scaled algebra: the pair `(φ, ψ = ∗φ)`.
///
/// The dual four-form is computed at construction, so `ψ = ∗φ` holds by
/// definition for every instance.
#[derive(Clone, Debug)]
pub struct G2Structure {
    algebra: ScaledAlgebra,
    phi: Form<Scalar>,
    psi: Form<Scalar>,
}

impl G2Structure {
    /// The canonical structure: `φ` with coefficients `±1` in the scaled
    /// orthonormal coframe.
    pub fn canonical(algebra: ScaledAlgebra) -> Self {
        let phi = canonical_phi(algebra.context());
        let psi = phi.hodge_star();
        G2Structure { algebra, phi, psi }
    }

    /// A structure with a custom three-form (given in the scaled coframe).
    ///
    /// # Errors
    /// Returns [`G2Error::InvalidDegree`] unless `phi` has degree three.
    pub fn from_phi(algebra: ScaledAlgebra, phi: Form<Scalar>) -> Result<Self, G2Error> {
        if phi.degree() != 3 {
            return Err(G2Error::InvalidDegree { expected: 3, found: phi.degree() });
        }
        let psi = phi.hodge_star();
        Ok(G2Structure { algebra, phi, psi })
    }

    /// The underlying scaled algebra.
    pub fn algebra(&self) -> &ScaledAlgebra {
        &self.algebra
    }

    /// The three-form.
    pub fn phi(&self) -> &Form<Scalar> {
        &self.phi
    }

    /// The dual four-form `∗φ`.
    pub fn psi(&self) -> &Form<Scalar> {
        &self.psi
    }
}

/// Torsion class of a G2-structure, ordered from most to least rigid.
#[derive(Clone, Debug, PartialEq)]
pub enum TorsionClass {
    /// `dφ = 0` and `dψ = 0`.
    Parallel,
    /// `dφ = 0` only.
    Closed,
    /// `dψ = 0` only.
    Coclosed,
    /// Locally conformal parallel: `dφ = 3τ∧φ`, `dψ = 4τ∧ψ`, `dτ = 0`.
    Lcp {
        /// The Lee form `τ`.
        tau: Form<Scalar>,
    },
    /// None of the above (within Lee forms over the scalar ring).
    Other,
}

impl fmt::Display for TorsionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorsionClass::Parallel => write!(f, "parallel"),
            TorsionClass::Closed => write!(f, "closed"),
            TorsionClass::Coclosed => write!(f, "coclosed"),
            TorsionClass::Lcp { tau } => write!(f, "lcp(tau = {})", tau.display_with("x")),
            TorsionClass::Other => write!(f, "other"),
        }
    }
}

/// Classifies the torsion of a G2-structure.
///
/// The hierarchy is parallel > closed > coclosed > LCP > other. The Lee
/// form for the LCP test is found by solving the 56 coefficient equations
/// of `dφ = 3τ∧φ` and `dψ = 4τ∧ψ` for `τ` with fraction-free elimination
/// over the scalar ring; a unique ring-valued solution must also satisfy
/// `dτ = 0`. Structures whose Lee form does not live in the scalar ring
/// (or is not unique) are reported as [`TorsionClass::Other`].
///
/// # Errors
/// Fails only when the algebra requires numeric mode.
pub fn classify_torsion(structure: &G2Structure) -> Result<TorsionClass, G2Error> {
    let alg = structure.algebra();
    let d_phi = alg.exterior_d(structure.phi())?;
    let d_psi = alg.exterior_d(structure.psi())?;
    match (d_phi.is_zero(), d_psi.is_zero()) {
        (true, true) => return Ok(TorsionClass::Parallel),
        (true, false) => return Ok(TorsionClass::Closed),
        (false, true) => return Ok(TorsionClass::Coclosed),
        (false, false) => {}
    }
    let ctx = alg.context();
    // Row space: coefficients of 3 x^i ∧ φ (degree 4) and 4 x^i ∧ ψ
    // (degree 5) against the unknown Lee components τ_i.
    let basis_wedges_phi: Vec<Form<Scalar>> = (1..=DIM)
        .map(|i| {
            basis_one_form(ctx, i)
                .wedge(structure.phi())
                .expect("1 + 3 <= 7")
                .scale_rational(&rat_int(3))
        })
        .collect();
    let basis_wedges_psi: Vec<Form<Scalar>> = (1..=DIM)
        .map(|i| {
            basis_one_form(ctx, i)
                .wedge(structure.psi())
                .expect("1 + 4 <= 7")
                .scale_rational(&rat_int(4))
        })
        .collect();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();
    for idx in MultiIndex::all_of_degree(4) {
        rows.push(
            basis_wedges_phi
                .iter()
                .map(|w| w.coeff(&idx).cloned().unwrap_or_else(|| Scalar::zero(ctx)))
                .collect(),
        );
        rhs.push(d_phi.coeff(&idx).cloned().unwrap_or_else(|| Scalar::zero(ctx)));
    }
    for idx in MultiIndex::all_of_degree(5) {
        rows.push(
            basis_wedges_psi
                .iter()
                .map(|w| w.coeff(&idx).cloned().unwrap_or_else(|| Scalar::zero(ctx)))
                .collect(),
        );
        rhs.push(d_psi.coeff(&idx).cloned().unwrap_or_else(|| Scalar::zero(ctx)));
    }
    let tau_components = match scalar_solve(ctx, rows, rhs) {
        ScalarSolve::Unique(x) => x,
        // No Lee form, a family of candidates, or a Lee form outside the
        // scalar ring: not certifiable as LCP here.
        ScalarSolve::Inconsistent
        | ScalarSolve::Underdetermined { .. }
        | ScalarSolve::NotInRing => return Ok(TorsionClass::Other),
    };
    let mut tau = Form::zero(1);
    for (i, c) in tau_components.into_iter().enumerate() {
        tau.accumulate(MultiIndex::new(&[i as u8 + 1]).unwrap(), c);
    }
    // Defensive exact re-check of the defining equations and closedness.
    let lhs_phi = tau.wedge(structure.phi()).expect("1 + 3 <= 7").scale_rational(&rat_int(3));
    let lhs_psi = tau.wedge(structure.psi()).expect("1 + 4 <= 7").scale_rational(&rat_int(4));
    if lhs_phi != d_phi || lhs_psi != d_psi {
        return Ok(TorsionClass::Other);
    }
    if !alg.exterior_d(&tau)?.is_zero() {
        return Ok(TorsionClass::Other);
    }
    Ok(TorsionClass::Lcp { tau })
}

/// The basis one-form `x^i`.
pub fn basis_one_form(ctx: &RingContext, i: u8) -> Form<Scalar> {
    let mut out = Form::zero(1);
    out.accumulate(MultiIndex::new(&[i]).expect("frame index in range"), Scalar::one(ctx));
    out
}

/// Hodge codifferential `δa = (−1)^{deg a} ∗d∗a`.
///
/// # Errors
/// Returns [`G2Error::InvalidDegree`] on degree zero, and propagates
/// numeric-only algebra errors.
pub fn codifferential(alg: &ScaledAlgebra, a: &Form<Scalar>) -> Result<Form<Scalar>, G2Error> {
    if a.degree() == 0 {
        return Err(G2Error::InvalidDegree { expected: 1, found: 0 });
    }
    let star_a = a.hodge_star();
    let d_star_a = alg.exterior_d(&star_a)?;
    let mut out = d_star_a.hodge_star();
    if a.degree() % 2 == 1 {
        out = out.neg();
    }
    Ok(out)
}

/// Hodge Laplacian `Δa = dδa + δda`.
///
/// # Errors
/// Propagates numeric-only algebra errors.
pub fn laplacian(alg: &ScaledAlgebra, a: &Form<Scalar>) -> Result<Form<Scalar>, G2Error> {
    let mut out = Form::zero(a.degree());
    if a.degree() >= 1 {
        out = out.add(&alg.exterior_d(&codifferential(alg, a)?)?);
    }
    if a.degree() < DIM as usize {
        let da = alg.exterior_d(a)?;
        out = out.add(&codifferential(alg, &da)?);
    }
    Ok(out)
}

/// Floating-point Hodge codifferential at rational `(m, t)`.
pub fn codifferential_numeric(
    alg: &ScaledAlgebra,
    a: &Form<f64>,
    m: &Rational,
    t: &Rational,
) -> Result<Form<f64>, G2Error> {
    if a.degree() == 0 {
        return Err(G2Error::InvalidDegree { expected: 1, found: 0 });
    }
    let star_a = a.hodge_star();
    let d_star_a = alg.exterior_d_numeric(&star_a, m, t)?;
    let mut out = d_star_a.hodge_star();
    if a.degree() % 2 == 1 {
        out = out.neg();
    }
    Ok(out)
}

/// Floating-point Hodge Laplacian at rational `(m, t)`.
pub fn laplacian_numeric(
    alg: &ScaledAlgebra,
    a: &Form<f64>,
    m: &Rational,
    t: &Rational,
) -> Result<Form<f64>, G2Error> {
    let mut out = Form::zero(a.degree());
    if a.degree() >= 1 {
        let delta_a = codifferential_numeric(alg, a, m, t)?;
        out = out.add(&alg.exterior_d_numeric(&delta_a, m, t)?);
    }
    if a.degree() < DIM as usize {
        let da = alg.exterior_d_numeric(a, m, t)?;
        out = out.add(&codifferential_numeric(alg, &da, m, t)?);
    }
    Ok(out)
}

/// Closed-form Laplacian coefficient ratios `Δ_ijk · f_7² / m²` of the
/// canonical three-form on a solvable catalog algebra, one rational per
/// pattern triple.
///
/// These are the tabulated closed forms in the derivation eigenvalues
/// `η_k/m`, with family-specific contributions from the nilpotent bracket;
/// they are cross-checked against the generic `dδ + δd` computation by the
/// test suite.
///
/// # Errors
/// Returns [`G2Error::UnsupportedAlgebra`] outside the `cp1..cp7` family.
pub fn laplacian_coefficient_ratios(
    spec: &AlgebraSpec,
) -> Result<BTreeMap<MultiIndex, Rational>, G2Error> {
    let family = spec
        .cp_index()
        .ok_or_else(|| G2Error::UnsupportedAlgebra(spec.name().to_string()))?;
    let eta = spec.eta();
    let e = |k: usize| eta[k - 1].clone();
    let ind = |s: usize, num: i64, den: i64| if family == s { rat(num, den) } else { Rational::zero() };
    let mut out = BTreeMap::new();
    let mut put = |triple: [u8; 3], value: Rational| {
        out.insert(MultiIndex::new(&triple).unwrap(), value);
    };
    put(
        [1, 2, 7],
        rat_int(3) * (rat_int(4) + e(3) + e(4) + e(5) + e(6)) + rat_int(4) * (e(1) + e(2)),
    );
    put([3, 4, 7], ind(7, 6, 5) + rat_int(4) * (e(3) + e(4)));
    put([5, 6, 7], ind(7, 6, 5) + rat_int(4) * (e(5) + e(6)));
    put([1, 3, 5], ind(6, 4, 3) + rat_int(3) * (e(2) + e(4) + e(6)));
    put(
        [1, 4, 6],
        ind(4, 8, 5) + ind(5, 2, 1) + ind(6, 4, 3) + rat_int(3) * (e(2) + e(3) + e(5)),
    );
    put(
        [2, 3, 6],
        ind(2, 8, 3)
            + ind(3, 2, 1)
            + ind(4, 8, 5)
            + ind(6, 4, 3)
            + ind(7, 24, 5)
            + rat_int(3) * (e(1) + e(4) + e(5)),
    );
    put(
        [2, 4, 5],
        ind(3, 2, 1)
            + ind(4, 8, 5)
            + ind(5, 2, 1)
            + ind(6, 4, 3)
            + rat_int(3) * (e(1) + e(3) + e(6)),
    );
    Ok(out)
}

/// Closed-form Laplacian coefficients `Δ_ijk · f_7²` as ring elements
/// (each is `ratio · m²` in the supplied context).
///
/// # Errors
/// Returns [`G2Error::UnsupportedAlgebra`] outside the `cp1..cp7` family.
pub fn laplacian_coefficients_closed_form(
    spec: &AlgebraSpec,
    ctx: &RingContext,
) -> Result<BTreeMap<MultiIndex, Scalar>, G2Error> {
    Ok(laplacian_coefficient_ratios(spec)?
        .into_iter()
        .map(|(idx, r)| (idx, Scalar::term(ctx, r, 2, Rational::zero())))
        .collect())
}

/// Matrix of ring elements indexed `1..=7 × 1..=7`.
pub type ScalarMatrix = [[Scalar; 7]; 7];

/// Extracts the metric induced by a three-form in a coframe `e^i`:
/// `B_ij = (1/6) [ι_i φ ∧ ι_j φ ∧ φ]_{e^{1...7}}` and
/// `g = B · (det B)^{−1/9}`.
///
/// Exact mode requires `B` to be diagonal with monomial entries whose
/// determinant has an exact rational ninth root (true for diagonal
/// power-law coframes); use [`metric_from_phi_numeric`] otherwise.
///
/// # Errors
/// [`G2Error::InvalidDegree`] for non-three-forms,
/// [`G2Error::RequiresNumericMode`] when `B` is not monomial-diagonal or
/// the ninth root is irrational.
pub fn metric_from_phi(phi: &Form<Scalar>) -> Result<ScalarMatrix, G2Error> {
    if phi.degree() != 3 {
        return Err(G2Error::InvalidDegree { expected: 3, found: phi.degree() });
    }
    let ctx = phi
        .terms()
        .next()
        .map(|(_, c)| c.context().clone())
        .ok_or_else(|| G2Error::DegenerateForm("zero three-form".to_string()))?;
    let b = bilinear_from_phi(phi, &ctx)?;
    // Exact mode: demand a monomial diagonal.
    let mut det = Scalar::one(&ctx);
    for i in 0..7 {
        for j in 0..7 {
            if i != j && !b[i][j].is_zero() {
                return Err(G2Error::RequiresNumericMode(format!(
                    "off-diagonal entry B[{}][{}] = {}",
                    i + 1,
                    j + 1,
                    b[i][j]
                )));
            }
        }
        if b[i][i].as_monomial().is_none() {
            return Err(G2Error::RequiresNumericMode(format!(
                "diagonal entry B[{i1}][{i1}] = {} is not a monomial",
                b[i][i],
                i1 = i + 1
            )));
        }
        det = det.mul(&b[i][i]);
    }
    let root = det.monomial_nth_root(9).ok_or_else(|| {
        G2Error::RequiresNumericMode(format!("det B = {det} has no exact ninth root"))
    })?;
    let (c, _, _) = root.as_monomial().expect("ninth root of a monomial is a monomial");
    if !c.is_positive() {
        return Err(G2Error::DegenerateForm(format!("det B = {det} is not positive")));
    }
    let inv_root = Scalar::one(&ctx).div_exact(&root).expect("monomial is invertible");
    Ok(std::array::from_fn(|i| {
        std::array::from_fn(|j| b[i][j].mul(&inv_root))
    }))
}

fn bilinear_from_phi(phi: &Form<Scalar>, ctx: &RingContext) -> Result<ScalarMatrix, G2Error> {
    let top = MultiIndex::new(&[1, 2, 3, 4, 5, 6, 7]).unwrap();
    let sixth = rat(1, 6);
    let mut b: ScalarMatrix = std::array::from_fn(|_| std::array::from_fn(|_| Scalar::zero(ctx)));
    let interiors: Vec<Form<Scalar>> =
        (1..=DIM).map(|i| phi.interior(i).expect("degree 3 > 0")).collect();
    for i in 0..7 {
        for j in i..7 {
            let product = interiors[i]
                .wedge(&interiors[j])
                .expect("2 + 2 <= 7")
                .wedge(phi)
                .expect("4 + 3 <= 7");
            let coeff = product
                .coeff(&top)
                .cloned()
                .unwrap_or_else(|| Scalar::zero(ctx))
                .scale(&sixth);
            b[i][j] = coeff.clone();
            b[j][i] = coeff;
        }
    }
    Ok(b)
}

/// Floating-point metric extraction `g = B (det B)^{−1/9}`.
///
/// # Errors
/// [`G2Error::InvalidDegree`] for non-three-forms,
/// [`G2Error::DegenerateForm`] when `det B ≤ 0`.
pub fn metric_from_phi_numeric(phi: &Form<f64>) -> Result<[[f64; 7]; 7], G2Error> {
    if phi.degree() != 3 {
        return Err(G2Error::InvalidDegree { expected: 3, found: phi.degree() });
    }
    let top = MultiIndex::new(&[1, 2, 3, 4, 5, 6, 7]).unwrap();
    let mut b = [[0.0f64; 7]; 7];
    let interiors: Vec<Form<f64>> =
        (1..=DIM).map(|i| phi.interior(i).expect("degree 3 > 0")).collect();
    for i in 0..7 {
        for j in i..7 {
            let product = interiors[i]
                .wedge(&interiors[j])
                .expect("2 + 2 <= 7")
                .wedge(phi)
                .expect("4 + 3 <= 7");
            let coeff = product.coeff(&top).copied().unwrap_or(0.0) / 6.0;
            b[i][j] = coeff;
            b[j][i] = coeff;
        }
    }
    let det = det7(&b);
    if !(det > 0.0) {
        return Err(G2Error::DegenerateForm(format!("det B = {det}")));
    }
    let scale = det.powf(-1.0 / 9.0);
    Ok(std::array::from_fn(|i| std::array::from_fn(|j| b[i][j] * scale)))
}

fn det7(matrix: &[[f64; 7]; 7]) -> f64 {
    let mut m = *matrix;
    let mut det = 1.0f64;
    for col in 0..7 {
        let pivot = (col..7)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .expect("nonempty range");
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..7 {
            let factor = m[row][col] / m[col][col];
            for c in col..7 {
                m[row][c] -= factor * m[col][c];
            }
        }
    }
    det
}

/// A set of mutually equal coframe scaling pair-products: the relation
/// `f_{i1} f_{j1} = f_{i2} f_{j2} = ...`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PairRelationClass {
    pairs: Vec<(u8, u8)>,
}

impl PairRelationClass {
    /// The pairs `(i, j)` with `i < j`, sorted.
    pub fn pairs(&self) -> &[(u8, u8)] {
        &self.pairs
    }

    /// Whether exponents `β` satisfy this class: all `β_i + β_j` equal.
    pub fn holds_for_exponents(&self, beta: &[Rational; 7]) -> bool {
        let sum = |&(i, j): &(u8, u8)| &beta[i as usize - 1] + &beta[j as usize - 1];
        let first = sum(&self.pairs[0]);
        self.pairs.iter().all(|p| sum(p) == first)
    }
}

impl fmt::Display for PairRelationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.pairs.iter().map(|(i, j)| format!("f{i}*f{j}")).collect();
        write!(f, "{}", parts.join(" = "))
    }
}

/// Derives, from the structure equations alone, the conditions on a
/// diagonal coframe scaling `f_1, ..., f_7` under which the canonical
/// structure is locally conformal parallel with Lee form `m e^7`.
///
/// The coefficients of `dφ − 3 m e^7∧φ` and `dψ − 4 m e^7∧ψ` are computed
/// symbolically in the ring `Q[f_1^{±1}, ..., f_7^{±1}]`; vanishing of
/// every coefficient reduces to equalities among pair products `f_i f_j`,
/// which are returned grouped into [`PairRelationClass`] sets (empty for
/// unconditionally LCP algebras). Equations with more than two monomials
/// are verified to be consequences of the pair relations.
///
/// # Errors
/// [`G2Error::UnsupportedAlgebra`] outside the `cp1..cp7` family,
/// [`G2Error::UnreducibleConditions`] when an equation does not follow
/// from pair equalities.
pub fn lcp_conditions(spec: &AlgebraSpec) -> Result<Vec<PairRelationClass>, G2Error> {
    if spec.cp_index().is_none() {
        return Err(G2Error::UnsupportedAlgebra(spec.name().to_string()));
    }
    let equations = lcp_coefficient_equations(spec)?;
    reduce_lcp_equations(&equations)
}

/// Laurent polynomial in the scaling factors `f_1, ..., f_7` with rational
/// coefficients (crate-internal coefficient ring for deriving scaling
/// conditions).
#[derive(Clone, Debug, PartialEq)]
struct FPoly {
    terms: BTreeMap<[i16; 7], Rational>,
}

impl FPoly {
    fn zero() -> Self {
        FPoly { terms: BTreeMap::new() }
    }

    fn constant(c: Rational) -> Self {
        let mut p = FPoly::zero();
        if !c.is_zero() {
            p.terms.insert([0; 7], c);
        }
        p
    }

    /// Monomial `Π_{i ∈ idx} f_i`.
    fn product_of(idx: &MultiIndex) -> Self {
        let mut exp = [0i16; 7];
        for &i in idx.indices() {
            exp[i as usize - 1] = 1;
        }
        let mut p = FPoly::zero();
        p.terms.insert(exp, Rational::one());
        p
    }

    fn insert(&mut self, key: [i16; 7], c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }
}

impl fmt::Display for FPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", crate::scalar::rational_to_string(c))?;
            for (i, &p) in exp.iter().enumerate() {
                if p == 1 {
                    write!(f, "*f{}", i + 1)?;
                } else if p != 0 {
                    write!(f, "*f{}^{}", i + 1, p)?;
                }
            }
        }
        Ok(())
    }
}

impl Coefficient for FPoly {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(*k, c.clone());
        }
        out
    }
    fn neg(&self) -> Self {
        let mut out = FPoly::zero();
        for (k, c) in &self.terms {
            out.terms.insert(*k, -c);
        }
        out
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = FPoly::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let mut k = [0i16; 7];
                for i in 0..7 {
                    k[i] = k1[i] + k2[i];
                }
                out.insert(k, c1 * c2);
            }
        }
        out
    }
    fn scale_rational(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return FPoly::zero();
        }
        let mut out = FPoly::zero();
        for (k, c) in &self.terms {
            out.terms.insert(*k, c * r);
        }
        out
    }
}

/// All coefficient equations of `dφ = 3 m e^7∧φ` and `dψ = 4 m e^7∧ψ` for
/// the pattern structure `φ = Σ ε f_I e^I`, as Laurent polynomials in the
/// `f_i` (the uniform bracket scale `m` cancels and is dropped).
fn lcp_coefficient_equations(spec: &AlgebraSpec) -> Result<Vec<FPoly>, G2Error> {
    let terms = spec.exact_structure_terms()?;
    // The closed forms assume a uniformly m-graded bracket.
    if terms.iter().any(|(_, _, _, _, m_pow)| *m_pow != 1) {
        return Err(G2Error::UnsupportedAlgebra(spec.name().to_string()));
    }
    let mut d_table: [Form<FPoly>; 7] = std::array::from_fn(|_| Form::zero(2));
    for (k, i, j, v, _) in &terms {
        let idx = MultiIndex::new(&[*i, *j]).expect("catalog indices are valid");
        d_table[*k as usize - 1].accumulate(idx, FPoly::constant(v.clone()));
    }
    let eps = EpsilonTable::new();
    let mut phi: Form<FPoly> = Form::zero(3);
    for (idx, sign) in eps.triples() {
        phi.accumulate(*idx, FPoly::product_of(idx).scale_rational(&rat_int(i64::from(sign))));
    }
    let mut psi: Form<FPoly> = Form::zero(4);
    for (idx, sign) in eps.quadruples() {
        psi.accumulate(*idx, FPoly::product_of(idx).scale_rational(&rat_int(i64::from(sign))));
    }
    let mut e7: Form<FPoly> = Form::zero(1);
    e7.accumulate(MultiIndex::new(&[7]).unwrap(), FPoly::constant(Rational::one()));
    let d_phi = crate::liealg::d_from_table(&d_table, &phi);
    let d_psi = crate::liealg::d_from_table(&d_table, &psi);
    let target_phi = e7.wedge(&phi).expect("1 + 3 <= 7").scale_rational(&rat_int(3));
    let target_psi = e7.wedge(&psi).expect("1 + 4 <= 7").scale_rational(&rat_int(4));
    let residual_phi = d_phi.sub(&target_phi);
    let residual_psi = d_psi.sub(&target_psi);
    let mut equations = Vec::new();
    for (_, c) in residual_phi.terms() {
        equations.push(c.clone());
    }
    for (_, c) in residual_psi.terms() {
        equations.push(c.clone());
    }
    Ok(equations)
}

/// Reduces coefficient equations to pair-product relation classes.
fn reduce_lcp_equations(equations: &[FPoly]) -> Result<Vec<PairRelationClass>, G2Error> {
    // Pass 1: binomial equations c1 f^{a} + c2 f^{b} = 0 with c1 = −c2 give
    // pair equalities f_{i1} f_{j1} = f_{i2} f_{j2}.
    let mut relations: Vec<((u8, u8), (u8, u8))> = Vec::new();
    for eq in equations {
        if eq.terms.len() != 2 {
            continue;
        }
        let entries: Vec<(&[i16; 7], &Rational)> = eq.terms.iter().collect();
        let (e1, c1) = entries[0];
        let (e2, c2) = entries[1];
        if (c1 + c2).is_zero() {
            let mut plus = Vec::new();
            let mut minus = Vec::new();
            for i in 0..7 {
                match e1[i] - e2[i] {
                    0 => {}
                    1 => plus.push(i as u8 + 1),
                    -1 => minus.push(i as u8 + 1),
                    _ => {
                        return Err(G2Error::UnreducibleConditions(format!(
                            "binomial with non-unit exponent gap: {eq} = 0"
                        )))
                    }
                }
            }
            if plus.len() != 2 || minus.len() != 2 {
                return Err(G2Error::UnreducibleConditions(format!(
                    "binomial does not relate pair products: {eq} = 0"
                )));
            }
            relations.push(((plus[0], plus[1]), (minus[0], minus[1])));
        } else {
            return Err(G2Error::UnreducibleConditions(format!(
                "binomial forces a non-unit ratio of scalings: {eq} = 0"
            )));
        }
    }
    // Union-find over pair products.
    let mut parent: BTreeMap<(u8, u8), (u8, u8)> = BTreeMap::new();
    fn find(parent: &mut BTreeMap<(u8, u8), (u8, u8)>, x: (u8, u8)) -> (u8, u8) {
        let p = *parent.entry(x).or_insert(x);
        if p == x {
            return x;
        }
        let root = find(parent, p);
        parent.insert(x, root);
        root
    }
    for (a, b) in &relations {
        let ra = find(&mut parent, *a);
        let rb = find(&mut parent, *b);
        if ra != rb {
            parent.insert(ra.max(rb), ra.min(rb));
        }
    }
    let mut classes: BTreeMap<(u8, u8), Vec<(u8, u8)>> = BTreeMap::new();
    let keys: Vec<(u8, u8)> = parent.keys().copied().collect();
    for key in keys {
        let root = find(&mut parent, key);
        classes.entry(root).or_default().push(key);
    }
    let classes: Vec<PairRelationClass> = classes
        .into_values()
        .filter(|pairs| pairs.len() >= 2)
        .map(|mut pairs| {
            pairs.sort_unstable();
            pairs.dedup();
            PairRelationClass { pairs }
        })
        .collect();
    // Pass 2: every equation must vanish modulo the pair relations. Terms
    // whose exponent difference lies in the span of the relation vectors
    // have equal monomial values under the relations, so the equation
    // holds iff each such group has zero coefficient sum.
    let relation_vectors: Vec<Vec<Rational>> = relations
        .iter()
        .map(|((i1, j1), (i2, j2))| {
            let mut v = vec![Rational::zero(); 7];
            v[*i1 as usize - 1] += Rational::one();
            v[*j1 as usize - 1] += Rational::one();
            v[*i2 as usize - 1] -= Rational::one();
            v[*j2 as usize - 1] -= Rational::one();
            v
        })
        .collect();
    for eq in equations {
        let entries: Vec<(&[i16; 7], &Rational)> = eq.terms.iter().collect();
        let n = entries.len();
        let mut group: Vec<usize> = (0..n).collect();
        for s in 0..n {
            for t in 0..s {
                let diff: Vec<Rational> = (0..7)
                    .map(|i| rat_int(i64::from(entries[s].0[i] - entries[t].0[i])))
                    .collect();
                if in_rational_span(&relation_vectors, &diff) {
                    group[s] = group[t];
                    break;
                }
            }
        }
        for root in 0..n {
            let sum: Rational = (0..n)
                .filter(|&s| group[s] == root)
                .map(|s| entries[s].1.clone())
                .sum();
            if !sum.is_zero() {
                return Err(G2Error::UnreducibleConditions(format!(
                    "equation is not implied by pair relations: {eq} = 0"
                )));
            }
        }
    }
    Ok(classes)
}

/// Outcome of a fraction-free linear solve over the scalar ring.
enum ScalarSolve {
    Unique(Vec<Scalar>),
    Inconsistent,
    #[allow(dead_code)]
    Underdetermined {
        dimension: usize,
    },
    /// The unique fraction-field solution does not lie in the ring.
    NotInRing,
}

/// Solves `A x = b` over the scalar ring by fraction-free (Bareiss)
/// elimination. `rows` are the coefficient rows of `A`; exact divisions
/// during elimination are guaranteed by the Sylvester identity since the
/// ring is an integral domain. Back-substitution divisions succeed exactly
/// when the fraction-field solution lies in the ring.
fn scalar_solve(ctx: &RingContext, rows: Vec<Vec<Scalar>>, rhs: Vec<Scalar>) -> ScalarSolve {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Scalar>> = rows
        .into_iter()
        .zip(rhs)
        .map(|(mut row, b)| {
            row.push(b);
            row
        })
        .collect();
    let mut prev_pivot = Scalar::one(ctx);
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut rank = 0usize;
    for col in 0..n_cols {
        let Some(src) = (rank..n_rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, src);
        let pivot = m[rank][col].clone();
        for r in rank + 1..n_rows {
            for c in col + 1..=n_cols {
                let a = pivot.mul(&m[r][c]).sub(&m[r][col].mul(&m[rank][c]));
                m[r][c] = a
                    .div_exact(&prev_pivot)
                    .expect("Bareiss elimination divides exactly in an integral domain");
            }
            m[r][col] = Scalar::zero(ctx);
        }
        pivots.push((rank, col));
        prev_pivot = pivot;
        rank += 1;
        if rank == n_rows {
            break;
        }
    }
    for row in m.iter().skip(rank) {
        if !row[n_cols].is_zero() {
            return ScalarSolve::Inconsistent;
        }
    }
    if rank < n_cols {
        return ScalarSolve::Underdetermined { dimension: n_cols - rank };
    }
    // Back substitution on the triangular system.
    let mut x: Vec<Option<Scalar>> = vec![None; n_cols];
    for &(row, col) in pivots.iter().rev() {
        let mut acc = m[row][n_cols].clone();
        for c in col + 1..n_cols {
            if !m[row][c].is_zero() {
                let xc = x[c].as_ref().expect("later pivots already solved");
                acc = acc.sub(&m[row][c].mul(xc));
            }
        }
        match acc.div_exact(&m[row][col]) {
            Some(v) => x[col] = Some(v),
            None => return ScalarSolve::NotInRing,
        }
    }
    ScalarSolve::Unique(x.into_iter().map(|v| v.expect("full rank solves all columns")).collect())
}
