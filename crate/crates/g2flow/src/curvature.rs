//! Levi-Civita curvature of the evolving metrics in the scaled orthonormal
//! frame.
//!
//! The metric is the identity in the frame `x_1, ..., x_7`, so the Koszul
//! formula reduces to structure constants:
//! `Γ^k_{ij} = ⟨∇_{x_i} x_j, x_k⟩ = (1/2)(a^k_{ij} − a^i_{jk} + a^j_{ki})`
//! with `[x_i, x_j] = Σ_k a^k_{ij} x_k`. Curvature components follow from
//! `R(x_i, x_j) x_k = ∇_i ∇_j x_k − ∇_j ∇_i x_k − ∇_{[x_i, x_j]} x_k`, all
//! at frozen time (the connection and curvature are tensorial in `t`).
//!
//! Sign conventions: `R_{ijkl} = ⟨R(x_i, x_j) x_k, x_l⟩` and
//! `Ric_{ij} = Σ_k R_{kijk}`, under which the catalog metrics have
//! `R_{ijji} < 0` and negative-definite Ricci curvature.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::flow::{flow_to_coflow, solve_flow_parameters, FlowError, TimeInterval};
use crate::g2ops::G2Error;
use crate::liealg::{AlgebraSpec, BracketTable, LieAlgError, ScaledAlgebra};
use crate::scalar::{rat_int, RingContext, Scalar};

/// Errors produced by curvature computations.
#[derive(Debug, Error)]
pub enum CurvatureError {
    /// An underlying Lie algebra operation failed.
    #[error(transparent)]
    LieAlg(#[from] LieAlgError),
    /// An underlying G2 operation failed.
    #[error(transparent)]
    G2(#[from] G2Error),
    /// An underlying flow computation failed.
    #[error(transparent)]
    Flow(#[from] FlowError),
    /// An exact rational evaluation was impossible.
    #[error("curvature entry is not rational at the sample point: {0}")]
    NonRationalEntry(String),
    /// The sampling interval for a comparison is empty.
    #[error("no common existence interval for the comparison")]
    EmptyInterval,
}

/// Connection coefficients `Γ^k_{ij}` of the Levi-Civita connection in the
/// orthonormal frame.
#[derive(Clone, Debug)]
pub struct ConnectionTable {
    context: RingContext,
    gamma: BTreeMap<(u8, u8, u8), Scalar>,
}

impl ConnectionTable {
    /// The coefficient `Γ^k_{ij} = ⟨∇_{x_i} x_j, x_k⟩`.
    pub fn christoffel(&self, i: u8, j: u8, k: u8) -> Scalar {
        self.gamma
            .get(&(i, j, k))
            .cloned()
            .unwrap_or_else(|| Scalar::zero(&self.context))
    }

    /// Iterates over nonzero coefficients `((i, j, k), Γ^k_{ij})`.
    pub fn entries(&self) -> impl Iterator<Item = (&(u8, u8, u8), &Scalar)> {
        self.gamma.iter()
    }

    /// The ring context of the coefficients.
    pub fn context(&self) -> &RingContext {
        &self.context
    }
}

/// Levi-Civita connection of a scaled algebra's metric via the Koszul
/// formula in the orthonormal frame.
///
/// # Errors
/// Fails for algebras requiring numeric mode.
pub fn levi_civita(alg: &ScaledAlgebra) -> Result<ConnectionTable, CurvatureError> {
    let brackets = alg.x_structure_constants()?;
    let ctx = alg.context().clone();
    let half = crate::scalar::rat(1, 2);
    let mut gamma = BTreeMap::new();
    for i in 1..=7u8 {
        for j in 1..=7u8 {
            for k in 1..=7u8 {
                let v = brackets
                    .coeff(k, i, j)
                    .sub(&brackets.coeff(i, j, k))
                    .add(&brackets.coeff(j, k, i))
                    .scale(&half);
                if !v.is_zero() {
                    gamma.insert((i, j, k), v);
                }
            }
        }
    }
    Ok(ConnectionTable { context: ctx, gamma })
}

/// Raw curvature component `R_{ijkl} = ⟨R(x_i, x_j) x_k, x_l⟩` from the
/// connection and bracket tables:
/// `R_{ijkl} = Σ_m (Γ^m_{jk} Γ^l_{im} − Γ^m_{ik} Γ^l_{jm}) − Σ_m a^m_{ij} Γ^l_{mk}`.
pub fn riemann_component(
    conn: &ConnectionTable,
    brackets: &BracketTable,
    i: u8,
    j: u8,
    k: u8,
    l: u8,
) -> Scalar {
    let ctx = conn.context();
    let mut out = Scalar::zero(ctx);
    for m in 1..=7u8 {
        out = out.add(&conn.christoffel(j, k, m).mul(&conn.christoffel(i, m, l)));
        out = out.sub(&conn.christoffel(i, k, m).mul(&conn.christoffel(j, m, l)));
        out = out.sub(&brackets.coeff(m, i, j).mul(&conn.christoffel(m, k, l)));
    }
    out
}

/// Riemann tensor stored on canonical representatives: `i < j`, `k < l`,
/// `(i, j) ≤ (k, l)` lexicographically. Lookups for arbitrary index order
/// apply the antisymmetries and the pair symmetry.
#[derive(Clone, Debug)]
pub struct CurvatureTensor {
    context: RingContext,
    entries: BTreeMap<(u8, u8, u8, u8), Scalar>,
}

impl CurvatureTensor {
    /// Canonical representative of `(i, j, k, l)` with the sign relating
    /// `R_{ijkl}` to the stored component; `None` when `i = j` or `k = l`
    /// (the component vanishes).
    pub fn canonical_key(i: u8, j: u8, k: u8, l: u8) -> Option<((u8, u8, u8, u8), i8)> {
        if i == j || k == l {
            return None;
        }
        let mut sign = 1i8;
        let (a, b) = if i < j {
            (i, j)
        } else {
            sign = -sign;
            (j, i)
        };
        let (c, d) = if k < l {
            (k, l)
        } else {
            sign = -sign;
            (l, k)
        };
        if (a, b) <= (c, d) {
            Some(((a, b, c, d), sign))
        } else {
            Some(((c, d, a, b), sign))
        }
    }

    /// The component `R_{ijkl}`.
    pub fn get(&self, i: u8, j: u8, k: u8, l: u8) -> Scalar {
        match Self::canonical_key(i, j, k, l) {
            None => Scalar::zero(&self.context),
            Some((key, sign)) => match self.entries.get(&key) {
                None => Scalar::zero(&self.context),
                Some(v) => {
                    if sign < 0 {
                        v.neg()
                    } else {
                        v.clone()
                    }
                }
            },
        }
    }

    /// Iterates over nonzero canonical entries `((i, j, k, l), R_{ijkl})`.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (&(u8, u8, u8, u8), &Scalar)> {
        self.entries.iter()
    }

    /// Whether the tensor vanishes identically.
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// The ring context of the entries.
    pub fn context(&self) -> &RingContext {
        &self.context
    }
}

/// Riemann tensor of a scaled algebra's metric.
///
/// # Errors
/// Fails for algebras requiring numeric mode.
pub fn riemann(alg: &ScaledAlgebra) -> Result<CurvatureTensor, CurvatureError> {
    let conn = levi_civita(alg)?;
    let brackets = alg.x_structure_constants()?;
    let ctx = alg.context().clone();
    let mut entries = BTreeMap::new();
    for i in 1..=7u8 {
        for j in (i + 1)..=7u8 {
            for k in 1..=7u8 {
                for l in (k + 1)..=7u8 {
                    if (i, j) > (k, l) {
                        continue;
                    }
                    let v = riemann_component(&conn, &brackets, i, j, k, l);
                    if !v.is_zero() {
                        entries.insert((i, j, k, l), v);
                    }
                }
            }
        }
    }
    Ok(CurvatureTensor { context: ctx, entries })
}

/// Ricci tensor with Einstein detection.
#[derive(Clone, Debug)]
pub struct RicciData {
    /// Components `Ric_{ij} = Σ_k R_{kijk}` in the orthonormal frame.
    pub ric: [[Scalar; 7]; 7],
    /// `Some(c)` when `Ric = c · g` exactly.
    pub einstein_constant: Option<Scalar>,
}

impl RicciData {
    /// Trace `Σ_i Ric_{ii}` (the scalar curvature).
    pub fn scalar_curvature(&self) -> Scalar {
        let mut out = self.ric[0][0].clone();
        for i in 1..7 {
            out = out.add(&self.ric[i][i]);
        }
        out
    }
}

/// Ricci tensor of a scaled algebra's metric, contracted from the Riemann
/// tensor: `Ric_{ij} = Σ_k R_{kijk}`.
///
/// # Errors
/// Fails for algebras requiring numeric mode.
pub fn ricci(alg: &ScaledAlgebra) -> Result<RicciData, CurvatureError> {
    let tensor = riemann(alg)?;
    ricci_from_tensor(&tensor)
}

/// Contracts a Riemann tensor to its Ricci tensor.
pub fn ricci_from_tensor(tensor: &CurvatureTensor) -> Result<RicciData, CurvatureError> {
    let ctx = tensor.context().clone();
    let ric: [[Scalar; 7]; 7] = std::array::from_fn(|i0| {
        std::array::from_fn(|j0| {
            let (i, j) = (i0 as u8 + 1, j0 as u8 + 1);
            let mut sum = Scalar::zero(&ctx);
            for k in 1..=7u8 {
                sum = sum.add(&tensor.get(k, i, j, k));
            }
            sum
        })
    });
    let mut einstein = true;
    for i in 0..7 {
        for j in 0..7 {
            if i != j && !ric[i][j].is_zero() {
                einstein = false;
            }
        }
        if ric[i][i] != ric[0][0] {
            einstein = false;
        }
    }
    let einstein_constant = einstein.then(|| ric[0][0].clone());
    Ok(RicciData { ric, einstein_constant })
}

/// Direction of the time limit for [`flat_limit_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitDirection {
    /// `t → −∞`.
    MinusInfinity,
    /// `t → +∞`.
    PlusInfinity,
}

/// Whether the curvature tensor decays to zero in the requested time
/// limit.
///
/// The base `u = 1 + κ m² t` tends to `+∞` as `t → −∞` for `κ < 0` (flow
/// side) and as `t → +∞` for `κ > 0` (coflow side); the limit is flat iff
/// the direction matches the sign of `κ` and every nonzero entry carries
/// strictly negative `u`-powers. For `κ = 0` the tensor is constant and
/// the limit is flat iff it vanishes identically.
pub fn flat_limit_check(tensor: &CurvatureTensor, direction: LimitDirection) -> bool {
    let kappa = tensor.context().kappa();
    if kappa.is_zero() {
        return tensor.is_zero();
    }
    let grows = match direction {
        LimitDirection::MinusInfinity => kappa.is_negative(),
        LimitDirection::PlusInfinity => kappa.is_positive(),
    };
    if !grows {
        return false;
    }
    tensor.nonzero_entries().all(|(_, v)| {
        v.max_u_pow().is_some_and(|q| q.is_negative())
    })
}

/// Verifies the exact Ricci relation between the flow metric and the
/// corresponding coflow metric of a catalog algebra:
/// `Ric(g̃)(m, t) = (u_flow / u_coflow) · Ric(g)(m, t)` with
/// `u_flow = 1 − α m² t` and `u_coflow = 1 − γ m² t`, checked exactly at
/// five rational sample points of the common existence interval (the Ricci
/// entries have integer `u`-powers, so evaluation is exact).
///
/// # Errors
/// Flow and curvature errors; [`CurvatureError::EmptyInterval`] when the
/// two intervals do not overlap.
pub fn coflow_ricci_ratio_check(spec: &AlgebraSpec) -> Result<bool, CurvatureError> {
    let flow = solve_flow_parameters(spec)?;
    let coflow = flow_to_coflow(&flow)?;
    let flow_alg = ScaledAlgebra::new(spec.clone(), flow.scaling());
    let coflow_alg = ScaledAlgebra::new(spec.clone(), coflow.scaling());
    let ric_flow = ricci(&flow_alg)?.ric;
    let ric_coflow = ricci(&coflow_alg)?.ric;
    let m = rat_int(1);
    let times = intersect_intervals(&flow.interval, &coflow.interval)
        .ok_or(CurvatureError::EmptyInterval)?
        .sample_times(&m, 5);
    let flow_ctx = flow_alg.context();
    let coflow_ctx = coflow_alg.context();
    for t in &times {
        let u_flow = flow_ctx.base_at(&m, t);
        let u_coflow = coflow_ctx.base_at(&m, t);
        let ratio = u_flow / u_coflow;
        for i in 0..7 {
            for j in 0..7 {
                let lhs = ric_coflow[i][j].eval_rational(&m, t).ok_or_else(|| {
                    CurvatureError::NonRationalEntry(format!("{}", ric_coflow[i][j]))
                })?;
                let rhs = ric_flow[i][j].eval_rational(&m, t).ok_or_else(|| {
                    CurvatureError::NonRationalEntry(format!("{}", ric_flow[i][j]))
                })?;
                if lhs != &ratio * rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Intersection of two intervals (endpoints as multiples of `1/m²`).
fn intersect_intervals(a: &TimeInterval, b: &TimeInterval) -> Option<TimeInterval> {
    let lower = match (a.lower(), b.lower()) {
        (None, x) => x.cloned(),
        (x, None) => x.cloned(),
        (Some(p), Some(q)) => Some(p.max(q).clone()),
    };
    let upper = match (a.upper(), b.upper()) {
        (None, x) => x.cloned(),
        (x, None) => x.cloned(),
        (Some(p), Some(q)) => Some(p.min(q).clone()),
    };
    if let (Some(lo), Some(hi)) = (&lower, &upper) {
        if lo >= hi {
            return None;
        }
    }
    Some(TimeInterval::from_bounds(lower, upper))
}
