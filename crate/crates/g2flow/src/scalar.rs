//! Exact coefficient ring for symbolic flow computations.
//!
//! A [`Scalar`] is a finite sum of terms `c · m^p · u^q` with rational
//! coefficient `c`, integer power `p` of the free parameter `m` and rational
//! power `q` of the opaque base `u`. The base is tied to a [`RingContext`]:
//! in the default m-graded context `u = 1 + κ m² t`, so differentiation in
//! `t` maps `c · m^p · u^q` to `c q κ · m^{p+2} · u^{q−1}`; in an ungraded
//! context `u = 1 + κ t` and the `m`-power is unchanged. `u` is never
//! expanded into `t`; all identities are certified at the level of this
//! ring, and [`Scalar::eval`] substitutes numbers only at the very end.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational number used throughout the crate.
pub type Rational = BigRational;

/// Builds a rational from a numerator/denominator pair.
///
/// # Panics
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "rational denominator must be nonzero");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds a rational from an integer.
pub fn rat_int(num: i64) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

/// Parses `"num/den"` or `"num"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, ScalarError> {
    let bad = || ScalarError::ParseRational(text.to_string());
    let mut parts = text.splitn(2, '/');
    let num: BigInt = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    match parts.next() {
        None => Ok(Rational::from_integer(num)),
        Some(d) => {
            let den: BigInt = d.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Renders a rational as `"num"` or `"num/den"`.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Converts a rational to the nearest `f64`.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of lossy integer conversions; exact
        // catalogs never produce magnitudes near f64 overflow.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Errors produced by ring operations.
#[derive(Debug, Error)]
pub enum ScalarError {
    /// `eval` was called at a point where the base `u` is not positive.
    #[error("cannot evaluate: u = {u} is not positive at m = {m}, t = {t}")]
    NonPositiveBase { u: String, m: String, t: String },
    /// A rational literal could not be parsed.
    #[error("invalid rational literal: {0:?}")]
    ParseRational(String),
}

/// Ring context fixing the differential structure of the base `u`.
///
/// `kappa` is the slope of the base: `u = 1 + κ m² t` when the context is
/// m-graded (the default for flow and coflow rings, where κ = −α resp.
/// κ = −γ), or `u = 1 + κ t` when ungraded (used by fixtures whose scaling
/// functions carry no `m`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RingContext {
    kappa: Rational,
    m_graded: bool,
}

impl RingContext {
    /// m-graded context with base `u = 1 + κ m² t`.
    pub fn graded(kappa: Rational) -> Self {
        RingContext { kappa, m_graded: true }
    }

    /// Ungraded context with base `u = 1 + κ t`.
    pub fn ungraded(kappa: Rational) -> Self {
        RingContext { kappa, m_graded: false }
    }

    /// Context with κ = 0, i.e. a constant base `u ≡ 1`. Used for
    /// time-independent computations such as catalog validation.
    pub fn constant() -> Self {
        RingContext::graded(Rational::zero())
    }

    /// Slope κ of the base.
    pub fn kappa(&self) -> &Rational {
        &self.kappa
    }

    /// Whether differentiation bumps the `m`-power by two.
    pub fn is_m_graded(&self) -> bool {
        self.m_graded
    }

    /// Exact value of the base at rational `(m, t)`.
    pub fn base_at(&self, m: &Rational, t: &Rational) -> Rational {
        if self.m_graded {
            Rational::one() + &self.kappa * m * m * t
        } else {
            Rational::one() + &self.kappa * t
        }
    }
}

/// Term key: powers `(p, q)` of `m` and `u`.
type TermKey = (i64, Rational);

/// An exact element of the coefficient ring: a finite sum of terms
/// `c · m^p · u^q`, stored sparsely with zero coefficients pruned.
///
/// Values are immutable: every operation returns a new `Scalar`. Binary
/// operations require both operands to share one [`RingContext`] and panic
/// otherwise (mixing contexts is a programming error, not a data error).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scalar {
    ctx: RingContext,
    terms: BTreeMap<TermKey, Rational>,
}

impl Scalar {
    /// The zero element.
    pub fn zero(ctx: &RingContext) -> Self {
        Scalar { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    /// A single term `coeff · m^{m_pow} · u^{u_pow}`.
    pub fn term(ctx: &RingContext, coeff: Rational, m_pow: i64, u_pow: Rational) -> Self {
        let mut s = Scalar::zero(ctx);
        if !coeff.is_zero() {
            s.terms.insert((m_pow, u_pow), coeff);
        }
        s
    }

    /// The constant `c`.
    pub fn constant(ctx: &RingContext, c: Rational) -> Self {
        Scalar::term(ctx, c, 0, Rational::zero())
    }

    /// The integer constant `n`.
    pub fn int(ctx: &RingContext, n: i64) -> Self {
        Scalar::constant(ctx, rat_int(n))
    }

    /// The one element.
    pub fn one(ctx: &RingContext) -> Self {
        Scalar::int(ctx, 1)
    }

    /// The monomial `u^q`.
    pub fn u_pow(ctx: &RingContext, q: Rational) -> Self {
        Scalar::term(ctx, Rational::one(), 0, q)
    }

    /// The monomial `m^p`.
    pub fn m_pow(ctx: &RingContext, p: i64) -> Self {
        Scalar::term(ctx, Rational::one(), p, Rational::zero())
    }

    /// The ring context this value lives in.
    pub fn context(&self) -> &RingContext {
        &self.ctx
    }

    /// Whether this is the zero element.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates over terms as `(m_pow, u_pow, coeff)` in a canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational, &Rational)> {
        self.terms.iter().map(|((p, q), c)| (*p, q, c))
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn assert_same_ctx(&self, other: &Scalar) {
        assert!(
            self.ctx == other.ctx,
            "ring context mismatch: {:?} vs {:?}",
            self.ctx,
            other.ctx
        );
    }

    fn insert_term(&mut self, key: TermKey, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Sum of two ring elements.
    ///
    /// # Panics
    /// Panics if the operands live in different ring contexts.
    pub fn add(&self, other: &Scalar) -> Scalar {
        self.assert_same_ctx(other);
        let mut out = self.clone();
        for ((p, q), c) in &other.terms {
            out.insert_term((*p, q.clone()), c.clone());
        }
        out
    }

    /// Difference of two ring elements.
    ///
    /// # Panics
    /// Panics if the operands live in different ring contexts.
    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    /// Additive inverse.
    pub fn neg(&self) -> Scalar {
        let mut out = Scalar::zero(&self.ctx);
        for ((p, q), c) in &self.terms {
            out.terms.insert((*p, q.clone()), -c);
        }
        out
    }

    /// Product of two ring elements.
    ///
    /// # Panics
    /// Panics if the operands live in different ring contexts.
    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.assert_same_ctx(other);
        let mut out = Scalar::zero(&self.ctx);
        for ((p1, q1), c1) in &self.terms {
            for ((p2, q2), c2) in &other.terms {
                out.insert_term((p1 + p2, q1 + q2), c1 * c2);
            }
        }
        out
    }

    /// Product with a rational constant.
    pub fn scale(&self, r: &Rational) -> Scalar {
        if r.is_zero() {
            return Scalar::zero(&self.ctx);
        }
        let mut out = Scalar::zero(&self.ctx);
        for ((p, q), c) in &self.terms {
            out.terms.insert((*p, q.clone()), c * r);
        }
        out
    }

    /// Exact derivative in `t`.
    ///
    /// In an m-graded context each term `c · m^p · u^q` maps to
    /// `c q κ · m^{p+2} · u^{q−1}`; in an ungraded context the `m`-power is
    /// unchanged.
    pub fn ddt(&self) -> Scalar {
        let mut out = Scalar::zero(&self.ctx);
        let kappa = self.ctx.kappa.clone();
        if kappa.is_zero() {
            return out;
        }
        for ((p, q), c) in &self.terms {
            if q.is_zero() {
                continue;
            }
            let coeff = c * q * &kappa;
            let p2 = if self.ctx.m_graded { p + 2 } else { *p };
            out.insert_term((p2, q - Rational::one()), coeff);
        }
        out
    }

    /// Numeric value at rational `(m, t)`.
    ///
    /// # Errors
    /// Returns [`ScalarError::NonPositiveBase`] when `u(m, t) ≤ 0`, since
    /// fractional powers of `u` are only defined for positive base.
    pub fn eval(&self, m: &Rational, t: &Rational) -> Result<f64, ScalarError> {
        let u = self.ctx.base_at(m, t);
        if !u.is_positive() {
            return Err(ScalarError::NonPositiveBase {
                u: rational_to_string(&u),
                m: rational_to_string(m),
                t: rational_to_string(t),
            });
        }
        let mf = rational_to_f64(m);
        let uf = rational_to_f64(&u);
        let mut total = 0.0f64;
        for ((p, q), c) in &self.terms {
            let mut v = rational_to_f64(c);
            v *= mf.powi(*p as i32);
            v *= uf.powf(rational_to_f64(q));
            total += v;
        }
        Ok(total)
    }

    /// Exact rational value at rational `(m, t)`, available when every
    /// `u`-power is an integer (and `m`-powers are nonnegative or `m ≠ 0`).
    ///
    /// Returns `None` if some `u`-power is fractional, `u(m, t) = 0` with a
    /// negative power, or `m = 0` with a negative power.
    pub fn eval_rational(&self, m: &Rational, t: &Rational) -> Option<Rational> {
        let u = self.ctx.base_at(m, t);
        let mut total = Rational::zero();
        for ((p, q), c) in &self.terms {
            if !q.denom().is_one() {
                return None;
            }
            let qi = q.numer().to_i64()?;
            total += c * rational_int_pow(m, *p)? * rational_int_pow(&u, qi)?;
        }
        Some(total)
    }

    /// Views this value as a single term `(coeff, m_pow, u_pow)`.
    pub fn as_monomial(&self) -> Option<(&Rational, i64, &Rational)> {
        if self.terms.len() != 1 {
            return None;
        }
        let ((p, q), c) = self.terms.iter().next().unwrap();
        Some((c, *p, q))
    }

    /// Views this value as a plain rational (no `m` or `u` dependence).
    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        let (c, p, q) = self.as_monomial()?;
        if p == 0 && q.is_zero() {
            Some(c.clone())
        } else {
            None
        }
    }

    /// Exact quotient `self / divisor`, or `None` when the quotient does
    /// not exist in the ring.
    ///
    /// Monomial divisors divide termwise; multi-term divisors are handled
    /// by long division with respect to the term order on `(m_pow, u_pow)`.
    pub fn div_exact(&self, divisor: &Scalar) -> Option<Scalar> {
        self.assert_same_ctx(divisor);
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Scalar::zero(&self.ctx));
        }
        if let Some((dc, dp, dq)) = divisor.as_monomial() {
            let mut out = Scalar::zero(&self.ctx);
            for ((p, q), c) in &self.terms {
                out.terms.insert((p - dp, q - dq), c / dc);
            }
            return Some(out);
        }
        // Multi-term long division by the leading (largest) term key.
        let ((lp, lq), lc) = divisor.terms.iter().next_back().unwrap();
        let (lp, lq, lc) = (*lp, lq.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Scalar::zero(&self.ctx);
        // Each step strictly lowers the leading key of the remainder, and
        // keys live on a shifted lattice of bounded span, so this halts.
        let mut guard = self.terms.len() * divisor.terms.len() + 64;
        while !rem.is_zero() {
            let ((rp, rq), rc) = rem.terms.iter().next_back().unwrap();
            let step_key = (rp - lp, rq - &lq);
            let step_coeff = rc / &lc;
            let step = Scalar::term(&self.ctx, step_coeff, step_key.0, step_key.1);
            quot = quot.add(&step);
            rem = rem.sub(&step.mul(divisor));
            if guard == 0 {
                return None;
            }
            guard -= 1;
        }
        Some(quot)
    }

    /// Exact `n`-th root of a monomial with positive coefficient, taken
    /// termwise on powers: `(c · m^p · u^q)^{1/n}`.
    ///
    /// Returns `None` when the value is not a monomial with a rational
    /// `n`-th root of its coefficient or when `p` is not divisible by `n`
    /// (negative coefficients are allowed for odd `n`).
    pub fn monomial_nth_root(&self, n: u32) -> Option<Scalar> {
        assert!(n > 0, "root order must be positive");
        let (c, p, q) = self.as_monomial()?;
        if p % n as i64 != 0 {
            return None;
        }
        let root = rational_nth_root(c, n)?;
        Some(Scalar::term(
            &self.ctx,
            root,
            p / n as i64,
            q / Rational::from_integer(BigInt::from(n)),
        ))
    }

    /// Largest `u`-power among nonzero terms.
    pub fn max_u_pow(&self) -> Option<&Rational> {
        self.terms.keys().map(|(_, q)| q).max()
    }

    /// JSON value: a list of term quintuples
    /// `[coeff_num, coeff_den, m_pow, u_pow_num, u_pow_den]`.
    pub fn to_json(&self) -> serde_json::Value {
        let quintuples: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|((p, q), c)| {
                serde_json::json!([
                    c.numer().to_string(),
                    c.denom().to_string(),
                    p,
                    q.numer().to_string(),
                    q.denom().to_string(),
                ])
            })
            .collect();
        serde_json::Value::Array(quintuples)
    }
}

/// Exact integer power of a rational; `None` for `0^negative`.
fn rational_int_pow(base: &Rational, exp: i64) -> Option<Rational> {
    if exp == 0 {
        return Some(Rational::one());
    }
    if base.is_zero() {
        return if exp > 0 { Some(Rational::zero()) } else { None };
    }
    let mut out = Rational::one();
    for _ in 0..exp.unsigned_abs() {
        out *= base;
    }
    if exp < 0 {
        out = out.recip();
    }
    Some(out)
}

/// Exact rational `n`-th root, when it exists.
///
/// Negative inputs admit roots only for odd `n`.
pub fn rational_nth_root(value: &Rational, n: u32) -> Option<Rational> {
    assert!(n > 0, "root order must be positive");
    if value.is_zero() {
        return Some(Rational::zero());
    }
    if value.is_negative() && n % 2 == 0 {
        return None;
    }
    let num = bigint_nth_root_exact(&value.numer().abs(), n)?;
    let den = bigint_nth_root_exact(&value.denom().abs(), n)?;
    let mut root = Rational::new(num, den);
    if value.is_negative() {
        root = -root;
    }
    Some(root)
}

/// Exact `n`-th root of a nonnegative big integer, if it is a perfect power.
fn bigint_nth_root_exact(value: &BigInt, n: u32) -> Option<BigInt> {
    let root = value.nth_root(n);
    if num_traits::pow(root.clone(), n as usize) == *value {
        Some(root)
    } else {
        None
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // Highest powers first reads naturally for flow coefficients.
        for ((p, q), c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || (*p == 0 && q.is_zero()) {
                factors.push(rational_to_string(&mag));
            }
            if *p != 0 {
                factors.push(if *p == 1 { "m".to_string() } else { format!("m^{p}") });
            }
            if !q.is_zero() {
                // Braces keep negative and fractional exponents unambiguous.
                factors.push(if q.is_one() {
                    "u".to_string()
                } else if q.is_integer() && !q.is_negative() {
                    format!("u^{}", rational_to_string(q))
                } else {
                    format!("u^{{{}}}", rational_to_string(q))
                });
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
