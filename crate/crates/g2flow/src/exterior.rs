//! Exterior algebra on a seven-dimensional oriented inner-product space.
//!
//! Forms are sparse maps from strictly increasing multi-indices over
//! `{1, ..., 7}` to coefficients; the coefficient type is generic over the
//! [`Coefficient`] trait so the same combinatorics serves the exact ring
//! ([`crate::scalar::Scalar`]), floating point (`f64`) and ad-hoc symbolic
//! coefficient rings. The Hodge star uses the orientation `e^{1...7}` and an
//! orthonormal coframe: `∗e^I = sign(I, I^c) e^{I^c}`.
//!
//! The module also fixes the index pattern of the canonical G2 three-form
//! `φ = e^{127} + e^{347} + e^{567} + e^{135} − e^{146} − e^{236} − e^{245}`
//! and its dual four-form via [`EpsilonTable`].

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::{Rational, Scalar};

/// Ambient dimension.
pub const DIM: u8 = 7;

/// Errors produced by exterior algebra operations.
#[derive(Debug, Error)]
pub enum ExteriorError {
    /// Multi-index entries must be strictly increasing values in `1..=7`.
    #[error("invalid multi-index {0:?}: entries must be strictly increasing in 1..=7")]
    InvalidMultiIndex(Vec<u8>),
    /// Wedge product degrees exceeded the ambient dimension.
    #[error("degree overflow: {0} + {1} exceeds dimension 7")]
    DegreeOverflow(usize, usize),
    /// Interior product of a zero-form.
    #[error("interior product requires degree >= 1")]
    InteriorOfZeroForm,
    /// A term was inserted into a form of a different degree.
    #[error("degree mismatch: form has degree {form}, term has degree {term}")]
    DegreeMismatch { form: usize, term: usize },
}

/// A strictly increasing multi-index over `{1, ..., 7}`, including the
/// empty index (degree zero).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    len: u8,
    idx: [u8; 7],
}

impl MultiIndex {
    /// Builds a multi-index from strictly increasing entries in `1..=7`.
    ///
    /// # Errors
    /// Returns [`ExteriorError::InvalidMultiIndex`] if entries are out of
    /// range, repeated or out of order.
    pub fn new(indices: &[u8]) -> Result<Self, ExteriorError> {
        let invalid = || ExteriorError::InvalidMultiIndex(indices.to_vec());
        if indices.len() > DIM as usize {
            return Err(invalid());
        }
        let mut idx = [0u8; 7];
        let mut prev = 0u8;
        for (slot, &i) in indices.iter().enumerate() {
            if i < 1 || i > DIM || i <= prev {
                return Err(invalid());
            }
            idx[slot] = i;
            prev = i;
        }
        Ok(MultiIndex { len: indices.len() as u8, idx })
    }

    /// Sorts arbitrary distinct entries, returning the canonical index and
    /// the sign of the sorting permutation; `None` if an entry repeats.
    pub fn from_unsorted(indices: &[u8]) -> Option<(Self, i8)> {
        let mut v = indices.to_vec();
        let mut sign = 1i8;
        // Insertion sort, counting swaps; inputs have at most 7 entries.
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        for w in v.windows(2) {
            if w[0] == w[1] {
                return None;
            }
        }
        let mi = MultiIndex::new(&v).ok()?;
        Some((mi, sign))
    }

    /// The empty multi-index (degree zero).
    pub fn empty() -> Self {
        MultiIndex { len: 0, idx: [0; 7] }
    }

    /// Number of entries.
    pub fn degree(&self) -> usize {
        self.len as usize
    }

    /// The entries as a slice.
    pub fn indices(&self) -> &[u8] {
        &self.idx[..self.len as usize]
    }

    /// Whether `i` occurs in this index.
    pub fn contains(&self, i: u8) -> bool {
        self.indices().contains(&i)
    }

    /// Position of `i` within the index, if present (zero-based).
    pub fn position(&self, i: u8) -> Option<usize> {
        self.indices().iter().position(|&j| j == i)
    }

    /// The complementary index in `{1, ..., 7}`.
    pub fn complement(&self) -> MultiIndex {
        let mut idx = [0u8; 7];
        let mut len = 0u8;
        for i in 1..=DIM {
            if !self.contains(i) {
                idx[len as usize] = i;
                len += 1;
            }
        }
        MultiIndex { len, idx }
    }

    /// Index with `i` removed; `None` if `i` is absent.
    pub fn without(&self, i: u8) -> Option<MultiIndex> {
        let pos = self.position(i)?;
        let mut idx = [0u8; 7];
        let mut len = 0;
        for (slot, &j) in self.indices().iter().enumerate() {
            if slot != pos {
                idx[len] = j;
                len += 1;
            }
        }
        Some(MultiIndex { len: len as u8, idx })
    }

    /// Disjoint merge: the union index and the sign of the shuffle moving
    /// the concatenation `self, other` into increasing order. `None` when
    /// the indices overlap.
    pub fn merge(&self, other: &MultiIndex) -> Option<(MultiIndex, i8)> {
        let mut inversions = 0u32;
        for &a in self.indices() {
            for &b in other.indices() {
                if a == b {
                    return None;
                }
                if a > b {
                    inversions += 1;
                }
            }
        }
        let mut all: Vec<u8> = self.indices().to_vec();
        all.extend_from_slice(other.indices());
        all.sort_unstable();
        let merged = MultiIndex::new(&all).expect("disjoint sorted entries are valid");
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((merged, sign))
    }

    /// Sign `sign(I, I^c)` of the permutation `(I, I^c)` of `1..=7`.
    pub fn complement_sign(&self) -> i8 {
        let (_, sign) = self.merge(&self.complement()).expect("complement is disjoint");
        sign
    }

    /// All multi-indices of a given degree, in lexicographic order.
    pub fn all_of_degree(degree: usize) -> Vec<MultiIndex> {
        assert!(degree <= DIM as usize, "degree exceeds dimension");
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(degree);
        fn rec(start: u8, remaining: usize, current: &mut Vec<u8>, out: &mut Vec<MultiIndex>) {
            if remaining == 0 {
                out.push(MultiIndex::new(current).expect("generated index is valid"));
                return;
            }
            for i in start..=(DIM - remaining as u8 + 1) {
                current.push(i);
                rec(i + 1, remaining - 1, current, out);
                current.pop();
            }
        }
        rec(1, degree, &mut current, &mut out);
        out
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiIndex({})", self)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &i in self.indices() {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// Coefficient ring abstraction for [`Form`].
pub trait Coefficient: Clone + PartialEq + fmt::Debug + fmt::Display {
    /// Whether this coefficient is (exactly) zero.
    fn is_zero(&self) -> bool;
    /// Sum.
    fn add(&self, other: &Self) -> Self;
    /// Additive inverse.
    fn neg(&self) -> Self;
    /// Product.
    fn mul(&self, other: &Self) -> Self;
    /// Product with an exact rational.
    fn scale_rational(&self, r: &Rational) -> Self;
}

impl Coefficient for Scalar {
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Scalar::add(self, other)
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        Scalar::mul(self, other)
    }
    fn scale_rational(&self, r: &Rational) -> Self {
        Scalar::scale(self, r)
    }
}

impl Coefficient for f64 {
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale_rational(&self, r: &Rational) -> Self {
        self * crate::scalar::rational_to_f64(r)
    }
}

/// A differential form of fixed degree with sparse coefficients.
///
/// Zero coefficients are never stored, so structural equality is exact
/// equality of forms over exact coefficient rings.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<C: Coefficient = Scalar> {
    degree: usize,
    coeffs: BTreeMap<MultiIndex, C>,
}

impl<C: Coefficient> Form<C> {
    /// The zero form of the given degree.
    pub fn zero(degree: usize) -> Self {
        assert!(degree <= DIM as usize, "degree exceeds dimension");
        Form { degree, coeffs: BTreeMap::new() }
    }

    /// Builds a form from `(index, coefficient)` terms, accumulating
    /// repeated indices and pruning zeros.
    ///
    /// # Errors
    /// Returns [`ExteriorError::DegreeMismatch`] when a term's index degree
    /// differs from `degree`.
    pub fn from_terms(
        degree: usize,
        terms: impl IntoIterator<Item = (MultiIndex, C)>,
    ) -> Result<Self, ExteriorError> {
        let mut form = Form::zero(degree);
        for (idx, c) in terms {
            if idx.degree() != degree {
                return Err(ExteriorError::DegreeMismatch { form: degree, term: idx.degree() });
            }
            form.accumulate(idx, c);
        }
        Ok(form)
    }

    /// Adds `c` to the coefficient at `idx`, pruning zeros.
    ///
    /// # Panics
    /// Panics if the index degree differs from the form degree.
    pub fn accumulate(&mut self, idx: MultiIndex, c: C) {
        assert!(idx.degree() == self.degree, "term degree must match form degree");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(idx) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// The degree of the form.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Whether all coefficients vanish.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at a multi-index, if nonzero.
    pub fn coeff(&self, idx: &MultiIndex) -> Option<&C> {
        self.coeffs.get(idx)
    }

    /// Iterates over nonzero terms in canonical index order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C)> {
        self.coeffs.iter()
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    /// Sum of two forms.
    ///
    /// # Panics
    /// Panics if the degrees differ.
    pub fn add(&self, other: &Form<C>) -> Form<C> {
        assert!(self.degree == other.degree, "cannot add forms of different degree");
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.accumulate(*idx, c.clone());
        }
        out
    }

    /// Difference of two forms.
    ///
    /// # Panics
    /// Panics if the degrees differ.
    pub fn sub(&self, other: &Form<C>) -> Form<C> {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Form<C> {
        let mut out = Form::zero(self.degree);
        for (idx, c) in &self.coeffs {
            out.coeffs.insert(*idx, c.neg());
        }
        out
    }

    /// Coefficient-wise product with a ring element.
    pub fn scale(&self, c: &C) -> Form<C> {
        let mut out = Form::zero(self.degree);
        for (idx, v) in &self.coeffs {
            let prod = v.mul(c);
            if !prod.is_zero() {
                out.coeffs.insert(*idx, prod);
            }
        }
        out
    }

    /// Coefficient-wise product with an exact rational.
    pub fn scale_rational(&self, r: &Rational) -> Form<C> {
        let mut out = Form::zero(self.degree);
        for (idx, v) in &self.coeffs {
            let prod = v.scale_rational(r);
            if !prod.is_zero() {
                out.coeffs.insert(*idx, prod);
            }
        }
        out
    }

    /// Wedge product.
    ///
    /// # Errors
    /// Returns [`ExteriorError::DegreeOverflow`] when the degrees sum past
    /// the ambient dimension.
    pub fn wedge(&self, other: &Form<C>) -> Result<Form<C>, ExteriorError> {
        let degree = self.degree + other.degree;
        if degree > DIM as usize {
            return Err(ExteriorError::DegreeOverflow(self.degree, other.degree));
        }
        let mut out = Form::zero(degree);
        for (i1, c1) in &self.coeffs {
            for (i2, c2) in &other.coeffs {
                if let Some((merged, sign)) = i1.merge(i2) {
                    let mut c = c1.mul(c2);
                    if sign < 0 {
                        c = c.neg();
                    }
                    out.accumulate(merged, c);
                }
            }
        }
        Ok(out)
    }

    /// Hodge star for the orientation `e^{1...7}` in an orthonormal
    /// coframe: `∗e^I = sign(I, I^c) e^{I^c}` extended linearly.
    pub fn hodge_star(&self) -> Form<C> {
        let mut out = Form::zero(DIM as usize - self.degree);
        for (idx, c) in &self.coeffs {
            let sign = idx.complement_sign();
            let coeff = if sign < 0 { c.neg() } else { c.clone() };
            out.coeffs.insert(idx.complement(), coeff);
        }
        out
    }

    /// Interior product with the `i`-th orthonormal frame vector:
    /// `ι_i e^I = (−1)^pos e^{I \ i}` when `i` is the `pos`-th entry of `I`
    /// (zero-based), zero when `i ∉ I`.
    ///
    /// # Errors
    /// Returns [`ExteriorError::InteriorOfZeroForm`] on degree zero.
    pub fn interior(&self, i: u8) -> Result<Form<C>, ExteriorError> {
        if self.degree == 0 {
            return Err(ExteriorError::InteriorOfZeroForm);
        }
        let mut out = Form::zero(self.degree - 1);
        for (idx, c) in &self.coeffs {
            if let Some(pos) = idx.position(i) {
                let rest = idx.without(i).expect("position implies membership");
                let coeff = if pos % 2 == 1 { c.neg() } else { c.clone() };
                out.accumulate(rest, coeff);
            }
        }
        Ok(out)
    }

    /// Antisymmetric evaluation on a tuple of frame indices: the value of
    /// the form on `(x_{i_1}, ..., x_{i_k})`. Returns `None` when the value
    /// is zero (repeated index or absent index set).
    pub fn eval_on(&self, indices: &[u8]) -> Option<C> {
        if indices.len() != self.degree {
            return None;
        }
        let (idx, sign) = MultiIndex::from_unsorted(indices)?;
        let c = self.coeffs.get(&idx)?;
        Some(if sign < 0 { c.neg() } else { c.clone() })
    }

    /// Applies a coefficient map, pruning zeros (e.g. exact-to-float).
    pub fn map_coeffs<D: Coefficient>(&self, mut f: impl FnMut(&C) -> D) -> Form<D> {
        let mut out = Form::zero(self.degree);
        for (idx, c) in &self.coeffs {
            let v = f(c);
            if !v.is_zero() {
                out.coeffs.insert(*idx, v);
            }
        }
        out
    }

    /// Renders with the given coframe symbol, e.g. `x` giving
    /// `x^{127} - 9*x^{135}`. Terms follow the canonical index order.
    pub fn display_with(&self, symbol: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (n, (idx, c)) in self.coeffs.iter().enumerate() {
            let token = format!("{c}");
            let (sign, mag) = match token.strip_prefix('-') {
                // Only treat a leading '-' on a single-term coefficient as
                // a movable sign; sums keep their own signs and parens.
                Some(rest) if !rest.contains(" + ") && !rest.contains(" - ") => ("-", rest.to_string()),
                _ => ("+", token),
            };
            let needs_parens = mag.contains(" + ") || mag.contains(" - ");
            if n == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            if mag == "1" {
                // Unit coefficient: omit.
            } else if needs_parens {
                out.push_str(&format!("({mag})*"));
            } else {
                out.push_str(&format!("{mag}*"));
            }
            out.push_str(&format!("{symbol}^{{{idx}}}"));
        }
        out
    }
}

impl<C: Coefficient> fmt::Display for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("e"))
    }
}

/// Index patterns and signs of the canonical G2 three-form and four-form.
///
/// The three-form is `φ = Σ ε(i,j,k) e^{ijk}` over the seven triples below;
/// the four-form is its Hodge dual `ψ = ∗φ = Σ ε(l,m,n,o) e^{lmno}`.
pub struct EpsilonTable {
    eps3: BTreeMap<MultiIndex, i8>,
    eps4: BTreeMap<MultiIndex, i8>,
}

/// Triples of `φ` carrying coefficient `+1`.
pub const PHI_PLUS_TRIPLES: [[u8; 3]; 4] = [[1, 2, 7], [1, 3, 5], [3, 4, 7], [5, 6, 7]];
/// Triples of `φ` carrying coefficient `−1`.
pub const PHI_MINUS_TRIPLES: [[u8; 3]; 3] = [[1, 4, 6], [2, 3, 6], [2, 4, 5]];

impl EpsilonTable {
    /// Builds the sign tables; the four-form signs are derived from the
    /// three-form pattern via the Hodge star.
    pub fn new() -> Self {
        let mut eps3 = BTreeMap::new();
        for t in PHI_PLUS_TRIPLES {
            eps3.insert(MultiIndex::new(&t).unwrap(), 1i8);
        }
        for t in PHI_MINUS_TRIPLES {
            eps3.insert(MultiIndex::new(&t).unwrap(), -1i8);
        }
        let mut eps4 = BTreeMap::new();
        for (idx, &s3) in &eps3 {
            let sign = s3 * idx.complement_sign();
            eps4.insert(idx.complement(), sign);
        }
        EpsilonTable { eps3, eps4 }
    }

    /// Sign of a triple in the three-form pattern, if present.
    pub fn eps3(&self, idx: &MultiIndex) -> Option<i8> {
        self.eps3.get(idx).copied()
    }

    /// Sign of a quadruple in the four-form pattern, if present.
    pub fn eps4(&self, idx: &MultiIndex) -> Option<i8> {
        self.eps4.get(idx).copied()
    }

    /// The seven triples of the three-form pattern in canonical order.
    pub fn triples(&self) -> impl Iterator<Item = (&MultiIndex, i8)> {
        self.eps3.iter().map(|(i, s)| (i, *s))
    }

    /// The seven quadruples of the four-form pattern in canonical order.
    pub fn quadruples(&self) -> impl Iterator<Item = (&MultiIndex, i8)> {
        self.eps4.iter().map(|(i, s)| (i, *s))
    }
}

impl Default for EpsilonTable {
    fn default() -> Self {
        EpsilonTable::new()
    }
}
