//! The complex Clifford algebra `C_m` with `e_i e_j + e_j e_i = −2δ_ij`, its main
//! antiinvolution, and a spinor space realized as a minimal left ideal `C_m·I`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{FischerError, Result};
use crate::exactla::matrix::{RowSpace, SparseVec};
use crate::scalar::{ExactScalar, Rational};

/// Largest supported `m`; blades are stored as `u32` bitmasks.
pub const MAX_DIMENSION: usize = 16;

/// A basis blade `e_{i_1}···e_{i_r}` with `i_1 < … < i_r`, stored as a bitmask
/// (bit `i − 1` set for `e_i`). The empty set is the scalar blade.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BladeIndex(pub u32);

impl BladeIndex {
    pub const SCALAR: BladeIndex = BladeIndex(0);

    pub fn generator(i: usize) -> Self {
        debug_assert!(i >= 1);
        BladeIndex(1 << (i - 1))
    }

    /// From 1-based generator indices, any order, no repeats.
    pub fn from_indices(indices: &[usize], m: usize) -> Result<Self> {
        let mut bits = 0u32;
        for &i in indices {
            if i == 0 || i > m {
                return Err(FischerError::IndexOutOfRange { index: i, bound: m });
            }
            if bits & (1 << (i - 1)) != 0 {
                return Err(FischerError::Parse {
                    position: String::new(),
                    message: format!("repeated generator {i} in blade"),
                });
            }
            bits |= 1 << (i - 1);
        }
        Ok(BladeIndex(bits))
    }

    pub fn indices(self) -> Vec<usize> {
        (0..32)
            .filter(|b| self.0 & (1 << b) != 0)
            .map(|b| b + 1)
            .collect()
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    pub fn max_index(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }
}

impl fmt::Display for BladeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        for i in self.indices() {
            write!(f, "e{i}")?;
        }
        Ok(())
    }
}

/// Sign and blade of `e_a·e_b`: `true` means the product carries a factor `−1`.
#[inline]
pub(crate) fn blade_product(a: u32, b: u32) -> (bool, u32) {
    // Transpositions needed to sort: pairs (i in a, j in b) with i > j.
    let mut swaps = 0u32;
    let mut shifted = a >> 1;
    while shifted != 0 {
        swaps += (shifted & b).count_ones();
        shifted >>= 1;
    }
    // Each repeated generator contributes e_i² = −1.
    let negative = (swaps + (a & b).count_ones()) % 2 == 1;
    (negative, a ^ b)
}

/// Normal-ordered product of two blades in `C_m`; the coefficient is `±1`.
pub fn blade_mul(a: BladeIndex, b: BladeIndex, m: usize) -> Result<(ExactScalar, BladeIndex)> {
    for blade in [a, b] {
        if blade.max_index() > m {
            return Err(FischerError::IndexOutOfRange {
                index: blade.max_index(),
                bound: m,
            });
        }
    }
    let (neg, bits) = blade_product(a.0, b.0);
    Ok((
        ExactScalar::from_int(if neg { -1 } else { 1 }),
        BladeIndex(bits),
    ))
}

/// A finite sum of blades with Gaussian-rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CliffordElement {
    m: usize,
    terms: BTreeMap<BladeIndex, ExactScalar>,
}

impl CliffordElement {
    pub fn zero(m: usize) -> Self {
        assert!(m <= MAX_DIMENSION, "dimension {m} exceeds {MAX_DIMENSION}");
        CliffordElement {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(m: usize, c: ExactScalar) -> Self {
        CliffordElement::blade(m, BladeIndex::SCALAR, c)
    }

    pub fn one(m: usize) -> Self {
        CliffordElement::scalar(m, ExactScalar::one())
    }

    pub fn blade(m: usize, blade: BladeIndex, c: ExactScalar) -> Self {
        assert!(blade.max_index() <= m, "blade {blade} outside C_{m}");
        let mut out = CliffordElement::zero(m);
        if !c.is_zero() {
            out.terms.insert(blade, c);
        }
        out
    }

    /// The generator `e_i`, 1-based.
    pub fn basis_vector(m: usize, i: usize) -> Result<Self> {
        if i == 0 || i > m {
            return Err(FischerError::IndexOutOfRange { index: i, bound: m });
        }
        Ok(CliffordElement::blade(
            m,
            BladeIndex::generator(i),
            ExactScalar::one(),
        ))
    }

    pub fn from_terms(
        m: usize,
        terms: impl IntoIterator<Item = (BladeIndex, ExactScalar)>,
    ) -> Result<Self> {
        let mut out = CliffordElement::zero(m);
        for (b, c) in terms {
            if b.max_index() > m {
                return Err(FischerError::IndexOutOfRange {
                    index: b.max_index(),
                    bound: m,
                });
            }
            out.add_term(b, &c);
        }
        Ok(out)
    }

    pub fn dimension(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BladeIndex, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, blade: BladeIndex) -> ExactScalar {
        self.terms.get(&blade).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, blade: BladeIndex, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&blade) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&blade);
                }
            }
            None => {
                self.terms.insert(blade, c.clone());
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(FischerError::DimensionMismatch(format!(
                "C_{} vs C_{}",
                self.m, other.m
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CliffordElement {
            m: self.m,
            terms: self.terms.iter().map(|(b, c)| (*b, -c)).collect(),
        }
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        if s.is_zero() {
            return CliffordElement::zero(self.m);
        }
        CliffordElement {
            m: self.m,
            terms: self.terms.iter().map(|(b, c)| (*b, c * s)).collect(),
        }
    }

    /// Accumulates `s·self` into `acc`.
    pub(crate) fn add_scaled_into(&self, s: &ExactScalar, acc: &mut Self) {
        for (b, c) in &self.terms {
            acc.add_term(*b, &(c * s));
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = CliffordElement::zero(self.m);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let (neg, bits) = blade_product(a.0, b.0);
                let p = x * y;
                out.add_term(BladeIndex(bits), &if neg { -p } else { p });
            }
        }
        Ok(out)
    }

    /// `e_i·self`, 1-based `i ≤ m`.
    pub fn left_mul_generator(&self, i: usize) -> Self {
        debug_assert!(i >= 1 && i <= self.m);
        let g = 1u32 << (i - 1);
        CliffordElement {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(b, c)| {
                    let (neg, bits) = blade_product(g, b.0);
                    (BladeIndex(bits), if neg { -c } else { c.clone() })
                })
                .collect(),
        }
    }

    /// Main antiinvolution: `bar(e_i) = −e_i`, `bar(ab) = bar(b)bar(a)`, complex
    /// conjugation on scalars. A grade-`r` blade picks up `(−1)^{r(r+1)/2}`.
    pub fn antiinvolution(&self) -> Self {
        CliffordElement {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|(b, c)| {
                    let r = b.grade();
                    let c = c.conj();
                    (*b, if (r * (r + 1) / 2) % 2 == 1 { -c } else { c })
                })
                .collect(),
        }
    }

    /// Full complex coefficient of the scalar blade.
    pub fn scalar_part(&self) -> ExactScalar {
        self.coefficient(BladeIndex::SCALAR)
    }

    /// Coordinates over blades, indexed by bitmask.
    pub fn to_sparse(&self) -> SparseVec {
        SparseVec::from_entries(
            self.terms
                .iter()
                .map(|(b, c)| (b.0 as usize, c.clone()))
                .collect(),
        )
    }

    pub fn from_sparse(m: usize, v: &SparseVec) -> Self {
        CliffordElement {
            m,
            terms: v
                .iter()
                .map(|(i, c)| (BladeIndex(*i as u32), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| format!("{c:?}·{b}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Serialized blade term: `{blade: [sorted indices], re: "p/q", im: "p/q"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BladeTerm {
    pub blade: Vec<usize>,
    pub re: String,
    pub im: String,
}

impl CliffordElement {
    pub fn to_terms(&self) -> Vec<BladeTerm> {
        self.terms
            .iter()
            .map(|(b, c)| BladeTerm {
                blade: b.indices(),
                re: c.re.to_string(),
                im: c.im.to_string(),
            })
            .collect()
    }

    pub fn from_blade_terms(m: usize, terms: &[BladeTerm]) -> Result<Self> {
        let mut out = CliffordElement::zero(m);
        for t in terms {
            if t.blade.windows(2).any(|w| w[0] >= w[1]) {
                return Err(FischerError::Parse {
                    position: String::new(),
                    message: format!("blade indices {:?} must be strictly increasing", t.blade),
                });
            }
            let b = BladeIndex::from_indices(&t.blade, m)?;
            let re: Rational = t.re.parse()?;
            let im: Rational = t.im.parse()?;
            out.add_term(b, &ExactScalar::new(re, im));
        }
        Ok(out)
    }
}

/// Chirality of a spinor basis element for even `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chirality {
    Plus,
    Minus,
}

/// Spinor space realized as the left ideal `C_m·I` of a primitive idempotent `I`.
#[derive(Clone, Debug)]
pub struct SpinorFrame {
    m: usize,
    n: usize,
    idempotent: CliffordElement,
    basis: Vec<CliffordElement>,
    /// Row space of the basis over blade coordinates, with transform for coordinates.
    span: RowSpace,
    /// `gamma[i − 1]` is left multiplication by `e_i` on spinor coordinates, as columns:
    /// `gamma[i − 1][s]` holds the coordinates of `e_i·b_s`.
    gamma: Vec<Vec<SparseVec>>,
    /// `[bar(b_s)·b_t]_0`.
    gram: Vec<Vec<ExactScalar>>,
    /// Weight `(±½,…,±½)` of each basis element under the Cartan elements
    /// `(i/2)·e_{2j−1}e_{2j}`, stored as signs.
    weights: Vec<Vec<i8>>,
}

impl SpinorFrame {
    /// Builds `I = ∏_j (1 + i·e_{2j−1}e_{2j})/2`, times `(1 + c·e_1···e_m)/2` for odd `m`, and
    /// the basis `e_S·I` for `S ⊆ {e_1, e_3, …, e_{2n−1}}`. Every structural property is
    /// verified exactly before returning.
    pub fn build(m: usize) -> Result<Self> {
        if m <= 2 {
            return Err(FischerError::Unsupported(format!(
                "spinor frame needs m > 2, got m = {m}"
            )));
        }
        if m > MAX_DIMENSION {
            return Err(FischerError::Unsupported(format!(
                "m = {m} exceeds {MAX_DIMENSION}"
            )));
        }
        let n = m / 2;
        let half = ExactScalar::from_ratio(1, 2);
        let mut idem = CliffordElement::one(m);
        for j in 1..=n {
            let pair = BladeIndex((1 << (2 * j - 2)) | (1 << (2 * j - 1)));
            let factor = CliffordElement::from_terms(
                m,
                [
                    (BladeIndex::SCALAR, half.clone()),
                    (
                        pair,
                        ExactScalar::new(Rational::zero(), Rational::new(1, 2)),
                    ),
                ],
            )?;
            idem = idem.mul(&factor)?;
        }
        if m % 2 == 1 {
            let omega = CliffordElement::blade(m, BladeIndex((1u32 << m) - 1), ExactScalar::one());
            let square = omega.mul(&omega)?.scalar_part();
            // (c·ω)² = 1 makes (1 + c·ω)/2 a central idempotent.
            let c = if square.is_one() {
                ExactScalar::one()
            } else {
                ExactScalar::i()
            };
            let central = CliffordElement::one(m).add(&omega.scale(&c))?.scale(&half);
            idem = idem.mul(&central)?;
        }
        if idem.mul(&idem)? != idem || idem.is_zero() {
            return Err(FischerError::Verification(
                "spinor idempotent is not idempotent".into(),
            ));
        }

        let mut basis = Vec::with_capacity(1 << n);
        let mut weights = Vec::with_capacity(1 << n);
        for s in 0..(1usize << n) {
            let mut elem = idem.clone();
            let mut w = vec![1i8; n];
            for j in (0..n).rev() {
                if s & (1 << j) != 0 {
                    elem = elem.left_mul_generator(2 * j + 1);
                    w[j] = -1;
                }
            }
            basis.push(elem);
            weights.push(w);
        }

        let cols = 1usize << m;
        let span = RowSpace::from_rows(basis.iter().map(CliffordElement::to_sparse), cols, true);
        if span.rank() != basis.len() {
            return Err(FischerError::Verification(format!(
                "spinor basis has rank {} instead of {}",
                span.rank(),
                basis.len()
            )));
        }

        let mut gamma = Vec::with_capacity(m);
        for i in 1..=m {
            let mut cols_i = Vec::with_capacity(basis.len());
            for b in &basis {
                let image = b.left_mul_generator(i);
                let coords = span.coordinates(&image.to_sparse()).ok_or_else(|| {
                    FischerError::Verification(format!("left ideal not closed under e_{i}"))
                })?;
                cols_i.push(coords);
            }
            gamma.push(cols_i);
        }

        let bars: Vec<CliffordElement> =
            basis.iter().map(CliffordElement::antiinvolution).collect();
        let mut gram = vec![vec![ExactScalar::zero(); basis.len()]; basis.len()];
        for (s, bs) in bars.iter().enumerate() {
            for (t, bt) in basis.iter().enumerate() {
                gram[s][t] = bs.mul(bt)?.scalar_part();
            }
        }

        let frame = SpinorFrame {
            m,
            n,
            idempotent: idem,
            basis,
            span,
            gamma,
            gram,
            weights,
        };
        frame.check_weights()?;
        Ok(frame)
    }

    fn check_weights(&self) -> Result<()> {
        for j in 0..self.n {
            let pair = BladeIndex((1 << (2 * j)) | (1 << (2 * j + 1)));
            let cartan = CliffordElement::blade(
                self.m,
                pair,
                ExactScalar::new(Rational::zero(), Rational::new(1, 2)),
            );
            for (b, w) in self.basis.iter().zip(&self.weights) {
                let expected = b.scale(&ExactScalar::from_ratio(w[j] as i64, 2));
                if cartan.mul(b)? != expected {
                    return Err(FischerError::Verification(format!(
                        "spinor weight mismatch in pair {}",
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn idempotent(&self) -> &CliffordElement {
        &self.idempotent
    }

    pub fn basis(&self) -> &[CliffordElement] {
        &self.basis
    }

    pub fn gamma(&self, i: usize) -> &[SparseVec] {
        &self.gamma[i - 1]
    }

    pub fn gram(&self) -> &[Vec<ExactScalar>] {
        &self.gram
    }

    /// Weights of the basis elements as multiples of `½`.
    pub fn weights(&self) -> &[Vec<i8>] {
        &self.weights
    }

    /// For even `m`: `Plus` when the weight has an even number of `−½` entries.
    pub fn chirality(&self, s: usize) -> Option<Chirality> {
        if self.m % 2 == 1 {
            return None;
        }
        let minus = self.weights[s].iter().filter(|&&w| w < 0).count();
        Some(if minus % 2 == 0 {
            Chirality::Plus
        } else {
            Chirality::Minus
        })
    }

    pub fn contains(&self, x: &CliffordElement) -> bool {
        x.dimension() == self.m && self.span.contains(&x.to_sparse())
    }

    /// Coordinates of an ideal element in the frame basis.
    pub fn coordinates(&self, x: &CliffordElement) -> Result<SparseVec> {
        if x.dimension() != self.m {
            return Err(FischerError::DimensionMismatch(format!(
                "C_{} vs C_{}",
                x.dimension(),
                self.m
            )));
        }
        self.span
            .coordinates(&x.to_sparse())
            .ok_or(FischerError::NotInIdeal)
    }

    pub fn element(&self, coords: &SparseVec) -> CliffordElement {
        let mut out = CliffordElement::zero(self.m);
        for (s, c) in coords.iter() {
            self.basis[*s].add_scaled_into(c, &mut out);
        }
        out
    }
}

pub fn build_spinor_frame(m: usize) -> Result<SpinorFrame> {
    SpinorFrame::build(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(m: usize, idx: &[usize]) -> CliffordElement {
        CliffordElement::blade(
            m,
            BladeIndex::from_indices(idx, m).unwrap(),
            ExactScalar::one(),
        )
    }

    #[test]
    fn blade_products() {
        let one = ExactScalar::one();
        let minus = -ExactScalar::one();
        let b = |idx: &[usize]| BladeIndex::from_indices(idx, 3).unwrap();
        assert_eq!(
            blade_mul(b(&[1]), b(&[1]), 3).unwrap(),
            (minus.clone(), BladeIndex::SCALAR)
        );
        assert_eq!(blade_mul(b(&[1]), b(&[2]), 3).unwrap(), (one, b(&[1, 2])));
        assert_eq!(blade_mul(b(&[1, 2]), b(&[2]), 3).unwrap(), (minus, b(&[1])));
        assert!(blade_mul(b(&[1]), BladeIndex::generator(4), 3).is_err());
    }

    #[test]
    fn anticommutation_exhaustive() {
        for m in 1..=6 {
            for i in 1..=m {
                for j in 1..=m {
                    let (ei, ej) = (e(m, &[i]), e(m, &[j]));
                    let s = ei.mul(&ej).unwrap().add(&ej.mul(&ei).unwrap()).unwrap();
                    let expected = if i == j {
                        CliffordElement::scalar(m, ExactScalar::from_int(-2))
                    } else {
                        CliffordElement::zero(m)
                    };
                    assert_eq!(s, expected, "m={m} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn products_and_idempotent() {
        let m = 2;
        let v = e(m, &[1]).add(&e(m, &[2])).unwrap();
        assert_eq!(
            v.mul(&v).unwrap(),
            CliffordElement::scalar(m, ExactScalar::from_int(-2))
        );
        let one = CliffordElement::one(m);
        assert_eq!(one.mul(&v).unwrap(), v);
        let p = CliffordElement::from_terms(
            m,
            [
                (BladeIndex::SCALAR, ExactScalar::from_ratio(1, 2)),
                (
                    BladeIndex(3),
                    ExactScalar::new(Rational::zero(), Rational::new(1, 2)),
                ),
            ],
        )
        .unwrap();
        assert_eq!(p.mul(&p).unwrap(), p);
        assert!(e(2, &[1]).mul(&e(3, &[1])).is_err());
    }

    #[test]
    fn antiinvolution_examples() {
        assert_eq!(e(3, &[1]).antiinvolution(), e(3, &[1]).neg());
        assert_eq!(e(3, &[1, 2]).antiinvolution(), e(3, &[1, 2]).neg());
        let i = CliffordElement::scalar(3, ExactScalar::i());
        assert_eq!(
            i.antiinvolution(),
            CliffordElement::scalar(3, -ExactScalar::i())
        );
        assert_eq!(e(3, &[1, 2, 3]).antiinvolution(), e(3, &[1, 2, 3]));
    }

    #[test]
    fn scalar_part_examples() {
        assert!(e(3, &[1]).scalar_part().is_zero());
        let x = CliffordElement::scalar(3, ExactScalar::from_int(3))
            .add(&e(3, &[1, 2]))
            .unwrap();
        assert_eq!(x.scalar_part(), ExactScalar::from_int(3));
        let y = e(3, &[1]).antiinvolution().mul(&e(3, &[1])).unwrap();
        assert_eq!(y.scalar_part(), ExactScalar::one());
    }

    #[test]
    fn frame_dimensions() {
        for (m, dim) in [(3, 2), (4, 4), (5, 4), (6, 8), (7, 8)] {
            let f = SpinorFrame::build(m).unwrap();
            assert_eq!(f.dim(), dim, "m={m}");
            let i = f.idempotent();
            assert_eq!(i.mul(i).unwrap(), *i);
        }
        assert!(SpinorFrame::build(2).is_err());
    }

    #[test]
    fn frame_gram_is_positive_diagonal() {
        for m in 3..=6 {
            let f = SpinorFrame::build(m).unwrap();
            for (s, row) in f.gram().iter().enumerate() {
                for (t, g) in row.iter().enumerate() {
                    if s == t {
                        assert!(g.is_real() && g.re.is_positive());
                    } else {
                        assert!(g.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn chirality_classes_are_pseudoscalar_eigenspaces() {
        let m = 6;
        let f = SpinorFrame::build(m).unwrap();
        let omega = CliffordElement::blade(m, BladeIndex((1 << m) - 1), ExactScalar::one());
        let mut eig = std::collections::HashMap::new();
        for (s, b) in f.basis().iter().enumerate() {
            let image = omega.mul(b).unwrap();
            let c = f.coordinates(&image).unwrap();
            assert_eq!(c.nnz(), 1);
            let value = c.get(s).unwrap().clone();
            let prev = eig.entry(f.chirality(s).unwrap()).or_insert(value.clone());
            assert_eq!(*prev, value);
        }
        assert_eq!(eig.len(), 2);
    }
}
