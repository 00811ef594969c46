//! Sparse polynomials in the `m×k` variables `x_{ij}` with Clifford coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::clifford::{BladeTerm, CliffordElement, SpinorFrame};
use crate::error::{FischerError, Result};
use crate::scalar::{ExactScalar, Rational};

/// Exponent matrix `α ∈ N_0^{m×k}`, flattened column by column: the entry for `x_{ij}`
/// (1-based) sits at `(j − 1)·m + (i − 1)`, so each variable column is contiguous.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiExponent(SmallVec<[u16; 24]>);

impl MultiExponent {
    pub fn zeros(m: usize, k: usize) -> Self {
        MultiExponent(SmallVec::from_elem(0, m * k))
    }

    pub fn from_flat(entries: &[u16]) -> Self {
        MultiExponent(SmallVec::from_slice(entries))
    }

    /// From an `m×k` matrix given as `m` rows of `k` entries.
    pub fn from_matrix(rows: &[Vec<u16>]) -> Self {
        let m = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        let mut e = MultiExponent::zeros(m, k);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                e.0[j * m + i] = v;
            }
        }
        e
    }

    pub fn to_matrix(&self, m: usize, k: usize) -> Vec<Vec<u16>> {
        (0..m)
            .map(|i| (0..k).map(|j| self.0[j * m + i]).collect())
            .collect()
    }

    pub fn flat(&self) -> &[u16] {
        &self.0
    }

    /// Exponent of `x_{ij}`, 0-based indices.
    #[inline]
    pub fn get(&self, i: usize, j: usize, m: usize) -> u16 {
        self.0[j * m + i]
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&v| v as u32).sum()
    }

    pub fn multidegree(&self, m: usize) -> Vec<u32> {
        self.0
            .chunks(m)
            .map(|col| col.iter().map(|&v| v as u32).sum())
            .collect()
    }

    /// `α!` as an exact rational.
    pub fn factorial(&self) -> Rational {
        let mut acc: u64 = 1;
        let mut big: Option<BigInt> = None;
        for &a in self.0.iter() {
            for f in 2..=a as u64 {
                match big.as_mut() {
                    Some(b) => *b *= f,
                    None => match acc.checked_mul(f) {
                        Some(v) => acc = v,
                        None => big = Some(BigInt::from(acc) * f),
                    },
                }
            }
        }
        match big {
            Some(b) => Rational::from_big(num_rational::BigRational::from_integer(b)),
            None => Rational::from_big(num_rational::BigRational::from_integer(BigInt::from(acc))),
        }
    }

    /// Adds `delta` to the flat entry `idx`; `None` if it would go negative.
    #[inline]
    pub(crate) fn shifted(&self, idx: usize, delta: i32) -> Option<MultiExponent> {
        let v = self.0[idx] as i32 + delta;
        if v < 0 {
            return None;
        }
        let mut out = self.clone();
        out.0[idx] = v as u16;
        Some(out)
    }
}

impl fmt::Debug for MultiExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// Selector for a graded piece: total degree `ℓ` or multidegree `a ∈ N_0^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GradedSlice {
    Total(u32),
    Multi(Vec<u32>),
}

impl GradedSlice {
    pub fn matches(&self, e: &MultiExponent, m: usize) -> bool {
        match self {
            GradedSlice::Total(l) => e.total_degree() == *l,
            GradedSlice::Multi(a) => e.multidegree(m) == *a,
        }
    }

    pub fn total_degree(&self) -> u32 {
        match self {
            GradedSlice::Total(l) => *l,
            GradedSlice::Multi(a) => a.iter().sum(),
        }
    }
}

impl fmt::Display for GradedSlice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradedSlice::Total(l) => write!(f, "degree {l}"),
            GradedSlice::Multi(a) => write!(f, "multidegree {a:?}"),
        }
    }
}

/// A polynomial `Σ_α c_α x^α` with `c_α ∈ C_m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ClPoly {
    m: usize,
    k: usize,
    terms: BTreeMap<MultiExponent, CliffordElement>,
}

impl ClPoly {
    pub fn zero(m: usize, k: usize) -> Self {
        ClPoly {
            m,
            k,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(m: usize, k: usize, c: CliffordElement) -> Self {
        ClPoly::monomial(m, k, MultiExponent::zeros(m, k), c)
    }

    pub fn monomial(m: usize, k: usize, exp: MultiExponent, c: CliffordElement) -> Self {
        assert_eq!(exp.0.len(), m * k, "exponent shape");
        assert_eq!(c.dimension(), m, "coefficient dimension");
        let mut p = ClPoly::zero(m, k);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// The scalar variable `x_{ij}`, 1-based.
    pub fn variable(m: usize, k: usize, i: usize, j: usize) -> Result<Self> {
        check_index(i, m)?;
        check_index(j, k)?;
        let mut e = MultiExponent::zeros(m, k);
        e.0[(j - 1) * m + (i - 1)] = 1;
        Ok(ClPoly::monomial(m, k, e, CliffordElement::one(m)))
    }

    /// The vector variable `ux_j = Σ_i e_i x_{ij}`, 1-based `j`.
    pub fn vector_variable(m: usize, k: usize, j: usize) -> Result<Self> {
        check_index(j, k)?;
        let mut p = ClPoly::zero(m, k);
        for i in 1..=m {
            let mut e = MultiExponent::zeros(m, k);
            e.0[(j - 1) * m + (i - 1)] = 1;
            p.add_term(e, &CliffordElement::basis_vector(m, i)?);
        }
        Ok(p)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiExponent, &CliffordElement)> {
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

    pub fn coefficient(&self, e: &MultiExponent) -> Option<&CliffordElement> {
        self.terms.get(e)
    }

    pub(crate) fn add_term(&mut self, e: MultiExponent, c: &CliffordElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = v.add(c).expect("coefficient dimension");
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    /// Adds `s·c·x^e`.
    pub(crate) fn add_scaled_term(
        &mut self,
        e: MultiExponent,
        c: &CliffordElement,
        s: &ExactScalar,
    ) {
        if s.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                c.add_scaled_into(s, v);
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                let scaled = c.scale(s);
                if !scaled.is_zero() {
                    self.terms.insert(e, scaled);
                }
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if (self.m, self.k) != (other.m, other.k) {
            return Err(FischerError::DimensionMismatch(format!(
                "(m, k) = ({}, {}) vs ({}, {})",
                self.m, self.k, other.m, other.k
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), &c.neg());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        ClPoly {
            m: self.m,
            k: self.k,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scalar_mul(&self, s: &ExactScalar) -> Self {
        if s.is_zero() {
            return ClPoly::zero(self.m, self.k);
        }
        ClPoly {
            m: self.m,
            k: self.k,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.scale(s)))
                .collect(),
        }
    }

    /// `c·P`, multiplying every coefficient on the left.
    pub fn clifford_left_mul(&self, c: &CliffordElement) -> Result<Self> {
        if c.dimension() != self.m {
            return Err(FischerError::DimensionMismatch(format!(
                "C_{} vs m = {}",
                c.dimension(),
                self.m
            )));
        }
        let mut out = ClPoly::zero(self.m, self.k);
        for (e, d) in &self.terms {
            out.add_term(e.clone(), &c.mul(d)?);
        }
        Ok(out)
    }

    /// Sum of the terms selected by `s`.
    pub fn graded_component(&self, s: &GradedSlice) -> Self {
        ClPoly {
            m: self.m,
            k: self.k,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| s.matches(e, self.m))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiExponent::total_degree).max()
    }

    /// The common total degree, if the polynomial is nonzero and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(MultiExponent::total_degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Distinct multidegrees occurring, in increasing order.
    pub fn multidegrees(&self) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = self.terms.keys().map(|e| e.multidegree(self.m)).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn is_spinor_valued(&self, frame: &SpinorFrame) -> bool {
        frame.m() == self.m && self.terms.values().all(|c| frame.contains(c))
    }

    /// `P·c`, multiplying every coefficient on the right.
    pub fn clifford_right_mul(&self, c: &CliffordElement) -> Result<Self> {
        let mut out = ClPoly::zero(self.m, self.k);
        for (e, d) in &self.terms {
            out.add_term(e.clone(), &d.mul(c)?);
        }
        Ok(out)
    }
}

fn check_index(i: usize, bound: usize) -> Result<()> {
    if i == 0 || i > bound {
        return Err(FischerError::IndexOutOfRange { index: i, bound });
    }
    Ok(())
}

impl fmt::Debug for ClPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("({c:?})x^{e:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// All compositions of `total` into `parts` nonnegative entries.
fn compositions(total: u32, parts: usize, out: &mut Vec<Vec<u16>>, prefix: &mut Vec<u16>) {
    if parts == 1 {
        prefix.push(total as u16);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first as u16);
        compositions(total - first, parts - 1, out, prefix);
        prefix.pop();
    }
}

/// All multidegrees `a ∈ N_0^k` with `|a| = total`, in decreasing lexicographic order.
pub fn multidegrees(k: usize, total: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    compositions(total, k, &mut out, &mut Vec::new());
    out.into_iter()
        .map(|v| v.into_iter().map(u32::from).collect())
        .collect()
}

/// Exponents of the monomials in a graded slice, sorted in decreasing lexicographic
/// order of the flat encoding (so `x_{11}^ℓ` comes first).
pub fn monomials(m: usize, k: usize, slice: &GradedSlice) -> Vec<MultiExponent> {
    let mut out = Vec::new();
    match slice {
        GradedSlice::Total(l) => {
            let mut all = Vec::new();
            compositions(*l, m * k, &mut all, &mut Vec::new());
            out.extend(all.iter().map(|v| MultiExponent::from_flat(v)));
        }
        GradedSlice::Multi(a) => {
            assert_eq!(a.len(), k, "multidegree length");
            let per_column: Vec<Vec<Vec<u16>>> = a
                .iter()
                .map(|&aj| {
                    let mut c = Vec::new();
                    compositions(aj, m, &mut c, &mut Vec::new());
                    c
                })
                .collect();
            let mut idx = vec![0usize; k];
            loop {
                let flat: Vec<u16> = (0..k)
                    .flat_map(|j| per_column[j][idx[j]].iter().copied())
                    .collect();
                out.push(MultiExponent::from_flat(&flat));
                let mut j = k;
                loop {
                    if j == 0 {
                        out.sort_by(|x, y| y.cmp(x));
                        return out;
                    }
                    j -= 1;
                    idx[j] += 1;
                    if idx[j] < per_column[j].len() {
                        break;
                    }
                    idx[j] = 0;
                }
            }
        }
    }
    out.sort_by(|x, y| y.cmp(x));
    out
}

/// `C(n, r)` as `u128`.
pub fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Fischer inner product `⟨f, g⟩ = Σ_α α!·[bar(c_α)·d_α]_0`, conjugate-linear in `f`.
pub fn fischer_inner(f: &ClPoly, g: &ClPoly) -> Result<ExactScalar> {
    f.check_same(g)?;
    let mut acc = ExactScalar::zero();
    for (e, c) in &f.terms {
        if let Some(d) = g.terms.get(e) {
            let s = c.antiinvolution().mul(d)?.scalar_part();
            acc += &s.scale(&e.factorial());
        }
    }
    Ok(acc)
}

/// One serialized term of the interchange format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub exp: Vec<Vec<u16>>,
    pub coeff: Vec<BladeTerm>,
}

/// Interchange format: `{ "m", "k", "terms": [ { "exp": [[..]], "coeff": [ {blade, re, im} ] } ] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyFile {
    pub m: usize,
    pub k: usize,
    pub terms: Vec<PolyTerm>,
}

impl ClPoly {
    pub fn to_file(&self) -> PolyFile {
        PolyFile {
            m: self.m,
            k: self.k,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| PolyTerm {
                    exp: e.to_matrix(self.m, self.k),
                    coeff: c.to_terms(),
                })
                .collect(),
        }
    }

    pub fn from_file(file: &PolyFile) -> Result<Self> {
        let (m, k) = (file.m, file.k);
        if m == 0 || k == 0 || m > crate::clifford::MAX_DIMENSION {
            return Err(FischerError::Parse {
                position: String::new(),
                message: format!("invalid dimensions m = {m}, k = {k}"),
            });
        }
        let mut p = ClPoly::zero(m, k);
        for (t, term) in file.terms.iter().enumerate() {
            let at = |message: String| FischerError::Parse {
                position: format!(" at term {t}"),
                message,
            };
            if term.exp.len() != m || term.exp.iter().any(|r| r.len() != k) {
                return Err(at(format!("exponent must be a {m}×{k} matrix")));
            }
            let c = CliffordElement::from_blade_terms(m, &term.coeff).map_err(|e| match e {
                FischerError::Parse { message, .. } => at(message),
                other => at(other.to_string()),
            })?;
            p.add_term(MultiExponent::from_matrix(&term.exp), &c);
        }
        Ok(p)
    }

    /// Canonical pretty JSON; terms in exponent order, blades in bitmask order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    /// Parses the interchange format; errors carry the line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: PolyFile = serde_json::from_str(text).map_err(|e| FischerError::Parse {
            position: format!(" at line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        ClPoly::from_file(&file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::BladeIndex;

    fn x(m: usize, k: usize, i: usize, j: usize) -> ClPoly {
        ClPoly::variable(m, k, i, j).unwrap()
    }

    fn mono(m: usize, k: usize, rows: &[Vec<u16>], c: CliffordElement) -> ClPoly {
        ClPoly::monomial(m, k, MultiExponent::from_matrix(rows), c)
    }

    #[test]
    fn arithmetic_examples() {
        let (m, k) = (3, 2);
        let two_x = x(m, k, 1, 1).add(&x(m, k, 1, 1)).unwrap();
        assert_eq!(two_x, x(m, k, 1, 1).scalar_mul(&ExactScalar::from_int(2)));
        let e1 = CliffordElement::basis_vector(m, 1).unwrap();
        let e1x = x(m, k, 1, 1).clifford_left_mul(&e1).unwrap();
        assert_eq!(e1x.clifford_left_mul(&e1).unwrap(), x(m, k, 1, 1).neg());
        assert!(two_x.scalar_mul(&ExactScalar::zero()).is_zero());
        assert!(x(3, 1, 1, 1).add(&x(3, 2, 1, 1)).is_err());
    }

    #[test]
    fn graded_component_examples() {
        let (m, k) = (3, 2);
        let one = CliffordElement::one(m);
        let x11x12 = mono(m, k, &[vec![1, 1], vec![0, 0], vec![0, 0]], one.clone());
        let p = x(m, k, 1, 1).add(&x11x12).unwrap();
        assert_eq!(p.graded_component(&GradedSlice::Total(2)), x11x12);
        assert!(p.graded_component(&GradedSlice::Total(5)).is_zero());
        assert_eq!(
            x11x12.graded_component(&GradedSlice::Multi(vec![1, 1])),
            x11x12
        );
        let twice = p
            .graded_component(&GradedSlice::Total(2))
            .graded_component(&GradedSlice::Total(2));
        assert_eq!(twice, x11x12);
    }

    #[test]
    fn fischer_examples() {
        let (m, k) = (3, 2);
        let one = CliffordElement::one(m);
        let sq = mono(m, k, &[vec![2, 0], vec![0, 0], vec![0, 0]], one);
        assert_eq!(fischer_inner(&sq, &sq).unwrap(), ExactScalar::from_int(2));
        assert!(fischer_inner(&x(m, k, 1, 1), &x(m, k, 1, 2))
            .unwrap()
            .is_zero());
        let e1 = CliffordElement::basis_vector(m, 1).unwrap();
        let e1x = x(m, k, 1, 1).clifford_left_mul(&e1).unwrap();
        assert_eq!(fischer_inner(&e1x, &e1x).unwrap(), ExactScalar::one());
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(3, 1, &GradedSlice::Total(2)).len(), 6);
        assert_eq!(monomials(4, 2, &GradedSlice::Total(1)).len(), 8);
        assert_eq!(monomials(4, 2, &GradedSlice::Multi(vec![2, 1])).len(), 40);
        assert_eq!(
            monomials(6, 3, &GradedSlice::Total(2)).len() as u128,
            binomial(19, 17)
        );
        let ms = monomials(3, 1, &GradedSlice::Total(2));
        assert_eq!(ms[0].flat(), &[2, 0, 0]);
        assert!(ms.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn json_round_trip_and_errors() {
        let m = 3;
        let c = CliffordElement::from_terms(
            m,
            [
                (
                    BladeIndex(0b011),
                    ExactScalar::new(Rational::new(1, 2), Rational::new(-3, 4)),
                ),
                (BladeIndex(0), ExactScalar::from_int(5)),
            ],
        )
        .unwrap();
        let p = mono(m, 1, &[vec![2], vec![0], vec![1]], c)
            .add(&ClPoly::vector_variable(m, 1, 1).unwrap())
            .unwrap();
        let text = p.to_json();
        let back = ClPoly::from_json(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.to_json(), text);
        assert!(text.contains("\"1/2\""));

        let err =
            ClPoly::from_json("{\"m\": 3, \"k\": 1, \"terms\": [ {\"exp\": 5} ]}").unwrap_err();
        assert!(
            matches!(err, FischerError::Parse { ref position, .. } if position.contains("line 1"))
        );
        let bad_shape = r#"{"m": 3, "k": 1, "terms": [ {"exp": [[1],[0]], "coeff": []} ]}"#;
        assert!(matches!(
            ClPoly::from_json(bad_shape),
            Err(FischerError::Parse { .. })
        ));
        let bad_blade = r#"{"m": 3, "k": 1, "terms": [ {"exp": [[1],[0],[0]], "coeff": [{"blade": [4], "re": "1", "im": "0"}]} ]}"#;
        assert!(ClPoly::from_json(bad_blade).is_err());
    }
}
