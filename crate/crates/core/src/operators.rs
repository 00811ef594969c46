//! Dirac operators, vector multiplications and the even operators `r²_ij`, `Δ_ij`, `E_ij`,
//! `h_ij`, with a relation checker for the `sp(2k)` and `osp(1|2k)` brackets they span.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::clifford::{BladeIndex, CliffordElement, SpinorFrame};
use crate::error::{FischerError, Result};
use crate::exactla::chart::CoordinateChart;
use crate::exactla::matrix::{solve, ExactMatrix, RowSpace, SparseVec};
use crate::poly::{monomials, ClPoly, GradedSlice, MultiExponent};
use crate::scalar::{ExactScalar, Rational};

/// One generator of the operator family; all indices are 1-based variable indices `≤ k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GeneratorTag {
    /// `∂_{ux_j} = Σ_i e_i ∂_{x_ij}`.
    Dirac(usize),
    /// Left multiplication by `ux_j = Σ_i e_i x_ij`.
    VecMul(usize),
    /// Multiplication by `r²_ij = Σ_l x_li x_lj`, `i ≤ j`.
    Rsq(usize, usize),
    /// `Δ_ij = Σ_l ∂_{x_li} ∂_{x_lj}`, `i ≤ j`.
    Lapl(usize, usize),
    /// `E_ij = Σ_l x_li ∂_{x_lj}`.
    Euler(usize, usize),
    /// `h_ij = E_ij + (m/2)·δ_ij`.
    H(usize, usize),
}

impl GeneratorTag {
    pub fn is_odd(self) -> bool {
        matches!(self, GeneratorTag::Dirac(_) | GeneratorTag::VecMul(_))
    }

    fn indices(self) -> (usize, Option<usize>) {
        match self {
            GeneratorTag::Dirac(j) | GeneratorTag::VecMul(j) => (j, None),
            GeneratorTag::Rsq(i, j)
            | GeneratorTag::Lapl(i, j)
            | GeneratorTag::Euler(i, j)
            | GeneratorTag::H(i, j) => (i, Some(j)),
        }
    }

    pub fn validate(self, k: usize) -> Result<()> {
        let (i, j) = self.indices();
        for idx in std::iter::once(i).chain(j) {
            if idx == 0 || idx > k {
                return Err(FischerError::IndexOutOfRange {
                    index: idx,
                    bound: k,
                });
            }
        }
        if let GeneratorTag::Rsq(i, j) | GeneratorTag::Lapl(i, j) = self {
            if i > j {
                return Err(FischerError::Unsupported(format!("{self} needs i ≤ j")));
            }
        }
        Ok(())
    }

    /// Change of multidegree in `Z^k`.
    pub fn shift(self, k: usize) -> Vec<i32> {
        let mut s = vec![0; k];
        match self {
            GeneratorTag::Dirac(j) => s[j - 1] -= 1,
            GeneratorTag::VecMul(j) => s[j - 1] += 1,
            GeneratorTag::Rsq(i, j) => {
                s[i - 1] += 1;
                s[j - 1] += 1;
            }
            GeneratorTag::Lapl(i, j) => {
                s[i - 1] -= 1;
                s[j - 1] -= 1;
            }
            GeneratorTag::Euler(i, j) | GeneratorTag::H(i, j) => {
                s[i - 1] += 1;
                s[j - 1] -= 1;
            }
        }
        s
    }
}

impl fmt::Display for GeneratorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorTag::Dirac(j) => write!(f, "DIRAC {j}"),
            GeneratorTag::VecMul(j) => write!(f, "VECMUL {j}"),
            GeneratorTag::Rsq(i, j) => write!(f, "RSQ({i},{j})"),
            GeneratorTag::Lapl(i, j) => write!(f, "LAPL({i},{j})"),
            GeneratorTag::Euler(i, j) => write!(f, "EULER({i},{j})"),
            GeneratorTag::H(i, j) => write!(f, "H({i},{j})"),
        }
    }
}

fn flat(i: usize, j: usize, m: usize) -> usize {
    (j - 1) * m + i
}

/// The action of `tag` on `x^e`: a list of `(exponent, factor, l)` meaning
/// `factor·e_l·x^exponent` (no Clifford factor when `l` is `None`).
fn generator_terms(
    tag: GeneratorTag,
    e: &MultiExponent,
    m: usize,
) -> Vec<(MultiExponent, i64, Option<usize>)> {
    let mut out = Vec::new();
    match tag {
        GeneratorTag::Dirac(j) => {
            for l in 0..m {
                let idx = flat(l, j, m);
                let a = e.flat()[idx];
                if a > 0 {
                    out.push((
                        e.shifted(idx, -1).expect("positive exponent"),
                        a as i64,
                        Some(l + 1),
                    ));
                }
            }
        }
        GeneratorTag::VecMul(j) => {
            for l in 0..m {
                out.push((
                    e.shifted(flat(l, j, m), 1).expect("raising"),
                    1,
                    Some(l + 1),
                ));
            }
        }
        GeneratorTag::Rsq(i, j) => {
            for l in 0..m {
                let ne = e
                    .shifted(flat(l, i, m), 1)
                    .and_then(|x| x.shifted(flat(l, j, m), 1))
                    .expect("raising");
                out.push((ne, 1, None));
            }
        }
        GeneratorTag::Lapl(i, j) => {
            for l in 0..m {
                let (a, b) = (flat(l, i, m), flat(l, j, m));
                let factor = if i == j {
                    let v = e.flat()[a] as i64;
                    v * (v - 1)
                } else {
                    e.flat()[a] as i64 * e.flat()[b] as i64
                };
                if factor != 0 {
                    let ne = e
                        .shifted(a, -1)
                        .and_then(|x| x.shifted(b, -1))
                        .expect("positive exponents");
                    out.push((ne, factor, None));
                }
            }
        }
        GeneratorTag::Euler(i, j) | GeneratorTag::H(i, j) => {
            // The diagonal case is handled by `diagonal_factor`.
            if i != j {
                for l in 0..m {
                    let from = flat(l, j, m);
                    let a = e.flat()[from];
                    if a > 0 {
                        let ne = e
                            .shifted(from, -1)
                            .and_then(|x| x.shifted(flat(l, i, m), 1))
                            .expect("shift");
                        out.push((ne, a as i64, None));
                    }
                }
            }
        }
    }
    out
}

/// Eigenvalue of a diagonal `EULER(j,j)` or `H(j,j)` on `x^e`.
fn diagonal_factor(tag: GeneratorTag, e: &MultiExponent, m: usize) -> Option<Rational> {
    match tag {
        GeneratorTag::Euler(i, j) if i == j => {
            Some(Rational::from_int(e.multidegree(m)[j - 1] as i64))
        }
        GeneratorTag::H(i, j) if i == j => {
            Some(&Rational::from_int(e.multidegree(m)[j - 1] as i64) + &Rational::new(m as i64, 2))
        }
        _ => None,
    }
}

/// Applies a single generator.
pub fn apply_generator(tag: GeneratorTag, p: &ClPoly) -> Result<ClPoly> {
    tag.validate(p.k())?;
    let m = p.m();
    let mut out = ClPoly::zero(m, p.k());
    for (e, c) in p.terms() {
        if let Some(f) = diagonal_factor(tag, e, m) {
            out.add_scaled_term(e.clone(), c, &ExactScalar::real(f));
            continue;
        }
        for (ne, f, l) in generator_terms(tag, e, m) {
            let f = ExactScalar::from_int(f);
            match l {
                Some(l) => out.add_scaled_term(ne, &c.left_mul_generator(l), &f),
                None => out.add_scaled_term(ne, c, &f),
            }
        }
    }
    Ok(out)
}

/// Applies a generator directly in chart coordinates, using the frame's gamma matrices for
/// Clifford factors. Agrees with [`apply_generator`] followed by [`CoordinateChart::to_coords`].
pub fn apply_generator_coords(
    tag: GeneratorTag,
    src: &CoordinateChart,
    v: &SparseVec,
    dst: &CoordinateChart,
) -> Result<SparseVec> {
    tag.validate(src.k())?;
    let m = src.m();
    let fd = dst.fiber_dim();
    let mut entries = Vec::new();
    for (idx, x) in v.iter() {
        let (p, s) = src.locate(*idx);
        let e = &src.monomials()[p];
        let outside =
            || FischerError::OutsideSlice(format!("image of {tag} leaves {}", dst.slice()));
        if let Some(f) = diagonal_factor(tag, e, m) {
            let q = dst.monomial_index(e).ok_or_else(outside)?;
            let pos = dst.fiber_position(s).ok_or_else(outside)?;
            entries.push((q * fd + pos, x.scale(&f)));
            continue;
        }
        for (ne, f, l) in generator_terms(tag, e, m) {
            let q = dst.monomial_index(&ne).ok_or_else(outside)?;
            let xf = x * &ExactScalar::from_int(f);
            match l {
                None => {
                    let pos = dst.fiber_position(s).ok_or_else(outside)?;
                    entries.push((q * fd + pos, xf));
                }
                Some(l) => {
                    let frame = src.frame().ok_or_else(|| {
                        FischerError::Unsupported(format!("{tag} needs spinor values"))
                    })?;
                    for (t, g) in frame.gamma(l)[s].iter() {
                        let pos = dst.fiber_position(*t).ok_or_else(outside)?;
                        entries.push((q * fd + pos, &xf * g));
                    }
                }
            }
        }
    }
    Ok(SparseVec::from_entries(entries))
}

/// A finite linear combination of words in the generators. The word `[g_1, …, g_r]` denotes
/// the composition `g_1 ∘ ⋯ ∘ g_r`, so `g_r` acts first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorExpr {
    terms: Vec<(ExactScalar, Vec<GeneratorTag>)>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        OperatorExpr { terms: Vec::new() }
    }

    pub fn identity() -> Self {
        OperatorExpr {
            terms: vec![(ExactScalar::one(), Vec::new())],
        }
    }

    pub fn generator(tag: GeneratorTag) -> Self {
        OperatorExpr {
            terms: vec![(ExactScalar::one(), vec![tag])],
        }
    }

    pub fn word(c: ExactScalar, word: Vec<GeneratorTag>) -> Self {
        OperatorExpr {
            terms: vec![(c, word)],
        }
        .normalized()
    }

    pub fn terms(&self) -> &[(ExactScalar, Vec<GeneratorTag>)] {
        &self.terms
    }

    fn normalized(mut self) -> Self {
        self.terms.sort_by(|a, b| a.1.cmp(&b.1));
        let mut out: Vec<(ExactScalar, Vec<GeneratorTag>)> = Vec::with_capacity(self.terms.len());
        for (c, w) in self.terms {
            match out.last_mut() {
                Some((d, v)) if *v == w => *d += &c,
                _ => out.push((c, w)),
            }
        }
        out.retain(|(c, _)| !c.is_zero());
        OperatorExpr { terms: out }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        OperatorExpr {
            terms: self.terms.iter().map(|(d, w)| (d * c, w.clone())).collect(),
        }
        .normalized()
    }

    pub fn add(&self, other: &Self) -> Self {
        OperatorExpr {
            terms: self.terms.iter().chain(&other.terms).cloned().collect(),
        }
        .normalized()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&ExactScalar::from_int(-1)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut terms = Vec::new();
        for (a, u) in &self.terms {
            for (b, v) in &other.terms {
                terms.push((a * b, u.iter().chain(v).copied().collect()));
            }
        }
        OperatorExpr { terms }.normalized()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self.compose(other).add(&other.compose(self))
    }

    pub fn bracket(&self, other: &Self, bracket: Bracket) -> Self {
        match bracket {
            Bracket::Commutator => self.commutator(other),
            Bracket::Anticommutator => self.anticommutator(other),
        }
    }

    pub fn apply(&self, p: &ClPoly) -> Result<ClPoly> {
        let mut out = ClPoly::zero(p.m(), p.k());
        for (c, word) in &self.terms {
            let mut q = p.clone();
            for tag in word.iter().rev() {
                q = apply_generator(*tag, &q)?;
                if q.is_zero() {
                    break;
                }
            }
            out = out.add(&q.scalar_mul(c))?;
        }
        Ok(out)
    }
}

impl From<GeneratorTag> for OperatorExpr {
    fn from(tag: GeneratorTag) -> Self {
        OperatorExpr::generator(tag)
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (c, w)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let word = if w.is_empty() {
                "1".to_string()
            } else {
                w.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("∘")
            };
            if c.is_one() {
                write!(f, "{word}")?;
            } else {
                write!(f, "({c})·{word}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bracket {
    Commutator,
    Anticommutator,
}

impl Bracket {
    /// Super-bracket: anticommutator exactly when both arguments are odd.
    pub fn for_pair(a: GeneratorTag, b: GeneratorTag) -> Self {
        if a.is_odd() && b.is_odd() {
            Bracket::Anticommutator
        } else {
            Bracket::Commutator
        }
    }

    fn render(self, a: &str, b: &str) -> String {
        match self {
            Bracket::Commutator => format!("[{a}, {b}]"),
            Bracket::Anticommutator => format!("{{{a}, {b}}}"),
        }
    }
}

/// Test inputs `x^α·c` for a relation check. Every operator acts by left multiplication, so it
/// commutes with right multiplication by constants; a residual vanishing on `x^α·1` therefore
/// vanishes on every `x^α·c`. The other modes evaluate the full families anyway.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TestCoefficients {
    Unit,
    Blades,
    SpinorFrame,
}

#[derive(Clone, Debug)]
pub struct RelationConfig {
    pub m: usize,
    pub k: usize,
    pub max_degree: u32,
    pub coefficients: TestCoefficients,
}

impl RelationConfig {
    pub fn new(m: usize, k: usize, max_degree: u32) -> Self {
        RelationConfig {
            m,
            k,
            max_degree,
            coefficients: TestCoefficients::Unit,
        }
    }

    pub fn with_coefficients(mut self, coefficients: TestCoefficients) -> Self {
        self.coefficients = coefficients;
        self
    }

    fn test_coefficients(&self) -> Result<Vec<CliffordElement>> {
        Ok(match self.coefficients {
            TestCoefficients::Unit => vec![CliffordElement::one(self.m)],
            TestCoefficients::Blades => (0..1u32 << self.m)
                .map(|b| CliffordElement::blade(self.m, BladeIndex(b), ExactScalar::one()))
                .collect(),
            TestCoefficients::SpinorFrame => SpinorFrame::build(self.m)?.basis().to_vec(),
        })
    }

    /// Test inputs ordered by degree, then monomial, then coefficient.
    fn inputs(&self, max_degree: u32) -> Result<Vec<ClPoly>> {
        let coeffs = self.test_coefficients()?;
        let mut out = Vec::new();
        for d in 0..=max_degree {
            for e in monomials(self.m, self.k, &GradedSlice::Total(d)) {
                for c in &coeffs {
                    out.push(ClPoly::monomial(self.m, self.k, e.clone(), c.clone()));
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub input: String,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantTerm {
    pub generator: String,
    pub coefficient: String,
}

/// Outcome of one relation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub relation: String,
    pub constant_found: Vec<ConstantTerm>,
    pub max_degree: u32,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub tested: usize,
}

fn constant_terms(expected: &OperatorExpr) -> Vec<ConstantTerm> {
    expected
        .terms()
        .iter()
        .map(|(c, w)| ConstantTerm {
            generator: if w.is_empty() {
                "1".into()
            } else {
                w.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("∘")
            },
            coefficient: c.to_string(),
        })
        .collect()
}

fn check_validity(expr: &OperatorExpr, k: usize) -> Result<()> {
    for (_, w) in expr.terms() {
        for tag in w {
            tag.validate(k)?;
        }
    }
    Ok(())
}

/// Checks `bracket(a, b) = expected` on every test input of total degree `≤ cfg.max_degree`.
pub fn check_relation(
    a: &OperatorExpr,
    b: &OperatorExpr,
    bracket: Bracket,
    expected: &OperatorExpr,
    cfg: &RelationConfig,
) -> Result<RelationReport> {
    check_validity(a, cfg.k)?;
    check_validity(b, cfg.k)?;
    check_validity(expected, cfg.k)?;
    let lhs = a.bracket(b, bracket);
    let relation = format!(
        "{} = {}",
        bracket.render(&a.to_string(), &b.to_string()),
        expected
    );
    let inputs = cfg.inputs(cfg.max_degree)?;
    let mut counterexample = None;
    for p in &inputs {
        let residual = lhs.apply(p)?.sub(&expected.apply(p)?)?;
        if !residual.is_zero() {
            counterexample = Some(Counterexample {
                input: format!("{p:?}"),
                residual: format!("{residual:?}"),
            });
            break;
        }
    }
    Ok(RelationReport {
        relation,
        constant_found: constant_terms(expected),
        max_degree: cfg.max_degree,
        pass: counterexample.is_none(),
        counterexample,
        tested: inputs.len(),
    })
}

/// Basis of the realized `osp(1|2k)`: `f_±`, `p_±` and all `h_ij`.
pub fn osp_basis(k: usize) -> Vec<GeneratorTag> {
    let s = triangular_split(k);
    [
        s.f_plus, s.f_minus, s.p_plus, s.p_minus, s.t_0, s.t_plus, s.t_minus,
    ]
    .concat()
}

/// Determines `bracket(a, b)` as a combination of the `osp(1|2k)` basis elements with the right
/// multidegree shift and parity, then verifies the result up to `cfg.max_degree`.
///
/// The coefficients are fitted on inputs of degree `≤ 2`; a pair whose bracket leaves the span
/// of the candidates is reported as failing.
pub fn discover_bracket(
    a: GeneratorTag,
    b: GeneratorTag,
    cfg: &RelationConfig,
) -> Result<RelationReport> {
    a.validate(cfg.k)?;
    b.validate(cfg.k)?;
    let bracket = Bracket::for_pair(a, b);
    let shift: Vec<i32> = a
        .shift(cfg.k)
        .iter()
        .zip(b.shift(cfg.k))
        .map(|(x, y)| x + y)
        .collect();
    let odd = a.is_odd() != b.is_odd();
    let candidates: Vec<GeneratorTag> = osp_basis(cfg.k)
        .into_iter()
        .filter(|t| t.is_odd() == odd && t.shift(cfg.k) == shift)
        .collect();
    let (ea, eb) = (OperatorExpr::generator(a), OperatorExpr::generator(b));
    let lhs = ea.bracket(&eb, bracket);

    let n = candidates.len();
    let mut space = RowSpace::new(n + 1, false);
    let mut rows = Vec::new();
    let fit = RelationConfig {
        max_degree: cfg.max_degree.min(2),
        coefficients: TestCoefficients::Unit,
        ..cfg.clone()
    };
    for p in fit.inputs(fit.max_degree)? {
        let target = lhs.apply(&p)?;
        let images = candidates
            .iter()
            .map(|t| apply_generator(*t, &p))
            .collect::<Result<Vec<_>>>()?;
        let mut keys: Vec<(MultiExponent, BladeIndex)> = Vec::new();
        for q in images.iter().chain(std::iter::once(&target)) {
            for (e, c) in q.terms() {
                keys.extend(c.terms().map(|(bl, _)| (e.clone(), *bl)));
            }
        }
        keys.sort();
        keys.dedup();
        for (e, bl) in keys {
            let coeff = |q: &ClPoly| {
                q.coefficient(&e)
                    .map(|c| c.coefficient(bl))
                    .unwrap_or_default()
            };
            let mut entries: Vec<(usize, ExactScalar)> = images
                .iter()
                .enumerate()
                .map(|(t, q)| (t, coeff(q)))
                .collect();
            entries.push((n, coeff(&target)));
            let row = SparseVec::from_entries(entries);
            if space.insert(&row) {
                rows.push(row);
            }
        }
    }
    let matrix = ExactMatrix::from_rows(
        rows.iter()
            .map(|r| SparseVec::from_entries(r.iter().filter(|(i, _)| *i < n).cloned().collect()))
            .collect(),
        n,
    );
    let rhs = SparseVec::from_entries(
        rows.iter()
            .enumerate()
            .filter_map(|(r, row)| row.get(n).map(|v| (r, v.clone())))
            .collect(),
    );
    let expected = match solve(&matrix, &rhs) {
        Ok(x) => x.iter().fold(OperatorExpr::zero(), |acc, (t, c)| {
            acc.add(&OperatorExpr::generator(candidates[*t]).scale(c))
        }),
        Err(FischerError::Inconsistent) => {
            return Ok(RelationReport {
                relation: format!(
                    "{} ∉ span of {} candidates",
                    bracket.render(&a.to_string(), &b.to_string()),
                    n
                ),
                constant_found: Vec::new(),
                max_degree: cfg.max_degree,
                pass: false,
                counterexample: None,
                tested: 0,
            })
        }
        Err(e) => return Err(e),
    };
    check_relation(&ea, &eb, bracket, &expected, cfg)
}

/// Brackets of every unordered pair of `osp(1|2k)` basis elements, plus the defining `gl(k)`
/// relations of the `E_ij`.
#[derive(Clone, Debug, Serialize)]
pub struct RelationSuiteReport {
    pub m: usize,
    pub k: usize,
    pub max_degree: u32,
    pub relations: Vec<RelationReport>,
    pub pass: bool,
}

pub fn relation_suite(cfg: &RelationConfig) -> Result<RelationSuiteReport> {
    let basis = osp_basis(cfg.k);
    let mut relations = Vec::new();
    for (x, &a) in basis.iter().enumerate() {
        for &b in &basis[x..] {
            relations.push(discover_bracket(a, b, cfg)?);
        }
    }
    for i in 1..=cfg.k {
        for j in 1..=cfg.k {
            for p in 1..=cfg.k {
                for q in 1..=cfg.k {
                    let mut expected = OperatorExpr::zero();
                    if j == p {
                        expected = expected.add(&GeneratorTag::Euler(i, q).into());
                    }
                    if q == i {
                        expected = expected.sub(&GeneratorTag::Euler(p, j).into());
                    }
                    relations.push(check_relation(
                        &GeneratorTag::Euler(i, j).into(),
                        &GeneratorTag::Euler(p, q).into(),
                        Bracket::Commutator,
                        &expected,
                        cfg,
                    )?);
                }
            }
        }
    }
    let pass = relations.iter().all(|r| r.pass);
    Ok(RelationSuiteReport {
        m: cfg.m,
        k: cfg.k,
        max_degree: cfg.max_degree,
        relations,
        pass,
    })
}

/// The generator families of `osp(1|2k) = f_− ⊕ p_− ⊕ t ⊕ p_+ ⊕ f_+` with
/// `t = t_− ⊕ t_0 ⊕ t_+`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangularSplit {
    pub p_plus: Vec<GeneratorTag>,
    pub p_minus: Vec<GeneratorTag>,
    pub t_0: Vec<GeneratorTag>,
    pub t_plus: Vec<GeneratorTag>,
    pub t_minus: Vec<GeneratorTag>,
    pub f_plus: Vec<GeneratorTag>,
    pub f_minus: Vec<GeneratorTag>,
}

pub fn triangular_split(k: usize) -> TriangularSplit {
    let pairs: Vec<(usize, usize)> = (1..=k).flat_map(|i| (i..=k).map(move |j| (i, j))).collect();
    let strict: Vec<(usize, usize)> = pairs.iter().copied().filter(|(i, j)| i < j).collect();
    TriangularSplit {
        p_plus: pairs
            .iter()
            .map(|&(i, j)| GeneratorTag::Rsq(i, j))
            .collect(),
        p_minus: pairs
            .iter()
            .map(|&(i, j)| GeneratorTag::Lapl(i, j))
            .collect(),
        t_0: (1..=k).map(|i| GeneratorTag::H(i, i)).collect(),
        t_plus: strict.iter().map(|&(i, j)| GeneratorTag::H(j, i)).collect(),
        t_minus: strict.iter().map(|&(i, j)| GeneratorTag::H(i, j)).collect(),
        f_plus: (1..=k).map(GeneratorTag::VecMul).collect(),
        f_minus: (1..=k).map(GeneratorTag::Dirac).collect(),
    }
}

/// Matrix of an operator between two charts, acting on row vectors: row `p` holds the
/// coordinates of the image of source basis vector `p`.
pub fn operator_matrix(
    op: &OperatorExpr,
    src: &CoordinateChart,
    dst: &CoordinateChart,
) -> Result<ExactMatrix> {
    if let [(c, word)] = op.terms() {
        if let [tag] = word.as_slice() {
            let rows = (0..src.dim())
                .map(|p| Ok(apply_generator_coords(*tag, src, &SparseVec::unit(p), dst)?.scale(c)))
                .collect::<Result<Vec<_>>>()?;
            return Ok(ExactMatrix::from_rows(rows, dst.dim()));
        }
    }
    let rows = (0..src.dim())
        .map(|p| dst.to_coords(&op.apply(&src.basis_element(p))?))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExactMatrix::from_rows(rows, dst.dim()))
}

/// Outcome of an adjointness check `⟨A f, g⟩ = c·⟨f, B g⟩` over chart bases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjointReport {
    pub operator: String,
    pub adjoint: String,
    pub degree: u32,
    /// `None` when the pairing vanishes identically on the tested slices.
    pub constant: Option<String>,
    pub pass: bool,
}

/// Finds the constant `c` with `⟨A f, g⟩ = c·⟨f, B g⟩` for all `f` in `src` and `g` in `dst`,
/// where `A: src → dst` and `B: dst → src`, and checks it on every basis pair.
pub fn adjoint_constant(
    a: &OperatorExpr,
    b: &OperatorExpr,
    src: &CoordinateChart,
    dst: &CoordinateChart,
) -> Result<(Option<ExactScalar>, bool)> {
    let ma = operator_matrix(a, src, dst)?;
    let mb = operator_matrix(b, dst, src)?;
    let mut constant: Option<ExactScalar> = None;
    let mut pass = true;
    // ⟨A f_p, g_q⟩ = conj(A[p][q])·w_q (diagonal Fischer weights); ⟨f_p, B g_q⟩ = B[q][p]·w_p.
    for p in 0..src.dim() {
        for (q, apq) in ma.row(p).iter() {
            let left = apq.conj().scale(&dst.weight(*q));
            let right = mb.get(*q, p).scale(&src.weight(p));
            if right.is_zero() {
                pass = false;
                continue;
            }
            let c = &left / &right;
            match &constant {
                None => constant = Some(c),
                Some(c0) if *c0 != c => pass = false,
                _ => {}
            }
        }
    }
    for q in 0..dst.dim() {
        for (p, bqp) in mb.row(q).iter() {
            if ma.get(*p, q).is_zero() && !bqp.is_zero() {
                pass = false;
            }
        }
    }
    Ok((constant, pass))
}

/// Spinor chart helper for adjointness checks.
pub fn spinor_chart(frame: &Arc<SpinorFrame>, k: usize, degree: u32) -> CoordinateChart {
    CoordinateChart::spinor(frame.clone(), k, GradedSlice::Total(degree))
}

/// Adjointness of `ux_j` and `∂_{ux_j}` and of `r²_ij` and `Δ_ij` on spinor slices of degree
/// `< max_degree`. Passes when every pair shares one global constant per family.
pub fn adjointness_reports(m: usize, k: usize, max_degree: u32) -> Result<Vec<AdjointReport>> {
    let frame = Arc::new(SpinorFrame::build(m)?);
    let mut reports = Vec::new();
    let mut families: Vec<(GeneratorTag, GeneratorTag, u32)> = Vec::new();
    for j in 1..=k {
        families.push((GeneratorTag::VecMul(j), GeneratorTag::Dirac(j), 1));
    }
    for i in 1..=k {
        for j in i..=k {
            families.push((GeneratorTag::Rsq(i, j), GeneratorTag::Lapl(i, j), 2));
        }
    }
    for (a, b, step) in families {
        for d in 0..max_degree.saturating_sub(step - 1) {
            let src = spinor_chart(&frame, k, d);
            let dst = spinor_chart(&frame, k, d + step);
            let (c, pass) = adjoint_constant(&a.into(), &b.into(), &src, &dst)?;
            reports.push(AdjointReport {
                operator: a.to_string(),
                adjoint: b.to_string(),
                degree: d,
                constant: c.map(|c| c.to_string()),
                pass,
            });
        }
    }
    Ok(reports)
}
