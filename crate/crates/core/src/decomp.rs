//! The monogenic Fischer decomposition
//! `P_ℓ⊗S = ⊕_{J, n, t} (∏ r_ij^{2n_ij}) ux_J M_t`: summand enumeration, verification of
//! directness and spanning, decomposition of given polynomials, and the harmonic refinement.
//!
//! Every summand is graded by multidegree, so all checks and solves run one multidegree block
//! of `P_ℓ⊗S` at a time; the blocks are coordinate-disjoint, so block-wise directness and
//! spanning are equivalent to the total-degree statements.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{FischerError, Result};
use crate::exactla::chart::{CoordinateChart, ValueKind};
use crate::exactla::matrix::{RowSpace, SparseVec};
use crate::exactla::subspace::SubspaceBasis;
use crate::operators::{apply_generator_coords, GeneratorTag, OperatorExpr};
use crate::poly::{multidegrees, ClPoly, GradedSlice, PolyFile};
use crate::repdim::subsets_of_size;
use crate::scalar::ExactScalar;
use crate::spaces::Workspace;

/// Index pairs `(i, j)`, `i ≤ j`, in row order; the layout of [`SummandIndex::n`].
pub fn pairs(k: usize) -> Vec<(usize, usize)> {
    (1..=k).flat_map(|i| (i..=k).map(move |j| (i, j))).collect()
}

/// One summand `(∏ r_ij^{2n_ij}) ux_J M_t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SummandIndex {
    /// Strictly increasing subset of `{1..k}`.
    pub j: Vec<usize>,
    /// Exponents `n_ij` in [`pairs`] order.
    pub n: Vec<u32>,
    pub t: u32,
}

/// Order of the factors of `ux_J`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JOrder {
    /// `ux_J = ux_{j_1}⋯ux_{j_r}` with `j_1 < ⋯ < j_r`.
    #[default]
    Increasing,
    Decreasing,
}

impl SummandIndex {
    pub fn degree(&self) -> u32 {
        self.t + self.j.len() as u32 + 2 * self.n.iter().sum::<u32>()
    }

    pub fn validate(&self, k: usize) -> Result<()> {
        if self.n.len() != k * (k + 1) / 2 {
            return Err(FischerError::DimensionMismatch(format!(
                "{} exponents n_ij for k = {k}",
                self.n.len()
            )));
        }
        if self.j.windows(2).any(|w| w[0] >= w[1]) || self.j.iter().any(|&x| x == 0 || x > k) {
            return Err(FischerError::Unsupported(format!(
                "J = {:?} is not an increasing subset of 1..={k}",
                self.j
            )));
        }
        Ok(())
    }

    /// Multidegree added to the `M_t` factor.
    pub fn shift(&self, k: usize) -> Vec<u32> {
        let mut s = vec![0; k];
        for &j in &self.j {
            s[j - 1] += 1;
        }
        for (&(i, j), &n) in pairs(k).iter().zip(&self.n) {
            s[i - 1] += n;
            s[j - 1] += n;
        }
        s
    }

    /// The multiplication operator as a word (rightmost factor acts first).
    pub fn word(&self, k: usize, order: JOrder) -> Vec<GeneratorTag> {
        let mut w = Vec::new();
        for (&(i, j), &n) in pairs(k).iter().zip(&self.n) {
            w.extend(std::iter::repeat_n(GeneratorTag::Rsq(i, j), n as usize));
        }
        let mut js = self.j.clone();
        if order == JOrder::Decreasing {
            js.reverse();
        }
        w.extend(js.into_iter().map(GeneratorTag::VecMul));
        w
    }

    pub fn operator(&self, k: usize, order: JOrder) -> OperatorExpr {
        OperatorExpr::word(ExactScalar::one(), self.word(k, order))
    }
}

impl fmt::Display for SummandIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j: Vec<String> = self.j.iter().map(ToString::to_string).collect();
        let n: Vec<String> = self.n.iter().map(ToString::to_string).collect();
        write!(f, "J={{{}}} n=({}) t={}", j.join(","), n.join(","), self.t)
    }
}

/// Compositions of `total` into `parts` entries, increasing lexicographic order.
fn compositions_increasing(total: u32, parts: usize) -> Vec<Vec<u32>> {
    let mut out = multidegrees(parts, total);
    out.reverse();
    out
}

/// All summands of total degree `ℓ`: `t` descending, then `J` lexicographic, then `n`
/// lexicographic.
pub fn enumerate_summands(k: usize, l: u32) -> Vec<SummandIndex> {
    let mut subsets: Vec<Vec<usize>> = (0..=k).flat_map(|j| subsets_of_size(k, j)).collect();
    subsets.sort();
    let mut out = Vec::new();
    for t in (0..=l).rev() {
        let rest = l - t;
        for j in &subsets {
            let jl = j.len() as u32;
            if jl > rest || (rest - jl) % 2 == 1 {
                continue;
            }
            for n in compositions_increasing((rest - jl) / 2, k * (k + 1) / 2) {
                out.push(SummandIndex { j: j.clone(), n, t });
            }
        }
    }
    out
}

/// Which decomposition is built: spinor-valued with monogenic factors, or the scalar
/// decomposition into `r²` powers times harmonics (`J` always empty).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    #[default]
    Monogenic,
    ScalarHarmonic,
}

impl Pipeline {
    fn kind(self) -> ValueKind {
        match self {
            Pipeline::Monogenic => ValueKind::Spinor,
            Pipeline::ScalarHarmonic => ValueKind::Scalar,
        }
    }

    fn base(self, ws: &Workspace, slice: GradedSlice) -> Result<SubspaceBasis> {
        match self {
            Pipeline::Monogenic => ws.monogenic_space(slice),
            Pipeline::ScalarHarmonic => ws.harmonic_space(slice, ValueKind::Scalar),
        }
    }

    fn summands(self, k: usize, l: u32) -> Vec<SummandIndex> {
        let all = enumerate_summands(k, l);
        match self {
            Pipeline::Monogenic => all,
            Pipeline::ScalarHarmonic => all.into_iter().filter(|s| s.j.is_empty()).collect(),
        }
    }
}

/// Applies a word in coordinates, starting in the multidegree block `from`.
fn apply_word(
    ws: &Workspace,
    kind: ValueKind,
    word: &[GeneratorTag],
    from: &[u32],
    v: &SparseVec,
) -> Result<(SparseVec, Vec<u32>)> {
    let mut deg = from.to_vec();
    let mut cur = ws.chart(GradedSlice::Multi(deg.clone()), kind)?;
    let mut v = v.clone();
    for &tag in word.iter().rev() {
        for (d, s) in deg.iter_mut().zip(tag.shift(ws.k())) {
            *d = (*d as i32 + s) as u32;
        }
        let next = ws.chart(GradedSlice::Multi(deg.clone()), kind)?;
        v = apply_generator_coords(tag, &cur, &v, &next)?;
        cur = next;
    }
    Ok((v, deg))
}

fn sub_multidegree(a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
    a.iter().zip(b).map(|(&x, &y)| x.checked_sub(y)).collect()
}

/// Builds `(∏ r_ij^{2n_ij}) ux_J M_t` as a subspace of the total-degree slice. Fails with a
/// verification error if the multiplication map is not injective on `M_t`.
pub fn build_summand_basis(
    ws: &Workspace,
    s: &SummandIndex,
    order: JOrder,
) -> Result<SubspaceBasis> {
    build_summand_basis_in(ws, s, order, Pipeline::Monogenic)
}

pub fn build_summand_basis_in(
    ws: &Workspace,
    s: &SummandIndex,
    order: JOrder,
    pipeline: Pipeline,
) -> Result<SubspaceBasis> {
    s.validate(ws.k())?;
    let kind = pipeline.kind();
    let total = ws.chart(GradedSlice::Total(s.degree()), kind)?;
    let word = s.word(ws.k(), order);
    let mut vectors = Vec::new();
    for b in multidegrees(ws.k(), s.t) {
        let base = pipeline.base(ws, GradedSlice::Multi(b.clone()))?;
        for v in base.vectors() {
            let (w, a) = apply_word(ws, kind, &word, &b, v)?;
            let block = ws.chart(GradedSlice::Multi(a), kind)?;
            vectors.extend(ws.embed(&SubspaceBasis::from_independent(block, vec![w]), &total));
        }
    }
    let space = RowSpace::from_rows(vectors.iter().cloned(), total.dim(), false);
    if space.rank() != vectors.len() {
        return Err(FischerError::Verification(format!(
            "summand {s}: rank {} < {} (multiplication not injective)",
            space.rank(),
            vectors.len()
        )));
    }
    Ok(SubspaceBasis::from_independent(total, vectors))
}

struct Origin {
    summand: usize,
    chart: Arc<CoordinateChart>,
    vector: SparseVec,
}

struct Block {
    chart: Arc<CoordinateChart>,
    space: RowSpace,
    origins: Vec<Origin>,
}

/// All summand bases of one total degree, organized by multidegree block, with the
/// elimination state needed to decompose polynomials.
pub struct Decomposer<'w> {
    ws: &'w Workspace,
    degree: u32,
    pipeline: Pipeline,
    order: JOrder,
    summands: Vec<SummandIndex>,
    blocks: Vec<(Vec<u32>, Block)>,
}

impl<'w> Decomposer<'w> {
    pub fn new(
        ws: &'w Workspace,
        degree: u32,
        pipeline: Pipeline,
        order: JOrder,
        allow_unstable: bool,
    ) -> Result<Self> {
        if !ws.in_stable_range() && !allow_unstable {
            return Err(FischerError::OutsideStableRange {
                m: ws.m(),
                k: ws.k(),
            });
        }
        let k = ws.k();
        let kind = pipeline.kind();
        let summands = pipeline.summands(k, degree);
        let mut blocks = Vec::new();
        for a in multidegrees(k, degree) {
            let chart = ws.chart(GradedSlice::Multi(a.clone()), kind)?;
            let mut block = Block {
                chart: chart.clone(),
                space: RowSpace::new(chart.dim(), true),
                origins: Vec::new(),
            };
            for (si, s) in summands.iter().enumerate() {
                let Some(b) = sub_multidegree(&a, &s.shift(k)) else {
                    continue;
                };
                let base = pipeline.base(ws, GradedSlice::Multi(b.clone()))?;
                let word = s.word(k, order);
                for v in base.vectors() {
                    let (w, _) = apply_word(ws, kind, &word, &b, v)?;
                    block.space.insert(&w);
                    block.origins.push(Origin {
                        summand: si,
                        chart: base.chart().clone(),
                        vector: v.clone(),
                    });
                }
            }
            blocks.push((a, block));
        }
        Ok(Decomposer {
            ws,
            degree,
            pipeline,
            order,
            summands,
            blocks,
        })
    }

    pub fn summands(&self) -> &[SummandIndex] {
        &self.summands
    }

    pub fn report(&self, elapsed_ms: u128) -> DecompositionReport {
        let mut dims = vec![0usize; self.summands.len()];
        let (mut rank, mut ambient, mut offered) = (0, 0, 0);
        for (_, b) in &self.blocks {
            for o in &b.origins {
                dims[o.summand] += 1;
            }
            rank += b.space.rank();
            ambient += b.chart.dim();
            offered += b.origins.len();
        }
        DecompositionReport {
            m: self.ws.m(),
            k: self.ws.k(),
            degree: self.degree,
            pipeline: self.pipeline,
            order: self.order,
            stable: self.ws.in_stable_range(),
            summands: self
                .summands
                .iter()
                .zip(dims)
                .map(|(s, dim)| SummandDim {
                    index: s.to_string(),
                    j: s.j.clone(),
                    n: s.n.clone(),
                    t: s.t,
                    dim,
                })
                .collect(),
            total_dim: offered,
            ambient_dim: ambient,
            rank,
            pass: rank == offered && rank == ambient,
            elapsed_ms,
        }
    }

    /// Decomposes a polynomial homogeneous of this decomposer's degree.
    pub fn decompose(&self, p: &ClPoly) -> Result<DecompositionResult> {
        let (m, k) = (self.ws.m(), self.ws.k());
        if let Some(d) = p.homogeneous_degree() {
            if d != self.degree {
                return Err(FischerError::OutsideSlice(format!(
                    "degree {d}, expected {}",
                    self.degree
                )));
            }
        } else if !p.is_zero() {
            return Err(FischerError::Inhomogeneous);
        }
        let mut parts: Vec<ClPoly> = vec![ClPoly::zero(m, k); self.summands.len()];
        for (a, block) in &self.blocks {
            let piece = p.graded_component(&GradedSlice::Multi(a.clone()));
            if piece.is_zero() {
                continue;
            }
            let v = block.chart.to_coords(&piece)?;
            let coeffs = block
                .space
                .coordinates(&v)
                .ok_or(FischerError::Inconsistent)?;
            for (idx, c) in coeffs.iter() {
                let o = &block.origins[*idx];
                let q = o.chart.from_coords(&o.vector.scale(c));
                parts[o.summand] = parts[o.summand].add(&q)?;
            }
        }
        let mut components = Vec::new();
        for (s, part) in self.summands.iter().zip(parts) {
            if part.is_zero() {
                continue;
            }
            let term = s.operator(k, self.order).apply(&part)?;
            components.push(Component {
                index: s.clone(),
                base: part,
                term,
            });
        }
        let mut reassembled = ClPoly::zero(m, k);
        for c in &components {
            reassembled = reassembled.add(&c.term)?;
        }
        let residual = p.sub(&reassembled)?;
        let unique = self.ws.in_stable_range()
            && self
                .blocks
                .iter()
                .all(|(_, b)| b.space.rank() == b.origins.len());
        Ok(DecompositionResult {
            m,
            k,
            pipeline: self.pipeline,
            order: self.order,
            components,
            residual,
            warning: (!unique).then(|| {
                "summands are not independent here: the components are one witness, not unique"
                    .into()
            }),
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SummandDim {
    pub index: String,
    pub j: Vec<usize>,
    pub n: Vec<u32>,
    pub t: u32,
    pub dim: usize,
}

/// Directness and spanning of the decomposition at one degree.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub m: usize,
    pub k: usize,
    pub degree: u32,
    pub pipeline: Pipeline,
    pub order: JOrder,
    pub stable: bool,
    pub summands: Vec<SummandDim>,
    pub total_dim: usize,
    pub ambient_dim: usize,
    pub rank: usize,
    pub pass: bool,
    /// Wall time; left out of serialized reports so they stay deterministic.
    #[serde(skip)]
    pub elapsed_ms: u128,
}

/// Builds every summand basis of degree `ℓ` and checks that they form a direct sum equal to
/// `P_ℓ⊗S`.
pub fn verify_decomposition(
    ws: &Workspace,
    degree: u32,
    order: JOrder,
    allow_unstable: bool,
) -> Result<DecompositionReport> {
    verify_pipeline(ws, degree, Pipeline::Monogenic, order, allow_unstable)
}

/// The scalar decomposition `P_ℓ = ⊕_n (∏ r_ij^{2n_ij}) H_{ℓ−2|n|}` through the same pipeline.
pub fn verify_scalar_decomposition(
    ws: &Workspace,
    degree: u32,
    allow_unstable: bool,
) -> Result<DecompositionReport> {
    verify_pipeline(
        ws,
        degree,
        Pipeline::ScalarHarmonic,
        JOrder::Increasing,
        allow_unstable,
    )
}

fn verify_pipeline(
    ws: &Workspace,
    degree: u32,
    pipeline: Pipeline,
    order: JOrder,
    allow_unstable: bool,
) -> Result<DecompositionReport> {
    let start = Instant::now();
    let d = Decomposer::new(ws, degree, pipeline, order, allow_unstable)?;
    Ok(d.report(start.elapsed().as_millis()))
}

/// One nonzero summand of a decomposition: `term = (∏ r_ij^{2n_ij}) ux_J · base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub index: SummandIndex,
    /// The monogenic (or harmonic, for the scalar pipeline) factor.
    pub base: ClPoly,
    pub term: ClPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionResult {
    pub m: usize,
    pub k: usize,
    pub pipeline: Pipeline,
    pub order: JOrder,
    pub components: Vec<Component>,
    pub residual: ClPoly,
    pub warning: Option<String>,
}

impl DecompositionResult {
    /// `Σ (∏ r_ij^{2n_ij}) ux_J · base` recomputed from the base factors.
    pub fn reassemble(&self) -> Result<ClPoly> {
        let mut out = ClPoly::zero(self.m, self.k);
        for c in &self.components {
            out = out.add(&c.index.operator(self.k, self.order).apply(&c.base)?)?;
        }
        Ok(out)
    }

    pub fn to_file(&self) -> DecompositionFile {
        DecompositionFile {
            m: self.m,
            k: self.k,
            pipeline: self.pipeline,
            order: self.order,
            components: self
                .components
                .iter()
                .map(|c| ComponentFile {
                    index: c.index.clone(),
                    base: c.base.to_file(),
                    term: c.term.to_file(),
                })
                .collect(),
            residual: self.residual.to_file(),
            warning: self.warning.clone(),
        }
    }

    pub fn from_file(file: &DecompositionFile) -> Result<Self> {
        let components = file
            .components
            .iter()
            .map(|c| {
                c.index.validate(file.k)?;
                Ok(Component {
                    index: c.index.clone(),
                    base: ClPoly::from_file(&c.base)?,
                    term: ClPoly::from_file(&c.term)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DecompositionResult {
            m: file.m,
            k: file.k,
            pipeline: file.pipeline,
            order: file.order,
            components,
            residual: ClPoly::from_file(&file.residual)?,
            warning: file.warning.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentFile {
    pub index: SummandIndex,
    pub base: PolyFile,
    pub term: PolyFile,
}

/// Interchange form of a [`DecompositionResult`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub m: usize,
    pub k: usize,
    #[serde(default)]
    pub pipeline: Pipeline,
    #[serde(default)]
    pub order: JOrder,
    pub components: Vec<ComponentFile>,
    pub residual: PolyFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Decomposes a spinor-valued polynomial of any degree, one homogeneous component at a time.
pub fn fischer_decompose(
    ws: &Workspace,
    p: &ClPoly,
    allow_unstable: bool,
) -> Result<DecompositionResult> {
    decompose_with(
        ws,
        p,
        Pipeline::Monogenic,
        JOrder::Increasing,
        allow_unstable,
    )
}

pub fn decompose_with(
    ws: &Workspace,
    p: &ClPoly,
    pipeline: Pipeline,
    order: JOrder,
    allow_unstable: bool,
) -> Result<DecompositionResult> {
    if (p.m(), p.k()) != (ws.m(), ws.k()) {
        return Err(FischerError::DimensionMismatch(format!(
            "polynomial (m, k) = ({}, {}) vs ({}, {})",
            p.m(),
            p.k(),
            ws.m(),
            ws.k()
        )));
    }
    if !ws.in_stable_range() && !allow_unstable {
        return Err(FischerError::OutsideStableRange {
            m: ws.m(),
            k: ws.k(),
        });
    }
    let mut out = DecompositionResult {
        m: ws.m(),
        k: ws.k(),
        pipeline,
        order,
        components: Vec::new(),
        residual: ClPoly::zero(ws.m(), ws.k()),
        warning: None,
    };
    let Some(top) = p.max_degree() else {
        return Ok(out);
    };
    for d in 0..=top {
        let piece = p.graded_component(&GradedSlice::Total(d));
        if piece.is_zero() {
            continue;
        }
        let r = Decomposer::new(ws, d, pipeline, order, allow_unstable)?.decompose(&piece)?;
        out.components.extend(r.components);
        out.residual = out.residual.add(&r.residual)?;
        out.warning = out.warning.or(r.warning);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct RefinementPiece {
    pub j: Vec<usize>,
    /// `dim M_{ℓ−|J|}`.
    pub dim: usize,
    /// Rank of `π(ux_J M_{ℓ−|J|})`.
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RefinementReport {
    pub m: usize,
    pub k: usize,
    pub degree: u32,
    pub pieces: Vec<RefinementPiece>,
    pub harmonic_dim: usize,
    pub rank: usize,
    pub pass: bool,
}

/// Checks `H_ℓ⊗S = ⊕_J π(ux_J M_{ℓ−|J|})` with `π` the harmonic projection.
pub fn harmonic_refinement(
    ws: &Workspace,
    degree: u32,
    allow_unstable: bool,
) -> Result<RefinementReport> {
    if !ws.in_stable_range() && !allow_unstable {
        return Err(FischerError::OutsideStableRange {
            m: ws.m(),
            k: ws.k(),
        });
    }
    let k = ws.k();
    let kind = ValueKind::Spinor;
    let mut subsets: Vec<Vec<usize>> = (0..=k).flat_map(|j| subsets_of_size(k, j)).collect();
    subsets.sort();
    subsets.retain(|j| j.len() as u32 <= degree);
    let mut pieces: Vec<RefinementPiece> = subsets
        .iter()
        .map(|j| RefinementPiece {
            j: j.clone(),
            dim: 0,
            rank: 0,
        })
        .collect();
    let (mut harmonic_dim, mut rank, mut harmonic_ok) = (0, 0, true);
    let laplacians: Vec<GeneratorTag> = crate::operators::triangular_split(k).p_minus;
    for a in multidegrees(k, degree) {
        let h = ws.harmonic_space(GradedSlice::Multi(a.clone()), kind)?;
        harmonic_dim += h.dim();
        let projector = h.projector();
        let mut block_space = RowSpace::new(h.chart().dim(), false);
        for (piece, j) in pieces.iter_mut().zip(&subsets) {
            let mut eps = vec![0u32; k];
            for &x in j {
                eps[x - 1] += 1;
            }
            let Some(b) = sub_multidegree(&a, &eps) else {
                continue;
            };
            let word: Vec<GeneratorTag> = j.iter().map(|&x| GeneratorTag::VecMul(x)).collect();
            let mut own = RowSpace::new(h.chart().dim(), false);
            for v in ws.monogenic_space(GradedSlice::Multi(b.clone()))?.vectors() {
                let (w, _) = apply_word(ws, kind, &word, &b, v)?;
                let pw = projector.project(&w);
                for &tag in &laplacians {
                    let shifted: Vec<i64> = a
                        .iter()
                        .zip(tag.shift(k))
                        .map(|(&x, s)| x as i64 + s as i64)
                        .collect();
                    if shifted.iter().all(|&x| x >= 0) {
                        let dst = ws.chart(
                            GradedSlice::Multi(shifted.iter().map(|&x| x as u32).collect()),
                            kind,
                        )?;
                        harmonic_ok &= apply_generator_coords(tag, h.chart(), &pw, &dst)?.is_zero();
                    }
                }
                piece.dim += 1;
                if own.insert(&pw) {
                    piece.rank += 1;
                }
                block_space.insert(&pw);
            }
        }
        rank += block_space.rank();
    }
    let total: usize = pieces.iter().map(|p| p.dim).sum();
    let pass = harmonic_ok
        && pieces.iter().all(|p| p.rank == p.dim)
        && rank == total
        && rank == harmonic_dim;
    Ok(RefinementReport {
        m: ws.m(),
        k,
        degree,
        pieces,
        harmonic_dim,
        rank,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::subspace::is_direct_sum;
    use crate::operators::apply_generator;

    fn idx(j: &[usize], n: &[u32], t: u32) -> SummandIndex {
        SummandIndex {
            j: j.to_vec(),
            n: n.to_vec(),
            t,
        }
    }

    #[test]
    fn enumeration() {
        let s = enumerate_summands(1, 2);
        assert_eq!(
            s,
            vec![idx(&[], &[0], 2), idx(&[1], &[0], 1), idx(&[], &[1], 0)]
        );
        let s = enumerate_summands(2, 1);
        assert_eq!(
            s,
            vec![
                idx(&[], &[0, 0, 0], 1),
                idx(&[1], &[0, 0, 0], 0),
                idx(&[2], &[0, 0, 0], 0)
            ]
        );
        let s = enumerate_summands(2, 2);
        assert_eq!(s.len(), 7);
        assert!(s.iter().all(|x| x.degree() == 2));
        assert_eq!(s[3], idx(&[], &[0, 0, 1], 0));
        assert_eq!(s[6], idx(&[1, 2], &[0, 0, 0], 0));
    }

    #[test]
    fn decomposition_examples() {
        let ws = Workspace::new(3, 1).unwrap();
        let r = verify_decomposition(&ws, 2, JOrder::Increasing, false).unwrap();
        assert!(r.pass);
        assert_eq!(
            r.summands.iter().map(|s| s.dim).collect::<Vec<_>>(),
            vec![6, 4, 2]
        );
        assert_eq!(r.ambient_dim, 12);
        let ws = Workspace::new(4, 2).unwrap();
        let r = verify_decomposition(&ws, 1, JOrder::Increasing, false).unwrap();
        assert!(r.pass);
        assert_eq!(
            r.summands.iter().map(|s| s.dim).collect::<Vec<_>>(),
            vec![24, 4, 4]
        );
        let r = verify_decomposition(&ws, 0, JOrder::Increasing, false).unwrap();
        assert_eq!((r.pass, r.total_dim), (true, 4));
        assert!(
            verify_decomposition(&ws, 2, JOrder::Decreasing, false)
                .unwrap()
                .pass
        );
        let unstable = Workspace::new(3, 2).unwrap();
        assert_eq!(
            verify_decomposition(&unstable, 1, JOrder::Increasing, false).unwrap_err(),
            FischerError::OutsideStableRange { m: 3, k: 2 }
        );
    }

    #[test]
    fn total_chart_route_agrees() {
        let ws = Workspace::new(4, 2).unwrap();
        let parts: Vec<SubspaceBasis> = enumerate_summands(2, 2)
            .iter()
            .map(|s| build_summand_basis(&ws, s, JOrder::Increasing).unwrap())
            .collect();
        let ambient = ws
            .chart(GradedSlice::Total(2), ValueKind::Spinor)
            .unwrap()
            .dim();
        let report = is_direct_sum(&parts, Some(ambient)).unwrap();
        assert!(report.pass, "{report:?}");
        let s = idx(&[1, 2], &[0, 0, 0], 0);
        assert_eq!(
            build_summand_basis(&ws, &s, JOrder::Increasing)
                .unwrap()
                .dim(),
            4
        );
    }

    #[test]
    fn decompositions() {
        let ws = Workspace::new(3, 1).unwrap();
        let s = ClPoly::constant(3, 1, ws.frame().basis()[0].clone());
        let r2s = apply_generator(GeneratorTag::Rsq(1, 1), &s).unwrap();
        let r = fischer_decompose(&ws, &r2s, false).unwrap();
        assert!(r.residual.is_zero());
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.components[0].index, idx(&[], &[1], 0));
        assert_eq!(r.reassemble().unwrap(), r2s);

        let m2 = ws
            .monogenic_space(GradedSlice::Total(2))
            .unwrap()
            .element(1);
        let r = fischer_decompose(&ws, &m2, false).unwrap();
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.components[0].base, m2);

        let mixed = m2.add(&r2s).unwrap().add(&s).unwrap();
        let r = fischer_decompose(&ws, &mixed, false).unwrap();
        assert!(r.residual.is_zero());
        assert_eq!(r.reassemble().unwrap(), mixed);
        let back = DecompositionResult::from_file(&r.to_file()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn refinement_examples() {
        let ws = Workspace::new(3, 1).unwrap();
        let r = harmonic_refinement(&ws, 1, false).unwrap();
        assert!(r.pass);
        assert_eq!(
            (r.harmonic_dim, r.pieces[0].dim, r.pieces[1].dim),
            (6, 4, 2)
        );
        let ws = Workspace::new(4, 2).unwrap();
        let r = harmonic_refinement(&ws, 1, false).unwrap();
        assert!(r.pass);
        assert_eq!(r.harmonic_dim, 32);
        let r = harmonic_refinement(&ws, 0, false).unwrap();
        assert_eq!((r.pass, r.harmonic_dim), (true, 4));
    }

    #[test]
    fn scalar_pipeline() {
        let ws = Workspace::new(4, 2).unwrap();
        for l in 0..=3 {
            assert!(verify_scalar_decomposition(&ws, l, false).unwrap().pass);
        }
    }
}
