//! Explicit bases of subspaces of a graded slice, and the Fischer-geometric operations on them.

use std::sync::Arc;

use crate::error::{FischerError, Result};
use crate::exactla::chart::CoordinateChart;
use crate::exactla::matrix::{
    direct_sum_report, DirectSumReport, Echelon, ExactMatrix, RowSpace, SparseVec,
};
use crate::poly::{fischer_inner, ClPoly};

/// An ordered, linearly independent list of vectors in one chart.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    chart: Arc<CoordinateChart>,
    vectors: Vec<SparseVec>,
}

impl SubspaceBasis {
    /// Fails unless the vectors are linearly independent.
    pub fn new(chart: Arc<CoordinateChart>, vectors: Vec<SparseVec>) -> Result<Self> {
        let space = RowSpace::from_rows(vectors.iter().cloned(), chart.dim(), false);
        if space.rank() != vectors.len() {
            return Err(FischerError::Verification(format!(
                "basis vectors are dependent: rank {} < {}",
                space.rank(),
                vectors.len()
            )));
        }
        Ok(SubspaceBasis { chart, vectors })
    }

    /// Keeps, in order, each vector not in the span of the ones kept before it.
    pub fn spanned_by(
        chart: Arc<CoordinateChart>,
        vectors: impl IntoIterator<Item = SparseVec>,
    ) -> Self {
        let mut space = RowSpace::new(chart.dim(), false);
        let kept = vectors.into_iter().filter(|v| space.insert(v)).collect();
        SubspaceBasis {
            chart,
            vectors: kept,
        }
    }

    pub(crate) fn from_independent(chart: Arc<CoordinateChart>, vectors: Vec<SparseVec>) -> Self {
        SubspaceBasis { chart, vectors }
    }

    /// The whole slice, in chart order.
    pub fn full(chart: Arc<CoordinateChart>) -> Self {
        let vectors = (0..chart.dim()).map(SparseVec::unit).collect();
        SubspaceBasis { chart, vectors }
    }

    pub fn zero(chart: Arc<CoordinateChart>) -> Self {
        SubspaceBasis {
            chart,
            vectors: Vec::new(),
        }
    }

    pub fn from_polys(chart: Arc<CoordinateChart>, polys: &[ClPoly]) -> Result<Self> {
        let vectors = polys
            .iter()
            .map(|p| chart.to_coords(p))
            .collect::<Result<Vec<_>>>()?;
        SubspaceBasis::new(chart, vectors)
    }

    pub fn chart(&self) -> &Arc<CoordinateChart> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[SparseVec] {
        &self.vectors
    }

    pub fn element(&self, i: usize) -> ClPoly {
        self.chart.from_coords(&self.vectors[i])
    }

    pub fn elements(&self) -> Vec<ClPoly> {
        self.vectors
            .iter()
            .map(|v| self.chart.from_coords(v))
            .collect()
    }

    /// Coordinate matrix: one row per basis vector.
    pub fn coords(&self) -> ExactMatrix {
        ExactMatrix::from_rows(self.vectors.clone(), self.chart.dim())
    }

    pub fn row_space(&self, track: bool) -> RowSpace {
        RowSpace::from_rows(self.vectors.iter().cloned(), self.chart.dim(), track)
    }

    pub fn contains(&self, poly: &ClPoly) -> Result<bool> {
        let v = match self.chart.to_coords(poly) {
            Ok(v) => v,
            Err(FischerError::OutsideSlice(_)) | Err(FischerError::NotInIdeal) => return Ok(false),
            Err(e) => return Err(e),
        };
        Ok(self.row_space(false).contains(&v))
    }

    /// Gram matrix `G[p][q] = ⟨v_p, v_q⟩`.
    pub fn gram(&self) -> ExactMatrix {
        let n = self.vectors.len();
        let mut rows = vec![Vec::new(); n];
        for p in 0..n {
            for q in p..n {
                let g = self.chart.fischer(&self.vectors[p], &self.vectors[q]);
                if !g.is_zero() {
                    if p != q {
                        rows[q].push((p, g.conj()));
                    }
                    rows[p].push((q, g));
                }
            }
        }
        ExactMatrix::from_rows(rows.into_iter().map(SparseVec::from_entries).collect(), n)
    }

    /// Fischer-orthogonal projection of a chart vector onto this subspace.
    pub fn orthogonal_projection(&self, v: &SparseVec) -> SparseVec {
        self.projector().project(v)
    }

    /// Orthogonal projector with the Gram matrix factored once.
    pub fn projector(&self) -> Projector<'_> {
        Projector {
            basis: self,
            gram: Echelon::new(&self.gram()),
        }
    }
}

/// Fischer-orthogonal projection onto a fixed subspace.
pub struct Projector<'a> {
    basis: &'a SubspaceBasis,
    gram: Echelon,
}

impl Projector<'_> {
    /// Coefficients `c` of the projection `Σ c_p v_p` in the subspace basis.
    pub fn coefficients(&self, v: &SparseVec) -> SparseVec {
        let b = self.basis;
        let rhs = SparseVec::from_entries(
            b.vectors
                .iter()
                .enumerate()
                .map(|(p, u)| (p, b.chart.fischer(u, v)))
                .collect(),
        );
        self.gram
            .solve(&rhs)
            .expect("Gram matrix of a basis is invertible")
    }

    pub fn project(&self, v: &SparseVec) -> SparseVec {
        combine(&self.basis.vectors, &self.coefficients(v))
    }
}

fn same_chart(a: &CoordinateChart, b: &CoordinateChart) -> bool {
    a.m() == b.m() && a.k() == b.k() && a.slice() == b.slice() && a.kind() == b.kind()
}

/// Gram matrix of polynomials lying in one graded slice.
pub fn gram(vectors: &[ClPoly]) -> Result<ExactMatrix> {
    let degree = vectors
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.homogeneous_degree())
        .collect::<Vec<_>>();
    if degree.iter().any(Option::is_none) || degree.windows(2).any(|w| w[0] != w[1]) {
        return Err(FischerError::DimensionMismatch(
            "Gram vectors lie in different graded slices".into(),
        ));
    }
    let n = vectors.len();
    let mut rows = Vec::with_capacity(n);
    for p in vectors {
        let mut row = Vec::with_capacity(n);
        for q in vectors {
            row.push(fischer_inner(p, q)?);
        }
        rows.push(row);
    }
    Ok(ExactMatrix::from_dense(&rows))
}

/// `{v ∈ ambient : ⟨v, s⟩ = 0 for all s ∈ sub}`.
pub fn orthogonal_complement(
    ambient: &SubspaceBasis,
    sub: &SubspaceBasis,
) -> Result<SubspaceBasis> {
    if !same_chart(ambient.chart(), sub.chart()) {
        return Err(FischerError::DimensionMismatch(
            "subspaces live in different slices".into(),
        ));
    }
    let space = ambient.row_space(false);
    if !sub.vectors().iter().all(|s| space.contains(s)) {
        return Err(FischerError::Membership);
    }
    let chart = ambient.chart();
    let constraints: Vec<SparseVec> = sub
        .vectors()
        .iter()
        .map(|s| {
            SparseVec::from_entries(
                ambient
                    .vectors()
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (i, chart.fischer(s, a)))
                    .collect(),
            )
        })
        .collect();
    let kernel =
        Echelon::rows_only(&ExactMatrix::from_rows(constraints, ambient.dim())).kernel_basis();
    let vectors: Vec<SparseVec> = kernel
        .iter()
        .map(|c| {
            let mut v = SparseVec::new();
            for (i, x) in c.iter() {
                v = v.axpy(x, &ambient.vectors()[*i]);
            }
            v
        })
        .collect();
    let out = SubspaceBasis::new(chart.clone(), vectors)?;
    if out.dim() + sub.dim() != ambient.dim() {
        return Err(FischerError::Verification(
            "complement dimensions do not add up".into(),
        ));
    }
    Ok(out)
}

/// Directness of `Σ parts`, and spanning when `ambient_dim` is given.
pub fn is_direct_sum(
    parts: &[SubspaceBasis],
    ambient_dim: Option<usize>,
) -> Result<DirectSumReport> {
    let Some(first) = parts.first() else {
        return Ok(direct_sum_report(&[], 0, ambient_dim));
    };
    if parts.iter().any(|p| !same_chart(p.chart(), first.chart())) {
        return Err(FischerError::DimensionMismatch(
            "direct-sum parts live in different slices".into(),
        ));
    }
    let vecs: Vec<Vec<SparseVec>> = parts.iter().map(|p| p.vectors().to_vec()).collect();
    Ok(direct_sum_report(&vecs, first.chart().dim(), ambient_dim))
}

/// `Σ c_i·v_i`.
pub fn combine(vectors: &[SparseVec], coeffs: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (i, c) in coeffs.iter() {
        out = out.axpy(c, &vectors[*i]);
    }
    out
}
