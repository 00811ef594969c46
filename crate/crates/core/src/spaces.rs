//! Explicit bases of the polynomial spaces: `P⊗S`, harmonics, monogenics, their simplicial
//! parts, the `gl(k)`-generated components `M_(a)`, and the harmonic and monogenic
//! projections.
//!
//! Every space is computed as an exact kernel one multidegree block at a time (all operators
//! involved shift the multidegree by a fixed amount), then embedded into the total-degree chart.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::Rng;

use crate::clifford::{Chirality, SpinorFrame};
use crate::error::{FischerError, Result};
use crate::exactla::chart::{CoordinateChart, ValueKind};
use crate::exactla::matrix::{Echelon, ExactMatrix, RowSpace, SparseVec};
use crate::exactla::subspace::SubspaceBasis;
use crate::operators::{apply_generator_coords, operator_matrix, triangular_split, GeneratorTag};
use crate::poly::{multidegrees, ClPoly, GradedSlice};
use crate::scalar::ExactScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum SpaceKind {
    Harmonic,
    Monogenic,
    SimplicialHarmonic,
    SimplicialMonogenic,
}

type BlockKey = (SpaceKind, ValueKind, Vec<u32>);

/// Shared state for one `(m, k)`: the spinor frame plus memoized charts and block kernels.
/// Memoized values are deterministic functions of their keys.
#[derive(Debug)]
pub struct Workspace {
    m: usize,
    k: usize,
    frame: Arc<SpinorFrame>,
    charts: Mutex<HashMap<(GradedSlice, ValueKind), Arc<CoordinateChart>>>,
    blocks: Mutex<HashMap<BlockKey, Arc<SubspaceBasis>>>,
}

pub fn is_partition(a: &[u32]) -> bool {
    a.windows(2).all(|w| w[0] >= w[1])
}

fn require_partition(a: &[u32]) -> Result<()> {
    if is_partition(a) {
        Ok(())
    } else {
        Err(FischerError::NotPartition(format!("{a:?}")))
    }
}

impl Workspace {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(FischerError::Unsupported("k must be at least 1".into()));
        }
        Ok(Workspace {
            m,
            k,
            frame: Arc::new(SpinorFrame::build(m)?),
            charts: Mutex::new(HashMap::new()),
            blocks: Mutex::new(HashMap::new()),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn frame(&self) -> &Arc<SpinorFrame> {
        &self.frame
    }

    pub fn in_stable_range(&self) -> bool {
        self.m >= 2 * self.k
    }

    pub fn chart(&self, slice: GradedSlice, kind: ValueKind) -> Result<Arc<CoordinateChart>> {
        if let GradedSlice::Multi(a) = &slice {
            if a.len() != self.k {
                return Err(FischerError::DimensionMismatch(format!(
                    "multidegree {a:?} for k = {}",
                    self.k
                )));
            }
        }
        let key = (slice, kind);
        if let Some(c) = self.charts.lock().expect("chart cache").get(&key) {
            return Ok(c.clone());
        }
        let chart = Arc::new(match kind {
            ValueKind::Scalar => CoordinateChart::scalar(self.m, self.k, key.0.clone()),
            ValueKind::Spinor => CoordinateChart::spinor(self.frame.clone(), self.k, key.0.clone()),
            ValueKind::HalfSpinor(c) => {
                CoordinateChart::half_spinor(self.frame.clone(), self.k, key.0.clone(), c)?
            }
        });
        Ok(self
            .charts
            .lock()
            .expect("chart cache")
            .entry(key)
            .or_insert(chart)
            .clone())
    }

    /// Full monomial(-blade) basis of a slice.
    pub fn monomial_basis(&self, slice: GradedSlice, kind: ValueKind) -> Result<SubspaceBasis> {
        Ok(SubspaceBasis::full(self.chart(slice, kind)?))
    }

    /// Joint kernel of `ops` on the multidegree block `a`.
    fn block_kernel(
        &self,
        a: &[u32],
        kind: ValueKind,
        ops: &[GeneratorTag],
    ) -> Result<SubspaceBasis> {
        let src = self.chart(GradedSlice::Multi(a.to_vec()), kind)?;
        let dst_kind = match kind {
            ValueKind::HalfSpinor(_) => ValueKind::Spinor,
            other => other,
        };
        let mut rows: Vec<Vec<(usize, ExactScalar)>> = Vec::new();
        for &tag in ops {
            let target: Vec<i64> = a
                .iter()
                .zip(tag.shift(self.k))
                .map(|(&x, s)| x as i64 + s as i64)
                .collect();
            if target.iter().any(|&x| x < 0) {
                continue;
            }
            let dst = self.chart(
                GradedSlice::Multi(target.iter().map(|&x| x as u32).collect()),
                dst_kind,
            )?;
            let images = operator_matrix(&tag.into(), &src, &dst)?;
            let offset = rows.len();
            rows.resize(offset + dst.dim(), Vec::new());
            for (p, image) in images.rows().iter().enumerate() {
                for (q, v) in image.iter() {
                    rows[offset + q].push((p, v.clone()));
                }
            }
        }
        let matrix = ExactMatrix::from_rows(
            rows.into_iter().map(SparseVec::from_entries).collect(),
            src.dim(),
        );
        Ok(SubspaceBasis::from_independent(
            src,
            Echelon::rows_only(&matrix).kernel_basis(),
        ))
    }

    fn cached_block(
        &self,
        space: SpaceKind,
        kind: ValueKind,
        a: &[u32],
    ) -> Result<Arc<SubspaceBasis>> {
        if a.len() != self.k {
            return Err(FischerError::DimensionMismatch(format!(
                "multidegree {a:?} for k = {}",
                self.k
            )));
        }
        if kind != ValueKind::Scalar && matches!(space, SpaceKind::SimplicialHarmonic) {
            return Err(FischerError::Unsupported(
                "simplicial harmonics are scalar-valued".into(),
            ));
        }
        if kind == ValueKind::Scalar
            && matches!(space, SpaceKind::Monogenic | SpaceKind::SimplicialMonogenic)
        {
            return Err(FischerError::Unsupported(
                "monogenics are spinor-valued".into(),
            ));
        }
        let key = (space, kind, a.to_vec());
        if let Some(b) = self.blocks.lock().expect("block cache").get(&key) {
            return Ok(b.clone());
        }
        let split = triangular_split(self.k);
        let ops: Vec<GeneratorTag> = match space {
            SpaceKind::Harmonic => split.p_minus,
            SpaceKind::Monogenic => split.f_minus,
            SpaceKind::SimplicialHarmonic => [split.p_minus, split.t_minus].concat(),
            SpaceKind::SimplicialMonogenic => [split.f_minus, split.t_minus].concat(),
        };
        let basis = Arc::new(self.block_kernel(a, kind, &ops)?);
        Ok(self
            .blocks
            .lock()
            .expect("block cache")
            .entry(key)
            .or_insert(basis)
            .clone())
    }

    /// Re-expresses block vectors in the chart of the containing total-degree slice.
    pub fn embed(&self, block: &SubspaceBasis, total: &CoordinateChart) -> Vec<SparseVec> {
        let chart = block.chart();
        let f = chart.fiber_dim();
        debug_assert_eq!(f, total.fiber_dim());
        let map: Vec<usize> = chart
            .monomials()
            .iter()
            .map(|e| {
                total
                    .monomial_index(e)
                    .expect("block monomial in total slice")
            })
            .collect();
        block
            .vectors()
            .iter()
            .map(|v| v.remap(|i| map[i / f] * f + i % f))
            .collect()
    }

    fn assemble(
        &self,
        space: SpaceKind,
        slice: GradedSlice,
        kind: ValueKind,
    ) -> Result<SubspaceBasis> {
        match slice {
            GradedSlice::Multi(a) => Ok((*self.cached_block(space, kind, &a)?).clone()),
            GradedSlice::Total(l) => {
                let total = self.chart(GradedSlice::Total(l), kind)?;
                let mut vectors = Vec::new();
                for a in multidegrees(self.k, l) {
                    vectors.extend(self.embed(&*self.cached_block(space, kind, &a)?, &total));
                }
                vectors.sort_by_key(|v| v.first().map(|(i, _)| *i));
                Ok(SubspaceBasis::from_independent(total, vectors))
            }
        }
    }

    /// `H = ker p_−`: the joint kernel of all `Δ_ij` on a slice.
    pub fn harmonic_space(&self, slice: GradedSlice, kind: ValueKind) -> Result<SubspaceBasis> {
        self.assemble(SpaceKind::Harmonic, slice, kind)
    }

    /// Joint kernel of the `k` Dirac operators on a spinor slice.
    pub fn monogenic_space(&self, slice: GradedSlice) -> Result<SubspaceBasis> {
        self.assemble(SpaceKind::Monogenic, slice, ValueKind::Spinor)
    }

    /// Chiral monogenics (even `m`).
    pub fn chiral_monogenic_space(
        &self,
        slice: GradedSlice,
        chirality: Chirality,
    ) -> Result<SubspaceBasis> {
        self.assemble(
            SpaceKind::Monogenic,
            slice,
            ValueKind::HalfSpinor(chirality),
        )
    }

    /// `M^S_a = M_a ∩ ker t_−`, optionally restricted to one half-spinor space.
    pub fn simplicial_monogenics(
        &self,
        a: &[u32],
        chirality: Option<Chirality>,
    ) -> Result<SubspaceBasis> {
        require_partition(a)?;
        let kind = chirality.map_or(ValueKind::Spinor, ValueKind::HalfSpinor);
        Ok((*self.cached_block(SpaceKind::SimplicialMonogenic, kind, a)?).clone())
    }

    /// `H^S_a = H_a ∩ ker t_−`, scalar-valued.
    pub fn simplicial_harmonics(&self, a: &[u32]) -> Result<SubspaceBasis> {
        require_partition(a)?;
        Ok((*self.cached_block(SpaceKind::SimplicialHarmonic, ValueKind::Scalar, a)?).clone())
    }

    /// Dimension of `ker t_− ∩ M_a` for any multidegree, partition or not.
    pub fn simplicial_monogenic_dim_any(&self, a: &[u32]) -> Result<usize> {
        Ok(self
            .cached_block(SpaceKind::SimplicialMonogenic, ValueKind::Spinor, a)?
            .dim())
    }

    /// `M_(a)`: the closure of `M^S_a` under the raising generators `t_+`, as a subspace of
    /// the total-degree slice `|a|`.
    pub fn generate_m_component(&self, a: &[u32]) -> Result<SubspaceBasis> {
        let seed = self.simplicial_monogenics(a, None)?;
        let l: u32 = a.iter().sum();
        let total = self.chart(GradedSlice::Total(l), ValueKind::Spinor)?;
        let raising = triangular_split(self.k).t_plus;
        let mut space = RowSpace::new(total.dim(), false);
        let mut kept = Vec::new();
        let mut queue: Vec<SparseVec> = self.embed(&seed, &total);
        while let Some(v) = queue.pop() {
            if !space.insert(&v) {
                continue;
            }
            for &tag in &raising {
                let w = apply_generator_coords(tag, &total, &v, &total)?;
                if !w.is_zero() && !space.contains(&w) {
                    queue.push(w);
                }
            }
            kept.push(v);
        }
        Ok(SubspaceBasis::from_independent(total, kept))
    }

    /// Checks `M_ℓ = M^S_ℓ + Σ_{i<j} h_ji M_ℓ` as an equality of spans, where `M^S_ℓ` runs
    /// over all partitions of `ℓ`.
    pub fn monogenic_span_identity(&self, l: u32) -> Result<bool> {
        let m_l = self.monogenic_space(GradedSlice::Total(l))?;
        let total = m_l.chart().clone();
        let mut span = RowSpace::new(total.dim(), false);
        for a in multidegrees(self.k, l)
            .into_iter()
            .filter(|a| is_partition(a))
        {
            for v in self.embed(&self.simplicial_monogenics(&a, None)?, &total) {
                span.insert(&v);
            }
        }
        for &tag in &triangular_split(self.k).t_plus {
            for v in m_l.vectors() {
                span.insert(&apply_generator_coords(tag, &total, v, &total)?);
            }
        }
        let target = m_l.row_space(false);
        Ok(span.rank() == m_l.dim() && span.basis().iter().all(|v| target.contains(v)))
    }

    /// Chooses the value space of a polynomial: spinor-valued if every coefficient lies in
    /// the spinor ideal, scalar if every coefficient is scalar.
    fn classify(&self, p: &ClPoly, allow_scalar: bool) -> Result<ValueKind> {
        if (p.m(), p.k()) != (self.m, self.k) {
            return Err(FischerError::DimensionMismatch(format!(
                "polynomial (m, k) = ({}, {}) vs workspace ({}, {})",
                p.m(),
                p.k(),
                self.m,
                self.k
            )));
        }
        if p.is_spinor_valued(&self.frame) {
            return Ok(ValueKind::Spinor);
        }
        if allow_scalar
            && p.terms()
                .all(|(_, c)| c.len() == 1 && !c.scalar_part().is_zero())
        {
            return Ok(ValueKind::Scalar);
        }
        Err(FischerError::NotInIdeal)
    }

    fn project(&self, p: &ClPoly, space: SpaceKind, kind: ValueKind) -> Result<ClPoly> {
        if p.is_zero() {
            return Ok(p.clone());
        }
        let l = p.homogeneous_degree().ok_or(FischerError::Inhomogeneous)?;
        let mut out = ClPoly::zero(self.m, self.k);
        for a in multidegrees(self.k, l) {
            let part = p.graded_component(&GradedSlice::Multi(a.clone()));
            if part.is_zero() {
                continue;
            }
            let block = self.cached_block(space, kind, &a)?;
            let v = block.chart().to_coords(&part)?;
            out = out.add(&block.chart().from_coords(&block.orthogonal_projection(&v)))?;
        }
        Ok(out)
    }

    /// Fischer-orthogonal projection onto the harmonics of the same degree; its kernel is
    /// `Σ r²_ij·P_{ℓ−2}`. Accepts spinor-valued or scalar polynomials.
    pub fn harmonic_projection(&self, p: &ClPoly) -> Result<ClPoly> {
        let kind = self.classify(p, true)?;
        self.project(p, SpaceKind::Harmonic, kind)
    }

    /// Fischer-orthogonal projection onto the monogenics of the same degree; its kernel is
    /// `Σ_j ux_j·(P_{ℓ−1}⊗S)`.
    pub fn monogenic_projection(&self, p: &ClPoly) -> Result<ClPoly> {
        let kind = self.classify(p, false)?;
        self.project(p, SpaceKind::Monogenic, kind)
    }
}

/// Uniformly random coordinates with real and imaginary parts in `-3..=3`.
pub fn random_element(chart: &CoordinateChart, rng: &mut impl Rng) -> ClPoly {
    let v = SparseVec::from_entries(
        (0..chart.dim())
            .map(|i| {
                (
                    i,
                    ExactScalar::gaussian(rng.gen_range(-3..=3), rng.gen_range(-3..=3)),
                )
            })
            .collect(),
    );
    chart.from_coords(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::apply_generator;
    use crate::poly::fischer_inner;

    #[test]
    fn monomial_dims() {
        let ws = Workspace::new(3, 1).unwrap();
        assert_eq!(
            ws.monomial_basis(GradedSlice::Total(2), ValueKind::Scalar)
                .unwrap()
                .dim(),
            6
        );
        let ws = Workspace::new(4, 2).unwrap();
        assert_eq!(
            ws.monomial_basis(GradedSlice::Total(1), ValueKind::Spinor)
                .unwrap()
                .dim(),
            32
        );
        assert_eq!(
            ws.monomial_basis(GradedSlice::Total(0), ValueKind::Spinor)
                .unwrap()
                .dim(),
            4
        );
    }

    #[test]
    fn kernel_dims() {
        let ws = Workspace::new(3, 1).unwrap();
        assert_eq!(
            ws.harmonic_space(GradedSlice::Total(2), ValueKind::Scalar)
                .unwrap()
                .dim(),
            5
        );
        assert_eq!(ws.monogenic_space(GradedSlice::Total(2)).unwrap().dim(), 6);
        let ws = Workspace::new(4, 2).unwrap();
        assert_eq!(ws.monogenic_space(GradedSlice::Total(1)).unwrap().dim(), 24);
        assert_eq!(ws.monogenic_space(GradedSlice::Total(0)).unwrap().dim(), 4);
        assert_eq!(ws.simplicial_harmonics(&[0, 0]).unwrap().dim(), 1);
        let ws = Workspace::new(4, 1).unwrap();
        assert_eq!(
            ws.harmonic_space(GradedSlice::Total(0), ValueKind::Scalar)
                .unwrap()
                .dim(),
            1
        );
        assert_eq!(ws.simplicial_harmonics(&[2]).unwrap().dim(), 9);
        let ws = Workspace::new(5, 2).unwrap();
        assert_eq!(ws.simplicial_monogenics(&[1, 0], None).unwrap().dim(), 16);
        assert_eq!(ws.simplicial_harmonics(&[1, 1]).unwrap().dim(), 10);
        assert_eq!(ws.simplicial_monogenics(&[0, 0], None).unwrap().dim(), 4);
        assert!(ws.simplicial_monogenics(&[0, 1], None).is_err());
        assert_eq!(ws.simplicial_monogenic_dim_any(&[0, 1]).unwrap(), 0);
    }

    #[test]
    fn monogenic_elements_are_annihilated() {
        let ws = Workspace::new(4, 2).unwrap();
        for p in ws
            .monogenic_space(GradedSlice::Total(2))
            .unwrap()
            .elements()
        {
            for j in 1..=2 {
                assert!(apply_generator(GeneratorTag::Dirac(j), &p)
                    .unwrap()
                    .is_zero());
            }
        }
    }

    #[test]
    fn m_components() {
        let ws = Workspace::new(5, 2).unwrap();
        let comp = ws.generate_m_component(&[1, 0]).unwrap();
        assert_eq!(comp.dim(), 32);
        assert_eq!(ws.monogenic_space(GradedSlice::Total(1)).unwrap().dim(), 32);
        assert!(ws.monogenic_span_identity(2).unwrap());
        let ws = Workspace::new(3, 1).unwrap();
        assert_eq!(
            ws.generate_m_component(&[2]).unwrap().dim(),
            ws.simplicial_monogenics(&[2], None).unwrap().dim()
        );
    }

    #[test]
    fn projections() {
        let ws = Workspace::new(3, 1).unwrap();
        let s = ClPoly::constant(3, 1, ws.frame().basis()[0].clone());
        let r2s = apply_generator(GeneratorTag::Rsq(1, 1), &s).unwrap();
        assert!(ws.harmonic_projection(&r2s).unwrap().is_zero());
        let xs = apply_generator(GeneratorTag::VecMul(1), &s).unwrap();
        assert!(ws.monogenic_projection(&xs).unwrap().is_zero());
        let m1 = ws
            .monogenic_space(GradedSlice::Total(1))
            .unwrap()
            .elements();
        assert_eq!(ws.monogenic_projection(&m1[0]).unwrap(), m1[0]);
        for v in &m1 {
            let xv = apply_generator(GeneratorTag::VecMul(1), v).unwrap();
            let pi = ws.harmonic_projection(&xv).unwrap();
            assert!(!pi.is_zero());
            assert!(fischer_inner(&pi, &r2s).unwrap().is_zero());
            assert_eq!(ws.harmonic_projection(&pi).unwrap(), pi);
        }
        let mixed = xs
            .add(&ClPoly::constant(3, 1, ws.frame().basis()[1].clone()))
            .unwrap();
        assert_eq!(
            ws.harmonic_projection(&mixed).unwrap_err(),
            FischerError::Inhomogeneous
        );
    }
}
