//! Coordinates on a graded slice `P_ℓ⊗S`, `P_a⊗S` (or scalar `P_ℓ`, `P_a`).

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::clifford::{Chirality, CliffordElement, SpinorFrame};
use crate::error::{FischerError, Result};
use crate::exactla::matrix::SparseVec;
use crate::poly::{monomials, ClPoly, GradedSlice, MultiExponent};
use crate::scalar::{ExactScalar, Rational};

/// Value space of a slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ValueKind {
    Scalar,
    Spinor,
    /// Values in one half-spinor space (even `m` only).
    HalfSpinor(Chirality),
}

/// Ordered monomial × fiber basis of a slice. Coordinate `p·F + f` belongs to monomial `p`
/// (decreasing lexicographic exponent order) and fiber element `f` (frame basis order).
#[derive(Clone, Debug)]
pub struct CoordinateChart {
    m: usize,
    k: usize,
    slice: GradedSlice,
    kind: ValueKind,
    monomials: Vec<MultiExponent>,
    index: HashMap<MultiExponent, usize>,
    frame: Option<Arc<SpinorFrame>>,
    /// Frame basis indices in use; `[0]` for scalar charts.
    fiber: Vec<usize>,
    fiber_pos: Vec<Option<usize>>,
    factorials: Vec<Rational>,
}

impl CoordinateChart {
    pub fn scalar(m: usize, k: usize, slice: GradedSlice) -> Self {
        Self::build(m, k, slice, ValueKind::Scalar, None, vec![0])
    }

    pub fn spinor(frame: Arc<SpinorFrame>, k: usize, slice: GradedSlice) -> Self {
        let fiber = (0..frame.dim()).collect();
        Self::build(frame.m(), k, slice, ValueKind::Spinor, Some(frame), fiber)
    }

    pub fn half_spinor(
        frame: Arc<SpinorFrame>,
        k: usize,
        slice: GradedSlice,
        chirality: Chirality,
    ) -> Result<Self> {
        if frame.m() % 2 == 1 {
            return Err(FischerError::Unsupported("half-spinors need even m".into()));
        }
        let fiber = (0..frame.dim())
            .filter(|&s| frame.chirality(s) == Some(chirality))
            .collect();
        Ok(Self::build(
            frame.m(),
            k,
            slice,
            ValueKind::HalfSpinor(chirality),
            Some(frame),
            fiber,
        ))
    }

    /// Same value space and frame, different slice.
    pub fn with_slice(&self, slice: GradedSlice) -> Self {
        Self::build(
            self.m,
            self.k,
            slice,
            self.kind,
            self.frame.clone(),
            self.fiber.clone(),
        )
    }

    /// Same slice and frame with a different value space.
    pub fn with_kind(&self, kind: ValueKind) -> Result<Self> {
        match kind {
            ValueKind::Scalar => Ok(Self::scalar(self.m, self.k, self.slice.clone())),
            ValueKind::Spinor => Ok(Self::spinor(
                self.require_frame()?.clone(),
                self.k,
                self.slice.clone(),
            )),
            ValueKind::HalfSpinor(c) => {
                Self::half_spinor(self.require_frame()?.clone(), self.k, self.slice.clone(), c)
            }
        }
    }

    fn build(
        m: usize,
        k: usize,
        slice: GradedSlice,
        kind: ValueKind,
        frame: Option<Arc<SpinorFrame>>,
        fiber: Vec<usize>,
    ) -> Self {
        let monomials = monomials(m, k, &slice);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let fiber_len = frame.as_ref().map_or(1, |f| f.dim());
        let mut fiber_pos = vec![None; fiber_len];
        for (p, &s) in fiber.iter().enumerate() {
            fiber_pos[s] = Some(p);
        }
        let factorials = monomials.iter().map(MultiExponent::factorial).collect();
        CoordinateChart {
            m,
            k,
            slice,
            kind,
            monomials,
            index,
            frame,
            fiber,
            fiber_pos,
            factorials,
        }
    }

    fn require_frame(&self) -> Result<&Arc<SpinorFrame>> {
        self.frame
            .as_ref()
            .ok_or_else(|| FischerError::Unsupported("scalar chart has no spinor frame".into()))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn slice(&self) -> &GradedSlice {
        &self.slice
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    pub fn frame(&self) -> Option<&Arc<SpinorFrame>> {
        self.frame.as_ref()
    }

    pub fn monomials(&self) -> &[MultiExponent] {
        &self.monomials
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber.len()
    }

    /// Position of frame basis element `s` within this chart's fiber.
    pub fn fiber_position(&self, s: usize) -> Option<usize> {
        self.fiber_pos.get(s).copied().flatten()
    }

    pub fn dim(&self) -> usize {
        self.monomials.len() * self.fiber.len()
    }

    pub fn monomial_index(&self, e: &MultiExponent) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Splits a coordinate index into `(monomial, frame basis index)`.
    pub fn locate(&self, idx: usize) -> (usize, usize) {
        let f = self.fiber.len();
        (idx / f, self.fiber[idx % f])
    }

    fn fiber_element(&self, s: usize) -> CliffordElement {
        match &self.frame {
            Some(frame) => frame.basis()[s].clone(),
            None => CliffordElement::one(self.m),
        }
    }

    pub fn basis_element(&self, idx: usize) -> ClPoly {
        let (p, s) = self.locate(idx);
        ClPoly::monomial(
            self.m,
            self.k,
            self.monomials[p].clone(),
            self.fiber_element(s),
        )
    }

    /// Coordinates of a polynomial contained in the slice.
    pub fn to_coords(&self, poly: &ClPoly) -> Result<SparseVec> {
        if (poly.m(), poly.k()) != (self.m, self.k) {
            return Err(FischerError::DimensionMismatch(format!(
                "polynomial (m, k) = ({}, {}) vs chart ({}, {})",
                poly.m(),
                poly.k(),
                self.m,
                self.k
            )));
        }
        let f = self.fiber.len();
        let mut entries = Vec::new();
        for (e, c) in poly.terms() {
            let p = self.monomial_index(e).ok_or_else(|| {
                FischerError::OutsideSlice(format!("monomial {e:?} not in {}", self.slice))
            })?;
            match &self.frame {
                None => {
                    if c.len() != 1 || c.scalar_part().is_zero() {
                        return Err(FischerError::OutsideSlice(
                            "non-scalar coefficient in a scalar chart".into(),
                        ));
                    }
                    entries.push((p, c.scalar_part()));
                }
                Some(frame) => {
                    for (s, v) in frame.coordinates(c)?.iter() {
                        let pos = self.fiber_pos[*s].ok_or_else(|| {
                            FischerError::OutsideSlice(
                                "coefficient leaves the chart's half-spinor space".into(),
                            )
                        })?;
                        entries.push((p * f + pos, v.clone()));
                    }
                }
            }
        }
        Ok(SparseVec::from_entries(entries))
    }

    pub fn from_coords(&self, v: &SparseVec) -> ClPoly {
        let mut out = ClPoly::zero(self.m, self.k);
        let f = self.fiber.len();
        let mut i = 0;
        let entries = v.entries();
        while i < entries.len() {
            let p = entries[i].0 / f;
            let mut coeff = CliffordElement::zero(self.m);
            while i < entries.len() && entries[i].0 / f == p {
                let s = self.fiber[entries[i].0 % f];
                self.fiber_element(s)
                    .add_scaled_into(&entries[i].1, &mut coeff);
                i += 1;
            }
            out.add_term(self.monomials[p].clone(), &coeff);
        }
        out
    }

    /// Fischer inner product in coordinates, conjugate-linear in `u`.
    pub fn fischer(&self, u: &SparseVec, v: &SparseVec) -> ExactScalar {
        let f = self.fiber.len();
        let mut acc = ExactScalar::zero();
        match &self.frame {
            Some(frame) if !self.frame_gram_diagonal(frame) => {
                let vmap: HashMap<usize, &ExactScalar> = v.iter().map(|(i, x)| (*i, x)).collect();
                for (i, x) in u.iter() {
                    let p = i / f;
                    let s = self.fiber[i % f];
                    for (pos, &t) in self.fiber.iter().enumerate() {
                        if let Some(y) = vmap.get(&(p * f + pos)) {
                            let g = &frame.gram()[s][t];
                            acc += &(&(&x.conj() * g) * y).scale(&self.factorials[p]);
                        }
                    }
                }
            }
            _ => {
                let (mut a, mut b) = (u.iter().peekable(), v.iter().peekable());
                while let (Some((i, x)), Some((j, y))) = (a.peek(), b.peek()) {
                    if i < j {
                        a.next();
                    } else if j < i {
                        b.next();
                    } else {
                        let w = self.weight(*i);
                        acc += &(&x.conj() * y).scale(&w);
                        a.next();
                        b.next();
                    }
                }
            }
        }
        acc
    }

    fn frame_gram_diagonal(&self, frame: &SpinorFrame) -> bool {
        frame
            .gram()
            .iter()
            .enumerate()
            .all(|(s, row)| row.iter().enumerate().all(|(t, g)| s == t || g.is_zero()))
    }

    /// Diagonal Fischer weight of a coordinate (valid when the frame Gram block is diagonal).
    pub fn weight(&self, idx: usize) -> Rational {
        let (p, s) = self.locate(idx);
        match &self.frame {
            Some(frame) => &self.factorials[p] * &frame.gram()[s][s].re,
            None => self.factorials[p].clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_round_trip_and_dims() {
        let frame = Arc::new(SpinorFrame::build(4).unwrap());
        let chart = CoordinateChart::spinor(frame.clone(), 2, GradedSlice::Total(1));
        assert_eq!(chart.dim(), 32);
        for idx in [0, 5, 31] {
            let p = chart.basis_element(idx);
            assert_eq!(chart.to_coords(&p).unwrap(), SparseVec::unit(idx));
        }
        let v = SparseVec::from_entries(vec![
            (3, ExactScalar::gaussian(1, 2)),
            (17, ExactScalar::from_ratio(-1, 3)),
        ]);
        assert_eq!(chart.to_coords(&chart.from_coords(&v)).unwrap(), v);
        let scalar = CoordinateChart::scalar(3, 1, GradedSlice::Total(2));
        assert_eq!(scalar.dim(), 6);
        let plus =
            CoordinateChart::half_spinor(frame, 2, GradedSlice::Total(0), Chirality::Plus).unwrap();
        assert_eq!(plus.dim(), 2);
    }

    #[test]
    fn coordinate_fischer_matches_polynomial_fischer() {
        let frame = Arc::new(SpinorFrame::build(3).unwrap());
        let chart = CoordinateChart::spinor(frame, 2, GradedSlice::Total(2));
        let u = SparseVec::from_entries(vec![
            (0, ExactScalar::gaussian(1, 1)),
            (7, ExactScalar::from_int(2)),
            (20, ExactScalar::gaussian(0, 3)),
        ]);
        let v = SparseVec::from_entries(vec![
            (0, ExactScalar::from_int(3)),
            (7, ExactScalar::gaussian(1, -1)),
            (21, ExactScalar::one()),
        ]);
        let direct =
            crate::poly::fischer_inner(&chart.from_coords(&u), &chart.from_coords(&v)).unwrap();
        assert_eq!(chart.fischer(&u, &v), direct);
    }

    #[test]
    fn outside_slice_is_rejected() {
        let chart = CoordinateChart::scalar(3, 1, GradedSlice::Total(1));
        let p = ClPoly::variable(3, 1, 1, 1).unwrap();
        assert!(chart.to_coords(&p).is_ok());
        let q = ClPoly::vector_variable(3, 1, 1).unwrap();
        assert!(chart.to_coords(&q).is_err());
        let two = CoordinateChart::scalar(3, 1, GradedSlice::Total(2));
        assert!(matches!(
            two.to_coords(&p),
            Err(FischerError::OutsideSlice(_))
        ));
    }
}
