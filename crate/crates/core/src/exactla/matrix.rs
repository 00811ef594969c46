//! Sparse exact vectors and matrices over [`ExactScalar`], with Gauss-Jordan elimination.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{FischerError, Result};
use crate::scalar::ExactScalar;

/// A sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, ExactScalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec::default()
    }

    pub fn unit(index: usize) -> Self {
        SparseVec {
            entries: vec![(index, ExactScalar::one())],
        }
    }

    /// Builds from unsorted entries; duplicates are summed and zeros dropped.
    pub fn from_entries(mut entries: Vec<(usize, ExactScalar)>) -> Self {
        entries.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, ExactScalar)> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            match out.last_mut() {
                Some((j, w)) if *j == i => *w += &v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        SparseVec { entries: out }
    }

    pub fn from_dense(values: &[ExactScalar]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<ExactScalar> {
        let mut out = vec![ExactScalar::zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, ExactScalar)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, ExactScalar)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&ExactScalar> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|p| &self.entries[p].1)
    }

    pub fn first(&self) -> Option<&(usize, ExactScalar)> {
        self.entries.first()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &ExactScalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect(),
        }
    }

    pub fn conj(&self) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v.conj())).collect(),
        }
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: &ExactScalar, other: &SparseVec) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (
            self.entries.iter().peekable(),
            other.entries.iter().peekable(),
        );
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y * c));
                        b.next();
                    } else {
                        let v = x + &(y * c);
                        if !v.is_zero() {
                            out.push((*i, v));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y * c));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&ExactScalar::one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.axpy(&ExactScalar::from_int(-1), other)
    }

    /// Bilinear `Σ self_i · other_i` (no conjugation).
    pub fn dot(&self, other: &SparseVec) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        let (mut a, mut b) = (
            self.entries.iter().peekable(),
            other.entries.iter().peekable(),
        );
        while let (Some((i, x)), Some((j, y))) = (a.peek(), b.peek()) {
            if i < j {
                a.next();
            } else if j < i {
                b.next();
            } else {
                acc += &(x * y);
                a.next();
                b.next();
            }
        }
        acc
    }

    /// Re-indexes every entry through `map`.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> SparseVec {
        SparseVec::from_entries(
            self.entries
                .iter()
                .map(|(i, v)| (map(*i), v.clone()))
                .collect(),
        )
    }
}

/// A sparse row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: Vec<SparseVec>,
    cols: usize,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows: vec![SparseVec::new(); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        ExactMatrix {
            rows: (0..n).map(SparseVec::unit).collect(),
            cols: n,
        }
    }

    pub fn from_rows(rows: Vec<SparseVec>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.max_index().is_none_or(|i| i < cols)));
        ExactMatrix { rows, cols }
    }

    pub fn from_dense(rows: &[Vec<ExactScalar>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        ExactMatrix {
            rows: rows.iter().map(|r| SparseVec::from_dense(r)).collect(),
            cols,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    pub fn into_rows(self) -> Vec<SparseVec> {
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> ExactScalar {
        self.rows[i].get(j).cloned().unwrap_or_default()
    }

    pub fn to_dense(&self) -> Vec<Vec<ExactScalar>> {
        self.rows.iter().map(|r| r.to_dense(self.cols)).collect()
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut cols: Vec<Vec<(usize, ExactScalar)>> = vec![Vec::new(); self.cols];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row.iter() {
                cols[*j].push((i, v.clone()));
            }
        }
        ExactMatrix {
            rows: cols
                .into_iter()
                .map(|entries| SparseVec { entries })
                .collect(),
            cols: self.rows.len(),
        }
    }

    /// `M·x` for a column vector `x`.
    pub fn mul_vec(&self, x: &SparseVec) -> SparseVec {
        SparseVec::from_entries(
            self.rows
                .iter()
                .enumerate()
                .map(|(i, r)| (i, r.dot(x)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        )
    }

    /// Stacks row blocks that share a column count.
    pub fn vstack(blocks: &[ExactMatrix]) -> Result<ExactMatrix> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(FischerError::DimensionMismatch(
                "vstack column counts differ".into(),
            ));
        }
        Ok(ExactMatrix {
            rows: blocks.iter().flat_map(|b| b.rows.iter().cloned()).collect(),
            cols,
        })
    }

    pub fn is_hermitian(&self) -> bool {
        self.nrows() == self.ncols()
            && (0..self.nrows()).all(|i| {
                self.rows[i]
                    .iter()
                    .all(|(j, v)| self.get(*j, i) == v.conj())
            })
    }
}

/// Reduced row echelon form computed with the deterministic pivot rule: columns are
/// scanned left to right and the first remaining row with a nonzero entry becomes the pivot.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    input_rows: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
    /// `transform[r]` expresses echelon row `r` (or a zero row past the rank) as a
    /// combination of the input rows. Absent when built by [`Echelon::rows_only`].
    transform: Option<Vec<SparseVec>>,
}

impl Echelon {
    pub fn new(m: &ExactMatrix) -> Self {
        Self::build(m, true)
    }

    /// Reduction without the row transform: enough for rank, pivots and kernels.
    pub fn rows_only(m: &ExactMatrix) -> Self {
        Self::build(m, false)
    }

    fn build(m: &ExactMatrix, track: bool) -> Self {
        let n = m.nrows();
        let mut rows = m.rows.clone();
        let mut transform: Option<Vec<SparseVec>> =
            track.then(|| (0..n).map(SparseVec::unit).collect());
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == n {
                break;
            }
            let Some(p) = (rank..n).find(|&r| rows[r].get(col).is_some()) else {
                continue;
            };
            rows.swap(rank, p);
            if let Some(t) = transform.as_mut() {
                t.swap(rank, p);
            }
            let inv = rows[rank].get(col).unwrap().inv();
            if !inv.is_one() {
                rows[rank] = rows[rank].scale(&inv);
                if let Some(t) = transform.as_mut() {
                    t[rank] = t[rank].scale(&inv);
                }
            }
            let pivot_row = rows[rank].clone();
            let pivot_t = transform.as_ref().map(|t| t[rank].clone());
            for r in 0..n {
                if r == rank {
                    continue;
                }
                if let Some(f) = rows[r].get(col) {
                    let f = -f;
                    rows[r] = rows[r].axpy(&f, &pivot_row);
                    if let (Some(t), Some(pt)) = (transform.as_mut(), pivot_t.as_ref()) {
                        t[r] = t[r].axpy(&f, pt);
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        Echelon {
            cols: m.cols,
            input_rows: n,
            rows,
            pivots,
            transform,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Nonzero rows of the reduced echelon form.
    pub fn reduced_rows(&self) -> &[SparseVec] {
        &self.rows[..self.rank()]
    }

    /// Canonical kernel basis of the column action `M·x = 0`: one vector per free
    /// column `f`, with `x_f = 1`, zero on other free columns.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::with_capacity(self.cols - self.rank());
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut entries = vec![(free, ExactScalar::one())];
            for (r, &p) in self.pivots.iter().enumerate() {
                if let Some(v) = self.rows[r].get(free) {
                    entries.push((p, -v));
                }
            }
            out.push(SparseVec::from_entries(entries));
        }
        out
    }

    /// Solves `M·x = b`, free variables set to zero. Panics on a [`Echelon::rows_only`] reduction.
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        let transform = self
            .transform
            .as_ref()
            .expect("Echelon built without transform");
        let tb: Vec<ExactScalar> = transform.iter().map(|t| t.dot(b)).collect();
        if tb[self.rank()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        Some(SparseVec::from_entries(
            self.pivots.iter().zip(tb).map(|(&p, v)| (p, v)).collect(),
        ))
    }

    pub fn input_rows(&self) -> usize {
        self.input_rows
    }
}

pub fn rank(m: &ExactMatrix) -> usize {
    RowSpace::from_rows(m.rows.iter().cloned(), m.cols, false).rank()
}

pub fn kernel_basis(m: &ExactMatrix) -> Vec<SparseVec> {
    Echelon::rows_only(m).kernel_basis()
}

/// Solves `M·x = b`; `Err(Inconsistent)` when no solution exists.
pub fn solve(m: &ExactMatrix, b: &SparseVec) -> Result<SparseVec> {
    if b.max_index().is_some_and(|i| i >= m.nrows()) {
        return Err(FischerError::DimensionMismatch(format!(
            "right-hand side longer than {} rows",
            m.nrows()
        )));
    }
    Echelon::new(m).solve(b).ok_or(FischerError::Inconsistent)
}

/// Incrementally maintained row space. Every stored basis vector has a unit entry at
/// its pivot column and zeros at all other pivot columns, so membership and
/// coordinates reduce to reading pivot entries.
#[derive(Clone, Debug)]
pub struct RowSpace {
    cols: usize,
    basis: Vec<SparseVec>,
    pivots: Vec<usize>,
    pivot_row: HashMap<usize, usize>,
    /// Basis vectors as combinations of the inserted vectors, when tracked.
    transform: Option<Vec<SparseVec>>,
    inserted: usize,
}

impl RowSpace {
    pub fn new(cols: usize, track: bool) -> Self {
        RowSpace {
            cols,
            basis: Vec::new(),
            pivots: Vec::new(),
            pivot_row: HashMap::new(),
            transform: track.then(Vec::new),
            inserted: 0,
        }
    }

    pub fn from_rows(rows: impl IntoIterator<Item = SparseVec>, cols: usize, track: bool) -> Self {
        let mut space = RowSpace::new(cols, track);
        for r in rows {
            space.insert(&r);
        }
        space
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    /// `v − Σ v[pivot_r]·basis_r`, together with the pivot readings.
    fn reduce(&self, v: &SparseVec) -> (SparseVec, Vec<(usize, ExactScalar)>) {
        let readings: Vec<(usize, ExactScalar)> = v
            .iter()
            .filter_map(|(c, x)| self.pivot_row.get(c).map(|&r| (r, x.clone())))
            .collect();
        let mut residual = v.clone();
        for (r, x) in &readings {
            residual = residual.axpy(&-x, &self.basis[*r]);
        }
        (residual, readings)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Inserts `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        debug_assert!(v.max_index().is_none_or(|i| i < self.cols));
        let index = self.inserted;
        self.inserted += 1;
        let (residual, readings) = self.reduce(v);
        let Some((col, lead)) = residual.first().cloned() else {
            return false;
        };
        let inv = lead.inv();
        let new_row = residual.scale(&inv);
        let new_t = self.transform.as_ref().map(|t| {
            let mut acc = SparseVec::unit(index);
            for (r, x) in &readings {
                acc = acc.axpy(&-x, &t[*r]);
            }
            acc.scale(&inv)
        });
        for r in 0..self.basis.len() {
            if let Some(f) = self.basis[r].get(col) {
                let f = -f;
                self.basis[r] = self.basis[r].axpy(&f, &new_row);
                if let (Some(t), Some(nt)) = (self.transform.as_mut(), new_t.as_ref()) {
                    t[r] = t[r].axpy(&f, nt);
                }
            }
        }
        self.pivot_row.insert(col, self.basis.len());
        self.pivots.push(col);
        self.basis.push(new_row);
        if let (Some(t), Some(nt)) = (self.transform.as_mut(), new_t) {
            t.push(nt);
        }
        true
    }

    /// Coefficients `c` over the inserted vectors with `Σ c_i·inserted_i = v`, or `None`
    /// when `v` is outside the span. Requires transform tracking.
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        let t = self
            .transform
            .as_ref()
            .expect("RowSpace built without transform tracking");
        let (residual, readings) = self.reduce(v);
        if !residual.is_zero() {
            return None;
        }
        let mut acc = SparseVec::new();
        for (r, x) in &readings {
            acc = acc.axpy(x, &t[*r]);
        }
        Some(acc)
    }
}

/// Leading principal minors of a square matrix, by elimination without pivoting.
/// Stops after the first vanishing minor.
pub fn leading_minors(m: &ExactMatrix) -> Vec<ExactScalar> {
    let n = m.nrows();
    let mut rows: Vec<SparseVec> = m.rows.clone();
    let mut minors = Vec::with_capacity(n);
    let mut det = ExactScalar::one();
    for k in 0..n {
        let Some(p) = rows[k].get(k).cloned() else {
            minors.push(ExactScalar::zero());
            break;
        };
        det = &det * &p;
        minors.push(det.clone());
        let pivot_row = rows[k].clone();
        let inv = p.inv();
        for r in rows.iter_mut().skip(k + 1) {
            if let Some(f) = r.get(k) {
                let f = -(f * &inv);
                *r = r.axpy(&f, &pivot_row);
            }
        }
    }
    minors
}

/// True iff every leading principal minor is a positive rational.
pub fn is_positive_definite(m: &ExactMatrix) -> bool {
    let minors = leading_minors(m);
    minors.len() == m.nrows() && minors.iter().all(|d| d.is_real() && d.re.is_positive())
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DirectSumReport {
    pub part_dims: Vec<usize>,
    pub sum_of_dims: usize,
    pub rank: usize,
    pub ambient_dim: Option<usize>,
    pub rank_deficit: usize,
    pub pass: bool,
}

/// Directness (and optionally spanning) of a family of subspaces given by row vectors in
/// a common coordinate space.
pub fn direct_sum_report(
    parts: &[Vec<SparseVec>],
    cols: usize,
    ambient_dim: Option<usize>,
) -> DirectSumReport {
    let part_dims: Vec<usize> = parts.iter().map(Vec::len).collect();
    let sum_of_dims = part_dims.iter().sum();
    let space = RowSpace::from_rows(parts.iter().flatten().cloned(), cols, false);
    let rank = space.rank();
    let pass = rank == sum_of_dims && ambient_dim.is_none_or(|d| d == rank);
    DirectSumReport {
        part_dims,
        sum_of_dims,
        rank,
        ambient_dim,
        rank_deficit: sum_of_dims - rank,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[(i64, i64)]]) -> ExactMatrix {
        ExactMatrix::from_dense(
            &rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|&(a, b)| ExactScalar::gaussian(a, b))
                        .collect()
                })
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn identity_and_zero() {
        let id = ExactMatrix::identity(3);
        assert_eq!(rank(&id), 3);
        assert!(kernel_basis(&id).is_empty());
        let z = ExactMatrix::zeros(2, 4);
        assert_eq!(rank(&z), 0);
        assert_eq!(kernel_basis(&z).len(), 4);
    }

    #[test]
    fn hermitian_rank_one() {
        // [[1, i], [-i, 1]]: second row is -i times the first.
        let a = m(&[&[(1, 0), (0, 1)], &[(0, -1), (1, 0)]]);
        assert_eq!(rank(&a), 1);
        assert_eq!(Echelon::new(&a).rank(), 1);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).is_zero());
        // Canonical: x_1 = 1 on the free column, x_0 = -i.
        assert_eq!(k[0].get(1), Some(&ExactScalar::one()));
        assert_eq!(k[0].get(0), Some(&ExactScalar::gaussian(0, -1)));
    }

    #[test]
    fn solve_and_inconsistent() {
        let a = m(&[&[(1, 0), (2, 0)], &[(2, 0), (4, 0)]]);
        let b = SparseVec::from_dense(&[ExactScalar::from_int(1), ExactScalar::from_int(2)]);
        let x = solve(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        let bad = SparseVec::from_dense(&[ExactScalar::from_int(1), ExactScalar::from_int(3)]);
        assert_eq!(solve(&a, &bad), Err(FischerError::Inconsistent));
    }

    #[test]
    fn row_space_coordinates() {
        let rows = vec![
            SparseVec::from_dense(&[1.into(), 1.into(), 0.into()]),
            SparseVec::from_dense(&[0.into(), 1.into(), 1.into()]),
            SparseVec::from_dense(&[1.into(), 2.into(), 1.into()]),
        ];
        let space = RowSpace::from_rows(rows.clone(), 3, true);
        assert_eq!(space.rank(), 2);
        let target = SparseVec::from_dense(&[2.into(), 5.into(), 3.into()]);
        let c = space.coordinates(&target).unwrap();
        let mut back = SparseVec::new();
        for (i, v) in c.iter() {
            back = back.axpy(v, &rows[*i]);
        }
        assert_eq!(back, target);
        assert!(space.coordinates(&SparseVec::unit(0)).is_none());
    }

    #[test]
    fn minors_of_positive_definite() {
        let g = m(&[&[(2, 0), (0, 1)], &[(0, -1), (2, 0)]]);
        assert!(g.is_hermitian());
        assert_eq!(
            leading_minors(&g),
            vec![ExactScalar::from_int(2), ExactScalar::from_int(3)]
        );
        assert!(is_positive_definite(&g));
        let singular = m(&[&[(1, 0), (1, 0)], &[(1, 0), (1, 0)]]);
        assert!(!is_positive_definite(&singular));
    }

    #[test]
    fn direct_sum_axes_and_duplicates() {
        let e0 = vec![SparseVec::unit(0)];
        let e1 = vec![SparseVec::unit(1)];
        assert!(direct_sum_report(&[e0.clone(), e1], 2, Some(2)).pass);
        let dup = direct_sum_report(&[e0.clone(), e0], 2, None);
        assert!(!dup.pass);
        assert_eq!(dup.rank_deficit, 1);
    }
}
