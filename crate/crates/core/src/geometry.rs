//! Points and lines of PG(n−1, q), the singular-line set L_T, spread checks
//! and totally singular subspaces.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::forms::TriForm;
use crate::gf::{FiniteField, GaloisField};
use crate::linalg::{self, Matrix};

pub const MAX_POINTS: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("PG({}, {q}) has more than {MAX_POINTS} points", .n - 1)]
    TooLarge { n: usize, q: u32 },
    #[error("line set is not a spread: {0}")]
    NotASpread(String),
    #[error("lines live in PG({}, {}), expected PG({}, {})", .got.0 - 1, .got.1, .expected.0 - 1, .expected.1)]
    Mismatch { got: (usize, u32), expected: (usize, u32) },
}

/// Number of points of PG(d−1, q).
pub fn projective_count(d: usize, q: u64) -> u64 {
    (0..d).fold(0u64, |acc, i| acc.saturating_add(q.saturating_pow(i as u32)))
}

/// Lines through a point of a d-dimensional kernel: (q^(d−1) − 1)/(q − 1).
pub fn lines_through(kernel_dim: usize, q: u64) -> u64 {
    if kernel_dim == 0 {
        0
    } else {
        projective_count(kernel_dim - 1, q)
    }
}

/// Normalized coordinate vector number `idx` of PG(d−1, q).
///
/// Vectors whose leading 1 sits at position 0 come first, then position 1,
/// and so on; within a block the trailing coordinates count up big-endian.
pub fn projective_coords(d: usize, q: u32, mut idx: u64) -> Vec<u32> {
    let q64 = q as u64;
    let mut v = vec![0u32; d];
    for lead in 0..d {
        let block = q64.pow((d - 1 - lead) as u32);
        if idx < block {
            v[lead] = 1;
            for j in (lead + 1..d).rev() {
                v[j] = (idx % q64) as u32;
                idx /= q64;
            }
            return v;
        }
        idx -= block;
    }
    panic!("projective index out of range");
}

/// The point set of PG(n−1, q) with a dense deterministic indexing.
#[derive(Clone, Debug)]
pub struct PointSpace {
    field: GaloisField,
    n: usize,
    count: usize,
    offsets: Vec<usize>,
    place: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    pub index: usize,
    pub coords: Vec<u32>,
}

impl PointSpace {
    pub fn new(field: &GaloisField, n: usize) -> Result<Self, GeometryError> {
        let q = field.q() as u64;
        let count = projective_count(n, q);
        if count > MAX_POINTS {
            return Err(GeometryError::TooLarge { n, q: field.q() });
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        for lead in 0..n {
            offsets.push(acc);
            acc += q.pow((n - 1 - lead) as u32) as usize;
        }
        offsets.push(acc);
        let place = (0..n).map(|j| q.pow((n - 1 - j) as u32) as usize).collect();
        Ok(Self { field: field.clone(), n, count: count as usize, offsets, place })
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn coords(&self, index: usize) -> Vec<u32> {
        projective_coords(self.n, self.field.q(), index as u64)
    }

    pub fn point(&self, index: usize) -> ProjPoint {
        ProjPoint { index, coords: self.coords(index) }
    }

    /// Index of an already normalized vector.
    pub fn index_of_normalized(&self, v: &[u32]) -> usize {
        let lead = v.iter().position(|&x| x != 0).expect("zero vector has no projective point");
        debug_assert_eq!(v[lead], 1);
        let mut idx = self.offsets[lead];
        for j in lead + 1..self.n {
            idx += v[j] as usize * self.place[j];
        }
        idx
    }

    /// Index of the point spanned by a nonzero vector.
    pub fn index_of(&self, v: &[u32]) -> Option<usize> {
        let mut w = v.to_vec();
        linalg::normalize(&self.field, &mut w).then(|| self.index_of_normalized(&w))
    }

    pub fn iter(&self) -> impl Iterator<Item = ProjPoint> + '_ {
        (0..self.count).map(|i| self.point(i))
    }

    /// Number of lines in PG(n−1, q).
    pub fn line_count(&self) -> u64 {
        let q = self.q() as u64;
        let pts = self.count as u64;
        pts * (pts - 1) / ((q + 1) * q)
    }
}

/// Points and lines of PG(n−1, q).
pub fn enum_points(field: &GaloisField, n: usize) -> Result<PointSpace, GeometryError> {
    PointSpace::new(field, n)
}

/// Enumerates the projective points of the row space of an RREF basis.
pub fn span_points<'a>(field: &'a GaloisField, basis: &'a Matrix) -> impl Iterator<Item = Vec<u32>> + 'a {
    let d = basis.rows();
    let total = projective_count(d, field.q() as u64);
    (0..total).map(move |i| linalg::combine(field, basis, &projective_coords(d, field.q(), i)))
}

/// A line stored as its canonical 2×n reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjLine {
    rows: Box<[u32]>,
}

impl ProjLine {
    /// The line through two vectors, or `None` if they are dependent.
    pub fn span(field: &GaloisField, a: &[u32], b: &[u32]) -> Option<ProjLine> {
        let m = Matrix::from_rows(a.len(), &[a, b]);
        let r = linalg::row_space(field, &m);
        (r.rows() == 2).then(|| ProjLine { rows: r.data().into() })
    }

    /// From a 2×n RREF matrix; `None` if it is not one.
    pub fn from_rref(field: &GaloisField, m: &Matrix) -> Option<ProjLine> {
        (m.rows() == 2 && linalg::row_space(field, m) == *m).then(|| ProjLine { rows: m.data().into() })
    }

    pub fn n(&self) -> usize {
        self.rows.len() / 2
    }

    pub fn row(&self, i: usize) -> &[u32] {
        let n = self.n();
        &self.rows[i * n..(i + 1) * n]
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_vec(2, self.n(), self.rows.to_vec())
    }

    /// The q+1 points of the line, each normalized.
    pub fn points(&self, field: &GaloisField) -> Vec<Vec<u32>> {
        let (a, b) = (self.row(0), self.row(1));
        let mut out: Vec<Vec<u32>> = field
            .elements()
            .map(|t| a.iter().zip(b).map(|(&x, &y)| field.add(x, field.mul(t, y))).collect())
            .collect();
        out.push(b.to_vec());
        out
    }

    pub fn contains(&self, field: &GaloisField, v: &[u32]) -> bool {
        let m = self.matrix();
        linalg::in_span(field, &m, &linalg::pivots_of(&m), v)
    }
}

/// Sorted, duplicate-free set of lines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LineSet {
    lines: Vec<ProjLine>,
}

impl LineSet {
    pub fn new(mut lines: Vec<ProjLine>) -> Self {
        lines.sort_unstable();
        lines.dedup();
        Self { lines }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ProjLine> {
        self.lines.iter()
    }

    pub fn contains(&self, line: &ProjLine) -> bool {
        self.lines.binary_search(line).is_ok()
    }

    pub fn is_subset(&self, other: &LineSet) -> bool {
        self.lines.iter().all(|l| other.contains(l))
    }
}

impl FromIterator<ProjLine> for LineSet {
    fn from_iter<I: IntoIterator<Item = ProjLine>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

#[cfg(feature = "parallel")]
pub(crate) fn map_points<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_points<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

/// Kernel dimension of B_a for every point a, in index order.
pub fn kernel_dims(t: &TriForm) -> Result<Vec<u8>, GeometryError> {
    let space = PointSpace::new(t.field(), t.n())?;
    Ok(map_points(space.count(), |i| t.contraction_kernel(&space.coords(i)).rows() as u8))
}

/// L_T: all lines ⟨a, b⟩ with T(a, b, ·) = 0.
///
/// For each point a the kernel of B_a contains a; every further kernel point
/// b gives a singular line. Each line is emitted once, from the point equal to
/// the first row of its canonical form.
pub fn singular_lines(t: &TriForm) -> Result<LineSet, GeometryError> {
    let field = t.field();
    let space = PointSpace::new(field, t.n())?;
    let per_point = map_points(space.count(), |i| {
        let a = space.coords(i);
        let kernel = t.contraction_kernel(&a);
        if kernel.rows() < 2 {
            return Vec::new();
        }
        let lead = a.iter().position(|&x| x != 0).unwrap();
        let others: Vec<Vec<u32>> = (0..kernel.rows())
            .filter(|&r| kernel.row(r).iter().position(|&x| x != 0) != Some(lead))
            .map(|r| kernel.row(r).to_vec())
            .collect();
        let complement = Matrix::from_rows(t.n(), &others);
        span_points(field, &complement)
            .filter_map(|b| ProjLine::span(field, &a, &b))
            .filter(|line| line.row(0) == a.as_slice())
            .collect()
    });
    Ok(LineSet::new(per_point.into_iter().flatten().collect()))
}

/// Every line of PG(n−1, q) in canonical form.
pub fn all_lines(space: &PointSpace) -> Vec<ProjLine> {
    let n = space.n();
    let q = space.q() as u64;
    let mut out = Vec::new();
    for p0 in 0..n {
        for p1 in p0 + 1..n {
            // free slots: row 0 after p0 except p1, row 1 after p1
            let mut slots: Vec<usize> = (p0 + 1..n).filter(|&c| c != p1).collect();
            slots.extend((p1 + 1..n).map(|c| n + c));
            let total = q.pow(slots.len() as u32);
            for mut code in 0..total {
                let mut rows = vec![0u32; 2 * n];
                rows[p0] = 1;
                rows[n + p1] = 1;
                for &s in &slots {
                    rows[s] = (code % q) as u32;
                    code /= q;
                }
                out.push(ProjLine { rows: rows.into() });
            }
        }
    }
    out
}

/// L_T by testing T(a, b, e_k) = 0 on every line. Slow; kept as an oracle.
pub fn singular_lines_brute_force(t: &TriForm) -> Result<LineSet, GeometryError> {
    let space = PointSpace::new(t.field(), t.n())?;
    let n = t.n();
    let units: Vec<Vec<u32>> = (0..n)
        .map(|k| {
            let mut e = vec![0; n];
            e[k] = 1;
            e
        })
        .collect();
    Ok(all_lines(&space)
        .into_iter()
        .filter(|l| units.iter().all(|e| t.evaluate_raw(l.row(0), l.row(1), e) == 0))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpreadReport {
    pub line_count: usize,
    pub point_count: usize,
    pub coverage_min: u32,
    pub coverage_max: u32,
    pub uncovered_points: usize,
    pub is_partition: bool,
    pub is_normal: Option<bool>,
    /// lines-through-a-point → number of such points
    pub coverage_histogram: BTreeMap<u32, usize>,
}

/// Number of lines of `lines` through each point, in point-index order.
pub fn coverage(lines: &LineSet, space: &PointSpace) -> Vec<u32> {
    let mut counts = vec![0u32; space.count()];
    for line in lines.iter() {
        for p in line.points(space.field()) {
            counts[space.index_of_normalized(&p)] += 1;
        }
    }
    counts
}

fn check_lines(lines: &LineSet, space: &PointSpace) -> Result<(), GeometryError> {
    match lines.iter().next() {
        Some(l) if l.n() != space.n() => {
            Err(GeometryError::Mismatch { got: (l.n(), space.q()), expected: (space.n(), space.q()) })
        }
        _ => Ok(()),
    }
}

pub fn spread_check(lines: &LineSet, space: &PointSpace) -> Result<SpreadReport, GeometryError> {
    check_lines(lines, space)?;
    let counts = coverage(lines, space);
    let mut histogram = BTreeMap::new();
    for &c in &counts {
        *histogram.entry(c).or_insert(0) += 1;
    }
    let coverage_min = counts.iter().copied().min().unwrap_or(0);
    let coverage_max = counts.iter().copied().max().unwrap_or(0);
    Ok(SpreadReport {
        line_count: lines.len(),
        point_count: space.count(),
        coverage_min,
        coverage_max,
        uncovered_points: histogram.get(&0).copied().unwrap_or(0),
        is_partition: coverage_min == 1 && coverage_max == 1,
        is_normal: None,
        coverage_histogram: histogram,
    })
}

/// Whether every solid spanned by two spread lines is partitioned by spread lines.
pub fn is_normal_spread(lines: &LineSet, space: &PointSpace) -> Result<bool, GeometryError> {
    let report = spread_check(lines, space)?;
    if !report.is_partition {
        return Err(GeometryError::NotASpread(format!(
            "coverage ranges over {}..={} lines per point",
            report.coverage_min, report.coverage_max
        )));
    }
    let field = space.field();
    let list = lines.lines();
    let count = list.len();
    let mut line_of = vec![0u32; space.count()];
    for (li, line) in list.iter().enumerate() {
        for p in line.points(field) {
            line_of[space.index_of_normalized(&p)] = li as u32;
        }
    }
    let words = count.div_ceil(64);
    let mut done = vec![0u64; count * words];
    let is_done = |done: &[u64], i: usize, j: usize| done[i * words + j / 64] >> (j % 64) & 1 == 1;
    for i in 0..count {
        for j in i + 1..count {
            if is_done(&done, i, j) {
                continue;
            }
            let stacked = Matrix::from_rows(space.n(), &[list[i].row(0), list[i].row(1), list[j].row(0), list[j].row(1)]);
            let solid = linalg::row_space(field, &stacked);
            if solid.rows() != 4 {
                return Err(GeometryError::NotASpread("two spread lines meet".into()));
            }
            let pivots = linalg::pivots_of(&solid);
            let mut members: Vec<usize> = Vec::new();
            for p in span_points(field, &solid) {
                let li = line_of[space.index_of_normalized(&p)] as usize;
                if members.contains(&li) {
                    continue;
                }
                let other = list[li].row(if list[li].row(0) == p.as_slice() { 1 } else { 0 });
                if !linalg::in_span(field, &solid, &pivots, other) {
                    return Ok(false);
                }
                members.push(li);
            }
            for &a in &members {
                for &b in &members {
                    done[a * words + b / 64] |= 1 << (b % 64);
                }
            }
        }
    }
    Ok(true)
}

/// Least number of singular lines through any point.
pub fn min_coverage(t: &TriForm) -> Result<u64, GeometryError> {
    let q = t.field().q() as u64;
    let dims = kernel_dims(t)?;
    Ok(dims.iter().map(|&d| lines_through(d as usize, q)).min().unwrap_or(0))
}

/// The space K_W = {p : T(w, p, ·) = 0 for all w ∈ W}; contains W when W is
/// totally singular. `basis` rows span W.
pub fn extension_space(t: &TriForm, basis: &Matrix) -> Matrix {
    let n = t.n();
    let mut stacked = Matrix::zeros(0, n);
    let mut b = Matrix::zeros(n, n);
    for r in 0..basis.rows() {
        t.contract_into(basis.row(r), &mut b);
        for i in 0..n {
            stacked.push_row(b.row(i));
        }
    }
    linalg::kernel(t.field(), &stacked)
}

pub fn is_totally_singular(t: &TriForm, basis: &Matrix) -> bool {
    let n = t.n();
    let mut b = Matrix::zeros(n, n);
    let rows = basis.row_vecs();
    rows.iter().enumerate().all(|(i, w)| {
        t.contract_into(w, &mut b);
        rows[i + 1..].iter().all(|v| linalg::mat_vec(t.field(), &b, v).iter().all(|&x| x == 0))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TsSearch {
    /// RREF bases of the r-dimensional totally singular subspaces found.
    pub subspaces: Vec<Matrix>,
    /// `false` if the node budget ran out before the search finished.
    pub complete: bool,
    pub nodes: u64,
}

struct TsWalker<'a> {
    t: &'a TriForm,
    budget: u64,
    nodes: u64,
    exhausted: bool,
}

impl TsWalker<'_> {
    // K ∩ ker B_p, for K given by an RREF basis.
    fn restrict(&self, k: &Matrix, p: &[u32]) -> Matrix {
        let field = self.t.field();
        let n = self.t.n();
        let mut b = Matrix::zeros(n, n);
        self.t.contract_into(p, &mut b);
        let images: Vec<Vec<u32>> = (0..k.rows()).map(|r| linalg::mat_vec(field, &b, k.row(r))).collect();
        let mut system = Matrix::zeros(n, k.rows());
        for (c, img) in images.iter().enumerate() {
            for (r, &x) in img.iter().enumerate() {
                system.set(r, c, x);
            }
        }
        let coeffs = linalg::kernel(field, &system);
        let rows: Vec<Vec<u32>> = (0..coeffs.rows()).map(|r| linalg::combine(field, k, coeffs.row(r))).collect();
        linalg::row_space(field, &Matrix::from_rows(n, &rows))
    }

    // Children of W are W + p for points p of a complement of W in K_W whose
    // canonical basis extends W's by one row. Each subspace is reached once.
    fn children(&mut self, w: &Matrix, k: &Matrix) -> Vec<(Matrix, Matrix)> {
        let field = self.t.field();
        let n = self.t.n();
        let w_pivots = linalg::pivots_of(w);
        let residuals: Vec<Vec<u32>> =
            (0..k.rows()).map(|r| linalg::reduce(field, w, &w_pivots, k.row(r))).collect();
        let complement = linalg::row_space(field, &Matrix::from_rows(n, &residuals));
        let last_pivot = w_pivots.last().copied();
        let later: Vec<&[u32]> = (0..complement.rows())
            .map(|r| complement.row(r))
            .filter(|row| last_pivot.map_or(true, |lp| row.iter().position(|&x| x != 0).unwrap() > lp))
            .collect();
        let candidates = Matrix::from_rows(n, &later);
        let mut out = Vec::new();
        for p in span_points(field, &candidates) {
            let lead = p.iter().position(|&x| x != 0).unwrap();
            if (0..w.rows()).any(|r| w.get(r, lead) != 0) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                self.exhausted = true;
                return out;
            }
            let child_k = self.restrict(k, &p);
            let mut child = w.clone();
            child.push_row(&p);
            out.push((child, child_k));
        }
        out
    }

    fn collect(&mut self, w: Matrix, k: Matrix, target: usize, found: &mut Vec<Matrix>) {
        if w.rows() == target {
            found.push(w);
            return;
        }
        if k.rows() < target {
            return;
        }
        for (child, child_k) in self.children(&w, &k) {
            if self.exhausted {
                return;
            }
            self.collect(child, child_k, target, found);
        }
    }

    fn deepest(&mut self, w: Matrix, k: Matrix, best: &mut usize, ceiling: usize) {
        *best = (*best).max(w.rows());
        if k.rows() <= *best {
            return;
        }
        for (child, child_k) in self.children(&w, &k) {
            if self.exhausted || *best >= ceiling {
                return;
            }
            self.deepest(child, child_k, best, ceiling);
        }
    }
}

/// All r-dimensional totally singular subspaces, within a node budget.
pub fn totally_singular_search(t: &TriForm, r: usize, budget: u64) -> TsSearch {
    let mut walker = TsWalker { t, budget, nodes: 0, exhausted: false };
    let mut found = Vec::new();
    if r <= t.n() {
        walker.collect(Matrix::zeros(0, t.n()), Matrix::identity(t.n()), r, &mut found);
    }
    found.sort();
    TsSearch { subspaces: found, complete: !walker.exhausted, nodes: walker.nodes }
}

/// Largest dimension of a totally singular subspace and whether the search completed.
pub fn max_totally_singular_dim(t: &TriForm, budget: u64) -> (usize, bool) {
    let mut walker = TsWalker { t, budget, nodes: 0, exhausted: false };
    let mut best = 0;
    // W ⊆ ker B_p for every p ∈ W, so no kernel dimension is exceeded
    let ceiling = kernel_dims(t).map_or(t.n(), |d| d.into_iter().max().unwrap_or(0) as usize);
    walker.deepest(Matrix::zeros(0, t.n()), Matrix::identity(t.n()), &mut best, ceiling);
    (best, !walker.exhausted)
}

/// Points on at least one singular line (kernel of B_a of dimension ≥ 2).
pub fn union_point_indices(t: &TriForm) -> Result<Vec<usize>, GeometryError> {
    Ok(kernel_dims(t)?
        .iter()
        .enumerate()
        .filter(|(_, &d)| d >= 2)
        .map(|(i, _)| i)
        .collect())
}

/// Distinct subspaces in a list (by canonical basis).
pub fn distinct(subspaces: &[Matrix]) -> usize {
    subspaces.iter().collect::<HashSet<_>>().len()
}
