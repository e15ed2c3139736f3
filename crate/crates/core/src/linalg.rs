//! Dense matrices over a finite field: echelon forms, kernels, inverses.

use crate::gf::FiniteField;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows<R: AsRef<[u32]>>(cols: usize, rows: &[R]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged matrix");
            data.extend_from_slice(r.as_ref());
        }
        Self { rows: rows.len(), cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(rows * cols, data.len());
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn push_row(&mut self, row: &[u32]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }
}

pub fn mul<F: FiniteField>(f: &F, a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.cols, b.rows);
    let mut out = Matrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(i, k);
            if x == 0 {
                continue;
            }
            for j in 0..b.cols {
                let v = f.add(out.get(i, j), f.mul(x, b.get(k, j)));
                out.set(i, j, v);
            }
        }
    }
    out
}

pub fn mat_vec<F: FiniteField>(f: &F, a: &Matrix, v: &[u32]) -> Vec<u32> {
    assert_eq!(a.cols, v.len());
    (0..a.rows)
        .map(|r| {
            a.row(r)
                .iter()
                .zip(v)
                .fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
        })
        .collect()
}

/// Reduces in place to reduced row echelon form; returns pivot columns.
/// Zero rows end up at the bottom.
pub fn rref<F: FiniteField>(f: &F, m: &mut Matrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
            continue;
        };
        m.swap_rows(row, pr);
        let inv = f.inv(m.get(row, col)).unwrap();
        if inv != 1 {
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), inv);
                m.set(row, c, v);
            }
        }
        for r in 0..m.rows {
            if r == row {
                continue;
            }
            let factor = m.get(r, col);
            if factor == 0 {
                continue;
            }
            let nf = f.neg(factor);
            for c in col..m.cols {
                let v = f.add(m.get(r, c), f.mul(nf, m.get(row, c)));
                m.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank<F: FiniteField>(f: &F, m: &Matrix) -> usize {
    let mut w = m.clone();
    rref(f, &mut w).len()
}

/// Canonical basis (RREF, no zero rows) of the row space.
pub fn row_space<F: FiniteField>(f: &F, m: &Matrix) -> Matrix {
    let mut w = m.clone();
    let r = rref(f, &mut w).len();
    w.data.truncate(r * w.cols);
    w.rows = r;
    w
}

/// Basis of the right kernel {v : m·v = 0}, as the rows of an RREF matrix.
pub fn kernel<F: FiniteField>(f: &F, m: &Matrix) -> Matrix {
    let mut w = m.clone();
    let pivots = rref(f, &mut w);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Matrix::zeros(0, m.cols);
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; m.cols];
        v[free] = 1;
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = f.neg(w.get(r, free));
        }
        basis.push_row(&v);
    }
    row_space(f, &basis)
}

pub fn inverse<F: FiniteField>(f: &F, m: &Matrix) -> Option<Matrix> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut aug = Matrix::zeros(n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            aug.set(r, c, m.get(r, c));
        }
        aug.set(r, n + r, 1);
    }
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut inv = Matrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            inv.set(r, c, aug.get(r, n + c));
        }
    }
    Some(inv)
}

pub fn det<F: FiniteField>(f: &F, m: &Matrix) -> u32 {
    assert_eq!(m.rows, m.cols);
    let mut w = m.clone();
    let mut acc = f.one();
    for col in 0..w.cols {
        let Some(pr) = (col..w.rows).find(|&r| w.get(r, col) != 0) else {
            return 0;
        };
        if pr != col {
            w.swap_rows(pr, col);
            acc = f.neg(acc);
        }
        let pivot = w.get(col, col);
        acc = f.mul(acc, pivot);
        let inv = f.inv(pivot).unwrap();
        for r in col + 1..w.rows {
            let factor = f.mul(w.get(r, col), inv);
            if factor == 0 {
                continue;
            }
            let nf = f.neg(factor);
            for c in col..w.cols {
                let v = f.add(w.get(r, c), f.mul(nf, w.get(col, c)));
                w.set(r, c, v);
            }
        }
    }
    acc
}

/// Residual of `v` after elimination against an RREF basis with the given pivots.
pub fn reduce<F: FiniteField>(f: &F, basis: &Matrix, pivots: &[usize], v: &[u32]) -> Vec<u32> {
    let mut out = v.to_vec();
    for (r, &p) in pivots.iter().enumerate() {
        let factor = out[p];
        if factor == 0 {
            continue;
        }
        let nf = f.neg(factor);
        for (c, x) in out.iter_mut().enumerate().skip(p) {
            *x = f.add(*x, f.mul(nf, basis.get(r, c)));
        }
    }
    out
}

/// Pivot columns of a matrix already in RREF without zero rows.
pub fn pivots_of(m: &Matrix) -> Vec<usize> {
    (0..m.rows)
        .map(|r| m.row(r).iter().position(|&x| x != 0).expect("zero row in echelon basis"))
        .collect()
}

pub fn in_span<F: FiniteField>(f: &F, basis: &Matrix, pivots: &[usize], v: &[u32]) -> bool {
    reduce(f, basis, pivots, v).iter().all(|&x| x == 0)
}

/// Scales `v` so its first nonzero entry is 1. Returns `false` for the zero vector.
pub fn normalize<F: FiniteField>(f: &F, v: &mut [u32]) -> bool {
    let Some(lead) = v.iter().position(|&x| x != 0) else {
        return false;
    };
    let inv = f.inv(v[lead]).unwrap();
    if inv != 1 {
        for x in v[lead..].iter_mut() {
            *x = f.mul(*x, inv);
        }
    }
    true
}

/// `Σ coeffs[i] · rows[i]`.
pub fn combine<F: FiniteField>(f: &F, basis: &Matrix, coeffs: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; basis.cols];
    for (r, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for (j, x) in out.iter_mut().enumerate() {
            *x = f.add(*x, f.mul(c, basis.get(r, j)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::GaloisField;

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        let f = GaloisField::from_order(3).unwrap();
        let m = Matrix::from_rows(3, &[[1, 2, 0], [2, 1, 0]]);
        let k = kernel(&f, &m);
        assert_eq!(k.rows(), 2);
        for r in 0..k.rows() {
            assert!(mat_vec(&f, &m, k.row(r)).iter().all(|&x| x == 0));
        }
        assert_eq!(k, Matrix::from_rows(3, &[[1, 1, 0], [0, 0, 1]]));
    }

    #[test]
    fn inverse_and_det() {
        let f = GaloisField::from_order(5).unwrap();
        let m = Matrix::from_rows(3, &[[1, 2, 3], [0, 1, 4], [5 % 5, 6 % 5, 0]]);
        let inv = inverse(&f, &m).unwrap();
        assert_eq!(mul(&f, &m, &inv), Matrix::identity(3));
        assert_ne!(det(&f, &m), 0);
        let sing = Matrix::from_rows(2, &[[1, 2], [2, 4]]);
        assert!(inverse(&f, &sing).is_none());
        assert_eq!(det(&f, &sing), 0);
    }

    #[test]
    fn det_is_multiplicative_gf4() {
        let f = GaloisField::from_order(4).unwrap();
        let a = Matrix::from_rows(3, &[[1, 2, 3], [2, 2, 1], [0, 3, 1]]);
        let b = Matrix::from_rows(3, &[[3, 0, 1], [1, 1, 2], [2, 3, 0]]);
        assert_eq!(det(&f, &mul(&f, &a, &b)), f.mul(det(&f, &a), det(&f, &b)));
    }
}
