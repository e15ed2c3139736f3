//! The point set covered by singular lines, and the polynomials vanishing on it.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::forms::TriForm;
use crate::geometry::{self, projective_count, GeometryError, PointSpace};
use crate::gf::{FiniteField, GaloisField};
use crate::linalg::{self, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypersurfaceError {
    #[error("union classification needs odd n, got n = {0}")]
    WrongParity(usize),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Exponent vectors of total degree `d` in `n` variables, x1^d first.
pub fn monomials(n: usize, d: usize) -> Vec<Vec<u8>> {
    fn rec(n: usize, left: usize, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == n - 1 {
            prefix.push(left as u8);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e as u8);
            rec(n, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

fn eval_monomial(field: &GaloisField, exps: &[u8], x: &[u32]) -> u32 {
    exps.iter()
        .zip(x)
        .fold(1, |acc, (&e, &xi)| if e == 0 { acc } else { field.mul(acc, field.pow(xi, e as u64)) })
}

/// Homogeneous polynomial of a fixed degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogPoly {
    field: GaloisField,
    n: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<u8>, u32>,
}

impl HomogPoly {
    /// Zero coefficients are dropped; panics on a monomial of the wrong degree.
    pub fn new(field: &GaloisField, n: usize, degree: usize, terms: impl IntoIterator<Item = (Vec<u8>, u32)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), n);
            assert_eq!(m.iter().map(|&e| e as usize).sum::<usize>(), degree, "monomial of wrong degree");
            if c != 0 {
                coeffs.insert(m, c);
            }
        }
        Self { field: field.clone(), n, degree, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, exps: &[u8]) -> u32 {
        self.coeffs.get(exps).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, u32)> {
        self.coeffs.iter().map(|(m, &c)| (m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn evaluate(&self, x: &[u32]) -> u32 {
        self.coeffs
            .iter()
            .fold(0, |acc, (m, &c)| self.field.add(acc, self.field.mul(c, eval_monomial(&self.field, m, x))))
    }

    /// Σ x_i^2 over the given field.
    pub fn sum_of_squares(field: &GaloisField, n: usize) -> Self {
        Self::new(field, n, 2, (0..n).map(|i| {
            let mut m = vec![0u8; n];
            m[i] = 2;
            (m, 1)
        }))
    }

    /// Symmetric matrix of a quadratic form in odd characteristic.
    pub fn quadric_matrix(&self) -> Option<Matrix> {
        if self.degree != 2 || self.field.p() == 2 {
            return None;
        }
        let f = &self.field;
        let half = f.inv(f.from_int(2)).unwrap();
        let mut m = Matrix::zeros(self.n, self.n);
        for (exps, &c) in &self.coeffs {
            let idx: Vec<usize> = exps.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat(i).take(e as usize)).collect();
            let (i, j) = (idx[0], idx[1]);
            if i == j {
                m.set(i, i, c);
            } else {
                let h = f.mul(c, half);
                m.set(i, j, h);
                m.set(j, i, h);
            }
        }
        Some(m)
    }

    pub fn quadric_rank(&self) -> Option<usize> {
        self.quadric_matrix().map(|m| linalg::rank(&self.field, &m))
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (exps, &c) in self.coeffs.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
                .collect();
            if c != 1 {
                write!(f, "{}*", self.field.format(c))?;
            }
            f.write_str(&mono.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct PolyJson {
    degree: usize,
    text: String,
    terms: Vec<(Vec<u8>, u32)>,
}

impl Serialize for HomogPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyJson {
            degree: self.degree,
            text: self.to_string(),
            terms: self.coeffs.iter().rev().map(|(m, &c)| (m.clone(), c)).collect(),
        }
        .serialize(s)
    }
}

/// Indices of the points lying on at least one singular line.
pub fn union_points(t: &TriForm) -> Result<Vec<usize>, GeometryError> {
    geometry::union_point_indices(t)
}

/// Basis of the degree-`d` forms vanishing at every point given.
///
/// Over GF(q) with d ≥ q a polynomial such as x1^q·x2^(d−q) − x1·x2^(d−1)
/// vanishes on every point, so the result is only meaningful up to such
/// identities. For d < q none exist and the fit is exact.
pub fn fit_vanishing(field: &GaloisField, n: usize, points: &[Vec<u32>], d: usize) -> Result<Vec<HomogPoly>, HypersurfaceError> {
    if d == 0 {
        return Err(HypersurfaceError::ZeroDegree);
    }
    let monos = monomials(n, d);
    let m = monos.len();
    // incremental echelon basis of evaluation rows
    let mut basis = Matrix::zeros(0, m);
    let mut pivots: Vec<usize> = Vec::new();
    for p in points {
        if basis.rows() == m {
            break;
        }
        let row: Vec<u32> = monos.iter().map(|e| eval_monomial(field, e, p)).collect();
        let r = linalg::reduce(field, &basis, &pivots, &row);
        if r.iter().any(|&x| x != 0) {
            basis.push_row(&r);
            basis = linalg::row_space(field, &basis);
            pivots = linalg::pivots_of(&basis);
        }
    }
    let kernel = linalg::kernel(field, &basis);
    Ok((0..kernel.rows())
        .map(|r| HomogPoly::new(field, n, d, monos.iter().cloned().zip(kernel.row(r).iter().copied())))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum UnionKind {
    FullSpace,
    Hyperplane,
    Quadric,
    Other,
}

impl fmt::Display for UnionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnionKind::FullSpace => "FULL_SPACE",
            UnionKind::Hyperplane => "HYPERPLANE",
            UnionKind::Quadric => "QUADRIC",
            UnionKind::Other => "OTHER",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnionClassification {
    pub kind: UnionKind,
    pub union_points: usize,
    pub total_points: usize,
    /// The hyperplane's linear form, or the fitted degree-(k−1) basis.
    pub fitted: Vec<HomogPoly>,
    pub quadric_rank: Option<usize>,
}

/// Classifies the union of singular lines for n = 2k + 1.
pub fn classify_union(t: &TriForm) -> Result<UnionClassification, HypersurfaceError> {
    let n = t.n();
    if n % 2 == 0 {
        return Err(HypersurfaceError::WrongParity(n));
    }
    let field = t.field();
    let space = PointSpace::new(field, n)?;
    let union = union_points(t)?;
    let total = space.count();
    let mut result = UnionClassification {
        kind: UnionKind::Other,
        union_points: union.len(),
        total_points: total,
        fitted: Vec::new(),
        quadric_rank: None,
    };
    if union.len() == total {
        result.kind = UnionKind::FullSpace;
        return Ok(result);
    }
    let points: Vec<Vec<u32>> = union.iter().map(|&i| space.coords(i)).collect();
    if union.len() as u64 == projective_count(n - 1, field.q() as u64) {
        let span = linalg::row_space(field, &Matrix::from_rows(n, &points));
        if span.rows() == n - 1 {
            let normal = linalg::kernel(field, &span);
            result.kind = UnionKind::Hyperplane;
            result.fitted = vec![HomogPoly::new(
                field,
                n,
                1,
                (0..n).map(|i| {
                    let mut m = vec![0u8; n];
                    m[i] = 1;
                    (m, normal.get(0, i))
                }),
            )];
            return Ok(result);
        }
    }
    let d = (n - 1) / 2 - 1;
    if d == 0 {
        return Ok(result);
    }
    result.fitted = fit_vanishing(field, n, &points, d)?;
    if d == 2 && result.fitted.len() == 1 {
        let poly = &result.fitted[0];
        let zeros = (0..total).filter(|&i| poly.evaluate(&space.coords(i)) == 0).count();
        if zeros == union.len() {
            result.kind = UnionKind::Quadric;
            result.quadric_rank = poly.quadric_rank();
        }
    }
    Ok(result)
}
