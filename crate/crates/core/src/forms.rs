//! Alternating trilinear forms T on V(n, q), stored as their dual trivector
//! `t = Σ c_ijk f_ijk` over strictly increasing index triples.
//!
//! Indices are 0-based in the API and 1-based in text and JSON
//! (`f124` is the triple `[0, 1, 3]`).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{is_square, trace_abs, FieldDesc, FieldElem, FiniteField, GaloisField, GfError};
use crate::linalg::{self, Matrix};

pub const MIN_DIM: usize = 3;
pub const MAX_DIM: usize = 12;

/// The seven index triples of the Fano trivector, 1-based and in printed order.
pub const FANO_TRIPLES: [[u8; 3]; 7] =
    [[1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 7], [5, 6, 1], [6, 7, 2], [7, 1, 3]];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("dimension or field mismatch: {0}")]
    Mismatch(String),
    #[error("contraction with the zero vector")]
    ZeroVector,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension {0} outside {MIN_DIM}..={MAX_DIM}")]
    BadDimension(usize),
    #[error("cannot parse form: {0}")]
    Parse(String),
    #[error("unknown catalog form `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Sorted 0-based index triple `i < j < k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple(pub [u8; 3]);

impl Triple {
    /// Sorts arbitrary distinct indices, returning the triple and the sign of
    /// the sorting permutation. `None` if two indices coincide.
    pub fn sorted(i: usize, j: usize, k: usize) -> Option<(Triple, bool)> {
        if i == j || j == k || i == k {
            return None;
        }
        let mut v = [i, j, k];
        let mut odd = false;
        for a in 0..3 {
            for b in 0..2 - a {
                if v[b] > v[b + 1] {
                    v.swap(b, b + 1);
                    odd = !odd;
                }
            }
        }
        Some((Triple([v[0] as u8, v[1] as u8, v[2] as u8]), odd))
    }

    pub fn indices(self) -> [usize; 3] {
        self.0.map(|x| x as usize)
    }

    /// All triples of `0..n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Triple> {
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    out.push(Triple([i as u8, j as u8, k as u8]));
                }
            }
        }
        out
    }
}

fn index_char(i: usize) -> String {
    match i + 1 {
        d @ 1..=9 => d.to_string(),
        10 => "x".into(),
        11 => "y".into(),
        12 => "z".into(),
        d => format!("{{{d}}}"),
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f")?;
        for i in self.indices() {
            write!(f, "{}", index_char(i))?;
        }
        Ok(())
    }
}

/// A vector of V(n, q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vector {
    field: GaloisField,
    coords: Vec<u32>,
}

impl Vector {
    pub fn new(field: &GaloisField, coords: Vec<u32>) -> Result<Self, FormError> {
        if let Some(&bad) = coords.iter().find(|&&c| !field.contains(c)) {
            return Err(GfError::InvalidElement { value: bad as u64, order: field.order() }.into());
        }
        Ok(Self { field: field.clone(), coords })
    }

    pub fn zero(field: &GaloisField, n: usize) -> Self {
        Self { field: field.clone(), coords: vec![0; n] }
    }

    pub fn unit(field: &GaloisField, n: usize, i: usize) -> Self {
        let mut coords = vec![0; n];
        coords[i] = 1;
        Self { field: field.clone(), coords }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// Skew-symmetric matrix with zero diagonal, e.g. the contraction T(a, ·, ·).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewMatrix {
    field: GaloisField,
    entries: Matrix,
}

impl SkewMatrix {
    pub fn new(field: &GaloisField, entries: Matrix) -> Result<Self, FormError> {
        let n = entries.rows();
        if entries.cols() != n {
            return Err(FormError::Mismatch("skew matrix must be square".into()));
        }
        for i in 0..n {
            if entries.get(i, i) != 0 {
                return Err(FormError::Mismatch(format!("nonzero diagonal entry at {i}")));
            }
            for j in 0..i {
                if entries.get(i, j) != field.neg(entries.get(j, i)) {
                    return Err(FormError::Mismatch(format!("entries ({i},{j}) and ({j},{i}) not opposite")));
                }
            }
        }
        Ok(Self { field: field.clone(), entries })
    }

    pub fn n(&self) -> usize {
        self.entries.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries.get(i, j)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.entries
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        linalg::mat_vec(&self.field, &self.entries, v)
    }

    /// RREF basis of the kernel.
    pub fn kernel(&self) -> Matrix {
        linalg::kernel(&self.field, &self.entries)
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.field, &self.entries)
    }
}

/// Alternating trilinear form on V(n, q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriForm {
    n: usize,
    field: GaloisField,
    coeffs: BTreeMap<Triple, u32>,
}

impl TriForm {
    /// The zero form.
    pub fn zero(field: &GaloisField, n: usize) -> Result<Self, FormError> {
        if !(MIN_DIM..=MAX_DIM).contains(&n) {
            return Err(FormError::BadDimension(n));
        }
        Ok(Self { n, field: field.clone(), coeffs: BTreeMap::new() })
    }

    /// Builds `Σ c·f_ijk` from 1-based index terms in any order; repeated
    /// triples accumulate.
    pub fn from_terms(
        field: &GaloisField,
        n: usize,
        terms: &[(usize, usize, usize, u32)],
    ) -> Result<Self, FormError> {
        let mut t = Self::zero(field, n)?;
        for &(i, j, k, c) in terms {
            if [i, j, k].iter().any(|&x| x == 0 || x > n) {
                return Err(FormError::InvalidParameter(format!("index out of range in f{i}{j}{k}")));
            }
            t.add_term(i - 1, j - 1, k - 1, c)?;
        }
        Ok(t)
    }

    /// Adds `c·f_ijk` (0-based, any order).
    pub fn add_term(&mut self, i: usize, j: usize, k: usize, c: u32) -> Result<(), FormError> {
        if !self.field.contains(c) {
            return Err(GfError::InvalidElement { value: c as u64, order: self.field.order() }.into());
        }
        let (triple, odd) = Triple::sorted(i, j, k)
            .ok_or_else(|| FormError::InvalidParameter(format!("repeated index in ({i},{j},{k})")))?;
        if triple.0[2] as usize >= self.n {
            return Err(FormError::InvalidParameter(format!("index out of range in {triple}")));
        }
        let c = if odd { self.field.neg(c) } else { c };
        let f = &self.field;
        let new = f.add(self.coeffs.get(&triple).copied().unwrap_or(0), c);
        self.set(triple, new);
        Ok(())
    }

    fn set(&mut self, triple: Triple, c: u32) {
        if c == 0 {
            self.coeffs.remove(&triple);
        } else {
            self.coeffs.insert(triple, c);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Stored nonzero coefficients in triple order.
    pub fn terms(&self) -> impl Iterator<Item = (Triple, u32)> + '_ {
        self.coeffs.iter().map(|(&t, &c)| (t, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// T(e_i, e_j, e_k) for 0-based indices in any order.
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> u32 {
        match Triple::sorted(i, j, k) {
            None => 0,
            Some((t, odd)) => {
                let c = self.coeffs.get(&t).copied().unwrap_or(0);
                if odd {
                    self.field.neg(c)
                } else {
                    c
                }
            }
        }
    }

    pub fn scale(&self, lambda: u32) -> TriForm {
        let mut out = Self { n: self.n, field: self.field.clone(), coeffs: BTreeMap::new() };
        for (t, c) in self.terms() {
            out.set(t, self.field.mul(c, lambda));
        }
        out
    }

    pub fn add(&self, other: &TriForm) -> Result<TriForm, FormError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (t, c) in other.terms() {
            let new = self.field.add(out.coeffs.get(&t).copied().unwrap_or(0), c);
            out.set(t, new);
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &TriForm) -> Result<(), FormError> {
        if self.n != other.n || self.field != other.field {
            return Err(FormError::Mismatch(format!(
                "forms on V({}, {}) and V({}, {})",
                self.n,
                self.field.q(),
                other.n,
                other.field.q()
            )));
        }
        Ok(())
    }

    fn check_vector(&self, v: &Vector) -> Result<(), FormError> {
        if v.field != self.field || v.len() != self.n {
            return Err(FormError::Mismatch(format!(
                "vector of length {} over GF({}) used with a form on V({}, {})",
                v.len(),
                v.field.q(),
                self.n,
                self.field.q()
            )));
        }
        Ok(())
    }

    /// Σ c_ijk · det of the (i, j, k) columns of the 3×n matrix with rows x, y, z.
    pub fn evaluate(&self, x: &Vector, y: &Vector, z: &Vector) -> Result<FieldElem, FormError> {
        for v in [x, y, z] {
            self.check_vector(v)?;
        }
        Ok(self.field.element(self.evaluate_raw(&x.coords, &y.coords, &z.coords))?)
    }

    /// Unchecked [`evaluate`](Self::evaluate) on raw coordinates.
    pub fn evaluate_raw(&self, x: &[u32], y: &[u32], z: &[u32]) -> u32 {
        let f = &self.field;
        let mut acc = 0;
        for (t, c) in self.terms() {
            let [i, j, k] = t.indices();
            let m0 = f.sub(f.mul(y[j], z[k]), f.mul(y[k], z[j]));
            let m1 = f.sub(f.mul(y[i], z[k]), f.mul(y[k], z[i]));
            let m2 = f.sub(f.mul(y[i], z[j]), f.mul(y[j], z[i]));
            let det = f.add(f.sub(f.mul(x[i], m0), f.mul(x[j], m1)), f.mul(x[k], m2));
            acc = f.add(acc, f.mul(c, det));
        }
        acc
    }

    /// B_a with entries T(a, e_j, e_k).
    pub fn contract(&self, a: &Vector) -> Result<SkewMatrix, FormError> {
        self.check_vector(a)?;
        if a.is_zero() {
            return Err(FormError::ZeroVector);
        }
        let mut m = Matrix::zeros(self.n, self.n);
        self.contract_into(&a.coords, &mut m);
        Ok(SkewMatrix { field: self.field.clone(), entries: m })
    }

    /// Writes B_a into `out` (which must be n×n). Accepts the zero vector.
    pub fn contract_into(&self, a: &[u32], out: &mut Matrix) {
        let f = &self.field;
        for r in 0..self.n {
            for c in 0..self.n {
                out.set(r, c, 0);
            }
        }
        let mut bump = |r: usize, c: usize, v: u32| {
            if v != 0 {
                out.set(r, c, f.add(out.get(r, c), v));
                out.set(c, r, f.sub(out.get(c, r), v));
            }
        };
        for (t, c) in self.terms() {
            let [i, j, k] = t.indices();
            bump(j, k, f.mul(c, a[i]));
            bump(k, i, f.mul(c, a[j]));
            bump(i, j, f.mul(c, a[k]));
        }
    }

    /// Kernel of B_a as an RREF basis; always contains `a`.
    pub fn contraction_kernel(&self, a: &[u32]) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        self.contract_into(a, &mut m);
        linalg::kernel(&self.field, &m)
    }

    /// RREF basis of rad T = {a : T(a, ·, ·) = 0}.
    pub fn radical_basis(&self) -> Matrix {
        let n = self.n;
        let mut system = Matrix::zeros(0, n);
        for j in 0..n {
            for k in j + 1..n {
                let row: Vec<u32> = (0..n).map(|i| self.coeff(i, j, k)).collect();
                system.push_row(&row);
            }
        }
        linalg::kernel(&self.field, &system)
    }

    pub fn radical(&self) -> Vec<Vector> {
        self.radical_basis()
            .row_vecs()
            .into_iter()
            .map(|coords| Vector { field: self.field.clone(), coords })
            .collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical_basis().rows() == 0
    }

    /// T' with T'(x, y, z) = T(Ax, Ay, Az).
    pub fn transform(&self, a: &Matrix) -> Result<TriForm, FormError> {
        if a.rows() != self.n || a.cols() != self.n {
            return Err(FormError::Mismatch(format!(
                "{}x{} matrix acting on V({})",
                a.rows(),
                a.cols(),
                self.n
            )));
        }
        if linalg::rank(&self.field, a) < self.n {
            return Err(FormError::SingularMatrix);
        }
        let cols = a.transpose().row_vecs();
        let mut out = Self { n: self.n, field: self.field.clone(), coeffs: BTreeMap::new() };
        for t in Triple::all(self.n) {
            let [i, j, k] = t.indices();
            out.set(t, self.evaluate_raw(&cols[i], &cols[j], &cols[k]));
        }
        Ok(out)
    }

    /// Compact text, e.g. `f124+f235-f135+2*f456`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let mut out = String::new();
        for (t, c) in self.terms() {
            if c == 1 {
                if !out.is_empty() {
                    out.push('+');
                }
                out.push_str(&t.to_string());
            } else if f.p() > 2 && c == f.neg(1) {
                out.push('-');
                out.push_str(&t.to_string());
            } else {
                if !out.is_empty() {
                    out.push('+');
                }
                out.push_str(&format!("{c}*{t}"));
            }
        }
        out
    }

    pub fn to_json(&self) -> FormJson {
        FormJson {
            n: self.n,
            q: self.field.q(),
            field: Some(self.field.desc()),
            coeffs: self
                .terms()
                .map(|(t, c)| {
                    let [i, j, k] = t.indices();
                    (i + 1, j + 1, k + 1, self.field.coeffs(c))
                })
                .collect(),
        }
    }

    pub fn from_json(json: &FormJson) -> Result<Self, FormError> {
        let field = match &json.field {
            Some(desc) => GaloisField::from_desc(desc)?,
            None => GaloisField::from_order(json.q as u64)?,
        };
        if field.q() != json.q {
            return Err(FormError::Mismatch(format!("field order {} but q = {}", field.q(), json.q)));
        }
        let mut terms = Vec::with_capacity(json.coeffs.len());
        for (i, j, k, c) in &json.coeffs {
            terms.push((*i, *j, *k, field.from_coeffs(c)?));
        }
        Self::from_terms(&field, json.n, &terms)
    }
}

impl fmt::Display for TriForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `{"n": 6, "q": 2, "coeffs": [[1, 2, 3, [1]], ...]}`; 1-based indices,
/// coefficients as little-endian coefficient arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub n: usize,
    pub q: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDesc>,
    pub coeffs: Vec<(usize, usize, usize, Vec<u32>)>,
}

/// Parses `f124+f235-f135+mu*f456+2*f{1,7,10}`. Index characters are `1`-`9`,
/// `x`/`y`/`z` for 10/11/12, or a braced comma list. Coefficients are packed
/// field elements or `mu`. If `n` is `None` it is the largest index used (at
/// least 3).
pub fn parse_form(
    text: &str,
    field: &GaloisField,
    n: Option<usize>,
    mu: Option<u32>,
) -> Result<TriForm, FormError> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(FormError::Parse("empty form".into()));
    }
    let mut terms: Vec<(usize, usize, usize, u32)> = Vec::new();
    let bytes: Vec<char> = cleaned.chars().collect();
    let mut pos = 0;
    let err = |msg: &str, at: usize| FormError::Parse(format!("{msg} at offset {at} in `{cleaned}`"));
    if cleaned == "0" {
        return TriForm::zero(field, n.unwrap_or(MIN_DIM));
    }
    while pos < bytes.len() {
        let mut negative = false;
        match bytes[pos] {
            '+' => pos += 1,
            '-' => {
                negative = true;
                pos += 1
            }
            _ if pos != 0 => return Err(err("expected + or -", pos)),
            _ => {}
        }
        let mut coeff = field.one();
        if bytes.get(pos) != Some(&'f') {
            let start = pos;
            while pos < bytes.len() && bytes[pos] != '*' {
                pos += 1;
            }
            if bytes.get(pos) != Some(&'*') {
                return Err(err("expected `*` after coefficient", start));
            }
            let word: String = bytes[start..pos].iter().collect();
            pos += 1;
            coeff = if word == "mu" {
                mu.ok_or_else(|| FormError::Parse("`mu` used but no value given".into()))?
            } else {
                let v: u32 = word.parse().map_err(|_| err("bad coefficient", start))?;
                if !field.contains(v) {
                    return Err(FormError::Parse(format!("coefficient {v} not in GF({})", field.q())));
                }
                v
            };
        }
        if bytes.get(pos) != Some(&'f') {
            return Err(err("expected `f`", pos));
        }
        pos += 1;
        let mut idx = Vec::new();
        if bytes.get(pos) == Some(&'{') {
            let close = bytes[pos..]
                .iter()
                .position(|&c| c == '}')
                .ok_or_else(|| err("unclosed `{`", pos))?;
            let inner: String = bytes[pos + 1..pos + close].iter().collect();
            for part in inner.split(',') {
                idx.push(part.parse::<usize>().map_err(|_| err("bad index", pos))?);
            }
            pos += close + 1;
        } else {
            while idx.len() < 3 && pos < bytes.len() {
                let i = match bytes[pos] {
                    c @ '1'..='9' => c as usize - '0' as usize,
                    'x' => 10,
                    'y' => 11,
                    'z' => 12,
                    _ => break,
                };
                idx.push(i);
                pos += 1;
            }
        }
        if idx.len() != 3 {
            return Err(err("expected three indices", pos));
        }
        if negative {
            coeff = field.neg(coeff);
        }
        terms.push((idx[0], idx[1], idx[2], coeff));
    }
    let max_index = terms.iter().map(|t| t.0.max(t.1).max(t.2)).max().unwrap_or(0);
    let n = n.unwrap_or(max_index.max(MIN_DIM));
    if max_index > n {
        return Err(FormError::Parse(format!("index {max_index} exceeds dimension {n}")));
    }
    TriForm::from_terms(field, n, &terms)
}

/// Named forms with their coefficient patterns as printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// t = f124+f235+f346+f457+f561+f672+f713 on V7.
    Fano7,
    /// f123 + μ(f156 − f246 + f345), μ a non-square, q odd.
    SpreadOdd,
    /// f234+f135+f126+f156+f246+f345, q = 2^h with h odd.
    SpreadEvenHOdd,
    /// The h-odd pattern plus μ·f456 with tr(μ) = 1, q = 2^h with h even.
    SpreadEvenHEven,
    /// f156+f246+f345+f123+f456, q = 2^h with h odd.
    TPrime,
    /// f234+f135+f126+f123+f456, q = 2^h with h odd.
    TDoublePrime,
    /// f156+f246+f345 on V6.
    Ts6,
    /// f17x+f28x+f39x+f489+f579+f678 on V10.
    Ts10,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Fano7,
        Family::SpreadOdd,
        Family::SpreadEvenHOdd,
        Family::SpreadEvenHEven,
        Family::TPrime,
        Family::TDoublePrime,
        Family::Ts6,
        Family::Ts10,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Fano7 => "fano7",
            Family::SpreadOdd => "spread_odd",
            Family::SpreadEvenHOdd => "spread_even_hodd",
            Family::SpreadEvenHEven => "spread_even_heven",
            Family::TPrime => "t_prime",
            Family::TDoublePrime => "t_double_prime",
            Family::Ts6 => "ts6",
            Family::Ts10 => "ts10",
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            Family::Fano7 => 7,
            Family::Ts10 => 10,
            _ => 6,
        }
    }

    pub fn takes_mu(self) -> bool {
        matches!(self, Family::SpreadOdd | Family::SpreadEvenHEven)
    }

    /// The least μ satisfying the family's condition, if it takes one.
    pub fn default_mu(self, field: &GaloisField) -> Option<u32> {
        match self {
            Family::SpreadOdd => field.elements().find(|&m| !is_square(field, m)),
            Family::SpreadEvenHEven => field.elements().find(|&m| trace_abs(field, m) == Ok(1)),
            _ => None,
        }
    }

    /// Builds the form after validating the family's field and μ conditions.
    pub fn build(self, field: &GaloisField, mu: Option<u32>) -> Result<TriForm, FormError> {
        let invalid = |msg: String| Err(FormError::InvalidParameter(msg));
        let q = field.q();
        let even = field.p() == 2;
        let mu = match (self.takes_mu(), mu) {
            (false, Some(_)) => return invalid(format!("{} takes no mu", self.name())),
            (true, None) => self.default_mu(field),
            (_, m) => m,
        };
        if let Some(m) = mu {
            if !field.contains(m) {
                return invalid(format!("mu = {m} is not an element of GF({q})"));
            }
        }
        match self {
            Family::SpreadOdd => {
                if even {
                    return invalid(format!("spread_odd needs odd q, got q = {q}"));
                }
                let m = mu.ok_or_else(|| FormError::InvalidParameter("mu required".into()))?;
                if is_square(field, m) {
                    return invalid(format!("mu = {} must be a non-square in GF({q})", field.format(m)));
                }
            }
            Family::SpreadEvenHOdd | Family::TPrime | Family::TDoublePrime => {
                if !even || field.h() % 2 == 0 {
                    return invalid(format!("{} needs q = 2^h with h odd, got q = {q}", self.name()));
                }
            }
            Family::SpreadEvenHEven => {
                if !even || field.h() % 2 == 1 {
                    return invalid(format!("spread_even_heven needs q = 2^h with h even, got q = {q}"));
                }
                let m = mu.ok_or_else(|| FormError::InvalidParameter("mu required".into()))?;
                if trace_abs(field, m)? != 1 {
                    return invalid(format!("mu = {} must have absolute trace tr(mu) = 1", field.format(m)));
                }
            }
            Family::Fano7 | Family::Ts6 | Family::Ts10 => {}
        }
        Ok(self.pattern(field, mu))
    }

    /// The coefficient pattern without any parameter validation.
    pub fn pattern(self, field: &GaloisField, mu: Option<u32>) -> TriForm {
        let one = field.one();
        let minus = field.neg(one);
        let mu = mu.unwrap_or(one);
        let neg_mu = field.neg(mu);
        let terms: Vec<(usize, usize, usize, u32)> = match self {
            Family::Fano7 => FANO_TRIPLES.iter().map(|t| (t[0] as usize, t[1] as usize, t[2] as usize, one)).collect(),
            Family::SpreadOdd => vec![(1, 2, 3, one), (1, 5, 6, mu), (2, 4, 6, neg_mu), (3, 4, 5, mu)],
            Family::SpreadEvenHOdd => t1_t2(one, minus),
            Family::SpreadEvenHEven => {
                let mut t = t1_t2(one, minus);
                t.push((4, 5, 6, mu));
                t
            }
            Family::TPrime => vec![(1, 5, 6, one), (2, 4, 6, one), (3, 4, 5, one), (1, 2, 3, one), (4, 5, 6, one)],
            Family::TDoublePrime => {
                vec![(2, 3, 4, one), (1, 3, 5, one), (1, 2, 6, one), (1, 2, 3, one), (4, 5, 6, one)]
            }
            Family::Ts6 => vec![(1, 5, 6, one), (2, 4, 6, one), (3, 4, 5, one)],
            Family::Ts10 => vec![
                (1, 7, 10, one),
                (2, 8, 10, one),
                (3, 9, 10, one),
                (4, 8, 9, one),
                (5, 7, 9, one),
                (6, 7, 8, one),
            ],
        };
        TriForm::from_terms(field, self.dimension(), &terms).expect("catalog patterns are well formed")
    }
}

// t1 + t2 = f234 − f135 + f126 + f156 − f246 + f345; the signs vanish in characteristic 2.
fn t1_t2(one: u32, minus: u32) -> Vec<(usize, usize, usize, u32)> {
    vec![(2, 3, 4, one), (1, 3, 5, minus), (1, 2, 6, one), (1, 5, 6, one), (2, 4, 6, minus), (3, 4, 5, one)]
}

impl FromStr for Family {
    type Err = FormError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| FormError::UnknownFamily(s.to_string()))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Looks up a named catalog form over GF(q).
pub fn catalog(name: &str, q: u64, mu: Option<u32>) -> Result<TriForm, FormError> {
    let family: Family = name.parse()?;
    family.build(&GaloisField::from_order(q)?, mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u64) -> GaloisField {
        GaloisField::from_order(q).unwrap()
    }

    fn e(f: &GaloisField, n: usize, i: usize) -> Vector {
        Vector::unit(f, n, i - 1)
    }

    fn random_vec(f: &GaloisField, n: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
        (0..n).map(|_| rng.gen_range(0..f.q())).collect()
    }

    fn random_form(f: &GaloisField, n: usize, rng: &mut ChaCha8Rng) -> TriForm {
        let mut t = TriForm::zero(f, n).unwrap();
        for tr in Triple::all(n) {
            let [i, j, k] = tr.indices();
            t.add_term(i, j, k, rng.gen_range(0..f.q())).unwrap();
        }
        t
    }

    fn random_invertible(f: &GaloisField, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        loop {
            let data = (0..n * n).map(|_| rng.gen_range(0..f.q())).collect();
            let m = Matrix::from_vec(n, n, data);
            if linalg::rank(f, &m) == n {
                return m;
            }
        }
    }

    #[test]
    fn fano_evaluation_examples() {
        let f = gf(3);
        let t = Family::Fano7.build(&f, None).unwrap();
        assert_eq!(t.evaluate(&e(&f, 7, 1), &e(&f, 7, 2), &e(&f, 7, 4)).unwrap().value(), 1);
        assert_eq!(t.evaluate(&e(&f, 7, 2), &e(&f, 7, 1), &e(&f, 7, 4)).unwrap().value(), 2);
        let x = Vector::new(&f, vec![1, 2, 0, 1, 1, 2, 0]).unwrap();
        let y = Vector::new(&f, vec![0, 1, 1, 2, 0, 0, 1]).unwrap();
        assert_eq!(t.evaluate(&x, &x, &y).unwrap().value(), 0);
    }

    #[test]
    fn fano_coefficients_are_all_plus_one() {
        for q in [2, 3, 5] {
            let t = catalog("fano7", q, None).unwrap();
            let got: Vec<String> = t.terms().map(|(tr, c)| format!("{tr}:{c}")).collect();
            assert_eq!(got, ["f124:1", "f137:1", "f156:1", "f235:1", "f267:1", "f346:1", "f457:1"]);
        }
    }

    #[test]
    fn ts6_and_ts10_patterns() {
        let t = catalog("ts6", 2, None).unwrap();
        assert_eq!(t.to_text(), "f156+f246+f345");
        let t = catalog("ts10", 2, None).unwrap();
        assert_eq!(t.n(), 10);
        assert_eq!(t.to_text(), "f17x+f28x+f39x+f489+f579+f678");
    }

    #[test]
    fn catalog_parameter_validation() {
        assert!(matches!(catalog("spread_odd", 3, Some(1)), Err(FormError::InvalidParameter(_))));
        assert!(catalog("spread_odd", 3, Some(2)).is_ok());
        assert!(matches!(catalog("spread_odd", 4, Some(2)), Err(FormError::InvalidParameter(_))));
        assert!(matches!(catalog("spread_even_hodd", 4, None), Err(FormError::InvalidParameter(_))));
        assert!(catalog("spread_even_hodd", 8, None).is_ok());
        // GF(4): tr(1) = 0, tr(w) = 1
        assert!(matches!(catalog("spread_even_heven", 4, Some(1)), Err(FormError::InvalidParameter(_))));
        assert_eq!(catalog("spread_even_heven", 4, None).unwrap(), catalog("spread_even_heven", 4, Some(2)).unwrap());
        assert!(matches!(catalog("ts6", 2, Some(1)), Err(FormError::InvalidParameter(_))));
        assert!(matches!(catalog("nope", 2, None), Err(FormError::UnknownFamily(_))));
        assert_eq!(catalog("spread_odd", 5, None).unwrap(), catalog("spread_odd", 5, Some(2)).unwrap());
    }

    #[test]
    fn spread_odd_signs_as_printed() {
        let t = catalog("spread_odd", 3, Some(2)).unwrap();
        assert_eq!(t.coeff(1, 3, 5), 1); // −μ = −2 = 1 in GF(3)
        assert_eq!(t.coeff(0, 4, 5), 2);
        assert_eq!(t.to_text(), "f123-f156+f246-f345");
    }

    #[test]
    fn contract_examples() {
        let f = gf(5);
        let t = TriForm::from_terms(&f, 3, &[(1, 2, 3, 1)]).unwrap();
        let b = t.contract(&e(&f, 3, 1)).unwrap();
        assert_eq!(b.get(1, 2), 1);
        assert_eq!(b.get(2, 1), 4);
        assert_eq!(b.matrix().data().iter().filter(|&&x| x != 0).count(), 2);
        assert_eq!(t.contract(&Vector::zero(&f, 3)), Err(FormError::ZeroVector));

        let f3 = gf(3);
        let fano = catalog("fano7", 3, None).unwrap();
        let k = fano.contract(&e(&f3, 7, 1)).unwrap().kernel();
        assert_eq!(k, Matrix::from_rows(7, &[[1, 0, 0, 0, 0, 0, 0]]));
    }

    #[test]
    fn contract_agrees_with_evaluate_and_kills_a() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2, 3, 4, 5, 9] {
            let f = gf(q);
            for n in [4, 6, 7] {
                let t = random_form(&f, n, &mut rng);
                let a = random_vec(&f, n, &mut rng);
                if a.iter().all(|&x| x == 0) {
                    continue;
                }
                let b = t.contract(&Vector::new(&f, a.clone()).unwrap()).unwrap();
                assert!(b.apply(&a).iter().all(|&x| x == 0));
                for j in 0..n {
                    for k in 0..n {
                        let ej = Vector::unit(&f, n, j);
                        let ek = Vector::unit(&f, n, k);
                        let av = Vector::new(&f, a.clone()).unwrap();
                        assert_eq!(b.get(j, k), t.evaluate(&av, &ej, &ek).unwrap().value());
                    }
                }
                SkewMatrix::new(&f, b.matrix().clone()).unwrap();
            }
        }
    }

    #[test]
    fn radical_examples() {
        let f = gf(3);
        let t = TriForm::from_terms(&f, 6, &[(1, 2, 3, 1)]).unwrap();
        let r = t.radical_basis();
        assert_eq!(r.row_vecs(), vec![vec![0, 0, 0, 1, 0, 0], vec![0, 0, 0, 0, 1, 0], vec![0, 0, 0, 0, 0, 1]]);
        assert!(catalog("fano7", 2, None).unwrap().is_nondegenerate());
        assert_eq!(TriForm::zero(&f, 5).unwrap().radical().len(), 5);
    }

    #[test]
    fn radical_matches_brute_force() {
        // every vector a with T(a, e_j, e_k) = 0 for all j, k
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = gf(2);
        for _ in 0..30 {
            let mut t = TriForm::zero(&f, 6).unwrap();
            for _ in 0..rng.gen_range(1..5) {
                let tr = Triple::all(6)[rng.gen_range(0..20)];
                let [i, j, k] = tr.indices();
                t.add_term(i, j, k, 1).unwrap();
            }
            let mut count = 0;
            for bits in 0u32..64 {
                let a: Vec<u32> = (0..6).map(|i| (bits >> i) & 1).collect();
                let mut m = Matrix::zeros(6, 6);
                t.contract_into(&a, &mut m);
                if m.is_zero() {
                    count += 1;
                }
            }
            assert_eq!(count, 1 << t.radical_basis().rows());
        }
    }

    #[test]
    fn transform_examples() {
        let fano = catalog("fano7", 2, None).unwrap();
        assert_eq!(fano.transform(&Matrix::identity(7)).unwrap(), fano);
        // e_i -> e_{i+1 mod 7}
        let mut shift = Matrix::zeros(7, 7);
        for i in 0..7 {
            shift.set((i + 1) % 7, i, 1);
        }
        assert_eq!(fano.transform(&shift).unwrap(), fano);

        let f5 = gf(5);
        let t = TriForm::from_terms(&f5, 4, &[(1, 2, 3, 1)]).unwrap();
        let mut d = Matrix::identity(4);
        d.set(0, 0, 3);
        assert_eq!(t.transform(&d).unwrap(), t.scale(3));
        let sing = Matrix::zeros(4, 4);
        assert_eq!(t.transform(&sing), Err(FormError::SingularMatrix));
    }

    #[test]
    fn transform_is_a_right_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for q in [2, 3, 4] {
            let f = gf(q);
            let t = random_form(&f, 5, &mut rng);
            let a = random_invertible(&f, 5, &mut rng);
            let b = random_invertible(&f, 5, &mut rng);
            let lhs = t.transform(&a).unwrap().transform(&b).unwrap();
            let rhs = t.transform(&linalg::mul(&f, &a, &b)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn contract_commutes_with_transform() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for q in [2, 3, 5, 8] {
            let f = gf(q);
            let t = random_form(&f, 6, &mut rng);
            let a = random_invertible(&f, 6, &mut rng);
            let v = loop {
                let v = random_vec(&f, 6, &mut rng);
                if v.iter().any(|&x| x != 0) {
                    break v;
                }
            };
            let lhs = t.transform(&a).unwrap().contract(&Vector::new(&f, v.clone()).unwrap()).unwrap();
            let av = linalg::mat_vec(&f, &a, &v);
            let inner = t.contract(&Vector::new(&f, av).unwrap()).unwrap();
            let rhs = linalg::mul(&f, &linalg::mul(&f, &a.transpose(), inner.matrix()), &a);
            assert_eq!(lhs.matrix(), &rhs);
        }
    }

    #[test]
    fn radical_is_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for q in [2, 3] {
            let f = gf(q);
            for _ in 0..10 {
                let t = TriForm::from_terms(&f, 6, &[(1, 2, 3, 1), (1, 4, 5, 1)]).unwrap();
                let a = random_invertible(&f, 6, &mut rng);
                let ainv = linalg::inverse(&f, &a).unwrap();
                let moved: Vec<Vec<u32>> =
                    t.radical_basis().row_vecs().iter().map(|v| linalg::mat_vec(&f, &ainv, v)).collect();
                let expected = linalg::row_space(&f, &Matrix::from_rows(6, &moved));
                assert_eq!(t.transform(&a).unwrap().radical_basis(), expected);
            }
        }
    }

    #[test]
    fn text_roundtrip_and_grammar() {
        let f = gf(3);
        let t = parse_form("f124+f235-f135", &f, None, None).unwrap();
        assert_eq!(t.n(), 5);
        assert_eq!(t.coeff(0, 2, 4), 2);
        let u = parse_form("f123+mu*f456", &f, Some(6), Some(2)).unwrap();
        assert_eq!(u.coeff(3, 4, 5), 2);
        let v = parse_form("f17x+2*f{2,8,10}-f321", &f, None, None).unwrap();
        assert_eq!(v.n(), 10);
        assert_eq!(v.coeff(1, 7, 9), 2);
        assert_eq!(v.coeff(0, 1, 2), 1); // −f321 = +f123
        assert_eq!(parse_form(&v.to_text(), &f, Some(10), None).unwrap(), v);
        for bad in ["", "f12", "g123", "f123+", "7*f123", "f113", "mu*f123"] {
            assert!(parse_form(bad, &f, None, None).is_err(), "{bad}");
        }
    }

    #[test]
    fn json_roundtrip() {
        let t = catalog("spread_even_heven", 4, None).unwrap();
        let json = serde_json::to_string(&t.to_json()).unwrap();
        assert!(json.contains("[4,5,6,[0,1]]"), "{json}");
        let back: FormJson = serde_json::from_str(&json).unwrap();
        assert_eq!(TriForm::from_json(&back).unwrap(), t);
        let bare: FormJson = serde_json::from_str(r#"{"n":6,"q":2,"coeffs":[[1,5,6,[1]],[2,4,6,[1]],[3,4,5,[1]]]}"#).unwrap();
        assert_eq!(TriForm::from_json(&bare).unwrap(), catalog("ts6", 2, None).unwrap());
    }

    proptest::proptest! {
        #[test]
        fn evaluate_is_trilinear_and_alternating(
            seed in 0u64..1000, qi in 0usize..5, alpha in 0u32..9
        ) {
            let q = [2u64, 3, 4, 5, 9][qi];
            let f = gf(q);
            let alpha = alpha % f.q();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(3..8);
            let t = random_form(&f, n, &mut rng);
            let [x, x2, y, z] = [0; 4].map(|_| random_vec(&f, n, &mut rng));
            let comb: Vec<u32> = x.iter().zip(&x2).map(|(&a, &b)| f.add(f.mul(alpha, a), b)).collect();
            let lhs = t.evaluate_raw(&comb, &y, &z);
            let rhs = f.add(f.mul(alpha, t.evaluate_raw(&x, &y, &z)), t.evaluate_raw(&x2, &y, &z));
            proptest::prop_assert_eq!(lhs, rhs);
            let v = t.evaluate_raw(&x, &y, &z);
            proptest::prop_assert_eq!(t.evaluate_raw(&y, &x, &z), f.neg(v));
            proptest::prop_assert_eq!(t.evaluate_raw(&y, &z, &x), v);
            proptest::prop_assert_eq!(t.evaluate_raw(&x, &y, &x), 0);
        }

        #[test]
        fn basis_evaluation_recovers_coefficients(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = gf([2u64, 3, 7][rng.gen_range(0..3)]);
            let n = rng.gen_range(3..9);
            let t = random_form(&f, n, &mut rng);
            for tr in Triple::all(n) {
                let [i, j, k] = tr.indices();
                let (ei, ej, ek) = (Vector::unit(&f, n, i), Vector::unit(&f, n, j), Vector::unit(&f, n, k));
                let stored = t.terms().find(|(s, _)| *s == tr).map(|(_, c)| c).unwrap_or(0);
                proptest::prop_assert_eq!(t.evaluate(&ei, &ej, &ek).unwrap().value(), stored);
            }
        }
    }
}
