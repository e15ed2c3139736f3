//! Counting: |GL(n, q)|, the ratio q^C(n,3) / |GL(n, q)|, exhaustive orbit
//! partitions of ∧³V* at tiny sizes, and invariant fingerprints.

use std::collections::VecDeque;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::bits::Gf2Form;
use crate::forms::{FormError, TriForm, Triple};
use crate::geometry::{self, lines_through, GeometryError};
use crate::gf::{self, primitive_element, FiniteField, GaloisField};
use crate::hypersurface::{classify_union, UnionKind};
use crate::linalg::{self, Matrix};

/// Largest coefficient space the orbit search will enumerate.
pub const MAX_ORBIT_STATES: u64 = 1 << 24;

/// Published approximate values of N(n, 2) for n = 5..=11.
pub const REFERENCE_RATIOS: [(usize, f64); 7] =
    [(5, 0.00010), (6, 0.000053), (7, 0.00021), (8, 0.0135), (9, 27.6), (10, 3.6e6), (11, 6.1e13)];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("q^C(n,3) = {0} states exceeds the orbit search cap of 2^24")]
    TooLarge(u64),
    #[error("n must be at least {min}, got {n}")]
    BadDimension { n: usize, min: usize },
    #[error("generator is not an invertible {0}×{0} matrix")]
    BadGenerator(usize),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// |GL(n, q)| = q^(n(n−1)/2) · ∏ (q^i − 1).
pub fn gl_order(n: usize, q: u64) -> BigUint {
    let q = BigUint::from(q);
    let mut order = q.pow((n * (n - 1) / 2) as u32);
    for i in 1..=n {
        order *= q.pow(i as u32) - 1u32;
    }
    order
}

/// Exact ratio with a float approximation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigRatio(pub BigRational);

impl BigRatio {
    pub fn new(num: BigUint, den: BigUint) -> Self {
        BigRatio(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl Serialize for BigRatio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            numerator: String,
            denominator: String,
            approx: f64,
        }
        Repr { numerator: self.numer().to_string(), denominator: self.denom().to_string(), approx: self.to_f64() }
            .serialize(s)
    }
}

/// N(n, q) = q^C(n,3) / |GL(n, q)|.
pub fn orbit_ratio(n: usize, q: u64) -> Result<BigRatio, CensusError> {
    if n < 3 {
        return Err(CensusError::BadDimension { n, min: 3 });
    }
    let forms = BigUint::from(q).pow(binomial(n as u64, 3) as u32);
    Ok(BigRatio::new(forms, gl_order(n, q)))
}

/// diag(ξ, 1, …, 1) with ξ primitive (omitted for q = 2), the transvection
/// I + E12, and the n-cycle e_i ↦ e_(i+1).
pub fn standard_generators(field: &GaloisField, n: usize) -> Vec<Matrix> {
    let mut diag = Matrix::identity(n);
    diag.set(0, 0, primitive_element(field));
    let mut transvection = Matrix::identity(n);
    if n > 1 {
        transvection.set(0, 1, 1);
    }
    let mut cycle = Matrix::zeros(n, n);
    for i in 0..n {
        cycle.set((i + 1) % n, i, 1);
    }
    let mut gens = vec![transvection, cycle];
    if field.q() > 2 {
        gens.insert(0, diag);
    }
    gens
}

fn pack_matrix(m: &Matrix, q: u64) -> u64 {
    m.data().iter().rev().fold(0, |acc, &x| acc * q + x as u64)
}

/// Order of the group generated by `gens`, by closure; `None` if q^(n²) > 2^26.
pub fn generated_group_order(field: &GaloisField, gens: &[Matrix]) -> Option<u64> {
    let n = gens.first()?.rows();
    let q = field.q() as u64;
    let states = q.checked_pow((n * n) as u32)?;
    if states > 1 << 26 {
        return None;
    }
    let mut seen = vec![false; states as usize];
    let id = Matrix::identity(n);
    seen[pack_matrix(&id, q) as usize] = true;
    let mut queue = VecDeque::from([id]);
    let mut count = 1;
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let next = linalg::mul(field, &m, g);
            let key = pack_matrix(&next, q) as usize;
            if !seen[key] {
                seen[key] = true;
                count += 1;
                queue.push_back(next);
            }
        }
    }
    Some(count)
}

/// Coordinates of ∧³V* as packed base-q integers over the triples in order.
#[derive(Clone, Debug)]
pub struct CoefficientSpace {
    field: GaloisField,
    n: usize,
    triples: Vec<Triple>,
    states: u64,
}

impl CoefficientSpace {
    pub fn new(field: &GaloisField, n: usize) -> Result<Self, CensusError> {
        if !(3..=12).contains(&n) {
            return Err(CensusError::BadDimension { n, min: 3 });
        }
        let triples = Triple::all(n);
        let states = (field.q() as u64)
            .checked_pow(triples.len() as u32)
            .filter(|&s| s <= MAX_ORBIT_STATES)
            .ok_or(CensusError::TooLarge((field.q() as u64).saturating_pow(triples.len() as u32)))?;
        Ok(Self { field: field.clone(), n, triples, states })
    }

    pub fn states(&self) -> u64 {
        self.states
    }

    pub fn digits(&self, mut index: u64) -> Vec<u32> {
        let q = self.field.q() as u64;
        (0..self.triples.len())
            .map(|_| {
                let d = (index % q) as u32;
                index /= q;
                d
            })
            .collect()
    }

    pub fn index_of_digits(&self, digits: &[u32]) -> u64 {
        let q = self.field.q() as u64;
        digits.iter().rev().fold(0, |acc, &d| acc * q + d as u64)
    }

    pub fn form(&self, index: u64) -> TriForm {
        let mut t = TriForm::zero(&self.field, self.n).expect("dimension checked");
        for (tr, c) in self.triples.iter().zip(self.digits(index)) {
            let [i, j, k] = tr.indices();
            t.add_term(i, j, k, c).expect("valid coefficient");
        }
        t
    }

    pub fn index_of(&self, t: &TriForm) -> u64 {
        let digits: Vec<u32> = self.triples.iter().map(|tr| {
            let [i, j, k] = tr.indices();
            t.coeff(i, j, k)
        }).collect();
        self.index_of_digits(&digits)
    }

    /// Matrix of T ↦ transform(T, A) on coefficient vectors (column t = image of the unit form t).
    pub fn action_matrix(&self, a: &Matrix) -> Result<Matrix, CensusError> {
        let m = self.triples.len();
        let mut w = Matrix::zeros(m, m);
        for (col, tr) in self.triples.iter().enumerate() {
            let [i, j, k] = tr.indices();
            let mut unit = TriForm::zero(&self.field, self.n)?;
            unit.add_term(i, j, k, 1)?;
            let image = unit.transform(a).map_err(|_| CensusError::BadGenerator(self.n))?;
            for (row, tr2) in self.triples.iter().enumerate() {
                let [x, y, z] = tr2.indices();
                w.set(row, col, image.coeff(x, y, z));
            }
        }
        Ok(w)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    /// Least packed index in the orbit.
    pub representative: u64,
    pub size: u64,
}

#[derive(Clone, Debug)]
pub struct OrbitPartition {
    pub space: CoefficientSpace,
    pub orbits: Vec<Orbit>,
    labels: Vec<u32>,
}

impl OrbitPartition {
    pub fn orbit_of_index(&self, index: u64) -> usize {
        self.labels[index as usize] as usize
    }

    pub fn orbit_of(&self, t: &TriForm) -> usize {
        self.orbit_of_index(self.space.index_of(t))
    }

    pub fn members(&self, orbit: usize) -> impl Iterator<Item = u64> + '_ {
        self.labels.iter().enumerate().filter(move |(_, &l)| l as usize == orbit).map(|(i, _)| i as u64)
    }
}

/// Orbits of GL(n, q) (or of the group generated by `generators`) on ∧³V*.
pub fn orbit_partition(n: usize, q: u64, generators: Option<&[Matrix]>) -> Result<OrbitPartition, CensusError> {
    let field = GaloisField::from_order(q).map_err(FormError::from)?;
    let space = CoefficientSpace::new(&field, n)?;
    let gens = match generators {
        Some(g) => g.to_vec(),
        None => standard_generators(&field, n),
    };
    for g in &gens {
        if g.rows() != n || g.cols() != n || linalg::rank(&field, g) != n {
            return Err(CensusError::BadGenerator(n));
        }
    }
    let actions: Vec<Matrix> = gens.iter().map(|g| space.action_matrix(g)).collect::<Result<_, _>>()?;
    let m = space.triples.len();
    // images of unit vectors, as packed indices, for the characteristic-2 prime-field shortcut
    let columns: Vec<Vec<u64>> = actions
        .iter()
        .map(|w| (0..m).map(|c| space.index_of_digits(&(0..m).map(|r| w.get(r, c)).collect::<Vec<_>>())).collect())
        .collect();
    let apply = |g: usize, s: u64| -> u64 {
        if q == 2 {
            let mut out = 0;
            let mut bits = s;
            while bits != 0 {
                out ^= columns[g][bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            out
        } else {
            space.index_of_digits(&linalg::mat_vec(&field, &actions[g], &space.digits(s)))
        }
    };
    let states = space.states as usize;
    let mut labels = vec![u32::MAX; states];
    let mut orbits = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..states {
        if labels[start] != u32::MAX {
            continue;
        }
        let id = orbits.len() as u32;
        labels[start] = id;
        queue.push_back(start as u64);
        let mut size = 1;
        while let Some(s) = queue.pop_front() {
            for g in 0..gens.len() {
                let t = apply(g, s) as usize;
                if labels[t] == u32::MAX {
                    labels[t] = id;
                    size += 1;
                    queue.push_back(t as u64);
                }
            }
        }
        orbits.push(Orbit { representative: start as u64, size });
    }
    Ok(OrbitPartition { space, orbits, labels })
}

fn poly_mul(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn companion(p: u32, poly: &[u32]) -> Matrix {
    let m = poly.len() - 1;
    let mut c = Matrix::zeros(m, m);
    for i in 0..m {
        if i + 1 < m {
            c.set(i + 1, i, 1);
        }
        c.set(i, m - 1, (p - poly[i]) % p);
    }
    c
}

fn partitions(k: usize, max: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=k.min(max)).rev() {
        for mut rest in partitions(k - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

// |centralizer| contribution of a partition λ for a polynomial with Q = q^deg:
// Q^(Σ λ'_i² − Σ m_i(m_i+1)/2) · ∏_i ∏_{k ≤ m_i} (Q^k − 1).
fn centralizer_factor(lambda: &[usize], big_q: &BigUint) -> BigUint {
    let largest = lambda.first().copied().unwrap_or(0);
    let conj_sq: usize = (1..=largest).map(|i| lambda.iter().filter(|&&x| x >= i).count().pow(2)).sum();
    let mut out = BigUint::one();
    let mut shift = 0usize;
    for part in 1..=largest {
        let mi = lambda.iter().filter(|&&x| x == part).count();
        shift += mi * (mi + 1) / 2;
        for k in 1..=mi {
            out *= big_q.pow(k as u32) - 1u32;
        }
    }
    out * big_q.pow((conj_sq - shift) as u32)
}

/// Conjugacy classes of GL(n, p), p prime: a rational canonical representative and the class size.
pub fn gl_conjugacy_classes(n: usize, p: u32) -> Vec<(Matrix, BigUint)> {
    assert!(gf::is_prime(p as u64), "class enumeration needs a prime field");
    let mut irreducibles: Vec<Vec<u32>> = Vec::new();
    for d in 1..=n {
        let total = (p as u64).pow(d as u32);
        for code in 0..total {
            let mut poly: Vec<u32> = (0..d).map(|i| ((code / (p as u64).pow(i as u32)) % p as u64) as u32).collect();
            poly.push(1);
            if poly[0] != 0 && gf::is_irreducible(p, &poly) {
                irreducibles.push(poly);
            }
        }
    }
    let group = gl_order(n, p as u64);
    let mut out = Vec::new();
    let mut chosen: Vec<(usize, Vec<usize>)> = Vec::new();
    fn rec(
        idx: usize,
        left: usize,
        p: u32,
        irr: &[Vec<u32>],
        chosen: &mut Vec<(usize, Vec<usize>)>,
        group: &BigUint,
        n: usize,
        out: &mut Vec<(Matrix, BigUint)>,
    ) {
        if left == 0 {
            let mut m = Matrix::zeros(n, n);
            let mut at = 0;
            let mut cent = BigUint::one();
            for (fi, lambda) in chosen.iter() {
                let f = &irr[*fi];
                let big_q = BigUint::from(p).pow((f.len() - 1) as u32);
                cent *= centralizer_factor(lambda, &big_q);
                for &part in lambda {
                    let mut g = vec![1u32];
                    for _ in 0..part {
                        g = poly_mul(p, &g, f);
                    }
                    let c = companion(p, &g);
                    for r in 0..c.rows() {
                        for s in 0..c.cols() {
                            m.set(at + r, at + s, c.get(r, s));
                        }
                    }
                    at += c.rows();
                }
            }
            out.push((m, group / cent));
            return;
        }
        if idx == irr.len() {
            return;
        }
        rec(idx + 1, left, p, irr, chosen, group, n, out);
        let deg = irr[idx].len() - 1;
        for size in 1..=left / deg {
            for lambda in partitions(size, size) {
                chosen.push((idx, lambda));
                rec(idx + 1, left - size * deg, p, irr, chosen, group, n, out);
                chosen.pop();
            }
        }
    }
    rec(0, n, p, &irreducibles, &mut chosen, &group, n, &mut out);
    out
}

/// Number of GL(n, p)-orbits on ∧³V* by Burnside's lemma over conjugacy classes.
pub fn burnside_orbit_count(n: usize, p: u32) -> Result<BigUint, CensusError> {
    let field = GaloisField::from_order(p as u64).map_err(FormError::from)?;
    let space = CoefficientSpace::new(&field, n)?;
    let m = space.triples.len();
    let mut total = BigUint::zero();
    for (rep, size) in gl_conjugacy_classes(n, p) {
        let mut w = space.action_matrix(&rep)?;
        for i in 0..m {
            let v = field.sub(w.get(i, i), 1);
            w.set(i, i, v);
        }
        let fixed = m - linalg::rank(&field, &w);
        total += size * BigUint::from(p).pow(fixed as u32);
    }
    Ok(total / gl_order(n, p as u64))
}

/// GL-invariants of a form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Fingerprint {
    pub radical_dim: usize,
    pub singular_lines: u64,
    pub coverage_min: u64,
    pub coverage_max: u64,
    pub ts_max_dim: usize,
    pub ts_complete: bool,
    pub union_kind: Option<UnionKind>,
}

pub const DEFAULT_TS_BUDGET: u64 = 1_000_000;

pub fn fingerprint(t: &TriForm) -> Result<Fingerprint, CensusError> {
    fingerprint_with_budget(t, DEFAULT_TS_BUDGET)
}

pub fn fingerprint_with_budget(t: &TriForm, budget: u64) -> Result<Fingerprint, CensusError> {
    let q = t.field().q() as u64;
    let (dims, (ts_max_dim, ts_complete)) = match Gf2Form::new(t) {
        Some(g) => {
            let dims = g.kernel_dims_by_mask();
            let ts = g.max_totally_singular_dim_given(budget, &dims);
            (dims, ts)
        }
        None => (geometry::kernel_dims(t)?, geometry::max_totally_singular_dim(t, budget)),
    };
    let through: Vec<u64> = dims.iter().map(|&d| lines_through(d as usize, q)).collect();
    let union_kind = if t.n() % 2 == 1 {
        Some(classify_union(t).map_err(|e| match e {
            crate::hypersurface::HypersurfaceError::Geometry(g) => CensusError::Geometry(g),
            other => unreachable!("odd n: {other}"),
        })?.kind)
    } else {
        None
    };
    Ok(Fingerprint {
        radical_dim: t.radical_basis().rows(),
        singular_lines: through.iter().sum::<u64>() / (q + 1),
        coverage_min: through.iter().copied().min().unwrap_or(0),
        coverage_max: through.iter().copied().max().unwrap_or(0),
        ts_max_dim,
        ts_complete,
        union_kind,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::catalog;
    use crate::geometry::singular_lines;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn divides(a: u64, b: &BigUint) -> bool {
        (b % BigUint::from(a)).is_zero()
    }

    fn gf(q: u64) -> GaloisField {
        GaloisField::from_order(q).unwrap()
    }

    #[test]
    fn gl_orders() {
        assert_eq!(gl_order(2, 2), BigUint::from(6u32));
        assert_eq!(gl_order(3, 2), BigUint::from(168u32));
        for (n, q) in [(2, 3), (3, 2), (4, 5), (11, 2), (7, 9)] {
            assert!(gl_order(n, q) < BigUint::from(q).pow((n * n) as u32));
        }
        // brute-force count of invertible 3×3 matrices over GF(2)
        let f = gf(2);
        let invertible = (0..512u32)
            .filter(|code| {
                let m = Matrix::from_vec(3, 3, (0..9).map(|i| code >> i & 1).collect());
                linalg::rank(&f, &m) == 3
            })
            .count();
        assert_eq!(invertible, 168);
    }

    #[test]
    fn ratios_near_the_table() {
        for (n, expected) in REFERENCE_RATIOS {
            let got = orbit_ratio(n, 2).unwrap().to_f64();
            assert!((got - expected).abs() / expected < 0.025, "n = {n}: {got}");
        }
        let r = orbit_ratio(5, 2).unwrap();
        assert_eq!(r.numer().to_string(), "1");
        assert_eq!(r.denom().to_string(), "9765");
        assert!(matches!(orbit_ratio(2, 2), Err(CensusError::BadDimension { .. })));
    }

    #[test]
    fn generators_generate_gl() {
        for (n, q) in [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3), (2, 4), (2, 5), (2, 7), (2, 8)] {
            let f = gf(q);
            assert_eq!(
                generated_group_order(&f, &standard_generators(&f, n)).map(BigUint::from),
                Some(gl_order(n, q)),
                "GL({n}, {q})"
            );
        }
    }

    #[test]
    fn class_sizes_sum_to_group_order() {
        for (n, p) in [(2, 2), (3, 2), (4, 2), (5, 2), (6, 2), (2, 3), (3, 3), (4, 3), (3, 5)] {
            let classes = gl_conjugacy_classes(n, p);
            let total: BigUint = classes.iter().map(|(_, s)| s.clone()).sum();
            assert_eq!(total, gl_order(n, p as u64), "GL({n}, {p})");
            let f = gf(p as u64);
            assert!(classes.iter().all(|(m, _)| linalg::rank(&f, m) == n));
        }
        assert_eq!(gl_conjugacy_classes(2, 2).len(), 3);
        assert_eq!(gl_conjugacy_classes(3, 2).len(), 6);
    }

    #[test]
    fn small_partitions() {
        let p = orbit_partition(4, 2, None).unwrap();
        assert_eq!(p.orbits.iter().map(|o| o.size).sum::<u64>(), 16);
        assert_eq!(p.orbits, vec![Orbit { representative: 0, size: 1 }, Orbit { representative: 1, size: 15 }]);
        let p5 = orbit_partition(5, 2, None).unwrap();
        let sizes: Vec<u64> = p5.orbits.iter().map(|o| o.size).collect();
        assert_eq!(sizes, vec![1, 155, 868]);
        let p43 = orbit_partition(4, 3, None).unwrap();
        assert_eq!(p43.orbits.iter().map(|o| o.size).sum::<u64>(), 81);
        assert!(matches!(orbit_partition(7, 2, None), Err(CensusError::TooLarge(_))));
    }

    #[test]
    fn bfs_agrees_with_burnside() {
        for (n, p) in [(4, 2), (5, 2), (4, 3), (6, 2)] {
            let part = orbit_partition(n, p as u64, None).unwrap();
            assert_eq!(BigUint::from(part.orbits.len()), burnside_orbit_count(n, p).unwrap(), "({n}, {p})");
            let gl = gl_order(n, p as u64);
            assert_eq!(part.orbits[0], Orbit { representative: 0, size: 1 });
            for o in &part.orbits {
                assert!(divides(o.size, &gl));
            }
        }
    }

    #[test]
    fn orbits_are_unions_of_transform_images() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let part = orbit_partition(5, 2, None).unwrap();
        let f = gf(2);
        for _ in 0..50 {
            let idx = rng.gen_range(0..part.space.states());
            let t = part.space.form(idx);
            let a = loop {
                let m = Matrix::from_vec(5, 5, (0..25).map(|_| rng.gen_range(0..2)).collect());
                if linalg::rank(&f, &m) == 5 {
                    break m;
                }
            };
            assert_eq!(part.orbit_of(&t.transform(&a).unwrap()), part.orbit_of_index(idx));
        }
    }

    #[test]
    fn spread_forms_of_dimension_six() {
        let part = orbit_partition(6, 2, None).unwrap();
        let t = catalog("spread_even_hodd", 2, None).unwrap();
        let tp = catalog("t_prime", 2, None).unwrap();
        let tpp = catalog("t_double_prime", 2, None).unwrap();
        let o = part.orbit_of(&t);
        // all three are spreads, so their fingerprints agree
        assert_eq!(fingerprint(&t).unwrap(), fingerprint(&tp).unwrap());
        assert_eq!(fingerprint(&t).unwrap(), fingerprint(&tpp).unwrap());
        assert!(part.orbit_of(&tp) < part.orbits.len() && o < part.orbits.len());
    }

    #[test]
    fn fingerprint_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let f2 = fingerprint(&catalog("fano7", 2, None).unwrap()).unwrap();
        let f3 = fingerprint(&catalog("fano7", 3, None).unwrap()).unwrap();
        assert_eq!(f2.union_kind, Some(UnionKind::Hyperplane));
        assert_eq!(f3.union_kind, Some(UnionKind::Quadric));
        let ts6 = catalog("ts6", 2, None).unwrap();
        let fp = fingerprint(&ts6).unwrap();
        assert_eq!(fp.ts_max_dim, 3);
        assert_eq!(fp.singular_lines, singular_lines(&ts6).unwrap().len() as u64);
        for _ in 0..5 {
            let a = loop {
                let m = Matrix::from_vec(6, 6, (0..36).map(|_| rng.gen_range(0..2)).collect());
                if linalg::rank(ts6.field(), &m) == 6 {
                    break m;
                }
            };
            assert_eq!(fingerprint(&ts6.transform(&a).unwrap()).unwrap(), fp);
        }
    }

    #[test]
    fn fingerprints_constant_on_orbits_5_2() {
        let part = orbit_partition(5, 2, None).unwrap();
        let mut seen: Vec<Option<Fingerprint>> = vec![None; part.orbits.len()];
        for idx in 0..part.space.states() {
            let fp = fingerprint(&part.space.form(idx)).unwrap();
            let slot = &mut seen[part.orbit_of_index(idx)];
            match slot {
                Some(prev) => assert_eq!(*prev, fp),
                None => *slot = Some(fp),
            }
        }
    }
}
