//! Bit-packed arithmetic for forms over GF(2): vectors are `u32` masks with
//! bit i holding coordinate i.

use crate::forms::TriForm;

/// Parity of the set bits.
#[inline]
fn parity(x: u32) -> u32 {
    x.count_ones() & 1
}

#[inline]
fn lead(x: u32) -> u32 {
    x.trailing_zeros()
}

/// Reduces `rows` in place to reduced echelon form (pivot = lowest set bit),
/// dropping zero rows. Rows end up sorted by pivot.
pub fn rref(rows: &mut Vec<u32>) {
    let mut out: Vec<u32> = Vec::with_capacity(rows.len());
    for &r in rows.iter() {
        let mut v = r;
        for &b in &out {
            if v >> lead(b) & 1 == 1 {
                v ^= b;
            }
        }
        if v == 0 {
            continue;
        }
        let p = lead(v);
        for b in out.iter_mut() {
            if *b >> p & 1 == 1 {
                *b ^= v;
            }
        }
        out.push(v);
    }
    out.sort_unstable_by_key(|&b| lead(b));
    *rows = out;
}

/// Residual of `v` modulo a basis in reduced echelon form.
#[inline]
pub fn reduce(basis: &[u32], mut v: u32) -> u32 {
    for &b in basis {
        if v >> lead(b) & 1 == 1 {
            v ^= b;
        }
    }
    v
}

/// A form over GF(2), stored so that B_a is computable by parities.
#[derive(Clone, Debug)]
pub struct Gf2Form {
    n: usize,
    // pair[r * n + c]: mask of s with {r, c, s} a term
    pair: Vec<u32>,
}

impl Gf2Form {
    /// `None` unless the form lives over GF(2) with n ≤ 32.
    pub fn new(t: &TriForm) -> Option<Self> {
        if t.field().q() != 2 || t.n() > 32 {
            return None;
        }
        let n = t.n();
        let mut pair = vec![0u32; n * n];
        for (tr, _) in t.terms() {
            let [i, j, k] = tr.indices();
            for (r, c, s) in [(i, j, k), (j, i, k), (i, k, j), (k, i, j), (j, k, i), (k, j, i)] {
                pair[r * n + c] |= 1 << s;
            }
        }
        Some(Self { n, pair })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rows of B_a as masks.
    pub fn contraction(&self, a: u32, rows: &mut [u32]) {
        let n = self.n;
        for (r, row) in rows.iter_mut().enumerate().take(n) {
            let mut m = 0;
            for c in 0..n {
                m |= parity(a & self.pair[r * n + c]) << c;
            }
            *row = m;
        }
    }

    pub fn kernel_dim(&self, a: u32) -> usize {
        let mut rows = [0u32; 32];
        self.contraction(a, &mut rows);
        let mut v = rows[..self.n].to_vec();
        rref(&mut v);
        self.n - v.len()
    }

    /// Kernel dimension for every nonzero vector, indexed by mask − 1.
    pub fn kernel_dims_by_mask(&self) -> Vec<u8> {
        (1..1u64 << self.n).map(|a| self.kernel_dim(a as u32) as u8).collect()
    }

    /// {v ∈ span(k) : B_p v = 0}, as a reduced basis.
    pub fn restrict(&self, k: &[u32], p: u32) -> Vec<u32> {
        let mut rows = [0u32; 32];
        self.contraction(p, &mut rows);
        let image = |v: u32| (0..self.n).fold(0u32, |acc, r| acc | parity(rows[r] & v) << r);
        // eliminate images while tracking the combination of k they came from
        let mut pivots: Vec<(u32, u32)> = Vec::new();
        let mut kernel = Vec::new();
        for &kv in k {
            let (mut img, mut combo) = (image(kv), kv);
            for &(pi, pc) in &pivots {
                if img >> lead(pi) & 1 == 1 {
                    img ^= pi;
                    combo ^= pc;
                }
            }
            if img == 0 {
                kernel.push(combo);
            } else {
                pivots.push((img, combo));
            }
        }
        rref(&mut kernel);
        kernel
    }

    /// Largest totally singular subspace dimension within a node budget.
    pub fn max_totally_singular_dim(&self, budget: u64) -> (usize, bool) {
        self.max_totally_singular_dim_given(budget, &self.kernel_dims_by_mask())
    }

    /// As [`max_totally_singular_dim`](Self::max_totally_singular_dim), given
    /// the output of [`kernel_dims_by_mask`](Self::kernel_dims_by_mask).
    pub fn max_totally_singular_dim_given(&self, budget: u64, dims: &[u8]) -> (usize, bool) {
        let mut radical: Vec<u32> =
            (1..=dims.len() as u32).filter(|&a| dims[a as usize - 1] as usize == self.n).collect();
        rref(&mut radical);
        if radical.is_empty() {
            return self.search(budget, dims);
        }
        // W is totally singular iff W + R is, so work on a complement of R
        let rest = self.restricted(radical.iter().fold(0, |acc, &b| acc | 1 << lead(b)));
        let (d, complete) = rest.search(budget, &rest.kernel_dims_by_mask());
        (d + radical.len(), complete)
    }

    /// The form on the coordinate subspace spanned by e_i with bit i clear in `dropped`.
    pub fn restricted(&self, dropped: u32) -> Gf2Form {
        let keep: Vec<usize> = (0..self.n).filter(|&i| dropped >> i & 1 == 0).collect();
        let squeeze = |m: u32| keep.iter().enumerate().fold(0u32, |acc, (j, &i)| acc | (m >> i & 1) << j);
        let n = keep.len();
        let mut pair = vec![0u32; n * n];
        for (r, &i) in keep.iter().enumerate() {
            for (c, &j) in keep.iter().enumerate() {
                pair[r * n + c] = squeeze(self.pair[i * self.n + j]);
            }
        }
        Gf2Form { n, pair }
    }

    fn search(&self, budget: u64, dims: &[u8]) -> (usize, bool) {
        let full: Vec<u32> = (0..self.n).map(|i| 1 << i).collect();
        let ceiling = dims.iter().copied().max().unwrap_or(0) as usize;
        let mut state = Walk { form: self, dims, budget, nodes: 0, exhausted: false, best: 0, ceiling };
        state.deepest(&mut Vec::new(), &full);
        (state.best, !state.exhausted)
    }
}

struct Walk<'a> {
    form: &'a Gf2Form,
    dims: &'a [u8],
    budget: u64,
    nodes: u64,
    exhausted: bool,
    best: usize,
    ceiling: usize,
}

impl Walk<'_> {
    fn deepest(&mut self, w: &mut Vec<u32>, k: &[u32]) {
        self.best = self.best.max(w.len());
        if k.len() <= self.best {
            return;
        }
        let mut complement: Vec<u32> = k.iter().map(|&v| reduce(w, v)).collect();
        rref(&mut complement);
        let last = w.last().map(|&b| lead(b));
        complement.retain(|&b| last.map_or(true, |lp| lead(b) > lp));
        let free = complement.len();
        for code in 1u64..1 << free {
            let p = (0..free).filter(|&i| code >> i & 1 == 1).fold(0, |acc, i| acc ^ complement[i]);
            let l = lead(p);
            // every extension through p lies in ker B_p
            if w.iter().any(|&b| b >> l & 1 == 1) || self.dims[p as usize - 1] as usize <= self.best {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                self.exhausted = true;
                return;
            }
            let child_k = self.form.restrict(k, p);
            w.push(p);
            self.deepest(w, &child_k);
            w.pop();
            if self.exhausted || self.best >= self.ceiling {
                return;
            }
        }
    }
}

/// Packs a 0/1 coordinate vector.
pub fn to_mask(v: &[u32]) -> u32 {
    v.iter().enumerate().fold(0, |acc, (i, &x)| acc | (x & 1) << i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{catalog, Triple};
    use crate::geometry::{enum_points, kernel_dims, max_totally_singular_dim};
    use crate::gf::GaloisField;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_form(n: usize, density: f64, rng: &mut ChaCha8Rng) -> TriForm {
        let f = GaloisField::from_order(2).unwrap();
        let mut t = TriForm::zero(&f, n).unwrap();
        for tr in Triple::all(n) {
            let [i, j, k] = tr.indices();
            if rng.gen_bool(density) {
                t.add_term(i, j, k, 1).unwrap();
            }
        }
        t
    }

    #[test]
    fn kernel_dims_agree_with_generic() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for n in [3, 5, 6, 7, 8] {
            for density in [0.1, 0.5, 0.9] {
                let t = random_form(n, density, &mut rng);
                let g = Gf2Form::new(&t).unwrap();
                let space = enum_points(t.field(), n).unwrap();
                let generic = kernel_dims(&t).unwrap();
                for (i, &d) in generic.iter().enumerate() {
                    assert_eq!(g.kernel_dim(to_mask(&space.coords(i))), d as usize);
                }
            }
        }
    }

    #[test]
    fn ts_search_agrees_with_generic() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for n in [4, 5, 6, 7] {
            for density in [0.0, 0.15, 0.4, 0.8] {
                for _ in 0..4 {
                    let t = random_form(n, density, &mut rng);
                    let fast = Gf2Form::new(&t).unwrap().max_totally_singular_dim(1_000_000);
                    assert_eq!(fast, max_totally_singular_dim(&t, 1_000_000), "{}", t.to_text());
                }
            }
        }
        let ts10 = catalog("ts10", 2, None).unwrap();
        assert_eq!(Gf2Form::new(&ts10).unwrap().max_totally_singular_dim(10_000_000).0, 6);
        assert!(Gf2Form::new(&catalog("fano7", 3, None).unwrap()).is_none());
        let zero = TriForm::zero(ts10.field(), 5).unwrap();
        assert_eq!(Gf2Form::new(&zero).unwrap().max_totally_singular_dim(10), (5, true));
    }

    #[test]
    fn restrict_matches_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let t = random_form(6, 0.5, &mut rng);
        let g = Gf2Form::new(&t).unwrap();
        for p in 1u32..64 {
            let k = g.restrict(&(0..6).map(|i| 1 << i).collect::<Vec<_>>(), p);
            assert_eq!(k.len(), g.kernel_dim(p));
            let mut rows = [0u32; 32];
            g.contraction(p, &mut rows);
            for &v in &k {
                assert!(rows[..6].iter().all(|&r| parity(r & v) == 0));
            }
        }
    }
}
