//! The seven-dimensional cross product carried by the Fano trivector, and
//! the eight-dimensional algebra R ⊕ V7 built from it, in exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::forms::FANO_TRIPLES;

pub type Rational = BigRational;
pub type Vec7Q = [Rational; 7];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElem {
    pub scalar: Rational,
    pub vec: Vec7Q,
}

fn zero7() -> Vec7Q {
    std::array::from_fn(|_| Rational::zero())
}

pub fn unit(i: usize) -> Vec7Q {
    let mut v = zero7();
    v[i] = Rational::one();
    v
}

pub fn dot(x: &Vec7Q, y: &Vec7Q) -> Rational {
    x.iter().zip(y).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

fn is_zero7(x: &Vec7Q) -> bool {
    x.iter().all(Zero::is_zero)
}

/// ε[i][j] = (k, sign) with e_i × e_j = sign·e_k, or `None` when i = j.
fn structure_constants() -> [[Option<(usize, i8)>; 7]; 7] {
    let mut eps = [[None; 7]; 7];
    for t in FANO_TRIPLES {
        let [a, b, c] = t.map(|x| x as usize - 1);
        for (i, j, k) in [(a, b, c), (b, c, a), (c, a, b)] {
            eps[i][j] = Some((k, 1));
            eps[j][i] = Some((k, -1));
        }
    }
    eps
}

/// e_i × e_j = sign·e_k as `Some((k, sign))`, or `None` when i = j.
pub fn basis_product(i: usize, j: usize) -> Option<(usize, i8)> {
    structure_constants()[i][j]
}

/// x × y from the structure constants e_i × e_j = ±e_k.
pub fn cross(x: &Vec7Q, y: &Vec7Q) -> Vec7Q {
    let eps = structure_constants();
    let mut out = zero7();
    for i in 0..7 {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..7 {
            if let Some((k, s)) = eps[i][j] {
                let term = &x[i] * &y[j];
                if s > 0 {
                    out[k] += term;
                } else {
                    out[k] -= term;
                }
            }
        }
    }
    out
}

/// T(x, y, z) = Σ over the seven triples of det[x; y; z] restricted to the triple's columns.
pub fn fano_trilinear(x: &Vec7Q, y: &Vec7Q, z: &Vec7Q) -> Rational {
    FANO_TRIPLES.iter().fold(Rational::zero(), |acc, t| {
        let [i, j, k] = t.map(|c| c as usize - 1);
        let det = &x[i] * (&y[j] * &z[k] - &y[k] * &z[j]) - &x[j] * (&y[i] * &z[k] - &y[k] * &z[i])
            + &x[k] * (&y[i] * &z[j] - &y[j] * &z[i]);
        acc + det
    })
}

/// The vector c with c·z = T(x, y, z) for all z, read off as c_k = T(x, y, e_k).
pub fn cross_by_evaluation(x: &Vec7Q, y: &Vec7Q) -> Vec7Q {
    std::array::from_fn(|k| fano_trilinear(x, y, &unit(k)))
}

impl AlgebraElem {
    pub fn new(scalar: Rational, vec: Vec7Q) -> Self {
        Self { scalar, vec }
    }

    pub fn one() -> Self {
        Self::new(Rational::one(), zero7())
    }

    pub fn pure(vec: Vec7Q) -> Self {
        Self::new(Rational::zero(), vec)
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() && is_zero7(&self.vec)
    }

    /// N(α, x) = α² + x·x.
    pub fn norm(&self) -> Rational {
        &self.scalar * &self.scalar + dot(&self.vec, &self.vec)
    }
}

/// (α, x)(β, y) = (αβ − x·y, αy + βx + x × y).
pub fn octonion_mul(a: &AlgebraElem, b: &AlgebraElem) -> AlgebraElem {
    let c = cross(&a.vec, &b.vec);
    let vec = std::array::from_fn(|i| &a.scalar * &b.vec[i] + &b.scalar * &a.vec[i] + &c[i]);
    AlgebraElem::new(&a.scalar * &b.scalar - dot(&a.vec, &b.vec), vec)
}

pub fn random_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(-20i64..=20)), BigInt::from(rng.gen_range(1i64..=12)))
}

pub fn random_vec(rng: &mut impl Rng) -> Vec7Q {
    std::array::from_fn(|_| random_rational(rng))
}

fn random_nonzero_vec(rng: &mut impl Rng) -> Vec7Q {
    loop {
        let v = random_vec(rng);
        if !is_zero7(&v) {
            return v;
        }
    }
}

fn random_nonzero_elem(rng: &mut impl Rng) -> AlgebraElem {
    loop {
        let a = AlgebraElem::new(random_rational(rng), random_vec(rng));
        if !a.is_zero() {
            return a;
        }
    }
}

fn independent(x: &Vec7Q, y: &Vec7Q) -> bool {
    (0..7).any(|i| (i + 1..7).any(|j| (&x[i] * &y[j] - &x[j] * &y[i]) != Rational::zero()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossalgReport {
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub all_passed: bool,
}

fn check(name: &'static str, results: impl Iterator<Item = bool>) -> Check {
    let (mut cases, mut failures) = (0, 0);
    for ok in results {
        cases += 1;
        failures += usize::from(!ok);
    }
    Check { name, cases, failures, passed: failures == 0 && cases > 0 }
}

/// Every ±1/0 pattern vector other than zero.
fn sign_patterns() -> impl Iterator<Item = Vec7Q> {
    (0..3u32.pow(7))
        .map(|mut code| {
            std::array::from_fn(|_| {
                let d = code % 3;
                code /= 3;
                Rational::from_integer(BigInt::from(d as i64 - 1))
            })
        })
        .filter(|v: &Vec7Q| !is_zero7(v))
}

/// Σ x_i² > 0 on random nonzero rationals and on all sign patterns.
pub fn positivity_check(samples: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let randoms: Vec<Vec7Q> = (0..samples).map(|_| random_nonzero_vec(&mut rng)).collect();
    check("sum_of_squares_positive", randoms.into_iter().chain(sign_patterns()).map(|x| dot(&x, &x).is_positive()))
}

/// Runs every identity on `samples` seeded random inputs.
pub fn verify(samples: usize, seed: u64) -> CrossalgReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(Vec7Q, Vec7Q)> = (0..samples).map(|_| (random_vec(&mut rng), random_vec(&mut rng))).collect();
    let elems: Vec<(AlgebraElem, AlgebraElem)> =
        (0..samples).map(|_| (random_nonzero_elem(&mut rng), random_nonzero_elem(&mut rng))).collect();

    let basis = FANO_TRIPLES.iter().flat_map(|t| {
        let [a, b, c] = t.map(|x| x as usize - 1);
        [(a, b, c), (b, c, a), (c, a, b)]
    });
    let mut checks = vec![
        check("basis_products", basis.map(|(i, j, k)| cross(&unit(i), &unit(j)) == unit(k) && cross(&unit(j), &unit(i)) == unit(k).map(|x| -x))),
        check("cross_matches_trilinear_form", pairs.iter().map(|(x, y)| cross(x, y) == cross_by_evaluation(x, y))),
        check("antisymmetric", pairs.iter().map(|(x, y)| cross(x, y) == cross(y, x).map(|c| -c) && is_zero7(&cross(x, x)))),
        check("perpendicular", pairs.iter().map(|(x, y)| {
            let c = cross(x, y);
            dot(&c, x).is_zero() && dot(&c, y).is_zero()
        })),
        check("lagrange_identity", pairs.iter().map(|(x, y)| {
            let c = cross(x, y);
            dot(&c, &c) == dot(x, x) * dot(y, y) - dot(x, y) * dot(x, y)
        })),
        check("nonzero_on_independent_pairs", pairs.iter().filter(|(x, y)| independent(x, y)).map(|(x, y)| !is_zero7(&cross(x, y)))),
        check("identity_element", elems.iter().map(|(a, _)| {
            octonion_mul(&AlgebraElem::one(), a) == *a && octonion_mul(a, &AlgebraElem::one()) == *a
        })),
        check("pure_product", pairs.iter().map(|(x, y)| {
            octonion_mul(&AlgebraElem::pure(x.clone()), &AlgebraElem::pure(y.clone()))
                == AlgebraElem::new(-dot(x, y), cross(x, y))
        })),
        check("norm_multiplicative", elems.iter().map(|(a, b)| octonion_mul(a, b).norm() == a.norm() * b.norm())),
        check("no_zero_divisors", elems.iter().map(|(a, b)| !octonion_mul(a, b).is_zero())),
    ];
    checks.push(positivity_check(samples, seed.wrapping_add(1)));
    let all_passed = checks.iter().all(|c| c.passed);
    CrossalgReport { samples, seed, checks, all_passed }
}
