//! Exact arithmetic in GF(p^h) and in the quadratic extension GF(q²) ⊃ GF(q).
//!
//! Elements are packed into a `u32`: the coefficient vector of the polynomial
//! basis read as a little-endian base-`p` integer (so `x` in GF(4) is `2`).
//! The extension GF(q²) = GF(q)[X]/(X² + c1·X + c0) packs `a0 + a1·X` as
//! `a0 + q·a1`, which makes the embedding GF(q) → GF(q²) the identity on
//! packed values. "Representation order" everywhere means the order of packed
//! values.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Bumped whenever the modulus selection rule changes.
pub const MODULUS_TABLE_VERSION: u32 = 1;

const LOG_TABLE_LIMIT: u32 = 1 << 20;
const ADD_TABLE_LIMIT: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {p}^{h} does not fit in 31 bits")]
    Overflow { p: u64, h: u32 },
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("modulus is reducible over GF({0})")]
    ReducibleModulus(u32),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation requires characteristic {expected}, field has characteristic {actual}")]
    WrongCharacteristic { expected: u32, actual: u32 },
    #[error("{value} is not an element of a field of order {order}")]
    InvalidElement { value: u64, order: u64 },
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

/// Operations shared by GF(p^h) and the quadratic extension.
///
/// Elements are packed `u32` values in `0..order()`; callers are responsible
/// for passing values of the right field.
pub trait FiniteField: Clone + fmt::Debug + Send + Sync {
    fn order(&self) -> u64;
    fn characteristic(&self) -> u32;
    fn add(&self, a: u32, b: u32) -> u32;
    fn neg(&self, a: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    fn inv(&self, a: u32) -> Option<u32>;

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Image of an integer in the prime subfield.
    fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.characteristic() as i64) as u32
    }

    fn contains(&self, a: u32) -> bool {
        (a as u64) < self.order()
    }

    fn elements(&self) -> std::ops::Range<u32> {
        0..self.order() as u32
    }
}

/// Serialized field description: `{"p": 2, "h": 2, "modulus": [1, 1, 1]}`.
/// The modulus is little-endian and includes the leading 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u32,
    pub h: u32,
    pub modulus: Vec<u32>,
}

struct Inner {
    p: u32,
    h: u32,
    q: u32,
    modulus: Vec<u32>,
    // p^i for i in 0..h
    place: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Vec<u32>,
}

/// GF(p^h) with an explicit monic irreducible modulus. Cheap to clone.
#[derive(Clone)]
pub struct GaloisField(Arc<Inner>);

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; modulus {:?})", self.0.p, self.0.h, self.0.modulus)
    }
}

impl fmt::Display for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.h == other.0.h && self.0.modulus == other.0.modulus)
    }
}

impl Eq for GaloisField {}

impl GaloisField {
    /// GF(p^h) with the least monic irreducible modulus.
    pub fn new(p: u32, h: u32) -> Result<Self, GfError> {
        check_params(p, h)?;
        let modulus = least_irreducible(p, h);
        Ok(Self::build(p, h, modulus))
    }

    pub fn with_modulus(p: u32, h: u32, modulus: Vec<u32>) -> Result<Self, GfError> {
        check_params(p, h)?;
        if modulus.len() != h as usize + 1 {
            return Err(GfError::BadModulus(format!(
                "expected {} coefficients, got {}",
                h + 1,
                modulus.len()
            )));
        }
        if modulus[h as usize] != 1 {
            return Err(GfError::BadModulus("modulus is not monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(GfError::BadModulus(format!("coefficient out of range for p = {p}")));
        }
        if !is_irreducible(p, &modulus) {
            return Err(GfError::ReducibleModulus(p));
        }
        Ok(Self::build(p, h, modulus))
    }

    /// GF(q) for a prime power q.
    pub fn from_order(q: u64) -> Result<Self, GfError> {
        let (p, h) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        Self::new(p as u32, h)
    }

    pub fn from_desc(desc: &FieldDesc) -> Result<Self, GfError> {
        Self::with_modulus(desc.p, desc.h, desc.modulus.clone())
    }

    pub fn desc(&self) -> FieldDesc {
        FieldDesc { p: self.0.p, h: self.0.h, modulus: self.0.modulus.clone() }
    }

    fn build(p: u32, h: u32, modulus: Vec<u32>) -> Self {
        let q = p.pow(h);
        let place = (0..h).map(|i| p.pow(i)).collect();
        let mut inner = Inner {
            p,
            h,
            q,
            modulus,
            place,
            exp: Vec::new(),
            log: Vec::new(),
            add_table: Vec::new(),
        };
        if h > 1 && q <= LOG_TABLE_LIMIT {
            let g = (2..q)
                .find(|&g| slow_order(&inner, g) == q - 1)
                .expect("multiplicative group is cyclic");
            let mut exp = Vec::with_capacity(2 * (q as usize - 1));
            let mut log = vec![0u32; q as usize];
            let mut x = 1u32;
            for i in 0..q - 1 {
                exp.push(x);
                log[x as usize] = i;
                x = mul_poly(&inner, x, g);
            }
            let doubled = exp.clone();
            exp.extend(doubled);
            inner.exp = exp;
            inner.log = log;
        }
        if h > 1 && p > 2 && q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = add_digits(&inner, a, b);
                }
            }
            inner.add_table = table;
        }
        GaloisField(Arc::new(inner))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn h(&self) -> u32 {
        self.0.h
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// Little-endian coefficient vector of length h.
    pub fn coeffs(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.0.h as usize);
        let mut x = a;
        for _ in 0..self.0.h {
            out.push(x % self.0.p);
            x /= self.0.p;
        }
        out
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<u32, GfError> {
        if coeffs.len() > self.0.h as usize {
            return Err(GfError::InvalidElement { value: coeffs.len() as u64, order: self.0.q as u64 });
        }
        let mut value = 0u32;
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.0.p {
                return Err(GfError::InvalidElement { value: c as u64, order: self.0.p as u64 });
            }
            value += c * self.0.place[i];
        }
        Ok(value)
    }

    pub fn element(&self, value: u32) -> Result<FieldElem, GfError> {
        FieldElem::new(self, value)
    }

    /// Polynomial notation in `x`, e.g. `x^2+2` in GF(27).
    pub fn format(&self, a: u32) -> String {
        if self.0.h == 1 {
            return a.to_string();
        }
        let coeffs = self.coeffs(a);
        let terms: Vec<String> = coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

impl FiniteField for GaloisField {
    fn order(&self) -> u64 {
        self.0.q as u64
    }

    fn characteristic(&self) -> u32 {
        self.0.p
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.0;
        if inner.p == 2 {
            a ^ b
        } else if inner.h == 1 {
            let s = a + b;
            if s >= inner.p {
                s - inner.p
            } else {
                s
            }
        } else if !inner.add_table.is_empty() {
            inner.add_table[(a * inner.q + b) as usize]
        } else {
            add_digits(inner, a, b)
        }
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        let inner = &*self.0;
        if inner.p == 2 || a == 0 {
            a
        } else if inner.h == 1 {
            inner.p - a
        } else {
            let mut out = 0;
            let mut x = a;
            for i in 0..inner.h as usize {
                let d = x % inner.p;
                x /= inner.p;
                if d != 0 {
                    out += (inner.p - d) * inner.place[i];
                }
            }
            out
        }
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.0;
        if a == 0 || b == 0 {
            0
        } else if inner.h == 1 {
            ((a as u64 * b as u64) % inner.p as u64) as u32
        } else if !inner.log.is_empty() {
            inner.exp[(inner.log[a as usize] + inner.log[b as usize]) as usize]
        } else {
            mul_poly(inner, a, b)
        }
    }

    fn inv(&self, a: u32) -> Option<u32> {
        let inner = &*self.0;
        if a == 0 {
            None
        } else if !inner.log.is_empty() {
            let l = inner.log[a as usize];
            Some(inner.exp[((inner.q - 1 - l) % (inner.q - 1)) as usize])
        } else {
            Some(self.pow(a, inner.q as u64 - 2))
        }
    }
}

fn check_params(p: u32, h: u32) -> Result<(), GfError> {
    if !is_prime(p as u64) {
        return Err(GfError::NotPrime(p as u64));
    }
    if h == 0 {
        return Err(GfError::BadModulus("degree must be at least 1".into()));
    }
    match (p as u64).checked_pow(h) {
        Some(q) if q < (1u64 << 31) => Ok(()),
        _ => Err(GfError::Overflow { p: p as u64, h }),
    }
}

fn add_digits(inner: &Inner, a: u32, b: u32) -> u32 {
    let (p, h) = (inner.p, inner.h as usize);
    let (mut x, mut y, mut out) = (a, b, 0u32);
    for i in 0..h {
        let d = (x % p + y % p) % p;
        out += d * inner.place[i];
        x /= p;
        y /= p;
    }
    out
}

fn mul_poly(inner: &Inner, a: u32, b: u32) -> u32 {
    let (p, h) = (inner.p as u64, inner.h as usize);
    let digits = |mut x: u32| {
        let mut d = [0u64; 32];
        for slot in d.iter_mut().take(h) {
            *slot = (x % inner.p) as u64;
            x /= inner.p;
        }
        d
    };
    let (da, db) = (digits(a), digits(b));
    let mut prod = [0u64; 64];
    for i in 0..h {
        if da[i] == 0 {
            continue;
        }
        for j in 0..h {
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        }
    }
    for deg in (h..2 * h - 1).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for i in 0..h {
            let m = inner.modulus[i] as u64;
            prod[deg - h + i] = (prod[deg - h + i] + (p - c) * m) % p;
        }
    }
    let mut out = 0u32;
    for i in 0..h {
        out += prod[i] as u32 * inner.place[i];
    }
    out
}

fn slow_order(inner: &Inner, g: u32) -> u32 {
    let mut x = g;
    let mut k = 1;
    while x != 1 {
        x = mul_poly(inner, x, g);
        k += 1;
        if k > inner.q {
            return 0;
        }
    }
    k
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, h)` with `q = p^h`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut h = 0;
    while rest % p == 0 {
        rest /= p;
        h += 1;
    }
    (rest == 1).then_some((p, h))
}

/// Distinct prime divisors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Remainder of `a` modulo monic `m` over GF(p); both little-endian.
fn poly_rem(p: u64, a: &[u32], m: &[u32]) -> Vec<u64> {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = r.pop().unwrap();
        if c != 0 {
            let shift = r.len() - dm;
            for i in 0..dm {
                r[shift + i] = (r[shift + i] + (p - c) * m[i] as u64) % p;
            }
        }
    }
    r
}

/// Trial division by every monic polynomial of degree ≤ deg/2.
pub fn is_irreducible(p: u32, modulus: &[u32]) -> bool {
    let h = modulus.len() - 1;
    if h == 0 {
        return false;
    }
    for d in 1..=h / 2 {
        let count = (p as u64).pow(d as u32);
        for lower in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut x = lower;
            for _ in 0..d {
                divisor.push((x % p as u64) as u32);
                x /= p as u64;
            }
            divisor.push(1);
            if poly_rem(p as u64, modulus, &divisor).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible of degree h whose lower coefficients, read as a
/// little-endian base-p integer, are least.
pub fn least_irreducible(p: u32, h: u32) -> Vec<u32> {
    let count = (p as u64).pow(h);
    for lower in 0..count {
        let mut poly = Vec::with_capacity(h as usize + 1);
        let mut x = lower;
        for _ in 0..h {
            poly.push((x % p as u64) as u32);
            x /= p as u64;
        }
        poly.push(1);
        if h > 1 && poly[0] == 0 {
            continue;
        }
        if is_irreducible(p, &poly) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// A checked element: carries its field and refuses to mix with others.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElem {
    field: GaloisField,
    value: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElem {
    pub fn new(field: &GaloisField, value: u32) -> Result<Self, GfError> {
        if !field.contains(value) {
            return Err(GfError::InvalidElement { value: value as u64, order: field.order() });
        }
        Ok(Self { field: field.clone(), value })
    }

    pub fn from_coeffs(field: &GaloisField, coeffs: &[u32]) -> Result<Self, GfError> {
        let value = field.from_coeffs(coeffs)?;
        Ok(Self { field: field.clone(), value })
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn apply(&self, op: ArithOp, other: &FieldElem) -> Result<FieldElem, GfError> {
        if self.field != other.field {
            return Err(GfError::FieldMismatch);
        }
        let f = &self.field;
        let value = match op {
            ArithOp::Add => f.add(self.value, other.value),
            ArithOp::Sub => f.sub(self.value, other.value),
            ArithOp::Mul => f.mul(self.value, other.value),
            ArithOp::Div => f.div(self.value, other.value).ok_or(GfError::DivisionByZero)?,
        };
        Ok(FieldElem { field: f.clone(), value })
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.apply(ArithOp::Add, other)
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.apply(ArithOp::Sub, other)
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.apply(ArithOp::Mul, other)
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.apply(ArithOp::Div, other)
    }

    pub fn inv(&self) -> Result<FieldElem, GfError> {
        let value = self.field.inv(self.value).ok_or(GfError::DivisionByZero)?;
        Ok(FieldElem { field: self.field.clone(), value })
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        FieldElem { field: self.field.clone(), value: self.field.pow(self.value, e) }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}

/// Checked binary arithmetic. Exponentiation is [`FieldElem::pow`].
pub fn ff_arith(a: &FieldElem, b: &FieldElem, op: ArithOp) -> Result<FieldElem, GfError> {
    a.apply(op, b)
}

/// GF(q²) = GF(q)[X]/(X² + c1·X + c0).
#[derive(Clone, Debug)]
pub struct QuadExt {
    base: GaloisField,
    c0: u32,
    c1: u32,
}

impl PartialEq for QuadExt {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.c0 == other.c0 && self.c1 == other.c1
    }
}

impl Eq for QuadExt {}

impl QuadExt {
    /// Uses the least (by `c0 + q·c1`) irreducible monic quadratic over `base`.
    pub fn new(base: &GaloisField) -> Result<Self, GfError> {
        let q = base.q() as u64;
        if q * q >= 1 << 31 {
            return Err(GfError::Overflow { p: q, h: 2 });
        }
        let q = q as u32;
        for packed in 0..q * q {
            let (c0, c1) = (packed % q, packed / q);
            if Self::irreducible(base, c0, c1) {
                return Ok(Self { base: base.clone(), c0, c1 });
            }
        }
        unreachable!("an irreducible quadratic exists over every finite field")
    }

    pub fn with_modulus(base: &GaloisField, c0: u32, c1: u32) -> Result<Self, GfError> {
        if !base.contains(c0) || !base.contains(c1) {
            return Err(GfError::BadModulus("coefficient outside the base field".into()));
        }
        if !Self::irreducible(base, c0, c1) {
            return Err(GfError::ReducibleModulus(base.q()));
        }
        Ok(Self { base: base.clone(), c0, c1 })
    }

    fn irreducible(base: &GaloisField, c0: u32, c1: u32) -> bool {
        base.elements().all(|r| {
            let v = base.add(base.add(base.mul(r, r), base.mul(c1, r)), c0);
            v != 0
        })
    }

    pub fn base(&self) -> &GaloisField {
        &self.base
    }

    /// `(c0, c1)` of the defining quadratic.
    pub fn modulus(&self) -> (u32, u32) {
        (self.c0, self.c1)
    }

    pub fn pack(&self, a0: u32, a1: u32) -> u32 {
        a0 + self.base.q() * a1
    }

    pub fn split(&self, a: u32) -> (u32, u32) {
        let q = self.base.q();
        (a % q, a / q)
    }

    /// The generator X of the extension.
    pub fn generator(&self) -> u32 {
        self.pack(0, 1)
    }

    pub fn format(&self, a: u32) -> String {
        let (a0, a1) = self.split(a);
        let f = &self.base;
        match (a0, a1) {
            (a0, 0) => f.format(a0),
            (0, 1) => "X".into(),
            (0, a1) => format!("({})X", f.format(a1)),
            (a0, 1) => format!("{}+X", f.format(a0)),
            (a0, a1) => format!("{}+({})X", f.format(a0), f.format(a1)),
        }
    }
}

impl FiniteField for QuadExt {
    fn order(&self) -> u64 {
        let q = self.base.q() as u64;
        q * q
    }

    fn characteristic(&self) -> u32 {
        self.base.p()
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let f = &self.base;
        let ((a0, a1), (b0, b1)) = (self.split(a), self.split(b));
        self.pack(f.add(a0, b0), f.add(a1, b1))
    }

    fn neg(&self, a: u32) -> u32 {
        let (a0, a1) = self.split(a);
        self.pack(self.base.neg(a0), self.base.neg(a1))
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let f = &self.base;
        let ((a0, a1), (b0, b1)) = (self.split(a), self.split(b));
        let hi = f.mul(a1, b1);
        // X² = −c1·X − c0
        let r0 = f.sub(f.mul(a0, b0), f.mul(hi, self.c0));
        let r1 = f.sub(f.add(f.mul(a0, b1), f.mul(a1, b0)), f.mul(hi, self.c1));
        self.pack(r0, r1)
    }

    fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let f = &self.base;
        // conjugate of X is −c1 − X
        let (a0, a1) = self.split(a);
        let conj = self.pack(f.sub(a0, f.mul(a1, self.c1)), f.neg(a1));
        let (norm, rest) = self.split(self.mul(a, conj));
        debug_assert_eq!(rest, 0);
        let ninv = f.inv(norm)?;
        let (c0, c1) = self.split(conj);
        Some(self.pack(f.mul(c0, ninv), f.mul(c1, ninv)))
    }
}

/// The pair GF(q) ⊂ GF(q²) with the identity embedding on packed values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtPair {
    pub base: GaloisField,
    pub ext: QuadExt,
}

impl ExtPair {
    pub fn new(base: &GaloisField) -> Result<Self, GfError> {
        Ok(Self { base: base.clone(), ext: QuadExt::new(base)? })
    }

    pub fn from_order(q: u64) -> Result<Self, GfError> {
        Self::new(&GaloisField::from_order(q)?)
    }

    pub fn q(&self) -> u32 {
        self.base.q()
    }

    pub fn embed(&self, a: u32) -> u32 {
        a
    }

    pub fn in_base(&self, beta: u32) -> bool {
        beta < self.base.q()
    }

    /// β ↦ β^q.
    pub fn frobenius(&self, beta: u32) -> u32 {
        self.ext.pow(beta, self.base.q() as u64)
    }

    /// Tr(β) = β + β^q, returned as an element of GF(q).
    pub fn trace_rel(&self, beta: u32) -> Result<u32, GfError> {
        if !self.ext.contains(beta) {
            return Err(GfError::InvalidElement { value: beta as u64, order: self.ext.order() });
        }
        let t = self.ext.add(beta, self.frobenius(beta));
        if !self.in_base(t) {
            return Err(GfError::InternalInvariantViolation(format!(
                "trace of {} is not in the base field",
                self.ext.format(beta)
            )));
        }
        Ok(t)
    }

    /// Norm β^(q+1), an element of GF(q).
    pub fn norm(&self, beta: u32) -> u32 {
        self.ext.mul(beta, self.frobenius(beta))
    }
}

/// Absolute trace GF(2^h) → GF(2): μ + μ² + μ⁴ + … + μ^(2^(h−1)).
pub fn trace_abs(field: &GaloisField, mu: u32) -> Result<u8, GfError> {
    if field.p() != 2 {
        return Err(GfError::WrongCharacteristic { expected: 2, actual: field.p() });
    }
    let mut acc = 0;
    let mut x = mu;
    for _ in 0..field.h() {
        acc = field.add(acc, x);
        x = field.mul(x, x);
    }
    match acc {
        0 | 1 => Ok(acc as u8),
        _ => Err(GfError::InternalInvariantViolation(format!(
            "absolute trace of {} is not in GF(2)",
            field.format(mu)
        ))),
    }
}

/// Multiplicative order of a nonzero element.
pub fn multiplicative_order<F: FiniteField>(field: &F, a: u32) -> Option<u64> {
    if a == 0 {
        return None;
    }
    let group = field.order() - 1;
    let mut order = group;
    for r in prime_factors(group) {
        while order % r == 0 && field.pow(a, order / r) == field.one() {
            order /= r;
        }
    }
    Some(order)
}

/// Least element, in representation order, generating the multiplicative group.
pub fn primitive_element<F: FiniteField>(field: &F) -> u32 {
    let group = field.order() - 1;
    if group == 1 {
        return field.one();
    }
    let factors = prime_factors(group);
    field
        .elements()
        .skip(1)
        .find(|&a| factors.iter().all(|r| field.pow(a, group / r) != field.one()))
        .expect("multiplicative group of a finite field is cyclic")
}

/// `true` iff `a` is a square. In characteristic 2 every element is a square.
pub fn is_square<F: FiniteField>(field: &F, a: u32) -> bool {
    if a == 0 || field.characteristic() == 2 {
        return true;
    }
    field.pow(a, (field.order() - 1) / 2) == field.one()
}
