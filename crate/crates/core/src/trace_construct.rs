//! V(3, q²) read as V(6, q): choice of ρ and the lift T = Tr ∘ τ of the
//! determinant trivector τ with τ(e1, e2, e3) = β.

use serde::Serialize;
use thiserror::Error;

use crate::forms::{FormError, TriForm};
use crate::geometry::{projective_coords, projective_count, LineSet, ProjLine};
use crate::gf::{is_square, primitive_element, trace_abs, ExtPair, FiniteField, GaloisField, GfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("{0}")]
    WrongParity(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// GF(q²)³ with GF(q)-basis e1, e2, e3, e4 = ρe1, e5 = ρe2, e6 = ρe3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionSetup {
    pub pair: ExtPair,
    pub rho: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TraceCoeffs {
    pub c: [u32; 4],
}

impl ExtensionSetup {
    pub fn new(pair: ExtPair, rho: u32) -> Result<Self, TraceError> {
        if !pair.ext.contains(rho) || pair.in_base(rho) {
            return Err(TraceError::InvalidParameter(format!(
                "rho = {} must lie in GF(q²) \\ GF(q)",
                pair.ext.format(rho)
            )));
        }
        Ok(Self { pair, rho })
    }

    /// Odd q uses [`choose_rho_odd`], even q uses [`choose_rho_even`] with no target.
    pub fn standard(q: u64) -> Result<Self, TraceError> {
        let pair = ExtPair::from_order(q)?;
        let rho = if pair.base.p() == 2 { choose_rho_even(&pair, None)? } else { choose_rho_odd(&pair)? };
        Self::new(pair, rho)
    }

    pub fn base(&self) -> &GaloisField {
        &self.pair.base
    }

    /// GF(q²) coordinate x_i + ρ·x_(i+3).
    pub fn to_ext(&self, x: &[u32]) -> [u32; 3] {
        let e = &self.pair.ext;
        std::array::from_fn(|i| e.add(x[i], e.mul(self.rho, x[i + 3])))
    }

    /// Inverse of [`to_ext`](Self::to_ext).
    pub fn from_ext(&self, a: &[u32; 3]) -> Vec<u32> {
        let b = &self.pair.base;
        let (r0, r1) = self.pair.ext.split(self.rho);
        let r1inv = b.inv(r1).expect("rho is outside the base field");
        let mut v = vec![0u32; 6];
        for i in 0..3 {
            let (a0, a1) = self.pair.ext.split(a[i]);
            let y = b.mul(a1, r1inv);
            v[i] = b.sub(a0, b.mul(r0, y));
            v[i + 3] = y;
        }
        v
    }

    /// τ(x, y, z) = β·det(X, Y, Z) on GF(q²)³.
    pub fn tau(&self, beta: u32, x: &[u32], y: &[u32], z: &[u32]) -> u32 {
        let e = &self.pair.ext;
        let (x, y, z) = (self.to_ext(x), self.to_ext(y), self.to_ext(z));
        let minor = |i: usize, j: usize| e.sub(e.mul(y[i], z[j]), e.mul(y[j], z[i]));
        let det = e.add(
            e.sub(e.mul(x[0], minor(1, 2)), e.mul(x[1], minor(0, 2))),
            e.mul(x[2], minor(0, 1)),
        );
        e.mul(beta, det)
    }

    pub fn coeffs(&self, beta: u32) -> Result<TraceCoeffs, TraceError> {
        let e = &self.pair.ext;
        let mut c = [0u32; 4];
        let mut power = beta;
        for ci in c.iter_mut() {
            *ci = self.pair.trace_rel(power)?;
            power = e.mul(power, self.rho);
        }
        Ok(TraceCoeffs { c })
    }
}

/// ρ = ζ^(k+1) for q = 2k + 1 and ζ the least primitive element of GF(q²).
pub fn choose_rho_odd(pair: &ExtPair) -> Result<u32, TraceError> {
    let q = pair.q() as u64;
    if q % 2 == 0 {
        return Err(TraceError::WrongParity(format!("choose_rho_odd needs odd q, got q = {q}")));
    }
    let k = (q - 1) / 2;
    let e = &pair.ext;
    let rho = e.pow(primitive_element(e), k + 1);
    if e.pow(rho, 2 * k) != e.neg(1) {
        return Err(TraceError::InternalInvariantViolation("rho^(2k) != -1".into()));
    }
    Ok(rho)
}

/// ρ outside GF(q), q = 2^h, with Tr(ρ) = Tr(ρ²) = 1 and Tr(ρ³) = 0 (h odd)
/// or Tr(ρ³) = `target_mu` (h even, tr(μ) = 1; least valid μ if omitted).
pub fn choose_rho_even(pair: &ExtPair, target_mu: Option<u32>) -> Result<u32, TraceError> {
    let b = &pair.base;
    let e = &pair.ext;
    if b.p() != 2 {
        return Err(TraceError::WrongParity(format!("choose_rho_even needs q = 2^h, got q = {}", b.q())));
    }
    let target = match (b.h() % 2, target_mu) {
        (1, None) => 0,
        (1, Some(_)) => {
            return Err(TraceError::InvalidParameter("a target mu applies only when h is even".into()));
        }
        (_, Some(mu)) => {
            if !b.contains(mu) || trace_abs(b, mu)? != 1 {
                return Err(TraceError::InvalidParameter(format!("target mu = {mu} needs absolute trace 1")));
            }
            mu
        }
        (_, None) => b.elements().find(|&m| trace_abs(b, m) == Ok(1)).expect("trace is onto GF(2)"),
    };
    let zeta = primitive_element(e);
    let rho0 = e.mul(b.inv(pair.trace_rel(zeta)?).expect("zeta is outside GF(q)"), zeta);
    // Tr((ρ0 + α)³) = 1 + N(ρ0) + α + α²
    let norm = pair.norm(rho0);
    let rhs = b.add(b.add(target, 1), norm);
    let alpha = b
        .elements()
        .find(|&a| b.add(a, b.mul(a, a)) == rhs)
        .ok_or_else(|| TraceError::InternalInvariantViolation("alpha^2 + alpha = c has no solution".into()))?;
    let rho = e.add(rho0, alpha);
    let traces = [1, 2, 3].map(|i| pair.trace_rel(e.pow(rho, i)));
    if traces != [Ok(1), Ok(1), Ok(target)] || pair.in_base(rho) {
        return Err(TraceError::InternalInvariantViolation(format!(
            "rho = {} fails the trace conditions",
            e.format(rho)
        )));
    }
    Ok(rho)
}

/// t = c0·f123 + c1·(f234 − f135 + f126) + c2·(f156 − f246 + f345) + c3·f456.
pub fn assemble(field: &GaloisField, c: &TraceCoeffs) -> TriForm {
    let [c0, c1, c2, c3] = c.c;
    let m1 = field.neg(c1);
    let m2 = field.neg(c2);
    let terms = [
        (1, 2, 3, c0),
        (2, 3, 4, c1),
        (1, 3, 5, m1),
        (1, 2, 6, c1),
        (1, 5, 6, c2),
        (2, 4, 6, m2),
        (3, 4, 5, c2),
        (4, 5, 6, c3),
    ];
    TriForm::from_terms(field, 6, &terms).expect("six-dimensional pattern")
}

/// T = Tr(τ) with τ(e1, e2, e3) = β.
pub fn lift(beta: u32, setup: &ExtensionSetup) -> Result<TriForm, TraceError> {
    if beta == 0 || !setup.pair.ext.contains(beta) {
        return Err(TraceError::InvalidParameter(format!("beta must be a nonzero element of GF(q²), got {beta}")));
    }
    Ok(assemble(setup.base(), &setup.coeffs(beta)?))
}

/// The form with coefficients T(e_i, e_j, e_k) = Tr(τ(e_i, e_j, e_k)), read off directly.
pub fn lift_by_evaluation(beta: u32, setup: &ExtensionSetup) -> Result<TriForm, TraceError> {
    let mut t = TriForm::zero(setup.base(), 6)?;
    let unit = |i: usize| {
        let mut v = vec![0u32; 6];
        v[i] = 1;
        v
    };
    for i in 0..6 {
        for j in i + 1..6 {
            for k in j + 1..6 {
                let value = setup.pair.trace_rel(setup.tau(beta, &unit(i), &unit(j), &unit(k)))?;
                t.add_term(i, j, k, value)?;
            }
        }
    }
    Ok(t)
}

/// β = 1/2 for odd q, β = 1 for even q.
pub fn default_beta(pair: &ExtPair) -> u32 {
    let b = &pair.base;
    if b.p() == 2 {
        1
    } else {
        b.inv(b.from_int(2)).unwrap()
    }
}

/// The q⁴ + q² + 1 lines ⟨a, ρa⟩ for ⟨a⟩ ∈ PG(2, q²).
pub fn standard_spread(setup: &ExtensionSetup) -> LineSet {
    let e = &setup.pair.ext;
    let q2 = e.order() as u32;
    let base = setup.base();
    (0..projective_count(3, q2 as u64))
        .map(|i| {
            let a = projective_coords(3, q2, i);
            let a = [a[0], a[1], a[2]];
            let ra = a.map(|x| e.mul(setup.rho, x));
            ProjLine::span(base, &setup.from_ext(&a), &setup.from_ext(&ra)).expect("a and ρa are independent over GF(q)")
        })
        .collect()
}

/// q = 2^h with h odd: ρ of order 3 and the lifts for β = 1, ρ, ρ².
#[derive(Clone, Debug)]
pub struct CubeRootVariant {
    pub setup: ExtensionSetup,
    /// Lifts for β = 1, ρ, ρ² in that order.
    pub forms: [TriForm; 3],
}

pub fn rho_cube_root_variant(q: u64) -> Result<CubeRootVariant, TraceError> {
    let pair = ExtPair::from_order(q)?;
    let b = &pair.base;
    if b.p() != 2 || b.h() % 2 == 0 {
        return Err(TraceError::WrongParity(format!("needs q = 2^h with h odd, got q = {q}")));
    }
    let rho = pair.ext.pow(primitive_element(&pair.ext), (pair.ext.order() - 1) / 3);
    let setup = ExtensionSetup::new(pair, rho)?;
    let e = &setup.pair.ext;
    let tr = |x: u32| setup.pair.trace_rel(x);
    if tr(e.mul(rho, rho))? != tr(rho)? || tr(e.pow(rho, 3))? != 0 {
        return Err(TraceError::InternalInvariantViolation("order-3 rho fails the trace identities".into()));
    }
    let rho2 = e.mul(rho, rho);
    let forms = [lift(1, &setup)?, lift(rho, &setup)?, lift(rho2, &setup)?];
    Ok(CubeRootVariant { setup, forms })
}

/// The spread trivector over GF(q) by the trace construction, with optional
/// μ (odd q: non-square, becomes ρ²; even q with h even: Tr(ρ³)) and β.
pub fn construct(q: u64, mu: Option<u32>, beta: Option<u32>) -> Result<(ExtensionSetup, TriForm), TraceError> {
    let pair = ExtPair::from_order(q)?;
    let b = pair.base.clone();
    let rho = if b.p() == 2 {
        choose_rho_even(&pair, if b.h() % 2 == 0 { mu } else { None }).and_then(|r| {
            if b.h() % 2 == 1 && mu.is_some() {
                Err(TraceError::InvalidParameter("mu is fixed to 0 when h is odd".into()))
            } else {
                Ok(r)
            }
        })?
    } else {
        match mu {
            None => choose_rho_odd(&pair)?,
            Some(m) => rho_for_mu(&pair, m)?,
        }
    };
    let setup = ExtensionSetup::new(pair, rho)?;
    let beta = beta.unwrap_or_else(|| default_beta(&setup.pair));
    let t = lift(beta, &setup)?;
    Ok((setup, t))
}

/// Odd q: the least ρ ∈ GF(q²) with ρ² = μ for a non-square μ ∈ GF(q).
pub fn rho_for_mu(pair: &ExtPair, mu: u32) -> Result<u32, TraceError> {
    let b = &pair.base;
    if !b.contains(mu) || mu == 0 || is_square(b, mu) {
        return Err(TraceError::InvalidParameter(format!("mu = {} must be a non-square of GF({})", b.format(mu), b.q())));
    }
    let e = &pair.ext;
    e.elements()
        .find(|&r| e.mul(r, r) == mu)
        .ok_or_else(|| TraceError::InternalInvariantViolation("non-square has no root in GF(q²)".into()))
}
