//! One-shot reproduction of every structural claim, as a pass/fail matrix.

use std::fmt::Display;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::census::{fingerprint_with_budget, gl_order, orbit_partition, orbit_ratio, REFERENCE_RATIOS};
use crate::crossalg;
use crate::forms::{Family, TriForm, Triple};
use crate::geometry::{
    self, enum_points, extension_space, is_normal_spread, is_totally_singular, singular_lines,
    singular_lines_brute_force, span_points, spread_check, totally_singular_search, ProjLine,
};
use crate::gf::{is_square, trace_abs, FiniteField, GaloisField};
use crate::hypersurface::{classify_union, monomials, HomogPoly, UnionKind};
use crate::linalg::{self, Matrix};
use crate::trace_construct::rho_cube_root_variant;

/// Where the claims get their forms. The default is the built-in catalog;
/// callers may substitute forms to test the checks themselves.
pub trait FormSource: Sync {
    fn form(&self, family: Family, field: &GaloisField, mu: Option<u32>) -> TriForm;
}

pub struct Catalog;

impl FormSource for Catalog {
    fn form(&self, family: Family, field: &GaloisField, mu: Option<u32>) -> TriForm {
        family.pattern(field, mu)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Claims only run for field orders up to this.
    pub q_max: u64,
    /// Random forms per (n, q) for the coverage claim.
    pub coverage_samples: usize,
    pub crossalg_samples: usize,
    pub seed: u64,
    pub ts_budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { q_max: 8, coverage_samples: 1000, crossalg_samples: 10_000, seed: 1, ts_budget: 10_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimReport {
    pub id: String,
    pub statement: String,
    pub status: Status,
    pub cases: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub claims: Vec<ClaimReport>,
    pub all_passed: bool,
}

impl VerifySummary {
    pub fn failed(&self) -> impl Iterator<Item = &ClaimReport> {
        self.claims.iter().filter(|c| c.status == Status::Fail)
    }
}

#[derive(Default)]
struct Tally {
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn error(&mut self, context: impl Display, e: impl Display) {
        self.cases += 1;
        self.failures.push(format!("{context}: {e}"));
    }

    fn finish(self, id: impl Into<String>, statement: impl Into<String>) -> ClaimReport {
        let status = match (self.cases, self.failures.is_empty()) {
            (0, _) => Status::Skipped,
            (_, true) => Status::Pass,
            _ => Status::Fail,
        };
        ClaimReport { id: id.into(), statement: statement.into(), status, cases: self.cases, failures: self.failures }
    }
}

/// Claim ids in run order.
pub fn claim_ids() -> Vec<String> {
    let mut ids: Vec<String> = ["spread-odd", "spread-even", "negative-controls", "cube-root-variants", "fano-union", "coverage-even-dim", "totally-singular"]
        .map(String::from)
        .to_vec();
    ids.extend(REFERENCE_RATIOS.iter().map(|(n, _)| format!("orbit-ratio-n{n}")));
    ids.extend(["oracle-equivalence", "orbit-bfs", "cross-product"].map(String::from));
    ids
}

fn field(q: u64) -> GaloisField {
    GaloisField::from_order(q).expect("claim field orders are prime powers")
}

fn spread_size(q: u64) -> usize {
    (q.pow(4) + q * q + 1) as usize
}

/// Checks that `t` gives a normal spread of q⁴ + q² + 1 lines.
fn expect_normal_spread(tally: &mut Tally, t: &TriForm, label: &str) {
    let q = t.field().q() as u64;
    let result = singular_lines(t).and_then(|lines| {
        let space = enum_points(t.field(), t.n())?;
        let report = spread_check(&lines, &space)?;
        let normal = if report.is_partition { Some(is_normal_spread(&lines, &space)?) } else { None };
        Ok((report, normal))
    });
    match result {
        Ok((report, normal)) => tally.check(
            report.line_count == spread_size(q) && report.is_partition && normal == Some(true),
            || {
                format!(
                    "{label}: {} lines (expected {}), partition = {}, normal = {normal:?}",
                    report.line_count,
                    spread_size(q),
                    report.is_partition
                )
            },
        ),
        Err(e) => tally.error(label, e),
    }
}

fn expect_not_spread(tally: &mut Tally, t: &TriForm, label: &str) {
    let result = singular_lines(t).and_then(|lines| spread_check(&lines, &enum_points(t.field(), t.n())?));
    match result {
        Ok(report) => tally.check(!report.is_partition, || format!("{label}: unexpectedly a spread")),
        Err(e) => tally.error(label, e),
    }
}

fn spread_odd(opts: &VerifyOptions, source: &dyn FormSource) -> ClaimReport {
    let mut tally = Tally::default();
    for q in [3u64, 5, 7].into_iter().filter(|&q| q <= opts.q_max) {
        let f = field(q);
        for mu in f.elements().skip(1).filter(|&m| !is_square(&f, m)) {
            let t = source.form(Family::SpreadOdd, &f, Some(mu));
            expect_normal_spread(&mut tally, &t, &format!("q = {q}, mu = {}", f.format(mu)));
        }
    }
    tally.finish("spread-odd", "odd q, non-square mu: f123 + mu(f156 - f246 + f345) gives a normal spread")
}

fn spread_even(opts: &VerifyOptions, source: &dyn FormSource) -> ClaimReport {
    let mut tally = Tally::default();
    for q in [2u64, 8].into_iter().filter(|&q| q <= opts.q_max) {
        let t = source.form(Family::SpreadEvenHOdd, &field(q), None);
        expect_normal_spread(&mut tally, &t, &format!("q = {q}"));
    }
    if opts.q_max >= 4 {
        let f = field(4);
        for mu in f.elements().filter(|&m| trace_abs(&f, m) == Ok(1)) {
            let t = source.form(Family::SpreadEvenHEven, &f, Some(mu));
            expect_normal_spread(&mut tally, &t, &format!("q = 4, mu = {}", f.format(mu)));
        }
    }
    tally.finish("spread-even", "even q: the trace construction gives a normal spread (with mu f456 when h is even)")
}

fn negative_controls(opts: &VerifyOptions, source: &dyn FormSource) -> ClaimReport {
    let mut tally = Tally::default();
    for q in [3u64, 5, 7].into_iter().filter(|&q| q <= opts.q_max) {
        let f = field(q);
        for mu in f.elements().skip(1).filter(|&m| is_square(&f, m)) {
            let t = source.form(Family::SpreadOdd, &f, Some(mu));
            expect_not_spread(&mut tally, &t, &format!("q = {q}, square mu = {}", f.format(mu)));
        }
    }
    let plane = Matrix::from_rows(6, &[[1, 0, 0, 1, 0, 0], [0, 1, 0, 0, 1, 0], [0, 0, 1, 0, 0, 1]]);
    for q in [2u64, 4, 8].into_iter().filter(|&q| q <= opts.q_max) {
        let f = field(q);
        let t = source.form(Family::SpreadOdd, &f, Some(1));
        expect_not_spread(&mut tally, &t, &format!("q = {q}, mu = 1"));
        match singular_lines(&t) {
            Ok(lines) => {
                let points: Vec<Vec<u32>> = span_points(&f, &plane).collect();
                let all_singular = points.iter().enumerate().all(|(i, a)| {
                    points[i + 1..].iter().all(|b| ProjLine::span(&f, a, b).is_some_and(|l| lines.contains(&l)))
                });
                tally.check(all_singular, || format!("q = {q}, mu = 1: a line of <e1+e4, e2+e5, e3+e6> is not singular"));
            }
            Err(e) => tally.error(format!("q = {q}"), e),
        }
    }
    tally.finish("negative-controls", "square mu (odd q) and mu = 1 (even q) give no spread; for mu = 1 the plane <e1+e4, e2+e5, e3+e6> is singular")
}

fn cube_root_variants(opts: &VerifyOptions, source: &dyn FormSource) -> ClaimReport {
    let mut tally = Tally::default();
    for q in [2u64, 8].into_iter().filter(|&q| q <= opts.q_max) {
        let f = field(q);
        let t1 = source.form(Family::TPrime, &f, None);
        let t2 = source.form(Family::TDoublePrime, &f, None);
        expect_normal_spread(&mut tally, &t1, &format!("q = {q}, t'"));
        expect_normal_spread(&mut tally, &t2, &format!("q = {q}, t''"));
        match rho_cube_root_variant(q) {
            Ok(v) => {
                let matches = v.forms[1] == t2 && v.forms[2] == t1;
                tally.check(matches, || format!("q = {q}: lifts for beta = rho, rho^2 differ from t'', t'"));
            }
            Err(e) => tally.error(format!("q = {q}"), e),
        }
    }
    tally.finish("cube-root-variants", "q = 2^h, h odd: t' and t'' (rho of order 3) give normal spreads")
}

/// Whether `a = λ·b` for some nonzero λ.
fn proportional(f: &GaloisField, a: &HomogPoly, b: &HomogPoly) -> bool {
    if a.n() != b.n() || a.degree() != b.degree() {
        return false;
    }
    let monos = monomials(a.n(), a.degree());
    let Some(pivot) = monos.iter().find(|m| b.coeff(m) != 0) else {
        return false;
    };
    let lambda = f.mul(a.coeff(pivot), f.inv(b.coeff(pivot)).unwrap());
    lambda != 0 && monos.iter().all(|m| a.coeff(m) == f.mul(lambda, b.coeff(m)))
}

fn fano_union(opts: &VerifyOptions, source: &dyn FormSource) -> ClaimReport {
    let mut tally = Tally::default();
    for q in [2u64, 3, 4, 5, 7, 8].into_iter().filter(|&q| q <= opts.q_max) {
        let f = field(q);
        let t = source.form(Family::Fano7, &f, None);
        let c = match classify_union(&t) {
            Ok(c) => c,
            Err(e) => {
                tally.error(format!("q = {q}"), e);
                continue;
            }
        };
        if q % 2 == 0 {
            let sum = HomogPoly::new(&f, 7, 1, (0..7).map(|i| {
                let mut m = vec![0u8; 7];
                m[i] = 1;
                (m, 1)
            }));
            let ok = c.kind == UnionKind::Hyperplane && c.fitted.len() == 1 && proportional(&f, &c.fitted[0], &sum);
            tally.check(ok, || format!("q = {q}: {} {:?}, expected the hyperplane x1 + ... + x7 = 0", c.kind, c.fitted.iter().map(|p| p.to_string()).collect::<Vec<_>>()));
        } else {
            let squares = HomogPoly::sum_of_squares(&f, 7);
            let ok = c.kind == UnionKind::Quadric
                && c.quadric_rank == Some(7)
                && c.fitted.len() == 1
                && proportional(&f, &c.fitted[0], &squares);
            tally.check(ok, || format!("q = {q}: {} rank {:?}, expected the quadric x1^2 + ... + x7^2 of rank 7", c.kind, c.quadric_rank));
        }
    }
    tally.finish("fano-union", "the singular lines of the Fano form cover a hyperplane (even q) or a rank-7 quadric (odd q)")
}

/// A form with independent uniform coefficients.
pub fn random_form(f: &GaloisField, n: usize, rng: &mut impl Rng) -> TriForm {
    let mut t = TriForm::zero(f, n).expect("dimension in range");
    for tr in Triple::all(n) {
        let [i, j, k] = tr.indices();
        t.add_term(i, j, k, rng.gen_range(0..f.q())).expect("in range");
    }
    t
}

fn coverage_even_dim(opts: &VerifyOptions) -> ClaimReport {
    let mut tally = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for q in [2u64, 3].into_iter().filter(|&q| q <= opts.q_max) {
        let f = field(q);
        for n in [4, 6] {
            for s in 0..opts.coverage_samples {
                let t = random_form(&f, n, &mut rng);
                match geometry::min_coverage(&t) {
                    Ok(c) => tally.check(c >= 1, || format!("n = {n}, q = {q}, sample {s}: a point on no singular line in {}", t.to_text())),
                    Err(e) => tally.error(format!("n = {n}, q = {q}"), e),
                }
            }
        }
    }
    tally.finish("coverage-even-dim", "even n: every point lies on a singular line")
}

fn span_of_units(n: usize, count: usize) -> Matrix {
    let rows: Vec<Vec<u32>> = (0..count).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect();
    Matrix::from_rows(n, &rows)
}

fn totally_singular(opts: &VerifyOptions, source: &dyn FormSource) -> ClaimReport {
    let mut tally = Tally::default();
    for q in [2u64, 3].into_iter().filter(|&q| q <= opts.q_max) {
        let t = source.form(Family::Ts6, &field(q), None);
        let threes = totally_singular_search(&t, 3, opts.ts_budget);
        tally.check(threes.complete && threes.subspaces == vec![span_of_units(6, 3)], || {
            format!("ts6, q = {q}: {} totally singular planes (complete = {}), expected only <e1, e2, e3>", threes.subspaces.len(), threes.complete)
        });
        let fours = totally_singular_search(&t, 4, opts.ts_budget);
        tally.check(fours.complete && fours.subspaces.is_empty(), || {
            format!("ts6, q = {q}: {} totally singular solids (complete = {})", fours.subspaces.len(), fours.complete)
        });
    }
    let f = field(2);
    let t = source.form(Family::Ts10, &f, None);
    let w = span_of_units(10, 6);
    tally.check(is_totally_singular(&t, &w), || "ts10: <e1, ..., e6> is not totally singular".into());
    tally.check(t.radical_basis().rows() == 0, || "ts10: nonzero radical".into());
    let k = extension_space(&t, &w);
    tally.check(linalg::row_space(&f, &k) == w, || {
        format!("ts10: <e1, ..., e6> extends within a {}-dimensional space", k.rows())
    });
    tally.finish("totally-singular", "ts6 has <e1, e2, e3> as its only totally singular plane and no solid; ts10 has a maximal totally singular 6-space and zero radical")
}

fn orbit_ratios() -> Vec<ClaimReport> {
    REFERENCE_RATIOS
        .iter()
        .map(|&(n, expected)| {
            let mut tally = Tally::default();
            match orbit_ratio(n, 2) {
                Ok(r) => {
                    let got = r.to_f64();
                    let rel = (got - expected).abs() / expected;
                    tally.check(rel <= 0.02, || format!("N({n}, 2) = {got:.4e}, published {expected}, relative error {:.2}%", rel * 100.0));
                }
                Err(e) => tally.error(format!("n = {n}"), e),
            }
            tally.finish(format!("orbit-ratio-n{n}"), format!("q^C({n},3) / |GL({n}, 2)| is within 2% of {expected}"))
        })
        .collect()
}

fn oracle_equivalence(opts: &VerifyOptions, source: &dyn FormSource) -> ClaimReport {
    let mut tally = Tally::default();
    for q in [2u64, 3].into_iter().filter(|&q| q <= opts.q_max) {
        let f = field(q);
        for family in Family::ALL.into_iter().filter(|fam| fam.dimension() <= 7) {
            let t = source.form(family, &f, family.default_mu(&f));
            match (singular_lines(&t), singular_lines_brute_force(&t)) {
                (Ok(a), Ok(b)) => tally.check(a == b, || format!("{}, q = {q}: {} vs {} lines", family.name(), a.len(), b.len())),
                (Err(e), _) | (_, Err(e)) => tally.error(format!("{}, q = {q}", family.name()), e),
            }
        }
    }
    tally.finish("oracle-equivalence", "per-point singular lines agree with filtering every line")
}

fn orbit_bfs(opts: &VerifyOptions) -> ClaimReport {
    let mut tally = Tally::default();
    for n in [5, 6] {
        let part = match orbit_partition(n, 2, None) {
            Ok(p) => p,
            Err(e) => {
                tally.error(format!("n = {n}"), e);
                continue;
            }
        };
        let total: u64 = part.orbits.iter().map(|o| o.size).sum();
        tally.check(total == part.space.states(), || format!("n = {n}: orbit sizes sum to {total}"));
        let order = gl_order(n, 2);
        for o in &part.orbits {
            tally.check((&order % o.size) == 0u32.into(), || format!("n = {n}: orbit size {} does not divide |GL|", o.size));
        }
        let fp = |i: u64| fingerprint_with_budget(&part.space.form(i), opts.ts_budget);
        let reps: Vec<_> = part.orbits.iter().map(|o| fp(o.representative)).collect();
        let all = geometry::map_points(part.space.states() as usize, |i| fp(i as u64));
        let bad = all
            .iter()
            .enumerate()
            .filter(|(i, got)| **got != reps[part.orbit_of_index(*i as u64)])
            .map(|(i, _)| i)
            .collect::<Vec<_>>();
        tally.check(bad.is_empty(), || {
            format!("n = {n}: {} forms differ in fingerprint from their orbit representative (first: {})", bad.len(), bad[0])
        });
    }
    tally.finish("orbit-bfs", "GL(n, 2) orbits on trivectors, n = 5, 6: sizes sum to 2^C(n,3), divide |GL|, and carry constant fingerprints")
}

fn cross_product(opts: &VerifyOptions) -> ClaimReport {
    let mut tally = Tally::default();
    let report = crossalg::verify(opts.crossalg_samples, opts.seed);
    for c in &report.checks {
        tally.check(c.passed, || format!("{}: {} of {} cases fail", c.name, c.failures, c.cases));
    }
    tally.finish("cross-product", "the Fano form gives a 7-dimensional cross product and a normed algebra without zero divisors")
}

/// Runs the claims whose id passes `select`, in [`claim_ids`] order.
pub fn verify_selected(opts: &VerifyOptions, source: &dyn FormSource, select: impl Fn(&str) -> bool) -> VerifySummary {
    type Step<'a> = (&'static str, &'a dyn Fn() -> ClaimReport);
    let before: [Step; 7] = [
        ("spread-odd", &|| spread_odd(opts, source)),
        ("spread-even", &|| spread_even(opts, source)),
        ("negative-controls", &|| negative_controls(opts, source)),
        ("cube-root-variants", &|| cube_root_variants(opts, source)),
        ("fano-union", &|| fano_union(opts, source)),
        ("coverage-even-dim", &|| coverage_even_dim(opts)),
        ("totally-singular", &|| totally_singular(opts, source)),
    ];
    let after: [Step; 3] = [
        ("oracle-equivalence", &|| oracle_equivalence(opts, source)),
        ("orbit-bfs", &|| orbit_bfs(opts)),
        ("cross-product", &|| cross_product(opts)),
    ];
    let mut claims: Vec<ClaimReport> = before.iter().filter(|(id, _)| select(id)).map(|(_, f)| f()).collect();
    if REFERENCE_RATIOS.iter().any(|(n, _)| select(&format!("orbit-ratio-n{n}"))) {
        claims.extend(orbit_ratios().into_iter().filter(|c| select(&c.id)));
    }
    claims.extend(after.iter().filter(|(id, _)| select(id)).map(|(_, f)| f()));
    let all_passed = claims.iter().all(|c| c.status != Status::Fail);
    VerifySummary { claims, all_passed }
}

pub fn verify_all(opts: &VerifyOptions, source: &dyn FormSource) -> VerifySummary {
    verify_selected(opts, source, |_| true)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Corrupted;

    impl FormSource for Corrupted {
        fn form(&self, family: Family, field: &GaloisField, mu: Option<u32>) -> TriForm {
            let mut t = family.pattern(field, mu);
            if family == Family::SpreadEvenHOdd {
                t.add_term(3, 4, 5, 1).unwrap();
            }
            t
        }
    }

    fn small() -> VerifyOptions {
        VerifyOptions { q_max: 3, coverage_samples: 50, crossalg_samples: 100, ..VerifyOptions::default() }
    }

    #[test]
    fn small_claims_pass() {
        let ids = ["spread-odd", "spread-even", "negative-controls", "cube-root-variants", "fano-union", "coverage-even-dim", "oracle-equivalence", "cross-product"];
        let s = verify_selected(&small(), &Catalog, |id| ids.contains(&id));
        assert_eq!(s.claims.len(), ids.len());
        assert!(s.all_passed, "{:#?}", s.failed().collect::<Vec<_>>());
        assert!(s.claims.iter().all(|c| c.status == Status::Pass));
    }

    #[test]
    fn q_max_skips_claims() {
        let opts = VerifyOptions { q_max: 2, ..small() };
        let s = verify_selected(&opts, &Catalog, |id| id == "spread-odd");
        assert_eq!(s.claims[0].status, Status::Skipped);
        assert!(s.all_passed);
    }

    #[test]
    fn corrupted_form_is_named() {
        let s = verify_selected(&small(), &Corrupted, |id| id.starts_with("spread"));
        let failed: Vec<&str> = s.failed().map(|c| c.id.as_str()).collect();
        assert_eq!(failed, ["spread-even"]);
        assert!(!s.all_passed);
        assert!(s.claims[1].failures[0].starts_with("q = 2"));
    }

    #[test]
    fn orbit_ratio_claims_are_split() {
        let s = verify_selected(&small(), &Catalog, |id| id.starts_with("orbit-ratio"));
        assert_eq!(s.claims.len(), 7);
        let failed: Vec<&str> = s.failed().map(|c| c.id.as_str()).collect();
        assert_eq!(failed, ["orbit-ratio-n5"]);
    }

    #[test]
    fn ids_are_complete() {
        let ids = claim_ids();
        assert_eq!(ids.len(), 17);
        let s = verify_selected(&VerifyOptions { q_max: 1, ..small() }, &Catalog, |id| id.starts_with("orbit-ratio") || id == "cross-product");
        for c in &s.claims {
            assert!(ids.contains(&c.id));
        }
    }
}
