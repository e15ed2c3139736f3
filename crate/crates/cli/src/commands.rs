use serde_json::{json, Value};
use trisect::bits::Gf2Form;
use trisect::census::{self, burnside_orbit_count, fingerprint, gl_order, orbit_partition, orbit_ratio, CensusError, REFERENCE_RATIOS};
use trisect::crossalg::{self, basis_product};
use trisect::forms::TriForm;
use trisect::geometry::{
    self, enum_points, is_normal_spread, max_totally_singular_dim, singular_lines, totally_singular_search,
    GeometryError, LineSet,
};
use trisect::gf::{prime_power, FiniteField, GaloisField};
use trisect::hypersurface::{classify_union, union_points};
use trisect::linalg::Matrix;
use trisect::trace_construct::{construct as build, default_beta, TraceError};
use trisect::verify::{claim_ids, verify_selected, Status, VerifyOptions, VerifySummary};

use crate::source::{FormArgs, Overrides};
use crate::{CensusArgs, CliError, ConstructArgs, CrossalgArgs, LinesArgs, OrbitsArgs, Outcome, Parity, TsArgs, UnionArgs, VerifyArgs};

fn ok(command: &'static str, body: Value) -> Outcome {
    Outcome { command, body, failure: None, text: None }
}

fn geometry_error(flag: &'static str, e: GeometryError) -> CliError {
    match e {
        GeometryError::TooLarge { .. } => CliError::usage("--q", e),
        _ => CliError::usage(flag, e),
    }
}

fn element(a: u32, text: String) -> Value {
    json!({ "packed": a, "text": text })
}

fn rows(m: &Matrix) -> Vec<Vec<u32>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn form_header(t: &TriForm) -> Value {
    json!({ "n": t.n(), "q": t.field().q(), "form": t.to_text() })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Some(b), Value::Object(e)) = (base.as_object_mut(), extra) {
        b.extend(e);
    }
    base
}

pub fn construct(a: &ConstructArgs) -> Result<Outcome, CliError> {
    let f = GaloisField::from_order(a.q).map_err(|e| CliError::usage("--q", e))?;
    let even = f.p() == 2;
    match (a.family, even) {
        (Parity::Odd, true) => return Err(CliError::usage("--family", format!("q = {} is even", a.q))),
        (Parity::Even, false) => return Err(CliError::usage("--family", format!("q = {} is odd", a.q))),
        _ => {}
    }
    let (setup, t) = build(a.q, a.mu, a.beta).map_err(|e| match &e {
        TraceError::InvalidParameter(m) if m.contains("beta") => CliError::usage("--beta", e),
        TraceError::InvalidParameter(_) => CliError::usage("--mu", e),
        TraceError::Field(_) => CliError::usage("--q", e),
        _ => CliError::Other(e.to_string()),
    })?;
    let ext = &setup.pair.ext;
    let beta = a.beta.unwrap_or_else(|| default_beta(&setup.pair));
    let mu = if even {
        setup.pair.trace_rel(ext.pow(setup.rho, 3))
    } else {
        Ok(ext.mul(setup.rho, setup.rho))
    }
    .map_err(|e| CliError::Other(e.to_string()))?;
    let coeffs = setup.coeffs(beta).map_err(|e| CliError::Other(e.to_string()))?;
    if let Some(path) = &a.emit {
        let text = serde_json::to_string_pretty(&t.to_json()).expect("forms serialize");
        std::fs::write(path, text + "\n").map_err(|e| CliError::usage("--emit", e))?;
    }
    Ok(ok(
        "construct",
        merge(
            form_header(&t),
            json!({
                "family": if even { "even" } else { "odd" },
                "rho": element(setup.rho, ext.format(setup.rho)),
                "beta": element(beta, ext.format(beta)),
                "mu": element(mu, f.format(mu)),
                "trace_coeffs": coeffs.c,
                "json": t.to_json(),
            }),
        ),
    ))
}

fn line_report(t: &TriForm, flag: &'static str) -> Result<(LineSet, Value, bool), CliError> {
    let space = enum_points(t.field(), t.n()).map_err(|e| geometry_error(flag, e))?;
    let lines = singular_lines(t).map_err(|e| geometry_error(flag, e))?;
    let mut report = geometry::spread_check(&lines, &space).map_err(|e| geometry_error(flag, e))?;
    if report.is_partition {
        report.is_normal = Some(is_normal_spread(&lines, &space).map_err(|e| geometry_error(flag, e))?);
    }
    let spread = report.is_partition && report.is_normal == Some(true);
    let body = merge(form_header(t), serde_json::to_value(&report).expect("reports serialize"));
    Ok((lines, body, spread))
}

pub fn lines(a: &LinesArgs) -> Result<Outcome, CliError> {
    let (t, flag) = a.form.resolve()?;
    let (lines, mut body, _) = line_report(&t, flag)?;
    if a.list {
        let list: Vec<Vec<Vec<u32>>> = lines.iter().map(|l| vec![l.row(0).to_vec(), l.row(1).to_vec()]).collect();
        body = merge(body, json!({ "lines": list }));
    }
    Ok(ok("lines", body))
}

pub fn spread_check(form: &FormArgs) -> Result<Outcome, CliError> {
    let (t, flag) = form.resolve()?;
    let (lines, body, spread) = line_report(&t, flag)?;
    let failure = (!spread).then(|| {
        format!(
            "the {} singular lines of {} do not form a normal spread of PG({}, {})",
            lines.len(),
            t.to_text(),
            t.n() - 1,
            t.field().q()
        )
    });
    Ok(Outcome { command: "spread-check", body, failure, text: None })
}

pub fn union(a: &UnionArgs) -> Result<Outcome, CliError> {
    let (t, flag) = a.form.resolve()?;
    if t.n() % 2 == 0 {
        return Err(CliError::usage(flag, format!("the union is only classified for odd n, got n = {}", t.n())));
    }
    let body = if a.classify {
        let c = classify_union(&t).map_err(|e| CliError::usage("--q", e))?;
        serde_json::to_value(&c).expect("reports serialize")
    } else {
        let points = union_points(&t).map_err(|e| geometry_error(flag, e))?;
        let total = enum_points(t.field(), t.n()).map_err(|e| geometry_error(flag, e))?.count();
        json!({ "union_points": points.len(), "total_points": total })
    };
    Ok(ok("union", merge(form_header(&t), body)))
}

pub fn ts_search(a: &TsArgs) -> Result<Outcome, CliError> {
    let (t, _) = a.form.resolve()?;
    let body = match a.r {
        Some(r) if r == 0 || r > t.n() => return Err(CliError::usage("--r", format!("r must be in 1..={}", t.n()))),
        Some(r) => {
            let s = totally_singular_search(&t, r, a.budget);
            let subspaces: Vec<Vec<Vec<u32>>> = s.subspaces.iter().map(rows).collect();
            json!({ "r": r, "count": subspaces.len(), "complete": s.complete, "nodes": s.nodes, "subspaces": subspaces })
        }
        None => {
            let (dim, complete) = match Gf2Form::new(&t) {
                Some(g) => g.max_totally_singular_dim(a.budget),
                None => max_totally_singular_dim(&t, a.budget),
            };
            json!({ "max_dim": dim, "complete": complete })
        }
    };
    Ok(ok("ts-search", merge(form_header(&t), merge(body, json!({ "budget": a.budget })))))
}

fn census_error(e: CensusError) -> CliError {
    match e {
        CensusError::TooLarge(_) | CensusError::BadDimension { .. } => CliError::usage("--n", e),
        CensusError::Form(_) => CliError::usage("--q", e),
        other => CliError::Other(other.to_string()),
    }
}

pub fn census(a: &CensusArgs) -> Result<Outcome, CliError> {
    GaloisField::from_order(a.q).map_err(|e| CliError::usage("--q", e))?;
    if a.n_min > a.n_max {
        return Err(CliError::usage("--n-min", "n-min exceeds n-max"));
    }
    let mut rows = Vec::new();
    let mut off = Vec::new();
    for n in a.n_min..=a.n_max {
        let ratio = orbit_ratio(n, a.q).map_err(|e| match e {
            CensusError::BadDimension { .. } => CliError::usage("--n-min", e),
            other => census_error(other),
        })?;
        let reference = REFERENCE_RATIOS.iter().find(|(m, _)| *m == n && a.q == 2 && a.table).map(|r| r.1);
        let mut row = json!({
            "n": n,
            "exponent": census::binomial(n as u64, 3),
            "gl_order": gl_order(n, a.q).to_string(),
            "ratio": ratio,
        });
        if let Some(expected) = reference {
            let rel = (ratio.to_f64() - expected).abs() / expected;
            let within = rel <= 0.02;
            if !within {
                off.push(format!("n = {n}: {:.4e} vs {expected} ({:.2}%)", ratio.to_f64(), rel * 100.0));
            }
            row = merge(row, json!({ "reference": expected, "relative_error": rel, "within_tolerance": within }));
        }
        rows.push(row);
    }
    let failure = (!off.is_empty()).then(|| format!("outside 2% of the published table: {}", off.join("; ")));
    Ok(Outcome { command: "census", body: json!({ "q": a.q, "rows": rows }), failure, text: None })
}

pub fn orbits(a: &OrbitsArgs) -> Result<Outcome, CliError> {
    let f = GaloisField::from_order(a.q).map_err(|e| CliError::usage("--q", e))?;
    let part = orbit_partition(a.n, a.q, None).map_err(census_error)?;
    let order = gl_order(a.n, a.q);
    let mut problems = Vec::new();
    let mut list = Vec::new();
    for (i, o) in part.orbits.iter().enumerate() {
        if &order % o.size != 0u32.into() {
            problems.push(format!("orbit {i} has size {} not dividing |GL|", o.size));
        }
        let t = part.space.form(o.representative);
        let mut entry = json!({ "index": i, "representative": t.to_text(), "size": o.size });
        if a.fingerprints {
            let fp = fingerprint(&t).map_err(census_error)?;
            entry = merge(entry, json!({ "fingerprint": fp }));
        }
        list.push(entry);
    }
    let total: u64 = part.orbits.iter().map(|o| o.size).sum();
    if total != part.space.states() {
        problems.push(format!("orbit sizes sum to {total}, not {}", part.space.states()));
    }
    let mut body = json!({
        "n": a.n,
        "q": a.q,
        "states": part.space.states(),
        "group_order": order.to_string(),
        "orbit_count": part.orbits.len(),
        "orbits": list,
    });
    if prime_power(a.q).is_some_and(|(_, h)| h == 1) {
        let expected = burnside_orbit_count(a.n, f.p()).map_err(census_error)?;
        if expected != part.orbits.len().into() {
            problems.push(format!("{} orbits found, the class equation gives {expected}", part.orbits.len()));
        }
        body = merge(body, json!({ "burnside_orbit_count": expected.to_string() }));
    }
    let failure = (!problems.is_empty()).then(|| problems.join("; "));
    Ok(Outcome { command: "orbits", body, failure, text: None })
}

pub fn crossalg(a: &CrossalgArgs) -> Result<Outcome, CliError> {
    let table: Vec<Vec<String>> = (0..7)
        .map(|i| {
            (0..7)
                .map(|j| match basis_product(i, j) {
                    None => "0".to_string(),
                    Some((k, s)) => format!("{}e{}", if s > 0 { '+' } else { '-' }, k + 1),
                })
                .collect()
        })
        .collect();
    if !a.verify {
        return Ok(ok("crossalg", json!({ "products": table })));
    }
    if a.samples == 0 {
        return Err(CliError::usage("--samples", "need at least one sample"));
    }
    let report = crossalg::verify(a.samples, a.seed);
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    let failure = (!failed.is_empty()).then(|| format!("failed: {}", failed.join(", ")));
    let body = merge(json!({ "products": table }), serde_json::to_value(&report).expect("reports serialize"));
    Ok(Outcome { command: "crossalg", body, failure, text: None })
}

fn matrix_text(s: &VerifySummary) -> String {
    let mut out = String::new();
    for c in &s.claims {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        out += &format!("{tag}  {:<20} {:>6} cases  {}\n", c.id, c.cases, c.statement);
        for f in &c.failures {
            out += &format!("      {f}\n");
        }
    }
    out
}

pub fn verify_all(a: &VerifyArgs) -> Result<Outcome, CliError> {
    if a.q_max < 2 {
        return Err(CliError::usage("--q-max", "must be at least 2"));
    }
    let ids = claim_ids();
    if let Some(bad) = a.only.iter().find(|id| !ids.contains(id)) {
        return Err(CliError::usage("--only", format!("unknown claim `{bad}`; known: {}", ids.join(", "))));
    }
    let source = Overrides::parse(&a.overrides)?;
    let opts = VerifyOptions {
        q_max: a.q_max,
        coverage_samples: a.samples,
        crossalg_samples: a.crossalg_samples,
        seed: a.seed,
        ts_budget: a.budget,
    };
    let summary = verify_selected(&opts, &source, |id| a.only.is_empty() || a.only.iter().any(|o| o == id));
    let failed: Vec<&str> = summary.failed().map(|c| c.id.as_str()).collect();
    let failure = (!failed.is_empty()).then(|| format!("claims not reproduced: {}", failed.join(", ")));
    Ok(Outcome {
        command: "verify-all",
        text: Some(matrix_text(&summary)),
        body: serde_json::to_value(&summary).expect("reports serialize"),
        failure,
    })
}
