//! WebAssembly bindings behind `www/index.html`. Every export returns a JSON
//! string; errors come back as thrown strings.

use serde::Serialize;
use serde_json::json;
use trisect::census::{orbit_ratio, REFERENCE_RATIOS};
use trisect::forms::{parse_form, Family, TriForm};
use trisect::geometry::{enum_points, is_normal_spread, kernel_dims, lines_through, singular_lines, spread_check};
use trisect::gf::GaloisField;
use trisect::hypersurface::classify_union;
use wasm_bindgen::prelude::*;

/// Largest projective space the page will enumerate.
pub const MAX_POINTS: usize = 50_000;

fn form(catalog: &str, text: &str, q: u32, mu: Option<u32>) -> Result<TriForm, String> {
    let field = GaloisField::from_order(q as u64).map_err(|e| e.to_string())?;
    let t = if catalog.is_empty() {
        parse_form(text, &field, None, mu).map_err(|e| e.to_string())?
    } else {
        let family: Family = catalog.parse().map_err(|e: trisect::forms::FormError| e.to_string())?;
        family.build(&field, mu).map_err(|e| e.to_string())?
    };
    let space = enum_points(t.field(), t.n()).map_err(|e| e.to_string())?;
    if space.count() > MAX_POINTS {
        return Err(format!("PG({}, {q}) has {} points; the page stops at {MAX_POINTS}", t.n() - 1, space.count()));
    }
    Ok(t)
}

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string(v).expect("reports serialize")
}

pub fn spread_json(catalog: &str, text: &str, q: u32, mu: Option<u32>) -> Result<String, String> {
    let t = form(catalog, text, q, mu)?;
    let space = enum_points(t.field(), t.n()).map_err(|e| e.to_string())?;
    let lines = singular_lines(&t).map_err(|e| e.to_string())?;
    let mut report = spread_check(&lines, &space).map_err(|e| e.to_string())?;
    if report.is_partition {
        report.is_normal = Some(is_normal_spread(&lines, &space).map_err(|e| e.to_string())?);
    }
    Ok(to_json(&json!({ "form": t.to_text(), "n": t.n(), "q": q, "report": report })))
}

/// Lines through each point, with the point's coordinates, in enumeration order.
pub fn coverage_json(catalog: &str, text: &str, q: u32, mu: Option<u32>) -> Result<String, String> {
    let t = form(catalog, text, q, mu)?;
    let space = enum_points(t.field(), t.n()).map_err(|e| e.to_string())?;
    let dims = kernel_dims(&t).map_err(|e| e.to_string())?;
    let counts: Vec<u64> = dims.iter().map(|&d| lines_through(d as usize, q as u64)).collect();
    let points: Vec<Vec<u32>> = (0..space.count()).map(|i| space.coords(i)).collect();
    Ok(to_json(&json!({ "form": t.to_text(), "n": t.n(), "q": q, "points": points, "lines_through": counts })))
}

/// The orbit-ratio table for q = 2 and the Fano union for small q.
pub fn census_json(fano_q: &[u32]) -> Result<String, String> {
    let mut rows = Vec::new();
    for &(n, published) in &REFERENCE_RATIOS {
        let r = orbit_ratio(n, 2).map_err(|e| e.to_string())?;
        rows.push(json!({ "n": n, "ratio": r, "published": published }));
    }
    let mut unions = Vec::new();
    for &q in fano_q {
        let t = form("fano7", "", q, None)?;
        let c = classify_union(&t).map_err(|e| e.to_string())?;
        unions.push(json!({ "q": q, "classification": c }));
    }
    Ok(to_json(&json!({ "ratios": rows, "fano_unions": unions })))
}

#[wasm_bindgen]
pub fn analyze_spread(catalog: &str, text: &str, q: u32, mu: Option<u32>) -> Result<String, JsValue> {
    spread_json(catalog, text, q, mu).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn coverage_map(catalog: &str, text: &str, q: u32, mu: Option<u32>) -> Result<String, JsValue> {
    coverage_json(catalog, text, q, mu).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn census_table() -> Result<String, JsValue> {
    census_json(&[2, 3, 4, 5]).map_err(JsValue::from)
}
