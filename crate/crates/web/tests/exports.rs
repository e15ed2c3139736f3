use serde_json::Value;
use trisect_web::{census_json, coverage_json, spread_json};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn spread_report_for_a_catalog_form() {
    let v = parse(spread_json("spread_odd", "", 3, Some(2)).unwrap());
    assert_eq!(v["report"]["line_count"], 91);
    assert_eq!(v["report"]["is_normal"], true);
    let v = parse(spread_json("", "f123+f156+f246+f345", 2, None).unwrap());
    assert_eq!(v["report"]["is_partition"], false);
}

#[test]
fn coverage_map_lists_every_point() {
    let v = parse(coverage_json("fano7", "", 2, None).unwrap());
    let counts = v["lines_through"].as_array().unwrap();
    assert_eq!(counts.len(), 127);
    assert_eq!(v["points"].as_array().unwrap().len(), 127);
    assert_eq!(counts.iter().filter(|c| c.as_u64() == Some(0)).count(), 64);
}

#[test]
fn errors_are_messages() {
    assert!(spread_json("nope", "", 2, None).unwrap_err().contains("nope"));
    assert!(spread_json("spread_odd", "", 3, Some(1)).unwrap_err().contains("non-square"));
    assert!(coverage_json("", "f12", 2, None).is_err());
    assert!(coverage_json("ts10", "", 4, None).unwrap_err().contains("points"));
}

#[test]
fn census_table_has_every_row() {
    let v = parse(census_json(&[2, 3]).unwrap());
    assert_eq!(v["ratios"].as_array().unwrap().len(), 7);
    assert_eq!(v["ratios"][0]["ratio"]["denominator"], "9765");
    assert_eq!(v["fano_unions"][0]["classification"]["kind"], "HYPERPLANE");
    assert_eq!(v["fano_unions"][1]["classification"]["kind"], "QUADRIC");
}
