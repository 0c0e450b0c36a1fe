use finsite_web::{classify, sheafify, topologies};
use serde_json::Value;

const ARROW_J2: &str = include_str!("../../../sites/arrow-j2.site.json");
const SQUARE: &str = include_str!("../../../sites/square.site.json");

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn classify_returns_report() {
    let v = parse(&classify(ARROW_J2));
    assert_eq!(v["site"], "arrow-j2");
    assert_eq!(v["rigid"]["holds"], true);
}

#[test]
fn topologies_lists_lattice() {
    let v = parse(&topologies(ARROW_J2));
    assert_eq!(v["count"], 4);
    assert_eq!(v["topologies"].as_array().unwrap().len(), 4);
    assert!(v["site_topology"].is_u64());
    assert_eq!(parse(&topologies(SQUARE))["count"], 16);
}

#[test]
fn sheafify_named_presheaf() {
    let v = parse(&sheafify(ARROW_J2, "two-to-three"));
    assert_eq!(v["input_is_sheaf"], false);
    assert_eq!(v["sheaf"]["values"]["b"], 3);
}

#[test]
fn errors_are_reported_as_json() {
    assert!(parse(&classify("{")).get("error").is_some());
    assert!(parse(&sheafify(ARROW_J2, "missing")).get("error").is_some());
}
