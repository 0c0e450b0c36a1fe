//! Browser bindings. Each entry point takes a site file as JSON text and
//! returns JSON text; failures come back as `{"error": ...}`.

use finsite::classify::classify_report;
use finsite::io::{parse_site_str, PresheafBlock, TopologyBlock};
use finsite::lattice::{enumerate_topologies, max_assignments};
use finsite::sheaf::{canonical_topology, is_sheaf, sheafify as sheafify_presheaf};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

fn render(result: Result<Value, String>) -> String {
    let value = result.unwrap_or_else(|e| json!({ "error": e }));
    serde_json::to_string_pretty(&value).expect("values serialize")
}

pub fn classify_value(site_json: &str) -> Result<Value, String> {
    let site = parse_site_str(site_json).map_err(|e| e.to_string())?;
    let report =
        classify_report(&site.name, &site.category, &site.topology).map_err(|e| e.to_string())?;
    serde_json::to_value(report).map_err(|e| e.to_string())
}

pub fn topologies_value(site_json: &str) -> Result<Value, String> {
    let site = parse_site_str(site_json).map_err(|e| e.to_string())?;
    let cat = &site.category;
    let lattice = enumerate_topologies(cat, max_assignments()).map_err(|e| e.to_string())?;
    let topologies: Vec<Value> = lattice
        .elements()
        .iter()
        .map(|j| serde_json::to_value(TopologyBlock::explicit(cat, j)).expect("blocks serialize"))
        .collect();
    Ok(json!({
        "count": lattice.len(),
        "site_topology": lattice.index_of(&site.topology),
        "canonical": canonical_topology(cat, &lattice),
        "topologies": topologies,
    }))
}

pub fn sheafify_value(site_json: &str, presheaf: &str) -> Result<Value, String> {
    let site = parse_site_str(site_json).map_err(|e| e.to_string())?;
    let cat = &site.category;
    let p = site.presheaf(presheaf).map_err(|e| e.to_string())?;
    let a = sheafify_presheaf(cat, &site.topology, p);
    Ok(json!({
        "input_is_sheaf": is_sheaf(cat, &site.topology, p).is_ok(),
        "input_sizes": p.sizes(),
        "sheaf": PresheafBlock::from_presheaf(cat, presheaf, &a.sheaf),
        "unit_is_iso": a.unit.is_bijective(&a.sheaf),
    }))
}

#[wasm_bindgen]
pub fn classify(site_json: &str) -> String {
    render(classify_value(site_json))
}

#[wasm_bindgen]
pub fn topologies(site_json: &str) -> String {
    render(topologies_value(site_json))
}

#[wasm_bindgen]
pub fn sheafify(site_json: &str, presheaf: &str) -> String {
    render(sheafify_value(site_json, presheaf))
}
