//! The three operations behind `www/index.html`. Each takes plain strings
//! and numbers, and returns JSON text for the page to parse.

pub mod demo;

use wasm_bindgen::prelude::*;

/// `{"svg", "homothets", "a_wedges", "b_wedges", "property1"}` for `T(k,l)`.
#[wasm_bindgen]
pub fn build_configuration(polygon: &str, k: u32, l: u32, labels: bool) -> Result<String, JsValue> {
    demo::build_configuration(polygon, k as usize, l as usize, labels).map_err(|e| JsValue::from_str(&e))
}

/// `{"svg", "inflated", "points", "attempts", "nondecomposable"}` for the dual of `T(m,m)`.
#[wasm_bindgen]
pub fn dual_scene(polygon: &str, m: u32, epsilon: &str, labels: bool) -> Result<String, JsValue> {
    demo::dual_scene(polygon, m as usize, epsilon, labels).map_err(|e| JsValue::from_str(&e))
}

/// Both sides of the containment/intersection equivalence for one query.
#[wasm_bindgen]
pub fn query(polygon: &str, alpha: &str, beta: &str, p: &str, q: &str) -> Result<String, JsValue> {
    demo::query(polygon, alpha, beta, p, q).map_err(|e| JsValue::from_str(&e))
}
