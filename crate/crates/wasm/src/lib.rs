//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes and returns JSON strings. The plain functions are usable (and
//! tested) natively; the `#[wasm_bindgen]` wrappers only turn errors into JS strings.

use serde_json::{json, Value};
use slicekit::calculus::{pointwise_star_check, SliceRegularPoly};
use slicekit::repf::{evaluate_via_formula, representation_vector_standard};
use slicekit::{ImaginaryUnit, NPartPath, Quaternion, SliceFunctionModel};
use wasm_bindgen::prelude::*;

fn model_by_name(name: &str) -> Result<SliceFunctionModel, String> {
    match name {
        "sqrt" => Ok(SliceFunctionModel::Sqrt),
        "log" => Ok(SliceFunctionModel::Log),
        other => Err(format!("unknown model {other:?}")),
    }
}

/// Units from `[[x,y,z], ...]`; each direction is normalized.
fn parse_units(text: &str) -> Result<Vec<ImaginaryUnit>, String> {
    let raw: Vec<[f64; 3]> = serde_json::from_str(text).map_err(|e| e.to_string())?;
    raw.into_iter()
        .map(|[x, y, z]| ImaginaryUnit::normalized(x, y, z).map_err(|e| e.to_string()))
        .collect()
}

fn parse_poly(text: &str) -> Result<SliceRegularPoly, String> {
    let coeffs: Vec<Quaternion> = serde_json::from_str(text).map_err(|e| e.to_string())?;
    Ok(SliceRegularPoly::new(coeffs))
}

/// Continues `model` along the out-and-back loop around 0 with the two given units and
/// samples the value at `samples + 1` evenly spaced times.
pub fn loop_trace_json(model: &str, units: &str, samples: usize) -> Result<String, String> {
    let model = model_by_name(model)?;
    let units = parse_units(units)?;
    if units.len() != 2 {
        return Err(format!("the loop has 2 parts but {} units were given", units.len()));
    }
    let path = NPartPath::out_and_back();
    let rows = samples.max(1);
    let mut points = Vec::with_capacity(rows + 1);
    for k in 0..=rows {
        let t = k as f64 / rows as f64;
        let partial = path.truncate(t).map_err(|e| e.to_string())?;
        let z = path.eval(t).map_err(|e| e.to_string())?;
        let v = model
            .evaluate_lifted(&partial, &units[..partial.n()], 1.0, units[0])
            .map_err(|e| e.to_string())?;
        points.push(json!({ "t": t, "re": z.re, "im": z.im, "value": v }));
    }
    let end = model.evaluate_lifted(&path, &units, 1.0, units[0]).map_err(|e| e.to_string())?;
    Ok(json!({ "points": points, "value": end }).to_string())
}

/// Representation vector of `model` along the loop, and the value it predicts at
/// `units` next to the value from direct continuation.
pub fn representation_json(model: &str, units: &str) -> Result<String, String> {
    let model = model_by_name(model)?;
    let units = parse_units(units)?;
    let path = NPartPath::out_and_back();
    let g = representation_vector_standard(&model, &path, 1.0).map_err(|e| e.to_string())?;
    let predicted = evaluate_via_formula(&g, &units).map_err(|e| e.to_string())?;
    let direct = model
        .evaluate_lifted(&path, &units, 1.0, ImaginaryUnit::I)
        .map_err(|e| e.to_string())?;
    Ok(json!({
        "G": g,
        "predicted": predicted,
        "direct": direct,
        "deviation": (predicted - direct).norm(),
    })
    .to_string())
}

/// Star product of two coefficient lists `[[w,x,y,z], ...]`, evaluated at `at`.
pub fn star_product_json(left: &str, right: &str, at: &str) -> Result<String, String> {
    let f = parse_poly(left)?;
    let g = parse_poly(right)?;
    let q: Quaternion = serde_json::from_str(at).map_err(|e| e.to_string())?;
    let product = f.star(&g);
    let out: Value = json!({
        "coeffs": product.coeffs,
        "value": product.eval(q),
        "pointwise_dev": pointwise_star_check(&f, &g, q),
    });
    Ok(out.to_string())
}

#[wasm_bindgen]
pub fn loop_trace(model: &str, units: &str, samples: usize) -> Result<String, JsValue> {
    loop_trace_json(model, units, samples).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn representation(model: &str, units: &str) -> Result<String, JsValue> {
    representation_json(model, units).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn star_product(left: &str, right: &str, at: &str) -> Result<String, JsValue> {
    star_product_json(left, right, at).map_err(|e| JsValue::from_str(&e))
}
