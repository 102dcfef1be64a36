//! WebAssembly bindings for the demo page in `www/`. Every export takes
//! plain numbers or strings and returns a JSON string.

use wasm_bindgen::prelude::*;

use unitgraph::cayley::{spectrum_by_classes, CayleyGraphSpec, Connection};
use unitgraph::decomp::{sum_of_sl_zero, sum_of_two_sl, sum_of_two_units, verify_decomposition};
use unitgraph::spectra::kloosterman_table;
use unitgraph::{Field, Matrix};

/// Largest ring the page will enumerate; keeps the tab responsive.
const MAX_VERTICES: u64 = 1 << 16;

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

pub fn kloosterman_json(q: u32) -> Result<String, String> {
    let f = Field::with_order(q).map_err(|e| e.to_string())?;
    to_json(&kloosterman_table(&f))
}

pub fn spectrum_json(q: u32, n: usize, connection: &str) -> Result<String, String> {
    let f = Field::with_order(q).map_err(|e| e.to_string())?;
    let c: Connection = connection.parse().map_err(|e: unitgraph::Error| e.to_string())?;
    let spec = CayleyGraphSpec::new(n, &f, c).map_err(|e| e.to_string())?;
    let v = spec.vertex_count().map_err(|e| e.to_string())?;
    if v > MAX_VERTICES {
        return Err(format!("{v} vertices is more than the demo enumerates"));
    }
    to_json(&spectrum_by_classes(&spec).map_err(|e| e.to_string())?)
}

pub fn decompose_json(literal: &str, mode: &str) -> Result<String, String> {
    let a = Matrix::from_literal(literal).map_err(|e| e.to_string())?;
    let w = match mode {
        "units" => sum_of_two_units(&a),
        "sl" if a.is_zero() && a.n() >= 2 => sum_of_sl_zero(a.n(), a.field()),
        "sl" => sum_of_two_sl(&a),
        _ => return Err(format!("unknown mode `{mode}`; use units or sl")),
    }
    .map_err(|e| e.to_string())?;
    let mut v = serde_json::to_value(&w).map_err(|e| e.to_string())?;
    v["verified"] = verify_decomposition(&w).into();
    Ok(v.to_string())
}

#[wasm_bindgen]
pub fn kloosterman(q: u32) -> Result<String, JsValue> {
    kloosterman_json(q).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn spectrum(q: u32, n: usize, connection: &str) -> Result<String, JsValue> {
    spectrum_json(q, n, connection).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn decompose(matrix: &str, mode: &str) -> Result<String, JsValue> {
    decompose_json(matrix, mode).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kloosterman_rows() {
        let v: serde_json::Value = serde_json::from_str(&kloosterman_json(3).unwrap()).unwrap();
        assert_eq!(v[0]["K"], -1.0);
        assert!(kloosterman_json(6).is_err());
    }

    #[test]
    fn spectrum_report() {
        let v: serde_json::Value = serde_json::from_str(&spectrum_json(2, 2, "gl").unwrap()).unwrap();
        assert_eq!(v["classes"].as_array().unwrap().len(), 3);
        assert!(spectrum_json(9, 3, "gl").is_err());
        assert!(spectrum_json(3, 2, "nope").is_err());
    }

    #[test]
    fn decompositions() {
        let v: serde_json::Value = serde_json::from_str(&decompose_json("2;3;1,2,0,1", "sl").unwrap()).unwrap();
        assert_eq!(v["verified"], true);
        assert!(decompose_json("1;2;1", "units").is_err());
        assert!(decompose_json("2;2;1,0,0,1", "other").is_err());
    }
}
