//! Browser bindings: fan pictures, lattice and growth summaries, and products in
//! the Koszul dual. The `*_json`/`*_svg` functions are plain Rust so they run
//! natively too; the exported wrappers only convert errors.

use dual_braid::dual::DualAlgebra;
use dual_braid::garside::DualMonoid;
use dual_braid::linalg::Q;
use dual_braid::svg::fan_svg;
use dual_braid::verify::Context;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn context(group: &str) -> Result<Context, String> {
    let spec = group.parse().map_err(|e: dual_braid::Error| e.to_string())?;
    Context::build(spec).map_err(|e| e.to_string())
}

fn number(x: &Q) -> Value {
    let s = x.to_string();
    s.parse::<i64>().map_or(Value::String(s), Value::from)
}

pub fn fan_picture(group: &str) -> Result<String, String> {
    let ctx = context(group)?;
    fan_svg(&ctx.group, &ctx.complex).map(|f| f.svg).map_err(|e| e.to_string())
}

/// Rank sizes, Möbius polynomial, f-vector and growth series up to `max_deg`.
pub fn lattice_summary(group: &str, max_deg: usize) -> Result<String, String> {
    let ctx = context(group)?;
    let dm = DualMonoid::new(&ctx.group, &ctx.nc);
    let growth: Vec<String> = dm.growth_series(max_deg.min(12)).iter().map(|x| x.to_string()).collect();
    Ok(json!({
        "group": ctx.group.spec.to_string(),
        "coxeter_element": ctx.group.element_name(ctx.group.coxeter_element()),
        "reflections": (0..ctx.group.num_reflections()).map(|t| ctx.group.reflection_name(t)).collect::<Vec<_>>(),
        "nc_size": ctx.nc.len(),
        "rank_sizes": ctx.nc.rank_sizes(),
        "moebius_polynomial": ctx.nc.moebius_polynomial(),
        "f_vector": ctx.complex.f_vector(),
        "growth": growth,
    })
    .to_string())
}

/// Product of reflections (names separated by spaces) in the face basis.
pub fn dual_product(group: &str, word: &str) -> Result<String, String> {
    let ctx = context(group)?;
    let g = &ctx.group;
    let letters = word
        .split_whitespace()
        .map(|n| g.reflection_by_name(n).ok_or_else(|| format!("unknown reflection {n}")))
        .collect::<Result<Vec<_>, _>>()?;
    let alg = DualAlgebra::new(g, &ctx.nc, &ctx.complex);
    let x = alg.rewrite(&letters).map_err(|e| e.to_string())?;
    let terms: Vec<Value> = x
        .terms()
        .map(|(f, c)| {
            let verts: Vec<String> = ctx.complex.face(f).verts.iter().map(|&t| g.reflection_name(t)).collect();
            json!({"face": verts, "coefficient": number(c)})
        })
        .collect();
    Ok(json!({"word": word.split_whitespace().collect::<Vec<_>>(), "terms": terms}).to_string())
}

#[wasm_bindgen(js_name = fanSvg)]
pub fn fan_svg_js(group: &str) -> Result<String, JsError> {
    fan_picture(group).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = latticeSummary)]
pub fn lattice_summary_js(group: &str, max_deg: usize) -> Result<String, JsError> {
    lattice_summary(group, max_deg).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = dualProduct)]
pub fn dual_product_js(group: &str, word: &str) -> Result<String, JsError> {
    dual_product(group, word).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fan() {
        let svg = fan_picture("B2").unwrap();
        assert!(svg.starts_with("<svg") && svg.matches("<path").count() == 3);
        assert!(fan_picture("A4").is_err());
        assert!(fan_picture("nonsense").is_err());
    }

    #[test]
    fn summary() {
        let v: Value = serde_json::from_str(&lattice_summary("A3", 4).unwrap()).unwrap();
        assert_eq!(v["moebius_polynomial"], json!([1, -6, 10, -5]));
        assert_eq!(v["growth"], json!(["1", "6", "26", "101", "376"]));
        assert_eq!(v["coxeter_element"], "(1,2,3,4)");
    }

    #[test]
    fn product() {
        let v: Value = serde_json::from_str(&dual_product("A3", "(1,2) (2,3)").unwrap()).unwrap();
        assert_eq!(v["terms"].as_array().unwrap().len(), 2);
        let v: Value = serde_json::from_str(&dual_product("A2", "(1,2) (1,2)").unwrap()).unwrap();
        assert_eq!(v["terms"], json!([]));
        assert!(dual_product("A2", "(1,5)").is_err());
    }
}
