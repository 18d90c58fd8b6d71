//! WebAssembly bindings for the browser demo in `www/`. Every export takes
//! plain strings and returns JSON text; errors surface as JS exceptions.

use mindisc::blowup::run_script;
use mindisc::cdv::{certify, verify_certificate};
use mindisc::initial::{theorem1_bound, weighted_order_and_initial, WeightAssignment};
use mindisc::report::Certificate;
use mindisc::{parse, render, Polynomial, Ring};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn load(ring: &str, expr: &str) -> Result<Polynomial, String> {
    let ring = Ring::parse(ring.trim()).map_err(|e| format!("ring: {e}"))?;
    parse(&ring, expr).map_err(|e| e.to_string())
}

/// Weighted initial form of `expr` and, when some factor of `phi` has
/// multiplicity one, the bound `d`. `weights` is comma separated and `t`
/// names the distinguished variable (empty for the last one).
pub fn bound_json(ring: &str, expr: &str, weights: &str, t: &str) -> Result<String, String> {
    let g = load(ring, expr)?;
    let weights = weights
        .split(',')
        .map(|w| w.trim().parse::<u32>().map_err(|_| format!("bad weight `{}`", w.trim())))
        .collect::<Result<Vec<_>, _>>()?;
    let t_index = match t.trim() {
        "" => g.ring().arity() - 1,
        name => g.ring().index_of(name).ok_or_else(|| format!("no variable `{name}`"))?,
    };
    let w = WeightAssignment::new(t_index, weights);
    let init = weighted_order_and_initial(&g, &w).map_err(|e| e.to_string())?;
    let bound = theorem1_bound(&g, &w).map_err(|e| e.to_string())?;
    Ok(json!({
        "A": init.order,
        "phi": render(&init.phi),
        "f1": bound.as_ref().map(|b| render(&b.f1)),
        "d": bound.as_ref().map(|b| b.d),
    })
    .to_string())
}

/// Certificate for a cDV input `f(y1,y2,y3) + t*g`, replayed before it is
/// returned: `{"text": ..., "json": ...}`.
pub fn cdv_json(ring: &str, expr: &str) -> Result<String, String> {
    let g = load(ring, expr)?;
    let c = certify(&g).map_err(|e| e.to_string())?;
    verify_certificate(&g, &c)?;
    let cert = Certificate::Cdv(c);
    Ok(json!({ "text": cert.to_text(), "json": cert.to_json() }).to_string())
}

/// Runs a blow-up script and returns its events.
pub fn blowup_json(script: &str) -> Result<String, String> {
    let run = run_script(script).map_err(|e| e.to_string())?;
    let lines: Vec<String> = run.events.iter().map(ToString::to_string).collect();
    Ok(json!({ "events": run.events, "lines": lines }).to_string())
}

#[wasm_bindgen]
pub fn bound(ring: &str, expr: &str, weights: &str, t: &str) -> Result<String, JsError> {
    bound_json(ring, expr, weights, t).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn cdv(ring: &str, expr: &str) -> Result<String, JsError> {
    cdv_json(ring, expr).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn blowup(script: &str) -> Result<String, JsError> {
    blowup_json(script).map_err(|e| JsError::new(&e))
}
