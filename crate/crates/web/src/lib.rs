//! Browser demo bindings: three interactive views over the core crate.
//!
//! Everything crosses the boundary as strings — JSON state in, JSON or
//! SVG out — so the page stays a plain static file. State is exact on
//! the Rust side; the flow slider quantizes its factor to a rational so
//! every intermediate surface stays in the field.

use wasm_bindgen::prelude::*;

use flatrack::castle::{self, CastleSet};
use flatrack::hyp::{self, Quadrangulation, Side};
use flatrack::num::{parse_scalar, Rational, Scalar};
use flatrack::render;

fn err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Built-in quadrangulation examples for the staircase view.
#[wasm_bindgen]
pub fn quad_example(name: &str) -> Result<String, JsValue> {
    let q = match name {
        "golden" => hyp::golden_torus_example(),
        "genus2" => hyp::genus_two_example(),
        "h000" => hyp::h000_example(),
        _ => return Err(err("unknown example")),
    };
    serde_json::to_string(&q).map_err(err)
}

/// Current staircase-view state: SVG plus the list of well-slanted
/// staircases as clickable move buttons.
#[wasm_bindgen]
pub fn quad_view(state: &str) -> Result<String, JsValue> {
    let q: Quadrangulation = serde_json::from_str(state).map_err(err)?;
    let staircases = q.well_slanted_staircases().map_err(err)?;
    let moves: Vec<serde_json::Value> = staircases
        .iter()
        .map(|c| {
            serde_json::json!({
                "side": if c.side == Side::Left { "l" } else { "r" },
                "support": c.support.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "word": c.word(q.k()),
            })
        })
        .collect();
    Ok(serde_json::json!({
        "svg": render::render_quadrangulation(&q),
        "moves": moves,
        "area": q.area().to_f64(),
        "k": q.k(),
    })
    .to_string())
}

/// Applies the staircase move with the given side ("l"/"r") and 1-based
/// support; returns the new state JSON.
#[wasm_bindgen]
pub fn quad_move(state: &str, side: &str, support: &str) -> Result<String, JsValue> {
    let q: Quadrangulation = serde_json::from_str(state).map_err(err)?;
    let side = match side {
        "l" => Side::Left,
        "r" => Side::Right,
        _ => return Err(err("side must be l or r")),
    };
    let mut indices: Vec<usize> = support
        .split(',')
        .map(|p| p.trim().parse::<usize>().map(|i| i - 1))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    indices.sort_unstable();
    let c = hyp::Cycle {
        side,
        support: indices,
    };
    let next = hyp::staircase_move(&q, &c).map_err(err)?;
    serde_json::to_string(&next).map_err(err)
}

/// The worked 3-set over Q(sqrt 2) as the initial castle state.
#[wasm_bindgen]
pub fn castle_example() -> Result<String, JsValue> {
    serde_json::to_string(&castle::sqrt2_example()).map_err(err)
}

/// Renders a castle state after flowing by `e^t`, with `e^t` quantized
/// to thousandths so the flowed set stays exact.
#[wasm_bindgen]
pub fn castle_view(state: &str, t: f64) -> Result<String, JsValue> {
    let set: CastleSet = serde_json::from_str(state).map_err(err)?;
    let factor_mille = (t.exp() * 1000.0).round().max(1.0) as i64;
    let factor = Scalar::Rat(Rational::new(factor_mille, 1000));
    let flowed = castle::teich_flow_castle(&set, &factor);
    let widths: Vec<f64> = (0..flowed.k()).map(|i| flowed.width(i).to_f64()).collect();
    Ok(serde_json::json!({
        "svg": render::render_castle(&flowed),
        "widths": widths,
        "balanced": castle::is_balanced(&flowed).unwrap_or(false),
        "forest": flowed.forest.to_string(),
    })
    .to_string())
}

/// One Poincaré return of the geodesic flow; returns the new state and
/// the return time.
#[wasm_bindgen]
pub fn castle_return(state: &str) -> Result<String, JsValue> {
    let set: CastleSet = serde_json::from_str(state).map_err(err)?;
    let normalized =
        castle::section_normalize(&castle::balance(&set, 10_000).map_err(err)?).map_err(err)?;
    let ret = castle::first_return(&normalized, 10_000).map_err(err)?;
    Ok(serde_json::json!({
        "state": serde_json::to_value(&ret.next).map_err(err)?,
        "t": ret.t.value,
        "log_arg": ret.log_arg.to_string(),
        "moves": ret.moves.iter().map(|m| m.word(set.k())).collect::<Vec<_>>(),
    })
    .to_string())
}

/// Continued-fraction digits of an exact literal like "sqrt(6)-2".
#[wasm_bindgen]
pub fn cf_digits(value: &str, count: usize) -> Result<String, JsValue> {
    let x = parse_scalar(value).map_err(err)?;
    let expansion = flatrack::iet::cf_digits(&x, count.min(200)).map_err(err)?;
    Ok(serde_json::json!({
        "digits": expansion.digits,
        "terminated": expansion.terminated,
    })
    .to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_round_trip() {
        let state = quad_example("genus2").unwrap();
        let view: serde_json::Value = serde_json::from_str(&quad_view(&state).unwrap()).unwrap();
        assert!(!view["moves"].as_array().unwrap().is_empty());
        let mv = &view["moves"][0];
        let support = mv["support"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_u64().unwrap().to_string())
            .collect::<Vec<_>>()
            .join(",");
        let next = quad_move(&state, mv["side"].as_str().unwrap(), &support).unwrap();
        assert!(quad_view(&next).is_ok());
    }

    #[test]
    fn castle_demo_round_trip() {
        let state = castle_example().unwrap();
        let view: serde_json::Value =
            serde_json::from_str(&castle_view(&state, 0.0).unwrap()).unwrap();
        assert_eq!(view["balanced"], true);
        let ret: serde_json::Value = serde_json::from_str(&castle_return(&state).unwrap()).unwrap();
        assert!((ret["t"].as_f64().unwrap() - 2f64.ln() / 2.0).abs() < 1e-9);
    }

    #[test]
    fn cf_demo() {
        let out: serde_json::Value =
            serde_json::from_str(&cf_digits("sqrt(6)-2", 6).unwrap()).unwrap();
        assert_eq!(out["digits"].as_array().unwrap().len(), 6);
    }
}
