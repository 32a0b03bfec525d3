//! Browser bindings: a network figure at one phase, the phase scan and the
//! chamber of `t`, all for the normalized degree-three family.

use cubicnet::degeneration::{find_saddles, find_tripods, scan_phases};
use cubicnet::io::{to_json, ScanDump};
use cubicnet::network::{build, Caps};
use cubicnet::render::{render_svg, Frame};
use cubicnet::spectralcore::compute_spectral_core;
use cubicnet::trajectory::Limits;
use cubicnet::walls::classify_chamber;
use cubicnet::{CubicDifferential, Phase, Tolerances, C64};
use wasm_bindgen::prelude::*;

fn err(e: cubicnet::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// SVG of the network of `α x(x−1)/(x−t)⁹ dx³` at phase `theta`, with the
/// core shaded and any degeneration at that phase thickened.
#[wasm_bindgen]
pub fn network_svg(t_re: f64, t_im: f64, a_re: f64, a_im: f64, theta: f64, original_frame: bool) -> Result<String, JsValue> {
    let tol = Tolerances::default();
    let phi = CubicDifferential::normalized(C64::new(a_re, a_im), C64::new(t_re, t_im)).map_err(err)?;
    let limits = Limits::for_differential(&phi, &tol);
    let net = build(&phi, theta, &Caps::default(), &limits, &tol);
    let core = compute_spectral_core(&net).ok();
    let near = |p: f64| Phase::new(p).cyclic_distance(Phase::new(theta)) < 1e-3;
    let saddles: Vec<_> = find_saddles(&phi, &limits, &tol).map_err(err)?.into_iter().filter(|s| near(s.phase)).collect();
    let mut paths: Vec<Vec<C64>> = saddles.iter().map(|s| s.path.clone()).collect();
    for t in find_tripods(&phi, &saddles, &limits, &tol).map_err(err)? {
        if near(t.phase) {
            paths.extend(t.zeros.iter().map(|&z| vec![phi.zero_chart(z), t.fermat_point]));
        }
    }
    let frame = if original_frame { Frame::Original } else { Frame::Chart };
    Ok(render_svg(&net, core.as_ref(), &paths, frame))
}

/// Special phases and core types over one period, as JSON.
#[wasm_bindgen]
pub fn scan_json(t_re: f64, t_im: f64, a_re: f64, a_im: f64) -> Result<String, JsValue> {
    let tol = Tolerances::default();
    let phi = CubicDifferential::normalized(C64::new(a_re, a_im), C64::new(t_re, t_im)).map_err(err)?;
    let scan = scan_phases(&phi, 90, &tol).map_err(err)?;
    Ok(to_json(&ScanDump::from(&scan)))
}

/// Chamber report for `t`, as JSON.
#[wasm_bindgen]
pub fn classify(t_re: f64, t_im: f64) -> Result<String, JsValue> {
    let r = classify_chamber(C64::new(t_re, t_im), &Tolerances::default()).map_err(err)?;
    Ok(to_json(&r))
}
