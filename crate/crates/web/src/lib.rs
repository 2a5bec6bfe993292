//! WebAssembly bindings for the browser demo in `www/`.

use wasm_bindgen::prelude::*;

use confsym::ckt::{expected_dimension, solve_conformal_killing};
use confsym::cli::{emit_report, parse_polynomial, parse_taskfile, run_tasks, yamabe_weight, Format};
use confsym::symmetry::{build_first_order, check_intertwine, find_delta};
use confsym::tensor::PolyField;
use confsym::weyl::laplacian;

/// Solves for conformal Killing tensors and reports the basis size.
#[wasm_bindgen]
pub fn ckt_count(n: usize, valence: usize, max_degree: u32) -> Result<String, JsError> {
    if !(2..=5).contains(&n) || !(1..=2).contains(&valence) || max_degree > 5 {
        return Err(JsError::new("keep 2 <= n <= 5, valence 1 or 2, max degree <= 5"));
    }
    let basis = solve_conformal_killing(n, valence, max_degree)?;
    let expected = match expected_dimension(n, valence) {
        Ok(d) => d.to_string(),
        Err(_) => "n/a".into(),
    };
    Ok(format!("{} basis elements (expected {expected})", basis.len()))
}

/// Builds the first-order operator of a vector field, one polynomial per
/// line, and searches for a companion intertwining the Laplacian.
#[wasm_bindgen]
pub fn first_order_symmetry(components: &str) -> Result<String, JsError> {
    let lines: Vec<&str> = components.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let n = lines.len();
    if !(2..=5).contains(&n) {
        return Err(JsError::new("enter between 2 and 5 components, one per line"));
    }
    let comps = lines
        .iter()
        .map(|l| parse_polynomial(l, n))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| JsError::new(&e.to_string()))?;
    let v = PolyField::vector(comps, yamabe_weight(n));
    let d = build_first_order(&v, n, &yamabe_weight(n))?;
    let l = laplacian(n);
    Ok(match find_delta(&l, &d, d.order(), d.coefficient_degree())? {
        Some(delta) if check_intertwine(&l, &d, &delta)?.verified() => {
            format!("D = {d}\ndelta = {delta}\nresidual: zero")
        }
        _ => format!("D = {d}\nno companion: not a symmetry"),
    })
}

/// Runs a task file and returns the text report.
#[wasm_bindgen]
pub fn run_taskfile(text: &str) -> Result<String, JsError> {
    let tf = parse_taskfile(text).map_err(|e| JsError::new(&e.to_string()))?;
    Ok(emit_report(&run_tasks(&tf), Format::Text))
}
