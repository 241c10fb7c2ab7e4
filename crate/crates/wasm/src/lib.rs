//! Browser bindings: a phase portrait of a Blaschke product, Takenaka–Malmquist
//! functions on the unit circle and the two gallery operators.
//!
//! Zeros cross the boundary as a flat `[re₀, im₀, re₁, im₁, …]` array.

use num_complex::Complex64;
use subhardy::cli::{execute, Command, RunConfig};
use subhardy::{BlaschkeProduct, TmIndex};
use wasm_bindgen::prelude::*;

fn product(zeros: &[f64]) -> Result<BlaschkeProduct, String> {
    if zeros.len() % 2 != 0 {
        return Err("zeros must come as re/im pairs".into());
    }
    let zs = zeros
        .chunks(2)
        .map(|p| Complex64::new(p[0], p[1]))
        .collect();
    BlaschkeProduct::new(zs).map_err(|e| e.to_string())
}

/// HSV with full saturation to RGB, `h` in turns.
fn hue_to_rgb(h: f64, v: f64) -> [u8; 3] {
    let h6 = h.rem_euclid(1.0) * 6.0;
    let x = 1.0 - (h6 % 2.0 - 1.0).abs();
    let (r, g, b) = match h6 as u32 {
        0 => (1.0, x, 0.0),
        1 => (x, 1.0, 0.0),
        2 => (0.0, 1.0, x),
        3 => (0.0, x, 1.0),
        4 => (x, 0.0, 1.0),
        _ => (1.0, 0.0, x),
    };
    [
        (r * v * 255.0) as u8,
        (g * v * 255.0) as u8,
        (b * v * 255.0) as u8,
    ]
}

/// RGBA pixels of `size × size`: hue is `arg B(z)`, brightness rises with
/// `|B(z)|`, and points outside the disc are transparent.
pub fn phase_portrait_rgba(zeros: &[f64], size: usize) -> Result<Vec<u8>, String> {
    let b = product(zeros)?;
    let mut out = vec![0u8; size * size * 4];
    for row in 0..size {
        for col in 0..size {
            let x = 2.0 * (col as f64 + 0.5) / size as f64 - 1.0;
            let y = 1.0 - 2.0 * (row as f64 + 0.5) / size as f64;
            let z = Complex64::new(x, y);
            if z.norm() > 1.0 {
                continue;
            }
            let w = b.evaluate(z).map_err(|e| e.to_string())?;
            let hue = w.arg() / std::f64::consts::TAU;
            let level = 0.35 + 0.65 * w.norm().powf(0.3);
            let at = (row * size + col) * 4;
            out[at..at + 3].copy_from_slice(&hue_to_rgb(hue, level));
            out[at + 3] = 255;
        }
    }
    Ok(out)
}

/// `e_{jm}(e^{iθ})` at `samples` equally spaced angles, interleaved as
/// `[re, im, …]`.
pub fn tm_boundary_values(
    zeros: &[f64],
    j: usize,
    m: usize,
    samples: usize,
) -> Result<Vec<f64>, String> {
    let b = product(zeros)?;
    let idx = TmIndex::new(j, m);
    let mut out = Vec::with_capacity(2 * samples);
    for k in 0..samples {
        let theta = std::f64::consts::TAU * k as f64 / samples as f64;
        let w = b
            .tm_evaluate(idx, Complex64::from_polar(1.0, theta))
            .map_err(|e| e.to_string())?;
        out.extend([w.re, w.im]);
    }
    Ok(out)
}

/// Runs a report command on JSON input; `gallery` ignores the input.
pub fn report_json(command: &str, input: &str, tol: f64) -> Result<String, String> {
    let command: Command = command
        .parse()
        .map_err(|e: subhardy::cli::CliError| e.to_string())?;
    let config = RunConfig {
        tol,
        ..RunConfig::new(command)
    };
    let input = (!input.trim().is_empty()).then_some(input);
    execute(&config, input)
        .map(|r| r.render())
        .map_err(|e| e.to_string())
}

/// The gallery report at lattice size `n` and weighted-shift dimension `d`.
pub fn gallery_json(n: i64, d: usize, tol: f64) -> Result<String, String> {
    let config = RunConfig {
        tol,
        n,
        d,
        ..RunConfig::new(Command::Gallery)
    };
    execute(&config, None)
        .map(|r| r.render())
        .map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = phasePortrait)]
pub fn phase_portrait(zeros: &[f64], size: usize) -> Result<Vec<u8>, JsError> {
    phase_portrait_rgba(zeros, size).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = tmBoundary)]
pub fn tm_boundary(zeros: &[f64], j: usize, m: usize, samples: usize) -> Result<Vec<f64>, JsError> {
    tm_boundary_values(zeros, j, m, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = runReport)]
pub fn run_report(command: &str, input: &str, tol: f64) -> Result<String, JsError> {
    report_json(command, input, tol).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = galleryReport)]
pub fn gallery_report(n: i32, d: usize, tol: f64) -> Result<String, JsError> {
    gallery_json(n.into(), d, tol).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn portrait_is_opaque_inside_only() {
        let px = phase_portrait_rgba(&[0.0, 0.0, 0.5, 0.0], 16).unwrap();
        assert_eq!(px.len(), 16 * 16 * 4);
        assert_eq!(px[3], 0);
        let centre = (8 * 16 + 8) * 4;
        assert_eq!(px[centre + 3], 255);
        assert!(phase_portrait_rgba(&[0.5, 0.0], 4).is_err());
        assert!(phase_portrait_rgba(&[0.0], 4).is_err());
    }

    #[test]
    fn boundary_values_are_unimodular() {
        let v = tm_boundary_values(&[0.0, 0.0, 0.3, 0.4], 0, 2, 32).unwrap();
        for p in v.chunks(2) {
            assert!((p[0].hypot(p[1]) - 1.0).abs() < 1e-12);
        }
        assert!(tm_boundary_values(&[0.0, 0.0], 1, 0, 4).is_err());
    }

    #[test]
    fn gallery_report_separates() {
        let text = report_json("gallery", "", 1e-9).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["passes"], true);
        assert!(report_json("nope", "", 1e-9).is_err());
        let small: serde_json::Value =
            serde_json::from_str(&gallery_json(6, 16, 1e-9).unwrap()).unwrap();
        assert_eq!(small["config"]["N"], 6);
        assert_eq!(small["passes"], true);
        let bad: serde_json::Value =
            serde_json::from_str(&gallery_json(0, 16, 1e-9).unwrap()).unwrap();
        assert_eq!(bad["passes"], false);
        assert_eq!(bad["result"]["error_kind"], "INVALID_INPUT");
    }
}
