//! wasm-bindgen bindings behind `www/index.html`.
//!
//! Three interactive views: the decoded key table, the first sample points
//! of every orbit in a map's first visit, and plaintext vs ciphertext byte
//! histograms. Logic lives in plain functions so it can be tested natively;
//! the `#[wasm_bindgen]` wrappers only convert errors.

use rand::rngs::StdRng;
use rand::SeedableRng;
use wasm_bindgen::prelude::*;

use orbithop::analysis::{chi_square_uniform, histogram};
use orbithop::{generate_key, CipherSession, Generator, KeyMaterial, MapBank, EXAMPLE_KEY};

fn generator_for(key_text: &str) -> Result<Generator, String> {
    let key = KeyMaterial::from_hex(key_text).map_err(|e| e.to_string())?;
    Generator::new(&key, &MapBank::default()).map_err(|e| e.to_string())
}

fn json_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// JSON array with one object per map.
pub fn key_table_json(key_text: &str) -> Result<String, String> {
    let g = generator_for(key_text)?;
    let rows: Vec<String> = g
        .slots()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let p = &s.params;
            format!(
                r#"{{"map":{i},"spec":"{}","seed":"{}","offset":"{}","settles":{},"orbits":{},"samples":{}}}"#,
                json_escape(&s.spec.to_string()),
                p.seed_decimal(),
                p.offset_decimal(),
                p.settles,
                p.orbits,
                p.samples
            )
        })
        .collect();
    Ok(format!("[{}]", rows.join(",")))
}

/// First `points` samples of each orbit in the first visit of `map`,
/// flattened orbit-major (`orbits * points` values).
pub fn first_visit_orbits(key_text: &str, map: usize, points: usize) -> Result<Vec<f64>, String> {
    let g = generator_for(key_text)?;
    let slot = g
        .slots()
        .get(map)
        .ok_or_else(|| format!("key has only {} maps", g.slots().len()))?;
    let mut out = Vec::new();
    for (_, x0) in slot.next_visit_starts() {
        let samples = slot
            .spec
            .orbit_samples(x0, slot.params.settles, points)
            .map_err(|e| e.to_string())?;
        out.extend(samples);
    }
    Ok(out)
}

/// 256 plaintext counts, 256 ciphertext counts, plaintext chi-square,
/// ciphertext chi-square, critical value (NaN when the text is too short).
pub fn histogram_pair(key_text: &str, plaintext: &[u8]) -> Result<Vec<f64>, String> {
    let key = KeyMaterial::from_hex(key_text).map_err(|e| e.to_string())?;
    let ct = CipherSession::new(&key, &MapBank::default())
        .and_then(|mut s| s.apply(plaintext))
        .map_err(|e| e.to_string())?;
    let (hp, hc) = (histogram(plaintext), histogram(&ct));
    let mut out: Vec<f64> = hp.counts().iter().map(|&c| c as f64).collect();
    out.extend(hc.counts().iter().map(|&c| c as f64));
    let (p, c) = (chi_square_uniform(&hp), chi_square_uniform(&hc));
    out.push(p.as_ref().map_or(f64::NAN, |r| r.chi_square));
    out.push(c.as_ref().map_or(f64::NAN, |r| r.chi_square));
    out.push(
        c.as_ref()
            .or(p.as_ref())
            .map_or(f64::NAN, |r| r.critical_value_p001),
    );
    Ok(out)
}

pub fn random_key_text(maps: usize, seed: u64) -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(seed);
    generate_key(maps, &mut rng)
        .map(|k| k.to_string())
        .map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn example_key() -> String {
    EXAMPLE_KEY.to_string()
}

#[wasm_bindgen]
pub fn key_table(key_text: &str) -> Result<String, JsValue> {
    key_table_json(key_text).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn orbit_points(key_text: &str, map: usize, points: usize) -> Result<Vec<f64>, JsValue> {
    first_visit_orbits(key_text, map, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn histograms(key_text: &str, plaintext: &[u8]) -> Result<Vec<f64>, JsValue> {
    histogram_pair(key_text, plaintext).map_err(|e| JsValue::from_str(&e))
}

/// `seed` should come from `crypto.getRandomValues`.
#[wasm_bindgen]
pub fn random_key(maps: usize, seed: u64) -> Result<String, JsValue> {
    random_key_text(maps, seed).map_err(|e| JsValue::from_str(&e))
}
