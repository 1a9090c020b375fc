use orbithop_wasm::{first_visit_orbits, histogram_pair, key_table_json, random_key_text};

#[test]
fn random_key_drives_every_view() {
    for maps in 2..=8 {
        let key = random_key_text(maps, 7 + maps as u64).unwrap();
        let table = key_table_json(&key).unwrap();
        assert_eq!(table.matches(r#""map":"#).count(), maps);
        for map in 0..maps {
            let pts = first_visit_orbits(&key, map, 3).unwrap();
            assert_eq!(pts.len() % 3, 0);
            assert!(pts.iter().all(|v| (-1.0..=1.0).contains(v)));
        }
    }
}

#[test]
fn short_text_has_no_chi_square() {
    let key = random_key_text(4, 1).unwrap();
    let out = histogram_pair(&key, b"short").unwrap();
    assert_eq!(out.len(), 515);
    assert!(out[512..].iter().all(|v| v.is_nan()));
}
