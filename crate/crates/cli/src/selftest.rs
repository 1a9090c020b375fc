//! Golden checks against the worked eight-map example.

use std::fmt;

use orbithop::chaos_maps::MapSpec;
use orbithop::{
    apply_keystream, extract_byte, logistic4_conjugate, Generator, KeyMaterial, MapBank,
    EXAMPLE_KEY,
};

pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

/// (seed, offset, settles, orbits, samples) per map. Map #5 follows the
/// uniform decode rule.
const TABLE: [(&str, &str, u32, u32, u32); 8] = [
    ("0.0012391499", "0.00001499", 135, 11, 11),
    ("0.002010722", "0.000061335", 53, 15, 4),
    ("0.009073003", "0.000033977", 259, 7, 8),
    ("0.003611367", "0.00002287", 125, 12, 15),
    ("0.0015828465", "0.000024295", 166, 11, 14),
    ("0.0015120372", "0.000008704", 215, 6, 14),
    ("0.001182337", "0.000036734", 241, 13, 6),
    ("0.003265379", "0.000039678", 114, 19, 7),
];

const FINGERPRINT_HEX: &str =
    "c5bc375e3b24070973d5abfd55bb3f38b6b3185ed93f5799a047517d93d2eaa835b3ff371b4807d164a5069a7d6d8e4355ff763ac4e402547a100f11a564b030";

fn example_generator() -> Result<Generator, String> {
    let key: KeyMaterial = EXAMPLE_KEY.parse().map_err(|e| format!("{e}"))?;
    Generator::new(&key, &MapBank::default()).map_err(|e| e.to_string())
}

fn check(name: &'static str, f: impl FnOnce() -> Result<String, String>) -> CheckResult {
    match f() {
        Ok(detail) => CheckResult {
            name,
            passed: true,
            detail,
        },
        Err(detail) => CheckResult {
            name,
            passed: false,
            detail,
        },
    }
}

pub fn run_all() -> Vec<CheckResult> {
    vec![
        check("key decode", || {
            let g = example_generator()?;
            if g.slots().len() != 8 {
                return Err(format!("{} maps, expected 8", g.slots().len()));
            }
            for (i, (slot, want)) in g.slots().iter().zip(TABLE).enumerate() {
                let p = &slot.params;
                let got = (
                    p.seed_decimal(),
                    p.offset_decimal(),
                    p.settles,
                    p.orbits,
                    p.samples,
                );
                if (got.0.as_str(), got.1.as_str(), got.2, got.3, got.4) != want {
                    return Err(format!("Map #{i}: got {got:?}, expected {want:?}"));
                }
            }
            Ok("8 maps, parameter table matches".into())
        }),
        check("byte extraction", || {
            let got = (extract_byte(0.33461), extract_byte(0.9442345679457));
            if got == (8, 97) {
                Ok("0.33461 -> 8, 0.9442345679457 -> 97".into())
            } else {
                Err(format!("got {got:?}, expected (8, 97)"))
            }
        }),
        check("conjugacy", || {
            let logistic4 = MapSpec::Logistic { r: 4.0 };
            let mut worst: f64 = 0.0;
            for i in 1..100 {
                let x = f64::from(i) / 100.0;
                let mut y = x;
                for k in 1..=6 {
                    y = logistic4.apply(y);
                    let err = (logistic4_conjugate(x, k) - y).abs() / 2f64.powi(k as i32);
                    worst = worst.max(err);
                }
            }
            if worst < 1e-12 {
                Ok(format!("max scaled error {worst:.2e}"))
            } else {
                Err(format!("max scaled error {worst:.2e} exceeds 1e-12"))
            }
        }),
        check("round structure", || {
            let g = example_generator()?;
            let orbits = |range: std::ops::Range<usize>| -> u32 {
                g.slots()[range].iter().map(|s| s.params.orbits).sum()
            };
            let (logistic, chebyshev) = (orbits(0..4), orbits(4..8));
            if logistic == 45 {
                Ok(format!(
                    "{logistic} logistic + {chebyshev} Chebyshev orbits, {} bytes per round",
                    g.bytes_per_round()
                ))
            } else {
                Err(format!("{logistic} logistic orbits, expected 45"))
            }
        }),
        check("keystream fingerprint", || {
            let mut g = example_generator()?;
            let bytes = g.next_bytes(64).map_err(|e| e.to_string())?;
            let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
            if hex == FINGERPRINT_HEX {
                Ok("first 64 bytes match; ciphertexts are portable to this platform".into())
            } else {
                Err(format!(
                    "first 64 bytes differ ({hex}); this platform's cos/acos results differ"
                ))
            }
        }),
        check("round trip", || {
            let key: KeyMaterial = EXAMPLE_KEY.parse().map_err(|e| format!("{e}"))?;
            let bank = MapBank::default();
            let msg: Vec<u8> = (0..10_000u32).map(|i| (i * 31 % 251) as u8).collect();
            let ct = apply_keystream(&key, &bank, &msg).map_err(|e| e.to_string())?;
            let pt = apply_keystream(&key, &bank, &ct).map_err(|e| e.to_string())?;
            if pt == msg && ct != msg {
                Ok("10000-byte message restored".into())
            } else {
                Err("decrypt(encrypt(m)) != m".into())
            }
        }),
    ]
}
