//! Multi-map orbit-hopping chaotic stream cipher.
//!
//! A key selects between two and eight maps from a [`MapBank`] and carries a
//! 56-bit subkey for each: a seed, an orbit offset, a settle count, and how
//! many orbits and samples to draw per visit. The [`Generator`] hops across
//! the maps in order, spawning fresh orbits on each visit, and turns every
//! sampled point into a byte via [`extract_byte`]. Data is combined with the
//! keystream by XOR.
//!
//! ```
//! use orbithop::{CipherSession, KeyMaterial, MapBank};
//!
//! let key: KeyMaterial = "1B BD144B3A8E6977 1EAE62EF9717B0 8A716B84B9E534 371AE759565F8B \
//!                         F185F15EE7887A E6B7F42200B92A B4690A8F7ED392 31D3639AFE54F3"
//!     .parse()
//!     .unwrap();
//! let bank = MapBank::default();
//!
//! let ct = CipherSession::new(&key, &bank).unwrap().apply(b"attack at dawn").unwrap();
//! let pt = CipherSession::new(&key, &bank).unwrap().apply(&ct).unwrap();
//! assert_eq!(pt, b"attack at dawn");
//! ```
//!
//! Keystream bytes come from binary64 transcendental functions, so
//! ciphertexts are only portable between builds with bit-identical `cos` and
//! `acos`. This is a research construction, not a vetted cipher: there is no
//! nonce and no authentication.

pub mod analysis;
pub mod chaos_maps;
pub mod cipher;
pub mod keying;
pub mod keystream;

pub use analysis::{
    chi_square_uniform, histogram, monobit_and_runs, AnalysisError, BitTestReport, Histogram,
    UniformityReport,
};
pub use chaos_maps::{logistic4_conjugate, MapBank, MapError, MapSpec, OrbitPoint};
pub use cipher::{apply_keystream, CipherError, CipherSession};
pub use keying::{
    decode_subkey, generate_key, parse_key, KeyError, KeyMaterial, ParsedKey, SubkeyParams,
    SubkeyRecord,
};
pub use keystream::{extract_byte, Generator, GeneratorError, MapSlot};

/// The worked-example key: eight maps over the default bank.
pub const EXAMPLE_KEY: &str = "1B BD144B3A8E6977 1EAE62EF9717B0 8A716B84B9E534 371AE759565F8B \
                               F185F15EE7887A E6B7F42200B92A B4690A8F7ED392 31D3639AFE54F3";
