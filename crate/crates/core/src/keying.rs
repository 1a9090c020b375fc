//! Key material and subkey decoding.
//!
//! A key is a sequence of nibbles. The first two nibbles form a header byte
//! that selects the number of maps, `2 + (header mod 7)`; the remainder is cut
//! sequentially into one 14-nibble (56-bit) subkey per map:
//!
//! ```text
//! | seed (6) | offset (4) | settles (2) | orbits (1) | samples (1) |
//! ```
//!
//! Each field is read big-endian in nibble order.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

/// Nibbles in the map-count header.
pub const HEADER_NIBBLES: usize = 2;
/// Nibbles per subkey (56 bits).
pub const SUBKEY_NIBBLES: usize = 14;
/// Smallest map count the header can select.
pub const MIN_MAPS: usize = 2;
/// Largest map count the header can select.
pub const MAX_MAPS: usize = 8;

const MAP_COUNT_MODULUS: u8 = 7;
const SETTLES_BASE: u32 = 30;
const COUNT_BASE: u32 = 4;
const OFFSET_SCALE: f64 = 1e9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KeyError {
    #[error("key is too short: {len} nibbles, need at least {HEADER_NIBBLES}")]
    TooShort { len: usize },
    #[error("key body has {actual} nibbles but {map_count} maps need {expected}")]
    LengthMismatch {
        map_count: usize,
        expected: usize,
        actual: usize,
    },
    #[error("nibble {value} at position {index} is outside 0..=15")]
    InvalidNibble { index: usize, value: u8 },
    #[error("invalid character {ch:?} at position {index} in key text")]
    InvalidCharacter { index: usize, ch: char },
    #[error("subkey has a zero seed code")]
    DegenerateSeed,
    #[error("subkey has a zero offset code (all orbits would coincide)")]
    DegenerateOffset,
    #[error("unsupported map count {0}; must be between {MIN_MAPS} and {MAX_MAPS}")]
    UnsupportedMapCount(usize),
}

/// Raw key: an ordered sequence of nibbles.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KeyMaterial {
    nibbles: Vec<u8>,
}

impl KeyMaterial {
    pub fn from_nibbles(nibbles: Vec<u8>) -> Result<Self, KeyError> {
        if let Some((index, &value)) = nibbles.iter().enumerate().find(|(_, &n)| n > 0xF) {
            return Err(KeyError::InvalidNibble { index, value });
        }
        Ok(Self { nibbles })
    }

    /// Parses hexadecimal key text. Digits are case-insensitive and all
    /// whitespace is ignored, so the grouped form printed by [`Display`]
    /// (`"1B BD144B3A8E6977 ..."`) reads back verbatim.
    ///
    /// [`Display`]: fmt::Display
    pub fn from_hex(text: &str) -> Result<Self, KeyError> {
        let mut nibbles = Vec::with_capacity(text.len());
        for (index, ch) in text.chars().enumerate() {
            if ch.is_whitespace() {
                continue;
            }
            match ch.to_digit(16) {
                Some(d) => nibbles.push(d as u8),
                None => return Err(KeyError::InvalidCharacter { index, ch }),
            }
        }
        Ok(Self { nibbles })
    }

    pub fn nibbles(&self) -> &[u8] {
        &self.nibbles
    }

    pub fn len(&self) -> usize {
        self.nibbles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nibbles.is_empty()
    }

    pub fn parse(&self) -> Result<ParsedKey, KeyError> {
        parse_key(self)
    }
}

impl FromStr for KeyMaterial {
    type Err = KeyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_hex(s)
    }
}

/// Uppercase hex, header first, then one space-separated group per subkey.
impl fmt::Display for KeyMaterial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let split = HEADER_NIBBLES.min(self.nibbles.len());
        let (header, body) = self.nibbles.split_at(split);
        for n in header {
            write!(f, "{n:X}")?;
        }
        for group in body.chunks(SUBKEY_NIBBLES) {
            f.write_str(" ")?;
            for n in group {
                write!(f, "{n:X}")?;
            }
        }
        Ok(())
    }
}

// Keys are secrets; keep them out of debug logs.
impl fmt::Debug for KeyMaterial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KeyMaterial")
            .field("nibbles", &self.nibbles.len())
            .finish_non_exhaustive()
    }
}

/// One 56-bit subkey split into its raw fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubkeyRecord {
    /// 24 bits, nibbles 0-5.
    pub seed_code: u32,
    /// 16 bits, nibbles 6-9.
    pub offset_code: u16,
    /// 8 bits, nibbles 10-11.
    pub settles_code: u8,
    /// 4 bits, nibble 12.
    pub orbits_code: u8,
    /// 4 bits, nibble 13.
    pub samples_code: u8,
}

fn fold_nibbles(nibbles: &[u8]) -> u32 {
    nibbles
        .iter()
        .fold(0u32, |acc, &n| (acc << 4) | u32::from(n))
}

impl SubkeyRecord {
    pub fn from_nibbles(n: &[u8; SUBKEY_NIBBLES]) -> Self {
        Self {
            seed_code: fold_nibbles(&n[0..6]),
            offset_code: fold_nibbles(&n[6..10]) as u16,
            settles_code: fold_nibbles(&n[10..12]) as u8,
            orbits_code: n[12],
            samples_code: n[13],
        }
    }

    pub fn to_nibbles(&self) -> [u8; SUBKEY_NIBBLES] {
        let mut out = [0u8; SUBKEY_NIBBLES];
        let fields: [(u32, usize); 5] = [
            (self.seed_code, 6),
            (u32::from(self.offset_code), 4),
            (u32::from(self.settles_code), 2),
            (u32::from(self.orbits_code), 1),
            (u32::from(self.samples_code), 1),
        ];
        let mut pos = 0;
        for (value, width) in fields {
            for i in 0..width {
                let shift = 4 * (width - 1 - i);
                out[pos] = ((value >> shift) & 0xF) as u8;
                pos += 1;
            }
        }
        out
    }

    pub fn decode(&self) -> Result<SubkeyParams, KeyError> {
        decode_subkey(self)
    }
}

/// Decoded per-map control parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubkeyParams {
    /// Initial map state of orbit 0.
    pub seed: f64,
    /// Shift between consecutive orbit seeds.
    pub offset: f64,
    /// Iterations discarded before an orbit is sampled.
    pub settles: u32,
    /// Orbits spawned per visit to the map.
    pub orbits: u32,
    /// Points sampled from each orbit.
    pub samples: u32,
}

impl SubkeyParams {
    /// Fixed-point decimal of the seed, e.g. `0.0012391499`.
    ///
    /// Decoded seeds and offsets carry at most eight significant digits, so
    /// the shortest round-trip rendering of the `f64` is exactly the decimal
    /// the decode rule describes.
    pub fn seed_decimal(&self) -> String {
        format!("{}", self.seed)
    }

    /// Fixed-point decimal of the offset, e.g. `0.00001499`.
    pub fn offset_decimal(&self) -> String {
        format!("{}", self.offset)
    }
}

/// Map count plus one record per map, in key order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedKey {
    pub map_count: usize,
    pub subkeys: Vec<SubkeyRecord>,
}

impl ParsedKey {
    pub fn decode_all(&self) -> Result<Vec<SubkeyParams>, KeyError> {
        self.subkeys.iter().map(decode_subkey).collect()
    }
}

/// Map count selected by a header byte.
pub fn map_count_for_header(header: u8) -> usize {
    MIN_MAPS + usize::from(header % MAP_COUNT_MODULUS)
}

pub fn parse_key(key: &KeyMaterial) -> Result<ParsedKey, KeyError> {
    let nibbles = key.nibbles();
    if let Some((index, &value)) = nibbles.iter().enumerate().find(|(_, &n)| n > 0xF) {
        return Err(KeyError::InvalidNibble { index, value });
    }
    if nibbles.len() < HEADER_NIBBLES {
        return Err(KeyError::TooShort { len: nibbles.len() });
    }
    let header = (nibbles[0] << 4) | nibbles[1];
    let map_count = map_count_for_header(header);
    let body = &nibbles[HEADER_NIBBLES..];
    let expected = SUBKEY_NIBBLES * map_count;
    if body.len() != expected {
        return Err(KeyError::LengthMismatch {
            map_count,
            expected,
            actual: body.len(),
        });
    }
    let subkeys = body
        .chunks_exact(SUBKEY_NIBBLES)
        .map(|chunk| {
            let group: &[u8; SUBKEY_NIBBLES] = chunk.try_into().expect("exact chunk");
            SubkeyRecord::from_nibbles(group)
        })
        .collect();
    Ok(ParsedKey { map_count, subkeys })
}

/// Inverse of [`parse_key`]. The header is written as the smallest byte that
/// selects `subkeys.len()` maps.
pub fn encode_key(subkeys: &[SubkeyRecord]) -> Result<KeyMaterial, KeyError> {
    let map_count = subkeys.len();
    if !(MIN_MAPS..=MAX_MAPS).contains(&map_count) {
        return Err(KeyError::UnsupportedMapCount(map_count));
    }
    let header = (map_count - MIN_MAPS) as u8;
    let mut nibbles = Vec::with_capacity(HEADER_NIBBLES + SUBKEY_NIBBLES * map_count);
    nibbles.push(header >> 4);
    nibbles.push(header & 0xF);
    for rec in subkeys {
        nibbles.extend_from_slice(&rec.to_nibbles());
    }
    Ok(KeyMaterial { nibbles })
}

fn decimal_digits(mut v: u32) -> i32 {
    let mut d = 1;
    while v >= 10 {
        v /= 10;
        d += 1;
    }
    d
}

/// Decodes a subkey.
///
/// The seed is the decimal `0.00<digits of seed_code>`, i.e.
/// `seed_code / 10^(d + 2)` with `d` the digit count of the code. The offset
/// is `offset_code / 10^9`. Both divisions have exact operands, so the result
/// is the binary64 value nearest to that decimal.
pub fn decode_subkey(rec: &SubkeyRecord) -> Result<SubkeyParams, KeyError> {
    if rec.seed_code == 0 {
        return Err(KeyError::DegenerateSeed);
    }
    if rec.offset_code == 0 {
        return Err(KeyError::DegenerateOffset);
    }
    let scale = 10f64.powi(decimal_digits(rec.seed_code) + 2);
    Ok(SubkeyParams {
        seed: f64::from(rec.seed_code) / scale,
        offset: f64::from(rec.offset_code) / OFFSET_SCALE,
        settles: SETTLES_BASE + u32::from(rec.settles_code),
        orbits: COUNT_BASE + u32::from(rec.orbits_code & 0xF),
        samples: COUNT_BASE + u32::from(rec.samples_code & 0xF),
    })
}

/// Draws a fresh key for `map_count` maps.
///
/// The header byte is uniform over the bytes that select `map_count`, and
/// each subkey is uniform over records with nonzero seed and offset codes.
pub fn generate_key<R: Rng + ?Sized>(
    map_count: usize,
    rng: &mut R,
) -> Result<KeyMaterial, KeyError> {
    if !(MIN_MAPS..=MAX_MAPS).contains(&map_count) {
        return Err(KeyError::UnsupportedMapCount(map_count));
    }
    let headers: Vec<u8> = (0..=u8::MAX)
        .filter(|&b| map_count_for_header(b) == map_count)
        .collect();
    let header = headers[rng.gen_range(0..headers.len())];

    let mut nibbles = Vec::with_capacity(HEADER_NIBBLES + SUBKEY_NIBBLES * map_count);
    nibbles.push(header >> 4);
    nibbles.push(header & 0xF);
    for _ in 0..map_count {
        let rec = loop {
            let mut group = [0u8; SUBKEY_NIBBLES];
            for n in group.iter_mut() {
                *n = rng.gen_range(0..16);
            }
            let rec = SubkeyRecord::from_nibbles(&group);
            if rec.seed_code != 0 && rec.offset_code != 0 {
                break rec;
            }
        };
        nibbles.extend_from_slice(&rec.to_nibbles());
    }
    Ok(KeyMaterial { nibbles })
}
