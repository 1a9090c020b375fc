//! The orbit-hopping keystream generator.
//!
//! Maps are visited cyclically in bank order. On each visit a map spawns
//! `orbits` fresh orbits; orbit `j` of a map starts at `wrap(seed + j * offset)`
//! where `j` keeps counting across visits, so no orbit is ever reused. Each
//! orbit is settled and then sampled `samples` times, one keystream byte per
//! sample.

use std::collections::VecDeque;

use thiserror::Error;

use crate::chaos_maps::{MapBank, MapError, MapSpec};
use crate::keying::{KeyError, KeyMaterial, SubkeyParams};

/// Number of fractional digits kept by [`extract_byte`].
pub const EXTRACT_DIGITS: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error(transparent)]
    Key(#[from] KeyError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("key selects {needed} maps but the bank holds only {available}")]
    BankTooSmall { needed: usize, available: usize },
    #[error("generator needs at least one map slot")]
    NoSlots,
    #[error("generator is poisoned by an earlier degenerate orbit")]
    Poisoned,
}

/// Extracts a byte from an orbit point.
///
/// Takes the fractional decimal digits of `|x|` from its shortest round-trip
/// representation, right-pads them with zeros to eight digits or keeps the
/// rightmost eight, and reduces that number mod 256. Values with `|x| >= 1`
/// contribute no digits.
pub fn extract_byte(x: f64) -> u8 {
    let Some(frac) = ShortestFraction::of(x) else {
        return 0;
    };
    let value = if frac.len() > EXTRACT_DIGITS {
        frac.significand % 100_000_000
    } else {
        frac.significand * 10u64.pow((EXTRACT_DIGITS - frac.len()) as u32)
    };
    (value % 256) as u8
}

/// Fractional digits of `|x|` for `0 < |x| < 1`, as `leading_zeros` zeros
/// followed by the digits of `significand` (no trailing zeros).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ShortestFraction {
    leading_zeros: usize,
    significand: u64,
    significant_digits: usize,
}

impl ShortestFraction {
    fn of(x: f64) -> Option<Self> {
        let x = x.abs();
        if !(x > 0.0 && x < 1.0) {
            return None;
        }
        // ryu emits the shortest round-trip digits, as `0.ddd` or `d.ddde-N`.
        let mut buf = ryu::Buffer::new();
        let text = buf.format_finite(x).as_bytes();
        let (mantissa, exponent) = match text.iter().position(|&c| c == b'e') {
            Some(e) => (&text[..e], parse_exponent(&text[e + 1..])),
            None => (text, 0),
        };
        let (leading_zeros, digits) = match mantissa {
            [b'0', b'.', frac @ ..] => {
                let zeros = frac.iter().take_while(|&&c| c == b'0').count();
                (zeros, &frac[zeros..])
            }
            _ => ((-exponent - 1) as usize, mantissa),
        };
        let mut significand = 0u64;
        let mut significant_digits = 0;
        for &c in digits.iter().filter(|&&c| c != b'.') {
            significand = significand * 10 + u64::from(c - b'0');
            significant_digits += 1;
        }
        while significand % 10 == 0 {
            significand /= 10;
            significant_digits -= 1;
        }
        Some(Self {
            leading_zeros,
            significand,
            significant_digits,
        })
    }

    fn len(&self) -> usize {
        self.leading_zeros + self.significant_digits
    }
}

fn parse_exponent(text: &[u8]) -> i32 {
    let (negative, digits) = match text {
        [b'-', rest @ ..] => (true, rest),
        _ => (false, text),
    };
    let value = digits
        .iter()
        .fold(0i32, |acc, &c| acc * 10 + i32::from(c - b'0'));
    if negative {
        -value
    } else {
        value
    }
}

/// One map of the generator together with its decoded subkey.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSlot {
    pub spec: MapSpec,
    pub params: SubkeyParams,
    orbit_counter: u64,
}

impl MapSlot {
    pub fn new(spec: MapSpec, params: SubkeyParams) -> Self {
        Self {
            spec,
            params,
            orbit_counter: 0,
        }
    }

    /// Total orbit indices this slot has consumed.
    pub fn orbit_counter(&self) -> u64 {
        self.orbit_counter
    }

    pub fn bytes_per_visit(&self) -> u64 {
        u64::from(self.params.orbits) * u64::from(self.params.samples)
    }

    /// Starting value of orbit `j`, wrapped into [0, 1).
    pub fn orbit_start(&self, j: u64) -> f64 {
        let v = self.params.seed + j as f64 * self.params.offset;
        v - v.floor()
    }

    /// Orbit start values and indices for the next visit, without running it.
    pub fn next_visit_starts(&self) -> Vec<(u64, f64)> {
        let mut out = Vec::with_capacity(self.params.orbits as usize);
        let mut j = self.orbit_counter;
        while out.len() < self.params.orbits as usize {
            let x0 = self.orbit_start(j);
            if x0 != 0.0 {
                out.push((j, x0));
            }
            j += 1;
        }
        out
    }

    fn run_visit(&mut self, out: &mut VecDeque<u8>) -> Result<(), MapError> {
        let starts = self.next_visit_starts();
        let next_counter = starts.last().map_or(self.orbit_counter, |&(j, _)| j + 1);
        let xs: Vec<f64> = starts.iter().map(|&(_, x0)| x0).collect();
        // Orbits are independent; running them together hides the latency
        // of each iteration without changing any value.
        let samples = self.spec.orbit_samples_batch(
            &xs,
            self.params.settles,
            self.params.samples as usize,
        )?;
        out.extend(samples.into_iter().map(extract_byte));
        self.orbit_counter = next_counter;
        Ok(())
    }
}

/// Full generator position: slots, the next slot to visit, and bytes of the
/// current visit not yet handed out.
#[derive(Debug, Clone)]
pub struct Generator {
    slots: Vec<MapSlot>,
    map_index: usize,
    pending: VecDeque<u8>,
    poisoned: bool,
}

impl Generator {
    /// Pairs map `i` of the bank with subkey `i` of the key.
    pub fn new(key: &KeyMaterial, bank: &MapBank) -> Result<Self, GeneratorError> {
        let parsed = key.parse()?;
        if parsed.map_count > bank.len() {
            return Err(GeneratorError::BankTooSmall {
                needed: parsed.map_count,
                available: bank.len(),
            });
        }
        let params = parsed.decode_all()?;
        let slots = bank
            .maps()
            .iter()
            .zip(params)
            .map(|(&spec, p)| MapSlot::new(spec, p))
            .collect();
        Self::from_slots(slots)
    }

    /// Builds a generator from explicit slots, bypassing key decoding.
    pub fn from_slots(slots: Vec<MapSlot>) -> Result<Self, GeneratorError> {
        if slots.is_empty() {
            return Err(GeneratorError::NoSlots);
        }
        for slot in &slots {
            slot.spec.validated()?;
        }
        Ok(Self {
            slots,
            map_index: 0,
            pending: VecDeque::new(),
            poisoned: false,
        })
    }

    pub fn slots(&self) -> &[MapSlot] {
        &self.slots
    }

    /// Index of the slot whose visit produces the next fresh bytes.
    pub fn map_index(&self) -> usize {
        self.map_index
    }

    pub fn pending(&self) -> usize {
        self.pending.len()
    }

    pub fn is_poisoned(&self) -> bool {
        self.poisoned
    }

    /// Keystream bytes produced by one visit to every slot.
    pub fn bytes_per_round(&self) -> u64 {
        self.slots.iter().map(MapSlot::bytes_per_visit).sum()
    }

    pub fn next_bytes(&mut self, count: usize) -> Result<Vec<u8>, GeneratorError> {
        let mut out = vec![0u8; count];
        self.fill(&mut out)?;
        Ok(out)
    }

    /// Overwrites `buf` with the next `buf.len()` keystream bytes.
    pub fn fill(&mut self, buf: &mut [u8]) -> Result<(), GeneratorError> {
        self.produce(buf.len(), |i, k| buf[i] = k)
    }

    /// XORs the next `buf.len()` keystream bytes into `buf`.
    pub fn xor_into(&mut self, buf: &mut [u8]) -> Result<(), GeneratorError> {
        self.produce(buf.len(), |i, k| buf[i] ^= k)
    }

    fn produce<F: FnMut(usize, u8)>(
        &mut self,
        count: usize,
        mut emit: F,
    ) -> Result<(), GeneratorError> {
        if self.poisoned {
            return Err(GeneratorError::Poisoned);
        }
        let mut i = 0;
        while i < count {
            if self.pending.is_empty() {
                self.refill()?;
            }
            let take = self.pending.len().min(count - i);
            for k in self.pending.drain(..take) {
                emit(i, k);
                i += 1;
            }
        }
        Ok(())
    }

    fn refill(&mut self) -> Result<(), GeneratorError> {
        let slot = &mut self.slots[self.map_index];
        if let Err(e) = slot.run_visit(&mut self.pending) {
            self.poisoned = true;
            self.pending.clear();
            return Err(e.into());
        }
        self.map_index = (self.map_index + 1) % self.slots.len();
        Ok(())
    }
}
