//! Byte-frequency histograms and desk-scale randomness checks.

use std::fmt;
use std::io::{self, Write};

use thiserror::Error;

/// Chi-square test needs an expected count of at least 10 per bin.
pub const MIN_CHI_SQUARE_TOTAL: u64 = 2560;
/// Monobit and runs need at least this many bits.
pub const MIN_BITS: u64 = 100;
/// Degrees of freedom for 256 byte bins.
pub const BYTE_DOF: u32 = 255;
/// Upper-tail standard normal quantile for probability 0.001.
pub const Z_UPPER_0_001: f64 = 3.090_232_306_167_813_5;
/// Significance level of the monobit and runs tests.
pub const BIT_TEST_ALPHA: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("insufficient data: have {have}, need at least {need}")]
    InsufficientData { have: u64, need: u64 },
}

/// Occurrence counts of each byte value.
#[derive(Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: [u64; 256],
    total: u64,
}

impl Default for Histogram {
    fn default() -> Self {
        Self {
            counts: [0; 256],
            total: 0,
        }
    }
}

impl fmt::Debug for Histogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Histogram")
            .field("total", &self.total)
            .finish_non_exhaustive()
    }
}

impl Histogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bytes(data: &[u8]) -> Self {
        let mut h = Self::new();
        h.update(data);
        h
    }

    pub fn update(&mut self, data: &[u8]) {
        for &b in data {
            self.counts[usize::from(b)] += 1;
        }
        self.total += data.len() as u64;
    }

    pub fn counts(&self) -> &[u64; 256] {
        &self.counts
    }

    pub fn count(&self, byte: u8) -> u64 {
        self.counts[usize::from(byte)]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// `byte,count` header then one row per byte value.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "byte,count")?;
        for (b, c) in self.counts.iter().enumerate() {
            writeln!(w, "{b},{c}")?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::with_capacity(256 * 8);
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("ASCII")
    }
}

pub fn histogram(data: &[u8]) -> Histogram {
    Histogram::from_bytes(data)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformityReport {
    pub chi_square: f64,
    pub degrees_of_freedom: u32,
    pub critical_value_p001: f64,
    pub pass: bool,
}

impl fmt::Display for UniformityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "chi-square uniformity: statistic {:.3}, dof {}, critical (p=0.001) {:.3} -> {}",
            self.chi_square,
            self.degrees_of_freedom,
            self.critical_value_p001,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Wilson-Hilferty approximation of the chi-square quantile with `dof`
/// degrees of freedom at standard normal quantile `z`.
pub fn wilson_hilferty(dof: u32, z: f64) -> f64 {
    let k = f64::from(dof);
    let c = 2.0 / (9.0 * k);
    k * (1.0 - c + z * c.sqrt()).powi(3)
}

/// Pearson chi-square of the histogram against the uniform distribution on
/// 256 values, judged at upper-tail probability 0.001.
pub fn chi_square_uniform(h: &Histogram) -> Result<UniformityReport, AnalysisError> {
    if h.total() < MIN_CHI_SQUARE_TOTAL {
        return Err(AnalysisError::InsufficientData {
            have: h.total(),
            need: MIN_CHI_SQUARE_TOTAL,
        });
    }
    let expected = h.total() as f64 / 256.0;
    let chi_square = h
        .counts()
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum::<f64>();
    let critical = wilson_hilferty(BYTE_DOF, Z_UPPER_0_001);
    Ok(UniformityReport {
        chi_square,
        degrees_of_freedom: BYTE_DOF,
        critical_value_p001: critical,
        pass: chi_square < critical,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BitTestOutcome {
    pub statistic: f64,
    pub p_value: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BitTestReport {
    pub bits: u64,
    pub monobit: BitTestOutcome,
    /// Runs is only meaningful when the sequence is balanced; it is reported
    /// as failed with p = 0 otherwise.
    pub runs: BitTestOutcome,
}

impl BitTestReport {
    pub fn pass(&self) -> bool {
        self.monobit.pass && self.runs.pass
    }
}

impl fmt::Display for BitTestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = |p: bool| if p { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "monobit: s_obs {:.4}, p {:.6} -> {}",
            self.monobit.statistic,
            self.monobit.p_value,
            verdict(self.monobit.pass)
        )?;
        write!(
            f,
            "runs: V_n {}, p {:.6} -> {}",
            self.runs.statistic,
            self.runs.p_value,
            verdict(self.runs.pass)
        )
    }
}

/// Frequency (monobit) and runs tests over the bits of `data`, each byte
/// expanded most-significant bit first.
pub fn monobit_and_runs(data: &[u8]) -> Result<BitTestReport, AnalysisError> {
    let n = data.len() as u64 * 8;
    if n < MIN_BITS {
        return Err(AnalysisError::InsufficientData {
            have: n,
            need: MIN_BITS,
        });
    }
    let ones: u64 = data.iter().map(|b| u64::from(b.count_ones())).sum();
    let nf = n as f64;

    let sum = 2.0 * ones as f64 - nf;
    let s_obs = sum.abs() / nf.sqrt();
    let p_mono = libm::erfc(s_obs / std::f64::consts::SQRT_2);
    let monobit = BitTestOutcome {
        statistic: s_obs,
        p_value: p_mono,
        pass: p_mono >= BIT_TEST_ALPHA,
    };

    let transitions = bit_transitions(data);
    let v_n = transitions + 1;
    let pi = ones as f64 / nf;
    let balanced = (pi - 0.5).abs() < 2.0 / nf.sqrt();
    let runs = if monobit.pass && balanced {
        let q = pi * (1.0 - pi);
        let p = libm::erfc((v_n as f64 - 2.0 * nf * q).abs() / (2.0 * (2.0 * nf).sqrt() * q));
        BitTestOutcome {
            statistic: v_n as f64,
            p_value: p,
            pass: p >= BIT_TEST_ALPHA,
        }
    } else {
        BitTestOutcome {
            statistic: v_n as f64,
            p_value: 0.0,
            pass: false,
        }
    };
    Ok(BitTestReport {
        bits: n,
        monobit,
        runs,
    })
}

/// Number of adjacent unequal bit pairs in the MSB-first bit string.
fn bit_transitions(data: &[u8]) -> u64 {
    let mut count = 0u64;
    let mut prev: Option<u8> = None;
    for &b in data {
        // within-byte transitions: bit i vs bit i+1 (MSB first)
        count += u64::from((b ^ (b << 1)) & 0xFE).count_ones() as u64;
        if let Some(p) = prev {
            count += u64::from((p & 1) != (b >> 7));
        }
        prev = Some(b);
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits_msb_first(data: &[u8]) -> Vec<u8> {
        data.iter()
            .flat_map(|&b| (0..8).rev().map(move |i| (b >> i) & 1))
            .collect()
    }

    #[test]
    fn histogram_examples() {
        let h = histogram(&[]);
        assert_eq!(h.total(), 0);
        assert!(h.counts().iter().all(|&c| c == 0));

        let h = histogram(b"AAAA");
        assert_eq!(h.count(65), 4);
        assert_eq!(h.counts().iter().sum::<u64>(), 4);

        let all: Vec<u8> = (0..=255).collect();
        assert!(histogram(&all).counts().iter().all(|&c| c == 1));
    }

    #[test]
    fn csv_layout() {
        let csv = histogram(b"AAB").to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 257);
        assert_eq!(lines[0], "byte,count");
        assert_eq!(lines[1], "0,0");
        assert_eq!(lines[66], "65,2");
        assert_eq!(lines[67], "66,1");
        assert_eq!(lines[256], "255,0");
    }

    #[test]
    fn wilson_hilferty_critical_value() {
        // 255 * (1 - 2/2295 + z*sqrt(2/2295))^3 evaluated separately; the
        // exact 0.999 quantile of chi-square(255) is 330.5197.
        let c = wilson_hilferty(255, Z_UPPER_0_001);
        assert!((c - 330.554_004_496_140_86).abs() < 1e-9, "{c}");
        assert!((c - 330.5197).abs() < 0.05);
    }

    #[test]
    fn perfectly_uniform_passes() {
        let data: Vec<u8> = (0..10).flat_map(|_| 0..=255u8).collect();
        let r = chi_square_uniform(&histogram(&data)).unwrap();
        assert_eq!(r.chi_square, 0.0);
        assert_eq!(r.degrees_of_freedom, 255);
        assert!(r.pass);
    }

    #[test]
    fn single_bin_fails() {
        assert_eq!(
            chi_square_uniform(&histogram(&[0u8; 256])),
            Err(AnalysisError::InsufficientData {
                have: 256,
                need: 2560
            })
        );
        let r = chi_square_uniform(&histogram(&[9u8; 2560])).unwrap();
        // (2560 - 10)^2 / 10 + 255 * (0 - 10)^2 / 10 = 650250 + 2550
        assert_eq!(r.chi_square, 652_800.0);
        assert!(!r.pass);
    }

    #[test]
    fn alternating_bits_balance() {
        let r = monobit_and_runs(&[0x55; 125]).unwrap();
        assert_eq!(r.bits, 1000);
        assert_eq!(r.monobit.statistic, 0.0);
        assert_eq!(r.monobit.p_value, 1.0);
        assert!(r.monobit.pass);
        // 1000 runs of length one is far too many
        assert_eq!(r.runs.statistic, 1000.0);
        assert!(!r.runs.pass);
    }

    #[test]
    fn all_ones_fail() {
        let r = monobit_and_runs(&[0xFF; 200]).unwrap();
        assert!(!r.monobit.pass);
        assert!(!r.runs.pass);
        assert_eq!(r.runs.p_value, 0.0);
    }

    #[test]
    fn too_few_bits() {
        assert_eq!(
            monobit_and_runs(&[0u8; 12]),
            Err(AnalysisError::InsufficientData {
                have: 96,
                need: 100
            })
        );
        assert!(monobit_and_runs(&[0u8; 13]).is_ok());
    }

    #[test]
    fn nist_worked_example() {
        // SP 800-22 runs example: 1001101011, n = 10 (checked below the
        // 100-bit floor by calling the pieces directly).
        // Monobit example: 1011010101 -> s_obs = 0.632455532, p = 0.527089.
        let s_obs: f64 = 2.0 / 10f64.sqrt();
        let p = libm::erfc(s_obs / std::f64::consts::SQRT_2);
        assert!((p - 0.527089).abs() < 1e-6);
        // runs example has V_n = 7, pi = 0.6, p = 0.147232
        let (n, pi, v): (f64, f64, f64) = (10.0, 0.6, 7.0);
        let q = pi * (1.0 - pi);
        let p = libm::erfc((v - 2.0 * n * q).abs() / (2.0 * (2.0 * n).sqrt() * q));
        assert!((p - 0.147232).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn histogram_conserves_total(data in proptest::collection::vec(any::<u8>(), 0..2000)) {
            let h = histogram(&data);
            prop_assert_eq!(h.total(), data.len() as u64);
            prop_assert_eq!(h.counts().iter().sum::<u64>(), data.len() as u64);
        }

        #[test]
        fn chi_square_permutation_invariant(
            mut data in proptest::collection::vec(any::<u8>(), 2560..4000),
            seed in any::<u64>()
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let a = chi_square_uniform(&histogram(&data)).unwrap();
            data.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
            let b = chi_square_uniform(&histogram(&data)).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn transitions_match_bitwise_count(data in proptest::collection::vec(any::<u8>(), 1..200)) {
            let bits = bits_msb_first(&data);
            let naive = bits.windows(2).filter(|w| w[0] != w[1]).count() as u64;
            prop_assert_eq!(bit_transitions(&data), naive);
        }
    }
}
