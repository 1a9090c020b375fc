//! Chaotic map bank: logistic and Chebyshev maps, orbit generation, and the
//! logistic/Chebyshev conjugacy.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("invalid map parameter: {0}")]
    InvalidParameter(String),
    #[error("state {x} is outside the domain of {spec}")]
    OutOfDomain { spec: MapSpec, x: f64 },
    #[error("{spec} escaped its domain with value {value}")]
    DomainEscape { spec: MapSpec, value: f64 },
    #[error("degenerate orbit of {spec} at iteration {iteration}: {cause}")]
    DegenerateOrbit {
        spec: MapSpec,
        iteration: u64,
        cause: DegenerateCause,
    },
    #[error("map bank line {line}: {message}")]
    BankConfig { line: usize, message: String },
    #[error("map bank is empty")]
    EmptyBank,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DegenerateCause {
    /// An iterate left the map's domain.
    Escape(f64),
    /// Every sample was the same value.
    FixedPoint(f64),
}

impl fmt::Display for DegenerateCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegenerateCause::Escape(v) => write!(f, "iterate {v} left the domain"),
            DegenerateCause::FixedPoint(v) => write!(f, "captured by fixed point {v}"),
        }
    }
}

/// One chaotic map of the bank.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapSpec {
    /// `x -> r x (1 - x)` on (0, 1).
    Logistic { r: f64 },
    /// `x -> cos(2^k arccos x)` on (-1, 1].
    Chebyshev { degree: u32 },
    /// The Chebyshev map conjugated onto (0, 1) by `x = 1 - 2y`:
    /// `y -> (1 - cos(2^k arccos(1 - 2y))) / 2`.
    ChebyshevUnit { degree: u32 },
}

impl MapSpec {
    pub fn logistic(r: f64) -> Result<Self, MapError> {
        Self::Logistic { r }.validated()
    }

    pub fn chebyshev(degree: u32) -> Result<Self, MapError> {
        Self::Chebyshev { degree }.validated()
    }

    pub fn chebyshev_unit(degree: u32) -> Result<Self, MapError> {
        Self::ChebyshevUnit { degree }.validated()
    }

    pub fn validated(self) -> Result<Self, MapError> {
        match self {
            MapSpec::Logistic { r } if !(r > 0.0 && r <= 4.0) => Err(MapError::InvalidParameter(
                format!("logistic parameter r = {r} must lie in (0, 4]"),
            )),
            MapSpec::Chebyshev { degree } | MapSpec::ChebyshevUnit { degree } if degree == 0 => {
                Err(MapError::InvalidParameter(
                    "Chebyshev degree must be at least 1".to_string(),
                ))
            }
            spec => Ok(spec),
        }
    }

    /// Whether `x` is a state the map may be iterated from.
    pub fn in_domain(&self, x: f64) -> bool {
        match self {
            MapSpec::Logistic { .. } | MapSpec::ChebyshevUnit { .. } => x > 0.0 && x < 1.0,
            MapSpec::Chebyshev { .. } => x > -1.0 && x <= 1.0,
        }
    }

    /// One application of the map, without domain checks.
    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        match *self {
            MapSpec::Logistic { r } => r * x * (1.0 - x),
            MapSpec::Chebyshev { degree } => (angle_multiplier(degree) * x.acos()).cos(),
            MapSpec::ChebyshevUnit { degree } => {
                (1.0 - (angle_multiplier(degree) * (1.0 - 2.0 * x).acos()).cos()) / 2.0
            }
        }
    }

    /// One checked application of the map.
    pub fn step(&self, x: f64) -> Result<f64, MapError> {
        if !self.in_domain(x) {
            return Err(MapError::OutOfDomain { spec: *self, x });
        }
        let next = self.apply(x);
        if !self.in_domain(next) {
            return Err(MapError::DomainEscape {
                spec: *self,
                value: next,
            });
        }
        Ok(next)
    }

    /// Runs `settles` discarded iterations from `x0`, then returns the next
    /// `count` iterates `x_{settles+1} ..= x_{settles+count}`.
    pub fn orbit_samples(&self, x0: f64, settles: u32, count: usize) -> Result<Vec<f64>, MapError> {
        let mut out = Vec::with_capacity(count);
        self.orbit_samples_into(x0, settles, count, |x| out.push(x))?;
        Ok(out)
    }

    /// Like [`orbit_samples`](Self::orbit_samples) but hands each sample to
    /// `sink` instead of collecting. On error the sink may have received a
    /// prefix of the samples.
    pub fn orbit_samples_into<F: FnMut(f64)>(
        &self,
        x0: f64,
        settles: u32,
        count: usize,
        mut sink: F,
    ) -> Result<(), MapError> {
        if !self.in_domain(x0) {
            return Err(MapError::OutOfDomain { spec: *self, x: x0 });
        }
        let escape = |iteration: u64, value: f64| MapError::DegenerateOrbit {
            spec: *self,
            iteration,
            cause: DegenerateCause::Escape(value),
        };
        let mut x = x0;
        let mut iteration = 0u64;
        for _ in 0..settles {
            x = self.apply(x);
            iteration += 1;
            if !self.in_domain(x) {
                return Err(escape(iteration, x));
            }
        }
        let mut first = None;
        let mut all_same = true;
        for _ in 0..count {
            x = self.apply(x);
            iteration += 1;
            if !self.in_domain(x) {
                return Err(escape(iteration, x));
            }
            match first {
                None => first = Some(x.to_bits()),
                Some(bits) => all_same &= bits == x.to_bits(),
            }
            sink(x);
        }
        if count >= 2 && all_same {
            return Err(MapError::DegenerateOrbit {
                spec: *self,
                iteration,
                cause: DegenerateCause::FixedPoint(x),
            });
        }
        Ok(())
    }

    /// [`orbit_samples`](Self::orbit_samples) for several independent
    /// orbits at once, advanced in lockstep. Returns the samples orbit-major
    /// (`starts.len() * count` values), or the error of the first failing
    /// orbit in `starts` order.
    pub fn orbit_samples_batch(
        &self,
        starts: &[f64],
        settles: u32,
        count: usize,
    ) -> Result<Vec<f64>, MapError> {
        if let Some(&x) = starts.iter().find(|&&x| !self.in_domain(x)) {
            return Err(MapError::OutOfDomain { spec: *self, x });
        }
        let lanes = starts.len();
        let mut xs = starts.to_vec();
        // first escaping iteration and value per lane
        let mut failed: Vec<Option<(u64, f64)>> = vec![None; lanes];
        let mut out = vec![0.0; lanes * count];
        let total = u64::from(settles) + count as u64;
        for iteration in 1..=total {
            for (lane, x) in xs.iter_mut().enumerate() {
                let next = self.apply(*x);
                *x = next;
                if !self.in_domain(next) && failed[lane].is_none() {
                    failed[lane] = Some((iteration, next));
                }
            }
            if let Some(sample) = iteration.checked_sub(u64::from(settles) + 1) {
                let sample = sample as usize;
                for (lane, &x) in xs.iter().enumerate() {
                    out[lane * count + sample] = x;
                }
            }
        }
        for (lane, fail) in failed.into_iter().enumerate() {
            if let Some((iteration, value)) = fail {
                return Err(MapError::DegenerateOrbit {
                    spec: *self,
                    iteration,
                    cause: DegenerateCause::Escape(value),
                });
            }
            let samples = &out[lane * count..(lane + 1) * count];
            if count >= 2 && samples.iter().all(|v| v.to_bits() == samples[0].to_bits()) {
                return Err(MapError::DegenerateOrbit {
                    spec: *self,
                    iteration: total,
                    cause: DegenerateCause::FixedPoint(samples[count - 1]),
                });
            }
        }
        Ok(out)
    }

    /// Lazy, checked orbit starting at `x0` (yielded first, as index 0).
    pub fn orbit(&self, x0: f64) -> Orbit {
        Orbit {
            spec: *self,
            next: Some(OrbitPoint {
                value: x0,
                index: 0,
            }),
            failed: false,
        }
    }
}

fn angle_multiplier(degree: u32) -> f64 {
    2f64.powi(degree as i32)
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::Logistic { r } => write!(f, "logistic {r}"),
            MapSpec::Chebyshev { degree } => write!(f, "chebyshev {degree}"),
            MapSpec::ChebyshevUnit { degree } => write!(f, "chebyshev-unit {degree}"),
        }
    }
}

impl FromStr for MapSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut words = s.split_whitespace();
        let (kind, arg) = match (words.next(), words.next(), words.next()) {
            (Some(kind), Some(arg), None) => (kind, arg),
            _ => return Err(format!("expected `<kind> <parameter>`, got {s:?}")),
        };
        let degree = || {
            arg.parse::<u32>()
                .map_err(|_| format!("bad Chebyshev degree {arg:?}"))
        };
        let spec = match kind.to_ascii_lowercase().as_str() {
            "logistic" => {
                let r = arg
                    .parse::<f64>()
                    .map_err(|_| format!("bad logistic parameter {arg:?}"))?;
                MapSpec::logistic(r)
            }
            "chebyshev" => MapSpec::chebyshev(degree()?),
            "chebyshev-unit" => MapSpec::chebyshev_unit(degree()?),
            other => return Err(format!("unknown map kind {other:?}")),
        };
        spec.map_err(|e| e.to_string())
    }
}

/// A point on an orbit: the state after `index` applications of the map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitPoint {
    pub value: f64,
    pub index: u64,
}

/// Iterator over an orbit. Yields an error once and then stops if the
/// orbit leaves the domain.
#[derive(Debug, Clone)]
pub struct Orbit {
    spec: MapSpec,
    next: Option<OrbitPoint>,
    failed: bool,
}

impl Iterator for Orbit {
    type Item = Result<OrbitPoint, MapError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        let point = self.next?;
        if !self.spec.in_domain(point.value) {
            self.failed = true;
            return Some(Err(MapError::DomainEscape {
                spec: self.spec,
                value: point.value,
            }));
        }
        self.next = Some(OrbitPoint {
            value: self.spec.apply(point.value),
            index: point.index + 1,
        });
        Some(Ok(point))
    }
}

/// `(1 - cos(2^k arccos(1 - 2x))) / 2`: `k` iterations of the r = 4 logistic
/// map evaluated in closed form.
///
/// # Panics
///
/// If `x` is outside (0, 1) or `k` is outside 1..=10.
pub fn logistic4_conjugate(x: f64, k: u32) -> f64 {
    assert!(x > 0.0 && x < 1.0, "x = {x} must lie in (0, 1)");
    assert!((1..=10).contains(&k), "k = {k} must lie in 1..=10");
    (1.0 - (angle_multiplier(k) * (1.0 - 2.0 * x).acos()).cos()) / 2.0
}

/// Ordered collection of maps; keys pick maps from the front.
#[derive(Debug, Clone, PartialEq)]
pub struct MapBank {
    maps: Vec<MapSpec>,
}

impl MapBank {
    pub fn new(maps: Vec<MapSpec>) -> Result<Self, MapError> {
        if maps.is_empty() {
            return Err(MapError::EmptyBank);
        }
        let maps = maps
            .into_iter()
            .map(MapSpec::validated)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { maps })
    }

    /// Parses the bank configuration format: one map per line
    /// (`logistic <r>`, `chebyshev <k>` or `chebyshev-unit <k>`), `#`
    /// comments, blank lines ignored.
    pub fn parse_config(text: &str) -> Result<Self, MapError> {
        let mut maps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let spec = line
                .parse::<MapSpec>()
                .map_err(|message| MapError::BankConfig {
                    line: i + 1,
                    message,
                })?;
            maps.push(spec);
        }
        Self::new(maps)
    }

    pub fn to_config(&self) -> String {
        self.maps.iter().map(|m| format!("{m}\n")).collect()
    }

    pub fn maps(&self) -> &[MapSpec] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&MapSpec> {
        self.maps.get(index)
    }
}

/// The eight-map bank: logistic maps with r = 3.901, 3.931, 3.963, 4 followed
/// by raw Chebyshev maps of degree 3 through 6.
impl Default for MapBank {
    fn default() -> Self {
        Self {
            maps: vec![
                MapSpec::Logistic { r: 3.901 },
                MapSpec::Logistic { r: 3.931 },
                MapSpec::Logistic { r: 3.963 },
                MapSpec::Logistic { r: 4.0 },
                MapSpec::Chebyshev { degree: 3 },
                MapSpec::Chebyshev { degree: 4 },
                MapSpec::Chebyshev { degree: 5 },
                MapSpec::Chebyshev { degree: 6 },
            ],
        }
    }
}

impl FromStr for MapBank {
    type Err = MapError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_config(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn logistic4_iterated(mut x: f64, k: u32) -> f64 {
        for _ in 0..k {
            x = 4.0 * x * (1.0 - x);
        }
        x
    }

    #[test]
    fn logistic4_at_half_escapes() {
        let spec = MapSpec::logistic(4.0).unwrap();
        assert!(matches!(
            spec.step(0.5),
            Err(MapError::DomainEscape { value, .. }) if value == 1.0
        ));
    }

    #[test]
    fn chebyshev3_symmetry_point() {
        let x = (std::f64::consts::PI / 16.0).cos();
        let y = MapSpec::chebyshev(3).unwrap().step(x).unwrap();
        assert!(y.abs() < 1e-15, "{y}");
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn logistic_step_matches_high_precision() {
        // mpmath at 50 digits: 3.901 * 0.0012391499 * (1 - 0.0012391499)
        let expected = 0.0048279338037563123_f64;
        let got = MapSpec::logistic(3.901)
            .unwrap()
            .step(0.0012391499)
            .unwrap();
        assert!(
            (got - expected).abs() <= 2.0 * f64::EPSILON * expected,
            "{got}"
        );
        assert_eq!(got, 0.004827933803756313);
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn first_chebyshev_iterates_match_high_precision() {
        // mpmath iterates of cos(8 arccos x) from the f64 seed 0.0015828465
        let hp = [0.99991982810696109, 0.99487331676237655];
        let spec = MapSpec::chebyshev(3).unwrap();
        let mut x = 0.0015828465;
        for (i, want) in hp.iter().enumerate() {
            x = spec.step(x).unwrap();
            assert!(
                (x - want).abs() < 1e-12 * 8f64.powi(i as i32),
                "iterate {i}: {x}"
            );
        }
    }

    #[test]
    fn orbit_samples_indexing() {
        let spec = MapSpec::logistic(3.901).unwrap();
        let x1 = spec.step(0.2).unwrap();
        let x2 = spec.step(x1).unwrap();
        let x3 = spec.step(x2).unwrap();
        assert_eq!(spec.orbit_samples(0.2, 0, 3).unwrap(), vec![x1, x2, x3]);
        assert_eq!(spec.orbit_samples(0.2, 2, 1).unwrap(), vec![x3]);
    }

    #[test]
    fn chebyshev3_map4_golden_samples() {
        // Frozen from the implementation; reproduced bit-for-bit by the
        // independent reference in tests/oracle/keystream_oracle.py.
        let got = MapSpec::chebyshev(3)
            .unwrap()
            .orbit_samples(0.0015828465, 166, 4)
            .unwrap();
        assert_eq!(
            got,
            vec![
                0.18623221555665911,
                0.0721266854559903,
                0.8378219304047526,
                -0.09213847905396301
            ]
        );
    }

    #[test]
    fn orbit_escape_is_degenerate() {
        let spec = MapSpec::logistic(4.0).unwrap();
        assert!(matches!(
            spec.orbit_samples(0.5, 0, 1),
            Err(MapError::DegenerateOrbit {
                iteration: 1,
                cause: DegenerateCause::Escape(_),
                ..
            })
        ));
    }

    #[test]
    fn fixed_point_capture_is_degenerate() {
        // 0.25 -> 0.75, which is fixed under r = 4.
        let spec = MapSpec::logistic(4.0).unwrap();
        assert!(matches!(
            spec.orbit_samples(0.25, 0, 4),
            Err(MapError::DegenerateOrbit {
                cause: DegenerateCause::FixedPoint(v),
                ..
            }) if v == 0.75
        ));
        // a single sample is never a capture
        assert_eq!(spec.orbit_samples(0.25, 3, 1).unwrap(), vec![0.75]);
    }

    #[test]
    fn out_of_domain_start() {
        let spec = MapSpec::logistic(3.9).unwrap();
        assert!(matches!(spec.step(0.0), Err(MapError::OutOfDomain { .. })));
        assert!(matches!(spec.step(1.0), Err(MapError::OutOfDomain { .. })));
        let cheb = MapSpec::chebyshev(2).unwrap();
        assert!(cheb.step(1.0).is_ok());
        assert!(matches!(cheb.step(-1.0), Err(MapError::OutOfDomain { .. })));
    }

    #[test]
    fn invalid_parameters() {
        assert!(MapSpec::logistic(0.0).is_err());
        assert!(MapSpec::logistic(4.01).is_err());
        assert!(MapSpec::logistic(f64::NAN).is_err());
        assert!(MapSpec::chebyshev(0).is_err());
        assert!(MapSpec::chebyshev_unit(0).is_err());
    }

    #[test]
    fn conjugate_exact_half_step() {
        assert_eq!(logistic4_conjugate(0.5, 1), 1.0);
    }

    #[test]
    fn conjugate_four_steps() {
        let x = 0.345;
        assert!((logistic4_conjugate(x, 4) - logistic4_iterated(x, 4)).abs() < 1e-9);
    }

    #[test]
    fn conjugacy_over_random_points() {
        let mut rng = StdRng::seed_from_u64(0xC0FFEE);
        for _ in 0..1000 {
            let x = rng.gen_range(0.001..0.999);
            for k in 1..=6 {
                let err = (logistic4_conjugate(x, k) - logistic4_iterated(x, k)).abs();
                assert!(err < 2f64.powi(k as i32) * 1e-12, "x={x} k={k} err={err}");
            }
        }
    }

    #[test]
    fn literal_printed_substitution_fails_conjugacy() {
        // (1 - cos(2 arccos(1 - x))) / 2 is not one logistic step.
        let x: f64 = 0.3;
        let literal = (1.0 - (2.0 * (1.0 - x).acos()).cos()) / 2.0;
        assert!((literal - logistic4_iterated(x, 1)).abs() > 0.1);
    }

    #[test]
    fn sensitivity_smoke() {
        let spec = MapSpec::logistic(3.901).unwrap();
        let (mut a, mut b) = (0.3, 0.3 + 1e-8);
        let diverged = (0..100).any(|_| {
            a = spec.step(a).unwrap();
            b = spec.step(b).unwrap();
            (a - b).abs() > 0.1
        });
        assert!(diverged);
    }

    #[test]
    fn orbit_iterator() {
        let spec = MapSpec::logistic(4.0).unwrap();
        let pts: Vec<_> = spec.orbit(0.25).take(3).collect::<Result<_, _>>().unwrap();
        assert_eq!(
            pts[0],
            OrbitPoint {
                value: 0.25,
                index: 0
            }
        );
        assert_eq!(
            pts[2],
            OrbitPoint {
                value: 0.75,
                index: 2
            }
        );

        let mut it = spec.orbit(0.5);
        assert!(it.next().unwrap().is_ok());
        assert!(it.next().unwrap().is_err());
        assert!(it.next().is_none());
    }

    #[test]
    fn default_bank_order() {
        let bank = MapBank::default();
        assert_eq!(bank.len(), 8);
        assert_eq!(bank.maps()[0], MapSpec::Logistic { r: 3.901 });
        assert_eq!(bank.maps()[3], MapSpec::Logistic { r: 4.0 });
        assert_eq!(bank.maps()[4], MapSpec::Chebyshev { degree: 3 });
        assert_eq!(bank.maps()[7], MapSpec::Chebyshev { degree: 6 });
    }

    #[test]
    fn bank_config_round_trip() {
        let bank = MapBank::default();
        assert_eq!(bank.to_config().parse::<MapBank>().unwrap(), bank);

        let text = "# custom\nlogistic 3.99\n\n  chebyshev-unit 2  # conjugate form\nCHEBYSHEV 5\n";
        let bank = MapBank::parse_config(text).unwrap();
        assert_eq!(
            bank.maps(),
            &[
                MapSpec::Logistic { r: 3.99 },
                MapSpec::ChebyshevUnit { degree: 2 },
                MapSpec::Chebyshev { degree: 5 }
            ]
        );
    }

    #[test]
    fn bank_config_errors() {
        assert_eq!(
            MapBank::parse_config("# nothing\n"),
            Err(MapError::EmptyBank)
        );
        assert!(matches!(
            MapBank::parse_config("logistic 3.9\ntent 2\n"),
            Err(MapError::BankConfig { line: 2, .. })
        ));
        assert!(matches!(
            MapBank::parse_config("logistic 5\n"),
            Err(MapError::BankConfig { line: 1, .. })
        ));
        assert!(matches!(
            MapBank::parse_config("chebyshev\n"),
            Err(MapError::BankConfig { line: 1, .. })
        ));
    }

    #[test]
    fn batch_reports_first_failing_orbit() {
        let m = MapSpec::Logistic { r: 4.0 };
        let escape = 0.14644660940672624;
        let seq = m.orbit_samples(escape, 5, 3).unwrap_err();
        assert_eq!(
            m.orbit_samples_batch(&[0.3, escape, 0.5], 5, 3)
                .unwrap_err(),
            seq
        );
        assert!(matches!(
            m.orbit_samples_batch(&[0.3, 0.0], 5, 3),
            Err(MapError::OutOfDomain { .. })
        ));
        assert_eq!(m.orbit_samples_batch(&[], 5, 3).unwrap(), Vec::<f64>::new());
    }

    proptest! {
        #[test]
        fn batch_matches_sequential(
            spec in prop_oneof![
                (3.5f64..=4.0).prop_map(|r| MapSpec::Logistic { r }),
                (1u32..=6).prop_map(|degree| MapSpec::Chebyshev { degree }),
                (1u32..=6).prop_map(|degree| MapSpec::ChebyshevUnit { degree }),
            ],
            starts in proptest::collection::vec(1e-6f64..0.999, 0..20),
            settles in 0u32..300,
            count in 0usize..20,
        ) {
            let sequential: Result<Vec<f64>, MapError> = starts
                .iter()
                .map(|&x0| spec.orbit_samples(x0, settles, count))
                .collect::<Result<Vec<_>, _>>()
                .map(|v| v.concat());
            let batch = spec.orbit_samples_batch(&starts, settles, count);
            match (sequential, batch) {
                (Ok(a), Ok(b)) => {
                    prop_assert_eq!(a.len(), b.len());
                    prop_assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
                }
                (a, b) => prop_assert_eq!(format!("{a:?}"), format!("{b:?}")),
            }
        }

        #[test]
        fn logistic_stays_in_range(r in 0.01f64..=4.0, x in 1e-9f64..(1.0 - 1e-9)) {
            let y = MapSpec::Logistic { r }.apply(x);
            prop_assert!(y >= 0.0 && y <= r / 4.0 + 1e-15);
        }

        #[test]
        fn chebyshev_stays_in_range(k in 1u32..8, x in -1.0f64..=1.0) {
            let y = MapSpec::Chebyshev { degree: k }.apply(x);
            prop_assert!((-1.0..=1.0).contains(&y));
        }

        #[test]
        fn unit_form_is_conjugate_of_raw(k in 1u32..7, y in 0.001f64..0.999) {
            let unit = MapSpec::ChebyshevUnit { degree: k }.apply(y);
            let raw = MapSpec::Chebyshev { degree: k }.apply(1.0 - 2.0 * y);
            prop_assert!((unit - (1.0 - raw) / 2.0).abs() < 1e-12);
        }

        #[test]
        fn step_is_deterministic(x in 0.001f64..0.999) {
            for spec in MapBank::default().maps() {
                prop_assert_eq!(spec.apply(x).to_bits(), spec.apply(x).to_bits());
            }
        }
    }
}
