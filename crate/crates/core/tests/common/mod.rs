//! Shared schedule corpus for the integration suites.

use kempner_core::{DigitSet, Schedule};

pub struct CorpusEntry {
    pub name: &'static str,
    pub schedule: Schedule,
    /// Deepest digit length the brute-force oracle sweeps for this entry.
    pub oracle_depth: u64,
}

fn set(digits: &[u8]) -> DigitSet {
    DigitSet::from_digits(digits.iter().copied())
}

fn entry(name: &'static str, schedule: Schedule, oracle_depth: u64) -> CorpusEntry {
    CorpusEntry {
        name,
        schedule,
        oracle_depth,
    }
}

/// Constant, mixed-period, preperiod, and degenerate schedules; depths are
/// 6 for base 10 and 12 for bases 2 and 3.
pub fn corpus() -> Vec<CorpusEntry> {
    vec![
        entry(
            "g10 unrestricted",
            Schedule::constant(10, DigitSet::EMPTY).unwrap(),
            6,
        ),
        entry(
            "g10 no zeros",
            Schedule::constant(10, set(&[0])).unwrap(),
            6,
        ),
        entry(
            "g10 no nines",
            Schedule::constant(10, set(&[9])).unwrap(),
            6,
        ),
        entry(
            "g10 no fives",
            Schedule::constant(10, set(&[5])).unwrap(),
            6,
        ),
        entry(
            "g10 no zeros or nines",
            Schedule::constant(10, set(&[0, 9])).unwrap(),
            6,
        ),
        entry(
            "g10 no threes or sevens",
            Schedule::constant(10, set(&[3, 7])).unwrap(),
            6,
        ),
        entry(
            "g10 alternating {9},{}",
            Schedule::new(10, vec![], vec![set(&[9]), DigitSet::EMPTY]).unwrap(),
            6,
        ),
        entry(
            "g10 alternating {0,1},{2}",
            Schedule::new(10, vec![], vec![set(&[0, 1]), set(&[2])]).unwrap(),
            6,
        ),
        entry(
            "g10 period-3 {9},{8},{}",
            Schedule::new(10, vec![], vec![set(&[9]), set(&[8]), DigitSet::EMPTY]).unwrap(),
            6,
        ),
        entry(
            "g10 preperiod {},{},{} then {9}",
            Schedule::new(10, vec![DigitSet::EMPTY; 3], vec![set(&[9])]).unwrap(),
            6,
        ),
        entry(
            "g10 preperiod {1} then {2},{3}",
            Schedule::new(10, vec![set(&[1])], vec![set(&[2]), set(&[3])]).unwrap(),
            6,
        ),
        entry(
            "g2 nothing survives",
            Schedule::constant(2, set(&[1])).unwrap(),
            12,
        ),
        entry(
            "g2 repunits only",
            Schedule::constant(2, set(&[0])).unwrap(),
            12,
        ),
        entry(
            "g3 no ones",
            Schedule::constant(3, set(&[1])).unwrap(),
            12,
        ),
        entry(
            "g3 odd lengths only",
            Schedule::new(3, vec![], vec![set(&[0]), set(&[1, 2])]).unwrap(),
            12,
        ),
    ]
}
