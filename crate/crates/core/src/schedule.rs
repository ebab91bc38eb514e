//! Forbidden-digit schedules over a fixed radix.
//!
//! A [`Schedule`] pairs a radix `g` with an eventually periodic sequence of
//! forbidden-digit sets `U_0, U_1, ...`, one per digit position, least
//! significant position first. Position `i` of a candidate integer may carry
//! any base-`g` digit except those in `U_i`.
//!
//! Construction derives everything the counting and series layers need: the
//! frequency `alpha[k]` of positions forbidding exactly `k` digits (an exact
//! rational), a certified uniform bound `beta` on how far any prefix count
//! strays from `alpha[k] * m`, and whether infinitely many digit lengths
//! admit members at all.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Smallest supported radix.
pub const MIN_RADIX: u32 = 2;

/// Largest supported radix, so a digit set fits one machine word.
pub const MAX_RADIX: u32 = 64;

/// Schedule validation errors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("RadixTooSmall: radix g = {g} is below the minimum of 2")]
    RadixTooSmall { g: u32 },
    #[error("RadixTooLarge: radix g = {g} exceeds the supported maximum of 64")]
    RadixTooLarge { g: u32 },
    #[error("EmptyPeriod: the periodic part must contain at least one digit set")]
    EmptyPeriod,
    #[error("DigitOutOfRange: digit {digit} is not a base-{g} digit")]
    DigitOutOfRange { digit: u8, g: u32 },
    #[error("ImproperDigitSet: a forbidden set may not contain every digit of the base-{g} alphabet")]
    ImproperDigitSet { g: u32 },
}

/// The forbidden digits at one position, stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DigitSet {
    mask: u64,
}

impl DigitSet {
    /// The set forbidding nothing.
    pub const EMPTY: DigitSet = DigitSet { mask: 0 };

    /// Builds a set from digit values.
    ///
    /// Panics if a digit is 64 or larger; range checks against the actual
    /// radix happen when the set enters a [`Schedule`].
    pub fn from_digits<I: IntoIterator<Item = u8>>(digits: I) -> DigitSet {
        let mut mask = 0u64;
        for d in digits {
            assert!(
                (d as u32) < MAX_RADIX,
                "digit {d} does not fit a 64-bit digit set"
            );
            mask |= 1 << d;
        }
        DigitSet { mask }
    }

    /// The set forbidding exactly one digit.
    pub fn single(digit: u8) -> DigitSet {
        DigitSet::from_digits([digit])
    }

    pub fn contains(self, digit: u8) -> bool {
        (digit as u32) < MAX_RADIX && self.mask >> digit & 1 == 1
    }

    /// Number of forbidden digits.
    pub fn card(self) -> u32 {
        self.mask.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    /// Forbidden digits in ascending order.
    pub fn digits(self) -> impl Iterator<Item = u8> {
        (0..MAX_RADIX as u8).filter(move |&d| self.contains(d))
    }

    fn mask(self) -> u64 {
        self.mask
    }
}

impl fmt::Debug for DigitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.digits()).finish()
    }
}

/// Every digit of the base-`g` alphabet.
fn alphabet_mask(g: u32) -> u64 {
    if g == MAX_RADIX {
        u64::MAX
    } else {
        (1u64 << g) - 1
    }
}

/// The digits `[1, g-1]`. A leading position forbidding exactly these admits
/// no member, because the remaining digit 0 cannot lead.
fn nonzero_mask(g: u32) -> u64 {
    alphabet_mask(g) & !1
}

/// A validated radix plus eventually periodic forbidden-digit sequence.
///
/// Immutable after construction; every operation is a pure read, so shared
/// references may cross threads freely.
#[derive(Debug, Clone)]
pub struct Schedule {
    g: u32,
    preperiod: Vec<DigitSet>,
    period: Vec<DigitSet>,
    /// `alpha[k]` = fraction of period positions forbidding exactly k digits.
    alpha: Vec<Ratio<u64>>,
    /// Integer strictly dominating every prefix deviation `|epsilon_k(m)|`.
    beta: u64,
    m_set_infinite: bool,
    /// Largest populated digit length when only finitely many exist;
    /// `None` there means no length is populated. Meaningless (always
    /// `None`) when `m_set_infinite`.
    finite_m_max: Option<u64>,
    /// `pre_prefix[j][k]` = positions among the first j preperiod entries
    /// forbidding exactly k digits; `period_prefix` likewise for the period.
    pre_prefix: Vec<Vec<u64>>,
    period_prefix: Vec<Vec<u64>>,
}

impl Schedule {
    /// Validates and builds a schedule, deriving `alpha`, `beta`, and the
    /// populated-lengths classification.
    pub fn new(
        g: u32,
        preperiod: Vec<DigitSet>,
        period: Vec<DigitSet>,
    ) -> Result<Schedule, ScheduleError> {
        if g < MIN_RADIX {
            return Err(ScheduleError::RadixTooSmall { g });
        }
        if g > MAX_RADIX {
            return Err(ScheduleError::RadixTooLarge { g });
        }
        if period.is_empty() {
            return Err(ScheduleError::EmptyPeriod);
        }
        let alphabet = alphabet_mask(g);
        for set in preperiod.iter().chain(period.iter()) {
            let stray = set.mask() & !alphabet;
            if stray != 0 {
                let digit = (63 - stray.leading_zeros()) as u8;
                return Err(ScheduleError::DigitOutOfRange { digit, g });
            }
            if set.mask() == alphabet {
                return Err(ScheduleError::ImproperDigitSet { g });
            }
        }

        let build_prefix = |sets: &[DigitSet]| {
            let mut table = Vec::with_capacity(sets.len() + 1);
            table.push(vec![0u64; g as usize]);
            for (j, set) in sets.iter().enumerate() {
                let mut next = table[j].clone();
                next[set.card() as usize] += 1;
                table.push(next);
            }
            table
        };
        let pre_prefix = build_prefix(&preperiod);
        let period_prefix = build_prefix(&period);

        let period_len = period.len() as u64;
        let alpha = period_prefix[period.len()]
            .iter()
            .map(|&c| Ratio::new(c, period_len))
            .collect();

        let nonzero = nonzero_mask(g);
        let m_set_infinite = period.iter().any(|set| set.mask() != nonzero);
        let finite_m_max = if m_set_infinite {
            None
        } else {
            preperiod
                .iter()
                .rposition(|set| set.mask() != nonzero)
                .map(|j| j as u64 + 1)
        };

        let mut schedule = Schedule {
            g,
            preperiod,
            period,
            alpha,
            beta: 0,
            m_set_infinite,
            finite_m_max,
            pre_prefix,
            period_prefix,
        };
        schedule.beta = schedule.certify_epsilon_bound();
        Ok(schedule)
    }

    /// Shorthand for a schedule forbidding the same set at every position.
    pub fn constant(g: u32, forbidden: DigitSet) -> Result<Schedule, ScheduleError> {
        Schedule::new(g, Vec::new(), vec![forbidden])
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn preperiod(&self) -> &[DigitSet] {
        &self.preperiod
    }

    pub fn period(&self) -> &[DigitSet] {
        &self.period
    }

    /// Exact position-frequency of each forbidden-set size, indexed by size.
    /// Entries sum to 1.
    pub fn alpha(&self) -> &[Ratio<u64>] {
        &self.alpha
    }

    /// A certified bound: `|digit_profile(m)[k] - alpha[k] * m| < beta` for
    /// every `m >= 1` and every `k`. Always a positive integer value.
    pub fn epsilon_bound(&self) -> f64 {
        self.beta as f64
    }

    /// Whether infinitely many digit lengths admit members.
    pub fn m_set_infinite(&self) -> bool {
        self.m_set_infinite
    }

    /// Largest populated digit length when only finitely many exist
    /// (`None` = none at all). Only meaningful when `m_set_infinite()` is
    /// false.
    pub fn finite_m_set_max(&self) -> Option<u64> {
        self.finite_m_max
    }

    /// The forbidden set `U_i` at position `i`.
    pub fn forbidden_at(&self, i: u64) -> DigitSet {
        let p = self.preperiod.len() as u64;
        if i < p {
            self.preperiod[i as usize]
        } else {
            self.period[((i - p) % self.period.len() as u64) as usize]
        }
    }

    /// Whether any integer with exactly `m` base-`g` digits survives the
    /// schedule: true unless `U_{m-1}` forbids every nonzero digit.
    pub fn in_m_set(&self, m: u64) -> bool {
        debug_assert!(m >= 1);
        self.forbidden_at(m - 1).mask() != nonzero_mask(self.g)
    }

    /// Entry `k` counts positions `i < m` with `|U_i| = k`; entries sum to
    /// `m`. Whole periods are batched, so the cost is `O(g + period)`,
    /// independent of `m`.
    pub fn digit_profile(&self, m: u64) -> Vec<u64> {
        let p = self.preperiod.len() as u64;
        let l = self.period.len() as u64;
        if m <= p {
            return self.pre_prefix[m as usize].clone();
        }
        let whole = (m - p) / l;
        let rem = ((m - p) % l) as usize;
        let full_pre = &self.pre_prefix[self.preperiod.len()];
        let full_period = &self.period_prefix[self.period.len()];
        (0..self.g as usize)
            .map(|k| full_pre[k] + whole * full_period[k] + self.period_prefix[rem][k])
            .collect()
    }

    /// Finds the smallest integer strictly above every prefix deviation.
    ///
    /// The deviation repeats once the prefix clears the preperiod (a whole
    /// period adds exactly `alpha[k] * len` to each count), so scanning one
    /// preperiod plus one period attains the global maximum.
    fn certify_epsilon_bound(&self) -> u64 {
        let l = self.period.len() as i128;
        let counts = &self.period_prefix[self.period.len()];
        let window = (self.preperiod.len() + self.period.len()) as u64;
        let mut max_dev_num: i128 = 0;
        for m in 1..=window {
            let profile = self.digit_profile(m);
            for k in 0..self.g as usize {
                let dev = profile[k] as i128 * l - counts[k] as i128 * m as i128;
                max_dev_num = max_dev_num.max(dev.abs());
            }
        }
        (max_dev_num / l) as u64 + 1
    }

    /// The serializable description this schedule was (or could have been)
    /// built from, digits listed in ascending order.
    pub fn to_spec(&self) -> ScheduleSpec {
        let render = |sets: &[DigitSet]| sets.iter().map(|s| s.digits().collect()).collect();
        ScheduleSpec {
            g: self.g,
            preperiod: render(&self.preperiod),
            period: render(&self.period),
        }
    }
}

/// On-disk schedule description: one digit list per position, preperiod
/// first, then the repeating period.
///
/// `{"g":10,"preperiod":[],"period":[[9]]}` forbids the digit 9 everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    pub g: u32,
    pub preperiod: Vec<Vec<u8>>,
    pub period: Vec<Vec<u8>>,
}

impl ScheduleSpec {
    pub fn from_json(text: &str) -> Result<ScheduleSpec, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("schedule spec serializes")
    }

    pub fn to_schedule(&self) -> Result<Schedule, ScheduleError> {
        if self.g < MIN_RADIX {
            return Err(ScheduleError::RadixTooSmall { g: self.g });
        }
        if self.g > MAX_RADIX {
            return Err(ScheduleError::RadixTooLarge { g: self.g });
        }
        let convert = |lists: &[Vec<u8>]| -> Result<Vec<DigitSet>, ScheduleError> {
            lists
                .iter()
                .map(|digits| {
                    for &d in digits {
                        if d as u32 >= self.g {
                            return Err(ScheduleError::DigitOutOfRange { digit: d, g: self.g });
                        }
                    }
                    Ok(DigitSet::from_digits(digits.iter().copied()))
                })
                .collect()
        };
        Schedule::new(self.g, convert(&self.preperiod)?, convert(&self.period)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(digits: &[u8]) -> DigitSet {
        DigitSet::from_digits(digits.iter().copied())
    }

    #[test]
    fn constant_no_nines_frequencies() {
        let s = Schedule::constant(10, DigitSet::single(9)).unwrap();
        assert_eq!(s.alpha()[1], Ratio::new(1, 1));
        for k in [0usize, 2, 3, 4, 5, 6, 7, 8, 9] {
            assert_eq!(s.alpha()[k], Ratio::new(0, 1));
        }
        assert!(s.m_set_infinite());
    }

    #[test]
    fn unrestricted_schedule_frequencies() {
        let s = Schedule::constant(10, DigitSet::EMPTY).unwrap();
        assert_eq!(s.alpha()[0], Ratio::new(1, 1));
        assert!(s.m_set_infinite());
    }

    #[test]
    fn full_alphabet_rejected() {
        let full = set(&[0, 1, 2, 3, 4, 5, 6, 7, 8, 9]);
        assert_eq!(
            Schedule::constant(10, full).unwrap_err(),
            ScheduleError::ImproperDigitSet { g: 10 }
        );
    }

    #[test]
    fn radix_bounds_enforced() {
        assert_eq!(
            Schedule::constant(1, DigitSet::EMPTY).unwrap_err(),
            ScheduleError::RadixTooSmall { g: 1 }
        );
        assert_eq!(
            Schedule::constant(65, DigitSet::EMPTY).unwrap_err(),
            ScheduleError::RadixTooLarge { g: 65 }
        );
        assert_eq!(
            Schedule::new(10, vec![], vec![]).unwrap_err(),
            ScheduleError::EmptyPeriod
        );
        assert_eq!(
            Schedule::constant(10, DigitSet::single(10)).unwrap_err(),
            ScheduleError::DigitOutOfRange { digit: 10, g: 10 }
        );
    }

    #[test]
    fn forbidden_at_walks_preperiod_then_cycles() {
        let s = Schedule::new(10, vec![set(&[1])], vec![set(&[2]), set(&[3])]).unwrap();
        assert_eq!(s.forbidden_at(0), set(&[1]));
        assert_eq!(s.forbidden_at(1), set(&[2]));
        assert_eq!(s.forbidden_at(2), set(&[3]));
        assert_eq!(s.forbidden_at(4), set(&[3]));
        let constant = Schedule::constant(10, DigitSet::single(9)).unwrap();
        assert_eq!(constant.forbidden_at(1_000_000), set(&[9]));
    }

    #[test]
    fn digit_profile_matches_hand_scan() {
        let constant = Schedule::constant(10, DigitSet::single(9)).unwrap();
        let mut expected = vec![0u64; 10];
        expected[1] = 5;
        assert_eq!(constant.digit_profile(5), expected);

        // alternating {9}, {} over positions 0..5 gives sizes 1,0,1,0,1
        let alt = Schedule::new(10, vec![], vec![set(&[9]), DigitSet::EMPTY]).unwrap();
        let mut expected = vec![0u64; 10];
        expected[0] = 2;
        expected[1] = 3;
        assert_eq!(alt.digit_profile(5), expected);

        let mut expected = vec![0u64; 10];
        expected[1] = 1;
        assert_eq!(alt.digit_profile(1), expected);
    }

    #[test]
    fn epsilon_bound_certified_values() {
        let constant = Schedule::constant(10, DigitSet::single(9)).unwrap();
        assert_eq!(constant.epsilon_bound(), 1.0);

        let alt = Schedule::new(10, vec![], vec![set(&[9]), DigitSet::EMPTY]).unwrap();
        assert_eq!(alt.epsilon_bound(), 1.0);

        let pre = Schedule::new(
            10,
            vec![DigitSet::EMPTY, DigitSet::EMPTY, DigitSet::EMPTY],
            vec![set(&[9])],
        )
        .unwrap();
        assert_eq!(pre.epsilon_bound(), 4.0);
    }

    #[test]
    fn epsilon_bound_holds_over_long_prefixes() {
        let schedules = [
            Schedule::new(10, vec![set(&[1])], vec![set(&[2, 3]), DigitSet::EMPTY]).unwrap(),
            Schedule::new(
                10,
                vec![DigitSet::EMPTY; 3],
                vec![set(&[9]), set(&[0, 5]), set(&[7])],
            )
            .unwrap(),
        ];
        for s in &schedules {
            let l = s.period().len() as i128;
            let beta = s.epsilon_bound() as i128;
            let counts: Vec<i128> = (0..s.g() as usize)
                .map(|k| {
                    s.period()
                        .iter()
                        .filter(|set| set.card() as usize == k)
                        .count() as i128
                })
                .collect();
            let window = (s.preperiod().len() + 3 * s.period().len()) as u64;
            for m in 1..=window {
                let profile = s.digit_profile(m);
                for k in 0..s.g() as usize {
                    let dev = (profile[k] as i128 * l - counts[k] * m as i128).abs();
                    assert!(dev < beta * l, "m={m} k={k} dev={dev}");
                }
            }
        }
    }

    #[test]
    fn alpha_sums_to_one_exactly() {
        let s = Schedule::new(
            12,
            vec![set(&[1, 2])],
            vec![set(&[0]), set(&[3, 4, 5]), DigitSet::EMPTY],
        )
        .unwrap();
        let total: Ratio<u64> = s.alpha().iter().sum();
        assert_eq!(total, Ratio::new(1, 1));
    }

    #[test]
    fn populated_lengths_classification() {
        // all-nonzero forbidden at every position: nothing survives
        let empty = Schedule::constant(2, DigitSet::single(1)).unwrap();
        assert!(!empty.m_set_infinite());
        assert_eq!(empty.finite_m_set_max(), None);

        // only the preperiod admits members
        let finite = Schedule::new(
            3,
            vec![DigitSet::EMPTY, set(&[0]), DigitSet::EMPTY],
            vec![set(&[1, 2])],
        )
        .unwrap();
        assert!(!finite.m_set_infinite());
        assert_eq!(finite.finite_m_set_max(), Some(3));
        assert!(finite.in_m_set(2));
        assert!(!finite.in_m_set(4));
    }

    #[test]
    fn spec_round_trip() {
        let text = r#"{"g":10,"preperiod":[[1]],"period":[[2,3],[]]}"#;
        let spec = ScheduleSpec::from_json(text).unwrap();
        let schedule = spec.to_schedule().unwrap();
        assert_eq!(schedule.to_spec(), spec);
        assert_eq!(ScheduleSpec::from_json(&spec.to_json()).unwrap(), spec);
    }

    #[test]
    fn spec_digit_above_radix_rejected() {
        let spec = ScheduleSpec {
            g: 10,
            preperiod: vec![],
            period: vec![vec![12]],
        };
        assert_eq!(
            spec.to_schedule().unwrap_err(),
            ScheduleError::DigitOutOfRange { digit: 12, g: 10 }
        );
        // digits that cannot even be bit-indexed must not panic
        let wide = ScheduleSpec {
            g: 64,
            preperiod: vec![],
            period: vec![vec![70]],
        };
        assert_eq!(
            wide.to_schedule().unwrap_err(),
            ScheduleError::DigitOutOfRange { digit: 70, g: 64 }
        );
    }

    #[test]
    fn schedules_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Schedule>();
        assert_send_sync::<DigitSet>();
    }

    #[test]
    fn radix_64_masks_do_not_overflow() {
        let s = Schedule::constant(64, DigitSet::single(63)).unwrap();
        assert!(s.m_set_infinite());
        assert!(s.in_m_set(1));
        let nearly_full = DigitSet::from_digits(1..64);
        let t = Schedule::constant(64, nearly_full).unwrap();
        assert!(!t.m_set_infinite());
    }
}
