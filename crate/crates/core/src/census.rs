//! Membership tests, exact interval counts, and streaming enumeration.
//!
//! The m-digit members of a schedule's set occupy `I_m = [g^(m-1), g^m - 1]`.
//! Their exact number is a product of per-position allowed-digit counts with
//! a leading-digit correction when the top position may carry 0. The count,
//! the digit odometer behind [`enumerate_interval`], and the direct scan in
//! [`brute_force_count`] deliberately share no code, so the three paths
//! validate each other.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::schedule::Schedule;

/// Hard cap on the integers a brute-force interval scan may touch.
pub const BRUTE_FORCE_SCAN_LIMIT: u64 = 1_000_000_000;

/// Counting and enumeration errors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error(
        "IntervalTooLarge: scanning every integer with up to {m} base-g digits \
         exceeds the {limit}-integer brute-force guard"
    )]
    IntervalTooLarge { m: u64, limit: u64 },
    #[error("EnumerationTooLarge: {m}-digit members exceed the enumeration guard")]
    EnumerationTooLarge { m: u64 },
}

/// How a census count was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CountMethod {
    ClosedForm,
    Enumerated,
}

impl CountMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            CountMethod::ClosedForm => "ClosedForm",
            CountMethod::Enumerated => "Enumerated",
        }
    }
}

/// Exact population of one digit-length interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalCensus {
    pub m: u64,
    /// Whether any m-digit member exists at all.
    pub in_m: bool,
    pub count: BigUint,
    pub method: CountMethod,
}

impl IntervalCensus {
    pub fn to_row(&self) -> CensusRow {
        CensusRow {
            m: self.m,
            in_m: self.in_m,
            count: self.count.to_string(),
            method: self.method,
        }
    }
}

/// CSV header matching [`CensusRow::csv_line`].
pub const CENSUS_CSV_HEADER: &str = "m,in_M,count,method";

/// Wire form of a census entry; `count` is the full decimal rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub m: u64,
    #[serde(rename = "in_M")]
    pub in_m: bool,
    pub count: String,
    pub method: CountMethod,
}

impl CensusRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{}",
            self.m,
            self.in_m,
            self.count,
            self.method.as_str()
        )
    }
}

/// One enumerated member: its value and base-`g` digits, least significant
/// digit first. The top digit is never 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member {
    pub value: u64,
    pub digits: Vec<u8>,
}

/// Whether every digit of `n` avoids the forbidden set at its position.
/// 0 is not a positive integer and is never a member.
pub fn is_member(schedule: &Schedule, n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let g = schedule.g() as u64;
    let mut rest = n;
    let mut position = 0u64;
    while rest > 0 {
        let digit = (rest % g) as u8;
        if schedule.forbidden_at(position).contains(digit) {
            return false;
        }
        rest /= g;
        position += 1;
    }
    true
}

/// Exact `|A ∩ I_m|` by the closed-form product.
///
/// When the leading position may carry 0 the product over all positions
/// over-counts by one leading choice, so that position's factor is replaced
/// by `g - |U_{m-1}| - 1`; the result stays in integer arithmetic throughout.
pub fn interval_count(schedule: &Schedule, m: u64) -> IntervalCensus {
    debug_assert!(m >= 1);
    if !schedule.in_m_set(m) {
        return IntervalCensus {
            m,
            in_m: false,
            count: BigUint::zero(),
            method: CountMethod::ClosedForm,
        };
    }
    let g = schedule.g();
    let lead = schedule.forbidden_at(m - 1);
    let mut profile = schedule.digit_profile(m);
    let lead_allows_zero = !lead.contains(0);
    if lead_allows_zero {
        profile[lead.card() as usize] -= 1;
    }
    let mut count = BigUint::one();
    for (k, &positions) in profile.iter().enumerate() {
        let base = g - k as u32;
        if positions > 0 && base > 1 {
            count *= pow_u64(base, positions);
        }
    }
    if lead_allows_zero {
        count *= BigUint::from(g - lead.card() - 1);
    }
    IntervalCensus {
        m,
        in_m: true,
        count,
        method: CountMethod::ClosedForm,
    }
}

fn pow_u64(base: u32, exponent: u64) -> BigUint {
    let big = BigUint::from(base);
    if exponent <= u32::MAX as u64 {
        big.pow(exponent as u32)
    } else {
        // square out the high part; exponents this size are only reachable
        // through direct library calls, never the CLI guards
        let half = big.pow((exponent / 2) as u32);
        let rem = big.pow((exponent % 2) as u32);
        &half * &half * rem
    }
}

/// Natural log of `|A ∩ I_m|`, or `None` for unpopulated lengths. Stays
/// accurate where the exact count would span thousands of digits.
pub fn log_count(schedule: &Schedule, m: u64) -> Option<f64> {
    if !schedule.in_m_set(m) {
        return None;
    }
    let g = schedule.g();
    let profile = schedule.digit_profile(m);
    let mut ln = 0.0f64;
    for (k, &positions) in profile.iter().enumerate() {
        if positions > 0 {
            ln += positions as f64 * ((g - k as u32) as f64).ln();
        }
    }
    let lead = schedule.forbidden_at(m - 1);
    if !lead.contains(0) {
        let s = lead.card();
        ln += ((g - s - 1) as f64 / (g - s) as f64).ln();
    }
    Some(ln)
}

/// Streams the members of `I_m` in increasing order.
///
/// A digit odometer walks the per-position allowed lists (ascending, most
/// significant position slowest), so memory stays constant no matter how
/// populous the interval. Errs only when m-digit values overflow 64 bits;
/// an unpopulated interval yields an empty stream.
pub fn enumerate_interval(schedule: &Schedule, m: u64) -> Result<IntervalMembers, CensusError> {
    debug_assert!(m >= 1);
    let g = schedule.g();
    let mut bound: u128 = 1;
    for _ in 0..m {
        bound *= g as u128;
        if bound > u64::MAX as u128 + 1 {
            return Err(CensusError::EnumerationTooLarge { m });
        }
    }
    let m = m as usize;
    let mut allowed = Vec::with_capacity(m);
    for i in 0..m {
        let forbidden = schedule.forbidden_at(i as u64);
        let exclude_zero = i == m - 1;
        let digits: Vec<u8> = (0..g as u8)
            .filter(|&d| !forbidden.contains(d) && !(exclude_zero && d == 0))
            .collect();
        allowed.push(digits);
    }
    let empty = allowed.last().is_none_or(Vec::is_empty);
    let mut powers = Vec::with_capacity(m);
    let mut p = 1u64;
    for _ in 0..m {
        powers.push(p);
        p = p.wrapping_mul(g as u64); // the final wrap is never read back
    }
    Ok(IntervalMembers {
        allowed,
        powers,
        idx: vec![0; m],
        done: empty,
    })
}

/// Odometer state behind [`enumerate_interval`].
#[derive(Debug, Clone)]
pub struct IntervalMembers {
    allowed: Vec<Vec<u8>>,
    powers: Vec<u64>,
    idx: Vec<usize>,
    done: bool,
}

impl Iterator for IntervalMembers {
    type Item = Member;

    fn next(&mut self) -> Option<Member> {
        if self.done {
            return None;
        }
        let mut value = 0u64;
        let mut digits = Vec::with_capacity(self.idx.len());
        for (i, &choice) in self.idx.iter().enumerate() {
            let d = self.allowed[i][choice];
            digits.push(d);
            value += self.powers[i] * d as u64;
        }
        let mut pos = 0;
        loop {
            if pos == self.idx.len() {
                self.done = true;
                break;
            }
            self.idx[pos] += 1;
            if self.idx[pos] < self.allowed[pos].len() {
                break;
            }
            self.idx[pos] = 0;
            pos += 1;
        }
        Some(Member { value, digits })
    }
}

/// Counts the interval by streaming the odometer, stopping once the count
/// passes `max_members`.
pub fn interval_count_enumerated(
    schedule: &Schedule,
    m: u64,
    max_members: u64,
) -> Result<IntervalCensus, CensusError> {
    let mut n = 0u64;
    for _ in enumerate_interval(schedule, m)? {
        n += 1;
        if n > max_members {
            return Err(CensusError::EnumerationTooLarge { m });
        }
    }
    Ok(IntervalCensus {
        m,
        in_m: schedule.in_m_set(m),
        count: BigUint::from(n),
        method: CountMethod::Enumerated,
    })
}

/// Recounts `I_m` by testing every integer in it, one by one.
///
/// This is the independent oracle for [`interval_count`]: it never consults
/// the product formula or the odometer.
pub fn brute_force_count(schedule: &Schedule, m: u64) -> Result<u64, CensusError> {
    debug_assert!(m >= 1);
    let g = schedule.g() as u128;
    let mut end: u128 = 1;
    for _ in 0..m {
        end *= g;
        if end > BRUTE_FORCE_SCAN_LIMIT as u128 {
            return Err(CensusError::IntervalTooLarge {
                m,
                limit: BRUTE_FORCE_SCAN_LIMIT,
            });
        }
    }
    let start = (end / g) as u64;
    let end = end as u64;
    let mut count = 0u64;
    for n in start..end {
        if is_member(schedule, n) {
            count += 1;
        }
    }
    Ok(count)
}
