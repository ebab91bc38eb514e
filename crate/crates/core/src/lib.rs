//! Integers with forbidden base-`g` digits: exact counting, ordered
//! enumeration, and rigorous analysis of their reciprocal-power series.
//!
//! A [`Schedule`] fixes a radix and an eventually periodic rule assigning
//! each digit position a set of forbidden digits. The classic example
//! forbids the digit 9 everywhere in base 10; summing the reciprocals of
//! the surviving integers gives a convergent series even though the
//! harmonic series diverges, and the exponent where convergence stops is an
//! explicit ratio of logarithms.
//!
//! The crate is organized in three layers:
//!
//! - [`schedule`] — the radix/forbidden-digit model and its derived
//!   frequency data;
//! - [`census`] — membership, exact per-interval counts (closed form and
//!   two independent oracles), streaming enumeration;
//! - [`series`] — the critical abscissa, compensated partial sums with
//!   two-sided tail enclosures, growth-rate estimates, and divergence
//!   certificates.
//!
//! Everything is deterministic and side-effect free; schedules are
//! immutable and safe to share across threads.

pub mod census;
pub mod schedule;
pub mod series;

pub use census::{
    brute_force_count, enumerate_interval, interval_count, interval_count_enumerated, is_member,
    log_count, CensusError, CensusRow, CountMethod, IntervalCensus, IntervalMembers, Member,
    BRUTE_FORCE_SCAN_LIMIT, CENSUS_CSV_HEADER,
};
pub use schedule::{DigitSet, Schedule, ScheduleError, ScheduleSpec, MAX_RADIX, MIN_RADIX};
pub use series::{
    abscissa, classify, critical_ratio, divergence_certificate, empirical_abscissa, evaluate,
    evaluate_with_limit, AbscissaReport, AbscissaTerm, Classification, ConvergenceVerdict,
    DivergenceCertificate, EnclosureVerdict, SeriesEnclosure, SeriesError, CRITICAL_TOLERANCE,
    DEFAULT_MAX_ENUM_MEMBERS,
};
