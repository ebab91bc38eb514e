//! The reciprocal-power series over a schedule's members: its critical
//! exponent, rigorous partial-sum enclosures, growth-based estimates, and
//! divergence certificates.
//!
//! For a schedule with position frequencies `alpha[k]`, the series
//! `sum 1/a^sigma` over all members converges exactly when `sigma` exceeds
//!
//! ```text
//! sigma_c = (sum_k alpha[k] * ln(g - k)) / ln g
//! ```
//!
//! and diverges at and below `sigma_c` whenever infinitely many digit
//! lengths are populated (the bounded-deviation property every eventually
//! periodic schedule enjoys makes the critical point itself divergent).
//! When only finitely many lengths are populated the series is a finite sum,
//! entire in `sigma`, and the question dissolves.

use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::census::{enumerate_interval, interval_count, log_count, CensusError};
use crate::schedule::Schedule;

use num_rational::Ratio;

/// Half-width of the float band around `sigma_c` treated as "at the
/// critical point" for classification and certificate admission.
pub const CRITICAL_TOLERANCE: f64 = 1e-12;

/// Default cap on how many members [`evaluate`] may enumerate.
pub const DEFAULT_MAX_ENUM_MEMBERS: u64 = 100_000_000;

/// Series-level errors.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("EmptyInterval: no member has exactly {m} digits")]
    EmptyInterval { m: u64 },
    #[error(
        "TailNotClosable: sigma = {sigma} is too close to the critical abscissa; \
         the per-period tail ratio {ratio} is not below 1 (raise sigma or the counted depth)"
    )]
    TailNotClosable { sigma: f64, ratio: f64 },
    #[error(
        "EnumerationTooLarge: enumerating every member through depth {m} \
         exceeds the {limit}-member cap"
    )]
    EnumerationTooLarge { m: u64, limit: u64 },
    #[error(
        "SigmaAboveCritical: sigma = {sigma} lies above the critical abscissa {sigma_c}; \
         nothing diverges there"
    )]
    SigmaAboveCritical { sigma: f64, sigma_c: f64 },
    #[error(
        "MSetFinite: only finitely many digit lengths are populated, \
         so the series is a finite sum and never diverges"
    )]
    MSetFinite,
    #[error(transparent)]
    Census(#[from] CensusError),
}

/// One `alpha[k] * ln(g - k)` contribution to the critical abscissa, kept
/// symbolic: an exact rational weight and an integer log argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AbscissaTerm {
    pub alpha: Ratio<u64>,
    /// The log argument `g - k`.
    pub base: u32,
}

/// The critical abscissa in symbolic and floating form.
#[derive(Debug, Clone, PartialEq)]
pub struct AbscissaReport {
    /// Terms with positive weight; `value` is their weighted log sum over
    /// `ln g`.
    pub terms: Vec<AbscissaTerm>,
    pub value: f64,
    /// True exactly when infinitely many digit lengths are populated: the
    /// bounded prefix deviation then forces divergence at the critical
    /// point itself.
    pub diverges_at_sigma_c: bool,
    pub m_set_infinite: bool,
}

/// Convergence status of the series at one real exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConvergenceVerdict {
    Converges,
    Diverges,
    Polynomial,
}

impl ConvergenceVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            ConvergenceVerdict::Converges => "Converges",
            ConvergenceVerdict::Diverges => "Diverges",
            ConvergenceVerdict::Polynomial => "Polynomial",
        }
    }
}

/// A verdict plus a flag marking exponents within float resolution of the
/// critical abscissa, where the sign of `sigma - sigma_c` is numerically
/// meaningless; the verdict there rests on the divergence of the critical
/// point itself, not on the float comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub verdict: ConvergenceVerdict,
    pub critical: bool,
}

impl Classification {
    pub fn diverges(&self) -> bool {
        self.verdict == ConvergenceVerdict::Diverges
    }
}

/// How an evaluation closed (or failed to close) the series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EnclosureVerdict {
    ConvergentEnclosed,
    DivergentCertified,
    Polynomial,
}

impl EnclosureVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            EnclosureVerdict::ConvergentEnclosed => "ConvergentEnclosed",
            EnclosureVerdict::DivergentCertified => "DivergentCertified",
            EnclosureVerdict::Polynomial => "Polynomial",
        }
    }
}

/// Rigorous two-sided information about the series at one exponent.
///
/// `partial_sum` is the exact (compensated) sum over every enumerated
/// member. `lower_bound` adds the per-interval floor `count * g^(-m*sigma)`
/// for each counted-but-not-enumerated interval, so it bounds the full
/// series from below; `upper_bound` adds the matching ceilings and, in the
/// convergent case, a geometric closure of everything beyond the counted
/// range. `None` stands for +infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesEnclosure {
    pub sigma: f64,
    pub m_enumerated: u64,
    pub m_counted: u64,
    pub partial_sum: f64,
    pub lower_bound: f64,
    pub upper_bound: Option<f64>,
    pub verdict: EnclosureVerdict,
}

/// Evidence of divergence at or below the critical abscissa: exact-count
/// partial sums that grow without bound, plus the cruder uniform floor they
/// must dominate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceCertificate {
    pub sigma: f64,
    pub sigma_c: f64,
    /// Uniform per-length floor `1 / (2 g^(g*beta))` implied by the
    /// deviation bound.
    pub template_constant: f64,
    /// `prod (g-k)^alpha_k / g^sigma_c`; equals 1 up to float noise.
    pub template_ratio: f64,
    /// The populated digit lengths the sum ranges over.
    pub m_range: Vec<u64>,
    /// `sum over m_range of count_m * g^(-m*sigma)`, each count exact.
    pub certified_sum_lower: f64,
}

impl DivergenceCertificate {
    /// The uniform floor summed over the same lengths:
    /// `template_constant * sum ratio^m`. The exact-count sum must dominate
    /// this.
    pub fn template_sum(&self) -> f64 {
        self.m_range
            .iter()
            .map(|&m| self.template_constant * self.template_ratio.powi(m as i32))
            .sum()
    }
}

/// Compensated accumulator; keeps long ascending sums reproducible to
/// roughly one rounding error total.
#[derive(Debug, Default, Clone, Copy)]
struct KahanSum {
    sum: f64,
    err: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let y = x - self.err;
        let t = self.sum + y;
        self.err = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum
    }
}

fn ratio_to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// The critical abscissa of the schedule's series, with its symbolic terms.
pub fn abscissa(schedule: &Schedule) -> AbscissaReport {
    let g = schedule.g();
    let mut terms = Vec::new();
    let mut weighted = 0.0f64;
    for (k, &alpha) in schedule.alpha().iter().enumerate() {
        if *alpha.numer() > 0 {
            let base = g - k as u32;
            weighted += ratio_to_f64(alpha) * (base as f64).ln();
            terms.push(AbscissaTerm { alpha, base });
        }
    }
    let value = weighted / (g as f64).ln();
    AbscissaReport {
        terms,
        value,
        diverges_at_sigma_c: schedule.m_set_infinite(),
        m_set_infinite: schedule.m_set_infinite(),
    }
}

/// Growth-rate estimate `ln(count_m) / (m ln g)` of the critical abscissa
/// from the exact population of one interval.
///
/// Each log term is divided by `m` before summation, so schedules whose
/// profile is an exact multiple of `m` reproduce [`abscissa`] to the bit.
/// Converges to the critical abscissa with error `O(1/m)`.
pub fn empirical_abscissa(schedule: &Schedule, m: u64) -> Result<f64, SeriesError> {
    if !schedule.in_m_set(m) {
        return Err(SeriesError::EmptyInterval { m });
    }
    let g = schedule.g();
    let profile = schedule.digit_profile(m);
    let mf = m as f64;
    let mut weighted = 0.0f64;
    for (k, &positions) in profile.iter().enumerate() {
        if positions > 0 {
            weighted += positions as f64 / mf * ((g - k as u32) as f64).ln();
        }
    }
    let lead = schedule.forbidden_at(m - 1);
    if !lead.contains(0) {
        let s = lead.card();
        weighted += ((g - s - 1) as f64 / (g - s) as f64).ln() / mf;
    }
    Ok(weighted / (g as f64).ln())
}

/// `prod (g-k)^alpha_k / g^sigma_c`, recomputed in floats from the symbolic
/// terms. Equals 1 by the definition of the critical abscissa; exposed so
/// callers can watch the identity hold.
pub fn critical_ratio(schedule: &Schedule) -> f64 {
    let report = abscissa(schedule);
    let weighted: f64 = report
        .terms
        .iter()
        .map(|t| ratio_to_f64(t.alpha) * (t.base as f64).ln())
        .sum();
    (weighted - report.value * (schedule.g() as f64).ln()).exp()
}

/// Classifies the series at `sigma`.
///
/// Populated lengths infinite: diverges for `sigma <= sigma_c` (the critical
/// point included), converges above. The `critical` flag marks exponents
/// within [`CRITICAL_TOLERANCE`] of the abscissa, where float comparison of
/// the two sides is no longer meaningful. Finitely many populated lengths:
/// the series is a finite sum, verdict `Polynomial`.
pub fn classify(schedule: &Schedule, sigma: f64) -> Classification {
    let report = abscissa(schedule);
    if !report.m_set_infinite {
        return Classification {
            verdict: ConvergenceVerdict::Polynomial,
            critical: false,
        };
    }
    let critical = (sigma - report.value).abs() < CRITICAL_TOLERANCE;
    let verdict = if sigma <= report.value {
        ConvergenceVerdict::Diverges
    } else {
        ConvergenceVerdict::Converges
    };
    Classification { verdict, critical }
}

/// [`evaluate_with_limit`] with the default enumeration cap.
pub fn evaluate(
    schedule: &Schedule,
    sigma: f64,
    m_enumerated: u64,
    m_counted: u64,
) -> Result<SeriesEnclosure, SeriesError> {
    evaluate_with_limit(schedule, sigma, m_enumerated, m_counted, DEFAULT_MAX_ENUM_MEMBERS)
}

/// Computes a rigorous enclosure of the series at `sigma`.
///
/// Members through depth `m_enumerated` are enumerated and their reciprocal
/// powers summed exactly (compensated, ascending within each interval,
/// intervals combined ascending). Intervals through `m_counted` contribute
/// bracketing terms from their exact counts: every m-digit member lies in
/// `[g^(m-1), g^m)`, so its reciprocal power lies between the interval
/// endpoints' (the endpoints swap roles when `sigma` is negative). Beyond
/// `m_counted`:
///
/// - above the critical abscissa, one period of intervals is bounded
///   explicitly and the rest closed geometrically (each further period
///   shrinks the bound by the same factor below 1);
/// - at or below it, with infinitely many populated lengths, the upper
///   bound is +infinity (`None`) and the enclosure certifies divergence;
/// - with finitely many populated lengths the counted range is extended
///   over all of them and the verdict is `Polynomial`.
pub fn evaluate_with_limit(
    schedule: &Schedule,
    sigma: f64,
    m_enumerated: u64,
    m_counted: u64,
    max_members: u64,
) -> Result<SeriesEnclosure, SeriesError> {
    let report = abscissa(schedule);
    let g = schedule.g();
    let ln_g = (g as f64).ln();

    let mut m_counted = m_counted.max(m_enumerated);
    if schedule.m_set_infinite() {
        // the geometric tail argument needs the counted range past the preperiod
        m_counted = m_counted.max(schedule.preperiod().len() as u64 + 1);
    } else if let Some(max_m) = schedule.finite_m_set_max() {
        m_counted = m_counted.max(max_m);
    }

    let mut budget = max_members;
    let mut enumerated = KahanSum::default();
    for m in 1..=m_enumerated {
        let census = interval_count(schedule, m);
        match census.count.to_u64() {
            Some(c) if c <= budget => budget -= c,
            _ => {
                return Err(SeriesError::EnumerationTooLarge {
                    m,
                    limit: max_members,
                })
            }
        }
        let mut interval_sum = KahanSum::default();
        for member in enumerate_interval(schedule, m)? {
            interval_sum.add((member.value as f64).powf(-sigma));
        }
        enumerated.add(interval_sum.value());
    }
    let partial_sum = enumerated.value();

    let mut bracket_lo = KahanSum::default();
    let mut bracket_hi = KahanSum::default();
    for m in (m_enumerated + 1)..=m_counted {
        let Some(ln_count) = log_count(schedule, m) else {
            continue;
        };
        let (lo_scale, hi_scale) = if sigma >= 0.0 {
            (m as f64, (m - 1) as f64)
        } else {
            ((m - 1) as f64, m as f64)
        };
        bracket_lo.add((ln_count - lo_scale * sigma * ln_g).exp());
        bracket_hi.add((ln_count - hi_scale * sigma * ln_g).exp());
    }
    let lower_bound = partial_sum + bracket_lo.value();
    let upper_partial = partial_sum + bracket_hi.value();

    if !schedule.m_set_infinite() {
        return Ok(SeriesEnclosure {
            sigma,
            m_enumerated,
            m_counted,
            partial_sum,
            lower_bound,
            upper_bound: Some(upper_partial),
            verdict: EnclosureVerdict::Polynomial,
        });
    }

    if sigma > report.value {
        // Tail closure. For m past the preperiod, the unrestricted-leading
        // bound u_m = prod_{i<m}(g-|U_i|) * g^(-(m-1)sigma) satisfies
        // u_{m+L} = ratio * u_m with one fixed ratio per period, so one
        // period block of terms closes the whole tail geometrically.
        let period = schedule.period();
        let period_len = period.len() as u64;
        let ln_ratio = period
            .iter()
            .map(|set| ((g - set.card()) as f64).ln())
            .sum::<f64>()
            - period_len as f64 * sigma * ln_g;
        if ln_ratio >= 0.0 {
            return Err(SeriesError::TailNotClosable {
                sigma,
                ratio: ln_ratio.exp(),
            });
        }
        let ratio = ln_ratio.exp();
        let mut block = KahanSum::default();
        for m in (m_counted + 1)..=(m_counted + period_len) {
            let profile = schedule.digit_profile(m);
            let ln_product: f64 = profile
                .iter()
                .enumerate()
                .filter(|&(_, &positions)| positions > 0)
                .map(|(k, &positions)| positions as f64 * ((g - k as u32) as f64).ln())
                .sum();
            block.add((ln_product - (m - 1) as f64 * sigma * ln_g).exp());
        }
        let tail = block.value() / (1.0 - ratio);
        return Ok(SeriesEnclosure {
            sigma,
            m_enumerated,
            m_counted,
            partial_sum,
            lower_bound,
            upper_bound: Some(upper_partial + tail),
            verdict: EnclosureVerdict::ConvergentEnclosed,
        });
    }

    Ok(SeriesEnclosure {
        sigma,
        m_enumerated,
        m_counted,
        partial_sum,
        lower_bound,
        upper_bound: None,
        verdict: EnclosureVerdict::DivergentCertified,
    })
}

/// Certifies divergence at (or below) the critical abscissa by summing
/// exact counts against `g^(-m*sigma)` over every populated length up to
/// `m_max`; the partial sums grow without bound in `m_max`.
///
/// The certificate also carries the uniform floor that the deviation bound
/// puts under each term, so callers can verify the exact-count sum
/// dominates it.
pub fn divergence_certificate(
    schedule: &Schedule,
    sigma: f64,
    m_max: u64,
) -> Result<DivergenceCertificate, SeriesError> {
    if !schedule.m_set_infinite() {
        return Err(SeriesError::MSetFinite);
    }
    let report = abscissa(schedule);
    if sigma > report.value + CRITICAL_TOLERANCE {
        return Err(SeriesError::SigmaAboveCritical {
            sigma,
            sigma_c: report.value,
        });
    }
    let g = schedule.g();
    let ln_g = (g as f64).ln();
    let mut m_range = Vec::new();
    let mut sum = KahanSum::default();
    for m in 1..=m_max {
        let Some(ln_count) = log_count(schedule, m) else {
            continue;
        };
        m_range.push(m);
        sum.add((ln_count - m as f64 * sigma * ln_g).exp());
    }
    let beta = schedule.epsilon_bound();
    let template_constant = (-(2.0f64.ln()) - g as f64 * beta * ln_g).exp();
    Ok(DivergenceCertificate {
        sigma,
        sigma_c: report.value,
        template_constant,
        template_ratio: critical_ratio(schedule),
        m_range,
        certified_sum_lower: sum.value(),
    })
}
