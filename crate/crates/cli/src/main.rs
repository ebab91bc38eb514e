//! `kempner`: analyze integer sets with forbidden base-g digits.
//!
//! Every command reads a schedule description file (JSON: radix plus
//! per-position forbidden digit lists) and emits a machine-readable report.
//! Reports carry the SHA-256 of the description file so result files stay
//! self-identifying, and identical invocations produce byte-identical
//! output.

use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kempner_core::{
    abscissa, brute_force_count, classify, divergence_certificate, empirical_abscissa,
    enumerate_interval, evaluate_with_limit, interval_count, interval_count_enumerated,
    CensusError, CensusRow, EnclosureVerdict, IntervalCensus, Schedule, ScheduleError,
    ScheduleSpec, SeriesError, CENSUS_CSV_HEADER, DEFAULT_MAX_ENUM_MEMBERS,
};
use num_bigint::BigUint;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

mod report;

use report::{
    CensusReport, CertifyReport, ClassifyReport, EnumerateReport, EstimateReport, EstimateRow,
    MemberRow, SigmaCReport, SumReport, TermReport,
};

#[derive(Debug, Error)]
enum CliError {
    #[error("SpecParseError: cannot read {path}: {source}")]
    SpecRead {
        path: String,
        source: std::io::Error,
    },
    #[error("SpecParseError: {path} is not a valid schedule description: {source}")]
    SpecParse {
        path: String,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("VerifyMismatch: closed form gives {closed} but {oracle} gives {observed} at m = {m}")]
    VerifyMismatch {
        m: u64,
        closed: String,
        oracle: &'static str,
        observed: String,
    },
    #[error("UsageError: KEMPNER_MAX_ENUM must be a nonnegative integer, got {0:?}")]
    BadEnumCap(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

/// Inclusive digit-length range: `a..b`, or a single length.
#[derive(Debug, Clone, Copy)]
struct LengthRange {
    start: u64,
    end: u64,
}

impl LengthRange {
    fn iter(self) -> impl Iterator<Item = u64> {
        self.start..=self.end
    }

    fn is_single(self) -> bool {
        self.start == self.end
    }
}

impl FromStr for LengthRange {
    type Err = String;

    fn from_str(s: &str) -> Result<LengthRange, String> {
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (
                a.trim()
                    .parse()
                    .map_err(|_| format!("bad range start {a:?}"))?,
                b.trim()
                    .parse()
                    .map_err(|_| format!("bad range end {b:?}"))?,
            ),
            None => {
                let v = s
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad digit length {s:?}"))?;
                (v, v)
            }
        };
        if start == 0 || end < start {
            return Err(format!("need 1 <= a <= b, got {s:?}"));
        }
        Ok(LengthRange { start, end })
    }
}

/// An exponent, or the literal `critical` meaning the schedule's abscissa.
#[derive(Debug, Clone, Copy)]
enum SigmaArg {
    Critical,
    Value(f64),
}

impl SigmaArg {
    fn resolve(self, schedule: &Schedule) -> f64 {
        match self {
            SigmaArg::Critical => abscissa(schedule).value,
            SigmaArg::Value(v) => v,
        }
    }
}

impl FromStr for SigmaArg {
    type Err = String;

    fn from_str(s: &str) -> Result<SigmaArg, String> {
        if s.trim() == "critical" {
            return Ok(SigmaArg::Critical);
        }
        s.trim()
            .parse()
            .map(SigmaArg::Value)
            .map_err(|_| format!("sigma must be a real number or `critical`, got {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct IoArgs {
    /// Schedule description file (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(
    name = "kempner",
    version,
    about = "Integer sets with forbidden base-g digits: exact censuses, series enclosures, divergence certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Critical abscissa of the schedule's reciprocal-power series.
    #[command(name = "sigma-c")]
    SigmaC {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Exact member count per digit length.
    Census {
        #[command(flatten)]
        io: IoArgs,
        /// Digit lengths, `a..b` inclusive or a single value.
        #[arg(long)]
        m: LengthRange,
        /// Recount each length by brute force and enumeration where
        /// feasible; any mismatch fails the run.
        #[arg(long)]
        verify: bool,
    },
    /// List every member at the given digit lengths, in increasing order.
    Enumerate {
        #[command(flatten)]
        io: IoArgs,
        /// Digit lengths, `a..b` inclusive or a single value.
        #[arg(long)]
        m: LengthRange,
    },
    /// Rigorous enclosure of the series at an exponent.
    Sum {
        #[command(flatten)]
        io: IoArgs,
        /// Exponent, or `critical` for the abscissa itself.
        #[arg(long)]
        sigma: SigmaArg,
        /// Enumerate members through this digit length.
        #[arg(long, default_value_t = 4)]
        enum_depth: u64,
        /// Bound intervals by exact counts through this digit length.
        #[arg(long, default_value_t = 40)]
        count_depth: u64,
    },
    /// Growth-rate estimate of the abscissa from exact counts.
    Estimate {
        #[command(flatten)]
        io: IoArgs,
        /// Digit lengths, `a..b` inclusive or a single value.
        #[arg(long)]
        m: LengthRange,
    },
    /// Divergence certificate at (or below) the critical abscissa.
    Certify {
        #[command(flatten)]
        io: IoArgs,
        /// Exponent, or `critical` for the abscissa itself.
        #[arg(long, default_value = "critical")]
        sigma: SigmaArg,
        /// Sum certified terms through this digit length.
        #[arg(long, default_value_t = 50)]
        m_max: u64,
    },
    /// Convergence verdict at an exponent.
    Classify {
        #[command(flatten)]
        io: IoArgs,
        /// Exponent, or `critical` for the abscissa itself.
        #[arg(long)]
        sigma: SigmaArg,
    },
}

struct Loaded {
    schedule: Schedule,
    sha256: String,
}

fn load(io: &IoArgs) -> Result<Loaded, CliError> {
    let path = io.spec.display().to_string();
    let bytes = fs::read(&io.spec).map_err(|source| CliError::SpecRead {
        path: path.clone(),
        source,
    })?;
    let sha256 = Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    let spec: ScheduleSpec =
        serde_json::from_slice(&bytes).map_err(|source| CliError::SpecParse { path, source })?;
    Ok(Loaded {
        schedule: spec.to_schedule()?,
        sha256,
    })
}

fn max_enum_members() -> Result<u64, CliError> {
    match std::env::var("KEMPNER_MAX_ENUM") {
        Ok(raw) => raw.trim().parse().map_err(|_| CliError::BadEnumCap(raw)),
        Err(_) => Ok(DEFAULT_MAX_ENUM_MEMBERS),
    }
}

fn emit(io: &IoArgs, text: String) -> Result<(), CliError> {
    match &io.out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(report: &T) -> String {
    let mut text = serde_json::to_string(report).expect("reports serialize");
    text.push('\n');
    text
}

fn csv_document(sha256: &str, header: &str, lines: impl IntoIterator<Item = String>) -> String {
    let mut text = format!("# schedule_sha256={sha256}\n{header}\n");
    for line in lines {
        text.push_str(&line);
        text.push('\n');
    }
    text
}

/// Renders a float the way serde_json does, so CSV and JSON stay consistent.
fn float(value: f64) -> String {
    serde_json::to_string(&value).expect("finite float")
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::SigmaC { io } => sigma_c(&io),
        Command::Census { io, m, verify } => census(&io, m, verify),
        Command::Enumerate { io, m } => enumerate(&io, m),
        Command::Sum {
            io,
            sigma,
            enum_depth,
            count_depth,
        } => sum(&io, sigma, enum_depth, count_depth),
        Command::Estimate { io, m } => estimate(&io, m),
        Command::Certify { io, sigma, m_max } => certify(&io, sigma, m_max),
        Command::Classify { io, sigma } => classify_cmd(&io, sigma),
    }
}

fn sigma_c(io: &IoArgs) -> Result<(), CliError> {
    let loaded = load(io)?;
    let report = abscissa(&loaded.schedule);
    let out = SigmaCReport {
        sigma_c: report.value,
        diverges_at_sigma_c: report.diverges_at_sigma_c,
        m_set_infinite: report.m_set_infinite,
        terms: report
            .terms
            .iter()
            .map(|t| TermReport {
                alpha: t.alpha.to_string(),
                base: t.base,
            })
            .collect(),
        schedule_sha256: loaded.sha256.clone(),
    };
    let text = match io.format {
        Format::Json => to_json(&out),
        Format::Csv => csv_document(
            &loaded.sha256,
            "sigma_c,diverges_at_sigma_c,m_set_infinite",
            [format!(
                "{},{},{}",
                float(out.sigma_c),
                out.diverges_at_sigma_c,
                out.m_set_infinite
            )],
        ),
    };
    emit(io, text)
}

fn census(io: &IoArgs, m: LengthRange, verify: bool) -> Result<(), CliError> {
    let loaded = load(io)?;
    let cap = max_enum_members()?;
    let mut rows: Vec<CensusRow> = Vec::new();
    for length in m.iter() {
        let census = interval_count(&loaded.schedule, length);
        if verify {
            verify_census(&loaded.schedule, &census, cap)?;
        }
        rows.push(census.to_row());
    }
    let text = match io.format {
        Format::Json => to_json(&CensusReport {
            rows,
            schedule_sha256: loaded.sha256,
        }),
        Format::Csv => csv_document(
            &loaded.sha256,
            CENSUS_CSV_HEADER,
            rows.iter().map(CensusRow::csv_line),
        ),
    };
    emit(io, text)
}

/// Recounts one interval with the independent paths that fit their guards.
fn verify_census(schedule: &Schedule, census: &IntervalCensus, cap: u64) -> Result<(), CliError> {
    match brute_force_count(schedule, census.m) {
        Ok(scanned) => {
            if BigUint::from(scanned) != census.count {
                return Err(CliError::VerifyMismatch {
                    m: census.m,
                    closed: census.count.to_string(),
                    oracle: "brute force",
                    observed: scanned.to_string(),
                });
            }
        }
        Err(CensusError::IntervalTooLarge { .. }) => {}
        Err(other) => return Err(other.into()),
    }
    match interval_count_enumerated(schedule, census.m, cap) {
        Ok(enumerated) => {
            if enumerated.count != census.count {
                return Err(CliError::VerifyMismatch {
                    m: census.m,
                    closed: census.count.to_string(),
                    oracle: "enumeration",
                    observed: enumerated.count.to_string(),
                });
            }
        }
        Err(CensusError::EnumerationTooLarge { .. }) => {}
        Err(other) => return Err(other.into()),
    }
    Ok(())
}

fn enumerate(io: &IoArgs, m: LengthRange) -> Result<(), CliError> {
    let loaded = load(io)?;
    let cap = max_enum_members()?;
    let mut budget = cap;
    let mut rows: Vec<MemberRow> = Vec::new();
    for length in m.iter() {
        let expected = interval_count(&loaded.schedule, length).count;
        match u64::try_from(expected) {
            Ok(count) if count <= budget => budget -= count,
            _ => {
                return Err(SeriesError::EnumerationTooLarge {
                    m: length,
                    limit: cap,
                }
                .into())
            }
        }
        for member in enumerate_interval(&loaded.schedule, length)? {
            rows.push(MemberRow {
                m: length,
                value: member.value,
            });
        }
    }
    let text = match io.format {
        Format::Json => to_json(&EnumerateReport {
            rows,
            schedule_sha256: loaded.sha256,
        }),
        Format::Csv => csv_document(
            &loaded.sha256,
            "m,value",
            rows.iter().map(|r| format!("{},{}", r.m, r.value)),
        ),
    };
    emit(io, text)
}

fn sum(io: &IoArgs, sigma: SigmaArg, enum_depth: u64, count_depth: u64) -> Result<(), CliError> {
    let loaded = load(io)?;
    let cap = max_enum_members()?;
    let sigma = sigma.resolve(&loaded.schedule);
    let enclosure = evaluate_with_limit(&loaded.schedule, sigma, enum_depth, count_depth, cap)?;
    let certificate = if enclosure.verdict == EnclosureVerdict::DivergentCertified {
        Some(divergence_certificate(
            &loaded.schedule,
            sigma,
            enclosure.m_counted,
        )?)
    } else {
        None
    };
    let out = SumReport {
        sigma,
        sigma_c: abscissa(&loaded.schedule).value,
        verdict: enclosure.verdict.as_str(),
        partial_sum: enclosure.partial_sum,
        lower_bound: enclosure.lower_bound,
        upper_bound: enclosure.upper_bound,
        m_enumerated: enclosure.m_enumerated,
        m_counted: enclosure.m_counted,
        certificate,
        schedule_sha256: loaded.sha256.clone(),
    };
    let text = match io.format {
        Format::Json => to_json(&out),
        Format::Csv => csv_document(
            &loaded.sha256,
            "sigma,sigma_c,verdict,partial_sum,lower_bound,upper_bound,m_enumerated,m_counted",
            [format!(
                "{},{},{},{},{},{},{},{}",
                float(out.sigma),
                float(out.sigma_c),
                out.verdict,
                float(out.partial_sum),
                float(out.lower_bound),
                out.upper_bound.map(float).unwrap_or_default(),
                out.m_enumerated,
                out.m_counted
            )],
        ),
    };
    emit(io, text)
}

fn estimate(io: &IoArgs, m: LengthRange) -> Result<(), CliError> {
    let loaded = load(io)?;
    let sigma_c = abscissa(&loaded.schedule).value;
    let mut rows: Vec<EstimateRow> = Vec::new();
    for length in m.iter() {
        match empirical_abscissa(&loaded.schedule, length) {
            Ok(estimate) => rows.push(EstimateRow {
                m: length,
                empirical_abscissa: estimate,
                sigma_c,
                error: estimate - sigma_c,
            }),
            // unpopulated lengths inside a sweep are skipped, a single
            // requested one is an error
            Err(SeriesError::EmptyInterval { .. }) if !m.is_single() => {}
            Err(err) => return Err(err.into()),
        }
    }
    let text = match io.format {
        Format::Json => to_json(&EstimateReport {
            rows,
            schedule_sha256: loaded.sha256,
        }),
        Format::Csv => csv_document(
            &loaded.sha256,
            "m,empirical_abscissa,sigma_c,error",
            rows.iter().map(|r| {
                format!(
                    "{},{},{},{}",
                    r.m,
                    float(r.empirical_abscissa),
                    float(r.sigma_c),
                    float(r.error)
                )
            }),
        ),
    };
    emit(io, text)
}

fn certify(io: &IoArgs, sigma: SigmaArg, m_max: u64) -> Result<(), CliError> {
    let loaded = load(io)?;
    let sigma = sigma.resolve(&loaded.schedule);
    let cert = divergence_certificate(&loaded.schedule, sigma, m_max)?;
    let out = CertifyReport {
        sigma: cert.sigma,
        sigma_c: cert.sigma_c,
        template_constant: cert.template_constant,
        template_ratio: cert.template_ratio,
        m_range: cert.m_range.clone(),
        certified_sum_lower: cert.certified_sum_lower,
        schedule_sha256: loaded.sha256.clone(),
    };
    let text = match io.format {
        Format::Json => to_json(&out),
        Format::Csv => csv_document(
            &loaded.sha256,
            "sigma,sigma_c,template_constant,template_ratio,lengths_used,certified_sum_lower",
            [format!(
                "{},{},{},{},{},{}",
                float(out.sigma),
                float(out.sigma_c),
                float(out.template_constant),
                float(out.template_ratio),
                out.m_range.len(),
                float(out.certified_sum_lower)
            )],
        ),
    };
    emit(io, text)
}

fn classify_cmd(io: &IoArgs, sigma: SigmaArg) -> Result<(), CliError> {
    let loaded = load(io)?;
    let sigma = sigma.resolve(&loaded.schedule);
    let classification = classify(&loaded.schedule, sigma);
    let out = ClassifyReport {
        sigma,
        sigma_c: abscissa(&loaded.schedule).value,
        verdict: classification.verdict.as_str(),
        critical: classification.critical,
        diverges: classification.diverges(),
        schedule_sha256: loaded.sha256.clone(),
    };
    let text = match io.format {
        Format::Json => to_json(&out),
        Format::Csv => csv_document(
            &loaded.sha256,
            "sigma,sigma_c,verdict,critical,diverges",
            [format!(
                "{},{},{},{},{}",
                float(out.sigma),
                float(out.sigma_c),
                out.verdict,
                out.critical,
                out.diverges
            )],
        ),
    };
    emit(io, text)
}
