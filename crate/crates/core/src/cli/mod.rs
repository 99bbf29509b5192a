//! The `hbn` command line: argument model, dispatch and exit codes.
//!
//! Exit status is 0 on success, 1 when a sweep finds violations or a value
//! is refused (empty locus, out-of-range `p`, ...), and 2 for malformed
//! input. With `--format json` failures are reported as
//! `{"error": {"kind", "message"}}` on stdout.

mod report;

use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::classify::{birat_pva_sufficient, conjectured_pva, pva_sufficient};
use crate::count::{dependent_divisor_count, ClosedForm, FormulaMutation};
use crate::enumerate::{
    classification_table, enumerate_splitting_types, Execution, PPolicy, Property,
    PropertySelection, SweepDomain, SweepOptions, TableRow,
};
use crate::error::HbnError;
use crate::splitting::{AmpleDegree, BNDatum, SplittingType};

pub use report::{big, csv_header, parse_big, OUT_OF_DOMAIN};

/// Environment variable capping the worker threads used by `verify`.
pub const JOBS_VAR: &str = "HBN_JOBS";

#[derive(Parser, Debug, Clone, PartialEq, Eq)]
#[command(
    name = "hbn",
    version,
    about = "Positivity of line bundles on Hurwitz-Brill-Noether loci"
)]
pub struct Request {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
pub enum Command {
    /// Invariants and every positivity verdict for one (g, e).
    Classify(ClassifyArgs),
    /// The dependent-divisor count N for one (g, e) and p.
    Count(CountArgs),
    /// List splitting types of a given rank.
    Enum(EnumArgs),
    /// Classification table over a finite domain.
    Table(TableArgs),
    /// Check the consistency properties over a finite domain.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Plain,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Plain => "plain",
        }
    }
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct DatumArgs {
    /// Genus.
    #[arg(long, allow_hyphen_values = true)]
    pub g: BigInt,
    /// Splitting type as a comma-separated nondecreasing list, e.g. -2,0,1.
    #[arg(
        long,
        allow_hyphen_values = true,
        value_delimiter = ',',
        required = true
    )]
    pub e: Vec<BigInt>,
    /// Sort the parts instead of rejecting unsorted input.
    #[arg(long)]
    pub sort: bool,
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub datum: DatumArgs,
    /// Ample degrees to report (default: 0..k).
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct CountArgs {
    #[command(flatten)]
    pub datum: DatumArgs,
    #[arg(long)]
    pub p: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct EnumArgs {
    /// Rank.
    #[arg(long)]
    pub k: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub emin: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub emax: i64,
    /// Only types of this degree.
    #[arg(long, allow_hyphen_values = true)]
    pub deg: Option<BigInt>,
    #[arg(long)]
    pub limit: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct DomainArgs {
    #[arg(long, default_value_t = 2)]
    pub kmin: usize,
    #[arg(long, default_value_t = 5)]
    pub kmax: usize,
    #[arg(long, allow_hyphen_values = true, default_value_t = -5)]
    pub emin: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 5)]
    pub emax: i64,
    /// Genus runs from u(e) to u(e) + gslack.
    #[arg(long, default_value_t = 4)]
    pub gslack: u64,
    /// Restrict to these ample degrees (default: all p < k).
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<usize>,
}

impl DomainArgs {
    pub fn domain(&self) -> SweepDomain {
        SweepDomain {
            k_min: self.kmin,
            k_max: self.kmax,
            part_min: self.emin,
            part_max: self.emax,
            genus_slack: self.gslack,
            p_policy: if self.p.is_empty() {
                PPolicy::All
            } else {
                PPolicy::Fixed(self.p.clone())
            },
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "kmin": self.kmin,
            "kmax": self.kmax,
            "emin": self.emin,
            "emax": self.emax,
            "gslack": self.gslack,
            "p": if self.p.is_empty() { Value::String("all".into()) } else { json!(self.p) },
        })
    }
}

impl Default for DomainArgs {
    fn default() -> Self {
        let d = SweepDomain::default();
        DomainArgs {
            kmin: d.k_min,
            kmax: d.k_max,
            emin: d.part_min,
            emax: d.part_max,
            gslack: d.genus_slack,
            p: Vec::new(),
        }
    }
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct TableArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    #[arg(long)]
    pub limit: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    /// Only check these properties (repeatable; default: all).
    #[arg(long, value_delimiter = ',')]
    pub property: Vec<Property>,
    /// Evaluate a deliberately corrupted closed form.
    #[arg(long, hide = true)]
    pub mutate: Option<FormulaMutation>,
    /// Maximum number of violations listed in the report.
    #[arg(long, default_value_t = 50)]
    pub max_listed: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn push(args: &mut Vec<String>, flag: &str, value: impl ToString) {
    args.push(format!("--{flag}"));
    args.push(value.to_string());
}

impl DatumArgs {
    fn write_args(&self, args: &mut Vec<String>) {
        push(args, "g", &self.g);
        push(args, "e", join(&self.e));
        if self.sort {
            args.push("--sort".into());
        }
    }
}

impl DomainArgs {
    fn write_args(&self, args: &mut Vec<String>) {
        push(args, "kmin", self.kmin);
        push(args, "kmax", self.kmax);
        push(args, "emin", self.emin);
        push(args, "emax", self.emax);
        push(args, "gslack", self.gslack);
        if !self.p.is_empty() {
            push(args, "p", join(&self.p));
        }
    }
}

impl Request {
    /// A command line that parses back to this request.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = vec!["hbn".to_string()];
        let format = match &self.command {
            Command::Classify(a) => {
                args.push("classify".into());
                a.datum.write_args(&mut args);
                if !a.p.is_empty() {
                    push(&mut args, "p", join(&a.p));
                }
                a.format
            }
            Command::Count(a) => {
                args.push("count".into());
                a.datum.write_args(&mut args);
                push(&mut args, "p", a.p);
                a.format
            }
            Command::Enum(a) => {
                args.push("enum".into());
                push(&mut args, "k", a.k);
                push(&mut args, "emin", a.emin);
                push(&mut args, "emax", a.emax);
                if let Some(deg) = &a.deg {
                    push(&mut args, "deg", deg);
                }
                if let Some(limit) = a.limit {
                    push(&mut args, "limit", limit);
                }
                a.format
            }
            Command::Table(a) => {
                args.push("table".into());
                a.domain.write_args(&mut args);
                if let Some(limit) = a.limit {
                    push(&mut args, "limit", limit);
                }
                a.format
            }
            Command::Verify(a) => {
                args.push("verify".into());
                a.domain.write_args(&mut args);
                for prop in &a.property {
                    push(&mut args, "property", prop.id());
                }
                if let Some(m) = a.mutate {
                    push(&mut args, "mutate", m.name());
                }
                push(&mut args, "max-listed", a.max_listed);
                a.format
            }
        };
        push(&mut args, "format", format.name());
        args
    }

    fn format(&self) -> Format {
        match &self.command {
            Command::Classify(a) => a.format,
            Command::Count(a) => a.format,
            Command::Enum(a) => a.format,
            Command::Table(a) => a.format,
            Command::Verify(a) => a.format,
        }
    }
}

enum Failure {
    Hbn(HbnError),
    Io(io::Error),
}

impl From<HbnError> for Failure {
    fn from(e: HbnError) -> Self {
        Failure::Hbn(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Failure::Io(io),
            other => Failure::Io(io::Error::other(format!("{other:?}"))),
        }
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Exit status for a library error.
pub fn exit_code(e: &HbnError) -> i32 {
    if e.is_malformed_input() {
        2
    } else {
        1
    }
}

/// Executes a request, writing the report to `out` and diagnostics to `err`.
/// Returns the process exit status.
pub fn run(req: &Request, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let outcome = match &req.command {
        Command::Classify(a) => classify(a, out),
        Command::Count(a) => count(a, out),
        Command::Enum(a) => enumerate(a, out),
        Command::Table(a) => table(a, out),
        Command::Verify(a) => verify(a, out),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "hbn: i/o error: {e}");
            1
        }
        Err(Failure::Hbn(e)) => {
            let message = e.to_string();
            if req.format() == Format::Json {
                let _ = writeln!(out, "{}", report::error_json(e.kind(), &message));
            }
            let _ = writeln!(err, "hbn: {}: {message}", e.kind());
            exit_code(&e)
        }
    }
}

/// Runs a request and captures its stdout as a string.
pub fn run_to_string(req: &Request) -> (i32, String) {
    let mut out = Vec::new();
    let code = run(req, &mut out, &mut io::sink());
    (code, String::from_utf8(out).expect("reports are UTF-8"))
}

fn datum(args: &DatumArgs, warnings: &mut Vec<String>) -> crate::Result<BNDatum> {
    let e = if args.sort {
        let e = SplittingType::sorted(args.e.clone())?;
        if e.parts() != args.e.as_slice() {
            warnings.push(format!("parts reordered to {e}"));
        }
        e
    } else {
        SplittingType::new(args.e.clone())?
    };
    BNDatum::new(args.g.clone(), e)
}

fn write_json(out: &mut dyn Write, v: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new().flexible(true).from_writer(out)
}

fn classify(a: &ClassifyArgs, out: &mut dyn Write) -> Outcome {
    let mut warnings = Vec::new();
    let d = datum(&a.datum, &mut warnings)?;
    let k = d.rank();
    let degrees: Vec<usize> = if a.p.is_empty() {
        (0..k).collect()
    } else {
        a.p.clone()
    };
    for &p in &degrees {
        AmpleDegree(p).check(k)?;
    }
    let row = TableRow::build(&d, &degrees)?;
    match a.format {
        Format::Json => {
            let sufficiency = degrees
                .iter()
                .map(|&p| {
                    let ample = AmpleDegree(p);
                    Ok(report::Sufficiency {
                        p,
                        pva_sufficient: pva_sufficient(&d, ample)?,
                        birat_pva_sufficient: birat_pva_sufficient(&d, ample)?,
                        conjectured_pva: conjectured_pva(&d, ample)?,
                    })
                })
                .collect::<crate::Result<Vec<_>>>()?;
            write_json(out, &report::classify_json(&row, &sufficiency, &warnings))?;
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(csv_header(k))?;
            w.write_record(report::csv_record(&row, k))?;
            w.flush()?;
        }
        Format::Plain => {
            for warning in &warnings {
                writeln!(out, "warning: {warning}")?;
            }
            write!(out, "{}", report::row_plain(&row))?;
        }
    }
    Ok(0)
}

fn count(a: &CountArgs, out: &mut dyn Write) -> Outcome {
    let mut warnings = Vec::new();
    let d = datum(&a.datum, &mut warnings)?;
    let p = AmpleDegree(a.p).check(d.rank())?;
    let c = dependent_divisor_count(&d, p)?;
    match a.format {
        Format::Json => write_json(out, &report::count_report_json(&d, &c, &warnings))?,
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record([
                "g",
                "e",
                "p",
                "N",
                "N_assembled",
                "degZ",
                "degH",
                "degPi",
                "degL",
                "edge_case",
            ])?;
            w.write_record([
                d.genus().to_string(),
                d.splitting().to_string(),
                c.p.to_string(),
                c.n_closed.to_string(),
                c.n_assembled.to_string(),
                c.deg_z.to_string(),
                c.deg_h.to_string(),
                c.deg_pi.to_string(),
                c.deg_l.to_string(),
                c.edge_case.name().to_string(),
            ])?;
            w.flush()?;
        }
        Format::Plain => {
            for warning in &warnings {
                writeln!(out, "warning: {warning}")?;
            }
            writeln!(out, "{d}, p={}", c.p)?;
            writeln!(
                out,
                "  N = {} (assembled {}) [{}]",
                c.n_closed, c.n_assembled, c.edge_case
            )?;
            writeln!(
                out,
                "  deg Z = {}, deg h = {}, deg pi = {}, deg L = {}",
                c.deg_z, c.deg_h, c.deg_pi, c.deg_l
            )?;
        }
    }
    Ok(0)
}

fn enumerate(a: &EnumArgs, out: &mut dyn Write) -> Outcome {
    if a.k == 0 {
        return Err(HbnError::Domain("k must be at least 1".into()).into());
    }
    if a.emin > a.emax {
        return Err(
            HbnError::Domain(format!("emin = {} exceeds emax = {}", a.emin, a.emax)).into(),
        );
    }
    let types = enumerate_splitting_types(a.k, a.emin, a.emax, a.deg.clone())
        .take(a.limit.unwrap_or(usize::MAX));
    match a.format {
        Format::Json => {
            for e in types {
                writeln!(out, "{}", report::parts_json(&e))?;
            }
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record((1..=a.k).map(|i| format!("e{i}")))?;
            for e in types {
                w.write_record(e.parts().iter().map(ToString::to_string))?;
            }
            w.flush()?;
        }
        Format::Plain => {
            for e in types {
                writeln!(out, "{e}")?;
            }
        }
    }
    Ok(0)
}

fn table(a: &TableArgs, out: &mut dyn Write) -> Outcome {
    let domain = a.domain.domain();
    let rows = classification_table(&domain)?.take(a.limit.unwrap_or(usize::MAX));
    match a.format {
        Format::Json => {
            for row in rows {
                writeln!(out, "{}", report::row_json(&row?))?;
            }
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(csv_header(domain.k_max))?;
            for row in rows {
                w.write_record(report::csv_record(&row?, domain.k_max))?;
            }
            w.flush()?;
        }
        Format::Plain => {
            for row in rows {
                write!(out, "{}", report::row_plain(&row?))?;
            }
        }
    }
    Ok(0)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Outcome {
    let domain = a.domain.domain();
    let selection = if a.property.is_empty() {
        PropertySelection::All
    } else {
        PropertySelection::only(a.property.iter().copied())
    };
    let options = SweepOptions {
        formula: a.mutate.map_or(ClosedForm::STANDARD, ClosedForm::mutated),
        execution: Execution::from_env(JOBS_VAR),
    };
    let rep = crate::enumerate::verify_sweep(&domain, &selection, options)?;
    match a.format {
        Format::Json => write_json(
            out,
            &report::verify_json(
                &rep,
                a.domain.to_json(),
                a.mutate.map(FormulaMutation::name),
                a.max_listed,
            ),
        )?,
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["property", "g", "e", "p", "observed", "expected"])?;
            for v in rep.violations.iter().take(a.max_listed) {
                w.write_record([
                    v.property.id().to_string(),
                    v.genus
                        .as_ref()
                        .map(ToString::to_string)
                        .unwrap_or_default(),
                    v.e.as_ref().map(ToString::to_string).unwrap_or_default(),
                    v.p.map(|p| p.to_string()).unwrap_or_default(),
                    v.observed.clone(),
                    v.expected.clone(),
                ])?;
            }
            w.flush()?;
        }
        Format::Plain => {
            writeln!(out, "instances: {}", rep.instances)?;
            writeln!(out, "checks:    {}", rep.total_checks())?;
            for (prop, n) in &rep.checks {
                writeln!(
                    out,
                    "  {:<32} {:>9} checks  {:>6} violations",
                    prop.id(),
                    n,
                    rep.violations_of(*prop)
                )?;
            }
            for v in rep.violations.iter().take(a.max_listed) {
                let e = v.e.as_ref().map(ToString::to_string).unwrap_or_default();
                let g = v
                    .genus
                    .as_ref()
                    .map(ToString::to_string)
                    .unwrap_or_default();
                writeln!(
                    out,
                    "VIOLATION {} g={g} e={e} p={:?}: observed {}, expected {}",
                    v.property, v.p, v.observed, v.expected
                )?;
            }
            writeln!(
                out,
                "{}",
                if rep.is_clean() {
                    "ok"
                } else {
                    "violations found"
                }
            )?;
        }
    }
    Ok(if rep.is_clean() { 0 } else { 1 })
}
