use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use toric_acm::census::{
    brute_force_census, count_closed, count_recurrence, enumerate_si, is_d_acm_fast, is_d_acm_oracle,
    normalize, Normalized,
};
use toric_acm::chern::{c1, chern_total};
use toric_acm::cohomology::cohomology_table;
use toric_acm::io::parse_bundle;
use toric_acm::resolution::{perling_resolution, verify_resolution};
use toric_acm::validate::{graded_support, run_suite, DEFAULT_SEED};
use toric_acm::{Error, ShiftingIndices, ToricBundle};

#[derive(Parser)]
#[command(name = "toric-acm", version, about = "Toric vector bundles on projective space")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Closed,
    Recurrence,
    Enumerate,
    Oracle,
}

#[derive(Args)]
struct BundleArgs {
    /// Bundle file (JSON, or a shifting-index string)
    #[arg(long, conflicts_with = "delta")]
    bundle: Option<String>,
    /// Shifting indices "a,b;c,d;e,f"
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Count classes of rank-2 d-aCM bundles on P^2
    Count {
        #[arg(long)]
        d: i64,
        /// Methods to compare (default: closed, recurrence, enumerate)
        #[arg(long, value_enum, value_delimiter = ',')]
        method: Vec<Method>,
    },
    /// List the canonical representatives SI(d)
    Enumerate {
        #[arg(long)]
        d: i64,
    },
    /// Test whether H^p(E(dt)) vanishes for 0 < p < n and all t
    Acm {
        #[command(flatten)]
        bundle: BundleArgs,
        #[arg(long)]
        d: i64,
        /// Also compute cohomology directly
        #[arg(long)]
        oracle: bool,
    },
    /// Cohomology table of E(t)
    Cohom {
        #[command(flatten)]
        bundle: BundleArgs,
        #[arg(long, default_value = "0..0", allow_hyphen_values = true)]
        twists: String,
        /// List the nonzero graded pieces of every twist
        #[arg(long)]
        graded: bool,
    },
    /// Rank and Chern classes on P^2
    Chern {
        #[command(flatten)]
        bundle: BundleArgs,
    },
    /// Two-term resolution of a rank-2 bundle and its numerical check
    Resolve {
        #[command(flatten)]
        bundle: BundleArgs,
    },
    /// Slope stability of a rank-2 bundle on P^2
    Stable {
        #[command(flatten)]
        bundle: BundleArgs,
    },
    /// Whether the bundle is a sum of line bundles
    Split {
        #[command(flatten)]
        bundle: BundleArgs,
    },
    /// Run the cross-validation suite
    Validate {
        #[arg(long = "max-d", default_value_t = 30)]
        max_d: i64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

enum Failure {
    Assertion(String),
    Usage(String),
    Parse(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidFiltration { .. } | Error::InvalidShiftingIndices { .. } => {
                Failure::Parse(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CliResult = Result<String, Failure>;

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable output") + "\n"
}

fn to_csv<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("flat csv rows");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 csv")
}

fn load(args: &BundleArgs) -> Result<ToricBundle, Failure> {
    match (&args.bundle, &args.delta) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{path}: {e}")))?;
            parse_bundle(&text).map_err(|e| match e {
                Error::Parse(msg) => Failure::Parse(format!("{path}: {msg}")),
                other => other.into(),
            })
        }
        (None, Some(delta)) => Ok(ToricBundle::from_shifting_indices(&parse_delta(delta)?)),
        (None, None) => Err(Failure::Usage("one of --bundle or --delta is required".into())),
    }
}

fn parse_delta(text: &str) -> Result<ShiftingIndices, Failure> {
    text.parse::<ShiftingIndices>().map_err(Failure::from)
}

fn parse_twists(text: &str) -> Result<(i64, i64), Failure> {
    let bad = || Failure::Usage(format!("invalid twist range {text:?}, expected a..b"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a = a.trim().parse().map_err(|_| bad())?;
    let b = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(Error::InvalidTwistRange(a, b).into());
    }
    Ok((a, b))
}

#[derive(Serialize)]
struct CountRow {
    method: Method,
    count: u128,
}

fn count(d: i64, methods: Vec<Method>, format: Format) -> CliResult {
    let methods = if methods.is_empty() {
        vec![Method::Closed, Method::Recurrence, Method::Enumerate]
    } else {
        methods
    };
    let mut rows = Vec::new();
    for method in methods {
        let count = match method {
            Method::Closed => count_closed(d)?,
            Method::Recurrence => count_recurrence(d)?,
            Method::Enumerate => enumerate_si(d)?.len() as u128,
            Method::Oracle => brute_force_census(d, |delta| {
                is_d_acm_oracle(&ToricBundle::from_shifting_indices(delta), d)
            })?
            .len() as u128,
        };
        rows.push(CountRow { method, count });
    }
    let agree = rows.windows(2).all(|w| w[0].count == w[1].count);
    let out = match format {
        Format::Json => to_json(&json!({ "d": d, "counts": rows, "agree": agree })),
        Format::Csv => to_csv(&rows),
        Format::Table => {
            let mut s = String::new();
            for r in &rows {
                let name = serde_json::to_value(r.method).expect("method name");
                s += &format!("{:<12}{}\n", name.as_str().unwrap_or_default(), r.count);
            }
            if agree {
                s += &format!("S(P^2, {d}; 2) = {}\n", rows[0].count);
            }
            s
        }
    };
    if agree {
        Ok(out)
    } else {
        Err(Failure::Assertion(format!("{out}methods disagree")))
    }
}

#[derive(Serialize)]
struct EnumerateRow {
    index: usize,
    delta: String,
    #[serde(rename = "type")]
    kind: String,
    c1: i64,
    stable: bool,
}

fn enumerate(d: i64, format: Format) -> CliResult {
    let rows: Vec<EnumerateRow> = enumerate_si(d)?
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            let bundle = ToricBundle::from_shifting_indices(&e.delta);
            Ok(EnumerateRow {
                index: i + 1,
                delta: e.delta.to_string(),
                kind: e.kind.to_string(),
                c1: c1(&bundle),
                stable: bundle.is_slope_stable()?,
            })
        })
        .collect::<Result<_, Error>>()?;
    Ok(match format {
        Format::Json => to_json(&rows),
        Format::Csv => to_csv(&rows),
        Format::Table => {
            let mut s = format!("{:>4}  {:<22} {:<5} {:>4}  {}\n", "#", "delta", "type", "c1", "stable");
            for r in &rows {
                s += &format!(
                    "{:>4}  {:<22} {:<5} {:>4}  {}\n",
                    r.index,
                    r.delta,
                    r.kind,
                    r.c1,
                    yes_no(r.stable)
                );
            }
            s
        }
    })
}

#[derive(Serialize)]
struct AcmRow {
    d: i64,
    acm: &'static str,
    fast: &'static str,
    oracle: &'static str,
    representative: String,
}

fn acm(e: &ToricBundle, d: i64, oracle: bool, format: Format) -> CliResult {
    let delta = (e.fan().n() == 2 && e.rank() == 2)
        .then(|| e.shifting_indices().ok())
        .flatten();
    let fast = delta.as_ref().map(|x| is_d_acm_fast(x, d)).transpose()?;
    // without shifting indices the direct computation is the only test
    let oracle = (oracle || fast.is_none())
        .then(|| is_d_acm_oracle(e, d))
        .transpose()?;
    let answer = fast.or(oracle).expect("at least one test ran");
    let representative = match (&delta, d >= 2) {
        (Some(x), true) => match normalize(x, d)? {
            Normalized::Entry(entry) => Some(entry),
            Normalized::NotAcm => None,
        },
        _ => None,
    };
    let show = |v: Option<bool>| v.map_or("n/a", yes_no);
    let out = match format {
        Format::Json => to_json(&json!({
            "d": d,
            "acm": answer,
            "fast": fast,
            "oracle": oracle,
            "representative": representative.map(|r| r.delta.to_string()),
            "type": representative.map(|r| r.kind.to_string()),
        })),
        Format::Csv => to_csv(&[AcmRow {
            d,
            acm: yes_no(answer),
            fast: show(fast),
            oracle: show(oracle),
            representative: representative.map(|r| r.delta.to_string()).unwrap_or_default(),
        }]),
        Format::Table => {
            let mut parts = Vec::new();
            if fast.is_some() {
                parts.push(format!("fast={}", show(fast)));
            }
            if oracle.is_some() {
                parts.push(format!("oracle={}", show(oracle)));
            }
            let mut s = format!("d-aCM: {} ({})\n", yes_no(answer), parts.join(", "));
            if let Some(r) = representative {
                s += &format!("representative in SI({d}): {} (type {})\n", r.delta, r.kind);
            }
            s
        }
    };
    match (fast, oracle) {
        (Some(f), Some(o)) if f != o => Err(Failure::Assertion(format!("{out}fast and oracle tests disagree"))),
        _ => Ok(out),
    }
}

#[derive(Serialize)]
struct GradedRow {
    twist: i64,
    p: usize,
    m: String,
    dim: usize,
}

fn cohom(e: &ToricBundle, twists: &str, graded: bool, format: Format) -> CliResult {
    let (a, b) = parse_twists(twists)?;
    if graded {
        let mut rows = Vec::new();
        for t in a..=b {
            let twisted = e.twist_hyperplane(t);
            for p in 0..=e.fan().n() {
                for (m, dim) in graded_support(&twisted, p)? {
                    rows.push(GradedRow {
                        twist: t,
                        p,
                        m: m.to_string(),
                        dim,
                    });
                }
            }
        }
        return Ok(match format {
            Format::Json => to_json(&rows),
            Format::Csv => to_csv(&rows),
            Format::Table => {
                let mut s = format!("{:>6} {:>3}  {:<16} {:>4}\n", "t", "p", "m", "dim");
                for r in &rows {
                    s += &format!("{:>6} {:>3}  {:<16} {:>4}\n", r.twist, r.p, r.m, r.dim);
                }
                s
            }
        });
    }
    let table = cohomology_table(e, a, b)?;
    Ok(match format {
        Format::Json => to_json(&table),
        Format::Csv => {
            let n = e.fan().n();
            let mut header: Vec<String> = vec!["t".into()];
            header.extend((0..=n).map(|p| format!("h{p}")));
            header.push("chi".into());
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header).expect("in-memory writer");
            for row in &table.rows {
                let mut rec = vec![row.twist.to_string()];
                rec.extend(row.h.iter().map(ToString::to_string));
                rec.push(row.chi.to_string());
                w.write_record(&rec).expect("in-memory writer");
            }
            String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 csv")
        }
        Format::Table => table.to_string(),
    })
}

fn chern(e: &ToricBundle, format: Format) -> CliResult {
    let data = chern_total(e)?;
    Ok(match format {
        Format::Json => to_json(&data),
        Format::Csv => to_csv(&[data]),
        Format::Table => format!("{data}\n"),
    })
}

fn resolve(e: &ToricBundle, format: Format) -> CliResult {
    let delta = e.shifting_indices()?;
    let res = perling_resolution(&delta);
    let report = verify_resolution(&delta)?;
    let out = match format {
        Format::Json => to_json(&json!({ "sequence": res.to_string(), "report": report, "ok": report.ok() })),
        Format::Csv => to_csv(&report.chi),
        Format::Table => format!("{res}\n{report}"),
    };
    if report.ok() {
        Ok(out)
    } else {
        Err(Failure::Assertion(format!("{out}resolution check failed")))
    }
}

#[derive(Serialize)]
struct StableRow {
    delta: String,
    alpha0: i64,
    alpha1: i64,
    alpha2: i64,
    stable: bool,
}

fn stable(e: &ToricBundle, format: Format) -> CliResult {
    let delta = e.shifting_indices()?;
    let stable = e.is_slope_stable()?;
    let alpha = delta.band_lengths();
    Ok(match format {
        Format::Json => to_json(&json!({ "delta": delta.to_string(), "alpha": alpha, "stable": stable })),
        Format::Csv => to_csv(&[StableRow {
            delta: delta.to_string(),
            alpha0: alpha[0],
            alpha1: alpha[1],
            alpha2: alpha[2],
            stable,
        }]),
        Format::Table => format!(
            "alpha = ({}, {}, {}), slope stable: {}\n",
            alpha[0],
            alpha[1],
            alpha[2],
            yes_no(stable)
        ),
    })
}

fn split(e: &ToricBundle, format: Format) -> CliResult {
    let split = e.is_split();
    Ok(match format {
        Format::Json => to_json(&json!({ "split": split })),
        Format::Csv => format!("split\n{split}\n"),
        Format::Table => format!("split: {}\n", yes_no(split)),
    })
}

fn validate(max_d: i64, seed: u64, format: Format) -> CliResult {
    if max_d < 2 {
        return Err(Failure::Usage("--max-d must be at least 2".into()));
    }
    let results = run_suite(max_d, seed);
    let ok = results.iter().all(|r| r.passed);
    let out = match format {
        Format::Json => to_json(&results),
        Format::Csv => to_csv(&results),
        Format::Table => results.iter().map(|r| format!("{r}\n")).collect(),
    };
    if ok {
        Ok(out)
    } else {
        Err(Failure::Assertion(out))
    }
}

fn run(cli: Cli) -> CliResult {
    let format = cli.format;
    match cli.command {
        Command::Count { d, method } => count(d, method, format),
        Command::Enumerate { d } => enumerate(d, format),
        Command::Acm { bundle, d, oracle } => acm(&load(&bundle)?, d, oracle, format),
        Command::Cohom { bundle, twists, graded } => cohom(&load(&bundle)?, &twists, graded, format),
        Command::Chern { bundle } => chern(&load(&bundle)?, format),
        Command::Resolve { bundle } => resolve(&load(&bundle)?, format),
        Command::Stable { bundle } => stable(&load(&bundle)?, format),
        Command::Split { bundle } => split(&load(&bundle)?, format),
        Command::Validate { max_d, seed } => validate(max_d, seed, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Assertion(out)) => {
            print!("{out}");
            eprintln!("error: assertion failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
