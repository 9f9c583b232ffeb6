//! Command-line interface over the library.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 cap exceeded. Stdout is deterministic across runs and thread counts;
//! timings go to stderr.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sscx::brandt::{check_bounds, enumerate_facets, gamma, peel, BoundsReport, PeelOutcome};
use sscx::semigroup::BrandtCoord;
use sscx::verify::{self, CriterionReport, OracleAgreement};
use sscx::{ElementSet, Error, Result};

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "sscx",
    version,
    about = "Subsemigroup complexes of Brandt semigroups B(n)"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Worker threads for parallel library sections (0 keeps the default).
    #[arg(long, default_value_t = 0, global = true)]
    threads: usize,

    /// Cap on log2 of the subset space for exhaustive oracle work.
    #[arg(long, default_value_t = 20, global = true)]
    cap_lattice: u32,

    /// Largest n accepted by facet enumeration.
    #[arg(long, default_value_t = 7, global = true)]
    cap_facets: usize,

    /// Seed for sampled verification suites.
    #[arg(long, default_value_t = 181, global = true)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a set of B(n) elements is a face of H(B(n)).
    ///
    /// The set literal is whitespace-separated: `0`, `(i,j)`, `i-j` for the
    /// link {(i,j),(j,i)}, and `i>j` for the lone arc (i,j).
    IsFace { n: usize, set: String },
    /// Enumerate the facets of H(B(n)).
    Facets {
        n: usize,
        /// Append the facet-count bound report.
        #[arg(long)]
        bounds: bool,
    },
    /// Run a named verification suite (`all`, a criterion name, or `oracle`).
    Verify {
        suite: String,
        /// Brandt degree for the `oracle` suite.
        #[arg(long)]
        n: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::SizeLimit { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::IsFace { n, set } => cmd_is_face(cli, *n, set),
        Command::Facets { n, bounds } => cmd_facets(cli, *n, *bounds),
        Command::Verify { suite, n } => cmd_verify(cli, suite, *n),
    }
}

fn elem_name(n: usize, id: usize) -> String {
    BrandtCoord::from_id(n, id).to_string()
}

fn elem_names(n: usize, ids: impl IntoIterator<Item = usize>) -> Vec<String> {
    ids.into_iter().map(|id| elem_name(n, id)).collect()
}

/// Quotes a CSV field when it contains a comma, quote, or newline.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn parse_coord(n: usize, text: &str, token: &str) -> Result<usize> {
    let v: usize = text
        .parse()
        .map_err(|_| Error::parse(format!("bad coordinate `{text}` in token `{token}`")))?;
    if v < 1 || v > n {
        return Err(Error::parse(format!(
            "coordinate {v} outside 1..={n} in token `{token}`"
        )));
    }
    Ok(v)
}

/// Parses the set-literal grammar into a subset of B(n).
fn parse_set_literal(n: usize, text: &str) -> Result<ElementSet> {
    let mut set = ElementSet::new(n * n + 1);
    for token in text.split_whitespace() {
        if token == "0" {
            set.insert(0);
        } else if let Some(inner) = token.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let (i, j) = inner
                .split_once(',')
                .ok_or_else(|| Error::parse(format!("expected `(i,j)` in token `{token}`")))?;
            let (i, j) = (parse_coord(n, i, token)?, parse_coord(n, j, token)?);
            set.insert(BrandtCoord::Pair(i, j).id(n));
        } else if let Some((i, j)) = token.split_once('-') {
            let (i, j) = (parse_coord(n, i, token)?, parse_coord(n, j, token)?);
            if i == j {
                return Err(Error::parse(format!(
                    "link `{token}` needs distinct endpoints"
                )));
            }
            set.insert(BrandtCoord::Pair(i, j).id(n));
            set.insert(BrandtCoord::Pair(j, i).id(n));
        } else if let Some((i, j)) = token.split_once('>') {
            let (i, j) = (parse_coord(n, i, token)?, parse_coord(n, j, token)?);
            if i == j {
                return Err(Error::parse(format!(
                    "arc `{token}` needs distinct endpoints"
                )));
            }
            set.insert(BrandtCoord::Pair(i, j).id(n));
        } else {
            return Err(Error::parse(format!("unrecognized token `{token}`")));
        }
    }
    Ok(set)
}

fn cmd_is_face(cli: &Cli, n: usize, literal: &str) -> Result<ExitCode> {
    let set = parse_set_literal(n, literal)?;
    let outcome = peel(n, &set)?;
    match cli.format {
        Format::Text => match &outcome {
            PeelOutcome::Face { enumeration } => {
                println!("face: true");
                println!(
                    "enumeration: {}",
                    elem_names(n, enumeration.iter().copied()).join(" ")
                );
            }
            PeelOutcome::NotFace { stuck } => {
                println!("face: false");
                println!("stuck: {}", elem_names(n, stuck.iter()).join(" "));
                print!("{}", gamma(n, stuck)?.to_text());
            }
        },
        Format::Json => {
            let mut doc = json!({
                "schema": 1,
                "command": "is-face",
                "n": n,
                "set": elem_names(n, set.iter()),
                "face": outcome.is_face(),
            });
            match &outcome {
                PeelOutcome::Face { enumeration } => {
                    doc["enumeration"] = json!(elem_names(n, enumeration.iter().copied()));
                }
                PeelOutcome::NotFace { stuck } => {
                    doc["stuck"] = json!(elem_names(n, stuck.iter()));
                }
            }
            println!("{doc}");
        }
        Format::Csv => {
            println!("n,face,witness");
            let witness = match &outcome {
                PeelOutcome::Face { enumeration } => {
                    elem_names(n, enumeration.iter().copied()).join(" ")
                }
                PeelOutcome::NotFace { stuck } => elem_names(n, stuck.iter()).join(" "),
            };
            println!("{n},{},{}", outcome.is_face(), csv_field(&witness));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn bounds_json(report: &BoundsReport) -> serde_json::Value {
    json!(report
        .entries
        .iter()
        .map(|e| {
            json!({
                "label": e.label,
                "holds": e.holds,
                "derived_from_bound": e.derived_from_bound,
                "detail": e.detail,
            })
        })
        .collect::<Vec<_>>())
}

fn cmd_facets(cli: &Cli, n: usize, bounds: bool) -> Result<ExitCode> {
    if n > cli.cap_facets {
        return Err(Error::SizeLimit {
            what: "facets n (--cap-facets)",
            limit: cli.cap_facets,
            actual: n,
        });
    }
    let facets = enumerate_facets(n)?;
    let dimension = facets.first().map_or(-1, |f| f.len() as isize - 1);
    let pure = facets.iter().all(|f| f.len() as isize == dimension + 1);
    let report = if bounds { Some(check_bounds(n)?) } else { None };
    match cli.format {
        Format::Text => {
            println!("n: {n}");
            println!("count: {}", facets.len());
            println!("dimension: {dimension}");
            println!("pure: {pure}");
            for (k, f) in facets.iter().enumerate() {
                println!("facet {k}: {}", elem_names(n, f.iter()).join(" "));
            }
            if let Some(report) = &report {
                for e in &report.entries {
                    let tag = if e.derived_from_bound {
                        " [derived]"
                    } else {
                        ""
                    };
                    println!(
                        "bound {}: {}{tag} ({})",
                        e.label,
                        if e.holds { "holds" } else { "violated" },
                        e.detail
                    );
                }
            }
        }
        Format::Json => {
            let mut doc = json!({
                "schema": 1,
                "command": "facets",
                "n": n,
                "count": facets.len(),
                "dimension": dimension,
                "pure": pure,
                "facets": facets.iter().map(|f| elem_names(n, f.iter())).collect::<Vec<_>>(),
            });
            if let Some(report) = &report {
                doc["bounds"] = bounds_json(report);
            }
            println!("{doc}");
        }
        Format::Csv => {
            println!("index,cardinality,elements");
            for (k, f) in facets.iter().enumerate() {
                println!(
                    "{k},{},{}",
                    f.len(),
                    csv_field(&elem_names(n, f.iter()).join(" "))
                );
            }
            if let Some(report) = &report {
                println!();
                println!("label,holds,derived_from_bound,detail");
                for e in &report.entries {
                    println!(
                        "{},{},{},{}",
                        csv_field(&e.label),
                        e.holds,
                        e.derived_from_bound,
                        csv_field(&e.detail)
                    );
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_reports(cli: &Cli, suite: &str, reports: &[CriterionReport]) {
    match cli.format {
        Format::Text => {
            for r in reports {
                println!(
                    "[{}] {:2} {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.id,
                    r.name
                );
                for d in &r.details {
                    println!("    {d}");
                }
                eprintln!("criterion {} ({}): {} ms", r.id, r.name, r.millis);
            }
            let passed = reports.iter().filter(|r| r.passed).count();
            println!("{} of {} criteria passed", passed, reports.len());
        }
        Format::Json => {
            let doc = json!({
                "schema": 1,
                "command": "verify",
                "suite": suite,
                "passed": reports.iter().all(|r| r.passed),
                "criteria": reports
                    .iter()
                    .map(|r| {
                        json!({
                            "id": r.id,
                            "name": r.name,
                            "passed": r.passed,
                            "details": r.details,
                        })
                    })
                    .collect::<Vec<_>>(),
            });
            println!("{doc}");
        }
        Format::Csv => {
            println!("id,name,passed");
            for r in reports {
                println!("{},{},{}", r.id, r.name, r.passed);
            }
        }
    }
}

fn print_oracle(cli: &Cli, report: &OracleAgreement) {
    let ok = report.disagreements == 0;
    match cli.format {
        Format::Text => {
            println!(
                "[{}] oracle agreement n={}: {} subsets ({}), {} disagreements",
                if ok { "PASS" } else { "FAIL" },
                report.n,
                report.checked,
                if report.exhaustive {
                    "exhaustive"
                } else {
                    "sampled"
                },
                report.disagreements
            );
        }
        Format::Json => {
            let doc = json!({
                "schema": 1,
                "command": "verify",
                "suite": "oracle",
                "n": report.n,
                "checked": report.checked,
                "exhaustive": report.exhaustive,
                "disagreements": report.disagreements,
                "passed": ok,
            });
            println!("{doc}");
        }
        Format::Csv => {
            println!("n,checked,exhaustive,disagreements,passed");
            println!(
                "{},{},{},{},{}",
                report.n, report.checked, report.exhaustive, report.disagreements, ok
            );
        }
    }
}

fn cmd_verify(cli: &Cli, suite: &str, n: Option<usize>) -> Result<ExitCode> {
    if suite == "oracle" {
        let n = n.unwrap_or(3);
        let size = (n * n + 1) as u32;
        if size <= 17 && size > cli.cap_lattice {
            return Err(Error::SizeLimit {
                what: "oracle subset space (--cap-lattice)",
                limit: cli.cap_lattice as usize,
                actual: size as usize,
            });
        }
        let report = verify::oracle_agreement(n, 2000, cli.seed)?;
        print_oracle(cli, &report);
        return Ok(if report.disagreements == 0 {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        });
    }
    if n.is_some() {
        return Err(Error::parse("--n applies only to the `oracle` suite"));
    }
    let ids = verify::suite_criteria(suite)
        .ok_or_else(|| Error::parse(format!("unknown suite `{suite}`")))?;
    let reports: Vec<CriterionReport> = ids.into_iter().map(verify::run_criterion).collect();
    print_reports(cli, suite, &reports);
    Ok(if reports.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
