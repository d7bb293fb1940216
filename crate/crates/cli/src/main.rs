//! Command-line surface for the partition-family extremal toolkit.
//!
//! Exit codes: 0 success (including documented domain outcomes such as
//! poles, degenerate ratios, empty regimes, and exhausted search budgets,
//! which are reported as diagnostics), 2 argument error, 3 assertion
//! failure in a verify suite, 4 capacity error.

mod output;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pext_core::bell::BellTable;
use pext_core::oracle::{max_t_intersecting, OracleBudget, OracleConfig};
use pext_core::{extremal, Error};
use serde_json::{json, Value};

use crate::output::OutputDocument;

#[derive(Parser)]
#[command(
    name = "pext",
    version,
    about = "Exact extremal combinatorics of t-intersecting set-partition families"
)]
struct Cli {
    /// Emit the result as JSON (stable schema, counts as decimal strings)
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bell number B(n), or the singleton-free variant with --reduced
    Bell {
        #[arg(long)]
        n: u32,
        /// Count only partitions with no singleton block
        #[arg(long)]
        reduced: bool,
    },
    /// Maximum t-intersecting family size with all radius candidates
    M {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u32,
    },
    /// Maximum nontrivially t-intersecting family size, with regime
    Mtilde {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u32,
    },
    /// Exact ratio gamma(n, t, ell) of consecutive candidate differences
    Gamma {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        ell: u32,
    },
    /// Exact comparison value phi(n, t, ell); reports poles
    Phi {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        ell: u32,
    },
    /// Sign-pattern and discrete-concavity scan of phi over admissible ell
    Scan {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u32,
    },
    /// Generators of the i-th nontrivial family and its generated size
    Hfamily {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        i: u32,
    },
    /// Brute-force maximum (nontrivially) t-intersecting family search
    Oracle {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u32,
        /// Search only nontrivially t-intersecting families
        #[arg(long)]
        nontrivial: bool,
        /// Wall-clock budget in milliseconds
        #[arg(long, default_value_t = 60_000)]
        budget_ms: u64,
        /// Search-tree node budget
        #[arg(long, default_value_t = 100_000_000)]
        budget_nodes: u64,
        /// Worker count (the search core is deterministic and
        /// single-threaded; values above 1 only add a diagnostic)
        #[arg(long, default_value_t = 1)]
        threads: u32,
    },
    /// Run a property suite; exit 3 if any assertion fails
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Upper bound for the suite's n-range (suite-specific default;
        /// with --suite all, each suite is capped at its own default)
        #[arg(long)]
        nmax: Option<u32>,
        /// Worker threads for the parallel suites (default: all cores)
        #[arg(long)]
        threads: Option<usize>,
        /// Treat theorem diagnostics (recorded-form disagreements) as
        /// failures
        #[arg(long)]
        fail_on_diagnostics: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Bell,
    Formulas,
    Operators,
    Oracle,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((doc, code)) => {
            if cli.json {
                println!("{}", doc.to_json());
            } else {
                print!("{}", doc.to_human());
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Capacity { .. } => 4,
        _ => 2,
    }
}

/// Bell-table capacity limit: PEXT_TABLE_CAP, defaulting to 512.
fn table_cap() -> Result<usize, Error> {
    match std::env::var("PEXT_TABLE_CAP") {
        Ok(s) => s.trim().parse::<usize>().map_err(|_| {
            Error::Argument(format!(
                "PEXT_TABLE_CAP must be a nonnegative integer, got {s:?}"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(BellTable::DEFAULT_CAPACITY),
        Err(e) => Err(Error::Argument(format!("PEXT_TABLE_CAP unreadable: {e}"))),
    }
}

/// Right-sized Bell table for computations reaching index `max_n`,
/// refused (capacity error) when the configured cap is smaller.
fn table_for(max_n: u32) -> Result<BellTable, Error> {
    let cap = table_cap()?;
    let needed = max_n as usize + 2;
    if needed > cap {
        return Err(Error::Capacity {
            what: "bell table",
            requested: needed,
            cap,
        });
    }
    Ok(BellTable::new(needed))
}

fn run(cli: &Cli) -> Result<(OutputDocument, u8), Error> {
    match &cli.command {
        Command::Bell { n, reduced } => cmd_bell(*n, *reduced),
        Command::M { n, t } => cmd_m(*n, *t),
        Command::Mtilde { n, t } => cmd_mtilde(*n, *t),
        Command::Gamma { n, t, ell } => cmd_gamma(*n, *t, *ell),
        Command::Phi { n, t, ell } => cmd_phi(*n, *t, *ell),
        Command::Scan { n, t } => cmd_scan(*n, *t),
        Command::Hfamily { n, t, i } => cmd_hfamily(*n, *t, *i),
        Command::Oracle {
            n,
            t,
            nontrivial,
            budget_ms,
            budget_nodes,
            threads,
        } => cmd_oracle(*n, *t, *nontrivial, *budget_ms, *budget_nodes, *threads),
        Command::Verify {
            suite,
            nmax,
            threads,
            fail_on_diagnostics,
        } => cmd_verify(*suite, *nmax, *threads, *fail_on_diagnostics),
    }
}

fn cmd_bell(n: u32, reduced: bool) -> Result<(OutputDocument, u8), Error> {
    let table = table_for(n)?;
    let mut doc = OutputDocument::new("bell");
    doc.input("n", n).input("reduced", reduced);
    let value = if reduced {
        table.bell_reduced(n as usize)?
    } else {
        table.bell(n as usize)?
    };
    doc.result_str("value", value);
    doc.result_str("kind", if reduced { "bell-reduced" } else { "bell" });
    Ok((doc, 0))
}

fn candidates_json(report: &extremal::ExtremalReport) -> Value {
    Value::Array(
        report
            .candidates
            .iter()
            .map(|c| {
                json!({
                    "r": c.r,
                    "ell": c.ell,
                    "size": c.size.to_string(),
                })
            })
            .collect(),
    )
}

fn cmd_m(n: u32, t: u32) -> Result<(OutputDocument, u8), Error> {
    let table = table_for(n)?;
    let report = extremal::m_value(n, t, &table)?;
    let mut doc = OutputDocument::new("m");
    doc.input("n", n).input("t", t);
    doc.result_str("M", &report.m_value);
    doc.result("selected_ell", json!(report.selected_ell));
    doc.result("candidates", candidates_json(&report));
    doc.result("maximizing_rs", json!(report.maximizing_rs));
    doc.result("selection_consistent", json!(report.selection_consistent));
    doc.result("t1_heuristic", json!(report.t1_heuristic));
    for d in &report.diagnostics {
        doc.diagnostic(d);
    }
    Ok((doc, 0))
}

fn cmd_mtilde(n: u32, t: u32) -> Result<(OutputDocument, u8), Error> {
    let table = table_for(n)?;
    let mut doc = OutputDocument::new("mtilde");
    doc.input("n", n).input("t", t);
    let report = match extremal::m_tilde_report(n, t, &table) {
        Ok(r) => r,
        Err(e @ Error::EmptyRegime { .. }) => {
            doc.diagnostic(format!("empty-regime: {e}"));
            return Ok((doc, 0));
        }
        Err(e) => return Err(e),
    };
    let m_tilde = report.m_tilde.as_ref().expect("report carries the value");
    let regime = report.regime.expect("report carries the regime");
    doc.result_str("M_tilde", m_tilde);
    doc.result_str("regime", regime.as_str());
    doc.result_str("M", &report.m_value);
    doc.result("selected_ell", json!(report.selected_ell));
    doc.result(
        "s_sequence",
        Value::Array(
            report
                .s_sequence
                .iter()
                .map(|(i, s)| json!({"i": i, "size": s.to_string()}))
                .collect(),
        ),
    );
    doc.result("interior_max", json!(report.interior_max));
    for d in &report.diagnostics {
        doc.diagnostic(d);
    }
    Ok((doc, 0))
}

fn cmd_gamma(n: u32, t: u32, ell: u32) -> Result<(OutputDocument, u8), Error> {
    let table = table_for(n)?;
    let mut doc = OutputDocument::new("gamma");
    doc.input("n", n).input("t", t).input("ell", ell);
    match extremal::gamma(n, t, ell, &table) {
        Ok(value) => {
            doc.result_str("value", value);
            Ok((doc, 0))
        }
        Err(e @ Error::DegenerateGamma { .. }) => {
            doc.diagnostic(format!("degenerate: {e}"));
            Ok((doc, 0))
        }
        Err(e) => Err(e),
    }
}

fn cmd_phi(n: u32, t: u32, ell: u32) -> Result<(OutputDocument, u8), Error> {
    let table = table_for(n)?;
    let mut doc = OutputDocument::new("phi");
    doc.input("n", n).input("t", t).input("ell", ell);
    match extremal::phi(n, t, ell, &table) {
        Ok(value) => {
            doc.result_str("value", value);
            Ok((doc, 0))
        }
        Err(e @ Error::PhiPole { .. }) => {
            doc.diagnostic(format!("pole: {e}"));
            Ok((doc, 0))
        }
        Err(e @ Error::DegenerateGamma { .. }) => {
            doc.diagnostic(format!("degenerate: {e}"));
            Ok((doc, 0))
        }
        Err(e) => Err(e),
    }
}

fn cmd_scan(n: u32, t: u32) -> Result<(OutputDocument, u8), Error> {
    let table = table_for(n)?;
    let report = extremal::sign_change_scan(n, t, &table)?;
    let mut doc = OutputDocument::new("scan");
    doc.input("n", n).input("t", t);
    doc.result_str("sign_sequence", &report.sign_sequence);
    doc.result("sign_changes", json!(report.sign_changes));
    doc.result(
        "plus_to_minus_changes",
        json!(report.plus_to_minus_changes),
    );
    doc.result(
        "points",
        Value::Array(
            report
                .points
                .iter()
                .map(|p| match &p.value {
                    Some(v) => json!({"ell": p.ell, "phi": v.to_string()}),
                    None => json!({"ell": p.ell, "phi": "pole"}),
                })
                .collect(),
        ),
    );
    doc.result(
        "concavity_violations",
        Value::Array(
            report
                .concavity_violations
                .iter()
                .map(|(ell, excess)| json!({"ell": ell, "excess": excess.to_string()}))
                .collect(),
        ),
    );
    doc.result("poles", json!(report.poles));
    if !report.concavity_violations.is_empty() {
        doc.diagnostic(format!(
            "concavity: {} interior point(s) violate discrete concavity",
            report.concavity_violations.len()
        ));
    }
    Ok((doc, 0))
}

fn cmd_hfamily(n: u32, t: u32, i: u32) -> Result<(OutputDocument, u8), Error> {
    let table = table_for(n)?;
    if i < 2 || t + i + 1 > n {
        return Err(Error::Argument(format!(
            "hfamily requires 2 <= i <= n - t - 1, got n={n} t={t} i={i}"
        )));
    }
    let generators = extremal::h_family(t, i, n)?;
    let size = extremal::s_value(n, t, i, &table)?;
    let mut doc = OutputDocument::new("hfamily");
    doc.input("n", n).input("t", t).input("i", i);
    let rendered: Vec<Value> = generators
        .iter()
        .map(|mask| {
            let elems: Vec<String> = mask.elements().map(|e| e.to_string()).collect();
            Value::String(format!("{{{}}}", elems.join(",")))
        })
        .collect();
    doc.result("generator_count", json!(rendered.len()));
    doc.result("generators", Value::Array(rendered));
    doc.result_str("generated_size", size);
    Ok((doc, 0))
}

fn cmd_oracle(
    n: u32,
    t: u32,
    nontrivial: bool,
    budget_ms: u64,
    budget_nodes: u64,
    threads: u32,
) -> Result<(OutputDocument, u8), Error> {
    let table = table_for(n)?;
    let config = OracleConfig {
        nontrivial,
        budget: OracleBudget {
            max_nodes: budget_nodes,
            max_millis: budget_ms,
        },
        threads,
    };
    let report = max_t_intersecting(n, t, config, &table)?;
    let mut doc = OutputDocument::new("oracle");
    doc.input("n", n)
        .input("t", t)
        .input("nontrivial", nontrivial)
        .input("budget_ms", budget_ms)
        .input("budget_nodes", budget_nodes)
        .input("threads", threads);
    doc.result_str("maximum", report.best_size);
    doc.result_str("outcome", report.outcome.as_str());
    doc.result_str("nodes_visited", report.nodes_visited);
    doc.result_str("seeded_size", report.seeded_size);
    doc.result("witness_size", json!(report.witness.len()));
    doc.result(
        "witness",
        Value::Array(
            report
                .witness
                .iter()
                .map(|p| Value::String(p.to_string()))
                .collect(),
        ),
    );
    for d in &report.diagnostics {
        doc.diagnostic(d);
    }
    Ok((doc, 0))
}

fn cmd_verify(
    suite: Suite,
    nmax: Option<u32>,
    threads: Option<usize>,
    fail_on_diagnostics: bool,
) -> Result<(OutputDocument, u8), Error> {
    if threads == Some(0) {
        return Err(Error::Argument("--threads must be >= 1".into()));
    }

    let selected: Vec<&'static str> = match suite {
        Suite::Bell => vec!["bell"],
        Suite::Formulas => vec!["formulas"],
        Suite::Operators => vec!["operators"],
        Suite::Oracle => vec!["oracle"],
        Suite::All => vec!["bell", "formulas", "operators", "oracle"],
    };
    // A named suite takes --nmax verbatim; `all` caps each suite at its
    // own documented default so one flag cannot push every suite past its
    // supported range at once.
    let plan: Vec<(&'static str, u32)> = selected
        .iter()
        .map(|&name| {
            let default = verify::default_nmax(name);
            let effective = match (suite, nmax) {
                (Suite::All, Some(user)) => user.min(default),
                (_, Some(user)) => user,
                (_, None) => default,
            };
            (name, effective)
        })
        .collect();

    let max_n = plan.iter().map(|&(_, nm)| nm).max().unwrap_or(0);
    let table = table_for(max_n)?;

    let run_all = || -> Result<Vec<verify::SuiteOutcome>, Error> {
        plan.iter()
            .map(|&(name, nm)| verify::run_suite(name, nm, &table))
            .collect()
    };
    let outcomes = match threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Argument(format!("thread pool: {e}")))?
            .install(run_all)?,
        None => run_all()?,
    };

    let mut doc = OutputDocument::new("verify");
    doc.input(
        "suite",
        match suite {
            Suite::Bell => "bell",
            Suite::Formulas => "formulas",
            Suite::Operators => "operators",
            Suite::Oracle => "oracle",
            Suite::All => "all",
        },
    );
    doc.input(
        "nmax",
        nmax.map_or_else(|| "default".to_string(), |v| v.to_string()),
    );
    doc.input("fail_on_diagnostics", fail_on_diagnostics);

    let mut failures = Vec::new();
    let mut any_diagnostics = false;
    for outcome in &outcomes {
        doc.result_str(&format!("suite:{}", outcome.name), outcome.summary());
        for f in &outcome.failures {
            failures.push(Value::String(format!("{}: {f}", outcome.name)));
        }
        for d in &outcome.diagnostics {
            any_diagnostics = true;
            doc.diagnostic(format!("{}: {d}", outcome.name));
        }
    }
    let failed = !failures.is_empty();
    doc.result("failures", Value::Array(failures));
    let status = if failed || (fail_on_diagnostics && any_diagnostics) {
        "fail"
    } else {
        "pass"
    };
    doc.result_str("status", status);
    Ok((doc, if status == "pass" { 0 } else { 3 }))
}
