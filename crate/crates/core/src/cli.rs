//! Command-line front end.
//!
//! Exit codes: 0 success or agreement, 2 disagreement with a formula or a
//! characterization, 3 node budget exceeded, 64 unparseable input,
//! 65 hypothesis not met, 70 internal error.

use std::io::Write;
use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::engine::{ConstantKind, Engine, SearchOptions, SearchReport, SearchReportJson, DEFAULT_NODE_BUDGET};
use crate::error::Error;
use crate::formulas::{formula_for, FormulaValue};
use crate::group::{GroupSpec, DEFAULT_CEILING};
use crate::inverse::{enumerate_extremal, verify_characterization, TheoremId};
use crate::sequence::WeightSet;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISAGREE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_PARSE: i32 = 64;
pub const EXIT_HYPOTHESIS: i32 = 65;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Debug, Parser)]
#[command(name = "zerosum", version, about = "Weighted zero-sum constants of small finite abelian groups")]
pub struct Cli {
    /// Worker threads for the search.
    #[arg(long, global = true, env = "ZEROSUM_THREADS", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    threads: u32,
    /// Abort a search after this many nodes.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
    /// Prune the search by automorphism orbits.
    #[arg(long, global = true)]
    orbit_pruning: bool,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
    /// Report wall times as 0 so that output is reproducible byte for byte.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Largest group order accepted (at most 64).
    #[arg(long, global = true, default_value_t = DEFAULT_CEILING)]
    ceiling: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute one constant and compare it with the closed form, if any.
    Compute(ComputeArgs),
    /// List every extremal squarefree sequence for the Harborth constant.
    Enumerate(EnumerateArgs),
    /// Check a structural characterization against the extremal census.
    Verify(VerifyArgs),
    /// Compute a constant over a family of groups.
    Table(TableArgs),
}

#[derive(Debug, Args)]
struct ComputeArgs {
    /// Invariant factors, e.g. `2,6`.
    #[arg(long)]
    group: String,
    /// `pm`, `classic` or a comma list of weights.
    #[arg(long, default_value = "pm")]
    weights: String,
    /// davenport, eta, egz, harborth or critical.
    #[arg(long, value_parser = parse_kind)]
    kind: ConstantKind,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[arg(long)]
    group: String,
    /// `pm`, `classic` or a comma list of weights.
    #[arg(long, default_value = "pm")]
    weights: String,
    #[arg(long, value_parser = parse_kind, default_value = "harborth")]
    kind: ConstantKind,
    /// Also report one representative per automorphism orbit.
    #[arg(long)]
    orbits: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    group: String,
    /// c2c4-pm, pm-general, unweighted-even, unweighted-odd or full-group.
    #[arg(long, value_parser = parse_theorem)]
    theorem: TheoremId,
    /// Only used by `full-group`; the other theorems fix their weights.
    #[arg(long)]
    weights: Option<String>,
}

#[derive(Debug, Args)]
struct TableArgs {
    /// `2,2n` for C2+C2n or `n` for cyclic groups.
    #[arg(long, value_parser = parse_family)]
    family: Family,
    /// `pm`, `classic` or a comma list of weights.
    #[arg(long, default_value = "pm")]
    weights: String,
    /// davenport, eta, egz, harborth or critical.
    #[arg(long, value_parser = parse_kind)]
    kind: ConstantKind,
    /// First n of the range.
    #[arg(long = "from", default_value_t = 1)]
    from: u32,
    /// Last n of the range, inclusive.
    #[arg(long = "to")]
    to: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    TwoByTwoN,
    Cyclic,
}

impl Family {
    fn factors(self, n: u32) -> Vec<u32> {
        match self {
            Family::TwoByTwoN => vec![2, 2 * n],
            Family::Cyclic if n == 1 => vec![],
            Family::Cyclic => vec![n],
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Family::TwoByTwoN => "2,2n",
            Family::Cyclic => "n",
        }
    }
}

fn parse_kind(s: &str) -> Result<ConstantKind, Error> {
    s.parse()
}

fn parse_theorem(s: &str) -> Result<TheoremId, Error> {
    s.parse()
}

fn parse_family(s: &str) -> Result<Family, String> {
    match s.replace(' ', "").as_str() {
        "2,2n" => Ok(Family::TwoByTwoN),
        "n" => Ok(Family::Cyclic),
        other => Err(format!("unknown family `{other}`, expected `2,2n` or `n`")),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::GroupSyntax(..)
        | Error::InvariantChain(_)
        | Error::AboveCeiling { .. }
        | Error::UnsupportedCeiling(_)
        | Error::SequenceSyntax(..)
        | Error::WeightSyntax(..)
        | Error::ElementMismatch(_) => EXIT_PARSE,
        Error::WrongShape { .. }
        | Error::Hypothesis(_)
        | Error::Precondition(_)
        | Error::TrivialWeights
        | Error::OrbitPruningUnavailable(_) => EXIT_HYPOTHESIS,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::GroupMismatch(..) | Error::InvalidWitness(_) | Error::BoundViolation(_) | Error::ThreadPool(_) => {
            EXIT_INTERNAL
        }
    }
}

struct Failure {
    code: i32,
    field: &'static str,
    error: Error,
}

fn fail(field: &'static str) -> impl Fn(Error) -> Failure {
    move |error| Failure { code: exit_code(&error), field, error }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}: {}", f.field, f.error);
            f.code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut impl Write) -> Result<i32, Failure> {
    let engine = Engine::new(SearchOptions {
        threads: cli.threads as usize,
        node_budget: cli.node_budget,
        orbit_pruning: cli.orbit_pruning,
        ..Default::default()
    })
    .map_err(fail("threads"))?;
    let mut buf = Vec::new();
    let code = match &cli.command {
        Command::Compute(a) => compute(cli, &engine, a, &mut buf)?,
        Command::Enumerate(a) => enumerate(cli, &engine, a, &mut buf)?,
        Command::Verify(a) => verify(cli, &engine, a, &mut buf)?,
        Command::Table(a) => table(cli, &engine, a, &mut buf)?,
    };
    out.write_all(&buf).map_err(|e| Failure { code: EXIT_INTERNAL, field: "output", error: Error::Precondition(e.to_string()) })?;
    Ok(code)
}

fn parse_group(cli: &Cli, spec: &str) -> Result<GroupSpec, Failure> {
    GroupSpec::parse_with_ceiling(spec, cli.ceiling).map_err(fail("group"))
}

fn parse_weights(spec: &str, group: &GroupSpec) -> Result<WeightSet, Failure> {
    WeightSet::parse(spec, group.exponent()).map_err(fail("weights"))
}

fn verdict(formula: &FormulaValue, value: usize) -> &'static str {
    if !formula.applicable {
        "NO_FORMULA"
    } else if formula.admits(value) {
        "AGREE"
    } else {
        "DISAGREE"
    }
}

#[derive(Serialize)]
struct ComputeJson {
    schema: u32,
    #[serde(flatten)]
    report: SearchReportJson,
    formula: FormulaValue,
    verdict: &'static str,
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn json_line(out: &mut Vec<u8>, value: &impl Serialize) {
    serde_json::to_writer_pretty(&mut *out, value).expect("serializable");
    out.push(b'\n');
}

fn compute(cli: &Cli, engine: &Engine, a: &ComputeArgs, out: &mut Vec<u8>) -> Result<i32, Failure> {
    let group = parse_group(cli, &a.group)?;
    let weights = parse_weights(&a.weights, &group)?;
    let report = engine.compute(a.kind, &group, &weights).map_err(fail("kind"))?;
    let formula = formula_for(a.kind, &group, &report.weights);
    let v = verdict(&formula, report.value);
    write_compute(cli, &report, &formula, v, out);
    Ok(if v == "DISAGREE" { EXIT_DISAGREE } else { EXIT_OK })
}

fn write_compute(cli: &Cli, report: &SearchReport, formula: &FormulaValue, verdict: &'static str, out: &mut Vec<u8>) {
    let json = report.to_json(!cli.no_timing);
    match cli.output {
        Output::Text => {
            let mut lines = vec![
                ("group", report.group.name()),
                ("weights", report.weights.label()),
                ("kind", report.kind.to_string()),
                ("value", report.value.to_string()),
                ("witness", json.witness.clone().unwrap_or_default()),
                ("nodes", json.nodes_visited.to_string()),
                ("time_ms", json.wall_time_ms.to_string()),
            ];
            if formula.applicable {
                lines.push(("formula", format!("{} [{}]", formula.render(), formula.source)));
            }
            lines.push(("verdict", verdict.to_string()));
            for (k, v) in lines {
                let _ = writeln!(out, "{k:<9}{v}");
            }
        }
        Output::Json => json_line(out, &ComputeJson { schema: 1, report: json, formula: formula.clone(), verdict }),
        Output::Csv => {
            let header =
                ["group", "weights", "kind", "value", "witness", "nodes_visited", "wall_time_ms", "formula", "source", "verdict"];
            let row = vec![
                json.group,
                report.weights.label(),
                report.kind.to_string(),
                report.value.to_string(),
                json.witness.unwrap_or_default(),
                json.nodes_visited.to_string(),
                json.wall_time_ms.to_string(),
                formula.render(),
                formula.source.to_string(),
                verdict.to_string(),
            ];
            out.extend(csv_bytes(&header, &[row]));
        }
    }
}

#[derive(Serialize)]
struct EnumerateJson {
    #[serde(flatten)]
    census: crate::inverse::CensusJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    orbit_representatives: Option<Vec<String>>,
}

fn enumerate(cli: &Cli, engine: &Engine, a: &EnumerateArgs, out: &mut Vec<u8>) -> Result<i32, Failure> {
    let group = parse_group(cli, &a.group)?;
    let weights = parse_weights(&a.weights, &group)?;
    // the census never uses pruning; it is exact by construction
    let exact = Engine::new(SearchOptions { orbit_pruning: false, ..engine.options().clone() }).map_err(fail("threads"))?;
    let census = enumerate_extremal(&exact, &group, &weights, a.kind).map_err(fail("kind"))?;
    let reps = if a.orbits {
        let reps = census.orbit_representatives().map_err(fail("orbits"))?;
        Some(
            reps.iter()
                .map(|r| crate::sequence::Sequence::from_indices(&group, r).expect("in range").to_string())
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };
    let json = census.to_json();
    match cli.output {
        Output::Text => {
            let _ = writeln!(out, "group    {}", group.name());
            let _ = writeln!(out, "weights  {}", weights.label());
            let _ = writeln!(out, "kind     {}", census.kind);
            let _ = writeln!(out, "length   {}", census.length);
            let _ = writeln!(out, "count    {}", census.len());
            if let Some(r) = &reps {
                let _ = writeln!(out, "orbits   {}", r.len());
            }
            for s in &json.sequences {
                let _ = writeln!(out, "{s}");
            }
        }
        Output::Json => json_line(out, &EnumerateJson { census: json, orbit_representatives: reps }),
        Output::Csv => {
            let rows: Vec<Vec<String>> = json.sequences.into_iter().map(|s| vec![s]).collect();
            out.extend(csv_bytes(&["sequence"], &rows));
        }
    }
    Ok(EXIT_OK)
}

fn verify(cli: &Cli, engine: &Engine, a: &VerifyArgs, out: &mut Vec<u8>) -> Result<i32, Failure> {
    // a malformed chain such as 2,5 cannot be C2+C2n: report it as a hypothesis failure
    let group = GroupSpec::parse_with_ceiling(&a.group, cli.ceiling).map_err(|e| match e {
        Error::InvariantChain(_) => Failure { code: EXIT_HYPOTHESIS, field: "group", error: e },
        other => fail("group")(other),
    })?;
    let weights = a.weights.as_deref().map(|w| parse_weights(w, &group)).transpose()?;
    let exact = Engine::new(SearchOptions { orbit_pruning: false, ..engine.options().clone() }).map_err(fail("threads"))?;
    let report = verify_characterization(&exact, &group, a.theorem, weights.as_ref()).map_err(fail("theorem"))?;
    let json = report.to_json();
    match cli.output {
        Output::Text => {
            let _ = writeln!(out, "theorem     {}", a.theorem);
            let _ = writeln!(out, "group       {}", group.name());
            let _ = writeln!(out, "weights     {}", json.weights);
            let _ = writeln!(out, "length      {}", json.length);
            let _ = writeln!(out, "census      {}", json.census_count);
            let _ = writeln!(out, "predicate   {}", json.predicate_count);
            let _ = writeln!(out, "difference  {}", json.symmetric_difference.len());
            for s in &json.symmetric_difference {
                let _ = writeln!(out, "  {s}");
            }
            let _ = writeln!(out, "verdict     {}", json.verdict);
        }
        Output::Json => json_line(out, &json),
        Output::Csv => {
            let header = ["theorem", "group", "weights", "length", "census_count", "predicate_count", "symmetric_difference", "verdict"];
            let row = vec![
                a.theorem.to_string(),
                json.group.clone(),
                json.weights.clone(),
                json.length.to_string(),
                json.census_count.to_string(),
                json.predicate_count.to_string(),
                json.symmetric_difference.join(" "),
                json.verdict.to_string(),
            ];
            out.extend(csv_bytes(&header, &[row]));
        }
    }
    Ok(if report.holds() { EXIT_OK } else { EXIT_DISAGREE })
}

#[derive(Serialize)]
struct TableRow {
    n: u32,
    group: String,
    value: Option<usize>,
    formula: FormulaValue,
    verdict: &'static str,
    nodes_visited: Option<u64>,
    wall_time_ms: Option<u64>,
}

#[derive(Serialize)]
struct TableJson {
    schema: u32,
    family: &'static str,
    kind: ConstantKind,
    weights: String,
    rows: Vec<TableRow>,
}

fn table(cli: &Cli, engine: &Engine, a: &TableArgs, out: &mut Vec<u8>) -> Result<i32, Failure> {
    if a.from == 0 || a.from > a.to {
        return Err(Failure {
            code: EXIT_PARSE,
            field: "from",
            error: Error::Precondition(format!("empty range {}..={}", a.from, a.to)),
        });
    }
    let mut rows = Vec::new();
    for n in a.from..=a.to {
        let group = GroupSpec::with_ceiling(&a.family.factors(n), cli.ceiling).map_err(fail("to"))?;
        let weights = parse_weights(&a.weights, &group)?;
        let formula = formula_for(a.kind, &group, &weights);
        let row = match engine.compute(a.kind, &group, &weights) {
            Ok(r) => {
                let j = r.to_json(!cli.no_timing);
                TableRow {
                    n,
                    group: group.name(),
                    value: Some(r.value),
                    verdict: verdict(&formula, r.value),
                    formula,
                    nodes_visited: Some(j.nodes_visited),
                    wall_time_ms: Some(j.wall_time_ms),
                }
            }
            Err(Error::BudgetExceeded { .. }) => TableRow {
                n,
                group: group.name(),
                value: None,
                formula,
                verdict: "BUDGET",
                nodes_visited: None,
                wall_time_ms: None,
            },
            Err(e) => return Err(fail("kind")(e)),
        };
        rows.push(row);
    }
    let disagree = rows.iter().any(|r| r.verdict == "DISAGREE");
    let cells = |r: &TableRow| -> Vec<String> {
        let opt = |v: Option<u64>| v.map_or_else(|| "BUDGET".to_string(), |x| x.to_string());
        vec![
            r.n.to_string(),
            r.group.clone(),
            r.value.map_or_else(|| "BUDGET".to_string(), |v| v.to_string()),
            r.formula.render(),
            r.formula.source.to_string(),
            r.verdict.to_string(),
            opt(r.nodes_visited),
            opt(r.wall_time_ms),
        ]
    };
    let header = ["n", "group", "value", "formula", "source", "verdict", "nodes_visited", "wall_time_ms"];
    match cli.output {
        Output::Text => {
            let body: Vec<Vec<String>> = rows.iter().map(cells).collect();
            let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
            for r in &body {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.len());
                }
            }
            let line = |cells: Vec<&str>| {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                padded.join("  ").trim_end().to_string()
            };
            let _ = writeln!(out, "{}", line(header.to_vec()));
            for r in &body {
                let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
            }
        }
        Output::Json => json_line(
            out,
            &TableJson { schema: 1, family: a.family.as_str(), kind: a.kind, weights: a.weights.clone(), rows },
        ),
        Output::Csv => {
            let body: Vec<Vec<String>> = rows.iter().map(cells).collect();
            out.extend(csv_bytes(&header, &body));
        }
    }
    Ok(if disagree { EXIT_DISAGREE } else { EXIT_OK })
}
