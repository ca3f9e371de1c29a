//! Command-line front end: JSON documents in, JSON documents or text tables
//! out.
//!
//! Exit codes: 0 on success, 1 when there is no flow, a flow is invalid, two
//! maps differ or a rewrite's two Pddags disagree, and 2 for usage and parse
//! errors. Errors are written to the error stream as `{"error": ...}`.

pub mod doc;
pub mod gen;
pub mod table;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use pauliflow::flow::{self, FocussedSet};
use pauliflow::oracle::{self, DenseMap};
use pauliflow::rewrite::{self, Direction};
use pauliflow::{extract, synth, Pddag};
use serde_json::{json, Value};

use doc::{
    kind_of, to_canonical, CircuitDoc, DocError, FlowDoc, Kind, PatternBundle, PatternDoc, PddagDoc, ReadOptions,
    ReportDoc, ViolationDoc,
};

#[derive(Parser, Debug)]
#[command(name = "pauliflow", version, about = "Pauli flow, circuit extraction and pattern rewrites")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Accept angles given in radians and snap them to rationals of pi.
    #[arg(long, global = true)]
    pub float_angles: bool,
    /// Flow JSON to use in place of the pattern's own flow block.
    #[arg(long, global = true, value_name = "FILE")]
    pub flow: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Find, focus or check a Pauli flow.
    Flow {
        #[command(subcommand)]
        action: FlowAction,
    },
    /// Generators of the group of focussed sets.
    Fsets { file: PathBuf },
    /// Extract the Pauli dependency DAG of a pattern.
    Extract { file: PathBuf },
    /// Synthesize a circuit from a Pddag (or from a pattern, via extraction).
    Synth {
        file: PathBuf,
        /// Lower EXP gates to CX ladders and single-qubit gates.
        #[arg(long)]
        lower_exp: bool,
    },
    /// Rewrite a pattern and compare re-extraction with the simulated Pddag.
    Rewrite {
        #[arg(value_enum)]
        kind: RewriteKind,
        file: PathBuf,
        /// Vertex the rewrite acts on.
        #[arg(long)]
        at: String,
        /// Second pivot vertex, or the comma-separated focussed set for `switch`.
        #[arg(long)]
        with: Option<String>,
        /// Local complementation direction.
        #[arg(long, value_parser = parse_direction, default_value = "+", allow_hyphen_values = true)]
        dir: Direction,
    },
    /// Compare two patterns, Pddags or circuits as linear maps.
    VerifyEqual {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = oracle::DEFAULT_TOL)]
        tol: f64,
    },
    /// Print a random pattern that has a Pauli flow.
    Gen {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum FlowAction {
    /// Find a maximally delayed Pauli flow.
    Find { file: PathBuf },
    /// Focus the stored flow, or a found one.
    Focus { file: PathBuf },
    /// Check the stored flow against every flow condition.
    Verify { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RewriteKind {
    Relabel,
    Zelim,
    Lc,
    Pivot,
    Switch,
}

fn parse_direction(s: &str) -> Result<Direction, String> {
    match s {
        "+" | "plus" => Ok(Direction::Plus),
        "-" | "minus" => Ok(Direction::Minus),
        _ => Err(format!("direction must be + or -, got `{s}`")),
    }
}

/// A failed run: exit code and the JSON written to the error stream.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub body: Value,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure { code: 2, body: json!({ "error": msg.into() }) }
    }
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        Failure { code: 2, body: json!({ "error": e.message, "pointer": e.pointer }) }
    }
}

impl From<pauliflow::Error> for Failure {
    fn from(e: pauliflow::Error) -> Self {
        let code = match e {
            pauliflow::Error::NoFlow | pauliflow::Error::InvalidFlow(_) => 1,
            _ => 2,
        };
        Failure { code, body: json!({ "error": e.to_string() }) }
    }
}

/// What a successful command prints and its exit code (1 for negative
/// answers such as an invalid flow).
struct Output {
    code: i32,
    text: String,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { code: 0, text }
    }
}

/// Parse `argv` (program name first) and run, writing results to `out` and
/// errors to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = writeln!(err, "{}", json!({ "error": e.render().to_string().trim_end() }));
            return 2;
        }
    };
    match execute(&cli) {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            o.code
        }
        Err(f) => {
            let _ = writeln!(err, "{}", f.body);
            f.code
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| Failure::usage(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn read_value(path: &Path) -> Result<Value, Failure> {
    Ok(doc::parse_value(&read_text(path)?)?)
}

fn read_pattern(path: &Path, cli: &Cli) -> Result<PatternBundle, Failure> {
    let d: PatternDoc = doc::from_value(read_value(path)?)?;
    pattern_bundle(d, cli)
}

fn pattern_bundle(d: PatternDoc, cli: &Cli) -> Result<PatternBundle, Failure> {
    let mut b = d.to_bundle(ReadOptions { float_angles: cli.float_angles })?;
    if let Some(path) = &cli.flow {
        let f: FlowDoc = doc::from_value(read_value(path)?)?;
        b.flow = Some(f.to_flow(&b.pattern.graph, "")?);
    }
    Ok(b)
}

fn read_pddag_or_pattern(path: &Path, cli: &Cli) -> Result<Pddag, Failure> {
    let v = read_value(path)?;
    match kind_of(&v)? {
        Kind::Pddag => Ok(doc::from_value::<PddagDoc>(v)?.to_pddag(ReadOptions { float_angles: cli.float_angles })?),
        Kind::Pattern => {
            let b = pattern_bundle(doc::from_value(v)?, cli)?;
            Ok(extract::extract_pddag(&b.pattern, b.flow.as_ref(), b.fsets.as_deref())?)
        }
        Kind::Circuit => Err(Failure::usage("expected a pddag or pattern document, got a circuit")),
    }
}

/// Dense map of any document, and whether it carries pattern normalisation.
fn read_map(path: &Path, opts: ReadOptions) -> Result<(DenseMap, Kind), Failure> {
    let v = read_value(path)?;
    let kind = kind_of(&v)?;
    let map = match kind {
        Kind::Pattern => oracle::pattern_semantics(&doc::from_value::<PatternDoc>(v)?.to_bundle(opts)?.pattern)?,
        Kind::Pddag => oracle::pddag_semantics(&doc::from_value::<PddagDoc>(v)?.to_pddag(opts)?)?,
        Kind::Circuit => oracle::circuit_semantics(&doc::from_value::<CircuitDoc>(v)?.to_circuit(opts)?)?,
    };
    Ok((map, kind))
}

fn flow_output(b: &PatternBundle, f: &flow::PauliFlowData, table: bool) -> String {
    if table {
        table::flow(&b.pattern, f)
    } else {
        to_canonical(&FlowDoc::from_flow(f))
    }
}

fn no_flow(stuck: &pauliflow::VertexSet) -> Failure {
    Failure { code: 1, body: json!({ "error": "no Pauli flow exists", "stuck": stuck }) }
}

fn execute(cli: &Cli) -> Result<Output, Failure> {
    let opts = ReadOptions { float_angles: cli.float_angles };
    let table = cli.format == Format::Table;
    match &cli.command {
        Command::Flow { action } => match action {
            FlowAction::Find { file } => {
                let b = read_pattern(file, cli)?;
                let f = flow::find_pauli_flow_or_stuck(&b.pattern.graph).map_err(|s| no_flow(&s))?;
                Ok(Output::ok(flow_output(&b, &f, table)))
            }
            FlowAction::Focus { file } => {
                let b = read_pattern(file, cli)?;
                let f = extract::prepare_flow(&b.pattern, b.flow.as_ref())?;
                Ok(Output::ok(flow_output(&b, &f, table)))
            }
            FlowAction::Verify { file } => {
                let b = read_pattern(file, cli)?;
                let f = b.flow.as_ref().ok_or_else(|| Failure::from(DocError { pointer: "/flow".into(), message: "no flow to verify".into() }))?;
                let g = &b.pattern.graph;
                let vs = flow::verify_flow(g, f);
                let focussed = vs.is_empty() && flow::is_focussed_flow(g, f)?;
                let text = if table {
                    table::violations(&vs)
                } else {
                    let docs: Vec<ViolationDoc> = vs.iter().map(ViolationDoc::from_violation).collect();
                    to_canonical(&json!({ "valid": vs.is_empty(), "focussed": focussed, "violations": docs }))
                };
                Ok(Output { code: if vs.is_empty() { 0 } else { 1 }, text })
            }
        },
        Command::Fsets { file } => {
            let b = read_pattern(file, cli)?;
            let gens = flow::focussed_set_generators(&b.pattern.graph)?;
            let text = if table {
                table::fsets(&b.pattern, &gens)
            } else {
                let strings = gens
                    .iter()
                    .map(|f| extract::focussed_string(&b.pattern, f).map(|s| s.to_string()))
                    .collect::<pauliflow::Result<Vec<_>>>()?;
                let members: Vec<_> = gens.iter().map(|f| &f.members).collect();
                to_canonical(&json!({ "generators": members, "strings": strings }))
            };
            Ok(Output::ok(text))
        }
        Command::Extract { file } => {
            let b = read_pattern(file, cli)?;
            if let Err(stuck) = flow::find_pauli_flow_or_stuck(&b.pattern.graph) {
                return Err(no_flow(&stuck));
            }
            let d = extract::extract_pddag(&b.pattern, b.flow.as_ref(), b.fsets.as_deref())?;
            Ok(Output::ok(if table { table::pddag(&d) } else { to_canonical(&PddagDoc::from_pddag(&d)) }))
        }
        Command::Synth { file, lower_exp } => {
            let d = read_pddag_or_pattern(file, cli)?;
            let c = synth::synthesize(&d, *lower_exp)?;
            Ok(Output::ok(if table { table::circuit(&c) } else { to_canonical(&CircuitDoc::from_circuit(&c)) }))
        }
        Command::Rewrite { kind, file, at, with, dir } => {
            let b = read_pattern(file, cli)?;
            let (p, f, fs) = (&b.pattern, b.flow.as_ref(), b.fsets.as_deref());
            let rep = match kind {
                RewriteKind::Relabel => rewrite::relabel_pauli(p, f, fs, at)?,
                RewriteKind::Zelim => rewrite::eliminate_z(p, f, fs, at)?,
                RewriteKind::Lc => rewrite::local_complement_pattern(p, f, fs, at, *dir)?,
                RewriteKind::Pivot => {
                    let v = with.as_deref().ok_or_else(|| Failure::usage("pivot needs --with <vertex>"))?;
                    rewrite::pivot_pattern(p, f, fs, at, v)?
                }
                RewriteKind::Switch => {
                    let members = with.as_deref().unwrap_or("");
                    let set = members.split(',').filter(|s| !s.is_empty()).map(str::to_string).collect();
                    rewrite::switch_flow_rewrite(p, f, fs, at, &FocussedSet::new(set))?
                }
            };
            let report = ReportDoc::from_report(&rep);
            let code = if report.matches { 0 } else { 1 };
            let text = if table {
                let mut t = format!("match: {}\n\nvia pattern\n", report.matches);
                t += &table::pddag(&rep.via_pattern);
                t += "\nvia simulation\n";
                t += &table::pddag(&rep.via_simulation);
                t
            } else {
                to_canonical(&report)
            };
            Ok(Output { code, text })
        }
        Command::VerifyEqual { a, b, tol } => {
            let (ma, ka) = read_map(a, opts)?;
            let (mb, kb) = read_map(b, opts)?;
            let same_shape = ma.rows() == mb.rows() && ma.cols() == mb.cols();
            let equal = same_shape
                && if ka == Kind::Pattern || kb == Kind::Pattern {
                    oracle::equal_up_to_scalar(&ma, &mb, *tol)?
                } else {
                    oracle::equal_up_to_phase(&ma, &mb, *tol)?
                };
            let text = if table {
                format!("{}\n", if equal { "equal" } else { "different" })
            } else {
                to_canonical(&json!({ "equal": equal, "kinds": [ka.name(), kb.name()] }))
            };
            Ok(Output { code: if equal { 0 } else { 1 }, text })
        }
        Command::Gen { vertices, seed } => {
            let p = gen::generate(*vertices, *seed).map_err(Failure::usage)?;
            let d = PatternDoc::from_parts(&p, None, None);
            Ok(Output::ok(to_canonical(&d)))
        }
    }
}
