//! The `pptop` command line.
//!
//! Every command prints one JSON document on stdout (or DOT where asked)
//! and reports through its exit status:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, positive answer |
//! | 1 | success, negative answer (no homomorphism, condition fails, ...) |
//! | 2 | usage, input or parse error |
//! | 3 | search or size budget exhausted |
//! | 4 | internal inconsistency (a bug) |

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::classify::{classify, signature, ClassifyOptions, PrimeSelection, UpperBound};
use crate::digraph::{decode, encode, to_dot, Digraph, Family, Format};
use crate::homsearch::{core_of, find_hom, SearchBudget};
use crate::minorcond::{resolve_condition, satisfies};
use crate::ppcons::{
    construct_p2_from, construct_path_formula, construct_t3_from, pp_power, Construction, PpFormula,
};
use crate::{Error, Limits};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "pptop",
    version,
    about = "Digraphs at the top of the pp-constructability order"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Node limit for each homomorphism search.
    #[arg(long, global = true, value_name = "N")]
    budget_nodes: Option<u64>,
    /// Largest product, power or indicator digraph to build.
    #[arg(long, global = true, value_name = "N")]
    budget_vertices: Option<usize>,
    /// Largest edge count of any built digraph.
    #[arg(long, global = true, value_name = "N")]
    budget_edges: Option<usize>,
    /// Cyclic orders to check, e.g. `2,3,5`.
    #[arg(long, global = true, value_delimiter = ',', value_name = "LIST")]
    primes: Option<Vec<usize>>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Same as `--format dot`.
    #[arg(long, global = true)]
    dot: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Place a digraph relative to P1, P2, T3 and the prime cycles.
    Classify { input: PathBuf },
    /// Decide whether the polymorphisms satisfy a minor condition.
    Check {
        input: PathBuf,
        /// A builtin (`cyclic:5`, `maltsev`, `constant`, `fourfold`) or equations.
        #[arg(long)]
        condition: String,
    },
    /// Compute the core.
    Core { input: PathBuf },
    /// Search for a homomorphism from SOURCE to TARGET.
    Hom {
        source: PathBuf,
        target: PathBuf,
        /// Fix a vertex: `--pin 0=2`.
        #[arg(long, value_parser = parse_pin)]
        pin: Vec<(usize, usize)>,
    },
    /// Evaluate a pp power, e.g. `--formula "d=1; exists 1; E(x1,e0) & E(e0,y1)"`.
    Ppower {
        input: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Build one of the explicit pp constructions.
    Construct {
        #[command(subcommand)]
        what: ConstructCommand,
    },
    /// Print a member of a standard family.
    Gen {
        /// `cycle`, `path`, `tournament` or `clique`.
        family: Family,
        /// Number of vertices.
        k: usize,
    },
    /// Condition satisfaction on the core: Maltsev and the cyclic orders.
    Signature { input: PathBuf },
}

#[derive(Debug, Subcommand)]
enum ConstructCommand {
    /// P2 from a core with at least two vertices.
    P2From { input: PathBuf },
    /// P_k from P2.
    Path { k: usize },
    /// T3 from a digraph whose core is not totally rectangular.
    T3From { input: PathBuf },
}

fn parse_pin(s: &str) -> Result<(usize, usize), String> {
    let (v, w) = s.split_once('=').ok_or("expected VERTEX=VALUE")?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((parse(v)?, parse(w)?))
}

/// What a command produced before it is written out.
enum Outcome {
    Json(serde_json::Value, i32),
    Text(String),
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        e if e.is_resource_limit() => EXIT_RESOURCE,
        Error::InternalInconsistency(_) => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

struct Ctx<'a> {
    limits: Limits,
    primes: Option<Vec<usize>>,
    dot: bool,
    stdin: &'a mut dyn Read,
}

impl Ctx<'_> {
    fn read_graph(&mut self, path: &PathBuf) -> Result<Digraph, Failure> {
        let text = if path.as_os_str() == "-" {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
            s
        } else {
            std::fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?
        };
        let format = if text.trim_start().starts_with('{') {
            Format::Json
        } else {
            Format::EdgeList
        };
        Ok(decode(&text, format)?)
    }
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("payload serializes")
}

fn construction_payload(c: &Construction) -> serde_json::Value {
    let verified =
        c.to_target.verify(&c.power, &c.target) && c.from_target.verify(&c.target, &c.power);
    json!({
        "formula": c.formula.to_string(),
        "dimension": c.formula.dim(),
        "base": c.base,
        "power": c.power,
        "target": c.target,
        "to_target": c.to_target,
        "from_target": c.from_target,
        "witness": c.witness,
        "verified": verified,
    })
}

fn execute(cmd: Command, ctx: &mut Ctx<'_>) -> Result<Outcome, Failure> {
    let limits = ctx.limits;
    match cmd {
        Command::Classify { input } => {
            let g = ctx.read_graph(&input)?;
            let opts = ClassifyOptions {
                primes: ctx
                    .primes
                    .clone()
                    .map_or(PrimeSelection::UpToCoreSize, PrimeSelection::List),
                limits,
            };
            let c = classify(&g, &opts)?;
            let mut v = to_value(&c);
            if ctx.dot {
                let mut dots = BTreeMap::new();
                dots.insert("core", to_dot(&c.core, "core"));
                for b in &c.upper_bounds {
                    if let UpperBound::T3 { construction, .. } = b {
                        dots.insert("t3_power", to_dot(&construction.power, "t3_power"));
                    }
                }
                v["dot"] = to_value(&dots);
            }
            Ok(Outcome::Json(v, EXIT_OK))
        }
        Command::Check { input, condition } => {
            let cond = resolve_condition(&condition)?;
            let g = ctx.read_graph(&input)?;
            let w = satisfies(&g, &cond, &limits)?;
            let code = if w.is_some() { EXIT_OK } else { EXIT_NEGATIVE };
            Ok(Outcome::Json(
                json!({
                    "condition": cond.to_string(),
                    "satisfied": w.is_some(),
                    "witness": w,
                }),
                code,
            ))
        }
        Command::Core { input } => {
            let g = ctx.read_graph(&input)?;
            let core = core_of(&g, &limits.search)?;
            if ctx.dot {
                return Ok(Outcome::Text(to_dot(&core.digraph, "core")));
            }
            Ok(Outcome::Json(
                json!({
                    "core": core.digraph,
                    "vertices": core.vertices,
                    "retraction": core.retraction,
                }),
                EXIT_OK,
            ))
        }
        Command::Hom {
            source,
            target,
            pin,
        } => {
            let g = ctx.read_graph(&source)?;
            let h = ctx.read_graph(&target)?;
            let found = find_hom(&g, &h, &pin, &limits.search)?;
            let code = if found.is_some() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            };
            Ok(Outcome::Json(json!({ "hom": found }), code))
        }
        Command::Ppower { input, formula } => {
            let phi: PpFormula = formula.parse()?;
            let g = ctx.read_graph(&input)?;
            let p = pp_power(&g, &phi, &limits)?;
            if ctx.dot {
                return Ok(Outcome::Text(to_dot(&p.graph, "power")));
            }
            Ok(Outcome::Json(
                json!({
                    "formula": phi.to_string(),
                    "power": p.graph,
                    "constants_on_noncore": p.constants_on_noncore,
                }),
                EXIT_OK,
            ))
        }
        Command::Construct { what } => {
            let built = match what {
                ConstructCommand::P2From { input } => {
                    construct_p2_from(&ctx.read_graph(&input)?, &limits)
                }
                ConstructCommand::Path { k } => construct_path_formula(k, &limits),
                ConstructCommand::T3From { input } => {
                    construct_t3_from(&ctx.read_graph(&input)?, &limits)
                }
            };
            match built {
                Ok(c) if ctx.dot => Ok(Outcome::Text(to_dot(&c.power, "power"))),
                Ok(c) => Ok(Outcome::Json(construction_payload(&c), EXIT_OK)),
                Err(
                    e @ (Error::NotACore
                    | Error::TooFewVertices { .. }
                    | Error::IsTotallyRectangular),
                ) => Ok(Outcome::Json(
                    json!({ "constructed": false, "reason": e.to_string() }),
                    EXIT_NEGATIVE,
                )),
                Err(e) => Err(e.into()),
            }
        }
        Command::Gen { family, k } => {
            let g = family.generate(k)?;
            if ctx.dot {
                Ok(Outcome::Text(encode(&g, Format::Dot)))
            } else {
                Ok(Outcome::Json(to_value(&g), EXIT_OK))
            }
        }
        Command::Signature { input } => {
            let g = ctx.read_graph(&input)?;
            let orders = match &ctx.primes {
                Some(p) => p.clone(),
                None => {
                    let n = core_of(&g, &limits.search)?.digraph.vertex_count();
                    crate::classify::primes_up_to(n)
                }
            };
            Ok(Outcome::Json(
                to_value(&signature(&g, &orders, &limits)?),
                EXIT_OK,
            ))
        }
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let g = &cli.global;
    let mut limits = Limits::default();
    if let Some(n) = g.budget_nodes {
        limits.search = SearchBudget::new(n);
    }
    if let Some(v) = g.budget_vertices {
        limits.vertex_budget = v;
    }
    if let Some(e) = g.budget_edges {
        limits.edge_budget = e;
    }
    let mut ctx = Ctx {
        limits,
        primes: g.primes.clone(),
        dot: g.dot || g.format == OutputFormat::Dot,
        stdin,
    };
    match execute(cli.command, &mut ctx) {
        Ok(Outcome::Json(v, code)) => {
            let _ = writeln!(out, "{v}");
            code
        }
        Ok(Outcome::Text(t)) => {
            let _ = out.write_all(t.as_bytes());
            EXIT_OK
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
