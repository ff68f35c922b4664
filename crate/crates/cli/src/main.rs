use std::process::ExitCode;

use anyhow::{anyhow, Context};
use asp_lambda::asp::{answer_sets, program_of, show_interpretation, AspError};
use asp_lambda::ccg::{learned_map, CcgError, DerivationSpec};
use asp_lambda::oracle::{oracle_inverse_l, oracle_inverse_r, EnumBudget};
use asp_lambda::typecheck::infer_type;
use asp_lambda::{
    apply, inverse_l, inverse_r, normalize, parse_term, parse_type, InverseResult, Term, Type,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Typed ASP lambda calculus: parsing, typing, reduction and inverse lambda.
///
/// Formula arguments may be given inline or as @path to read a file.
#[derive(Debug, Parser)]
#[command(name = "asp-lambda", version)]
struct Cli {
    /// Print a JSON document instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Side {
    L,
    R,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Echo a formula in canonical form.
    Parse { formula: String },
    /// Print the inferred type.
    Type { formula: String },
    /// Print the beta-normal form.
    Normalize { formula: String },
    /// Print the normal form of F @ G.
    Apply { f: String, g: String },
    /// Find F with F @ G = H.
    Invl { h: String, g: String },
    /// Find F with G @ F = H.
    Invr { h: String, g: String },
    /// Print the order of a type such as "(e -> t)".
    Order { ty: String },
    /// Print the answer sets of a program file, one per line.
    Answersets { file: String },
    /// Learn missing word meanings from a derivation-spec JSON file.
    Derive { spec: String },
    /// Compare an inverse against brute-force enumeration.
    OracleCheck {
        h: String,
        g: String,
        #[arg(long, value_enum)]
        side: Side,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Type of F to enumerate; derived from H and G when omitted.
        #[arg(long = "type")]
        ty: Option<String>,
    },
}

/// The `--json` document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Report {
    v: u32,
    ok: bool,
    result: Value,
    case: Option<String>,
    diagnostics: Vec<String>,
}

const NULL: u8 = 1;
const USAGE: u8 = 2;
const INVALID: u8 = 3;

struct Outcome {
    code: u8,
    text: String,
    result: Value,
    case: Option<String>,
    diagnostics: Vec<String>,
}

impl Outcome {
    fn ok(text: impl Into<String>, result: Value) -> Outcome {
        Outcome {
            code: 0,
            text: text.into(),
            result,
            case: None,
            diagnostics: Vec::new(),
        }
    }

    fn fail(code: u8, message: impl Into<String>) -> Outcome {
        Outcome {
            code,
            text: String::new(),
            result: Value::Null,
            case: None,
            diagnostics: vec![message.into()],
        }
    }
}

type Run = Result<Outcome, Outcome>;

fn read_arg(arg: &str) -> Result<String, Outcome> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {path}"))
            .map_err(|e| Outcome::fail(USAGE, format!("{e:#}"))),
        None => Ok(arg.to_string()),
    }
}

fn read_file(arg: &str) -> Result<String, Outcome> {
    let path = arg.strip_prefix('@').unwrap_or(arg);
    std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {path}"))
        .map_err(|e| Outcome::fail(USAGE, format!("{e:#}")))
}

fn formula(arg: &str) -> Result<Term, Outcome> {
    let text = read_arg(arg)?;
    parse_term(&text).map_err(|e| Outcome::fail(INVALID, format!("parse error: {e}")))
}

fn invalid(e: impl std::fmt::Display) -> Outcome {
    Outcome::fail(INVALID, e.to_string())
}

fn term_out(t: &Term) -> Outcome {
    Outcome::ok(t.to_string(), json!(t.to_string()))
}

fn inverse_out(r: InverseResult) -> Outcome {
    match r.f {
        Some(f) => {
            let case = r.case_used.map(|c| c.to_string());
            Outcome {
                code: 0,
                text: f.to_string(),
                result: json!(f.to_string()),
                diagnostics: vec![format!("case {}", case.as_deref().unwrap_or("?"))],
                case,
            }
        }
        None => Outcome {
            code: NULL,
            text: "null".into(),
            result: Value::Null,
            case: None,
            diagnostics: Vec::new(),
        },
    }
}

fn run(cmd: &Command) -> Run {
    match cmd {
        Command::Parse { formula: f } => Ok(term_out(&formula(f)?)),
        Command::Type { formula: f } => {
            let ty = infer_type(&formula(f)?).map_err(invalid)?;
            Ok(Outcome::ok(ty.to_string(), json!(ty.to_string())))
        }
        Command::Normalize { formula: f } => Ok(term_out(&normalize(&formula(f)?).map_err(invalid)?)),
        Command::Apply { f, g } => Ok(term_out(&apply(&formula(f)?, &formula(g)?).map_err(invalid)?)),
        Command::Invl { h, g } => Ok(inverse_out(inverse_l(&formula(h)?, &formula(g)?).map_err(invalid)?)),
        Command::Invr { h, g } => Ok(inverse_out(inverse_r(&formula(h)?, &formula(g)?).map_err(invalid)?)),
        Command::Order { ty } => {
            let text = read_arg(ty)?;
            let ty = parse_type(&text).map_err(|e| Outcome::fail(INVALID, format!("parse error: {e}")))?;
            Ok(Outcome::ok(ty.order().to_string(), json!(ty.order())))
        }
        Command::Answersets { file } => answersets(file),
        Command::Derive { spec } => derive(spec),
        Command::OracleCheck { h, g, side, depth, ty } => oracle_check(h, g, *side, *depth, ty.as_deref()),
    }
}

fn answersets(file: &str) -> Run {
    let text = read_file(file)?;
    let t = parse_term(&text).map_err(|e| Outcome::fail(INVALID, format!("parse error: {e}")))?;
    let p = program_of(&t).map_err(invalid)?;
    let sets = answer_sets(&p).map_err(|e| match e {
        AspError::TooManyLiterals { .. } | AspError::UniverseTooLarge { .. } => Outcome::fail(USAGE, e.to_string()),
        _ => invalid(e),
    })?;
    let lines: Vec<String> = sets.iter().map(show_interpretation).collect();
    let result = json!(sets
        .iter()
        .map(|s| s.iter().map(|l| l.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>());
    let mut out = Outcome::ok(lines.join("\n"), result);
    if sets.is_empty() {
        out.code = NULL;
        out.diagnostics.push("no answer sets".into());
    }
    Ok(out)
}

fn derive(spec: &str) -> Run {
    let text = read_file(spec)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| invalid(format!("bad spec: {e}")))?;
    let specs: Vec<DerivationSpec> = match value {
        Value::Array(_) => serde_json::from_value(value),
        v => serde_json::from_value(v).map(|s| vec![s]),
    }
    .map_err(|e| invalid(format!("bad spec: {e}")))?;
    let mut lines = Vec::new();
    let mut learned = serde_json::Map::new();
    let mut traces = Vec::new();
    for s in &specs {
        let r = s.run().map_err(|e| match e {
            CcgError::NullInverse { .. } => Outcome::fail(NULL, e.to_string()),
            _ => invalid(e),
        })?;
        for (word, entry) in learned_map(&r) {
            lines.push(format!("{word} : {} : {}", entry.category, entry.meaning));
            learned.insert(word, serde_json::to_value(entry).expect("serializable"));
        }
        for e in &r.trace {
            let case = e.case.map(|c| format!(" {c}")).unwrap_or_default();
            traces.push(json!({
                "sentence": s.words.join(" "),
                "span": [e.span.0, e.span.1],
                "op": e.op.to_string(),
                "case": e.case.map(|c| c.to_string()),
                "inputs": e.inputs.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                "output": e.output.to_string(),
            }));
            lines.push(format!("  {}..{} {}{case} => {}", e.span.0, e.span.1, e.op, e.output));
        }
    }
    Ok(Outcome::ok(lines.join("\n"), json!({ "learned": learned, "trace": traces })))
}

fn target_type(h: &Term, g: &Term, side: Side) -> anyhow::Result<Type> {
    let th = infer_type(h)?;
    let tg = infer_type(g)?;
    match side {
        Side::L => Ok(Type::arrow(tg, th)),
        Side::R => match tg {
            Type::Arrow(input, output) if *output == th => Ok(*input),
            other => Err(anyhow!("G has type {other}, which cannot produce {th}")),
        },
    }
}

fn oracle_check(h: &str, g: &str, side: Side, depth: usize, ty: Option<&str>) -> Run {
    let (h, g) = (formula(h)?, formula(g)?);
    let target = match ty {
        Some(t) => parse_type(t).map_err(|e| Outcome::fail(INVALID, format!("parse error: {e}")))?,
        None => target_type(&h, &g, side).map_err(invalid)?,
    };
    let budget = EnumBudget::new(target, depth);
    let (found, algo) = match side {
        Side::L => (oracle_inverse_l(&h, &g, &budget), inverse_l(&h, &g)),
        Side::R => (oracle_inverse_r(&h, &g, &budget), inverse_r(&h, &g)),
    };
    let algo = algo.map_err(invalid)?;
    let agree = found.is_empty() || algo.f.is_some();
    let mut lines: Vec<String> = found.iter().map(|f| f.to_string()).collect();
    let algo_text = algo.f.as_ref().map(|f| f.to_string()).unwrap_or_else(|| "null".into());
    lines.push(format!("algorithm: {algo_text}"));
    lines.push(format!("agree: {}", if agree { "yes" } else { "no" }));
    let mut out = Outcome::ok(
        lines.join("\n"),
        json!({
            "oracle": found.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "algorithm": algo.f.as_ref().map(|f| f.to_string()),
            "agree": agree,
        }),
    );
    out.case = algo.case_used.map(|c| c.to_string());
    if !agree {
        out.code = NULL;
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = run(&cli.command).unwrap_or_else(|e| e);
    if cli.json {
        let report = Report {
            v: 1,
            ok: out.code == 0,
            result: out.result,
            case: out.case,
            diagnostics: out.diagnostics.clone(),
        };
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    } else if !out.text.is_empty() {
        println!("{}", out.text);
    }
    for d in &out.diagnostics {
        eprintln!("{d}");
    }
    ExitCode::from(out.code)
}
