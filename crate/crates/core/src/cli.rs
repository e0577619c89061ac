//! The `qfa` command line: argument types and verb implementations.
//!
//! Exit codes: 0 success, 1 acceptance mismatch, 2 input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::alphabet::{enumerate_words, Word};
use crate::automata::Language;
use crate::detector::{analyze, DEFAULT_K_MAX};
use crate::dfa::DfaSpec;
use crate::error::{Error, Result};
use crate::linalg::CVector;
use crate::optimizer::{solve_problem1, solve_problem2, solve_problem3, DEFAULT_DIM};
use crate::qfa::QfaSpec;
use crate::reproduce::{reproduce, ReproduceOptions};
use crate::subspace::{decompose, escape_word, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qfa", version, about = "Measure-many QFA simulation, construction detection and bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a QFA on one word or on every word up to a length.
    Simulate {
        file: PathBuf,
        /// Word to run; multi-letter symbols are separated by spaces.
        word: Option<String>,
        /// Run every word of length at most N instead.
        #[arg(long, value_name = "N")]
        enumerate: Option<usize>,
        /// Catalog language to measure the recognition margin against.
        #[arg(long)]
        oracle: Option<String>,
        /// Parameter for the `l1` oracle (defaults to half the alphabet size).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Split the non-halting space into ergodic and transient parts.
    Decompose {
        file: PathBuf,
        /// Comma-separated generator words.
        #[arg(long, value_delimiter = ',', required = true)]
        words: Vec<String>,
        /// Target norm for escape words.
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Detect constructions in a DFA and report the implied bound.
    Bound {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        kmax: usize,
        #[arg(long)]
        json: bool,
    },
    /// Solve optimization problem 1, 2 or 3.
    Optimize {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        problem: u8,
        #[arg(long, default_value_t = DEFAULT_DIM)]
        dim: usize,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Build everything and print the summary table.
    Reproduce {
        #[arg(long, default_value_t = DEFAULT_DIM)]
        dim: usize,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Check a QFA file for structural and unitarity problems.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

/// Parses `args` (including the program name) and runs the verb.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match run(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::CrossCheck(_) => EXIT_MISMATCH,
                _ => EXIT_INPUT,
            }
        }
    }
}

pub fn run(command: &Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Simulate { file, word, enumerate, oracle, k, json } => {
            cmd_simulate(file, word.as_deref(), *enumerate, oracle.as_deref(), *k, *json, out)
        }
        Command::Decompose { file, words, eps, tol, json } => cmd_decompose(file, words, *eps, *tol, *json, out),
        Command::Bound { file, kmax, json } => cmd_bound(file, *kmax, *json, out),
        Command::Optimize { problem, dim, restarts, seed, json } => {
            cmd_optimize(*problem, *dim, *restarts, *seed, *json, out)
        }
        Command::Reproduce { dim, restarts, seed, json } => {
            let opts = ReproduceOptions { dim: *dim, restarts: *restarts, seed: *seed };
            cmd_reproduce(&opts, *json, out)
        }
        Command::Validate { file, json } => cmd_validate(file, *json, out),
    }
}

fn load_valid(file: &PathBuf) -> Result<QfaSpec> {
    let spec = QfaSpec::load(file)?;
    let violations = spec.validate();
    if violations.is_empty() {
        Ok(spec)
    } else {
        let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        Err(Error::InvalidAutomaton(list.join("; ")))
    }
}

fn pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.entries().iter().map(|c| [c.re, c.im]).collect()
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e)
}

#[derive(Serialize)]
struct WordRun {
    word: String,
    p_acc: f64,
    p_rej: f64,
    residual: f64,
}

pub fn cmd_simulate(
    file: &PathBuf,
    word: Option<&str>,
    enumerate: Option<usize>,
    oracle: Option<&str>,
    k: Option<usize>,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let spec = load_valid(file)?;
    let alphabet = &spec.alphabet;
    let words: Vec<Word> = match (word, enumerate) {
        (Some(_), Some(_)) => {
            return Err(Error::InvalidParameter("give either a word or --enumerate".into()))
        }
        (Some(w), None) => vec![alphabet.parse(w)?],
        (None, Some(n)) => enumerate_words(alphabet.len(), n),
        (None, None) if oracle.is_some() => enumerate_words(alphabet.len(), 6),
        (None, None) => return Err(Error::InvalidParameter("give a word or --enumerate".into())),
    };
    let oracle = match oracle {
        Some(name) => {
            let language = Language::from_name(name, k.unwrap_or(alphabet.len() / 2))?;
            if language.alphabet().names() != alphabet.names() {
                return Err(Error::InvalidParameter(format!(
                    "oracle `{name}` is over {:?}, automaton over {:?}",
                    language.alphabet().names(),
                    alphabet.names()
                )));
            }
            Some(language.oracle())
        }
        None => None,
    };

    let mut runs = Vec::with_capacity(words.len());
    for w in &words {
        let r = spec.run(w)?;
        runs.push(WordRun {
            word: alphabet.format(w),
            p_acc: r.p_acc,
            p_rej: r.p_rej,
            residual: r.residual.norm_sqr(),
        });
    }
    let worst = match &oracle {
        Some(o) => Some(spec.worst_case(o, &words)?),
        None => None,
    };

    if json {
        let mut v = json!({ "words": runs });
        if let Some((m, w)) = &worst {
            v["margin"] = json!(m);
            v["worst_word"] = json!(alphabet.format(w));
        }
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?).map_err(io)?;
    } else {
        for r in &runs {
            let shown = if r.word.is_empty() { "ε" } else { r.word.as_str() };
            writeln!(out, "{shown}\tp_acc={:.10}\tp_rej={:.10}\tresidual={:.3e}", r.p_acc, r.p_rej, r.residual)
                .map_err(io)?;
        }
        if let Some((m, w)) = &worst {
            writeln!(out, "margin {m:.10} over {} words (worst {})", words.len(), alphabet.display(w)).map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_decompose(
    file: &PathBuf,
    words: &[String],
    eps: f64,
    tol: f64,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32> {
    let spec = load_valid(file)?;
    let gens: Vec<Word> = words.iter().map(|w| spec.alphabet.parse(w)).collect::<Result<_>>()?;
    if gens.iter().any(|w| w.is_empty()) {
        return Err(Error::InvalidParameter("generator words must be nonempty".into()));
    }
    let pair = decompose(&spec, &gens, tol)?;
    let max_len = 50 * spec.dim();
    let mut escapes = Vec::new();
    for v in pair.e2.vectors() {
        escapes.push(escape_word(&spec, &gens, v, eps, max_len)?);
    }

    if json {
        let escapes: Vec<_> = escapes
            .iter()
            .map(|e| {
                e.as_ref().map(|e| json!({ "word": spec.alphabet.format(&e.word), "residual_norm": e.residual_norm }))
            })
            .collect();
        let v = json!({
            "dim_e1": pair.e1.len(),
            "dim_e2": pair.e2.len(),
            "ambient_dim": pair.ambient_dim,
            "borderline": pair.borderline,
            "e1": pair.e1.vectors().iter().map(pairs).collect::<Vec<_>>(),
            "e2": pair.e2.vectors().iter().map(pairs).collect::<Vec<_>>(),
            "escapes": escapes,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?).map_err(io)?;
        return Ok(EXIT_OK);
    }

    let fmt_vec = |v: &CVector| {
        let cells: Vec<String> = v
            .entries()
            .iter()
            .zip(&spec.states)
            .filter(|(c, _)| c.norm() > 1e-12)
            .map(|(c, s)| {
                if c.im.abs() > 1e-12 {
                    format!("({:.6}{:+.6}i)|{s}>", c.re, c.im)
                } else {
                    format!("{:.6}|{s}>", c.re)
                }
            })
            .collect();
        cells.join(" + ")
    };
    writeln!(out, "dim E1 = {}, dim E2 = {} (non-halting dim {})", pair.e1.len(), pair.e2.len(), pair.ambient_dim)
        .map_err(io)?;
    if pair.borderline {
        writeln!(out, "warning: some direction is borderline at tol {tol:e}").map_err(io)?;
    }
    for (i, v) in pair.e1.vectors().iter().enumerate() {
        writeln!(out, "E1[{i}] = {}", fmt_vec(v)).map_err(io)?;
    }
    for (i, (v, e)) in pair.e2.vectors().iter().zip(&escapes).enumerate() {
        writeln!(out, "E2[{i}] = {}", fmt_vec(v)).map_err(io)?;
        match e {
            Some(e) => writeln!(
                out,
                "  escape {} (norm {:.3e})",
                spec.alphabet.display(&e.word),
                e.residual_norm
            ),
            None => writeln!(out, "  no escape word within {max_len} letters"),
        }
        .map_err(io)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_bound(file: &PathBuf, kmax: usize, json: bool, out: &mut dyn Write) -> Result<i32> {
    let dfa = DfaSpec::load(file)?;
    let report = analyze(&dfa, kmax)?;
    if json {
        writeln!(out, "{}", report.to_json()).map_err(io)?;
        return Ok(EXIT_OK);
    }
    let m = &report.minimal;
    writeln!(out, "minimal DFA: {} states", m.len()).map_err(io)?;
    for w in &report.witnesses {
        let states: Vec<&str> = w.states.iter().map(|&q| m.state_name(q)).collect();
        let words: Vec<String> = w.words.iter().map(|x| m.alphabet().display(x).to_string()).collect();
        writeln!(out, "  {} states [{}] words [{}]", w.kind, states.join(", "), words.join(", ")).map_err(io)?;
    }
    writeln!(out, "bound {:.7}", report.bound).map_err(io)?;
    writeln!(out, "rfa_recognizable {}", report.rfa_recognizable).map_err(io)?;
    writeln!(out, "qfa_recognizable {}", report.qfa_recognizable).map_err(io)?;
    for n in &report.notes {
        writeln!(out, "note: {n}").map_err(io)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_optimize(problem: u8, dim: usize, restarts: usize, seed: u64, json: bool, out: &mut dyn Write) -> Result<i32> {
    let (text, p, residual, numeric) = match problem {
        1 => {
            let r = solve_problem1()?;
            (r.to_json(), r.p, r.residual, r.numeric)
        }
        2 => {
            let r = solve_problem2(dim, restarts, seed)?;
            (r.to_json(), r.p, r.residual, r.numeric)
        }
        3 => {
            let r = solve_problem3()?;
            (r.to_json(), r.p, r.residual, r.numeric)
        }
        other => return Err(Error::InvalidParameter(format!("no problem {other}"))),
    };
    if json {
        writeln!(out, "{text}").map_err(io)?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "p = {p:.10}").map_err(io)?;
    writeln!(out, "residual = {residual:.3e}").map_err(io)?;
    if let Some(n) = numeric {
        writeln!(out, "closed form {p:.12} vs numeric {n:.12} (diff {:.1e})", (p - n).abs()).map_err(io)?;
    }
    let witness: serde_json::Value = serde_json::from_str(&text)?;
    writeln!(out, "witness = {}", witness["witness"]).map_err(io)?;
    Ok(EXIT_OK)
}

pub fn cmd_reproduce(opts: &ReproduceOptions, json: bool, out: &mut dyn Write) -> Result<i32> {
    let r = reproduce(opts)?;
    if json {
        writeln!(out, "{}", r.to_json()).map_err(io)?;
    } else {
        write!(out, "{}", r.table()).map_err(io)?;
    }
    Ok(if r.all_pass() { EXIT_OK } else { EXIT_MISMATCH })
}

pub fn cmd_validate(file: &PathBuf, json: bool, out: &mut dyn Write) -> Result<i32> {
    let spec = QfaSpec::load(file)?;
    let violations: Vec<String> = spec.validate().iter().map(|v| v.to_string()).collect();
    if json {
        let v = json!({ "valid": violations.is_empty(), "violations": violations });
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?).map_err(io)?;
    } else if violations.is_empty() {
        writeln!(out, "valid: {} states, alphabet {:?}", spec.dim(), spec.alphabet.names()).map_err(io)?;
    } else {
        for v in &violations {
            writeln!(out, "violation: {v}").map_err(io)?;
        }
    }
    Ok(if violations.is_empty() { EXIT_OK } else { EXIT_INPUT })
}
