//! `ambients`: command-line front end for the workbench.
//!
//! Exit status: 0 on success, 1 on parse or input errors, and the
//! `--unknown-exit` code (default 2) when a verdict is unknown.

use std::fs;
use std::process::ExitCode;

use ambients::congruence::{canonicalize, eta_congruent};
use ambients::equivalence::{bisim_explained, logical_equiv, BisimConfig};
use ambients::logic::{distinguish, parse_formula, satisfies_with, GuaranteePolicy, SatConfig};
use ambients::semantics::{barbs, reduce_once, reduce_star, trace, Fuel, Verdict};
use ambients::syntax::{classify, parse_process, Mode, Process};
use ambients::turing::{
    loop_search, parse_word, verify_macro_steps_with, Digit, Encoder, Macro, TmConfig,
    TuringMachine,
};
use ambients::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "ambients",
    version,
    about = "Mobile Ambients and Ambient Logic workbench"
)]
struct Cli {
    /// Synchronous communication (messages carry continuations).
    #[arg(long, global = true)]
    sync: bool,
    /// Maximum number of distinct states per exploration.
    #[arg(long, global = true, default_value_t = 100_000)]
    max_states: usize,
    /// Maximum reduction depth per exploration.
    #[arg(long, global = true, default_value_t = 64)]
    max_depth: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Exit status used for unknown verdicts.
    #[arg(long, global = true, default_value_t = 2)]
    unknown_exit: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// One JSON object per line.
    Records,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Eta congruence (structural congruence under --sync).
    Eta,
    /// Fueled intensional bisimilarity.
    Bisim,
    /// Eta congruence on the image-finite fragment, bisimilarity elsewhere.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Form {
    /// Starting machine `TMStart`.
    Start,
    /// `WorkRibb(w1, w2)[TM(q)]`, see `--config`.
    Config,
    /// `P0` of the loop construction.
    Loop,
    /// The machine soup alone.
    Soup,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a process and print it with its classification.
    Parse { process: String },
    /// Print the structural congruence normal form.
    Norm { process: String },
    /// One-step reducts, or all reachable states with --star.
    Reduce {
        process: String,
        #[arg(long)]
        star: bool,
    },
    /// One maximal run taking the first reduct at each step.
    Trace {
        process: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Weak barbs.
    Barbs { process: String },
    /// Decide equivalence of two processes.
    Equiv {
        left: String,
        right: String,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Print the clause trace behind a bisimilarity verdict.
        #[arg(long)]
        explain: bool,
    },
    /// Model-check a formula.
    Check {
        process: String,
        formula: String,
        /// Witness process for the guarantee connective (repeatable).
        #[arg(long)]
        witness: Vec<String>,
    },
    /// A formula satisfied by the first process and not by the second.
    Distinguish { left: String, right: String },
    /// Print a term of the Turing machine encoding.
    EncodeTm {
        machine: String,
        word: String,
        #[arg(long, value_enum, default_value_t = Form::Start)]
        form: Form,
        /// Configuration `w1,q,w2` for --form config.
        #[arg(long)]
        config: Option<String>,
    },
    /// Search the loop P1 => P0 of the loop lemma.
    LoopCheck { machine: String, word: String },
    /// Step counts of the state evolution lemma.
    VerifyMacros {
        #[arg(long, default_value = "f")]
        digit: String,
        #[arg(long, default_value = "t")]
        other: String,
        #[arg(long, default_value = "f")]
        word: String,
        /// Machine whose soup fills `TM[..]`; the immediate-accept machine by default.
        #[arg(long)]
        machine: Option<String>,
    },
}

/// `@path` reads a file, anything else is inline text.
fn read_input(arg: &str) -> Result<String, String> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}")),
        None => Ok(arg.to_string()),
    }
}

/// Machines come from `@file`, a path, or inline text with `;` for newlines.
fn read_machine(arg: &str) -> Result<String, String> {
    if arg.starts_with('@') {
        return read_input(arg);
    }
    if !arg.contains(':') {
        if let Ok(text) = fs::read_to_string(arg) {
            return Ok(text);
        }
    }
    Ok(arg.replace(';', "\n"))
}

struct Out {
    format: Format,
    command: &'static str,
    unknown: bool,
}

impl Out {
    fn line(&self, text: impl AsRef<str>, record: Value) {
        match self.format {
            Format::Text => println!("{}", text.as_ref()),
            Format::Records => {
                let mut r = record;
                if let Value::Object(m) = &mut r {
                    m.insert("command".into(), json!(self.command));
                }
                println!("{r}");
            }
        }
    }

    fn verdict(&mut self, v: &Verdict) {
        self.unknown |= v.is_unknown();
        self.line(v.to_string(), json!({ "verdict": v.to_string() }));
    }
}

enum Failure {
    Input(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Engine(e)
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Failure {
        Failure::Input(e)
    }
}

struct Ctx {
    mode: Mode,
    fuel: Fuel,
}

impl Ctx {
    fn process(&self, arg: &str) -> Result<Process, Failure> {
        Ok(parse_process(&read_input(arg)?, self.mode)?)
    }

    fn bisim_config(&self) -> BisimConfig {
        BisimConfig {
            fuel: self.fuel,
            mode: self.mode,
            fresh_seed: 0,
        }
    }
}

fn digit(s: &str) -> Result<Digit, Failure> {
    match parse_word(s)?.as_slice() {
        [d] => Ok(*d),
        _ => Err(Failure::Input(format!("'{s}' is not a single digit"))),
    }
}

fn parse_config(s: &str) -> Result<TmConfig, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [l, q, r] = parts.as_slice() else {
        return Err(Failure::Input(format!(
            "configuration '{s}' must be w1,q,w2"
        )));
    };
    Ok(TmConfig {
        left: parse_word(l)?,
        state: q.to_string(),
        right: parse_word(r)?,
    })
}

fn run(cli: &Cli, out: &mut Out) -> Result<(), Failure> {
    let ctx = Ctx {
        mode: if cli.sync { Mode::Sync } else { Mode::Async },
        fuel: Fuel::new(cli.max_states, cli.max_depth),
    };
    match &cli.command {
        Command::Parse { process } => {
            let p = ctx.process(process)?;
            let c = classify(&p);
            out.line(
                format!(
                    "{p}\nclosed: {} finite: {} single: {} maifs: {}",
                    c.is_closed, c.is_finite, c.is_single, c.is_maifs
                ),
                json!({ "process": p.to_string(), "closed": c.is_closed, "finite": c.is_finite,
                        "single": c.is_single, "maifs": c.is_maifs }),
            );
        }
        Command::Norm { process } => {
            let c = canonicalize(&ctx.process(process)?);
            out.line(c.to_string(), json!({ "normal_form": c.to_string() }));
        }
        Command::Reduce { process, star } => {
            let p = ctx.process(process)?;
            if *star {
                let (states, complete) = reduce_star(&p, ctx.fuel)?;
                for s in &states {
                    out.line(s.to_string(), json!({ "state": s.to_string() }));
                }
                if !complete {
                    out.verdict(&Verdict::Unknown("exploration cut by fuel".into()));
                }
            } else {
                for s in reduce_once(&p)? {
                    out.line(s.to_string(), json!({ "reduct": s.to_string() }));
                }
            }
        }
        Command::Trace { process, steps } => {
            let p = ctx.process(process)?;
            for (i, (rule, q)) in trace(&p, *steps)?.into_iter().enumerate() {
                out.line(
                    format!("{} {}: {q}", i + 1, rule.name()),
                    json!({ "step": i + 1, "rule": rule.name(), "process": q.to_string() }),
                );
            }
        }
        Command::Barbs { process } => {
            let (names, complete) = barbs(&ctx.process(process)?, ctx.fuel)?;
            let list: Vec<String> = names.iter().map(|n| n.to_string()).collect();
            out.line(
                list.join(" "),
                json!({ "barbs": list, "complete": complete }),
            );
            if !complete {
                out.verdict(&Verdict::Unknown("barb search cut by fuel".into()));
            }
        }
        Command::Equiv {
            left,
            right,
            method,
            explain,
        } => {
            let (p, q) = (ctx.process(left)?, ctx.process(right)?);
            let cfg = ctx.bisim_config();
            let (v, lines) = match method {
                Method::Eta if cli.sync => (
                    Verdict::from_bool(canonicalize(&p) == canonicalize(&q)),
                    Vec::new(),
                ),
                Method::Eta => (Verdict::from_bool(eta_congruent(&p, &q)), Vec::new()),
                Method::Bisim => bisim_explained(&p, &q, &cfg, *explain)?,
                Method::Auto if *explain => bisim_explained(&p, &q, &cfg, true)?,
                Method::Auto => (logical_equiv(&p, &q, &cfg)?, Vec::new()),
            };
            out.verdict(&v);
            for l in lines {
                out.line(format!("  {l}"), json!({ "clause": l }));
            }
        }
        Command::Check {
            process,
            formula,
            witness,
        } => {
            let p = ctx.process(process)?;
            let f = parse_formula(&read_input(formula)?)?;
            let witnesses = witness
                .iter()
                .map(|w| ctx.process(w))
                .collect::<Result<Vec<_>, _>>()?;
            let cfg = SatConfig {
                fuel: ctx.fuel,
                policy: GuaranteePolicy {
                    witnesses,
                    ..GuaranteePolicy::default()
                },
                mode: Some(ctx.mode),
            };
            out.verdict(&satisfies_with(&p, &f, &cfg)?);
        }
        Command::Distinguish { left, right } => {
            match distinguish(&ctx.process(left)?, &ctx.process(right)?)? {
                Some(f) => out.line(f.to_string(), json!({ "formula": f.to_string() })),
                None => out.line("bisimilar", json!({ "formula": Value::Null })),
            }
        }
        Command::EncodeTm {
            machine,
            word,
            form,
            config,
        } => {
            let m = TuringMachine::parse(&read_machine(machine)?)?;
            let w = parse_word(word)?;
            let enc = Encoder::new(&m, w.len())?;
            let p = match form {
                Form::Start => enc.encode(&Macro::TmStart)?,
                Form::Soup => enc.encode(&Macro::TmSoup)?,
                Form::Config => {
                    let text = config.as_deref().ok_or_else(|| {
                        Failure::Input("--form config needs --config w1,q,w2".into())
                    })?;
                    enc.configuration(&parse_config(text)?)?
                }
                Form::Loop => Process::par(
                    enc.loop_context(&w)?,
                    enc.encode(&Macro::GrowingRibb(w.clone()))?,
                ),
            };
            out.line(p.to_string(), json!({ "process": p.to_string() }));
        }
        Command::LoopCheck { machine, word } => {
            let m = TuringMachine::parse(&read_machine(machine)?)?;
            let w = parse_word(word)?;
            let r = loop_search(&m, &w, ctx.fuel)?;
            let v = r.verdict();
            out.verdict(&v);
            if let (Verdict::True, Some(fw), Some(bw)) = (&v, r.forward.found, r.backward.found) {
                out.line(
                    format!("P0 => P1 in {fw} steps, P1 => P0 in {bw} steps ({} states)", r.backward.states),
                    json!({ "forward_steps": fw, "backward_steps": bw, "states": r.backward.states }),
                );
            }
        }
        Command::VerifyMacros {
            digit: d,
            other,
            word,
            machine,
        } => {
            let m = match machine {
                Some(text) => TuringMachine::parse(&read_machine(text)?)?,
                None => ambients::turing::immediate_accept_machine(),
            };
            let steps = verify_macro_steps_with(&m, digit(d)?, digit(other)?, &parse_word(word)?)?;
            for s in steps {
                let got = s.steps.map_or("none".to_string(), |k| k.to_string());
                out.line(
                    format!("{}: {got} (expected {}){}", s.name, s.expected, if s.strict { "" } else { " non-strict" }),
                    json!({ "macro": s.name, "steps": s.steps, "expected": s.expected, "strict": s.strict, "confluent": s.confluent }),
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match &cli.command {
        Command::Parse { .. } => "parse",
        Command::Norm { .. } => "norm",
        Command::Reduce { .. } => "reduce",
        Command::Trace { .. } => "trace",
        Command::Barbs { .. } => "barbs",
        Command::Equiv { .. } => "equiv",
        Command::Check { .. } => "check",
        Command::Distinguish { .. } => "distinguish",
        Command::EncodeTm { .. } => "encode-tm",
        Command::LoopCheck { .. } => "loop-check",
        Command::VerifyMacros { .. } => "verify-macros",
    };
    let mut out = Out {
        format: cli.format,
        command,
        unknown: false,
    };
    match run(&cli, &mut out) {
        Ok(()) if out.unknown => ExitCode::from(cli.unknown_exit),
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
