//! Command dispatch for the `biamalg` binary, kept in the library so it can
//! be driven in-process.
//!
//! Exit codes: 0 everything passes or agrees, 1 a property is false,
//! 2 a theorem verdict disagrees, 3 the script does not parse, 4 anything
//! else that prevents a verdict (invalid data, caps, bad arguments).

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::harness::{verify, HarnessOptions, TheoremId, TheoremVerdict};
use crate::ideal::maximal_ideals;
use crate::instances::{fuzz, InstanceGenConfig};
use crate::properties::{check_property, Property};
use crate::report::{format_property, format_report, record_line, verdict_line, Format};
use crate::ring::{ring_axioms_check, Caps};
use crate::script::{eval_script_with_caps, parse_script, Env, ScriptError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_DISAGREE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_INVALID: i32 = 4;

/// Environment variables holding default caps; flags take precedence.
pub const ENV_MAX_RING_SIZE: &str = "BIAMALG_MAX_RING_SIZE";
pub const ENV_MAX_IDEAL_ENUM: &str = "BIAMALG_MAX_IDEAL_ENUM";

#[derive(Parser, Debug)]
#[command(name = "biamalg", version, about = "Check ring properties and transfer theorems on finite bi-amalgamations")]
struct Cli {
    /// Largest ring any construction may produce
    #[arg(long, global = true)]
    max_ring_size: Option<usize>,
    /// Largest ring whose ideal lattice may be enumerated
    #[arg(long, global = true)]
    max_ideal_enum: Option<usize>,
    /// Output format: text or records
    #[arg(long, global = true, default_value = "text")]
    format: Format,
    /// Append run records to this file
    #[arg(long, global = true)]
    log: Option<PathBuf>,
    #[arg(long, global = true, hide = true)]
    mutant: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a property of a ring bound in a script
    Check { property: String, file: PathBuf, name: String },
    /// Evaluate both sides of a theorem on a datum bound in a script
    Verify { theorem: String, file: PathBuf, datum: String },
    /// Check a theorem on generated instances
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long)]
        theorem: String,
    },
    /// List the maximal ideals of a ring
    Spectrum { file: PathBuf, ring: String },
    /// Exhaustively check the ring axioms
    Axioms { file: PathBuf, ring: String },
}

/// What a command printed and how it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Outcome {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: impl Into<String>) -> Outcome {
        Outcome {
            code,
            stdout: String::new(),
            stderr: stderr.into(),
        }
    }
}

fn env_caps() -> Caps {
    let mut caps = Caps::default();
    let read = |key: &str| std::env::var(key).ok().and_then(|v| v.trim().parse::<usize>().ok());
    if let Some(n) = read(ENV_MAX_RING_SIZE) {
        caps.max_ring_size = n;
    }
    if let Some(n) = read(ENV_MAX_IDEAL_ENUM) {
        caps.max_ideal_enum = n;
    }
    caps
}

impl Cli {
    fn override_caps(&self, mut caps: Caps) -> Caps {
        if let Some(n) = self.max_ring_size {
            caps.max_ring_size = n;
        }
        if let Some(n) = self.max_ideal_enum {
            caps.max_ideal_enum = n;
        }
        caps
    }
}

/// Appends records to the run log; each run starts with a header line.
struct RunLog {
    path: Option<PathBuf>,
    lines: Vec<String>,
}

impl RunLog {
    fn new(path: Option<PathBuf>, input: &str, seed: Option<u64>) -> RunLog {
        let time = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let header = record_line(&[
            ("run", time.to_string()),
            ("version", env!("CARGO_PKG_VERSION").to_string()),
            ("input", input.to_string()),
            ("seed", seed.map_or("-".into(), |s| s.to_string())),
        ]);
        RunLog {
            path,
            lines: vec![header],
        }
    }

    fn push(&mut self, line: String) {
        self.lines.push(line);
    }

    fn flush(&self) -> std::io::Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let mut file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
        let mut text = self.lines.join("\n");
        text.push('\n');
        file.write_all(text.as_bytes())
    }
}

fn script_input(path: &Path, text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    format!("{} sha256:{hex}", path.display())
}

fn script_error(e: ScriptError) -> Outcome {
    let code = match e {
        ScriptError::Parse(_) => EXIT_PARSE,
        _ => EXIT_INVALID,
    };
    Outcome::fail(code, format!("error: {e}\n"))
}

/// Run the tool on `argv` (including the program name).
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::fail(EXIT_INVALID, text)
            } else {
                Outcome::ok(EXIT_OK, text)
            };
        }
    };
    let out = dispatch(&cli);
    match out {
        Ok((outcome, log)) => {
            if let Err(e) = log.flush() {
                return Outcome::fail(EXIT_INVALID, format!("error: cannot write log: {e}\n"));
            }
            outcome
        }
        Err(outcome) => outcome,
    }
}

/// Caps: built-in defaults, then the environment, then the script's options
/// line, then flags.
fn load(cli: &Cli, text: &str) -> Result<Env, Outcome> {
    let script = parse_script(text).map_err(|e| script_error(e.into()))?;
    let opts = script.options.clone().unwrap_or_default();
    let caps = cli.override_caps(opts.apply(env_caps()));
    eval_script_with_caps(&script, caps).map_err(script_error)
}

fn read(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path)
        .map_err(|e| Outcome::fail(EXIT_INVALID, format!("error: cannot read {}: {e}\n", path.display())))
}

fn invalid(e: impl std::fmt::Display) -> Outcome {
    Outcome::fail(EXIT_INVALID, format!("error: {e}\n"))
}

fn theorem(name: &str) -> Result<TheoremId, Outcome> {
    name.parse::<TheoremId>().map_err(|_| {
        let known: Vec<&str> = TheoremId::ALL.iter().map(|t| t.name()).collect();
        invalid(format!("unknown theorem `{name}`; known: {}", known.join(", ")))
    })
}

fn verdict_text(verdicts: &[TheoremVerdict], format: Format) -> String {
    let mut out = format_report(verdicts, format);
    if format == Format::Text {
        for v in verdicts {
            for n in &v.notes {
                let _ = writeln!(out, "note: {n}");
            }
        }
    }
    out
}

fn dispatch(cli: &Cli) -> Result<(Outcome, RunLog), Outcome> {
    let base_caps = cli.override_caps(env_caps());
    match &cli.command {
        Command::Check { file, property, name } => {
            let text = read(file)?;
            let property = Property::from_name(property).ok_or_else(|| {
                let known: Vec<&str> = Property::ALL.iter().map(|p| p.name()).collect();
                invalid(format!("unknown property `{property}`; known: {}", known.join(", ")))
            })?;
            let env = load(cli, &text)?;
            let ring = env.ring(name).map_err(invalid)?;
            let report = check_property(ring, property, &env.caps).map_err(invalid)?;
            let mut log = RunLog::new(cli.log.clone(), &script_input(file, &text), env.seed);
            log.push(format_property(name, &report, Format::Records).trim_end().to_string());
            let code = if report.holds { EXIT_OK } else { EXIT_FALSE };
            Ok((Outcome::ok(code, format_property(name, &report, cli.format)), log))
        }
        Command::Verify { theorem: t, file, datum } => {
            let t = theorem(t)?;
            let text = read(file)?;
            let env = load(cli, &text)?;
            let opts = HarnessOptions {
                caps: env.caps,
                mutant: cli.mutant,
            };
            let d = env.datum(datum).map_err(invalid)?;
            let mut v = verify(t, d, &opts).map_err(invalid)?;
            v.seed = env.seed;
            let mut log = RunLog::new(cli.log.clone(), &script_input(file, &text), env.seed);
            log.push(verdict_line(&v));
            let code = if v.agree { EXIT_OK } else { EXIT_DISAGREE };
            Ok((Outcome::ok(code, verdict_text(&[v], cli.format)), log))
        }
        Command::Fuzz { seed, count, theorem: t } => {
            let t = theorem(t)?;
            let cfg = InstanceGenConfig {
                seed: *seed,
                count: *count,
                ..Default::default()
            };
            let opts = HarnessOptions {
                caps: base_caps,
                mutant: cli.mutant,
            };
            let outcome = fuzz(t, &cfg, &opts).map_err(invalid)?;
            let input = format!("fuzz theorem={t} count={count}");
            let mut log = RunLog::new(cli.log.clone(), &input, Some(*seed));
            let mut verdicts = outcome.verdicts.clone();
            let mut trailer = String::new();
            if let Some(cx) = &outcome.counterexample {
                let mut shrunk = cx.shrunk_verdict.clone();
                let w = shrunk.witness_summary();
                shrunk.rhs_witness = Some(format!("shrunk to {} from {}; {w}", cx.shrunk, cx.verdict.fingerprint));
                shrunk.lhs_witness = None;
                verdicts.push(shrunk);
                if cli.format == Format::Text {
                    let _ = writeln!(
                        trailer,
                        "disagreement after {} instances: {} shrunk to {}",
                        cx.examined, cx.original.spec, cx.shrunk
                    );
                }
            }
            for v in &verdicts {
                log.push(verdict_line(v));
            }
            let mut stdout = format_report(&verdicts, cli.format);
            stdout.push_str(&trailer);
            let code = if outcome.counterexample.is_some() { EXIT_DISAGREE } else { EXIT_OK };
            Ok((Outcome::ok(code, stdout), log))
        }
        Command::Spectrum { file, ring } => {
            let text = read(file)?;
            let env = load(cli, &text)?;
            let r = env.ring(ring).map_err(invalid)?;
            let spec = maximal_ideals(r, None).map_err(invalid)?;
            let mut out = String::new();
            let mut log = RunLog::new(cli.log.clone(), &script_input(file, &text), env.seed);
            match cli.format {
                Format::Text => {
                    let _ = writeln!(out, "ring {ring}: {} elements, {}", r.size(), r.describe());
                    let _ = writeln!(out, "nilradical: {}", spec.nilradical);
                    for (k, m) in spec.maximals.iter().enumerate() {
                        let _ = writeln!(out, "maximal {}: {m}", k + 1);
                    }
                }
                Format::Records => {
                    for m in &spec.maximals {
                        let _ = writeln!(out, "{}", record_line(&[("ring", ring.clone()), ("maximal", m.to_string())]));
                    }
                }
            }
            for m in &spec.maximals {
                log.push(record_line(&[("ring", ring.clone()), ("maximal", m.to_string())]));
            }
            Ok((Outcome::ok(EXIT_OK, out), log))
        }
        Command::Axioms { file, ring } => {
            let text = read(file)?;
            let env = load(cli, &text)?;
            let r = env.ring(ring).map_err(invalid)?;
            let rep = ring_axioms_check(r);
            let line = match &rep.violation {
                None => record_line(&[("ring", ring.clone()), ("axioms", "ok".into())]),
                Some(v) => record_line(&[
                    ("ring", ring.clone()),
                    ("axioms", "violated".into()),
                    ("law", v.law.to_string()),
                    ("witness", format!("{:?}", v.witness)),
                ]),
            };
            let mut log = RunLog::new(cli.log.clone(), &script_input(file, &text), env.seed);
            log.push(line.clone());
            let out = match (cli.format, &rep.violation) {
                (Format::Records, _) => format!("{line}\n"),
                (Format::Text, None) => format!("ring {ring}: all axioms hold on {} elements\n", rep.size),
                (Format::Text, Some(v)) => format!("ring {ring}: {} fails at {:?}\n", v.law, v.witness),
            };
            let code = if rep.passed() { EXIT_OK } else { EXIT_FALSE };
            Ok((Outcome::ok(code, out), log))
        }
    }
}
