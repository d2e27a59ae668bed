//! Batch front-end: parse signal/system files, run operators and reports,
//! execute the randomized law suite, emit deterministic text or JSON.
//!
//! Exit codes: 0 success, 1 law-suite failure, 2 file parse error,
//! 3 dimension mismatch, 4 no induced system, 5 other domain error,
//! 64 usage error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};

use pseudosys::error::Error;
use pseudosys::laws::{run_identity_suite, run_transfer_suite, LawOutcome};
use pseudosys::properties::{boundary_report, state_function, Side};
use pseudosys::text::{
    boundary_report_to_json, format_signal, format_system, parse_signal_file, parse_system_file,
    state_function_to_json, NamedSignal,
};
use pseudosys::{DelayParams, PseudoSystem, Signal, Time};

/// Environment variable capping the law suite's wall time, in milliseconds.
const LAWS_TIME_CAP_ENV: &str = "PSEUDOSYS_LAWS_TIME_CAP_MS";

#[derive(Parser)]
#[command(name = "pseudosys", version, about = "Exact algebra of asynchronous pseudo-systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Initial,
    Final,
    Both,
}

impl SideArg {
    fn sides(self) -> Vec<Side> {
        match self {
            SideArg::Initial => vec![Side::Initial],
            SideArg::Final => vec![Side::Final],
            SideArg::Both => vec![Side::Initial, Side::Final],
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a system file into boundary reports.
    Classify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        side: SideArg,
        #[arg(long)]
        json: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute the initial/final state functions of a system file.
    #[command(name = "state-fn")]
    StateFn {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        side: SideArg,
        #[arg(long)]
        json: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Apply an operator to one or two system files and emit the canonical result.
    Op {
        /// dual | inverse | complement | induced | product | parallel |
        /// intersect | union | serial (serial: first file outer, second inner)
        name: String,
        a: PathBuf,
        b: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact membership test for the bounded delay.
    Delay {
        /// Signal file defining the named signals.
        file: PathBuf,
        #[arg(long)]
        d: String,
        /// Name of the input signal.
        #[arg(long)]
        input: String,
        /// Name of the candidate state signal.
        #[arg(long)]
        state: String,
    },
    /// Build a finite snapshot of the bounded-delay relation.
    Snapshot {
        /// Signal file; every signal is an input unless --inputs selects some.
        file: PathBuf,
        #[arg(long)]
        d: String,
        /// Comma-separated shifts in (0, d].
        #[arg(long)]
        taus: String,
        /// Comma-separated input names (default: all signals in the file).
        #[arg(long)]
        inputs: Option<String>,
        /// Comma-separated names of extra candidate states.
        #[arg(long)]
        extras: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the randomized law suite.
    Laws {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        iters: u64,
        #[arg(long, default_value_t = 200)]
        transfer_iters: u64,
        #[arg(long)]
        json: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Canonicalize signal/system files in place.
    Fmt { files: Vec<PathBuf> },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help/version are not usage errors.
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(64),
            };
        }
    };
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse { .. } | Error::UnknownSignal { .. } => 2,
                Error::DimensionMismatch { .. } => 3,
                Error::NoInducedSystem => 4,
                _ => 5,
            })
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        col: 0,
        msg: format!("cannot read {}: {e}", path.display()),
    })
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Error> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Error::Parse {
            line: 0,
            col: 0,
            msg: format!("cannot write {}: {e}", p.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_rational(s: &str, what: &str) -> Result<Time, Error> {
    s.parse().map_err(|e: String| Error::Parse {
        line: 0,
        col: 0,
        msg: format!("invalid {what} `{s}`: {e}"),
    })
}

fn lookup<'a>(sigs: &'a [NamedSignal], name: &str) -> Result<&'a Signal, Error> {
    sigs.iter()
        .find(|ns| ns.name == name)
        .map(|ns| &ns.signal)
        .ok_or_else(|| Error::UnknownSignal {
            name: name.to_string(),
        })
}

fn run(cmd: Cmd) -> Result<ExitCode, Error> {
    match cmd {
        Cmd::Classify {
            file,
            side,
            json,
            output,
        } => {
            let doc = parse_system_file(&read(&file)?)?;
            let mut text = String::new();
            let mut vals = Vec::new();
            for s in side.sides() {
                let r = boundary_report(&doc.system, s);
                if json {
                    vals.push(boundary_report_to_json(&r));
                } else {
                    render_report(&mut text, &doc.system, &r);
                }
            }
            if json {
                text = serde_json::to_string_pretty(&serde_json::json!({
                    "system": doc.name,
                    "reports": vals,
                }))
                .unwrap();
                text.push('\n');
            } else {
                text = format!("system {}\n{}", doc.name, text);
            }
            emit(output.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::StateFn {
            file,
            side,
            json,
            output,
        } => {
            let doc = parse_system_file(&read(&file)?)?;
            let mut text = String::new();
            let mut vals = Vec::new();
            for s in side.sides() {
                let r = state_function(&doc.system, s)?;
                if json {
                    vals.push(state_function_to_json(&r));
                } else {
                    render_state_function(&mut text, &doc.system, &r);
                }
            }
            if json {
                text = serde_json::to_string_pretty(&serde_json::json!({
                    "system": doc.name,
                    "reports": vals,
                }))
                .unwrap();
                text.push('\n');
            } else {
                text = format!("system {}\n{}", doc.name, text);
            }
            emit(output.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Op { name, a, b, output } => {
            let da = parse_system_file(&read(&a)?)?;
            let need_b = || -> Result<PseudoSystem, Error> {
                let p = b.as_ref().ok_or_else(|| Error::Parse {
                    line: 0,
                    col: 0,
                    msg: format!("operator `{name}` needs two system files"),
                })?;
                Ok(parse_system_file(&read(p)?)?.system)
            };
            let result = match name.as_str() {
                "dual" => da.system.dual(),
                "inverse" => da.system.inverse(),
                "complement" => da.system.complement(),
                "induced" => da.system.induced_system()?,
                "product" => da.system.product(&need_b()?),
                "parallel" => da.system.parallel(&need_b()?)?,
                "intersect" => da.system.intersect(&need_b()?)?,
                "union" => da.system.union(&need_b()?)?,
                "serial" => PseudoSystem::serial(&da.system, &need_b()?)?,
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        col: 0,
                        msg: format!("unknown operator `{other}`"),
                    })
                }
            };
            emit(output.as_deref(), &format_system(&name, &result))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Delay {
            file,
            d,
            input,
            state,
        } => {
            let sigs = parse_signal_file(&read(&file)?)?;
            let p = DelayParams::new(parse_rational(&d, "width")?)?;
            let member =
                pseudosys::delay::delay_membership(lookup(&sigs, &input)?, lookup(&sigs, &state)?, p)?;
            println!("member {member}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Snapshot {
            file,
            d,
            taus,
            inputs,
            extras,
            output,
        } => {
            let sigs = parse_signal_file(&read(&file)?)?;
            let p = DelayParams::new(parse_rational(&d, "width")?)?;
            let taus: Vec<Time> = taus
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|s| parse_rational(s, "shift"))
                .collect::<Result<_, _>>()?;
            let ins: Vec<Signal> = match &inputs {
                Some(names) => names
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|n| lookup(&sigs, n).cloned())
                    .collect::<Result<_, _>>()?,
                None => sigs.iter().map(|ns| ns.signal.clone()).collect(),
            };
            let extras: Vec<Signal> = match &extras {
                Some(names) => names
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|n| lookup(&sigs, n).cloned())
                    .collect::<Result<_, _>>()?,
                None => Vec::new(),
            };
            let snap = pseudosys::delay::delay_snapshot(&ins, p, &taus, &extras)?;
            emit(output.as_deref(), &format_system("snapshot", &snap))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Laws {
            seed,
            iters,
            transfer_iters,
            json,
            output,
        } => {
            let deadline = std::env::var(LAWS_TIME_CAP_ENV)
                .ok()
                .and_then(|v| v.parse::<u64>().ok())
                .map(|ms| Instant::now() + Duration::from_millis(ms));
            let identity = run_identity_suite(seed, iters, deadline);
            let transfer = if identity.passed() {
                run_transfer_suite(seed, transfer_iters, deadline)
            } else {
                LawOutcome::default()
            };
            let ok = identity.passed() && transfer.passed();
            let text = if json {
                let v = serde_json::json!({
                    "seed": seed,
                    "identity": outcome_json(&identity),
                    "transfer": outcome_json(&transfer),
                    "result": if ok { "pass" } else { "fail" },
                });
                let mut s = serde_json::to_string_pretty(&v).unwrap();
                s.push('\n');
                s
            } else {
                let mut s = format!("seed {seed}\n");
                render_outcome(&mut s, "identity", &identity);
                render_outcome(&mut s, "transfer", &transfer);
                let _ = writeln!(s, "result {}", if ok { "pass" } else { "fail" });
                s
            };
            emit(output.as_deref(), &text)?;
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Fmt { files } => {
            for path in &files {
                let src = read(path)?;
                let is_system = src
                    .lines()
                    .any(|l| l.trim_start().starts_with("system "));
                let text = if is_system {
                    let doc = parse_system_file(&src)?;
                    format_system(&doc.name, &doc.system)
                } else {
                    let sigs = parse_signal_file(&src)?;
                    let mut out = String::new();
                    for (i, ns) in sigs.iter().enumerate() {
                        if i > 0 {
                            out.push('\n');
                        }
                        out.push_str(&format_signal(&ns.name, &ns.signal));
                    }
                    out
                };
                emit(Some(path), &text)?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn input_name(f: &PseudoSystem, u: &Signal) -> String {
    match f.input_index(u) {
        Some(i) => format!("u{i}"),
        None => "?".to_string(),
    }
}

fn render_report(
    out: &mut String,
    f: &PseudoSystem,
    r: &pseudosys::properties::BoundaryReport,
) {
    let side = match r.side {
        Side::Initial => "initial",
        Side::Final => "final",
    };
    let _ = writeln!(out, "side {side}");
    let _ = writeln!(out, "  state_level {:?}", r.state_level);
    let _ = writeln!(
        out,
        "  constant_value {}",
        r.constant_value
            .as_ref()
            .map(|v| v.to_string())
            .unwrap_or_else(|| "-".into())
    );
    let _ = writeln!(out, "  time_level {:?}", r.time_level);
    let _ = writeln!(
        out,
        "  cell {}",
        r.cell.map(|c| format!("{c:?}").to_lowercase()).unwrap_or_else(|| "-".into())
    );
    let _ = writeln!(out, "  vacuous {}", r.vacuous);
    let _ = writeln!(out, "  boundary_exclusive {}", r.boundary_exclusive);
    let _ = writeln!(
        out,
        "  global_instant {}",
        r.global_instant
            .map(|t| t.to_string())
            .unwrap_or_else(|| "-".into())
    );
    for e in &r.per_input {
        let vals: Vec<String> = e.values.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(
            out,
            "  input {}: values [{}] instant {}",
            input_name(f, &e.input),
            vals.join(" "),
            e.extremal_instant
                .map(|t| t.to_string())
                .unwrap_or_else(|| "-".into())
        );
    }
}

fn render_state_function(
    out: &mut String,
    f: &PseudoSystem,
    r: &pseudosys::properties::StateFunctionReport,
) {
    let side = match r.side {
        Side::Initial => "initial",
        Side::Final => "final",
    };
    let _ = writeln!(out, "side {side}");
    for (u, set) in &r.phi {
        let vals: Vec<String> = set.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "  phi {} [{}]", input_name(f, u), vals.join(" "));
    }
    let vals: Vec<String> = r.theta.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(out, "  theta [{}]", vals.join(" "));
}

fn render_outcome(out: &mut String, label: &str, o: &LawOutcome) {
    let _ = writeln!(out, "{label} iterations {}", o.iterations);
    for (law, n) in &o.counters {
        let _ = writeln!(out, "{label} {law} {n}");
    }
    if let Some(f) = &o.failure {
        let _ = writeln!(
            out,
            "{label} FAILURE {} at iteration {}\n{}",
            f.law, f.iteration, f.detail
        );
    }
}

fn outcome_json(o: &LawOutcome) -> serde_json::Value {
    serde_json::json!({
        "iterations": o.iterations,
        "counters": o.counters.iter().map(|(k, v)| (k.to_string(), *v))
            .collect::<std::collections::BTreeMap<String, u64>>(),
        "failure": o.failure.as_ref().map(|f| serde_json::json!({
            "law": f.law,
            "iteration": f.iteration,
            "detail": f.detail,
        })),
    })
}
