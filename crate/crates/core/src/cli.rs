//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::catalog;
use crate::error::Error;
use crate::hilb2::{hilb2_h4, H4ClassJson};
use crate::json::ToJson;
use crate::lattice::{discriminant_profile, DEFAULT_GLUE_BOUND};
use crate::pipeline::{all_passed, run_checks, VerificationReport, CHECK_IDS};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "bblab", version, about = "Exact lattice verification for the Hilbert-square quotient")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Md,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run named checks and emit a report.
    Verify {
        /// Comma-separated check ids, or `all`.
        #[arg(long, default_value = "all", value_delimiter = ',')]
        checks: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_GLUE_BOUND)]
        glue_bound: u64,
    },
    /// Inspect catalog lattices.
    Lattice {
        #[command(subcommand)]
        command: LatticeCommand,
    },
    /// Degree-4 cohomology of the Hilbert square.
    H4 {
        #[command(subcommand)]
        command: H4Command,
    },
}

#[derive(Subcommand, Debug)]
pub enum LatticeCommand {
    Show {
        name: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassName {
    Delta2,
    Sigma,
}

#[derive(Subcommand, Debug)]
pub enum H4Command {
    Gram {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Class { name: ClassName },
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run_from<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    match run(cli.command, stdout) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Failed(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_FAIL
        }
    }
}

enum CliError {
    Usage(String),
    Failed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

fn emit(text: &str, out: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json_string(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn run(cmd: Command, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Verify {
            checks,
            format,
            out,
            glue_bound,
        } => {
            let ids: Vec<String> = if checks.iter().any(|c| c == "all") {
                Vec::new()
            } else {
                checks
            };
            if let Some(bad) = ids.iter().find(|i| !CHECK_IDS.contains(&i.as_str())) {
                return Err(CliError::Usage(format!(
                    "unknown check id `{bad}`; known ids: {}",
                    CHECK_IDS.join(", ")
                )));
            }
            let reports = run_checks(&ids, glue_bound)?;
            let text = match format {
                Format::Json => to_json_string(&reports),
                Format::Md => markdown_report(&reports),
            };
            emit(&text, out.as_ref(), stdout)?;
            Ok(if all_passed(&reports) { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Lattice {
            command: LatticeCommand::Show { name, format },
        } => {
            let l = catalog::by_name(&name).map_err(|e| CliError::Usage(e.to_string()))?;
            let text = match format {
                Format::Json => {
                    let p = discriminant_profile(&l)?;
                    let mut v = json!({
                        "label": l.label(),
                        "rank": l.rank(),
                        "gram": l.gram().to_json(),
                        "det": l.det().to_json(),
                        "signature": l.signature(),
                        "even": l.is_even(),
                        "invariant_factors": p.invariant_factors.to_json(),
                    });
                    if name == "Nikulin" {
                        let gens: Vec<Vec<String>> = catalog::nikulin_generators()
                            .iter()
                            .map(|g| g.iter().map(ToString::to_string).collect())
                            .collect();
                        v["presentation"] = json!({
                            "base": catalog::nikulin_base().gram().to_json(),
                            "generators": gens,
                            "glue": [vec!["1/2"; 8]],
                        });
                    }
                    to_json_string(&v)
                }
                Format::Md => {
                    let mut s = format!("# {}\n\nrank {}, det {}\n\n", l.label(), l.rank(), l.det());
                    for row in l.gram().to_rows() {
                        let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
                        s.push_str(&format!("| {} |\n", cells.join(" | ")));
                    }
                    s
                }
            };
            emit(&text, None, stdout)?;
            Ok(EXIT_PASS)
        }
        Command::H4 { command } => {
            let h = hilb2_h4()?;
            match command {
                H4Command::Gram { out } => {
                    let v = json!({
                        "basis": h.model().basis().elements().iter().map(|q| q.label()).collect::<Vec<_>>(),
                        "gram": h.gram().to_json(),
                    });
                    emit(&to_json_string(&v), out.as_ref(), stdout)?;
                }
                H4Command::Class { name } => {
                    let j = match name {
                        ClassName::Delta2 => H4ClassJson::new("delta2", h, h.delta_squared()),
                        ClassName::Sigma => H4ClassJson::new("sigma", h, h.sigma()),
                    };
                    emit(&to_json_string(&j), None, stdout)?;
                }
            }
            Ok(EXIT_PASS)
        }
    }
}

fn cell(v: &serde_json::Value) -> String {
    let s = v.to_string();
    let s = if s.chars().count() > 80 {
        format!("{}…", s.chars().take(77).collect::<String>())
    } else {
        s
    };
    s.replace('|', "\\|")
}

pub fn markdown_report(reports: &[VerificationReport]) -> String {
    let mut s = String::from("| check | anchor | provenance | expected | actual | status |\n");
    s.push_str("|---|---|---|---|---|---|\n");
    for r in reports {
        let prov = serde_json::to_value(r.provenance).expect("serializable");
        let status = serde_json::to_value(r.status).expect("serializable");
        s.push_str(&format!(
            "| {} | {} | {} | `{}` | `{}` | {} |\n",
            r.check,
            r.anchor.replace('|', "\\|"),
            prov.as_str().unwrap_or_default(),
            cell(&r.expected),
            cell(&r.actual),
            status.as_str().unwrap_or_default(),
        ));
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    s.push_str(&format!("\n{passed}/{} passed\n", reports.len()));
    s
}
