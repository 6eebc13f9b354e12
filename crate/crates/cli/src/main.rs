use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qosc_core::calculus::BraidChoice;
use qosc_core::error::{CoreError, Result};
use qosc_core::latex::{latex_poly, latex_relation_array, latex_scalar};
use qosc_core::parser::{parse_expr, parse_scalar};
use qosc_core::report::VerificationReport;
use qosc_core::rewrite::{WordOrder, DEFAULT_FUEL};
use qosc_core::rmatrix::PAIRS;
use qosc_core::scalar::{Param, Substitution};
use qosc_core::suites::{
    derive_output, dump_matrix, run_suite, system_by_name, SuiteOptions, SUITE_NAMES, SYSTEM_NAMES,
};

#[derive(Parser)]
#[command(name = "qosc", version, about = "Symbolic checker for a three-parameter deformed coordinate algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Bind a parameter, e.g. q=u^2 or u=3/2. Repeatable.
    #[arg(long, global = true, value_name = "PARAM=VALUE")]
    substitute: Vec<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Rewrite step budget per reduction.
    #[arg(long, global = true)]
    fuel: Option<u64>,

    /// Seed for sampled sweeps and random specializations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Degree ceiling for exhaustive sweeps.
    #[arg(long, global = true)]
    max_degree: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite and report pass/fail per check.
    #[command(after_help = suite_help())]
    Verify {
        suite: String,
        /// Replacement relation file for the exchange fixture check.
        #[arg(long, value_name = "PATH")]
        fixture: Option<std::path::PathBuf>,
    },
    /// Reduce an expression to normal form in a named rewrite system.
    NormalForm {
        expr: String,
        #[arg(long, value_parser = SYSTEM_NAMES)]
        system: String,
    },
    /// Print the relations generated from a braid matrix.
    Derive {
        #[arg(value_parser = ["calculus", "rtt"])]
        kind: String,
        #[arg(long, default_value = "omega", value_parser = ["omega", "omega-inv"])]
        matrix: String,
    },
    /// Print a braid matrix over the pair basis.
    DumpMatrix {
        #[arg(value_parser = ["omega", "omega-inv"])]
        matrix: String,
    },
}

fn suite_help() -> String {
    format!("Suites: {}, all", SUITE_NAMES.join(", "))
}

fn parse_bindings(items: &[String]) -> Result<Substitution> {
    let mut sub = Substitution::new();
    for item in items {
        let (key, value) = item.split_once('=').ok_or_else(|| {
            CoreError::Invalid(format!("binding `{item}` is not of the form param=value"))
        })?;
        let p = match key.trim() {
            "q" => Param::Q,
            "u" => Param::U,
            "s" => Param::S,
            other => return Err(CoreError::UnknownParameter(other.to_string())),
        };
        sub = sub.set(p, parse_scalar(value)?);
    }
    Ok(sub)
}

fn latex_report(report: &VerificationReport) -> String {
    let mut rows = Vec::new();
    for c in &report.checks {
        let witness = c.witness.as_deref().unwrap_or("");
        rows.push(format!(
            "{} & {} & \\texttt{{{}}} \\\\",
            c.name.replace('_', "\\_"),
            c.status,
            witness.replace('_', "\\_")
        ));
    }
    format!(
        "% suite {}: {}\n\\begin{{tabular}}{{lll}}\n{}\n\\end{{tabular}}",
        report.suite,
        report.status,
        rows.join("\n")
    )
}

fn emit_report(report: &VerificationReport, format: Format) {
    let text = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
        Format::Latex => latex_report(report),
    };
    print_tolerant(&text);
}

/// Writes a line and swallows broken pipes so `qosc ... | head` exits
/// cleanly.
fn print_tolerant(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn run_verify(
    suite: &str,
    fixture: Option<&std::path::Path>,
    opt: Result<SuiteOptions>,
    format: Format,
) -> ExitCode {
    let report = (|| -> Result<VerificationReport> {
        let mut opt = opt?;
        if let Some(path) = fixture {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CoreError::Invalid(format!("cannot read fixture `{}`: {e}", path.display()))
            })?;
            opt.fixture = Some(text);
        }
        run_suite(suite, &opt)
    })()
    .unwrap_or_else(|e| VerificationReport::error(suite, e.to_string()));
    emit_report(&report, format);
    ExitCode::from(report.exit_code() as u8)
}

fn run_normal_form(expr: &str, system: &str, opt: &SuiteOptions, format: Format) -> Result<()> {
    let sys = system_by_name(system, opt)?;
    let input = parse_expr(expr, sys.alphabet())?;
    let (nf, trace) = sys.normal_form(&input)?;
    let rendered = nf.display(sys.alphabet()).to_string();
    let text = match format {
        Format::Text => rendered,
        Format::Json => serde_json::to_string_pretty(&serde_json::json!({
            "system": system,
            "input": expr,
            "normal_form": rendered,
            "steps": trace.len(),
        }))
        .expect("report serializes"),
        Format::Latex => latex_poly(&nf, sys.alphabet()),
    };
    print_tolerant(&text);
    Ok(())
}

fn run_derive(kind: &str, matrix: &str, opt: &SuiteOptions, format: Format) -> Result<()> {
    let choice = BraidChoice::from_name(matrix)
        .ok_or_else(|| CoreError::Invalid(format!("unknown matrix `{matrix}`")))?;
    let blocks = derive_output(kind, choice, opt)?;
    let order = if kind == "rtt" {
        WordOrder::DegInvLex
    } else {
        WordOrder::DegLex
    };
    let mut text = String::new();
    match format {
        Format::Text => {
            for (label, alphabet, rels) in &blocks {
                text.push_str(&format!("# {label} ({})\n", choice.name()));
                for rel in rels {
                    text.push_str(&format!("{}\n", rel.display(alphabet)));
                }
                text.push('\n');
            }
            text.pop();
        }
        Format::Json => {
            let rendered: Vec<serde_json::Value> = blocks
                .iter()
                .map(|(label, alphabet, rels)| {
                    let lines: Vec<String> =
                        rels.iter().map(|r| r.display(alphabet).to_string()).collect();
                    serde_json::json!({ "name": label, "relations": lines })
                })
                .collect();
            text = serde_json::to_string_pretty(&serde_json::json!({
                "kind": kind,
                "matrix": choice.name(),
                "blocks": rendered,
            }))
            .expect("report serializes");
        }
        Format::Latex => {
            for (label, alphabet, rels) in &blocks {
                text.push_str(&format!("% {label} ({})\n", choice.name()));
                text.push_str(&latex_relation_array(rels, alphabet, order)?);
                text.push_str("\n\n");
            }
            text.pop();
        }
    }
    print_tolerant(text.trim_end_matches('\n'));
    Ok(())
}

fn run_dump_matrix(matrix: &str, opt: &SuiteOptions, format: Format) -> Result<()> {
    let text = match format {
        Format::Json => dump_matrix(matrix, opt)?,
        Format::Text => {
            let choice = BraidChoice::from_name(matrix)
                .ok_or_else(|| CoreError::Invalid(format!("unknown matrix `{matrix}`")))?;
            let m = choice.matrix().substitute(&opt.substitution)?;
            let mut lines = vec!["# rows and columns over the pair basis (1,1) .. (3,3)".to_string()];
            for (r, (k, l)) in PAIRS.iter().enumerate() {
                let entries: Vec<String> = (0..9).map(|c| m.get(r, c).to_string()).collect();
                lines.push(format!("({k},{l}): {}", entries.join(", ")));
            }
            lines.join("\n")
        }
        Format::Latex => {
            let choice = BraidChoice::from_name(matrix)
                .ok_or_else(|| CoreError::Invalid(format!("unknown matrix `{matrix}`")))?;
            let m = choice.matrix().substitute(&opt.substitution)?;
            let rows: Vec<String> = (0..9)
                .map(|r| {
                    (0..9)
                        .map(|c| latex_scalar(m.get(r, c)))
                        .collect::<Vec<_>>()
                        .join(" & ")
                })
                .collect();
            format!(
                "\\begin{{pmatrix}}\n{}\n\\end{{pmatrix}}",
                rows.join(" \\\\\n")
            )
        }
    };
    print_tolerant(&text);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opt = parse_bindings(&cli.substitute).map(|substitution| SuiteOptions {
        substitution,
        seed: cli.seed,
        fuel: cli.fuel.unwrap_or(DEFAULT_FUEL),
        max_degree: cli.max_degree,
        fixture: None,
    });
    match cli.command {
        Command::Verify { suite, fixture } => {
            run_verify(&suite, fixture.as_deref(), opt, cli.format)
        }
        Command::NormalForm { expr, system } => {
            run_command(opt, cli.format, |o, f| run_normal_form(&expr, &system, o, f))
        }
        Command::Derive { kind, matrix } => {
            run_command(opt, cli.format, |o, f| run_derive(&kind, &matrix, o, f))
        }
        Command::DumpMatrix { matrix } => {
            run_command(opt, cli.format, |o, f| run_dump_matrix(&matrix, o, f))
        }
    }
}

fn run_command(
    opt: Result<SuiteOptions>,
    format: Format,
    f: impl FnOnce(&SuiteOptions, Format) -> Result<()>,
) -> ExitCode {
    let outcome = opt.and_then(|o| f(&o, format));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
