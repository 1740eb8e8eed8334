//! Command-line front end for `poisson-motion`.
//!
//! `simulate` writes trajectories and a report, `check` runs invariant suites, `plot` renders
//! a trajectory file as SVG. [`run`] returns the process exit code.

pub mod args;
pub mod check;
pub mod error;
pub mod output;
pub mod plot;
pub mod simulate;

use std::path::PathBuf;

use args::{Cli, Command, Format};
use error::{CliError, CliResult};

/// Exit code when a trajectory left the phase space before `t_end`.
pub const EXIT_DOMAIN: i32 = 3;
/// Exit code when a check suite exceeds its tolerance.
pub const EXIT_CHECK_FAILED: i32 = 1;

pub fn run(cli: &Cli) -> CliResult<i32> {
    match &cli.command {
        Command::Simulate(a) => {
            let spec = simulate::RunSpec::resolve(a, cli.seed)?;
            let out = simulate::run(&spec)?;
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("pmotion-out"));
            let written = simulate::write_outputs(&out, &dir, cli.format)?;
            for p in &written {
                eprintln!("wrote {}", p.display());
            }
            if out.domain_exit {
                eprintln!("warning: trajectory left the phase space; output is partial");
                return Ok(EXIT_DOMAIN);
            }
            Ok(0)
        }
        Command::Check(a) => {
            let samples = a.samples.unwrap_or_else(|| a.suite.default_samples());
            if samples == 0 {
                return Err(CliError::Usage("--samples must be at least 1".into()));
            }
            let tol = a.tol.unwrap_or_else(|| a.suite.default_tolerance());
            let report = check::run(a.suite, samples, cli.seed, tol);
            let body = match cli.format {
                Format::Json => output::to_json(&report),
                Format::Csv => {
                    let mut s = String::from("name,residual,pass\n");
                    for c in &report.cases {
                        s.push_str(&format!("{},{},{}\n", c.name, output::fmt_num(c.residual), c.pass));
                    }
                    s
                }
            };
            match &cli.out {
                Some(p) => output::write_file(p, &body)?,
                None => print!("{body}"),
            }
            Ok(if report.pass { 0 } else { EXIT_CHECK_FAILED })
        }
        Command::Plot(a) => {
            let text = std::fs::read_to_string(&a.input).map_err(|e| CliError::io(&a.input, e))?;
            let table = output::Table::parse(&text)
                .map_err(|reason| CliError::Parse { path: a.input.display().to_string(), reason })?;
            let svg = plot::render_svg(&table);
            let path = cli.out.clone().unwrap_or_else(|| a.input.with_extension("svg"));
            output::write_file(&path, &svg)?;
            eprintln!("wrote {}", path.display());
            Ok(0)
        }
    }
}
