//! Command-line front end for `ramroot-core`.
//!
//! Exit codes: 0 converged or table reproduced, 1 invalid arguments or
//! evaluation error, 2 iteration limit reached or a table row missed its
//! target, 3 undefined step.

pub mod args;
pub mod problem;
pub mod report;
pub mod run;

use clap::Parser;

use args::{Cli, Command};
use run::{Outcome, EXIT_OK, EXIT_USAGE};

/// Parses `argv`, runs the command and returns `(stdout, stderr, exit code)`.
pub fn main_with_args<I, T>(argv: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if e.use_stderr() { (String::new(), rendered, code) } else { (rendered, String::new(), code) };
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => run::solve(a),
        Command::Converge(a) => run::converge(a),
        Command::Series(a) => run::series(a),
        Command::Tables(a) => run::tables(a),
        Command::Order(a) => run::order(a),
    };
    match result {
        Ok(Outcome { output, code }) => (output, String::new(), code),
        Err(e) => (String::new(), format!("error: {e}\n"), EXIT_USAGE),
    }
}
