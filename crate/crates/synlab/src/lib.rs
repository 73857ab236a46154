//! The `synlab` command line: dimension tables of syntomic cohomology,
//! `TC` and `K` of `ℤ/pⁿ` modulo `(p, v₁ᵏ)`, the ingredients they are
//! assembled from, and the verification suites that cross-check them.
//!
//! [`run`] is the whole program; `main` only forwards the process
//! arguments and streams.

pub mod args;
pub mod cache;
pub mod commands;
pub mod error;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use error::CliError;

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code: 0 on success, 2 for invalid input,
/// 3 for failed verification and 1 for i/o errors.
pub fn run(
    argv: impl IntoIterator<Item = OsString>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match commands::execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
