//! Command-line front end: argument parsing, report assembly and exit codes.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 computation error, 4
//! verification failure. Errors are written to stderr as a JSON object.

pub mod args;
pub mod commands;
pub mod render;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use serde::Serialize;

use args::{Cli, Command, FamilyCommand};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(unimoment::Error),
    Verification { kind: &'static str, message: String },
    Output(String),
}

impl From<unimoment::Error> for CliError {
    fn from(e: unimoment::Error) -> Self {
        CliError::Library(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use unimoment::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Library(
                E::InvalidParams(_)
                | E::UnknownLaw(_)
                | E::NegativeCoefficient { .. }
                | E::ZeroPolynomial
                | E::InvalidFactoredSpec(_),
            ) => EXIT_USAGE,
            CliError::Library(_) | CliError::Output(_) => EXIT_COMPUTE,
            CliError::Verification { .. } => EXIT_VERIFY,
        }
    }

    fn object(&self) -> ErrorObject {
        match self {
            CliError::Usage(m) => ErrorObject {
                kind: "Usage".into(),
                message: m.clone(),
            },
            CliError::Library(e) => ErrorObject::from_lib(e),
            CliError::Verification { kind, message } => ErrorObject {
                kind: (*kind).into(),
                message: message.clone(),
            },
            CliError::Output(m) => ErrorObject {
                kind: "Output".into(),
                message: m.clone(),
            },
        }
    }
}

/// Machine-readable error, as printed on stderr and embedded in reports.
#[derive(Serialize, Clone, Debug)]
pub struct ErrorObject {
    pub kind: String,
    pub message: String,
}

impl ErrorObject {
    pub fn from_lib(e: &unimoment::Error) -> Self {
        ErrorObject {
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

#[derive(Serialize)]
struct ErrorEnvelope {
    schema: &'static str,
    exit_code: i32,
    error: ErrorObject,
}

fn report_error(err: &mut dyn Write, e: &CliError) -> i32 {
    let code = e.exit_code();
    let env = ErrorEnvelope {
        schema: render::SCHEMA,
        exit_code: code,
        error: e.object(),
    };
    let _ = writeln!(
        err,
        "{}",
        serde_json::to_string(&env).expect("error serializes")
    );
    code
}

fn dispatch(cli: &Cli) -> Result<commands::Outcome, CliError> {
    match &cli.command {
        Command::Family(FamilyCommand::List) => Ok(commands::family_list()),
        Command::Family(FamilyCommand::Gen(a)) => commands::family_gen(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Limit(a) => commands::limit(a),
        Command::Pmf(a) => commands::pmf(a),
    }
}

/// Runs one invocation, writing the report to `out` and errors to `err`.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let msg = e.render().to_string();
            return report_error(err, &CliError::Usage(msg.trim().to_string()));
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => {
            if let Err(e) = out
                .write_all(outcome.stdout.as_bytes())
                .and_then(|_| out.flush())
            {
                return report_error(err, &CliError::Output(e.to_string()));
            }
            match outcome.deferred {
                Some(e) => report_error(err, &e),
                None => EXIT_OK,
            }
        }
        Err(e) => report_error(err, &e),
    }
}

/// Runs one invocation against the process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
