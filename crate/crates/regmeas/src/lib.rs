//! File formats and the `regmeas` command line on top of [`regmeas_core`].

use std::ffi::OsString;
use std::io::Write;

use serde_json::json;

pub mod cli;
pub mod output;
pub mod repfile;

pub use regmeas_core as core;

/// Failures of a CLI run, each tied to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("invalid representation: {0}")]
    InvalidRep(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] regmeas_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        use regmeas_core::Error as E;
        match self {
            AppError::InvalidRep(_) => 2,
            AppError::Core(E::Hypothesis { .. } | E::DegenerateNormalisation { .. } | E::VanishingSum { .. }) => 3,
            AppError::Core(E::NumericalFailure { .. }) => 4,
            _ => 1,
        }
    }

    /// Machine-readable code for the stderr diagnostic.
    pub fn code(&self) -> &'static str {
        use regmeas_core::Error as E;
        match self {
            AppError::InvalidRep(_) => "invalid-representation",
            AppError::Usage(_) => "usage",
            AppError::Io(_) => "io",
            AppError::Core(e) => match e {
                E::Hypothesis { kind, .. } => kind.code(),
                E::DegenerateNormalisation { .. } => "degenerate-normalisation",
                E::VanishingSum { .. } => "vanishing-sum",
                E::NumericalFailure { .. } => "numerical-failure",
                E::SizeGuard { .. } => "size-guard",
                E::Unsupported(_) => "unsupported",
                E::Domain(_) => "domain",
                E::Parse(_) => "parse",
                _ => "error",
            },
        }
    }

    pub fn diagnostic(&self) -> serde_json::Value {
        let (description, detail) = match self {
            AppError::Core(regmeas_core::Error::Hypothesis { kind, detail }) => {
                (kind.description().to_string(), detail.clone())
            }
            other => (other.to_string(), String::new()),
        };
        json!({
            "error": self.code(),
            "description": description,
            "detail": detail,
            "exit_code": self.exit_code(),
        })
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, AppError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("REGMEAS_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| AppError::Usage(format!("REGMEAS_THREADS={v:?} is not a positive integer")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| AppError::Usage(e.to_string()))
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use clap::Parser;
    let parsed = match cli::Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = thread_pool().and_then(|pool| pool.install(|| cli::execute(&parsed)));
    let finish = |e: &AppError, err: &mut dyn Write| {
        let _ = writeln!(err, "{}", e.diagnostic());
        e.exit_code()
    };
    match result {
        Ok(outcome) => {
            for note in &outcome.notes {
                let _ = writeln!(err, "{note}");
            }
            if let Err(e) = cli::emit(&parsed, &outcome, out) {
                return finish(&e, err);
            }
            match &outcome.violation {
                Some(v) => finish(v, err),
                None => 0,
            }
        }
        Err(e) => finish(&e, err),
    }
}
