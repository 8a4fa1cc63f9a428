use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::args::Format;

/// Process exit status: success, usage or resource failure, mathematical discrepancy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok = 0,
    Resource = 1,
    Discrepancy = 2,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(cyclodiff::Error),
    Io(io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<cyclodiff::Error> for CliError {
    fn from(e: cyclodiff::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub struct Out {
    pub format: Format,
    sink: Box<dyn Write>,
}

impl Out {
    pub fn new(format: Format, path: Option<&Path>) -> CliResult<Out> {
        let sink: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(Out { format, sink })
    }

    /// Pretty JSON, or the text rendering.
    pub fn emit<T: Serialize>(&mut self, value: &T, text: impl FnOnce() -> String) -> CliResult<()> {
        match self.format {
            Format::Json => {
                let s = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
                writeln!(self.sink, "{s}")?;
            }
            Format::Text => write!(self.sink, "{}", text())?,
        }
        Ok(())
    }

    /// Output that is the same in every format (exchange files).
    pub fn raw(&mut self, s: &str) -> CliResult<()> {
        self.sink.write_all(s.as_bytes())?;
        Ok(())
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.sink.flush()?;
        Ok(())
    }
}
