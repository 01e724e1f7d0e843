//! Job runners behind the `partreg` binary.
//!
//! Exit codes: 0 when every check passed or a verified witness was found,
//! 1 when a check failed, a search was exhausted or a certificate was
//! rejected, 2 for unusable input, 3 when a budget or timeout stopped the job.

use std::io::{self, Write};

use partreg_core::Error;

pub mod config;
pub mod jobs;
pub mod records;

use records::Record;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_budget() => EXIT_BUDGET,
            CliError::Core(Error::Verification(_)) => EXIT_FAILED,
            _ => EXIT_INPUT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    /// JSON lines on stdout only.
    Jsonl,
    /// Readable text on stderr only.
    Human,
    /// JSON lines on stdout and readable text on stderr.
    #[default]
    Both,
}

/// Where records go: JSON lines to one stream, the human rendering to the
/// other.
pub struct Output<'a> {
    format: Format,
    json: &'a mut dyn Write,
    human: &'a mut dyn Write,
}

impl<'a> Output<'a> {
    pub fn new(format: Format, json: &'a mut dyn Write, human: &'a mut dyn Write) -> Self {
        Output { format, json, human }
    }

    pub fn emit(&mut self, record: &Record) -> io::Result<()> {
        if self.format != Format::Human {
            writeln!(self.json, "{}", record.to_line())?;
        }
        if self.format != Format::Jsonl {
            writeln!(self.human, "{record}")?;
        }
        Ok(())
    }

    /// A diagnostic for the human stream only.
    pub fn note(&mut self, msg: &str) -> io::Result<()> {
        writeln!(self.human, "{msg}")
    }
}
