use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use cayley_ising::Error;
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Exit status contract: 0 verified, 1 property violated, 2 invalid input, 3 resource cap.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Ok,
    Violated,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        match s {
            Status::Ok => ExitCode::SUCCESS,
            Status::Violated => ExitCode::from(1),
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource { .. } => Failure::Resource(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Invalid(_) => ExitCode::from(2),
            Failure::Resource(_) => ExitCode::from(3),
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Resource(m) => m,
        }
    }
}

pub type CmdResult = std::result::Result<Status, Failure>;

/// Everything needed to reproduce an output: the command, its parameters as
/// given, and the output format.
pub fn manifest(command: &str, params: &impl Serialize, format: Format) -> Value {
    json!({
        "tool": "cayley",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "params": params,
        "format": format,
    })
}

/// A single output stream (stdout or a file) that starts with the manifest.
pub struct Emitter {
    out: Box<dyn Write>,
    format: Format,
    manifest: Value,
}

impl Emitter {
    pub fn open(path: Option<&PathBuf>, format: Format, manifest: Value) -> std::result::Result<Self, Failure> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        let mut e = Emitter { out, format, manifest };
        if format != Format::Json {
            let m = e.manifest.to_string();
            writeln!(e.out, "# manifest {m}")?;
        }
        Ok(e)
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn line(&mut self, s: impl AsRef<str>) -> io::Result<()> {
        writeln!(self.out, "{}", s.as_ref())
    }

    /// Writes one JSON object with the manifest under `"manifest"`.
    pub fn json(&mut self, mut body: Value) -> io::Result<()> {
        if let Value::Object(map) = &mut body {
            map.insert("manifest".into(), self.manifest.clone());
        }
        writeln!(self.out, "{body}")
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.out.flush()
    }
}

/// A CSV field, quoted when it contains a separator or a quote.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
