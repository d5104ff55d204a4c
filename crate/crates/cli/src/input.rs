//! Reading flags and files.

use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use slicekit::{ImaginaryUnit, Quaternion};

#[derive(Debug)]
pub enum CliError {
    /// Bad input: unreadable file, malformed JSON, bad flag value.
    Parse(String),
    /// The computation itself was rejected.
    Domain(slicekit::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Parse(_) => 2,
            Self::Domain(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Parse(m) => write!(f, "{m}"),
            Self::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<slicekit::Error> for CliError {
    fn from(e: slicekit::Error) -> Self {
        Self::Domain(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

#[derive(Deserialize)]
pub struct CoeffsFile {
    pub coeffs: Vec<Quaternion>,
}

fn parse_unit(text: &str) -> CliResult<ImaginaryUnit> {
    let t = text.trim();
    let (negate, name) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t),
    };
    let named = match name {
        "i" => Some(ImaginaryUnit::I),
        "j" => Some(ImaginaryUnit::J),
        "k" => Some(ImaginaryUnit::K),
        _ => None,
    };
    let unit = match named {
        Some(u) if negate => -u,
        Some(u) => u,
        None => serde_json::from_str(t).map_err(|e| CliError::Parse(format!("bad unit {t:?}: {e}")))?,
    };
    Ok(unit)
}

/// Units separated by `;`.
pub fn parse_units(text: &str) -> CliResult<Vec<ImaginaryUnit>> {
    text.split(';').filter(|s| !s.trim().is_empty()).map(parse_unit).collect()
}

pub fn parse_quaternion(text: &str) -> CliResult<Quaternion> {
    serde_json::from_str(text.trim()).map_err(|e| CliError::Parse(format!("bad quaternion {text:?}: {e}")))
}
