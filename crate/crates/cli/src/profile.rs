//! σ profile specifications: the `poly:`/`expr:`/`table:` shorthand and the
//! JSON profile file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use stable_ergo_core::sigma::SigmaProfile;

use crate::error::{CliError, Result};

/// A profile as written in a profile file or echoed in a manifest. Table
/// specs are resolved to inline points so a manifest needs no side files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProfileSpec {
    Polynomial {
        gamma: f64,
    },
    Expression {
        text: String,
    },
    Table {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        file: Option<PathBuf>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<Vec<[f64; 2]>>,
        tail_exponents: [f64; 2],
    },
}

impl ProfileSpec {
    /// Parses `poly:<γ>`, `expr:<text>` or `table:<csv path>`; tables take
    /// their tail exponents from `tails`.
    pub fn parse_shorthand(s: &str, tails: Option<[f64; 2]>) -> Result<Self> {
        let (head, rest) = s
            .split_once(':')
            .ok_or_else(|| CliError::Config(format!("profile '{s}': expected poly:<gamma>, expr:<text> or table:<path>")))?;
        match head {
            "poly" => {
                let gamma = rest.trim().parse().map_err(|_| CliError::Config(format!("poly:{rest}: not a number")))?;
                Ok(ProfileSpec::Polynomial { gamma })
            }
            "expr" => Ok(ProfileSpec::Expression { text: rest.to_string() }),
            "table" => {
                let tail_exponents = tails.ok_or_else(|| CliError::Config("table profiles need --tail-exponents <g-,g+>".into()))?;
                Ok(ProfileSpec::Table { file: Some(rest.into()), points: None, tail_exponents })
            }
            _ => Err(CliError::Config(format!("unknown profile kind '{head}' (poly, expr, table)"))),
        }
    }

    /// Reads a JSON profile file; a relative table path is taken relative to it.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut spec: ProfileSpec = serde_json::from_str(&text)?;
        if let ProfileSpec::Table { file: Some(f), .. } = &mut spec {
            if f.is_relative() {
                *f = path.parent().unwrap_or(Path::new(".")).join(&*f);
            }
        }
        Ok(spec)
    }

    /// Loads table points from disk, leaving every other kind unchanged.
    pub fn resolve(self) -> Result<Self> {
        match self {
            ProfileSpec::Table { file: Some(file), points: None, tail_exponents } => {
                let points = read_table(&file)?;
                Ok(ProfileSpec::Table { file: Some(file), points: Some(points), tail_exponents })
            }
            ProfileSpec::Table { file: None, points: None, .. } => Err(CliError::Config("table profile needs 'file' or 'points'".into())),
            other => Ok(other),
        }
    }

    pub fn build(&self) -> Result<SigmaProfile> {
        Ok(match self {
            ProfileSpec::Polynomial { gamma } => SigmaProfile::polynomial(*gamma)?,
            ProfileSpec::Expression { text } => SigmaProfile::expression(text)?,
            ProfileSpec::Table { points: Some(points), tail_exponents: [gm, gp], .. } => {
                let pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
                let even = pts.first().is_some_and(|p| p.0 == 0.0);
                SigmaProfile::tabulated(&pts, *gm, *gp, even)?
            }
            ProfileSpec::Table { .. } => return self.clone().resolve()?.build(),
        })
    }

    /// The shorthand form, for log lines.
    pub fn label(&self) -> String {
        match self {
            ProfileSpec::Polynomial { gamma } => format!("poly:{gamma}"),
            ProfileSpec::Expression { text } => format!("expr:{text}"),
            ProfileSpec::Table { file: Some(f), .. } => format!("table:{}", f.display()),
            ProfileSpec::Table { .. } => "table:<inline>".into(),
        }
    }
}

#[derive(Debug, Deserialize)]
struct Row {
    x: f64,
    sigma: f64,
}

/// Reads a `x,sigma` CSV with a header row.
pub fn read_table(path: &Path) -> Result<Vec<[f64; 2]>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::Config(format!("{}: {other:?}", path.display())),
    })?;
    rdr.deserialize::<Row>().map(|r| Ok(r.map(|r| [r.x, r.sigma])?)).collect()
}

/// Parses `a,b` into two tail exponents.
pub fn parse_tails(s: &str) -> Result<[f64; 2]> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CliError::Config(format!("--tail-exponents '{s}': expected two numbers")))?;
    match v[..] {
        [a, b] => Ok([a, b]),
        _ => Err(CliError::Config(format!("--tail-exponents '{s}': expected two numbers"))),
    }
}
