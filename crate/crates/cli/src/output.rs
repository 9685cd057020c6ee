// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::path::PathBuf;

use qpt_core::scenarios::ScenarioReport;
use serde::Serialize;
use thiserror::Error;

use crate::args::{CliConfig, Format};

/// Version of the JSON document layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },

    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Compute(qpt_core::Error),
}

impl From<qpt_core::Error> for CliError {
    /// Rejected scenario parameters are usage errors; anything else is a
    /// failure of the computation itself.
    fn from(e: qpt_core::Error) -> Self {
        use qpt_core::Error as E;
        match e {
            E::InvalidParameter(_) | E::NotNormalized { .. } | E::ZeroVector => CliError::Usage(e.to_string()),
            e => CliError::Compute(e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input { .. } | CliError::Output { .. } => 3,
            CliError::Compute(_) => 1,
        }
    }
}

#[derive(Serialize)]
struct Document<'a> {
    schema: u32,
    #[serde(flatten)]
    report: &'a ScenarioReport,
}

pub fn render(report: &ScenarioReport, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => {
            let doc = Document { schema: SCHEMA_VERSION, report };
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

pub fn emit(report: &ScenarioReport, config: &CliConfig) -> Result<(), CliError> {
    let text = render(report, config.format);
    match &config.output {
        Some(path) => {
            std::fs::write(path, text).map_err(|source| CliError::Output { path: path.clone(), source })
        }
        None => {
            let mut out = std::io::stdout().lock();
            // a closed pipe is not worth a nonzero exit
            let _ = out.write_all(text.as_bytes());
            Ok(())
        }
    }
}
