use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{SolveReport, SystemSpec};

/// Version tag of the JSON report format.
pub const SCHEMA: &str = "extroot/1";

/// System as polynomial strings, the JSON input format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSource {
    pub n: usize,
    #[serde(rename = "F")]
    pub f: String,
    #[serde(rename = "F_i")]
    pub axes: Vec<String>,
}

impl SystemSource {
    pub fn of(spec: &SystemSpec) -> Self {
        SystemSource {
            n: spec.n(),
            f: spec.f.to_string(),
            axes: spec.axes.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let src: SystemSource = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("system JSON: {e}")))?;
        if src.axes.len() != src.n {
            return Err(Error::InvalidInput(format!(
                "n = {} but {} axis polynomials given",
                src.n,
                src.axes.len()
            )));
        }
        Ok(src)
    }

    pub fn to_spec(&self) -> Result<SystemSpec> {
        let axes: Vec<&str> = self.axes.iter().map(String::as_str).collect();
        SystemSpec::parse(&self.f, &axes)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub seconds: f64,
}

/// A self-contained solve result: the system and its report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub system: SystemSource,
    pub report: SolveReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl ReportDocument {
    pub fn new(spec: &SystemSpec, report: SolveReport) -> Self {
        ReportDocument {
            schema: SCHEMA.to_string(),
            system: SystemSource::of(spec),
            report,
            timing: None,
        }
    }

    pub fn to_json(&self, pretty: bool) -> String {
        let out = if pretty {
            serde_json::to_string_pretty(self)
        } else {
            serde_json::to_string(self)
        };
        out.expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ReportDocument =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("report JSON: {e}")))?;
        if doc.schema != SCHEMA {
            return Err(Error::InvalidInput(format!("unsupported schema {:?}", doc.schema)));
        }
        Ok(doc)
    }
}
