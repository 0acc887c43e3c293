use std::io::Write;

use scarpi::transition::{TransitionKind, TransitionSpec};
use serde::Serialize;

use crate::CliError;

/// Full-precision scientific notation; reparses to the same `f64`.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<I>(out: &mut dyn Write, header: &[&str], rows: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, doc: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, doc)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct TransitionRecord {
    pub kind: &'static str,
    pub alpha1: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

impl From<&TransitionSpec> for TransitionRecord {
    fn from(spec: &TransitionSpec) -> Self {
        let (kind, alpha2, c, beta) = match spec.kind {
            TransitionKind::Constant => ("constant", None, None, None),
            TransitionKind::Exponential => ("exponential", Some(spec.alpha2), Some(spec.c), None),
            TransitionKind::MittagLeffler => (
                "mittag-leffler",
                Some(spec.alpha2),
                Some(spec.c),
                Some(spec.beta),
            ),
        };
        Self {
            kind,
            alpha1: spec.alpha1,
            alpha2,
            c,
            beta,
        }
    }
}
