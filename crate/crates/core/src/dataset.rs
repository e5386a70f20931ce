//! Metrics and defects CSV tables.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;

use crate::error::{Error, Result};
use crate::model::{DefectRow, MetricsRow};

pub const METRICS_HEADER: &str = "module,cbo,dit,lcom,noc,rfc,wmc";

fn read_rows<T: DeserializeOwned>(text: &str, what: &str) -> Result<Vec<T>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    rdr.deserialize()
        .enumerate()
        .map(|(i, r)| r.map_err(|e| Error::schema(format!("{what} row {}", i + 2), e.to_string())))
        .collect()
}

fn check_unique<'a>(modules: impl Iterator<Item = &'a str>, what: &str) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for m in modules {
        if !seen.insert(m) {
            return Err(Error::schema(what, format!("module {m} listed twice")));
        }
    }
    Ok(())
}

pub fn read_metrics_csv(text: &str) -> Result<Vec<MetricsRow>> {
    let rows: Vec<MetricsRow> = read_rows(text, "metrics")?;
    check_unique(rows.iter().map(|r| r.module.as_str()), "metrics")?;
    Ok(rows)
}

pub fn read_defects_csv(text: &str) -> Result<Vec<DefectRow>> {
    let rows: Vec<DefectRow> = read_rows(text, "defects")?;
    check_unique(rows.iter().map(|r| r.module.as_str()), "defects")?;
    if let Some(r) = rows.iter().find(|r| !(r.fix_hours >= 0.0)) {
        return Err(Error::schema(
            "defects",
            format!("module {} has negative or invalid fix_hours", r.module),
        ));
    }
    Ok(rows)
}

pub fn metrics_to_csv(rows: &[MetricsRow]) -> String {
    let mut out = String::from(METRICS_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.module, r.cbo, r.dit, r.lcom, r.noc, r.rfc, r.wmc
        ));
    }
    out
}

pub fn defects_to_csv(rows: &[DefectRow]) -> String {
    let mut out = String::from("module,defects,fix_hours\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.module, r.defects, r.fix_hours));
    }
    out
}

pub fn load_metrics_csv(path: impl AsRef<Path>) -> Result<Vec<MetricsRow>> {
    let path = path.as_ref();
    read_metrics_csv(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}

pub fn load_defects_csv(path: impl AsRef<Path>) -> Result<Vec<DefectRow>> {
    let path = path.as_ref();
    read_defects_csv(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}
