//! Result rows and their JSON / CSV / text renderings.

use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Only a closed form was requested.
    Computed,
    Agree,
    Mismatch,
    /// Outside the formula's documented range; reported, not compared.
    Excluded,
    /// No closed form for this group and parameter.
    NoFormula,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Computed => "computed",
            Status::Agree => "agree",
            Status::Mismatch => "mismatch",
            Status::Excluded => "excluded",
            Status::NoFormula => "no_formula",
        }
    }
}

/// One (group, quantity, parameter) line. Field order is the CSV column order.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub group: String,
    pub n: u64,
    pub quantity: String,
    pub param: Option<u32>,
    pub formula: Option<u64>,
    pub oracle: Option<u64>,
    pub witness_ok: Option<bool>,
    pub branch: String,
    #[serde(skip_serializing)]
    pub status: Status,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    #[serde(flatten)]
    row: &'a Row,
    status: Status,
}

pub fn render(rows: &[Row], format: Format, out: &mut impl Write) -> Result<()> {
    match format {
        Format::Json => {
            let wrapped: Vec<JsonRow<'_>> = rows.iter().map(|row| JsonRow { row, status: row.status }).collect();
            serde_json::to_writer_pretty(&mut *out, &wrapped)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            if rows.is_empty() {
                w.write_record(["group", "n", "quantity", "param", "formula", "oracle", "witness_ok", "branch"])?;
            }
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Text => {
            let opt = |v: Option<u64>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
            let cells: Vec<[String; 7]> = rows
                .iter()
                .map(|r| {
                    [
                        r.group.clone(),
                        r.quantity.clone() + &r.param.map_or_else(String::new, |p| format!("({p})")),
                        opt(r.formula),
                        opt(r.oracle),
                        r.witness_ok.map_or_else(|| "-".into(), |b| b.to_string()),
                        r.status.as_str().to_string(),
                        r.branch.clone(),
                    ]
                })
                .collect();
            let header = ["group", "quantity", "formula", "oracle", "witness", "status", "branch"];
            let mut widths = header.map(str::len);
            for c in &cells {
                for (w, s) in widths.iter_mut().zip(c) {
                    *w = (*w).max(s.len());
                }
            }
            let line = |c: &[&str]| {
                c.iter()
                    .zip(widths)
                    .map(|(s, w)| format!("{s:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            writeln!(out, "{}", line(&header))?;
            for c in &cells {
                let refs: Vec<&str> = c.iter().map(String::as_str).collect();
                writeln!(out, "{}", line(&refs))?;
            }
        }
    }
    Ok(())
}
