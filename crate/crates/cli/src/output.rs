//! CSV/JSON rendering with reproducibility headers.
//!
//! Every file begins with the fully resolved configuration, so a result is
//! self-describing; identical configuration and seed produce byte-identical
//! files. Floats are printed with 17 significant digits in CSV (lossless
//! round-trip for `f64`); JSON uses `serde_json`'s shortest-round-trip
//! encoding, which is equally lossless.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::{header_lines, OutputFormat, ResolvedConfig};
use crate::error::CliError;
use crate::experiments::{Cell, ExperimentOutput, Table};

fn format_cell_csv(cell: &Cell) -> String {
    match cell {
        Cell::UInt(v) => v.to_string(),
        Cell::Float(v) => format!("{v:.16e}"),
        Cell::Str(v) => v.clone(),
        Cell::Bool(v) => v.to_string(),
    }
}

fn render_table_csv(table: &Table, out: &mut String) {
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let line: Vec<String> = row.iter().map(format_cell_csv).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
}

fn render_csv(config: &ResolvedConfig, table: &Table) -> String {
    let mut out = String::new();
    for line in header_lines(config) {
        out.push_str("# ");
        out.push_str(&line);
        out.push('\n');
    }
    render_table_csv(table, &mut out);
    out
}

fn cell_json(cell: &Cell) -> serde_json::Value {
    match cell {
        Cell::UInt(v) => serde_json::json!(v),
        Cell::Float(v) => serde_json::json!(v),
        Cell::Str(v) => serde_json::json!(v),
        Cell::Bool(v) => serde_json::json!(v),
    }
}

fn table_json(table: &Table) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = table
        .rows
        .iter()
        .map(|row| {
            let object: serde_json::Map<String, serde_json::Value> = table
                .columns
                .iter()
                .zip(row)
                .map(|(name, cell)| (name.to_string(), cell_json(cell)))
                .collect();
            serde_json::Value::Object(object)
        })
        .collect();
    serde_json::Value::Array(rows)
}

fn render_json(config: &ResolvedConfig, output: &ExperimentOutput) -> String {
    let mut document = serde_json::Map::new();
    document.insert(
        "config".to_string(),
        serde_json::to_value(config).expect("config serialises"),
    );
    document.insert("rows".to_string(), table_json(&output.table));
    if let Some(sidecar) = &output.sidecar {
        document.insert("special_points".to_string(), table_json(sidecar));
    }
    let mut text = serde_json::to_string_pretty(&serde_json::Value::Object(document))
        .expect("document serialises");
    text.push('\n');
    text
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("points.csv")
}

/// Write the experiment output to the configured destination (stdout when
/// no path is set). The phase-scan marked points go to a `.points.csv`
/// sidecar next to a CSV file, and are embedded in JSON documents.
pub fn write_output(config: &ResolvedConfig, output: &ExperimentOutput) -> Result<(), CliError> {
    match config.format {
        OutputFormat::Csv => {
            let main = render_csv(config, &output.table);
            match &config.out {
                Some(path) => {
                    std::fs::write(path, main)?;
                    if let Some(sidecar) = &output.sidecar {
                        let mut text = String::new();
                        render_table_csv(sidecar, &mut text);
                        std::fs::write(sidecar_path(path), text)?;
                    }
                }
                None => {
                    let stdout = std::io::stdout();
                    let mut lock = stdout.lock();
                    lock.write_all(main.as_bytes())?;
                    if let Some(sidecar) = &output.sidecar {
                        let mut text = String::from("# special points\n");
                        render_table_csv(sidecar, &mut text);
                        lock.write_all(text.as_bytes())?;
                    }
                }
            }
        }
        OutputFormat::Json => {
            let document = render_json(config, output);
            match &config.out {
                Some(path) => std::fs::write(path, document)?,
                None => std::io::stdout().write_all(document.as_bytes())?,
            }
        }
    }
    Ok(())
}
