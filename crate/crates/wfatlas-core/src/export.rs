//! Table export: CSV (the golden regression format), JSON, and markdown.
//!
//! Column order is fixed: id, params, c1_top, c1sq_c2 (d >= 4 only),
//! h0_tangent (d = 3 only), fano, moves. CSV uses LF line endings, no
//! trailing whitespace, and minimal quoting.

use serde_json::json;

use crate::classify::ClassificationRun;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Markdown,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(format!("unknown format '{other}'")),
        }
    }
}

fn columns(dim: usize) -> Vec<&'static str> {
    let mut cols = vec!["id", "params", "c1_top"];
    if dim >= 4 {
        cols.push("c1sq_c2");
    }
    if dim == 3 {
        cols.push("h0_tangent");
    }
    cols.push("fano");
    cols.push("moves");
    cols
}

fn cells(run: &ClassificationRun, idx: usize) -> Vec<String> {
    let rec = &run.records[idx];
    let mut cells = vec![
        rec.id.clone(),
        rec.params.to_string(),
        rec.c1_top.to_string(),
    ];
    if run.dim >= 4 {
        cells.push(rec.c1sq_c2.to_string());
    }
    if run.dim == 3 {
        cells.push(rec.h0_tangent.to_string());
    }
    cells.push(rec.fano.to_string());
    let moves: Vec<String> = rec.moves.iter().map(|m| m.to_string()).collect();
    cells.push(moves.join("; "));
    cells
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

pub fn export_table(run: &ClassificationRun, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::new();
            out.push_str(&columns(run.dim).join(","));
            out.push('\n');
            for i in 0..run.records.len() {
                let row: Vec<String> = cells(run, i).iter().map(|c| csv_quote(c)).collect();
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        }
        Format::Markdown => {
            let cols = columns(run.dim);
            let mut out = String::new();
            out.push_str(&format!("| {} |\n", cols.join(" | ")));
            out.push_str(&format!(
                "|{}\n",
                cols.iter().map(|_| " --- |").collect::<String>()
            ));
            for i in 0..run.records.len() {
                out.push_str(&format!("| {} |\n", cells(run, i).join(" | ")));
            }
            out
        }
        Format::Json => {
            let records: Vec<serde_json::Value> = run
                .records
                .iter()
                .map(|rec| {
                    json!({
                        "id": rec.id,
                        "family": rec.family.tag(),
                        "params": rec.params.to_string(),
                        "c1_top": rec.c1_top.to_string().parse::<i64>().unwrap_or_default(),
                        "c1sq_c2": rec.c1sq_c2.to_string().parse::<i64>().unwrap_or_default(),
                        "h0_tangent": rec.h0_tangent.to_string().parse::<i64>().unwrap_or_default(),
                        "fano": rec.fano,
                        "weak_fano": rec.weak_fano,
                        "h1_omega1_antiK": rec.h1_omega1_anti_k,
                        "self_flop": rec.self_flop,
                        "moves": rec.moves.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                        "fan": serde_json::from_str::<serde_json::Value>(
                            &crate::json::fan_to_json(&rec.fan)
                        ).expect("fan json"),
                    })
                })
                .collect();
            let doc = json!({
                "dim": run.dim,
                "rank": run.rank,
                "count": run.records.len(),
                "tool_version": run.provenance.tool_version,
                "parameter_ranges": run.provenance.parameter_ranges,
                "records": records,
            });
            serde_json::to_string_pretty(&doc).expect("run serializes")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;

    #[test]
    fn csv_shape() {
        let run = classify(2, 2).unwrap();
        let csv = export_table(&run, Format::Csv);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "id,params,c1_top,fano,moves");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("\"KL(2,{0})\","));
        assert!(csv.ends_with('\n'));
        assert!(!csv.contains(" \n"));
    }

    #[test]
    fn empty_run_is_header_only() {
        let mut run = classify(2, 2).unwrap();
        run.records.clear();
        let csv = export_table(&run, Format::Csv);
        assert_eq!(csv, "id,params,c1_top,fano,moves\n");
    }

    #[test]
    fn markdown_rows() {
        let run = classify(2, 3).unwrap();
        let md = export_table(&run, Format::Markdown);
        assert!(md.contains("| 2.BC-1 | ({1,1,1,1,1}, {0}, {}) | 7 |"));
    }
}
