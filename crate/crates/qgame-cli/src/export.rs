//! Report export: aligned text tables, CSV, and JSON lines.

use serde_json::{json, Value};

use crate::report::{Comparison, FixtureComparison, NashResults, ReportDocument, Results};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    TextTable,
    Csv,
    JsonLines,
}

pub fn export(doc: &ReportDocument, format: Format) -> String {
    match format {
        Format::TextTable => to_text(doc),
        Format::Csv => to_csv(doc),
        Format::JsonLines => to_json_lines(doc),
    }
}

// ---------------------------------------------------------------------
// json-lines

/// The document as a list of self-describing records, each carrying a
/// `kind` discriminator. Floats were already rounded to 12 significant
/// digits when the report was built.
pub fn document_records(doc: &ReportDocument) -> Vec<Value> {
    let mut records = Vec::new();
    if let Some(scenario) = &doc.scenario {
        let mut rec = json!({ "kind": "scenario" });
        rec["config"] = serde_json::to_value(scenario).expect("config serializes");
        records.push(rec);
    }
    match &doc.results {
        Results::PayoffEval(r) => {
            let mut rec = serde_json::to_value(r).expect("results serialize");
            rec["kind"] = json!("payoff_eval");
            records.push(rec);
        }
        Results::NashSearch(r) => push_nash_records(&mut records, r, None),
        Results::CorruptedSweep { entries } => {
            for entry in entries {
                push_nash_records(&mut records, &entry.results, Some(entry.p));
            }
        }
        Results::ExtendedMatrix(r) => {
            for cell in &r.cells {
                let mut rec = serde_json::to_value(cell).expect("cell serializes");
                rec["kind"] = json!("extended_cell");
                records.push(rec);
            }
        }
        Results::ClassicalAnalysis(r) => {
            let mut rec = serde_json::to_value(r).expect("results serialize");
            rec["kind"] = json!("classical_analysis");
            records.push(rec);
        }
        Results::Reproduction { .. } => {}
    }
    if let Some(fix) = &doc.fixture_comparison {
        for cmp in &fix.comparisons {
            let mut rec = serde_json::to_value(cmp).expect("comparison serializes");
            rec["kind"] = json!("fixture_check");
            records.push(rec);
        }
        records.push(json!({
            "kind": "fixture_summary",
            "target": fix.target,
            "pass": fix.pass,
        }));
    }
    records.push(json!({
        "kind": "runtime",
        "elapsed_ms": doc.runtime.elapsed_ms,
    }));
    records
}

fn push_nash_records(records: &mut Vec<Value>, r: &NashResults, p: Option<f64>) {
    let mut summary = json!({
        "kind": "nash_summary",
        "count": r.equilibria.len(),
        "unique": r.unique,
        "flat": r.flat,
        "dilemma": r.dilemma,
    });
    if let Some(p) = p {
        summary["p"] = json!(p);
    }
    if let (Some(a), Some(b)) = (r.flat_payoff_a, r.flat_payoff_b) {
        summary["flat_payoff_a"] = json!(a);
        summary["flat_payoff_b"] = json!(b);
    }
    records.push(summary);
    for ne in &r.equilibria {
        let mut rec = serde_json::to_value(ne).expect("equilibrium serializes");
        rec["kind"] = json!("equilibrium");
        if let Some(p) = p {
            rec["p"] = json!(p);
        }
        records.push(rec);
    }
}

pub fn to_json_lines(doc: &ReportDocument) -> String {
    let mut out = String::new();
    for rec in document_records(doc) {
        out.push_str(&rec.to_string());
        out.push('\n');
    }
    out
}

/// Parse a JSON-lines stream back into records.
pub fn parse_json_lines(text: &str) -> Result<Vec<Value>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

// ---------------------------------------------------------------------
// csv

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn csv_row(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| csv_escape(f))
        .collect::<Vec<_>>()
        .join(",")
}

fn nash_csv(out: &mut Vec<String>, r: &NashResults, p: Option<f64>) {
    for ne in &r.equilibria {
        let mut fields = Vec::new();
        if let Some(p) = p {
            fields.push(p.to_string());
        }
        fields.extend([
            ne.player_a_params.clone(),
            ne.player_b_params.clone(),
            ne.payoff_a.to_string(),
            ne.payoff_b.to_string(),
            ne.gap_a.to_string(),
            ne.gap_b.to_string(),
            ne.certified.to_string(),
        ]);
        out.push(csv_row(&fields));
    }
}

pub fn to_csv(doc: &ReportDocument) -> String {
    let mut lines: Vec<String> = Vec::new();
    match &doc.results {
        Results::PayoffEval(r) => {
            lines.push(String::from("p00,p01,p10,p11,payoff_a,payoff_b"));
            lines.push(csv_row(&[
                r.p00.to_string(),
                r.p01.to_string(),
                r.p10.to_string(),
                r.p11.to_string(),
                r.payoff_a.to_string(),
                r.payoff_b.to_string(),
            ]));
        }
        Results::NashSearch(r) => {
            lines.push(String::from(
                "player_a_params,player_b_params,payoff_a,payoff_b,gap_a,gap_b,certified",
            ));
            if r.flat {
                lines.push(csv_row(&[
                    String::from("(flat)"),
                    String::from("(flat)"),
                    r.flat_payoff_a.unwrap_or(0.0).to_string(),
                    r.flat_payoff_b.unwrap_or(0.0).to_string(),
                    String::from("0"),
                    String::from("0"),
                    String::from("true"),
                ]));
            }
            nash_csv(&mut lines, r, None);
        }
        Results::CorruptedSweep { entries } => {
            lines.push(String::from(
                "p,player_a_params,player_b_params,payoff_a,payoff_b,gap_a,gap_b,certified",
            ));
            for entry in entries {
                nash_csv(&mut lines, &entry.results, Some(entry.p));
            }
        }
        Results::ExtendedMatrix(r) => {
            lines.push(String::from("row,col,payoff_a,payoff_b,ne"));
            for cell in &r.cells {
                lines.push(csv_row(&[
                    cell.row.clone(),
                    cell.col.clone(),
                    cell.payoff_a.to_string(),
                    cell.payoff_b.to_string(),
                    cell.ne.to_string(),
                ]));
            }
        }
        Results::ClassicalAnalysis(r) => {
            lines.push(String::from(
                "symmetric,zero_sum,coordination,pure_ne,mixed_p,mixed_q,mixed_payoff_a,mixed_payoff_b,dilemma",
            ));
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            lines.push(csv_row(&[
                r.symmetric.to_string(),
                r.zero_sum.to_string(),
                r.coordination.to_string(),
                format!("{:?}", r.pure_ne),
                opt(r.mixed_p),
                opt(r.mixed_q),
                opt(r.mixed_payoff_a),
                opt(r.mixed_payoff_b),
                r.dilemma.clone(),
            ]));
        }
        Results::Reproduction { .. } => {}
    }
    if let Some(fix) = &doc.fixture_comparison {
        if lines.is_empty() {
            lines.push(comparison_csv_header());
        } else {
            lines.push(String::new());
            lines.push(comparison_csv_header());
        }
        for cmp in &fix.comparisons {
            lines.push(comparison_csv_row(cmp));
        }
    }
    lines.join("\n") + "\n"
}

pub fn comparison_csv_header() -> String {
    String::from("location,expected,actual,abs_dev,tolerance,pass")
}

pub fn comparison_csv_row(cmp: &Comparison) -> String {
    csv_row(&[
        cmp.location.clone(),
        cmp.expected.clone(),
        cmp.actual.clone(),
        cmp.abs_dev.map(|d| format!("{d:e}")).unwrap_or_default(),
        cmp.tolerance.map(|t| format!("{t:e}")).unwrap_or_default(),
        cmp.pass.to_string(),
    ])
}

/// Reproduction-only CSV: one row per comparison.
pub fn comparisons_to_csv(fixtures: &[FixtureComparison]) -> String {
    let mut lines = vec![comparison_csv_header()];
    for fix in fixtures {
        for cmp in &fix.comparisons {
            lines.push(comparison_csv_row(cmp));
        }
    }
    lines.join("\n") + "\n"
}

// ---------------------------------------------------------------------
// text tables

fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut widths = vec![0usize; cols];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{cell:<width$}", width = widths[i]));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn nash_text(out: &mut String, r: &NashResults, heading: &str) {
    out.push_str(heading);
    out.push('\n');
    if r.flat {
        out.push_str(&format!(
            "  flat game: every profile pays ({}, {})  dilemma {}\n",
            r.flat_payoff_a.unwrap_or(0.0),
            r.flat_payoff_b.unwrap_or(0.0),
            r.dilemma
        ));
        return;
    }
    out.push_str(&format!(
        "  {} certified equilibria, unique = {}, dilemma = {}\n",
        r.equilibria.len(),
        r.unique,
        r.dilemma
    ));
    let mut rows = vec![vec![
        String::from("  player_a"),
        String::from("player_b"),
        String::from("payoff_a"),
        String::from("payoff_b"),
        String::from("gap_a"),
        String::from("gap_b"),
    ]];
    for ne in &r.equilibria {
        rows.push(vec![
            format!("  {}", ne.player_a_params),
            ne.player_b_params.clone(),
            ne.payoff_a.to_string(),
            ne.payoff_b.to_string(),
            format!("{:.2e}", ne.gap_a),
            format!("{:.2e}", ne.gap_b),
        ]);
    }
    out.push_str(&align(&rows));
}

pub fn to_text(doc: &ReportDocument) -> String {
    let mut out = String::new();
    match &doc.results {
        Results::PayoffEval(r) => {
            out.push_str("payoff evaluation\n");
            out.push_str(&align(&[
                vec![
                    String::from("  P00"),
                    String::from("P01"),
                    String::from("P10"),
                    String::from("P11"),
                    String::from("payoff_a"),
                    String::from("payoff_b"),
                ],
                vec![
                    format!("  {}", r.p00),
                    r.p01.to_string(),
                    r.p10.to_string(),
                    r.p11.to_string(),
                    r.payoff_a.to_string(),
                    r.payoff_b.to_string(),
                ],
            ]));
        }
        Results::NashSearch(r) => nash_text(&mut out, r, "equilibrium search"),
        Results::CorruptedSweep { entries } => {
            for entry in entries {
                nash_text(
                    &mut out,
                    &entry.results,
                    &format!("corrupted source, p = {}", entry.p),
                );
            }
        }
        Results::ExtendedMatrix(r) => {
            out.push_str("extended payoff matrix (* marks equilibria)\n");
            let mut rows = Vec::new();
            let mut header = vec![String::from("  ")];
            header.extend(r.col_labels.iter().cloned());
            rows.push(header);
            for row_label in &r.row_labels {
                let mut line = vec![format!("  {row_label}")];
                for col_label in &r.col_labels {
                    let cell = r
                        .cells
                        .iter()
                        .find(|c| &c.row == row_label && &c.col == col_label)
                        .expect("cell exists");
                    let mark = if cell.ne { "*" } else { "" };
                    line.push(format!("({}, {}){mark}", cell.payoff_a, cell.payoff_b));
                }
                rows.push(line);
            }
            out.push_str(&align(&rows));
        }
        Results::ClassicalAnalysis(r) => {
            out.push_str("classical analysis\n");
            out.push_str(&format!(
                "  symmetric = {}, zero_sum = {}, coordination = {}\n",
                r.symmetric, r.zero_sum, r.coordination
            ));
            out.push_str(&format!("  pure equilibria: {:?}\n", r.pure_ne));
            match (r.mixed_p, r.mixed_q) {
                (Some(p), Some(q)) => out.push_str(&format!(
                    "  mixed equilibrium: (p, q) = ({p}, {q}) paying ({}, {})  dilemma {}\n",
                    r.mixed_payoff_a.unwrap_or(0.0),
                    r.mixed_payoff_b.unwrap_or(0.0),
                    r.dilemma
                )),
                _ => out.push_str(&format!(
                    "  no interior mixed equilibrium (degenerate = {})\n",
                    r.degenerate
                )),
            }
        }
        Results::Reproduction { .. } => {}
    }
    if let Some(fix) = &doc.fixture_comparison {
        out.push_str(&comparison_text(fix));
    }
    out.push_str(&format!("runtime: {} ms\n", doc.runtime.elapsed_ms));
    out
}

pub fn comparison_text(fix: &FixtureComparison) -> String {
    let mut out = format!(
        "fixture {}: {}\n",
        fix.target,
        if fix.pass { "PASS" } else { "FAIL" }
    );
    let mut rows = vec![vec![
        String::from("  status"),
        String::from("location"),
        String::from("expected"),
        String::from("actual"),
        String::from("dev"),
    ]];
    for cmp in &fix.comparisons {
        rows.push(vec![
            format!("  {}", if cmp.pass { "ok" } else { "FAIL" }),
            cmp.location.clone(),
            cmp.expected.clone(),
            cmp.actual.clone(),
            cmp.abs_dev.map(|d| format!("{d:.2e}")).unwrap_or_default(),
        ]);
    }
    out.push_str(&align(&rows));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{PayoffEvalResults, ReportDocument, Results, RuntimeStats};

    fn sample_doc() -> ReportDocument {
        ReportDocument {
            scenario: None,
            results: Results::PayoffEval(PayoffEvalResults {
                p00: 1.0,
                p01: 0.0,
                p10: 0.0,
                p11: 0.0,
                payoff_a: 3.0,
                payoff_b: 2.0,
            }),
            fixture_comparison: None,
            runtime: RuntimeStats { elapsed_ms: 5 },
        }
    }

    #[test]
    fn json_lines_round_trips() {
        let doc = sample_doc();
        let text = to_json_lines(&doc);
        let parsed = parse_json_lines(&text).unwrap();
        assert_eq!(parsed, document_records(&doc));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let doc = sample_doc();
        let csv = to_csv(&doc);
        let lines: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("p00,"));
        assert!(lines[1].starts_with("1,0,0,0,3,2"));
    }

    #[test]
    fn csv_escapes_commas() {
        assert_eq!(csv_escape("a,b"), "\"a,b\"");
        assert_eq!(csv_escape("plain"), "plain");
    }
}
