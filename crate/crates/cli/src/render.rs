//! Text renderings of an `M` sequence.

use rootfrac::{MSequence, MValue};
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Grid,
    Csv,
    JsonLines,
}

pub struct OutputSpec {
    pub format: Format,
    pub columns: usize,
    pub mark_n0: bool,
}

pub fn render(seq: &MSequence, spec: &OutputSpec) -> String {
    match spec.format {
        Format::Grid => grid(seq, spec.columns, spec.mark_n0),
        Format::Csv => csv(seq),
        Format::JsonLines => json_lines(seq),
    }
}

/// Space-separated rows of `columns` entries; `inf` for infinite values and
/// `[x]` around the entry at `N0` when `mark_n0` is set.
fn grid(seq: &MSequence, columns: usize, mark_n0: bool) -> String {
    let cells: Vec<String> = seq
        .iter()
        .map(|(n, v)| {
            if mark_n0 && n == seq.n0_marker {
                format!("[{v}]")
            } else {
                v.to_string()
            }
        })
        .collect();
    let mut out = String::new();
    for row in cells.chunks(columns.max(1)) {
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn csv(seq: &MSequence) -> String {
    let mut out = String::from("n,M\n");
    for (n, v) in seq.iter() {
        out.push_str(&format!("{n},{v}\n"));
    }
    out
}

fn json_lines(seq: &MSequence) -> String {
    let mut out = String::new();
    for (n, v) in seq.iter() {
        let line = match v {
            MValue::Finite(m) => json!({ "n": n, "m": m, "infinite": false }),
            MValue::Infinite => json!({ "n": n, "m": null, "infinite": true }),
        };
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}
