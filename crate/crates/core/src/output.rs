//! The spelled-note document and the textual table dump.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::part::{RowCost, SpelledPart};
use crate::pitch::{Accidental, NoteName};
use crate::tonality::Key;
use crate::weight::Weight;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputNote {
    pub midi: u8,
    pub bar: u32,
    pub name: NoteName,
    pub accidental: Accidental,
    pub octave: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCostEntry {
    pub key: Key,
    pub cost: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCosts {
    pub first: Vec<RowCostEntry>,
    pub refined: Vec<RowCostEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDiagnostics {
    pub algorithm: String,
    pub candidates: Vec<Key>,
    pub row_costs: RowCosts,
    pub tie_counts: Vec<u64>,
    pub rewrites: usize,
    pub printed_accidentals: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub global_key: Key,
    pub local_keys: Vec<Key>,
    pub notes: Vec<OutputNote>,
    pub diagnostics: OutputDiagnostics,
}

fn entries(rows: &[RowCost]) -> Vec<RowCostEntry> {
    rows.iter()
        .map(|r| RowCostEntry {
            key: r.key,
            cost: r.cost,
        })
        .collect()
}

impl OutputDocument {
    pub fn from_part(p: &SpelledPart) -> Self {
        OutputDocument {
            global_key: p.global_key,
            local_keys: p.local_keys.clone(),
            notes: p
                .notes
                .iter()
                .map(|n| OutputNote {
                    midi: n.midi.value(),
                    bar: n.bar,
                    name: n.spelling.name,
                    accidental: n.spelling.accidental,
                    octave: n.spelling.octave,
                })
                .collect(),
            diagnostics: OutputDiagnostics {
                algorithm: p.algorithm.label().to_string(),
                candidates: p.diagnostics.candidates.clone(),
                row_costs: RowCosts {
                    first: entries(&p.diagnostics.first_table),
                    refined: entries(&p.diagnostics.second_table),
                },
                tie_counts: p.diagnostics.tie_counts.clone(),
                rewrites: p.diagnostics.rewrites,
                printed_accidentals: p.diagnostics.printed_accidentals,
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }
}

fn dump_rows(out: &mut String, rows: &[RowCost]) {
    let width = rows.iter().map(|r| r.key.label().len() + 5).max().unwrap_or(0);
    out.push_str("Row Costs:\n");
    for r in rows {
        let label = format!("{} ({})", r.key.label(), r.key.signature);
        let _ = writeln!(out, "{label:<width$} cost {}", r.cost);
    }
}

/// Row-cost breakdowns of both tables in a plain text layout.
pub fn dump_tables(p: &SpelledPart) -> String {
    let name = p.algorithm.label();
    let mut out = format!("spelling {} notes\n", p.notes.len());
    let _ = writeln!(out, "{name}: first table");
    dump_rows(&mut out, &p.diagnostics.first_table);
    let _ = writeln!(out, "{name}: second table");
    dump_rows(&mut out, &p.diagnostics.second_table);
    let _ = writeln!(out, "estimated global key: {}", p.global_key);
    out
}
