//! Whole-part spelling and key estimation.
//!
//! 1. Spell every measure in every key of the universe with the plain
//!    accidental weight (table T).
//! 2. Keep as global candidates the keys whose row total is within a
//!    relative margin of the best one.
//! 3. For each candidate, estimate one local key per measure by averaging
//!    three rankings of the universe: the measure's cost column, the Weber
//!    distance to the previous local key, and the Weber distance to the
//!    candidate itself (table G).
//! 4. Respell each candidate row with the refined weights against its local
//!    keys (table U), pick the best row as the global key and apply its
//!    spellings, then rewrite passing notes.

use rayon::prelude::*;

use crate::input::{enumerate, measures, NoteEvent, Part};
use crate::measure::{best_spelling_with, replay, MeasureResult};
use crate::pitch::{MidiPitch, NameAcc, Spelling};
use crate::ps13b;
use crate::rewrite::rewrite_pass;
use crate::tonality::{chromatic_harmonic_scale, weber_distance, Key, KeyRange, Mode};
use crate::weight::{Weight, WeightMode, WeightModel, WeightOrder};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Algorithm {
    /// Exhaustive per-measure search.
    #[default]
    Pse,
    /// Spellings forced to the chromatic harmonic scale of the operative key.
    Ps13b,
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pse" => Ok(Algorithm::Pse),
            "ps13b" => Ok(Algorithm::Ps13b),
            other => Err(format!("unknown algorithm {other:?} (expected pse or ps13b)")),
        }
    }
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Pse => "PSE",
            Algorithm::Ps13b => "PS13b",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpellerConfig {
    pub key_range: KeyRange,
    /// Relative slack over the best row total admitted as a global candidate.
    pub margin: f64,
    pub order: WeightOrder,
    pub algorithm: Algorithm,
}

impl Default for SpellerConfig {
    fn default() -> Self {
        SpellerConfig {
            key_range: KeyRange::default(),
            margin: 0.2,
            order: WeightOrder::Sum,
            algorithm: Algorithm::Pse,
        }
    }
}

/// One row of a spelling table: a key and its per-measure results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    /// Index of the key in the key universe.
    pub key_index: usize,
    pub key: Key,
    pub cells: Vec<MeasureResult>,
}

impl TableRow {
    pub fn total(&self) -> Weight {
        self.cells.iter().map(|c| c.cost).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpellingTable {
    pub rows: Vec<TableRow>,
}

impl SpellingTable {
    pub fn measure_count(&self) -> usize {
        self.rows.first().map_or(0, |r| r.cells.len())
    }

    pub fn row_for(&self, key_index: usize) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.key_index == key_index)
    }
}

fn spell_cell(
    notes: &[NoteEvent],
    key: &Key,
    mode: WeightMode,
    algorithm: Algorithm,
    forced: &Key,
) -> MeasureResult {
    let model = WeightModel::new(*key, mode);
    match algorithm {
        Algorithm::Pse => best_spelling_with(notes, &model),
        Algorithm::Ps13b => ps13b::forced_cell(notes, &model, &chromatic_harmonic_scale(forced)),
    }
}

/// Table T over `keys`, using the plain accidental weight.
pub fn build_table(measures: &[&[NoteEvent]], keys: &[Key], algorithm: Algorithm) -> SpellingTable {
    let rows = keys
        .par_iter()
        .enumerate()
        .map(|(i, key)| TableRow {
            key_index: i,
            key: *key,
            cells: measures
                .iter()
                .map(|m| spell_cell(m, key, WeightMode::Scalar, algorithm, key))
                .collect(),
        })
        .collect();
    SpellingTable { rows }
}

/// Row indices into the key universe, best first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateList(pub Vec<usize>);

impl CandidateList {
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Rows whose accidental total is at most `best * (1 + margin)`.
pub fn candidate_globals(table: &SpellingTable, margin: f64) -> CandidateList {
    let totals: Vec<(u32, usize)> = table
        .rows
        .iter()
        .map(|r| (r.total().accid, r.key_index))
        .collect();
    let Some(best) = totals.iter().map(|t| t.0).min() else {
        return CandidateList(Vec::new());
    };
    let bound = best as f64 * (1.0 + margin.max(0.0));
    let mut kept: Vec<(u32, usize)> = totals
        .into_iter()
        .filter(|&(sum, _)| sum == best || (sum as f64) <= bound)
        .collect();
    kept.sort();
    CandidateList(kept.into_iter().map(|t| t.1).collect())
}

/// Fractional ranks (1 = best, ascending values); ties share the mean position.
#[derive(Clone, Debug, PartialEq)]
pub struct Ranking(pub Vec<f64>);

impl Ranking {
    pub fn rank(&self, i: usize) -> f64 {
        self.0[i]
    }
}

pub fn rank_by_value<T: Ord>(values: &[T]) -> Ranking {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end share their mean
        let mean = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = mean;
        }
        start = end;
    }
    Ranking(ranks)
}

/// Estimated local keys, one row per global candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalKeyGrid {
    pub rows: Vec<(usize, Vec<Key>)>,
}

impl LocalKeyGrid {
    pub fn row(&self, key_index: usize) -> Option<&[Key]> {
        self.rows
            .iter()
            .find(|(i, _)| *i == key_index)
            .map(|(_, keys)| keys.as_slice())
    }
}

/// Index of the best local key for column `costs`, given the candidate
/// global key and the previous local key.
pub fn aggregate_local_key(keys: &[Key], costs: &[u32], global: &Key, previous: &Key) -> usize {
    let to_previous: Vec<u8> = keys.iter().map(|k| weber_distance(k, previous)).collect();
    let to_global: Vec<u8> = keys.iter().map(|k| weber_distance(k, global)).collect();
    let by_cost = rank_by_value(costs);
    let by_previous = rank_by_value(&to_previous);
    let by_global = rank_by_value(&to_global);
    let score = |i: usize| by_cost.rank(i) + by_previous.rank(i) + by_global.rank(i);
    (0..keys.len())
        .min_by(|&a, &b| {
            score(a)
                .total_cmp(&score(b))
                .then(by_cost.rank(a).total_cmp(&by_cost.rank(b)))
                .then(to_global[a].cmp(&to_global[b]))
                .then(a.cmp(&b))
        })
        .expect("nonempty key universe")
}

/// Table G restricted to the candidate rows.
pub fn local_key_grid(table: &SpellingTable, candidates: &CandidateList) -> LocalKeyGrid {
    let keys: Vec<Key> = table.rows.iter().map(|r| r.key).collect();
    let columns: Vec<Vec<u32>> = (0..table.measure_count())
        .map(|j| table.rows.iter().map(|r| r.cells[j].cost.accid).collect())
        .collect();
    let rows = candidates
        .0
        .par_iter()
        .map(|&i| {
            let global = keys[i];
            let mut previous = global;
            let locals = columns
                .iter()
                .map(|column| {
                    let best = keys[aggregate_local_key(&keys, column, &global, &previous)];
                    previous = best;
                    best
                })
                .collect();
            (i, locals)
        })
        .collect();
    LocalKeyGrid { rows }
}

/// Table U: candidate rows respelled with refined weights against their local keys.
pub fn build_refined_table(
    measures: &[&[NoteEvent]],
    keys: &[Key],
    candidates: &CandidateList,
    grid: &LocalKeyGrid,
    order: WeightOrder,
    algorithm: Algorithm,
) -> SpellingTable {
    let rows = candidates
        .0
        .par_iter()
        .map(|&i| {
            let key = keys[i];
            let locals = grid.row(i).expect("grid covers every candidate");
            let cells = measures
                .iter()
                .zip(locals)
                .map(|(m, local)| {
                    let mode = WeightMode::Tuple {
                        order,
                        local_key: *local,
                        global_ks: key.signature,
                    };
                    spell_cell(m, &key, mode, algorithm, local)
                })
                .collect();
            TableRow {
                key_index: i,
                key,
                cells,
            }
        })
        .collect();
    SpellingTable { rows }
}

/// Position in `refined.rows` of the selected global key.
pub fn select_global(refined: &SpellingTable, order: WeightOrder) -> Option<usize> {
    let mode_rank = |m: Mode| match m {
        Mode::Major => 0,
        Mode::Minor => 1,
    };
    let totals: Vec<Weight> = refined.rows.iter().map(TableRow::total).collect();
    (0..refined.rows.len()).min_by(|&a, &b| {
        let (ra, rb) = (&refined.rows[a], &refined.rows[b]);
        order
            .compare(&totals[a], &totals[b])
            .then(ra.key.signature.count().abs().cmp(&rb.key.signature.count().abs()))
            .then(mode_rank(ra.key.mode).cmp(&mode_rank(rb.key.mode)))
            .then(ra.key_index.cmp(&rb.key_index))
    })
}

/// A spelled output note.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpelledNote {
    pub midi: MidiPitch,
    pub bar: u32,
    pub spelling: Spelling,
    /// Spelling chosen by the table, before passing-note rewriting.
    pub table_spelling: Spelling,
    pub simultaneous_with_next: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowCost {
    pub key: Key,
    pub cost: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Diagnostics {
    pub candidates: Vec<Key>,
    /// Step-1 row totals. `dist` is always zero: no local keys exist yet.
    pub first_table: Vec<RowCost>,
    /// Step-4 row totals for the candidates.
    pub second_table: Vec<RowCost>,
    /// Per-measure tie counts of the selected row.
    pub tie_counts: Vec<u64>,
    /// Sum of tie counts over every cell of both tables.
    pub total_ties: u64,
    pub rewrites: usize,
    /// Printed accidentals of the final spelling under the global signature.
    pub printed_accidentals: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpelledPart {
    pub algorithm: Algorithm,
    pub notes: Vec<SpelledNote>,
    pub global_key: Key,
    pub local_keys: Vec<Key>,
    pub diagnostics: Diagnostics,
}

/// Intermediate tables kept for inspection and tests.
#[derive(Clone, Debug)]
pub struct PipelineTrace {
    pub keys: Vec<Key>,
    pub first: SpellingTable,
    pub candidates: CandidateList,
    pub grid: LocalKeyGrid,
    pub refined: SpellingTable,
    pub selected: usize,
}

/// Step-1 breakdown of a row: components measured against the row key itself.
fn first_table_breakdown(measures: &[&[NoteEvent]], row: &TableRow) -> Weight {
    let model = WeightModel::new(
        row.key,
        WeightMode::Tuple {
            order: WeightOrder::Lex,
            local_key: row.key,
            global_ks: row.key.signature,
        },
    );
    let mut total = Weight::ZERO;
    for (m, cell) in measures.iter().zip(&row.cells) {
        let r = replay(m, &model, &cell.assignment).expect("table assignment replays");
        total += r.cost;
    }
    total.dist = 0;
    total
}

pub fn run_pipeline(events: &[NoteEvent], measure_count: u32, config: &SpellerConfig) -> PipelineTrace {
    let keys = config.key_range.keys();
    let bars = measures(events, measure_count);
    let first = build_table(&bars, &keys, config.algorithm);
    let candidates = candidate_globals(&first, config.margin);
    let grid = local_key_grid(&first, &candidates);
    let refined = build_refined_table(&bars, &keys, &candidates, &grid, config.order, config.algorithm);
    let selected = select_global(&refined, config.order).expect("at least one candidate");
    PipelineTrace {
        keys,
        first,
        candidates,
        grid,
        refined,
        selected,
    }
}

/// Spells a part and estimates its global and local keys.
pub fn spell_part(part: &Part, config: &SpellerConfig) -> SpelledPart {
    let events = enumerate(part);
    let trace = run_pipeline(&events, part.measure_count(), config);
    assemble(&events, part.measure_count(), config, &trace)
}

fn assemble(events: &[NoteEvent], measure_count: u32, config: &SpellerConfig, trace: &PipelineTrace) -> SpelledPart {
    let bars = measures(events, measure_count);
    let row = &trace.refined.rows[trace.selected];
    let global_key = row.key;
    let local_keys = trace
        .grid
        .row(row.key_index)
        .expect("selected row has local keys")
        .to_vec();

    let names: Vec<NameAcc> = row.cells.iter().flat_map(|c| c.assignment.iter().copied()).collect();
    debug_assert_eq!(names.len(), events.len());
    let table_spellings: Vec<Spelling> = events
        .iter()
        .zip(&names)
        .map(|(e, &(n, a))| Spelling::for_midi(e.midi, n, a).expect("candidate spelling fits MIDI range"))
        .collect();
    let mut spellings = table_spellings.clone();
    let midis: Vec<MidiPitch> = events.iter().map(|e| e.midi).collect();
    let simultaneous: Vec<bool> = events.iter().map(|e| e.simultaneous_with_next).collect();
    let rewrites = rewrite_pass(&midis, &mut spellings, &simultaneous);

    let printed_accidentals = printed_accidentals(&bars, &global_key, &spellings);

    let notes = events
        .iter()
        .zip(spellings.iter().zip(&table_spellings))
        .map(|(e, (&spelling, &table_spelling))| SpelledNote {
            midi: e.midi,
            bar: e.bar,
            spelling,
            table_spelling,
            simultaneous_with_next: e.simultaneous_with_next,
        })
        .collect();

    let total_ties = trace
        .first
        .rows
        .iter()
        .chain(&trace.refined.rows)
        .flat_map(|r| r.cells.iter().map(|c| c.tie_count))
        .fold(0u64, u64::saturating_add);

    let diagnostics = Diagnostics {
        candidates: trace.candidates.iter().map(|i| trace.keys[i]).collect(),
        first_table: trace
            .first
            .rows
            .iter()
            .map(|r| RowCost {
                key: r.key,
                cost: first_table_breakdown(&bars, r),
            })
            .collect(),
        second_table: trace
            .refined
            .rows
            .iter()
            .map(|r| RowCost {
                key: r.key,
                cost: r.total(),
            })
            .collect(),
        tie_counts: row.cells.iter().map(|c| c.tie_count).collect(),
        total_ties,
        rewrites,
        printed_accidentals,
    };

    SpelledPart {
        algorithm: config.algorithm,
        notes,
        global_key,
        local_keys,
        diagnostics,
    }
}

/// Number of accidentals printed for `spellings` under `key`'s signature,
/// measure by measure.
pub fn printed_accidentals(bars: &[&[NoteEvent]], key: &Key, spellings: &[Spelling]) -> u32 {
    let model = WeightModel::new(*key, WeightMode::Scalar);
    let mut offset = 0;
    let mut printed = 0;
    for bar in bars {
        let names: Vec<NameAcc> = spellings[offset..offset + bar.len()].iter().map(Spelling::name_acc).collect();
        offset += bar.len();
        if let Some(r) = replay(bar, &model, &names) {
            printed += r.counted.iter().filter(|&&c| c).count() as u32;
        }
    }
    printed
}
