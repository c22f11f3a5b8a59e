//! Best spelling of one measure under a fixed key.
//!
//! The search runs over a layered acyclic graph of configurations built on
//! the fly: layer `i` holds every configuration reachable after spelling the
//! first `i` notes, each tagged with the weight of a best path reaching it.
//! Configurations are merged on their full content, so the number of
//! vertices per layer stays small in practice.
//!
//! Three shapes of configuration exist:
//!
//! * `Initial`: the source, carrying the key signature's state;
//! * `Single`: after a note that is not simultaneous with the next one;
//! * `InChord`: inside a run of simultaneous notes. It carries the state as
//!   it was before the run (`frozen`), used to decide what is counted, and
//!   the names already given to pitch classes of the run, which enforces
//!   that equal pitch classes in a chord receive equal names.

use std::collections::HashMap;

use crate::input::NoteEvent;
use crate::pitch::{candidate_spellings, NameAcc};
use crate::state::{update_state, ChordNameMap, SpellingState};
use crate::tonality::Key;
use crate::weight::{Weight, WeightMode, WeightModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Configuration {
    Initial(SpellingState),
    Single(SpellingState),
    InChord {
        state: SpellingState,
        frozen: SpellingState,
        chord: ChordNameMap,
    },
}

impl Configuration {
    pub fn state(&self) -> SpellingState {
        match *self {
            Configuration::Initial(s) | Configuration::Single(s) => s,
            Configuration::InChord { state, .. } => state,
        }
    }
}

/// One outgoing edge of a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Successor {
    pub config: Configuration,
    pub spelling: NameAcc,
    pub counted: bool,
}

/// All transitions out of `cfg` when spelling `event`.
///
/// `chord_continues` says whether `event` is simultaneous with the note
/// after it; the caller forces it off for the last note of a measure.
pub fn step(cfg: &Configuration, event: &NoteEvent, chord_continues: bool) -> Vec<Successor> {
    let pc = event.midi.pitch_class();
    let mut out = Vec::with_capacity(3);
    for &(name, acc) in candidate_spellings(pc) {
        let (config, counted) = match *cfg {
            Configuration::Initial(s) | Configuration::Single(s) => {
                let (next, counted) = update_state(s, name, acc);
                let config = if chord_continues {
                    Configuration::InChord {
                        state: next,
                        frozen: s,
                        chord: ChordNameMap::single(pc, name),
                    }
                } else {
                    Configuration::Single(next)
                };
                (config, counted)
            }
            Configuration::InChord {
                state,
                frozen,
                chord,
            } => {
                if !chord.compatible(pc, name) {
                    continue;
                }
                let (next, _) = update_state(state, name, acc);
                let (chord, counted) = match chord.get(pc) {
                    Some(_) => (chord, false),
                    None => (chord.with(pc, name), frozen.get(name) != acc),
                };
                let config = if chord_continues {
                    Configuration::InChord {
                        state: next,
                        frozen,
                        chord,
                    }
                } else {
                    Configuration::Single(next)
                };
                (config, counted)
            }
        };
        out.push(Successor {
            config,
            spelling: (name, acc),
            counted,
        });
    }
    out
}

fn continues(notes: &[NoteEvent], i: usize) -> bool {
    i + 1 < notes.len() && notes[i].simultaneous_with_next
}

/// Result of spelling one measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureResult {
    pub cost: Weight,
    pub assignment: Vec<NameAcc>,
    /// Number of other minimal assignments discarded by tie-breaking.
    pub tie_count: u64,
}

impl MeasureResult {
    pub fn empty() -> Self {
        MeasureResult {
            cost: Weight::ZERO,
            assignment: Vec::new(),
            tie_count: 0,
        }
    }
}

#[derive(Clone, Debug)]
struct Node {
    config: Configuration,
    cost: Weight,
    back: usize,
    spelling: NameAcc,
    paths: u64,
}

/// Minimal-weight spelling of one measure's notes in `key`.
pub fn best_spelling(notes: &[NoteEvent], key: &Key, mode: WeightMode) -> MeasureResult {
    best_spelling_with(notes, &WeightModel::new(*key, mode))
}

pub fn best_spelling_with(notes: &[NoteEvent], model: &WeightModel) -> MeasureResult {
    if notes.is_empty() {
        return MeasureResult::empty();
    }
    let key = model.key();
    let mut layers: Vec<Vec<Node>> = Vec::with_capacity(notes.len() + 1);
    layers.push(vec![Node {
        config: Configuration::Initial(key.initial_state()),
        cost: Weight::ZERO,
        back: usize::MAX,
        spelling: candidate_spellings(notes[0].midi.pitch_class())[0],
        paths: 1,
    }]);

    for (i, event) in notes.iter().enumerate() {
        let chord_continues = continues(notes, i);
        let prev = layers.last().expect("source layer");
        let mut next: Vec<Node> = Vec::new();
        let mut index: HashMap<Configuration, usize> = HashMap::new();
        for (pi, node) in prev.iter().enumerate() {
            for succ in step(&node.config, event, chord_continues) {
                let cost = node.cost + model.edge(succ.counted, succ.spelling);
                match index.get(&succ.config) {
                    None => {
                        index.insert(succ.config, next.len());
                        next.push(Node {
                            config: succ.config,
                            cost,
                            back: pi,
                            spelling: succ.spelling,
                            paths: node.paths,
                        });
                    }
                    Some(&slot) => {
                        let existing = &mut next[slot];
                        match model.compare(&cost, &existing.cost) {
                            std::cmp::Ordering::Less => {
                                existing.cost = cost;
                                existing.back = pi;
                                existing.spelling = succ.spelling;
                                existing.paths = node.paths;
                            }
                            std::cmp::Ordering::Equal => {
                                existing.paths = existing.paths.saturating_add(node.paths);
                                if model.tie_rank(succ.spelling) < model.tie_rank(existing.spelling) {
                                    existing.cost = cost;
                                    existing.back = pi;
                                    existing.spelling = succ.spelling;
                                }
                            }
                            std::cmp::Ordering::Greater => {}
                        }
                    }
                }
            }
        }
        layers.push(next);
    }

    let last = layers.last().expect("target layer");
    let mut best = 0;
    for (i, node) in last.iter().enumerate().skip(1) {
        let b = &last[best];
        let ord = model
            .compare(&node.cost, &b.cost)
            .then_with(|| model.tie_rank(node.spelling).cmp(&model.tie_rank(b.spelling)));
        if ord == std::cmp::Ordering::Less {
            best = i;
        }
    }
    let best_cost = last[best].cost;
    let minimal_paths = last
        .iter()
        .filter(|n| model.compare(&n.cost, &best_cost).is_eq())
        .fold(0u64, |acc, n| acc.saturating_add(n.paths));

    let mut assignment = vec![last[best].spelling; notes.len()];
    let mut cursor = best;
    for layer in (1..layers.len()).rev() {
        let node = &layers[layer][cursor];
        assignment[layer - 1] = node.spelling;
        cursor = node.back;
    }

    MeasureResult {
        cost: best_cost,
        assignment,
        tie_count: minimal_paths.saturating_sub(1),
    }
}

/// Cost and per-note counted flags of a fixed assignment, following the
/// same transitions as the search. `None` when the assignment is not a
/// valid path: a spelling outside the candidates of its pitch class, or two
/// simultaneous notes of one pitch class with different names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replay {
    pub cost: Weight,
    pub counted: Vec<bool>,
}

pub fn replay(notes: &[NoteEvent], model: &WeightModel, assignment: &[NameAcc]) -> Option<Replay> {
    assert_eq!(notes.len(), assignment.len(), "one spelling per note");
    let mut cfg = Configuration::Initial(model.key().initial_state());
    let mut cost = Weight::ZERO;
    let mut counted = Vec::with_capacity(notes.len());
    for (i, (event, spelling)) in notes.iter().zip(assignment).enumerate() {
        let succ = step(&cfg, event, continues(notes, i))
            .into_iter()
            .find(|s| s.spelling == *spelling)?;
        cost += model.edge(succ.counted, succ.spelling);
        counted.push(succ.counted);
        cfg = succ.config;
    }
    Some(Replay { cost, counted })
}
