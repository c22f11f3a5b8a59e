//! Note ingestion: the JSON note-list format, ordering, and simultaneity
//! flags for the note enumerator.

use std::cmp::Ordering;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::InputError;
use crate::pitch::MidiPitch;

/// A note with its measure and position inside the measure.
///
/// `onset` and `duration` are fractions of a measure. A zero duration marks
/// a grace note.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputNote {
    pub midi: MidiPitch,
    pub bar: u32,
    pub onset: Rational64,
    pub duration: Rational64,
    pub grace: bool,
}

impl InputNote {
    pub fn new(midi: MidiPitch, bar: u32, onset: Rational64, duration: Rational64) -> Self {
        InputNote {
            midi,
            bar,
            onset,
            duration,
            grace: duration == Rational64::from_integer(0),
        }
    }

    /// Convenience constructor from plain integers; panics on invalid MIDI.
    pub fn simple(midi: u8, bar: u32, onset: (i64, i64), duration: (i64, i64)) -> Self {
        InputNote::new(
            MidiPitch::new(midi as i64).expect("valid MIDI value"),
            bar,
            Rational64::new(onset.0, onset.1),
            Rational64::new(duration.0, duration.1),
        )
    }

    pub(crate) fn order_key(&self, other: &InputNote) -> Ordering {
        self.bar
            .cmp(&other.bar)
            .then(self.onset.cmp(&other.onset))
            .then(self.midi.cmp(&other.midi))
    }
}

/// A sequence of notes organized in measures, sorted by (bar, onset, midi).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    notes: Vec<InputNote>,
    measure_count: u32,
}

impl Part {
    /// Sorts the notes and infers the measure count when `measures` is `None`
    /// (or too small to hold every bar).
    pub fn new(mut notes: Vec<InputNote>, measures: Option<u32>) -> Self {
        notes.sort_by(|a, b| a.order_key(b));
        let needed = notes.iter().map(|n| n.bar + 1).max().unwrap_or(0);
        let measure_count = measures.map_or(needed, |m| m.max(needed));
        Part {
            notes,
            measure_count,
        }
    }

    pub fn notes(&self) -> &[InputNote] {
        &self.notes
    }

    pub fn measure_count(&self) -> u32 {
        self.measure_count
    }

    pub fn is_empty(&self) -> bool {
        self.notes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.notes.len()
    }
}

/// What the spelling algorithms consume: pitch, bar, and whether the note
/// starts together with the next one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NoteEvent {
    pub midi: MidiPitch,
    pub bar: u32,
    pub simultaneous_with_next: bool,
}

/// Notes in part order with their simultaneity flags. Grace notes are never
/// simultaneous with anything.
pub fn enumerate(part: &Part) -> Vec<NoteEvent> {
    let notes = part.notes();
    notes
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let simultaneous = notes.get(i + 1).is_some_and(|next| {
                next.bar == n.bar && next.onset == n.onset && !n.grace && !next.grace
            });
            NoteEvent {
                midi: n.midi,
                bar: n.bar,
                simultaneous_with_next: simultaneous,
            }
        })
        .collect()
}

/// Splits enumerated events into one slice per measure.
pub fn measures(events: &[NoteEvent], measure_count: u32) -> Vec<&[NoteEvent]> {
    let mut out = Vec::with_capacity(measure_count as usize);
    let mut start = 0;
    for bar in 0..measure_count {
        let end = start + events[start..].iter().take_while(|e| e.bar == bar).count();
        out.push(&events[start..end]);
        start = end;
    }
    debug_assert_eq!(start, events.len());
    out
}

#[derive(Serialize, Deserialize)]
pub(crate) struct NoteRecord {
    pub midi: i64,
    pub bar: i64,
    pub onset: [i64; 2],
    pub duration: [i64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grace: Option<bool>,
}

#[derive(Serialize, Deserialize)]
struct NoteListDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    measures: Option<i64>,
    notes: Vec<NoteRecord>,
}

fn fraction(index: usize, field: &str, v: [i64; 2]) -> Result<Rational64, InputError> {
    if v[1] <= 0 {
        return Err(InputError::record(index, format!("{field} denominator must be positive")));
    }
    let r = Rational64::new(v[0], v[1]);
    if r < Rational64::from_integer(0) {
        return Err(InputError::record(index, format!("negative {field}")));
    }
    Ok(r)
}

pub(crate) fn note_from_record(index: usize, r: &NoteRecord) -> Result<InputNote, InputError> {
    let midi = MidiPitch::new(r.midi).map_err(|e| InputError::record(index, e.to_string()))?;
    if r.bar < 0 || r.bar > u32::MAX as i64 {
        return Err(InputError::record(index, format!("bar {} out of range", r.bar)));
    }
    let onset = fraction(index, "onset", r.onset)?;
    if onset >= Rational64::from_integer(1) {
        return Err(InputError::record(index, "onset must be below one measure"));
    }
    let duration = fraction(index, "duration", r.duration)?;
    let note = InputNote::new(midi, r.bar as u32, onset, duration);
    if let Some(grace) = r.grace {
        if grace != note.grace {
            return Err(InputError::record(index, "grace flag disagrees with duration"));
        }
    }
    Ok(note)
}

/// Parses the JSON note-list format.
pub fn parse_notelist(text: &[u8]) -> Result<Part, InputError> {
    let doc: NoteListDoc = serde_json::from_slice(text)?;
    let measures = match doc.measures {
        Some(m) if m < 0 || m > u32::MAX as i64 => {
            return Err(InputError::record(0, format!("measure count {m} out of range")))
        }
        Some(m) => Some(m as u32),
        None => None,
    };
    let notes = doc
        .notes
        .iter()
        .enumerate()
        .map(|(i, r)| note_from_record(i, r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Part::new(notes, measures))
}

pub(crate) fn record_of(n: &InputNote) -> NoteRecord {
    NoteRecord {
        midi: n.midi.value() as i64,
        bar: n.bar as i64,
        onset: [*n.onset.numer(), *n.onset.denom()],
        duration: [*n.duration.numer(), *n.duration.denom()],
        grace: n.grace.then_some(true),
    }
}

/// Serializes a part back to the note-list format.
pub fn to_notelist(part: &Part) -> String {
    let doc = NoteListDoc {
        measures: Some(part.measure_count() as i64),
        notes: part.notes().iter().map(record_of).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("note list serializes")
}
