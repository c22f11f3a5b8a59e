//! Comparison of estimated spellings against a reference spelling.

use serde::{Deserialize, Serialize};

use crate::error::{EvalError, InputError};
use crate::input::{note_from_record, record_of, InputNote, NoteRecord, Part};
use crate::part::SpelledPart;
use crate::pitch::{accidental_for, is_candidate, spelling_to_midi, Accidental, NoteName, Spelling};
use crate::tonality::{signatures_enharmonic, Key, KeySignature};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTruthNote {
    pub note: InputNote,
    pub expected: Spelling,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTruth {
    pub key_signature: KeySignature,
    pub measures: Option<u32>,
    /// Sorted in enumeration order.
    pub notes: Vec<GroundTruthNote>,
}

#[derive(Serialize, Deserialize)]
struct TruthRecord {
    #[serde(flatten)]
    note: NoteRecord,
    name: NoteName,
    accidental: Accidental,
    octave: i8,
}

#[derive(Serialize, Deserialize)]
struct TruthDoc {
    key_signature: KeySignature,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    measures: Option<u32>,
    notes: Vec<TruthRecord>,
}

impl GroundTruth {
    pub fn new(key_signature: KeySignature, measures: Option<u32>, mut notes: Vec<GroundTruthNote>) -> Self {
        notes.sort_by(|a, b| a.note.order_key(&b.note));
        GroundTruth {
            key_signature,
            measures,
            notes,
        }
    }

    /// The notes without their spellings, as speller input.
    pub fn part(&self) -> Part {
        Part::new(self.notes.iter().map(|n| n.note.clone()).collect(), self.measures)
    }

    pub fn to_json(&self) -> String {
        let doc = TruthDoc {
            key_signature: self.key_signature,
            measures: self.measures,
            notes: self
                .notes
                .iter()
                .map(|n| TruthRecord {
                    note: record_of(&n.note),
                    name: n.expected.name,
                    accidental: n.expected.accidental,
                    octave: n.expected.octave,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("ground truth serializes")
    }
}

pub fn parse_ground_truth(bytes: &[u8]) -> Result<GroundTruth, EvalError> {
    let doc: TruthDoc = serde_json::from_slice(bytes).map_err(InputError::from)?;
    let mut notes = Vec::with_capacity(doc.notes.len());
    for (index, r) in doc.notes.iter().enumerate() {
        let note = note_from_record(index, &r.note)?;
        let expected = Spelling::new(r.name, r.accidental, r.octave)
            .map_err(|source| EvalError::Spelling { index, source })?;
        match spelling_to_midi(&expected) {
            Ok(m) if m == note.midi => {}
            _ => {
                return Err(EvalError::Spelling {
                    index,
                    source: crate::error::PitchError::Incompatible {
                        midi: note.midi.value(),
                        name: expected.name,
                        alteration: expected.accidental.alteration(),
                    },
                })
            }
        }
        notes.push(GroundTruthNote { note, expected });
    }
    Ok(GroundTruth::new(doc.key_signature, doc.measures, notes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoteMismatch {
    pub index: usize,
    pub midi: u8,
    pub bar: u32,
    pub expected: String,
    pub estimated: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub note_count: usize,
    pub correct_count: usize,
    pub spelling_accuracy: f64,
    pub expected_signature: KeySignature,
    pub estimated_key: Key,
    pub ks_correct: bool,
    pub enharmonic_renamed: bool,
    pub grace_count: usize,
    pub grace_correct: usize,
    /// Notes whose name and accidental match but whose octave does not.
    pub octave_mismatches: usize,
    pub errors: Vec<NoteMismatch>,
    pub local_keys: Vec<Key>,
}

impl EvalReport {
    pub fn is_perfect(&self) -> bool {
        self.correct_count == self.note_count && self.ks_correct
    }
}

/// Renames `s` by one letter in the direction that moves from the `from`
/// signature to its enharmonic `to`, keeping the pitch. Out-of-table results
/// leave the spelling unchanged.
pub fn rename_enharmonic(s: Spelling, from: KeySignature, to: KeySignature) -> Spelling {
    let steps = match to.count() - from.count() {
        12 => -1,
        -12 => 1,
        _ => return s,
    };
    let Ok(midi) = spelling_to_midi(&s) else {
        return s;
    };
    let name = s.name.shifted(steps);
    let pc = midi.pitch_class();
    accidental_for(name, pc)
        .filter(|&a| is_candidate(pc, (name, a)))
        .and_then(|a| Spelling::for_midi(midi, name, a).ok())
        .unwrap_or(s)
}

/// Whether the reference should be renamed into the estimated key: the
/// estimate is enharmonic to the expected signature, and every global
/// candidate was the expected signature or its enharmonic.
pub fn should_rename(expected: KeySignature, estimated: KeySignature, candidates: &[Key]) -> bool {
    signatures_enharmonic(expected, estimated)
        && !candidates.is_empty()
        && candidates
            .iter()
            .all(|k| k.signature == expected || signatures_enharmonic(k.signature, expected))
}

pub fn evaluate(truth: &GroundTruth, spelled: &SpelledPart) -> Result<EvalReport, EvalError> {
    if truth.notes.len() != spelled.notes.len() {
        return Err(EvalError::CountMismatch {
            input: spelled.notes.len(),
            truth: truth.notes.len(),
        });
    }
    for (index, (t, s)) in truth.notes.iter().zip(&spelled.notes).enumerate() {
        if t.note.midi != s.midi {
            return Err(EvalError::MidiMismatch {
                index,
                input: s.midi.value(),
                truth: t.note.midi.value(),
            });
        }
    }

    let estimated = spelled.global_key.signature;
    let renamed = should_rename(truth.key_signature, estimated, &spelled.diagnostics.candidates);

    let mut report = EvalReport {
        note_count: truth.notes.len(),
        correct_count: 0,
        spelling_accuracy: 1.0,
        expected_signature: truth.key_signature,
        estimated_key: spelled.global_key,
        ks_correct: estimated == truth.key_signature,
        enharmonic_renamed: renamed,
        grace_count: 0,
        grace_correct: 0,
        octave_mismatches: 0,
        errors: Vec::new(),
        local_keys: spelled.local_keys.clone(),
    };
    for (index, (t, s)) in truth.notes.iter().zip(&spelled.notes).enumerate() {
        let expected = if renamed {
            rename_enharmonic(t.expected, truth.key_signature, estimated)
        } else {
            t.expected
        };
        let ok = expected.name_acc() == s.spelling.name_acc();
        if t.note.grace {
            report.grace_count += 1;
            report.grace_correct += ok as usize;
        }
        if ok {
            report.correct_count += 1;
            if expected.octave != s.spelling.octave {
                report.octave_mismatches += 1;
            }
        } else {
            report.errors.push(NoteMismatch {
                index,
                midi: s.midi.value(),
                bar: s.bar,
                expected: expected.to_string(),
                estimated: s.spelling.to_string(),
            });
        }
    }
    if report.note_count > 0 {
        report.spelling_accuracy = report.correct_count as f64 / report.note_count as f64;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ks(k: i8) -> KeySignature {
        KeySignature::new(k).unwrap()
    }

    #[test]
    fn renaming_db_to_csharp() {
        let db = Spelling::new(NoteName::D, Accidental::FLAT, 4).unwrap();
        let cs = rename_enharmonic(db, ks(-5), ks(7));
        assert_eq!(cs, Spelling::new(NoteName::C, Accidental::SHARP, 4).unwrap());
        let f = Spelling::new(NoteName::F, Accidental::NATURAL, 4).unwrap();
        assert_eq!(
            rename_enharmonic(f, ks(-5), ks(7)),
            Spelling::new(NoteName::E, Accidental::SHARP, 4).unwrap()
        );
        // and back
        assert_eq!(rename_enharmonic(cs, ks(7), ks(-5)), db);
    }

    #[test]
    fn rename_condition() {
        assert!(should_rename(ks(-5), ks(7), &[Key::major(7), Key::minor(-5)]));
        assert!(!should_rename(ks(-5), ks(7), &[Key::major(7), Key::major(0)]));
        assert!(!should_rename(ks(-5), ks(-5), &[Key::major(-5)]));
        assert!(!should_rename(ks(0), ks(2), &[Key::major(2)]));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"key_signature": 3, "notes": [
            {"midi": 66, "bar": 0, "onset": [0, 1], "duration": [1, 4], "name": "F", "accidental": 1, "octave": 4},
            {"midi": 61, "bar": 0, "onset": [1, 4], "duration": [0, 1], "name": "C", "accidental": 1, "octave": 4}
        ]}"#;
        let gt = parse_ground_truth(text.as_bytes()).unwrap();
        assert_eq!(gt.notes.len(), 2);
        assert!(gt.notes[1].note.grace);
        let again = parse_ground_truth(gt.to_json().as_bytes()).unwrap();
        assert_eq!(again, gt);
    }

    #[test]
    fn enharmonic_estimate_is_renamed() {
        use crate::input::InputNote;
        use crate::part::{Diagnostics, SpelledNote};
        use crate::pitch::MidiPitch;
        // Db F Ab expected, spelled C# E# G# under C# major
        let expected = [(61, NoteName::D, -1), (65, NoteName::F, 0), (68, NoteName::A, -1)];
        let spelled = [(NoteName::C, 1), (NoteName::E, 1), (NoteName::G, 1)];
        let notes: Vec<GroundTruthNote> = expected
            .iter()
            .enumerate()
            .map(|(i, &(m, n, a))| GroundTruthNote {
                note: InputNote::simple(m, 0, (i as i64, 3), (1, 3)),
                expected: Spelling::new(n, Accidental::new(a).unwrap(), 4).unwrap(),
            })
            .collect();
        let truth = GroundTruth::new(ks(-5), None, notes);
        let part = SpelledPart {
            algorithm: crate::part::Algorithm::Pse,
            notes: expected
                .iter()
                .zip(spelled)
                .map(|(&(m, _, _), (n, a))| {
                    let midi = MidiPitch::new(m as i64).unwrap();
                    let s = Spelling::for_midi(midi, n, Accidental::new(a).unwrap()).unwrap();
                    SpelledNote {
                        midi,
                        bar: 0,
                        spelling: s,
                        table_spelling: s,
                        simultaneous_with_next: false,
                    }
                })
                .collect(),
            global_key: Key::major(7),
            local_keys: vec![Key::major(7)],
            diagnostics: Diagnostics {
                candidates: vec![Key::major(7), Key::major(-5)],
                ..Diagnostics::default()
            },
        };
        let report = evaluate(&truth, &part).unwrap();
        assert!(report.enharmonic_renamed);
        assert!(!report.ks_correct);
        assert_eq!(report.spelling_accuracy, 1.0);

        // with an unrelated candidate the reference is kept as is
        let mut other = part.clone();
        other.diagnostics.candidates.push(Key::minor(0));
        let report = evaluate(&truth, &other).unwrap();
        assert!(!report.enharmonic_renamed);
        assert_eq!(report.correct_count, 0);
    }

    #[test]
    fn one_error_in_a_hundred() {
        use crate::input::InputNote;
        use crate::part::{spell_part, SpellerConfig};
        let notes: Vec<GroundTruthNote> = (0..100)
            .map(|i| GroundTruthNote {
                note: InputNote::simple(60, i, (0, 1), (1, 1)),
                expected: Spelling::new(NoteName::C, Accidental::NATURAL, 4).unwrap(),
            })
            .collect();
        let truth = GroundTruth::new(ks(0), None, notes);
        let mut out = spell_part(&truth.part(), &SpellerConfig::default());
        out.notes[7].spelling = Spelling::new(NoteName::B, Accidental::SHARP, 3).unwrap();
        let report = evaluate(&truth, &out).unwrap();
        assert_eq!(report.spelling_accuracy, 0.99);
        assert_eq!(report.errors.len(), 1);
        assert_eq!(report.errors[0].index, 7);
    }

    #[test]
    fn inconsistent_truth_is_rejected() {
        let text = r#"{"key_signature": 0, "notes": [
            {"midi": 66, "bar": 0, "onset": [0, 1], "duration": [1, 4], "name": "G", "accidental": 1, "octave": 4}
        ]}"#;
        assert!(matches!(
            parse_ground_truth(text.as_bytes()),
            Err(EvalError::Spelling { index: 0, .. })
        ));
    }
}
