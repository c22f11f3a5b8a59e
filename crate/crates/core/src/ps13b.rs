//! Deterministic variant: every note takes the spelling of its pitch class in
//! the chromatic harmonic scale of the operative key. There is no search, so
//! per-key work is linear in the number of notes.

use crate::input::{NoteEvent, Part};
use crate::measure::{replay, MeasureResult};
use crate::part::{spell_part, Algorithm, SpelledPart, SpellerConfig};
use crate::pitch::NameAcc;
use crate::tonality::ChromaticScale;
use crate::weight::WeightModel;

/// Spells `notes` from `scale` and weighs the result under `model`.
pub fn forced_cell(notes: &[NoteEvent], model: &WeightModel, scale: &ChromaticScale) -> MeasureResult {
    let assignment: Vec<NameAcc> = notes.iter().map(|n| scale.get(n.midi.pitch_class())).collect();
    let r = replay(notes, model, &assignment).expect("a chromatic scale names each pitch class once");
    MeasureResult {
        cost: r.cost,
        assignment,
        tie_count: 0,
    }
}

pub fn spell_ps13b(part: &Part, config: &SpellerConfig) -> SpelledPart {
    let config = SpellerConfig {
        algorithm: Algorithm::Ps13b,
        ..*config
    };
    spell_part(part, &config)
}
