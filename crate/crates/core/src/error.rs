use thiserror::Error;

use crate::pitch::NoteName;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PitchError {
    #[error("MIDI value {0} outside 0..=128")]
    MidiOutOfRange(i64),
    #[error("alteration {0} outside -2..=2")]
    AlterationOutOfRange(i32),
    #[error("octave {0} outside -2..=9")]
    OctaveOutOfRange(i32),
    #[error("unknown note name {0:?}")]
    UnknownName(String),
    #[error("{name} with alteration {alteration} cannot spell MIDI value {midi}")]
    Incompatible {
        midi: u8,
        name: NoteName,
        alteration: i8,
    },
}

#[derive(Debug, Error)]
pub enum TonalityError {
    #[error("key signature {0} outside -7..=7")]
    SignatureOutOfRange(i32),
    #[error("invalid key range {0:?}")]
    InvalidRange(String),
    #[error("unknown mode {0:?}")]
    UnknownMode(String),
    #[error("weber table: {0}")]
    WeberTable(String),
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("malformed note list: {0}")]
    Json(#[from] serde_json::Error),
    #[error("note {index}: {message}")]
    Record { index: usize, message: String },
    #[error("unreadable MIDI file: {0}")]
    Smf(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl InputError {
    pub(crate) fn record(index: usize, message: impl Into<String>) -> Self {
        InputError::Record {
            index,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("note count mismatch: {input} input notes vs {truth} ground truth notes")]
    CountMismatch { input: usize, truth: usize },
    #[error("note {index}: input MIDI {input} does not match ground truth MIDI {truth}")]
    MidiMismatch { index: usize, input: u8, truth: u8 },
    #[error("ground truth note {index}: {source}")]
    Spelling {
        index: usize,
        #[source]
        source: PitchError,
    },
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Tonality(#[from] TonalityError),
}
