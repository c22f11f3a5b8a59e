//! Joint pitch spelling and key estimation for MIDI note sequences with bar
//! information.
//!
//! The entry point is [`part::spell_part`]; [`ps13b::spell_ps13b`] runs the
//! faster variant without per-measure search.

pub mod error;
pub mod eval;
pub mod input;
pub mod measure;
pub mod output;
pub mod part;
pub mod pitch;
pub mod ps13b;
pub mod rewrite;
pub mod smf;
pub mod state;
pub mod tonality;
pub mod weight;

pub use error::{EvalError, InputError, PitchError, TonalityError};
pub use input::{InputNote, NoteEvent, Part};
pub use part::{spell_part, Algorithm, SpelledPart, SpellerConfig};
pub use pitch::{Accidental, MidiPitch, NoteName, PitchClass, Spelling};
pub use tonality::{Key, KeyRange, KeySignature, Mode};
pub use weight::{Weight, WeightOrder};
