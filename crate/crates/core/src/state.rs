//! The per-measure engraving state: which accidental is currently in force
//! for each note name, reasoning modulo the octave.

use std::fmt;

use crate::pitch::{Accidental, NoteName, PitchClass};

/// Total map from the seven note names to the accidental in force.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SpellingState([Accidental; 7]);

impl SpellingState {
    pub fn naturals() -> Self {
        SpellingState([Accidental::NATURAL; 7])
    }

    pub fn get(&self, name: NoteName) -> Accidental {
        self.0[name.index()]
    }

    pub fn set(&mut self, name: NoteName, accidental: Accidental) {
        self.0[name.index()] = accidental;
    }

    pub fn with(mut self, name: NoteName, accidental: Accidental) -> Self {
        self.set(name, accidental);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (NoteName, Accidental)> + '_ {
        NoteName::ALL.iter().map(move |&n| (n, self.get(n)))
    }
}

impl fmt::Debug for SpellingState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (n, a)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", n, if a == Accidental::NATURAL { "n" } else { a.symbol() })?;
        }
        f.write_str("}")
    }
}

/// Applies one spelled note to the state.
///
/// Returns the successor state and whether the accidental has to be printed
/// (counted): it is not when the name already carries that accidental.
pub fn update_state(s: SpellingState, name: NoteName, a: Accidental) -> (SpellingState, bool) {
    if s.get(name) == a {
        (s, false)
    } else {
        (s.with(name, a), true)
    }
}

/// Partial map from pitch classes to the name they received inside the
/// current run of simultaneous notes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct ChordNameMap([Option<NoteName>; 12]);

impl ChordNameMap {
    pub fn new() -> Self {
        ChordNameMap([None; 12])
    }

    pub fn single(pc: PitchClass, name: NoteName) -> Self {
        let mut c = ChordNameMap::new();
        c.0[pc.index()] = Some(name);
        c
    }

    pub fn get(&self, pc: PitchClass) -> Option<NoteName> {
        self.0[pc.index()]
    }

    pub fn with(mut self, pc: PitchClass, name: NoteName) -> Self {
        self.0[pc.index()] = Some(name);
        self
    }

    /// A spelling is compatible when the pitch class is unnamed or has the same name.
    pub fn compatible(&self, pc: PitchClass, name: NoteName) -> bool {
        self.get(pc).is_none_or(|n| n == name)
    }

    pub fn len(&self) -> usize {
        self.0.iter().filter(|x| x.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
