//! Renaming of neighbour and passing notes on melodic trigrams.
//!
//! Patterns compare letter names (without accidentals) and semitone steps;
//! the middle note is renamed so that it moves by letter in the direction of
//! the line.

use crate::pitch::{accidental_for, is_candidate, MidiPitch, NoteName, Spelling};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    NeighbourDown,
    NeighbourUp,
    Descending,
    Ascending,
}

/// Three consecutive spelled notes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Trigram {
    pub midi: [MidiPitch; 3],
    pub notes: [Spelling; 3],
}

impl Trigram {
    pub fn d01(&self) -> i32 {
        self.midi[1].value() as i32 - self.midi[0].value() as i32
    }

    pub fn d12(&self) -> i32 {
        self.midi[2].value() as i32 - self.midi[1].value() as i32
    }
}

fn small(d: i32) -> bool {
    matches!(d.abs(), 1 | 2)
}

/// The rule matching `t` and the respelling of its middle note, if any.
pub fn match_rule(t: &Trigram) -> Option<(Rule, Spelling)> {
    let [n0, n1, n2] = t.notes.map(|s| s.name);
    let (d01, d12) = (t.d01(), t.d12());
    if !small(d01) || !small(d12) {
        return None;
    }
    let (rule, name) = if n0 == n1 && n1 == n2 && d12 == -d01 {
        if d01 < 0 {
            (Rule::NeighbourDown, n0.shifted(-1))
        } else {
            (Rule::NeighbourUp, n0.shifted(1))
        }
    } else if d01 < 0 && d12 < 0 {
        if n1 == n0 {
            (Rule::Descending, n0.shifted(-1))
        } else if n1 == n2 {
            (Rule::Descending, n2.shifted(1))
        } else {
            return None;
        }
    } else if d01 > 0 && d12 > 0 {
        if n1 == n0 {
            (Rule::Ascending, n0.shifted(1))
        } else if n1 == n2 {
            (Rule::Ascending, n2.shifted(-1))
        } else {
            return None;
        }
    } else {
        return None;
    };
    respell(t.midi[1], t.notes[1], name).map(|s| (rule, s))
}

fn respell(midi: MidiPitch, current: Spelling, name: NoteName) -> Option<Spelling> {
    let pc = midi.pitch_class();
    let accidental = accidental_for(name, pc)?;
    // stay inside the enharmonic table, which also excludes B##, Fbb, E##, Cbb
    if !is_candidate(pc, (name, accidental)) {
        return None;
    }
    let s = Spelling::for_midi(midi, name, accidental).ok()?;
    (s != current).then_some(s)
}

/// Single left-to-right sweep over the whole sequence. Trigrams touching a
/// simultaneity are left alone. Returns the number of rewritten notes.
pub fn rewrite_pass(midi: &[MidiPitch], spellings: &mut [Spelling], simultaneous: &[bool]) -> usize {
    assert_eq!(midi.len(), spellings.len());
    assert_eq!(midi.len(), simultaneous.len());
    let mut rewrites = 0;
    for i in 1..spellings.len().saturating_sub(1) {
        if simultaneous[i - 1] || simultaneous[i] {
            continue;
        }
        let t = Trigram {
            midi: [midi[i - 1], midi[i], midi[i + 1]],
            notes: [spellings[i - 1], spellings[i], spellings[i + 1]],
        };
        if let Some((_, s)) = match_rule(&t) {
            spellings[i] = s;
            rewrites += 1;
        }
    }
    rewrites
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pitch::{spelling_to_midi, Accidental};

    fn sp(text: &str, octave: i8) -> Spelling {
        let mut chars = text.chars();
        let name: NoteName = chars.next().unwrap().to_string().parse().unwrap();
        let alt = chars.map(|c| if c == '#' { 1 } else { -1 }).sum::<i8>();
        Spelling::new(name, Accidental::new(alt).unwrap(), octave).unwrap()
    }

    fn run(notes: &[Spelling]) -> Vec<Spelling> {
        let midi: Vec<MidiPitch> = notes.iter().map(|s| spelling_to_midi(s).unwrap()).collect();
        let mut out = notes.to_vec();
        rewrite_pass(&midi, &mut out, &vec![false; notes.len()]);
        out
    }

    #[test]
    fn neighbour_down_recomputes_octave() {
        let out = run(&[sp("C", 4), sp("Cb", 4), sp("C", 4)]);
        assert_eq!(out[1], sp("B", 3));
    }

    #[test]
    fn descending_double_step() {
        let out = run(&[sp("C", 5), sp("A#", 4), sp("Ab", 4)]);
        assert_eq!(out[1], sp("Bb", 4));
    }

    #[test]
    fn no_match_is_identity() {
        let notes = [sp("C", 4), sp("E", 4), sp("G", 4), sp("C", 5)];
        assert_eq!(run(&notes), notes);
    }

    #[test]
    fn leaps_never_match() {
        let notes = [sp("C", 4), sp("Eb", 4), sp("G", 4)];
        assert_eq!(run(&notes), notes);
    }

    #[test]
    fn chords_are_skipped() {
        let notes = [sp("C", 4), sp("Cb", 4), sp("C", 4)];
        let midi: Vec<MidiPitch> = notes.iter().map(|s| spelling_to_midi(s).unwrap()).collect();
        let mut out = notes.to_vec();
        assert_eq!(rewrite_pass(&midi, &mut out, &[false, true, false]), 0);
        assert_eq!(out, notes);
    }

    #[test]
    fn results_stay_in_the_table() {
        let t = Trigram {
            midi: [MidiPitch::new(62).unwrap(), MidiPitch::new(61).unwrap(), MidiPitch::new(62).unwrap()],
            notes: [sp("C##", 4), sp("C#", 4), sp("C##", 4)],
        };
        // one letter below C is B, and B## is not a usable spelling
        assert_eq!(match_rule(&t), None);
    }
}
