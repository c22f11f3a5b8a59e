//! Pitch representations: MIDI values, pitch classes, note names,
//! accidentals and full spellings.
//!
//! MIDI value 0 is C♮-1 (equivalently B♯-2), so middle C is 60 and the
//! highest admissible value, 128, is G♯9.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::PitchError;

/// One of the seven diatonic note names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NoteName {
    C,
    D,
    E,
    F,
    G,
    A,
    B,
}

impl NoteName {
    pub const ALL: [NoteName; 7] = [
        NoteName::C,
        NoteName::D,
        NoteName::E,
        NoteName::F,
        NoteName::G,
        NoteName::A,
        NoteName::B,
    ];

    /// Letter index, C = 0 up to B = 6.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> NoteName {
        NoteName::ALL[index % 7]
    }

    /// Pitch class of the unaltered name.
    pub fn base_pc(self) -> u8 {
        match self {
            NoteName::C => 0,
            NoteName::D => 2,
            NoteName::E => 4,
            NoteName::F => 5,
            NoteName::G => 7,
            NoteName::A => 9,
            NoteName::B => 11,
        }
    }

    /// The name `steps` letters away (negative steps go down), wrapping.
    pub fn shifted(self, steps: i32) -> NoteName {
        NoteName::from_index((self.index() as i32 + steps).rem_euclid(7) as usize)
    }
}

impl fmt::Display for NoteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NoteName::C => "C",
            NoteName::D => "D",
            NoteName::E => "E",
            NoteName::F => "F",
            NoteName::G => "G",
            NoteName::A => "A",
            NoteName::B => "B",
        };
        f.write_str(s)
    }
}

impl FromStr for NoteName {
    type Err = PitchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "C" => Ok(NoteName::C),
            "D" => Ok(NoteName::D),
            "E" => Ok(NoteName::E),
            "F" => Ok(NoteName::F),
            "G" => Ok(NoteName::G),
            "A" => Ok(NoteName::A),
            "B" => Ok(NoteName::B),
            _ => Err(PitchError::UnknownName(s.to_string())),
        }
    }
}

/// Accidental as a pitch class alteration in −2..=2.
///
/// Serialized as the bare integer alteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub struct Accidental(i8);

impl Accidental {
    pub const DOUBLE_FLAT: Accidental = Accidental(-2);
    pub const FLAT: Accidental = Accidental(-1);
    pub const NATURAL: Accidental = Accidental(0);
    pub const SHARP: Accidental = Accidental(1);
    pub const DOUBLE_SHARP: Accidental = Accidental(2);

    pub const ALL: [Accidental; 5] = [
        Accidental::DOUBLE_FLAT,
        Accidental::FLAT,
        Accidental::NATURAL,
        Accidental::SHARP,
        Accidental::DOUBLE_SHARP,
    ];

    pub fn new(alteration: i8) -> Result<Self, PitchError> {
        if (-2..=2).contains(&alteration) {
            Ok(Accidental(alteration))
        } else {
            Err(PitchError::AlterationOutOfRange(alteration as i32))
        }
    }

    pub fn alteration(self) -> i8 {
        self.0
    }

    /// True for double flats and double sharps.
    pub fn is_double(self) -> bool {
        self.0.abs() == 2
    }

    pub fn symbol(self) -> &'static str {
        match self.0 {
            -2 => "bb",
            -1 => "b",
            0 => "",
            1 => "#",
            _ => "##",
        }
    }
}

impl Default for Accidental {
    fn default() -> Self {
        Accidental::NATURAL
    }
}

impl TryFrom<i8> for Accidental {
    type Error = PitchError;

    fn try_from(value: i8) -> Result<Self, Self::Error> {
        Accidental::new(value)
    }
}

impl From<Accidental> for i8 {
    fn from(a: Accidental) -> i8 {
        a.0
    }
}

impl fmt::Display for Accidental {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A MIDI pitch value in 0..=128.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u8")]
pub struct MidiPitch(u8);

impl MidiPitch {
    pub const MAX: u8 = 128;

    pub fn new(value: i64) -> Result<Self, PitchError> {
        if (0..=Self::MAX as i64).contains(&value) {
            Ok(MidiPitch(value as u8))
        } else {
            Err(PitchError::MidiOutOfRange(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn pitch_class(self) -> PitchClass {
        pc_of_midi(self)
    }
}

impl TryFrom<i64> for MidiPitch {
    type Error = PitchError;

    fn try_from(value: i64) -> Result<Self, Self::Error> {
        MidiPitch::new(value)
    }
}

impl From<MidiPitch> for u8 {
    fn from(m: MidiPitch) -> u8 {
        m.0
    }
}

/// Pitch class in 0..12.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PitchClass(u8);

impl PitchClass {
    /// Reduces any integer modulo 12.
    pub fn new(value: i32) -> Self {
        PitchClass(value.rem_euclid(12) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> impl Iterator<Item = PitchClass> {
        (0..12).map(PitchClass)
    }
}

/// Pitch class of a name/accidental pair.
pub fn pc_of(name: NoteName, accidental: Accidental) -> PitchClass {
    PitchClass::new(name.base_pc() as i32 + accidental.alteration() as i32)
}

/// A note name and accidental pair, without octave.
pub type NameAcc = (NoteName, Accidental);

/// A complete spelling: name, accidental and octave.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Spelling {
    pub name: NoteName,
    pub accidental: Accidental,
    pub octave: i8,
}

impl Spelling {
    pub fn new(name: NoteName, accidental: Accidental, octave: i8) -> Result<Self, PitchError> {
        if !(-2..=9).contains(&octave) {
            return Err(PitchError::OctaveOutOfRange(octave as i32));
        }
        Ok(Spelling {
            name,
            accidental,
            octave,
        })
    }

    /// Spelling of `midi` with the given name and accidental, deducing the octave.
    pub fn for_midi(
        midi: MidiPitch,
        name: NoteName,
        accidental: Accidental,
    ) -> Result<Self, PitchError> {
        let octave = octave_for(midi, name, accidental)?;
        Spelling::new(name, accidental, octave)
    }

    pub fn name_acc(&self) -> NameAcc {
        (self.name, self.accidental)
    }

    pub fn pitch_class(&self) -> PitchClass {
        pc_of(self.name, self.accidental)
    }
}

impl fmt::Display for Spelling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.name, self.accidental, self.octave)
    }
}

pub fn pc_of_midi(m: MidiPitch) -> PitchClass {
    PitchClass(m.0 % 12)
}

use NoteName::*;

const DFLAT2: Accidental = Accidental::DOUBLE_FLAT;
const FLAT: Accidental = Accidental::FLAT;
const NAT: Accidental = Accidental::NATURAL;
const SHARP: Accidental = Accidental::SHARP;
const DSHARP2: Accidental = Accidental::DOUBLE_SHARP;

// Rows of the enharmonic table with the unusable entries (B##, Fbb, E##, Cbb)
// removed. Pitch class 11 uses Cb where the printed table has a typo.
static CANDIDATES: [&[NameAcc]; 12] = [
    &[(D, DFLAT2), (C, NAT), (B, SHARP)],
    &[(D, FLAT), (C, SHARP)],
    &[(E, DFLAT2), (D, NAT), (C, DSHARP2)],
    &[(E, FLAT), (D, SHARP)],
    &[(F, FLAT), (E, NAT), (D, DSHARP2)],
    &[(G, DFLAT2), (F, NAT), (E, SHARP)],
    &[(G, FLAT), (F, SHARP)],
    &[(A, DFLAT2), (G, NAT), (F, DSHARP2)],
    &[(A, FLAT), (G, SHARP)],
    &[(B, DFLAT2), (A, NAT), (G, DSHARP2)],
    &[(B, FLAT), (A, SHARP)],
    &[(C, FLAT), (B, NAT), (A, DSHARP2)],
];

/// The admissible name/accidental pairs for a pitch class, in table order.
pub fn candidate_spellings(pc: PitchClass) -> &'static [NameAcc] {
    CANDIDATES[pc.index()]
}

pub fn is_candidate(pc: PitchClass, spelling: NameAcc) -> bool {
    candidate_spellings(pc).contains(&spelling)
}

pub fn spelling_to_midi(s: &Spelling) -> Result<MidiPitch, PitchError> {
    let value = 12 * (s.octave as i64 + 1) + s.name.base_pc() as i64 + s.accidental.alteration() as i64;
    MidiPitch::new(value)
}

/// Octave `o` such that `(name, accidental, o)` denotes exactly `m`.
pub fn octave_for(m: MidiPitch, name: NoteName, accidental: Accidental) -> Result<i8, PitchError> {
    if pc_of(name, accidental) != pc_of_midi(m) {
        return Err(PitchError::Incompatible {
            midi: m.value(),
            name,
            alteration: accidental.alteration(),
        });
    }
    let reference = m.value() as i32 - name.base_pc() as i32 - accidental.alteration() as i32;
    debug_assert_eq!(reference.rem_euclid(12), 0);
    Ok((reference.div_euclid(12) - 1) as i8)
}

/// The accidental that makes `name` denote pitch class `pc`, if it lies in −2..=2.
pub fn accidental_for(name: NoteName, pc: PitchClass) -> Option<Accidental> {
    let mut diff = pc.value() as i32 - name.base_pc() as i32;
    diff = (diff + 6).rem_euclid(12) - 6;
    Accidental::new(diff as i8).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn midi(v: i64) -> MidiPitch {
        MidiPitch::new(v).unwrap()
    }

    #[test]
    fn base_pcs_increase_with_letter() {
        let pcs: Vec<u8> = NoteName::ALL.iter().map(|n| n.base_pc()).collect();
        assert_eq!(pcs, vec![0, 2, 4, 5, 7, 9, 11]);
    }

    #[test]
    fn pitch_class_of_midi() {
        assert_eq!(pc_of_midi(midi(66)).value(), 6);
        assert_eq!(pc_of_midi(midi(0)).value(), 0);
        assert_eq!(pc_of_midi(midi(74)).value(), 2);
    }

    #[test]
    fn candidate_rows() {
        assert_eq!(candidate_spellings(PitchClass::new(6)), &[(G, FLAT), (F, SHARP)]);
        assert_eq!(candidate_spellings(PitchClass::new(8)), &[(A, FLAT), (G, SHARP)]);
        assert_eq!(
            candidate_spellings(PitchClass::new(0)),
            &[(D, DFLAT2), (C, NAT), (B, SHARP)]
        );
    }

    #[test]
    fn candidates_are_consistent_and_distinct() {
        for pc in PitchClass::all() {
            let row = candidate_spellings(pc);
            assert!(row.len() == 2 || row.len() == 3);
            for &(n, a) in row {
                assert_eq!(pc_of(n, a), pc);
            }
            for (i, x) in row.iter().enumerate() {
                for y in &row[i + 1..] {
                    assert_ne!(x.0, y.0);
                }
            }
        }
    }

    #[test]
    fn spelling_to_midi_anchors() {
        let c4 = Spelling::new(C, NAT, 4).unwrap();
        assert_eq!(spelling_to_midi(&c4).unwrap().value(), 60);
        let a0 = Spelling::new(A, NAT, 0).unwrap();
        assert_eq!(spelling_to_midi(&a0).unwrap().value(), 21);
        let bs = Spelling::new(B, SHARP, -2).unwrap();
        assert_eq!(spelling_to_midi(&bs).unwrap().value(), 0);
        let top = Spelling::new(G, SHARP, 9).unwrap();
        assert_eq!(spelling_to_midi(&top).unwrap().value(), 128);
        let over = Spelling::new(A, NAT, 9).unwrap();
        assert!(spelling_to_midi(&over).is_err());
    }

    #[test]
    fn octave_inverse() {
        assert_eq!(octave_for(midi(60), B, SHARP).unwrap(), 3);
        assert_eq!(octave_for(midi(60), C, NAT).unwrap(), 4);
        assert_eq!(octave_for(midi(59), C, FLAT).unwrap(), 4);
        assert!(octave_for(midi(60), D, NAT).is_err());
    }

    #[test]
    fn range_checks() {
        assert!(MidiPitch::new(129).is_err());
        assert!(MidiPitch::new(-1).is_err());
        assert!(Accidental::new(3).is_err());
        assert!(Spelling::new(C, NAT, 10).is_err());
    }

    #[test]
    fn accidental_for_name() {
        assert_eq!(accidental_for(E, PitchClass::new(5)), Some(SHARP));
        assert_eq!(accidental_for(C, PitchClass::new(11)), Some(FLAT));
        assert_eq!(accidental_for(C, PitchClass::new(9)), None);
    }

    #[test]
    fn midi_round_trip_over_full_range() {
        for v in 0..=128 {
            let m = midi(v);
            for &(n, a) in candidate_spellings(m.pitch_class()) {
                let s = Spelling::for_midi(m, n, a).unwrap();
                assert_eq!(spelling_to_midi(&s).unwrap(), m);
            }
        }
    }
}
