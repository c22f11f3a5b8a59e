//! Keys, key signatures, scales and the Weber key-distance table.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::TonalityError;
use crate::pitch::{accidental_for, pc_of, Accidental, NameAcc, NoteName, PitchClass};
use crate::state::SpellingState;

/// Number of sharps (positive) or flats (negative), in −7..=7.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub struct KeySignature(i8);

impl KeySignature {
    pub fn new(count: i8) -> Result<Self, TonalityError> {
        if (-7..=7).contains(&count) {
            Ok(KeySignature(count))
        } else {
            Err(TonalityError::SignatureOutOfRange(count as i32))
        }
    }

    pub fn count(self) -> i8 {
        self.0
    }
}

impl TryFrom<i8> for KeySignature {
    type Error = TonalityError;

    fn try_from(value: i8) -> Result<Self, Self::Error> {
        KeySignature::new(value)
    }
}

impl From<KeySignature> for i8 {
    fn from(k: KeySignature) -> i8 {
        k.0
    }
}

impl fmt::Display for KeySignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => f.write_str("0"),
            k if k > 0 => write!(f, "{k}#"),
            k => write!(f, "{}b", -k),
        }
    }
}

const SHARP_ORDER: [NoteName; 7] = [
    NoteName::F,
    NoteName::C,
    NoteName::G,
    NoteName::D,
    NoteName::A,
    NoteName::E,
    NoteName::B,
];

/// The state in force at the start of every measure under signature `k`.
pub fn initial_state(k: KeySignature) -> SpellingState {
    let mut s = SpellingState::naturals();
    let n = k.count().unsigned_abs() as usize;
    if k.count() >= 0 {
        for &name in &SHARP_ORDER[..n] {
            s.set(name, Accidental::SHARP);
        }
    } else {
        for &name in SHARP_ORDER.iter().rev().take(n) {
            s.set(name, Accidental::FLAT);
        }
    }
    s
}

/// Mode of a key row: major, or the aggregate minor accepting the natural,
/// harmonic and melodic variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Major,
    Minor,
}

impl FromStr for Mode {
    type Err = TonalityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "major" => Ok(Mode::Major),
            "minor" => Ok(Mode::Minor),
            other => Err(TonalityError::UnknownMode(other.to_string())),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Major => "major",
            Mode::Minor => "minor",
        })
    }
}

/// The three minor scale variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinorVariant {
    Natural,
    Harmonic,
    Melodic,
}

pub fn tonic_of(k: KeySignature, mode: Mode) -> NameAcc {
    // Each sharp moves the major tonic up a fifth, four letters.
    let major = NoteName::C.shifted(4 * k.count() as i32);
    let name = match mode {
        Mode::Major => major,
        Mode::Minor => major.shifted(5),
    };
    (name, initial_state(k).get(name))
}

/// A key signature together with a mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "KeyRepr", try_from = "KeyRepr")]
pub struct Key {
    pub signature: KeySignature,
    pub mode: Mode,
}

#[derive(Serialize, Deserialize)]
struct KeyRepr {
    signature: i8,
    mode: Mode,
    #[serde(default)]
    tonic: Option<String>,
}

impl From<Key> for KeyRepr {
    fn from(k: Key) -> Self {
        let (n, a) = k.tonic();
        KeyRepr {
            signature: k.signature.count(),
            mode: k.mode,
            tonic: Some(format!("{n}{a}")),
        }
    }
}

impl TryFrom<KeyRepr> for Key {
    type Error = TonalityError;

    fn try_from(r: KeyRepr) -> Result<Self, Self::Error> {
        Ok(Key::new(KeySignature::new(r.signature)?, r.mode))
    }
}

impl Key {
    pub fn new(signature: KeySignature, mode: Mode) -> Self {
        Key { signature, mode }
    }

    pub fn major(count: i8) -> Self {
        Key::new(KeySignature::new(count).expect("signature in range"), Mode::Major)
    }

    pub fn minor(count: i8) -> Self {
        Key::new(KeySignature::new(count).expect("signature in range"), Mode::Minor)
    }

    pub fn tonic(&self) -> NameAcc {
        tonic_of(self.signature, self.mode)
    }

    pub fn tonic_pc(&self) -> PitchClass {
        let (n, a) = self.tonic();
        pc_of(n, a)
    }

    /// Row/column index in the Weber table: majors −7..7 then minors −7..7.
    pub fn table_index(&self) -> usize {
        let base = match self.mode {
            Mode::Major => 0,
            Mode::Minor => 15,
        };
        base + (self.signature.count() + 7) as usize
    }

    pub fn initial_state(&self) -> SpellingState {
        initial_state(self.signature)
    }

    /// Name like `F#minor`.
    pub fn label(&self) -> String {
        let (n, a) = self.tonic();
        format!("{n}{a}{}", self.mode)
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.label(), self.signature)
    }
}

/// Spelling of scale degree `degree` (0 = tonic) under the key signature.
fn signature_degree(key: &Key, degree: usize) -> NameAcc {
    let name = key.tonic().0.shifted(degree as i32);
    (name, key.initial_state().get(name))
}

fn raised(spelling: NameAcc) -> NameAcc {
    let alt = spelling.1.alteration() + 1;
    (spelling.0, Accidental::new(alt).expect("raised degree stays within a double sharp"))
}

/// The seven spellings of a minor key in one of its variants.
pub fn minor_scale(key: &Key, variant: MinorVariant) -> [NameAcc; 7] {
    let mut degrees = [signature_degree(key, 0); 7];
    for (d, slot) in degrees.iter_mut().enumerate() {
        *slot = signature_degree(key, d);
    }
    match variant {
        MinorVariant::Natural => {}
        MinorVariant::Harmonic => degrees[6] = raised(degrees[6]),
        MinorVariant::Melodic => {
            degrees[5] = raised(degrees[5]);
            degrees[6] = raised(degrees[6]);
        }
    }
    degrees
}

/// The diatonic spellings accepted in `key`. For minor keys this is the union
/// of the natural, harmonic and melodic scales.
pub fn scale_spellings(key: &Key) -> BTreeSet<NameAcc> {
    let mut set: BTreeSet<NameAcc> = (0..7).map(|d| signature_degree(key, d)).collect();
    if key.mode == Mode::Minor {
        set.extend(minor_scale(key, MinorVariant::Harmonic));
        set.extend(minor_scale(key, MinorVariant::Melodic));
    }
    set
}

/// Raised sixth and seventh degrees of a minor key; empty for majors.
pub fn lead_degree_accidentals(key: &Key) -> BTreeSet<NameAcc> {
    match key.mode {
        Mode::Major => BTreeSet::new(),
        Mode::Minor => [raised(signature_degree(key, 5)), raised(signature_degree(key, 6))]
            .into_iter()
            .collect(),
    }
}

// (letter steps, semitones) above the tonic for 1 b2 2 b3 3 4 #4 5 b6 6 b7 7.
const CHROMATIC_DEGREES: [(i32, i32); 12] = [
    (0, 0),
    (1, 1),
    (1, 2),
    (2, 3),
    (2, 4),
    (3, 5),
    (3, 6),
    (4, 7),
    (5, 8),
    (5, 9),
    (6, 10),
    (6, 11),
];

/// One spelling per pitch class, indexed by pitch class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChromaticScale([NameAcc; 12]);

impl ChromaticScale {
    pub fn get(&self, pc: PitchClass) -> NameAcc {
        self.0[pc.index()]
    }

    pub fn contains(&self, spelling: NameAcc) -> bool {
        self.get(pc_of(spelling.0, spelling.1)) == spelling
    }
}

/// The harmonic chromatic scale on the key's tonic, same pattern for both modes.
pub fn chromatic_harmonic_scale(key: &Key) -> ChromaticScale {
    let (tonic, _) = key.tonic();
    let tonic_pc = key.tonic_pc().value() as i32;
    let mut out = [(NoteName::C, Accidental::NATURAL); 12];
    for (steps, semis) in CHROMATIC_DEGREES {
        let pc = PitchClass::new(tonic_pc + semis);
        let name = tonic.shifted(steps);
        let acc = accidental_for(name, pc).expect("chromatic degree representable for |k| <= 7");
        out[pc.index()] = (name, acc);
    }
    ChromaticScale(out)
}

/// Same mode and signatures {−7,5}, {−5,7} or {−6,6}.
pub fn enharmonic_pair(a: &Key, b: &Key) -> bool {
    a.mode == b.mode && signatures_enharmonic(a.signature, b.signature)
}

pub fn signatures_enharmonic(a: KeySignature, b: KeySignature) -> bool {
    (a.count() - b.count()).abs() == 12
}

/// Weber's chart of key relationships.
#[derive(Debug, Clone)]
pub struct WeberTable {
    cells: [[u8; 30]; 30],
}

static WEBER_SOURCE: &str = include_str!("../data/weber.txt");

impl WeberTable {
    /// Parses and validates a whitespace-separated 30×30 matrix.
    pub fn parse(text: &str) -> Result<Self, TonalityError> {
        let mut cells = [[0u8; 30]; 30];
        let rows: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        if rows.len() != 30 {
            return Err(TonalityError::WeberTable(format!("expected 30 rows, found {}", rows.len())));
        }
        for (i, line) in rows.iter().enumerate() {
            let values: Vec<&str> = line.split_whitespace().collect();
            if values.len() != 30 {
                return Err(TonalityError::WeberTable(format!(
                    "row {i}: expected 30 entries, found {}",
                    values.len()
                )));
            }
            for (j, v) in values.iter().enumerate() {
                cells[i][j] = v
                    .parse()
                    .map_err(|_| TonalityError::WeberTable(format!("row {i}: bad entry {v:?}")))?;
            }
        }
        let table = WeberTable { cells };
        table.validate()?;
        Ok(table)
    }

    fn validate(&self) -> Result<(), TonalityError> {
        for i in 0..30 {
            if self.cells[i][i] != 0 {
                return Err(TonalityError::WeberTable(format!("nonzero diagonal at {i}")));
            }
            for j in 0..30 {
                if self.cells[i][j] > 11 {
                    return Err(TonalityError::WeberTable(format!("entry ({i},{j}) exceeds 11")));
                }
                if self.cells[i][j] != self.cells[j][i] {
                    return Err(TonalityError::WeberTable(format!("asymmetric at ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    pub fn distance(&self, a: &Key, b: &Key) -> u8 {
        self.cells[a.table_index()][b.table_index()]
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.cells[row][col]
    }

    /// The table shipped with the crate.
    pub fn builtin() -> &'static WeberTable {
        static TABLE: OnceLock<WeberTable> = OnceLock::new();
        TABLE.get_or_init(|| WeberTable::parse(WEBER_SOURCE).expect("bundled Weber table is valid"))
    }
}

pub fn weber_distance(a: &Key, b: &Key) -> u8 {
    WeberTable::builtin().distance(a, b)
}

/// Inclusive range of key signatures used to build the key universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeyRange {
    pub low: KeySignature,
    pub high: KeySignature,
}

impl Default for KeyRange {
    fn default() -> Self {
        KeyRange {
            low: KeySignature(-7),
            high: KeySignature(7),
        }
    }
}

impl KeyRange {
    pub fn new(low: i8, high: i8) -> Result<Self, TonalityError> {
        let range = KeyRange {
            low: KeySignature::new(low)?,
            high: KeySignature::new(high)?,
        };
        if low > high {
            return Err(TonalityError::InvalidRange(format!("{low}..{high}")));
        }
        Ok(range)
    }

    /// All keys in the range: majors in ascending signature, then minors.
    pub fn keys(&self) -> Vec<Key> {
        let sigs = self.low.count()..=self.high.count();
        sigs.clone()
            .map(Key::major)
            .chain(sigs.map(Key::minor))
            .collect()
    }
}

impl FromStr for KeyRange {
    type Err = TonalityError;

    /// Parses `a..b`, e.g. `-6..6`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TonalityError::InvalidRange(s.to_string());
        let (a, b) = s.split_once("..").ok_or_else(bad)?;
        let low: i8 = a.trim().parse().map_err(|_| bad())?;
        let high: i8 = b.trim().parse().map_err(|_| bad())?;
        KeyRange::new(low, high)
    }
}
