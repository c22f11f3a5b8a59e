//! Edge weights for the per-measure search: the plain accidental count and
//! the five-component refined weight with its two orderings.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::pitch::{pc_of, Accidental, NameAcc, NoteName};
use crate::tonality::{
    chromatic_harmonic_scale, lead_degree_accidentals, scale_spellings, ChromaticScale, Key,
    KeySignature, Mode,
};

/// Cumulated weight. In scalar mode only `accid` is ever nonzero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight {
    pub accid: u32,
    pub dist: u32,
    pub chromarm: u32,
    pub color: u32,
    pub cflat: u32,
}

impl Weight {
    pub const ZERO: Weight = Weight {
        accid: 0,
        dist: 0,
        chromarm: 0,
        color: 0,
        cflat: 0,
    };

    pub fn scalar(accid: u32) -> Self {
        Weight {
            accid,
            ..Weight::ZERO
        }
    }

    pub fn tuple(accid: u32, dist: u32, chromarm: u32, color: u32, cflat: u32) -> Self {
        Weight {
            accid,
            dist,
            chromarm,
            color,
            cflat,
        }
    }

    pub fn components(&self) -> [u32; 5] {
        [self.accid, self.dist, self.chromarm, self.color, self.cflat]
    }
}

impl Add for Weight {
    type Output = Weight;

    fn add(self, o: Weight) -> Weight {
        Weight {
            accid: self.accid + o.accid,
            dist: self.dist + o.dist,
            chromarm: self.chromarm + o.chromarm,
            color: self.color + o.color,
            cflat: self.cflat + o.cflat,
        }
    }
}

impl AddAssign for Weight {
    fn add_assign(&mut self, o: Weight) {
        *self = *self + o;
    }
}

impl std::iter::Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::ZERO, Add::add)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "accid={} dist={} chromarm={} color={} cflat={}",
            self.accid, self.dist, self.chromarm, self.color, self.cflat
        )
    }
}

/// Orderings on refined weights.
///
/// `Lex` compares the five components lexicographically. `Sum` compares
/// `(accid + dist, chromarm, color, cflat)` lexicographically.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightOrder {
    Lex,
    #[default]
    Sum,
}

impl WeightOrder {
    pub fn compare(self, a: &Weight, b: &Weight) -> Ordering {
        match self {
            WeightOrder::Lex => a.components().cmp(&b.components()),
            WeightOrder::Sum => (a.accid + a.dist, a.chromarm, a.color, a.cflat).cmp(&(
                b.accid + b.dist,
                b.chromarm,
                b.color,
                b.cflat,
            )),
        }
    }
}

impl FromStr for WeightOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lex" => Ok(WeightOrder::Lex),
            "sum" => Ok(WeightOrder::Sum),
            other => Err(format!("unknown weight ordering {other:?} (expected sum or lex)")),
        }
    }
}

/// How a measure is weighted: plain accidental counting against the row key,
/// or the refined tuple against an estimated local key.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightMode {
    Scalar,
    Tuple {
        order: WeightOrder,
        local_key: Key,
        global_ks: KeySignature,
    },
}

impl WeightMode {
    pub fn compare(&self, a: &Weight, b: &Weight) -> Ordering {
        match self {
            WeightMode::Scalar => a.accid.cmp(&b.accid),
            WeightMode::Tuple { order, .. } => order.compare(a, b),
        }
    }
}

/// Dense membership table over the 35 name/accidental pairs.
#[derive(Clone, Copy, Debug)]
struct SpellingSet([bool; 35]);

impl SpellingSet {
    fn slot((n, a): NameAcc) -> usize {
        n.index() * 5 + (a.alteration() + 2) as usize
    }

    fn from_iter(items: impl IntoIterator<Item = NameAcc>) -> Self {
        let mut set = [false; 35];
        for s in items {
            set[Self::slot(s)] = true;
        }
        SpellingSet(set)
    }

    fn contains(&self, s: NameAcc) -> bool {
        self.0[Self::slot(s)]
    }
}

fn is_wrong_color(global_ks: KeySignature, a: Accidental) -> bool {
    let k = global_ks.count();
    (k > 0 && a.alteration() < 0) || (k < 0 && a.alteration() > 0)
}

fn is_cflat_like(s: NameAcc) -> bool {
    matches!(
        s,
        (NoteName::C, Accidental::FLAT)
            | (NoteName::B, Accidental::SHARP)
            | (NoteName::F, Accidental::FLAT)
            | (NoteName::E, Accidental::SHARP)
    )
}

#[derive(Clone, Debug)]
struct TupleContext {
    order: WeightOrder,
    local_scale: SpellingSet,
    local_chromatic: ChromaticScale,
    global_ks: KeySignature,
}

/// Precomputed weighting for one (row key, mode) pair.
#[derive(Clone, Debug)]
pub struct WeightModel {
    key: Key,
    lead: SpellingSet,
    tuple: Option<TupleContext>,
    tie_scale: ChromaticScale,
}

impl WeightModel {
    pub fn new(key: Key, mode: WeightMode) -> Self {
        let lead = SpellingSet::from_iter(lead_degree_accidentals(&key));
        match mode {
            WeightMode::Scalar => WeightModel {
                key,
                lead,
                tuple: None,
                tie_scale: chromatic_harmonic_scale(&key),
            },
            WeightMode::Tuple {
                order,
                local_key,
                global_ks,
            } => {
                let local_chromatic = chromatic_harmonic_scale(&local_key);
                WeightModel {
                    key,
                    lead,
                    tuple: Some(TupleContext {
                        order,
                        local_scale: SpellingSet::from_iter(scale_spellings(&local_key)),
                        local_chromatic,
                        global_ks,
                    }),
                    tie_scale: local_chromatic,
                }
            }
        }
    }

    pub fn key(&self) -> &Key {
        &self.key
    }

    pub fn compare(&self, a: &Weight, b: &Weight) -> Ordering {
        match &self.tuple {
            None => a.accid.cmp(&b.accid),
            Some(t) => t.order.compare(a, b),
        }
    }

    pub fn scalar(&self, counted: bool, spelling: NameAcc) -> u32 {
        if !counted {
            return 0;
        }
        if self.key.mode == Mode::Minor && self.lead.contains(spelling) {
            return 0;
        }
        if spelling.1.is_double() {
            2
        } else {
            1
        }
    }

    pub fn edge(&self, counted: bool, spelling: NameAcc) -> Weight {
        let accid = self.scalar(counted, spelling);
        match &self.tuple {
            None => Weight::scalar(accid),
            Some(t) => {
                let pc = pc_of(spelling.0, spelling.1);
                Weight {
                    accid,
                    dist: (counted && !t.local_scale.contains(spelling)) as u32,
                    chromarm: (t.local_chromatic.get(pc) != spelling) as u32,
                    color: (counted && is_wrong_color(t.global_ks, spelling.1)) as u32,
                    cflat: is_cflat_like(spelling) as u32,
                }
            }
        }
    }

    /// Tie-break rank of a spelling, lower is preferred: inside the reference
    /// chromatic scale first, then smaller alteration, then lower letter.
    pub fn tie_rank(&self, spelling: NameAcc) -> (bool, u8, usize) {
        (
            !self.tie_scale.contains(spelling),
            spelling.1.alteration().unsigned_abs(),
            spelling.0.index(),
        )
    }
}

/// Plain accidental weight of one transition.
pub fn scalar_weight(counted: bool, key: &Key, spelling: NameAcc) -> u32 {
    WeightModel::new(*key, WeightMode::Scalar).scalar(counted, spelling)
}

/// Five-component weight of one transition.
pub fn refined_weight(
    counted: bool,
    key: &Key,
    spelling: NameAcc,
    local_key: &Key,
    global_ks: KeySignature,
) -> Weight {
    let mode = WeightMode::Tuple {
        order: WeightOrder::Sum,
        local_key: *local_key,
        global_ks,
    };
    WeightModel::new(*key, mode).edge(counted, spelling)
}
