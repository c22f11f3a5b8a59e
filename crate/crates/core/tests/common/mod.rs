//! Independent reference implementations used as test oracles. Nothing here
//! calls into the crate's tonality or state code: spellings are plain
//! `(letter, alteration)` pairs with C = 0 .. B = 6.
#![allow(dead_code)]

use pse_core::input::NoteEvent;
use pse_core::pitch::{Accidental, NoteName};
use pse_core::MidiPitch;
use rand::Rng;

pub type Sp = (usize, i8);

const BASE: [i32; 7] = [0, 2, 4, 5, 7, 9, 11];
const SHARP_ORDER: [usize; 7] = [3, 0, 4, 1, 5, 2, 6];

pub fn to_pair(sp: Sp) -> (NoteName, Accidental) {
    (NoteName::from_index(sp.0), Accidental::new(sp.1).unwrap())
}

pub fn from_pair((n, a): (NoteName, Accidental)) -> Sp {
    (n.index(), a.alteration())
}

/// Every (letter, alteration) spelling of `pc` within double accidentals,
/// without B##, Fbb, E## and Cbb.
pub fn candidates(pc: i32) -> Vec<Sp> {
    let mut out = Vec::new();
    for (letter, base) in BASE.iter().enumerate() {
        for alt in -2i8..=2 {
            if (base + alt as i32).rem_euclid(12) == pc.rem_euclid(12)
                && !matches!((letter, alt), (6, 2) | (3, -2) | (2, 2) | (0, -2))
            {
                out.push((letter, alt));
            }
        }
    }
    out
}

/// Accidentals implied by a key signature, per letter.
pub fn signature_state(k: i8) -> [i8; 7] {
    let mut s = [0; 7];
    if k > 0 {
        for &l in &SHARP_ORDER[..k as usize] {
            s[l] = 1;
        }
    } else {
        for &l in SHARP_ORDER.iter().rev().take((-k) as usize) {
            s[l] = -1;
        }
    }
    s
}

/// Raised sixth and seventh degrees of the minor key with signature `k`.
pub fn minor_leads(k: i8) -> [Sp; 2] {
    let major_tonic = (4 * k as i32).rem_euclid(7) as usize;
    let tonic = (major_tonic + 5) % 7;
    let s = signature_state(k);
    let sixth = (tonic + 5) % 7;
    let seventh = (tonic + 6) % 7;
    [(sixth, s[sixth] + 1), (seventh, s[seventh] + 1)]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleKey {
    pub sig: i8,
    pub minor: bool,
}

pub fn all_keys() -> Vec<OracleKey> {
    let mut v = Vec::new();
    for minor in [false, true] {
        for sig in -7..=7 {
            v.push(OracleKey { sig, minor });
        }
    }
    v
}

/// Runs of simultaneous notes as index ranges; the flag of the last note of
/// the measure is ignored.
pub fn runs(flags: &[bool]) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 0..flags.len() {
        if i + 1 == flags.len() || !flags[i] {
            out.push(start..i + 1);
            start = i + 1;
        }
    }
    out
}

/// Counted flags of an assignment under the measure-scoped accidental
/// convention, with chord notes judged against the state before the chord.
/// `None` if two notes of a chord share a pitch class but not a letter.
pub fn simulate(pcs: &[i32], flags: &[bool], k: i8, assignment: &[Sp]) -> Option<Vec<bool>> {
    let mut state = signature_state(k);
    let mut counted = vec![false; pcs.len()];
    for run in runs(flags) {
        let frozen = state;
        let mut seen: Vec<(i32, usize)> = Vec::new();
        for i in run {
            let (letter, alt) = assignment[i];
            let pc = pcs[i].rem_euclid(12);
            match seen.iter().find(|(p, _)| *p == pc) {
                Some(&(_, l)) if l != letter => return None,
                Some(_) => counted[i] = false,
                None => {
                    seen.push((pc, letter));
                    counted[i] = frozen[letter] != alt;
                }
            }
            state[letter] = alt;
        }
    }
    Some(counted)
}

pub fn weight(key: OracleKey, counted: bool, sp: Sp) -> u32 {
    if !counted || (key.minor && minor_leads(key.sig).contains(&sp)) {
        0
    } else if sp.1.abs() == 2 {
        2
    } else {
        1
    }
}

pub fn cost(pcs: &[i32], flags: &[bool], key: OracleKey, assignment: &[Sp]) -> Option<u32> {
    let counted = simulate(pcs, flags, key.sig, assignment)?;
    Some(counted.iter().zip(assignment).map(|(&c, &sp)| weight(key, c, sp)).sum())
}

/// Every valid assignment of minimal cost, with that cost.
pub fn brute_force(pcs: &[i32], flags: &[bool], key: OracleKey) -> (u32, Vec<Vec<Sp>>) {
    let cands: Vec<Vec<Sp>> = pcs.iter().map(|&p| candidates(p)).collect();
    let mut best = u32::MAX;
    let mut argmin = Vec::new();
    let mut idx = vec![0usize; pcs.len()];
    loop {
        let a: Vec<Sp> = idx.iter().zip(&cands).map(|(&i, c)| c[i]).collect();
        if let Some(c) = cost(pcs, flags, key, &a) {
            if c < best {
                best = c;
                argmin.clear();
            }
            if c == best {
                argmin.push(a);
            }
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return (best, argmin);
            }
            idx[pos] += 1;
            if idx[pos] < cands[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

pub fn events(midis: &[u8], flags: &[bool]) -> Vec<NoteEvent> {
    midis
        .iter()
        .zip(flags)
        .map(|(&m, &f)| NoteEvent {
            midi: MidiPitch::new(m as i64).unwrap(),
            bar: 0,
            simultaneous_with_next: f,
        })
        .collect()
}

/// A random measure of at most `max_notes` notes with random simultaneity runs.
/// Pitch classes repeat often so that chords exercise the naming constraint.
pub fn random_measure(rng: &mut impl Rng, max_notes: usize) -> (Vec<u8>, Vec<bool>) {
    let n = rng.gen_range(1..=max_notes);
    let pool: Vec<u8> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(48..84)).collect();
    let midis: Vec<u8> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.5) {
                let base = pool[rng.gen_range(0..pool.len())];
                base + 12 * rng.gen_range(0..2)
            } else {
                rng.gen_range(36..96)
            }
        })
        .collect();
    // the last flag is left random: it must be ignored
    let flags: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
    (midis, flags)
}

pub fn pcs_of(midis: &[u8]) -> Vec<i32> {
    midis.iter().map(|&m| m as i32 % 12).collect()
}
