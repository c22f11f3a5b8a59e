//! Standard MIDI File ingestion. Bars and in-bar onsets are derived from
//! cumulative ticks and the time signatures in force.

use std::collections::{HashMap, VecDeque};

use midly::{MetaMessage, MidiMessage, Smf, Timing, TrackEventKind};
use num_rational::Rational64;

use crate::error::InputError;
use crate::input::{InputNote, Part};
use crate::pitch::MidiPitch;

/// Result of reading an SMF: the part plus non-fatal diagnostics.
#[derive(Debug, Clone)]
pub struct SmfImport {
    pub part: Part,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    start_tick: u64,
    start_bar: u64,
    ticks_per_bar: Rational64,
}

struct BarClock {
    segments: Vec<Segment>,
}

impl BarClock {
    fn new(tpq: u64, mut signatures: Vec<(u64, u8, u8)>) -> Self {
        signatures.sort_by_key(|s| s.0);
        // later events at the same tick override earlier ones
        let mut dedup: Vec<(u64, u8, u8)> = Vec::new();
        for s in signatures {
            match dedup.last_mut() {
                Some(last) if last.0 == s.0 => *last = s,
                _ => dedup.push(s),
            }
        }
        if dedup.first().is_none_or(|s| s.0 > 0) {
            dedup.insert(0, (0, 4, 2));
        }
        let mut segments: Vec<Segment> = Vec::with_capacity(dedup.len());
        for (tick, num, den_pow) in dedup {
            let ticks_per_bar =
                Rational64::new(tpq as i64 * 4 * num.max(1) as i64, 1i64 << den_pow.min(30));
            let start_bar = match segments.last() {
                None => 0,
                Some(prev) => {
                    let span = Rational64::from_integer((tick - prev.start_tick) as i64);
                    prev.start_bar + (span / prev.ticks_per_bar).ceil().to_integer() as u64
                }
            };
            segments.push(Segment {
                start_tick: tick,
                start_bar,
                ticks_per_bar,
            });
        }
        BarClock { segments }
    }

    fn segment(&self, tick: u64) -> &Segment {
        let idx = self.segments.partition_point(|s| s.start_tick <= tick);
        &self.segments[idx.saturating_sub(1)]
    }

    /// Bar index, onset within the bar, and the bar length in ticks.
    fn locate(&self, tick: u64) -> (u64, Rational64, Rational64) {
        let seg = self.segment(tick);
        let rel = Rational64::from_integer((tick - seg.start_tick) as i64) / seg.ticks_per_bar;
        let whole = rel.floor();
        (
            seg.start_bar + whole.to_integer() as u64,
            rel - whole,
            seg.ticks_per_bar,
        )
    }
}

/// Reads a format 0 or 1 SMF with metrical timing. All tracks are merged.
pub fn ingest_smf(bytes: &[u8]) -> Result<SmfImport, InputError> {
    let smf = Smf::parse(bytes).map_err(|e| InputError::Smf(e.to_string()))?;
    let tpq = match smf.header.timing {
        Timing::Metrical(t) => t.as_int() as u64,
        Timing::Timecode(..) => {
            return Err(InputError::Smf("SMPTE timecode timing is not supported".into()))
        }
    };
    if tpq == 0 {
        return Err(InputError::Smf("zero ticks per quarter note".into()));
    }

    let mut signatures = Vec::new();
    let mut open: HashMap<(u8, u8), VecDeque<u64>> = HashMap::new();
    // (start, end, key, order of appearance)
    let mut spans: Vec<(u64, u64, u8, usize)> = Vec::new();
    let mut warnings = Vec::new();

    for track in &smf.tracks {
        let mut tick = 0u64;
        for event in track {
            tick += event.delta.as_int() as u64;
            match event.kind {
                TrackEventKind::Meta(MetaMessage::TimeSignature(num, den_pow, _, _)) => {
                    signatures.push((tick, num, den_pow));
                }
                TrackEventKind::Midi { channel, message } => {
                    let (key, on) = match message {
                        MidiMessage::NoteOn { key, vel } => (key.as_int(), vel.as_int() > 0),
                        MidiMessage::NoteOff { key, .. } => (key.as_int(), false),
                        _ => continue,
                    };
                    let slot = open.entry((channel.as_int(), key)).or_default();
                    if on {
                        slot.push_back(tick);
                    } else if let Some(start) = slot.pop_front() {
                        let order = spans.len();
                        spans.push((start, tick, key, order));
                    }
                }
                _ => {}
            }
        }
    }
    let mut dangling: Vec<((u8, u8), VecDeque<u64>)> =
        open.into_iter().filter(|(_, q)| !q.is_empty()).collect();
    dangling.sort_by_key(|(k, _)| *k);
    for ((channel, key), starts) in dangling {
        warnings.push(format!(
            "{} note-on event(s) for key {key} on channel {channel} never released; dropped",
            starts.len()
        ));
    }

    let first_signature = signatures.iter().map(|s| s.0).min();
    if let Some(first_note) = spans.iter().map(|s| s.0).min() {
        if first_signature.is_none_or(|t| first_note < t) {
            warnings.push("notes precede the first time signature; assuming 4/4".to_string());
        }
    }

    let clock = BarClock::new(tpq, signatures);
    spans.sort_by_key(|s| (s.0, s.3));
    let mut notes = Vec::with_capacity(spans.len());
    for (start, end, key, _) in spans {
        let (bar, onset, ticks_per_bar) = clock.locate(start);
        let duration = Rational64::from_integer((end - start) as i64) / ticks_per_bar;
        let midi = MidiPitch::new(key as i64).expect("7-bit MIDI key");
        let bar = u32::try_from(bar).map_err(|_| InputError::Smf("bar index overflow".into()))?;
        notes.push(InputNote::new(midi, bar, onset, duration));
    }
    Ok(SmfImport {
        part: Part::new(notes, None),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use midly::num::{u15, u28, u4, u7};
    use midly::{Format, Header, TrackEvent};

    fn note_on(delta: u32, key: u8) -> TrackEvent<'static> {
        TrackEvent {
            delta: u28::new(delta),
            kind: TrackEventKind::Midi {
                channel: u4::new(0),
                message: MidiMessage::NoteOn {
                    key: u7::new(key),
                    vel: u7::new(80),
                },
            },
        }
    }

    fn note_off(delta: u32, key: u8) -> TrackEvent<'static> {
        TrackEvent {
            delta: u28::new(delta),
            kind: TrackEventKind::Midi {
                channel: u4::new(0),
                message: MidiMessage::NoteOff {
                    key: u7::new(key),
                    vel: u7::new(0),
                },
            },
        }
    }

    fn time_sig(delta: u32, num: u8, den_pow: u8) -> TrackEvent<'static> {
        TrackEvent {
            delta: u28::new(delta),
            kind: TrackEventKind::Meta(MetaMessage::TimeSignature(num, den_pow, 24, 8)),
        }
    }

    fn end() -> TrackEvent<'static> {
        TrackEvent {
            delta: u28::new(0),
            kind: TrackEventKind::Meta(MetaMessage::EndOfTrack),
        }
    }

    fn write(tracks: Vec<Vec<TrackEvent<'static>>>) -> Vec<u8> {
        let format = if tracks.len() == 1 {
            Format::SingleTrack
        } else {
            Format::Parallel
        };
        let smf = Smf {
            header: Header::new(format, Timing::Metrical(u15::new(480))),
            tracks,
        };
        let mut out = Vec::new();
        smf.write_std(&mut out).unwrap();
        out
    }

    #[test]
    fn downbeat_of_second_bar() {
        let bytes = write(vec![vec![time_sig(0, 4, 2), note_on(1920, 60), note_off(480, 60), end()]]);
        let import = ingest_smf(&bytes).unwrap();
        let n = &import.part.notes()[0];
        assert_eq!(n.bar, 1);
        assert_eq!(n.onset, Rational64::from_integer(0));
        assert_eq!(n.duration, Rational64::new(1, 4));
        assert!(import.warnings.is_empty());
    }

    #[test]
    fn second_beat() {
        let bytes = write(vec![vec![time_sig(0, 4, 2), note_on(480, 62), note_off(480, 62), end()]]);
        let n = ingest_smf(&bytes).unwrap().part.notes()[0].clone();
        assert_eq!(n.bar, 0);
        assert_eq!(n.onset, Rational64::new(1, 4));
    }

    #[test]
    fn meter_change_after_two_bars() {
        let bytes = write(vec![vec![
            time_sig(0, 4, 2),
            time_sig(480 * 8, 3, 2),
            note_on(480 * 3, 64),
            note_off(480, 64),
            end(),
        ]]);
        let n = ingest_smf(&bytes).unwrap().part.notes()[0].clone();
        assert_eq!(n.bar, 3);
        assert_eq!(n.onset, Rational64::from_integer(0));
        assert_eq!(n.duration, Rational64::new(1, 3));
    }

    #[test]
    fn missing_time_signature_defaults_to_common_time() {
        let bytes = write(vec![vec![note_on(960, 60), note_off(480, 60), end()]]);
        let import = ingest_smf(&bytes).unwrap();
        assert_eq!(import.part.notes()[0].onset, Rational64::new(1, 2));
        assert_eq!(import.warnings.len(), 1);
    }

    #[test]
    fn tracks_are_merged_and_chords_detected() {
        let bytes = write(vec![
            vec![time_sig(0, 3, 2), end()],
            vec![note_on(0, 74), note_off(480, 74), end()],
            vec![note_on(0, 66), note_off(480, 66), end()],
        ]);
        let part = ingest_smf(&bytes).unwrap().part;
        let ev = crate::input::enumerate(&part);
        assert_eq!(ev.len(), 2);
        assert_eq!(ev[0].midi.value(), 66);
        assert!(ev[0].simultaneous_with_next);
    }

    #[test]
    fn garbage_is_rejected() {
        assert!(ingest_smf(b"not a midi file").is_err());
    }
}
