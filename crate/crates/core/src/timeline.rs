//! Flat, time-ordered event lists for playback.

use crate::gesture::{Blink, BreathCycle, Schedule, Viseme};
use crate::prosody::{Millis, TimingTrack};

/// One timed event. Field order is the sort order: start time, then channel
/// name, then the rest.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Event {
    pub start: Millis,
    pub channel: String,
    pub end: Millis,
    pub kind: String,
    pub label: String,
    pub speaker: String,
    pub utterance: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Timeline {
    pub duration: Millis,
    pub events: Vec<Event>,
}

impl Timeline {
    pub fn sort(&mut self) {
        self.events.sort();
    }

    /// Append `other` shifted by `offset` and extend the duration.
    pub fn append(&mut self, other: &Timeline, offset: Millis) {
        self.events.extend(other.events.iter().map(|e| Event {
            start: e.start + offset,
            end: e.end + offset,
            ..e.clone()
        }));
        self.duration = self.duration.max(offset + other.duration);
        self.sort();
    }
}

/// Everything gesture assignment produced for one utterance.
#[derive(Debug, Clone, Copy)]
pub struct UtteranceLayers<'a> {
    pub speaker: &'a str,
    pub track: &'a TimingTrack,
    pub schedule: &'a Schedule,
    pub blinks: &'a [Blink],
    pub breaths: &'a [BreathCycle],
    pub visemes: &'a [Viseme],
}

/// Flatten one utterance into events. Zero-length intervals are dropped.
pub fn utterance_timeline(layers: &UtteranceLayers<'_>) -> Timeline {
    let track = layers.track;
    let utt = track.utterance.as_str();
    let mut events = Vec::new();
    let mut push = |start: Millis, end: Millis, channel: &str, kind: &str, label: &str| {
        if end > start {
            events.push(Event {
                start,
                channel: channel.to_string(),
                end,
                kind: kind.to_string(),
                label: label.to_string(),
                speaker: layers.speaker.to_string(),
                utterance: utt.to_string(),
            });
        }
    };
    for w in &track.words {
        push(w.start, w.end, "speech", "word", &w.text);
    }
    for a in &track.accents {
        let (s, e) = track.syllable_span(a.syllable);
        push(s, e, "prosody", if a.nuclear { "nuclear" } else { "accent" }, a.label.as_str());
    }
    for p in &track.phrases {
        push(p.start_ms, p.end_ms, "prosody", "phrase", p.tone.as_str());
    }
    for v in layers.visemes {
        push(v.start, v.end, "lips", "viseme", &v.label);
    }
    for g in &layers.schedule.gestures {
        let label = format!("{}/{}", g.class.as_str(), g.label);
        for a in &g.articulators {
            for ph in &g.phases {
                push(ph.start, ph.end, a.as_str(), ph.kind.as_str(), &label);
            }
        }
    }
    for b in layers.blinks {
        push(b.start, b.end, "eyelids", "blink", "blink");
    }
    for b in layers.breaths {
        push(b.start, b.end, "breath", "cycle", "breath");
    }
    let mut t = Timeline { duration: track.duration(), events };
    t.sort();
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(start: Millis, end: Millis, channel: &str) -> Event {
        Event {
            start,
            channel: channel.into(),
            end,
            kind: "k".into(),
            label: "l".into(),
            speaker: "s".into(),
            utterance: "u1".into(),
        }
    }

    #[test]
    fn append_shifts_and_sorts() {
        let mut a = Timeline { duration: 500, events: vec![ev(0, 500, "speech")] };
        let b = Timeline { duration: 400, events: vec![ev(0, 100, "lips"), ev(50, 400, "gaze")] };
        a.append(&b, 800);
        assert_eq!(a.duration, 1200);
        let starts: Vec<(Millis, &str)> = a.events.iter().map(|e| (e.start, e.channel.as_str())).collect();
        assert_eq!(starts, [(0, "speech"), (800, "lips"), (850, "gaze")]);
    }

    #[test]
    fn ties_order_by_channel() {
        let mut t = Timeline { duration: 10, events: vec![ev(0, 10, "speech"), ev(0, 5, "lips"), ev(0, 5, "brows")] };
        t.sort();
        let channels: Vec<&str> = t.events.iter().map(|e| e.channel.as_str()).collect();
        assert_eq!(channels, ["brows", "lips", "speech"]);
    }
}
