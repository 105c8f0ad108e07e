//! Gesture assignment against a timing track.
//!
//! Candidates are anchored to prosodic landmarks and placed greedily by
//! priority; a candidate that needs an articulator already busy in the same
//! interval is rejected. Physiological blinking and breathing are laid over
//! the result, and the phone track is mapped onto visemes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::prosody::{Millis, TimingTrack};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GestureClass {
    Emblematic,
    Iconic,
    Deictic,
    Contrast,
    TurnAccompanying,
    Emotional,
    Backchannel,
}

impl GestureClass {
    pub const ALL: [GestureClass; 7] = [
        GestureClass::Emblematic,
        GestureClass::Iconic,
        GestureClass::Deictic,
        GestureClass::Contrast,
        GestureClass::TurnAccompanying,
        GestureClass::Emotional,
        GestureClass::Backchannel,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GestureClass::Emblematic => "emblematic",
            GestureClass::Iconic => "iconic",
            GestureClass::Deictic => "deictic",
            GestureClass::Contrast => "contrast",
            GestureClass::TurnAccompanying => "turnAccompanying",
            GestureClass::Emotional => "emotional",
            GestureClass::Backchannel => "backchannel",
        }
    }

    pub fn parse(s: &str) -> Option<GestureClass> {
        GestureClass::ALL.into_iter().find(|c| c.as_str() == s)
    }

    /// Classes whose stroke is aligned with a pitch accent.
    pub fn accent_anchored(self) -> bool {
        matches!(self, GestureClass::Emblematic | GestureClass::Iconic | GestureClass::Deictic | GestureClass::Contrast)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Articulator {
    Brows,
    Gaze,
    Head,
    ArmLeft,
    ArmRight,
    Posture,
}

impl Articulator {
    pub const ALL: [Articulator; 6] = [
        Articulator::Brows,
        Articulator::Gaze,
        Articulator::Head,
        Articulator::ArmLeft,
        Articulator::ArmRight,
        Articulator::Posture,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Articulator::Brows => "brows",
            Articulator::Gaze => "gaze",
            Articulator::Head => "head",
            Articulator::ArmLeft => "armLeft",
            Articulator::ArmRight => "armRight",
            Articulator::Posture => "posture",
        }
    }

    pub fn parse(s: &str) -> Option<Articulator> {
        Articulator::ALL.into_iter().find(|a| a.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scope {
    Act,
    Phrase(usize),
    Word(usize),
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Act => f.write_str("act"),
            Scope::Phrase(i) => write!(f, "phrase:{i}"),
            Scope::Word(i) => write!(f, "word:{i}"),
        }
    }
}

impl FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad scope {s:?}");
        match s.split_once(':') {
            None if s == "act" => Ok(Scope::Act),
            Some(("phrase", i)) => i.parse().map(Scope::Phrase).map_err(|_| bad()),
            Some(("word", i)) => i.parse().map(Scope::Word).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GestureCandidate {
    pub class: GestureClass,
    /// Free-form gesture name, e.g. `nod` or `hangingShoulders`.
    pub label: String,
    pub priority: i32,
    pub intensity: f64,
    pub direction: Option<String>,
    pub stretch: Option<f64>,
    pub scope: Scope,
    pub articulators: Vec<Articulator>,
}

impl GestureCandidate {
    pub fn new(class: GestureClass, label: &str, priority: i32, scope: Scope, articulators: &[Articulator]) -> Self {
        GestureCandidate {
            class,
            label: label.to_string(),
            priority,
            intensity: 1.0,
            direction: None,
            stretch: None,
            scope,
            articulators: articulators.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseKind {
    Preparation,
    Stroke,
    Retraction,
    /// Single onset/offset pair for faces and postures.
    Hold,
}

impl PhaseKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseKind::Preparation => "preparation",
            PhaseKind::Stroke => "stroke",
            PhaseKind::Retraction => "retraction",
            PhaseKind::Hold => "hold",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Phase {
    pub kind: PhaseKind,
    pub start: Millis,
    pub end: Millis,
}

/// What fixed the stroke onset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    PitchAccent,
    StressedSyllable,
    ScopeOnset,
    PhraseBoundary,
    Pause,
    UtteranceStart,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduledGesture {
    /// Index into the candidate list.
    pub candidate: usize,
    pub class: GestureClass,
    pub label: String,
    pub articulators: Vec<Articulator>,
    pub phases: Vec<Phase>,
    pub anchor: Anchor,
}

impl ScheduledGesture {
    /// Start of the first phase to end of the last.
    pub fn span(&self) -> (Millis, Millis) {
        (self.phases[0].start, self.phases[self.phases.len() - 1].end)
    }

    /// Onset of the stroke, or of the hold for single-phase events.
    pub fn onset(&self) -> Millis {
        self.phases
            .iter()
            .find(|p| matches!(p.kind, PhaseKind::Stroke | PhaseKind::Hold))
            .map_or(self.phases[0].start, |p| p.start)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    ArticulatorConflict { articulator: Articulator, with: usize },
    UnresolvedScope,
    EmptyStroke,
    NoArticulator,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::ArticulatorConflict { articulator, with } => {
                write!(f, "ArticulatorConflict: {} already used by candidate {with}", articulator.as_str())
            }
            RejectReason::UnresolvedScope => f.write_str("UnresolvedScope"),
            RejectReason::EmptyStroke => f.write_str("EmptyStroke"),
            RejectReason::NoArticulator => f.write_str("NoArticulator"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub candidate: usize,
    pub reason: RejectReason,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchedulerConfig {
    pub preparation_ms: Millis,
    pub stroke_ms: Millis,
    pub retraction_ms: Millis,
}

impl Default for SchedulerConfig {
    fn default() -> Self {
        SchedulerConfig { preparation_ms: 200, stroke_ms: 300, retraction_ms: 200 }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Schedule {
    /// In the order they were accepted.
    pub gestures: Vec<ScheduledGesture>,
    pub rejections: Vec<Rejection>,
}

/// Time interval covered by a scope, or `None` if it does not resolve.
pub fn scope_interval(scope: Scope, track: &TimingTrack) -> Option<(Millis, Millis)> {
    match scope {
        Scope::Act => Some((0, track.duration())),
        Scope::Phrase(i) => track.phrases.get(i).map(|p| (p.start_ms, p.end_ms)),
        Scope::Word(i) => track.words.get(i).map(|w| (w.start, w.end)),
    }
}

fn scope_words(scope: Scope, track: &TimingTrack) -> std::ops::Range<usize> {
    match scope {
        Scope::Act => 0..track.words.len(),
        Scope::Phrase(i) => track.phrases.get(i).map_or(0..0, |p| p.first..p.end),
        Scope::Word(i) => i..i + 1,
    }
}

/// Stroke onset of an accent-anchored gesture: the vowel of the first
/// accented syllable in scope, else of the first stressed syllable, else the
/// scope onset.
pub fn accent_anchor(scope: Scope, track: &TimingTrack) -> Option<(Millis, Anchor)> {
    let (onset, _) = scope_interval(scope, track)?;
    let words = scope_words(scope, track);
    let vowel_onset = |syl: usize| {
        let s = &track.syllables[syl];
        s.nucleus.map_or(track.phones[s.start].start, |n| track.phones[n].start)
    };
    let accented =
        track.accents.iter().filter(|a| words.contains(&track.syllables[a.syllable].word)).map(|a| a.syllable).min();
    if let Some(s) = accented {
        return Some((vowel_onset(s), Anchor::PitchAccent));
    }
    let stressed =
        (0..track.syllables.len()).find(|&i| track.syllables[i].stressed && words.contains(&track.syllables[i].word));
    if let Some(s) = stressed {
        return Some((vowel_onset(s), Anchor::StressedSyllable));
    }
    Some((onset, Anchor::ScopeOnset))
}

fn nearest(times: impl Iterator<Item = Millis>, target: Millis) -> Option<Millis> {
    // ties go to the earlier time
    times.min_by_key(|&t| (t.abs_diff(target), t))
}

fn three_phase(onset: Millis, end: Millis, cfg: &SchedulerConfig) -> Option<Vec<Phase>> {
    let stroke_end = (onset + cfg.stroke_ms).min(end);
    if stroke_end <= onset {
        return None;
    }
    Some(vec![
        Phase { kind: PhaseKind::Preparation, start: onset.saturating_sub(cfg.preparation_ms), end: onset },
        Phase { kind: PhaseKind::Stroke, start: onset, end: stroke_end },
        Phase { kind: PhaseKind::Retraction, start: stroke_end, end: (stroke_end + cfg.retraction_ms).min(end) },
    ])
}

fn place(
    c: &GestureCandidate,
    track: &TimingTrack,
    cfg: &SchedulerConfig,
) -> Result<(Vec<Phase>, Anchor), RejectReason> {
    let end = track.duration();
    let (scope_start, scope_end) = scope_interval(c.scope, track).ok_or(RejectReason::UnresolvedScope)?;
    if c.class.accent_anchored() {
        let (onset, anchor) = accent_anchor(c.scope, track).ok_or(RejectReason::UnresolvedScope)?;
        return three_phase(onset, end, cfg).map(|p| (p, anchor)).ok_or(RejectReason::EmptyStroke);
    }
    match c.class {
        GestureClass::Emotional => {
            let (start, anchor) = if c.articulators.contains(&Articulator::Posture) {
                match nearest(track.pauses.iter().map(|p| p.start).filter(|&s| s < scope_end), scope_start) {
                    Some(s) => (s, Anchor::Pause),
                    None => (0, Anchor::UtteranceStart),
                }
            } else {
                (scope_start, Anchor::ScopeOnset)
            };
            if scope_end <= start {
                return Err(RejectReason::EmptyStroke);
            }
            Ok((vec![Phase { kind: PhaseKind::Hold, start, end: scope_end }], anchor))
        }
        _ => {
            let boundaries = track.phrases.iter().flat_map(|p| [p.start_ms, p.end_ms]);
            let (onset, anchor) = match nearest(boundaries, scope_start) {
                Some(t) => (t, Anchor::PhraseBoundary),
                None => (scope_start, Anchor::ScopeOnset),
            };
            three_phase(onset, end, cfg).map(|p| (p, anchor)).ok_or(RejectReason::EmptyStroke)
        }
    }
}

/// Greedy scheduling by descending priority; ties keep input order.
pub fn schedule(candidates: &[GestureCandidate], track: &TimingTrack, cfg: &SchedulerConfig) -> Schedule {
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(candidates[i].priority));
    let mut out = Schedule::default();
    for i in order {
        let c = &candidates[i];
        if c.articulators.is_empty() {
            out.rejections.push(Rejection { candidate: i, reason: RejectReason::NoArticulator });
            continue;
        }
        let (phases, anchor) = match place(c, track, cfg) {
            Ok(p) => p,
            Err(reason) => {
                out.rejections.push(Rejection { candidate: i, reason });
                continue;
            }
        };
        let (start, end) = (phases[0].start, phases[phases.len() - 1].end);
        let conflict = out.gestures.iter().find_map(|g| {
            let (gs, ge) = g.span();
            if start >= ge || gs >= end {
                return None;
            }
            c.articulators
                .iter()
                .find(|a| g.articulators.contains(a))
                .map(|&articulator| RejectReason::ArticulatorConflict { articulator, with: g.candidate })
        });
        match conflict {
            Some(reason) => out.rejections.push(Rejection { candidate: i, reason }),
            None => out.gestures.push(ScheduledGesture {
                candidate: i,
                class: c.class,
                label: c.label.clone(),
                articulators: c.articulators.clone(),
                phases,
                anchor,
            }),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhysiologyConfig {
    pub blink_period_ms: Millis,
    pub blink_min_gap_ms: Millis,
    pub blink_exclusion_ms: Millis,
    pub blink_ms: Millis,
    pub breath_period_ms: Millis,
    /// Pauses strictly longer than this restart the breathing cycle.
    pub breath_reset_pause_ms: Millis,
}

impl Default for PhysiologyConfig {
    fn default() -> Self {
        PhysiologyConfig {
            blink_period_ms: 4000,
            blink_min_gap_ms: 500,
            blink_exclusion_ms: 300,
            blink_ms: 150,
            breath_period_ms: 4000,
            breath_reset_pause_ms: 150,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Blink {
    pub start: Millis,
    pub end: Millis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BreathCycle {
    pub start: Millis,
    pub end: Millis,
}

/// Blink beat snapped to syllable boundaries, and breathing cycles.
pub fn physiological_layer(
    scheduled: &[ScheduledGesture],
    track: &TimingTrack,
    cfg: &PhysiologyConfig,
) -> (Vec<Blink>, Vec<BreathCycle>) {
    let duration = track.duration();
    let boundaries = track.syllable_boundaries();
    let eye_events: Vec<(Millis, Millis)> = scheduled
        .iter()
        .filter(|g| g.articulators.iter().any(|a| matches!(a, Articulator::Gaze | Articulator::Brows)))
        .map(ScheduledGesture::span)
        .collect();
    let mut blinks: Vec<Blink> = Vec::new();
    if cfg.blink_period_ms > 0 {
        let mut target = cfg.blink_period_ms;
        while target < duration {
            if let Some(t) = nearest(boundaries.iter().copied(), target) {
                let excluded =
                    eye_events.iter().any(|&(s, e)| t + cfg.blink_exclusion_ms > s && t < e + cfg.blink_exclusion_ms);
                let too_close = blinks.last().is_some_and(|b| t < b.start + cfg.blink_min_gap_ms);
                if !excluded && !too_close {
                    blinks.push(Blink { start: t, end: t + cfg.blink_ms });
                }
            }
            target += cfg.blink_period_ms;
        }
    }
    let mut breaths = Vec::new();
    if cfg.breath_period_ms > 0 {
        let resets: Vec<Millis> =
            track.pauses.iter().filter(|p| p.end - p.start > cfg.breath_reset_pause_ms).map(|p| p.start).collect();
        let mut t = 0;
        while t < duration {
            let regular = t + cfg.breath_period_ms;
            let next = resets.iter().copied().find(|&s| t < s && s < regular).unwrap_or(regular);
            breaths.push(BreathCycle { start: t, end: next.min(duration) });
            t = next;
        }
    }
    (blinks, breaths)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VisemeError {
    #[error("no viseme for phone {0}")]
    UnknownPhone(String),
    #[error("viseme table line {line}: {message}")]
    Table { line: usize, message: String },
}

/// Phone symbol to viseme label: `phone viseme` per line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VisemeTable {
    map: BTreeMap<String, String>,
}

impl VisemeTable {
    pub fn get(&self, phone: &str) -> Option<&str> {
        self.map.get(phone).map(String::as_str)
    }

    pub fn insert(&mut self, phone: &str, viseme: &str) {
        self.map.insert(phone.to_string(), viseme.to_string());
    }
}

impl FromStr for VisemeTable {
    type Err = VisemeError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut table = VisemeTable::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| VisemeError::Table { line: idx + 1, message: message.to_string() };
            let cols: Vec<&str> = line.split_whitespace().collect();
            let [phone, viseme] = cols[..] else {
                return Err(err("expected `phone viseme`"));
            };
            if table.map.insert(phone.to_string(), viseme.to_string()).is_some() {
                return Err(err("phone listed twice"));
            }
        }
        Ok(table)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Viseme {
    pub label: String,
    pub start: Millis,
    pub end: Millis,
}

/// One viseme per phone; touching phones with the same viseme merge.
pub fn viseme_track(track: &TimingTrack, table: &VisemeTable) -> Result<Vec<Viseme>, VisemeError> {
    let mut out: Vec<Viseme> = Vec::new();
    for p in &track.phones {
        let label = table.get(&p.symbol).ok_or_else(|| VisemeError::UnknownPhone(p.symbol.clone()))?;
        match out.last_mut() {
            Some(v) if v.label == label && v.end == p.start => v.end = p.end,
            _ => out.push(Viseme { label: label.to_string(), start: p.start, end: p.end }),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affect::DimensionPoint;
    use crate::document::{AccentLabel, BoundaryTone};
    use crate::prosody::{AccentMark, Pause, PhoneSeg, PhraseSeg, Syllable, WordSeg};

    fn phone(symbol: &str, start: Millis, end: Millis, vowel: bool, stressed: bool, word: usize) -> PhoneSeg {
        PhoneSeg { symbol: symbol.into(), start, end, vowel, stressed, word }
    }

    /// "car , car": two phrases with a 200 ms pause, accent on the second.
    fn track() -> TimingTrack {
        let mut t = TimingTrack::empty("u1", DimensionPoint::ORIGIN);
        t.phones = vec![
            phone("k", 0, 80, false, false, 0),
            phone("aa", 80, 230, true, true, 0),
            phone("r", 230, 310, false, false, 0),
            phone("k", 510, 590, false, false, 2),
            phone("aa", 590, 740, true, true, 2),
            phone("r", 740, 820, false, false, 2),
        ];
        t.syllables = vec![
            Syllable { start: 0, end: 3, stressed: true, word: 0, nucleus: Some(1) },
            Syllable { start: 3, end: 6, stressed: true, word: 2, nucleus: Some(4) },
        ];
        t.words = vec![
            WordSeg { text: "car".into(), start: 0, end: 310 },
            WordSeg { text: ",".into(), start: 310, end: 310 },
            WordSeg { text: "car".into(), start: 510, end: 820 },
        ];
        t.accents = vec![AccentMark { syllable: 1, word: 2, label: AccentLabel::High, nuclear: true }];
        t.phrases = vec![
            PhraseSeg { first: 0, end: 2, tone: BoundaryTone::Low, start_ms: 0, end_ms: 310 },
            PhraseSeg { first: 2, end: 3, tone: BoundaryTone::Low, start_ms: 510, end_ms: 820 },
        ];
        t.pauses = vec![Pause { start: 310, end: 510 }];
        t
    }

    #[test]
    fn deictic_at_stressed_vowel() {
        let c = GestureCandidate::new(GestureClass::Deictic, "point", 5, Scope::Word(0), &[Articulator::ArmRight]);
        let s = schedule(&[c], &track(), &SchedulerConfig::default());
        let g = &s.gestures[0];
        assert_eq!(g.onset(), 80);
        assert_eq!(g.anchor, Anchor::StressedSyllable);
        assert_eq!(g.phases[0], Phase { kind: PhaseKind::Preparation, start: 0, end: 80 });
    }

    #[test]
    fn accent_preferred_over_stress() {
        let c = GestureCandidate::new(GestureClass::Iconic, "shape", 5, Scope::Act, &[Articulator::ArmLeft]);
        let s = schedule(&[c], &track(), &SchedulerConfig::default());
        assert_eq!((s.gestures[0].onset(), s.gestures[0].anchor), (590, Anchor::PitchAccent));
    }

    #[test]
    fn lower_priority_conflict_rejected() {
        let lo = GestureCandidate::new(GestureClass::Deictic, "point", 3, Scope::Word(0), &[Articulator::ArmRight]);
        let hi = GestureCandidate::new(GestureClass::Deictic, "point", 5, Scope::Word(0), &[Articulator::ArmRight]);
        let s = schedule(&[lo, hi], &track(), &SchedulerConfig::default());
        assert_eq!(s.gestures.len(), 1);
        assert_eq!(s.gestures[0].candidate, 1);
        assert_eq!(
            s.rejections,
            [Rejection {
                candidate: 0,
                reason: RejectReason::ArticulatorConflict { articulator: Articulator::ArmRight, with: 1 }
            }]
        );
    }

    #[test]
    fn eyebrow_at_phrase_start() {
        let c =
            GestureCandidate::new(GestureClass::TurnAccompanying, "raise", 3, Scope::Phrase(1), &[Articulator::Brows]);
        let s = schedule(&[c], &track(), &SchedulerConfig::default());
        assert_eq!((s.gestures[0].onset(), s.gestures[0].anchor), (510, Anchor::PhraseBoundary));
    }

    #[test]
    fn posture_from_pause() {
        let c =
            GestureCandidate::new(GestureClass::Emotional, "hangingShoulders", 1, Scope::Act, &[Articulator::Posture]);
        let s = schedule(&[c], &track(), &SchedulerConfig::default());
        assert_eq!(s.gestures[0].phases, [Phase { kind: PhaseKind::Hold, start: 310, end: 820 }]);
        assert_eq!(s.gestures[0].anchor, Anchor::Pause);
    }

    #[test]
    fn visemes_merge_and_fail() {
        let mut table: VisemeTable = "k kk\naa aa\nr RR\n".parse().unwrap();
        let v = viseme_track(&track(), &table).unwrap();
        assert_eq!(v.len(), 6);
        assert_eq!(v[0], Viseme { label: "kk".into(), start: 0, end: 80 });
        table.insert("r", "aa");
        let v = viseme_track(&track(), &table).unwrap();
        assert_eq!(v[1], Viseme { label: "aa".into(), start: 80, end: 310 });
        let err = viseme_track(&track(), &"k kk\n".parse().unwrap()).unwrap_err();
        assert_eq!(err, VisemeError::UnknownPhone("aa".into()));
    }

    #[test]
    fn empty_track_has_no_physiology() {
        let t = TimingTrack::empty("u", DimensionPoint::ORIGIN);
        let (b, r) = physiological_layer(&[], &t, &PhysiologyConfig::default());
        assert!(b.is_empty() && r.is_empty());
    }

    #[test]
    fn breath_resets_at_pause() {
        let cfg = PhysiologyConfig { breath_period_ms: 400, ..Default::default() };
        let (_, r) = physiological_layer(&[], &track(), &cfg);
        assert_eq!(
            r,
            [
                BreathCycle { start: 0, end: 310 },
                BreathCycle { start: 310, end: 710 },
                BreathCycle { start: 710, end: 820 },
            ]
        );
    }

    #[test]
    fn blink_snaps_and_is_suppressed() {
        let cfg = PhysiologyConfig { blink_period_ms: 300, ..Default::default() };
        // targets 300, 600: snapped to 310, 510 (590 is 10 further)
        let (b, _) = physiological_layer(&[], &track(), &cfg);
        assert_eq!(b.iter().map(|b| b.start).collect::<Vec<_>>(), [310]);
        // 510 is dropped: only 200 ms after 310 with a 500 ms minimum gap
        let brows =
            GestureCandidate::new(GestureClass::TurnAccompanying, "raise", 3, Scope::Word(0), &[Articulator::Brows]);
        let s = schedule(&[brows], &track(), &SchedulerConfig::default());
        let (b, _) = physiological_layer(&s.gestures, &track(), &cfg);
        assert!(b.is_empty());
    }
}
