//! Deterministic stand-in for a speech synthesizer front end.
//!
//! Words are phonetized from a pronunciation lexicon (with a letter fallback),
//! syllabified by maximal onset, given ToBI-style accents and boundary tones,
//! and laid out in time with a fixed per-class duration model. All times are
//! integer milliseconds so that sums are exact.

use std::collections::BTreeMap;
use std::ops::Range;
use std::str::FromStr;

use thiserror::Error;

use crate::affect::DimensionPoint;
use crate::document::{Accent, AccentLabel, Boundary, BoundaryTone, InfoKind, SynthesisDocument, Word};

pub type Millis = u64;

/// Parts of speech that can carry an accent. `X` marks an untagged word in a
/// minimal document and counts as content.
pub const CONTENT_POS: [&str; 8] = ["NOUN", "PROPN", "VERB", "ADJ", "ADV", "NUM", "INTJ", "X"];

pub fn is_content(pos: &str) -> bool {
    CONTENT_POS.contains(&pos)
}

const VOWELS: [&str; 16] =
    ["aa", "ae", "ah", "ao", "aw", "ax", "ay", "eh", "er", "ey", "ih", "iy", "ow", "oy", "uh", "uw"];

pub fn is_vowel(symbol: &str) -> bool {
    VOWELS.contains(&symbol)
}

// Onsets allowed to open a syllable, besides any single consonant but ng.
const CLUSTER_ONSETS: [&[&str]; 27] = [
    &["p", "l"],
    &["p", "r"],
    &["b", "l"],
    &["b", "r"],
    &["t", "r"],
    &["t", "w"],
    &["d", "r"],
    &["d", "w"],
    &["k", "l"],
    &["k", "r"],
    &["k", "w"],
    &["g", "l"],
    &["g", "r"],
    &["f", "l"],
    &["f", "r"],
    &["th", "r"],
    &["sh", "r"],
    &["s", "l"],
    &["s", "m"],
    &["s", "n"],
    &["s", "p"],
    &["s", "t"],
    &["s", "k"],
    &["s", "w"],
    &["s", "p", "r"],
    &["s", "t", "r"],
    &["s", "k", "r"],
];

fn legal_onset(phones: &[Phone]) -> bool {
    match phones {
        [] => true,
        [p] => p.symbol != "ng",
        _ => {
            CLUSTER_ONSETS.iter().any(|c| c.len() == phones.len() && c.iter().zip(phones).all(|(a, b)| *a == b.symbol))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Phone {
    pub symbol: String,
    pub stressed: bool,
}

impl Phone {
    pub fn new(symbol: &str, stressed: bool) -> Self {
        Phone { symbol: symbol.to_string(), stressed }
    }

    pub fn is_vowel(&self) -> bool {
        is_vowel(&self.symbol)
    }

    /// Parse `aa1`-style notation: a trailing `1` marks lexical stress,
    /// other digits are dropped.
    pub fn parse(token: &str) -> Phone {
        let stressed = token.ends_with('1');
        let symbol = token.trim_end_matches(|c: char| c.is_ascii_digit()).to_lowercase();
        Phone { symbol, stressed }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("lexicon line {line}: {message}")]
pub struct LexiconError {
    pub line: usize,
    pub message: String,
}

/// Pronunciation lexicon: `word phone phone ...` per line, `#` comments.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lexicon {
    entries: BTreeMap<String, Vec<Phone>>,
}

impl Lexicon {
    pub fn get(&self, word: &str) -> Option<&[Phone]> {
        self.entries.get(&word.to_lowercase()).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, word: &str, phones: Vec<Phone>) {
        self.entries.insert(word.to_lowercase(), phones);
    }
}

impl FromStr for Lexicon {
    type Err = LexiconError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lex = Lexicon::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut tokens = line.split_whitespace();
            let word = tokens.next().expect("nonempty line").to_lowercase();
            let phones: Vec<Phone> = tokens.map(Phone::parse).collect();
            let err = |message: String| LexiconError { line: idx + 1, message };
            if phones.is_empty() {
                return Err(err(format!("{word} has no phones")));
            }
            if lex.entries.contains_key(&word) {
                return Err(err(format!("{word} listed twice")));
            }
            lex.entries.insert(word, phones);
        }
        Ok(lex)
    }
}

fn letter_phone(c: char) -> Option<&'static str> {
    Some(match c {
        'a' => "ae",
        'e' => "eh",
        'i' => "ih",
        'o' => "aa",
        'u' => "ah",
        'c' | 'q' | 'x' => "k",
        'h' => "hh",
        'j' => "jh",
        'b' => "b",
        'd' => "d",
        'f' => "f",
        'g' => "g",
        'k' => "k",
        'l' => "l",
        'm' => "m",
        'n' => "n",
        'p' => "p",
        'r' => "r",
        's' => "s",
        't' => "t",
        'v' => "v",
        'w' => "w",
        'y' => "y",
        'z' => "z",
        _ => return None,
    })
}

/// Letter-to-phone fallback; the first vowel is stressed. Characters without
/// a letter rule are skipped.
pub fn letter_fallback(text: &str) -> Vec<Phone> {
    let mut phones = Vec::new();
    let mut stressed_one = false;
    for c in text.to_lowercase().chars() {
        if let Some(sym) = letter_phone(c) {
            let stress = is_vowel(sym) && !stressed_one;
            stressed_one |= stress;
            phones.push(Phone::new(sym, stress));
        }
    }
    phones
}

/// Phones of a word: its own transcription, else the lexicon entry, else the
/// letter fallback. Punctuation has no phones.
pub fn phonetize(word: &Word, lexicon: &Lexicon) -> Vec<Phone> {
    if word.is_punctuation() {
        return Vec::new();
    }
    if let Some(t) = &word.phonetic {
        return t.split_whitespace().map(Phone::parse).collect();
    }
    match lexicon.get(&word.text) {
        Some(p) => p.to_vec(),
        None => letter_fallback(&word.text),
    }
}

/// Split a phone string into syllables around vowel nuclei, giving each
/// intervocalic cluster's longest legal onset to the following syllable.
/// A string without vowels is a single syllable.
#[allow(clippy::single_range_in_vec_init)]
pub fn syllabify(phones: &[Phone]) -> Vec<Range<usize>> {
    if phones.is_empty() {
        return Vec::new();
    }
    let nuclei: Vec<usize> = (0..phones.len()).filter(|&i| phones[i].is_vowel()).collect();
    if nuclei.is_empty() {
        return vec![0..phones.len()];
    }
    let mut out = Vec::with_capacity(nuclei.len());
    let mut start = 0;
    for pair in nuclei.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let split = (a + 1..=b).find(|&s| legal_onset(&phones[s..b])).unwrap_or(b);
        out.push(start..split);
        start = split;
    }
    out.push(start..phones.len());
    out
}

fn is_sentence_final(text: &str) -> bool {
    matches!(text, "." | "!" | "?")
}

fn is_phrase_punct(text: &str) -> bool {
    matches!(text, "." | "!" | "?" | "," | ";" | ":")
}

/// Prosodic phrase boundaries. A maximal document breaks at sentence-final
/// punctuation only; a minimal one at every punctuation mark. Trailing words
/// without punctuation close a final declarative phrase.
pub fn phrase_breaks(doc: &SynthesisDocument) -> Vec<Boundary> {
    let breaks_at = |w: &Word| {
        w.is_punctuation() && if doc.is_minimal() { is_phrase_punct(&w.text) } else { is_sentence_final(&w.text) }
    };
    let mut out: Vec<Boundary> = Vec::new();
    let mut start = 0;
    for (i, w) in doc.words.iter().enumerate() {
        if !breaks_at(w) {
            continue;
        }
        let tone = if w.text == "?" { BoundaryTone::High } else { BoundaryTone::Low };
        let only_punct = doc.words[start..=i].iter().all(Word::is_punctuation);
        match out.last_mut() {
            // "?!" and the like: fold into the previous phrase
            Some(prev) if only_punct => prev.word = i,
            _ => out.push(Boundary { word: i, tone }),
        }
        start = i + 1;
    }
    if start < doc.words.len() {
        let last = doc.words.len() - 1;
        match out.last_mut() {
            Some(prev) if doc.words[start..].iter().all(Word::is_punctuation) => prev.word = last,
            _ => out.push(Boundary { word: last, tone: BoundaryTone::Low }),
        }
    }
    out
}

/// Place pitch accents and boundary tones on the document, replacing any
/// earlier assignment.
///
/// With information structure, the rightmost new content word of each rheme
/// span carries the nuclear `H*`, other new content words in the rheme a
/// prenuclear `H*`, and given words are deaccented. Contrastive referents get
/// `L+H*` wherever they occur. Without it, every content word is accented and
/// the last one of each phrase is nuclear.
pub fn assign_prosody(doc: &mut SynthesisDocument) {
    doc.boundaries = phrase_breaks(doc);
    let status = |w: &Word| {
        w.referent
            .as_ref()
            .and_then(|r| doc.referent_status(r))
            .map(|s| (s.given, s.contrastive))
            .unwrap_or((false, false))
    };
    let mut accents: BTreeMap<usize, Accent> = BTreeMap::new();
    match &doc.info {
        Some(spans) => {
            for (i, w) in doc.words.iter().enumerate() {
                if is_content(&w.pos) && status(w).1 {
                    accents.insert(i, Accent { word: i, label: AccentLabel::RisingHigh, nuclear: false });
                }
            }
            for span in spans.iter().filter(|s| s.kind == InfoKind::Rheme) {
                let accentable: Vec<usize> = (span.start..span.end)
                    .filter(|&i| {
                        let w = &doc.words[i];
                        let (given, contrastive) = status(w);
                        is_content(&w.pos) && (!given || contrastive)
                    })
                    .collect();
                for (k, &i) in accentable.iter().enumerate() {
                    let nuclear = k + 1 == accentable.len();
                    let entry = accents.entry(i).or_insert(Accent { word: i, label: AccentLabel::High, nuclear });
                    entry.nuclear = nuclear;
                }
            }
        }
        None => {
            for (start, end, _) in doc.phrases() {
                let content: Vec<usize> = (start..end).filter(|&i| is_content(&doc.words[i].pos)).collect();
                for (k, &i) in content.iter().enumerate() {
                    accents.insert(i, Accent { word: i, label: AccentLabel::High, nuclear: k + 1 == content.len() });
                }
            }
        }
    }
    doc.accents = accents.into_values().collect();
}

/// Per-class phone durations and the phrase-boundary pause.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DurationModel {
    pub consonant_ms: Millis,
    pub vowel_ms: Millis,
    pub stressed_vowel_ms: Millis,
    pub pause_ms: Millis,
}

impl Default for DurationModel {
    fn default() -> Self {
        DurationModel { consonant_ms: 80, vowel_ms: 120, stressed_vowel_ms: 150, pause_ms: 200 }
    }
}

impl DurationModel {
    pub fn is_valid(&self) -> bool {
        self.consonant_ms > 0 && self.vowel_ms > 0 && self.stressed_vowel_ms > 0 && self.pause_ms > 0
    }

    pub fn phone_ms(&self, phone: &Phone) -> Millis {
        match (phone.is_vowel(), phone.stressed) {
            (false, _) => self.consonant_ms,
            (true, false) => self.vowel_ms,
            (true, true) => self.stressed_vowel_ms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhoneSeg {
    pub symbol: String,
    pub start: Millis,
    pub end: Millis,
    pub vowel: bool,
    pub stressed: bool,
    pub word: usize,
}

/// Phones `start..end` of the track.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syllable {
    pub start: usize,
    pub end: usize,
    pub stressed: bool,
    pub word: usize,
    /// Index of the vowel phone, if the syllable has one.
    pub nucleus: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSeg {
    pub text: String,
    pub start: Millis,
    pub end: Millis,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccentMark {
    pub syllable: usize,
    pub word: usize,
    pub label: AccentLabel,
    pub nuclear: bool,
}

/// Words `first..end` forming one intonation phrase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhraseSeg {
    pub first: usize,
    pub end: usize,
    pub tone: BoundaryTone,
    pub start_ms: Millis,
    pub end_ms: Millis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pause {
    pub start: Millis,
    pub end: Millis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingTrack {
    pub utterance: String,
    pub emotion: DimensionPoint,
    pub phones: Vec<PhoneSeg>,
    pub syllables: Vec<Syllable>,
    pub words: Vec<WordSeg>,
    pub accents: Vec<AccentMark>,
    pub phrases: Vec<PhraseSeg>,
    pub pauses: Vec<Pause>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("inconsistent timing track: {0}")]
pub struct TrackError(pub String);

impl TimingTrack {
    pub fn empty(utterance: &str, emotion: DimensionPoint) -> Self {
        TimingTrack {
            utterance: utterance.to_string(),
            emotion,
            phones: Vec::new(),
            syllables: Vec::new(),
            words: Vec::new(),
            accents: Vec::new(),
            phrases: Vec::new(),
            pauses: Vec::new(),
        }
    }

    /// End of the last phone or pause.
    pub fn duration(&self) -> Millis {
        let phones = self.phones.last().map_or(0, |p| p.end);
        let pauses = self.pauses.last().map_or(0, |p| p.end);
        phones.max(pauses)
    }

    pub fn syllable_span(&self, i: usize) -> (Millis, Millis) {
        let s = &self.syllables[i];
        (self.phones[s.start].start, self.phones[s.end - 1].end)
    }

    /// Sorted, distinct syllable start and end times.
    pub fn syllable_boundaries(&self) -> Vec<Millis> {
        let mut out: Vec<Millis> = (0..self.syllables.len())
            .flat_map(|i| {
                let (a, b) = self.syllable_span(i);
                [a, b]
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn check(&self) -> Result<(), TrackError> {
        let fail = |m: String| Err(TrackError(m));
        let mut t = 0;
        for (i, p) in self.phones.iter().enumerate() {
            if p.start < t || p.end <= p.start {
                return fail(format!("phone {i} out of order"));
            }
            if self.pauses.iter().any(|q| p.start < q.end && q.start < p.end) {
                return fail(format!("phone {i} overlaps a pause"));
            }
            t = p.end;
        }
        for pair in self.phones.windows(2) {
            if pair[0].word == pair[1].word && pair[0].end != pair[1].start {
                return fail(format!("gap inside word {}", pair[0].word));
            }
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if s.start >= s.end || s.end > self.phones.len() {
                return fail(format!("syllable {i} has a bad phone range"));
            }
            let stressed_vowels = self.phones[s.start..s.end].iter().filter(|p| p.vowel && p.stressed).count();
            if s.stressed && stressed_vowels != 1 {
                return fail(format!("stressed syllable {i} has {stressed_vowels} stressed vowels"));
            }
        }
        for a in &self.accents {
            let Some(s) = self.syllables.get(a.syllable) else {
                return fail(format!("accent on missing syllable {}", a.syllable));
            };
            if !self.phrases.iter().any(|p| p.first <= s.word && s.word < p.end) {
                return fail(format!("accent on syllable {} outside every phrase", a.syllable));
            }
        }
        Ok(())
    }
}

/// Lay the document out in time: phones left to right, a pause after every
/// phrase but the last. Accents move from words to their stressed syllable
/// (or first syllable with a vowel, or first syllable).
pub fn synthesize_timing(doc: &SynthesisDocument, model: &DurationModel, lexicon: &Lexicon) -> TimingTrack {
    let mut track = TimingTrack::empty(&doc.utterance, doc.emotion);
    if doc.words.is_empty() {
        return track;
    }
    let boundaries = if doc.boundaries.is_empty() { phrase_breaks(doc) } else { doc.boundaries.clone() };
    let mut word_syllables: Vec<Range<usize>> = Vec::with_capacity(doc.words.len());
    let mut t: Millis = 0;
    let mut b = boundaries.iter().peekable();
    let mut phrase_first = 0;
    let mut phrase_start_ms = 0;
    for (wi, word) in doc.words.iter().enumerate() {
        let phones = phonetize(word, lexicon);
        let word_start = t;
        let base = track.phones.len();
        for p in &phones {
            let d = model.phone_ms(p);
            track.phones.push(PhoneSeg {
                symbol: p.symbol.clone(),
                start: t,
                end: t + d,
                vowel: p.is_vowel(),
                stressed: p.stressed,
                word: wi,
            });
            t += d;
        }
        let syl_base = track.syllables.len();
        for r in syllabify(&phones) {
            let nucleus = r.clone().find(|&i| phones[i].is_vowel()).map(|i| base + i);
            track.syllables.push(Syllable {
                start: base + r.start,
                end: base + r.end,
                stressed: nucleus.is_some_and(|n| track.phones[n].stressed),
                word: wi,
                nucleus,
            });
        }
        word_syllables.push(syl_base..track.syllables.len());
        track.words.push(WordSeg { text: word.text.clone(), start: word_start, end: t });
        if b.peek().is_some_and(|bd| bd.word == wi) {
            let bd = b.next().expect("peeked");
            track.phrases.push(PhraseSeg {
                first: phrase_first,
                end: wi + 1,
                tone: bd.tone,
                start_ms: phrase_start_ms,
                end_ms: t,
            });
            if wi + 1 < doc.words.len() {
                track.pauses.push(Pause { start: t, end: t + model.pause_ms });
                t += model.pause_ms;
            }
            phrase_first = wi + 1;
            phrase_start_ms = t;
        }
    }
    if phrase_first < doc.words.len() {
        track.phrases.push(PhraseSeg {
            first: phrase_first,
            end: doc.words.len(),
            tone: BoundaryTone::Low,
            start_ms: phrase_start_ms,
            end_ms: t,
        });
    }
    for a in &doc.accents {
        let Some(range) = word_syllables.get(a.word) else {
            continue;
        };
        let syls = &track.syllables[range.clone()];
        let pick = syls
            .iter()
            .position(|s| s.stressed)
            .or_else(|| syls.iter().position(|s| s.nucleus.is_some()))
            .or(if syls.is_empty() { None } else { Some(0) });
        if let Some(k) = pick {
            track.accents.push(AccentMark {
                syllable: range.start + k,
                word: a.word,
                label: a.label,
                nuclear: a.nuclear,
            });
        }
    }
    track
}
