//! `<rrl-timing>`: the phone-level timing track of one utterance.

use roxmltree::Node as XNode;

use super::{a, emotion_attrs, Ctx, IoError, XmlWriter, FORMAT_VERSION};
use crate::document::{AccentLabel, BoundaryTone};
use crate::prosody::{AccentMark, Pause, PhoneSeg, PhraseSeg, Syllable, TimingTrack, WordSeg};

fn section<T>(w: &mut XmlWriter, name: &'static str, items: &[T], mut each: impl FnMut(&mut XmlWriter, &T)) {
    if items.is_empty() {
        return;
    }
    w.open(name, &[]);
    for it in items {
        each(w, it);
    }
    w.close();
}

pub fn write_timing(track: &TimingTrack) -> String {
    let mut w = XmlWriter::new();
    w.open("rrl-timing", &[("version", a(FORMAT_VERSION)), ("utterance", a(&track.utterance))]);
    w.empty("emotion", &emotion_attrs(&track.emotion));
    section(&mut w, "phones", &track.phones, |w, p| {
        w.empty(
            "phone",
            &[
                ("symbol", a(&p.symbol)),
                ("start", a(p.start)),
                ("end", a(p.end)),
                ("vowel", a(p.vowel)),
                ("stressed", a(p.stressed)),
                ("word", a(p.word)),
            ],
        )
    });
    section(&mut w, "syllables", &track.syllables, |w, s| {
        w.empty(
            "syllable",
            &[
                ("first-phone", a(s.start)),
                ("end-phone", a(s.end)),
                ("stressed", a(s.stressed)),
                ("word", a(s.word)),
                ("nucleus", s.nucleus.map(|n| n.to_string())),
            ],
        )
    });
    section(&mut w, "words", &track.words, |w, x| w.text("word", &[("start", a(x.start)), ("end", a(x.end))], &x.text));
    section(&mut w, "accents", &track.accents, |w, x| {
        w.empty(
            "accent",
            &[
                ("syllable", a(x.syllable)),
                ("word", a(x.word)),
                ("label", a(x.label.as_str())),
                ("nuclear", a(x.nuclear)),
            ],
        )
    });
    section(&mut w, "phrases", &track.phrases, |w, p| {
        w.empty(
            "phrase",
            &[
                ("first-word", a(p.first)),
                ("end-word", a(p.end)),
                ("tone", a(p.tone.as_str())),
                ("start", a(p.start_ms)),
                ("end", a(p.end_ms)),
            ],
        )
    });
    section(&mut w, "pauses", &track.pauses, |w, p| w.empty("pause", &[("start", a(p.start)), ("end", a(p.end))]));
    w.finish()
}

fn items<'a, 'i>(cx: &Ctx<'a, 'i>, n: XNode<'a, 'i>, item: &str) -> Result<Vec<XNode<'a, 'i>>, IoError> {
    let kids = cx.children(n)?;
    for k in &kids {
        cx.expect(*k, item)?;
    }
    Ok(kids)
}

pub fn read_timing(text: &str) -> Result<TimingTrack, IoError> {
    let xml = Ctx::parse(text)?;
    let cx = Ctx { doc: &xml };
    let root = cx.root("rrl-timing")?;
    let children = cx.children(root)?;
    let mut it = children.into_iter();
    let emotion = it.next().ok_or_else(|| cx.schema(root, "missing <emotion>"))?;
    let mut track = TimingTrack::empty(cx.attr(root, "utterance")?, cx.emotion(emotion)?);
    // sections are optional but ordered
    const ORDER: [&str; 6] = ["phones", "syllables", "words", "accents", "phrases", "pauses"];
    let mut next = 0;
    for sec in it {
        let name = sec.tag_name().name();
        let Some(pos) = ORDER[next..].iter().position(|s| *s == name) else {
            return Err(cx.schema(sec, format!("unexpected or misplaced <{name}>")));
        };
        next += pos + 1;
        match name {
            "phones" => {
                for n in items(&cx, sec, "phone")? {
                    track.phones.push(PhoneSeg {
                        symbol: cx.attr(n, "symbol")?.to_string(),
                        start: cx.parse_attr(n, "start")?,
                        end: cx.parse_attr(n, "end")?,
                        vowel: cx.bool_attr(n, "vowel")?,
                        stressed: cx.bool_attr(n, "stressed")?,
                        word: cx.parse_attr(n, "word")?,
                    });
                }
            }
            "syllables" => {
                for n in items(&cx, sec, "syllable")? {
                    track.syllables.push(Syllable {
                        start: cx.parse_attr(n, "first-phone")?,
                        end: cx.parse_attr(n, "end-phone")?,
                        stressed: cx.bool_attr(n, "stressed")?,
                        word: cx.parse_attr(n, "word")?,
                        nucleus: cx.opt_parse(n, "nucleus")?,
                    });
                }
            }
            "words" => {
                for n in items(&cx, sec, "word")? {
                    track.words.push(WordSeg {
                        text: n.text().unwrap_or("").to_string(),
                        start: cx.parse_attr(n, "start")?,
                        end: cx.parse_attr(n, "end")?,
                    });
                }
            }
            "accents" => {
                for n in items(&cx, sec, "accent")? {
                    let raw = cx.attr(n, "label")?;
                    track.accents.push(AccentMark {
                        syllable: cx.parse_attr(n, "syllable")?,
                        word: cx.parse_attr(n, "word")?,
                        label: AccentLabel::parse(raw).ok_or_else(|| cx.schema(n, format!("unknown accent {raw}")))?,
                        nuclear: cx.bool_attr(n, "nuclear")?,
                    });
                }
            }
            "phrases" => {
                for n in items(&cx, sec, "phrase")? {
                    let raw = cx.attr(n, "tone")?;
                    track.phrases.push(PhraseSeg {
                        first: cx.parse_attr(n, "first-word")?,
                        end: cx.parse_attr(n, "end-word")?,
                        tone: BoundaryTone::parse(raw).ok_or_else(|| cx.schema(n, format!("unknown tone {raw}")))?,
                        start_ms: cx.parse_attr(n, "start")?,
                        end_ms: cx.parse_attr(n, "end")?,
                    });
                }
            }
            _ => {
                for n in items(&cx, sec, "pause")? {
                    track.pauses.push(Pause { start: cx.parse_attr(n, "start")?, end: cx.parse_attr(n, "end")? });
                }
            }
        }
    }
    track.check().map_err(|e| cx.schema(root, e.to_string()))?;
    Ok(track)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affect::DimensionPoint;
    use crate::document::{SynthesisDocument, Word};
    use crate::prosody::{assign_prosody, synthesize_timing, DurationModel, Lexicon};

    #[test]
    fn round_trip() {
        let mut doc = SynthesisDocument::new("u1", "v1".into(), DimensionPoint::new(0.1, 0.2, Some(0.3)));
        doc.words = ["the", "car", ",", "the", "motor", "?"]
            .iter()
            .map(|w| {
                Word::new(
                    w,
                    if *w == "the" {
                        "DET"
                    } else if w.len() == 1 {
                        "PUNCT"
                    } else {
                        "NOUN"
                    },
                )
            })
            .collect();
        assign_prosody(&mut doc);
        let track = synthesize_timing(&doc, &DurationModel::default(), &Lexicon::default());
        assert!(!track.pauses.is_empty());
        let text = write_timing(&track);
        let back = read_timing(&text).unwrap();
        assert_eq!(back, track);
        assert_eq!(write_timing(&back), text);
    }

    #[test]
    fn empty_track() {
        let t = TimingTrack::empty("u9", DimensionPoint::ORIGIN);
        assert_eq!(read_timing(&write_timing(&t)).unwrap(), t);
    }
}
