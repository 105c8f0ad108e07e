//! `<rrl-timeline>`: flat event list.

use super::{a, Ctx, IoError, XmlWriter, FORMAT_VERSION};
use crate::timeline::{Event, Timeline};

pub fn write_timeline(t: &Timeline) -> String {
    let mut w = XmlWriter::new();
    w.open("rrl-timeline", &[("version", a(FORMAT_VERSION)), ("duration", a(t.duration))]);
    for e in &t.events {
        w.empty(
            "event",
            &[
                ("start", a(e.start)),
                ("end", a(e.end)),
                ("channel", a(&e.channel)),
                ("kind", a(&e.kind)),
                ("label", a(&e.label)),
                ("speaker", a(&e.speaker)),
                ("utterance", a(&e.utterance)),
            ],
        );
    }
    w.finish()
}

pub fn read_timeline(text: &str) -> Result<Timeline, IoError> {
    let xml = Ctx::parse(text)?;
    let cx = Ctx { doc: &xml };
    let root = cx.root("rrl-timeline")?;
    let mut t = Timeline { duration: cx.parse_attr(root, "duration")?, events: Vec::new() };
    for n in cx.children(root)? {
        cx.expect(n, "event")?;
        let e = Event {
            start: cx.parse_attr(n, "start")?,
            end: cx.parse_attr(n, "end")?,
            channel: cx.attr(n, "channel")?.to_string(),
            kind: cx.attr(n, "kind")?.to_string(),
            label: cx.attr(n, "label")?.to_string(),
            speaker: cx.attr(n, "speaker")?.to_string(),
            utterance: cx.attr(n, "utterance")?.to_string(),
        };
        if e.end < e.start {
            return Err(cx.schema(n, "event ends before it starts"));
        }
        if e.end > t.duration {
            return Err(cx.schema(n, "event ends after the timeline"));
        }
        if t.events.last().is_some_and(|p| *p > e) {
            return Err(cx.schema(n, "events out of order"));
        }
        t.events.push(e);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_order_check() {
        let ev = |start, channel: &str| Event {
            start,
            channel: channel.into(),
            end: start + 10,
            kind: "k".into(),
            label: "a<b".into(),
            speaker: "v2".into(),
            utterance: "u1".into(),
        };
        let t = Timeline { duration: 100, events: vec![ev(0, "head"), ev(0, "speech"), ev(20, "gaze")] };
        let text = write_timeline(&t);
        assert_eq!(read_timeline(&text).unwrap(), t);
        let swapped = text.replacen("channel=\"head\"", "channel=\"zz\"", 1);
        assert!(read_timeline(&swapped).is_err());
    }
}
