//! `<rrl-synthesis>`: words as a flat sequence with ids; accents and boundary
//! tones as empty elements interleaved with the words; the syntax tree nested
//! over word references; information structure as spans over word ids.

use std::collections::BTreeMap;

use roxmltree::Node as XNode;

use super::{a, emotion_attrs, Ctx, IoError, XmlWriter, FORMAT_VERSION};
use crate::document::{
    check_spans, Accent, AccentLabel, Boundary, BoundaryTone, DocumentError, Expression, InfoKind, InfoSpan,
    ReferentStatus, SyntaxNode, SynthesisDocument, Word,
};
use crate::gesture::{Articulator, GestureCandidate, GestureClass, Scope};
use crate::network::NodeId;

fn wid(i: usize) -> String {
    format!("w{i}")
}

fn write_tree(w: &mut XmlWriter, node: &SyntaxNode) {
    match node {
        SyntaxNode::Leaf(i) => w.empty("wref", &[("to", a(wid(*i)))]),
        SyntaxNode::Phrase { category, function, children } => {
            let attrs = [("cat", a(category)), ("fn", function.clone())];
            if children.is_empty() {
                w.empty("phrase", &attrs);
            } else {
                w.open("phrase", &attrs);
                for c in children {
                    write_tree(w, c);
                }
                w.close();
            }
        }
    }
}

pub fn write_synthesis(doc: &SynthesisDocument) -> String {
    let mut w = XmlWriter::new();
    let acts = (!doc.acts.is_empty()).then(|| doc.acts.iter().map(NodeId::as_str).collect::<Vec<_>>().join(" "));
    w.open(
        "rrl-synthesis",
        &[
            ("version", a(FORMAT_VERSION)),
            ("utterance", a(&doc.utterance)),
            ("speaker", a(&doc.speaker)),
            ("acts", acts),
        ],
    );
    w.empty("emotion", &emotion_attrs(&doc.emotion));
    if let Some(e) = &doc.expression {
        w.empty("expression", &[("category", a(&e.category)), ("weight", a(e.weight))]);
    }
    if doc.words.is_empty() {
        w.empty("words", &[]);
    } else {
        w.open("words", &[]);
        for (i, word) in doc.words.iter().enumerate() {
            for acc in doc.accents.iter().filter(|x| x.word == i) {
                w.empty("accent", &[("label", a(acc.label.as_str())), ("nuclear", a(acc.nuclear))]);
            }
            w.text(
                "w",
                &[
                    ("id", a(wid(i))),
                    ("pos", a(&word.pos)),
                    ("ref", word.referent.as_ref().map(|r| r.to_string())),
                    ("ph", word.phonetic.clone()),
                ],
                &word.text,
            );
            for b in doc.boundaries.iter().filter(|b| b.word == i) {
                w.empty("boundary", &[("tone", a(b.tone.as_str()))]);
            }
        }
        w.close();
    }
    if let Some(tree) = &doc.syntax {
        w.open("syntax", &[]);
        write_tree(&mut w, tree);
        w.close();
    }
    if let Some(spans) = &doc.info {
        if spans.is_empty() {
            w.empty("information", &[]);
        } else {
            w.open("information", &[]);
            for s in spans {
                w.empty("span", &[("kind", a(s.kind.as_str())), ("from", a(wid(s.start))), ("to", a(wid(s.end - 1)))]);
            }
            w.close();
        }
    }
    if let Some(refs) = &doc.referents {
        if refs.is_empty() {
            w.empty("referents", &[]);
        } else {
            w.open("referents", &[]);
            for r in refs {
                w.empty(
                    "referent",
                    &[("ref", a(&r.referent)), ("given", a(r.given)), ("contrastive", a(r.contrastive))],
                );
            }
            w.close();
        }
    }
    if !doc.candidates.is_empty() {
        w.open("candidates", &[]);
        for c in &doc.candidates {
            let arts: Vec<&str> = c.articulators.iter().map(|x| x.as_str()).collect();
            w.empty(
                "candidate",
                &[
                    ("class", a(c.class.as_str())),
                    ("label", a(&c.label)),
                    ("priority", a(c.priority)),
                    ("intensity", a(c.intensity)),
                    ("scope", a(c.scope)),
                    ("articulators", a(arts.join(" "))),
                    ("direction", c.direction.clone()),
                    ("stretch", c.stretch.map(|s| s.to_string())),
                ],
            );
        }
        w.close();
    }
    w.finish()
}

pub fn read_synthesis(text: &str) -> Result<SynthesisDocument, IoError> {
    let xml = Ctx::parse(text)?;
    let cx = Ctx { doc: &xml };
    let root = cx.root("rrl-synthesis")?;
    let mut doc = SynthesisDocument::new(
        cx.attr(root, "utterance")?,
        NodeId::new(cx.attr(root, "speaker")?),
        crate::affect::DimensionPoint::ORIGIN,
    );
    doc.acts = root.attribute("acts").map(|s| s.split_whitespace().map(NodeId::new).collect()).unwrap_or_default();

    let children = cx.children(root)?;
    let mut it = children.into_iter().peekable();
    let emotion = it.next().ok_or_else(|| cx.schema(root, "missing <emotion>"))?;
    doc.emotion = cx.emotion(emotion)?;
    if let Some(e) = it.next_if(|n| n.has_tag_name("expression")) {
        doc.expression =
            Some(Expression { category: cx.attr(e, "category")?.to_string(), weight: cx.parse_attr(e, "weight")? });
    }
    let words_el = it.next().ok_or_else(|| cx.schema(root, "missing <words>"))?;
    cx.expect(words_el, "words")?;
    let ids = read_words(&cx, words_el, &mut doc)?;
    let word_ref = |n: XNode<'_, '_>, attr: &str| -> Result<usize, IoError> {
        let id = cx.attr(n, attr)?;
        ids.get(id).copied().ok_or_else(|| cx.schema(n, format!("unknown word {id}")))
    };

    if let Some(s) = it.next_if(|n| n.has_tag_name("syntax")) {
        let kids = cx.children(s)?;
        let [top] = kids[..] else {
            return Err(cx.schema(s, "<syntax> needs exactly one root phrase"));
        };
        let tree = read_tree(&cx, top, &word_ref)?;
        doc.syntax = Some(tree);
        let probe = SynthesisDocument { info: None, ..doc.clone() };
        if probe.check() == Err(DocumentError::SyntaxCover) {
            return Err(cx.schema(s, "syntax leaves must cover every word exactly once"));
        }
    }
    if let Some(info) = it.next_if(|n| n.has_tag_name("information")) {
        let mut spans = Vec::new();
        for s in cx.children(info)? {
            cx.expect(s, "span")?;
            let kind_raw = cx.attr(s, "kind")?;
            let kind =
                InfoKind::parse(kind_raw).ok_or_else(|| cx.schema(s, format!("unknown span kind {kind_raw}")))?;
            let (from, to) = (word_ref(s, "from")?, word_ref(s, "to")?);
            if to < from {
                return Err(cx.schema(s, "span ends before it starts"));
            }
            spans.push(InfoSpan { kind, start: from, end: to + 1 });
            if let Err(e) = check_spans(&spans, doc.words.len()) {
                return Err(cx.crossing(s, e.to_string()));
            }
        }
        doc.info = Some(spans);
    }
    if let Some(refs) = it.next_if(|n| n.has_tag_name("referents")) {
        let mut out = Vec::new();
        for r in cx.children(refs)? {
            cx.expect(r, "referent")?;
            out.push(ReferentStatus {
                referent: NodeId::new(cx.attr(r, "ref")?),
                given: cx.bool_attr(r, "given")?,
                contrastive: cx.bool_attr(r, "contrastive")?,
            });
        }
        doc.referents = Some(out);
    }
    if let Some(cands) = it.next_if(|n| n.has_tag_name("candidates")) {
        for c in cx.children(cands)? {
            cx.expect(c, "candidate")?;
            doc.candidates.push(read_candidate(&cx, c)?);
        }
    }
    if let Some(extra) = it.next() {
        return Err(cx.schema(extra, format!("unexpected <{}>", extra.tag_name().name())));
    }
    Ok(doc)
}

fn read_words(
    cx: &Ctx<'_, '_>,
    words_el: XNode<'_, '_>,
    doc: &mut SynthesisDocument,
) -> Result<BTreeMap<String, usize>, IoError> {
    let mut ids = BTreeMap::new();
    let mut pending: Option<(AccentLabel, bool, XNode<'_, '_>)> = None;
    for n in cx.children(words_el)? {
        match n.tag_name().name() {
            "accent" => {
                if pending.is_some() {
                    return Err(cx.schema(n, "two accents before one word"));
                }
                let raw = cx.attr(n, "label")?;
                let label = AccentLabel::parse(raw).ok_or_else(|| cx.schema(n, format!("unknown accent {raw}")))?;
                pending = Some((label, cx.bool_attr(n, "nuclear")?, n));
            }
            "w" => {
                let i = doc.words.len();
                let id = cx.attr(n, "id")?;
                if ids.insert(id.to_string(), i).is_some() {
                    return Err(cx.schema(n, format!("word id {id} used twice")));
                }
                if let Some((label, nuclear, _)) = pending.take() {
                    doc.accents.push(Accent { word: i, label, nuclear });
                }
                doc.words.push(Word {
                    text: n.text().unwrap_or("").to_string(),
                    pos: cx.attr(n, "pos")?.to_string(),
                    phonetic: n.attribute("ph").map(str::to_string),
                    referent: n.attribute("ref").map(NodeId::new),
                });
            }
            "boundary" => {
                if doc.words.is_empty() {
                    return Err(cx.schema(n, "boundary before the first word"));
                }
                let raw = cx.attr(n, "tone")?;
                let tone =
                    BoundaryTone::parse(raw).ok_or_else(|| cx.schema(n, format!("unknown boundary tone {raw}")))?;
                doc.boundaries.push(Boundary { word: doc.words.len() - 1, tone });
            }
            other => return Err(cx.schema(n, format!("unexpected <{other}> in <words>"))),
        }
    }
    if let Some((_, _, n)) = pending {
        return Err(cx.schema(n, "accent not followed by a word"));
    }
    Ok(ids)
}

fn read_tree(
    cx: &Ctx<'_, '_>,
    n: XNode<'_, '_>,
    word_ref: &dyn Fn(XNode<'_, '_>, &str) -> Result<usize, IoError>,
) -> Result<SyntaxNode, IoError> {
    match n.tag_name().name() {
        "wref" => Ok(SyntaxNode::Leaf(word_ref(n, "to")?)),
        "phrase" => {
            let mut children = Vec::new();
            for c in cx.children(n)? {
                children.push(read_tree(cx, c, word_ref)?);
            }
            Ok(SyntaxNode::Phrase {
                category: cx.attr(n, "cat")?.to_string(),
                function: n.attribute("fn").map(str::to_string),
                children,
            })
        }
        other => Err(cx.schema(n, format!("unexpected <{other}> in <syntax>"))),
    }
}

fn read_candidate(cx: &Ctx<'_, '_>, c: XNode<'_, '_>) -> Result<GestureCandidate, IoError> {
    let class_raw = cx.attr(c, "class")?;
    let class =
        GestureClass::parse(class_raw).ok_or_else(|| cx.schema(c, format!("unknown gesture class {class_raw}")))?;
    let mut articulators = Vec::new();
    for s in cx.attr(c, "articulators")?.split_whitespace() {
        articulators.push(Articulator::parse(s).ok_or_else(|| cx.schema(c, format!("unknown articulator {s}")))?);
    }
    let scope: Scope = cx.parse_attr(c, "scope")?;
    Ok(GestureCandidate {
        class,
        label: cx.attr(c, "label")?.to_string(),
        priority: cx.parse_attr(c, "priority")?,
        intensity: cx.parse_attr(c, "intensity")?,
        direction: c.attribute("direction").map(str::to_string),
        stretch: cx.opt_parse(c, "stretch")?,
        scope,
        articulators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affect::DimensionPoint;

    fn minimal() -> SynthesisDocument {
        let mut d = SynthesisDocument::new("u1", NodeId::new("v3"), DimensionPoint::new(0.5, -0.25, None));
        d.words = vec![Word::new("Hello", "X"), Word::new(".", "PUNCT")];
        d
    }

    #[test]
    fn minimal_round_trip() {
        let d = minimal();
        let text = write_synthesis(&d);
        let back = read_synthesis(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(write_synthesis(&back), text);
        assert!(!text.contains("<syntax>"));
    }

    #[test]
    fn crossing_spans_rejected() {
        let text = "<rrl-synthesis version=\"1\" utterance=\"u1\" speaker=\"v1\">
  <emotion valence=\"0\" arousal=\"0\"/>
  <words>
    <w id=\"w0\" pos=\"X\">a</w>
    <w id=\"w1\" pos=\"X\">b</w>
    <w id=\"w2\" pos=\"X\">c</w>
  </words>
  <information>
    <span kind=\"theme\" from=\"w0\" to=\"w1\"/>
    <span kind=\"theme\" from=\"w1\" to=\"w2\"/>
  </information>
</rrl-synthesis>";
        let err = read_synthesis(text).unwrap_err();
        assert!(matches!(err, IoError::CrossingSpan { line: 10, .. }), "{err}");
    }
}
