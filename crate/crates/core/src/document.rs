//! Synthesis-input documents.
//!
//! A document always carries the words, the speaker and the emotion. The
//! remaining layers are optional: a minimal document has none of them, a
//! maximal one has a syntax tree over word indices, theme/rheme spans and
//! per-referent status flags. Accents and boundary tones are positional
//! annotations filled in by the prosody stage.

use std::fmt;

use thiserror::Error;

use crate::affect::DimensionPoint;
use crate::gesture::GestureCandidate;
use crate::network::NodeId;

#[derive(Debug, Clone, PartialEq)]
pub struct Word {
    pub text: String,
    pub pos: String,
    /// Transcription overriding the lexicon, phones separated by spaces.
    pub phonetic: Option<String>,
    pub referent: Option<NodeId>,
}

impl Word {
    pub fn new(text: &str, pos: &str) -> Self {
        Word { text: text.to_string(), pos: pos.to_string(), phonetic: None, referent: None }
    }

    pub fn with_referent(mut self, referent: &NodeId) -> Self {
        self.referent = Some(referent.clone());
        self
    }

    pub fn is_punctuation(&self) -> bool {
        self.pos == "PUNCT"
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SyntaxNode {
    Phrase { category: String, function: Option<String>, children: Vec<SyntaxNode> },
    Leaf(usize),
}

impl SyntaxNode {
    pub fn phrase(category: &str, function: Option<&str>, children: Vec<SyntaxNode>) -> Self {
        SyntaxNode::Phrase { category: category.to_string(), function: function.map(str::to_string), children }
    }

    /// Word indices in tree order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            SyntaxNode::Leaf(i) => out.push(*i),
            SyntaxNode::Phrase { children, .. } => {
                for c in children {
                    c.collect_leaves(out);
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InfoKind {
    Theme,
    Rheme,
}

impl InfoKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InfoKind::Theme => "theme",
            InfoKind::Rheme => "rheme",
        }
    }

    pub fn parse(s: &str) -> Option<InfoKind> {
        match s {
            "theme" => Some(InfoKind::Theme),
            "rheme" => Some(InfoKind::Rheme),
            _ => None,
        }
    }
}

/// Information-structure span over words `start..end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InfoSpan {
    pub kind: InfoKind,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferentStatus {
    pub referent: NodeId,
    pub given: bool,
    pub contrastive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AccentLabel {
    /// `H*`
    High,
    /// `L+H*`, used for contrast.
    RisingHigh,
}

impl AccentLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            AccentLabel::High => "H*",
            AccentLabel::RisingHigh => "L+H*",
        }
    }

    pub fn parse(s: &str) -> Option<AccentLabel> {
        match s {
            "H*" => Some(AccentLabel::High),
            "L+H*" => Some(AccentLabel::RisingHigh),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryTone {
    /// `L-L%`, declarative.
    Low,
    /// `H-H%`, interrogative.
    High,
}

impl BoundaryTone {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryTone::Low => "L-L%",
            BoundaryTone::High => "H-H%",
        }
    }

    pub fn parse(s: &str) -> Option<BoundaryTone> {
        match s {
            "L-L%" => Some(BoundaryTone::Low),
            "H-H%" => Some(BoundaryTone::High),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Accent {
    pub word: usize,
    pub label: AccentLabel,
    pub nuclear: bool,
}

/// A prosodic phrase closes after `word`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Boundary {
    pub word: usize,
    pub tone: BoundaryTone,
}

/// Basic facial category and blend weight derived from the emotion.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    pub category: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisDocument {
    pub utterance: String,
    pub speaker: NodeId,
    /// Acts realized by this utterance, in order.
    pub acts: Vec<NodeId>,
    pub emotion: DimensionPoint,
    pub expression: Option<Expression>,
    pub words: Vec<Word>,
    pub syntax: Option<SyntaxNode>,
    pub info: Option<Vec<InfoSpan>>,
    pub referents: Option<Vec<ReferentStatus>>,
    pub accents: Vec<Accent>,
    pub boundaries: Vec<Boundary>,
    pub candidates: Vec<GestureCandidate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("syntax leaves do not cover every word exactly once, in order")]
    SyntaxCover,
    #[error("information spans {0:?} and {1:?} cross")]
    CrossingSpans((usize, usize), (usize, usize)),
    #[error("span {0}..{1} is empty or outside the word sequence")]
    BadSpan(usize, usize),
    #[error("{what} refers to word {index}, but there are {len} words")]
    WordIndex { what: &'static str, index: usize, len: usize },
}

impl SynthesisDocument {
    pub fn new(utterance: &str, speaker: NodeId, emotion: DimensionPoint) -> Self {
        SynthesisDocument {
            utterance: utterance.to_string(),
            speaker,
            acts: Vec::new(),
            emotion,
            expression: None,
            words: Vec::new(),
            syntax: None,
            info: None,
            referents: None,
            accents: Vec::new(),
            boundaries: Vec::new(),
            candidates: Vec::new(),
        }
    }

    /// No optional linguistic layer is present.
    pub fn is_minimal(&self) -> bool {
        self.syntax.is_none() && self.info.is_none() && self.referents.is_none()
    }

    pub fn text(&self) -> String {
        self.words.iter().map(|w| w.text.as_str()).collect::<Vec<_>>().join(" ")
    }

    pub fn referent_status(&self, id: &NodeId) -> Option<&ReferentStatus> {
        self.referents.as_ref()?.iter().find(|r| &r.referent == id)
    }

    /// Phrase word ranges `start..end` from the boundary annotations.
    pub fn phrases(&self) -> Vec<(usize, usize, BoundaryTone)> {
        let mut out = Vec::new();
        let mut start = 0;
        for b in &self.boundaries {
            out.push((start, b.word + 1, b.tone));
            start = b.word + 1;
        }
        out
    }

    /// Check the structural invariants of the optional layers.
    pub fn check(&self) -> Result<(), DocumentError> {
        let n = self.words.len();
        if let Some(tree) = &self.syntax {
            // leaves in reading order, each word once
            if tree.leaves() != (0..n).collect::<Vec<_>>() {
                return Err(DocumentError::SyntaxCover);
            }
        }
        if let Some(spans) = &self.info {
            check_spans(spans, n)?;
        }
        for a in &self.accents {
            if a.word >= n {
                return Err(DocumentError::WordIndex { what: "accent", index: a.word, len: n });
            }
        }
        for b in &self.boundaries {
            if b.word >= n {
                return Err(DocumentError::WordIndex { what: "boundary", index: b.word, len: n });
            }
        }
        Ok(())
    }
}

/// Spans must be nonempty, inside `0..n` and pairwise disjoint.
pub fn check_spans(spans: &[InfoSpan], n: usize) -> Result<(), DocumentError> {
    for s in spans {
        if s.start >= s.end || s.end > n {
            return Err(DocumentError::BadSpan(s.start, s.end));
        }
    }
    for (i, a) in spans.iter().enumerate() {
        for b in &spans[i + 1..] {
            if a.start < b.end && b.start < a.end {
                return Err(DocumentError::CrossingSpans((a.start, a.end), (b.start, b.end)));
            }
        }
    }
    Ok(())
}

impl fmt::Display for SynthesisDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.utterance, self.text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(words: &[&str]) -> SynthesisDocument {
        let mut d = SynthesisDocument::new("u1", NodeId::new("v1"), DimensionPoint::ORIGIN);
        d.words = words.iter().map(|w| Word::new(w, "X")).collect();
        d
    }

    #[test]
    fn spans_must_be_disjoint() {
        let s = |kind, start, end| InfoSpan { kind, start, end };
        assert!(check_spans(&[s(InfoKind::Theme, 0, 2), s(InfoKind::Rheme, 2, 4)], 4).is_ok());
        assert_eq!(
            check_spans(&[s(InfoKind::Theme, 0, 3), s(InfoKind::Rheme, 2, 4)], 4),
            Err(DocumentError::CrossingSpans((0, 3), (2, 4)))
        );
        assert_eq!(check_spans(&[s(InfoKind::Theme, 2, 2)], 4), Err(DocumentError::BadSpan(2, 2)));
        assert_eq!(check_spans(&[s(InfoKind::Theme, 3, 5)], 4), Err(DocumentError::BadSpan(3, 5)));
    }

    #[test]
    fn syntax_must_cover_in_order() {
        let mut d = doc(&["a", "b", "c"]);
        let leaf = SyntaxNode::Leaf;
        d.syntax =
            Some(SyntaxNode::phrase("S", None, vec![leaf(0), SyntaxNode::phrase("NP", None, vec![leaf(1), leaf(2)])]));
        assert!(d.check().is_ok());
        d.syntax = Some(SyntaxNode::phrase("S", None, vec![leaf(1), leaf(0), leaf(2)]));
        assert_eq!(d.check(), Err(DocumentError::SyntaxCover));
        d.syntax = Some(SyntaxNode::phrase("S", None, vec![leaf(0), leaf(1)]));
        assert_eq!(d.check(), Err(DocumentError::SyntaxCover));
    }

    #[test]
    fn phrases_follow_boundaries() {
        let mut d = doc(&["yes", ",", "how", "much", "?"]);
        d.boundaries =
            vec![Boundary { word: 1, tone: BoundaryTone::Low }, Boundary { word: 4, tone: BoundaryTone::High }];
        assert_eq!(d.phrases(), [(0, 2, BoundaryTone::Low), (2, 5, BoundaryTone::High)]);
        assert_eq!(d.text(), "yes , how much ?");
        d.boundaries.push(Boundary { word: 9, tone: BoundaryTone::Low });
        assert!(matches!(d.check(), Err(DocumentError::WordIndex { what: "boundary", index: 9, len: 5 })));
    }
}
