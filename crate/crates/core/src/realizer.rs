//! Template realizer: dialogue acts to synthesis documents.
//!
//! This is a small stand-in for a natural-language generator. Each
//! (act type, predicate) pair has a surface template whose slots refer to the
//! condition's arguments. Noun phrases are definite when their referent is in
//! the common ground, and an evaluative adjective is inserted before the
//! emotion's cause when the emotion is strong enough.
//!
//! Template file format, one statement per line, `#` comments:
//!
//! ```text
//! template <act type> <predicate or -> = <token> ...
//! noun <sort> = <word> ...
//! unit <suffix> = <word> ...
//! positive = <adjective> ...
//! negative = <adjective> ...
//! ```
//!
//! Tokens are `word/POS`, bare punctuation, or a slot `{n}`, `{n:noun}`,
//! `{n:pron}`, `{n:this}`, optionally followed by `@function`.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use thiserror::Error;

use crate::affect::{AffectError, AffectTables, DimensionPoint};
use crate::document::{Expression, InfoKind, InfoSpan, ReferentStatus, SyntaxNode, SynthesisDocument, Word};
use crate::gesture::{Articulator, GestureCandidate, GestureClass, Scope};
use crate::network::{NodeId, NodeKind};
use crate::prosody::phrase_breaks;
use crate::scene::{Act, Constituent, DialogueAct, Scene, SceneError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotForm {
    /// Article, optional adjective, noun; or a constant's surface form.
    Np,
    /// Noun without article.
    Noun,
    Pron,
    /// Demonstrative noun phrase; the noun is pointed at.
    This,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Fixed { text: String, pos: String },
    Slot { arg: usize, form: SlotForm, function: Option<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("templates line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Templates {
    templates: BTreeMap<(String, String), Vec<Token>>,
    nouns: BTreeMap<String, Vec<String>>,
    units: BTreeMap<String, Vec<String>>,
    positive: Vec<String>,
    negative: Vec<String>,
}

impl Templates {
    pub fn template(&self, act_type: &str, predicate: &str) -> Option<&[Token]> {
        self.templates.get(&(act_type.to_string(), predicate.to_string())).map(Vec::as_slice)
    }

    pub fn noun(&self, sort: &str) -> Option<&[String]> {
        self.nouns.get(sort).map(Vec::as_slice)
    }

    pub fn unit(&self, suffix: &str) -> Option<&[String]> {
        self.units.get(suffix).map(Vec::as_slice)
    }

    /// Evaluative adjectives for positive and negative valence, preferred first.
    pub fn evaluative(&self) -> (&[String], &[String]) {
        (&self.positive, &self.negative)
    }
}

fn parse_token(tok: &str) -> Result<Token, String> {
    if let Some(inner) = tok.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
        let (body, function) = match inner.split_once('@') {
            Some((b, f)) => (b, Some(f.to_string())),
            None => (inner, None),
        };
        let (arg, form) = match body.split_once(':') {
            Some((a, f)) => (a, f),
            None => (body, ""),
        };
        let arg: usize = arg.parse().map_err(|_| format!("bad slot {tok}"))?;
        if !(1..=2).contains(&arg) {
            return Err(format!("slot {tok} must name argument 1 or 2"));
        }
        let form = match form {
            "" => SlotForm::Np,
            "noun" => SlotForm::Noun,
            "pron" => SlotForm::Pron,
            "this" => SlotForm::This,
            other => return Err(format!("unknown slot form {other}")),
        };
        return Ok(Token::Slot { arg, form, function });
    }
    if tok.chars().all(|c| c.is_ascii_punctuation()) {
        return Ok(Token::Fixed { text: tok.to_string(), pos: "PUNCT".into() });
    }
    match tok.rsplit_once('/') {
        Some((text, pos)) if !text.is_empty() && !pos.is_empty() => {
            Ok(Token::Fixed { text: text.to_string(), pos: pos.to_string() })
        }
        _ => Err(format!("token {tok} needs a /POS tag")),
    }
}

impl FromStr for Templates {
    type Err = TemplateError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut t = Templates::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| TemplateError::Syntax { line: idx + 1, message };
            let Some((head, body)) = line.split_once('=') else {
                return Err(err("missing `=`".into()));
            };
            let head: Vec<&str> = head.split_whitespace().collect();
            let words: Vec<String> = body.split_whitespace().map(str::to_string).collect();
            match head[..] {
                ["template", act, pred] => {
                    let tokens = words.iter().map(|w| parse_token(w)).collect::<Result<Vec<_>, _>>().map_err(err)?;
                    if tokens.is_empty() {
                        return Err(err("empty template".into()));
                    }
                    t.templates.insert((act.to_string(), pred.to_string()), tokens);
                }
                ["noun", sort] if !words.is_empty() => {
                    t.nouns.insert(sort.to_string(), words);
                }
                ["unit", suffix] if !words.is_empty() => {
                    t.units.insert(suffix.to_string(), words);
                }
                ["positive"] => t.positive = words,
                ["negative"] => t.negative = words,
                _ => return Err(err(format!("unrecognised statement {}", head.join(" ")))),
            }
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RealizeError {
    #[error("no template for {act_type} {predicate}")]
    MissingTemplate { act_type: String, predicate: String },
    #[error("no lexicon entry for {0}")]
    MissingLexicon(String),
    #[error("emotion cause {0} does not resolve")]
    UnresolvedCause(NodeId),
    #[error("empty text")]
    EmptyText,
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Affect(#[from] AffectError),
}

/// Templates plus the evaluative-adjective threshold on |valence * intensity|.
#[derive(Debug, Clone)]
pub struct Realizer {
    pub templates: Templates,
    pub threshold: f64,
}

// Words of one act before merging into an utterance.
#[derive(Debug, Default)]
struct Draft {
    words: Vec<Word>,
    labels: Vec<InfoKind>,
    sentences: Vec<SyntaxNode>,
}

struct ActContext<'a> {
    scene: &'a Scene,
    given_extra: BTreeSet<NodeId>,
    evaluative: Option<(NodeId, String)>,
}

impl Realizer {
    pub fn new(templates: Templates, threshold: f64) -> Self {
        Realizer { templates, threshold }
    }

    /// Realize a single dialogue act.
    pub fn realize_act(
        &self,
        scene: &Scene,
        act: &DialogueAct,
        utterance: &str,
        tables: &AffectTables,
    ) -> Result<SynthesisDocument, RealizeError> {
        self.realize_utterance(scene, std::slice::from_ref(act), utterance, tables)
    }

    /// Realize acts into one utterance. Every act but the last has its final
    /// full stop turned into a comma, so a feedback act and a question merge
    /// into "Yes , how ...".
    pub fn realize_utterance(
        &self,
        scene: &Scene,
        acts: &[DialogueAct],
        utterance: &str,
        tables: &AffectTables,
    ) -> Result<SynthesisDocument, RealizeError> {
        let first = acts.first().ok_or(RealizeError::EmptyText)?;
        let mut doc = SynthesisDocument::new(utterance, first.speaker.clone(), DimensionPoint::ORIGIN);
        doc.acts = acts.iter().map(|a| a.id.clone()).collect();
        if let Some(e) = acts.iter().find_map(|a| a.emotion.as_ref()) {
            doc.emotion = tables.to_dimensions(e)?;
            let (category, weight) = tables.to_basic_category(e)?;
            doc.expression = Some(Expression { category, weight });
        }

        let mut labels = Vec::new();
        let mut sentences = Vec::new();
        let mut given_extra = BTreeSet::new();
        for (k, act) in acts.iter().enumerate() {
            let ctx = self.context(scene, act, tables)?;
            given_extra.extend(ctx.given_extra.iter().cloned());
            let mut draft = self.draft(&ctx, act)?;
            if k + 1 < acts.len() {
                if let Some(last) = draft.words.last_mut() {
                    if last.is_punctuation() && last.text == "." {
                        last.text = ",".into();
                    }
                }
            }
            let offset = doc.words.len();
            doc.words.extend(draft.words);
            labels.extend(draft.labels);
            sentences.extend(draft.sentences.into_iter().map(|s| shift(s, offset)));
        }
        capitalize(&mut doc.words);

        doc.syntax = Some(match sentences.len() {
            1 => sentences.pop().expect("one sentence"),
            _ => SyntaxNode::phrase("U", None, sentences),
        });
        doc.info = Some(spans(&labels));
        doc.referents = Some(self.statuses(scene, &doc.words, &given_extra));
        doc.candidates = propose_candidates(acts, &doc);
        Ok(doc)
    }

    fn context<'a>(
        &self,
        scene: &'a Scene,
        act: &DialogueAct,
        tables: &AffectTables,
    ) -> Result<ActContext<'a>, RealizeError> {
        let mut given_extra = BTreeSet::new();
        // a response to a non-communicative act has no content to make given
        if let Some(r) = &act.response_to {
            if let Act::Dialogue(prior) = scene.act(r)? {
                given_extra = scene.drs(&prior.sem_content)?.mentions();
            }
        }
        let mut evaluative = None;
        if let Some(e) = &act.emotion {
            let valence = tables.to_dimensions(e)?.valence;
            if let Some(cause) = &e.cause {
                let target = match scene.resolve_handle(cause) {
                    Ok(Constituent::Referent { id, .. } | Constituent::Constant { id, .. }) => Some(id),
                    Ok(_) => None,
                    Err(_) => return Err(RealizeError::UnresolvedCause(cause.clone())),
                };
                if let Some(id) = target.filter(|_| valence.abs() > self.threshold) {
                    let (list, name) = if valence > 0.0 {
                        (&self.templates.positive, "positive")
                    } else {
                        (&self.templates.negative, "negative")
                    };
                    let adj = list.first().ok_or_else(|| RealizeError::MissingLexicon(name.into()))?;
                    evaluative = Some((id, adj.clone()));
                }
            }
        }
        Ok(ActContext { scene, given_extra, evaluative })
    }

    fn draft(&self, ctx: &ActContext<'_>, act: &DialogueAct) -> Result<Draft, RealizeError> {
        let scene = ctx.scene;
        let net = scene.network();
        let content = scene.drs(&act.sem_content)?;
        // unary sort conditions such as car(x) describe, they are not said
        let said: Vec<_> = content
            .conditions
            .iter()
            .filter(|c| !(c.arg_two.is_none() && net.type_of(&c.arg_one) == Some(c.predicate.as_str())))
            .collect();
        let mut draft = Draft::default();
        let mut adjective_used = false;
        let missing = |predicate: &str| RealizeError::MissingTemplate {
            act_type: act.act_type.clone(),
            predicate: predicate.to_string(),
        };
        if said.is_empty() {
            let tokens = self.templates.template(&act.act_type, "-").ok_or_else(|| missing("-"))?;
            self.sentence(ctx, tokens, &[], &mut draft, &mut adjective_used)?;
        }
        for c in said {
            let tokens = self.templates.template(&act.act_type, &c.predicate).ok_or_else(|| missing(&c.predicate))?;
            let args: Vec<NodeId> = c.args().cloned().collect();
            self.sentence(ctx, tokens, &args, &mut draft, &mut adjective_used)?;
        }
        Ok(draft)
    }

    fn sentence(
        &self,
        ctx: &ActContext<'_>,
        tokens: &[Token],
        args: &[NodeId],
        draft: &mut Draft,
        adjective_used: &mut bool,
    ) -> Result<(), RealizeError> {
        let mut children: Vec<SyntaxNode> = Vec::new();
        let mut group: Vec<usize> = Vec::new();
        let flush = |group: &mut Vec<usize>, children: &mut Vec<SyntaxNode>, words: &[Word]| {
            if group.is_empty() {
                return;
            }
            let (cat, func) = group_category(&words[group[0]].pos, group.iter().map(|&i| words[i].pos.as_str()));
            children.push(SyntaxNode::phrase(cat, Some(func), group.drain(..).map(SyntaxNode::Leaf).collect()));
        };
        for tok in tokens {
            match tok {
                Token::Fixed { text, pos } if pos == "PUNCT" => {
                    flush(&mut group, &mut children, &draft.words);
                    children.push(SyntaxNode::Leaf(draft.words.len()));
                    draft.words.push(Word::new(text, pos));
                    let label = draft.labels.last().copied().unwrap_or(InfoKind::Rheme);
                    draft.labels.push(label);
                }
                Token::Fixed { text, pos } => {
                    group.push(draft.words.len());
                    draft.words.push(Word::new(text, pos));
                    draft.labels.push(InfoKind::Rheme);
                }
                Token::Slot { arg, form, function } => {
                    flush(&mut group, &mut children, &draft.words);
                    let entity = args.get(arg - 1).ok_or_else(|| RealizeError::MissingTemplate {
                        act_type: "slot".into(),
                        predicate: format!("argument {arg}"),
                    })?;
                    let start = draft.words.len();
                    let words = self.noun_phrase(ctx, entity, *form, adjective_used)?;
                    for w in words {
                        let theme = w.referent.as_ref().is_some_and(|r| ctx.given_extra.contains(r));
                        draft.labels.push(if theme { InfoKind::Theme } else { InfoKind::Rheme });
                        draft.words.push(w);
                    }
                    let default_fn = if *arg == 1 { "subj" } else { "obj" };
                    children.push(SyntaxNode::phrase(
                        "NP",
                        Some(function.as_deref().unwrap_or(default_fn)),
                        (start..draft.words.len()).map(SyntaxNode::Leaf).collect(),
                    ));
                }
            }
        }
        flush(&mut group, &mut children, &draft.words);
        draft.sentences.push(SyntaxNode::phrase("S", None, children));
        Ok(())
    }

    fn noun_phrase(
        &self,
        ctx: &ActContext<'_>,
        entity: &NodeId,
        form: SlotForm,
        adjective_used: &mut bool,
    ) -> Result<Vec<Word>, RealizeError> {
        let net = ctx.scene.network();
        let node = net.node(entity).ok_or_else(|| SceneError::NotFound(entity.clone()))?;
        if form == SlotForm::Pron {
            return Ok(vec![Word::new("it", "PRON").with_referent(entity)]);
        }
        let mut adjective = None;
        if let Some((cause, adj)) = &ctx.evaluative {
            if cause == entity && !*adjective_used {
                *adjective_used = true;
                adjective = Some(Word::new(adj, "ADJ"));
            }
        }
        let mut head: Vec<Word> = Vec::new();
        if node.kind == NodeKind::Constant {
            let name = node.name.clone().unwrap_or_default();
            let split = name.find(|c: char| !(c.is_ascii_digit() || c == '.')).unwrap_or(name.len());
            let (number, suffix) = name.split_at(split);
            if number.is_empty() {
                head.push(Word::new(&name, "PROPN").with_referent(entity));
            } else {
                head.push(Word::new(number, "NUM").with_referent(entity));
                if !suffix.is_empty() {
                    let unit = self
                        .templates
                        .unit(suffix)
                        .ok_or_else(|| RealizeError::MissingLexicon(format!("unit {suffix}")))?;
                    head.extend(unit.iter().map(|u| Word::new(u, "NOUN").with_referent(entity)));
                }
            }
            let mut out: Vec<Word> = adjective.into_iter().collect();
            out.extend(head);
            return Ok(out);
        }
        let noun = self
            .templates
            .noun(&node.type_label)
            .ok_or_else(|| RealizeError::MissingLexicon(format!("noun {}", node.type_label)))?;
        head.extend(noun.iter().map(|n| Word::new(n, "NOUN").with_referent(entity)));
        let mut out = Vec::new();
        let first_after_det = adjective.as_ref().map_or(noun[0].as_str(), |a| a.text.as_str());
        match form {
            SlotForm::Np => {
                let article = if ctx.scene.is_grounded(entity) {
                    "the"
                } else if first_after_det.starts_with(['a', 'e', 'i', 'o', 'u']) {
                    "an"
                } else {
                    "a"
                };
                out.push(Word::new(article, "DET").with_referent(entity));
            }
            SlotForm::This => out.push(Word::new("this", "DET").with_referent(entity)),
            SlotForm::Noun | SlotForm::Pron => {}
        }
        out.extend(adjective);
        out.extend(head);
        Ok(out)
    }

    fn statuses(&self, scene: &Scene, words: &[Word], given_extra: &BTreeSet<NodeId>) -> Vec<ReferentStatus> {
        let net = scene.network();
        let mut seen: Vec<NodeId> = Vec::new();
        for w in words {
            if let Some(r) = &w.referent {
                if !seen.contains(r) {
                    seen.push(r.clone());
                }
            }
        }
        seen.iter()
            .map(|r| ReferentStatus {
                referent: r.clone(),
                given: scene.is_grounded(r) || given_extra.contains(r),
                contrastive: seen.iter().any(|o| o != r && net.type_of(o) == net.type_of(r)),
            })
            .collect()
    }
}

fn group_category<'a>(first_pos: &str, mut all: impl Iterator<Item = &'a str>) -> (&'static str, &'static str) {
    if all.any(|p| p == "VERB" || p == "AUX") {
        return ("VP", "pred");
    }
    match first_pos {
        "ADV" => ("AdvP", "mod"),
        "INTJ" => ("IntjP", "mod"),
        "ADP" => ("PP", "mod"),
        _ => ("XP", "mod"),
    }
}

fn shift(node: SyntaxNode, by: usize) -> SyntaxNode {
    match node {
        SyntaxNode::Leaf(i) => SyntaxNode::Leaf(i + by),
        SyntaxNode::Phrase { category, function, children } => {
            SyntaxNode::Phrase { category, function, children: children.into_iter().map(|c| shift(c, by)).collect() }
        }
    }
}

fn capitalize(words: &mut [Word]) {
    let mut sentence_start = true;
    for w in words.iter_mut() {
        if w.is_punctuation() {
            sentence_start |= matches!(w.text.as_str(), "." | "!" | "?");
            continue;
        }
        if sentence_start {
            let mut chars = w.text.chars();
            if let Some(c) = chars.next() {
                w.text = c.to_uppercase().chain(chars).collect();
            }
            sentence_start = false;
        }
    }
}

fn spans(labels: &[InfoKind]) -> Vec<InfoSpan> {
    let mut out: Vec<InfoSpan> = Vec::new();
    for (i, &kind) in labels.iter().enumerate() {
        match out.last_mut() {
            Some(s) if s.kind == kind => s.end = i + 1,
            _ => out.push(InfoSpan { kind, start: i, end: i + 1 }),
        }
    }
    out
}

const CLOSED_CLASS: [(&str, &str); 40] = [
    ("the", "DET"),
    ("a", "DET"),
    ("an", "DET"),
    ("this", "DET"),
    ("that", "DET"),
    ("these", "DET"),
    ("those", "DET"),
    ("some", "DET"),
    ("much", "DET"),
    ("many", "DET"),
    ("it", "PRON"),
    ("i", "PRON"),
    ("you", "PRON"),
    ("he", "PRON"),
    ("she", "PRON"),
    ("we", "PRON"),
    ("they", "PRON"),
    ("me", "PRON"),
    ("him", "PRON"),
    ("them", "PRON"),
    ("of", "ADP"),
    ("to", "ADP"),
    ("in", "ADP"),
    ("on", "ADP"),
    ("at", "ADP"),
    ("for", "ADP"),
    ("with", "ADP"),
    ("about", "ADP"),
    ("from", "ADP"),
    ("by", "ADP"),
    ("is", "AUX"),
    ("are", "AUX"),
    ("was", "AUX"),
    ("be", "AUX"),
    ("do", "AUX"),
    ("does", "AUX"),
    ("would", "AUX"),
    ("can", "AUX"),
    ("and", "CCONJ"),
    ("or", "CCONJ"),
];

/// Tag a word of plain text: punctuation, a closed-class word, or `X`.
pub fn shallow_pos(token: &str) -> &'static str {
    if token.chars().all(|c| c.is_ascii_punctuation()) {
        return "PUNCT";
    }
    let lower = token.to_lowercase();
    CLOSED_CLASS.iter().find(|(w, _)| *w == lower).map_or("X", |(_, p)| p)
}

/// A document with nothing but whitespace-separated words, the speaker and
/// the emotion.
pub fn minimal_document(
    text: &str,
    speaker: NodeId,
    emotion: DimensionPoint,
) -> Result<SynthesisDocument, RealizeError> {
    let mut doc = SynthesisDocument::new("u1", speaker, emotion);
    doc.words = text.split_whitespace().map(|t| Word::new(t, shallow_pos(t))).collect();
    if doc.words.is_empty() {
        return Err(RealizeError::EmptyText);
    }
    Ok(doc)
}

const YES_NO: [(&str, &str); 6] = [
    ("accept", "nod"),
    ("confirm", "nod"),
    ("agree", "nod"),
    ("reject", "shake"),
    ("deny", "shake"),
    ("disagree", "shake"),
];
const BACKCHANNEL: [&str; 2] = ["positiveFeedback", "backchannel"];

/// Posture shown for a basic emotion category.
pub fn posture_for(category: &str) -> &str {
    match category {
        "sadness" => "hangingShoulders",
        "happiness" => "upright",
        "anger" => "leanForward",
        "fear" => "shrink",
        "disgust" => "turnAway",
        "surprise" => "straighten",
        other => other,
    }
}

/// Rule-based gesture candidates for a realized utterance.
pub fn propose_candidates(acts: &[DialogueAct], doc: &SynthesisDocument) -> Vec<GestureCandidate> {
    let mut out = Vec::new();
    for act in acts {
        if let Some((_, label)) = YES_NO.iter().find(|(t, _)| *t == act.act_type) {
            out.push(GestureCandidate::new(GestureClass::Emblematic, label, 7, Scope::Act, &[Articulator::Head]));
        }
        if BACKCHANNEL.contains(&act.act_type.as_str()) {
            out.push(GestureCandidate::new(GestureClass::Backchannel, "nod", 6, Scope::Act, &[Articulator::Head]));
        }
    }
    // demonstrative: point at the last word of the noun phrase after "this"
    for (i, w) in doc.words.iter().enumerate() {
        if !(w.pos == "DET" && w.text.eq_ignore_ascii_case("this")) {
            continue;
        }
        let Some(r) = &w.referent else { continue };
        let head = (i + 1..doc.words.len())
            .take_while(|&j| doc.words[j].referent.as_ref() == Some(r) || doc.words[j].pos == "ADJ")
            .filter(|&j| doc.words[j].pos == "NOUN")
            .last();
        if let Some(h) = head {
            let mut c =
                GestureCandidate::new(GestureClass::Deictic, "point", 5, Scope::Word(h), &[Articulator::ArmRight]);
            c.direction = Some(r.to_string());
            out.push(c);
        }
    }
    if let Some(statuses) = &doc.referents {
        let contrastive: Vec<&NodeId> = statuses.iter().filter(|s| s.contrastive).map(|s| &s.referent).collect();
        if contrastive.len() >= 2 {
            let second = contrastive[1];
            let last = (0..doc.words.len()).rev().find(|&j| doc.words[j].referent.as_ref() == Some(second));
            if let Some(j) = last {
                let mut c = GestureCandidate::new(
                    GestureClass::Contrast,
                    "contrast",
                    4,
                    Scope::Word(j),
                    &[Articulator::ArmLeft, Articulator::ArmRight],
                );
                c.direction = Some(second.to_string());
                out.push(c);
            }
        }
    }
    if acts.iter().any(|a| a.act_type == "question") {
        let phrases = phrase_breaks(doc).len();
        if phrases > 0 {
            out.push(GestureCandidate::new(
                GestureClass::TurnAccompanying,
                "raise",
                3,
                Scope::Phrase(phrases - 1),
                &[Articulator::Brows],
            ));
        }
    }
    if let Some(addressee) = acts.first().and_then(|a| a.addressees.first()) {
        let mut c =
            GestureCandidate::new(GestureClass::TurnAccompanying, "gazeAt", 2, Scope::Act, &[Articulator::Gaze]);
        c.direction = Some(addressee.to_string());
        out.push(c);
    }
    if let Some(e) = &doc.expression {
        if e.weight > 0.0 && e.category != crate::affect::NEUTRAL {
            let mut face =
                GestureCandidate::new(GestureClass::Emotional, &e.category, 2, Scope::Act, &[Articulator::Brows]);
            face.intensity = e.weight;
            out.push(face);
            let mut posture = GestureCandidate::new(
                GestureClass::Emotional,
                posture_for(&e.category),
                1,
                Scope::Act,
                &[Articulator::Posture],
            );
            posture.intensity = e.weight;
            out.push(posture);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{eshowroom, eshowroom_resources};

    #[test]
    fn template_tokens() {
        let t: Templates = "template inform have = {1} has/VERB {2:noun@obj} .\nunit hp = hp\n".parse().unwrap();
        let toks = t.template("inform", "have").unwrap();
        assert_eq!(toks.len(), 4);
        assert_eq!(toks[2], Token::Slot { arg: 2, form: SlotForm::Noun, function: Some("obj".into()) });
        assert_eq!(toks[3], Token::Fixed { text: ".".into(), pos: "PUNCT".into() });
        assert_eq!(t.unit("hp").unwrap(), ["hp"]);
    }

    #[test]
    fn template_errors_carry_line() {
        for (text, line) in [
            ("noun car = car\ntemplate inform have = {3}\n", 2),
            ("template inform have\n", 1),
            ("\n\ntemplate inform have = has\n", 3),
            ("template inform have = {1:plural}\n", 1),
        ] {
            match text.parse::<Templates>() {
                Err(TemplateError::Syntax { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn shallow_tags() {
        assert_eq!(shallow_pos("?"), "PUNCT");
        assert_eq!(shallow_pos("The"), "DET");
        assert_eq!(shallow_pos("does"), "AUX");
        assert_eq!(shallow_pos("motor"), "X");
    }

    #[test]
    fn minimal_document_needs_words() {
        assert_eq!(minimal_document("  ", NodeId::new("v1"), DimensionPoint::ORIGIN), Err(RealizeError::EmptyText));
        let d = minimal_document("hello , world", NodeId::new("v1"), DimensionPoint::ORIGIN).unwrap();
        assert!(d.is_minimal());
        assert_eq!(d.text(), "hello , world");
    }

    #[test]
    fn merged_feedback_and_question() {
        let f = eshowroom();
        let res = eshowroom_resources();
        let acts = [f.scene.dialogue_act(&f.feedback).unwrap(), f.scene.dialogue_act(&f.question).unwrap()];
        let doc = res.realizer.realize_utterance(&f.scene, &acts, "u2", &res.tables).unwrap();
        assert_eq!(doc.text(), "Yes , how much horse power does it have ?");
        assert_eq!(doc.acts, [f.feedback.clone(), f.question.clone()]);
        assert!(doc.candidates.iter().any(|c| c.class == GestureClass::Backchannel));
        assert!(doc.candidates.iter().any(|c| c.label == "raise"));
    }

    #[test]
    fn joy_sets_expression_and_posture() {
        let f = eshowroom();
        let res = eshowroom_resources();
        let act = f.scene.dialogue_act(&f.inform).unwrap();
        let doc = res.realizer.realize_act(&f.scene, &act, "u3", &res.tables).unwrap();
        let e = doc.expression.as_ref().unwrap();
        assert_eq!((e.category.as_str(), e.weight), ("happiness", 1.0));
        assert!(doc.candidates.iter().any(|c| c.label == "upright" && c.articulators == [Articulator::Posture]));
        // the car was mentioned by the question this answers
        let car = doc.referent_status(&f.car).unwrap();
        assert!(car.given && !car.contrastive);
    }

    #[test]
    fn ask_points_at_this_car() {
        let f = eshowroom();
        let res = eshowroom_resources();
        let act = f.scene.dialogue_act(&f.ask).unwrap();
        let doc = res.realizer.realize_act(&f.scene, &act, "u1", &res.tables).unwrap();
        let point = doc.candidates.iter().find(|c| c.class == GestureClass::Deictic).unwrap();
        let Scope::Word(w) = point.scope else { panic!("{:?}", point.scope) };
        assert_eq!(doc.words[w].text, "car");
        assert_eq!(point.direction.as_deref(), Some(f.car.as_str()));
    }

    #[test]
    fn missing_noun_is_reported() {
        let f = eshowroom();
        let res = eshowroom_resources();
        let realizer = Realizer::new("template question offerInfo = {1} ?\n".parse().unwrap(), 0.5);
        let act = f.scene.dialogue_act(&f.ask).unwrap();
        assert_eq!(
            realizer.realize_act(&f.scene, &act, "u1", &res.tables),
            Err(RealizeError::MissingLexicon("noun car".into()))
        );
    }

    #[test]
    fn postures() {
        assert_eq!(posture_for("sadness"), "hangingShoulders");
        assert_eq!(posture_for("neutral"), "neutral");
    }
}
