//! XML encodings of scene, synthesis, timing and timeline documents.
//!
//! Writers are canonical: the same value always produces the same bytes.
//! Readers report every failure with a line and column.

mod scene;
mod synthesis;
mod timeline;
mod timing;

pub use scene::{read_scene, write_scene};
pub use synthesis::{read_synthesis, write_synthesis};
pub use timeline::{read_timeline, write_timeline};
pub use timing::{read_timing, write_timing};

use std::fmt::Write as _;
use std::str::FromStr;

use roxmltree::{Document, Node};
use thiserror::Error;

use crate::affect::DimensionPoint;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: u32, column: u32, message: String },
    #[error("line {line}, column {column}: schema violation: {message}")]
    Schema { line: u32, column: u32, message: String },
    #[error("line {line}, column {column}: crossing information spans: {message}")]
    CrossingSpan { line: u32, column: u32, message: String },
}

impl IoError {
    pub fn position(&self) -> (u32, u32) {
        match self {
            IoError::Parse { line, column, .. }
            | IoError::Schema { line, column, .. }
            | IoError::CrossingSpan { line, column, .. } => (*line, *column),
        }
    }
}

pub(crate) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("&#10;"),
            '\t' => out.push_str("&#9;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    out
}

/// Indented element writer with attributes in call order.
pub(crate) struct XmlWriter {
    out: String,
    stack: Vec<&'static str>,
}

pub(crate) type Attrs<'a> = &'a [(&'a str, Option<String>)];

impl XmlWriter {
    pub fn new() -> Self {
        XmlWriter { out: String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"), stack: Vec::new() }
    }

    fn start(&mut self, name: &str, attrs: Attrs<'_>) {
        for _ in 0..self.stack.len() {
            self.out.push_str("  ");
        }
        self.out.push('<');
        self.out.push_str(name);
        for (k, v) in attrs {
            if let Some(v) = v {
                let _ = write!(self.out, " {k}=\"{}\"", escape(v));
            }
        }
    }

    pub fn open(&mut self, name: &'static str, attrs: Attrs<'_>) {
        self.start(name, attrs);
        self.out.push_str(">\n");
        self.stack.push(name);
    }

    pub fn empty(&mut self, name: &str, attrs: Attrs<'_>) {
        self.start(name, attrs);
        self.out.push_str("/>\n");
    }

    pub fn text(&mut self, name: &str, attrs: Attrs<'_>, text: &str) {
        self.start(name, attrs);
        let _ = writeln!(self.out, ">{}</{name}>", escape(text));
    }

    pub fn close(&mut self) {
        let name = self.stack.pop().expect("close without open");
        for _ in 0..self.stack.len() {
            self.out.push_str("  ");
        }
        let _ = writeln!(self.out, "</{name}>");
    }

    pub fn finish(mut self) -> String {
        while !self.stack.is_empty() {
            self.close();
        }
        self.out
    }
}

pub(crate) fn a(value: impl ToString) -> Option<String> {
    Some(value.to_string())
}

pub(crate) fn emotion_attrs(p: &DimensionPoint) -> Vec<(&'static str, Option<String>)> {
    vec![("valence", a(p.valence)), ("arousal", a(p.arousal)), ("dominance", p.dominance.map(|d| d.to_string()))]
}

/// Reading context: the parsed document, for positions.
pub(crate) struct Ctx<'a, 'input> {
    pub doc: &'a Document<'input>,
}

impl<'a, 'input: 'a> Ctx<'a, 'input> {
    pub fn parse(text: &'input str) -> Result<Document<'input>, IoError> {
        Document::parse(text).map_err(|e| {
            let pos = e.pos();
            IoError::Parse { line: pos.row, column: pos.col, message: e.to_string() }
        })
    }

    pub fn pos(&self, node: Node<'_, '_>) -> (u32, u32) {
        let p = self.doc.text_pos_at(node.range().start);
        (p.row, p.col)
    }

    pub fn schema(&self, node: Node<'_, '_>, message: impl Into<String>) -> IoError {
        let (line, column) = self.pos(node);
        IoError::Schema { line, column, message: message.into() }
    }

    pub fn crossing(&self, node: Node<'_, '_>, message: impl Into<String>) -> IoError {
        let (line, column) = self.pos(node);
        IoError::CrossingSpan { line, column, message: message.into() }
    }

    pub fn attr(&self, node: Node<'a, 'input>, name: &str) -> Result<&'a str, IoError> {
        node.attribute(name)
            .ok_or_else(|| self.schema(node, format!("<{}> lacks attribute {name}", node.tag_name().name())))
    }

    pub fn parse_attr<T: FromStr>(&self, node: Node<'a, 'input>, name: &str) -> Result<T, IoError> {
        let raw = self.attr(node, name)?;
        raw.parse().map_err(|_| self.schema(node, format!("attribute {name}={raw:?} has the wrong form")))
    }

    pub fn opt_parse<T: FromStr>(&self, node: Node<'a, 'input>, name: &str) -> Result<Option<T>, IoError> {
        match node.attribute(name) {
            None => Ok(None),
            Some(_) => self.parse_attr(node, name).map(Some),
        }
    }

    pub fn bool_attr(&self, node: Node<'a, 'input>, name: &str) -> Result<bool, IoError> {
        match self.attr(node, name)? {
            "true" => Ok(true),
            "false" => Ok(false),
            other => Err(self.schema(node, format!("attribute {name}={other:?} must be true or false"))),
        }
    }

    /// Element children; non-blank text is an error.
    pub fn children(&self, node: Node<'a, 'input>) -> Result<Vec<Node<'a, 'input>>, IoError> {
        let mut out = Vec::new();
        for c in node.children() {
            if c.is_element() {
                out.push(c);
            } else if c.is_text() && !c.text().unwrap_or("").trim().is_empty() {
                return Err(self.schema(c, format!("unexpected text in <{}>", node.tag_name().name())));
            }
        }
        Ok(out)
    }

    pub fn expect(&self, node: Node<'_, '_>, name: &str) -> Result<(), IoError> {
        if node.tag_name().name() == name {
            Ok(())
        } else {
            Err(self.schema(node, format!("expected <{name}>, found <{}>", node.tag_name().name())))
        }
    }

    pub fn root(&self, name: &str) -> Result<Node<'a, 'input>, IoError> {
        let root = self.doc.root_element();
        self.expect(root, name)?;
        match root.attribute("version") {
            Some(FORMAT_VERSION) => Ok(root),
            Some(v) => Err(self.schema(root, format!("unsupported version {v}"))),
            None => Err(self.schema(root, "missing version attribute")),
        }
    }

    pub fn emotion(&self, node: Node<'a, 'input>) -> Result<DimensionPoint, IoError> {
        self.expect(node, "emotion")?;
        Ok(DimensionPoint {
            valence: self.parse_attr(node, "valence")?,
            arousal: self.parse_attr(node, "arousal")?,
            dominance: self.opt_parse(node, "dominance")?,
        })
    }
}
