//! T-box schemas and network validation.
//!
//! A T-box declares, for each type label, its supertypes and attribute
//! declarations. Grammar (one statement per line, `#` starts a comment):
//!
//! ```text
//! type <label> [: <super> {, <super>}]
//! attr <name> required|optional <target-type> scalar|set|list
//! ```
//!
//! `attr` lines belong to the most recent `type` line. Subtypes inherit every
//! attribute of their supertypes and may only add new ones.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use thiserror::Error;

use crate::network::{NodeId, NodeKind, TypedNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Multiplicity {
    Scalar,
    Set,
    List,
}

impl Multiplicity {
    pub fn as_str(self) -> &'static str {
        match self {
            Multiplicity::Scalar => "scalar",
            Multiplicity::Set => "set",
            Multiplicity::List => "list",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AttrDecl {
    pub name: String,
    pub required: bool,
    pub target: String,
    pub multiplicity: Multiplicity,
}

impl AttrDecl {
    fn describe(&self) -> String {
        match self.multiplicity {
            Multiplicity::Scalar => self.target.clone(),
            m => format!("{}<{}>", m.as_str(), self.target),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TypeDef {
    pub supertypes: Vec<String>,
    pub attrs: Vec<AttrDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TBoxError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("type {0} declared twice")]
    DuplicateType(String),
    #[error("type {ty} names unknown supertype {sup}")]
    UnknownSupertype { ty: String, sup: String },
    #[error("subtype cycle through {0}")]
    Cycle(String),
    #[error("type {ty} redeclares inherited attribute {attr} differently")]
    Contradiction { ty: String, attr: String },
}

/// A validated schema with precomputed inheritance.
#[derive(Debug, Clone, Default)]
pub struct TBox {
    types: BTreeMap<String, TypeDef>,
    // label -> all ancestors including itself
    ancestors: BTreeMap<String, BTreeSet<String>>,
    // label -> effective attributes (own + inherited)
    effective: BTreeMap<String, IndexMap<String, AttrDecl>>,
}

impl TBox {
    pub fn from_types(types: BTreeMap<String, TypeDef>) -> Result<Self, TBoxError> {
        for (ty, def) in &types {
            for sup in &def.supertypes {
                if !types.contains_key(sup) {
                    return Err(TBoxError::UnknownSupertype { ty: ty.clone(), sup: sup.clone() });
                }
            }
        }
        let mut tbox = TBox { types, ..Default::default() };
        let labels: Vec<String> = tbox.types.keys().cloned().collect();
        for label in &labels {
            let mut stack = Vec::new();
            tbox.resolve(label, &mut stack)?;
        }
        Ok(tbox)
    }

    // Depth-first resolution of ancestors and inherited attributes.
    fn resolve(&mut self, label: &str, stack: &mut Vec<String>) -> Result<(), TBoxError> {
        if self.effective.contains_key(label) {
            return Ok(());
        }
        if stack.iter().any(|s| s == label) {
            return Err(TBoxError::Cycle(label.to_string()));
        }
        stack.push(label.to_string());
        let def = self.types[label].clone();
        let mut ancestors = BTreeSet::from([label.to_string()]);
        let mut attrs: IndexMap<String, AttrDecl> = IndexMap::new();
        for sup in &def.supertypes {
            self.resolve(sup, stack)?;
            ancestors.extend(self.ancestors[sup].iter().cloned());
            for (name, decl) in &self.effective[sup] {
                match attrs.get(name) {
                    Some(existing) if existing != decl => {
                        return Err(TBoxError::Contradiction { ty: label.to_string(), attr: name.clone() })
                    }
                    _ => {
                        attrs.insert(name.clone(), decl.clone());
                    }
                }
            }
        }
        for decl in &def.attrs {
            match attrs.get(&decl.name) {
                Some(existing) if existing != decl => {
                    return Err(TBoxError::Contradiction { ty: label.to_string(), attr: decl.name.clone() })
                }
                _ => {
                    attrs.insert(decl.name.clone(), decl.clone());
                }
            }
        }
        stack.pop();
        self.ancestors.insert(label.to_string(), ancestors);
        self.effective.insert(label.to_string(), attrs);
        Ok(())
    }

    pub fn has_type(&self, label: &str) -> bool {
        self.types.contains_key(label)
    }

    pub fn type_def(&self, label: &str) -> Option<&TypeDef> {
        self.types.get(label)
    }

    pub fn type_labels(&self) -> impl Iterator<Item = &str> {
        self.types.keys().map(String::as_str)
    }

    /// Reflexive-transitive subtype test.
    pub fn is_subtype(&self, sub: &str, sup: &str) -> bool {
        self.ancestors.get(sub).is_some_and(|a| a.contains(sup))
    }

    /// Own and inherited attribute declarations.
    pub fn attributes_of(&self, label: &str) -> Option<&IndexMap<String, AttrDecl>> {
        self.effective.get(label)
    }

    /// Check every node's attributes against its (inherited) type definition.
    pub fn validate(&self, net: &TypedNetwork) -> ValidationReport {
        let mut violations = Vec::new();
        for node in net.nodes() {
            let Some(attrs) = self.effective.get(&node.type_label) else {
                violations.push(Violation::UnknownType { node: node.id.clone(), type_label: node.type_label.clone() });
                continue;
            };
            for (attr, target) in net.attributes(&node.id) {
                let Some(decl) = attrs.get(attr) else {
                    violations.push(Violation::UnknownAttribute {
                        node: node.id.clone(),
                        type_label: node.type_label.clone(),
                        attr: attr.to_string(),
                    });
                    continue;
                };
                if let Some(found) = self.mismatch(net, decl, target) {
                    violations.push(Violation::TypeMismatch {
                        node: node.id.clone(),
                        attr: attr.to_string(),
                        expected: decl.describe(),
                        found,
                    });
                }
            }
            for decl in attrs.values().filter(|d| d.required) {
                if net.attribute(&node.id, &decl.name).is_none() {
                    violations.push(Violation::MissingAttribute {
                        node: node.id.clone(),
                        type_label: node.type_label.clone(),
                        attr: decl.name.clone(),
                    });
                }
            }
        }
        violations.sort();
        ValidationReport { violations }
    }

    // Describes the offending value, or None when it conforms.
    fn mismatch(&self, net: &TypedNetwork, decl: &AttrDecl, target: &NodeId) -> Option<String> {
        let node = net.node(target)?;
        let scalar_ok = |id: &NodeId| {
            net.node(id).is_some_and(|n| !n.kind.is_complex() && self.is_subtype(&n.type_label, &decl.target))
        };
        let expected_kind = match decl.multiplicity {
            Multiplicity::Scalar => {
                return (!scalar_ok(target)).then(|| format!("{} {}", node.kind, node.type_label));
            }
            Multiplicity::Set => NodeKind::ComplexSet,
            Multiplicity::List => NodeKind::ComplexList,
        };
        if node.kind != expected_kind {
            return Some(format!("{} {}", node.kind, node.type_label));
        }
        net.members(target).iter().find(|m| !scalar_ok(m)).map(|m| {
            let t = net.type_of(m).unwrap_or("?");
            format!("member {m} of type {t}")
        })
    }
}

impl FromStr for TBox {
    type Err = TBoxError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut types: BTreeMap<String, TypeDef> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: &str| TBoxError::Syntax { line: line_no, message: message.to_string() };
            if let Some(rest) = line.strip_prefix("type ") {
                let (label, supers) = match rest.split_once(':') {
                    Some((l, s)) => (l.trim(), s.split(',').map(|x| x.trim().to_string()).collect::<Vec<_>>()),
                    None => (rest.trim(), Vec::new()),
                };
                if label.is_empty() || label.contains(char::is_whitespace) {
                    return Err(syntax("type label must be a single word"));
                }
                if supers.iter().any(|s| s.is_empty() || s.contains(char::is_whitespace)) {
                    return Err(syntax("malformed supertype list"));
                }
                if types.contains_key(label) {
                    return Err(TBoxError::DuplicateType(label.to_string()));
                }
                types.insert(label.to_string(), TypeDef { supertypes: supers, attrs: Vec::new() });
                current = Some(label.to_string());
            } else if let Some(rest) = line.strip_prefix("attr ") {
                let owner = current.as_ref().ok_or_else(|| syntax("attr outside of a type block"))?;
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [name, req, target, mult] = parts[..] else {
                    return Err(syntax("expected: attr <name> required|optional <type> scalar|set|list"));
                };
                let required = match req {
                    "required" => true,
                    "optional" => false,
                    _ => return Err(syntax("expected required or optional")),
                };
                let multiplicity = match mult {
                    "scalar" => Multiplicity::Scalar,
                    "set" => Multiplicity::Set,
                    "list" => Multiplicity::List,
                    _ => return Err(syntax("expected scalar, set or list")),
                };
                let def = types.get_mut(owner).expect("current type exists");
                if def.attrs.iter().any(|a| a.name == name) {
                    return Err(syntax("attribute declared twice"));
                }
                def.attrs.push(AttrDecl { name: name.to_string(), required, target: target.to_string(), multiplicity });
            } else {
                return Err(syntax("expected `type` or `attr`"));
            }
        }
        for (ty, def) in &types {
            for decl in &def.attrs {
                if !types.contains_key(&decl.target) {
                    return Err(TBoxError::UnknownSupertype { ty: ty.clone(), sup: decl.target.clone() });
                }
            }
        }
        TBox::from_types(types)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    MissingAttribute { node: NodeId, type_label: String, attr: String },
    TypeMismatch { node: NodeId, attr: String, expected: String, found: String },
    UnknownType { node: NodeId, type_label: String },
    UnknownAttribute { node: NodeId, type_label: String, attr: String },
}

impl Violation {
    pub fn node(&self) -> &NodeId {
        match self {
            Violation::MissingAttribute { node, .. }
            | Violation::TypeMismatch { node, .. }
            | Violation::UnknownType { node, .. }
            | Violation::UnknownAttribute { node, .. } => node,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Violation::MissingAttribute { .. } => "MissingAttribute",
            Violation::TypeMismatch { .. } => "TypeMismatch",
            Violation::UnknownType { .. } => "UnknownType",
            Violation::UnknownAttribute { .. } => "UnknownAttribute",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingAttribute { node, type_label, attr } => {
                write!(f, "MissingAttribute: {node} ({type_label}) lacks required attribute {attr}")
            }
            Violation::TypeMismatch { node, attr, expected, found } => {
                write!(f, "TypeMismatch: {node}.{attr} expects {expected}, found {found}")
            }
            Violation::UnknownType { node, type_label } => {
                write!(f, "UnknownType: {node} has undeclared type {type_label}")
            }
            Violation::UnknownAttribute { node, type_label, attr } => {
                write!(f, "UnknownAttribute: {node} ({type_label}) has undeclared attribute {attr}")
            }
        }
    }
}

/// Schema violations, sorted so that reports do not depend on node order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "
        type thing
        type person : thing
          attr name optional thing scalar
        type personSet
        type scene
          attr participants required person set
          attr topic optional thing scalar
    ";

    #[test]
    fn parses_and_inherits() {
        let tbox: TBox = SMALL.parse().unwrap();
        assert!(tbox.is_subtype("person", "thing"));
        assert!(tbox.is_subtype("person", "person"));
        assert!(!tbox.is_subtype("thing", "person"));
        assert!(tbox.attributes_of("person").unwrap().contains_key("name"));
    }

    #[test]
    fn rejects_cycle() {
        let err = "type a : b\ntype b : a".parse::<TBox>().unwrap_err();
        assert!(matches!(err, TBoxError::Cycle(_)));
    }

    #[test]
    fn rejects_contradicting_subtype() {
        let text = "type t\ntype a\n attr x required t scalar\ntype b : a\n attr x optional t scalar";
        assert!(matches!(text.parse::<TBox>().unwrap_err(), TBoxError::Contradiction { .. }));
        // identical redeclaration is harmless
        let same = "type t\ntype a\n attr x required t scalar\ntype b : a\n attr x required t scalar";
        assert!(same.parse::<TBox>().is_ok());
    }

    #[test]
    fn syntax_errors_report_line() {
        let err = "type a\n attr x maybe a scalar".parse::<TBox>().unwrap_err();
        assert_eq!(err, TBoxError::Syntax { line: 2, message: "expected required or optional".into() });
        assert!(matches!("attr x required a scalar".parse::<TBox>(), Err(TBoxError::Syntax { line: 1, .. })));
        assert!(matches!("type a : missing".parse::<TBox>(), Err(TBoxError::UnknownSupertype { .. })));
    }

    fn scene_net() -> (TypedNetwork, NodeId, NodeId) {
        let mut net = TypedNetwork::new();
        let p = net.constant("person", "seller");
        let set = net.set("personSet", vec![p.clone()]).unwrap();
        let scene = net.variable("scene");
        net.set_attribute(&scene, "participants", &set).unwrap();
        (net, scene, p)
    }

    #[test]
    fn clean_network_validates() {
        let tbox: TBox = SMALL.parse().unwrap();
        let (net, _, _) = scene_net();
        assert!(tbox.validate(&net).is_empty());
    }

    #[test]
    fn each_violation_kind() {
        let tbox: TBox = SMALL.parse().unwrap();
        let (mut net, scene, p) = scene_net();
        net.remove_attribute(&scene, "participants");
        let r = tbox.validate(&net);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind(), "MissingAttribute");

        let (mut net, scene, p2) = scene_net();
        net.set_attribute(&scene, "participants", &p2).unwrap();
        let r = tbox.validate(&net);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind(), "TypeMismatch");

        let (mut net, scene, _) = scene_net();
        net.set_attribute(&scene, "mood", &p).unwrap();
        let r = tbox.validate(&net);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind(), "UnknownAttribute");

        let (mut net, _, _) = scene_net();
        net.variable("spaceship");
        let r = tbox.validate(&net);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind(), "UnknownType");
    }

    #[test]
    fn set_member_type_checked() {
        let tbox: TBox = SMALL.parse().unwrap();
        let (mut net, scene, _) = scene_net();
        let th = net.variable("thing");
        let set = net.set("personSet", vec![th]).unwrap();
        net.set_attribute(&scene, "participants", &set).unwrap();
        let r = tbox.validate(&net);
        assert_eq!(r.violations.len(), 1);
        assert!(r.violations[0].to_string().contains("member"));
    }
}
