//! Typed object networks.
//!
//! A network is a flat collection of typed nodes connected by labelled
//! attribute arcs. Nodes are variables (arbitrary objects), constants (named
//! objects) or complex nodes (sets and lists over other nodes). Every RRL
//! document type is stored in one of these networks.

use std::cmp::Ordering;
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

/// Opaque node identifier. Generated ids have the form `v<N>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Numeric suffix of a generated `v<N>` id.
    fn generated_index(&self) -> Option<u64> {
        self.0.strip_prefix('v').and_then(|n| {
            if n.is_empty() || (n.len() > 1 && n.starts_with('0')) {
                None
            } else {
                n.parse().ok()
            }
        })
    }

    fn split_natural(&self) -> (&str, Option<u64>) {
        let s = self.0.as_str();
        let digits = s.len() - s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        if digits == 0 || digits > 18 {
            return (s, None);
        }
        let (prefix, num) = s.split_at(s.len() - digits);
        (prefix, num.parse().ok())
    }
}

// Natural order: `v2` sorts before `v10`.
impl Ord for NodeId {
    fn cmp(&self, other: &Self) -> Ordering {
        let (pa, na) = self.split_natural();
        let (pb, nb) = other.split_natural();
        pa.cmp(pb).then_with(|| na.cmp(&nb)).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for NodeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    Variable,
    Constant,
    ComplexSet,
    ComplexList,
}

impl NodeKind {
    pub fn is_complex(self) -> bool {
        matches!(self, NodeKind::ComplexSet | NodeKind::ComplexList)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Variable => "variable",
            NodeKind::Constant => "constant",
            NodeKind::ComplexSet => "set",
            NodeKind::ComplexList => "list",
        }
    }

    pub fn parse(s: &str) -> Option<NodeKind> {
        match s {
            "variable" => Some(NodeKind::Variable),
            "constant" => Some(NodeKind::Constant),
            "set" | "complex-set" => Some(NodeKind::ComplexSet),
            "list" | "complex-list" => Some(NodeKind::ComplexList),
            _ => None,
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub kind: NodeKind,
    pub type_label: String,
    /// Present iff `kind` is `Constant`.
    pub name: Option<String>,
    /// Present iff `kind` is complex.
    pub members: Option<Vec<NodeId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AttributeArc {
    pub from: NodeId,
    pub attr: String,
    pub to: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("malformed node: {0}")]
    MalformedNode(String),
    #[error("member {member} of complex node does not resolve")]
    DanglingMember { member: NodeId },
    #[error("duplicate member {member} in complex-set node")]
    DuplicateMember { member: NodeId },
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {0} already exists")]
    DuplicateNode(NodeId),
    #[error("node {0} is not a complex node")]
    NotComplex(NodeId),
}

/// Labelled directed node/arc store.
///
/// Attributes are single-valued: at most one arc per `(from, attr)` pair.
/// Plurality goes through complex-set and complex-list nodes.
#[derive(Debug, Clone, Default)]
pub struct TypedNetwork {
    nodes: IndexMap<NodeId, Node>,
    // from -> (attr -> to), both in insertion order
    arcs: IndexMap<NodeId, IndexMap<String, NodeId>>,
    next_id: u64,
}

impl PartialEq for TypedNetwork {
    fn eq(&self, other: &Self) -> bool {
        // IndexMap equality ignores order; empty attribute maps are not significant.
        let non_empty = |m: &IndexMap<NodeId, IndexMap<String, NodeId>>| {
            m.iter().filter(|(_, a)| !a.is_empty()).map(|(k, a)| (k.clone(), a.clone())).collect::<IndexMap<_, _>>()
        };
        self.nodes == other.nodes && non_empty(&self.arcs) == non_empty(&other.arcs)
    }
}

impl TypedNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn fresh_id(&mut self) -> NodeId {
        loop {
            self.next_id += 1;
            let id = NodeId(format!("v{}", self.next_id));
            if !self.nodes.contains_key(&id) {
                return id;
            }
        }
    }

    fn check_shape(
        &self,
        kind: NodeKind,
        name: &Option<String>,
        members: &Option<Vec<NodeId>>,
    ) -> Result<(), NetworkError> {
        match (kind, name) {
            (NodeKind::Constant, None) => return Err(NetworkError::MalformedNode("constant requires a name".into())),
            (NodeKind::Constant, Some(_)) => {}
            (_, Some(_)) => return Err(NetworkError::MalformedNode(format!("name given for {kind} node"))),
            _ => {}
        }
        match (kind.is_complex(), members) {
            (false, Some(_)) => Err(NetworkError::MalformedNode(format!("members given for {kind} node"))),
            (true, None) => Err(NetworkError::MalformedNode(format!("{kind} node requires a member list"))),
            (true, Some(ms)) => {
                for (i, m) in ms.iter().enumerate() {
                    if !self.nodes.contains_key(m) {
                        return Err(NetworkError::DanglingMember { member: m.clone() });
                    }
                    if kind == NodeKind::ComplexSet && ms[..i].contains(m) {
                        return Err(NetworkError::DuplicateMember { member: m.clone() });
                    }
                }
                Ok(())
            }
            (false, None) => Ok(()),
        }
    }

    /// Create a node with a fresh `v<N>` id.
    pub fn create_node(
        &mut self,
        kind: NodeKind,
        type_label: &str,
        name: Option<&str>,
        members: Option<Vec<NodeId>>,
    ) -> Result<NodeId, NetworkError> {
        let name = name.map(str::to_string);
        self.check_shape(kind, &name, &members)?;
        let id = self.fresh_id();
        self.nodes.insert(id.clone(), Node { id: id.clone(), kind, type_label: type_label.to_string(), name, members });
        Ok(id)
    }

    pub fn variable(&mut self, type_label: &str) -> NodeId {
        self.create_node(NodeKind::Variable, type_label, None, None).expect("variable nodes have no preconditions")
    }

    pub fn constant(&mut self, type_label: &str, name: &str) -> NodeId {
        self.create_node(NodeKind::Constant, type_label, Some(name), None)
            .expect("constant nodes have no preconditions")
    }

    pub fn set(&mut self, type_label: &str, members: Vec<NodeId>) -> Result<NodeId, NetworkError> {
        self.create_node(NodeKind::ComplexSet, type_label, None, Some(members))
    }

    pub fn list(&mut self, type_label: &str, members: Vec<NodeId>) -> Result<NodeId, NetworkError> {
        self.create_node(NodeKind::ComplexList, type_label, None, Some(members))
    }

    /// Insert a node under an explicit id (used by readers). Members may
    /// refer to nodes inserted later; call [`TypedNetwork::check_integrity`]
    /// once loading is complete.
    pub fn insert_node(&mut self, node: Node) -> Result<(), NetworkError> {
        if self.nodes.contains_key(&node.id) {
            return Err(NetworkError::DuplicateNode(node.id));
        }
        if node.kind == NodeKind::Constant && node.name.is_none()
            || node.kind != NodeKind::Constant && node.name.is_some()
            || node.kind.is_complex() != node.members.is_some()
        {
            return Err(NetworkError::MalformedNode(format!(
                "node {} has fields inconsistent with kind {}",
                node.id, node.kind
            )));
        }
        if let Some(n) = node.id.generated_index() {
            self.next_id = self.next_id.max(n);
        }
        self.nodes.insert(node.id.clone(), node);
        Ok(())
    }

    /// Verify member and arc endpoints all resolve and sets hold no duplicates.
    pub fn check_integrity(&self) -> Result<(), NetworkError> {
        for node in self.nodes.values() {
            if let Some(ms) = &node.members {
                self.check_shape(node.kind, &node.name, &Some(ms.clone()))?;
            }
        }
        for arc in self.arcs() {
            for end in [&arc.from, &arc.to] {
                if !self.nodes.contains_key(end) {
                    return Err(NetworkError::UnknownNode(end.clone()));
                }
            }
        }
        Ok(())
    }

    /// Set `from.attr = to`, replacing any previous value.
    pub fn set_attribute(&mut self, from: &NodeId, attr: &str, to: &NodeId) -> Result<(), NetworkError> {
        for id in [from, to] {
            if !self.nodes.contains_key(id) {
                return Err(NetworkError::UnknownNode(id.clone()));
            }
        }
        self.arcs.entry(from.clone()).or_default().insert(attr.to_string(), to.clone());
        Ok(())
    }

    /// Arc insertion without endpoint checks, for readers that validate afterwards.
    pub(crate) fn set_attribute_unchecked(&mut self, from: &NodeId, attr: &str, to: &NodeId) {
        self.arcs.entry(from.clone()).or_default().insert(attr.to_string(), to.clone());
    }

    /// Remove `from.attr`, returning the old value.
    pub fn remove_attribute(&mut self, from: &NodeId, attr: &str) -> Option<NodeId> {
        self.arcs.get_mut(from).and_then(|m| m.shift_remove(attr))
    }

    pub fn attribute(&self, from: &NodeId, attr: &str) -> Option<&NodeId> {
        self.arcs.get(from).and_then(|m| m.get(attr))
    }

    /// Attributes of one node in insertion order.
    pub fn attributes(&self, from: &NodeId) -> impl Iterator<Item = (&str, &NodeId)> {
        self.arcs.get(from).into_iter().flat_map(|m| m.iter().map(|(a, t)| (a.as_str(), t)))
    }

    pub fn node(&self, id: &NodeId) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn contains(&self, id: &NodeId) -> bool {
        self.nodes.contains_key(id)
    }

    /// Nodes in insertion order.
    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values()
    }

    pub fn arcs(&self) -> impl Iterator<Item = AttributeArc> + '_ {
        self.arcs.iter().flat_map(|(from, m)| {
            m.iter().map(move |(attr, to)| AttributeArc { from: from.clone(), attr: attr.clone(), to: to.clone() })
        })
    }

    pub fn members(&self, id: &NodeId) -> &[NodeId] {
        self.nodes.get(id).and_then(|n| n.members.as_deref()).unwrap_or(&[])
    }

    pub fn add_member(&mut self, complex: &NodeId, member: &NodeId) -> Result<(), NetworkError> {
        if !self.nodes.contains_key(member) {
            return Err(NetworkError::DanglingMember { member: member.clone() });
        }
        let node = self.nodes.get_mut(complex).ok_or_else(|| NetworkError::UnknownNode(complex.clone()))?;
        let kind = node.kind;
        let ms = node.members.as_mut().ok_or_else(|| NetworkError::NotComplex(complex.clone()))?;
        if kind == NodeKind::ComplexSet && ms.contains(member) {
            return Err(NetworkError::DuplicateMember { member: member.clone() });
        }
        ms.push(member.clone());
        Ok(())
    }

    /// Remove every occurrence of `member` from a complex node. Returns whether
    /// anything was removed.
    pub fn remove_member(&mut self, complex: &NodeId, member: &NodeId) -> Result<bool, NetworkError> {
        let node = self.nodes.get_mut(complex).ok_or_else(|| NetworkError::UnknownNode(complex.clone()))?;
        let ms = node.members.as_mut().ok_or_else(|| NetworkError::NotComplex(complex.clone()))?;
        let before = ms.len();
        ms.retain(|m| m != member);
        Ok(ms.len() != before)
    }

    /// Constant name, if the node is a constant.
    pub fn name_of(&self, id: &NodeId) -> Option<&str> {
        self.nodes.get(id).and_then(|n| n.name.as_deref())
    }

    pub fn type_of(&self, id: &NodeId) -> Option<&str> {
        self.nodes.get(id).map(|n| n.type_label.as_str())
    }

    /// All nodes matching `pattern`, in network order.
    pub fn query(&self, pattern: &Pattern) -> Vec<NodeId> {
        self.nodes
            .values()
            .filter(|n| pattern.type_label.as_ref().is_none_or(|t| &n.type_label == t))
            .filter(|n| pattern.constraints.iter().all(|(attr, value)| self.attribute(&n.id, attr) == Some(value)))
            .map(|n| n.id.clone())
            .collect()
    }
}

/// A conjunctive search pattern over node type and attribute values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Pattern {
    pub type_label: Option<String>,
    pub constraints: Vec<(String, NodeId)>,
}

impl Pattern {
    pub fn of_type(type_label: &str) -> Self {
        Pattern { type_label: Some(type_label.to_string()), constraints: Vec::new() }
    }

    pub fn with(mut self, attr: &str, value: &NodeId) -> Self {
        self.constraints.push((attr.to_string(), value.clone()));
        self
    }
}
