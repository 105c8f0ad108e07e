//! Scene Descriptions over a typed network.
//!
//! A scene node has three attributes: the participant set, the common-ground
//! DRS and the history. The history holds a set of acts and a separate set of
//! temporal statements over act ids. DRSs are reified: the DRS, its referent
//! set, its condition set and every condition are nodes of their own, so any
//! constituent can be pointed at (for example as the cause of an emotion).

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::affect::EmotionSpec;
use crate::network::{NetworkError, NodeId, NodeKind, TypedNetwork};
use crate::temporal::{Relation, TemporalError, TemporalStatement, TemporalStore};

/// Type and attribute labels the scene layer reads and writes.
pub mod labels {
    pub const SCENE: &str = "scene";
    pub const PERSON: &str = "person";
    pub const PERSON_SET: &str = "personSet";
    pub const HISTORY: &str = "history";
    pub const ACT_SET: &str = "actSet";
    pub const STATEMENT_SET: &str = "temporalStatementSet";
    pub const STATEMENT: &str = "temporalStatement";
    pub const RELATION: &str = "temporalRelation";
    pub const DIALOGUE_ACT: &str = "dialogueAct";
    pub const NON_COMMUNICATIVE_ACT: &str = "nonCommunicativeAct";
    pub const DIALOGUE_ACT_TYPE: &str = "dialogueActType";
    pub const ACT_TYPE: &str = "actType";
    pub const PARAMETER: &str = "parameter";
    pub const PARAMETER_SET: &str = "parameterSet";
    pub const LABEL: &str = "label";
    pub const DRS: &str = "drs";
    pub const TERM_SET: &str = "termSet";
    pub const CONDITION_SET: &str = "conditionSet";
    pub const CONDITION: &str = "condition";
    pub const PREDICATE: &str = "predicate";
    pub const EMOTION: &str = "emotion";
    pub const EMOTION_CATEGORY: &str = "emotionCategory";
    pub const INTENSITY: &str = "intensity";

    pub const PARTICIPANTS: &str = "participants";
    pub const COMMON_GROUND: &str = "commonGround";
    pub const HISTORY_ATTR: &str = "history";
    pub const ACTS: &str = "acts";
    pub const STATEMENTS: &str = "temporalStatements";
    pub const RELATION_ATTR: &str = "relation";
    pub const FIRST: &str = "first";
    pub const SECOND: &str = "second";
    pub const DA_TYPE: &str = "dialogueActType";
    pub const SPEAKER: &str = "speaker";
    pub const ADDRESSEES: &str = "addressees";
    pub const SEM_CONTENT: &str = "semContent";
    pub const RESPONSE_TO: &str = "responseTo";
    pub const EMOTION_ATTR: &str = "emotion";
    pub const ACT_TYPE_ATTR: &str = "actType";
    pub const AGENT: &str = "agent";
    pub const PARAMETERS: &str = "parameters";
    pub const KEY: &str = "key";
    pub const VALUE: &str = "value";
    pub const REFERENTS: &str = "referents";
    pub const CONDITIONS: &str = "conditions";
    pub const PREDICATE_ATTR: &str = "predicate";
    pub const ARG_ONE: &str = "argOne";
    pub const ARG_TWO: &str = "argTwo";
    pub const CATEGORY: &str = "category";
    pub const INTENSITY_ATTR: &str = "intensity";
    pub const CAUSE: &str = "cause";
}

use labels as l;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SceneError {
    #[error("network has no scene node")]
    NoScene,
    #[error("network has more than one scene node")]
    MultipleScenes,
    #[error("{node} lacks attribute {attr}")]
    Missing { node: NodeId, attr: String },
    #[error("{node}: {message}")]
    Malformed { node: NodeId, message: String },
    #[error("condition argument {0} does not resolve")]
    DanglingArgument(String),
    #[error("condition {predicate} has {arity} arguments; 1 or 2 supported")]
    Arity { predicate: String, arity: usize },
    #[error("handle {0} does not resolve to a DRS constituent")]
    NotFound(NodeId),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Temporal(#[from] TemporalError),
}

/// Argument of a condition passed to [`reify_drs`].
#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    /// A node already in the network.
    Node(NodeId),
    /// A referent declared in the same call, by key.
    Local(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionSpec {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl ConditionSpec {
    pub fn new(predicate: &str, args: Vec<Term>) -> Self {
        ConditionSpec { predicate: predicate.to_string(), args }
    }
}

/// Node ids created by [`reify_drs`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReifiedDrs {
    pub drs: NodeId,
    pub referent_set: NodeId,
    pub condition_set: NodeId,
    pub referents: Vec<(String, NodeId)>,
    pub conditions: Vec<NodeId>,
}

impl ReifiedDrs {
    pub fn referent(&self, key: &str) -> Option<&NodeId> {
        self.referents.iter().find(|(k, _)| k == key).map(|(_, id)| id)
    }
}

/// Reify a DRS: referents `(key, sort)` become variables of type `sort`;
/// each condition becomes a node with `predicate`, `argOne` and optional
/// `argTwo` arcs. Nothing is created unless every argument resolves.
pub fn reify_drs(
    net: &mut TypedNetwork,
    referents: &[(&str, &str)],
    conditions: &[ConditionSpec],
) -> Result<ReifiedDrs, SceneError> {
    for (i, (key, _)) in referents.iter().enumerate() {
        if referents[..i].iter().any(|(k, _)| k == key) {
            return Err(SceneError::Malformed { node: NodeId::new(*key), message: "referent declared twice".into() });
        }
    }
    for c in conditions {
        if c.predicate.is_empty() {
            return Err(SceneError::Malformed { node: NodeId::new("?"), message: "empty predicate".into() });
        }
        if !(1..=2).contains(&c.args.len()) {
            return Err(SceneError::Arity { predicate: c.predicate.clone(), arity: c.args.len() });
        }
        for arg in &c.args {
            match arg {
                Term::Node(id) if !net.contains(id) => return Err(SceneError::DanglingArgument(id.to_string())),
                Term::Local(key) if !referents.iter().any(|(k, _)| k == key) => {
                    return Err(SceneError::DanglingArgument(key.clone()))
                }
                _ => {}
            }
        }
    }

    let referent_ids: Vec<(String, NodeId)> =
        referents.iter().map(|(key, sort)| (key.to_string(), net.variable(sort))).collect();
    let referent_set = net.set(l::TERM_SET, referent_ids.iter().map(|(_, id)| id.clone()).collect())?;
    let mut condition_ids = Vec::with_capacity(conditions.len());
    for c in conditions {
        let resolve = |t: &Term| match t {
            Term::Node(id) => id.clone(),
            Term::Local(key) => {
                referent_ids.iter().find(|(k, _)| k == key).map(|(_, id)| id.clone()).expect("checked above")
            }
        };
        let cond = net.variable(l::CONDITION);
        let pred = net.constant(l::PREDICATE, &c.predicate);
        net.set_attribute(&cond, l::PREDICATE_ATTR, &pred)?;
        net.set_attribute(&cond, l::ARG_ONE, &resolve(&c.args[0]))?;
        if let Some(two) = c.args.get(1) {
            net.set_attribute(&cond, l::ARG_TWO, &resolve(two))?;
        }
        condition_ids.push(cond);
    }
    let condition_set = net.set(l::CONDITION_SET, condition_ids.clone())?;
    let drs = net.variable(l::DRS);
    net.set_attribute(&drs, l::REFERENTS, &referent_set)?;
    net.set_attribute(&drs, l::CONDITIONS, &condition_set)?;
    Ok(ReifiedDrs { drs, referent_set, condition_set, referents: referent_ids, conditions: condition_ids })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub id: NodeId,
    pub predicate: String,
    pub arg_one: NodeId,
    pub arg_two: Option<NodeId>,
}

impl Condition {
    pub fn args(&self) -> impl Iterator<Item = &NodeId> {
        std::iter::once(&self.arg_one).chain(self.arg_two.as_ref())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Drs {
    pub id: NodeId,
    pub referents: Vec<NodeId>,
    pub conditions: Vec<Condition>,
}

impl Drs {
    /// Referents plus every condition argument.
    pub fn mentions(&self) -> BTreeSet<NodeId> {
        self.referents.iter().cloned().chain(self.conditions.iter().flat_map(|c| c.args().cloned())).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DialogueAct {
    pub id: NodeId,
    pub act_type: String,
    pub speaker: NodeId,
    pub addressees: Vec<NodeId>,
    pub sem_content: NodeId,
    pub response_to: Option<NodeId>,
    pub emotion: Option<EmotionSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonCommunicativeAct {
    pub id: NodeId,
    pub act_type: String,
    pub agent: NodeId,
    pub parameters: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Act {
    Dialogue(DialogueAct),
    NonCommunicative(NonCommunicativeAct),
}

impl Act {
    pub fn id(&self) -> &NodeId {
        match self {
            Act::Dialogue(a) => &a.id,
            Act::NonCommunicative(a) => &a.id,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct History {
    pub id: NodeId,
    pub acts: Vec<NodeId>,
    /// `(statement node, statement)` pairs.
    pub statements: Vec<(NodeId, TemporalStatement)>,
}

/// What a handle into the semantic representation points at.
#[derive(Debug, Clone, PartialEq)]
pub enum Constituent {
    Drs {
        id: NodeId,
        referents: Vec<NodeId>,
        conditions: Vec<NodeId>,
    },
    Referent {
        id: NodeId,
        sort: String,
        /// The DRS whose referent set introduces it, if any.
        declared_in: Option<NodeId>,
    },
    Constant {
        id: NodeId,
        type_label: String,
        name: String,
    },
    Condition(Condition),
}

impl Constituent {
    pub fn kind(&self) -> &'static str {
        match self {
            Constituent::Drs { .. } => "drs",
            Constituent::Referent { .. } => "referent",
            Constituent::Constant { .. } => "constant",
            Constituent::Condition(_) => "condition",
        }
    }
}

/// A scene network with its root located.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    net: TypedNetwork,
    root: NodeId,
}

impl Scene {
    pub fn from_network(net: TypedNetwork) -> Result<Scene, SceneError> {
        let roots: Vec<NodeId> =
            net.nodes().filter(|n| n.type_label == l::SCENE).map(|n| n.id.clone()).take(2).collect();
        match roots.as_slice() {
            [] => Err(SceneError::NoScene),
            [root] => Ok(Scene { root: root.clone(), net }),
            _ => Err(SceneError::MultipleScenes),
        }
    }

    pub fn root(&self) -> &NodeId {
        &self.root
    }

    pub fn network(&self) -> &TypedNetwork {
        &self.net
    }

    pub fn into_network(self) -> TypedNetwork {
        self.net
    }

    fn attr(&self, node: &NodeId, attr: &str) -> Result<&NodeId, SceneError> {
        self.net.attribute(node, attr).ok_or_else(|| SceneError::Missing { node: node.clone(), attr: attr.to_string() })
    }

    fn name_attr(&self, node: &NodeId, attr: &str) -> Result<String, SceneError> {
        let target = self.attr(node, attr)?;
        self.net.name_of(target).map(str::to_string).ok_or_else(|| SceneError::Malformed {
            node: node.clone(),
            message: format!("{attr} must point at a constant"),
        })
    }

    pub fn participants(&self) -> Result<Vec<NodeId>, SceneError> {
        Ok(self.net.members(self.attr(&self.root, l::PARTICIPANTS)?).to_vec())
    }

    pub fn common_ground(&self) -> Result<NodeId, SceneError> {
        self.attr(&self.root, l::COMMON_GROUND).cloned()
    }

    pub fn history(&self) -> Result<History, SceneError> {
        let id = self.attr(&self.root, l::HISTORY_ATTR)?.clone();
        let acts = self.net.members(self.attr(&id, l::ACTS)?).to_vec();
        let mut statements = Vec::new();
        for st in self.net.members(self.attr(&id, l::STATEMENTS)?) {
            let rel_name = self.name_attr(st, l::RELATION_ATTR)?;
            let relation = Relation::parse(&rel_name).ok_or_else(|| SceneError::Malformed {
                node: st.clone(),
                message: format!("unknown temporal relation {rel_name}"),
            })?;
            statements.push((
                st.clone(),
                TemporalStatement {
                    relation,
                    a: self.attr(st, l::FIRST)?.clone(),
                    b: self.attr(st, l::SECOND)?.clone(),
                },
            ));
        }
        Ok(History { id, acts, statements })
    }

    /// The temporal store over the history's acts.
    pub fn temporal_store(&self) -> Result<TemporalStore, SceneError> {
        let history = self.history()?;
        let mut store = TemporalStore::new(history.acts.iter().cloned());
        for (_, st) in &history.statements {
            store.add(st.relation, &st.a, &st.b)?;
        }
        Ok(store)
    }

    pub fn act(&self, id: &NodeId) -> Result<Act, SceneError> {
        if self.net.attribute(id, l::AGENT).is_some() || self.net.type_of(id) == Some(l::NON_COMMUNICATIVE_ACT) {
            let mut parameters = Vec::new();
            if let Some(set) = self.net.attribute(id, l::PARAMETERS) {
                for p in self.net.members(set) {
                    parameters.push((self.name_attr(p, l::KEY)?, self.name_attr(p, l::VALUE)?));
                }
            }
            return Ok(Act::NonCommunicative(NonCommunicativeAct {
                id: id.clone(),
                act_type: self.name_attr(id, l::ACT_TYPE_ATTR)?,
                agent: self.attr(id, l::AGENT)?.clone(),
                parameters,
            }));
        }
        let emotion = match self.net.attribute(id, l::EMOTION_ATTR) {
            None => None,
            Some(e) => Some(self.emotion(e)?),
        };
        Ok(Act::Dialogue(DialogueAct {
            id: id.clone(),
            act_type: self.name_attr(id, l::DA_TYPE)?,
            speaker: self.attr(id, l::SPEAKER)?.clone(),
            addressees: self.net.members(self.attr(id, l::ADDRESSEES)?).to_vec(),
            sem_content: self.attr(id, l::SEM_CONTENT)?.clone(),
            response_to: self.net.attribute(id, l::RESPONSE_TO).cloned(),
            emotion,
        }))
    }

    pub fn dialogue_act(&self, id: &NodeId) -> Result<DialogueAct, SceneError> {
        match self.act(id)? {
            Act::Dialogue(a) => Ok(a),
            Act::NonCommunicative(_) => {
                Err(SceneError::Malformed { node: id.clone(), message: "not a dialogue act".into() })
            }
        }
    }

    fn emotion(&self, id: &NodeId) -> Result<EmotionSpec, SceneError> {
        let intensity_name = self.name_attr(id, l::INTENSITY_ATTR)?;
        let intensity = intensity_name.parse::<f64>().map_err(|_| SceneError::Malformed {
            node: id.clone(),
            message: format!("intensity {intensity_name:?} is not a number"),
        })?;
        Ok(EmotionSpec {
            category: self.name_attr(id, l::CATEGORY)?,
            intensity,
            cause: self.net.attribute(id, l::CAUSE).cloned(),
        })
    }

    pub fn drs(&self, id: &NodeId) -> Result<Drs, SceneError> {
        let referents = self.net.members(self.attr(id, l::REFERENTS)?).to_vec();
        let mut conditions = Vec::new();
        for c in self.net.members(self.attr(id, l::CONDITIONS)?) {
            conditions.push(self.condition(c)?);
        }
        Ok(Drs { id: id.clone(), referents, conditions })
    }

    fn condition(&self, id: &NodeId) -> Result<Condition, SceneError> {
        Ok(Condition {
            id: id.clone(),
            predicate: self.name_attr(id, l::PREDICATE_ATTR)?,
            arg_one: self.attr(id, l::ARG_ONE)?.clone(),
            arg_two: self.net.attribute(id, l::ARG_TWO).cloned(),
        })
    }

    /// Every DRS in the scene: the common ground first, then each dialogue
    /// act's content in history order. DRSs that fail to load are skipped.
    pub fn drss(&self) -> Vec<Drs> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let mut ids = Vec::new();
        if let Ok(cg) = self.common_ground() {
            ids.push(cg);
        }
        if let Ok(h) = self.history() {
            for a in &h.acts {
                if let Some(c) = self.net.attribute(a, l::SEM_CONTENT) {
                    ids.push(c.clone());
                }
            }
        }
        for id in ids {
            if seen.insert(id.clone()) {
                if let Ok(d) = self.drs(&id) {
                    out.push(d);
                }
            }
        }
        out
    }

    /// Resolve a handle into the semantic representation.
    pub fn resolve_handle(&self, id: &NodeId) -> Result<Constituent, SceneError> {
        let drss = self.drss();
        if let Some(d) = drss.iter().find(|d| &d.id == id) {
            return Ok(Constituent::Drs {
                id: d.id.clone(),
                referents: d.referents.clone(),
                conditions: d.conditions.iter().map(|c| c.id.clone()).collect(),
            });
        }
        for d in &drss {
            if let Some(c) = d.conditions.iter().find(|c| &c.id == id) {
                return Ok(Constituent::Condition(c.clone()));
            }
        }
        let declared_in = drss.iter().find(|d| d.referents.contains(id)).map(|d| d.id.clone());
        let used = drss.iter().any(|d| d.conditions.iter().any(|c| c.args().any(|a| a == id)));
        if declared_in.is_none() && !used {
            return Err(SceneError::NotFound(id.clone()));
        }
        let node = self.net.node(id).ok_or_else(|| SceneError::NotFound(id.clone()))?;
        Ok(match node.kind {
            NodeKind::Constant => Constituent::Constant {
                id: id.clone(),
                type_label: node.type_label.clone(),
                name: node.name.clone().unwrap_or_default(),
            },
            _ => Constituent::Referent { id: id.clone(), sort: node.type_label.clone(), declared_in },
        })
    }

    /// Whether `entity` is part of the common ground: a referent of the
    /// common-ground DRS or a constant argument of one of its conditions.
    pub fn is_grounded(&self, entity: &NodeId) -> bool {
        let Ok(cg) = self.common_ground().and_then(|c| self.drs(&c)) else {
            return false;
        };
        cg.referents.contains(entity)
            || cg.conditions.iter().any(|c| {
                c.args().any(|a| a == entity && self.net.node(a).is_some_and(|n| n.kind == NodeKind::Constant))
            })
    }
}

/// Structural violations beyond the T-box.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum SceneViolation {
    NotParticipant { act: NodeId, role: &'static str, person: NodeId },
    SelfAddressed { act: NodeId },
    ResponseOutsideHistory { act: NodeId, target: NodeId },
    TemporalOrderViolation { act: NodeId, target: NodeId },
    DanglingCause { act: NodeId, cause: NodeId },
    UngroundedArgument { drs: NodeId, condition: NodeId, arg: NodeId },
    StatementOutsideHistory { statement: NodeId, act: NodeId },
}

impl SceneViolation {
    pub fn kind(&self) -> &'static str {
        match self {
            SceneViolation::NotParticipant { .. } => "NotParticipant",
            SceneViolation::SelfAddressed { .. } => "SelfAddressed",
            SceneViolation::ResponseOutsideHistory { .. } => "ResponseOutsideHistory",
            SceneViolation::TemporalOrderViolation { .. } => "TemporalOrderViolation",
            SceneViolation::DanglingCause { .. } => "DanglingCause",
            SceneViolation::UngroundedArgument { .. } => "UngroundedArgument",
            SceneViolation::StatementOutsideHistory { .. } => "StatementOutsideHistory",
        }
    }
}

impl fmt::Display for SceneViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SceneViolation::NotParticipant { act, role, person } => {
                write!(f, "NotParticipant: {role} {person} of act {act} is not a scene participant")
            }
            SceneViolation::SelfAddressed { act } => {
                write!(f, "SelfAddressed: speaker of act {act} is among its addressees")
            }
            SceneViolation::ResponseOutsideHistory { act, target } => {
                write!(f, "ResponseOutsideHistory: act {act} responds to {target}, which is not in the history")
            }
            SceneViolation::TemporalOrderViolation { act, target } => {
                write!(f, "TemporalOrderViolation: act {act} responds to {target}, which is not entailed to precede it")
            }
            SceneViolation::DanglingCause { act, cause } => {
                write!(f, "DanglingCause: emotion cause {cause} of act {act} does not resolve")
            }
            SceneViolation::UngroundedArgument { drs, condition, arg } => {
                write!(f, "UngroundedArgument: argument {arg} of condition {condition} in DRS {drs} is not grounded")
            }
            SceneViolation::StatementOutsideHistory { statement, act } => {
                write!(f, "StatementOutsideHistory: temporal statement {statement} mentions {act}, which is not in the history")
            }
        }
    }
}

/// Check the structural rules a schema cannot express. The scene must have
/// passed T-box validation; violations come back sorted.
pub fn check_wellformed(scene: &Scene, store: &TemporalStore) -> Result<Vec<SceneViolation>, SceneError> {
    let mut out = Vec::new();
    let participants = scene.participants()?;
    let history = scene.history()?;
    let net = scene.network();
    let consistent = store.is_consistent();

    for (st, statement) in &history.statements {
        for act in [&statement.a, &statement.b] {
            if !history.acts.contains(act) {
                out.push(SceneViolation::StatementOutsideHistory { statement: st.clone(), act: act.clone() });
            }
        }
    }

    let cg = scene.drs(&scene.common_ground()?)?;
    check_grounding(scene, &cg, &cg, &mut out);

    for id in &history.acts {
        match scene.act(id)? {
            Act::NonCommunicative(nca) => {
                if !participants.contains(&nca.agent) {
                    out.push(SceneViolation::NotParticipant {
                        act: id.clone(),
                        role: "agent",
                        person: nca.agent.clone(),
                    });
                }
            }
            Act::Dialogue(da) => {
                if !participants.contains(&da.speaker) {
                    out.push(SceneViolation::NotParticipant {
                        act: id.clone(),
                        role: "speaker",
                        person: da.speaker.clone(),
                    });
                }
                for a in &da.addressees {
                    if !participants.contains(a) {
                        out.push(SceneViolation::NotParticipant {
                            act: id.clone(),
                            role: "addressee",
                            person: a.clone(),
                        });
                    }
                }
                if da.addressees.contains(&da.speaker) {
                    out.push(SceneViolation::SelfAddressed { act: id.clone() });
                }
                if let Some(target) = &da.response_to {
                    if !history.acts.contains(target) || target == id {
                        out.push(SceneViolation::ResponseOutsideHistory { act: id.clone(), target: target.clone() });
                    } else if consistent && !store.entailed(Relation::Before, target, id)? {
                        out.push(SceneViolation::TemporalOrderViolation { act: id.clone(), target: target.clone() });
                    }
                }
                if let Some(cause) = da.emotion.as_ref().and_then(|e| e.cause.as_ref()) {
                    if scene.resolve_handle(cause).is_err() {
                        out.push(SceneViolation::DanglingCause { act: id.clone(), cause: cause.clone() });
                    }
                }
                if net.contains(&da.sem_content) && da.sem_content != cg.id {
                    let content = scene.drs(&da.sem_content)?;
                    check_grounding(scene, &content, &cg, &mut out);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn check_grounding(scene: &Scene, drs: &Drs, cg: &Drs, out: &mut Vec<SceneViolation>) {
    let net = scene.network();
    for c in &drs.conditions {
        for arg in c.args() {
            let is_constant = net.node(arg).is_some_and(|n| n.kind == NodeKind::Constant);
            let grounded =
                is_constant || drs.referents.contains(arg) || cg.referents.contains(arg) || scene.is_grounded(arg);
            if !grounded {
                out.push(SceneViolation::UngroundedArgument {
                    drs: drs.id.clone(),
                    condition: c.id.clone(),
                    arg: arg.clone(),
                });
            }
        }
    }
}

/// Content and metadata of a dialogue act to be added by [`SceneBuilder`].
#[derive(Debug, Clone)]
pub struct DialogueActSpec<'a> {
    pub act_type: &'a str,
    pub speaker: NodeId,
    pub addressees: Vec<NodeId>,
    pub referents: Vec<(&'a str, &'a str)>,
    pub conditions: Vec<ConditionSpec>,
    pub response_to: Option<NodeId>,
    pub emotion: Option<EmotionSpec>,
}

/// Incremental construction of a scene network.
#[derive(Debug, Clone)]
pub struct SceneBuilder {
    net: TypedNetwork,
    root: NodeId,
    participants: NodeId,
    acts: NodeId,
    statements: NodeId,
}

impl Default for SceneBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl SceneBuilder {
    pub fn new() -> Self {
        let mut net = TypedNetwork::new();
        let root = net.variable(l::SCENE);
        let participants = net.set(l::PERSON_SET, vec![]).expect("empty set");
        let history = net.variable(l::HISTORY);
        let acts = net.set(l::ACT_SET, vec![]).expect("empty set");
        let statements = net.set(l::STATEMENT_SET, vec![]).expect("empty set");
        for (from, attr, to) in [
            (&root, l::PARTICIPANTS, &participants),
            (&root, l::HISTORY_ATTR, &history),
            (&history, l::ACTS, &acts),
            (&history, l::STATEMENTS, &statements),
        ] {
            net.set_attribute(from, attr, to).expect("fresh nodes");
        }
        SceneBuilder { net, root, participants, acts, statements }
    }

    /// Continue building on an existing scene.
    pub fn from_scene(scene: Scene) -> Result<Self, SceneError> {
        let participants = scene.attr(&scene.root, l::PARTICIPANTS)?.clone();
        let history = scene.attr(&scene.root, l::HISTORY_ATTR)?.clone();
        let acts = scene.attr(&history, l::ACTS)?.clone();
        let statements = scene.attr(&history, l::STATEMENTS)?.clone();
        Ok(SceneBuilder { net: scene.net, root: scene.root, participants, acts, statements })
    }

    pub fn network_mut(&mut self) -> &mut TypedNetwork {
        &mut self.net
    }

    pub fn person(&mut self, name: &str) -> NodeId {
        let p = self.net.constant(l::PERSON, name);
        self.net.add_member(&self.participants, &p).expect("fresh person");
        p
    }

    pub fn common_ground(
        &mut self,
        referents: &[(&str, &str)],
        conditions: &[ConditionSpec],
    ) -> Result<ReifiedDrs, SceneError> {
        let drs = reify_drs(&mut self.net, referents, conditions)?;
        self.net.set_attribute(&self.root, l::COMMON_GROUND, &drs.drs)?;
        Ok(drs)
    }

    pub fn dialogue_act(&mut self, spec: DialogueActSpec<'_>) -> Result<(NodeId, ReifiedDrs), SceneError> {
        let content = reify_drs(&mut self.net, &spec.referents, &spec.conditions)?;
        let act = self.net.variable(l::DIALOGUE_ACT);
        let da_type = self.net.constant(l::DIALOGUE_ACT_TYPE, spec.act_type);
        let addressees = self.net.set(l::PERSON_SET, spec.addressees)?;
        self.net.set_attribute(&act, l::DA_TYPE, &da_type)?;
        self.net.set_attribute(&act, l::SPEAKER, &spec.speaker)?;
        self.net.set_attribute(&act, l::ADDRESSEES, &addressees)?;
        self.net.set_attribute(&act, l::SEM_CONTENT, &content.drs)?;
        if let Some(r) = &spec.response_to {
            self.net.set_attribute(&act, l::RESPONSE_TO, r)?;
        }
        if let Some(e) = &spec.emotion {
            let emo = self.emotion(e)?;
            self.net.set_attribute(&act, l::EMOTION_ATTR, &emo)?;
        }
        self.net.add_member(&self.acts, &act)?;
        Ok((act, content))
    }

    /// Emotion node with category, intensity and optional cause.
    pub fn emotion(&mut self, e: &EmotionSpec) -> Result<NodeId, SceneError> {
        let emo = self.net.variable(l::EMOTION);
        let cat = self.net.constant(l::EMOTION_CATEGORY, &e.category);
        let int = self.net.constant(l::INTENSITY, &e.intensity.to_string());
        self.net.set_attribute(&emo, l::CATEGORY, &cat)?;
        self.net.set_attribute(&emo, l::INTENSITY_ATTR, &int)?;
        if let Some(c) = &e.cause {
            self.net.set_attribute(&emo, l::CAUSE, c)?;
        }
        Ok(emo)
    }

    pub fn non_communicative_act(
        &mut self,
        act_type: &str,
        agent: &NodeId,
        parameters: &[(&str, &str)],
    ) -> Result<NodeId, SceneError> {
        let act = self.net.variable(l::NON_COMMUNICATIVE_ACT);
        let t = self.net.constant(l::ACT_TYPE, act_type);
        self.net.set_attribute(&act, l::ACT_TYPE_ATTR, &t)?;
        self.net.set_attribute(&act, l::AGENT, agent)?;
        let mut params = Vec::new();
        for (k, v) in parameters {
            let p = self.net.variable(l::PARAMETER);
            let kn = self.net.constant(l::LABEL, k);
            let vn = self.net.constant(l::LABEL, v);
            self.net.set_attribute(&p, l::KEY, &kn)?;
            self.net.set_attribute(&p, l::VALUE, &vn)?;
            params.push(p);
        }
        let set = self.net.set(l::PARAMETER_SET, params)?;
        self.net.set_attribute(&act, l::PARAMETERS, &set)?;
        self.net.add_member(&self.acts, &act)?;
        Ok(act)
    }

    pub fn temporal(&mut self, relation: Relation, a: &NodeId, b: &NodeId) -> Result<NodeId, SceneError> {
        let st = self.net.variable(l::STATEMENT);
        let rel = self.net.constant(l::RELATION, relation.as_str());
        self.net.set_attribute(&st, l::RELATION_ATTR, &rel)?;
        self.net.set_attribute(&st, l::FIRST, a)?;
        self.net.set_attribute(&st, l::SECOND, b)?;
        self.net.add_member(&self.statements, &st)?;
        Ok(st)
    }

    pub fn build(self) -> Scene {
        Scene { net: self.net, root: self.root }
    }
}
