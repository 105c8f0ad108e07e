//! Underspecified temporal ordering of acts.
//!
//! Statements are `before(a, b)` or `simultaneous(a, b)` over a declared
//! universe of act ids. Simultaneity is merged into equivalence classes;
//! `before` then induces a strict order between classes that must be acyclic.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::network::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Before,
    Simultaneous,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Before => "before",
            Relation::Simultaneous => "simultaneous",
        }
    }

    pub fn parse(s: &str) -> Option<Relation> {
        match s {
            "before" => Some(Relation::Before),
            "simultaneous" => Some(Relation::Simultaneous),
            _ => None,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TemporalStatement {
    pub relation: Relation,
    pub a: NodeId,
    pub b: NodeId,
}

impl fmt::Display for TemporalStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.relation, self.a, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemporalError {
    #[error("act {0} is not declared in the temporal store")]
    UnknownAct(NodeId),
    #[error("statement relates act {0} to itself")]
    SelfRelation(NodeId),
    #[error("temporal store is inconsistent: {0}")]
    InconsistentStore(Conflict),
}

/// Why a store is inconsistent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conflict {
    /// `before(a, b)` where `a` and `b` are simultaneous.
    InternalBefore { a: NodeId, b: NodeId },
    /// A cycle of classes; lists the acts of each class along the cycle.
    Cycle(Vec<NodeId>),
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conflict::InternalBefore { a, b } => {
                write!(f, "before({a}, {b}) contradicts simultaneous({a}, {b})")
            }
            Conflict::Cycle(acts) => {
                let ids: Vec<&str> = acts.iter().map(NodeId::as_str).collect();
                write!(f, "cycle {} -> {}", ids.join(" -> "), ids[0])
            }
        }
    }
}

/// Act ordering statements over a fixed act universe.
#[derive(Debug, Clone, Default)]
pub struct TemporalStore {
    acts: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    statements: Vec<TemporalStatement>,
}

// Classes of simultaneous acts and the reachability between them.
struct Closure {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    succ: Vec<Vec<usize>>,
    reach: Vec<Vec<bool>>,
}

impl TemporalStore {
    /// New store over `acts`; the universe is kept in natural id order.
    pub fn new(acts: impl IntoIterator<Item = NodeId>) -> Self {
        let mut acts: Vec<NodeId> = acts.into_iter().collect();
        acts.sort();
        acts.dedup();
        let index = acts.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        TemporalStore { acts, index, statements: Vec::new() }
    }

    pub fn acts(&self) -> &[NodeId] {
        &self.acts
    }

    pub fn statements(&self) -> &[TemporalStatement] {
        &self.statements
    }

    pub fn add(&mut self, relation: Relation, a: &NodeId, b: &NodeId) -> Result<(), TemporalError> {
        for id in [a, b] {
            if !self.index.contains_key(id) {
                return Err(TemporalError::UnknownAct(id.clone()));
            }
        }
        if a == b {
            return Err(TemporalError::SelfRelation(a.clone()));
        }
        self.statements.push(TemporalStatement { relation, a: a.clone(), b: b.clone() });
        Ok(())
    }

    pub fn with(mut self, relation: Relation, a: &str, b: &str) -> Result<Self, TemporalError> {
        self.add(relation, &NodeId::new(a), &NodeId::new(b))?;
        Ok(self)
    }

    fn closure(&self) -> Result<Closure, Conflict> {
        let n = self.acts.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        for s in &self.statements {
            if s.relation == Relation::Simultaneous {
                let (ra, rb) = (find(&mut parent, self.index[&s.a]), find(&mut parent, self.index[&s.b]));
                // keep the smaller index as root so classes are keyed by their smallest act
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        // classes numbered in order of their smallest act
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for act in 0..n {
            let root = find(&mut parent, act);
            if class_of[root] == usize::MAX {
                class_of[root] = classes.len();
                classes.push(Vec::new());
            }
            class_of[act] = class_of[root];
            classes[class_of[act]].push(act);
        }
        let k = classes.len();
        let mut succ = vec![Vec::new(); k];
        for s in &self.statements {
            if s.relation == Relation::Before {
                let (ca, cb) = (class_of[self.index[&s.a]], class_of[self.index[&s.b]]);
                if ca == cb {
                    return Err(Conflict::InternalBefore { a: s.a.clone(), b: s.b.clone() });
                }
                if !succ[ca].contains(&cb) {
                    succ[ca].push(cb);
                }
            }
        }
        for s in &mut succ {
            s.sort_unstable();
        }
        if let Some(cycle) = find_cycle(&succ) {
            let acts = cycle.into_iter().flat_map(|c| classes[c].iter().map(|&a| self.acts[a].clone())).collect();
            return Err(Conflict::Cycle(acts));
        }
        let mut reach = vec![vec![false; k]; k];
        for (start, row) in reach.iter_mut().enumerate() {
            let mut stack = succ[start].clone();
            while let Some(c) = stack.pop() {
                if !row[c] {
                    row[c] = true;
                    stack.extend(succ[c].iter().copied());
                }
            }
        }
        Ok(Closure { class_of, classes, succ, reach })
    }

    pub fn is_consistent(&self) -> bool {
        self.closure().is_ok()
    }

    /// The first conflict found, if the store is inconsistent.
    pub fn conflict(&self) -> Option<Conflict> {
        self.closure().err()
    }

    /// Whether `relation(a, b)` holds in every total order extending the store.
    pub fn entailed(&self, relation: Relation, a: &NodeId, b: &NodeId) -> Result<bool, TemporalError> {
        let closure = self.closure().map_err(TemporalError::InconsistentStore)?;
        let ia = *self.index.get(a).ok_or_else(|| TemporalError::UnknownAct(a.clone()))?;
        let ib = *self.index.get(b).ok_or_else(|| TemporalError::UnknownAct(b.clone()))?;
        let (ca, cb) = (closure.class_of[ia], closure.class_of[ib]);
        Ok(match relation {
            Relation::Simultaneous => ca == cb,
            Relation::Before => closure.reach[ca][cb],
        })
    }

    /// Simultaneity classes, each sorted, in order of their smallest act.
    pub fn classes(&self) -> Result<Vec<Vec<NodeId>>, TemporalError> {
        let closure = self.closure().map_err(TemporalError::InconsistentStore)?;
        Ok(closure.classes.iter().map(|c| c.iter().map(|&a| self.acts[a].clone()).collect()).collect())
    }

    /// Up to `limit` topological orders of the simultaneity classes, in
    /// lexicographic order of the classes' smallest act ids.
    pub fn linearizations(&self, limit: usize) -> Result<Vec<Vec<Vec<NodeId>>>, TemporalError> {
        let closure = self.closure().map_err(TemporalError::InconsistentStore)?;
        let k = closure.classes.len();
        let mut indegree = vec![0usize; k];
        for s in &closure.succ {
            for &c in s {
                indegree[c] += 1;
            }
        }
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(k);
        let mut placed = vec![false; k];
        enumerate(&closure.succ, &mut indegree, &mut placed, &mut prefix, limit, &mut out);
        Ok(out
            .into_iter()
            .map(|order| {
                order.into_iter().map(|c| closure.classes[c].iter().map(|&a| self.acts[a].clone()).collect()).collect()
            })
            .collect())
    }
}

fn enumerate(
    succ: &[Vec<usize>],
    indegree: &mut [usize],
    placed: &mut [bool],
    prefix: &mut Vec<usize>,
    limit: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if out.len() >= limit {
        return;
    }
    if prefix.len() == succ.len() {
        out.push(prefix.clone());
        return;
    }
    for c in 0..succ.len() {
        if placed[c] || indegree[c] != 0 {
            continue;
        }
        placed[c] = true;
        prefix.push(c);
        for &d in &succ[c] {
            indegree[d] -= 1;
        }
        enumerate(succ, indegree, placed, prefix, limit, out);
        for &d in &succ[c] {
            indegree[d] += 1;
        }
        prefix.pop();
        placed[c] = false;
        if out.len() >= limit {
            return;
        }
    }
}

// Iterative DFS with colours; returns the classes along one cycle.
fn find_cycle(succ: &[Vec<usize>]) -> Option<Vec<usize>> {
    let k = succ.len();
    let mut colour = vec![0u8; k]; // 0 white, 1 grey, 2 black
    let mut parent = vec![usize::MAX; k];
    for root in 0..k {
        if colour[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        colour[root] = 1;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < succ[node].len() {
                let child = succ[node][*next];
                *next += 1;
                match colour[child] {
                    0 => {
                        colour[child] = 1;
                        parent[child] = node;
                        stack.push((child, 0));
                    }
                    1 => {
                        let mut cycle = vec![node];
                        let mut cur = node;
                        while cur != child {
                            cur = parent[cur];
                            cycle.push(cur);
                        }
                        cycle.reverse();
                        return Some(cycle);
                    }
                    _ => {}
                }
            } else {
                colour[node] = 2;
                stack.pop();
            }
        }
    }
    None
}
