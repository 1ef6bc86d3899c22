//! Increasing-agent Kripke structures, validation, finite-depth tree
//! unravelling, and guided model extension.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::PredName;

pub type WorldId = String;
pub type AgentId = String;

/// `(W, D, δ, R, ρ)` with the increasing-agent condition: every edge
/// `(w, d, v)` requires `d ∈ δ(w) ⊆ δ(v)`, and every `δ(w)` is non-empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    pub worlds: BTreeSet<WorldId>,
    pub agents: BTreeSet<AgentId>,
    pub delta: BTreeMap<WorldId, BTreeSet<AgentId>>,
    pub edges: BTreeSet<(WorldId, AgentId, WorldId)>,
    pub valuation: BTreeMap<WorldId, BTreeMap<PredName, BTreeSet<Vec<AgentId>>>>,
    pub root: Option<WorldId>,
}

impl KripkeModel {
    pub fn new() -> Self {
        KripkeModel {
            worlds: BTreeSet::new(),
            agents: BTreeSet::new(),
            delta: BTreeMap::new(),
            edges: BTreeSet::new(),
            valuation: BTreeMap::new(),
            root: None,
        }
    }

    pub fn add_world(&mut self, w: &str, agents: &[&str]) {
        self.worlds.insert(w.to_string());
        let set: BTreeSet<AgentId> = agents.iter().map(|a| a.to_string()).collect();
        self.agents.extend(set.iter().cloned());
        self.delta.insert(w.to_string(), set);
    }

    pub fn add_edge(&mut self, from: &str, agent: &str, to: &str) {
        self.edges
            .insert((from.to_string(), agent.to_string(), to.to_string()));
    }

    pub fn set_fact(&mut self, w: &str, pred: &str, tuple: &[&str]) {
        self.valuation
            .entry(w.to_string())
            .or_default()
            .entry(pred.to_string())
            .or_default()
            .insert(tuple.iter().map(|a| a.to_string()).collect());
    }

    pub fn live(&self, w: &str) -> &BTreeSet<AgentId> {
        static EMPTY: std::sync::OnceLock<BTreeSet<AgentId>> = std::sync::OnceLock::new();
        self.delta
            .get(w)
            .unwrap_or_else(|| EMPTY.get_or_init(BTreeSet::new))
    }

    pub fn successors<'a>(&'a self, w: &'a str, d: &'a str) -> impl Iterator<Item = &'a WorldId> {
        self.edges
            .iter()
            .filter(move |(f, a, _)| f == w && a == d)
            .map(|(_, _, t)| t)
    }

    pub fn children(&self, w: &str) -> Vec<(AgentId, WorldId)> {
        self.edges
            .iter()
            .filter(|(f, _, _)| f == w)
            .map(|(_, a, t)| (a.clone(), t.clone()))
            .collect()
    }

    /// Truth of a tuple in the valuation.
    pub fn holds(&self, w: &str, pred: &str, tuple: &[AgentId]) -> bool {
        self.valuation
            .get(w)
            .and_then(|m| m.get(pred))
            .map(|set| set.contains(tuple))
            .unwrap_or(false)
    }

    /// Propositions (arity-0 predicates) true at `w`.
    pub fn true_props(&self, w: &str) -> Vec<PredName> {
        self.valuation
            .get(w)
            .map(|m| {
                m.iter()
                    .filter(|(_, tuples)| tuples.contains(&Vec::new()))
                    .map(|(p, _)| p.clone())
                    .collect()
            })
            .unwrap_or_default()
    }
}

impl Default for KripkeModel {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("not a tree rooted at `{root}`: {msg}")]
    NotATree { root: String, msg: String },
    #[error("new agents clash with existing agent set: {0:?}")]
    AgentClash(Vec<AgentId>),
    #[error("extension image `{image}` of `{agent}` is not live at `{world}`")]
    OmegaNotLive {
        agent: AgentId,
        image: AgentId,
        world: WorldId,
    },
    #[error("model fails validation with {0} violation(s)")]
    Invalid(usize),
    #[error("model file error: {0}")]
    File(String),
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyDomain {
        world: WorldId,
    },
    UnknownAgent {
        world: WorldId,
        agent: AgentId,
    },
    UnknownWorld {
        world: WorldId,
        context: String,
    },
    DeadEdgeAgent {
        from: WorldId,
        agent: AgentId,
        to: WorldId,
    },
    NonIncreasing {
        from: WorldId,
        agent: AgentId,
        to: WorldId,
    },
    DeadValuationTuple {
        world: WorldId,
        pred: PredName,
        tuple: Vec<AgentId>,
    },
    InconsistentArity {
        pred: PredName,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyDomain { world } => write!(f, "world `{world}` has an empty domain"),
            Violation::UnknownAgent { world, agent } => {
                write!(f, "world `{world}` lists unknown agent `{agent}`")
            }
            Violation::UnknownWorld { world, context } => {
                write!(f, "unknown world `{world}` referenced by {context}")
            }
            Violation::DeadEdgeAgent { from, agent, to } => {
                write!(f, "edge ({from},{agent},{to}): agent not live at `{from}`")
            }
            Violation::NonIncreasing { from, agent, to } => {
                write!(f, "edge ({from},{agent},{to}): domain of `{from}` not contained in `{to}`")
            }
            Violation::DeadValuationTuple { world, pred, tuple } => {
                write!(f, "valuation at `{world}`: {pred}({}) uses non-live agents", tuple.join(","))
            }
            Violation::InconsistentArity { pred } => {
                write!(f, "predicate `{pred}` used with inconsistent arities")
            }
        }
    }
}

/// Check the increasing-agent invariants; violations are data, not failures.
pub fn validate(m: &KripkeModel) -> Vec<Violation> {
    let mut out = Vec::new();
    for w in &m.worlds {
        let d = m.live(w);
        if d.is_empty() {
            out.push(Violation::EmptyDomain { world: w.clone() });
        }
        for a in d {
            if !m.agents.contains(a) {
                out.push(Violation::UnknownAgent {
                    world: w.clone(),
                    agent: a.clone(),
                });
            }
        }
    }
    for w in m.delta.keys() {
        if !m.worlds.contains(w) {
            out.push(Violation::UnknownWorld {
                world: w.clone(),
                context: "delta".into(),
            });
        }
    }
    for (from, agent, to) in &m.edges {
        for (w, ctx) in [(from, "edge source"), (to, "edge target")] {
            if !m.worlds.contains(w) {
                out.push(Violation::UnknownWorld {
                    world: w.clone(),
                    context: ctx.into(),
                });
            }
        }
        if !m.worlds.contains(from) || !m.worlds.contains(to) {
            continue;
        }
        if !m.live(from).contains(agent) {
            out.push(Violation::DeadEdgeAgent {
                from: from.clone(),
                agent: agent.clone(),
                to: to.clone(),
            });
        }
        if !m.live(from).is_subset(m.live(to)) {
            out.push(Violation::NonIncreasing {
                from: from.clone(),
                agent: agent.clone(),
                to: to.clone(),
            });
        }
    }
    let mut arities: BTreeMap<&PredName, usize> = BTreeMap::new();
    for (w, preds) in &m.valuation {
        if !m.worlds.contains(w) {
            out.push(Violation::UnknownWorld {
                world: w.clone(),
                context: "valuation".into(),
            });
            continue;
        }
        for (p, tuples) in preds {
            for t in tuples {
                match arities.get(p) {
                    Some(&n) if n != t.len() => {
                        out.push(Violation::InconsistentArity { pred: p.clone() });
                    }
                    Some(_) => {}
                    None => {
                        arities.insert(p, t.len());
                    }
                }
                if !t.iter().all(|a| m.live(w).contains(a)) {
                    out.push(Violation::DeadValuationTuple {
                        world: w.clone(),
                        pred: p.clone(),
                        tuple: t.clone(),
                    });
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// JSON model files
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    worlds: Vec<String>,
    agents: Vec<String>,
    delta: BTreeMap<String, Vec<String>>,
    edges: Vec<(String, String, String)>,
    valuation: BTreeMap<String, BTreeMap<String, Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    root: Option<String>,
}

impl KripkeModel {
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| ModelError::File(e.to_string()))?;
        let mut m = KripkeModel::new();
        m.worlds = file.worlds.into_iter().collect();
        m.agents = file.agents.into_iter().collect();
        m.delta = file
            .delta
            .into_iter()
            .map(|(w, agents)| (w, agents.into_iter().collect()))
            .collect();
        m.edges = file.edges.into_iter().collect();
        m.valuation = file
            .valuation
            .into_iter()
            .map(|(w, preds)| {
                (
                    w,
                    preds
                        .into_iter()
                        .map(|(p, tuples)| (p, tuples.into_iter().collect()))
                        .collect(),
                )
            })
            .collect();
        m.root = file.root;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        let file = ModelFile {
            worlds: self.worlds.iter().cloned().collect(),
            agents: self.agents.iter().cloned().collect(),
            delta: self
                .delta
                .iter()
                .map(|(w, agents)| (w.clone(), agents.iter().cloned().collect()))
                .collect(),
            edges: self.edges.iter().cloned().collect(),
            valuation: self
                .valuation
                .iter()
                .map(|(w, preds)| {
                    (
                        w.clone(),
                        preds
                            .iter()
                            .map(|(p, tuples)| (p.clone(), tuples.iter().cloned().collect()))
                            .collect(),
                    )
                })
                .collect(),
            root: self.root.clone(),
        };
        serde_json::to_string_pretty(&file).expect("model serialization cannot fail")
    }

    /// DOT rendering: worlds as nodes labeled with their true propositions,
    /// edges labeled by agent ids.
    pub fn to_dot(&self) -> String {
        fn esc(s: &str) -> String {
            s.replace('\\', "\\\\").replace('"', "\\\"")
        }
        let mut out = String::from("digraph model {\n  rankdir=TB;\n");
        for w in &self.worlds {
            let props = self.true_props(w);
            let label = if props.is_empty() {
                w.clone()
            } else {
                format!("{w}\\n{}", props.join(","))
            };
            let shape = if self.root.as_deref() == Some(w) {
                " shape=doublecircle"
            } else {
                ""
            };
            out.push_str(&format!("  \"{}\" [label=\"{}\"{}]\n", esc(w), esc(&label), shape));
        }
        for (f, a, t) in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"]\n",
                esc(f),
                esc(t),
                esc(a)
            ));
        }
        out.push_str("}\n");
        out
    }
}

// ---------------------------------------------------------------------------
// Tree models
// ---------------------------------------------------------------------------

/// A Kripke model whose edges form a tree; carries the root, parent pointers
/// and node heights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeModel {
    model: KripkeModel,
    root: WorldId,
    parent: BTreeMap<WorldId, (WorldId, AgentId)>,
    height: BTreeMap<WorldId, usize>,
}

impl TreeModel {
    /// Verify the tree shape and compute parent/height maps.
    pub fn new(mut model: KripkeModel, root: WorldId) -> Result<Self, ModelError> {
        if !model.worlds.contains(&root) {
            return Err(ModelError::UnknownWorld(root));
        }
        let mut parent: BTreeMap<WorldId, (WorldId, AgentId)> = BTreeMap::new();
        for (f, a, t) in &model.edges {
            if t == &root {
                return Err(ModelError::NotATree {
                    root,
                    msg: format!("root has incoming edge from `{f}`"),
                });
            }
            if parent.insert(t.clone(), (f.clone(), a.clone())).is_some() {
                return Err(ModelError::NotATree {
                    root,
                    msg: format!("world `{t}` has two incoming edges"),
                });
            }
        }
        let mut height = BTreeMap::new();
        let mut queue = vec![(root.clone(), 0usize)];
        while let Some((w, h)) = queue.pop() {
            if height.insert(w.clone(), h).is_some() {
                return Err(ModelError::NotATree {
                    root,
                    msg: format!("cycle through `{w}`"),
                });
            }
            for (_, child) in model.children(&w) {
                queue.push((child, h + 1));
            }
        }
        for w in &model.worlds {
            if !height.contains_key(w) {
                return Err(ModelError::NotATree {
                    root,
                    msg: format!("world `{w}` unreachable from root"),
                });
            }
        }
        model.root = Some(root.clone());
        Ok(TreeModel {
            model,
            root,
            parent,
            height,
        })
    }

    pub fn model(&self) -> &KripkeModel {
        &self.model
    }

    pub fn into_model(self) -> KripkeModel {
        self.model
    }

    pub fn root(&self) -> &WorldId {
        &self.root
    }

    pub fn height(&self, w: &str) -> Result<usize, ModelError> {
        self.height
            .get(w)
            .copied()
            .ok_or_else(|| ModelError::UnknownWorld(w.to_string()))
    }

    /// Incoming edge `(parent, agent)`; `None` marks the root.
    pub fn incoming(&self, w: &str) -> Result<Option<(WorldId, AgentId)>, ModelError> {
        if !self.model.worlds.contains(w) {
            return Err(ModelError::UnknownWorld(w.to_string()));
        }
        Ok(self.parent.get(w).cloned())
    }

    pub fn children(&self, w: &str) -> Vec<(AgentId, WorldId)> {
        let mut cs = self.model.children(w);
        cs.sort();
        cs
    }

    pub fn depth(&self) -> usize {
        self.height.values().copied().max().unwrap_or(0)
    }

    /// Worlds of the subtree rooted at `w`, in preorder.
    pub fn subtree(&self, w: &str) -> Vec<WorldId> {
        let mut out = Vec::new();
        let mut stack = vec![w.to_string()];
        while let Some(u) = stack.pop() {
            out.push(u.clone());
            for (_, c) in self.children(&u).into_iter().rev() {
                stack.push(c);
            }
        }
        out
    }
}

/// Unravel paths of length at most `depth` from `root` into a tree. Node ids
/// are path strings `root;agent;world;agent;world;…`; δ and ρ are copied from
/// the path endpoint. Truth of formulas with modal depth ≤ `depth` is
/// preserved at the root.
pub fn tree_unravel(
    m: &KripkeModel,
    root: &str,
    depth: usize,
) -> Result<TreeModel, ModelError> {
    if !m.worlds.contains(root) {
        return Err(ModelError::UnknownWorld(root.to_string()));
    }
    let violations = validate(m);
    if !violations.is_empty() {
        return Err(ModelError::Invalid(violations.len()));
    }
    let mut out = KripkeModel::new();
    out.agents = m.agents.clone();
    let mut stack: Vec<(String, WorldId, usize)> = vec![(root.to_string(), root.to_string(), 0)];
    while let Some((id, w, h)) = stack.pop() {
        out.worlds.insert(id.clone());
        out.delta.insert(id.clone(), m.live(&w).clone());
        if let Some(preds) = m.valuation.get(&w) {
            out.valuation.insert(id.clone(), preds.clone());
        }
        if h < depth {
            let mut cs = m.children(&w);
            cs.sort();
            for (a, v) in cs {
                let child_id = format!("{id};{a};{v}");
                out.edges.insert((id.clone(), a, child_id.clone()));
                stack.push((child_id, v, h + 1));
            }
        }
    }
    TreeModel::new(out, root.to_string())
}

/// Fresh agents `C` with their guide `Ω : C → agents`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionMap {
    pub omega: BTreeMap<AgentId, AgentId>,
}

impl ExtensionMap {
    pub fn new(omega: BTreeMap<AgentId, AgentId>) -> Self {
        ExtensionMap { omega }
    }

    pub fn fresh_agents(&self) -> BTreeSet<AgentId> {
        self.omega.keys().cloned().collect()
    }
}

/// Add the fresh agents to the subtree rooted at `w`, guided by `Ω`, and
/// re-graft the extended subtree in place of the old one.
///
/// Every node under `w` gains `C` in its live set. For each `c ∈ C` and each
/// edge `(u, Ω-image, v)` in the subtree, a recursively-extended fresh copy of
/// the `v`-subtree is attached below `u` via `c`. Copied roots are named
/// `v-id^c`; their descendants are renamed along the copied parent chain.
pub fn extend(m: &TreeModel, w: &str, ext: &ExtensionMap) -> Result<TreeModel, ModelError> {
    if !m.model.worlds.contains(w) {
        return Err(ModelError::UnknownWorld(w.to_string()));
    }
    let fresh = ext.fresh_agents();
    let clash: Vec<AgentId> = fresh.intersection(&m.model.agents).cloned().collect();
    if !clash.is_empty() {
        return Err(ModelError::AgentClash(clash));
    }
    for (c, img) in &ext.omega {
        if !m.model.live(w).contains(img) {
            return Err(ModelError::OmegaNotLive {
                agent: c.clone(),
                image: img.clone(),
                world: w.to_string(),
            });
        }
    }

    let mut out = KripkeModel::new();
    out.agents = m.model.agents.union(&fresh).cloned().collect();

    // Copy everything outside the subtree of `w` untouched.
    let sub: BTreeSet<WorldId> = m.subtree(w).into_iter().collect();
    for u in &m.model.worlds {
        if sub.contains(u) {
            continue;
        }
        out.worlds.insert(u.clone());
        out.delta.insert(u.clone(), m.model.live(u).clone());
        if let Some(preds) = m.model.valuation.get(u) {
            out.valuation.insert(u.clone(), preds.clone());
        }
    }
    for (f, a, t) in &m.model.edges {
        if !sub.contains(f) {
            out.edges.insert((f.clone(), a.clone(), t.clone()));
        }
    }

    extend_rec(m, w, w, ext, &mut out)?;
    TreeModel::new(out, m.root.clone())
}

/// Recursive clause of the extension: emit the extended subtree of `src`
/// under the (possibly renamed) id `dst`.
fn extend_rec(
    m: &TreeModel,
    src: &str,
    dst: &str,
    ext: &ExtensionMap,
    out: &mut KripkeModel,
) -> Result<(), ModelError> {
    if out.worlds.contains(dst) {
        return Err(ModelError::NotATree {
            root: m.root.clone(),
            msg: format!("extension would duplicate world id `{dst}`"),
        });
    }
    out.worlds.insert(dst.to_string());
    let mut live = m.model.live(src).clone();
    live.extend(ext.fresh_agents());
    out.delta.insert(dst.to_string(), live);
    if let Some(preds) = m.model.valuation.get(src) {
        out.valuation.insert(dst.to_string(), preds.clone());
    }

    let children = m.children(src);
    // Original children, extended in place (ids preserved when dst == src path).
    for (a, v) in &children {
        let child_dst = if dst == src {
            v.clone()
        } else {
            format!("{dst};{a};{}", last_segment(v))
        };
        out.edges.insert((dst.to_string(), a.clone(), child_dst.clone()));
        extend_rec(m, v, &child_dst, ext, out)?;
    }
    // One fresh copy per new agent and per edge labeled with its Ω-image.
    for (c, img) in &ext.omega {
        for (a, v) in &children {
            if a != img {
                continue;
            }
            let copy_root = if dst == src {
                format!("{v}^{c}")
            } else {
                format!("{dst};{a};{}^{c}", last_segment(v))
            };
            out.edges.insert((dst.to_string(), c.clone(), copy_root.clone()));
            extend_rec(m, v, &copy_root, ext, out)?;
        }
    }
    Ok(())
}

fn last_segment(id: &str) -> &str {
    id.rsplit(';').next().unwrap_or(id)
}

/// A partial variable assignment σ. Relevance at a world means every image
/// is live there.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    map: BTreeMap<crate::syntax::Var, AgentId>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn bind(mut self, var: &str, agent: &str) -> Self {
        self.map.insert(var.to_string(), agent.to_string());
        self
    }

    pub fn set(&mut self, var: &str, agent: &str) {
        self.map.insert(var.to_string(), agent.to_string());
    }

    pub fn get(&self, var: &str) -> Option<&AgentId> {
        self.map.get(var)
    }

    pub fn relevant_at(&self, m: &KripkeModel, w: &str) -> bool {
        self.map.values().all(|a| m.live(w).contains(a))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&crate::syntax::Var, &AgentId)> {
        self.map.iter()
    }
}

impl<const N: usize> From<[(&str, &str); N]> for Assignment {
    fn from(pairs: [(&str, &str); N]) -> Self {
        let mut a = Assignment::new();
        for (v, d) in pairs {
            a.set(v, d);
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_world_cycle() -> KripkeModel {
        let mut m = KripkeModel::new();
        m.add_world("w", &["d"]);
        m.add_world("v", &["d"]);
        m.add_edge("w", "d", "v");
        m.add_edge("v", "d", "w");
        m.set_fact("v", "p", &[]);
        m
    }

    #[test]
    fn validate_accepts_good_model() {
        assert!(validate(&two_world_cycle()).is_empty());
    }

    #[test]
    fn validate_flags_dead_edge_agent() {
        let mut m = two_world_cycle();
        m.add_edge("w", "e", "v");
        m.agents.insert("e".into());
        m.delta.get_mut("v").unwrap().insert("e".into());
        let report = validate(&m);
        assert_eq!(report.len(), 1);
        assert!(matches!(
            &report[0],
            Violation::DeadEdgeAgent { from, agent, .. } if from == "w" && agent == "e"
        ));
    }

    #[test]
    fn validate_flags_empty_domain() {
        let mut m = KripkeModel::new();
        m.add_world("w", &[]);
        let report = validate(&m);
        assert!(report
            .iter()
            .any(|v| matches!(v, Violation::EmptyDomain { world } if world == "w")));
    }

    #[test]
    fn validate_flags_non_increasing() {
        let mut m = KripkeModel::new();
        m.add_world("w", &["d", "e"]);
        m.add_world("v", &["d"]);
        m.add_edge("w", "d", "v");
        let report = validate(&m);
        assert!(report
            .iter()
            .any(|v| matches!(v, Violation::NonIncreasing { .. })));
    }

    #[test]
    fn unravel_cycle_to_depth_two() {
        let t = tree_unravel(&two_world_cycle(), "w", 2).unwrap();
        let worlds: Vec<&str> = t.model().worlds.iter().map(|s| s.as_str()).collect();
        assert_eq!(worlds, vec!["w", "w;d;v", "w;d;v;d;w"]);
        assert_eq!(t.height("w;d;v;d;w").unwrap(), 2);
        assert_eq!(
            t.incoming("w;d;v").unwrap(),
            Some(("w".to_string(), "d".to_string()))
        );
        assert_eq!(t.incoming("w").unwrap(), None);
        assert!(t.model().holds("w;d;v", "p", &[]));
    }

    #[test]
    fn unravel_depth_zero_is_single_node() {
        let t = tree_unravel(&two_world_cycle(), "v", 0).unwrap();
        assert_eq!(t.model().worlds.len(), 1);
        assert!(t.model().holds("v", "p", &[]));
        assert_eq!(t.model().live("v").len(), 1);
    }

    #[test]
    fn unravel_already_tree_is_isomorphic_copy() {
        let mut m = KripkeModel::new();
        m.add_world("r", &["d"]);
        m.add_world("u", &["d"]);
        m.add_edge("r", "d", "u");
        let t = tree_unravel(&m, "r", 3).unwrap();
        assert_eq!(t.model().worlds.len(), 2);
        assert_eq!(t.depth(), 1);
    }

    #[test]
    fn unravel_unknown_root() {
        assert!(matches!(
            tree_unravel(&two_world_cycle(), "zz", 1),
            Err(ModelError::UnknownWorld(_))
        ));
    }

    #[test]
    fn extend_leaf_only_grows_domain() {
        let mut m = KripkeModel::new();
        m.add_world("w", &["d"]);
        let t = TreeModel::new(m, "w".into()).unwrap();
        let ext = ExtensionMap::new([("c".to_string(), "d".to_string())].into());
        let e = extend(&t, "w", &ext).unwrap();
        assert_eq!(e.model().worlds.len(), 1);
        assert_eq!(
            e.model().live("w").iter().cloned().collect::<Vec<_>>(),
            vec!["c", "d"]
        );
    }

    #[test]
    fn extend_with_empty_c_is_identity() {
        let t = tree_unravel(&two_world_cycle(), "w", 2).unwrap();
        let e = extend(&t, "w", &ExtensionMap::new(BTreeMap::new())).unwrap();
        assert_eq!(e.model(), t.model());
    }

    #[test]
    fn extend_attaches_guided_copies() {
        // r --d--> u(p); extend at r with c mimicking d.
        let mut m = KripkeModel::new();
        m.add_world("r", &["d"]);
        m.add_world("u", &["d"]);
        m.add_edge("r", "d", "u");
        m.set_fact("u", "p", &[]);
        let t = TreeModel::new(m, "r".into()).unwrap();
        let ext = ExtensionMap::new([("c".to_string(), "d".to_string())].into());
        let e = extend(&t, "r", &ext).unwrap();
        assert!(e.model().worlds.contains("u^c"));
        assert!(e.model().edges.contains(&(
            "r".to_string(),
            "c".to_string(),
            "u^c".to_string()
        )));
        assert!(e.model().holds("u^c", "p", &[]));
        assert!(e.model().live("u^c").contains("c"));
        assert!(validate(e.model()).is_empty());
    }

    #[test]
    fn extend_rejects_agent_clash() {
        let mut m = KripkeModel::new();
        m.add_world("w", &["d"]);
        let t = TreeModel::new(m, "w".into()).unwrap();
        let ext = ExtensionMap::new([("d".to_string(), "d".to_string())].into());
        assert!(matches!(extend(&t, "w", &ext), Err(ModelError::AgentClash(_))));
    }

    #[test]
    fn json_round_trip() {
        let m = two_world_cycle();
        let text = m.to_json();
        let back = KripkeModel::from_json(&text).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn json_rejects_unknown_keys() {
        let text = r#"{"worlds":["w"],"agents":["d"],"delta":{"w":["d"]},"edges":[],"valuation":{},"bogus":1}"#;
        assert!(KripkeModel::from_json(text).is_err());
    }

    #[test]
    fn json_arity_zero_convention() {
        let text = r#"{"worlds":["w"],"agents":["d"],"delta":{"w":["d"]},"edges":[],"valuation":{"w":{"p":[[]]}}}"#;
        let m = KripkeModel::from_json(text).unwrap();
        assert!(m.holds("w", "p", &[]));
        assert!(!m.holds("w", "q", &[]));
    }

    #[test]
    fn dot_output_mentions_worlds_and_labels() {
        let m = two_world_cycle();
        let dot = m.to_dot();
        assert!(dot.contains("\"w\" -> \"v\" [label=\"d\"]"));
        assert!(dot.contains("v\\np"));
    }
}
