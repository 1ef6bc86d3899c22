//! The model checker and the exhaustive small-model satisfiability oracle
//! used as ground truth in the differential tests.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::model::{Assignment, KripkeModel, WorldId};
use crate::syntax::{free_vars, is_nnf, Formula, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(Var),
    #[error("assignment maps `{var}` to `{agent}` which is not live at `{world}`")]
    IrrelevantAssignment {
        var: Var,
        agent: String,
        world: WorldId,
    },
    #[error("formula is not a sentence; free variables: {0:?}")]
    NotASentence(Vec<Var>),
    #[error("unknown world `{0}`")]
    UnknownWorld(WorldId),
    #[error("formula is not in negation normal form")]
    NotNnf,
    #[error("oracle supports only variables x and y")]
    UnsupportedVariables,
    #[error("enumeration budget of {0} nodes exceeded")]
    ResourceLimit(u64),
}

// ---------------------------------------------------------------------------
// Model checking
// ---------------------------------------------------------------------------

/// Truth of `f` at `w` under `sigma`, per the inductive semantics. The
/// assignment must cover the free variables of `f` and be relevant at `w`.
pub fn check(
    m: &KripkeModel,
    w: &str,
    sigma: &Assignment,
    f: &Formula,
) -> Result<bool, SemanticsError> {
    if !m.worlds.contains(w) {
        return Err(SemanticsError::UnknownWorld(w.to_string()));
    }
    for v in free_vars(f) {
        match sigma.get(&v) {
            None => return Err(SemanticsError::UnboundVariable(v)),
            Some(d) => {
                if !m.live(w).contains(d) {
                    return Err(SemanticsError::IrrelevantAssignment {
                        var: v,
                        agent: d.clone(),
                        world: w.to_string(),
                    });
                }
            }
        }
    }
    Ok(eval(m, w, sigma, f))
}

/// `check` with the empty assignment; requires a sentence.
pub fn check_sentence(m: &KripkeModel, w: &str, f: &Formula) -> Result<bool, SemanticsError> {
    let fv = free_vars(f);
    if !fv.is_empty() {
        return Err(SemanticsError::NotASentence(fv.into_iter().collect()));
    }
    check(m, w, &Assignment::new(), f)
}

fn eval(m: &KripkeModel, w: &str, sigma: &Assignment, f: &Formula) -> bool {
    match f {
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Atom(p, args) => {
            let tuple: Vec<String> = args
                .iter()
                .map(|v| sigma.get(v).expect("free variable covered").clone())
                .collect();
            m.holds(w, p, &tuple)
        }
        Formula::Not(g) => !eval(m, w, sigma, g),
        Formula::And(a, b) => eval(m, w, sigma, a) && eval(m, w, sigma, b),
        Formula::Or(a, b) => eval(m, w, sigma, a) || eval(m, w, sigma, b),
        Formula::Forall(v, g) => m.live(w).iter().all(|d| {
            let mut s = sigma.clone();
            s.set(v, d);
            eval(m, w, &s, g)
        }),
        Formula::Exists(v, g) => m.live(w).iter().any(|d| {
            let mut s = sigma.clone();
            s.set(v, d);
            eval(m, w, &s, g)
        }),
        Formula::Box(v, g) => {
            let d = sigma.get(v).expect("modal index covered");
            m.successors(w, d).all(|u| eval(m, u, sigma, g))
        }
        Formula::Dia(v, g) => {
            let d = sigma.get(v).expect("modal index covered");
            m.successors(w, d).any(|u| eval(m, u, sigma, g))
        }
    }
}

// ---------------------------------------------------------------------------
// Brute-force satisfiability oracle
// ---------------------------------------------------------------------------

/// Exhaustive enumeration bounds for the oracle.
#[derive(Debug, Clone)]
pub struct OracleConfig {
    pub max_worlds: usize,
    pub max_agents: usize,
    pub tree_depth: usize,
    /// Enumerate constant-agent models (δ(w) = D everywhere) instead of
    /// increasing-agent models.
    pub constant_domain: bool,
    /// Budget in (structure, valuation) candidates.
    pub node_budget: u64,
}

impl OracleConfig {
    pub fn bounds(max_worlds: usize, max_agents: usize, tree_depth: usize) -> Self {
        OracleConfig {
            max_worlds,
            max_agents,
            tree_depth,
            constant_domain: false,
            node_budget: 50_000_000,
        }
    }

    pub fn constant(mut self) -> Self {
        self.constant_domain = true;
        self
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.node_budget = budget;
        self
    }
}

/// Search for a tree-shaped witness of the sentence `f` within the bounds.
/// Enumeration is exhaustive over tree models of depth ≤ `tree_depth` with
/// at most `max_worlds` worlds and `max_agents` agents, up to agent renaming
/// and sibling reordering. Returns the witness and its root, or `None`
/// when no model within the bounds exists.
pub fn oracle_sat(
    f: &Formula,
    cfg: &OracleConfig,
) -> Result<Option<(KripkeModel, WorldId)>, SemanticsError> {
    let fv = free_vars(f);
    if !fv.is_empty() {
        return Err(SemanticsError::NotASentence(fv.into_iter().collect()));
    }
    if !is_nnf(f) {
        return Err(SemanticsError::NotNnf);
    }
    assert!(
        cfg.max_worlds >= 1 && cfg.max_agents >= 1,
        "oracle bounds must be at least 1"
    );
    let compiled = Compiled::compile(f)?;
    let mut search = Search {
        compiled: &compiled,
        cfg,
        spent: 0,
        table: Vec::new(),
    };
    for n in 1..=cfg.max_worlds {
        if let Some(witness) = search.structures_with(n)? {
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

/// Convenience wrapper with default budget.
pub fn oracle_sat_bounds(
    f: &Formula,
    max_worlds: usize,
    max_agents: usize,
    tree_depth: usize,
) -> Result<Option<(KripkeModel, WorldId)>, SemanticsError> {
    oracle_sat(f, &OracleConfig::bounds(max_worlds, max_agents, tree_depth))
}

// Compiled formula: nodes with variable references resolved to x/y slots.
#[derive(Debug, Clone, Copy, PartialEq)]
enum VarRef {
    X,
    Y,
}

#[derive(Debug, Clone)]
enum Node {
    Top,
    Bot,
    Atom(usize, Vec<VarRef>),
    NotAtom(usize, Vec<VarRef>),
    And(usize, usize),
    Or(usize, usize),
    Forall(VarRef, usize),
    Exists(VarRef, usize),
    BoxM(VarRef, usize),
    DiaM(VarRef, usize),
}

struct Compiled {
    nodes: Vec<Node>,
    root: usize,
    /// predicate name → (id, arity)
    preds: BTreeMap<String, (usize, usize)>,
}

impl Compiled {
    fn compile(f: &Formula) -> Result<Self, SemanticsError> {
        let mut c = Compiled {
            nodes: Vec::new(),
            root: 0,
            preds: BTreeMap::new(),
        };
        c.root = c.add(f)?;
        Ok(c)
    }

    fn add(&mut self, f: &Formula) -> Result<usize, SemanticsError> {
        let var = |v: &Var| -> Result<VarRef, SemanticsError> {
            match v.as_str() {
                "x" => Ok(VarRef::X),
                "y" => Ok(VarRef::Y),
                _ => Err(SemanticsError::UnsupportedVariables),
            }
        };
        let node = match f {
            Formula::Top => Node::Top,
            Formula::Bot => Node::Bot,
            Formula::Atom(p, args) => {
                let refs = args.iter().map(&var).collect::<Result<Vec<_>, _>>()?;
                let id = self.pred_id(p, args.len());
                Node::Atom(id, refs)
            }
            Formula::Not(g) => match g.as_ref() {
                Formula::Atom(p, args) => {
                    let refs = args.iter().map(&var).collect::<Result<Vec<_>, _>>()?;
                    let id = self.pred_id(p, args.len());
                    Node::NotAtom(id, refs)
                }
                Formula::Top => Node::Bot,
                Formula::Bot => Node::Top,
                _ => return Err(SemanticsError::NotNnf),
            },
            Formula::And(a, b) => Node::And(self.add(a)?, self.add(b)?),
            Formula::Or(a, b) => Node::Or(self.add(a)?, self.add(b)?),
            Formula::Forall(v, g) => Node::Forall(var(v)?, self.add(g)?),
            Formula::Exists(v, g) => Node::Exists(var(v)?, self.add(g)?),
            Formula::Box(v, g) => Node::BoxM(var(v)?, self.add(g)?),
            Formula::Dia(v, g) => Node::DiaM(var(v)?, self.add(g)?),
        };
        self.nodes.push(node);
        Ok(self.nodes.len() - 1)
    }

    fn pred_id(&mut self, name: &str, arity: usize) -> usize {
        let next = self.preds.len();
        self.preds
            .entry(name.to_string())
            .or_insert((next, arity))
            .0
    }
}

/// A candidate structure: tree skeleton, edge labels and live sets, before
/// valuation choice. Agents and worlds are small integers.
struct Structure {
    n: usize,
    parent: Vec<usize>,
    par_agent: Vec<usize>,
    delta: Vec<u32>, // bitmask of live agents
    depth: Vec<usize>,
}

struct Search<'a> {
    compiled: &'a Compiled,
    cfg: &'a OracleConfig,
    spent: u64,
    table: Vec<u8>, // memo: 0 unknown, 1 false, 2 true
}

impl<'a> Search<'a> {
    /// Enumerate all canonical structures with exactly `n` worlds, then all
    /// valuations for each; first witness wins.
    fn structures_with(&mut self, n: usize) -> Result<Option<(KripkeModel, WorldId)>, SemanticsError> {
        let mut st = Structure {
            n,
            parent: vec![usize::MAX; n],
            par_agent: vec![usize::MAX; n],
            delta: vec![0; n],
            depth: vec![0; n],
        };
        self.pick_parents(&mut st, 1)
    }

    fn pick_parents(
        &mut self,
        st: &mut Structure,
        i: usize,
    ) -> Result<Option<(KripkeModel, WorldId)>, SemanticsError> {
        if i == st.n {
            return self.pick_deltas(st, 0, 0);
        }
        // Canonical parent arrays: parent[i] non-decreasing and parent[i] < i.
        let lo = if i == 1 { 0 } else { st.parent[i - 1] };
        for p in lo..i {
            if st.depth[p] + 1 > self.cfg.tree_depth {
                continue;
            }
            st.parent[i] = p;
            st.depth[i] = st.depth[p] + 1;
            if let Some(w) = self.pick_parents(st, i + 1)? {
                return Ok(Some(w));
            }
        }
        st.parent[i] = usize::MAX;
        Ok(None)
    }

    /// Choose live sets in node order. New agents are introduced as the next
    /// unused ids, which breaks the agent-renaming symmetry.
    fn pick_deltas(
        &mut self,
        st: &mut Structure,
        i: usize,
        used: usize,
    ) -> Result<Option<(KripkeModel, WorldId)>, SemanticsError> {
        if i == st.n {
            return self.pick_labels(st, 1);
        }
        if self.cfg.constant_domain {
            // Constant domains: all worlds share the full prefix {0..a-1}.
            if i == 0 {
                for a in 1..=self.cfg.max_agents {
                    let mask = (1u32 << a) - 1;
                    for d in st.delta.iter_mut() {
                        *d = mask;
                    }
                    if let Some(w) = self.pick_labels(st, 1)? {
                        return Ok(Some(w));
                    }
                }
                return Ok(None);
            }
            unreachable!("constant-domain deltas are assigned at the root");
        }
        let base: u32 = if i == 0 { 0 } else { st.delta[st.parent[i]] };
        let optional: u32 = ((1u32 << used) - 1) & !base;
        // Subsets of the optional agents, plus a block of brand-new ids.
        let mut sub = optional;
        loop {
            for fresh in 0..=(self.cfg.max_agents - used) {
                let fresh_mask = if fresh == 0 {
                    0
                } else {
                    (((1u32 << fresh) - 1) << used) as u32
                };
                let mask = base | sub | fresh_mask;
                if mask == 0 {
                    continue; // domains are non-empty
                }
                st.delta[i] = mask;
                if let Some(w) = self.pick_deltas(st, i + 1, used + fresh)? {
                    return Ok(Some(w));
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & optional;
        }
        Ok(None)
    }

    fn pick_labels(
        &mut self,
        st: &mut Structure,
        i: usize,
    ) -> Result<Option<(KripkeModel, WorldId)>, SemanticsError> {
        if i == st.n {
            return self.valuations(st);
        }
        let p = st.parent[i];
        // Edge agents live at the parent; siblings sorted by agent.
        let lo = if i > 1 && st.parent[i - 1] == p {
            st.par_agent[i - 1]
        } else {
            0
        };
        for a in lo..self.cfg.max_agents {
            if st.delta[p] & (1 << a) == 0 {
                continue;
            }
            st.par_agent[i] = a;
            if let Some(w) = self.pick_labels(st, i + 1)? {
                return Ok(Some(w));
            }
        }
        st.par_agent[i] = usize::MAX;
        Ok(None)
    }

    /// Enumerate all valuations of the relevant atom instances and evaluate.
    fn valuations(&mut self, st: &Structure) -> Result<Option<(KripkeModel, WorldId)>, SemanticsError> {
        // Children grouped by (world, agent).
        let mut children: Vec<Vec<(usize, usize)>> = vec![Vec::new(); st.n];
        for i in 1..st.n {
            children[st.parent[i]].push((st.par_agent[i], i));
        }
        // Atom slots: (world, pred, tuple over live agents).
        let mut slots: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
        for w in 0..st.n {
            let live: Vec<usize> =
                (0..self.cfg.max_agents).filter(|a| st.delta[w] & (1 << a) != 0).collect();
            for (_, &(pid, arity)) in self.compiled.preds.iter() {
                for tuple in tuples_over(&live, arity) {
                    let k = slots.len();
                    slots.insert((w, pid, tuple), k);
                }
            }
        }
        let bits = slots.len();
        if bits > 26 {
            return Err(SemanticsError::ResourceLimit(self.cfg.node_budget));
        }
        let nodes = self.compiled.nodes.len();
        let slot_cap = (self.cfg.max_agents + 1) * (self.cfg.max_agents + 1);
        self.table.resize(nodes * st.n * slot_cap, 0);

        for val in 0..(1u64 << bits) {
            self.spent += 1;
            if self.spent > self.cfg.node_budget {
                return Err(SemanticsError::ResourceLimit(self.cfg.node_budget));
            }
            self.table.fill(0);
            let env = Env {
                st,
                children: &children,
                slots: &slots,
                val,
                max_agents: self.cfg.max_agents,
                slot_cap,
            };
            if self.eval(&env, self.compiled.root, 0, 0, 0) {
                let model = build_model(st, &slots, val, self.cfg.max_agents, &self.compiled.preds);
                return Ok(Some((model, "w0".to_string())));
            }
        }
        Ok(None)
    }

    /// Memoized truth of node `idx` at world `w` under partial assignment
    /// (sx, sy); 0 encodes unset, 1..=a encodes agent a-1.
    fn eval(&mut self, env: &Env<'_>, idx: usize, w: usize, sx: usize, sy: usize) -> bool {
        let key = (idx * env.st.n + w) * env.slot_cap + sx * (env.max_agents + 1) + sy;
        match self.table[key] {
            1 => return false,
            2 => return true,
            _ => {}
        }
        let compiled = self.compiled;
        let node = &compiled.nodes[idx];
        let result = match *node {
            Node::Top => true,
            Node::Bot => false,
            Node::Atom(pid, ref refs) => env.atom(w, pid, refs, sx, sy),
            Node::NotAtom(pid, ref refs) => !env.atom(w, pid, refs, sx, sy),
            Node::And(a, b) => self.eval(env, a, w, sx, sy) && self.eval(env, b, w, sx, sy),
            Node::Or(a, b) => self.eval(env, a, w, sx, sy) || self.eval(env, b, w, sx, sy),
            Node::Forall(v, g) => {
                let mut ok = true;
                for a in 0..env.max_agents {
                    if env.st.delta[w] & (1 << a) != 0 {
                        let (nsx, nsy) = set_var(v, a + 1, sx, sy);
                        if !self.eval(env, g, w, nsx, nsy) {
                            ok = false;
                            break;
                        }
                    }
                }
                ok
            }
            Node::Exists(v, g) => {
                let mut ok = false;
                for a in 0..env.max_agents {
                    if env.st.delta[w] & (1 << a) != 0 {
                        let (nsx, nsy) = set_var(v, a + 1, sx, sy);
                        if self.eval(env, g, w, nsx, nsy) {
                            ok = true;
                            break;
                        }
                    }
                }
                ok
            }
            Node::BoxM(v, g) => {
                let d = get_var(v, sx, sy);
                env.children[w]
                    .iter()
                    .filter(|(a, _)| *a + 1 == d)
                    .all(|&(_, c)| self.eval(env, g, c, sx, sy))
            }
            Node::DiaM(v, g) => {
                let d = get_var(v, sx, sy);
                env.children[w]
                    .iter()
                    .filter(|(a, _)| *a + 1 == d)
                    .any(|&(_, c)| self.eval(env, g, c, sx, sy))
            }
        };
        self.table[key] = if result { 2 } else { 1 };
        result
    }
}

struct Env<'a> {
    st: &'a Structure,
    children: &'a [Vec<(usize, usize)>],
    slots: &'a HashMap<(usize, usize, Vec<usize>), usize>,
    val: u64,
    max_agents: usize,
    slot_cap: usize,
}

impl<'a> Env<'a> {
    fn atom(&self, w: usize, pid: usize, refs: &[VarRef], sx: usize, sy: usize) -> bool {
        let tuple: Vec<usize> = refs.iter().map(|r| get_var(*r, sx, sy) - 1).collect();
        match self.slots.get(&(w, pid, tuple)) {
            Some(&k) => self.val & (1 << k) != 0,
            None => false,
        }
    }
}

fn set_var(v: VarRef, val: usize, sx: usize, sy: usize) -> (usize, usize) {
    match v {
        VarRef::X => (val, sy),
        VarRef::Y => (sx, val),
    }
}

fn get_var(v: VarRef, sx: usize, sy: usize) -> usize {
    let d = match v {
        VarRef::X => sx,
        VarRef::Y => sy,
    };
    debug_assert!(d > 0, "modal index or atom argument must be assigned");
    d
}

fn tuples_over(live: &[usize], arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::new();
        for t in &out {
            for &a in live {
                let mut t2 = t.clone();
                t2.push(a);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

fn build_model(
    st: &Structure,
    slots: &HashMap<(usize, usize, Vec<usize>), usize>,
    val: u64,
    max_agents: usize,
    preds: &BTreeMap<String, (usize, usize)>,
) -> KripkeModel {
    let mut m = KripkeModel::new();
    let wid = |i: usize| format!("w{i}");
    let aid = |a: usize| format!("a{a}");
    for w in 0..st.n {
        m.worlds.insert(wid(w));
        let live: std::collections::BTreeSet<String> = (0..max_agents)
            .filter(|a| st.delta[w] & (1 << *a) != 0)
            .map(aid)
            .collect();
        m.agents.extend(live.iter().cloned());
        m.delta.insert(wid(w), live);
    }
    for i in 1..st.n {
        m.edges.insert((wid(st.parent[i]), aid(st.par_agent[i]), wid(i)));
    }
    let name_of: BTreeMap<usize, &String> = preds.iter().map(|(n, (id, _))| (*id, n)).collect();
    for ((w, pid, tuple), k) in slots {
        if val & (1 << *k) != 0 {
            let name = name_of[pid].to_string();
            m.valuation
                .entry(wid(*w))
                .or_default()
                .entry(name)
                .or_default()
                .insert(tuple.iter().map(|&a| aid(a)).collect());
        }
    }
    m.root = Some(wid(0));
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::*;

    fn one_world(props: &[&str]) -> KripkeModel {
        let mut m = KripkeModel::new();
        m.add_world("w", &["d"]);
        for p in props {
            m.set_fact("w", p, &[]);
        }
        m
    }

    #[test]
    fn check_top_and_literals() {
        let m = one_world(&["p"]);
        assert!(check_sentence(&m, "w", &top()).unwrap());
        assert!(check_sentence(&m, "w", &prop("p")).unwrap());
        assert!(!check_sentence(&m, "w", &prop("q")).unwrap());
    }

    #[test]
    fn vacuous_box_is_true() {
        let m = one_world(&[]);
        let sigma = Assignment::from([("x", "d")]);
        assert!(check(&m, "w", &sigma, &boxm("x", bot())).unwrap());
        assert!(check_sentence(&m, "w", &exists("x", boxm("x", bot()))).unwrap());
    }

    #[test]
    fn quantifiers_range_over_live_agents() {
        let mut m = KripkeModel::new();
        m.add_world("w", &["d", "e"]);
        m.set_fact("w", "P", &["d"]);
        assert!(check_sentence(&m, "w", &exists("x", atom("P", &["x"]))).unwrap());
        assert!(!check_sentence(&m, "w", &forall("x", atom("P", &["x"]))).unwrap());
    }

    #[test]
    fn check_errors() {
        let m = one_world(&[]);
        assert!(matches!(
            check(&m, "w", &Assignment::new(), &boxm("x", top())),
            Err(SemanticsError::UnboundVariable(_))
        ));
        let sigma = Assignment::from([("x", "zz")]);
        assert!(matches!(
            check(&m, "w", &sigma, &boxm("x", top())),
            Err(SemanticsError::IrrelevantAssignment { .. })
        ));
        assert!(matches!(
            check_sentence(&m, "w", &atom("P", &["x"])),
            Err(SemanticsError::NotASentence(_))
        ));
    }

    #[test]
    fn negation_flips() {
        let m = one_world(&["p"]);
        let f = diam("x", prop("p"));
        let sigma = Assignment::from([("x", "d")]);
        let pos = check(&m, "w", &sigma, &f).unwrap();
        let neg = check(&m, "w", &sigma, &not(f)).unwrap();
        assert_eq!(pos, !neg);
    }

    #[test]
    fn oracle_unsat_contradiction() {
        let f = and(prop("p"), not(prop("p")));
        assert!(oracle_sat_bounds(&f, 3, 2, 2).unwrap().is_none());
    }

    #[test]
    fn oracle_finds_diamond_witness() {
        let f = exists("x", diam("x", prop("p")));
        let got = oracle_sat_bounds(&f, 2, 1, 1).unwrap();
        let (m, root) = got.expect("satisfiable");
        assert!(validate(&m).is_empty(), "witness must validate");
        assert!(check_sentence(&m, &root, &f).unwrap());
        assert_eq!(m.worlds.len(), 2);
    }

    #[test]
    fn oracle_respects_bounds() {
        // needs two distinct successors, impossible with one world
        let f = exists(
            "x",
            and(diam("x", prop("p")), diam("x", not(prop("p")))),
        );
        assert!(oracle_sat_bounds(&f, 1, 1, 1).unwrap().is_none());
        let got = oracle_sat_bounds(&f, 3, 1, 1).unwrap();
        let (m, root) = got.expect("satisfiable with three worlds");
        assert!(check_sentence(&m, &root, &f).unwrap());
    }

    use crate::model::validate;

    #[test]
    fn oracle_monotone_domain_constraint() {
        // forall x. [x] false is satisfiable: pick a world whose agents have no edges
        let f = forall("x", boxm("x", bot()));
        let got = oracle_sat_bounds(&f, 2, 2, 1).unwrap();
        assert!(got.is_some());
    }

    #[test]
    fn constant_oracle_smoke() {
        let f = exists("x", diam("x", prop("p")));
        let got = oracle_sat(&f, &OracleConfig::bounds(2, 2, 1).constant()).unwrap();
        let (m, root) = got.expect("satisfiable");
        // constant domains: all worlds share the same live set
        let sets: Vec<_> = m.delta.values().collect();
        assert!(sets.windows(2).all(|w| w[0] == w[1]));
        assert!(check_sentence(&m, &root, &f).unwrap());
    }

    #[test]
    fn oracle_budget_exhaustion() {
        let f = forall(
            "x",
            exists("y", or(atom("P", &["x", "y"]), not(atom("P", &["y", "x"])))),
        );
        let err = oracle_sat(&f, &OracleConfig::bounds(4, 3, 2).budget(10));
        assert!(matches!(err, Err(SemanticsError::ResourceLimit(_))) || err.is_ok());
    }
}
