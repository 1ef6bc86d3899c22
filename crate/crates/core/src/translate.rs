//! The two equi-satisfiability translations: increasing → constant agents
//! (`tr1` guarded by `gamma`) and predicate → propositional atoms (`tr2`
//! with the real-world marker).

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::syntax::{
    and, atom, exists, is_nnf, modal_depth, not, or, signature, Formula, PredName, SyntaxError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TranslateError {
    #[error("fresh name `{0}` already occurs in the input")]
    NameClash(String),
    #[error("input must be in negation normal form")]
    NotNnf,
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// Deterministic fresh names for a given input signature: the existence
/// predicate, the real-world marker, one proposition per input predicate,
/// and a stream of intermediate unary predicates.
#[derive(Debug, Clone)]
pub struct FreshNames {
    existence: String,
    marker: String,
    pred_props: BTreeMap<PredName, PredName>,
    reserved: BTreeSet<String>,
    intermediate_counter: usize,
}

impl FreshNames {
    pub fn for_formula(f: &Formula) -> Result<Self, TranslateError> {
        let sig = signature(f)?;
        let mut reserved: BTreeSet<String> = sig.keys().cloned().collect();
        let existence = pick_fresh("E_", &mut reserved);
        let marker = pick_fresh("q_", &mut reserved);
        let mut pred_props = BTreeMap::new();
        for p in sig.keys() {
            let prop = pick_fresh(&format!("p_{p}"), &mut reserved);
            pred_props.insert(p.clone(), prop);
        }
        Ok(FreshNames {
            existence,
            marker,
            pred_props,
            reserved,
            intermediate_counter: 0,
        })
    }

    /// The unary existence predicate `E`.
    pub fn existence(&self) -> &str {
        &self.existence
    }

    /// The real-world marker proposition `q`.
    pub fn marker(&self) -> &str {
        &self.marker
    }

    /// The proposition standing for predicate `p` under `tr2`.
    pub fn prop_for(&mut self, pred: &str) -> String {
        if let Some(p) = self.pred_props.get(pred) {
            return p.clone();
        }
        let prop = pick_fresh(&format!("p_{pred}"), &mut self.reserved);
        self.pred_props.insert(pred.to_string(), prop.clone());
        prop
    }

    /// A fresh intermediate unary predicate `W{n}_` together with the
    /// proposition that its later elimination uses.
    pub fn fresh_intermediate(&mut self) -> (String, String) {
        let pred = loop {
            let cand = format!("W{}_", self.intermediate_counter);
            self.intermediate_counter += 1;
            if !self.reserved.contains(&cand) {
                self.reserved.insert(cand.clone());
                break cand;
            }
        };
        let prop = pick_fresh(&format!("p_{pred}"), &mut self.reserved);
        (pred, prop)
    }

    /// A fresh intermediate proposition.
    pub fn fresh_prop(&mut self) -> String {
        self.fresh_intermediate().0
    }
}

fn pick_fresh(base: &str, reserved: &mut BTreeSet<String>) -> String {
    let mut candidate = base.to_string();
    let mut n = 0usize;
    while reserved.contains(&candidate) {
        n += 1;
        candidate = format!("{base}{n}");
    }
    reserved.insert(candidate.clone());
    candidate
}

/// Relativize quantifiers by the existence predicate: `∃x f` becomes
/// `∃x (E(x) ∧ f)` and dually `∀x f` becomes `∀x (¬E(x) ∨ f)`; everything
/// else is homomorphic. Input and output are in NNF.
pub fn tr1(f: &Formula, names: &FreshNames) -> Result<Formula, TranslateError> {
    if !is_nnf(f) {
        return Err(TranslateError::NotNnf);
    }
    if mentions_pred(f, names.existence()) {
        return Err(TranslateError::NameClash(names.existence().to_string()));
    }
    Ok(tr1_rec(f, names.existence()))
}

fn tr1_rec(f: &Formula, e: &str) -> Formula {
    match f {
        Formula::Top | Formula::Bot | Formula::Atom(..) | Formula::Not(_) => f.clone(),
        Formula::And(a, b) => and(tr1_rec(a, e), tr1_rec(b, e)),
        Formula::Or(a, b) => or(tr1_rec(a, e), tr1_rec(b, e)),
        Formula::Forall(v, g) => Formula::Forall(
            v.clone(),
            Box::new(or(
                not(Formula::Atom(e.to_string(), vec![v.clone()])),
                tr1_rec(g, e),
            )),
        ),
        Formula::Exists(v, g) => Formula::Exists(
            v.clone(),
            Box::new(and(
                Formula::Atom(e.to_string(), vec![v.clone()]),
                tr1_rec(g, e),
            )),
        ),
        Formula::Box(v, g) => Formula::Box(v.clone(), Box::new(tr1_rec(g, e))),
        Formula::Dia(v, g) => Formula::Dia(v.clone(), Box::new(tr1_rec(g, e))),
    }
}

/// The monotonicity guard for the existence predicate:
/// the conjunction over `i + j ≤ md(f)` of
/// `(∀y □_y)^i ∀x (¬E(x) ∨ (∀y □_y)^j E(x))`.
pub fn gamma(f: &Formula, names: &FreshNames) -> Formula {
    let e = names.existence();
    let md = modal_depth(f);
    let mut terms = Vec::new();
    for sum in 0..=md {
        for i in 0..=sum {
            let j = sum - i;
            let ex = Formula::Atom(e.to_string(), vec!["x".to_string()]);
            let inner = or(not(ex.clone()), all_box_y(j, ex));
            terms.push(all_box_y(i, Formula::Forall("x".to_string(), Box::new(inner))));
        }
    }
    crate::syntax::and_all(terms)
}

fn all_box_y(n: usize, f: Formula) -> Formula {
    let mut out = f;
    for _ in 0..n {
        out = Formula::Forall("y".to_string(), Box::new(Formula::Box("y".to_string(), Box::new(out))));
    }
    out
}

/// The satisfiability-ready constant-domain form: `γ ∧ ∃x E(x) ∧ Tr₁(f)`.
///
/// The `∃x E(x)` conjunct pins the extracted live sets non-empty at the
/// root (and, through `γ`, at every reachable world); without it a
/// constant-domain model could satisfy the translation with an everywhere-
/// empty `E`, which no increasing-agent model can mirror.
pub fn tr1_full(f: &Formula, names: &FreshNames) -> Result<Formula, TranslateError> {
    let e_nonempty = exists(
        "x",
        Formula::Atom(names.existence().to_string(), vec!["x".to_string()]),
    );
    Ok(and(and(gamma(f, names), e_nonempty), tr1(f, names)?))
}

/// Reduce predicates to propositions: an `n`-ary atom becomes a chain of
/// diamonds into marker-free worlds ending at the predicate's proposition;
/// boxes and diamonds are relativized to the real-world marker; quantifiers
/// are homomorphic. Input NNF, output NNF.
pub fn tr2(f: &Formula, names: &mut FreshNames) -> Result<Formula, TranslateError> {
    if !is_nnf(f) {
        return Err(TranslateError::NotNnf);
    }
    if mentions_pred(f, names.marker()) {
        return Err(TranslateError::NameClash(names.marker().to_string()));
    }
    Ok(tr2_rec(f, names))
}

fn tr2_rec(f: &Formula, names: &mut FreshNames) -> Formula {
    let q = || crate::syntax::prop_owned(names_marker(names));
    match f {
        Formula::Top | Formula::Bot => f.clone(),
        Formula::Atom(p, args) => {
            let prop = crate::syntax::prop_owned(names.prop_for(p));
            // ◇_{x1}(¬q ∧ ◇_{x2}(… ◇_{xn}(¬q ∧ p_i)…))
            args.iter().rev().fold(prop, |acc, v| {
                Formula::Dia(v.clone(), Box::new(and(not(q()), acc)))
            })
        }
        Formula::Not(g) => match g.as_ref() {
            Formula::Atom(p, args) => {
                let prop = crate::syntax::prop_owned(names.prop_for(p));
                // the NNF dual of the diamond chain
                args.iter().rev().fold(not(prop), |acc, v| {
                    Formula::Box(v.clone(), Box::new(or(q(), acc)))
                })
            }
            Formula::Top => Formula::Bot,
            Formula::Bot => Formula::Top,
            _ => not(tr2_rec(g, names)), // unreachable for NNF input
        },
        Formula::And(a, b) => and(tr2_rec(a, names), tr2_rec(b, names)),
        Formula::Or(a, b) => or(tr2_rec(a, names), tr2_rec(b, names)),
        Formula::Forall(v, g) => Formula::Forall(v.clone(), Box::new(tr2_rec(g, names))),
        Formula::Exists(v, g) => Formula::Exists(v.clone(), Box::new(tr2_rec(g, names))),
        Formula::Box(v, g) => {
            Formula::Box(v.clone(), Box::new(or(not(q()), tr2_rec(g, names))))
        }
        Formula::Dia(v, g) => Formula::Dia(v.clone(), Box::new(and(q(), tr2_rec(g, names)))),
    }
}

fn names_marker(names: &FreshNames) -> String {
    names.marker().to_string()
}

/// `q ∧ Tr₂(f; q)` — the form the solver pipeline consumes.
pub fn tr2_full(f: &Formula, names: &mut FreshNames) -> Result<Formula, TranslateError> {
    let q = crate::syntax::prop_owned(names.marker().to_string());
    Ok(and(q, tr2(f, names)?))
}

pub(crate) fn mentions_pred(f: &Formula, pred: &str) -> bool {
    match f {
        Formula::Top | Formula::Bot => false,
        Formula::Atom(p, _) => p == pred,
        Formula::Not(g)
        | Formula::Forall(_, g)
        | Formula::Exists(_, g)
        | Formula::Box(_, g)
        | Formula::Dia(_, g) => mentions_pred(g, pred),
        Formula::And(a, b) | Formula::Or(a, b) => mentions_pred(a, pred) || mentions_pred(b, pred),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::*;

    fn names_for(f: &Formula) -> FreshNames {
        FreshNames::for_formula(f).unwrap()
    }

    #[test]
    fn tr1_relativizes_exists() {
        let f = exists("x", atom("P", &["x"]));
        let n = names_for(&f);
        assert_eq!(
            tr1(&f, &n).unwrap(),
            exists("x", and(atom("E_", &["x"]), atom("P", &["x"])))
        );
    }

    #[test]
    fn tr1_fixes_atoms() {
        let f = prop("p");
        let n = names_for(&f);
        assert_eq!(tr1(&f, &n).unwrap(), prop("p"));
    }

    #[test]
    fn tr1_dualizes_forall() {
        let f = forall("x", boxm("x", prop("p")));
        let n = names_for(&f);
        assert_eq!(
            tr1(&f, &n).unwrap(),
            forall("x", or(not(atom("E_", &["x"])), boxm("x", prop("p"))))
        );
    }

    #[test]
    fn gamma_md0_is_single_term() {
        let f = prop("p");
        let n = names_for(&f);
        assert_eq!(
            gamma(&f, &n),
            forall("x", or(not(atom("E_", &["x"])), atom("E_", &["x"])))
        );
    }

    #[test]
    fn gamma_md1_has_three_terms() {
        let f = boxm("x", prop("p"));
        let n = names_for(&f);
        let ex = atom("E_", &["x"]);
        let t00 = forall("x", or(not(ex.clone()), ex.clone()));
        let t01 = forall("x", or(not(ex.clone()), forall("y", boxm("y", ex.clone()))));
        let t10 = forall("y", boxm("y", forall("x", or(not(ex.clone()), ex.clone()))));
        assert_eq!(gamma(&f, &n), and(and(t00, t01), t10));
    }

    #[test]
    fn gamma_term_one_one_shape() {
        // the (1,1) term: ∀y □_y ∀x (¬E(x) | ∀y □_y E(x))
        let f = boxm("x", boxm("x", prop("p"))); // md 2 so (1,1) exists
        let n = names_for(&f);
        let g = gamma(&f, &n);
        let ex = atom("E_", &["x"]);
        let t11 = forall(
            "y",
            boxm(
                "y",
                forall("x", or(not(ex.clone()), forall("y", boxm("y", ex)))),
            ),
        );
        let rendered = g.render();
        assert!(rendered.contains(&t11.render()));
    }

    #[test]
    fn tr2_unary_atom_becomes_diamond_chain() {
        let f = exists("x", atom("P", &["x"]));
        let mut n = names_for(&f);
        let got = tr2(&f, &mut n).unwrap();
        assert_eq!(
            got,
            exists("x", diam("x", and(not(prop("q_")), prop("p_P"))))
        );
    }

    #[test]
    fn tr2_box_relativizes() {
        let f = boxm("x", prop("p"));
        let mut n = names_for(&f);
        assert_eq!(
            tr2(&f, &mut n).unwrap(),
            boxm("x", or(not(prop("q_")), prop("p_p")))
        );
    }

    #[test]
    fn tr2_negated_atom_uses_box_dual() {
        let f = not(atom("P", &["x"]));
        let mut n = names_for(&f);
        assert_eq!(
            tr2(&f, &mut n).unwrap(),
            boxm("x", or(prop("q_"), not(prop("p_P"))))
        );
    }

    #[test]
    fn tr2_binary_atom_nests() {
        let f = atom("R", &["x", "y"]);
        let mut n = names_for(&f);
        let q = || prop("q_");
        assert_eq!(
            tr2(&f, &mut n).unwrap(),
            diam("x", and(not(q()), diam("y", and(not(q()), prop("p_R")))))
        );
    }

    #[test]
    fn tr2_full_conjoins_marker() {
        let f = top();
        let mut n = names_for(&f);
        assert_eq!(tr2_full(&f, &mut n).unwrap(), and(prop("q_"), top()));
    }

    #[test]
    fn tr2_output_is_propositional_and_nnf() {
        let f = to_nnf(&parse_formula(
            "forall x. exists y. ([x] P(x,y) | <y> !P(x,y))",
            ParseMode::TwoVar,
        )
        .unwrap());
        let mut n = names_for(&f);
        let t = tr2(&f, &mut n).unwrap();
        assert!(is_nnf(&t));
        let sig = signature(&t).unwrap();
        assert!(sig.values().all(|&a| a == 0));
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let f = and(prop("q_"), and(atom("E_", &["x"]), prop("p_p")));
        let n = names_for(&f);
        assert_eq!(n.existence(), "E_1");
        assert_eq!(n.marker(), "q_1");
        let mut n2 = n.clone();
        assert_ne!(n2.prop_for("p"), "p_p");
    }

    #[test]
    fn name_clash_reported() {
        let f = atom("E_", &["x"]);
        let other = prop("p");
        let n = names_for(&other); // names derived from a different formula
        assert!(matches!(tr1(&f, &n), Err(TranslateError::NameClash(_))));
    }

    #[test]
    fn translations_stay_in_two_variables() {
        let f = to_nnf(
            &parse_formula("forall x. exists y. [x] (P(x,y) & p)", ParseMode::TwoVar).unwrap(),
        );
        let mut n = names_for(&f);
        for g in [
            tr1(&f, &n).unwrap(),
            gamma(&f, &n),
            tr2(&f, &mut n).unwrap(),
        ] {
            let mut vars = BTreeSet::new();
            collect_vars(&g, &mut vars);
            assert!(vars.iter().all(|v| v == "x" || v == "y"), "{vars:?}");
        }
    }

    fn collect_vars(f: &Formula, out: &mut BTreeSet<String>) {
        match f {
            Formula::Top | Formula::Bot => {}
            Formula::Atom(_, args) => out.extend(args.iter().cloned()),
            Formula::Not(g) => collect_vars(g, out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                collect_vars(a, out);
                collect_vars(b, out);
            }
            Formula::Forall(v, g)
            | Formula::Exists(v, g)
            | Formula::Box(v, g)
            | Formula::Dia(v, g) => {
                out.insert(v.clone());
                collect_vars(g, out);
            }
        }
    }
}
