//! Formula AST, concrete grammar, and the structural metrics (free variables,
//! modal depth, subformula closure, NNF) that every later stage consumes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Variable names. In two-variable mode only `x` and `y` are admitted.
pub type Var = String;
/// Predicate names. Arity-0 predicates are propositions.
pub type PredName = String;

/// Formulas over the primitive connectives. Implication and bi-implication
/// are parser sugar and never appear in the AST.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Bot,
    Atom(PredName, Vec<Var>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
    /// `[v] f` — necessity indexed by the agent variable `v`.
    Box(Var, Box<Formula>),
    /// `<v> f` — possibility indexed by the agent variable `v`.
    Dia(Var, Box<Formula>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseMode {
    /// Restrict the variable set to `{x, y}`.
    TwoVar,
    /// Any identifier may be a variable.
    Full,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("arity mismatch for predicate `{pred}`: used with {expected} and {found} arguments")]
    ArityMismatch {
        pred: String,
        expected: usize,
        found: usize,
    },
    #[error("variable `{var}` exceeds the two-variable limit (only x, y allowed)")]
    VariableLimitExceeded { var: String },
    #[error("substituting `{to}` for `{from}` would capture a free occurrence")]
    Capture { from: String, to: String },
    #[error("formula is not in negation normal form")]
    NotNnf,
}

// Convenience constructors; the algorithms below build a lot of formulas.
pub fn top() -> Formula {
    Formula::Top
}
pub fn bot() -> Formula {
    Formula::Bot
}
pub fn prop(name: &str) -> Formula {
    Formula::Atom(name.to_string(), Vec::new())
}
pub fn prop_owned(name: String) -> Formula {
    Formula::Atom(name, Vec::new())
}
pub fn atom(name: &str, args: &[&str]) -> Formula {
    Formula::Atom(name.to_string(), args.iter().map(|a| a.to_string()).collect())
}
pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}
pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}
pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}
pub fn forall(v: &str, f: Formula) -> Formula {
    Formula::Forall(v.to_string(), Box::new(f))
}
pub fn exists(v: &str, f: Formula) -> Formula {
    Formula::Exists(v.to_string(), Box::new(f))
}
pub fn boxm(v: &str, f: Formula) -> Formula {
    Formula::Box(v.to_string(), Box::new(f))
}
pub fn diam(v: &str, f: Formula) -> Formula {
    Formula::Dia(v.to_string(), Box::new(f))
}

/// Left-associated conjunction of a non-empty list; `⊤` for an empty one.
pub fn and_all(fs: impl IntoIterator<Item = Formula>) -> Formula {
    let mut it = fs.into_iter();
    match it.next() {
        None => Formula::Top,
        Some(first) => it.fold(first, and),
    }
}

/// Left-associated disjunction of a non-empty list; `⊥` for an empty one.
pub fn or_all(fs: impl IntoIterator<Item = Formula>) -> Formula {
    let mut it = fs.into_iter();
    match it.next() {
        None => Formula::Bot,
        Some(first) => it.fold(first, or),
    }
}

impl Formula {
    pub fn parse(text: &str, mode: ParseMode) -> Result<Formula, SyntaxError> {
        parse_formula(text, mode)
    }

    pub fn render(&self) -> String {
        render_formula(self)
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Top | Formula::Bot | Formula::Atom(..))
    }

    /// A literal is an atom, `⊤`, `⊥`, or a negated atom.
    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(..) => true,
            Formula::Not(inner) => inner.is_atomic(),
            _ => false,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_formula(self))
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Forall,
    Exists,
    True,
    False,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Lt,
    Gt,
    Amp,
    Pipe,
    Bang,
    Arrow,
    Iff,
    Dot,
    Comma,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(text: &'a str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
        let mut lx = Lexer {
            src: text.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        while let Some((pos, tok)) = lx.next_token()? {
            out.push((pos, tok));
        }
        Ok(out)
    }

    fn next_token(&mut self) -> Result<Option<(usize, Tok)>, SyntaxError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b'&' => Tok::Amp,
            b'|' => Tok::Pipe,
            b'!' => Tok::Bang,
            b'.' => Tok::Dot,
            b',' => Tok::Comma,
            b'>' => Tok::Gt,
            b'<' => {
                if self.src.get(self.pos + 1) == Some(&b'-') {
                    if self.src.get(self.pos + 2) == Some(&b'>') {
                        self.pos += 2;
                        Tok::Iff
                    } else {
                        return Err(SyntaxError::Parse {
                            pos: start,
                            msg: "expected `<->`".into(),
                        });
                    }
                } else {
                    Tok::Lt
                }
            }
            b'-' => {
                if self.src.get(self.pos + 1) == Some(&b'>') {
                    self.pos += 1;
                    Tok::Arrow
                } else {
                    return Err(SyntaxError::Parse {
                        pos: start,
                        msg: "expected `->`".into(),
                    });
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = self.pos;
                while end < self.src.len()
                    && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
                {
                    end += 1;
                }
                let word = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                self.pos = end - 1;
                match word {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word.to_string()),
                }
            }
            other => {
                return Err(SyntaxError::Parse {
                    pos: start,
                    msg: format!("unexpected character `{}`", other as char),
                })
            }
        };
        self.pos += 1;
        Ok(Some((start, tok)))
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    mode: ParseMode,
    arities: BTreeMap<String, usize>,
}

/// Parse a formula in the concrete grammar. Quantifiers and modalities bind
/// tightly (prefix operators), so `forall x. p & q` reads `(forall x. p) & q`.
pub fn parse_formula(text: &str, mode: ParseMode) -> Result<Formula, SyntaxError> {
    let toks = Lexer::tokens(text)?;
    let end = text.len();
    let mut p = Parser {
        toks,
        at: 0,
        end,
        mode,
        arities: BTreeMap::new(),
    };
    let f = p.iff()?;
    if p.at < p.toks.len() {
        return Err(SyntaxError::Parse {
            pos: p.toks[p.at].0,
            msg: "unexpected trailing input".into(),
        });
    }
    Ok(f)
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), SyntaxError> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(SyntaxError::Parse {
                pos,
                msg: format!("expected {what}"),
            }),
        }
    }

    fn var(&mut self) -> Result<Var, SyntaxError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Ident(v)) => {
                if self.mode == ParseMode::TwoVar && v != "x" && v != "y" {
                    return Err(SyntaxError::VariableLimitExceeded { var: v });
                }
                Ok(v)
            }
            _ => Err(SyntaxError::Parse {
                pos,
                msg: "expected a variable name".into(),
            }),
        }
    }

    fn iff(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.imp()?;
        while self.peek() == Some(&Tok::Iff) {
            self.bump();
            let rhs = self.imp()?;
            // a <-> b desugars to (!a | b) & (!b | a)
            lhs = and(or(not(lhs.clone()), rhs.clone()), or(not(rhs), lhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let rhs = self.imp()?;
            return Ok(or(not(lhs), rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.bump();
            let rhs = self.and()?;
            lhs = or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.bump();
            let rhs = self.unary()?;
            lhs = and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.bump();
                Ok(not(self.unary()?))
            }
            Some(Tok::LBracket) => {
                self.bump();
                let v = self.var()?;
                self.expect(Tok::RBracket, "`]`")?;
                Ok(Formula::Box(v, Box::new(self.unary()?)))
            }
            Some(Tok::Lt) => {
                self.bump();
                let v = self.var()?;
                self.expect(Tok::Gt, "`>`")?;
                Ok(Formula::Dia(v, Box::new(self.unary()?)))
            }
            Some(Tok::Forall) | Some(Tok::Exists) => {
                let q = self.bump().unwrap();
                let v = self.var()?;
                self.expect(Tok::Dot, "`.`")?;
                let body = self.unary()?;
                Ok(match q {
                    Tok::Forall => Formula::Forall(v, Box::new(body)),
                    _ => Formula::Exists(v, Box::new(body)),
                })
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::True) => Ok(Formula::Top),
            Some(Tok::False) => Ok(Formula::Bot),
            Some(Tok::LParen) => {
                let f = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(name)) => {
                let mut args = Vec::new();
                if self.peek() == Some(&Tok::LParen) {
                    self.bump();
                    args.push(self.var()?);
                    while self.peek() == Some(&Tok::Comma) {
                        self.bump();
                        args.push(self.var()?);
                    }
                    self.expect(Tok::RParen, "`)`")?;
                }
                match self.arities.get(&name) {
                    Some(&n) if n != args.len() => {
                        return Err(SyntaxError::ArityMismatch {
                            pred: name,
                            expected: n,
                            found: args.len(),
                        })
                    }
                    Some(_) => {}
                    None => {
                        self.arities.insert(name.clone(), args.len());
                    }
                }
                Ok(Formula::Atom(name, args))
            }
            _ => Err(SyntaxError::Parse {
                pos,
                msg: "expected a formula".into(),
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

/// Canonical text such that `parse_formula(render_formula(f)) == f`.
pub fn render_formula(f: &Formula) -> String {
    let mut out = String::new();
    render_prec(f, 1, &mut out);
    out
}

// Precedence levels: Or = 1, And = 2, unary = 3, atoms = 4.
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        Formula::Not(..)
        | Formula::Forall(..)
        | Formula::Exists(..)
        | Formula::Box(..)
        | Formula::Dia(..) => 3,
        Formula::Top | Formula::Bot | Formula::Atom(..) => 4,
    }
}

fn render_prec(f: &Formula, min: u8, out: &mut String) {
    let need_parens = prec(f) < min;
    if need_parens {
        out.push('(');
    }
    match f {
        Formula::Top => out.push_str("true"),
        Formula::Bot => out.push_str("false"),
        Formula::Atom(p, args) => {
            out.push_str(p);
            if !args.is_empty() {
                out.push('(');
                out.push_str(&args.join(","));
                out.push(')');
            }
        }
        Formula::Not(g) => {
            out.push('!');
            render_prec(g, 3, out);
        }
        Formula::And(a, b) => {
            render_prec(a, 2, out);
            out.push_str(" & ");
            render_prec(b, 3, out);
        }
        Formula::Or(a, b) => {
            render_prec(a, 1, out);
            out.push_str(" | ");
            render_prec(b, 2, out);
        }
        Formula::Forall(v, g) => {
            out.push_str("forall ");
            out.push_str(v);
            out.push_str(". ");
            render_prec(g, 3, out);
        }
        Formula::Exists(v, g) => {
            out.push_str("exists ");
            out.push_str(v);
            out.push_str(". ");
            render_prec(g, 3, out);
        }
        Formula::Box(v, g) => {
            out.push('[');
            out.push_str(v);
            out.push_str("] ");
            render_prec(g, 3, out);
        }
        Formula::Dia(v, g) => {
            out.push('<');
            out.push_str(v);
            out.push_str("> ");
            render_prec(g, 3, out);
        }
    }
    if need_parens {
        out.push(')');
    }
}

// ---------------------------------------------------------------------------
// Structural metrics
// ---------------------------------------------------------------------------

/// Free variables; the index of a modality is free: `Fv([x] f) = Fv(f) ∪ {x}`.
pub fn free_vars(f: &Formula) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    collect_free(f, &mut out);
    out
}

fn collect_free(f: &Formula, out: &mut BTreeSet<Var>) {
    match f {
        Formula::Top | Formula::Bot => {}
        Formula::Atom(_, args) => out.extend(args.iter().cloned()),
        Formula::Not(g) => collect_free(g, out),
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect_free(a, out);
            collect_free(b, out);
        }
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            let mut inner = BTreeSet::new();
            collect_free(g, &mut inner);
            inner.remove(v);
            out.extend(inner);
        }
        Formula::Box(v, g) | Formula::Dia(v, g) => {
            out.insert(v.clone());
            collect_free(g, out);
        }
    }
}

/// Rename every free occurrence of `from` (including modal indices) to `to`.
/// Requires `to ∉ free_vars(f)` and refuses renamings that a binder of `to`
/// would capture.
pub fn substitute(f: &Formula, from: &str, to: &str) -> Result<Formula, SyntaxError> {
    if from == to {
        return Ok(f.clone());
    }
    if free_vars(f).contains(to) {
        return Err(SyntaxError::Capture {
            from: from.to_string(),
            to: to.to_string(),
        });
    }
    subst_free(f, from, to)
}

fn subst_free(f: &Formula, from: &str, to: &str) -> Result<Formula, SyntaxError> {
    let ren = |v: &Var| -> Var {
        if v == from {
            to.to_string()
        } else {
            v.clone()
        }
    };
    Ok(match f {
        Formula::Top | Formula::Bot => f.clone(),
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(ren).collect()),
        Formula::Not(g) => Formula::Not(Box::new(subst_free(g, from, to)?)),
        Formula::And(a, b) => Formula::And(
            Box::new(subst_free(a, from, to)?),
            Box::new(subst_free(b, from, to)?),
        ),
        Formula::Or(a, b) => Formula::Or(
            Box::new(subst_free(a, from, to)?),
            Box::new(subst_free(b, from, to)?),
        ),
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            let body = if v == from {
                g.as_ref().clone() // `from` is bound below, nothing to rename
            } else if v == to {
                if free_vars(g).contains(from) {
                    return Err(SyntaxError::Capture {
                        from: from.to_string(),
                        to: to.to_string(),
                    });
                }
                g.as_ref().clone()
            } else {
                subst_free(g, from, to)?
            };
            match f {
                Formula::Forall(..) => Formula::Forall(v.clone(), Box::new(body)),
                _ => Formula::Exists(v.clone(), Box::new(body)),
            }
        }
        Formula::Box(v, g) => Formula::Box(ren(v), Box::new(subst_free(g, from, to)?)),
        Formula::Dia(v, g) => Formula::Dia(ren(v), Box::new(subst_free(g, from, to)?)),
    })
}

/// Swap all occurrences of `x` and `y`, bound and free alike. A bijective
/// renaming, so the result is satisfiability-equivalent at swapped assignments.
pub(crate) fn swap_xy(f: &Formula) -> Formula {
    let sw = |v: &Var| -> Var {
        match v.as_str() {
            "x" => "y".to_string(),
            "y" => "x".to_string(),
            _ => v.clone(),
        }
    };
    match f {
        Formula::Top | Formula::Bot => f.clone(),
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(sw).collect()),
        Formula::Not(g) => Formula::Not(Box::new(swap_xy(g))),
        Formula::And(a, b) => Formula::And(Box::new(swap_xy(a)), Box::new(swap_xy(b))),
        Formula::Or(a, b) => Formula::Or(Box::new(swap_xy(a)), Box::new(swap_xy(b))),
        Formula::Forall(v, g) => Formula::Forall(sw(v), Box::new(swap_xy(g))),
        Formula::Exists(v, g) => Formula::Exists(sw(v), Box::new(swap_xy(g))),
        Formula::Box(v, g) => Formula::Box(sw(v), Box::new(swap_xy(g))),
        Formula::Dia(v, g) => Formula::Dia(sw(v), Box::new(swap_xy(g))),
    }
}

/// Maximum number of nested modalities. Quantifiers do not add depth.
pub fn modal_depth(f: &Formula) -> usize {
    match f {
        Formula::Top | Formula::Bot | Formula::Atom(..) => 0,
        Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => modal_depth(g),
        Formula::And(a, b) | Formula::Or(a, b) => modal_depth(a).max(modal_depth(b)),
        Formula::Box(_, g) | Formula::Dia(_, g) => 1 + modal_depth(g),
    }
}

/// Push negations down to atoms using the modal and quantifier dualities.
pub fn to_nnf(f: &Formula) -> Formula {
    nnf_pos(f)
}

fn nnf_pos(f: &Formula) -> Formula {
    match f {
        Formula::Top | Formula::Bot | Formula::Atom(..) => f.clone(),
        Formula::Not(g) => nnf_neg(g),
        Formula::And(a, b) => and(nnf_pos(a), nnf_pos(b)),
        Formula::Or(a, b) => or(nnf_pos(a), nnf_pos(b)),
        Formula::Forall(v, g) => Formula::Forall(v.clone(), Box::new(nnf_pos(g))),
        Formula::Exists(v, g) => Formula::Exists(v.clone(), Box::new(nnf_pos(g))),
        Formula::Box(v, g) => Formula::Box(v.clone(), Box::new(nnf_pos(g))),
        Formula::Dia(v, g) => Formula::Dia(v.clone(), Box::new(nnf_pos(g))),
    }
}

fn nnf_neg(f: &Formula) -> Formula {
    match f {
        Formula::Top => Formula::Bot,
        Formula::Bot => Formula::Top,
        Formula::Atom(..) => not(f.clone()),
        Formula::Not(g) => nnf_pos(g),
        Formula::And(a, b) => or(nnf_neg(a), nnf_neg(b)),
        Formula::Or(a, b) => and(nnf_neg(a), nnf_neg(b)),
        Formula::Forall(v, g) => Formula::Exists(v.clone(), Box::new(nnf_neg(g))),
        Formula::Exists(v, g) => Formula::Forall(v.clone(), Box::new(nnf_neg(g))),
        Formula::Box(v, g) => Formula::Dia(v.clone(), Box::new(nnf_neg(g))),
        Formula::Dia(v, g) => Formula::Box(v.clone(), Box::new(nnf_neg(g))),
    }
}

pub fn is_nnf(f: &Formula) -> bool {
    match f {
        Formula::Top | Formula::Bot | Formula::Atom(..) => true,
        Formula::Not(g) => g.is_atomic(),
        Formula::And(a, b) | Formula::Or(a, b) => is_nnf(a) && is_nnf(b),
        Formula::Forall(_, g) | Formula::Exists(_, g) => is_nnf(g),
        Formula::Box(_, g) | Formula::Dia(_, g) => is_nnf(g),
    }
}

/// The canonical negation used by the subformula closure: strip one `Not`
/// if present, otherwise wrap one.
pub fn negate(f: &Formula) -> Formula {
    match f {
        Formula::Not(g) => g.as_ref().clone(),
        other => not(other.clone()),
    }
}

/// Canonical identification key: NNF plus sorted children of the
/// associative-commutative connectives. Used for subformula identity only.
pub fn canon_key(f: &Formula) -> String {
    let mut out = String::new();
    canon_rec(&nnf_pos(f), &mut out);
    out
}

fn canon_rec(f: &Formula, out: &mut String) {
    match f {
        Formula::Top => out.push('T'),
        Formula::Bot => out.push('F'),
        Formula::Atom(p, args) => {
            out.push('@');
            out.push_str(p);
            out.push('(');
            out.push_str(&args.join(","));
            out.push(')');
        }
        Formula::Not(g) => {
            out.push('!');
            canon_rec(g, out);
        }
        Formula::And(..) | Formula::Or(..) => {
            let is_and = matches!(f, Formula::And(..));
            let mut parts = Vec::new();
            flatten_ac(f, is_and, &mut parts);
            let mut keys: Vec<String> = parts
                .iter()
                .map(|p| {
                    let mut s = String::new();
                    canon_rec(p, &mut s);
                    s
                })
                .collect();
            keys.sort();
            out.push(if is_and { '&' } else { '|' });
            out.push('[');
            out.push_str(&keys.join(";"));
            out.push(']');
        }
        Formula::Forall(v, g) => {
            out.push('A');
            out.push_str(v);
            out.push('.');
            canon_rec(g, out);
        }
        Formula::Exists(v, g) => {
            out.push('E');
            out.push_str(v);
            out.push('.');
            canon_rec(g, out);
        }
        Formula::Box(v, g) => {
            out.push('#');
            out.push_str(v);
            out.push('.');
            canon_rec(g, out);
        }
        Formula::Dia(v, g) => {
            out.push('%');
            out.push_str(v);
            out.push('.');
            canon_rec(g, out);
        }
    }
}

fn flatten_ac<'a>(f: &'a Formula, is_and: bool, out: &mut Vec<&'a Formula>) {
    match (f, is_and) {
        (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
            flatten_ac(a, is_and, out);
            flatten_ac(b, is_and, out);
        }
        _ => out.push(f),
    }
}

/// Extract the predicate-name → arity map, rejecting inconsistent use.
pub fn signature(f: &Formula) -> Result<BTreeMap<PredName, usize>, SyntaxError> {
    let mut sig = BTreeMap::new();
    collect_sig(f, &mut sig)?;
    Ok(sig)
}

fn collect_sig(f: &Formula, sig: &mut BTreeMap<PredName, usize>) -> Result<(), SyntaxError> {
    match f {
        Formula::Top | Formula::Bot => Ok(()),
        Formula::Atom(p, args) => match sig.get(p) {
            Some(&n) if n != args.len() => Err(SyntaxError::ArityMismatch {
                pred: p.clone(),
                expected: n,
                found: args.len(),
            }),
            _ => {
                sig.insert(p.clone(), args.len());
                Ok(())
            }
        },
        Formula::Not(g)
        | Formula::Forall(_, g)
        | Formula::Exists(_, g)
        | Formula::Box(_, g)
        | Formula::Dia(_, g) => collect_sig(g, sig),
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect_sig(a, sig)?;
            collect_sig(b, sig)
        }
    }
}

// ---------------------------------------------------------------------------
// Subformula closure
// ---------------------------------------------------------------------------

/// The subformula closure SF(f): all subformulas of an NNF formula,
/// deduplicated modulo NNF-canonical identity, closed under single negation,
/// with `⊤` always present, sliced by modal depth.
///
/// Slice `h` contains exactly the members of modal depth at most `md(f) − h`,
/// so `SF⁰ ⊇ SF¹ ⊇ … ⊇ SF^md`.
#[derive(Debug, Clone)]
pub struct SubformulaClosure {
    members: Vec<Formula>,
    depths: Vec<usize>,
    index: HashMap<String, usize>,
    md: usize,
}

impl SubformulaClosure {
    pub fn build(f: &Formula) -> Result<Self, SyntaxError> {
        if !is_nnf(f) {
            return Err(SyntaxError::NotNnf);
        }
        let mut sf = SubformulaClosure {
            members: Vec::new(),
            depths: Vec::new(),
            index: HashMap::new(),
            md: modal_depth(f),
        };
        sf.add_subformulas(f);
        sf.add(&Formula::Top);
        // Close under single negation.
        let snapshot: Vec<Formula> = sf.members.clone();
        for m in &snapshot {
            sf.add(&negate(m));
        }
        Ok(sf)
    }

    fn add_subformulas(&mut self, f: &Formula) {
        self.add(f);
        match f {
            Formula::Top | Formula::Bot | Formula::Atom(..) => {}
            Formula::Not(g)
            | Formula::Forall(_, g)
            | Formula::Exists(_, g)
            | Formula::Box(_, g)
            | Formula::Dia(_, g) => self.add_subformulas(g),
            Formula::And(a, b) | Formula::Or(a, b) => {
                self.add_subformulas(a);
                self.add_subformulas(b);
            }
        }
    }

    fn add(&mut self, f: &Formula) {
        let key = canon_key(f);
        if !self.index.contains_key(&key) {
            self.index.insert(key, self.members.len());
            self.members.push(f.clone());
            self.depths.push(modal_depth(f));
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn md(&self) -> usize {
        self.md
    }

    pub fn member(&self, i: usize) -> &Formula {
        &self.members[i]
    }

    pub fn members(&self) -> &[Formula] {
        &self.members
    }

    pub fn index_of(&self, f: &Formula) -> Option<usize> {
        self.index.get(&canon_key(f)).copied()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.index_of(f).is_some()
    }

    /// Member indices of slice `h`: modal depth at most `md − h`.
    pub fn slice(&self, h: usize) -> Vec<usize> {
        assert!(h <= self.md, "slice height {h} exceeds modal depth {}", self.md);
        let cutoff = self.md - h;
        (0..self.members.len())
            .filter(|&i| self.depths[i] <= cutoff)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The worked-example sentence: forall x. [x][x] false &
    /// forall x. exists y. [x](<y> !p & exists y. <y> p)
    pub(crate) fn theta() -> Formula {
        and(
            forall("x", boxm("x", boxm("x", bot()))),
            forall(
                "x",
                exists(
                    "y",
                    boxm(
                        "x",
                        and(diam("y", not(prop("p"))), exists("y", diam("y", prop("p")))),
                    ),
                ),
            ),
        )
    }

    #[test]
    fn parse_first_example() {
        let f = parse_formula(
            "forall x. exists y. ([x] P(x,y) | <y> !P(x,y))",
            ParseMode::TwoVar,
        )
        .unwrap();
        let want = forall(
            "x",
            exists(
                "y",
                or(
                    boxm("x", atom("P", &["x", "y"])),
                    diam("y", not(atom("P", &["x", "y"]))),
                ),
            ),
        );
        assert_eq!(f, want);
    }

    #[test]
    fn parse_desugars_implication() {
        let f = parse_formula("p -> p", ParseMode::TwoVar).unwrap();
        assert_eq!(f, or(not(prop("p")), prop("p")));
    }

    #[test]
    fn parse_theta() {
        let f = parse_formula(
            "forall x. [x][x] false & forall x. exists y. [x](<y> !p & exists y. <y> p)",
            ParseMode::TwoVar,
        )
        .unwrap();
        assert_eq!(f, theta());
    }

    #[test]
    fn parse_iff_desugars() {
        let f = parse_formula("p <-> q", ParseMode::Full).unwrap();
        assert_eq!(
            f,
            and(
                or(not(prop("p")), prop("q")),
                or(not(prop("q")), prop("p"))
            )
        );
    }

    #[test]
    fn two_var_mode_rejects_other_variables() {
        let err = parse_formula("forall z. P(z)", ParseMode::TwoVar).unwrap_err();
        assert!(matches!(err, SyntaxError::VariableLimitExceeded { .. }));
        assert!(parse_formula("forall z. P(z)", ParseMode::Full).is_ok());
    }

    #[test]
    fn arity_mismatch_rejected() {
        let err = parse_formula("P(x) & P(x,y)", ParseMode::TwoVar).unwrap_err();
        assert!(matches!(err, SyntaxError::ArityMismatch { .. }));
    }

    #[test]
    fn parse_error_position() {
        let err = parse_formula("p & ", ParseMode::TwoVar).unwrap_err();
        assert!(matches!(err, SyntaxError::Parse { .. }));
    }

    #[test]
    fn render_examples() {
        assert_eq!(prop("p").render(), "p");
        assert_eq!(boxm("x", bot()).render(), "[x] false");
        let t = theta();
        assert_eq!(parse_formula(&t.render(), ParseMode::TwoVar).unwrap(), t);
    }

    #[test]
    fn free_vars_examples() {
        let fv = |f: &Formula| free_vars(f).into_iter().collect::<Vec<_>>();
        assert_eq!(fv(&boxm("x", prop("p"))), vec!["x"]);
        assert_eq!(fv(&forall("x", boxm("x", prop("p")))), Vec::<String>::new());
        assert_eq!(fv(&forall("x", boxm("y", atom("P", &["x", "y"])))), vec!["y"]);
    }

    #[test]
    fn substitute_examples() {
        assert_eq!(
            substitute(&boxm("x", atom("P", &["x"])), "x", "y").unwrap(),
            boxm("y", atom("P", &["y"]))
        );
        let f = forall("x", atom("P", &["x"]));
        assert_eq!(substitute(&f, "x", "y").unwrap(), f);
        assert_eq!(
            substitute(&diam("x", exists("x", atom("P", &["x"]))), "x", "y").unwrap(),
            diam("y", exists("x", atom("P", &["x"])))
        );
    }

    #[test]
    fn substitute_rejects_capture() {
        // y is not free, but a binder of y would capture the renamed x.
        let f = forall("y", atom("P", &["x"]));
        assert!(matches!(
            substitute(&f, "x", "y"),
            Err(SyntaxError::Capture { .. })
        ));
        // and the plain precondition violation.
        let g = and(atom("P", &["x"]), atom("Q", &["y"]));
        assert!(matches!(
            substitute(&g, "x", "y"),
            Err(SyntaxError::Capture { .. })
        ));
    }

    #[test]
    fn modal_depth_examples() {
        assert_eq!(modal_depth(&prop("p")), 0);
        assert_eq!(modal_depth(&theta()), 2);
        assert_eq!(
            modal_depth(&boxm("x", diam("y", boxm("x", prop("p"))))),
            3
        );
        assert_eq!(modal_depth(&forall("x", exists("y", prop("p")))), 0);
    }

    #[test]
    fn nnf_examples() {
        assert_eq!(
            to_nnf(&not(boxm("x", prop("p")))),
            diam("x", not(prop("p")))
        );
        assert_eq!(
            to_nnf(&not(forall("x", atom("P", &["x"])))),
            exists("x", not(atom("P", &["x"])))
        );
        assert_eq!(to_nnf(&not(not(prop("p")))), prop("p"));
        assert_eq!(to_nnf(&not(top())), bot());
    }

    #[test]
    fn sf_closure_atom() {
        let sf = SubformulaClosure::build(&prop("p")).unwrap();
        assert_eq!(sf.len(), 4); // p, ⊤, ¬p, ¬⊤
        assert!(sf.contains(&prop("p")));
        assert!(sf.contains(&not(prop("p"))));
        assert!(sf.contains(&top()));
        assert!(sf.contains(&not(top())));
        assert_eq!(sf.slice(0).len(), 4);
        assert_eq!(sf.md(), 0);
    }

    #[test]
    fn sf_closure_box() {
        let f = boxm("x", prop("p"));
        let sf = SubformulaClosure::build(&f).unwrap();
        assert!(sf.contains(&f));
        let sf1 = sf.slice(1);
        let members: Vec<&Formula> = sf1.iter().map(|&i| sf.member(i)).collect();
        assert_eq!(members.len(), 4); // p, ¬p, ⊤, ¬⊤
        assert!(!members.contains(&&f));
    }

    #[test]
    fn sf_closure_theta_slices() {
        let sf = SubformulaClosure::build(&theta()).unwrap();
        assert_eq!(sf.md(), 2);
        let dia_y_p = diam("y", prop("p"));
        let sf1: Vec<usize> = sf.slice(1);
        let sf2: Vec<usize> = sf.slice(2);
        let idx = sf.index_of(&dia_y_p).unwrap();
        assert!(sf1.contains(&idx));
        assert!(!sf2.contains(&idx));
        // nested slices
        let s0 = sf.slice(0);
        assert!(sf1.iter().all(|i| s0.contains(i)));
        assert!(sf2.iter().all(|i| sf1.contains(i)));
        // ⊤ in every slice
        let t = sf.index_of(&top()).unwrap();
        assert!(sf2.contains(&t));
    }

    #[test]
    fn closure_size_bound() {
        // |SF(f)| ≤ 2·occurrences + 2
        let f = theta();
        fn occurrences(f: &Formula) -> usize {
            1 + match f {
                Formula::Top | Formula::Bot | Formula::Atom(..) => 0,
                Formula::Not(g)
                | Formula::Forall(_, g)
                | Formula::Exists(_, g)
                | Formula::Box(_, g)
                | Formula::Dia(_, g) => occurrences(g),
                Formula::And(a, b) | Formula::Or(a, b) => occurrences(a) + occurrences(b),
            }
        }
        let sf = SubformulaClosure::build(&f).unwrap();
        assert!(sf.len() <= 2 * occurrences(&f) + 2);
    }
}
