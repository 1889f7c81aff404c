//! Grammar normalization and the translations between grammar classes and
//! Lambek-fragment lexicons.
//!
//! | from | to | requires |
//! |------|----|----------|
//! | [`Cfg`] | [`LambekGrammar`] over `/` | Greibach normal form ([`cfg_to_lambek`]) |
//! | [`LambekGrammar`] over `/` | [`Cfg`] | [`lambek_to_cfg`] |
//! | linear [`Cfg`] | degree-one lexicon over `/`, `\` | [`lcfg_to_lambek`] / [`lambek_to_lcfg`] |
//! | right-regular [`Cfg`] | degree-one lexicon over `/` | [`reg_to_lambek`] / [`lambek_to_reg`] |
//!
//! Product types are rejected by every translation.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use indexmap::{IndexMap, IndexSet};
use thiserror::Error;

use crate::grammar::{Cfg, GrammarError, LambekGrammar, Production, Symbol};
use crate::types::Type;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("grammar is not in Greibach normal form: `{0}`")]
    NotGreibach(Production),
    #[error("grammar is not linear: `{0}`")]
    NotLinear(Production),
    #[error("grammar is not right-regular: `{0}`")]
    NotRightRegular(Production),
    #[error("type `{ty}` for `{symbol}` is outside the source fragment ({reason})")]
    OutsideFragment {
        symbol: String,
        ty: Type,
        reason: &'static str,
    },
    #[error("`{0}` names both a primitive type and an alphabet symbol")]
    NameClash(String),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
}

/// What a translation did, for display.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TranslationReport {
    pub input: String,
    pub output: String,
    /// Identifiers in the output that did not occur in the input.
    pub fresh_symbols: Vec<String>,
    pub warnings: Vec<String>,
}

impl TranslationReport {
    pub fn between(input: &Summary, output: &Summary) -> Self {
        let fresh_symbols = output
            .identifiers
            .iter()
            .filter(|s| !input.identifiers.contains(*s))
            .cloned()
            .collect();
        TranslationReport {
            input: input.text.clone(),
            output: output.text.clone(),
            fresh_symbols,
            warnings: Vec::new(),
        }
    }
}

impl fmt::Display for TranslationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "input:  {}", self.input)?;
        writeln!(f, "output: {}", self.output)?;
        if !self.fresh_symbols.is_empty() {
            writeln!(f, "fresh:  {}", self.fresh_symbols.join(" "))?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

/// Text summary plus the identifier set of a grammar or lexicon.
#[derive(Debug, Clone)]
pub struct Summary {
    pub text: String,
    pub identifiers: IndexSet<String>,
}

impl From<&Cfg> for Summary {
    fn from(g: &Cfg) -> Self {
        Summary {
            text: g.summary(),
            identifiers: g.nonterminals().iter().chain(g.terminals()).cloned().collect(),
        }
    }
}

impl From<&LambekGrammar> for Summary {
    fn from(lg: &LambekGrammar) -> Self {
        Summary {
            text: lg.summary(),
            identifiers: lg.primitives().iter().chain(lg.alphabet()).cloned().collect(),
        }
    }
}

fn rebuild(g: &Cfg, nonterminals: impl IntoIterator<Item = String>, productions: impl IntoIterator<Item = Production>) -> Cfg {
    Cfg::new(nonterminals, g.terminals().iter().cloned(), g.start(), productions)
        .expect("transformations preserve grammar invariants")
}

/// Replaces unit productions `A -> B` by the non-unit productions of every
/// nonterminal reachable from `A` through unit steps.
pub fn remove_unit_productions(g: &Cfg) -> Cfg {
    let mut out = BTreeSet::new();
    for a in g.nonterminals() {
        // unit closure of a, including a itself
        let mut seen: IndexSet<&str> = IndexSet::new();
        seen.insert(a.as_str());
        let mut i = 0;
        while i < seen.len() {
            let b = seen[i];
            for p in g.productions_for(b) {
                match p.rhs.as_slice() {
                    [Symbol::Nonterminal(c)] => {
                        seen.insert(c.as_str());
                    }
                    _ => {
                        out.insert(Production::new(a.clone(), p.rhs.clone()));
                    }
                }
            }
            i += 1;
        }
    }
    rebuild(g, g.nonterminals().iter().cloned(), out)
}

/// Drops unproductive nonterminals, then unreachable ones. The start symbol
/// is always kept.
pub fn prune_useless(g: &Cfg) -> Cfg {
    let mut productive: HashSet<&str> = HashSet::new();
    loop {
        let before = productive.len();
        for p in g.productions() {
            if p.rhs.iter().all(|s| s.as_nonterminal().is_none_or(|n| productive.contains(n))) {
                productive.insert(&p.lhs);
            }
        }
        if productive.len() == before {
            break;
        }
    }
    let useful_rule = |p: &&Production| {
        productive.contains(p.lhs.as_str()) && p.rhs.iter().all(|s| s.as_nonterminal().is_none_or(|n| productive.contains(n)))
    };
    let mut reachable: IndexSet<&str> = IndexSet::new();
    reachable.insert(g.start());
    let mut i = 0;
    while i < reachable.len() {
        let a = reachable[i];
        for p in g.productions_for(a).filter(useful_rule) {
            for n in p.rhs.iter().filter_map(Symbol::as_nonterminal) {
                reachable.insert(n);
            }
        }
        i += 1;
    }
    let keep: Vec<String> = g
        .nonterminals()
        .iter()
        .filter(|n| reachable.contains(n.as_str()))
        .cloned()
        .collect();
    let productions: Vec<Production> = g
        .productions()
        .iter()
        .filter(useful_rule)
        .filter(|p| reachable.contains(p.lhs.as_str()))
        .cloned()
        .collect();
    rebuild(g, keep, productions)
}

struct FreshNames {
    taken: HashSet<String>,
}

impl FreshNames {
    fn new(g: &Cfg) -> Self {
        FreshNames {
            taken: g.nonterminals().iter().chain(g.terminals()).cloned().collect(),
        }
    }

    fn claim(&mut self, base: String) -> String {
        let mut name = base;
        while self.taken.contains(&name) {
            name.push('\'');
        }
        self.taken.insert(name.clone());
        name
    }
}

type Rules = IndexMap<String, Vec<Vec<Symbol>>>;

fn leading_nonterminal(rhs: &[Symbol]) -> Option<&str> {
    rhs.first().and_then(Symbol::as_nonterminal)
}

/// Replaces every rule of `lhs` whose first symbol satisfies `pick` by the
/// expansions of that symbol. Returns whether anything changed.
fn substitute_leading(rules: &mut Rules, lhs: &str, pick: impl Fn(&str) -> bool) -> bool {
    let current = rules[lhs].clone();
    let mut changed = false;
    let mut next: Vec<Vec<Symbol>> = Vec::new();
    for rhs in current {
        match leading_nonterminal(&rhs) {
            Some(b) if pick(b) => {
                changed = true;
                for expansion in rules[b].clone() {
                    let mut r = expansion;
                    r.extend_from_slice(&rhs[1..]);
                    if !next.contains(&r) {
                        next.push(r);
                    }
                }
            }
            _ => {
                if !next.contains(&rhs) {
                    next.push(rhs);
                }
            }
        }
    }
    rules[lhs] = next;
    changed
}

/// Converts an ε-free grammar to Greibach normal form.
///
/// Pipeline: unit removal and useless-symbol pruning; left-recursion
/// elimination over the declaration order of nonterminals, introducing
/// helpers `X_1, X_2, ...`; back-substitution so every right-hand side
/// starts with a terminal; finally terminals after the first position are
/// replaced by wrappers `T_a -> a`. Fresh names that collide with existing
/// identifiers get primes appended. Grammars already in normal form are
/// returned unchanged.
pub fn to_gnf(g: &Cfg) -> Cfg {
    to_gnf_with_report(g).0
}

pub fn to_gnf_with_report(g: &Cfg) -> (Cfg, TranslationReport) {
    if g.classify().is_gnf {
        let s = Summary::from(g);
        return (g.clone(), TranslationReport::between(&s, &s));
    }
    let mut fresh = FreshNames::new(g);
    let cleaned = prune_useless(&remove_unit_productions(g));
    let order: Vec<String> = cleaned.nonterminals().iter().cloned().collect();
    let index: HashMap<&str, usize> = order.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut rules: Rules = order
        .iter()
        .map(|n| (n.clone(), cleaned.productions_for(n).map(|p| p.rhs.clone()).collect()))
        .collect();
    let mut helpers: Vec<String> = Vec::new();

    for (i, ai) in order.iter().enumerate() {
        for aj in &order[..i] {
            substitute_leading(&mut rules, ai, |b| b == aj);
        }
        let (recursive, others): (Vec<_>, Vec<_>) = rules[ai]
            .iter()
            .cloned()
            .partition(|rhs| leading_nonterminal(rhs) == Some(ai.as_str()));
        if recursive.is_empty() {
            continue;
        }
        let x = fresh.claim(format!("X_{}", helpers.len() + 1));
        let x_sym = Symbol::n(x.clone());
        let tails: Vec<Vec<Symbol>> = recursive.into_iter().map(|rhs| rhs[1..].to_vec()).collect();
        let with_x = |rs: &[Vec<Symbol>]| -> Vec<Vec<Symbol>> {
            let mut out = rs.to_vec();
            out.extend(rs.iter().map(|r| {
                let mut r = r.clone();
                r.push(x_sym.clone());
                r
            }));
            out
        };
        rules[ai] = with_x(&others);
        rules.insert(x.clone(), with_x(&tails));
        helpers.push(x);
    }

    for (i, ai) in order.iter().enumerate().rev() {
        while substitute_leading(&mut rules, ai, |b| index.get(b).is_some_and(|&j| j > i)) {}
    }
    for x in &helpers {
        // helper tails may start with any original nonterminal, never a helper
        while substitute_leading(&mut rules, x, |b| index.contains_key(b)) {}
    }

    let mut wrappers: BTreeMap<String, String> = BTreeMap::new();
    let mut productions = Vec::new();
    for (lhs, rhss) in &rules {
        for rhs in rhss {
            let mut out = vec![rhs[0].clone()];
            for s in &rhs[1..] {
                match s {
                    Symbol::Terminal(a) => {
                        let w = wrappers
                            .entry(a.clone())
                            .or_insert_with(|| fresh.claim(format!("T_{a}")))
                            .clone();
                        out.push(Symbol::n(w));
                    }
                    n => out.push(n.clone()),
                }
            }
            productions.push(Production::new(lhs.clone(), out));
        }
    }
    for (a, w) in &wrappers {
        productions.push(Production::new(w.clone(), vec![Symbol::t(a.clone())]));
    }
    let nonterminals = order
        .iter()
        .chain(&helpers)
        .chain(wrappers.values())
        .cloned();
    let out = prune_useless(&rebuild(g, nonterminals, productions));
    debug_assert!(out.classify().is_gnf, "{out}");
    let mut report = TranslationReport::between(&Summary::from(g), &Summary::from(&out));
    let dropped: Vec<&String> = g
        .nonterminals()
        .iter()
        .filter(|n| !out.nonterminals().contains(*n))
        .collect();
    if !dropped.is_empty() {
        let names: Vec<&str> = dropped.iter().map(|s| s.as_str()).collect();
        report.warnings.push(format!("removed useless nonterminals: {}", names.join(" ")));
    }
    (out, report)
}

/// The Lambek nonterminal name for a type: primitives keep their name,
/// compound types use their fully parenthesized form.
pub fn type_symbol(t: &Type) -> String {
    match t.as_primitive() {
        Some(p) => p.to_string(),
        None => t.fully_parenthesized(),
    }
}

fn lexicon_from<'a>(g: &'a Cfg, entry: impl Fn(&'a Production) -> Type) -> Result<LambekGrammar, TransformError> {
    let mut lexicon: BTreeMap<String, Vec<Type>> = BTreeMap::new();
    for p in g.productions() {
        let a = p
            .rhs
            .iter()
            .find(|s| s.is_terminal())
            .expect("translated rules contain one terminal");
        lexicon.entry(a.name().to_string()).or_default().push(entry(p));
    }
    Ok(LambekGrammar::new(
        g.nonterminals().iter().cloned(),
        g.terminals().iter().cloned(),
        g.start(),
        lexicon,
    )?)
}

/// `A -> a` gives `A ∈ f(a)`; `A -> a B1 ... Bn` gives
/// `(...((A/Bn)/Bn-1)/...)/B1 ∈ f(a)`.
pub fn cfg_to_lambek(g: &Cfg) -> Result<LambekGrammar, TransformError> {
    if let Some(p) = g.classify().first_not_greibach() {
        return Err(TransformError::NotGreibach(p.clone()));
    }
    lexicon_from(g, |p| {
        p.rhs[1..]
            .iter()
            .rev()
            .fold(Type::prim(&p.lhs), |acc, b| Type::over(acc, Type::prim(b.name())))
    })
}

fn check_lexicon(lg: &LambekGrammar, ok: impl Fn(&Type) -> bool, reason: &'static str) -> Result<(), TransformError> {
    for (symbol, types) in lg.lexicon() {
        if let Some(ty) = types.iter().find(|t| !ok(t)) {
            return Err(TransformError::OutsideFragment {
                symbol: symbol.clone(),
                ty: ty.clone(),
                reason,
            });
        }
    }
    if let Some(x) = lg.primitives().iter().find(|p| lg.alphabet().contains(*p)) {
        return Err(TransformError::NameClash(x.clone()));
    }
    Ok(())
}

fn slash_only(t: &Type) -> bool {
    t.in_fragment(&crate::config::TypeRestriction::new(crate::config::ConnectiveSet::SLASH, None))
}

/// Builds a grammar whose nonterminals are all subtypes of lexicon types.
/// For every `τ ∈ f(a)` and every spine split of `τ` into head `α` and
/// arguments `β1 ... βn`, adds `α -> a β1 ... βn`. Useless nonterminals are
/// pruned afterwards.
pub fn lambek_to_cfg(lg: &LambekGrammar) -> Result<Cfg, TransformError> {
    lambek_to_cfg_with(lg, true)
}

/// [`lambek_to_cfg`] with pruning optional.
pub fn lambek_to_cfg_with(lg: &LambekGrammar, prune: bool) -> Result<Cfg, TransformError> {
    check_lexicon(lg, slash_only, "only / is allowed")?;
    let mut subtypes: BTreeSet<Type> = BTreeSet::new();
    for t in lg.all_types() {
        t.collect_subtypes(&mut subtypes);
    }
    let mut nonterminals: IndexSet<String> = IndexSet::new();
    nonterminals.insert(lg.distinguished().to_string());
    nonterminals.extend(subtypes.iter().map(type_symbol));
    let mut productions = Vec::new();
    for (a, types) in lg.lexicon() {
        for tau in types {
            for spine in tau.spine_decompositions() {
                let mut rhs = vec![Symbol::t(a.clone())];
                rhs.extend(spine.args.iter().map(|b| Symbol::n(type_symbol(b))));
                productions.push(Production::new(type_symbol(&spine.head), rhs));
            }
        }
    }
    let g = Cfg::new(nonterminals, lg.alphabet().iter().cloned(), lg.distinguished(), productions)?;
    Ok(if prune { prune_useless(&g) } else { g })
}

/// `A -> a B` gives `A/B`, `A -> B a` gives `B\A`, `A -> a` gives `A`.
pub fn lcfg_to_lambek(g: &Cfg) -> Result<LambekGrammar, TransformError> {
    if let Some(p) = g.classify().first_nonlinear() {
        return Err(TransformError::NotLinear(p.clone()));
    }
    lexicon_from(g, linear_type)
}

fn linear_type(p: &Production) -> Type {
    let lhs = Type::prim(&p.lhs);
    match p.rhs.as_slice() {
        [Symbol::Terminal(_)] => lhs,
        [Symbol::Terminal(_), Symbol::Nonterminal(b)] => Type::over(lhs, Type::prim(b)),
        [Symbol::Nonterminal(b), Symbol::Terminal(_)] => Type::under(Type::prim(b), lhs),
        _ => unreachable!("checked linear"),
    }
}

fn linear_production(symbol: &str, t: &Type) -> Production {
    let a = Symbol::t(symbol);
    match t {
        Type::Prim(x) => Production::new(x.as_ref(), vec![a]),
        Type::Right(x, b) => Production::new(x.as_primitive().unwrap(), vec![a, Symbol::n(b.as_primitive().unwrap())]),
        Type::Left(b, x) => Production::new(x.as_primitive().unwrap(), vec![Symbol::n(b.as_primitive().unwrap()), a]),
        Type::Product(..) => unreachable!("checked product-free"),
    }
}

fn degree_one(t: &Type, connectives: crate::config::ConnectiveSet) -> bool {
    t.in_fragment(&crate::config::TypeRestriction::new(connectives, Some(1)))
}

fn grammar_from_lexicon(lg: &LambekGrammar) -> Result<Cfg, TransformError> {
    let productions: Vec<Production> = lg
        .lexicon()
        .iter()
        .flat_map(|(a, types)| types.iter().map(move |t| linear_production(a, t)))
        .collect();
    Ok(Cfg::new(
        lg.primitives().iter().cloned(),
        lg.alphabet().iter().cloned(),
        lg.distinguished(),
        productions,
    )?)
}

/// Inverse of [`lcfg_to_lambek`].
pub fn lambek_to_lcfg(lg: &LambekGrammar) -> Result<Cfg, TransformError> {
    check_lexicon(
        lg,
        |t| degree_one(t, crate::config::ConnectiveSet::SLASHES),
        "degree at most 1 over / and \\",
    )?;
    grammar_from_lexicon(lg)
}

/// [`lcfg_to_lambek`] restricted to right-linear and terminal rules.
pub fn reg_to_lambek(g: &Cfg) -> Result<LambekGrammar, TransformError> {
    if let Some(p) = g.classify().first_not_right_linear() {
        return Err(TransformError::NotRightRegular(p.clone()));
    }
    lexicon_from(g, linear_type)
}

/// Inverse of [`reg_to_lambek`].
pub fn lambek_to_reg(lg: &LambekGrammar) -> Result<Cfg, TransformError> {
    check_lexicon(
        lg,
        |t| degree_one(t, crate::config::ConnectiveSet::SLASH),
        "degree at most 1 over /",
    )?;
    grammar_from_lexicon(lg)
}
