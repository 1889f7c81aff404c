//! Context-free grammars and Lambek grammars (type lexicons).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexSet;
use thiserror::Error;

use crate::config::TypeRestriction;
use crate::types::{is_identifier, parse_type, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("`{0}` is not a valid identifier")]
    BadIdentifier(String),
    #[error("`{0}` is declared both as a terminal and a nonterminal")]
    Overlap(String),
    #[error("start symbol `{0}` is not a nonterminal")]
    BadStart(String),
    #[error("production for `{lhs}` has an empty right-hand side")]
    EmptyRhs { lhs: String },
    #[error("`{0}` is not a declared nonterminal")]
    UnknownNonterminal(String),
    #[error("`{0}` is not a declared terminal")]
    UnknownTerminal(String),
    #[error("distinguished type `{0}` is not a declared primitive")]
    BadDistinguished(String),
    #[error("type `{ty}` for `{symbol}` uses undeclared primitive `{primitive}`")]
    UnknownPrimitive {
        symbol: String,
        ty: Type,
        primitive: String,
    },
    #[error("lexicon entry `{0}` is not in the alphabet")]
    UnknownSymbol(String),
}

/// Symbol names are identifiers, or for nonterminals standing for compound
/// types, the fully parenthesized type itself.
pub fn is_symbol_name(s: &str) -> bool {
    is_identifier(s)
        || (s.starts_with('(')
            && parse_type(s).is_ok_and(|t| !t.is_primitive() && t.fully_parenthesized() == s))
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Terminal(String),
    Nonterminal(String),
}

impl Symbol {
    pub fn t(name: impl Into<String>) -> Self {
        Symbol::Terminal(name.into())
    }

    pub fn n(name: impl Into<String>) -> Self {
        Symbol::Nonterminal(name.into())
    }

    pub fn name(&self) -> &str {
        match self {
            Symbol::Terminal(s) | Symbol::Nonterminal(s) => s,
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self, Symbol::Terminal(_))
    }

    pub fn as_nonterminal(&self) -> Option<&str> {
        match self {
            Symbol::Nonterminal(s) => Some(s),
            Symbol::Terminal(_) => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Terminal(s) => write!(f, "'{s}'"),
            Symbol::Nonterminal(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Production {
    pub lhs: String,
    pub rhs: Vec<Symbol>,
}

impl Production {
    pub fn new(lhs: impl Into<String>, rhs: Vec<Symbol>) -> Self {
        Production {
            lhs: lhs.into(),
            rhs,
        }
    }

    /// `A -> a`
    pub fn is_terminal_rule(&self) -> bool {
        matches!(self.rhs.as_slice(), [Symbol::Terminal(_)])
    }

    /// `A -> a B`, or `A -> a`.
    pub fn is_right_linear(&self) -> bool {
        self.is_terminal_rule()
            || matches!(self.rhs.as_slice(), [Symbol::Terminal(_), Symbol::Nonterminal(_)])
    }

    /// `A -> B a`, or `A -> a`.
    pub fn is_left_linear(&self) -> bool {
        self.is_terminal_rule()
            || matches!(self.rhs.as_slice(), [Symbol::Nonterminal(_), Symbol::Terminal(_)])
    }

    /// `A -> a B1 ... Bn` with n >= 0.
    pub fn is_greibach(&self) -> bool {
        match self.rhs.split_first() {
            Some((Symbol::Terminal(_), rest)) => rest.iter().all(|s| !s.is_terminal()),
            _ => false,
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.rhs.as_slice(), [Symbol::Nonterminal(_)])
    }
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.lhs)?;
        for s in &self.rhs {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An ε-free context-free grammar.
///
/// Nonterminals and terminals keep their declaration order, which drives the
/// normal-form conversions. Productions are kept as a sorted set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cfg {
    nonterminals: IndexSet<String>,
    terminals: IndexSet<String>,
    start: String,
    productions: BTreeSet<Production>,
}

impl Cfg {
    pub fn new<N, T, P>(nonterminals: N, terminals: T, start: impl Into<String>, productions: P) -> Result<Cfg, GrammarError>
    where
        N: IntoIterator,
        N::Item: Into<String>,
        T: IntoIterator,
        T::Item: Into<String>,
        P: IntoIterator<Item = Production>,
    {
        let nonterminals: IndexSet<String> = nonterminals.into_iter().map(Into::into).collect();
        let terminals: IndexSet<String> = terminals.into_iter().map(Into::into).collect();
        let start = start.into();
        for name in nonterminals.iter().chain(&terminals) {
            if !is_symbol_name(name) {
                return Err(GrammarError::BadIdentifier(name.clone()));
            }
        }
        if let Some(x) = nonterminals.iter().find(|n| terminals.contains(*n)) {
            return Err(GrammarError::Overlap(x.clone()));
        }
        if !nonterminals.contains(&start) {
            return Err(GrammarError::BadStart(start));
        }
        let productions: BTreeSet<Production> = productions.into_iter().collect();
        for p in &productions {
            if !nonterminals.contains(&p.lhs) {
                return Err(GrammarError::UnknownNonterminal(p.lhs.clone()));
            }
            if p.rhs.is_empty() {
                return Err(GrammarError::EmptyRhs { lhs: p.lhs.clone() });
            }
            for s in &p.rhs {
                match s {
                    Symbol::Terminal(t) if !terminals.contains(t) => {
                        return Err(GrammarError::UnknownTerminal(t.clone()))
                    }
                    Symbol::Nonterminal(n) if !nonterminals.contains(n) => {
                        return Err(GrammarError::UnknownNonterminal(n.clone()))
                    }
                    _ => {}
                }
            }
        }
        Ok(Cfg {
            nonterminals,
            terminals,
            start,
            productions,
        })
    }

    /// Builds a grammar from `(lhs, rhs)` pairs of whitespace-separated
    /// names; anything in `terminals` is a terminal, and nonterminals are
    /// declared in order of first appearance as a left-hand side.
    pub fn from_rules(terminals: &[&str], rules: &[(&str, &str)]) -> Result<Cfg, GrammarError> {
        let mut nonterminals: IndexSet<String> = IndexSet::new();
        for (lhs, _) in rules {
            nonterminals.insert(lhs.to_string());
        }
        let productions: Vec<Production> = rules
            .iter()
            .map(|(lhs, rhs)| {
                let rhs = rhs
                    .split_whitespace()
                    .map(|s| {
                        if terminals.contains(&s) {
                            Symbol::t(s)
                        } else {
                            Symbol::n(s)
                        }
                    })
                    .collect();
                Production::new(*lhs, rhs)
            })
            .collect();
        let start = rules.first().map(|(l, _)| l.to_string()).unwrap_or_default();
        Cfg::new(nonterminals, terminals.iter().copied(), start, productions)
    }

    pub fn nonterminals(&self) -> &IndexSet<String> {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &IndexSet<String> {
        &self.terminals
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn productions(&self) -> &BTreeSet<Production> {
        &self.productions
    }

    pub fn productions_for<'a>(&'a self, lhs: &'a str) -> impl Iterator<Item = &'a Production> + 'a {
        self.productions.iter().filter(move |p| p.lhs == lhs)
    }

    pub fn is_terminal(&self, name: &str) -> bool {
        self.terminals.contains(name)
    }

    pub fn classify(&self) -> Classification {
        classify_cfg(self)
    }

    pub fn summary(&self) -> String {
        format!(
            "{} nonterminals, {} terminals, {} productions, start {}",
            self.nonterminals.len(),
            self.terminals.len(),
            self.productions.len(),
            self.start
        )
    }
}

impl fmt::Display for Cfg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.nonterminals {
            for p in self.productions_for(n) {
                writeln!(f, "{p}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductionClass {
    pub right_linear: bool,
    pub left_linear: bool,
    pub greibach: bool,
}

/// Shape flags for a grammar. Terminal rules `A -> a` count as both right-
/// and left-linear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub productions: Vec<(Production, ProductionClass)>,
    pub is_lcfg: bool,
    pub is_right_regular: bool,
    pub is_left_regular: bool,
    pub is_gnf: bool,
}

impl Classification {
    /// First production that is neither right- nor left-linear.
    pub fn first_nonlinear(&self) -> Option<&Production> {
        self.productions
            .iter()
            .find(|(_, c)| !c.right_linear && !c.left_linear)
            .map(|(p, _)| p)
    }

    pub fn first_not_right_linear(&self) -> Option<&Production> {
        self.productions.iter().find(|(_, c)| !c.right_linear).map(|(p, _)| p)
    }

    pub fn first_not_greibach(&self) -> Option<&Production> {
        self.productions.iter().find(|(_, c)| !c.greibach).map(|(p, _)| p)
    }
}

pub fn classify_cfg(g: &Cfg) -> Classification {
    let productions: Vec<(Production, ProductionClass)> = g
        .productions
        .iter()
        .map(|p| {
            let class = ProductionClass {
                right_linear: p.is_right_linear(),
                left_linear: p.is_left_linear(),
                greibach: p.is_greibach(),
            };
            (p.clone(), class)
        })
        .collect();
    let all = |f: fn(&ProductionClass) -> bool| productions.iter().all(|(_, c)| f(c));
    Classification {
        is_lcfg: all(|c| c.right_linear || c.left_linear),
        is_right_regular: all(|c| c.right_linear),
        is_left_regular: all(|c| c.left_linear),
        is_gnf: all(|c| c.greibach),
        productions,
    }
}

/// A Lambek grammar: primitive types, an alphabet, a distinguished primitive
/// and a lexicon assigning each symbol a finite set of types.
///
/// Symbols without lexicon entries are allowed and simply have no types.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LambekGrammar {
    primitives: BTreeSet<String>,
    alphabet: BTreeSet<String>,
    distinguished: String,
    lexicon: BTreeMap<String, BTreeSet<Type>>,
}

impl LambekGrammar {
    pub fn new<P, A, L, S>(primitives: P, alphabet: A, distinguished: impl Into<String>, lexicon: L) -> Result<Self, GrammarError>
    where
        P: IntoIterator,
        P::Item: Into<String>,
        A: IntoIterator,
        A::Item: Into<String>,
        L: IntoIterator<Item = (String, S)>,
        S: IntoIterator<Item = Type>,
    {
        let primitives: BTreeSet<String> = primitives.into_iter().map(Into::into).collect();
        let alphabet: BTreeSet<String> = alphabet.into_iter().map(Into::into).collect();
        let distinguished = distinguished.into();
        for name in primitives.iter().chain(&alphabet) {
            if !is_identifier(name) {
                return Err(GrammarError::BadIdentifier(name.clone()));
            }
        }
        if !primitives.contains(&distinguished) {
            return Err(GrammarError::BadDistinguished(distinguished));
        }
        let mut map: BTreeMap<String, BTreeSet<Type>> = BTreeMap::new();
        for (symbol, types) in lexicon {
            if !alphabet.contains(&symbol) {
                return Err(GrammarError::UnknownSymbol(symbol));
            }
            for ty in types {
                let unknown = ty.primitives().into_iter().find(|p| !primitives.contains(*p)).map(str::to_string);
                if let Some(primitive) = unknown {
                    return Err(GrammarError::UnknownPrimitive { symbol, primitive, ty });
                }
                map.entry(symbol.clone()).or_default().insert(ty);
            }
        }
        map.retain(|_, v| !v.is_empty());
        Ok(LambekGrammar {
            primitives,
            alphabet,
            distinguished,
            lexicon: map,
        })
    }

    /// Builds a grammar from `symbol -> "T1, T2"` entries in type syntax.
    /// Primitives and alphabet are inferred.
    pub fn from_entries(distinguished: &str, entries: &[(&str, &str)]) -> Result<Self, GrammarError> {
        let mut primitives: BTreeSet<String> = [distinguished.to_string()].into();
        let mut lexicon: Vec<(String, Vec<Type>)> = Vec::new();
        for (sym, types) in entries {
            let types: Vec<Type> = types
                .split(',')
                .map(|s| parse_type(s).map_err(|_| GrammarError::BadIdentifier(s.trim().to_string())))
                .collect::<Result<_, _>>()?;
            for t in &types {
                primitives.extend(t.primitives().into_iter().map(str::to_string));
            }
            lexicon.push((sym.to_string(), types));
        }
        let alphabet: Vec<String> = entries.iter().map(|(s, _)| s.to_string()).collect();
        LambekGrammar::new(primitives, alphabet, distinguished, lexicon)
    }

    pub fn primitives(&self) -> &BTreeSet<String> {
        &self.primitives
    }

    pub fn alphabet(&self) -> &BTreeSet<String> {
        &self.alphabet
    }

    pub fn distinguished(&self) -> &str {
        &self.distinguished
    }

    pub fn distinguished_type(&self) -> Type {
        Type::prim(&self.distinguished)
    }

    pub fn lexicon(&self) -> &BTreeMap<String, BTreeSet<Type>> {
        &self.lexicon
    }

    /// `f(a)`; empty for symbols without entries.
    pub fn types_for(&self, symbol: &str) -> impl Iterator<Item = &Type> {
        self.lexicon.get(symbol).into_iter().flatten()
    }

    pub fn all_types(&self) -> impl Iterator<Item = &Type> {
        self.lexicon.values().flatten()
    }

    pub fn max_degree(&self) -> usize {
        self.all_types().map(Type::degree).max().unwrap_or(0)
    }

    pub fn within(&self, restriction: &TypeRestriction) -> bool {
        self.all_types().all(|t| t.in_fragment(restriction))
    }

    pub fn summary(&self) -> String {
        format!(
            "{} primitives, {} symbols, {} lexical types (max degree {}), target {}",
            self.primitives.len(),
            self.alphabet.len(),
            self.all_types().count(),
            self.max_degree(),
            self.distinguished
        )
    }
}

impl fmt::Display for LambekGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (sym, types) in &self.lexicon {
            let list: Vec<String> = types.iter().map(Type::to_string).collect();
            writeln!(f, "{sym} : {}", list.join(", "))?;
        }
        Ok(())
    }
}
