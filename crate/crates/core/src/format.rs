//! Text formats for grammars and lexicons.
//!
//! Grammar files:
//!
//! ```text
//! # a^n b^n
//! start: S
//! terminals: a b
//! S -> a S B | a B
//! B -> b
//! ```
//!
//! `terminals:` is required. `start:` defaults to the left-hand side of the
//! first rule. An optional `nonterminals:` line fixes the declaration order,
//! which matters for [`crate::transform::to_gnf`]. Every other symbol must
//! occur as a left-hand side.
//!
//! Lexicon files:
//!
//! ```text
//! target: S
//! a : S/B/S, S/B
//! b : B
//! ```
//!
//! `target:` is required. `primitives:` and `alphabet:` are optional; when
//! given, types and entries are checked against them, otherwise both are
//! inferred. Repeated entries for a symbol accumulate.
//!
//! Both printers are canonical: parsing printed output gives back an equal
//! value, and printing is deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexSet;
use thiserror::Error;

use crate::grammar::{is_symbol_name, Cfg, GrammarError, LambekGrammar, Production, Symbol};
use crate::types::{is_identifier, parse_type, Type};

/// A parse error at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl Diagnostic {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            line,
            column,
            message: message.into(),
        }
    }

    fn at(token: &Token, message: impl Into<String>) -> Self {
        Diagnostic::new(token.line, token.column, message)
    }
}

/// A whitespace-delimited token with its 1-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub line: usize,
    pub column: usize,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn tokens(line: &str, line_no: usize, offset: usize) -> Vec<Token> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain([(line.len(), ' ')]) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: line[s..i].to_string(),
                    line: line_no,
                    column: offset + line[..s].chars().count() + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

/// Splits `key: rest` for the given directive names.
fn directive<'a>(line: &'a str, names: &[&str]) -> Option<(&'a str, &'a str, usize)> {
    let (key, rest) = line.split_once(':')?;
    let key = key.trim();
    if !names.contains(&key) {
        return None;
    }
    let offset = line.len() - rest.len();
    Some((key, rest, line[..offset].chars().count()))
}

/// One `lhs -> alt | alt` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleLine {
    pub lhs: Token,
    pub alternatives: Vec<Vec<Token>>,
}

/// A grammar file as written, before validation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GrammarFile {
    pub start: Option<Token>,
    pub terminals: Option<Vec<Token>>,
    pub nonterminals: Option<Vec<Token>>,
    pub rules: Vec<RuleLine>,
    last_line: usize,
}

const GRAMMAR_DIRECTIVES: [&str; 3] = ["start", "terminals", "nonterminals"];

impl GrammarFile {
    pub fn parse(text: &str) -> Result<Self, Diagnostic> {
        let mut file = GrammarFile::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            file.last_line = line_no;
            let line = strip_comment(raw);
            if line.trim().is_empty() {
                continue;
            }
            if let Some((key, rest, offset)) = directive(line, &GRAMMAR_DIRECTIVES) {
                let toks = tokens(rest, line_no, offset);
                let col = line.find(key).unwrap() + 1;
                let seen = match key {
                    "start" => {
                        let [tok] = <[Token; 1]>::try_from(toks)
                            .map_err(|_| Diagnostic::new(line_no, col, "`start:` takes exactly one symbol"))?;
                        file.start.replace(tok).is_some()
                    }
                    "terminals" => file.terminals.replace(toks).is_some(),
                    _ => file.nonterminals.replace(toks).is_some(),
                };
                if seen {
                    return Err(Diagnostic::new(line_no, col, format!("duplicate `{key}:` line")));
                }
                continue;
            }
            let toks = tokens(line, line_no, 0);
            let arrow = toks.iter().position(|t| t.text == "->");
            let Some(1) = arrow else {
                let at = toks.get(arrow.unwrap_or(1).min(1)).unwrap_or(&toks[0]);
                return Err(Diagnostic::at(at, "expected `lhs -> rhs` or a directive"));
            };
            let mut alternatives = vec![Vec::new()];
            for tok in toks[2..].iter().cloned() {
                if tok.text == "|" {
                    if alternatives.last().unwrap().is_empty() {
                        return Err(Diagnostic::at(&tok, "empty right-hand side (ε is not allowed)"));
                    }
                    alternatives.push(Vec::new());
                } else if tok.text == "->" {
                    return Err(Diagnostic::at(&tok, "unexpected `->`"));
                } else {
                    alternatives.last_mut().unwrap().push(tok);
                }
            }
            if alternatives.last().unwrap().is_empty() {
                let column = line.trim_end().chars().count() + 1;
                return Err(Diagnostic::new(line_no, column, "empty right-hand side (ε is not allowed)"));
            }
            file.rules.push(RuleLine {
                lhs: toks[0].clone(),
                alternatives,
            });
        }
        Ok(file)
    }

    pub fn to_cfg(&self) -> Result<Cfg, Diagnostic> {
        let terminals: IndexSet<&str> = self.terminals.iter().flatten().map(|t| t.text.as_str()).collect();
        let mut nonterminals: IndexSet<&str> = IndexSet::new();
        nonterminals.extend(self.nonterminals.iter().flatten().map(|t| t.text.as_str()));
        if let Some(s) = &self.start {
            nonterminals.insert(&s.text);
        }
        nonterminals.extend(self.rules.iter().map(|r| r.lhs.text.as_str()));

        let declared = self.terminals.iter().flatten().chain(self.nonterminals.iter().flatten());
        for tok in declared.chain(self.start.iter()).chain(self.rules.iter().map(|r| &r.lhs)) {
            if !is_symbol_name(&tok.text) {
                return Err(Diagnostic::at(tok, format!("`{}` is not a valid symbol name", tok.text)));
            }
        }
        for r in &self.rules {
            if terminals.contains(r.lhs.text.as_str()) {
                return Err(Diagnostic::at(&r.lhs, format!("terminal `{}` used as a left-hand side", r.lhs.text)));
            }
            for tok in r.alternatives.iter().flatten() {
                if !terminals.contains(tok.text.as_str()) && !nonterminals.contains(tok.text.as_str()) {
                    return Err(Diagnostic::at(tok, format!("undeclared symbol `{}`", tok.text)));
                }
            }
        }
        if let Some(tok) = self.nonterminals.iter().flatten().find(|t| terminals.contains(t.text.as_str())) {
            return Err(Diagnostic::at(tok, format!("`{}` is declared both terminal and nonterminal", tok.text)));
        }
        if self.terminals.is_none() {
            return Err(Diagnostic::new(1, 1, "missing `terminals:` declaration"));
        }
        if self.rules.is_empty() {
            return Err(Diagnostic::new(self.last_line.max(1), 1, "grammar has no rules"));
        }
        let start = match &self.start {
            Some(s) => s.text.clone(),
            None => self.rules[0].lhs.text.clone(),
        };
        let productions = self.rules.iter().flat_map(|r| {
            r.alternatives.iter().map(|alt| {
                let rhs = alt
                    .iter()
                    .map(|t| {
                        if terminals.contains(t.text.as_str()) {
                            Symbol::t(&t.text)
                        } else {
                            Symbol::n(&t.text)
                        }
                    })
                    .collect();
                Production::new(r.lhs.text.clone(), rhs)
            })
        });
        let productions: Vec<Production> = productions.collect();
        Cfg::new(nonterminals, terminals, start, productions).map_err(|e: GrammarError| Diagnostic::new(1, 1, e.to_string()))
    }
}

pub fn parse_grammar_file(text: &str) -> Result<Cfg, Diagnostic> {
    GrammarFile::parse(text)?.to_cfg()
}

/// Canonical grammar file text.
pub fn print_grammar(g: &Cfg) -> String {
    let mut out = String::new();
    out.push_str(&format!("start: {}\n", g.start()));
    out.push_str(&line_of("terminals:", g.terminals()));
    out.push_str(&line_of("nonterminals:", g.nonterminals()));
    for n in g.nonterminals() {
        let alts: Vec<String> = g
            .productions_for(n)
            .map(|p| p.rhs.iter().map(|s| s.name()).collect::<Vec<_>>().join(" "))
            .collect();
        if !alts.is_empty() {
            out.push_str(&format!("{n} -> {}\n", alts.join(" | ")));
        }
    }
    out
}

fn line_of<'a>(key: &str, names: impl IntoIterator<Item = &'a String>) -> String {
    let mut line = key.to_string();
    for n in names {
        line.push(' ');
        line.push_str(n);
    }
    line.push('\n');
    line
}

/// A lexicon file as written, before validation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LexiconFile {
    pub target: Option<Token>,
    pub primitives: Option<Vec<Token>>,
    pub alphabet: Option<Vec<Token>>,
    /// `(symbol, [(type, position)])` in file order.
    pub entries: Vec<(Token, Vec<(Type, Token)>)>,
}

const LEXICON_DIRECTIVES: [&str; 3] = ["target", "primitives", "alphabet"];

impl LexiconFile {
    pub fn parse(text: &str) -> Result<Self, Diagnostic> {
        let mut file = LexiconFile::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = strip_comment(raw);
            if line.trim().is_empty() {
                continue;
            }
            if let Some((key, rest, offset)) = directive(line, &LEXICON_DIRECTIVES) {
                let toks = tokens(rest, line_no, offset);
                let col = line.find(key).unwrap() + 1;
                let seen = match key {
                    "target" => {
                        let [tok] = <[Token; 1]>::try_from(toks)
                            .map_err(|_| Diagnostic::new(line_no, col, "`target:` takes exactly one primitive"))?;
                        file.target.replace(tok).is_some()
                    }
                    "primitives" => file.primitives.replace(toks).is_some(),
                    _ => file.alphabet.replace(toks).is_some(),
                };
                if seen {
                    return Err(Diagnostic::new(line_no, col, format!("duplicate `{key}:` line")));
                }
                continue;
            }
            let Some((sym, rest)) = line.split_once(':') else {
                let col = line.len() - line.trim_start().len() + 1;
                return Err(Diagnostic::new(line_no, col, "expected `symbol : type, type` or a directive"));
            };
            let sym_toks = tokens(sym, line_no, 0);
            let [symbol] = <[Token; 1]>::try_from(sym_toks)
                .map_err(|_| Diagnostic::new(line_no, 1, "expected exactly one symbol before `:`"))?;
            let mut types = Vec::new();
            let mut offset = sym.chars().count() + 1;
            for part in rest.split(',') {
                let lead = part.chars().take_while(|c| c.is_whitespace()).count();
                let column = offset + lead + 1;
                let trimmed = part.trim();
                if trimmed.is_empty() {
                    return Err(Diagnostic::new(line_no, column, "expected a type"));
                }
                let ty = parse_type(trimmed)
                    .map_err(|e| Diagnostic::new(line_no, column + e.column - 1, e.message.clone()))?;
                let pos = Token {
                    text: trimmed.to_string(),
                    line: line_no,
                    column,
                };
                types.push((ty, pos));
                offset += part.chars().count() + 1;
            }
            file.entries.push((symbol, types));
        }
        Ok(file)
    }

    pub fn to_lambek(&self) -> Result<LambekGrammar, Diagnostic> {
        let target = self
            .target
            .as_ref()
            .ok_or_else(|| Diagnostic::new(1, 1, "missing `target:` line"))?;
        let declared_prims: Option<BTreeSet<&str>> = self
            .primitives
            .as_ref()
            .map(|ps| ps.iter().map(|t| t.text.as_str()).collect());
        let declared_alpha: Option<BTreeSet<&str>> = self
            .alphabet
            .as_ref()
            .map(|ps| ps.iter().map(|t| t.text.as_str()).collect());
        for tok in self
            .primitives
            .iter()
            .flatten()
            .chain(self.alphabet.iter().flatten())
            .chain([target])
            .chain(self.entries.iter().map(|(s, _)| s))
        {
            if !is_identifier(&tok.text) {
                return Err(Diagnostic::at(tok, format!("`{}` is not a valid identifier", tok.text)));
            }
        }
        if declared_prims.as_ref().is_some_and(|ps| !ps.contains(target.text.as_str())) {
            return Err(Diagnostic::at(target, format!("target `{}` is not a declared primitive", target.text)));
        }
        let mut primitives: BTreeSet<String> = [target.text.clone()].into();
        let mut alphabet: BTreeSet<String> = BTreeSet::new();
        primitives.extend(self.primitives.iter().flatten().map(|t| t.text.clone()));
        alphabet.extend(self.alphabet.iter().flatten().map(|t| t.text.clone()));
        let mut lexicon: BTreeMap<String, Vec<Type>> = BTreeMap::new();
        for (symbol, types) in &self.entries {
            if declared_alpha.as_ref().is_some_and(|a| !a.contains(symbol.text.as_str())) {
                return Err(Diagnostic::at(symbol, format!("symbol `{}` is not in the declared alphabet", symbol.text)));
            }
            alphabet.insert(symbol.text.clone());
            for (ty, pos) in types {
                for p in ty.primitives() {
                    match &declared_prims {
                        Some(ps) if !ps.contains(p) => {
                            return Err(Diagnostic::at(pos, format!("unknown primitive `{p}` in `{ty}`")));
                        }
                        _ => {
                            primitives.insert(p.to_string());
                        }
                    }
                }
                lexicon.entry(symbol.text.clone()).or_default().push(ty.clone());
            }
        }
        if let Some(x) = primitives.iter().find(|p| alphabet.contains(*p)) {
            let at = self
                .entries
                .iter()
                .map(|(s, _)| s)
                .chain(self.alphabet.iter().flatten())
                .find(|t| &t.text == x)
                .unwrap_or(target);
            return Err(Diagnostic::at(at, format!("`{x}` is both a primitive type and an alphabet symbol")));
        }
        LambekGrammar::new(primitives, alphabet, target.text.clone(), lexicon).map_err(|e| Diagnostic::at(target, e.to_string()))
    }
}

pub fn parse_lexicon_file(text: &str) -> Result<LambekGrammar, Diagnostic> {
    LexiconFile::parse(text)?.to_lambek()
}

/// Canonical lexicon file text.
pub fn print_lexicon(lg: &LambekGrammar) -> String {
    let mut out = format!("target: {}\n", lg.distinguished());
    out.push_str(&line_of("primitives:", lg.primitives()));
    out.push_str(&line_of("alphabet:", lg.alphabet()));
    for (symbol, types) in lg.lexicon() {
        let types: Vec<String> = types.iter().map(Type::to_string).collect();
        out.push_str(&format!("{symbol} : {}\n", types.join(", ")));
    }
    out
}

/// Either kind of file.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Grammar(Cfg),
    Lexicon(LambekGrammar),
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Document::Grammar(g) => f.write_str(&print_grammar(g)),
            Document::Lexicon(lg) => f.write_str(&print_lexicon(lg)),
        }
    }
}

/// Whether the text looks like a lexicon file: it has a `target:` line.
pub fn is_lexicon_text(text: &str) -> bool {
    text.lines()
        .map(strip_comment)
        .any(|l| directive(l, &["target"]).is_some())
}

/// Parses either format, choosing by [`is_lexicon_text`].
pub fn parse_document(text: &str) -> Result<Document, Diagnostic> {
    if is_lexicon_text(text) {
        parse_lexicon_file(text).map(Document::Lexicon)
    } else {
        parse_grammar_file(text).map(Document::Grammar)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grammar_examples() {
        let g = parse_grammar_file("terminals: a b\nS -> a S B | a B\nB -> b").unwrap();
        let expect = Cfg::from_rules(&["a", "b"], &[("S", "a S B"), ("S", "a B"), ("B", "b")]).unwrap();
        assert_eq!(g, expect);
        assert_eq!(g.start(), "S");

        let err = parse_grammar_file("terminals: a\nS -> ").unwrap_err();
        assert_eq!((err.line, err.column), (2, 5));
        assert!(err.message.contains("empty right-hand side"), "{err}");

        let err = parse_grammar_file("S -> a").unwrap_err();
        assert_eq!(err.to_string(), "line 1, column 6: undeclared symbol `a`");
    }

    #[test]
    fn grammar_errors() {
        let cases = [
            ("terminals: a\nS -> a |", (2, 9)),
            ("terminals: a\nS -> | a", (2, 6)),
            ("terminals: a\nS a", (2, 3)),
            ("terminals: a\n", (1, 1)),
            ("terminals: a\nS -> a\nS -> a -> a", (3, 8)),
            ("terminals: a\n  a -> a", (2, 3)),
            ("terminals: a\nstart: S T\nS -> a", (2, 1)),
            ("terminals: a\nterminals: a\nS -> a", (2, 1)),
            ("terminals: a\nS -> a T", (2, 8)),
            ("terminals: a\nnonterminals: a\nS -> a", (2, 15)),
        ];
        for (text, pos) in cases {
            let err = parse_grammar_file(text).unwrap_err();
            assert_eq!((err.line, err.column), pos, "{text:?}: {err}");
        }
    }

    #[test]
    fn grammar_comments_and_start() {
        let text = "# comment\nstart: B  # trailing\nterminals: a b\nS -> a B\nB -> b\n";
        let g = parse_grammar_file(text).unwrap();
        assert_eq!(g.start(), "B");
        assert_eq!(g.nonterminals().iter().collect::<Vec<_>>(), ["B", "S"]);
    }

    #[test]
    fn lexicon_examples() {
        let lg = parse_lexicon_file("target: S\na : S/B/S, S/B\nb : B").unwrap();
        let expect = LambekGrammar::from_entries("S", &[("a", "(S/B)/S, S/B"), ("b", "B")]).unwrap();
        assert_eq!(lg, expect);

        let lg = parse_lexicon_file("target: S\na : A\\S").unwrap();
        let fa: Vec<String> = lg.types_for("a").map(Type::to_string).collect();
        assert_eq!(fa, ["A\\S"]);

        let err = parse_lexicon_file("a : S").unwrap_err();
        assert!(err.message.contains("target"), "{err}");
    }

    #[test]
    fn lexicon_errors() {
        let cases = [
            ("target: S\na : S/", (2, 7)),
            ("target: S\na : S,", (2, 7)),
            ("target: S\nprimitives: S\na : S/B", (3, 5)),
            ("target: S\nalphabet: b\na : S", (3, 1)),
            ("target: S\na b : S", (2, 1)),
            ("target: S\nnonsense", (2, 1)),
            ("target: S\na : S, B/(B", (2, 12)),
            ("target: S\nprimitives: B\na : S", (1, 9)),
            ("target: S\nS : S", (2, 1)),
        ];
        for (text, pos) in cases {
            let err = parse_lexicon_file(text).unwrap_err();
            assert_eq!((err.line, err.column), pos, "{text:?}: {err}");
        }
    }

    #[test]
    fn documents() {
        assert!(matches!(parse_document("target: S\na : S"), Ok(Document::Lexicon(_))));
        assert!(matches!(parse_document("terminals: a\nS -> a"), Ok(Document::Grammar(_))));
    }

    #[test]
    fn canonical_text() {
        let g = Cfg::from_rules(&["a", "b"], &[("S", "a S B"), ("S", "a B"), ("B", "b")]).unwrap();
        assert_eq!(
            print_grammar(&g),
            "start: S\nterminals: a b\nnonterminals: S B\nS -> a B | a S B\nB -> b\n"
        );
        let lg = LambekGrammar::from_entries("S", &[("a", "(S/B)/S, S/B"), ("b", "B")]).unwrap();
        assert_eq!(
            print_lexicon(&lg),
            "target: S\nprimitives: B S\nalphabet: a b\na : S/B, S/B/S\nb : B\n"
        );
    }

    fn arb_cfg() -> impl Strategy<Value = Cfg> {
        let names = ["S", "A", "B", "C"];
        let sym = prop_oneof![
            (0..2usize).prop_map(|i| Symbol::t(["a", "b"][i])),
            (0..4usize).prop_map(move |i| Symbol::n(names[i])),
        ];
        let rule = (0..4usize, prop::collection::vec(sym, 1..4));
        (prop::collection::vec(rule, 1..8), prop::sample::subsequence(names.to_vec(), 1..=4)).prop_map(move |(rules, order)| {
            let mut nts: IndexSet<String> = order.iter().map(|s| s.to_string()).collect();
            nts.extend(names.iter().map(|s| s.to_string()));
            let productions = rules.into_iter().map(|(l, rhs)| Production::new(names[l], rhs));
            Cfg::new(nts, ["a", "b"], "S", productions).unwrap()
        })
    }

    proptest! {
        #[test]
        fn grammar_round_trip(g in arb_cfg()) {
            let text = print_grammar(&g);
            let back = parse_grammar_file(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(back.nonterminals().iter().collect::<Vec<_>>(), g.nonterminals().iter().collect::<Vec<_>>());
            prop_assert_eq!(print_grammar(&back), text);
        }

        #[test]
        fn lexicon_round_trip(entries in prop::collection::vec((0..3usize, prop::collection::vec(crate::types::tests::arb_type(), 0..3)), 0..5)) {
            let symbols = ["a", "b", "c"];
            let mut prims: BTreeSet<String> = ["S".to_string()].into();
            for (_, ts) in &entries {
                for t in ts {
                    prims.extend(t.primitives().into_iter().map(str::to_string));
                }
            }
            let lexicon = entries.into_iter().map(|(i, ts)| (symbols[i].to_string(), ts));
            let lg = LambekGrammar::new(prims, symbols, "S", lexicon).unwrap();
            let text = print_lexicon(&lg);
            let back = parse_lexicon_file(&text).unwrap();
            prop_assert_eq!(&back, &lg);
            prop_assert_eq!(print_lexicon(&back), text);
        }
    }
}
