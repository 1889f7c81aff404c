//! Membership deciders and the bounded cross-checking harness.
//!
//! [`Cyk`] is the reference decider for context-free grammars; [`GnfSearch`]
//! is the fast path for grammars already in Greibach normal form. Lambek
//! grammars are decided by [`lambek_member`], which picks a recognizer from
//! [`crate::recognizer`] when the lexicon's fragment allows it and falls back
//! to proof search otherwise.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::config::{CalculusConfig, ConnectiveSet, TypeRestriction};
use crate::grammar::{Cfg, LambekGrammar, Symbol};
use crate::prover::{ProveError, Prover};
use crate::recognizer::{reduce_linear_choices, reduce_regular_choices, RecognizerError, ReductionTable};
use crate::sequent::{Proof, Rule, Sequent};
use crate::types::Type;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("the empty string is never a member")]
    EmptyString,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("grammar is not in Greibach normal form")]
    NotGreibach,
    #[error("type `{0}` is outside the configured fragment")]
    OutsideFragment(Type),
    #[error("strategy {0:?} does not apply to this lexicon and configuration")]
    StrategyNotApplicable(Strategy),
    #[error("step budget of {budget} exceeded after {steps} steps")]
    BudgetExceeded { steps: u64, budget: u64 },
    #[error(transparent)]
    Prove(#[from] ProveError),
    #[error(transparent)]
    Recognizer(#[from] RecognizerError),
    #[error("decider {side} failed on `{word}`: {source}")]
    Decider {
        word: String,
        side: char,
        source: Box<OracleError>,
    },
}

/// Renders a word by juxtaposition when every symbol is one character,
/// else space-separated.
pub fn render_word(w: &[String]) -> String {
    if w.iter().all(|s| s.chars().count() == 1) {
        w.concat()
    } else {
        w.join(" ")
    }
}

/// Splits a word given on the command line: by whitespace if it has any,
/// else into single characters.
pub fn parse_word(s: &str) -> Vec<String> {
    if s.split_whitespace().nth(1).is_some() {
        s.split_whitespace().map(str::to_string).collect()
    } else {
        s.trim().chars().map(String::from).collect()
    }
}

fn check_word<'a>(w: &'a [String], known: impl Fn(&str) -> bool) -> Result<&'a [String], OracleError> {
    if w.is_empty() {
        return Err(OracleError::EmptyString);
    }
    if let Some(a) = w.iter().find(|a| !known(a)) {
        return Err(OracleError::UnknownSymbol(a.clone()));
    }
    Ok(w)
}

/// CYK over a binarized copy of the grammar.
///
/// Terminals inside long right-hand sides get private nonterminals, long
/// right-hand sides are split into chains of binary rules, and unit rules
/// are closed over per chart cell instead of being removed.
pub struct Cyk {
    terminals: HashSet<String>,
    start: usize,
    symbols: usize,
    lexical: HashMap<String, Vec<usize>>,
    binary: Vec<(usize, usize, usize)>,
    // unit_parents[b] = every a with a =>* b through unit rules, including b
    unit_parents: Vec<Vec<usize>>,
}

impl Cyk {
    pub fn new(g: &Cfg) -> Self {
        let mut ids: HashMap<String, usize> = HashMap::new();
        for n in g.nonterminals() {
            let next = ids.len();
            ids.insert(n.clone(), next);
        }
        let mut symbols = ids.len();
        let mut fresh = || {
            symbols += 1;
            symbols - 1
        };
        let mut lexical: HashMap<String, Vec<usize>> = HashMap::new();
        let mut wrappers: HashMap<String, usize> = HashMap::new();
        let mut binary = Vec::new();
        let mut units = Vec::new();
        for p in g.productions() {
            let lhs = ids[&p.lhs];
            match p.rhs.as_slice() {
                [Symbol::Terminal(a)] => lexical.entry(a.clone()).or_default().push(lhs),
                [Symbol::Nonterminal(b)] => units.push((lhs, ids[b])),
                rhs => {
                    let parts: Vec<usize> = rhs
                        .iter()
                        .map(|s| match s {
                            Symbol::Nonterminal(b) => ids[b],
                            Symbol::Terminal(a) => *wrappers.entry(a.clone()).or_insert_with(&mut fresh),
                        })
                        .collect();
                    let mut head = lhs;
                    for k in 0..parts.len() - 2 {
                        let rest = fresh();
                        binary.push((head, parts[k], rest));
                        head = rest;
                    }
                    binary.push((head, parts[parts.len() - 2], parts[parts.len() - 1]));
                }
            }
        }
        for (a, w) in &wrappers {
            lexical.entry(a.clone()).or_default().push(*w);
        }
        let mut unit_parents: Vec<Vec<usize>> = (0..symbols).map(|b| vec![b]).collect();
        loop {
            let mut changed = false;
            for &(a, b) in &units {
                for c in 0..symbols {
                    if unit_parents[c].contains(&b) && !unit_parents[c].contains(&a) {
                        unit_parents[c].push(a);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Cyk {
            terminals: g.terminals().iter().cloned().collect(),
            start: ids[g.start()],
            symbols,
            lexical,
            binary,
            unit_parents,
        }
    }

    fn close(&self, cell: &mut [bool]) {
        for b in 0..self.symbols {
            if cell[b] {
                for &a in &self.unit_parents[b] {
                    cell[a] = true;
                }
            }
        }
    }

    pub fn member(&self, w: &[String]) -> Result<bool, OracleError> {
        let w = check_word(w, |a| self.terminals.contains(a))?;
        let n = w.len();
        // chart[i][len - 1]: symbols deriving w[i..i + len]
        let mut chart = vec![vec![vec![false; self.symbols]; n]; n];
        for (i, a) in w.iter().enumerate() {
            for &x in self.lexical.get(a).into_iter().flatten() {
                chart[i][0][x] = true;
            }
            let mut cell = std::mem::take(&mut chart[i][0]);
            self.close(&mut cell);
            chart[i][0] = cell;
        }
        for len in 2..=n {
            for i in 0..=n - len {
                let mut cell = vec![false; self.symbols];
                for left in 1..len {
                    let (l, r) = (&chart[i][left - 1], &chart[i + left][len - left - 1]);
                    for &(a, b, c) in &self.binary {
                        if l[b] && r[c] {
                            cell[a] = true;
                        }
                    }
                }
                self.close(&mut cell);
                chart[i][len - 1] = cell;
            }
        }
        Ok(chart[0][n - 1][self.start])
    }
}

/// Leftmost-derivation search for grammars in Greibach normal form.
///
/// Each step consumes one input symbol, so the search runs in exactly `|w|`
/// steps. The frontier is the set of pending-nonterminal stacks; stacks
/// longer than the remaining input are dropped, since every nonterminal
/// yields at least one symbol.
pub struct GnfSearch {
    terminals: HashSet<String>,
    start: usize,
    // (nonterminal, terminal) -> tails, each reversed so the next symbol is last
    rules: HashMap<(usize, String), Vec<Vec<usize>>>,
}

impl GnfSearch {
    pub fn new(g: &Cfg) -> Result<Self, OracleError> {
        if !g.classify().is_gnf {
            return Err(OracleError::NotGreibach);
        }
        let ids: HashMap<&str, usize> = g.nonterminals().iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut rules: HashMap<(usize, String), Vec<Vec<usize>>> = HashMap::new();
        for p in g.productions() {
            let tail: Vec<usize> = p.rhs[1..]
                .iter()
                .rev()
                .map(|s| ids[s.as_nonterminal().expect("Greibach tail")])
                .collect();
            rules
                .entry((ids[p.lhs.as_str()], p.rhs[0].name().to_string()))
                .or_default()
                .push(tail);
        }
        Ok(GnfSearch {
            terminals: g.terminals().iter().cloned().collect(),
            start: ids[g.start()],
            rules,
        })
    }

    pub fn member(&self, w: &[String]) -> Result<bool, OracleError> {
        let w = check_word(w, |a| self.terminals.contains(a))?;
        let mut frontier: HashSet<Vec<usize>> = [vec![self.start]].into();
        for (i, a) in w.iter().enumerate() {
            let remaining = w.len() - i - 1;
            let mut next = HashSet::new();
            for stack in &frontier {
                let Some((&top, rest)) = stack.split_last() else {
                    continue;
                };
                for tail in self.rules.get(&(top, a.clone())).into_iter().flatten() {
                    if rest.len() + tail.len() <= remaining {
                        let mut s = rest.to_vec();
                        s.extend_from_slice(tail);
                        next.insert(s);
                    }
                }
            }
            if next.is_empty() {
                return Ok(false);
            }
            frontier = next;
        }
        Ok(frontier.contains(&Vec::new()))
    }
}

/// Whether `w` is derivable from the start symbol: leftmost search when the
/// grammar is in Greibach normal form, CYK otherwise.
pub fn cfg_member(g: &Cfg, w: &[String]) -> Result<bool, OracleError> {
    match GnfSearch::new(g) {
        Ok(s) => s.member(w),
        Err(_) => Cyk::new(g).member(w),
    }
}

pub fn gnf_member(g: &Cfg, w: &[String]) -> Result<bool, OracleError> {
    GnfSearch::new(g)?.member(w)
}

pub fn cyk_member(g: &Cfg, w: &[String]) -> Result<bool, OracleError> {
    Cyk::new(g).member(w)
}

/// How [`lambek_member`] decides a query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// [`ReductionTable`] over all type choices at once.
    Slash,
    /// [`reduce_linear_choices`].
    Linear,
    /// [`reduce_regular_choices`].
    Regular,
    /// Proof search for each type assignment in turn, sharing one memo table.
    Search,
}

/// The cheapest strategy that is exact for these types under `cfg`.
///
/// Right rules never fire when every argument type is primitive, since
/// every consequent in a cut-free proof is then primitive; so the degree-one
/// recognizers only need the left rules to be enabled.
pub fn strategy_for<'a>(types: impl IntoIterator<Item = &'a Type>, cfg: &CalculusConfig) -> Strategy {
    let mut used = ConnectiveSet::empty();
    let mut max_degree = 0;
    for t in types {
        used = used | t.connectives();
        max_degree = max_degree.max(t.degree());
    }
    let slash = cfg.rules.contains(Rule::SlashLeft);
    let backslash = cfg.rules.contains(Rule::BackslashLeft);
    let slash_only = ConnectiveSet::SLASH.contains_all(used);
    if slash_only && max_degree <= 1 && slash {
        Strategy::Regular
    } else if ConnectiveSet::SLASHES.contains_all(used) && max_degree <= 1 && slash && backslash {
        Strategy::Linear
    } else if slash_only && slash && !cfg.rules.contains(Rule::SlashRight) {
        Strategy::Slash
    } else {
        Strategy::Search
    }
}

fn applicable(forced: Strategy, natural: Strategy) -> bool {
    use Strategy::*;
    match forced {
        Search => true,
        Slash => natural == Slash || natural == Regular,
        Linear => natural == Linear || natural == Regular,
        Regular => natural == Regular,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MemberOptions {
    /// Upper bound on work per string: chart entries for the recognizers,
    /// expanded search nodes for proof search. Checked between assignments.
    pub budget: Option<u64>,
    /// Overrides the automatic choice; must be exact for the query.
    pub strategy: Option<Strategy>,
}

/// Result of a Lambek membership query.
#[derive(Clone, Debug)]
pub struct Membership {
    pub member: bool,
    pub strategy: Strategy,
    pub steps: u64,
    /// A witnessing type assignment and its proof, when requested and found.
    pub witness: Option<(Vec<Type>, Proof)>,
}

/// Whether some assignment of lexicon types to `w` derives the
/// distinguished type under `cfg`.
pub fn lambek_member(lg: &LambekGrammar, w: &[String], cfg: &CalculusConfig) -> Result<bool, OracleError> {
    Ok(lambek_member_with(lg, w, cfg, &MemberOptions::default(), false)?.member)
}

fn choices_for(lg: &LambekGrammar, w: &[String], restriction: &TypeRestriction) -> Result<Vec<Vec<Type>>, OracleError> {
    let w = check_word(w, |a| lg.alphabet().contains(a))?;
    let choices: Vec<Vec<Type>> = w.iter().map(|a| lg.types_for(a).cloned().collect()).collect();
    if let Some(t) = choices.iter().flatten().find(|t| !t.in_fragment(restriction)) {
        return Err(OracleError::OutsideFragment(t.clone()));
    }
    Ok(choices)
}

fn over_budget(steps: u64, budget: Option<u64>) -> Result<(), OracleError> {
    match budget {
        Some(b) if steps > b => Err(OracleError::BudgetExceeded { steps, budget: b }),
        _ => Ok(()),
    }
}

/// [`lambek_member`] with options. With `want_proof`, a witnessing
/// assignment and cut-free proof is returned for members.
pub fn lambek_member_with(
    lg: &LambekGrammar,
    w: &[String],
    cfg: &CalculusConfig,
    options: &MemberOptions,
    want_proof: bool,
) -> Result<Membership, OracleError> {
    let choices = choices_for(lg, w, &cfg.restriction)?;
    let target = lg.distinguished_type();
    let natural = strategy_for(choices.iter().flatten(), cfg);
    let strategy = match options.strategy {
        Some(s) if !applicable(s, natural) => return Err(OracleError::StrategyNotApplicable(s)),
        Some(s) => s,
        None => natural,
    };
    if choices.iter().any(Vec::is_empty) {
        return Ok(Membership {
            member: false,
            strategy,
            steps: 0,
            witness: None,
        });
    }
    let no_witness = |member, steps| Membership {
        member,
        strategy,
        steps,
        witness: None,
    };
    match strategy {
        Strategy::Slash if !want_proof => {
            let mut table = ReductionTable::with_choices(choices)?;
            let member = table.reduces_to(&target);
            let steps = table.memo_len() as u64;
            over_budget(steps, options.budget)?;
            Ok(no_witness(member, steps))
        }
        Strategy::Linear if !want_proof => {
            let member = reduce_linear_choices(&choices, &target)?;
            Ok(no_witness(member, chart_size(&choices)))
        }
        Strategy::Regular if !want_proof => {
            let member = reduce_regular_choices(&choices, &target)?;
            Ok(no_witness(member, choices.len() as u64))
        }
        _ => search_assignments(&choices, &target, cfg, options.budget, strategy, want_proof),
    }
}

fn chart_size(choices: &[Vec<Type>]) -> u64 {
    let n = choices.len() as u64;
    n * (n + 1) / 2
}

/// Walks assignments in lexicographic order of the canonical type order,
/// stopping at the first that derives `target`.
fn search_assignments(
    choices: &[Vec<Type>],
    target: &Type,
    cfg: &CalculusConfig,
    budget: Option<u64>,
    strategy: Strategy,
    want_proof: bool,
) -> Result<Membership, OracleError> {
    let prover = Prover::new();
    let mut steps = 0u64;
    let mut pick = vec![0usize; choices.len()];
    loop {
        let antecedent: Vec<Type> = pick.iter().zip(choices).map(|(&k, alts)| alts[k].clone()).collect();
        let sequent = Sequent::new(antecedent.clone(), target.clone());
        let found = prover.prove(&sequent, cfg)?;
        steps += found.stats.nodes_expanded.max(1);
        if let Some(proof) = found.proof {
            return Ok(Membership {
                member: true,
                strategy,
                steps,
                witness: want_proof.then_some((antecedent, proof)),
            });
        }
        over_budget(steps, budget)?;
        // odometer, last position fastest
        let mut i = choices.len();
        loop {
            if i == 0 {
                return Ok(Membership {
                    member: false,
                    strategy,
                    steps,
                    witness: None,
                });
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

/// Strings of length `1..=max_len` over `alphabet`, shortest first, then
/// lexicographic in the sorted alphabet.
pub fn enumerate_strings<I, S>(alphabet: I, max_len: usize) -> Strings
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let symbols: Vec<String> = alphabet
        .into_iter()
        .map(Into::into)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let current = if symbols.is_empty() || max_len == 0 {
        None
    } else {
        Some(vec![0])
    };
    Strings {
        symbols,
        max_len,
        current,
    }
}

/// Iterator returned by [`enumerate_strings`].
pub struct Strings {
    symbols: Vec<String>,
    max_len: usize,
    current: Option<Vec<usize>>,
}

impl Strings {
    /// Total number of strings, `Σ |alphabet|^k` for `k = 1..=max_len`.
    pub fn total(&self) -> u64 {
        let k = self.symbols.len() as u64;
        (1..=self.max_len as u32).map(|n| k.pow(n)).sum()
    }
}

impl Iterator for Strings {
    type Item = Vec<String>;

    fn next(&mut self) -> Option<Vec<String>> {
        let cur = self.current.as_mut()?;
        let out = cur.iter().map(|&i| self.symbols[i].clone()).collect();
        let k = self.symbols.len();
        let mut i = cur.len();
        loop {
            if i == 0 {
                if cur.len() == self.max_len {
                    self.current = None;
                } else {
                    *cur = vec![0; cur.len() + 1];
                }
                break;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < k {
                break;
            }
            cur[i] = 0;
        }
        Some(out)
    }
}

/// A membership function over words.
pub trait Decider {
    fn decide(&self, w: &[String]) -> Result<bool, OracleError>;
}

impl<F> Decider for F
where
    F: Fn(&[String]) -> Result<bool, OracleError>,
{
    fn decide(&self, w: &[String]) -> Result<bool, OracleError> {
        self(w)
    }
}

impl Decider for Cyk {
    fn decide(&self, w: &[String]) -> Result<bool, OracleError> {
        self.member(w)
    }
}

impl Decider for GnfSearch {
    fn decide(&self, w: &[String]) -> Result<bool, OracleError> {
        self.member(w)
    }
}

/// [`cfg_member`] with the grammar preprocessed once.
pub enum CfgDecider {
    Gnf(GnfSearch),
    Cyk(Cyk),
}

impl CfgDecider {
    pub fn new(g: &Cfg) -> Self {
        match GnfSearch::new(g) {
            Ok(s) => CfgDecider::Gnf(s),
            Err(_) => CfgDecider::Cyk(Cyk::new(g)),
        }
    }
}

impl Decider for CfgDecider {
    fn decide(&self, w: &[String]) -> Result<bool, OracleError> {
        match self {
            CfgDecider::Gnf(s) => s.member(w),
            CfgDecider::Cyk(c) => c.member(w),
        }
    }
}

pub struct LambekDecider<'a> {
    pub grammar: &'a LambekGrammar,
    pub config: CalculusConfig,
    pub options: MemberOptions,
}

impl<'a> LambekDecider<'a> {
    pub fn new(grammar: &'a LambekGrammar, config: CalculusConfig) -> Self {
        LambekDecider {
            grammar,
            config,
            options: MemberOptions::default(),
        }
    }
}

impl Decider for LambekDecider<'_> {
    fn decide(&self, w: &[String]) -> Result<bool, OracleError> {
        Ok(lambek_member_with(self.grammar, w, &self.config, &self.options, false)?.member)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub word: Vec<String>,
    pub verdict_a: bool,
    pub verdict_b: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub max_length: usize,
    pub strings_tested: u64,
    pub agreements: u64,
    /// The least disagreeing string in enumeration order.
    pub first_disagreement: Option<Disagreement>,
    pub elapsed: Duration,
}

impl CrosscheckReport {
    pub fn disagreements(&self) -> u64 {
        self.strings_tested - self.agreements
    }

    pub fn agree(&self) -> bool {
        self.first_disagreement.is_none()
    }
}

impl fmt::Display for CrosscheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} strings, {} disagreements", self.strings_tested, self.disagreements())?;
        if let Some(d) = &self.first_disagreement {
            write!(
                f,
                "; first at \"{}\" (A: {}, B: {})",
                render_word(&d.word),
                verdict(d.verdict_a),
                verdict(d.verdict_b)
            )?;
        }
        Ok(())
    }
}

fn verdict(member: bool) -> &'static str {
    if member {
        "member"
    } else {
        "non-member"
    }
}

/// Compares two deciders on every string up to `max_len`. Unless
/// `exhaustive`, stops at the first disagreement.
pub fn crosscheck<A, B, I, S>(a: &A, b: &B, alphabet: I, max_len: usize, exhaustive: bool) -> Result<CrosscheckReport, OracleError>
where
    A: Decider + ?Sized,
    B: Decider + ?Sized,
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let started = Instant::now();
    let mut report = CrosscheckReport {
        max_length: max_len,
        strings_tested: 0,
        agreements: 0,
        first_disagreement: None,
        elapsed: Duration::ZERO,
    };
    let wrap = |side: char, w: &[String]| {
        let word = render_word(w);
        move |e: OracleError| OracleError::Decider {
            word,
            side,
            source: Box::new(e),
        }
    };
    for w in enumerate_strings(alphabet, max_len) {
        let va = a.decide(&w).map_err(wrap('A', &w))?;
        let vb = b.decide(&w).map_err(wrap('B', &w))?;
        report.strings_tested += 1;
        if va == vb {
            report.agreements += 1;
            continue;
        }
        if report.first_disagreement.is_none() {
            report.first_disagreement = Some(Disagreement {
                word: w,
                verdict_a: va,
                verdict_b: vb,
            });
        }
        if !exhaustive {
            break;
        }
    }
    report.elapsed = started.elapsed();
    Ok(report)
}
