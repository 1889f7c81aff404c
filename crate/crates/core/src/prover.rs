//! Backward cut-free proof search, proof checking, and cut elimination.
//!
//! Every inference rule's premises together carry one connective fewer than
//! the conclusion, so search depth is bounded by the query's connective
//! count and the search is exhaustive.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use thiserror::Error;

use crate::config::{CalculusConfig, RuleSet};
use crate::sequent::{Proof, Rule, Sequent};
use crate::types::Type;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProveError {
    #[error("sequent has an empty antecedent")]
    EmptyAntecedent,
    #[error("type `{0}` is outside the configured fragment")]
    OutsideFragment(Type),
    #[error("proof is invalid: {}", join_violations(.0))]
    InvalidProof(Vec<Violation>),
    #[error("cut elimination is only supported for L(/L), L(/L,\\L) and the full calculus, not L({0})")]
    UnsupportedFragment(RuleSet),
    #[error("no cut-free proof of `{0}` exists; cut elimination failed")]
    CutEliminationFailed(Sequent),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(Violation::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub memo_hits: u64,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub provable: bool,
    pub proof: Option<Proof>,
    pub stats: SearchStats,
}

type MemoKey = (CalculusConfig, Sequent);

/// A proof-search engine with a memo table shared across queries.
///
/// The table is keyed by configuration and sequent, so one engine serves any
/// number of fragments. Concurrent queries are safe; the lock is only held
/// around table lookups and inserts.
#[derive(Default)]
pub struct Prover {
    memo: Mutex<HashMap<MemoKey, Option<Proof>>>,
}

impl Prover {
    pub fn new() -> Self {
        Prover::default()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.lock().unwrap().len()
    }

    pub fn clear(&self) {
        self.memo.lock().unwrap().clear();
    }

    pub fn prove(&self, s: &Sequent, cfg: &CalculusConfig) -> Result<SearchResult, ProveError> {
        check_query(s, cfg)?;
        let mut stats = SearchStats::default();
        let proof = self.search(&s.antecedent, &s.consequent, cfg, &mut stats);
        Ok(SearchResult {
            provable: proof.is_some(),
            proof,
            stats,
        })
    }

    fn search(&self, ant: &[Type], suc: &Type, cfg: &CalculusConfig, stats: &mut SearchStats) -> Option<Proof> {
        if !balanced(ant, suc) {
            return None;
        }
        let key = (*cfg, Sequent::new(ant.to_vec(), suc.clone()));
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            stats.memo_hits += 1;
            return hit.clone();
        }
        stats.nodes_expanded += 1;
        let found = self.expand(ant, suc, cfg, stats);
        self.memo.lock().unwrap().insert(key, found.clone());
        found
    }

    fn expand(&self, ant: &[Type], suc: &Type, cfg: &CalculusConfig, stats: &mut SearchStats) -> Option<Proof> {
        let conclusion = || Sequent::new(ant.to_vec(), suc.clone());
        if ant.len() == 1 && ant[0] == *suc {
            return Some(Proof::axiom(suc.clone()));
        }
        let n = ant.len();
        let rules = cfg.rules;
        for i in 0..n {
            match &ant[i] {
                Type::Right(beta, alpha) if rules.contains(Rule::SlashLeft) => {
                    // Δ, β/α, Γ, Θ → γ  from  Γ → α  and  Δ, β, Θ → γ
                    for end in i + 2..=n {
                        let Some(arg) = self.search(&ant[i + 1..end], alpha, cfg, stats) else {
                            continue;
                        };
                        let rest = splice(&ant[..i], beta, &ant[end..]);
                        if let Some(main) = self.search(&rest, suc, cfg, stats) {
                            return Some(Proof::node(conclusion(), Rule::SlashLeft, vec![arg, main], Some(i)));
                        }
                    }
                }
                Type::Left(alpha, beta) if rules.contains(Rule::BackslashLeft) => {
                    // Δ, Γ, α\β, Θ → γ  from  Γ → α  and  Δ, β, Θ → γ
                    for start in (0..i).rev() {
                        let Some(arg) = self.search(&ant[start..i], alpha, cfg, stats) else {
                            continue;
                        };
                        let rest = splice(&ant[..start], beta, &ant[i + 1..]);
                        if let Some(main) = self.search(&rest, suc, cfg, stats) {
                            return Some(Proof::node(conclusion(), Rule::BackslashLeft, vec![arg, main], Some(i)));
                        }
                    }
                }
                Type::Product(alpha, beta) if rules.contains(Rule::ProductLeft) => {
                    let mut rest = ant[..i].to_vec();
                    rest.push(alpha.as_ref().clone());
                    rest.push(beta.as_ref().clone());
                    rest.extend_from_slice(&ant[i + 1..]);
                    if let Some(p) = self.search(&rest, suc, cfg, stats) {
                        return Some(Proof::node(conclusion(), Rule::ProductLeft, vec![p], Some(i)));
                    }
                }
                _ => {}
            }
        }
        match suc {
            Type::Right(beta, alpha) if rules.contains(Rule::SlashRight) => {
                let mut extended = ant.to_vec();
                extended.push(alpha.as_ref().clone());
                if let Some(p) = self.search(&extended, beta, cfg, stats) {
                    return Some(Proof::node(conclusion(), Rule::SlashRight, vec![p], None));
                }
            }
            Type::Left(alpha, beta) if rules.contains(Rule::BackslashRight) => {
                let mut extended = vec![alpha.as_ref().clone()];
                extended.extend_from_slice(ant);
                if let Some(p) = self.search(&extended, beta, cfg, stats) {
                    return Some(Proof::node(conclusion(), Rule::BackslashRight, vec![p], None));
                }
            }
            Type::Product(alpha, beta) if rules.contains(Rule::ProductRight) => {
                for k in 1..n {
                    let Some(left) = self.search(&ant[..k], alpha, cfg, stats) else {
                        continue;
                    };
                    if let Some(right) = self.search(&ant[k..], beta, cfg, stats) {
                        return Some(Proof::node(conclusion(), Rule::ProductRight, vec![left, right], Some(k)));
                    }
                }
            }
            _ => {}
        }
        None
    }
}

/// Every rule keeps each primitive's count balanced: occurrences in
/// antecedent positions of positive polarity minus those of negative
/// polarity equal the same difference for the consequent. Sequents failing
/// this are unprovable in any fragment.
fn balanced(ant: &[Type], suc: &Type) -> bool {
    fn count<'a>(t: &'a Type, sign: i32, acc: &mut Vec<(&'a str, i32)>) {
        match t {
            Type::Prim(p) => match acc.iter_mut().find(|(q, _)| *q == p.as_ref()) {
                Some((_, n)) => *n += sign,
                None => acc.push((p, sign)),
            },
            Type::Right(result, arg) | Type::Left(arg, result) => {
                count(result, sign, acc);
                count(arg, -sign, acc);
            }
            Type::Product(a, b) => {
                count(a, sign, acc);
                count(b, sign, acc);
            }
        }
    }
    let mut acc = Vec::new();
    for t in ant {
        count(t, 1, &mut acc);
    }
    count(suc, -1, &mut acc);
    acc.iter().all(|(_, n)| *n == 0)
}

fn splice(before: &[Type], mid: &Type, after: &[Type]) -> Vec<Type> {
    let mut v = Vec::with_capacity(before.len() + 1 + after.len());
    v.extend_from_slice(before);
    v.push(mid.clone());
    v.extend_from_slice(after);
    v
}

fn check_query(s: &Sequent, cfg: &CalculusConfig) -> Result<(), ProveError> {
    if s.antecedent.is_empty() {
        return Err(ProveError::EmptyAntecedent);
    }
    if let Some(t) = s.types().find(|t| !t.in_fragment(&cfg.restriction)) {
        return Err(ProveError::OutsideFragment(t.clone()));
    }
    Ok(())
}

/// One-shot cut-free search with a fresh engine.
pub fn prove(s: &Sequent, cfg: &CalculusConfig) -> Result<SearchResult, ProveError> {
    Prover::new().prove(s, cfg)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    RuleDisabled(Rule),
    CutNotAllowed,
    PremiseCount { expected: usize, found: usize },
    EmptyAntecedent,
    /// The Γ ≠ Λ side condition of (→/) or (→\).
    SideCondition(Rule),
    MissingPosition,
    PositionOutOfRange(usize),
    OutsideFragment(Type),
    Schema(String),
}

/// A rule-schema violation at a node, addressed by the premise indices
/// leading to it from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: Vec<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(usize::to_string).collect();
        write!(f, "at [{}]: ", path.join("."))?;
        match &self.kind {
            ViolationKind::RuleDisabled(r) => write!(f, "rule {r} is not enabled"),
            ViolationKind::CutNotAllowed => write!(f, "Cut is not allowed"),
            ViolationKind::PremiseCount { expected, found } => {
                write!(f, "expected {expected} premises, found {found}")
            }
            ViolationKind::EmptyAntecedent => write!(f, "empty antecedent"),
            ViolationKind::SideCondition(r) => write!(f, "Γ≠Λ side condition of {r} violated"),
            ViolationKind::MissingPosition => write!(f, "missing splice position"),
            ViolationKind::PositionOutOfRange(p) => write!(f, "splice position {p} out of range"),
            ViolationKind::OutsideFragment(t) => write!(f, "type {t} outside the fragment"),
            ViolationKind::Schema(msg) => write!(f, "{msg}"),
        }
    }
}

/// Checks every node against its rule schema. An empty result means valid.
pub fn validate(p: &Proof, cfg: &CalculusConfig) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    validate_node(p, cfg, &mut path, &mut out);
    out
}

fn validate_node(p: &Proof, cfg: &CalculusConfig, path: &mut Vec<usize>, out: &mut Vec<Violation>) {
    let mut report = |kind| out.push(Violation { path: path.clone(), kind });
    let concl = &p.conclusion;
    match p.rule {
        Rule::Axiom => {}
        Rule::Cut if !cfg.allow_cut => report(ViolationKind::CutNotAllowed),
        Rule::Cut => {}
        r if !cfg.rules.contains(r) => report(ViolationKind::RuleDisabled(r)),
        _ => {}
    }
    if concl.antecedent.is_empty() && !matches!(p.rule, Rule::SlashRight | Rule::BackslashRight) {
        report(ViolationKind::EmptyAntecedent);
    }
    if let Some(t) = concl.types().find(|t| !t.in_fragment(&cfg.restriction)) {
        report(ViolationKind::OutsideFragment(t.clone()));
    }
    if p.premises.len() != p.rule.arity() {
        report(ViolationKind::PremiseCount {
            expected: p.rule.arity(),
            found: p.premises.len(),
        });
    } else if let Err(kind) = check_schema(p) {
        report(kind);
    }
    for (i, prem) in p.premises.iter().enumerate() {
        path.push(i);
        validate_node(prem, cfg, path, out);
        path.pop();
    }
}

fn schema(msg: impl Into<String>) -> ViolationKind {
    ViolationKind::Schema(msg.into())
}

fn position(p: &Proof, limit: usize) -> Result<usize, ViolationKind> {
    match p.position {
        None => Err(ViolationKind::MissingPosition),
        Some(i) if i >= limit => Err(ViolationKind::PositionOutOfRange(i)),
        Some(i) => Ok(i),
    }
}

fn check_schema(p: &Proof) -> Result<(), ViolationKind> {
    let ant = &p.conclusion.antecedent;
    let suc = &p.conclusion.consequent;
    match p.rule {
        Rule::Axiom => {
            if ant.len() != 1 || ant[0] != *suc {
                return Err(schema("axiom must have the form α → α"));
            }
        }
        Rule::Cut => {
            let (main, arg) = (&p.premises[0].conclusion, &p.premises[1].conclusion);
            let i = position(p, ant.len() + 1)?;
            if main.consequent != *suc {
                return Err(schema("Cut: consequent differs from the left premise's"));
            }
            if i >= main.antecedent.len() || main.antecedent[i] != arg.consequent {
                return Err(schema("Cut: cut formula not found at the splice position"));
            }
            let mut expect = main.antecedent[..i].to_vec();
            expect.extend_from_slice(&arg.antecedent);
            expect.extend_from_slice(&main.antecedent[i + 1..]);
            if expect != *ant {
                return Err(schema("Cut: conclusion is not Γ, Δ, Θ"));
            }
        }
        Rule::SlashLeft | Rule::BackslashLeft => {
            let (arg, main) = (&p.premises[0].conclusion, &p.premises[1].conclusion);
            let i = position(p, ant.len())?;
            let (alpha, beta, gamma_range) = match (&ant[i], p.rule) {
                (Type::Right(beta, alpha), Rule::SlashLeft) => {
                    (alpha, beta, i + 1..i + 1 + arg.antecedent.len())
                }
                (Type::Left(alpha, beta), Rule::BackslashLeft) if arg.antecedent.len() <= i => {
                    (alpha, beta, i - arg.antecedent.len()..i)
                }
                (Type::Left(..), Rule::BackslashLeft) => {
                    return Err(schema("\\L: argument sequence overruns the antecedent"))
                }
                _ => return Err(schema(format!("{}: principal type has the wrong connective", p.rule))),
            };
            if arg.antecedent.is_empty() {
                return Err(schema(format!("{}: argument premise has an empty antecedent", p.rule)));
            }
            if arg.consequent != **alpha {
                return Err(schema(format!("{}: argument premise does not derive {alpha}", p.rule)));
            }
            if gamma_range.end > ant.len() || ant[gamma_range.clone()] != arg.antecedent[..] {
                return Err(schema(format!("{}: argument sequence not adjacent to the principal type", p.rule)));
            }
            let lo = gamma_range.start.min(i);
            let hi = gamma_range.end.max(i + 1);
            let expect = splice(&ant[..lo], beta, &ant[hi..]);
            if main.antecedent != expect || main.consequent != *suc {
                return Err(schema(format!("{}: main premise does not match", p.rule)));
            }
        }
        Rule::ProductLeft => {
            let prem = &p.premises[0].conclusion;
            let i = position(p, ant.len())?;
            let Type::Product(a, b) = &ant[i] else {
                return Err(schema("*L: principal type is not a product"));
            };
            let mut expect = ant[..i].to_vec();
            expect.push(a.as_ref().clone());
            expect.push(b.as_ref().clone());
            expect.extend_from_slice(&ant[i + 1..]);
            if prem.antecedent != expect || prem.consequent != *suc {
                return Err(schema("*L: premise does not match"));
            }
        }
        Rule::SlashRight => {
            let prem = &p.premises[0].conclusion;
            let Type::Right(beta, alpha) = suc else {
                return Err(schema("/R: consequent is not a / type"));
            };
            if ant.is_empty() {
                return Err(ViolationKind::SideCondition(Rule::SlashRight));
            }
            let mut expect = ant.clone();
            expect.push(alpha.as_ref().clone());
            if prem.antecedent != expect || prem.consequent != **beta {
                return Err(schema("/R: premise does not match Γ, α → β"));
            }
        }
        Rule::BackslashRight => {
            let prem = &p.premises[0].conclusion;
            let Type::Left(alpha, beta) = suc else {
                return Err(schema("\\R: consequent is not a \\ type"));
            };
            if ant.is_empty() {
                return Err(ViolationKind::SideCondition(Rule::BackslashRight));
            }
            let mut expect = vec![alpha.as_ref().clone()];
            expect.extend_from_slice(ant);
            if prem.antecedent != expect || prem.consequent != **beta {
                return Err(schema("\\R: premise does not match α, Γ → β"));
            }
        }
        Rule::ProductRight => {
            let (l, r) = (&p.premises[0].conclusion, &p.premises[1].conclusion);
            let Type::Product(a, b) = suc else {
                return Err(schema("*R: consequent is not a product"));
            };
            let k = position(p, ant.len())?;
            if k == 0 {
                return Err(schema("*R: left premise would have an empty antecedent"));
            }
            if l.antecedent[..] != ant[..k] || r.antecedent[..] != ant[k..] || l.consequent != **a || r.consequent != **b {
                return Err(schema("*R: premises do not match Γ → α and Δ → β"));
            }
        }
    }
    Ok(())
}

fn cut_elimination_supported(rules: RuleSet) -> bool {
    let left_only: RuleSet = [Rule::SlashLeft, Rule::BackslashLeft].into_iter().collect();
    rules.is_subset(left_only) || rules == RuleSet::all()
}

/// Returns a cut-free proof of the same endsequent.
///
/// Cuts against an axiom are dropped directly. Any other Cut node is replaced
/// by a cut-free proof of its conclusion found by search, working bottom-up
/// from the leaves, so cut-free subproofs are kept as they are.
pub fn eliminate_cut(p: &Proof, cfg: &CalculusConfig) -> Result<Proof, ProveError> {
    if !cut_elimination_supported(cfg.rules) {
        return Err(ProveError::UnsupportedFragment(cfg.rules));
    }
    let violations = validate(p, &cfg.with_cut(true));
    if !violations.is_empty() {
        return Err(ProveError::InvalidProof(violations));
    }
    let cut_free = cfg.with_cut(false);
    let prover = Prover::new();
    let out = rewrite(p, &cut_free, &prover)?;
    let violations = validate(&out, &cut_free);
    if !violations.is_empty() {
        return Err(ProveError::InvalidProof(violations));
    }
    Ok(out)
}

fn rewrite(p: &Proof, cfg: &CalculusConfig, prover: &Prover) -> Result<Proof, ProveError> {
    if !p.contains_cut() {
        return Ok(p.clone());
    }
    let premises = p
        .premises
        .iter()
        .map(|q| rewrite(q, cfg, prover))
        .collect::<Result<Vec<_>, _>>()?;
    if p.rule != Rule::Cut {
        return Ok(Proof::node(p.conclusion.clone(), p.rule, premises, p.position));
    }
    let [main, arg] = <[Proof; 2]>::try_from(premises).expect("validated Cut has two premises");
    if arg.rule == Rule::Axiom {
        return Ok(main);
    }
    if main.rule == Rule::Axiom {
        return Ok(arg);
    }
    let found = prover.prove(&p.conclusion, cfg)?;
    found
        .proof
        .ok_or_else(|| ProveError::CutEliminationFailed(p.conclusion.clone()))
}
