//! Dynamic-programming deciders for reducibility in the `/`-only and
//! degree-one fragments.
//!
//! All deciders accept a *choice sequence*: at each position, a set of
//! alternative types. A choice sequence reduces if some way of picking one
//! type per position does. Since every position ends up in exactly one
//! subderivation, the picks are independent and the tables can range over
//! all of them at once. A plain type sequence is the special case with one
//! choice per position.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::config::{ConnectiveSet, TypeRestriction};
use crate::prover::SearchStats;
use crate::sequent::{Proof, Rule, Sequent};
use crate::types::Type;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecognizerError {
    #[error("empty type sequence")]
    EmptySequence,
    #[error("type `{0}` is outside the recognizer's fragment")]
    OutsideFragment(Type),
    #[error("target `{0}` must be primitive")]
    TargetNotPrimitive(Type),
}

#[derive(Clone, Copy, Debug)]
enum Witness {
    /// `[t] → t`, using choice `alt` at the position.
    Axiom { alt: usize },
    /// `span[i..split] → t/β` and `span[split..j] → β`.
    Peel { functor: usize, arg: usize, split: usize },
}

/// Memo table for reducibility in L(/→) over `/`-only types.
///
/// An entry `(i, j, t)` records whether positions `i..j` reduce to the
/// interned type `t`. A span reduces to `t` either as a single position
/// holding `t`, or by splitting off a final chunk that reduces to some `β`
/// while the front reduces to `t/β`. Unrolling the second case yields the
/// leading spine type followed by consecutive chunks for its arguments.
/// Targets are confined to the subtypes of the input types: only those can
/// head a spine.
pub struct ReductionTable {
    choices: Vec<Vec<Type>>,
    choice_ids: Vec<Vec<usize>>,
    ids: HashMap<Type, usize>,
    types: Vec<Type>,
    // for each result type t: every interned t/β with the id of β
    functors_by_result: Vec<Vec<(usize, usize)>>,
    memo: HashMap<(usize, usize, usize), Option<Witness>>,
    stats: SearchStats,
}

const SLASH_ONLY: TypeRestriction = TypeRestriction {
    connectives: ConnectiveSet::SLASH,
    max_degree: None,
};

fn check_choices<'a>(choices: impl IntoIterator<Item = &'a Vec<Type>>, restriction: &TypeRestriction) -> Result<usize, RecognizerError> {
    let mut n = 0;
    for alts in choices {
        n += 1;
        if let Some(t) = alts.iter().find(|t| !t.in_fragment(restriction)) {
            return Err(RecognizerError::OutsideFragment(t.clone()));
        }
    }
    if n == 0 {
        return Err(RecognizerError::EmptySequence);
    }
    Ok(n)
}

impl ReductionTable {
    pub fn new(seq: &[Type]) -> Result<Self, RecognizerError> {
        Self::with_choices(seq.iter().map(|t| vec![t.clone()]).collect())
    }

    pub fn with_choices(choices: Vec<Vec<Type>>) -> Result<Self, RecognizerError> {
        check_choices(&choices, &SLASH_ONLY)?;
        let mut subtypes = BTreeSet::new();
        for t in choices.iter().flatten() {
            t.collect_subtypes(&mut subtypes);
        }
        let types: Vec<Type> = subtypes.into_iter().collect();
        let ids: HashMap<Type, usize> = types.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let mut functors_by_result = vec![Vec::new(); types.len()];
        for (u, ty) in types.iter().enumerate() {
            if let Type::Right(result, arg) = ty {
                functors_by_result[ids[result.as_ref()]].push((u, ids[arg.as_ref()]));
            }
        }
        let choice_ids = choices
            .iter()
            .map(|alts| alts.iter().map(|t| ids[t]).collect())
            .collect();
        Ok(ReductionTable {
            choices,
            choice_ids,
            ids,
            types,
            functors_by_result,
            memo: HashMap::new(),
            stats: SearchStats::default(),
        })
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    /// Number of distinct types that can appear as memo targets.
    pub fn target_count(&self) -> usize {
        self.types.len()
    }

    /// Whether the whole input reduces to `target`.
    pub fn reduces_to(&mut self, target: &Type) -> bool {
        match self.ids.get(target) {
            Some(&t) => self.reduce(0, self.choices.len(), t),
            None => false,
        }
    }

    /// Whether positions `start..end` reduce to `target`.
    pub fn span_reduces_to(&mut self, start: usize, end: usize, target: &Type) -> bool {
        assert!(start < end && end <= self.choices.len(), "span out of range");
        match self.ids.get(target) {
            Some(&t) => self.reduce(start, end, t),
            None => false,
        }
    }

    fn reduce(&mut self, i: usize, j: usize, t: usize) -> bool {
        if let Some(w) = self.memo.get(&(i, j, t)) {
            self.stats.memo_hits += 1;
            return w.is_some();
        }
        self.stats.nodes_expanded += 1;
        let mut found = None;
        if j == i + 1 {
            found = self.choice_ids[i]
                .iter()
                .position(|&c| c == t)
                .map(|alt| Witness::Axiom { alt });
        } else {
            let functors = self.functors_by_result[t].clone();
            'search: for (functor, arg) in functors {
                for split in i + 1..j {
                    if self.reduce(i, split, functor) && self.reduce(split, j, arg) {
                        found = Some(Witness::Peel { functor, arg, split });
                        break 'search;
                    }
                }
            }
        }
        self.memo.insert((i, j, t), found);
        found.is_some()
    }

    /// The cut-free L(/→) proof behind a successful [`reduces_to`]; its
    /// antecedent is the chosen type for each position.
    ///
    /// [`reduces_to`]: Self::reduces_to
    pub fn proof(&mut self, target: &Type) -> Option<Proof> {
        if !self.reduces_to(target) {
            return None;
        }
        let t = self.ids[target];
        Some(self.build(0, self.choices.len(), t))
    }

    fn build(&self, i: usize, j: usize, t: usize) -> Proof {
        // Walk the peel chain back to the leading type, collecting chunks.
        let mut chunks = Vec::new();
        let mut end = j;
        let mut cur = t;
        let leading = loop {
            match self.memo[&(i, end, cur)].expect("built only from successful entries") {
                Witness::Axiom { alt } => break self.choices[i][alt].clone(),
                Witness::Peel { functor, arg, split } => {
                    chunks.push((split, end, arg));
                    end = split;
                    cur = functor;
                }
            }
        };
        chunks.reverse();
        self.build_spine(leading, &chunks)
    }

    fn build_spine(&self, leading: Type, chunks: &[(usize, usize, usize)]) -> Proof {
        let Some((&(s, e, arg), rest)) = chunks.split_first() else {
            return Proof::axiom(leading);
        };
        let Type::Right(result, _) = &leading else {
            unreachable!("a peeled leading type is a / type")
        };
        let arg_proof = self.build(s, e, arg);
        let main = self.build_spine(result.as_ref().clone(), rest);
        let mut antecedent = vec![leading.clone()];
        antecedent.extend_from_slice(&arg_proof.conclusion.antecedent);
        antecedent.extend_from_slice(&main.conclusion.antecedent[1..]);
        let conclusion = Sequent::new(antecedent, main.conclusion.consequent.clone());
        Proof::node(conclusion, Rule::SlashLeft, vec![arg_proof, main], Some(0))
    }
}

/// Whether `seq → target` is derivable in L(/→). All types must be `/`-only.
pub fn reduce_slash(seq: &[Type], target: &Type) -> Result<bool, RecognizerError> {
    check_target(target, &SLASH_ONLY)?;
    Ok(ReductionTable::new(seq)?.reduces_to(target))
}

/// [`reduce_slash`] plus the reconstructed cut-free proof.
pub fn reduce_slash_with_proof(seq: &[Type], target: &Type) -> Result<Option<Proof>, RecognizerError> {
    check_target(target, &SLASH_ONLY)?;
    Ok(ReductionTable::new(seq)?.proof(target))
}

fn check_target(target: &Type, restriction: &TypeRestriction) -> Result<(), RecognizerError> {
    if !target.in_fragment(restriction) {
        return Err(RecognizerError::OutsideFragment(target.clone()));
    }
    Ok(())
}

const DEGREE_ONE: TypeRestriction = TypeRestriction {
    connectives: ConnectiveSet::SLASHES,
    max_degree: Some(1),
};

const DEGREE_ONE_SLASH: TypeRestriction = TypeRestriction {
    connectives: ConnectiveSet::SLASH,
    max_degree: Some(1),
};

fn primitive_target(target: &Type) -> Result<&str, RecognizerError> {
    target
        .as_primitive()
        .ok_or_else(|| RecognizerError::TargetNotPrimitive(target.clone()))
}

/// Whether some pick from `choices` reduces to the primitive `target` in
/// L(/→, \→), with every type of degree at most one.
///
/// A span reduces to `X` when it is the single type `X`, when it starts with
/// `X/A` and the rest reduces to `A`, or when it ends with `A\X` and the
/// front reduces to `A`.
pub fn reduce_linear_choices(choices: &[Vec<Type>], target: &Type) -> Result<bool, RecognizerError> {
    let n = check_choices(choices, &DEGREE_ONE)?;
    let target = primitive_target(target)?;
    let mut memo: HashMap<(usize, usize, &str), bool> = HashMap::new();
    Ok(linear_span(choices, 0, n, target, &mut memo))
}

fn linear_span<'a>(choices: &'a [Vec<Type>], i: usize, j: usize, x: &'a str, memo: &mut HashMap<(usize, usize, &'a str), bool>) -> bool {
    if let Some(&v) = memo.get(&(i, j, x)) {
        return v;
    }
    let found = if j == i + 1 {
        choices[i].iter().any(|t| t.as_primitive() == Some(x))
    } else {
        let from_left = choices[i].iter().any(|t| match t {
            Type::Right(result, arg) if result.as_primitive() == Some(x) => {
                linear_span(choices, i + 1, j, arg.as_primitive().unwrap(), memo)
            }
            _ => false,
        });
        from_left
            || choices[j - 1].iter().any(|t| match t {
                Type::Left(arg, result) if result.as_primitive() == Some(x) => {
                    linear_span(choices, i, j - 1, arg.as_primitive().unwrap(), memo)
                }
                _ => false,
            })
    };
    memo.insert((i, j, x), found);
    found
}

pub fn reduce_linear(seq: &[Type], target: &Type) -> Result<bool, RecognizerError> {
    let choices: Vec<Vec<Type>> = seq.iter().map(|t| vec![t.clone()]).collect();
    reduce_linear_choices(&choices, target)
}

/// The `/`-only degree-one case as a left-to-right pass. The state is the
/// set of primitives the remaining suffix must reduce to.
pub fn reduce_regular_choices(choices: &[Vec<Type>], target: &Type) -> Result<bool, RecognizerError> {
    let n = check_choices(choices, &DEGREE_ONE_SLASH)?;
    let target = primitive_target(target)?;
    let mut needed: BTreeSet<&str> = [target].into();
    for alts in &choices[..n - 1] {
        let next: BTreeSet<&str> = alts
            .iter()
            .filter_map(|t| match t {
                Type::Right(result, arg) if needed.contains(result.as_primitive()?) => arg.as_primitive(),
                _ => None,
            })
            .collect();
        if next.is_empty() {
            return Ok(false);
        }
        needed = next;
    }
    Ok(choices[n - 1]
        .iter()
        .any(|t| t.as_primitive().is_some_and(|p| needed.contains(p))))
}

pub fn reduce_regular(seq: &[Type], target: &Type) -> Result<bool, RecognizerError> {
    let choices: Vec<Vec<Type>> = seq.iter().map(|t| vec![t.clone()]).collect();
    reduce_regular_choices(&choices, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::CalculusConfig;
    use crate::prover::{prove, validate};

    fn ts(s: &str) -> Vec<Type> {
        s.split(',').map(|x| x.parse().unwrap()).collect()
    }

    fn t(s: &str) -> Type {
        s.parse().unwrap()
    }

    #[test]
    fn slash_examples() {
        assert!(reduce_slash(&ts("S"), &t("S")).unwrap());
        assert!(reduce_slash(&ts("(S/B)/S, S/B, B, B"), &t("S")).unwrap());
        assert!(!reduce_slash(&ts("S/B, S"), &t("S")).unwrap());
        // complex target: only the outer argument is peeled
        assert!(reduce_slash(&ts("(S/B)/A, A"), &t("S/B")).unwrap());
        assert!(!reduce_slash(&ts("(S/B)/A, B"), &t("S/B")).unwrap());
    }

    #[test]
    fn slash_chunks_follow_the_spine() {
        let mut table = ReductionTable::new(&ts("(S/B)/S, S/B, B, B")).unwrap();
        assert!(table.reduces_to(&t("S")));
        // Δ1 = [S/B, B] → S and Δ2 = [B] → B
        assert!(table.span_reduces_to(1, 3, &t("S")));
        assert!(table.span_reduces_to(3, 4, &t("B")));
        let p = table.proof(&t("S")).unwrap();
        assert_eq!(p.conclusion, "(S/B)/S, S/B, B, B -> S".parse().unwrap());
        assert!(validate(&p, &CalculusConfig::slash_left()).is_empty());
        assert_eq!(p.premises[0].conclusion, "S/B, B -> S".parse().unwrap());
    }

    #[test]
    fn slash_rejects_bad_input() {
        assert_eq!(reduce_slash(&[], &t("S")), Err(RecognizerError::EmptySequence));
        assert!(matches!(reduce_slash(&ts("A\\S"), &t("S")), Err(RecognizerError::OutsideFragment(_))));
    }

    #[test]
    fn choices_pick_independently() {
        // a^n b^n lexicon, "aabb" and "abab"
        let a = ts("(S/B)/S, S/B");
        let b = ts("B");
        let mut yes = ReductionTable::with_choices(vec![a.clone(), a.clone(), b.clone(), b.clone()]).unwrap();
        assert!(yes.reduces_to(&t("S")));
        let p = yes.proof(&t("S")).unwrap();
        assert_eq!(p.conclusion.antecedent, ts("(S/B)/S, S/B, B, B"));
        let mut no = ReductionTable::with_choices(vec![a.clone(), b.clone(), a, b]).unwrap();
        assert!(!no.reduces_to(&t("S")));
    }

    #[test]
    fn linear_examples() {
        assert!(reduce_linear(&ts("S"), &t("S")).unwrap());
        assert!(reduce_linear(&ts("S/A, S, S\\A"), &t("S")).unwrap());
        assert!(prove(&"S/A, S, S\\A -> S".parse().unwrap(), &CalculusConfig::slash_backslash_left()).unwrap().provable);
        assert!(!reduce_linear(&ts("S/A"), &t("S")).unwrap());
        assert!(matches!(reduce_linear(&ts("(S/A)/A"), &t("S")), Err(RecognizerError::OutsideFragment(_))));
        assert!(matches!(reduce_linear(&ts("S*A"), &t("S")), Err(RecognizerError::OutsideFragment(_))));
        assert!(matches!(reduce_linear(&ts("S"), &t("S/A")), Err(RecognizerError::TargetNotPrimitive(_))));
    }

    #[test]
    fn regular_examples() {
        assert!(reduce_regular(&ts("S/S, S/S, S"), &t("S")).unwrap());
        assert!(reduce_regular(&ts("S"), &t("S")).unwrap());
        assert!(!reduce_regular(&ts("S/S"), &t("S")).unwrap());
        assert!(matches!(reduce_regular(&ts("A\\S"), &t("S")), Err(RecognizerError::OutsideFragment(_))));
    }

    #[test]
    fn memo_stays_quadratic() {
        let ty = t("(S/S)/S");
        for n in [8usize, 16, 32, 64] {
            let seq = vec![ty.clone(); n];
            let mut table = ReductionTable::new(&seq).unwrap();
            table.reduces_to(&t("S"));
            let bound = n * (n + 1) / 2 * table.target_count();
            assert!(table.memo_len() <= bound, "n={n}: {} > {bound}", table.memo_len());
        }
    }
}
