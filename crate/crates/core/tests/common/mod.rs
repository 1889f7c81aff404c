#![allow(dead_code)]

use lambek::{parse_grammar_file, Cfg, Proof, Rule, Sequent, Type};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn corpus() -> Vec<(&'static str, Cfg)> {
    let files = [
        ("anbn", include_str!("../../corpus/anbn.cfg")),
        ("anban", include_str!("../../corpus/anban.cfg")),
        ("anban_linear", include_str!("../../corpus/anban_linear.cfg")),
        ("dyck", include_str!("../../corpus/dyck.cfg")),
        ("aplus", include_str!("../../corpus/aplus.cfg")),
        ("abplus", include_str!("../../corpus/abplus.cfg")),
        ("a", include_str!("../../corpus/a.cfg")),
    ];
    files
        .into_iter()
        .map(|(name, text)| (name, parse_grammar_file(text).unwrap()))
        .collect()
}

pub fn grammar(name: &str) -> Cfg {
    corpus().into_iter().find(|(n, _)| *n == name).unwrap().1
}

/// All words of length 1..=max over `alphabet`, built by repeated extension.
pub fn words(alphabet: &[&str], max: usize) -> Vec<Vec<String>> {
    let mut layer: Vec<Vec<String>> = vec![vec![]];
    let mut all = Vec::new();
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &layer {
            for a in alphabet {
                let mut v = w.clone();
                v.push(a.to_string());
                next.push(v);
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

pub fn t(s: &str) -> Type {
    s.parse().unwrap()
}

pub fn seq(s: &str) -> Sequent {
    s.parse().unwrap()
}

/// Every type over `prims` with at most `max_degree` connectives, using `/`
/// and optionally `\`.
pub fn all_types(prims: &[&str], max_degree: usize, backslash: bool) -> Vec<Type> {
    let mut by_degree: Vec<Vec<Type>> = vec![prims.iter().map(|p| Type::prim(*p)).collect()];
    for d in 1..=max_degree {
        let mut layer = Vec::new();
        for dl in 0..d {
            let dr = d - 1 - dl;
            for l in &by_degree[dl] {
                for r in &by_degree[dr] {
                    layer.push(Type::over(l.clone(), r.clone()));
                    if backslash {
                        layer.push(Type::under(l.clone(), r.clone()));
                    }
                }
            }
        }
        by_degree.push(layer);
    }
    by_degree.concat()
}

/// Naive cut-free provability with Axiom and the left rules, straight from
/// the rule schemas, with no memoization.
///
/// `/L`: from `Δ → β` and `Γ1, α, Γ2 → γ` infer `Γ1, α/β, Δ, Γ2 → γ`.
/// `\L`: from `Δ → β` and `Γ1, α, Γ2 → γ` infer `Γ1, Δ, β\α, Γ2 → γ`.
pub fn naive_provable(ant: &[Type], goal: &Type, backslash: bool) -> bool {
    if ant.len() == 1 && ant[0] == *goal {
        return true;
    }
    for i in 0..ant.len() {
        match &ant[i] {
            Type::Right(alpha, beta) => {
                for end in i + 2..=ant.len() {
                    if naive_provable(&ant[i + 1..end], beta, backslash) {
                        let mut rest = ant[..i].to_vec();
                        rest.push((**alpha).clone());
                        rest.extend_from_slice(&ant[end..]);
                        if naive_provable(&rest, goal, backslash) {
                            return true;
                        }
                    }
                }
            }
            Type::Left(beta, alpha) if backslash => {
                for start in 0..i {
                    if naive_provable(&ant[start..i], beta, backslash) {
                        let mut rest = ant[..start].to_vec();
                        rest.push((**alpha).clone());
                        rest.extend_from_slice(&ant[i + 1..]);
                        if naive_provable(&rest, goal, backslash) {
                            return true;
                        }
                    }
                }
            }
            _ => {}
        }
    }
    false
}

/// Checks a proof that uses only Axiom, Cut (if allowed) and the left
/// slash rules, independently of the library's validator.
pub fn check_proof(p: &Proof, allow_cut: bool, backslash: bool) -> Result<(), String> {
    let c = &p.conclusion;
    if c.antecedent.is_empty() {
        return Err(format!("empty antecedent in {c}"));
    }
    let prem: Vec<&Sequent> = p.premises.iter().map(|q| &q.conclusion).collect();
    let ok = match (p.rule, prem.as_slice()) {
        (Rule::Axiom, []) => c.antecedent.len() == 1 && c.antecedent[0] == c.consequent,
        (Rule::Cut, [main, arg]) if allow_cut => (0..main.antecedent.len()).any(|i| {
            let mut ant = main.antecedent[..i].to_vec();
            ant.extend_from_slice(&arg.antecedent);
            ant.extend_from_slice(&main.antecedent[i + 1..]);
            main.antecedent[i] == arg.consequent && ant == c.antecedent && main.consequent == c.consequent
        }),
        (Rule::SlashLeft, [arg, main]) => (0..c.antecedent.len()).any(|i| {
            let Type::Right(alpha, beta) = &c.antecedent[i] else {
                return false;
            };
            let end = i + 1 + arg.antecedent.len();
            if **beta != arg.consequent || arg.antecedent.is_empty() || end > c.antecedent.len() {
                return false;
            }
            let mut ant = c.antecedent[..i].to_vec();
            ant.push((**alpha).clone());
            ant.extend_from_slice(&c.antecedent[end..]);
            c.antecedent[i + 1..end] == arg.antecedent[..] && main.antecedent == ant && main.consequent == c.consequent
        }),
        (Rule::BackslashLeft, [arg, main]) if backslash => (0..c.antecedent.len()).any(|i| {
            let Type::Left(beta, alpha) = &c.antecedent[i] else {
                return false;
            };
            let n = arg.antecedent.len();
            if **beta != arg.consequent || n == 0 || n > i {
                return false;
            }
            let mut ant = c.antecedent[..i - n].to_vec();
            ant.push((**alpha).clone());
            ant.extend_from_slice(&c.antecedent[i + 1..]);
            c.antecedent[i - n..i] == arg.antecedent[..] && main.antecedent == ant && main.consequent == c.consequent
        }),
        _ => false,
    };
    if !ok {
        return Err(format!("bad {:?} step concluding {c}", p.rule));
    }
    p.premises.iter().try_for_each(|q| check_proof(q, allow_cut, backslash))
}

fn axiom(t: &Type) -> Proof {
    Proof::axiom(t.clone())
}

fn cut(main: Proof, arg: Proof, i: usize) -> Proof {
    let m = &main.conclusion;
    let mut ant = m.antecedent[..i].to_vec();
    ant.extend_from_slice(&arg.conclusion.antecedent);
    ant.extend_from_slice(&m.antecedent[i + 1..]);
    let conclusion = Sequent::new(ant, m.consequent.clone());
    Proof::node(conclusion, Rule::Cut, vec![main, arg], Some(i))
}

/// A proof of `[β/c, c] → β` (or `[c, c\β] → β`).
fn apply_proof(beta: &Type, c: &Type, backslash: bool) -> Proof {
    if backslash {
        let f = Type::under(c.clone(), beta.clone());
        let s = Sequent::new(vec![c.clone(), f], beta.clone());
        Proof::node(s, Rule::BackslashLeft, vec![axiom(c), axiom(beta)], Some(1))
    } else {
        let f = Type::over(beta.clone(), c.clone());
        let s = Sequent::new(vec![f, c.clone()], beta.clone());
        Proof::node(s, Rule::SlashLeft, vec![axiom(c), axiom(beta)], Some(0))
    }
}

/// A random proof of some `Δ → β`, with cuts, using at most `budget`
/// extra connectives.
fn random_for<R: Rng>(rng: &mut R, beta: &Type, prims: &[Type], backslash: bool, budget: usize) -> Proof {
    if budget == 0 || rng.gen_bool(0.2) {
        return axiom(beta);
    }
    let c = prims.choose(rng).unwrap();
    let use_back = backslash && rng.gen_bool(0.5);
    let base = apply_proof(beta, c, use_back);
    if rng.gen_bool(0.3) {
        // pass through a cut against an axiom
        return cut(base, axiom(c), if use_back { 0 } else { 1 });
    }
    // expand one antecedent position by a further cut
    let pos = rng.gen_range(0..2);
    let target = base.conclusion.antecedent[pos].clone();
    let inner = random_for(rng, &target, prims, backslash, budget - 1);
    cut(base, inner, pos)
}

/// A random valid proof containing at least one Cut, whose endsequent has
/// at most `max_connectives` connectives.
pub fn random_cut_proof<R: Rng>(rng: &mut R, backslash: bool, max_connectives: usize) -> Proof {
    let prims: Vec<Type> = ["A", "B", "C"].iter().map(|p| Type::prim(*p)).collect();
    loop {
        let goal = all_types(&["A", "B", "C"], 2, backslash).choose(rng).unwrap().clone();
        let budget = rng.gen_range(1..=5);
        let first = random_for(rng, &goal, &prims, backslash, budget);
        let pos = rng.gen_range(0..first.conclusion.antecedent.len());
        let target = first.conclusion.antecedent[pos].clone();
        let extra = rng.gen_range(0..=3);
        let second = random_for(rng, &target, &prims, backslash, extra);
        let p = cut(first, second, pos);
        if p.contains_cut() && p.conclusion.connective_count() <= max_connectives {
            return p;
        }
    }
}
