use std::fmt;
use std::str::FromStr;

use crate::types::{parse_type, Type, TypeSyntaxError};

/// `antecedent -> consequent`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub antecedent: Vec<Type>,
    pub consequent: Type,
}

impl Sequent {
    pub fn new(antecedent: Vec<Type>, consequent: Type) -> Self {
        Sequent {
            antecedent,
            consequent,
        }
    }

    /// Total number of connective occurrences on both sides.
    pub fn connective_count(&self) -> usize {
        self.antecedent.iter().map(Type::degree).sum::<usize>() + self.consequent.degree()
    }

    pub fn types(&self) -> impl Iterator<Item = &Type> {
        self.antecedent.iter().chain(std::iter::once(&self.consequent))
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.antecedent.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, " -> {}", self.consequent)
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `A, B/C -> D`. An empty antecedent parses (so that validation can
/// complain about it) but provability queries reject it.
impl FromStr for Sequent {
    type Err = TypeSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let Some(arrow) = s.find("->") else {
            return Err(TypeSyntaxError {
                column: s.chars().count() + 1,
                message: "expected `->`".into(),
            });
        };
        let shift = |e: TypeSyntaxError, offset: usize| TypeSyntaxError {
            column: e.column + offset,
            message: e.message,
        };
        let (lhs, rhs) = (&s[..arrow], &s[arrow + 2..]);
        let mut antecedent = Vec::new();
        if !lhs.trim().is_empty() {
            let mut offset = 0;
            for part in lhs.split(',') {
                let t = parse_type(part).map_err(|e| shift(e, offset))?;
                antecedent.push(t);
                offset += part.chars().count() + 1;
            }
        }
        let consequent =
            parse_type(rhs).map_err(|e| shift(e, s[..arrow + 2].chars().count()))?;
        Ok(Sequent::new(antecedent, consequent))
    }
}

/// Rule labels. `Axiom` and `Cut` are not inference rules in the sense of
/// [`RuleSet`](crate::config::RuleSet); the other six are.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Axiom,
    Cut,
    /// (/→)
    SlashLeft,
    /// (\→)
    BackslashLeft,
    /// (·→)
    ProductLeft,
    /// (→/)
    SlashRight,
    /// (→\)
    BackslashRight,
    /// (→·)
    ProductRight,
}

impl Rule {
    pub const INFERENCE: [Rule; 6] = [
        Rule::SlashLeft,
        Rule::BackslashLeft,
        Rule::ProductLeft,
        Rule::SlashRight,
        Rule::BackslashRight,
        Rule::ProductRight,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Rule::Axiom => "Ax",
            Rule::Cut => "Cut",
            Rule::SlashLeft => "/L",
            Rule::BackslashLeft => "\\L",
            Rule::ProductLeft => "*L",
            Rule::SlashRight => "/R",
            Rule::BackslashRight => "\\R",
            Rule::ProductRight => "*R",
        }
    }

    /// Number of premises the schema requires.
    pub fn arity(self) -> usize {
        match self {
            Rule::Axiom => 0,
            Rule::ProductLeft | Rule::SlashRight | Rule::BackslashRight => 1,
            Rule::Cut | Rule::SlashLeft | Rule::BackslashLeft | Rule::ProductRight => 2,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "Ax" | "Axiom" => Rule::Axiom,
            "Cut" => Rule::Cut,
            "/L" | "/->" => Rule::SlashLeft,
            "\\L" | "\\->" => Rule::BackslashLeft,
            "*L" | "·L" | "*->" => Rule::ProductLeft,
            "/R" | "->/" => Rule::SlashRight,
            "\\R" | "->\\" => Rule::BackslashRight,
            "*R" | "·R" | "->*" => Rule::ProductRight,
            other => return Err(format!("unknown rule `{other}`")),
        })
    }
}

/// A proof tree.
///
/// Premise order follows the rule schemas:
///
/// * Cut: `[Γ, α, Θ → β, Δ → α]`; `position` is where Δ starts in the
///   conclusion.
/// * (/→), (\→): `[Γ → α, Δ, β, Θ → γ]`; `position` is the index of the
///   principal type in the conclusion.
/// * (·→): `position` is the index of the principal product.
/// * (→·): `[Γ → α, Δ → β]`; `position` is `|Γ|`.
/// * Axiom, (→/), (→\): no position.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Proof {
    pub conclusion: Sequent,
    pub rule: Rule,
    pub premises: Vec<Proof>,
    pub position: Option<usize>,
}

impl Proof {
    pub fn axiom(t: Type) -> Proof {
        Proof {
            conclusion: Sequent::new(vec![t.clone()], t),
            rule: Rule::Axiom,
            premises: Vec::new(),
            position: None,
        }
    }

    pub fn node(conclusion: Sequent, rule: Rule, premises: Vec<Proof>, position: Option<usize>) -> Proof {
        Proof {
            conclusion,
            rule,
            premises,
            position,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Proof::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Proof::height).max().unwrap_or(0)
    }

    pub fn contains_cut(&self) -> bool {
        self.rule == Rule::Cut || self.premises.iter().any(Proof::contains_cut)
    }

    /// Indented text, one sequent per line with the rule label in brackets,
    /// conclusion first.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        use std::fmt::Write;
        let _ = writeln!(out, "{:indent$}{}  [{}]", "", self.conclusion, self.rule, indent = depth * 2);
        for p in &self.premises {
            p.render_into(out, depth + 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequent_parse_and_print() {
        let s: Sequent = "(S/B)/S, S/B, B, B -> S".parse().unwrap();
        assert_eq!(s.antecedent.len(), 4);
        assert_eq!(s.to_string(), "S/B/S, S/B, B, B -> S");
        assert_eq!(s.connective_count(), 3);
        let empty: Sequent = " -> A/A".parse().unwrap();
        assert!(empty.antecedent.is_empty());
    }

    #[test]
    fn sequent_errors_point_into_the_line() {
        let e = "A, B/ -> C".parse::<Sequent>().unwrap_err();
        assert_eq!(e.column, 7);
        let e = "A, B -> ".parse::<Sequent>().unwrap_err();
        assert_eq!(e.column, 9);
        assert!("A B".parse::<Sequent>().is_err());
    }

    #[test]
    fn render_is_indented() {
        let p = Proof::node(
            "S/B, B -> S".parse().unwrap(),
            Rule::SlashLeft,
            vec![Proof::axiom(Type::prim("B")), Proof::axiom(Type::prim("S"))],
            Some(0),
        );
        assert_eq!(p.render_text(), "S/B, B -> S  [/L]\n  B -> B  [Ax]\n  S -> S  [Ax]\n");
        assert_eq!(p.size(), 3);
        assert_eq!(p.height(), 2);
    }
}
