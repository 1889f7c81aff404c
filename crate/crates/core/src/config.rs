//! Calculus configurations: which inference rules are on, which types are
//! admitted, and whether Cut may appear in proofs being validated.

use std::fmt;
use std::ops::BitOr;
use std::str::FromStr;

use crate::sequent::Rule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Connective {
    Slash,
    Backslash,
    Product,
}

impl Connective {
    pub fn symbol(self) -> char {
        match self {
            Connective::Slash => '/',
            Connective::Backslash => '\\',
            Connective::Product => '*',
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ConnectiveSet(u8);

impl ConnectiveSet {
    pub const SLASH: ConnectiveSet = ConnectiveSet(1);
    pub const BACKSLASH: ConnectiveSet = ConnectiveSet(2);
    pub const PRODUCT: ConnectiveSet = ConnectiveSet(4);
    pub const SLASHES: ConnectiveSet = ConnectiveSet(3);
    pub const ALL: ConnectiveSet = ConnectiveSet(7);

    pub fn empty() -> Self {
        ConnectiveSet(0)
    }

    pub fn insert(&mut self, c: Connective) {
        self.0 |= c.bit();
    }

    pub fn contains(self, c: Connective) -> bool {
        self.0 & c.bit() != 0
    }

    pub fn contains_all(self, other: ConnectiveSet) -> bool {
        self.0 & other.0 == other.0
    }
}

impl BitOr for ConnectiveSet {
    type Output = ConnectiveSet;

    fn bitor(self, rhs: Self) -> Self {
        ConnectiveSet(self.0 | rhs.0)
    }
}

impl fmt::Debug for ConnectiveSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let syms: String = [Connective::Slash, Connective::Backslash, Connective::Product]
            .into_iter()
            .filter(|c| self.contains(*c))
            .map(Connective::symbol)
            .collect();
        write!(f, "{{{syms}}}")
    }
}

/// Admissible types: allowed connectives plus an optional degree bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TypeRestriction {
    pub connectives: ConnectiveSet,
    pub max_degree: Option<usize>,
}

impl TypeRestriction {
    pub fn new(connectives: ConnectiveSet, max_degree: Option<usize>) -> Self {
        TypeRestriction {
            connectives,
            max_degree,
        }
    }

    pub fn unrestricted() -> Self {
        TypeRestriction::new(ConnectiveSet::ALL, None)
    }
}

/// A subset of the six inference rules (Axiom is always present; Cut is
/// governed separately by [`CalculusConfig::allow_cut`]).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RuleSet(u8);

impl RuleSet {
    pub fn empty() -> Self {
        RuleSet(0)
    }

    pub fn all() -> Self {
        Rule::INFERENCE.into_iter().collect()
    }

    fn bit(rule: Rule) -> u8 {
        match Rule::INFERENCE.iter().position(|r| *r == rule) {
            Some(i) => 1 << i,
            None => 0,
        }
    }

    pub fn insert(&mut self, rule: Rule) {
        self.0 |= Self::bit(rule);
    }

    pub fn contains(self, rule: Rule) -> bool {
        let bit = Self::bit(rule);
        bit != 0 && self.0 & bit != 0
    }

    pub fn is_subset(self, other: RuleSet) -> bool {
        self.0 & other.0 == self.0
    }

    pub fn iter(self) -> impl Iterator<Item = Rule> {
        Rule::INFERENCE.into_iter().filter(move |r| self.contains(*r))
    }
}

impl FromIterator<Rule> for RuleSet {
    fn from_iter<I: IntoIterator<Item = Rule>>(iter: I) -> Self {
        let mut set = RuleSet::empty();
        for r in iter {
            set.insert(r);
        }
        set
    }
}

impl fmt::Debug for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<&str> = self.iter().map(Rule::label).collect();
        write!(f, "{}", labels.join(","))
    }
}

/// Parses comma-separated rule labels such as `/L,\L`.
impl FromStr for RuleSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut set = RuleSet::empty();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let rule: Rule = part.parse()?;
            if !Rule::INFERENCE.contains(&rule) {
                return Err(format!("`{part}` is not an inference rule"));
            }
            set.insert(rule);
        }
        Ok(set)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CalculusConfig {
    pub rules: RuleSet,
    pub allow_cut: bool,
    pub restriction: TypeRestriction,
}

impl CalculusConfig {
    pub fn new(rules: RuleSet, restriction: TypeRestriction) -> Self {
        CalculusConfig {
            rules,
            allow_cut: false,
            restriction,
        }
    }

    /// L(/→) over `/`-only types.
    pub fn slash_left() -> Self {
        Self::new(
            [Rule::SlashLeft].into_iter().collect(),
            TypeRestriction::new(ConnectiveSet::SLASH, None),
        )
    }

    /// L(/→, \→) over `/`- and `\`-types.
    pub fn slash_backslash_left() -> Self {
        Self::new(
            [Rule::SlashLeft, Rule::BackslashLeft].into_iter().collect(),
            TypeRestriction::new(ConnectiveSet::SLASH | ConnectiveSet::BACKSLASH, None),
        )
    }

    /// The full calculus with all six rules.
    pub fn full() -> Self {
        Self::new(RuleSet::all(), TypeRestriction::unrestricted())
    }

    pub fn with_cut(mut self, allow: bool) -> Self {
        self.allow_cut = allow;
        self
    }

    pub fn with_max_degree(mut self, max: Option<usize>) -> Self {
        self.restriction.max_degree = max;
        self
    }

    pub fn with_connectives(mut self, connectives: ConnectiveSet) -> Self {
        self.restriction.connectives = connectives;
        self
    }
}

impl fmt::Display for CalculusConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({})", self.rules)?;
        if self.allow_cut {
            f.write_str("+Cut")?;
        }
        write!(f, " over {:?}", self.restriction.connectives)?;
        if let Some(d) = self.restriction.max_degree {
            write!(f, " degree<={d}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_fragments() {
        let l = CalculusConfig::slash_left();
        assert_eq!(l.rules.iter().collect::<Vec<_>>(), vec![Rule::SlashLeft]);
        let lb = CalculusConfig::slash_backslash_left();
        assert_eq!(
            lb.rules.iter().collect::<Vec<_>>(),
            vec![Rule::SlashLeft, Rule::BackslashLeft]
        );
        assert_eq!(CalculusConfig::full().rules.iter().count(), 6);
        assert!(l.rules.is_subset(lb.rules));
        assert!(!lb.rules.is_subset(l.rules));
    }

    #[test]
    fn rule_set_parsing() {
        let set: RuleSet = "/L,\\L".parse().unwrap();
        assert_eq!(set, CalculusConfig::slash_backslash_left().rules);
        assert!("Cut".parse::<RuleSet>().is_err());
        assert!("/Q".parse::<RuleSet>().is_err());
        assert_eq!(set.to_string(), "/L,\\L");
    }
}
