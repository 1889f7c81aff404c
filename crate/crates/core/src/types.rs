//! Lambek types: primitives closed under `/`, `\` and the product.
//!
//! Surface syntax, used by [`Type`]'s `Display` and `FromStr`:
//!
//! * `/` is left-associative: `S/B/A` is `(S/B)/A`.
//! * `\` is right-associative: `A\B\S` is `A\(B\S)`.
//! * the product (`*` or `·`) binds tighter than either slash.
//! * `/` binds loosest, so `A\S/B` is `(A\S)/B`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::config::{Connective, ConnectiveSet, TypeRestriction};

/// A Lambek type.
///
/// Equality, hashing and ordering are structural. The derived ordering is the
/// canonical total order used wherever sets of types are printed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Prim(Arc<str>),
    /// `result / arg`
    Right(Arc<Type>, Arc<Type>),
    /// `arg \ result`
    Left(Arc<Type>, Arc<Type>),
    Product(Arc<Type>, Arc<Type>),
}

/// One way of reading a `/`-type as a head applied to arguments.
///
/// `args[0]` is the outermost argument, the one consumed first by the
/// type's right neighbours: `(S/B)/A` splits as head `S` with args `[A, B]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Spine {
    pub head: Type,
    pub args: Vec<Type>,
}

impl Spine {
    /// Re-nests the arguments onto the head.
    pub fn assemble(&self) -> Type {
        self.args
            .iter()
            .rev()
            .fold(self.head.clone(), |acc, arg| Type::over(acc, arg.clone()))
    }
}

impl Type {
    pub fn prim(name: impl AsRef<str>) -> Type {
        Type::Prim(Arc::from(name.as_ref()))
    }

    /// `result / arg`
    pub fn over(result: Type, arg: Type) -> Type {
        Type::Right(Arc::new(result), Arc::new(arg))
    }

    /// `arg \ result`
    pub fn under(arg: Type, result: Type) -> Type {
        Type::Left(Arc::new(arg), Arc::new(result))
    }

    pub fn product(left: Type, right: Type) -> Type {
        Type::Product(Arc::new(left), Arc::new(right))
    }

    pub fn is_primitive(&self) -> bool {
        matches!(self, Type::Prim(_))
    }

    pub fn as_primitive(&self) -> Option<&str> {
        match self {
            Type::Prim(name) => Some(name),
            _ => None,
        }
    }

    /// The top-level connective, if any.
    pub fn connective(&self) -> Option<Connective> {
        match self {
            Type::Prim(_) => None,
            Type::Right(..) => Some(Connective::Slash),
            Type::Left(..) => Some(Connective::Backslash),
            Type::Product(..) => Some(Connective::Product),
        }
    }

    fn children(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Prim(_) => None,
            Type::Right(a, b) | Type::Left(a, b) | Type::Product(a, b) => Some((a, b)),
        }
    }

    /// Number of connective occurrences.
    pub fn degree(&self) -> usize {
        match self.children() {
            None => 0,
            Some((a, b)) => 1 + a.degree() + b.degree(),
        }
    }

    /// The set of connectives occurring anywhere in the type.
    pub fn connectives(&self) -> ConnectiveSet {
        let mut set = ConnectiveSet::empty();
        self.collect_connectives(&mut set);
        set
    }

    fn collect_connectives(&self, set: &mut ConnectiveSet) {
        if let Some(c) = self.connective() {
            set.insert(c);
        }
        if let Some((a, b)) = self.children() {
            a.collect_connectives(set);
            b.collect_connectives(set);
        }
    }

    pub fn in_fragment(&self, restriction: &TypeRestriction) -> bool {
        restriction.connectives.contains_all(self.connectives())
            && restriction.max_degree.is_none_or(|max| self.degree() <= max)
    }

    /// Every way of peeling arguments off the left-nested `/` chain, by
    /// increasing number of arguments. The first entry is always `(self, [])`.
    pub fn spine_decompositions(&self) -> Vec<Spine> {
        let mut chain = Vec::new();
        let mut cur = self;
        while let Type::Right(result, arg) = cur {
            chain.push(arg.as_ref().clone());
            cur = result;
        }
        // chain[0] is the outermost argument; a split with k args keeps the
        // first k and leaves the rest in the head.
        let mut out = Vec::with_capacity(chain.len() + 1);
        let mut head = self;
        for k in 0..=chain.len() {
            out.push(Spine {
                head: head.clone(),
                args: chain[..k].to_vec(),
            });
            if let Type::Right(result, _) = head {
                head = result;
            }
        }
        out
    }

    /// All subtrees, including the type itself.
    pub fn subtypes(&self) -> BTreeSet<Type> {
        let mut out = BTreeSet::new();
        self.collect_subtypes(&mut out);
        out
    }

    pub(crate) fn collect_subtypes(&self, out: &mut BTreeSet<Type>) {
        if out.insert(self.clone()) {
            if let Some((a, b)) = self.children() {
                a.collect_subtypes(out);
                b.collect_subtypes(out);
            }
        }
    }

    /// Names of the primitive types occurring in the type.
    pub fn primitives(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_primitives(&mut out);
        out
    }

    fn collect_primitives<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Type::Prim(name) => {
                out.insert(name);
            }
            _ => {
                let (a, b) = self.children().unwrap();
                a.collect_primitives(out);
                b.collect_primitives(out);
            }
        }
    }

    /// Every compound wrapped in parentheses, with no whitespace:
    /// `(S/B)/S` renders as `((S/B)/S)`. Primitives render bare.
    ///
    /// The result is a single token, so it doubles as a grammar symbol name.
    pub fn fully_parenthesized(&self) -> String {
        let mut out = String::new();
        self.write_full(&mut out);
        out
    }

    fn write_full(&self, out: &mut String) {
        match self {
            Type::Prim(name) => out.push_str(name),
            _ => {
                let (a, b) = self.children().unwrap();
                out.push('(');
                a.write_full(out);
                out.push(self.connective().unwrap().symbol());
                b.write_full(out);
                out.push(')');
            }
        }
    }
}

// Precedence levels for minimal parenthesization: products are atoms to both
// slashes, `\` operands may not be `/`-types, and `/` takes anything on its
// left.
fn write_operand(t: &Type, parens: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if parens {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Prim(name) => f.write_str(name),
            Type::Right(result, arg) => {
                write_operand(result, false, f)?;
                f.write_str("/")?;
                write_operand(arg, matches!(**arg, Type::Right(..)), f)
            }
            Type::Left(arg, result) => {
                write_operand(arg, matches!(**arg, Type::Right(..) | Type::Left(..)), f)?;
                f.write_str("\\")?;
                write_operand(result, matches!(**result, Type::Right(..)), f)
            }
            Type::Product(l, r) => {
                write_operand(l, matches!(**l, Type::Right(..) | Type::Left(..)), f)?;
                f.write_str("*")?;
                write_operand(r, !r.is_primitive(), f)
            }
        }
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// True for nonempty strings over letters, digits, `_` and `'`.
pub fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_ident_char)
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// A syntax error in a type or sequent, with a 1-based column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct TypeSyntaxError {
    pub column: usize,
    pub message: String,
}

impl TypeSyntaxError {
    fn new(column: usize, message: impl Into<String>) -> Self {
        TypeSyntaxError {
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Slash,
    Backslash,
    Star,
    Open,
    Close,
}

fn tokenize(src: &str) -> Result<Vec<(Token, usize)>, TypeSyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '/' => Token::Slash,
            '\\' => Token::Backslash,
            '*' | '·' => Token::Star,
            '(' => Token::Open,
            ')' => Token::Close,
            c if is_ident_char(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                out.push((Token::Ident(chars[start..i].iter().collect()), col));
                continue;
            }
            other => return Err(TypeSyntaxError::new(col, format!("unexpected character `{other}`"))),
        };
        out.push((tok, col));
        i += 1;
    }
    Ok(out)
}

struct TypeParser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end_col: usize,
}

impl TypeParser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    // slash := left ('/' left)*
    fn slash(&mut self) -> Result<Type, TypeSyntaxError> {
        let mut acc = self.left()?;
        while self.peek() == Some(&Token::Slash) {
            self.pos += 1;
            let arg = self.left()?;
            acc = Type::over(acc, arg);
        }
        Ok(acc)
    }

    // left := product ('\' left)?
    fn left(&mut self) -> Result<Type, TypeSyntaxError> {
        let arg = self.product()?;
        if self.peek() == Some(&Token::Backslash) {
            self.pos += 1;
            let result = self.left()?;
            return Ok(Type::under(arg, result));
        }
        Ok(arg)
    }

    // product := atom ('*' atom)*
    fn product(&mut self) -> Result<Type, TypeSyntaxError> {
        let mut acc = self.atom()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            let rhs = self.atom()?;
            acc = Type::product(acc, rhs);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Type, TypeSyntaxError> {
        let col = self.col();
        match self.tokens.get(self.pos).cloned() {
            Some((Token::Ident(name), _)) => {
                self.pos += 1;
                Ok(Type::prim(name))
            }
            Some((Token::Open, _)) => {
                self.pos += 1;
                let inner = self.slash()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(TypeSyntaxError::new(self.col(), "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => Err(TypeSyntaxError::new(col, "expected a type")),
            None => Err(TypeSyntaxError::new(col, "unexpected end of input")),
        }
    }
}

/// Parses a type in the surface syntax described in the module docs.
pub fn parse_type(src: &str) -> Result<Type, TypeSyntaxError> {
    let tokens = tokenize(src)?;
    let mut p = TypeParser {
        tokens,
        pos: 0,
        end_col: src.chars().count() + 1,
    };
    let t = p.slash()?;
    if p.pos != p.tokens.len() {
        return Err(TypeSyntaxError::new(p.col(), "trailing input after type"));
    }
    Ok(t)
}

impl FromStr for Type {
    type Err = TypeSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_type(s)
    }
}
