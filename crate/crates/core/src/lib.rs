//! The Lambek calculus and its implicational fragments, with translations
//! to and from context-free, linear and regular grammars.
//!
//! - [`types`], [`sequent`]: types, sequents, proofs, and their syntax.
//! - [`prover`]: cut-free backward proof search for any subset of the six
//!   inference rules, proof validation and cut elimination.
//! - [`recognizer`]: polynomial deciders for the `/`-only and degree-one
//!   fragments.
//! - [`grammar`], [`transform`]: grammars, lexicons and the translations
//!   between them.
//! - [`oracle`]: membership deciders and the bounded cross-checking harness.
//! - [`format`]: grammar and lexicon file formats.
//!
//! ```
//! use lambek::{prove, CalculusConfig, Sequent};
//!
//! let s: Sequent = "S/B/S, S/B, B, B -> S".parse().unwrap();
//! let result = prove(&s, &CalculusConfig::slash_left()).unwrap();
//! assert!(result.provable);
//! ```

pub mod config;
pub mod format;
pub mod grammar;
pub mod oracle;
pub mod prover;
pub mod recognizer;
pub mod sequent;
pub mod transform;
pub mod types;

pub use config::{CalculusConfig, Connective, ConnectiveSet, RuleSet, TypeRestriction};
pub use format::{parse_document, parse_grammar_file, parse_lexicon_file, print_grammar, print_lexicon, Diagnostic, Document};
pub use grammar::{classify_cfg, Cfg, Classification, GrammarError, LambekGrammar, Production, Symbol};
pub use oracle::{
    cfg_member, crosscheck, cyk_member, enumerate_strings, gnf_member, lambek_member, CrosscheckReport, Decider, OracleError,
};
pub use prover::{eliminate_cut, prove, validate, ProveError, Prover, SearchResult};
pub use recognizer::{reduce_linear, reduce_regular, reduce_slash, RecognizerError};
pub use sequent::{Proof, Rule, Sequent};
pub use transform::{
    cfg_to_lambek, lambek_to_cfg, lambek_to_lcfg, lambek_to_reg, lcfg_to_lambek, reg_to_lambek, to_gnf, TransformError,
};
pub use types::{parse_type, Type, TypeSyntaxError};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/types.md")]
    mod types {}
    #[doc = include_str!("../../../book/src/proofs.md")]
    mod proofs {}
    #[doc = include_str!("../../../book/src/recognition.md")]
    mod recognition {}
    #[doc = include_str!("../../../book/src/translations.md")]
    mod translations {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/files.md")]
    mod files {}
}
