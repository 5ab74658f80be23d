//! Identifiers and the namespaces they live in.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Lexical class of a name. Type and term symbols are global (theory-level),
/// variables are local, and `Generated` marks names minted by the tool
/// itself (PER relations, subtype functions, obligation ids, fresh binders).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Namespace {
    TypeSymbol,
    TermSymbol,
    TypeVariable,
    TermVariable,
    Generated,
}

/// A named entity. Equality and ordering include the namespace, so a term
/// variable `n` and a type variable `N` never alias even after mangling.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Name {
    pub text: String,
    pub space: Namespace,
}

/// Suffixes reserved for generated names. User identifiers containing any of
/// these are rejected at parse time so erasure output never collides.
pub const RESERVED_SUFFIXES: [&str; 4] = ["_per", "_abs", "_rep", "_tco"];

impl Name {
    pub fn new(text: impl Into<String>, space: Namespace) -> Self {
        let text = text.into();
        debug_assert!(!text.is_empty(), "names must be nonempty");
        Name { text, space }
    }

    pub fn type_sym(text: impl Into<String>) -> Self {
        Name::new(text, Namespace::TypeSymbol)
    }

    pub fn term_sym(text: impl Into<String>) -> Self {
        Name::new(text, Namespace::TermSymbol)
    }

    pub fn type_var(text: impl Into<String>) -> Self {
        Name::new(text, Namespace::TypeVariable)
    }

    pub fn term_var(text: impl Into<String>) -> Self {
        Name::new(text, Namespace::TermVariable)
    }

    pub fn generated(text: impl Into<String>) -> Self {
        Name::new(text, Namespace::Generated)
    }

    /// The synthesized PER relation name for a type symbol or type variable.
    pub fn per(&self) -> Name {
        Name::generated(format!("{}_per", self.text))
    }

    /// Abstraction/representation function names for a subtype definition.
    pub fn abs(&self) -> Name {
        Name::generated(format!("{}_abs", self.text))
    }

    pub fn rep(&self) -> Name {
        Name::generated(format!("{}_rep", self.text))
    }

    /// Obligation id `<base>_tco<k>`.
    pub fn tco(base: &str, k: usize) -> Name {
        Name::generated(format!("{base}_tco{k}"))
    }

    /// Deterministic fresh name: append `'` until the text avoids `taken`.
    pub fn freshen(&self, taken: &BTreeSet<Name>) -> Name {
        let mut candidate = self.clone();
        while taken.contains(&candidate) {
            candidate.text.push('\'');
        }
        candidate
    }

    /// True when the text uses one of the generated-name suffixes anywhere;
    /// the parser rejects such user identifiers.
    pub fn uses_reserved_suffix(text: &str) -> bool {
        RESERVED_SUFFIXES.iter().any(|s| text.contains(s))
    }

    /// Lexical check for user-written identifiers: letter start with the case
    /// demanded by the namespace, followed by letters, digits, `_` or `'`.
    pub fn is_valid_surface(text: &str, space: Namespace) -> bool {
        let mut chars = text.chars();
        let Some(first) = chars.next() else {
            return false;
        };
        let case_ok = match space {
            Namespace::TypeVariable => first.is_ascii_uppercase(),
            Namespace::Generated => first.is_ascii_alphabetic(),
            _ => first.is_ascii_lowercase(),
        };
        case_ok && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}
