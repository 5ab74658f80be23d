//! Abstract syntax shared by the source language and its erased form.
//!
//! The erased (polymorphic HOL) fragment uses the same types: it is the
//! sublanguage where base types carry no term arguments, every kind is plain
//! `type`, and every `Pi` is non-dependent.

use std::collections::BTreeSet;
use std::fmt;

use crate::name::{Name, Namespace};

/// Source location, 1-based line/column. Synthetic nodes use all zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
    pub len: u32,
}

impl Span {
    pub const SYNTH: Span = Span { line: 0, col: 0, len: 0 };

    pub fn new(line: u32, col: u32, len: u32) -> Self {
        Span { line, col, len }
    }

    pub fn is_synthetic(&self) -> bool {
        *self == Span::SYNTH
    }
}

/// Classifier of a type variable: `Πx1:A1. … Πxn:An. type`.
/// The telescope binds term variables only.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Kind {
    pub telescope: Vec<(Name, TypeExpr)>,
}

impl Kind {
    /// The plain kind `type`.
    pub fn plain() -> Kind {
        Kind { telescope: Vec::new() }
    }

    pub fn new(telescope: Vec<(Name, TypeExpr)>) -> Kind {
        Kind { telescope }
    }

    pub fn arity(&self) -> usize {
        self.telescope.len()
    }

    pub fn is_plain(&self) -> bool {
        self.telescope.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeExpr {
    /// A declared type symbol applied to its full argument substitution.
    Base { symbol: Name, args: Substitution },
    /// A type variable, applied to term arguments when its kind is dependent.
    Var { variable: Name, term_args: Vec<TermExpr> },
    /// Dependent function type; the binder may occur free in the codomain.
    Pi { binder: Name, domain: Box<TypeExpr>, codomain: Box<TypeExpr> },
    /// The type of Booleans, written `o`.
    Bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermExpr {
    /// A declared term symbol applied to its full argument substitution.
    Const { symbol: Name, args: Substitution },
    Var(Name),
    Lambda { binder: Name, domain: Box<TypeExpr>, body: Box<TermExpr> },
    App { fun: Box<TermExpr>, arg: Box<TermExpr> },
    /// Dependent implication: the right side is well-formed under the left.
    Implies { lhs: Box<TermExpr>, rhs: Box<TermExpr> },
    /// Typed equality. The annotation is optional in source text; the checker
    /// fills it in.
    Eq { ty: Option<Box<TypeExpr>>, lhs: Box<TermExpr>, rhs: Box<TermExpr> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContextEntry {
    TypeVar { name: Name, kind: Kind },
    TermVar { name: Name, ty: TypeExpr },
    Assumption { formula: TermExpr },
}

/// A telescope of local declarations; each entry is well-formed in the
/// prefix before it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Context {
    pub entries: Vec<ContextEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubstEntry {
    /// Substitute for a type variable. `params` is nonempty exactly when the
    /// target variable has a dependent kind (a type-level lambda `λx̄:Ā. A`).
    Type { params: Vec<(Name, TypeExpr)>, body: TypeExpr },
    Term(TermExpr),
    /// Placeholder standing for the proof of an assumption.
    Check,
}

/// Position-wise substitution for a [`Context`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Substitution {
    pub entries: Vec<SubstEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Declaration {
    TypeSym { name: Name, params: Context, span: Span },
    TermSym { name: Name, params: Context, ty: TypeExpr, span: Span },
    Axiom { label: Name, params: Context, formula: TermExpr, span: Span },
    SubtypeDef {
        name: Name,
        params: Context,
        carrier: TypeExpr,
        predicate: TermExpr,
        span: Span,
    },
}

impl Declaration {
    pub fn name(&self) -> &Name {
        match self {
            Declaration::TypeSym { name, .. } => name,
            Declaration::TermSym { name, .. } => name,
            Declaration::Axiom { label, .. } => label,
            Declaration::SubtypeDef { name, .. } => name,
        }
    }

    pub fn span(&self) -> Span {
        match self {
            Declaration::TypeSym { span, .. } => *span,
            Declaration::TermSym { span, .. } => *span,
            Declaration::Axiom { span, .. } => *span,
            Declaration::SubtypeDef { span, .. } => *span,
        }
    }
}

/// The single goal of a problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjecture {
    pub label: Name,
    pub params: Context,
    pub formula: TermExpr,
    pub span: Span,
}

/// Ordered global declarations, conjecture excluded.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Theory {
    pub decls: Vec<Declaration>,
}

/// A theory plus at most one conjecture. Parsing tolerates a missing
/// conjecture; translation and proving demand one.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Problem {
    pub theory: Theory,
    pub conjecture: Option<Conjecture>,
}

// ---------------------------------------------------------------------------
// Construction helpers. These keep the Box noise out of checker and erasure
// code and out of tests.
// ---------------------------------------------------------------------------

impl TypeExpr {
    pub fn base(symbol: Name, args: Substitution) -> TypeExpr {
        TypeExpr::Base { symbol, args }
    }

    /// Reference to a plain (non-dependent) type variable.
    pub fn var(variable: Name) -> TypeExpr {
        TypeExpr::Var { variable, term_args: Vec::new() }
    }

    pub fn var_app(variable: Name, term_args: Vec<TermExpr>) -> TypeExpr {
        TypeExpr::Var { variable, term_args }
    }

    pub fn pi(binder: Name, domain: TypeExpr, codomain: TypeExpr) -> TypeExpr {
        TypeExpr::Pi { binder, domain: Box::new(domain), codomain: Box::new(codomain) }
    }

    /// Non-dependent function type. Picks a binder that avoids capture in
    /// the codomain.
    pub fn arrow(domain: TypeExpr, codomain: TypeExpr) -> TypeExpr {
        let binder = Name::term_var("x").freshen(&codomain.free_vars());
        TypeExpr::pi(binder, domain, codomain)
    }

    /// Right-folds `arrow` over the argument types.
    pub fn arrows(args: Vec<TypeExpr>, result: TypeExpr) -> TypeExpr {
        args.into_iter().rev().fold(result, |acc, a| TypeExpr::arrow(a, acc))
    }

    /// `Some((domain, codomain))` when this is an arrow whose binder does not
    /// occur in the codomain.
    pub fn as_arrow(&self) -> Option<(&TypeExpr, &TypeExpr)> {
        match self {
            TypeExpr::Pi { binder, domain, codomain } if !codomain.free_vars().contains(binder) => {
                Some((domain, codomain))
            }
            _ => None,
        }
    }
}

impl TermExpr {
    /// Reference to a term symbol with an empty parameter list.
    pub fn cnst(symbol: Name) -> TermExpr {
        TermExpr::Const { symbol, args: Substitution::default() }
    }

    pub fn cnst_app(symbol: Name, args: Substitution) -> TermExpr {
        TermExpr::Const { symbol, args }
    }

    pub fn lam(binder: Name, domain: TypeExpr, body: TermExpr) -> TermExpr {
        TermExpr::Lambda { binder, domain: Box::new(domain), body: Box::new(body) }
    }

    pub fn app(fun: TermExpr, arg: TermExpr) -> TermExpr {
        TermExpr::App { fun: Box::new(fun), arg: Box::new(arg) }
    }

    pub fn apps(fun: TermExpr, args: impl IntoIterator<Item = TermExpr>) -> TermExpr {
        args.into_iter().fold(fun, TermExpr::app)
    }

    pub fn implies(lhs: TermExpr, rhs: TermExpr) -> TermExpr {
        TermExpr::Implies { lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }

    pub fn eq(ty: TypeExpr, lhs: TermExpr, rhs: TermExpr) -> TermExpr {
        TermExpr::Eq { ty: Some(Box::new(ty)), lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }

    pub fn eq_plain(lhs: TermExpr, rhs: TermExpr) -> TermExpr {
        TermExpr::Eq { ty: None, lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }

    /// Splits an application spine `f a1 … an` into `(f, [a1, …, an])`.
    pub fn spine(&self) -> (&TermExpr, Vec<&TermExpr>) {
        let mut head = self;
        let mut args = Vec::new();
        while let TermExpr::App { fun, arg } = head {
            args.push(arg.as_ref());
            head = fun;
        }
        args.reverse();
        (head, args)
    }
}

impl Context {
    pub fn new(entries: Vec<ContextEntry>) -> Context {
        Context { entries }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn push(&mut self, entry: ContextEntry) {
        self.entries.push(entry);
    }

    pub fn type_var(&mut self, name: Name, kind: Kind) -> &mut Self {
        self.push(ContextEntry::TypeVar { name, kind });
        self
    }

    pub fn term_var(&mut self, name: Name, ty: TypeExpr) -> &mut Self {
        self.push(ContextEntry::TermVar { name, ty });
        self
    }

    pub fn assume(&mut self, formula: TermExpr) -> &mut Self {
        self.push(ContextEntry::Assumption { formula });
        self
    }

    /// Names declared by this context (assumptions are anonymous).
    pub fn declared(&self) -> BTreeSet<Name> {
        self.entries
            .iter()
            .filter_map(|e| match e {
                ContextEntry::TypeVar { name, .. } | ContextEntry::TermVar { name, .. } => {
                    Some(name.clone())
                }
                ContextEntry::Assumption { .. } => None,
            })
            .collect()
    }

    pub fn lookup_term_var(&self, name: &Name) -> Option<&TypeExpr> {
        self.entries.iter().rev().find_map(|e| match e {
            ContextEntry::TermVar { name: n, ty } if n == name => Some(ty),
            _ => None,
        })
    }

    pub fn lookup_type_var(&self, name: &Name) -> Option<&Kind> {
        self.entries.iter().rev().find_map(|e| match e {
            ContextEntry::TypeVar { name: n, kind } if n == name => Some(kind),
            _ => None,
        })
    }

    pub fn contains_name(&self, name: &Name) -> bool {
        self.entries.iter().any(|e| match e {
            ContextEntry::TypeVar { name: n, .. } | ContextEntry::TermVar { name: n, .. } => {
                n == name
            }
            ContextEntry::Assumption { .. } => false,
        })
    }

    /// The identity substitution for this context: variables map to
    /// themselves (eta-expanded for dependent type variables), assumptions
    /// to check marks.
    pub fn identity(&self) -> Substitution {
        let entries = self
            .entries
            .iter()
            .map(|e| match e {
                ContextEntry::TypeVar { name, kind } => {
                    let params = kind.telescope.clone();
                    let term_args =
                        params.iter().map(|(x, _)| TermExpr::Var(x.clone())).collect();
                    SubstEntry::Type {
                        params,
                        body: TypeExpr::var_app(name.clone(), term_args),
                    }
                }
                ContextEntry::TermVar { name, .. } => SubstEntry::Term(TermExpr::Var(name.clone())),
                ContextEntry::Assumption { .. } => SubstEntry::Check,
            })
            .collect();
        Substitution { entries }
    }
}

impl Substitution {
    pub fn new(entries: Vec<SubstEntry>) -> Substitution {
        Substitution { entries }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn push(&mut self, entry: SubstEntry) {
        self.entries.push(entry);
    }

    /// Plain (non-dependent) type substitute.
    pub fn ty(mut self, body: TypeExpr) -> Substitution {
        self.push(SubstEntry::Type { params: Vec::new(), body });
        self
    }

    pub fn term(mut self, t: TermExpr) -> Substitution {
        self.push(SubstEntry::Term(t));
        self
    }

    pub fn check(mut self) -> Substitution {
        self.push(SubstEntry::Check);
        self
    }
}

impl Theory {
    pub fn new(decls: Vec<Declaration>) -> Theory {
        Theory { decls }
    }

    pub fn lookup(&self, name: &Name) -> Option<&Declaration> {
        self.decls.iter().find(|d| d.name() == name)
    }
}

// ---------------------------------------------------------------------------
// Free variables
// ---------------------------------------------------------------------------

impl TypeExpr {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Name>) {
        match self {
            TypeExpr::Base { args, .. } => args.collect_free(out),
            TypeExpr::Var { variable, term_args } => {
                out.insert(variable.clone());
                for t in term_args {
                    t.collect_free(out);
                }
            }
            TypeExpr::Pi { binder, domain, codomain } => {
                domain.collect_free(out);
                let mut inner = BTreeSet::new();
                codomain.collect_free(&mut inner);
                inner.remove(binder);
                out.extend(inner);
            }
            TypeExpr::Bool => {}
        }
    }
}

impl TermExpr {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Name>) {
        match self {
            TermExpr::Const { args, .. } => args.collect_free(out),
            TermExpr::Var(name) => {
                out.insert(name.clone());
            }
            TermExpr::Lambda { binder, domain, body } => {
                domain.collect_free(out);
                let mut inner = BTreeSet::new();
                body.collect_free(&mut inner);
                inner.remove(binder);
                out.extend(inner);
            }
            TermExpr::App { fun, arg } => {
                fun.collect_free(out);
                arg.collect_free(out);
            }
            TermExpr::Implies { lhs, rhs } => {
                lhs.collect_free(out);
                rhs.collect_free(out);
            }
            TermExpr::Eq { ty, lhs, rhs } => {
                if let Some(ty) = ty {
                    ty.collect_free(out);
                }
                lhs.collect_free(out);
                rhs.collect_free(out);
            }
        }
    }
}

impl Substitution {
    fn collect_free(&self, out: &mut BTreeSet<Name>) {
        for entry in &self.entries {
            entry.collect_free(out);
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }
}

impl SubstEntry {
    fn collect_free(&self, out: &mut BTreeSet<Name>) {
        match self {
            SubstEntry::Type { params, body } => {
                // the telescope binds left to right within the body
                let mut inner = BTreeSet::new();
                body.collect_free(&mut inner);
                for (x, ty) in params.iter().rev() {
                    inner.remove(x);
                    let mut dom = BTreeSet::new();
                    ty.collect_free(&mut dom);
                    inner.extend(dom);
                }
                out.extend(inner);
            }
            SubstEntry::Term(t) => t.collect_free(out),
            SubstEntry::Check => {}
        }
    }
}

impl Kind {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        for (i, (_, ty)) in self.telescope.iter().enumerate() {
            let mut fv = ty.free_vars();
            for (x, _) in &self.telescope[..i] {
                fv.remove(x);
            }
            out.extend(fv);
        }
        out
    }
}

impl Context {
    /// Free variables of the context itself (not the names it declares).
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        let mut bound: BTreeSet<Name> = BTreeSet::new();
        for entry in &self.entries {
            let fv = match entry {
                ContextEntry::TypeVar { kind, .. } => kind.free_vars(),
                ContextEntry::TermVar { ty, .. } => ty.free_vars(),
                ContextEntry::Assumption { formula } => formula.free_vars(),
            };
            out.extend(fv.difference(&bound).cloned());
            match entry {
                ContextEntry::TypeVar { name, .. } | ContextEntry::TermVar { name, .. } => {
                    bound.insert(name.clone());
                }
                ContextEntry::Assumption { .. } => {}
            }
        }
        out
    }
}

impl fmt::Display for Namespace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Namespace::TypeSymbol => "type symbol",
            Namespace::TermSymbol => "term symbol",
            Namespace::TypeVariable => "type variable",
            Namespace::TermVariable => "term variable",
            Namespace::Generated => "generated",
        };
        f.write_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat() -> TypeExpr {
        TypeExpr::base(Name::type_sym("nat"), Substitution::default())
    }

    #[test]
    fn free_vars_of_var() {
        let x = Name::term_var("x");
        assert_eq!(TermExpr::Var(x.clone()).free_vars(), BTreeSet::from([x]));
    }

    #[test]
    fn lambda_binder_excluded() {
        // λx:A. x has exactly the free variables of A
        let x = Name::term_var("x");
        let a = Name::type_var("A");
        let t = TermExpr::lam(x.clone(), TypeExpr::var(a.clone()), TermExpr::Var(x));
        assert_eq!(t.free_vars(), BTreeSet::from([a]));
    }

    #[test]
    fn eq_collects_annotation_and_sides() {
        // fv(s =[vect α n] t) = {α, n} ∪ fv(s) ∪ fv(t), by structural recursion
        let alpha = Name::type_var("A");
        let n = Name::term_var("n");
        let s = Name::term_var("s");
        let t = Name::term_var("t");
        let vect = TypeExpr::base(
            Name::type_sym("vect"),
            Substitution::default()
                .ty(TypeExpr::var(alpha.clone()))
                .term(TermExpr::Var(n.clone())),
        );
        let e = TermExpr::eq(vect, TermExpr::Var(s.clone()), TermExpr::Var(t.clone()));
        assert_eq!(e.free_vars(), BTreeSet::from([alpha, n, s, t]));
    }

    #[test]
    fn arrow_avoids_capture() {
        let x = Name::term_var("x");
        let cod = TypeExpr::var_app(Name::type_var("L"), vec![TermExpr::Var(x.clone())]);
        let arr = TypeExpr::arrow(nat(), cod);
        let TypeExpr::Pi { binder, codomain, .. } = &arr else { panic!() };
        assert_ne!(*binder, x);
        assert!(codomain.free_vars().contains(&x));
        assert!(arr.as_arrow().is_none() || !arr.free_vars().is_empty());
    }

    #[test]
    fn identity_substitution_shape() {
        let mut ctx = Context::default();
        ctx.type_var(Name::type_var("A"), Kind::plain());
        ctx.term_var(Name::term_var("n"), nat());
        ctx.assume(TermExpr::eq_plain(
            TermExpr::Var(Name::term_var("n")),
            TermExpr::Var(Name::term_var("n")),
        ));
        let id = ctx.identity();
        assert_eq!(id.len(), 3);
        assert!(matches!(id.entries[2], SubstEntry::Check));
    }
}
