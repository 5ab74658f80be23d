//! Alpha-equivalence: structural comparison up to consistent renaming of
//! bound variables. Free variables and symbols must match exactly.

use crate::ast::{
    Context, ContextEntry, Declaration, Kind, Problem, SubstEntry, Substitution, TermExpr, Theory,
    TypeExpr,
};
use crate::name::Name;

/// Stack of corresponding binder pairs, innermost last.
#[derive(Default)]
struct AlphaEnv {
    pairs: Vec<(Name, Name)>,
}

impl AlphaEnv {
    fn scoped<R>(&mut self, left: &Name, right: &Name, f: impl FnOnce(&mut Self) -> R) -> R {
        self.pairs.push((left.clone(), right.clone()));
        let r = f(self);
        self.pairs.pop();
        r
    }

    /// Two variable occurrences correspond when they are bound at the same
    /// depth, or both free and identical.
    fn var_eq(&self, left: &Name, right: &Name) -> bool {
        for (l, r) in self.pairs.iter().rev() {
            match (l == left, r == right) {
                (true, true) => return true,
                (true, false) | (false, true) => return false,
                (false, false) => {}
            }
        }
        left == right
    }
}

pub fn alpha_eq_type(a: &TypeExpr, b: &TypeExpr) -> bool {
    ty_eq(&mut AlphaEnv::default(), a, b)
}

pub fn alpha_eq_term(a: &TermExpr, b: &TermExpr) -> bool {
    term_eq(&mut AlphaEnv::default(), a, b)
}

pub fn alpha_eq_kind(a: &Kind, b: &Kind) -> bool {
    kind_eq(&mut AlphaEnv::default(), a, b)
}

pub fn alpha_eq_subst(a: &Substitution, b: &Substitution) -> bool {
    subst_eq(&mut AlphaEnv::default(), a, b)
}

pub fn alpha_eq_context(a: &Context, b: &Context) -> bool {
    let mut env = AlphaEnv::default();
    context_eq(&mut env, a, b, |_| true)
}

pub fn alpha_eq_decl(a: &Declaration, b: &Declaration) -> bool {
    let mut env = AlphaEnv::default();
    match (a, b) {
        (
            Declaration::TypeSym { name: n1, params: p1, .. },
            Declaration::TypeSym { name: n2, params: p2, .. },
        ) => n1 == n2 && context_eq(&mut env, p1, p2, |_| true),
        (
            Declaration::TermSym { name: n1, params: p1, ty: t1, .. },
            Declaration::TermSym { name: n2, params: p2, ty: t2, .. },
        ) => n1 == n2 && context_eq(&mut env, p1, p2, |env| ty_eq(env, t1, t2)),
        (
            Declaration::Axiom { label: n1, params: p1, formula: f1, .. },
            Declaration::Axiom { label: n2, params: p2, formula: f2, .. },
        ) => n1 == n2 && context_eq(&mut env, p1, p2, |env| term_eq(env, f1, f2)),
        (
            Declaration::SubtypeDef { name: n1, params: p1, carrier: c1, predicate: q1, .. },
            Declaration::SubtypeDef { name: n2, params: p2, carrier: c2, predicate: q2, .. },
        ) => {
            n1 == n2
                && context_eq(&mut env, p1, p2, |env| {
                    ty_eq(env, c1, c2) && term_eq(env, q1, q2)
                })
        }
        _ => false,
    }
}

pub fn alpha_eq_theory(a: &Theory, b: &Theory) -> bool {
    a.decls.len() == b.decls.len()
        && a.decls.iter().zip(&b.decls).all(|(x, y)| alpha_eq_decl(x, y))
}

pub fn alpha_eq_problem(a: &Problem, b: &Problem) -> bool {
    if !alpha_eq_theory(&a.theory, &b.theory) {
        return false;
    }
    match (&a.conjecture, &b.conjecture) {
        (None, None) => true,
        (Some(c1), Some(c2)) => {
            c1.label == c2.label && {
                let mut env = AlphaEnv::default();
                context_eq(&mut env, &c1.params, &c2.params, |env| {
                    term_eq(env, &c1.formula, &c2.formula)
                })
            }
        }
        _ => false,
    }
}

fn ty_eq(env: &mut AlphaEnv, a: &TypeExpr, b: &TypeExpr) -> bool {
    match (a, b) {
        (TypeExpr::Bool, TypeExpr::Bool) => true,
        (
            TypeExpr::Base { symbol: s1, args: a1 },
            TypeExpr::Base { symbol: s2, args: a2 },
        ) => s1 == s2 && subst_eq(env, a1, a2),
        (
            TypeExpr::Var { variable: v1, term_args: t1 },
            TypeExpr::Var { variable: v2, term_args: t2 },
        ) => {
            env.var_eq(v1, v2)
                && t1.len() == t2.len()
                && t1.iter().zip(t2).all(|(x, y)| term_eq(env, x, y))
        }
        (
            TypeExpr::Pi { binder: x1, domain: d1, codomain: c1 },
            TypeExpr::Pi { binder: x2, domain: d2, codomain: c2 },
        ) => ty_eq(env, d1, d2) && env.scoped(x1, x2, |env| ty_eq(env, c1, c2)),
        _ => false,
    }
}

fn term_eq(env: &mut AlphaEnv, a: &TermExpr, b: &TermExpr) -> bool {
    match (a, b) {
        (
            TermExpr::Const { symbol: s1, args: a1 },
            TermExpr::Const { symbol: s2, args: a2 },
        ) => s1 == s2 && subst_eq(env, a1, a2),
        (TermExpr::Var(x), TermExpr::Var(y)) => env.var_eq(x, y),
        (
            TermExpr::Lambda { binder: x1, domain: d1, body: b1 },
            TermExpr::Lambda { binder: x2, domain: d2, body: b2 },
        ) => ty_eq(env, d1, d2) && env.scoped(x1, x2, |env| term_eq(env, b1, b2)),
        (
            TermExpr::App { fun: f1, arg: a1 },
            TermExpr::App { fun: f2, arg: a2 },
        ) => term_eq(env, f1, f2) && term_eq(env, a1, a2),
        (
            TermExpr::Implies { lhs: l1, rhs: r1 },
            TermExpr::Implies { lhs: l2, rhs: r2 },
        ) => term_eq(env, l1, l2) && term_eq(env, r1, r2),
        (
            TermExpr::Eq { ty: t1, lhs: l1, rhs: r1 },
            TermExpr::Eq { ty: t2, lhs: l2, rhs: r2 },
        ) => {
            let ann_ok = match (t1, t2) {
                (None, None) => true,
                (Some(t1), Some(t2)) => ty_eq(env, t1, t2),
                _ => false,
            };
            ann_ok && term_eq(env, l1, l2) && term_eq(env, r1, r2)
        }
        _ => false,
    }
}

fn kind_eq(env: &mut AlphaEnv, a: &Kind, b: &Kind) -> bool {
    telescope_eq(env, &a.telescope, &b.telescope, |_| true)
}

/// Compares telescopes entry-wise, then runs `inner` with all binders in
/// scope.
fn telescope_eq(
    env: &mut AlphaEnv,
    a: &[(Name, TypeExpr)],
    b: &[(Name, TypeExpr)],
    inner: impl FnOnce(&mut AlphaEnv) -> bool,
) -> bool {
    match (a.split_first(), b.split_first()) {
        (None, None) => inner(env),
        (Some(((x1, t1), rest1)), Some(((x2, t2), rest2))) => {
            ty_eq(env, t1, t2)
                && env.scoped(x1, x2, |env| telescope_eq(env, rest1, rest2, inner))
        }
        _ => false,
    }
}

fn subst_eq(env: &mut AlphaEnv, a: &Substitution, b: &Substitution) -> bool {
    a.entries.len() == b.entries.len()
        && a.entries.iter().zip(&b.entries).all(|(x, y)| match (x, y) {
            (
                SubstEntry::Type { params: p1, body: b1 },
                SubstEntry::Type { params: p2, body: b2 },
            ) => telescope_eq(env, p1, p2, |env| ty_eq(env, b1, b2)),
            (SubstEntry::Term(t1), SubstEntry::Term(t2)) => term_eq(env, t1, t2),
            (SubstEntry::Check, SubstEntry::Check) => true,
            _ => false,
        })
}

fn context_eq(
    env: &mut AlphaEnv,
    a: &Context,
    b: &Context,
    inner: impl FnOnce(&mut AlphaEnv) -> bool,
) -> bool {
    context_entries_eq(env, &a.entries, &b.entries, inner)
}

fn context_entries_eq(
    env: &mut AlphaEnv,
    a: &[ContextEntry],
    b: &[ContextEntry],
    inner: impl FnOnce(&mut AlphaEnv) -> bool,
) -> bool {
    match (a.split_first(), b.split_first()) {
        (None, None) => inner(env),
        (Some((e1, rest1)), Some((e2, rest2))) => match (e1, e2) {
            (
                ContextEntry::TypeVar { name: n1, kind: k1 },
                ContextEntry::TypeVar { name: n2, kind: k2 },
            ) => {
                kind_eq(env, k1, k2)
                    && env.scoped(n1, n2, |env| context_entries_eq(env, rest1, rest2, inner))
            }
            (
                ContextEntry::TermVar { name: n1, ty: t1 },
                ContextEntry::TermVar { name: n2, ty: t2 },
            ) => {
                ty_eq(env, t1, t2)
                    && env.scoped(n1, n2, |env| context_entries_eq(env, rest1, rest2, inner))
            }
            (
                ContextEntry::Assumption { formula: f1 },
                ContextEntry::Assumption { formula: f2 },
            ) => term_eq(env, f1, f2) && context_entries_eq(env, rest1, rest2, inner),
            _ => false,
        },
        _ => false,
    }
}
