//! The defined connectives and quantifiers.
//!
//! The term language has exactly lambda, application, equality, and
//! dependent implication; everything else is notation. This module fixes one
//! canonical encoding for each derived form and provides the inverse view
//! used by the printers. A term prints as sugar only when it matches the
//! canonical shape exactly (including the equality annotation), so printing
//! followed by parsing is the identity up to alpha-equivalence.

use crate::alpha::{alpha_eq_term, alpha_eq_type};
use crate::ast::{TermExpr, TypeExpr};
use crate::name::Name;
use crate::subst::subst_term_var;

/// `$true`, encoded as `(λx:o. x) = (λx:o. x)`.
pub fn tt() -> TermExpr {
    let x = Name::term_var("x");
    let id = TermExpr::lam(x.clone(), TypeExpr::Bool, TermExpr::Var(x));
    TermExpr::eq(TypeExpr::arrow(TypeExpr::Bool, TypeExpr::Bool), id.clone(), id)
}

/// `$false`, encoded as `∀x:o. x`.
pub fn ff() -> TermExpr {
    let x = Name::term_var("x");
    forall(x.clone(), TypeExpr::Bool, TermExpr::Var(x))
}

/// `∀x:A. body`, encoded as `(λx:A. body) = (λx:A. ⊤)`.
pub fn forall(x: Name, ty: TypeExpr, body: TermExpr) -> TermExpr {
    let ann = TypeExpr::arrow(ty.clone(), TypeExpr::Bool);
    TermExpr::eq(
        ann,
        TermExpr::lam(x.clone(), ty.clone(), body),
        TermExpr::lam(x, ty, tt()),
    )
}

pub fn foralls(binders: impl IntoIterator<Item = (Name, TypeExpr)>, body: TermExpr) -> TermExpr {
    let binders: Vec<_> = binders.into_iter().collect();
    binders.into_iter().rev().fold(body, |acc, (x, ty)| forall(x, ty, acc))
}

/// `¬φ`, encoded as `φ ⇒ ⊥`.
pub fn not(phi: TermExpr) -> TermExpr {
    TermExpr::implies(phi, ff())
}

/// Dependent conjunction `φ ∧ ψ`, encoded as `¬(φ ⇒ ¬ψ)`.
pub fn and(phi: TermExpr, psi: TermExpr) -> TermExpr {
    not(TermExpr::implies(phi, not(psi)))
}

/// Dependent disjunction `φ ∨ ψ`, encoded as `¬φ ⇒ ψ`.
pub fn or(phi: TermExpr, psi: TermExpr) -> TermExpr {
    TermExpr::implies(not(phi), psi)
}

/// `∃x:A. body`, encoded as `¬∀x:A. ¬body`.
pub fn exists(x: Name, ty: TypeExpr, body: TermExpr) -> TermExpr {
    not(forall(x, ty, not(body)))
}

/// `φ ⟺ ψ` is Boolean equality.
pub fn iff(phi: TermExpr, psi: TermExpr) -> TermExpr {
    TermExpr::eq(TypeExpr::Bool, phi, psi)
}

/// Application with one administrative beta step: `(λx. b) a` becomes
/// `b[x := a]` immediately, anything else stays an application node.
pub fn app_beta(fun: TermExpr, arg: TermExpr) -> TermExpr {
    match fun {
        TermExpr::Lambda { binder, body, .. } => subst_term_var(&body, &binder, &arg),
        _ => TermExpr::app(fun, arg),
    }
}

/// The result of matching a term against the canonical encodings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SugarView<'a> {
    True,
    False,
    Forall(&'a Name, &'a TypeExpr, &'a TermExpr),
    Exists(&'a Name, &'a TypeExpr, &'a TermExpr),
    Not(&'a TermExpr),
    And(&'a TermExpr, &'a TermExpr),
    Or(&'a TermExpr, &'a TermExpr),
    /// Not one of the derived forms.
    Plain,
}

pub fn view(t: &TermExpr) -> SugarView<'_> {
    match t {
        TermExpr::Eq { .. } => {
            if alpha_eq_term(t, &tt()) {
                return SugarView::True;
            }
            if alpha_eq_term(t, &ff()) {
                return SugarView::False;
            }
            if let Some((x, ty, body)) = match_forall(t) {
                return SugarView::Forall(x, ty, body);
            }
            SugarView::Plain
        }
        TermExpr::Implies { lhs, rhs } => {
            if alpha_eq_term(rhs, &ff()) {
                // ¬(∀x. ¬φ) is an existential
                if let Some((x, ty, body)) = match_forall(lhs) {
                    if let TermExpr::Implies { lhs: phi, rhs: inner } = body {
                        if alpha_eq_term(inner, &ff()) {
                            return SugarView::Exists(x, ty, phi);
                        }
                    }
                }
                // ¬(φ ⇒ ¬ψ) is a conjunction
                if let TermExpr::Implies { lhs: phi, rhs: inner } = lhs.as_ref() {
                    if let TermExpr::Implies { lhs: psi, rhs: innermost } = inner.as_ref() {
                        if alpha_eq_term(innermost, &ff()) {
                            return SugarView::And(phi, psi);
                        }
                    }
                }
                return SugarView::Not(lhs);
            }
            // ¬φ ⇒ ψ is a disjunction
            if let TermExpr::Implies { lhs: phi, rhs: inner } = lhs.as_ref() {
                if alpha_eq_term(inner, &ff()) {
                    return SugarView::Or(phi, rhs);
                }
            }
            SugarView::Plain
        }
        _ => SugarView::Plain,
    }
}

/// Matches the canonical universal quantifier, returning binder, domain and
/// body. `$false` itself also matches (it is `∀x:o. x`); callers that care
/// check for it first.
pub fn match_forall(t: &TermExpr) -> Option<(&Name, &TypeExpr, &TermExpr)> {
    let TermExpr::Eq { ty: Some(ann), lhs, rhs } = t else {
        return None;
    };
    let TermExpr::Lambda { binder, domain, body } = lhs.as_ref() else {
        return None;
    };
    let TermExpr::Lambda { domain: domain2, body: body2, .. } = rhs.as_ref() else {
        return None;
    };
    if !alpha_eq_type(domain, domain2) || !alpha_eq_term(body2, &tt()) {
        return None;
    }
    // the annotation must be the arrow the encoding produces
    let want = TypeExpr::arrow(domain.as_ref().clone(), TypeExpr::Bool);
    if !alpha_eq_type(ann, &want) {
        return None;
    }
    Some((binder, domain, body))
}
