//! Capture-avoiding simultaneous substitution.
//!
//! A substitution for a context maps its type variables to (possibly
//! term-parameterized) types, its term variables to terms, and its
//! assumptions to check marks, which substitute nothing. Binders are renamed
//! deterministically when a substitute would otherwise capture them: the
//! fresh name is the original text with `'` appended until free.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::ast::{
    Context, ContextEntry, Kind, SubstEntry, Substitution, TermExpr, TypeExpr,
};
use crate::name::Name;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("substitution has {got} entries but the context declares {want}")]
    ArityMismatch { want: usize, got: usize },
    #[error("substitution entry {position} does not match the context entry kind")]
    EntryMismatch { position: usize },
    #[error("type-level lambda for {variable} applied to {got} arguments, expected {want}")]
    TypeLambdaArity { variable: Name, want: usize, got: usize },
    #[error("free variable {0} is not declared by the substitution domain")]
    UnmatchedFreeVariable(Name),
}

#[derive(Debug, Clone)]
enum Binding {
    Type { params: Vec<(Name, TypeExpr)>, body: TypeExpr },
    Term(TermExpr),
}

impl Binding {
    fn free_vars(&self) -> BTreeSet<Name> {
        match self {
            Binding::Term(t) => t.free_vars(),
            Binding::Type { params, body } => {
                let mut fv = body.free_vars();
                for (x, ty) in params.iter().rev() {
                    fv.remove(x);
                    fv.extend(ty.free_vars());
                }
                fv
            }
        }
    }
}

/// A name-indexed view of a substitution, ready to apply.
#[derive(Debug, Clone, Default)]
pub struct SubstMap {
    map: BTreeMap<Name, Binding>,
}

impl SubstMap {
    /// Zips a substitution against its domain context, validating arity and
    /// entry kinds position-wise.
    pub fn from_parts(domain: &Context, delta: &Substitution) -> Result<SubstMap, SubstError> {
        if domain.len() != delta.len() {
            return Err(SubstError::ArityMismatch { want: domain.len(), got: delta.len() });
        }
        let mut map = BTreeMap::new();
        for (position, (entry, sub)) in domain.entries.iter().zip(&delta.entries).enumerate() {
            match (entry, sub) {
                (ContextEntry::TypeVar { name, kind }, SubstEntry::Type { params, body }) => {
                    if params.len() != kind.arity() {
                        return Err(SubstError::EntryMismatch { position });
                    }
                    map.insert(
                        name.clone(),
                        Binding::Type { params: params.clone(), body: body.clone() },
                    );
                }
                (ContextEntry::TermVar { name, .. }, SubstEntry::Term(t)) => {
                    map.insert(name.clone(), Binding::Term(t.clone()));
                }
                (ContextEntry::Assumption { .. }, SubstEntry::Check) => {}
                _ => return Err(SubstError::EntryMismatch { position }),
            }
        }
        Ok(SubstMap { map })
    }

    pub fn one_term(x: Name, value: TermExpr) -> SubstMap {
        let mut map = BTreeMap::new();
        map.insert(x, Binding::Term(value));
        SubstMap { map }
    }

    pub fn one_type(alpha: Name, params: Vec<(Name, TypeExpr)>, body: TypeExpr) -> SubstMap {
        let mut map = BTreeMap::new();
        map.insert(alpha, Binding::Type { params, body });
        SubstMap { map }
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Adds or replaces a term binding.
    pub fn insert_term(&mut self, x: Name, value: TermExpr) {
        self.map.insert(x, Binding::Term(value));
    }

    /// Adds or replaces a type binding.
    pub fn insert_type(&mut self, alpha: Name, params: Vec<(Name, TypeExpr)>, body: TypeExpr) {
        self.map.insert(alpha, Binding::Type { params, body });
    }

    pub fn apply_term(&self, t: &TermExpr) -> Result<TermExpr, SubstError> {
        match t {
            TermExpr::Var(x) => Ok(match self.map.get(x) {
                Some(Binding::Term(v)) => v.clone(),
                _ => t.clone(),
            }),
            TermExpr::Const { symbol, args } => Ok(TermExpr::Const {
                symbol: symbol.clone(),
                args: self.apply_subst(args)?,
            }),
            TermExpr::Lambda { binder, domain, body } => {
                let domain = self.apply_type(domain)?;
                let (binder, body) = self.rebind(binder, body.free_vars(), |inner| {
                    inner.apply_term(body)
                })?;
                Ok(TermExpr::Lambda { binder, domain: Box::new(domain), body: Box::new(body) })
            }
            TermExpr::App { fun, arg } => {
                Ok(TermExpr::app(self.apply_term(fun)?, self.apply_term(arg)?))
            }
            TermExpr::Implies { lhs, rhs } => {
                Ok(TermExpr::implies(self.apply_term(lhs)?, self.apply_term(rhs)?))
            }
            TermExpr::Eq { ty, lhs, rhs } => Ok(TermExpr::Eq {
                ty: match ty {
                    Some(ty) => Some(Box::new(self.apply_type(ty)?)),
                    None => None,
                },
                lhs: Box::new(self.apply_term(lhs)?),
                rhs: Box::new(self.apply_term(rhs)?),
            }),
        }
    }

    pub fn apply_type(&self, a: &TypeExpr) -> Result<TypeExpr, SubstError> {
        match a {
            TypeExpr::Bool => Ok(TypeExpr::Bool),
            TypeExpr::Base { symbol, args } => Ok(TypeExpr::Base {
                symbol: symbol.clone(),
                args: self.apply_subst(args)?,
            }),
            TypeExpr::Var { variable, term_args } => {
                let term_args = term_args
                    .iter()
                    .map(|t| self.apply_term(t))
                    .collect::<Result<Vec<_>, _>>()?;
                match self.map.get(variable) {
                    // beta-contraction of the type-level lambda
                    Some(Binding::Type { params, body }) => {
                        if params.len() != term_args.len() {
                            return Err(SubstError::TypeLambdaArity {
                                variable: variable.clone(),
                                want: params.len(),
                                got: term_args.len(),
                            });
                        }
                        let mut inner = BTreeMap::new();
                        for ((x, _), value) in params.iter().zip(term_args) {
                            inner.insert(x.clone(), Binding::Term(value));
                        }
                        SubstMap { map: inner }.apply_type(body)
                    }
                    _ => Ok(TypeExpr::Var { variable: variable.clone(), term_args }),
                }
            }
            TypeExpr::Pi { binder, domain, codomain } => {
                let domain = self.apply_type(domain)?;
                let (binder, codomain) = self.rebind(binder, codomain.free_vars(), |inner| {
                    inner.apply_type(codomain)
                })?;
                Ok(TypeExpr::Pi {
                    binder,
                    domain: Box::new(domain),
                    codomain: Box::new(codomain),
                })
            }
        }
    }

    pub fn apply_subst(&self, s: &Substitution) -> Result<Substitution, SubstError> {
        let entries = s
            .entries
            .iter()
            .map(|entry| match entry {
                SubstEntry::Type { params, body } => {
                    let (params, body) = self.apply_telescope(params, body.free_vars(), |inner| {
                        inner.apply_type(body)
                    })?;
                    Ok(SubstEntry::Type { params, body })
                }
                SubstEntry::Term(t) => Ok(SubstEntry::Term(self.apply_term(t)?)),
                SubstEntry::Check => Ok(SubstEntry::Check),
            })
            .collect::<Result<Vec<_>, SubstError>>()?;
        Ok(Substitution { entries })
    }

    pub fn apply_kind(&self, kind: &Kind) -> Result<Kind, SubstError> {
        // kind telescopes only matter up to alpha, so reuse telescope logic
        // with a dummy body
        let (telescope, _) =
            self.apply_telescope(&kind.telescope, BTreeSet::new(), |_| Ok(TypeExpr::Bool))?;
        Ok(Kind { telescope })
    }

    /// Substitutes under one binder, renaming it if any active substitute
    /// would capture it.
    fn rebind<E>(
        &self,
        binder: &Name,
        body_fv: BTreeSet<Name>,
        apply_body: impl FnOnce(&SubstMap) -> Result<E, SubstError>,
    ) -> Result<(Name, E), SubstError> {
        let mut inner = self.clone();
        inner.map.remove(binder);

        let clash = inner
            .map
            .iter()
            .filter(|(k, _)| body_fv.contains(k))
            .any(|(_, v)| v.free_vars().contains(binder));
        if !clash {
            return Ok((binder.clone(), apply_body(&inner)?));
        }

        let mut avoid: BTreeSet<Name> = body_fv.clone();
        avoid.remove(binder);
        for (k, v) in &inner.map {
            if body_fv.contains(k) {
                avoid.extend(v.free_vars());
            }
        }
        let fresh = binder.freshen(&avoid);
        inner
            .map
            .insert(binder.clone(), Binding::Term(TermExpr::Var(fresh.clone())));
        Ok((fresh, apply_body(&inner)?))
    }

    /// Substitutes through a binder telescope, renaming entry-wise.
    fn apply_telescope<E>(
        &self,
        params: &[(Name, TypeExpr)],
        body_fv: BTreeSet<Name>,
        apply_body: impl FnOnce(&SubstMap) -> Result<E, SubstError>,
    ) -> Result<(Vec<(Name, TypeExpr)>, E), SubstError> {
        match params.split_first() {
            None => Ok((Vec::new(), apply_body(self)?)),
            Some(((x, ty), rest)) => {
                let ty = self.apply_type(ty)?;
                let mut scope_fv = body_fv.clone();
                for (y, t) in rest {
                    scope_fv.extend(t.free_vars());
                    scope_fv.insert(y.clone());
                }
                let (x, (mut params, body)) = self.rebind(x, scope_fv, |inner| {
                    inner.apply_telescope(rest, body_fv, apply_body)
                })?;
                params.insert(0, (x, ty));
                Ok((params, body))
            }
        }
    }
}

/// Applies `delta : domain` to a term. The term's free variables must all be
/// declared by `domain`; variables substitute to their entries, check marks
/// substitute nothing.
pub fn subst_apply_term(
    t: &TermExpr,
    delta: &Substitution,
    domain: &Context,
) -> Result<TermExpr, SubstError> {
    let map = SubstMap::from_parts(domain, delta)?;
    check_covered(t.free_vars(), domain)?;
    map.apply_term(t)
}

/// Like [`subst_apply_term`] for types.
pub fn subst_apply_type(
    a: &TypeExpr,
    delta: &Substitution,
    domain: &Context,
) -> Result<TypeExpr, SubstError> {
    let map = SubstMap::from_parts(domain, delta)?;
    check_covered(a.free_vars(), domain)?;
    map.apply_type(a)
}

fn check_covered(fv: BTreeSet<Name>, domain: &Context) -> Result<(), SubstError> {
    let declared = domain.declared();
    match fv.into_iter().find(|v| !declared.contains(v)) {
        Some(v) => Err(SubstError::UnmatchedFreeVariable(v)),
        None => Ok(()),
    }
}

/// Single term-variable substitution `e[x := value]`, leaving other free
/// variables alone (the identity-extension convention `E[t]`).
pub fn subst_term_var(t: &TermExpr, x: &Name, value: &TermExpr) -> TermExpr {
    SubstMap::one_term(x.clone(), value.clone())
        .apply_term(t)
        .expect("single term substitution cannot fail")
}

pub fn subst_type_term_var(a: &TypeExpr, x: &Name, value: &TermExpr) -> TypeExpr {
    SubstMap::one_term(x.clone(), value.clone())
        .apply_type(a)
        .expect("single term substitution cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::{alpha_eq_term, alpha_eq_type};

    fn nat() -> TypeExpr {
        TypeExpr::base(Name::type_sym("nat"), Substitution::default())
    }

    fn tv(x: &str) -> Name {
        Name::term_var(x)
    }

    fn plus(a: TermExpr, b: TermExpr) -> TermExpr {
        TermExpr::apps(TermExpr::cnst(Name::term_sym("plus")), [a, b])
    }

    #[test]
    fn binder_renamed_to_avoid_capture() {
        // (λx:nat. plus x y)[y := x]  ==>  λx':nat. plus x' x
        let t = TermExpr::lam(
            tv("x"),
            nat(),
            plus(TermExpr::Var(tv("x")), TermExpr::Var(tv("y"))),
        );
        let got = subst_term_var(&t, &tv("y"), &TermExpr::Var(tv("x")));
        let want = TermExpr::lam(
            tv("x'"),
            nat(),
            plus(TermExpr::Var(tv("x'")), TermExpr::Var(tv("x"))),
        );
        assert_eq!(got, want, "deterministic fresh naming uses a prime");
    }

    #[test]
    fn no_rename_without_clash() {
        let t = TermExpr::lam(tv("x"), nat(), plus(TermExpr::Var(tv("x")), TermExpr::Var(tv("y"))));
        let got = subst_term_var(&t, &tv("y"), &TermExpr::cnst(Name::term_sym("zero")));
        let want = TermExpr::lam(
            tv("x"),
            nat(),
            plus(TermExpr::Var(tv("x")), TermExpr::cnst(Name::term_sym("zero"))),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn shadowed_binder_blocks_substitution() {
        // (λx:nat. x)[x := zero] leaves the bound x alone
        let t = TermExpr::lam(tv("x"), nat(), TermExpr::Var(tv("x")));
        let got = subst_term_var(&t, &tv("x"), &TermExpr::cnst(Name::term_sym("zero")));
        assert!(alpha_eq_term(&got, &t));
    }

    #[test]
    fn identity_substitution_is_alpha_identity() {
        let mut ctx = Context::default();
        ctx.type_var(Name::type_var("A"), Kind::plain());
        ctx.term_var(tv("n"), nat());
        let e = TypeExpr::base(
            Name::type_sym("vect"),
            Substitution::default()
                .ty(TypeExpr::var(Name::type_var("A")))
                .term(TermExpr::Var(tv("n"))),
        );
        let got = subst_apply_type(&e, &ctx.identity(), &ctx).unwrap();
        assert!(alpha_eq_type(&got, &e));
    }

    #[test]
    fn type_level_lambda_beta_contracts() {
        // L n  with  L := λx:nat. vect nat x  becomes  vect nat n
        let l = Name::type_var("L");
        let mut ctx = Context::default();
        ctx.type_var(l.clone(), Kind::new(vec![(tv("x"), nat())]));
        ctx.term_var(tv("n"), nat());
        let delta = Substitution::new(vec![
            SubstEntry::Type {
                params: vec![(tv("x"), nat())],
                body: TypeExpr::base(
                    Name::type_sym("vect"),
                    Substitution::default().ty(nat()).term(TermExpr::Var(tv("x"))),
                ),
            },
            SubstEntry::Term(TermExpr::Var(tv("n"))),
        ]);
        let a = TypeExpr::var_app(l, vec![TermExpr::Var(tv("n"))]);
        // the n in the result refers to the *codomain* context, so apply in a
        // domain that contains it as well
        let got = subst_apply_type(&a, &delta, &ctx).unwrap();
        let want = TypeExpr::base(
            Name::type_sym("vect"),
            Substitution::default().ty(nat()).term(TermExpr::Var(tv("n"))),
        );
        assert!(alpha_eq_type(&got, &want));
    }

    #[test]
    fn arity_and_kind_mismatches_error() {
        let mut ctx = Context::default();
        ctx.term_var(tv("n"), nat());
        let err = subst_apply_term(
            &TermExpr::Var(tv("n")),
            &Substitution::default(),
            &ctx,
        )
        .unwrap_err();
        assert!(matches!(err, SubstError::ArityMismatch { .. }));

        let delta = Substitution::default().ty(nat());
        let err = subst_apply_term(&TermExpr::Var(tv("n")), &delta, &ctx).unwrap_err();
        assert!(matches!(err, SubstError::EntryMismatch { .. }));

        let delta = Substitution::default().term(TermExpr::cnst(Name::term_sym("zero")));
        let err =
            subst_apply_term(&TermExpr::Var(tv("m")), &delta, &ctx).unwrap_err();
        assert!(matches!(err, SubstError::UnmatchedFreeVariable(_)));
    }
}
