//! Beta-eta normalization of terms (and of the terms embedded in types).
//!
//! Typing is only checked after parsing, so normalization may run on terms
//! that are not yet known to be well-typed. A step budget bounds the number
//! of contractions instead of risking divergence; the lenient entry point
//! falls back to the unreduced input when the budget runs out.

use thiserror::Error;

use crate::ast::{SubstEntry, Substitution, TermExpr, TypeExpr};
use crate::subst::subst_term_var;

/// Default contraction budget.
pub const DEFAULT_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("normalization budget exceeded")]
pub struct BudgetExceeded;

/// Normalizes with the default budget; on exhaustion the input is returned
/// unchanged (callers treat that as "could not decide").
pub fn normalize(t: &TermExpr) -> TermExpr {
    normalize_checked(t, DEFAULT_BUDGET).unwrap_or_else(|_| t.clone())
}

pub fn normalize_checked(t: &TermExpr, budget: usize) -> Result<TermExpr, BudgetExceeded> {
    let mut norm = Norm { steps: budget };
    norm.term(t)
}

/// Normalizes the term arguments embedded in a type.
pub fn normalize_type(a: &TypeExpr) -> TypeExpr {
    let mut norm = Norm { steps: DEFAULT_BUDGET };
    norm.ty(a).unwrap_or_else(|_| a.clone())
}

struct Norm {
    steps: usize,
}

impl Norm {
    fn tick(&mut self) -> Result<(), BudgetExceeded> {
        if self.steps == 0 {
            return Err(BudgetExceeded);
        }
        self.steps -= 1;
        Ok(())
    }

    fn term(&mut self, t: &TermExpr) -> Result<TermExpr, BudgetExceeded> {
        let mut current = t.clone();
        loop {
            match current {
                TermExpr::App { fun, arg } => {
                    let fun = self.term(&fun)?;
                    if let TermExpr::Lambda { binder, body, .. } = fun {
                        // normal order: contract before looking at the argument
                        self.tick()?;
                        current = subst_term_var(&body, &binder, &arg);
                        continue;
                    }
                    return Ok(TermExpr::app(fun, self.term(&arg)?));
                }
                TermExpr::Lambda { binder, domain, body } => {
                    let domain = self.ty(&domain)?;
                    let body = self.term(&body)?;
                    if let TermExpr::App { fun, arg } = &body {
                        let is_binder = matches!(arg.as_ref(), TermExpr::Var(x) if *x == binder);
                        if is_binder && !fun.free_vars().contains(&binder) {
                            self.tick()?;
                            return Ok(fun.as_ref().clone());
                        }
                    }
                    return Ok(TermExpr::Lambda {
                        binder,
                        domain: Box::new(domain),
                        body: Box::new(body),
                    });
                }
                TermExpr::Var(_) => return Ok(current),
                TermExpr::Const { symbol, args } => {
                    return Ok(TermExpr::Const { symbol, args: self.subst(&args)? });
                }
                TermExpr::Implies { lhs, rhs } => {
                    return Ok(TermExpr::implies(self.term(&lhs)?, self.term(&rhs)?));
                }
                TermExpr::Eq { ty, lhs, rhs } => {
                    return Ok(TermExpr::Eq {
                        ty: match ty {
                            Some(ty) => Some(Box::new(self.ty(&ty)?)),
                            None => None,
                        },
                        lhs: Box::new(self.term(&lhs)?),
                        rhs: Box::new(self.term(&rhs)?),
                    });
                }
            }
        }
    }

    fn ty(&mut self, a: &TypeExpr) -> Result<TypeExpr, BudgetExceeded> {
        match a {
            TypeExpr::Bool => Ok(TypeExpr::Bool),
            TypeExpr::Base { symbol, args } => Ok(TypeExpr::Base {
                symbol: symbol.clone(),
                args: self.subst(args)?,
            }),
            TypeExpr::Var { variable, term_args } => Ok(TypeExpr::Var {
                variable: variable.clone(),
                term_args: term_args
                    .iter()
                    .map(|t| self.term(t))
                    .collect::<Result<Vec<_>, _>>()?,
            }),
            TypeExpr::Pi { binder, domain, codomain } => Ok(TypeExpr::Pi {
                binder: binder.clone(),
                domain: Box::new(self.ty(domain)?),
                codomain: Box::new(self.ty(codomain)?),
            }),
        }
    }

    fn subst(&mut self, s: &Substitution) -> Result<Substitution, BudgetExceeded> {
        let entries = s
            .entries
            .iter()
            .map(|entry| match entry {
                SubstEntry::Type { params, body } => Ok(SubstEntry::Type {
                    params: params
                        .iter()
                        .map(|(x, ty)| Ok((x.clone(), self.ty(ty)?)))
                        .collect::<Result<Vec<_>, BudgetExceeded>>()?,
                    body: self.ty(body)?,
                }),
                SubstEntry::Term(t) => Ok(SubstEntry::Term(self.term(t)?)),
                SubstEntry::Check => Ok(SubstEntry::Check),
            })
            .collect::<Result<Vec<_>, BudgetExceeded>>()?;
        Ok(Substitution { entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::alpha_eq_term;
    use crate::name::Name;

    fn nat() -> TypeExpr {
        TypeExpr::base(Name::type_sym("nat"), Substitution::default())
    }

    fn tv(x: &str) -> Name {
        Name::term_var(x)
    }

    fn var(x: &str) -> TermExpr {
        TermExpr::Var(tv(x))
    }

    fn zero() -> TermExpr {
        TermExpr::cnst(Name::term_sym("zero"))
    }

    /// Independent leftmost-outermost single-step reducer, used as the
    /// oracle for the derived examples.
    fn step(t: &TermExpr) -> Option<TermExpr> {
        match t {
            TermExpr::App { fun, arg } => {
                if let TermExpr::Lambda { binder, body, .. } = fun.as_ref() {
                    return Some(subst_term_var(body, binder, arg));
                }
                if let Some(f) = step(fun) {
                    return Some(TermExpr::app(f, arg.as_ref().clone()));
                }
                step(arg).map(|a| TermExpr::app(fun.as_ref().clone(), a))
            }
            TermExpr::Lambda { binder, domain, body } => {
                if let TermExpr::App { fun, arg } = body.as_ref() {
                    if matches!(arg.as_ref(), TermExpr::Var(x) if x == binder)
                        && !fun.free_vars().contains(binder)
                    {
                        return Some(fun.as_ref().clone());
                    }
                }
                step(body).map(|b| {
                    TermExpr::Lambda {
                        binder: binder.clone(),
                        domain: domain.clone(),
                        body: Box::new(b),
                    }
                })
            }
            TermExpr::Implies { lhs, rhs } => {
                if let Some(l) = step(lhs) {
                    return Some(TermExpr::implies(l, rhs.as_ref().clone()));
                }
                step(rhs).map(|r| TermExpr::implies(lhs.as_ref().clone(), r))
            }
            TermExpr::Eq { ty, lhs, rhs } => {
                if let Some(l) = step(lhs) {
                    return Some(TermExpr::Eq {
                        ty: ty.clone(),
                        lhs: Box::new(l),
                        rhs: rhs.clone(),
                    });
                }
                step(rhs).map(|r| TermExpr::Eq {
                    ty: ty.clone(),
                    lhs: lhs.clone(),
                    rhs: Box::new(r),
                })
            }
            _ => None,
        }
    }

    fn oracle(t: &TermExpr) -> TermExpr {
        let mut cur = t.clone();
        for _ in 0..DEFAULT_BUDGET {
            match step(&cur) {
                Some(next) => cur = next,
                None => break,
            }
        }
        cur
    }

    #[test]
    fn beta_redex_contracts() {
        // (λx:nat. x) zero  ==>  zero
        let t = TermExpr::app(TermExpr::lam(tv("x"), nat(), var("x")), zero());
        assert_eq!(normalize(&t), zero());
    }

    #[test]
    fn eta_contracts_when_binder_not_free() {
        // λx:nat. f x  ==>  f
        let t = TermExpr::lam(tv("x"), nat(), TermExpr::app(TermExpr::cnst(Name::term_sym("f")), var("x")));
        assert_eq!(normalize(&t), TermExpr::cnst(Name::term_sym("f")));
        // λx:nat. f x x stays
        let t = TermExpr::lam(
            tv("x"),
            nat(),
            TermExpr::apps(TermExpr::cnst(Name::term_sym("f")), [var("x"), var("x")]),
        );
        assert!(alpha_eq_term(&normalize(&t), &t));
    }

    #[test]
    fn nested_redexes_match_small_step_oracle() {
        // (λx:nat. λy:nat. plus x y) one two  ==>  plus one two
        let plus = TermExpr::cnst(Name::term_sym("plus"));
        let one = TermExpr::app(TermExpr::cnst(Name::term_sym("suc")), zero());
        let two = TermExpr::app(TermExpr::cnst(Name::term_sym("suc")), one.clone());
        let t = TermExpr::apps(
            TermExpr::lam(
                tv("x"),
                nat(),
                TermExpr::lam(
                    tv("y"),
                    nat(),
                    TermExpr::apps(plus.clone(), [var("x"), var("y")]),
                ),
            ),
            [one.clone(), two.clone()],
        );
        let want = TermExpr::apps(plus, [one, two]);
        let got = normalize(&t);
        assert!(alpha_eq_term(&got, &want));
        assert!(alpha_eq_term(&got, &oracle(&t)), "normal form agrees with the oracle");
    }

    #[test]
    fn budget_reports_divergence() {
        // Ω = (λx:nat→nat. x x)(λx:nat→nat. x x) is ill-typed and loops
        let fun_ty = TypeExpr::arrow(nat(), nat());
        let self_app = TermExpr::lam(
            tv("x"),
            fun_ty,
            TermExpr::app(var("x"), var("x")),
        );
        let omega = TermExpr::app(self_app.clone(), self_app);
        assert_eq!(normalize_checked(&omega, 1000), Err(BudgetExceeded));
        // the lenient entry point hands back the input
        assert!(alpha_eq_term(&normalize(&omega), &omega));
    }

    #[test]
    fn normalize_is_idempotent_on_samples() {
        let plus = TermExpr::cnst(Name::term_sym("plus"));
        let t = TermExpr::apps(
            TermExpr::lam(
                tv("x"),
                nat(),
                TermExpr::lam(
                    tv("y"),
                    nat(),
                    TermExpr::apps(plus, [var("x"), TermExpr::app(TermExpr::lam(tv("z"), nat(), var("z")), var("y"))]),
                ),
            ),
            [zero()],
        );
        let once = normalize(&t);
        let twice = normalize(&once);
        assert!(alpha_eq_term(&once, &twice));
    }
}
