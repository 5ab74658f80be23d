//! Well-formedness checking.
//!
//! Everything decidable is checked structurally; residual term equalities
//! (from comparing the arguments of dependent types), substitution
//! assumptions, and subtype nonemptiness become [`Obligation`]s for the
//! external prover. Validity is never decided here beyond the structural
//! fast path.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::alpha::{alpha_eq_term, alpha_eq_type};
use crate::ast::{
    Conjecture, Context, ContextEntry, Declaration, Kind, Problem, Span, SubstEntry, Substitution,
    TermExpr, Theory, TypeExpr,
};
use crate::name::{Name, Namespace};
use crate::normalize::{normalize, normalize_type};
use crate::subst::SubstMap;
use crate::sugar;
use crate::surface::Diagnostic;

/// A proof goal the checker could not discharge structurally. The formula is
/// a Boolean over the (pre-erasure) context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obligation {
    pub id: Name,
    pub context: Context,
    pub formula: TermExpr,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObligationRule {
    /// An assumption position of a substitution (`⊢ Φ[δ]`).
    SubstAssumption,
    /// Component-wise type equality demanded a term equation.
    TermArgEquality,
    /// Nonemptiness of a subtype definition carrier.
    SubtypeNonempty,
}

impl fmt::Display for ObligationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ObligationRule::SubstAssumption => "substitution assumption",
            ObligationRule::TermArgEquality => "type-argument equality",
            ObligationRule::SubtypeNonempty => "subtype nonemptiness",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub rule: ObligationRule,
    /// The declaration or conjecture being checked when the goal arose.
    pub origin: Name,
    pub span: Span,
    pub detail: String,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}: {}", self.rule, self.origin, self.detail)
    }
}

/// Outcome of comparing two types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EqResult {
    Equal,
    Unequal(String),
    /// Equal provided these term equations hold.
    Conditional(Vec<Obligation>),
}

/// A validated problem: every equality annotation filled in, obligations in
/// deterministic order (declaration order, then left to right).
#[derive(Debug, Clone)]
pub struct CheckedProblem {
    pub problem: Problem,
    pub obligations: Vec<Obligation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckError {
    pub message: String,
    pub span: Span,
}

impl CheckError {
    fn new(message: impl Into<String>, span: Span) -> CheckError {
        CheckError { message: message.into(), span }
    }

    pub fn to_diagnostic(&self, file: &str) -> Diagnostic {
        Diagnostic::error(self.message.clone(), file, self.span)
    }
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

type CResult<T> = Result<T, CheckError>;

#[derive(Debug, Clone)]
enum SigEntry {
    TypeSym { params: Context },
    TermSym { params: Context, ty: TypeExpr },
}

/// Checker state: the signature built so far plus the obligation
/// accumulator.
pub struct Checker {
    sig: HashMap<Name, SigEntry>,
    decl_order: Vec<Name>,
    obligations: Vec<Obligation>,
    origin: Name,
    span: Span,
}

/// Checks a whole problem. See [`Checker`] for the operation-level API.
pub fn check_problem(p: &Problem) -> Result<CheckedProblem, CheckError> {
    let mut ck = Checker::empty();
    let mut decls = Vec::with_capacity(p.theory.decls.len());
    for decl in &p.theory.decls {
        decls.push(ck.check_decl(decl)?);
    }
    let conjecture = match &p.conjecture {
        Some(c) => Some(ck.check_conjecture(c)?),
        None => None,
    };
    let base = conjecture
        .as_ref()
        .map(|c: &Conjecture| c.label.text.clone())
        .unwrap_or_else(|| "theory".to_string());
    let mut obligations = std::mem::take(&mut ck.obligations);
    for (k, ob) in obligations.iter_mut().enumerate() {
        ob.id = Name::tco(&base, k + 1);
    }
    Ok(CheckedProblem {
        problem: Problem { theory: Theory::new(decls), conjecture },
        obligations,
    })
}

impl Checker {
    fn empty() -> Checker {
        Checker {
            sig: HashMap::new(),
            decl_order: Vec::new(),
            obligations: Vec::new(),
            origin: Name::generated("toplevel"),
            span: Span::SYNTH,
        }
    }

    /// Builds a checker over an already-validated theory, for use of the
    /// operation-level API on top of it.
    pub fn for_theory(theory: &Theory) -> Result<Checker, CheckError> {
        let mut ck = Checker::empty();
        for decl in &theory.decls {
            ck.check_decl(decl)?;
        }
        Ok(ck)
    }

    /// Obligations collected so far, ids renumbered from 1.
    pub fn take_obligations(&mut self) -> Vec<Obligation> {
        let mut obs = std::mem::take(&mut self.obligations);
        for (k, ob) in obs.iter_mut().enumerate() {
            ob.id = Name::tco(&self.origin.text, k + 1);
        }
        obs
    }

    // -- declarations -------------------------------------------------------

    fn check_decl(&mut self, decl: &Declaration) -> CResult<Declaration> {
        self.origin = decl.name().clone();
        self.span = decl.span();
        if self.sig.contains_key(decl.name()) || self.decl_order.contains(decl.name()) {
            return Err(CheckError::new(
                format!("duplicate declaration of `{}`", decl.name()),
                decl.span(),
            ));
        }
        let out = match decl {
            Declaration::TypeSym { name, params, span } => {
                let params = self.check_params(params)?;
                self.register(name.clone(), SigEntry::TypeSym { params: params.clone() });
                Declaration::TypeSym { name: name.clone(), params, span: *span }
            }
            Declaration::TermSym { name, params, ty, span } => {
                let params = self.check_params(params)?;
                let ty = self.check_type(&params, ty)?;
                self.register(
                    name.clone(),
                    SigEntry::TermSym { params: params.clone(), ty: ty.clone() },
                );
                Declaration::TermSym { name: name.clone(), params, ty, span: *span }
            }
            Declaration::Axiom { label, params, formula, span } => {
                let params = self.check_params(params)?;
                let formula = self.check_term(&params, formula, &TypeExpr::Bool)?;
                self.decl_order.push(label.clone());
                Declaration::Axiom { label: label.clone(), params, formula, span: *span }
            }
            Declaration::SubtypeDef { name, params, carrier, predicate, span } => {
                let (decl, _) = self.check_subtype_decl(name, params, carrier, predicate, *span)?;
                decl
            }
        };
        Ok(out)
    }

    fn check_conjecture(&mut self, c: &Conjecture) -> CResult<Conjecture> {
        self.origin = c.label.clone();
        self.span = c.span;
        let params = self.check_params(&c.params)?;
        let formula = self.check_term(&params, &c.formula, &TypeExpr::Bool)?;
        Ok(Conjecture { label: c.label.clone(), params, formula, span: c.span })
    }

    fn register(&mut self, name: Name, entry: SigEntry) {
        self.decl_order.push(name.clone());
        self.sig.insert(name, entry);
    }

    /// Validates a symbol parameter context: type variables (with kinds) and
    /// term variables may interleave; assumptions are not allowed.
    fn check_params(&mut self, params: &Context) -> CResult<Context> {
        let mut out = Context::default();
        for entry in &params.entries {
            match entry {
                ContextEntry::TypeVar { name, kind } => {
                    self.no_shadow(&out, name)?;
                    let kind = self.check_kind(&out, kind)?;
                    out.type_var(name.clone(), kind);
                }
                ContextEntry::TermVar { name, ty } => {
                    self.no_shadow(&out, name)?;
                    let ty = self.check_type(&out, ty)?;
                    out.term_var(name.clone(), ty);
                }
                ContextEntry::Assumption { .. } => {
                    return Err(CheckError::new(
                        "assumptions are not allowed in a symbol's parameter list",
                        self.span,
                    ));
                }
            }
        }
        Ok(out)
    }

    fn check_kind(&mut self, ctx: &Context, kind: &Kind) -> CResult<Kind> {
        let mut scope = ctx.clone();
        let mut telescope = Vec::with_capacity(kind.telescope.len());
        for (x, ty) in &kind.telescope {
            if x.space != Namespace::TermVariable && x.space != Namespace::Generated {
                return Err(CheckError::new(
                    format!("kind telescopes bind term variables only, found {}", x.space),
                    self.span,
                ));
            }
            self.no_shadow(&scope, x)?;
            let ty = self.check_type(&scope, ty)?;
            scope.term_var(x.clone(), ty.clone());
            telescope.push((x.clone(), ty));
        }
        Ok(Kind::new(telescope))
    }

    fn no_shadow(&self, ctx: &Context, name: &Name) -> CResult<()> {
        if ctx.contains_name(name) {
            return Err(CheckError::new(
                format!("`{name}` shadows an earlier declaration in the same context"),
                self.span,
            ));
        }
        Ok(())
    }

    // -- types ---------------------------------------------------------------

    /// Checks well-formedness of a type, returning the elaborated copy.
    pub fn check_type(&mut self, ctx: &Context, a: &TypeExpr) -> CResult<TypeExpr> {
        match a {
            TypeExpr::Bool => Ok(TypeExpr::Bool),
            TypeExpr::Pi { binder, domain, codomain } => {
                let domain = self.check_type(ctx, domain)?;
                self.no_shadow(ctx, binder)?;
                let mut inner = ctx.clone();
                inner.term_var(binder.clone(), domain.clone());
                let codomain = self.check_type(&inner, codomain)?;
                Ok(TypeExpr::pi(binder.clone(), domain, codomain))
            }
            TypeExpr::Var { variable, term_args } => {
                let kind = ctx
                    .lookup_type_var(variable)
                    .cloned()
                    .ok_or_else(|| {
                        CheckError::new(format!("unbound type variable `{variable}`"), self.span)
                    })?;
                if term_args.len() != kind.arity() {
                    return Err(CheckError::new(
                        format!(
                            "type variable `{variable}` expects {} argument(s), got {}",
                            kind.arity(),
                            term_args.len()
                        ),
                        self.span,
                    ));
                }
                let mut map = SubstMap::default();
                let mut args = Vec::with_capacity(term_args.len());
                for ((x, want), arg) in kind.telescope.iter().zip(term_args) {
                    let want = map.apply_type(want).map_err(|e| self.internal(e))?;
                    let arg = self.check_term(ctx, arg, &want)?;
                    map = merge_term(map, x.clone(), arg.clone());
                    args.push(arg);
                }
                Ok(TypeExpr::var_app(variable.clone(), args))
            }
            TypeExpr::Base { symbol, args } => {
                let params = match self.sig.get(symbol) {
                    Some(SigEntry::TypeSym { params }) => params.clone(),
                    Some(_) => {
                        return Err(CheckError::new(
                            format!("`{symbol}` is not a type symbol"),
                            self.span,
                        ))
                    }
                    None => {
                        return Err(CheckError::new(
                            format!("unbound type symbol `{symbol}`"),
                            self.span,
                        ))
                    }
                };
                let args = self.check_subst(ctx, args, &params)?;
                Ok(TypeExpr::base(symbol.clone(), args))
            }
        }
    }

    // -- terms ----------------------------------------------------------------

    /// Infers the type of a term; returns the elaborated term (every equality
    /// annotated) along with it. Residual equations land in the obligation
    /// accumulator.
    pub fn infer_type(&mut self, ctx: &Context, t: &TermExpr) -> CResult<(TermExpr, TypeExpr)> {
        match t {
            TermExpr::Var(x) => {
                let ty = ctx.lookup_term_var(x).cloned().ok_or_else(|| {
                    CheckError::new(format!("unbound variable `{x}`"), self.span)
                })?;
                Ok((t.clone(), ty))
            }
            TermExpr::Const { symbol, args } => {
                let (params, ty) = match self.sig.get(symbol) {
                    Some(SigEntry::TermSym { params, ty }) => (params.clone(), ty.clone()),
                    Some(_) => {
                        return Err(CheckError::new(
                            format!("type symbol `{symbol}` used in term position"),
                            self.span,
                        ))
                    }
                    None => {
                        return Err(CheckError::new(
                            format!("unbound symbol `{symbol}`"),
                            self.span,
                        ))
                    }
                };
                let args = self.check_subst(ctx, args, &params)?;
                let map = SubstMap::from_parts(&params, &args).map_err(|e| self.internal(e))?;
                let ty = map.apply_type(&ty).map_err(|e| self.internal(e))?;
                Ok((TermExpr::cnst_app(symbol.clone(), args), ty))
            }
            TermExpr::Lambda { binder, domain, body } => {
                let domain = self.check_type(ctx, domain)?;
                self.no_shadow(ctx, binder)?;
                let mut inner = ctx.clone();
                inner.term_var(binder.clone(), domain.clone());
                let (body, body_ty) = self.infer_type(&inner, body)?;
                Ok((
                    TermExpr::lam(binder.clone(), domain.clone(), body),
                    TypeExpr::pi(binder.clone(), domain, body_ty),
                ))
            }
            TermExpr::App { fun, arg } => {
                let (fun, fun_ty) = self.infer_type(ctx, fun)?;
                let TypeExpr::Pi { binder, domain, codomain } = fun_ty else {
                    return Err(CheckError::new(
                        format!(
                            "cannot apply a term of type `{}`",
                            crate::surface::print_type(&fun_ty)
                        ),
                        self.span,
                    ));
                };
                let arg = self.check_term(ctx, arg, &domain)?;
                let result = crate::subst::subst_type_term_var(&codomain, &binder, &arg);
                Ok((TermExpr::app(fun, arg), result))
            }
            TermExpr::Implies { lhs, rhs } => {
                let lhs = self.check_term(ctx, lhs, &TypeExpr::Bool)?;
                // dependent implication: the right side may assume the left
                let mut inner = ctx.clone();
                inner.assume(lhs.clone());
                let rhs = self.check_term(&inner, rhs, &TypeExpr::Bool)?;
                Ok((TermExpr::implies(lhs, rhs), TypeExpr::Bool))
            }
            TermExpr::Eq { ty, lhs, rhs } => {
                let (lhs, rhs, ann) = match ty {
                    Some(ann) => {
                        let ann = self.check_type(ctx, ann)?;
                        let lhs = self.check_term(ctx, lhs, &ann)?;
                        let rhs = self.check_term(ctx, rhs, &ann)?;
                        (lhs, rhs, ann)
                    }
                    None => {
                        // infer from the left operand, then check the right
                        let (lhs, ann) = self.infer_type(ctx, lhs)?;
                        let rhs = self.check_term(ctx, rhs, &ann)?;
                        (lhs, rhs, ann)
                    }
                };
                Ok((TermExpr::eq(ann, lhs, rhs), TypeExpr::Bool))
            }
        }
    }

    /// Checks a term against an expected type, emitting equality obligations
    /// when the comparison is conditional.
    pub fn check_term(&mut self, ctx: &Context, t: &TermExpr, want: &TypeExpr) -> CResult<TermExpr> {
        let (t, got) = self.infer_type(ctx, t)?;
        match self.type_equal(ctx, &got, want) {
            EqResult::Equal => Ok(t),
            EqResult::Conditional(obs) => {
                self.obligations.extend(obs);
                Ok(t)
            }
            EqResult::Unequal(reason) => Err(CheckError::new(
                format!(
                    "type mismatch: expected `{}`, found `{}` ({reason})",
                    crate::surface::print_type(want),
                    crate::surface::print_type(&got)
                ),
                self.span,
            )),
        }
    }

    // -- type equality ----------------------------------------------------------

    /// Structural type equality. Same-head applications compare their
    /// arguments position-wise: type arguments recursively, term arguments by
    /// the normalize-and-compare fast path with one equation obligation per
    /// differing pair.
    pub fn type_equal(&self, ctx: &Context, a: &TypeExpr, b: &TypeExpr) -> EqResult {
        // fast path: syntactically equal after normalization
        if alpha_eq_type(&normalize_type(a), &normalize_type(b)) {
            return EqResult::Equal;
        }
        match (a, b) {
            (TypeExpr::Bool, TypeExpr::Bool) => EqResult::Equal,
            (
                TypeExpr::Var { variable: v1, term_args: args1 },
                TypeExpr::Var { variable: v2, term_args: args2 },
            ) => {
                if v1 != v2 {
                    return EqResult::Unequal(format!(
                        "different type variables `{v1}` and `{v2}`"
                    ));
                }
                let telescope = match ctx.lookup_type_var(v1) {
                    Some(kind) => kind.telescope.clone(),
                    None => return EqResult::Unequal(format!("unbound type variable `{v1}`")),
                };
                self.compare_term_args(ctx, &telescope, args1, args2, &format!("`{v1}`"))
            }
            (
                TypeExpr::Pi { binder: x1, domain: d1, codomain: c1 },
                TypeExpr::Pi { binder: x2, domain: d2, codomain: c2 },
            ) => {
                let dom = self.type_equal(ctx, d1, d2);
                if let EqResult::Unequal(r) = dom {
                    return EqResult::Unequal(r);
                }
                let mut taken = ctx.declared();
                taken.extend(c1.free_vars());
                taken.extend(c2.free_vars());
                let fresh = x1.freshen(&taken);
                let c1 = crate::subst::subst_type_term_var(c1, x1, &TermExpr::Var(fresh.clone()));
                let c2 = crate::subst::subst_type_term_var(c2, x2, &TermExpr::Var(fresh.clone()));
                let mut inner = ctx.clone();
                inner.term_var(fresh, d1.as_ref().clone());
                let cod = self.type_equal(&inner, &c1, &c2);
                combine(dom, cod)
            }
            (
                TypeExpr::Base { symbol: s1, args: args1 },
                TypeExpr::Base { symbol: s2, args: args2 },
            ) => {
                if s1 != s2 {
                    return EqResult::Unequal(format!(
                        "different type symbols `{s1}` and `{s2}`"
                    ));
                }
                let params = match self.sig.get(s1) {
                    Some(SigEntry::TypeSym { params }) => params.clone(),
                    _ => return EqResult::Unequal(format!("unbound type symbol `{s1}`")),
                };
                self.compare_subst_args(ctx, &params, args1, args2, &format!("`{s1}`"))
            }
            _ => EqResult::Unequal("structurally different types".into()),
        }
    }

    /// Position-wise comparison of two substitutions for the same parameter
    /// telescope.
    fn compare_subst_args(
        &self,
        ctx: &Context,
        params: &Context,
        left: &Substitution,
        right: &Substitution,
        what: &str,
    ) -> EqResult {
        if left.len() != right.len() || left.len() != params.len() {
            return EqResult::Unequal(format!("argument arity mismatch for {what}"));
        }
        let mut acc = EqResult::Equal;
        // the left prefix instantiates the declared parameter types
        let mut prefix = SubstMap::default();
        for (i, ((entry, l), r)) in
            params.entries.iter().zip(&left.entries).zip(&right.entries).enumerate()
        {
            match (entry, l, r) {
                (
                    ContextEntry::TypeVar { .. },
                    SubstEntry::Type { params: p1, body: b1 },
                    SubstEntry::Type { params: p2, body: b2 },
                ) => {
                    if p1.len() != p2.len() {
                        return EqResult::Unequal(format!(
                            "type-argument {i} of {what} has mismatched kinds"
                        ));
                    }
                    let r = if p1.is_empty() {
                        self.type_equal(ctx, b1, b2)
                    } else {
                        self.compare_type_lambdas(ctx, p1, b1, p2, b2)
                    };
                    if let EqResult::Unequal(reason) = r {
                        return EqResult::Unequal(reason);
                    }
                    acc = combine(acc, r);
                }
                (ContextEntry::TermVar { name, ty }, SubstEntry::Term(s), SubstEntry::Term(t)) => {
                    let s_n = normalize(s);
                    let t_n = normalize(t);
                    if !alpha_eq_term(&s_n, &t_n) {
                        let ann = prefix.apply_type(ty).unwrap_or_else(|_| ty.clone());
                        let ob = self.obligation(
                            ObligationRule::TermArgEquality,
                            ctx.clone(),
                            TermExpr::eq(ann, s.clone(), t.clone()),
                            format!("argument {} of {what}", i + 1),
                        );
                        acc = combine(acc, EqResult::Conditional(vec![ob]));
                    }
                    prefix = merge_term(prefix, name.clone(), s.clone());
                }
                (ContextEntry::Assumption { .. }, SubstEntry::Check, SubstEntry::Check) => {}
                _ => {
                    return EqResult::Unequal(format!(
                        "argument {i} of {what} has mismatched entry kinds"
                    ))
                }
            }
        }
        acc
    }

    fn compare_type_lambdas(
        &self,
        ctx: &Context,
        p1: &[(Name, TypeExpr)],
        b1: &TypeExpr,
        p2: &[(Name, TypeExpr)],
        b2: &TypeExpr,
    ) -> EqResult {
        // rename both telescopes to shared fresh variables, comparing the
        // binder types along the way
        let mut acc = EqResult::Equal;
        let mut inner = ctx.clone();
        let mut m1 = SubstMap::default();
        let mut m2 = SubstMap::default();
        for ((x1, t1), (x2, t2)) in p1.iter().zip(p2) {
            let t1 = match m1.apply_type(t1) {
                Ok(t) => t,
                Err(e) => return EqResult::Unequal(e.to_string()),
            };
            let t2 = match m2.apply_type(t2) {
                Ok(t) => t,
                Err(e) => return EqResult::Unequal(e.to_string()),
            };
            match self.type_equal(&inner, &t1, &t2) {
                EqResult::Unequal(r) => return EqResult::Unequal(r),
                r => acc = combine(acc, r),
            }
            let mut taken = inner.declared();
            taken.extend(b1.free_vars());
            taken.extend(b2.free_vars());
            let fresh = x1.freshen(&taken);
            inner.term_var(fresh.clone(), t1);
            m1 = merge_term(m1, x1.clone(), TermExpr::Var(fresh.clone()));
            m2 = merge_term(m2, x2.clone(), TermExpr::Var(fresh));
        }
        let b1 = match m1.apply_type(b1) {
            Ok(t) => t,
            Err(e) => return EqResult::Unequal(e.to_string()),
        };
        let b2 = match m2.apply_type(b2) {
            Ok(t) => t,
            Err(e) => return EqResult::Unequal(e.to_string()),
        };
        combine(acc, self.type_equal(&inner, &b1, &b2))
    }

    fn compare_term_args(
        &self,
        ctx: &Context,
        telescope: &[(Name, TypeExpr)],
        left: &[TermExpr],
        right: &[TermExpr],
        what: &str,
    ) -> EqResult {
        if left.len() != right.len() || left.len() != telescope.len() {
            return EqResult::Unequal(format!("argument arity mismatch for {what}"));
        }
        let mut acc = EqResult::Equal;
        let mut prefix = SubstMap::default();
        for (i, ((x, ty), (s, t))) in telescope.iter().zip(left.iter().zip(right)).enumerate() {
            let s_n = normalize(s);
            let t_n = normalize(t);
            if !alpha_eq_term(&s_n, &t_n) {
                let ann = prefix.apply_type(ty).unwrap_or_else(|_| ty.clone());
                let ob = self.obligation(
                    ObligationRule::TermArgEquality,
                    ctx.clone(),
                    TermExpr::eq(ann, s.clone(), t.clone()),
                    format!("argument {} of {what}", i + 1),
                );
                acc = combine(acc, EqResult::Conditional(vec![ob]));
            }
            prefix = merge_term(prefix, x.clone(), s.clone());
        }
        acc
    }

    // -- substitutions ------------------------------------------------------------

    /// Checks `delta` against the telescope `target` entry-wise. Each
    /// assumption position contributes one obligation `Φ[δ]`.
    pub fn check_subst(
        &mut self,
        ctx: &Context,
        delta: &Substitution,
        target: &Context,
    ) -> CResult<Substitution> {
        if delta.len() != target.len() {
            return Err(CheckError::new(
                format!(
                    "substitution has {} entries but the context declares {}",
                    delta.len(),
                    target.len()
                ),
                self.span,
            ));
        }
        let mut out = Substitution::default();
        let mut map = SubstMap::default();
        for (i, (entry, sub)) in target.entries.iter().zip(&delta.entries).enumerate() {
            match (entry, sub) {
                (ContextEntry::TypeVar { name, kind }, SubstEntry::Type { params, body }) => {
                    if params.len() != kind.arity() {
                        return Err(CheckError::new(
                            format!(
                                "type substitute for `{name}` has {} binder(s), its kind expects {}",
                                params.len(),
                                kind.arity()
                            ),
                            self.span,
                        ));
                    }
                    // binder types must match the instantiated kind telescope
                    let mut scope = ctx.clone();
                    let mut kind_map = SubstMap::default();
                    let mut checked_params = Vec::with_capacity(params.len());
                    for ((x, ty), (kx, kty)) in params.iter().zip(&kind.telescope) {
                        let ty = self.check_type(&scope, ty)?;
                        let want = map
                            .apply_type(kty)
                            .and_then(|t| kind_map.apply_type(&t))
                            .map_err(|e| self.internal(e))?;
                        match self.type_equal(&scope, &ty, &want) {
                            EqResult::Equal => {}
                            EqResult::Conditional(obs) => self.obligations.extend(obs),
                            EqResult::Unequal(reason) => {
                                return Err(CheckError::new(
                                    format!(
                                        "kind mismatch for type substitute `{name}` ({reason})"
                                    ),
                                    self.span,
                                ))
                            }
                        }
                        self.no_shadow(&scope, x)?;
                        scope.term_var(x.clone(), ty.clone());
                        kind_map = merge_term(kind_map, kx.clone(), TermExpr::Var(x.clone()));
                        checked_params.push((x.clone(), ty));
                    }
                    let body = self.check_type(&scope, body)?;
                    map = merge_type(map, name.clone(), checked_params.clone(), body.clone());
                    out.push(SubstEntry::Type { params: checked_params, body });
                }
                (ContextEntry::TermVar { name, ty }, SubstEntry::Term(t)) => {
                    let want = map.apply_type(ty).map_err(|e| self.internal(e))?;
                    let t = self.check_term(ctx, t, &want)?;
                    map = merge_term(map, name.clone(), t.clone());
                    out.push(SubstEntry::Term(t));
                }
                (ContextEntry::Assumption { formula }, SubstEntry::Check) => {
                    let instantiated = map.apply_term(formula).map_err(|e| self.internal(e))?;
                    let ob = self.obligation(
                        ObligationRule::SubstAssumption,
                        ctx.clone(),
                        instantiated,
                        format!("assumption {} of the target context", i + 1),
                    );
                    self.obligations.push(ob);
                    out.push(SubstEntry::Check);
                }
                _ => {
                    return Err(CheckError::new(
                        format!("substitution entry {} does not match the context entry kind", i),
                        self.span,
                    ))
                }
            }
        }
        Ok(out)
    }

    // -- subtype definitions -------------------------------------------------------

    /// Validates a subtype definition: predicate at `carrier -> o` plus the
    /// nonemptiness obligation, then registers the elaborated symbols.
    fn check_subtype_decl(
        &mut self,
        name: &Name,
        params: &Context,
        carrier: &TypeExpr,
        predicate: &TermExpr,
        span: Span,
    ) -> CResult<(Declaration, Vec<Declaration>)> {
        let params = self.check_params(params)?;
        // §6 shape: type variables (plain kinds) first, then term variables
        let mut seen_term = false;
        for entry in &params.entries {
            match entry {
                ContextEntry::TypeVar { kind, .. } => {
                    if seen_term {
                        return Err(CheckError::new(
                            "subtype parameters must list type variables before term variables",
                            span,
                        ));
                    }
                    if !kind.is_plain() {
                        return Err(CheckError::new(
                            "subtype type parameters must have kind Type",
                            span,
                        ));
                    }
                }
                ContextEntry::TermVar { .. } => seen_term = true,
                ContextEntry::Assumption { .. } => unreachable!("rejected by check_params"),
            }
        }
        let carrier = self.check_type(&params, carrier)?;
        let (predicate, pred_ty) = self.infer_type(&params, predicate)?;
        let want = TypeExpr::arrow(carrier.clone(), TypeExpr::Bool);
        match self.type_equal(&params, &pred_ty, &want) {
            EqResult::Equal => {}
            EqResult::Conditional(obs) => self.obligations.extend(obs),
            EqResult::Unequal(_) => {
                return Err(CheckError::new(
                    format!(
                        "subtype predicate must be a unary Boolean function on the carrier, found `{}`",
                        crate::surface::print_type(&pred_ty)
                    ),
                    span,
                ));
            }
        }
        let decl = Declaration::SubtypeDef {
            name: name.clone(),
            params: params.clone(),
            carrier: carrier.clone(),
            predicate: predicate.clone(),
            span,
        };
        // nonemptiness: ∃v:carrier. p v
        let mut taken = params.declared();
        taken.extend(predicate.free_vars());
        let v = Name::term_var("v").freshen(&taken);
        let goal = sugar::exists(
            v.clone(),
            carrier.clone(),
            sugar::app_beta(predicate.clone(), TermExpr::Var(v)),
        );
        let ob = self.obligation(
            ObligationRule::SubtypeNonempty,
            params.clone(),
            goal,
            format!("nonemptiness of subtype `{name}`"),
        );
        self.obligations.push(ob);

        let elaborated = elaborate_subtype(&decl);
        for d in &elaborated {
            match d {
                Declaration::TypeSym { name, params, .. } => {
                    self.register(name.clone(), SigEntry::TypeSym { params: params.clone() })
                }
                Declaration::TermSym { name, params, ty, .. } => self.register(
                    name.clone(),
                    SigEntry::TermSym { params: params.clone(), ty: ty.clone() },
                ),
                Declaration::Axiom { .. } => {}
                Declaration::SubtypeDef { .. } => unreachable!(),
            }
        }
        Ok((decl, elaborated))
    }

    /// Operation-level entry point mirroring [`Checker::check_subtype_decl`]:
    /// returns the obligations it produced (the nonemptiness goal last).
    pub fn check_subtype_def(&mut self, decl: &Declaration) -> CResult<Vec<Obligation>> {
        let Declaration::SubtypeDef { name, params, carrier, predicate, span } = decl else {
            return Err(CheckError::new("not a subtype definition", decl.span()));
        };
        let before = self.obligations.len();
        self.check_subtype_decl(name, params, carrier, predicate, *span)?;
        Ok(self.obligations.split_off(before))
    }

    fn obligation(
        &self,
        rule: ObligationRule,
        context: Context,
        formula: TermExpr,
        detail: String,
    ) -> Obligation {
        Obligation {
            id: Name::tco("pending", 0),
            context,
            formula,
            provenance: Provenance {
                rule,
                origin: self.origin.clone(),
                span: self.span,
                detail,
            },
        }
    }

    fn internal(&self, e: crate::subst::SubstError) -> CheckError {
        CheckError::new(format!("internal substitution failure: {e}"), self.span)
    }
}

/// Elaborates `a := λΔ. A | p` into the type symbol, the Abs/Rep constants,
/// and the defining axiom.
pub fn elaborate_subtype(decl: &Declaration) -> Vec<Declaration> {
    let Declaration::SubtypeDef { name, params, carrier, predicate, span } = decl else {
        panic!("elaborate_subtype expects a subtype definition");
    };
    let span = *span;
    let a_ref = TypeExpr::base(name.clone(), params.identity());
    let abs = name.abs();
    let rep = name.rep();
    let abs_app = |t: TermExpr| TermExpr::app(TermExpr::cnst_app(abs.clone(), params.identity()), t);
    let rep_app = |t: TermExpr| TermExpr::app(TermExpr::cnst_app(rep.clone(), params.identity()), t);

    let mut taken = params.declared();
    taken.extend(predicate.free_vars());
    let u = Name::term_var("u").freshen(&taken);
    let v = Name::term_var("v").freshen(&taken);

    // (∀u : a δ. p (rep u) ∧ abs (rep u) = u)
    let first = sugar::forall(
        u.clone(),
        a_ref.clone(),
        sugar::and(
            sugar::app_beta(predicate.clone(), rep_app(TermExpr::Var(u.clone()))),
            TermExpr::eq(
                a_ref.clone(),
                abs_app(rep_app(TermExpr::Var(u.clone()))),
                TermExpr::Var(u.clone()),
            ),
        ),
    );
    // (∀v : A. p v ⇒ rep (abs v) = v)
    let second = sugar::forall(
        v.clone(),
        carrier.clone(),
        TermExpr::implies(
            sugar::app_beta(predicate.clone(), TermExpr::Var(v.clone())),
            TermExpr::eq(
                carrier.clone(),
                rep_app(abs_app(TermExpr::Var(v.clone()))),
                TermExpr::Var(v),
            ),
        ),
    );

    vec![
        Declaration::TypeSym { name: name.clone(), params: params.clone(), span },
        Declaration::TermSym {
            name: abs,
            params: params.clone(),
            ty: TypeExpr::arrow(carrier.clone(), a_ref.clone()),
            span,
        },
        Declaration::TermSym {
            name: rep,
            params: params.clone(),
            ty: TypeExpr::arrow(a_ref, carrier.clone()),
            span,
        },
        Declaration::Axiom {
            label: Name::generated(format!("{}_abs_rep", name.text)),
            params: params.clone(),
            formula: sugar::and(first, second),
            span,
        },
    ]
}

fn combine(a: EqResult, b: EqResult) -> EqResult {
    match (a, b) {
        (EqResult::Unequal(r), _) | (_, EqResult::Unequal(r)) => EqResult::Unequal(r),
        (EqResult::Equal, r) | (r, EqResult::Equal) => r,
        (EqResult::Conditional(mut xs), EqResult::Conditional(ys)) => {
            xs.extend(ys);
            EqResult::Conditional(xs)
        }
    }
}

fn merge_term(mut map: SubstMap, x: Name, value: TermExpr) -> SubstMap {
    map.insert_term(x, value);
    map
}

fn merge_type(
    mut map: SubstMap,
    alpha: Name,
    params: Vec<(Name, TypeExpr)>,
    body: TypeExpr,
) -> SubstMap {
    map.insert_type(alpha, params, body);
    map
}
