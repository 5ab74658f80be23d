//! Recursive-descent parser.
//!
//! Symbol references are always fully instantiated, so the parser tracks the
//! parameter shape of every declared symbol and consumes exactly that many
//! argument atoms at each reference; remaining juxtaposition is ordinary
//! application. Derived connectives desugar into the primitives at parse
//! time (see [`crate::sugar`]).

use std::collections::HashMap;

use crate::ast::{
    Conjecture, Context, Declaration, Kind, Problem, Span, SubstEntry, Substitution, TermExpr,
    Theory, TypeExpr,
};
use crate::name::{Name, Namespace};
use crate::sugar;

use super::lexer::{lex, Tok, Token};
use super::Diagnostic;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ParamShape {
    /// A type-variable position; nonzero arity means a dependent kind.
    Type { kind_arity: usize },
    Term,
}

#[derive(Debug, Clone)]
struct SymEntry {
    name: Name,
    shapes: Vec<ParamShape>,
    is_type: bool,
    /// Axiom and conjecture labels occupy the global namespace but cannot be
    /// referenced in expressions.
    referencable: bool,
}

#[derive(Debug, Clone)]
enum LocalVar {
    TypeVar { kind: Kind },
    TermVar,
}

struct ParseError {
    message: String,
    span: Span,
}

type PResult<T> = Result<T, ParseError>;

struct Parser {
    file: String,
    toks: Vec<Token>,
    pos: usize,
    syms: HashMap<String, SymEntry>,
    order: Vec<String>,
    locals: Vec<(String, LocalVar)>,
}

/// Parses a whole problem. All diagnostics carry spans into `file`.
pub fn parse_problem(source: &str, file: &str) -> Result<Problem, Vec<Diagnostic>> {
    let toks = match lex(source) {
        Ok(toks) => toks,
        Err(e) => return Err(vec![Diagnostic::error(e.message, file, e.span)]),
    };
    let mut parser = Parser {
        file: file.to_string(),
        toks,
        pos: 0,
        syms: HashMap::new(),
        order: Vec::new(),
        locals: Vec::new(),
    };
    parser.problem()
}

impl Parser {
    fn problem(&mut self) -> Result<Problem, Vec<Diagnostic>> {
        let mut diags = Vec::new();
        let mut theory = Theory::default();
        let mut conjecture: Option<Conjecture> = None;
        while self.peek() != &Tok::Eof {
            match self.item() {
                Ok(Item::Decl(d)) => theory.decls.push(d),
                Ok(Item::Conjecture(c)) => {
                    if conjecture.is_some() {
                        diags.push(Diagnostic::error(
                            "duplicate conjecture; a problem has exactly one",
                            &self.file,
                            c.span,
                        ));
                    } else {
                        conjecture = Some(c);
                    }
                }
                Err(e) => {
                    diags.push(Diagnostic::error(e.message, &self.file, e.span));
                    self.locals.clear();
                    // resynchronize at the next item terminator
                    while self.peek() != &Tok::Eof {
                        let is_dot = self.peek() == &Tok::Dot;
                        self.bump();
                        if is_dot {
                            break;
                        }
                    }
                    if diags.len() >= 20 {
                        break;
                    }
                }
            }
        }
        if diags.is_empty() {
            Ok(Problem { theory, conjecture })
        } else {
            Err(diags)
        }
    }

    // -- tokens -----------------------------------------------------------

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        if self.peek() == &tok {
            Ok(self.bump())
        } else {
            Err(self.err(format!("expected {}, found {}", tok.describe(), self.peek().describe())))
        }
    }

    fn err(&self, message: String) -> ParseError {
        ParseError { message, span: self.span() }
    }

    fn ident(&mut self) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let span = self.span();
                self.bump();
                Ok((s, span))
            }
            other => Err(self.err(format!("expected an identifier, found {}", other.describe()))),
        }
    }

    // -- scope ------------------------------------------------------------

    fn lookup_local(&self, text: &str) -> Option<&LocalVar> {
        self.locals.iter().rev().find(|(t, _)| t == text).map(|(_, v)| v)
    }

    fn check_declared_name(&self, text: &str, span: Span, space: Namespace) -> PResult<()> {
        if text == "o" {
            return Err(ParseError { message: "`o` is the Boolean type and cannot be redeclared".into(), span });
        }
        if Name::uses_reserved_suffix(text) {
            return Err(ParseError {
                message: format!(
                    "identifier `{text}` uses a reserved generated-name suffix (_per, _abs, _rep, _tco)"
                ),
                span,
            });
        }
        if !Name::is_valid_surface(text, space) {
            let expected = match space {
                Namespace::TypeVariable => "an uppercase-initial type variable",
                _ => "a lowercase-initial identifier",
            };
            return Err(ParseError {
                message: format!("`{text}` is not {expected}"),
                span,
            });
        }
        Ok(())
    }

    fn declare_global(&mut self, entry: SymEntry, span: Span) -> PResult<()> {
        let text = entry.name.text.clone();
        if self.syms.contains_key(&text) {
            return Err(ParseError {
                message: format!("duplicate declaration of `{text}`"),
                span,
            });
        }
        self.order.push(text.clone());
        self.syms.insert(text, entry);
        Ok(())
    }

    // -- items ------------------------------------------------------------

    fn item(&mut self) -> PResult<Item> {
        match self.peek().clone() {
            Tok::KwType => {
                self.bump();
                let (text, span) = self.ident()?;
                self.check_declared_name(&text, span, Namespace::TypeSymbol)?;
                let name = Name::type_sym(&text);
                let (params, shapes, pushed) = self.params()?;
                self.locals.truncate(self.locals.len() - pushed);
                self.expect(Tok::Dot)?;
                self.declare_global(
                    SymEntry { name: name.clone(), shapes, is_type: true, referencable: true },
                    span,
                )?;
                Ok(Item::Decl(Declaration::TypeSym { name, params, span }))
            }
            Tok::KwConst => {
                self.bump();
                let (text, span) = self.ident()?;
                self.check_declared_name(&text, span, Namespace::TermSymbol)?;
                let name = Name::term_sym(&text);
                let (params, shapes, pushed) = self.params()?;
                self.expect(Tok::Colon)?;
                let ty = self.ty()?;
                self.locals.truncate(self.locals.len() - pushed);
                self.expect(Tok::Dot)?;
                self.declare_global(
                    SymEntry { name: name.clone(), shapes, is_type: false, referencable: true },
                    span,
                )?;
                Ok(Item::Decl(Declaration::TermSym { name, params, ty, span }))
            }
            Tok::KwAxiom | Tok::KwConjecture => {
                let is_axiom = matches!(self.peek(), Tok::KwAxiom);
                self.bump();
                let (text, span) = self.ident()?;
                self.check_declared_name(&text, span, Namespace::TermSymbol)?;
                let label = Name::term_sym(&text);
                let (params, shapes, pushed) = self.params()?;
                self.expect(Tok::Colon)?;
                let formula = self.form()?;
                self.locals.truncate(self.locals.len() - pushed);
                self.expect(Tok::Dot)?;
                self.declare_global(
                    SymEntry { name: label.clone(), shapes, is_type: false, referencable: false },
                    span,
                )?;
                if is_axiom {
                    Ok(Item::Decl(Declaration::Axiom { label, params, formula, span }))
                } else {
                    Ok(Item::Conjecture(Conjecture { label, params, formula, span }))
                }
            }
            Tok::KwSubtype => {
                self.bump();
                let (text, span) = self.ident()?;
                self.check_declared_name(&text, span, Namespace::TypeSymbol)?;
                let name = Name::type_sym(&text);
                let (params, shapes, pushed) = self.params()?;
                self.expect(Tok::ColonEq)?;
                let carrier = self.ty()?;
                self.expect(Tok::Bar)?;
                let predicate = self.form()?;
                self.locals.truncate(self.locals.len() - pushed);
                self.expect(Tok::Dot)?;
                self.declare_global(
                    SymEntry { name: name.clone(), shapes: shapes.clone(), is_type: true, referencable: true },
                    span,
                )?;
                // the elaborated abstraction/representation functions are
                // referencable downstream
                for gen in [name.abs(), name.rep()] {
                    self.declare_global(
                        SymEntry { name: gen, shapes: shapes.clone(), is_type: false, referencable: true },
                        span,
                    )?;
                }
                Ok(Item::Decl(Declaration::SubtypeDef { name, params, carrier, predicate, span }))
            }
            other => Err(self.err(format!(
                "expected `type`, `const`, `axiom`, `subtype` or `conjecture`, found {}",
                other.describe()
            ))),
        }
    }

    /// Parses `( name : ptype )*`, pushing locals; returns the context, the
    /// argument shapes, and how many locals were pushed.
    fn params(&mut self) -> PResult<(Context, Vec<ParamShape>, usize)> {
        let mut ctx = Context::default();
        let mut shapes = Vec::new();
        let mut pushed = 0;
        while self.peek() == &Tok::LParen {
            self.expect(Tok::LParen)?;
            let (text, span) = self.ident()?;
            self.expect(Tok::Colon)?;
            match self.ptype()? {
                PType::Kind(kind) => {
                    self.check_declared_name(&text, span, Namespace::TypeVariable)?;
                    let name = Name::type_var(&text);
                    shapes.push(ParamShape::Type { kind_arity: kind.arity() });
                    self.locals.push((text, LocalVar::TypeVar { kind: kind.clone() }));
                    ctx.type_var(name, kind);
                }
                PType::Type(ty) => {
                    self.check_declared_name(&text, span, Namespace::TermVariable)?;
                    let name = Name::term_var(&text);
                    shapes.push(ParamShape::Term);
                    self.locals.push((text, LocalVar::TermVar));
                    ctx.term_var(name, ty);
                }
            }
            pushed += 1;
            self.expect(Tok::RParen)?;
        }
        Ok((ctx, shapes, pushed))
    }

    /// A parameter classifier: `Type`, a dependent kind `(x:A) -> … -> Type`,
    /// or an ordinary type.
    fn ptype(&mut self) -> PResult<PType> {
        if self.eat(&Tok::KwBigType) {
            return Ok(PType::Kind(Kind::plain()));
        }
        // collect `(x : A) ->` binder groups shared by kinds and Pi-types
        let mut binders: Vec<(Name, TypeExpr)> = Vec::new();
        let mut pushed = 0;
        loop {
            if self.peek() == &Tok::LParen
                && matches!(self.peek_at(1), Tok::Ident(_))
                && self.peek_at(2) == &Tok::Colon
            {
                self.expect(Tok::LParen)?;
                let (text, span) = self.ident()?;
                self.check_declared_name(&text, span, Namespace::TermVariable)?;
                self.expect(Tok::Colon)?;
                let ty = self.ty()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Arrow)?;
                self.locals.push((text.clone(), LocalVar::TermVar));
                pushed += 1;
                binders.push((Name::term_var(&text), ty));
                continue;
            }
            break;
        }
        let out = if self.eat(&Tok::KwBigType) {
            PType::Kind(Kind::new(binders.clone()))
        } else {
            let tail = self.ty()?;
            PType::Type(
                binders
                    .iter()
                    .rev()
                    .fold(tail, |acc, (x, ty)| TypeExpr::pi(x.clone(), ty.clone(), acc)),
            )
        };
        self.locals.truncate(self.locals.len() - pushed);
        Ok(out)
    }

    // -- types ------------------------------------------------------------

    fn ty(&mut self) -> PResult<TypeExpr> {
        // dependent binder `(x : A) -> B`
        if self.peek() == &Tok::LParen
            && matches!(self.peek_at(1), Tok::Ident(_))
            && self.peek_at(2) == &Tok::Colon
        {
            self.expect(Tok::LParen)?;
            let (text, span) = self.ident()?;
            self.check_declared_name(&text, span, Namespace::TermVariable)?;
            self.expect(Tok::Colon)?;
            let dom = self.ty()?;
            self.expect(Tok::RParen)?;
            self.expect(Tok::Arrow)?;
            self.locals.push((text.clone(), LocalVar::TermVar));
            let cod = self.ty();
            self.locals.pop();
            return Ok(TypeExpr::pi(Name::term_var(&text), dom, cod?));
        }
        let head = self.ty_app()?;
        if self.eat(&Tok::Arrow) {
            let cod = self.ty()?;
            return Ok(TypeExpr::arrow(head, cod));
        }
        Ok(head)
    }

    fn ty_app(&mut self) -> PResult<TypeExpr> {
        match self.peek().clone() {
            Tok::Ident(text) => {
                let span = self.span();
                self.bump();
                self.type_reference(&text, span, true)
            }
            Tok::LParen => {
                self.bump();
                let ty = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(ty)
            }
            other => Err(self.err(format!("expected a type, found {}", other.describe()))),
        }
    }

    /// Resolves a type-position identifier; `with_args` controls whether the
    /// reference may consume its argument atoms (true everywhere except
    /// strict atom positions).
    fn type_reference(&mut self, text: &str, span: Span, with_args: bool) -> PResult<TypeExpr> {
        if text == "o" {
            return Ok(TypeExpr::Bool);
        }
        if let Some(local) = self.lookup_local(text) {
            match local.clone() {
                LocalVar::TypeVar { kind } => {
                    let mut args = Vec::new();
                    if with_args {
                        for _ in 0..kind.arity() {
                            args.push(self.term_atom()?);
                        }
                    } else if kind.arity() != 0 {
                        return Err(ParseError {
                            message: format!(
                                "dependent type variable `{text}` needs {} argument(s) here; parenthesize the application",
                                kind.arity()
                            ),
                            span,
                        });
                    }
                    return Ok(TypeExpr::var_app(Name::type_var(text), args));
                }
                LocalVar::TermVar => {
                    return Err(ParseError {
                        message: format!("term variable `{text}` used where a type is expected"),
                        span,
                    });
                }
            }
        }
        match self.syms.get(text).cloned() {
            Some(entry) if entry.is_type && entry.referencable => {
                if !with_args && !entry.shapes.is_empty() {
                    return Err(ParseError {
                        message: format!(
                            "type symbol `{text}` takes {} argument(s); parenthesize the application",
                            entry.shapes.len()
                        ),
                        span,
                    });
                }
                let args = self.args(&entry.shapes)?;
                Ok(TypeExpr::base(entry.name, args))
            }
            Some(_) => Err(ParseError {
                message: format!("`{text}` is not a type symbol"),
                span,
            }),
            None => Err(ParseError { message: format!("unbound name `{text}`"), span }),
        }
    }

    /// Strict type atom: `o`, a bare zero-arity reference, or parentheses.
    fn type_atom(&mut self) -> PResult<TypeExpr> {
        match self.peek().clone() {
            Tok::Ident(text) => {
                let span = self.span();
                self.bump();
                self.type_reference(&text, span, false)
            }
            Tok::LParen => {
                self.bump();
                let ty = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(ty)
            }
            other => Err(self.err(format!("expected a type argument, found {}", other.describe()))),
        }
    }

    /// Argument in a dependent type-variable position: an explicit
    /// type-level lambda `(\(x : A). B)` or a bare variable of the right
    /// kind arity, which eta-expands.
    fn type_lambda_arg(&mut self, arity: usize) -> PResult<SubstEntry> {
        if self.peek() == &Tok::LParen && self.peek_at(1) == &Tok::Backslash {
            self.expect(Tok::LParen)?;
            let mut params = Vec::new();
            let mut pushed = 0;
            while self.eat(&Tok::Backslash) {
                self.expect(Tok::LParen)?;
                let (text, span) = self.ident()?;
                self.check_declared_name(&text, span, Namespace::TermVariable)?;
                self.expect(Tok::Colon)?;
                let ty = self.ty()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Dot)?;
                self.locals.push((text.clone(), LocalVar::TermVar));
                pushed += 1;
                params.push((Name::term_var(&text), ty));
            }
            let body = self.ty();
            self.locals.truncate(self.locals.len() - pushed);
            let body = body?;
            self.expect(Tok::RParen)?;
            if params.len() != arity {
                return Err(self.err(format!(
                    "type-level lambda has {} binder(s), the position expects {arity}",
                    params.len()
                )));
            }
            return Ok(SubstEntry::Type { params, body });
        }
        // bare type variable of matching kind: eta-expand with its own kind
        if let Tok::Ident(text) = self.peek().clone() {
            let span = self.span();
            if let Some(LocalVar::TypeVar { kind }) = self.lookup_local(&text).cloned() {
                if kind.arity() == arity {
                    self.bump();
                    let args = kind.telescope.iter().map(|(x, _)| TermExpr::Var(x.clone())).collect();
                    return Ok(SubstEntry::Type {
                        params: kind.telescope.clone(),
                        body: TypeExpr::var_app(Name::type_var(&text), args),
                    });
                }
                return Err(ParseError {
                    message: format!(
                        "type variable `{text}` has kind arity {}, the position expects {arity}",
                        kind.arity()
                    ),
                    span,
                });
            }
        }
        Err(self.err(format!(
            "expected a type-level lambda `(\\(x : A). B)` for a dependent type-variable position"
        )))
    }

    /// Consumes the argument atoms a symbol reference requires.
    fn args(&mut self, shapes: &[ParamShape]) -> PResult<Substitution> {
        let mut subst = Substitution::default();
        for shape in shapes {
            match shape {
                ParamShape::Type { kind_arity: 0 } => {
                    let ty = self.type_atom()?;
                    subst.push(SubstEntry::Type { params: Vec::new(), body: ty });
                }
                ParamShape::Type { kind_arity } => {
                    subst.push(self.type_lambda_arg(*kind_arity)?);
                }
                ParamShape::Term => {
                    subst.push(SubstEntry::Term(self.term_atom()?));
                }
            }
        }
        Ok(subst)
    }

    // -- terms and formulas -------------------------------------------------

    fn form(&mut self) -> PResult<TermExpr> {
        if self.at_binder() {
            return self.binder();
        }
        let lhs = self.imp()?;
        if self.eat(&Tok::Iff) {
            let rhs = self.imp()?;
            return Ok(sugar::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> PResult<TermExpr> {
        if self.at_binder() {
            return self.binder();
        }
        let lhs = self.or()?;
        if self.eat(&Tok::FatArrow) {
            let rhs = self.imp()?;
            return Ok(TermExpr::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> PResult<TermExpr> {
        if self.at_binder() {
            return self.binder();
        }
        let mut lhs = self.and()?;
        while self.eat(&Tok::Bar) {
            let rhs = self.and()?;
            lhs = sugar::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> PResult<TermExpr> {
        if self.at_binder() {
            return self.binder();
        }
        let mut lhs = self.neg()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.neg()?;
            lhs = sugar::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn neg(&mut self) -> PResult<TermExpr> {
        if self.eat(&Tok::Tilde) {
            let inner = self.neg()?;
            return Ok(sugar::not(inner));
        }
        if self.at_binder() {
            return self.binder();
        }
        self.eq()
    }

    fn eq(&mut self) -> PResult<TermExpr> {
        let lhs = self.application()?;
        match self.peek() {
            Tok::Eq => {
                self.bump();
                let rhs =
                    if self.at_binder() { self.binder()? } else { self.application()? };
                Ok(TermExpr::eq_plain(lhs, rhs))
            }
            Tok::EqBracket => {
                self.bump();
                let ty = self.ty()?;
                self.expect(Tok::RBracket)?;
                let rhs =
                    if self.at_binder() { self.binder()? } else { self.application()? };
                Ok(TermExpr::eq(ty, lhs, rhs))
            }
            _ => Ok(lhs),
        }
    }

    fn at_binder(&self) -> bool {
        matches!(self.peek(), Tok::Bang | Tok::Question | Tok::Backslash)
    }

    fn binder(&mut self) -> PResult<TermExpr> {
        let which = self.bump().tok;
        self.expect(Tok::LParen)?;
        let (text, span) = self.ident()?;
        self.check_declared_name(&text, span, Namespace::TermVariable)?;
        self.expect(Tok::Colon)?;
        let ty = self.ty()?;
        self.expect(Tok::RParen)?;
        self.expect(Tok::Dot)?;
        self.locals.push((text.clone(), LocalVar::TermVar));
        let body = self.form();
        self.locals.pop();
        let body = body?;
        let name = Name::term_var(&text);
        Ok(match which {
            Tok::Bang => sugar::forall(name, ty, body),
            Tok::Question => sugar::exists(name, ty, body),
            Tok::Backslash => TermExpr::lam(name, ty, body),
            _ => unreachable!("binder token"),
        })
    }

    fn at_atom(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::LParen | Tok::True | Tok::False)
    }

    fn application(&mut self) -> PResult<TermExpr> {
        let mut head = self.term_atom()?;
        while self.at_atom() {
            let arg = self.term_atom()?;
            head = TermExpr::app(head, arg);
        }
        Ok(head)
    }

    fn term_atom(&mut self) -> PResult<TermExpr> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(sugar::tt())
            }
            Tok::False => {
                self.bump();
                Ok(sugar::ff())
            }
            Tok::LParen => {
                self.bump();
                let t = self.form()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(text) => {
                let span = self.span();
                self.bump();
                if let Some(local) = self.lookup_local(&text) {
                    return match local {
                        LocalVar::TermVar => Ok(TermExpr::Var(Name::term_var(&text))),
                        LocalVar::TypeVar { .. } => Err(ParseError {
                            message: format!("type variable `{text}` used in term position"),
                            span,
                        }),
                    };
                }
                match self.syms.get(&text).cloned() {
                    Some(entry) if !entry.is_type && entry.referencable => {
                        let args = self.args(&entry.shapes)?;
                        Ok(TermExpr::cnst_app(entry.name, args))
                    }
                    Some(entry) if entry.is_type => Err(ParseError {
                        message: format!("type symbol `{text}` used in term position"),
                        span,
                    }),
                    Some(_) => Err(ParseError {
                        message: format!("`{text}` is an axiom label, not a term"),
                        span,
                    }),
                    None => Err(ParseError { message: format!("unbound name `{text}`"), span }),
                }
            }
            other => Err(self.err(format!("expected a term, found {}", other.describe()))),
        }
    }
}

enum PType {
    Kind(Kind),
    Type(TypeExpr),
}

enum Item {
    Decl(Declaration),
    Conjecture(Conjecture),
}
