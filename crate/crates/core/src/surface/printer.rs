//! Deterministic pretty-printer, inverse to the parser up to alpha.

use std::fmt::Write;

use crate::ast::{
    Conjecture, Context, ContextEntry, Declaration, Kind, Problem, SubstEntry, Substitution,
    TermExpr, TypeExpr,
};
use crate::sugar::{view, SugarView};

// term precedence levels, loosest first
const FORM: u8 = 0;
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const NEG: u8 = 4;
const EQ: u8 = 5;
const APP: u8 = 6;
const ATOM: u8 = 7;

pub fn print_problem(p: &Problem) -> String {
    let mut out = String::new();
    for decl in &p.theory.decls {
        print_decl(&mut out, decl);
    }
    if let Some(c) = &p.conjecture {
        print_conjecture(&mut out, c);
    }
    out
}

fn print_decl(out: &mut String, decl: &Declaration) {
    match decl {
        Declaration::TypeSym { name, params, .. } => {
            let _ = writeln!(out, "type {}{}.", name, params_str(params));
        }
        Declaration::TermSym { name, params, ty, .. } => {
            let _ = writeln!(out, "const {}{} : {}.", name, params_str(params), print_type(ty));
        }
        Declaration::Axiom { label, params, formula, .. } => {
            let _ = writeln!(
                out,
                "axiom {}{} : {}.",
                label,
                params_str(params),
                term_prec(formula, FORM)
            );
        }
        Declaration::SubtypeDef { name, params, carrier, predicate, .. } => {
            let _ = writeln!(
                out,
                "subtype {}{} := {} | {}.",
                name,
                params_str(params),
                print_type(carrier),
                term_prec(predicate, FORM)
            );
        }
    }
}

fn print_conjecture(out: &mut String, c: &Conjecture) {
    let _ = writeln!(
        out,
        "conjecture {}{} : {}.",
        c.label,
        params_str(&c.params),
        term_prec(&c.formula, FORM)
    );
}

fn params_str(params: &Context) -> String {
    let mut out = String::new();
    for entry in &params.entries {
        match entry {
            ContextEntry::TypeVar { name, kind } => {
                let _ = write!(out, " ({} : {})", name, kind_str(kind));
            }
            ContextEntry::TermVar { name, ty } => {
                let _ = write!(out, " ({} : {})", name, print_type(ty));
            }
            ContextEntry::Assumption { .. } => {
                unreachable!("parameter lists never contain assumptions")
            }
        }
    }
    out
}

fn kind_str(kind: &Kind) -> String {
    let mut out = String::new();
    for (x, ty) in &kind.telescope {
        let _ = write!(out, "({} : {}) -> ", x, print_type(ty));
    }
    out.push_str("Type");
    out
}

pub fn print_type(ty: &TypeExpr) -> String {
    type_prec(ty, 0)
}

// type precedence: 0 arrow, 1 application, 2 atom
fn type_prec(ty: &TypeExpr, min: u8) -> String {
    let (text, level) = match ty {
        TypeExpr::Bool => ("o".to_string(), 2),
        TypeExpr::Base { symbol, args } => {
            if args.is_empty() {
                (symbol.text.clone(), 2)
            } else {
                (format!("{}{}", symbol, args_str(args)), 1)
            }
        }
        TypeExpr::Var { variable, term_args } => {
            if term_args.is_empty() {
                (variable.text.clone(), 2)
            } else {
                let mut s = variable.text.clone();
                for arg in term_args {
                    s.push(' ');
                    s.push_str(&term_prec(arg, ATOM));
                }
                (s, 1)
            }
        }
        TypeExpr::Pi { binder, domain, codomain } => {
            if codomain.free_vars().contains(binder) {
                (
                    format!(
                        "({} : {}) -> {}",
                        binder,
                        type_prec(domain, 0),
                        type_prec(codomain, 0)
                    ),
                    0,
                )
            } else {
                (format!("{} -> {}", type_prec(domain, 1), type_prec(codomain, 0)), 0)
            }
        }
    };
    if level < min {
        format!("({text})")
    } else {
        text
    }
}

fn args_str(args: &Substitution) -> String {
    let mut out = String::new();
    for entry in &args.entries {
        out.push(' ');
        match entry {
            SubstEntry::Type { params, body } if params.is_empty() => {
                out.push_str(&type_prec(body, 2));
            }
            SubstEntry::Type { params, body } => {
                out.push('(');
                for (x, ty) in params {
                    let _ = write!(out, "\\({} : {}). ", x, type_prec(ty, 0));
                }
                out.push_str(&type_prec(body, 0));
                out.push(')');
            }
            SubstEntry::Term(t) => out.push_str(&term_prec(t, ATOM)),
            SubstEntry::Check => unreachable!("check marks have no surface syntax"),
        }
    }
    out
}

pub fn print_term(t: &TermExpr) -> String {
    term_prec(t, FORM)
}

fn term_prec(t: &TermExpr, min: u8) -> String {
    let (text, level) = match view(t) {
        SugarView::True => ("$true".to_string(), ATOM),
        SugarView::False => ("$false".to_string(), ATOM),
        SugarView::Forall(x, ty, body) => (
            format!("!({} : {}). {}", x, type_prec(ty, 0), term_prec(body, FORM)),
            FORM,
        ),
        SugarView::Exists(x, ty, body) => (
            format!("?({} : {}). {}", x, type_prec(ty, 0), term_prec(body, FORM)),
            FORM,
        ),
        SugarView::Not(a) => (format!("~ {}", term_prec(a, NEG)), NEG),
        SugarView::And(a, b) => {
            (format!("{} & {}", term_prec(a, AND), term_prec(b, NEG)), AND)
        }
        SugarView::Or(a, b) => (format!("{} | {}", term_prec(a, OR), term_prec(b, AND)), OR),
        SugarView::Plain => match t {
            TermExpr::Var(x) => (x.text.clone(), ATOM),
            TermExpr::Const { symbol, args } => {
                if args.is_empty() {
                    (symbol.text.clone(), ATOM)
                } else {
                    (format!("{}{}", symbol, args_str(args)), APP)
                }
            }
            TermExpr::Lambda { binder, domain, body } => (
                format!(
                    "\\({} : {}). {}",
                    binder,
                    type_prec(domain, 0),
                    term_prec(body, FORM)
                ),
                FORM,
            ),
            TermExpr::App { fun, arg } => {
                (format!("{} {}", term_prec(fun, APP), term_prec(arg, ATOM)), APP)
            }
            TermExpr::Implies { lhs, rhs } => {
                (format!("{} => {}", term_prec(lhs, OR), term_prec(rhs, IMP)), IMP)
            }
            TermExpr::Eq { ty, lhs, rhs } => {
                let op = match ty {
                    Some(ty) => format!("=[{}]", type_prec(ty, 0)),
                    None => "=".to_string(),
                };
                (
                    format!("{} {} {}", term_prec(lhs, APP), op, term_prec(rhs, APP)),
                    EQ,
                )
            }
        },
    };
    if level < min {
        format!("({text})")
    } else {
        text
    }
}
