//! Parser/printer integration: golden shapes for the vector theory and the
//! round-trip property on the fixture corpus.

use pdhol::alpha::{alpha_eq_problem, alpha_eq_type};
use pdhol::ast::{ContextEntry, Declaration, Kind, Substitution, TermExpr, TypeExpr};
use pdhol::name::Name;
use pdhol::surface::{parse_problem, parse_problem_or_panic, print_problem};

fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn vector_declarations_parse_to_expected_shapes() {
    let p = parse_problem_or_panic(&fixture("vectors.pdhol"), "vectors.pdhol");
    // type vect (A : Type) (n : nat). ~> TypeSym(vect, [A:type, n:nat])
    let vect = p.theory.lookup(&Name::type_sym("vect")).expect("vect declared");
    let Declaration::TypeSym { params, .. } = vect else { panic!("vect is a type symbol") };
    assert_eq!(params.len(), 2);
    assert!(matches!(
        &params.entries[0],
        ContextEntry::TypeVar { name, kind } if name.text == "A" && kind.is_plain()
    ));
    assert!(matches!(
        &params.entries[1],
        ContextEntry::TermVar { name, .. } if name.text == "n"
    ));

    // const nil (A : Type) : vect A zero. ~> TermSym(nil, [A:type], vect A zero)
    let nil = p.theory.lookup(&Name::term_sym("nil")).expect("nil declared");
    let Declaration::TermSym { params, ty, .. } = nil else { panic!("nil is a term symbol") };
    assert_eq!(params.len(), 1);
    let want = TypeExpr::base(
        Name::type_sym("vect"),
        Substitution::default()
            .ty(TypeExpr::var(Name::type_var("A")))
            .term(TermExpr::cnst(Name::term_sym("zero"))),
    );
    assert!(alpha_eq_type(ty, &want), "nil : vect A zero, got {ty:?}");
}

#[test]
fn empty_input_is_an_empty_theory() {
    let p = parse_problem_or_panic("", "empty.pdhol");
    assert!(p.theory.decls.is_empty());
    assert!(p.conjecture.is_none());
}

#[test]
fn fixtures_round_trip() {
    for name in [
        "vectors.pdhol",
        "list-app-nil-base.pdhol",
        "rbt.pdhol",
        "rbt-rev-invol-base-BTLeaf.pdhol",
        "rbt-rev-invol-base-RTLeaf.pdhol",
        "bad_tree.pdhol",
        "hom.pdhol",
        "hlists.pdhol",
    ] {
        let p = parse_problem_or_panic(&fixture(name), name);
        let printed = print_problem(&p);
        let reparsed = match parse_problem(&printed, name) {
            Ok(r) => r,
            Err(ds) => panic!(
                "{name}: printed output failed to reparse:\n{}\n--- printed ---\n{printed}",
                ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n")
            ),
        };
        assert!(
            alpha_eq_problem(&p, &reparsed),
            "{name}: round trip is not alpha-equal\n--- printed ---\n{printed}"
        );
    }
}

#[test]
fn dependent_kinds_parse() {
    let p = parse_problem_or_panic(&fixture("hlists.pdhol"), "hlists.pdhol");
    let hlist = p.theory.lookup(&Name::type_sym("hlist")).unwrap();
    let Declaration::TypeSym { params, .. } = hlist else { panic!() };
    let ContextEntry::TypeVar { name, kind } = &params.entries[1] else {
        panic!("second hlist parameter is the type family")
    };
    assert_eq!(name.text, "L");
    assert_eq!(kind.arity(), 1);
    assert!(matches!(kind, Kind { telescope } if telescope[0].1 != TypeExpr::Bool));
}

#[test]
fn reserved_suffixes_are_rejected() {
    for bad in [
        "type vect_per.",
        "const my_abs : o.",
        "axiom a_rep : $true.",
        "type t (x_tco1 : o).",
    ] {
        let err = parse_problem(bad, "bad.pdhol").unwrap_err();
        assert!(
            err[0].message.contains("reserved"),
            "{bad}: expected reserved-suffix rejection, got {}",
            err[0].message
        );
    }
}

#[test]
fn duplicate_declarations_are_rejected() {
    let err = parse_problem("type nat. type nat.", "dup.pdhol").unwrap_err();
    assert!(err[0].message.contains("duplicate"));
}

#[test]
fn diagnostics_point_into_the_source() {
    let source = "type nat.\nconst zero : natt.\n";
    let err = parse_problem(source, "span.pdhol").unwrap_err();
    let d = &err[0];
    assert_eq!(d.span.line, 2);
    let lines: Vec<&str> = source.lines().collect();
    let line = lines[(d.span.line - 1) as usize];
    assert!((d.span.column as usize) <= line.len());
    let col = (d.span.column - 1) as usize;
    assert_eq!(&line[col..col + d.span.length as usize], "natt");
}

#[test]
fn sugar_desugars_to_primitives() {
    let p = parse_problem_or_panic(
        "conjecture goal : !(x : o). x & x | ~ x => (?(y : o). y <=> x) & $true.",
        "sugar.pdhol",
    );
    let c = p.conjecture.unwrap();
    // the AST only contains the primitive constructors
    fn only_primitives(t: &TermExpr) -> bool {
        match t {
            TermExpr::Const { .. } | TermExpr::Var(_) => true,
            TermExpr::Lambda { body, .. } => only_primitives(body),
            TermExpr::App { fun, arg } => only_primitives(fun) && only_primitives(arg),
            TermExpr::Implies { lhs, rhs } => only_primitives(lhs) && only_primitives(rhs),
            TermExpr::Eq { lhs, rhs, .. } => only_primitives(lhs) && only_primitives(rhs),
        }
    }
    assert!(only_primitives(&c.formula));
}

#[test]
fn equality_annotation_forms() {
    let p = parse_problem_or_panic(
        "type nat. const zero : nat. conjecture goal : zero =[nat] zero.",
        "ann.pdhol",
    );
    let TermExpr::Eq { ty, .. } = &p.conjecture.unwrap().formula else { panic!() };
    assert!(ty.is_some());

    let p = parse_problem_or_panic(
        "type nat. const zero : nat. conjecture goal : zero = zero.",
        "ann.pdhol",
    );
    let TermExpr::Eq { ty, .. } = &p.conjecture.unwrap().formula else { panic!() };
    assert!(ty.is_none());
}
