//! Checker behavior on the worked examples: the vector theory, the
//! two-element vector substitution, and the subtype definitions.

use pdhol::alpha::{alpha_eq_term, alpha_eq_type};
use pdhol::ast::{Context, Kind, SubstEntry, Substitution, TermExpr, TypeExpr};
use pdhol::checker::{check_problem, Checker, EqResult, ObligationRule};
use pdhol::name::Name;
use pdhol::subst::subst_apply_term;
use pdhol::sugar;
use pdhol::surface::parse_problem_or_panic;

fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

fn nat() -> TypeExpr {
    TypeExpr::base(Name::type_sym("nat"), Substitution::default())
}

fn num(k: usize) -> TermExpr {
    let mut t = TermExpr::cnst(Name::term_sym("zero"));
    for _ in 0..k {
        t = TermExpr::app(TermExpr::cnst(Name::term_sym("suc")), t);
    }
    t
}

fn tv(x: &str) -> Name {
    Name::term_var(x)
}

fn vect(elem: TypeExpr, idx: TermExpr) -> TypeExpr {
    TypeExpr::base(Name::type_sym("vect"), Substitution::default().ty(elem).term(idx))
}

fn plus(a: TermExpr, b: TermExpr) -> TermExpr {
    TermExpr::apps(TermExpr::cnst(Name::term_sym("plus")), [a, b])
}

/// The context of the two-element vector example:
/// `n:nat, m:nat, ⊢ n = 2, ⊢ m = 3`.
fn example2_context() -> Context {
    let mut ctx = Context::default();
    ctx.term_var(tv("n"), nat());
    ctx.term_var(tv("m"), nat());
    ctx.assume(TermExpr::eq(nat(), TermExpr::Var(tv("n")), num(2)));
    ctx.assume(TermExpr::eq(nat(), TermExpr::Var(tv("m")), num(3)));
    ctx
}

/// `E = cons nat 1 n (cons nat 0 m (nil nat))`.
fn example2_term() -> TermExpr {
    let cons = |idx: TermExpr, head: TermExpr, tail: TermExpr| {
        TermExpr::apps(
            TermExpr::cnst_app(
                Name::term_sym("cons"),
                Substitution::default().ty(nat()).term(idx),
            ),
            [head, tail],
        )
    };
    let nil = TermExpr::cnst_app(Name::term_sym("nil"), Substitution::default().ty(nat()));
    cons(
        num(1),
        TermExpr::Var(tv("n")),
        cons(num(0), TermExpr::Var(tv("m")), nil),
    )
}

fn example2_subst() -> Substitution {
    Substitution::default()
        .term(num(2))
        .term(TermExpr::app(TermExpr::cnst(Name::term_sym("suc")), num(2)))
        .check()
        .check()
}

fn vectors_checker() -> Checker {
    let p = parse_problem_or_panic(&fixture("vectors.pdhol"), "vectors.pdhol");
    Checker::for_theory(&p.theory).expect("vector theory checks")
}

#[test]
fn vector_theory_with_trivial_conjecture_has_no_obligations() {
    let p = parse_problem_or_panic(&fixture("vectors.pdhol"), "vectors.pdhol");
    let checked = check_problem(&p).expect("checks");
    assert_eq!(
        checked.obligations.len(),
        0,
        "all type arguments are syntactically identical"
    );
    // annotations are filled everywhere after checking
    let c = checked.problem.conjecture.unwrap();
    let TermExpr::Eq { ty, .. } = &c.formula else { panic!() };
    assert!(alpha_eq_type(ty.as_ref().unwrap(), &nat()));
}

#[test]
fn example2_substitution_application() {
    // E[γ] = cons nat 1 2 (cons nat 0 (suc 2) (nil nat))
    let got = subst_apply_term(&example2_term(), &example2_subst(), &example2_context()).unwrap();
    let want = {
        let cons = |idx: TermExpr, head: TermExpr, tail: TermExpr| {
            TermExpr::apps(
                TermExpr::cnst_app(
                    Name::term_sym("cons"),
                    Substitution::default().ty(nat()).term(idx),
                ),
                [head, tail],
            )
        };
        let nil = TermExpr::cnst_app(Name::term_sym("nil"), Substitution::default().ty(nat()));
        cons(
            num(1),
            num(2),
            cons(num(0), TermExpr::app(TermExpr::cnst(Name::term_sym("suc")), num(2)), nil),
        )
    };
    assert!(alpha_eq_term(&got, &want));
}

#[test]
fn example2_substitution_checking_yields_two_obligations() {
    let mut ck = vectors_checker();
    let ambient = Context::default();
    ck.check_subst(&ambient, &example2_subst(), &example2_context())
        .expect("substitution checks");
    let obs = ck.take_obligations();
    assert_eq!(obs.len(), 2);
    // 2 =[nat] 2 and suc 2 =[nat] 3
    assert!(alpha_eq_term(&obs[0].formula, &TermExpr::eq(nat(), num(2), num(2))));
    assert!(alpha_eq_term(
        &obs[1].formula,
        &TermExpr::eq(
            nat(),
            TermExpr::app(TermExpr::cnst(Name::term_sym("suc")), num(2)),
            num(3)
        )
    ));
    assert!(obs.iter().all(|o| o.provenance.rule == ObligationRule::SubstAssumption));
    // deterministic ids
    assert!(obs[0].id.text.ends_with("_tco1"));
    assert!(obs[1].id.text.ends_with("_tco2"));
}

#[test]
fn empty_and_singleton_substitutions() {
    let mut ck = vectors_checker();
    let ambient = Context::default();
    // empty substitution for the empty context
    ck.check_subst(&ambient, &Substitution::default(), &Context::default()).unwrap();
    // (nat) for (α : Type)
    let mut target = Context::default();
    target.type_var(Name::type_var("A"), Kind::plain());
    ck.check_subst(&ambient, &Substitution::default().ty(nat()), &target).unwrap();
    assert_eq!(ck.take_obligations().len(), 0);
}

#[test]
fn infer_lambda_identity() {
    let mut ck = vectors_checker();
    let t = TermExpr::lam(tv("x"), nat(), TermExpr::Var(tv("x")));
    let (_, ty) = ck.infer_type(&Context::default(), &t).unwrap();
    assert!(alpha_eq_type(&ty, &TypeExpr::pi(tv("x"), nat(), nat())));
    assert_eq!(ck.take_obligations().len(), 0);
}

#[test]
fn infer_example2_vector_has_type_vect_nat_2() {
    let mut ck = vectors_checker();
    let (_, ty) = ck.infer_type(&example2_context(), &example2_term()).unwrap();
    assert!(
        alpha_eq_type(&ty, &vect(nat(), num(2))),
        "expected vect nat 2, got {}",
        pdhol::surface::print_type(&ty)
    );
    assert_eq!(ck.take_obligations().len(), 0, "all indices match syntactically");
}

#[test]
fn append_against_expected_length_yields_one_equation() {
    // app α n m v w : vect α (plus n m), checked against vect α k
    let mut ck = vectors_checker();
    let alpha = Name::type_var("A");
    let mut ctx = Context::default();
    ctx.type_var(alpha.clone(), Kind::plain());
    ctx.term_var(tv("n"), nat());
    ctx.term_var(tv("m"), nat());
    ctx.term_var(tv("k"), nat());
    ctx.term_var(tv("v"), vect(TypeExpr::var(alpha.clone()), TermExpr::Var(tv("n"))));
    ctx.term_var(tv("w"), vect(TypeExpr::var(alpha.clone()), TermExpr::Var(tv("m"))));
    let app = TermExpr::apps(
        TermExpr::cnst_app(
            Name::term_sym("app"),
            Substitution::default()
                .ty(TypeExpr::var(alpha.clone()))
                .term(TermExpr::Var(tv("n")))
                .term(TermExpr::Var(tv("m"))),
        ),
        [TermExpr::Var(tv("v")), TermExpr::Var(tv("w"))],
    );
    let want = vect(TypeExpr::var(alpha), TermExpr::Var(tv("k")));
    ck.check_term(&ctx, &app, &want).unwrap();
    let obs = ck.take_obligations();
    assert_eq!(obs.len(), 1);
    let goal = TermExpr::eq(
        nat(),
        plus(TermExpr::Var(tv("n")), TermExpr::Var(tv("m"))),
        TermExpr::Var(tv("k")),
    );
    assert!(
        alpha_eq_term(&obs[0].formula, &goal),
        "got {}",
        pdhol::surface::print_term(&obs[0].formula)
    );
    assert_eq!(obs[0].provenance.rule, ObligationRule::TermArgEquality);
}

#[test]
fn type_equal_examples() {
    let ck = vectors_checker();
    let ctx = Context::default();
    // vect nat 2 ≡ vect nat 2
    assert_eq!(
        ck.type_equal(&ctx, &vect(nat(), num(2)), &vect(nat(), num(2))),
        EqResult::Equal
    );
    // vect nat (plus 0 2) ≡ vect nat 2 needs the equation plus 0 2 = 2
    match ck.type_equal(&ctx, &vect(nat(), plus(num(0), num(2))), &vect(nat(), num(2))) {
        EqResult::Conditional(obs) => {
            assert_eq!(obs.len(), 1);
            let goal = TermExpr::eq(nat(), plus(num(0), num(2)), num(2));
            assert!(alpha_eq_term(&obs[0].formula, &goal));
        }
        r => panic!("expected a conditional result, got {r:?}"),
    }
    // o ≡ Πx:nat. o
    assert!(matches!(
        ck.type_equal(&ctx, &TypeExpr::Bool, &TypeExpr::pi(tv("x"), nat(), TypeExpr::Bool)),
        EqResult::Unequal(_)
    ));
}

#[test]
fn beta_equal_indices_pass_the_fast_path() {
    let ck = vectors_checker();
    let ctx = Context::default();
    // vect nat ((λx:nat. x) 2) ≡ vect nat 2 by normalization
    let redex = TermExpr::app(TermExpr::lam(tv("x"), nat(), TermExpr::Var(tv("x"))), num(2));
    assert_eq!(ck.type_equal(&ctx, &vect(nat(), redex), &vect(nat(), num(2))), EqResult::Equal);
}

#[test]
fn subtype_definition_obligations_and_errors() {
    // the hom fixture: predicate checks, one nonemptiness obligation
    let p = parse_problem_or_panic(&fixture("hom.pdhol"), "hom.pdhol");
    let checked = check_problem(&p).expect("hom fixture checks");
    let nonempty: Vec<_> = checked
        .obligations
        .iter()
        .filter(|o| o.provenance.rule == ObligationRule::SubtypeNonempty)
        .collect();
    assert_eq!(nonempty.len(), 1);
    // the goal is ∃m : A -> B. ishom A B g h m (modulo naming)
    match pdhol::sugar::view(&nonempty[0].formula) {
        pdhol::sugar::SugarView::Exists(_, ty, _) => {
            assert!(ty.as_arrow().is_some(), "carrier is the function space");
        }
        v => panic!("nonemptiness goal is existential, got {v:?}"),
    }

    // smallest instance: subtype over o with predicate λx:o. x
    let src = "subtype inhabited := o | \\(x : o). x.";
    let p = parse_problem_or_panic(src, "tiny.pdhol");
    let checked = check_problem(&p).unwrap();
    assert_eq!(checked.obligations.len(), 1);
    let want = sugar::exists(tv("v"), TypeExpr::Bool, TermExpr::Var(tv("v")));
    assert!(
        alpha_eq_term(&checked.obligations[0].formula, &want),
        "got {}",
        pdhol::surface::print_term(&checked.obligations[0].formula)
    );

    // predicate of the wrong type is rejected
    let src = "type a. const f : a -> a. subtype bad := a | f.";
    let p = parse_problem_or_panic(src, "bad.pdhol");
    let err = check_problem(&p).unwrap_err();
    assert!(err.message.contains("unary Boolean"), "{}", err.message);
}

#[test]
fn checker_error_paths() {
    let ck_err = |src: &str| {
        let p = parse_problem_or_panic(src, "err.pdhol");
        check_problem(&p).unwrap_err()
    };
    // non-function applied
    let e = ck_err("type a. const c : a. conjecture goal : c c = c.");
    assert!(e.message.contains("cannot apply"), "{}", e.message);
    // Boolean expected
    let e = ck_err("type a. const c : a. conjecture goal : c => c.");
    assert!(e.message.contains("type mismatch"), "{}", e.message);
    // shadowing rejected
    let e = ck_err("type a. conjecture goal (x : a) : !(x : a). x = x.");
    assert!(e.message.contains("shadows"), "{}", e.message);
    // equality of structurally different types
    let e = ck_err("type a. type b. const c : a. const d : b. conjecture goal : c = d.");
    assert!(e.message.contains("type mismatch"), "{}", e.message);
}

#[test]
fn unbound_symbols_in_programmatic_input_are_errors() {
    let mut ck = vectors_checker();
    let err = ck
        .infer_type(&Context::default(), &TermExpr::cnst(Name::term_sym("nosuch")))
        .unwrap_err();
    assert!(err.message.contains("unbound"));
    let err = ck.check_type(&Context::default(), &TypeExpr::var(Name::type_var("Z"))).unwrap_err();
    assert!(err.message.contains("unbound"));
}

#[test]
fn dependent_implication_assumes_the_left_side() {
    // Φ ⇒ Ψ where checking Ψ needs the assumption Φ is accepted, and the
    // assumption lands in obligation contexts produced under it
    let mut ck = vectors_checker();
    let mut ctx = Context::default();
    ctx.term_var(tv("n"), nat());
    ctx.term_var(tv("v"), vect(nat(), TermExpr::Var(tv("n"))));
    // n = 2 => v =[vect nat 2] v : checking the inner equality against the
    // annotation needs n = 2, which is not structurally true
    let f = TermExpr::implies(
        TermExpr::eq(nat(), TermExpr::Var(tv("n")), num(2)),
        TermExpr::eq(
            vect(nat(), num(2)),
            TermExpr::Var(tv("v")),
            TermExpr::Var(tv("v")),
        ),
    );
    ck.check_term(&ctx, &f, &TypeExpr::Bool).unwrap();
    let obs = ck.take_obligations();
    assert_eq!(obs.len(), 2, "one equation per side of the annotated equality");
    // the obligation context records the assumption n = 2
    assert!(obs[0]
        .context
        .entries
        .iter()
        .any(|e| matches!(e, pdhol::ast::ContextEntry::Assumption { .. })));
}

#[test]
fn hlist_fixture_checks() {
    let p = parse_problem_or_panic(&fixture("hlists.pdhol"), "hlists.pdhol");
    let checked = check_problem(&p).expect("dependent type variables check");
    assert_eq!(checked.obligations.len(), 0);
}

#[test]
fn rbt_fixtures_check_clean() {
    for name in ["rbt.pdhol", "rbt-rev-invol-base-BTLeaf.pdhol", "rbt-rev-invol-base-RTLeaf.pdhol"]
    {
        let p = parse_problem_or_panic(&fixture(name), name);
        let checked = check_problem(&p).expect("checks");
        assert_eq!(checked.obligations.len(), 0, "{name}: dependent indices line up");
    }
    // bad_tree postulates a red node over arbitrary colors: two equations
    let p = parse_problem_or_panic(&fixture("bad_tree.pdhol"), "bad_tree.pdhol");
    let checked = check_problem(&p).unwrap();
    assert_eq!(checked.obligations.len(), 2);
    for ob in &checked.obligations {
        assert_eq!(ob.provenance.rule, ObligationRule::TermArgEquality);
    }
}

#[test]
fn list_app_nil_base_has_plus_obligations() {
    let p = parse_problem_or_panic(&fixture("list-app-nil-base.pdhol"), "list-app-nil-base.pdhol");
    let checked = check_problem(&p).unwrap();
    // one from the axiom (plus zero n = n), one from the conjecture
    // (plus zero zero = zero)
    assert_eq!(checked.obligations.len(), 2);
    let goal = TermExpr::eq(nat(), plus(num(0), num(0)), num(0));
    assert!(alpha_eq_term(&checked.obligations[1].formula, &goal));
}
