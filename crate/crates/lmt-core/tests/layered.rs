use lmt_core::layered::lmt::{parse_lmt, write_lmt};
use lmt_core::layered::morphism::LayeredMorphism;
use lmt_core::layered::prover::check_trace1;
use lmt_core::layered::term::{enumerate_internal, parse_lterm, parse_ltype};
use lmt_core::layered::two::{check_trace2, parse_twoterm};
use lmt_core::layered::*;
use lmt_core::twocell::Config2;

const SLIDE: &str = "
MODE opfibrational
LAYERS w t
LAYER w {
  COLOURS a b
  GENERATORS
    x : a -> b
    y : a -> b
}
LAYER t {
  COLOURS c
}
GENERATORS
  f : w -> t
";

fn th(src: &str) -> LayeredTheory {
    parse_lmt(src).unwrap()
}

fn term(th: &LayeredTheory, s: &str) -> LTerm {
    parse_lterm(&th.sig, s).unwrap()
}

fn prove(th: &LayeredTheory, a: &str, b: &str) -> LVerdict {
    prove_eq1(th, &term(th, a), &term(th, b), &Prover1Config::default()).unwrap()
}

#[test]
fn ext_gen_and_box_sorts() {
    let th = th(SLIDE);
    let t = typecheck_term(&th, &term(&th, "ext(f | a:w)")).unwrap();
    assert!(!t.internal);
    assert_eq!(th.universe.list_name(&th.sig, &t.diagram.dom), "a:w");
    assert_eq!(th.universe.list_name(&th.sig, &t.diagram.cod), "f(a):t");
    let b = typecheck_term(&th, &term(&th, "box(f | x)")).unwrap();
    assert!(b.internal);
    assert_eq!(th.universe.list_name(&th.sig, &b.diagram.cod), "f(b):t");
    assert!(typecheck_term(&th, &term(&th, "x ; x")).is_err());
    assert!(typecheck_term(&th, &term(&th, "box(f | x * y)")).is_err());
    assert!(typecheck_term(&th, &term(&th, "x ; id(b:w)")).unwrap().internal);
    assert!(!typecheck_term(&th, &term(&th, "(x * y) ; id(b:w, b:w)")).unwrap().internal);
    // fibrational constructors are filtered out
    let e = typecheck_term(&th, &term(&th, "extop(f | a:w)")).unwrap_err();
    assert_eq!(e.constructor, "ext-gen-op");
}

#[test]
fn sliding_law() {
    let th = th(SLIDE);
    let v = prove(&th, "x ; ext(f | b:w)", "ext(f | a:w) ; box(f | x)");
    let LVerdict::Proved(t) = v else { panic!("{v:?}") };
    assert!(!t.steps.is_empty());
    check_trace1(&th, &t).unwrap();
}

#[test]
fn comonoid_unit_reduces() {
    let th = th(SLIDE);
    let v = prove(&th, "diag(a:w) ; (id(a:w) * dcounit(a:w))", "id(a:w)");
    let LVerdict::Proved(t) = v else { panic!("{v:?}") };
    check_trace1(&th, &t).unwrap();
}

#[test]
fn distinct_generators_stay_apart() {
    let th = th(SLIDE);
    match prove(&th, "x", "y") {
        LVerdict::Unknown { distinct_nf, .. } => assert!(distinct_nf),
        v => panic!("{v:?}"),
    }
}

#[test]
fn user_equations_in_context() {
    let src = format!("{SLIDE}E1\n  xy: x = y\n");
    let th = th(&src);
    let v = prove(&th, "box(f | x) ; id(f(b):t)", "box(f | y)");
    let LVerdict::Proved(t) = v else { panic!("{v:?}") };
    check_trace1(&th, &t).unwrap();
}

#[test]
fn sliding_over_enumerated_terms() {
    let th = th(SLIDE);
    let w = th.sig.layer("w").unwrap();
    let terms = enumerate_internal(&th, w, 4);
    assert!(terms.len() > 4);
    let u = &th.universe;
    for (x, ty) in terms.iter() {
        let (a, b) = (u.list_name(&th.sig, &ty.diagram.dom), u.list_name(&th.sig, &ty.diagram.cod));
        let l = LTerm::comp(x.clone(), parse_lterm(&th.sig, &format!("ext(f | {b})")).unwrap());
        let r = LTerm::comp(parse_lterm(&th.sig, &format!("ext(f | {a})")).unwrap(), LTerm::boxed(0, x.clone()));
        for (p, q) in [(&l, &r), (&r, &l)] {
            let v = prove_eq1(&th, p, q, &Prover1Config::default()).unwrap();
            assert!(v.is_proved(), "{} : {v:?}", x.display(&th.sig));
        }
    }
}

const DEFL: &str = "
MODE deflational
LAYERS w t
LAYER w {
  COLOURS a
  GENERATORS
    x : a -> a
}
LAYER t { COLOURS c }
GENERATORS
  f : w -> t
CELLS
  al : x => x
  be : x => x
  ga : x => x
  de : x => x
";

fn two(th: &LayeredTheory, s: &str) -> TwoTerm {
    parse_twoterm(th, s).unwrap()
}

#[test]
fn structural_two_cells() {
    let th = th(DEFL);
    let eta = typecheck_2term(&th, &two(&th, "eta[ext(f | a:w)]")).unwrap();
    assert!(eta.dom.slices.is_empty());
    assert_eq!(eta.cod.slices.len(), 2);
    let zig = two(&th, "(eta[ext(f | a:w)] ^ id[ext(f | a:w)]) ; (id[ext(f | a:w)] ^ eps[ext(f | a:w)])");
    let v = prove_eq2(&th, &zig, &two(&th, "id[ext(f | a:w)]"), &Config2::default()).unwrap();
    let lmt_core::twocell::Verdict2::Proved(t) = &v else { panic!("{v:?}") };
    check_trace2(&th, &zig, &two(&th, "id[ext(f | a:w)]"), t).unwrap();
    // mismatched middle type
    assert!(typecheck_2term(&th, &two(&th, "id[ext(f | a:w)] ^ eta[ext(f | a:w)]")).is_err());
    let op = th.clone();
    let mut op = op;
    op.mode = SortingProcedure::Opfibrational;
    assert!(typecheck_2term(&op, &two(&th, "eta[ext(f | a:w)]")).is_err());
}

#[test]
fn interchange_and_unrelated_cells() {
    let th = th(DEFL);
    let cfg = Config2::default();
    let l = two(&th, "(al * be) ; (ga * de)");
    let r = two(&th, "(al ; ga) * (be ; de)");
    assert!(prove_eq2(&th, &l, &r, &cfg).unwrap().is_proved());
    assert!(!prove_eq2(&th, &two(&th, "al"), &two(&th, "be"), &cfg).unwrap().is_proved());
}

#[test]
fn lmt_round_trip() {
    let src = format!("{DEFL}E2\n  ab: al ; be = ga\n");
    let a = th(&src);
    let text = write_lmt(&a);
    let b = parse_lmt(&text).unwrap();
    assert_eq!(write_lmt(&b), text);
    assert_eq!(b.e2.len(), 1);
    let e = parse_lmt("MODE sideways\n").unwrap_err();
    assert_eq!(e.line, 1);
}

#[test]
fn identity_morphism_and_canonical_forms() {
    let th = th(SLIDE);
    let m = LayeredMorphism::identity(&th.sig, 0);
    m.check(&th.sig, &th.sig).unwrap();
    let t = term(&th, "x ; ext(f | b:w)");
    assert_eq!(m.term(&t), t);
    // collapse both layers onto t's copy of w
    let mut tgt = th.sig.clone();
    tgt.boundaries.push(BoundaryGen { name: "g".into(), dom: 0, cod: 0 });
    let c = LayeredMorphism { layers: vec![0, 0], boundaries: vec![1], colours: vec![vec![0, 1], vec![0]], gens: vec![vec![0, 1], vec![]], cells: vec![] };
    c.check(&th.sig, &tgt).unwrap();
    for s in ["f(a b):t", "a:w, f(ε):t", "f(a) f(b):t, b a:w"] {
        let ty = parse_ltype(&th.sig, s).unwrap();
        let direct = canonical_type(&tgt, &c.ltype(&ty)).unwrap();
        assert_eq!(direct, c.ctype(&canonical_type(&th.sig, &ty).unwrap()), "{s}");
    }
    assert_eq!(c.term(&term(&th, "ext(f | a:w)")), LTerm::ExtGen(1, LType::Col(0, 0)));
}
