use std::sync::Arc;

use lmt_core::corpus::{gen_opindexed, rng};
use lmt_core::deflation::*;
use lmt_core::fibration::fixtures::{idx_1, pi1};
use lmt_core::fibration::{grothendieck, to_opindexed};
use lmt_core::fincat::fixtures::*;
use lmt_core::fincat::{product_category, product_projections, FinCategory, FinFunctor};
use lmt_core::indexedmon::ImOpfibData;
use lmt_core::twocell::{Config2, Expr, Verdict2};
use rand::Rng;

fn x3() -> Zg {
    Zg::new(Arc::new(cat_x3()))
}

fn word(zg: &Zg, s: &str) -> ZigzagWord {
    parse_word(&zg.base, s).unwrap()
}

fn expr(zg: &Zg, s: &str) -> ZgExpr {
    parse_zg_expr(zg, s).unwrap()
}

#[test]
fn normal_forms_of_words() {
    let zg = x3();
    let x = &*zg.base;
    let nf = |s: &str| zg_normalize(x, &word(&zg, s)).unwrap().display(x);
    assert_eq!(nf("f g"), "h");
    assert_eq!(nf("g~ f~"), "h~");
    assert_eq!(nf("id_x"), "@x");
    assert_eq!(nf("f f~ id_x f"), "f f~ f");
    assert!(parse_word(x, "f f").is_err());
}

fn random_word<R: Rng>(r: &mut R, x: &FinCategory, len: usize) -> ZigzagWord {
    let mut at = r.gen_range(0..x.num_objects());
    let src = at;
    let mut letters = Vec::new();
    for _ in 0..len {
        let mut options = Vec::new();
        for f in x.morphisms() {
            for d in [Dir::Fwd, Dir::Bwd] {
                if letter_ends(x, (d, f)).0 == at {
                    options.push((d, f));
                }
            }
        }
        let l = options[r.gen_range(0..options.len())];
        at = letter_ends(x, l).1;
        letters.push(l);
    }
    ZigzagWord::new(x, src, letters).unwrap()
}

#[test]
fn normalisation_is_a_fixed_point_and_bracketing_free() {
    let x = cat_x3();
    let mut r = rng(7);
    for _ in 0..1000 {
        let n = r.gen_range(0..9);
        let w = random_word(&mut r, &x, n);
        let v = zg_normalize(&x, &w).unwrap();
        assert!(v.is_normal(&x));
        assert_eq!(zg_normalize(&x, &v).unwrap(), v);
        let k = r.gen_range(0..=n);
        let (a, b) = (
            ZigzagWord::new(&x, w.src, w.letters[..k].to_vec()).unwrap(),
            ZigzagWord::new(&x, if k == 0 { w.src } else { letter_ends(&x, w.letters[k - 1]).1 }, w.letters[k..].to_vec()).unwrap(),
        );
        let joined = zg_normalize(&x, &a).unwrap().then(&zg_normalize(&x, &b).unwrap()).unwrap();
        assert_eq!(zg_normalize(&x, &joined).unwrap(), v);
    }
}

#[test]
fn boundaries_of_two_cells() {
    let zg = x3();
    let x = &*zg.base;
    let b = |s: &str| {
        let (d, c) = twocell_boundary(&zg, &expr(&zg, s)).unwrap();
        (d.display(x), c.display(x))
    };
    assert_eq!(b("eta[f]"), ("@x".into(), "f f~".into()));
    assert_eq!(b("eps[f]"), ("f~ f".into(), "@y".into()));
    assert_eq!(b("id[f] ^ eps[f]"), ("f f~ f".into(), "f".into()));
    assert!(twocell_boundary(&zg, &expr(&zg, "eta[f] ; eta[f]")).is_err());
}

#[test]
fn zigzag_and_coherence_equations() {
    let zg = x3();
    let cfg = Config2 { budget: 5000, ..Config2::default() };
    for (l, r) in [
        ("(eta[f] ^ id[f]) ; (id[f] ^ eps[f])", "id[f]"),
        ("(id[f~] ^ eta[f]) ; (eps[f] ^ id[f~])", "id[f~]"),
        ("eta[id_x]", "id[@x]"),
        ("eps[id_y]", "id[@y]"),
        ("eta[h]", "eta[f] ; (id[f] ^ eta[g] ^ id[f~])"),
        ("eps[h]", "(id[g~] ^ eps[f] ^ id[g]) ; eps[g]"),
    ] {
        let (a, b) = (expr(&zg, l), expr(&zg, r));
        let v = prove_twocells_equal(&zg, &a, &b, &cfg).unwrap();
        let Verdict2::Proved(t) = v else { panic!("{l} = {r}: {v:?}") };
        check_zg_trace(&zg, &t).unwrap();
    }
    // a composite that needs two steps
    let a = expr(&zg, "(eta[h] ^ id[h]) ; (id[h] ^ eps[h])");
    assert!(prove_twocells_equal(&zg, &a, &expr(&zg, "id[h]"), &cfg).unwrap().is_proved());
    assert!(prove_twocells_equal(&zg, &expr(&zg, "eta[f]"), &expr(&zg, "eta[h]"), &cfg).is_err());
}

fn pi1_deflation() -> DeflationData {
    deflation_from_split_opfibration(&pi1(), 4, 12).unwrap()
}

#[test]
fn pi1_deflation_checks() {
    let d = pi1_deflation();
    let rep = is_deflation(&d);
    assert!(rep.holds(), "{rep:?}");
    assert!(rep.minimal);
    let (x, y) = (d.x(), d.y());
    let a = y.obj("(0,0)").unwrap();
    let u = x.mor("u").unwrap();
    let (up, down) = lifting_of(&d, a, u).unwrap();
    assert_eq!(d.display_cell(&up), "u | (0,0) -(id_1,id_0)-> (1,0)");
    assert_eq!(down.word.display(x), "u~");
    assert_eq!(down.raw.mors, vec![y.id(y.obj("(1,0)").unwrap())]);
    let (i1, i2) = lifting_of(&d, a, x.id(0)).unwrap();
    assert_eq!((i1.clone(), i2), (d.identity1(a), d.identity1(a)));
    let ul = unique_lifting_all(&d);
    assert!(ul.failures.is_empty(), "{ul:?}");
    assert!(restrict_star_round_trip(&d));
    let circ = restrict_circ(&d).unwrap();
    assert_eq!(circ.source.num_morphisms(), d.p.source.num_morphisms());
    let ix = extract_opindexed(&d).unwrap();
    assert!(ix.validate().is_empty());
    assert!(ix.reindex.iter().all(|f| f.source.num_objects() == 2 && f.target.num_objects() == 2));
}

#[test]
fn corrupted_phi_is_caught() {
    let mut d = pi1_deflation();
    let y = d.y();
    let a = y.obj("(0,0)").unwrap();
    let f = d.identity1(a);
    let v = d.vertical(y.mor("(id_0,u)").unwrap());
    d.overrides.insert((f.clone(), d.zg.id(f.word.clone())), v);
    let r = check_local_retrofunctor(&d);
    assert!(!r.identities);
    assert!(r.witness.is_some());

    let mut d = pi1_deflation();
    let u = d.x().mor("u").unwrap();
    let (up, down) = lifting_of(&d, a, u).unwrap();
    let back = d.compose1(&down, &up).unwrap();
    let wrong = d.vertical(d.y().mor("(id_1,u)").unwrap());
    d.overrides.insert((back, d.zg.eps(u)), wrong);
    let r = is_deflation(&d);
    assert!(!r.counit);
    assert!(!r.holds());
    assert!(extract_opindexed(&d).is_err());
}

#[test]
fn trivial_and_grothendieck_deflations() {
    let one = Arc::new(cat_1());
    let d = deflation_from_split_opfibration(&FinFunctor::identity(one.clone()), 4, 12).unwrap();
    assert!(is_deflation(&d).holds());
    assert_eq!(d.one_cells().len(), 1);
    assert!(restrict_star_round_trip(&d));

    let ix = idx_1();
    let g = grothendieck(&ix);
    let d = deflation_from_split_opfibration(&g.p, 4, 12).unwrap();
    assert!(is_deflation(&d).holds());
    assert!(unique_lifting_all(&d).failures.is_empty());
    assert!(restrict_star_round_trip(&d));
    let back = extract_opindexed(&d).unwrap();
    assert_eq!(back, to_opindexed(&g.p, &g.cleavage).unwrap());
    assert_eq!(back.fibres[1].num_objects(), ix.fibres[1].num_objects());
    assert_eq!(back.fibres[1].num_morphisms(), ix.fibres[1].num_morphisms());
}

#[test]
fn corpus_deflations() {
    let ixs = gen_opindexed(11, 10, 3, 6, 2);
    assert_eq!(ixs.len(), 10);
    for ix in &ixs {
        let g = grothendieck(ix);
        let d = deflation_from_split_opfibration(&g.p, 4, 12).unwrap();
        let ul = unique_lifting_all(&d);
        assert!(ul.failures.is_empty(), "{ul:?}");
        assert!(restrict_star_round_trip(&d));
        assert_eq!(extract_opindexed(&d).unwrap(), to_opindexed(&g.p, &g.cleavage).unwrap());
    }
}

/// Two isomorphic objects.
fn codiscrete2() -> Arc<FinCategory> {
    Arc::new(
        FinCategory::from_spec(&["a0", "a1"], &[("f", "a0", "a1"), ("g", "a1", "a0")], &[("f", "g", "id_a0"), ("g", "f", "id_a1")])
            .unwrap(),
    )
}

#[test]
fn monoidal_zg_on_codiscrete_base() {
    let c = codiscrete2();
    let e = ImOpfibData::detect(FinFunctor::identity(c.clone()), 64);
    let im = e.base.clone().unwrap();
    let zgm = zg_monoidal(&im.uc.sym);
    let x = &*zgm.zg.base;
    let f = parse_word(x, "f").unwrap();
    let gb = parse_word(x, "g~").unwrap();
    let m = &im.uc.sym.mon;
    let ff = zgm.tensor_words(&f, &f);
    let fm = x.mor("f").unwrap();
    assert_eq!(ff, zg_normalize(x, &ZigzagWord::new(x, m.ob(0, 0), vec![(Dir::Fwd, m.mor(fm, fm))]).unwrap()).unwrap());
    let mixed = zgm.tensor_letters(&f, &gb);
    assert_eq!(mixed.letters.len(), 2);
    assert_eq!(mixed.letters[0].0, Dir::Fwd);
    assert!(zgm.orientation_confluent(3).unwrap() > 0);
    let cfg = Config2::default();
    let eta = zgm.zg.eta(x.mor("f").unwrap());
    let id0 = zgm.zg.id(ZigzagWord::empty(0));
    let lhs = Expr::tensor(eta.clone(), id0);
    let rhs = zgm.cell_product(&eta, &zgm.zg.id(ZigzagWord::empty(0))).unwrap();
    assert!(prove_mon_twocells_equal(&zgm, &lhs, &rhs, &cfg).unwrap().is_proved());
}

#[test]
fn monoidal_deflations_round_trip() {
    let c = codiscrete2();
    let one = Arc::new(cat_1());
    let prod = Arc::new(product_category(&c, &c));
    let proj = product_projections(&c, &c, &prod).0;
    for p in [FinFunctor::identity(one), FinFunctor::identity(c.clone()), proj] {
        let e = ImOpfibData::detect(p, 64);
        let md = im_to_monoidal_defl(&e, 3, 12).unwrap();
        let rep = is_monoidal_deflation(&md);
        assert!(rep.holds(), "{rep:?}");
        assert!(monoidal_round_trip(&e, 3, 12).unwrap());
    }
    // no indexed monoids on the base of π1
    assert!(im_to_monoidal_defl(&ImOpfibData::detect(pi1(), 64), 3, 12).is_err());
}
