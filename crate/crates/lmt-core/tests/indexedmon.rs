use std::sync::Arc;

use lmt_core::fibration::fixtures::pi1;
use lmt_core::fibration::is_opfibration;
use lmt_core::fincat::fixtures::*;
use lmt_core::fincat::{
    find_cartesian_structure, FinCategory, FinFunctor, StrictMonStructure,
};
use lmt_core::indexedmon::*;
use lmt_core::montheory::diagram::nf;
use lmt_core::montheory::model::check_model;
use lmt_core::montheory::mth::write_mth;
use lmt_core::montheory::prover::ProverConfig;
use lmt_core::montheory::MonTerm;

/// Two isomorphic objects, one morphism between any two.
fn codiscrete2() -> Arc<FinCategory> {
    Arc::new(
        FinCategory::from_spec(
            &["a0", "a1"],
            &[("f", "a0", "a1"), ("g", "a1", "a0")],
            &[("f", "g", "id_a0"), ("g", "f", "id_a1")],
        )
        .unwrap(),
    )
}

fn cfg() -> ProverConfig {
    ProverConfig { budget: 300, ..ProverConfig::default() }
}

#[test]
fn fox_on_cat_01() {
    let s = cat_01_product_structure();
    let c = s.mon.carrier.clone();
    let uc = find_uniform_comonoids(&s).unwrap();
    let (e0, one) = (c.obj("∅").unwrap(), c.obj("1").unwrap());
    assert_eq!(uc.d[e0], c.id(e0));
    assert_eq!(uc.e[e0], c.mor("!").unwrap());
    assert_eq!((uc.d[one], uc.e[one]), (c.id(one), c.id(one)));
    let cs = fox_products(&uc);
    let found = find_cartesian_structure(&c).unwrap();
    assert_eq!(cs.terminal, found.terminal);
    for a in c.objects() {
        for b in c.objects() {
            assert_eq!(cs.product(a, b).object, found.product(a, b).object);
        }
    }
    assert_eq!(fox_converse(&cs).unwrap(), uc);
}

#[test]
fn fox_battery_on_fixtures() {
    for c in [cat_1(), cat_2(), cat_par(), cat_01(), cat_x3(), cat_z2()] {
        let c = Arc::new(c);
        let b = fox_battery(&c, 64);
        assert!(b.holds(), "{:?}", b);
    }
    // Z2 with composition as tensor has no counits
    let z2 = Arc::new(cat_z2());
    let s = lmt_core::fincat::enumerate_symmetric_monoidal(&z2, 8);
    assert!(!s.is_empty());
    assert!(s.iter().all(|s| find_uniform_comonoids(s).is_err() == !is_cartesian_monoidal(s)));
}

#[test]
fn indexed_monoids_on_small_categories() {
    let one = Arc::new(cat_1());
    let im = detect_indexed_monoids(&one, 8).unwrap();
    assert!(check_indexed_monoids(&im));
    let (h, _) = hom_subcategory(&im).unwrap();
    assert_eq!(h.num_morphisms(), 1);
    let s = cat_01_product_structure();
    let uc = find_uniform_comonoids(&s).unwrap();
    let err = find_indexed_monoids(&uc).unwrap_err();
    assert_eq!(err.object.as_deref(), Some("∅"));
    let im2 = detect_indexed_monoids(&codiscrete2(), 64).unwrap();
    assert!(check_indexed_monoids(&im2));
    assert!(homs_closed_under_tensor(&im2));
    assert!(im2.uc.sym.mon.carrier.morphisms().all(|f| is_monoid_hom(&im2, f)));
}

#[test]
fn free_indexed_monoids_on_one_object() {
    let one = Arc::new(cat_1());
    let t = theory_im(&one);
    assert_eq!(t.th.sig.colours.len(), 1);
    assert!(t.th.equations.iter().any(|e| e.name.starts_with("id[")));
    let h = fim_hom(&t, &[0, 0], &[0], 6, &cfg());
    assert!(h.caveat);
    assert!(h.class_of(&nf(&t.th.sig, &MonTerm::Gen(t.m(0)))).is_some());
    let e = fim_hom(&t, &[], &[], 5, &cfg());
    assert_eq!(e.classes.len(), 1);
}

#[test]
fn universal_property_of_fim() {
    let one = Arc::new(cat_1());
    let im = detect_indexed_monoids(&one, 8).unwrap();
    let t = theory_im(&one);
    let g = FinFunctor::identity(one.clone());
    assert!(check_fim_universal(&t, &im, &g, 4, &cfg()).holds());

    let x = Arc::new(cat_2());
    let c2 = codiscrete2();
    let im2 = detect_indexed_monoids(&c2, 64).unwrap();
    let t2 = theory_im(&x);
    let g2 = FinFunctor::from_names(x.clone(), c2.clone(), &[("0", "a0"), ("1", "a1")], &[("u", "f")]).unwrap();
    let r = check_fim_universal(&t2, &im2, &g2, 4, &cfg());
    assert!(r.holds(), "{r:?}");
    // multiplication sent to a morphism of the wrong type
    let mut bad = extend_to_model(&t2, &im2, &g2);
    bad.generators[t2.m(1)] = c2.id(1);
    assert!(!check_model(&t2.th, &bad).holds());
}

#[test]
fn im_opfibration_checks() {
    let id = FinFunctor::identity(codiscrete2());
    let d = ImOpfibData::detect(id.clone(), 64);
    let r = is_im_opfibration(&d);
    assert!(r.holds(), "{r:?}");
    let res = restrict_im_opfibration(&d).unwrap();
    assert_eq!(res.source.num_morphisms(), id.source.num_morphisms());
    assert!(is_opfibration(&res).holds);
    let r = is_im_opfibration(&ImOpfibData::detect(pi1(), 64));
    assert!(!r.holds());
    assert_eq!(r.witness.as_deref(), Some("base has no indexed monoids"));
}

#[test]
fn trivial_monoid_round_trip() {
    let mo = MonoidOnOpfib::trivial(Arc::new(cat_1()));
    assert!(mo.violations().is_empty());
    let pim = monoid_to_im(&mo, 6).unwrap();
    assert!(check_presented_im(&pim, &cfg()).holds());
    let rec = im_to_monoid(&pim, &ProverConfig::default()).unwrap();
    assert!(rec.matches(&mo));
}

#[test]
fn componentwise_monoid_round_trip() {
    let z2 = Arc::new(cat_z2());
    let m = StrictMonStructure::from_commutative_monoid(z2);
    let mo = MonoidOnOpfib::componentwise(Arc::new(cat_2()), &m).unwrap();
    assert_eq!(mo.violations(), Vec::<String>::new());
    let pim = monoid_to_im(&mo, 6).unwrap();
    let rep = check_presented_im(&pim, &cfg());
    assert!(rep.holds(), "{rep:?}");
    let rec = im_to_monoid(&pim, &ProverConfig { budget: 500, ..ProverConfig::default() }).unwrap();
    assert!(rec.matches(&mo));
    let again = monoid_to_im(&rec.into_monoid(&mo), 6).unwrap();
    assert_eq!(write_mth(&again.total), write_mth(&pim.total));
}

#[test]
fn corrupted_monoid_is_rejected() {
    let z2 = Arc::new(cat_z2());
    let m = StrictMonStructure::from_commutative_monoid(z2);
    let mut mo = MonoidOnOpfib::componentwise(Arc::new(cat_2()), &m).unwrap();
    let k = *mo.tensor_mor.keys().find(|(f, g)| f != g).unwrap();
    let v = mo.tensor_mor[&k];
    let other = *mo.tensor_mor.values().find(|&&h| h != v && mo.p.mor(h) == mo.p.mor(v)).unwrap();
    mo.tensor_mor.insert(k, other);
    assert!(!mo.violations().is_empty());
    assert!(monoid_to_im(&mo, 6).is_err());
}
