//! Acceptance suite: one PASS/FAIL line per criterion, then a rerun of
//! everything comparing the JSON summaries byte for byte.
//!
//! Runs with `harness = false`, so the lines are printed even on success.

mod oracles;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use lmt_core::corpus::{gen_categories, gen_functors, gen_opindexed, rng, CorpusSpec, Shape};
use lmt_core::deflation::*;
use lmt_core::displayed::*;
use lmt_core::fibration::fixtures::{p_h, pi1};
use lmt_core::fibration::*;
use lmt_core::fincat::fixtures::*;
use lmt_core::fincat::{find_cartesian_structure, product_category, product_projections, FinCategory, FinFunctor, StrictMonStructure};
use lmt_core::format::write_fun;
use lmt_core::indexedmon::*;
use lmt_core::layered::lmt::parse_lmt;
use lmt_core::layered::prover::check_trace1;
use lmt_core::layered::term::{enumerate_internal, parse_lterm};
use lmt_core::layered::{prove_eq1, LTerm, Prover1Config};
use lmt_core::montheory::mth::write_mth;
use lmt_core::montheory::prover::{check_trace, prove_equal, ProverConfig, Verdict};
use lmt_core::montheory::theories::builtin_theory;
use lmt_core::montheory::{equal_structural, parse_term, MonSignature};
use lmt_core::profunctor::{adjunction_unit, verify_adjunction};
use lmt_core::twocell::{Config2, Verdict2};
use oracles::structural::Closure;
use rand::Rng;
use serde_json::{json, Value};

const SEED: u64 = 2024;

struct Outcome {
    pass: bool,
    detail: String,
    json: Value,
}

fn outcome(pass: bool, detail: impl Into<String>, json: Value) -> Outcome {
    Outcome { pass, detail: detail.into(), json }
}

fn c1_grothendieck() -> Outcome {
    let ixs = gen_opindexed(SEED, 20, 3, 8, 3);
    let mut bad = Vec::new();
    let mut out = Vec::new();
    for (k, ix) in ixs.iter().enumerate() {
        let g = grothendieck(ix);
        let x = &*g.p.target;
        let lib = is_opfibration(&g.p).holds;
        let oracle = oracles::fibration::opfibration(&g.p);
        let lifts_ok = g.cleavage.lifts.iter().all(|(&(a, f), &l)| {
            let (xo, la) = g.obj_pairs[a];
            let fa = ix.reindex[f].ob(la);
            g.mor_pairs[l] == (f, ix.fibres[x.cod(f)].id(fa)) && xo == x.dom(f) && oracles::fibration::opcartesian(&g.p, l)
        });
        let split = g.cleavage.split_violation(&g.p).is_none();
        let rt = roundtrip_equivalence_check(&g.p, &g.cleavage);
        if !(lib && oracle && lifts_ok && split && rt) {
            bad.push(k);
        }
        out.push(json!({"total": write_fun(&g.p), "opfibration": lib, "round_trip": rt}));
    }
    let pass = ixs.len() >= 20 && bad.is_empty();
    outcome(pass, format!("{} indexed categories, failures {bad:?}", ixs.len()), Value::from(out))
}

fn c2_adjunction() -> Outcome {
    let spec = CorpusSpec { max_objects: 3, max_morphisms: 6, count: 20, shape: Shape::Functor };
    let fs = gen_functors(SEED, &spec);
    let mut bad = Vec::new();
    for (k, f) in fs.iter().enumerate() {
        let ok = verify_adjunction(f);
        let (_, lr) = adjunction_unit(f);
        let y = &*f.source;
        let sizes = y.objects().all(|a| {
            y.objects().all(|b| {
                let n = lr.prof.at(a, b).len();
                n == oracles::fibration::yoneda_coend_size(f, a, b) && n == f.target.hom(f.ob(a), f.ob(b)).len()
            })
        });
        if !(ok && sizes) {
            bad.push(k);
        }
    }
    let json = json!({"functors": fs.iter().map(write_fun).collect::<Vec<_>>(), "failures": bad});
    outcome(fs.len() >= 20 && bad.is_empty(), format!("{} functors, failures {bad:?}", fs.len()), json)
}

fn c3_conduche() -> Outcome {
    let spec = CorpusSpec { max_objects: 3, max_morphisms: 6, count: 40, shape: Shape::Functor };
    let mut fs = gen_functors(SEED, &spec);
    let conduche = gen_functors(SEED, &CorpusSpec { count: 10, shape: Shape::Conduche, ..spec });
    fs.extend(conduche);
    fs.push(pi1());
    fs.push(p_h());
    let mut bad = Vec::new();
    let mut rows = Vec::new();
    let (mut n_fl, mut n_pre) = (0, 0);
    for (k, p) in fs.iter().enumerate() {
        let fl = is_factorisation_lifting(p);
        let lax = all_laxators_iso(p);
        let refine = factors_through_refine(p).is_some();
        let pre = is_preopfibration(p).holds;
        let op = is_opfibration(p).holds;
        let ok = fl == lax
            && refine == pre
            && (!pre || op == fl)
            && fl == oracles::fibration::factorisation_lifting(p)
            && op == oracles::fibration::opfibration(p);
        if !ok {
            bad.push(k);
        }
        n_fl += fl as usize;
        n_pre += pre as usize;
        rows.push(json!([fl, lax, refine, pre, op]));
    }
    let h = p_h();
    let w = factorisation_lifting_failure(&h);
    let witness = w.as_ref().map(|w| (w.morphism.as_str(), w.f.as_str(), w.g.as_str())) == Some(("H", "f", "g"));
    let ph_fails = !is_factorisation_lifting(&h) && !all_laxators_iso(&h) && witness;
    let detail = format!(
        "{} functors ({n_fl} factorisation lifting, {n_pre} preopfibrations), p_H witness {:?}, failures {bad:?}",
        fs.len(),
        w.as_ref().map(|w| (&w.morphism, &w.f, &w.g))
    );
    outcome(bad.is_empty() && ph_fails && n_fl > 1 && n_pre > 1, detail, json!({"rows": rows, "p_h": w}))
}

fn c4_structural() -> Outcome {
    let mut s = MonSignature::default();
    s.add_colour("a");
    s.add_colour("b");
    s.add_generator("f", vec![0], vec![1, 1]);
    s.add_generator("e", vec![1], vec![]);
    s.add_generator("u", vec![], vec![0]);
    let cl = Closure::new(&s, 9, 3);
    let small: Vec<_> = cl.terms.iter().filter(|(t, _, _)| t.size() <= 6).collect();
    let (mut pairs, mut bad) = (0usize, 0usize);
    for (i, (t, td, tc)) in small.iter().enumerate() {
        for (u, ud, uc) in &small[i..] {
            if td != ud || tc != uc {
                continue;
            }
            pairs += 1;
            if equal_structural(&s, t, u).ok() != cl.same(t, u) {
                bad += 1;
            }
        }
    }
    let detail = format!("{} terms, {pairs} parallel pairs, {bad} disagreements", small.len());
    outcome(bad == 0 && pairs > 0, detail, json!({"terms": small.len(), "pairs": pairs, "bad": bad}))
}

const CATALAN: [&str; 5] = [
    "m * id[• •] ; m * id[•] ; m",
    "id[•] * m * id[•] ; m * id[•] ; m",
    "m * m ; m",
    "id[•] * m * id[•] ; id[•] * m ; m",
    "id[• •] * m ; id[•] * m ; m",
];

fn c5_catalan() -> Outcome {
    let th = builtin_theory("monoids", &[]).expect("pack");
    let cfg = ProverConfig { budget: 10_000, ..ProverConfig::default() };
    let mut traces = Vec::new();
    let (mut proved, mut slowest) = (0, Duration::ZERO);
    let mut total = 0;
    for i in 0..CATALAN.len() {
        for j in i + 1..CATALAN.len() {
            total += 1;
            let (a, b) = (parse_term(&th.sig, CATALAN[i]).unwrap(), parse_term(&th.sig, CATALAN[j]).unwrap());
            let t0 = Instant::now();
            let v = prove_equal(&th, &a, &b, &cfg).unwrap();
            slowest = slowest.max(t0.elapsed());
            if let Verdict::Proved(t) = &v {
                if check_trace(&th, t).is_ok() {
                    proved += 1;
                }
            }
            traces.push(serde_json::to_value(&v).unwrap());
        }
    }
    let pass = proved == total && slowest < Duration::from_secs(10);
    let detail = format!("{proved}/{total} pairs proved with replayed traces, slowest {:.2} s", slowest.as_secs_f64());
    outcome(pass, detail, Value::from(traces))
}

fn c6_fox() -> Outcome {
    let mut cats: Vec<FinCategory> = gen_categories(SEED, 3, 6, 30);
    cats.extend([cat_1(), cat_2(), cat_par(), cat_01(), cat_x3(), cat_z2()]);
    let mut bad = Vec::new();
    let mut rows = Vec::new();
    let mut cartesian = 0;
    for (k, c) in cats.into_iter().enumerate() {
        let c = Arc::new(c);
        let b = fox_battery(&c, 64);
        let lib = find_cartesian_structure(&c).is_ok();
        let oracle = oracles::fibration::has_finite_products(&c);
        cartesian += lib as usize;
        if !(b.holds() && lib == oracle) {
            bad.push(k);
        }
        rows.push(serde_json::to_value(&b).unwrap());
    }
    let detail = format!("{} categories ({cartesian} cartesian), failures {bad:?}", rows.len());
    outcome(bad.is_empty() && cartesian > 0, detail, Value::from(rows))
}

fn c7_deflation() -> Outcome {
    let ixs = gen_opindexed(SEED, 10, 3, 6, 2);
    let mut bad = Vec::new();
    let mut pairs = 0;
    let mut rows = Vec::new();
    for (k, ix) in ixs.iter().enumerate() {
        let g = grothendieck(ix);
        let Ok(d) = deflation_from_split_opfibration(&g.p, 4, 12) else {
            bad.push(k);
            continue;
        };
        let ul = unique_lifting_all(&d);
        pairs += ul.pairs;
        let rt = restrict_star_round_trip(&d);
        if !(ul.failures.is_empty() && rt) {
            bad.push(k);
        }
        rows.push(json!({"pairs": ul.pairs, "failures": ul.failures, "round_trip": rt}));
    }
    let detail = format!("{} split opfibrations, {pairs} opliftable pairs, failures {bad:?}", ixs.len());
    outcome(ixs.len() >= 10 && bad.is_empty(), detail, Value::from(rows))
}

fn random_word<R: Rng>(r: &mut R, x: &FinCategory, len: usize) -> ZigzagWord {
    let mut at = r.gen_range(0..x.num_objects());
    let src = at;
    let mut letters = Vec::new();
    for _ in 0..len {
        let options: Vec<Letter> = x
            .morphisms()
            .flat_map(|f| [(Dir::Fwd, f), (Dir::Bwd, f)])
            .filter(|&l| letter_ends(x, l).0 == at)
            .collect();
        let l = options[r.gen_range(0..options.len())];
        at = letter_ends(x, l).1;
        letters.push(l);
    }
    ZigzagWord::new(x, src, letters).unwrap()
}

fn c8_zigzag() -> Outcome {
    let zg = Zg::new(Arc::new(cat_x3()));
    let x = zg.base.clone();
    let cfg = Config2 { budget: 5000, ..Config2::default() };
    let goals = [
        ("(eta[f] ^ id[f]) ; (id[f] ^ eps[f])", "id[f]"),
        ("(id[f~] ^ eta[f]) ; (eps[f] ^ id[f~])", "id[f~]"),
        ("eta[id_x]", "id[@x]"),
        ("eps[id_y]", "id[@y]"),
        ("eta[h]", "eta[f] ; (id[f] ^ eta[g] ^ id[f~])"),
        ("eps[h]", "(id[g~] ^ eps[f] ^ id[g]) ; eps[g]"),
    ];
    let mut proved = 0;
    let mut traces = Vec::new();
    for (l, r) in goals {
        let (a, b) = (parse_zg_expr(&zg, l).unwrap(), parse_zg_expr(&zg, r).unwrap());
        let v = prove_twocells_equal(&zg, &a, &b, &cfg);
        if let Ok(Verdict2::Proved(t)) = &v {
            if check_zg_trace(&zg, t).is_ok() {
                proved += 1;
            }
            traces.push(serde_json::to_value(t).unwrap());
        }
    }
    let mut r = rng(SEED);
    let mut fixed = 0;
    for _ in 0..1000 {
        let n = r.gen_range(0..9);
        let w = random_word(&mut r, &x, n);
        let v = zg_normalize(&x, &w).unwrap();
        if v.is_normal(&x) && zg_normalize(&x, &v).unwrap() == v && v.letters == oracles::zigzag::reduce(&x, &w) {
            fixed += 1;
        }
    }
    let detail = format!("{proved}/{} equations proved, {fixed}/1000 words at a fixed point", goals.len());
    outcome(proved == goals.len() && fixed == 1000, detail, json!({"traces": traces, "fixed": fixed}))
}

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

fn c9_sliding() -> Outcome {
    let th = parse_lmt(SLIDE).unwrap();
    let w = th.sig.layer("w").unwrap();
    let terms = enumerate_internal(&th, w, 4);
    let u = &th.universe;
    let cfg = Prover1Config { budget: 20_000, ..Prover1Config::default() };
    let (mut proved, mut total) = (0, 0);
    let mut steps = Vec::new();
    for (x, ty) in &terms {
        let (a, b) = (u.list_name(&th.sig, &ty.diagram.dom), u.list_name(&th.sig, &ty.diagram.cod));
        let l = LTerm::comp(x.clone(), parse_lterm(&th.sig, &format!("ext(f | {b})")).unwrap());
        let r = LTerm::comp(parse_lterm(&th.sig, &format!("ext(f | {a})")).unwrap(), LTerm::boxed(0, x.clone()));
        for (p, q) in [(&l, &r), (&r, &l)] {
            total += 1;
            if let Ok(lmt_core::layered::LVerdict::Proved(t)) = prove_eq1(&th, p, q, &cfg) {
                if check_trace1(&th, &t).is_ok() {
                    proved += 1;
                }
                steps.push(t.steps.len());
            }
        }
    }
    let detail = format!("{} internal terms, {proved}/{total} sliding goals proved", terms.len());
    outcome(proved == total && terms.len() > 4, detail, json!({"steps": steps}))
}

fn codiscrete2() -> Arc<FinCategory> {
    Arc::new(
        FinCategory::from_spec(&["a0", "a1"], &[("f", "a0", "a1"), ("g", "a1", "a0")], &[("f", "g", "id_a0"), ("g", "f", "id_a1")])
            .unwrap(),
    )
}

fn c10_im() -> Outcome {
    let cfg = ProverConfig { budget: 500, ..ProverConfig::default() };
    let mut notes = Vec::new();
    let mut ok = true;
    let z2 = StrictMonStructure::from_commutative_monoid(Arc::new(cat_z2()));
    let instances = [
        ("trivial on CAT_1", MonoidOnOpfib::trivial(Arc::new(cat_1()))),
        ("Z2 componentwise over 2", MonoidOnOpfib::componentwise(Arc::new(cat_2()), &z2).unwrap()),
    ];
    let mut json = Vec::new();
    for (name, mo) in &instances {
        let rec = monoid_to_im(mo, 6).and_then(|pim| {
            let r = im_to_monoid(&pim, &cfg)?;
            Ok((r.matches(mo), write_mth(&pim.total)))
        });
        let good = matches!(rec, Ok((true, _)));
        ok &= good;
        notes.push(format!("{name}: {good}"));
        json.push(json!({"instance": name, "theory": rec.map(|r| r.1).unwrap_or_default()}));
    }
    let c = codiscrete2();
    let prod = Arc::new(product_category(&c, &c));
    let proj = product_projections(&c, &c, &prod).0;
    let mut agree = 0;
    let fibs = [FinFunctor::identity(Arc::new(cat_1())), FinFunctor::identity(c.clone()), proj];
    for p in &fibs {
        let e = ImOpfibData::detect(p.clone(), 64);
        if monoidal_round_trip(&e, 3, 12) == Ok(true) {
            agree += 1;
        }
    }
    ok &= agree == fibs.len();
    notes.push(format!("monoidal deflations {agree}/{}", fibs.len()));
    outcome(ok, notes.join(", "), Value::from(json))
}

type Criterion = (u32, &'static str, u64, fn() -> Outcome);

const CRITERIA: [Criterion; 10] = [
    (1, "Grothendieck round trip", 30, c1_grothendieck),
    (2, "profunctor adjunction", 30, c2_adjunction),
    (3, "Conduche battery", 60, c3_conduche),
    (4, "structural normal form oracle", 120, c4_structural),
    (5, "monoid prover on Catalan trees", 100, c5_catalan),
    (6, "Fox battery", 30, c6_fox),
    (7, "deflation lemma", 60, c7_deflation),
    (8, "zigzag calculus", 20, c8_zigzag),
    (9, "layered sliding", 60, c9_sliding),
    (10, "im round trips", 120, c10_im),
];

fn main() -> ExitCode {
    let mut all = true;
    let mut first = Vec::new();
    for &(n, name, limit, run) in &CRITERIA {
        let t0 = Instant::now();
        let o = run();
        let dt = t0.elapsed();
        let pass = o.pass && dt < Duration::from_secs(limit);
        all &= pass;
        println!(
            "criterion {n:>2} {name}: {} ({}; {:.2} s, limit {limit} s)",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            dt.as_secs_f64()
        );
        first.push(serde_json::to_string(&o.json).unwrap());
    }
    let t0 = Instant::now();
    let same: Vec<u32> = CRITERIA
        .iter()
        .zip(&first)
        .filter(|((_, _, _, run), s)| serde_json::to_string(&run().json).unwrap() != **s)
        .map(|(c, _)| c.0)
        .collect();
    let pass = same.is_empty();
    all &= pass;
    println!(
        "criterion 11 determinism: {} (reran 10 criteria, differing {same:?}; {:.2} s)",
        if pass { "PASS" } else { "FAIL" },
        t0.elapsed().as_secs_f64()
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
