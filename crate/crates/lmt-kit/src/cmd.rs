//! One handler per command group.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use lmt_core::corpus::{gen_categories, gen_functors, CorpusSpec, Shape};
use lmt_core::deflation::{
    check_zg_trace, deflation_from_split_opfibration, extract_opindexed, is_deflation, parse_word, parse_zg_expr,
    prove_twocells_equal, restrict_circ, restrict_star, restrict_star_round_trip, unique_lifting_all, zg_normalize,
    DeflationData, Zg,
};
use lmt_core::displayed::{
    all_laxators_iso, benabou_roundtrip, collage, displayed_from_functor, factorisation_lifting_failure,
    factors_through_refine, is_factorisation_lifting, split_factorisation_violation,
};
use lmt_core::fibration::{
    choose_cleavage, grothendieck, is_fibration, is_opfibration, is_preopfibration, roundtrip_equivalence_check,
    to_opindexed, FuncOver, StrictOpIndexedCat,
};
use lmt_core::fincat::{
    enumerate_symmetric_monoidal, validate_monoidal, FinCategory, StrictMonStructure,
};
use lmt_core::format::{parse_fc, parse_fun, write_fc, write_fun};
use lmt_core::indexedmon::{
    check_presented_im, fim_hom, fox_battery, im_to_monoid, is_cartesian_monoidal, is_im_opfibration, monoid_to_im, theory_im, ImOpfibData,
    MonoidOnOpfib,
};
use lmt_core::layered::lmt::parse_lmt;
use lmt_core::layered::prover::check_trace1;
use lmt_core::layered::term::parse_lterm;
use lmt_core::layered::two::{check_trace2, parse_twoterm};
use lmt_core::layered::{prove_eq1, prove_eq2, structural_equations, typecheck_term, LVerdict, LayeredTheory, Prover1Config};
use lmt_core::montheory::diagram::{nf, Diagram};
use lmt_core::montheory::model::{check_model, ModelData};
use lmt_core::montheory::mth::{parse_eq, parse_mth};
use lmt_core::montheory::prover::{check_trace, prove_equal, ProverConfig, Trace, Verdict};
use lmt_core::montheory::{enumerate_hom, parse_term, MonTheory};
use lmt_core::profunctor::{adjunction_report, compose_prof, refine_embed};
use lmt_core::twocell::{Config2, Verdict2};

use crate::report::{input, Failure, Report};
use crate::{dot, CorpusArgs, CorpusKind, DeflCmd, DispCmd, FibCmd, ImonCmd, LmtCmd, MthCmd, ProfCmd, RunConfig, ZgCmd};

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_fc(path: &Path) -> Result<FinCategory, Failure> {
    parse_fc(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_fun(path: &Path) -> Result<FuncOver, Failure> {
    parse_fun(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_mth(path: &Path) -> Result<MonTheory, Failure> {
    parse_mth(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_lmt(path: &Path) -> Result<LayeredTheory, Failure> {
    parse_lmt(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn witness(w: &Option<(String, String)>) -> Option<String> {
    w.as_ref().map(|(a, f)| format!("({a}, {f})"))
}

pub fn fib(c: &FibCmd, _cfg: &RunConfig) -> Result<Report, Failure> {
    match c {
        FibCmd::CheckOp { file } | FibCmd::CheckFib { file } => {
            let p = load_fun(file)?;
            let op = matches!(c, FibCmd::CheckOp { .. });
            let lc = if op { is_opfibration(&p) } else { is_fibration(&p) };
            let mut r = Report::new(if op { "fib check-op" } else { "fib check-fib" });
            r.check(if op { "opfibration" } else { "fibration" }, lc.holds);
            if let Some(w) = witness(&lc.witness) {
                r.field("witness", w);
            }
            r.dot(dot::functor(&p));
            Ok(r)
        }
        FibCmd::Grothendieck { file } => {
            let p = load_fun(file)?;
            let ix = indexed_of(&p)?;
            let g = grothendieck(&ix);
            let mut r = Report::new("fib grothendieck");
            r.check("opfibration", is_opfibration(&g.p).holds);
            r.field("objects", g.p.source.num_objects()).field("morphisms", g.p.source.num_morphisms());
            r.block(write_fun(&g.p));
            r.dot(dot::functor(&g.p));
            Ok(r)
        }
        FibCmd::Roundtrip { file } => {
            let p = load_fun(file)?;
            let mut r = Report::new("fib roundtrip");
            match choose_cleavage(&p, true) {
                Ok(cl) => {
                    r.check("split", cl.split);
                    r.check("roundtrip", roundtrip_equivalence_check(&p, &cl));
                }
                Err(e) => {
                    r.check("split", false).field("witness", e.to_string());
                }
            }
            Ok(r)
        }
    }
}

fn indexed_of(p: &FuncOver) -> Result<StrictOpIndexedCat, Failure> {
    let cl = choose_cleavage(p, true).map_err(|e| input(format!("not a split opfibration: {e}")))?;
    to_opindexed(p, &cl).map_err(|e| input(e.to_string()))
}

pub fn prof(c: &ProfCmd, _cfg: &RunConfig) -> Result<Report, Failure> {
    match c {
        ProfCmd::Compose { first, second } => {
            let (f, g) = (load_fun(first)?, load_fun(second)?);
            if *f.target != *g.source {
                return Err(input("the functors are not composable"));
            }
            let (p, q) = (refine_embed(&f), refine_embed(&g));
            let co = compose_prof(&p, &q);
            let mut r = Report::new("prof compose");
            r.field("classes", co.members.len());
            let (a, cc) = (&*f.source, &*g.target);
            let mut table = Vec::new();
            for x in a.objects() {
                for z in cc.objects() {
                    let cls: Vec<String> = co
                        .prof
                        .at(x, z)
                        .iter()
                        .map(|&e| {
                            let (u, v) = co.rep(e);
                            format!("[{}|{}]", p.name(u), q.name(v))
                        })
                        .collect();
                    table.push(format!("{} {}: {}", a.obj_name(x), cc.obj_name(z), cls.join(" ")));
                }
            }
            r.detail("table", &table);
            r.block(table.join("\n"));
            Ok(r)
        }
        ProfCmd::Adjunction { file } => {
            let f = load_fun(file)?;
            let rep = adjunction_report(&f);
            let mut r = Report::new("prof adjunction");
            r.field("unit natural", rep.unit_natural)
                .field("counit natural", rep.counit_natural)
                .field("triangle refine", rep.triangle_refine)
                .field("triangle coarsen", rep.triangle_coarsen)
                .field("counit section", rep.counit_section)
                .check("adjunction", rep.holds());
            Ok(r)
        }
    }
}

pub fn disp(c: &DispCmd, _cfg: &RunConfig) -> Result<Report, Failure> {
    match c {
        DispCmd::Collage { file } => {
            let p = load_fun(file)?;
            let col = collage(&displayed_from_functor(&p));
            let mut r = Report::new("disp collage");
            r.check("isomorphic to the source", benabou_roundtrip(&p));
            r.block(write_fun(&col.p));
            r.dot(dot::functor(&col.p));
            Ok(r)
        }
        DispCmd::Conduche { file, split } => {
            let p = load_fun(file)?;
            let fl = is_factorisation_lifting(&p);
            let lax = all_laxators_iso(&p);
            let mut r = Report::new("disp conduche");
            r.check("factorisation lifting", fl).field("laxators iso", lax);
            if let Some(w) = factorisation_lifting_failure(&p) {
                r.field("witness", format!("({}, {}, {}) with {} components", w.morphism, w.f, w.g, w.components));
            }
            if *split {
                let v = split_factorisation_violation(&p);
                r.check("split", v.is_none());
                if let Some(v) = v {
                    r.field("split witness", v);
                }
            }
            Ok(r)
        }
        DispCmd::FactorRefine { file } => {
            let p = load_fun(file)?;
            let mut r = Report::new("disp factor-refine");
            r.check("factors through refine", factors_through_refine(&p).is_some())
                .field("preopfibration", is_preopfibration(&p).holds);
            Ok(r)
        }
    }
}

fn show(th: &MonTheory, d: &Diagram) -> String {
    d.to_term(&th.sig).display(&th.sig).to_string()
}

fn mth_trace_text(th: &MonTheory, t: &Trace) -> String {
    let mut out = format!("    {}\n", show(th, &t.start));
    for s in &t.steps {
        let after = Diagram { dom: t.start.dom.clone(), cod: t.start.cod.clone(), slices: s.after.clone() };
        let dir = if s.forward { "" } else { " (reversed)" };
        out.push_str(&format!("  = {}{dir} at slice {}\n    {}\n", s.rule, s.at, show(th, &after)));
    }
    out
}

pub fn mth(c: &MthCmd, cfg: &RunConfig) -> Result<Report, Failure> {
    match c {
        MthCmd::Prove { theory, goals } => {
            let th = load_mth(theory)?;
            let gs = parse_eq(&th.sig, &read(goals)?).map_err(|e| input(format!("{}: {e}", goals.display())))?;
            let pc = ProverConfig { budget: cfg.budget_or(10_000)?, ..ProverConfig::default() };
            let mut r = Report::new("mth prove");
            r.field("budget", pc.budget);
            let mut details = Vec::new();
            for (line, l, rhs) in gs {
                let key = format!("line {line}");
                let v = prove_equal(&th, &l, &rhs, &pc).map_err(|e| input(format!("{}:{line}: {e}", goals.display())))?;
                match &v {
                    Verdict::Proved(t) => {
                        let replays = check_trace(&th, t).is_ok();
                        r.field(&key, format!("Proved in {} steps, trace replays: {replays}", t.steps.len()));
                        r.block(format!("line {line}:\n{}", mth_trace_text(&th, t)));
                        if !replays {
                            r.fail();
                        }
                    }
                    Verdict::Refuted => {
                        r.field(&key, "Refuted: distinct normal forms").fail();
                    }
                    Verdict::Unknown { explored, exhausted } => {
                        r.field(&key, format!("Unknown after {explored} states"));
                        if *exhausted {
                            r.fail();
                        } else {
                            r.exhausted();
                        }
                    }
                }
                details.push(serde_json::json!({ "line": line, "verdict": v }));
            }
            r.detail("goals", details);
            Ok(r)
        }
        MthCmd::Nf { theory, term } => {
            let th = load_mth(theory)?;
            let t = parse_term(&th.sig, term).map_err(input)?;
            let d = nf(&th.sig, &t);
            let mut r = Report::new("mth nf");
            r.field("nf", show(&th, &d)).detail("diagram", &d);
            Ok(r)
        }
        MthCmd::Enumerate { theory, dom, cod } => {
            let th = load_mth(theory)?;
            let word = |s: &str| -> Result<Vec<usize>, Failure> {
                s.split_whitespace().map(|c| th.sig.colour(c).ok_or_else(|| input(format!("unknown colour `{c}`")))).collect()
            };
            let (d, cd) = (word(dom)?, word(cod)?);
            let pc = ProverConfig { budget: cfg.budget_or(2_000)?, ..ProverConfig::default() };
            let bound = cfg.bound_or(5);
            let (classes, caveat) = enumerate_hom(&th, &d, &cd, bound, &pc);
            let mut r = Report::new("mth enumerate");
            r.field("bound", bound).field("classes", classes.len()).field("merged within budget only", caveat);
            let lines: Vec<String> = classes.iter().map(|cl| cl.iter().map(|d| show(&th, d)).collect::<Vec<_>>().join("  ==  ")).collect();
            r.detail("members", &lines);
            r.block(lines.join("\n"));
            Ok(r)
        }
        MthCmd::CheckModel { theory, category, colours, gens } => {
            let th = load_mth(theory)?;
            let c = Arc::new(load_fc(category)?);
            let sym = enumerate_symmetric_monoidal(&c, 256)
                .into_iter()
                .find(is_cartesian_monoidal)
                .ok_or_else(|| input("the category has no strict chosen products"))?;
            let pairs = |xs: &[String], what: &str, n: usize, name: &dyn Fn(usize) -> String, resolve: &dyn Fn(&str) -> Option<usize>| {
                let mut out = vec![None; n];
                for kv in xs {
                    let (k, v) = kv.split_once('=').ok_or_else(|| input(format!("expected `name=value`, got `{kv}`")))?;
                    let i = (0..n).find(|&i| name(i) == k).ok_or_else(|| input(format!("unknown {what} `{k}`")))?;
                    out[i] = Some(resolve(v).ok_or_else(|| input(format!("`{v}` is not in the category")))?);
                }
                out.into_iter()
                    .enumerate()
                    .map(|(i, o)| o.ok_or_else(|| input(format!("no value for {what} `{}`", name(i)))))
                    .collect::<Result<Vec<usize>, Failure>>()
            };
            let cs = pairs(colours, "colour", th.sig.colours.len(), &|i| th.sig.colours[i].clone(), &|v| c.obj(v))?;
            let gs = pairs(gens, "generator", th.sig.generators.len(), &|i| th.sig.generators[i].name.clone(), &|v| c.mor(v))?;
            let m = ModelData { target: sym.mon, colours: cs, generators: gs };
            let rep = check_model(&th, &m);
            let mut r = Report::new("mth check-model");
            r.check("model", rep.holds());
            r.field("failed", &rep.failed).field("errors", rep.errors.iter().map(|e| e.to_string()).collect::<Vec<_>>());
            Ok(r)
        }
        MthCmd::CheckTrace { theory, trace } => {
            let th = load_mth(theory)?;
            let v: serde_json::Value = serde_json::from_str(&read(trace)?).map_err(input)?;
            // a whole `mth prove` report, or one bare trace
            let traces: Vec<serde_json::Value> = match v.get("goals") {
                Some(serde_json::Value::Array(gs)) => gs.iter().filter_map(|g| g["verdict"].get("Proved").cloned()).collect(),
                _ => vec![v],
            };
            let mut r = Report::new("mth check-trace");
            r.field("traces", traces.len());
            for (i, t) in traces.into_iter().enumerate() {
                let t: Trace = serde_json::from_value(t).map_err(|e| input(format!("trace {i}: {e}")))?;
                match check_trace(&th, &t) {
                    Ok(()) => r.check(&format!("trace {i}"), true),
                    Err(e) => r.check(&format!("trace {i}"), false).field(&format!("trace {i} error"), e.to_string()),
                };
            }
            Ok(r)
        }
    }
}

/// `lhs = rhs` lines with their line numbers.
fn goal_lines(path: &Path) -> Result<Vec<(usize, String, String)>, Failure> {
    let src = read(path)?;
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (l, r) = line.split_once('=').ok_or_else(|| input(format!("{}:{}: expected `lhs = rhs`", path.display(), i + 1)))?;
        out.push((i + 1, l.trim().to_string(), r.trim().to_string()));
    }
    Ok(out)
}

pub fn lmt(c: &LmtCmd, cfg: &RunConfig) -> Result<Report, Failure> {
    match c {
        LmtCmd::Typecheck { theory, term } => {
            let th = load_lmt(theory)?;
            let mut r = Report::new("lmt typecheck");
            r.field("mode", th.mode.name())
                .field("layers", th.sig.layers.len())
                .field("e1", th.e1.len())
                .field("cells", th.cells.len())
                .field("e2", th.e2.len());
            if let Some(t) = term {
                let lt = parse_lterm(&th.sig, t).map_err(|e| input(format!("{}: col {}", e.message, e.col)))?;
                let u = &th.universe;
                match typecheck_term(&th, &lt) {
                    Ok(ty) => {
                        r.check("well typed", true)
                            .field("internal", ty.internal)
                            .field("type", format!("{} -> {}", u.list_name(&th.sig, &ty.diagram.dom), u.list_name(&th.sig, &ty.diagram.cod)));
                    }
                    Err(e) => {
                        r.check("well typed", false).field("error", e.to_string());
                    }
                }
            }
            Ok(r)
        }
        LmtCmd::Prove1 { theory, goals } => {
            let th = load_lmt(theory)?;
            let pc = Prover1Config { budget: cfg.budget_or(20_000)?, ..Prover1Config::default() };
            let mut r = Report::new("lmt prove1");
            r.field("budget", pc.budget);
            let mut details = Vec::new();
            for (line, l, s) in goal_lines(goals)? {
                let at = |e: String| input(format!("{}:{line}: {e}", goals.display()));
                let lt = parse_lterm(&th.sig, &l).map_err(|e| at(e.message))?;
                let st = parse_lterm(&th.sig, &s).map_err(|e| at(e.message))?;
                let v = prove_eq1(&th, &lt, &st, &pc).map_err(|e| at(e.to_string()))?;
                let key = format!("line {line}");
                match &v {
                    LVerdict::Proved(t) => {
                        let replays = check_trace1(&th, t).is_ok();
                        let rules: Vec<&str> = t.steps.iter().map(|s| s.rule.as_str()).collect();
                        r.field(&key, format!("Proved in {} steps, trace replays: {replays}", t.steps.len()));
                        r.block(format!("line {line}: {}", rules.join(", ")));
                        if !replays {
                            r.fail();
                        }
                    }
                    LVerdict::Unknown { explored, exhausted, distinct_nf } => {
                        r.field(&key, format!("Unknown after {explored} states (normal forms differ: {distinct_nf})"));
                        if *exhausted {
                            r.fail();
                        } else {
                            r.exhausted();
                        }
                    }
                }
                details.push(serde_json::json!({ "line": line, "verdict": v }));
            }
            r.detail("goals", details);
            Ok(r)
        }
        LmtCmd::Prove2 { theory, goals } => {
            let th = load_lmt(theory)?;
            let pc = Config2 { budget: cfg.budget_or(5_000)?, max_size: cfg.cellsize };
            let mut r = Report::new("lmt prove2");
            r.field("budget", pc.budget);
            let mut details = Vec::new();
            for (line, l, s) in goal_lines(goals)? {
                let at = |e: String| input(format!("{}:{line}: {e}", goals.display()));
                let a = parse_twoterm(&th, &l).map_err(|e| at(e.message))?;
                let b = parse_twoterm(&th, &s).map_err(|e| at(e.message))?;
                let v = prove_eq2(&th, &a, &b, &pc).map_err(|e| at(e.to_string()))?;
                let key = format!("line {line}");
                match &v {
                    Verdict2::Proved(t) => {
                        let replays = check_trace2(&th, &a, &b, t).is_ok();
                        let rules: Vec<&str> = t.steps.iter().map(|s| s.rule.as_str()).collect();
                        r.field(&key, format!("Proved in {} steps, trace replays: {replays}", t.steps.len()));
                        r.block(format!("line {line}: {}", rules.join(", ")));
                        if !replays {
                            r.fail();
                        }
                    }
                    Verdict2::Unknown { explored, exhausted } => {
                        r.field(&key, format!("Unknown after {explored} expressions"));
                        if *exhausted {
                            r.fail();
                        } else {
                            r.exhausted();
                        }
                    }
                }
                details.push(serde_json::json!({ "line": line, "verdict": v }));
            }
            r.detail("goals", details);
            Ok(r)
        }
        LmtCmd::Schemas { theory, dump } => {
            let th = load_lmt(theory)?;
            let fams = structural_equations(&th);
            let mut r = Report::new("lmt schemas");
            r.field("mode", th.mode.name()).field("families", fams.len());
            let names: Vec<String> = fams.iter().map(|f| format!("E{} {}", f.level, f.name)).collect();
            r.detail("names", &names);
            if *dump {
                r.detail("statements", fams.iter().map(|f| f.statement).collect::<Vec<_>>());
                let lines: Vec<String> = fams
                    .iter()
                    .map(|f| format!("E{} {:<18} [{}{}] {}", f.level, f.name, f.origin, if f.reconstructed { ", reconstructed" } else { "" }, f.statement))
                    .collect();
                r.block(lines.join("\n"));
            } else {
                r.block(names.join("\n"));
            }
            Ok(r)
        }
    }
}

fn load_monoid(base: &Path, monoid: &Option<std::path::PathBuf>) -> Result<MonoidOnOpfib, Failure> {
    let x = Arc::new(load_fc(base)?);
    let Some(m) = monoid else { return Ok(MonoidOnOpfib::trivial(x)) };
    let m = Arc::new(load_fc(m)?);
    if m.num_objects() != 1 {
        return Err(input("the monoid must be a one-object category"));
    }
    let s = StrictMonStructure::from_commutative_monoid(m);
    if let Some(v) = validate_monoidal(&s).first() {
        return Err(input(format!("not a commutative monoid: {v}")));
    }
    MonoidOnOpfib::componentwise(x, &s).map_err(input)
}

fn tables(mo_ob: &std::collections::BTreeMap<(usize, usize), usize>, name: &dyn Fn(usize) -> String) -> Vec<String> {
    mo_ob.iter().map(|(&(a, b), &c)| format!("{} * {} = {}", name(a), name(b), name(c))).collect()
}

pub fn imon(c: &ImonCmd, cfg: &RunConfig) -> Result<Report, Failure> {
    match c {
        ImonCmd::Fox { file } => {
            let cat = Arc::new(load_fc(file)?);
            let b = fox_battery(&cat, cfg.bound_or(64));
            let mut r = Report::new("imon fox");
            r.field("structures", b.structures)
                .field("with comonoids", b.with_comonoids)
                .field("per structure", b.per_structure)
                .field("per category", b.per_category)
                .field("round trips", b.round_trips)
                .field("unique", b.unique)
                .check("fox", b.holds());
            if let Some(w) = &b.witness {
                r.field("witness", w);
            }
            r.dot(dot::category(&cat));
            Ok(r)
        }
        ImonCmd::Check { file } => {
            let p = load_fun(file)?;
            let rep = is_im_opfibration(&ImOpfibData::detect(p, cfg.bound_or(64)));
            let mut r = Report::new("imon check");
            r.field("opfibration", rep.opfibration)
                .field("base indexed monoids", rep.base_indexed_monoids)
                .field("total cartesian", rep.total_cartesian)
                .field("preserves", rep.preserves)
                .field("reflects", rep.reflects)
                .field("opcartesian products", rep.opcartesian_products)
                .check("im-opfibration", rep.holds());
            if let Some(w) = &rep.witness {
                r.field("witness", w);
            }
            Ok(r)
        }
        ImonCmd::Fim { file } => {
            let x = Arc::new(load_fc(file)?);
            let imt = theory_im(&x);
            let bound = cfg.bound_or(5);
            let pc = ProverConfig { budget: cfg.budget_or(300)?, ..ProverConfig::default() };
            let mut r = Report::new("imon fim");
            r.field("bound", bound);
            let mut lines = Vec::new();
            for o in x.objects() {
                let n = x.obj_name(o);
                for (label, dom) in [(format!("{n} {n} -> {n}"), vec![o, o]), (format!("{n} -> {n}"), vec![o]), (format!("-> {n}"), vec![])] {
                    let h = fim_hom(&imt, &dom, &[o], bound, &pc);
                    lines.push(format!("{label}: {} classes{}", h.classes.len(), if h.caveat { " (merged within budget)" } else { "" }));
                }
            }
            r.detail("homs", &lines);
            r.block(lines.join("\n"));
            Ok(r)
        }
        ImonCmd::Mon2im { base, monoid } | ImonCmd::Im2mon { base, monoid } => {
            let mo = load_monoid(base, monoid)?;
            let bound = cfg.bound_or(6);
            let pim = monoid_to_im(&mo, bound).map_err(input)?;
            let pc = ProverConfig { budget: cfg.budget_or(500)?, ..ProverConfig::default() };
            if matches!(c, ImonCmd::Mon2im { .. }) {
                let rep = check_presented_im(&pim, &pc);
                let mut r = Report::new("imon mon2im");
                r.field("bound", bound).check("im-opfibration", rep.holds()).field("failures", &rep.failures);
                r.field("reconstructed", &pim.reconstructed);
                r.block(lmt_core::montheory::mth::write_mth(&pim.total));
                return Ok(r);
            }
            let mut r = Report::new("imon im2mon");
            r.field("bound", bound);
            match im_to_monoid(&pim, &pc) {
                Ok(rec) => {
                    let y = &mo.p.source;
                    r.check("recovers the input", rec.matches(&mo)).field("proofs", rec.proofs);
                    let mut lines = tables(&rec.tensor_ob, &|o| y.obj_name(o).to_string());
                    lines.extend(tables(&rec.tensor_mor, &|f| y.mor_name(f).to_string()));
                    lines.extend(rec.unit.iter().enumerate().map(|(i, &u)| format!("unit over {} = {}", mo.p.target.obj_name(i), y.obj_name(u))));
                    r.detail("tables", &lines);
                    r.block(lines.join("\n"));
                }
                Err(e) => {
                    r.check("recovers the input", false).field("error", e);
                }
            }
            Ok(r)
        }
    }
}

fn deflation(file: &Path, cfg: &RunConfig) -> Result<DeflationData, Failure> {
    let p = load_fun(file)?;
    deflation_from_split_opfibration(&p, cfg.len, cfg.cellsize).map_err(input)
}

pub fn defl(c: &DeflCmd, cfg: &RunConfig) -> Result<Report, Failure> {
    let fragment = format!("word length <= {}, 2-cell size <= {}", cfg.len, cfg.cellsize);
    match c {
        DeflCmd::Build { from_opfib } => {
            let d = deflation(from_opfib, cfg)?;
            let cells = d.one_cells();
            let mut r = Report::new("defl build");
            r.field("fragment", &fragment).field("1-cells", cells.len());
            let lines: Vec<String> = cells.iter().map(|c| d.display_cell(c)).collect();
            r.detail("cells", &lines);
            r.block(lines.join("\n"));
            Ok(r)
        }
        DeflCmd::Check { file } => {
            let d = deflation(file, cfg)?;
            let rep = is_deflation(&d);
            let mut r = Report::new("defl check");
            r.field("fragment", &fragment)
                .field("local retrofunctor", rep.retrofunctor.witness.is_none())
                .field("counit", rep.counit)
                .field("factorisation lifting", rep.factorisation_lifting)
                .field("minimal", rep.minimal)
                .check("deflation", rep.holds());
            if let Some(w) = &rep.witness {
                r.field("witness", w);
            }
            r.detail("report", &rep);
            Ok(r)
        }
        DeflCmd::UniqueLift { file } => {
            let d = deflation(file, cfg)?;
            let rep = unique_lifting_all(&d);
            let mut r = Report::new("defl unique-lift");
            r.field("fragment", &fragment).field("pairs", rep.pairs).check("unique lifting", rep.failures.is_empty());
            r.field("failures", &rep.failures);
            Ok(r)
        }
        DeflCmd::Restrict { file, circ } => {
            let d = deflation(file, cfg)?;
            let mut r = Report::new("defl restrict");
            r.field("fragment", &fragment);
            let q = if *circ { restrict_circ(&d) } else { restrict_star(&d) }.map_err(input)?;
            if *circ {
                r.check("fibration", is_fibration(&q).holds);
            } else {
                r.check("opfibration", is_opfibration(&q).holds).check("round trip", restrict_star_round_trip(&d));
            }
            r.block(write_fun(&q));
            r.dot(dot::functor(&q));
            Ok(r)
        }
        DeflCmd::Extract { file } => {
            let d = deflation(file, cfg)?;
            let mut r = Report::new("defl extract");
            r.field("fragment", &fragment);
            let ix = extract_opindexed(&d).map_err(input)?;
            r.check("valid", ix.validate().is_empty());
            for (i, f) in ix.fibres.iter().enumerate() {
                r.block(format!("# fibre over {}\n{}", ix.base.obj_name(i), write_fc(f)));
            }
            for (m, f) in ix.reindex.iter().enumerate() {
                r.block(format!("# reindexing along {}\n{}", ix.base.mor_name(m), write_fun(f)));
            }
            Ok(r)
        }
    }
}

pub fn zg(c: &ZgCmd, cfg: &RunConfig) -> Result<Report, Failure> {
    match c {
        ZgCmd::Normalize { base, word } => {
            let x = load_fc(base)?;
            let w = parse_word(&x, word).map_err(|e| input(e.to_string()))?;
            let n = zg_normalize(&x, &w).map_err(|e| input(e.to_string()))?;
            let mut r = Report::new("zg normalize");
            r.field("normal form", n.display(&x)).field("length", n.len());
            Ok(r)
        }
        ZgCmd::Prove { base, lhs, rhs } => {
            let zg = Zg::new(Arc::new(load_fc(base)?));
            let p = |s: &str| parse_zg_expr(&zg, s).map_err(|e| input(format!("`{s}`: {} at column {}", e.message, e.col)));
            let (a, b) = (p(lhs)?, p(rhs)?);
            let pc = Config2 { budget: cfg.budget_or(5_000)?, max_size: cfg.cellsize };
            let v = prove_twocells_equal(&zg, &a, &b, &pc).map_err(|e| input(e.to_string()))?;
            let mut r = Report::new("zg prove");
            r.field("budget", pc.budget);
            match &v {
                Verdict2::Proved(t) => {
                    let replays = check_zg_trace(&zg, t).is_ok();
                    r.field("verdict", "Proved").field("steps", t.steps.len()).check("trace replays", replays);
                    let mut text = format!("    {}\n", zg.display(&t.start));
                    for s in &t.steps {
                        text.push_str(&format!("  = {}\n    {}\n", s.rule, zg.display(&s.result)));
                    }
                    r.block(text);
                }
                Verdict2::Unknown { explored, exhausted } => {
                    r.field("verdict", "Unknown").field("explored", explored);
                    if *exhausted {
                        r.fail();
                    } else {
                        r.exhausted();
                    }
                }
            }
            r.detail("result", &v);
            Ok(r)
        }
    }
}

pub fn corpus(a: &CorpusArgs, cfg: &RunConfig) -> Result<Report, Failure> {
    fs::create_dir_all(&a.out).map_err(|e| input(format!("{}: {e}", a.out.display())))?;
    let files: Vec<(String, String)> = match a.kind {
        CorpusKind::Categories => gen_categories(cfg.seed, a.max_objects, a.max_morphisms, a.count)
            .iter()
            .enumerate()
            .map(|(i, c)| (format!("cat_{i:03}.fc"), write_fc(c)))
            .collect(),
        k => {
            let shape = match k {
                CorpusKind::Functors => Shape::Functor,
                CorpusKind::Opfibrations => Shape::Opfibration,
                CorpusKind::SplitOpfibrations => Shape::SplitOpfibration,
                _ => Shape::Conduche,
            };
            let spec = CorpusSpec { max_objects: a.max_objects, max_morphisms: a.max_morphisms, count: a.count, shape };
            gen_functors(cfg.seed, &spec).iter().enumerate().map(|(i, f)| (format!("fun_{i:03}.fun"), write_fun(f))).collect()
        }
    };
    for (name, body) in &files {
        let path = a.out.join(name);
        fs::write(&path, body).map_err(|e| input(format!("{}: {e}", path.display())))?;
    }
    let mut r = Report::new("corpus");
    r.field("seed", cfg.seed).field("written", files.len()).field("directory", a.out.display().to_string());
    Ok(r)
}
