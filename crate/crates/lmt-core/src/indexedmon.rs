/*!
Uniform comonoids and Fox's theorem, indexed monoids, the theory `im(X)`
with its bounded free model, im-opfibrations, and the translation between
monoids on split opfibrations and presented im-opfibrations.

All monoidal categories are strict, so the unitors and associators in the
comonoid and monoid laws are identities.
*/

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::fibration::{is_opcartesian, is_opfibration, Cleavage, FuncOver};
use crate::fincat::{
    enumerate_symmetric_monoidal, find_cartesian_structure, is_product_cone, is_terminal,
    CartesianStructure, FinCategory, FinFunctor, Mor, Ob, ProductCone, StrictMonStructure, SymMonStructure,
};
use crate::montheory::diagram::{nf, Diagram};
use crate::montheory::model::{check_model, ModelData, ModelReport};
use crate::montheory::mth::write_mth;
use crate::montheory::prover::{ProverConfig, Verdict};
use crate::montheory::theories::{add_indexed_monoids, add_uniform_comonoids};
use crate::montheory::{
    apply_signature_morphism, enumerate_hom, is_name_char, prove_equal, Colour, GenId, MonSignature, MonTerm,
    MonTheory, SigMorphism,
};

/// `d_x: x -> x⊗x` and `e_x: x -> I` for every object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformComonoids {
    pub sym: SymMonStructure,
    pub d: Vec<Mor>,
    pub e: Vec<Mor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Absence {
    /// An object with no locally valid candidate, if there is one.
    pub object: Option<String>,
    pub reason: String,
}

fn fail(out: &mut Vec<String>, stop: bool, msg: String) -> bool {
    out.push(msg);
    stop
}

fn typed(c: &FinCategory, f: Mor, a: Ob, b: Ob) -> bool {
    f < c.num_morphisms() && c.dom(f) == a && c.cod(f) == b
}

/// Laws among the assigned entries. Only laws whose entries are all present
/// are checked, which is what the per-object search needs.
fn uc_laws(sym: &SymMonStructure, d: &[Option<Mor>], e: &[Option<Mor>], stop: bool) -> Vec<String> {
    let m = &sym.mon;
    let c = &*m.carrier;
    let i = m.unit;
    let mut out = Vec::new();
    for x in c.objects() {
        let (Some(dx), Some(ex)) = (d[x], e[x]) else { continue };
        if !typed(c, dx, x, m.ob(x, x)) || !typed(c, ex, x, i) {
            if fail(&mut out, true, format!("d or e at {} has the wrong type", c.obj_name(x))) {
                return out;
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    for x in c.objects() {
        let (Some(dx), Some(ex)) = (d[x], e[x]) else { continue };
        let idx = c.id(x);
        let n = c.obj_name(x);
        if c.comp(dx, m.mor(dx, idx)) != c.comp(dx, m.mor(idx, dx)) && fail(&mut out, stop, format!("coassociativity at {n}")) {
            return out;
        }
        if (c.comp(dx, m.mor(ex, idx)) != idx || c.comp(dx, m.mor(idx, ex)) != idx)
            && fail(&mut out, stop, format!("counit law at {n}"))
        {
            return out;
        }
        if x == i && (dx != c.id(i) || ex != c.id(i)) && fail(&mut out, stop, "d or e at the unit is not the identity".into()) {
            return out;
        }
    }
    for f in c.morphisms() {
        let (x, y) = (c.dom(f), c.cod(f));
        if let (Some(dx), Some(dy)) = (d[x], d[y]) {
            if c.comp(f, dy) != c.comp(dx, m.mor(f, f)) && fail(&mut out, stop, format!("d not natural at {}", c.mor_name(f))) {
                return out;
            }
        }
        if let (Some(ex), Some(ey)) = (e[x], e[y]) {
            if c.comp(f, ey) != ex && fail(&mut out, stop, format!("e not natural at {}", c.mor_name(f))) {
                return out;
            }
        }
    }
    for x in c.objects() {
        for y in c.objects() {
            let xy = m.ob(x, y);
            if let (Some(dx), Some(dy), Some(dxy)) = (d[x], d[y], d[xy]) {
                let mid = m.mor(m.mor(c.id(x), sym.sigma(x, y)), c.id(y));
                if c.comp(m.mor(dx, dy), mid) != dxy
                    && fail(&mut out, stop, format!("d not multiplicative at {},{}", c.obj_name(x), c.obj_name(y)))
                {
                    return out;
                }
            }
            if let (Some(ex), Some(ey), Some(exy)) = (e[x], e[y], e[xy]) {
                if m.mor(ex, ey) != exy
                    && fail(&mut out, stop, format!("e not multiplicative at {},{}", c.obj_name(x), c.obj_name(y)))
                {
                    return out;
                }
            }
        }
    }
    out
}

/// Violated uniform-comonoid laws; empty iff valid.
pub fn check_uniform_comonoids(uc: &UniformComonoids) -> Vec<String> {
    let n = uc.sym.mon.carrier.num_objects();
    if uc.d.len() != n || uc.e.len() != n {
        return vec!["one d and one e per object expected".into()];
    }
    let d: Vec<_> = uc.d.iter().map(|&f| Some(f)).collect();
    let e: Vec<_> = uc.e.iter().map(|&f| Some(f)).collect();
    uc_laws(&uc.sym, &d, &e, false)
}

/// Assigns one candidate per object in index order, pruning with `ok`.
fn per_object<T: Copy>(
    cands: &[Vec<T>],
    ok: &dyn Fn(&[Option<T>]) -> bool,
    limit: usize,
) -> Vec<Vec<T>> {
    fn go<T: Copy>(
        cands: &[Vec<T>],
        k: usize,
        cur: &mut Vec<Option<T>>,
        ok: &dyn Fn(&[Option<T>]) -> bool,
        limit: usize,
        out: &mut Vec<Vec<T>>,
    ) {
        if out.len() >= limit {
            return;
        }
        if k == cands.len() {
            out.push(cur.iter().map(|x| x.expect("assigned")).collect());
            return;
        }
        for &t in &cands[k] {
            cur[k] = Some(t);
            if ok(cur) {
                go(cands, k + 1, cur, ok, limit, out);
            }
        }
        cur[k] = None;
    }
    let mut out = Vec::new();
    let mut cur = vec![None; cands.len()];
    go(cands, 0, &mut cur, ok, limit, &mut out);
    out
}

/// Uniform comonoids on `sym`, at most `limit` of them.
pub fn all_uniform_comonoids(sym: &SymMonStructure, limit: usize) -> Result<Vec<UniformComonoids>, Absence> {
    let m = &sym.mon;
    let c = &*m.carrier;
    let n = c.num_objects();
    let split = |v: &[Option<(Mor, Mor)>]| -> (Vec<Option<Mor>>, Vec<Option<Mor>>) {
        (v.iter().map(|p| p.map(|q| q.0)).collect(), v.iter().map(|p| p.map(|q| q.1)).collect())
    };
    let mut cands = Vec::new();
    for x in c.objects() {
        let mut here = Vec::new();
        for &dx in c.hom(x, m.ob(x, x)) {
            for &ex in c.hom(x, m.unit) {
                let mut v = vec![None; n];
                v[x] = Some((dx, ex));
                let (d, e) = split(&v);
                if uc_laws(sym, &d, &e, true).is_empty() {
                    here.push((dx, ex));
                }
            }
        }
        if here.is_empty() {
            return Err(Absence {
                object: Some(c.obj_name(x).to_string()),
                reason: format!("no comonoid on {} with a counit to the unit", c.obj_name(x)),
            });
        }
        cands.push(here);
    }
    let ok = |v: &[Option<(Mor, Mor)>]| {
        let (d, e) = split(v);
        uc_laws(sym, &d, &e, true).is_empty()
    };
    let found = per_object(&cands, &ok, limit);
    if found.is_empty() {
        return Err(Absence { object: None, reason: "no natural multiplicative choice of comonoids".into() });
    }
    Ok(found
        .into_iter()
        .map(|v| UniformComonoids { sym: sym.clone(), d: v.iter().map(|p| p.0).collect(), e: v.iter().map(|p| p.1).collect() })
        .collect())
}

pub fn find_uniform_comonoids(sym: &SymMonStructure) -> Result<UniformComonoids, Absence> {
    all_uniform_comonoids(sym, 1).map(|mut v| v.remove(0))
}

/// Terminal `I`, projections `id⊗e` and `e⊗id`.
pub fn fox_products(uc: &UniformComonoids) -> CartesianStructure {
    let m = &uc.sym.mon;
    let c = &m.carrier;
    let mut products = Vec::new();
    for a in c.objects() {
        for b in c.objects() {
            products.push(ProductCone {
                object: m.ob(a, b),
                p1: m.mor(c.id(a), uc.e[b]),
                p2: m.mor(uc.e[a], c.id(b)),
            });
        }
    }
    CartesianStructure { carrier: c.clone(), terminal: m.unit, bang: uc.e.clone(), products }
}

/// `d_x;(f⊗g)`.
pub fn fox_pairing(uc: &UniformComonoids, f: Mor, g: Mor) -> Mor {
    let m = &uc.sym.mon;
    let c = &*m.carrier;
    c.comp(uc.d[c.dom(f)], m.mor(f, g))
}

/// The monoidal structure given by chosen products, if it is strict.
pub fn cartesian_monoidal(cs: &CartesianStructure) -> Result<SymMonStructure, String> {
    let c = &cs.carrier;
    let (n, k) = (c.num_objects(), c.num_morphisms());
    let tensor_ob = (0..n * n).map(|i| cs.products[i].object).collect();
    let mut tensor_mor = vec![0; k * k];
    for f in c.morphisms() {
        for g in c.morphisms() {
            tensor_mor[f * k + g] = cs.times(f, g).ok_or("product of morphisms is not unique")?;
        }
    }
    let mon = StrictMonStructure { carrier: c.clone(), tensor_ob, tensor_mor, unit: cs.terminal };
    let mut sigma = vec![0; n * n];
    for x in c.objects() {
        for y in c.objects() {
            let cone = cs.product(x, y);
            sigma[x * n + y] = cs.pairing(cone.p2, cone.p1).ok_or("no symmetry")?;
        }
    }
    let s = SymMonStructure { mon, sigma };
    match crate::fincat::validate_symmetric(&s).into_iter().next() {
        None => Ok(s),
        Some(v) => Err(format!("chosen products are not strict: {v}")),
    }
}

/// Diagonals and bangs of a cartesian structure.
pub fn fox_converse(cs: &CartesianStructure) -> Result<UniformComonoids, String> {
    let sym = cartesian_monoidal(cs)?;
    let c = &cs.carrier;
    let d = c.objects().map(|x| cs.pairing(c.id(x), c.id(x)).ok_or("no diagonal")).collect::<Result<_, _>>()?;
    let uc = UniformComonoids { sym, d, e: cs.bang.clone() };
    match check_uniform_comonoids(&uc).into_iter().next() {
        None => Ok(uc),
        Some(v) => Err(v),
    }
}

/// Brute force: the unit is terminal and every `a⊗b` carries a product cone.
pub fn is_cartesian_monoidal(sym: &SymMonStructure) -> bool {
    let m = &sym.mon;
    let c = &*m.carrier;
    is_terminal(c, m.unit)
        && c.objects().all(|a| {
            c.objects().all(|b| {
                let p = m.ob(a, b);
                c.hom(p, a).iter().any(|&p1| {
                    c.hom(p, b).iter().any(|&p2| is_product_cone(c, a, b, &ProductCone { object: p, p1, p2 }))
                })
            })
        })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FoxBattery {
    pub structures: usize,
    pub with_comonoids: usize,
    /// Per structure: comonoids exist iff the structure is cartesian.
    pub per_structure: bool,
    /// Category has chosen products iff some structure has comonoids.
    pub per_category: bool,
    pub round_trips: bool,
    pub unique: bool,
    pub witness: Option<String>,
}

impl FoxBattery {
    pub fn holds(&self) -> bool {
        self.per_structure && self.per_category && self.round_trips && self.unique
    }
}

/// Fox's theorem on every symmetric strict monoidal structure of `c`
/// (at most `limit` of them).
pub fn fox_battery(c: &Arc<FinCategory>, limit: usize) -> FoxBattery {
    let mut r = FoxBattery { per_structure: true, round_trips: true, unique: true, ..Default::default() };
    let structures = enumerate_symmetric_monoidal(c, limit);
    r.structures = structures.len();
    for (k, s) in structures.iter().enumerate() {
        let found = all_uniform_comonoids(s, 2);
        let cart = is_cartesian_monoidal(s);
        if found.is_ok() != cart {
            r.per_structure = false;
            r.witness.get_or_insert(format!("structure {k}: comonoids {} but cartesian {cart}", found.is_ok()));
        }
        let Ok(ucs) = found else { continue };
        r.with_comonoids += 1;
        if ucs.len() != 1 {
            r.unique = false;
            r.witness.get_or_insert(format!("structure {k}: uniform comonoids are not unique"));
        }
        let uc = &ucs[0];
        let cs = fox_products(uc);
        let pairing_ok = crate::fincat::verify_cartesian(&cs)
            && c.morphisms().all(|f| {
                c.hom_from(c.dom(f)).all(|g| cs.pairing(f, g) == Some(fox_pairing(uc, f, g)))
            });
        if !pairing_ok {
            r.unique = false;
            r.witness.get_or_insert(format!("structure {k}: pairing is not d;(f⊗g) or not unique"));
        }
        match fox_converse(&cs) {
            Ok(back) if back == *uc && fox_products(&back) == cs => {}
            _ => {
                r.round_trips = false;
                r.witness.get_or_insert(format!("structure {k}: round trip fails"));
            }
        }
    }
    let cartesian = find_cartesian_structure(c).is_ok();
    r.per_category = cartesian == (r.with_comonoids > 0);
    if !r.per_category {
        r.witness.get_or_insert(format!("cartesian {cartesian} but {} structures with comonoids", r.with_comonoids));
    }
    r
}

/// A consistent choice of monoids `m_x: x⊗x -> x`, `u_x: I -> x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedMonoids {
    pub uc: UniformComonoids,
    pub m: Vec<Mor>,
    pub u: Vec<Mor>,
}

fn im_laws(uc: &UniformComonoids, mm: &[Option<Mor>], uu: &[Option<Mor>], stop: bool) -> Vec<String> {
    let sym = &uc.sym;
    let m = &sym.mon;
    let c = &*m.carrier;
    let i = m.unit;
    let mut out = Vec::new();
    for x in c.objects() {
        let (Some(mx), Some(ux)) = (mm[x], uu[x]) else { continue };
        if !typed(c, mx, m.ob(x, x), x) || !typed(c, ux, i, x) {
            return vec![format!("m or u at {} has the wrong type", c.obj_name(x))];
        }
    }
    for x in c.objects() {
        let (Some(mx), Some(ux)) = (mm[x], uu[x]) else { continue };
        let idx = c.id(x);
        let n = c.obj_name(x);
        if c.comp(m.mor(mx, idx), mx) != c.comp(m.mor(idx, mx), mx) && fail(&mut out, stop, format!("associativity at {n}")) {
            return out;
        }
        if (c.comp(m.mor(ux, idx), mx) != idx || c.comp(m.mor(idx, ux), mx) != idx)
            && fail(&mut out, stop, format!("unit law at {n}"))
        {
            return out;
        }
        if x == i && (mx != c.id(i) || ux != c.id(i)) && fail(&mut out, stop, "m or u at the unit is not the identity".into()) {
            return out;
        }
    }
    for f in c.morphisms() {
        if let (Some(ux), Some(uy)) = (uu[c.dom(f)], uu[c.cod(f)]) {
            if c.comp(ux, f) != uy && fail(&mut out, stop, format!("u not natural at {}", c.mor_name(f))) {
                return out;
            }
        }
    }
    for x in c.objects() {
        for y in c.objects() {
            if let (Some(mx), Some(my), Some(mxy)) = (mm[x], mm[y], mm[m.ob(x, y)]) {
                let mid = m.mor(m.mor(c.id(x), sym.sigma(y, x)), c.id(y));
                if c.comp(mid, m.mor(mx, my)) != mxy
                    && fail(&mut out, stop, format!("m not consistent at {},{}", c.obj_name(x), c.obj_name(y)))
                {
                    return out;
                }
            }
        }
    }
    out
}

/// Violated laws, including uniform comonoids and initiality of the unit.
pub fn indexed_monoid_violations(im: &IndexedMonoids) -> Vec<String> {
    let mut out = check_uniform_comonoids(&im.uc);
    let c = &*im.uc.sym.mon.carrier;
    if im.m.len() != c.num_objects() || im.u.len() != c.num_objects() {
        out.push("one m and one u per object expected".into());
        return out;
    }
    let mm: Vec<_> = im.m.iter().map(|&f| Some(f)).collect();
    let uu: Vec<_> = im.u.iter().map(|&f| Some(f)).collect();
    out.extend(im_laws(&im.uc, &mm, &uu, false));
    let i = im.uc.sym.mon.unit;
    if let Some(x) = c.objects().find(|&x| c.hom(i, x).len() != 1) {
        out.push(format!("unit is not initial: {} maps to {}", c.hom(i, x).len(), c.obj_name(x)));
    }
    out
}

pub fn check_indexed_monoids(im: &IndexedMonoids) -> bool {
    indexed_monoid_violations(im).is_empty()
}

pub fn find_indexed_monoids(uc: &UniformComonoids) -> Result<IndexedMonoids, Absence> {
    let m = &uc.sym.mon;
    let c = &*m.carrier;
    let n = c.num_objects();
    let split = |v: &[Option<(Mor, Mor)>]| -> (Vec<Option<Mor>>, Vec<Option<Mor>>) {
        (v.iter().map(|p| p.map(|q| q.0)).collect(), v.iter().map(|p| p.map(|q| q.1)).collect())
    };
    let mut cands = Vec::new();
    for x in c.objects() {
        let mut here = Vec::new();
        for &mx in c.hom(m.ob(x, x), x) {
            for &ux in c.hom(m.unit, x) {
                let mut v = vec![None; n];
                v[x] = Some((mx, ux));
                let (a, b) = split(&v);
                if im_laws(uc, &a, &b, true).is_empty() {
                    here.push((mx, ux));
                }
            }
        }
        if here.is_empty() {
            return Err(Absence { object: Some(c.obj_name(x).to_string()), reason: format!("no monoid on {}", c.obj_name(x)) });
        }
        cands.push(here);
    }
    let ok = |v: &[Option<(Mor, Mor)>]| {
        let (a, b) = split(v);
        im_laws(uc, &a, &b, true).is_empty()
    };
    let mut found = per_object(&cands, &ok, 1);
    let v = found.pop().ok_or(Absence { object: None, reason: "no consistent natural choice of monoids".into() })?;
    let im = IndexedMonoids { uc: uc.clone(), m: v.iter().map(|p| p.0).collect(), u: v.iter().map(|p| p.1).collect() };
    match indexed_monoid_violations(&im).into_iter().next() {
        None => Ok(im),
        Some(r) => Err(Absence { object: None, reason: r }),
    }
}

/// First structure on `c` carrying indexed monoids.
pub fn detect_indexed_monoids(c: &Arc<FinCategory>, limit: usize) -> Result<IndexedMonoids, Absence> {
    let mut last = Absence { object: None, reason: "no symmetric strict monoidal structure".into() };
    for s in enumerate_symmetric_monoidal(c, limit) {
        match find_uniform_comonoids(&s).and_then(|uc| find_indexed_monoids(&uc)) {
            Ok(im) => return Ok(im),
            Err(a) => last = a,
        }
    }
    Err(last)
}

/// `m_x;f = (f⊗f);m_y`.
pub fn is_monoid_hom(im: &IndexedMonoids, f: Mor) -> bool {
    let m = &im.uc.sym.mon;
    let c = &*m.carrier;
    c.comp(im.m[c.dom(f)], f) == c.comp(m.mor(f, f), im.m[c.cod(f)])
}

/// The subcategory on all objects and the kept morphisms, with its
/// inclusion. Fails when identities are dropped or composites escape.
pub fn wide_subcategory(c: &FinCategory, keep: &[bool]) -> Result<(FinCategory, Vec<Mor>), String> {
    let incl: Vec<Mor> = c.morphisms().filter(|&f| keep[f]).collect();
    let mut local = vec![usize::MAX; c.num_morphisms()];
    for (i, &f) in incl.iter().enumerate() {
        local[f] = i;
    }
    for x in c.objects() {
        if !keep[c.id(x)] {
            return Err(format!("identity of {} is not kept", c.obj_name(x)));
        }
    }
    for &f in &incl {
        for &g in &incl {
            if let Some(h) = c.compose(f, g) {
                if !keep[h] {
                    return Err(format!("{};{} leaves the subcategory", c.mor_name(f), c.mor_name(g)));
                }
            }
        }
    }
    let sub = FinCategory::from_parts(
        c.objects().map(|x| c.obj_name(x).to_string()).collect(),
        incl.iter().map(|&f| c.mor_name(f).to_string()).collect(),
        incl.iter().map(|&f| c.dom(f)).collect(),
        incl.iter().map(|&f| c.cod(f)).collect(),
        c.objects().map(|x| local[c.id(x)]).collect(),
        |f, g| c.compose(incl[f], incl[g]).map(|h| local[h]),
    );
    Ok((sub, incl))
}

/// Monoid homomorphisms as a wide subcategory, with its inclusion.
pub fn hom_subcategory(im: &IndexedMonoids) -> Result<(FinCategory, Vec<Mor>), String> {
    let c = &*im.uc.sym.mon.carrier;
    let keep: Vec<bool> = c.morphisms().map(|f| is_monoid_hom(im, f)).collect();
    wide_subcategory(c, &keep)
}

/// Whether `f⊗g` is a homomorphism whenever `f` and `g` are.
pub fn homs_closed_under_tensor(im: &IndexedMonoids) -> bool {
    let m = &im.uc.sym.mon;
    let c = &*m.carrier;
    let homs: Vec<Mor> = c.morphisms().filter(|&f| is_monoid_hom(im, f)).collect();
    homs.iter().all(|&f| homs.iter().all(|&g| is_monoid_hom(im, m.mor(f, g))))
}

/// Replaces characters the term parser reserves.
pub fn sanitize(name: &str) -> String {
    let s: String = name
        .chars()
        .filter(|&ch| ch != '(' && ch != ')')
        .map(|ch| if ch == ',' { '.' } else if is_name_char(ch) { ch } else { '_' })
        .collect();
    if s.is_empty() {
        "_".into()
    } else {
        s
    }
}

fn unique_names(names: impl Iterator<Item = String>) -> Vec<String> {
    let mut seen = std::collections::BTreeSet::new();
    names
        .map(|n| {
            let mut n = sanitize(&n);
            while !seen.insert(n.clone()) {
                n.push('\'');
            }
            n
        })
        .collect()
}

/// `im(X)`: one colour per object, one generator per morphism, the
/// identity and composition equations, then indexed monoids.
#[derive(Clone, Debug)]
pub struct ImTheory {
    pub base: Arc<FinCategory>,
    pub th: MonTheory,
}

impl ImTheory {
    /// Generator of a morphism; morphisms come first, in order.
    pub fn gen(&self, f: Mor) -> GenId {
        f
    }

    pub fn m(&self, x: Ob) -> GenId {
        self.th.packs.monoid.as_ref().expect("pack")[x].0
    }

    pub fn u(&self, x: Ob) -> GenId {
        self.th.packs.monoid.as_ref().expect("pack")[x].1
    }

    pub fn d(&self, x: Ob) -> GenId {
        self.th.packs.comonoid.as_ref().expect("pack")[x].0
    }

    pub fn e(&self, x: Ob) -> GenId {
        self.th.packs.comonoid.as_ref().expect("pack")[x].1
    }

    pub fn sw(&self, x: Ob, y: Ob) -> GenId {
        self.th.packs.symmetry.as_ref().expect("pack")[x][y]
    }
}

fn functoriality(th: &mut MonTheory, c: &FinCategory, gen0: GenId, colour0: Colour) {
    let g = |f: Mor| MonTerm::Gen(gen0 + f);
    for x in c.objects() {
        let name = format!("id[{}]", th.sig.colours[colour0 + x]);
        th.add_equation(&name, g(c.id(x)), MonTerm::Id(colour0 + x)).expect("sorted");
    }
    for f in c.morphisms().filter(|&f| !c.is_identity(f)) {
        for h in c.hom_from(c.cod(f)).filter(|&h| !c.is_identity(h)) {
            let k = c.comp(f, h);
            let name = format!("comp[{},{}]", th.sig.generators[gen0 + f].name, th.sig.generators[gen0 + h].name);
            th.add_equation(&name, MonTerm::comp(g(f), g(h)), g(k)).expect("sorted");
        }
    }
}

fn category_signature(c: &FinCategory) -> MonSignature {
    let mut sig = MonSignature::default();
    for n in unique_names(c.objects().map(|x| c.obj_name(x).to_string())) {
        sig.add_colour(&n);
    }
    for (f, n) in unique_names(c.morphisms().map(|f| c.mor_name(f).to_string())).into_iter().enumerate() {
        sig.add_generator(&n, vec![c.dom(f)], vec![c.cod(f)]);
    }
    sig
}

pub fn theory_im(x: &Arc<FinCategory>) -> ImTheory {
    let mut th = MonTheory::new(category_signature(x));
    functoriality(&mut th, x, 0, 0);
    add_indexed_monoids(&mut th);
    ImTheory { base: x.clone(), th }
}

/// Bounded classes of a hom-set of `Fim(X)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FimHom {
    pub classes: Vec<Vec<Diagram>>,
    /// Classes are only merged within the prover budget.
    pub caveat: bool,
    pub bound: usize,
}

impl FimHom {
    pub fn class_of(&self, d: &Diagram) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(d))
    }
}

pub fn fim_hom(imt: &ImTheory, dom: &[Ob], cod: &[Ob], bound: usize, cfg: &ProverConfig) -> FimHom {
    let (classes, caveat) = enumerate_hom(&imt.th, dom, cod, bound, cfg);
    FimHom { classes, caveat, bound }
}

/// The interpretation of `im(X)` extending `g: X -> C` into indexed monoids.
pub fn extend_to_model(imt: &ImTheory, target: &IndexedMonoids, g: &FinFunctor) -> ModelData {
    let x = &*imt.base;
    let sig = &imt.th.sig;
    let mut gens = vec![0; sig.generators.len()];
    for f in x.morphisms() {
        gens[imt.gen(f)] = g.mor(f);
    }
    for a in x.objects() {
        let ga = g.ob(a);
        gens[imt.m(a)] = target.m[ga];
        gens[imt.u(a)] = target.u[ga];
        gens[imt.d(a)] = target.uc.d[ga];
        gens[imt.e(a)] = target.uc.e[ga];
        for b in x.objects() {
            gens[imt.sw(a, b)] = target.uc.sym.sigma(ga, g.ob(b));
        }
    }
    ModelData { target: target.uc.sym.mon.clone(), colours: x.objects().map(|a| g.ob(a)).collect(), generators: gens }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FimUniversal {
    pub into_homs: bool,
    pub model: ModelReport,
    pub triangle: bool,
    /// Interpretation is constant on every enumerated class.
    pub unique_on_fragment: bool,
    pub classes_checked: usize,
}

impl FimUniversal {
    pub fn holds(&self) -> bool {
        self.into_homs && self.model.holds() && self.triangle && self.unique_on_fragment
    }
}

/// Universal property of `Fim(X)` against one functor, on the hom-sets
/// `x⊗x -> x`, `x -> x` and `ε -> x` up to `bound`.
pub fn check_fim_universal(
    imt: &ImTheory,
    target: &IndexedMonoids,
    g: &FinFunctor,
    bound: usize,
    cfg: &ProverConfig,
) -> FimUniversal {
    let x = &*imt.base;
    let into_homs = x.morphisms().all(|f| is_monoid_hom(target, g.mor(f)));
    let md = extend_to_model(imt, target, g);
    let model = check_model(&imt.th, &md);
    let mut out = FimUniversal { into_homs, model, triangle: true, unique_on_fragment: true, classes_checked: 0 };
    if !out.model.errors.is_empty() {
        out.triangle = false;
        out.unique_on_fragment = false;
        return out;
    }
    out.triangle = x.morphisms().all(|f| md.interpret(&imt.th, &MonTerm::Gen(imt.gen(f))) == Ok(g.mor(f)));
    for a in x.objects() {
        for (dom, cod) in [(vec![a, a], vec![a]), (vec![a], vec![a]), (vec![], vec![a])] {
            let h = fim_hom(imt, &dom, &cod, bound, cfg);
            for class in &h.classes {
                out.classes_checked += 1;
                let vals: Vec<_> = class.iter().map(|d| md.interpret(&imt.th, &d.to_term(&imt.th.sig))).collect();
                if vals.windows(2).any(|w| w[0] != w[1]) {
                    out.unique_on_fragment = false;
                }
            }
        }
    }
    out
}

/// A functor whose base has indexed monoids and whose total category has
/// chosen products. Missing parts make the check fail with a witness.
#[derive(Clone, Debug)]
pub struct ImOpfibData {
    pub p: FuncOver,
    pub base: Option<IndexedMonoids>,
    pub total: Option<CartesianStructure>,
}

impl ImOpfibData {
    /// Searches the base for indexed monoids and the total for products.
    /// Total products are taken over the base ones where possible.
    pub fn detect(p: FuncOver, limit: usize) -> Self {
        let base = detect_indexed_monoids(&p.target, limit).ok();
        let total = base.as_ref().and_then(|im| products_over(&p, im)).or_else(|| find_cartesian_structure(&p.source).ok());
        ImOpfibData { p, base, total }
    }
}

/// Product cones of `Y` lying over the Fox cones of the base. A choice
/// that makes the products strict is preferred; the search tries at most
/// a few thousand assignments of cones before settling on the first one.
fn products_over(p: &FuncOver, im: &IndexedMonoids) -> Option<CartesianStructure> {
    let y = &p.source;
    let fox = fox_products(&im.uc);
    let terminal = y.objects().find(|&t| p.ob(t) == fox.terminal && is_terminal(y, t))?;
    let mut options: Vec<Vec<ProductCone>> = Vec::new();
    for a in y.objects() {
        for b in y.objects() {
            let base = fox.product(p.ob(a), p.ob(b));
            let mut cones: Vec<ProductCone> = Vec::new();
            for o in y.objects().filter(|&o| p.ob(o) == base.object) {
                for &q1 in y.hom(o, a).iter().filter(|&&q| p.mor(q) == base.p1) {
                    for &q2 in y.hom(o, b).iter().filter(|&&q| p.mor(q) == base.p2) {
                        let cone = ProductCone { object: o, p1: q1, p2: q2 };
                        if is_product_cone(y, a, b, &cone) {
                            cones.push(cone);
                        }
                    }
                }
            }
            // unit laws pin these down when possible
            let pinned: Vec<ProductCone> = cones
                .iter()
                .filter(|c| {
                    (b == terminal && c.object == a && c.p1 == y.id(a)) || (a == terminal && c.object == b && c.p2 == y.id(b))
                })
                .cloned()
                .collect();
            if !pinned.is_empty() {
                cones = pinned;
            }
            if cones.is_empty() {
                return None;
            }
            options.push(cones);
        }
    }
    let build = |pick: &[usize]| CartesianStructure {
        carrier: y.clone(),
        terminal,
        bang: y.objects().map(|a| y.hom(a, terminal)[0]).collect(),
        products: options.iter().zip(pick).map(|(o, &i)| o[i].clone()).collect(),
    };
    let mut pick = vec![0; options.len()];
    for _ in 0..4096 {
        let cs = build(&pick);
        if cartesian_monoidal(&cs).is_ok() {
            return Some(cs);
        }
        // next assignment, odometer style
        let mut i = pick.len();
        loop {
            if i == 0 {
                return Some(build(&vec![0; options.len()]));
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < options[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
    Some(build(&vec![0; options.len()]))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ImOpfibReport {
    pub opfibration: bool,
    pub base_indexed_monoids: bool,
    pub total_cartesian: bool,
    pub preserves: bool,
    pub reflects: bool,
    pub opcartesian_products: bool,
    pub witness: Option<String>,
}

impl ImOpfibReport {
    pub fn holds(&self) -> bool {
        self.opfibration
            && self.base_indexed_monoids
            && self.total_cartesian
            && self.preserves
            && self.reflects
            && self.opcartesian_products
    }
}

pub fn is_im_opfibration(d: &ImOpfibData) -> ImOpfibReport {
    let p = &d.p;
    let (y, x) = (&*p.source, &*p.target);
    let mut r = ImOpfibReport::default();
    let op = is_opfibration(p);
    r.opfibration = op.holds;
    if let Some((a, f)) = op.witness {
        r.witness = Some(format!("no opcartesian lift of ({a}, {f})"));
    }
    r.base_indexed_monoids = d.base.as_ref().is_some_and(check_indexed_monoids);
    if !r.base_indexed_monoids {
        r.witness.get_or_insert("base has no indexed monoids".into());
    }
    r.total_cartesian = d.total.as_ref().is_some_and(crate::fincat::verify_cartesian);
    if !r.total_cartesian {
        r.witness.get_or_insert("total category has no chosen products".into());
    }
    let (Some(im), Some(cs)) = (&d.base, &d.total) else { return r };
    if !r.base_indexed_monoids || !r.total_cartesian {
        return r;
    }
    let m = &im.uc.sym.mon;
    let fox = fox_products(&im.uc);
    r.preserves = p.ob(cs.terminal) == m.unit
        && y.objects().all(|a| p.mor(cs.bang[a]) == im.uc.e[p.ob(a)])
        && y.objects().all(|a| {
            y.objects().all(|b| {
                let (cone, base) = (cs.product(a, b), fox.product(p.ob(a), p.ob(b)));
                p.ob(cone.object) == base.object && p.mor(cone.p1) == base.p1 && p.mor(cone.p2) == base.p2
            })
        });
    if !r.preserves {
        r.witness.get_or_insert("chosen products are not preserved strictly".into());
    }
    r.reflects = y.objects().filter(|&t| p.ob(t) == m.unit).all(|t| is_terminal(y, t))
        && y.objects().all(|a| {
            y.objects().all(|b| {
                let base = fox.product(p.ob(a), p.ob(b));
                y.objects().filter(|&o| p.ob(o) == base.object).all(|o| {
                    y.hom(o, a).iter().filter(|&&q1| p.mor(q1) == base.p1).all(|&q1| {
                        y.hom(o, b)
                            .iter()
                            .filter(|&&q2| p.mor(q2) == base.p2)
                            .all(|&q2| is_product_cone(y, a, b, &ProductCone { object: o, p1: q1, p2: q2 }))
                    })
                })
            })
        });
    if !r.reflects {
        r.witness.get_or_insert("a cone over a product cone is not a product".into());
    }
    let opc: Vec<Mor> = y.morphisms().filter(|&f| is_opcartesian(p, f)).collect();
    r.opcartesian_products = true;
    'outer: for &f in &opc {
        for &g in &opc {
            match cs.times(f, g) {
                Some(h) if is_opcartesian(p, h) => {}
                _ => {
                    r.opcartesian_products = false;
                    r.witness.get_or_insert(format!("{}×{} is not opcartesian", y.mor_name(f), y.mor_name(g)));
                    break 'outer;
                }
            }
        }
    }
    let _ = x;
    r
}

/// `p` restricted to the morphisms over monoid homomorphisms.
pub fn restrict_im_opfibration(d: &ImOpfibData) -> Result<FuncOver, String> {
    let im = d.base.as_ref().ok_or("base has no indexed monoids")?;
    let p = &d.p;
    let (hx, xincl) = hom_subcategory(im)?;
    let mut xlocal = vec![usize::MAX; p.target.num_morphisms()];
    for (i, &f) in xincl.iter().enumerate() {
        xlocal[f] = i;
    }
    let keep: Vec<bool> = p.source.morphisms().map(|f| xlocal[p.mor(f)] != usize::MAX).collect();
    let (hy, yincl) = wide_subcategory(&p.source, &keep)?;
    let mmap = yincl.iter().map(|&f| xlocal[p.mor(f)]).collect();
    Ok(FinFunctor::new(Arc::new(hy), Arc::new(hx), p.omap.clone(), mmap))
}

/// Fibrewise tensor and unit on a split opfibration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidOnOpfib {
    pub p: FuncOver,
    pub cleavage: Cleavage,
    pub tensor_ob: BTreeMap<(Ob, Ob), Ob>,
    pub tensor_mor: BTreeMap<(Mor, Mor), Mor>,
    pub unit: Vec<Ob>,
}

impl MonoidOnOpfib {
    /// `X × M -> X` with the tensor of `M` in every fibre.
    pub fn componentwise(x: Arc<FinCategory>, mon: &StrictMonStructure) -> Result<Self, String> {
        let mc = &mon.carrier;
        let y = Arc::new(crate::fincat::product_category(&x, mc));
        let p = crate::fincat::product_projections(&x, mc, &y).0;
        let cleavage = crate::fibration::choose_cleavage(&p, true).map_err(|e| e.to_string())?;
        let (nb, mb) = (mc.num_objects(), mc.num_morphisms());
        let mut tensor_ob = BTreeMap::new();
        let mut tensor_mor = BTreeMap::new();
        for a in y.objects() {
            for b in y.objects().filter(|&b| b / nb == a / nb) {
                tensor_ob.insert((a, b), (a / nb) * nb + mon.ob(a % nb, b % nb));
            }
        }
        for f in y.morphisms() {
            for g in y.morphisms().filter(|&g| g / mb == f / mb) {
                tensor_mor.insert((f, g), (f / mb) * mb + mon.mor(f % mb, g % mb));
            }
        }
        let unit = x.objects().map(|o| o * nb + mon.unit).collect();
        Ok(MonoidOnOpfib { p, cleavage, tensor_ob, tensor_mor, unit })
    }

    /// The identity functor with the only possible fibrewise structure.
    pub fn trivial(x: Arc<FinCategory>) -> Self {
        let p = FinFunctor::identity(x.clone());
        let cleavage = crate::fibration::choose_cleavage(&p, true).expect("identity is split");
        MonoidOnOpfib {
            p,
            cleavage,
            tensor_ob: x.objects().map(|a| ((a, a), a)).collect(),
            tensor_mor: x.morphisms().map(|f| ((f, f), f)).collect(),
            unit: x.objects().collect(),
        }
    }

    pub fn ob(&self, a: Ob, b: Ob) -> Option<Ob> {
        self.tensor_ob.get(&(a, b)).copied()
    }

    pub fn mor(&self, f: Mor, g: Mor) -> Option<Mor> {
        self.tensor_mor.get(&(f, g)).copied()
    }

    /// Violations of functoriality, strict associativity and units, and
    /// strict preservation by the chosen lifts; empty iff valid.
    pub fn violations(&self) -> Vec<String> {
        let p = &self.p;
        let (y, x) = (&*p.source, &*p.target);
        let mut out = Vec::new();
        if self.cleavage.split_violation(p).is_some() {
            out.push("cleavage is not split".into());
        }
        for a in y.objects() {
            for b in y.objects().filter(|&b| p.ob(b) == p.ob(a)) {
                match self.ob(a, b) {
                    Some(ab) if p.ob(ab) == p.ob(a) => {}
                    _ => out.push(format!("no tensor of {} and {} in their fibre", y.obj_name(a), y.obj_name(b))),
                }
            }
        }
        for f in y.morphisms() {
            for g in y.morphisms().filter(|&g| p.mor(g) == p.mor(f)) {
                let ok = self.mor(f, g).is_some_and(|h| {
                    p.mor(h) == p.mor(f)
                        && Some(y.dom(h)) == self.ob(y.dom(f), y.dom(g))
                        && Some(y.cod(h)) == self.ob(y.cod(f), y.cod(g))
                });
                if !ok {
                    out.push(format!("tensor of {} and {} is missing or mistyped", y.mor_name(f), y.mor_name(g)));
                }
            }
        }
        if self.unit.len() != x.num_objects() || x.objects().any(|o| p.ob(self.unit[o]) != o) {
            out.push("unit objects do not lie over their base objects".into());
        }
        if !out.is_empty() {
            return out;
        }
        let t = |a, b| self.ob(a, b).expect("checked");
        let tm = |f, g| self.mor(f, g).expect("checked");
        for a in y.objects() {
            if tm(y.id(a), y.id(a)) != y.id(t(a, a)) {
                out.push(format!("id⊗id is not an identity at {}", y.obj_name(a)));
            }
            let u = self.unit[p.ob(a)];
            if t(u, a) != a || t(a, u) != a {
                out.push(format!("unit law on {}", y.obj_name(a)));
            }
            for b in y.objects().filter(|&b| p.ob(b) == p.ob(a)) {
                for c in y.objects().filter(|&c| p.ob(c) == p.ob(a)) {
                    if t(t(a, b), c) != t(a, t(b, c)) {
                        out.push(format!("associativity on {},{},{}", y.obj_name(a), y.obj_name(b), y.obj_name(c)));
                    }
                }
                for f in x.hom_from(p.ob(a)) {
                    let (la, lb) = (self.cleavage.lift(a, f), self.cleavage.lift(b, f));
                    if tm(la, lb) != self.cleavage.lift(t(a, b), f) {
                        out.push(format!("lifts along {} are not preserved at {},{}", x.mor_name(f), y.obj_name(a), y.obj_name(b)));
                    }
                }
            }
        }
        for xo in x.objects() {
            for f in x.hom_from(xo) {
                if y.cod(self.cleavage.lift(self.unit[xo], f)) != self.unit[x.cod(f)] {
                    out.push(format!("reindexing along {} moves the unit", x.mor_name(f)));
                }
            }
        }
        for f in y.morphisms() {
            let uf = self.cleavage.lift(self.unit[p.ob(y.dom(f))], p.mor(f));
            if tm(uf, f) != f || tm(f, uf) != f {
                out.push(format!("unit law on {}", y.mor_name(f)));
            }
            for g in y.morphisms().filter(|&g| p.mor(g) == p.mor(f)) {
                for f2 in y.hom_from(y.cod(f)) {
                    for g2 in y.hom_from(y.cod(g)).filter(|&g2| p.mor(g2) == p.mor(f2)) {
                        if tm(y.comp(f, f2), y.comp(g, g2)) != y.comp(tm(f, g), tm(f2, g2)) {
                            out.push(format!("interchange at {},{}", y.mor_name(f), y.mor_name(g)));
                        }
                    }
                }
                for h in y.morphisms().filter(|&h| p.mor(h) == p.mor(f)) {
                    if tm(tm(f, g), h) != tm(f, tm(g, h)) {
                        out.push(format!("associativity on {},{},{}", y.mor_name(f), y.mor_name(g), y.mor_name(h)));
                    }
                }
            }
        }
        out.dedup();
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GenRole {
    /// A morphism of the total category.
    Mor(Mor),
    /// `μ_{a,b}: a b -> a⊗b`.
    Pair(Ob, Ob),
    /// `ν_x: ε -> 1(x)`.
    Unit(Ob),
    /// Symmetry, diagonal or counit.
    Structure,
}

/// The presented total category `Y_⊗` over `Fim(X)`.
#[derive(Clone, Debug)]
pub struct PresentedIm {
    pub source: MonoidOnOpfib,
    pub base: ImTheory,
    /// Colours are the objects of `Y`, in order.
    pub total: MonTheory,
    pub roles: Vec<GenRole>,
    /// Image generator in the base theory.
    pub image: Vec<GenId>,
    pub opcartesian: Vec<bool>,
    /// Names of reconstructed equation families.
    pub reconstructed: Vec<String>,
    pub bound: usize,
}

impl PresentedIm {
    /// Projection as a signature morphism into `im(X)`.
    pub fn projection(&self) -> SigMorphism {
        SigMorphism { colours: self.source.p.omap.clone(), generators: self.image.clone() }
    }

    /// Opcartesian by the generation rules: marked generators, identities,
    /// and their composites and tensors.
    pub fn is_marked(&self, t: &MonTerm) -> bool {
        match t {
            MonTerm::Gen(g) => self.opcartesian[*g],
            MonTerm::Id(_) | MonTerm::IdEps => true,
            MonTerm::Comp(a, b) | MonTerm::Tensor(a, b) => self.is_marked(a) && self.is_marked(b),
        }
    }

    pub fn pair(&self, a: Ob, b: Ob) -> Option<GenId> {
        self.roles.iter().position(|r| *r == GenRole::Pair(a, b))
    }

    pub fn unit_gen(&self, x: Ob) -> Option<GenId> {
        self.roles.iter().position(|r| *r == GenRole::Unit(x))
    }
}

pub fn monoid_to_im(mo: &MonoidOnOpfib, bound: usize) -> Result<PresentedIm, String> {
    if let Some(v) = mo.violations().into_iter().next() {
        return Err(format!("invalid monoid data: {v}"));
    }
    let p = &mo.p;
    let (y, x) = (&*p.source, &*p.target);
    let base = theory_im(&p.target);
    let mut th = MonTheory::new(category_signature(y));
    functoriality(&mut th, y, 0, 0);
    let mut roles: Vec<GenRole> = y.morphisms().map(GenRole::Mor).collect();
    let mut image: Vec<GenId> = y.morphisms().map(|f| base.gen(p.mor(f))).collect();
    let mut opc: Vec<bool> = y.morphisms().map(|f| mo.cleavage.lift(y.dom(f), p.mor(f)) == f).collect();
    let names = th.sig.colours.clone();
    let cn = |a: Ob| names[a].clone();
    let mut pairs = BTreeMap::new();
    for (&(a, b), &ab) in &mo.tensor_ob {
        let name = format!("mu[{},{}]", cn(a), cn(b));
        let g = th.sig.add_generator(&name, vec![a, b], vec![ab]);
        pairs.insert((a, b), g);
        roles.push(GenRole::Pair(a, b));
        image.push(base.m(p.ob(a)));
        opc.push(true);
    }
    let mut units = Vec::new();
    for xo in x.objects() {
        let name = format!("nu[{}]", base.th.sig.colours[xo]);
        units.push(th.sig.add_generator(&name, vec![], vec![mo.unit[xo]]));
        roles.push(GenRole::Unit(xo));
        image.push(base.u(xo));
        opc.push(true);
    }
    let g = MonTerm::Gen;
    let (c, t) = (MonTerm::comp, MonTerm::tensor);
    let mut eqs: Vec<(String, MonTerm, MonTerm)> = Vec::new();
    for f in y.morphisms() {
        for h in y.morphisms().filter(|&h| p.mor(h) == p.mor(f)) {
            if y.is_identity(f) && y.is_identity(h) {
                continue;
            }
            let fh = mo.mor(f, h).expect("valid");
            let (fd, hd, fc, hc) = (y.dom(f), y.dom(h), y.cod(f), y.cod(h));
            eqs.push((
                format!("pair-nat[{},{}]", th.sig.generators[f].name, th.sig.generators[h].name),
                c(g(pairs[&(fd, hd)]), g(fh)),
                c(t(g(f), g(h)), g(pairs[&(fc, hc)])),
            ));
        }
    }
    for (&(a, b), &mab) in &pairs {
        let ab = mo.ob(a, b).expect("valid");
        for cc in y.objects().filter(|&cc| p.ob(cc) == p.ob(a)) {
            let bc = mo.ob(b, cc).expect("valid");
            eqs.push((
                format!("mu-assoc[{},{},{}]", cn(a), cn(b), cn(cc)),
                c(t(g(mab), MonTerm::Id(cc)), g(pairs[&(ab, cc)])),
                c(t(MonTerm::Id(a), g(pairs[&(b, cc)])), g(pairs[&(a, bc)])),
            ));
        }
    }
    for a in y.objects() {
        let xo = p.ob(a);
        let u = mo.unit[xo];
        eqs.push((format!("mu-unit-l[{}]", cn(a)), c(t(g(units[xo]), MonTerm::Id(a)), g(pairs[&(u, a)])), MonTerm::Id(a)));
        eqs.push((format!("mu-unit-r[{}]", cn(a)), c(t(MonTerm::Id(a), g(units[xo])), g(pairs[&(a, u)])), MonTerm::Id(a)));
    }
    for xo in x.objects() {
        for f in x.hom_from(xo).filter(|&f| !x.is_identity(f)) {
            let l = mo.cleavage.lift(mo.unit[xo], f);
            eqs.push((
                format!("unit-lift[{}]", th.sig.generators[l].name),
                c(g(units[xo]), g(l)),
                g(units[x.cod(f)]),
            ));
        }
    }
    for (n, l, r) in eqs {
        th.add_equation(&n, l, r).map_err(|e| e.to_string())?;
    }
    let before = th.sig.generators.len();
    add_uniform_comonoids(&mut th);
    let sym = th.packs.symmetry.clone().expect("pack");
    let co = th.packs.comonoid.clone().expect("pack");
    for gid in before..th.sig.generators.len() {
        roles.push(GenRole::Structure);
        opc.push(true);
        let img = (0..y.num_objects())
            .find_map(|a| {
                if co[a].0 == gid {
                    Some(base.d(p.ob(a)))
                } else if co[a].1 == gid {
                    Some(base.e(p.ob(a)))
                } else {
                    (0..y.num_objects()).find(|&b| sym[a][b] == gid).map(|b| base.sw(p.ob(a), p.ob(b)))
                }
            })
            .expect("structure generator");
        image.push(img);
    }
    let reconstructed = vec!["pair-nat".into(), "unit-lift".into()];
    Ok(PresentedIm { source: mo.clone(), base, total: th, roles, image, opcartesian: opc, reconstructed, bound })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PresentedImReport {
    /// Images of the total equations hold in `im(X)`.
    pub projection: bool,
    /// Every base generator out of a colour's image has a marked lift.
    pub lifts: bool,
    /// `(L⊗L');μ = μ;L''` for chosen lifts.
    pub lifted_pairs: bool,
    /// `m_x` appears in the enumerated base fragment.
    pub base_fragment: bool,
    pub bound: usize,
    pub failures: Vec<String>,
}

impl PresentedImReport {
    pub fn holds(&self) -> bool {
        self.projection && self.lifts && self.lifted_pairs && self.base_fragment
    }
}

/// Bounded im-opfibration conditions on a presented total category.
pub fn check_presented_im(pim: &PresentedIm, cfg: &ProverConfig) -> PresentedImReport {
    let mo = &pim.source;
    let p = &mo.p;
    let (y, x) = (&*p.source, &*p.target);
    let mut r = PresentedImReport { projection: true, lifts: true, lifted_pairs: true, bound: pim.bound, ..Default::default() };
    let proj = pim.projection();
    let bth = &pim.base.th;
    for e in &pim.total.equations {
        let (l, rr) = (apply_signature_morphism(&proj, &e.lhs), apply_signature_morphism(&proj, &e.rhs));
        if nf(&bth.sig, &l) == nf(&bth.sig, &rr) {
            continue;
        }
        if !prove_equal(bth, &l, &rr, cfg).is_ok_and(|v| v.is_proved()) {
            r.projection = false;
            r.failures.push(format!("image of {} not proved", e.name));
        }
    }
    for a in y.objects() {
        for f in x.hom_from(p.ob(a)) {
            let l = mo.cleavage.lift(a, f);
            if !pim.opcartesian[l] || pim.image[l] != pim.base.gen(f) {
                r.lifts = false;
                r.failures.push(format!("no marked lift of ({}, {})", y.obj_name(a), x.mor_name(f)));
            }
        }
        for b in y.objects().filter(|&b| p.ob(b) == p.ob(a)) {
            if !pim.pair(a, b).is_some_and(|g| pim.opcartesian[g]) {
                r.lifts = false;
                r.failures.push(format!("no marked pairing at {},{}", y.obj_name(a), y.obj_name(b)));
            }
        }
    }
    for (&(a, b), &ab) in &mo.tensor_ob {
        for f in x.hom_from(p.ob(a)).filter(|&f| !x.is_identity(f)) {
            let (la, lb, lab) = (mo.cleavage.lift(a, f), mo.cleavage.lift(b, f), mo.cleavage.lift(ab, f));
            let (a2, b2) = (y.cod(la), y.cod(lb));
            let (Some(m1), Some(m2)) = (pim.pair(a, b), pim.pair(a2, b2)) else {
                r.lifted_pairs = false;
                continue;
            };
            let lhs = MonTerm::comp(MonTerm::tensor(MonTerm::Gen(la), MonTerm::Gen(lb)), MonTerm::Gen(m2));
            let rhs = MonTerm::comp(MonTerm::Gen(m1), MonTerm::Gen(lab));
            let ok = pim.is_marked(&lhs)
                && pim.is_marked(&rhs)
                && prove_equal(&pim.total, &lhs, &rhs, cfg).is_ok_and(|v| v.is_proved());
            if !ok {
                r.lifted_pairs = false;
                r.failures.push(format!("pairing of lifts along {} at {},{}", x.mor_name(f), y.obj_name(a), y.obj_name(b)));
            }
        }
    }
    r.base_fragment = x.objects().all(|xo| {
        let h = fim_hom(&pim.base, &[xo, xo], &[xo], pim.bound, cfg);
        h.class_of(&nf(&bth.sig, &MonTerm::Gen(pim.base.m(xo)))).is_some()
    });
    if !r.base_fragment {
        r.failures.push("multiplication missing from the base fragment".into());
    }
    r
}

/// Fibrewise tensor and units read back from a presented im-opfibration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecoveredMonoid {
    pub tensor_ob: BTreeMap<(Ob, Ob), Ob>,
    pub tensor_mor: BTreeMap<(Mor, Mor), Mor>,
    pub unit: Vec<Ob>,
    pub proofs: usize,
}

impl RecoveredMonoid {
    pub fn matches(&self, mo: &MonoidOnOpfib) -> bool {
        self.tensor_ob == mo.tensor_ob && self.tensor_mor == mo.tensor_mor && self.unit == mo.unit
    }

    pub fn into_monoid(self, like: &MonoidOnOpfib) -> MonoidOnOpfib {
        MonoidOnOpfib {
            p: like.p.clone(),
            cleavage: like.cleavage.clone(),
            tensor_ob: self.tensor_ob,
            tensor_mor: self.tensor_mor,
            unit: self.unit,
        }
    }
}

/// Objects from the codomains of marked lifts of `m_x` and `u_x`;
/// morphisms `F⊗G` as the `H` over `f` with `μ;H = (F⊗G);μ` provable.
pub fn im_to_monoid(pim: &PresentedIm, cfg: &ProverConfig) -> Result<RecoveredMonoid, String> {
    let bx = &pim.base.base;
    if write_mth(&theory_im(bx).th) != write_mth(&pim.base.th) {
        return Err("base is not a free indexed-monoid theory on its category".into());
    }
    let sig = &pim.total.sig;
    let (mut tensor_ob, mut unit_of) = (BTreeMap::new(), BTreeMap::new());
    for (gid, gen) in sig.generators.iter().enumerate() {
        if !pim.opcartesian[gid] || gen.cod.len() != 1 {
            continue;
        }
        for xo in bx.objects() {
            if pim.image[gid] == pim.base.m(xo) && gen.dom.len() == 2 {
                tensor_ob.insert((gen.dom[0], gen.dom[1]), gen.cod[0]);
            }
            if pim.image[gid] == pim.base.u(xo) && gen.dom.is_empty() {
                unit_of.insert(xo, gen.cod[0]);
            }
        }
    }
    let unit: Vec<Ob> = bx
        .objects()
        .map(|xo| unit_of.get(&xo).copied().ok_or(format!("no lift of the unit at {}", bx.obj_name(xo))))
        .collect::<Result<_, _>>()?;
    let ymors: Vec<(GenId, Mor)> =
        pim.roles.iter().enumerate().filter_map(|(g, r)| if let GenRole::Mor(f) = r { Some((g, *f)) } else { None }).collect();
    let mut tensor_mor = BTreeMap::new();
    let mut proofs = 0;
    for &(gf, f) in &ymors {
        for &(gg, gm) in ymors.iter().filter(|(g2, _)| pim.image[*g2] == pim.image[gf]) {
            let (fd, gd) = (&sig.gen(gf).dom, &sig.gen(gg).dom);
            let (fc, gc) = (&sig.gen(gf).cod, &sig.gen(gg).cod);
            let (Some(&dd), Some(&cc)) = (tensor_ob.get(&(fd[0], gd[0])), tensor_ob.get(&(fc[0], gc[0]))) else {
                return Err(format!("no tensor of the ends of {} and {}", sig.gen(gf).name, sig.gen(gg).name));
            };
            let m1 = pim.pair(fd[0], gd[0]).ok_or("missing pairing generator")?;
            let m2 = pim.pair(fc[0], gc[0]).ok_or("missing pairing generator")?;
            let rhs = MonTerm::comp(MonTerm::tensor(MonTerm::Gen(gf), MonTerm::Gen(gg)), MonTerm::Gen(m2));
            let found = ymors.iter().find(|&&(gh, _)| {
                let h = sig.gen(gh);
                if pim.image[gh] != pim.image[gf] || h.dom != [dd] || h.cod != [cc] {
                    return false;
                }
                proofs += 1;
                let lhs = MonTerm::comp(MonTerm::Gen(m1), MonTerm::Gen(gh));
                matches!(prove_equal(&pim.total, &lhs, &rhs, cfg), Ok(Verdict::Proved(_)))
            });
            let &(_, h) = found.ok_or(format!("no tensor of {} and {} within budget", sig.gen(gf).name, sig.gen(gg).name))?;
            tensor_mor.insert((f, gm), h);
        }
    }
    let rec = RecoveredMonoid { tensor_ob, tensor_mor, unit, proofs };
    let back = rec.clone().into_monoid(&pim.source);
    if let Some(v) = back.violations().into_iter().next() {
        return Err(format!("recovered data is not a monoid: {v}"));
    }
    Ok(rec)
}
