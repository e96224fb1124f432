/*!
Opcartesian maps, (pre)opfibrations and fibrations, cleavages, reindexing,
strict opindexed categories and the Grothendieck construction.

A functor over a base is an ordinary [`FinFunctor`] `p: Y -> X`. All checks
enumerate the total and base categories; fibration-side checks go through
[`opposite`].
*/

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::fincat::{validate_category, validate_functor, FinCategory, FinFunctor, Mor, Ob};

pub type FuncOver = FinFunctor;

/// Number of `H` above `h` with `F;H = G`.
fn mediators(p: &FuncOver, big_f: Mor, big_g: Mor, h: Mor) -> usize {
    let y = &*p.source;
    let x = &*p.target;
    let (b, c) = (y.cod(big_f), y.cod(big_g));
    if x.dom(h) != p.ob(b) || x.cod(h) != p.ob(c) {
        return 0;
    }
    y.hom(b, c).iter().filter(|&&hh| p.mor(hh) == h && y.comp(big_f, hh) == big_g).count()
}

/// A pair `(G, h)` for which the opcartesian factorisation is not unique.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpcartFailure {
    pub g: String,
    pub h: String,
    pub mediators: usize,
}

fn opcart_failure(p: &FuncOver, big_f: Mor, weak: bool) -> Option<OpcartFailure> {
    let y = &*p.source;
    let x = &*p.target;
    let a = y.dom(big_f);
    let pf = p.mor(big_f);
    for big_g in y.hom_from(a) {
        let pg = p.mor(big_g);
        let c = y.cod(big_g);
        let hs: Vec<Mor> = if weak {
            if pf == pg {
                vec![x.id(x.cod(pf))]
            } else {
                vec![]
            }
        } else {
            x.hom(p.ob(y.cod(big_f)), p.ob(c))
                .iter()
                .copied()
                .filter(|&h| x.comp(pf, h) == pg)
                .collect()
        };
        for h in hs {
            let n = mediators(p, big_f, big_g, h);
            if n != 1 {
                return Some(OpcartFailure {
                    g: y.mor_name(big_g).into(),
                    h: x.mor_name(h).into(),
                    mediators: n,
                });
            }
        }
    }
    None
}

pub fn is_opcartesian(p: &FuncOver, big_f: Mor) -> bool {
    opcart_failure(p, big_f, false).is_none()
}

/// The opcartesian condition restricted to `h` an identity.
pub fn is_weakly_opcartesian(p: &FuncOver, big_f: Mor) -> bool {
    opcart_failure(p, big_f, true).is_none()
}

pub fn opcartesian_failure(p: &FuncOver, big_f: Mor) -> Option<OpcartFailure> {
    opcart_failure(p, big_f, false)
}

/// Outcome of a lifting check with the first unliftable pair on failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftCheck {
    pub holds: bool,
    /// `(object, base morphism)` with no suitable lift.
    pub witness: Option<(String, String)>,
}

impl LiftCheck {
    fn ok() -> Self {
        LiftCheck { holds: true, witness: None }
    }
}

/// Morphisms of `Y` with domain `a` above `f`.
pub fn lifts_of(p: &FuncOver, a: Ob, f: Mor) -> Vec<Mor> {
    let y = &*p.source;
    y.hom_from(a).filter(|&g| p.mor(g) == f).collect()
}

fn lift_check(p: &FuncOver, weak: bool) -> LiftCheck {
    let y = &*p.source;
    let x = &*p.target;
    for a in y.objects() {
        for f in x.hom_from(p.ob(a)) {
            let found = lifts_of(p, a, f).into_iter().any(|g| opcart_failure(p, g, weak).is_none());
            if !found {
                return LiftCheck {
                    holds: false,
                    witness: Some((y.obj_name(a).into(), x.mor_name(f).into())),
                };
            }
        }
    }
    LiftCheck::ok()
}

pub fn is_opfibration(p: &FuncOver) -> LiftCheck {
    lift_check(p, false)
}

pub fn is_preopfibration(p: &FuncOver) -> LiftCheck {
    lift_check(p, true)
}

pub fn is_fibration(p: &FuncOver) -> LiftCheck {
    lift_check(&p.opposite(), false)
}

pub fn is_prefibration(p: &FuncOver) -> LiftCheck {
    lift_check(&p.opposite(), true)
}

/// Whether composites of weakly opcartesian maps are weakly opcartesian.
pub fn weakly_opcartesian_closed(p: &FuncOver) -> bool {
    let y = &*p.source;
    let weak: Vec<bool> = y.morphisms().map(|f| is_weakly_opcartesian(p, f)).collect();
    y.morphisms().filter(|&f| weak[f]).all(|f| {
        y.hom_from(y.cod(f)).filter(|&g| weak[g]).all(|g| weak[y.comp(f, g)])
    })
}

/// Chosen opcartesian lifts, keyed by `(object, base morphism)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cleavage {
    pub lifts: BTreeMap<(Ob, Mor), Mor>,
    pub split: bool,
}

impl Cleavage {
    pub fn lift(&self, a: Ob, f: Mor) -> Mor {
        self.lifts[&(a, f)]
    }

    /// Whether identities lift to identities and lifts compose.
    pub fn split_violation(&self, p: &FuncOver) -> Option<(String, String)> {
        let y = &*p.source;
        let x = &*p.target;
        for a in y.objects() {
            let ia = x.id(p.ob(a));
            if self.lift(a, ia) != y.id(a) {
                return Some((x.mor_name(ia).into(), x.mor_name(ia).into()));
            }
            for f in x.hom_from(p.ob(a)) {
                let la = self.lift(a, f);
                for g in x.hom_from(x.cod(f)) {
                    let lb = self.lift(y.cod(la), g);
                    if self.lift(a, x.comp(f, g)) != y.comp(la, lb) {
                        return Some((x.mor_name(f).into(), x.mor_name(g).into()));
                    }
                }
            }
        }
        None
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize)]
pub enum CleavageError {
    #[error("not an opfibration: no opcartesian lift of ({0}, {1})")]
    NotOpfibration(String, String),
    #[error("no split cleavage; chosen lifts fail to compose at ({0}, {1})")]
    NotSplit(String, String),
}

/// Deterministic cleavage choosing the opcartesian lift with the smallest name.
/// With `split_required`, searches all choices for a functorial one.
pub fn choose_cleavage(p: &FuncOver, split_required: bool) -> Result<Cleavage, CleavageError> {
    let y = &*p.source;
    let x = &*p.target;
    let mut keys = Vec::new();
    let mut cands = Vec::new();
    for a in y.objects() {
        for f in x.hom_from(p.ob(a)) {
            let mut c: Vec<Mor> = y.by_name(&lifts_of(p, a, f));
            c.retain(|&g| is_opcartesian(p, g));
            if x.is_identity(f) && c.contains(&y.id(a)) {
                c = vec![y.id(a)];
            }
            if c.is_empty() {
                return Err(CleavageError::NotOpfibration(y.obj_name(a).into(), x.mor_name(f).into()));
            }
            keys.push((a, f));
            cands.push(c);
        }
    }
    let greedy = Cleavage {
        lifts: keys.iter().zip(&cands).map(|(k, c)| (*k, c[0])).collect(),
        split: false,
    };
    let Some(first_violation) = greedy.split_violation(p) else {
        return Ok(Cleavage { split: true, ..greedy });
    };
    if !split_required {
        return Ok(greedy);
    }
    let mut choice: BTreeMap<(Ob, Mor), Mor> = BTreeMap::new();
    if split_search(p, &keys, &cands, 0, &mut choice, &mut |_| true) {
        return Ok(Cleavage { lifts: choice, split: true });
    }
    Err(CleavageError::NotSplit(first_violation.0, first_violation.1))
}

/// The first split cleavage, in the search order of [`choose_cleavage`],
/// that `accept` takes. `None` when there is none.
pub fn find_split_cleavage(p: &FuncOver, accept: &mut dyn FnMut(&Cleavage) -> bool) -> Option<Cleavage> {
    let y = &*p.source;
    let x = &*p.target;
    let mut keys = Vec::new();
    let mut cands = Vec::new();
    for a in y.objects() {
        for f in x.hom_from(p.ob(a)) {
            let mut c: Vec<Mor> = y.by_name(&lifts_of(p, a, f));
            c.retain(|&g| is_opcartesian(p, g));
            if x.is_identity(f) {
                c.retain(|&g| g == y.id(a));
            }
            keys.push((a, f));
            cands.push(c);
        }
    }
    let mut choice = BTreeMap::new();
    let mut found = None;
    split_search(p, &keys, &cands, 0, &mut choice, &mut |m| {
        let cl = Cleavage { lifts: m.clone(), split: true };
        if accept(&cl) {
            found = Some(cl);
            true
        } else {
            false
        }
    });
    found
}

fn split_search(
    p: &FuncOver,
    keys: &[(Ob, Mor)],
    cands: &[Vec<Mor>],
    k: usize,
    choice: &mut BTreeMap<(Ob, Mor), Mor>,
    done: &mut dyn FnMut(&BTreeMap<(Ob, Mor), Mor>) -> bool,
) -> bool {
    if k == keys.len() {
        return done(choice);
    }
    let (a, f) = keys[k];
    for &c in &cands[k] {
        choice.insert((a, f), c);
        if split_consistent(p, choice, a, f) && split_search(p, keys, cands, k + 1, choice, done) {
            return true;
        }
    }
    choice.remove(&(a, f));
    false
}

fn split_consistent(p: &FuncOver, choice: &BTreeMap<(Ob, Mor), Mor>, a0: Ob, f0: Mor) -> bool {
    let y = &*p.source;
    let x = &*p.target;
    if x.is_identity(f0) && choice[&(a0, f0)] != y.id(a0) {
        return false;
    }
    for (&(a, f), &la) in choice.iter() {
        for g in x.hom_from(x.cod(f)) {
            let Some(&lb) = choice.get(&(y.cod(la), g)) else { continue };
            let Some(&lfg) = choice.get(&(a, x.comp(f, g))) else { continue };
            let involved = (a, f) == (a0, f0) || (y.cod(la), g) == (a0, f0) || (a, x.comp(f, g)) == (a0, f0);
            if involved && y.comp(la, lb) != lfg {
                return false;
            }
        }
    }
    true
}

/// The fibre of `p` over `x`: objects above `x`, morphisms above `id_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fibre {
    pub cat: Arc<FinCategory>,
    pub objects: Vec<Ob>,
    pub morphisms: Vec<Mor>,
}

impl Fibre {
    pub fn local_ob(&self, a: Ob) -> Option<Ob> {
        self.objects.iter().position(|&o| o == a)
    }

    pub fn local_mor(&self, f: Mor) -> Option<Mor> {
        self.morphisms.iter().position(|&m| m == f)
    }
}

pub fn fibre(p: &FuncOver, xo: Ob) -> Fibre {
    let y = &*p.source;
    let x = &*p.target;
    let objects: Vec<Ob> = y.objects().filter(|&a| p.ob(a) == xo).collect();
    let morphisms: Vec<Mor> = y
        .morphisms()
        .filter(|&f| p.mor(f) == x.id(xo) && p.ob(y.dom(f)) == xo)
        .collect();
    let lo = |a: Ob| objects.iter().position(|&o| o == a).expect("in fibre");
    let lm = |f: Mor| morphisms.iter().position(|&m| m == f).expect("in fibre");
    let cat = FinCategory::from_parts(
        objects.iter().map(|&a| y.obj_name(a).to_string()).collect(),
        morphisms.iter().map(|&f| y.mor_name(f).to_string()).collect(),
        morphisms.iter().map(|&f| lo(y.dom(f))).collect(),
        morphisms.iter().map(|&f| lo(y.cod(f))).collect(),
        objects.iter().map(|&a| lm(y.id(a))).collect(),
        |f, g| y.compose(morphisms[f], morphisms[g]).map(lm),
    );
    Fibre { cat: Arc::new(cat), objects, morphisms }
}

/// The reindexing functor `fibre(dom f) -> fibre(cod f)` of a cleavage.
pub fn reindexing_functor(p: &FuncOver, cl: &Cleavage, f: Mor) -> FinFunctor {
    let x = &*p.target;
    let src = fibre(p, x.dom(f));
    let tgt = fibre(p, x.cod(f));
    reindex_between(p, cl, f, &src, &tgt)
}

fn reindex_between(p: &FuncOver, cl: &Cleavage, f: Mor, src: &Fibre, tgt: &Fibre) -> FinFunctor {
    let y = &*p.source;
    let x = &*p.target;
    let idy = x.id(x.cod(f));
    let omap = src
        .objects
        .iter()
        .map(|&a| tgt.local_ob(y.cod(cl.lift(a, f))).expect("lift lands in fibre"))
        .collect();
    let mmap = src
        .morphisms
        .iter()
        .map(|&alpha| {
            let (a, a2) = (y.dom(alpha), y.cod(alpha));
            let (la, la2) = (cl.lift(a, f), cl.lift(a2, f));
            let target = y.comp(alpha, la2);
            let h = y
                .hom(y.cod(la), y.cod(la2))
                .iter()
                .copied()
                .find(|&h| p.mor(h) == idy && y.comp(la, h) == target)
                .expect("opcartesian factorisation");
            tgt.local_mor(h).expect("vertical")
        })
        .collect();
    FinFunctor::new(src.cat.clone(), tgt.cat.clone(), omap, mmap)
}

/// A strict functor from a finite base into finite categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictOpIndexedCat {
    pub base: Arc<FinCategory>,
    pub fibres: Vec<Arc<FinCategory>>,
    pub reindex: Vec<FinFunctor>,
}

impl StrictOpIndexedCat {
    /// Violations of validity and strict functoriality.
    pub fn validate(&self) -> Vec<String> {
        let x = &*self.base;
        let mut out = Vec::new();
        if !validate_category(x).is_empty() {
            out.push("base is not a category".into());
        }
        for (i, c) in self.fibres.iter().enumerate() {
            if !validate_category(c).is_empty() {
                out.push(format!("fibre over {} is not a category", x.obj_name(i)));
            }
        }
        for f in x.morphisms() {
            let r = &self.reindex[f];
            if r.source != self.fibres[x.dom(f)] || r.target != self.fibres[x.cod(f)] {
                out.push(format!("reindexing along {} has the wrong type", x.mor_name(f)));
                continue;
            }
            if !validate_functor(r).is_empty() {
                out.push(format!("reindexing along {} is not a functor", x.mor_name(f)));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for xo in x.objects() {
            if self.reindex[x.id(xo)] != FinFunctor::identity(self.fibres[xo].clone()) {
                out.push(format!("reindexing along id_{} is not the identity", x.obj_name(xo)));
            }
        }
        for f in x.morphisms() {
            for g in x.hom_from(x.cod(f)) {
                if self.reindex[f].then(&self.reindex[g]) != self.reindex[x.comp(f, g)] {
                    out.push(format!("reindexing not strict at ({},{})", x.mor_name(f), x.mor_name(g)));
                }
            }
        }
        out
    }

    /// Constant indexed category with fibre `c` everywhere.
    pub fn constant(base: Arc<FinCategory>, c: Arc<FinCategory>) -> Self {
        let fibres = vec![c.clone(); base.num_objects()];
        let reindex = base.morphisms().map(|_| FinFunctor::identity(c.clone())).collect();
        StrictOpIndexedCat { base, fibres, reindex }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum IndexError {
    #[error("cleavage is not split")]
    NotSplit,
}

/// Fibres and reindexing functors of a split cleavage.
pub fn to_opindexed(p: &FuncOver, cl: &Cleavage) -> Result<StrictOpIndexedCat, IndexError> {
    if cl.split_violation(p).is_some() {
        return Err(IndexError::NotSplit);
    }
    let x = p.target.clone();
    let fibs: Vec<Fibre> = x.objects().map(|o| fibre(p, o)).collect();
    let reindex = x
        .morphisms()
        .map(|f| reindex_between(p, cl, f, &fibs[x.dom(f)], &fibs[x.cod(f)]))
        .collect();
    Ok(StrictOpIndexedCat { base: x, fibres: fibs.into_iter().map(|f| f.cat).collect(), reindex })
}

/// Total category, projection and canonical split cleavage `(f, id)`.
#[derive(Clone, Debug)]
pub struct Grothendieck {
    pub p: FuncOver,
    pub cleavage: Cleavage,
    /// `(x, a)` for each total object.
    pub obj_pairs: Vec<(Ob, Ob)>,
    /// `(f, F)` for each total morphism.
    pub mor_pairs: Vec<(Mor, Mor)>,
}

pub fn grothendieck(ix: &StrictOpIndexedCat) -> Grothendieck {
    let x = &*ix.base;
    let mut obj_pairs = Vec::new();
    let mut obj_of = BTreeMap::new();
    for xo in x.objects() {
        for a in ix.fibres[xo].objects() {
            obj_of.insert((xo, a), obj_pairs.len());
            obj_pairs.push((xo, a));
        }
    }
    let mut mor_pairs = Vec::new();
    let mut dom = Vec::new();
    let mut cod = Vec::new();
    for f in x.morphisms() {
        let (xd, xc) = (x.dom(f), x.cod(f));
        let fib = &ix.fibres[xc];
        for a in ix.fibres[xd].objects() {
            let fa = ix.reindex[f].ob(a);
            for b in fib.objects() {
                for &big in fib.hom(fa, b) {
                    mor_pairs.push((f, big));
                    dom.push(obj_of[&(xd, a)]);
                    cod.push(obj_of[&(xc, b)]);
                }
            }
        }
    }
    // (f, F) for different a with the same F are distinct morphisms; key by domain too
    let mut key_of = BTreeMap::new();
    for (i, &(f, big)) in mor_pairs.iter().enumerate() {
        key_of.insert((dom[i], f, big), i);
    }
    let obj_names = obj_pairs
        .iter()
        .map(|&(xo, a)| format!("({},{})", x.obj_name(xo), ix.fibres[xo].obj_name(a)))
        .collect();
    let mor_names = mor_pairs
        .iter()
        .enumerate()
        .map(|(i, &(f, big))| {
            let fib = &ix.fibres[x.cod(f)];
            let (xd, a) = obj_pairs[dom[i]];
            let base = format!("({},{})", x.mor_name(f), fib.mor_name(big));
            // disambiguate when F alone does not determine the domain
            let clash = mor_pairs.iter().enumerate().any(|(j, &(g, bg))| j != i && g == f && bg == big);
            if clash {
                format!("{base}@{}", ix.fibres[xd].obj_name(a))
            } else {
                base
            }
        })
        .collect();
    let ident = obj_pairs
        .iter()
        .map(|&(xo, a)| key_of[&(obj_of[&(xo, a)], x.id(xo), ix.fibres[xo].id(a))])
        .collect();
    let total = FinCategory::from_parts(obj_names, mor_names, dom.clone(), cod.clone(), ident, |p, q| {
        let (f, bf) = mor_pairs[p];
        let (g, bg) = mor_pairs[q];
        let fg = x.compose(f, g)?;
        let fib = &ix.fibres[x.cod(g)];
        let moved = ix.reindex[g].mor(bf);
        let comp = fib.compose(moved, bg)?;
        key_of.get(&(dom[p], fg, comp)).copied()
    });
    let total = Arc::new(total);
    let proj = FinFunctor::new(
        total.clone(),
        ix.base.clone(),
        obj_pairs.iter().map(|&(xo, _)| xo).collect(),
        mor_pairs.iter().map(|&(f, _)| f).collect(),
    );
    let mut lifts = BTreeMap::new();
    for (i, &(xo, a)) in obj_pairs.iter().enumerate() {
        for f in x.hom_from(xo) {
            let fa = ix.reindex[f].ob(a);
            let idfa = ix.fibres[x.cod(f)].id(fa);
            lifts.insert((i, f), key_of[&(i, f, idfa)]);
        }
    }
    Grothendieck { p: proj, cleavage: Cleavage { lifts, split: true }, obj_pairs, mor_pairs }
}

/// Explicit isomorphism over the base between `p` and the Grothendieck
/// construction of its opindexed category, verified.
pub fn roundtrip_equivalence_check(p: &FuncOver, cl: &Cleavage) -> bool {
    let Ok(ix) = to_opindexed(p, cl) else { return false };
    if !ix.validate().is_empty() {
        return false;
    }
    let g = grothendieck(&ix);
    let y = &*p.source;
    let x = &*p.target;
    let total = &g.p.source;
    let fibs: Vec<Fibre> = x.objects().map(|o| fibre(p, o)).collect();
    let mut omap = Vec::new();
    for a in y.objects() {
        let xo = p.ob(a);
        let la = fibs[xo].local_ob(a).expect("in fibre");
        let Some(i) = g.obj_pairs.iter().position(|&q| q == (xo, la)) else { return false };
        omap.push(i);
    }
    let mut mmap = Vec::new();
    for big in y.morphisms() {
        let f = p.mor(big);
        let a = y.dom(big);
        let lift = cl.lift(a, f);
        let idy = x.id(x.cod(f));
        let Some(h) = y
            .hom(y.cod(lift), y.cod(big))
            .iter()
            .copied()
            .find(|&h| p.mor(h) == idy && y.comp(lift, h) == big)
        else {
            return false;
        };
        let lh = fibs[x.cod(f)].local_mor(h).expect("vertical");
        let Some(i) = total
            .morphisms()
            .find(|&i| g.mor_pairs[i] == (f, lh) && total.dom(i) == omap[a])
        else {
            return false;
        };
        mmap.push(i);
    }
    let iso = FinFunctor::new(p.source.clone(), total.clone(), omap, mmap);
    iso.is_isomorphism() && iso.then(&g.p) == *p
}

/// Square `H;q = p;K` commutes, `H` preserves opcartesian maps and, when
/// both cleavages are given, chosen lifts.
pub fn check_morphism_of_opfibrations(
    h: &FinFunctor,
    k: &FinFunctor,
    p: &FuncOver,
    q: &FuncOver,
    cleavages: Option<(&Cleavage, &Cleavage)>,
) -> bool {
    if h.source != p.source || h.target != q.source || k.source != p.target || k.target != q.target {
        return false;
    }
    if !validate_functor(h).is_empty() || !validate_functor(k).is_empty() {
        return false;
    }
    if h.then(q) != p.then(k) {
        return false;
    }
    let y = &*p.source;
    if !y.morphisms().filter(|&f| is_opcartesian(p, f)).all(|f| is_opcartesian(q, h.mor(f))) {
        return false;
    }
    if let Some((cp, cq)) = cleavages {
        for (&(a, f), &l) in &cp.lifts {
            if cq.lifts.get(&(h.ob(a), k.mor(f))) != Some(&h.mor(l)) {
                return false;
            }
        }
    }
    true
}

/// Pullback of `p: Y -> X` along `k: Z -> X`, with its projection to `Z`.
pub fn pullback_opfibration(p: &FuncOver, k: &FinFunctor) -> FuncOver {
    let y = &*p.source;
    let z = &*k.source;
    let mut objs = Vec::new();
    for zo in z.objects() {
        for a in y.objects() {
            if k.ob(zo) == p.ob(a) {
                objs.push((zo, a));
            }
        }
    }
    let mut mors = Vec::new();
    for g in z.morphisms() {
        for f in y.morphisms() {
            if k.mor(g) == p.mor(f) {
                mors.push((g, f));
            }
        }
    }
    let oix = |o: (Ob, Ob)| objs.iter().position(|&q| q == o).expect("pullback object");
    let mix = |m: (Mor, Mor)| mors.iter().position(|&q| q == m);
    let total = FinCategory::from_parts(
        objs.iter().map(|&(a, b)| format!("({},{})", z.obj_name(a), y.obj_name(b))).collect(),
        mors.iter().map(|&(a, b)| format!("({},{})", z.mor_name(a), y.mor_name(b))).collect(),
        mors.iter().map(|&(g, f)| oix((z.dom(g), y.dom(f)))).collect(),
        mors.iter().map(|&(g, f)| oix((z.cod(g), y.cod(f)))).collect(),
        objs.iter().map(|&(a, b)| mix((z.id(a), y.id(b))).expect("identity")).collect(),
        |i, j| {
            let (g1, f1) = mors[i];
            let (g2, f2) = mors[j];
            mix((z.compose(g1, g2)?, y.compose(f1, f2)?))
        },
    );
    let total = Arc::new(total);
    FinFunctor::new(
        total,
        k.source.clone(),
        objs.iter().map(|&(a, _)| a).collect(),
        mors.iter().map(|&(g, _)| g).collect(),
    )
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("functors do not compose: codomain of the first is not the domain of the second")]
pub struct TypingMismatch;

pub fn compose_opfibrations(p: &FuncOver, q: &FuncOver) -> Result<FuncOver, TypingMismatch> {
    if p.target != q.source {
        return Err(TypingMismatch);
    }
    Ok(p.then(q))
}

/// Object map plus lift assignment, with no functor required.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetrofunctorData {
    pub total: Arc<FinCategory>,
    pub base: Arc<FinCategory>,
    pub p0: Vec<Ob>,
    pub phi: BTreeMap<(Ob, Mor), Mor>,
}

impl RetrofunctorData {
    pub fn from_cleavage(p: &FuncOver, cl: &Cleavage) -> Self {
        RetrofunctorData {
            total: p.source.clone(),
            base: p.target.clone(),
            p0: p.omap.clone(),
            phi: cl.lifts.clone(),
        }
    }
}

/// Both retrofunctor laws over every object and base morphism.
pub fn check_retrofunctor(r: &RetrofunctorData) -> bool {
    let y = &*r.total;
    let x = &*r.base;
    for a in y.objects() {
        for f in x.hom_from(r.p0[a]) {
            let Some(&l) = r.phi.get(&(a, f)) else { return false };
            if y.dom(l) != a || r.p0[y.cod(l)] != x.cod(f) {
                return false;
            }
        }
        if r.phi[&(a, x.id(r.p0[a]))] != y.id(a) {
            return false;
        }
    }
    for a in y.objects() {
        for f in x.hom_from(r.p0[a]) {
            let l = r.phi[&(a, f)];
            for g in x.hom_from(x.cod(f)) {
                if r.phi[&(a, x.comp(f, g))] != y.comp(l, r.phi[&(y.cod(l), g)]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Fixtures: the projection `CAT_2×CAT_2 -> CAT_2`, the indexed category
/// `IDX_1` and the non-opfibration `p_H`.
pub mod fixtures {
    use super::*;
    use crate::fincat::fixtures::{cat_1, cat_2, cat_x3};
    use crate::fincat::{product_category, product_projections};

    pub fn pi1() -> FuncOver {
        let c2 = Arc::new(cat_2());
        let prod = Arc::new(product_category(&c2, &c2));
        product_projections(&c2, &c2, &prod).0
    }

    pub fn idx_1() -> StrictOpIndexedCat {
        let base = Arc::new(cat_2());
        let f0 = Arc::new(cat_1());
        let f1 = Arc::new(cat_2());
        let u = base.mor("u").unwrap();
        let mut reindex = Vec::new();
        for m in base.morphisms() {
            if m == u {
                reindex.push(
                    FinFunctor::from_names(f0.clone(), f1.clone(), &[("*", "0")], &[]).expect("static"),
                );
            } else if base.dom(m) == 0 {
                reindex.push(FinFunctor::identity(f0.clone()));
            } else {
                reindex.push(FinFunctor::identity(f1.clone()));
            }
        }
        StrictOpIndexedCat { base, fibres: vec![f0, f1], reindex }
    }

    /// `H: a -> c` over the composite `h = f;g` of the three-object base.
    pub fn p_h() -> FuncOver {
        let y = Arc::new(FinCategory::from_spec(&["a", "c"], &[("H", "a", "c")], &[]).expect("static"));
        let x = Arc::new(cat_x3());
        FinFunctor::from_names(y, x, &[("a", "x"), ("c", "z")], &[("H", "h")]).expect("static")
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::fincat::fixtures::*;
    use crate::fincat::product_category;

    #[test]
    fn pi1_is_an_opfibration() {
        let p = pi1();
        let y = &*p.source;
        let f = y.mor("(u,id_0)").unwrap();
        assert!(is_opcartesian(&p, f));
        assert!(is_opfibration(&p).holds);
        assert!(is_preopfibration(&p).holds);
        assert!(is_fibration(&p).holds);
        for m in y.morphisms().filter(|&m| y.is_identity(m)) {
            assert!(is_opcartesian(&p, m));
        }
    }

    #[test]
    fn p_h_fails_with_witness() {
        let p = p_h();
        let r = is_opfibration(&p);
        assert!(!r.holds);
        assert_eq!(r.witness, Some(("a".into(), "f".into())));
        assert!(is_opcartesian(&p, p.source.mor("H").unwrap()));
    }

    #[test]
    fn opcartesian_implies_weakly() {
        let p = pi1();
        for f in p.source.morphisms() {
            assert!(!is_opcartesian(&p, f) || is_weakly_opcartesian(&p, f));
        }
    }

    #[test]
    fn grothendieck_of_idx_1() {
        let ix = idx_1();
        assert!(ix.validate().is_empty(), "{:?}", ix.validate());
        let g = grothendieck(&ix);
        assert_eq!(g.p.source.num_objects(), 3);
        assert_eq!(g.p.source.num_morphisms(), 6);
        assert!(validate_category(&g.p.source).is_empty());
        assert!(is_opfibration(&g.p).holds);
        assert!(g.cleavage.split_violation(&g.p).is_none());
        assert!(roundtrip_equivalence_check(&g.p, &g.cleavage));
        let back = to_opindexed(&g.p, &g.cleavage).unwrap();
        assert_eq!(back.fibres[0].num_objects(), 1);
        assert_eq!(back.fibres[1].num_morphisms(), 3);
        let u = back.base.mor("u").unwrap();
        assert_eq!(back.fibres[1].obj_name(back.reindex[u].ob(0)), "(1,0)");
    }

    #[test]
    fn cleavages() {
        let p = pi1();
        let cl = choose_cleavage(&p, true).unwrap();
        assert!(cl.split);
        let y = &*p.source;
        let a = y.obj("(0,1)").unwrap();
        assert_eq!(y.mor_name(cl.lift(a, p.target.mor("u").unwrap())), "(u,id_1)");
        assert!(roundtrip_equivalence_check(&p, &cl));
        let ix = to_opindexed(&p, &cl).unwrap();
        assert!(ix.reindex.iter().all(|r| r.omap == vec![0, 1]));
        let c1 = Arc::new(cat_1());
        let idp = FinFunctor::identity(c1);
        let cl = choose_cleavage(&idp, true).unwrap();
        assert_eq!(cl.lifts.len(), 1);
        assert!(choose_cleavage(&p_h(), false).is_err());
    }

    #[test]
    fn retrofunctors() {
        let p = pi1();
        let cl = choose_cleavage(&p, true).unwrap();
        let mut r = RetrofunctorData::from_cleavage(&p, &cl);
        assert!(check_retrofunctor(&r));
        let a = 0;
        let ida = p.target.id(p.ob(a));
        let other = p.source.hom_from(a).find(|&m| m != p.source.id(a) && p.mor(m) == ida).unwrap();
        r.phi.insert((a, ida), other);
        assert!(!check_retrofunctor(&r));
    }

    #[test]
    fn morphisms_of_opfibrations() {
        let p = pi1();
        let idy = FinFunctor::identity(p.source.clone());
        let idx = FinFunctor::identity(p.target.clone());
        assert!(check_morphism_of_opfibrations(&idy, &idx, &p, &p, None));
        let y = &p.source;
        let swap = FinFunctor::new(
            y.clone(),
            y.clone(),
            y.objects().map(|i| (i % 2) * 2 + i / 2).collect(),
            y.morphisms().map(|m| (m % 3) * 3 + m / 3).collect(),
        );
        assert!(validate_functor(&swap).is_empty());
        assert!(!check_morphism_of_opfibrations(&swap, &idx, &p, &p, None));
    }

    #[test]
    fn pullbacks_and_composites() {
        let p = pi1();
        let idx = FinFunctor::identity(p.target.clone());
        let pb = pullback_opfibration(&p, &idx);
        assert_eq!(pb.source.num_morphisms(), p.source.num_morphisms());
        assert!(is_opfibration(&pb).holds);
        let g = grothendieck(&idx_1());
        let c1 = Arc::new(cat_1());
        for (pick, n) in [("1", 2), ("0", 1)] {
            let k = FinFunctor::from_names(c1.clone(), g.p.target.clone(), &[("*", pick)], &[]).unwrap();
            let q = pullback_opfibration(&g.p, &k);
            assert!(is_opfibration(&q).holds);
            assert_eq!(q.source.num_objects(), n);
        }
        let bang = FinFunctor::to_terminal(p.target.clone(), c1.clone());
        let comp = compose_opfibrations(&p, &bang).unwrap();
        assert!(is_opfibration(&comp).holds);
        // stacked projections out of a triple product
        let c2 = Arc::new(cat_2());
        let pp = Arc::new(product_category(&product_category(&c2, &c2), &c2));
        let prod2 = p.source.clone();
        let q1 = FinFunctor::new(
            pp.clone(),
            prod2.clone(),
            pp.objects().map(|i| i / 2).collect(),
            pp.morphisms().map(|m| m / 3).collect(),
        );
        assert!(validate_functor(&q1).is_empty());
        let stacked = compose_opfibrations(&q1, &p).unwrap();
        assert!(is_opfibration(&q1).holds && is_opfibration(&stacked).holds);
        assert!(compose_opfibrations(&bang, &p).is_err());
    }

    #[test]
    fn corollary_on_fixtures() {
        for p in [pi1(), grothendieck(&idx_1()).p, p_h()] {
            if is_preopfibration(&p).holds {
                assert_eq!(is_opfibration(&p).holds, weakly_opcartesian_closed(&p));
            }
        }
    }
}
