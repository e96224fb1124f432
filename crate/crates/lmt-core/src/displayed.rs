/*!
Displayed categories as normal lax functors into profunctors, built from a
functor `p: Y -> X`; collages, path components of composable lifts,
factorisation liftings and factoring through `refine`.
*/

use std::collections::BTreeMap;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::fibration::{fibre, is_weakly_opcartesian, Fibre, FuncOver};
use crate::fincat::{FinCategory, FinFunctor, Mor, Ob};
use crate::profunctor::{check_prof_nat, compose_prof, identity_prof, refine_embed, Coend, Elem, FinProfunctor, ProfNat};

#[derive(Clone, Debug)]
pub struct DisplayedCat {
    pub base: Arc<FinCategory>,
    pub fib: Vec<Arc<FinCategory>>,
    /// `fib(dom f) ⇸ fib(cod f)` per base morphism.
    pub over: Vec<FinProfunctor>,
    /// Per composable pair: the coend `over(f);over(g)` and its image in `over(f;g)`.
    pub laxator: BTreeMap<(Mor, Mor), (Coend, Vec<Elem>)>,
}

impl DisplayedCat {
    pub fn lax(&self, f: Mor, g: Mor, x: Elem, y: Elem) -> Elem {
        let (c, m) = &self.laxator[&(f, g)];
        m[c.class(x, y)]
    }

    /// The element of `over(id_x)` playing the identity of `a`.
    pub fn unit_elem(&self, xo: Ob, a: Ob) -> Elem {
        let p = &self.over[self.base.id(xo)];
        let name = self.fib[xo].mor_name(self.fib[xo].id(a));
        p.find(a, a, name).expect("normal")
    }

    /// Normality, naturality of laxators and the lax unit/associativity laws.
    pub fn validate(&self) -> Vec<String> {
        let x = &*self.base;
        let mut out = Vec::new();
        for xo in x.objects() {
            if !same_up_to_order(&self.over[x.id(xo)], &identity_prof(&self.fib[xo])) {
                out.push(format!("over(id_{}) is not the identity profunctor", x.obj_name(xo)));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for (&(f, g), (c, m)) in &self.laxator {
            let t = ProfNat { from: c.prof.clone(), to: self.over[x.comp(f, g)].clone(), components: m.clone() };
            if !check_prof_nat(&t) {
                out.push(format!("laxator at ({},{}) is not natural", x.mor_name(f), x.mor_name(g)));
            }
        }
        for f in x.morphisms() {
            let (xd, xc) = (x.dom(f), x.cod(f));
            let p = &self.over[f];
            for e in 0..p.num_elems() {
                let (a, b, _) = p.elems[e];
                if self.lax(x.id(xd), f, self.unit_elem(xd, a), e) != e
                    || self.lax(f, x.id(xc), e, self.unit_elem(xc, b)) != e
                {
                    out.push(format!("laxator not unital at {}", p.name(e)));
                }
                for g in x.hom_from(xc) {
                    let q = &self.over[g];
                    for h in x.hom_from(x.cod(g)) {
                        let r = &self.over[h];
                        for c in self.fib[x.cod(g)].objects() {
                            for &y in q.at(b, c) {
                                for d in self.fib[x.cod(h)].objects() {
                                    for &z in r.at(c, d) {
                                        let l = self.lax(x.comp(f, g), h, self.lax(f, g, e, y), z);
                                        let rr = self.lax(f, x.comp(g, h), e, self.lax(g, h, y, z));
                                        if l != rr {
                                            out.push(format!("laxator not associative at {}", p.name(e)));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// Equal element sets by `(a, b, name)` with matching actions.
fn same_up_to_order(p: &FinProfunctor, q: &FinProfunctor) -> bool {
    if p.source != q.source || p.target != q.target || p.num_elems() != q.num_elems() {
        return false;
    }
    let mut map = Vec::new();
    for &(a, b, ref n) in &p.elems {
        match q.find(a, b, n) {
            Some(e) => map.push(e),
            None => return false,
        }
    }
    check_prof_nat(&ProfNat { from: p.clone(), to: q.clone(), components: map })
}

/// Fibres, morphisms above each base morphism and the composition laxator.
pub fn displayed_from_functor(p: &FuncOver) -> DisplayedCat {
    let y = &*p.source;
    let x = &*p.target;
    let fibs: Vec<Fibre> = x.objects().map(|o| fibre(p, o)).collect();
    let mut over = Vec::new();
    for f in x.morphisms() {
        let (src, tgt) = (&fibs[x.dom(f)], &fibs[x.cod(f)]);
        let mut elems = Vec::new();
        let mut ix = BTreeMap::new();
        for (la, &a) in src.objects.iter().enumerate() {
            for (lb, &b) in tgt.objects.iter().enumerate() {
                for &m in y.hom(a, b) {
                    if p.mor(m) == f {
                        ix.insert(m, elems.len());
                        elems.push((la, lb, y.mor_name(m).to_string()));
                    }
                }
            }
        }
        let mor_of: Vec<Mor> = elems.iter().map(|e| y.mor(&e.2).expect("own name")).collect();
        over.push(FinProfunctor::build(
            src.cat.clone(),
            tgt.cat.clone(),
            elems,
            |alpha, e| ix[&y.comp(src.morphisms[alpha], mor_of[e])],
            |e, beta| ix[&y.comp(mor_of[e], tgt.morphisms[beta])],
        ));
    }
    let mut laxator = BTreeMap::new();
    for f in x.morphisms() {
        for g in x.hom_from(x.cod(f)) {
            let c = compose_prof(&over[f], &over[g]);
            let target = &over[x.comp(f, g)];
            let m = (0..c.prof.num_elems())
                .map(|e| {
                    let (u, v) = c.rep(e);
                    let m = y.comp(y.mor(over[f].name(u)).unwrap(), y.mor(over[g].name(v)).unwrap());
                    let (a, b, _) = c.prof.elems[e];
                    target.find(a, b, y.mor_name(m)).expect("composite above f;g")
                })
                .collect();
            laxator.insert((f, g), (c, m));
        }
    }
    DisplayedCat { base: p.target.clone(), fib: fibs.into_iter().map(|f| f.cat).collect(), over, laxator }
}

/// Collage projection with the `(x, a)` and `(f, F)` decomposition.
#[derive(Clone, Debug)]
pub struct Collage {
    pub p: FuncOver,
    pub obj_pairs: Vec<(Ob, Ob)>,
    pub mor_pairs: Vec<(Mor, Elem)>,
}

pub fn collage(d: &DisplayedCat) -> Collage {
    let x = &*d.base;
    let mut obj_pairs = Vec::new();
    let mut obj_of = BTreeMap::new();
    for xo in x.objects() {
        for a in d.fib[xo].objects() {
            obj_of.insert((xo, a), obj_pairs.len());
            obj_pairs.push((xo, a));
        }
    }
    let mut mor_pairs = Vec::new();
    let mut mor_of = BTreeMap::new();
    for f in x.morphisms() {
        for e in 0..d.over[f].num_elems() {
            mor_of.insert((f, e), mor_pairs.len());
            mor_pairs.push((f, e));
        }
    }
    let names_o = obj_pairs
        .iter()
        .map(|&(xo, a)| format!("({},{})", x.obj_name(xo), d.fib[xo].obj_name(a)))
        .collect();
    let names_m = mor_pairs
        .iter()
        .map(|&(f, e)| format!("({},{})", x.mor_name(f), d.over[f].name(e)))
        .collect();
    let dom = mor_pairs.iter().map(|&(f, e)| obj_of[&(x.dom(f), d.over[f].elems[e].0)]).collect();
    let cod = mor_pairs.iter().map(|&(f, e)| obj_of[&(x.cod(f), d.over[f].elems[e].1)]).collect();
    let ident = obj_pairs.iter().map(|&(xo, a)| mor_of[&(x.id(xo), d.unit_elem(xo, a))]).collect();
    let total = FinCategory::from_parts(names_o, names_m, dom, cod, ident, |i, j| {
        let (f, u) = mor_pairs[i];
        let (g, v) = mor_pairs[j];
        let fg = x.compose(f, g)?;
        if d.over[f].elems[u].1 != d.over[g].elems[v].0 {
            return None;
        }
        Some(mor_of[&(fg, d.lax(f, g, u, v))])
    });
    let total = Arc::new(total);
    let p = FinFunctor::new(
        total,
        d.base.clone(),
        obj_pairs.iter().map(|&(xo, _)| xo).collect(),
        mor_pairs.iter().map(|&(f, _)| f).collect(),
    );
    Collage { p, obj_pairs, mor_pairs }
}

/// Explicit isomorphism over the base between `p` and the collage of `D_p`.
pub fn benabou_iso(p: &FuncOver) -> Option<FinFunctor> {
    let d = displayed_from_functor(p);
    let c = collage(&d);
    let y = &*p.source;
    let x = &*p.target;
    let fibs: Vec<Fibre> = x.objects().map(|o| fibre(p, o)).collect();
    let mut omap = Vec::new();
    for a in y.objects() {
        let xo = p.ob(a);
        let la = fibs[xo].local_ob(a)?;
        omap.push(c.obj_pairs.iter().position(|&q| q == (xo, la))?);
    }
    let mut mmap = Vec::new();
    for m in y.morphisms() {
        let f = p.mor(m);
        let (la, lb) = (fibs[x.dom(f)].local_ob(y.dom(m))?, fibs[x.cod(f)].local_ob(y.cod(m))?);
        let e = d.over[f].find(la, lb, y.mor_name(m))?;
        mmap.push(c.mor_pairs.iter().position(|&q| q == (f, e))?);
    }
    let iso = FinFunctor::new(p.source.clone(), c.p.source.clone(), omap, mmap);
    (iso.is_isomorphism() && iso.then(&c.p) == *p).then_some(iso)
}

pub fn benabou_roundtrip(p: &FuncOver) -> bool {
    benabou_iso(p).is_some()
}

/// A composable lift `(F, b, G)`.
pub type LiftPair = (Mor, Ob, Mor);

/// Path components of lifts `a -F-> b -G-> c` of `(f, g)`, linked by vertical
/// `H: b -> b'` with `F;H = F'` and `H;G' = G`.
pub fn path_components(p: &FuncOver, f: Mor, g: Mor, a: Ob, c: Ob) -> Vec<Vec<LiftPair>> {
    let y = &*p.source;
    let x = &*p.target;
    let mut objs: Vec<LiftPair> = Vec::new();
    for big_f in y.hom_from(a).filter(|&m| p.mor(m) == f) {
        let b = y.cod(big_f);
        for &big_g in y.hom(b, c) {
            if p.mor(big_g) == g {
                objs.push((big_f, b, big_g));
            }
        }
    }
    let mut uf = UnionFind::<usize>::new(objs.len());
    for (i, &(f1, b1, g1)) in objs.iter().enumerate() {
        for (j, &(f2, b2, g2)) in objs.iter().enumerate() {
            let linked = y
                .hom(b1, b2)
                .iter()
                .any(|&h| p.mor(h) == x.id(p.ob(b1)) && y.comp(f1, h) == f2 && y.comp(h, g2) == g1);
            if linked {
                uf.union(i, j);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<LiftPair>> = BTreeMap::new();
    for (i, &o) in objs.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(o);
    }
    let mut out: Vec<Vec<LiftPair>> = groups.into_values().collect();
    out.sort();
    out
}

/// A morphism and a base factorisation of its image without a unique
/// component of lifts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorisationWitness {
    pub morphism: String,
    pub f: String,
    pub g: String,
    pub components: usize,
}

pub fn factorisation_lifting_failure(p: &FuncOver) -> Option<FactorisationWitness> {
    let y = &*p.source;
    let x = &*p.target;
    for m in y.morphisms() {
        for (f, g) in x.factorisations(p.mor(m)) {
            let comps = path_components(p, f, g, y.dom(m), y.cod(m));
            let n = comps.iter().filter(|cs| cs.iter().any(|&(a, _, b)| y.comp(a, b) == m)).count();
            if n != 1 {
                return Some(FactorisationWitness {
                    morphism: y.mor_name(m).into(),
                    f: x.mor_name(f).into(),
                    g: x.mor_name(g).into(),
                    components: n,
                });
            }
        }
    }
    None
}

pub fn is_factorisation_lifting(p: &FuncOver) -> bool {
    factorisation_lifting_failure(p).is_none()
}

/// Chosen lift per `(morphism, f, g)`: the trivial pair when `f` or `g` is an
/// identity (`(id, F)` first), otherwise the smallest composable pair by name.
pub fn chosen_factorisation(p: &FuncOver, m: Mor, f: Mor, g: Mor) -> Option<(Mor, Mor)> {
    let y = &*p.source;
    let x = &*p.target;
    let (a, c) = (y.dom(m), y.cod(m));
    if x.is_identity(f) && p.mor(m) == g {
        return Some((y.id(a), m));
    }
    if x.is_identity(g) && p.mor(m) == f {
        return Some((m, y.id(c)));
    }
    path_components(p, f, g, y.dom(m), y.cod(m))
        .into_iter()
        .flatten()
        .filter(|&(a, _, b)| y.comp(a, b) == m)
        .map(|(a, _, b)| (a, b))
        .min_by(|u, v| (y.mor_name(u.0), y.mor_name(u.1)).cmp(&(y.mor_name(v.0), y.mor_name(v.1))))
}

/// First failure of the split laws for the deterministic choice of lifts.
/// Over an identity both trivial factorisations coincide up to the coend
/// relation; only `(id, F)` is required there.
pub fn split_factorisation_violation(p: &FuncOver) -> Option<String> {
    let y = &*p.source;
    let x = &*p.target;
    for m in y.morphisms() {
        let pm = p.mor(m);
        let (a, c) = (y.dom(m), y.cod(m));
        let left_trivial = chosen_factorisation(p, m, x.id(p.ob(a)), pm) != Some((y.id(a), m));
        let right_trivial =
            !x.is_identity(pm) && chosen_factorisation(p, m, pm, x.id(p.ob(c))) != Some((m, y.id(c)));
        if left_trivial || right_trivial {
            return Some(format!("trivial factorisation of {}", y.mor_name(m)));
        }
        for (f, gh) in x.factorisations(pm) {
            for (g, h) in x.factorisations(gh) {
                let Some((f1, rest)) = chosen_factorisation(p, m, f, gh) else { continue };
                let Some((g1, h1)) = chosen_factorisation(p, rest, g, h) else { continue };
                let Some((fg, h2)) = chosen_factorisation(p, m, x.comp(f, g), h) else { continue };
                let Some((f2, g2)) = chosen_factorisation(p, fg, f, g) else { continue };
                if (f1, g1, h1) != (f2, g2, h2) {
                    return Some(format!(
                        "chosen lifts of {} along ({},{},{}) do not compose",
                        y.mor_name(m),
                        x.mor_name(f),
                        x.mor_name(g),
                        x.mor_name(h)
                    ));
                }
            }
        }
    }
    None
}

/// Whether the laxator of `D_p` at `(f, g)` is a bijection.
pub fn laxator_is_iso(p: &FuncOver, f: Mor, g: Mor) -> bool {
    let d = displayed_from_functor(p);
    laxator_bijective(&d, f, g)
}

fn laxator_bijective(d: &DisplayedCat, f: Mor, g: Mor) -> bool {
    let (_, m) = &d.laxator[&(f, g)];
    let n = d.over[d.base.comp(f, g)].num_elems();
    let mut seen = vec![false; n];
    for &e in m {
        if std::mem::replace(&mut seen[e], true) {
            return false;
        }
    }
    seen.iter().all(|&s| s)
}

pub fn all_laxators_iso(p: &FuncOver) -> bool {
    let d = displayed_from_functor(p);
    let keys: Vec<(Mor, Mor)> = d.laxator.keys().copied().collect();
    keys.into_iter().all(|(f, g)| laxator_bijective(&d, f, g))
}

/// Fibre functors with `over(f) ≅ refine(F_f)` and the lifts they induce.
#[derive(Clone, Debug)]
pub struct RefineFactor {
    pub functors: Vec<FinFunctor>,
    pub isos: Vec<ProfNat>,
    /// `(a, f) ↦` morphism of `Y` recovered as the preimage of an identity.
    pub lifts: BTreeMap<(Ob, Mor), Mor>,
}

/// Represents each `over(f)(a, -)` by a universal element, then checks the
/// resulting isomorphism. `None` when some `over(f)(a, -)` is not
/// representable.
pub fn factors_through_refine(p: &FuncOver) -> Option<RefineFactor> {
    let y = &*p.source;
    let x = &*p.target;
    let d = displayed_from_functor(p);
    let fibs: Vec<Fibre> = x.objects().map(|o| fibre(p, o)).collect();
    let mut functors = Vec::new();
    let mut isos = Vec::new();
    let mut lifts = BTreeMap::new();
    for f in x.morphisms() {
        let (xd, xc) = (x.dom(f), x.cod(f));
        let (src, tgt) = (&d.fib[xd], &d.fib[xc]);
        let pf = &d.over[f];
        let mut univ = Vec::new();
        for a in src.objects() {
            let found = tgt.objects().find_map(|b0| {
                pf.at(a, b0).iter().copied().find(|&e| {
                    tgt.objects().all(|b| {
                        let mut hit = vec![false; pf.num_elems()];
                        for &h in tgt.hom(b0, b) {
                            let v = pf.right(e, h);
                            if std::mem::replace(&mut hit[v], true) {
                                return false;
                            }
                        }
                        pf.at(a, b).iter().all(|&v| hit[v])
                    })
                })
            })?;
            univ.push(found);
        }
        let omap: Vec<Ob> = univ.iter().map(|&e| pf.elems[e].1).collect();
        let mut mmap = Vec::new();
        for alpha in src.morphisms() {
            let (a, a2) = (src.dom(alpha), src.cod(alpha));
            let target = pf.left(alpha, univ[a2]);
            let k = tgt.hom(omap[a], omap[a2]).iter().copied().find(|&k| pf.right(univ[a], k) == target)?;
            mmap.push(k);
        }
        let func = FinFunctor::new(d.fib[xd].clone(), d.fib[xc].clone(), omap, mmap);
        let r = refine_embed(&func);
        let mut comps = vec![0; pf.num_elems()];
        for a in src.objects() {
            for b in tgt.objects() {
                for &h in tgt.hom(func.ob(a), b) {
                    let e = pf.right(univ[a], h);
                    comps[e] = r.find(a, b, tgt.mor_name(h))?;
                }
            }
        }
        let iso = ProfNat { from: pf.clone(), to: r, components: comps };
        if !(check_prof_nat(&iso) && iso.is_bijective()) {
            return None;
        }
        for (a, &e) in univ.iter().enumerate() {
            let m = y.mor(pf.name(e)).expect("named after Y");
            debug_assert!(is_weakly_opcartesian(p, m));
            lifts.insert((fibs[xd].objects[a], f), m);
        }
        functors.push(func);
        isos.push(iso);
    }
    Some(RefineFactor { functors, isos, lifts })
}

/// The dual: each `over(f)(-, b)` represented through the left action.
pub fn factors_through_coarsen(p: &FuncOver) -> bool {
    let d = displayed_from_functor(p);
    let x = &*d.base;
    x.morphisms().all(|f| {
        let (src, tgt) = (&d.fib[x.dom(f)], &d.fib[x.cod(f)]);
        let pf = &d.over[f];
        tgt.objects().all(|b| {
            src.objects().any(|a0| {
                pf.at(a0, b).iter().any(|&e| {
                    src.objects().all(|a| {
                        let mut hit = vec![false; pf.num_elems()];
                        for &k in src.hom(a, a0) {
                            if std::mem::replace(&mut hit[pf.left(k, e)], true) {
                                return false;
                            }
                        }
                        pf.at(a, b).iter().all(|&v| hit[v])
                    })
                })
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibration::fixtures::*;
    use crate::fibration::{grothendieck, is_opfibration, is_prefibration, is_preopfibration, weakly_opcartesian_closed};
    use crate::fincat::fixtures::*;

    #[test]
    fn displayed_counts() {
        let c2 = Arc::new(cat_2());
        let d = displayed_from_functor(&FinFunctor::identity(c2.clone()));
        assert!(d.validate().is_empty());
        let u = c2.mor("u").unwrap();
        assert_eq!(d.over[u].at(0, 0).len(), 1);
        let p = pi1();
        let d = displayed_from_functor(&p);
        assert!(d.validate().is_empty(), "{:?}", d.validate());
        assert_eq!(d.over[u].num_elems(), 3);
        let ph = p_h();
        let d = displayed_from_functor(&ph);
        assert!(d.validate().is_empty());
        let x = &ph.target;
        assert_eq!(d.over[x.mor("f").unwrap()].num_elems(), 0);
        assert_eq!(d.over[x.mor("h").unwrap()].num_elems(), 1);
    }

    #[test]
    fn collages_round_trip() {
        let c2 = Arc::new(cat_2());
        for p in [pi1(), p_h(), FinFunctor::identity(c2), grothendieck(&idx_1()).p] {
            assert!(benabou_roundtrip(&p));
        }
    }

    #[test]
    fn conduche() {
        let ph = p_h();
        let w = factorisation_lifting_failure(&ph).unwrap();
        assert_eq!((w.morphism.as_str(), w.f.as_str(), w.g.as_str(), w.components), ("H", "f", "g", 0));
        let x = &ph.target;
        let (f, g) = (x.mor("f").unwrap(), x.mor("g").unwrap());
        assert!(path_components(&ph, f, g, 0, 1).is_empty());
        assert!(!laxator_is_iso(&ph, f, g));
        assert!(is_factorisation_lifting(&pi1()));
        let p = pi1();
        for f in p.target.morphisms() {
            for g in p.target.hom_from(p.target.cod(f)) {
                assert!(laxator_is_iso(&p, f, g));
            }
        }
        let gr = grothendieck(&idx_1()).p;
        let u = gr.target.mor("u").unwrap();
        let i1 = gr.target.id(1);
        let comps = path_components(&gr, u, i1, 0, 2);
        assert_eq!(comps.len(), 1);
        assert_eq!(split_factorisation_violation(&pi1()), None);
    }

    #[test]
    fn refine_factoring() {
        let rf = factors_through_refine(&pi1()).unwrap();
        assert!(rf.functors.iter().all(|f| f.omap == vec![0, 1]));
        assert!(factors_through_refine(&p_h()).is_none());
        let g = grothendieck(&idx_1());
        let rf = factors_through_refine(&g.p).unwrap();
        let u = g.p.target.mor("u").unwrap();
        assert_eq!(rf.functors[u].omap, vec![0]);
        assert_eq!(rf.lifts, g.cleavage.lifts);
    }

    #[test]
    fn batteries() {
        let c2 = Arc::new(cat_2());
        for p in [pi1(), p_h(), FinFunctor::identity(c2), grothendieck(&idx_1()).p] {
            assert_eq!(is_factorisation_lifting(&p), all_laxators_iso(&p));
            assert_eq!(factors_through_refine(&p).is_some(), is_preopfibration(&p).holds);
            assert_eq!(factors_through_coarsen(&p), is_prefibration(&p).holds);
            if is_preopfibration(&p).holds {
                let op = is_opfibration(&p).holds;
                assert_eq!(op, is_factorisation_lifting(&p));
                assert_eq!(op, weakly_opcartesian_closed(&p));
            }
        }
    }
}
