/*!
Finite profunctors `A^op × B -> FinSet`, coend composition, the identity
profunctor, the `refine`/`coarsen` embeddings of a functor and the adjunction
between them.

Elements carry global ids. The two actions are stored separately; the
two-sided action is `act(f, e, g) = right(left(f, e), g)`.
*/

use std::collections::BTreeMap;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::fincat::{FinCategory, FinFunctor, Mor, Ob};

pub type Elem = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinProfunctor {
    pub source: Arc<FinCategory>,
    pub target: Arc<FinCategory>,
    /// `(a, b, name)` per element.
    pub elems: Vec<(Ob, Ob, String)>,
    by_pair: Vec<Vec<Elem>>,
    left: BTreeMap<(Mor, Elem), Elem>,
    right: BTreeMap<(Elem, Mor), Elem>,
}

impl FinProfunctor {
    /// Tabulates both actions. `left(f, e)` for `f: a' -> a`, `right(e, g)`
    /// for `g: b -> b'`; the closures must land in the right element sets.
    pub fn build(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        elems: Vec<(Ob, Ob, String)>,
        left: impl Fn(Mor, Elem) -> Elem,
        right: impl Fn(Elem, Mor) -> Elem,
    ) -> Self {
        let nb = target.num_objects();
        let mut by_pair = vec![Vec::new(); source.num_objects() * nb];
        for (e, &(a, b, _)) in elems.iter().enumerate() {
            by_pair[a * nb + b].push(e);
        }
        let mut lt = BTreeMap::new();
        let mut rt = BTreeMap::new();
        for (e, &(a, b, _)) in elems.iter().enumerate() {
            for f in source.hom_to(a) {
                lt.insert((f, e), left(f, e));
            }
            for g in target.hom_from(b) {
                rt.insert((e, g), right(e, g));
            }
        }
        FinProfunctor { source, target, elems, by_pair, left: lt, right: rt }
    }

    pub fn at(&self, a: Ob, b: Ob) -> &[Elem] {
        &self.by_pair[a * self.target.num_objects() + b]
    }

    pub fn num_elems(&self) -> usize {
        self.elems.len()
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.elems[e].2
    }

    pub fn left(&self, f: Mor, e: Elem) -> Elem {
        self.left[&(f, e)]
    }

    pub fn right(&self, e: Elem, g: Mor) -> Elem {
        self.right[&(e, g)]
    }

    pub fn act(&self, f: Mor, e: Elem, g: Mor) -> Elem {
        self.right(self.left(f, e), g)
    }

    /// Element of `(a, b)` with the given name.
    pub fn find(&self, a: Ob, b: Ob, name: &str) -> Option<Elem> {
        self.at(a, b).iter().copied().find(|&e| self.name(e) == name)
    }

    /// Typing, identity and functoriality failures of both actions.
    pub fn validate(&self) -> Vec<String> {
        let (sa, tb) = (&*self.source, &*self.target);
        let mut out = Vec::new();
        for (e, &(a, b, _)) in self.elems.iter().enumerate() {
            if self.left(sa.id(a), e) != e || self.right(e, tb.id(b)) != e {
                out.push(format!("identity does not act trivially on {}", self.name(e)));
            }
            for f in sa.hom_to(a) {
                let l = self.left(f, e);
                if self.elems[l].0 != sa.dom(f) || self.elems[l].1 != b {
                    out.push(format!("left action of {} on {} is mistyped", sa.mor_name(f), self.name(e)));
                    continue;
                }
                for f2 in sa.hom_to(sa.dom(f)) {
                    if self.left(f2, l) != self.left(sa.comp(f2, f), e) {
                        out.push(format!("left action not functorial at {}", self.name(e)));
                    }
                }
                for g in tb.hom_from(b) {
                    if self.right(l, g) != self.left(f, self.right(e, g)) {
                        out.push(format!("actions do not commute at {}", self.name(e)));
                    }
                }
            }
            for g in tb.hom_from(b) {
                let r = self.right(e, g);
                if self.elems[r].0 != a || self.elems[r].1 != tb.cod(g) {
                    out.push(format!("right action of {} on {} is mistyped", tb.mor_name(g), self.name(e)));
                    continue;
                }
                for g2 in tb.hom_from(tb.cod(g)) {
                    if self.right(r, g2) != self.right(e, tb.comp(g, g2)) {
                        out.push(format!("right action not functorial at {}", self.name(e)));
                    }
                }
            }
        }
        out
    }
}

/// `hom(a, b)` with pre- and post-composition.
pub fn identity_prof(a: &Arc<FinCategory>) -> FinProfunctor {
    let c = a.clone();
    let elems = c.morphisms().map(|m| (c.dom(m), c.cod(m), c.mor_name(m).to_string())).collect();
    FinProfunctor::build(a.clone(), a.clone(), elems, |f, e| a.comp(f, e), |e, g| a.comp(e, g))
}

/// `(a, b) ↦ B(Fa, b)`.
pub fn refine_embed(f: &FinFunctor) -> FinProfunctor {
    let (sa, tb) = (&f.source, &f.target);
    let mut elems = Vec::new();
    let mut mor_of = Vec::new();
    let mut ix = BTreeMap::new();
    for a in sa.objects() {
        for h in tb.hom_from(f.ob(a)) {
            ix.insert((a, h), elems.len());
            elems.push((a, tb.cod(h), tb.mor_name(h).to_string()));
            mor_of.push(h);
        }
    }
    FinProfunctor::build(
        sa.clone(),
        tb.clone(),
        elems.clone(),
        |m, e| ix[&(sa.dom(m), tb.comp(f.mor(m), mor_of[e]))],
        |e, g| ix[&(elems[e].0, tb.comp(mor_of[e], g))],
    )
}

/// `(b, a) ↦ B(b, Fa)`.
pub fn coarsen_embed(f: &FinFunctor) -> FinProfunctor {
    let (sa, tb) = (&f.source, &f.target);
    let mut elems = Vec::new();
    let mut mor_of = Vec::new();
    let mut ix = BTreeMap::new();
    for b in tb.objects() {
        for a in sa.objects() {
            for &h in tb.hom(b, f.ob(a)) {
                ix.insert((a, h), elems.len());
                elems.push((b, a, tb.mor_name(h).to_string()));
                mor_of.push(h);
            }
        }
    }
    FinProfunctor::build(
        tb.clone(),
        sa.clone(),
        elems.clone(),
        |g, e| ix[&(elems[e].1, tb.comp(g, mor_of[e]))],
        |e, m| ix[&(sa.cod(m), tb.comp(mor_of[e], f.mor(m)))],
    )
}

/// A coend composite `P;Q` with the class of every raw pair.
#[derive(Clone, Debug)]
pub struct Coend {
    pub prof: FinProfunctor,
    pub first: FinProfunctor,
    pub second: FinProfunctor,
    class_of: BTreeMap<(Elem, Elem), Elem>,
    /// Members of each class, representative first.
    pub members: Vec<Vec<(Elem, Elem)>>,
}

impl Coend {
    pub fn class(&self, p: Elem, q: Elem) -> Elem {
        self.class_of[&(p, q)]
    }

    pub fn rep(&self, e: Elem) -> (Elem, Elem) {
        self.members[e][0]
    }
}

/// Coend composite; panics if the middle categories differ or the induced
/// actions fail to be well defined on classes.
pub fn compose_prof(p: &FinProfunctor, q: &FinProfunctor) -> Coend {
    assert!(p.target == q.source, "profunctors do not share a middle category");
    let (sa, mb, tc) = (&p.source, &p.target, &q.target);
    let mut elems = Vec::new();
    let mut members: Vec<Vec<(Elem, Elem)>> = Vec::new();
    let mut class_of = BTreeMap::new();
    for a in sa.objects() {
        for c in tc.objects() {
            let mut raw = Vec::new();
            let mut pos = BTreeMap::new();
            for b in mb.objects() {
                for &x in p.at(a, b) {
                    for &y in q.at(b, c) {
                        pos.insert((x, y), raw.len());
                        raw.push((x, y));
                    }
                }
            }
            let mut uf = UnionFind::<usize>::new(raw.len());
            for b in mb.objects() {
                for &x in p.at(a, b) {
                    for g in mb.hom_from(b) {
                        let x2 = p.right(x, g);
                        for &y in q.at(mb.cod(g), c) {
                            uf.union(pos[&(x, q.left(g, y))], pos[&(x2, y)]);
                        }
                    }
                }
            }
            let mut root_class = BTreeMap::new();
            for (i, &pair) in raw.iter().enumerate() {
                let r = uf.find(i);
                let k = *root_class.entry(r).or_insert_with(|| {
                    elems.push((a, c, format!("[{}|{}]", p.name(pair.0), q.name(pair.1))));
                    members.push(Vec::new());
                    elems.len() - 1
                });
                members[k].push(pair);
                class_of.insert(pair, k);
            }
        }
    }
    let left = |f: Mor, e: Elem| {
        let (x, y) = members[e][0];
        class_of[&(p.left(f, x), y)]
    };
    let right = |e: Elem, g: Mor| {
        let (x, y) = members[e][0];
        class_of[&(x, q.right(y, g))]
    };
    let prof = FinProfunctor::build(sa.clone(), tc.clone(), elems, left, right);
    for (e, ms) in members.iter().enumerate() {
        let (a, c, _) = prof.elems[e];
        for &(x, y) in ms {
            for f in sa.hom_to(a) {
                assert_eq!(class_of[&(p.left(f, x), y)], prof.left(f, e), "left action ill defined");
            }
            for g in tc.hom_from(c) {
                assert_eq!(class_of[&(x, q.right(y, g))], prof.right(e, g), "right action ill defined");
            }
        }
    }
    Coend { prof, first: p.clone(), second: q.clone(), class_of, members }
}

/// Components between parallel profunctors, indexed by element of `from`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfNat {
    pub from: FinProfunctor,
    pub to: FinProfunctor,
    pub components: Vec<Elem>,
}

impl ProfNat {
    pub fn identity(p: &FinProfunctor) -> Self {
        ProfNat { from: p.clone(), to: p.clone(), components: (0..p.num_elems()).collect() }
    }

    pub fn apply(&self, e: Elem) -> Elem {
        self.components[e]
    }

    pub fn then(&self, other: &ProfNat) -> ProfNat {
        assert!(self.to == other.from, "transformations do not compose");
        ProfNat {
            from: self.from.clone(),
            to: other.to.clone(),
            components: self.components.iter().map(|&e| other.components[e]).collect(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.to.num_elems()];
        for &e in &self.components {
            if std::mem::replace(&mut seen[e], true) {
                return false;
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn inverse(&self) -> Option<ProfNat> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.to.num_elems()];
        for (e, &t) in self.components.iter().enumerate() {
            inv[t] = e;
        }
        Some(ProfNat { from: self.to.clone(), to: self.from.clone(), components: inv })
    }
}

/// Typing and compatibility with both actions.
pub fn check_prof_nat(t: &ProfNat) -> bool {
    let (p, q) = (&t.from, &t.to);
    if p.source != q.source || p.target != q.target || t.components.len() != p.num_elems() {
        return false;
    }
    for (e, &(a, b, _)) in p.elems.iter().enumerate() {
        let te = t.components[e];
        if te >= q.num_elems() || q.elems[te].0 != a || q.elems[te].1 != b {
            return false;
        }
        if p.source.hom_to(a).any(|f| t.components[p.left(f, e)] != q.left(f, te)) {
            return false;
        }
        if p.target.hom_from(b).any(|g| t.components[p.right(e, g)] != q.right(te, g)) {
            return false;
        }
    }
    true
}

/// `[p|q] ↦ [t(p)|q]`.
pub fn whisker_right(t: &ProfNat, src: &Coend, dst: &Coend) -> ProfNat {
    let components = (0..src.prof.num_elems())
        .map(|e| {
            let (x, y) = src.rep(e);
            dst.class(t.apply(x), y)
        })
        .collect();
    ProfNat { from: src.prof.clone(), to: dst.prof.clone(), components }
}

/// `[p|q] ↦ [p|t(q)]`.
pub fn whisker_left(t: &ProfNat, src: &Coend, dst: &Coend) -> ProfNat {
    let components = (0..src.prof.num_elems())
        .map(|e| {
            let (x, y) = src.rep(e);
            dst.class(x, t.apply(y))
        })
        .collect();
    ProfNat { from: src.prof.clone(), to: dst.prof.clone(), components }
}

/// `id;P ⇒ P`, `[f|p] ↦ f·p`.
pub fn left_unitor(c: &Coend) -> ProfNat {
    let components = (0..c.prof.num_elems())
        .map(|e| {
            let (f, x) = c.rep(e);
            c.second.left(f, x)
        })
        .collect();
    ProfNat { from: c.prof.clone(), to: c.second.clone(), components }
}

/// `P;id ⇒ P`, `[p|g] ↦ p·g`.
pub fn right_unitor(c: &Coend) -> ProfNat {
    let components = (0..c.prof.num_elems())
        .map(|e| {
            let (x, g) = c.rep(e);
            c.first.right(x, g)
        })
        .collect();
    ProfNat { from: c.prof.clone(), to: c.first.clone(), components }
}

/// `(P;Q);R ⇒ P;(Q;R)` given both bracketings, `[[p|q]|r] ↦ [p|[q|r]]`.
pub fn associator(pq_r: &Coend, pq: &Coend, p_qr: &Coend, qr: &Coend) -> ProfNat {
    let components = (0..pq_r.prof.num_elems())
        .map(|e| {
            let (s, r) = pq_r.rep(e);
            let (x, q) = pq.rep(s);
            p_qr.class(x, qr.class(q, r))
        })
        .collect();
    ProfNat { from: pq_r.prof.clone(), to: p_qr.prof.clone(), components }
}

/// `hom_A(a, a') -> (refine;coarsen)(a, a')`, `f ↦ [Ff|id]`.
pub fn adjunction_unit(f: &FinFunctor) -> (ProfNat, Coend) {
    let r = refine_embed(f);
    let c = coarsen_embed(f);
    let rc = compose_prof(&r, &c);
    let id = identity_prof(&f.source);
    let sa = &f.source;
    let tb = &f.target;
    let components = sa
        .morphisms()
        .map(|m| {
            let (a, a2) = (sa.dom(m), sa.cod(m));
            let x = r.find(a, f.ob(a2), tb.mor_name(f.mor(m))).expect("Ff in refine");
            let idn = tb.mor_name(tb.id(f.ob(a2)));
            let y = c.find(f.ob(a2), a2, idn).expect("id in coarsen");
            rc.class(x, y)
        })
        .collect();
    (ProfNat { from: id, to: rc.prof.clone(), components }, rc)
}

/// `(coarsen;refine)(b, b') -> hom_B(b, b')`, `[g|h] ↦ g;h`.
pub fn adjunction_counit(f: &FinFunctor) -> (ProfNat, Coend) {
    let r = refine_embed(f);
    let c = coarsen_embed(f);
    let cr = compose_prof(&c, &r);
    let id = identity_prof(&f.target);
    let tb = &f.target;
    let mut components = Vec::new();
    for e in 0..cr.prof.num_elems() {
        let (g, h) = cr.rep(e);
        let (gm, hm) = (tb.mor(c.name(g)).unwrap(), tb.mor(r.name(h)).unwrap());
        let image = tb.comp(gm, hm);
        // every member must agree
        for &(g2, h2) in &cr.members[e] {
            let v = tb.comp(tb.mor(c.name(g2)).unwrap(), tb.mor(r.name(h2)).unwrap());
            assert_eq!(v, image, "counit ill defined on a class");
        }
        components.push(image);
    }
    (ProfNat { from: cr.prof.clone(), to: id, components }, cr)
}

/// Pointwise outcome of the adjunction checks.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AdjunctionReport {
    pub unit_natural: bool,
    pub counit_natural: bool,
    pub triangle_refine: bool,
    pub triangle_coarsen: bool,
    pub counit_section: bool,
}

impl AdjunctionReport {
    pub fn holds(&self) -> bool {
        self.unit_natural && self.counit_natural && self.triangle_refine && self.triangle_coarsen && self.counit_section
    }
}

pub fn adjunction_report(f: &FinFunctor) -> AdjunctionReport {
    let l = refine_embed(f);
    let r = coarsen_embed(f);
    let ida = identity_prof(&f.source);
    let idb = identity_prof(&f.target);
    let (unit, lr) = adjunction_unit(f);
    let (counit, rl) = adjunction_counit(f);

    // L ⇒ id;L ⇒ (L;R);L ⇒ L;(R;L) ⇒ L;id ⇒ L
    let id_l = compose_prof(&ida, &l);
    let lr_l = compose_prof(&lr.prof, &l);
    let l_rl = compose_prof(&l, &rl.prof);
    let l_id = compose_prof(&l, &idb);
    let tri1 = left_unitor(&id_l)
        .inverse()
        .map(|lam| {
            lam.then(&whisker_right(&unit, &id_l, &lr_l))
                .then(&associator(&lr_l, &lr, &l_rl, &rl))
                .then(&whisker_left(&counit, &l_rl, &l_id))
                .then(&right_unitor(&l_id))
        })
        .is_some_and(|t| t == ProfNat::identity(&l));

    // R ⇒ R;id ⇒ R;(L;R) ⇒ (R;L);R ⇒ id;R ⇒ R
    let r_id = compose_prof(&r, &ida);
    let r_lr = compose_prof(&r, &lr.prof);
    let rl_r = compose_prof(&rl.prof, &r);
    let id_r = compose_prof(&idb, &r);
    let tri2 = right_unitor(&r_id)
        .inverse()
        .and_then(|rho| {
            let inv = associator(&rl_r, &rl, &r_lr, &lr).inverse()?;
            Some(
                rho.then(&whisker_left(&unit, &r_id, &r_lr))
                    .then(&inv)
                    .then(&whisker_right(&counit, &rl_r, &id_r))
                    .then(&left_unitor(&id_r)),
            )
        })
        .is_some_and(|t| t == ProfNat::identity(&r));

    // h ↦ [id_{Fa}|h] is a section of the counit on image hom-sets
    let tb = &f.target;
    let section = f.source.objects().all(|a| {
        let fa = f.ob(a);
        let idn = tb.mor_name(tb.id(fa));
        tb.hom_from(fa).all(|h| {
            let g = r.find(fa, a, idn).expect("identity in coarsen");
            let x = l.find(a, tb.cod(h), tb.mor_name(h)).expect("h in refine");
            counit.apply(rl.class(g, x)) == h
        })
    });

    AdjunctionReport {
        unit_natural: check_prof_nat(&unit),
        counit_natural: check_prof_nat(&counit),
        triangle_refine: tri1,
        triangle_coarsen: tri2,
        counit_section: section,
    }
}

pub fn verify_adjunction(f: &FinFunctor) -> bool {
    adjunction_report(f).holds()
}

/// `refine(F);refine(G) ⇒ refine(F;G)`, `[h|k] ↦ Gh;k`.
pub fn refine_composite_iso(f: &FinFunctor, g: &FinFunctor) -> ProfNat {
    let (rf, rg) = (refine_embed(f), refine_embed(g));
    let c = compose_prof(&rf, &rg);
    let rfg = refine_embed(&f.then(g));
    let (b, cc) = (&f.target, &g.target);
    let components = (0..c.prof.num_elems())
        .map(|e| {
            let (x, y) = c.rep(e);
            let h = b.mor(rf.name(x)).unwrap();
            let k = cc.mor(rg.name(y)).unwrap();
            rfg.find(rf.elems[x].0, c.prof.elems[e].1, cc.mor_name(cc.comp(g.mor(h), k))).expect("typed")
        })
        .collect();
    ProfNat { from: c.prof, to: rfg, components }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::fixtures::*;
    use crate::fincat::{all_functors, FinFunctor};

    fn corpus() -> Vec<Arc<FinCategory>> {
        [cat_1(), cat_2(), cat_par(), cat_01(), cat_x3(), cat_z2()].into_iter().map(Arc::new).collect()
    }

    #[test]
    fn identity_profunctors() {
        let c2 = Arc::new(cat_2());
        let p = identity_prof(&c2);
        assert!(p.validate().is_empty());
        assert_eq!(p.at(0, 1).len(), 1);
        let cp = Arc::new(cat_par());
        assert_eq!(identity_prof(&cp).at(0, 1).len(), 2);
        assert_eq!(identity_prof(&Arc::new(cat_1())).num_elems(), 1);
    }

    /// Independent closure: classes are connected components of the graph
    /// whose edges relate raw pairs differing by one middle morphism.
    fn oracle_classes(p: &FinProfunctor, q: &FinProfunctor, a: Ob, c: Ob) -> usize {
        let mut raw = Vec::new();
        for b in p.target.objects() {
            for &x in p.at(a, b) {
                for &y in q.at(b, c) {
                    raw.push((x, y));
                }
            }
        }
        let mut comp: Vec<usize> = (0..raw.len()).collect();
        loop {
            let mut changed = false;
            for i in 0..raw.len() {
                for j in 0..raw.len() {
                    let (x1, y1) = raw[i];
                    let (x2, y2) = raw[j];
                    let related = p.target.morphisms().any(|g| {
                        p.elems[x1].1 == p.target.dom(g)
                            && p.elems[x2].1 == p.target.cod(g)
                            && p.right(x1, g) == x2
                            && q.left(g, y2) == y1
                    });
                    if related && comp[i] != comp[j] {
                        let m = comp[i].min(comp[j]);
                        let old = comp[i].max(comp[j]);
                        comp.iter_mut().filter(|v| **v == old).for_each(|v| *v = m);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut roots = comp.clone();
        roots.sort();
        roots.dedup();
        roots.len()
    }

    #[test]
    fn hom_hom_collapses() {
        let c2 = Arc::new(cat_2());
        let h = identity_prof(&c2);
        let hh = compose_prof(&h, &h);
        assert_eq!(hh.prof.at(0, 1).len(), 1);
        assert_eq!(hh.members[hh.prof.at(0, 1)[0]].len(), 2);
        for c in corpus() {
            let h = identity_prof(&c);
            let hh = compose_prof(&h, &h);
            assert!(hh.prof.validate().is_empty());
            let ru = right_unitor(&hh);
            assert!(check_prof_nat(&ru) && ru.is_bijective());
            for a in c.objects() {
                for b in c.objects() {
                    assert_eq!(hh.prof.at(a, b).len(), oracle_classes(&h, &h, a, b));
                    for &e in h.at(a, b) {
                        let id = c.id(b);
                        assert_eq!(ru.apply(hh.class(e, id)), e);
                    }
                }
            }
        }
    }

    #[test]
    fn embeddings() {
        let c1 = Arc::new(cat_1());
        let c2 = Arc::new(cat_2());
        let pick0 = FinFunctor::from_names(c1.clone(), c2.clone(), &[("*", "0")], &[]).unwrap();
        let r = refine_embed(&pick0);
        assert!(r.validate().is_empty());
        assert_eq!(r.at(0, 1).iter().map(|&e| r.name(e)).collect::<Vec<_>>(), ["u"]);
        assert_eq!(r.at(0, 0).iter().map(|&e| r.name(e)).collect::<Vec<_>>(), ["id_0"]);
        let c = coarsen_embed(&pick0);
        assert!(c.validate().is_empty());
        assert!(c.at(1, 0).is_empty());
        assert_eq!(c.at(0, 0).len(), 1);
        assert_eq!(refine_embed(&FinFunctor::identity(c1.clone())), identity_prof(&c1));
    }

    #[test]
    fn unit_and_counit_values() {
        let c1 = Arc::new(cat_1());
        let c2 = Arc::new(cat_2());
        let pick0 = FinFunctor::from_names(c1, c2, &[("*", "0")], &[]).unwrap();
        let (unit, rc) = adjunction_unit(&pick0);
        let e = unit.apply(0);
        assert_eq!(rc.prof.name(e), "[id_0|id_0]");
        let (counit, cr) = adjunction_counit(&pick0);
        let x = cr.prof.at(0, 0)[0];
        assert_eq!(counit.to.name(counit.apply(x)), "id_0");
    }

    #[test]
    fn adjunction_on_corpus() {
        let cs = corpus();
        for a in &cs {
            for b in &cs {
                if a.num_objects() > 3 || b.num_objects() > 3 {
                    continue;
                }
                for f in all_functors(a, b, 64) {
                    let rep = adjunction_report(&f);
                    assert!(rep.holds(), "{rep:?}");
                }
            }
        }
    }

    #[test]
    fn associativity_and_units() {
        for c in corpus() {
            let h = identity_prof(&c);
            for f in all_functors(&c, &c, 16) {
                let r = refine_embed(&f);
                let k = coarsen_embed(&f);
                let rk = compose_prof(&r, &k);
                let kh = compose_prof(&k, &h);
                let rk_h = compose_prof(&rk.prof, &h);
                let r_kh = compose_prof(&r, &kh.prof);
                let al = associator(&rk_h, &rk, &r_kh, &kh);
                assert!(check_prof_nat(&al) && al.is_bijective());
                let lu = left_unitor(&compose_prof(&h, &r));
                assert!(check_prof_nat(&lu) && lu.is_bijective());
                let iso = refine_composite_iso(&f, &f);
                assert!(check_prof_nat(&iso) && iso.is_bijective());
            }
        }
    }

    #[test]
    fn prof_nat_checks() {
        let c = Arc::new(cat_par());
        let h = identity_prof(&c);
        assert!(check_prof_nat(&ProfNat::identity(&h)));
        let u = c.mor("u").unwrap();
        let mut comps: Vec<Elem> = (0..h.num_elems()).collect();
        comps[u] = c.id(0);
        assert!(!check_prof_nat(&ProfNat { from: h.clone(), to: h.clone(), components: comps }));
    }
}
