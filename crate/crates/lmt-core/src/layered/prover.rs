//! Bounded equality of layered terms.
//!
//! States are normal forms. Equation instances come from two places: the
//! theory's own equations (in-layer ones are matched at any position inside
//! a wire, and also hold under every boundary), and the structural schemas,
//! which are instantiated from the atoms and wires of the representative
//! being rewritten. A step replaces one side of an instance found as a
//! contiguous window of some representative of the class.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use super::diagram::{class, codiag_list, counit_list, cunit_list, diag_list, levels_of, normalize, swap_list, Atom, IWire, LDiagram, LSlice};
use super::term::{box_diagram, typecheck_term};
use super::{LTerm, LayeredError, LayeredTheory, Universe};
use crate::montheory::diagram::Diagram;
use crate::montheory::{GenId, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Prover1Config {
    /// Expanded states before giving up.
    pub budget: usize,
    /// Slices allowed beyond the larger endpoint.
    pub max_extra_slices: usize,
    /// Representatives examined per state.
    pub class_cap: usize,
}

impl Default for Prover1Config {
    fn default() -> Self {
        Prover1Config { budget: 20_000, max_extra_slices: 2, class_cap: 2_000 }
    }
}

/// A ground equation between diagrams. `internal` instances live on one
/// wire and match at any position inside a wire of their layer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Instance {
    pub name: String,
    pub lhs: LDiagram,
    pub rhs: LDiagram,
    pub internal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LStep {
    pub rule: String,
    pub forward: bool,
    pub before: Vec<LSlice>,
    pub at: usize,
    pub offset: usize,
    /// Position inside the wire, for internal instances.
    pub inner: usize,
    pub lhs: LDiagram,
    pub rhs: LDiagram,
    pub after: Vec<LSlice>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LTrace {
    pub start: LDiagram,
    pub end: LDiagram,
    pub steps: Vec<LStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LVerdict {
    Proved(LTrace),
    /// `distinct_nf` records that the structural normal forms differ.
    Unknown { explored: usize, exhausted: bool, distinct_nf: bool },
}

impl LVerdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, LVerdict::Proved(_))
    }
}

fn mk(u: &Universe, dom: Vec<IWire>, slices: Vec<LSlice>) -> Option<LDiagram> {
    let lv = levels_of(u, &dom, &slices)?;
    let cod = lv.last().cloned().expect("levels are non-empty");
    Some(LDiagram { dom, cod, slices })
}

fn inst(u: &Universe, name: &str, dom: Vec<IWire>, l: Vec<LSlice>, r: Vec<LSlice>) -> Option<Instance> {
    let lhs = mk(u, dom.clone(), l)?;
    let rhs = mk(u, dom, r)?;
    if lhs.cod != rhs.cod || lhs.slices == rhs.slices {
        return None;
    }
    Some(Instance { name: name.to_string(), lhs: normalize(u, &lhs), rhs: normalize(u, &rhs), internal: false })
}

fn from_term_diagram(u: &Universe, layer: usize, d: &Diagram) -> Option<LDiagram> {
    let w = |word: &Word| -> Option<IWire> {
        let word = word
            .iter()
            .map(|&c| u.prime(&super::Prime { base: layer, colour: c, path: Vec::new() }))
            .collect::<Option<Word>>()?;
        Some(IWire { layer, word })
    };
    let slices = d
        .slices
        .iter()
        .map(|&(o, g)| Some((0, Atom::Int { inner: o, gen: u.base_gen(layer, g)? })))
        .collect::<Option<Vec<_>>>()?;
    Some(LDiagram { dom: vec![w(&d.dom)?], cod: vec![w(&d.cod)?], slices })
}

/// Box images of an internal diagram along every path the universe holds.
fn box_closure(u: &Universe, d: LDiagram) -> Vec<LDiagram> {
    let mut out = vec![d];
    let mut i = 0;
    while i < out.len() {
        let layer = out[i].dom[0].layer;
        for (f, &(bd, _)) in u.bnd.iter().enumerate() {
            if bd == layer {
                if let Some(b) = box_diagram(u, f, &out[i]) {
                    out.push(b);
                }
            }
        }
        i += 1;
    }
    out
}

/// The theory's own equations as instances.
pub fn static_instances(th: &LayeredTheory) -> Vec<Instance> {
    let u = &th.universe;
    let mut out = Vec::new();
    let push_internal = |out: &mut Vec<Instance>, name: String, l: LDiagram, r: LDiagram| {
        for (a, b) in box_closure(u, l).into_iter().zip(box_closure(u, r)) {
            let (a, b) = (normalize(u, &a), normalize(u, &b));
            if a != b {
                out.push(Instance { name: name.clone(), lhs: a, rhs: b, internal: true });
            }
        }
    };
    for (layer, lt) in th.layer_theories.iter().enumerate() {
        for e in lt.instances() {
            let (Some(l), Some(r)) = (
                from_term_diagram(u, layer, &Diagram::from_term(&lt.sig, &e.lhs)),
                from_term_diagram(u, layer, &Diagram::from_term(&lt.sig, &e.rhs)),
            ) else {
                continue;
            };
            push_internal(&mut out, format!("{}.{}", th.sig.layers[layer], e.name), l, r);
        }
    }
    for e in &th.e1 {
        let (Ok(a), Ok(b)) = (typecheck_term(th, &e.lhs), typecheck_term(th, &e.rhs)) else { continue };
        if a.internal && b.internal {
            push_internal(&mut out, e.name.clone(), a.diagram, b.diagram);
        } else {
            let (l, r) = (normalize(u, &a.diagram), normalize(u, &b.diagram));
            if l != r {
                out.push(Instance { name: e.name.clone(), lhs: l, rhs: r, internal: false });
            }
        }
    }
    out
}

fn splits(w: &[usize]) -> impl Iterator<Item = (Word, Word)> + '_ {
    (0..=w.len()).map(move |i| (w[..i].to_vec(), w[i..].to_vec()))
}

fn replace_at(w: &[usize], j: usize, from: &[usize], to: &[usize]) -> Option<Word> {
    if w.get(j..j + from.len())? != from {
        return None;
    }
    Some([&w[..j], to, &w[j + from.len()..]].concat())
}

/// Structural schema instances relevant to one representative.
pub fn dynamic_instances(th: &LayeredTheory, dom: &[IWire], rep: &[LSlice]) -> Vec<Instance> {
    let mut out = Vec::new();
    if !th.structural {
        return out;
    }
    let u = &th.universe;
    let Some(levels) = levels_of(u, dom, rep) else { return out };
    let atoms: Vec<(Vec<IWire>, Vec<IWire>, &Atom)> = rep
        .iter()
        .enumerate()
        .map(|(i, (o, a))| {
            let (n, m) = a.arity();
            (levels[i][*o..*o + n].to_vec(), levels[i + 1][*o..*o + m].to_vec(), a)
        })
        .collect();
    let mut wires: Vec<IWire> = levels.iter().flatten().cloned().collect::<HashSet<_>>().into_iter().collect();
    wires.sort();
    let mut pairs: Vec<(IWire, IWire)> =
        levels.iter().flat_map(|l| l.windows(2).map(|p| (p[0].clone(), p[1].clone()))).collect::<HashSet<_>>().into_iter().collect();
    pairs.sort();
    let mut add = |x: Option<Instance>| out.extend(x);
    let w1 = |l: usize, w: &Word| IWire { layer: l, word: w.clone() };
    let ints: Vec<(usize, GenId, &IWire)> = atoms
        .iter()
        .filter_map(|(ins, _, a)| match a {
            Atom::Int { inner, gen } => Some((*inner, *gen, &ins[0])),
            _ => None,
        })
        .collect();

    if th.symmetric {
        for (a, b) in &pairs {
            add(inst(u, "swap-inv", vec![a.clone(), b.clone()], vec![(0, Atom::Swap(a.clone(), b.clone())), (0, Atom::Swap(b.clone(), a.clone()))], vec![]));
        }
        for (ins, outs, a) in &atoms {
            if let Atom::Swap(x, y) = a {
                add(inst(u, "swap-inv", vec![y.clone(), x.clone()], vec![(0, Atom::Swap(y.clone(), x.clone())), (0, (*a).clone())], vec![]));
            }
            let s = LDiagram { dom: ins.clone(), cod: outs.clone(), slices: vec![(0, (*a).clone())] };
            for w in &wires {
                let iw = LDiagram::identity(std::slice::from_ref(w));
                let ws = std::slice::from_ref(w);
                for (l, r) in [
                    (s.tensor(&iw).then(&swap_list(outs, ws)), swap_list(ins, ws).then(&iw.tensor(&s))),
                    (iw.tensor(&s).then(&swap_list(ws, outs)), swap_list(ws, ins).then(&s.tensor(&iw))),
                ] {
                    if let (Some(l), Some(r)) = (l, r) {
                        add(inst(u, "swap-nat", l.dom.clone(), l.slices, r.slices));
                    }
                }
            }
        }
    }

    if th.mode.opfibrational() {
        for (ins, outs, a) in &atoms {
            let s = LDiagram { dom: ins.clone(), cod: outs.clone(), slices: vec![(0, (*a).clone())] };
            if let (Some(l), Some(r)) = (s.then(&diag_list(outs)), diag_list(ins).then(&s.tensor(&s))) {
                add(inst(u, "diag-nat", l.dom.clone(), l.slices, r.slices));
            }
            if let (Some(l), r) = (s.then(&counit_list(outs)), counit_list(ins)) {
                add(inst(u, "diag-nat", l.dom.clone(), l.slices, r.slices));
            }
            match a {
                Atom::Monoid { layer, a: x, b: y } => {
                    let l = *layer;
                    for (p, q) in splits(x) {
                        let dom = vec![w1(l, &p), w1(l, &q), w1(l, y)];
                        let pq_y = [q.clone(), y.clone()].concat();
                        add(inst(
                            u,
                            "monoid-assoc",
                            dom,
                            vec![(0, Atom::Monoid { layer: l, a: p.clone(), b: q.clone() }), (0, (*a).clone())],
                            vec![(1, Atom::Monoid { layer: l, a: q.clone(), b: y.clone() }), (0, Atom::Monoid { layer: l, a: p, b: pq_y })],
                        ));
                    }
                    for (q, r) in splits(y) {
                        let dom = vec![w1(l, x), w1(l, &q), w1(l, &r)];
                        let xq = [x.clone(), q.clone()].concat();
                        add(inst(
                            u,
                            "monoid-assoc",
                            dom,
                            vec![(0, Atom::Monoid { layer: l, a: x.clone(), b: q.clone() }), (0, Atom::Monoid { layer: l, a: xq, b: r.clone() })],
                            vec![(1, Atom::Monoid { layer: l, a: q, b: r }), (0, (*a).clone())],
                        ));
                    }
                    if x.is_empty() {
                        add(inst(u, "monoid-unit", vec![w1(l, y)], vec![(0, Atom::MonoidUnit { layer: l }), (0, (*a).clone())], vec![]));
                    }
                    if y.is_empty() {
                        add(inst(u, "monoid-unit", vec![w1(l, x)], vec![(1, Atom::MonoidUnit { layer: l }), (0, (*a).clone())], vec![]));
                    }
                    for (f, &(bd, bc)) in u.bnd.iter().enumerate() {
                        if bd == l {
                            add(ext_monoidal(u, f, x, y));
                        }
                        if bc == l {
                            if let (Some(p), Some(q)) = (u.unbox_word(f, x), u.unbox_word(f, y)) {
                                add(ext_monoidal(u, f, &p, &q));
                            }
                        }
                    }
                    for &(j, g, w) in &ints {
                        if w.layer != l {
                            continue;
                        }
                        for i in monoid_slides(u, l, x, y, j, g) {
                            add(Some(i));
                        }
                    }
                }
                Atom::MonoidUnit { layer } => {
                    for (f, &(bd, bc)) in u.bnd.iter().enumerate() {
                        if bd == *layer || bc == *layer {
                            add(ext_unit(u, f));
                        }
                    }
                }
                Atom::ExtGen { f, word } => {
                    for (p, q) in splits(word) {
                        add(ext_monoidal(u, *f, &p, &q));
                    }
                    if word.is_empty() {
                        add(ext_unit(u, *f));
                    }
                    for &(j, g, w) in &ints {
                        // the internal slice before the boundary
                        if w.layer == u.bnd[*f].0 {
                            if let Some(pre) = replace_at(word, j, &u.sig.gen(g).cod, &u.sig.gen(g).dom) {
                                add(ext_slide(u, *f, &pre, j, g));
                            }
                        }
                        // or after it, boxed
                        if let Some(g0) = u.unbox_gen(*f, g) {
                            add(ext_slide(u, *f, word, j, g0));
                        }
                    }
                }
                Atom::Diag(w) => {
                    let d = Atom::Diag(w.clone());
                    add(inst(u, "diag-coassoc", vec![w.clone()], vec![(0, d.clone()), (0, d.clone())], vec![(0, d.clone()), (1, d.clone())]));
                }
                _ => {}
            }
        }
        for w in &wires {
            add(inst(u, "monoid-unit", vec![w.clone()], vec![(0, Atom::MonoidUnit { layer: w.layer }), (0, Atom::Monoid { layer: w.layer, a: vec![], b: w.word.clone() })], vec![]));
            add(inst(u, "monoid-unit", vec![w.clone()], vec![(1, Atom::MonoidUnit { layer: w.layer }), (0, Atom::Monoid { layer: w.layer, a: w.word.clone(), b: vec![] })], vec![]));
            let d = Atom::Diag(w.clone());
            add(inst(u, "diag-counit", vec![w.clone()], vec![(0, d.clone()), (0, Atom::DiagCounit(w.clone()))], vec![]));
            add(inst(u, "diag-counit", vec![w.clone()], vec![(0, d), (1, Atom::DiagCounit(w.clone()))], vec![]));
        }
    }

    if th.mode.fibrational() {
        for (ins, outs, a) in &atoms {
            let s = LDiagram { dom: ins.clone(), cod: outs.clone(), slices: vec![(0, (*a).clone())] };
            if let (Some(l), Some(r)) = (codiag_list(ins).then(&s), s.tensor(&s).then(&codiag_list(outs))) {
                add(inst(u, "codiag-nat", l.dom.clone(), l.slices, r.slices));
            }
            if let (Some(l), r) = (cunit_list(ins).then(&s), cunit_list(outs)) {
                add(inst(u, "codiag-nat", vec![], l.slices, r.slices));
            }
            match a {
                Atom::Comonoid { layer, a: x, b: y } => {
                    let l = *layer;
                    let xy = [x.clone(), y.clone()].concat();
                    for (p, q) in splits(x) {
                        let qy = [q.clone(), y.clone()].concat();
                        add(inst(
                            u,
                            "comonoid-coassoc",
                            vec![w1(l, &xy)],
                            vec![(0, (*a).clone()), (0, Atom::Comonoid { layer: l, a: p.clone(), b: q.clone() })],
                            vec![(0, Atom::Comonoid { layer: l, a: p, b: qy }), (1, Atom::Comonoid { layer: l, a: q, b: y.clone() })],
                        ));
                    }
                    for (q, r) in splits(y) {
                        let xq = [x.clone(), q.clone()].concat();
                        add(inst(
                            u,
                            "comonoid-coassoc",
                            vec![w1(l, &xy)],
                            vec![(0, Atom::Comonoid { layer: l, a: xq, b: r.clone() }), (0, Atom::Comonoid { layer: l, a: x.clone(), b: q.clone() })],
                            vec![(0, (*a).clone()), (1, Atom::Comonoid { layer: l, a: q, b: r })],
                        ));
                    }
                    if x.is_empty() {
                        add(inst(u, "comonoid-counit", vec![w1(l, y)], vec![(0, (*a).clone()), (0, Atom::Counit { layer: l })], vec![]));
                    }
                    if y.is_empty() {
                        add(inst(u, "comonoid-counit", vec![w1(l, x)], vec![(0, (*a).clone()), (1, Atom::Counit { layer: l })], vec![]));
                    }
                    for (f, &(bd, bc)) in u.bnd.iter().enumerate() {
                        if bd == l {
                            add(extop_monoidal(u, f, x, y));
                        }
                        if bc == l {
                            if let (Some(p), Some(q)) = (u.unbox_word(f, x), u.unbox_word(f, y)) {
                                add(extop_monoidal(u, f, &p, &q));
                            }
                        }
                    }
                    for &(j, g, w) in &ints {
                        if w.layer != l {
                            continue;
                        }
                        for i in comonoid_slides(u, l, x, y, j, g) {
                            add(Some(i));
                        }
                    }
                }
                Atom::Counit { layer } => {
                    for (f, &(bd, bc)) in u.bnd.iter().enumerate() {
                        if bd == *layer || bc == *layer {
                            add(extop_unit(u, f));
                        }
                    }
                }
                Atom::ExtGenOp { f, word } => {
                    for (p, q) in splits(word) {
                        add(extop_monoidal(u, *f, &p, &q));
                    }
                    if word.is_empty() {
                        add(extop_unit(u, *f));
                    }
                    for &(j, g, w) in &ints {
                        // the internal slice after the boundary
                        if w.layer == u.bnd[*f].0 {
                            add(extop_slide(u, *f, word, j, g));
                        }
                        // or before it, boxed
                        if let Some(g0) = u.unbox_gen(*f, g) {
                            if let Some(pre) = replace_at(word, j, &u.sig.gen(g0).cod, &u.sig.gen(g0).dom) {
                                add(extop_slide(u, *f, &pre, j, g0));
                            }
                        }
                    }
                }
                Atom::Codiag(w) => {
                    let c = Atom::Codiag(w.clone());
                    add(inst(u, "codiag-assoc", vec![w.clone(); 3], vec![(0, c.clone()), (0, c.clone())], vec![(1, c.clone()), (0, c.clone())]));
                }
                _ => {}
            }
        }
        for w in &wires {
            let eps = IWire { layer: w.layer, word: vec![] };
            if *w == eps {
                add(inst(u, "comonoid-counit", vec![w.clone()], vec![(0, Atom::Comonoid { layer: w.layer, a: vec![], b: vec![] }), (0, Atom::Counit { layer: w.layer })], vec![]));
            }
            for at in [0, 1] {
                let ab = if at == 0 { (vec![], w.word.clone()) } else { (w.word.clone(), vec![]) };
                add(inst(
                    u,
                    "comonoid-counit",
                    vec![w.clone()],
                    vec![(0, Atom::Comonoid { layer: w.layer, a: ab.0, b: ab.1 }), (at, Atom::Counit { layer: w.layer })],
                    vec![],
                ));
            }
            let c = Atom::Codiag(w.clone());
            add(inst(u, "codiag-unit", vec![w.clone()], vec![(0, Atom::CodiagUnit(w.clone())), (0, c.clone())], vec![]));
            add(inst(u, "codiag-unit", vec![w.clone()], vec![(1, Atom::CodiagUnit(w.clone())), (0, c)], vec![]));
        }
    }
    let mut seen = HashSet::new();
    out.retain(|i| seen.insert((i.name.clone(), i.lhs.clone(), i.rhs.clone())));
    out
}

fn ext_monoidal(u: &Universe, f: usize, a: &Word, b: &Word) -> Option<Instance> {
    let (bd, bc) = u.bnd[f];
    let (fa, fb) = (u.box_word(f, a)?, u.box_word(f, b)?);
    let ab = [a.clone(), b.clone()].concat();
    inst(
        u,
        "ext-monoidal",
        vec![IWire { layer: bd, word: a.clone() }, IWire { layer: bd, word: b.clone() }],
        vec![(0, Atom::Monoid { layer: bd, a: a.clone(), b: b.clone() }), (0, Atom::ExtGen { f, word: ab })],
        vec![(0, Atom::ExtGen { f, word: a.clone() }), (1, Atom::ExtGen { f, word: b.clone() }), (0, Atom::Monoid { layer: bc, a: fa, b: fb })],
    )
}

fn ext_unit(u: &Universe, f: usize) -> Option<Instance> {
    let (bd, bc) = u.bnd[f];
    inst(u, "ext-monoidal", vec![], vec![(0, Atom::MonoidUnit { layer: bd }), (0, Atom::ExtGen { f, word: vec![] })], vec![(0, Atom::MonoidUnit { layer: bc })])
}

fn extop_monoidal(u: &Universe, f: usize, a: &Word, b: &Word) -> Option<Instance> {
    let (bd, bc) = u.bnd[f];
    let (fa, fb) = (u.box_word(f, a)?, u.box_word(f, b)?);
    let ab = [a.clone(), b.clone()].concat();
    let fab = [fa.clone(), fb.clone()].concat();
    inst(
        u,
        "extop-monoidal",
        vec![IWire { layer: bc, word: fab }],
        vec![(0, Atom::ExtGenOp { f, word: ab }), (0, Atom::Comonoid { layer: bd, a: a.clone(), b: b.clone() })],
        vec![(0, Atom::Comonoid { layer: bc, a: fa, b: fb }), (0, Atom::ExtGenOp { f, word: a.clone() }), (1, Atom::ExtGenOp { f, word: b.clone() })],
    )
}

fn extop_unit(u: &Universe, f: usize) -> Option<Instance> {
    let (bd, bc) = u.bnd[f];
    inst(
        u,
        "extop-monoidal",
        vec![IWire { layer: bc, word: vec![] }],
        vec![(0, Atom::ExtGenOp { f, word: vec![] }), (0, Atom::Counit { layer: bd })],
        vec![(0, Atom::Counit { layer: bc })],
    )
}

/// `g` at `j` on `pre:ω`, then `ext(f)`, equals `ext(f)` then `f(g)`.
fn ext_slide(u: &Universe, f: usize, pre: &Word, j: usize, g: GenId) -> Option<Instance> {
    let gen = u.sig.gen(g);
    let post = replace_at(pre, j, &gen.dom, &gen.cod)?;
    let fg = u.box_gen(f, g)?;
    inst(
        u,
        "ext-slide",
        vec![IWire { layer: u.bnd[f].0, word: pre.clone() }],
        vec![(0, Atom::Int { inner: j, gen: g }), (0, Atom::ExtGen { f, word: post })],
        vec![(0, Atom::ExtGen { f, word: pre.clone() }), (0, Atom::Int { inner: j, gen: fg })],
    )
}

/// `extop(f)` then `g` at `j` equals `f(g)` then `extop(f)`.
fn extop_slide(u: &Universe, f: usize, pre: &Word, j: usize, g: GenId) -> Option<Instance> {
    let gen = u.sig.gen(g);
    let post = replace_at(pre, j, &gen.dom, &gen.cod)?;
    let fg = u.box_gen(f, g)?;
    inst(
        u,
        "extop-slide",
        vec![IWire { layer: u.bnd[f].1, word: u.box_word(f, pre)? }],
        vec![(0, Atom::ExtGenOp { f, word: pre.clone() }), (0, Atom::Int { inner: j, gen: g })],
        vec![(0, Atom::Int { inner: j, gen: fg }), (0, Atom::ExtGenOp { f, word: post })],
    )
}

/// Slides of `g` at `j` through `monoid(x, y)`, reading the monoid as the
/// one before or after the slice, on either input.
fn monoid_slides(u: &Universe, l: usize, x: &Word, y: &Word, j: usize, g: GenId) -> Vec<Instance> {
    let gen = u.sig.gen(g);
    let w = |word: &Word| IWire { layer: l, word: word.clone() };
    let m = |a: &Word, b: &Word| Atom::Monoid { layer: l, a: a.clone(), b: b.clone() };
    let int = |inner| Atom::Int { inner, gen: g };
    let mut out = Vec::new();
    if let Some(pre) = replace_at(x, j, &gen.cod, &gen.dom) {
        out.extend(inst(u, "monoid-slide", vec![w(&pre), w(y)], vec![(0, int(j)), (0, m(x, y))], vec![(0, m(&pre, y)), (0, int(j))]));
    }
    if let Some(pre) = replace_at(y, j, &gen.cod, &gen.dom) {
        out.extend(inst(u, "monoid-slide", vec![w(x), w(&pre)], vec![(1, int(j)), (0, m(x, y))], vec![(0, m(x, &pre)), (0, int(x.len() + j))]));
    }
    if j + gen.dom.len() <= x.len() {
        if let Some(post) = replace_at(x, j, &gen.dom, &gen.cod) {
            out.extend(inst(u, "monoid-slide", vec![w(x), w(y)], vec![(0, int(j)), (0, m(&post, y))], vec![(0, m(x, y)), (0, int(j))]));
        }
    }
    if let Some(k) = j.checked_sub(x.len()) {
        if let Some(post) = replace_at(y, k, &gen.dom, &gen.cod) {
            out.extend(inst(u, "monoid-slide", vec![w(x), w(y)], vec![(1, int(k)), (0, m(x, &post))], vec![(0, m(x, y)), (0, int(j))]));
        }
    }
    out
}

/// The dual slides through `comonoid(x, y)`.
fn comonoid_slides(u: &Universe, l: usize, x: &Word, y: &Word, j: usize, g: GenId) -> Vec<Instance> {
    let gen = u.sig.gen(g);
    let w = |word: Word| IWire { layer: l, word };
    let c = |a: &Word, b: &Word| Atom::Comonoid { layer: l, a: a.clone(), b: b.clone() };
    let int = |inner| Atom::Int { inner, gen: g };
    let xy = [x.clone(), y.clone()].concat();
    let mut out = Vec::new();
    if let Some(post) = replace_at(x, j, &gen.dom, &gen.cod) {
        out.extend(inst(u, "comonoid-slide", vec![w(xy.clone())], vec![(0, c(x, y)), (0, int(j))], vec![(0, int(j)), (0, c(&post, y))]));
    }
    if let Some(post) = replace_at(y, j, &gen.dom, &gen.cod) {
        out.extend(inst(u, "comonoid-slide", vec![w(xy.clone())], vec![(0, c(x, y)), (1, int(j))], vec![(0, int(x.len() + j)), (0, c(x, &post))]));
    }
    if j + gen.cod.len() <= x.len() {
        if let Some(pre) = replace_at(x, j, &gen.cod, &gen.dom) {
            let d = w([pre.clone(), y.clone()].concat());
            out.extend(inst(u, "comonoid-slide", vec![d], vec![(0, c(&pre, y)), (0, int(j))], vec![(0, int(j)), (0, c(x, y))]));
        }
    }
    if let Some(k) = j.checked_sub(x.len()) {
        if let Some(pre) = replace_at(y, k, &gen.cod, &gen.dom) {
            let d = w([x.clone(), pre.clone()].concat());
            out.extend(inst(u, "comonoid-slide", vec![d], vec![(0, c(x, &pre)), (1, int(k))], vec![(0, int(j)), (0, c(x, y))]));
        }
    }
    out
}

/// Static rules with an index by first atom.
pub struct LRules<'a> {
    th: &'a LayeredTheory,
    pub statics: Vec<Instance>,
    by_gen: HashMap<GenId, Vec<(usize, bool)>>,
    by_atom: HashMap<Atom, Vec<(usize, bool)>>,
    empty: Vec<(usize, bool)>,
}

fn side(i: &Instance, fwd: bool) -> (&LDiagram, &LDiagram) {
    if fwd {
        (&i.lhs, &i.rhs)
    } else {
        (&i.rhs, &i.lhs)
    }
}

/// Whether `from` occurs at window `at`, wire `k`, inner position `j`.
fn matches_at(levels: &[Vec<IWire>], rep: &[LSlice], ins: &Instance, from: &LDiagram, at: usize, k: usize, j: usize) -> bool {
    let n = from.slices.len();
    if at + n > rep.len() || at >= levels.len() {
        return false;
    }
    let lv = &levels[at];
    if ins.internal {
        let (Some(w), Some(p)) = (lv.get(k), from.dom.first()) else { return false };
        if w.layer != p.layer || w.word.get(j..j + p.word.len()) != Some(&p.word[..]) {
            return false;
        }
        from.slices.iter().zip(&rep[at..at + n]).all(|((_, a), (o2, b))| {
            *o2 == k
                && match (a, b) {
                    (Atom::Int { inner: i1, gen: g1 }, Atom::Int { inner: i2, gen: g2 }) => g1 == g2 && i1 + j == *i2,
                    _ => false,
                }
        })
    } else {
        if j != 0 || k + from.dom.len() > lv.len() || lv[k..k + from.dom.len()] != from.dom[..] {
            return false;
        }
        from.slices.iter().zip(&rep[at..at + n]).all(|((o, a), (o2, b))| o + k == *o2 && a == b)
    }
}

fn rewrite(rep: &[LSlice], ins: &Instance, from: &LDiagram, to: &LDiagram, at: usize, k: usize, j: usize) -> Vec<LSlice> {
    let mut out = rep[..at].to_vec();
    out.extend(to.slices.iter().map(|(o, a)| match a {
        Atom::Int { inner, gen } if ins.internal => (k, Atom::Int { inner: inner + j, gen: *gen }),
        other => (o + k, other.clone()),
    }));
    out.extend_from_slice(&rep[at + from.slices.len()..]);
    out
}

impl<'a> LRules<'a> {
    pub fn new(th: &'a LayeredTheory) -> Self {
        let statics = static_instances(th);
        let mut by_gen: HashMap<GenId, Vec<(usize, bool)>> = HashMap::new();
        let mut by_atom: HashMap<Atom, Vec<(usize, bool)>> = HashMap::new();
        let mut empty = Vec::new();
        for (i, ins) in statics.iter().enumerate() {
            for fwd in [true, false] {
                let (from, _) = side(ins, fwd);
                match from.slices.first() {
                    None => empty.push((i, fwd)),
                    Some((_, Atom::Int { gen, .. })) if ins.internal => by_gen.entry(*gen).or_default().push((i, fwd)),
                    Some((_, a)) => by_atom.entry(a.clone()).or_default().push((i, fwd)),
                }
            }
        }
        LRules { th, statics, by_gen, by_atom, empty }
    }

    /// Every one-step rewrite, deduplicated by normal form.
    pub fn neighbours(&self, state: &LDiagram, max_slices: usize, cfg: &Prover1Config) -> Vec<(LDiagram, LStep)> {
        let u = &self.th.universe;
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for rep in class(u, &state.slices, cfg.class_cap) {
            let Some(levels) = levels_of(u, &state.dom, &rep) else { continue };
            let dynamic = dynamic_instances(self.th, &state.dom, &rep);
            let mut try_at = |ins: &Instance, fwd: bool, at: usize, k: usize, j: usize| {
                let (from, to) = side(ins, fwd);
                if rep.len() + to.slices.len() > max_slices + from.slices.len() || !matches_at(&levels, &rep, ins, from, at, k, j) {
                    return;
                }
                let after = rewrite(&rep, ins, from, to, at, k, j);
                let nd = normalize(u, &LDiagram { dom: state.dom.clone(), cod: state.cod.clone(), slices: after.clone() });
                if seen.insert(nd.slices.clone()) {
                    let step = LStep {
                        rule: ins.name.clone(),
                        forward: fwd,
                        before: rep.clone(),
                        at,
                        offset: k,
                        inner: j,
                        lhs: ins.lhs.clone(),
                        rhs: ins.rhs.clone(),
                        after,
                    };
                    out.push((nd, step));
                }
            };
            let all_positions = |ins: &Instance, fwd: bool, try_at: &mut dyn FnMut(&Instance, bool, usize, usize, usize)| {
                let (from, _) = side(ins, fwd);
                match from.slices.first() {
                    Some((o, a)) => {
                        for (at, (o2, b)) in rep.iter().enumerate() {
                            if ins.internal {
                                if let (Atom::Int { inner: i1, gen: g1 }, Atom::Int { inner: i2, gen: g2 }) = (a, b) {
                                    if g1 == g2 && i2 >= i1 {
                                        try_at(ins, fwd, at, *o2, i2 - i1);
                                    }
                                }
                            } else if a == b && o2 >= o {
                                try_at(ins, fwd, at, o2 - o, 0);
                            }
                        }
                    }
                    None => {
                        for at in 0..=rep.len() {
                            for k in 0..levels[at].len() + 1 {
                                if ins.internal {
                                    if let Some(w) = levels[at].get(k) {
                                        for j in 0..=w.word.len() {
                                            try_at(ins, fwd, at, k, j);
                                        }
                                    }
                                } else {
                                    try_at(ins, fwd, at, k, 0);
                                }
                            }
                        }
                    }
                }
            };
            for ins in &dynamic {
                for fwd in [true, false] {
                    all_positions(ins, fwd, &mut try_at);
                }
            }
            let mut cands: Vec<(usize, bool)> = self.empty.clone();
            for (_, a) in &rep {
                if let Atom::Int { gen, .. } = a {
                    cands.extend(self.by_gen.get(gen).into_iter().flatten().copied());
                }
                cands.extend(self.by_atom.get(a).into_iter().flatten().copied());
            }
            cands.sort();
            cands.dedup();
            for (i, fwd) in cands {
                all_positions(&self.statics[i], fwd, &mut try_at);
            }
        }
        out
    }
}

type Parents = HashMap<Vec<LSlice>, Option<(Vec<LSlice>, LStep)>>;

fn path_to(par: &Parents, end: &[LSlice]) -> Vec<LStep> {
    let mut steps = Vec::new();
    let mut cur = end.to_vec();
    while let Some(Some((prev, step))) = par.get(&cur) {
        steps.push(step.clone());
        cur = prev.clone();
    }
    steps.reverse();
    steps
}

fn reversed(s: &LStep) -> LStep {
    LStep { forward: !s.forward, before: s.after.clone(), after: s.before.clone(), ..s.clone() }
}

pub fn prove_diagrams1(th: &LayeredTheory, a: &LDiagram, b: &LDiagram, cfg: &Prover1Config) -> LVerdict {
    let u = &th.universe;
    let (a, b) = (normalize(u, a), normalize(u, b));
    if a == b {
        return LVerdict::Proved(LTrace { start: a, end: b, steps: Vec::new() });
    }
    if a.dom != b.dom || a.cod != b.cod {
        return LVerdict::Unknown { explored: 0, exhausted: false, distinct_nf: true };
    }
    let rules = LRules::new(th);
    let max_slices = a.slices.len().max(b.slices.len()) + cfg.max_extra_slices;
    let mut par: [Parents; 2] = [HashMap::new(), HashMap::new()];
    let mut queue: [VecDeque<LDiagram>; 2] = [VecDeque::new(), VecDeque::new()];
    par[0].insert(a.slices.clone(), None);
    par[1].insert(b.slices.clone(), None);
    queue[0].push_back(a.clone());
    queue[1].push_back(b.clone());
    let mut explored = 0;
    while !queue[0].is_empty() || !queue[1].is_empty() {
        if explored >= cfg.budget {
            return LVerdict::Unknown { explored, exhausted: false, distinct_nf: true };
        }
        let side = if queue[1].is_empty() || (!queue[0].is_empty() && queue[0].len() <= queue[1].len()) { 0 } else { 1 };
        let state = queue[side].pop_front().expect("non-empty queue");
        explored += 1;
        for (next, step) in rules.neighbours(&state, max_slices, cfg) {
            if par[side].contains_key(&next.slices) {
                continue;
            }
            par[side].insert(next.slices.clone(), Some((state.slices.clone(), step)));
            if par[1 - side].contains_key(&next.slices) {
                let mut steps = path_to(&par[0], &next.slices);
                steps.extend(path_to(&par[1], &next.slices).iter().rev().map(reversed));
                return LVerdict::Proved(LTrace { start: a, end: b, steps });
            }
            queue[side].push_back(next);
        }
    }
    LVerdict::Unknown { explored, exhausted: true, distinct_nf: true }
}

/// Type-checks both sides, requires them parallel, then searches.
pub fn prove_eq1(th: &LayeredTheory, t: &LTerm, s: &LTerm, cfg: &Prover1Config) -> Result<LVerdict, LayeredError> {
    let (a, b) = (typecheck_term(th, t)?, typecheck_term(th, s)?);
    if !th.parallel(&a, &b) {
        return Err(LayeredError::NotParallel("goal".into()));
    }
    Ok(prove_diagrams1(th, &a.diagram, &b.diagram, cfg))
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LTraceError {
    #[error("step {0}: representative is not in the current class")]
    WrongClass(usize),
    #[error("step {0}: `{1}` is not an instance available here")]
    NotAnInstance(usize, String),
    #[error("step {0}: rule side does not occur at the given window")]
    NoMatch(usize),
    #[error("step {0}: rewritten representative differs")]
    WrongResult(usize),
    #[error("trace ends at a different normal form")]
    WrongEnd,
}

/// Replays a trace, regenerating the available instances at every step.
pub fn check_trace1(th: &LayeredTheory, t: &LTrace) -> Result<(), LTraceError> {
    let u = &th.universe;
    let statics = static_instances(th);
    let mut cur = normalize(u, &t.start);
    for (n, s) in t.steps.iter().enumerate() {
        let before = LDiagram { dom: cur.dom.clone(), cod: cur.cod.clone(), slices: s.before.clone() };
        if normalize(u, &before) != cur {
            return Err(LTraceError::WrongClass(n));
        }
        // schema instances are read off either side of the step
        let mut dynamic = dynamic_instances(th, &cur.dom, &s.before);
        dynamic.extend(dynamic_instances(th, &cur.dom, &s.after));
        let ins = statics
            .iter()
            .chain(&dynamic)
            .find(|i| i.name == s.rule && i.lhs == s.lhs && i.rhs == s.rhs)
            .ok_or_else(|| LTraceError::NotAnInstance(n, s.rule.clone()))?;
        let levels = levels_of(u, &cur.dom, &s.before).ok_or(LTraceError::WrongClass(n))?;
        let (from, to) = side(ins, s.forward);
        if !matches_at(&levels, &s.before, ins, from, s.at, s.offset, s.inner) {
            return Err(LTraceError::NoMatch(n));
        }
        let after = rewrite(&s.before, ins, from, to, s.at, s.offset, s.inner);
        if after != s.after {
            return Err(LTraceError::WrongResult(n));
        }
        cur = normalize(u, &LDiagram { dom: cur.dom.clone(), cod: cur.cod.clone(), slices: after });
    }
    if cur != normalize(u, &t.end) {
        return Err(LTraceError::WrongEnd);
    }
    Ok(())
}
