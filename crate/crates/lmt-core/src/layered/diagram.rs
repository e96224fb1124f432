//! Flattened layered terms.
//!
//! A slice is an external offset and an atom. `Int` atoms rewrite one
//! position of a single wire's word; every other atom consumes and produces
//! whole wires. The class of a diagram is generated by swapping adjacent
//! slices on disjoint external wires and adjacent `Int` slices on disjoint
//! positions of the same wire.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::{Bnd, Layer, Universe};
use crate::montheory::diagram::swaps as inner_swaps;
use crate::montheory::{GenId, Word};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct IWire {
    pub layer: Layer,
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Atom {
    Int { inner: usize, gen: GenId },
    /// `(A:ω | f(A):τ)`
    ExtGen { f: Bnd, word: Word },
    /// `(f(A):τ | A:ω)`
    ExtGenOp { f: Bnd, word: Word },
    /// `(A, B | AB)`
    Monoid { layer: Layer, a: Word, b: Word },
    /// `(ε:ε | ε:ω)`
    MonoidUnit { layer: Layer },
    /// `(AB | A, B)`
    Comonoid { layer: Layer, a: Word, b: Word },
    /// `(ε:ω | ε:ε)`
    Counit { layer: Layer },
    Diag(IWire),
    DiagCounit(IWire),
    Codiag(IWire),
    CodiagUnit(IWire),
    Swap(IWire, IWire),
}

impl Atom {
    /// External wires consumed and produced.
    pub fn arity(&self) -> (usize, usize) {
        match self {
            Atom::Int { .. } | Atom::ExtGen { .. } | Atom::ExtGenOp { .. } => (1, 1),
            Atom::Monoid { .. } | Atom::Codiag(_) => (2, 1),
            Atom::MonoidUnit { .. } | Atom::CodiagUnit(_) => (0, 1),
            Atom::Comonoid { .. } | Atom::Diag(_) => (1, 2),
            Atom::Counit { .. } | Atom::DiagCounit(_) => (1, 0),
            Atom::Swap(..) => (2, 2),
        }
    }

    /// Output wires for the given inputs, or `None` when they don't fit.
    pub fn apply(&self, u: &Universe, ins: &[IWire]) -> Option<Vec<IWire>> {
        let w = |layer, word: &Word| IWire { layer, word: word.clone() };
        if ins.len() != self.arity().0 {
            return None;
        }
        Some(match self {
            Atom::Int { inner, gen } => {
                let g = u.sig.gen(*gen);
                let x = &ins[0];
                if x.layer != u.gen_layer[*gen] || *x.word.get(*inner..*inner + g.dom.len())? != g.dom[..] {
                    return None;
                }
                let mut word = x.word.clone();
                word.splice(*inner..*inner + g.dom.len(), g.cod.iter().copied());
                vec![IWire { layer: x.layer, word }]
            }
            Atom::ExtGen { f, word } => {
                let b = &u.bnd[*f];
                if ins[0] != w(b.0, word) {
                    return None;
                }
                vec![w(b.1, &u.box_word(*f, word)?)]
            }
            Atom::ExtGenOp { f, word } => {
                let b = &u.bnd[*f];
                if ins[0] != w(b.1, &u.box_word(*f, word)?) {
                    return None;
                }
                vec![w(b.0, word)]
            }
            Atom::Monoid { layer, a, b } => {
                if ins[0] != w(*layer, a) || ins[1] != w(*layer, b) {
                    return None;
                }
                vec![w(*layer, &[a.as_slice(), b].concat())]
            }
            Atom::MonoidUnit { layer } => vec![w(*layer, &Vec::new())],
            Atom::Comonoid { layer, a, b } => {
                if ins[0] != w(*layer, &[a.as_slice(), b].concat()) {
                    return None;
                }
                vec![w(*layer, a), w(*layer, b)]
            }
            Atom::Counit { layer } => {
                if ins[0] != w(*layer, &Vec::new()) {
                    return None;
                }
                Vec::new()
            }
            Atom::Diag(x) => {
                if ins[0] != *x {
                    return None;
                }
                vec![x.clone(), x.clone()]
            }
            Atom::DiagCounit(x) => {
                if ins[0] != *x {
                    return None;
                }
                Vec::new()
            }
            Atom::Codiag(x) => {
                if ins[0] != *x || ins[1] != *x {
                    return None;
                }
                vec![x.clone()]
            }
            Atom::CodiagUnit(x) => vec![x.clone()],
            Atom::Swap(x, y) => {
                if ins[0] != *x || ins[1] != *y {
                    return None;
                }
                vec![y.clone(), x.clone()]
            }
        })
    }
}

pub type LSlice = (usize, Atom);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LDiagram {
    pub dom: Vec<IWire>,
    pub cod: Vec<IWire>,
    pub slices: Vec<LSlice>,
}

impl LDiagram {
    pub fn identity(t: &[IWire]) -> Self {
        LDiagram { dom: t.to_vec(), cod: t.to_vec(), slices: Vec::new() }
    }

    pub fn atom(u: &Universe, ins: &[IWire], a: Atom) -> Option<Self> {
        let cod = a.apply(u, ins)?;
        Some(LDiagram { dom: ins.to_vec(), cod, slices: vec![(0, a)] })
    }

    /// Diagrammatic composite; `None` when the boundaries differ.
    pub fn then(&self, other: &LDiagram) -> Option<LDiagram> {
        if self.cod != other.dom {
            return None;
        }
        let mut slices = self.slices.clone();
        slices.extend_from_slice(&other.slices);
        Some(LDiagram { dom: self.dom.clone(), cod: other.cod.clone(), slices })
    }

    pub fn tensor(&self, other: &LDiagram) -> LDiagram {
        let shift = self.cod.len();
        let mut slices = self.slices.clone();
        slices.extend(other.slices.iter().map(|(o, a)| (o + shift, a.clone())));
        LDiagram { dom: [self.dom.as_slice(), &other.dom].concat(), cod: [self.cod.as_slice(), &other.cod].concat(), slices }
    }

    /// Wire lists before each slice and after the last; `None` if a slice
    /// doesn't fit its inputs.
    pub fn levels(&self, u: &Universe) -> Option<Vec<Vec<IWire>>> {
        levels_of(u, &self.dom, &self.slices)
    }

    pub fn is_valid(&self, u: &Universe) -> bool {
        self.levels(u).is_some_and(|l| l.last() == Some(&self.cod))
    }
}

pub fn levels_of(u: &Universe, dom: &[IWire], slices: &[LSlice]) -> Option<Vec<Vec<IWire>>> {
    let mut cur = dom.to_vec();
    let mut out = vec![cur.clone()];
    for (o, a) in slices {
        let n = a.arity().0;
        let outs = a.apply(u, cur.get(*o..*o + n)?)?;
        cur.splice(*o..*o + n, outs);
        out.push(cur.clone());
    }
    Some(out)
}

/// Moves `b` below `a` when they commute, in every way that is possible.
pub fn swaps(u: &Universe, a: &LSlice, b: &LSlice) -> Vec<(LSlice, LSlice)> {
    let mut out = Vec::new();
    let ((o1, x), (o2, y)) = (a, b);
    if let (Atom::Int { inner: k1, gen: g1 }, Atom::Int { inner: k2, gen: g2 }) = (x, y) {
        if o1 == o2 {
            for ((k2n, g2n), (k1n, g1n)) in inner_swaps(&u.sig, (*k1, *g1), (*k2, *g2)) {
                out.push(((*o1, Atom::Int { inner: k2n, gen: g2n }), (*o1, Atom::Int { inner: k1n, gen: g1n })));
            }
        }
    }
    let ((in1, out1), (in2, out2)) = (x.arity(), y.arity());
    if o2 + in2 <= *o1 {
        out.push(((*o2, y.clone()), (o1 + out2 - in2, x.clone())));
    }
    if *o2 >= o1 + out1 {
        out.push(((o2 + in1 - out1, y.clone()), (*o1, x.clone())));
    }
    out
}

/// Every slice list in the interchange class, up to `cap` lists.
pub fn class(u: &Universe, slices: &[LSlice], cap: usize) -> BTreeSet<Vec<LSlice>> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(slices.to_vec());
    queue.push_back(slices.to_vec());
    while let Some(s) = queue.pop_front() {
        for i in 0..s.len().saturating_sub(1) {
            for (x, y) in swaps(u, &s[i], &s[i + 1]) {
                let mut t = s.clone();
                t[i] = x;
                t[i + 1] = y;
                if seen.len() < cap && seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
    }
    seen
}

pub const CLASS_CAP: usize = 50_000;

/// Least slice list of the class.
pub fn normalize(u: &Universe, d: &LDiagram) -> LDiagram {
    let best = class(u, &d.slices, CLASS_CAP).into_iter().next().unwrap_or_default();
    LDiagram { dom: d.dom.clone(), cod: d.cod.clone(), slices: best }
}

/// Direct constructions on wire lists used by the structural schemas.
/// `swap_list(L, M) : (L, M | M, L)`.
pub fn swap_list(l: &[IWire], m: &[IWire]) -> LDiagram {
    // move each wire of m leftwards across all of l, first wire first
    let mut slices = Vec::new();
    for (j, y) in m.iter().enumerate() {
        for i in (0..l.len()).rev() {
            slices.push((i + j, Atom::Swap(l[i].clone(), y.clone())));
        }
    }
    LDiagram { dom: [l, m].concat(), cod: [m, l].concat(), slices }
}

/// `d_L : (L | L, L)` built from single-wire diagonals and swaps.
pub fn diag_list(l: &[IWire]) -> LDiagram {
    match l.split_last() {
        None => LDiagram::identity(&[]),
        Some((w, [])) => LDiagram { dom: vec![w.clone()], cod: vec![w.clone(), w.clone()], slices: vec![(0, Atom::Diag(w.clone()))] },
        Some((w, rest)) => {
            let d = diag_list(rest).tensor(&diag_list(std::slice::from_ref(w)));
            // L' L' w w -> L' w L' w
            let mid = LDiagram::identity(rest)
                .tensor(&swap_list(rest, std::slice::from_ref(w)))
                .tensor(&LDiagram::identity(std::slice::from_ref(w)));
            d.then(&mid).expect("diagonal boundaries")
        }
    }
}

pub fn counit_list(l: &[IWire]) -> LDiagram {
    let slices = l.iter().map(|w| (0, Atom::DiagCounit(w.clone()))).collect();
    LDiagram { dom: l.to_vec(), cod: Vec::new(), slices }
}

/// `c_L : (L, L | L)`.
pub fn codiag_list(l: &[IWire]) -> LDiagram {
    match l.split_last() {
        None => LDiagram::identity(&[]),
        Some((w, [])) => LDiagram { dom: vec![w.clone(), w.clone()], cod: vec![w.clone()], slices: vec![(0, Atom::Codiag(w.clone()))] },
        Some((w, rest)) => {
            let mid = LDiagram::identity(rest)
                .tensor(&swap_list(std::slice::from_ref(w), rest))
                .tensor(&LDiagram::identity(std::slice::from_ref(w)));
            mid.then(&codiag_list(rest).tensor(&codiag_list(std::slice::from_ref(w)))).expect("codiagonal boundaries")
        }
    }
}

pub fn cunit_list(l: &[IWire]) -> LDiagram {
    let slices = l.iter().enumerate().map(|(i, w)| (i, Atom::CodiagUnit(w.clone()))).collect();
    LDiagram { dom: Vec::new(), cod: l.to_vec(), slices }
}

pub fn atom_text(sig: &super::LayeredSignature, u: &Universe, a: &Atom) -> String {
    let word = |l: Layer, w: &Word| u.wire_name(sig, &IWire { layer: l, word: w.clone() });
    let bname = |f: &Bnd| sig.boundaries[*f].name.clone();
    match a {
        Atom::Int { inner, gen } => format!("{}@{inner}", u.sig.gen(*gen).name),
        Atom::ExtGen { f, word: w } => format!("ext({} | {})", bname(f), word(u.bnd[*f].0, w)),
        Atom::ExtGenOp { f, word: w } => format!("extop({} | {})", bname(f), word(u.bnd[*f].0, w)),
        Atom::Monoid { layer, a, b } => format!("monoid({} | {})", word(*layer, a), word(*layer, b)),
        Atom::MonoidUnit { layer } => format!("munit({})", sig.layers[*layer]),
        Atom::Comonoid { layer, a, b } => format!("comonoid({} | {})", word(*layer, a), word(*layer, b)),
        Atom::Counit { layer } => format!("counit({})", sig.layers[*layer]),
        Atom::Diag(x) => format!("diag({})", u.wire_name(sig, x)),
        Atom::DiagCounit(x) => format!("dcounit({})", u.wire_name(sig, x)),
        Atom::Codiag(x) => format!("codiag({})", u.wire_name(sig, x)),
        Atom::CodiagUnit(x) => format!("cunit({})", u.wire_name(sig, x)),
        Atom::Swap(x, y) => format!("swap({} | {})", u.wire_name(sig, x), u.wire_name(sig, y)),
    }
}
