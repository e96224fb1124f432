//! The minimal deflation of a split opfibration, explored on a bounded
//! fragment.
//!
//! A total 1-cell over a normal word `e1 .. en` is a class of tuples
//! `o0, h1, o1, .., hn, on` with `oi` in the fibres and `hi` vertical:
//! `hi : f_! o(i-1) -> oi` for a forward letter `f`, `hi : o(i-1) -> f_! oi`
//! for a backward one. Tuples are identified along vertical maps at the
//! inner objects. The empty word is stored as one identity letter whose
//! tuple is a single vertical map.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::*;
use crate::fibration::{choose_cleavage, is_fibration, is_opcartesian, is_opfibration, to_opindexed, Cleavage, FuncOver, StrictOpIndexedCat};
use crate::fincat::{opposite, FinFunctor};
use crate::twocell::Op;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Raw {
    pub objs: Vec<Ob>,
    pub mors: Vec<Mor>,
}

/// A total 1-cell: its normal word and the least tuple of its class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Cell1 {
    pub word: ZigzagWord,
    pub raw: Raw,
}

impl Cell1 {
    pub fn dom(&self) -> Ob {
        self.raw.objs[0]
    }

    pub fn cod(&self) -> Ob {
        *self.raw.objs.last().expect("nonempty")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RStep {
    AbsorbPrev(usize),
    AbsorbNext,
    Merge(usize),
}

#[derive(Clone, Debug)]
pub struct DeflationData {
    pub p: FuncOver,
    pub cleavage: Cleavage,
    pub zg: Zg,
    /// Word length bound for 1-cells.
    pub len: usize,
    /// Expression size bound for 2-cells.
    pub cellsize: usize,
    /// Replaced values of φ. Only used to exercise the checks.
    pub overrides: BTreeMap<(Cell1, ZgExpr), Cell1>,
    pub(crate) fibres: Vec<Vec<Ob>>,
    vhom: Vec<Vec<Vec<Mor>>>,
    push: RefCell<HashMap<(Mor, Mor), Mor>>,
    canon: RefCell<HashMap<(Vec<Letter>, Raw), Raw>>,
}

pub fn deflation_from_split_opfibration(p: &FuncOver, len: usize, cellsize: usize) -> Result<DeflationData, String> {
    let cl = choose_cleavage(p, true).map_err(|e| e.to_string())?;
    Ok(DeflationData::new(p.clone(), cl, len, cellsize))
}

impl DeflationData {
    pub fn new(p: FuncOver, cleavage: Cleavage, len: usize, cellsize: usize) -> Self {
        let y = p.source.clone();
        let x = p.target.clone();
        let fibres = x.objects().map(|o| y.objects().filter(|&a| p.ob(a) == o).collect()).collect();
        let vhom = y
            .objects()
            .map(|a| {
                y.objects()
                    .map(|b| {
                        y.hom(a, b).iter().copied().filter(|&m| x.is_identity(p.mor(m))).collect()
                    })
                    .collect()
            })
            .collect();
        DeflationData {
            zg: Zg::new(x),
            p,
            cleavage,
            len,
            cellsize,
            overrides: BTreeMap::new(),
            fibres,
            vhom,
            push: RefCell::default(),
            canon: RefCell::default(),
        }
    }

    pub fn y(&self) -> &FinCategory {
        &self.p.source
    }

    pub fn x(&self) -> &FinCategory {
        &self.p.target
    }

    pub fn vertical_hom(&self, a: Ob, b: Ob) -> &[Mor] {
        &self.vhom[a][b]
    }

    pub fn push_ob(&self, f: Mor, a: Ob) -> Ob {
        self.y().cod(self.cleavage.lift(a, f))
    }

    /// `f_!(v)` for a vertical `v`.
    pub fn push_mor(&self, f: Mor, v: Mor) -> Mor {
        if self.x().is_identity(f) {
            return v;
        }
        if let Some(&m) = self.push.borrow().get(&(f, v)) {
            return m;
        }
        let y = self.y();
        let (la, lb) = (self.cleavage.lift(y.dom(v), f), self.cleavage.lift(y.cod(v), f));
        let target = y.comp(v, lb);
        let m = *self.vhom[y.cod(la)][y.cod(lb)]
            .iter()
            .find(|&&h| y.comp(la, h) == target)
            .expect("opcartesian factorisation");
        self.push.borrow_mut().insert((f, v), m);
        m
    }

    pub(crate) fn internal(&self, w: &ZigzagWord) -> Vec<Letter> {
        if w.letters.is_empty() {
            vec![(Dir::Fwd, self.x().id(w.src))]
        } else {
            w.letters.clone()
        }
    }

    pub(crate) fn letter_hom(&self, (d, f): Letter, o0: Ob, o1: Ob) -> &[Mor] {
        match d {
            Dir::Fwd => &self.vhom[self.push_ob(f, o0)][o1],
            Dir::Bwd => &self.vhom[o0][self.push_ob(f, o1)],
        }
    }

    /// `h` moved along a vertical `g` at its end.
    fn right(&self, (d, f): Letter, h: Mor, g: Mor) -> Mor {
        match d {
            Dir::Fwd => self.y().comp(h, g),
            Dir::Bwd => self.y().comp(h, self.push_mor(f, g)),
        }
    }

    /// `h` moved along a vertical `g` at its start.
    fn left(&self, (d, f): Letter, g: Mor, h: Mor) -> Mor {
        match d {
            Dir::Fwd => self.y().comp(self.push_mor(f, g), h),
            Dir::Bwd => self.y().comp(g, h),
        }
    }

    fn check_raw(&self, letters: &[Letter], r: &Raw) -> Result<(), String> {
        let x = self.x();
        if r.objs.len() != letters.len() + 1 || r.mors.len() != letters.len() {
            return Err("tuple has the wrong length".into());
        }
        for (i, &l) in letters.iter().enumerate() {
            let (s, t) = letter_ends(x, l);
            if self.p.ob(r.objs[i]) != s || self.p.ob(r.objs[i + 1]) != t {
                return Err(format!("object {i} is over the wrong base object"));
            }
            if !self.letter_hom(l, r.objs[i], r.objs[i + 1]).contains(&r.mors[i]) {
                return Err(format!("entry {i} has the wrong type"));
            }
        }
        Ok(())
    }

    /// All tuples over `letters` from `a`, ending at `b` if given.
    fn raws_over(&self, letters: &[Letter], a: Ob, b: Option<Ob>) -> Vec<Raw> {
        let mut out = Vec::new();
        let mut cur = Raw { objs: vec![a], mors: vec![] };
        self.raws_rec(letters, b, &mut cur, &mut out);
        out
    }

    fn raws_rec(&self, letters: &[Letter], b: Option<Ob>, cur: &mut Raw, out: &mut Vec<Raw>) {
        let i = cur.mors.len();
        if i == letters.len() {
            out.push(cur.clone());
            return;
        }
        let l = letters[i];
        let xt = letter_ends(self.x(), l).1;
        let o0 = cur.objs[i];
        for &o in &self.fibres[xt] {
            if i + 1 == letters.len() && b.is_some_and(|b| b != o) {
                continue;
            }
            for &h in self.letter_hom(l, o0, o) {
                cur.objs.push(o);
                cur.mors.push(h);
                self.raws_rec(letters, b, cur, out);
                cur.objs.pop();
                cur.mors.pop();
            }
        }
    }

    /// Least tuple of the class, by search over the generating moves.
    pub(crate) fn canonical(&self, letters: &[Letter], r: Raw) -> Raw {
        let key = (letters.to_vec(), r);
        if let Some(c) = self.canon.borrow().get(&key) {
            return c.clone();
        }
        let seen = self.class_members(letters, key.1);
        let least = seen.iter().next().expect("nonempty").clone();
        let mut cache = self.canon.borrow_mut();
        for t in seen {
            cache.insert((letters.to_vec(), t), least.clone());
        }
        least
    }

    /// Every tuple identified with `r`.
    pub(crate) fn class_members(&self, letters: &[Letter], r: Raw) -> BTreeSet<Raw> {
        let x = self.x();
        let n = letters.len();
        let mut seen = BTreeSet::from([r.clone()]);
        let mut queue = VecDeque::from([r]);
        while let Some(t) = queue.pop_front() {
            for k in 1..n {
                let xo = letter_ends(x, letters[k]).0;
                let (lp, ln) = (letters[k - 1], letters[k]);
                let o = t.objs[k];
                let mut next = Vec::new();
                for &o2 in &self.fibres[xo] {
                    for &g in &self.vhom[o][o2] {
                        for &q in self.letter_hom(ln, o2, t.objs[k + 1]) {
                            if self.left(ln, g, q) == t.mors[k] {
                                let mut u = t.clone();
                                u.objs[k] = o2;
                                u.mors[k - 1] = self.right(lp, t.mors[k - 1], g);
                                u.mors[k] = q;
                                next.push(u);
                            }
                        }
                    }
                    for &g in &self.vhom[o2][o] {
                        for &q in self.letter_hom(lp, t.objs[k - 1], o2) {
                            if self.right(lp, q, g) == t.mors[k - 1] {
                                let mut u = t.clone();
                                u.objs[k] = o2;
                                u.mors[k - 1] = q;
                                u.mors[k] = self.left(ln, g, t.mors[k]);
                                next.push(u);
                            }
                        }
                    }
                }
                for u in next {
                    if seen.insert(u.clone()) {
                        queue.push_back(u);
                    }
                }
            }
        }
        seen
    }

    /// The word-level reduction of `letters`: steps with the word before
    /// each, and the final word.
    fn steps(&self, letters: &[Letter]) -> (Vec<(Vec<Letter>, RStep)>, Vec<Letter>) {
        let x = self.x();
        let mut cur = letters.to_vec();
        let mut out = Vec::new();
        loop {
            let step = if let Some(i) = cur.iter().position(|l| x.is_identity(l.1)).filter(|_| cur.len() > 1) {
                if i > 0 {
                    RStep::AbsorbPrev(i)
                } else {
                    RStep::AbsorbNext
                }
            } else if let Some(i) = (0..cur.len().saturating_sub(1)).find(|&i| cur[i].0 == cur[i + 1].0) {
                RStep::Merge(i)
            } else {
                break;
            };
            let before = cur.clone();
            match step {
                RStep::AbsorbPrev(i) => {
                    cur.remove(i);
                }
                RStep::AbsorbNext => {
                    cur.remove(0);
                }
                RStep::Merge(i) => {
                    cur[i] = merge_letters(x, cur[i], cur[i + 1]);
                    cur.remove(i + 1);
                }
            }
            out.push((before, step));
        }
        (out, cur)
    }

    fn apply(&self, before: &[Letter], s: RStep, mut r: Raw) -> Raw {
        let y = self.y();
        match s {
            RStep::AbsorbPrev(i) => {
                r.mors[i - 1] = self.right(before[i - 1], r.mors[i - 1], r.mors[i]);
                r.mors.remove(i);
                r.objs.remove(i);
            }
            RStep::AbsorbNext => {
                r.mors[1] = self.left(before[1], r.mors[0], r.mors[1]);
                r.mors.remove(0);
                r.objs.remove(1);
            }
            RStep::Merge(i) => {
                let (a, b) = (before[i], before[i + 1]);
                r.mors[i] = match a.0 {
                    Dir::Fwd => y.comp(self.push_mor(b.1, r.mors[i]), r.mors[i + 1]),
                    Dir::Bwd => y.comp(r.mors[i], self.push_mor(a.1, r.mors[i + 1])),
                };
                r.mors.remove(i + 1);
                r.objs.remove(i + 1);
            }
        }
        r
    }

    /// A preimage of `apply` with identities in the new slots.
    fn unapply(&self, before: &[Letter], s: RStep, mut r: Raw) -> Raw {
        let y = self.y();
        match s {
            RStep::AbsorbPrev(i) => {
                let m = r.objs[i];
                r.objs.insert(i, m);
                r.mors.insert(i, y.id(m));
            }
            RStep::AbsorbNext => {
                let m = r.objs[0];
                r.objs.insert(1, m);
                r.mors.insert(0, y.id(m));
            }
            RStep::Merge(i) => {
                let (a, b) = (before[i], before[i + 1]);
                match a.0 {
                    Dir::Fwd => {
                        let m = self.push_ob(a.1, r.objs[i]);
                        let h = r.mors[i];
                        r.objs.insert(i + 1, m);
                        r.mors[i] = y.id(m);
                        r.mors.insert(i + 1, h);
                    }
                    Dir::Bwd => {
                        let m = self.push_ob(b.1, r.objs[i + 1]);
                        r.objs.insert(i + 1, m);
                        r.mors.insert(i + 1, y.id(m));
                    }
                }
            }
        }
        r
    }

    /// Normalises a tuple over any typed word into a total 1-cell.
    pub fn reduce(&self, letters: &[Letter], raw: Raw) -> Cell1 {
        let x = self.x();
        let (steps, fin) = self.steps(letters);
        let mut r = raw;
        for (before, s) in &steps {
            r = self.apply(before, *s, r);
        }
        let (src, tgt) = (self.p.ob(r.objs[0]), self.p.ob(*r.objs.last().expect("nonempty")));
        let word_letters = if fin.len() == 1 && x.is_identity(fin[0].1) { vec![] } else { fin };
        let word = ZigzagWord { src, tgt, letters: word_letters };
        let raw = self.canonical(&self.internal(&word), r);
        Cell1 { word, raw }
    }

    /// A tuple over `letters` whose reduction is `c`.
    pub(crate) fn split(&self, letters: &[Letter], c: &Cell1) -> Result<Raw, String> {
        let (steps, fin) = self.steps(letters);
        let x = self.x();
        let fin_nf = if fin.len() == 1 && x.is_identity(fin[0].1) { vec![] } else { fin };
        if fin_nf != c.word.letters {
            return Err("word does not normalise to the 1-cell's word".into());
        }
        let mut r = c.raw.clone();
        for (before, s) in steps.iter().rev() {
            r = self.unapply(before, *s, r);
        }
        Ok(r)
    }

    /// Builds a 1-cell from a tuple over an arbitrary typed word.
    pub fn cell(&self, w: &ZigzagWord, raw: Raw) -> Result<Cell1, String> {
        let letters = self.internal(w);
        self.check_raw(&letters, &raw)?;
        Ok(self.reduce(&letters, raw))
    }

    pub fn identity1(&self, a: Ob) -> Cell1 {
        self.vertical(self.y().id(a))
    }

    pub fn vertical(&self, v: Mor) -> Cell1 {
        let y = self.y();
        Cell1 { word: ZigzagWord::empty(self.p.ob(y.dom(v))), raw: Raw { objs: vec![y.dom(v), y.cod(v)], mors: vec![v] } }
    }

    pub fn compose1(&self, a: &Cell1, b: &Cell1) -> Option<Cell1> {
        if a.cod() != b.dom() {
            return None;
        }
        let mut letters = self.internal(&a.word);
        letters.extend(self.internal(&b.word));
        let mut objs = a.raw.objs.clone();
        objs.extend(&b.raw.objs[1..]);
        let mut mors = a.raw.mors.clone();
        mors.extend(&b.raw.mors);
        Some(self.reduce(&letters, Raw { objs, mors }))
    }

    /// All 1-cells over the normal word `w`, from `a` and to `b` if given.
    pub fn cells_over(&self, w: &ZigzagWord, a: Option<Ob>, b: Option<Ob>) -> Vec<Cell1> {
        let letters = self.internal(w);
        let starts: Vec<Ob> = match a {
            Some(a) => vec![a],
            None => self.fibres[w.src].clone(),
        };
        let mut out = BTreeSet::new();
        for a in starts {
            for r in self.raws_over(&letters, a, b) {
                out.insert(Cell1 { word: w.clone(), raw: self.canonical(&letters, r) });
            }
        }
        out.into_iter().collect()
    }

    /// Every 1-cell of the fragment.
    pub fn one_cells(&self) -> Vec<Cell1> {
        normal_words(self.x(), self.len).iter().flat_map(|w| self.cells_over(w, None, None)).collect()
    }

    /// The codomain of `φ(F, α)`.
    pub fn act(&self, e: &ZgExpr, f: &Cell1) -> Result<Cell1, String> {
        let x = self.x();
        let y = self.y();
        match e {
            Expr::Id(w) => {
                if &f.word != w {
                    return Err("identity on a different word".into());
                }
                Ok(f.clone())
            }
            Expr::Gen(g) => {
                let (d, _) = self.zg.gen_boundary(g);
                if f.word != d {
                    return Err(format!("{} applied to a 1-cell over {}", self.zg.display(e), f.word.display(x)));
                }
                match *g {
                    ZgGen::Eta(m) => {
                        let (a, b, v) = (f.raw.objs[0], f.raw.objs[1], f.raw.mors[0]);
                        let fa = self.push_ob(m, a);
                        let raw = Raw { objs: vec![a, fa, b], mors: vec![y.id(fa), self.push_mor(m, v)] };
                        Ok(self.reduce(&[(Dir::Fwd, m), (Dir::Bwd, m)], raw))
                    }
                    ZgGen::Eps(m) => {
                        let r = self.split(&[(Dir::Bwd, m), (Dir::Fwd, m)], f)?;
                        let raw = Raw { objs: vec![r.objs[0], r.objs[2]], mors: vec![y.comp(r.mors[0], r.mors[1])] };
                        Ok(self.reduce(&[(Dir::Fwd, x.id(x.cod(m)))], raw))
                    }
                }
            }
            Expr::Chain(Op::Vert, xs) => {
                let mut cur = f.clone();
                for a in xs {
                    cur = self.phi(&cur, a)?;
                }
                Ok(cur)
            }
            Expr::Chain(Op::Horiz, xs) => {
                let mut doms = Vec::new();
                for a in xs {
                    doms.push(twocell_boundary(&self.zg, a).map_err(|e| e.to_string())?.0);
                }
                let pieces: Vec<Vec<Letter>> = doms.iter().map(|w| self.internal(w)).collect();
                let all: Vec<Letter> = pieces.iter().flatten().copied().collect();
                let r = self.split(&all, f)?;
                let mut at = 0;
                let mut out: Option<Cell1> = None;
                for ((a, w), ls) in xs.iter().zip(&doms).zip(&pieces) {
                    let n = ls.len();
                    let seg = Raw { objs: r.objs[at..=at + n].to_vec(), mors: r.mors[at..at + n].to_vec() };
                    at += n;
                    let piece = Cell1 { word: w.clone(), raw: self.canonical(ls, seg) };
                    let img = self.phi(&piece, a)?;
                    out = Some(match out {
                        None => img,
                        Some(o) => self.compose1(&o, &img).ok_or("pieces do not compose")?,
                    });
                }
                out.ok_or_else(|| "empty chain".into())
            }
            Expr::Chain(Op::Tensor, _) => Err("tensor in a deflation without monoidal tables".into()),
        }
    }

    pub fn phi(&self, f: &Cell1, e: &ZgExpr) -> Result<Cell1, String> {
        if let Some(c) = self.overrides.get(&(f.clone(), e.clone())) {
            return Ok(c.clone());
        }
        self.act(e, f)
    }

    pub fn display_cell(&self, c: &Cell1) -> String {
        let y = self.y();
        let mut s = y.obj_name(c.raw.objs[0]).to_string();
        for (i, &m) in c.raw.mors.iter().enumerate() {
            s.push_str(&format!(" -{}-> {}", y.mor_name(m), y.obj_name(c.raw.objs[i + 1])));
        }
        format!("{} | {}", c.word.display(self.x()), s)
    }

    /// Generator 2-cells out of `w`, whiskered, with codomain in bound.
    pub fn basic_cells(&self, w: &ZigzagWord) -> Vec<ZgExpr> {
        let x = self.x();
        let zg = &self.zg;
        let mut out = vec![zg.id(w.clone())];
        let mut at = vec![w.src];
        for &l in &w.letters {
            at.push(letter_ends(x, l).1);
        }
        let whisker = |j: usize, k: usize, g: ZgExpr| {
            let (u, v) = (&w.letters[..j], &w.letters[k..]);
            let mut xs = Vec::new();
            if !u.is_empty() {
                xs.push(zg.id(ZigzagWord { src: w.src, tgt: at[j], letters: u.to_vec() }));
            }
            xs.push(g);
            if !v.is_empty() {
                xs.push(zg.id(ZigzagWord { src: at[k], tgt: w.tgt, letters: v.to_vec() }));
            }
            if xs.len() == 1 {
                xs.pop().unwrap()
            } else {
                Expr::Chain(Op::Horiz, xs)
            }
        };
        for j in 0..=w.len() {
            for f in x.hom_from(at[j]).filter(|&f| !x.is_identity(f)) {
                out.push(whisker(j, j, zg.eta(f)));
            }
            if j + 1 < w.len() {
                let (a, b) = (w.letters[j], w.letters[j + 1]);
                if a.0 == Dir::Bwd && b.0 == Dir::Fwd && a.1 == b.1 {
                    out.push(whisker(j, j + 2, zg.eps(a.1)));
                }
            }
        }
        out.retain(|e| e.size() <= self.cellsize && twocell_boundary(zg, e).is_ok_and(|(_, c)| c.len() <= self.len));
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RetroReport {
    pub identities: bool,
    pub vertical: bool,
    pub equations: bool,
    pub whiskering: bool,
    pub instances: usize,
    pub witness: Option<String>,
}

impl RetroReport {
    pub fn holds(&self) -> bool {
        self.identities && self.vertical && self.equations && self.whiskering
    }
}

fn note(w: &mut Option<String>, s: impl FnOnce() -> String) {
    if w.is_none() {
        *w = Some(s());
    }
}

/// Retrofunctor laws per hom, respect of the `Zg` equations and whiskering
/// coherence, all on the fragment.
pub fn check_local_retrofunctor(d: &DeflationData) -> RetroReport {
    let zg = &d.zg;
    let mut rep = RetroReport { identities: true, vertical: true, equations: true, whiskering: true, ..Default::default() };
    let cells = d.one_cells();
    for f in &cells {
        rep.instances += 1;
        if d.phi(f, &zg.id(f.word.clone())).as_ref() != Ok(f) {
            rep.identities = false;
            note(&mut rep.witness, || format!("φ(F, id) ≠ F at {}", d.display_cell(f)));
        }
        for a in d.basic_cells(&f.word) {
            let Ok(g) = d.phi(f, &a) else {
                rep.vertical = false;
                note(&mut rep.witness, || format!("φ undefined at {}", zg.display(&a)));
                continue;
            };
            for b in d.basic_cells(&g.word) {
                let ab = Expr::vert(a.clone(), b.clone());
                if ab.size() > d.cellsize {
                    continue;
                }
                rep.instances += 1;
                if d.phi(f, &ab) != d.phi(&g, &b) {
                    rep.vertical = false;
                    note(&mut rep.witness, || format!("φ(F, α;β) ≠ φ(φ(F, α), β) at {}", zg.display(&ab)));
                }
            }
        }
    }
    // the defining equations of Zg hold after φ
    let axioms = zg_axioms(zg);
    for f in &cells {
        for ax in &axioms {
            let Ok((dom, _)) = twocell_boundary(zg, &ax.lhs) else { continue };
            if dom != f.word {
                continue;
            }
            rep.instances += 1;
            if d.phi(f, &ax.lhs) != d.phi(f, &ax.rhs) {
                rep.equations = false;
                note(&mut rep.witness, || format!("{} fails at {}", ax.name, d.display_cell(f)));
            }
        }
    }
    // φ(G, id) * φ(F, γ) * φ(H, id) = φ(G;F;H, id * γ * id)
    let x = d.x();
    let words = normal_words(x, d.len);
    for f in &cells {
        for a in d.basic_cells(&f.word).into_iter().filter(|a| matches!(a, Expr::Gen(_))) {
            let Ok(img) = d.phi(f, &a) else { continue };
            for u in words.iter().filter(|u| u.tgt == f.word.src && u.len() + f.word.len() <= d.len) {
                for g in d.cells_over(u, None, Some(f.dom())) {
                    let Some(gf) = d.compose1(&g, f) else { continue };
                    let wh = twocell::normalize(zg, &Expr::horiz(zg.id(u.clone()), a.clone()));
                    rep.instances += 1;
                    if d.phi(&gf, &wh).ok() != d.compose1(&g, &img) {
                        rep.whiskering = false;
                        note(&mut rep.witness, || format!("whiskering fails at {} over {}", zg.display(&wh), d.display_cell(&gf)));
                    }
                }
            }
        }
    }
    rep
}

/// `F` above `f` and `F̄` above `f̄`, read off `φ(id_a, η_f)`.
pub fn lifting_of(d: &DeflationData, a: Ob, f: Mor) -> Result<(Cell1, Cell1), String> {
    let x = d.x();
    if d.p.ob(a) != x.dom(f) {
        return Err("morphism does not start under the object".into());
    }
    if x.is_identity(f) {
        return Ok((d.identity1(a), d.identity1(a)));
    }
    let img = d.phi(&d.identity1(a), &d.zg.eta(f))?;
    let r = d.split(&[(Dir::Fwd, f), (Dir::Bwd, f)], &img)?;
    let up = Cell1 { word: d.zg.fwd(f), raw: Raw { objs: r.objs[..2].to_vec(), mors: vec![r.mors[0]] } };
    let down = Cell1 { word: d.zg.bwd(f), raw: Raw { objs: r.objs[1..].to_vec(), mors: vec![r.mors[1]] } };
    let fl = [(Dir::Fwd, f)];
    let bl = [(Dir::Bwd, f)];
    Ok((
        Cell1 { raw: d.canonical(&fl, up.raw.clone()), ..up },
        Cell1 { raw: d.canonical(&bl, down.raw.clone()), ..down },
    ))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DeflationReport {
    pub retrofunctor: RetroReport,
    pub counit: bool,
    pub factorisation_lifting: bool,
    pub minimal: bool,
    pub liftings: usize,
    pub factorisations: usize,
    pub witness: Option<String>,
}

impl DeflationReport {
    pub fn holds(&self) -> bool {
        self.retrofunctor.holds() && self.counit && self.factorisation_lifting
    }
}

pub fn is_deflation(d: &DeflationData) -> DeflationReport {
    let x = d.x();
    let y = d.y();
    let retro = check_local_retrofunctor(d);
    let mut rep = DeflationReport {
        witness: retro.witness.clone(),
        retrofunctor: retro,
        counit: true,
        factorisation_lifting: true,
        minimal: d.overrides.is_empty(),
        ..Default::default()
    };
    for a in y.objects() {
        for f in x.hom_from(d.p.ob(a)) {
            rep.liftings += 1;
            let ok = lifting_of(d, a, f).ok().and_then(|(up, down)| {
                let b = up.cod();
                let back = d.compose1(&down, &up)?;
                Some(d.phi(&back, &d.zg.eps(f)).ok()? == d.identity1(b))
            });
            if ok != Some(true) {
                rep.counit = false;
                note(&mut rep.witness, || format!("counit fails at ({}, {})", y.obj_name(a), x.mor_name(f)));
            }
        }
    }
    // every factorisation of p(H) lifts, and the lifts form one component
    let words = normal_words(x, d.len);
    let mut by_src: BTreeMap<Ob, Vec<&ZigzagWord>> = BTreeMap::new();
    for w in &words {
        by_src.entry(w.src).or_default().push(w);
    }
    for u in &words {
        for v in by_src.get(&u.tgt).into_iter().flatten() {
            if u.len() + v.len() > d.len {
                continue;
            }
            let w = d.zg.compose(u, v).expect("composable");
            for a in d.fibres[u.src].iter().copied() {
                let fs = d.cells_over(u, Some(a), None);
                let mut pairs: Vec<(Cell1, Cell1)> = Vec::new();
                let mut index = HashMap::new();
                let mut comp = Vec::new();
                for f in &fs {
                    for g in d.cells_over(v, Some(f.cod()), None) {
                        let h = d.compose1(f, &g).expect("composable");
                        index.insert((f.clone(), g.clone()), pairs.len());
                        pairs.push((f.clone(), g));
                        comp.push(h);
                    }
                }
                rep.factorisations += pairs.len();
                let mut uf = UnionFind::<usize>::new(pairs.len());
                for f in &fs {
                    let o = f.cod();
                    for &o2 in &d.fibres[u.tgt] {
                        for &k in d.vertical_hom(o, o2) {
                            let kc = d.vertical(k);
                            let fk = d.compose1(f, &kc).expect("composable");
                            for g in d.cells_over(v, Some(o2), None) {
                                let kg = d.compose1(&kc, &g).expect("composable");
                                if let (Some(&i), Some(&j)) = (index.get(&(fk.clone(), g.clone())), index.get(&(f.clone(), kg))) {
                                    uf.union(i, j);
                                }
                            }
                        }
                    }
                }
                let mut root: HashMap<&Cell1, usize> = HashMap::new();
                for (i, h) in comp.iter().enumerate() {
                    let r = uf.find(i);
                    if *root.entry(h).or_insert(r) != r {
                        rep.factorisation_lifting = false;
                        note(&mut rep.witness, || format!("factorisations of {} are not connected", d.display_cell(h)));
                    }
                }
                for h in d.cells_over(&w, Some(a), None) {
                    if !root.contains_key(&h) {
                        rep.factorisation_lifting = false;
                        note(&mut rep.witness, || {
                            format!("{} has no factorisation over ({}, {})", d.display_cell(&h), u.display(x), v.display(x))
                        });
                    }
                }
            }
        }
    }
    rep
}

/// For each `F'` above `f` from `a`: `α` from `φ(F̄;F', ε_f)` satisfies
/// `F;α = F'` and is the only vertical map that does.
pub fn unique_lifting_check(d: &DeflationData, a: Ob, f: Mor) -> Result<bool, String> {
    let (up, down) = lifting_of(d, a, f)?;
    let b = up.cod();
    let w = d.zg.fwd(f);
    for other in d.cells_over(&w, Some(a), None) {
        let back = d.compose1(&down, &other).ok_or("bar does not compose")?;
        let alpha = d.phi(&back, &d.zg.eps(f))?;
        if !alpha.word.is_empty() || alpha.dom() != b {
            return Ok(false);
        }
        if d.compose1(&up, &alpha).as_ref() != Some(&other) {
            return Ok(false);
        }
        let n = d
            .vertical_hom(b, other.cod())
            .iter()
            .filter(|&&k| d.compose1(&up, &d.vertical(k)).as_ref() == Some(&other))
            .count();
        if n != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct UniqueLiftReport {
    pub pairs: usize,
    pub failures: Vec<String>,
}

pub fn unique_lifting_all(d: &DeflationData) -> UniqueLiftReport {
    let (x, y) = (d.x(), d.y());
    let mut rep = UniqueLiftReport::default();
    for a in y.objects() {
        for f in x.hom_from(d.p.ob(a)) {
            rep.pairs += 1;
            match unique_lifting_check(d, a, f) {
                Ok(true) => {}
                Ok(false) => rep.failures.push(format!("({}, {})", y.obj_name(a), x.mor_name(f))),
                Err(e) => rep.failures.push(format!("({}, {}): {e}", y.obj_name(a), x.mor_name(f))),
            }
        }
    }
    rep
}

fn wide_restriction(
    d: &DeflationData,
    cells: Vec<Cell1>,
    names: Vec<String>,
    base: Arc<FinCategory>,
    base_mor: impl Fn(&Cell1) -> Mor,
) -> Result<FuncOver, String> {
    let y = d.y();
    let index: HashMap<&Cell1, usize> = cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let ident = y.objects().map(|a| index.get(&d.identity1(a)).copied().ok_or("missing identity")).collect::<Result<Vec<_>, _>>()?;
    let mut table = HashMap::new();
    for (i, f) in cells.iter().enumerate() {
        for (j, g) in cells.iter().enumerate() {
            if f.cod() == g.dom() {
                let h = d.compose1(f, g).expect("composable");
                let k = *index.get(&h).ok_or_else(|| format!("fragment not closed: {}", d.display_cell(&h)))?;
                table.insert((i, j), k);
            }
        }
    }
    let cat = FinCategory::from_parts(
        y.objects().map(|a| y.obj_name(a).to_string()).collect(),
        names,
        cells.iter().map(Cell1::dom).collect(),
        cells.iter().map(Cell1::cod).collect(),
        ident,
        |f, g| table.get(&(f, g)).copied(),
    );
    if !crate::fincat::validate_category(&cat).is_empty() {
        return Err("restriction is not a category".into());
    }
    let omap = y.objects().map(|a| d.p.ob(a)).collect();
    let mmap = cells.iter().map(base_mor).collect();
    Ok(FinFunctor::new(Arc::new(cat), base, omap, mmap))
}

/// 1-cells over forward words, ordered and named like the morphisms of the
/// source opfibration they correspond to.
pub fn restrict_star(d: &DeflationData) -> Result<FuncOver, String> {
    let (x, y) = (d.x(), d.y());
    let mut cells = Vec::new();
    for o in x.objects() {
        cells.extend(d.cells_over(&ZigzagWord::empty(o), None, None));
    }
    for f in x.morphisms().filter(|&f| !x.is_identity(f)) {
        cells.extend(d.cells_over(&d.zg.fwd(f), None, None));
    }
    let underlying = |c: &Cell1| match c.word.letters.first() {
        None => c.raw.mors[0],
        Some(&(_, f)) => y.comp(d.cleavage.lift(c.dom(), f), c.raw.mors[0]),
    };
    cells.sort_by_key(|c| underlying(c));
    let names = cells.iter().map(|c| y.mor_name(underlying(c)).to_string()).collect();
    let base = d.p.target.clone();
    let r = wide_restriction(d, cells, names, base, |c| c.word.letters.first().map_or(x.id(c.word.src), |l| l.1))?;
    if !is_opfibration(&r).holds {
        return Err("restriction is not an opfibration".into());
    }
    Ok(r)
}

/// 1-cells over backward words, as a functor into the opposite base.
pub fn restrict_circ(d: &DeflationData) -> Result<FuncOver, String> {
    let (x, y) = (d.x(), d.y());
    let mut cells = Vec::new();
    for o in x.objects() {
        cells.extend(d.cells_over(&ZigzagWord::empty(o), None, None));
    }
    for f in x.morphisms().filter(|&f| !x.is_identity(f)) {
        cells.extend(d.cells_over(&d.zg.bwd(f), None, None));
    }
    let names = cells
        .iter()
        .map(|c| match c.word.letters.first() {
            None => y.mor_name(c.raw.mors[0]).to_string(),
            Some(&(_, f)) => format!("{}~[{}|{}]", x.mor_name(f), y.mor_name(c.raw.mors[0]), y.obj_name(c.cod())),
        })
        .collect();
    let base = Arc::new(opposite(x));
    let r = wide_restriction(d, cells, names, base, |c| c.word.letters.first().map_or(x.id(c.word.src), |l| l.1))?;
    if !is_fibration(&r).holds {
        return Err("restriction is not a fibration".into());
    }
    Ok(r)
}

/// Whether `restrict_star` gives back the source opfibration exactly.
pub fn restrict_star_round_trip(d: &DeflationData) -> bool {
    restrict_star(d).is_ok_and(|r| *r.source == *d.p.source && r.target == d.p.target && r.omap == d.p.omap && r.mmap == d.p.mmap)
}

/// Fibres and reindexing of a minimal deflation, through its opfibration
/// part and the lifts `lifting_of` chooses.
pub fn extract_opindexed(d: &DeflationData) -> Result<StrictOpIndexedCat, String> {
    if !d.overrides.is_empty() {
        return Err("not minimal".into());
    }
    let star = restrict_star(d)?;
    if crate::displayed::factors_through_refine(&star).is_none() {
        return Err("opfibration part does not factor through refine".into());
    }
    let (x, y) = (d.x(), d.y());
    let mut lifts = BTreeMap::new();
    for a in y.objects() {
        for f in x.hom_from(d.p.ob(a)) {
            let (up, _) = lifting_of(d, a, f)?;
            let m = match up.word.letters.first() {
                None => up.raw.mors[0],
                Some(&(_, g)) => y.comp(d.cleavage.lift(up.dom(), g), up.raw.mors[0]),
            };
            let k = star.source.mor(y.mor_name(m)).ok_or("lift outside the restriction")?;
            if !is_opcartesian(&star, k) {
                return Err(format!("lift of ({}, {}) is not opcartesian", y.obj_name(a), x.mor_name(f)));
            }
            lifts.insert((a, f), k);
        }
    }
    to_opindexed(&star, &Cleavage { lifts, split: true }).map_err(|e| e.to_string())
}
