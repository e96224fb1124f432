//! 2-terms over a layered theory.
//!
//! Text syntax: `;` vertical, `*` tensor, `^` horizontal (tightest),
//! atoms `cell`, `id[t]`, `eta[x]`, `eps[x]` with `t`, `x` 1-terms.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use super::diagram::{normalize, Atom, LDiagram};
use super::prover::{prove_diagrams1, Prover1Config};
use super::term::{parse_lterm, typecheck_term, LParseError};
use super::{LTerm, LayeredError, LayeredSignature, LayeredTheory, SortingProcedure};
use crate::twocell::{self, Axiom, Config2, Expr, OneCells, Op, Verdict2};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TwoTerm {
    Cell(usize),
    Eta(LTerm),
    Epsilon(LTerm),
    Id(LTerm),
    Vert(Box<TwoTerm>, Box<TwoTerm>),
    Tensor(Box<TwoTerm>, Box<TwoTerm>),
    Horiz(Box<TwoTerm>, Box<TwoTerm>),
}

impl TwoTerm {
    pub fn vert(a: TwoTerm, b: TwoTerm) -> TwoTerm {
        TwoTerm::Vert(Box::new(a), Box::new(b))
    }
    pub fn tensor(a: TwoTerm, b: TwoTerm) -> TwoTerm {
        TwoTerm::Tensor(Box::new(a), Box::new(b))
    }
    pub fn horiz(a: TwoTerm, b: TwoTerm) -> TwoTerm {
        TwoTerm::Horiz(Box::new(a), Box::new(b))
    }

    pub fn display(&self, th: &LayeredTheory) -> String {
        let mut s = String::new();
        show(th, self, 0, &mut s);
        s
    }
}

fn show(th: &LayeredTheory, t: &TwoTerm, prec: u8, out: &mut String) {
    let sig = &th.sig;
    let bin = |out: &mut String, a: &TwoTerm, b: &TwoTerm, op: &str, p: u8| {
        if prec > p {
            out.push('(');
        }
        show(th, a, p, out);
        out.push_str(op);
        show(th, b, p + 1, out);
        if prec > p {
            out.push(')');
        }
    };
    match t {
        TwoTerm::Cell(i) => out.push_str(&th.cells[*i].name),
        TwoTerm::Eta(x) => {
            let _ = write!(out, "eta[{}]", x.display(sig));
        }
        TwoTerm::Epsilon(x) => {
            let _ = write!(out, "eps[{}]", x.display(sig));
        }
        TwoTerm::Id(x) => {
            let _ = write!(out, "id[{}]", x.display(sig));
        }
        TwoTerm::Vert(a, b) => bin(out, a, b, " ; ", 0),
        TwoTerm::Tensor(a, b) => bin(out, a, b, " * ", 1),
        TwoTerm::Horiz(a, b) => bin(out, a, b, " ^ ", 2),
    }
}

/// Generating 2-cells: user cells and structural units and counits,
/// the latter keyed by the flattened constructor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Cell2 {
    User(usize),
    Eta(LDiagram),
    Epsilon(LDiagram),
}

/// 1-cells are normal forms; equality falls back on the level-1 prover.
pub struct LayeredCells<'a> {
    pub th: &'a LayeredTheory,
    user: Vec<(LDiagram, LDiagram)>,
    cache: RefCell<HashMap<(LDiagram, LDiagram), bool>>,
    pub cfg1: Prover1Config,
}

pub fn bar_atom(a: &Atom) -> Option<Atom> {
    Some(match a {
        Atom::ExtGen { f, word } => Atom::ExtGenOp { f: *f, word: word.clone() },
        Atom::Monoid { layer, a, b } => Atom::Comonoid { layer: *layer, a: a.clone(), b: b.clone() },
        Atom::MonoidUnit { layer } => Atom::Counit { layer: *layer },
        Atom::Diag(w) => Atom::Codiag(w.clone()),
        Atom::DiagCounit(w) => Atom::CodiagUnit(w.clone()),
        _ => return None,
    })
}

impl<'a> LayeredCells<'a> {
    pub fn new(th: &'a LayeredTheory) -> Self {
        let u = &th.universe;
        let user = th
            .cells
            .iter()
            .map(|c| {
                let d = typecheck_term(th, &c.dom).expect("cells are checked on insertion").diagram;
                let e = typecheck_term(th, &c.cod).expect("cells are checked on insertion").diagram;
                (normalize(u, &d), normalize(u, &e))
            })
            .collect();
        LayeredCells { th, user, cache: RefCell::new(HashMap::new()), cfg1: Prover1Config { budget: 2_000, ..Default::default() } }
    }

    fn nf(&self, d: &LDiagram) -> LDiagram {
        normalize(&self.th.universe, d)
    }

    /// `x̄` for a one-slice opfibrational diagram.
    fn bar(&self, x: &LDiagram) -> LDiagram {
        let a = bar_atom(&x.slices[0].1).expect("structural cells are keyed by opfibrational atoms");
        LDiagram { dom: x.cod.clone(), cod: x.dom.clone(), slices: vec![(0, a)] }
    }
}

impl OneCells for LayeredCells<'_> {
    type One = LDiagram;
    type Gen = Cell2;

    fn gen_boundary(&self, g: &Cell2) -> (LDiagram, LDiagram) {
        match g {
            Cell2::User(i) => self.user[*i].clone(),
            Cell2::Eta(x) => (LDiagram::identity(&x.dom), self.nf(&x.then(&self.bar(x)).expect("x;x̄ composes"))),
            Cell2::Epsilon(x) => (self.nf(&self.bar(x).then(x).expect("x̄;x composes")), LDiagram::identity(&x.cod)),
        }
    }

    fn compose(&self, a: &LDiagram, b: &LDiagram) -> Option<LDiagram> {
        a.then(b).map(|d| self.nf(&d))
    }

    fn is_identity_one(&self, a: &LDiagram) -> bool {
        a.slices.is_empty()
    }

    fn tensor(&self, a: &LDiagram, b: &LDiagram) -> Option<LDiagram> {
        Some(self.nf(&a.tensor(b)))
    }

    fn is_tensor_unit(&self, a: &LDiagram) -> bool {
        a.slices.is_empty() && a.dom.is_empty()
    }

    fn same(&self, a: &LDiagram, b: &LDiagram) -> bool {
        if a == b {
            return true;
        }
        if a.dom != b.dom || a.cod != b.cod {
            return false;
        }
        let key = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        if let Some(&r) = self.cache.borrow().get(&key) {
            return r;
        }
        let r = prove_diagrams1(self.th, a, b, &self.cfg1).is_proved();
        self.cache.borrow_mut().insert(key, r);
        r
    }
}

pub type LExpr = Expr<LDiagram, Cell2>;

fn err(m: impl Into<String>) -> LayeredError {
    LayeredError::Two(m.into())
}

fn one_atom(th: &LayeredTheory, x: &LTerm) -> Result<LDiagram, LayeredError> {
    if th.mode != SortingProcedure::Deflational {
        return Err(err("structural 2-cells exist only in deflational theories"));
    }
    if x.bar().is_none() {
        return Err(err(format!("{} is not an opfibrational constructor", x.constructor())));
    }
    Ok(typecheck_term(th, x)?.diagram)
}

/// Flattens a 2-term, checking only the leaves.
pub fn to_expr(th: &LayeredTheory, t: &TwoTerm) -> Result<LExpr, LayeredError> {
    let u = &th.universe;
    Ok(match t {
        TwoTerm::Cell(i) => {
            if *i >= th.cells.len() {
                return Err(err(format!("unknown cell {i}")));
            }
            Expr::Gen(Cell2::User(*i))
        }
        TwoTerm::Eta(x) => Expr::Gen(Cell2::Eta(one_atom(th, x)?)),
        TwoTerm::Epsilon(x) => Expr::Gen(Cell2::Epsilon(one_atom(th, x)?)),
        TwoTerm::Id(x) => Expr::Id(normalize(u, &typecheck_term(th, x)?.diagram)),
        TwoTerm::Vert(a, b) => Expr::vert(to_expr(th, a)?, to_expr(th, b)?),
        TwoTerm::Tensor(a, b) => Expr::tensor(to_expr(th, a)?, to_expr(th, b)?),
        TwoTerm::Horiz(a, b) => Expr::horiz(to_expr(th, a)?, to_expr(th, b)?),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoSort {
    pub dom: LDiagram,
    pub cod: LDiagram,
}

pub fn typecheck_2term(th: &LayeredTheory, t: &TwoTerm) -> Result<TwoSort, LayeredError> {
    let sys = LayeredCells::new(th);
    let e = to_expr(th, t)?;
    let (dom, cod) = twocell::boundary(&sys, &e).map_err(|e| err(e.to_string()))?;
    Ok(TwoSort { dom, cod })
}

pub fn same_sort(th: &LayeredTheory, a: &TwoSort, b: &TwoSort) -> bool {
    let sys = LayeredCells::new(th);
    sys.same(&a.dom, &b.dom) && sys.same(&a.cod, &b.cod)
}

fn collect(e: &LExpr, gens: &mut BTreeSet<LDiagram>, ids: &mut BTreeSet<LDiagram>) {
    match e {
        Expr::Gen(Cell2::Eta(x) | Cell2::Epsilon(x)) => {
            gens.insert(x.clone());
        }
        Expr::Gen(_) => {}
        Expr::Id(o) => {
            ids.insert(o.clone());
        }
        Expr::Chain(_, xs) => xs.iter().for_each(|x| collect(x, gens, ids)),
    }
}

/// User 2-equations, and the deflational families instantiated at the
/// constructors and identities occurring in the goal.
pub fn axioms2(th: &LayeredTheory, sys: &LayeredCells<'_>, goal: &[&LExpr]) -> Result<Vec<Axiom<LDiagram, Cell2>>, LayeredError> {
    let mut out = Vec::new();
    for e in &th.e2 {
        out.push(Axiom { name: e.name.clone(), lhs: to_expr(th, &e.lhs)?, rhs: to_expr(th, &e.rhs)? });
    }
    if th.mode != SortingProcedure::Deflational || !th.structural {
        return Ok(out);
    }
    let (mut gens, mut ids) = (BTreeSet::new(), BTreeSet::new());
    for g in goal {
        collect(g, &mut gens, &mut ids);
    }
    let n = |e: LExpr| twocell::normalize(sys, &e);
    for x in &gens {
        let xb = sys.bar(x);
        let (eta, eps) = (Expr::Gen(Cell2::Eta(x.clone())), Expr::Gen(Cell2::Epsilon(x.clone())));
        let (idx, idxb) = (Expr::Id(sys.nf(x)), Expr::Id(sys.nf(&xb)));
        out.push(Axiom {
            name: "zigzag-left".into(),
            lhs: n(Expr::vert(Expr::horiz(eta.clone(), idx.clone()), Expr::horiz(idx.clone(), eps.clone()))),
            rhs: idx.clone(),
        });
        out.push(Axiom {
            name: "zigzag-right".into(),
            lhs: n(Expr::vert(Expr::horiz(idxb.clone(), eta.clone()), Expr::horiz(eps.clone(), idxb.clone()))),
            rhs: idxb,
        });
        // sliding compatibility for internal endomorphisms of either end
        for y in &ids {
            let internal = !y.slices.is_empty() && y.slices.iter().all(|(_, a)| matches!(a, Atom::Int { .. })) && y.dom == y.cod;
            if !internal {
                continue;
            }
            let idy = Expr::Id(y.clone());
            if y.dom == x.dom {
                let l = n(Expr::horiz(idy.clone(), eta.clone()));
                let r = n(Expr::horiz(eta.clone(), idy.clone()));
                if twocell::boundary(sys, &l).is_ok() && twocell::boundary(sys, &r).is_ok() {
                    out.push(Axiom { name: "eta-slide".into(), lhs: l, rhs: r });
                }
            }
            if y.dom == x.cod {
                let l = n(Expr::horiz(idy.clone(), eps.clone()));
                let r = n(Expr::horiz(eps.clone(), idy));
                if twocell::boundary(sys, &l).is_ok() && twocell::boundary(sys, &r).is_ok() {
                    out.push(Axiom { name: "eps-slide".into(), lhs: l, rhs: r });
                }
            }
        }
    }
    Ok(out)
}

pub type LVerdict2 = Verdict2<LDiagram, Cell2>;

pub fn prove_eq2(th: &LayeredTheory, a: &TwoTerm, b: &TwoTerm, cfg: &Config2) -> Result<LVerdict2, LayeredError> {
    let sys = LayeredCells::new(th);
    let (x, y) = (to_expr(th, a)?, to_expr(th, b)?);
    let ax = axioms2(th, &sys, &[&x, &y])?;
    twocell::prove(&sys, &ax, &x, &y, cfg).map_err(|e| err(format!("not parallel: {e}")))
}

pub fn check_trace2(th: &LayeredTheory, a: &TwoTerm, b: &TwoTerm, t: &twocell::Trace<LDiagram, Cell2>) -> Result<(), LayeredError> {
    let sys = LayeredCells::new(th);
    let (x, y) = (to_expr(th, a)?, to_expr(th, b)?);
    let ax = axioms2(th, &sys, &[&x, &y])?;
    twocell::check_trace(&sys, &ax, t).map_err(|e| err(e.to_string()))
}

/// Parses a 2-term.
pub fn parse_twoterm(th: &LayeredTheory, src: &str) -> Result<TwoTerm, LParseError> {
    let mut p = P2 { th, s: src.chars().collect(), i: 0 };
    let t = p.vert()?;
    p.ws();
    if p.i < p.s.len() {
        return p.fail("unexpected trailing input");
    }
    Ok(t)
}

struct P2<'a> {
    th: &'a LayeredTheory,
    s: Vec<char>,
    i: usize,
}

impl P2<'_> {
    fn fail<T>(&self, m: &str) -> Result<T, LParseError> {
        Err(LParseError { col: self.i + 1, message: m.to_string() })
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn vert(&mut self) -> Result<TwoTerm, LParseError> {
        let mut t = self.tens()?;
        while self.eat(';') {
            t = TwoTerm::vert(t, self.tens()?);
        }
        Ok(t)
    }

    fn tens(&mut self) -> Result<TwoTerm, LParseError> {
        let mut t = self.horiz()?;
        while self.eat('*') {
            t = TwoTerm::tensor(t, self.horiz()?);
        }
        Ok(t)
    }

    fn horiz(&mut self) -> Result<TwoTerm, LParseError> {
        let mut t = self.atom()?;
        while self.eat('^') {
            t = TwoTerm::horiz(t, self.atom()?);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<TwoTerm, LParseError> {
        if self.eat('(') {
            let t = self.vert()?;
            if !self.eat(')') {
                return self.fail("expected `)`");
            }
            return Ok(t);
        }
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && !self.s[self.i].is_whitespace() && !"();*^[]".contains(self.s[self.i]) {
            self.i += 1;
        }
        let name: String = self.s[start..self.i].iter().collect();
        if name.is_empty() {
            return self.fail("expected a 2-term");
        }
        if self.s.get(self.i) == Some(&'[') {
            let open = self.i + 1;
            let mut depth = 1;
            let mut j = open;
            while j < self.s.len() && depth > 0 {
                match self.s[j] {
                    '[' => depth += 1,
                    ']' => depth -= 1,
                    _ => {}
                }
                j += 1;
            }
            if depth != 0 {
                return self.fail("unclosed `[`");
            }
            let inner: String = self.s[open..j - 1].iter().collect();
            let t = parse_lterm(&self.th.sig, &inner).map_err(|e| LParseError { col: open + e.col, message: e.message })?;
            self.i = j;
            return match name.as_str() {
                "id" => Ok(TwoTerm::Id(t)),
                "eta" => Ok(TwoTerm::Eta(t)),
                "eps" => Ok(TwoTerm::Epsilon(t)),
                _ => Err(LParseError { col: start + 1, message: format!("unknown 2-cell former `{name}`") }),
            };
        }
        match self.th.cell(&name) {
            Some(i) => Ok(TwoTerm::Cell(i)),
            None => Err(LParseError { col: start + 1, message: format!("unknown 2-cell `{name}`") }),
        }
    }
}

/// Text form of a flattened 2-cell expression.
pub fn expr_text(sig: &LayeredSignature, th: &LayeredTheory, e: &LExpr) -> String {
    let u = &th.universe;
    match e {
        Expr::Gen(Cell2::User(i)) => th.cells[*i].name.clone(),
        Expr::Gen(Cell2::Eta(x)) => format!("eta[{}]", diagram_text(sig, u, x)),
        Expr::Gen(Cell2::Epsilon(x)) => format!("eps[{}]", diagram_text(sig, u, x)),
        Expr::Id(o) => format!("id[{}]", diagram_text(sig, u, o)),
        Expr::Chain(op, xs) => {
            let sep = match op {
                Op::Vert => " ; ",
                Op::Tensor => " * ",
                Op::Horiz => " ^ ",
            };
            format!("({})", xs.iter().map(|x| expr_text(sig, th, x)).collect::<Vec<_>>().join(sep))
        }
    }
}

/// Slice listing of a diagram, for messages.
pub fn diagram_text(sig: &LayeredSignature, u: &super::Universe, d: &LDiagram) -> String {
    if d.slices.is_empty() {
        return format!("id({})", u.list_name(sig, &d.dom));
    }
    d.slices.iter().map(|(o, a)| format!("{o}:{}", super::diagram::atom_text(sig, u, a))).collect::<Vec<_>>().join(" ; ")
}
