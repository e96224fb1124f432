//! Layered terms: syntax, sorting, flattening and a text syntax.
//!
//! ```text
//! term  := tens (';' tens)*
//! tens  := itens ('*' itens)*          external tensor
//! itens := atom ('&' atom)*            internal tensor
//! atom  := '(' term ')' | gen | layer '.' gen | name '(' args ')'
//! type  := 'ε:ε' | wire (',' wire)*    wire := word ':' layer
//! word  := 'ε' | item+                 item := colour | f '(' word ')'
//! ```
//!
//! Constructors: `id(T)`, `iunit(ω)`, `box(f | x)`, `swap(A | B)`,
//! `ext(f | A)`, `monoid(A | B)`, `munit(ω)`, `diag(A)`, `dcounit(A)`,
//! `extop(f | A)`, `comonoid(A | B)`, `counit(ω)`, `codiag(A)`, `cunit(A)`.
//! `id(ε:ε)` is the external unit and `id` of a list is a tensor of
//! internal identities.

use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

use super::diagram::{Atom, IWire, LDiagram};
use super::{canonical_type, ctype_name, Bnd, LType, Layer, LayeredSignature, LayeredTheory, TypeError};
use crate::montheory::GenId;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LTerm {
    IntUnit(Layer),
    IntId(LType),
    IntGen(Layer, GenId),
    IntBox(Bnd, Box<LTerm>),
    Comp(Box<LTerm>, Box<LTerm>),
    IntTensor(Box<LTerm>, Box<LTerm>),
    ExtUnit,
    ExtTensor(Box<LTerm>, Box<LTerm>),
    Swap(LType, LType),
    ExtGen(Bnd, LType),
    Monoid(LType, LType),
    MonoidUnit(Layer),
    Diag(LType),
    DiagCounit(LType),
    ExtGenOp(Bnd, LType),
    Comonoid(LType, LType),
    Counit(Layer),
    Codiag(LType),
    CodiagUnit(LType),
}

impl LTerm {
    pub fn comp(a: LTerm, b: LTerm) -> LTerm {
        LTerm::Comp(Box::new(a), Box::new(b))
    }
    pub fn itensor(a: LTerm, b: LTerm) -> LTerm {
        LTerm::IntTensor(Box::new(a), Box::new(b))
    }
    pub fn etensor(a: LTerm, b: LTerm) -> LTerm {
        LTerm::ExtTensor(Box::new(a), Box::new(b))
    }
    pub fn boxed(f: Bnd, a: LTerm) -> LTerm {
        LTerm::IntBox(f, Box::new(a))
    }

    pub fn size(&self) -> usize {
        match self {
            LTerm::IntBox(_, a) => 1 + a.size(),
            LTerm::Comp(a, b) | LTerm::IntTensor(a, b) | LTerm::ExtTensor(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }

    fn children(&self) -> Vec<&LTerm> {
        match self {
            LTerm::IntBox(_, a) => vec![a],
            LTerm::Comp(a, b) | LTerm::IntTensor(a, b) | LTerm::ExtTensor(a, b) => vec![a, b],
            _ => Vec::new(),
        }
    }

    /// Constructor name as used in diagnostics and the text syntax.
    pub fn constructor(&self) -> &'static str {
        match self {
            LTerm::IntUnit(_) => "int-unit",
            LTerm::IntId(_) => "int-id",
            LTerm::IntGen(..) => "int-gen",
            LTerm::IntBox(..) => "int-box",
            LTerm::Comp(..) => "comp",
            LTerm::IntTensor(..) => "int-tensor",
            LTerm::ExtUnit => "ext-unit",
            LTerm::ExtTensor(..) => "ext-tensor",
            LTerm::Swap(..) => "swap",
            LTerm::ExtGen(..) => "ext-gen",
            LTerm::Monoid(..) => "monoid",
            LTerm::MonoidUnit(_) => "monoid-unit",
            LTerm::Diag(_) => "diag",
            LTerm::DiagCounit(_) => "diag-counit",
            LTerm::ExtGenOp(..) => "ext-gen-op",
            LTerm::Comonoid(..) => "comonoid",
            LTerm::Counit(_) => "counit",
            LTerm::Codiag(_) => "codiag",
            LTerm::CodiagUnit(_) => "codiag-unit",
        }
    }

    /// Whether any node is one of the non-basic constructors.
    pub fn has_structure(&self) -> bool {
        match self {
            LTerm::IntUnit(_) | LTerm::IntId(_) | LTerm::IntGen(..) | LTerm::ExtUnit => false,
            LTerm::IntBox(..) | LTerm::Comp(..) | LTerm::IntTensor(..) | LTerm::ExtTensor(..) => {
                self.children().iter().any(|c| c.has_structure())
            }
            _ => true,
        }
    }

    /// The fibrational dual of an opfibrational constructor.
    pub fn bar(&self) -> Option<LTerm> {
        Some(match self {
            LTerm::ExtGen(f, a) => LTerm::ExtGenOp(*f, a.clone()),
            LTerm::Monoid(a, b) => LTerm::Comonoid(a.clone(), b.clone()),
            LTerm::MonoidUnit(l) => LTerm::Counit(*l),
            LTerm::Diag(a) => LTerm::Codiag(a.clone()),
            LTerm::DiagCounit(a) => LTerm::CodiagUnit(a.clone()),
            _ => return None,
        })
    }

    pub fn display<'a>(&'a self, sig: &'a LayeredSignature) -> LTermDisplay<'a> {
        LTermDisplay { t: self, sig }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize)]
pub enum TermErrorKind {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("{0} applied to an external term")]
    NotInternal(&'static str),
    #[error("composite of ({0}) with ({1})")]
    Mismatch(String, String),
    #[error("{0} is not available in {1} theories")]
    NotAllowed(&'static str, &'static str),
    #[error("swap is not available: the theory is not externally symmetric")]
    NotSymmetric,
    #[error("unknown generator {0}")]
    UnknownGenerator(GenId),
    #[error("int-id needs a non-empty internal type")]
    EmptyId,
    #[error("boundary path deeper than the universe bound")]
    TooDeep,
}

/// An error with the path of child indices to the offending node.
#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize)]
#[error("at node {path:?} ({constructor}): {kind}")]
pub struct TermError {
    pub path: Vec<usize>,
    pub constructor: &'static str,
    pub kind: TermErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Typed {
    pub diagram: LDiagram,
    pub internal: bool,
}

pub fn typecheck_term(th: &LayeredTheory, t: &LTerm) -> Result<Typed, TermError> {
    check(th, t, &mut Vec::new())
}

fn check(th: &LayeredTheory, t: &LTerm, path: &mut Vec<usize>) -> Result<Typed, TermError> {
    let err = |path: &Vec<usize>, kind: TermErrorKind| TermError { path: path.clone(), constructor: t.constructor(), kind };
    let u = &th.universe;
    let wire = |ty: &LType, path: &Vec<usize>| -> Result<IWire, TermError> {
        let c = canonical_type(&th.sig, ty).map_err(|e| err(path, e.into()))?;
        if c.len() != 1 {
            return Err(err(path, TypeError::NotInternal.into()));
        }
        u.wire(&c[0]).map_err(|e| err(path, e.into()))
    };
    let need = |ok: bool, which: &'static str, path: &Vec<usize>| -> Result<(), TermError> {
        if ok {
            Ok(())
        } else {
            Err(err(path, TermErrorKind::NotAllowed(t.constructor(), which)))
        }
    };
    let opf = th.mode.opfibrational();
    let fib = th.mode.fibrational();
    let mode = th.mode.name();
    let atom = |ins: Vec<IWire>, a: Atom, path: &Vec<usize>| -> Result<Typed, TermError> {
        let d = LDiagram::atom(u, &ins, a).ok_or_else(|| err(path, TermErrorKind::TooDeep))?;
        Ok(Typed { diagram: d, internal: false })
    };
    let same_layer = |a: &IWire, b: &IWire, path: &Vec<usize>| -> Result<(), TermError> {
        if a.layer == b.layer {
            Ok(())
        } else {
            Err(err(
                path,
                TypeError::LayerMismatch { expected: th.sig.layers[a.layer].clone(), found: th.sig.layers[b.layer].clone() }.into(),
            ))
        }
    };
    let sub = |i: usize, x: &LTerm, path: &mut Vec<usize>| {
        path.push(i);
        let r = check(th, x, path);
        path.pop();
        r
    };
    match t {
        LTerm::IntUnit(l) => {
            if *l >= th.sig.layers.len() {
                return Err(err(path, TypeError::UnknownLayer(*l).into()));
            }
            let w = IWire { layer: *l, word: Vec::new() };
            Ok(Typed { diagram: LDiagram::identity(&[w]), internal: true })
        }
        LTerm::IntId(a) => {
            let w = wire(a, path)?;
            if w.word.is_empty() {
                return Err(err(path, TermErrorKind::EmptyId));
            }
            Ok(Typed { diagram: LDiagram::identity(&[w]), internal: true })
        }
        LTerm::IntGen(l, g) => {
            let id = u.base_gen(*l, *g).ok_or_else(|| err(path, TermErrorKind::UnknownGenerator(*g)))?;
            let gen = u.sig.gen(id);
            let dom = IWire { layer: *l, word: gen.dom.clone() };
            let d = LDiagram::atom(u, &[dom], Atom::Int { inner: 0, gen: id }).expect("generator fits its domain");
            Ok(Typed { diagram: d, internal: true })
        }
        LTerm::IntBox(f, x) => {
            let tx = sub(0, x, path)?;
            if !tx.internal {
                return Err(err(path, TermErrorKind::NotInternal("int-box")));
            }
            let (bd, _) = *u.bnd.get(*f).ok_or_else(|| err(path, TypeError::UnknownBoundary(*f).into()))?;
            let w = &tx.diagram.dom[0];
            if w.layer != bd {
                return Err(err(
                    path,
                    TypeError::LayerMismatch { expected: th.sig.layers[bd].clone(), found: th.sig.layers[w.layer].clone() }.into(),
                ));
            }
            let d = box_diagram(u, *f, &tx.diagram).ok_or_else(|| err(path, TermErrorKind::TooDeep))?;
            Ok(Typed { diagram: d, internal: true })
        }
        LTerm::Comp(a, b) => {
            let (x, y) = (sub(0, a, path)?, sub(1, b, path)?);
            match x.diagram.then(&y.diagram) {
                Some(d) => Ok(Typed { diagram: d, internal: x.internal && y.internal }),
                None => Err(err(
                    path,
                    TermErrorKind::Mismatch(u.list_name(&th.sig, &x.diagram.cod), u.list_name(&th.sig, &y.diagram.dom)),
                )),
            }
        }
        LTerm::IntTensor(a, b) => {
            let (x, y) = (sub(0, a, path)?, sub(1, b, path)?);
            if !x.internal || !y.internal {
                return Err(err(path, TermErrorKind::NotInternal("int-tensor")));
            }
            same_layer(&x.diagram.dom[0], &y.diagram.dom[0], path)?;
            Ok(Typed { diagram: internal_tensor(u, &x.diagram, &y.diagram), internal: true })
        }
        LTerm::ExtUnit => Ok(Typed { diagram: LDiagram::identity(&[]), internal: false }),
        LTerm::ExtTensor(a, b) => {
            let (x, y) = (sub(0, a, path)?, sub(1, b, path)?);
            Ok(Typed { diagram: x.diagram.tensor(&y.diagram), internal: false })
        }
        LTerm::Swap(a, b) => {
            if !th.symmetric {
                return Err(err(path, TermErrorKind::NotSymmetric));
            }
            let (x, y) = (wire(a, path)?, wire(b, path)?);
            atom(vec![x.clone(), y.clone()], Atom::Swap(x, y), path)
        }
        LTerm::ExtGen(f, a) => {
            need(opf, mode, path)?;
            let x = wire(a, path)?;
            let (bd, _) = *u.bnd.get(*f).ok_or_else(|| err(path, TypeError::UnknownBoundary(*f).into()))?;
            same_layer(&IWire { layer: bd, word: Vec::new() }, &x, path)?;
            atom(vec![x.clone()], Atom::ExtGen { f: *f, word: x.word }, path)
        }
        LTerm::ExtGenOp(f, a) => {
            need(fib, mode, path)?;
            let x = wire(a, path)?;
            let (bd, bc) = *u.bnd.get(*f).ok_or_else(|| err(path, TypeError::UnknownBoundary(*f).into()))?;
            same_layer(&IWire { layer: bd, word: Vec::new() }, &x, path)?;
            let fw = u.box_word(*f, &x.word).ok_or_else(|| err(path, TermErrorKind::TooDeep))?;
            atom(vec![IWire { layer: bc, word: fw }], Atom::ExtGenOp { f: *f, word: x.word }, path)
        }
        LTerm::Monoid(a, b) | LTerm::Comonoid(a, b) => {
            let co = matches!(t, LTerm::Comonoid(..));
            need(if co { fib } else { opf }, mode, path)?;
            let (x, y) = (wire(a, path)?, wire(b, path)?);
            same_layer(&x, &y, path)?;
            let l = x.layer;
            if co {
                let ab = IWire { layer: l, word: [x.word.clone(), y.word.clone()].concat() };
                atom(vec![ab], Atom::Comonoid { layer: l, a: x.word, b: y.word }, path)
            } else {
                atom(vec![x.clone(), y.clone()], Atom::Monoid { layer: l, a: x.word, b: y.word }, path)
            }
        }
        LTerm::MonoidUnit(l) | LTerm::Counit(l) => {
            let co = matches!(t, LTerm::Counit(_));
            need(if co { fib } else { opf }, mode, path)?;
            if *l >= th.sig.layers.len() {
                return Err(err(path, TypeError::UnknownLayer(*l).into()));
            }
            if co {
                atom(vec![IWire { layer: *l, word: Vec::new() }], Atom::Counit { layer: *l }, path)
            } else {
                atom(Vec::new(), Atom::MonoidUnit { layer: *l }, path)
            }
        }
        LTerm::Diag(a) | LTerm::DiagCounit(a) => {
            need(opf, mode, path)?;
            let x = wire(a, path)?;
            let at = if matches!(t, LTerm::Diag(_)) { Atom::Diag(x.clone()) } else { Atom::DiagCounit(x.clone()) };
            atom(vec![x], at, path)
        }
        LTerm::Codiag(a) => {
            need(fib, mode, path)?;
            let x = wire(a, path)?;
            atom(vec![x.clone(), x.clone()], Atom::Codiag(x), path)
        }
        LTerm::CodiagUnit(a) => {
            need(fib, mode, path)?;
            let x = wire(a, path)?;
            atom(Vec::new(), Atom::CodiagUnit(x), path)
        }
    }
}

/// `x ⊗int y` for single-wire diagrams of one layer.
pub fn internal_tensor(u: &crate::layered::Universe, x: &LDiagram, y: &LDiagram) -> LDiagram {
    let _ = u;
    let shift = x.cod[0].word.len();
    let mut slices = x.slices.clone();
    slices.extend(y.slices.iter().map(|(o, a)| match a {
        Atom::Int { inner, gen } => (*o, Atom::Int { inner: inner + shift, gen: *gen }),
        other => (*o, other.clone()),
    }));
    let cat = |a: &IWire, b: &IWire| IWire { layer: a.layer, word: [a.word.clone(), b.word.clone()].concat() };
    LDiagram { dom: vec![cat(&x.dom[0], &y.dom[0])], cod: vec![cat(&x.cod[0], &y.cod[0])], slices }
}

/// Applies a boundary generator to an internal diagram.
pub fn box_diagram(u: &crate::layered::Universe, f: Bnd, d: &LDiagram) -> Option<LDiagram> {
    let (_, cod_layer) = u.bnd[f];
    let bw = |w: &IWire| Some(IWire { layer: cod_layer, word: u.box_word(f, &w.word)? });
    let slices = d
        .slices
        .iter()
        .map(|(o, a)| match a {
            Atom::Int { inner, gen } => Some((*o, Atom::Int { inner: *inner, gen: u.box_gen(f, *gen)? })),
            _ => None,
        })
        .collect::<Option<Vec<_>>>()?;
    Some(LDiagram { dom: vec![bw(&d.dom[0])?], cod: vec![bw(&d.cod[0])?], slices })
}

pub struct LTermDisplay<'a> {
    t: &'a LTerm,
    sig: &'a LayeredSignature,
}

fn type_text(sig: &LayeredSignature, t: &LType) -> String {
    match canonical_type(sig, t) {
        Ok(c) => ctype_name(sig, &c),
        Err(_) => "?".into(),
    }
}

impl LTermDisplay<'_> {
    fn go(&self, t: &LTerm, prec: u8, out: &mut String) {
        let sig = self.sig;
        let ty = |x: &LType| type_text(sig, x);
        let bn = |f: &Bnd| sig.boundaries[*f].name.clone();
        let ln = |l: &Layer| sig.layers[*l].clone();
        let bin = |out: &mut String, a: &LTerm, b: &LTerm, op: &str, p: u8| {
            if prec > p {
                out.push('(');
            }
            self.go(a, p, out);
            out.push_str(op);
            self.go(b, p + 1, out);
            if prec > p {
                out.push(')');
            }
        };
        match t {
            LTerm::Comp(a, b) => bin(out, a, b, " ; ", 0),
            LTerm::ExtTensor(a, b) => bin(out, a, b, " * ", 1),
            LTerm::IntTensor(a, b) => bin(out, a, b, " & ", 2),
            LTerm::IntGen(l, g) => {
                let name = &sig.sigs[*l].generators[*g].name;
                let clash = sig.sigs.iter().enumerate().any(|(i, s)| i != *l && s.generator(name).is_some());
                if clash {
                    let _ = write!(out, "{}.{}", ln(l), name);
                } else {
                    out.push_str(name);
                }
            }
            LTerm::IntUnit(l) => {
                let _ = write!(out, "iunit({})", ln(l));
            }
            LTerm::IntId(a) => {
                let _ = write!(out, "id({})", ty(a));
            }
            LTerm::ExtUnit => out.push_str("id(ε:ε)"),
            LTerm::IntBox(f, x) => {
                let _ = write!(out, "box({} | ", bn(f));
                self.go(x, 0, out);
                out.push(')');
            }
            LTerm::Swap(a, b) => {
                let _ = write!(out, "swap({} | {})", ty(a), ty(b));
            }
            LTerm::ExtGen(f, a) => {
                let _ = write!(out, "ext({} | {})", bn(f), ty(a));
            }
            LTerm::ExtGenOp(f, a) => {
                let _ = write!(out, "extop({} | {})", bn(f), ty(a));
            }
            LTerm::Monoid(a, b) => {
                let _ = write!(out, "monoid({} | {})", ty(a), ty(b));
            }
            LTerm::Comonoid(a, b) => {
                let _ = write!(out, "comonoid({} | {})", ty(a), ty(b));
            }
            LTerm::MonoidUnit(l) => {
                let _ = write!(out, "munit({})", ln(l));
            }
            LTerm::Counit(l) => {
                let _ = write!(out, "counit({})", ln(l));
            }
            LTerm::Diag(a) => {
                let _ = write!(out, "diag({})", ty(a));
            }
            LTerm::DiagCounit(a) => {
                let _ = write!(out, "dcounit({})", ty(a));
            }
            LTerm::Codiag(a) => {
                let _ = write!(out, "codiag({})", ty(a));
            }
            LTerm::CodiagUnit(a) => {
                let _ = write!(out, "cunit({})", ty(a));
            }
        }
    }
}

impl fmt::Display for LTermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.go(self.t, 0, &mut s);
        f.write_str(&s)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("column {col}: {message}")]
pub struct LParseError {
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Sym(char),
}

const SYMS: &str = "();*&|,:";

fn lex(src: &str) -> Vec<(usize, Tok)> {
    let mut out = Vec::new();
    let cs: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < cs.len() {
        let (pos, c) = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if SYMS.contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            let start = i;
            while i < cs.len() && !cs[i].1.is_whitespace() && !SYMS.contains(cs[i].1) {
                i += 1;
            }
            out.push((pos, Tok::Name(cs[start..i].iter().map(|x| x.1).collect())));
        }
    }
    out
}

/// A word before its layer is known.
#[derive(Clone, Debug)]
enum RawItem {
    Name(usize, String),
    App(usize, String, Vec<RawItem>),
}

pub(crate) struct Parser<'a> {
    sig: &'a LayeredSignature,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(sig: &'a LayeredSignature, src: &str) -> Self {
        Parser { sig, toks: lex(src), pos: 0, len: src.len() }
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.len) + 1
    }

    fn fail<T>(&self, m: impl Into<String>) -> Result<T, LParseError> {
        Err(LParseError { col: self.col(), message: m.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), LParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(format!("expected `{c}`"))
        }
    }

    fn name(&mut self) -> Result<String, LParseError> {
        match self.peek().cloned() {
            Some(Tok::Name(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => self.fail("expected a name"),
        }
    }

    pub(crate) fn done(&self) -> Result<(), LParseError> {
        if self.pos < self.toks.len() {
            return self.fail("unexpected trailing input");
        }
        Ok(())
    }

    fn layer(&mut self) -> Result<Layer, LParseError> {
        let c = self.col();
        let n = self.name()?;
        self.sig.layer(&n).ok_or(LParseError { col: c, message: format!("unknown layer `{n}`") })
    }

    fn bnd(&mut self) -> Result<Bnd, LParseError> {
        let c = self.col();
        let n = self.name()?;
        self.sig.boundary(&n).ok_or(LParseError { col: c, message: format!("unknown boundary generator `{n}`") })
    }

    fn raw_word(&mut self) -> Result<Vec<RawItem>, LParseError> {
        let mut items = Vec::new();
        while let Some(Tok::Name(n)) = self.peek().cloned() {
            let c = self.col();
            self.pos += 1;
            if n == "ε" {
                continue;
            }
            if self.eat('(') {
                let inner = self.raw_word()?;
                self.expect(')')?;
                items.push(RawItem::App(c, n, inner));
            } else {
                items.push(RawItem::Name(c, n));
            }
        }
        Ok(items)
    }

    fn resolve(&self, items: &[RawItem], layer: Layer) -> Result<LType, LParseError> {
        let mut acc: Option<LType> = None;
        for it in items {
            let t = match it {
                RawItem::Name(c, n) => {
                    let col = self.sig.sigs[layer].colour(n).ok_or(LParseError {
                        col: *c,
                        message: format!("unknown colour `{n}` in layer {}", self.sig.layers[layer]),
                    })?;
                    LType::Col(layer, col)
                }
                RawItem::App(c, f, inner) => {
                    let b = self.sig.boundary(f).ok_or(LParseError { col: *c, message: format!("unknown boundary generator `{f}`") })?;
                    let bg = &self.sig.boundaries[b];
                    if bg.cod != layer {
                        return Err(LParseError {
                            col: *c,
                            message: format!("`{f}` lands in {}, not {}", self.sig.layers[bg.cod], self.sig.layers[layer]),
                        });
                    }
                    LType::App(b, Box::new(self.resolve(inner, bg.dom)?))
                }
            };
            acc = Some(match acc {
                None => t,
                Some(a) => LType::Cat(Box::new(a), Box::new(t)),
            });
        }
        Ok(acc.unwrap_or(LType::Eps(layer)))
    }

    /// One wire, or `ε:ε`.
    fn wire_or_unit(&mut self) -> Result<LType, LParseError> {
        if self.peek() == Some(&Tok::Name("ε".into())) && self.peek2() == Some(&Tok::Sym(':')) {
            if let Some((_, Tok::Name(n))) = self.toks.get(self.pos + 2) {
                if n == "ε" {
                    self.pos += 3;
                    return Ok(LType::Unit);
                }
            }
        }
        let items = self.raw_word()?;
        self.expect(':')?;
        let l = self.layer()?;
        self.resolve(&items, l)
    }

    pub(crate) fn ltype(&mut self) -> Result<LType, LParseError> {
        let mut t = self.wire_or_unit()?;
        while self.eat(',') {
            let w = self.wire_or_unit()?;
            t = LType::Ext(Box::new(t), Box::new(w));
        }
        Ok(t)
    }

    pub(crate) fn term(&mut self) -> Result<LTerm, LParseError> {
        let mut t = self.tens()?;
        while self.eat(';') {
            let r = self.tens()?;
            t = LTerm::comp(t, r);
        }
        Ok(t)
    }

    fn tens(&mut self) -> Result<LTerm, LParseError> {
        let mut t = self.itens()?;
        while self.eat('*') {
            let r = self.itens()?;
            t = LTerm::etensor(t, r);
        }
        Ok(t)
    }

    fn itens(&mut self) -> Result<LTerm, LParseError> {
        let mut t = self.atom()?;
        while self.eat('&') {
            let r = self.atom()?;
            t = LTerm::itensor(t, r);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<LTerm, LParseError> {
        if self.eat('(') {
            let t = self.term()?;
            self.expect(')')?;
            return Ok(t);
        }
        let c = self.col();
        let n = self.name()?;
        if !self.eat('(') {
            return self.generator(c, &n);
        }
        let t = match n.as_str() {
            "id" => {
                let ty = self.ltype()?;
                id_term(self.sig, &ty)
            }
            "iunit" => LTerm::IntUnit(self.layer()?),
            "munit" => LTerm::MonoidUnit(self.layer()?),
            "counit" => LTerm::Counit(self.layer()?),
            "box" => {
                let f = self.bnd()?;
                self.expect('|')?;
                LTerm::boxed(f, self.term()?)
            }
            "ext" | "extop" => {
                let f = self.bnd()?;
                self.expect('|')?;
                let a = self.ltype()?;
                if n == "ext" {
                    LTerm::ExtGen(f, a)
                } else {
                    LTerm::ExtGenOp(f, a)
                }
            }
            "swap" | "monoid" | "comonoid" => {
                let a = self.ltype()?;
                self.expect('|')?;
                let b = self.ltype()?;
                match n.as_str() {
                    "swap" => LTerm::Swap(a, b),
                    "monoid" => LTerm::Monoid(a, b),
                    _ => LTerm::Comonoid(a, b),
                }
            }
            "diag" => LTerm::Diag(self.ltype()?),
            "dcounit" => LTerm::DiagCounit(self.ltype()?),
            "codiag" => LTerm::Codiag(self.ltype()?),
            "cunit" => LTerm::CodiagUnit(self.ltype()?),
            _ => return Err(LParseError { col: c, message: format!("unknown constructor `{n}`") }),
        };
        self.expect(')')?;
        Ok(t)
    }

    fn generator(&self, c: usize, n: &str) -> Result<LTerm, LParseError> {
        if let Some((l, g)) = n.split_once('.') {
            if let Some(li) = self.sig.layer(l) {
                if let Some(gi) = self.sig.sigs[li].generator(g) {
                    return Ok(LTerm::IntGen(li, gi));
                }
            }
        }
        let hits: Vec<(Layer, GenId)> =
            self.sig.sigs.iter().enumerate().filter_map(|(l, s)| s.generator(n).map(|g| (l, g))).collect();
        match hits.as_slice() {
            [(l, g)] => Ok(LTerm::IntGen(*l, *g)),
            [] => Err(LParseError { col: c, message: format!("unknown generator `{n}`") }),
            _ => Err(LParseError { col: c, message: format!("generator `{n}` is ambiguous; write layer.{n}") }),
        }
    }
}

/// `id` of a type: internal identity, unit, or a tensor of identities.
pub fn id_term(sig: &LayeredSignature, t: &LType) -> LTerm {
    match t {
        LType::Unit => LTerm::ExtUnit,
        LType::Ext(a, b) => LTerm::etensor(id_term(sig, a), id_term(sig, b)),
        LType::Eps(l) => LTerm::IntUnit(*l),
        other => match canonical_type(sig, other) {
            Ok(c) if c.len() == 1 && c[0].word.is_empty() => LTerm::IntUnit(c[0].layer),
            _ => LTerm::IntId(other.clone()),
        },
    }
}

pub fn parse_lterm(sig: &LayeredSignature, src: &str) -> Result<LTerm, LParseError> {
    let mut p = Parser::new(sig, src);
    let t = p.term()?;
    p.done()?;
    Ok(t)
}

pub fn parse_ltype(sig: &LayeredSignature, src: &str) -> Result<LType, LParseError> {
    let mut p = Parser::new(sig, src);
    let t = p.ltype()?;
    p.done()?;
    Ok(t)
}

/// Internal terms of a layer up to a size, built from generators, unary
/// identities, the unit, composition, internal tensor and boxes. Ill-typed
/// candidates are filtered by the type checker.
pub fn enumerate_internal(th: &LayeredTheory, layer: Layer, max_size: usize) -> Vec<(LTerm, Typed)> {
    let nl = th.sig.layers.len();
    let mut by: Vec<Vec<Vec<(LTerm, Typed)>>> = vec![vec![Vec::new(); nl]; max_size + 1];
    let keep = |t: LTerm| typecheck_term(th, &t).ok().filter(|x| x.internal).map(|x| (t, x));
    for l in 0..nl {
        let mut leaves = vec![LTerm::IntUnit(l)];
        leaves.extend((0..th.sig.sigs[l].colours.len()).map(|c| LTerm::IntId(LType::Col(l, c))));
        leaves.extend((0..th.sig.sigs[l].generators.len()).map(|g| LTerm::IntGen(l, g)));
        by[1][l] = leaves.into_iter().filter_map(keep).collect();
    }
    for n in 2..=max_size {
        for l in 0..nl {
            let mut cur = Vec::new();
            for (f, b) in th.sig.boundaries.iter().enumerate() {
                if b.cod == l {
                    for (x, _) in &by[n - 1][b.dom] {
                        cur.extend(keep(LTerm::boxed(f, x.clone())));
                    }
                }
            }
            for i in 1..n - 1 {
                let j = n - 1 - i;
                for (x, tx) in &by[i][l] {
                    for (y, ty) in &by[j][l] {
                        if tx.diagram.cod == ty.diagram.dom {
                            cur.extend(keep(LTerm::comp(x.clone(), y.clone())));
                        }
                        cur.extend(keep(LTerm::itensor(x.clone(), y.clone())));
                    }
                }
            }
            by[n][l] = cur;
        }
    }
    by.into_iter().flat_map(|v| v.into_iter().nth(layer).unwrap_or_default()).collect()
}
