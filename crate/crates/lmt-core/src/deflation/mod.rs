/*!
Zigzag words over a finite category, the free 2-category `Zg(X)` on the
adjunctions `f ⊣ f̄`, and deflations built from split opfibrations.

A word is a composable list of forward letters `f` and backward letters
`f̄` (written `f~`). Adjacent letters of the same direction compose and
identity letters vanish; what is left alternates and is the normal form.
*/

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::fincat::{FinCategory, Mor, Ob};
use crate::twocell::{self, Axiom, BoundaryError, Config2, Expr, OneCells, Trace, Trace2Error, Verdict2};

pub mod model;
pub mod monoidal;

pub use model::*;
pub use monoidal::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Dir {
    Fwd,
    Bwd,
}

pub type Letter = (Dir, Mor);

/// A typed word from `src` to `tgt`. Not necessarily normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ZigzagWord {
    pub src: Ob,
    pub tgt: Ob,
    pub letters: Vec<Letter>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize)]
pub enum ZgError {
    #[error("letter {0} does not start where the word is")]
    Typing(usize),
    #[error("unknown name `{0}`")]
    Unknown(String),
    #[error("empty word needs `@object`")]
    NoSource,
}

/// Source and target of a letter in `x`.
pub fn letter_ends(x: &FinCategory, (d, f): Letter) -> (Ob, Ob) {
    match d {
        Dir::Fwd => (x.dom(f), x.cod(f)),
        Dir::Bwd => (x.cod(f), x.dom(f)),
    }
}

impl ZigzagWord {
    pub fn empty(x: Ob) -> Self {
        ZigzagWord { src: x, tgt: x, letters: vec![] }
    }

    pub fn new(x: &FinCategory, src: Ob, letters: Vec<Letter>) -> Result<Self, ZgError> {
        let mut at = src;
        for (i, &l) in letters.iter().enumerate() {
            let (a, b) = letter_ends(x, l);
            if a != at {
                return Err(ZgError::Typing(i));
            }
            at = b;
        }
        Ok(ZigzagWord { src, tgt: at, letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation without normalising.
    pub fn then(&self, other: &ZigzagWord) -> Option<ZigzagWord> {
        (self.tgt == other.src).then(|| ZigzagWord {
            src: self.src,
            tgt: other.tgt,
            letters: self.letters.iter().chain(&other.letters).copied().collect(),
        })
    }

    pub fn is_normal(&self, x: &FinCategory) -> bool {
        self.letters.iter().all(|&(_, f)| !x.is_identity(f))
            && self.letters.windows(2).all(|w| w[0].0 != w[1].0)
    }

    pub fn display(&self, x: &FinCategory) -> String {
        if self.letters.is_empty() {
            return format!("@{}", x.obj_name(self.src));
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(d, f)| match d {
                Dir::Fwd => x.mor_name(f).to_string(),
                Dir::Bwd => format!("{}~", x.mor_name(f)),
            })
            .collect();
        parts.join(" ")
    }
}

/// Merges two letters of the same direction.
pub fn merge_letters(x: &FinCategory, a: Letter, b: Letter) -> Letter {
    match a.0 {
        Dir::Fwd => (Dir::Fwd, x.comp(a.1, b.1)),
        Dir::Bwd => (Dir::Bwd, x.comp(b.1, a.1)),
    }
}

pub fn zg_normalize(x: &FinCategory, w: &ZigzagWord) -> Result<ZigzagWord, ZgError> {
    ZigzagWord::new(x, w.src, w.letters.clone())?;
    let mut out: Vec<Letter> = Vec::new();
    for &l in &w.letters {
        if x.is_identity(l.1) {
            continue;
        }
        match out.last() {
            Some(&top) if top.0 == l.0 => {
                out.pop();
                let m = merge_letters(x, top, l);
                if !x.is_identity(m.1) {
                    out.push(m);
                }
            }
            _ => out.push(l),
        }
    }
    Ok(ZigzagWord { src: w.src, tgt: w.tgt, letters: out })
}

/// Whitespace separated letters, `f~` for backward, optional leading `@x`.
pub fn parse_word(x: &FinCategory, s: &str) -> Result<ZigzagWord, ZgError> {
    let mut src = None;
    let mut letters = Vec::new();
    for tok in s.split(|c: char| c.is_whitespace() || c == ';').filter(|t| !t.is_empty()) {
        if let Some(o) = tok.strip_prefix('@') {
            src = Some(x.obj(o).ok_or_else(|| ZgError::Unknown(o.into()))?);
            continue;
        }
        let (name, d) = match tok.strip_suffix('~') {
            Some(n) => (n, Dir::Bwd),
            None => (tok, Dir::Fwd),
        };
        letters.push((d, x.mor(name).ok_or_else(|| ZgError::Unknown(name.into()))?));
    }
    let src = match (src, letters.first()) {
        (Some(s), _) => s,
        (None, Some(&l)) => letter_ends(x, l).0,
        (None, None) => return Err(ZgError::NoSource),
    };
    ZigzagWord::new(x, src, letters)
}

/// All normal words of length at most `len`, by source, then length.
pub fn normal_words(x: &FinCategory, len: usize) -> Vec<ZigzagWord> {
    let mut out = Vec::new();
    for o in x.objects() {
        let mut layer = vec![ZigzagWord::empty(o)];
        out.extend(layer.clone());
        for _ in 0..len {
            let mut next = Vec::new();
            for w in &layer {
                let last = w.letters.last().map(|l| l.0);
                for f in x.morphisms().filter(|&f| !x.is_identity(f)) {
                    for d in [Dir::Fwd, Dir::Bwd] {
                        if Some(d) == last || letter_ends(x, (d, f)).0 != w.tgt {
                            continue;
                        }
                        let mut l = w.letters.clone();
                        l.push((d, f));
                        next.push(ZigzagWord { src: w.src, tgt: letter_ends(x, (d, f)).1, letters: l });
                    }
                }
            }
            out.extend(next.clone());
            layer = next;
        }
    }
    out
}

/// Generating 2-cells `η_f : id ⇒ f f̄` and `ε_f : f̄ f ⇒ id`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ZgGen {
    Eta(Mor),
    Eps(Mor),
}

/// `Zg(X)`: 1-cells are normal words.
#[derive(Clone, Debug)]
pub struct Zg {
    pub base: Arc<FinCategory>,
}

pub type ZgExpr = Expr<ZigzagWord, ZgGen>;

impl Zg {
    pub fn new(base: Arc<FinCategory>) -> Self {
        Zg { base }
    }

    pub fn nf(&self, src: Ob, letters: Vec<Letter>) -> ZigzagWord {
        let w = ZigzagWord::new(&self.base, src, letters).expect("typed word");
        zg_normalize(&self.base, &w).expect("typed word")
    }

    pub fn fwd(&self, f: Mor) -> ZigzagWord {
        self.nf(self.base.dom(f), vec![(Dir::Fwd, f)])
    }

    pub fn bwd(&self, f: Mor) -> ZigzagWord {
        self.nf(self.base.cod(f), vec![(Dir::Bwd, f)])
    }

    pub fn eta(&self, f: Mor) -> ZgExpr {
        Expr::Gen(ZgGen::Eta(f))
    }

    pub fn eps(&self, f: Mor) -> ZgExpr {
        Expr::Gen(ZgGen::Eps(f))
    }

    pub fn id(&self, w: ZigzagWord) -> ZgExpr {
        Expr::Id(w)
    }

    pub fn display(&self, e: &ZgExpr) -> String {
        let x = &*self.base;
        match e {
            Expr::Gen(ZgGen::Eta(f)) => format!("eta[{}]", x.mor_name(*f)),
            Expr::Gen(ZgGen::Eps(f)) => format!("eps[{}]", x.mor_name(*f)),
            Expr::Id(w) => format!("id[{}]", w.display(x)),
            Expr::Chain(op, xs) => {
                let sep = match op {
                    twocell::Op::Vert => " ; ",
                    twocell::Op::Horiz => " ^ ",
                    twocell::Op::Tensor => " * ",
                };
                let parts: Vec<String> = xs.iter().map(|y| self.display(y)).collect();
                format!("({})", parts.join(sep))
            }
        }
    }
}

impl OneCells for Zg {
    type One = ZigzagWord;
    type Gen = ZgGen;

    fn gen_boundary(&self, g: &ZgGen) -> (ZigzagWord, ZigzagWord) {
        let x = &*self.base;
        match *g {
            ZgGen::Eta(f) => (ZigzagWord::empty(x.dom(f)), self.nf(x.dom(f), vec![(Dir::Fwd, f), (Dir::Bwd, f)])),
            ZgGen::Eps(f) => (self.nf(x.cod(f), vec![(Dir::Bwd, f), (Dir::Fwd, f)]), ZigzagWord::empty(x.cod(f))),
        }
    }

    fn compose(&self, a: &ZigzagWord, b: &ZigzagWord) -> Option<ZigzagWord> {
        a.then(b).map(|w| zg_normalize(&self.base, &w).expect("typed"))
    }

    fn is_identity_one(&self, a: &ZigzagWord) -> bool {
        a.letters.is_empty()
    }

    fn show_one(&self, a: &ZigzagWord) -> String {
        format!("`{}`", a.display(&self.base))
    }
}

pub fn twocell_boundary(zg: &Zg, e: &ZgExpr) -> Result<(ZigzagWord, ZigzagWord), BoundaryError> {
    twocell::boundary(zg, e)
}

/// Triangle laws, identity laws and the two composite expansions, for
/// every morphism and composable pair of non-identities in the base.
pub fn zg_axioms(zg: &Zg) -> Vec<Axiom<ZigzagWord, ZgGen>> {
    let x = &*zg.base;
    let mut out = Vec::new();
    let ax = |name: String, lhs: ZgExpr, rhs: ZgExpr| Axiom { name, lhs, rhs };
    for o in x.objects() {
        let n = x.obj_name(o);
        let e = zg.id(ZigzagWord::empty(o));
        out.push(ax(format!("eta-id[{n}]"), zg.eta(x.id(o)), e.clone()));
        out.push(ax(format!("eps-id[{n}]"), zg.eps(x.id(o)), e));
    }
    let non_id: Vec<Mor> = x.morphisms().filter(|&f| !x.is_identity(f)).collect();
    for &f in &non_id {
        let n = x.mor_name(f);
        let (fw, bw) = (zg.id(zg.fwd(f)), zg.id(zg.bwd(f)));
        out.push(ax(
            format!("zig[{n}]"),
            Expr::vert(Expr::horiz(zg.eta(f), fw.clone()), Expr::horiz(fw.clone(), zg.eps(f))),
            fw.clone(),
        ));
        out.push(ax(
            format!("zag[{n}]"),
            Expr::vert(Expr::horiz(bw.clone(), zg.eta(f)), Expr::horiz(zg.eps(f), bw.clone())),
            bw,
        ));
    }
    for &f in &non_id {
        for &h in non_id.iter().filter(|&&h| x.dom(h) == x.cod(f)) {
            let fh = x.comp(f, h);
            let tag = format!("{},{}", x.mor_name(f), x.mor_name(h));
            let mid = Expr::Chain(twocell::Op::Horiz, vec![zg.id(zg.fwd(f)), zg.eta(h), zg.id(zg.bwd(f))]);
            out.push(ax(format!("eta-comp[{tag}]"), zg.eta(fh), Expr::vert(zg.eta(f), mid)));
            let mid = Expr::Chain(twocell::Op::Horiz, vec![zg.id(zg.bwd(h)), zg.eps(f), zg.id(zg.fwd(h))]);
            out.push(ax(format!("eps-comp[{tag}]"), zg.eps(fh), Expr::vert(mid, zg.eps(h))));
        }
    }
    out
}

pub fn prove_twocells_equal(
    zg: &Zg,
    a: &ZgExpr,
    b: &ZgExpr,
    cfg: &Config2,
) -> Result<Verdict2<ZigzagWord, ZgGen>, BoundaryError> {
    twocell::prove(zg, &zg_axioms(zg), a, b, cfg)
}

pub fn check_zg_trace(zg: &Zg, t: &Trace<ZigzagWord, ZgGen>) -> Result<(), Trace2Error> {
    twocell::check_trace(zg, &zg_axioms(zg), t)
}

/// Morphisms named in an expression.
pub fn mentioned(e: &ZgExpr) -> BTreeSet<Mor> {
    let mut out = BTreeSet::new();
    fn go(e: &ZgExpr, out: &mut BTreeSet<Mor>) {
        match e {
            Expr::Gen(ZgGen::Eta(f) | ZgGen::Eps(f)) => {
                out.insert(*f);
            }
            Expr::Id(w) => out.extend(w.letters.iter().map(|l| l.1)),
            Expr::Chain(_, xs) => xs.iter().for_each(|y| go(y, out)),
        }
    }
    go(e, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("column {col}: {message}")]
pub struct ZgParseError {
    pub col: usize,
    pub message: String,
}

/// `eta[f]`, `eps[f]`, `id[word]`, `;` (vertical), `^` (horizontal),
/// `*` (tensor, monoidal variant only), parentheses.
pub fn parse_zg_expr(zg: &Zg, s: &str) -> Result<ZgExpr, ZgParseError> {
    let mut p = ZP { x: &zg.base, s: s.chars().collect(), i: 0 };
    let e = p.vert()?;
    p.ws();
    if p.i < p.s.len() {
        return p.fail("unexpected trailing input");
    }
    Ok(twocell::normalize(zg, &e))
}

struct ZP<'a> {
    x: &'a FinCategory,
    s: Vec<char>,
    i: usize,
}

impl ZP<'_> {
    fn fail<T>(&self, m: &str) -> Result<T, ZgParseError> {
        Err(ZgParseError { col: self.i + 1, message: m.into() })
    }

    fn ws(&mut self) {
        while self.s.get(self.i).is_some_and(|c| c.is_whitespace()) {
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

    fn chain(&mut self, op: twocell::Op, sep: char, next: fn(&mut Self) -> Result<ZgExpr, ZgParseError>) -> Result<ZgExpr, ZgParseError> {
        let mut xs = vec![next(self)?];
        while self.eat(sep) {
            xs.push(next(self)?);
        }
        Ok(if xs.len() == 1 { xs.pop().unwrap() } else { Expr::Chain(op, xs) })
    }

    fn vert(&mut self) -> Result<ZgExpr, ZgParseError> {
        self.chain(twocell::Op::Vert, ';', Self::tens)
    }

    fn tens(&mut self) -> Result<ZgExpr, ZgParseError> {
        self.chain(twocell::Op::Tensor, '*', Self::horiz)
    }

    fn horiz(&mut self) -> Result<ZgExpr, ZgParseError> {
        self.chain(twocell::Op::Horiz, '^', Self::atom)
    }

    fn bracket(&mut self) -> Result<String, ZgParseError> {
        if !self.eat('[') {
            return self.fail("expected `[`");
        }
        let start = self.i;
        while self.s.get(self.i).is_some_and(|&c| c != ']') {
            self.i += 1;
        }
        if self.i >= self.s.len() {
            return self.fail("unclosed `[`");
        }
        let t: String = self.s[start..self.i].iter().collect();
        self.i += 1;
        Ok(t.trim().to_string())
    }

    fn atom(&mut self) -> Result<ZgExpr, ZgParseError> {
        if self.eat('(') {
            let e = self.vert()?;
            if !self.eat(')') {
                return self.fail("expected `)`");
            }
            return Ok(e);
        }
        self.ws();
        let start = self.i;
        while self.s.get(self.i).is_some_and(|c| c.is_alphanumeric()) {
            self.i += 1;
        }
        let kw: String = self.s[start..self.i].iter().collect();
        let col = start + 1;
        let arg = self.bracket()?;
        let bad = |m: String| ZgParseError { col, message: m };
        match kw.as_str() {
            "eta" | "eps" => {
                let f = self.x.mor(&arg).ok_or_else(|| bad(format!("unknown morphism `{arg}`")))?;
                Ok(Expr::Gen(if kw == "eta" { ZgGen::Eta(f) } else { ZgGen::Eps(f) }))
            }
            "id" => {
                let w = parse_word(self.x, &arg).map_err(|e| bad(e.to_string()))?;
                Ok(Expr::Id(zg_normalize(self.x, &w).map_err(|e| bad(e.to_string()))?))
            }
            _ => Err(bad(format!("expected eta, eps or id, found `{kw}`"))),
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dir::Fwd => "fwd",
            Dir::Bwd => "bwd",
        })
    }
}
