/*!
Monoidal signatures, terms and theories.

Terms are trees over generators, `id_a`, `id_ε`, `;` and `⊗`. Equality up to
the structural identities is decided by [`diagram::Diagram`] normal forms;
equality in a theory by the bounded, trace-producing search in [`prover`].

The linear syntax writes `;` for composition, `*` for tensor (binding
tighter), `id[a b]` for identities on words and `id[]` for `id_ε`.
*/

pub mod diagram;
pub mod model;
pub mod mth;
pub mod prover;
pub mod theories;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use diagram::Diagram;
pub use prover::{prove_equal, ProverConfig, Verdict};

pub type Colour = usize;
pub type GenId = usize;
pub type Word = Vec<Colour>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub name: String,
    pub dom: Word,
    pub cod: Word,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MonSignature {
    pub colours: Vec<String>,
    pub generators: Vec<Generator>,
}

impl MonSignature {
    pub fn colour(&self, name: &str) -> Option<Colour> {
        self.colours.iter().position(|c| c == name)
    }

    pub fn generator(&self, name: &str) -> Option<GenId> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Adds a colour unless present; returns its index.
    pub fn add_colour(&mut self, name: &str) -> Colour {
        match self.colour(name) {
            Some(c) => c,
            None => {
                self.colours.push(name.to_string());
                self.colours.len() - 1
            }
        }
    }

    /// Adds a generator unless one with this name exists.
    pub fn add_generator(&mut self, name: &str, dom: Word, cod: Word) -> GenId {
        match self.generator(name) {
            Some(g) => g,
            None => {
                self.generators.push(Generator { name: name.to_string(), dom, cod });
                self.generators.len() - 1
            }
        }
    }

    pub fn word_name(&self, w: &[Colour]) -> String {
        w.iter().map(|&c| self.colours[c].as_str()).collect::<Vec<_>>().join(" ")
    }

    pub fn gen(&self, g: GenId) -> &Generator {
        &self.generators[g]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MonTerm {
    Gen(GenId),
    Id(Colour),
    IdEps,
    Comp(Box<MonTerm>, Box<MonTerm>),
    Tensor(Box<MonTerm>, Box<MonTerm>),
}

impl MonTerm {
    pub fn comp(a: MonTerm, b: MonTerm) -> MonTerm {
        MonTerm::Comp(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: MonTerm, b: MonTerm) -> MonTerm {
        MonTerm::Tensor(Box::new(a), Box::new(b))
    }

    /// Right-nested tensor of `id_a`, or `id_ε` for the empty word.
    pub fn id_word(w: &[Colour]) -> MonTerm {
        match w {
            [] => MonTerm::IdEps,
            [a] => MonTerm::Id(*a),
            [a, rest @ ..] => MonTerm::tensor(MonTerm::Id(*a), MonTerm::id_word(rest)),
        }
    }

    /// Left-nested composite; `None` for an empty list.
    pub fn comp_all(ts: Vec<MonTerm>) -> Option<MonTerm> {
        ts.into_iter().reduce(MonTerm::comp)
    }

    pub fn size(&self) -> usize {
        match self {
            MonTerm::Gen(_) | MonTerm::Id(_) | MonTerm::IdEps => 1,
            MonTerm::Comp(a, b) | MonTerm::Tensor(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn display<'a>(&'a self, sig: &'a MonSignature) -> TermDisplay<'a> {
        TermDisplay { t: self, sig }
    }

    /// Whether only identities and tensors occur.
    pub fn is_identity_term(&self) -> bool {
        match self {
            MonTerm::Id(_) | MonTerm::IdEps => true,
            MonTerm::Tensor(a, b) => a.is_identity_term() && b.is_identity_term(),
            _ => false,
        }
    }
}

pub struct TermDisplay<'a> {
    t: &'a MonTerm,
    sig: &'a MonSignature,
}

impl TermDisplay<'_> {
    fn write(&self, t: &MonTerm, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        // ctx: 0 top, 1 inside tensor, 2 inside composite's right/left at tensor level
        match t {
            MonTerm::Gen(g) => write!(f, "{}", self.sig.generators[*g].name),
            MonTerm::Id(_) | MonTerm::IdEps | MonTerm::Tensor(..) if t.is_identity_term() => {
                let mut w = Vec::new();
                collect_id_word(t, &mut w);
                write!(f, "id[{}]", self.sig.word_name(&w))
            }
            MonTerm::Id(_) | MonTerm::IdEps => unreachable!(),
            MonTerm::Comp(a, b) => {
                if ctx > 0 {
                    write!(f, "(")?;
                }
                self.write(a, f, 0)?;
                write!(f, " ; ")?;
                self.write(b, f, 0)?;
                if ctx > 0 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            MonTerm::Tensor(a, b) => {
                if ctx > 1 {
                    write!(f, "(")?;
                }
                self.write(a, f, 1)?;
                write!(f, " * ")?;
                self.write(b, f, 2)?;
                if ctx > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

fn collect_id_word(t: &MonTerm, w: &mut Word) {
    match t {
        MonTerm::Id(a) => w.push(*a),
        MonTerm::IdEps => {}
        MonTerm::Tensor(a, b) => {
            collect_id_word(a, w);
            collect_id_word(b, w);
        }
        _ => {}
    }
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.t, f, 0)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize)]
pub enum SortError {
    #[error("composite `{term}` has middle words `{left}` and `{right}`")]
    Mismatch { term: String, left: String, right: String },
    #[error("unknown generator id {0}")]
    UnknownGenerator(usize),
}

/// `(domain, codomain)` of a term.
pub fn sort_of(sig: &MonSignature, t: &MonTerm) -> Result<(Word, Word), SortError> {
    match t {
        MonTerm::Gen(g) => {
            let g = sig.generators.get(*g).ok_or(SortError::UnknownGenerator(*g))?;
            Ok((g.dom.clone(), g.cod.clone()))
        }
        MonTerm::Id(a) => Ok((vec![*a], vec![*a])),
        MonTerm::IdEps => Ok((vec![], vec![])),
        MonTerm::Comp(a, b) => {
            let (d, m1) = sort_of(sig, a)?;
            let (m2, c) = sort_of(sig, b)?;
            if m1 != m2 {
                return Err(SortError::Mismatch {
                    term: t.display(sig).to_string(),
                    left: sig.word_name(&m1),
                    right: sig.word_name(&m2),
                });
            }
            Ok((d, c))
        }
        MonTerm::Tensor(a, b) => {
            let (mut d1, mut c1) = sort_of(sig, a)?;
            let (d2, c2) = sort_of(sig, b)?;
            d1.extend(d2);
            c1.extend(c2);
            Ok((d1, c1))
        }
    }
}

/// Two parallel terms, named for traces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub name: String,
    pub lhs: MonTerm,
    pub rhs: MonTerm,
}

/// "For all terms `s`" equation families, instantiated on demand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Schema {
    /// `(s ⊗ id_c);σ = σ;(id_c ⊗ s)` and its mirror, for every colour `c`.
    SymmetryNaturality,
    /// `s;d = d;(s ⊗ s)`.
    DiagonalNaturality,
    /// `s;e = e`.
    CounitNaturality,
}

/// Structure packs whose generator names are looked up by the schemas.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Packs {
    /// `σ_{a,b}` per ordered pair of colours.
    pub symmetry: Option<Vec<Vec<GenId>>>,
    /// `(d_a, e_a)` per colour.
    pub comonoid: Option<Vec<(GenId, GenId)>>,
    /// `(m_a, u_a)` per colour.
    pub monoid: Option<Vec<(GenId, GenId)>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonTheory {
    pub sig: MonSignature,
    pub equations: Vec<Equation>,
    pub schemas: Vec<Schema>,
    pub packs: Packs,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TheoryError {
    #[error("equation `{name}` is not parallel: {lhs} vs {rhs}")]
    NotParallel { name: String, lhs: String, rhs: String },
    #[error(transparent)]
    Sort(#[from] SortError),
}

impl MonTheory {
    pub fn new(sig: MonSignature) -> Self {
        MonTheory { sig, ..Default::default() }
    }

    pub fn add_equation(&mut self, name: &str, lhs: MonTerm, rhs: MonTerm) -> Result<(), TheoryError> {
        let (a, b) = (sort_of(&self.sig, &lhs)?, sort_of(&self.sig, &rhs)?);
        if a != b {
            return Err(TheoryError::NotParallel {
                name: name.into(),
                lhs: lhs.display(&self.sig).to_string(),
                rhs: rhs.display(&self.sig).to_string(),
            });
        }
        self.equations.push(Equation { name: name.into(), lhs, rhs });
        Ok(())
    }

    pub fn has_equations(&self) -> bool {
        !self.equations.is_empty() || !self.schemas.is_empty()
    }

    /// Symmetry on words, built from the single-colour symmetries.
    pub fn swap_word(&self, w: &[Colour], v: &[Colour]) -> Option<MonTerm> {
        let sym = self.packs.symmetry.as_ref()?;
        Some(swap_word(sym, w, v))
    }

    /// `d_w` by the recursion `d_{aw} = (d_a ⊗ d_w);(id_a ⊗ σ_{a,w} ⊗ id_w)`.
    pub fn diag_word(&self, w: &[Colour]) -> Option<MonTerm> {
        let co = self.packs.comonoid.as_ref()?;
        match w {
            [] => Some(MonTerm::IdEps),
            [a] => Some(MonTerm::Gen(co[*a].0)),
            [a, rest @ ..] => {
                let dr = self.diag_word(rest)?;
                let sw = self.swap_word(&[*a], rest)?;
                Some(MonTerm::comp(
                    MonTerm::tensor(MonTerm::Gen(co[*a].0), dr),
                    MonTerm::tensor(MonTerm::Id(*a), MonTerm::tensor(sw, MonTerm::id_word(rest))),
                ))
            }
        }
    }

    /// `e_w = e_a ⊗ e_w'`.
    pub fn counit_word(&self, w: &[Colour]) -> Option<MonTerm> {
        let co = self.packs.comonoid.as_ref()?;
        match w {
            [] => Some(MonTerm::IdEps),
            [a] => Some(MonTerm::Gen(co[*a].1)),
            [a, rest @ ..] => Some(MonTerm::tensor(MonTerm::Gen(co[*a].1), self.counit_word(rest)?)),
        }
    }

    /// Every schema instantiated at every generator, plus the plain equations.
    pub fn instances(&self) -> Vec<Equation> {
        let mut out = self.equations.clone();
        for sc in &self.schemas {
            for (g, gen) in self.sig.generators.iter().enumerate() {
                let s = MonTerm::Gen(g);
                let (d, c) = (&gen.dom, &gen.cod);
                match sc {
                    Schema::SymmetryNaturality => {
                        for k in 0..self.sig.colours.len() {
                            let (Some(s1), Some(s2)) = (self.swap_word(c, &[k]), self.swap_word(d, &[k])) else {
                                continue;
                            };
                            out.push(Equation {
                                name: format!("nat-sw[{}|{}]", gen.name, self.sig.colours[k]),
                                lhs: MonTerm::comp(MonTerm::tensor(s.clone(), MonTerm::Id(k)), s1),
                                rhs: MonTerm::comp(s2, MonTerm::tensor(MonTerm::Id(k), s.clone())),
                            });
                            let (Some(s3), Some(s4)) = (self.swap_word(&[k], c), self.swap_word(&[k], d)) else {
                                continue;
                            };
                            out.push(Equation {
                                name: format!("nat-sw[{}|{}]", self.sig.colours[k], gen.name),
                                lhs: MonTerm::comp(MonTerm::tensor(MonTerm::Id(k), s.clone()), s3),
                                rhs: MonTerm::comp(s4, MonTerm::tensor(s.clone(), MonTerm::Id(k))),
                            });
                        }
                    }
                    Schema::DiagonalNaturality => {
                        let (Some(dc), Some(dd)) = (self.diag_word(c), self.diag_word(d)) else { continue };
                        out.push(Equation {
                            name: format!("nat-d[{}]", gen.name),
                            lhs: MonTerm::comp(s.clone(), dc),
                            rhs: MonTerm::comp(dd, MonTerm::tensor(s.clone(), s.clone())),
                        });
                    }
                    Schema::CounitNaturality => {
                        let (Some(ec), Some(ed)) = (self.counit_word(c), self.counit_word(d)) else { continue };
                        out.push(Equation { name: format!("nat-e[{}]", gen.name), lhs: MonTerm::comp(s, ec), rhs: ed });
                    }
                }
            }
        }
        out
    }
}

pub(crate) fn swap_word(sym: &[Vec<GenId>], w: &[Colour], v: &[Colour]) -> MonTerm {
    match (w, v) {
        ([], _) => MonTerm::id_word(v),
        (_, []) => MonTerm::id_word(w),
        ([a], [b]) => MonTerm::Gen(sym[*a][*b]),
        ([a], [b, rest @ ..]) => MonTerm::comp(
            MonTerm::tensor(MonTerm::Gen(sym[*a][*b]), MonTerm::id_word(rest)),
            MonTerm::tensor(MonTerm::Id(*b), swap_word(sym, &[*a], rest)),
        ),
        ([a, rest @ ..], _) => MonTerm::comp(
            MonTerm::tensor(MonTerm::Id(*a), swap_word(sym, rest, v)),
            MonTerm::tensor(swap_word(sym, &[*a], v), MonTerm::id_word(rest)),
        ),
    }
}

/// Colour and generator maps between signatures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigMorphism {
    pub colours: Vec<Colour>,
    pub generators: Vec<GenId>,
}

impl SigMorphism {
    pub fn identity(sig: &MonSignature) -> Self {
        SigMorphism { colours: (0..sig.colours.len()).collect(), generators: (0..sig.generators.len()).collect() }
    }

    /// Whether every generator lands on one of the translated sort.
    pub fn is_valid(&self, from: &MonSignature, to: &MonSignature) -> bool {
        from.generators.iter().zip(&self.generators).all(|(g, &h)| {
            to.generators.get(h).is_some_and(|h| {
                h.dom == g.dom.iter().map(|&c| self.colours[c]).collect::<Word>()
                    && h.cod == g.cod.iter().map(|&c| self.colours[c]).collect::<Word>()
            })
        })
    }
}

pub fn apply_signature_morphism(f: &SigMorphism, t: &MonTerm) -> MonTerm {
    match t {
        MonTerm::Gen(g) => MonTerm::Gen(f.generators[*g]),
        MonTerm::Id(a) => MonTerm::Id(f.colours[*a]),
        MonTerm::IdEps => MonTerm::IdEps,
        MonTerm::Comp(a, b) => MonTerm::comp(apply_signature_morphism(f, a), apply_signature_morphism(f, b)),
        MonTerm::Tensor(a, b) => MonTerm::tensor(apply_signature_morphism(f, a), apply_signature_morphism(f, b)),
    }
}

/// Structural equality: equal interchange normal forms.
pub fn equal_structural(sig: &MonSignature, t: &MonTerm, s: &MonTerm) -> Result<bool, TheoryError> {
    let (a, b) = (sort_of(sig, t)?, sort_of(sig, s)?);
    if a != b {
        return Err(TheoryError::NotParallel {
            name: "query".into(),
            lhs: t.display(sig).to_string(),
            rhs: s.display(sig).to_string(),
        });
    }
    Ok(diagram::nf(sig, t) == diagram::nf(sig, s))
}

/// All terms of size at most `max_size` and the given sort.
pub fn enumerate_terms(sig: &MonSignature, dom: &[Colour], cod: &[Colour], max_size: usize) -> Vec<MonTerm> {
    let by_size = terms_by_size(sig, max_size, dom.len().max(cod.len()) + 2);
    by_size
        .into_iter()
        .flatten()
        .filter(|(d, c, _)| d == dom && c == cod)
        .map(|(_, _, t)| t)
        .collect()
}

/// Sorted terms of each size; words longer than `max_word` are dropped.
pub fn terms_by_size(sig: &MonSignature, max_size: usize, max_word: usize) -> Vec<Vec<(Word, Word, MonTerm)>> {
    let mut by: Vec<Vec<(Word, Word, MonTerm)>> = vec![Vec::new(); max_size + 1];
    if max_size == 0 {
        return by;
    }
    for (g, gen) in sig.generators.iter().enumerate() {
        if gen.dom.len() <= max_word && gen.cod.len() <= max_word {
            by[1].push((gen.dom.clone(), gen.cod.clone(), MonTerm::Gen(g)));
        }
    }
    for a in 0..sig.colours.len() {
        by[1].push((vec![a], vec![a], MonTerm::Id(a)));
    }
    by[1].push((vec![], vec![], MonTerm::IdEps));
    for n in 3..=max_size {
        let mut next = Vec::new();
        for l in 1..n - 1 {
            let r = n - 1 - l;
            for (d1, c1, t1) in &by[l] {
                for (d2, c2, t2) in &by[r] {
                    if c1 == d2 {
                        next.push((d1.clone(), c2.clone(), MonTerm::comp(t1.clone(), t2.clone())));
                    }
                    if d1.len() + d2.len() <= max_word && c1.len() + c2.len() <= max_word {
                        let d = [d1.as_slice(), d2].concat();
                        let c = [c1.as_slice(), c2].concat();
                        next.push((d, c, MonTerm::tensor(t1.clone(), t2.clone())));
                    }
                }
            }
        }
        by[n] = next;
    }
    by
}

/// Classes of `hom(a, b)` among terms up to `size_bound`: grouped by normal
/// form, then merged by the prover. The flag is set when unmerged classes
/// may still be equal.
pub fn enumerate_hom(
    th: &MonTheory,
    dom: &[Colour],
    cod: &[Colour],
    size_bound: usize,
    cfg: &ProverConfig,
) -> (Vec<Vec<Diagram>>, bool) {
    let mut nfs: Vec<Diagram> = enumerate_terms(&th.sig, dom, cod, size_bound)
        .iter()
        .map(|t| diagram::nf(&th.sig, t))
        .collect();
    nfs.sort();
    nfs.dedup();
    let mut classes: Vec<Vec<Diagram>> = Vec::new();
    for d in nfs {
        let found = classes.iter_mut().find(|c| {
            th.has_equations() && matches!(prover::prove_diagrams(th, &c[0], &d, cfg), Verdict::Proved(_))
        });
        match found {
            Some(c) => c.push(d),
            None => classes.push(vec![d]),
        }
    }
    (classes, th.has_equations())
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{message} at column {col}")]
pub struct TermParseError {
    pub col: usize,
    pub message: String,
}

/// Parses the linear syntax against a signature.
pub fn parse_term(sig: &MonSignature, src: &str) -> Result<MonTerm, TermParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, sig };
    let t = p.comp()?;
    if p.pos < p.toks.len() {
        return Err(p.error("unexpected token"));
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Semi,
    Star,
    LParen,
    RParen,
    LBrack,
    RBrack,
}

pub(crate) fn is_name_char(c: char) -> bool {
    !c.is_whitespace() && !";*()[]=:,|".contains(c)
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, TermParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let t = match c {
            _ if c.is_whitespace() => {
                i += 1;
                continue;
            }
            ';' => Tok::Semi,
            '*' => Tok::Star,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            _ if is_name_char(c) => {
                let start = i;
                while i < chars.len() && is_name_char(chars[i]) {
                    i += 1;
                }
                out.push((start, Tok::Name(chars[start..i].iter().collect())));
                continue;
            }
            _ => return Err(TermParseError { col: i + 1, message: format!("unexpected `{c}`") }),
        };
        out.push((i, t));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    sig: &'a MonSignature,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> TermParseError {
        let col = self.toks.get(self.pos).map(|t| t.0 + 1).unwrap_or(0);
        TermParseError { col, message: message.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn comp(&mut self) -> Result<MonTerm, TermParseError> {
        let mut t = self.tensor()?;
        while self.peek() == Some(&Tok::Semi) {
            self.pos += 1;
            t = MonTerm::comp(t, self.tensor()?);
        }
        Ok(t)
    }

    fn tensor(&mut self) -> Result<MonTerm, TermParseError> {
        let mut t = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            t = MonTerm::tensor(t, self.atom()?);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<MonTerm, TermParseError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.comp()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(t)
            }
            Some(Tok::Name(n)) if n == "id" && self.toks.get(self.pos + 1).map(|t| &t.1) == Some(&Tok::LBrack) => {
                self.pos += 2;
                let mut w = Vec::new();
                while let Some(Tok::Name(c)) = self.peek().cloned() {
                    let col = self.sig.colour(&c).ok_or_else(|| self.error(&format!("unknown colour `{c}`")))?;
                    w.push(col);
                    self.pos += 1;
                }
                if self.peek() != Some(&Tok::RBrack) {
                    return Err(self.error("expected `]`"));
                }
                self.pos += 1;
                Ok(MonTerm::id_word(&w))
            }
            Some(Tok::Name(n)) => {
                let g = self.sig.generator(&n).ok_or_else(|| self.error(&format!("unknown generator `{n}`")))?;
                self.pos += 1;
                Ok(MonTerm::Gen(g))
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::theories::builtin_theory;
    use super::*;

    #[test]
    fn sorts_and_syntax() {
        let th = builtin_theory("monoids", &[]).unwrap();
        let sig = &th.sig;
        let m = parse_term(sig, "m").unwrap();
        assert_eq!(sort_of(sig, &m).unwrap(), (vec![0, 0], vec![0]));
        let t = parse_term(sig, "(m * id[•]) ; m").unwrap();
        assert_eq!(t.display(sig).to_string(), "m * id[•] ; m");
        assert_eq!(parse_term(sig, &t.display(sig).to_string()).unwrap(), t);
        assert!(sort_of(sig, &parse_term(sig, "m ; m").unwrap()).is_err());
        assert_eq!(sort_of(sig, &parse_term(sig, "id[]").unwrap()).unwrap(), (vec![], vec![]));
        assert!(parse_term(sig, "m ; q").is_err());
    }

    #[test]
    fn tensor_with_identity_sort() {
        let mut sig = MonSignature::default();
        for c in ["a", "b", "c"] {
            sig.add_colour(c);
        }
        let s = sig.add_generator("s", vec![1], vec![2]);
        let t = MonTerm::tensor(MonTerm::Id(0), MonTerm::Gen(s));
        assert_eq!(sort_of(&sig, &t).unwrap(), (vec![0, 1], vec![0, 2]));
    }

    #[test]
    fn structural_examples() {
        let mut sig = MonSignature::default();
        sig.add_colour("a");
        sig.add_colour("b");
        sig.add_generator("t", vec![0], vec![1]);
        sig.add_generator("s", vec![1], vec![0]);
        sig.add_generator("r", vec![1], vec![0]);
        let p = |s: &str| parse_term(&sig, s).unwrap();
        assert!(equal_structural(&sig, &p("(t * id[b]) ; (id[b] * s)"), &p("t * s")).unwrap());
        assert!(!equal_structural(&sig, &p("s"), &p("r")).unwrap());
        assert!(equal_structural(&sig, &p("id[a b]"), &p("id[a] * id[b]")).unwrap());
        assert!(equal_structural(&sig, &p("id[] * t ; id[b]"), &p("t")).unwrap());
        assert!(equal_structural(&sig, &p("t"), &p("s")).is_err());
    }

    #[test]
    fn signature_morphisms() {
        let th = builtin_theory("monoids", &[]).unwrap();
        let t = parse_term(&th.sig, "(m * id[•]) ; m").unwrap();
        let id = SigMorphism::identity(&th.sig);
        assert_eq!(apply_signature_morphism(&id, &t), t);
        let mut two = MonSignature::default();
        two.add_colour("a");
        two.add_colour("b");
        two.add_generator("f", vec![0], vec![1]);
        two.add_generator("g", vec![0], vec![1]);
        let mut one = MonSignature::default();
        one.add_colour("x");
        one.add_generator("h", vec![0], vec![0]);
        let merge = SigMorphism { colours: vec![0, 0], generators: vec![0, 0] };
        assert!(merge.is_valid(&two, &one));
        assert_eq!(apply_signature_morphism(&merge, &MonTerm::Id(1)), MonTerm::Id(0));
        let t = parse_term(&two, "f * id[a] ; id[b] * g").unwrap();
        let u = apply_signature_morphism(&merge, &t);
        assert_eq!(u.display(&one).to_string(), "h * id[x] ; id[x] * h");
        assert_eq!(sort_of(&one, &u).unwrap(), (vec![0, 0], vec![0, 0]));
    }

    #[test]
    fn hom_enumeration() {
        let mut sig = MonSignature::default();
        sig.add_colour("a");
        sig.add_colour("b");
        sig.add_generator("σ", vec![0], vec![1]);
        let th = MonTheory::new(sig);
        let cfg = ProverConfig::default();
        let (cl, inc) = enumerate_hom(&th, &[0], &[1], 3, &cfg);
        assert_eq!(cl.len(), 1);
        assert!(!inc);
        let (cl, _) = enumerate_hom(&th, &[], &[], 3, &cfg);
        assert_eq!(cl.len(), 1);
        assert!(cl[0][0].slices.is_empty());
        let mon = builtin_theory("monoids", &[]).unwrap();
        let (cl, inc) = enumerate_hom(&mon, &[0, 0, 0], &[0], 6, &cfg);
        assert_eq!(cl.len(), 1);
        assert!(inc);
    }
}
