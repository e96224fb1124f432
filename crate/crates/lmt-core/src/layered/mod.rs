//! Layered syntax: signatures, types, terms, 2-terms and bounded provers.
//!
//! Types are kept in canonical form, an external list of wires, each wire a
//! layer and a word of primes. A prime is a colour with a path of boundary
//! generators applied to it, so `f(AB)` and `f(A)f(B)` have the same form.
//! Terms flatten to [`LDiagram`]s whose slices act either on an external
//! wire as a whole or on one internal position of a wire.

pub mod diagram;
pub mod lmt;
pub mod morphism;
pub mod prover;
pub mod term;
pub mod two;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::montheory::{Colour, GenId, MonSignature, MonTheory, Word};

pub use diagram::{Atom, IWire, LDiagram};
pub use prover::{prove_eq1, LVerdict, Prover1Config};
pub use term::{typecheck_term, LTerm, TermError, Typed};
pub use two::{prove_eq2, typecheck_2term, TwoTerm};

pub type Layer = usize;
pub type Bnd = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryGen {
    pub name: String,
    pub dom: Layer,
    pub cod: Layer,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LayeredSignature {
    pub layers: Vec<String>,
    pub sigs: Vec<MonSignature>,
    pub boundaries: Vec<BoundaryGen>,
}

impl LayeredSignature {
    pub fn layer(&self, name: &str) -> Option<Layer> {
        self.layers.iter().position(|l| l == name)
    }

    pub fn boundary(&self, name: &str) -> Option<Bnd> {
        self.boundaries.iter().position(|b| b.name == name)
    }

    pub fn add_layer(&mut self, name: &str, sig: MonSignature) -> Layer {
        self.layers.push(name.to_string());
        self.sigs.push(sig);
        self.layers.len() - 1
    }

    pub fn add_boundary(&mut self, name: &str, dom: Layer, cod: Layer) -> Bnd {
        self.boundaries.push(BoundaryGen { name: name.to_string(), dom, cod });
        self.boundaries.len() - 1
    }
}

/// Type syntax before canonicalisation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LType {
    /// `ε:ε`, the empty external list.
    Unit,
    /// `ε:ω`
    Eps(Layer),
    Col(Layer, Colour),
    App(Bnd, Box<LType>),
    /// In-layer concatenation.
    Cat(Box<LType>, Box<LType>),
    /// External list.
    Ext(Box<LType>, Box<LType>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Prime {
    pub base: Layer,
    pub colour: Colour,
    /// Boundary generators, innermost first.
    pub path: Vec<Bnd>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CWire {
    pub layer: Layer,
    pub word: Vec<Prime>,
}

pub type CType = Vec<CWire>;

#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize)]
pub enum TypeError {
    #[error("unknown colour {0} in layer {1}")]
    UnknownColour(Colour, String),
    #[error("unknown layer {0}")]
    UnknownLayer(Layer),
    #[error("unknown boundary generator {0}")]
    UnknownBoundary(Bnd),
    #[error("external list where an internal type is required")]
    NotInternal,
    #[error("layer {found} where {expected} is required")]
    LayerMismatch { expected: String, found: String },
    #[error("boundary path deeper than the universe bound")]
    TooDeep,
}

pub fn canonical_type(sig: &LayeredSignature, t: &LType) -> Result<CType, TypeError> {
    let single = |t: &LType| -> Result<CWire, TypeError> {
        let mut c = canonical_type(sig, t)?;
        if c.len() != 1 {
            return Err(TypeError::NotInternal);
        }
        Ok(c.pop().expect("one wire"))
    };
    Ok(match t {
        LType::Unit => Vec::new(),
        LType::Eps(l) => {
            if *l >= sig.layers.len() {
                return Err(TypeError::UnknownLayer(*l));
            }
            vec![CWire { layer: *l, word: Vec::new() }]
        }
        LType::Col(l, c) => {
            let s = sig.sigs.get(*l).ok_or(TypeError::UnknownLayer(*l))?;
            if *c >= s.colours.len() {
                return Err(TypeError::UnknownColour(*c, sig.layers[*l].clone()));
            }
            vec![CWire { layer: *l, word: vec![Prime { base: *l, colour: *c, path: Vec::new() }] }]
        }
        LType::App(f, a) => {
            let b = sig.boundaries.get(*f).ok_or(TypeError::UnknownBoundary(*f))?;
            let w = single(a)?;
            if w.layer != b.dom {
                return Err(TypeError::LayerMismatch {
                    expected: sig.layers[b.dom].clone(),
                    found: sig.layers[w.layer].clone(),
                });
            }
            let word = w
                .word
                .into_iter()
                .map(|mut p| {
                    p.path.push(*f);
                    p
                })
                .collect();
            vec![CWire { layer: b.cod, word }]
        }
        LType::Cat(a, b) => {
            let (x, y) = (single(a)?, single(b)?);
            if x.layer != y.layer {
                return Err(TypeError::LayerMismatch {
                    expected: sig.layers[x.layer].clone(),
                    found: sig.layers[y.layer].clone(),
                });
            }
            vec![CWire { layer: x.layer, word: [x.word, y.word].concat() }]
        }
        LType::Ext(a, b) => [canonical_type(sig, a)?, canonical_type(sig, b)?].concat(),
    })
}

pub fn prime_name(sig: &LayeredSignature, p: &Prime) -> String {
    let mut s = sig.sigs[p.base].colours[p.colour].clone();
    for &f in &p.path {
        s = format!("{}({s})", sig.boundaries[f].name);
    }
    s
}

/// `word:layer` per wire, `ε` for an empty word, `ε:ε` for the empty list.
pub fn ctype_name(sig: &LayeredSignature, t: &[CWire]) -> String {
    if t.is_empty() {
        return "ε:ε".into();
    }
    let wires: Vec<String> = t
        .iter()
        .map(|w| {
            let word = if w.word.is_empty() {
                "ε".to_string()
            } else {
                w.word.iter().map(|p| prime_name(sig, p)).collect::<Vec<_>>().join(" ")
            };
            format!("{}:{}", word, sig.layers[w.layer])
        })
        .collect();
    wires.join(", ")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Tri {
    True,
    False,
    Unknown,
}

/// 0-congruence under ground equations `e0`, by breadth-first rewriting
/// of canonical forms. `bound` caps visited types and the extra word length.
pub fn types_congruent(th: &LayeredTheory, t: &[CWire], s: &[CWire], bound: usize) -> Tri {
    if t == s {
        return Tri::True;
    }
    if t.len() != s.len() || t.iter().zip(s).any(|(a, b)| a.layer != b.layer) {
        return Tri::False;
    }
    if th.e0.is_empty() {
        return Tri::False;
    }
    // close the ground pairs under boundary application
    let mut pairs: Vec<(CWire, CWire)> = th.e0.clone();
    let mut i = 0;
    while i < pairs.len() && pairs.len() < bound {
        let (a, b) = pairs[i].clone();
        for (f, bg) in th.sig.boundaries.iter().enumerate() {
            if bg.dom == a.layer && a.word.iter().chain(&b.word).all(|p| p.path.len() < th.universe.depth) {
                let app = |w: &CWire| CWire {
                    layer: bg.cod,
                    word: w
                        .word
                        .iter()
                        .map(|p| {
                            let mut p = p.clone();
                            p.path.push(f);
                            p
                        })
                        .collect(),
                };
                let np = (app(&a), app(&b));
                if !pairs.contains(&np) {
                    pairs.push(np);
                }
            }
        }
        i += 1;
    }
    let max_len = t.iter().chain(s).map(|w| w.word.len()).max().unwrap_or(0) + 2;
    let mut seen: HashSet<CType> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(t.to_vec());
    queue.push_back(t.to_vec());
    while let Some(cur) = queue.pop_front() {
        for (wi, w) in cur.iter().enumerate() {
            for (a, b) in &pairs {
                if a.layer != w.layer {
                    continue;
                }
                for (from, to) in [(a, b), (b, a)] {
                    let n = from.word.len();
                    if n > w.word.len() {
                        continue;
                    }
                    for at in 0..=w.word.len() - n {
                        if w.word[at..at + n] != from.word[..] {
                            continue;
                        }
                        let mut word = w.word[..at].to_vec();
                        word.extend_from_slice(&to.word);
                        word.extend_from_slice(&w.word[at + n..]);
                        if word.len() > max_len {
                            continue;
                        }
                        let mut next = cur.clone();
                        next[wi] = CWire { layer: w.layer, word };
                        if next == s {
                            return Tri::True;
                        }
                        if seen.insert(next.clone()) {
                            if seen.len() > bound {
                                return Tri::Unknown;
                            }
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
    }
    Tri::False
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BoxedGen {
    pub base: Layer,
    pub gen: GenId,
    pub path: Vec<Bnd>,
}

/// Every prime and boxed generator up to a path depth, interned into one
/// monoidal signature shared by all layers.
#[derive(Clone, Debug, Serialize)]
pub struct Universe {
    pub sig: MonSignature,
    pub depth: usize,
    pub primes: Vec<Prime>,
    pub prime_layer: Vec<Layer>,
    pub gens: Vec<BoxedGen>,
    pub gen_layer: Vec<Layer>,
    /// Domain and codomain layer of each boundary generator.
    pub bnd: Vec<(Layer, Layer)>,
    #[serde(skip)]
    prime_ix: HashMap<Prime, Colour>,
    #[serde(skip)]
    gen_ix: HashMap<BoxedGen, GenId>,
}

fn unique_name(taken: &HashSet<String>, name: String, layer: &str) -> String {
    if taken.contains(&name) {
        format!("{name}@{layer}")
    } else {
        name
    }
}

impl Universe {
    pub fn new(sig: &LayeredSignature, depth: usize) -> Self {
        let mut u = Universe {
            sig: MonSignature::default(),
            depth,
            primes: Vec::new(),
            prime_layer: Vec::new(),
            gens: Vec::new(),
            gen_layer: Vec::new(),
            bnd: sig.boundaries.iter().map(|b| (b.dom, b.cod)).collect(),
            prime_ix: HashMap::new(),
            gen_ix: HashMap::new(),
        };
        let mut paths: Vec<(Layer, Vec<Bnd>, Layer)> = (0..sig.layers.len()).map(|l| (l, Vec::new(), l)).collect();
        let mut i = 0;
        while i < paths.len() {
            let (base, p, at) = paths[i].clone();
            if p.len() < depth {
                for (f, b) in sig.boundaries.iter().enumerate() {
                    if b.dom == at {
                        let mut q = p.clone();
                        q.push(f);
                        paths.push((base, q, b.cod));
                    }
                }
            }
            i += 1;
        }
        let mut colour_names = HashSet::new();
        let mut gen_names = HashSet::new();
        for (base, path, at) in &paths {
            for c in 0..sig.sigs[*base].colours.len() {
                let p = Prime { base: *base, colour: c, path: path.clone() };
                let name = unique_name(&colour_names, prime_name(sig, &p), &sig.layers[*at]);
                colour_names.insert(name.clone());
                let id = u.sig.add_colour(&name);
                u.prime_ix.insert(p.clone(), id);
                u.primes.push(p);
                u.prime_layer.push(*at);
            }
        }
        for (base, path, at) in &paths {
            let ls = &sig.sigs[*base];
            for (g, gen) in ls.generators.iter().enumerate() {
                let map = |w: &Word| -> Word {
                    w.iter()
                        .map(|&c| u.prime_ix[&Prime { base: *base, colour: c, path: path.clone() }])
                        .collect()
                };
                let (d, c) = (map(&gen.dom), map(&gen.cod));
                let mut name = gen.name.clone();
                for &f in path {
                    name = format!("{}({name})", sig.boundaries[f].name);
                }
                let name = unique_name(&gen_names, name, &sig.layers[*at]);
                gen_names.insert(name.clone());
                let id = u.sig.add_generator(&name, d, c);
                let bg = BoxedGen { base: *base, gen: g, path: path.clone() };
                u.gen_ix.insert(bg.clone(), id);
                u.gens.push(bg);
                u.gen_layer.push(*at);
            }
        }
        u
    }

    pub fn prime(&self, p: &Prime) -> Option<Colour> {
        self.prime_ix.get(p).copied()
    }

    pub fn boxed(&self, g: &BoxedGen) -> Option<GenId> {
        self.gen_ix.get(g).copied()
    }

    pub fn wire(&self, w: &CWire) -> Result<IWire, TypeError> {
        let word = w.word.iter().map(|p| self.prime(p).ok_or(TypeError::TooDeep)).collect::<Result<_, _>>()?;
        Ok(IWire { layer: w.layer, word })
    }

    pub fn wires(&self, t: &[CWire]) -> Result<Vec<IWire>, TypeError> {
        t.iter().map(|w| self.wire(w)).collect()
    }

    pub fn cwire(&self, w: &IWire) -> CWire {
        CWire { layer: w.layer, word: w.word.iter().map(|&c| self.primes[c].clone()).collect() }
    }

    pub fn box_colour(&self, f: Bnd, c: Colour) -> Option<Colour> {
        let mut p = self.primes[c].clone();
        p.path.push(f);
        self.prime(&p)
    }

    /// The colour `c'` with `f(c') = c`, if any.
    pub fn unbox_colour(&self, f: Bnd, c: Colour) -> Option<Colour> {
        let mut p = self.primes[c].clone();
        if p.path.last() != Some(&f) {
            return None;
        }
        p.path.pop();
        self.prime(&p)
    }

    pub fn box_word(&self, f: Bnd, w: &[Colour]) -> Option<Word> {
        w.iter().map(|&c| self.box_colour(f, c)).collect()
    }

    pub fn unbox_word(&self, f: Bnd, w: &[Colour]) -> Option<Word> {
        w.iter().map(|&c| self.unbox_colour(f, c)).collect()
    }

    pub fn box_gen(&self, f: Bnd, g: GenId) -> Option<GenId> {
        let mut b = self.gens[g].clone();
        b.path.push(f);
        self.boxed(&b)
    }

    pub fn unbox_gen(&self, f: Bnd, g: GenId) -> Option<GenId> {
        let mut b = self.gens[g].clone();
        if b.path.last() != Some(&f) {
            return None;
        }
        b.path.pop();
        self.boxed(&b)
    }

    pub fn base_gen(&self, layer: Layer, g: GenId) -> Option<GenId> {
        self.boxed(&BoxedGen { base: layer, gen: g, path: Vec::new() })
    }

    pub fn wire_name(&self, sig: &LayeredSignature, w: &IWire) -> String {
        ctype_name(sig, &[self.cwire(w)])
    }

    pub fn list_name(&self, sig: &LayeredSignature, t: &[IWire]) -> String {
        let c: Vec<CWire> = t.iter().map(|w| self.cwire(w)).collect();
        ctype_name(sig, &c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SortingProcedure {
    Opfibrational,
    Fibrational,
    Deflational,
}

impl SortingProcedure {
    pub fn opfibrational(self) -> bool {
        matches!(self, SortingProcedure::Opfibrational | SortingProcedure::Deflational)
    }

    pub fn fibrational(self) -> bool {
        matches!(self, SortingProcedure::Fibrational | SortingProcedure::Deflational)
    }

    pub fn name(self) -> &'static str {
        match self {
            SortingProcedure::Opfibrational => "opfibrational",
            SortingProcedure::Fibrational => "fibrational",
            SortingProcedure::Deflational => "deflational",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "opfibrational" => SortingProcedure::Opfibrational,
            "fibrational" => SortingProcedure::Fibrational,
            "deflational" => SortingProcedure::Deflational,
            _ => return None,
        })
    }
}

impl fmt::Display for SortingProcedure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LEquation {
    pub name: String,
    pub lhs: LTerm,
    pub rhs: LTerm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellGen {
    pub name: String,
    pub dom: LTerm,
    pub cod: LTerm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoEquation {
    pub name: String,
    pub lhs: TwoTerm,
    pub rhs: TwoTerm,
}

pub const DEFAULT_DEPTH: usize = 3;

#[derive(Clone, Debug, Serialize)]
pub struct LayeredTheory {
    pub sig: LayeredSignature,
    /// In-layer equations and schemas, one theory per layer.
    #[serde(skip)]
    pub layer_theories: Vec<MonTheory>,
    pub mode: SortingProcedure,
    pub structural: bool,
    pub symmetric: bool,
    pub e0: Vec<(CWire, CWire)>,
    pub e1: Vec<LEquation>,
    pub cells: Vec<CellGen>,
    pub e2: Vec<TwoEquation>,
    #[serde(skip)]
    pub universe: Universe,
}

#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize)]
pub enum LayeredError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("`{0}`: sides are not parallel")]
    NotParallel(String),
    #[error("E0 pair lies in two layers")]
    MixedE0,
    #[error("{0}")]
    Two(String),
}

impl LayeredTheory {
    pub fn new(layer_theories: Vec<(String, MonTheory)>, boundaries: &[(&str, &str, &str)], mode: SortingProcedure) -> Self {
        let mut sig = LayeredSignature::default();
        let mut ths = Vec::new();
        for (name, th) in layer_theories {
            sig.add_layer(&name, th.sig.clone());
            ths.push(th);
        }
        for (f, d, c) in boundaries {
            let (d, c) = (sig.layer(d).expect("known layer"), sig.layer(c).expect("known layer"));
            sig.add_boundary(f, d, c);
        }
        Self::from_parts(sig, ths, mode, DEFAULT_DEPTH)
    }

    pub fn from_parts(sig: LayeredSignature, layer_theories: Vec<MonTheory>, mode: SortingProcedure, depth: usize) -> Self {
        let universe = Universe::new(&sig, depth);
        LayeredTheory {
            sig,
            layer_theories,
            mode,
            structural: true,
            symmetric: true,
            e0: Vec::new(),
            e1: Vec::new(),
            cells: Vec::new(),
            e2: Vec::new(),
            universe,
        }
    }

    pub fn add_e0(&mut self, a: &LType, b: &LType) -> Result<(), LayeredError> {
        let (x, y) = (canonical_type(&self.sig, a)?, canonical_type(&self.sig, b)?);
        match (x.as_slice(), y.as_slice()) {
            ([x], [y]) if x.layer == y.layer => {
                self.e0.push((x.clone(), y.clone()));
                Ok(())
            }
            ([_], [_]) => Err(LayeredError::MixedE0),
            _ => Err(TypeError::NotInternal.into()),
        }
    }

    pub fn parallel(&self, a: &Typed, b: &Typed) -> bool {
        let c = |x: &[IWire], y: &[IWire]| {
            let (x, y): (CType, CType) =
                (x.iter().map(|w| self.universe.cwire(w)).collect(), y.iter().map(|w| self.universe.cwire(w)).collect());
            types_congruent(self, &x, &y, 2_000) == Tri::True
        };
        c(&a.diagram.dom, &b.diagram.dom) && c(&a.diagram.cod, &b.diagram.cod)
    }

    pub fn add_e1(&mut self, name: &str, lhs: LTerm, rhs: LTerm) -> Result<(), LayeredError> {
        let (a, b) = (typecheck_term(self, &lhs)?, typecheck_term(self, &rhs)?);
        if !self.parallel(&a, &b) {
            return Err(LayeredError::NotParallel(name.to_string()));
        }
        self.e1.push(LEquation { name: name.to_string(), lhs, rhs });
        Ok(())
    }

    pub fn add_cell(&mut self, name: &str, dom: LTerm, cod: LTerm) -> Result<(), LayeredError> {
        let (a, b) = (typecheck_term(self, &dom)?, typecheck_term(self, &cod)?);
        if !self.parallel(&a, &b) {
            return Err(LayeredError::NotParallel(name.to_string()));
        }
        self.cells.push(CellGen { name: name.to_string(), dom, cod });
        Ok(())
    }

    pub fn add_e2(&mut self, name: &str, lhs: TwoTerm, rhs: TwoTerm) -> Result<(), LayeredError> {
        let (a, b) = (typecheck_2term(self, &lhs)?, typecheck_2term(self, &rhs)?);
        if !two::same_sort(self, &a, &b) {
            return Err(LayeredError::NotParallel(name.to_string()));
        }
        self.e2.push(TwoEquation { name: name.to_string(), lhs, rhs });
        Ok(())
    }

    pub fn cell(&self, name: &str) -> Option<usize> {
        self.cells.iter().position(|c| c.name == name)
    }
}

/// One family of structural equations, as listed by `schemas --dump`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemaFamily {
    pub level: u8,
    pub name: &'static str,
    /// The group of rules the family belongs to.
    pub origin: &'static str,
    pub statement: &'static str,
    /// Reconstructed families whose exact form is a modelling choice.
    pub reconstructed: bool,
}

const fn fam(level: u8, name: &'static str, origin: &'static str, statement: &'static str) -> SchemaFamily {
    SchemaFamily { level, name, origin, statement, reconstructed: false }
}

const fn rec(level: u8, name: &'static str, origin: &'static str, statement: &'static str) -> SchemaFamily {
    SchemaFamily { level, name, origin, statement, reconstructed: true }
}

/// The structural schema families in force for a theory.
pub fn structural_equations(th: &LayeredTheory) -> Vec<SchemaFamily> {
    let mut out = vec![
        fam(0, "type-assoc", "types", "(AB)C = A(BC) and (T,S),R = T,(S,R)"),
        fam(0, "type-unit", "types", "εA = A = Aε and (ε:ε),T = T = T,(ε:ε)"),
        fam(0, "app-cat", "types", "f(AB) = f(A)f(B)"),
        fam(0, "app-unit", "types", "f(ε) = ε"),
    ];
    if !th.structural {
        return out;
    }
    out.extend([
        fam(1, "comp-assoc", "monoidal", "(x;y);z = x;(y;z)"),
        fam(1, "comp-unit", "monoidal", "id;x = x = x;id"),
        fam(1, "ext-tensor", "monoidal", "associativity, units and interchange of the external tensor"),
        fam(1, "int-tensor", "monoidal", "associativity, units and interchange of the internal tensor"),
        fam(1, "id-tensor", "monoidal", "id_A (int) id_B = id_AB"),
        fam(1, "int-box", "functor", "f(x;y) = f(x);f(y), f(x (int) y) = f(x) (int) f(y), f(id_A) = id_f(A)"),
    ]);
    if th.symmetric {
        out.extend([
            fam(1, "swap-inv", "symmetry", "swap(A,B);swap(B,A) = id"),
            fam(1, "swap-nat", "symmetry", "(s (ext) id);swap = swap;(id (ext) s) for every atom s"),
        ]);
    }
    if th.mode.opfibrational() {
        out.extend([
            rec(1, "monoid-assoc", "opfibrational", "(monoid(A,B) (ext) id_C);monoid(AB,C) = (id_A (ext) monoid(B,C));monoid(A,BC)"),
            rec(1, "monoid-unit", "opfibrational", "(munit (ext) id_A);monoid(ε,A) = id_A = (id_A (ext) munit);monoid(A,ε)"),
            rec(1, "monoid-slide", "opfibrational", "(x (ext) y);monoid(B,D) = monoid(A,C);(x (int) y) for internal x, y"),
            rec(1, "ext-monoidal", "opfibrational", "monoid(A,B);ext(f,AB) = (ext(f,A) (ext) ext(f,B));monoid(fA,fB), munit;ext(f,ε) = munit"),
            fam(1, "ext-slide", "opfibrational", "x;ext(f,B) = ext(f,A);f(x) for internal x"),
            fam(1, "diag-coassoc", "opfibrational", "diag;(diag (ext) id) = diag;(id (ext) diag)"),
            fam(1, "diag-counit", "opfibrational", "diag;(counit (ext) id) = id = diag;(id (ext) counit)"),
            fam(1, "diag-nat", "opfibrational", "s;diag = diag;(s (ext) s) and s;counit = counit for every atom s"),
        ]);
    }
    if th.mode.fibrational() {
        out.extend([
            rec(1, "comonoid-coassoc", "fibrational", "comonoid(AB,C);(comonoid(A,B) (ext) id) = comonoid(A,BC);(id (ext) comonoid(B,C))"),
            rec(1, "comonoid-counit", "fibrational", "comonoid(ε,A);(counit (ext) id) = id = comonoid(A,ε);(id (ext) counit)"),
            rec(1, "comonoid-slide", "fibrational", "comonoid(A,C);(x (ext) y) = (x (int) y);comonoid(B,D) for internal x, y"),
            rec(1, "extop-monoidal", "fibrational", "extop(f,AB);comonoid(A,B) = comonoid(fA,fB);(extop(f,A) (ext) extop(f,B))"),
            fam(1, "extop-slide", "fibrational", "extop(f,A);x = f(x);extop(f,B) for internal x"),
            fam(1, "codiag-assoc", "fibrational", "(codiag (ext) id);codiag = (id (ext) codiag);codiag"),
            fam(1, "codiag-unit", "fibrational", "(cunit (ext) id);codiag = id = (id (ext) cunit);codiag"),
            fam(1, "codiag-nat", "fibrational", "codiag;s = (s (ext) s);codiag and cunit;s = cunit for every atom s"),
        ]);
    }
    out.extend([
        fam(2, "vert-assoc", "2-cells", "(α;β);γ = α;(β;γ)"),
        fam(2, "vert-unit", "2-cells", "id_t;α = α = α;id_s"),
        fam(2, "tensor-assoc-unit", "2-cells", "associativity of (x) and id_{ε:ε} as its unit"),
        fam(2, "horiz-assoc-unit", "2-cells", "associativity of * and id_id as its unit"),
        fam(2, "interchange-tensor", "2-cells", "(α⊗β);(γ⊗δ) = (α;γ)⊗(β;δ)"),
        fam(2, "interchange-horiz", "2-cells", "(α*β);(γ*δ) = (α;γ)*(β;δ)"),
        fam(2, "interchange-tensor-horiz", "2-cells", "(α⊗β)*(γ⊗δ) = (α*γ)⊗(β*δ)"),
    ]);
    if th.mode == SortingProcedure::Deflational {
        out.extend([
            fam(2, "zigzag-left", "deflational", "(η_x*id_x);(id_x*ε_x) = id_x"),
            fam(2, "zigzag-right", "deflational", "(id_x̄*η_x);(ε_x*id_x̄) = id_x̄"),
            fam(2, "eta-slide", "deflational", "id_y*η_x = η_x*id_y for y internal or a product of internals"),
            fam(2, "eps-slide", "deflational", "id_z*ε_x = ε_x*id_z for z internal or a product of internals"),
        ]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montheory::MonSignature;

    fn two_layers() -> LayeredSignature {
        let mut sig = LayeredSignature::default();
        let mut s = MonSignature::default();
        s.add_colour("a");
        s.add_colour("b");
        sig.add_layer("ω", s);
        sig.add_layer("τ", MonSignature::default());
        sig.add_boundary("f", 0, 1);
        sig
    }

    fn col(c: Colour) -> Box<LType> {
        Box::new(LType::Col(0, c))
    }

    #[test]
    fn canonical_forms_distribute() {
        let sig = two_layers();
        let fab = LType::App(0, Box::new(LType::Cat(col(0), col(1))));
        let fafb = LType::Cat(Box::new(LType::App(0, col(0))), Box::new(LType::App(0, col(1))));
        assert_eq!(canonical_type(&sig, &fab).unwrap(), canonical_type(&sig, &fafb).unwrap());
        let fe = LType::App(0, Box::new(LType::Eps(0)));
        assert_eq!(canonical_type(&sig, &fe).unwrap(), canonical_type(&sig, &LType::Eps(1)).unwrap());
        assert_ne!(canonical_type(&sig, &LType::Eps(0)).unwrap(), canonical_type(&sig, &LType::Unit).unwrap());
        let bad = LType::Cat(col(0), Box::new(LType::Eps(1)));
        assert!(matches!(canonical_type(&sig, &bad), Err(TypeError::LayerMismatch { .. })));
        let bad = LType::App(0, Box::new(LType::Eps(1)));
        assert!(canonical_type(&sig, &bad).is_err());
        let ext = LType::Ext(Box::new(LType::Unit), col(0));
        assert_eq!(canonical_type(&sig, &ext).unwrap(), canonical_type(&sig, &LType::Col(0, 0)).unwrap());
    }

    #[test]
    fn ground_zero_equations() {
        let sig = two_layers();
        let mut ths = Vec::new();
        ths.push(MonTheory::new(sig.sigs[0].clone()));
        ths.push(MonTheory::new(sig.sigs[1].clone()));
        let mut th = LayeredTheory::from_parts(sig.clone(), ths, SortingProcedure::Opfibrational, 2);
        th.add_e0(&LType::Cat(col(0), col(1)), &LType::Col(0, 1)).unwrap();
        let c = |t: LType| canonical_type(&sig, &t).unwrap();
        let aab = c(LType::Cat(col(0), Box::new(LType::Cat(col(0), col(1)))));
        let b = c(LType::Col(0, 1));
        assert_eq!(types_congruent(&th, &aab, &b, 100), Tri::True);
        let fab = c(LType::App(0, Box::new(LType::Cat(col(0), col(1)))));
        let fb = c(LType::App(0, col(1)));
        assert_eq!(types_congruent(&th, &fab, &fb, 100), Tri::True);
        assert_eq!(types_congruent(&th, &c(LType::Col(0, 0)), &b, 100), Tri::False);
        assert!(th.add_e0(&LType::Col(0, 0), &LType::Eps(1)).is_err());
    }

    #[test]
    fn universe_interns_paths() {
        let sig = two_layers();
        let u = Universe::new(&sig, 2);
        assert_eq!(u.sig.colours, vec!["a", "b", "f(a)", "f(b)"]);
        let fa = u.box_colour(0, 0).unwrap();
        assert_eq!(u.prime_layer[fa], 1);
        assert_eq!(u.unbox_colour(0, fa), Some(0));
        assert_eq!(u.box_colour(0, fa), None);
    }
}
