//! Morphisms of layered signatures and their action on syntax.

use serde::Serialize;

use super::{Bnd, CWire, LTerm, LType, Layer, LayeredSignature, Prime, TwoTerm};
use crate::montheory::{Colour, GenId};

/// Layers to layers, boundary generators to boundary generators, and per
/// layer a colour and generator renaming. `cells` maps generating 2-cells
/// when 2-terms are translated between theories.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayeredMorphism {
    pub layers: Vec<Layer>,
    pub boundaries: Vec<Bnd>,
    pub colours: Vec<Vec<Colour>>,
    pub gens: Vec<Vec<GenId>>,
    pub cells: Vec<usize>,
}

impl LayeredMorphism {
    pub fn identity(sig: &LayeredSignature, cells: usize) -> Self {
        LayeredMorphism {
            layers: (0..sig.layers.len()).collect(),
            boundaries: (0..sig.boundaries.len()).collect(),
            colours: sig.sigs.iter().map(|s| (0..s.colours.len()).collect()).collect(),
            gens: sig.sigs.iter().map(|s| (0..s.generators.len()).collect()).collect(),
            cells: (0..cells).collect(),
        }
    }

    /// Checks that every component lands in `tgt` and respects sorts.
    pub fn check(&self, src: &LayeredSignature, tgt: &LayeredSignature) -> Result<(), String> {
        if self.layers.len() != src.layers.len() || self.layers.iter().any(|&l| l >= tgt.layers.len()) {
            return Err("layer map is not a function into the target".into());
        }
        for (f, b) in src.boundaries.iter().enumerate() {
            let g = *self.boundaries.get(f).ok_or("boundary map is too short")?;
            let tb = tgt.boundaries.get(g).ok_or("boundary map leaves the target")?;
            if tb.dom != self.layers[b.dom] || tb.cod != self.layers[b.cod] {
                return Err(format!("`{}` is sent to `{}` with the wrong layers", b.name, tb.name));
            }
        }
        for (l, s) in src.sigs.iter().enumerate() {
            let t = &tgt.sigs[self.layers[l]];
            let cm = self.colours.get(l).ok_or("colour map is too short")?;
            if cm.len() != s.colours.len() || cm.iter().any(|&c| c >= t.colours.len()) {
                return Err(format!("colour map of layer `{}` is not a function", src.layers[l]));
            }
            let gm = self.gens.get(l).ok_or("generator map is too short")?;
            if gm.len() != s.generators.len() {
                return Err(format!("generator map of layer `{}` is not a function", src.layers[l]));
            }
            for (g, gen) in s.generators.iter().enumerate() {
                let tg = t.generators.get(gm[g]).ok_or("generator map leaves the target")?;
                let map = |w: &[Colour]| w.iter().map(|&c| cm[c]).collect::<Vec<_>>();
                if map(&gen.dom) != tg.dom || map(&gen.cod) != tg.cod {
                    return Err(format!("`{}` is sent to `{}` with the wrong sort", gen.name, tg.name));
                }
            }
        }
        Ok(())
    }

    pub fn ltype(&self, t: &LType) -> LType {
        match t {
            LType::Unit => LType::Unit,
            LType::Eps(l) => LType::Eps(self.layers[*l]),
            LType::Col(l, c) => LType::Col(self.layers[*l], self.colours[*l][*c]),
            LType::App(f, a) => LType::App(self.boundaries[*f], Box::new(self.ltype(a))),
            LType::Cat(a, b) => LType::Cat(Box::new(self.ltype(a)), Box::new(self.ltype(b))),
            LType::Ext(a, b) => LType::Ext(Box::new(self.ltype(a)), Box::new(self.ltype(b))),
        }
    }

    pub fn ctype(&self, t: &[CWire]) -> Vec<CWire> {
        t.iter()
            .map(|w| CWire {
                layer: self.layers[w.layer],
                word: w
                    .word
                    .iter()
                    .map(|p| Prime {
                        base: self.layers[p.base],
                        colour: self.colours[p.base][p.colour],
                        path: p.path.iter().map(|&f| self.boundaries[f]).collect(),
                    })
                    .collect(),
            })
            .collect()
    }

    pub fn term(&self, t: &LTerm) -> LTerm {
        let ty = |a: &LType| self.ltype(a);
        let b = |x: &LTerm| Box::new(self.term(x));
        match t {
            LTerm::IntUnit(l) => LTerm::IntUnit(self.layers[*l]),
            LTerm::IntId(a) => LTerm::IntId(ty(a)),
            LTerm::IntGen(l, g) => LTerm::IntGen(self.layers[*l], self.gens[*l][*g]),
            LTerm::IntBox(f, x) => LTerm::IntBox(self.boundaries[*f], b(x)),
            LTerm::Comp(x, y) => LTerm::Comp(b(x), b(y)),
            LTerm::IntTensor(x, y) => LTerm::IntTensor(b(x), b(y)),
            LTerm::ExtUnit => LTerm::ExtUnit,
            LTerm::ExtTensor(x, y) => LTerm::ExtTensor(b(x), b(y)),
            LTerm::Swap(x, y) => LTerm::Swap(ty(x), ty(y)),
            LTerm::ExtGen(f, a) => LTerm::ExtGen(self.boundaries[*f], ty(a)),
            LTerm::Monoid(x, y) => LTerm::Monoid(ty(x), ty(y)),
            LTerm::MonoidUnit(l) => LTerm::MonoidUnit(self.layers[*l]),
            LTerm::Diag(a) => LTerm::Diag(ty(a)),
            LTerm::DiagCounit(a) => LTerm::DiagCounit(ty(a)),
            LTerm::ExtGenOp(f, a) => LTerm::ExtGenOp(self.boundaries[*f], ty(a)),
            LTerm::Comonoid(x, y) => LTerm::Comonoid(ty(x), ty(y)),
            LTerm::Counit(l) => LTerm::Counit(self.layers[*l]),
            LTerm::Codiag(a) => LTerm::Codiag(ty(a)),
            LTerm::CodiagUnit(a) => LTerm::CodiagUnit(ty(a)),
        }
    }

    pub fn two_term(&self, t: &TwoTerm) -> TwoTerm {
        let b = |x: &TwoTerm| Box::new(self.two_term(x));
        match t {
            TwoTerm::Cell(i) => TwoTerm::Cell(self.cells[*i]),
            TwoTerm::Eta(x) => TwoTerm::Eta(self.term(x)),
            TwoTerm::Epsilon(x) => TwoTerm::Epsilon(self.term(x)),
            TwoTerm::Id(x) => TwoTerm::Id(self.term(x)),
            TwoTerm::Vert(x, y) => TwoTerm::Vert(b(x), b(y)),
            TwoTerm::Tensor(x, y) => TwoTerm::Tensor(b(x), b(y)),
            TwoTerm::Horiz(x, y) => TwoTerm::Horiz(b(x), b(y)),
        }
    }
}

/// What can be translated along a morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Syntax {
    Type(LType),
    Term(LTerm),
    Two(TwoTerm),
}

pub fn apply_layered_morphism(m: &LayeredMorphism, x: &Syntax) -> Syntax {
    match x {
        Syntax::Type(t) => Syntax::Type(m.ltype(t)),
        Syntax::Term(t) => Syntax::Term(m.term(t)),
        Syntax::Two(t) => Syntax::Two(m.two_term(t)),
    }
}
