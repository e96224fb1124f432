//! Interchange normal forms of monoidal terms.
//!
//! A diagram is a domain word and a list of slices `(offset, generator)`,
//! one generator per slice. Composition concatenates slice lists, tensor
//! shifts the right factor's offsets past the left factor's wires. Two
//! diagrams denote the same term up to the structural identities iff their
//! slice lists are related by swapping adjacent slices that touch disjoint
//! wires; the canonical form is the least list in that class.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Colour, GenId, MonSignature, MonTerm, Word};

pub type Slice = (usize, GenId);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Diagram {
    pub dom: Word,
    pub cod: Word,
    pub slices: Vec<Slice>,
}

impl Diagram {
    pub fn identity(w: &[Colour]) -> Self {
        Diagram { dom: w.to_vec(), cod: w.to_vec(), slices: Vec::new() }
    }

    /// Panics on ill-sorted terms; call [`super::sort_of`] first.
    pub fn from_term(sig: &MonSignature, t: &MonTerm) -> Self {
        match t {
            MonTerm::Gen(g) => {
                let g2 = sig.gen(*g);
                Diagram { dom: g2.dom.clone(), cod: g2.cod.clone(), slices: vec![(0, *g)] }
            }
            MonTerm::Id(a) => Diagram::identity(&[*a]),
            MonTerm::IdEps => Diagram::identity(&[]),
            MonTerm::Comp(a, b) => {
                let (a, b) = (Diagram::from_term(sig, a), Diagram::from_term(sig, b));
                assert_eq!(a.cod, b.dom, "ill-sorted composite");
                a.then(&b)
            }
            MonTerm::Tensor(a, b) => Diagram::from_term(sig, a).tensor(sig, &Diagram::from_term(sig, b)),
        }
    }

    pub fn then(&self, other: &Diagram) -> Diagram {
        let mut slices = self.slices.clone();
        slices.extend_from_slice(&other.slices);
        Diagram { dom: self.dom.clone(), cod: other.cod.clone(), slices }
    }

    /// `self ⊗ other`: `self`'s slices first, at the left, then `other`'s.
    pub fn tensor(&self, _sig: &MonSignature, other: &Diagram) -> Diagram {
        let shift = self.cod.len();
        let mut slices = self.slices.clone();
        slices.extend(other.slices.iter().map(|&(o, g)| (o + shift, g)));
        Diagram {
            dom: [self.dom.as_slice(), &other.dom].concat(),
            cod: [self.cod.as_slice(), &other.cod].concat(),
            slices,
        }
    }

    /// Wire words before slice 0, after slice 0, ...
    pub fn levels(&self, sig: &MonSignature) -> Vec<Word> {
        let mut out = vec![self.dom.clone()];
        let mut w = self.dom.clone();
        for &(o, g) in &self.slices {
            let gen = sig.gen(g);
            w.splice(o..o + gen.dom.len(), gen.cod.iter().copied());
            out.push(w.clone());
        }
        out
    }

    /// `id ⊗ g ⊗ id` composites, or the identity term on the domain.
    pub fn to_term(&self, sig: &MonSignature) -> MonTerm {
        let levels = self.levels(sig);
        let parts: Vec<MonTerm> = self
            .slices
            .iter()
            .zip(&levels)
            .map(|(&(o, g), w)| {
                let n = sig.gen(g).dom.len();
                let mut t = MonTerm::Gen(g);
                if o + n < w.len() {
                    t = MonTerm::tensor(t, MonTerm::id_word(&w[o + n..]));
                }
                if o > 0 {
                    t = MonTerm::tensor(MonTerm::id_word(&w[..o]), t);
                }
                t
            })
            .collect();
        MonTerm::comp_all(parts).unwrap_or_else(|| MonTerm::id_word(&self.dom))
    }
}

/// Arity lookup for the swap rules.
pub trait Arity {
    fn arity(&self, g: GenId) -> (usize, usize);
}

impl Arity for MonSignature {
    fn arity(&self, g: GenId) -> (usize, usize) {
        let gen = self.gen(g);
        (gen.dom.len(), gen.cod.len())
    }
}

/// The slice pairs obtained by moving the second slice below the first,
/// when the two touch disjoint wires. A slice without outputs followed by
/// one without inputs at the same offset can float to either side.
pub fn swaps(ar: &impl Arity, a: Slice, b: Slice) -> Vec<(Slice, Slice)> {
    let (o1, g1) = a;
    let (o2, g2) = b;
    let (in1, out1) = ar.arity(g1);
    let (in2, out2) = ar.arity(g2);
    let mut out = Vec::new();
    if o2 + in2 <= o1 {
        // b sits left of a's outputs: a's offset moves by b's arity change
        out.push(((o2, g2), (o1 + out2 - in2, g1)));
    }
    if o2 >= o1 + out1 {
        out.push(((o2 + in1 - out1, g2), (o1, g1)));
    }
    out
}

/// Every slice list in the interchange class of `slices`.
pub fn class(ar: &impl Arity, slices: &[Slice]) -> BTreeSet<Vec<Slice>> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(slices.to_vec());
    queue.push_back(slices.to_vec());
    while let Some(s) = queue.pop_front() {
        for i in 0..s.len().saturating_sub(1) {
            for (x, y) in swaps(ar, s[i], s[i + 1]) {
                let mut t = s.clone();
                t[i] = x;
                t[i + 1] = y;
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
    }
    seen
}

/// Canonical form: least slice list of the class.
pub fn normalize(ar: &impl Arity, d: &Diagram) -> Diagram {
    let best = class(ar, &d.slices).into_iter().next().unwrap_or_default();
    Diagram { dom: d.dom.clone(), cod: d.cod.clone(), slices: best }
}

/// Normal form of a term.
pub fn nf(sig: &MonSignature, t: &MonTerm) -> Diagram {
    normalize(sig, &Diagram::from_term(sig, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montheory::parse_term;

    fn sig() -> MonSignature {
        let mut s = MonSignature::default();
        s.add_colour("a");
        s.add_colour("b");
        s.add_generator("t", vec![0], vec![1]);
        s.add_generator("s", vec![1], vec![0]);
        s.add_generator("u", vec![], vec![0]);
        s.add_generator("m", vec![0, 0], vec![0]);
        s
    }

    #[test]
    fn swaps_are_involutive() {
        let s = sig();
        for o1 in 0..3 {
            for o2 in 0..3 {
                for g1 in 0..4 {
                    for g2 in 0..4 {
                        let (a, b) = ((o1, g1), (o2, g2));
                        for (x, y) in swaps(&s, a, b) {
                            assert!(swaps(&s, x, y).contains(&(a, b)), "{a:?} {b:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn floating_units_commute() {
        let s = sig();
        let t = parse_term(&s, "u * u").unwrap();
        let r = parse_term(&s, "u ; (u * id[a])").unwrap();
        assert_eq!(nf(&s, &t), nf(&s, &r));
        let l = parse_term(&s, "u ; (id[a] * u)").unwrap();
        assert_eq!(nf(&s, &t), nf(&s, &l));
    }

    #[test]
    fn to_term_round_trip() {
        let s = sig();
        for src in ["t * s ; s * t", "u * id[b] ; id[a] * s", "m ; t ; s", "id[a b]", "id[]"] {
            let t = parse_term(&s, src).unwrap();
            let d = nf(&s, &t);
            let back = d.to_term(&s);
            assert_eq!(super::super::sort_of(&s, &back), super::super::sort_of(&s, &t));
            assert_eq!(nf(&s, &back), d, "{src}");
        }
    }
}
