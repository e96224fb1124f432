//! Congruence closure over the strict monoidal identities by brute force.
//!
//! Every sorted term up to a size bound is enumerated, every rule is applied
//! in one direction at every position, and results inside the bound are
//! merged. Nothing here looks at slice diagrams.

use std::collections::HashMap;

use lmt_core::montheory::{MonSignature, MonTerm};
use petgraph::unionfind::UnionFind;

type W = Vec<usize>;

pub struct Closure {
    pub terms: Vec<(MonTerm, W, W)>,
    pub index: HashMap<MonTerm, usize>,
    pub uf: UnionFind<usize>,
}

fn enumerate(sig: &MonSignature, max_size: usize, max_word: usize) -> Vec<Vec<(MonTerm, W, W)>> {
    let mut by: Vec<Vec<(MonTerm, W, W)>> = vec![Vec::new(); max_size + 1];
    for (i, g) in sig.generators.iter().enumerate() {
        by[1].push((MonTerm::Gen(i), g.dom.clone(), g.cod.clone()));
    }
    for a in 0..sig.colours.len() {
        by[1].push((MonTerm::Id(a), vec![a], vec![a]));
    }
    by[1].push((MonTerm::IdEps, vec![], vec![]));
    for n in 2..=max_size {
        let mut cur = Vec::new();
        for l in 1..n - 1 {
            let r = n - 1 - l;
            for (x, xd, xc) in &by[l] {
                for (y, yd, yc) in &by[r] {
                    if xc == yd {
                        cur.push((MonTerm::comp(x.clone(), y.clone()), xd.clone(), yc.clone()));
                    }
                    if xd.len() + yd.len() <= max_word && xc.len() + yc.len() <= max_word {
                        let d = [xd.clone(), yd.clone()].concat();
                        let c = [xc.clone(), yc.clone()].concat();
                        cur.push((MonTerm::tensor(x.clone(), y.clone()), d, c));
                    }
                }
            }
        }
        by[n] = cur;
    }
    by
}

fn only_identities(t: &MonTerm) -> bool {
    match t {
        MonTerm::Id(_) | MonTerm::IdEps => true,
        MonTerm::Tensor(a, b) => only_identities(a) && only_identities(b),
        _ => false,
    }
}

fn sort(sig: &MonSignature, t: &MonTerm) -> (W, W) {
    match t {
        MonTerm::Gen(g) => (sig.generators[*g].dom.clone(), sig.generators[*g].cod.clone()),
        MonTerm::Id(a) => (vec![*a], vec![*a]),
        MonTerm::IdEps => (vec![], vec![]),
        MonTerm::Comp(a, b) => (sort(sig, a).0, sort(sig, b).1),
        MonTerm::Tensor(a, b) => {
            let ((d1, c1), (d2, c2)) = (sort(sig, a), sort(sig, b));
            ([d1, d2].concat(), [c1, c2].concat())
        }
    }
}

fn ids(w: &[usize]) -> MonTerm {
    w.iter().map(|&a| MonTerm::Id(a)).reduce(MonTerm::tensor).unwrap_or(MonTerm::IdEps)
}

/// `x ⊗ id_w`, or `x` when `w` is empty.
fn pad_right(x: &MonTerm, w: &[usize]) -> MonTerm {
    if w.is_empty() {
        x.clone()
    } else {
        MonTerm::tensor(x.clone(), ids(w))
    }
}

fn pad_left(w: &[usize], x: &MonTerm) -> MonTerm {
    if w.is_empty() {
        x.clone()
    } else {
        MonTerm::tensor(ids(w), x.clone())
    }
}

/// One-directional rule applications at the root.
fn root_steps(sig: &MonSignature, t: &MonTerm) -> Vec<MonTerm> {
    use MonTerm::*;
    let mut out = Vec::new();
    match t {
        Comp(ab, c) => {
            if let Comp(a, b) = &**ab {
                out.push(MonTerm::comp((**a).clone(), MonTerm::comp((**b).clone(), (**c).clone())));
            }
            if only_identities(ab) {
                out.push((**c).clone());
            }
            if only_identities(c) {
                out.push((**ab).clone());
            }
        }
        Tensor(ab, c) => {
            if let Tensor(a, b) = &**ab {
                out.push(MonTerm::tensor((**a).clone(), MonTerm::tensor((**b).clone(), (**c).clone())));
            }
            if **ab == IdEps {
                out.push((**c).clone());
            }
            if **c == IdEps {
                out.push((**ab).clone());
            }
            // whiskered interchange, both orders
            let ((d1, c1), (d2, c2)) = (sort(sig, ab), sort(sig, c));
            out.push(MonTerm::comp(pad_right(ab, &d2), pad_left(&c1, c)));
            out.push(MonTerm::comp(pad_left(&d1, c), pad_right(ab, &c2)));
            if let (Comp(a, b), Comp(x, y)) = (&**ab, &**c) {
                out.push(MonTerm::comp(
                    MonTerm::tensor((**a).clone(), (**x).clone()),
                    MonTerm::tensor((**b).clone(), (**y).clone()),
                ));
            }
        }
        _ => {}
    }
    out
}

fn all_steps(sig: &MonSignature, t: &MonTerm) -> Vec<MonTerm> {
    let mut out = root_steps(sig, t);
    match t {
        MonTerm::Comp(a, b) => {
            out.extend(all_steps(sig, a).into_iter().map(|x| MonTerm::comp(x, (**b).clone())));
            out.extend(all_steps(sig, b).into_iter().map(|y| MonTerm::comp((**a).clone(), y)));
        }
        MonTerm::Tensor(a, b) => {
            out.extend(all_steps(sig, a).into_iter().map(|x| MonTerm::tensor(x, (**b).clone())));
            out.extend(all_steps(sig, b).into_iter().map(|y| MonTerm::tensor((**a).clone(), y)));
        }
        _ => {}
    }
    out
}

impl Closure {
    pub fn new(sig: &MonSignature, max_size: usize, max_word: usize) -> Self {
        let terms: Vec<_> = enumerate(sig, max_size, max_word).into_iter().flatten().collect();
        let index: HashMap<MonTerm, usize> = terms.iter().enumerate().map(|(i, t)| (t.0.clone(), i)).collect();
        let mut uf = UnionFind::new(terms.len());
        for (i, (t, _, _)) in terms.iter().enumerate() {
            for s in all_steps(sig, t) {
                if let Some(&j) = index.get(&s) {
                    uf.union(i, j);
                }
            }
        }
        Closure { terms, index, uf }
    }

    pub fn same(&self, a: &MonTerm, b: &MonTerm) -> Option<bool> {
        Some(self.uf.equiv(*self.index.get(a)?, *self.index.get(b)?))
    }
}
