//! Literal readings of the lifting properties, written against the raw
//! composition table only.

use std::collections::HashMap;

use lmt_core::fincat::{FinCategory, FinFunctor, Mor, Ob};
use petgraph::unionfind::UnionFind;

fn all_mors(c: &FinCategory) -> Vec<Mor> {
    (0..c.num_morphisms()).collect()
}

/// `F` is opcartesian: every `G` out of its domain and every `h` with
/// `p F ; h = p G` factor through exactly one `H` over `h`.
pub fn opcartesian(p: &FinFunctor, big_f: Mor) -> bool {
    let (y, x) = (&*p.source, &*p.target);
    for big_g in all_mors(y) {
        if y.dom(big_g) != y.dom(big_f) {
            continue;
        }
        for h in all_mors(x) {
            if x.compose(p.mor(big_f), h) != Some(p.mor(big_g)) {
                continue;
            }
            let n = all_mors(y)
                .into_iter()
                .filter(|&hh| p.mor(hh) == h && y.compose(big_f, hh) == Some(big_g))
                .count();
            if n != 1 {
                return false;
            }
        }
    }
    true
}

pub fn opfibration(p: &FinFunctor) -> bool {
    let (y, x) = (&*p.source, &*p.target);
    (0..y.num_objects()).all(|a| {
        all_mors(x).into_iter().filter(|&f| x.dom(f) == p.ob(a)).all(|f| {
            all_mors(y).into_iter().any(|g| y.dom(g) == a && p.mor(g) == f && opcartesian(p, g))
        })
    })
}

/// Every morphism over a composite has a nonempty, connected category of
/// factorisations over the given factors.
pub fn factorisation_lifting(p: &FinFunctor) -> bool {
    let (y, x) = (&*p.source, &*p.target);
    for m in all_mors(y) {
        for f in all_mors(x) {
            for g in all_mors(x) {
                if x.compose(f, g) != Some(p.mor(m)) {
                    continue;
                }
                let mut pairs: Vec<(Mor, Mor)> = Vec::new();
                for a in all_mors(y) {
                    for b in all_mors(y) {
                        if p.mor(a) == f && p.mor(b) == g && y.compose(a, b) == Some(m) {
                            pairs.push((a, b));
                        }
                    }
                }
                if pairs.is_empty() {
                    return false;
                }
                let mut uf = UnionFind::<usize>::new(pairs.len());
                for (i, &(a1, b1)) in pairs.iter().enumerate() {
                    for (j, &(a2, b2)) in pairs.iter().enumerate() {
                        let linked = all_mors(y).into_iter().any(|v| {
                            x.is_identity(p.mor(v)) && y.compose(a1, v) == Some(a2) && y.compose(v, b2) == Some(b1)
                        });
                        if linked {
                            uf.union(i, j);
                        }
                    }
                }
                if (0..pairs.len()).any(|i| !uf.equiv(0, i)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Size of the coend of `B(Fa, -)` and `B(-, Fa')`, by merging pairs
/// `(u;k, v) ~ (u, k;v)`.
pub fn yoneda_coend_size(p: &FinFunctor, a: Ob, a2: Ob) -> usize {
    let x = &*p.target;
    let mut pairs = Vec::new();
    for u in all_mors(x) {
        for v in all_mors(x) {
            if x.dom(u) == p.ob(a) && x.cod(v) == p.ob(a2) && x.cod(u) == x.dom(v) {
                pairs.push((u, v));
            }
        }
    }
    let index: HashMap<(Mor, Mor), usize> = pairs.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let mut uf = UnionFind::<usize>::new(pairs.len());
    for &(u, w) in &pairs {
        for k in all_mors(x) {
            for v in all_mors(x) {
                if x.compose(k, v) != Some(w) {
                    continue;
                }
                // w = k;v, so (u;k, v) ~ (u, w)
                if let Some(uk) = x.compose(u, k) {
                    uf.union(index[&(uk, v)], index[&(u, w)]);
                }
            }
        }
    }
    let mut roots: Vec<usize> = (0..pairs.len()).map(|i| uf.find(i)).collect();
    roots.sort();
    roots.dedup();
    roots.len()
}

/// A terminal object and a product of every pair, by search.
pub fn has_finite_products(c: &FinCategory) -> bool {
    let obs = 0..c.num_objects();
    let terminal = obs.clone().any(|t| (0..c.num_objects()).all(|z| c.hom(z, t).len() == 1));
    if !terminal {
        return false;
    }
    for a in obs.clone() {
        for b in obs.clone() {
            let found = obs.clone().any(|q| {
                c.hom(q, a).iter().any(|&p1| {
                    c.hom(q, b).iter().any(|&p2| {
                        (0..c.num_objects()).all(|z| {
                            c.hom(z, a).iter().all(|&f| {
                                c.hom(z, b).iter().all(|&g| {
                                    c.hom(z, q)
                                        .iter()
                                        .filter(|&&h| c.compose(h, p1) == Some(f) && c.compose(h, p2) == Some(g))
                                        .count()
                                        == 1
                                })
                            })
                        })
                    })
                })
            });
            if !found {
                return false;
            }
        }
    }
    true
}
