mod oracles;

use std::collections::HashMap;

use lmt_core::montheory::diagram::nf;
use lmt_core::montheory::{equal_structural, MonSignature};
use oracles::structural::Closure;

fn sig() -> MonSignature {
    let mut s = MonSignature::default();
    s.add_colour("a");
    s.add_colour("b");
    s.add_generator("f", vec![0], vec![1, 1]);
    s.add_generator("e", vec![1], vec![]);
    s.add_generator("u", vec![], vec![0]);
    s
}

/// Both partitions of the terms up to `upto` agree.
fn agree(sig: &MonSignature, cl: &Closure, upto: usize) -> (usize, usize) {
    let mut by_nf = HashMap::new();
    let mut by_root = HashMap::new();
    let mut bad = 0;
    let mut n = 0;
    for (i, (t, _, _)) in cl.terms.iter().enumerate() {
        if t.size() > upto {
            continue;
        }
        n += 1;
        let d = nf(sig, t);
        let r = cl.uf.find(i);
        let a = *by_nf.entry(d.clone()).or_insert(r);
        let b = by_root.entry(r).or_insert(d.clone()).clone();
        if !cl.uf.equiv(a, r) || b != d {
            bad += 1;
        }
    }
    (n, bad)
}

#[test]
fn nf_matches_closure() {
    let s = sig();
    let cl = Closure::new(&s, 9, 3);
    let (n, bad) = agree(&s, &cl, 7);
    assert!(n > 7000);
    assert_eq!(bad, 0);
    let p = |x: &str| lmt_core::montheory::parse_term(&s, x).unwrap();
    assert!(equal_structural(&s, &p("u * u ; id[a] * f"), &p("u ; u * id[a] ; id[a] * f")).unwrap());
}
