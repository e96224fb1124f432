//! Builtin theories, as packs added to an existing theory.

use super::{Colour, MonSignature, MonTerm, MonTheory, Schema};

pub const BUILTINS: &[&str] =
    ["symmetric", "monoids", "comonoids", "uniform-comonoids", "natural-monoids", "indexed-monoids"].as_slice();

fn suffix(sig: &MonSignature, cs: &[Colour]) -> String {
    if sig.colours.len() == 1 && sig.colours[0] == "•" {
        String::new()
    } else {
        cs.iter().map(|&c| format!("_{}", sig.colours[c])).collect()
    }
}

fn g(id: usize) -> MonTerm {
    MonTerm::Gen(id)
}

fn t(a: MonTerm, b: MonTerm) -> MonTerm {
    MonTerm::tensor(a, b)
}

fn c(a: MonTerm, b: MonTerm) -> MonTerm {
    MonTerm::comp(a, b)
}

fn eq(th: &mut MonTheory, name: String, l: MonTerm, r: MonTerm) {
    th.add_equation(&name, l, r).expect("builtin equations are well sorted");
}

/// `σ_{a,b}` for all colours, involutive, natural in generators.
pub fn add_symmetry(th: &mut MonTheory) {
    if th.packs.symmetry.is_some() {
        return;
    }
    let n = th.sig.colours.len();
    let mut sym = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            let name = format!("sw{}", suffix(&th.sig, &[a, b]));
            sym[a][b] = th.sig.add_generator(&name, vec![a, b], vec![b, a]);
        }
    }
    for a in 0..n {
        for b in 0..n {
            let name = format!("sw-inv{}", suffix(&th.sig, &[a, b]));
            eq(th, name, c(g(sym[a][b]), g(sym[b][a])), MonTerm::id_word(&[a, b]));
        }
    }
    th.packs.symmetry = Some(sym);
    th.schemas.push(Schema::SymmetryNaturality);
}

/// `m_a`, `u_a` with associativity and both unit laws, per colour.
pub fn add_monoids(th: &mut MonTheory) {
    if th.packs.monoid.is_some() {
        return;
    }
    let mut ms = Vec::new();
    for a in 0..th.sig.colours.len() {
        let s = suffix(&th.sig, &[a]);
        let m = th.sig.add_generator(&format!("m{s}"), vec![a, a], vec![a]);
        let u = th.sig.add_generator(&format!("u{s}"), vec![], vec![a]);
        let id = MonTerm::Id(a);
        eq(th, format!("assoc{s}"), c(t(g(m), id.clone()), g(m)), c(t(id.clone(), g(m)), g(m)));
        eq(th, format!("unit-l{s}"), c(t(g(u), id.clone()), g(m)), id.clone());
        eq(th, format!("unit-r{s}"), c(t(id.clone(), g(u)), g(m)), id);
        ms.push((m, u));
    }
    th.packs.monoid = Some(ms);
}

/// `d_a`, `e_a` with coassociativity and both counit laws, per colour.
pub fn add_comonoids(th: &mut MonTheory) {
    if th.packs.comonoid.is_some() {
        return;
    }
    let mut cs = Vec::new();
    for a in 0..th.sig.colours.len() {
        let s = suffix(&th.sig, &[a]);
        let d = th.sig.add_generator(&format!("d{s}"), vec![a], vec![a, a]);
        let e = th.sig.add_generator(&format!("e{s}"), vec![a], vec![]);
        let id = MonTerm::Id(a);
        eq(th, format!("coassoc{s}"), c(g(d), t(g(d), id.clone())), c(g(d), t(id.clone(), g(d))));
        eq(th, format!("counit-l{s}"), c(g(d), t(g(e), id.clone())), id.clone());
        eq(th, format!("counit-r{s}"), c(g(d), t(id.clone(), g(e))), id);
        cs.push((d, e));
    }
    th.packs.comonoid = Some(cs);
}

/// Symmetry and comonoids, with `d` and `e` natural in every generator.
pub fn add_uniform_comonoids(th: &mut MonTheory) {
    add_symmetry(th);
    add_comonoids(th);
    th.schemas.push(Schema::DiagonalNaturality);
    th.schemas.push(Schema::CounitNaturality);
}

/// Monoids, with every generator between single colours a homomorphism.
pub fn add_natural_monoids(th: &mut MonTheory) {
    add_monoids(th);
    let ms = th.packs.monoid.clone().expect("monoid pack");
    let homs: Vec<(usize, Colour, Colour)> = th
        .sig
        .generators
        .iter()
        .enumerate()
        .filter(|(_, x)| x.dom.len() == 1 && x.cod.len() == 1)
        .map(|(i, x)| (i, x.dom[0], x.cod[0]))
        .collect();
    for (s, a, b) in homs {
        let name = th.sig.generators[s].name.clone();
        let (ma, ua) = ms[a];
        let (mb, ub) = ms[b];
        eq(th, format!("hom-m[{name}]"), c(g(ma), g(s)), c(t(g(s), g(s)), g(mb)));
        eq(th, format!("hom-u[{name}]"), c(g(ua), g(s)), g(ub));
    }
}

/// Uniform comonoids together with natural monoids.
pub fn add_indexed_monoids(th: &mut MonTheory) {
    add_natural_monoids(th);
    add_uniform_comonoids(th);
}

pub fn apply_pack(th: &mut MonTheory, name: &str) -> Result<(), String> {
    match name {
        "symmetric" => add_symmetry(th),
        "monoids" => add_monoids(th),
        "comonoids" => add_comonoids(th),
        "uniform-comonoids" => add_uniform_comonoids(th),
        "natural-monoids" => add_natural_monoids(th),
        "indexed-monoids" => add_indexed_monoids(th),
        _ => return Err(format!("unknown theory `{name}`; known: {}", BUILTINS.join(", "))),
    }
    Ok(())
}

/// A builtin pack on the given colours, or on the single colour `•`.
pub fn builtin_theory(name: &str, colours: &[&str]) -> Result<MonTheory, String> {
    let mut sig = MonSignature::default();
    if colours.is_empty() {
        sig.add_colour("•");
    }
    for c in colours {
        sig.add_colour(c);
    }
    let mut th = MonTheory::new(sig);
    apply_pack(&mut th, name)?;
    Ok(th)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montheory::prover::{check_trace, ProverConfig, Verdict};
    use crate::montheory::{parse_term, prove_equal};

    #[test]
    fn names_and_counts() {
        let th = builtin_theory("monoids", &[]).unwrap();
        assert_eq!(th.sig.generators.len(), 2);
        assert_eq!(th.equations.len(), 3);
        let th = builtin_theory("symmetric", &["a", "b"]).unwrap();
        assert!(th.sig.generator("sw_a_b").is_some());
        assert_eq!(th.equations.len(), 4);
        // involution and two naturality families per generator and colour
        assert_eq!(th.instances().len(), 4 + 4 * 2 * 2);
        assert!(builtin_theory("groups", &[]).is_err());
    }

    #[test]
    fn word_structure() {
        let th = builtin_theory("uniform-comonoids", &["a", "b"]).unwrap();
        let d = th.diag_word(&[0, 1]).unwrap();
        assert_eq!(crate::montheory::sort_of(&th.sig, &d).unwrap(), (vec![0, 1], vec![0, 1, 0, 1]));
        let s = th.swap_word(&[0, 1], &[1]).unwrap();
        assert_eq!(crate::montheory::sort_of(&th.sig, &s).unwrap(), (vec![0, 1, 1], vec![1, 0, 1]));
    }

    #[test]
    fn comonoid_derivations() {
        let th = builtin_theory("uniform-comonoids", &[]).unwrap();
        let p = |s: &str| parse_term(&th.sig, s).unwrap();
        let cfg = ProverConfig::default();
        // sw is natural in e: e on the first wire after swapping
        let v = prove_equal(&th, &p("sw ; e * id[•]"), &p("id[•] * e"), &cfg).unwrap();
        let Verdict::Proved(tr) = v else { panic!("{v:?}") };
        check_trace(&th, &tr).unwrap();
        let v = prove_equal(&th, &p("d ; e * e"), &p("e"), &cfg).unwrap();
        assert!(v.is_proved());
    }

    #[test]
    fn homomorphism_equations() {
        let mut sig = MonSignature::default();
        sig.add_colour("a");
        sig.add_colour("b");
        sig.add_generator("f", vec![0], vec![1]);
        let mut th = MonTheory::new(sig);
        add_natural_monoids(&mut th);
        assert!(th.equations.iter().any(|e| e.name == "hom-m[f]"));
        let p = |s: &str| parse_term(&th.sig, s).unwrap();
        let v = prove_equal(&th, &p("u_a * u_a ; m_a ; f"), &p("u_b"), &ProverConfig::default()).unwrap();
        assert!(v.is_proved());
    }
}
