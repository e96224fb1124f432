//! Graphviz export. Nodes and edges are emitted in index order, so the
//! output is stable.

use std::fmt::Write as _;

use lmt_core::fincat::{FinCategory, FinFunctor};

fn q(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn edges(out: &mut String, c: &FinCategory, ind: &str) {
    for f in c.morphisms().filter(|&f| !c.is_identity(f)) {
        let _ = writeln!(out, "{ind}{} -> {} [label={}];", q(c.obj_name(c.dom(f))), q(c.obj_name(c.cod(f))), q(c.mor_name(f)));
    }
}

/// Objects and non-identity morphisms.
pub fn category(c: &FinCategory) -> String {
    let mut out = String::from("digraph C {\n");
    for o in c.objects() {
        let _ = writeln!(out, "  {};", q(c.obj_name(o)));
    }
    edges(&mut out, c, "  ");
    out.push_str("}\n");
    out
}

/// The source of `p` with one cluster per fibre.
pub fn functor(p: &FinFunctor) -> String {
    let (y, x) = (&*p.source, &*p.target);
    let mut out = String::from("digraph P {\n");
    for xo in x.objects() {
        let _ = writeln!(out, "  subgraph cluster_{xo} {{\n    label={};", q(x.obj_name(xo)));
        for a in y.objects().filter(|&a| p.ob(a) == xo) {
            let _ = writeln!(out, "    {};", q(y.obj_name(a)));
        }
        out.push_str("  }\n");
    }
    for f in y.morphisms().filter(|&f| !y.is_identity(f)) {
        let over = p.mor(f);
        let style = if x.is_identity(over) { "solid" } else { "dashed" };
        let _ = writeln!(
            out,
            "  {} -> {} [label={}, style={style}];",
            q(y.obj_name(y.dom(f))),
            q(y.obj_name(y.cod(f))),
            q(&format!("{} / {}", y.mor_name(f), x.mor_name(over)))
        );
    }
    out.push_str("}\n");
    out
}
