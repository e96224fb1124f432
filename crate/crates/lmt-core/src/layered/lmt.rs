//! `.lmt` layered theory files.
//!
//! ```text
//! MODE opfibrational
//! STRUCTURAL on
//! LAYERS w t
//! LAYER w {
//!   COLOURS a b
//!   GENERATORS
//!     x : a -> b
//! }
//! GENERATORS
//!   f : w -> t
//! E0
//!   f(a):t = f(b):t
//! E1
//!   sl: x ; ext(f | b:w) = ext(f | a:w) ; box(f | x)
//! CELLS
//!   c : x => x
//! E2
//!   c ; c = c
//! ```
//!
//! Terms and types use the syntax of [`parse_lterm`]; 2-terms that of
//! [`parse_twoterm`]. `#` starts a comment.

use std::fmt::Write as _;

use super::term::{parse_lterm, parse_ltype};
use super::two::parse_twoterm;
use super::{LayeredSignature, LayeredTheory, SortingProcedure, DEFAULT_DEPTH};
use crate::format::ParseError;
use crate::montheory::mth::{parse_mth, write_mth};
use crate::montheory::{is_name_char, MonTheory};

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

fn content(raw: &str) -> &str {
    raw.split('#').next().unwrap_or("").trim()
}

#[derive(Clone, Copy, PartialEq)]
enum Sec {
    None,
    Generators,
    E0,
    E1,
    Cells,
    E2,
}

fn split_name(body: &str) -> Option<(String, &str)> {
    let (name, rest) = body.split_once(':')?;
    let name = name.trim();
    (!name.is_empty() && name.chars().all(is_name_char)).then(|| (name.to_string(), rest))
}

fn on_off(n: usize, s: &str) -> Result<bool, ParseError> {
    match s {
        "on" => Ok(true),
        "off" => Ok(false),
        _ => Err(err(n, format!("expected on|off, found `{s}`"))),
    }
}

pub fn parse_lmt(src: &str) -> Result<LayeredTheory, ParseError> {
    let mut mode = SortingProcedure::Opfibrational;
    let (mut structural, mut symmetric, mut depth) = (true, true, DEFAULT_DEPTH);
    let mut layers: Vec<(usize, String)> = Vec::new();
    let mut bodies: Vec<(usize, String, String)> = Vec::new();
    let mut gens = Vec::new();
    let mut items: Vec<(Sec, usize, String)> = Vec::new();
    let mut sec = Sec::None;
    let lines: Vec<&str> = src.lines().collect();
    let mut i = 0;
    while i < lines.len() {
        let n = i + 1;
        let line = content(lines[i]);
        i += 1;
        if line.is_empty() {
            continue;
        }
        let (head, rest) = match line.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim()),
            None => (line, ""),
        };
        match head {
            "MODE" => {
                mode = SortingProcedure::parse(rest).ok_or_else(|| err(n, format!("unknown mode `{rest}`")))?;
                continue;
            }
            "STRUCTURAL" => {
                structural = on_off(n, rest)?;
                continue;
            }
            "SYMMETRIC" => {
                symmetric = on_off(n, rest)?;
                continue;
            }
            "DEPTH" => {
                depth = rest.parse().map_err(|_| err(n, "expected a path depth"))?;
                continue;
            }
            "LAYERS" => {
                layers.extend(rest.split_whitespace().map(|l| (n, l.to_string())));
                sec = Sec::None;
                continue;
            }
            "LAYER" => {
                let (name, tail) = rest.split_once('{').ok_or_else(|| err(n, "expected `LAYER name {`"))?;
                let name = name.trim().to_string();
                let mut body = String::new();
                // one-line form `LAYER w { ... }`
                if let Some(inner) = tail.trim().strip_suffix('}') {
                    for part in inner.split(';') {
                        body.push_str(part);
                        body.push('\n');
                    }
                    bodies.push((n, name, body));
                    sec = Sec::None;
                    continue;
                }
                body.push_str(tail);
                body.push('\n');
                loop {
                    let Some(raw) = lines.get(i) else {
                        return Err(err(n, format!("unclosed layer `{name}`")));
                    };
                    i += 1;
                    if content(raw) == "}" {
                        break;
                    }
                    // keep line numbers aligned in the embedded parser's errors
                    body.push_str(raw);
                    body.push('\n');
                }
                bodies.push((n, name, body));
                sec = Sec::None;
                continue;
            }
            "GENERATORS" => sec = Sec::Generators,
            "E0" => sec = Sec::E0,
            "E1" => sec = Sec::E1,
            "CELLS" => sec = Sec::Cells,
            "E2" => sec = Sec::E2,
            _ => {
                if sec == Sec::None {
                    return Err(err(n, format!("unexpected `{line}` outside a section")));
                }
                match sec {
                    Sec::Generators => gens.push((n, line.to_string())),
                    s => items.push((s, n, line.to_string())),
                }
                continue;
            }
        }
        if !rest.is_empty() {
            match sec {
                Sec::Generators => gens.push((n, rest.to_string())),
                s => items.push((s, n, rest.to_string())),
            }
        }
    }

    let mut sig = LayeredSignature::default();
    let mut ths = Vec::new();
    for (n, l) in &layers {
        if sig.layer(l).is_some() {
            return Err(err(*n, format!("duplicate layer `{l}`")));
        }
        sig.add_layer(l, Default::default());
        ths.push(None);
    }
    for (n, name, body) in bodies {
        let l = sig.layer(&name).ok_or_else(|| err(n, format!("layer `{name}` is not declared in LAYERS")))?;
        if ths[l].is_some() {
            return Err(err(n, format!("layer `{name}` defined twice")));
        }
        let th = parse_mth(&body).map_err(|e| err(n + e.line - 1, e.message))?;
        sig.sigs[l] = th.sig.clone();
        ths[l] = Some(th);
    }
    let ths: Vec<MonTheory> = ths.into_iter().enumerate().map(|(l, t)| t.unwrap_or_else(|| MonTheory::new(sig.sigs[l].clone()))).collect();
    for (n, g) in gens {
        let bad = || err(n, "expected `f : w -> t`");
        let (name, sort) = g.split_once(':').ok_or_else(bad)?;
        let (d, c) = sort.split_once("->").ok_or_else(bad)?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(is_name_char) {
            return Err(err(n, format!("bad generator name `{name}`")));
        }
        if sig.boundary(name).is_some() {
            return Err(err(n, format!("duplicate generator `{name}`")));
        }
        let look = |s: &str| sig.layer(s.trim()).ok_or_else(|| err(n, format!("unknown layer `{}`", s.trim())));
        let (d, c) = (look(d)?, look(c)?);
        sig.add_boundary(name, d, c);
    }

    let mut th = LayeredTheory::from_parts(sig, ths, mode, depth);
    th.structural = structural;
    th.symmetric = symmetric;
    let (mut k1, mut k2) = (0, 0);
    for (s, n, body) in items {
        match s {
            Sec::E0 => {
                let (l, r) = body.split_once('=').ok_or_else(|| err(n, "expected `A = B`"))?;
                let p = |x: &str| parse_ltype(&th.sig, x).map_err(|e| err(n, e.to_string()));
                let (a, b) = (p(l)?, p(r)?);
                th.add_e0(&a, &b).map_err(|e| err(n, e.to_string()))?;
            }
            Sec::E1 => {
                k1 += 1;
                let (name, body) = split_name(&body).unwrap_or((format!("e1_{k1}"), body.as_str()));
                let (l, r) = body.split_once('=').ok_or_else(|| err(n, "expected `lhs = rhs`"))?;
                let p = |x: &str| parse_lterm(&th.sig, x).map_err(|e| err(n, e.to_string()));
                let (a, b) = (p(l)?, p(r)?);
                th.add_e1(&name, a, b).map_err(|e| err(n, e.to_string()))?;
            }
            Sec::Cells => {
                let (name, body) = split_name(&body).ok_or_else(|| err(n, "expected `name : t => s`"))?;
                let (l, r) = body.split_once("=>").ok_or_else(|| err(n, "expected `name : t => s`"))?;
                if th.cell(&name).is_some() {
                    return Err(err(n, format!("duplicate cell `{name}`")));
                }
                let p = |x: &str| parse_lterm(&th.sig, x).map_err(|e| err(n, e.to_string()));
                let (a, b) = (p(l)?, p(r)?);
                th.add_cell(&name, a, b).map_err(|e| err(n, e.to_string()))?;
            }
            Sec::E2 => {
                k2 += 1;
                let (name, body) = split_name(&body).unwrap_or((format!("e2_{k2}"), body.as_str()));
                let (l, r) = body.split_once('=').ok_or_else(|| err(n, "expected `lhs = rhs`"))?;
                let p = |x: &str| parse_twoterm(&th, x).map_err(|e| err(n, e.to_string()));
                let (a, b) = (p(l)?, p(r)?);
                th.add_e2(&name, a, b).map_err(|e| err(n, e.to_string()))?;
            }
            Sec::None | Sec::Generators => unreachable!(),
        }
    }
    Ok(th)
}

pub fn write_lmt(th: &LayeredTheory) -> String {
    let sig = &th.sig;
    let mut out = String::new();
    let _ = writeln!(out, "MODE {}", th.mode);
    let _ = writeln!(out, "STRUCTURAL {}", if th.structural { "on" } else { "off" });
    let _ = writeln!(out, "SYMMETRIC {}", if th.symmetric { "on" } else { "off" });
    if th.universe.depth != DEFAULT_DEPTH {
        let _ = writeln!(out, "DEPTH {}", th.universe.depth);
    }
    let _ = writeln!(out, "LAYERS {}", sig.layers.join(" "));
    for (l, name) in sig.layers.iter().enumerate() {
        let _ = writeln!(out, "LAYER {name} {{");
        for line in write_mth(&th.layer_theories[l]).lines() {
            let _ = writeln!(out, "  {line}");
        }
        out.push_str("}\n");
    }
    if !sig.boundaries.is_empty() {
        out.push_str("GENERATORS\n");
        for b in &sig.boundaries {
            let _ = writeln!(out, "  {} : {} -> {}", b.name, sig.layers[b.dom], sig.layers[b.cod]);
        }
    }
    if !th.e0.is_empty() {
        out.push_str("E0\n");
        for (a, b) in &th.e0 {
            let _ = writeln!(out, "  {} = {}", super::ctype_name(sig, std::slice::from_ref(a)), super::ctype_name(sig, std::slice::from_ref(b)));
        }
    }
    if !th.e1.is_empty() {
        out.push_str("E1\n");
        for e in &th.e1 {
            let _ = writeln!(out, "  {}: {} = {}", e.name, e.lhs.display(sig), e.rhs.display(sig));
        }
    }
    if !th.cells.is_empty() {
        out.push_str("CELLS\n");
        for c in &th.cells {
            let _ = writeln!(out, "  {} : {} => {}", c.name, c.dom.display(sig), c.cod.display(sig));
        }
    }
    if !th.e2.is_empty() {
        out.push_str("E2\n");
        for e in &th.e2 {
            let _ = writeln!(out, "  {}: {} = {}", e.name, e.lhs.display(th), e.rhs.display(th));
        }
    }
    out
}
