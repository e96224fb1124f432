//! `.mth` theory files and `.eq` goal files.
//!
//! ```text
//! USE monoids
//! COLOURS a b
//! GENERATORS
//!   f : a -> b
//!   g : a b ->
//! EQUATIONS
//!   fg: f * id[b] ; g = id[a] * id[b] ; g
//! ```
//!
//! `USE` packs are applied after colours and generators are declared, in
//! file order, so equations may mention pack generators. An `.eq` file has
//! one `lhs = rhs` goal per line.

use std::fmt::Write as _;

use super::theories::apply_pack;
use super::{parse_term, MonSignature, MonTerm, MonTheory};
use crate::format::ParseError;

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

fn content(raw: &str) -> &str {
    raw.split('#').next().unwrap_or("").trim()
}

#[derive(PartialEq)]
enum Sec {
    None,
    Colours,
    Generators,
    Equations,
}

pub fn parse_mth(src: &str) -> Result<MonTheory, ParseError> {
    parse_mth_on(MonSignature::default(), src)
}

/// Parses onto an existing signature.
pub fn parse_mth_on(sig: MonSignature, src: &str) -> Result<MonTheory, ParseError> {
    let mut sec = Sec::None;
    let mut colours = Vec::new();
    let mut gens = Vec::new();
    let mut uses = Vec::new();
    let mut eqs = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let n = i + 1;
        let line = content(raw);
        if line.is_empty() {
            continue;
        }
        let (head, rest) = match line.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim()),
            None => (line, ""),
        };
        let body = match head {
            "USE" => {
                if rest.is_empty() {
                    return Err(err(n, "expected a theory name after USE"));
                }
                uses.extend(rest.split_whitespace().map(|s| (n, s.to_string())));
                continue;
            }
            "COLOURS" | "COLORS" => {
                sec = Sec::Colours;
                rest
            }
            "GENERATORS" => {
                sec = Sec::Generators;
                rest
            }
            "EQUATIONS" => {
                sec = Sec::Equations;
                rest
            }
            _ => line,
        };
        if body.is_empty() {
            continue;
        }
        match sec {
            Sec::None => return Err(err(n, format!("unexpected `{line}` outside a section"))),
            Sec::Colours => colours.extend(body.split_whitespace().map(|c| (n, c.to_string()))),
            Sec::Generators => {
                let (name, sort) = body.split_once(':').ok_or_else(|| err(n, "expected `g : a b -> c`"))?;
                let (d, c) = sort.split_once("->").ok_or_else(|| err(n, "expected `g : a b -> c`"))?;
                let name = name.trim();
                if name.is_empty() || !name.chars().all(super::is_name_char) {
                    return Err(err(n, format!("bad generator name `{name}`")));
                }
                let w = |s: &str| s.split_whitespace().map(str::to_string).collect::<Vec<_>>();
                gens.push((n, name.to_string(), w(d), w(c)));
            }
            Sec::Equations => eqs.push((n, body.to_string())),
        }
    }
    let mut th = MonTheory::new(sig);
    for (n, c) in colours {
        if th.sig.colour(&c).is_some() {
            return Err(err(n, format!("duplicate colour `{c}`")));
        }
        th.sig.add_colour(&c);
    }
    for (n, name, d, c) in gens {
        if th.sig.generator(&name).is_some() {
            return Err(err(n, format!("duplicate generator `{name}`")));
        }
        let look = |ws: &[String]| {
            ws.iter()
                .map(|x| th.sig.colour(x).ok_or_else(|| err(n, format!("unknown colour `{x}`"))))
                .collect::<Result<Vec<_>, _>>()
        };
        let (d, c) = (look(&d)?, look(&c)?);
        th.sig.add_generator(&name, d, c);
    }
    if th.sig.colours.is_empty() && !uses.is_empty() {
        th.sig.add_colour("•");
    }
    for (n, u) in uses {
        apply_pack(&mut th, &u).map_err(|m| err(n, m))?;
    }
    for (k, (n, body)) in eqs.into_iter().enumerate() {
        let (name, body) = split_name(&body).unwrap_or((format!("eq{}", k + 1), body.as_str()));
        let (l, r) = parse_goal(&th.sig, n, body)?;
        th.add_equation(&name, l, r).map_err(|e| err(n, e.to_string()))?;
    }
    Ok(th)
}

fn split_name(body: &str) -> Option<(String, &str)> {
    let (name, rest) = body.split_once(':')?;
    let name = name.trim();
    (!name.is_empty() && name.chars().all(super::is_name_char)).then(|| (name.to_string(), rest))
}

fn parse_goal(sig: &MonSignature, n: usize, body: &str) -> Result<(MonTerm, MonTerm), ParseError> {
    let (l, r) = body.split_once('=').ok_or_else(|| err(n, "expected `lhs = rhs`"))?;
    let p = |s: &str| parse_term(sig, s).map_err(|e| err(n, e.to_string()));
    Ok((p(l)?, p(r)?))
}

/// Goals of an `.eq` file, with their line numbers.
pub fn parse_eq(sig: &MonSignature, src: &str) -> Result<Vec<(usize, MonTerm, MonTerm)>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = content(raw);
        if line.is_empty() {
            continue;
        }
        let body = split_name(line).map(|(_, b)| b).unwrap_or(line);
        let (l, r) = parse_goal(sig, i + 1, body)?;
        out.push((i + 1, l, r));
    }
    Ok(out)
}

/// Flat `.mth` text: colours, all generators and all plain equations.
pub fn write_mth(th: &MonTheory) -> String {
    let sig = &th.sig;
    let mut out = String::new();
    let _ = writeln!(out, "COLOURS {}", sig.colours.join(" "));
    out.push_str("GENERATORS\n");
    for g in &sig.generators {
        let _ = writeln!(out, "  {} : {} -> {}", g.name, sig.word_name(&g.dom), sig.word_name(&g.cod));
    }
    if !th.equations.is_empty() {
        out.push_str("EQUATIONS\n");
        for e in &th.equations {
            let _ = writeln!(out, "  {}: {} = {}", e.name, e.lhs.display(sig), e.rhs.display(sig));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_packs_and_equations() {
        let th = parse_mth("USE monoids\n").unwrap();
        assert_eq!(th.sig.generators.len(), 2);
        assert_eq!(th.equations.len(), 3);
        let src = "COLOURS a b\nGENERATORS\n  f : a -> b\n  g : a b ->\nEQUATIONS\n  fg: f * id[b] ; id[b] * id[b] = id[a] * id[b] ; f * id[b]\n";
        let th = parse_mth(src).unwrap();
        assert_eq!(th.sig.gen(1).cod, Vec::<usize>::new());
        assert_eq!(th.equations[0].name, "fg");
        let back = parse_mth(&write_mth(&th)).unwrap();
        assert_eq!(back.sig, th.sig);
        assert_eq!(back.equations, th.equations);
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse_mth("COLOURS a\nGENERATORS\n  f : a -> q\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_mth("USE monoids\nEQUATIONS\n  m = u\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_mth("USE rings\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_mth("USE monoids\nEQUATIONS\n  m ; = m\n").unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn goal_files() {
        let th = parse_mth("USE monoids\n").unwrap();
        let gs = parse_eq(&th.sig, "# assoc\nm * id[•] ; m = id[•] * m ; m\n").unwrap();
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0].0, 2);
    }
}
